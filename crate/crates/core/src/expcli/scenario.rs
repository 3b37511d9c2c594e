use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::Matrix3;
use serde::Deserialize;

use super::ExpError;
use crate::billiard::{ExoticCase, FieldKind, SurfaceModel};
use crate::projgeo::Conic;

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_EXCLUSION: f64 = 1e-3;
pub const DEFAULT_BOUNCES: usize = 50;

/// What a scenario runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Simulate,
    VerifyCaustic,
    VerifyIntegral,
    VerifyInvariantCurve,
    ClassifyPencil,
    Dualize,
    Equivalence,
}

impl ExperimentKind {
    pub const ALL: [Self; 7] = [
        Self::Simulate,
        Self::VerifyCaustic,
        Self::VerifyIntegral,
        Self::VerifyInvariantCurve,
        Self::ClassifyPencil,
        Self::Dualize,
        Self::Equivalence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Simulate => "simulate",
            Self::VerifyCaustic => "verify-caustic",
            Self::VerifyIntegral => "verify-integral",
            Self::VerifyInvariantCurve => "verify-invariant-curve",
            Self::ClassifyPencil => "classify-pencil",
            Self::Dualize => "dualize",
            Self::Equivalence => "equivalence",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = ExpError;
    fn from_str(s: &str) -> Result<Self, ExpError> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid("scenario.kind", format!("unknown experiment kind {s:?}")))
    }
}

/// Which rational integral a check uses.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegralSpec {
    /// The canonical integral of the table's exotic field.
    Canonical,
    /// `<B M, M> / <A M, M>` for the Euclidean confocal family of the table.
    Confocal,
    /// `<adj(C) M, M> / <adj(S) M, M>` for a dual-pencil field with companion `S`.
    DualPencil,
    /// An explicit ratio of two quadratic forms in the moment vector.
    Pencil { upper: Conic, lower: Conic },
    /// `H^2 / (M1^2 + M2^2)^2` for a quadratic form `H` in the moment vector.
    InvariantCurve { curve: Conic },
}

/// The conic a caustic check targets.
#[derive(Debug, Clone, PartialEq)]
pub enum CausticTarget {
    Conic(Conic),
    /// Member of the table's Euclidean confocal family.
    Confocal(f64),
    /// The absolute of the table's surface model.
    Absolute,
}

/// The symmetric form of a pencil experiment.
#[derive(Debug, Clone, PartialEq)]
pub enum FormSpec {
    Explicit(Matrix3<f64>),
    /// `adj(adj(C) - λ adj(S))` for the table `C` and the field's companion `S`.
    Member(f64),
    /// The projective limit of the members at a rank-one parameter.
    Limit(f64),
}

/// Kind-specific parameters, validated at parse time.
#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Simulate {
        start: [f64; 2],
        direction: [f64; 2],
        bounces: usize,
        caustic: Option<CausticTarget>,
    },
    VerifyCaustic {
        target: CausticTarget,
    },
    VerifyIntegral {
        integral: IntegralSpec,
    },
    /// `curve` is on the moment-vector side.
    VerifyInvariantCurve {
        curve: InvariantTarget,
    },
    ClassifyPencil {
        form: FormSpec,
    },
    Dualize {
        integral: Option<IntegralSpec>,
    },
    Equivalence {
        form: FormSpec,
    },
}

/// Invariant curve of a dual billiard, in moment-vector coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum InvariantTarget {
    Conic(Conic),
    /// `B - λA` for the table's Euclidean confocal family.
    Confocal(f64),
}

impl Experiment {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Self::Simulate { .. } => ExperimentKind::Simulate,
            Self::VerifyCaustic { .. } => ExperimentKind::VerifyCaustic,
            Self::VerifyIntegral { .. } => ExperimentKind::VerifyIntegral,
            Self::VerifyInvariantCurve { .. } => ExperimentKind::VerifyInvariantCurve,
            Self::ClassifyPencil { .. } => ExperimentKind::ClassifyPencil,
            Self::Dualize { .. } => ExperimentKind::Dualize,
            Self::Equivalence { .. } => ExperimentKind::Equivalence,
        }
    }
}

/// The table: a boundary conic, its line field, and an optional surface model.
#[derive(Debug, Clone, PartialEq)]
pub struct TableSpec {
    pub conic: Conic,
    pub field: FieldKind,
    pub model: Option<SurfaceModel>,
}

/// Relative output paths; resolved against the output root at run time.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
}

/// One parsed and validated scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub table: TableSpec,
    pub experiment: Experiment,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub exclusion: f64,
    pub output: OutputPaths,
}

/// Command-line values that replace the file's.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    scenario: Option<RawHeader>,
    table: Option<RawTable>,
    #[serde(default)]
    check: RawCheck,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHeader {
    name: Option<String>,
    kind: Option<String>,
    samples: Option<usize>,
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    conic: Option<[f64; 6]>,
    field: Option<String>,
    case: Option<String>,
    n: Option<u32>,
    companion: Option<[f64; 6]>,
    form: Option<[f64; 6]>,
    model: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawCheck {
    tolerance: Option<f64>,
    exclusion: Option<f64>,
    integral: Option<String>,
    upper: Option<[f64; 6]>,
    lower: Option<[f64; 6]>,
    curve: Option<[f64; 6]>,
    caustic: Option<[f64; 6]>,
    lambda: Option<f64>,
    absolute: Option<bool>,
    invariant: Option<[f64; 6]>,
    form: Option<[f64; 6]>,
    member: Option<f64>,
    limit: Option<f64>,
    start: Option<[f64; 2]>,
    direction: Option<[f64; 2]>,
    bounces: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: Option<PathBuf>,
    svg: Option<PathBuf>,
}

fn missing(key: &str) -> ExpError {
    ExpError::MissingKey(key.to_owned())
}

fn invalid(key: &str, reason: impl Into<String>) -> ExpError {
    ExpError::InvalidValue {
        key: key.to_owned(),
        reason: reason.into(),
    }
}

fn conic(key: &str, coefficients: [f64; 6]) -> Result<Conic, ExpError> {
    Conic::from_coefficients(coefficients).map_err(|e| invalid(key, e.to_string()))
}

fn form(key: &str, c: [f64; 6]) -> Result<Matrix3<f64>, ExpError> {
    if c.iter().any(|x| !x.is_finite()) {
        return Err(invalid(key, "non-finite coefficient"));
    }
    Ok(Matrix3::new(c[0], c[1], c[2], c[1], c[3], c[4], c[2], c[4], c[5]))
}

fn positive(key: &str, value: f64) -> Result<f64, ExpError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(key, format!("must be positive, got {value}")))
    }
}

impl Scenario {
    /// Reads and validates a scenario file.
    pub fn load(path: &Path) -> Result<Self, ExpError> {
        let text = std::fs::read_to_string(path).map_err(|source| ExpError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ExpError> {
        let raw: RawFile = toml::from_str(text).map_err(|e| ExpError::Parse(e.message().to_owned()))?;
        let header = raw.scenario.ok_or_else(|| missing("scenario"))?;
        let name = header.name.ok_or_else(|| missing("scenario.name"))?;
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(invalid("scenario.name", "must be a non-empty file stem"));
        }
        let kind: ExperimentKind = header.kind.ok_or_else(|| missing("scenario.kind"))?.parse()?;
        let samples = header.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(invalid("scenario.samples", "must be at least 1"));
        }
        let table = parse_table(raw.table.ok_or_else(|| missing("table"))?)?;
        let check = raw.check;
        let tolerance = positive("check.tolerance", check.tolerance.unwrap_or(DEFAULT_TOLERANCE))?;
        let exclusion = positive("check.exclusion", check.exclusion.unwrap_or(DEFAULT_EXCLUSION))?;
        let experiment = parse_experiment(kind, &table, &check)?;
        let wants_svg = kind == ExperimentKind::Simulate;
        let output = OutputPaths {
            csv: raw.output.csv.unwrap_or_else(|| PathBuf::from(format!("{name}.csv"))),
            svg: raw
                .output
                .svg
                .or_else(|| wants_svg.then(|| PathBuf::from(format!("{name}.svg")))),
        };
        Ok(Self {
            name,
            table,
            experiment,
            samples,
            seed: header.seed.unwrap_or(0),
            tolerance,
            exclusion,
            output,
        })
    }

    pub fn kind(&self) -> ExperimentKind {
        self.experiment.kind()
    }

    pub fn apply(&mut self, overrides: &Overrides) -> Result<(), ExpError> {
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(samples) = overrides.samples {
            if samples == 0 {
                return Err(invalid("--samples", "must be at least 1"));
            }
            self.samples = samples;
        }
        if let Some(tol) = overrides.tolerance {
            self.tolerance = positive("--tol", tol)?;
        }
        Ok(())
    }
}

fn parse_table(raw: RawTable) -> Result<TableSpec, ExpError> {
    let table = conic("table.conic", raw.conic.ok_or_else(|| missing("table.conic"))?)?;
    let field = match raw.field.as_deref().unwrap_or("normal") {
        "normal" => FieldKind::Normal,
        "dual-pencil" => FieldKind::DualPencil {
            companion: conic(
                "table.companion",
                raw.companion.ok_or_else(|| missing("table.companion"))?,
            )?,
        },
        "exotic" => {
            let tag = raw.case.ok_or_else(|| missing("table.case"))?;
            FieldKind::Exotic(ExoticCase::parse(&tag, raw.n).map_err(|e| invalid("table.case", e.to_string()))?)
        }
        "form-orthogonal" => FieldKind::FormOrthogonal {
            form: form("table.form", raw.form.ok_or_else(|| missing("table.form"))?)?,
        },
        other => return Err(invalid("table.field", format!("unknown field kind {other:?}"))),
    };
    let model = match raw.model.as_deref() {
        None => None,
        Some("plane") => Some(SurfaceModel::Plane),
        Some("sphere") => Some(SurfaceModel::Sphere),
        Some("hyperbolic") => Some(SurfaceModel::Hyperbolic),
        Some(other) => return Err(invalid("table.model", format!("unknown surface model {other:?}"))),
    };
    Ok(TableSpec {
        conic: table,
        field,
        model,
    })
}

fn parse_integral(table: &TableSpec, check: &RawCheck) -> Result<Option<IntegralSpec>, ExpError> {
    let Some(name) = check.integral.as_deref() else {
        return Ok(None);
    };
    let spec = match name {
        "canonical" => {
            if !matches!(table.field, FieldKind::Exotic(_)) {
                return Err(invalid("check.integral", "canonical integrals need an exotic field"));
            }
            IntegralSpec::Canonical
        }
        "confocal" => IntegralSpec::Confocal,
        "dual-pencil" => {
            if !matches!(table.field, FieldKind::DualPencil { .. }) {
                return Err(invalid(
                    "check.integral",
                    "dual-pencil integrals need a dual-pencil field",
                ));
            }
            IntegralSpec::DualPencil
        }
        "pencil" => IntegralSpec::Pencil {
            upper: conic("check.upper", check.upper.ok_or_else(|| missing("check.upper"))?)?,
            lower: conic("check.lower", check.lower.ok_or_else(|| missing("check.lower"))?)?,
        },
        "invariant-curve" => IntegralSpec::InvariantCurve {
            curve: conic("check.curve", check.curve.ok_or_else(|| missing("check.curve"))?)?,
        },
        other => return Err(invalid("check.integral", format!("unknown integral {other:?}"))),
    };
    Ok(Some(spec))
}

fn parse_caustic(table: &TableSpec, check: &RawCheck) -> Result<Option<CausticTarget>, ExpError> {
    if check.absolute == Some(true) {
        return match table.model {
            Some(SurfaceModel::Sphere | SurfaceModel::Hyperbolic) => Ok(Some(CausticTarget::Absolute)),
            _ => Err(invalid(
                "check.absolute",
                "needs table.model = \"sphere\" or \"hyperbolic\"",
            )),
        };
    }
    match (check.caustic, check.lambda) {
        (Some(c), _) => Ok(Some(CausticTarget::Conic(conic("check.caustic", c)?))),
        (None, Some(lambda)) => Ok(Some(CausticTarget::Confocal(lambda))),
        (None, None) => Ok(None),
    }
}

fn parse_form(check: &RawCheck, table: &TableSpec) -> Result<FormSpec, ExpError> {
    let pencil = || {
        if matches!(table.field, FieldKind::DualPencil { .. }) {
            Ok(())
        } else {
            Err(invalid("table.field", "pencil members need a dual-pencil field"))
        }
    };
    match (check.form, check.member, check.limit) {
        (Some(c), None, None) => Ok(FormSpec::Explicit(form("check.form", c)?)),
        (None, Some(lambda), None) => pencil().map(|_| FormSpec::Member(lambda)),
        (None, None, Some(lambda)) => pencil().map(|_| FormSpec::Limit(lambda)),
        (None, None, None) => Err(missing("check.form")),
        _ => Err(invalid("check.form", "give exactly one of form, member, limit")),
    }
}

fn parse_experiment(kind: ExperimentKind, table: &TableSpec, check: &RawCheck) -> Result<Experiment, ExpError> {
    Ok(match kind {
        ExperimentKind::Simulate => {
            let direction = check.direction.ok_or_else(|| missing("check.direction"))?;
            if direction == [0.0, 0.0] {
                return Err(invalid("check.direction", "must be nonzero"));
            }
            Experiment::Simulate {
                start: check.start.ok_or_else(|| missing("check.start"))?,
                direction,
                bounces: check.bounces.unwrap_or(DEFAULT_BOUNCES),
                caustic: parse_caustic(table, check)?,
            }
        }
        ExperimentKind::VerifyCaustic => Experiment::VerifyCaustic {
            target: parse_caustic(table, check)?.ok_or_else(|| missing("check.caustic"))?,
        },
        ExperimentKind::VerifyIntegral => Experiment::VerifyIntegral {
            integral: parse_integral(table, check)?.ok_or_else(|| missing("check.integral"))?,
        },
        ExperimentKind::VerifyInvariantCurve => Experiment::VerifyInvariantCurve {
            curve: match (check.invariant, check.lambda) {
                (Some(c), _) => InvariantTarget::Conic(conic("check.invariant", c)?),
                (None, Some(lambda)) => InvariantTarget::Confocal(lambda),
                (None, None) => return Err(missing("check.invariant")),
            },
        },
        ExperimentKind::ClassifyPencil => Experiment::ClassifyPencil {
            form: parse_form(check, table)?,
        },
        ExperimentKind::Dualize => Experiment::Dualize {
            integral: parse_integral(table, check)?,
        },
        ExperimentKind::Equivalence => Experiment::Equivalence {
            form: parse_form(check, table)?,
        },
    })
}
