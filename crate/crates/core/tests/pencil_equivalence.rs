use caustica::billiard::{Boundary, ConicBoundary, FieldKind, SurfaceModel, TransversalField};
use caustica::integrals::SamplingOptions;
use caustica::pencil_equivalence::{
    a_orthogonal_direction, degenerate_pencil_limit, equivalence_check, normalize_form, FormSignature, LIMIT_STEPS,
};
use caustica::projgeo::{adjugate, Conic};
use caustica::reflectors::SpaceInvolution;
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};

/// A table, a companion conic, and an x-side member of their dual pencil.
struct Pencil {
    table: ConicBoundary,
    companion: Conic,
    members: Vec<Matrix3<f64>>,
}

fn member(table: &Conic, companion: &Conic, lambda: f64) -> Matrix3<f64> {
    adjugate(&(table.adjugate() - companion.adjugate() * lambda))
}

/// Spherical: members for λ in (0.3, 0.7) of the pencil of the 2:1 ellipse
/// and the concentric circle of radius 1/2 are definite.
fn spherical() -> Pencil {
    let (c, s) = (Conic::ellipse(2.0, 1.0), Conic::circle(0.0, 0.0, 0.5));
    let members = vec![member(&c, &s, 0.5), member(&c, &s, 0.7)];
    Pencil {
        table: ConicBoundary::ellipse(2.0, 1.0),
        companion: s,
        members,
    }
}

/// Hyperbolic: signature (1, 2) members whose absolute cuts off arcs of the table.
fn hyperbolic() -> Pencil {
    let (c, s) = (Conic::ellipse(2.0, 1.0), Conic::ellipse(0.5, 0.8));
    let members = vec![member(&c, &s, 0.3), member(&c, &s, 0.5)];
    Pencil {
        table: ConicBoundary::ellipse(2.0, 1.0),
        companion: s,
        members,
    }
}

/// Concentric circles: the rank-one member at λ = 4 yields the form diag(1, 1, 0).
fn planar() -> Pencil {
    let (c, s) = (Conic::unit_circle(), Conic::circle(0.0, 0.0, 0.5));
    let limit = degenerate_pencil_limit(&c.adjugate(), &s.adjugate(), 4.0, &LIMIT_STEPS).unwrap();
    let members = vec![limit, member(&c, &s, 2.0)];
    Pencil {
        table: ConicBoundary::circle(0.0, 0.0, 1.0),
        companion: s,
        members,
    }
}

fn sine(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] * b[1] - a[1] * b[0]).abs() / (a[0].hypot(a[1]) * b[0].hypot(b[1]))
}

#[test]
fn pencils_have_the_intended_signatures() {
    let sig = |m: &Matrix3<f64>| normalize_form(m).unwrap().model;
    assert_eq!(sig(&spherical().members[0]), SurfaceModel::Sphere);
    assert_eq!(sig(&hyperbolic().members[0]), SurfaceModel::Hyperbolic);
    assert_eq!(sig(&planar().members[0]), SurfaceModel::Plane);
}

#[test]
fn pole_and_orthogonality_fields_agree() {
    for pencil in [spherical(), hyperbolic(), planar()] {
        let b = &pencil.table;
        let field = TransversalField::new(
            FieldKind::DualPencil {
                companion: pencil.companion.clone(),
            },
            b,
        )
        .unwrap();
        let (lo, hi) = b.domain();
        for k in 0..200 {
            let t = lo + (hi - lo) * (k as f64 + 0.5) / 200.0;
            let Ok(pole) = field.direction(b, t) else { continue };
            for m in &pencil.members {
                let d = a_orthogonal_direction(b, m, t).unwrap();
                assert!(sine(pole, d) < 1e-10, "t = {t}: {}", sine(pole, d));
            }
        }
    }
}

#[test]
fn equivalence_holds_on_all_three_models() {
    let opts = SamplingOptions {
        samples: 100,
        seed: 13,
        exclusion: 1e-3,
        tolerance: 1e-9,
    };
    for (pencil, model) in [
        (spherical(), SurfaceModel::Sphere),
        (hyperbolic(), SurfaceModel::Hyperbolic),
        (planar(), SurfaceModel::Plane),
    ] {
        let field = TransversalField::new(
            FieldKind::DualPencil {
                companion: pencil.companion.clone(),
            },
            &pencil.table,
        )
        .unwrap();
        let report = equivalence_check(&pencil.table, &field, &pencil.members[0], &opts).unwrap();
        assert_eq!(report.model, model);
        assert_eq!(report.samples, 100);
        assert!(report.passed(), "{report:?}");
    }
}

#[test]
fn wrong_form_breaks_equivalence() {
    let pencil = spherical();
    let field = TransversalField::new(
        FieldKind::DualPencil {
            companion: pencil.companion,
        },
        &pencil.table,
    )
    .unwrap();
    let opts = SamplingOptions {
        samples: 50,
        seed: 1,
        exclusion: 1e-3,
        tolerance: 1e-9,
    };
    let report = equivalence_check(&pencil.table, &field, &Matrix3::identity(), &opts).unwrap();
    assert!(report.max_discrepancy > 1e-3);
}

#[test]
fn degenerate_limit_is_diag_110() {
    let l = planar().members[0];
    assert!((l - Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0))).amax() < 1e-7);
    assert_eq!(
        FormSignature::of(&l),
        FormSignature {
            positive: 2,
            negative: 0,
            zero: 1
        }
    );
}

fn random_form(rng: &mut impl Rng, eigen: [f64; 3]) -> Matrix3<f64> {
    let raw = Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    let q = raw.qr().q();
    let scaled: [f64; 3] = eigen.map(|e| e * rng.gen_range(0.2..5.0));
    q * Matrix3::from_diagonal(&Vector3::from(scaled)) * q.transpose()
}

#[test]
fn congruence_identity_on_random_forms() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    for signs in [
        [1.0, 1.0, 1.0],
        [-1.0, -1.0, -1.0],
        [1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0],
        [1.0, 1.0, 0.0],
        [-1.0, -1.0, 0.0],
    ] {
        for _ in 0..1000 {
            let a = random_form(&mut rng, signs);
            let r = normalize_form(&a).unwrap();
            assert!(
                r.congruence_residual(&a) < 1e-9,
                "{signs:?}: {}",
                r.congruence_residual(&a)
            );
        }
    }
}

#[test]
fn involution_is_unique() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    for form in [
        Matrix3::identity(),
        Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)),
    ] {
        for _ in 0..100 {
            let h1 = Vector3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
            let h2 = Vector3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
            let (Ok(a), Ok(b)) = (
                SpaceInvolution::fixing_plane(&form, &h1, &h2),
                SpaceInvolution::from_eigenbasis(&form, &h1, &h2),
            ) else {
                continue;
            };
            assert!((a.matrix() - b.matrix()).norm() < 1e-10 * a.matrix().norm());
        }
    }
}
