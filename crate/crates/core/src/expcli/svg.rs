use std::fmt::Write as _;
use std::path::Path;

use super::ExpError;
use crate::billiard::{Boundary, PhaseState};

const CURVE_SEGMENTS: usize = 720;
const MARGIN: f64 = 0.1;

/// Formats with 9 significant digits and no trailing zeros.
fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_owned();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).clamp(0, 17) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_owned();
    }
    if s == "-0" {
        s = "0".to_owned();
    }
    s
}

fn sample_curve<B: Boundary + ?Sized>(curve: &B) -> Vec<[f64; 2]> {
    let (lo, hi) = curve.domain();
    let n = if curve.is_closed() {
        CURVE_SEGMENTS
    } else {
        CURVE_SEGMENTS + 1
    };
    (0..n)
        .map(|k| curve.point(lo + (hi - lo) * k as f64 / CURVE_SEGMENTS as f64))
        .collect()
}

fn points_attr(points: &[[f64; 2]]) -> String {
    points
        .iter()
        .map(|p| format!("{},{}", num(p[0]), num(p[1])))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Draws the boundary, the orbit's chord polyline and, when given, the
/// caustic on top. The viewBox is the boundary's bounding box plus a 10%
/// margin; y points up.
pub fn orbit_svg<B: Boundary + ?Sized, C: Boundary + ?Sized>(
    states: &[PhaseState],
    boundary: &B,
    caustic: Option<&C>,
) -> Result<String, ExpError> {
    if states.is_empty() {
        return Err(ExpError::EmptyOrbit);
    }
    let outline = sample_curve(boundary);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &outline {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let pad = MARGIN * (x1 - x0).max(y1 - y0);
    let (x0, x1, y0, y1) = (x0 - pad, x1 + pad, y0 - pad, y1 + pad);
    let stroke = num(2e-3 * (x1 - x0).max(y1 - y0));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        num(x0),
        num(-y1),
        num(x1 - x0),
        num(y1 - y0),
        (800.0 * (y1 - y0) / (x1 - x0)).round()
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" fill="none" stroke-width="{stroke}">"#);
    let tag = if boundary.is_closed() { "polygon" } else { "polyline" };
    let _ = writeln!(
        s,
        r#"<{tag} class="boundary" stroke="black" points="{}"/>"#,
        points_attr(&outline)
    );
    let path: Vec<[f64; 2]> = states.iter().map(|st| st.point()).collect();
    let _ = writeln!(
        s,
        r#"<polyline class="orbit" stroke="steelblue" points="{}"/>"#,
        points_attr(&path)
    );
    if let Some(c) = caustic {
        let tag = if c.is_closed() { "polygon" } else { "polyline" };
        let _ = writeln!(
            s,
            r#"<{tag} class="caustic" stroke="firebrick" stroke-dasharray="{} {}" points="{}"/>"#,
            stroke,
            stroke,
            points_attr(&sample_curve(c))
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

/// [`orbit_svg`] written to `path`.
pub fn render_orbit_svg<B: Boundary + ?Sized, C: Boundary + ?Sized>(
    states: &[PhaseState],
    boundary: &B,
    caustic: Option<&C>,
    path: &Path,
) -> Result<(), ExpError> {
    let text = orbit_svg(states, boundary, caustic)?;
    std::fs::write(path, text).map_err(|source| ExpError::Write {
        path: path.to_owned(),
        source,
    })
}
