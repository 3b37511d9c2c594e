use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::projgeo::{adjugate, conic_conic_intersection, Conic, HomogeneousPoint};
use crate::scalar::tol;
use num_complex::Complex64;

fn regular_combination(upper: &Matrix3<f64>, lower: &Matrix3<f64>, lambda: f64) -> Result<Matrix3<f64>> {
    let m = upper - lower * lambda;
    let scale = m.norm().powi(3);
    if scale == 0.0 || m.determinant().abs() <= tol::RANK * scale {
        return Err(Error::SingularParameter { lambda });
    }
    Ok(m)
}

/// Conics `adj(B - λA)`: confocal to the anchor `adj(B)` with respect to
/// the metric form `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfocalPencil {
    anchor: Matrix3<f64>,
    metric: Matrix3<f64>,
}

impl ConfocalPencil {
    pub fn new(anchor: Matrix3<f64>, metric: Matrix3<f64>) -> Self {
        Self {
            anchor: (anchor + anchor.transpose()) * 0.5,
            metric: (metric + metric.transpose()) * 0.5,
        }
    }

    /// The classical family `x^2/(a^2-λ) + y^2/(b^2-λ) = 1`.
    pub fn euclidean(a: f64, b: f64) -> Self {
        Self::new(
            Matrix3::from_diagonal(&Vector3::new(a * a, b * b, -1.0)),
            Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0)),
        )
    }

    /// The Euclidean confocal family of a central conic, scaled so that
    /// `λ` is the usual shift of the squared semi-axes.
    pub fn of_conic(c: &Conic) -> Result<Self> {
        let adj = c.adjugate();
        let pivot = adj[(2, 2)];
        if pivot.abs() <= tol::RANK * adj.norm() {
            return Err(Error::UnsupportedConic);
        }
        Ok(Self::new(
            -adj / pivot,
            Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 0.0)),
        ))
    }

    pub fn anchor(&self) -> &Matrix3<f64> {
        &self.anchor
    }

    pub fn metric(&self) -> &Matrix3<f64> {
        &self.metric
    }

    pub fn member(&self, lambda: f64) -> Result<Conic> {
        let m = regular_combination(&self.anchor, &self.metric, lambda)?;
        Conic::from_matrix(adjugate(&m))
    }

    /// `B - λA`: the member in line coordinates.
    pub fn dual_member(&self, lambda: f64) -> Result<Conic> {
        Conic::from_matrix(regular_combination(&self.anchor, &self.metric, lambda)?)
    }
}

/// Dual pencil `U - λA` of conics in the moment-vector plane.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPencilFamily {
    upper: Conic,
    lower: Conic,
}

impl DualPencilFamily {
    pub fn new(upper: Conic, lower: Conic) -> Result<Self> {
        if upper.proj_eq(&lower, tol::ALGEBRAIC) {
            return Err(Error::ProportionalConics);
        }
        Ok(Self { upper, lower })
    }

    /// The family containing the duals of a table conic and a companion.
    pub fn from_table(table: &Conic, companion: &Conic) -> Result<Self> {
        Self::new(
            Conic::from_matrix(table.adjugate())?,
            Conic::from_matrix(companion.adjugate())?,
        )
    }

    pub fn upper(&self) -> &Conic {
        &self.upper
    }

    pub fn lower(&self) -> &Conic {
        &self.lower
    }

    /// `U - λA`, on the moment-vector side.
    pub fn dual_member(&self, lambda: f64) -> Result<Conic> {
        Conic::from_matrix(regular_combination(self.upper.matrix(), self.lower.matrix(), lambda)?)
    }

    /// `adj(U - λA)`: a caustic of every table in the family.
    pub fn member(&self, lambda: f64) -> Result<Conic> {
        let m = regular_combination(self.upper.matrix(), self.lower.matrix(), lambda)?;
        Conic::from_matrix(adjugate(&m))
    }

    /// Common points of all M-side members (at most four, complex allowed).
    pub fn base_points(&self) -> Result<Vec<HomogeneousPoint<Complex64>>> {
        conic_conic_intersection(&self.upper, &self.lower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_member_is_the_ellipse() {
        let p = ConfocalPencil::euclidean(2.0, 1.0);
        assert!(p.member(0.0).unwrap().proj_eq(&Conic::ellipse(2.0, 1.0), 1e-14));
        assert!(p
            .member(0.5)
            .unwrap()
            .proj_eq(&Conic::ellipse(3.5f64.sqrt(), 0.5f64.sqrt()), 1e-14));
        assert!(matches!(p.member(1.0), Err(Error::SingularParameter { .. })));
    }

    #[test]
    fn family_of_a_table_conic() {
        let p = ConfocalPencil::of_conic(&Conic::ellipse(2.0, 1.0)).unwrap();
        assert!((p.anchor() - Matrix3::from_diagonal(&Vector3::new(4.0, 1.0, -1.0))).amax() < 1e-15);
        assert!(p
            .member(0.5)
            .unwrap()
            .proj_eq(&Conic::ellipse(3.5f64.sqrt(), 0.5f64.sqrt()), 1e-14));
        assert_eq!(
            ConfocalPencil::of_conic(&Conic::parabola()).unwrap_err(),
            Error::UnsupportedConic
        );
    }

    #[test]
    fn foci_are_shared() {
        // the foci (±c, 0) of x^2/α + y^2/β = 1 have c^2 = α - β
        let p = ConfocalPencil::euclidean(2.0, 1.0);
        for lambda in [-1.0, 0.3, 0.5, 0.9] {
            let c = p.member(lambda).unwrap().coefficients();
            let (alpha, beta) = (-c[5] / c[0], -c[5] / c[3]);
            assert!((alpha - beta - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_family_is_concentric() {
        let u = Conic::from_matrix(Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0))).unwrap();
        let f = DualPencilFamily::new(u, Conic::isotropic()).unwrap();
        for lambda in [-3.0, 0.5] {
            let r2 = 1.0 - lambda;
            assert!(f
                .member(lambda)
                .unwrap()
                .proj_eq(&Conic::circle(0.0, 0.0, r2.sqrt()), 1e-14));
        }
        assert!(f.dual_member(0.0).unwrap().proj_eq(f.upper(), 1e-15));
    }

    #[test]
    fn base_points_lie_on_every_member() {
        let u = Conic::from_coefficients([2.0, 0.3, 0.1, 1.0, -0.2, -1.0]).unwrap();
        let a = Conic::from_coefficients([1.0, -0.4, 0.0, 3.0, 0.5, -2.0]).unwrap();
        let f = DualPencilFamily::new(u, a).unwrap();
        let base = f.base_points().unwrap();
        assert!(!base.is_empty() && base.len() <= 4);
        let third = f.dual_member(0.37).unwrap().to_complex();
        for p in &base {
            assert!(third.point_residual(p) < 1e-10);
        }
    }
}
