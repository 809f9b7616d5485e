//! Fisher geometry of the normal and Student-t families as 2-dimensional
//! statistical Lie groups.
//!
//! Both families live on the solvable group `G(nu1, nu2)` with the metric
//! `(nu1^2 dx^2 + nu2^2 dy^2) / y^2` and orthonormal frame
//! `e1 = (y/nu1) d_x`, `e2 = (y/nu2) d_y`, so that `[e1, e2] = -(1/nu2) e1`.

use nalgebra::Matrix2;

use crate::algebra::g2d;
use crate::error::{Error, Result};
use crate::geometry::InnerProduct;
use crate::statistical::{CubicForm, StatisticalStructure};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Family of distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Normal distributions, `x = mu`, `y = sigma`.
    Normal,
    /// Student t with `nu` degrees of freedom (any positive real).
    T(TModel),
}

impl Model {
    /// `(nu1, nu2)` of the metric `(nu1^2 dx^2 + nu2^2 dy^2) / y^2`.
    pub fn nu_pair(&self) -> (f64, f64) {
        match self {
            Model::Normal => (1.0, SQRT_2),
            Model::T(t) => (t.nu1(), t.nu2()),
        }
    }

    /// Skewness scale `s`: `K(e1)e1 = s e2`, `K(e1)e2 = s e1`, `K(e2)e2 = 2s e2`.
    pub fn skew_scale(&self) -> f64 {
        match self {
            Model::Normal => SQRT_2,
            Model::T(t) => t.skew_scale(),
        }
    }

    pub fn structure(&self) -> StatisticalStructure {
        let (_, nu2) = self.nu_pair();
        let s = self.skew_scale();
        let cubic = CubicForm::from_entries(2, &[(0, 0, 1, s), (1, 1, 1, 2.0 * s)]).expect("indices in range");
        StatisticalStructure::new(g2d(nu2).expect("nu2 > 0"), InnerProduct::orthonormal(2), cubic)
            .expect("dimensions agree")
    }
}

/// Student t family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TModel {
    nu: f64,
}

impl TModel {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("degrees of freedom must be positive, got {nu}")));
        }
        Ok(Self { nu })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `sqrt((nu + 1) / (nu + 3))`.
    pub fn nu1(&self) -> f64 {
        ((self.nu + 1.0) / (self.nu + 3.0)).sqrt()
    }

    /// `sqrt(2 nu / (nu + 3))`.
    pub fn nu2(&self) -> f64 {
        (2.0 * self.nu / (self.nu + 3.0)).sqrt()
    }

    /// `sqrt(2 (nu + 3)) (nu - 1) / (sqrt(nu) (nu + 5))`.
    pub fn skew_scale(&self) -> f64 {
        let nu = self.nu;
        (2.0 * (nu + 3.0)).sqrt() * (nu - 1.0) / (nu.sqrt() * (nu + 5.0))
    }
}

/// The normal family: `g2d(sqrt 2)` with `K(e1)e1 = sqrt2 e2`,
/// `K(e1)e2 = sqrt2 e1`, `K(e2)e2 = 2 sqrt2 e2`.
pub fn normal_structure() -> StatisticalStructure {
    Model::Normal.structure()
}

/// The t family with `nu` degrees of freedom, built from the frame skewness table.
pub fn t_structure(nu: f64) -> Result<StatisticalStructure> {
    Ok(Model::T(TModel::new(nu)?).structure())
}

/// Constant `k` with `R^(alpha)(X,Y)Z = k (g(Y,Z)X - g(Z,X)Y)` on the t family.
pub fn t_curvature_constant(nu: f64, alpha: f64) -> Result<f64> {
    TModel::new(nu)?;
    let a = alpha * (nu - 1.0) / (nu + 5.0);
    Ok((nu + 3.0) / (2.0 * nu) * (a + 1.0) * (a - 1.0))
}

/// `(nu + 5) / (nu - 1)`: the `alpha` for which `nabla^(alpha)` is flat.
pub fn flat_alpha(nu: f64) -> Result<f64> {
    TModel::new(nu)?;
    if nu == 1.0 {
        return Err(Error::InvalidParameter("no flat alpha-connection at nu = 1 (K vanishes)".into()));
    }
    Ok((nu + 5.0) / (nu - 1.0))
}

/// q-normal index to degrees of freedom, `(3 - q) / (q - 1)` for `1 < q < 3`.
pub fn q_to_nu(q: f64) -> Result<f64> {
    if !(q > 1.0 && q < 3.0) {
        return Err(Error::InvalidParameter(format!("q must lie in (1, 3), got {q}")));
    }
    Ok((3.0 - q) / (q - 1.0))
}

/// Coordinate Gram matrix `diag(nu1^2, nu2^2) / y^2` at `(x, y)`.
pub fn coordinate_metric(model: &Model, x: f64, y: f64) -> Result<Matrix2<f64>> {
    if !(y > 0.0 && y.is_finite() && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("point must have y > 0, got ({x}, {y})")));
    }
    let (nu1, nu2) = model.nu_pair();
    Ok(Matrix2::new(nu1 * nu1, 0.0, 0.0, nu2 * nu2) / (y * y))
}

/// Orthonormal frame `e1 = (y/nu1) d_x`, `e2 = (y/nu2) d_y` as coordinate columns.
pub fn coordinate_frame(model: &Model, y: f64) -> Matrix2<f64> {
    let (nu1, nu2) = model.nu_pair();
    Matrix2::new(y / nu1, 0.0, 0.0, y / nu2)
}
