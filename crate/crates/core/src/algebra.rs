//! Lie algebras given by structure constants, the preset catalog and
//! unimodularity.

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::error::{Error, Result};
use crate::linalg;
use crate::tensor::{max_abs, Tensor3};

/// Absolute tolerance for antisymmetry and Jacobi checks.
pub const VALIDITY_TOL: f64 = 1e-9;

/// A finite-dimensional real Lie algebra, `[e_i, e_j] = sum_k c[[i, j, k]] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    c: Tensor3,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(c: Tensor3) -> Result<Self> {
        if c.dim() == 0 {
            return Err(Error::InvalidParameter("algebra dimension must be positive".into()));
        }
        let n = c.dim();
        let mut asym: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    asym = asym.max((c[[i, j, k]] + c[[j, i, k]]).abs());
                }
            }
        }
        if asym > VALIDITY_TOL {
            return Err(Error::NotAntisymmetric(asym));
        }
        let alg = Self { c };
        let jac = alg.jacobi_defect();
        if jac > VALIDITY_TOL {
            return Err(Error::JacobiViolated(jac));
        }
        Ok(alg)
    }

    /// Builds the algebra from the brackets `[e_i, e_j] += v e_k` (0-based),
    /// filling in the antisymmetric partner automatically.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut c = Tensor3::zeros(dim);
        for &(i, j, k, v) in brackets {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            if i == j {
                if v != 0.0 {
                    return Err(Error::NotAntisymmetric(v.abs()));
                }
                continue;
            }
            c[[i, j, k]] += v;
            c[[j, i, k]] -= v;
        }
        Self::new(c)
    }

    pub fn abelian(dim: usize) -> Self {
        Self { c: Tensor3::zeros(dim) }
    }

    /// Unimodular (Milnor) frame: `[e2,e3]=c1 e1, [e3,e1]=c2 e2, [e1,e2]=c3 e3`.
    pub fn milnor(c1: f64, c2: f64, c3: f64) -> Self {
        MilnorFrameSpec { c1, c2, c3 }.algebra()
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    /// Structure constants, `constants()[[i, j, k]] = c^k_{ij}`.
    pub fn constants(&self) -> &Tensor3 {
        &self.c
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                let xy = x[i] * y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    *o += self.c[[i, j, k]] * xy;
                }
            }
        }
        out
    }

    /// Bracket of basis vectors as a coefficient vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dim()).map(|k| self.c[[i, j, k]]).collect()
    }

    /// Max-abs of the cyclic sum `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s: f64 = (0..n)
                            .map(|m| {
                                self.c[[i, j, m]] * self.c[[m, k, l]]
                                    + self.c[[j, k, m]] * self.c[[m, i, l]]
                                    + self.c[[k, i, m]] * self.c[[m, j, l]]
                            })
                            .sum();
                        defect = defect.max(s.abs());
                    }
                }
            }
        }
        defect
    }

    /// Matrix of `ad(x)`, column `j` holding `[x, e_j]`.
    pub fn ad(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(x)?;
        let n = self.dim();
        Ok(DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * self.c[[i, j, k]]).sum()))
    }

    /// Coefficients of the linear form `X -> tr ad(X)`.
    pub fn trace_form(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|k| self.c[[i, k, k]]).sum()).collect()
    }

    /// Kernel of `X -> tr ad(X)`.
    pub fn unimodular_kernel(&self) -> UnimodularKernel {
        let n = self.dim();
        let form = self.trace_form();
        if max_abs(&form) <= VALIDITY_TOL {
            return UnimodularKernel { is_unimodular: true, basis: (0..n).map(|i| unit(n, i)).collect() };
        }
        let row = DMatrix::from_row_slice(1, n, &form);
        let ns = linalg::null_space(&row, 1e-12);
        UnimodularKernel {
            is_unimodular: false,
            basis: ns.basis.column_iter().map(|c| c.iter().copied().collect()).collect(),
        }
    }

    /// Largest residual of `[e_i, v]` against `span(basis)` over basis
    /// elements `e_i` and spanning vectors `v`; zero for an ideal.
    pub fn ideal_defect(&self, basis: &[Vec<f64>]) -> f64 {
        let n = self.dim();
        if basis.is_empty() {
            return 0.0;
        }
        let cols = DMatrix::from_fn(n, basis.len(), |r, c| basis[c][r]);
        let q = linalg::orthonormalize(&cols);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let e = unit(n, i);
            for v in basis {
                let b = DVector::from_vec(self.bracket_unchecked(&e, v));
                worst = worst.max(linalg::distance_to_span(&q, &b));
            }
        }
        worst
    }

    /// Largest residual of brackets between spanning vectors against their
    /// span; zero for a subalgebra.
    pub fn subalgebra_defect(&self, basis: &[Vec<f64>]) -> f64 {
        let n = self.dim();
        if basis.is_empty() {
            return 0.0;
        }
        let cols = DMatrix::from_fn(n, basis.len(), |r, c| basis[c][r]);
        let q = linalg::orthonormalize(&cols);
        let mut worst: f64 = 0.0;
        for u in basis {
            for v in basis {
                let b = DVector::from_vec(self.bracket_unchecked(u, v));
                worst = worst.max(linalg::distance_to_span(&q, &b));
            }
        }
        worst
    }

    /// Structure constants in the basis `e'_i = sum_a p[(a, i)] e_a`.
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Result<Self> {
        let n = self.dim();
        if p.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.nrows() });
        }
        let p_inv =
            p.clone().try_inverse().ok_or_else(|| Error::InvalidParameter("change of basis is singular".into()))?;
        let c = Tensor3::from_fn(n, |[i, j, k]| {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    let w = p[(a, i)] * p[(b, j)];
                    if w == 0.0 {
                        continue;
                    }
                    for m in 0..n {
                        s += w * self.c[[a, b, m]] * p_inv[(k, m)];
                    }
                }
            }
            s
        });
        Ok(Self { c })
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }
}

/// Coefficient vector of the frame vector `e_i`.
pub fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

/// Kernel of the trace form.
#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularKernel {
    pub is_unimodular: bool,
    pub basis: Vec<Vec<f64>>,
}

/// Diagonal structure constants of a 3-dimensional unimodular frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilnorFrameSpec {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl MilnorFrameSpec {
    pub fn algebra(&self) -> LieAlgebra {
        let mut c = Tensor3::zeros(3);
        let mut set = |i: usize, j: usize, k: usize, v: f64| {
            c[[i, j, k]] = v;
            c[[j, i, k]] = -v;
        };
        set(1, 2, 0, self.c1);
        set(2, 0, 1, self.c2);
        set(0, 1, 2, self.c3);
        LieAlgebra { c }
    }

    /// `lambda_j = (c1 + c2 + c3)/2 - c_j`.
    pub fn lambdas(&self) -> [f64; 3] {
        let s = 0.5 * (self.c1 + self.c2 + self.c3);
        [s - self.c1, s - self.c2, s - self.c3]
    }

    /// Isomorphism class read off from the signs of the constants.
    pub fn class(&self) -> UnimodularClass {
        let sign = |x: f64| {
            if x.abs() <= VALIDITY_TOL {
                0
            } else if x > 0.0 {
                1
            } else {
                -1
            }
        };
        let s = [sign(self.c1), sign(self.c2), sign(self.c3)];
        let pos = s.iter().filter(|&&x| x > 0).count();
        let neg = s.iter().filter(|&&x| x < 0).count();
        let (major, minor) = (pos.max(neg), pos.min(neg));
        match (3 - pos - neg, major, minor) {
            (0, 3, 0) => UnimodularClass::Su2,
            (0, _, _) => UnimodularClass::Sl2R,
            (1, 2, 0) => UnimodularClass::E2,
            (1, _, _) => UnimodularClass::E11,
            (2, _, _) => UnimodularClass::Nil3,
            _ => UnimodularClass::R3,
        }
    }
}

/// Milnor's classes of 3-dimensional unimodular Lie algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnimodularClass {
    Su2,
    Sl2R,
    E2,
    E11,
    Nil3,
    R3,
}

impl UnimodularClass {
    pub fn label(&self) -> &'static str {
        match self {
            UnimodularClass::Su2 => "su2",
            UnimodularClass::Sl2R => "sl2r",
            UnimodularClass::E2 => "e2",
            UnimodularClass::E11 => "e11",
            UnimodularClass::Nil3 => "nil3",
            UnimodularClass::R3 => "r3",
        }
    }
}

/// Normalized 3-dimensional non-unimodular algebra with constants `(xi, eta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonUnimodularSpec {
    xi: f64,
    eta: f64,
}

impl NonUnimodularSpec {
    pub fn new(xi: f64, eta: f64) -> Result<Self> {
        if !(xi >= 0.0 && eta >= 0.0 && xi.is_finite() && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-unimodular constants need xi >= 0 and eta >= 0, got ({xi}, {eta})"
            )));
        }
        Ok(Self { xi, eta })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Matrix of `ad(e1)` on the unimodular kernel relative to `{e2, e3}`.
    pub fn matrix(&self) -> Matrix2<f64> {
        let (x, e) = (self.xi, self.eta);
        Matrix2::new(1.0 + x, -(1.0 - x) * e, (1.0 + x) * e, 1.0 - x)
    }

    /// Milnor invariant `D = det A = (1 - xi^2)(1 + eta^2)`.
    pub fn milnor_invariant(&self) -> f64 {
        (1.0 - self.xi * self.xi) * (1.0 + self.eta * self.eta)
    }

    pub fn algebra(&self) -> LieAlgebra {
        let (x, e) = (self.xi, self.eta);
        let mut c = Tensor3::zeros(3);
        let mut set = |i: usize, j: usize, k: usize, v: f64| {
            c[[i, j, k]] += v;
            c[[j, i, k]] -= v;
        };
        // [e1,e2] = (1+xi)(e2 + eta e3), [e3,e1] = (1-xi)(eta e2 - e3)
        set(0, 1, 1, 1.0 + x);
        set(0, 1, 2, (1.0 + x) * e);
        set(2, 0, 1, (1.0 - x) * e);
        set(2, 0, 2, -(1.0 - x));
        LieAlgebra { c }
    }
}

/// Two-dimensional solvable algebra with `[e1,e2] = -(1/nu2) e1`.
pub fn g2d(nu2: f64) -> Result<LieAlgebra> {
    positive("nu2", nu2)?;
    LieAlgebra::from_brackets(2, &[(0, 1, 0, -1.0 / nu2)])
}

/// Product of the 2-dimensional solvable group with the real line:
/// `[e3,e1] = -(1/nu2) e3`, other brackets zero.
pub fn product_g2d_r(nu2: f64) -> Result<LieAlgebra> {
    positive("nu2", nu2)?;
    LieAlgebra::from_brackets(3, &[(2, 0, 2, -1.0 / nu2)])
}

/// Unimodular frame of the 3-dimensional Sasakian phi-symmetric group G(c).
pub fn sasaki_g(c: f64) -> Result<LieAlgebra> {
    if !c.is_finite() {
        return Err(Error::InvalidParameter(format!("sasaki_g parameter must be finite, got {c}")));
    }
    let a = 0.5 * (c + 3.0);
    Ok(LieAlgebra::milnor(a, a, 2.0))
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: &[&str] =
    &["milnor", "nonuni", "g2d", "product_g2d_r", "sasaki_g", "r3", "su2", "sl2r", "e2", "e11", "nil3", "h3", "h2r"];

/// Looks up a named algebra from the preset catalog.
pub fn preset(name: &str, params: &[f64]) -> Result<LieAlgebra> {
    let want = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("preset `{name}` takes {n} parameter(s), got {}", params.len())))
        }
    };
    match name {
        "milnor" => {
            want(3)?;
            if params.iter().any(|p| !p.is_finite()) {
                return Err(Error::InvalidParameter("milnor constants must be finite".into()));
            }
            Ok(LieAlgebra::milnor(params[0], params[1], params[2]))
        }
        "nonuni" => {
            want(2)?;
            Ok(NonUnimodularSpec::new(params[0], params[1])?.algebra())
        }
        "g2d" => {
            want(1)?;
            g2d(params[0])
        }
        "product_g2d_r" => {
            want(1)?;
            product_g2d_r(params[0])
        }
        "sasaki_g" => {
            want(1)?;
            sasaki_g(params[0])
        }
        "r3" => {
            want(0)?;
            Ok(LieAlgebra::abelian(3))
        }
        "su2" => {
            want(0)?;
            Ok(LieAlgebra::milnor(1.0, 1.0, 1.0))
        }
        "sl2r" => {
            want(0)?;
            Ok(LieAlgebra::milnor(1.0, 1.0, -1.0))
        }
        "e2" => {
            want(0)?;
            Ok(LieAlgebra::milnor(1.0, 1.0, 0.0))
        }
        "e11" => {
            want(0)?;
            Ok(LieAlgebra::milnor(1.0, -1.0, 0.0))
        }
        "nil3" => {
            want(0)?;
            Ok(LieAlgebra::milnor(1.0, 0.0, 0.0))
        }
        "h3" => {
            want(0)?;
            Ok(NonUnimodularSpec::new(0.0, 0.0)?.algebra())
        }
        "h2r" => {
            want(0)?;
            Ok(NonUnimodularSpec::new(1.0, 0.0)?.algebra())
        }
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}
