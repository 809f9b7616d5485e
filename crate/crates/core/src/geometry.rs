//! Left-invariant metric geometry in frame components.
//!
//! All frame fields are left-invariant, so covariant derivatives reduce to
//! contractions of connection coefficients with structure constants.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::tensor::{Tensor3, Tensor4};

/// Symmetry tolerance for Gram matrices.
const GRAM_SYM_TOL: f64 = 1e-9;
/// Leading principal minors must exceed this.
const MINOR_FLOOR: f64 = 1e-12;

/// Inner product on the Lie algebra, given by its Gram matrix in the frame.
#[derive(Debug, Clone)]
pub struct InnerProduct {
    gram: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl PartialEq for InnerProduct {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl InnerProduct {
    pub fn new(gram: DMatrix<f64>) -> Result<Self> {
        let n = gram.nrows();
        if gram.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: gram.ncols() });
        }
        if n == 0 {
            return Err(Error::InvalidParameter("Gram matrix must be non-empty".into()));
        }
        if gram.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("Gram matrix has non-finite entries".into()));
        }
        let asym = (&gram - gram.transpose()).abs().max();
        if asym > GRAM_SYM_TOL {
            return Err(Error::GramNotSymmetric(asym));
        }
        let gram = (&gram + gram.transpose()) * 0.5;
        for m in 1..=n {
            let minor = gram.view((0, 0), (m, m)).determinant();
            if minor <= MINOR_FLOOR {
                return Err(Error::GramNotPositiveDefinite { index: m, value: minor });
            }
        }
        let chol = Cholesky::new(gram.clone()).ok_or(Error::GramNotPositiveDefinite { index: n, value: 0.0 })?;
        Ok(Self { gram, chol })
    }

    /// The identity Gram matrix (orthonormal frame).
    pub fn orthonormal(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim)).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn is_identity(&self) -> bool {
        self.gram == DMatrix::identity(self.dim(), self.dim())
    }

    pub fn g(&self, i: usize, j: usize) -> f64 {
        self.gram[(i, j)]
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] * self.gram[(i, j)] * y[j];
            }
        }
        s
    }

    /// Raises an index: solves `G v = w`.
    pub fn raise(&self, w: &[f64]) -> Vec<f64> {
        self.chol.solve(&DVector::from_column_slice(w)).iter().copied().collect()
    }

    /// Lowers an index: `G v`.
    pub fn lower(&self, v: &[f64]) -> Vec<f64> {
        (&self.gram * DVector::from_column_slice(v)).iter().copied().collect()
    }

    /// `G^{-1}`, obtained by solving against the identity.
    pub fn inverse_gram(&self) -> DMatrix<f64> {
        let n = self.dim();
        let inv = self.chol.solve(&DMatrix::identity(n, n));
        (&inv + inv.transpose()) * 0.5
    }

    /// Cholesky factor `L` with `G = L L^T`.
    pub fn cholesky_l(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    /// Gram matrix of the frame `e'_i = sum_a p[(a, i)] e_a`.
    pub fn change_basis(&self, p: &DMatrix<f64>) -> Result<Self> {
        let n = self.dim();
        if p.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.nrows() });
        }
        Self::new(p.transpose() * &self.gram * p)
    }

    pub(crate) fn check_dim(&self, alg: &LieAlgebra) -> Result<()> {
        if alg.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), found: self.dim() });
        }
        Ok(())
    }
}

/// Left-invariant connection, `gamma()[[i, j, k]]` is the `e_k` component of
/// `nabla_{e_i} e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    gamma: Tensor3,
}

impl Connection {
    pub fn new(gamma: Tensor3) -> Self {
        Self { gamma }
    }

    pub fn zero(dim: usize) -> Self {
        Self { gamma: Tensor3::zeros(dim) }
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    pub fn gamma(&self) -> &Tensor3 {
        &self.gamma
    }

    /// `nabla_{e_i} e_j` as a coefficient vector.
    pub fn on_basis(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dim()).map(|k| self.gamma[[i, j, k]]).collect()
    }

    /// `nabla_x y` for left-invariant fields with constant coefficients.
    pub fn apply(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let w = x[i] * y[j];
                if w != 0.0 {
                    for (k, o) in out.iter_mut().enumerate() {
                        *o += w * self.gamma[[i, j, k]];
                    }
                }
            }
        }
        out
    }

    /// Componentwise `self + s * t` for a (1,2)-tensor `t`.
    pub fn shifted(&self, t: &Tensor3, s: f64) -> Self {
        Self { gamma: self.gamma.add(&t.scaled(s)) }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.gamma.max_abs_diff(&other.gamma)
    }

    /// Lowered coefficients `L[[i, j, k]] = <nabla_{e_i} e_j, e_k>`.
    pub fn lowered(&self, ip: &InnerProduct) -> Tensor3 {
        let n = self.dim();
        Tensor3::from_fn(n, |[i, j, k]| (0..n).map(|l| self.gamma[[i, j, l]] * ip.g(l, k)).sum())
    }
}

/// Raises the last index of a lowered (0,3) array.
pub(crate) fn raise_last(ip: &InnerProduct, low: &Tensor3) -> Tensor3 {
    let n = low.dim();
    let mut out = Tensor3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let w: Vec<f64> = (0..n).map(|k| low[[i, j, k]]).collect();
            for (k, v) in ip.raise(&w).into_iter().enumerate() {
                out[[i, j, k]] = v;
            }
        }
    }
    out
}

/// The symmetric map with `2<U(x,y),z> = <x,[z,y]> + <y,[z,x]>`, stored as
/// `U[[i, j, k]]` = `e_k` component of `U(e_i, e_j)`.
pub fn u_map(alg: &LieAlgebra, ip: &InnerProduct) -> Result<Tensor3> {
    ip.check_dim(alg)?;
    let n = alg.dim();
    let c = alg.constants();
    // <e_i, [e_m, e_j]> = sum_a G[i,a] c^a_{mj}
    let low = Tensor3::from_fn(n, |[i, j, m]| {
        0.5 * (0..n).map(|a| ip.g(i, a) * c[[m, j, a]] + ip.g(j, a) * c[[m, i, a]]).sum::<f64>()
    });
    Ok(raise_last(ip, &low))
}

/// Levi-Civita connection `nabla^g_x y = [x,y]/2 + U(x,y)`.
pub fn levi_civita(alg: &LieAlgebra, ip: &InnerProduct) -> Result<Connection> {
    let u = u_map(alg, ip)?;
    Ok(Connection::new(alg.constants().scaled(0.5).add(&u)))
}

/// Cartan-Schouten connection `nabla_x y = (1+t)/2 [x,y]`.
pub fn cartan_schouten(alg: &LieAlgebra, t: f64) -> Connection {
    Connection::new(alg.constants().scaled(0.5 * (1.0 + t)))
}

/// Torsion `T(e_i,e_j) = -[e_i,e_j] + nabla_{e_i}e_j - nabla_{e_j}e_i`.
pub fn torsion(alg: &LieAlgebra, conn: &Connection) -> Result<Tensor3> {
    check_conn(alg, conn)?;
    let c = alg.constants();
    let g = conn.gamma();
    Ok(Tensor3::from_fn(alg.dim(), |[i, j, k]| -c[[i, j, k]] + g[[i, j, k]] - g[[j, i, k]]))
}

/// `max |<nabla_i e_j, e_k> + <e_j, nabla_i e_k>|`; zero iff `nabla g = 0`.
pub fn metric_defect(ip: &InnerProduct, conn: &Connection) -> f64 {
    let l = conn.lowered(ip);
    let n = conn.dim();
    let mut d: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                d = d.max((l[[i, j, k]] + l[[i, k, j]]).abs());
            }
        }
    }
    d
}

fn check_conn(alg: &LieAlgebra, conn: &Connection) -> Result<()> {
    if alg.dim() != conn.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), found: conn.dim() });
    }
    Ok(())
}

/// Curvature `R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]` in frame components:
/// `r()[[i, j, k, l]]` is the `e_l` component of `R(e_i, e_j) e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    r: Tensor4,
}

impl CurvatureTensor {
    pub fn new(r: Tensor4) -> Self {
        Self { r }
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    pub fn r(&self) -> &Tensor4 {
        &self.r
    }

    /// `R(e_i, e_j) e_k`.
    pub fn on_basis(&self, i: usize, j: usize, k: usize) -> Vec<f64> {
        (0..self.dim()).map(|l| self.r[[i, j, k, l]]).collect()
    }

    /// `R(x, y) z` for arbitrary coefficient vectors.
    pub fn apply(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let w = x[i] * y[j] * z[k];
                    if w != 0.0 {
                        for (l, o) in out.iter_mut().enumerate() {
                            *o += w * self.r[[i, j, k, l]];
                        }
                    }
                }
            }
        }
        out
    }

    /// `g(R(e_i,e_j)e_k, e_l)`.
    pub fn lowered(&self, ip: &InnerProduct) -> Tensor4 {
        let n = self.dim();
        Tensor4::from_fn(n, |[i, j, k, l]| (0..n).map(|m| self.r[[i, j, k, m]] * ip.g(m, l)).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.r.max_abs()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.r.max_abs_diff(&other.r)
    }

    /// Componentwise mean of two curvature tensors.
    pub fn mean(&self, other: &Self) -> Self {
        Self { r: self.r.add(&other.r).scaled(0.5) }
    }
}

/// Curvature of a left-invariant connection.
pub fn curvature(alg: &LieAlgebra, conn: &Connection) -> Result<CurvatureTensor> {
    check_conn(alg, conn)?;
    let n = alg.dim();
    let c = alg.constants();
    let g = conn.gamma();
    let r = Tensor4::from_fn(n, |[i, j, k, l]| {
        (0..n).map(|m| g[[j, k, m]] * g[[i, m, l]] - g[[i, k, m]] * g[[j, m, l]] - c[[i, j, m]] * g[[m, k, l]]).sum()
    });
    Ok(CurvatureTensor::new(r))
}

/// `Ric(e_j, e_k) = tr(X -> R(X, e_j) e_k)`.
pub fn ricci(curv: &CurvatureTensor) -> DMatrix<f64> {
    let n = curv.dim();
    DMatrix::from_fn(n, n, |j, k| (0..n).map(|i| curv.r[[i, j, k, i]]).sum())
}

/// Metric trace of the Ricci tensor.
pub fn scalar_curvature(ip: &InnerProduct, curv: &CurvatureTensor) -> Result<f64> {
    if ip.dim() != curv.dim() {
        return Err(Error::DimensionMismatch { expected: curv.dim(), found: ip.dim() });
    }
    let ric = ricci(curv);
    Ok(metric_trace(ip, &ric))
}

/// `sum g^{jk} h_{jk}`.
pub fn metric_trace(ip: &InnerProduct, h: &DMatrix<f64>) -> f64 {
    let inv = ip.inverse_gram();
    inv.component_mul(h).sum()
}

/// `g(R(x,y)y,x) / (g(x,x)g(y,y) - g(x,y)^2)`.
pub fn sectional_curvature(ip: &InnerProduct, curv: &CurvatureTensor, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = curv.dim();
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let area = ip.inner(x, x) * ip.inner(y, y) - ip.inner(x, y).powi(2);
    if area <= 1e-12 {
        return Err(Error::DegeneratePlane(area));
    }
    Ok(ip.inner(&curv.apply(x, y, y), x) / area)
}

/// Least-squares fit of `R(X,Y)Z = k (g(Y,Z)X - g(Z,X)Y)`; returns `k` and
/// the max-abs componentwise residual.
pub fn constant_curvature_fit(ip: &InnerProduct, curv: &CurvatureTensor) -> (f64, f64) {
    let n = curv.dim();
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let model = Tensor4::from_fn(n, |[i, j, k, l]| ip.g(j, k) * delta(i, l) - ip.g(k, i) * delta(j, l));
    let mm: f64 = model.as_slice().iter().map(|v| v * v).sum();
    let k = if mm > 0.0 {
        model.as_slice().iter().zip(curv.r.as_slice()).map(|(m, r)| m * r).sum::<f64>() / mm
    } else {
        0.0
    };
    let residual = curv.r.max_abs_diff(&model.scaled(k));
    (k, residual)
}
