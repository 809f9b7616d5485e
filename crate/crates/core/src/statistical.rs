//! Statistical structures `(g, nabla)` on Lie groups given by a cubic form.

use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::geometry::{self, raise_last, Connection, CurvatureTensor, InnerProduct};
use crate::tensor::{Tensor3, Tensor4};

/// Tolerance for symmetry of a lowered skewness operator.
const SKEW_SYM_TOL: f64 = 1e-9;
/// Default flatness tolerance for the Hessian curvature precondition.
pub const FLAT_TOL: f64 = 1e-9;

/// Fully symmetric 3-tensor stored by its independent components.
///
/// Components are indexed by multisets `i <= j <= k`, in lexicographic order
/// (`111, 112, 113, 122, ...` in 1-based notation).
#[derive(Debug, Clone, PartialEq)]
pub struct CubicForm {
    dim: usize,
    comps: Vec<f64>,
}

impl CubicForm {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, comps: vec![0.0; Self::num_components(dim)] }
    }

    /// `dim (dim + 1) (dim + 2) / 6`.
    pub fn num_components(dim: usize) -> usize {
        dim * (dim + 1) * (dim + 2) / 6
    }

    /// Canonical multi-indices, in storage order.
    pub fn multi_indices(dim: usize) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(Self::num_components(dim));
        for i in 0..dim {
            for j in i..dim {
                for k in j..dim {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }

    pub fn from_components(dim: usize, comps: Vec<f64>) -> Result<Self> {
        let want = Self::num_components(dim);
        if comps.len() != want {
            return Err(Error::DimensionMismatch { expected: want, found: comps.len() });
        }
        Ok(Self { dim, comps })
    }

    /// Sets `C(e_i, e_j, e_k)` (and all permutations) from 0-based entries.
    /// Repeated entries for the same multiset are summed.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut c = Self::zeros(dim);
        for &(i, j, k, v) in entries {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            let p = c.position(i, j, k);
            c.comps[p] += v;
        }
        Ok(c)
    }

    /// Symmetrizes an arbitrary (0,3) array.
    pub fn symmetrized(t: &Tensor3) -> Self {
        let dim = t.dim();
        let comps = Self::multi_indices(dim)
            .into_iter()
            .map(|[i, j, k]| {
                (t[[i, j, k]] + t[[i, k, j]] + t[[j, i, k]] + t[[j, k, i]] + t[[k, i, j]] + t[[k, j, i]]) / 6.0
            })
            .collect();
        Self { dim, comps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    /// Storage position of the multiset `{i, j, k}`.
    pub fn position(&self, i: usize, j: usize, k: usize) -> usize {
        let mut s = [i, j, k];
        s.sort_unstable();
        let n = self.dim;
        // components before first index a: sum over a' < a of C(n - a' + 1, 2)
        let tri = |m: usize| m * (m + 1) / 2;
        let mut pos = 0;
        for a in 0..s[0] {
            pos += tri(n - a);
        }
        for b in s[0]..s[1] {
            pos += n - b;
        }
        pos + (s[2] - s[1])
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.comps[self.position(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let p = self.position(i, j, k);
        self.comps[p] = v;
    }

    pub fn to_tensor(&self) -> Tensor3 {
        Tensor3::from_fn(self.dim, |[i, j, k]| self.get(i, j, k))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dim: self.dim, comps: self.comps.iter().map(|v| v * s).collect() }
    }

    /// Euclidean norm of the independent components.
    pub fn norm(&self) -> f64 {
        self.comps.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|&v| v == 0.0)
    }
}

/// Skewness operator, `k()[[i, j, l]]` is the `e_l` component of `K(e_i) e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewnessOperator {
    k: Tensor3,
}

impl SkewnessOperator {
    pub fn new(k: Tensor3) -> Self {
        Self { k }
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn k(&self) -> &Tensor3 {
        &self.k
    }

    /// `K(e_i) e_j`.
    pub fn on_basis(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dim()).map(|l| self.k[[i, j, l]]).collect()
    }

    /// Largest violation of `K(X)Y = K(Y)X` and of self-adjointness of `K(X)`.
    pub fn symmetry_defect(&self, ip: &InnerProduct) -> f64 {
        let n = self.dim();
        let low = lower_last(ip, &self.k);
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    d = d.max((self.k[[i, j, l]] - self.k[[j, i, l]]).abs());
                    d = d.max((low[[i, j, l]] - low[[i, l, j]]).abs());
                }
            }
        }
        d
    }
}

fn lower_last(ip: &InnerProduct, t: &Tensor3) -> Tensor3 {
    let n = t.dim();
    Tensor3::from_fn(n, |[i, j, k]| (0..n).map(|l| t[[i, j, l]] * ip.g(l, k)).sum())
}

/// `K` with `g(K(X)Y, Z) = C(X, Y, Z)`.
pub fn skewness_from_cubic(ip: &InnerProduct, cubic: &CubicForm) -> Result<SkewnessOperator> {
    if ip.dim() != cubic.dim() {
        return Err(Error::DimensionMismatch { expected: ip.dim(), found: cubic.dim() });
    }
    Ok(SkewnessOperator::new(raise_last(ip, &cubic.to_tensor())))
}

/// Inverse of [`skewness_from_cubic`]; rejects operators whose lowered form
/// is not totally symmetric.
pub fn cubic_from_skewness(ip: &InnerProduct, k: &SkewnessOperator) -> Result<CubicForm> {
    if ip.dim() != k.dim() {
        return Err(Error::DimensionMismatch { expected: ip.dim(), found: k.dim() });
    }
    let low = lower_last(ip, k.k());
    let sym = CubicForm::symmetrized(&low);
    let defect = low.max_abs_diff(&sym.to_tensor());
    if defect > SKEW_SYM_TOL {
        return Err(Error::AsymmetricSkewness(defect));
    }
    Ok(sym)
}

/// A left-invariant statistical structure: algebra, metric and cubic form.
#[derive(Debug, Clone)]
pub struct StatisticalStructure {
    alg: LieAlgebra,
    ip: InnerProduct,
    cubic: CubicForm,
    skew: SkewnessOperator,
    lc: Connection,
    lc_curv: OnceLock<CurvatureTensor>,
}

impl StatisticalStructure {
    pub fn new(alg: LieAlgebra, ip: InnerProduct, cubic: CubicForm) -> Result<Self> {
        ip.check_dim(&alg)?;
        let skew = skewness_from_cubic(&ip, &cubic)?;
        let lc = geometry::levi_civita(&alg, &ip)?;
        Ok(Self { alg, ip, cubic, skew, lc, lc_curv: OnceLock::new() })
    }

    /// The Riemannian structure `K = 0`.
    pub fn riemannian(alg: LieAlgebra, ip: InnerProduct) -> Result<Self> {
        let n = alg.dim();
        Self::new(alg, ip, CubicForm::zeros(n))
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.alg
    }

    pub fn inner_product(&self) -> &InnerProduct {
        &self.ip
    }

    pub fn cubic(&self) -> &CubicForm {
        &self.cubic
    }

    pub fn skewness(&self) -> &SkewnessOperator {
        &self.skew
    }

    pub fn levi_civita(&self) -> &Connection {
        &self.lc
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Riemannian curvature of the metric.
    pub fn riemannian_curvature(&self) -> &CurvatureTensor {
        self.lc_curv.get_or_init(|| geometry::curvature(&self.alg, &self.lc).expect("dimensions checked"))
    }
}

/// `nabla^(alpha) = nabla^g - (alpha/2) K`.
pub fn statistical_connection(stat: &StatisticalStructure, alpha: f64) -> Connection {
    stat.lc.shifted(stat.skew.k(), -0.5 * alpha)
}

/// Dual connection: `g(nabla_X Y, Z) + g(Y, nabla*_X Z) = 0` on frame fields.
pub fn dual_connection(ip: &InnerProduct, conn: &Connection) -> Result<Connection> {
    if ip.dim() != conn.dim() {
        return Err(Error::DimensionMismatch { expected: ip.dim(), found: conn.dim() });
    }
    let l = conn.lowered(ip);
    let dual_low = Tensor3::from_fn(conn.dim(), |[i, j, k]| -l[[i, k, j]]);
    Ok(Connection::new(raise_last(ip, &dual_low)))
}

/// Compatibility with the metric in the statistical sense.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticalCheck {
    pub is_statistical: bool,
    pub torsion_defect: f64,
    /// Largest asymmetry of `(nabla_X g)(Y, Z)` under `X <-> Y`.
    pub codazzi_defect: f64,
}

impl StatisticalCheck {
    pub fn defect(&self) -> f64 {
        self.torsion_defect.max(self.codazzi_defect)
    }
}

/// Torsion-free and `nabla g` totally symmetric, both within `1e-9`.
pub fn is_statistical(alg: &LieAlgebra, ip: &InnerProduct, conn: &Connection) -> Result<StatisticalCheck> {
    ip.check_dim(alg)?;
    let torsion_defect = geometry::torsion(alg, conn)?.max_abs();
    let l = conn.lowered(ip);
    let n = alg.dim();
    // (nabla_i g)(j, k) = -L[i,j,k] - L[i,k,j], already symmetric in (j, k)
    let dg = Tensor3::from_fn(n, |[i, j, k]| -l[[i, j, k]] - l[[i, k, j]]);
    let mut codazzi_defect: f64 = 0.0;
    for (idx, v) in dg.iter() {
        codazzi_defect = codazzi_defect.max((v - dg[[idx[1], idx[0], idx[2]]]).abs());
    }
    Ok(StatisticalCheck { is_statistical: torsion_defect.max(codazzi_defect) <= 1e-9, torsion_defect, codazzi_defect })
}

/// `(nabla_{e_i} K)(e_j, e_k)`, stored as `[[i, j, k, l]]` for the `e_l` component.
pub fn covariant_derivative_skewness(conn: &Connection, k: &SkewnessOperator) -> Tensor4 {
    let n = conn.dim();
    let g = conn.gamma();
    let kk = k.k();
    Tensor4::from_fn(n, |[i, j, k, l]| {
        (0..n).map(|m| g[[i, m, l]] * kk[[j, k, m]] - g[[i, j, m]] * kk[[m, k, l]] - g[[i, k, m]] * kk[[j, m, l]]).sum()
    })
}

/// Max-abs asymmetry of `(nabla^g_{e_i} K)(e_j, e_k)` under `i <-> j`.
pub fn conjugate_symmetry_defect(stat: &StatisticalStructure) -> f64 {
    let dk = covariant_derivative_skewness(&stat.lc, &stat.skew);
    let mut d: f64 = 0.0;
    for ([i, j, k, l], v) in dk.iter() {
        d = d.max((v - dk[[j, i, k, l]]).abs());
    }
    d
}

/// Curvatures of `nabla^(alpha)` and of its dual `nabla^(-alpha)`.
pub fn curvature_pair(stat: &StatisticalStructure, alpha: f64) -> (CurvatureTensor, CurvatureTensor) {
    let r = geometry::curvature(&stat.alg, &statistical_connection(stat, alpha)).expect("dimensions checked");
    let rd = geometry::curvature(&stat.alg, &statistical_connection(stat, -alpha)).expect("dimensions checked");
    (r, rd)
}

/// `max |g(R(X,Y)Z, W) + g(Z, R*(X,Y)W)|` over frame vectors.
pub fn pairing_defect(ip: &InnerProduct, r: &CurvatureTensor, r_dual: &CurvatureTensor) -> f64 {
    let a = r.lowered(ip);
    let b = r_dual.lowered(ip);
    let mut d: f64 = 0.0;
    for ([i, j, k, l], v) in a.iter() {
        d = d.max((v + b[[i, j, l, k]]).abs());
    }
    d
}

/// Statistical curvature tensor `(R^(alpha) + R^(-alpha)) / 2`.
pub fn statistical_curvature(stat: &StatisticalStructure, alpha: f64) -> CurvatureTensor {
    let (r, rd) = curvature_pair(stat, alpha);
    r.mean(&rd)
}

/// `(alpha^2 / 4) [K(e_i), K(e_j)] e_k` as a curvature-shaped array.
pub fn skewness_commutator(k: &SkewnessOperator, alpha: f64) -> CurvatureTensor {
    let n = k.dim();
    let kk = k.k();
    let s = 0.25 * alpha * alpha;
    CurvatureTensor::new(Tensor4::from_fn(n, |[i, j, c, l]| {
        s * (0..n).map(|m| kk[[i, m, l]] * kk[[j, c, m]] - kk[[j, m, l]] * kk[[i, c, m]]).sum::<f64>()
    }))
}

/// Least-squares constant `k` for `R^(alpha)` and the max-abs residual.
pub fn constant_curvature_fit(stat: &StatisticalStructure, alpha: f64) -> (f64, f64) {
    let (r, _) = curvature_pair(stat, alpha);
    geometry::constant_curvature_fit(&stat.ip, &r)
}

/// Trace quantities of the skewness operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Apolarity {
    /// `tau(e_i) = -1/2 tr_g K(e_i)`.
    pub tau: Vec<f64>,
    /// Metric dual of `tau`, equal to `-1/2 tr_g K`.
    pub e: Vec<f64>,
    /// `tr_g K = sum g^{jk} K(e_j) e_k`.
    pub trace_k: Vec<f64>,
    /// Tension of the identity map from `nabla` to `nabla*`.
    pub identity_tension: Vec<f64>,
}

impl Apolarity {
    pub fn is_apolar(&self, tol: f64) -> bool {
        self.tau.iter().all(|v| v.abs() <= tol)
    }
}

pub fn apolarity(stat: &StatisticalStructure) -> Apolarity {
    let n = stat.dim();
    let inv = stat.ip.inverse_gram();
    let k = stat.skew.k();
    let trace_k: Vec<f64> = (0..n)
        .map(|l| {
            let mut s = 0.0;
            for j in 0..n {
                for m in 0..n {
                    s += inv[(j, m)] * k[[j, m, l]];
                }
            }
            s
        })
        .collect();
    let tau: Vec<f64> = (0..n)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n {
                for m in 0..n {
                    s += inv[(j, m)] * stat.cubic.get(i, j, m);
                }
            }
            -0.5 * s
        })
        .collect();
    let e = stat.ip.raise(&tau);
    // tau(id) = sum g^{ij} (nabla*_{e_i} e_j - nabla_{e_i} e_j)
    let conn = statistical_connection(stat, 1.0);
    let dual = statistical_connection(stat, -1.0);
    let identity_tension = (0..n)
        .map(|l| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += inv[(i, j)] * (dual.gamma()[[i, j, l]] - conn.gamma()[[i, j, l]]);
                }
            }
            s
        })
        .collect();
    Apolarity { tau, e, trace_k, identity_tension }
}

/// Hessian curvature `H(X,Y)Z = (nabla_X K)(Y,Z) / 2` for the `alpha = 1`
/// connection, which must be flat within `flat_tol`.
pub fn hessian_curvature(stat: &StatisticalStructure, flat_tol: f64) -> Result<Tensor4> {
    let conn = statistical_connection(stat, 1.0);
    let r = geometry::curvature(&stat.alg, &conn)?;
    let defect = r.max_abs();
    if defect > flat_tol {
        return Err(Error::NotFlat { defect, tolerance: flat_tol });
    }
    Ok(covariant_derivative_skewness(&conn, &stat.skew).scaled(0.5))
}

fn check_symmetric(ip: &InnerProduct, h: &DMatrix<f64>) -> Result<()> {
    let n = ip.dim();
    if h.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: n, found: h.nrows() });
    }
    let asym = (h - h.transpose()).abs().max();
    if asym > 1e-9 {
        return Err(Error::InvalidParameter(format!("h is not symmetric (defect {asym:e})")));
    }
    Ok(())
}

/// `(nabla^g_{e_i} h)(e_j, e_k)`.
fn covariant_derivative_form(conn: &Connection, h: &DMatrix<f64>) -> Tensor3 {
    let n = conn.dim();
    let g = conn.gamma();
    Tensor3::from_fn(n, |[i, j, k]| -(0..n).map(|m| g[[i, j, m]] * h[(m, k)] + g[[i, k, m]] * h[(j, m)]).sum::<f64>())
}

/// Max-abs asymmetry of `(nabla^g_X h)(Y, Z)` under `X <-> Y`.
pub fn codazzi_defect(alg: &LieAlgebra, ip: &InnerProduct, h: &DMatrix<f64>) -> Result<f64> {
    ip.check_dim(alg)?;
    check_symmetric(ip, h)?;
    let dh = covariant_derivative_form(&geometry::levi_civita(alg, ip)?, h);
    let mut d: f64 = 0.0;
    for ([i, j, k], v) in dh.iter() {
        d = d.max((v - dh[[j, i, k]]).abs());
    }
    Ok(d)
}

/// Eigenspace of `h^#` with its ideal residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspace {
    pub eigenvalue: f64,
    pub basis: Vec<Vec<f64>>,
    pub ideal_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EssentialReport {
    pub codazzi_defect: f64,
    /// `max |nabla^g h|`; zero means `h` is parallel.
    pub parallel_defect: f64,
    pub eigenspaces: Vec<Eigenspace>,
    pub essential: bool,
}

/// Essential means non-parallel with no eigenspace of `h^# = G^{-1} h` an ideal.
pub fn essential_check(alg: &LieAlgebra, ip: &InnerProduct, h: &DMatrix<f64>) -> Result<EssentialReport> {
    const TOL: f64 = 1e-9;
    let codazzi = codazzi_defect(alg, ip, h)?;
    let dh = covariant_derivative_form(&geometry::levi_civita(alg, ip)?, h);
    let parallel_defect = dh.max_abs();

    // h^# is self-adjoint for g: diagonalize L^{-1} h L^{-T} and map back by L^{-T}
    let l = ip.cholesky_l();
    let l_inv = l.clone().try_inverse().expect("Cholesky factor is invertible");
    let sym = &l_inv * h * l_inv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let scale = eig.eigenvalues.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for idx in order {
        let v = eig.eigenvalues[idx];
        match groups.last_mut() {
            Some((val, members)) if (v - *val).abs() <= 1e-8 * scale => members.push(idx),
            _ => groups.push((v, vec![idx])),
        }
    }
    let back = l_inv.transpose();
    let eigenspaces: Vec<Eigenspace> = groups
        .into_iter()
        .map(|(val, members)| {
            let basis: Vec<Vec<f64>> =
                members.iter().map(|&m| (&back * eig.eigenvectors.column(m)).iter().copied().collect()).collect();
            let ideal_defect = alg.ideal_defect(&basis);
            Eigenspace { eigenvalue: val, basis, ideal_defect }
        })
        .collect();
    let any_ideal = eigenspaces.iter().any(|e| e.ideal_defect <= TOL);
    Ok(EssentialReport {
        codazzi_defect: codazzi,
        parallel_defect,
        essential: parallel_defect > TOL && !any_ideal,
        eigenspaces,
    })
}

/// Almost contact metric data `(phi, xi, eta)` on a 3-dimensional algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct SasakianData {
    /// Column `j` holds `phi(e_j)`.
    phi: DMatrix<f64>,
    xi: Vec<f64>,
    eta: Vec<f64>,
}

impl SasakianData {
    /// Validates `phi^2 = -Id + eta (x) xi`, `eta(xi) = 1` and
    /// `g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)` within `1e-10`.
    pub fn new(ip: &InnerProduct, phi: DMatrix<f64>, xi: Vec<f64>, eta: Vec<f64>) -> Result<Self> {
        const TOL: f64 = 1e-10;
        let n = ip.dim();
        if n != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: n });
        }
        if phi.shape() != (3, 3) || xi.len() != 3 || eta.len() != 3 {
            return Err(Error::InvalidParameter("Sasakian data must be 3-dimensional".into()));
        }
        let xi_v = nalgebra::DVector::from_column_slice(&xi);
        let eta_v = nalgebra::DVector::from_column_slice(&eta);
        let want = -DMatrix::<f64>::identity(3, 3) + &xi_v * eta_v.transpose();
        let d = (&phi * &phi - want).abs().max();
        if d > TOL {
            return Err(Error::InvalidSasakian { invariant: "phi^2 = -Id + eta (x) xi", defect: d });
        }
        let d = (eta_v.dot(&xi_v) - 1.0).abs();
        if d > TOL {
            return Err(Error::InvalidSasakian { invariant: "eta(xi) = 1", defect: d });
        }
        let gram = ip.gram();
        let d = (phi.transpose() * gram * &phi - (gram - &eta_v * eta_v.transpose())).abs().max();
        if d > TOL {
            return Err(Error::InvalidSasakian { invariant: "g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)", defect: d });
        }
        Ok(Self { phi, xi, eta })
    }

    /// `phi e1 = e2, phi e2 = -e1, phi e3 = 0, xi = e3, eta = e3^*`.
    pub fn standard() -> Self {
        let phi = DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        Self { phi, xi: vec![0.0, 0.0, 1.0], eta: vec![0.0, 0.0, 1.0] }
    }

    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    fn phi_of(&self, v: &[f64]) -> Vec<f64> {
        (&self.phi * nalgebra::DVector::from_column_slice(v)).iter().copied().collect()
    }
}

/// Max-abs of `K(e_i) phi e_j + phi K(e_i) e_j`; the flag is `defect <= 1e-10`.
pub fn sasakian_statistical_check(stat: &StatisticalStructure, sas: &SasakianData) -> Result<(bool, f64)> {
    let n = stat.dim();
    if n != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: n });
    }
    let k = stat.skewness();
    let mut d: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let phi_ej = sas.phi_of(&crate::algebra::unit(n, j));
            let a = apply_k(k, i, &phi_ej);
            let b = sas.phi_of(&k.on_basis(i, j));
            for l in 0..n {
                d = d.max((a[l] + b[l]).abs());
            }
        }
    }
    Ok((d <= 1e-10, d))
}

fn apply_k(k: &SkewnessOperator, i: usize, v: &[f64]) -> Vec<f64> {
    let n = k.dim();
    (0..n).map(|l| (0..n).map(|j| v[j] * k.k()[[i, j, l]]).sum()).collect()
}

/// `nabla^g + A^r` with `A^r(X)Y = g(X, phi Y) xi - r eta(X) phi Y + eta(Y) phi X`.
pub fn sasaki_family_connection(alg: &LieAlgebra, ip: &InnerProduct, sas: &SasakianData, r: f64) -> Result<Connection> {
    ip.check_dim(alg)?;
    let n = alg.dim();
    if n != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: n });
    }
    let lc = geometry::levi_civita(alg, ip)?;
    let a = Tensor3::from_fn(n, |[i, j, l]| {
        let ei = crate::algebra::unit(n, i);
        let phi_ej: Vec<f64> = (0..n).map(|m| sas.phi[(m, j)]).collect();
        ip.inner(&ei, &phi_ej) * sas.xi[l] - r * sas.eta[i] * sas.phi[(l, j)] + sas.eta[j] * sas.phi[(l, i)]
    });
    Ok(lc.shifted(&a, 1.0))
}

/// Constant-frame tensor of type `(up, down)`, components stored row-major
/// with the upper indices first.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedTensor {
    dim: usize,
    up: usize,
    down: usize,
    data: Vec<f64>,
}

impl MixedTensor {
    pub fn new(dim: usize, up: usize, down: usize, data: Vec<f64>) -> Result<Self> {
        let want = dim.pow((up + down) as u32);
        if data.len() != want {
            return Err(Error::DimensionMismatch { expected: want, found: data.len() });
        }
        Ok(Self { dim, up, down, data })
    }

    pub fn vector(v: &[f64]) -> Self {
        Self { dim: v.len(), up: 1, down: 0, data: v.to_vec() }
    }

    pub fn covector(w: &[f64]) -> Self {
        Self { dim: w.len(), up: 0, down: 1, data: w.to_vec() }
    }

    /// `(0,2)` tensor from a matrix, e.g. the metric or the Ricci tensor.
    pub fn bilinear(h: &DMatrix<f64>) -> Self {
        let n = h.nrows();
        Self { dim: n, up: 0, down: 2, data: (0..n * n).map(|f| h[(f / n, f % n)]).collect() }
    }

    /// `(1,1)` tensor from an endomorphism whose column `j` is the image of `e_j`.
    pub fn endomorphism(a: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        Self { dim: n, up: 1, down: 1, data: (0..n * n).map(|f| a[(f / n, f % n)]).collect() }
    }

    /// `(1,2)` tensor from a `[[i, j, l]]`-indexed array (`e_l` component of `T(e_i, e_j)`).
    pub fn from_vector_valued(t: &Tensor3) -> Self {
        let n = t.dim();
        let data = index_product(n).map(|[l, i, j]| t[[i, j, l]]).collect();
        Self { dim: n, up: 1, down: 2, data }
    }

    /// `(0,3)` tensor from a cubic form.
    pub fn cubic(c: &CubicForm) -> Self {
        Self { dim: c.dim(), up: 0, down: 3, data: c.to_tensor().as_slice().to_vec() }
    }

    /// `(1,3)` curvature tensor.
    pub fn curvature(r: &CurvatureTensor) -> Self {
        let n = r.dim();
        let data = index_product(n).map(|[l, i, j, k]| r.r()[[i, j, k, l]]).collect();
        Self { dim: n, up: 1, down: 3, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> (usize, usize) {
        (self.up, self.down)
    }

    /// Max-abs component of `nabla_{e_i} T` over all `i` for a left-invariant
    /// connection.
    pub fn covariant_derivative_defect(&self, conn: &Connection) -> f64 {
        let n = self.dim;
        let order = self.up + self.down;
        let g = conn.gamma();
        let stride = |slot: usize| n.pow((order - 1 - slot) as u32);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for flat in 0..self.data.len() {
                let mut s = 0.0;
                for slot in 0..order {
                    let st = stride(slot);
                    let a = (flat / st) % n;
                    let base = flat - a * st;
                    for m in 0..n {
                        let tm = self.data[base + m * st];
                        if slot < self.up {
                            s += g[[i, m, a]] * tm;
                        } else {
                            s -= g[[i, a, m]] * tm;
                        }
                    }
                }
                worst = worst.max(s.abs());
            }
        }
        worst
    }
}

fn index_product<const N: usize>(n: usize) -> impl Iterator<Item = [usize; N]> {
    (0..n.pow(N as u32)).map(move |mut f| {
        let mut idx = [0; N];
        for slot in idx.iter_mut().rev() {
            *slot = f % n;
            f /= n;
        }
        idx
    })
}

/// Covariant-derivative defect of each named tensor under `conn`.
pub fn ambrose_singer_check(conn: &Connection, tensors: &[(&str, MixedTensor)]) -> Result<Vec<(String, f64)>> {
    tensors
        .iter()
        .map(|(name, t)| {
            if t.dim() != conn.dim() {
                return Err(Error::DimensionMismatch { expected: conn.dim(), found: t.dim() });
            }
            Ok((name.to_string(), t.covariant_derivative_defect(conn)))
        })
        .collect()
}

/// The standard tensor list `g, R, Ric, S, C` (and `phi, xi, eta` when
/// Sasakian data is given) for an Ambrose-Singer check of `conn_tilde`.
pub fn ambrose_singer_tensors(
    stat: &StatisticalStructure,
    conn_tilde: &Connection,
    sas: Option<&SasakianData>,
) -> Vec<(&'static str, MixedTensor)> {
    let r = stat.riemannian_curvature();
    let s = conn_tilde.gamma().sub(stat.levi_civita().gamma());
    let mut out = vec![
        ("g", MixedTensor::bilinear(stat.inner_product().gram())),
        ("R", MixedTensor::curvature(r)),
        ("Ric", MixedTensor::bilinear(&geometry::ricci(r))),
        ("S", MixedTensor::from_vector_valued(&s)),
        ("C", MixedTensor::cubic(stat.cubic())),
    ];
    if let Some(sas) = sas {
        out.push(("phi", MixedTensor::endomorphism(sas.phi())));
        out.push(("xi", MixedTensor::vector(sas.xi())));
        out.push(("eta", MixedTensor::covector(sas.eta())));
    }
    out
}
