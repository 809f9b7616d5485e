//! Conjugate-symmetric statistical structures as the kernel of a linear system.
//!
//! For a fixed algebra and metric, `C -> antisym_{X,Y} (nabla^g_X K)(Y, Z)` is
//! linear in the cubic form; its kernel is the space of conjugate-symmetric
//! structures.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::algebra::{self, LieAlgebra, MilnorFrameSpec, NonUnimodularSpec, UnimodularClass};
use crate::error::{Error, Result};
use crate::geometry::{levi_civita, InnerProduct};
use crate::linalg;
use crate::statistical::{covariant_derivative_skewness, skewness_from_cubic, CubicForm};

/// Default relative rank tolerance.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Relative containment tolerance.
pub const CONTAINMENT_TOL: f64 = 1e-8;

/// Constraint matrix: one row per `(i < j, k, l)`, one column per
/// independent cubic component.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub dim: usize,
    pub matrix: DMatrix<f64>,
}

impl ConstraintSystem {
    /// Row labels `(i, j, k, l)` in row order.
    pub fn row_labels(&self) -> Vec<[usize; 4]> {
        row_labels(self.dim)
    }
}

fn row_labels(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for l in 0..n {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

/// Assembles the system column by column from unit cubic forms.
pub fn build_system(alg: &LieAlgebra, ip: &InnerProduct) -> Result<ConstraintSystem> {
    ip.check_dim(alg)?;
    let n = alg.dim();
    let lc = levi_civita(alg, ip)?;
    let rows = row_labels(n);
    let ncols = CubicForm::num_components(n);
    let mut m = DMatrix::zeros(rows.len(), ncols);
    for col in 0..ncols {
        let mut unit = vec![0.0; ncols];
        unit[col] = 1.0;
        let cubic = CubicForm::from_components(n, unit)?;
        let k = skewness_from_cubic(ip, &cubic)?;
        let dk = covariant_derivative_skewness(&lc, &k);
        for (r, &[i, j, k, l]) in rows.iter().enumerate() {
            m[(r, col)] = dk[[i, j, k, l]] - dk[[j, i, k, l]];
        }
    }
    Ok(ConstraintSystem { dim: n, matrix: m })
}

/// Isomorphism-type label attached to a classification result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassLabel {
    Unimodular(UnimodularClass),
    NonUnimodular {
        milnor_invariant: f64,
    },
    Product,
    /// No label (generic algebra).
    Unlabelled,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Unimodular(c) => f.write_str(c.label()),
            ClassLabel::NonUnimodular { milnor_invariant } => {
                write!(f, "nonunimodular(D={})", crate::fmt_sig(*milnor_invariant, 6))
            }
            ClassLabel::Product => f.write_str("g2d_r"),
            ClassLabel::Unlabelled => f.write_str("unlabelled"),
        }
    }
}

/// Kernel of a constraint system.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSpace {
    pub dim: usize,
    /// Reduced row-echelon basis with leading entries `+1`, in pivot order.
    pub basis: Vec<CubicForm>,
    pub rank_threshold: f64,
    pub singular_values: Vec<f64>,
    /// A singular value fell within a factor 10 of the threshold.
    pub ambiguous: bool,
    pub label: ClassLabel,
}

impl SolutionSpace {
    /// Orthonormal basis of the kernel (columns, component coordinates).
    pub fn orthonormal_basis(&self) -> DMatrix<f64> {
        let ncols = CubicForm::num_components(self.cubic_dim());
        let cols = DMatrix::from_fn(ncols, self.basis.len(), |r, c| self.basis[c].components()[r]);
        linalg::orthonormalize(&cols)
    }

    fn cubic_dim(&self) -> usize {
        self.basis.first().map(|b| b.dim()).unwrap_or(0)
    }

    /// Distance from `cubic` to the kernel; contained iff the distance is at
    /// most `1e-8 * |cubic|`.
    pub fn contains(&self, cubic: &CubicForm) -> (bool, f64) {
        let v = DVector::from_column_slice(cubic.components());
        let dist =
            if self.basis.is_empty() { v.norm() } else { linalg::distance_to_span(&self.orthonormal_basis(), &v) };
        (dist <= CONTAINMENT_TOL * cubic.norm(), dist)
    }

    pub fn is_nontrivial(&self) -> bool {
        self.dim > 0
    }
}

/// Rank-revealing kernel of the constraint system.
pub fn kernel(system: &ConstraintSystem, rel_tol: f64) -> SolutionSpace {
    let ns = linalg::null_space(&system.matrix, rel_tol);
    let n = system.dim;
    let basis = ns
        .basis
        .column_iter()
        .map(|c| CubicForm::from_components(n, c.iter().copied().collect()).expect("column length matches"))
        .collect::<Vec<_>>();
    SolutionSpace {
        dim: basis.len(),
        basis,
        rank_threshold: ns.threshold,
        singular_values: ns.singular_values,
        ambiguous: ns.ambiguous,
        label: ClassLabel::Unlabelled,
    }
}

/// Builds and solves the system for an arbitrary algebra and metric.
pub fn classify(alg: &LieAlgebra, ip: &InnerProduct, rel_tol: f64) -> Result<SolutionSpace> {
    Ok(kernel(&build_system(alg, ip)?, rel_tol))
}

pub fn classify_unimodular(c1: f64, c2: f64, c3: f64, rel_tol: f64) -> Result<SolutionSpace> {
    if ![c1, c2, c3].iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidParameter("milnor constants must be finite".into()));
    }
    let spec = MilnorFrameSpec { c1, c2, c3 };
    let mut sol = classify(&spec.algebra(), &InnerProduct::orthonormal(3), rel_tol)?;
    sol.label = ClassLabel::Unimodular(spec.class());
    Ok(sol)
}

pub fn classify_nonunimodular(xi: f64, eta: f64, rel_tol: f64) -> Result<SolutionSpace> {
    let spec = NonUnimodularSpec::new(xi, eta)?;
    let mut sol = classify(&spec.algebra(), &InnerProduct::orthonormal(3), rel_tol)?;
    sol.label = ClassLabel::NonUnimodular { milnor_invariant: spec.milnor_invariant() };
    Ok(sol)
}

pub fn classify_product(nu2: f64, rel_tol: f64) -> Result<SolutionSpace> {
    let mut sol = classify(&algebra::product_g2d_r(nu2)?, &InnerProduct::orthonormal(3), rel_tol)?;
    sol.label = ClassLabel::Product;
    Ok(sol)
}

/// Parameter families that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `(c1, c2, c3)`.
    Milnor,
    /// `(xi, eta)`.
    NonUnimodular,
    /// `(nu2)`.
    Product,
}

impl Family {
    pub fn arity(&self) -> usize {
        match self {
            Family::Milnor => 3,
            Family::NonUnimodular => 2,
            Family::Product => 1,
        }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Family::Milnor => &["c1", "c2", "c3"],
            Family::NonUnimodular => &["xi", "eta"],
            Family::Product => &["nu2"],
        }
    }

    pub fn classify(&self, params: &[f64], rel_tol: f64) -> Result<SolutionSpace> {
        if params.len() != self.arity() {
            return Err(Error::DimensionMismatch { expected: self.arity(), found: params.len() });
        }
        match self {
            Family::Milnor => classify_unimodular(params[0], params[1], params[2], rel_tol),
            Family::NonUnimodular => classify_nonunimodular(params[0], params[1], rel_tol),
            Family::Product => classify_product(params[0], rel_tol),
        }
    }
}

/// Inclusive arithmetic grid `lo, lo + step, ..., <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridAxis {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 {
            return Err(Error::InvalidParameter(format!("bad grid {lo}:{hi}:{step}")));
        }
        Ok(Self { lo, hi, step })
    }

    /// A single point.
    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v, step: 1.0 }
    }

    /// Grid values computed as `lo + i * step` (no accumulated rounding).
    pub fn values(&self) -> Vec<f64> {
        if self.hi < self.lo {
            return Vec::new();
        }
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

/// Outcome at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub params: Vec<f64>,
    pub result: std::result::Result<SolutionSpace, Error>,
}

/// Classifies every point of the grid. Rows come back in lexicographic grid
/// order (first axis slowest) whatever the evaluation order; invalid points
/// are kept as error rows.
pub fn sweep(family: Family, axes: &[GridAxis], rel_tol: f64) -> Result<Vec<SweepRow>> {
    let axes: Vec<GridAxis> = match axes.len() {
        1 if family.arity() > 1 => vec![axes[0]; family.arity()],
        k if k == family.arity() => axes.to_vec(),
        k => return Err(Error::DimensionMismatch { expected: family.arity(), found: k }),
    };
    let values: Vec<Vec<f64>> = axes.iter().map(|a| a.values()).collect();
    if values.iter().any(|v| v.is_empty()) {
        return Err(Error::EmptyGrid);
    }
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for vs in &values {
        points = points
            .into_iter()
            .flat_map(|p| {
                vs.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    Ok(points
        .into_par_iter()
        .map(|params| {
            let result = family.classify(&params, rel_tol);
            SweepRow { params, result }
        })
        .collect())
}
