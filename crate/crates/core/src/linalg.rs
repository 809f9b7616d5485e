//! Rank-revealing null-space computation with a deterministic basis.

use nalgebra::DMatrix;

/// Entries smaller than this are snapped to zero in echelon bases so that
/// printed output is stable across platforms.
const SNAP: f64 = 1e-13;

/// Null space of a matrix together with the diagnostics of the rank decision.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Basis vectors as columns, in reduced row-echelon form (see [`echelon_basis`]).
    pub basis: DMatrix<f64>,
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
    /// Cut-off below which a singular value counts as zero.
    pub threshold: f64,
    /// Some singular value lies within a factor 10 of the threshold.
    pub ambiguous: bool,
}

/// Singular-value threshold: `rel_tol * max(sigma_max, 1)`, never below 1e-12.
pub fn rank_threshold(sigma_max: f64, rel_tol: f64) -> f64 {
    (rel_tol * sigma_max.max(1.0)).max(1e-12)
}

/// Computes the null space of `a` through an SVD.
///
/// Matrices with fewer rows than columns are padded with zero rows so that
/// the full right-singular basis is available.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> NullSpace {
    let ncols = a.ncols();
    if ncols == 0 {
        return NullSpace {
            basis: DMatrix::zeros(0, 0),
            singular_values: Vec::new(),
            threshold: rank_threshold(0.0, rel_tol),
            ambiguous: false,
        };
    }
    let padded = if a.nrows() < ncols {
        let mut p = DMatrix::zeros(ncols, ncols);
        p.view_mut((0, 0), (a.nrows(), ncols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let sigma_max = sigma.iter().fold(0.0_f64, |m, s| m.max(*s));
    let threshold = rank_threshold(sigma_max, rel_tol);
    let ambiguous = sigma.iter().any(|&s| s > threshold / 10.0 && s < threshold * 10.0);

    let null_rows: Vec<usize> = (0..sigma.len()).filter(|&r| sigma[r] <= threshold).collect();
    let mut raw = DMatrix::zeros(ncols, null_rows.len());
    for (c, &r) in null_rows.iter().enumerate() {
        raw.set_column(c, &v_t.row(r).transpose());
    }
    let mut sorted = sigma;
    sorted.sort_by(|a, b| b.total_cmp(a));
    NullSpace { basis: echelon_basis(&raw), singular_values: sorted, threshold, ambiguous }
}

/// Re-expresses the column span of `cols` in reduced row-echelon form.
///
/// The result spans the same subspace; viewed as rows, it is the unique RREF
/// with leading entries equal to +1. Columns of the output are ordered by
/// pivot position.
pub fn echelon_basis(cols: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, d) = cols.shape();
    let mut m = cols.transpose(); // d x n, rows are basis vectors
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == d {
            break;
        }
        let (best, best_val) =
            (pivot_row..d)
                .map(|r| (r, m[(r, col)].abs()))
                .fold((pivot_row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_val <= 1e-10 {
            continue;
        }
        m.swap_rows(pivot_row, best);
        let p = m[(pivot_row, col)];
        for c in 0..n {
            m[(pivot_row, c)] /= p;
        }
        for r in 0..d {
            if r != pivot_row {
                let f = m[(r, col)];
                if f != 0.0 {
                    for c in 0..n {
                        m[(r, c)] -= f * m[(pivot_row, c)];
                    }
                }
            }
        }
        pivot_row += 1;
    }
    for v in m.iter_mut() {
        if v.abs() < SNAP {
            *v = 0.0;
        }
    }
    m.transpose()
}

/// Orthonormal basis (as columns) of the column span of `cols`.
pub fn orthonormalize(cols: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, d) = cols.shape();
    if d == 0 {
        return DMatrix::zeros(n, 0);
    }
    let mut q: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(d);
    for c in 0..d {
        let mut v = cols.column(c).into_owned();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for u in &q {
                let proj = u.dot(&v);
                v -= u * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-12 {
            q.push(v / norm);
        }
    }
    DMatrix::from_columns(&q)
}

/// Euclidean distance from `v` to the span of the orthonormal columns of `q`.
pub fn distance_to_span(q: &DMatrix<f64>, v: &nalgebra::DVector<f64>) -> f64 {
    if q.ncols() == 0 {
        return v.norm();
    }
    let coeffs = q.transpose() * v;
    (v - q * coeffs).norm()
}
