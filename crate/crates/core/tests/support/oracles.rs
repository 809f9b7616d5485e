//! Hand-transcribed constraint systems for orthonormal Milnor and normalized
//! non-unimodular frames, used as independent oracles for the generic
//! assembly. Unknowns are the ten cubic components in canonical order; in an
//! orthonormal frame `K^l_{ij} = C_{ijl}`, so each equation is written on the
//! multiset of its three indices.

#![allow(dead_code)]

use nalgebra::DMatrix;

/// Canonical column of the 1-based multiset written as three digits, e.g. "113".
pub fn col(digits: &str) -> usize {
    let mut idx: Vec<usize> = digits.bytes().map(|b| (b - b'1') as usize).collect();
    assert_eq!(idx.len(), 3);
    idx.sort_unstable();
    let all = liestat::CubicForm::multi_indices(3);
    all.iter().position(|m| m[..] == idx[..]).expect("valid multiset")
}

fn system(rows: &[Vec<(&str, f64)>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows.len(), 10);
    for (r, terms) in rows.iter().enumerate() {
        for &(name, v) in terms {
            m[(r, col(name))] += v;
        }
    }
    m
}

/// Equations of the unimodular case with `lambda_j = (c1+c2+c3)/2 - c_j`.
///
/// The third `d`-equation reads `l2 C333 + l3 C223 - (2 l2 + l3) C113`; with
/// `K^2_{33}` in the first slot instead, it would not follow from conjugate
/// symmetry.
pub fn milnor_system(c1: f64, c2: f64, c3: f64) -> DMatrix<f64> {
    let s = 0.5 * (c1 + c2 + c3);
    let (l1, l2, l3) = (s - c1, s - c2, s - c3);
    system(&[
        vec![("123", l1 + l2)],
        vec![("123", l2 + l3)],
        vec![("123", l3 + l1)],
        vec![("113", l1 + 3.0 * l2)],
        vec![("122", l2 + 3.0 * l3)],
        vec![("233", l3 + 3.0 * l1)],
        vec![("112", l1 + 3.0 * l3)],
        vec![("223", l2 + 3.0 * l1)],
        vec![("133", l3 + 3.0 * l2)],
        vec![("133", l1), ("111", l3), ("122", -(2.0 * l3 + l1))],
        vec![("222", l1), ("112", l2), ("233", -(2.0 * l1 + l2))],
        vec![("333", l2), ("223", l3), ("113", -(2.0 * l2 + l3))],
        vec![("122", l1), ("111", l2), ("133", -(2.0 * l2 + l1))],
        vec![("233", l2), ("222", l3), ("112", -(2.0 * l3 + l2))],
        vec![("333", l1), ("113", l3), ("223", -(2.0 * l1 + l3))],
    ])
}

/// Equations of the non-unimodular case, in the order
/// `a2, c3, a3, c2, e2, e3, f3, a1, c1, b2, d3, b3, d2, e1, f1`.
pub fn nonuni_system(xi: f64, eta: f64) -> DMatrix<f64> {
    let (x, e) = (xi, eta);
    let (p, m) = (1.0 + x, 1.0 - x);
    system(&[
        vec![("111", -p), ("122", 2.0 * p), ("123", 2.0 * e * p)],
        vec![("111", -m), ("123", -2.0 * e * m), ("133", 2.0 * m)],
        vec![("111", -x * e), ("122", -e), ("123", 2.0 * p), ("133", e * (1.0 + 2.0 * x))],
        vec![("111", -x * e), ("122", e * (2.0 * x - 1.0)), ("123", 2.0 * m), ("133", e)],
        vec![("123", p), ("122", -x * e)],
        vec![("122", m), ("133", -p)],
        vec![("123", m), ("133", -x * e)],
        vec![("112", 3.0 * p), ("113", e * (1.0 + 3.0 * x))],
        vec![("112", e * (3.0 * x - 1.0)), ("113", 3.0 * m)],
        vec![("112", -2.0 * p), ("222", p), ("223", e * (3.0 + x))],
        vec![("113", -2.0 * m), ("233", -e * (3.0 - x)), ("333", m)],
        vec![("112", -x * e), ("113", -p), ("222", -e), ("223", p), ("233", e * (2.0 + x))],
        vec![("112", -m), ("113", -x * e), ("223", e * (x - 2.0)), ("233", m), ("333", e)],
        vec![("112", -x * e), ("113", p), ("222", x * e), ("223", -2.0 * x), ("233", -x * e)],
        vec![("112", -m), ("113", x * e), ("223", x * e), ("233", -2.0 * x), ("333", -x * e)],
    ])
}

/// The 6x6 block of the non-unimodular system on
/// `(K^1_12, K^1_13, K^2_22, K^2_23, K^2_33, K^3_33)`, rows `b2, d3, b3, d2, e1, f1`.
pub fn nonuni_block(xi: f64, eta: f64) -> DMatrix<f64> {
    let (x, e) = (xi, eta);
    DMatrix::from_row_slice(
        6,
        6,
        &[
            -2.0 * (1.0 + x),
            0.0,
            1.0 + x,
            e * (3.0 + x),
            0.0,
            0.0,
            0.0,
            -2.0 * (1.0 - x),
            0.0,
            0.0,
            -e * (3.0 - x),
            1.0 - x,
            -x * e,
            -(1.0 + x),
            -e,
            1.0 + x,
            e * (2.0 + x),
            0.0,
            -(1.0 - x),
            -x * e,
            0.0,
            e * (x - 2.0),
            1.0 - x,
            e,
            -x * e,
            1.0 + x,
            x * e,
            -2.0 * x,
            -x * e,
            0.0,
            -(1.0 - x),
            x * e,
            0.0,
            x * e,
            -2.0 * x,
            -x * e,
        ],
    )
}

/// Closed form of `det nonuni_block(xi, eta)`.
pub fn nonuni_block_det(xi: f64, eta: f64) -> f64 {
    let (x2, e2) = (xi * xi, eta * eta);
    (1.0 - xi) * (1.0 + xi) * (1.0 + e2) * (1.0 - x2 - x2 * e2) * (1.0 - x2 + 9.0 * e2 - x2 * e2)
}

/// Columns of the block above.
pub const BLOCK_COLUMNS: [&str; 6] = ["112", "113", "222", "223", "233", "333"];

/// Cubic form from `(multiset, value)` pairs.
pub fn cubic(terms: &[(&str, f64)]) -> liestat::CubicForm {
    let mut comps = vec![0.0; 10];
    for &(name, v) in terms {
        comps[col(name)] += v;
    }
    liestat::CubicForm::from_components(3, comps).unwrap()
}

/// Kernel of an oracle system, with the same rank rule as the library.
pub fn oracle_kernel(m: &DMatrix<f64>) -> DMatrix<f64> {
    liestat::linalg::null_space(m, 1e-9).basis
}

/// Largest distance of a column of `a` from the span of `b`, relative to the
/// column norm.
pub fn span_excess(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let q = liestat::linalg::orthonormalize(b);
    a.column_iter()
        .map(|c| {
            let v = c.into_owned();
            liestat::linalg::distance_to_span(&q, &v) / v.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Named families of conjugate-symmetric cubic forms.
pub fn milnor_131_family() -> Vec<liestat::CubicForm> {
    vec![cubic(&[("111", 1.0), ("133", -1.0)]), cubic(&[("333", 1.0), ("113", -1.0)])]
}

pub fn e2_family() -> Vec<liestat::CubicForm> {
    vec![cubic(&[("113", 1.0), ("223", 1.0)]), cubic(&[("333", 1.0)])]
}

pub fn xi_zero_family() -> Vec<liestat::CubicForm> {
    vec![cubic(&[("111", 2.0), ("122", 1.0), ("133", 1.0)])]
}

pub fn xi_one_family() -> Vec<liestat::CubicForm> {
    vec![cubic(&[("111", 2.0), ("122", 1.0)]), cubic(&[("113", 1.0), ("223", 1.0)]), cubic(&[("333", 1.0)])]
}

/// `K^1_11 = 2 K^1_33 = 2 sqrt2 a, K^1_12 = K^2_33 = b, K^2_22 = c`.
pub fn product_family() -> Vec<liestat::CubicForm> {
    let s2 = std::f64::consts::SQRT_2;
    vec![cubic(&[("111", 2.0 * s2), ("133", s2)]), cubic(&[("112", 1.0), ("233", 1.0)]), cubic(&[("222", 1.0)])]
}
