//! Left-invariant Riemannian and statistical geometry on Lie groups.
//!
//! Everything is computed in a left-invariant frame `e_1, ..., e_n` from the
//! structure constants of the Lie algebra, a Gram matrix and (optionally) a
//! cubic form. The [`classify`] module computes the space of
//! conjugate-symmetric statistical structures as the kernel of a linear
//! system.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod classify;
mod error;
pub mod geometry;
pub mod linalg;
pub mod models;
pub mod statistical;
pub mod tensor;

pub use algebra::{preset, LieAlgebra, MilnorFrameSpec, NonUnimodularSpec, UnimodularClass};
pub use error::{Error, Result};
pub use geometry::{Connection, CurvatureTensor, InnerProduct};
pub use statistical::{CubicForm, SasakianData, SkewnessOperator, StatisticalStructure};
pub use tensor::{Tensor3, Tensor4};

/// Formats `v` with `sig` significant digits, trimming trailing zeros and
/// normalizing negative zero.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() { "0".into() } else { v.to_string() };
    }
    let s = format!("{:.*e}", sig.saturating_sub(1), v);
    let parsed: f64 = s.parse().expect("formatted float parses");
    if parsed == 0.0 {
        return "0".into();
    }
    let exp = parsed.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        let mut out = format!("{parsed:.decimals$}");
        if out.contains('.') {
            out = out.trim_end_matches('0').trim_end_matches('.').to_string();
        }
        out
    } else {
        let (mant, e) = s.split_once('e').expect("exponent present");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

/// Rounds `v` to `sig` significant digits; `-0.0` becomes `0.0`.
pub fn round_sig(v: f64, sig: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    let r: f64 = format!("{:.*e}", sig.saturating_sub(1), v).parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(-6.545, 6), "-6.545");
        assert_eq!(fmt_sig(1.0 / 3.0, 6), "0.333333");
        assert_eq!(fmt_sig(-0.0, 6), "0");
        assert_eq!(fmt_sig(1e-20, 6), "1e-20");
        assert_eq!(fmt_sig(123456789.0, 6), "123457000");
        assert_eq!(fmt_sig(2.0f64.sqrt(), 12), "1.41421356237");
        assert_eq!(round_sig(-1e-300 * 1e-300, 12).to_bits(), 0.0f64.to_bits());
        assert_eq!(round_sig(3.0f64.sqrt(), 12), 1.73205080757);
        assert_eq!(round_sig(0.1 + 0.2, 12), 0.3);
    }
}
