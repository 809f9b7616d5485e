//! Dense frame-component storage for small tensors.
//!
//! Every tensor in this crate lives on a Lie algebra of dimension at most a
//! handful, so components are stored densely in row-major order.

use std::ops::{Index, IndexMut};

macro_rules! dense_tensor {
    ($name:ident, $rank:literal) => {
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name {
            dim: usize,
            data: Vec<f64>,
        }

        impl $name {
            pub fn zeros(dim: usize) -> Self {
                Self { dim, data: vec![0.0; dim.pow($rank)] }
            }

            pub fn from_fn(dim: usize, mut f: impl FnMut([usize; $rank]) -> f64) -> Self {
                let mut t = Self::zeros(dim);
                for flat in 0..t.data.len() {
                    t.data[flat] = f(Self::unflatten(dim, flat));
                }
                t
            }

            pub fn dim(&self) -> usize {
                self.dim
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.data
            }

            /// Iterate over `(multi-index, value)` pairs in row-major order.
            pub fn iter(&self) -> impl Iterator<Item = ([usize; $rank], f64)> + '_ {
                self.data.iter().enumerate().map(move |(flat, &v)| (Self::unflatten(self.dim, flat), v))
            }

            pub fn max_abs(&self) -> f64 {
                self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
            }

            /// Largest component-wise difference to `other`.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                assert_eq!(self.dim, other.dim, "tensor dimension mismatch");
                self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
            }

            pub fn scaled(&self, s: f64) -> Self {
                Self { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.dim, other.dim, "tensor dimension mismatch");
                Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.scaled(-1.0))
            }

            fn flatten(&self, idx: [usize; $rank]) -> usize {
                idx.iter().fold(0, |acc, &i| {
                    debug_assert!(i < self.dim, "tensor index out of range");
                    acc * self.dim + i
                })
            }

            fn unflatten(dim: usize, mut flat: usize) -> [usize; $rank] {
                let mut idx = [0; $rank];
                for slot in idx.iter_mut().rev() {
                    *slot = flat % dim;
                    flat /= dim;
                }
                idx
            }
        }

        impl Index<[usize; $rank]> for $name {
            type Output = f64;
            fn index(&self, idx: [usize; $rank]) -> &f64 {
                &self.data[self.flatten(idx)]
            }
        }

        impl IndexMut<[usize; $rank]> for $name {
            fn index_mut(&mut self, idx: [usize; $rank]) -> &mut f64 {
                let flat = self.flatten(idx);
                &mut self.data[flat]
            }
        }
    };
}

dense_tensor!(Tensor3, 3);
dense_tensor!(Tensor4, 4);

/// Largest absolute entry of a slice.
pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
