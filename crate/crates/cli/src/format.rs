//! Number formatting shared by the JSON and text writers.

use serde::{Serialize, Serializer};

/// Significant digits kept in JSON output.
pub const JSON_DIGITS: usize = 12;
/// Significant digits shown in text tables.
pub const TEXT_DIGITS: usize = 6;
/// Magnitudes below this print as zero, so round-off noise does not leak
/// into reports.
pub const ZERO_SNAP: f64 = 1e-12;

/// A computed float, serialized with [`JSON_DIGITS`] significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn clean(self) -> f64 {
        if self.0.abs() < ZERO_SNAP {
            0.0
        } else {
            liestat::round_sig(self.0, JSON_DIGITS)
        }
    }

    pub fn text(self) -> String {
        if self.0.abs() < ZERO_SNAP {
            "0".into()
        } else {
            liestat::fmt_sig(self.0, TEXT_DIGITS)
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.clean())
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

pub fn matrix(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<Num>> {
    m.row_iter().map(|r| r.iter().copied().map(Num).collect()).collect()
}

/// Left-aligned first column, right-aligned numeric columns.
pub fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let ncol = header.len();
    let mut width = vec![0; ncol];
    for row in std::iter::once(header).chain(rows.iter().map(|r| r.as_slice())) {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(|r| r.as_slice())) {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(
                |(c, cell)| {
                    if c == 0 {
                        format!("{cell:<w$}", w = width[c])
                    } else {
                        format!("{cell:>w$}", w = width[c])
                    }
                },
            )
            .collect();
        out.push_str("  ");
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn basis_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Compact vector text, e.g. `[0, 1.41421, 0]`.
pub fn vec_text(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| Num(x).text()).collect();
    format!("[{}]", parts.join(", "))
}
