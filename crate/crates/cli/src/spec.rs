//! The JSON group-spec input document.

use std::collections::BTreeMap;

use liestat::classify::{ClassLabel, DEFAULT_RANK_TOL};
use liestat::statistical::FLAT_TOL;
use liestat::{CubicForm, InnerProduct, LieAlgebra, MilnorFrameSpec, NonUnimodularSpec, Tensor3};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `[i, j, k, value]` with 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry(pub usize, pub usize, pub usize, pub f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetRef {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricSpec {
    Named(String),
    Gram(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<PresetRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brackets: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

/// A spec after validation.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub spec: GroupSpec,
    pub alg: LieAlgebra,
    pub ip: InnerProduct,
    pub cubic: Option<CubicForm>,
    pub label: ClassLabel,
    pub rank_tol: f64,
    pub flat_tol: f64,
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("spec: {e}")))
    }

    /// Validates the document; `env_rank_tol` overrides the file tolerance.
    pub fn load(self, env_rank_tol: Option<f64>) -> Result<Loaded, CliError> {
        let (alg, label) = self.algebra()?;
        let n = alg.dim();
        let ip = self.inner_product(n)?;
        let cubic = match &self.cubic {
            None => None,
            Some(entries) => Some(cubic_from_entries(n, entries)?),
        };
        let tol = self.tolerances.clone().unwrap_or_default();
        let rank_tol = env_rank_tol.or(tol.rank).unwrap_or(DEFAULT_RANK_TOL);
        let flat_tol = tol.flat.unwrap_or(FLAT_TOL);
        for (name, v) in [("rank", rank_tol), ("flat", flat_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Input(format!("tolerances.{name}: must be a positive number, got {v}")));
            }
        }
        Ok(Loaded { spec: self, alg, ip, cubic, label, rank_tol, flat_tol })
    }

    fn algebra(&self) -> Result<(LieAlgebra, ClassLabel), CliError> {
        match (&self.preset, self.dim, &self.brackets) {
            (Some(p), None, None) => {
                let alg = liestat::preset(&p.name, &p.params).map_err(CliError::from_core)?;
                Ok((alg, preset_label(&p.name, &p.params)))
            }
            (None, Some(dim), brackets) => {
                if dim == 0 {
                    return Err(CliError::Input("dim: must be positive".into()));
                }
                let brackets = brackets.as_deref().unwrap_or(&[]);
                Ok((algebra_from_entries(dim, brackets)?, ClassLabel::Unlabelled))
            }
            (Some(_), _, _) => Err(CliError::Input("spec: give either `preset` or `dim`/`brackets`, not both".into())),
            (None, None, Some(_)) => Err(CliError::Input("spec: `brackets` requires `dim`".into())),
            (None, None, None) => Err(CliError::Input("spec: missing `preset` or `dim`".into())),
        }
    }

    fn inner_product(&self, n: usize) -> Result<InnerProduct, CliError> {
        match &self.metric {
            None => Ok(InnerProduct::orthonormal(n)),
            Some(MetricSpec::Named(name)) if name == "orthonormal" => Ok(InnerProduct::orthonormal(n)),
            Some(MetricSpec::Named(name)) => Err(CliError::Input(format!(
                "metric: unknown metric `{name}` (expected \"orthonormal\" or a Gram matrix)"
            ))),
            Some(MetricSpec::Gram(rows)) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Input(format!("metric: Gram matrix must be {n}x{n}")));
                }
                let flat: Vec<f64> = rows.iter().flatten().copied().collect();
                InnerProduct::new(DMatrix::from_row_slice(n, n, &flat)).map_err(CliError::from_core)
            }
        }
    }
}

fn check_index(field: &str, pos: usize, e: &Entry, dim: usize) -> Result<[usize; 3], CliError> {
    let mut out = [0; 3];
    for (slot, idx) in [e.0, e.1, e.2].into_iter().enumerate() {
        if idx == 0 || idx > dim {
            return Err(CliError::Input(format!(
                "{field}[{pos}]: index {idx} out of range 1..={dim} in entry [{}, {}, {}, {}]",
                e.0, e.1, e.2, e.3
            )));
        }
        out[slot] = idx - 1;
    }
    if !e.3.is_finite() {
        return Err(CliError::Input(format!("{field}[{pos}]: value must be finite")));
    }
    Ok(out)
}

/// `[e_i, e_j] = sum value e_k`; the partner `[e_j, e_i]` is filled in
/// unless given explicitly, in which case it must be consistent.
fn algebra_from_entries(dim: usize, entries: &[Entry]) -> Result<LieAlgebra, CliError> {
    let mut given: BTreeMap<[usize; 3], f64> = BTreeMap::new();
    for (pos, e) in entries.iter().enumerate() {
        let idx = check_index("brackets", pos, e, dim)?;
        if given.insert(idx, e.3).is_some() {
            return Err(CliError::Input(format!(
                "brackets[{pos}]: duplicate entry for [e{}, e{}] along e{}",
                e.0, e.1, e.2
            )));
        }
    }
    let mut c = Tensor3::zeros(dim);
    for (&[i, j, k], &v) in &given {
        c[[i, j, k]] = v;
        if !given.contains_key(&[j, i, k]) {
            c[[j, i, k]] = -v;
        }
    }
    LieAlgebra::new(c).map_err(CliError::from_core)
}

/// Each entry sets `C` on every permutation of its indices; entries for the
/// same index multiset must agree.
fn cubic_from_entries(dim: usize, entries: &[Entry]) -> Result<CubicForm, CliError> {
    let mut c = CubicForm::zeros(dim);
    let mut seen: BTreeMap<usize, f64> = BTreeMap::new();
    for (pos, e) in entries.iter().enumerate() {
        let [i, j, k] = check_index("cubic", pos, e, dim)?;
        let p = c.position(i, j, k);
        if let Some(&prev) = seen.get(&p) {
            if prev != e.3 {
                return Err(CliError::Validation(format!(
                    "cubic[{pos}]: value {} conflicts with {prev} for the same index set; the cubic form must be symmetric",
                    e.3
                )));
            }
        }
        seen.insert(p, e.3);
        c.set(i, j, k, e.3);
    }
    Ok(c)
}

pub fn preset_label(name: &str, params: &[f64]) -> ClassLabel {
    let milnor = |c1, c2, c3| ClassLabel::Unimodular(MilnorFrameSpec { c1, c2, c3 }.class());
    let nonuni = |x, e| match NonUnimodularSpec::new(x, e) {
        Ok(s) => ClassLabel::NonUnimodular { milnor_invariant: s.milnor_invariant() },
        Err(_) => ClassLabel::Unlabelled,
    };
    match (name, params) {
        ("milnor", &[a, b, c]) => milnor(a, b, c),
        ("su2", _) => milnor(1.0, 1.0, 1.0),
        ("sl2r", _) => milnor(1.0, 1.0, -1.0),
        ("e2", _) => milnor(1.0, 1.0, 0.0),
        ("e11", _) => milnor(1.0, -1.0, 0.0),
        ("nil3", _) => milnor(1.0, 0.0, 0.0),
        ("r3", _) => milnor(0.0, 0.0, 0.0),
        ("sasaki_g", &[c]) => milnor((c + 3.0) / 2.0, (c + 3.0) / 2.0, 2.0),
        ("nonuni", &[x, e]) => nonuni(x, e),
        ("h3", _) => nonuni(0.0, 0.0),
        ("h2r", _) => nonuni(1.0, 0.0),
        ("product_g2d_r", _) => ClassLabel::Product,
        _ => ClassLabel::Unlabelled,
    }
}
