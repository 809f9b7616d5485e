//! The `classify` command.

use liestat::classify::{self, Family, GridAxis};
use serde::Serialize;

use crate::format::{nums, table, Num};
use crate::report::component_names;
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct ClassifyOutput {
    pub family: &'static str,
    pub params: Vec<&'static str>,
    pub rank_tolerance: Num,
    pub components: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub params: Vec<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambiguous: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Num>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ClassifyOutput {
    pub fn any_ambiguous(&self) -> bool {
        self.rows.iter().any(|r| r.ambiguous == Some(true))
    }
}

pub fn family_name(f: Family) -> &'static str {
    match f {
        Family::Milnor => "milnor",
        Family::NonUnimodular => "nonunimodular",
        Family::Product => "product",
    }
}

/// Parses `lo:hi:step`.
pub fn parse_axis(s: &str) -> Result<GridAxis, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Input(format!("--grid: expected lo:hi:step, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    GridAxis::new(v[0], v[1], v[2]).map_err(|e| CliError::Input(format!("--grid: {e}")))
}

pub fn run(family: Family, axes: &[GridAxis], rank_tol: f64, show_basis: bool) -> Result<ClassifyOutput, CliError> {
    let rows = classify::sweep(family, axes, rank_tol).map_err(|e| match e {
        liestat::Error::DimensionMismatch { expected, found } => CliError::Input(format!(
            "--grid: {} takes {expected} parameter axes (or one for all), got {found}",
            family_name(family)
        )),
        other => CliError::Input(other.to_string()),
    })?;
    let n = 3;
    let rows = rows
        .into_iter()
        .map(|row| match row.result {
            Ok(sol) => Row {
                params: nums(&row.params),
                label: Some(sol.label.to_string()),
                dim: Some(sol.dim),
                ambiguous: Some(sol.ambiguous),
                basis: show_basis.then(|| sol.basis.iter().map(|b| nums(b.components())).collect()),
                error: None,
            },
            Err(e) => Row {
                params: nums(&row.params),
                label: None,
                dim: None,
                ambiguous: None,
                basis: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(ClassifyOutput {
        family: family_name(family),
        params: family.param_names().to_vec(),
        rank_tolerance: Num(rank_tol),
        components: component_names(n),
        rows,
    })
}

pub fn to_text(out: &ClassifyOutput) -> String {
    let mut header: Vec<String> = out.params.iter().map(|s| s.to_string()).collect();
    header.extend(["label".to_string(), "dim".to_string(), "note".to_string()]);
    let mut rows = Vec::new();
    let mut basis_lines = String::new();
    for r in &out.rows {
        let mut row: Vec<String> = r.params.iter().map(|p| p.text()).collect();
        match &r.error {
            Some(e) => row.extend(["-".to_string(), "-".to_string(), format!("error: {e}")]),
            None => row.extend([
                r.label.clone().unwrap_or_default(),
                r.dim.map(|d| d.to_string()).unwrap_or_default(),
                if r.ambiguous == Some(true) { "AMBIGUOUS RANK".into() } else { String::new() },
            ]),
        }
        if let Some(basis) = r.basis.as_ref().filter(|b| !b.is_empty()) {
            let params: Vec<String> = r.params.iter().map(|p| p.text()).collect();
            basis_lines.push_str(&format!("\nkernel basis at ({})\n", params.join(", ")));
            let mut h = vec!["basis".to_string()];
            h.extend(out.components.iter().map(|c| format!("C{c}")));
            let brows: Vec<Vec<String>> = basis
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let mut row = vec![format!("#{}", i + 1)];
                    row.extend(v.iter().map(|x| x.text()));
                    row
                })
                .collect();
            basis_lines.push_str(&table(&h, &brows));
        }
        rows.push(row);
    }
    format!("{} family\n{}{}", out.family, table(&header, &rows), basis_lines)
}
