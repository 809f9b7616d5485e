//! The `models` command.

use liestat::geometry;
use liestat::models::{self, Model, TModel};
use liestat::statistical as stat;
use serde::Serialize;

use crate::format::{matrix, Num};
use crate::report::vector_table;
use crate::CliError;

const FLAT_TOL: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct ModelOutput {
    pub model: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<Num>,
    pub alpha: Num,
    pub nu1: Num,
    pub nu2: Num,
    /// Coordinate Gram matrix at `(x, y) = (0, 1)`.
    pub coordinate_metric: Vec<Vec<Num>>,
    pub skewness: Vec<Vec<Vec<Num>>>,
    pub levi_civita: Vec<Vec<Vec<Num>>>,
    pub connection: Vec<Vec<Vec<Num>>>,
    pub dual_connection: Vec<Vec<Vec<Num>>>,
    pub curvature_constant: Num,
    pub fit_residual: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_constant: Option<Num>,
    pub curvature_max: Num,
    pub dual_curvature_max: Num,
    pub flat: bool,
    pub dual_flat: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat_alpha: Option<Num>,
    pub conjugate_symmetry_defect: Num,
}

pub fn run(kind: &str, nu: Option<f64>, alpha: f64) -> Result<ModelOutput, CliError> {
    if !alpha.is_finite() {
        return Err(CliError::Input("--alpha must be finite".into()));
    }
    let model = match (kind, nu) {
        ("normal", None) => Model::Normal,
        ("normal", Some(_)) => return Err(CliError::Input("--nu applies to the t model only".into())),
        ("t", Some(nu)) => Model::T(TModel::new(nu).map_err(|e| CliError::Input(format!("--nu: {e}")))?),
        ("t", None) => return Err(CliError::Input("the t model needs --nu".into())),
        (other, _) => return Err(CliError::Input(format!("unknown model `{other}`"))),
    };
    let st = model.structure();
    let (nu1, nu2) = model.nu_pair();
    let conn = stat::statistical_connection(&st, alpha);
    let dual = stat::statistical_connection(&st, -alpha);
    let (r, rd) = stat::curvature_pair(&st, alpha);
    let (k, res) = geometry::constant_curvature_fit(st.inner_product(), &r);
    let g = models::coordinate_metric(&model, 0.0, 1.0).map_err(CliError::from_core)?;
    let g = nalgebra::DMatrix::from_fn(2, 2, |i, j| g[(i, j)]);
    let (closed, flat_alpha) = match model {
        // the normal e- and m-connections (alpha = +-1) are the flat ones
        Model::Normal => (None, Some(Num(1.0))),
        Model::T(t) => (
            Some(Num(models::t_curvature_constant(t.nu(), alpha).map_err(CliError::from_core)?)),
            models::flat_alpha(t.nu()).ok().map(Num),
        ),
    };
    Ok(ModelOutput {
        model: if matches!(model, Model::Normal) { "normal" } else { "t" },
        nu: nu.map(Num),
        alpha: Num(alpha),
        nu1: Num(nu1),
        nu2: Num(nu2),
        coordinate_metric: matrix(&g),
        skewness: vector_table(st.skewness().k()),
        levi_civita: vector_table(st.levi_civita().gamma()),
        connection: vector_table(conn.gamma()),
        dual_connection: vector_table(dual.gamma()),
        curvature_constant: Num(k),
        fit_residual: Num(res),
        closed_form_constant: closed,
        curvature_max: Num(r.max_abs()),
        dual_curvature_max: Num(rd.max_abs()),
        flat: r.max_abs() <= FLAT_TOL,
        dual_flat: rd.max_abs() <= FLAT_TOL,
        flat_alpha,
        conjugate_symmetry_defect: Num(stat::conjugate_symmetry_defect(&st)),
    })
}

fn conn_lines(title: &str, t: &[Vec<Vec<Num>>]) -> String {
    let mut s = format!("{title}\n");
    for (i, row) in t.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let parts: Vec<String> = v.iter().map(|x| x.text()).collect();
            s.push_str(&format!("  (e{}, e{}) -> [{}]\n", i + 1, j + 1, parts.join(", ")));
        }
    }
    s
}

pub fn to_text(o: &ModelOutput) -> String {
    let mut s = match o.nu {
        Some(nu) => format!("{} model, nu = {}, alpha = {}\n", o.model, nu.text(), o.alpha.text()),
        None => format!("{} model, alpha = {}\n", o.model, o.alpha.text()),
    };
    s.push_str(&format!(
        "  metric (nu1^2 dx^2 + nu2^2 dy^2)/y^2 with nu1 = {}, nu2 = {}\n  at (0,1): diag({}, {})\n\n",
        o.nu1.text(),
        o.nu2.text(),
        o.coordinate_metric[0][0].text(),
        o.coordinate_metric[1][1].text()
    ));
    s.push_str(&conn_lines("skewness K(e_i)e_j", &o.skewness));
    s.push_str(&conn_lines("alpha-connection nabla_{e_i} e_j", &o.connection));
    s.push_str(&conn_lines("dual connection nabla*_{e_i} e_j", &o.dual_connection));
    s.push_str(&format!(
        "\ncurvature constant {} (fit residual {})\n",
        o.curvature_constant.text(),
        o.fit_residual.text()
    ));
    if let Some(c) = o.closed_form_constant {
        s.push_str(&format!("closed form        {}\n", c.text()));
    }
    let r = if o.flat { "R = 0".to_string() } else { format!("R != 0 (max {})", o.curvature_max.text()) };
    let rd = if o.dual_flat { "R* = 0".to_string() } else { format!("R* != 0 (max {})", o.dual_curvature_max.text()) };
    s.push_str(&format!("{r}, {rd}\n"));
    if o.flat {
        s.push_str("flat\n");
    }
    match o.flat_alpha {
        Some(a) => s.push_str(&format!("flat alpha {}\n", a.text())),
        None => s.push_str("flat alpha none (K = 0)\n"),
    }
    s.push_str(&format!("conjugate symmetry defect {}\n", o.conjugate_symmetry_defect.text()));
    s
}
