//! The `report` command: geometry of one group spec.

use liestat::classify::{self, SolutionSpace};
use liestat::geometry::{self, Connection, CurvatureTensor};
use liestat::statistical::{self as stat, StatisticalStructure};
use liestat::{CubicForm, Tensor3};
use serde::Serialize;

use crate::format::{basis_names, matrix, nums, table, vec_text, Num};
use crate::spec::{GroupSpec, Loaded};
use crate::CliError;

/// Conjugate symmetry and flatness decisions.
const DECISION_TOL: f64 = 1e-9;
const ALPHAS: [f64; 3] = [-1.0, 0.0, 1.0];

#[derive(Debug, Serialize)]
pub struct Report {
    pub spec: GroupSpec,
    pub algebra: AlgebraSection,
    pub metric: MetricSection,
    pub levi_civita: Vec<Vec<Vec<Num>>>,
    pub u_map: Vec<Vec<Vec<Num>>>,
    pub curvature: Vec<CurvatureEntry>,
    pub ricci: Vec<Vec<Num>>,
    pub scalar_curvature: Num,
    pub sectional_curvatures: Vec<PlaneValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistical: Option<StatisticalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationSection>,
}

#[derive(Debug, Serialize)]
pub struct AlgebraSection {
    pub dim: usize,
    pub label: String,
    pub jacobi_defect: Num,
    pub unimodular: bool,
    pub unimodular_kernel: Vec<Vec<Num>>,
}

#[derive(Debug, Serialize)]
pub struct MetricSection {
    pub gram: Vec<Vec<Num>>,
}

/// Nonzero `R(e_i, e_j) e_k` with `i < j`, indices 1-based.
#[derive(Debug, Serialize)]
pub struct CurvatureEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Vec<Num>,
}

#[derive(Debug, Serialize)]
pub struct PlaneValue {
    pub plane: [usize; 2],
    pub value: Num,
}

#[derive(Debug, Serialize)]
pub struct StatisticalSection {
    pub cubic: Vec<(usize, usize, usize, Num)>,
    pub skewness: Vec<Vec<Vec<Num>>>,
    pub is_statistical: bool,
    pub torsion_defect: Num,
    pub codazzi_defect: Num,
    pub conjugate_symmetry_defect: Num,
    pub conjugate_symmetric: bool,
    /// Sectional values are frame-invariant only for conjugate-symmetric structures.
    pub sectional_invariant: bool,
    pub alpha: Vec<AlphaSection>,
    pub apolarity: ApolaritySection,
    pub hessian: HessianSection,
}

#[derive(Debug, Serialize)]
pub struct AlphaSection {
    pub alpha: Num,
    pub connection: Vec<Vec<Vec<Num>>>,
    pub curvature_max: Num,
    pub flat: bool,
    pub constant_curvature: Num,
    pub fit_residual: Num,
    pub constant: bool,
    pub statistical_sectional: Vec<PlaneValue>,
}

#[derive(Debug, Serialize)]
pub struct ApolaritySection {
    pub tau: Vec<Num>,
    pub e: Vec<Num>,
    pub trace_k: Vec<Num>,
    pub identity_tension: Vec<Num>,
    pub apolar: bool,
}

#[derive(Debug, Serialize)]
pub struct HessianSection {
    pub flat_defect: Num,
    pub flat_tolerance: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<CurvatureEntry>>,
}

#[derive(Debug, Serialize)]
pub struct ClassificationSection {
    pub dim: usize,
    pub label: String,
    pub rank_tolerance: Num,
    pub rank_threshold: Num,
    pub ambiguous: bool,
    pub components: Vec<String>,
    pub basis: Vec<Vec<Num>>,
}

impl ClassificationSection {
    pub fn new(sol: &SolutionSpace, n: usize, rank_tol: f64) -> Self {
        Self {
            dim: sol.dim,
            label: sol.label.to_string(),
            rank_tolerance: Num(rank_tol),
            rank_threshold: Num(sol.rank_threshold),
            ambiguous: sol.ambiguous,
            components: component_names(n),
            basis: sol.basis.iter().map(|b| nums(b.components())).collect(),
        }
    }
}

pub fn component_names(n: usize) -> Vec<String> {
    CubicForm::multi_indices(n).iter().map(|[i, j, k]| format!("{}{}{}", i + 1, j + 1, k + 1)).collect()
}

/// `table[i][j]` = vector `T(e_i, e_j)`.
pub fn vector_table(t: &Tensor3) -> Vec<Vec<Vec<Num>>> {
    let n = t.dim();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| Num(t[[i, j, k]])).collect()).collect()).collect()
}

fn curvature_entries(r: &liestat::Tensor4, snap: f64) -> Vec<CurvatureEntry> {
    let n = r.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let v: Vec<f64> = (0..n).map(|l| r[[i, j, k, l]]).collect();
                if v.iter().any(|x| x.abs() >= snap) {
                    out.push(CurvatureEntry { i: i + 1, j: j + 1, k: k + 1, value: nums(&v) });
                }
            }
        }
    }
    out
}

fn coordinate_planes(ip: &liestat::InnerProduct, r: &CurvatureTensor) -> Vec<PlaneValue> {
    let n = r.dim();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let x = liestat::algebra::unit(n, a);
            let y = liestat::algebra::unit(n, b);
            let v = geometry::sectional_curvature(ip, r, &x, &y).expect("frame vectors span a plane");
            out.push(PlaneValue { plane: [a + 1, b + 1], value: Num(v) });
        }
    }
    out
}

fn table_of(conn: &Connection) -> Vec<Vec<Vec<Num>>> {
    vector_table(conn.gamma())
}

pub fn build(loaded: &Loaded, with_classification: bool) -> Result<Report, CliError> {
    let Loaded { alg, ip, .. } = loaded;
    let n = alg.dim();
    let core = CliError::from_core;
    let lc = geometry::levi_civita(alg, ip).map_err(core)?;
    let u = geometry::u_map(alg, ip).map_err(core)?;
    let r = geometry::curvature(alg, &lc).map_err(core)?;
    let kernel = alg.unimodular_kernel();

    let statistical = match &loaded.cubic {
        None => None,
        Some(c) => Some(statistical_section(
            &StatisticalStructure::new(alg.clone(), ip.clone(), c.clone()).map_err(core)?,
            loaded.flat_tol,
        )?),
    };
    let classification = if with_classification {
        let mut sol = classify::classify(alg, ip, loaded.rank_tol).map_err(core)?;
        sol.label = loaded.label;
        Some(ClassificationSection::new(&sol, n, loaded.rank_tol))
    } else {
        None
    };

    Ok(Report {
        spec: loaded.spec.clone(),
        algebra: AlgebraSection {
            dim: n,
            label: loaded.label.to_string(),
            jacobi_defect: Num(alg.jacobi_defect()),
            unimodular: kernel.is_unimodular,
            unimodular_kernel: kernel.basis.iter().map(|v| nums(v)).collect(),
        },
        metric: MetricSection { gram: matrix(ip.gram()) },
        levi_civita: table_of(&lc),
        u_map: vector_table(&u),
        curvature: curvature_entries(r.r(), crate::format::ZERO_SNAP),
        ricci: matrix(&geometry::ricci(&r)),
        scalar_curvature: Num(geometry::scalar_curvature(ip, &r).map_err(core)?),
        sectional_curvatures: coordinate_planes(ip, &r),
        statistical,
        classification,
    })
}

fn statistical_section(st: &StatisticalStructure, flat_tol: f64) -> Result<StatisticalSection, CliError> {
    let core = CliError::from_core;
    let ip = st.inner_product();
    let n = st.dim();
    let check = stat::is_statistical(st.algebra(), ip, &stat::statistical_connection(st, 1.0)).map_err(core)?;
    let csd = stat::conjugate_symmetry_defect(st);
    let conj = csd <= DECISION_TOL;
    let alpha = ALPHAS
        .iter()
        .map(|&a| {
            let conn = stat::statistical_connection(st, a);
            let (r, _) = stat::curvature_pair(st, a);
            let (k, res) = geometry::constant_curvature_fit(ip, &r);
            let s = stat::statistical_curvature(st, a);
            AlphaSection {
                alpha: Num(a),
                connection: table_of(&conn),
                curvature_max: Num(r.max_abs()),
                flat: r.max_abs() <= DECISION_TOL,
                constant_curvature: Num(k),
                fit_residual: Num(res),
                constant: res <= DECISION_TOL,
                statistical_sectional: coordinate_planes(ip, &s),
            }
        })
        .collect();
    let ap = stat::apolarity(st);
    let e_curv = stat::curvature_pair(st, 1.0).0.max_abs();
    let components = match stat::hessian_curvature(st, flat_tol) {
        Ok(h) => Some(curvature_entries_all(&h)),
        Err(liestat::Error::NotFlat { .. }) => None,
        Err(e) => return Err(core(e)),
    };
    let cubic = CubicForm::multi_indices(n)
        .into_iter()
        .zip(st.cubic().components())
        .filter(|(_, v)| **v != 0.0)
        .map(|([i, j, k], v)| (i + 1, j + 1, k + 1, Num(*v)))
        .collect();
    Ok(StatisticalSection {
        cubic,
        skewness: vector_table(st.skewness().k()),
        is_statistical: check.is_statistical,
        torsion_defect: Num(check.torsion_defect),
        codazzi_defect: Num(check.codazzi_defect),
        conjugate_symmetry_defect: Num(csd),
        conjugate_symmetric: conj,
        sectional_invariant: conj,
        alpha,
        apolarity: ApolaritySection {
            apolar: ap.is_apolar(DECISION_TOL),
            tau: nums(&ap.tau),
            e: nums(&ap.e),
            trace_k: nums(&ap.trace_k),
            identity_tension: nums(&ap.identity_tension),
        },
        hessian: HessianSection { flat_defect: Num(e_curv), flat_tolerance: Num(flat_tol), components },
    })
}

/// Nonzero `H(e_i, e_j) e_k` over all ordered `(i, j)`.
fn curvature_entries_all(h: &liestat::Tensor4) -> Vec<CurvatureEntry> {
    let n = h.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v: Vec<f64> = (0..n).map(|l| h[[i, j, k, l]]).collect();
                if v.iter().any(|x| x.abs() >= crate::format::ZERO_SNAP) {
                    out.push(CurvatureEntry { i: i + 1, j: j + 1, k: k + 1, value: nums(&v) });
                }
            }
        }
    }
    out
}

fn vec_of(v: &[Num]) -> String {
    vec_text(&v.iter().map(|x| x.0).collect::<Vec<_>>())
}

fn connection_text(title: &str, t: &[Vec<Vec<Num>>]) -> String {
    let n = t.len();
    let mut header = vec!["nabla_{e_i} e_j".to_string()];
    header.extend(basis_names(n));
    let rows: Vec<Vec<String>> = (0..n)
        .flat_map(|i| {
            (0..n).map(move |j| {
                let mut row = vec![format!("i={} j={}", i + 1, j + 1)];
                row.extend(t[i][j].iter().map(|x| x.text()));
                row
            })
        })
        .collect();
    format!("{title}\n{}", table(&header, &rows))
}

fn planes_text(p: &[PlaneValue]) -> String {
    let header = vec!["plane".to_string(), "K".to_string()];
    let rows: Vec<Vec<String>> =
        p.iter().map(|v| vec![format!("e{}^e{}", v.plane[0], v.plane[1]), v.value.text()]).collect();
    table(&header, &rows)
}

fn matrix_text(m: &[Vec<Num>]) -> String {
    let n = m.len();
    let mut header = vec![String::new()];
    header.extend(basis_names(n));
    let rows: Vec<Vec<String>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = vec![format!("e{}", i + 1)];
            row.extend(r.iter().map(|x| x.text()));
            row
        })
        .collect();
    table(&header, &rows)
}

pub fn classification_text(c: &ClassificationSection) -> String {
    let mut out = format!(
        "classification\n  kernel dim {}  label {}  rank threshold {}{}\n",
        c.dim,
        c.label,
        c.rank_threshold.text(),
        if c.ambiguous { "  AMBIGUOUS RANK" } else { "" }
    );
    if !c.basis.is_empty() {
        let mut header = vec!["basis".to_string()];
        header.extend(c.components.iter().map(|s| format!("C{s}")));
        let rows: Vec<Vec<String>> = c
            .basis
            .iter()
            .enumerate()
            .map(|(b, v)| {
                let mut row = vec![format!("#{}", b + 1)];
                row.extend(v.iter().map(|x| x.text()));
                row
            })
            .collect();
        out.push_str(&table(&header, &rows));
    }
    out
}

pub fn to_text(rep: &Report) -> String {
    let mut out = String::new();
    let a = &rep.algebra;
    out.push_str(&format!(
        "algebra\n  dim {}  label {}  unimodular {}  jacobi defect {}\n\n",
        a.dim,
        a.label,
        a.unimodular,
        a.jacobi_defect.text()
    ));
    out.push_str("metric (Gram matrix)\n");
    out.push_str(&matrix_text(&rep.metric.gram));
    out.push('\n');
    out.push_str(&connection_text("Levi-Civita connection", &rep.levi_civita));
    out.push('\n');
    out.push_str("Riemannian curvature R(e_i,e_j)e_k (nonzero, i<j)\n");
    if rep.curvature.is_empty() {
        out.push_str("  R = 0\n");
    } else {
        let rows: Vec<Vec<String>> =
            rep.curvature.iter().map(|c| vec![format!("R(e{},e{})e{}", c.i, c.j, c.k), vec_of(&c.value)]).collect();
        out.push_str(&table(&["component".into(), "value".into()], &rows));
    }
    out.push_str("\nRicci tensor\n");
    out.push_str(&matrix_text(&rep.ricci));
    out.push_str(&format!("\nscalar curvature {}\n\nsectional curvatures\n", rep.scalar_curvature.text()));
    out.push_str(&planes_text(&rep.sectional_curvatures));

    if let Some(s) = &rep.statistical {
        out.push_str(&format!(
            "\nstatistical structure\n  statistical {}  conjugate symmetric {} (defect {})  apolar {}\n",
            s.is_statistical,
            s.conjugate_symmetric,
            s.conjugate_symmetry_defect.text(),
            s.apolarity.apolar
        ));
        out.push_str(&format!(
            "  tau {}  tr_g K {}  tau(id) {}\n",
            vec_of(&s.apolarity.tau),
            vec_of(&s.apolarity.trace_k),
            vec_of(&s.apolarity.identity_tension)
        ));
        for a in &s.alpha {
            out.push('\n');
            out.push_str(&connection_text(&format!("alpha-connection, alpha = {}", a.alpha.text()), &a.connection));
            out.push_str(&format!(
                "  flat {}  constant curvature {} (residual {}, {})\n",
                a.flat,
                a.constant_curvature.text(),
                a.fit_residual.text(),
                if a.constant { "constant" } else { "not constant" }
            ));
            out.push_str(if s.sectional_invariant {
                "  statistical sectional curvatures\n"
            } else {
                "  statistical sectional curvatures (frame values, not invariant: structure is not conjugate symmetric)\n"
            });
            out.push_str(&planes_text(&a.statistical_sectional));
        }
        match &s.hessian.components {
            Some(h) => {
                out.push_str("\nHessian curvature H(e_i,e_j)e_k (nonzero)\n");
                if h.is_empty() {
                    out.push_str("  H = 0\n");
                }
                let rows: Vec<Vec<String>> =
                    h.iter().map(|c| vec![format!("H(e{},e{})e{}", c.i, c.j, c.k), vec_of(&c.value)]).collect();
                out.push_str(&table(&["component".into(), "value".into()], &rows));
            }
            None => out.push_str(&format!(
                "\nHessian curvature not defined: alpha=1 curvature {} exceeds flatness tolerance {}\n",
                s.hessian.flat_defect.text(),
                s.hessian.flat_tolerance.text()
            )),
        }
    }
    if let Some(c) = &rep.classification {
        out.push('\n');
        out.push_str(&classification_text(c));
    }
    out
}
