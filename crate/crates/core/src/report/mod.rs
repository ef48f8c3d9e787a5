//! Command layer behind the `hdl` binary: run configuration, command
//! dispatch, and deterministic table/JSON rendering of reports.

mod identities;
mod render;

pub use identities::{model_commutation, run_identity_suite, FamilyResult, IdentityReport, SuiteOptions, FAMILIES};
pub use render::{render_json, render_table};

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::copolar_wp::{copolarised_subspace, pairings, wp_metrics};
use crate::cy_deformation::{canonical_trivialization, deformation_directions, kuranishi_series};
use crate::error::{Error, Result};
use crate::exterior::Bidegree;
use crate::lie_model::{fixtures, HermitianModel, Model, ModelSpec, Space, Theory};
use crate::linalg::CMat;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Cohomology,
    Kuranishi,
    Wp,
    Identities,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cohomology => "cohomology",
            Command::Kuranishi => "kuranishi",
            Command::Wp => "wp",
            Command::Identities => "identities",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    All,
    Index(usize),
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Direction> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(Direction::All);
        }
        s.parse().map(Direction::Index).map_err(|_| Error::InvalidArgument(format!("direction must be 'all' or an index, got '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Path to a model file, or the name of a bundled fixture.
    pub model_path: String,
    pub tolerance: f64,
    pub rank_tolerance: f64,
    pub seed: u64,
    pub order: usize,
    pub output: OutputFormat,
    pub theory: Option<Theory>,
    pub direction: Direction,
    pub dims: Vec<usize>,
    pub trials: usize,
}

impl RunConfig {
    pub fn new(model_path: impl Into<String>) -> RunConfig {
        RunConfig {
            model_path: model_path.into(),
            tolerance: 1e-9,
            rank_tolerance: 1e-8,
            seed: 0,
            order: crate::cy_deformation::DEFAULT_ORDER,
            output: OutputFormat::Table,
            theory: None,
            direction: Direction::All,
            dims: vec![2, 3, 4],
            trials: 200,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.rank_tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.order < 1 {
            return Err(Error::InvalidArgument("order must be at least 1".into()));
        }
        if self.dims.iter().any(|&n| n == 0 || n > crate::exterior::MAX_DIM) {
            return Err(Error::InvalidArgument("identity dimensions must lie in 1..=7".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    PropertyFailure,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::PropertyFailure => 1,
            Status::InputError => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub model: String,
    pub status: Status,
    pub results: Value,
    pub warnings: Vec<String>,
    pub defects: BTreeMap<String, f64>,
}

impl Report {
    fn new(command: Command, model: &str) -> Report {
        Report {
            schema: SCHEMA,
            command: command.name().to_string(),
            model: model.to_string(),
            status: Status::Ok,
            results: Value::Null,
            warnings: Vec::new(),
            defects: BTreeMap::new(),
        }
    }

    /// Report for an error raised before or during a command.
    pub fn from_error(command: Command, model: &str, err: &Error) -> Report {
        let mut r = Report::new(command, model);
        r.status = Status::InputError;
        r.results = json!({ "error": err.to_string(), "kind": error_kind(err) });
        r
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    fn defect(&mut self, key: &str, value: f64, limit: f64) {
        self.defects.insert(key.to_string(), value);
        if !(value <= limit) && self.status == Status::Ok {
            self.status = Status::PropertyFailure;
        }
    }

    fn fail(&mut self) {
        if self.status == Status::Ok {
            self.status = Status::PropertyFailure;
        }
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Parse { .. } => "ParseError",
        Error::NotClosedSquare { .. } => "NotClosedSquare",
        Error::IntegrabilityViolated(_) => "IntegrabilityViolated",
        Error::NotUnimodular => "NotUnimodular",
        Error::NotBalanced(_) => "NotBalanced",
        Error::NoTrivialization(_) => "NoTrivialization",
        Error::InvalidMetric(_) => "InvalidMetric",
        Error::InvalidArgument(_) => "InvalidArgument",
        _ => "Error",
    }
}

/// Reads a model file, falling back to the bundled fixtures by name.
pub fn load_spec(path: &str) -> Result<ModelSpec> {
    let p = Path::new(path);
    if p.exists() {
        return ModelSpec::from_path(p);
    }
    match fixtures::by_name(path) {
        Some(text) => ModelSpec::from_json(text),
        None => ModelSpec::from_path(p),
    }
}

/// Runs a command; every error is folded into the returned report.
pub fn run(command: Command, config: &RunConfig) -> Report {
    let spec = match config.check().and_then(|_| load_spec(&config.model_path)) {
        Ok(spec) => spec,
        Err(e) => return Report::from_error(command, &config.model_path, &e),
    };
    dispatch(command, config, &spec).unwrap_or_else(|e| Report::from_error(command, &spec.name, &e))
}

fn dispatch(command: Command, config: &RunConfig, spec: &ModelSpec) -> Result<Report> {
    if command == Command::Validate {
        return Ok(cmd_validate(spec));
    }
    let model = Model::build(spec)?;
    match command {
        Command::Validate => unreachable!("handled above"),
        Command::Cohomology => cmd_cohomology(config, &model),
        Command::Kuranishi => cmd_kuranishi(config, &model),
        Command::Wp => cmd_wp(config, &model),
        Command::Identities => Ok(cmd_identities(config, &model)),
    }
}

pub fn cmd_validate(spec: &ModelSpec) -> Report {
    let mut r = Report::new(Command::Validate, &spec.name);
    let v = Model::validate(spec);
    let ok = v.integrable && v.d_squared_zero && v.metric_positive;
    r.results = json!({
        "complex_dim": spec.complex_dim,
        "ok": ok,
        "verdicts": v,
    });
    r.defects.insert("d_squared".into(), v.d_squared_defect);
    r.defects.insert("unimodular".into(), v.unimodular_defect);
    if !v.unimodular {
        r.warnings.push("model is not unimodular; adjoint-based commands will refuse it".into());
    }
    if !ok {
        r.status = Status::InputError;
        if let Err(e) = Model::build(spec) {
            r.warnings.push(e.to_string());
        }
    }
    r
}

fn grid(n: usize, f: impl Fn(Bidegree) -> Result<usize>) -> Result<Vec<Vec<usize>>> {
    (0..=n).map(|p| (0..=n).map(|q| f(Bidegree::new(p, q))).collect()).collect()
}

pub fn cmd_cohomology(config: &RunConfig, model: &Model) -> Result<Report> {
    let mut r = Report::new(Command::Cohomology, model.name());
    let n = model.dim();
    let theories = match config.theory {
        Some(t) => vec![t],
        None => vec![Theory::DeRham, Theory::Dolbeault, Theory::Aeppli],
    };
    let h = if model.is_unimodular() {
        Some(HermitianModel::with_default_metric(model)?.with_rank_tol(config.rank_tolerance))
    } else {
        r.warnings.push("model is not unimodular; harmonic oracle skipped".into());
        None
    };
    let mut out = serde_json::Map::new();
    let mut agree = true;
    for t in theories {
        let (rank, harm) = match t {
            Theory::DeRham => {
                let rank: Vec<usize> = (0..=2 * n).map(|k| model.cohomology_dimension(t, Space::Degree(k))).collect::<Result<_>>()?;
                let harm = match &h {
                    Some(h) => Some(
                        (0..=2 * n).map(|k| h.cohomology(t, Space::Degree(k)).map(|c| c.harmonic_dimension)).collect::<Result<Vec<_>>>()?,
                    ),
                    None => None,
                };
                (json!(rank), harm.map(|v| json!(v)))
            }
            _ => {
                let rank = grid(n, |bd| model.cohomology_dimension(t, Space::Bidegree(bd)))?;
                let harm = match &h {
                    Some(h) => Some(grid(n, |bd| h.cohomology(t, Space::Bidegree(bd)).map(|c| c.harmonic_dimension))?),
                    None => None,
                };
                (json!(rank), harm.map(|v| json!(v)))
            }
        };
        let same = harm.as_ref().is_none_or(|hv| *hv == rank);
        agree &= same;
        let key = match t {
            Theory::DeRham => "de_rham",
            Theory::Dolbeault => "dolbeault",
            Theory::Aeppli => "aeppli",
        };
        out.insert(key.into(), json!({ "rank_oracle": rank, "harmonic_oracle": harm, "oracles_agree": same }));
    }
    let dd = model.ddbar_lemma_check();
    out.insert(
        "ddbar_lemma".into(),
        json!({
            "holds": dd.holds,
            "failures": dd.failures,
            "witness": dd.witness.as_ref().map(|w| w.describe(1e-12)),
        }),
    );
    out.insert("metric_flags".into(), json!(model.metric_flags(model.default_metric())));
    r.results = Value::Object(out);
    if !agree {
        r.warnings.push("rank and harmonic oracles disagree".into());
        r.fail();
    }
    Ok(r)
}

pub fn cmd_kuranishi(config: &RunConfig, model: &Model) -> Result<Report> {
    let mut r = Report::new(Command::Kuranishi, model.name());
    let h = HermitianModel::with_default_metric(model)?.with_rank_tol(config.rank_tolerance);
    let u = canonical_trivialization(model, h.metric())?.normalize(h.metric());
    let dirs = deformation_directions(&h, &u)?;
    let chosen: Vec<usize> = match config.direction {
        Direction::All => (0..dirs.len()).collect(),
        Direction::Index(i) if i < dirs.len() => vec![i],
        Direction::Index(i) => {
            return Err(Error::InvalidArgument(format!("direction {i} out of range (model has {})", dirs.len())))
        }
    };
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    let mut worst_proj = 0.0f64;
    for i in chosen {
        match kuranishi_series(&h, &u, &dirs[i], config.order) {
            Ok(s) => {
                let summary = s.summary(&h);
                worst = s.residuals.iter().copied().fold(worst, f64::max);
                worst_proj = s.psi_projection_defects.iter().copied().fold(worst_proj, f64::max);
                rows.push(json!({
                    "direction": i,
                    "verdict": format!("unobstructed to order {}", config.order),
                    "obstructed_at": Value::Null,
                    "orders": summary,
                }));
            }
            Err(Error::ObstructionNotExact { order, residual }) => {
                r.warnings.push(format!("direction {i}: obstruction at order {order} (residual {residual:.3e})"));
                rows.push(json!({
                    "direction": i,
                    "verdict": format!("obstructed at order {order}"),
                    "obstructed_at": order,
                    "obstruction_residual": residual,
                }));
            }
            Err(e) => return Err(e),
        }
    }
    r.results = json!({ "order": config.order, "directions_available": dirs.len(), "directions": rows });
    r.defect("max_mc_residual", worst, config.tolerance.max(1e-10));
    r.defect("max_psi_projection", worst_proj, config.tolerance);
    Ok(r)
}

fn matrix_json(m: &CMat) -> Value {
    json!((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn cmd_wp(config: &RunConfig, model: &Model) -> Result<Report> {
    let mut r = Report::new(Command::Wp, model.name());
    let h = HermitianModel::with_default_metric(model)?.with_rank_tol(config.rank_tolerance);
    let u = canonical_trivialization(model, h.metric())?.normalize(h.metric());
    let dd = model.ddbar_lemma_check();
    if !dd.holds {
        r.warnings.push("NotDdbar: the model fails the ddbar-lemma; directions without a d-closed representative are excluded".into());
    }
    let space = copolarised_subspace(&h)?;
    let m = wp_metrics(&h, &u, &space)?;
    for (i, why) in &m.excluded {
        r.warnings.push(format!("direction {i} excluded: {why}"));
    }
    let hr = pairings(&h)?;
    let psd = m.g2_minus_gamma_psd(config.tolerance);
    r.results = json!({
        "copolarised": space.summary(),
        "directions": m.directions,
        "denominator": m.denominator,
        "volume": m.volume,
        "gram_g1": matrix_json(&m.gram_g1),
        "gram_g2": matrix_json(&m.gram_g2),
        "gram_gamma": matrix_json(&m.gram_gamma),
        "per_direction": m.per_direction,
        "min_eigenvalues": {
            "g1": m.g1_min_eigenvalue,
            "g2": m.g2_min_eigenvalue,
            "gamma": m.gamma_min_eigenvalue,
            "g2_minus_gamma": m.g2_minus_gamma_min_eigenvalue,
        },
        "g2_minus_gamma_psd": psd,
        "pairings": hr.checks,
    });
    r.defect("decomposition_formulas", m.max_formula_defect(), config.tolerance);
    r.defect("gram_asymmetry", m.asymmetry, 1e-8);
    r.defects.insert("g2_vs_gamma".into(), crate::copolar_wp::gram_distance(&m.gram_g2, &m.gram_gamma));
    r.defects.insert("g1_vs_g2".into(), crate::copolar_wp::gram_distance(&m.gram_g1, &m.gram_g2));
    if !psd {
        r.fail();
    }
    if !hr.checks.passes(config.tolerance) {
        r.warnings.push("Hodge-Riemann sign conditions fail on this model".into());
        r.fail();
    }
    Ok(r)
}

pub fn cmd_identities(config: &RunConfig, model: &Model) -> Report {
    let mut r = Report::new(Command::Identities, model.name());
    let suite = run_identity_suite(&config.dims, config.trials, config.seed, config.tolerance, SuiteOptions::default());
    let comm = model_commutation(model, 3, config.seed);
    r.results = json!({
        "dims": suite.dims,
        "trials": suite.trials,
        "seed": suite.seed,
        "families": suite.families,
        "model_commutation_defect": comm,
    });
    for f in &suite.families {
        r.defect(&f.family, f.max_defect, config.tolerance);
    }
    match comm {
        Some(d) => r.defect("model_commutation", d, 1e-8),
        None => r.warnings.push("model is not unimodular; model-level commutation relations skipped".into()),
    }
    r
}
