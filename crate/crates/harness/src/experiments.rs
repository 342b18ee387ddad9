use qfibounds_core::bounds::{batch_verify, BatchConfig, Evaluator, SampleError, Variant, BOUND_SUITE};
use qfibounds_core::entanglement::{
    eg_brute, eg_pure, eg_trace_bound_check, scaling_pipeline, typicality_sweep, PipelineOptions, ScalingRow,
    SeeSawOptions, MAX_PIPELINE_DIM,
};
use qfibounds_core::fisher::qfi;
use qfibounds_core::report::{format_f64, ReportRow};
use qfibounds_core::seed::{derive_seed, rng_from_seed};
use qfibounds_core::states::{ginibre_with_rng, haar_vector, tangent_with_rng, DensityMatrix};
use qfibounds_core::{BoundId, BoundReport, CVector, TangentState, C64};
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::Result;

/// A named plain table written next to the reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric value at `row`, `col` (parses the stored text).
    pub fn value(&self, row: usize, col: &str) -> Option<f64> {
        let c = self.column(col)?;
        let s = self.rows.get(row)?.get(c)?;
        match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => s.parse().ok(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, v)| {
                        let val = match v.parse::<f64>() {
                            Ok(x) if x.is_finite() => serde_json::json!(x),
                            _ => serde_json::json!(v),
                        };
                        (h.clone(), val)
                    })
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

fn num(x: f64) -> String {
    format_f64(x)
}

/// Everything an experiment produced, before it is written out.
#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub rows: Vec<ReportRow>,
    /// Bound ids the experiment exercises; each gets a summary entry.
    pub expected: Vec<BoundId>,
    pub errors: Vec<SampleError>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl ExperimentOutput {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let mut out = match cfg.experiment {
        Experiment::BoundSuite => bound_suite(cfg, BOUND_SUITE)?,
        Experiment::UnitarySuite => bound_suite(cfg, &[BoundId::UnitarySldTight, BoundId::UnitarySldLoose])?,
        Experiment::ContinuitySweep => continuity_sweep(cfg)?,
        Experiment::EntanglementSuite => entanglement_suite(cfg)?,
        Experiment::ScalingSweep => scaling_sweep(cfg)?,
        Experiment::Typicality => typicality(cfg)?,
    };
    let tolerances = cfg.tolerance_map();
    if !tolerances.is_empty() {
        for row in &mut out.rows {
            if let Some(&tol) = tolerances.get(&row.report.bound_id) {
                row.report.retolerate(tol);
            }
        }
    }
    Ok(out)
}

fn bound_suite(cfg: &ExperimentConfig, suite: &[BoundId]) -> Result<ExperimentOutput> {
    let mut batch = BatchConfig::new(cfg.seed, cfg.dims.clone(), cfg.samples);
    batch.rank_floor = cfg.rank_floor;
    batch.lambda_floor = cfg.lambda_floor;
    batch.tolerances = cfg.tolerance_map();
    batch.bounds = match cfg.bound_filter() {
        Some(ids) => suite.iter().copied().filter(|id| ids.contains(id)).collect(),
        None => suite.to_vec(),
    };
    let expected = batch.bounds.clone();
    let res = batch_verify(&batch)?;
    Ok(ExperimentOutput { rows: res.rows, expected, errors: res.errors, ..Default::default() })
}

const FAMILY_CONVERGING: f64 = 0.0;
const FAMILY_COUNTERPOINT: f64 = 1.0;

struct SweepSample {
    reports: Vec<BoundReport>,
    order_rows: Vec<Vec<String>>,
}

/// Points with `eps` at or below this enter the convergence-order fit.
pub const ORDER_FIT_MAX_EPS: f64 = 1e-2;

fn tail(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let t: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 <= ORDER_FIT_MAX_EPS).collect();
    if t.len() >= 2 {
        t
    } else {
        points.to_vec()
    }
}

/// Least-squares slope of `log y` against `log x` over positive pairs.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn sweep_sample(cfg: &ExperimentConfig, eval: &Evaluator, dim: usize, sample: u64, seed: u64) -> qfibounds_core::Result<SweepSample> {
    let mut rng = rng_from_seed(seed);
    let sigma = ginibre_with_rng(dim, dim, &mut rng)?.with_eigenvalue_floor(cfg.rank_floor)?;
    let tau = ginibre_with_rng(dim, dim, &mut rng)?.with_eigenvalue_floor(cfg.rank_floor)?;
    let t_sigma = tangent_with_rng(&sigma, 1.0, &mut rng)?;
    let delta = tangent_with_rng(&tau, 1.0, &mut rng)?.drho().clone();

    let mut reports = Vec::new();
    let mut order_rows = Vec::new();
    for family in [FAMILY_CONVERGING, FAMILY_COUNTERPOINT] {
        let mut lhs_pts = Vec::new();
        let mut rhs_pts = Vec::new();
        let mut last = (f64::NAN, f64::NAN, f64::INFINITY);
        for &eps in &cfg.eps_grid {
            let rho = DensityMatrix::mixture(&[1.0 - eps, eps], &[sigma.clone(), tau.clone()])?;
            let shift = if family == FAMILY_CONVERGING { eps } else { 1.0 };
            let drho = t_sigma.drho() + &delta.scale(shift);
            let t_rho = TangentState::new(rho, drho)?;
            let cont = eval.qfi_continuity_bound(&t_rho, &t_sigma)?;
            let sld = eval.sld_continuity_bound(&t_rho, &t_sigma, Variant::Tight)?;
            lhs_pts.push((eps, cont.lhs));
            rhs_pts.push((eps, cont.rhs));
            if eps < last.2 {
                last = (cont.lhs, cont.rhs, eps);
            }
            for r in [cont, sld] {
                reports.push(r.with("eps", eps).with("family", family));
            }
        }
        // lhs limit as eps -> 0: only the derivative differs
        let limit = if family == FAMILY_CONVERGING {
            0.0
        } else {
            let shifted = TangentState::new(sigma.clone(), t_sigma.drho() + &delta)?;
            (qfi(&shifted) - qfi(&t_sigma)).abs()
        };
        order_rows.push(vec![
            dim.to_string(),
            sample.to_string(),
            seed.to_string(),
            if family == FAMILY_CONVERGING { "converging" } else { "counterpoint" }.to_string(),
            num(loglog_slope(&tail(&lhs_pts))),
            num(loglog_slope(&tail(&rhs_pts))),
            num(last.2),
            num(last.0),
            num(last.0 / last.2),
            num(last.1),
            num(limit),
        ]);
    }
    Ok(SweepSample { reports, order_rows })
}

/// Two families approaching `(sigma, d sigma)`: `rho_eps = (1 - eps) sigma + eps tau`
/// with `d rho_eps = d sigma + eps Delta` (converging) or `d sigma + Delta`
/// (counterpoint, derivatives stay apart).
fn continuity_sweep(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let eval = Evaluator::new(cfg.lambda_floor);
    let jobs: Vec<(usize, u64)> =
        cfg.dims.iter().flat_map(|&d| (0..cfg.samples as u64).map(move |i| (d, i))).collect();
    let results: Vec<_> = jobs
        .into_par_iter()
        .map(|(dim, i)| {
            let seed = derive_seed(derive_seed(cfg.seed, i), dim as u64);
            (dim, i, seed, sweep_sample(cfg, &eval, dim, i, seed))
        })
        .collect();
    let mut out = ExperimentOutput {
        expected: vec![BoundId::QfiContinuity, BoundId::SldContinuityTight],
        ..Default::default()
    };
    let mut orders = Table::new(
        "continuity_orders",
        &["dim", "sample", "seed", "family", "lhs_slope", "rhs_slope", "eps_min", "lhs_at_eps_min", "lhs_over_eps",
            "rhs_at_eps_min", "lhs_limit"],
    );
    for (dim, sample, seed, res) in results {
        match res {
            Ok(s) => {
                out.rows.extend(s.reports.into_iter().map(|report| ReportRow { sample, seed, dim, report }));
                for r in s.order_rows {
                    orders.push(r);
                }
            }
            Err(e) => out.errors.push(SampleError { sample, dim, seed, message: e.to_string() }),
        }
    }
    let slopes = |fam: &str, col: &str| -> Vec<f64> {
        let fcol = orders.column("family").unwrap();
        (0..orders.rows.len())
            .filter(|&i| orders.rows[i][fcol] == fam)
            .filter_map(|i| orders.value(i, col))
            .collect()
    };
    let conv = slopes("converging", "lhs_slope");
    if !conv.is_empty() {
        let min = conv.iter().copied().fold(f64::INFINITY, f64::min);
        out.notes.push(format!("converging family: smallest log-log slope of |F(rho)-F(sigma)| is {}", num(min)));
    }
    let lim = slopes("counterpoint", "lhs_limit");
    if !lim.is_empty() {
        let min = lim.iter().copied().fold(f64::INFINITY, f64::min);
        out.notes.push(format!("counterpoint family: smallest lhs limit is {}", num(min)));
    }
    out.tables.push(orders);
    Ok(out)
}

fn see_saw_options(cfg: &ExperimentConfig, dim: usize) -> SeeSawOptions {
    let mut o = SeeSawOptions::for_dim(dim);
    o.n_components = o.n_components.min(cfg.max_components);
    o.restarts = cfg.seesaw_restarts.max(1);
    o.max_iterations = cfg.seesaw_iterations;
    o
}

fn pipeline_grid(cfg: &ExperimentConfig) -> (Vec<(usize, usize)>, Vec<String>) {
    let mut grid = Vec::new();
    let mut notes = Vec::new();
    for &n in &cfg.n_qubits {
        if n >= usize::BITS as usize || (1usize << n) > MAX_PIPELINE_DIM {
            notes.push(format!("skipped n={n}: dimension above {MAX_PIPELINE_DIM}"));
            continue;
        }
        for &k in &cfg.localities {
            if k > n {
                notes.push(format!("skipped n={n}, k={k}: locality exceeds site count"));
                continue;
            }
            grid.push((n, k));
        }
    }
    (grid, notes)
}

fn run_pipelines(cfg: &ExperimentConfig, out: &mut ExperimentOutput) -> Vec<ScalingRow> {
    let (grid, notes) = pipeline_grid(cfg);
    out.notes.extend(notes);
    let mut rows = Vec::new();
    for (idx, (n, k)) in grid.into_iter().enumerate() {
        let dim = 1usize << n;
        let opts = PipelineOptions {
            floor: cfg.sigma_floor,
            see_saw: Some(see_saw_options(cfg, dim)),
            seed: derive_seed(cfg.seed, (n * 16 + k) as u64),
            lambda_floor: cfg.lambda_floor,
        };
        match scaling_pipeline(n, k, &opts) {
            Ok(row) => {
                out.rows.extend(row.reports.iter().cloned().map(|report| ReportRow {
                    sample: idx as u64,
                    seed: opts.seed,
                    dim,
                    report,
                }));
                rows.push(row);
            }
            Err(e) => out.errors.push(SampleError { sample: idx as u64, dim, seed: opts.seed, message: e.to_string() }),
        }
    }
    rows
}

const PIPELINE_IDS: [BoundId; 8] = [
    BoundId::EgTraceDistance,
    BoundId::KLocalNorm,
    BoundId::QfiEntanglementGraded,
    BoundId::QfiEntanglement,
    BoundId::UnitarySldEntanglement,
    BoundId::ScalingSeparable,
    BoundId::ScalingLinear,
    BoundId::ScalingKLocal,
];

fn scaling_table(rows: &[ScalingRow]) -> Table {
    let mut t = Table::new(
        "scaling",
        &["n_sites", "k", "qfi", "rhs_separable", "rhs_linear", "rhs_klocal", "eg", "nu", "fidelity", "ghz_reference"],
    );
    for r in rows {
        t.push(vec![
            r.n_sites.to_string(),
            r.k.to_string(),
            num(r.qfi),
            num(r.rhs_separable),
            num(r.rhs_linear),
            num(r.rhs_klocal),
            num(r.eg),
            num(r.nu),
            num(r.fidelity),
            num(r.ghz_reference),
        ]);
    }
    t
}

fn named_states() -> Vec<(&'static str, usize, CVector, f64)> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut product = CVector::zeros(4);
    product[0] = C64::new(0.6, 0.0);
    product[1] = C64::new(0.0, 0.8);
    let bell = CVector::from_vec(vec![C64::new(r, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(r, 0.0)]);
    let w3 = 1.0 / 3f64.sqrt();
    let mut w = CVector::zeros(8);
    for i in [1usize, 2, 4] {
        w[i] = C64::new(w3, 0.0);
    }
    vec![("product", 2, product, 0.0), ("bell", 2, bell, 0.5), ("w3", 3, w, 5.0 / 9.0)]
}

/// Named states, a pure-state cross-check against the grid oracle, trace
/// bounds on the optimal products, and the floored-GHZ pipeline.
fn entanglement_suite(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput { expected: PIPELINE_IDS.to_vec(), ..Default::default() };

    let mut named = Table::new("eg_named", &["state", "n_sites", "eg", "expected", "abs_error", "converged"]);
    for (name, n, psi, expected) in named_states() {
        let res = eg_pure(&psi, n, 2, cfg.restarts, cfg.seed)?;
        named.push(vec![
            name.into(),
            n.to_string(),
            num(res.eg),
            num(expected),
            num((res.eg - expected).abs()),
            res.converged.to_string(),
        ]);
    }
    out.tables.push(named);

    let checks: Vec<_> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(derive_seed(cfg.seed, i), 4);
            let psi = haar_vector(4, &mut rng_from_seed(seed));
            let run = || -> qfibounds_core::Result<(f64, f64, BoundReport)> {
                let res = eg_pure(&psi, 2, 2, cfg.restarts, seed)?;
                let brute = eg_brute(&psi, cfg.brute_grid)?;
                let rho = DensityMatrix::pure(&psi)?;
                let report = eg_trace_bound_check(&rho, &res.best_ansatz)?;
                Ok((res.eg, brute, report))
            };
            (i, seed, run())
        })
        .collect();
    let mut cross = Table::new("eg_crosscheck", &["sample", "seed", "eg_pure", "eg_brute", "abs_diff"]);
    for (sample, seed, res) in checks {
        match res {
            Ok((eg, brute, report)) => {
                cross.push(vec![sample.to_string(), seed.to_string(), num(eg), num(brute), num((eg - brute).abs())]);
                out.rows.push(ReportRow { sample, seed, dim: 4, report });
            }
            Err(e) => out.errors.push(SampleError { sample, dim: 4, seed, message: e.to_string() }),
        }
    }
    out.tables.push(cross);

    let offset = out.rows.len();
    let rows = run_pipelines(cfg, &mut out);
    // pipeline rows are numbered after the cross-check samples
    for row in &mut out.rows[offset..] {
        row.sample += cfg.samples as u64;
    }
    out.tables.push(scaling_table(&rows));
    Ok(out)
}

fn scaling_sweep(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput { expected: PIPELINE_IDS.to_vec(), ..Default::default() };
    let rows = run_pipelines(cfg, &mut out);
    out.tables.push(scaling_table(&rows));
    Ok(out)
}

fn typicality(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let rows = typicality_sweep(&cfg.n_qubits, cfg.samples, cfg.seed, cfg.restarts)?;
    let mut t = Table::new("typicality", &["n_qubits", "samples", "mean", "p05", "min", "max", "increasing"]);
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    for r in &rows {
        let inc = r.mean > prev;
        monotone &= inc;
        prev = r.mean;
        t.push(vec![
            r.n_qubits.to_string(),
            r.samples.to_string(),
            num(r.mean),
            num(r.p05),
            num(r.min),
            num(r.max),
            inc.to_string(),
        ]);
    }
    let mut out = ExperimentOutput { tables: vec![t], ..Default::default() };
    out.notes.push(format!("mean geometric entanglement increasing in n: {monotone}"));
    Ok(out)
}
