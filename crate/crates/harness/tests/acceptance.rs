//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use qfibounds::{run, ExperimentConfig, ExperimentOutput, RunManifest};
use qfibounds_core::bounds::BOUND_SUITE;
use qfibounds_core::entanglement::ghz_vector;
use qfibounds_core::fisher::{pure_tangent, qfi, qfi_pure_oracle, sld_integral_default, sld_residual, sld_spectral, DEFAULT_CUTOFF};
use qfibounds_core::linalg::HermitianOperator;
use qfibounds_core::seed::{derive_seed, rng_from_seed};
use qfibounds_core::states::{ginibre_with_rng, gue_with_rng, haar_vector, pauli, tangent_with_rng, DensityMatrix};
use qfibounds_core::{BoundId, CVector, TangentState, C64};
use rayon::prelude::*;

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str, out: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::from_file(&configs_dir().join(name)).expect("acceptance config");
    cfg.output_dir = out.join(name.trim_end_matches(".json"));
    cfg
}

fn opnorm(m: &HermitianOperator) -> f64 {
    m.operator_norm()
}

// 1. SLD residual and spectral/integral agreement.
fn criterion_1() -> Outcome {
    const PER_DIM: u64 = 2500;
    const FLOOR: f64 = 0.02;
    let start = Instant::now();
    let dims = [2usize, 3, 4, 8];
    let jobs: Vec<(usize, u64)> = dims.iter().flat_map(|&d| (0..PER_DIM).map(move |i| (d, i))).collect();
    let stats: Vec<(f64, f64, f64)> = jobs
        .into_par_iter()
        .map(|(dim, i)| {
            let mut rng = rng_from_seed(derive_seed(derive_seed(SEED, i), dim as u64));
            let rho = ginibre_with_rng(dim, dim, &mut rng).unwrap().with_eigenvalue_floor(FLOOR).unwrap();
            let t = tangent_with_rng(&rho, 1.0, &mut rng).unwrap();
            let spec = sld_spectral(&t, DEFAULT_CUTOFF).unwrap().sld;
            let int = sld_integral_default(&t).unwrap().sld;
            let r_spec = sld_residual(&t, &spec) / dim as f64;
            let r_int = sld_residual(&t, &int) / dim as f64;
            (r_spec, r_int, opnorm(&(&spec - &int)))
        })
        .collect();
    let max = |f: fn(&(f64, f64, f64)) -> f64| stats.iter().map(f).fold(0.0, f64::max);
    let (rs, ri, diff) = (max(|s| s.0), max(|s| s.1), max(|s| s.2));
    let elapsed = start.elapsed();
    let pass = stats.len() == 10_000 && rs <= 1e-9 && ri <= 1e-9 && diff <= 1e-7 && elapsed <= Duration::from_secs(120);
    Outcome {
        pass,
        detail: format!(
            "{} tangents, max residual/dim spectral {rs:.2e} integral {ri:.2e} (<= 1e-9), max ||L_spec - L_int||_inf {diff:.2e} (<= 1e-7), {:.1}s (<= 120s)",
            stats.len(),
            elapsed.as_secs_f64()
        ),
    }
}

fn pure_variance(psi: &CVector, dpsi: &CVector) -> f64 {
    let nn = psi.dotc(psi).re;
    let dd = dpsi.dotc(dpsi).re;
    let pd = psi.dotc(dpsi);
    4.0 * (dd / nn - pd.norm_sqr() / (nn * nn))
}

// qubit QFI from the Bloch vector: |dr|^2 + (r.dr)^2 / (1 - |r|^2)
fn bloch_qfi(t: &TangentState) -> f64 {
    let comp = |op: &HermitianOperator, m: &HermitianOperator| (op.matrix() * m.matrix()).trace().re;
    let paulis = [pauli('x'), pauli('y'), pauli('z')];
    let r: Vec<f64> = paulis.iter().map(|p| comp(p, t.rho().op())).collect();
    let dr: Vec<f64> = paulis.iter().map(|p| comp(p, t.drho())).collect();
    let r2: f64 = r.iter().map(|x| x * x).sum();
    let dr2: f64 = dr.iter().map(|x| x * x).sum();
    let rdr: f64 = r.iter().zip(&dr).map(|(a, b)| a * b).sum();
    dr2 + rdr * rdr / (1.0 - r2)
}

// 2. QFI oracles.
fn criterion_2() -> Outcome {
    let haar: Vec<(f64, f64)> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let dim = 2 + (i as usize % 15);
            let mut rng = rng_from_seed(derive_seed(SEED, i));
            let psi = haar_vector(dim, &mut rng);
            let h = gue_with_rng(dim, &mut rng);
            let dpsi = (h.matrix() * &psi) * C64::new(0.0, -1.0);
            let f = qfi(&pure_tangent(&psi, &dpsi).unwrap());
            let oracle = qfi_pure_oracle(&psi, &dpsi).unwrap();
            let independent = pure_variance(&psi, &dpsi);
            ((f - oracle).abs(), (f - independent).abs())
        })
        .collect();
    let haar_err = haar.iter().map(|e| e.0.max(e.1)).fold(0.0, f64::max);

    let mut ghz_err = 0.0f64;
    for n in 2..=8usize {
        let psi = ghz_vector(n);
        let dim = 1usize << n;
        let diag: Vec<f64> = (0..dim).map(|b| 0.5 * (n as f64 - 2.0 * b.count_ones() as f64)).collect();
        let h = HermitianOperator::from_real_diagonal(&diag);
        let t = TangentState::unitary(DensityMatrix::pure(&psi).unwrap(), &h).unwrap();
        ghz_err = ghz_err.max((qfi(&t) - (n * n) as f64).abs());
    }

    let mut bloch_err = 0.0f64;
    for p in [0.2, 0.5, 0.8] {
        let rho = DensityMatrix::new(&HermitianOperator::identity(2).scale(0.5) + &pauli('x').scale(0.5 * p)).unwrap();
        let t = TangentState::unitary(rho, &pauli('z').scale(0.5)).unwrap();
        let f = qfi(&t);
        bloch_err = bloch_err.max((f - p * p).abs()).max((bloch_qfi(&t) - p * p).abs());
    }
    let pass = haar.len() == 1000 && haar_err <= 1e-8 && ghz_err <= 1e-8 && bloch_err <= 1e-10;
    Outcome {
        pass,
        detail: format!(
            "Haar pure dims 2..16 max |F - oracle| {haar_err:.2e} (<= 1e-8), GHZ N=2..8 max |F - N^2| {ghz_err:.2e} (<= 1e-8), Bloch p in {{0.2,0.5,0.8}} max |F - p^2| {bloch_err:.2e} (<= 1e-10)"
        ),
    }
}

fn run_timed(cfg: &ExperimentConfig) -> (RunManifest, ExperimentOutput, Duration) {
    let start = Instant::now();
    let (m, o) = run(cfg).expect("experiment run");
    (m, o, start.elapsed())
}

// 3. Inequality certification.
fn criterion_3(out: &Path) -> Outcome {
    let cfg = load("bound-suite.json", out);
    let (m, _, elapsed) = run_timed(&cfg);
    let missing: Vec<&str> = BOUND_SUITE
        .iter()
        .filter(|id| m.summary.bounds.get(id.as_str()).is_none_or(|b| b.count == 0))
        .map(|id| id.as_str())
        .collect();
    let setup_ok = cfg.seed == 42 && cfg.samples == 10_000 && cfg.dims == [2, 3, 4] && cfg.rank_floor == 1e-2;
    let pass = setup_ok
        && missing.is_empty()
        && m.summary.total_violations == 0
        && m.total_errors == 0
        && elapsed <= Duration::from_secs(600);
    Outcome {
        pass,
        detail: format!(
            "seed {} dims {:?} {} samples/dim: {} reports over {} bounds, {} violations, {} errors, missing {:?}, {:.1}s (<= 600s)",
            cfg.seed,
            cfg.dims,
            cfg.samples,
            m.summary.total_reports,
            m.summary.bounds.len(),
            m.summary.total_violations,
            m.total_errors,
            missing,
            elapsed.as_secs_f64()
        ),
    }
}

// 4. Continuity along converging and counterpoint families.
fn criterion_4(out: &Path) -> Outcome {
    let cfg = load("continuity-sweep.json", out);
    let (m, o, _) = run_timed(&cfg);
    let t = o.table("continuity_orders").expect("orders table");
    let fam = t.column("family").unwrap();
    let (mut conv_slope, mut conv_rhs_slope, mut conv_lhs_eps_min) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    let (mut cp_ratio, mut cp_limit) = (f64::INFINITY, f64::INFINITY);
    let (mut n_conv, mut n_cp) = (0, 0);
    for i in 0..t.rows.len() {
        let v = |c: &str| t.value(i, c).unwrap();
        if t.rows[i][fam] == "converging" {
            n_conv += 1;
            conv_slope = conv_slope.min(v("lhs_slope").min(2.0 - v("lhs_slope")));
            conv_rhs_slope = conv_rhs_slope.min(v("rhs_slope"));
            conv_lhs_eps_min = conv_lhs_eps_min.max(v("lhs_at_eps_min"));
        } else {
            n_cp += 1;
            cp_ratio = cp_ratio.min(v("lhs_at_eps_min") / v("lhs_limit"));
            cp_limit = cp_limit.min(v("lhs_limit"));
        }
    }
    let pass = n_conv > 0
        && n_cp == n_conv
        && m.is_clean()
        && conv_slope >= 0.9
        && conv_rhs_slope >= 0.5
        && cp_limit >= 1e-3
        && cp_ratio >= 0.5;
    Outcome {
        pass,
        detail: format!(
            "{n_conv} converging: lhs order within {:.3} of 1 (<= 0.1), rhs slope >= {conv_rhs_slope:.2} (>= 0.5), max lhs at eps_min {conv_lhs_eps_min:.2e}; {n_cp} counterpoint: min lhs limit {cp_limit:.3} (>= 1e-3), lhs/limit at eps_min >= {cp_ratio:.3} (>= 0.5); {} violations",
            1.0 - conv_slope,
            m.summary.total_violations
        ),
    }
}

// 5. Entanglement values, grid cross-check and the floored-GHZ pipeline.
fn criterion_5(out: &Path) -> Outcome {
    let cfg = load("entanglement-suite.json", out);
    let (m, o, elapsed) = run_timed(&cfg);
    let named = o.table("eg_named").unwrap();
    let err = |state: &str| {
        let i = named.rows.iter().position(|r| r[0] == state).unwrap();
        named.value(i, "abs_error").unwrap()
    };
    let (prod, bell, w) = (err("product"), err("bell"), err("w3"));
    let cross = o.table("eg_crosscheck").unwrap();
    let diff = (0..cross.rows.len()).map(|i| cross.value(i, "abs_diff").unwrap()).fold(0.0, f64::max);
    let scaling = o.table("scaling").unwrap();
    let mut grid: Vec<(usize, usize)> = (0..scaling.rows.len())
        .map(|i| (scaling.value(i, "n_sites").unwrap() as usize, scaling.value(i, "k").unwrap() as usize))
        .collect();
    grid.sort();
    let want: Vec<(usize, usize)> = (2..=6).flat_map(|n| [(n, 1), (n, 2)]).collect();
    let key_ids = [BoundId::QfiEntanglement, BoundId::ScalingSeparable, BoundId::ScalingLinear, BoundId::ScalingKLocal];
    let key_counts: Vec<usize> = key_ids.iter().map(|id| o.rows.iter().filter(|r| r.report.bound_id == *id).count()).collect();
    let key_violations = o.rows.iter().filter(|r| key_ids.contains(&r.report.bound_id) && !r.report.satisfied).count();
    let pass = prod <= 1e-10
        && bell <= 1e-6
        && w <= 1e-6
        && cross.rows.len() == 100
        && diff <= 0.01
        && grid == want
        && key_counts.iter().all(|&c| c >= want.len())
        && key_violations == 0
        && m.is_clean()
        && elapsed <= Duration::from_secs(300);
    Outcome {
        pass,
        detail: format!(
            "eg errors product {prod:.1e} bell {bell:.1e} w3 {w:.1e}; max |eg_pure - eg_brute| {diff:.2e} over {} states (<= 0.01); pipeline {} (N,k) rows, key bound rows {:?}, {} violations overall; {:.1}s (<= 300s)",
            cross.rows.len(),
            grid.len(),
            key_counts,
            m.summary.total_violations,
            elapsed.as_secs_f64()
        ),
    }
}

// 6. Typicality trend.
fn criterion_6(out: &Path) -> Outcome {
    let cfg = load("typicality.json", out);
    let (m, o, _) = run_timed(&cfg);
    let t = o.table("typicality").unwrap();
    let means: Vec<(usize, f64)> =
        (0..t.rows.len()).map(|i| (t.value(i, "n_qubits").unwrap() as usize, t.value(i, "mean").unwrap())).collect();
    let ns: Vec<usize> = means.iter().map(|m| m.0).collect();
    let monotone = means.windows(2).all(|w| w[1].1 > w[0].1);
    let pass = ns == [2, 4, 6] && cfg.samples == 200 && monotone && m.is_clean();
    Outcome { pass, detail: format!("{} samples per N, mean E_G by N {:?}, increasing: {monotone}", cfg.samples, means) }
}

fn report_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    for sub in std::fs::read_dir(dir).unwrap() {
        let sub = sub.unwrap().path();
        for f in std::fs::read_dir(&sub).unwrap() {
            let f = f.unwrap().path();
            if f.extension().is_some_and(|e| e == "csv") {
                let name = format!("{}/{}", sub.file_name().unwrap().to_string_lossy(), f.file_name().unwrap().to_string_lossy());
                files.push((name, std::fs::read(&f).unwrap()));
            }
        }
    }
    files.sort();
    files
}

// 7. Determinism of the whole acceptance config.
fn criterion_7(first: &Path, second: &Path) -> Outcome {
    for name in ["bound-suite.json", "continuity-sweep.json", "entanglement-suite.json", "typicality.json"] {
        run(&load(name, second)).expect("second run");
    }
    let (a, b) = (report_files(first), report_files(second));
    let names: Vec<&str> = a.iter().map(|f| f.0.as_str()).collect();
    let bytes: usize = a.iter().map(|f| f.1.len()).sum();
    let differing: Vec<&str> = a.iter().zip(&b).filter(|(x, y)| x != y).map(|(x, _)| x.0.as_str()).collect();
    let pass = !a.is_empty() && a.len() == b.len() && differing.is_empty();
    Outcome {
        pass,
        detail: format!("{} CSV files ({} bytes) compared across two runs, differing: {:?}; files {:?}", a.len(), bytes, differing, names),
    }
}

fn main() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let (first, second) = (tmp.path().join("run1"), tmp.path().join("run2"));
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("SLD correctness", Box::new(criterion_1)),
        ("QFI oracles", Box::new(criterion_2)),
        ("inequality certification", Box::new(|| criterion_3(&first))),
        ("continuity behaviour", Box::new(|| criterion_4(&first))),
        ("entanglement", Box::new(|| criterion_5(&first))),
        ("typicality", Box::new(|| criterion_6(&first))),
        ("determinism", Box::new(|| criterion_7(&first, &second))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failed += usize::from(!o.pass);
        println!("{} criterion {} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
