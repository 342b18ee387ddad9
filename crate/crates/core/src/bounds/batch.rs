use std::collections::BTreeMap;

use rand::Rng as _;
use rayon::prelude::*;

use super::continuity::{Evaluator, DEFAULT_LAMBDA_FLOOR};
use super::norms::{duality_check, monotonicity_check, submultiplicativity_check};
use crate::fisher::{extended_convexity_gap, povm_cfi, qfi, qfi_additivity_check};
use crate::report::{BoundId, BoundReport, ReportRow, Summary};
use crate::seed::{derive_seed, rng_from_seed, Rng};
use crate::states::{fvg_check, ginibre_with_rng, gue_with_rng, random_matrix, random_povm, tangent_with_rng, TangentState};
use crate::{Error, Result};

/// Every bound the batch runner knows how to evaluate on random samples.
pub const BOUND_SUITE: &[BoundId] = &[
    BoundId::TraceDuality,
    BoundId::NormMonotonicity,
    BoundId::TraceSubmultiplicativity,
    BoundId::FuchsVanDeGraaf,
    BoundId::SldNorm,
    BoundId::ExpDifference,
    BoundId::SldContinuityTight,
    BoundId::SldContinuityLoose,
    BoundId::SldContinuityDominance,
    BoundId::QfiContinuityChain,
    BoundId::QfiContinuity,
    BoundId::UnitarySldTight,
    BoundId::UnitarySldLoose,
    BoundId::ExtendedConvexity,
    BoundId::MeasurementMonotonicity,
    BoundId::QfiAdditivity,
];

const NORM_PAIRS: [(f64, f64); 3] = [(1.0, 2.0), (1.5, 3.0), (2.0, f64::INFINITY)];

#[derive(Debug, Clone)]
pub struct BatchConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub samples: usize,
    /// Sampled states satisfy `lambda_min >= rank_floor`.
    pub rank_floor: f64,
    /// Evaluator guard, see [`Evaluator`].
    pub lambda_floor: f64,
    /// Bounds to evaluate; ids outside [`BOUND_SUITE`] are ignored.
    pub bounds: Vec<BoundId>,
    /// Per-bound relative tolerance overrides.
    pub tolerances: BTreeMap<BoundId, f64>,
    pub exp_s: Vec<f64>,
    pub unitary_x: Vec<f64>,
    /// Scale of the sampled derivatives.
    pub tangent_scale: f64,
}

impl BatchConfig {
    pub fn new(seed: u64, dims: Vec<usize>, samples: usize) -> Self {
        Self {
            seed,
            dims,
            samples,
            rank_floor: 1e-2,
            lambda_floor: DEFAULT_LAMBDA_FLOOR,
            bounds: BOUND_SUITE.to_vec(),
            tolerances: BTreeMap::new(),
            exp_s: vec![0.1, 1.0, 10.0],
            unitary_x: vec![0.0, 0.3, 1.0],
            tangent_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.contains(&0) {
            return Err(Error::Domain("dimensions must be positive".into()));
        }
        let max_dim = self.dims.iter().copied().max().unwrap_or(1) as f64;
        if !(self.rank_floor > 0.0 && self.rank_floor * max_dim <= 1.0) {
            return Err(Error::Domain(format!(
                "rank_floor {} outside (0, 1/{max_dim}]",
                self.rank_floor
            )));
        }
        if !(self.tangent_scale > 0.0) {
            return Err(Error::Domain("tangent_scale must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SampleError {
    pub sample: u64,
    pub dim: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct BatchOutput {
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
    pub errors: Vec<SampleError>,
}

/// Two tangents at full rank: `rho` from the floored Ginibre ensemble and
/// `sigma` on the segment towards an independent draw, with the mixing
/// parameter returned as well.
pub fn sample_pair(dim: usize, rank_floor: f64, scale: f64, rng: &mut Rng) -> Result<(TangentState, TangentState, f64)> {
    let a = ginibre_with_rng(dim, dim, rng)?.with_eigenvalue_floor(rank_floor)?;
    let b = ginibre_with_rng(dim, dim, rng)?.with_eigenvalue_floor(rank_floor)?;
    let ta = tangent_with_rng(&a, scale, rng)?;
    let tb = tangent_with_rng(&b, scale, rng)?;
    let t: f64 = rng.random();
    let sigma = crate::states::DensityMatrix::mixture(&[1.0 - t, t], &[a, b])?;
    let dsigma = &ta.drho().scale(1.0 - t) + &tb.drho().scale(t);
    let ts = TangentState::new(sigma, crate::linalg::HermitianOperator::hermitian_part(dsigma.matrix()))?;
    Ok((ta, ts, t))
}

struct SampleRun<'a> {
    cfg: &'a BatchConfig,
    eval: Evaluator,
}

impl SampleRun<'_> {
    fn wants(&self, id: BoundId) -> bool {
        self.cfg.bounds.contains(&id)
    }

    fn wants_any(&self, ids: &[BoundId]) -> bool {
        ids.iter().any(|&id| self.wants(id))
    }

    fn run(&self, dim: usize, seed: u64) -> Result<Vec<BoundReport>> {
        let mut rng = rng_from_seed(seed);
        let mut out = Vec::new();
        let a = random_matrix(dim, dim, &mut rng);
        let b = random_matrix(dim, dim, &mut rng);
        if self.wants(BoundId::TraceDuality) {
            out.push(duality_check(&a, &b)?);
        }
        if self.wants(BoundId::NormMonotonicity) {
            for (p, q) in NORM_PAIRS {
                out.push(monotonicity_check(&a, p, q)?);
            }
        }
        if self.wants(BoundId::TraceSubmultiplicativity) {
            out.push(submultiplicativity_check(&a, &b)?);
        }

        let (t_rho, t_sigma, mix) = sample_pair(dim, self.cfg.rank_floor, self.cfg.tangent_scale, &mut rng)?;
        let h = gue_with_rng(dim, &mut rng);
        let dweight: f64 = rng.random_range(-1.0..1.0);
        let povm = random_povm(dim, dim + 1, &mut rng)?;
        let (rho, sigma) = (t_rho.rho(), t_sigma.rho());

        if self.wants(BoundId::FuchsVanDeGraaf) {
            out.push(fvg_check(rho, sigma)?);
        }
        if self.wants(BoundId::SldNorm) {
            out.push(self.eval.sld_norm_bound(&t_rho)?);
        }
        if self.wants(BoundId::ExpDifference) {
            for &s in &self.cfg.exp_s {
                out.push(self.eval.exp_diff_bound(rho, sigma, s)?);
            }
        }
        const CONTINUITY: [BoundId; 5] = [
            BoundId::SldContinuityTight,
            BoundId::SldContinuityLoose,
            BoundId::SldContinuityDominance,
            BoundId::QfiContinuityChain,
            BoundId::QfiContinuity,
        ];
        if self.wants_any(&CONTINUITY) {
            let suite = self.eval.continuity_suite(&t_rho, &t_sigma)?;
            out.extend(suite.into_iter().filter(|r| self.wants(r.bound_id)).map(|r| r.with("mix", mix)));
        }
        if self.wants_any(&[BoundId::UnitarySldTight, BoundId::UnitarySldLoose]) {
            for &x in &self.cfg.unitary_x {
                let suite = self.eval.unitary_suite(rho, sigma, &h, x)?;
                out.extend(suite.into_iter().filter(|r| self.wants(r.bound_id)));
            }
        }
        if self.wants(BoundId::ExtendedConvexity) {
            let comps = [(1.0 - mix, t_rho.clone()), (mix, t_sigma.clone())];
            out.push(extended_convexity_gap(&comps, &[dweight, -dweight])?.with("mix", mix));
        }
        if self.wants(BoundId::MeasurementMonotonicity) {
            let f_c = povm_cfi(&t_rho, &povm)?;
            out.push(BoundReport::new(BoundId::MeasurementMonotonicity, f_c, qfi(&t_rho)).with("outcomes", (dim + 1) as f64));
        }
        if self.wants(BoundId::QfiAdditivity) {
            out.push(qfi_additivity_check(&t_rho, &t_sigma)?);
        }
        for r in &mut out {
            if let Some(&tol) = self.cfg.tolerances.get(&r.bound_id) {
                r.retolerate(tol);
            }
        }
        Ok(out)
    }
}

/// Evaluates the configured bounds on `samples` draws per dimension.
///
/// Sample `i` in dimension `d` uses seed `derive_seed(derive_seed(seed, i), d)`.
/// Rows come out ordered by dimension, then sample, regardless of how the
/// work was scheduled. A sample that fails is recorded in `errors` and
/// contributes no rows.
pub fn batch_verify(cfg: &BatchConfig) -> Result<BatchOutput> {
    cfg.validate()?;
    let runner = SampleRun { cfg, eval: Evaluator::new(cfg.lambda_floor) };
    let jobs: Vec<(usize, u64)> = cfg
        .dims
        .iter()
        .flat_map(|&d| (0..cfg.samples as u64).map(move |i| (d, i)))
        .collect();
    let results: Vec<(usize, u64, u64, Result<Vec<BoundReport>>)> = jobs
        .into_par_iter()
        .map(|(dim, i)| {
            let seed = derive_seed(derive_seed(cfg.seed, i), dim as u64);
            (dim, i, seed, runner.run(dim, seed))
        })
        .collect();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (dim, sample, seed, res) in results {
        match res {
            Ok(reports) => rows.extend(reports.into_iter().map(|report| ReportRow { sample, seed, dim, report })),
            Err(e) => errors.push(SampleError { sample, dim, seed, message: e.to_string() }),
        }
    }
    let expected: Vec<BoundId> = cfg.bounds.iter().copied().filter(|id| BOUND_SUITE.contains(id)).collect();
    let summary = Summary::from_rows(&rows, &expected);
    Ok(BatchOutput { rows, summary, errors })
}
