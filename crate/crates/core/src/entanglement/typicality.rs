use rayon::prelude::*;
use serde::Serialize;

use super::eg_pure;
use crate::seed::{derive_seed, rng_from_seed};
use crate::states::haar_vector;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypicalityRow {
    pub n_qubits: usize,
    pub samples: usize,
    pub mean: f64,
    pub p05: f64,
    pub min: f64,
    pub max: f64,
}

/// Geometric entanglement statistics of Haar-random `n`-qubit states.
///
/// Sample `i` at size `n` uses seed `derive_seed(derive_seed(seed, i), n)`
/// for both the state and the optimiser restarts.
pub fn typicality_sweep(n_qubits: &[usize], samples: usize, seed: u64, restarts: usize) -> Result<Vec<TypicalityRow>> {
    let mut rows = Vec::with_capacity(n_qubits.len());
    for &n in n_qubits {
        let mut egs = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let s = derive_seed(derive_seed(seed, i), n as u64);
                let psi = haar_vector(1usize << n, &mut rng_from_seed(s));
                eg_pure(&psi, n, 2, restarts, s).map(|r| r.eg)
            })
            .collect::<Result<Vec<f64>>>()?;
        egs.sort_by(f64::total_cmp);
        let (mean, p05, min, max) = if egs.is_empty() {
            (f64::NAN, f64::NAN, f64::NAN, f64::NAN)
        } else {
            let idx = ((egs.len() - 1) as f64 * 0.05).round() as usize;
            (egs.iter().sum::<f64>() / egs.len() as f64, egs[idx], egs[0], egs[egs.len() - 1])
        };
        rows.push(TypicalityRow { n_qubits: n, samples, mean, p05, min, max });
    }
    Ok(rows)
}
