use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{DensityMatrix, TangentState};
use crate::linalg::{eigh, exp_from_spectrum, CMatrix, HermitianOperator};
use crate::{Error, Result};

/// Pauli matrices; `pauli('x' | 'y' | 'z' | 'i')`.
pub fn pauli(which: char) -> HermitianOperator {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let m = match which {
        'x' => [z, o, o, z],
        'y' => [z, -i, i, z],
        'z' => [o, z, z, -o],
        'i' => [o, z, z, o],
        _ => panic!("unknown Pauli label {which:?}"),
    };
    HermitianOperator::new(CMatrix::from_row_slice(2, 2, &m)).expect("Pauli matrices are Hermitian")
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// One term of a k-local Hamiltonian: an operator on `local_dim^k`
/// dimensions acting on `sites` (listed in tensor-factor order).
#[derive(Debug, Clone)]
pub struct LocalTerm {
    pub sites: Vec<usize>,
    pub op: HermitianOperator,
}

/// `H = sum_j H_j` with each `H_j` acting on exactly `k` of `n_sites` sites.
#[derive(Debug, Clone)]
pub struct KLocalHamiltonian {
    n_sites: usize,
    local_dim: usize,
    k: usize,
    terms: Vec<LocalTerm>,
}

impl KLocalHamiltonian {
    pub fn new(n_sites: usize, local_dim: usize, k: usize) -> Result<Self> {
        if n_sites == 0 || local_dim == 0 {
            return Err(Error::InvalidHamiltonian("need at least one site of positive dimension".into()));
        }
        if k == 0 || k > n_sites {
            return Err(Error::InvalidHamiltonian(format!("locality {k} outside [1, {n_sites}]")));
        }
        Ok(Self { n_sites, local_dim, k, terms: Vec::new() })
    }

    pub fn qubits(n_sites: usize, k: usize) -> Result<Self> {
        Self::new(n_sites, 2, k)
    }

    /// Adds a term; repeated subsets are allowed and summed on assembly.
    pub fn add_term(&mut self, sites: &[usize], op: HermitianOperator) -> Result<()> {
        if sites.len() != self.k {
            return Err(Error::InvalidHamiltonian(format!(
                "term acts on {} sites, locality is {}",
                sites.len(),
                self.k
            )));
        }
        for (i, &s) in sites.iter().enumerate() {
            if s >= self.n_sites {
                return Err(Error::InvalidHamiltonian(format!("site {s} out of range 0..{}", self.n_sites)));
            }
            if sites[..i].contains(&s) {
                return Err(Error::InvalidHamiltonian(format!("site {s} repeated in one term")));
            }
        }
        let expected = self.local_dim.pow(self.k as u32);
        if op.dim() != expected {
            return Err(Error::dims(expected, op.dim()));
        }
        self.terms.push(LocalTerm { sites: sites.to_vec(), op });
        Ok(())
    }

    /// `sum_j op^{(j)}` over every site (a 1-local field).
    pub fn uniform_field(n_sites: usize, op: &HermitianOperator) -> Result<Self> {
        let mut h = Self::new(n_sites, op.dim(), 1)?;
        for j in 0..n_sites {
            h.add_term(&[j], op.clone())?;
        }
        Ok(h)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.n_sites as u32)
    }

    /// `max_S ||H_S||_inf` over site subsets `S`, where terms sharing a
    /// subset are summed first.
    pub fn max_term_norm(&self) -> f64 {
        let mut groups: BTreeMap<Vec<usize>, Vec<&LocalTerm>> = BTreeMap::new();
        for t in &self.terms {
            let mut key = t.sites.clone();
            key.sort_unstable();
            groups.entry(key).or_default().push(t);
        }
        groups
            .values()
            .map(|g| match g.as_slice() {
                [single] => single.op.operator_norm(),
                many => {
                    let sub = Self { terms: many.iter().map(|&t| t.clone()).collect(), ..self.clone_empty() };
                    sub.assemble().operator_norm()
                }
            })
            .fold(0.0, f64::max)
    }

    fn clone_empty(&self) -> Self {
        Self { n_sites: self.n_sites, local_dim: self.local_dim, k: self.k, terms: Vec::new() }
    }

    /// Global operator, each term padded with identities.
    pub fn assemble(&self) -> HermitianOperator {
        let d = self.local_dim;
        let dim = self.dim();
        let strides: Vec<usize> = (0..self.n_sites).map(|j| d.pow((self.n_sites - 1 - j) as u32)).collect();
        let sub_dim = d.pow(self.k as u32);
        let mut h = CMatrix::zeros(dim, dim);
        for term in &self.terms {
            let sub_strides: Vec<usize> = term.sites.iter().map(|&s| strides[s]).collect();
            // offsets[c] = global index shift for local configuration c
            let offsets: Vec<usize> = (0..sub_dim)
                .map(|c| {
                    let mut rem = c;
                    let mut off = 0;
                    for m in (0..self.k).rev() {
                        off += (rem % d) * sub_strides[m];
                        rem /= d;
                    }
                    off
                })
                .collect();
            for i in 0..dim {
                let mut row = 0;
                let mut own = 0;
                for &st in &sub_strides {
                    let digit = (i / st) % d;
                    row = row * d + digit;
                    own += digit * st;
                }
                let base = i - own;
                for (c, &off) in offsets.iter().enumerate() {
                    h[(i, base + off)] += term.op.matrix()[(row, c)];
                }
            }
        }
        HermitianOperator::hermitian_part(&h)
    }
}

/// `rho = e^{-ixH} rho0 e^{ixH}` together with `d rho = -i [H, rho]`.
pub fn phase_channel(rho0: &DensityMatrix, h: &HermitianOperator, x: f64) -> Result<TangentState> {
    rho0.op().check_same_dim(h)?;
    let u = exp_from_spectrum(&eigh(h), Complex64::new(0.0, -x));
    let rho = rho0.conjugate(&u)?;
    TangentState::unitary(rho, h)
}
