//! Dense Boolean-state analytics for small formulas.
//!
//! `psi_f = sum_x f(x)|x>` is held as a `2^n` vector (index = assignment,
//! variable 1 in the least significant bit). From it we derive reduced
//! density operators, Rényi and von Neumann entropies in nats, and the
//! zero-temperature trace of `exp(-beta H)`.

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::cnf::Formula;
use crate::network::{inner_product, Network, NetworkError};

/// Largest variable count for dense states.
pub const MAX_DENSE_VARS: u32 = 14;

/// Eigenvalues below this are treated as zero.
pub const EIGEN_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("{n} variables exceed the dense-state limit of {MAX_DENSE_VARS}")]
    TooManyVars { n: u32 },
    #[error("invalid bipartition: {0}")]
    BadBipartition(String),
    #[error("Rényi order must be a finite non-negative number, got {0}")]
    BadOrder(f64),
    #[error("inverse temperature must be non-negative, got {0}")]
    BadBeta(f64),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: u32,
    amplitudes: Vec<f64>,
}

impl DenseState {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Squared norm, which for a 0/1 vector is its number of ones.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.iter().all(|&a| a == 0.0)
    }

    /// `|+>^n - psi`, the indicator of the non-satisfying assignments.
    pub fn complement(&self) -> DenseState {
        DenseState {
            n: self.n,
            amplitudes: self.amplitudes.iter().map(|a| 1.0 - a).collect(),
        }
    }
}

fn guard(n: u32) -> Result<(), StateError> {
    if n > MAX_DENSE_VARS {
        Err(StateError::TooManyVars { n })
    } else {
        Ok(())
    }
}

/// `psi_f` as a dense vector.
pub fn dense_state(f: &Formula) -> Result<DenseState, StateError> {
    guard(f.num_vars())?;
    let amplitudes = (0..1u64 << f.num_vars())
        .map(|x| {
            if f.eval(|v| (x >> (v - 1)) & 1 == 1) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Ok(DenseState {
        n: f.num_vars(),
        amplitudes,
    })
}

/// Split of the variables: side A (traced out) is the mask, B the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bipartition {
    n: u32,
    mask: u32,
}

impl Bipartition {
    /// `mask` bit `v - 1` set means variable `v` is on side A.
    pub fn new(n: u32, mask: u32) -> Result<Self, StateError> {
        if n == 0 || n > 31 {
            return Err(StateError::BadBipartition(format!("{n} variables")));
        }
        let full = (1u32 << n) - 1;
        if mask & !full != 0 {
            return Err(StateError::BadBipartition(format!("mask {mask:#b} exceeds {n} variables")));
        }
        if mask == 0 || mask == full {
            return Err(StateError::BadBipartition("both sides must be nonempty".into()));
        }
        Ok(Bipartition { n, mask })
    }

    /// Side A given as variable indices.
    pub fn from_vars(n: u32, traced: &[u32]) -> Result<Self, StateError> {
        let mut mask = 0u32;
        for &v in traced {
            if v == 0 || v > n {
                return Err(StateError::BadBipartition(format!("variable {v} outside 1..={n}")));
            }
            mask |= 1 << (v - 1);
        }
        Bipartition::new(n, mask)
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn traced_vars(&self) -> Vec<u32> {
        (1..=self.n).filter(|v| self.mask >> (v - 1) & 1 == 1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyResult {
    /// The state is zero, so no density operator exists.
    Undefined,
    Value(f64),
}

impl EntropyResult {
    pub fn value(self) -> Option<f64> {
        match self {
            EntropyResult::Undefined => None,
            EntropyResult::Value(v) => Some(v),
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, EntropyResult::Value(_))
    }
}

// Collects bits of x selected by mask into a dense integer.
fn gather(x: u64, mask: u32) -> usize {
    let mut out = 0usize;
    let mut k = 0;
    for bit in 0..32 {
        if mask >> bit & 1 == 1 {
            out |= (((x >> bit) & 1) as usize) << k;
            k += 1;
        }
    }
    out
}

/// Nonzero eigenvalues of the normalized reduced density operator on B,
/// from the singular values of psi reshaped into an |A| x |B| matrix.
/// `None` for the zero state.
pub fn reduced_spectrum(s: &DenseState, p: &Bipartition) -> Result<Option<Vec<f64>>, StateError> {
    if p.n != s.n {
        return Err(StateError::BadBipartition(format!(
            "bipartition over {} variables, state over {}",
            p.n, s.n
        )));
    }
    let z0 = s.norm_squared();
    if z0 == 0.0 {
        return Ok(None);
    }
    let a_bits = p.mask.count_ones();
    let b_mask = ((1u32 << s.n) - 1) & !p.mask;
    let b_bits = b_mask.count_ones();
    let mut m = DMatrix::<f64>::zeros(1 << a_bits, 1 << b_bits);
    for (x, &amp) in s.amplitudes.iter().enumerate() {
        if amp != 0.0 {
            m[(gather(x as u64, p.mask), gather(x as u64, b_mask))] = amp;
        }
    }
    let sv = m.singular_values();
    let eig: Vec<f64> = sv
        .iter()
        .map(|s| s * s / z0)
        .filter(|&l| l >= EIGEN_CUTOFF)
        .collect();
    Ok(Some(eig))
}

/// `H_q = ln(sum_i lambda_i^q) / (1 - q)`; `q = 0` gives `ln(rank)` and
/// `q = 1` is forwarded to [`von_neumann_entropy`].
pub fn renyi_entropy(s: &DenseState, p: &Bipartition, q: f64) -> Result<EntropyResult, StateError> {
    if !q.is_finite() || q < 0.0 {
        return Err(StateError::BadOrder(q));
    }
    if q == 1.0 {
        return von_neumann_entropy(s, p);
    }
    let Some(eig) = reduced_spectrum(s, p)? else {
        return Ok(EntropyResult::Undefined);
    };
    let h = if q == 0.0 {
        (eig.len() as f64).ln()
    } else {
        eig.iter().map(|l| l.powf(q)).sum::<f64>().ln() / (1.0 - q)
    };
    // a pure reduced state can come out as -1e-16
    Ok(EntropyResult::Value(h.max(0.0)))
}

/// `-Tr(rho ln rho)`.
pub fn von_neumann_entropy(s: &DenseState, p: &Bipartition) -> Result<EntropyResult, StateError> {
    let Some(eig) = reduced_spectrum(s, p)? else {
        return Ok(EntropyResult::Undefined);
    };
    let h: f64 = eig.iter().map(|&l| -l * l.ln()).sum();
    Ok(EntropyResult::Value(h.max(0.0)))
}

/// `Tr exp(-beta H)` with `H` the diagonal projector onto non-satisfying
/// assignments: equals `#f + exp(-beta) * #(not f)` and tends to `#f`.
pub fn partition_trace(f: &Formula, beta: f64) -> Result<f64, StateError> {
    if beta.is_nan() || beta < 0.0 {
        return Err(StateError::BadBeta(beta));
    }
    let psi = dense_state(f)?;
    let weight = (-beta).exp();
    Ok(psi
        .amplitudes
        .iter()
        .map(|&a| if a == 1.0 { 1.0 } else { weight })
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CauchySchwarzReport {
    pub cxy: BigUint,
    pub cxx: BigUint,
    pub cyy: BigUint,
    pub holds: bool,
    pub equality: bool,
    /// `C{x,y}^2 / (C{x,x} C{y,y})` when the denominator is nonzero.
    pub cos_theta: Option<f64>,
}

/// Evaluates `C{x,y}^2 <= C{x,x} C{y,y}` for two fragments with matching
/// open wires.
pub fn cauchy_schwarz_check(x: &Network, y: &Network) -> Result<CauchySchwarzReport, StateError> {
    let cxy = inner_product(x, y)?;
    let cxx = inner_product(x, x)?;
    let cyy = inner_product(y, y)?;
    let lhs = &cxy * &cxy;
    let rhs = &cxx * &cyy;
    let cos_theta = (rhs != BigUint::ZERO).then(|| {
        let l = lhs.to_f64().unwrap_or(f64::INFINITY);
        let r = rhs.to_f64().unwrap_or(f64::INFINITY);
        l / r
    });
    Ok(CauchySchwarzReport {
        holds: lhs <= rhs,
        equality: lhs == rhs,
        cos_theta,
        cxy,
        cxx,
        cyy,
    })
}
