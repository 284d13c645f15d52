//! Named qudit states.

use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::PrimeDim;
use crate::linalg::{kron_all, ComplexMatrix};

/// Position eigenstate `|x,k⟩`.
pub fn position_ket(dim: PrimeDim, k: u32) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dim.as_usize()];
    v[(k % dim.get()) as usize] = Complex64::new(1.0, 0.0);
    v
}

/// Momentum eigenstate `|p,k⟩ = F|x,k⟩ = d^{-1/2} Σ_m ω^{mk}|x,m⟩`.
pub fn momentum_ket(dim: PrimeDim, k: u32) -> Vec<Complex64> {
    let norm = 1.0 / f64::from(dim.get()).sqrt();
    (0..dim.get())
        .map(|m| dim.omega(i64::from(dim.mul(m, k))) * norm)
        .collect()
}

pub fn pure_density(ket: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::outer(ket, ket)
}

pub fn maximally_mixed(size: usize) -> ComplexMatrix {
    ComplexMatrix::identity(size).scale(Complex64::new(1.0 / size as f64, 0.0))
}

/// Tensor product of kets, first factor most significant.
pub fn product_ket(kets: &[Vec<Complex64>]) -> Vec<Complex64> {
    kets.iter().fold(vec![Complex64::new(1.0, 0.0)], |acc, k| {
        acc.iter().flat_map(|&a| k.iter().map(move |&b| a * b)).collect()
    })
}

/// Single-qudit state presets accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatePreset {
    /// `|p,k⟩`, written `p<k>`.
    Momentum(u32),
    /// `|x,k⟩`, written `x<k>`.
    Position(u32),
    /// `I/d`, written `mixed`.
    Mixed,
}

impl StatePreset {
    pub fn density(self, dim: PrimeDim) -> Result<ComplexMatrix> {
        match self {
            StatePreset::Momentum(k) | StatePreset::Position(k) if k >= dim.get() => Err(Error::InvalidArgument(
                format!("state label {k} out of range for d={dim}"),
            )),
            StatePreset::Momentum(k) => Ok(pure_density(&momentum_ket(dim, k))),
            StatePreset::Position(k) => Ok(pure_density(&position_ket(dim, k))),
            StatePreset::Mixed => Ok(maximally_mixed(dim.as_usize())),
        }
    }
}

impl FromStr for StatePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "mixed" {
            return Ok(StatePreset::Mixed);
        }
        let bad = || Error::InvalidArgument(format!("unknown state preset '{s}' (expected p<k>, x<k> or mixed)"));
        let (kind, label) = s.split_at(s.char_indices().nth(1).map(|(i, _)| i).ok_or_else(bad)?);
        let k: u32 = label.parse().map_err(|_| bad())?;
        match kind {
            "p" => Ok(StatePreset::Momentum(k)),
            "x" => Ok(StatePreset::Position(k)),
            _ => Err(bad()),
        }
    }
}

/// Density matrix of a product of presets.
pub fn product_density(dim: PrimeDim, presets: &[StatePreset]) -> Result<ComplexMatrix> {
    let factors = presets.iter().map(|p| p.density(dim)).collect::<Result<Vec<_>>>()?;
    Ok(kron_all(&factors))
}
