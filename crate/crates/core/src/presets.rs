//! Named Hamiltonians and matrix-file input.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeDim;
use crate::linalg::{kron, ComplexMatrix, HERMITIAN_TOL};
use crate::weyl::{dft_operator, infer_qudits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianPreset {
    /// `x̂ = diag(0, 1, …, d−1)` on one qudit.
    Diag012,
    /// `x̂ ⊗ x̂` on two qudits.
    Xx,
    /// `x̂ + p̂` with `p̂ = F x̂ F†`.
    XPlusP,
}

impl HamiltonianPreset {
    pub const ALL: [HamiltonianPreset; 3] = [
        HamiltonianPreset::Diag012,
        HamiltonianPreset::Xx,
        HamiltonianPreset::XPlusP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HamiltonianPreset::Diag012 => "diag012",
            HamiltonianPreset::Xx => "xx",
            HamiltonianPreset::XPlusP => "xplusp",
        }
    }

    pub fn n_qudits(self) -> usize {
        match self {
            HamiltonianPreset::Xx => 2,
            _ => 1,
        }
    }

    pub fn matrix(self, dim: PrimeDim) -> ComplexMatrix {
        let x = position_operator(dim);
        match self {
            HamiltonianPreset::Diag012 => x,
            HamiltonianPreset::Xx => kron(&x, &x),
            HamiltonianPreset::XPlusP => {
                let p = momentum_operator(dim);
                x.add(&p).expect("same shape")
            }
        }
    }
}

impl fmt::Display for HamiltonianPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HamiltonianPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HamiltonianPreset::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown Hamiltonian preset '{s}' (expected diag012, xx or xplusp)"
                ))
            })
    }
}

/// `x̂ = Σ_m m |x,m⟩⟨x,m|`.
pub fn position_operator(dim: PrimeDim) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&(0..dim.get()).map(f64::from).collect::<Vec<_>>())
}

/// `p̂ = F x̂ F†`.
pub fn momentum_operator(dim: PrimeDim) -> ComplexMatrix {
    let f = dft_operator(dim);
    f.matmul(&position_operator(dim))
        .and_then(|m| m.matmul(&f.adjoint()))
        .expect("square operators of equal size")
}

/// On-disk matrix: `{"dim": N, "entries": [[re, im], …]}`, `N×N` row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixFile {
            dim: m.rows(),
            entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_vec(
            self.dim,
            self.dim,
            self.entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
        )
    }

    pub fn parse(text: &str) -> Result<ComplexMatrix> {
        serde_json::from_str::<MatrixFile>(text)?.to_matrix()
    }

    pub fn load(path: &Path) -> Result<ComplexMatrix> {
        MatrixFile::parse(&std::fs::read_to_string(path)?)
    }
}

/// A Hamiltonian given by name or by file.
#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianSource {
    Preset(HamiltonianPreset),
    Matrix(ComplexMatrix),
}

impl HamiltonianSource {
    /// Hermitian matrix and qudit count for dimension `d`.
    pub fn resolve(&self, dim: PrimeDim) -> Result<(ComplexMatrix, usize)> {
        let m = match self {
            HamiltonianSource::Preset(p) => p.matrix(dim),
            HamiltonianSource::Matrix(m) => m.clone(),
        };
        let err = m.hermiticity_error()?;
        if err > HERMITIAN_TOL {
            return Err(Error::NotHermitian(err));
        }
        let n = infer_qudits(m.rows(), dim)?;
        Ok((m, n))
    }
}
