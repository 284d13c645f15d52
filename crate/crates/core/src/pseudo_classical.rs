//! Linear Hamiltonians and the commensurability classification of their
//! single-step kernels.
//!
//! For `H_W(μ) = Σ_a (a_a m_a + b_a n_a) + c`, evaluated on representatives in
//! `[0, d)`, define `k_a = a·d·τ/π` and `k_b = b·d·τ/π`. When every `k` is an
//! even integer the step is the deterministic shift
//! `Δm ≡ k_b/2, Δn ≡ −k_a/2 (mod d)`. Odd integers leave the wraparound phase
//! `(−1)^k` uncancelled and the kernel spreads.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Lattice, PrimeDim};
use crate::path_integral::short_time_kernel;
use crate::propagator::WignerKernel;

/// Default tolerance on `|k − round(k)|`.
pub const INTEGRALITY_TOL: f64 = 1e-9;
/// Entries above this count towards a column's support.
pub const SUPPORT_TOL: f64 = 1e-10;

/// `H_W(μ) = Σ_a (a_a m_a + b_a n_a) + c` with `ħ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearHamiltonian {
    pub coeffs: Vec<(f64, f64)>,
    pub offset: f64,
}

impl LinearHamiltonian {
    pub fn new(coeffs: Vec<(f64, f64)>, offset: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("at least one qudit is required".into()));
        }
        if coeffs.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) || !offset.is_finite() {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        Ok(LinearHamiltonian { coeffs, offset })
    }

    pub fn single(a: f64, b: f64) -> Self {
        LinearHamiltonian {
            coeffs: vec![(a, b)],
            offset: 0.0,
        }
    }

    pub fn n_qudits(&self) -> usize {
        self.coeffs.len()
    }

    /// Values on the lattice, coordinates taken in `[0, d)`.
    pub fn lattice_function(&self, lat: &Lattice) -> Result<Vec<f64>> {
        if lat.n_qudits() != self.n_qudits() {
            return Err(Error::InvalidDims(format!(
                "{} coefficient pairs for {} qudits",
                self.n_qudits(),
                lat.n_qudits()
            )));
        }
        Ok((0..lat.size())
            .map(|i| {
                lat.coords(i)
                    .chunks_exact(2)
                    .zip(&self.coeffs)
                    .map(|(mn, (a, b))| a * f64::from(mn[0]) + b * f64::from(mn[1]))
                    .sum::<f64>()
                    + self.offset
            })
            .collect())
    }
}

/// Classification of one `k` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientClass {
    Even,
    Odd,
    NonInteger,
}

/// Overall classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Commensurability {
    /// Every `k` an even integer.
    Strict,
    /// Every `k` an integer, at least one odd.
    WeakOdd,
    /// Some `k` not an integer.
    Incommensurate,
}

impl fmt::Display for Commensurability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Commensurability::Strict => "strict",
            Commensurability::WeakOdd => "weak_odd",
            Commensurability::Incommensurate => "incommensurate",
        })
    }
}

/// Predicted lattice shift of one qudit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuditShift {
    /// `k_b/2`.
    pub dm: i64,
    /// `−k_a/2`.
    pub dn: i64,
    /// Both reduced to `[0, d)`.
    pub dm_mod: u32,
    pub dn_mod: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommensurabilityReport {
    pub dim: PrimeDim,
    pub tau: f64,
    pub tolerance: f64,
    /// `(k_a, k_b)` per qudit.
    pub k_values: Vec<(f64, f64)>,
    pub coefficient_classes: Vec<(CoefficientClass, CoefficientClass)>,
    pub class: Commensurability,
    /// Present only for strict commensurability.
    pub predicted_shift: Option<Vec<QuditShift>>,
    /// The constant offset; it cancels from every kernel.
    pub offset: f64,
}

impl CommensurabilityReport {
    /// Image of every lattice point under the predicted shift.
    pub fn shift_permutation(&self, lat: &Lattice) -> Option<Vec<usize>> {
        let shifts = self.predicted_shift.as_ref()?;
        let coords: Vec<i64> = shifts
            .iter()
            .flat_map(|s| [i64::from(s.dm_mod), i64::from(s.dn_mod)])
            .collect();
        let step = crate::field::PhaseVector::new(self.dim, &coords).ok()?.index(self.dim);
        Some((0..lat.size()).map(|mu| lat.add(mu, step)).collect())
    }
}

fn classify_k(k: f64, tol: f64) -> (CoefficientClass, Option<i64>) {
    let r = k.round();
    if (k - r).abs() >= tol {
        return (CoefficientClass::NonInteger, None);
    }
    let ki = r as i64;
    if ki.rem_euclid(2) == 0 {
        (CoefficientClass::Even, Some(ki))
    } else {
        (CoefficientClass::Odd, Some(ki))
    }
}

pub fn classify_commensurability(h: &LinearHamiltonian, tau: f64, dim: PrimeDim) -> Result<CommensurabilityReport> {
    classify_commensurability_with_tolerance(h, tau, dim, INTEGRALITY_TOL)
}

pub fn classify_commensurability_with_tolerance(
    h: &LinearHamiltonian,
    tau: f64,
    dim: PrimeDim,
    tolerance: f64,
) -> Result<CommensurabilityReport> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidArgument(format!("time step {tau} must be positive")));
    }
    let scale = f64::from(dim.get()) * tau / PI;
    let k_values: Vec<(f64, f64)> = h.coeffs.iter().map(|(a, b)| (a * scale, b * scale)).collect();
    let mut classes = Vec::with_capacity(k_values.len());
    let mut shifts = Vec::with_capacity(k_values.len());
    for &(ka, kb) in &k_values {
        let (ca, ia) = classify_k(ka, tolerance);
        let (cb, ib) = classify_k(kb, tolerance);
        classes.push((ca, cb));
        if let (Some(ia), Some(ib)) = (ia, ib) {
            let (dm, dn) = (ib / 2, -(ia / 2));
            shifts.push(QuditShift {
                dm,
                dn,
                dm_mod: dim.reduce(dm),
                dn_mod: dim.reduce(dn),
            });
        }
    }
    let all = || classes.iter().flat_map(|(a, b)| [*a, *b]);
    let class = if all().any(|c| c == CoefficientClass::NonInteger) {
        Commensurability::Incommensurate
    } else if all().any(|c| c == CoefficientClass::Odd) {
        Commensurability::WeakOdd
    } else {
        Commensurability::Strict
    };
    Ok(CommensurabilityReport {
        dim,
        tau,
        tolerance,
        k_values,
        coefficient_classes: classes,
        class,
        predicted_shift: (class == Commensurability::Strict).then_some(shifts),
        offset: h.offset,
    })
}

/// Outcome of comparing the exact single-step kernel with the prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftVerification {
    pub report: CommensurabilityReport,
    pub kernel_is_permutation: bool,
    /// Strict case: the permutation is the predicted shift.
    pub matches_prediction: bool,
    /// Largest number of entries above the support tolerance in one column.
    pub max_column_support: usize,
    /// Whether the kernel behaves as the classification says it must.
    pub consistent: bool,
}

/// Single-step kernel of a linear Hamiltonian.
pub fn linear_step_kernel(h: &LinearHamiltonian, tau: f64, lat: &Lattice) -> Result<WignerKernel> {
    short_time_kernel(&h.lattice_function(lat)?, tau, lat)
}

pub fn verify_shift_kernel(
    h: &LinearHamiltonian,
    tau: f64,
    dim: PrimeDim,
    n_qudits: usize,
) -> Result<ShiftVerification> {
    let report = classify_commensurability(h, tau, dim)?;
    verify_report(h, report, n_qudits)
}

/// Checks an existing report (for instance one classified with a wider
/// tolerance) against the kernel at the report's `τ`.
pub fn verify_report(
    h: &LinearHamiltonian,
    report: CommensurabilityReport,
    n_qudits: usize,
) -> Result<ShiftVerification> {
    let lat = Lattice::new(report.dim, n_qudits)?;
    let kernel = linear_step_kernel(h, report.tau, &lat)?;
    let perm = kernel.as_permutation(SUPPORT_TOL);
    let max_column_support = kernel.column_support(SUPPORT_TOL).into_iter().max().unwrap_or(0);
    let predicted = report.shift_permutation(&lat);
    let matches_prediction = matches!((&perm, &predicted), (Some(p), Some(q)) if p == q);
    let consistent = match report.class {
        Commensurability::Strict => matches_prediction,
        _ => perm.is_none() && max_column_support >= 2,
    };
    Ok(ShiftVerification {
        report,
        kernel_is_permutation: perm.is_some(),
        matches_prediction,
        max_column_support,
        consistent,
    })
}
