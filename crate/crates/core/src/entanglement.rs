//! Two-qutrit entanglement under `H = χ x̂₁⊗x̂₂` from `|p,0⟩⊗|p,0⟩`.
//!
//! The reduced purity is available in closed form,
//! `Tr[ρ₁²] = [27 + 4(1+2cos χt)² + 2(1+2cos 2χt)²]/81`, and is recomputed by
//! direct evolution, by the exact Wigner kernel and by composed short-time
//! kernels. Wigner routes marginalize the two-qutrit Wigner function onto
//! qutrit 1 and rebuild `ρ₁` from the single-qutrit phase-point operators.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Lattice, PrimeDim};
use crate::linalg::{kron, partial_trace, ComplexMatrix, HamiltonianSpec};
use crate::path_integral::{composed_kernel, PathConfig};
use crate::propagator::{apply_kernel, kernel_fourier_form};
use crate::states::{momentum_ket, product_ket, pure_density};
use crate::weyl::{hermitian_symbol, wigner_function, PhasePointOperatorSet, WignerFunction};

/// Default number of slices for the path-integral route.
pub const DEFAULT_PATH_STEPS: usize = 4;

pub fn purity_closed_form(chi_t: f64) -> f64 {
    let a = 1.0 + 2.0 * chi_t.cos();
    let b = 1.0 + 2.0 * (2.0 * chi_t).cos();
    (27.0 + 4.0 * a * a + 2.0 * b * b) / 81.0
}

pub fn linear_entropy_closed_form(chi_t: f64) -> f64 {
    1.0 - purity_closed_form(chi_t)
}

/// Leading short-time behaviour `S_L ≈ 8(χt)²/9`.
pub fn short_time_law(chi_t: f64) -> f64 {
    short_time_law_general(chi_t, 2.0 / 3.0, 2.0 / 3.0)
}

/// `S_L ≈ 2(χt)² Var(A) Var(B)` for `H = χ A⊗B` on a product state.
pub fn short_time_law_general(chi_t: f64, var_a: f64, var_b: f64) -> f64 {
    2.0 * chi_t * chi_t * var_a * var_b
}

/// `⟨ψ|O²|ψ⟩ − ⟨ψ|O|ψ⟩²` for Hermitian `O`.
pub fn variance(op: &ComplexMatrix, ket: &[Complex64]) -> Result<f64> {
    let o_psi = op.apply(ket)?;
    let mean: Complex64 = ket.iter().zip(&o_psi).map(|(a, b)| a.conj() * b).sum();
    let second: f64 = o_psi.iter().map(|z| z.norm_sqr()).sum();
    Ok(second - mean.re * mean.re)
}

/// How the reduced purity is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntanglementRoute {
    /// `|ψ(t)⟩ = U|ψ₀⟩`, partial trace.
    Exact,
    /// Exact Wigner kernel applied to `W₀`.
    Kernel,
    /// `steps` composed short-time kernels.
    PathIntegral {
        steps: usize,
    },
    ClosedForm,
}

impl EntanglementRoute {
    pub fn name(&self) -> &'static str {
        match self {
            EntanglementRoute::Exact => "exact",
            EntanglementRoute::Kernel => "kernel",
            EntanglementRoute::PathIntegral { .. } => "path_integral",
            EntanglementRoute::ClosedForm => "closed_form",
        }
    }
}

impl fmt::Display for EntanglementRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntanglementRoute::PathIntegral { steps } => write!(f, "path_integral(N={steps})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for EntanglementRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(EntanglementRoute::Exact),
            "kernel" => Ok(EntanglementRoute::Kernel),
            "closed_form" | "closed-form" => Ok(EntanglementRoute::ClosedForm),
            "path_integral" | "path-integral" => Ok(EntanglementRoute::PathIntegral {
                steps: DEFAULT_PATH_STEPS,
            }),
            other => Err(Error::InvalidArgument(format!(
                "unknown route '{other}' (expected exact, kernel, path-integral or closed-form)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementRecord {
    pub chi_t: f64,
    pub source: String,
    pub purity: f64,
    pub linear_entropy: f64,
    pub closed_form: f64,
    pub abs_error: f64,
    /// Sum negativity of the evolved two-qutrit Wigner function, for Wigner routes.
    pub negativity: Option<f64>,
}

/// Cached operators for the two-qutrit scenario.
#[derive(Debug, Clone)]
pub struct TwoQutritScenario {
    dim: PrimeDim,
    hamiltonian: HamiltonianSpec,
    h_w: Vec<f64>,
    psi0: Vec<Complex64>,
    w0: WignerFunction,
    single_ops: PhasePointOperatorSet,
    lattice: Lattice,
}

impl TwoQutritScenario {
    pub fn new() -> Result<Self> {
        let dim = PrimeDim::new(3)?;
        let x = ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 2.0]);
        let h = kron(&x, &x);
        let h_w = hermitian_symbol(&h, dim, 2)?;
        let p0 = momentum_ket(dim, 0);
        let psi0 = product_ket(&[p0.clone(), p0]);
        let w0 = wigner_function(&pure_density(&psi0), dim, 2)?;
        Ok(TwoQutritScenario {
            dim,
            hamiltonian: HamiltonianSpec::new(h, 1.0)?,
            h_w,
            psi0,
            w0,
            single_ops: PhasePointOperatorSet::new(dim, 1)?,
            lattice: Lattice::new(dim, 2)?,
        })
    }

    pub fn initial_wigner(&self) -> &WignerFunction {
        &self.w0
    }

    pub fn hamiltonian_symbol(&self) -> &[f64] {
        &self.h_w
    }

    /// Evolved two-qutrit Wigner function by the given route.
    pub fn evolved_wigner(&self, chi_t: f64, route: EntanglementRoute) -> Result<WignerFunction> {
        match route {
            EntanglementRoute::Exact => {
                let psi = self.hamiltonian.evolution(chi_t)?.apply(&self.psi0)?;
                wigner_function(&pure_density(&psi), self.dim, 2)
            }
            EntanglementRoute::Kernel => {
                let g = kernel_fourier_form(&self.hamiltonian.evolution(chi_t)?, self.dim, 2)?;
                apply_kernel(&g, &self.w0)
            }
            EntanglementRoute::PathIntegral { steps } => {
                let g = composed_kernel(&self.h_w, &PathConfig::new(steps, chi_t)?, &self.lattice)?;
                apply_kernel(&g, &self.w0)
            }
            EntanglementRoute::ClosedForm => {
                Err(Error::InvalidArgument("the closed form has no Wigner function".into()))
            }
        }
    }

    /// Reduced state of qutrit 1 rebuilt from the marginal Wigner function.
    pub fn reduced_state_from_wigner(&self, w: &WignerFunction) -> Result<ComplexMatrix> {
        w.marginal(0)?.to_density_matrix(&self.single_ops)
    }

    pub fn record(&self, chi_t: f64, route: EntanglementRoute) -> Result<EntanglementRecord> {
        let closed = purity_closed_form(chi_t);
        let (purity, negativity) = match route {
            EntanglementRoute::ClosedForm => (closed, None),
            EntanglementRoute::Exact => {
                let psi = self.hamiltonian.evolution(chi_t)?.apply(&self.psi0)?;
                let rho1 = partial_trace(&pure_density(&psi), 0, &[3, 3])?;
                (rho1.trace_of_product(&rho1)?.re, None)
            }
            _ => {
                let w = self.evolved_wigner(chi_t, route)?;
                let rho1 = self.reduced_state_from_wigner(&w)?;
                (rho1.trace_of_product(&rho1)?.re, Some(w.negativity()))
            }
        };
        Ok(EntanglementRecord {
            chi_t,
            source: route.to_string(),
            purity,
            linear_entropy: 1.0 - purity,
            closed_form: 1.0 - closed,
            abs_error: (purity - closed).abs(),
            negativity,
        })
    }
}

/// Records for every `(χt, route)` pair, χt-major.
pub fn entanglement_table(chi_ts: &[f64], routes: &[EntanglementRoute]) -> Result<Vec<EntanglementRecord>> {
    let scenario = TwoQutritScenario::new()?;
    let mut out = Vec::with_capacity(chi_ts.len() * routes.len());
    for &t in chi_ts {
        for &r in routes {
            out.push(scenario.record(t, r)?);
        }
    }
    Ok(out)
}

pub fn write_table_csv<W: Write>(records: &[EntanglementRecord], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record([
        "chi_t",
        "source",
        "purity",
        "linear_entropy",
        "closed_form",
        "abs_error",
        "negativity",
    ])?;
    for r in records {
        wtr.write_record([
            format!("{}", r.chi_t),
            r.source.clone(),
            format!("{:.15}", r.purity),
            format!("{:.15}", r.linear_entropy),
            format!("{:.15}", r.closed_form),
            format!("{:.3e}", r.abs_error),
            r.negativity.map(|n| format!("{n:.15}")).unwrap_or_default(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const TABLE: [(f64, f64); 7] = [
        (0.25, 0.053),
        (0.5, 0.185),
        (PI / 2.0, 0.593),
        (2.0 * PI / 3.0, 0.667),
        (PI, 0.395),
        (4.0 * PI / 3.0, 0.667),
        (2.0 * PI, 0.0),
    ];

    #[test]
    fn closed_form_values() {
        assert!((purity_closed_form(0.0) - 1.0).abs() < 1e-15);
        assert!((linear_entropy_closed_form(2.0 * PI / 3.0) - 2.0 / 3.0).abs() < 1e-14);
        assert!((linear_entropy_closed_form(0.1) - 8.823e-3).abs() < 1e-6);
        for (t, s) in TABLE {
            assert!((linear_entropy_closed_form(t) - s).abs() < 1e-3, "{t}");
        }
    }

    #[test]
    fn closed_form_symmetries() {
        for i in 0..50 {
            let t = 0.13 * f64::from(i);
            assert!((linear_entropy_closed_form(t + 2.0 * PI) - linear_entropy_closed_form(t)).abs() < 1e-12);
            assert!((linear_entropy_closed_form(2.0 * PI - t) - linear_entropy_closed_form(t)).abs() < 1e-12);
            let s = linear_entropy_closed_form(t);
            assert!((-1e-15..=2.0 / 3.0 + 1e-15).contains(&s));
        }
    }

    #[test]
    fn short_time_law_matches_variances() {
        let d3 = PrimeDim::new(3).unwrap();
        let x = ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 2.0]);
        let v = variance(&x, &momentum_ket(d3, 0)).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-14);
        assert!((short_time_law(0.1) - 8.0 * 0.01 / 9.0).abs() < 1e-16);
        assert_eq!(short_time_law(0.0), 0.0);
        let exact = linear_entropy_closed_form(0.1);
        assert!(((short_time_law(0.1) - exact) / exact).abs() < 0.01);
        let at = |t: f64| ((short_time_law(t) - linear_entropy_closed_form(t)) / linear_entropy_closed_form(t)).abs();
        assert!(at(0.6) > at(0.3) && at(0.3) > at(0.1));
    }

    #[test]
    fn all_routes_agree_with_closed_form() {
        let scenario = TwoQutritScenario::new().unwrap();
        for (t, _) in TABLE.iter().chain(&[(0.1, 0.0)]) {
            for route in [
                EntanglementRoute::Exact,
                EntanglementRoute::Kernel,
                EntanglementRoute::PathIntegral { steps: 3 },
            ] {
                let r = scenario.record(*t, route).unwrap();
                assert!(r.abs_error < 1e-10, "{route} at {t}: {}", r.abs_error);
            }
        }
    }

    #[test]
    fn negativity_starts_at_zero_and_grows() {
        let scenario = TwoQutritScenario::new().unwrap();
        assert!(scenario.initial_wigner().negativity() < 1e-14);
        let r = scenario.record(0.5, EntanglementRoute::Kernel).unwrap();
        assert!(r.negativity.unwrap() > 1e-3);
    }

    #[test]
    fn table_output() {
        let rows = entanglement_table(&[0.5], &[EntanglementRoute::Exact, EntanglementRoute::ClosedForm]).unwrap();
        assert_eq!(rows.len(), 2);
        let mut buf = Vec::new();
        write_table_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("chi_t,source,purity"));
        assert!(text.contains("0.5,closed_form"));
        assert_eq!(
            "path-integral".parse::<EntanglementRoute>().unwrap(),
            EntanglementRoute::PathIntegral { steps: 4 }
        );
        assert!("bogus".parse::<EntanglementRoute>().is_err());
    }
}
