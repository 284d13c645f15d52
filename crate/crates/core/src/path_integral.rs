//! Time-sliced phase-space path integral.
//!
//! One slice of length `τ` propagates with
//! `K_τ(μ′,μ) = d^{-2n} Σ_μ̃ ω^{−2Δμ∧μ̃} e^{iτ[H_W(μ′+μ̃) − H_W(μ−μ̃)]}`,
//! which replaces the exact `U_W` by `e^{−iτH_W}`. Multiplying `N` slices and
//! summing over the intermediate points `γ₁…γ_{N−1}` and fluctuations
//! `ξ₁…ξ_N` gives the path sum; grouping the sums slice by slice turns it into
//! an `N`-fold kernel product, which is the production route. Direct
//! enumeration is kept as an oracle for small lattices.
//!
//! Hamiltonian arguments `γ ± ξ` are reduced mod `d` before lookup.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Lattice, OmegaTable, PhaseVector, PrimeDim};
use crate::linalg::{hermitian_expm, ComplexMatrix};
use crate::propagator::{compose_kernels, twisted_convolution, ComplexKernel, WignerKernel, KERNEL_IMAG_TOL};
use crate::weyl::{hermitian_symbol, infer_qudits, phase_space_function, weyl_symbol};

/// Default cap on enumerated path terms.
pub const DEFAULT_PATH_BUDGET: f64 = 1e8;

/// `N` equal slices of the dimensionless time `χt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    pub steps: usize,
    pub chi_t: f64,
}

impl PathConfig {
    pub fn new(steps: usize, chi_t: f64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("at least one time slice is required".into()));
        }
        if !chi_t.is_finite() {
            return Err(Error::InvalidArgument(format!("time {chi_t} is not finite")));
        }
        Ok(PathConfig { steps, chi_t })
    }

    pub fn tau(&self) -> f64 {
        self.chi_t / self.steps as f64
    }
}

fn check_symbol(h_w: &[f64], lat: &Lattice) -> Result<()> {
    if h_w.len() != lat.size() {
        return Err(Error::LengthMismatch {
            left: h_w.len(),
            right: lat.size(),
        });
    }
    Ok(())
}

fn phase_table(h_w: &[f64], tau: f64) -> Vec<Complex64> {
    h_w.iter().map(|&h| Complex64::from_polar(1.0, tau * h)).collect()
}

/// Single-slice kernel for the lattice Hamiltonian `h_w`.
pub fn short_time_kernel(h_w: &[f64], tau: f64, lat: &Lattice) -> Result<WignerKernel> {
    short_time_complex(h_w, tau, lat, false)?.into_real(KERNEL_IMAG_TOL)
}

/// Same kernel with the fluctuation centred on the midpoint:
/// `μ̃ → μ̃ − Δμ/2`, i.e. `e^{iτ[H_W(μ̄+μ̃) − H_W(μ̄−μ̃)]}` with `μ̄ = (μ+μ′)/2`.
pub fn short_time_kernel_midpoint(h_w: &[f64], tau: f64, lat: &Lattice) -> Result<WignerKernel> {
    short_time_complex(h_w, tau, lat, true)?.into_real(KERNEL_IMAG_TOL)
}

fn short_time_complex(h_w: &[f64], tau: f64, lat: &Lattice, midpoint: bool) -> Result<ComplexKernel> {
    check_symbol(h_w, lat)?;
    let dim = lat.dim();
    let omega = OmegaTable::new(dim);
    let e_plus = phase_table(h_w, tau);
    let l = lat.size();
    let norm = 1.0 / l as f64;
    let mut entries = Vec::with_capacity(l * l);
    for mu_f in 0..l {
        for mu_i in 0..l {
            let delta = lat.sub(mu_f, mu_i);
            let (a, b) = if midpoint {
                let mid = lat.add(mu_i, lat.halve(delta));
                (mid, mid)
            } else {
                (mu_f, mu_i)
            };
            let mut acc = Complex64::new(0.0, 0.0);
            for tilde in 0..l {
                let e = dim.neg(dim.mul(2, lat.symplectic(delta, tilde)));
                acc += omega.get(e) * e_plus[lat.add(a, tilde)] * e_plus[lat.sub(b, tilde)].conj();
            }
            entries.push(acc * norm);
        }
    }
    Ok(ComplexKernel {
        dim,
        n_qudits: lat.n_qudits(),
        entries,
    })
}

/// `N`-fold product of short-time kernels with `τ = χt/N`.
pub fn composed_kernel(h_w: &[f64], cfg: &PathConfig, lat: &Lattice) -> Result<WignerKernel> {
    let step = short_time_kernel(h_w, cfg.tau(), lat)?;
    let mut out = step.clone();
    for _ in 1..cfg.steps {
        out = compose_kernels(&step, &out)?;
    }
    Ok(out)
}

/// How a path sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathSumMethod {
    /// Slice-wise kernels multiplied together.
    Composed,
    /// Every `(γ, ξ)` path visited, refused beyond `budget` terms.
    Enumerated { budget: f64 },
}

/// Number of `(γ, ξ)` paths for one endpoint pair: `L^{2N−1}`.
pub fn path_term_count(lattice_size: usize, steps: usize) -> f64 {
    (lattice_size as f64).powi(2 * steps as i32 - 1)
}

/// Visits every `(γ₁…γ_{N−1}, ξ₁…ξ_N)` for fixed endpoints. The symplectic
/// part of the action is carried as an integer wedge sum and exponentiated
/// once per complete path; the Hamiltonian part is a running product of
/// tabulated `e^{±iτH_W}` factors.
struct Enumerator<'a> {
    lat: &'a Lattice,
    e_plus: Vec<Complex64>,
    wedge_phase: Vec<Complex64>,
    steps: usize,
    end: usize,
}

impl Enumerator<'_> {
    fn new<'a>(lat: &'a Lattice, h_w: &[f64], cfg: &PathConfig, end: usize) -> Enumerator<'a> {
        let dim = lat.dim();
        let omega = OmegaTable::new(dim);
        Enumerator {
            lat,
            e_plus: phase_table(h_w, cfg.tau()),
            wedge_phase: (0..dim.get()).map(|w| omega.get(dim.neg(dim.mul(2, w)))).collect(),
            steps: cfg.steps,
            end,
        }
    }

    fn visit(&self, slice: usize, prev: usize, wedge: u32, amp: Complex64, acc: &mut Complex64) {
        let dim = self.lat.dim();
        let last = slice == self.steps;
        let range = if last {
            self.end..self.end + 1
        } else {
            0..self.lat.size()
        };
        for next in range {
            let delta = self.lat.sub(next, prev);
            for xi in 0..self.lat.size() {
                let w = dim.add(wedge, self.lat.symplectic(delta, xi));
                let a = amp * self.e_plus[self.lat.add(next, xi)] * self.e_plus[self.lat.sub(prev, xi)].conj();
                if last {
                    *acc += self.wedge_phase[w as usize] * a;
                } else {
                    self.visit(slice + 1, next, w, a, acc);
                }
            }
        }
    }
}

/// `G(μ_N, t; μ₀, 0)` from the path sum.
pub fn path_sum_propagator(
    h_w: &[f64],
    cfg: &PathConfig,
    lat: &Lattice,
    mu0: usize,
    mu_n: usize,
    method: PathSumMethod,
) -> Result<f64> {
    check_symbol(h_w, lat)?;
    if mu0 >= lat.size() || mu_n >= lat.size() {
        return Err(Error::EndpointMismatch(format!(
            "endpoint index outside a lattice of {} points",
            lat.size()
        )));
    }
    match method {
        PathSumMethod::Composed => Ok(composed_kernel(h_w, cfg, lat)?.get(mu_n, mu0)),
        PathSumMethod::Enumerated { budget } => {
            let terms = path_term_count(lat.size(), cfg.steps);
            if terms > budget {
                return Err(Error::BudgetExceeded { terms, budget });
            }
            let mut acc = Complex64::new(0.0, 0.0);
            Enumerator::new(lat, h_w, cfg, mu_n).visit(1, mu0, 0, Complex64::new(1.0, 0.0), &mut acc);
            let value = acc * (lat.size() as f64).powi(-(cfg.steps as i32));
            if value.im.abs() > KERNEL_IMAG_TOL {
                return Err(Error::NotReal(value.im.abs()));
            }
            Ok(value.re)
        }
    }
}

/// Path sum for every endpoint pair.
pub fn path_sum_kernel(h_w: &[f64], cfg: &PathConfig, lat: &Lattice, method: PathSumMethod) -> Result<WignerKernel> {
    match method {
        PathSumMethod::Composed => composed_kernel(h_w, cfg, lat),
        PathSumMethod::Enumerated { budget } => {
            let l = lat.size();
            let terms = path_term_count(l, cfg.steps) * (l * l) as f64;
            if terms > budget {
                return Err(Error::BudgetExceeded { terms, budget });
            }
            let mut entries = Vec::with_capacity(l * l);
            for mu_n in 0..l {
                for mu0 in 0..l {
                    entries.push(path_sum_propagator(
                        h_w,
                        cfg,
                        lat,
                        mu0,
                        mu_n,
                        PathSumMethod::Enumerated { budget: f64::INFINITY },
                    )?);
                }
            }
            Ok(WignerKernel {
                dim: lat.dim(),
                n_qudits: lat.n_qudits(),
                entries,
            })
        }
    }
}

/// Action of one `(γ, ξ)` path: `S = −(4π/d) Σ Δγᵢ∧ξᵢ + τ Σ[H_W(γᵢ+ξᵢ) − H_W(γᵢ₋₁−ξᵢ)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteAction {
    pub dim: PrimeDim,
    /// `Σᵢ Δγᵢ∧ξᵢ mod d`.
    pub wedge_sum: u32,
    /// `τ Σᵢ [H_W(γᵢ+ξᵢ) − H_W(γᵢ₋₁−ξᵢ)]`.
    pub hamiltonian: f64,
}

impl DiscreteAction {
    pub fn symplectic_part(&self) -> f64 {
        -4.0 * PI * f64::from(self.wedge_sum) / f64::from(self.dim.get())
    }

    pub fn value(&self) -> f64 {
        self.symplectic_part() + self.hamiltonian
    }

    /// `e^{iS}` with the symplectic part taken from the exact root table.
    pub fn phase(&self) -> Complex64 {
        let e = self.dim.neg(self.dim.mul(2, self.wedge_sum));
        self.dim.omega(i64::from(e)) * Complex64::from_polar(1.0, self.hamiltonian)
    }
}

pub fn discrete_action(
    gamma: &[PhaseVector],
    xi: &[PhaseVector],
    h_w: &[f64],
    lat: &Lattice,
    cfg: &PathConfig,
) -> Result<DiscreteAction> {
    check_symbol(h_w, lat)?;
    if gamma.len() != cfg.steps + 1 || xi.len() != cfg.steps {
        return Err(Error::EndpointMismatch(format!(
            "{} slices need {} path points and {} fluctuations, got {} and {}",
            cfg.steps,
            cfg.steps + 1,
            cfg.steps,
            gamma.len(),
            xi.len()
        )));
    }
    let dim = lat.dim();
    let idx = |v: &PhaseVector| -> Result<usize> {
        if v.n_qudits() != lat.n_qudits() {
            return Err(Error::LengthMismatch {
                left: v.coords().len(),
                right: 2 * lat.n_qudits(),
            });
        }
        Ok(v.index(dim))
    };
    let mut wedge = 0;
    let mut ham = 0.0;
    for (i, x) in xi.iter().enumerate() {
        let (prev, next, x) = (idx(&gamma[i])?, idx(&gamma[i + 1])?, idx(x)?);
        wedge = dim.add(wedge, lat.symplectic(lat.sub(next, prev), x));
        ham += h_w[lat.add(next, x)] - h_w[lat.sub(prev, x)];
    }
    Ok(DiscreteAction {
        dim,
        wedge_sum: wedge,
        hamiltonian: ham * cfg.tau(),
    })
}

/// Paths restricted to `ξ ≡ 0`: `d^{-2n} e^{iτ[H_W(μ_N) − H_W(μ₀)]}`, entries
/// `[μ_N][μ₀]`. Not real in general.
pub fn xi_zero_kernel(h_w: &[f64], cfg: &PathConfig, lat: &Lattice) -> Result<ComplexKernel> {
    check_symbol(h_w, lat)?;
    let l = lat.size();
    let norm = 1.0 / l as f64;
    let tau = cfg.tau();
    let entries = (0..l)
        .flat_map(|f| (0..l).map(move |i| (f, i)))
        .map(|(f, i)| Complex64::from_polar(norm, tau * (h_w[f] - h_w[i])))
        .collect();
    Ok(ComplexKernel {
        dim: lat.dim(),
        n_qudits: lat.n_qudits(),
        entries,
    })
}

/// Deviation of `e^{−iτH_W}` from the exact `U_W` over a sequence of `τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortTimeErrorReport {
    pub taus: Vec<f64>,
    /// `‖U_W − e^{−iτH_W}‖_∞`.
    pub errors: Vec<f64>,
    /// `errors / τ²`.
    pub ratios: Vec<f64>,
    /// `½‖H_W⋆H_W − H_W²‖_∞`.
    pub limit: f64,
}

impl ShortTimeErrorReport {
    pub fn final_ratio(&self) -> Option<f64> {
        self.ratios.last().copied()
    }

    pub fn relative_gap(&self) -> Option<f64> {
        self.final_ratio().map(|r| ((r - self.limit) / self.limit).abs())
    }
}

pub fn short_time_error(h: &ComplexMatrix, dim: PrimeDim, taus: &[f64]) -> Result<ShortTimeErrorReport> {
    let n_qudits = infer_qudits(h.rows(), dim)?;
    let h_w = hermitian_symbol(h, dim, n_qudits)?;
    let sym = weyl_symbol(h, dim, n_qudits)?;
    let star = phase_space_function(&twisted_convolution(&sym, &sym)?)?;
    let limit = 0.5
        * star
            .values
            .iter()
            .zip(&h_w)
            .map(|(s, v)| (s - v * v).norm())
            .fold(0.0, f64::max);
    let mut errors = Vec::with_capacity(taus.len());
    for &tau in taus {
        let u = hermitian_expm(h, Complex64::new(0.0, -tau))?;
        let u_w = phase_space_function(&weyl_symbol(&u, dim, n_qudits)?)?;
        let err = u_w
            .values
            .iter()
            .zip(&h_w)
            .map(|(u, &v)| (u - Complex64::from_polar(1.0, -tau * v)).norm())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    let ratios = errors.iter().zip(taus).map(|(e, t)| e / (t * t)).collect();
    Ok(ShortTimeErrorReport {
        taus: taus.to_vec(),
        errors,
        ratios,
        limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, HamiltonianSpec};
    use crate::propagator::kernel_fourier_form;
    use crate::random::{random_hermitian, seeded_rng};
    use crate::weyl::dft_operator;

    fn dim(d: i64) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    fn x_hat(d: usize) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&(0..d).map(|m| m as f64).collect::<Vec<_>>())
    }

    #[test]
    fn single_slice_is_exact_for_diagonal_h() {
        for d in [3, 5, 7] {
            let dm = dim(d);
            let lat = Lattice::new(dm, 1).unwrap();
            let h = x_hat(d as usize);
            let h_w = hermitian_symbol(&h, dm, 1).unwrap();
            for tau in [0.3, 1.0, PI] {
                let exact = kernel_fourier_form(
                    &HamiltonianSpec::new(h.clone(), 1.0).unwrap().evolution(tau).unwrap(),
                    dm,
                    1,
                )
                .unwrap();
                let st = short_time_kernel(&h_w, tau, &lat).unwrap();
                assert!(st.max_abs_diff(&exact) < 1e-10, "d={d} tau={tau}");
                let mid = short_time_kernel_midpoint(&h_w, tau, &lat).unwrap();
                assert!(mid.max_abs_diff(&st) < 1e-12);
            }
        }
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let d3 = dim(3);
        let lat = Lattice::new(d3, 1).unwrap();
        let k = short_time_kernel(&[0.0; 9], 0.7, &lat).unwrap();
        assert!(k.max_abs_diff(&WignerKernel::identity(d3, 1).unwrap()) < 1e-14);
    }

    #[test]
    fn midpoint_and_dummy_flip_for_generic_h() {
        let d5 = dim(5);
        let lat = Lattice::new(d5, 1).unwrap();
        let mut rng = seeded_rng(31);
        let h_w = hermitian_symbol(&random_hermitian(5, &mut rng), d5, 1).unwrap();
        let st = short_time_kernel(&h_w, 0.4, &lat).unwrap();
        assert!(short_time_kernel_midpoint(&h_w, 0.4, &lat).unwrap().max_abs_diff(&st) < 1e-12);
        // μ̃ → −μ̃ maps the short-time sum onto the Fourier kernel of U_W = e^{−iτH_W}
        let f: Vec<Complex64> = h_w.iter().map(|&h| Complex64::from_polar(1.0, -0.4 * h)).collect();
        let flipped = crate::propagator::fourier_kernel_raw(&f, &lat, &OmegaTable::new(d5))
            .unwrap()
            .into_real(1e-10)
            .unwrap();
        assert!(flipped.max_abs_diff(&st) < 1e-12);
    }

    #[test]
    fn enumerated_path_sum_matches_composition() {
        let d3 = dim(3);
        let lat = Lattice::new(d3, 1).unwrap();
        let mut rng = seeded_rng(32);
        let h_w = hermitian_symbol(&random_hermitian(3, &mut rng), d3, 1).unwrap();
        for steps in 1..=3 {
            let cfg = PathConfig::new(steps, 0.9).unwrap();
            let composed = composed_kernel(&h_w, &cfg, &lat).unwrap();
            for (mu0, mu_n) in [(0, 0), (1, 5), (8, 3)] {
                let v = path_sum_propagator(&h_w, &cfg, &lat, mu0, mu_n, PathSumMethod::Enumerated { budget: 1e7 })
                    .unwrap();
                assert!((v - composed.get(mu_n, mu0)).abs() < 1e-12, "N={steps}");
            }
        }
        let cfg = PathConfig::new(2, 0.9).unwrap();
        let full = path_sum_kernel(&h_w, &cfg, &lat, PathSumMethod::Enumerated { budget: 1e8 }).unwrap();
        assert!(full.max_abs_diff(&composed_kernel(&h_w, &cfg, &lat).unwrap()) < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let d3 = dim(3);
        let lat = Lattice::new(d3, 2).unwrap();
        let cfg = PathConfig::new(3, 0.5).unwrap();
        let h_w = vec![0.0; lat.size()];
        let err = path_sum_propagator(
            &h_w,
            &cfg,
            &lat,
            0,
            0,
            PathSumMethod::Enumerated {
                budget: DEFAULT_PATH_BUDGET,
            },
        );
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
        assert!((path_term_count(81, 3) - 81f64.powi(5)).abs() < 1.0);
    }

    #[test]
    fn iterated_slices_exact_for_diagonal_h() {
        let d3 = dim(3);
        let lat = Lattice::new(d3, 1).unwrap();
        let h = x_hat(3);
        let h_w = hermitian_symbol(&h, d3, 1).unwrap();
        let exact = kernel_fourier_form(&HamiltonianSpec::new(h, 1.0).unwrap().evolution(PI).unwrap(), d3, 1).unwrap();
        for steps in 1..=4 {
            let cfg = PathConfig::new(steps, PI).unwrap();
            assert!(composed_kernel(&h_w, &cfg, &lat).unwrap().max_abs_diff(&exact) < 1e-10);
        }
    }

    #[test]
    fn generic_h_converges_with_slices() {
        let d3 = dim(3);
        let lat = Lattice::new(d3, 1).unwrap();
        let f = dft_operator(d3);
        let x = x_hat(3);
        let h = x.add(&f.matmul(&x).unwrap().matmul(&f.adjoint()).unwrap()).unwrap();
        let h_w = hermitian_symbol(&h, d3, 1).unwrap();
        let exact = kernel_fourier_form(&HamiltonianSpec::new(h, 1.0).unwrap().evolution(0.5).unwrap(), d3, 1).unwrap();
        let errs: Vec<f64> = [1, 4, 16, 64]
            .iter()
            .map(|&n| {
                composed_kernel(&h_w, &PathConfig::new(n, 0.5).unwrap(), &lat)
                    .unwrap()
                    .max_abs_diff(&exact)
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        assert!(errs[0] > 1e-3);
    }

    #[test]
    fn action_examples() {
        let d3 = dim(3);
        let lat = Lattice::new(d3, 1).unwrap();
        let chi = 1.3;
        let h_w: Vec<f64> = (0..9).map(|i| chi * f64::from(lat.coords(i)[0])).collect();
        let p = |m, n| PhaseVector::new(d3, &[m, n]).unwrap();
        let cfg = PathConfig::new(1, 0.2).unwrap();
        let s = discrete_action(&[p(0, 0), p(1, 0)], &[p(0, 1)], &h_w, &lat, &cfg).unwrap();
        assert_eq!(s.wedge_sum, 1);
        // H_W(1,1) − H_W(0,−1 ≡ 2) = χ·1 − χ·0
        assert!((s.hamiltonian - chi * 0.2).abs() < 1e-15);
        assert!((s.value() - (-4.0 * PI / 3.0 + chi * 0.2)).abs() < 1e-14);

        // ξ ≡ 0 telescopes
        let cfg3 = PathConfig::new(3, 0.9).unwrap();
        let gamma = [p(0, 1), p(2, 2), p(1, 0), p(2, 1)];
        let zero = [p(0, 0), p(0, 0), p(0, 0)];
        let s = discrete_action(&gamma, &zero, &h_w, &lat, &cfg3).unwrap();
        assert_eq!(s.wedge_sum, 0);
        assert!((s.hamiltonian - 0.3 * (h_w[gamma[3].index(d3)] - h_w[gamma[0].index(d3)])).abs() < 1e-14);

        let flat = vec![2.0; 9];
        let s = discrete_action(&vec![p(1, 1); 4], &zero, &flat, &lat, &cfg3).unwrap();
        assert_eq!(s.value(), 0.0);
        assert!(discrete_action(&gamma[..3], &zero, &h_w, &lat, &cfg3).is_err());
    }

    #[test]
    fn resumming_actions_reproduces_path_sum() {
        let d3 = dim(3);
        let lat = Lattice::new(d3, 1).unwrap();
        let mut rng = seeded_rng(33);
        let h_w = hermitian_symbol(&random_hermitian(3, &mut rng), d3, 1).unwrap();
        let cfg = PathConfig::new(2, 0.8).unwrap();
        let (mu0, mu_n) = (2, 7);
        let mut acc = Complex64::new(0.0, 0.0);
        for g1 in 0..9 {
            for x1 in 0..9 {
                for x2 in 0..9 {
                    let gamma = [lat.vector(mu0), lat.vector(g1), lat.vector(mu_n)];
                    let xi = [lat.vector(x1), lat.vector(x2)];
                    acc += discrete_action(&gamma, &xi, &h_w, &lat, &cfg).unwrap().phase();
                }
            }
        }
        acc /= 81.0;
        let expect = composed_kernel(&h_w, &cfg, &lat).unwrap().get(mu_n, mu0);
        assert!((acc.re - expect).abs() < 1e-12 && acc.im.abs() < 1e-12);
    }

    #[test]
    fn xi_zero_sector() {
        let d3 = dim(3);
        let lat = Lattice::new(d3, 2).unwrap();
        let h_w = hermitian_symbol(&kron(&x_hat(3), &x_hat(3)), d3, 2).unwrap();
        let one = xi_zero_kernel(&h_w, &PathConfig::new(1, 0.5).unwrap(), &lat).unwrap();
        assert!(one.max_imag() > 5e-3 && one.max_imag() < 5e-2);
        let many = xi_zero_kernel(&h_w, &PathConfig::new(64, 0.5).unwrap(), &lat).unwrap();
        assert!(many.max_imag() < 1e-2 / 8.0);
        assert!(many
            .entries
            .iter()
            .all(|z| (z - Complex64::new(1.0 / 81.0, 0.0)).norm() < 1e-3));
        // equal Hamiltonian endpoints give a real entry of modulus d^{-2n}
        assert!((one.get(0, 0) - Complex64::new(1.0 / 81.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn short_time_error_law() {
        let d3 = dim(3);
        let f = dft_operator(d3);
        let x = x_hat(3);
        let h = x.add(&f.matmul(&x).unwrap().matmul(&f.adjoint()).unwrap()).unwrap();
        let report = short_time_error(&h, d3, &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
        assert!((report.limit - 1.5).abs() < 1e-10);
        assert!(report.relative_gap().unwrap() < 0.05);
        let diag = short_time_error(&x, d3, &[0.5]).unwrap();
        assert!(diag.errors[0] < 1e-12);
        let zero = short_time_error(&ComplexMatrix::zeros(3, 3), d3, &[0.1]).unwrap();
        assert!(zero.errors[0] < 1e-14);
    }
}
