//! Exact Wigner-function propagators and the twisted convolution.
//!
//! A kernel `G[μ′][μ]` maps initial Wigner values at `μ` to final values at
//! `μ′`. Three constructions are provided and must agree:
//!
//! * the phase-point trace form `d^{-n} Tr[A(μ′) U A(μ) U†]` (reference),
//! * the Fourier form `d^{-2n} Σ_μ̃ ω^{2Δμ∧μ̃} U_W(μ+μ̃) conj(U_W(μ′−μ̃))`,
//! * the Weyl-space kernel transformed over both index sets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Lattice, OmegaTable, PrimeDim};
use crate::linalg::ComplexMatrix;
use crate::weyl::{infer_qudits, phase_space_function, weyl_symbol, PhasePointOperatorSet, WeylSymbol, WignerFunction};

/// Largest imaginary part tolerated when casting a kernel to real.
pub const KERNEL_IMAG_TOL: f64 = 1e-10;
/// Unitarity tolerance for evolution operators handed to kernel builders.
pub const UNITARY_TOL: f64 = 1e-10;

/// Complex lattice-by-lattice array, row-major. Used for Weyl-space kernels
/// (indices are reciprocal points) and for truncated path sums that are not
/// real.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexKernel {
    pub dim: PrimeDim,
    pub n_qudits: usize,
    pub entries: Vec<Complex64>,
}

impl ComplexKernel {
    pub fn size(&self) -> usize {
        (self.entries.len() as f64).sqrt().round() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.size() + col]
    }

    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Verified cast: fails with [`Error::NotReal`] if any `|Im| > tol`.
    pub fn into_real(self, tol: f64) -> Result<WignerKernel> {
        let worst = self.max_imag();
        if worst > tol {
            return Err(Error::NotReal(worst));
        }
        Ok(WignerKernel {
            dim: self.dim,
            n_qudits: self.n_qudits,
            entries: self.entries.into_iter().map(|z| z.re).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &ComplexKernel) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Weyl-space propagation `ρ̃_t(κ′) = Σ_κ G̃(κ′;κ) ρ̃_0(κ)`.
    pub fn evolve_symbol(&self, sym: &WeylSymbol) -> Result<WeylSymbol> {
        let l = self.size();
        if sym.values.len() != l {
            return Err(Error::LengthMismatch {
                left: sym.values.len(),
                right: l,
            });
        }
        let values = self
            .entries
            .chunks_exact(l)
            .map(|row| row.iter().zip(&sym.values).map(|(g, s)| g * s).sum())
            .collect();
        WeylSymbol::new(self.dim, self.n_qudits, values)
    }
}

/// Real Wigner propagator, `entries[μ′ * L + μ]` with `L = d^{2n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerKernel {
    pub dim: PrimeDim,
    pub n_qudits: usize,
    pub entries: Vec<f64>,
}

impl WignerKernel {
    pub fn identity(dim: PrimeDim, n_qudits: usize) -> Result<Self> {
        let l = Lattice::new(dim, n_qudits)?.size();
        let mut entries = vec![0.0; l * l];
        for i in 0..l {
            entries[i * l + i] = 1.0;
        }
        Ok(WignerKernel { dim, n_qudits, entries })
    }

    pub fn size(&self) -> usize {
        (self.entries.len() as f64).sqrt().round() as usize
    }

    pub fn get(&self, final_index: usize, initial_index: usize) -> f64 {
        self.entries[final_index * self.size() + initial_index]
    }

    /// `Σ_{μ′} G(μ′, μ)` for every initial `μ`.
    pub fn column_sums(&self) -> Vec<f64> {
        let l = self.size();
        let mut sums = vec![0.0; l];
        for row in self.entries.chunks_exact(l) {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    pub fn max_column_sum_error(&self) -> f64 {
        self.column_sums().iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Entries above `tol` in each column (initial point).
    pub fn column_support(&self, tol: f64) -> Vec<usize> {
        let l = self.size();
        let mut counts = vec![0; l];
        for row in self.entries.chunks_exact(l) {
            for (c, v) in counts.iter_mut().zip(row) {
                if v.abs() > tol {
                    *c += 1;
                }
            }
        }
        counts
    }

    /// If every entry is within `tol` of 0 or 1 and the ones form a
    /// permutation, returns the image of each initial point.
    pub fn as_permutation(&self, tol: f64) -> Option<Vec<usize>> {
        let l = self.size();
        let mut image = vec![usize::MAX; l];
        let mut hit = vec![false; l];
        for (r, row) in self.entries.chunks_exact(l).enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if (v - 1.0).abs() <= tol {
                    if image[c] != usize::MAX || hit[r] {
                        return None;
                    }
                    image[c] = r;
                    hit[r] = true;
                } else if v.abs() > tol {
                    return None;
                }
            }
        }
        image.iter().all(|&i| i != usize::MAX).then_some(image)
    }

    pub fn is_permutation(&self, tol: f64) -> bool {
        self.as_permutation(tol).is_some()
    }

    pub fn max_abs_diff(&self, other: &WignerKernel) -> f64 {
        if self.entries.len() != other.entries.len() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Kernel of independent subsystems: first factor most significant.
    pub fn kron(&self, other: &WignerKernel) -> Result<WignerKernel> {
        if self.dim != other.dim {
            return Err(Error::InvalidArgument("kernels over different dimensions".into()));
        }
        let (la, lb) = (self.size(), other.size());
        let l = la * lb;
        let mut entries = vec![0.0; l * l];
        for r1 in 0..la {
            for c1 in 0..la {
                let a = self.entries[r1 * la + c1];
                for r2 in 0..lb {
                    let row = (r1 * lb + r2) * l + c1 * lb;
                    for c2 in 0..lb {
                        entries[row + c2] = a * other.entries[r2 * lb + c2];
                    }
                }
            }
        }
        Ok(WignerKernel {
            dim: self.dim,
            n_qudits: self.n_qudits + other.n_qudits,
            entries,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_unitary(u: &ComplexMatrix, lat: &Lattice) -> Result<()> {
    let n = lat.hilbert_dim();
    if u.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            op: "evolution operator vs qudit register",
            left: u.shape(),
            right: (n, n),
        });
    }
    let err = u.unitarity_error()?;
    if err > UNITARY_TOL {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

fn check_symbols(a: &WeylSymbol, b: &WeylSymbol) -> Result<()> {
    if a.dim != b.dim || a.n_qudits != b.n_qudits {
        return Err(Error::InvalidArgument("symbols over different lattices".into()));
    }
    Ok(())
}

/// Symbol of the operator product `A_g A_h`:
/// `f̃(κ) = d^{-n} Σ_κ′ ω^{2⁻¹ Σ(k′j − kj′)} g̃(κ+κ′) h̃(−κ′)`.
pub fn twisted_convolution(g: &WeylSymbol, h: &WeylSymbol) -> Result<WeylSymbol> {
    check_symbols(g, h)?;
    let lat = g.lattice()?;
    let dim = g.dim;
    let omega = OmegaTable::new(dim);
    let norm = 1.0 / lat.hilbert_dim() as f64;
    let values = (0..lat.size())
        .map(|kappa| {
            let acc = (0..lat.size()).fold(Complex64::new(0.0, 0.0), |acc, kp| {
                let e = dim.mul(dim.half_inv(), lat.symplectic(kp, kappa));
                acc + omega.get(e) * g.values[lat.add(kappa, kp)] * h.values[lat.neg(kp)]
            });
            acc * norm
        })
        .collect();
    WeylSymbol::new(dim, g.n_qudits, values)
}

/// Reference kernel `d^{-n} Tr[A(μ′) U A(μ) U†]`.
pub fn kernel_trace_form(u: &ComplexMatrix, dim: PrimeDim, n_qudits: usize) -> Result<WignerKernel> {
    let ops = PhasePointOperatorSet::new(dim, n_qudits)?;
    kernel_trace_form_with(u, &ops)
}

/// Trace form reusing a precomputed phase-point operator set.
pub fn kernel_trace_form_with(u: &ComplexMatrix, ops: &PhasePointOperatorSet) -> Result<WignerKernel> {
    let lat = Lattice::new(ops.dim(), ops.n_qudits())?;
    check_unitary(u, &lat)?;
    let u_dag = u.adjoint();
    let evolved = ops
        .iter()
        .map(|a| u.matmul(a)?.matmul(&u_dag))
        .collect::<Result<Vec<_>>>()?;
    let norm = 1.0 / lat.hilbert_dim() as f64;
    let l = lat.size();
    let mut entries = Vec::with_capacity(l * l);
    for a_final in ops.iter() {
        for b in &evolved {
            entries.push(a_final.trace_of_product(b)? * norm);
        }
    }
    ComplexKernel {
        dim: ops.dim(),
        n_qudits: ops.n_qudits(),
        entries,
    }
    .into_real(KERNEL_IMAG_TOL)
}

/// `d^{-2n} Σ_μ̃ ω^{2Δμ∧μ̃} f(μ+μ̃) conj(f(μ′−μ̃))` for an arbitrary lattice
/// function `f` and root-of-unity table; no reality check is applied.
pub fn fourier_kernel_raw(f: &[Complex64], lat: &Lattice, omega: &OmegaTable) -> Result<ComplexKernel> {
    let l = lat.size();
    if f.len() != l {
        return Err(Error::LengthMismatch {
            left: f.len(),
            right: l,
        });
    }
    let dim = lat.dim();
    let norm = 1.0 / (l as f64);
    let conj: Vec<Complex64> = f.iter().map(|z| z.conj()).collect();
    let mut entries = Vec::with_capacity(l * l);
    for mu_f in 0..l {
        for mu_i in 0..l {
            let delta = lat.sub(mu_f, mu_i);
            let mut acc = Complex64::new(0.0, 0.0);
            for tilde in 0..l {
                let e = dim.mul(2, lat.symplectic(delta, tilde));
                acc += omega.get(e) * f[lat.add(mu_i, tilde)] * conj[lat.sub(mu_f, tilde)];
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

/// Phase-space function `U_W` of an evolution operator.
pub fn evolution_symbol(u: &ComplexMatrix, dim: PrimeDim, n_qudits: usize) -> Result<Vec<Complex64>> {
    Ok(phase_space_function(&weyl_symbol(u, dim, n_qudits)?)?.values)
}

/// Production kernel from the Fourier form.
pub fn kernel_fourier_form(u: &ComplexMatrix, dim: PrimeDim, n_qudits: usize) -> Result<WignerKernel> {
    let lat = Lattice::new(dim, n_qudits)?;
    check_unitary(u, &lat)?;
    let u_w = evolution_symbol(u, dim, n_qudits)?;
    fourier_kernel_raw(&u_w, &lat, &OmegaTable::new(dim))?.into_real(KERNEL_IMAG_TOL)
}

/// Weyl-space kernel
/// `G̃(κ′;κ) = d^{-2n} Σ_κ″ ω^{2⁻¹ Σ[k″(j′+j) − j″(k′+k)]} Ũ(κ′+κ″) conj(Ũ(κ″+κ))`.
pub fn weyl_space_kernel(u: &ComplexMatrix, dim: PrimeDim) -> Result<ComplexKernel> {
    let n_qudits = infer_qudits(u.rows(), dim)?;
    let lat = Lattice::new(dim, n_qudits)?;
    check_unitary(u, &lat)?;
    let sym = weyl_symbol(u, dim, n_qudits)?;
    let conj: Vec<Complex64> = sym.values.iter().map(|z| z.conj()).collect();
    let omega = OmegaTable::new(dim);
    let l = lat.size();
    let norm = 1.0 / (l as f64);
    let mut entries = Vec::with_capacity(l * l);
    for kf in 0..l {
        for ki in 0..l {
            let total = lat.add(kf, ki);
            let mut s = Complex64::new(0.0, 0.0);
            for kpp in 0..l {
                let e = dim.mul(dim.half_inv(), lat.symplectic(kpp, total));
                s += omega.get(e) * sym.values[lat.add(kf, kpp)] * conj[lat.add(kpp, ki)];
            }
            entries.push(s * norm);
        }
    }
    Ok(ComplexKernel { dim, n_qudits, entries })
}

/// Transform a Weyl-space kernel to the direct lattice:
/// `G(μ′,μ) = d^{-2n} Σ_{κ′,κ} ω^{F(κ′,μ′)} G̃(κ′;κ) ω^{−F(κ,μ)}`, with
/// `F(κ,μ) = Σ(j n − k m)`. Done as two separable passes.
pub fn weyl_kernel_to_wigner(gt: &ComplexKernel) -> Result<ComplexKernel> {
    let lat = Lattice::new(gt.dim, gt.n_qudits)?;
    let dim = gt.dim;
    let omega = OmegaTable::new(dim);
    let l = lat.size();
    if gt.entries.len() != l * l {
        return Err(Error::LengthMismatch {
            left: gt.entries.len(),
            right: l * l,
        });
    }
    // T(κ′, μ) = Σ_κ G̃(κ′;κ) ω^{−F(κ,μ)}
    let mut t = vec![Complex64::new(0.0, 0.0); l * l];
    for kf in 0..l {
        let row = &gt.entries[kf * l..(kf + 1) * l];
        for mu in 0..l {
            t[kf * l + mu] = row
                .iter()
                .enumerate()
                .map(|(ki, g)| g * omega.get(dim.neg(lat.fourier_exponent(ki, mu))))
                .sum();
        }
    }
    let norm = 1.0 / (l as f64);
    let mut entries = Vec::with_capacity(l * l);
    for mu_f in 0..l {
        for mu_i in 0..l {
            let s: Complex64 = (0..l)
                .map(|kf| omega.get(lat.fourier_exponent(kf, mu_f)) * t[kf * l + mu_i])
                .sum();
            entries.push(s * norm);
        }
    }
    Ok(ComplexKernel {
        dim,
        n_qudits: gt.n_qudits,
        entries,
    })
}

/// `W_out(μ′) = Σ_μ G(μ′,μ) W_in(μ)`.
pub fn apply_kernel(g: &WignerKernel, w: &WignerFunction) -> Result<WignerFunction> {
    let l = g.size();
    if g.dim != w.dim || w.values.len() != l {
        return Err(Error::LengthMismatch {
            left: w.values.len(),
            right: l,
        });
    }
    let values = g
        .entries
        .chunks_exact(l)
        .map(|row| row.iter().zip(&w.values).map(|(a, b)| a * b).sum())
        .collect();
    WignerFunction::from_values(w.dim, w.n_qudits, values)
}

/// `G = G2 · G1` (apply `G1` first).
pub fn compose_kernels(g2: &WignerKernel, g1: &WignerKernel) -> Result<WignerKernel> {
    let l = g1.size();
    if g1.dim != g2.dim || g2.size() != l {
        return Err(Error::ShapeMismatch {
            op: "compose_kernels",
            left: (g2.size(), g2.size()),
            right: (l, l),
        });
    }
    let mut entries = vec![0.0; l * l];
    for r in 0..l {
        let out = &mut entries[r * l..(r + 1) * l];
        for k in 0..l {
            let a = g2.entries[r * l + k];
            if a == 0.0 {
                continue;
            }
            for (o, b) in out.iter_mut().zip(&g1.entries[k * l..(k + 1) * l]) {
                *o += a * b;
            }
        }
    }
    Ok(WignerKernel {
        dim: g1.dim,
        n_qudits: g1.n_qudits,
        entries,
    })
}
