//! Displacement operators, the discrete Weyl transform and discrete Wigner
//! functions.
//!
//! For `n` qudits the reciprocal point `κ = (k₁, j₁, …, k_n, j_n)` labels the
//! tensor product `D(k₁,j₁) ⊗ … ⊗ D(k_n,j_n)`; normalizations are applied one
//! factor of `d` per qudit. Reciprocal and direct lattice functions share the
//! flat indexing of [`Lattice`].
//!
//! Every `D(k,j)` is a monomial matrix (one nonzero per column), which is how
//! it is stored internally: traces against it cost `d^n` operations and the
//! phases stay integer exponents until the final lookup.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Lattice, OmegaTable, PhaseVector, PrimeDim};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};

/// Imaginary residue tolerated before a Wigner function is cast to real.
pub const WIGNER_IMAG_TOL: f64 = 1e-12;
/// Tolerance on trace, hermiticity and positivity of density-matrix inputs.
pub const DENSITY_TOL: f64 = 1e-10;

/// A monomial operator: column `c` holds `ω^{exps[c]}` at row `rows[c]`.
#[derive(Debug, Clone)]
pub(crate) struct Monomial {
    pub rows: Vec<usize>,
    pub exps: Vec<u32>,
}

impl Monomial {
    fn single(dim: PrimeDim, k: u32, j: u32) -> Monomial {
        let d = dim.get();
        let base = dim.neg(dim.mul(dim.mul(k, j), dim.half_inv()));
        let mut rows = Vec::with_capacity(d as usize);
        let mut exps = Vec::with_capacity(d as usize);
        for c in 0..d {
            let r = dim.add(c, j);
            rows.push(r as usize);
            exps.push(dim.add(base, dim.mul(k, r)));
        }
        Monomial { rows, exps }
    }

    /// `D(κ)` for a composite reciprocal point.
    pub fn displacement(lat: &Lattice, kappa: usize) -> Monomial {
        let dim = lat.dim();
        let d = dim.as_usize();
        let mut out = Monomial {
            rows: vec![0],
            exps: vec![0],
        };
        for kj in lat.coords(kappa).chunks_exact(2) {
            let f = Monomial::single(dim, kj[0], kj[1]);
            let mut rows = Vec::with_capacity(out.rows.len() * d);
            let mut exps = Vec::with_capacity(out.rows.len() * d);
            for (&r, &e) in out.rows.iter().zip(&out.exps) {
                for (&fr, &fe) in f.rows.iter().zip(&f.exps) {
                    rows.push(r * d + fr);
                    exps.push(dim.add(e, fe));
                }
            }
            out = Monomial { rows, exps };
        }
        out
    }

    pub fn to_dense(&self, omega: &OmegaTable) -> ComplexMatrix {
        let n = self.rows.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (c, (&r, &e)) in self.rows.iter().zip(&self.exps).enumerate() {
            m[(r, c)] = omega.get(e);
        }
        m
    }

    /// `Tr[A · M]`.
    pub fn trace_with(&self, a: &ComplexMatrix, omega: &OmegaTable) -> Complex64 {
        self.rows
            .iter()
            .zip(&self.exps)
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (c, (&r, &e))| {
                acc + a[(c, r)] * omega.get(e)
            })
    }
}

/// Number of qudits `n` with `d^n = size`.
pub fn infer_qudits(size: usize, dim: PrimeDim) -> Result<usize> {
    let d = dim.as_usize();
    let mut acc = 1;
    let mut n = 0;
    while acc < size {
        acc *= d;
        n += 1;
    }
    if acc != size || n == 0 {
        return Err(Error::InvalidDims(format!("{size} is not a power of {d}")));
    }
    Ok(n)
}

/// Discrete Fourier transform `F = d^{-1/2} Σ ω^{mn}|x,m⟩⟨x,n|`.
pub fn dft_operator(dim: PrimeDim) -> ComplexMatrix {
    let norm = 1.0 / f64::from(dim.get()).sqrt();
    ComplexMatrix::from_fn(dim.as_usize(), dim.as_usize(), |m, n| {
        dim.omega(i64::from(dim.mul(m as u32, n as u32))) * norm
    })
}

/// Clock `Z = diag(ω^n)` and shift `X|n⟩ = |n⊕1⟩`.
pub fn clock_shift(dim: PrimeDim) -> (ComplexMatrix, ComplexMatrix) {
    let d = dim.as_usize();
    let z = ComplexMatrix::from_diagonal(&(0..d).map(|n| dim.omega(n as i64)).collect::<Vec<_>>());
    let x = ComplexMatrix::from_fn(d, d, |r, c| {
        if r == (c + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    (z, x)
}

/// `D(k,j) = ω^{-kj·2⁻¹} Z^k X^j`.
pub fn displacement(dim: PrimeDim, k: i64, j: i64) -> ComplexMatrix {
    Monomial::single(dim, dim.reduce(k), dim.reduce(j)).to_dense(&OmegaTable::new(dim))
}

/// The `d²` single-qudit displacement operators, indexed by `k·d + j`.
#[derive(Debug, Clone)]
pub struct DisplacementSet {
    dim: PrimeDim,
    operators: Vec<ComplexMatrix>,
}

impl DisplacementSet {
    pub fn new(dim: PrimeDim) -> Self {
        let omega = OmegaTable::new(dim);
        let d = dim.get();
        let operators = (0..d)
            .flat_map(|k| (0..d).map(move |j| (k, j)))
            .map(|(k, j)| Monomial::single(dim, k, j).to_dense(&omega))
            .collect();
        DisplacementSet { dim, operators }
    }

    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    pub fn get(&self, k: i64, j: i64) -> &ComplexMatrix {
        let idx = self.dim.reduce(k) as usize * self.dim.as_usize() + self.dim.reduce(j) as usize;
        &self.operators[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &ComplexMatrix)> {
        let d = self.dim.get();
        self.operators
            .iter()
            .enumerate()
            .map(move |(i, m)| (i as u32 / d, i as u32 % d, m))
    }
}

/// Weyl symbol `Ã(κ) = Tr[A·D(κ)]` over the reciprocal lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylSymbol {
    pub dim: PrimeDim,
    pub n_qudits: usize,
    pub values: Vec<Complex64>,
}

impl WeylSymbol {
    pub fn new(dim: PrimeDim, n_qudits: usize, values: Vec<Complex64>) -> Result<Self> {
        let lat_size = dim.as_usize().pow(2 * n_qudits as u32);
        if values.len() != lat_size {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: lat_size,
            });
        }
        Ok(WeylSymbol { dim, n_qudits, values })
    }

    pub fn get(&self, kappa: &PhaseVector) -> Complex64 {
        self.values[kappa.index(self.dim)]
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.dim, self.n_qudits)
    }

    pub fn max_abs_diff(&self, other: &WeylSymbol) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_operator_size(a: &ComplexMatrix, lat: &Lattice) -> Result<()> {
    let n = lat.hilbert_dim();
    if a.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            op: "operator vs qudit register",
            left: a.shape(),
            right: (n, n),
        });
    }
    Ok(())
}

/// Forward discrete Weyl transform.
pub fn weyl_symbol(a: &ComplexMatrix, dim: PrimeDim, n_qudits: usize) -> Result<WeylSymbol> {
    let lat = Lattice::new(dim, n_qudits)?;
    check_operator_size(a, &lat)?;
    let omega = OmegaTable::new(dim);
    let values = (0..lat.size())
        .map(|kappa| Monomial::displacement(&lat, kappa).trace_with(a, &omega))
        .collect();
    Ok(WeylSymbol { dim, n_qudits, values })
}

/// Inverse transform `A = d^{-n} Σ_κ Ã(κ) D(κ)†`.
pub fn inverse_weyl(sym: &WeylSymbol) -> Result<ComplexMatrix> {
    let lat = sym.lattice()?;
    let omega = OmegaTable::new(sym.dim);
    let n = lat.hilbert_dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for (kappa, &s) in sym.values.iter().enumerate() {
        let mono = Monomial::displacement(&lat, kappa);
        // D† has the conjugate phase at the transposed position
        for (c, (&r, &e)) in mono.rows.iter().zip(&mono.exps).enumerate() {
            out[(c, r)] += s * omega.get(sym.dim.neg(e));
        }
    }
    Ok(out.scale(Complex64::new(1.0 / n as f64, 0.0)))
}

/// A complex function on the direct lattice, e.g. `U_W` or `H_W`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceFunction {
    pub dim: PrimeDim,
    pub n_qudits: usize,
    pub values: Vec<Complex64>,
}

impl PhaseSpaceFunction {
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Real parts, after checking that no imaginary part exceeds `tol`.
    pub fn real_values(&self, tol: f64) -> Result<Vec<f64>> {
        let worst = self.max_imag();
        if worst > tol {
            return Err(Error::NotReal(worst));
        }
        Ok(self.values.iter().map(|z| z.re).collect())
    }
}

/// `A_W(μ) = d^{-n} Σ_κ Ã(κ) ω^{Σ(j n − k m)}`.
pub fn phase_space_function(sym: &WeylSymbol) -> Result<PhaseSpaceFunction> {
    let lat = sym.lattice()?;
    let omega = OmegaTable::new(sym.dim);
    let norm = 1.0 / lat.hilbert_dim() as f64;
    let values = (0..lat.size())
        .map(|mu| {
            let acc = sym
                .values
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (kappa, &s)| {
                    acc + s * omega.get(lat.fourier_exponent(kappa, mu))
                });
            acc * norm
        })
        .collect();
    Ok(PhaseSpaceFunction {
        dim: sym.dim,
        n_qudits: sym.n_qudits,
        values,
    })
}

/// Real phase-space function of a Hermitian operator (e.g. `H_W`).
pub fn hermitian_symbol(h: &ComplexMatrix, dim: PrimeDim, n_qudits: usize) -> Result<Vec<f64>> {
    phase_space_function(&weyl_symbol(h, dim, n_qudits)?)?.real_values(1e-10)
}

/// Hermitian phase-point operators `A(μ) = d^{-n} Σ_κ ω^{Σ(k m − j n)} D(κ)†`;
/// for several qudits these are tensor products of single-qudit ones.
#[derive(Debug, Clone)]
pub struct PhasePointOperatorSet {
    dim: PrimeDim,
    n_qudits: usize,
    operators: Vec<ComplexMatrix>,
}

impl PhasePointOperatorSet {
    pub fn new(dim: PrimeDim, n_qudits: usize) -> Result<Self> {
        let lat = Lattice::new(dim, n_qudits)?;
        let omega = OmegaTable::new(dim);
        let n = lat.hilbert_dim();
        let norm = Complex64::new(1.0 / n as f64, 0.0);
        let monomials: Vec<Monomial> = (0..lat.size()).map(|k| Monomial::displacement(&lat, k)).collect();
        let operators = (0..lat.size())
            .map(|mu| {
                let mut a = ComplexMatrix::zeros(n, n);
                for (kappa, mono) in monomials.iter().enumerate() {
                    let phase = dim.neg(lat.fourier_exponent(kappa, mu));
                    for (c, (&r, &e)) in mono.rows.iter().zip(&mono.exps).enumerate() {
                        a[(c, r)] += omega.get(dim.sub(phase, e));
                    }
                }
                a.scale(norm)
            })
            .collect();
        Ok(PhasePointOperatorSet {
            dim,
            n_qudits,
            operators,
        })
    }

    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    pub fn n_qudits(&self) -> usize {
        self.n_qudits
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn get(&self, index: usize) -> &ComplexMatrix {
        &self.operators[index]
    }

    pub fn at(&self, mu: &PhaseVector) -> &ComplexMatrix {
        &self.operators[mu.index(self.dim)]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ComplexMatrix> {
        self.operators.iter()
    }
}

/// Single-qudit phase-point operators.
pub fn phase_point_operators(dim: PrimeDim) -> PhasePointOperatorSet {
    PhasePointOperatorSet::new(dim, 1).expect("single-qudit lattice is always valid")
}

/// Real quasi-probability over `(Z_d)^{2n}`, normalized to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerFunction {
    pub dim: PrimeDim,
    pub n_qudits: usize,
    pub values: Vec<f64>,
}

fn validate_density(rho: &ComplexMatrix) -> Result<()> {
    let herm = rho.hermiticity_error()?;
    if herm > DENSITY_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let tr = rho.trace()?;
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::NotNormalized(tr.re));
    }
    let min = hermitian_eigenvalues(rho)?.first().copied().unwrap_or(0.0);
    if min < -DENSITY_TOL {
        return Err(Error::NotPositive(min));
    }
    Ok(())
}

/// Discrete Wigner function `W(μ) = d^{-2n} Σ_κ ρ̃(κ) ω^{Σ(j n − k m)}`.
pub fn wigner_function(rho: &ComplexMatrix, dim: PrimeDim, n_qudits: usize) -> Result<WignerFunction> {
    let lat = Lattice::new(dim, n_qudits)?;
    check_operator_size(rho, &lat)?;
    validate_density(rho)?;
    let f = phase_space_function(&weyl_symbol(rho, dim, n_qudits)?)?;
    let norm = 1.0 / lat.hilbert_dim() as f64;
    let values = f.real_values(WIGNER_IMAG_TOL)?.into_iter().map(|v| v * norm).collect();
    Ok(WignerFunction { dim, n_qudits, values })
}

/// The same function through `W(μ) = d^{-n} Tr[ρ A(μ)]`.
pub fn wigner_via_phase_points(rho: &ComplexMatrix, ops: &PhasePointOperatorSet) -> Result<WignerFunction> {
    let lat = Lattice::new(ops.dim, ops.n_qudits)?;
    check_operator_size(rho, &lat)?;
    let norm = 1.0 / lat.hilbert_dim() as f64;
    let mut values = Vec::with_capacity(ops.len());
    for a in ops.iter() {
        let v = rho.trace_of_product(a)? * norm;
        if v.im.abs() > WIGNER_IMAG_TOL {
            return Err(Error::NotReal(v.im.abs()));
        }
        values.push(v.re);
    }
    Ok(WignerFunction {
        dim: ops.dim,
        n_qudits: ops.n_qudits,
        values,
    })
}

/// Sum negativity `Σ_μ max(0, −W(μ))`.
pub fn negativity(w: &WignerFunction) -> f64 {
    w.values.iter().map(|&v| (-v).max(0.0)).sum()
}

#[derive(Serialize)]
struct CsvHeaderless<'a>(&'a [String]);

impl WignerFunction {
    pub fn from_values(dim: PrimeDim, n_qudits: usize, values: Vec<f64>) -> Result<Self> {
        let size = dim.as_usize().pow(2 * n_qudits as u32);
        if values.len() != size {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: size,
            });
        }
        Ok(WignerFunction { dim, n_qudits, values })
    }

    /// Wigner function of `I/d^n`: uniform `d^{-2n}`.
    pub fn uniform(dim: PrimeDim, n_qudits: usize) -> Self {
        let size = dim.as_usize().pow(2 * n_qudits as u32);
        WignerFunction {
            dim,
            n_qudits,
            values: vec![1.0 / size as f64; size],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, mu: &PhaseVector) -> f64 {
        self.values[mu.index(self.dim)]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn negativity(&self) -> f64 {
        negativity(self)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &WignerFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `Tr[ρ²] = d^n Σ_μ W(μ)²`.
    pub fn purity(&self) -> f64 {
        let hilbert = self.dim.as_usize().pow(self.n_qudits as u32) as f64;
        hilbert * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    /// Marginal on one qudit: `Σ` over every other qudit's `(m, n)`.
    pub fn marginal(&self, keep: usize) -> Result<WignerFunction> {
        if keep >= self.n_qudits {
            return Err(Error::InvalidDims(format!("qudit {keep} of {}", self.n_qudits)));
        }
        let lat = Lattice::new(self.dim, self.n_qudits)?;
        let d = self.dim.as_usize();
        let mut out = vec![0.0; d * d];
        for (i, &v) in self.values.iter().enumerate() {
            let c = lat.coords(i);
            out[c[2 * keep] as usize * d + c[2 * keep + 1] as usize] += v;
        }
        Ok(WignerFunction {
            dim: self.dim,
            n_qudits: 1,
            values: out,
        })
    }

    /// Single-qudit marginal over `n`: position probabilities `⟨x,m|ρ|x,m⟩`.
    pub fn position_marginal(&self) -> Result<Vec<f64>> {
        let w = self.marginal(0)?;
        let d = self.dim.as_usize();
        Ok((0..d).map(|m| (0..d).map(|n| w.values[m * d + n]).sum()).collect())
    }

    /// Single-qudit marginal over `m`: momentum probabilities `⟨p,n|ρ|p,n⟩`.
    pub fn momentum_marginal(&self) -> Result<Vec<f64>> {
        let w = self.marginal(0)?;
        let d = self.dim.as_usize();
        Ok((0..d).map(|n| (0..d).map(|m| w.values[m * d + n]).sum()).collect())
    }

    /// `ρ = Σ_μ W(μ) A(μ)`.
    pub fn to_density_matrix(&self, ops: &PhasePointOperatorSet) -> Result<ComplexMatrix> {
        if ops.dim != self.dim || ops.n_qudits != self.n_qudits {
            return Err(Error::InvalidArgument(
                "phase-point operators do not match the Wigner function".into(),
            ));
        }
        let n = ops.get(0).rows();
        let mut rho = ComplexMatrix::zeros(n, n);
        for (&w, a) in self.values.iter().zip(ops.iter()) {
            rho.add_scaled(Complex64::new(w, 0.0), a)?;
        }
        Ok(rho)
    }

    /// CSV with columns `m1,n1,…,value`, rows in lattice order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let lat = Lattice::new(self.dim, self.n_qudits)?;
        let mut wtr = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=self.n_qudits)
            .flat_map(|a| [format!("m{a}"), format!("n{a}")])
            .collect();
        header.push("value".into());
        wtr.serialize(CsvHeaderless(&header))?;
        for (i, v) in self.values.iter().enumerate() {
            let mut row: Vec<String> = lat.coords(i).iter().map(|c| c.to_string()).collect();
            row.push(format!("{v:.17e}"));
            wtr.serialize(CsvHeaderless(&row))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: WignerFunction = serde_json::from_str(s)?;
        WignerFunction::from_values(w.dim, w.n_qudits, w.values)
    }
}
