//! Exact arithmetic in `Z_d` for odd prime `d`.
//!
//! Every root-of-unity phase in the crate is carried as an integer exponent
//! modulo `d` and only turned into a complex number at the end, through
//! [`PrimeDim::omega`] or an [`OmegaTable`].

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension accepted by [`PrimeDim::new`].
pub const DEFAULT_MAX_DIM: u32 = 11;

/// A validated odd-prime Hilbert-space dimension together with `2⁻¹ mod d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeDim {
    d: u32,
    half_inv: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl PrimeDim {
    /// Validate `d` against [`DEFAULT_MAX_DIM`].
    pub fn new(d: i64) -> Result<Self> {
        Self::with_max(d, DEFAULT_MAX_DIM)
    }

    /// Validate `d` with a custom upper bound.
    pub fn with_max(d: i64, max: u32) -> Result<Self> {
        if d < 3 || d % 2 == 0 || !is_prime(d as u64) {
            return Err(Error::UnsupportedDimension(d));
        }
        if d > i64::from(max) {
            return Err(Error::DimensionTooLarge { d: d as u32, max });
        }
        let d = d as u32;
        Ok(PrimeDim {
            d,
            half_inv: d.div_ceil(2),
        })
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.d
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.d as usize
    }

    /// `2⁻¹ mod d`.
    #[inline]
    pub fn half_inv(self) -> u32 {
        self.half_inv
    }

    /// Canonical representative of `x` in `[0, d)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(i64::from(self.d)) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.d
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.d - b % self.d) % self.d
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.d - a % self.d) % self.d
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.d)) as u32
    }

    /// Multiplicative inverse via Fermat's little theorem; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.d;
        if a == 0 {
            return None;
        }
        let mut result = 1u64;
        let mut base = u64::from(a);
        let mut exp = self.d - 2;
        let m = u64::from(self.d);
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        Some(result as u32)
    }

    /// `ω^e` with `ω = exp(2πi/d)`, reducing `e` modulo `d` first.
    pub fn omega(self, exponent: i64) -> Complex64 {
        let e = self.reduce(exponent);
        if e == 0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, TAU * f64::from(e) / f64::from(self.d))
    }
}

impl fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.d)
    }
}

// Serialized as the bare integer `d`.
impl Serialize for PrimeDim {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u32(self.d)
    }
}

impl<'de> Deserialize<'de> for PrimeDim {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let d = i64::deserialize(deserializer)?;
        PrimeDim::new(d).map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`PrimeDim::new`].
pub fn make_prime_dim(d: i64) -> Result<PrimeDim> {
    PrimeDim::new(d)
}

/// Free-function form of [`PrimeDim::omega`].
pub fn omega_power(dim: PrimeDim, exponent: i64) -> Complex64 {
    dim.omega(exponent)
}

/// Precomputed `ω^0, …, ω^{d-1}`, indexed by a reduced exponent.
#[derive(Debug, Clone)]
pub struct OmegaTable {
    dim: PrimeDim,
    powers: Vec<Complex64>,
}

impl OmegaTable {
    pub fn new(dim: PrimeDim) -> Self {
        let powers = (0..dim.get()).map(|e| dim.omega(i64::from(e))).collect();
        OmegaTable { dim, powers }
    }

    /// A table whose root of unity is `exp(2πi(1+δ)/d)`. Breaks the
    /// periodicity every exact cancellation relies on; used as a negative
    /// control by the verification harness.
    pub fn perturbed(dim: PrimeDim, delta: f64) -> Self {
        let d = f64::from(dim.get());
        let powers = (0..dim.get())
            .map(|e| Complex64::from_polar(1.0, TAU * f64::from(e) * (1.0 + delta) / d))
            .collect();
        OmegaTable { dim, powers }
    }

    #[inline]
    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    #[inline]
    pub fn get(&self, exponent: u32) -> Complex64 {
        self.powers[exponent as usize]
    }

    #[inline]
    pub fn pow(&self, exponent: i64) -> Complex64 {
        self.powers[self.dim.reduce(exponent) as usize]
    }
}

/// A point `(m, n)` of the single-qudit lattice `Z_d × Z_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasePoint {
    pub m: u32,
    pub n: u32,
}

impl PhasePoint {
    pub fn new(dim: PrimeDim, m: i64, n: i64) -> Self {
        PhasePoint {
            m: dim.reduce(m),
            n: dim.reduce(n),
        }
    }
}

/// A point of the composite lattice `(Z_d)^{2n}` stored as
/// `(m₁, n₁, m₂, n₂, …)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseVector {
    coords: Vec<u32>,
}

impl PhaseVector {
    /// Reduces every coordinate into `[0, d)`; rejects odd lengths.
    pub fn new(dim: PrimeDim, coords: &[i64]) -> Result<Self> {
        if coords.len() % 2 != 0 || coords.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "phase vector needs an even, non-zero number of coordinates, got {}",
                coords.len()
            )));
        }
        Ok(PhaseVector {
            coords: coords.iter().map(|&c| dim.reduce(c)).collect(),
        })
    }

    pub fn zero(n_qudits: usize) -> Self {
        PhaseVector {
            coords: vec![0; 2 * n_qudits],
        }
    }

    pub fn from_points(points: &[PhasePoint]) -> Self {
        PhaseVector {
            coords: points.iter().flat_map(|p| [p.m, p.n]).collect(),
        }
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    #[inline]
    pub fn n_qudits(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn point(&self, qudit: usize) -> PhasePoint {
        PhasePoint {
            m: self.coords[2 * qudit],
            n: self.coords[2 * qudit + 1],
        }
    }

    pub fn add(&self, dim: PrimeDim, other: &PhaseVector) -> Result<PhaseVector> {
        self.zip_with(other, |a, b| dim.add(a, b))
    }

    pub fn sub(&self, dim: PrimeDim, other: &PhaseVector) -> Result<PhaseVector> {
        self.zip_with(other, |a, b| dim.sub(a, b))
    }

    pub fn neg(&self, dim: PrimeDim) -> PhaseVector {
        PhaseVector {
            coords: self.coords.iter().map(|&a| dim.neg(a)).collect(),
        }
    }

    pub fn scale(&self, dim: PrimeDim, factor: u32) -> PhaseVector {
        PhaseVector {
            coords: self.coords.iter().map(|&a| dim.mul(a, factor)).collect(),
        }
    }

    fn zip_with(&self, other: &PhaseVector, f: impl Fn(u32, u32) -> u32) -> Result<PhaseVector> {
        if self.coords.len() != other.coords.len() {
            return Err(Error::LengthMismatch {
                left: self.coords.len(),
                right: other.coords.len(),
            });
        }
        Ok(PhaseVector {
            coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Flat lattice index: base-`d` digits `(m₁, n₁, m₂, n₂, …)`, most
    /// significant first.
    pub fn index(&self, dim: PrimeDim) -> usize {
        let d = dim.as_usize();
        self.coords.iter().fold(0, |acc, &c| acc * d + c as usize)
    }

    pub fn from_index(dim: PrimeDim, n_qudits: usize, mut index: usize) -> PhaseVector {
        let d = dim.as_usize();
        let mut coords = vec![0u32; 2 * n_qudits];
        for slot in coords.iter_mut().rev() {
            *slot = (index % d) as u32;
            index /= d;
        }
        PhaseVector { coords }
    }
}

impl fmt::Display for PhaseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `Σ_a (m_a ñ_a − n_a m̃_a) mod d`.
pub fn symplectic(dim: PrimeDim, mu: &PhaseVector, nu: &PhaseVector) -> Result<u32> {
    if mu.coords.len() != nu.coords.len() {
        return Err(Error::LengthMismatch {
            left: mu.coords.len(),
            right: nu.coords.len(),
        });
    }
    Ok(symplectic_raw(dim, &mu.coords, &nu.coords))
}

#[inline]
pub(crate) fn symplectic_raw(dim: PrimeDim, mu: &[u32], nu: &[u32]) -> u32 {
    let d = u64::from(dim.get());
    let mut acc = 0u64;
    for (a, b) in mu.chunks_exact(2).zip(nu.chunks_exact(2)) {
        acc += u64::from(a[0]) * u64::from(b[1]);
        acc += (d - u64::from(a[1])) * u64::from(b[0]);
    }
    (acc % d) as u32
}

/// The `d^{2n}`-point lattice `(Z_d)^{2n}` with cached coordinates, so that
/// index arithmetic in the kernel sums never allocates.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: PrimeDim,
    n_qudits: usize,
    size: usize,
    coords: Vec<u32>,
}

impl Lattice {
    pub fn new(dim: PrimeDim, n_qudits: usize) -> Result<Self> {
        if n_qudits == 0 {
            return Err(Error::InvalidArgument("n_qudits must be at least 1".into()));
        }
        let size = dim
            .as_usize()
            .checked_pow(2 * n_qudits as u32)
            .filter(|&s| s <= 1 << 20)
            .ok_or_else(|| Error::InvalidArgument(format!("lattice of {n_qudits} qudits at d={dim} is too large")))?;
        let width = 2 * n_qudits;
        let mut coords = Vec::with_capacity(size * width);
        for i in 0..size {
            coords.extend_from_slice(PhaseVector::from_index(dim, n_qudits, i).coords());
        }
        Ok(Lattice {
            dim,
            n_qudits,
            size,
            coords,
        })
    }

    #[inline]
    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    #[inline]
    pub fn n_qudits(&self) -> usize {
        self.n_qudits
    }

    /// Number of lattice points, `d^{2n}`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Hilbert-space dimension `d^n`.
    #[inline]
    pub fn hilbert_dim(&self) -> usize {
        self.dim.as_usize().pow(self.n_qudits as u32)
    }

    #[inline]
    pub fn coords(&self, index: usize) -> &[u32] {
        let w = 2 * self.n_qudits;
        &self.coords[index * w..(index + 1) * w]
    }

    pub fn vector(&self, index: usize) -> PhaseVector {
        PhaseVector {
            coords: self.coords(index).to_vec(),
        }
    }

    #[inline]
    fn combine(&self, a: usize, b: usize, f: impl Fn(u32, u32) -> u32) -> usize {
        let d = self.dim.as_usize();
        self.coords(a)
            .iter()
            .zip(self.coords(b))
            .fold(0, |acc, (&x, &y)| acc * d + f(x, y) as usize)
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        let dim = self.dim;
        self.combine(a, b, |x, y| dim.add(x, y))
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        let dim = self.dim;
        self.combine(a, b, |x, y| dim.sub(x, y))
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        let d = self.dim.as_usize();
        let dim = self.dim;
        self.coords(a).iter().fold(0, |acc, &x| acc * d + dim.neg(x) as usize)
    }

    /// Multiply every coordinate by `2⁻¹`.
    #[inline]
    pub fn halve(&self, a: usize) -> usize {
        let d = self.dim.as_usize();
        let dim = self.dim;
        let h = dim.half_inv();
        self.coords(a)
            .iter()
            .fold(0, |acc, &x| acc * d + dim.mul(x, h) as usize)
    }

    #[inline]
    pub fn symplectic(&self, a: usize, b: usize) -> u32 {
        symplectic_raw(self.dim, self.coords(a), self.coords(b))
    }

    /// `Σ_a (j_a n_a − k_a m_a) mod d` for a reciprocal point `κ = (k, j)` and
    /// a direct point `μ = (m, n)`: the exponent of the inverse DFT.
    #[inline]
    pub fn fourier_exponent(&self, kappa: usize, mu: usize) -> u32 {
        let d = u64::from(self.dim.get());
        let mut acc = 0u64;
        for (kj, mn) in self.coords(kappa).chunks_exact(2).zip(self.coords(mu).chunks_exact(2)) {
            acc += u64::from(kj[1]) * u64::from(mn[1]);
            acc += (d - u64::from(kj[0])) * u64::from(mn[0]);
        }
        (acc % d) as u32
    }
}
