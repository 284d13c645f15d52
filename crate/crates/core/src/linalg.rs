//! Dense complex matrices at qudit scale.
//!
//! Composite systems use the subsystem-1-major convention throughout: the
//! basis index of `|i₁⟩⊗|i₂⟩` is `i₁·d₂ + i₂`. All reductions sum in
//! ascending index order so results are reproducible bit for bit.

use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: rows * cols,
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let diag: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    /// `|ψ⟩⟨φ|`.
    pub fn outer(ket: &[Complex64], bra: &[Complex64]) -> Self {
        Self::from_fn(ket.len(), bra.len(), |r, c| ket[r] * bra[c].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare(self.rows, self.cols))
        }
    }

    fn require_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (o, &b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Result<Complex64> {
        let n = self.require_square()?;
        Ok((0..n).fold(ZERO, |acc, i| acc + self[(i, i)]))
    }

    /// `Tr[A·B]` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Result<Complex64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::ShapeMismatch {
                op: "trace_of_product",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut acc = ZERO;
        for r in 0..self.rows {
            for c in 0..self.cols {
                acc += self.data[r * self.cols + c] * other.data[c * other.cols + r];
            }
        }
        Ok(acc)
    }

    /// Hilbert–Schmidt inner product `Tr[A†B]`.
    pub fn hilbert_schmidt(&self, other: &Self) -> Result<Complex64> {
        self.require_same_shape(other, "hilbert_schmidt")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(ZERO, |acc, (&a, &b)| acc + a.conj() * b))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "add")?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other, "sub")?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * factor).collect(),
        }
    }

    /// In-place `self += factor · other`.
    pub fn add_scaled(&mut self, factor: Complex64, other: &Self) -> Result<()> {
        self.require_same_shape(other, "add_scaled")?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.require_same_shape(other, "max_abs_diff")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max |A − A†|`.
    pub fn hermiticity_error(&self) -> Result<f64> {
        let n = self.require_square()?;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        Ok(worst)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error().map(|e| e <= tol).unwrap_or(false)
    }

    /// `max |U U† − I|`.
    pub fn unitarity_error(&self) -> Result<f64> {
        let n = self.require_square()?;
        self.matmul(&self.adjoint())?.max_abs_diff(&Self::identity(n))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error().map(|e| e <= tol).unwrap_or(false)
    }

    pub fn pow(&self, exponent: u32) -> Result<Self> {
        let n = self.require_square()?;
        let mut out = Self::identity(n);
        for _ in 0..exponent {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Kronecker product, subsystem-1-major.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Kronecker product of a sequence of factors, first factor most significant.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Trace out every subsystem except `keep`.
pub fn partial_trace(rho: &ComplexMatrix, keep: usize, dims: &[usize]) -> Result<ComplexMatrix> {
    let n = rho.require_square()?;
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != n {
        return Err(Error::InvalidDims(format!("{dims:?} for a {n}x{n} matrix")));
    }
    if keep >= dims.len() {
        return Err(Error::InvalidDims(format!("subsystem {keep} of {}", dims.len())));
    }
    let dk = dims[keep];
    let inner: usize = dims[keep + 1..].iter().product();
    let outer: usize = dims[..keep].iter().product();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = ZERO;
            for o in 0..outer {
                for q in 0..inner {
                    let r = (o * dk + i) * inner + q;
                    let c = (o * dk + j) * inner + q;
                    acc += rho[(r, c)];
                }
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    h.require_square()?;
    let mut vals: Vec<f64> = SymmetricEigen::new(h.to_nalgebra())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Tolerance on `|H − H†|` accepted by [`hermitian_expm`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// `exp(scale · H)` for Hermitian `H`, through the spectral decomposition
/// `H = V Λ V†`.
pub fn hermitian_expm(h: &ComplexMatrix, scale: Complex64) -> Result<ComplexMatrix> {
    let n = h.require_square()?;
    let err = h.hermiticity_error()?;
    if err > HERMITIAN_TOL {
        return Err(Error::NotHermitian(err));
    }
    let eig = SymmetricEigen::new(h.to_nalgebra());
    let v = ComplexMatrix::from_nalgebra(&eig.eigenvectors);
    let phases: Vec<Complex64> = eig.eigenvalues.iter().map(|&l| (scale * l).exp()).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = ZERO;
            for (k, &p) in phases.iter().enumerate() {
                acc += v[(r, k)] * p * v[(c, k)].conj();
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// A Hermitian generator `ħχ·M` with `ħ = 1`; times enter as `χt`.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    matrix: ComplexMatrix,
    coupling: f64,
    hbar: f64,
}

impl HamiltonianSpec {
    pub fn new(matrix: ComplexMatrix, coupling: f64) -> Result<Self> {
        let err = matrix.hermiticity_error()?;
        if err > HERMITIAN_TOL {
            return Err(Error::NotHermitian(err));
        }
        Ok(HamiltonianSpec {
            matrix,
            coupling,
            hbar: 1.0,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// The full operator `ħχ·M`.
    pub fn operator(&self) -> ComplexMatrix {
        self.matrix.scale(Complex64::new(self.hbar * self.coupling, 0.0))
    }

    /// `U(t) = exp(−iHt/ħ)`.
    pub fn evolution(&self, t: f64) -> Result<ComplexMatrix> {
        hermitian_expm(&self.matrix, Complex64::new(0.0, -self.coupling * t))
    }
}
