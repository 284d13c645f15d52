//! Discrete Wigner functions for systems of odd-prime qudits.
//!
//! Phase space of `n` qudits of prime dimension `d` is the lattice
//! `Z_d^{2n}`. Everything here works with integer phase exponents mod `d`
//! and converts to complex numbers only through an [`field::OmegaTable`].
//!
//! Layers, bottom up:
//!
//! - [`field`], [`linalg`]: modular arithmetic, lattices, dense complex
//!   matrices, Hermitian exponentials.
//! - [`weyl`]: displacement operators, Weyl symbols, phase-point operators,
//!   Wigner functions.
//! - [`propagator`]: the Wigner propagator `G(μ′, μ)` in trace, Fourier and
//!   Weyl-space forms.
//! - [`path_integral`]: short-time kernels, composed and enumerated path sums,
//!   the discrete action.
//! - [`pseudo_classical`]: commensurability of linear Hamiltonians and the
//!   resulting phase-space shifts.
//! - [`entanglement`]: the two-qutrit `χ x̂₁x̂₂` scenario.
//! - [`verify`], [`cli`]: the consistency suite and the command-line tool.
//!
//! ```
//! use qudit_wigner::field::PrimeDim;
//! use qudit_wigner::states::{product_density, StatePreset};
//! use qudit_wigner::weyl::wigner_function;
//!
//! let d = PrimeDim::new(3).unwrap();
//! let rho = product_density(d, &[StatePreset::Momentum(0)]).unwrap();
//! let w = wigner_function(&rho, d, 1).unwrap();
//! assert!((w.sum() - 1.0).abs() < 1e-12);
//! // p-eigenstate: uniform in m along the line n = 0
//! assert!((w.values[2 * 3] - 1.0 / 3.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod field;
pub mod linalg;
pub mod path_integral;
pub mod presets;
pub mod propagator;
pub mod pseudo_classical;
pub mod random;
pub mod states;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use field::{Lattice, PrimeDim};
pub use linalg::ComplexMatrix;
pub use propagator::{kernel_fourier_form, kernel_trace_form, WignerKernel};
pub use weyl::{wigner_function, WignerFunction};
