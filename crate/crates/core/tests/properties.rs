//! Property tests over random dimensions, operators and lattice points.

use std::f64::consts::PI;

use proptest::prelude::*;
use qudit_wigner::entanglement::{linear_entropy_closed_form, EntanglementRoute, TwoQutritScenario};
use qudit_wigner::field::{Lattice, PrimeDim};
use qudit_wigner::linalg::{kron, partial_trace, ComplexMatrix, HamiltonianSpec};
use qudit_wigner::path_integral::{composed_kernel, PathConfig};
use qudit_wigner::propagator::{apply_kernel, compose_kernels, kernel_fourier_form, twisted_convolution};
use qudit_wigner::pseudo_classical::{verify_shift_kernel, Commensurability, LinearHamiltonian};
use qudit_wigner::random::{random_density_matrix, random_hermitian, random_matrix, random_unitary, seeded_rng};
use qudit_wigner::states::{product_density, StatePreset};
use qudit_wigner::weyl::{hermitian_symbol, inverse_weyl, weyl_symbol, wigner_function, PhasePointOperatorSet};

fn prime() -> impl Strategy<Value = PrimeDim> {
    prop::sample::select(vec![3i64, 5, 7, 11]).prop_map(|d| PrimeDim::new(d).unwrap())
}

fn small_prime() -> impl Strategy<Value = PrimeDim> {
    prop::sample::select(vec![3i64, 5]).prop_map(|d| PrimeDim::new(d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_inverse_and_half(dim in prime(), a in 1u32..11) {
        let a = a % dim.get();
        prop_assume!(a != 0);
        let inv = dim.inv(a).unwrap();
        prop_assert_eq!(dim.mul(a, inv), 1);
        prop_assert_eq!(dim.mul(2, dim.half_inv()), 1);
    }

    #[test]
    fn lattice_group_laws(dim in small_prime(), n in 1usize..3, seed in any::<u64>()) {
        let lat = Lattice::new(dim, n).unwrap();
        let l = lat.size() as u64;
        let (a, b, c) = ((seed % l) as usize, ((seed / l) % l) as usize, ((seed / l / l) % l) as usize);
        prop_assert_eq!(lat.sub(lat.add(a, b), b), a);
        prop_assert_eq!(lat.add(a, lat.neg(a)), 0);
        prop_assert_eq!(lat.add(lat.halve(a), lat.halve(a)), a);
        // ω-exponent of the symplectic form is antisymmetric and additive
        prop_assert_eq!(dim.add(lat.symplectic(a, b), lat.symplectic(b, a)), 0);
        prop_assert_eq!(lat.symplectic(a, lat.add(b, c)), dim.add(lat.symplectic(a, b), lat.symplectic(a, c)));
        prop_assert_eq!(lat.symplectic(a, a), 0);
    }

    #[test]
    fn weyl_round_trip(dim in prime(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = random_matrix(dim.as_usize(), &mut rng);
        let back = inverse_weyl(&weyl_symbol(&a, dim, 1).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&a).unwrap() < 1e-12);
    }

    #[test]
    fn twisted_convolution_is_operator_product(dim in small_prime(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let n = dim.as_usize();
        let (a, b) = (random_matrix(n, &mut rng), random_matrix(n, &mut rng));
        let lhs = twisted_convolution(&weyl_symbol(&a, dim, 1).unwrap(), &weyl_symbol(&b, dim, 1).unwrap()).unwrap();
        let rhs = weyl_symbol(&a.matmul(&b).unwrap(), dim, 1).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn wigner_is_normalized_and_reconstructs(dim in prime(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let rho = random_density_matrix(dim.as_usize(), &mut rng);
        let w = wigner_function(&rho, dim, 1).unwrap();
        prop_assert!((w.sum() - 1.0).abs() < 1e-12);
        let purity = rho.trace_of_product(&rho).unwrap().re;
        prop_assert!((w.purity() - purity).abs() < 1e-12);
        let ops = PhasePointOperatorSet::new(dim, 1).unwrap();
        prop_assert!(w.to_density_matrix(&ops).unwrap().max_abs_diff(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn kernels_are_stochastic_and_purity_preserving(dim in prime(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let u = random_unitary(dim.as_usize(), &mut rng);
        let g = kernel_fourier_form(&u, dim, 1).unwrap();
        prop_assert!(g.max_column_sum_error() < 1e-10);
        let w = wigner_function(&random_density_matrix(dim.as_usize(), &mut rng), dim, 1).unwrap();
        let evolved = apply_kernel(&g, &w).unwrap();
        prop_assert!((evolved.sum() - 1.0).abs() < 1e-10);
        prop_assert!((evolved.purity() - w.purity()).abs() < 1e-10);
    }

    #[test]
    fn kernels_compose_like_unitaries(dim in small_prime(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let n = dim.as_usize();
        let (u1, u2) = (random_unitary(n, &mut rng), random_unitary(n, &mut rng));
        let g = compose_kernels(&kernel_fourier_form(&u2, dim, 1).unwrap(), &kernel_fourier_form(&u1, dim, 1).unwrap()).unwrap();
        let direct = kernel_fourier_form(&u2.matmul(&u1).unwrap(), dim, 1).unwrap();
        prop_assert!(g.max_abs_diff(&direct) < 1e-10);
    }

    #[test]
    fn two_qudit_kernel_of_product_unitary_factorizes(seed in any::<u64>()) {
        let d3 = PrimeDim::new(3).unwrap();
        let mut rng = seeded_rng(seed);
        let (u1, u2) = (random_unitary(3, &mut rng), random_unitary(3, &mut rng));
        let g = kernel_fourier_form(&kron(&u1, &u2), d3, 2).unwrap();
        let g1 = kernel_fourier_form(&u1, d3, 1).unwrap();
        let g2 = kernel_fourier_form(&u2, d3, 1).unwrap();
        prop_assert!(g.max_abs_diff(&g1.kron(&g2).unwrap()) < 1e-10);
    }

    #[test]
    fn composed_short_time_kernel_is_exact_for_diagonal_h(dim in small_prime(), seed in any::<u64>(), steps in 1usize..5, chi_t in -4.0f64..4.0) {
        let mut rng = seeded_rng(seed);
        let diag: Vec<f64> = (0..dim.as_usize()).map(|_| rand::Rng::gen_range(&mut rng, -2.0..2.0)).collect();
        let h = ComplexMatrix::from_real_diagonal(&diag);
        let lat = Lattice::new(dim, 1).unwrap();
        let h_w = hermitian_symbol(&h, dim, 1).unwrap();
        let exact = kernel_fourier_form(&HamiltonianSpec::new(h, 1.0).unwrap().evolution(chi_t).unwrap(), dim, 1).unwrap();
        let composed = composed_kernel(&h_w, &PathConfig::new(steps, chi_t).unwrap(), &lat).unwrap();
        prop_assert!(composed.max_abs_diff(&exact) < 1e-10);
    }

    #[test]
    fn hamiltonian_symbols_are_real(dim in prime(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let h = random_hermitian(dim.as_usize(), &mut rng);
        let h_w = hermitian_symbol(&h, dim, 1).unwrap();
        // Σ_μ H_W(μ) = d Tr H
        let total: f64 = h_w.iter().sum();
        prop_assert!((total - f64::from(dim.get()) * h.trace().unwrap().re).abs() < 1e-9);
    }

    #[test]
    fn even_k_always_shifts(dim in small_prime(), ka in 0i64..5, kb in 0i64..5, wrap in 0i64..2) {
        let d = i64::from(dim.get());
        let (ka, kb) = (2 * ka + 2 * d * wrap, 2 * kb);
        let v = verify_shift_kernel(&LinearHamiltonian::single(ka as f64, kb as f64), PI / d as f64, dim, 1).unwrap();
        prop_assert_eq!(v.report.class, Commensurability::Strict);
        prop_assert!(v.kernel_is_permutation && v.matches_prediction);
    }

    #[test]
    fn stabilizer_products_are_nonnegative(k1 in 0u32..3, k2 in 0u32..3, momentum in any::<bool>()) {
        let d3 = PrimeDim::new(3).unwrap();
        let s = |k| if momentum { StatePreset::Momentum(k) } else { StatePreset::Position(k) };
        let w = wigner_function(&product_density(d3, &[s(k1), s(k2)]).unwrap(), d3, 2).unwrap();
        prop_assert!(w.negativity() < 1e-14);
    }

    #[test]
    fn marginal_matches_partial_trace(seed in any::<u64>()) {
        let d3 = PrimeDim::new(3).unwrap();
        let mut rng = seeded_rng(seed);
        let rho = random_density_matrix(9, &mut rng);
        let w = wigner_function(&rho, d3, 2).unwrap();
        for keep in 0..2 {
            let reduced = wigner_function(&partial_trace(&rho, keep, &[3, 3]).unwrap(), d3, 1).unwrap();
            prop_assert!(w.marginal(keep).unwrap().max_abs_diff(&reduced) < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn linear_entropy_periodic_and_symmetric(chi_t in 0.0f64..(2.0 * PI)) {
        let s = linear_entropy_closed_form(chi_t);
        prop_assert!((linear_entropy_closed_form(chi_t + 2.0 * PI) - s).abs() < 1e-12);
        prop_assert!((linear_entropy_closed_form(2.0 * PI - chi_t) - s).abs() < 1e-12);
        let scenario = TwoQutritScenario::new().unwrap();
        let exact = scenario.record(chi_t, EntanglementRoute::Exact).unwrap();
        let shifted = scenario.record(chi_t + 2.0 * PI, EntanglementRoute::Exact).unwrap();
        prop_assert!((exact.linear_entropy - shifted.linear_entropy).abs() < 1e-12);
        prop_assert!((exact.linear_entropy - s).abs() < 1e-10);
    }
}

#[test]
fn evolved_two_qutrit_state_has_negativity() {
    let scenario = TwoQutritScenario::new().unwrap();
    assert!(scenario.initial_wigner().negativity() < 1e-14);
    let w = scenario.evolved_wigner(0.7, EntanglementRoute::Exact).unwrap();
    assert!(w.negativity() > 1e-3);
    assert!(w.values.iter().all(|v| v.is_finite()));
}
