use num_complex::Complex64 as C64;
use proptest::prelude::*;
use usc_spectra::gme::{unvectorize, vectorize, BathSpec, Liouvillian, OpenSystem, PiChoice};
use usc_spectra::models::{
    bloch_siegert_poles, build_hamiltonian, hopfield_poles_general, hopfield_poles_resonant, Gauge, ModelParams,
};
use usc_spectra::operators::ComplexMatrix;
use usc_spectra::spectra::{compare_spectra, find_peaks, Grid, Spectrum};

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim)
        .prop_map(move |v| ComplexMatrix::from_fn(dim, |i, j| C64::new(v[i * dim + j].0, v[i * dim + j].1)))
}

fn gauge() -> impl Strategy<Value = Gauge> {
    prop_oneof![Just(Gauge::Dipole), Just(Gauge::Coulomb)]
}

fn pi_choice() -> impl Strategy<Value = PiChoice> {
    prop_oneof![Just(PiChoice::P), Just(PiChoice::Q), Just(PiChoice::PplusQ), Just(PiChoice::PminusQ)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn superoperators_follow_column_stacking(a in matrix(3), b in matrix(3), rho in matrix(3)) {
        let direct = &(&a * &rho) * &b;
        let via = unvectorize(&Liouvillian::sandwich(&a, &b).matrix().mul_vec(&vectorize(&rho)), 3).unwrap();
        prop_assert!(direct.max_abs_diff(&via) < 1e-12);
        prop_assert_eq!(unvectorize(&vectorize(&rho), 3).unwrap(), rho);
    }

    #[test]
    fn hamiltonians_are_hermitian(eta in 0.0..1.2f64, g in gauge(), rabi in any::<bool>()) {
        let p = if rabi { ModelParams::rabi(eta, 7) } else { ModelParams::hopfield(eta, 5, 4) }.unwrap();
        let h = build_hamiltonian(&p.with_gauge(g)).unwrap();
        prop_assert!(h.hermiticity_error() <= 1e-12 * h.max_abs());
    }

    #[test]
    fn open_systems_preserve_trace_and_positivity(
        eta in 0.02..1.0f64,
        g in gauge(),
        pi in pi_choice(),
        gc in any::<bool>(),
        rabi in any::<bool>(),
        kappa_ratio in 0.01..0.5f64,
    ) {
        let p = if rabi { ModelParams::rabi(eta, 8) } else { ModelParams::hopfield(eta, 5, 5) }.unwrap().with_gauge(g);
        let bath = BathSpec::new(pi, kappa_ratio * eta).unwrap().with_gauge_correction(gc);
        let system = OpenSystem::assemble(&p, &bath, 8).unwrap();
        prop_assert!(system.liouvillian.trace_defect() <= 1e-10);
        let max_re = system.liouvillian.eigenvalues().unwrap().iter().map(|z| z.re).fold(f64::MIN, f64::max);
        prop_assert!(max_re <= 1e-8, "max Re eig {}", max_re);
        let rho = system.steady_state.matrix();
        prop_assert!(rho.hermiticity_error() <= 1e-10);
        prop_assert!((rho.trace() - C64::new(1.0, 0.0)).norm() <= 1e-10);
        prop_assert!(system.steady_state.min_eigenvalue >= -1e-8);
    }

    #[test]
    fn poles_solve_the_classical_dispersion(
        omega_0 in 0.2..3.0f64,
        omega_c in 0.2..3.0f64,
        eta in 0.0..1.5f64,
    ) {
        // ω±² are the roots of x² − (ω0² + ωc² + 4g²ω0/ωc) x + ω0²ωc².
        let g = eta * omega_c;
        let p = hopfield_poles_general(omega_0, omega_c, g).unwrap();
        prop_assert!(0.0 < p.omega_minus && p.omega_minus <= p.omega_plus);
        let b = omega_0 * omega_0 + omega_c * omega_c + 4.0 * g * g * omega_0 / omega_c;
        let c = (omega_0 * omega_c).powi(2);
        for w in [p.omega_minus, p.omega_plus] {
            let x = w * w;
            prop_assert!((x * x - b * x + c).abs() <= 1e-12 * (b * x + c), "residual at {}", w);
        }
        prop_assert!(p.omega_minus <= omega_0.min(omega_c) + 1e-12);
        prop_assert!(p.omega_plus >= omega_0.max(omega_c) - 1e-12);
    }

    #[test]
    fn resonant_and_general_poles_agree(eta in 0.0..2.0f64) {
        let r = hopfield_poles_resonant(eta, 1.0).unwrap();
        let g = hopfield_poles_general(1.0, 1.0, eta).unwrap();
        prop_assert!((r.omega_minus - g.omega_minus).abs() <= 1e-12);
        prop_assert!((r.omega_plus - g.omega_plus).abs() <= 1e-12);
        prop_assert!((r.omega_minus * r.omega_plus - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bloch_siegert_error_is_third_order(eta in 0.0..0.3f64) {
        let exact = hopfield_poles_resonant(eta, 1.0).unwrap();
        let bs = bloch_siegert_poles(eta, 1.0).unwrap();
        let bound = 0.05 * eta.powi(3) + 1e-15;
        prop_assert!((exact.omega_minus - bs.omega_minus).abs() <= bound);
        prop_assert!((exact.omega_plus - bs.omega_plus).abs() <= bound);
    }

    #[test]
    fn lorentzian_peak_is_found_at_its_centre(centre in 0.3..1.7f64, hw in 0.01..0.1f64) {
        let grid = Grid::linspace(0.0, 2.0, 2001).unwrap();
        let y = grid.points().iter().map(|w| hw * hw / ((w - centre).powi(2) + hw * hw)).collect();
        let s = Spectrum::new(grid.clone(), y).unwrap();
        let peaks = find_peaks(&s.normalized(), 0.05);
        prop_assert_eq!(peaks.len(), 1);
        prop_assert!((peaks[0].omega - centre).abs() <= grid.max_spacing());
        prop_assert!((peaks[0].halfwidth - hw).abs() <= 0.1 * hw + grid.max_spacing());
    }

    #[test]
    fn linf_is_a_symmetric_distance(
        a in prop::collection::vec(0.0..1.0f64, 50),
        b in prop::collection::vec(0.0..1.0f64, 50),
        scale in 0.1..10.0f64,
    ) {
        let grid = Grid::linspace(0.0, 1.0, 50).unwrap();
        let sa = Spectrum::new(grid.clone(), a.clone()).unwrap();
        let sb = Spectrum::new(grid.clone(), b).unwrap();
        let scaled = Spectrum::new(grid, a.iter().map(|x| x * scale).collect()).unwrap();
        let ab = compare_spectra(&sa, &sb).unwrap().linf;
        prop_assert!((ab - compare_spectra(&sb, &sa).unwrap().linf).abs() <= 1e-15);
        prop_assert!(compare_spectra(&sa, &scaled).unwrap().linf <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
    }
}
