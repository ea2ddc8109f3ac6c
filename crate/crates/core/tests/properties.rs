use std::f64::consts::{PI, TAU};

use hcs_core::angular::{shell_norm_squared, EulerAngles};
use hcs_core::fock1d::{
    evolve_spectral, generalized_cs, oscillator_cs, overlap, resolution_check_1d, stability_residual, FockLabel,
    PhaseAverage, Spectrum, SpectrumKind,
};
use hcs_core::hydrogen::{evolve_hydrogen, hydrogen_cs_truncated, hydrogen_stability_residual, HydrogenLabel};
use hcs_core::position::{
    eval_hydrogen_cs_position, export_density_grid, export_fock_density, radial_uncertainty_product, GridSpec,
};
use hcs_core::specfun::BasisIndex;
use hcs_core::weights::WeightFamily;
use hcs_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn family(i: usize) -> WeightFamily {
    if i == 0 {
        WeightFamily::exponential()
    } else {
        WeightFamily::sqrt_exponential()
    }
}

fn euler() -> impl Strategy<Value = EulerAngles> {
    (0.0..=PI, 0.0..TAU, 0.0..TAU).prop_map(|(a, b, c)| EulerAngles::new(a, b, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn overlap_matches_oscillator_kernel(
        (r1, t1) in (0.0..2.0f64, 0.0..TAU),
        (r2, t2) in (0.0..2.0f64, 0.0..TAU),
    ) {
        let z = Complex64::from_polar(r1, t1);
        let w = Complex64::from_polar(r2, t2);
        let a = oscillator_cs(z, 64).unwrap();
        let b = oscillator_cs(w, 64).unwrap();
        let kernel = (-0.5 * z.norm_sqr() - 0.5 * w.norm_sqr() + z.conj() * w).exp();
        prop_assert!((overlap(&a, &b) - kernel).norm() <= 1e-10);
    }

    #[test]
    fn exponential_generalized_is_oscillator(r in 0.0..3.0f64, theta in -10.0..10.0f64) {
        let e = WeightFamily::exponential();
        let g = generalized_cs(r, theta, &e, 80).unwrap();
        let o = oscillator_cs(Complex64::from_polar(r, theta), 80).unwrap();
        for (a, b) in g.coeffs().iter().zip(o.coeffs()) {
            prop_assert!((a - b).norm() <= 1e-13);
        }
    }

    #[test]
    fn evolution_preserves_norm(r in 0.0..3.0f64, theta in 0.0..TAU, t in -1e6..1e6f64) {
        let x = oscillator_cs(Complex64::from_polar(r, theta), 80).unwrap();
        for kind in [SpectrumKind::Oscillator, SpectrumKind::InverseSquare] {
            let y = evolve_spectral(&x, &Spectrum::new(kind, 1.3).unwrap(), t);
            let (a, b) = (x.norm_squared(), y.norm_squared());
            prop_assert!((a - b).abs() <= 8.0 * f64::EPSILON * a);
        }
    }

    #[test]
    fn single_shell_product_ignores_gamma(n in 0usize..4, g1 in -50.0..50.0f64, g2 in -50.0..50.0f64, om in euler()) {
        // a state on one shell carries γ only as a global phase
        let e = WeightFamily::exponential();
        let build = |gamma: f64| {
            let x = hydrogen_cs_truncated(&HydrogenLabel::new(0.7, gamma, om).unwrap(), &e, n).unwrap();
            let mut c = vec![Complex64::new(0.0, 0.0); x.coeffs().len()];
            let start = hcs_core::specfun::shells_dimension_below(n);
            c[start..].copy_from_slice(&x.coeffs()[start..]);
            hcs_core::hydrogen::HydrogenExpansion::from_coeffs(n, c).unwrap()
        };
        let a = radial_uncertainty_product(&build(g1)).unwrap();
        let b = radial_uncertainty_product(&build(g2)).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn position_eval_is_linear(
        s1 in 0.0..1.5f64, s2 in 0.0..1.5f64, g in -5.0..5.0f64,
        om1 in euler(), om2 in euler(),
        (r, th, ph) in (0.0..10.0f64, 0.0..PI, 0.0..TAU),
        (ar, ai) in (-2.0..2.0f64, -2.0..2.0f64),
    ) {
        let e = WeightFamily::exponential();
        let x = hydrogen_cs_truncated(&HydrogenLabel::new(s1, g, om1).unwrap(), &e, 6).unwrap();
        let y = hydrogen_cs_truncated(&HydrogenLabel::new(s2, -g, om2).unwrap(), &e, 6).unwrap();
        let a = Complex64::new(ar, ai);
        let one = Complex64::new(1.0, 0.0);
        let sum = x.combine(a, &y, one).unwrap();
        let lhs = eval_hydrogen_cs_position(&sum, r, th, ph).unwrap();
        let rhs = a * eval_hydrogen_cs_position(&x, r, th, ph).unwrap() + eval_hydrogen_cs_position(&y, r, th, ph).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}

#[test]
fn shell_norm_is_label_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 0..=6usize {
        let norms: Vec<f64> = (0..100)
            .map(|_| {
                let om = EulerAngles::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)).unwrap();
                shell_norm_squared(n, &om)
            })
            .collect();
        let mean = norms.iter().sum::<f64>() / norms.len() as f64;
        let sd = (norms.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / norms.len() as f64).sqrt();
        assert!(sd <= 1e-12, "n={n}: sd {sd}");
        assert!((mean - ((n + 1) * (n + 1)) as f64).abs() <= 1e-12);
    }
}

#[test]
fn stability_over_random_configurations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let osc = Spectrum::new(SpectrumKind::Oscillator, 1.0).unwrap();
    for i in 0..50 {
        let fam = family(i % 2);
        let t = rng.random_range(-1e4..1e4);
        let s = rng.random_range(0.0..2.0);
        let gamma = rng.random_range(-100.0..100.0);
        let om = EulerAngles::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)).unwrap();
        let omega = rng.random_range(0.1..3.0);
        let label = HydrogenLabel::new(s, gamma, om).unwrap();
        let res = hydrogen_stability_residual(&label, &fam, omega, t, 12).unwrap();
        assert!(res <= 5e-15, "hydrogen #{i}: {res}");

        let one_d = stability_residual(FockLabel::Generalized { r: s, theta: gamma }, &fam, &osc, t, 12).unwrap();
        assert!(one_d <= 5e-15, "generalized #{i}: {one_d}");
    }
}

#[test]
fn window_bound_holds_for_every_pair() {
    let e = WeightFamily::exponential();
    for gamma in [1e2, 1e3, 1e4] {
        let rep = resolution_check_1d(&e, SpectrumKind::InverseSquare, PhaseAverage::Window { gamma }, 10, 64).unwrap();
        assert_eq!(rep.bound_violations, 0);
        for n in 0..=10 {
            for np in 0..=10 {
                if n != np {
                    assert!(rep.operator[n][np].abs() <= rep.envelope[n][np] * (1.0 + 1e-12));
                }
            }
        }
    }
}

#[test]
fn stationary_density_at_s0() {
    let e = WeightFamily::exponential();
    let x = hydrogen_cs_truncated(&HydrogenLabel::new(0.0, 0.4, EulerAngles::ZERO).unwrap(), &e, 2).unwrap();
    let grid = GridSpec::new(vec![0.1, 1.0, 3.0], vec![0.0, 1.0], vec![0.0, 2.0]).unwrap();
    let rows = export_density_grid(&x, 1.0, &grid, &[0.0, 0.7, 123.0]).unwrap();
    let per_t = grid.len();
    for (k, row) in rows.iter().enumerate() {
        let d0 = rows[k % per_t].density;
        assert!((row.density - d0).abs() <= 4.0 * f64::EPSILON * d0);
    }
}

#[test]
fn export_gamma_shift_consistency() {
    let e = WeightFamily::exponential();
    let om = EulerAngles::new(0.8, 0.3, 1.4).unwrap();
    let (omega, t, gamma) = (1.0, 2.5, 0.5);
    let x = hydrogen_cs_truncated(&HydrogenLabel::new(1.1, gamma, om).unwrap(), &e, 8).unwrap();
    let y = hydrogen_cs_truncated(&HydrogenLabel::new(1.1, gamma + omega * t, om).unwrap(), &e, 8).unwrap();
    let grid = GridSpec::new(vec![0.5, 2.0, 6.0], vec![0.2, 1.5], vec![0.0, 4.0]).unwrap();
    let a = export_density_grid(&x, omega, &grid, &[t]).unwrap();
    let b = export_density_grid(&y, omega, &grid, &[0.0]).unwrap();
    for (p, q) in a.iter().zip(&b) {
        assert!((p.re_psi - q.re_psi).abs() <= 1e-14 && (p.im_psi - q.im_psi).abs() <= 1e-14);
    }
    let evolved = evolve_hydrogen(&x, omega, t);
    let v1 = eval_hydrogen_cs_position(&evolved, 1.0, 0.5, 0.5).unwrap();
    let v2 = eval_hydrogen_cs_position(&y, 1.0, 0.5, 0.5).unwrap();
    assert!((v1 - v2).norm() <= 1e-14);
}

#[test]
fn line_export_is_periodic() {
    let omega = 1.7;
    let spec = Spectrum::new(SpectrumKind::Oscillator, omega).unwrap();
    let x = oscillator_cs(Complex64::new(1.0, 0.5), 40).unwrap();
    let xs = [-2.0, -0.5, 0.0, 1.0, 3.0];
    let t = 0.9;
    let a = export_fock_density(&x, &spec, &xs, &[t]).unwrap();
    let b = export_fock_density(&x, &spec, &xs, &[t + TAU / omega]).unwrap();
    for (p, q) in a.iter().zip(&b) {
        assert!((p.re_psi - q.re_psi).abs() <= 1e-13 && (p.im_psi - q.im_psi).abs() <= 1e-13);
        assert!((p.density - q.density).abs() <= 1e-13);
    }
}

#[test]
fn eigenstate_embedding() {
    let idx = BasisIndex::new(2, 1, -1).unwrap();
    let x = hcs_core::hydrogen::HydrogenExpansion::eigenstate(idx, 3).unwrap();
    let a = eval_hydrogen_cs_position(&x, 1.5, 0.7, 0.3).unwrap();
    let b = hcs_core::position::eval_eigenstate(idx, 1.5, 0.7, 0.3).unwrap();
    assert!((a - b).norm() <= 1e-15);
}
