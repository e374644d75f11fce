use entfilter_core::concurrence::{concurrence, normalized_concurrence, spin_flip};
use entfilter_core::emit::fmt_g10;
use entfilter_core::filtering::{
    balance_operator, balance_step, maximize, verify_final, IterationConfig,
};
use entfilter_core::qmat::{
    kron, marginal, partial_trace, polar, sqrt_psd, svd2, Complex, Mat2, Mat4, Qubit,
};
use entfilter_core::random::{
    ginibre2, ginibre4, haar_unitary2, random_entangled_state, random_filter,
    random_one_sided_state, random_psd, random_pure, random_state,
};
use entfilter_core::scan::{oracle_concurrence, random_search};
use entfilter_core::states::{
    generate_from_phi_plus, reconstruct_from_branches, rotation_r, state_from_json, state_to_json,
    DensityOperator, PureState,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn hermitian4(r: &mut ChaCha8Rng) -> Mat4 {
    ginibre4(r).hermitian_part()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kron_mixed_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c, d) = (ginibre2(&mut r), ginibre2(&mut r), ginibre2(&mut r), ginibre2(&mut r));
        let lhs = kron(&a, &b) * kron(&c, &d);
        let rhs = kron(&(a * c), &(b * d));
        prop_assert!(lhs.dist(&rhs) < 1e-12 * (1.0 + rhs.norm_fro()));
    }

    #[test]
    fn kron_is_bilinear(seed in any::<u64>(), s in -3.0f64..3.0) {
        let mut r = rng(seed);
        let (a, a2, b) = (ginibre2(&mut r), ginibre2(&mut r), ginibre2(&mut r));
        let lhs = kron(&(a.scale(s) + a2), &b);
        let rhs = kron(&a, &b).scale(s) + kron(&a2, &b);
        prop_assert!(lhs.dist(&rhs) < 1e-12 * (1.0 + rhs.norm_fro()));
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (ginibre2(&mut r), ginibre2(&mut r));
        let m = kron(&a, &b);
        prop_assert!(partial_trace(&m, Qubit::Two).dist(&a.scale_c(b.trace())) < 1e-12);
        prop_assert!(partial_trace(&m, Qubit::One).dist(&b.scale_c(a.trace())) < 1e-12);
        prop_assert!(marginal(&m, Qubit::One).dist(&partial_trace(&m, Qubit::Two)) == 0.0);
    }

    #[test]
    fn marginal_covariance_under_local_maps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r);
        let (u, v) = (haar_unitary2(&mut r), haar_unitary2(&mut r));
        let out = rho.local(&u, &v);
        let k1 = rho.marginal(Qubit::One).congruence(&u);
        let k2 = rho.marginal(Qubit::Two).congruence(&v);
        prop_assert!(out.marginal(Qubit::One).dist(&k1) < 1e-12);
        prop_assert!(out.marginal(Qubit::Two).dist(&k2) < 1e-12);
    }

    #[test]
    fn hermitian_eigendecomposition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = hermitian4(&mut r);
        let e = h.eigh().unwrap();
        prop_assert!(e.reconstruct().dist(&h) < 1e-11 * (1.0 + h.norm_fro()));
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let v = e.vectors;
        prop_assert!((v.dagger() * v).dist(&Mat4::identity()) < 1e-12);
        let tr: f64 = e.values.iter().sum();
        prop_assert!((tr - h.trace().re).abs() < 1e-11 * (1.0 + h.norm_fro()));
    }

    #[test]
    fn psd_square_root(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_psd(&mut r);
        let s = sqrt_psd(&m).unwrap();
        prop_assert!((s * s).dist(&m) < 1e-11 * (1.0 + m.norm_fro()));
        prop_assert!(s.hermiticity_defect() < 1e-12);
        prop_assert!(s.eigh().unwrap().values[3] > -1e-12);
    }

    #[test]
    fn svd_and_polar(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = ginibre2(&mut r);
        let svd = svd2(&m);
        prop_assert!(svd.reconstruct().dist(&m) < 1e-12 * (1.0 + m.norm_fro()));
        prop_assert!(svd.s[0] >= svd.s[1] && svd.s[1] >= 0.0);
        prop_assert!((svd.s[0] * svd.s[1] - m.det().norm()).abs() < 1e-11 * (1.0 + m.norm_fro().powi(2)));
        let (p, w) = polar(&m);
        prop_assert!((p * w).dist(&m) < 1e-12 * (1.0 + m.norm_fro()));
        prop_assert!((w * w.dagger()).dist(&Mat2::identity()) < 1e-12);
    }

    #[test]
    fn reflection_is_an_involution(theta in -10.0f64..10.0) {
        let r = rotation_r(theta);
        prop_assert!((r * r).dist(&Mat2::identity()) < 1e-14);
    }

    #[test]
    fn phi_plus_ensemble_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r);
        let branches = generate_from_phi_plus(&rho).unwrap();
        let back = reconstruct_from_branches(&branches);
        prop_assert!(back.dist(rho.op()) < 1e-10);
    }

    #[test]
    fn concurrence_is_homogeneous(seed in any::<u64>(), s in 0.01f64..100.0) {
        let mut r = rng(seed);
        let m = random_psd(&mut r);
        let c = concurrence(&m).unwrap().c;
        let cs = concurrence(&m.scale(s)).unwrap().c;
        prop_assert!((cs - s * c).abs() < 1e-9 * s.max(1.0));
    }

    #[test]
    fn concurrence_local_unitary_invariance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r);
        let (u, v) = (haar_unitary2(&mut r), haar_unitary2(&mut r));
        let c = normalized_concurrence(&rho).unwrap();
        let cu = normalized_concurrence(&rho.local(&u, &v)).unwrap();
        prop_assert!((c - cu).abs() < 1e-10);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn spin_flip_is_an_involution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_psd(&mut r);
        prop_assert!(spin_flip(&spin_flip(&m)).dist(&m) < 1e-14 * (1.0 + m.norm_fro()));
    }

    #[test]
    fn pure_state_closed_form(seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = random_pure(&mut r);
        let [a00, a01, a10, a11] = *psi.amplitudes();
        let expected = 2.0 * (a00 * a11 - a01 * a10).norm();
        let c = normalized_concurrence(&DensityOperator::from_pure(&psi)).unwrap();
        prop_assert!((c - expected).abs() < 1e-12);
    }

    #[test]
    fn oracle_agrees_with_primary(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_psd(&mut r);
        let c = concurrence(&m).unwrap().c;
        let o = oracle_concurrence(&m).unwrap();
        prop_assert!((c - o).abs() < 1e-9);
    }

    #[test]
    fn kraus_maps_do_not_raise_the_best_branch(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r);
        let a = ginibre2(&mut r);
        let b = ginibre2(&mut r);
        let branches = [
            rho.local(&haar_unitary2(&mut r), &a),
            rho.one_sided(&b, Qubit::Two),
        ];
        let out = DensityOperator::new(*branches[0].op() + *branches[1].op()).unwrap();
        let best = branches
            .iter()
            .map(|b| normalized_concurrence(b).unwrap())
            .fold(0.0, f64::max);
        prop_assert!(normalized_concurrence(&out).unwrap() <= best + 1e-10);
    }

    #[test]
    fn state_json_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_state(&mut r);
        let back = state_from_json(&state_to_json(&rho)).unwrap();
        prop_assert_eq!(back.op().to_parts(), rho.op().to_parts());
    }

    #[test]
    fn g10_keeps_ten_significant_digits(x in -1e6f64..1e6) {
        let back: f64 = fmt_g10(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-10 * x.abs().max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn balance_operator_balances(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_state(&mut r).marginal(Qubit::One);
        let q = balance_operator(&k).unwrap();
        let out = k.congruence(&q);
        let half = Mat2::identity().scale(0.5 * out.trace().re);
        prop_assert!(out.dist(&half) < 1e-12 * out.trace().re);
    }

    #[test]
    fn one_sided_step_reaches_the_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_one_sided_state(&mut r, 3);
        let k = rho.marginal(Qubit::One);
        let step = balance_step(&rho, Qubit::One).unwrap();
        let c_in = normalized_concurrence(&rho).unwrap();
        let c_out = normalized_concurrence(&step.state).unwrap();
        prop_assert!((c_out - c_in / (2.0 * k.det().re.sqrt())).abs() < 1e-9);
        prop_assert!(verify_final(&step.state).0 < 1e-12);
    }

    #[test]
    fn maximize_is_monotone_and_consistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_entangled_state(&mut r, 1e-3);
        let trace = maximize(&rho, &IterationConfig::default()).unwrap();
        let mut before = trace.initial_concurrence;
        for s in &trace.steps {
            prop_assert!(s.concurrence >= before - 1e-12);
            prop_assert!((s.concurrence - before * s.gain).abs() < 1e-9);
            if let Some(det) = s.det_marginal_before {
                prop_assert!(det > 0.0 && det <= 0.25 + 1e-12);
                prop_assert!((s.gain - 0.5 / det.sqrt()).abs() < 1e-12);
            }
            before = s.concurrence;
        }
        let (d1, d2) = verify_final(&trace.final_state);
        prop_assert!(d1 < 1e-10 && d2 < 1e-10);
        prop_assert!(trace.success_probability > 0.0 && trace.success_probability <= 1.0 + 1e-12);
        for q in [trace.q1, trace.q2] {
            prop_assert!(svd2(&q.physical()).s[0] <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn maximize_ignores_start_side_and_local_unitaries(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_entangled_state(&mut r, 1e-3);
        let (u, v) = (haar_unitary2(&mut r), haar_unitary2(&mut r));
        let base = maximize(&rho, &IterationConfig::default()).unwrap().final_concurrence();
        let other = IterationConfig { start_side: Qubit::Two, ..IterationConfig::default() };
        let swapped = maximize(&rho, &other).unwrap().final_concurrence();
        let rotated = maximize(&rho.local(&u, &v), &IterationConfig::default())
            .unwrap()
            .final_concurrence();
        prop_assert!((base - swapped).abs() < 1e-8);
        prop_assert!((base - rotated).abs() < 1e-8);
    }

    #[test]
    fn random_filters_never_beat_maximize(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_entangled_state(&mut r, 1e-3);
        let best = maximize(&rho, &IterationConfig::default()).unwrap().final_concurrence();
        for _ in 0..200 {
            let (q1, q2) = (random_filter(&mut r), random_filter(&mut r));
            let out = rho.local(&q1, &q2);
            prop_assert!(normalized_concurrence(&out).unwrap() <= best + 1e-8);
        }
    }

    #[test]
    fn random_search_is_reproducible(seed in any::<u64>()) {
        let rho = random_entangled_state(&mut rng(seed), 1e-3);
        let a = random_search(&rho, 5000, seed).unwrap();
        let b = random_search(&rho, 5000, seed).unwrap();
        prop_assert_eq!(a.best_c, b.best_c);
        prop_assert_eq!(a.best_index, b.best_index);
    }
}

#[test]
fn pure_schmidt_state_balances_in_one_step() {
    for &(a, b) in &[(0.3, 0.7), (0.95, 0.05), (0.5, 0.5)] {
        let psi = PureState::normalize([
            Complex::new(a, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(b, 0.0),
        ])
        .unwrap();
        let trace = maximize(
            &DensityOperator::from_pure(&psi),
            &IterationConfig::default(),
        )
        .unwrap();
        assert!(trace.steps.len() <= 1);
        assert!((trace.final_concurrence() - 1.0).abs() < 1e-12);
    }
}
