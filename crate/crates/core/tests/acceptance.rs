//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use entfilter_core::concurrence::{concurrence, normalized_concurrence};
use entfilter_core::filtering::{balance_step, maximize, verify_final, IterationConfig};
use entfilter_core::qmat::{kron, Complex, Mat2, Qubit};
use entfilter_core::random::{
    ginibre2, haar_unitary2, random_entangled_state, random_filter, random_one_sided_state,
    random_psd, random_pure, random_state,
};
use entfilter_core::scan::{oracle_concurrence, random_search, scan_refined, ScanConfig};
use entfilter_core::states::{
    generate_from_phi_plus, paper_state_rho_tilde, reconstruct_from_branches, DensityOperator,
    PureState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_C: f64 = 0.8858;
const GOLDEN_TOL: f64 = 5e-4;
const PEAK_THETA1: f64 = 0.9427;
const PEAK_THETA2: f64 = 0.9428;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn golden_maximum() -> Outcome {
    let start = Instant::now();
    let trace = match maximize(&paper_state_rho_tilde(), &IterationConfig::default()) {
        Ok(t) => t,
        Err(e) => return check(false, format!("maximize failed: {e}")),
    };
    let elapsed = start.elapsed();
    let c = trace.final_concurrence();
    let (d1, d2) = verify_final(&trace.final_state);
    check(
        (c - GOLDEN_C).abs() <= GOLDEN_TOL && d1 < 1e-10 && d2 < 1e-10 && elapsed.as_secs_f64() < 1.0,
        format!(
            "C = {c:.6} (target {GOLDEN_C} ± {GOLDEN_TOL}), deviations {d1:.1e}, {d2:.1e}, {} steps, {:.2} ms",
            trace.steps.len(),
            ms(elapsed)
        ),
    )
}

fn published_operators() -> Outcome {
    let q = Mat2::real([[0.5875, -0.8090], [0.0130, 0.0095]]);
    let q2 = Mat2::real([[0.0106, -0.0145], [0.8091, 0.5874]]);
    let out = paper_state_rho_tilde().transformed(&kron(&q, &q2));
    match normalized_concurrence(&out) {
        Ok(c) => check(
            (c - GOLDEN_C).abs() <= GOLDEN_TOL,
            format!("C = {c:.6} (target {GOLDEN_C} ± {GOLDEN_TOL})"),
        ),
        Err(e) => check(false, format!("concurrence failed: {e}")),
    }
}

fn scan_peaks() -> Outcome {
    let best = match maximize(&paper_state_rho_tilde(), &IterationConfig::default()) {
        Ok(t) => t.final_concurrence(),
        Err(e) => return check(false, format!("maximize failed: {e}")),
    };
    let cfg = ScanConfig::with_defaults(paper_state_rho_tilde());
    let start = Instant::now();
    let (coarse, fine) = match scan_refined(&cfg, 201) {
        Ok(r) => r,
        Err(e) => return check(false, format!("scan failed: {e}")),
    };
    let elapsed = start.elapsed();
    let step = cfg.theta1.spacing();
    let peak = fine.argmax;
    let never_above = coarse
        .grid
        .iter()
        .chain(&fine.grid)
        .all(|p| p.concurrence.is_nan() || p.concurrence <= best + 1e-8);
    check(
        (peak.theta1 - PEAK_THETA1).abs() <= step
            && (peak.theta2 - PEAK_THETA2).abs() <= step
            && (peak.concurrence - best).abs() <= 1e-3
            && never_above
            && elapsed.as_secs_f64() < 30.0,
        format!(
            "peak ({:.5}, {:.5}) C = {:.6}, grid step {step:.4}, maximize {best:.6}, {} + {} points in {:.0} ms",
            peak.theta1,
            peak.theta2,
            peak.concurrence,
            coarse.grid.len(),
            fine.grid.len(),
            ms(elapsed)
        ),
    )
}

fn monotone_trace() -> Outcome {
    let rho = paper_state_rho_tilde();
    let c0 = normalized_concurrence(&rho).unwrap();

    // The plain alternating sequence, step by step.
    let mut state = rho;
    let mut side = Qubit::One;
    let mut before = c0;
    let mut worst_identity: f64 = 0.0;
    let mut strictly_increasing = true;
    for _ in 0..200 {
        let step = balance_step(&state, side).unwrap();
        let after = normalized_concurrence(&step.state).unwrap();
        let predicted = before / (2.0 * step.det_marginal_before.sqrt());
        worst_identity = worst_identity.max((after - predicted).abs());
        strictly_increasing &= after > before;
        before = after;
        state = step.state;
        side = side.other();
    }

    // The default run, where joint steps follow the balance steps.
    let trace = maximize(&rho, &IterationConfig::default()).unwrap();
    let mut before = trace.initial_concurrence;
    let mut worst_recorded: f64 = 0.0;
    let mut monotone = true;
    for s in &trace.steps {
        let predicted = match s.det_marginal_before {
            Some(det) => before / (2.0 * det.sqrt()),
            None => before * s.gain,
        };
        worst_recorded = worst_recorded.max((s.concurrence - predicted).abs());
        monotone &= if s.gain > 1.0 + 1e-12 {
            s.concurrence > before
        } else {
            (s.concurrence - before).abs() <= 1e-12
        };
        before = s.concurrence;
    }
    check(
        strictly_increasing && monotone && worst_identity <= 1e-9 && worst_recorded <= 1e-9,
        format!(
            "200 plain steps {c0:.4} -> {before_plain:.6} strictly increasing = {strictly_increasing}, \
             max |C_after - C_before/(2 sqrt det K)| = {worst_identity:.1e}; default run {} steps, max recurrence error {worst_recorded:.1e}",
            trace.steps.len(),
            before_plain = state_concurrence(&state),
        ),
    )
}

fn state_concurrence(rho: &DensityOperator) -> f64 {
    normalized_concurrence(rho).unwrap()
}

fn one_sided_bound() -> Outcome {
    let mut r = rng(5);
    let mut worst_bound: f64 = 0.0;
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..500 {
        let ranks = r.gen_range(1..=4);
        let rho = random_one_sided_state(&mut r, ranks);
        let c_in = state_concurrence(&rho);
        let k = rho.marginal(Qubit::One);
        let bound = c_in / (2.0 * k.det().re.sqrt());
        let step = balance_step(&rho, Qubit::One).unwrap();
        worst_bound = worst_bound.max((state_concurrence(&step.state) - bound).abs());
        for i in 0..200 {
            let q = if i % 2 == 0 {
                ginibre2(&mut r)
            } else {
                random_filter(&mut r)
            };
            let c = state_concurrence(&rho.one_sided(&q, Qubit::One));
            worst_excess = worst_excess.max(c - bound);
        }
    }
    check(
        worst_bound <= 1e-9 && worst_excess <= 1e-8,
        format!(
            "500 one-sided states: max |C_step - C/(2 sqrt det K)| = {worst_bound:.1e}, \
             100000 alternatives max excess {worst_excess:.1e}"
        ),
    )
}

fn optimality_falsification() -> Outcome {
    let mut r = rng(6);
    let mut states = vec![paper_state_rho_tilde()];
    states.extend((0..50).map(|_| random_entangled_state(&mut r, 1e-3)));
    let start = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    for (i, rho) in states.iter().enumerate() {
        let best = maximize(rho, &IterationConfig::default())
            .unwrap()
            .final_concurrence();
        let found = random_search(rho, 100_000, 1000 + i as u64).unwrap().best_c;
        worst = worst.max(found - best);
    }
    check(
        worst <= 1e-8,
        format!(
            "51 states x 100000 random filter pairs: max (search - maximize) = {worst:.2e}, {:.1} s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn order_invariance() -> Outcome {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let rho = random_entangled_state(&mut r, 1e-3);
        let one = maximize(&rho, &IterationConfig::default()).unwrap();
        let cfg = IterationConfig {
            start_side: Qubit::Two,
            ..IterationConfig::default()
        };
        let two = maximize(&rho, &cfg).unwrap();
        worst = worst.max((one.final_concurrence() - two.final_concurrence()).abs());
    }
    check(
        worst <= 1e-8,
        format!("200 inputs: max |C(side 1) - C(side 2)| = {worst:.1e}"),
    )
}

fn oracle_agreement() -> Outcome {
    let mut r = rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let m = random_psd(&mut r);
        let c = concurrence(&m).unwrap().c;
        worst = worst.max((c - oracle_concurrence(&m).unwrap()).abs());
    }
    let mut worst_pure: f64 = 0.0;
    for _ in 0..1000 {
        let t: f64 = r.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let phase = Complex::from_polar(1.0, r.gen_range(0.0..std::f64::consts::TAU));
        let (a, b) = (t.cos(), t.sin());
        let psi = PureState::schmidt(Complex::new(a, 0.0), phase * b).unwrap();
        let rotated =
            DensityOperator::from_pure(&psi).local(&haar_unitary2(&mut r), &haar_unitary2(&mut r));
        worst_pure = worst_pure.max((state_concurrence(&rotated) - 2.0 * a * b).abs());
        let generic = random_pure(&mut r);
        let [p, q, s, u] = *generic.amplitudes();
        let closed = 2.0 * (p * u - q * s).norm();
        worst_pure = worst_pure
            .max((state_concurrence(&DensityOperator::from_pure(&generic)) - closed).abs());
    }
    check(
        worst <= 1e-9 && worst_pure <= 1e-12,
        format!("1000 PSD operators max |primary - oracle| = {worst:.1e}; 2000 pure states max |C - 2|ab|| = {worst_pure:.1e}"),
    )
}

fn ensemble_round_trip() -> Outcome {
    let mut r = rng(9);
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let rho = if i % 5 == 0 {
            random_one_sided_state(&mut r, 2)
        } else {
            random_state(&mut r)
        };
        let branches = generate_from_phi_plus(&rho).unwrap();
        worst = worst.max(reconstruct_from_branches(&branches).dist(rho.op()));
    }
    check(
        worst <= 1e-10,
        format!("500 states: max Frobenius error {worst:.1e}"),
    )
}

fn convexity_bound() -> Outcome {
    let mut r = rng(10);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..500 {
        let rho = random_state(&mut r);
        let branches: Vec<DensityOperator> = (0..2)
            .map(|_| rho.local(&ginibre2(&mut r), &ginibre2(&mut r)))
            .collect();
        let out = DensityOperator::new(*branches[0].op() + *branches[1].op()).unwrap();
        let best = branches.iter().map(state_concurrence).fold(0.0, f64::max);
        worst = worst.max(state_concurrence(&out) - best);
    }
    check(
        worst <= 1e-10,
        format!("500 maps: max (C_out - max branch C) = {worst:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("golden maximum", golden_maximum),
        ("published-operator cross-check", published_operators),
        ("scan peaks", scan_peaks),
        ("monotone trace", monotone_trace),
        ("one-sided balance bound", one_sided_bound),
        ("optimality falsification", optimality_falsification),
        ("order invariance", order_invariance),
        ("oracle agreement", oracle_agreement),
        ("phi+ ensemble round trip", ensemble_round_trip),
        ("convexity bound", convexity_bound),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
