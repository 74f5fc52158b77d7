//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each and exits nonzero if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use wstate_core::cavity::{phase_pair, reflection_coupled, reflection_uncoupled, CavityParams};
use wstate_core::gates::{
    controlled_phase, hadamard, holonomic_gate, hwp_gate, imperfect_hadamard, imperfect_t_prime,
    rotation_gate, t_prime,
};
use wstate_core::noise::{f_combined, f_cp, f_h, f_tp, simulate_noisy_fidelity};
use wstate_core::statevec::{fidelity_mixed, fidelity_pure};
use wstate_core::wcircuit::{
    build_w_state, check_weight_one, create_epr, double_w, expand_by_one, interleave_permutation,
};
use wstate_core::{
    DoublingMode, DoublingPlan, ExpansionCircuit, FidelityDefinition, HolonomicParams, NoiseParams,
    QubitPermutation, Schedule, StateVector, C64,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn sparse(k: usize, terms: &[(usize, f64)]) -> StateVector {
    let mut amps = vec![c(0.0); 1 << k];
    for &(i, a) in terms {
        amps[i] = c(a);
    }
    StateVector::from_amplitudes(amps).unwrap()
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn matrix_anchor() -> Outcome {
    let s = FRAC_1_SQRT_2;
    let printed: [[f64; 8]; 8] = [
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, s, 0.0, -s, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, s, 0.0, -s],
        [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, s, 0.0, s, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, s, 0.0, s],
    ];
    // best of several runs, so a cold cache does not decide the timing
    let mut best = Duration::MAX;
    let mut m = None;
    for _ in 0..5 {
        let start = Instant::now();
        let u = ExpansionCircuit::standard().unitary().unwrap();
        best = best.min(start.elapsed());
        m = Some(u);
    }
    let m = m.unwrap();
    let mut dev = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            dev = dev.max((m[i][j] - c(printed[i][j])).norm());
        }
    }
    outcome(
        dev < 1e-12 && best < Duration::from_millis(1),
        format!("max |dU| = {dev:.2e} (< 1e-12), composed in {best:?} (< 1 ms)"),
    )
}

fn stepwise_anchor() -> Outcome {
    let s = FRAC_1_SQRT_2;
    let expected = [
        (3, sparse(3, &[(0b100, s), (0b110, s)])),
        (6, sparse(3, &[(0b100, s), (0b010, s)])),
        (9, sparse(3, &[(0b100, s), (0b011, s)])),
        (12, sparse(3, &[(0b100, s), (0b001, s)])),
    ];
    let trace = ExpansionCircuit::standard()
        .trace_states(&StateVector::from_bits("100").unwrap())
        .unwrap();
    let dev = expected
        .iter()
        .map(|(step, e)| trace[step - 1].max_deviation(e).unwrap())
        .fold(0.0, f64::max);
    outcome(
        dev < 1e-12,
        format!("max amplitude dev over 4 states = {dev:.2e} (< 1e-12)"),
    )
}

fn epr_bell() -> Outcome {
    let epr = create_epr().unwrap();
    let bell = sparse(2, &[(0b01, FRAC_1_SQRT_2), (0b10, FRAC_1_SQRT_2)]);
    let f_dev = (fidelity_pure(&epr, &bell).unwrap() - 1.0).abs();
    let mut s = StateVector::from_bits("100").unwrap();
    ExpansionCircuit::standard().apply(&mut s, 0, 1, 2).unwrap();
    let anc = s.reduced_qubit(1).unwrap();
    let anc_dev = [
        (anc[0][0] - c(1.0)).norm(),
        anc[0][1].norm(),
        anc[1][0].norm(),
        anc[1][1].norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let rho = s.partial_trace(&[0, 2]).unwrap();
    let mixed_dev = (fidelity_mixed(&rho, &bell).unwrap() - 1.0).abs();
    outcome(
        f_dev < 1e-12 && anc_dev < 1e-12 && mixed_dev < 1e-12,
        format!("|1-F| = {f_dev:.2e}, |rho_anc - |0><0|| = {anc_dev:.2e}, traced |1-F| = {mixed_dev:.2e} (< 1e-12)"),
    )
}

fn growth_strategy() -> Outcome {
    let ideal = NoiseParams::IDEAL;
    let epr = expand_by_one(&StateVector::from_bits("1").unwrap(), 0, &ideal).unwrap();
    let w_like = expand_by_one(&epr, 0, &ideal).unwrap();
    let printed_like = sparse(3, &[(0b100, 0.5), (0b010, 0.5), (0b001, FRAC_1_SQRT_2)]);
    let d_like = w_like.max_deviation(&printed_like).unwrap();
    let w4 = expand_by_one(&w_like, 2, &ideal).unwrap();
    let printed_w4 = sparse(
        4,
        &[(0b1000, 0.5), (0b0100, 0.5), (0b0010, 0.5), (0b0001, 0.5)],
    );
    let d_w4 = w4.max_deviation(&printed_w4).unwrap();
    outcome(
        d_like < 1e-12 && d_w4 < 1e-12,
        format!("W-like dev = {d_like:.2e}, W_4 dev = {d_w4:.2e} (< 1e-12)"),
    )
}

/// The printed swap network SW_{2,7}, SW_{3,4}, SW_{5,9} against the
/// interleaving layout, then O on each triple and the ancillas traced out.
fn swap_network_w6() -> (f64, f64) {
    let input = build_w_state(3)
        .unwrap()
        .tensor(&StateVector::zeros(6).unwrap())
        .unwrap();
    let mut swapped = input.clone();
    for (i, j) in [(2, 7), (3, 4), (5, 9)] {
        swapped = swapped
            .permute(&QubitPermutation::swap(9, i - 1, j - 1).unwrap())
            .unwrap();
    }
    let laid_out = input.permute(&interleave_permutation(3)).unwrap();
    let layout_dev = swapped.max_deviation(&laid_out).unwrap();
    let circuit = ExpansionCircuit::standard();
    for t in 0..3 {
        circuit
            .apply(&mut swapped, 3 * t, 3 * t + 1, 3 * t + 2)
            .unwrap();
    }
    let rho = swapped.partial_trace(&[0, 2, 3, 5, 6, 8]).unwrap();
    let f_dev = (1.0 - fidelity_mixed(&rho, &build_w_state(6).unwrap()).unwrap()).abs();
    (layout_dev, f_dev)
}

fn doubling() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=4 {
        let target = build_w_state(2 * n).unwrap();
        for mode in [DoublingMode::Block, DoublingMode::Sequential] {
            for schedule in [Schedule::SerialAncilla, Schedule::ParallelAncilla] {
                let out = double_w(
                    &DoublingPlan::new(n, mode, schedule).unwrap(),
                    &NoiseParams::IDEAL,
                )
                .unwrap();
                let state = out.logical_state().unwrap();
                worst = worst.max(state.max_deviation(&target).unwrap());
                worst = worst.max((1.0 - out.report.fidelity).abs());
            }
        }
    }
    let (layout_dev, w6_dev) = swap_network_w6();
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-10 && layout_dev < 1e-15 && w6_dev < 1e-10 && elapsed < Duration::from_secs(5),
        format!(
            "max dev over 16 runs = {worst:.2e} (< 1e-10), swap network vs layout = {layout_dev:.1e}, \
             W_6 |1-F| = {w6_dev:.2e}, {elapsed:.2?} (< 5 s)"
        ),
    )
}

fn fidelity_formulas() -> Outcome {
    let zero_dev = [f_h(0.0), f_tp(0.0), f_cp(0.0), f_combined(0.0, 0.0, 0.0)]
        .into_iter()
        .map(|f| (f - 1.0).abs())
        .fold(0.0, f64::max);
    let t = PI / 60.0;
    let f_end = f_combined(t, t, t);

    let mut sim_dev = 0.0f64;
    let mut red_dev = 0.0f64;
    let mut run = runner(50);
    let box3 = (0.0..=t, 0.0..=t, 0.0..=t);
    for _ in 0..50 {
        let (a, b, g) = box3.new_tree(&mut run).unwrap().current();
        let p = NoiseParams::new(a, b, g);
        let sim = simulate_noisy_fidelity(2, &p, FidelityDefinition::PostSelectedOverlap).unwrap();
        sim_dev = sim_dev.max((sim - f_combined(a, b, g)).abs());
        red_dev = red_dev
            .max((f_combined(a, 0.0, 0.0) - f_h(a)).abs())
            .max((f_combined(0.0, b, 0.0) - f_tp(b)).abs())
            .max((f_combined(0.0, 0.0, g) - f_cp(g)).abs());
    }
    outcome(
        zero_dev < 1e-15 && f_end > 0.97 && sim_dev < 1e-9 && red_dev < 1e-12,
        format!(
            "F(0) dev = {zero_dev:.1e}, F_Combined(pi/60) = {f_end:.6} (> 0.97), \
             sim vs closed form at 50 points = {sim_dev:.2e} (< 1e-9), reductions = {red_dev:.2e} (< 1e-12)"
        ),
    )
}

fn n_independence() -> Outcome {
    let p = NoiseParams::new(0.03, 0.02, 0.05);
    let fs: Vec<f64> = (1..=4)
        .map(|n| simulate_noisy_fidelity(n, &p, FidelityDefinition::PostSelectedOverlap).unwrap())
        .collect();
    let lo = fs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = fs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    outcome(
        hi - lo < 1e-9,
        format!("F = {lo:.12} for n = 1..4, spread {:.2e} (< 1e-9)", hi - lo),
    )
}

fn cavity() -> Outcome {
    let (kappa, gamma) = (1.0f64, 1.0f64);
    let scale = (kappa * gamma).sqrt();
    let r0 = reflection_uncoupled(&CavityParams::resonant(0.0, kappa, gamma).unwrap());
    let r0_exact = r0 == c(-1.0);

    let mut eq_dev = 0.0f64;
    for k in 0..1000 {
        let g = 10.0 * scale * k as f64 / 999.0;
        let r = reflection_coupled(&CavityParams::resonant(g, kappa, gamma).unwrap());
        let printed = (4.0 * g * g - kappa * gamma) / (4.0 * g * g + kappa * gamma);
        eq_dev = eq_dev.max((r - c(printed)).norm());
    }

    let pp = phase_pair(&CavityParams::resonant(5.0 * scale, kappa, gamma).unwrap());
    let phase_dev = pp.phi.abs().max((pp.phi_0 - PI).abs());

    let mut mod_dev = 0.0f64;
    for k in 0..10_000 {
        let d = -500.0 + 1000.0 * k as f64 / 9999.0;
        let p = CavityParams::detuned(d, 5.0, kappa, gamma).unwrap();
        mod_dev = mod_dev.max((reflection_uncoupled(&p).norm() - 1.0).abs());
    }
    outcome(
        r0_exact && eq_dev <= 4.0 * f64::EPSILON && phase_dev < 1e-12 && mod_dev < 1e-12,
        format!(
            "r0 = {r0}, |r - closed form| over 1000 g = {eq_dev:.1e} (<= 4 eps), \
             phases at g = 5 sqrt(kg) off by {phase_dev:.1e}, ||r0| - 1| over 1e4 detunings = {mod_dev:.1e}"
        ),
    )
}

fn holonomic_hwp_gates() -> Outcome {
    let h = hadamard();
    let tp = t_prime();
    let hol = |theta| holonomic_gate(HolonomicParams::new(theta, 0.0, 0.0)).unwrap();
    let devs = [
        hol(FRAC_PI_4)
            .matrix()
            .max_deviation_up_to_phase(h.matrix()),
        hwp_gate(FRAC_PI_8)
            .matrix()
            .max_deviation_up_to_phase(h.matrix()),
        hol(FRAC_PI_8)
            .matrix()
            .max_deviation_up_to_phase(tp.matrix()),
        hwp_gate(FRAC_PI_8 / 2.0)
            .matrix()
            .max_deviation_up_to_phase(tp.matrix()),
    ];
    let worst = devs.into_iter().fold(0.0, f64::max);
    outcome(
        worst < 1e-12,
        format!("holonomic / HWP vs H and T' up to phase: max dev {worst:.2e} (< 1e-12)"),
    )
}

fn random_state(k: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << k)
        .prop_filter_map("zero vector", |v| {
            StateVector::normalized(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).ok()
        })
}

fn weight_one_state(k: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), k).prop_filter_map(
        "zero vector",
        move |v| {
            let mut amps = vec![c(0.0); 1 << k];
            for (j, (re, im)) in v.into_iter().enumerate() {
                amps[1 << j] = C64::new(re, im);
            }
            StateVector::normalized(amps).ok()
        },
    )
}

fn property_suites(suite_start: Instant) -> Outcome {
    let mut failures = Vec::new();

    // unitarity of every gate family over its parameter range
    let unitary = runner(256).run(&(-PI..PI, -PI..PI, -1.0f64..1.0), |(x, y, r)| {
        let gates = [
            rotation_gate(x),
            imperfect_hadamard(x),
            imperfect_t_prime(y),
            controlled_phase(x),
            hwp_gate(y),
            holonomic_gate(HolonomicParams::new(x, y, r)).unwrap(),
        ];
        for g in &gates {
            prop_assert!(g.matrix().unitarity_deviation() < 1e-12, "{}", g.label());
        }
        let noisy = ExpansionCircuit::with_noise(&NoiseParams::new(x, y, r))
            .unitary()
            .unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let dot: C64 = (0..8).map(|k| noisy[k][i].conj() * noisy[k][j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - c(expected)).norm() < 1e-12);
            }
        }
        Ok(())
    });
    if let Err(e) = unitary {
        failures.push(format!("unitarity: {e}"));
    }

    // partial traces keep unit trace, Hermiticity and purity at most 1
    let trace = runner(128).run(
        &(2usize..=6).prop_flat_map(|k| {
            (
                random_state(k),
                prop::sample::subsequence((0..k).collect::<Vec<_>>(), 1..=k),
            )
        }),
        |(s, keep)| {
            let rho = s.partial_trace(&keep).unwrap();
            prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
            prop_assert!(rho.hermiticity_deviation() < 1e-12);
            prop_assert!(rho.purity() <= 1.0 + 1e-12);
            Ok(())
        },
    );
    if let Err(e) = trace {
        failures.push(format!("trace preservation: {e}"));
    }

    // O keeps single-excitation support closed
    let closure = runner(128).run(
        &(1usize..=6).prop_flat_map(|k| (weight_one_state(k), 0..k)),
        |(s, target)| {
            let grown = expand_by_one(&s, target, &NoiseParams::IDEAL).unwrap();
            prop_assert!(check_weight_one(&grown).is_ok());
            prop_assert!((grown.norm_sqr() - 1.0).abs() < 1e-12);
            Ok(())
        },
    );
    if let Err(e) = closure {
        failures.push(format!("weight-one closure: {e}"));
    }

    // swaps are involutions; a permutation followed by its inverse is the identity
    let involution = runner(128).run(
        &(2usize..=7).prop_flat_map(|k| {
            (
                random_state(k),
                0..k,
                0..k,
                Just((0..k).collect::<Vec<_>>()).prop_shuffle(),
            )
        }),
        |(s, i, j, map)| {
            let k = s.num_qubits();
            let sw = QubitPermutation::swap(k, i, j).unwrap();
            let twice = s.permute(&sw).unwrap().permute(&sw).unwrap();
            prop_assert_eq!(&twice, &s);
            let p = QubitPermutation::new(map).unwrap();
            let back = s.permute(&p).unwrap().permute(&p.inverse()).unwrap();
            prop_assert_eq!(&back, &s);
            Ok(())
        },
    );
    if let Err(e) = involution {
        failures.push(format!("permutation involution: {e}"));
    }

    let elapsed = suite_start.elapsed();
    let passed = failures.is_empty() && elapsed < Duration::from_secs(60);
    let detail = if failures.is_empty() {
        format!("unitarity, trace preservation, weight-one closure, permutation involution all hold; whole suite {elapsed:.2?} (< 60 s)")
    } else {
        failures.join("; ")
    };
    outcome(passed, detail)
}

fn main() -> ExitCode {
    let suite_start = Instant::now();
    let criteria: [Criterion; 9] = [
        ("matrix anchor", matrix_anchor),
        ("stepwise anchor", stepwise_anchor),
        ("EPR/Bell", epr_bell),
        ("growth strategy", growth_strategy),
        ("doubling", doubling),
        ("fidelity formulas", fidelity_formulas),
        ("n-independence", n_independence),
        ("cavity", cavity),
        ("holonomic and HWP gates", holonomic_hwp_gates),
    ];
    let mut results: Vec<(&str, Outcome)> = criteria.iter().map(|(name, f)| (*name, f())).collect();
    results.push(("property suites", property_suites(suite_start)));

    println!();
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let status = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!("criterion {:>2} {status} {name}: {}", i + 1, o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
