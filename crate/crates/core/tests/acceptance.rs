//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use nalgebra::{Complex, DMatrix};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssr_core::analysis::{helstrom_success, ppt_check, trace_distance};
use ssr_core::channels::{
    certify_not_locally_preparable, dephase, locc_statistics_gap, trial_observables, DephasingChannel,
};
use ssr_core::fock::{number_operator, DensityOperator, FockSpace, PartyPartition, Register};
use ssr_core::protocols::exact::entangled_success_exact;
use ssr_core::protocols::{
    coherent_summary, decode_coherent, dual_rail_teleport, entangled_summary,
    multiparty_security_check, random_qubit, Sign,
};
use ssr_core::states::{
    dealer_split, hiding_state, hiding_state_copies, rho1, rho1_decomposition, rho2, HidingBit, ALICE, BOB,
};
use ssr_core::Tolerances;

type M = DMatrix<Complex<f64>>;

const SEED: u64 = 0x5eed;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn max_abs(m: &M) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn from_real(d: usize, f: impl Fn(usize, usize) -> f64) -> M {
    M::from_fn(d, d, |i, j| Complex::new(f(i, j), 0.0))
}

fn ab_space(ca: usize, cb: usize) -> (FockSpace, PartyPartition) {
    let space = FockSpace::new(vec![Register::new("a", ALICE, ca), Register::new("b", BOB, cb)]).unwrap();
    let part = PartyPartition::from_space(&space);
    (space, part)
}

fn random_states(space: &FockSpace, count: usize, seed: u64) -> Vec<DensityOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| DensityOperator::random(space, &mut rng)).collect()
}

fn criterion_1() -> Outcome {
    let rho = rho1();
    let part = PartyPartition::from_space(rho.space());
    let out = dephase(&rho, &part).unwrap();
    let expected = from_real(4, |i, j| if i == j { 0.25 } else { 0.0 });
    let to_mixed = max_abs(&(out.matrix() - &expected));
    let moved = max_abs(&(out.matrix() - rho.matrix()));
    check(
        to_mixed <= 1e-12 && (moved - 0.25).abs() <= 1e-12,
        format!("|N(rho1) - I/4| = {to_mixed:.2e}, |N(rho1) - rho1| = {moved:.12}"),
    )
}

fn criterion_2() -> Outcome {
    let dec = rho1_decomposition();
    let weights_ok = dec.terms.len() == 4 && dec.terms.iter().all(|(p, _, _)| *p == 0.25);
    let rebuilt = dec.reconstruct().unwrap();
    // 1/4 on the diagonal, 1/4 between |01> and |10>.
    let expected = from_real(4, |i, j| match (i, j) {
        (i, j) if i == j => 0.25,
        (1, 2) | (2, 1) => 0.25,
        _ => 0.0,
    });
    let gap = max_abs(&(rebuilt.matrix() - &expected));
    check(weights_ok && gap <= 1e-12, format!("4 weights of 1/4, reconstruction gap {gap:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for copies in 1..=3 {
        let plus = hiding_state_copies(HidingBit::Zero, copies).unwrap().to_density();
        let minus = hiding_state_copies(HidingBit::One, copies).unwrap().to_density();
        let split = dealer_split(plus.space());
        let (dp, dm) = (dephase(&plus, &split).unwrap(), dephase(&minus, &split).unwrap());
        let gap = max_abs(&(dp.matrix() - dm.matrix()));
        let success = helstrom_success(&dp, &dm, 0.5).unwrap().success;
        pass &= gap <= 1e-12 && (success - 0.5).abs() <= 1e-12;
        notes.push(format!("M={copies}: gap {gap:.1e}, helstrom {success:.12}"));
    }
    // Single copy through the named constructor as well.
    let (p, m) = (hiding_state(HidingBit::Zero).to_density(), hiding_state(HidingBit::One).to_density());
    let split = dealer_split(p.space());
    let gap = max_abs(&(dephase(&p, &split).unwrap().matrix() - dephase(&m, &split).unwrap().matrix()));
    pass &= gap <= 1e-12;
    check(pass, notes.join("; "))
}

fn criterion_4() -> Outcome {
    let trials = 200;
    let mut states: Vec<(String, DensityOperator, PartyPartition)> = Vec::new();
    let r1 = rho1();
    states.push(("rho1".into(), r1.clone(), PartyPartition::from_space(r1.space())));
    let r2 = rho2(1.0, None).unwrap();
    states.push(("rho2(1)".into(), r2.clone(), PartyPartition::from_space(r2.space())));
    let plus = hiding_state(HidingBit::Zero).to_density();
    states.push(("|+>".into(), plus.clone(), dealer_split(plus.space())));
    let (space, part) = ab_space(2, 2);
    for (k, rho) in random_states(&space, 5, SEED).into_iter().enumerate() {
        states.push((format!("random-{k}"), rho, part.clone()));
    }

    let mut worst: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for (_, rho, part) in &states {
        let dephased = dephase(rho, part).unwrap();
        worst = worst.max(locc_statistics_gap(rho, &dephased, part, trials, SEED).unwrap());
        // Oracle: explicit Kronecker product of the same local draws.
        let diff = rho.matrix() - dephased.matrix();
        let alice_first = rho.space().registers()[0].party == part.parties()[0]
            || part.party_of(&rho.space().registers()[0].id) == Some(part.parties()[0].as_str());
        assert!(alice_first, "oracle assumes the first party's registers come first");
        for t in 0..trials {
            let obs = trial_observables(rho.space(), part, SEED, t).unwrap();
            let x = obs[0].matrix().kronecker(obs[1].matrix());
            let tr: Complex<f64> = x.iter().zip(diff.transpose().iter()).map(|(a, b)| a * b).sum();
            worst_oracle = worst_oracle.max(tr.norm());
        }
    }
    // Control: sigma_x on each side breaks the rule and sees the coherence of rho1.
    let sx = from_real(2, |i, j| if i != j { 1.0 } else { 0.0 });
    let control = (sx.kronecker(&sx) * (r1.matrix() - dephase(&r1, &PartyPartition::from_space(r1.space())).unwrap().matrix()))
        .trace()
        .norm();
    check(
        worst < 1e-10 && worst_oracle < 1e-10 && (control - 0.5).abs() < 1e-12,
        format!(
            "{} states x {trials} observables: max gap {worst:.2e} (kronecker oracle {worst_oracle:.2e}); \
             sigma_x control {control:.3}",
            states.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut worst_err: f64 = 0.0;
    for n in 1..=10usize {
        let s = entangled_summary(n).unwrap();
        let predicted = n as f64 / (n + 1) as f64;
        worst_err = worst_err.max((s.worst_case - predicted).abs());
        pass &= (s.worst_case - predicted).abs() <= 1e-10;
        let (e0, e1) = (entangled_success_exact(HidingBit::Zero, n), entangled_success_exact(HidingBit::One, n));
        pass &= e0.min(e1) == Ratio::new(n as i64, n as i64 + 1);
        let as_f64 = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
        pass &= (s.success_bit0 - as_f64(e0)).abs() <= 1e-10 && (s.success_bit1 - as_f64(e1)).abs() <= 1e-10;
    }
    check(pass, format!("N=1..10 worst-case error {worst_err:.2e}, exact worst case N/(N+1), bit 1 exact 1"))
}

/// Poisson weights `e^{-a^2} a^{2n} / n!` by recursion.
fn poisson(alpha: f64, cutoff: usize) -> Vec<f64> {
    let mut p = vec![(-alpha * alpha).exp()];
    for n in 1..=cutoff {
        p.push(p[n - 1] * alpha * alpha / n as f64);
    }
    p
}

/// `sum_{n,m=1}^{cutoff} p_n p_m (sqrt n + sqrt m)^2 / (4 alpha^2)`.
fn sum_f_oracle(alpha: f64, cutoff: usize) -> f64 {
    let p = poisson(alpha, cutoff);
    let mut total = 0.0;
    for n in 1..=cutoff {
        for m in 1..=cutoff {
            let s = (n as f64).sqrt() + (m as f64).sqrt();
            total += p[n] * p[m] * s * s / (4.0 * alpha * alpha);
        }
    }
    total
}

fn criterion_6() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    let mut previous = 0.0;
    for alpha in [1.0, 2.0, 3.0, 5.0] {
        let s = coherent_summary(alpha, None).unwrap();
        let oracle = sum_f_oracle(alpha, s.cutoff);
        let err = (s.success_bit0 - oracle).abs();
        pass &= err <= 1e-6 && s.success_bit0 >= previous;
        previous = s.success_bit0;
        notes.push(format!("a={alpha}: {:.9} (cutoff {}, |diff| {err:.1e})", s.success_bit0, s.cutoff));
    }
    pass &= previous > 0.99;
    check(pass, notes.join("; "))
}

fn criterion_7() -> Outcome {
    let alpha = 2.0;
    let r0 = decode_coherent(HidingBit::Zero, alpha, None).unwrap();
    let r1 = decode_coherent(HidingBit::One, alpha, None).unwrap();
    let cutoff = ssr_core::fock::default_coherent_cutoff(alpha);
    let p = poisson(alpha, cutoff);
    let mut spread: f64 = 0.0;
    let mut ratios = Vec::new();
    for n in 1..=cutoff {
        for m in 1..=cutoff {
            let v = [
                r0.outcome(Sign::Plus, n, Sign::Plus, m),
                r0.outcome(Sign::Minus, n, Sign::Minus, m),
                r1.outcome(Sign::Plus, n, Sign::Minus, m),
                r1.outcome(Sign::Minus, n, Sign::Plus, m),
            ];
            let hi = v.iter().cloned().fold(f64::MIN, f64::max);
            let lo = v.iter().cloned().fold(f64::MAX, f64::min);
            spread = spread.max(hi - lo);
            let s = (n as f64).sqrt() + (m as f64).sqrt();
            let f = p[n] * p[m] * s * s / (4.0 * alpha * alpha);
            if f > 1e-8 {
                ratios.push(v[0] / f);
            }
        }
    }
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    check(
        spread <= 1e-10,
        format!("max spread {spread:.1e}; P/f in [{lo:.12}, {hi:.12}] over {} outcomes", ratios.len()),
    )
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (parties, splits) in [(3, 3), (4, 7)] {
        let r = multiparty_security_check(parties).unwrap();
        pass &= r.checks.len() == splits && r.worst_gap() <= 1e-12;
        notes.push(format!("P={parties}: {} bipartitions, worst gap {:.1e}", r.checks.len(), r.worst_gap()));
    }
    check(pass, notes.join("; "))
}

fn criterion_9() -> Outcome {
    let tol = Tolerances::DEFAULT;
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, rho) in [("rho1", rho1()), ("rho2(1)", rho2(1.0, None).unwrap())] {
        let part = PartyPartition::from_space(rho.space());
        for party in [ALICE, BOB] {
            let ppt = ppt_check(&rho, &part, party, &tol).unwrap();
            pass &= ppt.ppt && ppt.min_eigenvalue >= -1e-10;
            if party == ALICE {
                notes.push(format!("{name}: min PT eigenvalue {:.3e}", ppt.min_eigenvalue));
            }
        }
        let (certified, residual) = certify_not_locally_preparable(&rho, &part, &tol).unwrap();
        pass &= certified;
        notes.push(format!("{name}: fixed-point residual {residual:.3e}"));
    }
    check(pass, notes.join("; "))
}

fn criterion_10() -> Outcome {
    let mut worst_fidelity: f64 = 0.0;
    let mut worst_commutator: f64 = 0.0;
    for k in 0..20 {
        let (u, v) = random_qubit(SEED + k);
        let r = dual_rail_teleport(u, v).unwrap();
        worst_fidelity = worst_fidelity.max((r.fidelity - 1.0).abs());
        worst_commutator = worst_commutator.max(r.max_number_commutator);
    }
    check(
        worst_fidelity <= 1e-12 && worst_commutator < 1e-12,
        format!("20 qubits: |1 - F| <= {worst_fidelity:.1e}, commutators <= {worst_commutator:.1e}"),
    )
}

fn criterion_11() -> Outcome {
    let space = FockSpace::new(vec![
        Register::new("a1", ALICE, 2),
        Register::new("a2", ALICE, 1),
        Register::new("b", BOB, 2),
    ])
    .unwrap();
    let part = PartyPartition::from_space(&space);
    let channel = DephasingChannel::new(&space, &part).unwrap();
    let states = random_states(&space, 50, SEED + 11);
    let numbers = [
        number_operator(&space, &part, ALICE).unwrap(),
        number_operator(&space, &part, BOB).unwrap(),
    ];
    let completeness = channel.completeness_gap();
    let (mut trace_err, mut idem, mut comm, mut excess): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, f64::MIN);
    for (k, rho) in states.iter().enumerate() {
        let out = channel.apply(rho).unwrap();
        trace_err = trace_err.max((out.matrix().trace().re - rho.matrix().trace().re).abs());
        idem = idem.max(max_abs(&(channel.apply(&out).unwrap().matrix() - out.matrix())));
        for n in &numbers {
            comm = comm.max(max_abs(&(out.matrix() * n - n * out.matrix())));
        }
        let sigma = &states[(k + 1) % states.len()];
        let after = trace_distance(&out, &channel.apply(sigma).unwrap()).unwrap();
        excess = excess.max(after - trace_distance(rho, sigma).unwrap());
    }
    check(
        completeness <= 1e-12 && trace_err <= 1e-12 && idem <= 1e-12 && comm <= 1e-12 && excess <= 1e-10,
        format!(
            "completeness {completeness:.1e}, trace {trace_err:.1e}, idempotence {idem:.1e}, \
             commutator {comm:.1e}, contraction excess {excess:.1e}"
        ),
    )
}

/// Number, name, check and runtime budget.
type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "dephasing of rho1", criterion_1, Some(Duration::from_millis(1))),
        (2, "rho1 product decomposition", criterion_2, Some(Duration::from_millis(1))),
        (3, "hiding security, 1-3 copies", criterion_3, Some(Duration::from_secs(1))),
        (4, "local product observables", criterion_4, Some(Duration::from_secs(5))),
        (5, "entangled-resource decoding", criterion_5, Some(Duration::from_secs(10))),
        (6, "coherent-resource decoding", criterion_6, Some(Duration::from_secs(60))),
        (7, "per-outcome symmetry", criterion_7, None),
        (8, "multipartite security", criterion_8, Some(Duration::from_secs(30))),
        (9, "separable but not locally preparable", criterion_9, None),
        (10, "dual-rail teleportation", criterion_10, Some(Duration::from_secs(5))),
        (11, "dephasing channel properties", criterion_11, Some(Duration::from_secs(10))),
    ];
    let mut failures = 0;
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let pass = outcome.pass && in_time;
        if !pass {
            failures += 1;
        }
        let budget_note = match budget {
            Some(b) if !in_time => format!(" [over budget {b:?}]"),
            _ => String::new(),
        };
        println!(
            "criterion {id:>2} {:<4} {name}: {} ({:.3} ms){budget_note}",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64() * 1e3,
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
