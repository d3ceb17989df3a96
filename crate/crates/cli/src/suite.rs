//! The verification suite run by `ssr-sim verify`.

use std::time::Instant;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssr_core::analysis::{helstrom_success, ppt_check, trace_distance};
use ssr_core::channels::{certify_not_locally_preparable, dephase, locc_statistics_gap, DephasingChannel};
use ssr_core::fock::{number_operator, DensityOperator, FockSpace, PartyPartition, Register};
use ssr_core::protocols::exact::entangled_success_exact;
use ssr_core::protocols::{
    coherent_summary, decode_coherent, dual_rail_teleport, entangled_summary, f_formula, multiparty_security_check,
    random_qubit, Sign,
};
use ssr_core::states::{
    dealer_split, hiding_state_copies, rho1, rho1_decomposition, rho2, HidingBit, ALICE, BOB,
};
use ssr_core::{CMatrix, Result, Tolerances, C64};

use crate::report::{ClaimRecord, VerificationReport};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_040_601;

pub struct SuiteConfig {
    pub seed: u64,
    pub tolerances: Tolerances,
}

type Group = fn(&SuiteConfig) -> Result<Vec<ClaimRecord>>;

const GROUPS: [Group; 11] = [
    dephasing_example,
    decomposition,
    hiding_security,
    local_observables,
    entangled_decoding,
    coherent_decoding,
    outcome_symmetry,
    multiparty,
    separability,
    teleportation,
    channel_laws,
];

/// Runs every claim group. Runtime of a group is charged to each of its
/// claims' `runtime_ms`.
pub fn run(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut claims = Vec::new();
    for group in GROUPS {
        let start = Instant::now();
        let mut records = group(config)?;
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut records {
            r.runtime_ms = ms;
        }
        claims.extend(records);
    }
    claims.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    Ok(VerificationReport { claims })
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn random_states(space: &FockSpace, count: usize, seed: u64) -> Vec<DensityOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| DensityOperator::random(space, &mut rng)).collect()
}

fn dephasing_example(_: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let rho = rho1();
    let part = PartyPartition::from_space(rho.space());
    let out = dephase(&rho, &part)?;
    let quarter = CMatrix::identity(4, 4).map(|z| z * 0.25);
    Ok(vec![
        ClaimRecord::matrix(
            "c01.1-dephase-rho1",
            "dephasing rho1 leaves the uniform diagonal I/4",
            "rho1/dephasing",
            out.matrix(),
            &quarter,
            1e-12,
        ),
        ClaimRecord::number(
            "c01.2-dephase-rho1-gap",
            "max-abs entry of rho1 - N(rho1)",
            "rho1/dephasing",
            max_abs(&(out.matrix() - rho.matrix())),
            0.25,
            1e-12,
        ),
    ])
}

fn decomposition(_: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let dec = rho1_decomposition();
    let rebuilt = dec.reconstruct()?;
    let weight_error = dec.terms.iter().map(|(p, _, _)| (p - 0.25).abs()).fold(0.0, f64::max);
    Ok(vec![
        ClaimRecord::matrix(
            "c02.1-rho1-product-mixture",
            "four product terms reconstruct rho1",
            "rho1/product-form",
            rebuilt.matrix(),
            rho1().matrix(),
            1e-12,
        ),
        ClaimRecord::number(
            "c02.2-rho1-weights",
            "largest deviation of a mixture weight from 1/4",
            "rho1/product-form",
            weight_error,
            0.0,
            1e-12,
        ),
    ])
}

fn hiding_security(_: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let mut out = Vec::new();
    for copies in 1..=3 {
        let plus = hiding_state_copies(HidingBit::Zero, copies)?.to_density();
        let minus = hiding_state_copies(HidingBit::One, copies)?.to_density();
        let split = dealer_split(plus.space());
        let (dp, dm) = (dephase(&plus, &split)?, dephase(&minus, &split)?);
        out.push(ClaimRecord::number(
            &format!("c03.{copies}a-hiding-dephased-m{copies}"),
            &format!("max-abs difference of the dephased hiding states, {copies} cop{}", if copies == 1 { "y" } else { "ies" }),
            "hiding/security",
            dp.max_abs_diff(&dm)?,
            0.0,
            1e-12,
        ));
        out.push(ClaimRecord::number(
            &format!("c03.{copies}b-hiding-helstrom-m{copies}"),
            "optimal success on the dephased pair",
            "hiding/security",
            helstrom_success(&dp, &dm, 0.5)?.success,
            0.5,
            1e-12,
        ));
    }
    Ok(out)
}

fn local_observables(config: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let mut states = vec![rho1(), rho2(1.0, None)?];
    let plus = hiding_state_copies(HidingBit::Zero, 1)?.to_density();
    let space = FockSpace::new(vec![Register::new("a", ALICE, 2), Register::new("b", BOB, 2)])?;
    states.extend(random_states(&space, 5, config.seed));
    let mut worst: f64 = 0.0;
    for rho in &states {
        let part = PartyPartition::from_space(rho.space());
        worst = worst.max(locc_statistics_gap(rho, &dephase(rho, &part)?, &part, 200, config.seed)?);
    }
    let split = dealer_split(plus.space());
    worst = worst.max(locc_statistics_gap(&plus, &dephase(&plus, &split)?, &split, 200, config.seed)?);
    Ok(vec![ClaimRecord::number(
        "c04.1-local-product-observables",
        "max |tr[(X_A (x) X_B)(rho - N(rho))]| over 200 seeded observables and 8 states",
        "local-indistinguishability",
        worst,
        0.0,
        1e-10,
    )])
}

fn entangled_decoding(_: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let mut out = Vec::new();
    let mut mismatches = 0;
    for n in 1..=10usize {
        let s = entangled_summary(n)?;
        out.push(ClaimRecord::number(
            &format!("c05.{n:02}-entangled-n{n:02}"),
            &format!("worst-case success with an N={n} resource"),
            "hiding/entangled-resource",
            s.worst_case,
            n as f64 / (n + 1) as f64,
            1e-10,
        ));
        let exact = entangled_success_exact(HidingBit::Zero, n).min(entangled_success_exact(HidingBit::One, n));
        if exact != Ratio::new(n as i64, n as i64 + 1) {
            mismatches += 1;
        }
    }
    out.push(ClaimRecord::number(
        "c05.11-entangled-exact",
        "values of N in 1..10 whose exact rational worst case differs from N/(N+1)",
        "hiding/entangled-resource",
        mismatches as f64,
        0.0,
        0.0,
    ));
    Ok(out)
}

fn coherent_decoding(_: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let mut out = Vec::new();
    let mut successes = Vec::new();
    for alpha in [1.0, 2.0, 3.0, 5.0] {
        let s = coherent_summary(alpha, None)?;
        out.push(ClaimRecord::number(
            &format!("c06.{}-coherent-a{alpha}", successes.len() + 1),
            &format!("success with the phase-averaged coherent pair at alpha={alpha} against the sum of f"),
            "hiding/coherent-resource",
            s.success_bit0,
            s.sum_f,
            1e-6,
        ));
        successes.push(s.success_bit0);
    }
    out.push(ClaimRecord::number(
        "c06.5-coherent-threshold",
        "shortfall of the alpha=5 success below 0.99",
        "hiding/coherent-resource",
        (0.99 - successes[3]).max(0.0),
        0.0,
        0.0,
    ));
    let drop = successes.windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max);
    out.push(ClaimRecord::number(
        "c06.6-coherent-monotone",
        "largest decrease of success between consecutive alphas",
        "hiding/coherent-resource",
        drop,
        0.0,
        0.0,
    ));
    Ok(out)
}

fn outcome_symmetry(_: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let alpha = 2.0;
    let r0 = decode_coherent(HidingBit::Zero, alpha, None)?;
    let r1 = decode_coherent(HidingBit::One, alpha, None)?;
    let cutoff = ssr_core::fock::default_coherent_cutoff(alpha);
    let mut spread: f64 = 0.0;
    let (mut num, mut den) = (0.0, 0.0);
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
            num += v[0];
            den += f_formula(n, m, alpha)?;
        }
    }
    Ok(vec![
        ClaimRecord::number(
            "c07.1-outcome-symmetry",
            "max spread of P0(+,+), P0(-,-), P1(+,-), P1(-,+) over (n,m) at alpha=2",
            "hiding/coherent-outcomes",
            spread,
            0.0,
            1e-10,
        ),
        ClaimRecord::number(
            "c07.2-outcome-to-f-ratio",
            "measured constant P0(+,+,n,m) / f(n,m) at alpha=2",
            "hiding/coherent-outcomes",
            num / den,
            0.5,
            1e-10,
        ),
    ])
}

fn multiparty(_: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let mut out = Vec::new();
    for p in [3, 4] {
        let r = multiparty_security_check(p)?;
        out.push(ClaimRecord::number(
            &format!("c08.{}-multiparty-p{p}", p - 2),
            &format!("worst dephased difference over all {} bipartitions of {p} parties", r.checks.len()),
            "hiding/multipartite",
            r.worst_gap(),
            0.0,
            1e-12,
        ));
    }
    Ok(out)
}

fn separability(config: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let tol = &config.tolerances;
    let mut out = Vec::new();
    // Largest coherence removed by dephasing: 1/4 for rho1, e^{-2} for rho2(1).
    for (k, name, rho, residual) in [
        (1, "rho1", rho1(), 0.25),
        (2, "rho2", rho2(1.0, None)?, (-2.0f64).exp()),
    ] {
        let part = PartyPartition::from_space(rho.space());
        let pt = ppt_check(&rho, &part, ALICE, tol)?.min_eigenvalue.min(ppt_check(&rho, &part, BOB, tol)?.min_eigenvalue);
        out.push(ClaimRecord::number(
            &format!("c09.{k}a-{name}-ppt"),
            &format!("negativity of the smallest partial-transpose eigenvalue of {name}"),
            "separable-resources",
            (-pt).max(0.0),
            0.0,
            1e-10,
        ));
        let (certified, r) = certify_not_locally_preparable(&rho, &part, tol)?;
        out.push(ClaimRecord::number(
            &format!("c09.{k}b-{name}-not-local"),
            &format!("max-abs entry of {name} - N({name}); nonzero rules out local preparation"),
            "separable-resources",
            if certified { r } else { 0.0 },
            residual,
            1e-12,
        ));
    }
    Ok(out)
}

fn teleportation(config: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let mut infidelity: f64 = 0.0;
    let mut commutator: f64 = 0.0;
    for k in 0..20 {
        let (u, v) = random_qubit(config.seed.wrapping_add(k));
        let r = dual_rail_teleport(u, v)?;
        infidelity = infidelity.max((1.0 - r.fidelity).abs());
        commutator = commutator.max(r.max_number_commutator);
    }
    Ok(vec![
        ClaimRecord::number(
            "c10.1-teleport-fidelity",
            "worst |1 - F| over 20 seeded dual-rail qubits",
            "dual-rail-teleportation",
            infidelity,
            0.0,
            1e-12,
        ),
        ClaimRecord::number(
            "c10.2-teleport-number-rule",
            "largest commutator of an applied operation with a local number operator",
            "dual-rail-teleportation",
            commutator,
            0.0,
            1e-12,
        ),
    ])
}

fn channel_laws(config: &SuiteConfig) -> Result<Vec<ClaimRecord>> {
    let space = FockSpace::new(vec![
        Register::new("a1", ALICE, 2),
        Register::new("a2", ALICE, 1),
        Register::new("b", BOB, 2),
    ])?;
    let part = PartyPartition::from_space(&space);
    let channel = DephasingChannel::new(&space, &part)?;
    let states = random_states(&space, 50, config.seed.wrapping_add(11));
    let numbers = [number_operator(&space, &part, ALICE)?, number_operator(&space, &part, BOB)?];
    let (mut trace_err, mut idem, mut comm, mut excess): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for (k, rho) in states.iter().enumerate() {
        let out = channel.apply(rho)?;
        trace_err = trace_err.max((out.matrix().trace() - C64::new(1.0, 0.0)).norm());
        idem = idem.max(channel.apply(&out)?.max_abs_diff(&out)?);
        for n in &numbers {
            comm = comm.max(max_abs(&(out.matrix() * n - n * out.matrix())));
        }
        let sigma = &states[(k + 1) % states.len()];
        let gain = trace_distance(&out, &channel.apply(sigma)?)? - trace_distance(rho, sigma)?;
        excess = excess.max(gain);
    }
    let rec = |id: &str, d: &str, v: f64, tol: f64| ClaimRecord::number(id, d, "dephasing-channel", v, 0.0, tol);
    Ok(vec![
        rec("c11.1-channel-completeness", "max-abs entry of sum K^dagger K - I", channel.completeness_gap(), 1e-12),
        rec("c11.2-channel-trace", "worst trace change over 50 seeded states", trace_err, 1e-12),
        rec("c11.3-channel-idempotence", "worst max-abs of N(N(rho)) - N(rho)", idem, 1e-12),
        rec("c11.4-channel-commutation", "worst commutator of N(rho) with a local number operator", comm, 1e-12),
        rec("c11.5-channel-contraction", "largest increase of trace distance under dephasing", excess, 1e-10),
    ])
}
