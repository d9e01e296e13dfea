//! Acceptance checks. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use war_core::classic::{verify_value_cycle_blocks, VALUE_CYCLE_MOVES};
use war_core::markov::{play_random, random_equal_split, DECAY_SLACK};
use war_core::rng::trial_rng;
use war_core::{
    attaining_set, decay_certificate, degree_audit, expected_absorption, find_cycles, fixtures, monte_carlo_classic,
    monte_carlo_length, state_count, subgraph_monotonicity, tail_probability, two_outcome_deals, verify_cycle,
    verify_value_cycle, wandering_closure_check, Card, ComparisonRule, DeterministicPolicy, EdgeFilter,
    InitialDistribution, PlacementProbabilities, SolverOptions, WarConfig,
};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const RULES: [ComparisonRule; 2] = [ComparisonRule::Standard, ComparisonRule::CyclicLowBeatsHigh];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: war_core::WarError) -> String {
    e.to_string()
}

fn absorption_theorem() -> Check {
    let mut sizes = Vec::new();
    for n in [2, 4, 6, 8] {
        for rule in RULES {
            let r = attaining_set(n, rule, EdgeFilter::BothOrders).map_err(err)?;
            ensure(r.total_states == state_count(n).map_err(err)?, || format!("n={n}: state count"))?;
            ensure(r.wandering_count == 0, || format!("n={n} {rule}: {} wandering states", r.wandering_count))?;
        }
        sizes.push(format!("n={n}"));
    }
    Ok(format!("no wandering state for {} under both rules", sizes.join(", ")))
}

fn degree_audits() -> Check {
    let mut states = 0;
    for n in 2..=6 {
        for rule in RULES {
            let a = degree_audit(n, rule).map_err(err)?;
            ensure(a.is_clean(), || format!("n={n} {rule}: {a:?}"))?;
            states += a.checked_states;
        }
    }
    Ok(format!("{states} states audited, zero violations"))
}

fn never_ending_game() -> Check {
    let certs = find_cycles(6, DeterministicPolicy::SeatLeftFirst, ComparisonRule::Standard).map_err(err)?;
    ensure(!certs.is_empty(), || "no cycling deal found".into())?;
    ensure(certs.iter().all(verify_cycle), || "a certificate failed to replay".into())?;
    ensure(verify_cycle(&fixtures::model_cycle_n6()), || "stored certificate failed to replay".into())?;
    let c = &certs[0];
    Ok(format!("{} cycling deals, e.g. {} (pre-period {}, period {})", certs.len(), c.deal, c.pre_period, c.period))
}

fn filtered_graphs() -> Check {
    let n = 6;
    let rule = ComparisonRule::Standard;
    let both = attaining_set(n, rule, EdgeFilter::BothOrders).map_err(err)?;
    ensure(both.wandering_count == 0, || "both-orders graph has wandering states".into())?;
    let mut counts = Vec::new();
    let mut all_wander = true;
    for f in EdgeFilter::ALL.into_iter().filter(|&f| f != EdgeFilter::BothOrders) {
        let r = attaining_set(n, rule, f).map_err(err)?;
        ensure(wandering_closure_check(&r), || format!("{f}: wandering set not closed"))?;
        all_wander &= r.wandering_count > 0;
        counts.push(format!("{f} {}", r.wandering_count));
    }
    let mut pairs = 0;
    for rule in RULES {
        for a in EdgeFilter::ALL {
            for b in EdgeFilter::ALL.into_iter().filter(|&b| a.is_subgraph_of(b)) {
                ensure(subgraph_monotonicity(n, rule, a, b).map_err(err)?, || format!("{rule}: {a} vs {b}"))?;
                pairs += 1;
            }
        }
    }
    let counts = counts.join(", ");
    ensure(all_wander, || {
        format!("not every single-order filter wanders (wandering: {counts}); {pairs} pairs monotone")
    })?;
    Ok(format!("wandering: {counts}; {pairs} filter pairs monotone"))
}

fn expected_length() -> Check {
    let probs = PlacementProbabilities::uniform();
    let opts = SolverOptions::default();
    let n2 = expected_absorption(2, ComparisonRule::Standard, &probs, &opts).map_err(err)?;
    ensure(n2.mean_equal_split == 1.0, || format!("n=2 mean {}", n2.mean_equal_split))?;
    let mut parts = vec!["n=2 mean 1".to_string()];
    for (n, seed) in [(4, 11), (6, 13)] {
        let sol = expected_absorption(n, ComparisonRule::Standard, &probs, &opts).map_err(err)?;
        ensure(sol.residual <= 1e-10, || format!("n={n}: residual {:e}", sol.residual))?;
        let mc = monte_carlo_length(n, ComparisonRule::Standard, &probs, 1_000_000, seed, 1_000_000).map_err(err)?;
        ensure(mc.truncations == 0, || format!("n={n}: {} truncated games", mc.truncations))?;
        let z = (mc.mean - sol.mean_equal_split).abs() / mc.std_error;
        ensure(z <= 3.0, || format!("n={n}: solver {} vs MC {} ({z:.2} SE)", sol.mean_equal_split, mc.mean))?;
        parts.push(format!("n={n} solver {:.6} MC {:.6} ({z:.2} SE)", sol.mean_equal_split, mc.mean));
    }
    Ok(parts.join(", "))
}

fn tail_and_decay() -> Check {
    let probs = PlacementProbabilities::uniform();
    let ks: Vec<u64> = (0..=200).collect();
    let curve =
        tail_probability(6, ComparisonRule::Standard, &probs, &InitialDistribution::EqualSplit, &ks).map_err(err)?;
    ensure(curve.max_mass_error <= 1e-12, || format!("mass error {:e}", curve.max_mass_error))?;
    ensure(curve.points.iter().all(|p| p.p_alive > 0.0), || "p_alive hit zero".into())?;
    ensure(curve.points.windows(2).all(|w| w[1].p_alive <= w[0].p_alive), || "p_alive increased".into())?;
    let cert = decay_certificate(6, ComparisonRule::Standard, &probs, 200).map_err(err)?;
    ensure(cert.holds, || format!("decay bound fails: {cert:?}"))?;
    ensure(cert.verified_up_to == 200 / cert.window, || "decay horizon".into())?;
    for p in &cert.points {
        let exact = curve.points[p.steps as usize].p_alive;
        ensure(exact <= p.bound + DECAY_SLACK, || format!("k={}: {exact} > {}", p.k, p.bound))?;
    }
    Ok(format!(
        "p_alive(200) = {:e}, N = {}, q = {:.4e}, mass error {:e}",
        curve.points[200].p_alive, cert.window, cert.q, curve.max_mass_error
    ))
}

fn highest_card() -> Check {
    ensure(two_outcome_deals(4, ComparisonRule::Standard).map_err(err)?.is_empty(), || {
        "standard n=4 has a two-outcome deal".into()
    })?;
    let probs = PlacementProbabilities::uniform();
    let mut games = 0;
    for n in [2, 4, 6] {
        for i in 0..10_000 {
            let mut rng = trial_rng(0x5eed + n as u64, i);
            let deal = random_equal_split(n, &mut rng);
            let max_steps = 1_000_000;
            let Some((_, winner)) = play_random(&deal, ComparisonRule::Standard, &probs, max_steps, &mut rng) else {
                return Err(format!("n={n}: game {i} did not terminate"));
            };
            ensure(deal.holder(n as Card) == Some(winner), || format!("n={n}: {deal} won by {winner:?}"))?;
            games += 1;
        }
    }
    let cyclic = two_outcome_deals(4, ComparisonRule::CyclicLowBeatsHigh).map_err(err)?;
    ensure(!cyclic.is_empty(), || "cyclic n=4 has no two-outcome deal".into())?;
    ensure(cyclic.iter().all(|c| c.replays()), || "a two-outcome witness failed to replay".into())?;
    ensure(fixtures::two_outcome_n4().replays(), || "stored two-outcome witness failed".into())?;
    Ok(format!("{games} standard games won by the top-card holder, {} cyclic two-outcome deals", cyclic.len()))
}

fn classic_fixture() -> Check {
    let deal = fixtures::classic_cycle_deal();
    let one = verify_value_cycle(&deal, DeterministicPolicy::SeatLeftFirst).map_err(err)?;
    ensure(one.ok && one.wars_encountered == 0 && one.moves_played == VALUE_CYCLE_MOVES, || format!("{one:?}"))?;
    let four = verify_value_cycle_blocks(&deal, DeterministicPolicy::SeatLeftFirst, 4).map_err(err)?;
    ensure(four.ok && four.wars_encountered == 0, || format!("{four:?}"))?;
    Ok(format!("rank pattern restored after {} moves, 4 blocks, no war", one.period_in_values))
}

fn classic_finiteness() -> Check {
    let probs = PlacementProbabilities::uniform();
    let s = monte_carlo_classic(100_000, &probs, &WarConfig::default(), 2024, 1_000_000).map_err(err)?;
    ensure(s.truncations == 0, || format!("{} truncated games", s.truncations))?;
    ensure(s.survival.windows(2).all(|w| w[1].p_alive <= w[0].p_alive), || "survival increased".into())?;
    let at_10k = s.survival.iter().find(|p| p.k == 10_000).map(|p| p.upper_95).unwrap_or(f64::NAN);
    Ok(format!(
        "{} games, mean {:.1} moves, max {}, survival at 10^4 <= {at_10k:.2e}",
        s.trials, s.mean_moves, s.max_moves
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("absorption theorem", absorption_theorem),
        ("degree audit", degree_audits),
        ("never-ending n=6 game", never_ending_game),
        ("filtered-graph wandering", filtered_graphs),
        ("expected length", expected_length),
        ("tail positivity and decay", tail_and_decay),
        ("highest-card corollary", highest_card),
        ("classic cycling fixture", classic_fixture),
        ("classic finiteness", classic_finiteness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
