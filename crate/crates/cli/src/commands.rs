use std::fs;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use war_core::classic::{classic_trial, simulate_classic_policy, verify_value_cycle_blocks, HAND_SIZE};
use war_core::cycles::{simulate_policy, Trajectory};
use war_core::{
    attaining_set, decay_certificate, expected_absorption, find_cycles_in, monte_carlo_classic, monte_carlo_length,
    simulate_classic, state_count, tail_probability, two_outcome_deals, verify_cycle, ClassicState, CycleCertificate,
    DealScope, GameGraph, GameState, InitialDistribution, PlacementProbabilities, SolverOptions, WarConfig,
};

use crate::args::{Command, DeckArgs, Format, OutputArgs, ProbArgs};

/// A rendered report and, for commands that check a claim, whether it held.
pub struct Report {
    pub body: String,
    pub claim_failed: Option<String>,
}

impl Report {
    fn json(value: &Value) -> Result<Self> {
        Ok(Report { body: serde_json::to_string_pretty(value)? + "\n", claim_failed: None })
    }

    fn claim(mut self, holds: bool, what: &str) -> Self {
        if !holds {
            self.claim_failed = Some(what.to_string());
        }
        self
    }
}

fn probs(p: &ProbArgs) -> Result<PlacementProbabilities> {
    Ok(PlacementProbabilities::from_own_first(p.pl1, p.pr1)?)
}

fn deck_config(d: &DeckArgs) -> Value {
    json!({ "n": d.n, "rule": d.rule })
}

/// Reads `arg` as inline deal text if it looks like one, otherwise as a path.
fn deal_text(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with("L:") {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading deal file {arg}"))
    }
}

fn csv_only(format: Format, command: &str) -> Result<()> {
    if format == Format::Csv {
        bail!("csv output is not available for {command}");
    }
    Ok(())
}

pub fn run(command: &Command, out: &OutputArgs) -> Result<Report> {
    match command {
        Command::Analyze { deck, edges, expect_absorbing } => {
            csv_only(out.format, "analyze")?;
            let start = Instant::now();
            let graph = GameGraph::new(deck.n, deck.rule, *edges)?;
            let report = attaining_set(deck.n, deck.rule, *edges)?;
            let audit = graph.degree_audit();
            let elapsed_ms = out.timing.then(|| start.elapsed().as_millis() as u64);
            let body = json!({
                "config": {
                    "command": "analyze",
                    "n": deck.n,
                    "rule": deck.rule,
                    "edge_filter": edges,
                    "expect_absorbing": expect_absorbing,
                },
                "n": deck.n,
                "rule": deck.rule,
                "edge_filter": edges,
                "total_states": report.total_states,
                "attaining": report.attaining_count,
                "wandering": report.wandering_count,
                "wandering_samples": report.wandering_samples,
                "max_distance": report.max_distance,
                "audit": {
                    "out_violations": audit.out_degree_violations,
                    "in_violations": audit.in_degree_violations,
                },
                "elapsed_ms": elapsed_ms,
            });
            let holds = audit.is_clean() && (!expect_absorbing || report.is_absorbing());
            Ok(Report::json(&body)?.claim(holds, "graph is not absorbing or failed the degree audit"))
        }
        Command::ExpectedLength { deck, probs: p, method, tolerance, max_iterations, trials, seed, max_steps } => {
            csv_only(out.format, "expected-length")?;
            let probs = probs(p)?;
            let options =
                SolverOptions { tolerance: *tolerance, max_iterations: *max_iterations, method: (*method).into() };
            let solution = expected_absorption(deck.n, deck.rule, &probs, &options)?;
            let monte_carlo = if *trials > 0 {
                let mc = monte_carlo_length(deck.n, deck.rule, &probs, *trials, *seed, *max_steps)?;
                let z = (mc.mean - solution.mean_equal_split).abs() / mc.std_error;
                Some(json!({ "summary": mc, "standard_errors_from_exact": z }))
            } else {
                None
            };
            let mut config = deck_config(deck);
            config["command"] = json!("expected-length");
            config["probs"] = json!(probs);
            config["solver"] = json!(options);
            config["trials"] = json!(trials);
            config["seed"] = json!(seed);
            config["max_steps"] = json!(max_steps);
            Report::json(&json!({
                "config": config,
                "method": solution.method,
                "mean_equal_split": solution.mean_equal_split,
                "max_state_expectation": solution.max_state_expectation,
                "residual": solution.residual,
                "iterations": solution.iterations,
                "monte_carlo": monte_carlo,
            }))
        }
        Command::TailCurve { deck, probs: p, max_k, ks, deal } => {
            let probs = probs(p)?;
            let initial = match deal {
                Some(d) => InitialDistribution::Point(deal_text(d)?.trim().parse::<GameState>()?),
                None => InitialDistribution::EqualSplit,
            };
            let ks: Vec<u64> = ks.clone().unwrap_or_else(|| (0..=*max_k).collect());
            let curve = tail_probability(deck.n, deck.rule, &probs, &initial, &ks)?;
            if out.format == Format::Csv {
                return Ok(Report { body: curve.to_csv(), claim_failed: None });
            }
            let mut config = deck_config(deck);
            config["command"] = json!("tail-curve");
            config["probs"] = json!(probs);
            config["ks"] = json!(ks);
            Report::json(&json!({ "config": config, "curve": curve }))
        }
        Command::DecayCert { deck, probs: p, horizon } => {
            let probs = probs(p)?;
            let cert = decay_certificate(deck.n, deck.rule, &probs, *horizon)?;
            let report = if out.format == Format::Csv {
                let mut body = String::from("k,steps,p_alive,bound\n");
                for pt in &cert.points {
                    body.push_str(&format!("{},{},{:e},{:e}\n", pt.k, pt.steps, pt.p_alive, pt.bound));
                }
                Report { body, claim_failed: None }
            } else {
                let mut config = deck_config(deck);
                config["command"] = json!("decay-cert");
                config["probs"] = json!(probs);
                config["horizon"] = json!(horizon);
                Report::json(&json!({ "config": config, "certificate": cert }))?
            };
            Ok(report.claim(cert.holds, "decay bound does not hold"))
        }
        Command::FindCycle { deck, policy, all_states, limit } => {
            csv_only(out.format, "find-cycle")?;
            let scope = if *all_states { DealScope::AllStates } else { DealScope::EqualSplit };
            let certs = find_cycles_in(deck.n, *policy, deck.rule, scope)?;
            let mut config = deck_config(deck);
            config["command"] = json!("find-cycle");
            config["policy"] = json!(policy);
            config["all_states"] = json!(all_states);
            config["limit"] = json!(limit);
            Report::json(&json!({
                "config": config,
                "count": certs.len(),
                "certificates": &certs[..certs.len().min(*limit)],
            }))
        }
        Command::VerifyCycle { certificate } => {
            csv_only(out.format, "verify-cycle")?;
            let text = fs::read_to_string(certificate)
                .with_context(|| format!("reading certificate {}", certificate.display()))?;
            let cert: CycleCertificate = serde_json::from_str(&text).context("parsing certificate")?;
            let ok = verify_cycle(&cert);
            Ok(Report::json(&json!({
                "config": { "command": "verify-cycle", "certificate": certificate },
                "certificate": cert,
                "verified": ok,
            }))?
            .claim(ok, "certificate does not replay"))
        }
        Command::TwoOutcome { deck, limit } => {
            csv_only(out.format, "two-outcome")?;
            let certs = two_outcome_deals(deck.n, deck.rule)?;
            let mut config = deck_config(deck);
            config["command"] = json!("two-outcome");
            config["limit"] = json!(limit);
            Report::json(&json!({
                "config": config,
                "count": certs.len(),
                "certificates": &certs[..certs.len().min(*limit)],
            }))
        }
        Command::SimulateClassic { deal, policy, probs: p, seed, max_steps, face_down } => {
            csv_only(out.format, "simulate-classic")?;
            let probs = probs(p)?;
            let config = WarConfig { face_down_count: *face_down, ..WarConfig::default() };
            let deal: ClassicState = match deal {
                Some(d) => deal_text(d)?.parse()?,
                None => classic_trial(*seed, 0).0,
            };
            let record = match policy {
                Some(policy) => simulate_classic_policy(&deal, *policy, &config, *max_steps)?,
                None => simulate_classic(&deal, &probs, &config, *seed, *max_steps)?,
            };
            Report::json(&json!({
                "config": {
                    "command": "simulate-classic",
                    "policy": policy,
                    "probs": probs,
                    "seed": seed,
                    "max_steps": max_steps,
                    "war": config,
                },
                "record": record,
            }))
        }
        Command::McClassic { probs: p, trials, seed, max_steps, face_down } => {
            let probs = probs(p)?;
            let config = WarConfig { face_down_count: *face_down, ..WarConfig::default() };
            let summary = monte_carlo_classic(*trials, &probs, &config, *seed, *max_steps)?;
            if out.format == Format::Csv {
                let mut body = String::from("k,p_alive,upper_95\n");
                for pt in &summary.survival {
                    body.push_str(&format!("{},{:e},{:e}\n", pt.k, pt.p_alive, pt.upper_95));
                }
                return Ok(Report { body, claim_failed: None });
            }
            Report::json(&json!({
                "config": {
                    "command": "mc-classic",
                    "probs": probs,
                    "trials": trials,
                    "seed": seed,
                    "max_steps": max_steps,
                    "war": config,
                },
                "summary": summary,
            }))
        }
        Command::VerifyDeal { deal, policy, rule, blocks } => {
            csv_only(out.format, "verify-deal")?;
            let text = deal_text(deal)?;
            let config = json!({
                "command": "verify-deal",
                "policy": policy,
                "rule": rule,
                "blocks": blocks,
            });
            if let Ok(classic) = text.parse::<ClassicState>() {
                if classic.hand(war_core::Side::Left).len() == HAND_SIZE {
                    let r = verify_value_cycle_blocks(&classic, *policy, *blocks)?;
                    return Ok(Report::json(&json!({
                        "config": config,
                        "kind": "classic",
                        "deal": classic,
                        "report": r,
                    }))?
                    .claim(r.ok, "rank pattern is not restored"));
                }
            }
            let model: GameState = text
                .lines()
                .filter(|l| !l.trim_start().starts_with('#'))
                .collect::<Vec<_>>()
                .join(" ")
                .trim()
                .parse()
                .context("deal is neither a 26/26 classic deal nor a model deal")?;
            let cap = state_count(model.n())? + 1;
            let t = simulate_policy(&model, *policy, *rule, cap);
            Ok(Report::json(&json!({
                "config": config,
                "kind": "model",
                "deal": model,
                "trajectory": t,
            }))?
            .claim(matches!(t, Trajectory::Cycle { .. }), "the game ends"))
        }
    }
}
