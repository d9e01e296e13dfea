//! Play under a fixed placement policy, where every deal has exactly one
//! future: it either ends or falls into a cycle.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WarError};
use crate::graph::{EdgeFilter, PathStep, PathWitness};
use crate::rules::{check_deck_size, ComparisonRule, DeterministicPolicy, GameState, PlacementOrder, Side};
use crate::state_space::{decode_unchecked, equal_split_deals, state_count};

/// How a deterministic game from a given deal unfolds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum Trajectory {
    Terminated {
        steps: u64,
        winner: Side,
    },
    /// After `pre_period` moves the game enters a cycle of `period` moves.
    Cycle {
        pre_period: u64,
        period: u64,
    },
    Truncated {
        steps: u64,
    },
}

#[inline]
fn policy_step(state: &GameState, policy: DeterministicPolicy, rule: ComparisonRule) -> Option<GameState> {
    state.trick_winner(rule).map(|w| state.apply_trick(w, policy.order_for(w)))
}

/// Runs the game from `deal` with Brent's cycle detection over exact states.
/// `max_steps` caps the number of moves simulated.
pub fn simulate_policy(
    deal: &GameState,
    policy: DeterministicPolicy,
    rule: ComparisonRule,
    max_steps: u64,
) -> Trajectory {
    let step = |s: &GameState| policy_step(s, policy, rule);
    if let Some(winner) = deal.winner() {
        return Trajectory::Terminated { steps: 0, winner };
    }
    let mut power = 1u64;
    let mut period = 1u64;
    let mut tortoise = deal.clone();
    let mut hare = step(deal).expect("deal is not final");
    let mut moves = 1u64;
    loop {
        if let Some(winner) = hare.winner() {
            return Trajectory::Terminated { steps: moves, winner };
        }
        if tortoise == hare {
            break;
        }
        if moves >= max_steps {
            return Trajectory::Truncated { steps: moves };
        }
        if power == period {
            tortoise = hare.clone();
            power *= 2;
            period = 0;
        }
        hare = step(&hare).expect("non-final state");
        moves += 1;
        period += 1;
    }

    // Both pointers start `period` apart; they meet at the cycle entry.
    let mut tortoise = deal.clone();
    let mut hare = deal.clone();
    for _ in 0..period {
        hare = step(&hare).expect("states before the cycle are non-final");
    }
    let mut pre_period = 0;
    while tortoise != hare {
        tortoise = step(&tortoise).expect("non-final state");
        hare = step(&hare).expect("non-final state");
        pre_period += 1;
    }
    Trajectory::Cycle { pre_period, period }
}

/// A deal, a policy and the exact shape of the never-ending game it produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub deal: GameState,
    pub policy: DeterministicPolicy,
    pub rule: ComparisonRule,
    pub pre_period: u64,
    pub period: u64,
}

/// Re-simulates a certificate: the state after `pre_period` moves recurs
/// after exactly `period` more moves and not before, no state on the way is
/// final, and both numbers are minimal.
pub fn verify_cycle(cert: &CycleCertificate) -> bool {
    let Ok(count) = state_count(cert.deal.n()) else { return false };
    let Some(total) = cert.pre_period.checked_add(cert.period) else { return false };
    if cert.period == 0 || total > count || cert.deal.is_final() {
        return false;
    }
    let mut path = Vec::with_capacity(total as usize + 1);
    path.push(cert.deal.clone());
    for _ in 0..total {
        match policy_step(path.last().unwrap(), cert.policy, cert.rule) {
            Some(next) if !next.is_final() => path.push(next),
            _ => return false,
        }
    }
    let (mu, lam) = (cert.pre_period as usize, cert.period as usize);
    let entry = &path[mu];
    if path[mu + lam] != *entry || path[mu + 1..mu + lam].contains(entry) {
        return false;
    }
    // the state just before the entry must not already be on the cycle
    mu == 0 || path[mu - 1] != path[mu - 1 + lam]
}

/// Which deals to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DealScope {
    /// Deals with `n/2` cards per hand.
    #[default]
    EqualSplit,
    /// Every non-final state.
    AllStates,
}

/// Every equal-split deal whose game cycles under `policy`, in rank order.
pub fn find_cycles(n: usize, policy: DeterministicPolicy, rule: ComparisonRule) -> Result<Vec<CycleCertificate>> {
    find_cycles_in(n, policy, rule, DealScope::EqualSplit)
}

pub fn find_cycles_in(
    n: usize,
    policy: DeterministicPolicy,
    rule: ComparisonRule,
    scope: DealScope,
) -> Result<Vec<CycleCertificate>> {
    let count = state_count(n)?;
    let deals: Vec<GameState> = match scope {
        DealScope::EqualSplit => equal_split_deals(n)?.collect(),
        DealScope::AllStates => (0..count).map(|r| decode_unchecked(r, n)).filter(|s| !s.is_final()).collect(),
    };
    let max_steps = count + 1;
    Ok(deals
        .into_par_iter()
        .filter_map(|deal| match simulate_policy(&deal, policy, rule, max_steps) {
            Trajectory::Cycle { pre_period, period } => {
                Some(CycleCertificate { deal, policy, rule, pre_period, period })
            }
            _ => None,
        })
        .collect())
}

/// A deal from which either player can win, with a play for each outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoOutcomeCertificate {
    pub deal: GameState,
    pub rule: ComparisonRule,
    pub left_win_path: PathWitness,
    pub right_win_path: PathWitness,
}

impl TwoOutcomeCertificate {
    pub fn replays(&self) -> bool {
        let ok = |p: &PathWitness, side| {
            p.start == self.deal && p.replays(self.rule, EdgeFilter::BothOrders) && p.winner() == Some(side)
        };
        ok(&self.left_win_path, Side::Left) && ok(&self.right_win_path, Side::Right)
    }
}

/// Shortest plays (over both placement orders) from `deal` to a left win and
/// to a right win, where reachable.
#[derive(Debug, Clone, Default)]
pub struct ReachableOutcomes {
    pub left: Option<PathWitness>,
    pub right: Option<PathWitness>,
}

/// Forward BFS over the full game graph from `deal`.
pub fn reachable_outcomes(deal: &GameState, rule: ComparisonRule) -> ReachableOutcomes {
    let mut out = ReachableOutcomes::default();
    let mut parent: HashMap<GameState, Option<(GameState, PlacementOrder)>> = HashMap::new();
    parent.insert(deal.clone(), None);
    let mut queue = VecDeque::from([deal.clone()]);
    let witness = |end: &GameState, parent: &HashMap<GameState, Option<(GameState, PlacementOrder)>>| {
        let mut steps = Vec::new();
        let mut cur = end.clone();
        while let Some(Some((prev, order))) = parent.get(&cur) {
            steps.push(PathStep { order: *order, state: cur.clone() });
            cur = prev.clone();
        }
        steps.reverse();
        PathWitness { start: deal.clone(), steps }
    };
    while let Some(s) = queue.pop_front() {
        match s.winner() {
            Some(Side::Left) if out.left.is_none() => out.left = Some(witness(&s, &parent)),
            Some(Side::Right) if out.right.is_none() => out.right = Some(witness(&s, &parent)),
            _ => {}
        }
        if out.left.is_some() && out.right.is_some() {
            break;
        }
        let Some(w) = s.trick_winner(rule) else { continue };
        for order in PlacementOrder::BOTH {
            let next = s.apply_trick(w, order);
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((s.clone(), order)));
                queue.push_back(next);
            }
        }
    }
    out
}

/// Largest deck scanned by [`two_outcome_deals`].
pub const TWO_OUTCOME_MAX_N: usize = 8;

/// Every equal-split deal from which both players can still win, in rank order.
pub fn two_outcome_deals(n: usize, rule: ComparisonRule) -> Result<Vec<TwoOutcomeCertificate>> {
    check_deck_size(n)?;
    if n > TWO_OUTCOME_MAX_N {
        return Err(WarError::InvalidArgument(format!(
            "two-outcome scan is exhaustive; n = {n} exceeds {TWO_OUTCOME_MAX_N}"
        )));
    }
    let deals: Vec<GameState> = equal_split_deals(n)?.collect();
    Ok(deals
        .into_par_iter()
        .filter_map(|deal| {
            let r = reachable_outcomes(&deal, rule);
            Some(TwoOutcomeCertificate { deal, rule, left_win_path: r.left?, right_win_path: r.right? })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ComparisonRule::*;
    use DeterministicPolicy::*;

    fn st(s: &str) -> GameState {
        s.parse().unwrap()
    }

    #[test]
    fn n2_terminates_in_one() {
        for p in DeterministicPolicy::ALL {
            assert_eq!(
                simulate_policy(&st("L: 1 ; R: 2"), p, Standard, 100),
                Trajectory::Terminated { steps: 1, winner: Side::Right }
            );
            assert!(find_cycles(2, p, Standard).unwrap().is_empty());
        }
    }

    #[test]
    fn final_deal_terminates_immediately() {
        assert_eq!(
            simulate_policy(&st("L: 2 1 ; R: -"), OwnFirst, Standard, 10),
            Trajectory::Terminated { steps: 0, winner: Side::Left }
        );
    }

    #[test]
    fn cycles_against_brute_force_orbit() {
        // independent oracle: walk the orbit recording first-visit times
        fn orbit(deal: &GameState, p: DeterministicPolicy, rule: ComparisonRule) -> Trajectory {
            let mut seen = HashMap::new();
            let mut s = deal.clone();
            let mut t = 0u64;
            loop {
                if let Some(w) = s.winner() {
                    return Trajectory::Terminated { steps: t, winner: w };
                }
                if let Some(&first) = seen.get(&s) {
                    return Trajectory::Cycle { pre_period: first, period: t - first };
                }
                seen.insert(s.clone(), t);
                s = policy_step(&s, p, rule).unwrap();
                t += 1;
            }
        }
        for rule in ComparisonRule::ALL {
            for p in DeterministicPolicy::ALL {
                for deal in equal_split_deals(6).unwrap() {
                    assert_eq!(simulate_policy(&deal, p, rule, 5041), orbit(&deal, p, rule), "{deal} {p} {rule}");
                }
            }
        }
    }

    #[test]
    fn certificates_verify_and_perturbations_fail() {
        let certs = find_cycles(6, SeatLeftFirst, Standard).unwrap();
        assert!(!certs.is_empty());
        for c in &certs {
            assert!(verify_cycle(c), "{c:?}");
            assert!(!verify_cycle(&CycleCertificate { period: c.period + 1, ..c.clone() }));
            assert!(!verify_cycle(&CycleCertificate { pre_period: c.pre_period + 1, ..c.clone() }));
            if c.pre_period > 0 {
                assert!(!verify_cycle(&CycleCertificate { pre_period: c.pre_period - 1, ..c.clone() }));
            }
        }
        let final_deal = CycleCertificate { deal: st("L: 1 2 3 4 5 6 ; R: -"), ..certs[0].clone() };
        assert!(!verify_cycle(&final_deal));
        assert!(!verify_cycle(&CycleCertificate { period: 0, ..certs[0].clone() }));
        assert!(!verify_cycle(&CycleCertificate { period: u64::MAX, ..certs[0].clone() }));
    }

    #[test]
    fn truncation_reported() {
        let certs = find_cycles(6, SeatLeftFirst, Standard).unwrap();
        let deal = &certs[0].deal;
        assert_eq!(simulate_policy(deal, SeatLeftFirst, Standard, 1), Trajectory::Truncated { steps: 1 });
    }

    #[test]
    fn certificate_json_shape() {
        let c = CycleCertificate {
            deal: st("L: 1 2 ; R: 3 4"),
            policy: SeatLeftFirst,
            rule: Standard,
            pre_period: 0,
            period: 4,
        };
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        assert_eq!(v["deal"], "L: 1 2 ; R: 3 4");
        assert_eq!(v["policy"], "seat-left-first");
        assert_eq!(v["rule"], "standard");
        assert_eq!(serde_json::from_value::<CycleCertificate>(v).unwrap(), c);
    }

    #[test]
    fn standard_n4_has_single_outcome() {
        assert!(two_outcome_deals(4, Standard).unwrap().is_empty());
    }

    #[test]
    fn cyclic_n4_has_two_outcomes() {
        let certs = two_outcome_deals(4, CyclicLowBeatsHigh).unwrap();
        assert!(!certs.is_empty());
        assert!(certs.iter().all(TwoOutcomeCertificate::replays));
    }

    #[test]
    fn two_outcome_scan_is_capped() {
        assert!(two_outcome_deals(10, Standard).is_err());
    }
}
