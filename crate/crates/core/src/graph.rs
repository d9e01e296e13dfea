//! The game graph over all states and the reachability analyses run on it.
//!
//! Nothing is stored per edge: successors come from [`GameState::successors`]
//! and predecessors from the analytic inverse [`GameState::predecessors`].
//! Attaining states are found by a multi-source reverse BFS from every final
//! state, with the visited set kept in a [`BitSet`] over state ranks.

use std::fmt;
use std::str::FromStr;

use arrayvec::ArrayVec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Result, WarError};
use crate::rules::{check_deck_size, ComparisonRule, DeterministicPolicy, GameState, PlacementOrder, Side};
use crate::state_space::{decode_unchecked, encode, final_ranks, state_count};

/// Default cap on the number of wandering states kept as examples.
pub const WANDERING_SAMPLES: usize = 16;

/// Which of the two placement edges of each state are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeFilter {
    BothOrders,
    OwnFirstOnly,
    RivalFirstOnly,
    SeatLeftFirstOnly,
    SeatRightFirstOnly,
}

impl EdgeFilter {
    pub const ALL: [EdgeFilter; 5] = [
        EdgeFilter::BothOrders,
        EdgeFilter::OwnFirstOnly,
        EdgeFilter::RivalFirstOnly,
        EdgeFilter::SeatLeftFirstOnly,
        EdgeFilter::SeatRightFirstOnly,
    ];

    /// Does the edge taken when `winner` places the cards in `order` survive?
    #[inline]
    pub fn allows(self, winner: Side, order: PlacementOrder) -> bool {
        match self.policy() {
            None => true,
            Some(p) => p.order_for(winner) == order,
        }
    }

    /// The deterministic policy a single-edge filter corresponds to.
    pub fn policy(self) -> Option<DeterministicPolicy> {
        match self {
            EdgeFilter::BothOrders => None,
            EdgeFilter::OwnFirstOnly => Some(DeterministicPolicy::OwnFirst),
            EdgeFilter::RivalFirstOnly => Some(DeterministicPolicy::RivalFirst),
            EdgeFilter::SeatLeftFirstOnly => Some(DeterministicPolicy::SeatLeftFirst),
            EdgeFilter::SeatRightFirstOnly => Some(DeterministicPolicy::SeatRightFirst),
        }
    }

    pub fn out_degree(self) -> usize {
        if self == EdgeFilter::BothOrders {
            2
        } else {
            1
        }
    }

    /// Edge-set inclusion between filters.
    pub fn is_subgraph_of(self, other: EdgeFilter) -> bool {
        self == other || other == EdgeFilter::BothOrders
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeFilter::BothOrders => "both-orders",
            EdgeFilter::OwnFirstOnly => "own-first-only",
            EdgeFilter::RivalFirstOnly => "rival-first-only",
            EdgeFilter::SeatLeftFirstOnly => "seat-left-first-only",
            EdgeFilter::SeatRightFirstOnly => "seat-right-first-only",
        }
    }
}

impl From<DeterministicPolicy> for EdgeFilter {
    fn from(p: DeterministicPolicy) -> Self {
        match p {
            DeterministicPolicy::OwnFirst => EdgeFilter::OwnFirstOnly,
            DeterministicPolicy::RivalFirst => EdgeFilter::RivalFirstOnly,
            DeterministicPolicy::SeatLeftFirst => EdgeFilter::SeatLeftFirstOnly,
            DeterministicPolicy::SeatRightFirst => EdgeFilter::SeatRightFirstOnly,
        }
    }
}

impl fmt::Display for EdgeFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdgeFilter {
    type Err = WarError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" | "both-orders" => Ok(EdgeFilter::BothOrders),
            other => {
                other.trim_end_matches("-only").parse::<DeterministicPolicy>().map(EdgeFilter::from).map_err(|_| {
                    WarError::Parse(format!(
                        "unknown edge filter `{other}` (expected both, own-first, rival-first, seat-left or seat-right)"
                    ))
                })
            }
        }
    }
}

/// A finite directed graph addressed by dense vertex ids.
///
/// The reachability routines are written against this trait so they can run
/// on both the game graph and small hand-built graphs.
pub trait StateGraph: Sync {
    fn vertex_count(&self) -> u64;
    fn is_final(&self, v: u64) -> bool;
    fn final_vertices(&self) -> Vec<u64>;
    fn for_each_successor(&self, v: u64, f: &mut dyn FnMut(u64));
    fn for_each_predecessor(&self, v: u64, f: &mut dyn FnMut(u64));
    /// Whether wandering vertices must also be closed under predecessors.
    fn requires_in_edge_isolation(&self) -> bool {
        false
    }
}

/// Result of a reverse BFS from the final vertices.
#[derive(Debug, Clone)]
pub struct Reachability {
    pub attaining: BitSet,
    /// Largest distance to a final vertex among attaining vertices.
    pub max_distance: u32,
    distance: Option<Vec<u32>>,
}

impl Reachability {
    pub fn wandering_count(&self) -> u64 {
        self.attaining.len() - self.attaining.count_ones()
    }

    /// Distance to the nearest final vertex, if distances were tracked.
    pub fn distance(&self, v: u64) -> Option<u32> {
        self.distance.as_ref().and_then(|d| match d[v as usize] {
            u32::MAX => None,
            x => Some(x),
        })
    }
}

/// Multi-source reverse BFS from every final vertex. Each layer is expanded
/// in parallel; the next frontier is sorted so the result is independent of
/// scheduling.
pub fn reverse_bfs<G: StateGraph + ?Sized>(graph: &G, track_distance: bool) -> Reachability {
    let count = graph.vertex_count();
    let attaining = BitSet::new(count);
    let mut distance = track_distance.then(|| vec![u32::MAX; count as usize]);
    let mut frontier = graph.final_vertices();
    frontier.retain(|&v| attaining.insert(v));
    frontier.sort_unstable();
    let mut layer = 0u32;
    let mut max_distance = 0;
    while !frontier.is_empty() {
        if let Some(d) = distance.as_mut() {
            for &v in &frontier {
                d[v as usize] = layer;
            }
        }
        max_distance = layer;
        let mut next: Vec<u64> = frontier
            .par_iter()
            .fold(Vec::new, |mut acc, &v| {
                graph.for_each_predecessor(v, &mut |p| {
                    if attaining.insert(p) {
                        acc.push(p);
                    }
                });
                acc
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            });
        next.sort_unstable();
        frontier = next;
        layer += 1;
    }
    Reachability { attaining, max_distance, distance }
}

/// True iff the wandering set is closed under successors and, when the graph
/// asks for it, under predecessors too. Vacuously true with no wandering
/// vertex.
pub fn wandering_closure<G: StateGraph + ?Sized>(graph: &G, attaining: &BitSet) -> bool {
    let check_in = graph.requires_in_edge_isolation();
    (0..graph.vertex_count()).into_par_iter().filter(|&v| !attaining.contains(v)).all(|v| {
        let mut closed = true;
        graph.for_each_successor(v, &mut |s| closed &= !attaining.contains(s));
        if check_in {
            graph.for_each_predecessor(v, &mut |p| closed &= !attaining.contains(p));
        }
        closed
    })
}

/// The model game graph for a deck size, comparison rule and edge filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameGraph {
    pub n: usize,
    pub rule: ComparisonRule,
    pub edge_filter: EdgeFilter,
}

impl GameGraph {
    pub fn new(n: usize, rule: ComparisonRule, edge_filter: EdgeFilter) -> Result<Self> {
        check_deck_size(n)?;
        Ok(GameGraph { n, rule, edge_filter })
    }

    pub fn state_count(&self) -> u64 {
        state_count(self.n).expect("deck size checked at construction")
    }

    /// Outgoing edges of `state` kept by the filter.
    pub fn successors(&self, state: &GameState) -> ArrayVec<(PlacementOrder, GameState), 2> {
        let mut out = ArrayVec::new();
        if let Some(winner) = state.trick_winner(self.rule) {
            for order in PlacementOrder::BOTH {
                if self.edge_filter.allows(winner, order) {
                    out.push((order, state.apply_trick(winner, order)));
                }
            }
        }
        out
    }

    /// Predecessors of `state` whose edge into `state` is kept by the filter.
    pub fn predecessors(&self, state: &GameState) -> ArrayVec<GameState, 2> {
        state
            .predecessors(self.rule)
            .into_iter()
            .filter(|p| self.edge_filter.allows(p.winner, p.order))
            .map(|p| p.state)
            .collect()
    }

    fn check_state(&self, state: &GameState) -> Result<()> {
        if state.n() != self.n {
            return Err(WarError::MalformedState(format!("state {state} does not belong to an n = {} deck", self.n)));
        }
        Ok(())
    }
}

impl StateGraph for GameGraph {
    fn vertex_count(&self) -> u64 {
        self.state_count()
    }

    fn is_final(&self, v: u64) -> bool {
        let split = v % (self.n as u64 + 1);
        split == 0 || split == self.n as u64
    }

    fn final_vertices(&self) -> Vec<u64> {
        final_ranks(self.n).collect()
    }

    fn for_each_successor(&self, v: u64, f: &mut dyn FnMut(u64)) {
        for (_, s) in self.successors(&decode_unchecked(v, self.n)) {
            f(encode(&s).0);
        }
    }

    fn for_each_predecessor(&self, v: u64, f: &mut dyn FnMut(u64)) {
        for p in self.predecessors(&decode_unchecked(v, self.n)) {
            f(encode(&p).0);
        }
    }

    fn requires_in_edge_isolation(&self) -> bool {
        self.edge_filter == EdgeFilter::BothOrders
    }
}

/// Attaining/wandering classification of every state of a game graph.
#[derive(Debug, Clone)]
pub struct ReachabilityReport {
    pub graph: GameGraph,
    pub total_states: u64,
    pub attaining: BitSet,
    pub attaining_count: u64,
    pub wandering_count: u64,
    /// The lowest-ranked wandering states, at most [`WANDERING_SAMPLES`].
    pub wandering_samples: Vec<GameState>,
    pub max_distance: u32,
}

impl ReachabilityReport {
    pub fn is_absorbing(&self) -> bool {
        self.wandering_count == 0
    }

    pub fn is_attaining(&self, state: &GameState) -> bool {
        self.attaining.contains(encode(state).0)
    }
}

pub fn attaining_set(n: usize, rule: ComparisonRule, edge_filter: EdgeFilter) -> Result<ReachabilityReport> {
    let graph = GameGraph::new(n, rule, edge_filter)?;
    Ok(graph.attaining_set())
}

impl GameGraph {
    pub fn attaining_set(&self) -> ReachabilityReport {
        let reach = reverse_bfs(self, false);
        self.report(reach)
    }

    fn report(&self, reach: Reachability) -> ReachabilityReport {
        let total_states = self.state_count();
        let attaining_count = reach.attaining.count_ones();
        let wandering_samples =
            reach.attaining.zeros().take(WANDERING_SAMPLES).map(|r| decode_unchecked(r, self.n)).collect();
        ReachabilityReport {
            graph: *self,
            total_states,
            attaining_count,
            wandering_count: total_states - attaining_count,
            wandering_samples,
            max_distance: reach.max_distance,
            attaining: reach.attaining,
        }
    }

    /// BFS distances to the nearest final state, for path extraction.
    pub fn distances(&self) -> DistanceMap {
        DistanceMap { graph: *self, reach: reverse_bfs(self, true) }
    }

    pub fn path_to_final(&self, state: &GameState) -> Result<PathWitness> {
        self.distances().path_to_final(state)
    }
}

/// Checks the wandering set of `report` for closure (see [`wandering_closure`]).
pub fn wandering_closure_check(report: &ReachabilityReport) -> bool {
    wandering_closure(&report.graph, &report.attaining)
}

/// Reverse-BFS layers of a game graph.
#[derive(Debug, Clone)]
pub struct DistanceMap {
    graph: GameGraph,
    reach: Reachability,
}

impl DistanceMap {
    pub fn graph(&self) -> &GameGraph {
        &self.graph
    }

    pub fn distance(&self, state: &GameState) -> Option<u32> {
        self.reach.distance(encode(state).0)
    }

    pub fn max_distance(&self) -> u32 {
        self.reach.max_distance
    }

    pub fn report(&self) -> ReachabilityReport {
        self.graph.report(self.reach.clone())
    }

    /// A shortest edge-by-edge path from `state` to a final state. Among
    /// equally short continuations the `OwnFirst` edge is preferred.
    pub fn path_to_final(&self, state: &GameState) -> Result<PathWitness> {
        self.graph.check_state(state)?;
        let mut d = self.distance(state).ok_or_else(|| WarError::Wandering(state.to_string()))?;
        let mut steps = Vec::with_capacity(d as usize);
        let mut cur = state.clone();
        while d > 0 {
            let (order, next) = self
                .graph
                .successors(&cur)
                .into_iter()
                .find(|(_, s)| self.distance(s) == Some(d - 1))
                .expect("a state at distance d has a successor at distance d - 1");
            steps.push(PathStep { order, state: next.clone() });
            cur = next;
            d -= 1;
        }
        Ok(PathWitness { start: state.clone(), steps })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub order: PlacementOrder,
    pub state: GameState,
}

/// A concrete play from `start` ending in a final state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWitness {
    pub start: GameState,
    pub steps: Vec<PathStep>,
}

impl PathWitness {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &GameState {
        self.steps.last().map_or(&self.start, |s| &s.state)
    }

    pub fn winner(&self) -> Option<Side> {
        self.end().winner()
    }

    /// Replays every step through the trick rule, checking each edge is kept
    /// by `filter` and that the path ends in a final state.
    pub fn replays(&self, rule: ComparisonRule, filter: EdgeFilter) -> bool {
        let mut cur = &self.start;
        for step in &self.steps {
            let Some(winner) = cur.trick_winner(rule) else { return false };
            if !filter.allows(winner, step.order) || cur.apply_trick(winner, step.order) != step.state {
                return false;
            }
            cur = &step.state;
        }
        cur.is_final()
    }
}

/// Degree conformance counts for a game graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeAudit {
    pub out_degree_violations: u64,
    pub in_degree_violations: u64,
    pub checked_states: u64,
    pub total_out_degree: u64,
    pub total_in_degree: u64,
}

impl DegreeAudit {
    pub fn is_clean(&self) -> bool {
        self.out_degree_violations == 0
            && self.in_degree_violations == 0
            && self.total_out_degree == self.total_in_degree
    }
}

/// In-degree implied by hand sizes: one candidate per hand holding 2+ cards.
pub fn expected_in_degree(state: &GameState) -> usize {
    (state.left().len() >= 2) as usize + (state.right().len() >= 2) as usize
}

pub fn degree_audit(n: usize, rule: ComparisonRule) -> Result<DegreeAudit> {
    Ok(GameGraph::new(n, rule, EdgeFilter::BothOrders)?.degree_audit())
}

impl GameGraph {
    /// Counts in-degrees by forward enumeration of every successor and
    /// compares them with the analytic predecessor function; for the full
    /// graph also with the hand-size formula. Out-degree must be 0 on final
    /// states and the filter's degree elsewhere, with distinct successors.
    pub fn degree_audit(&self) -> DegreeAudit {
        let count = self.state_count();
        let mut in_counts = vec![0u8; count as usize];
        let mut out_violations = 0;
        let mut total_out = 0;
        for r in 0..count {
            let s = decode_unchecked(r, self.n);
            let succ = self.successors(&s);
            let expected = if s.is_final() { 0 } else { self.edge_filter.out_degree() };
            if succ.len() != expected || (succ.len() == 2 && succ[0].1 == succ[1].1) {
                out_violations += 1;
            }
            total_out += succ.len() as u64;
            for (_, t) in &succ {
                in_counts[encode(t).0 as usize] += 1;
            }
        }
        let mut in_violations = 0;
        let mut total_in = 0;
        for r in 0..count {
            let s = decode_unchecked(r, self.n);
            let preds = self.predecessors(&s);
            total_in += preds.len() as u64;
            let formula_ok = self.edge_filter != EdgeFilter::BothOrders || preds.len() == expected_in_degree(&s);
            let edges_ok = preds.iter().all(|p| self.successors(p).iter().any(|(_, t)| *t == s));
            if in_counts[r as usize] as usize != preds.len() || !formula_ok || !edges_ok {
                in_violations += 1;
            }
        }
        DegreeAudit {
            out_degree_violations: out_violations,
            in_degree_violations: in_violations,
            checked_states: count,
            total_out_degree: total_out,
            total_in_degree: total_in,
        }
    }
}

/// Checks the subgraph lemma on computed reports: if `filter_a` keeps a
/// subset of `filter_b`'s edges, every state wandering under `filter_b` is
/// wandering under `filter_a`.
pub fn subgraph_monotonicity(
    n: usize,
    rule: ComparisonRule,
    filter_a: EdgeFilter,
    filter_b: EdgeFilter,
) -> Result<bool> {
    if !filter_a.is_subgraph_of(filter_b) {
        return Err(WarError::FilterNotSubset { a: filter_a.to_string(), b: filter_b.to_string() });
    }
    let a = attaining_set(n, rule, filter_a)?;
    let b = attaining_set(n, rule, filter_b)?;
    Ok(a.attaining.is_subset(&b.attaining))
}
