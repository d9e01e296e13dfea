//! Random placement orders: the game as an absorbing Markov chain.
//!
//! Whenever player `i` wins a trick they use `OwnFirst` with probability
//! `p^i_1` and `RivalFirst` with probability `p^i_2 = 1 - p^i_1`. The chain's
//! transient states are the non-final states; final states absorb.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WarError};
use crate::graph::{EdgeFilter, GameGraph};
use crate::rng::trial_rng;
use crate::rules::{Card, ComparisonRule, GameState, PlacementOrder, Side};
use crate::state_space::{decode_unchecked, encode, equal_split_deals, state_count};

const SUM_TOLERANCE: f64 = 1e-12;

/// Per-player probabilities of the two placement orders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementProbabilities {
    #[serde(rename = "pL1")]
    pub left_own_first: f64,
    #[serde(rename = "pL2")]
    pub left_rival_first: f64,
    #[serde(rename = "pR1")]
    pub right_own_first: f64,
    #[serde(rename = "pR2")]
    pub right_rival_first: f64,
}

impl PlacementProbabilities {
    pub fn new(pl1: f64, pl2: f64, pr1: f64, pr2: f64) -> Result<Self> {
        let probs = PlacementProbabilities {
            left_own_first: pl1,
            left_rival_first: pl2,
            right_own_first: pr1,
            right_rival_first: pr2,
        };
        probs.validate()?;
        Ok(probs)
    }

    /// Builds the profile from `p^L_1` and `p^R_1`; the complements are derived.
    pub fn from_own_first(pl1: f64, pr1: f64) -> Result<Self> {
        Self::new(pl1, 1.0 - pl1, pr1, 1.0 - pr1)
    }

    /// All four probabilities equal to one half.
    pub fn uniform() -> Self {
        PlacementProbabilities {
            left_own_first: 0.5,
            left_rival_first: 0.5,
            right_own_first: 0.5,
            right_rival_first: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.left_own_first, self.left_rival_first, self.right_own_first, self.right_rival_first];
        if all.iter().any(|p| !p.is_finite() || *p <= 0.0 || *p >= 1.0) {
            return Err(WarError::Probabilities(format!("each probability must lie strictly inside (0, 1): {all:?}")));
        }
        for (side, a, b) in
            [("L", self.left_own_first, self.left_rival_first), ("R", self.right_own_first, self.right_rival_first)]
        {
            if (a + b - 1.0).abs() > SUM_TOLERANCE {
                return Err(WarError::Probabilities(format!("p{side}1 + p{side}2 = {} != 1", a + b)));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn probability(&self, winner: Side, order: PlacementOrder) -> f64 {
        match (winner, order) {
            (Side::Left, PlacementOrder::OwnFirst) => self.left_own_first,
            (Side::Left, PlacementOrder::RivalFirst) => self.left_rival_first,
            (Side::Right, PlacementOrder::OwnFirst) => self.right_own_first,
            (Side::Right, PlacementOrder::RivalFirst) => self.right_rival_first,
        }
    }
}

impl Default for PlacementProbabilities {
    fn default() -> Self {
        Self::uniform()
    }
}

/// Probability of the edge `state -> successor`.
pub fn transition_probability(
    state: &GameState,
    successor: &GameState,
    probs: &PlacementProbabilities,
    rule: ComparisonRule,
) -> Result<f64> {
    let winner = state.trick_winner(rule).ok_or(WarError::FinalState)?;
    PlacementOrder::BOTH
        .into_iter()
        .find(|&o| state.apply_trick(winner, o) == *successor)
        .map(|o| probs.probability(winner, o))
        .ok_or_else(|| WarError::NotAnEdge(format!("{state} -> {successor}")))
}

/// Successor ranks and probabilities of every state, indexed by rank.
/// Final states have probability zero on both slots.
struct Chain {
    n: usize,
    succ: Vec<[u64; 2]>,
    prob: Vec<[f64; 2]>,
    is_final: Vec<bool>,
}

impl Chain {
    fn build(n: usize, rule: ComparisonRule, probs: &PlacementProbabilities) -> Result<Self> {
        let count = state_count(n)?;
        let rows: Vec<([u64; 2], [f64; 2], bool)> = (0..count)
            .into_par_iter()
            .map(|r| {
                let s = decode_unchecked(r, n);
                match s.trick_winner(rule) {
                    None => ([0, 0], [0.0, 0.0], true),
                    Some(w) => {
                        let [a, b] = PlacementOrder::BOTH.map(|o| encode(&s.apply_trick(w, o)).0);
                        let [pa, pb] = PlacementOrder::BOTH.map(|o| probs.probability(w, o));
                        ([a, b], [pa, pb], false)
                    }
                }
            })
            .collect();
        let mut chain = Chain {
            n,
            succ: Vec::with_capacity(rows.len()),
            prob: Vec::with_capacity(rows.len()),
            is_final: Vec::with_capacity(rows.len()),
        };
        for (s, p, f) in rows {
            chain.succ.push(s);
            chain.prob.push(p);
            chain.is_final.push(f);
        }
        Ok(chain)
    }

    fn len(&self) -> usize {
        self.succ.len()
    }

    fn transient(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&r| !self.is_final[r])
    }

    /// `1 + sum_j p(r -> j) t(j)` for a transient state.
    #[inline]
    fn bellman(&self, r: usize, t: &[f64]) -> f64 {
        let [a, b] = self.succ[r];
        let [pa, pb] = self.prob[r];
        1.0 + pa * t[a as usize] + pb * t[b as usize]
    }

    fn residual(&self, t: &[f64]) -> f64 {
        self.transient().map(|r| (t[r] - self.bellman(r, t)).abs()).fold(0.0, f64::max)
    }

    /// Pushes one step of transient mass forward; returns mass absorbed.
    fn propagate(&self, cur: &[f64], next: &mut [f64]) -> f64 {
        next.iter_mut().for_each(|x| *x = 0.0);
        let mut absorbed = 0.0;
        for (r, &m) in cur.iter().enumerate() {
            if m == 0.0 || self.is_final[r] {
                continue;
            }
            for k in 0..2 {
                let s = self.succ[r][k] as usize;
                let x = m * self.prob[r][k];
                if self.is_final[s] {
                    absorbed += x;
                } else {
                    next[s] += x;
                }
            }
        }
        absorbed
    }
}

/// Compensated (Neumaier) sum, so that e.g. 24 copies of 1/24 add to 1.
fn accurate_sum(xs: &[f64]) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &x in xs {
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + comp
}

/// Fails unless every state can reach a final state under both orders.
fn require_absorbing(n: usize, rule: ComparisonRule) -> Result<GameGraph> {
    let graph = GameGraph::new(n, rule, EdgeFilter::BothOrders)?;
    let report = graph.attaining_set();
    if let Some(sample) = report.wandering_samples.first() {
        return Err(WarError::NotAbsorbing { wandering: report.wandering_count, sample: sample.to_string() });
    }
    Ok(graph)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    /// Dense LU when the state space has at most [`DENSE_STATE_LIMIT`] states,
    /// Gauss-Seidel otherwise.
    Auto,
    Dense,
    GaussSeidel,
}

/// Largest `(n+1)!` handled by the dense solver under [`SolverMethod::Auto`].
pub const DENSE_STATE_LIMIT: u64 = 10_000;

impl fmt::Display for SolverMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverMethod::Auto => "auto",
            SolverMethod::Dense => "dense",
            SolverMethod::GaussSeidel => "gauss-seidel",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iterations: u64,
    pub method: SolverMethod,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tolerance: 1e-10, max_iterations: 1_000_000, method: SolverMethod::Auto }
    }
}

/// Expected number of moves to absorption from every state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AbsorptionSolution {
    pub n: usize,
    pub rule: ComparisonRule,
    pub probs: PlacementProbabilities,
    pub method: SolverMethod,
    /// Indexed by state rank; zero exactly on final states.
    #[serde(skip)]
    pub expected_steps: Vec<f64>,
    /// Mean over the uniform distribution on equal-split deals.
    pub mean_equal_split: f64,
    pub max_state_expectation: f64,
    /// `max |t(s) - 1 - sum p(s -> s') t(s')|` over non-final states.
    pub residual: f64,
    pub iterations: u64,
}

impl AbsorptionSolution {
    pub fn expected(&self, state: &GameState) -> f64 {
        self.expected_steps[encode(state).0 as usize]
    }
}

/// Solves `t = 1 + Q t` over the non-final states.
pub fn expected_absorption(
    n: usize,
    rule: ComparisonRule,
    probs: &PlacementProbabilities,
    options: &SolverOptions,
) -> Result<AbsorptionSolution> {
    probs.validate()?;
    if options.tolerance.is_nan() || options.tolerance <= 0.0 {
        return Err(WarError::InvalidArgument(format!("tolerance must be positive, got {}", options.tolerance)));
    }
    require_absorbing(n, rule)?;
    let chain = Chain::build(n, rule, probs)?;
    let method = match options.method {
        SolverMethod::Auto if chain.len() as u64 <= DENSE_STATE_LIMIT => SolverMethod::Dense,
        SolverMethod::Auto => SolverMethod::GaussSeidel,
        m => m,
    };
    let (t, iterations) = match method {
        SolverMethod::Dense => (solve_dense(&chain), 1),
        _ => solve_gauss_seidel(&chain, options)?,
    };
    let residual = chain.residual(&t);
    if residual > options.tolerance {
        return Err(WarError::NoConvergence { iterations, residual });
    }
    let mean_equal_split = if n % 2 == 0 {
        let deals: Vec<f64> = equal_split_deals(n)?.map(|d| t[encode(&d).0 as usize]).collect();
        deals.iter().sum::<f64>() / deals.len() as f64
    } else {
        f64::NAN
    };
    let max_state_expectation = t.iter().copied().fold(0.0, f64::max);
    Ok(AbsorptionSolution {
        n,
        rule,
        probs: *probs,
        method,
        expected_steps: t,
        mean_equal_split,
        max_state_expectation,
        residual,
        iterations,
    })
}

/// Direct LU solve of `(I - Q) t = 1` over the transient states.
fn solve_dense(chain: &Chain) -> Vec<f64> {
    let transient: Vec<usize> = chain.transient().collect();
    let mut index = vec![usize::MAX; chain.len()];
    for (i, &r) in transient.iter().enumerate() {
        index[r] = i;
    }
    let m = transient.len();
    let mut a = DMatrix::<f64>::identity(m, m);
    for (i, &r) in transient.iter().enumerate() {
        for k in 0..2 {
            let j = index[chain.succ[r][k] as usize];
            if j != usize::MAX {
                a[(i, j)] -= chain.prob[r][k];
            }
        }
    }
    let x = a.lu().solve(&DVector::from_element(m, 1.0)).expect("I - Q is nonsingular on an absorbing chain");
    let mut t = vec![0.0; chain.len()];
    for (i, &r) in transient.iter().enumerate() {
        t[r] = x[i];
    }
    t
}

/// Gauss-Seidel sweeps, visiting states whose larger hand is biggest first:
/// those sit closest to absorption and carry the most settled values.
fn solve_gauss_seidel(chain: &Chain, options: &SolverOptions) -> Result<(Vec<f64>, u64)> {
    let n = chain.n as u64;
    let larger_hand = |r: usize| {
        let left = r as u64 % (n + 1);
        left.max(n - left)
    };
    let mut order: Vec<usize> = chain.transient().collect();
    order.sort_by_key(|&r| (std::cmp::Reverse(larger_hand(r)), r));
    let mut t = vec![0.0; chain.len()];
    let mut residual = f64::INFINITY;
    for sweep in 1..=options.max_iterations {
        for &r in &order {
            t[r] = chain.bellman(r, &t);
        }
        residual = chain.residual(&t);
        if residual <= options.tolerance {
            return Ok((t, sweep));
        }
    }
    Err(WarError::NoConvergence { iterations: options.max_iterations, residual })
}

/// Starting distribution over states.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDistribution {
    /// Uniform over all deals with `n/2` cards per hand.
    EqualSplit,
    /// All mass on one state.
    Point(GameState),
    /// Explicit weights; must sum to 1.
    Weighted(Vec<(GameState, f64)>),
}

impl InitialDistribution {
    fn to_vector(&self, n: usize, count: u64) -> Result<Vec<f64>> {
        let mut v = vec![0.0; count as usize];
        match self {
            InitialDistribution::EqualSplit => {
                let deals: Vec<u64> = equal_split_deals(n)?.map(|d| encode(&d).0).collect();
                let w = 1.0 / deals.len() as f64;
                for r in deals {
                    v[r as usize] = w;
                }
            }
            InitialDistribution::Point(s) => {
                check_size(s, n)?;
                v[encode(s).0 as usize] = 1.0;
            }
            InitialDistribution::Weighted(ws) => {
                let mut total = 0.0;
                for (s, w) in ws {
                    check_size(s, n)?;
                    if w.is_nan() || *w < 0.0 {
                        return Err(WarError::InvalidArgument(format!("negative weight {w} on {s}")));
                    }
                    v[encode(s).0 as usize] += w;
                    total += w;
                }
                if (total - 1.0).abs() > SUM_TOLERANCE {
                    return Err(WarError::InvalidArgument(format!("initial weights sum to {total}, not 1")));
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Display for InitialDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialDistribution::EqualSplit => f.write_str("uniform over equal-split deals"),
            InitialDistribution::Point(s) => write!(f, "point mass at {s}"),
            InitialDistribution::Weighted(ws) => write!(f, "weighted over {} states", ws.len()),
        }
    }
}

fn check_size(s: &GameState, n: usize) -> Result<()> {
    if s.n() == n {
        Ok(())
    } else {
        Err(WarError::MalformedState(format!("{s} is not a state of an n = {n} deck")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub k: u64,
    pub p_alive: f64,
}

/// Survival probabilities `P(game still running after k moves)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailCurve {
    pub initial_distribution: String,
    pub points: Vec<TailPoint>,
    /// Largest `|alive + absorbed - 1|` seen over all propagated steps.
    pub max_mass_error: f64,
}

impl TailCurve {
    /// CSV with header `k,p_alive`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,p_alive\n");
        for p in &self.points {
            out.push_str(&format!("{},{:e}\n", p.k, p.p_alive));
        }
        out
    }
}

/// Exact survival curve by propagating `initial` through the chain.
/// Points are reported in the order of `ks`.
pub fn tail_probability(
    n: usize,
    rule: ComparisonRule,
    probs: &PlacementProbabilities,
    initial: &InitialDistribution,
    ks: &[u64],
) -> Result<TailCurve> {
    probs.validate()?;
    let chain = Chain::build(n, rule, probs)?;
    let mut cur = initial.to_vector(n, chain.len() as u64)?;
    let mut absorbed = 0.0;
    for (mass, &is_final) in cur.iter_mut().zip(&chain.is_final) {
        if is_final {
            absorbed += *mass;
            *mass = 0.0;
        }
    }
    let horizon = ks.iter().copied().max().unwrap_or(0);
    let mut alive = Vec::with_capacity(horizon as usize + 1);
    alive.push(accurate_sum(&cur));
    let mut max_mass_error = (alive[0] + absorbed - 1.0).abs();
    let mut next = vec![0.0; cur.len()];
    for _ in 0..horizon {
        absorbed += chain.propagate(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        let a = accurate_sum(&cur);
        max_mass_error = max_mass_error.max((a + absorbed - 1.0).abs());
        alive.push(a);
    }
    Ok(TailCurve {
        initial_distribution: initial.to_string(),
        points: ks.iter().map(|&k| TailPoint { k, p_alive: alive[k as usize] }).collect(),
        max_mass_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    /// Number of windows.
    pub k: u64,
    pub steps: u64,
    pub p_alive: f64,
    /// `(1 - q)^k`.
    pub bound: f64,
}

/// Window length `N` and per-window absorption probability `q` such that the
/// game survives `kN` moves with probability at most `(1 - q)^k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayCertificate {
    pub n: usize,
    pub rule: ComparisonRule,
    pub probs: PlacementProbabilities,
    /// Largest shortest-path distance from a non-final state to a final one.
    pub window: u64,
    /// Smallest probability, over non-final states, of absorbing within `window` moves.
    pub q: f64,
    /// Largest `k` checked.
    pub verified_up_to: u64,
    pub holds: bool,
    pub points: Vec<DecayPoint>,
}

/// Slack allowed on the bound comparison for floating-point propagation.
pub const DECAY_SLACK: f64 = 1e-12;

pub fn decay_certificate(
    n: usize,
    rule: ComparisonRule,
    probs: &PlacementProbabilities,
    horizon: u64,
) -> Result<DecayCertificate> {
    probs.validate()?;
    let graph = require_absorbing(n, rule)?;
    let window = graph.distances().max_distance() as u64;
    let chain = Chain::build(n, rule, probs)?;

    // absorbed_within[r] = P(absorbed within j moves | start at r), j = 0..window
    let mut absorbed_within: Vec<f64> = chain.is_final.iter().map(|&f| if f { 1.0 } else { 0.0 }).collect();
    let mut next = absorbed_within.clone();
    for _ in 0..window {
        for r in chain.transient() {
            let [a, b] = chain.succ[r];
            let [pa, pb] = chain.prob[r];
            next[r] = pa * absorbed_within[a as usize] + pb * absorbed_within[b as usize];
        }
        std::mem::swap(&mut absorbed_within, &mut next);
    }
    let q = chain.transient().map(|r| absorbed_within[r]).fold(1.0, f64::min);

    let windows = horizon / window;
    let ks: Vec<u64> = (0..=windows).map(|k| k * window).collect();
    let curve = tail_probability(n, rule, probs, &InitialDistribution::EqualSplit, &ks)?;
    let points: Vec<DecayPoint> = curve
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| DecayPoint { k: k as u64, steps: p.k, p_alive: p.p_alive, bound: (1.0 - q).powi(k as i32) })
        .collect();
    let holds = q > 0.0 && points.iter().all(|p| p.p_alive <= p.bound + DECAY_SLACK);
    Ok(DecayCertificate { n, rule, probs: *probs, window, q, verified_up_to: windows, holds, points })
}

/// Empirical game-length statistics from seeded random play.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthSummary {
    pub trials: u64,
    pub seed: u64,
    pub max_steps: u64,
    /// Games that reached a final state; the statistics below cover only these.
    pub completed: u64,
    pub truncations: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    /// 95% normal-approximation half-width around `mean`.
    pub ci95_half_width: f64,
    pub left_wins: u64,
}

impl LengthSummary {
    /// Aggregates per-game outcomes `(moves, winner)`, with `None` for a
    /// truncated game, in the given order.
    pub(crate) fn from_outcomes(outcomes: &[Option<(u64, Side)>], seed: u64, max_steps: u64) -> Self {
        let lengths: Vec<u64> = outcomes.iter().flatten().map(|(m, _)| *m).collect();
        let completed = lengths.len() as u64;
        let left_wins = outcomes.iter().flatten().filter(|(_, w)| *w == Side::Left).count() as u64;
        let mean = if completed > 0 { lengths.iter().sum::<u64>() as f64 / completed as f64 } else { f64::NAN };
        let variance = if completed > 1 {
            lengths.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (completed - 1) as f64
        } else {
            0.0
        };
        let std_error = if completed > 0 { (variance / completed as f64).sqrt() } else { f64::NAN };
        LengthSummary {
            trials: outcomes.len() as u64,
            seed,
            max_steps,
            completed,
            truncations: outcomes.len() as u64 - completed,
            mean,
            variance,
            std_error,
            ci95_half_width: 1.96 * std_error,
            left_wins,
        }
    }
}

/// A uniformly random deal with `n/2` cards per hand.
pub fn random_equal_split<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GameState {
    let mut cards: Vec<Card> = (1..=n as Card).collect();
    cards.shuffle(rng);
    GameState::from_parts_unchecked(cards, n / 2)
}

/// Plays one random game from `deal`; `None` if `max_steps` moves pass first.
pub fn play_random<R: Rng + ?Sized>(
    deal: &GameState,
    rule: ComparisonRule,
    probs: &PlacementProbabilities,
    max_steps: u64,
    rng: &mut R,
) -> Option<(u64, Side)> {
    let mut state = deal.clone();
    for moves in 0..=max_steps {
        let Some(winner) = state.trick_winner(rule) else {
            return state.winner().map(|w| (moves, w));
        };
        if moves == max_steps {
            break;
        }
        let order = if rng.random_bool(probs.probability(winner, PlacementOrder::OwnFirst)) {
            PlacementOrder::OwnFirst
        } else {
            PlacementOrder::RivalFirst
        };
        state = state.apply_trick(winner, order);
    }
    None
}

/// Monte Carlo game lengths from uniformly random equal-split deals. Trial
/// `i` draws from stream `(seed, i)`, so the output is identical for any
/// thread count.
pub fn monte_carlo_length(
    n: usize,
    rule: ComparisonRule,
    probs: &PlacementProbabilities,
    trials: u64,
    seed: u64,
    max_steps: u64,
) -> Result<LengthSummary> {
    probs.validate()?;
    crate::rules::DeckSpec::new(n, rule)?;
    if trials == 0 {
        return Err(WarError::InvalidArgument("trials must be at least 1".into()));
    }
    let outcomes: Vec<Option<(u64, Side)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let deal = random_equal_split(n, &mut rng);
            play_random(&deal, rule, probs, max_steps, &mut rng)
        })
        .collect();
    Ok(LengthSummary::from_outcomes(&outcomes, seed, max_steps))
}
