//! The standard 52-card game, including wars on tied ranks.
//!
//! A trick lays one face-up card per player. On a tie each player adds
//! `face_down_count` face-down cards and one more face-up card, repeating
//! until the face-up ranks differ. The winner takes every laid card: their
//! own stack then the loser's under `OwnFirst`, the reverse under
//! `RivalFirst`, each stack kept in laying order. A player who cannot lay the
//! cards a war needs loses at once and the opponent collects everything.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, WarError};
use crate::markov::PlacementProbabilities;
use crate::rng::trial_rng;
use crate::rules::{split_deal_text, DeterministicPolicy, PlacementOrder, Side};

pub const DECK_SIZE: usize = 52;
pub const HAND_SIZE: usize = 26;
/// Moves after which a value-preserving deal repeats its rank pattern.
pub const VALUE_CYCLE_MOVES: u64 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suit {
    Hearts,
    Clubs,
    Diamonds,
    Spades,
}

impl Suit {
    pub const ALL: [Suit; 4] = [Suit::Hearts, Suit::Clubs, Suit::Diamonds, Suit::Spades];

    fn letter(self) -> char {
        match self {
            Suit::Hearts => 'H',
            Suit::Clubs => 'C',
            Suit::Diamonds => 'D',
            Suit::Spades => 'S',
        }
    }
}

/// A card of the standard deck; rank 2..=14 with 14 the ace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassicCard {
    rank: u8,
    suit: Suit,
}

impl ClassicCard {
    pub fn new(rank: u8, suit: Suit) -> Result<Self> {
        if !(2..=14).contains(&rank) {
            return Err(WarError::Parse(format!("rank {rank} outside 2..=14")));
        }
        Ok(ClassicCard { rank, suit })
    }

    pub fn rank(self) -> u8 {
        self.rank
    }

    pub fn suit(self) -> Suit {
        self.suit
    }

    fn index(self) -> usize {
        (self.rank as usize - 2) * 4 + self.suit as usize
    }
}

impl fmt::Display for ClassicCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.rank {
            2..=9 => (b'0' + self.rank) as char,
            10 => 'T',
            11 => 'J',
            12 => 'Q',
            13 => 'K',
            _ => 'A',
        };
        write!(f, "{r}{}", self.suit.letter())
    }
}

impl FromStr for ClassicCard {
    type Err = WarError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || WarError::Parse(format!("bad card `{s}` (expected e.g. AH, TD, 7C)"));
        let mut chars = s.chars();
        let (Some(r), Some(u), None) = (chars.next(), chars.next(), chars.next()) else { return Err(bad()) };
        let rank = match r {
            '2'..='9' => r as u8 - b'0',
            'T' => 10,
            'J' => 11,
            'Q' => 12,
            'K' => 13,
            'A' => 14,
            _ => return Err(bad()),
        };
        let suit = match u {
            'H' => Suit::Hearts,
            'C' => Suit::Clubs,
            'D' => Suit::Diamonds,
            'S' => Suit::Spades,
            _ => return Err(bad()),
        };
        ClassicCard::new(rank, suit)
    }
}

/// All 52 cards, ordered by rank then suit.
pub fn standard_deck() -> Vec<ClassicCard> {
    (2..=14).flat_map(|rank| Suit::ALL.map(|suit| ClassicCard { rank, suit })).collect()
}

/// Two hands of distinct standard cards, top card first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicState {
    left: VecDeque<ClassicCard>,
    right: VecDeque<ClassicCard>,
}

impl ClassicState {
    /// Any two hands of pairwise distinct cards.
    pub fn from_hands(left: Vec<ClassicCard>, right: Vec<ClassicCard>) -> Result<Self> {
        let mut seen = [false; DECK_SIZE];
        for c in left.iter().chain(&right) {
            if std::mem::replace(&mut seen[c.index()], true) {
                return Err(WarError::MalformedState(format!("card {c} appears twice")));
            }
        }
        Ok(ClassicState { left: left.into(), right: right.into() })
    }

    /// Checks this is a full-deck 26/26 deal.
    pub fn validate_deal(&self) -> Result<()> {
        if self.left.len() != HAND_SIZE || self.right.len() != HAND_SIZE {
            return Err(WarError::MalformedState(format!(
                "a deal needs 26 cards per hand, got {}/{}",
                self.left.len(),
                self.right.len()
            )));
        }
        Ok(())
    }

    pub fn hand(&self, side: Side) -> &VecDeque<ClassicCard> {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn hand_mut(&mut self, side: Side) -> &mut VecDeque<ClassicCard> {
        match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }

    pub fn card_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_final(&self) -> bool {
        self.left.is_empty() || self.right.is_empty()
    }

    pub fn winner(&self) -> Option<Side> {
        match (self.left.is_empty(), self.right.is_empty()) {
            (true, false) => Some(Side::Right),
            (false, true) => Some(Side::Left),
            _ => None,
        }
    }

    /// Ranks of a hand with suits erased.
    pub fn ranks(&self, side: Side) -> Vec<u8> {
        self.hand(side).iter().map(|c| c.rank).collect()
    }

    /// Plays one trick, wars included. `choose` picks the placement order
    /// once the winner is known.
    pub fn play_trick(
        &mut self,
        config: &WarConfig,
        choose: impl FnOnce(Side) -> PlacementOrder,
    ) -> Result<TrickReport> {
        if self.is_final() {
            return Err(WarError::FinalState);
        }
        let mut laid: [Vec<ClassicCard>; 2] = [Vec::new(), Vec::new()];
        let mut wars = 0;
        let mut need = 1;
        loop {
            let short = [self.left.len() < need, self.right.len() < need];
            if short[0] || short[1] {
                // both short: the smaller hand loses, the left player on equal counts
                let loser = match short {
                    [true, false] => Side::Left,
                    [false, true] => Side::Right,
                    _ if self.right.len() < self.left.len() => Side::Right,
                    _ => Side::Left,
                };
                let winner = loser.opponent();
                let cards_laid = (laid[0].len() + laid[1].len()) as u32;
                self.collect(winner, choose(winner), laid);
                let rest: Vec<ClassicCard> = self.hand_mut(loser).drain(..).collect();
                self.hand_mut(winner).extend(rest);
                return Ok(TrickReport { winner, wars, cards_laid, forfeit: true });
            }
            laid[0].extend(self.left.drain(..need));
            laid[1].extend(self.right.drain(..need));
            let (l, r) = (laid[0].last().unwrap().rank, laid[1].last().unwrap().rank);
            if l != r {
                let winner = if l > r { Side::Left } else { Side::Right };
                let cards_laid = (laid[0].len() + laid[1].len()) as u32;
                self.collect(winner, choose(winner), laid);
                return Ok(TrickReport { winner, wars, cards_laid, forfeit: false });
            }
            wars += 1;
            need = config.face_down_count + 1;
        }
    }

    fn collect(&mut self, winner: Side, order: PlacementOrder, laid: [Vec<ClassicCard>; 2]) {
        let [left, right] = laid;
        let (own, rival) = match winner {
            Side::Left => (left, right),
            Side::Right => (right, left),
        };
        let hand = self.hand_mut(winner);
        match order {
            PlacementOrder::OwnFirst => hand.extend(own.into_iter().chain(rival)),
            PlacementOrder::RivalFirst => hand.extend(rival.into_iter().chain(own)),
        }
    }
}

/// Classic deal text: `L: AH KC ... ; R: KH AC ...`.
impl fmt::Display for ClassicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tag, hand) in [("L:", &self.left), (" ; R:", &self.right)] {
            f.write_str(tag)?;
            if hand.is_empty() {
                f.write_str(" -")?;
            }
            for c in hand {
                write!(f, " {c}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for ClassicState {
    type Err = WarError;

    /// Accepts the one-line form or an `L:` line followed by an `R:` line.
    /// Lines starting with `#` are ignored so fixture files can carry notes.
    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        let sep = if lines.iter().any(|l| l.contains(';')) { " " } else { " ; " };
        let body = lines.join(sep);
        let (l, r) = split_deal_text(&body)?;
        let parse = |t: Vec<&str>| t.into_iter().map(str::parse).collect::<Result<Vec<ClassicCard>>>();
        ClassicState::from_hands(parse(l)?, parse(r)?)
    }
}

impl Serialize for ClassicState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassicState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExhaustionRule {
    /// A player without enough cards to finish a war loses immediately.
    #[default]
    ExhaustedPlayerLoses,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarConfig {
    /// Face-down cards each player lays per war round.
    pub face_down_count: usize,
    pub exhaustion_rule: ExhaustionRule,
}

impl Default for WarConfig {
    fn default() -> Self {
        WarConfig { face_down_count: 1, exhaustion_rule: ExhaustionRule::ExhaustedPlayerLoses }
    }
}

/// What happened during one trick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrickReport {
    pub winner: Side,
    /// Tied face-up comparisons.
    pub wars: u32,
    pub cards_laid: u32,
    /// The loser could not complete a war and gave up the game.
    pub forfeit: bool,
}

/// Resolves one trick with a fixed placement order.
pub fn resolve_classic_trick(
    state: &ClassicState,
    order: PlacementOrder,
    config: &WarConfig,
) -> Result<(ClassicState, TrickReport)> {
    let mut next = state.clone();
    let report = next.play_trick(config, |_| order)?;
    Ok((next, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub deal: ClassicState,
    /// Tricks played; a trick with any number of wars counts once.
    pub moves: u64,
    pub winner: Option<Side>,
    pub wars: u64,
    pub cards_laid: u64,
    pub truncated: bool,
}

fn play_game(
    deal: &ClassicState,
    config: &WarConfig,
    max_steps: u64,
    mut choose: impl FnMut(Side) -> PlacementOrder,
) -> GameRecord {
    let mut state = deal.clone();
    let (mut moves, mut wars, mut cards_laid) = (0, 0, 0);
    while !state.is_final() && moves < max_steps {
        let report = state.play_trick(config, &mut choose).expect("state is not final");
        debug_assert_eq!(state.card_count(), deal.card_count());
        moves += 1;
        wars += report.wars as u64;
        cards_laid += report.cards_laid as u64;
    }
    let winner = state.winner();
    GameRecord { deal: deal.clone(), moves, winner, wars, cards_laid, truncated: winner.is_none() }
}

/// One seeded game with random placement orders.
pub fn simulate_classic(
    deal: &ClassicState,
    probs: &PlacementProbabilities,
    config: &WarConfig,
    seed: u64,
    max_steps: u64,
) -> Result<GameRecord> {
    deal.validate_deal()?;
    probs.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(play_game(deal, config, max_steps, |w| {
        if rng.random_bool(probs.probability(w, PlacementOrder::OwnFirst)) {
            PlacementOrder::OwnFirst
        } else {
            PlacementOrder::RivalFirst
        }
    }))
}

/// One game under a fixed placement policy.
pub fn simulate_classic_policy(
    deal: &ClassicState,
    policy: DeterministicPolicy,
    config: &WarConfig,
    max_steps: u64,
) -> Result<GameRecord> {
    deal.validate_deal()?;
    Ok(play_game(deal, config, max_steps, |w| policy.order_for(w)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueCycleReport {
    /// No war, no end of game, and both rank sequences restored at the end
    /// of every 26-move block.
    pub ok: bool,
    /// First move count (within the first block) at which both rank
    /// sequences equal the initial ones; 0 if none.
    pub period_in_values: u64,
    pub wars_encountered: u64,
    pub moves_played: u64,
    pub blocks: u64,
}

/// Plays 26 moves under `policy` and checks the rank pattern comes back.
pub fn verify_value_cycle(deal: &ClassicState, policy: DeterministicPolicy) -> Result<ValueCycleReport> {
    verify_value_cycle_blocks(deal, policy, 1)
}

/// As [`verify_value_cycle`], repeated for `blocks` consecutive 26-move blocks.
pub fn verify_value_cycle_blocks(
    deal: &ClassicState,
    policy: DeterministicPolicy,
    blocks: u64,
) -> Result<ValueCycleReport> {
    deal.validate_deal()?;
    let config = WarConfig::default();
    let initial = (deal.ranks(Side::Left), deal.ranks(Side::Right));
    let restored = |s: &ClassicState| s.ranks(Side::Left) == initial.0 && s.ranks(Side::Right) == initial.1;
    let mut state = deal.clone();
    let mut report = ValueCycleReport { ok: true, period_in_values: 0, wars_encountered: 0, moves_played: 0, blocks };
    for _ in 0..blocks {
        for _ in 0..VALUE_CYCLE_MOVES {
            if state.is_final() {
                report.ok = false;
                return Ok(report);
            }
            let trick = state.play_trick(&config, |w| policy.order_for(w))?;
            report.moves_played += 1;
            report.wars_encountered += trick.wars as u64;
            if report.period_in_values == 0 && report.wars_encountered == 0 && restored(&state) {
                report.period_in_values = report.moves_played;
            }
        }
        if !restored(&state) {
            report.ok = false;
        }
    }
    report.ok &= report.wars_encountered == 0 && !state.is_final();
    Ok(report)
}

/// Deal and game seed of Monte Carlo trial `trial`.
pub fn classic_trial(seed: u64, trial: u64) -> (ClassicState, u64) {
    let mut rng = trial_rng(seed, trial);
    let game_seed: u64 = rng.random();
    let mut deck = standard_deck();
    deck.shuffle(&mut rng);
    let right = deck.split_off(HAND_SIZE);
    (ClassicState { left: deck.into(), right: right.into() }, game_seed)
}

/// Survival checkpoints used by [`monte_carlo_classic`].
pub const DEFAULT_SURVIVAL_KS: [u64; 8] = [0, 1, 10, 100, 1_000, 10_000, 100_000, 1_000_000];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalPoint {
    pub k: u64,
    /// Fraction of games still running after `k` moves (truncated games count
    /// as running).
    pub p_alive: f64,
    /// Wilson 95% upper confidence bound on `p_alive`.
    pub upper_95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicSummary {
    pub trials: u64,
    pub seed: u64,
    pub max_steps: u64,
    pub completed: u64,
    pub truncations: u64,
    /// Mean moves over completed games.
    pub mean_moves: f64,
    pub std_error: f64,
    pub max_moves: u64,
    pub total_wars: u64,
    pub left_wins: u64,
    pub survival: Vec<SurvivalPoint>,
}

fn wilson_upper(successes: u64, trials: u64) -> f64 {
    let z = 1.96f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = p + z * z / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    ((centre + spread) / denom).min(1.0)
}

/// Seeded Monte Carlo over uniformly shuffled deals; the output depends only
/// on the arguments, not on thread scheduling.
pub fn monte_carlo_classic(
    trials: u64,
    probs: &PlacementProbabilities,
    config: &WarConfig,
    seed: u64,
    max_steps: u64,
) -> Result<ClassicSummary> {
    probs.validate()?;
    if trials == 0 {
        return Err(WarError::InvalidArgument("trials must be at least 1".into()));
    }
    let records: Vec<(u64, Option<Side>, u64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (deal, game_seed) = classic_trial(seed, i);
            let r = simulate_classic(&deal, probs, config, game_seed, max_steps).expect("shuffled deal is valid");
            (r.moves, r.winner, r.wars)
        })
        .collect();
    let completed: Vec<u64> = records.iter().filter(|r| r.1.is_some()).map(|r| r.0).collect();
    let n_done = completed.len() as u64;
    let mean_moves = if n_done > 0 { completed.iter().sum::<u64>() as f64 / n_done as f64 } else { f64::NAN };
    let variance = if n_done > 1 {
        completed.iter().map(|&m| (m as f64 - mean_moves).powi(2)).sum::<f64>() / (n_done - 1) as f64
    } else {
        0.0
    };
    let survival = DEFAULT_SURVIVAL_KS
        .iter()
        .filter(|&&k| k <= max_steps)
        .map(|&k| {
            let alive = records.iter().filter(|r| r.1.is_none() || r.0 > k).count() as u64;
            SurvivalPoint { k, p_alive: alive as f64 / trials as f64, upper_95: wilson_upper(alive, trials) }
        })
        .collect();
    Ok(ClassicSummary {
        trials,
        seed,
        max_steps,
        completed: n_done,
        truncations: trials - n_done,
        mean_moves,
        std_error: (variance / n_done.max(1) as f64).sqrt(),
        max_moves: records.iter().map(|r| r.0).max().unwrap_or(0),
        total_wars: records.iter().map(|r| r.2).sum(),
        left_wins: records.iter().filter(|r| r.1 == Some(Side::Left)).count() as u64,
        survival,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use PlacementOrder::*;

    fn cards(s: &str) -> Vec<ClassicCard> {
        s.split_whitespace().map(|c| c.parse().unwrap()).collect()
    }

    fn state(l: &str, r: &str) -> ClassicState {
        ClassicState::from_hands(cards(l), cards(r)).unwrap()
    }

    #[test]
    fn card_text() {
        for c in standard_deck() {
            assert_eq!(c.to_string().parse::<ClassicCard>().unwrap(), c);
        }
        assert_eq!("TD".parse::<ClassicCard>().unwrap().rank(), 10);
        assert!("1H".parse::<ClassicCard>().is_err());
        assert!("AX".parse::<ClassicCard>().is_err());
        assert!("AHH".parse::<ClassicCard>().is_err());
        assert_eq!(standard_deck().len(), 52);
    }

    #[test]
    fn no_war_trick() {
        let s = state("AH 2C", "KH 3C");
        let (next, rep) = resolve_classic_trick(&s, OwnFirst, &WarConfig::default()).unwrap();
        assert_eq!(rep, TrickReport { winner: Side::Left, wars: 0, cards_laid: 2, forfeit: false });
        assert_eq!(next, state("2C AH KH", "3C"));
        let (next, _) = resolve_classic_trick(&s, RivalFirst, &WarConfig::default()).unwrap();
        assert_eq!(next, state("2C KH AH", "3C"));
    }

    #[test]
    fn double_war_single_winner_takes_all() {
        // tie 5/5, war: face-down 2H/2S, face-up 9C/9D ties again, then 4C vs KD
        let s = state("5H 2H 9C 3H 4C 7H", "5S 2S 9D 3S KD 8S");
        let (next, rep) = resolve_classic_trick(&s, OwnFirst, &WarConfig::default()).unwrap();
        assert_eq!(rep.winner, Side::Right);
        assert_eq!(rep.wars, 2);
        assert_eq!(rep.cards_laid, 10);
        assert_eq!(next, state("7H", "8S 5S 2S 9D 3S KD 5H 2H 9C 3H 4C"));
        assert_eq!(next.card_count(), 12);
    }

    #[test]
    fn exhausted_player_loses() {
        let s = state("7H", "7S 2C 3C");
        let (next, rep) = resolve_classic_trick(&s, OwnFirst, &WarConfig::default()).unwrap();
        assert!(rep.forfeit);
        assert_eq!(rep.winner, Side::Right);
        assert_eq!(next.winner(), Some(Side::Right));
        assert_eq!(next.card_count(), 4);

        let s = state("7H 2D", "7S");
        let (next, rep) = resolve_classic_trick(&s, RivalFirst, &WarConfig::default()).unwrap();
        assert_eq!((rep.winner, rep.forfeit), (Side::Left, true));
        assert_eq!(next, state("2D 7S 7H", ""));
    }

    #[test]
    fn face_down_zero_is_plain_rematch() {
        let cfg = WarConfig { face_down_count: 0, ..Default::default() };
        let s = state("7H 9H", "7S 2S");
        let (next, rep) = resolve_classic_trick(&s, OwnFirst, &cfg).unwrap();
        assert_eq!((rep.winner, rep.wars, rep.cards_laid), (Side::Left, 1, 4));
        assert_eq!(next, state("7H 9H 7S 2S", ""));
    }

    #[test]
    fn final_state_rejected() {
        let s = state("AH", "");
        assert_eq!(resolve_classic_trick(&s, OwnFirst, &WarConfig::default()), Err(WarError::FinalState));
    }

    #[test]
    fn deal_text_round_trip() {
        let (deal, _) = classic_trial(1, 0);
        let text = deal.to_string();
        assert!(text.starts_with("L: "));
        assert_eq!(text.parse::<ClassicState>().unwrap(), deal);
        assert!(deal.validate_deal().is_ok());
        assert!("L: AH AH ; R: KC".parse::<ClassicState>().is_err());
        assert!(state("AH", "KC").validate_deal().is_err());
    }

    #[test]
    fn simulation_is_seeded() {
        let (deal, seed) = classic_trial(9, 4);
        let p = PlacementProbabilities::uniform();
        let a = simulate_classic(&deal, &p, &WarConfig::default(), seed, 1_000_000).unwrap();
        let b = simulate_classic(&deal, &p, &WarConfig::default(), seed, 1_000_000).unwrap();
        assert_eq!(a, b);
        assert!(!a.truncated && a.winner.is_some());
    }

    #[test]
    fn four_aces_take_first_card() {
        // right's top card loses trick 1 to an ace
        let mut l: Vec<ClassicCard> = cards("AH AC AD AS");
        let mut r: Vec<ClassicCard> = Vec::new();
        for c in standard_deck().into_iter().filter(|c| c.rank() != 14) {
            if l.len() < 26 {
                l.push(c)
            } else {
                r.push(c)
            }
        }
        let deal = ClassicState::from_hands(l, r).unwrap();
        let (next, rep) = resolve_classic_trick(&deal, OwnFirst, &WarConfig::default()).unwrap();
        assert_eq!(rep.winner, Side::Left);
        assert_eq!((next.hand(Side::Left).len(), next.hand(Side::Right).len()), (27, 25));
    }

    #[test]
    fn single_trial_matches_direct_simulation() {
        let p = PlacementProbabilities::uniform();
        let cfg = WarConfig::default();
        let s = monte_carlo_classic(1, &p, &cfg, 77, 1_000_000).unwrap();
        let (deal, seed) = classic_trial(77, 0);
        let r = simulate_classic(&deal, &p, &cfg, seed, 1_000_000).unwrap();
        assert_eq!(s.mean_moves, r.moves as f64);
        assert_eq!(s.total_wars, r.wars);
        assert_eq!(s.left_wins, (r.winner == Some(Side::Left)) as u64);
    }

    #[test]
    fn survival_non_increasing() {
        let s =
            monte_carlo_classic(200, &PlacementProbabilities::uniform(), &WarConfig::default(), 5, 1_000_000).unwrap();
        assert_eq!(s.survival[0].p_alive, 1.0);
        assert!(s.survival.windows(2).all(|w| w[1].p_alive <= w[0].p_alive));
        assert_eq!(s.truncations, 0);
    }

    #[test]
    fn war_deal_fails_value_cycle() {
        let mut deck = standard_deck();
        // ranks paired up: left and right top cards tie immediately
        let right: Vec<ClassicCard> =
            deck.iter().copied().filter(|c| matches!(c.suit(), Suit::Clubs | Suit::Spades)).collect();
        deck.retain(|c| matches!(c.suit(), Suit::Hearts | Suit::Diamonds));
        let deal = ClassicState::from_hands(deck, right).unwrap();
        let rep = verify_value_cycle(&deal, DeterministicPolicy::SeatLeftFirst).unwrap();
        assert!(!rep.ok);
        assert!(rep.wars_encountered >= 1);
    }

    #[test]
    fn short_game_fails_value_cycle() {
        // left holds the 26 highest cards and wins every trick
        let deck = standard_deck();
        let (low, high) = deck.split_at(26);
        let deal = ClassicState::from_hands(high.to_vec(), low.to_vec()).unwrap();
        let rep = verify_value_cycle(&deal, DeterministicPolicy::OwnFirst).unwrap();
        assert!(!rep.ok);
    }
}
