//! Cards, hands and the single-trick transition of the model game.
//!
//! A model deck holds the values `1..=n`, all distinct. A [`GameState`] splits
//! the deck into two ordered hands; index 0 of a hand is its top card (played
//! next) and returned cards are appended at the bottom.

use std::fmt;
use std::str::FromStr;

use arrayvec::ArrayVec;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, WarError};

/// Largest model deck supported by the 64-bit state index.
pub const MAX_DECK: usize = 12;

/// A model card value in `1..=n`.
pub type Card = u8;

/// Which pair of cards beats which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonRule {
    /// Higher value wins.
    Standard,
    /// Higher value wins, except that card 1 beats card `n`.
    CyclicLowBeatsHigh,
}

impl ComparisonRule {
    pub const ALL: [ComparisonRule; 2] = [ComparisonRule::Standard, ComparisonRule::CyclicLowBeatsHigh];

    /// Winner of the pair `{u, v}` in a deck of `n` cards.
    pub fn compare(self, u: Card, v: Card, n: Card) -> Result<Card> {
        for card in [u, v] {
            if card == 0 || card > n {
                return Err(WarError::CardOutOfRange { card, n });
            }
        }
        if u == v {
            return Err(WarError::Tie(u, v));
        }
        Ok(self.winner(u, v, n))
    }

    #[inline]
    pub(crate) fn winner(self, u: Card, v: Card, n: Card) -> Card {
        match self {
            ComparisonRule::CyclicLowBeatsHigh if u.min(v) == 1 && u.max(v) == n && n > 1 => 1,
            _ => u.max(v),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComparisonRule::Standard => "standard",
            ComparisonRule::CyclicLowBeatsHigh => "cyclic-low-beats-high",
        }
    }
}

impl fmt::Display for ComparisonRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ComparisonRule {
    type Err = WarError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(ComparisonRule::Standard),
            "cyclic" | "cyclic-low-beats-high" => Ok(ComparisonRule::CyclicLowBeatsHigh),
            other => Err(WarError::Parse(format!("unknown rule `{other}` (expected standard or cyclic)"))),
        }
    }
}

/// One of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opponent(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Order in which the trick winner returns the two cards to the bottom.
///
/// `OwnFirst` places the winner's own card first, so the rival's card becomes
/// the new bottom card. `RivalFirst` is the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementOrder {
    OwnFirst,
    RivalFirst,
}

impl PlacementOrder {
    pub const BOTH: [PlacementOrder; 2] = [PlacementOrder::OwnFirst, PlacementOrder::RivalFirst];
}

impl fmt::Display for PlacementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlacementOrder::OwnFirst => "own-first",
            PlacementOrder::RivalFirst => "rival-first",
        })
    }
}

/// A fixed rule choosing the placement order for every trick.
///
/// The seat policies look at who sits where, not at who won: `SeatLeftFirst`
/// always puts the left player's card in first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeterministicPolicy {
    OwnFirst,
    RivalFirst,
    SeatLeftFirst,
    SeatRightFirst,
}

impl DeterministicPolicy {
    pub const ALL: [DeterministicPolicy; 4] = [
        DeterministicPolicy::OwnFirst,
        DeterministicPolicy::RivalFirst,
        DeterministicPolicy::SeatLeftFirst,
        DeterministicPolicy::SeatRightFirst,
    ];

    /// Placement order this policy prescribes when `winner` takes the trick.
    pub fn order_for(self, winner: Side) -> PlacementOrder {
        use DeterministicPolicy::*;
        match (self, winner) {
            (OwnFirst, _) => PlacementOrder::OwnFirst,
            (RivalFirst, _) => PlacementOrder::RivalFirst,
            (SeatLeftFirst, Side::Left) | (SeatRightFirst, Side::Right) => PlacementOrder::OwnFirst,
            (SeatLeftFirst, Side::Right) | (SeatRightFirst, Side::Left) => PlacementOrder::RivalFirst,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DeterministicPolicy::OwnFirst => "own-first",
            DeterministicPolicy::RivalFirst => "rival-first",
            DeterministicPolicy::SeatLeftFirst => "seat-left-first",
            DeterministicPolicy::SeatRightFirst => "seat-right-first",
        }
    }
}

impl fmt::Display for DeterministicPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DeterministicPolicy {
    type Err = WarError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "own-first" | "own" => Ok(DeterministicPolicy::OwnFirst),
            "rival-first" | "rival" => Ok(DeterministicPolicy::RivalFirst),
            "seat-left-first" | "seat-left" => Ok(DeterministicPolicy::SeatLeftFirst),
            "seat-right-first" | "seat-right" => Ok(DeterministicPolicy::SeatRightFirst),
            other => Err(WarError::Parse(format!(
                "unknown policy `{other}` (expected own-first, rival-first, seat-left or seat-right)"
            ))),
        }
    }
}

/// Deck size plus comparison rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeckSpec {
    n: u8,
    rule: ComparisonRule,
}

impl DeckSpec {
    /// `n` must be even and within `2..=MAX_DECK`.
    pub fn new(n: usize, rule: ComparisonRule) -> Result<Self> {
        check_deck_size(n)?;
        if n % 2 != 0 {
            return Err(WarError::OddDeck(n));
        }
        Ok(DeckSpec { n: n as u8, rule })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn rule(&self) -> ComparisonRule {
        self.rule
    }
}

pub(crate) fn check_deck_size(n: usize) -> Result<()> {
    if (2..=MAX_DECK).contains(&n) {
        Ok(())
    } else {
        Err(WarError::DeckSize(n))
    }
}

/// A reversed trick: the state it started from plus who won and how the
/// cards were placed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predecessor {
    pub state: GameState,
    pub winner: Side,
    pub order: PlacementOrder,
}

/// Two ordered hands partitioning the deck `1..=n`.
///
/// Stored as the concatenation `left ++ right` and the left hand length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameState {
    cards: ArrayVec<Card, MAX_DECK>,
    split: u8,
}

impl GameState {
    /// Builds a state from two hands, top card first. The union of the hands
    /// must be exactly `1..=n` with `n = left.len() + right.len()`.
    pub fn from_hands(left: &[Card], right: &[Card]) -> Result<Self> {
        let n = left.len() + right.len();
        check_deck_size(n)?;
        let mut seen = 0u32;
        for &c in left.iter().chain(right) {
            if c == 0 || c as usize > n {
                return Err(WarError::CardOutOfRange { card: c, n: n as u8 });
            }
            if seen & (1 << c) != 0 {
                return Err(WarError::MalformedState(format!("card {c} appears twice")));
            }
            seen |= 1 << c;
        }
        Ok(Self::from_parts_unchecked(left.iter().chain(right).copied(), left.len()))
    }

    pub(crate) fn from_parts_unchecked(cards: impl IntoIterator<Item = Card>, split: usize) -> Self {
        GameState { cards: cards.into_iter().collect(), split: split as u8 }
    }

    pub fn n(&self) -> usize {
        self.cards.len()
    }

    pub fn left(&self) -> &[Card] {
        &self.cards[..self.split as usize]
    }

    pub fn right(&self) -> &[Card] {
        &self.cards[self.split as usize..]
    }

    pub fn hand(&self, side: Side) -> &[Card] {
        match side {
            Side::Left => self.left(),
            Side::Right => self.right(),
        }
    }

    /// The concatenation `left ++ right`.
    pub fn sequence(&self) -> &[Card] {
        &self.cards
    }

    pub fn left_len(&self) -> usize {
        self.split as usize
    }

    pub fn is_final(&self) -> bool {
        self.split == 0 || self.split as usize == self.cards.len()
    }

    /// The player holding every card, if the state is final.
    pub fn winner(&self) -> Option<Side> {
        if self.split == 0 {
            Some(Side::Right)
        } else if self.split as usize == self.cards.len() {
            Some(Side::Left)
        } else {
            None
        }
    }

    /// Which hand currently holds `card`.
    pub fn holder(&self, card: Card) -> Option<Side> {
        let pos = self.cards.iter().position(|&c| c == card)?;
        Some(if pos < self.split as usize { Side::Left } else { Side::Right })
    }

    /// Winner of the next trick, or `None` for a final state.
    pub fn trick_winner(&self, rule: ComparisonRule) -> Option<Side> {
        if self.is_final() {
            return None;
        }
        let (l, r) = (self.cards[0], self.cards[self.split as usize]);
        let w = rule.winner(l, r, self.cards.len() as u8);
        Some(if w == l { Side::Left } else { Side::Right })
    }

    /// Plays one trick: both top cards go to the winner's bottom in `order`.
    pub fn resolve_trick(&self, order: PlacementOrder, rule: ComparisonRule) -> Result<GameState> {
        let winner = self.trick_winner(rule).ok_or(WarError::FinalState)?;
        Ok(self.apply_trick(winner, order))
    }

    pub(crate) fn apply_trick(&self, winner: Side, order: PlacementOrder) -> GameState {
        let split = self.split as usize;
        let (l, r) = (self.cards[0], self.cards[split]);
        let (own, rival) = match winner {
            Side::Left => (l, r),
            Side::Right => (r, l),
        };
        let pair = match order {
            PlacementOrder::OwnFirst => [own, rival],
            PlacementOrder::RivalFirst => [rival, own],
        };
        let mut cards = ArrayVec::new();
        cards.extend(self.cards[1..split].iter().copied());
        match winner {
            Side::Left => {
                cards.extend(pair);
                cards.extend(self.cards[split + 1..].iter().copied());
                GameState { cards, split: split as u8 + 1 }
            }
            Side::Right => {
                cards.extend(self.cards[split + 1..].iter().copied());
                cards.extend(pair);
                GameState { cards, split: split as u8 - 1 }
            }
        }
    }

    /// Both successors, `[OwnFirst, RivalFirst]`.
    pub fn successors(&self, rule: ComparisonRule) -> Result<[GameState; 2]> {
        let winner = self.trick_winner(rule).ok_or(WarError::FinalState)?;
        Ok(PlacementOrder::BOTH.map(|o| self.apply_trick(winner, o)))
    }

    /// Every state one trick away from producing `self`.
    ///
    /// The left player can have won the last trick only if the left hand has
    /// at least two cards (the pair sits at its bottom); likewise for the
    /// right. Final states have predecessors too.
    pub fn predecessors(&self, rule: ComparisonRule) -> ArrayVec<Predecessor, 2> {
        let mut out = ArrayVec::new();
        let n = self.cards.len() as u8;
        for winner in [Side::Left, Side::Right] {
            let hand = self.hand(winner);
            if hand.len() < 2 {
                continue;
            }
            let (u, v) = (hand[hand.len() - 2], hand[hand.len() - 1]);
            let w = rule.winner(u, v, n);
            let loser_card = if w == u { v } else { u };
            let order = if w == u { PlacementOrder::OwnFirst } else { PlacementOrder::RivalFirst };
            let rest = &hand[..hand.len() - 2];
            let state = match winner {
                Side::Left => {
                    let right = self.right();
                    GameState::from_parts_unchecked(
                        std::iter::once(w)
                            .chain(rest.iter().copied())
                            .chain(std::iter::once(loser_card))
                            .chain(right.iter().copied()),
                        rest.len() + 1,
                    )
                }
                Side::Right => {
                    let left = self.left();
                    GameState::from_parts_unchecked(
                        std::iter::once(loser_card)
                            .chain(left.iter().copied())
                            .chain(std::iter::once(w))
                            .chain(rest.iter().copied()),
                        left.len() + 1,
                    )
                }
            };
            out.push(Predecessor { state, winner, order });
        }
        out
    }
}

impl fmt::Debug for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GameState({self})")
    }
}

fn write_hand(f: &mut fmt::Formatter<'_>, cards: &[Card]) -> fmt::Result {
    if cards.is_empty() {
        return f.write_str("-");
    }
    for (i, c) in cards.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// Deal text: `L: 3 1 ; R: 2 4`, top card first, `-` for an empty hand.
impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("L: ")?;
        write_hand(f, self.left())?;
        f.write_str(" ; R: ")?;
        write_hand(f, self.right())
    }
}

/// Splits `L: ... ; R: ...` into its two token lists.
pub(crate) fn split_deal_text(s: &str) -> Result<(Vec<&str>, Vec<&str>)> {
    let s = s.trim();
    let (l, r) = s.split_once(';').ok_or_else(|| WarError::Parse(format!("expected `L: ... ; R: ...`, got `{s}`")))?;
    fn hand<'a>(part: &'a str, tag: &str) -> Result<Vec<&'a str>> {
        let body = part
            .trim()
            .strip_prefix(tag)
            .ok_or_else(|| WarError::Parse(format!("expected hand tagged `{tag}` in `{part}`")))?;
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens == ["-"] {
            Ok(Vec::new())
        } else {
            Ok(tokens)
        }
    }
    Ok((hand(l, "L:")?, hand(r, "R:")?))
}

impl FromStr for GameState {
    type Err = WarError;

    fn from_str(s: &str) -> Result<Self> {
        let (l, r) = split_deal_text(s)?;
        let parse = |tokens: Vec<&str>| -> Result<Vec<Card>> {
            tokens
                .into_iter()
                .map(|t| t.parse::<Card>().map_err(|_| WarError::Parse(format!("bad card value `{t}`"))))
                .collect()
        };
        GameState::from_hands(&parse(l)?, &parse(r)?)
    }
}

impl Serialize for GameState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GameState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
