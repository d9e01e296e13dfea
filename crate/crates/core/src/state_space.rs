//! Dense ranking of model-game states.
//!
//! A state of an `n`-card deck is a permutation of `1..=n` (the concatenation
//! `left ++ right`) plus a split point in `0..=n`, so there are `(n+1)!` of
//! them. The rank is `lehmer_rank(left ++ right) * (n + 1) + |left|`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WarError};
use crate::rules::{check_deck_size, Card, GameState, MAX_DECK};

/// Dense integer label of a state in `0..state_count(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateIndex(pub u64);

impl StateIndex {
    pub fn get(self) -> u64 {
        self.0
    }
}

const FACTORIALS: [u64; MAX_DECK + 2] = {
    let mut f = [1u64; MAX_DECK + 2];
    let mut i = 1;
    while i < f.len() {
        f[i] = f[i - 1] * i as u64;
        i += 1;
    }
    f
};

/// `(n+1)!`, the number of states of an `n`-card deck.
pub fn state_count(n: usize) -> Result<u64> {
    check_deck_size(n)?;
    Ok(FACTORIALS[n + 1])
}

/// Closed-form size breakdown of the state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpaceStats {
    pub n: usize,
    pub total_states: u64,
    pub final_states: u64,
    pub nonfinal_states: u64,
}

impl StateSpaceStats {
    pub fn new(n: usize) -> Result<Self> {
        let total_states = state_count(n)?;
        let final_states = 2 * FACTORIALS[n];
        Ok(StateSpaceStats { n, total_states, final_states, nonfinal_states: total_states - final_states })
    }
}

/// Lexicographic rank of a permutation of `1..=k` in `0..k!`.
pub fn permutation_rank(perm: &[Card]) -> u64 {
    let k = perm.len();
    // bit c set while card c is still unused
    let mut unused: u32 = ((1u32 << k) - 1) << 1;
    let mut rank = 0u64;
    for (i, &c) in perm.iter().enumerate() {
        let smaller = (unused & ((1u32 << c) - 1)).count_ones() as u64;
        rank += smaller * FACTORIALS[k - 1 - i];
        unused &= !(1u32 << c);
    }
    rank
}

/// Inverse of [`permutation_rank`]; `rank` must be below `k!`.
pub fn permutation_unrank(mut rank: u64, k: usize, out: &mut [Card]) {
    let mut unused: u32 = ((1u32 << k) - 1) << 1;
    for (i, slot) in out.iter_mut().enumerate().take(k) {
        let f = FACTORIALS[k - 1 - i];
        let mut digit = (rank / f) as u32;
        rank %= f;
        let mut bits = unused;
        loop {
            let c = bits.trailing_zeros();
            if digit == 0 {
                *slot = c as Card;
                unused &= !(1 << c);
                break;
            }
            bits &= bits - 1;
            digit -= 1;
        }
    }
}

/// Rank of a state. `GameState` construction already guarantees a valid
/// partition of the deck.
pub fn encode(state: &GameState) -> StateIndex {
    let n = state.n() as u64;
    StateIndex(permutation_rank(state.sequence()) * (n + 1) + state.left_len() as u64)
}

pub fn decode(rank: StateIndex, n: usize) -> Result<GameState> {
    let count = state_count(n)?;
    if rank.0 >= count {
        return Err(WarError::RankOutOfRange { rank: rank.0, n, count });
    }
    Ok(decode_unchecked(rank.0, n))
}

#[inline]
pub(crate) fn decode_unchecked(rank: u64, n: usize) -> GameState {
    let m = n as u64 + 1;
    let mut buf = [0 as Card; MAX_DECK];
    permutation_unrank(rank / m, n, &mut buf);
    GameState::from_parts_unchecked(buf[..n].iter().copied(), (rank % m) as usize)
}

/// Every state of an `n`-card deck in increasing rank order.
pub fn enumerate(n: usize) -> Result<impl Iterator<Item = GameState>> {
    let count = state_count(n)?;
    Ok((0..count).map(move |r| decode_unchecked(r, n)))
}

/// Every deal with `n/2` cards per hand, in increasing rank order.
pub fn equal_split_deals(n: usize) -> Result<impl Iterator<Item = GameState>> {
    check_deck_size(n)?;
    if n % 2 != 0 {
        return Err(WarError::OddDeck(n));
    }
    let m = n as u64 + 1;
    let half = n as u64 / 2;
    Ok((0..FACTORIALS[n]).map(move |p| decode_unchecked(p * m + half, n)))
}

/// Ranks of all final states (one hand empty).
pub(crate) fn final_ranks(n: usize) -> impl Iterator<Item = u64> {
    let m = n as u64 + 1;
    (0..FACTORIALS[n]).flat_map(move |p| [p * m, p * m + n as u64])
}
