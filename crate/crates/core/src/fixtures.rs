//! Frozen reference inputs shipped with the crate.

use crate::classic::ClassicState;
use crate::cycles::{CycleCertificate, TwoOutcomeCertificate};

/// A 26/26 deal whose rank pattern repeats every 26 moves under
/// seat-left-first placement, with no war along the way.
pub const CLASSIC_CYCLE_52: &str = include_str!("../fixtures/v1/classic_cycle_52.txt");
pub const CLASSIC_CYCLE_52_JSON: &str = include_str!("../fixtures/v1/classic_cycle_52.json");
/// First never-ending equal-split deal for n = 6, standard rule, seat-left-first.
pub const MODEL_CYCLE_N6_JSON: &str = include_str!("../fixtures/v1/model_cycle_n6.json");
/// First n = 4 deal either player can win under the cyclic rule.
pub const TWO_OUTCOME_N4_JSON: &str = include_str!("../fixtures/v1/two_outcome_n4.json");

pub fn classic_cycle_deal() -> ClassicState {
    CLASSIC_CYCLE_52.parse().expect("bundled fixture parses")
}

pub fn model_cycle_n6() -> CycleCertificate {
    serde_json::from_str(MODEL_CYCLE_N6_JSON).expect("bundled fixture parses")
}

pub fn two_outcome_n4() -> TwoOutcomeCertificate {
    serde_json::from_str(TWO_OUTCOME_N4_JSON).expect("bundled fixture parses")
}
