//! Rewrites the JSON fixtures under `fixtures/v1` from the current code.

use std::fs;
use std::path::Path;

use serde_json::json;
use war_core::{find_cycles, two_outcome_deals, ComparisonRule, DeterministicPolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/v1");

    let cycles = find_cycles(6, DeterministicPolicy::SeatLeftFirst, ComparisonRule::Standard)?;
    let first = cycles.first().ok_or("no n = 6 cycle found")?;
    fs::write(dir.join("model_cycle_n6.json"), serde_json::to_string_pretty(first)? + "\n")?;

    let two = two_outcome_deals(4, ComparisonRule::CyclicLowBeatsHigh)?;
    let first = two.first().ok_or("no n = 4 two-outcome deal")?;
    fs::write(dir.join("two_outcome_n4.json"), serde_json::to_string_pretty(first)? + "\n")?;

    let deal = fs::read_to_string(dir.join("classic_cycle_52.txt"))?;
    let deal: war_core::ClassicState = deal.parse()?;
    let doc = json!({
        "deal": deal,
        "policy": DeterministicPolicy::SeatLeftFirst,
        "face_down_count": 1,
        "period_in_values": 26,
    });
    fs::write(dir.join("classic_cycle_52.json"), serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(())
}
