//! Exhaustive and probabilistic analysis of the card game of War.
//!
//! The model game uses one suit of `n` distinct cards. Every way of splitting
//! the deck into two ordered hands is a vertex of a finite directed graph
//! whose edges are the two ways a trick winner can return the cards. This
//! crate enumerates that graph, classifies states as attaining or wandering,
//! solves the absorbing Markov chain for expected game length, searches for
//! never-ending games under fixed placement policies, and simulates the
//! standard 52-card game with wars.

pub mod bitset;
pub mod classic;
pub mod cycles;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod markov;
pub mod rng;
pub mod rules;
pub mod state_space;

pub use classic::{
    monte_carlo_classic, resolve_classic_trick, simulate_classic, verify_value_cycle, ClassicCard, ClassicState,
    ClassicSummary, GameRecord, Suit, TrickReport, ValueCycleReport, WarConfig,
};
pub use cycles::{
    find_cycles, find_cycles_in, simulate_policy, two_outcome_deals, verify_cycle, CycleCertificate, DealScope,
    Trajectory, TwoOutcomeCertificate,
};
pub use error::{Result, WarError};
pub use graph::{
    attaining_set, degree_audit, subgraph_monotonicity, wandering_closure_check, DegreeAudit, DistanceMap, EdgeFilter,
    GameGraph, PathStep, PathWitness, ReachabilityReport, StateGraph,
};
pub use markov::{
    decay_certificate, expected_absorption, monte_carlo_length, tail_probability, transition_probability,
    AbsorptionSolution, DecayCertificate, InitialDistribution, LengthSummary, PlacementProbabilities, SolverMethod,
    SolverOptions, TailCurve,
};
pub use rules::{Card, ComparisonRule, DeckSpec, DeterministicPolicy, GameState, PlacementOrder, Side, MAX_DECK};
pub use state_space::{decode, encode, enumerate, equal_split_deals, state_count, StateIndex, StateSpaceStats};
