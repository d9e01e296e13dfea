//! Reachability routines on a five-vertex hand-built graph.

use war_core::graph::{reverse_bfs, wandering_closure};
use war_core::StateGraph;

/// Vertices a..e are 0..4; `a` is the only final vertex.
struct Toy {
    edges: Vec<(u64, u64)>,
}

impl Toy {
    fn new(extra: &[(u64, u64)]) -> Self {
        // b -> a, b -> c, c -> d, d -> e, e -> c
        let mut edges = vec![(1, 0), (1, 2), (2, 3), (3, 4), (4, 2)];
        edges.extend_from_slice(extra);
        Toy { edges }
    }
}

impl StateGraph for Toy {
    fn vertex_count(&self) -> u64 {
        5
    }
    fn is_final(&self, v: u64) -> bool {
        v == 0
    }
    fn final_vertices(&self) -> Vec<u64> {
        vec![0]
    }
    fn for_each_successor(&self, v: u64, f: &mut dyn FnMut(u64)) {
        self.edges.iter().filter(|e| e.0 == v).for_each(|e| f(e.1));
    }
    fn for_each_predecessor(&self, v: u64, f: &mut dyn FnMut(u64)) {
        self.edges.iter().filter(|e| e.1 == v).for_each(|e| f(e.0));
    }
}

#[test]
fn cycle_without_exit_is_wandering() {
    let g = Toy::new(&[]);
    let r = reverse_bfs(&g, true);
    let attaining: Vec<bool> = (0..5).map(|v| r.attaining.contains(v)).collect();
    assert_eq!(attaining, [true, true, false, false, false]);
    assert_eq!(r.wandering_count(), 3);
    assert_eq!(r.distance(1), Some(1));
    assert_eq!(r.distance(3), None);
    assert!(wandering_closure(&g, &r.attaining));
}

#[test]
fn exit_edge_makes_the_graph_absorbing() {
    let g = Toy::new(&[(4, 0)]);
    let r = reverse_bfs(&g, true);
    assert_eq!(r.wandering_count(), 0);
    // c -> d -> e -> a
    assert_eq!(r.distance(4), Some(1));
    assert_eq!(r.distance(3), Some(2));
    assert_eq!(r.distance(2), Some(3));
    assert_eq!(r.max_distance, 3);
}

#[test]
fn closure_check_detects_an_escape() {
    let g = Toy::new(&[]);
    let r = reverse_bfs(&g, false);
    // pretend d were attaining: c then has an edge out of the wandering set
    r.attaining.insert(3);
    assert!(!wandering_closure(&g, &r.attaining));
}
