//! Standard graph families used by tests, benches and bundled scenarios.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GraphBuilder, MetricGraph, VertexId};

pub fn path(n: usize) -> MetricGraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    MetricGraph::unit(n, &edges).expect("valid path")
}

pub fn cycle(n: usize) -> MetricGraph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    MetricGraph::unit(n, &edges).expect("valid cycle")
}

/// Vertex 0 joined to `leaves` leaves.
pub fn star(leaves: usize) -> MetricGraph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    MetricGraph::unit(leaves + 1, &edges).expect("valid star")
}

pub fn complete(n: usize) -> MetricGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    MetricGraph::unit(n, &edges).expect("valid complete graph")
}

pub fn grid(rows: usize, cols: usize) -> MetricGraph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    MetricGraph::unit(rows * cols, &edges).expect("valid grid")
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> MetricGraph {
    let edges = random_tree_edges(n, &mut ChaCha8Rng::seed_from_u64(seed));
    MetricGraph::unit(n, &edges).expect("valid tree")
}

pub(crate) fn random_tree_edges(n: usize, rng: &mut impl Rng) -> Vec<(VertexId, VertexId)> {
    (1..n).map(|i| (rng.gen_range(0..i), i)).collect()
}

/// Connected unit graph: a random tree plus `extra` random chords.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> MetricGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n);
    for (u, v) in random_tree_edges(n, &mut rng) {
        b.add_unit_edge(u, v).expect("tree edge");
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                b.add_unit_edge(u, v).expect("chord");
            }
        }
    }
    b.build()
}

/// Like [`random_connected`] but with lengths drawn from `{1/2, 1, 3/2, 2}`.
pub fn random_weighted(n: usize, extra: usize, seed: u64) -> MetricGraph {
    let lengths = [
        crate::rational::ratio(1, 2),
        crate::rational::rat(1),
        crate::rational::ratio(3, 2),
        crate::rational::rat(2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n);
    for (u, v) in random_tree_edges(n, &mut rng) {
        b.add_edge(u, v, *lengths.choose(&mut rng).unwrap()).expect("tree edge");
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                b.add_edge(u, v, *lengths.choose(&mut rng).unwrap()).expect("chord");
            }
        }
    }
    b.build()
}
