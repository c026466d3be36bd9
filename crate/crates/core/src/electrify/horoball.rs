use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MetricGraph, VertexId};
use crate::rational::rat;

/// A base graph with a truncated combinatorial horoball over each set.
#[derive(Clone, Debug)]
pub struct HoroballGraph {
    pub graph: MetricGraph,
    pub layers: u32,
    /// `(set index, base vertex, layer)` for every added vertex; layer 0 is the
    /// base vertex itself and is not listed.
    pub layer_vertices: BTreeMap<(usize, VertexId, u32), VertexId>,
}

#[derive(Serialize)]
struct Metadata {
    layers: u32,
}

impl HoroballGraph {
    /// Layer `k` copy of base vertex `a` over set `set`; layer 0 is `a`.
    pub fn vertex(&self, set: usize, a: VertexId, k: u32) -> Option<VertexId> {
        if k == 0 {
            return Some(a);
        }
        self.layer_vertices.get(&(set, a, k)).copied()
    }

    /// `{"layers": depth}`.
    pub fn metadata_json(&self) -> String {
        serde_json::to_string(&Metadata { layers: self.layers }).expect("metadata serializes")
    }
}

/// Stacks layers `A × {1..depth}` over each set: unit vertical edges between
/// consecutive layers, and a unit edge between `(a,k)` and `(b,k)` whenever
/// `d(a,b) ≤ 2^k` in the base.
pub fn attach_horoballs(g: &MetricGraph, sets: &[Vec<VertexId>], depth: u32) -> Result<HoroballGraph> {
    if depth < 1 {
        return Err(Error::InvalidArgument("horoball depth must be at least 1".into()));
    }
    if depth > 40 {
        return Err(Error::InvalidArgument(format!("horoball depth {depth} is too large")));
    }
    g.require_connected()?;
    let mut b = GraphBuilder::new(g.vertex_count());
    for (u, v, len) in g.edges() {
        b.add_edge(u, v, len)?;
    }
    let mut layer_vertices = BTreeMap::new();
    for (s, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptySet("horoball set"));
        }
        let mut members = set.clone();
        members.sort_unstable();
        members.dedup();
        let rows = members
            .iter()
            .map(|&a| g.distances_from(a))
            .collect::<Result<Vec<_>>>()?;
        for k in 1..=depth {
            for &a in &members {
                let v = b.add_vertex();
                b.label(v, format!("horoball:{s}:{a}:{k}"));
                layer_vertices.insert((s, a, k), v);
                let below = if k == 1 { a } else { layer_vertices[&(s, a, k - 1)] };
                b.add_unit_edge(below, v)?;
            }
            let reach = rat(1i64 << k);
            for (i, &a) in members.iter().enumerate() {
                for &c in &members[i + 1..] {
                    if rows[i][c] <= reach {
                        b.add_unit_edge(layer_vertices[&(s, a, k)], layer_vertices[&(s, c, k)])?;
                    }
                }
            }
        }
    }
    Ok(HoroballGraph {
        graph: b.build(),
        layers: depth,
        layer_vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::path;

    #[test]
    fn depth_one_joins_points_at_distance_two() {
        let h = attach_horoballs(&path(3), &[vec![0, 2]], 1).unwrap();
        let (a1, b1) = (h.vertex(0, 0, 1).unwrap(), h.vertex(0, 2, 1).unwrap());
        assert_eq!(h.graph.edge_length(a1, b1), Some(rat(1)));
        assert_eq!(h.metadata_json(), r#"{"layers":1}"#);
    }

    #[test]
    fn singleton_grows_a_hanging_path() {
        let h = attach_horoballs(&path(2), &[vec![1]], 4).unwrap();
        assert_eq!(h.graph.vertex_count(), 6);
        assert_eq!(h.graph.distance(0, h.vertex(0, 1, 4).unwrap()).unwrap(), rat(5));
        for k in 1..=4 {
            assert_eq!(h.graph.degree(h.vertex(0, 1, k).unwrap()), if k == 4 { 1 } else { 2 });
        }
    }

    #[test]
    fn depth_zero_is_rejected() {
        assert!(attach_horoballs(&path(2), &[vec![0]], 0).is_err());
    }

    /// Floyd–Warshall on an independently assembled adjacency matrix.
    fn layered_oracle(n: usize, members: &[usize], depth: u32) -> Vec<Vec<u64>> {
        let m = members.len();
        let total = n + m * depth as usize;
        let inf = u64::MAX / 4;
        let mut d = vec![vec![inf; total]; total];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        fn join(d: &mut [Vec<u64>], a: usize, b: usize) {
            d[a][b] = 1;
            d[b][a] = 1;
        }
        for i in 1..n {
            join(&mut d, i - 1, i);
        }
        let id = |j: usize, k: u32| {
            if k == 0 {
                members[j]
            } else {
                n + (k as usize - 1) * m + j
            }
        };
        for k in 1..=depth {
            for j in 0..m {
                join(&mut d, id(j, k - 1), id(j, k));
                for l in j + 1..m {
                    if members[j].abs_diff(members[l]) as u64 <= 1 << k {
                        join(&mut d, id(j, k), id(l, k));
                    }
                }
            }
        }
        for via in 0..total {
            for a in 0..total {
                for b in 0..total {
                    let alt = d[a][via] + d[via][b];
                    if alt < d[a][b] {
                        d[a][b] = alt;
                    }
                }
            }
        }
        d
    }

    #[test]
    fn horoball_distance_matches_layered_oracle() {
        let g = path(9);
        for members in [vec![0, 8], (0..9).collect::<Vec<_>>(), vec![0, 3, 8]] {
            let h = attach_horoballs(&g, std::slice::from_ref(&members), 4).unwrap();
            let oracle = layered_oracle(9, &members, 4);
            assert_eq!(h.graph.distance(0, 8).unwrap(), rat(oracle[0][8] as i64), "{members:?}");
        }
        // Up three layers, across, down three.
        let h = attach_horoballs(&g, &[vec![0, 8]], 4).unwrap();
        assert_eq!(h.graph.distance(0, 8).unwrap(), rat(7));
    }
}
