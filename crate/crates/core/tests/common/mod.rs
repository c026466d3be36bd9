//! Brute-force oracles that share no code with the library's distance kernels.
#![allow(dead_code)]

use std::collections::BTreeSet;

use conelab_core::{rat, GraphBuilder, MetricGraph, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Edge list with small integer lengths; also buildable as a `MetricGraph`.
#[derive(Clone, Debug)]
pub struct Small {
    pub n: usize,
    pub edges: Vec<(usize, usize, i64)>,
}

impl Small {
    pub fn graph(&self) -> MetricGraph {
        let mut b = GraphBuilder::new(self.n);
        for &(u, v, w) in &self.edges {
            b.add_edge(u, v, rat(w)).unwrap();
        }
        b.build()
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }
}

/// Random connected graph: a random spanning tree plus `extra` random edges,
/// lengths in `1..=max_len`.
pub fn random_small(n: usize, extra: usize, max_len: i64, seed: u64) -> Small {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        seen.insert((u, v));
        edges.push((u, v, rng.gen_range(1..=max_len)));
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (u, v) = (a.min(b), a.max(b));
        if u != v && seen.insert((u, v)) {
            edges.push((u, v, rng.gen_range(1..=max_len)));
        }
    }
    Small { n, edges }
}

pub const INF: i64 = i64::MAX / 4;

pub fn floyd_warshall(s: &Small) -> Vec<Vec<i64>> {
    let mut d = vec![vec![INF; s.n]; s.n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v, w) in &s.edges {
        d[u][v] = d[u][v].min(w);
        d[v][u] = d[v][u].min(w);
    }
    for k in 0..s.n {
        for i in 0..s.n {
            for j in 0..s.n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Every shortest path from `u` to `v`, by depth-first enumeration.
pub fn all_geodesics(s: &Small, d: &[Vec<i64>], u: usize, v: usize) -> Vec<Vec<usize>> {
    let adj = s.adjacency();
    let mut out = Vec::new();
    let mut path = vec![u];
    fn walk(
        adj: &[Vec<(usize, i64)>],
        d: &[Vec<i64>],
        v: usize,
        walked: i64,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let cur = *path.last().unwrap();
        if cur == v {
            out.push(path.clone());
            return;
        }
        for &(w, len) in &adj[cur] {
            if walked + len + d[w][v] == d[path[0]][v] {
                path.push(w);
                walk(adj, d, v, walked + len, path, out);
                path.pop();
            }
        }
    }
    walk(&adj, d, v, 0, &mut path, &mut out);
    out
}

/// Union of the vertices of all geodesics from `u` to `v`.
pub fn geodesic_union(s: &Small, d: &[Vec<i64>], u: usize, v: usize) -> Vec<usize> {
    let set: BTreeSet<usize> = all_geodesics(s, d, u, v).into_iter().flatten().collect();
    set.into_iter().collect()
}

/// Largest distance from a vertex of any geodesic between points of `set`
/// back to `set`.
pub fn quasiconvexity_brute(s: &Small, d: &[Vec<i64>], set: &[usize]) -> i64 {
    let mut best = 0;
    for &a in set {
        for &b in set {
            for path in all_geodesics(s, d, a, b) {
                for w in path {
                    let to_set = set.iter().map(|&x| d[w][x]).min().unwrap();
                    best = best.max(to_set);
                }
            }
        }
    }
    best
}

/// Vertex-level slim-triangle constant over every choice of geodesic sides:
/// the largest distance from a vertex of one side to the union of the two
/// other sides, maximized over all triangles and all side choices.
pub fn slim_delta_brute(s: &Small, d: &[Vec<i64>]) -> i64 {
    let n = s.n;
    let geos: Vec<Vec<Vec<Vec<usize>>>> = (0..n)
        .map(|u| (0..n).map(|v| all_geodesics(s, d, u, v)).collect())
        .collect();
    // far[p][y][z]: over geodesics from y to z, the largest distance from p
    // to the geodesic
    let mut far = vec![vec![vec![0i64; n]; n]; n];
    for p in 0..n {
        for y in 0..n {
            for z in 0..n {
                far[p][y][z] = geos[y][z]
                    .iter()
                    .map(|g| g.iter().map(|&q| d[p][q]).min().unwrap())
                    .max()
                    .unwrap();
            }
        }
    }
    let mut best = 0;
    for x in 0..n {
        for y in 0..n {
            let side: BTreeSet<usize> = geos[x][y].iter().flatten().copied().collect();
            for z in 0..n {
                for &p in &side {
                    best = best.max(far[p][y][z].min(far[p][z][x]));
                }
            }
        }
    }
    best
}

pub fn to_rat(x: i64) -> Rat {
    rat(x)
}

/// Reduces a word in a free product of cyclic groups by a stack.
pub fn reduce_cyclic_word(orders: &[u32], word: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let norm = |g: usize, e: i64| -> i64 {
        let m = orders[g] as i64;
        if m == 0 {
            return e;
        }
        let r = e.rem_euclid(m);
        if 2 * r > m {
            r - m
        } else {
            r
        }
    };
    let mut stack: Vec<(usize, i64)> = Vec::new();
    for &(g, e) in word {
        match stack.last_mut() {
            Some(top) if top.0 == g => {
                let e2 = norm(g, top.1 + e);
                if e2 == 0 {
                    stack.pop();
                } else {
                    top.1 = e2;
                }
            }
            _ => {
                let e2 = norm(g, e);
                if e2 != 0 {
                    stack.push((g, e2));
                }
            }
        }
    }
    stack
}

pub fn random_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rng_pick<R: Rng>(rng: &mut R, n: usize) -> usize {
    rng.gen_range(0..n)
}
