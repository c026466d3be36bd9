//! Finite metric graphs with exact rational edge lengths.

pub mod families;

use std::borrow::Cow;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rat, is_positive, lcm, rat, Rat, RatRepr};

pub type VertexId = usize;

/// Sentinel for unreachable entries of a scaled distance row.
pub(crate) const UNREACHABLE: i64 = i64::MAX;

/// Graphs above this many vertices never materialize the all-pairs table;
/// every query runs a fresh single-source search instead.
pub const ALL_PAIRS_LIMIT: usize = 4096;

/// JSON interchange form: `{"vertices": N, "edges": [[u, v, "p/q"], ...], "labels": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphData {
    pub vertices: usize,
    pub edges: Vec<(VertexId, VertexId, RatRepr)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<VertexId, String>,
}

/// Result of [`validate`]. Never an error; every defect is listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub components: usize,
    pub connected: bool,
    pub non_positive_lengths: Vec<(VertexId, VertexId, String)>,
    pub self_loops: Vec<VertexId>,
    pub out_of_range: Vec<(VertexId, VertexId)>,
    pub parallel_edges: usize,
}

impl Diagnostics {
    pub fn weights_ok(&self) -> bool {
        self.non_positive_lengths.is_empty() && self.self_loops.is_empty() && self.out_of_range.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.weights_ok() && self.connected
    }
}

/// Reports connectivity and weight sanity of raw graph data.
pub fn validate(data: &GraphData) -> Diagnostics {
    let n = data.vertices;
    let mut uf = UnionFind::new(n);
    let mut non_positive_lengths = Vec::new();
    let mut self_loops = Vec::new();
    let mut out_of_range = Vec::new();
    let mut seen = BTreeMap::new();
    let mut parallel_edges = 0;
    for &(u, v, RatRepr(len)) in &data.edges {
        if u >= n || v >= n {
            out_of_range.push((u, v));
            continue;
        }
        if u == v {
            self_loops.push(u);
        }
        if !is_positive(&len) {
            non_positive_lengths.push((u, v, format_rat(&len)));
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key, ()).is_some() {
            parallel_edges += 1;
        }
        uf.union(u, v);
    }
    let components = uf.count();
    Diagnostics {
        vertex_count: n,
        edge_count: data.edges.len(),
        components,
        connected: components <= 1,
        non_positive_lengths,
        self_loops,
        out_of_range,
        parallel_edges,
    }
}

/// A vertex sequence realizing the distance between its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeodesicPath {
    pub vertices: Vec<VertexId>,
    #[serde(serialize_with = "ser_rat")]
    pub total_length: Rat,
}

impl GeodesicPath {
    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("nonempty path")
    }
}

pub(crate) fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(r))
}

/// All-pairs shortest-path lengths, scaled by the graph's common denominator.
#[derive(Debug)]
pub struct DistanceTable {
    n: usize,
    scale: i64,
    data: Vec<i64>,
}

impl DistanceTable {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn row(&self, u: VertexId) -> &[i64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn raw(&self, u: VertexId, v: VertexId) -> i64 {
        self.data[u * self.n + v]
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> Rat {
        Rat::new(self.raw(u, v), self.scale)
    }

    pub fn max_raw(&self) -> i64 {
        self.data.iter().copied().max().unwrap_or(0)
    }
}

/// Immutable finite metric graph.
///
/// Parallel edges are collapsed to the shortest one at construction and
/// self-loops are rejected, so every query sees a simple weighted graph.
#[derive(Clone, Debug)]
pub struct MetricGraph {
    n: usize,
    edges: BTreeMap<(VertexId, VertexId), Rat>,
    adj: Vec<Vec<(VertexId, i64)>>,
    scale: i64,
    unit: bool,
    components: usize,
    labels: BTreeMap<VertexId, String>,
    table: OnceLock<Arc<DistanceTable>>,
}

impl PartialEq for MetricGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.labels == other.labels
    }
}

#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    n: usize,
    edges: BTreeMap<(VertexId, VertexId), Rat>,
    labels: BTreeMap<VertexId, String>,
}

impl GraphBuilder {
    pub fn new(vertex_count: usize) -> Self {
        GraphBuilder {
            n: vertex_count,
            ..Default::default()
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, length: Rat) -> Result<&mut Self> {
        if u >= self.n {
            return Err(Error::UnknownVertex(u));
        }
        if v >= self.n {
            return Err(Error::UnknownVertex(v));
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !is_positive(&length) {
            return Err(Error::InvalidLength {
                u,
                v,
                length: format_rat(&length),
            });
        }
        let key = (u.min(v), u.max(v));
        self.edges
            .entry(key)
            .and_modify(|l| {
                if length < *l {
                    *l = length
                }
            })
            .or_insert(length);
        Ok(self)
    }

    pub fn add_unit_edge(&mut self, u: VertexId, v: VertexId) -> Result<&mut Self> {
        self.add_edge(u, v, rat(1))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains_key(&(u.min(v), u.max(v)))
    }

    pub fn label(&mut self, v: VertexId, label: impl Into<String>) -> &mut Self {
        self.labels.insert(v, label.into());
        self
    }

    pub fn build(self) -> MetricGraph {
        MetricGraph::assemble(self.n, self.edges, self.labels)
    }
}

impl MetricGraph {
    fn assemble(n: usize, edges: BTreeMap<(VertexId, VertexId), Rat>, labels: BTreeMap<VertexId, String>) -> Self {
        let scale = edges.values().fold(1i64, |acc, l| lcm(acc, *l.denom()));
        let mut adj = vec![Vec::new(); n];
        let mut uf = UnionFind::new(n);
        for (&(u, v), len) in &edges {
            let w = len.numer() * (scale / len.denom());
            adj[u].push((v, w));
            adj[v].push((u, w));
            uf.union(u, v);
        }
        let unit = adj.iter().flatten().all(|&(_, w)| w == 1);
        MetricGraph {
            n,
            edges,
            adj,
            scale,
            unit,
            components: uf.count(),
            labels,
            table: OnceLock::new(),
        }
    }

    /// Unit-length graph from an edge list.
    pub fn unit(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut b = GraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_unit_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn from_data(data: &GraphData) -> Result<Self> {
        let mut b = GraphBuilder::new(data.vertices);
        for &(u, v, RatRepr(len)) in &data.edges {
            b.add_edge(u, v, len)?;
        }
        for (&v, l) in &data.labels {
            if v >= data.vertices {
                return Err(Error::UnknownVertex(v));
            }
            b.label(v, l.clone());
        }
        Ok(b.build())
    }

    /// Deterministic interchange form; edges sorted by `(u, v)` with `u < v`.
    pub fn to_data(&self) -> GraphData {
        GraphData {
            vertices: self.n,
            edges: self.edges.iter().map(|(&(u, v), &l)| (u, v, RatRepr(l))).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_data()).expect("graph data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let data: GraphData = serde_json::from_str(s)?;
        Self::from_data(&data)
    }

    pub fn diagnostics(&self) -> Diagnostics {
        validate(&self.to_data())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Rat)> + '_ {
        self.edges.iter().map(|(&(u, v), &l)| (u, v, l))
    }

    pub fn edge_length(&self, u: VertexId, v: VertexId) -> Option<Rat> {
        self.edges.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn neighbors(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[u].iter().map(|&(v, _)| v)
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.adj[u].len()
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, String> {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components <= 1
    }

    /// Common denominator of all edge lengths; scaled rows are in units of `1/scale`.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub(crate) fn to_rat(&self, raw: i64) -> Rat {
        Rat::new(raw, self.scale)
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected {
                components: self.components,
            })
        }
    }

    /// The all-pairs table, computed once and shared.
    pub fn distance_table(&self) -> Result<Arc<DistanceTable>> {
        self.require_connected()?;
        if let Some(t) = self.table.get() {
            return Ok(t.clone());
        }
        if self.n > ALL_PAIRS_LIMIT {
            return Err(Error::budget("all-pairs distance table", self.n, ALL_PAIRS_LIMIT));
        }
        let mut data = Vec::with_capacity(self.n * self.n);
        for u in 0..self.n {
            data.extend(self.single_source(u));
        }
        let table = Arc::new(DistanceTable {
            n: self.n,
            scale: self.scale,
            data,
        });
        Ok(self.table.get_or_init(|| table).clone())
    }

    /// Scaled distances from `u` to every vertex.
    pub(crate) fn row(&self, u: VertexId) -> Result<Cow<'_, [i64]>> {
        self.check_vertex(u)?;
        self.require_connected()?;
        if self.n <= ALL_PAIRS_LIMIT {
            self.distance_table()?;
            let t = self.table.get().expect("table initialized above");
            return Ok(Cow::Borrowed(t.row(u)));
        }
        Ok(Cow::Owned(self.single_source(u)))
    }

    pub(crate) fn raw_distance(&self, u: VertexId, v: VertexId) -> Result<i64> {
        self.check_vertex(v)?;
        Ok(self.row(u)?[v])
    }

    /// Exact distances from `u` to every vertex.
    pub fn distances_from(&self, u: VertexId) -> Result<Vec<Rat>> {
        Ok(self.row(u)?.iter().map(|&d| self.to_rat(d)).collect())
    }

    /// Shortest-path search from `source` that tolerates disconnection.
    pub(crate) fn single_source(&self, source: VertexId) -> Vec<i64> {
        let mut dist = vec![UNREACHABLE; self.n];
        dist[source] = 0;
        if self.unit {
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                let du = dist[u];
                for &(v, _) in &self.adj[u] {
                    if dist[v] == UNREACHABLE {
                        dist[v] = du + 1;
                        queue.push_back(v);
                    }
                }
            }
            return dist;
        }
        let mut heap = BinaryHeap::from([Reverse((0i64, source))]);
        while let Some(Reverse((du, u))) = heap.pop() {
            if du > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let dv = du + w;
                if dv < dist[v] {
                    dist[v] = dv;
                    heap.push(Reverse((dv, v)));
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Result<Rat> {
        Ok(self.to_rat(self.raw_distance(u, v)?))
    }

    /// The lexicographically smallest vertex sequence among all shortest paths.
    pub fn geodesic(&self, u: VertexId, v: VertexId) -> Result<GeodesicPath> {
        self.check_vertex(u)?;
        let to_target = self.row(v)?;
        let mut vertices = vec![u];
        let mut cur = u;
        while cur != v {
            let need = to_target[cur];
            let next = self.adj[cur]
                .iter()
                .filter(|&&(w, len)| len + to_target[w] == need)
                .map(|&(w, _)| w)
                .min()
                .expect("a connected graph has a next geodesic step");
            vertices.push(next);
            cur = next;
        }
        Ok(GeodesicPath {
            vertices,
            total_length: self.to_rat(to_target[u]),
        })
    }

    /// `{w : d(u,w) + d(w,v) = d(u,v)}`, sorted.
    pub fn interval(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
        let du = self.row(u)?;
        let dv = self.row(v)?;
        let total = du[v];
        Ok((0..self.n).filter(|&w| du[w] + dv[w] == total).collect())
    }

    /// `(a.b)_base = ½ (d(base,a) + d(base,b) − d(a,b))`.
    pub fn gromov_product(&self, base: VertexId, a: VertexId, b: VertexId) -> Result<Rat> {
        let dz = self.row(base)?;
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        let dab = self.raw_distance(a, b)?;
        Ok(Rat::new(dz[a] + dz[b] - dab, 2 * self.scale))
    }

    /// Largest distance between two vertices of `set`.
    pub fn diameter_of(&self, set: &[VertexId]) -> Result<Rat> {
        let mut best = 0;
        for (i, &a) in set.iter().enumerate() {
            let row = self.row(a)?;
            for &b in &set[i + 1..] {
                self.check_vertex(b)?;
                best = best.max(row[b]);
            }
        }
        Ok(self.to_rat(best))
    }

    pub fn diameter(&self) -> Result<Rat> {
        let all: Vec<_> = (0..self.n).collect();
        self.diameter_of(&all)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
