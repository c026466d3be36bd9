use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ser_rat, GraphBuilder, GraphData, MetricGraph, VertexId};
use crate::metric::{
    self, fit_quasi_params, hausdorff_distance, quasiconvexity_constant, DeltaMode, DeltaReport, DottedPath,
    QuasiParams, DEFAULT_DELTA_BUDGET,
};
use crate::rational::{rat, Rat};

/// A coned subset of the base graph, keyed by a caller-chosen id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSet {
    pub id: usize,
    pub members: Vec<VertexId>,
}

impl ConeSet {
    pub fn new(id: usize, members: impl IntoIterator<Item = VertexId>) -> Self {
        let mut members: Vec<_> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        ConeSet { id, members }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Numbers sets `0, 1, ...` in order.
pub fn indexed_sets(sets: &[Vec<VertexId>]) -> Vec<ConeSet> {
    sets.iter()
        .enumerate()
        .map(|(i, s)| ConeSet::new(i, s.iter().copied()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeOffOptions {
    /// How the base hyperbolicity constant is measured.
    pub delta: DeltaMode,
    /// Number of seeded base pairs whose extended geodesics are de-electrified
    /// to calibrate the dotted-path constant.
    pub calibration_pairs: usize,
    pub seed: u64,
}

impl Default for ConeOffOptions {
    fn default() -> Self {
        ConeOffOptions {
            delta: DeltaMode::Auto {
                budget: DEFAULT_DELTA_BUDGET,
                count: 200_000,
                seed: 0,
            },
            calibration_pairs: 64,
            seed: 0,
        }
    }
}

/// Measured constants of a cone-off: base hyperbolicity, the largest
/// quasiconvexity constant of a coned set, and the largest step of a
/// de-electrified calibration path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeMetadata {
    pub base_delta: DeltaReport,
    #[serde(serialize_with = "ser_rat")]
    pub max_set_qc: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub dotted_step: Rat,
    pub calibration_pairs: usize,
    pub calibration_seed: u64,
}

#[derive(Clone, Debug)]
pub struct ConedGraph {
    base: MetricGraph,
    sets: Vec<ConeSet>,
    cone_vertices: BTreeMap<usize, VertexId>,
    extended: MetricGraph,
    metadata: ConeMetadata,
}

/// The `k`-th set's cone vertex is `base.vertex_count() + k`.
fn build_extended(base: &MetricGraph, sets: &[ConeSet]) -> Result<(MetricGraph, BTreeMap<usize, VertexId>)> {
    let n = base.vertex_count();
    let mut b = GraphBuilder::new(n);
    for (u, v, len) in base.edges() {
        b.add_edge(u, v, len)?;
    }
    for (&v, l) in base.labels() {
        b.label(v, l.clone());
    }
    let mut cones = BTreeMap::new();
    for set in sets {
        if set.members.is_empty() {
            return Err(Error::EmptySet("coned set"));
        }
        if let Some(&bad) = set.members.iter().find(|&&v| v >= n) {
            return Err(Error::UnknownVertex(bad));
        }
        if cones.contains_key(&set.id) {
            return Err(Error::IndexMismatch(format!("duplicate cone set id {}", set.id)));
        }
        let c = b.add_vertex();
        b.label(c, format!("cone:{}", set.id));
        for &a in &set.members {
            b.add_unit_edge(a, c)?;
        }
        cones.insert(set.id, c);
    }
    Ok((b.build(), cones))
}

/// The extended graph alone, without calibration measurements.
pub fn cone_extension(base: &MetricGraph, sets: &[ConeSet]) -> Result<MetricGraph> {
    build_extended(base, sets).map(|(g, _)| g)
}

/// A random tree with balls coned off, plus a segment to measure.
#[derive(Clone, Debug)]
pub struct ConedTree {
    pub tree: MetricGraph,
    pub sets: Vec<ConeSet>,
    pub segment: (VertexId, VertexId),
}

/// Random recursive tree on `n` vertices with `cones` balls of radius
/// `1..=max_radius` around uniform centres and a uniform segment, all drawn
/// from one seeded stream.
pub fn coned_tree(n: usize, cones: usize, max_radius: usize, seed: u64) -> Result<ConedTree> {
    if n == 0 || max_radius == 0 {
        return Err(Error::InvalidArgument(
            "coned tree needs n >= 1 and max_radius >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = MetricGraph::unit(n, &crate::graph::families::random_tree_edges(n, &mut rng))?;
    let mut sets = Vec::with_capacity(cones);
    for id in 0..cones {
        let center = rng.gen_range(0..n);
        let r = rat(rng.gen_range(1..=max_radius) as i64);
        let row = tree.distances_from(center)?;
        sets.push(ConeSet::new(id, (0..n).filter(|&v| row[v] <= r)));
    }
    let segment = (rng.gen_range(0..n), rng.gen_range(0..n));
    Ok(ConedTree { tree, sets, segment })
}

/// Cones off each set with a fresh vertex joined by unit edges to its members.
pub fn cone_off(g: &MetricGraph, sets: &[Vec<VertexId>]) -> Result<ConedGraph> {
    ConedGraph::new(g, indexed_sets(sets), ConeOffOptions::default())
}

/// The canonical length-2 path `x – c – x'` through a cone vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElectricPath {
    pub set_id: usize,
    pub cone_vertex: VertexId,
    pub vertices: [VertexId; 3],
    #[serde(serialize_with = "ser_rat")]
    pub length: Rat,
}

/// JSON form: the base graph fields plus `"cones"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConedGraphData {
    #[serde(flatten)]
    pub base: GraphData,
    pub cones: Vec<ConeSet>,
}

impl ConedGraph {
    pub fn new(g: &MetricGraph, sets: Vec<ConeSet>, opts: ConeOffOptions) -> Result<Self> {
        g.require_connected()?;
        let (extended, cone_vertices) = build_extended(g, &sets)?;
        let base_delta = metric::delta_four_point(g, opts.delta)?;
        let mut max_set_qc = Rat::zero();
        for set in &sets {
            max_set_qc = max_set_qc.max(quasiconvexity_constant(g, &set.members)?);
        }
        let mut cg = ConedGraph {
            base: g.clone(),
            sets,
            cone_vertices,
            extended,
            metadata: ConeMetadata {
                base_delta,
                max_set_qc,
                dotted_step: Rat::zero(),
                calibration_pairs: opts.calibration_pairs,
                calibration_seed: opts.seed,
            },
        };
        let n = g.vertex_count();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut step = Rat::zero();
        for _ in 0..opts.calibration_pairs {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let route = cg.extended.geodesic(x, y)?;
            step = step.max(cg.de_electrify(&route.vertices)?.step_bound);
        }
        cg.metadata.dotted_step = step;
        Ok(cg)
    }

    pub fn from_data(data: &ConedGraphData, opts: ConeOffOptions) -> Result<Self> {
        let base = MetricGraph::from_data(&data.base)?;
        let sets = data
            .cones
            .iter()
            .map(|s| ConeSet::new(s.id, s.members.iter().copied()))
            .collect();
        Self::new(&base, sets, opts)
    }

    pub fn to_data(&self) -> ConedGraphData {
        ConedGraphData {
            base: self.base.to_data(),
            cones: self.sets.clone(),
        }
    }

    pub fn base(&self) -> &MetricGraph {
        &self.base
    }

    pub fn extended(&self) -> &MetricGraph {
        &self.extended
    }

    pub fn sets(&self) -> &[ConeSet] {
        &self.sets
    }

    pub fn metadata(&self) -> &ConeMetadata {
        &self.metadata
    }

    pub fn set(&self, id: usize) -> Result<&ConeSet> {
        self.sets
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| Error::IndexMismatch(format!("no cone set with id {id}")))
    }

    pub fn cone_vertex(&self, id: usize) -> Result<VertexId> {
        self.cone_vertices
            .get(&id)
            .copied()
            .ok_or_else(|| Error::IndexMismatch(format!("no cone set with id {id}")))
    }

    pub fn is_cone_vertex(&self, v: VertexId) -> bool {
        v >= self.base.vertex_count() && v < self.extended.vertex_count()
    }

    fn set_of_cone(&self, c: VertexId) -> &ConeSet {
        &self.sets[c - self.base.vertex_count()]
    }

    pub fn electric_path(&self, set_id: usize, x: VertexId, x2: VertexId) -> Result<ElectricPath> {
        let set = self.set(set_id)?;
        for v in [x, x2] {
            if !set.contains(v) {
                return Err(Error::NotAMember { set: set_id, vertex: v });
            }
        }
        let c = self.cone_vertex(set_id)?;
        Ok(ElectricPath {
            set_id,
            cone_vertex: c,
            vertices: [x, c, x2],
            length: rat(2),
        })
    }

    /// Replaces every hop `x – c – x'` by the nearest-point projection onto the
    /// coned set of the tie-break base geodesic from `x` to `x'`.
    pub fn de_electrify(&self, path: &[VertexId]) -> Result<DottedPath> {
        let (first, last) = match (path.first(), path.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(Error::InvalidPath("empty path".into())),
        };
        for v in [first, last] {
            self.extended.check_vertex(v)?;
            if self.is_cone_vertex(v) {
                return Err(Error::InvalidPath(format!("endpoint {v} is a cone vertex")));
            }
        }
        for w in path.windows(2) {
            self.extended.check_vertex(w[1])?;
            if w[0] != w[1] && self.extended.edge_length(w[0], w[1]).is_none() {
                return Err(Error::InvalidPath(format!("{} and {} are not adjacent", w[0], w[1])));
            }
        }
        let mut out = vec![first];
        let mut i = 1;
        while i < path.len() {
            let v = path[i];
            if !self.is_cone_vertex(v) {
                out.push(v);
                i += 1;
                continue;
            }
            let (x, x2) = (path[i - 1], path[i + 1]);
            let members = &self.set_of_cone(v).members;
            let geo = self.base.geodesic(x, x2)?;
            for &w in &geo.vertices[1..] {
                let row = self.base.row(w)?;
                out.push(metric::projection_with_row(&row, members));
            }
            i += 2;
        }
        DottedPath::new(&self.base, out)
    }

    /// Extended-metric Hausdorff distance between the base and extended
    /// tie-break geodesics of every listed pair.
    pub fn fellow_travel_stats(&self, pairs: &[(VertexId, VertexId)]) -> Result<Vec<FellowTravelRow>> {
        let n = self.base.vertex_count();
        pairs
            .iter()
            .map(|&(u, v)| {
                for w in [u, v] {
                    if w >= n {
                        return Err(Error::UnknownVertex(w));
                    }
                }
                let base_geo = self.base.geodesic(u, v)?;
                let ext_geo = self.extended.geodesic(u, v)?;
                Ok(FellowTravelRow {
                    u,
                    v,
                    base_distance: base_geo.total_length,
                    extended_distance: ext_geo.total_length,
                    hausdorff: hausdorff_distance(&self.extended, &base_geo.vertices, &ext_geo.vertices)?,
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FellowTravelRow {
    pub u: VertexId,
    pub v: VertexId,
    #[serde(serialize_with = "ser_rat")]
    pub base_distance: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub extended_distance: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub hausdorff: Rat,
}

/// Every unordered pair `u < v` of `0..n`.
pub fn all_pairs(n: usize) -> Vec<(VertexId, VertexId)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeComparison {
    /// Hausdorff distance of each matched pair of sets, by id.
    pub set_distances: Vec<(usize, String)>,
    #[serde(serialize_with = "ser_rat")]
    pub max_hausdorff: Rat,
    /// Fit of the identity-on-base map between the two extended metrics.
    pub params: QuasiParams,
}

/// Compares the cone-offs along two families of sets indexed by the same ids.
pub fn compare_cone_offs(g: &MetricGraph, sets_a: &[ConeSet], sets_b: &[ConeSet]) -> Result<ConeComparison> {
    let ids = |s: &[ConeSet]| {
        let mut v: Vec<_> = s.iter().map(|c| c.id).collect();
        v.sort_unstable();
        v
    };
    if ids(sets_a) != ids(sets_b) {
        return Err(Error::IndexMismatch(format!("{:?} vs {:?}", ids(sets_a), ids(sets_b))));
    }
    g.require_connected()?;
    let (ext_a, _) = build_extended(g, sets_a)?;
    let (ext_b, _) = build_extended(g, sets_b)?;
    let mut set_distances = Vec::new();
    let mut max_hausdorff = Rat::zero();
    let mut sorted_a = sets_a.to_vec();
    sorted_a.sort_by_key(|s| s.id);
    for a in &sorted_a {
        let b = sets_b.iter().find(|s| s.id == a.id).expect("ids match");
        let hd = hausdorff_distance(g, &a.members, &b.members)?;
        max_hausdorff = max_hausdorff.max(hd);
        set_distances.push((a.id, crate::rational::format_rat(&hd)));
    }
    let n = g.vertex_count();
    let mut pairs = Vec::new();
    let mut diameter = Rat::zero();
    for u in 0..n {
        let ra = ext_a.distances_from(u)?;
        let rb = ext_b.distances_from(u)?;
        for v in u + 1..n {
            diameter = diameter.max(rb[v]);
            pairs.push((ra[v], rb[v]));
        }
    }
    Ok(ConeComparison {
        set_distances,
        max_hausdorff,
        params: fit_quasi_params(&pairs, diameter.max(rat(1))),
    })
}
