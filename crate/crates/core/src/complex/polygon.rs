use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{all_generators, cayley_ball, Factor, GenRole, Group, GroupScenario, GroupSpec, Subgroup, Word};

/// Radius of the collision scan run on every local map.
pub const LOCAL_MAP_SCAN_RADIUS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedGroup {
    pub name: String,
    #[serde(flatten)]
    pub group: GroupSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeGroup {
    pub name: String,
    pub between: (String, String),
    #[serde(flatten)]
    pub group: GroupSpec,
}

/// Polygon-of-groups file. `sides` is 1 for a segment (one edge, two vertices).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonFile {
    #[serde(default)]
    pub name: Option<String>,
    pub sides: usize,
    pub vertex_groups: Vec<NamedGroup>,
    pub edge_groups: Vec<EdgeGroup>,
    #[serde(default)]
    pub face_group: Option<NamedGroup>,
    /// `edge -> "into_<vertex>" -> generator -> image word`.
    #[serde(default)]
    pub edge_maps: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

/// A local group of the polygon: a vertex, edge or the face.
#[derive(Clone, Debug)]
pub struct Piece {
    pub name: String,
    pub group: Group,
}

/// Result of the collision scan on one local map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalMapCheck {
    pub edge: String,
    pub vertex: String,
    pub images: BTreeMap<String, String>,
    pub scanned: usize,
    pub injective: bool,
}

/// A validated simple polygon of groups with single-generator local maps.
#[derive(Clone, Debug)]
pub struct PolygonOfGroups {
    pub name: String,
    pub sides: usize,
    pub vertices: Vec<Piece>,
    pub edges: Vec<Piece>,
    /// Endpoints of each edge as vertex indices.
    pub edge_ends: Vec<(usize, usize)>,
    /// Vertex indices in boundary order; empty for a segment.
    pub face_cycle: Vec<usize>,
    pub face: Option<Piece>,
    /// `(edge, endpoint) -> edge generator -> vertex generator`.
    maps: BTreeMap<(usize, usize), BTreeMap<String, String>>,
    pub local_maps: Vec<LocalMapCheck>,
}

fn piece(name: &str, spec: &GroupSpec) -> Result<Piece> {
    if let GroupSpec::Amalgam { .. } = spec {
        return Err(Error::Unsupported(format!("local group {name:?} given as an amalgam")));
    }
    Ok(Piece {
        name: name.to_string(),
        group: spec.build()?,
    })
}

impl PolygonOfGroups {
    pub fn from_json(s: &str) -> Result<Self> {
        let file: PolygonFile = serde_json::from_str(s)?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &PolygonFile) -> Result<Self> {
        let expected_vertices = if file.sides == 1 { 2 } else { file.sides };
        if file.sides == 2 || file.sides == 0 {
            return Err(Error::Parse(format!("polygon with {} sides", file.sides)));
        }
        if file.vertex_groups.len() != expected_vertices || file.edge_groups.len() != file.sides {
            return Err(Error::Parse(format!(
                "{} sides need {expected_vertices} vertex groups and {} edge groups",
                file.sides, file.sides
            )));
        }
        let vertices = file
            .vertex_groups
            .iter()
            .map(|v| piece(&v.name, &v.group))
            .collect::<Result<Vec<_>>>()?;
        let edges = file
            .edge_groups
            .iter()
            .map(|e| piece(&e.name, &e.group))
            .collect::<Result<Vec<_>>>()?;
        let face = match &file.face_group {
            Some(f) if file.sides == 1 => {
                return Err(Error::Parse(format!("segment has no face, got {:?}", f.name)));
            }
            Some(f) => Some(piece(&f.name, &f.group)?),
            None if file.sides >= 3 => Some(Piece {
                name: "face".into(),
                group: Group::trivial(),
            }),
            None => None,
        };
        if let Some(f) = &face {
            if f.group.generator_count() > 0 {
                return Err(Error::Unsupported("nontrivial face groups".into()));
            }
        }

        let mut seen = HashSet::new();
        for p in vertices.iter().chain(&edges).chain(&face) {
            if !seen.insert(p.name.clone()) {
                return Err(Error::Parse(format!("duplicate cell name {:?}", p.name)));
            }
        }
        let mut symbols = HashSet::new();
        for p in vertices.iter().chain(&edges) {
            for n in p.group.generator_names() {
                if !symbols.insert(n.clone()) {
                    return Err(Error::Parse(format!("generator {n:?} appears in two local groups")));
                }
            }
        }

        let vertex_index = |name: &str| {
            vertices
                .iter()
                .position(|v| v.name == name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
        };
        let mut edge_ends = Vec::with_capacity(edges.len());
        for e in &file.edge_groups {
            let (a, b) = (vertex_index(&e.between.0)?, vertex_index(&e.between.1)?);
            if a == b {
                return Err(Error::Parse(format!("edge {:?} is a loop", e.name)));
            }
            edge_ends.push((a, b));
        }
        let face_cycle = if file.sides >= 3 {
            boundary_cycle(vertices.len(), &edge_ends)?
        } else {
            Vec::new()
        };

        let mut maps = BTreeMap::new();
        for (ei, e) in edges.iter().enumerate() {
            let given = file.edge_maps.get(&e.name);
            if let Some(given) = given {
                for key in given.keys() {
                    let ok = key.strip_prefix("into_").is_some_and(|v| {
                        [edge_ends[ei].0, edge_ends[ei].1]
                            .iter()
                            .any(|&i| vertices[i].name == v)
                    });
                    if !ok {
                        return Err(Error::Parse(format!(
                            "edge {:?} has map {key:?} to a non-endpoint",
                            e.name
                        )));
                    }
                }
            }
            for vi in [edge_ends[ei].0, edge_ends[ei].1] {
                let key = format!("into_{}", vertices[vi].name);
                let images = given.and_then(|g| g.get(&key)).cloned().unwrap_or_default();
                maps.insert((ei, vi), images);
            }
        }
        for k in file.edge_maps.keys() {
            if !edges.iter().any(|e| &e.name == k) {
                return Err(Error::UnknownSymbol(k.clone()));
            }
        }

        let mut p = PolygonOfGroups {
            name: file.name.clone().unwrap_or_default(),
            sides: file.sides,
            vertices,
            edges,
            edge_ends,
            face_cycle,
            face,
            maps,
            local_maps: Vec::new(),
        };
        p.local_maps = p.scan_local_maps()?;
        if let Some(bad) = p.local_maps.iter().find(|m| !m.injective) {
            return Err(Error::Invariant(format!(
                "local map {} -> {} is not injective",
                bad.edge, bad.vertex
            )));
        }
        Ok(p)
    }

    /// Edge-to-vertex maps send generators to single generators of the same
    /// order; the map is then checked injective on a ball.
    fn scan_local_maps(&self) -> Result<Vec<LocalMapCheck>> {
        let mut out = Vec::new();
        for (&(ei, vi), images) in &self.maps {
            let (e, v) = (&self.edges[ei], &self.vertices[vi]);
            let mut letter_images = Vec::with_capacity(e.group.generator_count());
            for g in 0..e.group.generator_count() {
                let name = e.group.name(g);
                let img = images.get(name).ok_or_else(|| {
                    Error::Parse(format!("edge {:?} gives no image of {name:?} in {:?}", e.name, v.name))
                })?;
                let w = v.group.parse_word(img)?;
                if w.len() != 1 || w.0[0].exp != 1 {
                    return Err(Error::Unsupported(format!(
                        "local map image {img:?} is not a single generator"
                    )));
                }
                let target = w.0[0].gen;
                let order = |grp: &Group, i| match grp.role(i) {
                    GenRole::Cyclic { order, .. } => order,
                    _ => 0,
                };
                if order(&e.group, g) != order(&v.group, target) {
                    return Err(Error::Invariant(format!(
                        "{name:?} and its image {img:?} have different orders"
                    )));
                }
                letter_images.push(target);
            }
            for extra in images.keys() {
                e.group.gen(extra)?;
            }
            let ball = cayley_ball(&e.group, &all_generators(&e.group), LOCAL_MAP_SCAN_RADIUS, usize::MAX)?;
            let mut seen = HashSet::with_capacity(ball.len());
            let mut injective = true;
            for el in ball.elements() {
                let w = e.group.word(el);
                let mapped = Word(
                    w.0.iter()
                        .map(|l| crate::group::Letter {
                            gen: letter_images[l.gen],
                            exp: l.exp,
                        })
                        .collect(),
                );
                injective &= seen.insert(v.group.element(&mapped));
            }
            out.push(LocalMapCheck {
                edge: e.name.clone(),
                vertex: v.name.clone(),
                images: images.clone(),
                scanned: ball.len(),
                injective,
            });
        }
        Ok(out)
    }

    /// The restriction to a single edge and its two endpoints.
    pub fn restrict_to_edge(&self, edge: &str) -> Result<PolygonOfGroups> {
        let ei = self
            .edges
            .iter()
            .position(|e| e.name == edge)
            .ok_or_else(|| Error::UnknownSymbol(edge.to_string()))?;
        let (a, b) = self.edge_ends[ei];
        let maps = [(0, a), (1, b)]
            .into_iter()
            .map(|(new, old)| ((0, new), self.maps[&(ei, old)].clone()))
            .collect();
        let mut p = PolygonOfGroups {
            name: format!("{}|{edge}", self.name),
            sides: 1,
            vertices: vec![self.vertices[a].clone(), self.vertices[b].clone()],
            edges: vec![self.edges[ei].clone()],
            edge_ends: vec![(0, 1)],
            face_cycle: Vec::new(),
            face: None,
            maps,
            local_maps: Vec::new(),
        };
        p.local_maps = p.scan_local_maps()?;
        Ok(p)
    }

    fn pieces(&self) -> impl Iterator<Item = &Piece> {
        self.vertices.iter().chain(&self.edges)
    }

    /// The fundamental group as a pushout of the local groups along the
    /// generator identifications of the local maps.
    pub fn fundamental_group(&self) -> Result<FundamentalGroup> {
        let pieces: Vec<&Piece> = self.pieces().collect();
        let mut symbols: Vec<(usize, String)> = Vec::new();
        let mut index = BTreeMap::new();
        for (pi, p) in pieces.iter().enumerate() {
            for n in p.group.generator_names() {
                index.insert(n.clone(), symbols.len());
                symbols.push((pi, n.clone()));
            }
        }
        let mut uf = UnionFind::new(symbols.len());
        for images in self.maps.values() {
            for (from, to) in images {
                let to = pieces
                    .iter()
                    .find_map(|p| p.group.gen(to).ok().map(|g| p.group.name(g).to_string()))
                    .ok_or_else(|| Error::UnknownSymbol(to.clone()))?;
                uf.union(index[from], index[&to]);
            }
        }
        let group_of = |i: usize| &pieces[symbols[i].0].group;
        let role_of = |i: usize| {
            let g = group_of(i);
            g.role(g.gen(&symbols[i].1).expect("own generator"))
        };

        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..symbols.len() {
            classes.entry(uf.find(i)).or_default().push(i);
        }
        let mut representative = vec![0; symbols.len()];
        for members in classes.values() {
            let mut pieces_seen = HashSet::new();
            for &m in members {
                if !pieces_seen.insert(symbols[m].0) {
                    return Err(Error::Unsupported(format!(
                        "local group {:?} has two generators identified together",
                        pieces[symbols[m].0].name
                    )));
                }
            }
            let structural: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&m| !matches!(role_of(m), GenRole::Cyclic { .. }))
                .collect();
            if structural.len() > 1 {
                return Err(Error::Unsupported(
                    "identification between two semidirect-factor generators".into(),
                ));
            }
            let orders: BTreeSet<u32> = members
                .iter()
                .map(|&m| match role_of(m) {
                    GenRole::Cyclic { order, .. } => order,
                    _ => 0,
                })
                .collect();
            if orders.len() > 1 {
                return Err(Error::Unsupported(format!(
                    "identified generators {:?} have different orders",
                    members.iter().map(|&m| symbols[m].1.as_str()).collect::<Vec<_>>()
                )));
            }
            let rep = structural.first().copied().unwrap_or(members[0]);
            for &m in members {
                representative[m] = rep;
            }
        }

        let mut group = Group::trivial();
        for p in &pieces {
            for f in p.group.factors() {
                match f {
                    Factor::Cyclic { gen, order } => {
                        let i = index[p.group.name(*gen)];
                        if representative[i] == i {
                            group.add_cyclic(&symbols[i].1, *order)?;
                        }
                    }
                    Factor::Semidirect(s) => {
                        let fiber: Vec<&str> = s.fiber.iter().map(|&g| p.group.name(g)).collect();
                        let images: Vec<Vec<(usize, i8)>> = (0..s.rank())
                            .map(|i| {
                                s.phi(&[i as i32 + 1])
                                    .iter()
                                    .map(|&l| ((l.unsigned_abs() - 1) as usize, l.signum() as i8))
                                    .collect()
                            })
                            .collect();
                        group.add_semidirect(&fiber, p.group.name(s.stable), &images)?;
                    }
                }
            }
        }
        let mut identifications = BTreeMap::new();
        for (i, (_, name)) in symbols.iter().enumerate() {
            let rep = representative[i];
            if rep != i {
                group.add_alias(name, &symbols[rep].1)?;
                identifications.insert(name.clone(), symbols[rep].1.clone());
            }
        }

        let mut scenario = GroupScenario::from_group(self.name.clone(), group);
        let mut unsupported = BTreeMap::new();
        for p in &pieces {
            match scenario.subgroup_from_names(&p.name, p.group.generator_names()) {
                Ok(s) => {
                    scenario.subgroups.insert(p.name.clone(), s);
                }
                Err(Error::Unsupported(msg)) => {
                    unsupported.insert(p.name.clone(), msg);
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(f) = &self.face {
            scenario
                .subgroups
                .insert(f.name.clone(), Subgroup::trivial(&scenario.group, f.name.clone()));
        }
        Ok(FundamentalGroup {
            scenario,
            identifications,
            unsupported_cells: unsupported,
        })
    }

    /// Checks at every vertex that the two incident edge subgroups meet
    /// exactly in the face subgroup.
    pub fn condition_one(&self, fg: &FundamentalGroup) -> Result<Vec<ConditionOneRow>> {
        let Some(face) = &self.face else {
            return Ok(Vec::new());
        };
        let face_sub = &fg.scenario.subgroups[&face.name];
        let mut rows = Vec::new();
        for (vi, v) in self.vertices.iter().enumerate() {
            let incident: Vec<usize> = (0..self.edges.len())
                .filter(|&e| self.edge_ends[e].0 == vi || self.edge_ends[e].1 == vi)
                .collect();
            let subs = incident
                .iter()
                .map(|&e| fg.cell_subgroup(&self.edges[e].name))
                .collect::<Result<Vec<_>>>()?;
            let meet = subs[0].intersect(subs[1], "meet");
            rows.push(ConditionOneRow {
                vertex: v.name.clone(),
                edges: (
                    self.edges[incident[0]].name.clone(),
                    self.edges[incident[1]].name.clone(),
                ),
                holds: meet.selection == face_sub.selection,
            });
        }
        Ok(rows)
    }

    /// Cell data for building developments; every local group must be a
    /// supported subgroup of the fundamental group.
    pub fn development_data(&self) -> Result<DevelopmentData> {
        let fg = self.fundamental_group()?;
        if let Some((cell, msg)) = fg.unsupported_cells.iter().next() {
            return Err(Error::Unsupported(format!("development: cell {cell:?}: {msg}")));
        }
        if let Some(bad) = self.condition_one(&fg)?.iter().find(|r| !r.holds) {
            return Err(Error::Invariant(format!(
                "edge subgroups {:?} at {:?} do not meet in the face subgroup",
                bad.edges, bad.vertex
            )));
        }
        let sub = |name: &str| fg.scenario.subgroups[name].clone();
        Ok(DevelopmentData {
            group: fg.scenario.group.clone(),
            vertices: self.vertices.iter().map(|v| (v.name.clone(), sub(&v.name))).collect(),
            edges: self
                .edges
                .iter()
                .zip(&self.edge_ends)
                .map(|(e, &ends)| (e.name.clone(), ends, sub(&e.name)))
                .collect(),
            faces: self
                .face
                .iter()
                .map(|f| (f.name.clone(), self.face_cycle.clone(), sub(&f.name)))
                .collect(),
        })
    }
}

/// Orders the vertices of an n-gon along its boundary.
fn boundary_cycle(n: usize, ends: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in ends {
        adj[a].push(b);
        adj[b].push(a);
    }
    if adj.iter().any(|a| a.len() != 2) {
        return Err(Error::Parse("edges do not form the boundary of a polygon".into()));
    }
    let mut cycle = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
        if next == 0 {
            break;
        }
        cycle.push(next);
        prev = cur;
        cur = next;
    }
    if cycle.len() != n {
        return Err(Error::Parse("edges do not form a single polygon boundary".into()));
    }
    Ok(cycle)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Keeps the smaller root so classes are rooted at their first symbol.
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        let (lo, hi) = (a.min(b), a.max(b));
        self.0[hi] = lo;
    }
}

#[derive(Clone, Debug)]
pub struct FundamentalGroup {
    /// The merged group with one designated subgroup per supported cell.
    pub scenario: GroupScenario,
    /// Every non-representative symbol and the representative it merged into.
    pub identifications: BTreeMap<String, String>,
    /// Cells whose local group is not a union of factors and fibers.
    pub unsupported_cells: BTreeMap<String, String>,
}

impl FundamentalGroup {
    pub fn cell_subgroup(&self, cell: &str) -> Result<&Subgroup> {
        self.scenario
            .subgroups
            .get(cell)
            .ok_or_else(|| match self.unsupported_cells.get(cell) {
                Some(msg) => Error::Unsupported(msg.clone()),
                None => Error::UnknownSymbol(cell.to_string()),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionOneRow {
    pub vertex: String,
    pub edges: (String, String),
    pub holds: bool,
}

/// A developable complex of groups over a polygon or a segment, expressed in
/// one ambient group.
#[derive(Clone, Debug)]
pub struct DevelopmentData {
    pub group: Group,
    pub vertices: Vec<(String, Subgroup)>,
    pub edges: Vec<(String, (usize, usize), Subgroup)>,
    /// Face label, boundary vertex cycle, subgroup.
    pub faces: Vec<(String, Vec<usize>, Subgroup)>,
}

impl DevelopmentData {
    /// The segment of groups of an amalgam scenario: vertices `left` and
    /// `right`, edge `edge`.
    pub fn from_amalgam(scenario: &GroupScenario) -> Result<Self> {
        if scenario.amalgam_parts.is_none() {
            return Err(Error::InvalidArgument(format!(
                "scenario {:?} is not an amalgam",
                scenario.name
            )));
        }
        let sub = |n: &str| scenario.subgroups[n].clone();
        Ok(DevelopmentData {
            group: scenario.group.clone(),
            vertices: vec![("left".into(), sub("left")), ("right".into(), sub("right"))],
            edges: vec![("edge".into(), (0, 1), sub("edge"))],
            faces: Vec::new(),
        })
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|(n, _)| n == label)
            .ok_or_else(|| Error::UnknownSymbol(label.to_string()))
    }

    pub fn is_one_dimensional(&self) -> bool {
        self.faces.is_empty()
    }
}

/// The nonproper-embedding triangle: four involutions glued along three
/// order-two edge groups.
pub const NONPROPER_TRIANGLE_JSON: &str = r#"{
  "name": "nonproper-triangle",
  "sides": 3,
  "vertex_groups": [
    {"name": "v1", "kind": "free_product_cyclic", "orders": [2, 2], "generators": ["a", "b"]},
    {"name": "v2", "kind": "free_product_cyclic", "orders": [2, 2], "generators": ["c", "d"]},
    {"name": "v3", "kind": "free_product_cyclic", "orders": [2, 2, 2], "generators": ["x", "y", "z"]}
  ],
  "edge_groups": [
    {"name": "e1", "between": ["v2", "v3"], "kind": "free_product_cyclic", "orders": [2], "generators": ["t1"]},
    {"name": "e2", "between": ["v1", "v3"], "kind": "free_product_cyclic", "orders": [2], "generators": ["t2"]},
    {"name": "e3", "between": ["v1", "v2"], "kind": "free_product_cyclic", "orders": [2], "generators": ["t3"]}
  ],
  "edge_maps": {
    "e1": {"into_v2": {"t1": "d"}, "into_v3": {"t1": "y"}},
    "e2": {"into_v1": {"t2": "b"}, "into_v3": {"t2": "x"}},
    "e3": {"into_v1": {"t3": "a"}, "into_v2": {"t3": "c"}}
  }
}"#;

/// The distorted-edge triangle: a `ℤ ⋉ F₃` vertex group glued to free groups,
/// with edge-map targets placed in the vertex groups that own them.
pub const DISTORTED_EDGE_TRIANGLE_JSON: &str = r#"{
  "name": "distorted-edge-triangle",
  "sides": 3,
  "vertex_groups": [
    {"name": "v1", "kind": "semidirect_z_free", "generators": ["x", "y", "z"], "stable": "t",
     "phi": {"x": "y", "y": "z", "z": "x y"}},
    {"name": "v2", "kind": "free_group", "generators": ["d", "e"]},
    {"name": "v3", "kind": "free_group", "generators": ["a", "b", "c"]}
  ],
  "edge_groups": [
    {"name": "e1", "between": ["v2", "v3"], "kind": "free_group", "generators": ["t1"]},
    {"name": "e2", "between": ["v1", "v3"], "kind": "free_group", "generators": ["u1", "u2"]},
    {"name": "e3", "between": ["v1", "v2"], "kind": "free_group", "generators": ["t3"]}
  ],
  "edge_maps": {
    "e1": {"into_v2": {"t1": "d"}, "into_v3": {"t1": "c"}},
    "e2": {"into_v1": {"u1": "z", "u2": "x"}, "into_v3": {"u1": "a", "u2": "b"}},
    "e3": {"into_v1": {"t3": "y"}, "into_v2": {"t3": "e"}}
  }
}"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonproper_triangle_pushout() {
        let p = PolygonOfGroups::from_json(NONPROPER_TRIANGLE_JSON).unwrap();
        assert_eq!(p.face_cycle, [0, 2, 1]);
        assert!(p.local_maps.iter().all(|m| m.injective));
        let fg = p.fundamental_group().unwrap();
        assert_eq!(fg.scenario.group.generator_names(), ["a", "b", "d", "z"]);
        assert_eq!(
            fg.scenario.group.kind_label(),
            "free_product[cyclic(2), cyclic(2), cyclic(2), cyclic(2)]"
        );
        let vertex_ids: BTreeMap<_, _> = fg
            .identifications
            .iter()
            .filter(|(k, _)| !k.starts_with('t'))
            .map(|(k, v)| (k.as_str(), v.as_str()))
            .collect();
        assert_eq!(vertex_ids, BTreeMap::from([("c", "a"), ("x", "b"), ("y", "d")]));
        assert!(fg.unsupported_cells.is_empty());
        assert!(p.condition_one(&fg).unwrap().iter().all(|r| r.holds));
    }

    #[test]
    fn distorted_edge_triangle_pushout() {
        let p = PolygonOfGroups::from_json(DISTORTED_EDGE_TRIANGLE_JSON).unwrap();
        let fg = p.fundamental_group().unwrap();
        assert_eq!(
            fg.scenario.group.kind_label(),
            "free_product[semidirect_z_free(3), cyclic(inf)]"
        );
        assert_eq!(fg.identifications["a"], "z");
        assert_eq!(fg.identifications["b"], "x");
        assert_eq!(fg.identifications["c"], "d");
        assert_eq!(fg.identifications["e"], "y");
        assert!(fg.unsupported_cells.contains_key("v2"));
        assert!(matches!(p.development_data(), Err(Error::Unsupported(_))));
        let restricted = p.restrict_to_edge("e1").unwrap().fundamental_group().unwrap();
        assert_eq!(
            restricted.scenario.group.kind_label(),
            "free_product[cyclic(inf), cyclic(inf), cyclic(inf), cyclic(inf)]"
        );
    }

    #[test]
    fn trivial_polygon_has_trivial_group() {
        let json = r#"{"sides": 4,
            "vertex_groups": [{"name":"p","kind":"trivial"},{"name":"q","kind":"trivial"},
                              {"name":"r","kind":"trivial"},{"name":"s","kind":"trivial"}],
            "edge_groups": [{"name":"pq","between":["p","q"],"kind":"trivial"},
                            {"name":"qr","between":["q","r"],"kind":"trivial"},
                            {"name":"rs","between":["r","s"],"kind":"trivial"},
                            {"name":"sp","between":["s","p"],"kind":"trivial"}]}"#;
        let p = PolygonOfGroups::from_json(json).unwrap();
        assert_eq!(p.face_cycle, [0, 1, 2, 3]);
        let fg = p.fundamental_group().unwrap();
        assert_eq!(fg.scenario.group.generator_count(), 0);
    }

    #[test]
    fn rejected_patterns() {
        let mut file: PolygonFile = serde_json::from_str(NONPROPER_TRIANGLE_JSON).unwrap();
        file.edge_maps
            .get_mut("e1")
            .unwrap()
            .get_mut("into_v2")
            .unwrap()
            .insert("t1".into(), "c d".into());
        assert!(matches!(PolygonOfGroups::from_file(&file), Err(Error::Unsupported(_))));

        let mut file: PolygonFile = serde_json::from_str(NONPROPER_TRIANGLE_JSON).unwrap();
        let e1 = file.edge_maps.get_mut("e1").unwrap();
        e1.get_mut("into_v2").unwrap().insert("t1".into(), "c".into());
        e1.get_mut("into_v3").unwrap().insert("t1".into(), "x".into());
        let p = PolygonOfGroups::from_file(&file).unwrap();
        assert!(matches!(p.fundamental_group(), Err(Error::Unsupported(_))));

        let mut file: PolygonFile = serde_json::from_str(NONPROPER_TRIANGLE_JSON).unwrap();
        file.edge_groups.pop();
        assert!(matches!(PolygonOfGroups::from_file(&file), Err(Error::Parse(_))));

        let mut file: PolygonFile = serde_json::from_str(NONPROPER_TRIANGLE_JSON).unwrap();
        file.edge_maps.get_mut("e3").unwrap().remove("into_v2");
        assert!(PolygonOfGroups::from_file(&file).is_err());
    }

    #[test]
    fn order_mismatch_is_rejected() {
        let json = r#"{"sides": 1,
            "vertex_groups": [{"name":"p","kind":"free_product_cyclic","orders":[2],"generators":["a"]},
                              {"name":"q","kind":"free_product_cyclic","orders":[3],"generators":["b"]}],
            "edge_groups": [{"name":"e","between":["p","q"],"kind":"free_product_cyclic","orders":[2],"generators":["s"]}],
            "edge_maps": {"e": {"into_p": {"s": "a"}, "into_q": {"s": "b"}}}}"#;
        assert!(matches!(PolygonOfGroups::from_json(json), Err(Error::Invariant(_))));
    }
}
