use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MetricGraph, VertexId};
use crate::group::{all_generators, cayley_ball, Element, GenId, Group, GroupScenario, Selection, Subgroup, Word};
use crate::rational::{rat, Rat};

use super::polygon::DevelopmentData;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DevVertex {
    pub cell: usize,
    pub label: String,
    pub representative: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DevEdge {
    pub cell: usize,
    pub label: String,
    pub representative: String,
    pub ends: (VertexId, VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DevFace {
    pub label: String,
    pub representative: String,
    /// Boundary vertices in order.
    pub vertices: Vec<VertexId>,
}

/// The part of the development reached from a Cayley ball: vertex cosets
/// `gG_σ`, edge cosets as skeleton edges, face cosets as incidence data.
#[derive(Clone, Debug)]
pub struct DevelopmentBall {
    pub skeleton: MetricGraph,
    pub vertices: Vec<DevVertex>,
    pub edges: Vec<DevEdge>,
    pub faces: Vec<DevFace>,
    /// Radius of the underlying Cayley ball.
    pub radius: usize,
    pub generators: Vec<String>,
    pub ball_size: usize,
    /// Skeleton distances equal those of the full development (trees).
    pub exact_distances: bool,
    data: DevelopmentData,
    keys: Vec<Element>,
    index: HashMap<(usize, Element), VertexId>,
}

fn lex_min(slot: &mut Option<Word>, w: &Word) {
    if slot.as_ref().is_none_or(|cur| w < cur) {
        *slot = Some(w.clone());
    }
}

pub fn development_ball(
    data: &DevelopmentData,
    gens: &[GenId],
    radius: usize,
    budget: usize,
) -> Result<DevelopmentBall> {
    let group = &data.group;
    let ball = cayley_ball(group, gens, radius, budget)?;
    let mut index: HashMap<(usize, Element), VertexId> = HashMap::new();
    let mut keys = Vec::new();
    let mut vertex_cells = Vec::new();
    let mut vertex_reps: Vec<Option<Word>> = Vec::new();
    let mut edge_index: HashMap<(usize, Element), usize> = HashMap::new();
    let mut edge_cells = Vec::new();
    let mut edge_reps: Vec<Option<Word>> = Vec::new();
    let mut face_index: HashMap<(usize, Element), usize> = HashMap::new();
    let mut face_cells = Vec::new();
    let mut face_reps: Vec<Option<Word>> = Vec::new();

    for g in ball.elements() {
        let word = group.word(g);
        let mut here = Vec::with_capacity(data.vertices.len());
        for (ci, (_, sub)) in data.vertices.iter().enumerate() {
            let key = sub.coset_key(g);
            let id = *index.entry((ci, key.clone())).or_insert_with(|| {
                keys.push(key);
                vertex_cells.push(ci);
                vertex_reps.push(None);
                keys.len() - 1
            });
            lex_min(&mut vertex_reps[id], &word);
            here.push(id);
        }
        for (ci, (_, (a, b), sub)) in data.edges.iter().enumerate() {
            let id = *edge_index.entry((ci, sub.coset_key(g))).or_insert_with(|| {
                edge_cells.push((ci, (here[*a], here[*b])));
                edge_reps.push(None);
                edge_reps.len() - 1
            });
            lex_min(&mut edge_reps[id], &word);
        }
        for (ci, (_, cycle, sub)) in data.faces.iter().enumerate() {
            let id = *face_index.entry((ci, sub.coset_key(g))).or_insert_with(|| {
                face_cells.push((ci, cycle.iter().map(|&v| here[v]).collect::<Vec<_>>()));
                face_reps.push(None);
                face_reps.len() - 1
            });
            lex_min(&mut face_reps[id], &word);
        }
    }

    let fmt = |w: &Option<Word>| group.format_word(w.as_ref().expect("every coset has a member"));
    let vertices: Vec<DevVertex> = vertex_cells
        .iter()
        .zip(&vertex_reps)
        .map(|(&cell, rep)| DevVertex {
            cell,
            label: data.vertices[cell].0.clone(),
            representative: fmt(rep),
        })
        .collect();
    let mut b = GraphBuilder::new(vertices.len());
    for (v, dv) in vertices.iter().enumerate() {
        b.label(v, format!("{}:{}", dv.label, dv.representative));
    }
    let mut edges = Vec::with_capacity(edge_cells.len());
    for (&(cell, ends), rep) in edge_cells.iter().zip(&edge_reps) {
        b.add_unit_edge(ends.0, ends.1)?;
        edges.push(DevEdge {
            cell,
            label: data.edges[cell].0.clone(),
            representative: fmt(rep),
            ends,
        });
    }
    let faces = face_cells
        .into_iter()
        .zip(&face_reps)
        .map(|((cell, vs), rep)| DevFace {
            label: data.faces[cell].0.clone(),
            representative: fmt(rep),
            vertices: vs,
        })
        .collect();

    Ok(DevelopmentBall {
        skeleton: b.build(),
        vertices,
        edges,
        faces,
        radius,
        generators: gens.iter().map(|&g| group.name(g).to_string()).collect(),
        ball_size: ball.len(),
        exact_distances: data.is_one_dimensional(),
        data: data.clone(),
        keys,
        index,
    })
}

/// Development ball over every generator of the group.
pub fn development_ball_all(data: &DevelopmentData, radius: usize, budget: usize) -> Result<DevelopmentBall> {
    development_ball(data, &all_generators(&data.group), radius, budget)
}

/// Bass–Serre tree ball of an amalgam scenario; fails if the result is not a tree.
pub fn build_bass_serre_ball(scenario: &GroupScenario, radius: usize, budget: usize) -> Result<DevelopmentBall> {
    let data = DevelopmentData::from_amalgam(scenario)?;
    let ball = development_ball_all(&data, radius, budget)?;
    if !ball.is_tree() {
        return Err(Error::Invariant(format!(
            "Bass–Serre ball with {} vertices and {} edges is not a tree",
            ball.vertices.len(),
            ball.edges.len()
        )));
    }
    Ok(ball)
}

impl DevelopmentBall {
    pub fn data(&self) -> &DevelopmentData {
        &self.data
    }

    pub fn group(&self) -> &Group {
        &self.data.group
    }

    pub fn is_tree(&self) -> bool {
        self.skeleton.is_connected() && self.skeleton.edge_count() + 1 == self.skeleton.vertex_count()
    }

    /// Coset key of a vertex.
    pub fn key(&self, v: VertexId) -> &Element {
        &self.keys[v]
    }

    pub fn vertex_of(&self, cell: usize, g: &Element) -> Option<VertexId> {
        let sub = &self.data.vertices.get(cell)?.1;
        self.index.get(&(cell, sub.coset_key(g))).copied()
    }

    /// The vertex `g·G_σ` for a word `g` and vertex label `σ`.
    pub fn vertex_of_word(&self, label: &str, word: &str) -> Result<VertexId> {
        let cell = self.data.vertex_index(label)?;
        let g = self.data.group.element(&self.data.group.parse_word(word)?);
        self.vertex_of(cell, &g)
            .ok_or_else(|| Error::UnmatchedCoset(format!("{word} {label} lies outside the ball")))
    }

    /// Distances at or beyond this are flagged boundary-affected; `None` for
    /// exact balls.
    pub fn boundary_threshold(&self) -> Option<Rat> {
        (!self.exact_distances).then(|| rat(self.radius.saturating_sub(1) as i64))
    }

    pub fn is_boundary_affected(&self, d: Rat) -> bool {
        self.boundary_threshold().is_some_and(|t| d >= t)
    }

    /// `vertex,face_label,representative` rows with a header.
    pub fn registry_csv(&self) -> String {
        let mut out = String::from("vertex,face_label,representative\n");
        for (v, dv) in self.vertices.iter().enumerate() {
            out.push_str(&format!("{v},{},{}\n", dv.label, dv.representative));
        }
        out
    }

    /// Exact adjacency in the full development: `gG_σ` and `hG_τ` span an
    /// edge iff some edge cell joins σ and τ and `g⁻¹h ∈ G_σ G_τ`.
    pub fn adjacent_in_development(&self, u: VertexId, v: VertexId) -> Result<bool> {
        let (cu, cv) = (self.vertices[u].cell, self.vertices[v].cell);
        if !self
            .data
            .edges
            .iter()
            .any(|(_, (a, b), _)| (*a, *b) == (cu, cv) || (*a, *b) == (cv, cu))
        {
            return Ok(false);
        }
        let group = &self.data.group;
        let x = group.mul(&group.inverse(&self.keys[u]), &self.keys[v]);
        in_product(&self.data.vertices[cu].1, &self.data.vertices[cv].1, &x)
    }

    /// Faces whose boundary contains the edge `u v`.
    pub fn faces_containing(&self, u: VertexId, v: VertexId) -> Vec<usize> {
        self.faces
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                let n = f.vertices.len();
                (0..n).any(|i| {
                    let (a, b) = (f.vertices[i], f.vertices[(i + 1) % n]);
                    (a, b) == (u, v) || (a, b) == (v, u)
                })
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// Whether `x ∈ A·B` for subgroups made of whole free factors.
pub fn in_product(a: &Subgroup, b: &Subgroup, x: &Element) -> Result<bool> {
    if a.selection.contains(&Selection::Fiber) || b.selection.contains(&Selection::Fiber) {
        return Err(Error::Unsupported("double-coset test with a fiber subgroup".into()));
    }
    let syl = x.syllables();
    let full = |s: &Subgroup, i: usize| s.selection[syl[i].factor()] == Selection::Full;
    let prefix_ok = (0..=syl.len()).map(|i| (0..i).all(|j| full(a, j)));
    let split = prefix_ok
        .enumerate()
        .any(|(i, pre)| pre && (i..syl.len()).all(|j| full(b, j)));
    Ok(split)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConcatVerdict {
    Geodesic,
    Shortcut,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcatRow {
    pub triple: (VertexId, VertexId, VertexId),
    pub distance: Rat,
    /// Faces containing the first and the second edge.
    pub first_faces: Vec<String>,
    pub second_faces: Vec<String>,
    /// The two edges lie in two distinct polygons sharing none.
    pub distinct_polygons: bool,
    pub verdict: ConcatVerdict,
}

/// For each two-edge skeleton path `b₁ b b₂`, whether the concatenation is a
/// skeleton geodesic, with the faces carrying each edge as evidence.
pub fn edge_concat_check(ball: &DevelopmentBall, triples: &[(VertexId, VertexId, VertexId)]) -> Result<Vec<ConcatRow>> {
    let g = &ball.skeleton;
    let face_names = |fs: Vec<usize>| {
        fs.into_iter()
            .map(|f| format!("{}:{}", ball.faces[f].label, ball.faces[f].representative))
            .collect::<Vec<_>>()
    };
    let mut rows = Vec::with_capacity(triples.len());
    for &(b1, b, b2) in triples {
        for v in [b1, b, b2] {
            g.check_vertex(v)?;
        }
        if g.edge_length(b1, b).is_none() || g.edge_length(b, b2).is_none() {
            return Err(Error::InvalidPath(format!(
                "{b1} {b} {b2} is not a two-edge skeleton path"
            )));
        }
        let (f1, f2) = (ball.faces_containing(b1, b), ball.faces_containing(b, b2));
        let distinct_polygons = !f1.is_empty() && !f2.is_empty() && f1.iter().all(|f| !f2.contains(f));
        let (distance, verdict) = if b1 == b2 {
            (rat(0), ConcatVerdict::NotApplicable)
        } else {
            let d = g.distance(b1, b2)?;
            (
                d,
                if d == rat(2) {
                    ConcatVerdict::Geodesic
                } else {
                    ConcatVerdict::Shortcut
                },
            )
        };
        rows.push(ConcatRow {
            triple: (b1, b, b2),
            distance,
            first_faces: face_names(f1),
            second_faces: face_names(f2),
            distinct_polygons,
            verdict,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::polygon::{PolygonOfGroups, NONPROPER_TRIANGLE_JSON};

    fn square_of_involutions() -> PolygonOfGroups {
        PolygonOfGroups::from_json(
            r#"{"sides": 4,
            "vertex_groups": [
              {"name":"p","kind":"free_product_cyclic","orders":[2,2],"generators":["s4","s1"]},
              {"name":"q","kind":"free_product_cyclic","orders":[2,2],"generators":["q1","s2"]},
              {"name":"r","kind":"free_product_cyclic","orders":[2,2],"generators":["r2","s3"]},
              {"name":"w","kind":"free_product_cyclic","orders":[2,2],"generators":["w3","w4"]}],
            "edge_groups": [
              {"name":"e1","between":["p","q"],"kind":"free_product_cyclic","orders":[2],"generators":["f1"]},
              {"name":"e2","between":["q","r"],"kind":"free_product_cyclic","orders":[2],"generators":["f2"]},
              {"name":"e3","between":["r","w"],"kind":"free_product_cyclic","orders":[2],"generators":["f3"]},
              {"name":"e4","between":["w","p"],"kind":"free_product_cyclic","orders":[2],"generators":["f4"]}],
            "edge_maps": {
              "e1": {"into_p": {"f1": "s1"}, "into_q": {"f1": "q1"}},
              "e2": {"into_q": {"f2": "s2"}, "into_r": {"f2": "r2"}},
              "e3": {"into_r": {"f3": "s3"}, "into_w": {"f3": "w3"}},
              "e4": {"into_w": {"f4": "w4"}, "into_p": {"f4": "s4"}}}}"#,
        )
        .unwrap()
    }

    fn trivial_square() -> PolygonOfGroups {
        PolygonOfGroups::from_json(
            r#"{"sides": 4,
            "vertex_groups": [{"name":"p","kind":"trivial"},{"name":"q","kind":"trivial"},
                              {"name":"r","kind":"trivial"},{"name":"s","kind":"trivial"}],
            "edge_groups": [{"name":"pq","between":["p","q"],"kind":"trivial"},
                            {"name":"qr","between":["q","r"],"kind":"trivial"},
                            {"name":"rs","between":["r","s"],"kind":"trivial"},
                            {"name":"sp","between":["s","p"],"kind":"trivial"}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn trivial_groups_develop_to_one_cell() {
        let data = trivial_square().development_data().unwrap();
        let b = development_ball_all(&data, 3, 100).unwrap();
        assert_eq!(b.vertices.len(), 4);
        assert_eq!(b.edges.len(), 4);
        assert_eq!(b.faces.len(), 1);
        assert_eq!(b.faces[0].vertices, [0, 1, 2, 3]);
        let rows = edge_concat_check(&b, &[(0, 1, 2), (0, 1, 0)]).unwrap();
        assert_eq!(rows[0].distance, rat(2));
        assert!(!rows[0].distinct_polygons);
        assert_eq!(rows[1].verdict, ConcatVerdict::NotApplicable);
        assert_eq!(rows[1].distance, rat(0));
        assert!(matches!(
            edge_concat_check(&b, &[(0, 2, 1)]),
            Err(Error::InvalidPath(_))
        ));
    }

    #[test]
    fn nonproper_triangle_vertex_pattern() {
        let data = PolygonOfGroups::from_json(NONPROPER_TRIANGLE_JSON)
            .unwrap()
            .development_data()
            .unwrap();
        let b = development_ball_all(&data, 3, 10_000).unwrap();
        let v1 = b.vertex_of_word("v1", "1").unwrap();
        let v3 = b.vertex_of_word("v3", "1").unwrap();
        assert_eq!(b.skeleton.edge_length(v1, v3), Some(rat(1)));
        let e2 = b
            .edges
            .iter()
            .find(|e| e.ends == (v1, v3) || e.ends == (v3, v1))
            .unwrap();
        assert_eq!(e2.label, "e2");
        assert!(b.adjacent_in_development(v1, v3).unwrap());
        for n in 1..=1 {
            let w = "d b ".repeat(n);
            assert_eq!(b.vertex_of_word("v3", &w).unwrap(), v3);
        }
        assert_eq!(b.vertex_of_word("v3", "x y x").unwrap(), v3);
        assert!(b
            .registry_csv()
            .starts_with("vertex,face_label,representative\n0,v1,1\n"));
    }

    #[test]
    fn registry_entries_agree_with_membership() {
        let data = PolygonOfGroups::from_json(NONPROPER_TRIANGLE_JSON)
            .unwrap()
            .development_data()
            .unwrap();
        let group = &data.group;
        let ball = cayley_ball(group, &all_generators(group), 2, 1000).unwrap();
        let b = development_ball_all(&data, 2, 1000).unwrap();
        for (ci, (_, sub)) in data.vertices.iter().enumerate() {
            for g in ball.elements() {
                for h in ball.elements() {
                    let same = sub.contains(&group.mul(&group.inverse(g), h));
                    assert_eq!(b.vertex_of(ci, g) == b.vertex_of(ci, h), same);
                }
            }
        }
    }

    #[test]
    fn square_of_groups_concatenation_is_geodesic() {
        let data = square_of_involutions().development_data().unwrap();
        let b = development_ball_all(&data, 4, 100_000).unwrap();
        let p = b.vertex_of_word("p", "1").unwrap();
        let q = b.vertex_of_word("q", "1").unwrap();
        let q2 = b.vertex_of_word("q", "s4").unwrap();
        assert_ne!(q, q2);
        let rows = edge_concat_check(&b, &[(q, p, q2)]).unwrap();
        assert!(rows[0].distinct_polygons);
        assert_eq!(rows[0].verdict, ConcatVerdict::Geodesic);
        assert!(!b.adjacent_in_development(q, q2).unwrap());
    }

    #[test]
    fn free_product_tree_is_biregular() {
        let s = GroupScenario::from_json(
            r#"{"kind":"amalgam",
                "left":{"kind":"free_product_cyclic","orders":[3],"generators":["a"]},
                "right":{"kind":"free_product_cyclic","orders":[2],"generators":["b"]},
                "identifications":[]}"#,
        )
        .unwrap();
        let t = build_bass_serre_ball(&s, 2, 1000).unwrap();
        assert!(t.is_tree());
        for (v, dv) in t.vertices.iter().enumerate() {
            let full = if dv.label == "left" { 3 } else { 2 };
            assert!(t.skeleton.degree(v) <= full);
        }
        let l = t.vertex_of_word("left", "1").unwrap();
        let r = t.vertex_of_word("right", "1").unwrap();
        assert_eq!(t.skeleton.degree(l), 3);
        assert_eq!(t.skeleton.degree(r), 2);
        let zero = build_bass_serre_ball(&s, 0, 10).unwrap();
        assert_eq!(zero.vertices.len(), 2);
        assert_eq!(zero.edges.len(), 1);
    }

    #[test]
    fn radius_zero_is_the_base_edge() {
        let s = GroupScenario::from_json(
            r#"{"kind":"amalgam",
                "left":{"kind":"free_product_cyclic","orders":[2],"generators":["a"]},
                "right":{"kind":"free_product_cyclic","orders":[2],"generators":["c"]},
                "identifications":[["a","c"]]}"#,
        )
        .unwrap();
        let t = build_bass_serre_ball(&s, 0, 10).unwrap();
        assert_eq!(t.skeleton.vertex_count(), 2);
        let t = build_bass_serre_ball(&s, 5, 100).unwrap();
        assert_eq!(t.skeleton.vertex_count(), 2);
    }

    #[test]
    fn product_membership() {
        let data = PolygonOfGroups::from_json(NONPROPER_TRIANGLE_JSON)
            .unwrap()
            .development_data()
            .unwrap();
        let g = &data.group;
        let (v1, v2) = (&data.vertices[0].1, &data.vertices[1].1);
        let el = |s: &str| g.element(&g.parse_word(s).unwrap());
        assert!(in_product(v1, v2, &el("b a d")).unwrap());
        assert!(!in_product(v1, v2, &el("d b")).unwrap());
        assert!(in_product(v1, v2, &el("1")).unwrap());
    }
}
