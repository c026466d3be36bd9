use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, MetricGraph, VertexId};
use crate::rational::Rat;

use super::engine::{Element, GenId, Group, Letter, Syllable, Word};
use super::subgroup::Subgroup;

/// Default cap on the number of elements a ball may hold.
pub const DEFAULT_BALL_BUDGET: usize = 2_000_000;

/// Word-metric ball around the identity.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub graph: MetricGraph,
    pub radius: usize,
    pub gens: Vec<GenId>,
    elements: Vec<Element>,
    depth: Vec<usize>,
    index: HashMap<Element, VertexId>,
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, v: VertexId) -> &Element {
        &self.elements[v]
    }

    /// Word length with respect to the ball's generators.
    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v]
    }

    pub fn vertex_of(&self, e: &Element) -> Option<VertexId> {
        self.index.get(e).copied()
    }

    /// `vertex-id,normal-form` rows with a header.
    pub fn registry_csv(&self, group: &Group) -> String {
        let mut out = String::from("vertex,normal_form\n");
        for (v, e) in self.elements.iter().enumerate() {
            out.push_str(&format!("{v},{}\n", group.format_element(e)));
        }
        out
    }
}

fn directions(group: &Group, gens: &[GenId]) -> Vec<Letter> {
    let mut dirs = Vec::new();
    for &g in gens {
        dirs.push(Letter { gen: g, exp: 1 });
        if group.order(g) != 2 {
            dirs.push(Letter { gen: g, exp: -1 });
        }
    }
    dirs
}

/// Breadth-first ball of the given radius; an edge joins `g` and `g·s` for
/// every generator `s` whenever both lie in the ball.
pub fn cayley_ball(group: &Group, gens: &[GenId], radius: usize, budget: usize) -> Result<CayleyBall> {
    for &g in gens {
        if g >= group.generator_count() {
            return Err(Error::UnknownSymbol(format!("generator #{g}")));
        }
    }
    let dirs = directions(group, gens);
    let mut elements = vec![Element::identity()];
    let mut depth = vec![0usize];
    let mut index = HashMap::from([(Element::identity(), 0usize)]);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        for &d in &dirs {
            let mut next = elements[i].clone();
            group.mul_letter(&mut next, d);
            match index.get(&next) {
                Some(&j) => {
                    if j != i {
                        edges.push((i, j));
                    }
                }
                None if depth[i] < radius => {
                    if elements.len() >= budget {
                        return Err(Error::budget("Cayley ball element", elements.len() + 1, budget));
                    }
                    let j = elements.len();
                    index.insert(next.clone(), j);
                    elements.push(next);
                    depth.push(depth[i] + 1);
                    edges.push((i, j));
                }
                None => {}
            }
        }
        i += 1;
    }
    let graph = MetricGraph::unit(elements.len(), &edges)?;
    Ok(CayleyBall {
        graph,
        radius,
        gens: gens.to_vec(),
        elements,
        depth,
        index,
    })
}

/// Every generator of the group.
pub fn all_generators(group: &Group) -> Vec<GenId> {
    (0..group.generator_count()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetEntry {
    /// Lexicographically least normal form among the coset's ball members.
    pub representative: String,
    pub members: usize,
}

/// Quotient of a Cayley ball by the left cosets `gH`.
#[derive(Clone, Debug)]
pub struct CosetGraph {
    pub graph: MetricGraph,
    pub cosets: Vec<CosetEntry>,
    /// Coset vertex of each ball element.
    pub coset_of: Vec<VertexId>,
    keys: Vec<Element>,
}

impl CosetGraph {
    pub fn keys(&self) -> &[Element] {
        &self.keys
    }
}

pub fn coset_graph(group: &Group, ball: &CayleyBall, h: &Subgroup) -> Result<CosetGraph> {
    let mut ids: HashMap<Element, VertexId> = HashMap::new();
    let mut keys = Vec::new();
    let mut reps: Vec<Word> = Vec::new();
    let mut counts = Vec::new();
    let mut coset_of = Vec::with_capacity(ball.len());
    for e in ball.elements() {
        let key = h.coset_key(e);
        let word = group.word(e);
        let id = *ids.entry(key.clone()).or_insert_with(|| {
            keys.push(key);
            reps.push(word.clone());
            counts.push(0);
            reps.len() - 1
        });
        if word < reps[id] {
            reps[id] = word;
        }
        counts[id] += 1;
        coset_of.push(id);
    }
    let mut b = GraphBuilder::new(keys.len());
    for (u, v, _) in ball.graph.edges() {
        let (cu, cv) = (coset_of[u], coset_of[v]);
        if cu != cv {
            b.add_unit_edge(cu, cv)?;
        }
    }
    Ok(CosetGraph {
        graph: b.build(),
        cosets: reps
            .iter()
            .zip(counts)
            .map(|(w, members)| CosetEntry {
                representative: group.format_word(w),
                members,
            })
            .collect(),
        coset_of,
        keys,
    })
}

pub fn coset_graph_ball(
    group: &Group,
    h: &Subgroup,
    gens: &[GenId],
    radius: usize,
    budget: usize,
) -> Result<CosetGraph> {
    let ball = cayley_ball(group, gens, radius, budget)?;
    coset_graph(group, &ball, h)
}

/// Finite-scale lower bound on the height of `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightProbe {
    /// Largest number of distinct ball cosets `gH` found with a common
    /// nontrivial element of infinite order in every `gHg⁻¹`, capped at `max_n`.
    pub value: usize,
    pub max_n: usize,
    pub radius: usize,
    /// `H` is finite, so its height is 0 by convention and nothing was scanned.
    pub finite_subgroup: bool,
    pub witness_element: Option<String>,
    pub witness_cosets: Vec<String>,
}

pub fn height_probe(group: &Group, h: &Subgroup, radius: usize, max_n: usize, budget: usize) -> Result<HeightProbe> {
    let mut probe = HeightProbe {
        value: 0,
        max_n,
        radius,
        finite_subgroup: h.is_finite(group),
        witness_element: None,
        witness_cosets: Vec::new(),
    };
    if probe.finite_subgroup || max_n == 0 {
        return Ok(probe);
    }
    let ball = cayley_ball(group, &all_generators(group), radius, budget)?;
    let cosets = coset_graph(group, &ball, h)?;
    let reps: Vec<Element> = cosets
        .cosets
        .iter()
        .map(|c| group.element(&group.parse_word(&c.representative).expect("formatted word parses")))
        .collect();
    let reps_inv: Vec<Element> = reps.iter().map(|g| group.inverse(g)).collect();
    for e in ball.elements() {
        if !h.contains(e) || e.is_identity() || group.has_finite_order(e) {
            continue;
        }
        let mut hits = Vec::new();
        for (g, g_inv) in reps.iter().zip(&reps_inv) {
            if h.contains(&group.mul(&group.mul(g_inv, e), g)) {
                hits.push(group.format_element(g));
                if hits.len() == max_n {
                    break;
                }
            }
        }
        if hits.len() > probe.value {
            probe.value = hits.len();
            probe.witness_element = Some(group.format_element(e));
            probe.witness_cosets = hits;
            if probe.value == max_n {
                break;
            }
        }
    }
    Ok(probe)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistortionRow {
    pub k: u32,
    /// Reduced length of `φᵏ(x)` in the fiber basis.
    pub fiber_length: usize,
    /// Word length of `φᵏ(x)` in the whole group.
    pub ambient_length: usize,
    /// `true` when the ambient length came from an exhaustive ball search,
    /// `false` when it is the witness bound `min(2k+1, fiber length)`.
    pub ambient_exact: bool,
    pub witness_length: usize,
    #[serde(serialize_with = "crate::graph::ser_rat")]
    pub ratio: Rat,
    /// `tᵏ x t⁻ᵏ` and `φᵏ(x)` have the same normal form.
    pub conjugation_certificate: bool,
}

/// Shortest word length of `target`, searching up to `limit − 1` before
/// falling back to `limit`.
fn search_length(group: &Group, target: &Element, limit: usize, budget: usize) -> Result<(usize, bool)> {
    if target.is_identity() {
        return Ok((0, true));
    }
    let dirs = directions(group, &all_generators(group));
    let mut seen = HashSet::from([Element::identity()]);
    let mut layer = vec![Element::identity()];
    for d in 1..limit {
        let mut next = Vec::new();
        for e in &layer {
            for &l in &dirs {
                let mut f = e.clone();
                group.mul_letter(&mut f, l);
                if f == *target {
                    return Ok((d, true));
                }
                if seen.insert(f.clone()) {
                    if seen.len() > budget {
                        return Err(Error::budget("distortion search element", seen.len(), budget));
                    }
                    next.push(f);
                }
            }
        }
        layer = next;
    }
    Ok((limit, true))
}

/// Fiber length against ambient length of `φᵏ(x)` for `k = 0..=k_max`.
///
/// Ambient lengths are exact for `k ≤ search_k` and the witness bound above.
pub fn distortion_profile(
    group: &Group,
    x: GenId,
    k_max: u32,
    search_k: u32,
    budget: usize,
) -> Result<Vec<DistortionRow>> {
    let factor = match group.role(x) {
        super::engine::GenRole::Fiber { factor, .. } => factor,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{} is not a fiber generator",
                group.name(x)
            )))
        }
    };
    let sd = group
        .semidirect(factor)
        .expect("fiber generator of a semidirect factor");
    let index = sd.fiber.iter().position(|&g| g == x).expect("x in fiber") as i32 + 1;
    let mut rows = Vec::new();
    for k in 0..=k_max {
        let image = sd.phi_power(&[index], k);
        let target = Element(vec![Syllable::Twisted {
            factor,
            shift: 0,
            fiber: image.clone(),
        }]);
        let fiber_length = image.len();
        let witness_length = 2 * k as usize + 1;
        let bound = witness_length.min(fiber_length);
        let (ambient_length, ambient_exact) = if k <= search_k {
            search_length(group, &target, bound, budget)?
        } else {
            (bound, false)
        };
        let mut conj = Element::identity();
        group.mul_gen(&mut conj, sd.stable, i64::from(k));
        group.mul_gen(&mut conj, x, 1);
        group.mul_gen(&mut conj, sd.stable, -i64::from(k));
        rows.push(DistortionRow {
            k,
            fiber_length,
            ambient_length,
            ambient_exact,
            witness_length,
            ratio: Rat::new(fiber_length as i64, ambient_length.max(1) as i64),
            conjugation_certificate: conj == target,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::scenario::GroupScenario;

    fn load(s: &str) -> GroupScenario {
        GroupScenario::from_json(s).unwrap()
    }

    /// Counts reduced alternating words of length ≤ r over involutions.
    fn involution_words(count: usize, r: usize) -> usize {
        let mut total = 1;
        let mut layer = 1;
        for len in 1..=r {
            layer *= if len == 1 { count } else { count - 1 };
            total += layer;
        }
        total
    }

    #[test]
    fn free_group_radius_one() {
        let s = load(r#"{"kind":"free_group","rank":2}"#);
        let ball = cayley_ball(&s.group, &all_generators(&s.group), 1, 100).unwrap();
        assert_eq!(ball.len(), 5);
        assert_eq!(ball.graph.edge_count(), 4);
    }

    #[test]
    fn infinite_dihedral_radius_two() {
        let s = load(r#"{"kind":"free_product_cyclic","orders":[2,2]}"#);
        let ball = cayley_ball(&s.group, &all_generators(&s.group), 2, 100).unwrap();
        let mut names: Vec<_> = ball.elements().iter().map(|e| s.group.format_element(e)).collect();
        names.sort();
        assert_eq!(names, ["1", "a", "a b", "b", "b a"]);
        assert_eq!(ball.len(), involution_words(2, 2));
    }

    #[test]
    fn four_involutions_radius_two() {
        let s = load(r#"{"kind":"free_product_cyclic","orders":[2,2,2,2]}"#);
        let ball = cayley_ball(&s.group, &all_generators(&s.group), 2, 100).unwrap();
        assert_eq!(ball.len(), involution_words(4, 2));
        assert_eq!(ball.len(), 17);
    }

    #[test]
    fn ball_budget_is_enforced() {
        let s = load(r#"{"kind":"free_group","rank":2}"#);
        let err = cayley_ball(&s.group, &all_generators(&s.group), 5, 50).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn triangle_group_ball_has_same_layer_edges() {
        // C3 * C3: a and a⁻¹ are both at depth 1 and adjacent.
        let s = load(r#"{"kind":"free_product_cyclic","orders":[3,3]}"#);
        let ball = cayley_ball(&s.group, &all_generators(&s.group), 1, 100).unwrap();
        assert_eq!(ball.len(), 5);
        let a = ball.vertex_of(&s.group.element(&s.parse_word("a").unwrap())).unwrap();
        let a_inv = ball
            .vertex_of(&s.group.element(&s.parse_word("a^-1").unwrap()))
            .unwrap();
        assert!(ball.graph.edge_length(a, a_inv).is_some());
    }

    #[test]
    fn coset_graph_examples() {
        let s = load(r#"{"kind":"free_product_cyclic","orders":[2,2],"subgroups":{"A":["a"]}}"#);
        let gens = all_generators(&s.group);
        let whole = coset_graph_ball(&s.group, &s.subgroup("whole").unwrap(), &gens, 3, 100).unwrap();
        assert_eq!(whole.graph.vertex_count(), 1);
        let trivial = coset_graph_ball(&s.group, &s.subgroup("trivial").unwrap(), &gens, 3, 100).unwrap();
        let ball = cayley_ball(&s.group, &gens, 3, 100).unwrap();
        assert_eq!(trivial.graph, ball.graph);
        let a = coset_graph_ball(&s.group, &s.subgroups["A"], &gens, 2, 100).unwrap();
        let reps: Vec<_> = a.cosets.iter().map(|c| c.representative.as_str()).collect();
        assert_eq!(reps, ["1", "b", "a b"]);
        assert_eq!(a.graph.edge_count(), 2);
        assert_eq!(a.graph.edge_length(0, 1), Some(crate::rational::rat(1)));
        assert_eq!(a.graph.edge_length(0, 2), Some(crate::rational::rat(1)));
    }

    #[test]
    fn height_probe_examples() {
        let s = load(r#"{"kind":"free_product_cyclic","orders":[2,2],"subgroups":{"A":["a"]}}"#);
        let finite = height_probe(&s.group, &s.subgroups["A"], 3, 5, 1000).unwrap();
        assert_eq!(finite.value, 0);
        assert!(finite.finite_subgroup);
        let trivial = height_probe(&s.group, &s.subgroup("trivial").unwrap(), 3, 5, 1000).unwrap();
        assert_eq!(trivial.value, 0);

        let sd = load(r#"{"kind":"semidirect_z_free","rank":3,"subgroups":{"F":"fiber"}}"#);
        let normal = height_probe(&sd.group, &sd.subgroups["F"], 3, 4, 100_000).unwrap();
        assert_eq!(normal.value, 4);
        assert_eq!(normal.witness_cosets.len(), 4);
        assert!(normal.witness_element.is_some());
    }

    /// Letter-substitution oracle on plain strings, free reduction by hand.
    fn substitute_letters(w: &str) -> String {
        let mut out: Vec<char> = Vec::new();
        for c in w.chars() {
            let img = match c {
                'x' => "y",
                'y' => "z",
                'z' => "xy",
                _ => unreachable!(),
            };
            out.extend(img.chars());
        }
        out.into_iter().collect()
    }

    #[test]
    fn distortion_matches_substitution_oracle() {
        let sd = load(r#"{"kind":"semidirect_z_free","rank":3}"#);
        let x = sd.group.gen("x").unwrap();
        let rows = distortion_profile(&sd.group, x, 8, 4, 1_000_000).unwrap();
        let mut w = "x".to_string();
        for row in &rows {
            // Positive substitution never cancels, so the string length is the reduced length.
            assert_eq!(row.fiber_length, w.len(), "k = {}", row.k);
            assert!(row.conjugation_certificate);
            assert!(row.ambient_length <= row.witness_length);
            w = substitute_letters(&w);
        }
        assert_eq!(rows[0].ambient_length, 1);
        assert_eq!(rows[0].fiber_length, 1);
        assert_eq!(rows[1].fiber_length, 1);
        assert!(rows[1].ambient_length <= 3);
        assert!(rows[5].ambient_length <= 11);
        let lengths: Vec<_> = rows.iter().map(|r| r.fiber_length).collect();
        assert_eq!(lengths, [1, 1, 1, 2, 2, 3, 4, 5, 7]);
    }
}
