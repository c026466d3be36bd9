use std::collections::BTreeMap;

use serde::Serialize;

use crate::electrify::{cone_extension, ConeSet};
use crate::error::{Error, Result};
use crate::graph::{ser_rat, VertexId};
use crate::group::{cayley_ball, GenId, Group};
use crate::metric::{fit_quasi_params, QuasiParams};
use crate::rational::{rat, Rat};

use super::development::{development_ball, DevelopmentBall};
use super::polygon::{DevelopmentData, PolygonOfGroups};

/// Maps every vertex of `source` to the vertex of `target` with the same
/// representative, reading vertex labels through `labels` (identity when absent).
pub fn coset_correspondence(
    source: &DevelopmentBall,
    target: &DevelopmentBall,
    labels: &BTreeMap<String, String>,
) -> Result<Vec<VertexId>> {
    let group = target.group();
    source
        .vertices
        .iter()
        .map(|v| {
            let label = labels.get(&v.label).unwrap_or(&v.label);
            let cell = target.data().vertex_index(label)?;
            let g = group.element(&group.parse_word(&v.representative)?);
            target
                .vertex_of(cell, &g)
                .ok_or_else(|| Error::UnmatchedCoset(format!("{} {label}", v.representative)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingRow {
    pub source: VertexId,
    pub target: VertexId,
    #[serde(serialize_with = "ser_rat")]
    pub source_distance: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub image_distance: Rat,
    pub boundary_affected: bool,
}

/// `ρ(M)`: the largest source distance among pairs whose images lie within `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropernessProfile {
    pub table: Vec<(u32, String)>,
    #[serde(skip)]
    pub values: Vec<Rat>,
}

impl PropernessProfile {
    pub fn rho(&self, m: u32) -> Option<Rat> {
        self.values.get(m as usize).copied()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingProfile {
    pub rows: Vec<EmbeddingRow>,
    pub properness: PropernessProfile,
    /// Smallest `M ≤ probe_m` with `ρ(M)` beyond the source ball radius.
    pub non_proper_at: Option<u32>,
    pub probe_m: u32,
    pub source_radius: usize,
}

impl EmbeddingProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("source_u,source_v,source_distance,image_distance,boundary_affected\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.source,
                r.target,
                crate::rational::format_rat(&r.source_distance),
                crate::rational::format_rat(&r.image_distance),
                r.boundary_affected
            ));
        }
        out
    }
}

/// Source and image distances for each pair of source vertices, with the
/// properness gauge tabulated for `M = 0..=m_max`.
pub fn embedding_profile(
    source: &DevelopmentBall,
    target: &DevelopmentBall,
    map: &[VertexId],
    pairs: &[(VertexId, VertexId)],
    m_max: u32,
    probe_m: u32,
) -> Result<EmbeddingProfile> {
    if map.len() != source.vertices.len() {
        return Err(Error::IndexMismatch(format!(
            "correspondence covers {} of {} vertices",
            map.len(),
            source.vertices.len()
        )));
    }
    let mut rows = Vec::with_capacity(pairs.len());
    let mut by_source: BTreeMap<VertexId, Vec<Rat>> = BTreeMap::new();
    let mut by_target: BTreeMap<VertexId, Vec<Rat>> = BTreeMap::new();
    for &(u, v) in pairs {
        source.skeleton.check_vertex(u)?;
        source.skeleton.check_vertex(v)?;
        if let std::collections::btree_map::Entry::Vacant(e) = by_source.entry(u) {
            e.insert(source.skeleton.distances_from(u)?);
        }
        let fu = map[u];
        if let std::collections::btree_map::Entry::Vacant(e) = by_target.entry(fu) {
            e.insert(target.skeleton.distances_from(fu)?);
        }
        let ds = by_source[&u][v];
        let dt = by_target[&fu][map[v]];
        rows.push(EmbeddingRow {
            source: u,
            target: v,
            source_distance: ds,
            image_distance: dt,
            boundary_affected: source.is_boundary_affected(ds) || target.is_boundary_affected(dt),
        });
    }
    let values: Vec<Rat> = (0..=m_max)
        .map(|m| {
            rows.iter()
                .filter(|r| !r.boundary_affected && r.image_distance <= rat(i64::from(m)))
                .map(|r| r.source_distance)
                .fold(rat(0), Rat::max)
        })
        .collect();
    let radius = rat(source.radius as i64);
    let non_proper_at = (0..=probe_m.min(m_max)).find(|&m| values[m as usize] > radius);
    Ok(EmbeddingProfile {
        rows,
        properness: PropernessProfile {
            table: values
                .iter()
                .enumerate()
                .map(|(m, r)| (m as u32, crate::rational::format_rat(r)))
                .collect(),
            values,
        },
        non_proper_at,
        probe_m,
        source_radius: source.radius,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConedComparison {
    pub radius: usize,
    pub inner_radius: usize,
    pub cayley_size: usize,
    pub cone_sets: usize,
    pub development_vertices: usize,
    pub pairs: usize,
    pub excluded_pairs: usize,
    pub params: QuasiParams,
}

/// Measures the coset map `g ↦ gG_{σ₀}` from the Cayley ball coned along the
/// ball cosets of every nontrivial cell subgroup to the development skeleton.
/// Only pairs from the inner half-ball whose image distance is not
/// boundary-affected enter the fit.
pub fn coned_cayley_vs_development(
    data: &DevelopmentData,
    gens: &[GenId],
    radius: usize,
    budget: usize,
) -> Result<ConedComparison> {
    let group = &data.group;
    let ball = cayley_ball(group, gens, radius, budget)?;
    let cells = data
        .vertices
        .iter()
        .map(|(_, s)| s)
        .chain(data.edges.iter().map(|(_, _, s)| s))
        .chain(data.faces.iter().map(|(_, _, s)| s));
    let mut sets: Vec<ConeSet> = Vec::new();
    for sub in cells.filter(|s| !s.is_trivial()) {
        let mut cosets: BTreeMap<_, Vec<VertexId>> = BTreeMap::new();
        for (v, g) in ball.elements().iter().enumerate() {
            cosets.entry(sub.coset_key(g)).or_default().push(v);
        }
        for members in cosets.into_values() {
            sets.push(ConeSet::new(sets.len(), members));
        }
    }
    let coned = cone_extension(&ball.graph, &sets)?;
    let dev = development_ball(data, gens, radius, budget)?;
    let image: Vec<VertexId> = ball
        .elements()
        .iter()
        .map(|g| dev.vertex_of(0, g).expect("ball elements have vertices"))
        .collect();
    let inner_radius = radius / 2;
    let inner: Vec<VertexId> = (0..ball.len()).filter(|&v| ball.depth(v) <= inner_radius).collect();
    let mut pairs = Vec::new();
    let mut excluded = 0;
    for (i, &u) in inner.iter().enumerate() {
        let src = coned.distances_from(u)?;
        let img = dev.skeleton.distances_from(image[u])?;
        for &v in &inner[i + 1..] {
            let d_img = img[image[v]];
            if dev.is_boundary_affected(d_img) {
                excluded += 1;
                continue;
            }
            pairs.push((src[v], d_img));
        }
    }
    let cap = pairs.iter().map(|&(a, b)| a.max(b)).fold(rat(1), Rat::max);
    Ok(ConedComparison {
        radius,
        inner_radius,
        cayley_size: ball.len(),
        cone_sets: sets.len(),
        development_vertices: dev.vertices.len(),
        pairs: pairs.len(),
        excluded_pairs: excluded,
        params: fit_quasi_params(&pairs, cap),
    })
}

/// The vertex family `v = G_base`, `wₙ = (block)ⁿ G_target` compared between
/// the development of a polygon and the Bass–Serre tree of one of its edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct BlockFamily {
    pub base_cell: String,
    pub target_cell: String,
    pub block: String,
    pub restrict_edge: String,
    pub generators: Vec<String>,
    pub n_max: usize,
}

impl BlockFamily {
    /// The family used for the nonproper triangle.
    pub fn nonproper_triangle() -> Self {
        BlockFamily {
            base_cell: "v1".into(),
            target_cell: "v2".into(),
            block: "d b".into(),
            restrict_edge: "e3".into(),
            generators: vec!["a".into(), "b".into(), "d".into()],
            n_max: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockRow {
    pub n: usize,
    /// `wₙ` with `n` copies of the block.
    pub block_word: String,
    #[serde(serialize_with = "ser_rat")]
    pub development_distance: Rat,
    /// The development distance is exact, not just a ball upper bound.
    pub development_certified: bool,
    #[serde(serialize_with = "ser_rat")]
    pub tree_distance_blocks: Rat,
    /// `wₙ` read as the first `n` letters of the repeated block.
    pub letter_word: String,
    #[serde(serialize_with = "ser_rat")]
    pub tree_distance_letters: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub family: BlockFamily,
    pub radius: usize,
    pub development_vertices: usize,
    pub tree_vertices: usize,
    pub rows: Vec<BlockRow>,
    /// Common development distance when all rows agree.
    pub development_constant: Option<String>,
    pub blocks_strictly_increasing: bool,
    /// Slope and intercept when the block-reading distances are affine in `n`.
    pub blocks_affine: Option<(String, String)>,
    /// Rows whose distance equals `n + 1`, per reading.
    pub blocks_equal_n_plus_one: Vec<usize>,
    pub letters_equal_n_plus_one: Vec<usize>,
}

impl BlockReport {
    pub fn to_csv(&self) -> String {
        let f = crate::rational::format_rat;
        let mut out = String::from(
            "n,block_word,development_distance,certified,tree_distance_blocks,letter_word,tree_distance_letters\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n,
                r.block_word,
                f(&r.development_distance),
                r.development_certified,
                f(&r.tree_distance_blocks),
                r.letter_word,
                f(&r.tree_distance_letters)
            ));
        }
        out
    }
}

fn gens_by_name(group: &Group, names: &[String]) -> Result<Vec<GenId>> {
    names.iter().map(|n| group.gen(n)).collect()
}

/// Distances from `v` to each `wₙ` in the polygon's development and in the
/// tree of the restriction to one edge, both over Cayley balls large enough
/// to contain `(block)^{n_max}`.
pub fn block_family_report(polygon: &PolygonOfGroups, family: &BlockFamily, budget: usize) -> Result<BlockReport> {
    let data = polygon.development_data()?;
    let tree_data = polygon.restrict_to_edge(&family.restrict_edge)?.development_data()?;
    let block = data.group.parse_word(&family.block)?;
    let radius = block.len() * family.n_max;
    let dev = development_ball(&data, &gens_by_name(&data.group, &family.generators)?, radius, budget)?;
    let tree = development_ball(
        &tree_data,
        &gens_by_name(&tree_data.group, &family.generators)?,
        radius,
        budget,
    )?;
    let v = dev.vertex_of_word(&family.base_cell, "1")?;
    let tv = tree.vertex_of_word(&family.base_cell, "1")?;
    let from_v = dev.skeleton.distances_from(v)?;
    let from_tv = tree.skeleton.distances_from(tv)?;
    let block_tokens: Vec<&str> = family.block.split_whitespace().collect();

    let mut rows = Vec::with_capacity(family.n_max);
    for n in 1..=family.n_max {
        let block_word = vec![family.block.as_str(); n].join(" ");
        let letter_word = block_tokens
            .iter()
            .cycle()
            .take(n)
            .copied()
            .collect::<Vec<_>>()
            .join(" ");
        let w = dev.vertex_of_word(&family.target_cell, &block_word)?;
        let d = from_v[w];
        let certified = d <= rat(1) || (d == rat(2) && !dev.adjacent_in_development(v, w)?);
        let tw = tree.vertex_of_word(&family.target_cell, &block_word)?;
        let tl = tree.vertex_of_word(&family.target_cell, &letter_word)?;
        rows.push(BlockRow {
            n,
            block_word,
            development_distance: d,
            development_certified: certified,
            tree_distance_blocks: from_tv[tw],
            letter_word,
            tree_distance_letters: from_tv[tl],
        });
    }

    let f = crate::rational::format_rat;
    let development_constant = rows
        .first()
        .map(|r| r.development_distance)
        .filter(|&d0| rows.iter().all(|r| r.development_distance == d0))
        .map(|d| f(&d));
    let blocks: Vec<Rat> = rows.iter().map(|r| r.tree_distance_blocks).collect();
    let steps: Vec<Rat> = blocks.windows(2).map(|w| w[1] - w[0]).collect();
    let blocks_affine = match steps.first() {
        Some(&s) if steps.iter().all(|&x| x == s) => Some((f(&s), f(&(blocks[0] - s)))),
        _ => None,
    };
    let matches = |pick: fn(&BlockRow) -> Rat| {
        rows.iter()
            .filter(|r| pick(r) == rat(r.n as i64 + 1))
            .map(|r| r.n)
            .collect::<Vec<_>>()
    };
    Ok(BlockReport {
        family: family.clone(),
        radius,
        development_vertices: dev.vertices.len(),
        tree_vertices: tree.vertices.len(),
        blocks_strictly_increasing: steps.iter().all(|&s| s > rat(0)),
        blocks_affine,
        blocks_equal_n_plus_one: matches(|r| r.tree_distance_blocks),
        letters_equal_n_plus_one: matches(|r| r.tree_distance_letters),
        development_constant,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::development::{build_bass_serre_ball, development_ball_all};
    use crate::complex::polygon::NONPROPER_TRIANGLE_JSON;
    use crate::electrify::all_pairs;
    use crate::group::GroupScenario;

    fn nonproper() -> PolygonOfGroups {
        PolygonOfGroups::from_json(NONPROPER_TRIANGLE_JSON).unwrap()
    }

    #[test]
    fn block_family_distances() {
        let family = BlockFamily {
            n_max: 4,
            ..BlockFamily::nonproper_triangle()
        };
        let r = block_family_report(&nonproper(), &family, 1_000_000).unwrap();
        assert_eq!(r.development_constant.as_deref(), Some("2"));
        assert!(r.rows.iter().all(|row| row.development_certified));
        let blocks: Vec<i64> = r.rows.iter().map(|x| *x.tree_distance_blocks.numer()).collect();
        assert_eq!(blocks, [3, 5, 7, 9]);
        let letters: Vec<i64> = r.rows.iter().map(|x| *x.tree_distance_letters.numer()).collect();
        assert_eq!(letters, [1, 3, 3, 5]);
        assert_eq!(r.blocks_affine, Some(("2".into(), "1".into())));
        assert!(r.blocks_equal_n_plus_one.is_empty());
        assert_eq!(r.letters_equal_n_plus_one, [2, 4]);
    }

    #[test]
    fn identity_embedding_is_diagonal() {
        let s = GroupScenario::from_json(
            r#"{"kind":"amalgam",
                "left":{"kind":"free_product_cyclic","orders":[2,2],"generators":["a","b"]},
                "right":{"kind":"free_product_cyclic","orders":[2,2],"generators":["c","d"]},
                "identifications":[["a","c"]]}"#,
        )
        .unwrap();
        let t = build_bass_serre_ball(&s, 4, 10_000).unwrap();
        let map = coset_correspondence(&t, &t, &BTreeMap::new()).unwrap();
        assert_eq!(map, (0..t.vertices.len()).collect::<Vec<_>>());
        let n = t.vertices.len();
        let mut pairs = all_pairs(n);
        pairs.extend((0..n).map(|v| (v, v)));
        let p = embedding_profile(&t, &t, &map, &pairs, 6, 2).unwrap();
        assert!(p.rows.iter().all(|r| r.source_distance == r.image_distance));
        let diam = *t.skeleton.diameter().unwrap().numer();
        for m in 0..=6u32 {
            assert_eq!(p.properness.rho(m), Some(rat(i64::from(m).min(diam))));
        }
        assert_eq!(p.non_proper_at, None);
    }

    #[test]
    fn restricted_tree_matches_amalgam_tree() {
        let restricted = nonproper().restrict_to_edge("e3").unwrap().development_data().unwrap();
        let from_polygon = development_ball_all(&restricted, 3, 10_000).unwrap();
        assert!(from_polygon.is_tree());
        let s = GroupScenario::from_json(
            r#"{"kind":"amalgam",
                "left":{"kind":"free_product_cyclic","orders":[2,2],"generators":["a","b"]},
                "right":{"kind":"free_product_cyclic","orders":[2,2],"generators":["c","d"]},
                "identifications":[["a","c"]]}"#,
        )
        .unwrap();
        let tree = build_bass_serre_ball(&s, 3, 10_000).unwrap();
        let labels = BTreeMap::from([
            ("v1".to_string(), "left".to_string()),
            ("v2".to_string(), "right".to_string()),
        ]);
        let map = coset_correspondence(&from_polygon, &tree, &labels).unwrap();
        assert_eq!(from_polygon.vertices.len(), tree.vertices.len());
        let mut image = map.clone();
        image.sort_unstable();
        image.dedup();
        assert_eq!(image.len(), map.len());
        for (u, v, _) in from_polygon.skeleton.edges() {
            assert!(tree.skeleton.edge_length(map[u], map[v]).is_some());
        }
        assert_eq!(from_polygon.skeleton.edge_count(), tree.skeleton.edge_count());
    }

    #[test]
    fn tree_into_triangle_development_is_not_proper() {
        let p = nonproper();
        let data = p.development_data().unwrap();
        let tree_data = p.restrict_to_edge("e3").unwrap().development_data().unwrap();
        let gens = |g: &Group| gens_by_name(g, &["a".into(), "b".into(), "d".into()]).unwrap();
        let radius = 8;
        let b = development_ball(&data, &gens(&data.group), radius, 1_000_000).unwrap();
        let b1 = development_ball(&tree_data, &gens(&tree_data.group), radius, 1_000_000).unwrap();
        let map = coset_correspondence(&b1, &b, &BTreeMap::new()).unwrap();
        let v = b1.vertex_of_word("v1", "1").unwrap();
        let pairs: Vec<_> = (0..b1.vertices.len()).map(|w| (v, w)).collect();
        let prof = embedding_profile(&b1, &b, &map, &pairs, 4, 2).unwrap();
        assert!(prof.properness.is_nondecreasing());
        assert_eq!(prof.non_proper_at, Some(2));
        assert!(prof.to_csv().starts_with("source_u,"));
    }

    #[test]
    fn unmatched_cosets_are_reported() {
        let p = nonproper();
        let data = p.development_data().unwrap();
        let tree_data = p.restrict_to_edge("e3").unwrap().development_data().unwrap();
        let small = development_ball_all(&data, 1, 1000).unwrap();
        let big = development_ball_all(&tree_data, 4, 100_000).unwrap();
        assert!(matches!(
            coset_correspondence(&big, &small, &BTreeMap::new()),
            Err(Error::UnmatchedCoset(_))
        ));
    }

    #[test]
    fn trivial_local_groups_compare_isometrically() {
        let p = PolygonOfGroups::from_json(
            r#"{"sides": 3,
            "vertex_groups": [{"name":"p","kind":"trivial"},{"name":"q","kind":"trivial"},{"name":"r","kind":"trivial"}],
            "edge_groups": [{"name":"pq","between":["p","q"],"kind":"trivial"},
                            {"name":"qr","between":["q","r"],"kind":"trivial"},
                            {"name":"rp","between":["r","p"],"kind":"trivial"}]}"#,
        )
        .unwrap();
        let c = coned_cayley_vs_development(&p.development_data().unwrap(), &[], 3, 100).unwrap();
        assert_eq!(c.params.lambda, rat(1));
        assert!(c.params.eps <= rat(1));
    }

    #[test]
    fn infinite_dihedral_tree_vs_coned_line() {
        let p = PolygonOfGroups::from_json(
            r#"{"sides": 1,
            "vertex_groups": [{"name":"p","kind":"free_product_cyclic","orders":[2],"generators":["a"]},
                              {"name":"q","kind":"free_product_cyclic","orders":[2],"generators":["b"]}],
            "edge_groups": [{"name":"e","between":["p","q"],"kind":"trivial"}]}"#,
        )
        .unwrap();
        let data = p.development_data().unwrap();
        let mut seen = Vec::new();
        for radius in [6, 8, 10] {
            let c = coned_cayley_vs_development(&data, &[0, 1], radius, 10_000).unwrap();
            assert!(c.pairs > 0);
            seen.push(c.params);
        }
        assert!(seen.iter().all(|q| q.lambda <= rat(2) && q.eps <= rat(2)), "{seen:?}");
    }

    #[test]
    fn nonproper_triangle_params_stay_bounded() {
        let data = nonproper().development_data().unwrap();
        let gens: Vec<GenId> = (0..data.group.generator_count()).collect();
        for radius in [3, 4, 5] {
            let c = coned_cayley_vs_development(&data, &gens, radius, 100_000).unwrap();
            assert!(
                c.params.lambda <= rat(2) && c.params.eps <= rat(3),
                "{radius}: {:?}",
                c.params
            );
        }
    }
}
