//! Pipeline steps. Each step returns its artifacts as named byte buffers;
//! nothing here touches the filesystem beyond reading inputs.

use std::collections::BTreeMap;

use conelab_core::boundary::{mitra_profile, BoundaryCut, Embedding, MitraProfile};
use conelab_core::complex::{
    block_family_report, coset_correspondence, development_ball, BlockFamily, DevelopmentBall, DevelopmentData,
};
use conelab_core::electrify::{all_pairs, cone_extension, coned_tree, ConeOffOptions, ConeSet, ConedGraph};
use conelab_core::graph::families;
use conelab_core::group::{all_generators, cayley_ball, distortion_profile, GenId, Group};
use conelab_core::metric::{delta_four_point, quasiconvexity_constant};
use conelab_core::{format_rat, rat, DeltaMode, Rat};
use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::scenario::{DeltaModeName, EmbeddingKind, Loaded, Step, TreeFamily};

pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// Settings shared by every step of one run.
pub struct RunContext<'a> {
    pub loaded: &'a Loaded,
    pub seed: Option<u64>,
    pub budget: usize,
}

impl RunContext<'_> {
    fn seed(&self, op: &str) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| CliError::schema(format!("{op} samples at random and needs a seed")))
    }
}

fn csv(name: String, body: String) -> Artifact {
    Artifact {
        name,
        bytes: body.into_bytes(),
    }
}

fn json_artifact(name: String, value: &impl Serialize) -> CliResult<Artifact> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::invariant(e.to_string()))?;
    text.push('\n');
    Ok(Artifact {
        name,
        bytes: text.into_bytes(),
    })
}

fn max_rat(xs: impl IntoIterator<Item = Rat>) -> Rat {
    xs.into_iter().fold(rat(0), Rat::max)
}

fn gens_by_name(group: &Group, names: &Option<Vec<String>>) -> CliResult<Vec<GenId>> {
    match names {
        None => Ok(all_generators(group)),
        Some(ns) => Ok(ns.iter().map(|n| group.gen(n)).collect::<Result<_, _>>()?),
    }
}

/// Runs one step; `prefix` namespaces its artifact files.
pub fn run_step(ctx: &RunContext<'_>, step: &Step, prefix: &str) -> CliResult<Vec<Artifact>> {
    let name = |stem: &str, ext: &str| format!("{prefix}-{stem}.{ext}");
    match step {
        Step::BlockFamily { polygon, family } => {
            let polygon = ctx.loaded.polygon(polygon)?;
            let family = family.clone().unwrap_or_else(BlockFamily::nonproper_triangle);
            let report = block_family_report(&polygon, &family, ctx.budget)?;
            let all = report.rows.len();
            let convention = if all > 0 && report.blocks_equal_n_plus_one.len() == all {
                "blocks"
            } else if all > 0 && report.letters_equal_n_plus_one.len() == all {
                "letters"
            } else {
                "neither"
            };
            let summary = json!({
                "report": report,
                "n_plus_one_convention": convention,
            });
            Ok(vec![
                csv(name("block_family", "csv"), report.to_csv()),
                json_artifact(name("block_family", "json"), &summary)?,
            ])
        }
        Step::DistortionProfile {
            group,
            generator,
            k_max,
            search_k,
        } => {
            let s = ctx.loaded.group(group)?;
            let x = s.group.gen(generator)?;
            let rows = distortion_profile(&s.group, x, *k_max, *search_k, ctx.budget)?;
            let mut body = String::from(
                "k,fiber_length,ambient_length,ambient_exact,witness_length,ratio,conjugation_certificate\n",
            );
            for r in &rows {
                body.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.k,
                    r.fiber_length,
                    r.ambient_length,
                    r.ambient_exact,
                    r.witness_length,
                    format_rat(&r.ratio),
                    r.conjugation_certificate
                ));
            }
            let summary = json!({
                "generator": generator,
                "k_max": k_max,
                "search_k": search_k,
                "fiber_strictly_increasing": rows.windows(2).all(|w| w[0].fiber_length < w[1].fiber_length),
                "ambient_within_2k_plus_1": rows.iter().all(|r| r.ambient_length as u32 <= 2 * r.k + 1),
                "final_ratio": rows.last().map(|r| format_rat(&r.ratio)),
                "rows": rows,
            });
            Ok(vec![
                csv(name("distortion", "csv"), body),
                json_artifact(name("distortion", "json"), &summary)?,
            ])
        }
        Step::TreeConeFamily(family) => tree_cone_family(ctx, family, &name),
        Step::ConeQcFamily(family) => cone_qc_family(ctx, family, &name),
        Step::FellowTravelCycles { n_min, n_max } => {
            if *n_min < 2 || n_min > n_max {
                return Err(CliError::schema("fellow_travel_cycles needs 2 <= n_min <= n_max"));
            }
            let mut body = String::from("n,vertices,max_hausdorff,worst_u,worst_v\n");
            let mut values = Vec::new();
            for n in *n_min..=*n_max {
                let c = families::cycle(2 * n);
                let opts = ConeOffOptions {
                    calibration_pairs: 0,
                    ..ConeOffOptions::default()
                };
                let cg = ConedGraph::new(&c, vec![ConeSet::new(0, [0, n])], opts)?;
                let rows = cg.fellow_travel_stats(&all_pairs(2 * n))?;
                let worst = rows
                    .iter()
                    .max_by(|a, b| a.hausdorff.cmp(&b.hausdorff).then(b.u.cmp(&a.u)).then(b.v.cmp(&a.v)))
                    .ok_or_else(|| CliError::invariant("no pairs"))?;
                body.push_str(&format!(
                    "{n},{},{},{},{}\n",
                    2 * n,
                    format_rat(&worst.hausdorff),
                    worst.u,
                    worst.v
                ));
                values.push(worst.hausdorff);
            }
            let summary = json!({
                "n_min": n_min,
                "n_max": n_max,
                "max_hausdorff": values.iter().map(format_rat).collect::<Vec<_>>(),
                "overall_max": format_rat(&max_rat(values.iter().copied())),
            });
            Ok(vec![
                csv(name("fellow_travel", "csv"), body),
                json_artifact(name("fellow_travel", "json"), &summary)?,
            ])
        }
        Step::MitraProfile {
            polygon,
            embedding,
            restrict_edge,
            generators,
            basepoint_cell,
            radius,
            n_max,
        } => {
            let polygon = ctx.loaded.polygon(polygon)?;
            let tree_data = polygon.restrict_to_edge(restrict_edge)?.development_data()?;
            let n_max = n_max.unwrap_or(radius.saturating_sub(1));
            let ball = |data: &DevelopmentData, r: usize| -> CliResult<DevelopmentBall> {
                let gens = gens_by_name(&data.group, generators)?;
                Ok(development_ball(data, &gens, r, ctx.budget)?)
            };
            let tree = ball(&tree_data, *radius)?;
            let y0 = tree.vertex_of_word(basepoint_cell, "1")?;
            let (stem, profile, source_vertices, target_vertices) = match embedding {
                EmbeddingKind::Identity => {
                    let ident: Vec<usize> = (0..tree.vertices.len()).collect();
                    let emb = Embedding::identity(&tree.skeleton, &ident)?;
                    let p = mitra_profile(&emb, y0, n_max, BoundaryCut::default())?;
                    ("identity", p, tree.vertices.len(), tree.vertices.len())
                }
                EmbeddingKind::Subtree => {
                    let small = ball(&tree_data, radius / 2)?;
                    let map = coset_correspondence(&small, &tree, &BTreeMap::new())?;
                    let emb = Embedding::new(&small.skeleton, &tree.skeleton, &map)?;
                    let s0 = small.vertex_of_word(basepoint_cell, "1")?;
                    let p = mitra_profile(&emb, s0, n_max, BoundaryCut::default())?;
                    ("subtree", p, small.vertices.len(), tree.vertices.len())
                }
                EmbeddingKind::TreeIntoDevelopment => {
                    let x = ball(&polygon.development_data()?, *radius)?;
                    let map = coset_correspondence(&tree, &x, &BTreeMap::new())?;
                    let emb = Embedding::new(&tree.skeleton, &x.skeleton, &map)?;
                    let cut = BoundaryCut {
                        source: tree.boundary_threshold(),
                        target: x.boundary_threshold(),
                    };
                    let p = mitra_profile(&emb, y0, n_max, cut)?;
                    ("tree_into_development", p, tree.vertices.len(), x.vertices.len())
                }
            };
            let stem = format!("mitra_{stem}_r{radius}");
            let summary = mitra_summary(&profile, *embedding, *radius, source_vertices, target_vertices);
            Ok(vec![
                csv(name(&stem, "csv"), profile.to_csv()),
                json_artifact(name(&stem, "json"), &summary)?,
            ])
        }
        Step::DeltaFourPoint {
            graph,
            mode,
            budget,
            count,
        } => {
            let g = ctx.loaded.graph(graph)?;
            let mode = match mode {
                DeltaModeName::Exhaustive => DeltaMode::Exhaustive { budget: *budget },
                DeltaModeName::Sampled => DeltaMode::Sampled {
                    count: *count,
                    seed: ctx.seed("delta_four_point")?,
                },
                DeltaModeName::Auto => DeltaMode::Auto {
                    budget: *budget,
                    count: *count,
                    seed: ctx.seed("delta_four_point")?,
                },
            };
            let report = delta_four_point(&g, mode)?;
            let body = format!(
                "vertices,delta,exact,quadruples\n{},{},{},{}\n",
                g.vertex_count(),
                format_rat(&report.delta),
                report.exact,
                report.quadruples
            );
            Ok(vec![
                csv(name("delta", "csv"), body),
                json_artifact(name("delta", "json"), &json!({ "mode": mode, "report": report }))?,
            ])
        }
        Step::CayleyBall {
            group,
            generators,
            radius,
        } => {
            let s = ctx.loaded.group(group)?;
            let gens = gens_by_name(&s.group, generators)?;
            let b = cayley_ball(&s.group, &gens, *radius, ctx.budget)?;
            let mut graph = b.graph.to_json();
            graph.push('\n');
            Ok(vec![
                Artifact {
                    name: name("cayley_graph", "json"),
                    bytes: graph.into_bytes(),
                },
                csv(name("cayley_registry", "csv"), b.registry_csv(&s.group)),
            ])
        }
        Step::DevelopmentBall {
            polygon,
            restrict_edge,
            generators,
            radius,
        } => {
            let mut polygon = ctx.loaded.polygon(polygon)?;
            if let Some(e) = restrict_edge {
                polygon = polygon.restrict_to_edge(e)?;
            }
            let data = polygon.development_data()?;
            let gens = gens_by_name(&data.group, generators)?;
            let b = development_ball(&data, &gens, *radius, ctx.budget)?;
            let mut graph = b.skeleton.to_json();
            graph.push('\n');
            Ok(vec![
                Artifact {
                    name: name("development_skeleton", "json"),
                    bytes: graph.into_bytes(),
                },
                csv(name("development_registry", "csv"), b.registry_csv()),
            ])
        }
    }
}

fn mitra_summary(
    p: &MitraProfile,
    embedding: EmbeddingKind,
    radius: usize,
    source_vertices: usize,
    target_vertices: usize,
) -> serde_json::Value {
    let defined: Vec<(usize, Rat)> = p
        .values
        .iter()
        .enumerate()
        .filter_map(|(n, m)| m.map(|m| (n, m)))
        .collect();
    json!({
        "embedding": embedding_name(embedding),
        "radius": radius,
        "source_vertices": source_vertices,
        "target_vertices": target_vertices,
        "equals_n": defined.iter().all(|(n, m)| *m == rat(*n as i64)),
        "at_least_n": defined.iter().all(|(n, m)| *m >= rat(*n as i64)),
        "max_from_3": defined.iter().filter(|(n, _)| *n >= 3).map(|(_, m)| *m).max().map(|m| format_rat(&m)),
        "profile": p,
    })
}

fn embedding_name(e: EmbeddingKind) -> &'static str {
    match e {
        EmbeddingKind::Identity => "identity",
        EmbeddingKind::Subtree => "subtree",
        EmbeddingKind::TreeIntoDevelopment => "tree_into_development",
    }
}

fn tree_cone_family(
    ctx: &RunContext<'_>,
    family: &TreeFamily,
    name: &dyn Fn(&str, &str) -> String,
) -> CliResult<Vec<Artifact>> {
    family.validate()?;
    let seed = ctx.seed("tree_cone_family")?;
    let mut body = String::from("instance,seed,vertices,extended_vertices,delta,exact,quadruples\n");
    let mut deltas = Vec::new();
    for (i, n) in family.sizes().into_iter().enumerate() {
        let s = seed.wrapping_add(i as u64);
        let t = coned_tree(n, family.cones, family.max_set_radius, s)?;
        let ext = cone_extension(&t.tree, &t.sets)?;
        let budget = ext.vertex_count().min(ctx.budget);
        let report = delta_four_point(&ext, DeltaMode::Exhaustive { budget })?;
        body.push_str(&format!(
            "{i},{s},{n},{},{},{},{}\n",
            ext.vertex_count(),
            format_rat(&report.delta),
            report.exact,
            report.quadruples
        ));
        deltas.push(report.delta);
    }
    let summary = json!({
        "seed": seed,
        "sizes": family.sizes(),
        "cones": family.cones,
        "max_set_radius": family.max_set_radius,
        "delta": deltas.iter().map(format_rat).collect::<Vec<_>>(),
        "max_delta": format_rat(&max_rat(deltas.iter().copied())),
    });
    Ok(vec![
        csv(name("tree_cone_delta", "csv"), body),
        json_artifact(name("tree_cone_delta", "json"), &summary)?,
    ])
}

fn cone_qc_family(
    ctx: &RunContext<'_>,
    family: &TreeFamily,
    name: &dyn Fn(&str, &str) -> String,
) -> CliResult<Vec<Artifact>> {
    family.validate()?;
    let seed = ctx.seed("cone_qc_family")?;
    let mut body = String::from("instance,seed,vertices,segment_start,segment_end,segment_length,qc_constant\n");
    let mut ks = Vec::new();
    for (i, n) in family.sizes().into_iter().enumerate() {
        let s = seed.wrapping_add(i as u64);
        let t = coned_tree(n, family.cones, family.max_set_radius, s)?;
        let ext = cone_extension(&t.tree, &t.sets)?;
        let (u, v) = t.segment;
        let q = t.tree.geodesic(u, v)?;
        let k = quasiconvexity_constant(&ext, &q.vertices)?;
        body.push_str(&format!(
            "{i},{s},{n},{u},{v},{},{}\n",
            format_rat(&q.total_length),
            format_rat(&k)
        ));
        ks.push(k);
    }
    let summary = json!({
        "seed": seed,
        "sizes": family.sizes(),
        "qc_constant": ks.iter().map(format_rat).collect::<Vec<_>>(),
        "max_qc_constant": format_rat(&max_rat(ks.iter().copied())),
    });
    Ok(vec![
        csv(name("cone_qc", "csv"), body),
        json_artifact(name("cone_qc", "json"), &summary)?,
    ])
}
