//! Finite-scale boundary diagnostics: divergence of sequences, ray
//! classification against coned sets, projection growth, Mitra profiles and
//! probes for the consistency of boundary maps.
//!
//! Every verdict carries the cutoff it was computed with. Nothing here
//! materializes a boundary point; asymptotic statements only appear as curves
//! over the sampled scale.

use std::borrow::Cow;

use serde::Serialize;

use crate::electrify::ConedGraph;
use crate::error::{Error, Result};
use crate::graph::{ser_rat, MetricGraph, VertexId};
use crate::metric::projection_with_row;
use crate::rational::{format_rat, rat, Rat};

/// Gain below which a curve is said to stall over its final third.
pub const STALL_GAIN: i64 = 1;

/// `curve[last] − curve[last − ⌈len/3⌉] < STALL_GAIN`.
fn stalls(curve: &[Rat]) -> bool {
    if curve.len() < 2 {
        return true;
    }
    let third = curve.len().div_ceil(3).max(1).min(curve.len() - 1);
    let last = curve.len() - 1;
    curve[last] - curve[last - third] < rat(STALL_GAIN)
}

fn tail_infimum(values: &[Rat]) -> Vec<Rat> {
    let mut out = values.to_vec();
    for i in (0..out.len().saturating_sub(1)).rev() {
        out[i] = out[i].min(out[i + 1]);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Divergence {
    Growing,
    Stalled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivergenceProfile {
    pub basepoint: VertexId,
    pub sequence: Vec<VertexId>,
    /// `table[m][n] = (x_m . x_n)_basepoint` for `n ≤ m`.
    #[serde(skip)]
    pub table: Vec<Vec<Rat>>,
    /// `k ↦ min over m > n ≥ k of (x_m . x_n)` for `k < len − 1`; a single
    /// point sequence gets its diagonal entry.
    #[serde(skip)]
    pub tail_infimum: Vec<Rat>,
    pub tail_infimum_text: Vec<String>,
    pub verdict: Divergence,
    pub stall_gain: i64,
}

impl DivergenceProfile {
    pub fn table_csv(&self) -> String {
        let mut out = String::from("m,n,gromov_product\n");
        for (m, row) in self.table.iter().enumerate() {
            for (n, p) in row.iter().enumerate() {
                out.push_str(&format!("{m},{n},{}\n", format_rat(p)));
            }
        }
        out
    }

    pub fn curve_csv(&self) -> String {
        let mut out = String::from("k,tail_infimum\n");
        for (k, p) in self.tail_infimum.iter().enumerate() {
            out.push_str(&format!("{k},{}\n", format_rat(p)));
        }
        out
    }
}

pub fn divergence_profile(g: &MetricGraph, seq: &[VertexId], basepoint: VertexId) -> Result<DivergenceProfile> {
    if seq.is_empty() {
        return Err(Error::EmptySet("sequence"));
    }
    let mut table = Vec::with_capacity(seq.len());
    for (m, &xm) in seq.iter().enumerate() {
        let row = seq[..=m]
            .iter()
            .map(|&xn| g.gromov_product(basepoint, xm, xn))
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    let len = seq.len();
    let off_diagonal: Vec<Rat> = if len == 1 {
        vec![table[0][0]]
    } else {
        (0..len - 1)
            .map(|n| (n + 1..len).map(|m| table[m][n]).min().expect("nonempty tail"))
            .collect()
    };
    let tail = tail_infimum(&off_diagonal);
    Ok(DivergenceProfile {
        basepoint,
        sequence: seq.to_vec(),
        tail_infimum_text: tail.iter().map(format_rat).collect(),
        verdict: if stalls(&tail) {
            Divergence::Stalled
        } else {
            Divergence::Growing
        },
        tail_infimum: tail,
        table,
        stall_gain: STALL_GAIN,
    })
}

/// Finite prefix of a would-be geodesic ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayPrefix {
    pub vertices: Vec<VertexId>,
}

impl RayPrefix {
    /// Checks that `vertices` is a geodesic of `g` starting at its first entry.
    pub fn new(g: &MetricGraph, vertices: Vec<VertexId>) -> Result<Self> {
        let Some(&start) = vertices.first() else {
            return Err(Error::InvalidPath("empty ray prefix".into()));
        };
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        let row = g.distances_from(start)?;
        let mut walked = rat(0);
        for (i, w) in vertices.windows(2).enumerate() {
            let step = g
                .edge_length(w[0], w[1])
                .ok_or_else(|| Error::InvalidPath(format!("no edge {} {}", w[0], w[1])))?;
            walked += step;
            if row[w[1]] != walked {
                return Err(Error::InvalidPath(format!(
                    "prefix stops being geodesic at step {}",
                    i + 1
                )));
            }
        }
        Ok(RayPrefix { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class", content = "set")]
pub enum RayClass {
    Horizontal,
    Vertical(usize),
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayClassification {
    pub class: RayClass,
    pub window: usize,
    #[serde(serialize_with = "ser_rat")]
    pub extended_diameter: Rat,
    /// Projection diameter of the prefix onto each coned set, by set id.
    pub projection_diameters: Vec<(usize, String)>,
}

/// `⌊radius/3⌋`.
pub fn default_window(radius: usize) -> usize {
    radius / 3
}

/// Horizontal when the prefix spreads past `window` in the coned metric;
/// Vertical(i) when it stays below `window` there while its projection onto
/// `Aᵢ` spreads past it; Undetermined otherwise or for prefixes with fewer
/// than `window` steps.
pub fn classify_ray(cg: &ConedGraph, ray: &RayPrefix, window: usize) -> Result<RayClassification> {
    let base = cg.base();
    for &v in &ray.vertices {
        if v >= base.vertex_count() {
            return Err(Error::InvalidPath(format!("vertex {v} is not in the base graph")));
        }
    }
    let ext = cg.extended().diameter_of(&ray.vertices)?;
    let mut diameters = Vec::with_capacity(cg.sets().len());
    for set in cg.sets() {
        diameters.push((set.id, projection_diameter(base, &set.members, &ray.vertices)?));
    }
    let w = rat(window as i64);
    let steps = ray.len().saturating_sub(1);
    let class = if steps < window {
        RayClass::Undetermined
    } else if ext > w {
        RayClass::Horizontal
    } else if ext < w {
        diameters
            .iter()
            .filter(|(_, d)| *d > w)
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map_or(RayClass::Undetermined, |&(id, _)| RayClass::Vertical(id))
    } else {
        RayClass::Undetermined
    };
    Ok(RayClassification {
        class,
        window,
        extended_diameter: ext,
        projection_diameters: diameters.iter().map(|(id, d)| (*id, format_rat(d))).collect(),
    })
}

fn projection_diameter(g: &MetricGraph, set: &[VertexId], points: &[VertexId]) -> Result<Rat> {
    let growth = projection_growth_raw(g, set, points)?;
    Ok(growth.last().copied().unwrap_or(rat(0)))
}

fn projection_growth_raw(g: &MetricGraph, set: &[VertexId], points: &[VertexId]) -> Result<Vec<Rat>> {
    if set.is_empty() {
        return Err(Error::EmptySet("projection target"));
    }
    for &a in set {
        g.check_vertex(a)?;
    }
    let mut projected: Vec<VertexId> = Vec::new();
    let mut best = 0i64;
    let mut out = Vec::with_capacity(points.len());
    for &x in points {
        let p = projection_with_row(&g.row(x)?, set);
        let row = g.row(p)?;
        for &q in &projected {
            best = best.max(row[q]);
        }
        projected.push(p);
        out.push(g.to_rat(best));
    }
    Ok(out)
}

/// `n ↦ diameter of the projections of r[0..=n] onto A`.
pub fn limit_projection_growth(g: &MetricGraph, a: &[VertexId], ray: &RayPrefix) -> Result<Vec<Rat>> {
    projection_growth_raw(g, a, &ray.vertices)
}

pub fn projection_growth_csv(curve: &[Rat]) -> String {
    let mut out = String::from("n,projection_diameter\n");
    for (n, d) in curve.iter().enumerate() {
        out.push_str(&format!("{n},{}\n", format_rat(d)));
    }
    out
}

/// A vertex map `Y → X` checked injective and 1-Lipschitz on edges.
#[derive(Clone, Copy, Debug)]
pub struct Embedding<'a> {
    pub source: &'a MetricGraph,
    pub target: &'a MetricGraph,
    pub map: &'a [VertexId],
}

impl<'a> Embedding<'a> {
    pub fn new(source: &'a MetricGraph, target: &'a MetricGraph, map: &'a [VertexId]) -> Result<Self> {
        if map.len() != source.vertex_count() {
            return Err(Error::IndexMismatch(format!(
                "map has {} entries for {} vertices",
                map.len(),
                source.vertex_count()
            )));
        }
        let mut seen = vec![false; target.vertex_count()];
        for &x in map {
            target.check_vertex(x)?;
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidArgument(format!("map is not injective at {x}")));
            }
        }
        for (u, v, len) in source.edges() {
            if target.distance(map[u], map[v])? > len {
                return Err(Error::InvalidArgument(format!("edge {u} {v} is stretched by the map")));
            }
        }
        Ok(Embedding { source, target, map })
    }

    pub fn identity(g: &'a MetricGraph, map: &'a [VertexId]) -> Result<Self> {
        Self::new(g, g, map)
    }
}

/// Distances at or beyond a threshold are boundary-affected.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundaryCut {
    #[serde(serialize_with = "ser_opt_rat")]
    pub source: Option<Rat>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub target: Option<Rat>,
}

fn ser_opt_rat<S: serde::Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rat(r)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MitraProfile {
    pub basepoint: VertexId,
    /// `N ↦ M(N)`, `None` when no pair has its source interval outside `B(y₀, N)`.
    #[serde(skip)]
    pub values: Vec<Option<Rat>>,
    pub table: Vec<(usize, Option<String>)>,
    pub pairs_examined: usize,
    pub pairs_excluded: usize,
    pub sampling: &'static str,
    pub cut: BoundaryCut,
}

impl MitraProfile {
    pub fn m(&self, n: usize) -> Option<Rat> {
        self.values.get(n).copied().flatten()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,M\n");
        for (n, m) in &self.table {
            out.push_str(&format!("{n},{}\n", m.as_deref().unwrap_or("")));
        }
        out
    }
}

fn rows_for<'g>(g: &'g MetricGraph, vs: impl Iterator<Item = VertexId>) -> Result<Vec<Cow<'g, [i64]>>> {
    vs.map(|v| g.row(v)).collect()
}

/// `M(N) = min d_X(f(y₀), I_X(f(u), f(v)))` over source pairs `u ≤ v` whose
/// interval `I_Y(u, v)` avoids the open ball `B_Y(y₀, N)`, for `N = 0..=n_max`.
/// Intervals are full unions of geodesics on both sides.
pub fn mitra_profile(emb: &Embedding<'_>, y0: VertexId, n_max: usize, cut: BoundaryCut) -> Result<MitraProfile> {
    let (y, x, f) = (emb.source, emb.target, emb.map);
    y.check_vertex(y0)?;
    let ny = y.vertex_count();
    let y_rows = rows_for(y, 0..ny)?;
    let x_rows = rows_for(x, f.iter().copied())?;
    let x0 = &x_rows[y0];
    let y_cut = cut.source.map(|t| *t.numer() * (y.scale() / t.denom()));
    let x_cut = cut.target.map(|t| *t.numer() * (x.scale() / t.denom()));
    let affected = |row0: &[i64], ru: &[i64], a: usize, b: usize, limit: Option<i64>| {
        limit.is_some_and(|t| row0[a] >= t || row0[b] >= t || ru[b] >= t)
    };

    // best[k]: least image distance among pairs whose source interval sits at
    // scaled distance exactly k from y0
    let mut best: std::collections::BTreeMap<i64, i64> = std::collections::BTreeMap::new();
    let (mut examined, mut excluded) = (0, 0);
    for u in 0..ny {
        for v in u..ny {
            let (ru, rv) = (&y_rows[u], &y_rows[v]);
            let (xu, xv) = (&x_rows[u], &x_rows[v]);
            if affected(&y_rows[y0], ru, u, v, y_cut) || affected(x0, xu, f[u], f[v], x_cut) {
                excluded += 1;
                continue;
            }
            examined += 1;
            let total = ru[v];
            let a = (0..ny)
                .filter(|&w| ru[w] + rv[w] == total)
                .map(|w| y_rows[y0][w])
                .min()
                .expect("an interval contains its ends");
            let xt = xu[f[v]];
            let b = (0..x.vertex_count())
                .filter(|&w| xu[w] + xv[w] == xt)
                .map(|w| x0[w])
                .min()
                .expect("an interval contains its ends");
            let e = best.entry(a).or_insert(b);
            *e = (*e).min(b);
        }
    }
    let values: Vec<Option<Rat>> = (0..=n_max)
        .map(|n| {
            let threshold = n as i64 * y.scale();
            best.range(threshold..).map(|(_, &b)| b).min().map(|b| x.to_rat(b))
        })
        .collect();
    Ok(MitraProfile {
        basepoint: y0,
        table: values
            .iter()
            .enumerate()
            .map(|(n, m)| (n, m.map(|m| format_rat(&m))))
            .collect(),
        values,
        pairs_examined: examined,
        pairs_excluded: excluded,
        sampling: "exhaustive",
        cut,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CtVerdict {
    Consistent,
    Stalled,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CtRow {
    pub source_curve: Vec<String>,
    pub target_curve: Vec<String>,
    pub source_diverges: bool,
    pub target_diverges: bool,
    pub verdict: CtVerdict,
    pub stall_gain: i64,
}

/// For each pair of equal-length sequences in `Y`, the tail infimum of the
/// mutual products `(a_k . b_k)` at `y₀` and at `f(y₀)`. Diverging in `Y`
/// and in `X` is consistent; diverging in `Y` but stalling in `X` is
/// evidence against a boundary map; no divergence in `Y` is inconclusive.
pub fn ct_consistency_probe(
    emb: &Embedding<'_>,
    y0: VertexId,
    seq_pairs: &[(Vec<VertexId>, Vec<VertexId>)],
) -> Result<Vec<CtRow>> {
    let (y, x, f) = (emb.source, emb.target, emb.map);
    let mut rows = Vec::with_capacity(seq_pairs.len());
    for (a, b) in seq_pairs {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidArgument(
                "sequence pairs must be nonempty and of equal length".into(),
            ));
        }
        let ys = a
            .iter()
            .zip(b)
            .map(|(&p, &q)| y.gromov_product(y0, p, q))
            .collect::<Result<Vec<_>>>()?;
        let xs = a
            .iter()
            .zip(b)
            .map(|(&p, &q)| x.gromov_product(f[y0], f[p], f[q]))
            .collect::<Result<Vec<_>>>()?;
        let (yc, xc) = (tail_infimum(&ys), tail_infimum(&xs));
        let (yd, xd) = (!stalls(&yc), !stalls(&xc));
        let verdict = match (yd, xd) {
            (true, true) => CtVerdict::Consistent,
            (true, false) => CtVerdict::Stalled,
            (false, _) => CtVerdict::Inconclusive,
        };
        rows.push(CtRow {
            source_curve: yc.iter().map(format_rat).collect(),
            target_curve: xc.iter().map(format_rat).collect(),
            source_diverges: yd,
            target_diverges: xd,
            verdict,
            stall_gain: STALL_GAIN,
        });
    }
    Ok(rows)
}
