//! Hyperbolicity, slimness, quasiconvexity and quasigeodesic measurements.
//!
//! Every routine works on exact scaled integer distances taken from
//! [`MetricGraph`] and reports rationals. Vertex sets are slices; duplicates
//! are harmless.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ser_rat, MetricGraph, VertexId};
use crate::rational::{rat, ratio, round_up_to_lattice, Rat};

/// Default vertex cap for the exhaustive quadruple scan.
pub const DEFAULT_DELTA_BUDGET: usize = 300;

/// How [`delta_four_point`] explores quadruples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum DeltaMode {
    /// Every 4-subset; refused above `budget` vertices.
    Exhaustive { budget: usize },
    /// `count` uniform random quadruples from a seeded generator; a lower bound.
    Sampled { count: usize, seed: u64 },
    /// Exhaustive up to `budget` vertices, sampled above it.
    Auto { budget: usize, count: usize, seed: u64 },
}

impl Default for DeltaMode {
    fn default() -> Self {
        DeltaMode::Exhaustive {
            budget: DEFAULT_DELTA_BUDGET,
        }
    }
}

/// Which hyperbolicity constant a report carries. The two differ by a bounded
/// factor and are never converted into each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaConstant {
    FourPoint,
    SlimTriangle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub constant: DeltaConstant,
    #[serde(serialize_with = "ser_rat")]
    pub delta: Rat,
    /// `true` when every quadruple was examined.
    pub exact: bool,
    pub quadruples: u64,
    pub seed: Option<u64>,
    /// A quadruple attaining `delta`, when `delta > 0`.
    pub witness: Option<[VertexId; 4]>,
}

/// Four-point hyperbolicity constant
/// `max over (x,y,z,w) of min((x.z)_w, (z.y)_w) − (x.y)_w`.
///
/// Computed as half the gap between the two largest of the three pair sums of
/// each unordered 4-subset, which is the same maximum.
pub fn delta_four_point(g: &MetricGraph, mode: DeltaMode) -> Result<DeltaReport> {
    g.require_connected()?;
    let n = g.vertex_count();
    let mode = match mode {
        DeltaMode::Auto { budget, count, seed } => {
            if n <= budget {
                DeltaMode::Exhaustive { budget }
            } else {
                DeltaMode::Sampled { count, seed }
            }
        }
        m => m,
    };
    let table = match mode {
        DeltaMode::Exhaustive { budget } if n > budget => {
            return Err(Error::budget("exhaustive delta vertex", n, budget))
        }
        _ => g.distance_table()?,
    };
    let scale = table.scale();
    match mode {
        DeltaMode::Exhaustive { .. } => {
            let (gap, witness, quadruples) = if table.max_raw() <= i64::from(i32::MAX / 4) {
                let small: Vec<i32> = (0..n).flat_map(|u| table.row(u).iter().map(|&d| d as i32)).collect();
                exhaustive_scan(&small, n)
            } else {
                let rows: Vec<i64> = (0..n).flat_map(|u| table.row(u).to_vec()).collect();
                exhaustive_scan(&rows, n)
            };
            Ok(DeltaReport {
                constant: DeltaConstant::FourPoint,
                delta: Rat::new(gap, 2 * scale),
                exact: true,
                quadruples,
                seed: None,
                witness,
            })
        }
        DeltaMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = 0i64;
            let mut witness = None;
            for _ in 0..count {
                let q: [VertexId; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
                let gap = quadruple_gap(|a, b| table.raw(a, b), q);
                if gap > best {
                    best = gap;
                    witness = Some(q);
                }
            }
            Ok(DeltaReport {
                constant: DeltaConstant::FourPoint,
                delta: Rat::new(best, 2 * scale),
                exact: false,
                quadruples: count as u64,
                seed: Some(seed),
                witness,
            })
        }
        DeltaMode::Auto { .. } => unreachable!("resolved above"),
    }
}

/// Largest pair sum minus the second largest for the quadruple `q`.
fn quadruple_gap(d: impl Fn(VertexId, VertexId) -> i64, q: [VertexId; 4]) -> i64 {
    let [x, y, z, w] = q;
    let mut s = [d(x, y) + d(z, w), d(x, z) + d(y, w), d(x, w) + d(y, z)];
    s.sort_unstable();
    s[2] - s[1]
}

trait Cell: Copy + Ord + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + Into<i64> {
    const ZERO: Self;
}
impl Cell for i32 {
    const ZERO: Self = 0;
}
impl Cell for i64 {
    const ZERO: Self = 0;
}

fn exhaustive_scan<T: Cell>(d: &[T], n: usize) -> (i64, Option<[VertexId; 4]>, u64) {
    let mut best = T::ZERO;
    let mut witness = None;
    let mut count = 0u64;
    for x in 0..n {
        let rx = &d[x * n..(x + 1) * n];
        for y in x + 1..n {
            let ry = &d[y * n..(y + 1) * n];
            let dxy = rx[y];
            for z in y + 1..n {
                let rz = &d[z * n..(z + 1) * n];
                let (dxz, dyz) = (rx[z], ry[z]);
                let tail = z + 1;
                count += (n - tail) as u64;
                // Branch-free inner loop over w; the witness is recovered only
                // when the chunk maximum improves.
                let local = rx[tail..]
                    .iter()
                    .zip(&ry[tail..])
                    .zip(&rz[tail..])
                    .map(|((&dxw, &dyw), &dzw)| {
                        let s1 = dxy + dzw;
                        let s2 = dxz + dyw;
                        let s3 = dxw + dyz;
                        let hi = s1.max(s2).max(s3);
                        let lo = s1.min(s2).min(s3);
                        let mid = s1 + s2 + s3 - hi - lo;
                        hi - mid
                    })
                    .max()
                    .unwrap_or(T::ZERO);
                if local > best {
                    best = local;
                    let w = (tail..n)
                        .find(|&w| {
                            let mut s = [dxy + rz[w], dxz + ry[w], rx[w] + dyz];
                            s.sort_unstable();
                            s[2] - s[1] == local
                        })
                        .expect("maximum is attained");
                    witness = Some([x, y, z, w]);
                }
            }
        }
    }
    (best.into(), witness, count)
}

/// Largest distance from a point of one side to the union of the other sides,
/// over the tie-break geodesic sides of the closed polygon through `corners`.
pub fn polygon_slimness(g: &MetricGraph, corners: &[VertexId]) -> Result<Rat> {
    if corners.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a polygon needs at least 3 corners, got {}",
            corners.len()
        )));
    }
    let k = corners.len();
    let sides = (0..k)
        .map(|i| g.geodesic(corners[i], corners[(i + 1) % k]).map(|p| p.vertices))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0i64;
    for (i, side) in sides.iter().enumerate() {
        for &p in side {
            let row = g.row(p)?;
            let to_rest = sides
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, s)| s.iter().map(|&q| row[q]))
                .min()
                .expect("at least two other sides");
            best = best.max(to_rest);
        }
    }
    Ok(g.to_rat(best))
}

fn dedup(set: &[VertexId]) -> Vec<VertexId> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Scaled `d(w, A)` for every vertex `w`.
fn distance_to_set(g: &MetricGraph, a: &[VertexId]) -> Result<Vec<i64>> {
    let mut best = vec![i64::MAX; g.vertex_count()];
    for &x in a {
        let row = g.row(x)?;
        for (b, &d) in best.iter_mut().zip(row.iter()) {
            *b = (*b).min(d);
        }
    }
    Ok(best)
}

/// Smallest `K` with every geodesic between points of `set` inside `N_K(set)`.
///
/// Uses intervals, so the maximum is over all geodesics rather than the
/// tie-break one.
pub fn quasiconvexity_constant(g: &MetricGraph, set: &[VertexId]) -> Result<Rat> {
    if set.is_empty() {
        return Err(Error::EmptySet("quasiconvex candidate set"));
    }
    let a = dedup(set);
    let to_a = distance_to_set(g, &a)?;
    let rows = a.iter().map(|&x| g.row(x)).collect::<Result<Vec<_>>>()?;
    let mut best = 0i64;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let (ri, rj) = (&rows[i], &rows[j]);
            let total = ri[a[j]];
            for w in 0..g.vertex_count() {
                if ri[w] + rj[w] == total && to_a[w] > best {
                    best = to_a[w];
                }
            }
        }
    }
    Ok(g.to_rat(best))
}

pub fn hausdorff_distance(g: &MetricGraph, s: &[VertexId], t: &[VertexId]) -> Result<Rat> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::EmptySet("Hausdorff operand"));
    }
    for &v in s.iter().chain(t) {
        g.check_vertex(v)?;
    }
    let to_s = distance_to_set(g, s)?;
    let to_t = distance_to_set(g, t)?;
    let one = s.iter().map(|&x| to_t[x]).max().unwrap_or(0);
    let two = t.iter().map(|&y| to_s[y]).max().unwrap_or(0);
    Ok(g.to_rat(one.max(two)))
}

/// A point of `set` nearest to `x`, lowest id on ties.
pub fn nearest_point_projection(g: &MetricGraph, set: &[VertexId], x: VertexId) -> Result<VertexId> {
    if set.is_empty() {
        return Err(Error::EmptySet("projection target"));
    }
    let row = g.row(x)?;
    for &a in set {
        g.check_vertex(a)?;
    }
    Ok(*set.iter().min_by_key(|&&a| (row[a], a)).expect("nonempty"))
}

pub(crate) fn projection_with_row(row: &[i64], set: &[VertexId]) -> VertexId {
    *set.iter().min_by_key(|&&a| (row[a], a)).expect("nonempty set")
}

/// A vertex sequence whose consecutive entries are at most `step_bound` apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DottedPath {
    pub vertices: Vec<VertexId>,
    #[serde(serialize_with = "ser_rat")]
    pub step_bound: Rat,
}

impl DottedPath {
    /// Measures the step bound of `vertices` in `g`.
    pub fn new(g: &MetricGraph, vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("empty vertex sequence".into()));
        }
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        let mut step = 0i64;
        for w in vertices.windows(2) {
            step = step.max(g.raw_distance(w[0], w[1])?);
        }
        Ok(DottedPath {
            vertices,
            step_bound: g.to_rat(step),
        })
    }
}

/// A `(λ, ε)` pair of the quasi-isometric sandwich
/// `d/λ − ε ≤ d' ≤ λ·d + ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiParams {
    #[serde(serialize_with = "ser_rat")]
    pub lambda: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub eps: Rat,
}

impl QuasiParams {
    pub fn new(lambda: Rat, eps: Rat) -> Self {
        QuasiParams { lambda, eps }
    }

    pub fn isometric() -> Self {
        QuasiParams::new(rat(1), Rat::zero())
    }

    /// Whether `(source, image)` satisfies both sides of the sandwich.
    pub fn admits(&self, source: Rat, image: Rat) -> bool {
        source / self.lambda - self.eps <= image && image <= self.lambda * source + self.eps
    }
}

/// The `λ` values searched by [`fit_quasi_params`], in increasing order.
pub fn lambda_lattice() -> [Rat; 7] {
    [rat(1), ratio(9, 8), ratio(5, 4), ratio(3, 2), rat(2), rat(3), rat(4)]
}

/// Denominator bound of the `ε` lattice.
pub const EPS_MAX_DENOM: i64 = 8;

/// Minimal lattice pair admitting every `(source, image)` distance pair.
///
/// Minimizes `λ` first, then `ε`, with `ε` restricted to fractions of
/// denominator at most 8 not exceeding `eps_cap`. When no lattice `λ` fits
/// under the cap, the largest `λ` is returned with its (uncapped) minimal `ε`.
pub fn fit_quasi_params(pairs: &[(Rat, Rat)], eps_cap: Rat) -> QuasiParams {
    let lattice = lambda_lattice();
    let mut last = QuasiParams::isometric();
    for &lambda in &lattice {
        let needed = pairs
            .iter()
            .map(|&(src, img)| (src / lambda - img).max(img - lambda * src))
            .fold(Rat::zero(), Rat::max);
        let eps = round_up_to_lattice(needed, EPS_MAX_DENOM);
        last = QuasiParams::new(lambda, eps);
        if eps <= eps_cap {
            return last;
        }
    }
    last
}

/// Quasigeodesic constants of a dotted path parameterized by index.
///
/// The `ε` search is capped at `max(path diameter, 1)`.
pub fn measure_quasigeodesic(g: &MetricGraph, path: &DottedPath) -> Result<QuasiParams> {
    let vs = &path.vertices;
    if vs.is_empty() {
        return Err(Error::InvalidPath("empty vertex sequence".into()));
    }
    let rows = vs.iter().map(|&v| g.row(v)).collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::with_capacity(vs.len() * vs.len() / 2);
    let mut diameter = 0i64;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let d = rows[i][vs[j]];
            diameter = diameter.max(d);
            pairs.push((rat((j - i) as i64), g.to_rat(d)));
        }
    }
    let cap = g.to_rat(diameter).max(rat(1));
    Ok(fit_quasi_params(&pairs, cap))
}
