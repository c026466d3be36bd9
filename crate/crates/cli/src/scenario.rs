//! Scenario files: a named pipeline of measurement steps.

use std::path::{Path, PathBuf};

use conelab_core::complex::{
    BlockFamily, PolygonFile, PolygonOfGroups, DISTORTED_EDGE_TRIANGLE_JSON, NONPROPER_TRIANGLE_JSON,
};
use conelab_core::group::{GroupScenario, ScenarioFile};
use conelab_core::{GraphData, MetricGraph};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const BUNDLED: [(&str, &str); 5] = [
    ("example-5-7", include_str!("../scenarios/example-5-7.json")),
    (
        "example-5-8-distortion",
        include_str!("../scenarios/example-5-8-distortion.json"),
    ),
    ("tree-cone-family", include_str!("../scenarios/tree-cone-family.json")),
    (
        "cone-qc-persistence",
        include_str!("../scenarios/cone-qc-persistence.json"),
    ),
    (
        "mitra-isometric-vs-5-7",
        include_str!("../scenarios/mitra-isometric-vs-5-7.json"),
    ),
];

/// Polygons known by name.
const NAMED_POLYGONS: [(&str, &str); 2] = [
    ("nonproper-triangle", NONPROPER_TRIANGLE_JSON),
    ("distorted-edge-triangle", DISTORTED_EDGE_TRIANGLE_JSON),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget_vertices: Option<usize>,
    #[serde(default)]
    pub pipeline: Vec<Step>,
}

/// A named polygon, a path relative to the scenario file, or an inline polygon.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PolygonRef {
    Name(String),
    Inline(PolygonFile),
}

/// A path relative to the scenario file or an inline group scenario.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Path(String),
    Inline(ScenarioFile),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Path(String),
    Inline(GraphData),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    Identity,
    Subtree,
    TreeIntoDevelopment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaModeName {
    #[default]
    Exhaustive,
    Sampled,
    Auto,
}

fn d_generator() -> String {
    "x".into()
}
fn d_k_max() -> u32 {
    8
}
fn d_search_k() -> u32 {
    4
}
fn d_instances() -> usize {
    20
}
fn d_min_size() -> usize {
    50
}
fn d_max_size() -> usize {
    400
}
fn d_cones() -> usize {
    5
}
fn d_set_radius() -> usize {
    3
}
fn d_cycle_min() -> usize {
    6
}
fn d_cycle_max() -> usize {
    30
}
fn d_edge() -> String {
    "e3".into()
}
fn d_cell() -> String {
    "v1".into()
}
fn d_radius() -> usize {
    6
}
fn d_ball_radius() -> usize {
    3
}
fn d_delta_budget() -> usize {
    conelab_core::metric::DEFAULT_DELTA_BUDGET
}
fn d_count() -> usize {
    200_000
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Step {
    BlockFamily {
        polygon: PolygonRef,
        #[serde(default)]
        family: Option<BlockFamily>,
    },
    DistortionProfile {
        group: GroupRef,
        #[serde(default = "d_generator")]
        generator: String,
        #[serde(default = "d_k_max")]
        k_max: u32,
        #[serde(default = "d_search_k")]
        search_k: u32,
    },
    TreeConeFamily(TreeFamily),
    ConeQcFamily(TreeFamily),
    FellowTravelCycles {
        #[serde(default = "d_cycle_min")]
        n_min: usize,
        #[serde(default = "d_cycle_max")]
        n_max: usize,
    },
    MitraProfile {
        polygon: PolygonRef,
        embedding: EmbeddingKind,
        #[serde(default = "d_edge")]
        restrict_edge: String,
        #[serde(default)]
        generators: Option<Vec<String>>,
        #[serde(default = "d_cell")]
        basepoint_cell: String,
        #[serde(default = "d_radius")]
        radius: usize,
        #[serde(default)]
        n_max: Option<usize>,
    },
    DeltaFourPoint {
        graph: GraphRef,
        #[serde(default)]
        mode: DeltaModeName,
        #[serde(default = "d_delta_budget")]
        budget: usize,
        #[serde(default = "d_count")]
        count: usize,
    },
    CayleyBall {
        group: GroupRef,
        #[serde(default)]
        generators: Option<Vec<String>>,
        #[serde(default = "d_ball_radius")]
        radius: usize,
    },
    DevelopmentBall {
        polygon: PolygonRef,
        #[serde(default)]
        restrict_edge: Option<String>,
        #[serde(default)]
        generators: Option<Vec<String>>,
        #[serde(default = "d_ball_radius")]
        radius: usize,
    },
}

/// Random trees of evenly spaced sizes with coned balls.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFamily {
    #[serde(default = "d_instances")]
    pub instances: usize,
    #[serde(default = "d_min_size")]
    pub min_size: usize,
    #[serde(default = "d_max_size")]
    pub max_size: usize,
    #[serde(default = "d_cones")]
    pub cones: usize,
    #[serde(default = "d_set_radius")]
    pub max_set_radius: usize,
}

impl TreeFamily {
    /// Sizes from `min_size` to `max_size`, evenly spaced and rounded to nearest.
    pub fn sizes(&self) -> Vec<usize> {
        let span = self.max_size - self.min_size;
        match self.instances {
            0 => Vec::new(),
            1 => vec![self.min_size],
            k => (0..k)
                .map(|i| self.min_size + (span * i + (k - 1) / 2) / (k - 1))
                .collect(),
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.min_size == 0 || self.min_size > self.max_size || self.max_set_radius == 0 {
            return Err(CliError::schema(
                "tree family needs 1 <= min_size <= max_size and max_set_radius >= 1",
            ));
        }
        Ok(())
    }
}

impl Step {
    pub fn op_name(&self) -> &'static str {
        match self {
            Step::BlockFamily { .. } => "block_family",
            Step::DistortionProfile { .. } => "distortion_profile",
            Step::TreeConeFamily(_) => "tree_cone_family",
            Step::ConeQcFamily(_) => "cone_qc_family",
            Step::FellowTravelCycles { .. } => "fellow_travel_cycles",
            Step::MitraProfile { .. } => "mitra_profile",
            Step::DeltaFourPoint { .. } => "delta_four_point",
            Step::CayleyBall { .. } => "cayley_ball",
            Step::DevelopmentBall { .. } => "development_ball",
        }
    }

    /// Steps that draw random samples and so need a seed.
    pub fn is_sampled(&self) -> bool {
        match self {
            Step::TreeConeFamily(_) | Step::ConeQcFamily(_) => true,
            Step::DeltaFourPoint { mode, .. } => *mode != DeltaModeName::Exhaustive,
            _ => false,
        }
    }
}

/// A parsed scenario plus the directory its relative inputs resolve against.
pub struct Loaded {
    pub scenario: Scenario,
    pub base_dir: PathBuf,
}

/// Loads a scenario file, or a bundled scenario when no such file exists.
pub fn load(arg: &str) -> CliResult<Loaded> {
    let path = Path::new(arg);
    let (text, base_dir) = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::schema(format!("{arg}: {e}")))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        (text, dir)
    } else if let Some((_, text)) = BUNDLED.iter().find(|(name, _)| *name == arg) {
        (text.to_string(), PathBuf::from("."))
    } else {
        return Err(CliError::schema(format!(
            "{arg:?} is neither a scenario file nor a bundled scenario"
        )));
    };
    let scenario: Scenario = serde_json::from_str(&text)?;
    if scenario.budget_vertices == Some(0) {
        return Err(CliError::schema("budget_vertices must be positive"));
    }
    Ok(Loaded { scenario, base_dir })
}

fn read_input(base: &Path, rel: &str) -> CliResult<String> {
    let p = base.join(rel);
    std::fs::read_to_string(&p).map_err(|e| CliError::schema(format!("input {}: {e}", p.display())))
}

impl Loaded {
    pub fn polygon(&self, r: &PolygonRef) -> CliResult<PolygonOfGroups> {
        Ok(match r {
            PolygonRef::Inline(file) => PolygonOfGroups::from_file(file)?,
            PolygonRef::Name(name) => match NAMED_POLYGONS.iter().find(|(n, _)| n == name) {
                Some((_, json)) => PolygonOfGroups::from_json(json)?,
                None => PolygonOfGroups::from_json(&read_input(&self.base_dir, name)?)?,
            },
        })
    }

    pub fn group(&self, r: &GroupRef) -> CliResult<GroupScenario> {
        Ok(match r {
            GroupRef::Inline(file) => GroupScenario::from_file(file)?,
            GroupRef::Path(p) => GroupScenario::from_json(&read_input(&self.base_dir, p)?)?,
        })
    }

    pub fn graph(&self, r: &GraphRef) -> CliResult<MetricGraph> {
        Ok(match r {
            GraphRef::Inline(data) => MetricGraph::from_data(data)?,
            GraphRef::Path(p) => MetricGraph::from_json(&read_input(&self.base_dir, p)?)?,
        })
    }
}

pub fn named_polygons() -> impl Iterator<Item = &'static str> {
    NAMED_POLYGONS.iter().map(|(n, _)| *n)
}
