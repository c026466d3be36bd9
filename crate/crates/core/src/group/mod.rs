//! Word problems, Cayley balls and subgroup cosets for free products of
//! cyclic groups and `ℤ ⋉ Fₙ` factors.

mod ball;
mod engine;
mod scenario;
mod subgroup;

pub use ball::{
    all_generators, cayley_ball, coset_graph, coset_graph_ball, distortion_profile, height_probe, CayleyBall,
    CosetEntry, CosetGraph, DistortionRow, HeightProbe, DEFAULT_BALL_BUDGET,
};
pub use engine::{
    Element, Factor, GenId, GenRole, Group, Letter, Semidirect, Syllable, Word, PHI_INJECTIVITY_RADIUS,
    PHI_INVERSE_RADIUS,
};
pub use scenario::{default_phi, AmalgamParts, GroupScenario, GroupSpec, ScenarioFile, SubgroupSpec};
pub use subgroup::{Selection, Subgroup};
