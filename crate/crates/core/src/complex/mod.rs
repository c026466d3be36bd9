//! Polygons of groups, their developments and Bass–Serre tree balls.

mod compare;
mod development;
mod polygon;

pub use compare::{
    block_family_report, coned_cayley_vs_development, coset_correspondence, embedding_profile, BlockFamily,
    BlockReport, BlockRow, ConedComparison, EmbeddingProfile, EmbeddingRow, PropernessProfile,
};
pub use development::{
    build_bass_serre_ball, development_ball, development_ball_all, edge_concat_check, in_product, ConcatRow,
    ConcatVerdict, DevEdge, DevFace, DevVertex, DevelopmentBall,
};
pub use polygon::{
    ConditionOneRow, DevelopmentData, EdgeGroup, FundamentalGroup, LocalMapCheck, NamedGroup, Piece, PolygonFile,
    PolygonOfGroups, DISTORTED_EDGE_TRIANGLE_JSON, LOCAL_MAP_SCAN_RADIUS, NONPROPER_TRIANGLE_JSON,
};
