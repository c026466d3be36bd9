//! Exact finite-scale geometry of coned-off graphs, Cayley balls and
//! developments of complexes of groups.

pub mod boundary;
pub mod complex;
pub mod electrify;
pub mod error;
pub mod graph;
pub mod group;
pub mod metric;
pub mod rational;

pub use error::{Error, Result};
pub use graph::{validate, Diagnostics, GeodesicPath, GraphBuilder, GraphData, MetricGraph, VertexId};
pub use metric::{DeltaMode, DeltaReport, DottedPath, QuasiParams};
pub use rational::{format_rat, parse_rat, rat, ratio, Rat};
