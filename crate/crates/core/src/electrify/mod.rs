//! Cone-offs, electric paths, de-electrification and horoball attachment.

mod cone;
mod horoball;

pub use cone::{
    all_pairs, compare_cone_offs, cone_extension, cone_off, coned_tree, indexed_sets, ConeComparison, ConeMetadata,
    ConeOffOptions, ConeSet, ConedGraph, ConedGraphData, ConedTree, ElectricPath, FellowTravelRow,
};
pub use horoball::{attach_horoballs, HoroballGraph};
