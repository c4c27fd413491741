//! Optimal nets of polyhedral shells.
//!
//! A net is obtained by cutting a polyhedron along a spanning tree of its
//! edges and unfolding the faces into the plane. Nets whose cut has the most
//! leaves are the most compact; this crate enumerates every such maximum-leaf
//! spanning tree exactly, deduplicates them under the shell's symmetry
//! group, unfolds and ranks the resulting nets by radius of gyration, and
//! handles shells with a hole.

pub mod analysis;
pub mod bitset;
pub mod catalog;
pub mod counting;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod holes;
pub mod io;
pub mod mlst;
pub mod polyhedron;
mod scalar;
pub mod symmetry;

pub use bitset::{EdgeSet, VertexSet, MAX_EDGES, MAX_VERTICES};
pub use counting::{count_spanning_trees, enumerate_spanning_trees, DEFAULT_TREE_CAP};
pub use error::{Error, Result};
pub use geometry::{
    centroid_and_rg, check_overlap, export_svg, rank_nets, select_optimal_net, unfold,
    vertex_connections, NetLayout, OverlapReport, SvgOptions, Unfolder,
};
pub use graph::{build_face_graph, build_graphs, build_shell_graph, Cut, FaceGraph, ShellGraph};
pub use holes::{enumerate_hole_cuts, HoleCutResult, HoleSpec, OpenShell};
pub use mlst::{enumerate_mlsts, enumerate_mlsts_with, MlstResult, SearchConfig};
pub use polyhedron::{validate_polyhedron, Diagnostics, PolyhedronSpec};
pub use scalar::Scalar;
pub use symmetry::{
    canonical_cut, dedupe_cuts, find_automorphisms, AutomorphismGroup, CanonicalCut,
};

/// Double-precision polyhedron.
pub type Polyhedron = PolyhedronSpec<f64>;
/// Double-precision net.
pub type Net = NetLayout<f64>;
pub type RankedNet = geometry::RankedNet<f64>;
