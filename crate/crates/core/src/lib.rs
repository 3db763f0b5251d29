//! Colored polyominoes and the smallest-superpolyomino problem.
//!
//! * [`geometry`]: cells, offsets, polyominoes, compatibility and containment.
//! * [`instance`]: problem instances, layouts and their evaluation.
//! * [`solver`]: exact, brute-force, greedy and one-dimensional solvers.
//! * [`coloring`]: the graph-coloring reduction and its two-color variant.
//! * [`setcover`]: the one-color set-cover reduction.
//! * [`oracles`]: independent brute-force references.
//! * [`text`], [`render`]: file formats and SVG output.
//! * [`dispatch`]: mode selection shared by the CLI and the C bindings.

pub mod coloring;
pub mod dispatch;
pub mod geometry;
pub mod instance;
pub mod oracles;
pub mod render;
pub mod setcover;
pub mod solver;
pub mod text;

pub use geometry::{Cell, CellCluster, ColorId, GeometryError, Offset, Polyomino};
pub use instance::{evaluate_layout, Instance, Layout, LayoutError};
pub use solver::{SolveMode, SolveResult, SolverConfig};
