//! Mixed finite element solver for the coupled Stokes / Biot poroelasticity
//! problem in 2D.
//!
//! The free-fluid region is discretized with MINI elements (velocity /
//! pressure), the poroelastic region with a five-field Biot formulation:
//! weakly symmetric stress (tensor BDM1), solid velocity (vector P0),
//! rotation (continuous P1), Darcy velocity (RT0) and Darcy pressure (P0).
//! Interface conditions (mass conservation, stress balance, slip with
//! friction) are enforced with mortar Lagrange multipliers on possibly
//! non-matching grids, and the coupled system is advanced with monolithic
//! backward Euler steps through one sparse LU factorization per run.

pub mod assembly;
pub mod config;
pub mod elements;
pub mod mesh;
pub mod mms;
pub mod scenarios;
pub mod spaces;
pub mod system;
pub mod table;
pub mod vtk;

pub use assembly::{PhysicalParams, SparseOperator};
pub use config::RunConfig;
pub use mesh::{build_rect_mesh, BoundaryTag, Mesh, Rect, Subdomain};
pub use mms::{ErrorReport, ExactSolution};
pub use spaces::{DofMap, FieldId};
pub use system::{BlockSystem, SolutionState};
