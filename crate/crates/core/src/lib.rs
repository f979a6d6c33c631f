//! Exact lattice and configuration checks for rational curves on K3 surfaces.

pub mod bounds;
pub mod catalog;
pub mod exact;
pub mod fibration;
pub mod format;
pub mod graph;
pub mod kodaira;
pub mod roots;
