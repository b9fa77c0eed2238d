pub mod arith;
pub mod class_group;
pub mod error;
pub mod field;
pub mod forms;
pub(crate) mod geometry;
pub mod order;
pub mod ideal;
pub mod splitting;
pub mod lattice;
pub mod units;
pub mod rep;
pub mod invariants;
pub mod geodesic;
