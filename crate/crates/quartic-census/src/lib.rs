//! Censuses of real quadratic and totally complex quartic orders: class
//! numbers, regulators and weighted counts against their asymptotic curves.

pub mod cache;
pub mod config;
pub mod csv_io;
pub mod error;
pub mod quadratic;
pub mod quartic;
pub mod special;
pub mod table;
