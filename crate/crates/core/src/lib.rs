//! Headless engine for responsive matrix cells: an overview matrix of a
//! multivariate graph (edges below the diagonal, node similarity above)
//! with zoomable focus cells that embed detail charts and support direct
//! editing of attribute values.

pub mod color;
pub mod editing;
pub mod fixture;
pub mod graph;
pub mod layout;
pub mod model;
pub mod ordering;
pub mod rmc;
pub mod scene;
pub mod session;
pub mod similarity;
pub mod svg;
pub mod scenegen;
pub mod server;
