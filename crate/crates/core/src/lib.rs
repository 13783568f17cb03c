//! COBOL modernization toolkit: parsing and repair, corpus curation,
//! complexity metrics, rule-based and model-steered translation to a Java
//! AST, differential evaluation, and report generation.

pub mod analysis;
pub mod cobol;
pub mod corpus;
pub mod evaluate;
pub mod model;
pub mod report;
pub mod transpile;
pub mod tree;
