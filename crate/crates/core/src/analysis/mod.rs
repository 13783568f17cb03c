//! Control-flow graphs, complexity and coupling metrics, and feature extraction.

pub mod cfg;
pub mod features;
pub mod metrics;

pub use cfg::{build_cfg, Cfg, CfgBuilder, CfgEdge, CfgNode, CfgNodeKind, EdgeKind};
pub use features::{file_features, step_features, StepFeatures, FILE_FEATURES, FILE_FEATURE_NAMES, STEP_FEATURES};
pub use metrics::{analyze, coupling, cyclomatic, decision_cyclomatic, MetricsRecord};
