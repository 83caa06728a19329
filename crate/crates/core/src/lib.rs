mod canon;
pub mod cli;
pub mod dataset;
pub mod distance;
pub mod interchange;
pub mod morphology;
pub mod taxonomy;
