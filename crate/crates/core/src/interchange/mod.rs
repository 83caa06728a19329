//! File formats: canonical robot and dataset JSON, DOT export, URDF annotations,
//! and distance-matrix tables.

mod dot;
mod json;
mod matrix;
mod urdf;

use thiserror::Error;

use crate::morphology::MorphologyError;

pub use dot::to_dot;
pub use json::{
    dataset_records_from_json, dataset_to_json, from_json, is_dataset_document, record_from_json, record_to_json,
    round_trip, to_json,
};
pub use matrix::{exactness_to_csv, matrix_to_csv, matrix_to_json};
pub use urdf::to_urdf_annotation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterchangeError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("record `{record}`: {message}")]
    Schema { record: String, message: String },
    #[error(transparent)]
    InvalidMorphology(#[from] MorphologyError),
    #[error("unknown node `{0}` in link map")]
    UnknownNode(String),
    #[error("link name `{0}` is mapped from more than one node")]
    DuplicateLink(String),
}
