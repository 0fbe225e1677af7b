//! On-disk formats: IFS and germ JSON, polynomial text, point-cloud CSV and
//! SVG scatter plots.

mod csv_cloud;
mod germ;
mod ifs;
mod polynomial;
mod svg;

pub use csv_cloud::{read_csv, write_csv};
pub use germ::{parse_germ, write_germ, GermFile};
pub use ifs::{
    parse_ifs, parse_matrix, write_ifs, CurveMeta, IfsFile, MapEntry, NumberMode, ParsedIfs,
};
pub use polynomial::parse_polynomial;
pub use svg::{write_svg, SvgOptions};

use selfaffine_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{0}")]
    Invalid(String),
}

impl FormatError {
    pub fn kind(&self) -> &'static str {
        match self {
            FormatError::Json(_) => "json",
            FormatError::Csv(_) => "csv",
            FormatError::Core(_) => "value",
            FormatError::Invalid(_) => "format",
        }
    }
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;
