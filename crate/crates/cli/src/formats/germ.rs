use serde::{Deserialize, Serialize};

use selfaffine_core::classify::CurveGerm;
use selfaffine_core::rational;
use selfaffine_core::SeriesVec;

use super::ifs::parse_number;
use super::{FormatError, FormatResult, NumberMode};

/// `{"t0": "p/q", "order": N, "coords": [[c0, …, cN], …]}` with the
/// Taylor coefficients of each coordinate in powers of `t − t0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GermFile {
    pub t0: String,
    pub order: usize,
    pub coords: Vec<Vec<String>>,
}

pub fn parse_germ(text: &str) -> FormatResult<CurveGerm> {
    let file: GermFile = serde_json::from_str(text)?;
    if file.coords.is_empty() {
        return Err(FormatError::Invalid("germ has no coordinates".into()));
    }
    if let Some((k, c)) = file.coords.iter().enumerate().find(|(_, c)| c.len() > file.order + 1) {
        return Err(FormatError::Invalid(format!(
            "coordinate {k} has {} coefficients, more than order {} allows",
            c.len(),
            file.order
        )));
    }
    let t0 = parse_number(&file.t0, NumberMode::Exact)?;
    let coords = file
        .coords
        .iter()
        .map(|c| c.iter().map(|s| parse_number(s, NumberMode::Exact)).collect())
        .collect::<FormatResult<Vec<Vec<_>>>>()?;
    if file.order == 0 {
        return Err(FormatError::Invalid("order must be positive".into()));
    }
    Ok(CurveGerm {
        t0,
        series: SeriesVec::from_coefficients(file.order, &coords)?,
    })
}

pub fn write_germ(germ: &CurveGerm) -> FormatResult<String> {
    let file = GermFile {
        t0: rational::to_string(&germ.t0),
        order: germ.order(),
        coords: germ
            .series
            .coords()
            .iter()
            .map(|s| s.coeffs().iter().map(rational::to_string).collect())
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use selfaffine_core::rational::int;

    #[test]
    fn round_trip() {
        let text = r#"{"t0": "0", "order": 6, "coords": [["0", "1"], ["0", "0", "1"], ["0", "0", "0", "1"]]}"#;
        let germ = parse_germ(text).unwrap();
        assert_eq!((germ.dim(), germ.order()), (3, 6));
        assert_eq!(germ.tangent(), vec![int(1), int(0), int(0)]);
        assert_eq!(parse_germ(&write_germ(&germ).unwrap()).unwrap(), germ);
    }

    #[test]
    fn rejections() {
        assert!(parse_germ(r#"{"t0": "0.5", "order": 2, "coords": [["0", "1"]]}"#).is_err());
        assert!(parse_germ(r#"{"t0": "0", "order": 1, "coords": [["0", "1", "2"]]}"#).is_err());
        assert!(parse_germ(r#"{"t0": "0", "order": 2, "coords": []}"#).is_err());
        assert!(parse_germ(r#"{"t0": "0", "order": 0, "coords": [["0"]]}"#).is_err());
    }
}
