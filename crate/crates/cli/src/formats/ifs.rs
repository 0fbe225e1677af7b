use serde::{Deserialize, Serialize};

use selfaffine_core::linalg::Matrix;
use selfaffine_core::rational::{self, Rational};
use selfaffine_core::AffineMap;

use super::{FormatError, FormatResult};

/// Whether numeric strings must be exact rationals or may be decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberMode {
    /// `p/q` or `p` only.
    Exact,
    /// Also accepts decimal floats, converted to their exact binary value.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapEntry {
    pub matrix: Vec<Vec<String>>,
    pub translation: Vec<String>,
}

/// Construction parameters stored next to the maps so that a verifier can
/// rebuild the expected identities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "lowercase")]
pub enum CurveMeta {
    Moment {
        n: usize,
        c: String,
        d: String,
        lambda: String,
        anchors: Vec<String>,
    },
    Paraboloid {
        n: usize,
        a: String,
        b: String,
        /// `(c_i, d_i)` of the one-dimensional base maps.
        base_maps: Vec<[String; 2]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IfsFile {
    pub dim: usize,
    pub maps: Vec<MapEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<CurveMeta>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedIfs {
    pub maps: Vec<AffineMap>,
    pub meta: Option<CurveMeta>,
}

pub(crate) fn parse_number(s: &str, mode: NumberMode) -> FormatResult<Rational> {
    match rational::parse(s) {
        Ok(r) => Ok(r),
        Err(e) if mode == NumberMode::Exact => Err(e.into()),
        Err(e) => {
            let x: f64 = s.trim().parse().map_err(|_| FormatError::Core(e))?;
            Rational::from_float(x)
                .ok_or_else(|| FormatError::Invalid(format!("not a finite number: {s:?}")))
        }
    }
}

/// A square matrix given as rows of rational strings.
pub fn parse_matrix(rows: &[Vec<String>], mode: NumberMode) -> FormatResult<Matrix> {
    let n = rows.len();
    if n == 0 {
        return Err(FormatError::Invalid("empty matrix".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(FormatError::Invalid(format!(
            "matrix is not square: row {i} has {} entries, expected {n}",
            r.len()
        )));
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_number(s, mode)).collect())
        .collect::<FormatResult<Vec<Vec<Rational>>>>()?;
    Ok(Matrix::from_rows(parsed)?)
}

pub fn parse_ifs(text: &str, mode: NumberMode) -> FormatResult<ParsedIfs> {
    let file: IfsFile = serde_json::from_str(text)?;
    if file.dim == 0 {
        return Err(FormatError::Invalid("dim must be positive".into()));
    }
    if file.maps.is_empty() {
        return Err(FormatError::Invalid("no maps".into()));
    }
    let mut maps = Vec::with_capacity(file.maps.len());
    for (i, entry) in file.maps.iter().enumerate() {
        let m = parse_matrix(&entry.matrix, mode)
            .map_err(|e| FormatError::Invalid(format!("map {i}: {e}")))?;
        if m.rows() != file.dim || entry.translation.len() != file.dim {
            return Err(FormatError::Invalid(format!(
                "map {i}: dimension mismatch (dim {}, matrix {}x{}, translation {})",
                file.dim,
                m.rows(),
                m.cols(),
                entry.translation.len()
            )));
        }
        let t = entry
            .translation
            .iter()
            .map(|s| parse_number(s, mode))
            .collect::<FormatResult<Vec<_>>>()
            .map_err(|e| FormatError::Invalid(format!("map {i}: {e}")))?;
        maps.push(AffineMap::new(m, t)?);
    }
    Ok(ParsedIfs {
        maps,
        meta: file.meta,
    })
}

fn entry(map: &AffineMap) -> MapEntry {
    MapEntry {
        matrix: map
            .matrix()
            .to_rows()
            .iter()
            .map(|r| r.iter().map(rational::to_string).collect())
            .collect(),
        translation: map.translation().iter().map(rational::to_string).collect(),
    }
}

/// Pretty-printed JSON with canonical rational strings.
pub fn write_ifs(maps: &[AffineMap], meta: Option<CurveMeta>) -> FormatResult<String> {
    let dim = maps.first().map_or(0, AffineMap::dim);
    let file = IfsFile {
        dim,
        maps: maps.iter().map(entry).collect(),
        meta,
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    Ok(s)
}

impl CurveMeta {
    pub fn moment(n: usize, c: &Rational, d: &Rational, lambda: &Rational, anchors: &[Rational]) -> Self {
        CurveMeta::Moment {
            n,
            c: rational::to_string(c),
            d: rational::to_string(d),
            lambda: rational::to_string(lambda),
            anchors: anchors.iter().map(rational::to_string).collect(),
        }
    }

    pub fn paraboloid(n: usize, a: &Rational, b: &Rational, base: &[(Rational, Rational)]) -> Self {
        CurveMeta::Paraboloid {
            n,
            a: rational::to_string(a),
            b: rational::to_string(b),
            base_maps: base
                .iter()
                .map(|(c, d)| [rational::to_string(c), rational::to_string(d)])
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use selfaffine_core::rational::{frac, int};

    const HALF: &str = r#"{"dim": 2, "maps": [
        {"matrix": [["1/2", "0"], ["0", "1/2"]], "translation": ["0", "0"]},
        {"matrix": [["1/2", "0"], ["0", "1/2"]], "translation": ["1/2", "1/2"]}
    ]}"#;

    #[test]
    fn parses_and_round_trips() {
        let parsed = parse_ifs(HALF, NumberMode::Exact).unwrap();
        assert_eq!(parsed.maps.len(), 2);
        assert_eq!(parsed.maps[1].translation(), &[frac(1, 2), frac(1, 2)]);
        let text = write_ifs(&parsed.maps, None).unwrap();
        assert_eq!(parse_ifs(&text, NumberMode::Exact).unwrap(), parsed);
        let meta = CurveMeta::moment(2, &int(0), &int(1), &frac(1, 2), &[int(0), frac(1, 2)]);
        let text = write_ifs(&parsed.maps, Some(meta.clone())).unwrap();
        assert_eq!(parse_ifs(&text, NumberMode::Exact).unwrap().meta, Some(meta));
    }

    #[test]
    fn rejections() {
        let non_square = HALF.replacen(r#"["0", "1/2"]]"#, r#"["0", "1/2", "0"]]"#, 1);
        assert!(parse_ifs(&non_square, NumberMode::Exact).is_err());
        let zero_den = HALF.replacen("1/2", "1/0", 1);
        assert!(parse_ifs(&zero_den, NumberMode::Exact).is_err());
        let mismatch = HALF.replacen(r#""dim": 2"#, r#""dim": 3"#, 1);
        assert!(parse_ifs(&mismatch, NumberMode::Exact).is_err());
        let short = HALF.replacen(r#"["0", "0"]"#, r#"["0"]"#, 1);
        assert!(parse_ifs(&short, NumberMode::Exact).is_err());
        assert!(parse_ifs("{", NumberMode::Exact).is_err());
    }

    #[test]
    fn decimals_only_when_lenient() {
        let dec = HALF.replace("1/2", "0.5");
        assert!(parse_ifs(&dec, NumberMode::Exact).is_err());
        let parsed = parse_ifs(&dec, NumberMode::Lenient).unwrap();
        assert_eq!(parsed.maps[0].matrix()[(0, 0)], frac(1, 2));
    }
}
