//! Text format `coef * x1^a1 x2^a2 … ± …`. Whitespace is ignored; factors
//! may be separated by `*` or simply juxtaposed, a missing coefficient
//! means 1 and a missing exponent means 1.

use num_traits::One;

use selfaffine_core::rational::{self, Rational};
use selfaffine_core::MultiPoly;

use super::{FormatError, FormatResult};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn error(&self, what: &str) -> FormatError {
        FormatError::Invalid(format!("polynomial {:?}: {what} at position {}", self.text, self.pos))
    }
}

/// Parses a polynomial in `dim` variables; with `dim = None` the number of
/// variables is the largest index that occurs (at least 1).
pub fn parse_polynomial(text: &str, dim: Option<usize>) -> FormatResult<MultiPoly> {
    let mut cur = Cursor {
        chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        text,
    };
    if cur.chars.is_empty() {
        return Err(cur.error("empty input"));
    }
    let mut terms: Vec<(Vec<(usize, u32)>, Rational)> = Vec::new();
    let mut first = true;
    while cur.peek().is_some() {
        let mut sign = Rational::one();
        match cur.peek() {
            Some('+') => cur.pos += 1,
            Some('-') => {
                sign = -sign;
                cur.pos += 1;
            }
            _ if first => {}
            _ => return Err(cur.error("expected '+' or '-'")),
        }
        first = false;
        let mut coef = sign;
        let mut factors = Vec::new();
        let mut any = false;
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = cur.digits();
            let mut lit = num;
            if cur.peek() == Some('/') {
                cur.pos += 1;
                let den = cur.digits();
                if den.is_empty() {
                    return Err(cur.error("missing denominator"));
                }
                lit = format!("{lit}/{den}");
            }
            coef *= rational::parse(&lit)?;
            any = true;
        }
        loop {
            if cur.peek() == Some('*') {
                cur.pos += 1;
                if cur.peek() != Some('x') {
                    return Err(cur.error("expected a variable after '*'"));
                }
            }
            if cur.peek() != Some('x') {
                break;
            }
            cur.pos += 1;
            let idx = cur.digits();
            let idx: usize = idx.parse().map_err(|_| cur.error("expected variable index"))?;
            if idx == 0 {
                return Err(cur.error("variables are numbered from x1"));
            }
            let mut exp = 1u32;
            if cur.peek() == Some('^') {
                cur.pos += 1;
                if cur.peek() == Some('-') {
                    return Err(cur.error("negative exponent"));
                }
                exp = cur.digits().parse().map_err(|_| cur.error("expected exponent"))?;
            }
            factors.push((idx - 1, exp));
            any = true;
        }
        if !any {
            return Err(cur.error("expected a term"));
        }
        terms.push((factors, coef));
    }
    let used = terms
        .iter()
        .flat_map(|(f, _)| f.iter().map(|(i, _)| i + 1))
        .max()
        .unwrap_or(1);
    let dim = match dim {
        Some(d) if d < used => {
            return Err(FormatError::Invalid(format!(
                "polynomial uses x{used} but the ambient dimension is {d}"
            )))
        }
        Some(d) => d,
        None => used,
    };
    let terms = terms.into_iter().map(|(factors, c)| {
        let mut e = vec![0u32; dim];
        for (i, a) in factors {
            e[i] += a;
        }
        (e, c)
    });
    Ok(MultiPoly::from_terms(dim, terms)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use selfaffine_core::poly::unit_sphere;
    use selfaffine_core::rational::{frac, int};

    #[test]
    fn parses_examples() {
        assert_eq!(parse_polynomial("x1^2 + x2^2 - 1", None).unwrap(), unit_sphere(2));
        assert_eq!(parse_polynomial("1*x1^2+1*x2^2-1", None).unwrap(), unit_sphere(2));
        let p = parse_polynomial("-3/4 * x1 x2^3 + 2 x3", None).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.coefficient(&[1, 3, 0]), frac(-3, 4));
        assert_eq!(p.coefficient(&[0, 0, 1]), int(2));
        assert_eq!(parse_polynomial("x2 - x1", Some(3)).unwrap().dim(), 3);
        assert_eq!(parse_polynomial("x1^2x2", None).unwrap().coefficient(&[2, 1]), int(1));
        assert_eq!(parse_polynomial("x1 x1", None).unwrap().coefficient(&[2]), int(1));
    }

    #[test]
    fn display_round_trips() {
        for text in ["x1^2 + x2^2 - 1", "-1/2 * x1^3 x2 + 7 * x2 - x1", "5", "x3"] {
            let p = parse_polynomial(text, None).unwrap();
            assert_eq!(parse_polynomial(&p.to_string(), Some(p.dim())).unwrap(), p);
        }
    }

    #[test]
    fn rejections() {
        for bad in ["", "x1^-2", "x0", "x1 +", "2 ** x1", "1/0 * x1", "y1", "1/ * x1"] {
            assert!(parse_polynomial(bad, None).is_err(), "{bad:?} should be rejected");
        }
        assert!(parse_polynomial("x3", Some(2)).is_err());
    }
}
