//! Sparse multivariate polynomials with exact rational coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exponent multi-index, one entry per variable.
pub type Monomial = Vec<u32>;

/// Polynomial in `dim` variables. No stored coefficient is ever zero; the
/// zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        MultiPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate function `x_{index+1}`.
    pub fn variable(dim: usize, index: usize) -> Self {
        assert!(index < dim, "variable index out of range");
        let mut e = vec![0; dim];
        e[index] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, Rational::one());
        p
    }

    /// `Σ coeffs_i x_i + constant`.
    pub fn linear_form(coeffs: &[Rational], constant: &Rational) -> Self {
        let dim = coeffs.len();
        let mut p = Self::constant(dim, constant.clone());
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; dim];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    /// Sums duplicate monomials and drops zeros.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a == 0))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &MultiPoly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> MultiPoly {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        MultiPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &a) in x.iter().zip(e) {
                if a > 0 {
                    t *= rational::pow(xi, a as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Float evaluation; panics on a dimension mismatch.
    pub fn evaluate_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = rational::to_f64(c);
                for (xi, &a) in x.iter().zip(e) {
                    t *= libm::pow(*xi, a as f64);
                }
                t
            })
            .sum()
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rational::to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// Replaces variable `i` by `subs[i]`; every substitute must live in the
    /// same ring (`subs[i].dim()` all equal). The result lives in that ring.
    pub fn substitute(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        if subs.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: subs.len(),
            });
        }
        let target = subs.first().map_or(0, MultiPoly::dim);
        if let Some(bad) = subs.iter().find(|s| s.dim != target) {
            return Err(Error::DimensionMismatch {
                expected: target,
                found: bad.dim,
            });
        }
        // powers[i][k] = subs[i]^k, grown on demand
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|_| vec![MultiPoly::constant(target, Rational::one())])
            .collect();
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &a) in e.iter().enumerate() {
                let a = a as usize;
                while powers[i].len() <= a {
                    let next = powers[i].last().unwrap().mul(&subs[i])?;
                    powers[i].push(next);
                }
                if a > 0 {
                    term = term.mul(&powers[i][a])?;
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// `x ↦ P(f(x))`, expanded exactly.
    pub fn compose_affine(&self, f: &AffineMap) -> Result<MultiPoly> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.dim(),
            });
        }
        let forms: Vec<MultiPoly> = (0..self.dim)
            .map(|i| MultiPoly::linear_form(f.matrix().row(i), &f.translation()[i]))
            .collect();
        if self.dim == 0 {
            return Ok(self.clone());
        }
        self.substitute(&forms)
    }

    /// All monomials of total degree ≤ `degree` in graded order; the
    /// coordinate basis for [`MultiPoly::coefficient_vector`].
    pub fn monomial_basis(dim: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for total in 0..=degree {
            let mut cur = vec![0u32; dim];
            push_compositions(&mut out, &mut cur, 0, total);
        }
        out
    }

    pub fn coefficient_vector(&self, basis: &[Monomial]) -> Vec<Rational> {
        basis.iter().map(|e| self.coefficient(e)).collect()
    }
}

fn push_compositions(out: &mut Vec<Monomial>, cur: &mut Monomial, idx: usize, remaining: u32) {
    if cur.is_empty() {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if idx == cur.len() - 1 {
        cur[idx] = remaining;
        out.push(cur.clone());
        cur[idx] = 0;
        return;
    }
    for a in (0..=remaining).rev() {
        cur[idx] = a;
        push_compositions(out, cur, idx + 1, remaining - a);
    }
    cur[idx] = 0;
}

/// Renders as `c * x1^a1 x2^a2 + ...`, highest degree first; the zero
/// polynomial renders as `0`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let mag = if k == 0 {
                c.clone()
            } else if c.is_negative() {
                f.write_str(" - ")?;
                -c.clone()
            } else {
                f.write_str(" + ")?;
                c.clone()
            };
            f.write_str(&rational::to_string(&mag))?;
            let mut first = true;
            for (i, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                f.write_str(if first { " * " } else { " " })?;
                first = false;
                if a == 1 {
                    write!(f, "x{}", i + 1)?;
                } else {
                    write!(f, "x{}^{}", i + 1, a)?;
                }
            }
        }
        Ok(())
    }
}

/// `x1² + … + x_{n−1}² − x_n`.
pub fn paraboloid(n: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(n);
    for i in 0..n - 1 {
        let mut e = vec![0; n];
        e[i] = 2;
        p.add_term(e, Rational::one());
    }
    let mut e = vec![0; n];
    e[n - 1] = 1;
    p.add_term(e, -Rational::one());
    p
}

/// `x1² + … + x_n² − 1`.
pub fn unit_sphere(n: usize) -> MultiPoly {
    let mut p = MultiPoly::constant(n, -Rational::one());
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 2;
        p.add_term(e, Rational::one());
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::rational::{frac, int};
    use alloc::string::ToString;

    fn diagonal_line() -> MultiPoly {
        // x2 - x1
        MultiPoly::linear_form(&[int(-1), int(1)], &int(0))
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(MultiPoly::zero(2).evaluate(&[int(3), int(4)]).unwrap(), int(0));
        assert_eq!(diagonal_line().evaluate(&[int(1), int(1)]).unwrap(), int(0));
        assert_eq!(unit_sphere(2).evaluate(&[int(1), int(0)]).unwrap(), int(0));
        assert!(unit_sphere(2).evaluate(&[int(1)]).is_err());
    }

    #[test]
    fn compose_examples() {
        let p = diagonal_line();
        assert_eq!(p.compose_affine(&AffineMap::identity(2)).unwrap(), p);
        let half = AffineMap::homothety(frac(1, 2), vec![int(0), int(0)]);
        let q = p.compose_affine(&half).unwrap();
        assert_eq!(q, MultiPoly::linear_form(&[frac(-1, 2), frac(1, 2)], &int(0)));
        let circle = unit_sphere(2).compose_affine(&half).unwrap();
        let expect = MultiPoly::from_terms(
            2,
            [(vec![2, 0], frac(1, 4)), (vec![0, 2], frac(1, 4)), (vec![0, 0], int(-1))],
        )
        .unwrap();
        assert_eq!(circle, expect);
        assert!(p.compose_affine(&AffineMap::identity(3)).is_err());
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = diagonal_line();
        let s = p.sub(&p).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.degree(), None);
        // (x1 + x2)(x1 - x2) = x1² - x2²: cross terms cancel
        let a = MultiPoly::linear_form(&[int(1), int(1)], &int(0));
        let b = MultiPoly::linear_form(&[int(1), int(-1)], &int(0));
        assert_eq!(a.mul(&b).unwrap().terms().len(), 2);
    }

    #[test]
    fn degree_and_basis() {
        assert_eq!(unit_sphere(3).degree(), Some(2));
        assert_eq!(MultiPoly::monomial_basis(2, 2).len(), 6);
        assert_eq!(MultiPoly::monomial_basis(3, 4).len(), 35);
    }

    #[test]
    fn swap_coordinates_by_shear() {
        let m = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let swap = AffineMap::linear(m).unwrap();
        let p = diagonal_line();
        assert_eq!(p.compose_affine(&swap).unwrap(), p.scale(&int(-1)));
    }

    #[test]
    fn display() {
        assert_eq!(unit_sphere(2).to_string(), "1 * x1^2 + 1 * x2^2 - 1");
        assert_eq!(diagonal_line().to_string(), "-1 * x1 + 1 * x2");
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
        let p = MultiPoly::from_terms(3, [(vec![1, 2, 0], frac(-3, 2))]).unwrap();
        assert_eq!(p.to_string(), "-3/2 * x1 x2^2");
    }
}
