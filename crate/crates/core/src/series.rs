//! Truncated power series over [`Rational`].
//!
//! A [`Series`] of order `N` keeps the coefficients of `t⁰ … t^N`; every
//! operation truncates back to `N`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    /// `coeffs[k]` is the coefficient of `tᵏ`; the order is `coeffs.len() − 1`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::invalid("series order must be at least 1"));
        }
        Ok(Series { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `t`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[1] = Rational::one();
        s
    }

    /// Pads or truncates a coefficient list to `order`.
    pub fn from_slice(order: usize, coeffs: &[Rational]) -> Self {
        let mut s = Self::zero(order);
        for (dst, src) in s.coeffs.iter_mut().zip(coeffs) {
            *dst = src.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Least exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_order(&self, other: &Series) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn multiply(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self(inner(t))` by Horner's rule; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::invalid("inner series must have zero constant term"));
        }
        let n = self.order();
        let mut acc = Self::constant(n, self.coeffs[n].clone());
        for c in self.coeffs[..n].iter().rev() {
            acc = acc.multiply(inner)?;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// `self(λt)`: coefficient `k` picks up `λᵏ`.
    pub fn rescale_argument(&self, lambda: &Rational) -> Series {
        let mut pow = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * &pow;
                pow *= lambda;
                out
            })
            .collect();
        Series { coeffs }
    }

    /// Compositional inverse `r` with `self(r(t)) = t` to the truncation
    /// order. Needs `s(0) = 0` and `s′(0) ≠ 0`.
    ///
    /// Coefficients are solved one at a time: with `r_1 … r_{k−1}` fixed, the
    /// `tᵏ` coefficient of `s(r)` is `s_1 r_k` plus a term that no longer
    /// depends on `r_k`.
    pub fn reverse(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::invalid("series to reverse must vanish at 0"));
        }
        if self.coeffs[1].is_zero() {
            return Err(Error::invalid("series to reverse needs a nonzero linear term"));
        }
        let n = self.order();
        let lead_inv = self.coeffs[1].recip();
        let mut r = Self::zero(n);
        r.coeffs[1] = lead_inv.clone();
        for k in 2..=n {
            let residual = self.compose(&r)?.coeffs[k].clone();
            r.coeffs[k] = -residual * &lead_inv;
        }
        Ok(r)
    }
}

/// A curve germ: one [`Series`] per coordinate, all of the same order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesVec {
    coords: Vec<Series>,
}

impl SeriesVec {
    pub fn new(coords: Vec<Series>) -> Result<Self> {
        let first = coords
            .first()
            .ok_or_else(|| Error::invalid("curve germ needs at least one coordinate"))?;
        if let Some(bad) = coords.iter().find(|c| c.order() != first.order()) {
            return Err(Error::DimensionMismatch {
                expected: first.order(),
                found: bad.order(),
            });
        }
        Ok(SeriesVec { coords })
    }

    /// Coordinates given as monomial-coefficient lists, padded to `order`.
    pub fn from_coefficients(order: usize, coords: &[Vec<Rational>]) -> Result<Self> {
        Self::new(coords.iter().map(|c| Series::from_slice(order, c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn order(&self) -> usize {
        self.coords[0].order()
    }

    pub fn coords(&self) -> &[Series] {
        &self.coords
    }

    /// Coefficient vector of `tᵏ` across coordinates.
    pub fn coefficient_vector(&self, k: usize) -> Vec<Rational> {
        self.coords.iter().map(|s| s.coeff(k).clone()).collect()
    }

    /// `A · γ(t)`, coefficientwise.
    pub fn transform(&self, a: &Matrix) -> Result<SeriesVec> {
        if a.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.cols(),
                found: self.dim(),
            });
        }
        let n = self.order();
        let mut out = Vec::with_capacity(a.rows());
        for i in 0..a.rows() {
            let mut s = Series::zero(n);
            for (j, c) in self.coords.iter().enumerate() {
                if !a[(i, j)].is_zero() {
                    s = s.add(&c.scale(&a[(i, j)]))?;
                }
            }
            out.push(s);
        }
        SeriesVec::new(out)
    }

    /// Evaluates the polynomial truncation at a point.
    pub fn evaluate(&self, t: &Rational) -> Vec<Rational> {
        self.coords
            .iter()
            .map(|s| {
                s.coeffs()
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |acc, c| acc * t + c)
            })
            .collect()
    }
}

/// Series of `(t₀ + u)ᵏ` in `u`, the re-centring of a monomial.
pub fn recentred_monomial(order: usize, t0: &Rational, k: usize) -> Series {
    let mut s = Series::zero(order);
    for j in 0..=k.min(order) {
        s.coeffs[j] = rational::binomial(k, j) * rational::pow(t0, k - j);
    }
    s
}
