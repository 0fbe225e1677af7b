//! Affine maps `x ↦ Mx + a` over exact rationals and iterated function
//! systems built from them.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};

/// Margin below 1 the numeric spectral norm must clear.
pub const NUMERIC_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    matrix: Matrix,
    translation: Vec<Rational>,
}

impl AffineMap {
    pub fn new(matrix: Matrix, translation: Vec<Rational>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if matrix.rows() == 0 {
            return Err(Error::invalid("affine map of dimension zero"));
        }
        if translation.len() != matrix.rows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: translation.len(),
            });
        }
        Ok(AffineMap {
            matrix,
            translation,
        })
    }

    pub fn identity(dim: usize) -> Self {
        AffineMap {
            matrix: Matrix::identity(dim),
            translation: alloc::vec![Rational::zero(); dim],
        }
    }

    pub fn linear(matrix: Matrix) -> Result<Self> {
        let dim = matrix.rows();
        Self::new(matrix, alloc::vec![Rational::zero(); dim])
    }

    /// `x ↦ s·x + a`.
    pub fn homothety(s: Rational, translation: Vec<Rational>) -> Self {
        let dim = translation.len();
        AffineMap {
            matrix: Matrix::identity(dim).scale(&s),
            translation,
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn translation(&self) -> &[Rational] {
        &self.translation
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        let mut y = self.matrix.mul_vec(x)?;
        for (yi, ai) in y.iter_mut().zip(&self.translation) {
            *yi += ai;
        }
        Ok(y)
    }

    fn check_dim(&self, other: &AffineMap) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        self.check_dim(inner)?;
        let matrix = self.matrix.mul(&inner.matrix)?;
        let translation = self.apply(&inner.translation)?;
        Ok(AffineMap {
            matrix,
            translation,
        })
    }

    pub fn invert(&self) -> Result<AffineMap> {
        let inv = self.matrix.inverse()?;
        let translation = inv.mul_vec(&self.translation)?.into_iter().map(|x| -x).collect();
        Ok(AffineMap {
            matrix: inv,
            translation,
        })
    }

    /// The unique solution of `(I − M)x = a`.
    pub fn fixed_point(&self) -> Result<Vec<Rational>> {
        let n = self.dim();
        let mut lhs = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                lhs[(i, j)] -= &self.matrix[(i, j)];
            }
        }
        lhs.solve(&self.translation)
    }

    /// Applies the map `j` times.
    pub fn iterate(&self, x: &[Rational], j: usize) -> Result<Vec<Rational>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut y = x.to_vec();
        for _ in 0..j {
            y = self.apply(&y)?;
        }
        Ok(y)
    }

    pub fn operator_norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    pub fn is_invertible(&self) -> bool {
        !self.matrix.determinant().is_zero()
    }

    pub fn is_contractive(&self) -> ContractionCertificate {
        certify_contraction(&self.matrix)
    }

    /// Float copy for sampling.
    pub fn to_f64(&self) -> FloatAffine {
        FloatAffine {
            matrix: self.matrix.to_f64_rows(),
            translation: rational::vec_to_f64(&self.translation),
        }
    }
}

/// Double-precision copy of an [`AffineMap`], used only for sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatAffine {
    pub matrix: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

impl FloatAffine {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(x.len());
        self.apply_into(x, &mut out);
        out
    }

    pub fn apply_into(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.matrix.iter().zip(&self.translation).map(|(row, t)| {
            row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + t
        }));
    }
}

/// Spectral norm of an exact matrix, evaluated in floating point.
pub fn operator_norm(m: &Matrix) -> f64 {
    linalg::spectral_norm(&m.to_f64_rows())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionRoute {
    /// Numeric spectral norm below `1 − 1e−12`.
    Numeric,
    /// Exact bound `√n · max_k Σ_j |m_kj| < 1`, checked as `n · s² < 1`.
    RowSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionCertificate {
    pub contractive: bool,
    /// Every route that succeeded.
    pub routes: Vec<ContractionRoute>,
    pub numeric_norm: f64,
    /// Largest absolute row sum, exact.
    pub row_sum: Rational,
}

impl ContractionCertificate {
    pub fn has_row_sum(&self) -> bool {
        self.routes.contains(&ContractionRoute::RowSum)
    }
}

pub fn certify_contraction(m: &Matrix) -> ContractionCertificate {
    let numeric_norm = operator_norm(m);
    let row_sum = m.max_abs_row_sum();
    let mut routes = Vec::new();
    if numeric_norm < 1.0 - NUMERIC_MARGIN {
        routes.push(ContractionRoute::Numeric);
    }
    if row_sum_certifies(m.rows(), &row_sum) {
        routes.push(ContractionRoute::RowSum);
    }
    ContractionCertificate {
        contractive: !routes.is_empty(),
        routes,
        numeric_norm,
        row_sum,
    }
}

/// `√n · s < 1`, decided exactly.
pub fn row_sum_certifies(n: usize, row_sum: &Rational) -> bool {
    rational::int(n as i64) * row_sum * row_sum < Rational::one()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedFunctionSystem {
    maps: Vec<AffineMap>,
}

impl IteratedFunctionSystem {
    /// Rejects empty lists, mixed dimensions, singular or non-contractive maps.
    pub fn new(maps: Vec<AffineMap>) -> Result<Self> {
        let first = maps
            .first()
            .ok_or_else(|| Error::invalid("an IFS needs at least one map"))?;
        let dim = first.dim();
        for (i, f) in maps.iter().enumerate() {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.dim(),
                });
            }
            if !f.is_invertible() {
                return Err(Error::invalid(format!("map {i} is not invertible")));
            }
            if !f.is_contractive().contractive {
                return Err(Error::invalid(format!("map {i} is not strictly contractive")));
            }
        }
        Ok(IteratedFunctionSystem { maps })
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_maps(self) -> Vec<AffineMap> {
        self.maps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use alloc::vec;

    fn scalar(a: Rational, b: Rational) -> AffineMap {
        AffineMap::new(Matrix::diagonal(&[a]), vec![b]).unwrap()
    }

    #[test]
    fn compose_examples() {
        let f = scalar(frac(1, 2), int(0));
        let g = scalar(frac(1, 2), frac(1, 2));
        assert_eq!(f.compose(&g).unwrap(), scalar(frac(1, 4), frac(1, 4)));
        assert_eq!(AffineMap::identity(1).compose(&g).unwrap(), g);
        assert_eq!(g.compose(&g.invert().unwrap()).unwrap(), AffineMap::identity(1));
        assert!(f.compose(&AffineMap::identity(2)).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(AffineMap::identity(3).invert().unwrap(), AffineMap::identity(3));
        let f = scalar(frac(1, 2), int(0));
        assert_eq!(f.invert().unwrap(), scalar(int(2), int(0)));
        let g = scalar(frac(1, 2), frac(1, 2));
        assert_eq!(g.invert().unwrap(), scalar(int(2), int(-1)));
        let singular = scalar(int(0), int(1));
        assert_eq!(singular.invert(), Err(Error::Singular));
    }

    #[test]
    fn fixed_point_examples() {
        let f = scalar(frac(1, 2), int(0));
        assert_eq!(f.fixed_point().unwrap(), vec![int(0)]);
        let g = AffineMap::homothety(frac(1, 2), vec![frac(1, 2), frac(1, 2)]);
        assert_eq!(g.fixed_point().unwrap(), vec![int(1), int(1)]);
        assert_eq!(AffineMap::identity(2).fixed_point(), Err(Error::Singular));
    }

    #[test]
    fn iterate_examples() {
        let g = scalar(frac(1, 2), frac(1, 2));
        assert_eq!(g.iterate(&[int(5)], 0).unwrap(), vec![int(5)]);
        assert_eq!(g.iterate(&[int(0)], 2).unwrap(), vec![frac(3, 4)]);
        let x0 = g.fixed_point().unwrap();
        for j in 0..5 {
            assert_eq!(g.iterate(&x0, j).unwrap(), x0);
        }
    }

    #[test]
    fn contraction_routes() {
        let half = scalar(frac(1, 2), int(0));
        let cert = half.is_contractive();
        assert!(cert.contractive);
        assert!(cert.has_row_sum());
        assert!(!AffineMap::identity(2).is_contractive().contractive);
        // norm 0.9 but row sum √2·0.9 > 1: only the numeric route works
        let m = Matrix::diagonal(&[frac(9, 10), frac(9, 10)]);
        let cert = certify_contraction(&m);
        assert_eq!(cert.routes, vec![ContractionRoute::Numeric]);
    }

    #[test]
    fn ifs_validation() {
        let half = scalar(frac(1, 2), int(0));
        assert!(IteratedFunctionSystem::new(vec![]).is_err());
        assert!(IteratedFunctionSystem::new(vec![half.clone(), AffineMap::identity(2)]).is_err());
        assert!(IteratedFunctionSystem::new(vec![scalar(int(0), int(0))]).is_err());
        assert!(IteratedFunctionSystem::new(vec![scalar(int(2), int(0))]).is_err());
        assert_eq!(IteratedFunctionSystem::new(vec![half]).unwrap().dim(), 1);
    }

    #[test]
    fn rejects_bad_shapes() {
        let m = Matrix::from_rows(vec![vec![int(1), int(2)]]).unwrap();
        assert!(AffineMap::new(m, vec![int(0)]).is_err());
        assert!(AffineMap::new(Matrix::identity(2), vec![int(0)]).is_err());
    }
}
