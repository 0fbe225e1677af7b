//! Self-affine sets on the paraboloid `x_n = x1² + … + x_{n−1}²`.
//!
//! A one-dimensional IFS `x ↦ c_i x + d_i` acting diagonally on
//! `R^{n−1}` lifts through the embedding
//! `η(x) = (x1, …, x_{n−1}, Σ x_j²)` to affine maps `f_i` of `R^n` with
//! `f_i ∘ η = η ∘ (c_i · + d_i)`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::affine::{AffineMap, IteratedFunctionSystem};
use crate::attractor::PointCloud;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::MultiPoly;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParaboloidSpec {
    dim: usize,
    a: Rational,
    b: Rational,
    base_maps: Vec<(Rational, Rational)>,
}

impl ParaboloidSpec {
    /// Requires `n ≥ 2`, `a < b`, `0 < |c_i| < 1` and that the images of
    /// `[a, b]` under the base maps cover exactly `[a, b]`.
    pub fn new(dim: usize, a: Rational, b: Rational, base_maps: Vec<(Rational, Rational)>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("paraboloid dimension must be at least 2"));
        }
        if a >= b {
            return Err(Error::invalid("need a < b"));
        }
        if base_maps.is_empty() {
            return Err(Error::invalid("at least one base map is required"));
        }
        for (c, _) in &base_maps {
            if c.is_zero() || c.abs() >= Rational::one() {
                return Err(Error::invalid(format!(
                    "base ratio {} must satisfy 0 < |c| < 1",
                    rational::to_string(c)
                )));
            }
        }
        let images = base_maps
            .iter()
            .map(|(c, d)| {
                let (p, q) = (c * &a + d, c * &b + d);
                if p <= q {
                    (p, q)
                } else {
                    (q, p)
                }
            })
            .collect();
        rational::check_cover(&a, &b, images)?;
        Ok(ParaboloidSpec { dim, a, b, base_maps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn base_maps(&self) -> &[(Rational, Rational)] {
        &self.base_maps
    }
}

/// `(x1, …, x_{n−1}, Σ x_j²)`.
pub fn eval_paraboloid_embedding(x: &[Rational]) -> Vec<Rational> {
    let mut out = x.to_vec();
    out.push(x.iter().map(|v| v * v).sum());
    out
}

/// The embedding as `n` polynomials in `n − 1` variables.
pub fn embedding_polys(n: usize) -> Vec<MultiPoly> {
    let m = n - 1;
    let mut out: Vec<MultiPoly> = (0..m).map(|j| MultiPoly::variable(m, j)).collect();
    let mut q = MultiPoly::zero(m);
    for j in 0..m {
        let mut e = alloc::vec![0; m];
        e[j] = 2;
        q.add_term(e, Rational::one());
    }
    out.push(q);
    out
}

/// The lift of `x ↦ c x + d`: linear part `c` on the first `n − 1`
/// diagonal entries with last row `(2cd, …, 2cd, c²)`, translation
/// `(d, …, d, (n − 1)d²)`.
pub fn paraboloid_map(n: usize, c: &Rational, d: &Rational) -> Result<AffineMap> {
    if n < 2 {
        return Err(Error::invalid("paraboloid dimension must be at least 2"));
    }
    let mut rows = alloc::vec![alloc::vec![Rational::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate().take(n - 1) {
        row[i] = c.clone();
    }
    let cross = rational::int(2) * c * d;
    for x in rows[n - 1].iter_mut().take(n - 1) {
        *x = cross.clone();
    }
    rows[n - 1][n - 1] = c * c;
    let mut translation = alloc::vec![d.clone(); n - 1];
    translation.push(rational::int(n as i64 - 1) * d * d);
    AffineMap::new(Matrix::from_rows(rows)?, translation)
}

/// Both sides of `f ∘ η = η ∘ (c · + d)` expanded in `n − 1` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationIdentity {
    pub lhs: Vec<MultiPoly>,
    pub rhs: Vec<MultiPoly>,
}

impl ConjugationIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Coordinates where the two sides differ.
    pub fn failing_coordinates(&self) -> Vec<usize> {
        (0..self.lhs.len()).filter(|&k| self.lhs[k] != self.rhs[k]).collect()
    }
}

/// Expands `f ∘ η` and `η ∘ (c · + d)` term by term.
pub fn conjugation_identity(f: &AffineMap, c: &Rational, d: &Rational) -> Result<ConjugationIdentity> {
    let n = f.dim();
    if n < 2 {
        return Err(Error::invalid("paraboloid dimension must be at least 2"));
    }
    let eta = embedding_polys(n);
    let lhs = (0..n)
        .map(|k| MultiPoly::linear_form(f.matrix().row(k), &f.translation()[k]).substitute(&eta))
        .collect::<Result<Vec<_>>>()?;
    let m = n - 1;
    let base: Vec<MultiPoly> = (0..m)
        .map(|j| MultiPoly::variable(m, j).scale(c).add(&MultiPoly::constant(m, d.clone())))
        .collect::<Result<_>>()?;
    let rhs = eta.iter().map(|p| p.substitute(&base)).collect::<Result<Vec<_>>>()?;
    Ok(ConjugationIdentity { lhs, rhs })
}

/// Lifts every base map and checks the conjugation identity of each lift;
/// the result is rejected if any identity fails or any map is not
/// contractive.
pub fn build_paraboloid_ifs(spec: &ParaboloidSpec) -> Result<IteratedFunctionSystem> {
    let mut maps = Vec::with_capacity(spec.base_maps.len());
    for (i, (c, d)) in spec.base_maps.iter().enumerate() {
        let f = paraboloid_map(spec.dim, c, d)?;
        let id = conjugation_identity(&f, c, d)?;
        if !id.holds() {
            return Err(Error::invalid(format!(
                "conjugation identity fails for map {} in coordinates {:?}",
                i,
                id.failing_coordinates()
            )));
        }
        maps.push(f);
    }
    IteratedFunctionSystem::new(maps)
}

/// `max |P(x)|` over the cloud, in floating point.
pub fn surface_residual(p: &MultiPoly, cloud: &PointCloud) -> Result<f64> {
    if p.dim() != cloud.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: cloud.dim(),
        });
    }
    Ok(cloud
        .points()
        .map(|x| libm::fabs(p.evaluate_f64(x)))
        .fold(0.0, f64::max))
}
