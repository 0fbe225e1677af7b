//! Scaling factors: contractive affine maps `f` with `P ∘ f = C · P`, and
//! the consequence that every fixed point of a composition of scaling
//! factors lies on the zero set of `P`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;

/// The raw proportionality check: `Some(C)` iff `P ∘ f = C · P` exactly.
/// No contractivity requirement.
pub fn scaling_constant(p: &MultiPoly, f: &AffineMap) -> Result<Option<Rational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = p.compose_affine(f)?;
    let (e, c) = p.terms().iter().next_back().expect("nonzero polynomial");
    let ratio = q.coefficient(e) / c;
    Ok((q == p.scale(&ratio)).then_some(ratio))
}

/// A verified scaling factor for a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingCertificate {
    pub map: AffineMap,
    pub constant: Rational,
    /// `P` at the fixed point of `map`; zero whenever `|constant| < 1`.
    pub fixed_point_value: Rational,
}

impl ScalingCertificate {
    /// Certifies `f` as a scaling factor for `p`. Unlike
    /// [`scaling_constant`], requires `f` invertible and strictly
    /// contractive. Returns `Ok(None)` when `p ∘ f` is not proportional to `p`.
    pub fn new(p: &MultiPoly, f: &AffineMap) -> Result<Option<Self>> {
        require_scaling_candidate(f)?;
        let Some(constant) = scaling_constant(p, f)? else {
            return Ok(None);
        };
        let fixed_point_value = p.evaluate(&f.fixed_point()?)?;
        Ok(Some(ScalingCertificate {
            map: f.clone(),
            constant,
            fixed_point_value,
        }))
    }

    /// Re-runs the exact identity `p ∘ map = constant · p`.
    pub fn recheck(&self, p: &MultiPoly) -> Result<bool> {
        Ok(p.compose_affine(&self.map)? == p.scale(&self.constant))
    }
}

fn require_scaling_candidate(f: &AffineMap) -> Result<()> {
    if !f.is_invertible() {
        return Err(Error::Singular);
    }
    if !f.is_contractive().contractive {
        return Err(Error::NotContractive);
    }
    Ok(())
}

/// Whether `f` and `g` are both scaling factors for `p` with distinct fixed
/// points (the definition of a self-affine polynomial, witnessed by a pair).
pub fn is_self_affine_pair(p: &MultiPoly, f: &AffineMap, g: &AffineMap) -> Result<bool> {
    let (Some(_), Some(_)) = (ScalingCertificate::new(p, f)?, ScalingCertificate::new(p, g)?) else {
        return Ok(false);
    };
    Ok(f.fixed_point()? != g.fixed_point()?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordRecord {
    /// Map indices, outermost first: `[i, j]` is `f_i ∘ f_j`.
    pub word: Vec<usize>,
    pub fixed_point: Vec<Rational>,
    pub constant: Rational,
    pub value_at_fixed_point: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceViolation {
    /// The composed map failed the proportionality check.
    NotScaling { word: Vec<usize> },
    /// The composed constant differs from the product of the letters' constants.
    NotMultiplicative { word: Vec<usize> },
    /// `|C_w| ≥ 1`.
    ConstantTooLarge { word: Vec<usize> },
    /// `P(x_w) ≠ 0`.
    OffSurface { word: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceReport {
    pub depth: usize,
    pub words_checked: usize,
    pub records: Vec<WordRecord>,
    pub violations: Vec<SurfaceViolation>,
}

impl SurfaceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumerates every composition word of length `1..=depth` breadth-first
/// and checks that its fixed point lies on `P = 0` with `|C_w| < 1`.
///
/// Each letter must already be a contractive scaling factor; otherwise the
/// call is rejected before enumeration starts.
pub fn verify_fixed_points_on_surface(
    p: &MultiPoly,
    maps: &[AffineMap],
    depth: usize,
) -> Result<SurfaceReport> {
    let mut letters = Vec::with_capacity(maps.len());
    for (i, f) in maps.iter().enumerate() {
        let cert = ScalingCertificate::new(p, f)?
            .ok_or_else(|| Error::invalid(format!("map {i} is not a scaling factor")))?;
        letters.push(cert.constant);
    }

    let mut records = Vec::new();
    let mut violations = Vec::new();
    // (word, composed map, product of letter constants)
    let mut frontier: Vec<(Vec<usize>, AffineMap, Rational)> =
        alloc::vec![(Vec::new(), AffineMap::identity(p.dim()), Rational::one())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(frontier.len() * maps.len());
        for (word, map, product) in &frontier {
            for (i, f) in maps.iter().enumerate() {
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(i);
                w.extend_from_slice(word);
                let composed = f.compose(map)?;
                let expected = &letters[i] * product;
                let fixed_point = composed.fixed_point()?;
                let value = p.evaluate(&fixed_point)?;
                match scaling_constant(p, &composed)? {
                    None => violations.push(SurfaceViolation::NotScaling { word: w.clone() }),
                    Some(c) => {
                        if c != expected {
                            violations.push(SurfaceViolation::NotMultiplicative { word: w.clone() });
                        }
                        if c.abs() >= Rational::one() {
                            violations.push(SurfaceViolation::ConstantTooLarge { word: w.clone() });
                        }
                    }
                }
                if !value.is_zero() {
                    violations.push(SurfaceViolation::OffSurface { word: w.clone() });
                }
                records.push(WordRecord {
                    word: w.clone(),
                    fixed_point,
                    constant: expected.clone(),
                    value_at_fixed_point: value,
                });
                next.push((w, composed, expected));
            }
        }
        frontier = next;
    }
    Ok(SurfaceReport {
        depth,
        words_checked: records.len(),
        records,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::unit_sphere;
    use crate::rational::{frac, int, pow};
    use alloc::vec;

    fn line() -> MultiPoly {
        MultiPoly::linear_form(&[int(-1), int(1)], &int(0))
    }

    fn f() -> AffineMap {
        AffineMap::homothety(frac(1, 2), vec![int(0), int(0)])
    }

    fn g() -> AffineMap {
        AffineMap::homothety(frac(1, 2), vec![frac(1, 2), frac(1, 2)])
    }

    #[test]
    fn scaling_constants() {
        assert_eq!(scaling_constant(&line(), &f()).unwrap(), Some(frac(1, 2)));
        assert_eq!(scaling_constant(&line(), &g()).unwrap(), Some(frac(1, 2)));
        assert_eq!(scaling_constant(&unit_sphere(2), &f()).unwrap(), None);
        assert_eq!(
            scaling_constant(&MultiPoly::zero(2), &f()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn certificate_requires_contraction() {
        let id = AffineMap::identity(2);
        assert_eq!(ScalingCertificate::new(&line(), &id), Err(Error::NotContractive));
        // the raw check still answers
        assert_eq!(scaling_constant(&line(), &id).unwrap(), Some(int(1)));
        let cert = ScalingCertificate::new(&line(), &g()).unwrap().unwrap();
        assert!(cert.recheck(&line()).unwrap());
        assert_eq!(cert.fixed_point_value, int(0));
    }

    #[test]
    fn self_affine_pairs() {
        assert!(is_self_affine_pair(&line(), &f(), &g()).unwrap());
        assert!(!is_self_affine_pair(&line(), &f(), &f()).unwrap());
        assert!(!is_self_affine_pair(&unit_sphere(2), &f(), &g()).unwrap());
    }

    #[test]
    fn fixed_points_depth_one() {
        let r = verify_fixed_points_on_surface(&line(), &[f(), g()], 1).unwrap();
        assert!(r.passed());
        let points: Vec<_> = r.records.iter().map(|w| w.fixed_point.clone()).collect();
        assert_eq!(points, vec![vec![int(0), int(0)], vec![int(1), int(1)]]);
    }

    #[test]
    fn fixed_points_depth_six() {
        let r = verify_fixed_points_on_surface(&line(), &[f(), g()], 6).unwrap();
        assert_eq!(r.words_checked, 126);
        assert!(r.passed());
        for w in &r.records {
            assert_eq!(w.constant, pow(&frac(1, 2), w.word.len()));
        }
    }

    #[test]
    fn single_map() {
        let r = verify_fixed_points_on_surface(&line(), &[g()], 1).unwrap();
        assert_eq!(r.words_checked, 1);
        assert!(r.passed());
    }

    #[test]
    fn rejects_non_scaling_letter() {
        let err = verify_fixed_points_on_surface(&unit_sphere(2), &[f()], 2).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }
}
