//! Pullbacks `P_j = P ∘ f^{−j}` of a polynomial under a contraction.
//!
//! Their zero sets are `f^j(S(P))`, which shrink geometrically, while the
//! polynomials themselves stay in the finite-dimensional space of degree
//! `≤ deg P`. The probe makes both sides of that tension visible on a
//! concrete input: the exact span rank and dependency witnesses on one
//! hand, sampled zero-set diameters on the other.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::{AffineMap, FloatAffine};
use crate::attractor::{self, PointCloud};
use crate::error::{Error, Result};
use crate::linalg::{rank_profile, solve_in_span};
use crate::poly::MultiPoly;
use crate::rational::{self, Rational};

/// Residual scale for points treated as zeros of a polynomial.
pub const ZERO_TOLERANCE: f64 = 1e-9;

/// Printed as the last line of every decay report.
pub const CITED_CONCLUSION: &str =
    "cited, not computed: no non-trivial self-affine set lies in a compact algebraic surface";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackSequence {
    base: MultiPoly,
    map: AffineMap,
    polys: Vec<MultiPoly>,
}

impl PullbackSequence {
    pub fn base(&self) -> &MultiPoly {
        &self.base
    }

    pub fn map(&self) -> &AffineMap {
        &self.map
    }

    /// `P_0 = P, P_1, …, P_m`.
    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    /// Index of the last polynomial.
    pub fn len(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `P_j = P_{j−1} ∘ f^{−1}` for `j = 1..=m`.
pub fn pullback_sequence(p: &MultiPoly, f: &AffineMap, m: usize) -> Result<PullbackSequence> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if p.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: f.dim(),
        });
    }
    let inverse = f.invert()?;
    if !f.is_contractive().contractive {
        return Err(Error::NotContractive);
    }
    let mut polys = Vec::with_capacity(m + 1);
    polys.push(p.clone());
    for j in 1..=m {
        let next = polys[j - 1].compose_affine(&inverse)?;
        polys.push(next);
    }
    Ok(PullbackSequence {
        base: p.clone(),
        map: f.clone(),
        polys,
    })
}

/// Rank of the coefficient vectors of `P_0..P_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanDimension {
    pub rank: usize,
    /// Earliest indices `k_1 < … < k_r` whose polynomials span the rest.
    pub basis: Vec<usize>,
    /// `rank_prefix[j]` is the rank of `P_0..P_j`.
    pub rank_prefix: Vec<usize>,
    /// `binomial(dim + deg P, dim)`, the dimension of the ambient space.
    pub cap: u128,
}

fn monomial_count(dim: usize, degree: u32) -> u128 {
    // binomial(dim + degree, dim), computed incrementally to stay exact
    let mut acc: u128 = 1;
    for i in 1..=dim as u128 {
        acc = acc * (degree as u128 + i) / i;
    }
    acc
}

pub fn coefficient_span_dimension(seq: &PullbackSequence) -> SpanDimension {
    let degree = seq.base.degree().unwrap_or(0);
    let basis = MultiPoly::monomial_basis(seq.base.dim(), degree);
    let vectors: Vec<Vec<Rational>> = seq.polys.iter().map(|p| p.coefficient_vector(&basis)).collect();
    let profile = rank_profile(&vectors);
    SpanDimension {
        rank: profile.rank(),
        basis: profile.basis,
        rank_prefix: profile.rank_prefix,
        cap: monomial_count(seq.base.dim(), degree),
    }
}

/// Coefficients `c_i` with `P_j = Σ c_i P_{basis[i]}`, checked by
/// re-expanding the combination.
pub fn dependency_witness(seq: &PullbackSequence, j: usize, basis: &[usize]) -> Result<Vec<Rational>> {
    if j >= seq.polys.len() {
        return Err(Error::invalid(format!("index {} beyond the sequence", j)));
    }
    if let Some(&k) = basis.iter().find(|&&k| k >= seq.polys.len()) {
        return Err(Error::invalid(format!("basis index {} beyond the sequence", k)));
    }
    if basis.contains(&j) {
        return Err(Error::invalid(format!("index {} is itself in the basis", j)));
    }
    let degree = seq.base.degree().unwrap_or(0);
    let monomials = MultiPoly::monomial_basis(seq.base.dim(), degree);
    let columns: Vec<Vec<Rational>> = basis
        .iter()
        .map(|&k| seq.polys[k].coefficient_vector(&monomials))
        .collect();
    let target = seq.polys[j].coefficient_vector(&monomials);
    let coeffs = solve_in_span(&columns, &target).ok_or_else(|| {
        let mut with_target = columns.clone();
        with_target.push(target.clone());
        Error::NotInSpan(format!(
            "P_{} is outside the span of {:?}: rank {} grows to {}",
            j,
            basis,
            rank_profile(&columns).rank(),
            rank_profile(&with_target).rank()
        ))
    })?;
    let mut combo = MultiPoly::zero(seq.base.dim());
    for (c, &k) in coeffs.iter().zip(basis) {
        combo = combo.add(&seq.polys[k].scale(c))?;
    }
    if combo != seq.polys[j] {
        return Err(Error::invalid("witness re-expansion does not reproduce the polynomial"));
    }
    Ok(coeffs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub j: usize,
    pub rank_so_far: usize,
    /// Diameter of `f^j` applied to the zero samples; a lower bound for
    /// the diameter of `S(P_j)`.
    pub sampled_diameter: f64,
    /// `‖M‖^j · diam(samples) + 1e−9`.
    pub diameter_bound: f64,
    pub max_residual: f64,
    /// `1e−9 · (1 + max |coefficient of P_j|)`.
    pub residual_tolerance: f64,
}

impl DecayRow {
    pub fn passed(&self) -> bool {
        self.sampled_diameter <= self.diameter_bound && self.max_residual <= self.residual_tolerance
    }
}

/// Linearity cross-check of the dependency witnesses on the pushed samples.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCheck {
    pub j: usize,
    pub coefficients: Vec<Rational>,
    /// Largest `|P_j(x) − Σ c_i P_{k_i}(x)|` relative to the coefficient scale.
    pub max_deviation: f64,
    /// Pushed samples that are zeros of every basis polynomial.
    pub intersection_points: usize,
    /// Largest `|P_j|` on those points, relative to the same scale.
    pub max_on_intersection: f64,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.max_deviation <= ZERO_TOLERANCE && self.max_on_intersection <= ZERO_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub operator_norm: f64,
    pub initial_diameter: f64,
    pub span: SpanDimension,
    pub rows: Vec<DecayRow>,
    /// Diameters never increase once they drop below the initial one.
    pub monotone: bool,
    pub witnesses: Vec<WitnessCheck>,
    pub conclusion: &'static str,
}

impl DecayReport {
    pub fn passed(&self) -> bool {
        self.monotone
            && self.rows.iter().all(DecayRow::passed)
            && self.witnesses.iter().all(WitnessCheck::passed)
            && self.span.rank as u128 <= self.span.cap
    }
}

fn residual_scale(p: &MultiPoly) -> f64 {
    ZERO_TOLERANCE * (1.0 + p.max_abs_coefficient())
}

fn max_abs_on(p: &MultiPoly, cloud: &PointCloud) -> f64 {
    cloud
        .points()
        .map(|x| libm::fabs(p.evaluate_f64(x)))
        .fold(0.0, f64::max)
}

/// Pushes the zero samples through `f^j` for every `j` in the sequence,
/// recording residuals against `P_j` and sampled diameters, then checks
/// every dependency witness on the pushed points.
pub fn diameter_decay_report(seq: &PullbackSequence, zero_samples: &PointCloud) -> Result<DecayReport> {
    if zero_samples.dim() != seq.base.dim() {
        return Err(Error::DimensionMismatch {
            expected: seq.base.dim(),
            found: zero_samples.dim(),
        });
    }
    let off = max_abs_on(&seq.base, zero_samples);
    if off > ZERO_TOLERANCE {
        return Err(Error::invalid(format!(
            "samples are not zeros of the polynomial (residual {:e})",
            off
        )));
    }
    let span = coefficient_span_dimension(seq);
    let norm = seq.map.operator_norm();
    let initial_diameter = attractor::diameter(zero_samples)?;

    let mut rows = Vec::with_capacity(seq.polys.len());
    let mut pushed_all = PointCloud::new(zero_samples.dim());
    let mut power = AffineMap::identity(seq.map.dim());
    for (j, pj) in seq.polys.iter().enumerate() {
        if j > 0 {
            power = seq.map.compose(&power)?;
        }
        let float: FloatAffine = power.to_f64();
        let pushed = zero_samples.map(&float);
        rows.push(DecayRow {
            j,
            rank_so_far: span.rank_prefix[j],
            sampled_diameter: attractor::diameter(&pushed)?,
            diameter_bound: libm::pow(norm, j as f64) * initial_diameter + 1e-9,
            max_residual: max_abs_on(pj, &pushed),
            residual_tolerance: residual_scale(pj),
        });
        pushed_all.extend(&pushed)?;
    }

    let mut monotone = true;
    let mut prev: Option<f64> = None;
    for row in &rows {
        if let Some(p) = prev {
            if row.sampled_diameter > p + 1e-9 {
                monotone = false;
            }
        }
        if row.sampled_diameter < initial_diameter {
            prev = Some(row.sampled_diameter);
        }
    }

    let mut witnesses = Vec::new();
    for j in 0..seq.polys.len() {
        if span.basis.contains(&j) {
            continue;
        }
        let coefficients = dependency_witness(seq, j, &span.basis)?;
        witnesses.push(check_witness(seq, j, &span.basis, coefficients, &pushed_all));
    }

    Ok(DecayReport {
        operator_norm: norm,
        initial_diameter,
        span,
        rows,
        monotone,
        witnesses,
        conclusion: CITED_CONCLUSION,
    })
}

fn check_witness(
    seq: &PullbackSequence,
    j: usize,
    basis: &[usize],
    coefficients: Vec<Rational>,
    points: &PointCloud,
) -> WitnessCheck {
    let cf: Vec<f64> = rational::vec_to_f64(&coefficients);
    let target = &seq.polys[j];
    let scale = 1.0
        + target.max_abs_coefficient()
        + basis
            .iter()
            .zip(&cf)
            .map(|(&k, c)| libm::fabs(*c) * seq.polys[k].max_abs_coefficient())
            .sum::<f64>();
    let mut max_deviation: f64 = 0.0;
    let mut intersection_points = 0;
    let mut max_on_intersection: f64 = 0.0;
    for x in points.points() {
        let values: Vec<f64> = basis.iter().map(|&k| seq.polys[k].evaluate_f64(x)).collect();
        let pj = target.evaluate_f64(x);
        let combo: f64 = values.iter().zip(&cf).map(|(v, c)| v * c).sum();
        max_deviation = max_deviation.max(libm::fabs(pj - combo) / scale);
        let on_all = basis
            .iter()
            .zip(&values)
            .all(|(&k, v)| libm::fabs(*v) <= residual_scale(&seq.polys[k]));
        if on_all {
            intersection_points += 1;
            max_on_intersection = max_on_intersection.max(libm::fabs(pj) / scale);
        }
    }
    WitnessCheck {
        j,
        coefficients,
        max_deviation,
        intersection_points,
        max_on_intersection,
    }
}

/// Exact rational points on the unit sphere `S^{n−1}` via inverse
/// stereographic projection `y ↦ (2y, |y|² − 1) / (|y|² + 1)` from a
/// deterministic set of rational `y`. The north pole and, for `n = 2`,
/// the points `(±1, 0)` are always included.
pub fn unit_sphere_samples(n: usize, count: usize) -> Result<Vec<Vec<Rational>>> {
    if n < 2 {
        return Err(Error::invalid("sphere dimension must be at least 2"));
    }
    if count == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    const DENOM: f64 = 1024.0;
    let snap = |v: f64| rational::frac(libm::round(v * DENOM) as i64, DENOM as i64);
    let mut out: Vec<Vec<Rational>> = Vec::with_capacity(count);
    let mut north = alloc::vec![Rational::zero(); n];
    north[n - 1] = Rational::one();
    out.push(north);
    let m = n - 1;
    // k = 0 would be the north pole again
    let mut k = 1usize;
    while out.len() < count {
        let y: Vec<Rational> = if m == 1 {
            // half-angle parameter of an equally spaced angle
            let theta = core::f64::consts::TAU * k as f64 / count as f64 - core::f64::consts::PI;
            alloc::vec![snap(libm::tan(theta / 2.0))]
        } else {
            // Fibonacci lattice on the sphere, pulled back to the plane
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = libm::sqrt((1.0 - z * z).max(0.0));
            let phi = k as f64 * 2.399_963_229_728_653;
            let scale = r / (1.0 - z);
            (0..m)
                .map(|i| match i {
                    0 => snap(scale * libm::cos(phi)),
                    1 => snap(scale * libm::sin(phi)),
                    _ => snap(scale * libm::sin(phi * (i as f64 + 1.0)) * 0.5),
                })
                .collect()
        };
        k += 1;
        let norm2: Rational = y.iter().map(|v| v * v).sum();
        let denom = &norm2 + Rational::one();
        let mut x: Vec<Rational> = y.iter().map(|v| rational::int(2) * v / &denom).collect();
        x.push((&norm2 - Rational::one()) / &denom);
        if !out.contains(&x) {
            out.push(x);
        }
        if k > 64 * count {
            break;
        }
    }
    if n == 2 {
        for p in [alloc::vec![rational::int(1), Rational::zero()], alloc::vec![rational::int(-1), Rational::zero()]] {
            if !out.contains(&p) {
                out.pop();
                out.insert(1, p);
            }
        }
    }
    Ok(out)
}

/// Float zeros of `P` found by bisection along random segments of the box
/// `[lo, hi]^dim`, refined until the bracket is below `1e−14`.
pub fn bisection_zero_samples(
    p: &MultiPoly,
    lo: f64,
    hi: f64,
    count: usize,
    seed: u64,
) -> Result<PointCloud> {
    if p.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    if lo.partial_cmp(&hi) != Some(core::cmp::Ordering::Less) {
        return Err(Error::invalid("need lo < hi"));
    }
    const STEPS: usize = 64;
    let dim = p.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cloud = PointCloud::new(dim);
    let mut attempts = 0;
    while cloud.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let a: Vec<f64> = (0..dim).map(|_| rng.gen_range(lo..hi)).collect();
        let b: Vec<f64> = (0..dim).map(|_| rng.gen_range(lo..hi)).collect();
        let at = |s: f64| -> Vec<f64> { a.iter().zip(&b).map(|(x, y)| x + s * (y - x)).collect() };
        let mut prev_s = 0.0;
        let mut prev_v = p.evaluate_f64(&a);
        for step in 1..=STEPS {
            let s = step as f64 / STEPS as f64;
            let v = p.evaluate_f64(&at(s));
            if prev_v == 0.0 || (prev_v < 0.0) != (v < 0.0) {
                let (mut l, mut r, mut lv) = (prev_s, s, prev_v);
                while r - l > 1e-14 && lv != 0.0 {
                    let mid = 0.5 * (l + r);
                    let mv = p.evaluate_f64(&at(mid));
                    if (mv < 0.0) == (lv < 0.0) && mv != 0.0 {
                        l = mid;
                        lv = mv;
                    } else {
                        r = mid;
                    }
                }
                cloud.push(&at(if lv == 0.0 { l } else { 0.5 * (l + r) }))?;
                break;
            }
            prev_s = s;
            prev_v = v;
        }
    }
    if cloud.is_empty() {
        return Err(Error::invalid("no sign change found in the box"));
    }
    Ok(cloud)
}

/// Converts exact samples to a float cloud.
pub fn to_cloud(dim: usize, points: &[Vec<Rational>]) -> Result<PointCloud> {
    let floats: Vec<Vec<f64>> = points.iter().map(|p| rational::vec_to_f64(p)).collect();
    PointCloud::from_points(dim, &floats)
}

/// One line per row, for quick inspection.
pub fn summary_lines(report: &DecayReport) -> Vec<String> {
    report
        .rows
        .iter()
        .map(|r| {
            format!(
                "j={} rank={} sampled_diameter={:.12} residual={:.3e}",
                r.j, r.rank_so_far, r.sampled_diameter, r.max_residual
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::unit_sphere;
    use crate::rational::{frac, int};
    use alloc::vec;

    fn half() -> AffineMap {
        AffineMap::homothety(frac(1, 2), vec![int(0), int(0)])
    }

    #[test]
    fn pullbacks_of_the_circle() {
        let seq = pullback_sequence(&unit_sphere(2), &half(), 2).unwrap();
        let p1 = MultiPoly::from_terms(2, [(vec![2, 0], int(4)), (vec![0, 2], int(4)), (vec![0, 0], int(-1))]).unwrap();
        let p2 = MultiPoly::from_terms(2, [(vec![2, 0], int(16)), (vec![0, 2], int(16)), (vec![0, 0], int(-1))]).unwrap();
        assert_eq!(seq.polys(), &[unit_sphere(2), p1.clone(), p2]);
        assert!(p1.evaluate(&[frac(1, 2), int(0)]).unwrap().is_zero());
        assert_eq!(pullback_sequence(&unit_sphere(2), &half(), 0).unwrap().polys().len(), 1);
        assert!(seq.polys().iter().all(|p| p.degree() == Some(2)));
    }

    #[test]
    fn pullback_rejections() {
        let c = MultiPoly::constant(2, int(3));
        assert_eq!(pullback_sequence(&c, &half(), 2), Err(Error::ConstantPolynomial));
        let singular = AffineMap::homothety(int(0), vec![int(0), int(0)]);
        assert_eq!(pullback_sequence(&unit_sphere(2), &singular, 2), Err(Error::Singular));
        let expanding = AffineMap::homothety(int(2), vec![int(0), int(0)]);
        assert_eq!(pullback_sequence(&unit_sphere(2), &expanding, 2), Err(Error::NotContractive));
    }

    #[test]
    fn span_and_witness() {
        let seq = pullback_sequence(&unit_sphere(2), &half(), 2).unwrap();
        let span = coefficient_span_dimension(&seq);
        assert_eq!((span.rank, span.basis.clone(), span.cap), (2, vec![0, 1], 6));
        assert_eq!(span.rank_prefix, vec![1, 2, 2]);
        assert_eq!(dependency_witness(&seq, 2, &[0, 1]).unwrap(), vec![int(-4), int(5)]);
        assert!(dependency_witness(&seq, 1, &[0, 1]).is_err());
        assert!(matches!(dependency_witness(&seq, 2, &[0]), Err(Error::NotInSpan(_))));
        let single = pullback_sequence(&unit_sphere(2), &half(), 0).unwrap();
        assert_eq!(coefficient_span_dimension(&single).rank, 1);
    }

    #[test]
    fn linear_rank_is_capped() {
        let p = MultiPoly::linear_form(&[int(1), int(-2)], &int(3));
        let f = AffineMap::homothety(frac(1, 2), vec![int(1), int(1)]);
        let seq = pullback_sequence(&p, &f, 5).unwrap();
        let span = coefficient_span_dimension(&seq);
        assert!(span.rank <= 3);
        assert_eq!(span.cap, 3);
    }

    #[test]
    fn circle_samples_are_exact() {
        let pts = unit_sphere_samples(2, 64).unwrap();
        assert_eq!(pts.len(), 64);
        let p = unit_sphere(2);
        assert!(pts.iter().all(|x| p.evaluate(x).unwrap().is_zero()));
        assert!(pts.contains(&vec![int(1), int(0)]) && pts.contains(&vec![int(-1), int(0)]));
        let s3 = unit_sphere_samples(3, 50).unwrap();
        assert!(s3.iter().all(|x| unit_sphere(3).evaluate(x).unwrap().is_zero()));
    }

    #[test]
    fn decay_on_the_circle() {
        let seq = pullback_sequence(&unit_sphere(2), &half(), 10).unwrap();
        let cloud = to_cloud(2, &unit_sphere_samples(2, 64).unwrap()).unwrap();
        let report = diameter_decay_report(&seq, &cloud).unwrap();
        assert!(report.passed(), "{:?}", report);
        for row in &report.rows {
            let expect = 2.0 * libm::pow(0.5, row.j as f64);
            assert!((row.sampled_diameter - expect).abs() <= 1e-9);
        }
        assert_eq!(report.rows[0].sampled_diameter, report.initial_diameter);
        assert_eq!(report.witnesses.len(), 9);
        assert_eq!(report.witnesses[0].coefficients, vec![int(-4), int(5)]);
        assert_eq!(report.conclusion, CITED_CONCLUSION);
    }

    #[test]
    fn decay_rejects_off_surface_samples() {
        let seq = pullback_sequence(&unit_sphere(2), &half(), 2).unwrap();
        let cloud = PointCloud::from_points(2, &[vec![0.5, 0.5]]).unwrap();
        assert!(diameter_decay_report(&seq, &cloud).is_err());
    }

    #[test]
    fn bisection_finds_zeros() {
        let cloud = bisection_zero_samples(&unit_sphere(3), -2.0, 2.0, 40, 11).unwrap();
        assert_eq!(cloud.len(), 40);
        assert!(cloud.points().all(|x| unit_sphere(3).evaluate_f64(x).abs() <= 1e-12));
    }
}
