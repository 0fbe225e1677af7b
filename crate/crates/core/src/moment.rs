//! Self-affine IFS whose attractor is an arc of the moment curve
//! `η(t) = (t, t², …, tⁿ)`.
//!
//! For a contraction ratio `λ` and anchors `t_i` tiling `[c, d]`, the map
//! `f_i = T_i x − T_i η(c − t_i/λ)` with lower-triangular
//! `T_i[k][j] = λᵏ · C(k, j) · (t_i/λ − c)^(k−j)` satisfies
//! `f_i(η(t)) = η(λ(t − c) + t_i)`, so `η([c, d])` is the attractor.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::{self, AffineMap, IteratedFunctionSystem};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

/// Denominator of the rational surrogate used for `√n`.
pub const SQRT_SCALE: u64 = 1_000_000;
/// Largest anchor grid [`choose_anchors`] will produce.
pub const MAX_ANCHORS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentCurveSpec {
    dim: usize,
    c: Rational,
    d: Rational,
}

impl MomentCurveSpec {
    pub fn new(dim: usize, c: Rational, d: Rational) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid(format!("moment curve needs n >= 2, got {dim}")));
        }
        if c >= d {
            return Err(Error::invalid("moment curve interval needs c < d"));
        }
        Ok(MomentCurveSpec { dim, c, d })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.c <= t && t <= &self.d
    }

    /// `max{(2|c|+1)ⁿ, (|c|+|d|+1)ⁿ}`.
    fn growth(&self) -> Rational {
        let one = Rational::one();
        let a = rational::pow(&(self.c.abs() * rational::int(2) + &one), self.dim);
        let b = rational::pow(&(self.c.abs() + self.d.abs() + &one), self.dim);
        a.max(b)
    }
}

/// `(t, t², …, tⁿ)`.
pub fn eval_moment(n: usize, t: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    let mut acc = Rational::one();
    for _ in 0..n {
        acc *= t;
        out.push(acc.clone());
    }
    out
}

/// `(2ⁿ √n max{(2|c|+1)ⁿ, (|c|+|d|+1)ⁿ})⁻¹` in floating point.
pub fn printed_bound_f64(spec: &MomentCurveSpec) -> f64 {
    let denom = libm::pow(2.0, spec.dim as f64)
        * libm::sqrt(spec.dim as f64)
        * rational::to_f64(&spec.growth());
    1.0 / denom
}

/// Exact admissible ceiling for `λ`: the contraction bound with `√n`
/// replaced by the smallest multiple of `10⁻⁶` strictly above it, so the
/// result sits strictly below the real-valued bound.
pub fn lambda_bound(spec: &MomentCurveSpec) -> Rational {
    let root = rational::sqrt_upper(spec.dim as u64, SQRT_SCALE);
    let denom = rational::pow(&rational::int(2), spec.dim) * root * spec.growth();
    denom.recip()
}

/// Largest `2⁻ᵏ` not exceeding [`lambda_bound`]; always at least half of it.
pub fn default_lambda(spec: &MomentCurveSpec) -> Rational {
    let bound = lambda_bound(spec);
    let half = rational::frac(1, 2);
    let mut lambda = Rational::one();
    while lambda > bound {
        lambda *= &half;
    }
    lambda
}

fn check_lambda(spec: &MomentCurveSpec, lambda: &Rational) -> Result<()> {
    if !lambda.is_positive() {
        return Err(Error::invalid("lambda must be positive"));
    }
    if lambda > &lambda_bound(spec) {
        return Err(Error::invalid(format!(
            "lambda {} exceeds the admissible bound {}",
            rational::to_string(lambda),
            rational::to_string(&lambda_bound(spec))
        )));
    }
    Ok(())
}

/// Uniform anchor grid: `ℓ = ⌈1/λ⌉` anchors
/// `t_i = c + (i−1)(d−c)(1−λ)/(ℓ−1)`, whose image intervals
/// `[t_i, t_i + λ(d−c)]` abut or overlap and cover exactly `[c, d]`.
pub fn choose_anchors(spec: &MomentCurveSpec, lambda: &Rational) -> Result<Vec<Rational>> {
    check_lambda(spec, lambda)?;
    let count = rational::ceil_to_usize(&lambda.recip()).ok_or(Error::TooLarge {
        requested: u128::MAX,
        limit: MAX_ANCHORS,
    })?;
    if count < 2 {
        return Err(Error::invalid("lambda must be below 1"));
    }
    if count as u128 > MAX_ANCHORS {
        return Err(Error::TooLarge {
            requested: count as u128,
            limit: MAX_ANCHORS,
        });
    }
    let width = &spec.d - &spec.c;
    let step = &width * (Rational::one() - lambda) / rational::int(count as i64 - 1);
    Ok((0..count)
        .map(|i| &spec.c + &step * rational::int(i as i64))
        .collect())
}

/// Exact interval check that `{x ↦ λ(x−c) + t_i}` maps `[c, d]` onto
/// itself: every image lies inside `[c, d]` and the images leave no gap.
pub fn check_tiling(spec: &MomentCurveSpec, lambda: &Rational, anchors: &[Rational]) -> Result<()> {
    let width = lambda * (&spec.d - &spec.c);
    let intervals: Vec<(Rational, Rational)> = anchors
        .iter()
        .map(|t| (t.clone(), t + &width))
        .collect();
    rational::check_cover(&spec.c, &spec.d, intervals)
}

/// The linear part `T_i` for anchor `t`.
pub fn anchor_matrix(spec: &MomentCurveSpec, lambda: &Rational, t: &Rational) -> Matrix {
    let n = spec.dim;
    let shift = t / lambda - &spec.c;
    let shift_pows: Vec<Rational> = (0..n).map(|e| rational::pow(&shift, e)).collect();
    let mut m = Matrix::zeros(n, n);
    let mut lambda_k = Rational::one();
    for k in 1..=n {
        lambda_k *= lambda;
        for j in 1..=k {
            m[(k - 1, j - 1)] = &lambda_k * rational::binomial(k, j) * &shift_pows[k - j];
        }
    }
    m
}

/// `f_i(x) = T_i x − T_i η(c − t_i/λ)`.
pub fn anchor_map(spec: &MomentCurveSpec, lambda: &Rational, t: &Rational) -> Result<AffineMap> {
    let m = anchor_matrix(spec, lambda, t);
    let base = eval_moment(spec.dim, &(&spec.c - t / lambda));
    let translation = m.mul_vec(&base)?.into_iter().map(|x| -x).collect();
    AffineMap::new(m, translation)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentIfsRecipe {
    pub spec: MomentCurveSpec,
    pub lambda: Rational,
    pub anchors: Vec<Rational>,
    pub ifs: IteratedFunctionSystem,
}

/// Builds one map per anchor. Rejects inadmissible `λ`, anchors outside
/// `[c, d]`, a broken tiling, and any map without an exact row-sum
/// contraction certificate.
pub fn build_moment_ifs(
    spec: &MomentCurveSpec,
    lambda: &Rational,
    anchors: &[Rational],
) -> Result<MomentIfsRecipe> {
    check_lambda(spec, lambda)?;
    if let Some(t) = anchors.iter().find(|t| !spec.contains(t)) {
        return Err(Error::invalid(format!(
            "anchor {} outside [c, d]",
            rational::to_string(t)
        )));
    }
    check_tiling(spec, lambda, anchors)?;
    let mut maps = Vec::with_capacity(anchors.len());
    for t in anchors {
        let f = anchor_map(spec, lambda, t)?;
        let row_sum = f.matrix().max_abs_row_sum();
        if !affine::row_sum_certifies(spec.dim, &row_sum) {
            return Err(Error::NotContractive);
        }
        maps.push(f);
    }
    Ok(MomentIfsRecipe {
        spec: spec.clone(),
        lambda: lambda.clone(),
        anchors: anchors.to_vec(),
        ifs: IteratedFunctionSystem::new(maps)?,
    })
}

/// Default construction: [`default_lambda`] and [`choose_anchors`].
pub fn build_default(spec: &MomentCurveSpec) -> Result<MomentIfsRecipe> {
    let lambda = default_lambda(spec);
    let anchors = choose_anchors(spec, &lambda)?;
    build_moment_ifs(spec, &lambda, &anchors)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceViolation {
    pub map: usize,
    pub t: Rational,
    pub image: Vec<Rational>,
    pub expected: Vec<Rational>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvarianceReport {
    pub checks: usize,
    pub violations: Vec<InvarianceViolation>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(mut self, other: InvarianceReport) -> InvarianceReport {
        self.checks += other.checks;
        self.violations.extend(other.violations);
        self
    }
}

impl MomentIfsRecipe {
    pub fn verify_invariance(&self, samples: &[Rational]) -> InvarianceReport {
        verify_moment_invariance(
            &self.spec,
            &self.lambda,
            &self.anchors,
            self.ifs.maps(),
            samples,
        )
    }
}

/// Checks `f_i(η(t)) = η(λ(t − c) + t_i)` exactly for every map and sample.
/// Works on raw maps so that tampered systems can be inspected; a map/anchor
/// count mismatch is itself reported as a violation at `t = c`.
pub fn verify_moment_invariance(
    spec: &MomentCurveSpec,
    lambda: &Rational,
    anchors: &[Rational],
    maps: &[AffineMap],
    samples: &[Rational],
) -> InvarianceReport {
    let n = spec.dim;
    let points: Vec<SamplePowers> = samples
        .iter()
        .map(|t| SamplePowers::new(n, t, &(lambda * (t - &spec.c))))
        .collect();
    let mut report = InvarianceReport::default();
    for (i, f) in maps.iter().enumerate() {
        let (Some(anchor), true) = (anchors.get(i), f.dim() == n) else {
            report.violations.push(InvarianceViolation {
                map: i,
                t: spec.c.clone(),
                image: Vec::new(),
                expected: Vec::new(),
            });
            continue;
        };
        let rows = IntegerRows::new(f);
        for (t, point) in samples.iter().zip(&points) {
            report.checks += 1;
            if !rows.maps_onto_curve(point, anchor) {
                let image = f.apply(&eval_moment(n, t)).unwrap_or_default();
                let expected = eval_moment(n, &(lambda * (t - &spec.c) + anchor));
                report.violations.push(InvarianceViolation {
                    map: i,
                    t: t.clone(),
                    image,
                    expected,
                });
            }
        }
    }
    report
}

// The invariance check runs millions of times for n = 5, so it is done by
// integer cross-multiplication instead of reduced rational arithmetic.

/// `t = p/q` as the integer vector `(q^n, p q^(n−1), …, p^n)` (so that
/// `tʲ = powers[j] / q^n`), plus the shift `λ(t − c)` as a fraction.
struct SamplePowers {
    powers: Vec<BigInt>,
    shift_num: BigInt,
    shift_den: BigInt,
}

impl SamplePowers {
    fn new(n: usize, t: &Rational, shift: &Rational) -> Self {
        let (p, q) = (t.numer(), t.denom());
        let powers = (0..=n)
            .map(|j| num_traits::pow(p.clone(), j) * num_traits::pow(q.clone(), n - j))
            .collect();
        SamplePowers {
            powers,
            shift_num: shift.numer().clone(),
            shift_den: shift.denom().clone(),
        }
    }
}

/// Each row `k` of `x ↦ Mx + b` scaled by the lcm of its denominators.
struct IntegerRows {
    // numerators[k][0] is the translation, numerators[k][j] multiplies x_j
    numerators: Vec<Vec<BigInt>>,
    denominators: Vec<BigInt>,
}

impl IntegerRows {
    fn new(f: &AffineMap) -> Self {
        let n = f.dim();
        let mut numerators = Vec::with_capacity(n);
        let mut denominators = Vec::with_capacity(n);
        for k in 0..n {
            let row = f.matrix().row(k);
            let entries = core::iter::once(&f.translation()[k]).chain(row.iter());
            let den = entries
                .clone()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            numerators.push(entries.map(|x| x.numer() * (&den / x.denom())).collect());
            denominators.push(den);
        }
        IntegerRows {
            numerators,
            denominators,
        }
    }

    /// Whether `f(η(t)) = η(s)` with `s = λ(t − c) + anchor`.
    fn maps_onto_curve(&self, point: &SamplePowers, anchor: &Rational) -> bool {
        // s = u / v, unreduced
        let u = &point.shift_num * anchor.denom() + anchor.numer() * &point.shift_den;
        let v = &point.shift_den * anchor.denom();
        let q_n = &point.powers[0];
        let mut u_k = BigInt::one();
        let mut v_k = BigInt::one();
        for (k, (nums, den)) in self.numerators.iter().zip(&self.denominators).enumerate() {
            u_k *= &u;
            v_k *= &v;
            // row value = (Σ_j nums[j] · powers[j]) / (den · q^n), with x_0 := 1
            let mut acc = &nums[0] * q_n;
            for (a, x) in nums[1..=k + 1].iter().zip(&point.powers[1..]) {
                if !a.is_zero() {
                    acc += a * x;
                }
            }
            // entries above the diagonal are zero for moment maps, but a
            // tampered map may carry them
            for (a, x) in nums[k + 2..].iter().zip(&point.powers[k + 2..]) {
                if !a.is_zero() {
                    acc += a * x;
                }
            }
            if acc * &v_k != &u_k * den * q_n {
                return false;
            }
        }
        true
    }
}

/// `count` reproducible rational parameters in `[c, d]`: both endpoints
/// first, then `c + (d − c)·k/q` with `q ≤ 1000` and `0 ≤ k ≤ q` drawn from
/// a seeded ChaCha8 stream.
pub fn random_parameters(spec: &MomentCurveSpec, count: usize, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = &spec.d - &spec.c;
    let mut out: Vec<Rational> = [spec.c.clone(), spec.d.clone()].into_iter().take(count).collect();
    while out.len() < count {
        let q: i64 = rng.gen_range(1..=1000);
        let k: i64 = rng.gen_range(0..=q);
        out.push(&spec.c + &width * rational::frac(k, q));
    }
    out
}

/// The affine map sending `η(t)` to `η(s(t − a))` for every `t`:
/// `diag(s, …, sⁿ)` composed with the binomial expansion of `(t − a)ᵏ`.
pub fn moment_homothety(n: usize, s: &Rational, a: &Rational) -> Result<AffineMap> {
    if s.is_zero() {
        return Err(Error::invalid("homothety factor must be nonzero"));
    }
    let neg_a = -a.clone();
    let mut m = Matrix::zeros(n, n);
    let mut translation = Vec::with_capacity(n);
    let mut s_k = Rational::one();
    for k in 1..=n {
        s_k *= s;
        for j in 1..=k {
            m[(k - 1, j - 1)] = &s_k * rational::binomial(k, j) * rational::pow(&neg_a, k - j);
        }
        translation.push(&s_k * rational::pow(&neg_a, k));
    }
    AffineMap::new(m, translation)
}
