//! Classification of analytic curve germs that are invariant under an
//! affine contraction fixing a point on them.
//!
//! The pipeline normalizes the germ at the fixed point, rewrites it as a
//! graph `(x, x₂*(x), …, xₙ*(x))` over its tangent direction, checks the
//! conjugation identity `A·ξ(x) = ξ(Y(x))` against the linear part of the
//! map, and finally decides whether the exponent profile can be re-centred
//! at another fixed point, which only the moment profile `p_k = k` allows.
//! Everything is exact on truncated series; the truncation order is an
//! explicit input and exponents too close to it abort the run.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};
use crate::series::{Series, SeriesVec};

pub const DEFAULT_ORDER: usize = 16;

/// An analytic germ given by its Taylor coefficients in `u = t − t0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveGerm {
    pub t0: Rational,
    pub series: SeriesVec,
}

impl CurveGerm {
    pub fn dim(&self) -> usize {
        self.series.dim()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// `γ(t0)`.
    pub fn base_point(&self) -> Vec<Rational> {
        self.series.coefficient_vector(0)
    }

    /// `γ′(t0)`.
    pub fn tangent(&self) -> Vec<Rational> {
        self.series.coefficient_vector(1)
    }
}

/// `J⁻¹(γ − γ(t0))`: moves the base point to the origin and the tangent to
/// `J⁻¹γ′(t0)`, which is `e₁` when `J`'s first column is the tangent.
pub fn normalize_at_fixed_point(
    curve: &SeriesVec,
    j: &Matrix,
    value_at_t0: &[Rational],
) -> Result<SeriesVec> {
    if curve.coefficient_vector(0) != value_at_t0 {
        return Err(Error::invalid("germ constant term differs from the base point"));
    }
    let j_inv = j.inverse()?;
    let mut shifted = Vec::with_capacity(curve.dim());
    for (s, v) in curve.coords().iter().zip(value_at_t0) {
        shifted.push(s.sub(&Series::constant(s.order(), v.clone()))?);
    }
    SeriesVec::new(shifted)?.transform(&j_inv)
}

/// `Some(λ)` iff `M·v = λ·v` exactly.
pub fn tangent_eigenvalue(m: &Matrix, tangent: &[Rational]) -> Result<Option<Rational>> {
    let k = tangent
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::invalid("tangent vector is zero"))?;
    let image = m.mul_vec(tangent)?;
    let lambda = &image[k] / &tangent[k];
    let ok = image.iter().zip(tangent).all(|(a, b)| a == &(&lambda * b));
    Ok(ok.then_some(lambda))
}

/// A normalized germ written as a graph over its first coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphForm {
    /// `p₂ < … < pₙ`, all at least 2.
    pub exponents: Vec<usize>,
    /// `c₂, …, cₙ`, the coefficients of `x^{p_k}`.
    pub leading: Vec<Rational>,
    /// `x₂*, …, xₙ*` as series in `x₁*`.
    pub series: Vec<Series>,
    /// Coordinate change applied to reach distinct leading exponents; the
    /// identity on the first coordinate, lower-level coordinates combined
    /// only when the normalized germ had repeated leading exponents.
    pub reduction: Matrix,
}

impl GraphForm {
    pub fn dim(&self) -> usize {
        self.series.len() + 1
    }

    /// Full profile `(1, p₂, …, pₙ)`.
    pub fn profile(&self) -> Vec<usize> {
        let mut p = vec![1];
        p.extend_from_slice(&self.exponents);
        p
    }
}

/// Reparametrizes by the inverse of the first coordinate and extracts the
/// leading exponent of every other coordinate. Coordinates sharing a leading
/// exponent are combined (a lower-triangular change of basis recorded in
/// [`GraphForm::reduction`]) until all exponents differ.
pub fn graph_form(normalized: &SeriesVec) -> Result<GraphForm> {
    let n = normalized.dim();
    let order = normalized.order();
    if normalized.coefficient_vector(0).iter().any(|c| !c.is_zero()) {
        return Err(Error::invalid("normalized germ must vanish at the base point"));
    }
    let mut e1 = vec![Rational::zero(); n];
    e1[0] = Rational::one();
    if normalized.coefficient_vector(1) != e1 {
        return Err(Error::invalid("normalized tangent must be the first unit vector"));
    }
    let param = normalized.coords()[0].reverse()?;
    let mut rows: Vec<Series> = normalized.coords()[1..]
        .iter()
        .map(|s| s.compose(&param))
        .collect::<Result<_>>()?;
    let m = n - 1;
    let mut transform = Matrix::identity(m);
    let mut assigned: Vec<(usize, usize)> = Vec::new(); // (pivot degree, row)
    let mut free: Vec<usize> = (0..m).collect();
    for degree in 2..=order {
        let Some(pos) = free.iter().position(|&r| !rows[r].coeff(degree).is_zero()) else {
            continue;
        };
        let pivot = free.remove(pos);
        for &r in &free {
            if rows[r].coeff(degree).is_zero() {
                continue;
            }
            let f = rows[r].coeff(degree) / rows[pivot].coeff(degree);
            rows[r] = rows[r].sub(&rows[pivot].scale(&f))?;
            for c in 0..m {
                let d = &f * &transform[(pivot, c)];
                transform[(r, c)] -= d;
            }
        }
        assigned.push((degree, pivot));
    }
    if let Some(&r) = free.first() {
        return Err(Error::HyperplaneDegenerate {
            coordinate: r + 2,
            order,
        });
    }
    let mut reduction = Matrix::identity(n);
    let mut exponents = Vec::with_capacity(m);
    let mut leading = Vec::with_capacity(m);
    let mut series = Vec::with_capacity(m);
    for (k, &(degree, r)) in assigned.iter().enumerate() {
        if degree + 2 > order {
            return Err(Error::InsufficientOrder {
                exponent: degree,
                needed: degree + 2,
                order,
            });
        }
        exponents.push(degree);
        leading.push(rows[r].coeff(degree).clone());
        series.push(rows[r].clone());
        for c in 0..m {
            reduction[(k + 1, c + 1)] = transform[(r, c)].clone();
        }
    }
    Ok(GraphForm {
        exponents,
        leading,
        series,
        reduction,
    })
}

/// A coefficient where the two sides of a conjugation identity disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// 1-based coordinate index.
    pub coordinate: usize,
    pub degree: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateCheck {
    /// 1-based coordinate index (2..=n).
    pub coordinate: usize,
    pub exponent: usize,
    pub lambda: Rational,
    /// `λ₁^{p_k}`.
    pub predicted_lambda: Rational,
    pub eigen_relation: bool,
    pub monomial: bool,
    pub first_mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationReport {
    pub coordinates: Vec<CoordinateCheck>,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.coordinates
            .iter()
            .all(|c| c.first_mismatch.is_none() && c.eigen_relation && c.monomial)
    }

    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.coordinates.iter().find_map(|c| c.first_mismatch.as_ref())
    }
}

/// Checks `x_k*(λ₁x) = λ_k · x_k*(x)` coefficientwise, the eigenvalue
/// relation `λ_k = λ₁^{p_k}`, and that each `x_k*` is the single monomial
/// `c_k x^{p_k}`.
pub fn check_conjugation(gf: &GraphForm, lambdas: &[Rational]) -> Result<ConjugationReport> {
    if lambdas.len() != gf.dim() {
        return Err(Error::DimensionMismatch {
            expected: gf.dim(),
            found: lambdas.len(),
        });
    }
    let lambda = &lambdas[0];
    if lambda.is_zero() {
        return Err(Error::invalid("first eigenvalue must be nonzero"));
    }
    let mut coordinates = Vec::with_capacity(gf.series.len());
    for (k, s) in gf.series.iter().enumerate() {
        let lambda_k = &lambdas[k + 1];
        let p = gf.exponents[k];
        let lhs = s.rescale_argument(lambda);
        let rhs = s.scale(lambda_k);
        let first_mismatch = (0..=s.order())
            .find(|&m| lhs.coeff(m) != rhs.coeff(m))
            .map(|m| Mismatch {
                coordinate: k + 2,
                degree: m,
                lhs: lhs.coeff(m).clone(),
                rhs: rhs.coeff(m).clone(),
            });
        let predicted_lambda = rational::pow(lambda, p);
        coordinates.push(CoordinateCheck {
            coordinate: k + 2,
            exponent: p,
            eigen_relation: &predicted_lambda == lambda_k,
            predicted_lambda,
            lambda: lambda_k.clone(),
            monomial: s.coeffs().iter().enumerate().all(|(m, c)| m == p || c.is_zero()),
            first_mismatch,
        });
    }
    Ok(ConjugationReport { coordinates })
}

/// General form of the conjugation identity for an arbitrary linear model
/// `A` (in graph coordinates): `A·ξ(x) = ξ(Y(x))` with
/// `Y = (A·ξ)₁`. Returns the first mismatching coefficient, if any.
pub fn check_model_conjugation(gf: &GraphForm, a: &Matrix) -> Result<Option<Mismatch>> {
    let n = gf.dim();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.rows(),
        });
    }
    let order = gf.series.first().map_or(1, Series::order);
    let mut xi = Vec::with_capacity(n);
    xi.push(Series::identity(order));
    xi.extend(gf.series.iter().cloned());
    let image = SeriesVec::new(xi.clone())?.transform(a)?;
    let y = &image.coords()[0];
    for (k, (lhs, s)) in image.coords().iter().zip(&xi).enumerate().skip(1) {
        let rhs = s.compose(y)?;
        if let Some(m) = (0..=order).find(|&m| lhs.coeff(m) != rhs.coeff(m)) {
            return Ok(Some(Mismatch {
                coordinate: k + 1,
                degree: m,
                lhs: lhs.coeff(m).clone(),
                rhs: rhs.coeff(m).clone(),
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecenterOutcome {
    /// Every `(t − t1)^{p_k}` lies in the span of `t^{p_j} − t1^{p_j}`;
    /// `matrix` row `k` holds the combination (row 1 is `e₁`).
    Feasible { matrix: Matrix, exponents: Vec<usize> },
    /// Row `row` (1-based) needs `t^{missing_degree}`, absent from the span.
    Infeasible {
        row: usize,
        exponent: usize,
        missing_degree: usize,
    },
}

impl RecenterOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, RecenterOutcome::Feasible { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecenterResult {
    /// Degrees `d ∈ {1, p₂, …, pₙ}` surviving the degree comparison
    /// `p_k = d·q_k` with integers `2 ≤ q₂ < … < qₙ`.
    pub admissible_degrees: Vec<usize>,
    pub outcome: RecenterOutcome,
}

/// Degree comparison: which `d` admit integers `2 ≤ q₂ < … < qₙ` with
/// `p_k = d·q_k`.
pub fn admissible_degrees(profile: &[usize]) -> Vec<usize> {
    let rest = &profile[1..];
    core::iter::once(1)
        .chain(rest.iter().copied())
        .filter(|&d| {
            if d == 1 {
                return true;
            }
            let qs: Option<Vec<usize>> = rest
                .iter()
                .map(|&p| (p % d == 0 && p / d >= 2).then_some(p / d))
                .collect();
            qs.is_some_and(|q| q.windows(2).all(|w| w[0] < w[1]))
        })
        .collect()
}

/// Decides whether the curve `(t, t^{p₂}, …, t^{pₙ})` can be re-centred at
/// `t1 ≠ 0` into the same monomial shape: after the degree filter forces a
/// linear first row, each `(t − t1)^{p_k}` must be an exact combination of
/// `t^{p_j} − t1^{p_j}`.
pub fn solve_recenter(profile: &[usize], t1: &Rational) -> Result<RecenterResult> {
    if t1.is_zero() {
        return Err(Error::invalid("t1 must be nonzero"));
    }
    if profile.first() != Some(&1) || profile.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("profile must start at 1 and increase strictly"));
    }
    let admissible_degrees = admissible_degrees(profile);
    let n = profile.len();
    let top = *profile.last().unwrap();
    let columns: Vec<Vec<Rational>> = profile
        .iter()
        .map(|&p| {
            let mut v = vec![Rational::zero(); top + 1];
            v[0] = -rational::pow(t1, p);
            v[p] = Rational::one();
            v
        })
        .collect();
    let mut matrix = Matrix::identity(n);
    let neg_t1 = -t1.clone();
    for (k, &p) in profile.iter().enumerate().skip(1) {
        let mut target = vec![Rational::zero(); top + 1];
        for (m, slot) in target.iter_mut().enumerate().take(p + 1) {
            *slot = rational::binomial(p, m) * rational::pow(&neg_t1, p - m);
        }
        match linalg::solve_in_span(&columns, &target) {
            Some(coeffs) => {
                for (j, c) in coeffs.into_iter().enumerate() {
                    matrix[(k, j)] = c;
                }
            }
            None => {
                let missing_degree = (1..=p)
                    .find(|m| !profile.contains(m) && !target[*m].is_zero())
                    .expect("a combination outside the span needs a missing monomial");
                return Ok(RecenterResult {
                    admissible_degrees,
                    outcome: RecenterOutcome::Infeasible {
                        row: k + 1,
                        exponent: p,
                        missing_degree,
                    },
                });
            }
        }
    }
    Ok(RecenterResult {
        admissible_degrees,
        outcome: RecenterOutcome::Feasible {
            matrix,
            exponents: profile.to_vec(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Affine image of the moment curve, `p_k = k`.
    MomentImage { profile: Vec<usize> },
    /// A `(t, t^{p₂}, …)` curve with an exponent gap; not the moment curve.
    ExponentGap {
        profile: Vec<usize>,
        row: usize,
        missing_degree: usize,
    },
    /// No diagonal model satisfies the conjugation identity to the order.
    ConjugationFails { reason: String },
    HyperplaneDegenerate { coordinate: usize },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::MomentImage { .. } => "affine image of moment curve",
            Verdict::ExponentGap { .. } => "p-curve with exponent gap (not moment)",
            Verdict::ConjugationFails { .. } => "conjugation fails (no diagonal model to order N)",
            Verdict::HyperplaneDegenerate { .. } => "hyperplane degenerate",
        }
    }
}

/// One line of the classification trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub name: &'static str,
    pub identity: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub lambda: Rational,
    pub stages: Vec<Stage>,
}

/// Runs normalize → graph form → conjugation → re-centring.
///
/// `m` is the linear part of the contraction fixing `γ(t0)`; `j`'s first
/// column must be the tangent `γ′(t0)` (an eigenvector of `m`), and its
/// remaining columns are expected to put `m` in real Jordan form.
pub fn classify_curve(germ: &CurveGerm, m: &Matrix, j: &Matrix, t1: &Rational) -> Result<Classification> {
    let n = germ.dim();
    for mat in [m, j] {
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: mat.rows(),
            });
        }
    }
    if t1.is_zero() {
        return Err(Error::invalid("t1 must be nonzero"));
    }
    let mut stages = Vec::new();
    let tangent = j.column(0);
    let lambda = tangent_eigenvalue(m, &tangent)?
        .ok_or_else(|| Error::invalid("first column of J is not an eigenvector of M"))?;
    if lambda.is_zero() || lambda.abs() >= Rational::one() {
        return Err(Error::invalid("tangent eigenvalue must satisfy 0 < |λ| < 1"));
    }
    stages.push(Stage {
        name: "tangent-eigenvalue",
        identity: "M·γ′(t0) = λ·γ′(t0)",
        detail: format!("λ = {}", rational::to_string(&lambda)),
    });

    let normalized = normalize_at_fixed_point(&germ.series, j, &germ.base_point())?;
    stages.push(Stage {
        name: "normalize",
        identity: "γ̃ = J⁻¹(γ − γ(t0))",
        detail: format!("order {}", germ.order()),
    });

    let gf = match graph_form(&normalized) {
        Ok(gf) => gf,
        Err(Error::HyperplaneDegenerate { coordinate, order }) => {
            stages.push(Stage {
                name: "graph-form",
                identity: "x_k*(x) = c_k x^{p_k} + o(x^{p_k})",
                detail: format!("coordinate {coordinate} vanishes to order {order}"),
            });
            return Ok(Classification {
                verdict: Verdict::HyperplaneDegenerate { coordinate },
                lambda,
                stages,
            });
        }
        Err(e) => return Err(e),
    };
    stages.push(Stage {
        name: "graph-form",
        identity: "x_k*(x) = c_k x^{p_k} + o(x^{p_k})",
        detail: format!("profile {:?}", gf.profile()),
    });

    let model = j.inverse()?.mul(m)?.mul(j)?;
    let model = gf.reduction.mul(&model)?.mul(&gf.reduction.inverse()?)?;
    let fails = |stages: &mut Vec<Stage>, name, identity, reason: String| {
        stages.push(Stage {
            name,
            identity,
            detail: reason.clone(),
        });
        Verdict::ConjugationFails { reason }
    };
    if let Some(mm) = check_model_conjugation(&gf, &model)? {
        let reason = format!(
            "coordinate {} degree {}: {} vs {}",
            mm.coordinate,
            mm.degree,
            rational::to_string(&mm.lhs),
            rational::to_string(&mm.rhs)
        );
        let verdict = fails(&mut stages, "model-conjugation", "A·ξ(x) = ξ(Y(x))", reason);
        return Ok(Classification { verdict, lambda, stages });
    }
    if !model.is_diagonal() {
        let verdict = fails(
            &mut stages,
            "model-conjugation",
            "A diagonal",
            String::from("model is not diagonal in the given basis"),
        );
        return Ok(Classification { verdict, lambda, stages });
    }
    let diag: Vec<Rational> = (0..n).map(|i| model[(i, i)].clone()).collect();
    let report = check_conjugation(&gf, &diag)?;
    if !report.passed() {
        let reason = match report.first_mismatch() {
            Some(mm) => format!(
                "coordinate {} degree {}: {} vs {}",
                mm.coordinate,
                mm.degree,
                rational::to_string(&mm.lhs),
                rational::to_string(&mm.rhs)
            ),
            None => String::from("eigenvalue relation or monomial shape fails"),
        };
        let verdict = fails(&mut stages, "diagonal-conjugation", "x_k*(λx) = λ_k x_k*(x)", reason);
        return Ok(Classification { verdict, lambda, stages });
    }
    stages.push(Stage {
        name: "diagonal-conjugation",
        identity: "x_k*(λx) = λ_k x_k*(x), λ_k = λ^{p_k}",
        detail: String::from("monomial graph"),
    });

    let profile = gf.profile();
    let recenter = solve_recenter(&profile, t1)?;
    let verdict = match recenter.outcome {
        RecenterOutcome::Feasible { .. } => {
            stages.push(Stage {
                name: "recenter",
                identity: "Σ_j b_kj (t^{p_j} − t1^{p_j}) = (t − t1)^{p_k}",
                detail: format!("feasible at t1 = {}", rational::to_string(t1)),
            });
            Verdict::MomentImage { profile }
        }
        RecenterOutcome::Infeasible {
            row,
            missing_degree,
            ..
        } => {
            stages.push(Stage {
                name: "recenter",
                identity: "Σ_j b_kj (t^{p_j} − t1^{p_j}) = (t − t1)^{p_k}",
                detail: format!("row {row} needs missing monomial t^{missing_degree}"),
            });
            Verdict::ExponentGap {
                profile,
                row,
                missing_degree,
            }
        }
    };
    Ok(Classification { verdict, lambda, stages })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn germ(order: usize, coords: &[&[i64]]) -> SeriesVec {
        let c: Vec<Vec<Rational>> = coords
            .iter()
            .map(|c| c.iter().map(|&x| int(x)).collect())
            .collect();
        SeriesVec::from_coefficients(order, &c).unwrap()
    }

    fn mat(rows: &[&[Rational]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let g = germ(8, &[&[0, 1], &[0, 0, 1]]);
        let n = normalize_at_fixed_point(&g, &Matrix::identity(2), &[int(0), int(0)]).unwrap();
        assert_eq!(n, g);
        // (t, t²) about t0 = 1 in u = t − 1
        let g = germ(8, &[&[1, 1], &[1, 2, 1]]);
        let j = mat(&[&[int(1), int(0)], &[int(2), int(1)]]);
        let n = normalize_at_fixed_point(&g, &j, &[int(1), int(1)]).unwrap();
        assert_eq!(n, germ(8, &[&[0, 1], &[0, 0, 1]]));
        assert!(n.coefficient_vector(0).iter().all(Zero::is_zero));
        assert!(normalize_at_fixed_point(&g, &j, &[int(0), int(1)]).is_err());
        let singular = mat(&[&[int(1), int(2)], &[int(2), int(4)]]);
        assert_eq!(
            normalize_at_fixed_point(&g, &singular, &[int(1), int(1)]),
            Err(Error::Singular)
        );
    }

    #[test]
    fn tangent_eigenvalue_examples() {
        let d = Matrix::diagonal(&[frac(1, 2), frac(1, 4)]);
        assert_eq!(tangent_eigenvalue(&d, &[int(1), int(0)]).unwrap(), Some(frac(1, 2)));
        assert_eq!(tangent_eigenvalue(&d, &[int(1), int(1)]).unwrap(), None);
        let m = mat(&[&[frac(1, 2), int(0)], &[frac(1, 3), frac(1, 4)]]);
        assert_eq!(tangent_eigenvalue(&m, &[int(0), int(1)]).unwrap(), Some(frac(1, 4)));
        assert!(tangent_eigenvalue(&m, &[int(0), int(0)]).is_err());
    }

    #[test]
    fn graph_form_examples() {
        let gf = graph_form(&germ(16, &[&[0, 1], &[0, 0, 1]])).unwrap();
        assert_eq!((gf.exponents.clone(), gf.leading.clone()), (vec![2], vec![int(1)]));
        assert_eq!(gf.series[0], Series::from_slice(16, &[int(0), int(0), int(1)]));
        let gf = graph_form(&germ(16, &[&[0, 1], &[0, 0, 0, 1, 0, 1]])).unwrap();
        assert_eq!((gf.exponents, gf.leading), (vec![3], vec![int(1)]));
    }

    #[test]
    fn graph_form_reparametrizes() {
        // x₁ = t + t², x₂ = t²: x₂ as a series in x₁ is r(x)² with r the reversion
        let gf = graph_form(&germ(8, &[&[0, 1, 1], &[0, 0, 1]])).unwrap();
        let r = Series::from_slice(8, &[int(0), int(1), int(1)]).reverse().unwrap();
        assert_eq!(gf.series[0], r.multiply(&r).unwrap());
        assert_eq!(gf.exponents, vec![2]);
    }

    #[test]
    fn graph_form_separates_repeated_exponents() {
        let gf = graph_form(&germ(16, &[&[0, 1], &[0, 0, 1], &[0, 0, 1, 1]])).unwrap();
        assert_eq!(gf.exponents, vec![2, 3]);
        assert_eq!(gf.series[1], Series::from_slice(16, &[int(0), int(0), int(0), int(1)]));
        assert_eq!(gf.reduction[(2, 1)], int(-1));
    }

    #[test]
    fn graph_form_errors() {
        assert!(matches!(
            graph_form(&germ(16, &[&[0, 1], &[0]])),
            Err(Error::HyperplaneDegenerate { coordinate: 2, .. })
        ));
        // (t, t², t² + t²) collapses after elimination
        assert!(matches!(
            graph_form(&germ(16, &[&[0, 1], &[0, 0, 1], &[0, 0, 2]])),
            Err(Error::HyperplaneDegenerate { .. })
        ));
        let mut high = vec![0; 16];
        high[15] = 1;
        assert!(matches!(
            graph_form(&germ(16, &[&[0, 1], &high])),
            Err(Error::InsufficientOrder { exponent: 15, .. })
        ));
        assert!(graph_form(&germ(16, &[&[0, 2], &[0, 0, 1]])).is_err());
        assert!(graph_form(&germ(16, &[&[1, 1], &[0, 0, 1]])).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let gf = graph_form(&germ(16, &[&[0, 1], &[0, 0, 1]])).unwrap();
        let r = check_conjugation(&gf, &[frac(1, 2), frac(1, 4)]).unwrap();
        assert!(r.passed());
        assert_eq!(r.coordinates[0].predicted_lambda, frac(1, 4));

        let gf = graph_form(&germ(16, &[&[0, 1], &[0, 0, 0, 1]])).unwrap();
        assert!(check_conjugation(&gf, &[frac(1, 2), frac(1, 8)]).unwrap().passed());

        let gf = graph_form(&germ(16, &[&[0, 1], &[0, 0, 1, 1]])).unwrap();
        let r = check_conjugation(&gf, &[frac(1, 2), frac(1, 4)]).unwrap();
        assert!(!r.passed());
        let mm = r.first_mismatch().unwrap();
        assert_eq!((mm.coordinate, mm.degree), (2, 3));
        assert_eq!((mm.lhs.clone(), mm.rhs.clone()), (frac(1, 8), frac(1, 4)));
        assert!(!r.coordinates[0].monomial);
    }

    #[test]
    fn conjugation_rejects_zero_lambda() {
        let gf = graph_form(&germ(16, &[&[0, 1], &[0, 0, 1]])).unwrap();
        assert!(check_conjugation(&gf, &[int(0), int(0)]).is_err());
        assert!(check_conjugation(&gf, &[int(1)]).is_err());
    }

    #[test]
    fn recenter_examples() {
        let r = solve_recenter(&[1, 2], &int(1)).unwrap();
        assert_eq!(r.admissible_degrees, vec![1]);
        match r.outcome {
            RecenterOutcome::Feasible { matrix, .. } => {
                assert_eq!(matrix.row(1), &[int(-2), int(1)]);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
        let r = solve_recenter(&[1, 3], &int(1)).unwrap();
        assert_eq!(
            r.outcome,
            RecenterOutcome::Infeasible {
                row: 2,
                exponent: 3,
                missing_degree: 2
            }
        );
        assert!(solve_recenter(&[1, 2, 3], &frac(1, 2)).unwrap().outcome.is_feasible());
        assert!(solve_recenter(&[1, 2], &int(0)).is_err());
        assert!(solve_recenter(&[1, 3, 2], &int(1)).is_err());
        assert!(solve_recenter(&[2, 3], &int(1)).is_err());
    }

    #[test]
    fn degree_filter() {
        assert_eq!(admissible_degrees(&[1, 2, 4]), vec![1]);
        assert_eq!(admissible_degrees(&[1, 4, 6, 12]), vec![1]);
    }

    fn canonical() -> CurveGerm {
        CurveGerm {
            t0: int(0),
            series: germ(16, &[&[0, 1], &[0, 0, 1], &[0, 0, 0, 1]]),
        }
    }

    #[test]
    fn classify_moment() {
        let m = Matrix::diagonal(&[frac(1, 2), frac(1, 4), frac(1, 8)]);
        let c = classify_curve(&canonical(), &m, &Matrix::identity(3), &frac(1, 4)).unwrap();
        assert_eq!(c.verdict, Verdict::MomentImage { profile: vec![1, 2, 3] });
        assert_eq!(c.verdict.label(), "affine image of moment curve");
        assert_eq!(c.lambda, frac(1, 2));
    }

    #[test]
    fn classify_gap() {
        let g = CurveGerm {
            t0: int(0),
            series: germ(16, &[&[0, 1], &[0, 0, 0, 1]]),
        };
        let m = Matrix::diagonal(&[frac(1, 2), frac(1, 8)]);
        let c = classify_curve(&g, &m, &Matrix::identity(2), &frac(1, 4)).unwrap();
        assert_eq!(
            c.verdict,
            Verdict::ExponentGap {
                profile: vec![1, 3],
                row: 2,
                missing_degree: 2
            }
        );
    }

    #[test]
    fn classify_jordan_block_fails() {
        let g = CurveGerm {
            t0: int(0),
            series: germ(16, &[&[0, 1], &[0, 0, 1]]),
        };
        let m = mat(&[&[frac(1, 2), int(1)], &[int(0), frac(1, 2)]]);
        let c = classify_curve(&g, &m, &Matrix::identity(2), &int(1)).unwrap();
        assert!(matches!(c.verdict, Verdict::ConjugationFails { .. }));
    }

    #[test]
    fn classify_hyperplane() {
        let g = CurveGerm {
            t0: int(0),
            series: germ(16, &[&[0, 1], &[0]]),
        };
        let m = Matrix::diagonal(&[frac(1, 2), frac(1, 4)]);
        let c = classify_curve(&g, &m, &Matrix::identity(2), &int(1)).unwrap();
        assert_eq!(c.verdict, Verdict::HyperplaneDegenerate { coordinate: 2 });
    }

    #[test]
    fn classify_preconditions() {
        let m = Matrix::diagonal(&[frac(1, 2), frac(1, 4), frac(1, 8)]);
        let id = Matrix::identity(3);
        assert!(classify_curve(&canonical(), &m, &id, &int(0)).is_err());
        let expanding = Matrix::diagonal(&[int(2), int(4), int(8)]);
        assert!(classify_curve(&canonical(), &expanding, &id, &int(1)).is_err());
        let skew = mat(&[
            &[frac(1, 2), int(0), int(0)],
            &[int(1), frac(1, 4), int(0)],
            &[int(0), int(0), frac(1, 8)],
        ]);
        assert!(classify_curve(&canonical(), &skew, &id, &int(1)).is_err());
    }
}
