//! Embedding decisions for four-dimensional ellipsoids, by reduction to
//! ball packing in the blown-up projective plane.
//!
//! The question "does lambda E(m,n) embed in the open E(m',n')?" becomes
//! "does the class n'L - sum_i k_i E_i - lambda sum_j khat_j E_j lie in
//! the symplectic cone?", with the k_i the complement labels of the
//! target and the khat_j the weight expansion of the source.

use std::fmt;

use num::{BigInt, Signed, ToPrimitive, Zero};

use crate::cone::{self, ConeOptions, Verdict};
use crate::hclass::HClass;
use crate::rational::{format_rational, int, Rational};
use crate::weights::{inner_vector, outer_weights};
use crate::{domain_err, Result};

/// A scaled embedding problem: does lambda E(source) embed in the open
/// ellipsoid over target?  Arbitrary positive rational parameters are
/// normalized to coprime integer pairs; the scale factors fold into the
/// effective lambda.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipsoidPair {
    source: (u64, u64),
    target: (u64, u64),
    lambda: Rational,
}

impl EllipsoidPair {
    /// Build a problem from rational ellipsoid parameters.  E(3/2, 1)
    /// normalizes to (1/2) E(2, 3), and the 1/2 folds into lambda.
    pub fn new(
        source: (Rational, Rational),
        target: (Rational, Rational),
        lambda: Rational,
    ) -> Result<Self> {
        if !lambda.is_positive() {
            return domain_err(format!(
                "scale factor must be positive, got {}",
                format_rational(&lambda)
            ));
        }
        let (src, s_scale) = normalize_axes(&source.0, &source.1)?;
        let (tgt, t_scale) = normalize_axes(&target.0, &target.1)?;
        Ok(EllipsoidPair {
            source: src,
            target: tgt,
            lambda: lambda * s_scale / t_scale,
        })
    }

    /// Coprime normalized source parameters, smaller first.
    pub fn source(&self) -> (u64, u64) {
        self.source
    }

    /// Coprime normalized target parameters, smaller first.
    pub fn target(&self) -> (u64, u64) {
        self.target
    }

    /// Effective scale after normalization.
    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }
}

/// Write E(a, b) as s * E(m, n) with (m, n) coprime integers, m <= n.
fn normalize_axes(a: &Rational, b: &Rational) -> Result<((u64, u64), Rational)> {
    if !a.is_positive() || !b.is_positive() {
        return domain_err(format!(
            "ellipsoid parameters must be positive, got ({}, {})",
            format_rational(a),
            format_rational(b)
        ));
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let ratio = lo / hi;
    let (m, n) = match (ratio.numer().to_u64(), ratio.denom().to_u64()) {
        (Some(m), Some(n)) => (m, n),
        _ => return domain_err("ellipsoid parameters too large to normalize"),
    };
    let scale = lo / int(to_i64(m)?);
    Ok(((m, n), scale))
}

fn to_i64(v: u64) -> Result<i64> {
    i64::try_from(v).map_err(|_| crate::Error::Domain(format!("value {v} too large")))
}

/// The ball packing equivalent to an ellipsoid embedding: k ball weights
/// inside the unit ball, and the class whose cone membership decides it.
#[derive(Debug, Clone)]
pub struct PackingProblem {
    /// Number of balls: complement count of the target plus weight count
    /// of the source.
    pub k: usize,
    /// Ball sizes relative to the unit ball: target complement labels
    /// over n', then lambda times the source weights over n'.
    pub weights: Vec<Rational>,
    /// Scaled packing class (n'; k_1..k_N, lambda khat_1..khat_Nhat),
    /// equal to n' (L - sum w_i E_i).
    pub ambient: HClass,
    /// How many leading weights come from the target complement.
    pub inner_count: usize,
}

/// Reduce an embedding problem to its equivalent ball packing.
///
/// # Examples
/// ```
/// use ellipack::engine::{reduce_to_packing, EllipsoidPair};
/// use ellipack::rational::int;
/// let pair = EllipsoidPair::new((int(1), int(4)), (int(2), int(3)), int(1)).unwrap();
/// let p = reduce_to_packing(&pair).unwrap();
/// assert_eq!((p.k, p.inner_count), (7, 3));
/// ```
pub fn reduce_to_packing(pair: &EllipsoidPair) -> Result<PackingProblem> {
    let inner = inner_vector(pair.target.0, pair.target.1)?;
    let outer = outer_weights(pair.source.0, pair.source.1)?;
    let n_t = int(to_i64(pair.target.1)?);
    let mut mults = Vec::with_capacity(inner.count() + outer.count());
    for &k in inner.labels() {
        mults.push(int(to_i64(k)?));
    }
    for &kh in outer.labels() {
        mults.push(&pair.lambda * int(to_i64(kh)?));
    }
    let weights = mults.iter().map(|m| m / &n_t).collect();
    let k = mults.len();
    let ambient = HClass::new(n_t, mults);
    Ok(PackingProblem {
        k,
        weights,
        ambient,
        inner_count: inner.count(),
    })
}

/// Decide the embedding by testing the packing class against the cone.
/// Open-target semantics are strict: a boundary class is a no.
pub fn decide(pair: &EllipsoidPair, opts: &ConeOptions) -> Result<Verdict> {
    let p = reduce_to_packing(pair)?;
    cone::in_cone(&p.ambient, opts)
}

/// A positive scalar known exactly: a rational, or the square root of a
/// rational with no rational root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactValue {
    Rational(Rational),
    /// The value sqrt(r); [`ExactValue::sqrt`] never builds this from a
    /// perfect square.
    Sqrt(Rational),
}

impl ExactValue {
    /// Square root of a nonnegative rational, collapsed to `Rational`
    /// when the root is exact.
    pub fn sqrt(r: Rational) -> ExactValue {
        assert!(!r.is_negative(), "square root of a negative rational");
        match rational_sqrt(&r) {
            Some(root) => ExactValue::Rational(root),
            None => ExactValue::Sqrt(r),
        }
    }

    pub fn square(&self) -> Rational {
        match self {
            ExactValue::Rational(v) => v * v,
            ExactValue::Sqrt(r) => r.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactValue::Rational(v) => Some(v),
            ExactValue::Sqrt(_) => None,
        }
    }

    /// 1/value, or None for zero.
    fn recip(&self) -> Option<ExactValue> {
        match self {
            ExactValue::Rational(v) if v.is_zero() => None,
            ExactValue::Rational(v) => Some(ExactValue::Rational(v.recip())),
            ExactValue::Sqrt(r) => Some(ExactValue::sqrt(r.recip())),
        }
    }
}

// values are nonnegative, so squares order the same way
impl Ord for ExactValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.square().cmp(&other.square())
    }
}

impl PartialOrd for ExactValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactValue::Rational(v) => write!(f, "{}", format_rational(v)),
            ExactValue::Sqrt(r) => write!(f, "sqrt({})", format_rational(r)),
        }
    }
}

/// The exact rational square root of r >= 0, if it has one.
pub(crate) fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    (&ns * &ns == *r.numer() && &ds * &ds == *r.denom()).then(|| Rational::new(ns, ds))
}

/// Supremum of feasible scales for an embedding problem.
#[derive(Debug, Clone)]
pub enum LambdaSup {
    /// Known exactly.  `binding` is a class whose constraint attains the
    /// supremum; None means the volume bound binds.
    Exact {
        value: ExactValue,
        binding: Option<HClass>,
    },
    /// Rank >= 9 bracket: feasible below `lower` up to the degree
    /// qualification, certified infeasible at and above `upper`.
    Bracket {
        lower: ExactValue,
        upper: ExactValue,
        degree_bound: u32,
    },
}

impl LambdaSup {
    /// The exact value, when one is known.
    pub fn exact(&self) -> Option<&ExactValue> {
        match self {
            LambdaSup::Exact { value, .. } => Some(value),
            LambdaSup::Bracket { .. } => None,
        }
    }

    /// Certified upper end (the value itself when exact).
    pub fn upper(&self) -> &ExactValue {
        match self {
            LambdaSup::Exact { value, .. } => value,
            LambdaSup::Bracket { upper, .. } => upper,
        }
    }
}

impl fmt::Display for LambdaSup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSup::Exact { value, .. } => write!(f, "{value}"),
            LambdaSup::Bracket {
                lower,
                upper,
                degree_bound,
            } => write!(f, "[{lower}, {upper}] (classes up to degree {degree_bound})"),
        }
    }
}

/// Result of scanning the per-class linear thresholds.
struct ThresholdScan {
    /// Smallest threshold and an arrangement attaining it.
    min: Option<(Rational, HClass)>,
    /// An arrangement whose constraint fails at every positive scale.
    dead: Option<HClass>,
}

/// Minimize A_E / |B_E| over every slot arrangement of every canonical
/// form, where <a(lambda), E> = A - lambda |B|.  With the multiset split
/// of form entries between target and source slots fixed, A is minimized
/// and |B| maximized independently by pairing sorted sequences, so one
/// pass over the splits finds the exact orbit minimum without expanding
/// permutations.
fn scan_thresholds(
    n_t: u64,
    inner: &[u64],
    outer: &[u64],
    forms: &[(i64, Vec<i64>)],
) -> ThresholdScan {
    let mut inner_desc: Vec<i128> = inner.iter().map(|&v| v as i128).collect();
    inner_desc.sort_unstable_by(|a, b| b.cmp(a));
    let mut outer_desc: Vec<i128> = outer.iter().map(|&v| v as i128).collect();
    outer_desc.sort_unstable_by(|a, b| b.cmp(a));
    let n = inner.len();
    let mut scan = ThresholdScan {
        min: None,
        dead: None,
    };
    for (d, entries) in forms {
        // runs of equal entries, descending
        let mut runs: Vec<(i128, usize)> = Vec::new();
        for &e in entries {
            match runs.last_mut() {
                Some((v, c)) if *v == e as i128 => *c += 1,
                _ => runs.push((e as i128, 1)),
            }
        }
        for counts in split_counts(&runs, n) {
            let mut in_e: Vec<i128> = Vec::with_capacity(n);
            let mut out_e: Vec<i128> = Vec::with_capacity(entries.len() - n);
            for (ri, &(v, c)) in runs.iter().enumerate() {
                in_e.extend(std::iter::repeat(v).take(counts[ri]));
                out_e.extend(std::iter::repeat(v).take(c - counts[ri]));
            }
            // runs descend, so both sides come out sorted descending
            let dot_in: i128 = in_e.iter().zip(&inner_desc).map(|(a, b)| a * b).sum();
            let dot_out: i128 = out_e.iter().zip(&outer_desc).map(|(a, b)| a * b).sum();
            let a_min = (n_t as i128) * (*d as i128) - dot_in;
            // the lambda = 0 configuration sits in the cone closure, so no
            // arrangement can pair strictly negatively with it
            debug_assert!(a_min >= 0, "negative constant term for form {d};{entries:?}");
            if a_min <= 0 && dot_out >= 0 {
                scan.dead = Some(arrangement_class(*d, inner, outer, &in_e, &out_e));
                return scan;
            }
            if dot_out > 0 {
                let thr = Rational::new(BigInt::from(a_min), BigInt::from(dot_out));
                if scan.min.as_ref().map_or(true, |(best, _)| thr < *best) {
                    let class = arrangement_class(*d, inner, outer, &in_e, &out_e);
                    scan.min = Some((thr, class));
                }
            }
        }
    }
    scan
}

/// Ways to draw `need` entries from the runs, as a count per run.
fn split_counts(runs: &[(i128, usize)], need: usize) -> Vec<Vec<usize>> {
    fn rec(
        runs: &[(i128, usize)],
        idx: usize,
        need: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if idx == runs.len() {
            if need == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for take in 0..=runs[idx].1.min(need) {
            cur[idx] = take;
            rec(runs, idx + 1, need - take, cur, out);
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; runs.len()];
    rec(runs, 0, need, &mut cur, &mut out);
    out
}

/// The class realizing a split: slots sorted by label descending receive
/// the side's entries in descending order.
fn arrangement_class(
    d: i64,
    inner: &[u64],
    outer: &[u64],
    in_e: &[i128],
    out_e: &[i128],
) -> HClass {
    let mut m = vec![0i64; inner.len() + outer.len()];
    let mut islots: Vec<usize> = (0..inner.len()).collect();
    islots.sort_by(|&i, &j| inner[j].cmp(&inner[i]));
    for (rank, &slot) in islots.iter().enumerate() {
        m[slot] = in_e[rank] as i64;
    }
    let mut oslots: Vec<usize> = (0..outer.len()).collect();
    oslots.sort_by(|&i, &j| outer[j].cmp(&outer[i]));
    for (rank, &slot) in oslots.iter().enumerate() {
        m[inner.len() + slot] = out_e[rank] as i64;
    }
    HClass::from_i64(d, &m)
}

/// Supremum of scales lambda with lambda E(source) embeddable in the open
/// ellipsoid over target: the minimum of the volume root
/// sqrt(m'n'/(mn)) and the per-class linear thresholds.  Exact at
/// combined rank <= 8.  At rank >= 9 the enumerated thresholds certify
/// the upper end and bisection with [`decide`] pushes up the lower,
/// reported as a bracket qualified by the degree bound.
///
/// # Examples
/// ```
/// use ellipack::cone::ConeOptions;
/// use ellipack::engine::{lambda_sup, ExactValue};
/// use ellipack::rational::rat;
/// let s = lambda_sup((1, 4), (2, 3), &ConeOptions::default()).unwrap();
/// assert_eq!(s.exact().unwrap(), &ExactValue::Rational(rat(6, 5)));
/// ```
pub fn lambda_sup(source: (u64, u64), target: (u64, u64), opts: &ConeOptions) -> Result<LambdaSup> {
    let source = (source.0.min(source.1), source.0.max(source.1));
    let target = (target.0.min(target.1), target.0.max(target.1));
    let inner = inner_vector(target.0, target.1)?;
    let outer = outer_weights(source.0, source.1)?;
    let k = inner.count() + outer.count();
    let forms = cone::canonical_exceptional(k, opts.degree_bound, opts.cache_dir.as_deref())?;
    let scan = scan_thresholds(target.1, inner.labels(), outer.labels(), &forms);
    if let Some(class) = scan.dead {
        // a constraint independent of lambda already fails: the target
        // complement fills with zero slack in this direction, and the
        // open-target semantics admit no scale at all
        return Ok(LambdaSup::Exact {
            value: ExactValue::Rational(Rational::zero()),
            binding: Some(class),
        });
    }
    let vol_sq = Rational::new(
        BigInt::from(target.0) * BigInt::from(target.1),
        BigInt::from(source.0) * BigInt::from(source.1),
    );
    let class_bound = scan
        .min
        .filter(|(thr, _)| thr * thr <= vol_sq);
    if k <= cone::MAX_FINITE_RANK {
        return Ok(match class_bound {
            Some((thr, class)) => LambdaSup::Exact {
                value: ExactValue::Rational(thr),
                binding: Some(class),
            },
            None => LambdaSup::Exact {
                value: ExactValue::sqrt(vol_sq),
                binding: None,
            },
        });
    }
    // rank >= 9: bracket the supremum
    let mut upper = match class_bound {
        Some((thr, _)) => ExactValue::Rational(thr),
        None => ExactValue::sqrt(vol_sq),
    };
    let mut hi = match &upper {
        ExactValue::Rational(v) => v.clone(),
        ExactValue::Sqrt(r) => rational_above_sqrt(r),
    };
    let tol = &hi / int(1024);
    let mut lo = Rational::zero();
    for _ in 0..96 {
        if !lo.is_zero() && &hi - &lo <= tol {
            break;
        }
        let mid = (&lo + &hi) / int(2);
        let probe = EllipsoidPair {
            source,
            target,
            lambda: mid.clone(),
        };
        if decide(&probe, opts)?.is_feasible() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let hi_val = ExactValue::Rational(hi);
    if hi_val < upper {
        upper = hi_val;
    }
    Ok(LambdaSup::Bracket {
        lower: ExactValue::Rational(lo),
        upper,
        degree_bound: opts.degree_bound,
    })
}

/// A rational strictly above sqrt(r): for r = p/q, the ceiling of
/// sqrt(pq) over q.  Only called when r is not a perfect square.
fn rational_above_sqrt(r: &Rational) -> Rational {
    let f = (r.numer() * r.denom()).sqrt();
    Rational::new(f + 1, r.denom().clone())
}

/// Fraction of the unit ball fillable by k equal balls: k lambda^2 at
/// the supremum scale for k copies.  Nine or more equal balls fill
/// completely; below that the constraints are rational and finite.
///
/// # Examples
/// ```
/// use ellipack::engine::packing_constant;
/// use ellipack::rational::rat;
/// assert_eq!(packing_constant(5), rat(4, 5));
/// assert_eq!(packing_constant(9), rat(1, 1));
/// ```
pub fn packing_constant(k: u64) -> Rational {
    assert!(k >= 1, "need at least one ball");
    if k > cone::MAX_FINITE_RANK as u64 {
        return int(1);
    }
    let sup = lambda_sup((1, k), (1, 1), &ConeOptions::default()).expect("coprime pair");
    match sup {
        LambdaSup::Exact {
            value: ExactValue::Rational(v),
            ..
        } => &v * &v * int(k as i64),
        _ => unreachable!("rank <= 8 supremum is rational"),
    }
}

/// The packing numbers v(k) for k = 1..8.
pub fn fill_table() -> Vec<(u64, Rational)> {
    (1..=cone::MAX_FINITE_RANK as u64)
        .map(|k| (k, packing_constant(k)))
        .collect()
}

/// Smallest ball capacity admitting E(m, n): the reciprocal of the
/// supremum scale into the open unit ball.
///
/// # Examples
/// ```
/// use ellipack::cone::ConeOptions;
/// use ellipack::engine::{ball_capacity, ExactValue};
/// use ellipack::rational::rat;
/// let c = ball_capacity(1, 5, &ConeOptions::default()).unwrap();
/// assert_eq!(c.exact().unwrap(), &ExactValue::Rational(rat(5, 2)));
/// ```
pub fn ball_capacity(m: u64, n: u64, opts: &ConeOptions) -> Result<LambdaSup> {
    match lambda_sup((m, n), (1, 1), opts)? {
        LambdaSup::Exact { value, binding } => match value.recip() {
            Some(value) => Ok(LambdaSup::Exact { value, binding }),
            None => domain_err("supremum scale is zero; no finite ball works"),
        },
        LambdaSup::Bracket {
            lower,
            upper,
            degree_bound,
        } => match (upper.recip(), lower.recip()) {
            (Some(lower), Some(upper)) => Ok(LambdaSup::Bracket {
                lower,
                upper,
                degree_bound,
            }),
            _ => domain_err("bisection did not certify a positive lower bound"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Certificate;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn pair(source: (u64, u64), target: (u64, u64), lambda: Rational) -> EllipsoidPair {
        EllipsoidPair::new(
            (int(source.0 as i64), int(source.1 as i64)),
            (int(target.0 as i64), int(target.1 as i64)),
            lambda,
        )
        .unwrap()
    }

    #[test]
    fn normalization_folds_scales_into_lambda() {
        let p = EllipsoidPair::new((rat(3, 2), int(1)), (int(3), int(2)), int(1)).unwrap();
        assert_eq!(p.source(), (2, 3));
        assert_eq!(p.target(), (2, 3));
        assert_eq!(p.lambda(), &rat(1, 2));

        // B(2) = 2 B(1)
        let p = pair((1, 4), (2, 2), int(1));
        assert_eq!(p.target(), (1, 1));
        assert_eq!(p.lambda(), &rat(1, 2));

        // common factors reduce away
        let p = pair((2, 8), (4, 6), int(1));
        assert_eq!(p.source(), (1, 4));
        assert_eq!(p.target(), (2, 3));
        assert_eq!(p.lambda(), &int(1));
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(EllipsoidPair::new((int(0), int(1)), (int(1), int(1)), int(1)).is_err());
        assert!(EllipsoidPair::new((int(1), int(-2)), (int(1), int(1)), int(1)).is_err());
        assert!(EllipsoidPair::new((int(1), int(1)), (int(1), int(1)), int(0)).is_err());
        assert!(EllipsoidPair::new((int(1), int(1)), (int(1), int(1)), int(-3)).is_err());
    }

    #[test]
    fn reduction_one_four_into_two_three() {
        let p = reduce_to_packing(&pair((1, 4), (2, 3), int(1))).unwrap();
        assert_eq!((p.k, p.inner_count), (7, 3));
        assert_eq!(p.weights, vec![rat(1, 3); 7]);
        assert_eq!(p.ambient, HClass::from_i64(3, &[1, 1, 1, 1, 1, 1, 1]));

        let p = reduce_to_packing(&pair((1, 4), (2, 3), rat(6, 5))).unwrap();
        assert_eq!(&p.weights[..3], &vec![rat(1, 3); 3][..]);
        assert_eq!(&p.weights[3..], &vec![rat(2, 5); 4][..]);
        // ambient = n' (L - sum w_i E_i)
        for (w, m) in p.weights.iter().zip(p.ambient.multiplicities()) {
            assert_eq!(&(w * int(3)), m);
        }
    }

    #[test]
    fn reduction_counts_and_ball_cases() {
        let p = reduce_to_packing(&pair((1, 5), (2, 3), int(1))).unwrap();
        assert_eq!((p.k, p.inner_count), (8, 3));

        // ball target: no complement balls, pure weight expansion
        let p = reduce_to_packing(&pair((1, 3), (1, 1), rat(1, 2))).unwrap();
        assert_eq!((p.k, p.inner_count), (3, 0));
        assert_eq!(p.weights, vec![rat(1, 2); 3]);
        assert_eq!(p.ambient.d(), &int(1));
    }

    #[test]
    fn sup_one_four_into_two_three() {
        let s = lambda_sup((1, 4), (2, 3), &ConeOptions::default()).unwrap();
        let LambdaSup::Exact { value, binding } = s else {
            panic!("rank 7 should be exact")
        };
        assert_eq!(value, ExactValue::Rational(rat(6, 5)));
        let b = binding.unwrap();
        assert_eq!(b.d(), &int(3));
        let mut sorted: Vec<Rational> = b.multiplicities().to_vec();
        sorted.sort_by(|a, b| b.cmp(a));
        assert_eq!(
            sorted,
            vec![int(2), int(1), int(1), int(1), int(1), int(1), int(1)]
        );
        // the doubled slot must be one of the source slots (index >= 3)
        let two = b.multiplicities().iter().position(|m| m == &int(2)).unwrap();
        assert!(two >= 3);
        // the binding constraint vanishes exactly at the supremum
        let at_sup = reduce_to_packing(&pair((1, 4), (2, 3), rat(6, 5))).unwrap();
        assert_eq!(at_sup.ambient.pair(&b).unwrap(), int(0));
    }

    #[test]
    fn sup_one_five_into_two_three() {
        let s = lambda_sup((1, 5), (2, 3), &ConeOptions::default()).unwrap();
        let LambdaSup::Exact { value, binding } = s else {
            panic!("rank 8 should be exact")
        };
        assert_eq!(value, ExactValue::Rational(rat(12, 11)));
        let b = binding.unwrap();
        assert_eq!(b.d(), &int(6));
        let mut sorted: Vec<Rational> = b.multiplicities().to_vec();
        sorted.sort_by(|a, b| b.cmp(a));
        assert_eq!(sorted[0], int(3));
        assert_eq!(&sorted[1..], &vec![int(2); 7][..]);
        let three = b.multiplicities().iter().position(|m| m == &int(3)).unwrap();
        assert!(three >= 3);
        let at_sup = reduce_to_packing(&pair((1, 5), (2, 3), rat(12, 11))).unwrap();
        assert_eq!(at_sup.ambient.pair(&b).unwrap(), int(0));
    }

    #[test]
    fn sup_ball_cases() {
        // unit ball into itself: volume only
        let s = lambda_sup((1, 1), (1, 1), &ConeOptions::default()).unwrap();
        let LambdaSup::Exact { value, binding } = s else {
            panic!()
        };
        assert_eq!(value, ExactValue::Rational(int(1)));
        assert!(binding.is_none());

        // two equal balls
        let s = lambda_sup((1, 2), (1, 1), &ConeOptions::default()).unwrap();
        let LambdaSup::Exact { value, binding } = s else {
            panic!()
        };
        assert_eq!(value, ExactValue::Rational(rat(1, 2)));
        assert_eq!(binding.unwrap().d(), &int(1));
    }

    #[test]
    fn sup_matches_decide_at_the_boundary() {
        let cases = [
            ((1, 4), (2, 3)),
            ((1, 5), (2, 3)),
            ((2, 3), (1, 1)),
            ((1, 5), (1, 1)),
            ((1, 7), (1, 1)),
            ((1, 8), (1, 1)),
        ];
        let opts = ConeOptions::default();
        for (src, tgt) in cases {
            let sup = lambda_sup(src, tgt, &opts).unwrap();
            let v = sup.exact().unwrap().as_rational().unwrap().clone();
            let at = decide(&pair(src, tgt, v.clone()), &opts).unwrap();
            assert!(!at.is_feasible(), "{src:?}->{tgt:?} at sup");
            let below = decide(&pair(src, tgt, v * rat(999, 1000)), &opts).unwrap();
            assert!(below.is_feasible(), "{src:?}->{tgt:?} below sup");
        }
    }

    #[test]
    fn sup_nine_balls_brackets_one_third() {
        let s = lambda_sup((1, 9), (1, 1), &ConeOptions::default()).unwrap();
        let LambdaSup::Bracket {
            lower,
            upper,
            degree_bound,
        } = s
        else {
            panic!("rank 9 should bracket")
        };
        // the volume root 1/3 is rational and no enumerated class cuts
        // below it, so the certified upper end is exactly 1/3
        assert_eq!(upper, ExactValue::Rational(rat(1, 3)));
        assert!(lower < upper);
        assert!(lower >= ExactValue::Rational(rat(33, 100)));
        assert_eq!(degree_bound, cone::DEFAULT_DEGREE_BOUND);
    }

    #[test]
    fn fill_table_frozen_values() {
        let expect = vec![
            (1, int(1)),
            (2, rat(1, 2)),
            (3, rat(3, 4)),
            (4, int(1)),
            (5, rat(4, 5)),
            (6, rat(24, 25)),
            (7, rat(63, 64)),
            (8, rat(288, 289)),
        ];
        assert_eq!(fill_table(), expect);
        assert_eq!(packing_constant(9), int(1));
        assert_eq!(packing_constant(12), int(1));
    }

    #[test]
    fn capacity_fixtures() {
        let opts = ConeOptions::default();
        let c = ball_capacity(1, 5, &opts).unwrap();
        let LambdaSup::Exact { value, binding } = c else {
            panic!()
        };
        assert_eq!(value, ExactValue::Rational(rat(5, 2)));
        assert_eq!(binding.unwrap().d(), &int(2));

        let c = ball_capacity(1, 4, &opts).unwrap();
        assert_eq!(c.exact().unwrap(), &ExactValue::Rational(int(2)));

        let c = ball_capacity(2, 3, &opts).unwrap();
        assert_eq!(c.exact().unwrap(), &ExactValue::Rational(int(3)));

        let c = ball_capacity(1, 1, &opts).unwrap();
        assert_eq!(c.exact().unwrap(), &ExactValue::Rational(int(1)));
    }

    #[test]
    fn degenerate_target_reports_zero_sup() {
        // the complement of E(1,2) in B(2) is two balls of size 1 that
        // fill with zero slack: under strict open-target semantics the
        // line constraint pairs to zero for every scale
        let s = lambda_sup((1, 1), (1, 2), &ConeOptions::default()).unwrap();
        let LambdaSup::Exact { value, binding } = s else {
            panic!()
        };
        assert_eq!(value, ExactValue::Rational(int(0)));
        let b = binding.unwrap();
        assert_eq!(b.d(), &int(1));
        assert_eq!(&b.multiplicities()[..2], &[int(1), int(1)][..]);

        let v = decide(&pair((1, 1), (1, 2), rat(1, 10)), &ConeOptions::default()).unwrap();
        match v.certificate() {
            Some(Certificate::Class { pairing, .. }) => assert_eq!(pairing, &int(0)),
            other => panic!("expected a zero-pairing class certificate, got {other:?}"),
        }
    }

    #[test]
    fn ball_fill_boundary_for_square_capacities() {
        // lambda E(1, d^2) against the open ball of capacity d: feasible
        // just below scale 1, volume-obstructed at scale 1
        let opts = ConeOptions::default();
        for d in 1u64..=3 {
            let at_one = decide(&pair((1, d * d), (d, d), int(1)), &opts).unwrap();
            match at_one.certificate() {
                Some(Certificate::Volume { self_int }) => assert_eq!(self_int, &int(0)),
                other => panic!("d={d}: expected volume certificate, got {other:?}"),
            }
            let below = decide(&pair((1, d * d), (d, d), rat(99, 100)), &opts).unwrap();
            assert!(below.is_feasible(), "d={d} just below the boundary");
        }
    }

    #[test]
    fn verdicts_are_scale_invariant() {
        let opts = ConeOptions::default();
        for lambda in [int(1), rat(6, 5), rat(9, 8)] {
            let a = decide(&pair((1, 4), (2, 3), lambda.clone()), &opts).unwrap();
            let b = decide(&pair((2, 8), (4, 6), lambda), &opts).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn exact_value_arithmetic() {
        assert_eq!(ExactValue::sqrt(rat(4, 9)), ExactValue::Rational(rat(2, 3)));
        assert_eq!(ExactValue::sqrt(rat(1, 2)), ExactValue::Sqrt(rat(1, 2)));
        assert!(ExactValue::Rational(rat(1, 2)) < ExactValue::Sqrt(rat(1, 3)));
        assert!(ExactValue::Sqrt(rat(1, 3)) < ExactValue::Rational(rat(3, 5)));
        assert_eq!(ExactValue::Sqrt(rat(1, 2)).to_string(), "sqrt(1/2)");
        assert_eq!(
            ExactValue::sqrt(rat(4, 9)).recip(),
            Some(ExactValue::Rational(rat(3, 2)))
        );
        assert_eq!(
            ExactValue::Sqrt(rat(2, 1)).recip(),
            Some(ExactValue::Sqrt(rat(1, 2)))
        );
    }

    // fixture problems with no zero-slack directions
    const FIXTURES: [((u64, u64), (u64, u64)); 4] =
        [((1, 4), (2, 3)), ((1, 5), (2, 3)), ((2, 3), (1, 1)), ((1, 3), (1, 1))];

    proptest! {
        #[test]
        fn feasibility_is_monotone_in_lambda(
            which in 0usize..4,
            a in 1i64..200,
            b in 1i64..200,
        ) {
            let (src, tgt) = FIXTURES[which];
            let (lo, hi) = (rat(a.min(b), 100), rat(a.max(b), 100));
            prop_assume!(lo < hi);
            let opts = ConeOptions::default();
            let at_hi = decide(&pair(src, tgt, hi), &opts).unwrap();
            if at_hi.is_feasible() {
                let at_lo = decide(&pair(src, tgt, lo), &opts).unwrap();
                prop_assert!(at_lo.is_feasible());
            }
        }

        #[test]
        fn feasible_exactly_below_sup(which in 0usize..4, num in 1i64..300) {
            let (src, tgt) = FIXTURES[which];
            let opts = ConeOptions::default();
            let sup = lambda_sup(src, tgt, &opts).unwrap();
            let sup = sup.exact().unwrap().as_rational().unwrap().clone();
            let lambda = rat(num, 200);
            let verdict = decide(&pair(src, tgt, lambda.clone()), &opts).unwrap();
            prop_assert_eq!(verdict.is_feasible(), lambda < sup);
        }

        #[test]
        fn feasibility_implies_volume(which in 0usize..4, num in 1i64..300) {
            let (src, tgt) = FIXTURES[which];
            let opts = ConeOptions::default();
            let lambda = rat(num, 200);
            if decide(&pair(src, tgt, lambda.clone()), &opts).unwrap().is_feasible() {
                let vol = &lambda * &lambda * int((src.0 * src.1) as i64);
                prop_assert!(vol < int((tgt.0 * tgt.1) as i64));
            }
        }
    }

    #[test]
    fn sup_ball_source_hits_the_width() {
        // a ball in the open E(2,3) is capped by the smaller axis, well
        // below the volume root sqrt(6)
        let s = lambda_sup((1, 1), (2, 3), &ConeOptions::default()).unwrap();
        let LambdaSup::Exact { value, binding } = s else { panic!() };
        assert_eq!(value, ExactValue::Rational(int(2)));
        assert_eq!(binding.unwrap().d(), &int(1));
        assert!(value < ExactValue::Sqrt(rat(6, 1)));
    }

    #[test]
    fn zero_slack_targets_cover_the_shallow_range() {
        // every target with 2m <= n leaves some line constraint with zero
        // slack, not just (1, n): the complement labels start n-m, m
        let s = lambda_sup((1, 2), (1, 3), &ConeOptions::default()).unwrap();
        let LambdaSup::Exact { value, .. } = s else { panic!() };
        assert_eq!(value, ExactValue::Rational(int(0)));
        let s = lambda_sup((1, 1), (2, 5), &ConeOptions::default()).unwrap();
        let LambdaSup::Exact { value, .. } = s else { panic!() };
        assert_eq!(value, ExactValue::Rational(int(0)));
    }

    #[test]
    fn sup_ten_balls_has_irrational_volume_upper() {
        // ten equal balls fill completely, so the supremum is the
        // irrational volume root 1/sqrt(10); the bracket keeps the exact
        // square root as its certified upper end
        let s = lambda_sup((1, 10), (1, 1), &ConeOptions::default()).unwrap();
        let LambdaSup::Bracket { lower, upper, .. } = s else {
            panic!("rank 10 should bracket")
        };
        assert_eq!(upper, ExactValue::Sqrt(rat(1, 10)));
        assert!(lower < upper);
        assert!(lower >= ExactValue::Rational(rat(31, 100)));
    }
}
