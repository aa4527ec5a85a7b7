//! Exact rationals, Farey/Stern–Brocot navigation, and standard continued
//! fractions — the arithmetic substrate for every other module.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, ToPrimitive, Zero};

use crate::{domain_err, Error, Result};

/// Arbitrary-precision exact rational. `num`'s `BigRational` keeps the
/// invariants we need (reduced form, positive denominator) after every
/// operation, so equality and hashing are structural.
pub type Rational = BigRational;

/// Small-constant rational, `rat(2, 3)` = 2/3. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"`; no whitespace, no locale surprises.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(s.to_string());
    let mut parts = s.splitn(2, '/');
    let num: BigInt = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let den: BigInt = match parts.next() {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Format as `"p/q"`, omitting `/q` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// A reduced fraction m/n with 0 ≤ m ≤ n — the slope of a primitive conormal
/// (m,n) lying between (0,1) and (1,1), i.e. a node of the Stern–Brocot tree
/// restricted to [0,1].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction01 {
    m: u64,
    n: u64,
}

impl Fraction01 {
    /// Build m/n, requiring 0 ≤ m ≤ n, n > 0, gcd(m,n) = 1.
    pub fn new(m: u64, n: u64) -> Result<Self> {
        if n == 0 || m > n {
            return domain_err(format!("{m}/{n} is not a fraction in [0,1]"));
        }
        if gcd_u64(m, n) != 1 {
            return Err(Error::NotCoprime(m, n));
        }
        Ok(Fraction01 { m, n })
    }

    pub fn zero() -> Self {
        Fraction01 { m: 0, n: 1 }
    }

    pub fn one() -> Self {
        Fraction01 { m: 1, n: 1 }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// True for the tree roots 0/1 and 1/1, which have no parents.
    pub fn is_endpoint(&self) -> bool {
        self.m == 0 || self.m == self.n
    }

    pub fn value(&self) -> Rational {
        BigRational::new(BigInt::from(self.m), BigInt::from(self.n))
    }

    fn cross(a: &Fraction01, b: &Fraction01) -> i128 {
        a.m as i128 * b.n as i128 - b.m as i128 * a.n as i128
    }
}

impl PartialOrd for Fraction01 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction01 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // compare m/n vs m'/n' by cross-multiplication, exactly
        Fraction01::cross(self, other).cmp(&0)
    }
}

impl fmt::Display for Fraction01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

impl fmt::Debug for Fraction01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

/// Are a = p/q and b = p'/q' Farey neighbors, |pq' − p'q| = 1?
pub fn is_adjacent(a: Fraction01, b: Fraction01) -> bool {
    Fraction01::cross(&a, &b).abs() == 1
}

/// Mediant (p+p')/(q+q') of two Farey-adjacent fractions. The result is
/// adjacent to both inputs and is the unique fraction with smallest
/// denominator strictly between them.
///
/// # Examples
/// ```
/// use ellipack::rational::{mediant, Fraction01};
/// let f = |m, n| Fraction01::new(m, n).unwrap();
/// assert_eq!(mediant(f(0, 1), f(1, 1)).unwrap(), f(1, 2));
/// assert_eq!(mediant(f(3, 5), f(7, 12)).unwrap(), f(10, 17));
/// ```
pub fn mediant(a: Fraction01, b: Fraction01) -> Result<Fraction01> {
    if !is_adjacent(a, b) {
        return Err(Error::NotAdjacent(a.to_string(), b.to_string()));
    }
    let med = Fraction01 {
        m: a.m + b.m,
        n: a.n + b.n,
    };
    debug_assert!(is_adjacent(a, med) && is_adjacent(med, b));
    Ok(med)
}

/// The two Farey neighbors whose mediant is `f`, ordered by denominator
/// ascending (ties — only 1/2 — broken by numerator). Computed from the
/// continued-fraction convergents of f, so (1,k)-style inputs with huge
/// denominators take O(log n) instead of a mediant-by-mediant walk.
///
/// # Examples
/// ```
/// use ellipack::rational::{farey_parents, Fraction01};
/// let f = |m, n| Fraction01::new(m, n).unwrap();
/// assert_eq!(farey_parents(f(10, 17)).unwrap(), (f(3, 5), f(7, 12)));
/// assert_eq!(farey_parents(f(1, 2)).unwrap(), (f(0, 1), f(1, 1)));
/// ```
pub fn farey_parents(f: Fraction01) -> Result<(Fraction01, Fraction01)> {
    if f.is_endpoint() {
        return Err(Error::NoParents(f.to_string()));
    }
    // convergents h_i/k_i of m/n; the final two determine the parents:
    // prev = h_{r-1}/k_{r-1} and (m - h_{r-1})/(n - k_{r-1}).
    let (mut num, mut den) = (f.m, f.n);
    let (mut h_prev, mut k_prev) = (1u64, 0u64); // h_{-1}/k_{-1}
    let (mut h, mut k) = (0u64, 1u64); // h_{-2}/k_{-2}, rotated in below
    loop {
        let q = num / den;
        let r = num % den;
        // h_i = q·h_{i-1} + h_{i-2}: here (h_prev, h) play (i-1, i-2)
        let (h_next, k_next) = (q * h_prev + h, q * k_prev + k);
        (h, k, h_prev, k_prev) = (h_prev, k_prev, h_next, k_next);
        if r == 0 {
            break;
        }
        (num, den) = (den, r);
    }
    debug_assert_eq!((h_prev, k_prev), (f.m, f.n));
    let a = Fraction01 { m: h, n: k };
    let b = Fraction01 {
        m: f.m - h,
        n: f.n - k,
    };
    debug_assert!(is_adjacent(a, b));
    let ordered = if (a.n, a.m) <= (b.n, b.m) { (a, b) } else { (b, a) };
    Ok(ordered)
}

/// One step of the Stern–Brocot descent: the bracketing interval and the
/// mediant it produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DescentStep {
    pub lo: Fraction01,
    pub hi: Fraction01,
    pub child: Fraction01,
}

/// The Stern–Brocot path from the interval (0/1, 1/1) down to `f`: each step
/// replaces one endpoint by the mediant, and the final step's child is `f`
/// itself. Requires 0 < m < n.
///
/// The i-th step (0-based) creates the conormal that the blow-up chain labels
/// with index i+2; the descent is what both the weight recursion and the
/// toric chain construction walk.
pub fn stern_brocot_descent(f: Fraction01) -> Result<Vec<DescentStep>> {
    if f.is_endpoint() {
        return domain_err(format!("{f} admits no descent (needs 0 < m < n)"));
    }
    let mut lo = Fraction01::zero();
    let mut hi = Fraction01::one();
    let mut steps = Vec::new();
    loop {
        let child = mediant(lo, hi).expect("descent endpoints stay adjacent");
        steps.push(DescentStep { lo, hi, child });
        if child == f {
            return Ok(steps);
        }
        if f < child {
            hi = child;
        } else {
            lo = child;
        }
    }
}

/// Standard (`+`-sign) continued fraction [a₁, a₂, …] of a rational ≥ 1:
/// a₁ + 1/(a₂ + 1/(…)). Terms are positive; the expansion is the canonical
/// (Euclidean) one, whose last term is ≥ 2 except for the input 1 → [1].
///
/// # Examples
/// ```
/// use ellipack::rational::{continued_fraction, rat};
/// assert_eq!(continued_fraction(&rat(5, 3)).unwrap(), vec![1, 1, 2]);
/// assert_eq!(continued_fraction(&rat(7, 1)).unwrap(), vec![7]);
/// ```
pub fn continued_fraction(x: &Rational) -> Result<Vec<u64>> {
    if x < &int(1) {
        return domain_err(format!(
            "continued fraction requires input >= 1, got {}",
            format_rational(x)
        ));
    }
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut terms = Vec::new();
    loop {
        let (q, r) = num.div_rem(&den);
        let term = q
            .to_u64()
            .ok_or_else(|| Error::Domain("continued-fraction term exceeds u64".into()))?;
        terms.push(term);
        if r.is_zero() {
            return Ok(terms);
        }
        (num, den) = (den, r);
    }
}

/// Evaluate a continued fraction back to a rational (test oracle for the
/// round-trip property).
pub fn evaluate_continued_fraction(terms: &[u64]) -> Rational {
    let mut acc: Option<Rational> = None;
    for &t in terms.iter().rev() {
        let t = BigRational::from_integer(BigInt::from(t));
        acc = Some(match acc {
            None => t,
            Some(tail) => t + tail.recip(),
        });
    }
    acc.expect("nonempty continued fraction")
}
