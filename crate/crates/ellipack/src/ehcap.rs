//! Capacity sequences of ellipsoids: the nondecreasing merge of the
//! positive multiples of the two parameters, termwise domination, and a
//! side-by-side obstruction report showing where the cone test sees more
//! than volume and capacities do.

use std::fmt;

use num::{BigInt, Signed};

use crate::cone::{Certificate, ConeOptions, Verdict};
use crate::engine::{decide, lambda_sup, EllipsoidPair, ExactValue, LambdaSup};
use crate::hclass::HClass;
use crate::rational::{format_rational, gcd_u64, int, Rational};
use crate::{domain_err, Result};

/// Lazy nondecreasing merge of {km : k >= 1} and {ln : l >= 1}; common
/// multiples appear twice.
#[derive(Debug, Clone)]
pub struct EHSequence {
    m: u64,
    n: u64,
    next_m: u64,
    next_n: u64,
}

impl EHSequence {
    pub fn new(m: u64, n: u64) -> Result<EHSequence> {
        if m == 0 || n == 0 {
            return domain_err(format!("capacity sequence needs positive entries, got ({m}, {n})"));
        }
        Ok(EHSequence {
            m,
            n,
            next_m: m,
            next_n: n,
        })
    }

    pub fn pair(&self) -> (u64, u64) {
        (self.m, self.n)
    }
}

impl Iterator for EHSequence {
    type Item = u64;

    // on a tie the m-multiple goes first and the n-multiple follows on
    // the next call, so common multiples come out doubled
    fn next(&mut self) -> Option<u64> {
        if self.next_m <= self.next_n {
            let v = self.next_m;
            self.next_m += self.m;
            Some(v)
        } else {
            let v = self.next_n;
            self.next_n += self.n;
            Some(v)
        }
    }
}

/// First `depth` terms of the capacity sequence of E(m, n).
///
/// # Examples
/// ```
/// use ellipack::ehcap::eh_sequence;
/// assert_eq!(eh_sequence(1, 4, 11).unwrap(), vec![1, 2, 3, 4, 4, 5, 6, 7, 8, 8, 9]);
/// assert_eq!(eh_sequence(2, 2, 8).unwrap(), vec![2, 2, 4, 4, 6, 6, 8, 8]);
/// ```
pub fn eh_sequence(m: u64, n: u64, depth: usize) -> Result<Vec<u64>> {
    if depth == 0 {
        return domain_err("capacity sequence depth must be positive");
    }
    Ok(EHSequence::new(m, n)?.take(depth).collect())
}

/// Termwise domination of capacity sequences to the given depth: does
/// every one of the first `depth` terms for (m, n) stay at or below the
/// matching term for (m2, n2)?  A true answer is a statement about the
/// checked prefix only.
pub fn eh_dominates(m: u64, n: u64, m2: u64, n2: u64, depth: usize) -> Result<bool> {
    let a = eh_sequence(m, n, depth)?;
    let b = eh_sequence(m2, n2, depth)?;
    Ok(a.iter().zip(&b).all(|(x, y)| x <= y))
}

/// Default comparison depth: four times the product of the larger
/// parameters of the (normalized) source and target.
pub fn default_depth(n: u64, n_target: u64) -> usize {
    (4 * n * n_target) as usize
}

/// Cone-side verdict of the obstruction report.  The scale enters as its
/// square, so scales like 1/sqrt(5) stay exact; when the scale itself is
/// rational the full certificate machinery runs, otherwise the verdict
/// comes from comparing against the exact supremum.
#[derive(Debug, Clone)]
pub enum ConeCheck {
    Feasible,
    FeasibleUpToDegree(u32),
    /// Infeasible with a certificate from the direct decision.
    Infeasible(Certificate),
    /// The scale meets or exceeds the exact supremum; `binding` is the
    /// class attaining it, None when the volume root or a bracket end
    /// binds.
    AtOrAboveSup { binding: Option<HClass> },
    /// Rank >= 9 bracket straddles the scale; neither side certified.
    Undetermined {
        lower: ExactValue,
        upper: ExactValue,
        degree_bound: u32,
    },
}

impl ConeCheck {
    /// Some(true)/Some(false) when certified, None when undetermined.
    pub fn feasible(&self) -> Option<bool> {
        match self {
            ConeCheck::Feasible | ConeCheck::FeasibleUpToDegree(_) => Some(true),
            ConeCheck::Infeasible(_) | ConeCheck::AtOrAboveSup { .. } => Some(false),
            ConeCheck::Undetermined { .. } => None,
        }
    }
}

/// The three obstructions side by side for one scaled embedding problem.
#[derive(Debug, Clone)]
pub struct ObstructionReport {
    /// Normalized coprime source and target.
    pub source: (u64, u64),
    pub target: (u64, u64),
    /// Square of the effective scale.
    pub lambda_sq: Rational,
    /// Scaled source volume over target volume; pass means < 1.
    pub volume_ratio: Rational,
    pub volume_ok: bool,
    /// Termwise capacity domination over the checked prefix.
    pub eh_ok: bool,
    pub eh_depth: usize,
    pub cone: ConeCheck,
    /// Volume and capacities pass but the cone test certifies a no.
    pub discrepancy: bool,
}

/// Run all three obstructions for lambda E(source) into the open target,
/// with lambda given by its square.  Non-coprime pairs are reduced and
/// the factors folded into the scale.
///
/// # Examples
/// ```
/// use ellipack::cone::ConeOptions;
/// use ellipack::ehcap::obstruction_report;
/// use ellipack::rational::rat;
/// // E(1,5) against the ball of capacity (11/10) sqrt(5): volume and
/// // capacities see nothing, the cone test says no
/// let r = obstruction_report((1, 5), (1, 1), rat(20, 121), None, &ConeOptions::default()).unwrap();
/// assert!(r.volume_ok && r.eh_ok && r.discrepancy);
/// ```
pub fn obstruction_report(
    source: (u64, u64),
    target: (u64, u64),
    lambda_sq: Rational,
    depth: Option<usize>,
    opts: &ConeOptions,
) -> Result<ObstructionReport> {
    if !lambda_sq.is_positive() {
        return domain_err(format!(
            "squared scale must be positive, got {}",
            format_rational(&lambda_sq)
        ));
    }
    let (source, g_s) = reduce_pair(source)?;
    let (target, g_t) = reduce_pair(target)?;
    let lambda_sq = lambda_sq * sq(g_s) / sq(g_t);

    let volume_ratio = &lambda_sq * big(source.0 * source.1) / big(target.0 * target.1);
    let volume_ok = volume_ratio < int(1);

    let eh_depth = depth.unwrap_or_else(|| default_depth(source.1, target.1));
    let a = eh_sequence(source.0, source.1, eh_depth)?;
    let b = eh_sequence(target.0, target.1, eh_depth)?;
    // lambda a_i <= b_i, compared through squares to keep sqrt scales exact
    let eh_ok = a
        .iter()
        .zip(&b)
        .all(|(x, y)| &lambda_sq * sq(*x) <= sq(*y));

    let cone = cone_check(source, target, &lambda_sq, opts)?;
    let discrepancy = volume_ok && eh_ok && cone.feasible() == Some(false);
    Ok(ObstructionReport {
        source,
        target,
        lambda_sq,
        volume_ratio,
        volume_ok,
        eh_ok,
        eh_depth,
        cone,
        discrepancy,
    })
}

fn cone_check(
    source: (u64, u64),
    target: (u64, u64),
    lambda_sq: &Rational,
    opts: &ConeOptions,
) -> Result<ConeCheck> {
    if let Some(lambda) = crate::engine::rational_sqrt(lambda_sq) {
        let pair = EllipsoidPair::new(
            (big(source.0), big(source.1)),
            (big(target.0), big(target.1)),
            lambda,
        )?;
        return Ok(match decide(&pair, opts)? {
            Verdict::Yes => ConeCheck::Feasible,
            Verdict::YesUpToDegree(d) => ConeCheck::FeasibleUpToDegree(d),
            Verdict::No(c) => ConeCheck::Infeasible(c),
        });
    }
    Ok(match lambda_sup(source, target, opts)? {
        LambdaSup::Exact { value, binding } => {
            if *lambda_sq < value.square() {
                ConeCheck::Feasible
            } else {
                ConeCheck::AtOrAboveSup { binding }
            }
        }
        LambdaSup::Bracket {
            lower,
            upper,
            degree_bound,
        } => {
            if *lambda_sq < lower.square() {
                ConeCheck::FeasibleUpToDegree(degree_bound)
            } else if *lambda_sq >= upper.square() {
                ConeCheck::AtOrAboveSup { binding: None }
            } else {
                ConeCheck::Undetermined {
                    lower,
                    upper,
                    degree_bound,
                }
            }
        }
    })
}

/// Reduce a parameter pair to coprime form, returning the common factor.
fn reduce_pair(p: (u64, u64)) -> Result<((u64, u64), u64)> {
    if p.0 == 0 || p.1 == 0 {
        return domain_err(format!("ellipsoid parameters must be positive, got {p:?}"));
    }
    let g = gcd_u64(p.0, p.1);
    let (a, b) = (p.0 / g, p.1 / g);
    Ok(((a.min(b), a.max(b)), g))
}

fn big(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn sq(v: u64) -> Rational {
    let b = BigInt::from(v);
    Rational::from_integer(&b * &b)
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sm, sn) = self.source;
        let (tm, tn) = self.target;
        writeln!(
            f,
            "embedding lambda E({sm},{sn}) -> open E({tm},{tn}), lambda^2 = {}",
            format_rational(&self.lambda_sq)
        )?;
        writeln!(
            f,
            "  volume:          ratio {} -> {}",
            format_rational(&self.volume_ratio),
            if self.volume_ok { "pass" } else { "FAIL" }
        )?;
        writeln!(
            f,
            "  capacities:      termwise to depth {} -> {}",
            self.eh_depth,
            if self.eh_ok { "pass" } else { "FAIL" }
        )?;
        let cone = match &self.cone {
            ConeCheck::Feasible => "pass".to_string(),
            ConeCheck::FeasibleUpToDegree(d) => format!("pass (classes up to degree {d})"),
            ConeCheck::Infeasible(c) => format!("FAIL ({c})"),
            ConeCheck::AtOrAboveSup { binding: Some(b) } => {
                format!("FAIL (at or above the supremum; binding class {b})")
            }
            ConeCheck::AtOrAboveSup { binding: None } => {
                "FAIL (at or above the supremum)".to_string()
            }
            ConeCheck::Undetermined {
                lower,
                upper,
                degree_bound,
            } => format!("undetermined in [{lower}, {upper}] (degree {degree_bound})"),
        };
        writeln!(f, "  cone test:       {cone}")?;
        if self.discrepancy {
            writeln!(
                f,
                "  discrepancy:     volume and capacities pass but the embedding is obstructed"
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn sequence_fixtures() {
        assert_eq!(
            eh_sequence(1, 4, 11).unwrap(),
            vec![1, 2, 3, 4, 4, 5, 6, 7, 8, 8, 9]
        );
        assert_eq!(eh_sequence(2, 2, 8).unwrap(), vec![2, 2, 4, 4, 6, 6, 8, 8]);
        assert_eq!(eh_sequence(1, 1, 3).unwrap(), vec![1, 1, 2]);
        // order of the pair does not matter
        assert_eq!(eh_sequence(4, 1, 11).unwrap(), eh_sequence(1, 4, 11).unwrap());
    }

    #[test]
    fn sequence_contents_and_multiplicity() {
        let terms = eh_sequence(3, 5, 30).unwrap();
        let last = *terms.last().unwrap();
        assert!(terms.windows(2).all(|w| w[0] <= w[1]));
        for v in 1..=last {
            let expect = usize::from(v % 3 == 0) + usize::from(v % 5 == 0);
            let got = terms.iter().filter(|&&t| t == v).count();
            // the prefix may cut the final value short
            if v < last {
                assert_eq!(got, expect, "multiplicity of {v}");
            } else {
                assert!(got <= expect);
            }
        }
    }

    #[test]
    fn sequence_rejects_zero() {
        assert!(eh_sequence(0, 3, 5).is_err());
        assert!(eh_sequence(3, 1, 0).is_err());
    }

    #[test]
    fn domination_fixtures() {
        assert!(eh_dominates(1, 4, 2, 2, 100).unwrap());
        assert!(!eh_dominates(2, 2, 1, 4, 1).unwrap());
        assert!(eh_dominates(3, 7, 3, 7, 50).unwrap());
    }

    #[test]
    fn report_sees_what_capacities_miss() {
        // E(1,5) into the ball of capacity (11/10) sqrt(5): scale square
        // 1 / ((11/10)^2 * 5) = 20/121
        let r = obstruction_report(
            (1, 5),
            (1, 1),
            rat(20, 121),
            Some(100),
            &ConeOptions::default(),
        )
        .unwrap();
        assert!(r.volume_ok);
        assert_eq!(r.volume_ratio, rat(100, 121));
        assert!(r.eh_ok);
        assert_eq!(r.eh_depth, 100);
        match &r.cone {
            ConeCheck::AtOrAboveSup { binding: Some(b) } => {
                assert_eq!(b.d(), &int(2));
            }
            other => panic!("expected a supremum violation, got {other:?}"),
        }
        assert!(r.discrepancy);
    }

    #[test]
    fn report_all_pass_just_under_the_ball_bound() {
        // E(1,4) into the open ball of capacity 2 + 1/50
        let r = obstruction_report(
            (1, 4),
            (1, 1),
            rat(2500, 10201),
            None,
            &ConeOptions::default(),
        )
        .unwrap();
        assert!(r.volume_ok && r.eh_ok);
        assert!(matches!(r.cone, ConeCheck::Feasible));
        assert!(!r.discrepancy);
        assert_eq!(r.eh_depth, default_depth(4, 1));
    }

    #[test]
    fn report_volume_failure() {
        // B(2) into the open unit ball
        let r = obstruction_report((2, 2), (1, 1), int(1), None, &ConeOptions::default()).unwrap();
        assert_eq!(r.source, (1, 1));
        assert_eq!(r.lambda_sq, int(4));
        assert!(!r.volume_ok && !r.eh_ok);
        assert_eq!(r.cone.feasible(), Some(false));
        assert!(!r.discrepancy);
    }

    #[test]
    fn report_at_the_exact_boundary() {
        // scale 1/2 against the four-ball bound: rational scale, direct
        // decision, volume ratio exactly 1
        let r = obstruction_report((1, 4), (1, 1), rat(1, 4), None, &ConeOptions::default()).unwrap();
        assert_eq!(r.volume_ratio, int(1));
        assert!(!r.volume_ok);
        assert!(r.eh_ok);
        match &r.cone {
            ConeCheck::Infeasible(Certificate::Volume { self_int }) => {
                assert_eq!(self_int, &int(0))
            }
            other => panic!("expected a volume certificate, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn scaling_multiplies_terms(m in 1u64..8, n in 1u64..8, c in 1u64..5, depth in 1usize..40) {
            let base = eh_sequence(m, n, depth).unwrap();
            let scaled = eh_sequence(c * m, c * n, depth).unwrap();
            let expect: Vec<u64> = base.iter().map(|v| c * v).collect();
            prop_assert_eq!(scaled, expect);
        }

        #[test]
        fn domination_is_reflexive_and_transitive(
            a in (1u64..10, 1u64..10),
            b in (1u64..10, 1u64..10),
            c in (1u64..10, 1u64..10),
            depth in 1usize..60,
        ) {
            prop_assert!(eh_dominates(a.0, a.1, a.0, a.1, depth).unwrap());
            if eh_dominates(a.0, a.1, b.0, b.1, depth).unwrap()
                && eh_dominates(b.0, b.1, c.0, c.1, depth).unwrap()
            {
                prop_assert!(eh_dominates(a.0, a.1, c.0, c.1, depth).unwrap());
            }
        }

        #[test]
        fn domination_shrinks_with_depth(
            a in (1u64..10, 1u64..10),
            b in (1u64..10, 1u64..10),
            depth in 2usize..60,
        ) {
            if eh_dominates(a.0, a.1, b.0, b.1, depth).unwrap() {
                prop_assert!(eh_dominates(a.0, a.1, b.0, b.1, depth - 1).unwrap());
            }
        }
    }
}
