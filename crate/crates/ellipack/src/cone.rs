//! Membership test for the symplectic cone of the k-fold blow-up of the
//! projective plane.
//!
//! A class a = dL - sum mi Ei with d > 0 is in the cone iff a^2 > 0 and
//! a pairs strictly positively with every exceptional class.  Below rank 9
//! the exceptional classes form small finite lists and the test is exact.
//! From rank 9 up the set is infinite; we enumerate all classes up to a
//! degree bound by breadth-first search under Cremona moves, back it up
//! with Cremona reduction, and report a degree-qualified verdict unless
//! the caller opts into trusting the reduction outright.
//!
//! Negative verdicts always carry a machine-checkable [`Certificate`].

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num::{Signed, Zero};

use crate::hclass::HClass;
use crate::rational::{format_rational, Rational};
use crate::{domain_err, Error, Result};

/// Rank at and below which the exceptional classes form a finite list.
pub const MAX_FINITE_RANK: usize = 8;

/// Default degree bound for enumeration at rank >= 9.
pub const DEFAULT_DEGREE_BOUND: u32 = 6;

/// Cache file format version; bump to invalidate old files.
const CACHE_FORMAT: u32 = 1;

/// Witness for a negative cone verdict.  Either the class has nonpositive
/// square, or some exceptional class pairs nonpositively with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// a^2 <= 0: fails the volume condition.
    Volume { self_int: Rational },
    /// An exceptional class E with <a, E> <= 0.
    Class { class: HClass, pairing: Rational },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Volume { self_int } => {
                write!(f, "volume violation: a^2 = {}", format_rational(self_int))
            }
            Certificate::Class { class, pairing } => {
                write!(f, "violated class {} (pairing {})", class, format_rational(pairing))
            }
        }
    }
}

/// Outcome of the cone test.  A negative verdict always carries its
/// certificate; a positive one at rank >= 9 is qualified by the degree
/// bound that was searched unless exact reduction was requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    YesUpToDegree(u32),
    No(Certificate),
}

impl Verdict {
    /// True for `Yes` and `YesUpToDegree`.
    pub fn is_feasible(&self) -> bool {
        !matches!(self, Verdict::No(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::No(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => write!(f, "yes"),
            Verdict::YesUpToDegree(d) => write!(f, "yes (up to degree {})", d),
            Verdict::No(c) => write!(f, "no; {}", c),
        }
    }
}

/// Options for [`in_cone`].
#[derive(Debug, Clone)]
pub struct ConeOptions {
    /// Degree bound for enumeration at rank >= 9.
    pub degree_bound: u32,
    /// Trust Cremona reduction to upgrade rank >= 9 passes to a plain yes.
    pub exact_reduction: bool,
    /// Directory for the on-disk class cache; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

impl Default for ConeOptions {
    fn default() -> Self {
        ConeOptions {
            degree_bound: DEFAULT_DEGREE_BOUND,
            exact_reduction: false,
            cache_dir: None,
        }
    }
}

/// Canonical form: degree plus multiplicities sorted descending.
type Canonical = (i64, Vec<i64>);

fn cremona_int(c: &Canonical, i: usize, j: usize, l: usize) -> Canonical {
    let (d, m) = c;
    let s = m[i] + m[j] + m[l];
    let mut out = m.clone();
    out[i] = d - m[j] - m[l];
    out[j] = d - m[i] - m[l];
    out[l] = d - m[i] - m[j];
    (2 * d - s, out)
}

fn canonicalize(mut c: Canonical) -> Canonical {
    c.1.sort_unstable_by(|a, b| b.cmp(a));
    c
}

/// The complete list of canonical exceptional forms for rank k <= 8.
fn finite_canonical_forms(k: usize) -> Vec<Canonical> {
    assert!(k >= 1 && k <= MAX_FINITE_RANK);
    let pad = |d: i64, mut m: Vec<i64>| -> Canonical {
        m.resize(k, 0);
        canonicalize((d, m))
    };
    let mut forms = vec![pad(0, vec![-1])];
    if k >= 2 {
        forms.push(pad(1, vec![1, 1]));
    }
    if k >= 5 {
        forms.push(pad(2, vec![1, 1, 1, 1, 1]));
    }
    if k >= 7 {
        forms.push(pad(3, vec![2, 1, 1, 1, 1, 1, 1]));
    }
    if k >= 8 {
        forms.push(pad(4, vec![2, 2, 2, 1, 1, 1, 1, 1]));
        forms.push(pad(5, vec![2, 2, 2, 2, 2, 2, 1, 1]));
        forms.push(pad(6, vec![3, 2, 2, 2, 2, 2, 2, 2]));
    }
    forms.sort();
    forms
}

/// Breadth-first closure of the seed classes under Cremona moves on all
/// index triples, keeping canonical forms of degree <= d_bound.  Seeds are
/// the basis class E_k and, at rank >= 2, the line class L - E1 - E2; the
/// latter is redundant at rank >= 3 but is its own orbit at rank 2, where
/// no Cremona move exists.  Sound for any rank: a Cremona reduction path
/// from a class of degree d to a seed has degrees monotonically decreasing
/// along it, so running the moves in reverse reaches every class of degree
/// <= d_bound without ever passing through a pruned node.
pub fn enumerate_canonical(k: usize, d_bound: u32) -> Vec<Canonical> {
    assert!(k >= 1);
    let mut seeds = Vec::new();
    let mut e_seed = vec![0i64; k];
    e_seed[k - 1] = -1;
    seeds.push((0i64, e_seed));
    if k >= 2 && d_bound >= 1 {
        let mut line_seed = vec![0i64; k];
        line_seed[0] = 1;
        line_seed[1] = 1;
        seeds.push((1i64, line_seed));
    }
    let mut seen: HashSet<Canonical> = HashSet::new();
    let mut queue: VecDeque<Canonical> = VecDeque::new();
    for seed in seeds {
        seen.insert(seed.clone());
        queue.push_back(seed);
    }
    while let Some(c) = queue.pop_front() {
        if k < 3 {
            continue;
        }
        for i in 0..k {
            for j in (i + 1)..k {
                for l in (j + 1)..k {
                    let next = canonicalize(cremona_int(&c, i, j, l));
                    if next.0 < 0 || next.0 > d_bound as i64 {
                        continue;
                    }
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    let mut out: Vec<Canonical> = seen.into_iter().collect();
    out.sort();
    out
}

/// Canonical exceptional forms for the given rank: the finite list for
/// k <= 8 (independent of the bound), the enumerated set for k >= 9.
pub(crate) fn canonical_exceptional(
    k: usize,
    d_bound: u32,
    cache_dir: Option<&Path>,
) -> Result<Vec<Canonical>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    if k <= MAX_FINITE_RANK {
        return Ok(finite_canonical_forms(k));
    }
    if let Some(dir) = cache_dir {
        if let Some(cached) = cache_load(dir, k, d_bound) {
            return Ok(cached);
        }
        let forms = enumerate_canonical(k, d_bound);
        cache_store(dir, k, d_bound, &forms)?;
        return Ok(forms);
    }
    Ok(enumerate_canonical(k, d_bound))
}

/// Advance `v` to its next lexicographic permutation; false once exhausted.
fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All distinct coordinate permutations of a canonical form, as classes.
fn expand_orbit(c: &Canonical) -> Vec<HClass> {
    let mut m = c.1.clone();
    m.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(HClass::from_i64(c.0, &m));
        if !next_permutation(&mut m) {
            break;
        }
    }
    out
}

/// Every exceptional class of the rank-k blow-up with degree <= d_bound,
/// coordinate permutations included.  For k <= 8 the full (finite) set is
/// returned and `d_bound` is ignored; every class there has degree <= 6.
pub fn exceptional_classes(
    k: usize,
    d_bound: u32,
    cache_dir: Option<&Path>,
) -> Result<Vec<HClass>> {
    let mut out = Vec::new();
    for c in canonical_exceptional(k, d_bound, cache_dir)? {
        out.extend(expand_orbit(&c));
    }
    Ok(out)
}

/// Minimum of <a, E> over all coordinate permutations of the canonical
/// form, together with the permuted class realizing it.  By rearrangement,
/// the minimum pairs the multiplicities of `a` and of the form sorted the
/// same way.
fn min_pairing(a: &HClass, order: &[usize], c: &Canonical) -> (Rational, HClass) {
    let d_a = a.d();
    let mut m = vec![Rational::zero(); a.k()];
    let mut dot = Rational::zero();
    for (rank, &slot) in order.iter().enumerate() {
        let entry = Rational::from_integer(c.1[rank].into());
        dot += &a.multiplicities()[slot] * &entry;
        m[slot] = entry;
    }
    let class = HClass::new(Rational::from_integer(c.0.into()), m);
    let pairing = d_a * Rational::from_integer(c.0.into()) - dot;
    (pairing, class)
}

/// Slots of `a` ordered by multiplicity, largest first (ties by index).
fn slots_by_multiplicity(a: &HClass) -> Vec<usize> {
    let mut order: Vec<usize> = (0..a.k()).collect();
    order.sort_by(|&i, &j| a.multiplicities()[j].cmp(&a.multiplicities()[i]).then(i.cmp(&j)));
    order
}

/// Decide whether `a` (which must have positive degree) lies in the
/// symplectic cone.  See the module docs for the rank-9 qualification.
pub fn in_cone(a: &HClass, opts: &ConeOptions) -> Result<Verdict> {
    if !a.d().is_positive() {
        return domain_err(format!("class {} has nonpositive degree", a));
    }
    let self_int = a.self_int();
    if !self_int.is_positive() {
        return Ok(Verdict::No(Certificate::Volume { self_int }));
    }
    let k = a.k();
    if k == 0 {
        return Ok(Verdict::Yes);
    }
    let forms = canonical_exceptional(k, opts.degree_bound, opts.cache_dir.as_deref())?;
    let order = slots_by_multiplicity(a);
    let mut worst: Option<(Rational, HClass)> = None;
    for c in &forms {
        let (pairing, class) = min_pairing(a, &order, c);
        if worst.as_ref().map_or(true, |(p, _)| pairing < *p) {
            worst = Some((pairing, class));
        }
    }
    if let Some((pairing, class)) = worst {
        if !pairing.is_positive() {
            return Ok(Verdict::No(Certificate::Class { class, pairing }));
        }
    }
    if k <= MAX_FINITE_RANK {
        return Ok(Verdict::Yes);
    }
    match reduce(a)? {
        Reduction::Violated { class, pairing } => {
            Ok(Verdict::No(Certificate::Class { class, pairing }))
        }
        Reduction::Reduced { .. } => {
            if opts.exact_reduction {
                Ok(Verdict::Yes)
            } else {
                Ok(Verdict::YesUpToDegree(opts.degree_bound))
            }
        }
    }
}

/// Outcome of Cremona reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    /// Reached a sorted form with all multiplicities positive and
    /// m1 + m2 + m3 <= d: the class is in the closure of the cone.
    Reduced { final_form: HClass },
    /// Some step exposed a nonpositive pairing; `class` is the violated
    /// exceptional class pulled back to the original basis.
    Violated { class: HClass, pairing: Rational },
}

enum Move {
    Perm(Vec<usize>),
    Cremona(usize, usize, usize),
}

/// Pull a class in the final basis back through the recorded moves.  Both
/// permutations and Cremona moves are isometries, and Cremona moves are
/// involutions, so <moves(a), E> = <a, pullback(E)>.
fn pull_back(mut class: HClass, moves: &[Move]) -> Result<HClass> {
    for mv in moves.iter().rev() {
        class = match mv {
            Move::Perm(p) => class.permuted_inverse(p),
            Move::Cremona(i, j, l) => class.cremona(*i, *j, *l)?,
        };
    }
    Ok(class)
}

/// Cremona reduction: repeatedly sort the multiplicities and apply the
/// Cremona move on the three largest until either the form is reduced
/// (m1 + m2 + m3 <= d) or a nonpositive multiplicity appears, in which
/// case the corresponding basis class pulls back to a violated
/// exceptional class in the original coordinates.
///
/// Requires a^2 > 0: the degree then stays positive and strictly
/// decreases in fixed steps of the common denominator, so the loop
/// terminates.
pub fn reduce(a: &HClass) -> Result<Reduction> {
    if !a.d().is_positive() {
        return domain_err(format!("reduction needs positive degree, got {}", a));
    }
    if !a.self_int().is_positive() {
        return domain_err(format!(
            "reduction needs positive self-intersection, got {} with a^2 = {}",
            a,
            format_rational(&a.self_int())
        ));
    }
    let k = a.k();
    let mut state = a.clone();
    let mut moves: Vec<Move> = Vec::new();
    let mut steps = 0usize;
    loop {
        steps += 1;
        assert!(steps < 1_000_000, "cremona reduction failed to terminate");
        let order = slots_by_multiplicity(&state);
        if order.iter().enumerate().any(|(i, &p)| i != p) {
            state = state.permuted(&order);
            moves.push(Move::Perm(order));
        }
        if k > 0 && !state.multiplicities()[k - 1].is_positive() {
            // smallest multiplicity is <= 0: the basis class there violates
            let cert = pull_back(HClass::basis_e(k - 1, k), &moves)?;
            let pairing = a.pair(&cert)?;
            debug_assert_eq!(pairing, state.multiplicities()[k - 1]);
            debug_assert!(cert.is_exceptional());
            return Ok(Reduction::Violated { class: cert, pairing });
        }
        if k < 3 {
            // too few multiplicities for a Cremona move; the only
            // non-basis exceptional class in sight is L - E1 - E2
            if k == 2 {
                let head: Rational = state.multiplicities().iter().sum();
                if head >= *state.d() {
                    let cert = pull_back(HClass::from_i64(1, &[1, 1]), &moves)?;
                    let pairing = a.pair(&cert)?;
                    debug_assert!(!pairing.is_positive());
                    return Ok(Reduction::Violated { class: cert, pairing });
                }
            }
            return Ok(Reduction::Reduced { final_form: state });
        }
        let head: Rational = state.multiplicities()[..3].iter().sum();
        if head <= *state.d() {
            return Ok(Reduction::Reduced { final_form: state });
        }
        state = state.cremona(0, 1, 2)?;
        moves.push(Move::Cremona(0, 1, 2));
    }
}

/// Recheck a certificate against the class it is claimed to obstruct.
pub fn verify_certificate(a: &HClass, cert: &Certificate) -> bool {
    match cert {
        Certificate::Volume { self_int } => {
            *self_int == a.self_int() && !self_int.is_positive()
        }
        Certificate::Class { class, pairing } => {
            class.is_exceptional()
                && a.pair(class).map_or(false, |p| p == *pairing)
                && !pairing.is_positive()
        }
    }
}

// ---------------------------------------------------------------------------
// on-disk cache for enumerated class sets

fn cache_path(dir: &Path, k: usize, d_bound: u32) -> PathBuf {
    dir.join(format!("exceptional-k{}-D{}.txt", k, d_bound))
}

fn cache_header(k: usize, d_bound: u32) -> String {
    format!("ellipack-classes format={} k={} D={}", CACHE_FORMAT, k, d_bound)
}

/// Load a cached enumeration, or `None` if the file is absent, has a stale
/// format version, or does not parse cleanly.
fn cache_load(dir: &Path, k: usize, d_bound: u32) -> Option<Vec<Canonical>> {
    let text = fs::read_to_string(cache_path(dir, k, d_bound)).ok()?;
    let mut lines = text.lines();
    if lines.next()? != cache_header(k, d_bound) {
        return None;
    }
    let mut out = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (d, ms) = line.split_once(';')?;
        let d: i64 = d.parse().ok()?;
        let m: Vec<i64> = ms
            .split(',')
            .map(|s| s.trim().parse().ok())
            .collect::<Option<Vec<i64>>>()?;
        if m.len() != k {
            return None;
        }
        out.push((d, m));
    }
    Some(out)
}

/// Write an enumeration to the cache: classes one per line as
/// `d;m1,...,mk`, sorted, behind a version-stamped header.  The file is
/// staged next to its final path and atomically renamed into place.
fn cache_store(dir: &Path, k: usize, d_bound: u32, forms: &[Canonical]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = cache_header(k, d_bound);
    text.push('\n');
    for (d, m) in forms {
        let ms: Vec<String> = m.iter().map(|x| x.to_string()).collect();
        text.push_str(&format!("{};{}\n", d, ms.join(",")));
    }
    let final_path = cache_path(dir, k, d_bound);
    let tmp_path = final_path.with_extension("txt.tmp");
    fs::write(&tmp_path, text)?;
    fs::rename(&tmp_path, &final_path)
        .map_err(|e| Error::Cache(format!("replacing {}: {}", final_path.display(), e)))?;
    Ok(())
}
