//! Weight expansions for coprime pairs: the *outer* weights are the ball
//! sizes an ellipsoid decomposes into; the *inner* vector records the ball
//! sizes of the ellipsoid's complement inside the smallest ball containing
//! it, together with the degree that makes it a homology class.

use crate::hclass::HClass;
use crate::rational::gcd_u64;
use crate::{domain_err, Error, Result};

/// Euclidean weight expansion of E(m,n): labels k̂₁ ≥ … ≥ k̂_N̂ > 0 with
/// Σk̂ᵢ = m+n−1 and Σk̂ᵢ² = mn, plus the run lengths of equal labels
/// (which reproduce the continued fraction of n/m — see the tests).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterWeights {
    pair: (u64, u64),
    labels: Vec<u64>,
    multiplicities: Vec<u64>,
}

impl OuterWeights {
    pub fn pair(&self) -> (u64, u64) {
        self.pair
    }

    /// Ball sizes, descending.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Run lengths of equal labels, in order of first appearance.
    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    pub fn count(&self) -> usize {
        self.labels.len()
    }
}

/// Weight expansion of E(m,n) by the subtractive Euclidean algorithm:
/// repeatedly emit min(x,y) and subtract it from the larger, until zero.
///
/// # Examples
/// ```
/// use ellipack::weights::outer_weights;
/// assert_eq!(outer_weights(3, 5).unwrap().labels(), &[3, 2, 1, 1]);
/// assert_eq!(outer_weights(1, 4).unwrap().labels(), &[1, 1, 1, 1]);
/// ```
pub fn outer_weights(m: u64, n: u64) -> Result<OuterWeights> {
    if m == 0 || n == 0 {
        return domain_err(format!("outer weights need positive entries, got ({m}, {n})"));
    }
    if gcd_u64(m, n) != 1 {
        return Err(Error::NotCoprime(m, n));
    }
    let (mut x, mut y) = (m.min(n), m.max(n));
    let mut labels = Vec::new();
    while x > 0 {
        labels.push(x);
        y -= x;
        if y < x {
            (x, y) = (y, x);
        }
    }
    // multiplicities are the run lengths of equal labels
    let mut multiplicities = Vec::new();
    let mut run = 0u64;
    for i in 0..labels.len() {
        run += 1;
        if i + 1 == labels.len() || labels[i + 1] != labels[i] {
            multiplicities.push(run);
            run = 0;
        }
    }
    debug_assert_eq!(
        labels.iter().map(|&l| l as u128 * l as u128).sum::<u128>(),
        m as u128 * n as u128
    );
    debug_assert_eq!(
        labels.iter().map(|&l| l as u128).sum::<u128>(),
        m as u128 + n as u128 - 1
    );
    Ok(OuterWeights {
        pair: (m, n),
        labels,
        multiplicities,
    })
}

/// The class V_{m,n} = nL − Σkᵢ Eᵢ whose labels are the sizes of the
/// complement triangles of Δ(m,n) inside Δ(n,n), indexed by blow-up order
/// (which is *not* the spatial order along the chain).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerVector {
    pair: (u64, u64),
    labels: Vec<u64>,
}

impl InnerVector {
    pub fn pair(&self) -> (u64, u64) {
        self.pair
    }

    /// Degree n of the class.
    pub fn degree(&self) -> u64 {
        self.pair.1
    }

    /// Labels k₁..k_N in blow-up order.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Labels sorted descending — the canonical view for packing problems,
    /// which are permutation-invariant.
    pub fn sorted_labels(&self) -> Vec<u64> {
        let mut v = self.labels.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn count(&self) -> usize {
        self.labels.len()
    }

    /// As a homology class (n; k₁..k_N) of X_N.
    pub fn as_hclass(&self) -> HClass {
        self.as_hclass_in(self.count())
    }

    /// As a homology class of X_k, zero-padded above index N (k ≥ N).
    pub fn as_hclass_in(&self, k: usize) -> HClass {
        assert!(k >= self.count());
        let mut m: Vec<i64> = self.labels.iter().map(|&l| l as i64).collect();
        m.resize(k, 0);
        HClass::from_i64(self.degree() as i64, &m)
    }
}

/// Inner vector by the Farey recursion: along the Stern–Brocot descent to
/// m/n, each child class is V_lo + V_hi − E_{t+1} (coordinates zero-padded),
/// seeded by V_{0,1} = (1; 1) and V_{1,1} = (1; —).
///
/// # Examples
/// ```
/// use ellipack::weights::inner_vector;
/// let v = inner_vector(7, 12).unwrap();
/// assert_eq!(v.degree(), 12);
/// assert_eq!(v.labels(), &[5, 5, 2, 2, 1, 1]);
/// ```
pub fn inner_vector(m: u64, n: u64) -> Result<InnerVector> {
    if n == 0 || m > n {
        return domain_err(format!("inner vector needs 0 <= m <= n with n > 0, got ({m}, {n})"));
    }
    if gcd_u64(m, n) != 1 {
        return Err(Error::NotCoprime(m, n));
    }
    // V(0/1) and V(1/1); labels in blow-up order, degrees alongside
    let mut lo = (1u64, vec![1u64]);
    let mut hi = (1u64, vec![]);
    if m == 0 {
        return Ok(InnerVector { pair: (0, 1), labels: lo.1 });
    }
    if m == n {
        return Ok(InnerVector { pair: (1, 1), labels: hi.1 });
    }
    let f = crate::rational::Fraction01::new(m, n)?;
    for (t, step) in crate::rational::stern_brocot_descent(f)?.iter().enumerate() {
        // child gets blow-up index t+2 (1-based): pad both parents to t+1
        // entries, add, and append the new label 1
        let width = t + 1;
        let mut labels = vec![0u64; width];
        for (i, &l) in lo.1.iter().enumerate() {
            labels[i] += l;
        }
        for (i, &l) in hi.1.iter().enumerate() {
            labels[i] += l;
        }
        labels.push(1);
        let child = (lo.0 + hi.0, labels);
        debug_assert_eq!(child.0, step.child.n());
        if step.child == f {
            debug_assert!(child.1.iter().all(|&l| l > 0));
            debug_assert_eq!(
                child.1.iter().map(|&l| l as u128 * l as u128).sum::<u128>(),
                n as u128 * n as u128 - m as u128 * n as u128
            );
            return Ok(InnerVector { pair: (m, n), labels: child.1 });
        }
        if f < step.child {
            hi = child;
        } else {
            lo = child;
        }
    }
    unreachable!("descent always terminates at its target")
}
