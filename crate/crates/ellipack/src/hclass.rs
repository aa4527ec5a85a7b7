//! The intersection lattice of the k-fold blow-up X_k of the projective
//! plane: classes dL − Σmᵢ Eᵢ with the signature-(1,k) pairing, the
//! exceptional-class predicate, and the Cremona reflection.

use std::fmt;

use num::{One, Signed, Zero};

use crate::rational::{format_rational, int, Rational};
use crate::{domain_err, Error, Result};

/// A (co)homology class of X_k, stored as (d; m₁..m_k) meaning dL − Σmᵢ Eᵢ.
/// With this sign convention the basis class Eᵢ is (0; …,−1,…) and a packing
/// class with ball weights wᵢ is (μ; w₁..w_k), so "positive weights" is
/// literally positivity of the m-entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HClass {
    d: Rational,
    m: Vec<Rational>,
}

impl HClass {
    pub fn new(d: Rational, m: Vec<Rational>) -> Self {
        HClass { d, m }
    }

    /// Integer-coefficient convenience, mostly for tests and fixed lists.
    pub fn from_i64(d: i64, m: &[i64]) -> Self {
        HClass {
            d: int(d),
            m: m.iter().map(|&x| int(x)).collect(),
        }
    }

    /// The line class L in X_k.
    pub fn line(k: usize) -> Self {
        HClass {
            d: int(1),
            m: vec![Rational::zero(); k],
        }
    }

    /// The basis exceptional class E_{i+1} (0-based `i`) in X_k.
    pub fn basis_e(i: usize, k: usize) -> Self {
        assert!(i < k, "basis index {i} out of range for k={k}");
        let mut m = vec![Rational::zero(); k];
        m[i] = -Rational::one();
        HClass { d: int(0), m }
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn multiplicities(&self) -> &[Rational] {
        &self.m
    }

    /// Rank k of the ambient lattice (number of exceptional directions).
    pub fn k(&self) -> usize {
        self.m.len()
    }

    /// Intersection pairing d·d′ − Σ mᵢm′ᵢ (signature (1,k)).
    pub fn pair(&self, other: &HClass) -> Result<Rational> {
        if self.k() != other.k() {
            return Err(Error::LengthMismatch(self.k(), other.k()));
        }
        let mut acc = &self.d * &other.d;
        for (a, b) in self.m.iter().zip(&other.m) {
            acc -= a * b;
        }
        Ok(acc)
    }

    pub fn self_int(&self) -> Rational {
        self.pair(self).expect("same length")
    }

    /// Anticanonical degree 3d − Σmᵢ, i.e. the pairing with 3L − ΣEᵢ.
    pub fn anticanonical_degree(&self) -> Rational {
        let mut acc = int(3) * &self.d;
        for mi in &self.m {
            acc -= mi;
        }
        acc
    }

    /// E² = −1 and anticanonical degree 1.
    pub fn is_exceptional(&self) -> bool {
        self.self_int() == int(-1) && self.anticanonical_degree() == int(1)
    }

    /// Reflection in C = L − Eᵢ − Eⱼ − E_l (0-based distinct indices):
    /// a ↦ a + (a·C)C, concretely d′ = 2d − mᵢ − mⱼ − m_l and
    /// mᵢ′ = d − mⱼ − m_l (cyclically), all other entries fixed. An involution
    /// preserving the pairing, the canonical class, and the exceptional set.
    pub fn cremona(&self, i: usize, j: usize, l: usize) -> Result<HClass> {
        let k = self.k();
        if i == j || j == l || i == l {
            return domain_err(format!("cremona indices ({i},{j},{l}) must be distinct"));
        }
        if i >= k || j >= k || l >= k {
            return domain_err(format!("cremona indices ({i},{j},{l}) out of range for k={k}"));
        }
        let mut out = self.clone();
        out.d = int(2) * &self.d - &self.m[i] - &self.m[j] - &self.m[l];
        out.m[i] = &self.d - &self.m[j] - &self.m[l];
        out.m[j] = &self.d - &self.m[i] - &self.m[l];
        out.m[l] = &self.d - &self.m[i] - &self.m[j];
        Ok(out)
    }

    /// Same class with multiplicities sorted descending; canonical under the
    /// permutation action, which both the cone test and the enumeration
    /// quotient by.
    pub fn sorted_desc(&self) -> HClass {
        let mut m = self.m.clone();
        m.sort_by(|a, b| b.cmp(a));
        HClass { d: self.d.clone(), m }
    }

    /// Apply a permutation: entry i of the result is entry perm[i] of self.
    pub fn permuted(&self, perm: &[usize]) -> HClass {
        assert_eq!(perm.len(), self.k());
        HClass {
            d: self.d.clone(),
            m: perm.iter().map(|&p| self.m[p].clone()).collect(),
        }
    }

    /// Inverse of [`HClass::permuted`]: entry i of self lands in slot perm[i].
    pub fn permuted_inverse(&self, perm: &[usize]) -> HClass {
        assert_eq!(perm.len(), self.k());
        let mut m = vec![Rational::zero(); self.k()];
        for (i, &p) in perm.iter().enumerate() {
            m[p] = self.m[i].clone();
        }
        HClass { d: self.d.clone(), m }
    }
}

impl fmt::Display for HClass {
    /// Prints like `3L-2E7-E1-E2`; zero entries are omitted, unit
    /// coefficients drop the "1", and a bare zero class prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.d.is_zero() {
            if self.d == int(1) {
                write!(f, "L")?;
            } else if self.d == int(-1) {
                write!(f, "-L")?;
            } else {
                write!(f, "{}L", format_rational(&self.d))?;
            }
            wrote = true;
        }
        for (idx, mi) in self.m.iter().enumerate() {
            if mi.is_zero() {
                continue;
            }
            // class = dL − Σ mᵢEᵢ, so positive mᵢ prints with a minus sign
            let (sign, mag) = if mi.is_positive() {
                ("-", mi.clone())
            } else {
                ("+", -mi.clone())
            };
            if wrote || sign == "-" {
                write!(f, "{sign}")?;
            }
            if mag != int(1) {
                write!(f, "{}", format_rational(&mag))?;
            }
            write!(f, "E{}", idx + 1)?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
