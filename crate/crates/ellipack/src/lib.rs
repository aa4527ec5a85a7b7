//! Exact decision procedures for 4-dimensional symplectic ellipsoid
//! embeddings.
//!
//! The central question — for which λ does the closed ellipsoid λE(m,n)
//! symplectically embed into the open ellipsoid E̊(m′,n′)? — is reduced to a
//! ball-packing problem via continued-fraction weight expansions, and the
//! packing problem is decided exactly by testing a cohomology class against
//! the symplectic cone of a blown-up projective plane. Everything is computed
//! in arbitrary-precision rational arithmetic; every "no" comes with a
//! machine-checkable certificate (a violated exceptional class or a violated
//! volume bound).
//!
//! Modules, bottom up:
//!
//! * [`rational`] — exact rationals, Farey/Stern–Brocot navigation, continued
//!   fractions.
//! * [`weights`] — weight expansions: the ball sizes inside an ellipsoid and
//!   the ball sizes of its complement in a ball.
//! * [`hclass`] — the intersection lattice of the k-fold blow-up, exceptional
//!   classes, Cremona moves.
//! * [`cone`] — symplectic-cone membership with certificates; enumeration and
//!   reduction back ends; the on-disk class cache.
//! * [`toric`] — lattice-polygon engine: blow-up chains, triangle
//!   decompositions, admissible perturbations, affine lengths, SVG rendering.
//! * [`engine`] — the top-level reduction and decision: feasibility, exact
//!   suprema, packing constants, ball capacities.
//! * [`ehcap`] — Ekeland–Hofer capacity sequences and the obstruction report
//!   comparing volume, capacities, and the cone test.
//! * [`cli`] — the `ellipack` command-line frontend.
//!
//! Target semantics are *open* throughout: feasibility of λE(m,n) ↪ E̊(m′,n′)
//! corresponds to strict inequalities in the cone test, and suprema are
//! suprema of the open feasible set. See `engine` for the one degenerate
//! family where this convention bites.

pub mod cli;
pub mod cone;
pub mod ehcap;
pub mod engine;
pub mod hclass;
pub mod rational;
pub mod toric;
pub mod weights;

pub use cone::{Certificate, Verdict};
pub use hclass::HClass;
pub use rational::{Fraction01, Rational};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed textual input (rationals, fractions, CLI payloads).
    #[error("cannot parse {0:?} as a rational (expected \"p/q\" or \"p\")")]
    Parse(String),
    /// A mathematical precondition was violated; the message has the details.
    #[error("{0}")]
    Domain(String),
    /// Farey operations demand |pq' - p'q| = 1.
    #[error("fractions {0} and {1} are not Farey-adjacent")]
    NotAdjacent(String, String),
    /// 0/1 and 1/1 are the roots of the Stern–Brocot tree.
    #[error("{0} has no Farey parents")]
    NoParents(String),
    /// Ellipsoid pairs must be coprime after normalization.
    #[error("pair ({0}, {1}) is not coprime")]
    NotCoprime(u64, u64),
    /// Homology classes live in a fixed-rank lattice.
    #[error("class length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    /// The on-disk class cache was unreadable or version-skewed.
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Convenience: build an error for a violated precondition.
pub(crate) fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
