//! Toric model of ellipsoid embeddings: blow-up chains in the moment
//! triangle, perturbed chains with an admissibility test, triangle
//! decompositions of the triangle complement and of the triangle itself,
//! unit-triangle packings, and SVG rendering of all of the above.
//!
//! Conventions: the moment triangle Δ(m,n) has vertices (0,0), (n,0), (0,m),
//! so its slant edge has outward conormal (m,n) and support mn.  The chain
//! ℰ(m,n;δ) is produced by a sequence of corner cuts starting from the
//! triangle Δ(n−δ₀, n−δ₀); cut sizes follow the inner weight labels kᵢ,
//! shifted by the perturbations δᵢ.

use num::{Signed, ToPrimitive, Zero};

use crate::hclass::HClass;
use crate::rational::{format_rational, int, rat, Fraction01, Rational};
use crate::{domain_err, Error, Result};

/// Primitive outward conormal (p,q) of a polytope edge.
pub type Conormal = (i64, i64);

/// Exact point of the moment plane.
pub type Point = (Rational, Rational);

/// Order of the orbifold point where edges with outward conormals `a` and
/// `b` meet: |det(a,b)|.  1 means the corner is smooth; 0 means the
/// conormals are parallel and there is no corner at all.
pub fn orbifold_order(a: Conormal, b: Conormal) -> u64 {
    (a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128).unsigned_abs() as u64
}

/// Affine length of the segment from `from` to `to`: the factor t ≥ 0 with
/// to − from = t·(primitive integer direction).  For a segment with lattice
/// endpoints this is (number of interior lattice points) + 1.
pub fn affine_length(from: &Point, to: &Point) -> Rational {
    let dx = &to.0 - &from.0;
    let dy = &to.1 - &from.1;
    if dx.is_zero() && dy.is_zero() {
        return Rational::zero();
    }
    // clear denominators, then divide out the gcd of the integer direction
    let denom = num::integer::lcm(dx.denom().clone(), dy.denom().clone());
    let ax = (&dx * &denom).to_integer();
    let ay = (&dy * &denom).to_integer();
    let g = num::integer::gcd(ax, ay);
    Rational::new(g, denom).abs()
}

/// The lattice transform taking the edge conormals of the complement region
/// T(m,n) to those of the transformed triangle: (p,q) ↦ (−q, p−q).
pub fn conormal_transform(v: Conormal) -> Conormal {
    (-v.1, v.0 - v.1)
}

fn line_support(v: Conormal, p: &Point) -> Rational {
    &p.0 * int(v.0) + &p.1 * int(v.1)
}

/// Support constant of the cut line with conormal (p,q) in the unperturbed
/// picture: the line passes through (0,m) or (n,0), whichever is further out.
fn base_support(v: Conormal, m: u64, n: u64) -> Rational {
    let through_x = v.0 as i128 * n as i128; // value at (n,0)
    let through_y = v.1 as i128 * m as i128; // value at (0,m)
    int(through_x.max(through_y) as i64)
}

/// Exact intersection of the lines ν·x = c and ν′·x = c′.
fn intersect(a: (Conormal, &Rational), b: (Conormal, &Rational)) -> Point {
    let ((p, q), c) = a;
    let ((p2, q2), c2) = b;
    let det = p * q2 - q * p2;
    assert!(det != 0, "parallel support lines");
    let x = (c * int(q2) - c2 * int(q)) / int(det);
    let y = (int(p) * c2 - int(p2) * c) / int(det);
    (x, y)
}

/// One edge of a (possibly perturbed or degenerate) blow-up chain.
#[derive(Debug, Clone)]
pub struct ChainEdge {
    /// Primitive outward conormal (p,q), 0 ≤ p ≤ q.
    pub conormal: Conormal,
    /// Blow-up index i of εᵢ: 0 is the remnant of the initial slant edge,
    /// i ≥ 1 the edge created by the i-th corner cut.
    pub blow_up_index: usize,
    /// Later cuts that shortened this edge: Sᵢ = {j > i : γⱼ meets γᵢ}.
    pub s_set: Vec<usize>,
    /// Support constant: the edge lies on ν·x = support.
    pub support: Rational,
    pub from: Point,
    pub to: Point,
    /// Homology class of the corresponding exceptional sphere:
    /// Eᵢ − Σ_{j∈Sᵢ} Eⱼ for i ≥ 1, and L − Σ_{j∈S₀} Eⱼ for ε₀.
    pub class: HClass,
}

impl ChainEdge {
    /// Signed affine length along the traversal direction (q,−p); negative
    /// when the perturbation pushes the edge past its neighbours.
    pub fn signed_affine_length(&self) -> Rational {
        // every chain conormal has q ≥ 1, so Δx/q determines the factor
        (&self.to.0 - &self.from.0) / int(self.conormal.1)
    }

    pub fn is_degenerate(&self) -> bool {
        self.from == self.to
    }
}

/// A blow-up chain ℰ(m,n;δ): the edges εᵢ in spatial order, i.e. by
/// ascending conormal slope, from the edge meeting the y-axis (ε₁, conormal
/// (0,1)) to the edge meeting the x-axis (ε₀, conormal (1,1)).
#[derive(Debug, Clone)]
pub struct EdgeChain {
    m: u64,
    n: u64,
    delta: Vec<Rational>,
    labels: Vec<u64>,
    edges: Vec<ChainEdge>,
}

impl EdgeChain {
    pub fn pair(&self) -> (u64, u64) {
        (self.m, self.n)
    }

    /// Number of blow-ups N; the chain has N+1 edges.
    pub fn blow_ups(&self) -> usize {
        self.edges.len() - 1
    }

    /// Edges in spatial order.
    pub fn edges(&self) -> &[ChainEdge] {
        &self.edges
    }

    /// The edge εᵢ with blow-up index `i`.
    pub fn edge(&self, i: usize) -> &ChainEdge {
        self.edges
            .iter()
            .find(|e| e.blow_up_index == i)
            .expect("blow-up index out of range")
    }

    /// Cut labels k₀, …, k_N determined by the label rule k_N = 1,
    /// kᵢ = Σ_{j∈Sᵢ} kⱼ.  Index 0 carries the seed label k₀ = n.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn delta(&self) -> &[Rational] {
        &self.delta
    }

    /// Chain vertices in traversal order, from the y-axis to the x-axis;
    /// blow_ups()+2 points, with repetitions exactly at degenerate edges.
    pub fn vertices(&self) -> Vec<Point> {
        let mut v: Vec<Point> = vec![self.edges[0].from.clone()];
        v.extend(self.edges.iter().map(|e| e.to.clone()));
        v
    }

    /// Cut sizes kᵢ + δᵢ for i = 1..N — the evaluations a(Eᵢ) of the chain's
    /// symplectic class on the individual exceptional classes.
    pub fn cut_sizes(&self) -> Vec<Rational> {
        (1..=self.blow_ups())
            .map(|i| int(self.labels[i] as i64) + &self.delta[i])
            .collect()
    }

    /// The class a = (n−δ₀)L − Σ (kᵢ+δᵢ)Eᵢ whose Poincaré-dual data the
    /// chain realises.
    pub fn symplectic_class(&self) -> HClass {
        HClass::new(int(self.n as i64) - &self.delta[0], self.cut_sizes())
    }

    /// Evaluations a(h(εᵢ)) of the symplectic class on the edge classes,
    /// indexed by blow-up index 0..=N.  These equal the signed affine
    /// lengths of the edges (the geometric route; tests compare the two).
    pub fn class_evaluations(&self) -> Vec<Rational> {
        let a = self.symplectic_class();
        (0..=self.blow_ups())
            .map(|i| a.pair(&self.edge(i).class).expect("same rank"))
            .collect()
    }

    /// Admissibility of the perturbation δ, per the three conditions of an
    /// admissible chain.
    pub fn admissibility(&self) -> Admissibility {
        let positive_initial_shifts =
            self.delta[0].is_positive() && self.delta[1].is_positive();
        let positive_edge_lengths = self
            .edges
            .iter()
            .all(|e| e.signed_affine_length().is_positive());
        // containment in Δ(m,n) ∖ r·interior: each support line must not lie
        // outside its unperturbed position (cᵢ ≤ c⁰ᵢ), and the endpoints must
        // not have drifted off the axes segments.  Non-intrusion into the
        // scaled triangle is then automatic: the chain is a concave path with
        // endpoints on the slant side of the shell.
        let start = &self.edges[0].from;
        let end = &self.edges[self.edges.len() - 1].to;
        let contained = self.edges.iter().all(|e| {
            e.support <= base_support(e.conormal, self.m, self.n)
        }) && !start.1.is_negative()
            && !end.0.is_negative();
        Admissibility {
            positive_initial_shifts,
            positive_edge_lengths,
            contained,
        }
    }
}

/// The three admissibility conditions for a perturbed chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    /// δ₀ > 0 and δ₁ > 0.
    pub positive_initial_shifts: bool,
    /// Every edge has positive signed affine length.
    pub positive_edge_lengths: bool,
    /// The chain stays inside Δ(m,n) and outside the open scaled triangle
    /// (1−δ₀−δ₁)·Δ̊(m,n).
    pub contained: bool,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.positive_initial_shifts && self.positive_edge_lengths && self.contained
    }
}

/// Which existing edge a corner cut is braced against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    /// The fixed left boundary x = 0, conormal (−1,0), support 0.
    Boundary,
    /// The chain edge with this blow-up index.
    Edge(usize),
}

/// Combinatorics of the blow-up sequence for (m,n), independent of δ.
struct Skeleton {
    m: u64,
    n: u64,
    cuts: usize,
    /// Conormal of εᵢ by blow-up index 0..=N.
    conormals: Vec<Conormal>,
    /// For cut t (stored at t−1): the two edges adjacent at the cut corner.
    brackets: Vec<(Side, Side)>,
    s_sets: Vec<Vec<usize>>,
    labels: Vec<u64>,
    /// Blow-up indices in spatial order (ascending conormal slope).
    spatial: Vec<usize>,
}

impl Skeleton {
    fn side_conormal(&self, s: Side) -> Conormal {
        match s {
            Side::Boundary => (-1, 0),
            Side::Edge(e) => self.conormals[e],
        }
    }
}

fn skeleton(m: u64, n: u64) -> Result<Skeleton> {
    if m == 0 || m >= n {
        return domain_err(format!("need 1 <= m < n, got ({m},{n})"));
    }
    let f = Fraction01::new(m, n)?;
    let descent = crate::rational::stern_brocot_descent(f)?;
    let cuts = descent.len() + 1;

    let mut conormals = vec![(1i64, 1i64); cuts + 1];
    conormals[1] = (0, 1);
    // fraction of each created edge, for bracket lookup during the descent
    let mut by_fraction: Vec<(Fraction01, usize)> =
        vec![(Fraction01::zero(), 1), (Fraction01::one(), 0)];
    let lookup = |table: &[(Fraction01, usize)], f: Fraction01| -> usize {
        table.iter().find(|(g, _)| *g == f).expect("bracket edge exists").1
    };

    let mut brackets: Vec<(Side, Side)> = Vec::with_capacity(cuts);
    // the first cut truncates the corner between the left boundary and the
    // initial slant edge, creating the horizontal edge ε₁
    brackets.push((Side::Boundary, Side::Edge(0)));
    for (s, step) in descent.iter().enumerate() {
        let t = s + 2;
        conormals[t] = (step.child.m() as i64, step.child.n() as i64);
        let a = lookup(&by_fraction, step.lo);
        let b = lookup(&by_fraction, step.hi);
        brackets.push((Side::Edge(a), Side::Edge(b)));
        by_fraction.push((step.child, t));
    }

    let mut s_sets: Vec<Vec<usize>> = vec![Vec::new(); cuts + 1];
    for (ti, (a, b)) in brackets.iter().enumerate() {
        for side in [a, b] {
            if let Side::Edge(e) = side {
                s_sets[*e].push(ti + 1);
            }
        }
    }

    // label rule: k_N = 1, k_i = sum of labels over S_i, seed k_0 = n
    let mut labels = vec![0u64; cuts + 1];
    labels[cuts] = 1;
    for i in (0..cuts).rev() {
        labels[i] = s_sets[i].iter().map(|&j| labels[j]).sum();
    }
    debug_assert_eq!(labels[0], n, "label rule must reproduce the seed");

    let mut spatial: Vec<usize> = (0..=cuts).collect();
    spatial.sort_by(|&i, &j| {
        (conormals[i].0 as i128 * conormals[j].1 as i128)
            .cmp(&(conormals[j].0 as i128 * conormals[i].1 as i128))
    });

    Ok(Skeleton { m, n, cuts, conormals, brackets, s_sets, labels, spatial })
}

fn chain_from(skel: &Skeleton, delta: &[Rational]) -> EdgeChain {
    let cuts = skel.cuts;
    let zero = Rational::zero();

    // supports: the start triangle Δ(n−δ₀,n−δ₀) fixes c₀; cut t then slices
    // off k_t+δ_t from the corner between its bracket edges
    let mut supports: Vec<Rational> = vec![zero.clone(); cuts + 1];
    supports[0] = int(skel.n as i64) - &delta[0];
    for t in 1..=cuts {
        let (a, b) = skel.brackets[t - 1];
        let side_c = |s: Side| match s {
            Side::Boundary => zero.clone(),
            Side::Edge(e) => supports[e].clone(),
        };
        supports[t] = side_c(a) + side_c(b) - int(skel.labels[t] as i64) - &delta[t];
    }

    let lines: Vec<(Conormal, &Rational)> =
        skel.spatial.iter().map(|&i| (skel.conormals[i], &supports[i])).collect();
    let mut verts: Vec<Point> = Vec::with_capacity(cuts + 2);
    verts.push(intersect(((-1, 0), &zero), lines[0]));
    for w in 0..cuts {
        verts.push(intersect(lines[w], lines[w + 1]));
    }
    verts.push(intersect(lines[cuts], ((0, -1), &zero)));

    let edges = skel
        .spatial
        .iter()
        .enumerate()
        .map(|(w, &i)| {
            let class = if i == 0 {
                let mut mult = vec![Rational::zero(); cuts];
                for &j in &skel.s_sets[0] {
                    mult[j - 1] = int(1);
                }
                HClass::new(int(1), mult)
            } else {
                let mut mult = vec![Rational::zero(); cuts];
                mult[i - 1] = int(-1);
                for &j in &skel.s_sets[i] {
                    mult[j - 1] = int(1);
                }
                HClass::new(int(0), mult)
            };
            ChainEdge {
                conormal: skel.conormals[i],
                blow_up_index: i,
                s_set: skel.s_sets[i].clone(),
                support: supports[i].clone(),
                from: verts[w].clone(),
                to: verts[w + 1].clone(),
                class,
            }
        })
        .collect();

    EdgeChain {
        m: skel.m,
        n: skel.n,
        delta: delta.to_vec(),
        labels: skel.labels.clone(),
        edges,
    }
}

/// The unperturbed (singular) blow-up chain of (m,n): every edge except the
/// slant edge ε_N has zero length, and all support lines sit at their base
/// positions.  This is the δ = 0 limit of the perturbed chain.
pub fn blowup_chain(m: u64, n: u64) -> Result<EdgeChain> {
    let skel = skeleton(m, n)?;
    let delta = vec![Rational::zero(); skel.cuts + 1];
    Ok(chain_from(&skel, &delta))
}

/// The perturbed chain ℰ(m,n;δ) together with its admissibility verdict.
/// `delta` must supply δ₀, …, δ_N for the N blow-ups of (m,n).
pub fn perturbed_chain(
    m: u64,
    n: u64,
    delta: &[Rational],
) -> Result<(EdgeChain, Admissibility)> {
    let skel = skeleton(m, n)?;
    if delta.len() != skel.cuts + 1 {
        return Err(Error::LengthMismatch(skel.cuts + 1, delta.len()));
    }
    let chain = chain_from(&skel, delta);
    let adm = chain.admissibility();
    Ok((chain, adm))
}

/// Produce an admissible perturbation for (m,n), deterministically from
/// `scale` (a small positive rational; the resulting δ are of this order)
/// and an optional `jitter` slice that varies the individual edge lengths.
///
/// The construction marches along the chain with prescribed positive step
/// sizes: tiny steps of order `scale` on every edge except the slant edge,
/// which takes up the rest.  The heavy weighting of the first edge opens a
/// window for the shrink factor that makes δ₀ and δ₁ positive exactly; the
/// remaining support-line conditions are verified exactly and the weights
/// enlarged until they hold.
pub fn sample_admissible_delta(
    m: u64,
    n: u64,
    scale: &Rational,
    jitter: &[u64],
) -> Result<Vec<Rational>> {
    if !scale.is_positive() {
        return domain_err("scale must be positive");
    }
    let skel = skeleton(m, n)?;
    let cuts = skel.cuts;

    // jitter factors in [1/8, 1]
    let jit = |s: usize| -> Rational {
        let j = if jitter.is_empty() { 3 } else { jitter[s % jitter.len()] };
        rat(1 + (j % 8) as i64, 8)
    };

    let pbar: i64 = skel
        .spatial
        .iter()
        .filter(|&&i| i != cuts)
        .map(|&i| skel.conormals[i].0)
        .sum();
    let qbar: i64 = skel
        .spatial
        .iter()
        .filter(|&&i| i != cuts)
        .map(|&i| skel.conormals[i].1)
        .sum();
    let mut heavy = int(1 + 16 * (n as i64) * (n as i64) * (1 + pbar.max(qbar)));
    let mut eps = scale / int(4);

    for _attempt in 0..64 {
        // step size per spatial position; slant position gets the remainder
        let mut steps: Vec<Option<Rational>> = Vec::with_capacity(cuts + 1);
        let mut phat = Rational::zero();
        let mut qhat = Rational::zero();
        for (s, &i) in skel.spatial.iter().enumerate() {
            if i == cuts {
                steps.push(None);
                continue;
            }
            let w = if s == 0 { heavy.clone() * jit(s) } else { jit(s) };
            phat += &w * int(skel.conormals[i].0);
            qhat += &w * int(skel.conormals[i].1);
            steps.push(Some(&eps * &w));
        }
        // shrink factor: midpoint of the window (Q̂ε/n, (Q̂−P̂)ε/(n−m))
        let lo = &qhat / int(n as i64);
        let hi = (&qhat - &phat) / int((n - m) as i64);
        debug_assert!(lo < hi, "window for the shrink factor must be open");
        let rho = &eps * (lo + hi) / int(2);
        if rho >= int(1) {
            eps = eps / int(2);
            continue;
        }
        let slant_step = int(1) - &rho;

        // march from the y-axis, recording each edge's support constant
        let y0 = int(m as i64) * &slant_step + &eps * &phat;
        let mut pos: Point = (Rational::zero(), y0);
        let mut supports: Vec<Rational> = vec![Rational::zero(); cuts + 1];
        for (s, &i) in skel.spatial.iter().enumerate() {
            let (p, q) = skel.conormals[i];
            supports[i] = line_support((p, q), &pos);
            let t = steps[s].clone().unwrap_or_else(|| slant_step.clone());
            pos = (&pos.0 + &t * int(q), &pos.1 - &t * int(p));
        }
        debug_assert!(pos.1.is_zero(), "march must return to the x-axis");

        // recover delta from the supports
        let mut delta = vec![Rational::zero(); cuts + 1];
        delta[0] = int(n as i64) - &supports[0];
        for t in 1..=cuts {
            let (a, b) = skel.brackets[t - 1];
            let side_c = |s: Side| match s {
                Side::Boundary => Rational::zero(),
                Side::Edge(e) => supports[e].clone(),
            };
            delta[t] =
                side_c(a) + side_c(b) - &supports[t] - int(skel.labels[t] as i64);
        }

        let chain = chain_from(&skel, &delta);
        if chain.admissibility().admissible() {
            return Ok(delta);
        }
        heavy = heavy * int(8);
    }
    domain_err(format!("no admissible perturbation found for ({m},{n})"))
}

/// A triangle with exact vertices, affinely equivalent to size·Δ(1,1); its
/// edge-vector determinant at any vertex is ±size².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeTriangle {
    pub vertices: [Point; 3],
    pub size: Rational,
}

impl LatticeTriangle {
    pub fn area(&self) -> Rational {
        self.det_invariant().abs() / int(2)
    }

    /// det(v₁−v₀, v₂−v₀); its absolute value is size² for a genuine
    /// size·Δ(1,1) image.
    pub fn det_invariant(&self) -> Rational {
        let [a, b, c] = &self.vertices;
        let (ux, uy) = (&b.0 - &a.0, &b.1 - &a.1);
        let (vx, vy) = (&c.0 - &a.0, &c.1 - &a.1);
        ux * vy - uy * vx
    }

    /// Closed containment test.
    pub fn contains(&self, p: &Point) -> bool {
        let orient = self.det_invariant();
        if orient.is_zero() {
            return false;
        }
        let flip = orient.is_negative();
        for i in 0..3 {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % 3];
            let cross = (&b.0 - &a.0) * (&p.1 - &a.1) - (&b.1 - &a.1) * (&p.0 - &a.0);
            let inside = if flip { !cross.is_positive() } else { !cross.is_negative() };
            if !inside {
                return false;
            }
        }
        true
    }
}

/// Exact separating-axis test: true iff the two (closed) triangles meet at
/// most in boundary points.
pub fn triangles_interior_disjoint(a: &LatticeTriangle, b: &LatticeTriangle) -> bool {
    let axes = |t: &LatticeTriangle| -> Vec<Conormal> {
        (0..3)
            .map(|i| {
                let p = &t.vertices[i];
                let q = &t.vertices[(i + 1) % 3];
                // conormals here are exact rationals; scale to integers
                let dx = &q.0 - &p.0;
                let dy = &q.1 - &p.1;
                let denom = num::integer::lcm(dx.denom().clone(), dy.denom().clone());
                let ax = (&dx * &denom).to_integer();
                let ay = (&dy * &denom).to_integer();
                (ay.to_i64().expect("axis fits i64"), (-ax).to_i64().expect("axis fits i64"))
            })
            .collect()
    };
    let mut candidates = axes(a);
    candidates.extend(axes(b));
    for axis in candidates {
        let vals = |t: &LatticeTriangle| -> (Rational, Rational) {
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            for v in &t.vertices {
                let s = line_support(axis, v);
                if lo.as_ref().is_none_or(|l| s < *l) {
                    lo = Some(s.clone());
                }
                if hi.as_ref().is_none_or(|h| s > *h) {
                    hi = Some(s);
                }
            }
            (lo.unwrap(), hi.unwrap())
        };
        let (alo, ahi) = vals(a);
        let (blo, bhi) = vals(b);
        if ahi <= blo || bhi <= alo {
            return true;
        }
    }
    false
}

/// Decompose the complement region T(m,n) = Δ(n,n) ∖ Δ̊(m,n) into the
/// triangles removed by the singular blow-up sequence: triangle t is the
/// corner sliced off by cut t, a kₜ·Δ(1,1) image.  Triangles are returned in
/// cut order, so their sizes are exactly the inner weight labels k₁…k_N.
pub fn decompose_complement(m: u64, n: u64) -> Result<Vec<LatticeTriangle>> {
    let skel = skeleton(m, n)?;
    let mut out = Vec::with_capacity(skel.cuts);
    for t in 1..=skel.cuts {
        let (a, b) = skel.brackets[t - 1];
        let line = |v: Conormal| -> (Conormal, Rational) {
            let c = if v == (-1, 0) { Rational::zero() } else { base_support(v, m, n) };
            (v, c)
        };
        let (va, ca) = line(skel.side_conormal(a));
        let (vb, cb) = line(skel.side_conormal(b));
        let (vt, ct) = line(skel.conormals[t]);
        let apex = intersect((va, &ca), (vb, &cb));
        let on_a = intersect((vt, &ct), (va, &ca));
        let on_b = intersect((vt, &ct), (vb, &cb));
        out.push(LatticeTriangle {
            vertices: [apex, on_a, on_b],
            size: int(skel.labels[t] as i64),
        });
    }
    Ok(out)
}

/// Decompose the moment triangle Δ(m,n) itself into triangles whose sizes
/// are the outer weights of (m,n), by transporting the complement
/// decomposition of (n−m, n) with the conormal transform.  In point space
/// the transform is (x,y) ↦ (x, n−x−y), a lattice map of determinant −1.
pub fn decompose_ellipsoid(m: u64, n: u64) -> Result<Vec<LatticeTriangle>> {
    if m == n {
        if m != 1 {
            return Err(Error::NotCoprime(m, n));
        }
        // the ball: Δ(1,1) is a single unit tile already
        return Ok(vec![LatticeTriangle {
            vertices: [
                (int(0), int(0)),
                (int(1), int(0)),
                (int(0), int(1)),
            ],
            size: int(1),
        }]);
    }
    let base = decompose_complement(n - m, n)?;
    let nn = int(n as i64);
    Ok(base
        .into_iter()
        .map(|t| LatticeTriangle {
            vertices: t.vertices.map(|(x, y)| {
                let new_y = &nn - &x - &y;
                (x, new_y)
            }),
            size: t.size,
        })
        .collect())
}

/// An affine map x ↦ Mx + t with integer matrix and translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineLatticeMap {
    pub linear: [[i64; 2]; 2],
    pub translation: (i64, i64),
}

impl AffineLatticeMap {
    pub fn apply(&self, p: &Point) -> Point {
        let x = int(self.linear[0][0]) * &p.0
            + int(self.linear[0][1]) * &p.1
            + int(self.translation.0);
        let y = int(self.linear[1][0]) * &p.0
            + int(self.linear[1][1]) * &p.1
            + int(self.translation.1);
        (x, y)
    }

    pub fn det(&self) -> i64 {
        self.linear[0][0] * self.linear[1][1] - self.linear[0][1] * self.linear[1][0]
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// Image of the closed unit triangle conv{(0,0),(1,0),(0,1)}.
    pub fn unit_triangle_image(&self) -> LatticeTriangle {
        let vs = [(int(0), int(0)), (int(1), int(0)), (int(0), int(1))];
        LatticeTriangle { vertices: vs.map(|v| self.apply(&v)), size: int(1) }
    }
}

/// The k affine lattice maps placing disjoint copies of the unit triangle
/// inside Δ(1,k): map i shears the unit triangle onto
/// conv{(i−1,0),(i,0),(0,1)}.  Map 1 is the identity.
pub fn pack_unit_triangles(k: u64) -> Vec<AffineLatticeMap> {
    (1..=k as i64)
        .map(|i| AffineLatticeMap {
            linear: [[1, 1 - i], [0, 1]],
            translation: (i - 1, 0),
        })
        .collect()
}

/// What to draw.
pub enum RenderObject<'a> {
    /// A blow-up chain inside its moment triangle Δ(m,n).
    Chain(&'a EdgeChain),
    /// A triangle decomposition, each tile labelled with its size.
    Triangles(&'a [LatticeTriangle]),
    /// A unit-triangle packing shown inside Δ(1,width).
    Packing { maps: &'a [AffineLatticeMap], width: u64 },
}

fn fr(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Render a standalone SVG document (1000×1000 viewBox) showing the object
/// on the integer lattice.  Degenerate input (no geometry) still produces a
/// valid document with the coordinate axes.
pub fn render_svg(obj: &RenderObject) -> String {
    // collect world-space geometry: filled polygons, stroked polylines, labels
    struct Fill {
        pts: Vec<(f64, f64)>,
        color: String,
        label: Option<String>,
    }
    struct Stroke {
        pts: Vec<(f64, f64)>,
        color: String,
        dash: bool,
    }
    let mut fills: Vec<Fill> = Vec::new();
    let mut strokes: Vec<Stroke> = Vec::new();
    let mut markers: Vec<(f64, f64)> = Vec::new();

    let tri_color = |size: &Rational| -> String {
        let hue = (fr(size) * 67.0).rem_euclid(360.0);
        format!("hsl({hue:.0},55%,82%)")
    };

    match obj {
        RenderObject::Chain(chain) => {
            let (m, n) = chain.pair();
            strokes.push(Stroke {
                pts: vec![(0.0, 0.0), (n as f64, 0.0), (0.0, m as f64), (0.0, 0.0)],
                color: "#999999".into(),
                dash: true,
            });
            for (idx, e) in chain.edges().iter().enumerate() {
                let a = (fr(&e.from.0), fr(&e.from.1));
                let b = (fr(&e.to.0), fr(&e.to.1));
                let hue = (idx * 53 % 360) as f64;
                if e.is_degenerate() {
                    markers.push(a);
                } else {
                    strokes.push(Stroke {
                        pts: vec![a, b],
                        color: format!("hsl({hue:.0},70%,40%)"),
                        dash: false,
                    });
                }
            }
        }
        RenderObject::Triangles(tris) => {
            for t in tris.iter() {
                let pts: Vec<(f64, f64)> =
                    t.vertices.iter().map(|p| (fr(&p.0), fr(&p.1))).collect();
                fills.push(Fill {
                    pts,
                    color: tri_color(&t.size),
                    label: Some(format_rational(&t.size)),
                });
            }
        }
        RenderObject::Packing { maps, width } => {
            strokes.push(Stroke {
                pts: vec![(0.0, 0.0), (*width as f64, 0.0), (0.0, 1.0), (0.0, 0.0)],
                color: "#999999".into(),
                dash: true,
            });
            for (idx, map) in maps.iter().enumerate() {
                let t = map.unit_triangle_image();
                let pts: Vec<(f64, f64)> =
                    t.vertices.iter().map(|p| (fr(&p.0), fr(&p.1))).collect();
                fills.push(Fill {
                    pts,
                    color: tri_color(&int(idx as i64 + 1)),
                    label: Some(format!("{}", idx + 1)),
                });
            }
        }
    }

    // world bounds: always include the origin and a little axis length
    let mut wx = 1.0f64;
    let mut wy = 1.0f64;
    for f in &fills {
        for &(x, y) in &f.pts {
            wx = wx.max(x);
            wy = wy.max(y);
        }
    }
    for s in &strokes {
        for &(x, y) in &s.pts {
            wx = wx.max(x);
            wy = wy.max(y);
        }
    }
    for &(x, y) in &markers {
        wx = wx.max(x);
        wy = wy.max(y);
    }

    let pad = 70.0;
    let scale = (1000.0 - 2.0 * pad) / wx.max(wy);
    let sx = move |x: f64| pad + x * scale;
    let sy = move |y: f64| 1000.0 - pad - y * scale;
    let fmt_pts = |pts: &[(f64, f64)]| -> String {
        pts.iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n",
    );
    svg.push_str("<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n");

    // axes
    for (a, b) in [
        ((0.0, 0.0), (wx + 0.4, 0.0)),
        ((0.0, 0.0), (0.0, wy + 0.4)),
    ] {
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#444444\" stroke-width=\"2\"/>\n",
            sx(a.0), sy(a.1), sx(b.0), sy(b.1)
        ));
    }

    // lattice points
    let (ix, iy) = (wx.floor() as i64, wy.floor() as i64);
    if (ix + 1) * (iy + 1) <= 2500 {
        for gx in 0..=ix {
            for gy in 0..=iy {
                svg.push_str(&format!(
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#c4c4c4\"/>\n",
                    sx(gx as f64),
                    sy(gy as f64)
                ));
            }
        }
    }

    for f in &fills {
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"2\"/>\n",
            fmt_pts(&f.pts),
            f.color
        ));
    }
    for s in &strokes {
        let dash = if s.dash { " stroke-dasharray=\"9,7\"" } else { "" };
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"5\"{}/>\n",
            fmt_pts(&s.pts),
            s.color,
            dash
        ));
    }
    for &(x, y) in &markers {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"6\" fill=\"#aa3333\"/>\n",
            sx(x),
            sy(y)
        ));
    }
    for f in &fills {
        if let Some(label) = &f.label {
            let cx = f.pts.iter().map(|p| p.0).sum::<f64>() / f.pts.len() as f64;
            let cy = f.pts.iter().map(|p| p.1).sum::<f64>() / f.pts.len() as f64;
            svg.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"30\" text-anchor=\"middle\" fill=\"#222222\">{}</text>\n",
                sx(cx),
                sy(cy) + 10.0,
                label
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Plain-text dump of a chain, one line per edge in spatial order:
/// `conormal=(p,q) support=c from=(x,y) to=(x,y) class=...`.
pub fn dump_chain(chain: &EdgeChain) -> String {
    let mut out = String::new();
    for e in chain.edges() {
        out.push_str(&format!(
            "conormal=({},{}) support={} from=({},{}) to=({},{}) class={}\n",
            e.conormal.0,
            e.conormal.1,
            format_rational(&e.support),
            format_rational(&e.from.0),
            format_rational(&e.from.1),
            format_rational(&e.to.0),
            format_rational(&e.to.1),
            e.class,
        ));
    }
    out
}
