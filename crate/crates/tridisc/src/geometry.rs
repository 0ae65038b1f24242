//! The symmetrized tridisc: the rational maps Φ and Υ, the norm D(x), the
//! cubic-root membership oracle, and the full family of equivalent open and
//! closed membership criteria with signed margins.
//!
//! Points are triples x = (s₁, s₂, p) of elementary symmetric functions.  The
//! map Φ(z, x) = (3pz − s₁)/(s₂z − 3) degenerates to the constant s₁/3 on the
//! variety 9p = s₁s₂; every routine branches there through a scale-aware
//! detector rather than an exact comparison.

use crate::linalg2::{op_norm, Mat2, Verdict};
use crate::{CScalar, Error, Result};

/// A point of ℂ³ in symmetrized coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymPoint {
    pub s1: CScalar,
    pub s2: CScalar,
    pub p: CScalar,
}

impl SymPoint {
    pub fn new(s1: CScalar, s2: CScalar, p: CScalar) -> Self {
        SymPoint { s1, s2, p }
    }

    pub fn zero() -> Self {
        let z = CScalar::new(0.0, 0.0);
        SymPoint::new(z, z, z)
    }

    /// The coordinate swap (s₂, s₁, p), which exchanges the roles of Φ and Υ.
    pub fn swap(&self) -> SymPoint {
        SymPoint::new(self.s2, self.s1, self.p)
    }

    /// Coordinatewise scaling r·x, the starlike contraction toward the origin.
    pub fn scale(&self, r: f64) -> SymPoint {
        SymPoint::new(self.s1 * r, self.s2 * r, self.p * r)
    }

    pub fn is_finite(&self) -> bool {
        self.s1.is_finite() && self.s2.is_finite() && self.p.is_finite()
    }
}

/// Image of the closed unit disc under Φ(·, x): a disc when |s₂| < 3,
/// unbounded otherwise (center 0 / radius ∞ are placeholders in that case).
#[derive(Debug, Clone, Copy)]
pub struct DiscImage {
    pub center: CScalar,
    pub radius: f64,
    pub bounded: bool,
}

/// The pair (β₁, β₂) solving s₁ = β₁ + β̄₂p, s₂ = β₂ + β̄₁p for |p| < 1.
#[derive(Debug, Clone, Copy)]
pub struct BetaPair {
    pub beta1: CScalar,
    pub beta2: CScalar,
}

/// Root-oracle membership verdict.  The margin is 1 − max|root|; the torus
/// flag marks points whose roots are all unimodular (the distinguished
/// boundary when combined with closed membership).
#[derive(Debug, Clone, Copy)]
pub struct RootVerdict {
    pub member: bool,
    pub margin: f64,
    pub boundary_torus: bool,
}

/// Every membership criterion evaluated as an independent predicate, plus the
/// root oracle, a consensus flag, and a near-boundary flag.
#[derive(Debug, Clone)]
pub struct CriteriaReport {
    pub closed: bool,
    /// Criterion verdicts in fixed order: labels "2", "3", "3p", "4", "4p",
    /// "5", "5p", "6", "7", "8", "9", "10".
    pub criteria: Vec<(&'static str, Verdict)>,
    /// Closed domain only: the mirrored disc-image bound ("4p") re-evaluated
    /// with strict semantics.  The two readings differ exactly on points where
    /// that margin vanishes; it is informational and excluded from consensus.
    pub mirror_disc_strict: Option<Verdict>,
    pub root: RootVerdict,
    pub consensus: bool,
    pub near_boundary: bool,
    /// Headline answer (the root-oracle verdict).
    pub member: bool,
}

/// Scale-aware width of the degenerate branch 9p = s₁s₂.
fn branch_tol(x: &SymPoint) -> f64 {
    1e-12 * (1.0 + (x.s1 * x.s2).norm() + 9.0 * x.p.norm())
}

/// Excess e = s₁s₂ − 9p; the map Φ is constant exactly on e = 0.
pub fn excess(x: &SymPoint) -> CScalar {
    x.s1 * x.s2 - x.p * 9.0
}

/// Whether x lies in the degenerate branch |9p − s₁s₂| ≤ τ(x).
pub fn is_degenerate(x: &SymPoint) -> bool {
    excess(x).norm() <= branch_tol(x)
}

/// Φ(z, x) = (3pz − s₁)/(s₂z − 3), or the constant s₁/3 on the degenerate
/// branch.  Errors when z hits the pole s₂z = 3 off the degenerate branch.
pub fn phi_value(z: CScalar, x: &SymPoint) -> Result<CScalar> {
    if is_degenerate(x) {
        return Ok(x.s1 / 3.0);
    }
    let den = x.s2 * z - 3.0;
    if den.norm() <= 1e-12 * (1.0 + (x.s2 * z).norm()) {
        return Err(Error::Pole(format!("s2*z = 3 at z = {}", z)));
    }
    Ok((x.p * z * 3.0 - x.s1) / den)
}

/// Υ(z, x) = (3pz − s₂)/(s₁z − 3), or the constant s₂/3 on the degenerate
/// branch.  Coincides with Φ(z, ·) after the coordinate swap.
pub fn upsilon_value(z: CScalar, x: &SymPoint) -> Result<CScalar> {
    if is_degenerate(x) {
        return Ok(x.s2 / 3.0);
    }
    let den = x.s1 * z - 3.0;
    if den.norm() <= 1e-12 * (1.0 + (x.s1 * z).norm()) {
        return Err(Error::Pole(format!("s1*z = 3 at z = {}", z)));
    }
    Ok((x.p * z * 3.0 - x.s2) / den)
}

/// The disc Φ(𝔻̄, x): center (3s₁ − 3s̄₂p)/(9 − |s₂|²) and radius
/// |s₁s₂ − 9p|/(9 − |s₂|²) when |s₂| < 3.  The formula is continuous across
/// the degenerate branch, where it collapses to the point s₁/3.
pub fn phi_disc_image(x: &SymPoint) -> DiscImage {
    let s2n = x.s2.norm();
    if s2n < 3.0 {
        let den = 9.0 - s2n * s2n;
        DiscImage {
            center: (x.s1 * 3.0 - x.s2.conj() * x.p * 3.0) / den,
            radius: excess(x).norm() / den,
            bounded: true,
        }
    } else {
        DiscImage {
            center: CScalar::new(0.0, 0.0),
            radius: f64::INFINITY,
            bounded: false,
        }
    }
}

/// D(x) = sup over 𝔻 of |Φ(z, x)|: the three-branch closed form
/// (|3s₁ − 3s̄₂p| + |s₁s₂ − 9p|)/(9 − |s₂|²), or |s₁|/3 on the degenerate
/// branch, or +∞ when |s₂| ≥ 3 off it.
pub fn d_norm(x: &SymPoint) -> f64 {
    if is_degenerate(x) {
        return x.s1.norm() / 3.0;
    }
    let s2n = x.s2.norm();
    if s2n < 3.0 {
        let num = (x.s1 * 3.0 - x.s2.conj() * x.p * 3.0).norm() + excess(x).norm();
        num / (9.0 - s2n * s2n)
    } else {
        f64::INFINITY
    }
}

/// Sup norm of Υ(·, x); equals D of the swapped point.
pub fn upsilon_norm(x: &SymPoint) -> f64 {
    d_norm(&x.swap())
}

/// Elementary symmetric functions of a triple.
pub fn symmetrize(z1: CScalar, z2: CScalar, z3: CScalar) -> SymPoint {
    SymPoint::new(z1 + z2 + z3, z1 * z2 + z2 * z3 + z3 * z1, z1 * z2 * z3)
}

/// Roots of the monic cubic t³ − s₁t² + s₂t − p, by depressed-cubic
/// Cardano/trigonometric branches with a guarded Newton polish.  The triple
/// is unordered; multiplicities appear as repeated values.
pub fn roots(x: &SymPoint) -> [CScalar; 3] {
    let s1 = x.s1;
    let s2 = x.s2;
    let p = x.p;
    let m = s1 / 3.0;
    // Depressed form u³ + P u + Q after t = u + s₁/3.
    let pp = s2 - s1 * s1 / 3.0;
    let qq = s1 * s1 * s1 * (-2.0 / 27.0) + s1 * s2 / 3.0 - p;

    let real_like =
        pp.im.abs() <= 1e-14 * (1.0 + pp.norm()) && qq.im.abs() <= 1e-14 * (1.0 + qq.norm());
    let mut out = [CScalar::new(0.0, 0.0); 3];

    let disc_real = 0.25 * qq.re * qq.re + pp.re * pp.re * pp.re / 27.0;
    if real_like && disc_real < 0.0 {
        // Three distinct real roots of the depressed cubic; the trigonometric
        // form avoids complex cube-root cancellation entirely.
        let sp = (-pp.re / 3.0).sqrt();
        let cos3t = (-0.5 * qq.re / (sp * sp * sp)).clamp(-1.0, 1.0);
        let t0 = cos3t.acos() / 3.0;
        for (k, slot) in out.iter_mut().enumerate() {
            let u = 2.0 * sp * (t0 - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            *slot = m + u;
        }
    } else {
        let delta = qq * qq * 0.25 + pp * pp * pp / 27.0;
        let sq = delta.sqrt();
        let c1 = -qq * 0.5 + sq;
        let c2 = -qq * 0.5 - sq;
        let u3 = if c1.norm() >= c2.norm() { c1 } else { c2 };
        if u3.norm() <= 1e-300 {
            // P = Q = 0: a triple root at the shift point.
            return [m, m, m];
        }
        let u = u3.cbrt();
        let v = -pp / (u * 3.0);
        let om = CScalar::new(-0.5, 0.5 * 3.0_f64.sqrt());
        out[0] = m + u + v;
        out[1] = m + om * u + om.conj() * v;
        out[2] = m + om.conj() * u + om * v;
    }

    // One or two Newton steps per root.  Skipped near critical points of the
    // cubic, where the step is unstable and the closed form is already exact
    // to rounding.
    let f = |t: CScalar| ((t - s1) * t + s2) * t - p;
    let fp = |t: CScalar| (t * 3.0 - s1 * 2.0) * t + s2;
    let coeff_scale = 1.0 + s1.norm() + s2.norm();
    for r in out.iter_mut() {
        for _ in 0..2 {
            let d = fp(*r);
            let local = (1.0 + r.norm()) * (1.0 + r.norm()) * coeff_scale;
            if d.norm() <= 1e-8 * local {
                break;
            }
            let step = f(*r) / d;
            if step.norm() > 0.1 * (1.0 + r.norm()) {
                break;
            }
            *r -= step;
        }
    }
    out
}

/// Membership by the root oracle: all roots inside the open (or closed) unit
/// disc.  Verdicts carry no tolerance; callers wanting a band read the margin.
pub fn membership_via_roots(x: &SymPoint, closed: bool) -> RootVerdict {
    let rs = roots(x);
    let mut max_mod: f64 = 0.0;
    let mut torus = true;
    for r in rs.iter() {
        let n = r.norm();
        max_mod = max_mod.max(n);
        torus &= (n - 1.0).abs() <= 1e-9;
    }
    let margin = 1.0 - max_mod;
    let member = if closed { margin >= 0.0 } else { margin > 0.0 };
    RootVerdict {
        member,
        margin,
        boundary_torus: torus,
    }
}

/// Matrix witness B with π(B) = x.  The symmetric variant uses the principal
/// root k of s₁s₂/9 − p on both off-diagonal slots; the general variant
/// splits it as (|k|, k²/|k|), which leaves every entry modulus and the
/// determinant, hence the operator norm, unchanged.
pub fn matrix_from_point(x: &SymPoint, symmetric: bool) -> Mat2 {
    let k2 = x.s1 * x.s2 / 9.0 - x.p;
    let k = k2.sqrt();
    let (b, c) = if symmetric {
        (k, k)
    } else if k.norm() == 0.0 {
        (CScalar::new(0.0, 0.0), CScalar::new(0.0, 0.0))
    } else {
        (CScalar::new(k.norm(), 0.0), k2 / k.norm())
    };
    Mat2::new(x.s1 / 3.0, b, c, x.s2 / 3.0)
}

/// π(B) = (3b₁₁, 3b₂₂, det B).
pub fn pi_map(b: &Mat2) -> SymPoint {
    SymPoint::new(b.b11 * 3.0, b.b22 * 3.0, b.det())
}

/// β₁ = (s₁ − s̄₂p)/(1 − |p|²) and β₂ = (s₂ − s̄₁p)/(1 − |p|²), for |p| < 1.
pub fn beta_pair(x: &SymPoint) -> Result<BetaPair> {
    let pn = x.p.norm();
    if pn >= 1.0 {
        return Err(Error::OutOfRange(format!("|p| = {} is not < 1", pn)));
    }
    let den = 1.0 - pn * pn;
    Ok(BetaPair {
        beta1: (x.s1 - x.s2.conj() * x.p) / den,
        beta2: (x.s2 - x.s1.conj() * x.p) / den,
    })
}

/// The reflection x̃ = (s₁, 3p̄, s̄₂/3), which preserves membership.
pub fn tilde_symmetry(x: &SymPoint) -> SymPoint {
    SymPoint::new(x.s1, x.p.conj() * 3.0, x.s2.conj() / 3.0)
}

/// Signed margin for the no-zero condition on 3 − s₁z − s₂w + 3pzw over the
/// bidisc: min over |z| ≤ 1 of |3 − s₁z| − |s₂ − 3pz|.  On the degenerate
/// branch the expression factors and the margin reduces to coordinate bounds.
/// Off it, |3 − s₁z| can only vanish at z₀ = 3/s₁, which is appended as a
/// candidate when it lies in the closed disc; elsewhere the quotient
/// (s₂ − 3pz)/(3 − s₁z) attains its maximum modulus on the circle, so the
/// boundary scan decides the sign correctly.
fn margin_no_zero(x: &SymPoint) -> f64 {
    if is_degenerate(x) {
        return (3.0 - x.s1.norm()).min(3.0 - x.s2.norm());
    }
    let g = |theta: f64| -> f64 {
        let z = CScalar::from_polar(1.0, theta);
        (3.0 - x.s1 * z).norm() - (x.s2 - x.p * z * 3.0).norm()
    };
    let coarse = 512usize;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut best = f64::INFINITY;
    let mut best_theta = 0.0;
    for k in 0..coarse {
        let th = two_pi * k as f64 / coarse as f64;
        let v = g(th);
        if v < best {
            best = v;
            best_theta = th;
        }
    }
    // Local re-gridding around the argmin; five rounds shrink the bracket by
    // 16x each, far below the curvature scale of g.
    let mut lo = best_theta - two_pi / coarse as f64;
    let mut hi = best_theta + two_pi / coarse as f64;
    for _ in 0..5 {
        let n = 32usize;
        let step = (hi - lo) / n as f64;
        let mut j_best = 0usize;
        let mut v_best = f64::INFINITY;
        for j in 0..=n {
            let v = g(lo + step * j as f64);
            if v < v_best {
                v_best = v;
                j_best = j;
            }
        }
        best = best.min(v_best);
        let center = lo + step * j_best as f64;
        lo = center - step;
        hi = center + step;
    }
    if x.s1.norm() >= 3.0 {
        let z0 = CScalar::new(3.0, 0.0) / x.s1;
        best = best.min(-(x.s2 - x.p * z0 * 3.0).norm());
    }
    best
}

/// Margin for ‖Φ(·, x)‖∞ ≤ 1 (with the coordinate side bound on the
/// degenerate branch); −∞ encodes an unbounded Φ.
fn margin_phi_schur(x: &SymPoint) -> f64 {
    if is_degenerate(x) {
        return (1.0 - x.s1.norm() / 3.0).min(1.0 - x.s2.norm() / 3.0);
    }
    let d = d_norm(x);
    if d.is_finite() {
        1.0 - d
    } else {
        f64::NEG_INFINITY
    }
}

/// Margin for the disc-image bound |3s₁ − 3s̄₂p| + |s₁s₂ − 9p| ≤ 9 − |s₂|².
/// The closed domain adds |s₁| ≤ 3 on the degenerate branch, where the main
/// expression degenerates to a multiple of 9 − |s₂|².
fn margin_disc_bound(x: &SymPoint, closed: bool) -> f64 {
    let s2n = x.s2.norm();
    let main = 9.0 - s2n * s2n - (x.s1 * 3.0 - x.s2.conj() * x.p * 3.0).norm() - excess(x).norm();
    if closed && is_degenerate(x) {
        main.min(3.0 - x.s1.norm())
    } else {
        main
    }
}

/// Margin for |s₁|² − |s₂|² + 9|p|² + 6|s₂ − s̄₁p| ≤ 9 with |s₂| ≤ 3.
fn margin_flat_bound(x: &SymPoint) -> f64 {
    let main = 9.0
        - (x.s1.norm_sqr() - x.s2.norm_sqr()
            + 9.0 * x.p.norm_sqr()
            + 6.0 * (x.s2 - x.s1.conj() * x.p).norm());
    main.min(3.0 - x.s2.norm())
}

/// Margin for |s₁|² + |s₂|² − 9|p|² + 2|s₁s₂ − 9p| ≤ 9 with |p| ≤ 1.
fn margin_symmetric_bound(x: &SymPoint) -> f64 {
    let main =
        9.0 - (x.s1.norm_sqr() + x.s2.norm_sqr() - 9.0 * x.p.norm_sqr() + 2.0 * excess(x).norm());
    main.min(1.0 - x.p.norm())
}

/// Margin for |s₁ − s̄₂p| + |s₂ − s̄₁p| ≤ 3 − 3|p|².  On the closed domain the
/// unimodular-p edge carries the extra bound |s₁| ≤ 3.
fn margin_pair_bound(x: &SymPoint, closed: bool) -> f64 {
    let pn = x.p.norm();
    let main =
        3.0 - 3.0 * pn * pn - (x.s1 - x.s2.conj() * x.p).norm() - (x.s2 - x.s1.conj() * x.p).norm();
    if closed && pn >= 1.0 - 1e-12 {
        main.min(3.0 - x.s1.norm())
    } else {
        main
    }
}

/// Margin for the β-decomposition: |p| ≤ 1 with a solution of
/// s₁ = β₁ + β̄₂p, s₂ = β₂ + β̄₁p satisfying |β₁| + |β₂| ≤ 3.  Inside |p| < 1
/// the solution is unique; on the unimodular edge solvability forces
/// s₁ = s̄₂p, the minimal decomposition being (0, s₂).
fn margin_beta_bound(x: &SymPoint) -> f64 {
    let pn = x.p.norm();
    if 1.0 - pn >= 1e-12 {
        let b = beta_pair(x).expect("|p| < 1 in beta branch");
        (3.0 - b.beta1.norm() - b.beta2.norm()).min(3.0 * (1.0 - pn))
    } else {
        let incompat = (x.s1 - x.s2.conj() * x.p).norm();
        (3.0 - x.s2.norm()).min(-incompat).min(3.0 * (1.0 - pn))
    }
}

/// All membership criteria with signed margins opposite the root oracle.
/// Verdicts are tolerance-free (strict > 0 for the open domain, ≥ 0 for the
/// closed one); `tol` only feeds the near-boundary flag.
pub fn criteria_report(x: &SymPoint, closed: bool, tol: f64) -> CriteriaReport {
    let verdict = |margin: f64| Verdict {
        holds: if closed { margin >= 0.0 } else { margin > 0.0 },
        margin,
    };
    let b_gen = matrix_from_point(x, false);
    let b_sym = matrix_from_point(x, true);
    let criteria: Vec<(&'static str, Verdict)> = vec![
        ("2", verdict(margin_no_zero(x))),
        ("3", verdict(margin_phi_schur(x))),
        ("3p", verdict(margin_phi_schur(&x.swap()))),
        ("4", verdict(margin_disc_bound(x, closed))),
        ("4p", verdict(margin_disc_bound(&x.swap(), closed))),
        ("5", verdict(margin_flat_bound(x))),
        ("5p", verdict(margin_flat_bound(&x.swap()))),
        ("6", verdict(margin_symmetric_bound(x))),
        ("7", verdict(margin_pair_bound(x, closed))),
        ("8", verdict(1.0 - op_norm(&b_gen))),
        ("9", verdict(1.0 - op_norm(&b_sym))),
        ("10", verdict(margin_beta_bound(x))),
    ];
    let mirror_disc_strict = if closed {
        let m = margin_disc_bound(&x.swap(), closed);
        Some(Verdict {
            holds: m > 0.0,
            margin: m,
        })
    } else {
        None
    };
    let root = membership_via_roots(x, closed);
    let consensus = criteria.iter().all(|(_, v)| v.holds == root.member);
    let near_boundary = criteria
        .iter()
        .map(|(_, v)| v.margin)
        .chain(std::iter::once(root.margin))
        .any(|m| m.is_finite() && m.abs() < tol);
    CriteriaReport {
        closed,
        criteria,
        mirror_disc_strict,
        root,
        consensus,
        near_boundary,
        member: root.member,
    }
}
