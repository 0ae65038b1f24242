//! Schwarz-lemma feasibility: when does an analytic map 𝔻 → Γ₃-witness
//! domain exist with φ(0) = 0 and φ(λ₀) = x?  The answer is governed by the
//! two fractional-map quotients D_Φ and D_Υ; feasibility is the inequality
//! max(D_Φ, D_Υ) ≤ |λ₀|, with the equality case flagged separately because
//! the construction switches algorithms there.

use crate::geometry::{d_norm, is_degenerate, upsilon_norm, SymPoint};
use crate::{CScalar, Error, Result};

/// Absolute tolerance on the feasibility comparison.
pub const FEAS_TOL: f64 = 1e-9;

/// Which coordinate dominates: the condition-by-cases feasibility test reads
/// only the quotient of the larger of |s₁|, |s₂|.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominantBranch {
    S1,
    S2,
}

#[derive(Debug, Clone, Copy)]
pub struct FeasibilityReport {
    pub d_phi: f64,
    pub d_upsilon: f64,
    /// max(d_phi, d_upsilon).
    pub bound: f64,
    pub lambda0_abs: f64,
    pub feasible: bool,
    /// |bound − |λ₀|| ≤ tol: the extremal case, handled by a regularized
    /// construction downstream.
    pub equality_case: bool,
    pub dominant_branch: DominantBranch,
}

/// Both fractional maps must be strict contractions for the witness-matrix
/// machinery to apply; this is the domain gate shared by the feasibility and
/// construction entry points.  The gate is deliberately NOT the cubic-root
/// membership test: the interpolation theory operates on the matrix-witness
/// domain, which strictly contains the symmetrized tridisc.
pub fn in_construction_domain(x: &SymPoint) -> bool {
    if !x.is_finite() {
        return false;
    }
    if is_degenerate(x) {
        x.s1.norm() < 3.0 && x.s2.norm() < 3.0
    } else {
        let d = d_norm(x);
        let u = upsilon_norm(x);
        d.is_finite() && u.is_finite() && d < 1.0 && u < 1.0
    }
}

fn domain_gate(x: &SymPoint) -> Result<()> {
    if in_construction_domain(x) {
        Ok(())
    } else {
        Err(Error::OutsideDomain(format!(
            "the fractional-map norms must be < 1; got D = {}, D-swap = {}",
            d_norm(x),
            upsilon_norm(x)
        )))
    }
}

/// max(D_Φ(x), D_Υ(x)), the sharp obstruction to interpolation from 0.
pub fn schwarz_bound(x: &SymPoint) -> Result<f64> {
    domain_gate(x)?;
    Ok(d_norm(x).max(upsilon_norm(x)))
}

/// Feasibility of the two-point problem φ(0) = 0, φ(λ₀) = x.
pub fn schwarz_feasible(lambda0: CScalar, x: &SymPoint) -> Result<FeasibilityReport> {
    let la = lambda0.norm();
    if !(la > 0.0 && la < 1.0) {
        return Err(Error::OutOfRange(format!(
            "|lambda0| = {} is not in (0, 1)",
            la
        )));
    }
    domain_gate(x)?;
    let d_phi = d_norm(x);
    let d_upsilon = upsilon_norm(x);
    let bound = d_phi.max(d_upsilon);
    Ok(FeasibilityReport {
        d_phi,
        d_upsilon,
        bound,
        lambda0_abs: la,
        feasible: bound <= la + FEAS_TOL,
        equality_case: (bound - la).abs() <= FEAS_TOL,
        dominant_branch: if x.s1.norm() >= x.s2.norm() {
            DominantBranch::S1
        } else {
            DominantBranch::S2
        },
    })
}

/// d_phi − d_upsilon for |s₂| ≤ |s₁|; nonnegative up to rounding, so the
/// dominant-branch quotient alone decides feasibility.
pub fn corollary_ordering(x: &SymPoint) -> Result<f64> {
    domain_gate(x)?;
    if x.s2.norm() > x.s1.norm() {
        return Err(Error::OutOfRange(format!(
            "requires |s2| <= |s1|; got {} > {}",
            x.s2.norm(),
            x.s1.norm()
        )));
    }
    Ok(d_norm(x) - upsilon_norm(x))
}

/// Infinitesimal bound max{|φ₁′(0)|/3, |φ₂′(0)|/3} + |φ₃′(0)| for a map
/// vanishing at 0.  Derivatives are Cauchy-integral means over 32 nodes on
/// the circle |λ| = 1/2: exact for polynomials of degree ≤ 31, error
/// O(r^{N−1}) for analytic maps, no step-size tuning.
pub fn derivative_bound<F>(phi: F) -> Result<f64>
where
    F: Fn(CScalar) -> Result<SymPoint>,
{
    let at0 = phi(CScalar::new(0.0, 0.0))?;
    let size0 = at0.s1.norm().max(at0.s2.norm()).max(at0.p.norm());
    if size0 > 1e-8 {
        return Err(Error::OutOfRange(format!(
            "the map must vanish at 0; |phi(0)| = {}",
            size0
        )));
    }
    let n = 32usize;
    let r = 0.5;
    let mut d = [CScalar::new(0.0, 0.0); 3];
    for k in 0..n {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let lam = CScalar::from_polar(r, theta);
        let v = phi(lam)?;
        let weight = CScalar::from_polar(1.0 / (n as f64 * r), -theta);
        d[0] += v.s1 * weight;
        d[1] += v.s2 * weight;
        d[2] += v.p * weight;
    }
    Ok((d[0].norm() / 3.0).max(d[1].norm() / 3.0) + d[2].norm())
}
