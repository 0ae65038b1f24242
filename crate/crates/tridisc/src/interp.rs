//! Explicit construction of analytic interpolants φ: 𝔻 → Γ₃ witnesses with
//! φ(0) = (0,0,0) and φ(λ₀) = x.  The machinery: a matricial Möbius
//! base-change 𝓜_Z, the base matrix Z(σ) whose norm is controlled by the
//! scalar quantities Y₂, ξ₁, ξ₂, a Hermitian pencil M(ρ) selecting admissible
//! directions α, a constant rank-one Schur parameter Q, and the assembled map
//! F(λ) = 𝓜₋Z(B(λ)Q)·diag(λ, 1), φ = π∘F.

use crate::geometry::{excess, is_degenerate, pi_map, SymPoint};
use crate::linalg2::{herm_eig, inv_sqrt_psd, is_contraction, op_norm, sqrt_psd, Mat2, Vec2};
use crate::schwarz::schwarz_feasible;
use crate::{CScalar, Error, Result};

/// Step size of the extremal-case regularization λ_ε = λ₀(1 + ε)².
pub const EPS_REG: f64 = 1e-6;

/// Endpoint tolerance of the generic and diagonal constructions.
pub const ENDPOINT_TOL: f64 = 1e-10;

/// Endpoint tolerance of the regularized extremal construction.
pub const ENDPOINT_TOL_EQ: f64 = 1e-4;

fn cr(v: f64) -> CScalar {
    CScalar::new(v, 0.0)
}

fn strict_contraction_gate(z: &Mat2, what: &str) -> Result<()> {
    let verdict = is_contraction(z, true, 0.0);
    if verdict.holds {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "{} needs ||Z|| < 1; 1 - ||Z|| = {:.3e}",
            what, verdict.margin
        )))
    }
}

/// Matrix Möbius transform 𝓜_Z(X) = (1−ZZ*)^{−1/2}(X−Z)(1−Z*X)^{−1}(1−Z*Z)^{1/2}.
/// Maps the closed matrix Schur class into itself and sends Z to 0.
pub fn mobius(z: &Mat2, x: &Mat2) -> Result<Mat2> {
    strict_contraction_gate(z, "mobius")?;
    let i = Mat2::identity();
    let zs = z.adjoint();
    let left = inv_sqrt_psd(&(i - *z * zs))?;
    let right = sqrt_psd(&(i - zs * *z))?;
    let mid = (i - zs * *x)
        .inverse()
        .map_err(|_| Error::Pole("1 - Z*X is singular".into()))?;
    Ok(left * (*x - *z) * mid * right)
}

/// B(λ) = (λ₀ − λ)/(1 − λ̄₀λ): the disc automorphism with B(λ₀) = 0 and
/// B(0) = λ₀.
pub fn blaschke(lambda0: CScalar, lam: CScalar) -> CScalar {
    (lambda0 - lam) / (cr(1.0) - lambda0.conj() * lam)
}

/// The Hermitian pencil value M(ρ).  Its transpose quadratic form equals
/// ‖v(α)‖² − ρ²‖u(α)‖², so directions α with nonpositive form give Schur
/// parameters of norm at most 1.
pub fn m_rho(z: &Mat2, rho: f64) -> Result<Mat2> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::OutOfRange(format!("rho = {} is not in [0, 1)", rho)));
    }
    strict_contraction_gate(z, "m_rho")?;
    let i = Mat2::identity();
    let zs = z.adjoint();
    let gram_r = (i - zs * *z).inverse()?;
    let gram_l = (i - *z * zs).inverse()?;
    let shrink = cr(1.0 - rho * rho);
    let m11 = ((i - (zs * *z).scale(cr(rho * rho))) * gram_r).b11;
    let m12 = (gram_l * *z).scale(shrink).b21;
    let m21 = (zs * gram_l).scale(shrink).b12;
    let m22 = ((*z * zs - i.scale(cr(rho * rho))) * gram_l).b22;
    Ok(Mat2::new(m11, m12, m21, m22))
}

/// The rank-one reduction vectors u(α) = (1−ZZ*)^{−1/2}(α₁Ze₁ + α₂e₂) and
/// v(α) = −(1−Z*Z)^{−1/2}(α₁e₁ + α₂Z*e₂).  Any X with X*u = v zeroes the
/// (2,2) corner of 𝓜₋Z(X).
pub fn uv_vectors(z: &Mat2, alpha: &Vec2) -> Result<(Vec2, Vec2)> {
    if alpha.norm_sq() == 0.0 {
        return Err(Error::OutOfRange("alpha must be nonzero".into()));
    }
    strict_contraction_gate(z, "uv_vectors")?;
    let i = Mat2::identity();
    let zs = z.adjoint();
    let isl = inv_sqrt_psd(&(i - *z * zs))?;
    let isr = inv_sqrt_psd(&(i - zs * *z))?;
    let ze1 = z.mul_vec(&Vec2::e1());
    let u_arg = Vec2::new(alpha.a1 * ze1.a1, alpha.a1 * ze1.a2 + alpha.a2);
    let zse2 = zs.mul_vec(&Vec2::e2());
    let v_arg = Vec2::new(alpha.a1 + alpha.a2 * zse2.a1, alpha.a2 * zse2.a2);
    Ok((isl.mul_vec(&u_arg), isr.mul_vec(&v_arg).scale(cr(-1.0))))
}

/// Minimal solution of the corner constraint X*u(α) = v(α) with ‖X‖ ≤ ρ:
/// zero when [Z]₂₂ already vanishes, the rank-one u v*/‖u‖² otherwise.
pub fn solve_x(z: &Mat2, rho: f64, alpha: &Vec2) -> Result<Mat2> {
    let (u, v) = uv_vectors(z, alpha)?;
    let slack = v.norm_sq() - rho * rho * u.norm_sq();
    if slack > 1e-10 * (1.0 + u.norm_sq()) {
        return Err(Error::OutOfRange(format!(
            "alpha is inadmissible: ||v||^2 - rho^2 ||u||^2 = {:.3e} > 0",
            slack
        )));
    }
    if z.b22.norm() <= 1e-14 * (1.0 + z.frob_norm()) {
        return Ok(Mat2::zero());
    }
    if u.norm_sq() <= 1e-28 {
        return Err(Error::OutOfRange(
            "u(alpha) vanishes; no rank-one solution".into(),
        ));
    }
    Ok(Mat2::outer(&u, &v).scale(cr(1.0 / u.norm_sq())))
}

/// Base matrix Z(σ) = [[s₁/(3λ₀), σw], [w/σ, s₂/3]] with w the principal
/// square root of (s₁s₂ − 9p)/(9λ₀).
pub fn build_z(x: &SymPoint, lambda0: CScalar, sigma: f64) -> Result<Mat2> {
    if lambda0.norm() == 0.0 {
        return Err(Error::OutOfRange("lambda0 must be nonzero".into()));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::OutOfRange(format!(
            "sigma = {} must be a positive real",
            sigma
        )));
    }
    if is_degenerate(x) {
        return Err(Error::OutOfRange(
            "s1*s2 - 9p vanishes; the diagonal construction applies instead".into(),
        ));
    }
    let w = (excess(x) / (lambda0 * 9.0)).sqrt();
    Ok(Mat2::new(
        x.s1 / (lambda0 * 3.0),
        w * sigma,
        w / sigma,
        x.s2 / 3.0,
    ))
}

/// Scalar data controlling the norm of Z(σ) and the admissible σ interval.
#[derive(Debug, Clone, Copy)]
pub struct InterpolationQuantities {
    /// Principal square root of (s₁s₂ − 9p)/(9λ₀).
    pub w: CScalar,
    /// Y₁ = (|λ₀|/|e|)(9 − |s₁|² − |s₂|²/|λ₀|² + 9|p|²/|λ₀|²).
    pub big_y1: f64,
    /// Y₂ = (|λ₀|/|e|)(9 − |s₁|²/|λ₀|² − |s₂|² + 9|p|²/|λ₀|²).  Exceeds 2
    /// exactly when the quotient D is strictly below |λ₀|.
    pub big_y2: f64,
    /// K = |λ₀|(9 − |s₂|²)/|e|; always above ξ₂ by the reciprocal-sum gap.
    pub k: f64,
    /// ξ₁ = 1/ξ₂, the lower root of ξ + 1/ξ = Y₂.
    pub xi1: f64,
    /// ξ₂, the upper root of ξ + 1/ξ = Y₂; ‖Z(σ)‖ < 1 iff ξ₁ < σ² < ξ₂.
    pub xi2: f64,
    /// y = (|e|/9)(σ² + 1/σ²); the pencil determinant factors through y.
    pub y: f64,
    /// y₁ = (|e|/9)·Y₁.
    pub y1: f64,
    /// y₂ = (|e|/9)·Y₂; y < y₂ ≤ y₁ on the admissible interval, forcing
    /// det M(|λ₀|) < 0.
    pub y2: f64,
    pub sigma: f64,
}

/// Compute the construction quantities at (x, λ₀, σ).  Errors when the data
/// leave no open σ interval (Y₂ ≤ 2) or fall on the degenerate branch.
pub fn quantities(x: &SymPoint, lambda0: CScalar, sigma: f64) -> Result<InterpolationQuantities> {
    let la = lambda0.norm();
    if !(la > 0.0 && la < 1.0) {
        return Err(Error::OutOfRange(format!(
            "|lambda0| = {} is not in (0, 1)",
            la
        )));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::OutOfRange(format!(
            "sigma = {} must be a positive real",
            sigma
        )));
    }
    if is_degenerate(x) {
        return Err(Error::OutOfRange(
            "s1*s2 - 9p vanishes; the diagonal construction applies instead".into(),
        ));
    }
    if !crate::schwarz::in_construction_domain(x) {
        return Err(Error::OutsideDomain(
            "the fractional-map norms must be < 1".into(),
        ));
    }
    let ea = excess(x).norm();
    let (n1, n2, np) = (x.s1.norm_sqr(), x.s2.norm_sqr(), x.p.norm_sqr());
    let big_y1 = (la / ea) * (9.0 - n1 - n2 / (la * la) + 9.0 * np / (la * la));
    let big_y2 = (la / ea) * (9.0 - n1 / (la * la) - n2 + 9.0 * np / (la * la));
    if big_y2 <= 2.0 {
        return Err(Error::Infeasible(format!(
            "Y2 = {} <= 2: the bound is not strictly below |lambda0|, no open sigma interval",
            big_y2
        )));
    }
    let xi2 = 0.5 * (big_y2 + (big_y2 * big_y2 - 4.0).sqrt());
    let scale = ea / 9.0;
    Ok(InterpolationQuantities {
        w: (excess(x) / (lambda0 * 9.0)).sqrt(),
        big_y1,
        big_y2,
        k: la * (9.0 - n2) / ea,
        xi1: 1.0 / xi2,
        xi2,
        y: scale * (sigma * sigma + 1.0 / (sigma * sigma)),
        y1: scale * big_y1,
        y2: scale * big_y2,
        sigma,
    })
}

/// Unit eigenvector of the minimal eigenvalue: the admissible direction with
/// the largest margin.  Errors when the pencil is positive definite.
pub fn choose_alpha(m: &Mat2) -> Result<Vec2> {
    let eig = herm_eig(m)?;
    if eig.lambda_min > 1e-9 {
        return Err(Error::Infeasible(format!(
            "the pencil is positive definite (lambda_min = {:.3e}); no admissible direction",
            eig.lambda_min
        )));
    }
    Ok(eig.v_min)
}

/// Constant rank-one Schur parameter Q = u(α)v(α)*/(λ₀‖u(α)‖²).  Satisfies
/// Q*·λ̄₀·u = v exactly; ‖Q‖ = ‖v‖/(|λ₀|‖u‖) must not exceed 1.
pub fn build_q(z: &Mat2, alpha: &Vec2, lambda0: CScalar) -> Result<Mat2> {
    if lambda0.norm() == 0.0 {
        return Err(Error::OutOfRange("lambda0 must be nonzero".into()));
    }
    let (u, v) = uv_vectors(z, alpha)?;
    if u.norm_sq() <= 1e-28 {
        return Err(Error::OutOfRange("u(alpha) vanishes".into()));
    }
    let q = Mat2::outer(&u, &v).scale(cr(1.0) / (lambda0 * u.norm_sq()));
    let qn = op_norm(&q);
    if qn > 1.0 + 1e-9 {
        return Err(Error::Infeasible(format!(
            "||Q|| = {} > 1: the direction alpha is inadmissible at this lambda0",
            qn
        )));
    }
    Ok(q)
}

/// Which construction produced an interpolant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// Strict inequality: the Möbius construction at the given σ.
    Generic,
    /// 9p = s₁s₂: the diagonal linear construction.
    Degenerate9p,
    /// Equality within tolerance: the Möbius construction at λ₀(1+ε)².
    EqualityRegularized,
    /// The fixed worked family with free Schur parameter t.
    NonuniqueFamily,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Generic => "generic",
            CaseTag::Degenerate9p => "degenerate-9p",
            CaseTag::EqualityRegularized => "equality-regularized",
            CaseTag::NonuniqueFamily => "nonunique-family",
        }
    }

    pub fn parse(s: &str) -> Result<CaseTag> {
        match s {
            "generic" => Ok(CaseTag::Generic),
            "degenerate-9p" => Ok(CaseTag::Degenerate9p),
            "equality-regularized" => Ok(CaseTag::EqualityRegularized),
            "nonunique-family" => Ok(CaseTag::NonuniqueFamily),
            other => Err(Error::Parse(format!("unknown case tag {:?}", other))),
        }
    }
}

/// Complete serializable description of a constructed interpolant.
#[derive(Debug, Clone)]
pub struct InterpolantParams {
    pub case: CaseTag,
    pub lambda0: CScalar,
    pub x: SymPoint,
    pub sigma: f64,
    pub alpha: Option<Vec2>,
    pub q: Option<Mat2>,
    pub eps_reg: f64,
    pub t: Option<CScalar>,
}

/// An analytic map φ: 𝔻 → Γ₃ witnesses with φ(0) = (0,0,0) and φ(λ₀) = x
/// within the case's endpoint tolerance.  Values are immutable; evaluation
/// is pure and may run concurrently.
#[derive(Debug, Clone)]
pub struct Interpolant {
    pub params: InterpolantParams,
    z: Option<Mat2>,
    swapped: bool,
    lambda_eff: CScalar,
}

fn family_target() -> (SymPoint, CScalar) {
    (SymPoint::new(cr(1.5), cr(0.75), cr(0.5)), cr(-0.8))
}

fn family_f(t: CScalar, lam: CScalar) -> Result<Mat2> {
    // Unitary diagonalizer of [[-5/8, w], [w, 1/4]], w² = 15/32: columns are
    // the eigenvectors for -1 and 5/8.
    let w = (15.0f64 / 32.0).sqrt();
    let r39 = 39.0f64.sqrt();
    let r65 = 65.0f64.sqrt();
    let rt2 = 2.0f64.sqrt();
    let u = Mat2::new(
        cr(8.0 * w / r39),
        cr(4.0 * rt2 * w / r65),
        cr(-3.0 / r39),
        cr(5.0 * rt2 / r65),
    );
    let (_, lambda0) = family_target();
    let g = scalar_two_point(cr(0.3), lambda0, cr(0.625), t)?;
    let h = u * Mat2::diag(cr(-1.0), g.eval(lam)) * u.adjoint();
    Ok(h * Mat2::diag(lam, cr(1.0)))
}

impl Interpolant {
    /// Evaluate at λ ∈ 𝔻, returning both the symmetrized value φ(λ) and the
    /// matrix witness F(λ).
    pub fn eval(&self, lam: CScalar) -> Result<(SymPoint, Mat2)> {
        if !(lam.norm() < 1.0) {
            return Err(Error::OutOfRange(format!(
                "|lambda| = {} is not < 1",
                lam.norm()
            )));
        }
        let f = match self.params.case {
            CaseTag::Degenerate9p => {
                let s = lam / (self.params.lambda0 * 3.0);
                Mat2::diag(self.params.x.s1 * s, self.params.x.s2 * s)
            }
            CaseTag::NonuniqueFamily => {
                let t = self.params.t.expect("family interpolants carry t");
                family_f(t, lam)?
            }
            CaseTag::Generic | CaseTag::EqualityRegularized => {
                let z = self.z.expect("Moebius interpolants carry Z");
                let q = self.params.q.expect("Moebius interpolants carry Q");
                let g = mobius(&-z, &q.scale(blaschke(self.lambda_eff, lam)))?;
                if self.swapped {
                    // Conjugating by the coordinate swap exchanges the two
                    // diagonal targets while keeping the determinant.
                    let j = Mat2::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0));
                    (j * g * j) * Mat2::diag(cr(1.0), lam)
                } else {
                    g * Mat2::diag(lam, cr(1.0))
                }
            }
        };
        Ok((pi_map(&f), f))
    }
}

/// Free-function form of [`Interpolant::eval`].
pub fn eval_interpolant(phi: &Interpolant, lam: CScalar) -> Result<(SymPoint, Mat2)> {
    phi.eval(lam)
}

fn assemble(
    case: CaseTag,
    x: &SymPoint,
    lambda0: CScalar,
    eps_reg: f64,
    sigma_opt: Option<f64>,
    alpha_opt: Option<Vec2>,
    q_opt: Option<Mat2>,
) -> Result<Interpolant> {
    let lambda_eff = lambda0 * ((1.0 + eps_reg) * (1.0 + eps_reg));
    if lambda_eff.norm() >= 1.0 {
        return Err(Error::OutOfRange(
            "lambda0 is too close to the unit circle for the regularized step".into(),
        ));
    }
    // The matrix construction assumes |s2| <= |s1|; otherwise build on the
    // swapped target and conjugate at evaluation time.
    let swapped = x.s2.norm() > x.s1.norm();
    let x_eff = if swapped { x.swap() } else { *x };
    let sigma = sigma_opt.unwrap_or(1.0);
    let qty = quantities(&x_eff, lambda_eff, sigma)?;
    if let Some(s) = sigma_opt {
        let s2 = s * s;
        if !(qty.xi1 < s2 && s2 < qty.xi2) {
            return Err(Error::OutOfRange(format!(
                "sigma^2 = {} lies outside the admissible interval ({}, {})",
                s2, qty.xi1, qty.xi2
            )));
        }
    }
    let z = build_z(&x_eff, lambda_eff, sigma)?;
    let rho = lambda_eff.norm();
    let alpha = match alpha_opt {
        Some(a) => {
            let (u, v) = uv_vectors(&z, &a)?;
            let slack = v.norm_sq() - rho * rho * u.norm_sq();
            if slack > 1e-9 * (1.0 + u.norm_sq()) {
                return Err(Error::OutOfRange(format!(
                    "alpha is inadmissible: ||v||^2 - rho^2 ||u||^2 = {:.3e} > 0",
                    slack
                )));
            }
            a
        }
        // The admissibility form is the transpose quadratic form of the
        // pencil; conjugating the minimal eigenvector carries one form onto
        // the other, so this direction attains the minimal value exactly.
        None => choose_alpha(&m_rho(&z, rho)?)?.conj(),
    };
    let q = match q_opt {
        Some(qm) => {
            let qn = op_norm(&qm);
            if qn > 1.0 + 1e-9 {
                return Err(Error::OutOfRange(format!("||Q|| = {} > 1", qn)));
            }
            let (u, v) = uv_vectors(&z, &alpha)?;
            let residual = qm
                .adjoint()
                .mul_vec(&u)
                .scale(lambda_eff.conj())
                .sub(&v)
                .norm();
            if residual > 1e-8 * (1.0 + v.norm()) {
                return Err(Error::OutOfRange(format!(
                    "Q violates the corner constraint: residual {:.3e}",
                    residual
                )));
            }
            qm
        }
        None => build_q(&z, &alpha, lambda_eff)?,
    };
    Ok(Interpolant {
        params: InterpolantParams {
            case,
            lambda0,
            x: *x,
            sigma,
            alpha: Some(alpha),
            q: Some(q),
            eps_reg,
            t: None,
        },
        z: Some(z),
        swapped,
        lambda_eff,
    })
}

/// Construct an interpolant for φ(0) = 0, φ(λ₀) = x.  Dispatches on the
/// data: diagonal linear maps on the degenerate branch, the Möbius
/// construction when the bound is strictly beaten, and a regularized step at
/// λ₀(1+ε)² in the extremal case.  Optional σ, α, Q override the defaults
/// after validation.
pub fn build_interpolant(
    x: &SymPoint,
    lambda0: CScalar,
    sigma: Option<f64>,
    alpha: Option<Vec2>,
    q: Option<Mat2>,
) -> Result<Interpolant> {
    let rep = schwarz_feasible(lambda0, x)?;
    if !rep.feasible {
        return Err(Error::Infeasible(format!(
            "the two-point bound {} exceeds |lambda0| = {}",
            rep.bound, rep.lambda0_abs
        )));
    }
    if is_degenerate(x) {
        if sigma.is_some() || alpha.is_some() || q.is_some() {
            return Err(Error::OutOfRange(
                "the diagonal construction has no sigma, alpha, or Q parameters".into(),
            ));
        }
        return Ok(Interpolant {
            params: InterpolantParams {
                case: CaseTag::Degenerate9p,
                lambda0,
                x: *x,
                sigma: 1.0,
                alpha: None,
                q: None,
                eps_reg: 0.0,
                t: None,
            },
            z: None,
            swapped: false,
            lambda_eff: lambda0,
        });
    }
    if rep.equality_case {
        assemble(
            CaseTag::EqualityRegularized,
            x,
            lambda0,
            EPS_REG,
            sigma,
            alpha,
            q,
        )
    } else {
        assemble(CaseTag::Generic, x, lambda0, 0.0, sigma, alpha, q)
    }
}

/// The one-parameter family of interpolants through the fixed worked datum
/// ((3/2, 3/4, 1/2), λ₀ = −4/5): F(λ) = U·diag(−1, g_t(λ))·U*·diag(λ, 1)
/// with g_t a two-point scalar Schur interpolant.  Distinct |t| < 1 share
/// both endpoints yet disagree inside the disc.
pub fn section4_family(t: CScalar) -> Result<Interpolant> {
    if t.norm() > 1.0 + 1e-12 {
        return Err(Error::OutOfRange(format!("|t| = {} exceeds 1", t.norm())));
    }
    let (x, lambda0) = family_target();
    Ok(Interpolant {
        params: InterpolantParams {
            case: CaseTag::NonuniqueFamily,
            lambda0,
            x,
            sigma: 1.0,
            alpha: None,
            q: None,
            eps_reg: 0.0,
            t: Some(t),
        },
        z: None,
        swapped: false,
        lambda_eff: lambda0,
    })
}

/// A scalar Schur-class function with prescribed values at 0 and λ₀ and a
/// free Schur constant t.
#[derive(Debug, Clone, Copy)]
pub struct ScalarSchur {
    a0: CScalar,
    lambda0: CScalar,
    b1: CScalar,
    t: CScalar,
}

/// μ_a(ζ) = (ζ − a)/(1 − āζ); μ_{−a} is its inverse.
fn disc_auto(a: CScalar, zeta: CScalar) -> CScalar {
    (zeta - a) / (cr(1.0) - a.conj() * zeta)
}

impl ScalarSchur {
    pub fn eval(&self, lam: CScalar) -> CScalar {
        let h = if 1.0 - self.b1.norm() <= 1e-12 {
            // Extremal second step: the parameter is forced to a constant.
            self.b1
        } else {
            disc_auto(-self.b1, blaschke(self.lambda0, lam) * self.t)
        };
        disc_auto(-self.a0, lam * h)
    }
}

/// One Schur-algorithm step solving g(0) = a₀, g(λ₀) = a₁.  Solvable exactly
/// when the pseudo-hyperbolic distance |μ_{a₀}(a₁)| is at most |λ₀|.
pub fn scalar_two_point(
    a0: CScalar,
    lambda0: CScalar,
    a1: CScalar,
    t: CScalar,
) -> Result<ScalarSchur> {
    if a0.norm() >= 1.0 || a1.norm() >= 1.0 {
        return Err(Error::OutOfRange(
            "interpolation values must lie in the open disc".into(),
        ));
    }
    let la = lambda0.norm();
    if !(la > 0.0 && la < 1.0) {
        return Err(Error::OutOfRange(format!(
            "|lambda0| = {} is not in (0, 1)",
            la
        )));
    }
    if t.norm() > 1.0 + 1e-12 {
        return Err(Error::OutOfRange(format!("|t| = {} exceeds 1", t.norm())));
    }
    let target = disc_auto(a0, a1);
    if target.norm() > la + 1e-12 {
        return Err(Error::Infeasible(format!(
            "two-point problem infeasible: d(a0, a1) = {} > |lambda0| = {}",
            target.norm(),
            la
        )));
    }
    Ok(ScalarSchur {
        a0,
        lambda0,
        b1: target / lambda0,
        t,
    })
}

/// Rebuild an evaluable interpolant from a parameter record, revalidating
/// every admissibility constraint.
pub fn from_params(params: InterpolantParams) -> Result<Interpolant> {
    match params.case {
        CaseTag::Degenerate9p => {
            if !is_degenerate(&params.x) {
                return Err(Error::Parse(
                    "case says degenerate-9p but s1*s2 - 9p is not negligible".into(),
                ));
            }
            let rep = schwarz_feasible(params.lambda0, &params.x)?;
            if !rep.feasible {
                return Err(Error::Infeasible(format!(
                    "the two-point bound {} exceeds |lambda0| = {}",
                    rep.bound, rep.lambda0_abs
                )));
            }
            let lambda_eff = params.lambda0;
            Ok(Interpolant {
                params,
                z: None,
                swapped: false,
                lambda_eff,
            })
        }
        CaseTag::NonuniqueFamily => {
            let (x, lambda0) = family_target();
            let anchored = (params.x.s1 - x.s1).norm() <= 1e-12
                && (params.x.s2 - x.s2).norm() <= 1e-12
                && (params.x.p - x.p).norm() <= 1e-12
                && (params.lambda0 - lambda0).norm() <= 1e-12;
            if !anchored {
                return Err(Error::Parse(
                    "the nonunique family is anchored at the fixed worked datum".into(),
                ));
            }
            let t = params
                .t
                .ok_or_else(|| Error::Parse("missing t for the nonunique family".into()))?;
            if t.norm() > 1.0 + 1e-12 {
                return Err(Error::OutOfRange(format!("|t| = {} exceeds 1", t.norm())));
            }
            Ok(Interpolant {
                params,
                z: None,
                swapped: false,
                lambda_eff: lambda0,
            })
        }
        CaseTag::Generic | CaseTag::EqualityRegularized => {
            if params.case == CaseTag::Generic && params.eps_reg != 0.0 {
                return Err(Error::Parse("generic case must have eps_reg = 0".into()));
            }
            if params.case == CaseTag::EqualityRegularized && !(params.eps_reg > 0.0) {
                return Err(Error::Parse(
                    "equality-regularized case needs eps_reg > 0".into(),
                ));
            }
            let alpha = params
                .alpha
                .ok_or_else(|| Error::Parse("missing alpha".into()))?;
            let q = params.q.ok_or_else(|| Error::Parse("missing Q".into()))?;
            assemble(
                params.case,
                &params.x,
                params.lambda0,
                params.eps_reg,
                Some(params.sigma),
                Some(alpha),
                Some(q),
            )
        }
    }
}

pub(crate) fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{:.16e}", v)
    } else {
        "null".to_string()
    }
}

pub(crate) fn fmt_complex(z: CScalar) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

fn fmt_vec2(v: &Vec2) -> String {
    format!("[{},{}]", fmt_complex(v.a1), fmt_complex(v.a2))
}

fn fmt_mat2(m: &Mat2) -> String {
    format!(
        "[[{},{}],[{},{}]]",
        fmt_complex(m.b11),
        fmt_complex(m.b12),
        fmt_complex(m.b21),
        fmt_complex(m.b22)
    )
}

fn json_f64(v: &serde_json::Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Parse(format!("expected a number, got {}", v)))
}

fn json_complex(v: &serde_json::Value) -> Result<CScalar> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("expected [re, im], got {}", v)))?;
    Ok(CScalar::new(json_f64(&arr[0])?, json_f64(&arr[1])?))
}

fn json_vec2(v: &serde_json::Value) -> Result<Vec2> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("expected a 2-vector, got {}", v)))?;
    Ok(Vec2::new(json_complex(&arr[0])?, json_complex(&arr[1])?))
}

fn json_mat2(v: &serde_json::Value) -> Result<Mat2> {
    let rows = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("expected a 2x2 matrix, got {}", v)))?;
    let r0 = json_vec2(&rows[0])?;
    let r1 = json_vec2(&rows[1])?;
    Ok(Mat2::new(r0.a1, r0.a2, r1.a1, r1.a2))
}

impl InterpolantParams {
    /// Stable-key-order JSON record; floats carry 17 significant digits so
    /// parsing reproduces the exact binary values.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"case\":\"{}\",\"lambda0\":{},\"x\":{{\"s1\":{},\"s2\":{},\"p\":{}}},\"sigma\":{},\"alpha\":{},\"q\":{},\"eps_reg\":{},\"t\":{}}}",
            self.case.as_str(),
            fmt_complex(self.lambda0),
            fmt_complex(self.x.s1),
            fmt_complex(self.x.s2),
            fmt_complex(self.x.p),
            fmt_f64(self.sigma),
            self.alpha
                .as_ref()
                .map_or_else(|| "null".to_string(), fmt_vec2),
            self.q.as_ref().map_or_else(|| "null".to_string(), fmt_mat2),
            fmt_f64(self.eps_reg),
            self.t.map_or_else(|| "null".to_string(), fmt_complex),
        )
    }

    pub fn from_json(s: &str) -> Result<InterpolantParams> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
        let get = |key: &str| -> Result<&serde_json::Value> {
            obj.get(key)
                .ok_or_else(|| Error::Parse(format!("missing field {:?}", key)))
        };
        let case = CaseTag::parse(
            get("case")?
                .as_str()
                .ok_or_else(|| Error::Parse("case must be a string".into()))?,
        )?;
        let xo = get("x")?
            .as_object()
            .ok_or_else(|| Error::Parse("x must be an object".into()))?;
        let coord = |key: &str| -> Result<CScalar> {
            json_complex(
                xo.get(key)
                    .ok_or_else(|| Error::Parse(format!("missing coordinate {:?}", key)))?,
            )
        };
        let optional =
            |key: &str| -> Option<&serde_json::Value> { obj.get(key).filter(|v| !v.is_null()) };
        Ok(InterpolantParams {
            case,
            lambda0: json_complex(get("lambda0")?)?,
            x: SymPoint::new(coord("s1")?, coord("s2")?, coord("p")?),
            sigma: json_f64(get("sigma")?)?,
            alpha: optional("alpha").map(json_vec2).transpose()?,
            q: optional("q").map(json_mat2).transpose()?,
            eps_reg: json_f64(get("eps_reg")?)?,
            t: optional("t").map(json_complex).transpose()?,
        })
    }
}
