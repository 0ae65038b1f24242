//! Closed-form linear algebra for 2×2 complex matrices.
//!
//! Every routine is hand-rolled from the trace/determinant quadratic: for a
//! 2×2 matrix the singular values and the Hermitian eigensystem are exact
//! algebraic expressions, so nothing here iterates.  All predicates return
//! signed margins instead of testing complex equality, and the caller picks
//! strict or non-strict semantics.

use crate::{CScalar, Error, Result};
use std::ops::{Add, Mul, Neg, Sub};

/// Tolerance on ‖H − H*‖_F for accepting a matrix as Hermitian.  Scaled by
/// max(1, ‖H‖_F) so that legitimately large matrices (inverses taken close to
/// a singular point) are not rejected for pure rounding noise.
pub const HERM_TOL: f64 = 1e-10;

/// A vector in ℂ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub a1: CScalar,
    pub a2: CScalar,
}

impl Vec2 {
    pub fn new(a1: CScalar, a2: CScalar) -> Self {
        Vec2 { a1, a2 }
    }

    pub fn zero() -> Self {
        Vec2::new(CScalar::new(0.0, 0.0), CScalar::new(0.0, 0.0))
    }

    pub fn e1() -> Self {
        Vec2::new(CScalar::new(1.0, 0.0), CScalar::new(0.0, 0.0))
    }

    pub fn e2() -> Self {
        Vec2::new(CScalar::new(0.0, 0.0), CScalar::new(1.0, 0.0))
    }

    /// Hermitian inner product ⟨u, v⟩ = u₁v̄₁ + u₂v̄₂, linear in `self`.
    pub fn dot(&self, other: &Vec2) -> CScalar {
        self.a1 * other.a1.conj() + self.a2 * other.a2.conj()
    }

    pub fn norm_sq(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, c: CScalar) -> Vec2 {
        Vec2::new(self.a1 * c, self.a2 * c)
    }

    pub fn conj(&self) -> Vec2 {
        Vec2::new(self.a1.conj(), self.a2.conj())
    }

    pub fn sub(&self, other: &Vec2) -> Vec2 {
        Vec2::new(self.a1 - other.a1, self.a2 - other.a2)
    }

    pub fn is_finite(&self) -> bool {
        self.a1.is_finite() && self.a2.is_finite()
    }
}

/// A matrix in ℂ^{2×2}, row-major entries b₁₁, b₁₂, b₂₁, b₂₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub b11: CScalar,
    pub b12: CScalar,
    pub b21: CScalar,
    pub b22: CScalar,
}

impl Mat2 {
    pub fn new(b11: CScalar, b12: CScalar, b21: CScalar, b22: CScalar) -> Self {
        Mat2 { b11, b12, b21, b22 }
    }

    pub fn zero() -> Self {
        let z = CScalar::new(0.0, 0.0);
        Mat2::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        let z = CScalar::new(0.0, 0.0);
        let o = CScalar::new(1.0, 0.0);
        Mat2::new(o, z, z, o)
    }

    pub fn diag(d1: CScalar, d2: CScalar) -> Self {
        let z = CScalar::new(0.0, 0.0);
        Mat2::new(d1, z, z, d2)
    }

    /// Matrix with the given columns.
    pub fn from_cols(c1: &Vec2, c2: &Vec2) -> Self {
        Mat2::new(c1.a1, c2.a1, c1.a2, c2.a2)
    }

    /// Rank-one outer product u·v*.
    pub fn outer(u: &Vec2, v: &Vec2) -> Self {
        Mat2::new(
            u.a1 * v.a1.conj(),
            u.a1 * v.a2.conj(),
            u.a2 * v.a1.conj(),
            u.a2 * v.a2.conj(),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.b11.conj(),
            self.b21.conj(),
            self.b12.conj(),
            self.b22.conj(),
        )
    }

    pub fn conj(&self) -> Mat2 {
        Mat2::new(
            self.b11.conj(),
            self.b12.conj(),
            self.b21.conj(),
            self.b22.conj(),
        )
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.b11, self.b21, self.b12, self.b22)
    }

    pub fn det(&self) -> CScalar {
        self.b11 * self.b22 - self.b12 * self.b21
    }

    pub fn trace(&self) -> CScalar {
        self.b11 + self.b22
    }

    pub fn scale(&self, c: CScalar) -> Mat2 {
        Mat2::new(self.b11 * c, self.b12 * c, self.b21 * c, self.b22 * c)
    }

    pub fn mul_vec(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            self.b11 * v.a1 + self.b12 * v.a2,
            self.b21 * v.a1 + self.b22 * v.a2,
        )
    }

    pub fn frob_norm_sq(&self) -> f64 {
        self.b11.norm_sqr() + self.b12.norm_sqr() + self.b21.norm_sqr() + self.b22.norm_sqr()
    }

    pub fn frob_norm(&self) -> f64 {
        self.frob_norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.b11.is_finite() && self.b12.is_finite() && self.b21.is_finite() && self.b22.is_finite()
    }

    /// ‖H − H*‖_F, the deviation from Hermitian symmetry.
    pub fn herm_defect(&self) -> f64 {
        let d = *self - self.adjoint();
        d.frob_norm()
    }

    /// Cramer inverse.  The matrix counts as singular when |det| falls below
    /// 1e-14·(1 + ‖·‖_F²), which keeps well-conditioned inputs exact while
    /// rejecting genuinely collapsed ones.
    pub fn inverse(&self) -> Result<Mat2> {
        let d = self.det();
        if d.norm() <= 1e-14 * (1.0 + self.frob_norm_sq()) {
            return Err(Error::OutOfRange(format!(
                "singular 2x2 matrix, |det| = {:.3e}",
                d.norm()
            )));
        }
        let inv = CScalar::new(1.0, 0.0) / d;
        Ok(Mat2::new(
            self.b22 * inv,
            -self.b12 * inv,
            -self.b21 * inv,
            self.b11 * inv,
        ))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.b11 + rhs.b11,
            self.b12 + rhs.b12,
            self.b21 + rhs.b21,
            self.b22 + rhs.b22,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.b11 - rhs.b11,
            self.b12 - rhs.b12,
            self.b21 - rhs.b21,
            self.b22 - rhs.b22,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(CScalar::new(-1.0, 0.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.b11 * rhs.b11 + self.b12 * rhs.b21,
            self.b11 * rhs.b12 + self.b12 * rhs.b22,
            self.b21 * rhs.b11 + self.b22 * rhs.b21,
            self.b21 * rhs.b12 + self.b22 * rhs.b22,
        )
    }
}

/// Eigensystem of a Hermitian 2×2 matrix: λ_min ≤ λ_max with orthonormal
/// eigenvectors.
#[derive(Debug, Clone)]
pub struct HermEig2 {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub v_min: Vec2,
    pub v_max: Vec2,
}

/// A predicate outcome carrying its signed margin (positive means the strict
/// inequality holds with that much room).
#[derive(Debug, Clone, Copy)]
pub struct Verdict {
    pub holds: bool,
    pub margin: f64,
}

/// Largest singular value, from the eigenvalues of B*B: with T = ‖B‖_F² and
/// Δ = |det B|², the squared singular values are (T ± √(T² − 4Δ))/2.
pub fn op_norm(b: &Mat2) -> f64 {
    assert!(b.is_finite(), "op_norm: non-finite entries");
    let t = b.frob_norm_sq();
    let d = b.det().norm_sqr();
    let disc = (t * t - 4.0 * d).max(0.0);
    (0.5 * (t + disc.sqrt())).sqrt()
}

/// Closed-form eigensystem of a Hermitian matrix.  The input is symmetrized
/// as (H + H*)/2 before solving; inputs whose Hermitian defect exceeds
/// [`HERM_TOL`]·max(1, ‖H‖_F) are rejected.
pub fn herm_eig(h: &Mat2) -> Result<HermEig2> {
    assert!(h.is_finite(), "herm_eig: non-finite entries");
    let defect = h.herm_defect();
    if defect > HERM_TOL * f64::max(1.0, h.frob_norm()) {
        return Err(Error::NotHermitian(format!(
            "defect {:.3e} exceeds tolerance",
            defect
        )));
    }
    let hs = (*h + h.adjoint()).scale(CScalar::new(0.5, 0.0));
    let a = hs.b11.re;
    let c = hs.b22.re;
    let b = hs.b12;
    let mid = 0.5 * (a + c);
    let half_diff = 0.5 * (a - c);
    let r = (half_diff * half_diff + b.norm_sqr()).sqrt();
    let lambda_max = mid + r;
    let lambda_min = mid - r;
    // Near-scalar matrix: any orthonormal basis is an eigenbasis.
    if r <= 1e-300 {
        return Ok(HermEig2 {
            lambda_min,
            lambda_max,
            v_min: Vec2::e2(),
            v_max: Vec2::e1(),
        });
    }
    // (H − λI)v = 0 has the two row solutions (b, λ−a) and (λ−c, b̄); the one
    // with larger norm is the numerically stable representative.
    let cand_a = Vec2::new(b, CScalar::new(lambda_max - a, 0.0));
    let cand_b = Vec2::new(CScalar::new(lambda_max - c, 0.0), b.conj());
    let raw = if cand_a.norm_sq() >= cand_b.norm_sq() {
        cand_a
    } else {
        cand_b
    };
    let n = raw.norm();
    if n <= 1e-300 {
        return Ok(HermEig2 {
            lambda_min,
            lambda_max,
            v_min: Vec2::e2(),
            v_max: Vec2::e1(),
        });
    }
    let v_max = raw.scale(CScalar::new(1.0 / n, 0.0));
    // The orthogonal complement of the top eigenvector is the bottom one.
    let v_min = Vec2::new(-v_max.a2.conj(), v_max.a1.conj());
    Ok(HermEig2 {
        lambda_min,
        lambda_max,
        v_min,
        v_max,
    })
}

/// Hermitian PSD square root via the spectral decomposition.  Eigenvalues in
/// [−tol, 0) are clamped to 0; anything more negative is an error.
pub fn sqrt_psd(h: &Mat2) -> Result<Mat2> {
    let eig = herm_eig(h)?;
    let scale = 1.0 + eig.lambda_max.max(0.0);
    if eig.lambda_min < -1e-10 * scale {
        return Err(Error::NotPsd(format!(
            "smallest eigenvalue {:.3e}",
            eig.lambda_min
        )));
    }
    let l_min = eig.lambda_min.max(0.0).sqrt();
    let l_max = eig.lambda_max.max(0.0).sqrt();
    Ok(
        Mat2::outer(&eig.v_min, &eig.v_min).scale(CScalar::new(l_min, 0.0))
            + Mat2::outer(&eig.v_max, &eig.v_max).scale(CScalar::new(l_max, 0.0)),
    )
}

/// Inverse square root of a Hermitian positive definite matrix.
pub fn inv_sqrt_psd(h: &Mat2) -> Result<Mat2> {
    let eig = herm_eig(h)?;
    let scale = 1.0 + eig.lambda_max.max(0.0);
    if eig.lambda_min <= 1e-14 * scale {
        return Err(Error::NotPsd(format!(
            "matrix not positive definite, smallest eigenvalue {:.3e}",
            eig.lambda_min
        )));
    }
    let l_min = 1.0 / eig.lambda_min.sqrt();
    let l_max = 1.0 / eig.lambda_max.sqrt();
    Ok(
        Mat2::outer(&eig.v_min, &eig.v_min).scale(CScalar::new(l_min, 0.0))
            + Mat2::outer(&eig.v_max, &eig.v_max).scale(CScalar::new(l_max, 0.0)),
    )
}

/// Contraction test with signed margin 1 − ‖B‖.  Strict semantics require the
/// margin to exceed `tol`; non-strict semantics accept margins down to −`tol`.
pub fn is_contraction(b: &Mat2, strict: bool, tol: f64) -> Verdict {
    let margin = 1.0 - op_norm(b);
    let holds = if strict { margin > tol } else { margin >= -tol };
    Verdict { holds, margin }
}
