//! The Krylov/adjugate determinantal identity
//!
//! ```text
//! det(det Γ₁ · A − det Γ₂ · 1) = (−1)^{n(n−1)/2} det Γ(u) det Γ*(u, v)
//! ```
//!
//! and its specialization `A = X⁻¹Y, u = e_n, v = e_{n−1}`, which factors the
//! pencil determinant `det(s₁₂φ₁₂X + s₂₁φ₂₁Y)` through `φ₁₁`.
//!
//! The left side goes through the plain determinant of an `n×n` matrix; the
//! right side goes through the adjugate (Faddeev–LeVerrier) and Krylov
//! matrices, so the two never share an intermediate.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, Entry, Jet, Mat, Scalar};
use crate::family::{eval_family, sign_skl, DoublePoint, DualPoint, FamilyFunction};
use crate::harness::{ser_opt_scalar, ser_scalar};
use crate::mutation::MutationState;
use crate::poisson::Evaluator;
use crate::seedcore::{build_dual_seed, build_initial_seed};

/// `(−1)^{n(n−1)/2}`, which depends only on `n mod 4`.
pub fn krylov_sign(n: usize) -> i64 {
    match n % 4 {
        0 | 1 => 1,
        _ => -1,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KrylovData<T: Entry> {
    pub a: Mat<T>,
    pub u: Vec<T>,
    pub v: Vec<T>,
    /// Columns `u, Au, …, A^{n−1}u`.
    pub gamma: Mat<T>,
    /// Columns `v, u, Au, …, A^{n−2}u`.
    pub gamma1: Mat<T>,
    /// Columns `Av, u, Au, …, A^{n−2}u`.
    pub gamma2: Mat<T>,
    /// Last row of `adj Γ₁`.
    pub w: Vec<T>,
    /// Rows `w, wA, …, wA^{n−1}`.
    pub gamma_star: Mat<T>,
}

pub fn build_krylov<T: Entry>(a: &Mat<T>, u: &[T], v: &[T]) -> Result<KrylovData<T>> {
    let n = a.rows();
    if !a.is_square() || u.len() != n || v.len() != n || n == 0 {
        return Err(Error::Dimension {
            op: "build_krylov",
            detail: format!("A is {}x{}, |u| = {}, |v| = {}", a.rows(), a.cols(), u.len(), v.len()),
        });
    }
    let mut powers = Vec::with_capacity(n);
    let mut cur = u.to_vec();
    for _ in 0..n {
        powers.push(cur.clone());
        cur = a.mul_vec(&cur)?;
    }
    let gamma = Mat::from_columns(&powers)?;
    let mut c1 = vec![v.to_vec()];
    c1.extend(powers[..n - 1].iter().cloned());
    let gamma1 = Mat::from_columns(&c1)?;
    let mut c2 = vec![a.mul_vec(v)?];
    c2.extend(powers[..n - 1].iter().cloned());
    let gamma2 = Mat::from_columns(&c2)?;
    let w = gamma1.adjugate()?.row(n - 1);
    let mut rows = Vec::with_capacity(n);
    let mut cur = w.clone();
    for _ in 0..n {
        rows.push(cur.clone());
        cur = a.vec_mul(&cur)?;
    }
    let gamma_star = Mat::from_rows(rows)?;
    Ok(KrylovData {
        a: a.clone(),
        u: u.to_vec(),
        v: v.to_vec(),
        gamma,
        gamma1,
        gamma2,
        w,
        gamma_star,
    })
}

/// `det(det Γ₁ · A − det Γ₂ · 1)`.
pub fn long_identity_lhs<T: Entry>(a: &Mat<T>, u: &[T], v: &[T]) -> Result<T> {
    let n = a.rows();
    let mut powers = Vec::with_capacity(n);
    let mut cur = u.to_vec();
    for _ in 0..n.saturating_sub(1) {
        powers.push(cur.clone());
        cur = a.mul_vec(&cur)?;
    }
    let mut c1 = vec![v.to_vec()];
    c1.extend(powers.iter().cloned());
    let mut c2 = vec![a.mul_vec(v)?];
    c2.extend(powers);
    let d1 = Mat::from_columns(&c1)?.det()?;
    let d2 = Mat::from_columns(&c2)?.det()?;
    a.scale(&d1).sub(&Mat::identity(n).scale(&d2))?.det()
}

/// `(−1)^{n(n−1)/2} det Γ(u) det Γ*(u, v)`.
pub fn long_identity_rhs<T: Entry>(k: &KrylovData<T>) -> Result<T> {
    let s = T::from_scalar(int(krylov_sign(k.a.rows())));
    Ok(s * k.gamma.det()? * k.gamma_star.det()?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    #[serde(serialize_with = "ser_scalar")]
    pub lhs: Scalar,
    #[serde(serialize_with = "ser_scalar")]
    pub rhs: Scalar,
    pub equal: bool,
}

pub fn verify_long_identity(a: &Mat<Scalar>, u: &[Scalar], v: &[Scalar]) -> Result<IdentityReport> {
    let lhs = long_identity_lhs(a, u, v)?;
    let rhs = long_identity_rhs(&build_krylov(a, u, v)?)?;
    Ok(IdentityReport {
        n: a.rows(),
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

fn basis<T: Entry>(n: usize, i: usize) -> Vec<T> {
    (0..n).map(|r| if r == i { T::one() } else { T::zero() }).collect()
}

/// `det(s₁₂φ₁₂X + s₂₁φ₂₁Y)` as an evaluator on the double.
#[derive(Clone, Copy, Debug)]
pub struct PencilDeterminant {
    pub n: usize,
}

impl PencilDeterminant {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::UnsupportedSize(n));
        }
        Ok(Self { n })
    }

    /// Total degree in the entries of `(X, Y)`.
    pub fn degree(&self) -> usize {
        let n = self.n;
        n * n * (n - 2) + n
    }

    fn value<T: Entry>(&self, x: &Mat<T>, y: &Mat<T>) -> Result<T> {
        let n = self.n;
        let funs = [FamilyFunction::phi(n, 1, 2)?, FamilyFunction::phi(n, 2, 1)?];
        let v = eval_family(&funs, x, y)?;
        let a = v[0].scale(&int(sign_skl(n, 1, 2)?));
        let b = v[1].scale(&int(sign_skl(n, 2, 1)?));
        x.scale(&a).add(&y.scale(&b))?.det()
    }
}

impl Evaluator for PencilDeterminant {
    fn labels(&self) -> Vec<String> {
        vec!["det(s12*phi12*X+s21*phi21*Y)".into()]
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        Ok(vec![self.value(x, y)?])
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        Ok(vec![self.value(x, y)?])
    }
}

/// `P = s₁₁ (−1)^{n(n−1)/2} (det X)^{(n−1)(n−2)} det Γ*(e_n, e_{n−1})`
/// with `A = X⁻¹Y`, the cofactor of `φ₁₁` in the pencil determinant.
pub fn corollary_cofactor(p: &DoublePoint) -> Result<Scalar> {
    let n = p.n();
    let a = p.u()?;
    let k = build_krylov(&a, &basis(n, n - 1), &basis(n, n - 2))?;
    let det_x = p.x.det()?;
    let e = ((n - 1) * (n - 2)) as u32;
    Ok(int(sign_skl(n, 1, 1)? * krylov_sign(n)) * Entry::pow(&det_x, e) * k.gamma_star.det()?)
}

/// Returns `Some(±1)` when `a = ±b`, `None` otherwise.
fn relative_sign(a: &Scalar, b: &Scalar) -> Option<i64> {
    if a == b {
        Some(1)
    } else if *a == -b.clone() {
        Some(-1)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorollaryReport {
    pub n: usize,
    #[serde(serialize_with = "ser_scalar")]
    pub pencil_det: Scalar,
    #[serde(serialize_with = "ser_scalar")]
    pub phi11: Scalar,
    #[serde(serialize_with = "ser_scalar")]
    pub cofactor: Scalar,
    /// `pencil_det == φ₁₁ · P`.
    pub equal: bool,
    /// `x'_{φ₁₁}` from the generalized exchange relation of the initial seed.
    #[serde(serialize_with = "ser_opt_scalar")]
    pub exchange_value: Option<Scalar>,
    /// Measured `P / x'_{φ₁₁}` when it is `±1`.
    pub relative_sign: Option<i64>,
}

pub fn verify_corollary(p: &DoublePoint) -> Result<CorollaryReport> {
    verify_corollary_with(p, &MutationState::new(build_initial_seed(p.n())?))
}

/// As [`verify_corollary`], reusing an initial mutation state.
pub fn verify_corollary_with(p: &DoublePoint, state: &MutationState) -> Result<CorollaryReport> {
    let n = p.n();
    let pen = PencilDeterminant::new(n)?;
    let phi11 = p.eval(&FamilyFunction::phi(n, 1, 1)?)?;
    if phi11.is_zero() {
        return Err(Error::Vanishing {
            label: "phi_1_1".into(),
            point: 0,
        });
    }
    let pencil_det = pen.value(&p.x, &p.y)?;
    let cofactor = corollary_cofactor(p)?;
    let exchange_value = state.exchange_value(state.find("phi_1_1")?, p).ok();
    let relative_sign = exchange_value
        .as_ref()
        .and_then(|x| relative_sign(&cofactor, x));
    Ok(CorollaryReport {
        n,
        equal: pencil_det == &phi11 * &cofactor,
        pencil_det,
        phi11,
        cofactor,
        exchange_value,
        relative_sign,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualExchangeReport {
    pub n: usize,
    /// `det(s₁₂ψ₁₂·1 + s₂₁ψ₂₁U)`.
    #[serde(serialize_with = "ser_scalar")]
    pub pencil_det: Scalar,
    #[serde(serialize_with = "ser_scalar")]
    pub psi11: Scalar,
    /// `Π = pencil_det / ψ₁₁`.
    #[serde(serialize_with = "ser_scalar")]
    pub quotient: Scalar,
    /// `ψ'_{11}` from the exchange relation of the dual seed.
    #[serde(serialize_with = "ser_scalar")]
    pub exchange_value: Scalar,
    pub relative_sign: Option<i64>,
}

pub fn verify_dual_exchange(q: &DualPoint) -> Result<DualExchangeReport> {
    let n = q.n();
    if n < 3 {
        return Err(Error::UnsupportedSize(n));
    }
    let state = MutationState::new(build_dual_seed(n)?);
    let p = q.to_double();
    let u = q.u()?;
    let funs = [
        FamilyFunction::psi(n, 1, 1)?,
        FamilyFunction::psi(n, 1, 2)?,
        FamilyFunction::psi(n, 2, 1)?,
    ];
    let v = eval_family(&funs, &p.x, &p.y)?;
    let psi11 = v[0].clone();
    if psi11.is_zero() {
        return Err(Error::Vanishing {
            label: "psi_1_1".into(),
            point: 0,
        });
    }
    let a = &v[1] * int(sign_skl(n, 1, 2)?);
    let b = &v[2] * int(sign_skl(n, 2, 1)?);
    let pencil_det = Mat::<Scalar>::identity(n).scale(&a).add(&u.scale(&b))?.det()?;
    let quotient = &pencil_det / &psi11;
    let exchange_value = state.exchange_value(state.find("psi_1_1")?, &p)?;
    Ok(DualExchangeReport {
        n,
        relative_sign: relative_sign(&quotient, &exchange_value),
        pencil_det,
        psi11,
        quotient,
        exchange_value,
    })
}
