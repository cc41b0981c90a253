//! Exact arithmetic kernel.
//!
//! Everything downstream is evaluated over arbitrary-precision rationals.
//! Directional derivatives are carried by first-order jets `a + bε`, and all
//! matrix routines are generic over [`Entry`] so the same code path evaluates
//! values and derivatives.

mod jet;
mod mat;
pub mod poly;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use jet::Jet;
pub use mat::{pencil_coefficients, Mat};

/// Exact rational number in canonical reduced form.
pub type Scalar = num_rational::BigRational;

/// Ring elements the matrix routines operate on.
///
/// `is_unit` decides pivot eligibility; `inv` must succeed whenever
/// `is_unit` holds.
pub trait Entry:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_scalar(s: Scalar) -> Self;
    fn is_unit(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// The value part (the entry itself for scalars).
    fn value(&self) -> Scalar;

    fn scale(&self, s: &Scalar) -> Self {
        self.clone() * Self::from_scalar(s.clone())
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|o| self.clone() * o)
    }
}

impl Entry for Scalar {
    fn from_scalar(s: Scalar) -> Self {
        s
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn value(&self) -> Scalar {
        self.clone()
    }
}

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Exact `d`-th root of a rational, if one exists.
///
/// For even `d` the non-negative root is returned.
pub fn exact_root(s: &Scalar, d: u32) -> Option<Scalar> {
    if d == 0 {
        return None;
    }
    if s.is_negative() {
        if d % 2 == 0 {
            return None;
        }
        return exact_root(&-s.clone(), d).map(|r| -r);
    }
    let root_int = |v: &BigInt| {
        let r = v.nth_root(d);
        if num_traits::pow(r.clone(), d as usize) == *v {
            Some(r)
        } else {
            None
        }
    };
    let num = root_int(s.numer())?;
    let den = root_int(s.denom())?;
    Some(Scalar::new(num, den))
}

/// `(-1)^e` as a scalar.
pub fn sign_pow(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Canonical textual form: `p` for integers, `p/q` otherwise.
pub fn fmt_scalar(s: &Scalar) -> String {
    s.to_string()
}

pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Scalar::new(p, q))
            }
        }
        None => text.parse::<BigInt>().ok().map(Scalar::from_integer),
    }
}

pub fn is_integer(s: &Scalar) -> bool {
    s.denom().is_one()
}
