use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Entry, Scalar};

/// First-order truncated number `val + der·ε` with `ε² = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Jet {
    pub val: Scalar,
    pub der: Scalar,
}

impl Jet {
    pub fn new(val: Scalar, der: Scalar) -> Self {
        Self { val, der }
    }

    pub fn constant(val: Scalar) -> Self {
        Self {
            val,
            der: Scalar::zero(),
        }
    }

    pub fn variable(val: Scalar) -> Self {
        Self {
            val,
            der: Scalar::one(),
        }
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.val, self.der)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet::new(self.val + rhs.val, self.der + rhs.der)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet::new(self.val - rhs.val, self.der - rhs.der)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let der = &self.val * &rhs.der + &self.der * &rhs.val;
        Jet::new(self.val * rhs.val, der)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.val, -self.der)
    }
}

impl Zero for Jet {
    fn zero() -> Self {
        Jet::constant(Scalar::zero())
    }
    fn is_zero(&self) -> bool {
        self.val.is_zero() && self.der.is_zero()
    }
}

impl One for Jet {
    fn one() -> Self {
        Jet::constant(Scalar::one())
    }
}

impl Entry for Jet {
    fn from_scalar(s: Scalar) -> Self {
        Jet::constant(s)
    }

    fn is_unit(&self) -> bool {
        !self.val.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if self.val.is_zero() {
            return None;
        }
        let r = self.val.recip();
        let der = -(&self.der * &r * &r);
        Some(Jet::new(r, der))
    }

    fn value(&self) -> Scalar {
        self.val.clone()
    }

    fn scale(&self, s: &Scalar) -> Self {
        Jet::new(&self.val * s, &self.der * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    #[test]
    fn product_rule() {
        let a = Jet::new(int(2), int(3));
        let b = Jet::new(int(5), int(-1));
        assert_eq!(a * b, Jet::new(int(10), int(13)));
    }

    #[test]
    fn division_needs_nonzero_value() {
        let z = Jet::new(int(0), int(4));
        assert!(z.inv().is_none());
        let x = Jet::new(int(2), int(1));
        // d(1/x) = -dx/x^2
        assert_eq!(x.inv().unwrap(), Jet::new(ratio(1, 2), ratio(-1, 4)));
        assert_eq!(x.checked_div(&x).unwrap(), Jet::one());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = Jet::new(int(3), int(1));
        // d/dt (3+t)^5 at 0 = 5*81
        assert_eq!(x.pow(5), Jet::new(int(243), int(405)));
        assert_eq!(x.pow(0), Jet::one());
    }
}
