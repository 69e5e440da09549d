//! Scalar abstraction shared by the f64 and double-double code paths.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use twofloat::TwoFloat;

/// The arithmetic the generic kernels need.
pub trait Real:
    Copy
    + PartialOrd
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact conversion of an f64 constant.
    fn c(x: f64) -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    /// Nearest f64.
    fn f64(self) -> f64;

    fn ci(n: usize) -> Self {
        Self::c(n as f64)
    }

    fn zero() -> Self {
        Self::c(0.0)
    }

    fn one() -> Self {
        Self::c(1.0)
    }

    fn powi(self, n: i32) -> Self {
        let mut acc = Self::one();
        let mut base = self;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        if n < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
}

impl Real for f64 {
    fn c(x: f64) -> Self {
        x
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn f64(self) -> f64 {
        self
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// Double-double scalar used where f64 roundoff would hide algebraic rates.
///
/// Wraps `TwoFloat` for addition and multiplication. Division and square
/// root are redone here: the crate's double-by-double quotient forms its
/// residual without a fused multiply-add and is only f64 accurate.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct DD(pub TwoFloat);

impl DD {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD(TwoFloat::from(x))
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, rhs: DD) -> DD {
        DD(self.0 + rhs.0)
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, rhs: DD) -> DD {
        DD(self.0 - rhs.0)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, rhs: DD) -> DD {
        DD(self.0 * rhs.0)
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, rhs: DD) -> DD {
        let b = rhs.0;
        let q1 = self.0.hi() / b.hi();
        let r = self.0 - b * q1;
        let q2 = r.hi() / b.hi();
        let r = r - b * q2;
        let q3 = r.hi() / b.hi();
        DD(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD(-self.0)
    }
}

impl Real for DD {
    fn c(x: f64) -> Self {
        DD::from(x)
    }
    fn abs(self) -> Self {
        DD(self.0.abs())
    }
    fn sqrt(self) -> Self {
        let s = self.0.hi().sqrt();
        if !(s > 0.0) || !s.is_finite() {
            return DD::from(s);
        }
        // One Newton step from the f64 root.
        let e = self.0 - TwoFloat::new_mul(s, s);
        DD(TwoFloat::new_add(s, e.hi() / (2.0 * s)))
    }
    fn f64(self) -> f64 {
        self.0.hi() + self.0.lo()
    }
}

/// Exact ratio p/q in the working precision.
pub fn ratio<T: Real>(p: f64, q: f64) -> T {
    T::c(p) / T::c(q)
}
