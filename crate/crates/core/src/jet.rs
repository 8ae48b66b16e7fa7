//! First-order jets in the radial coordinate.
//!
//! A [`Jet`] carries a value together with its derivative with respect to
//! `r`. Arithmetic follows the chain rule, so the exterior derivative of a
//! form built from jets is exact at the sample point.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub dvalue: f64,
}

impl Jet {
    pub const ZERO: Jet = Jet::new(0.0, 0.0);
    pub const ONE: Jet = Jet::new(1.0, 0.0);

    pub const fn new(value: f64, dvalue: f64) -> Self {
        Jet { value, dvalue }
    }

    pub const fn constant(value: f64) -> Self {
        Jet { value, dvalue: 0.0 }
    }

    /// The coordinate itself: `r` with `dr/dr = 1`.
    pub const fn variable(value: f64) -> Self {
        Jet { value, dvalue: 1.0 }
    }

    /// Derivative as a new jet. The second derivative is not tracked and is
    /// set to zero; it is only ever consumed on monomials already containing
    /// `dr`, where it drops out.
    pub fn derivative(self) -> Self {
        Jet::constant(self.dvalue)
    }

    pub fn is_zero(self) -> bool {
        self.value == 0.0 && self.dvalue == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.value.is_finite() && self.dvalue.is_finite()
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.value;
        Jet::new(inv, -self.dvalue * inv * inv)
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        Jet::new(s, 0.5 * self.dvalue / s)
    }

    pub fn cbrt(self) -> Self {
        let c = self.value.cbrt();
        Jet::new(c, self.dvalue / (3.0 * c * c))
    }

    pub fn powf(self, p: f64) -> Self {
        let v = self.value.powf(p);
        Jet::new(v, p * self.value.powf(p - 1.0) * self.dvalue)
    }

    pub fn powi(self, n: i32) -> Self {
        let v = self.value.powi(n);
        let dv = if n == 0 {
            0.0
        } else {
            f64::from(n) * self.value.powi(n - 1) * self.dvalue
        };
        Jet::new(v, dv)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        Jet::new(e, e * self.dvalue)
    }

    pub fn ln(self) -> Self {
        Jet::new(self.value.ln(), self.dvalue / self.value)
    }

    pub fn sinh(self) -> Self {
        Jet::new(self.value.sinh(), self.value.cosh() * self.dvalue)
    }

    pub fn cosh(self) -> Self {
        Jet::new(self.value.cosh(), self.value.sinh() * self.dvalue)
    }

    pub fn abs(self) -> Self {
        if self.value < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::constant(v)
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = f.precision() {
            write!(f, "{:.*}", p, self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.dvalue + o.dvalue)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.value - o.value, self.dvalue - o.dvalue)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.value * o.value,
            self.dvalue * o.value + self.value * o.dvalue,
        )
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let q = self.value / o.value;
        Jet::new(q, (self.dvalue - q * o.dvalue) / o.value)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.value, -self.dvalue)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, o: f64) -> Jet {
        Jet::new(self.value + o, self.dvalue)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, o: f64) -> Jet {
        Jet::new(self.value - o, self.dvalue)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        Jet::new(self.value * o, self.dvalue * o)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, o: f64) -> Jet {
        Jet::new(self.value / o, self.dvalue / o)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        o + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self - o.value, -o.dvalue)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        o * self
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div<Jet> for f64 {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        o.recip() * self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, o: Jet) {
        *self = *self - o;
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, o: Jet) {
        *self = *self * o;
    }
}

impl MulAssign<f64> for Jet {
    fn mul_assign(&mut self, o: f64) {
        *self = *self * o;
    }
}
