use std::ops::{Add, Div, Mul, Neg, Sub};

/// Forward-mode dual number carrying a value and its derivative with respect to `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub val: f64,
    pub der: f64,
}

impl Dual {
    pub const fn new(val: f64, der: f64) -> Self {
        Dual { val, der }
    }

    pub const fn constant(val: f64) -> Self {
        Dual { val, der: 0.0 }
    }

    /// The independent variable at `x`.
    pub const fn variable(x: f64) -> Self {
        Dual { val: x, der: 1.0 }
    }

    /// Applies a scalar function given its value and derivative at `self.val`.
    pub fn chain(self, value: f64, slope: f64) -> Self {
        Dual { val: value, der: slope * self.der }
    }

    pub fn is_finite(self) -> bool {
        self.val.is_finite() && self.der.is_finite()
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(s, c)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.val.sin_cos();
        self.chain(c, -s)
    }

    pub fn tan(self) -> Self {
        let t = self.val.tan();
        self.chain(t, 1.0 + t * t)
    }

    pub fn exp(self) -> Self {
        let e = self.val.exp();
        self.chain(e, e)
    }

    pub fn ln(self) -> Self {
        self.chain(self.val.ln(), 1.0 / self.val)
    }

    pub fn sqrt(self) -> Self {
        let r = self.val.sqrt();
        self.chain(r, 0.5 / r)
    }

    /// |u| with derivative sign(u)·u', taking sign(0) = 0.
    pub fn abs(self) -> Self {
        let sign = if self.val > 0.0 {
            1.0
        } else if self.val < 0.0 {
            -1.0
        } else {
            0.0
        };
        self.chain(self.val.abs(), sign)
    }

    /// u^p for a constant exponent `p`.
    pub fn powf(self, p: f64) -> Self {
        if p == 0.0 {
            return Dual::constant(1.0);
        }
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            let n = p as i32;
            let value = self.val.powi(n);
            let slope = if n == 1 { 1.0 } else { p * self.val.powi(n - 1) };
            return self.chain(value, slope);
        }
        self.chain(self.val.powf(p), p * self.val.powf(p - 1.0))
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.val + rhs.val, self.der + rhs.der)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.val - rhs.val, self.der - rhs.der)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual::new(self.val * rhs.val, self.der * rhs.val + self.val * rhs.der)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, rhs: Dual) -> Dual {
        let q = self.val / rhs.val;
        Dual::new(q, (self.der - q * rhs.der) / rhs.val)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.val, -self.der)
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, rhs: f64) -> Dual {
        Dual::new(self.val * rhs, self.der * rhs)
    }
}
