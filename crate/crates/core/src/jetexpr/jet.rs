//! Truncated Taylor arithmetic in two variables.
//!
//! [`Jet3`] carries a value and every partial derivative up to order three;
//! [`Jet2`] and [`Jet1`] are the lower-order truncations produced when a jet
//! is differentiated once or twice. Products and compositions only ever
//! combine coefficients of total order at most the jet order, so every
//! retained coefficient is exact up to floating-point rounding.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar type usable in the closed-form geometry formulas.
///
/// Implemented for `f64` (plain values) and [`Jet1`] (values with an exact
/// gradient), so the same formula produces either a number or its first
/// derivatives.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(v: f64) -> Self;
    fn sqrt(self) -> Self;
    fn value(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
}

/// Value and all partial derivatives up to order 3 of a scalar field in (x, y).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet3 {
    pub f: f64,
    pub fx: f64,
    pub fy: f64,
    pub fxx: f64,
    pub fxy: f64,
    pub fyy: f64,
    pub fxxx: f64,
    pub fxxy: f64,
    pub fxyy: f64,
    pub fyyy: f64,
}

// Taylor coefficients in monomial order 1, x, y, x², xy, y², x³, x²y, xy², y³.
type Taylor3 = [f64; 10];

impl Jet3 {
    pub fn constant(v: f64) -> Self {
        Jet3 {
            f: v,
            ..Default::default()
        }
    }

    /// The coordinate function x at abscissa `x0`.
    pub fn var_x(x0: f64) -> Self {
        Jet3 {
            f: x0,
            fx: 1.0,
            ..Default::default()
        }
    }

    /// The coordinate function y at ordinate `y0`.
    pub fn var_y(y0: f64) -> Self {
        Jet3 {
            f: y0,
            fy: 1.0,
            ..Default::default()
        }
    }

    pub fn coefficients(&self) -> [f64; 10] {
        [
            self.f, self.fx, self.fy, self.fxx, self.fxy, self.fyy, self.fxxx, self.fxxy,
            self.fxyy, self.fyyy,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_finite())
    }

    fn to_taylor(self) -> Taylor3 {
        [
            self.f,
            self.fx,
            self.fy,
            self.fxx / 2.0,
            self.fxy,
            self.fyy / 2.0,
            self.fxxx / 6.0,
            self.fxxy / 2.0,
            self.fxyy / 2.0,
            self.fyyy / 6.0,
        ]
    }

    fn from_taylor(t: Taylor3) -> Self {
        Jet3 {
            f: t[0],
            fx: t[1],
            fy: t[2],
            fxx: 2.0 * t[3],
            fxy: t[4],
            fyy: 2.0 * t[5],
            fxxx: 6.0 * t[6],
            fxxy: 2.0 * t[7],
            fxyy: 2.0 * t[8],
            fyyy: 6.0 * t[9],
        }
    }

    fn map(self, op: impl Fn(f64) -> f64) -> Self {
        Jet3 {
            f: op(self.f),
            fx: op(self.fx),
            fy: op(self.fy),
            fxx: op(self.fxx),
            fxy: op(self.fxy),
            fyy: op(self.fyy),
            fxxx: op(self.fxxx),
            fxxy: op(self.fxxy),
            fxyy: op(self.fxyy),
            fyyy: op(self.fyyy),
        }
    }

    fn zip(self, o: Self, op: impl Fn(f64, f64) -> f64) -> Self {
        Jet3 {
            f: op(self.f, o.f),
            fx: op(self.fx, o.fx),
            fy: op(self.fy, o.fy),
            fxx: op(self.fxx, o.fxx),
            fxy: op(self.fxy, o.fxy),
            fyy: op(self.fyy, o.fyy),
            fxxx: op(self.fxxx, o.fxxx),
            fxxy: op(self.fxxy, o.fxxy),
            fxyy: op(self.fxyy, o.fxyy),
            fyyy: op(self.fyyy, o.fyyy),
        }
    }

    /// Composition `g ∘ self` given `g` and its first three derivatives at
    /// `self.f`.
    pub fn compose(self, g: [f64; 4]) -> Self {
        let mut d = self;
        d.f = 0.0;
        let d2 = d * d;
        let d3 = d2 * d;
        let mut out = d * g[1] + d2 * (g[2] / 2.0) + d3 * (g[3] / 6.0);
        out.f = g[0];
        out
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = self;
        let mut acc = Jet3::constant(1.0);
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Multiplicative inverse; the caller guarantees `self.f != 0`.
    pub fn recip(self) -> Self {
        let u = self.f;
        let r = 1.0 / u;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    /// First partial derivative in x, truncated to order 2.
    pub fn d_dx(&self) -> Jet2 {
        Jet2 {
            f: self.fx,
            fx: self.fxx,
            fy: self.fxy,
            fxx: self.fxxx,
            fxy: self.fxxy,
            fyy: self.fxyy,
        }
    }

    /// First partial derivative in y, truncated to order 2.
    pub fn d_dy(&self) -> Jet2 {
        Jet2 {
            f: self.fy,
            fx: self.fxy,
            fy: self.fyy,
            fxx: self.fxxy,
            fxy: self.fxyy,
            fyy: self.fyyy,
        }
    }

    /// Third directional derivative along `(u, v)`.
    pub fn third_directional(&self, u: f64, v: f64) -> f64 {
        self.fxxx * u * u * u
            + 3.0 * self.fxxy * u * u * v
            + 3.0 * self.fxyy * u * v * v
            + self.fyyy * v * v * v
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        self.zip(o, |a, b| a + b)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        self.zip(o, |a, b| a - b)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.map(|a| -a)
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, s: f64) -> Jet3 {
        self.map(|a| a * s)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        let a = self.to_taylor();
        let b = o.to_taylor();
        let c = [
            a[0] * b[0],
            a[0] * b[1] + a[1] * b[0],
            a[0] * b[2] + a[2] * b[0],
            a[0] * b[3] + a[1] * b[1] + a[3] * b[0],
            a[0] * b[4] + a[1] * b[2] + a[2] * b[1] + a[4] * b[0],
            a[0] * b[5] + a[2] * b[2] + a[5] * b[0],
            a[0] * b[6] + a[1] * b[3] + a[3] * b[1] + a[6] * b[0],
            a[0] * b[7] + a[1] * b[4] + a[2] * b[3] + a[3] * b[2] + a[4] * b[1] + a[7] * b[0],
            a[0] * b[8] + a[1] * b[5] + a[2] * b[4] + a[4] * b[2] + a[5] * b[1] + a[8] * b[0],
            a[0] * b[9] + a[2] * b[5] + a[5] * b[2] + a[9] * b[0],
        ];
        Jet3::from_taylor(c)
    }
}

/// Value and partial derivatives up to order 2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub f: f64,
    pub fx: f64,
    pub fy: f64,
    pub fxx: f64,
    pub fxy: f64,
    pub fyy: f64,
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        Jet2 {
            f: v,
            ..Default::default()
        }
    }

    pub fn d_dx(&self) -> Jet1 {
        Jet1::new(self.fx, self.fxx, self.fxy)
    }

    pub fn d_dy(&self) -> Jet1 {
        Jet1::new(self.fy, self.fxy, self.fyy)
    }

    pub fn scale(self, s: f64) -> Self {
        Jet2 {
            f: self.f * s,
            fx: self.fx * s,
            fy: self.fy * s,
            fxx: self.fxx * s,
            fxy: self.fxy * s,
            fyy: self.fyy * s,
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            f: self.f + o.f,
            fx: self.fx + o.fx,
            fy: self.fy + o.fy,
            fxx: self.fxx + o.fxx,
            fxy: self.fxy + o.fxy,
            fyy: self.fyy + o.fyy,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            f: self.f * o.f,
            fx: self.fx * o.f + self.f * o.fx,
            fy: self.fy * o.f + self.f * o.fy,
            fxx: self.fxx * o.f + 2.0 * self.fx * o.fx + self.f * o.fxx,
            fxy: self.fxy * o.f + self.fx * o.fy + self.fy * o.fx + self.f * o.fxy,
            fyy: self.fyy * o.f + 2.0 * self.fy * o.fy + self.f * o.fyy,
        }
    }
}

/// Value and exact gradient (a dual number in two directions).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet1 {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Jet1 {
    pub const fn new(v: f64, dx: f64, dy: f64) -> Self {
        Jet1 { v, dx, dy }
    }

    pub fn gradient(&self) -> [f64; 2] {
        [self.dx, self.dy]
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    #[inline]
    fn add(self, o: Jet1) -> Jet1 {
        Jet1::new(self.v + o.v, self.dx + o.dx, self.dy + o.dy)
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    #[inline]
    fn sub(self, o: Jet1) -> Jet1 {
        Jet1::new(self.v - o.v, self.dx - o.dx, self.dy - o.dy)
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    #[inline]
    fn mul(self, o: Jet1) -> Jet1 {
        Jet1::new(
            self.v * o.v,
            self.dx * o.v + self.v * o.dx,
            self.dy * o.v + self.v * o.dy,
        )
    }
}

impl Div for Jet1 {
    type Output = Jet1;
    #[inline]
    fn div(self, o: Jet1) -> Jet1 {
        let q = self.v / o.v;
        Jet1::new(q, (self.dx - q * o.dx) / o.v, (self.dy - q * o.dy) / o.v)
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    #[inline]
    fn neg(self) -> Jet1 {
        Jet1::new(-self.v, -self.dx, -self.dy)
    }
}

impl Real for Jet1 {
    #[inline]
    fn cst(v: f64) -> Self {
        Jet1::new(v, 0.0, 0.0)
    }
    #[inline]
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let k = 0.5 / s;
        Jet1::new(s, self.dx * k, self.dy * k)
    }
    #[inline]
    fn value(self) -> f64 {
        self.v
    }
}
