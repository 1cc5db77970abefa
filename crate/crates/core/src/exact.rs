//! Exact dyadic arithmetic (values m·2ᵏ with big-integer m).
//!
//! Every finite `f64` is a dyadic rational, so sums and products of `f64`
//! inputs can be carried out without rounding and rounded once at the end.
//! The closed-form coefficient sums are alternating in general and lose all
//! significance in floating point; here they are evaluated exactly.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::from(0),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic {
            mant: BigInt::from(v),
            exp: 0,
        }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic { mant: v, exp: 0 }
    }

    /// Exact conversion; panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value has no dyadic form");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let tz = m.trailing_zeros() as i64;
        let mut mant = BigInt::from(m >> tz);
        if negative {
            mant = -mant;
        }
        Dyadic { mant, exp: e + tz }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.sign() == Sign::NoSign
    }

    /// Multiplies by 2ᵏ.
    pub fn ldexp(&self, k: i64) -> Self {
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Splits into (m, k) with value ≈ m·2ᵏ and |m| in [2⁶², 2⁶⁴) (or m = 0).
    fn to_scaled(&self) -> (f64, i64) {
        if self.is_zero() {
            return (0.0, 0);
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = &self.mant >> (shift as usize);
        // |top| < 2⁶⁴ is a single u64 digit; the conversion to f64 rounds once
        let (sign, digits) = top.to_u64_digits();
        let mag = digits.first().copied().unwrap_or(0) as f64;
        let m = if sign == Sign::Minus { -mag } else { mag };
        (m, self.exp + shift)
    }

    pub fn to_f64(&self) -> f64 {
        let (m, k) = self.to_scaled();
        ldexp(m, k)
    }

    /// (sign, ln|x|) avoiding overflow; ln 0 = −∞.
    pub fn ln_abs(&self) -> (f64, f64) {
        let (m, k) = self.to_scaled();
        if m == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        (m.signum(), m.abs().ln() + k as f64 * std::f64::consts::LN_2)
    }

    /// Exponent of the highest set bit (value magnitude ≈ 2^top_bit).
    fn top_bit(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 + self.exp)
        }
    }
}

fn ldexp(m: f64, k: i64) -> f64 {
    let mut v = m;
    let mut k = k;
    while k > 1000 {
        v *= 2f64.powi(1000);
        k -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while k < -1000 {
        v *= 2f64.powi(-1000);
        k += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(k as i32)
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - exp) as usize);
        let b = &rhs.mant << ((rhs.exp - exp) as usize);
        Dyadic { mant: a + b, exp }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }
}

/// Complex number with exact dyadic parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactComplex {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl ExactComplex {
    pub fn zero() -> Self {
        ExactComplex {
            re: Dyadic::zero(),
            im: Dyadic::zero(),
        }
    }

    pub fn one() -> Self {
        Self::real(Dyadic::one())
    }

    pub fn real(re: Dyadic) -> Self {
        ExactComplex { re, im: Dyadic::zero() }
    }

    pub fn from_complex(c: Complex64) -> Self {
        ExactComplex {
            re: Dyadic::from_f64(c.re),
            im: Dyadic::from_f64(c.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, k: &Dyadic) -> Self {
        ExactComplex {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// (ln|x|, arg x) without overflow.
    pub fn ln_polar(&self) -> (f64, f64) {
        let top = match (self.re.top_bit(), self.im.top_bit()) {
            (None, None) => return (f64::NEG_INFINITY, 0.0),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.max(b),
        };
        // rescale both parts by the same power of two so they fit an f64
        let shift = 60 - top;
        let re = self.re.ldexp(shift).to_f64();
        let im = self.im.ldexp(shift).to_f64();
        let c = Complex64::new(re, im);
        (c.norm().ln() - shift as f64 * std::f64::consts::LN_2, c.arg())
    }
}

impl Add for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        let rr = &self.re * &rhs.re;
        let ii = &self.im * &rhs.im;
        let ri = &self.re * &rhs.im;
        let ir = &self.im * &rhs.re;
        ExactComplex {
            re: &rr - &ii,
            im: &ri + &ir,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip() {
        for &x in &[
            0.0,
            1.0,
            -3.5,
            0.1,
            1e-300,
            5e-324,
            1.7976931348623157e308,
            -2.0f64.powi(-60),
        ] {
            assert_eq!(Dyadic::from_f64(x).to_f64(), x, "x = {x:e}");
        }
    }

    #[test]
    fn sums_are_exact() {
        // (1e16 + 1) − 1e16 loses the 1 in floating point
        let big = Dyadic::from_f64(1e16);
        let s = &(&big + &Dyadic::one()) - &big;
        assert_eq!(s.to_f64(), 1.0);
        let tenth = Dyadic::from_f64(0.1);
        let three = Dyadic::from_int(3);
        let p = &tenth * &three;
        // 3 · fl(0.1) exactly, then one rounding
        assert_eq!(p.to_f64(), 0.30000000000000004);
    }

    #[test]
    fn huge_magnitudes() {
        let mut x = ExactComplex::from_complex(Complex64::new(3.0, -4.0));
        let base = x.clone();
        for _ in 0..499 {
            x = &x * &base;
        }
        let (ln_abs, _) = x.ln_polar();
        assert!((ln_abs - 500.0 * 5f64.ln()).abs() < 1e-12 * ln_abs);
    }

    #[test]
    fn ln_abs_sign() {
        let (s, l) = Dyadic::from_f64(-0.25).ln_abs();
        assert_eq!(s, -1.0);
        assert!((l - 0.25f64.ln()).abs() < 1e-15);
    }
}
