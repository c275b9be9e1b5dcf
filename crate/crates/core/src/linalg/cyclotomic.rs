//! Exact arithmetic in the cyclotomic field Q(ζ), ζ = e^{2πi/24}.
//!
//! Elements are stored as integer coordinates over the power basis
//! `1, ζ, …, ζ⁷` together with one shared positive denominator. The minimal
//! polynomial of ζ is `Φ₂₄(x) = x⁸ − x⁴ + 1`, so products are reduced with
//! `ζ⁸ = ζ⁴ − 1`. The field contains `i = ζ⁶`, `ω₃ = ζ⁸`, `√2 = ζ³ + ζ⁻³`
//! and `√3 = ζ² + ζ⁻²`, which covers every amplitude of the Heisenberg–Weyl
//! bases of C² and C³ and their tensor products.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub const ORDER: usize = 24;
pub const DEGREE: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    num: [i128; DEGREE],
    den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduce a polynomial of degree < 2·DEGREE modulo Φ₂₄.
fn reduce(mut coeffs: [i128; 2 * DEGREE]) -> [i128; DEGREE] {
    for k in (DEGREE..2 * DEGREE).rev() {
        let c = coeffs[k];
        if c != 0 {
            coeffs[k] = 0;
            // x^k = x^{k-4} - x^{k-8}
            coeffs[k - 4] += c;
            coeffs[k - 8] -= c;
        }
    }
    let mut out = [0; DEGREE];
    out.copy_from_slice(&coeffs[..DEGREE]);
    out
}

/// Coordinates of ζ^k for any integer k.
fn zeta_pow_coords(k: i64) -> [i128; DEGREE] {
    let k = k.rem_euclid(ORDER as i64) as usize;
    // ζ^12 = -1
    let (k, sign) = if k >= 12 { (k - 12, -1) } else { (k, 1) };
    let mut coeffs = [0i128; 2 * DEGREE];
    coeffs[k] = sign;
    reduce(coeffs)
}

impl Cyclotomic {
    pub const fn zero() -> Self {
        Self {
            num: [0; DEGREE],
            den: 1,
        }
    }

    pub fn one() -> Self {
        Self::from_ratio(1, 1)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let mut coords = [0i128; DEGREE];
        coords[0] = num as i128;
        Self::normalized(coords, den as i128)
    }

    /// ζ^k with ζ = e^{2πi/24}.
    pub fn zeta(k: i64) -> Self {
        Self {
            num: zeta_pow_coords(k),
            den: 1,
        }
    }

    /// Primitive d-th root of unity raised to `power`; d must divide 24.
    pub fn root_of_unity(d: usize, power: i64) -> Self {
        assert!(d > 0 && ORDER % d == 0, "order {d} does not divide 24");
        Self::zeta(power * (ORDER / d) as i64)
    }

    pub fn i() -> Self {
        Self::zeta(6)
    }

    pub fn sqrt2() -> Self {
        Self::zeta(3) + Self::zeta(-3)
    }

    pub fn sqrt3() -> Self {
        Self::zeta(2) + Self::zeta(-2)
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Self::sqrt2() * Self::from_ratio(1, 2)
    }

    /// 1/√3 = √3/3.
    pub fn inv_sqrt3() -> Self {
        Self::sqrt3() * Self::from_ratio(1, 3)
    }

    fn normalized(mut num: [i128; DEGREE], mut den: i128) -> Self {
        if den < 0 {
            den = -den;
            num.iter_mut().for_each(|c| *c = -*c);
        }
        let g = num.iter().fold(den, |g, &c| gcd(g, c));
        if g > 1 {
            num.iter_mut().for_each(|c| *c /= g);
            den /= g;
        }
        if num.iter().all(|&c| c == 0) {
            den = 1;
        }
        Self { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[i128; DEGREE] {
        &self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn from_parts(num: [i128; DEGREE], den: i128) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Some(Self::normalized(num, den))
    }

    /// Complex conjugation: ζ^k ↦ ζ^{-k}.
    pub fn conj(&self) -> Self {
        let mut acc = [0i128; DEGREE];
        for (k, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let z = zeta_pow_coords(-(k as i64));
            for (a, zc) in acc.iter_mut().zip(z.iter()) {
                *a += c * zc;
            }
        }
        Self::normalized(acc, self.den)
    }

    pub fn norm_sqr(&self) -> Self {
        *self * self.conj()
    }

    pub fn to_c64(&self) -> Complex64 {
        let den = self.den as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (s, co) = zeta_float(k);
            re += c as f64 * co;
            im += c as f64 * s;
        }
        Complex64::new(re / den, im / den)
    }
}

/// (sin, cos) of 2πk/24 for k < 8, from closed forms.
fn zeta_float(k: usize) -> (f64, f64) {
    let s3 = 3f64.sqrt();
    let s6p2 = (6f64.sqrt() + 2f64.sqrt()) / 4.0;
    let s6m2 = (6f64.sqrt() - 2f64.sqrt()) / 4.0;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match k {
        0 => (0.0, 1.0),
        1 => (s6m2, s6p2),
        2 => (0.5, s3 / 2.0),
        3 => (h, h),
        4 => (s3 / 2.0, 0.5),
        5 => (s6p2, s6m2),
        6 => (1.0, 0.0),
        7 => (s6p2, -s6m2),
        _ => unreachable!(),
    }
}

impl Add for Cyclotomic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let den = self.den / gcd(self.den, rhs.den) * rhs.den;
        let (l, r) = (den / self.den, den / rhs.den);
        let mut num = [0i128; DEGREE];
        for k in 0..DEGREE {
            num[k] = self.num[k] * l + rhs.num[k] * r;
        }
        Self::normalized(num, den)
    }
}

impl Neg for Cyclotomic {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.num.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut prod = [0i128; 2 * DEGREE];
        for (i, &a) in self.num.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.num.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Self::normalized(reduce(prod), self.den * rhs.den)
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}ζ"),
                _ => format!("{c}ζ^{k}"),
            })
            .collect();
        if self.den == 1 {
            write!(f, "{}", terms.join(" + "))
        } else {
            write!(f, "({})/{}", terms.join(" + "), self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn zeta_powers_match_floats() {
        for k in -30i64..30 {
            let theta = 2.0 * std::f64::consts::PI * k.rem_euclid(24) as f64 / 24.0;
            let expected = Complex64::from_polar(1.0, theta);
            assert!(close(Cyclotomic::zeta(k).to_c64(), expected), "k = {k}");
        }
    }

    #[test]
    fn named_constants() {
        assert!(close(Cyclotomic::sqrt2().to_c64(), Complex64::new(2f64.sqrt(), 0.0)));
        assert!(close(Cyclotomic::sqrt3().to_c64(), Complex64::new(3f64.sqrt(), 0.0)));
        assert_eq!(Cyclotomic::sqrt2() * Cyclotomic::sqrt2(), Cyclotomic::from_ratio(2, 1));
        assert_eq!(Cyclotomic::sqrt3() * Cyclotomic::sqrt3(), Cyclotomic::from_ratio(3, 1));
        assert_eq!(Cyclotomic::i() * Cyclotomic::i(), Cyclotomic::from_ratio(-1, 1));
        let w = Cyclotomic::root_of_unity(3, 1);
        assert_eq!(w * w * w, Cyclotomic::one());
        assert_eq!(Cyclotomic::one() + w + w * w, Cyclotomic::zero());
    }

    #[test]
    fn conjugation_and_norms() {
        let w = Cyclotomic::root_of_unity(3, 1);
        assert_eq!(w.conj(), w * w);
        assert_eq!(w.norm_sqr(), Cyclotomic::one());
        let z = Cyclotomic::inv_sqrt2() * Cyclotomic::inv_sqrt3() * w;
        assert_eq!(z.norm_sqr(), Cyclotomic::from_ratio(1, 6));
        assert!(close(z.conj().to_c64(), z.to_c64().conj()));
    }

    #[test]
    fn normalization_is_canonical() {
        let a = Cyclotomic::from_ratio(2, 4);
        let b = Cyclotomic::from_ratio(-3, -6);
        assert_eq!(a, b);
        assert_eq!(a.denominator(), 2);
        assert_eq!((a - b).denominator(), 1);
        assert!((a - b).is_zero());
    }
}
