//! Exact arithmetic in ℚ(θ), θ = 2^(1/6).
//!
//! The sixth root of 2 generates a degree-6 extension of ℚ that contains both
//! √2 = θ³ and 2^(1/3) = θ², the only irrationalities showing up in the
//! expansion coefficients this crate manipulates. Elements are stored as six
//! reduced rational coordinates (c₀,…,c₅) for c₀ + c₁θ + … + c₅θ⁵, with the
//! relation θ⁶ = 2 applied eagerly, so equality is coordinate-wise and every
//! computation is exact.
//!
//! Floating-point images are produced at the very end of a computation only:
//! `to_decimal` isolates θ by integer 6th roots (2^i·10^(6d) has an exact
//! integer root bracket) and refines until the requested digits are certain,
//! so printed digits are true digits of the exact value.
//!
//! ```
//! use bilap_core::AlgebraicNumber;
//!
//! let sqrt2 = AlgebraicNumber::sqrt2();
//! assert_eq!(&sqrt2 * &sqrt2, AlgebraicNumber::from_integer(2));
//! assert_eq!(sqrt2.to_decimal(9), "1.414213562");
//!
//! let x = &AlgebraicNumber::one() + &AlgebraicNumber::cbrt2();
//! assert!((&x * &x.inverse().unwrap()).is_one());
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for small rational constants.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

const DEGREE: usize = 6;

/// An element of ℚ(2^(1/6)), kept in canonical reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    coords: [Rational; 6],
}

fn zero_coords() -> [Rational; 6] {
    [
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
    ]
}

impl AlgebraicNumber {
    pub fn zero() -> Self {
        Self {
            coords: zero_coords(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// Embeds a rational as (r, 0, 0, 0, 0, 0).
    pub fn from_rational(r: Rational) -> Self {
        let mut coords = zero_coords();
        coords[0] = r;
        Self { coords }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// θ^k for 0 ≤ k < 6.
    pub fn theta_pow(k: usize) -> Self {
        assert!(k < DEGREE, "theta_pow takes exponents 0..=5");
        let mut coords = zero_coords();
        coords[k] = Rational::one();
        Self { coords }
    }

    /// √2 = θ³.
    pub fn sqrt2() -> Self {
        Self::theta_pow(3)
    }

    /// 2^(1/3) = θ².
    pub fn cbrt2() -> Self {
        Self::theta_pow(2)
    }

    pub fn from_coords(coords: [Rational; 6]) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[Rational; 6] {
        &self.coords
    }

    /// The rational part, when the element is purely rational.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(Rational::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Rational::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut coords = zero_coords();
        for (out, c) in coords.iter_mut().zip(self.coords.iter()) {
            *out = c * r;
        }
        Self { coords }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on
    /// `ℚ[x]` modulo x⁶ − 2. Postcondition `self * inverse == 1` is exact.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero in Q(2^(1/6))".into()));
        }
        // x^6 - 2
        let mut modulus = vec![Rational::zero(); 7];
        modulus[0] = rat(-2, 1);
        modulus[6] = Rational::one();

        let element: Vec<Rational> = self.coords.to_vec();
        let (gcd, cofactor) = poly_half_extended_gcd(&element, &modulus);
        // x^6 - 2 is irreducible over Q, so the gcd with any nonzero element
        // of degree < 6 is a nonzero constant.
        debug_assert_eq!(poly_degree(&gcd), Some(0));
        let scale = gcd[0]
            .clone()
            .recip();
        let mut coords = zero_coords();
        for (i, c) in cofactor.iter().enumerate().take(DEGREE) {
            coords[i] = c * &scale;
        }
        let inv = Self { coords };
        debug_assert!((self * &inv).is_one());
        Ok(inv)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Decimal approximation with absolute error below 10^(−digits); digits
    /// are truncated toward zero and are true digits of the exact value, so
    /// asking for more digits never changes the ones already printed.
    pub fn to_decimal(&self, digits: usize) -> String {
        assert!(digits >= 1, "to_decimal needs at least one digit");
        if let Some(r) = self.as_rational() {
            return truncate_rational(r, digits);
        }
        // Guard digits for the interval enclosure of the irrational part.
        let mut work = digits + 8;
        loop {
            let (lo, hi) = self.enclosure(work);
            let s_lo = truncate_rational(&lo, digits);
            let s_hi = truncate_rational(&hi, digits);
            if s_lo == s_hi {
                return s_lo;
            }
            work += 16;
        }
    }

    /// Float image; exact arithmetic first, rounding only here. Purely
    /// rational values convert directly (so exact zeros stay exactly 0.0).
    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return rational_to_f64(r);
        }
        let (lo, hi) = self.enclosure(22);
        rational_to_f64(&((lo + hi) / rat(2, 1)))
    }

    /// Rational interval [lo, hi] enclosing the exact value, with
    /// hi − lo ≲ 6·10^(−frac_digits)·max|cᵢ|.
    fn enclosure(&self, frac_digits: usize) -> (Rational, Rational) {
        let mut lo = self.coords[0].clone();
        let mut hi = self.coords[0].clone();
        for (i, c) in self.coords.iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            let (p_lo, p_hi) = theta_pow_bounds(i as u32, frac_digits);
            if c.is_positive() {
                lo += c * &p_lo;
                hi += c * &p_hi;
            } else {
                lo += c * &p_hi;
                hi += c * &p_lo;
            }
        }
        (lo, hi)
    }
}

/// Bounds r/10^d ≤ θ^i < (r+1)/10^d from the exact integer 6th root of
/// 2^i·10^(6d).
fn theta_pow_bounds(i: u32, frac_digits: usize) -> (Rational, Rational) {
    let scale = BigInt::from(10u32).pow(frac_digits as u32);
    let target = BigInt::from(2u32).pow(i) * scale.pow(6u32);
    let root = target.nth_root(6);
    let lo = Rational::new(root.clone(), scale.clone());
    let hi = Rational::new(root + BigInt::one(), scale);
    (lo, hi)
}

/// Truncates toward zero at `digits` fractional digits.
fn truncate_rational(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r.numer() * &scale).abs() / r.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let sign = if r.is_negative() && !scaled.is_zero() {
        "-"
    } else {
        ""
    };
    let mut frac = frac_part.to_string();
    while frac.len() < digits {
        frac.insert(0, '0');
    }
    format!("{sign}{int_part}.{frac}")
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Add for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn add(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        let mut coords = zero_coords();
        for i in 0..DEGREE {
            coords[i] = &self.coords[i] + &rhs.coords[i];
        }
        AlgebraicNumber { coords }
    }
}

impl Sub for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn sub(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        let mut coords = zero_coords();
        for i in 0..DEGREE {
            coords[i] = &self.coords[i] - &rhs.coords[i];
        }
        AlgebraicNumber { coords }
    }
}

impl Neg for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        let mut coords = zero_coords();
        for i in 0..DEGREE {
            coords[i] = -self.coords[i].clone();
        }
        AlgebraicNumber { coords }
    }
}

impl Mul for &AlgebraicNumber {
    type Output = AlgebraicNumber;
    /// Polynomial product reduced by θ⁶ = 2.
    fn mul(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
        let mut raw = vec![Rational::zero(); 2 * DEGREE - 1];
        for i in 0..DEGREE {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..DEGREE {
                if rhs.coords[j].is_zero() {
                    continue;
                }
                raw[i + j] += &self.coords[i] * &rhs.coords[j];
            }
        }
        let mut coords = zero_coords();
        let two = rat(2, 1);
        for (k, v) in raw.into_iter().enumerate() {
            if k < DEGREE {
                coords[k] += v;
            } else {
                // θ^(6+m) = 2·θ^m
                coords[k - DEGREE] += v * &two;
            }
        }
        AlgebraicNumber { coords }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $method(self, rhs: AlgebraicNumber) -> AlgebraicNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&AlgebraicNumber> for AlgebraicNumber {
            type Output = AlgebraicNumber;
            fn $method(self, rhs: &AlgebraicNumber) -> AlgebraicNumber {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for AlgebraicNumber {
    type Output = AlgebraicNumber;
    fn neg(self) -> AlgebraicNumber {
        -&self
    }
}

/// Renders "c0 + c1*t + … + c5*t^5" with t = 2^(1/6), skipping zero terms;
/// `FromStr` parses the same format back losslessly.
impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FromStr for AlgebraicNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut coords = zero_coords();
        for raw_term in s.split('+') {
            let term = raw_term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let (coeff_str, power) = match term.split_once('*') {
                None => {
                    if term == "0" {
                        continue;
                    }
                    (term, 0usize)
                }
                Some((c, var)) => {
                    let var = var.trim();
                    let power = if var == "t" {
                        1
                    } else if let Some(p) = var.strip_prefix("t^") {
                        p.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad power in {term:?}")))?
                    } else {
                        return Err(Error::Parse(format!("bad variable in {term:?}")));
                    };
                    (c.trim(), power)
                }
            };
            if power >= DEGREE {
                return Err(Error::Parse(format!("power {power} out of range")));
            }
            let coeff = Rational::from_str(coeff_str)
                .map_err(|e| Error::Parse(format!("bad coefficient {coeff_str:?}: {e}")))?;
            coords[power] += coeff;
        }
        Ok(Self { coords })
    }
}

// Polynomial helpers over Q for the inversion path. Polynomials are dense
// coefficient vectors, lowest degree first.

fn poly_degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().map_or(false, Rational::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if poly_degree(a).is_none() || poly_degree(b).is_none() {
        return vec![Rational::zero()];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    poly_trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let ai = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let bi = b.get(i).cloned().unwrap_or_else(Rational::zero);
        out.push(ai - bi);
    }
    poly_trim(out)
}

fn poly_div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b_deg = poly_degree(b).expect("division by zero polynomial");
    let mut rem = poly_trim(a.to_vec());
    let Some(a_deg) = poly_degree(&rem) else {
        return (vec![Rational::zero()], rem);
    };
    if a_deg < b_deg {
        return (vec![Rational::zero()], rem);
    }
    let lead_inv = b[b_deg].clone().recip();
    let mut quot = vec![Rational::zero(); a_deg - b_deg + 1];
    while let Some(r_deg) = poly_degree(&rem) {
        if r_deg < b_deg {
            break;
        }
        let shift = r_deg - b_deg;
        let factor = &rem[r_deg] * &lead_inv;
        quot[shift] = factor.clone();
        for (i, bc) in b.iter().enumerate().take(b_deg + 1) {
            rem[shift + i] -= &factor * bc;
        }
        rem = poly_trim(rem);
    }
    (poly_trim(quot), rem)
}

/// Extended Euclid returning (gcd, s) with s·a ≡ gcd (mod b).
fn poly_half_extended_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut old_r = poly_trim(a.to_vec());
    let mut r = poly_trim(b.to_vec());
    let mut old_s = vec![Rational::one()];
    let mut s = vec![Rational::zero()];
    while poly_degree(&r).is_some() {
        let (q, rem) = poly_div_rem(&old_r, &r);
        let new_s = poly_sub(&old_s, &poly_mul(&q, &s));
        old_r = r;
        r = rem;
        old_s = s;
        s = new_s;
    }
    (old_r, old_s)
}
