//! Truncated formal power series over an abstract coefficient field, plus the
//! bivariate implicit-function solver used to mechanize the eigenvalue
//! expansions.
//!
//! A `TruncatedSeries` knows its coefficients only up to a truncation order;
//! arithmetic returns the shortest trustworthy order of its operands rather
//! than padding with zeros, so a coefficient that is present is always a
//! correct coefficient of the underlying formal series.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{AlgebraicNumber, Rational};

/// Field operations needed for exact series coefficients. Implemented for
/// `Rational` (fast, handy in tests) and `AlgebraicNumber` (the production
/// coefficient field of this crate).
pub trait CoefficientField: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
}

impl CoefficientField for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inverse(&self) -> Result<Self> {
        if num_traits::Zero::is_zero(self) {
            return Err(Error::Domain("inverse of zero rational".into()));
        }
        Ok(self.clone().recip())
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

impl CoefficientField for AlgebraicNumber {
    fn zero() -> Self {
        AlgebraicNumber::zero()
    }
    fn one() -> Self {
        AlgebraicNumber::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        AlgebraicNumber::inverse(self)
    }
    fn from_rational(r: &Rational) -> Self {
        AlgebraicNumber::from_rational(r.clone())
    }
    fn is_zero(&self) -> bool {
        AlgebraicNumber::is_zero(self)
    }
}

/// A formal power series known through a finite truncation order K:
/// coefficients c₀…c_K, nothing claimed beyond.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<F> {
    coeffs: Vec<F>,
}

impl<F: CoefficientField> TruncatedSeries<F> {
    pub fn from_coeffs(coeffs: Vec<F>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least c0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![F::zero(); order + 1],
        }
    }

    pub fn constant(value: F, order: usize) -> Self {
        let mut coeffs = vec![F::zero(); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(F::one(), order)
    }

    /// The identity series x (requires order ≥ 1).
    pub fn identity(order: usize) -> Self {
        assert!(order >= 1);
        let mut coeffs = vec![F::zero(); order + 1];
        coeffs[1] = F::one();
        Self { coeffs }
    }

    /// c·x^degree as a series of the given order.
    pub fn monomial(c: F, degree: usize, order: usize) -> Self {
        assert!(degree <= order);
        let mut coeffs = vec![F::zero(); order + 1];
        coeffs[degree] = c;
        Self { coeffs }
    }

    pub fn set_coeff(&mut self, n: usize, c: F) {
        assert!(n <= self.order());
        self.coeffs[n] = c;
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &F {
        assert!(
            n <= self.order(),
            "coefficient {n} beyond truncation order {}",
            self.order()
        );
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(F::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| self.coeffs[n].add(&other.coeffs[n]))
            .collect();
        Self { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| self.coeffs[n].sub(&other.coeffs[n]))
            .collect();
        Self { coeffs }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(F::neg).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// Cauchy product truncated at the shorter operand's order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![F::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        Self { coeffs }
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Composition outer ∘ inner by Horner evaluation; the inner series must
    /// have zero constant term.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "composition needs a zero constant term in the inner series".into(),
            ));
        }
        let order = outer.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = TruncatedSeries::constant(outer.coeffs[outer.order().min(order)].clone(), order);
        for n in (0..outer.order().min(order)).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].add(&outer.coeffs[n]);
        }
        Ok(acc)
    }

    /// Coefficients of (1+x)^r through the requested order, via the product
    /// recurrence c_n = c_{n−1}·(r−n+1)/n in exact field arithmetic.
    pub fn binomial(exponent: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(F::one());
        let mut running = crate::field::rat(1, 1);
        for n in 1..=order {
            running = running * (exponent - &crate::field::rat(n as i64 - 1, 1))
                / crate::field::rat(n as i64, 1);
            coeffs.push(F::from_rational(&running));
        }
        Self { coeffs }
    }
}

impl<F: CoefficientField + fmt::Display> fmt::Display for TruncatedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match n {
                0 => format!("{c}"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{n}"),
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

/// A bivariate series F(u, μ) stored as a polynomial in u whose coefficients
/// are truncated series in μ, under total-order truncation: the u^j
/// coefficient is kept through μ-order K−j.
#[derive(Clone, Debug)]
pub struct BivariateSeries<F> {
    u_coeffs: Vec<TruncatedSeries<F>>,
    order: usize,
}

impl<F: CoefficientField> BivariateSeries<F> {
    /// Builds from per-u-power μ-series; each series must be trustworthy
    /// through μ-order K−j (longer inputs are truncated down to that).
    pub fn new(u_coeffs: Vec<TruncatedSeries<F>>, order: usize) -> Self {
        assert!(!u_coeffs.is_empty());
        assert!(u_coeffs.len() <= order + 1, "u-degree exceeds total order");
        let truncated = u_coeffs
            .into_iter()
            .enumerate()
            .map(|(j, s)| {
                assert!(
                    s.order() >= order - j,
                    "u^{j} coefficient series too short for total order {order}"
                );
                s.truncate(order - j)
            })
            .collect();
        Self {
            u_coeffs: truncated,
            order,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value_at_origin(&self) -> &F {
        self.u_coeffs[0].coeff(0)
    }

    pub fn du_at_origin(&self) -> F {
        if self.u_coeffs.len() > 1 {
            self.u_coeffs[1].coeff(0).clone()
        } else {
            F::zero()
        }
    }

    /// Evaluates F(u(μ), μ) through total order K for a u with u(0) = 0.
    pub fn eval_at(&self, u: &TruncatedSeries<F>) -> TruncatedSeries<F> {
        assert!(u.coeff(0).is_zero(), "substituted series must vanish at 0");
        let pad = |s: &TruncatedSeries<F>| {
            let mut coeffs = s.coeffs().to_vec();
            coeffs.resize(self.order + 1, F::zero());
            TruncatedSeries::from_coeffs(coeffs)
        };
        let u_full = pad(&u.truncate(u.order().min(self.order)));
        let mut acc = pad(self.u_coeffs.last().expect("nonempty"));
        for j in (0..self.u_coeffs.len() - 1).rev() {
            acc = acc.mul(&u_full).add(&pad(&self.u_coeffs[j]));
        }
        acc
    }
}

/// F(u, μ) together with the regularity witness F(0,0) = 0, ∂F/∂u(0,0) ≠ 0
/// demanded by the implicit function theorem.
#[derive(Clone, Debug)]
pub struct ImplicitProblem<F> {
    f: BivariateSeries<F>,
    du_inverse: F,
}

impl<F: CoefficientField> ImplicitProblem<F> {
    pub fn new(f: BivariateSeries<F>) -> Result<Self> {
        if !f.value_at_origin().is_zero() {
            return Err(Error::Domain(
                "implicit problem requires F(0,0) = 0".into(),
            ));
        }
        let du = f.du_at_origin();
        let du_inverse = du.inverse().map_err(|_| {
            Error::Domain("implicit problem is singular: ∂F/∂u(0,0) = 0".into())
        })?;
        Ok(Self { f, du_inverse })
    }

    pub fn order(&self) -> usize {
        self.f.order()
    }

    /// Solves F(u(μ), μ) ≡ 0 order by order: the μⁿ coefficient of the
    /// residual at the partial solution is linear in aₙ through ∂F/∂u(0,0).
    pub fn solve(&self, order: usize) -> Result<TruncatedSeries<F>> {
        if order > self.f.order() {
            return Err(Error::Domain(format!(
                "requested order {order} exceeds the constructed order {}",
                self.f.order()
            )));
        }
        let mut u = TruncatedSeries::zero(self.f.order());
        for n in 1..=order {
            let residual = self.f.eval_at(&u);
            let a_n = residual.coeff(n).mul(&self.du_inverse).neg();
            u.coeffs[n] = a_n;
        }
        Ok(u.truncate(order))
    }

    /// The residual series F(u(μ), μ), trustworthy through u's order;
    /// identically zero there for a correct solution.
    pub fn residual(&self, u: &TruncatedSeries<F>) -> TruncatedSeries<F> {
        let order = u.order().min(self.f.order());
        self.f.eval_at(u).truncate(order)
    }
}
