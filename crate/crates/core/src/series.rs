//! Truncated formal power series in one variable `q` with exact integer
//! coefficients, plus q-Pochhammer builders.
//!
//! A [`FormalSeries`] of order `N` stores `c_0..=c_N`; everything above `q^N`
//! is unknown. Binary operations truncate to the smaller order of their
//! operands, so a result is never reported past what both inputs determine.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A substitution value `c·q^e` with `c ∈ {-1, 0, 1}`.
///
/// The zero monomial always has exponent 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    coefficient: i8,
    exponent: usize,
}

impl Monomial {
    pub const ZERO: Monomial = Monomial { coefficient: 0, exponent: 0 };
    pub const ONE: Monomial = Monomial { coefficient: 1, exponent: 0 };

    pub fn new(coefficient: i8, exponent: usize) -> Result<Self> {
        match coefficient {
            0 if exponent == 0 => Ok(Self::ZERO),
            0 => Err(Error::param("the zero monomial must have exponent 0")),
            -1 | 1 => Ok(Monomial { coefficient, exponent }),
            c => Err(Error::param(format!("monomial coefficient {c} is not in {{-1, 0, 1}}"))),
        }
    }

    /// `q^e`
    pub const fn q_pow(exponent: usize) -> Self {
        Monomial { coefficient: 1, exponent }
    }

    /// `-q^e`
    pub const fn neg_q_pow(exponent: usize) -> Self {
        Monomial { coefficient: -1, exponent }
    }

    pub fn coefficient(self) -> i8 {
        self.coefficient
    }

    pub fn exponent(self) -> usize {
        self.exponent
    }

    pub fn is_zero(self) -> bool {
        self.coefficient == 0
    }

    /// Multiplies by `q^k`.
    pub fn shifted(self, k: usize) -> Self {
        if self.is_zero() {
            self
        } else {
            Monomial { coefficient: self.coefficient, exponent: self.exponent + k }
        }
    }

    /// `self / other`, defined only when the quotient is again a monomial with
    /// a nonnegative exponent.
    pub fn checked_div(self, other: Monomial) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::ZERO);
        }
        let exponent = self.exponent.checked_sub(other.exponent)?;
        Some(Monomial { coefficient: self.coefficient * other.coefficient, exponent })
    }

    pub fn to_series(self, order: usize) -> FormalSeries {
        let mut s = FormalSeries::zero(order);
        if !self.is_zero() && self.exponent <= order {
            s.coeffs[self.exponent] = BigInt::from(self.coefficient);
        }
        s
    }
}

impl Neg for Monomial {
    type Output = Monomial;

    fn neg(self) -> Monomial {
        Monomial { coefficient: -self.coefficient, exponent: self.exponent }
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, other: Monomial) -> Monomial {
        if self.is_zero() || other.is_zero() {
            return Monomial::ZERO;
        }
        Monomial { coefficient: self.coefficient * other.coefficient, exponent: self.exponent + other.exponent }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.coefficient < 0 { "-" } else { "" };
        match (self.coefficient, self.exponent) {
            (0, _) => write!(f, "0"),
            (_, 0) => write!(f, "{sign}1"),
            (_, 1) => write!(f, "{sign}q"),
            (_, e) => write!(f, "{sign}q^{e}"),
        }
    }
}

/// A power series `c_0 + c_1 q + ... + c_N q^N + O(q^{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalSeries {
    coeffs: Vec<BigInt>,
}

impl FormalSeries {
    pub fn zero(order: usize) -> Self {
        FormalSeries { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Builds a series from its low-order coefficients, zero-padded up to
    /// `order`. Coefficients past `order` are dropped.
    pub fn make<I, T>(coeffs: I, order: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut s = Self::zero(order);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c.into();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> Result<&BigInt> {
        self.coeffs.get(n).ok_or(Error::BeyondTruncation { n, order: self.order() })
    }

    pub(crate) fn coeff_mut(&mut self, n: usize) -> Option<&mut BigInt> {
        self.coeffs.get_mut(n)
    }

    /// Index of the first nonzero coefficient, or `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Discards coefficients above `order`. Asking for a larger order than the
    /// series carries returns it unchanged.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        FormalSeries { coeffs: self.coeffs[..=keep].to_vec() }
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        FormalSeries { coeffs: self.coeffs.iter().map(|c| c * &k).collect() }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut s = Self::zero(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            match s.coeffs.get_mut(i + k) {
                Some(slot) => *slot = c.clone(),
                None => break,
            }
        }
        s
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let unit = &self.coeffs[0];
        if unit.abs() != BigInt::one() {
            return Err(Error::NonInvertible(unit.clone()));
        }
        let n = self.order();
        let mut inv = Self::zero(n);
        // 1/u = u for u = ±1
        inv.coeffs[0] = unit.clone();
        let nonzero: Vec<usize> = (1..=n).filter(|&k| !self.coeffs[k].is_zero()).collect();
        for i in 1..=n {
            let mut acc = BigInt::zero();
            for &k in nonzero.iter().take_while(|&&k| k <= i) {
                acc += &self.coeffs[k] * &inv.coeffs[i - k];
            }
            inv.coeffs[i] = -(acc * unit);
        }
        Ok(inv)
    }

    /// Multiplies by the sparse polynomial `Σ c_i q^{e_i}`.
    pub fn mul_sparse(&self, terms: &[(i64, usize)]) -> Self {
        let mut out = Self::zero(self.order());
        for &(c, e) in terms {
            if c == 0 {
                continue;
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                let Some(slot) = out.coeffs.get_mut(i + e) else { break };
                if !a.is_zero() {
                    *slot += a * c;
                }
            }
        }
        out
    }

    /// In-place multiplication by `1 + c·q^e`.
    pub fn mul_binomial_in_place(&mut self, c: i64, e: usize) {
        if c == 0 {
            return;
        }
        if e == 0 {
            let k = BigInt::from(1 + c);
            self.coeffs.iter_mut().for_each(|x| *x *= &k);
            return;
        }
        for i in (e..self.coeffs.len()).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            if !lo[i - e].is_zero() {
                hi[0] += &lo[i - e] * c;
            }
        }
    }

    /// In-place division by `1 + c·q^e`.
    pub fn div_binomial_in_place(&mut self, c: i64, e: usize) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        if e == 0 {
            return match 1 + c {
                1 => Ok(()),
                -1 => {
                    self.coeffs.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    Ok(())
                }
                u => Err(Error::NonInvertible(BigInt::from(u))),
            };
        }
        for i in e..self.coeffs.len() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            if !lo[i - e].is_zero() {
                hi[0] -= &lo[i - e] * c;
            }
        }
        Ok(())
    }

    /// Multiplies by the finite product `(a; q^step)_n`.
    pub fn mul_poch(&self, a: Monomial, step: usize, n: usize) -> Self {
        let mut s = self.clone();
        for e in poch_factor_exponents(a, step, n) {
            if e > s.order() && e > 0 {
                break;
            }
            s.mul_binomial_in_place(-i64::from(a.coefficient), e);
        }
        s
    }

    /// Divides by the finite product `(a; q^step)_n`.
    pub fn div_poch(&self, a: Monomial, step: usize, n: usize) -> Result<Self> {
        let mut s = self.clone();
        for e in poch_factor_exponents(a, step, n) {
            if e > s.order() && e > 0 {
                break;
            }
            s.div_binomial_in_place(-i64::from(a.coefficient), e)?;
        }
        Ok(s)
    }

    /// Multiplies by `(a; q^step)_∞`.
    pub fn mul_poch_infinite(&self, a: Monomial, step: usize) -> Result<Self> {
        check_convergent(a)?;
        Ok(self.mul_poch(a, step, infinite_factor_count(a, step, self.order())))
    }

    /// Divides by `(a; q^step)_∞`.
    pub fn div_poch_infinite(&self, a: Monomial, step: usize) -> Result<Self> {
        check_convergent(a)?;
        self.div_poch(a, step, infinite_factor_count(a, step, self.order()))
    }

    /// Coefficients as `i64`, or `None` if any coefficient does not fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

/// Exponents of the factors `1 - a·q^{step(k-1)}` for `k = 1..=n`, in
/// increasing order; empty when `a` is zero.
fn poch_factor_exponents(a: Monomial, step: usize, n: usize) -> impl Iterator<Item = usize> {
    let len = if a.is_zero() { 0 } else { n };
    (0..len).map(move |k| a.exponent + step * k)
}

fn check_convergent(a: Monomial) -> Result<()> {
    if !a.is_zero() && a.exponent == 0 {
        return Err(Error::DivergentProduct(a.to_string()));
    }
    Ok(())
}

/// Number of factors of `(a; q^step)_∞` whose lowest exponent is at most `order`.
fn infinite_factor_count(a: Monomial, step: usize, order: usize) -> usize {
    if a.is_zero() || a.exponent > order {
        0
    } else {
        (order - a.exponent) / step.max(1) + 1
    }
}

/// `(a; q^step)_n = Π_{k=1}^{n} (1 - a·q^{step(k-1)})`, truncated at `order`.
pub fn poch_finite(a: Monomial, step: usize, n: usize, order: usize) -> FormalSeries {
    FormalSeries::one(order).mul_poch(a, step, n)
}

/// `(a; q^step)_∞`, truncated at `order`.
pub fn poch_infinite(a: Monomial, step: usize, order: usize) -> Result<FormalSeries> {
    FormalSeries::one(order).mul_poch_infinite(a, step)
}

fn zip_with(a: &FormalSeries, b: &FormalSeries, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> FormalSeries {
    FormalSeries { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f(x, y)).collect() }
}

impl Add for &FormalSeries {
    type Output = FormalSeries;
    fn add(self, rhs: &FormalSeries) -> FormalSeries {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &FormalSeries {
    type Output = FormalSeries;
    fn sub(self, rhs: &FormalSeries) -> FormalSeries {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &FormalSeries {
    type Output = FormalSeries;
    fn neg(self) -> FormalSeries {
        FormalSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &FormalSeries {
    type Output = FormalSeries;
    fn mul(self, rhs: &FormalSeries) -> FormalSeries {
        let order = self.order().min(rhs.order());
        let mut out = FormalSeries::zero(order);
        let rhs_nonzero: Vec<(usize, &BigInt)> =
            rhs.coeffs[..=order].iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in rhs_nonzero.iter().take_while(|(j, _)| i + j <= order) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for FormalSeries {
            type Output = FormalSeries;
            fn $method(self, rhs: FormalSeries) -> FormalSeries {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FormalSeries> for FormalSeries {
            type Output = FormalSeries;
            fn $method(self, rhs: &FormalSeries) -> FormalSeries {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for FormalSeries {
    type Output = FormalSeries;
    fn neg(mut self) -> FormalSeries {
        self.coeffs.iter_mut().for_each(|x| *x = -std::mem::take(x));
        self
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coef = if mag.is_one() && i > 0 { String::new() } else { mag.to_string() };
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{coef}q")?,
                _ => write!(f, "{coef}q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &[i64], order: usize) -> FormalSeries {
        FormalSeries::make(c.iter().copied(), order)
    }

    #[test]
    fn make_pads_to_order() {
        assert_eq!(s(&[1], 3).coeffs(), &[1.into(), 0.into(), 0.into(), 0.into()]);
        assert_eq!(s(&[0, 1], 2), Monomial::q_pow(1).to_series(2));
        assert_eq!(s(&[1, -1], 1).order(), 1);
    }

    #[test]
    fn additive_ops() {
        assert_eq!(&s(&[1, -1], 3) + &s(&[0, 1], 3), FormalSeries::one(3));
        assert!((&FormalSeries::one(4) - &FormalSeries::one(4)).is_zero());
        assert_eq!(s(&[1, 1], 2).scale(3), s(&[3, 3], 2));
    }

    #[test]
    fn mixed_order_truncates_to_min() {
        let a = s(&[1, 1, 1, 1, 1], 4);
        let b = s(&[1, 1], 2);
        assert_eq!((&a + &b).order(), 2);
        assert_eq!((&a * &b).order(), 2);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s(&[1, 1], 2) * s(&[1, -1], 2), s(&[1, 0, -1], 2));
        assert_eq!(s(&[1, -1], 3) * s(&[1, 1, 1, 1], 3), FormalSeries::one(3));
        let q = Monomial::q_pow(1).to_series(1);
        assert!((&q * &q).is_zero());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(FormalSeries::one(3).shift(2), s(&[0, 0, 1], 3));
        assert_eq!(s(&[1, 1], 3).shift(0), s(&[1, 1], 3));
        assert!(FormalSeries::one(3).shift(5).is_zero());
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(s(&[1, -1], 3).reciprocal().unwrap(), s(&[1, 1, 1, 1], 3));
        assert_eq!(FormalSeries::one(5).reciprocal().unwrap(), FormalSeries::one(5));
        assert_eq!(s(&[0, 1, 1], 4).reciprocal(), Err(Error::NonInvertible(BigInt::zero())));
        assert!(s(&[2, 1], 4).reciprocal().is_err());
        assert_eq!(s(&[-1, 1], 3).reciprocal().unwrap(), s(&[-1, -1, -1, -1], 3));
    }

    #[test]
    fn coefficient_access() {
        let x = s(&[1, -1], 1);
        assert_eq!(*x.coefficient(1).unwrap(), BigInt::from(-1));
        assert_eq!(*x.coefficient(0).unwrap(), BigInt::from(1));
        assert_eq!(x.coefficient(5), Err(Error::BeyondTruncation { n: 5, order: 1 }));
    }

    #[test]
    fn poch_examples() {
        assert_eq!(poch_finite(Monomial::q_pow(1), 1, 2, 3), s(&[1, -1, -1, 1], 3));
        assert_eq!(poch_finite(Monomial::q_pow(7), 3, 0, 5), FormalSeries::one(5));
        assert_eq!(poch_finite(Monomial::q_pow(2), 2, 1, 4), s(&[1, 0, -1], 4));
        assert_eq!(poch_infinite(Monomial::q_pow(1), 1, 5).unwrap(), s(&[1, -1, -1, 0, 0, 1], 5));
        assert_eq!(poch_infinite(Monomial::q_pow(2), 2, 3).unwrap(), s(&[1, 0, -1], 3));
        assert_eq!(poch_infinite(Monomial::ZERO, 1, 3).unwrap(), FormalSeries::one(3));
        assert!(matches!(poch_infinite(Monomial::ONE, 1, 3), Err(Error::DivergentProduct(_))));
    }

    #[test]
    fn poch_with_constant_factor() {
        // (1;q)_2 = 0, (-1;q)_1 = 2
        assert!(poch_finite(Monomial::ONE, 1, 2, 4).is_zero());
        assert_eq!(poch_finite(Monomial::neg_q_pow(0), 1, 1, 2), s(&[2], 2));
        assert!(FormalSeries::one(3).div_poch(Monomial::ONE, 1, 1).is_err());
    }

    #[test]
    fn pentagonal_numbers() {
        let euler = poch_infinite(Monomial::q_pow(1), 1, 60).unwrap();
        let mut expected = FormalSeries::zero(60);
        for k in -7i64..=7 {
            let e = (k * (3 * k - 1) / 2) as usize;
            if e <= 60 {
                *expected.coeff_mut(e).unwrap() += if k % 2 == 0 { 1 } else { -1 };
            }
        }
        assert_eq!(euler, expected);
    }

    #[test]
    fn monomial_arithmetic() {
        assert!(Monomial::new(0, 3).is_err());
        assert!(Monomial::new(2, 1).is_err());
        let a = Monomial::neg_q_pow(2);
        assert_eq!(a * Monomial::q_pow(3), Monomial::neg_q_pow(5));
        assert_eq!(Monomial::q_pow(4).checked_div(Monomial::q_pow(1)), Some(Monomial::q_pow(3)));
        assert_eq!(Monomial::q_pow(1).checked_div(Monomial::q_pow(4)), None);
        assert_eq!(a.to_string(), "-q^2");
        assert_eq!(Monomial::ZERO.shifted(3), Monomial::ZERO);
    }

    #[test]
    fn display() {
        assert_eq!(s(&[1, -1, 0, 2], 3).to_string(), "1 - q + 2q^3 + O(q^4)");
        assert_eq!(FormalSeries::zero(2).to_string(), "0 + O(q^3)");
    }

    fn arb_series(order: usize) -> impl Strategy<Value = FormalSeries> {
        prop::collection::vec(-20i64..20, order + 1).prop_map(move |v| s(&v, order))
    }

    fn arb_unit_series(order: usize) -> impl Strategy<Value = FormalSeries> {
        (prop::bool::ANY, prop::collection::vec(-20i64..20, order)).prop_map(move |(neg, rest)| {
            let mut v = vec![if neg { -1 } else { 1 }];
            v.extend(rest);
            s(&v, order)
        })
    }

    fn arb_monomial() -> impl Strategy<Value = Monomial> {
        prop_oneof![
            Just(Monomial::ZERO),
            (1usize..6).prop_map(Monomial::q_pow),
            (1usize..6).prop_map(Monomial::neg_q_pow),
        ]
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(8), b in arb_series(8), c in arb_series(8)) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn reciprocal_is_inverse(a in arb_unit_series(12)) {
            let inv = a.reciprocal().unwrap();
            prop_assert_eq!(&a * &inv, FormalSeries::one(12));
        }

        #[test]
        fn binomial_division_matches_reciprocal(a in arb_series(15), c in -1i64..=1, e in 1usize..5) {
            let mut fast = a.clone();
            fast.div_binomial_in_place(c, e).unwrap();
            let mut factor = FormalSeries::one(15);
            *factor.coeff_mut(e).unwrap() += c;
            prop_assert_eq!(fast, &a * &factor.reciprocal().unwrap());
        }

        #[test]
        fn poch_step_recurrence(a in arb_monomial(), step in 1usize..4, n in 0usize..6) {
            let order = 20;
            let next = poch_finite(a, step, n + 1, order);
            let factor = &FormalSeries::one(order) - &a.shifted(step * n).to_series(order);
            prop_assert_eq!(next, &poch_finite(a, step, n, order) * &factor);
        }

        #[test]
        fn poch_infinite_agrees_with_long_finite(a in arb_monomial(), step in 1usize..4) {
            let order = 25;
            // enough factors that the next one starts above the order
            let k = order + 2;
            prop_assert_eq!(poch_infinite(a, step, order).unwrap(), poch_finite(a, step, k, order));
        }

        #[test]
        fn truncation_monotone(a in arb_unit_series(16), b in arb_series(16), m in 0usize..16) {
            let high = &a * &b;
            let low = &a.truncate(m) * &b.truncate(m);
            prop_assert_eq!(high.truncate(m), low);
            prop_assert_eq!(a.reciprocal().unwrap().truncate(m), a.truncate(m).reciprocal().unwrap());
        }
    }
}
