//! Integer polynomials in one variable and cyclotomic factorisation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::CoxeterError;
use crate::arith::divisors;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntegerPolynomial {
    coefficients: BTreeMap<u32, BigInt>,
}

impl IntegerPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_dense(&[BigInt::one()])
    }

    pub fn from_dense(coeffs: &[BigInt]) -> Self {
        Self {
            coefficients: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(d, c)| (d as u32, c.clone()))
                .collect(),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_dense(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, BigInt)>>(terms: I) -> Self {
        let mut coefficients: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (d, c) in terms {
            *coefficients.entry(d).or_default() += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        Self { coefficients }
    }

    /// `1 + x + ... + x^{d-1}`.
    pub fn q_integer(d: u32) -> Self {
        Self::from_terms((0..d).map(|k| (k, BigInt::one())))
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: u32) -> Self {
        Self::from_terms([(n, BigInt::one()), (0, -BigInt::one())])
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coefficients.keys().next_back().copied()
    }

    pub fn coefficient(&self, degree: u32) -> BigInt {
        self.coefficients.get(&degree).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coefficients.iter().map(|(&d, c)| (d, c))
    }

    fn dense(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.degree().map_or(0, |d| d as usize + 1)];
        for (&d, c) in &self.coefficients {
            v[d as usize] = c.clone();
        }
        v
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.dense()
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Evaluation at a positive argument, for values known to be positive.
    pub fn eval_unsigned(&self, x: u64) -> Option<BigUint> {
        self.eval(&BigInt::from(x)).to_biguint()
    }

    /// `P(x^k)`.
    pub fn compose_power(&self, k: u32) -> Self {
        Self {
            coefficients: self
                .coefficients
                .iter()
                .map(|(&d, c)| (d * k, c.clone()))
                .collect(),
        }
    }

    /// Exact quotient over ℤ, or `None` when the divisor leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = divisor.coefficient(dd);
        let mut rem = self.dense();
        let div = divisor.dense();
        let n = rem.len() - 1;
        if n < dd as usize {
            return None;
        }
        let mut quot = vec![BigInt::zero(); n - dd as usize + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd as usize];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in div.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::from_dense(&quot))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Whether the polynomial is `±x^k`.
    fn is_monomial_unit(&self) -> bool {
        self.coefficients.len() == 1 && self.coefficients.values().all(|c| c.abs().is_one())
    }

    /// Renders as comma-separated `degree:coeff` pairs.
    pub fn to_pairs(&self) -> String {
        self.coefficients
            .iter()
            .map(|(d, c)| format!("{d}:{c}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_pairs(text: &str) -> Result<Self, String> {
        let mut terms = Vec::new();
        for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (d, c) = pair
                .split_once(':')
                .ok_or_else(|| format!("expected degree:coeff, got {pair:?}"))?;
            let d: u32 = d.trim().parse().map_err(|_| format!("bad degree {d:?}"))?;
            let c: BigInt = c.trim().parse().map_err(|_| format!("bad coefficient {c:?}"))?;
            terms.push((d, c));
        }
        Ok(Self::from_terms(terms))
    }
}

impl Mul for &IntegerPolynomial {
    type Output = IntegerPolynomial;
    fn mul(self, rhs: Self) -> IntegerPolynomial {
        IntegerPolynomial::from_terms(self.coefficients.iter().flat_map(|(&a, ca)| {
            rhs.coefficients
                .iter()
                .map(move |(&b, cb)| (a + b, ca * cb))
        }))
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&d, c)) in self.coefficients.iter().rev().enumerate() {
            let abs = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let coeff = if abs.is_one() && d > 0 {
                String::new()
            } else {
                abs.to_string()
            };
            match d {
                0 => write!(f, "{abs}")?,
                1 => write!(f, "{coeff}x")?,
                _ => write!(f, "{coeff}x^{d}")?,
            }
        }
        Ok(())
    }
}

fn mobius(n: u32) -> i8 {
    let mut n = n;
    let mut sign = 1i8;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// The cyclotomic polynomial `Φ_u`, from `x^u - 1 = Π_{d | u} Φ_d`.
pub fn cyclotomic(u: u32) -> IntegerPolynomial {
    assert!(u >= 1, "cyclotomic index must be positive");
    let mut num = IntegerPolynomial::one();
    let mut den = IntegerPolynomial::one();
    for d in divisors(u as u64) {
        let d = d as u32;
        match mobius(u / d) {
            1 => num = &num * &IntegerPolynomial::x_pow_minus_one(d),
            -1 => den = &den * &IntegerPolynomial::x_pow_minus_one(d),
            _ => {}
        }
    }
    num.div_exact(&den).expect("cyclotomic identity")
}

/// Multiplicities of `Φ_u` in a product of cyclotomic polynomials (up to a
/// unit `±x^k`).
pub fn factor_cyclotomic(
    poly: &IntegerPolynomial,
) -> Result<BTreeMap<u32, u32>, CoxeterError> {
    let mut rest = poly.clone();
    if rest.is_zero() {
        return Err(CoxeterError::NotCyclotomicProduct(poly.to_string()));
    }
    // Strip x^k.
    let low = *rest.coefficients.keys().next().expect("nonzero");
    if low > 0 {
        rest = IntegerPolynomial {
            coefficients: rest
                .coefficients
                .iter()
                .map(|(&d, c)| (d - low, c.clone()))
                .collect(),
        };
    }
    let mut out = BTreeMap::new();
    let mut u = 1u32;
    while !rest.is_monomial_unit() {
        let deg = rest.degree().unwrap_or(0);
        // φ(u) ≥ sqrt(u/2), so no cyclotomic factor has u beyond 2·deg².
        if u as u64 > 2 * (deg as u64) * (deg as u64) + 2 {
            return Err(CoxeterError::NotCyclotomicProduct(poly.to_string()));
        }
        if euler_phi(u) <= deg {
            let phi = cyclotomic(u);
            while let Some(q) = rest.div_exact(&phi) {
                rest = q;
                *out.entry(u).or_insert(0) += 1;
            }
        }
        u += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), IntegerPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(6), IntegerPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(6).to_string(), "x^2 - x + 1");
        assert_eq!(cyclotomic(12), IntegerPolynomial::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_product_identity() {
        for a in 1..=10i64 {
            for n in 1..=30u32 {
                let prod = divisors(n as u64).into_iter().fold(BigInt::one(), |acc, d| {
                    acc * cyclotomic(d as u32).eval(&BigInt::from(a))
                });
                assert_eq!(prod, BigInt::from(a).pow(n) - 1, "a={a} n={n}");
            }
        }
    }

    #[test]
    fn factor_q_integers() {
        // [4]_x = Φ_2 Φ_4.
        let f = factor_cyclotomic(&IntegerPolynomial::q_integer(4)).unwrap();
        assert_eq!(f, BTreeMap::from([(2, 1), (4, 1)]));
        let x3 = IntegerPolynomial::from_i64(&[0, 0, 0, 1]);
        let g = factor_cyclotomic(&(&x3 * &cyclotomic(5))).unwrap();
        assert_eq!(g, BTreeMap::from([(5, 1)]));
        assert!(factor_cyclotomic(&IntegerPolynomial::from_i64(&[1, 1, 1, 1, 1, 1, 1, 3])).is_err());
        assert!(factor_cyclotomic(&IntegerPolynomial::from_i64(&[2, 1])).is_err());
    }

    #[test]
    fn division() {
        let a = &IntegerPolynomial::q_integer(3) * &IntegerPolynomial::q_integer(2);
        assert_eq!(a.div_exact(&IntegerPolynomial::q_integer(2)), Some(IntegerPolynomial::q_integer(3)));
        assert_eq!(IntegerPolynomial::q_integer(3).div_exact(&IntegerPolynomial::q_integer(2)), None);
    }

    #[test]
    fn pairs_format() {
        let p = IntegerPolynomial::from_i64(&[1, 1, 1, 2, 1, 1, 1]);
        assert_eq!(p.to_pairs(), "0:1,1:1,2:1,3:2,4:1,5:1,6:1");
        assert_eq!(IntegerPolynomial::parse_pairs(&p.to_pairs()), Ok(p));
        assert!(IntegerPolynomial::parse_pairs("1-2").is_err());
    }
}
