//! Finite Dirichlet series with integer coefficients.
//!
//! A [`FiniteDirichletSeries`] is an element of the monoid ring of `(ℕ, ×)`
//! over `ℤ`: a finite map from index `n ≥ 1` to a nonzero coefficient,
//! standing for `Σ a_n / n^s`. Zero coefficients are never stored, so
//! structural equality is ring equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_prime::nt_funcs::factors;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series is not divisible by the given divisor")]
    NotDivisible,
    #[error("division by the zero series")]
    DivisionByZero,
    #[error("factor {position} has coefficient {coefficient} at index 1 (expected 1)")]
    FactorNotMonic {
        position: usize,
        coefficient: BigInt,
    },
    #[error("index 0 is not a valid Dirichlet index")]
    ZeroIndex,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteDirichletSeries {
    terms: BTreeMap<BigUint, BigInt>,
}

impl FiniteDirichletSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigUint::one(), BigInt::one())
    }

    /// `c / n^s`; zero when `c = 0`.
    pub fn monomial(index: BigUint, coefficient: BigInt) -> Self {
        assert!(!index.is_zero(), "Dirichlet index must be positive");
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(index, coefficient);
        }
        Self { terms }
    }

    /// Sums the given terms; repeated indices accumulate.
    pub fn from_terms<I>(terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (BigUint, BigInt)>,
    {
        let mut out = Self::zero();
        for (n, c) in terms {
            if n.is_zero() {
                return Err(SeriesError::ZeroIndex);
            }
            out.add_term(n, c);
        }
        Ok(out)
    }

    /// Convenience constructor from machine integers.
    ///
    /// Panics on index 0.
    pub fn from_pairs(pairs: &[(u64, i64)]) -> Self {
        Self::from_terms(
            pairs
                .iter()
                .map(|&(n, c)| (BigUint::from(n), BigInt::from(c))),
        )
        .expect("index 0 in from_pairs")
    }

    pub(crate) fn add_term(&mut self, index: BigUint, coefficient: BigInt) {
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(index);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, index: &BigUint) -> BigInt {
        self.terms.get(index).cloned().unwrap_or_default()
    }

    pub fn coefficient_u64(&self, index: u64) -> BigInt {
        self.coefficient(&BigUint::from(index))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigInt)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coefficient(&BigUint::one()).is_one()
    }

    pub fn max_index(&self) -> Option<&BigUint> {
        self.terms.keys().next_back()
    }

    /// Smallest index greater than 1 carrying a nonzero coefficient.
    pub fn first_nontrivial(&self) -> Option<(&BigUint, &BigInt)> {
        self.terms.iter().find(|(n, _)| !n.is_one())
    }

    /// Whether some index with nonzero coefficient is divisible by `q`.
    pub fn has_index_divisible_by(&self, q: u64) -> bool {
        let q = BigUint::from(q);
        self.terms.keys().any(|n| (n % &q).is_zero())
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.clone(), c * factor))
                .collect(),
        }
    }

    /// Drops every term whose index exceeds `bound`.
    pub fn truncate(&self, bound: &BigUint) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(n, _)| *n <= bound)
                .map(|(n, c)| (n.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product with every term above `bound` discarded.
    pub fn mul_truncated(&self, other: &Self, bound: &BigUint) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            if a > bound {
                break;
            }
            for (b, cb) in &other.terms {
                let n = a * b;
                if &n > bound {
                    break;
                }
                out.add_term(n, ca * cb);
            }
        }
        out
    }

    /// Deletes every term whose index is divisible by a prime of `pi`.
    pub fn pi_part(&self, pi: &[u64]) -> Self {
        let primes: Vec<BigUint> = pi.iter().map(|&p| BigUint::from(p)).collect();
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(n, _)| primes.iter().all(|p| !(*n % p).is_zero()))
                .map(|(n, c)| (n.clone(), c.clone()))
                .collect(),
        }
    }

    /// The substitution `s ↦ r·s - r + 1`: each `c / n^s` becomes
    /// `c·n^{r-1} / (n^r)^s`.
    pub fn substitute(&self, r: u32) -> Self {
        assert!(r >= 1, "substitution exponent must be positive");
        if r == 1 {
            return self.clone();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| {
                    let scale = BigInt::from(n.pow(r - 1));
                    (n.pow(r), c * scale)
                })
                .collect(),
        }
    }

    /// `Σ a_n / n^t` as an exact fraction.
    pub fn evaluate(&self, t: u32) -> BigRational {
        self.terms
            .iter()
            .fold(BigRational::zero(), |acc, (n, c)| {
                acc + BigRational::new(c.clone(), BigInt::from(n.pow(t)))
            })
    }

    /// Exact quotient `self / divisor`, if it exists as a finite series.
    ///
    /// Indices are mapped to exponent vectors over a coprime basis of all
    /// indices involved (the primes, whenever every index factors), and
    /// leading terms are eliminated under the graded-lexicographic order
    /// with the smaller basis element more significant.
    pub fn divide(&self, divisor: &Self) -> Result<Self, SeriesError> {
        if divisor.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let basis = coprime_basis(self.terms.keys().chain(divisor.terms.keys()));
        let encode = |s: &Self| -> BTreeMap<Monomial, BigInt> {
            s.terms
                .iter()
                .map(|(n, c)| (Monomial::encode(n, &basis), c.clone()))
                .collect()
        };
        let divisor_terms = encode(divisor);
        let (lead_mono, lead_coeff) = divisor_terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
            .expect("nonzero divisor");
        let mut remainder = encode(self);
        let mut quotient: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        while let Some((mono, coeff)) = remainder
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            let shift = mono.checked_div(&lead_mono).ok_or(SeriesError::NotDivisible)?;
            let (q, r) = coeff.div_rem(&lead_coeff);
            if !r.is_zero() {
                return Err(SeriesError::NotDivisible);
            }
            for (m, c) in &divisor_terms {
                let key = m.mul(&shift);
                let entry = remainder.entry(key.clone()).or_default();
                *entry -= c * &q;
                if entry.is_zero() {
                    remainder.remove(&key);
                }
            }
            *quotient.entry(shift).or_default() += q;
        }
        Self::from_terms(
            quotient
                .into_iter()
                .map(|(m, c)| (m.decode(&basis), c)),
        )
    }

    /// Writes the series in the line format `<index> <coefficient>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, c) in &self.terms {
            out.push_str(&format!("{n} {c}\n"));
        }
        out
    }

    /// Parses the line format; `#` lines are comments and blank lines are
    /// skipped. Indices must be strictly increasing.
    pub fn from_text(text: &str) -> Result<Self, SeriesError> {
        let mut terms = BTreeMap::new();
        let mut last: Option<BigUint> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| SeriesError::Parse {
                line: i + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let (Some(n), Some(c), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(parse_err(format!("expected `<index> <coefficient>`, got {line:?}")));
            };
            let n: BigUint = n
                .parse()
                .map_err(|_| parse_err(format!("bad index {n:?}")))?;
            let c: BigInt = c
                .parse()
                .map_err(|_| parse_err(format!("bad coefficient {c:?}")))?;
            if n.is_zero() {
                return Err(parse_err("index 0".into()));
            }
            if let Some(prev) = &last {
                if &n <= prev {
                    return Err(parse_err(format!("index {n} not greater than {prev}")));
                }
            }
            last = Some(n.clone());
            if !c.is_zero() {
                terms.insert(n, c);
            }
        }
        Ok(Self { terms })
    }

    /// Renders terms divisible by their index as `k·n^(1-s)`, the shape of
    /// parabolic-index formulas; other terms keep the `c/n^s` form.
    pub fn display_reduced(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (n, c)) in self.terms.iter().enumerate() {
            let (sign, abs) = (c.is_negative(), c.abs());
            push_sign(&mut out, i == 0, sign);
            if n.is_one() {
                out.push_str(&abs.to_string());
                continue;
            }
            let nb = BigInt::from(n.clone());
            let (k, r) = abs.div_rem(&nb);
            if r.is_zero() {
                if k.is_one() {
                    out.push_str(&format!("{n}^(1-s)"));
                } else {
                    out.push_str(&format!("{k}·{n}^(1-s)"));
                }
            } else {
                out.push_str(&format!("{abs}/{n}^s"));
            }
        }
        out
    }
}

fn push_sign(out: &mut String, first: bool, negative: bool) {
    match (first, negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
}

impl fmt::Display for FiniteDirichletSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (n, c)) in self.terms.iter().enumerate() {
            push_sign(&mut out, i == 0, c.is_negative());
            if n.is_one() {
                out.push_str(&c.abs().to_string());
            } else {
                out.push_str(&format!("{}/{}^s", c.abs(), n));
            }
        }
        f.write_str(&out)
    }
}

impl Add for &FiniteDirichletSeries {
    type Output = FiniteDirichletSeries;
    fn add(self, rhs: Self) -> FiniteDirichletSeries {
        let mut out = self.clone();
        for (n, c) in &rhs.terms {
            out.add_term(n.clone(), c.clone());
        }
        out
    }
}

impl Neg for &FiniteDirichletSeries {
    type Output = FiniteDirichletSeries;
    fn neg(self) -> FiniteDirichletSeries {
        FiniteDirichletSeries {
            terms: self.terms.iter().map(|(n, c)| (n.clone(), -c)).collect(),
        }
    }
}

impl Sub for &FiniteDirichletSeries {
    type Output = FiniteDirichletSeries;
    fn sub(self, rhs: Self) -> FiniteDirichletSeries {
        self + &(-rhs)
    }
}

impl Mul for &FiniteDirichletSeries {
    type Output = FiniteDirichletSeries;
    fn mul(self, rhs: Self) -> FiniteDirichletSeries {
        let mut out = FiniteDirichletSeries::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a * b, ca * cb);
            }
        }
        out
    }
}

/// Product of monic factors with every index above `bound` dropped.
///
/// Exact on `[1, bound]`: indices never shrink under multiplication, so
/// terms past the bound cannot feed back into it.
pub fn truncated_product(
    factors: &[FiniteDirichletSeries],
    bound: &BigUint,
) -> Result<FiniteDirichletSeries, SeriesError> {
    let mut acc = FiniteDirichletSeries::one();
    for (position, factor) in factors.iter().enumerate() {
        let lead = factor.coefficient(&BigUint::one());
        if !lead.is_one() {
            return Err(SeriesError::FactorNotMonic {
                position,
                coefficient: lead,
            });
        }
        acc = acc.mul_truncated(factor, bound);
    }
    Ok(acc.truncate(bound))
}

/// Exponent vector over a coprime basis, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Monomial(Vec<u32>);

impl Monomial {
    fn encode(n: &BigUint, basis: &[BigUint]) -> Self {
        let mut rest = n.clone();
        let exps = basis
            .iter()
            .map(|b| {
                let mut e = 0;
                loop {
                    let (q, r) = rest.div_rem(b);
                    if !r.is_zero() {
                        break e;
                    }
                    rest = q;
                    e += 1;
                }
            })
            .collect();
        debug_assert!(rest.is_one(), "index {n} not covered by basis");
        Monomial(exps)
    }

    fn decode(&self, basis: &[BigUint]) -> BigUint {
        basis
            .iter()
            .zip(&self.0)
            .fold(BigUint::one(), |acc, (b, &e)| acc * b.pow(e))
    }

    fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pairwise-coprime set, sorted ascending, generating every given index.
///
/// Indices are factored where the factoriser succeeds; leftover composite
/// cofactors are refined by gcd splitting.
fn coprime_basis<'a>(indices: impl Iterator<Item = &'a BigUint>) -> Vec<BigUint> {
    let mut atoms: BTreeSet<BigUint> = BTreeSet::new();
    for n in indices {
        if n.is_one() {
            continue;
        }
        let (found, rest) = factors(n.clone(), None);
        atoms.extend(found.into_keys());
        if let Some(rest) = rest {
            atoms.extend(rest);
        }
    }
    let mut basis: Vec<BigUint> = atoms.into_iter().collect();
    'refine: loop {
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if !g.is_one() {
                    let a = &basis[i] / &g;
                    let b = &basis[j] / &g;
                    let mut next: BTreeSet<BigUint> = basis
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, x)| x.clone())
                        .collect();
                    next.extend([g, a, b].into_iter().filter(|x| !x.is_one()));
                    basis = next.into_iter().collect();
                    continue 'refine;
                }
            }
        }
        break;
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(pairs: &[(u64, i64)]) -> FiniteDirichletSeries {
        FiniteDirichletSeries::from_pairs(pairs)
    }

    #[test]
    fn multiplication_examples() {
        let a = s(&[(1, 1), (2, -1)]);
        assert_eq!(&a * &FiniteDirichletSeries::one(), a);
        assert_eq!(
            &s(&[(1, 1), (7, -14)]) * &s(&[(1, 1), (7, 14)]),
            s(&[(1, 1), (49, -196)])
        );
        assert_eq!(
            &s(&[(1, 1), (2, -4)]) * &s(&[(1, 1), (3, -9)]),
            s(&[(1, 1), (2, -4), (3, -9), (6, 36)])
        );
    }

    #[test]
    fn pi_part_examples() {
        let a = s(&[(1, 1), (7, -14), (21, 21)]);
        assert_eq!(a.pi_part(&[3]), s(&[(1, 1), (7, -14)]));
        assert_eq!(a.pi_part(&[]), a);
        let u42 = s(&[(1, 1), (27, -27), (45, -45), (135, 135)]);
        assert_eq!(u42.pi_part(&[5]), s(&[(1, 1), (27, -27)]));
    }

    #[test]
    fn substitute_examples() {
        let a = s(&[(1, 1), (7, -14), (21, 21)]);
        assert_eq!(a.substitute(1), a);
        assert_eq!(s(&[(1, 1), (27, -27)]).substitute(2), s(&[(1, 1), (729, -729)]));
        assert_eq!(s(&[(1, 1), (7, -14)]).substitute(3), s(&[(1, 1), (343, -686)]));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(
            s(&[(1, 1), (2, -1)]).evaluate(1),
            BigRational::new(1.into(), 2.into())
        );
        assert_eq!(
            s(&[(1, 1), (7, -14), (21, 21)]).evaluate(0),
            BigRational::from_integer(8.into())
        );
    }

    #[test]
    fn divide_examples() {
        let a = s(&[(1, 1), (2, 3), (9, -4)]);
        assert_eq!(a.divide(&a), Ok(FiniteDirichletSeries::one()));
        assert_eq!(
            s(&[(1, 1), (4, -16)]).divide(&s(&[(1, 1), (2, -4)])),
            Ok(s(&[(1, 1), (2, 4)]))
        );
        assert_eq!(
            s(&[(1, 1), (3, -9)]).divide(&s(&[(1, 1), (2, -4)])),
            Err(SeriesError::NotDivisible)
        );
        assert_eq!(
            a.divide(&FiniteDirichletSeries::zero()),
            Err(SeriesError::DivisionByZero)
        );
        assert_eq!(
            FiniteDirichletSeries::zero().divide(&a),
            Ok(FiniteDirichletSeries::zero())
        );
    }

    #[test]
    fn divide_with_composite_only_indices() {
        // Basis built from indices that are never split into primes by the
        // inputs themselves.
        let b = s(&[(1, 1), (6, -1)]);
        let q = s(&[(1, 2), (36, 5), (216, -1)]);
        assert_eq!((&b * &q).divide(&b), Ok(q));
    }

    #[test]
    fn truncated_product_examples() {
        let bound = BigUint::from(100u32);
        assert_eq!(truncated_product(&[], &bound), Ok(FiniteDirichletSeries::one()));
        let half = s(&[(1, 1), (2, -1)]);
        assert_eq!(
            truncated_product(&[half.clone(), half], &BigUint::from(4u32)),
            Ok(s(&[(1, 1), (2, -2), (4, 1)]))
        );
        // The cross terms 1·21 and 21·1 survive below 50.
        let psl32 = s(&[(1, 1), (7, -14), (21, 21)]);
        assert_eq!(
            truncated_product(&[psl32.clone(), psl32], &BigUint::from(50u32)),
            Ok(s(&[(1, 1), (7, -28), (21, 42), (49, 196)]))
        );
        assert!(matches!(
            truncated_product(&[s(&[(1, 2)])], &bound),
            Err(SeriesError::FactorNotMonic { position: 0, .. })
        ));
    }

    #[test]
    fn text_format() {
        let a = s(&[(1, 1), (7, -14), (21, 21)]);
        assert_eq!(a.to_text(), "1 1\n7 -14\n21 21\n");
        assert_eq!(FiniteDirichletSeries::from_text("# comment\n1 1\n7 -14\n21 21\n"), Ok(a));
        assert_eq!(FiniteDirichletSeries::from_text(""), Ok(FiniteDirichletSeries::zero()));
        assert_eq!(FiniteDirichletSeries::one().to_text(), "1 1\n");
        assert!(FiniteDirichletSeries::from_text("7 1\n1 1\n").is_err());
        assert!(FiniteDirichletSeries::from_text("1 1\n1 2\n").is_err());
        assert!(FiniteDirichletSeries::from_text("0 1\n").is_err());
        assert!(FiniteDirichletSeries::from_text("1 x\n").is_err());
    }

    #[test]
    fn display_forms() {
        let a = s(&[(1, 1), (7, -14), (21, 21)]);
        assert_eq!(a.to_string(), "1 - 14/7^s + 21/21^s");
        assert_eq!(a.display_reduced(), "1 - 2·7^(1-s) + 21^(1-s)");
        assert_eq!(FiniteDirichletSeries::zero().to_string(), "0");
        assert_eq!(s(&[(2, -1)]).to_string(), "-1/2^s");
    }
}
