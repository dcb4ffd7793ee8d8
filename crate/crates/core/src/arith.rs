//! Multiplicative orders, `ζ_p`, q-adic valuations and primitive prime
//! divisors of `a^n - 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_prime::nt_funcs::{factorize64, factors, is_prime64};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest base accepted by [`zsigmondy_set`].
pub const ZSIGMONDY_MAX_BASE: u64 = 1_000_000;
/// Largest exponent accepted by [`zsigmondy_set`].
pub const ZSIGMONDY_MAX_EXPONENT: u32 = 400;
/// Largest order tried by [`zeta_p`] before giving up.
const ZETA_SEARCH_LIMIT: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("multiplicative order of {base} modulo {modulus} is undefined")]
    Undefined { base: u64, modulus: u64 },
    #[error("{m} is a power of {p}")]
    PowerOfP { p: u64, m: BigUint },
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

/// Largest `e` with `q^e | n`.
pub fn valuation(q: u64, n: &BigUint) -> Result<u32, ArithError> {
    if !is_prime(q) {
        return Err(ArithError::NotPrime(q));
    }
    if n.is_zero() {
        return Err(ArithError::OutOfRange("valuation of 0".into()));
    }
    Ok(valuation_unchecked(q, n))
}

/// `v_q(n)` without validating `q`; returns 0 for `n = 0`.
pub(crate) fn valuation_unchecked(q: u64, n: &BigUint) -> u32 {
    if n.is_zero() || q < 2 {
        return 0;
    }
    let q = BigUint::from(q);
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (quot, rem) = n.div_rem(&q);
        if !rem.is_zero() {
            return e;
        }
        n = quot;
        e += 1;
    }
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `base` modulo the prime `r`.
pub fn mult_order(base: u64, r: u64) -> Result<u64, ArithError> {
    if !is_prime(r) {
        return Err(ArithError::Undefined { base, modulus: r });
    }
    if base.is_multiple_of(r) {
        return Err(ArithError::Undefined { base, modulus: r });
    }
    let mut order = r - 1;
    for &l in factorize64(r - 1).keys() {
        while order.is_multiple_of(l) && pow_mod(base, order / l, r) == 1 {
            order /= l;
        }
    }
    Ok(order)
}

/// `ζ_p(m)`: the largest multiplicative order of `p` modulo a prime divisor
/// `r ≠ p` of `m`.
///
/// No factorisation of `m` is needed: after removing the `p`-part, the
/// residual is stripped of every prime dividing `p^z - 1` for
/// `z = 1, 2, ...`; a nontrivial strip at step `z` means a prime of order
/// exactly `z` was present.
pub fn zeta_p(p: u64, m: &BigUint) -> Result<u64, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if m.is_zero() {
        return Err(ArithError::OutOfRange("zeta_p of 0".into()));
    }
    let pb = BigUint::from(p);
    let mut rest = m.clone();
    while (&rest % &pb).is_zero() {
        rest /= &pb;
    }
    if rest.is_one() {
        return Err(ArithError::PowerOfP { p, m: m.clone() });
    }
    let mut best = 0;
    let mut z = 0u64;
    while !rest.is_one() {
        z += 1;
        if z > ZETA_SEARCH_LIMIT {
            return Err(ArithError::OutOfRange(format!(
                "zeta_{p}({m}): no order found below {ZETA_SEARCH_LIMIT}"
            )));
        }
        let t = pb.modpow(&BigUint::from(z), &rest);
        let pz_minus_one = if t.is_zero() { &rest - 1u32 } else { t - 1u32 };
        let g = if pz_minus_one.is_zero() {
            rest.clone()
        } else {
            rest.gcd(&pz_minus_one)
        };
        if g.is_one() {
            continue;
        }
        best = z;
        loop {
            let h = rest.gcd(&g);
            if h.is_one() {
                break;
            }
            rest /= h;
        }
    }
    Ok(best)
}

/// The set `⟨a, n⟩` of primitive prime divisors of `a^n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZsigmondyResult {
    pub a: u64,
    pub n: u32,
    pub primes: Vec<BigUint>,
    pub is_exception: bool,
}

/// Whether `(a, n)` is one of the two exceptional families with no
/// primitive prime divisor.
pub fn is_zsigmondy_exception(a: u64, n: u32) -> bool {
    (n == 2 && a >= 3 && (a + 1).is_power_of_two()) || (n == 6 && a == 2)
}

fn mobius_small(mut n: u64) -> i8 {
    let mut sign = 1;
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
        sign = -sign;
    }
    sign
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `Φ_n(a)` evaluated through `Π_{d | n} (a^d - 1)^{μ(n/d)}`.
pub fn cyclotomic_value(n: u32, a: &BigUint) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for d in divisors(n as u64) {
        let term = a.pow(d as u32) - 1u32;
        match mobius_small(n as u64 / d) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    num / den
}

/// Complete factorisation, or `OutOfRange` if some cofactor resists.
pub fn factorize(n: &BigUint) -> Result<BTreeMap<BigUint, u32>, ArithError> {
    if n.is_zero() {
        return Err(ArithError::OutOfRange("factorisation of 0".into()));
    }
    if let Some(small) = n.to_u64() {
        return Ok(factorize64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e as u32))
            .collect());
    }
    let (found, rest) = factors(n.clone(), None);
    if let Some(rest) = rest {
        return Err(ArithError::OutOfRange(format!(
            "could not factor {} (unresolved cofactors: {})",
            n,
            rest.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(found.into_iter().map(|(p, e)| (p, e as u32)).collect())
}

/// Primitive prime divisors of `a^n - 1`, found among the prime factors of
/// `Φ_n(a)`.
pub fn zsigmondy_set(a: u64, n: u32) -> Result<ZsigmondyResult, ArithError> {
    if a < 2 || n < 2 {
        return Err(ArithError::OutOfRange(format!(
            "zsigmondy({a}, {n}): need a, n >= 2"
        )));
    }
    if a > ZSIGMONDY_MAX_BASE || n > ZSIGMONDY_MAX_EXPONENT {
        return Err(ArithError::OutOfRange(format!(
            "zsigmondy({a}, {n}): beyond a <= {ZSIGMONDY_MAX_BASE}, n <= {ZSIGMONDY_MAX_EXPONENT}"
        )));
    }
    let base = BigUint::from(a);
    let phi = cyclotomic_value(n, &base);
    let proper: Vec<u64> = divisors(n as u64)
        .into_iter()
        .filter(|&d| d < n as u64)
        .collect();
    let mut primes = Vec::new();
    for r in factorize(&phi)?.into_keys() {
        let full = base.modpow(&BigUint::from(n), &r);
        if !full.is_one() {
            continue;
        }
        let primitive = proper
            .iter()
            .all(|&d| !base.modpow(&BigUint::from(d), &r).is_one());
        if primitive {
            primes.push(r);
        }
    }
    let is_exception = is_zsigmondy_exception(a, n);
    debug_assert_eq!(primes.is_empty(), is_exception, "zsigmondy({a}, {n})");
    Ok(ZsigmondyResult {
        a,
        n,
        primes,
        is_exception,
    })
}

/// An integer held as its prime factorisation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factored(pub BTreeMap<BigUint, u32>);

impl Factored {
    pub fn from_pairs(pairs: &[(u64, u32)]) -> Self {
        let mut map = BTreeMap::new();
        for &(p, e) in pairs {
            if e > 0 {
                *map.entry(BigUint::from(p)).or_insert(0) += e;
            }
        }
        Factored(map)
    }

    pub fn of(n: &BigUint) -> Result<Self, ArithError> {
        factorize(n).map(Factored)
    }

    pub fn value(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, (p, &e)| acc * p.pow(e))
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.0.get(&BigUint::from(p)).copied().unwrap_or(0)
    }

    pub fn divides(&self, other: &Factored) -> bool {
        self.0
            .iter()
            .all(|(p, &e)| other.0.get(p).copied().unwrap_or(0) >= e)
    }

    /// Parses `2^4*3^2*5*11` (also accepting `·` or `.` as separators).
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut map = BTreeMap::new();
        let normalized = text.replace(['·', '.'], "*");
        for part in normalized.split('*').map(str::trim) {
            if part.is_empty() {
                return Err(format!("empty factor in {text:?}"));
            }
            let (p, e) = match part.split_once('^') {
                Some((p, e)) => (p.trim(), e.trim()),
                None => (part, "1"),
            };
            let p: BigUint = p.parse().map_err(|_| format!("bad prime {p:?}"))?;
            let e: u32 = e.parse().map_err(|_| format!("bad exponent {e:?}"))?;
            if p.is_one() {
                continue;
            }
            *map.entry(p).or_insert(0) += e;
        }
        Ok(Factored(map))
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, &e) in &self.0 {
            if !first {
                write!(f, "·")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(3, &big(27)), Ok(3));
        assert_eq!(valuation(5, &big(63)), Ok(0));
        assert_eq!(valuation(2, &big(40320)), Ok(7));
        assert_eq!(valuation(4, &big(16)), Err(ArithError::NotPrime(4)));
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(2, 7), Ok(3));
        assert_eq!(mult_order(2, 3), Ok(2));
        assert_eq!(mult_order(3, 2), Ok(1));
        assert_eq!(mult_order(2, 43), Ok(14));
        assert!(mult_order(7, 7).is_err());
        assert!(mult_order(2, 9).is_err());
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_p(2, &big(168)), Ok(3));
        assert_eq!(zeta_p(2, &big(25920)), Ok(4));
        assert!(matches!(
            zeta_p(2, &big(1 << 10)),
            Err(ArithError::PowerOfP { .. })
        ));
        // PSL_2(128): 128 * 127 * 129, and 43 | 129 has order 14.
        assert_eq!(zeta_p(2, &big(128 * 127 * 129)), Ok(14));
    }

    #[test]
    fn zeta_matches_factor_orders() {
        for p in [2u64, 3, 5, 7] {
            for m in 2u64..400 {
                let mut rest = m;
                while rest % p == 0 {
                    rest /= p;
                }
                if rest == 1 {
                    continue;
                }
                let expected = factorize64(rest)
                    .keys()
                    .map(|&r| mult_order(p, r).unwrap())
                    .max()
                    .unwrap();
                assert_eq!(zeta_p(p, &big(m)).unwrap(), expected, "p={p} m={m}");
            }
        }
    }

    #[test]
    fn zsigmondy_examples() {
        let r = zsigmondy_set(2, 6).unwrap();
        assert!(r.primes.is_empty() && r.is_exception);
        let r = zsigmondy_set(3, 2).unwrap();
        assert!(r.primes.is_empty() && r.is_exception);
        let r = zsigmondy_set(2, 4).unwrap();
        assert_eq!(r.primes, vec![big(5)]);
        assert!(!r.is_exception);
        assert_eq!(zsigmondy_set(2, 14).unwrap().primes, vec![big(43)]);
        assert_eq!(zsigmondy_set(3, 3).unwrap().primes, vec![big(13)]);
        assert!(zsigmondy_set(1, 3).is_err());
        assert!(zsigmondy_set(2, 1).is_err());
    }

    #[test]
    fn zsigmondy_primes_are_one_mod_n() {
        for a in 2..=12u64 {
            for n in 2..=20u32 {
                for r in zsigmondy_set(a, n).unwrap().primes {
                    assert!((&r % n).is_one(), "{r} in <{a},{n}>");
                }
            }
        }
    }

    #[test]
    fn primitive_divisor_characterises_divisibility() {
        // r in <p, m> divides p^k - 1 exactly when m | k.
        for p in [2u64, 3, 5] {
            for m in 2..=10u32 {
                for r in zsigmondy_set(p, m).unwrap().primes {
                    for k in 1..=40u32 {
                        let v = BigUint::from(p).pow(k) - 1u32;
                        assert_eq!((&v % &r).is_zero(), k % m == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn zsigmondy_sets_are_disjoint() {
        for p in [2u64, 3, 5, 7] {
            let sets: Vec<_> = (2..=16u32)
                .map(|m| zsigmondy_set(p, m).unwrap().primes)
                .collect();
            for (i, a) in sets.iter().enumerate() {
                for b in &sets[i + 1..] {
                    assert!(a.iter().all(|r| !b.contains(r)));
                }
            }
        }
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic_value(6, &big(2)), big(3));
        assert_eq!(cyclotomic_value(4, &big(2)), big(5));
        assert_eq!(cyclotomic_value(12, &big(10)), big(9901));
    }

    #[test]
    fn factored_roundtrip() {
        let f = Factored::parse("2^4*3^2*5*11").unwrap();
        assert_eq!(f.value(), big(7920));
        assert_eq!(f.to_string(), "2^4·3^2·5·11");
        assert_eq!(Factored::parse("2^4·3^2·5·11").unwrap(), f);
        assert_eq!(Factored::of(&big(7920)).unwrap(), f);
    }
}
