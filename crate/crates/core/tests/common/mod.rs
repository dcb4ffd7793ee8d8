#![allow(dead_code)]

use prozeta::coxeter::Family;
use prozeta::lie::LieForm;

/// `(family, rank)` for every supported untwisted type with rank in range.
pub fn types(max_rank: usize) -> Vec<(Family, usize)> {
    let mut out = Vec::new();
    for rank in 1..=max_rank {
        out.push((Family::A, rank));
        if rank >= 2 {
            out.push((Family::B, rank));
        }
        if rank >= 3 {
            out.push((Family::C, rank));
        }
        if rank >= 4 {
            out.push((Family::D, rank));
        }
    }
    for (f, r) in [
        (Family::G2, 2),
        (Family::F4, 4),
        (Family::E6, 6),
        (Family::E7, 7),
        (Family::E8, 8),
    ] {
        if r <= max_rank {
            out.push((f, r));
        }
    }
    out
}

/// Prime powers `p^f <= max_q` with `p` in the given list.
pub fn prime_powers(primes: &[u64], max_q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for &p in primes {
        let mut q = p;
        while q <= max_q {
            out.push(q);
            q *= p;
        }
    }
    out.sort_unstable();
    out
}

pub fn untwisted_forms(max_rank: usize, qs: &[u64]) -> Vec<LieForm> {
    let mut out = Vec::new();
    for (family, rank) in types(max_rank) {
        for &q in qs {
            out.push(LieForm::untwisted(family, rank, q).expect("valid form"));
        }
    }
    out
}

pub mod strategies {
    use num_bigint::{BigInt, BigUint};
    use proptest::prelude::*;
    use prozeta::FiniteDirichletSeries;

    pub fn build(terms: &[(u64, i64)]) -> FiniteDirichletSeries {
        FiniteDirichletSeries::from_terms(terms.iter().map(|&(n, c)| (BigUint::from(n), BigInt::from(c))))
            .unwrap()
    }

    /// Up to five terms, indices at most 10^6, coefficients in [-1000, 1000].
    pub fn series() -> impl Strategy<Value = FiniteDirichletSeries> {
        prop::collection::vec((1u64..=1_000_000, -1000i64..=1000), 0..6).prop_map(|t| build(&t))
    }

    /// Constant term 1, the shape of every factor series.
    pub fn monic() -> impl Strategy<Value = FiniteDirichletSeries> {
        prop::collection::vec((2u64..=1_000_000, -1000i64..=1000), 0..5).prop_map(|mut t| {
            t.push((1, 1));
            build(&t)
        })
    }

    pub fn small_primes() -> impl Strategy<Value = Vec<u64>> {
        prop::sample::subsequence(vec![2u64, 3, 5, 7, 11, 13], 0..4)
    }
}
