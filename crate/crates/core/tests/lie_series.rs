mod common;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use prozeta::coxeter::Family;
use prozeta::lie::{default_tau, prop38_report, series_from_form, LieForm, VariantSpec};
use prozeta::FiniteDirichletSeries;

const QS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn reduced_sum(s: &FiniteDirichletSeries) -> BigInt {
    s.terms().map(|(n, c)| c / BigInt::from(n.clone())).sum()
}

fn graph_forms() -> Vec<LieForm> {
    let mut out = Vec::new();
    for variant in [VariantSpec::Ordinary, VariantSpec::TwistedPairs] {
        for q in [2u64, 3, 4] {
            for (family, rank) in [(Family::A, 2), (Family::A, 3), (Family::A, 4), (Family::A, 5), (Family::D, 4), (Family::D, 5), (Family::E6, 6)] {
                out.push(LieForm::untwisted(family, rank, q).unwrap().with_graph(2, variant.clone()));
            }
        }
    }
    out.push(LieForm::twisted(Family::A, 3, 2, 2).unwrap());
    out
}

#[test]
fn untwisted_series_shape() {
    for form in common::untwisted_forms(6, &QS) {
        let (s, trace) = series_from_form(&form).unwrap();
        assert_eq!(s.coefficient_u64(1), BigInt::from(1), "{form}");
        assert!(reduced_sum(&s).is_zero(), "{form}");
        let order = form.group_order().unwrap();
        for (n, c) in s.terms() {
            assert!((&order % n).is_zero(), "{form}: index {n} does not divide |S|");
            assert!((c % BigInt::from(n.clone())).is_zero());
            assert!((n % form.p) != BigUint::zero() || n == &BigUint::from(1u32));
        }
        let mut rebuilt = FiniteDirichletSeries::zero();
        for row in &trace.rows {
            rebuilt = &rebuilt + &FiniteDirichletSeries::monomial(row.index.clone(), row.coefficient.clone());
        }
        assert_eq!(rebuilt, s);
    }
}

#[test]
fn smallest_index_is_negative() {
    let forms = common::untwisted_forms(6, &QS).into_iter().chain(graph_forms());
    for form in forms {
        let (s, _) = series_from_form(&form).unwrap();
        let (n, c) = s.terms().find(|(n, _)| **n > BigUint::from(1u32)).unwrap();
        assert!(c.is_negative(), "{form}: coefficient {c} at {n}");
        assert!(reduced_sum(&s).is_zero(), "{form}");
    }
}

#[test]
fn valuation_report_holds_on_hypothesis_grid() {
    let qs = common::prime_powers(&[2, 3, 5, 7], 128);
    let mut checked = 0;
    for form in common::untwisted_forms(5, &qs) {
        if form.f > 7 {
            continue;
        }
        let zeta = form.zeta_p().unwrap();
        if zeta <= 1 || (form.p == 2 && zeta <= 6) {
            continue;
        }
        let (s, _) = series_from_form(&form).unwrap();
        let tau = default_tau(form.p, zeta).unwrap();
        let rep = prop38_report(&s, form.p, zeta, tau, 30).unwrap();
        assert!(rep.all_hold(), "{form}\n{rep}");
        checked += 1;
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn named_valuation_instances() {
    let psl33 = LieForm::untwisted(Family::A, 2, 3).unwrap();
    let (s, _) = series_from_form(&psl33).unwrap();
    assert_eq!(s, FiniteDirichletSeries::from_pairs(&[(1, 1), (13, -26), (52, 52)]));
    assert_eq!(default_tau(3, psl33.zeta_p().unwrap()).unwrap(), 13);
    assert!(prop38_report(&s, 3, 3, 13, 30).unwrap().all_hold());

    let psl2_128 = LieForm::untwisted(Family::A, 1, 128).unwrap();
    let zeta = psl2_128.zeta_p().unwrap();
    assert_eq!(zeta, 14);
    assert_eq!(default_tau(2, zeta).unwrap(), 43);
    let (s, _) = series_from_form(&psl2_128).unwrap();
    assert!(prop38_report(&s, 2, zeta, 43, 30).unwrap().all_hold());
}

#[test]
fn graph_forms_need_a_variant() {
    assert!(LieForm::parse("family=A rank=3 q=2 graph=2").is_err());
    let f = LieForm::parse("family=A rank=3 q=2 graph=2 variant=ordinary").unwrap();
    assert_eq!(LieForm::parse(&f.to_string()).unwrap(), f);
    assert!(LieForm::parse("family=A rank=4 q=2 twist=2").unwrap().catalog().is_err());
}
