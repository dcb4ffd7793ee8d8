//! Odd-part parabolic series of almost simple groups of Lie type, group
//! orders and the structural checks on their indices.

use std::fmt;
use std::path::PathBuf;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_prime::nt_funcs::factorize64;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::arith::{self, cyclotomic_value, valuation_unchecked, ArithError};
use crate::coxeter::{
    weyl_degrees, CatalogVariant, CoxeterError, DiagramSymmetry, DynkinDiagram, Family,
    ParabolicIndexCatalog,
};
use crate::series::FiniteDirichletSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("bad form descriptor: {0}")]
    Descriptor(String),
    #[error("T_W(q) is not divisible by T_J(q) at J = {0}")]
    NonIntegralIndex(String),
    #[error("hypothesis violated: zeta = {zeta} for p = {p}")]
    HypothesisViolation { p: u64, zeta: u64 },
    #[error("{tau} is not a primitive prime divisor of {p}^{zeta} - 1")]
    NotPrimitive { p: u64, zeta: u64, tau: u64 },
    #[error("unsupported form: {0}")]
    UnsupportedForm(String),
    #[error("cannot read catalog {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VariantSpec {
    Ordinary,
    TwistedPairs,
    File(PathBuf),
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariantSpec::Ordinary => f.write_str("ordinary"),
            VariantSpec::TwistedPairs => f.write_str("twisted-pairs"),
            VariantSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieForm {
    pub family: Family,
    pub rank: usize,
    pub p: u64,
    pub f: u32,
    pub q: u64,
    /// 1 for untwisted groups.
    pub twist: u8,
    /// Order of the graph automorphisms in X, 1 when there are none.
    pub graph: u8,
    /// `None` selects the shipped catalog for twisted forms.
    pub variant: Option<VariantSpec>,
}

fn prime_power(q: u64) -> Result<(u64, u32), LieError> {
    let f = factorize64(q);
    match f.len() {
        1 => {
            let (&p, &e) = f.iter().next().expect("one factor");
            Ok((p, e as u32))
        }
        _ => Err(LieError::NotPrimePower(q)),
    }
}

fn parse_tri(key: &str, value: &str) -> Result<u8, LieError> {
    match value {
        "none" | "1" => Ok(1),
        "2" => Ok(2),
        "3" => Ok(3),
        _ => Err(LieError::Descriptor(format!("{key}={value}"))),
    }
}

impl LieForm {
    pub fn untwisted(family: Family, rank: usize, q: u64) -> Result<Self, LieError> {
        family.check_rank(rank)?;
        let (p, f) = prime_power(q)?;
        Ok(Self {
            family,
            rank,
            p,
            f,
            q,
            twist: 1,
            graph: 1,
            variant: Some(VariantSpec::Ordinary),
        })
    }

    pub fn with_graph(mut self, graph: u8, variant: VariantSpec) -> Self {
        self.graph = graph;
        self.variant = Some(variant);
        self
    }

    pub fn twisted(family: Family, rank: usize, q: u64, twist: u8) -> Result<Self, LieError> {
        let mut form = Self::untwisted(family, rank, q)?;
        form.twist = twist;
        form.variant = None;
        Ok(form)
    }

    /// Parses `key=value` tokens; unknown keys are rejected.
    pub fn parse(descriptor: &str) -> Result<Self, LieError> {
        let tokens: Vec<&str> = descriptor.split_whitespace().collect();
        Self::from_tokens(&tokens)
    }

    pub fn from_tokens(tokens: &[&str]) -> Result<Self, LieError> {
        let (mut family, mut rank, mut q) = (None, None, None);
        let (mut twist, mut graph, mut variant) = (1, 1, None);
        for tok in tokens {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| LieError::Descriptor(format!("expected key=value, got {tok:?}")))?;
            let bad = || LieError::Descriptor(format!("{key}={value}"));
            match key {
                "family" => family = Some(value.parse::<Family>()?),
                "rank" => rank = Some(value.parse::<usize>().map_err(|_| bad())?),
                "q" => q = Some(value.parse::<u64>().map_err(|_| bad())?),
                "twist" => twist = parse_tri(key, value)?,
                "graph" => graph = parse_tri(key, value)?,
                "variant" => {
                    variant = Some(match value {
                        "ordinary" => VariantSpec::Ordinary,
                        "twisted-pairs" => VariantSpec::TwistedPairs,
                        _ => match value.strip_prefix("file:") {
                            Some(path) if !path.is_empty() => VariantSpec::File(PathBuf::from(path)),
                            _ => return Err(bad()),
                        },
                    })
                }
                _ => return Err(LieError::Descriptor(format!("unknown key {key:?}"))),
            }
        }
        let family = family.ok_or_else(|| LieError::Descriptor("missing family".into()))?;
        let rank = rank
            .or(family.fixed_rank())
            .ok_or_else(|| LieError::Descriptor("missing rank".into()))?;
        let q = q.ok_or_else(|| LieError::Descriptor("missing q".into()))?;
        family.check_rank(rank)?;
        let (p, f) = prime_power(q)?;
        if twist == 1 && graph == 1 && variant.is_none() {
            variant = Some(VariantSpec::Ordinary);
        }
        if twist == 1 && graph > 1 && variant.is_none() {
            return Err(LieError::Descriptor(
                "forms with graph automorphisms need an explicit variant".into(),
            ));
        }
        Ok(Self {
            family,
            rank,
            p,
            f,
            q,
            twist,
            graph,
            variant,
        })
    }

    pub fn diagram(&self) -> DynkinDiagram {
        DynkinDiagram::new(self.family, self.rank).expect("rank validated at construction")
    }

    pub fn catalog(&self) -> Result<ParabolicIndexCatalog, LieError> {
        if let Some(VariantSpec::File(path)) = &self.variant {
            let text = std::fs::read_to_string(path).map_err(|e| LieError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            let cat = ParabolicIndexCatalog::from_text(&text)?;
            if (cat.family, cat.rank, cat.twist, cat.graph)
                != (self.family, self.rank, self.twist, self.graph)
            {
                return Err(LieError::UnsupportedForm(format!(
                    "catalog {} is for another form",
                    path.display()
                )));
            }
            return Ok(cat);
        }
        let diagram = self.diagram();
        if self.twist > 1 {
            return match (self.family, self.rank, self.twist, &self.variant) {
                (Family::A, 3, 2, None) => Ok(ParabolicIndexCatalog::twisted_a3()),
                _ => Err(LieError::UnsupportedForm(format!(
                    "{}{}: no shipped catalog",
                    self.twist, diagram
                ))),
            };
        }
        let symmetry = DiagramSymmetry::standard(&diagram, self.graph)?;
        let variant = match self.variant {
            Some(VariantSpec::TwistedPairs) => CatalogVariant::TwistedPairs,
            _ => CatalogVariant::Ordinary,
        };
        Ok(ParabolicIndexCatalog::build(&diagram, &symmetry, variant)?)
    }

    /// Number of positive roots.
    fn positive_roots(&self) -> u32 {
        weyl_degrees(self.family, self.rank)
            .expect("rank validated")
            .iter()
            .map(|d| d - 1)
            .sum()
    }

    /// Order of the simple group `S`.
    pub fn group_order(&self) -> Result<BigUint, LieError> {
        let q = BigInt::from(self.q);
        let n = self.rank as u32;
        let qpow = |e: u32| -> BigInt { Pow::pow(&q, e) };
        let gcd = |a: u64, b: &BigInt| -> BigInt { BigInt::from(a).gcd(b) };
        let order: BigInt = match (self.twist, self.family) {
            (1, family) => {
                let degrees = weyl_degrees(family, self.rank)?;
                let mut o = qpow(self.positive_roots());
                for d in degrees {
                    o *= qpow(d) - 1;
                }
                let qm1 = &q - 1;
                let d = match family {
                    Family::A => gcd(self.rank as u64 + 1, &qm1),
                    Family::B | Family::C | Family::E7 => gcd(2, &qm1),
                    Family::D => gcd(4, &(qpow(n) - 1)),
                    Family::E6 => gcd(3, &qm1),
                    _ => BigInt::one(),
                };
                o / d
            }
            (2, Family::A) => {
                let mut o = qpow(n * (n + 1) / 2);
                for i in 2..=n + 1 {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    o *= qpow(i) - sign;
                }
                o / gcd(self.rank as u64 + 1, &(&q + 1))
            }
            (2, Family::D) => {
                let mut o = qpow(n * (n - 1)) * (qpow(n) + 1);
                for i in 1..n {
                    o *= qpow(2 * i) - 1;
                }
                o / gcd(4, &(qpow(n) + 1))
            }
            _ => {
                return Err(LieError::UnsupportedForm(format!(
                    "order of {}{}",
                    self.twist,
                    self.diagram()
                )))
            }
        };
        Ok(order.to_biguint().expect("orders are positive"))
    }

    pub fn zeta_p(&self) -> Result<u64, LieError> {
        Ok(arith::zeta_p(self.p, &self.group_order()?)?)
    }
}

impl fmt::Display for LieForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family={} rank={} q={} twist={} graph={}",
            self.family,
            self.rank,
            self.q,
            if self.twist > 1 { self.twist.to_string() } else { "none".into() },
            if self.graph > 1 { self.graph.to_string() } else { "none".into() },
        )?;
        if let Some(v) = &self.variant {
            write!(f, " variant={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub subset: String,
    pub size: usize,
    pub t_value: BigUint,
    pub index: BigUint,
    pub coefficient: BigInt,
}

/// Per-subset breakdown kept alongside the merged series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTrace {
    pub t_w: BigUint,
    pub rows: Vec<TraceRow>,
}

/// `Σ_J (-1)^{|I|+|J|} m^{1-s}` with `m = T_W(q)/T_{W_J}(q)`.
pub fn series_from_catalog(
    catalog: &ParabolicIndexCatalog,
    q: u64,
) -> Result<(FiniteDirichletSeries, SeriesTrace), LieError> {
    let t_w = catalog
        .total
        .eval_unsigned(q)
        .ok_or_else(|| LieError::NonIntegralIndex("I".into()))?;
    let k = catalog.len();
    let mut rows = Vec::new();
    let mut series = FiniteDirichletSeries::zero();
    for (mask, poly) in catalog.subsets() {
        let label = catalog.label(mask);
        let t = poly
            .eval_unsigned(q)
            .filter(|t| !t.is_zero())
            .ok_or_else(|| LieError::NonIntegralIndex(label.clone()))?;
        let (index, rem) = t_w.div_rem(&t);
        if !rem.is_zero() {
            return Err(LieError::NonIntegralIndex(label));
        }
        let size = mask.count_ones() as usize;
        let mut coefficient = BigInt::from(index.clone());
        if (k + size) % 2 == 1 {
            coefficient = -coefficient;
        }
        series.add_term(index.clone(), coefficient.clone());
        rows.push(TraceRow {
            subset: label,
            size,
            t_value: t,
            index,
            coefficient,
        });
    }
    Ok((series, SeriesTrace { t_w, rows }))
}

pub fn series_from_form(form: &LieForm) -> Result<(FiniteDirichletSeries, SeriesTrace), LieError> {
    series_from_catalog(&form.catalog()?, form.q)
}

/// `P(r s - r + 1)`.
pub fn lift(series: &FiniteDirichletSeries, r: u32) -> FiniteDirichletSeries {
    series.substitute(r)
}

/// Smallest prime of `⟨p, zeta⟩`.
pub fn default_tau(p: u64, zeta: u64) -> Result<u64, LieError> {
    let z = arith::zsigmondy_set(p, zeta as u32)?;
    let r = z
        .primes
        .first()
        .ok_or(LieError::HypothesisViolation { p, zeta })?;
    u64::try_from(r).map_err(|_| ArithError::OutOfRange(format!("tau = {r}")).into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop38Report {
    pub p: u64,
    pub zeta: u64,
    pub tau: u64,
    /// `v_τ(p^ζ - 1)`.
    pub tau_valuation: u32,
    pub m_max: u64,
    pub a_holds: bool,
    pub b_holds: bool,
    pub c_holds: bool,
    pub smallest: Option<(BigUint, BigInt)>,
    pub violations: Vec<String>,
}

impl Prop38Report {
    pub fn all_hold(&self) -> bool {
        self.a_holds && self.b_holds && self.c_holds
    }
}

impl fmt::Display for Prop38Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "holds" } else { "FAILS" };
        writeln!(f, "p={} zeta={} tau={} v_tau(p^zeta-1)={}", self.p, self.zeta, self.tau, self.tau_valuation)?;
        writeln!(f, "(a) tau-valuation of every index: {}", mark(self.a_holds))?;
        writeln!(f, "(b) no primitive divisor of p^m-1 for {} < m <= {}: {}", self.zeta, self.m_max, mark(self.b_holds))?;
        match &self.smallest {
            Some((n, c)) => writeln!(f, "(c) smallest index {n} has coefficient {c}: {}", mark(self.c_holds))?,
            None => writeln!(f, "(c) no index above 1: {}", mark(self.c_holds))?,
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

/// Checks the structural properties of the indices of an odd-part series
/// with respect to a primitive prime divisor `tau` of `p^zeta - 1`.
pub fn prop38_report(
    series: &FiniteDirichletSeries,
    p: u64,
    zeta: u64,
    tau: u64,
    m_max: u64,
) -> Result<Prop38Report, LieError> {
    if zeta <= 1 || (p == 2 && zeta <= 6) {
        return Err(LieError::HypothesisViolation { p, zeta });
    }
    let z = arith::zsigmondy_set(p, zeta as u32)?;
    if !z.primes.contains(&BigUint::from(tau)) {
        return Err(LieError::NotPrimitive { p, zeta, tau });
    }
    let pz = Pow::pow(BigUint::from(p), zeta as u32) - 1u32;
    let target = valuation_unchecked(tau, &pz);
    let mut violations = Vec::new();
    let mut a_holds = true;
    for (n, _) in series.terms().filter(|(n, _)| !n.is_one()) {
        let v = valuation_unchecked(tau, n);
        if v != target {
            a_holds = false;
            violations.push(format!("(a) index {n}: v_{tau} = {v}, expected {target}"));
        }
    }
    // Primes of Φ_m(p) are primitive for p^m - 1 or divide m.
    let mut b_holds = true;
    for m in zeta + 1..=m_max {
        let phi = cyclotomic_value(m as u32, &BigUint::from(p));
        for (n, _) in series.terms() {
            let mut g = n.gcd(&phi);
            for r in factorize64(m).keys() {
                while !g.is_one() && (&g % *r).is_zero() {
                    g /= *r;
                }
            }
            if !g.is_one() {
                b_holds = false;
                violations.push(format!("(b) index {n} shares {g} with primitive part of {p}^{m}-1"));
            }
        }
    }
    let smallest = series
        .first_nontrivial()
        .map(|(n, c)| (n.clone(), c.clone()));
    let c_holds = match &smallest {
        Some((_, c)) => *c < BigInt::zero(),
        None => true,
    };
    if !c_holds {
        let (n, c) = smallest.as_ref().expect("checked");
        violations.push(format!("(c) smallest index {n} has coefficient {c}"));
    }
    Ok(Prop38Report {
        p,
        zeta,
        tau,
        tau_valuation: target,
        m_max,
        a_holds,
        b_holds,
        c_holds,
        smallest,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(pairs: &[(u64, i64)]) -> FiniteDirichletSeries {
        FiniteDirichletSeries::from_pairs(pairs)
    }

    #[test]
    fn descriptors() {
        let f = LieForm::parse("family=A rank=3 q=2 graph=none").unwrap();
        assert_eq!((f.p, f.f, f.q), (2, 1, 2));
        assert_eq!(f.variant, Some(VariantSpec::Ordinary));
        assert!(LieForm::parse("family=A rank=3 q=6").is_err());
        assert!(LieForm::parse("family=A rank=3 q=2 graph=2").is_err());
        assert!(LieForm::parse("family=A rank=3 q=2 colour=red").is_err());
        let e = LieForm::parse("family=E6 q=4").unwrap();
        assert_eq!((e.rank, e.p, e.f), (6, 2, 2));
        let g = LieForm::parse("family=A rank=2 q=4 graph=2 variant=twisted-pairs").unwrap();
        assert_eq!(LieForm::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn a3_series() {
        let form = LieForm::untwisted(Family::A, 3, 2).unwrap();
        let (series, trace) = series_from_form(&form).unwrap();
        assert_eq!(series, s(&[(1, 1), (15, -30), (35, -35), (105, 315), (315, -315)]));
        assert_eq!(trace.rows.len(), 8);
        assert_eq!(trace.t_w, BigUint::from(315u32));
    }

    #[test]
    fn twisted_a3_series() {
        let form = LieForm::twisted(Family::A, 3, 2, 2).unwrap();
        let (series, _) = series_from_form(&form).unwrap();
        assert_eq!(series, s(&[(1, 1), (27, -27), (45, -45), (135, 135)]));
        assert_eq!(form.group_order().unwrap(), BigUint::from(25920u32));
        assert_eq!(form.zeta_p().unwrap(), 4);
    }

    #[test]
    fn graph_a2() {
        let form = LieForm::untwisted(Family::A, 2, 2)
            .unwrap()
            .with_graph(2, VariantSpec::TwistedPairs);
        let (series, _) = series_from_form(&form).unwrap();
        assert_eq!(series, s(&[(1, 1), (21, -21)]));
    }

    #[test]
    fn orders() {
        let a2 = LieForm::untwisted(Family::A, 2, 2).unwrap();
        assert_eq!(a2.group_order().unwrap(), BigUint::from(168u32));
        assert_eq!(a2.zeta_p().unwrap(), 3);
        assert_eq!(LieForm::untwisted(Family::A, 1, 5).unwrap().group_order().unwrap(), BigUint::from(60u32));
        assert_eq!(LieForm::untwisted(Family::C, 3, 2).unwrap().group_order().unwrap(), BigUint::from(1_451_520u32));
        assert_eq!(LieForm::untwisted(Family::D, 4, 2).unwrap().group_order().unwrap(), BigUint::from(174_182_400u64));
        assert_eq!(LieForm::untwisted(Family::G2, 2, 3).unwrap().group_order().unwrap(), BigUint::from(4_245_696u64));
        assert_eq!(LieForm::twisted(Family::D, 4, 2, 2).unwrap().group_order().unwrap(), BigUint::from(197_406_720u64));
        assert!(LieForm::twisted(Family::E6, 6, 2, 2).unwrap().group_order().is_err());
    }

    #[test]
    fn valuation_report_examples() {
        let psl33 = s(&[(1, 1), (13, -26), (52, 52)]);
        let r = prop38_report(&psl33, 3, 3, 13, 30).unwrap();
        assert!(r.all_hold(), "{r}");
        let psl2_128 = LieForm::untwisted(Family::A, 1, 128).unwrap();
        assert_eq!(psl2_128.zeta_p().unwrap(), 14);
        let (series, _) = series_from_form(&psl2_128).unwrap();
        assert_eq!(series, s(&[(1, 1), (129, -129)]));
        let r = prop38_report(&series, 2, 14, 43, 30).unwrap();
        assert!(r.all_hold(), "{r}");
        assert_eq!(r.tau_valuation, 1);
        let u42 = s(&[(1, 1), (27, -27), (45, -45), (135, 135)]);
        assert_eq!(
            prop38_report(&u42, 2, 4, 5, 30),
            Err(LieError::HypothesisViolation { p: 2, zeta: 4 })
        );
        assert!(matches!(prop38_report(&psl33, 3, 3, 5, 30), Err(LieError::NotPrimitive { .. })));
        let bad = s(&[(1, 1), (13, 13), (169, -1)]);
        let r = prop38_report(&bad, 3, 3, 13, 30).unwrap();
        assert!(!r.a_holds && !r.c_holds);
    }

    #[test]
    fn lifting() {
        let psl33 = s(&[(1, 1), (13, -26), (52, 52)]);
        assert_eq!(lift(&psl33, 2).coefficient_u64(169), BigInt::from(-338));
        assert_eq!(lift(&psl33, 1), psl33);
        let u42_5free = s(&[(1, 1), (27, -27)]);
        assert_eq!(lift(&u42_5free, 3), s(&[(1, 1), (19683, -19683)]));
    }
}
