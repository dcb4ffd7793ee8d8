//! Truncated chief-factor profiles, their factor series, witness extraction
//! and the prime-by-prime cascades over Lie-type and sporadic factors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Signed, Zero};
use thiserror::Error;

use crate::arith::{self, valuation_unchecked, Factored};
use crate::coxeter::Family;
use crate::lie::{self, LieError, LieForm};
use crate::series::{truncated_product, FiniteDirichletSeries, SeriesError};
use crate::sporadic::{self, SporadicError, SporadicRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("profile line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Sporadic(#[from] SporadicError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("factor {0} has a partial series and cannot enter an exact product")]
    PartialFactor(usize),
    #[error("the prime set must contain the characteristic {p} of factor {factor}")]
    PiMissingCharacteristic { factor: usize, p: u64 },
    #[error("precondition violated: factor {factor} has index {index}")]
    PreconditionViolated { factor: usize, index: BigUint },
    #[error("no witness index")]
    NoWitness,
    #[error("factor {0} is not of the kind this cascade handles")]
    WrongKind(usize),
    #[error("factors do not share one characteristic")]
    MixedCharacteristic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChiefFactor {
    Abelian {
        p: u64,
        r: u32,
        c: BigUint,
        /// Exponent of a q-power index, carried as input data only.
        alpha: Option<u32>,
    },
    Lie {
        form: LieForm,
        r: u32,
    },
    Sporadic {
        record: SporadicRecord,
        r: u32,
    },
}

impl ChiefFactor {
    pub fn r(&self) -> u32 {
        match self {
            ChiefFactor::Abelian { r, .. }
            | ChiefFactor::Lie { r, .. }
            | ChiefFactor::Sporadic { r, .. } => *r,
        }
    }

    pub fn sporadic(name: &str, aut: bool, r: u32) -> Result<Self, ProfileError> {
        Ok(ChiefFactor::Sporadic {
            record: sporadic::lookup(name, aut)?,
            r,
        })
    }
}

impl fmt::Display for ChiefFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChiefFactor::Abelian { p, r, c, alpha } => {
                write!(f, "abelian p={p} r={r} c={c}")?;
                if let Some(a) = alpha {
                    write!(f, " alpha={a}")?;
                }
                Ok(())
            }
            ChiefFactor::Lie { form, r } => write!(f, "lie {form} r={r}"),
            ChiefFactor::Sporadic { record, r } => {
                write!(f, "sporadic name={} aut={} r={r}", record.name, record.aut as u8)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Profile {
    pub factors: Vec<ChiefFactor>,
}

fn take_key<'a>(tokens: &mut Vec<&'a str>, key: &str) -> Option<&'a str> {
    let pos = tokens.iter().position(|t| t.split_once('=').is_some_and(|(k, _)| k == key))?;
    let tok = tokens.remove(pos);
    tok.split_once('=').map(|(_, v)| v)
}

impl Profile {
    /// One factor per line:
    /// `abelian p=.. r=.. c=.. [alpha=..]`, `lie <form> r=..`,
    /// `sporadic name=.. aut=0|1 r=..`.
    pub fn parse(text: &str) -> Result<Self, ProfileError> {
        let mut factors = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ProfileError::Parse { line: no + 1, message };
            let mut tokens: Vec<&str> = line.split_whitespace().collect();
            let kind = tokens.remove(0);
            let r: u32 = match take_key(&mut tokens, "r") {
                Some(v) => v.parse().map_err(|_| err(format!("bad r={v}")))?,
                None => return Err(err("missing r=".into())),
            };
            if r == 0 {
                return Err(err("r must be positive".into()));
            }
            let factor = match kind {
                "abelian" => {
                    let mut num = |key: &str| -> Result<Option<u64>, ProfileError> {
                        take_key(&mut tokens, key)
                            .map(|v| v.parse().map_err(|_| err(format!("bad {key}={v}"))))
                            .transpose()
                    };
                    let p = num("p")?.ok_or_else(|| err("missing p=".into()))?;
                    let c = num("c")?.ok_or_else(|| err("missing c=".into()))?;
                    let alpha = num("alpha")?.map(|a| a as u32);
                    if !arith::is_prime(p) {
                        return Err(err(format!("{p} is not prime")));
                    }
                    ChiefFactor::Abelian {
                        p,
                        r,
                        c: BigUint::from(c),
                        alpha,
                    }
                }
                "lie" => ChiefFactor::Lie {
                    form: LieForm::from_tokens(&tokens).map_err(|e| err(e.to_string()))?,
                    r,
                },
                "sporadic" => {
                    let name = take_key(&mut tokens, "name").ok_or_else(|| err("missing name=".into()))?;
                    let aut = match take_key(&mut tokens, "aut").unwrap_or("0") {
                        "0" => false,
                        "1" => true,
                        v => return Err(err(format!("bad aut={v}"))),
                    };
                    ChiefFactor::sporadic(name, aut, r).map_err(|e| err(e.to_string()))?
                }
                other => return Err(err(format!("unknown factor kind {other:?}"))),
            };
            if !matches!(factor, ChiefFactor::Lie { .. }) {
                if let Some(extra) = tokens.first() {
                    return Err(err(format!("unexpected token {extra:?}")));
                }
            }
            factors.push(factor);
        }
        Ok(Self { factors })
    }

    pub fn r_values(&self) -> Vec<u32> {
        self.factors.iter().map(ChiefFactor::r).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSeries {
    pub series: FiniteDirichletSeries,
    /// Only table-backed terms are present.
    pub partial: bool,
}

pub fn factor_series(factor: &ChiefFactor, pi: &[u64]) -> Result<FactorSeries, ProfileError> {
    factor_series_at(factor, pi, 0)
}

fn factor_series_at(
    factor: &ChiefFactor,
    pi: &[u64],
    position: usize,
) -> Result<FactorSeries, ProfileError> {
    match factor {
        ChiefFactor::Abelian { p, r, c, .. } => {
            let mut s = FiniteDirichletSeries::one();
            if !c.is_zero() {
                s = &s - &FiniteDirichletSeries::monomial(BigUint::from(*p).pow(*r), c.clone().into());
            }
            Ok(FactorSeries {
                series: s.pi_part(pi),
                partial: false,
            })
        }
        ChiefFactor::Lie { form, r } => {
            if !pi.contains(&form.p) {
                return Err(ProfileError::PiMissingCharacteristic {
                    factor: position,
                    p: form.p,
                });
            }
            let (s, _) = lie::series_from_form(form)?;
            Ok(FactorSeries {
                series: lie::lift(&s, *r).pi_part(pi),
                partial: false,
            })
        }
        ChiefFactor::Sporadic { record, r } => {
            let mut s = FiniteDirichletSeries::one();
            for idx in std::iter::once(&record.m).chain(record.n.as_ref()) {
                let n = idx.value().pow(*r);
                if s.coefficient(&n).is_zero() {
                    s = &s - &FiniteDirichletSeries::monomial(n.clone(), n.into());
                }
            }
            Ok(FactorSeries {
                series: s.pi_part(pi),
                partial: true,
            })
        }
    }
}

pub fn truncated_pg(
    profile: &Profile,
    pi: &[u64],
    bound: &BigUint,
) -> Result<FiniteDirichletSeries, ProfileError> {
    let mut all = Vec::with_capacity(profile.factors.len());
    for (i, f) in profile.factors.iter().enumerate() {
        let fs = factor_series_at(f, pi, i)?;
        if fs.partial {
            return Err(ProfileError::PartialFactor(i));
        }
        all.push(fs.series);
    }
    Ok(truncated_product(&all, bound)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmlReport {
    /// Multiplicity of each `r_i`.
    pub r_values: BTreeMap<u32, usize>,
    /// Least prime dividing no `r_i`.
    pub t: u64,
}

impl fmt::Display for SmlReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rs: Vec<String> = self.r_values.iter().map(|(r, k)| format!("{r}x{k}")).collect();
        writeln!(f, "r-values: {}", if rs.is_empty() { "-".into() } else { rs.join(" ") })?;
        writeln!(f, "divisor sets: finite (truncated profile)")?;
        writeln!(f, "t = {}", self.t)
    }
}

pub fn sml_check(r_values: &[u32]) -> SmlReport {
    let mut counts = BTreeMap::new();
    for &r in r_values {
        *counts.entry(r).or_insert(0) += 1;
    }
    let t = (2u64..)
        .filter(|&t| arith::is_prime(t))
        .find(|&t| r_values.iter().all(|&r| !(r as u64).is_multiple_of(t)))
        .expect("finitely many r-values");
    SmlReport { r_values: counts, t }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionResult {
    pub q: u64,
    pub alpha: u32,
    pub w: BigUint,
    /// `b_{i, w^{r_i}}`, zero where absent.
    pub terms: Vec<BigInt>,
    pub f_star: FiniteDirichletSeries,
}

/// Finds the least `w` with `v_q(w) = alpha` carrying a nonzero
/// coefficient at some `w^{r_i}`, after checking that every q-divisible
/// index is an `r_i`-th power of the right valuation.
pub fn extraction(
    factors: &[(FiniteDirichletSeries, u32)],
    q: u64,
    alpha: u32,
) -> Result<ExtractionResult, ProfileError> {
    let mut w: Option<BigUint> = None;
    for (i, (series, r)) in factors.iter().enumerate() {
        for (n, _) in series.terms() {
            let v = valuation_unchecked(q, n);
            if v == 0 {
                continue;
            }
            let x = n.nth_root(*r);
            if Pow::pow(&x, *r) != *n || v != alpha * r {
                return Err(ProfileError::PreconditionViolated {
                    factor: i,
                    index: n.clone(),
                });
            }
            if w.as_ref().is_none_or(|w| x < *w) {
                w = Some(x);
            }
        }
    }
    let w = w.ok_or(ProfileError::NoWitness)?;
    let mut terms = Vec::with_capacity(factors.len());
    let mut f_star = FiniteDirichletSeries::one();
    for (series, r) in factors {
        let idx = Pow::pow(&w, *r);
        let b = series.coefficient(&idx);
        if !b.is_zero() {
            let factor = &FiniteDirichletSeries::one() + &FiniteDirichletSeries::monomial(idx, b.clone());
            f_star = &f_star * &factor;
        }
        terms.push(b);
    }
    Ok(ExtractionResult {
        q,
        alpha,
        w,
        terms,
        f_star,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTerm {
    pub factor: usize,
    pub index: BigUint,
    pub coefficient: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeStep {
    pub name: String,
    pub prime: u64,
    pub alpha: u32,
    pub members: Vec<usize>,
    /// Per-member detail, e.g. the chosen table column.
    pub choices: Vec<String>,
    pub w: Option<BigUint>,
    pub witnesses: Vec<WitnessTerm>,
    pub f_star: Option<FiniteDirichletSeries>,
    pub flags: Vec<String>,
    pub notes: Vec<String>,
}

impl CascadeStep {
    fn new(name: String, prime: u64, alpha: u32, members: Vec<usize>) -> Self {
        Self {
            name,
            prime,
            alpha,
            members,
            choices: Vec::new(),
            w: None,
            witnesses: Vec::new(),
            f_star: None,
            flags: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// All witness coefficients are `<= 0` and one is `< 0`; vacuous for an
    /// empty step.
    pub fn negativity(&self) -> bool {
        if self.members.is_empty() {
            return true;
        }
        self.witnesses.iter().all(|t| !t.coefficient.is_positive())
            && self.witnesses.iter().any(|t| t.coefficient.is_negative())
    }

    fn finish(&mut self, labels: &[String]) {
        if let Some(w) = &self.w {
            let hits: Vec<String> = self
                .witnesses
                .iter()
                .filter(|t| !t.coefficient.is_zero())
                .map(|t| labels[t.factor].clone())
                .collect();
            self.notes.push(format!(
                "finite truncation: {} of {} members carry a nonzero term at w = {}",
                hits.len(),
                self.members.len(),
                Factored::of(w).map(|f| f.to_string()).unwrap_or_else(|_| w.to_string())
            ));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeReport {
    pub kind: &'static str,
    pub labels: Vec<String>,
    pub header: Vec<String>,
    pub steps: Vec<CascadeStep>,
    pub sml: SmlReport,
}

impl CascadeReport {
    pub fn step(&self, prime: u64) -> Option<&CascadeStep> {
        self.steps.iter().find(|s| s.prime == prime)
    }

    pub fn negativity(&self) -> bool {
        self.steps.iter().all(CascadeStep::negativity)
    }
}

impl fmt::Display for CascadeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cascade {}", self.kind)?;
        for (i, l) in self.labels.iter().enumerate() {
            writeln!(f, "factor {i}: {l}")?;
        }
        for h in &self.header {
            writeln!(f, "{h}")?;
        }
        for s in &self.steps {
            writeln!(f, "step {} (prime {}, alpha {})", s.name, s.prime, s.alpha)?;
            let members: Vec<String> = s.members.iter().map(|i| i.to_string()).collect();
            writeln!(f, "  members: {}", if members.is_empty() { "-".into() } else { members.join(",") })?;
            for c in &s.choices {
                writeln!(f, "  choice: {c}")?;
            }
            if let Some(w) = &s.w {
                let fw = Factored::of(w).map(|x| x.to_string()).unwrap_or_else(|_| w.to_string());
                writeln!(f, "  w = {w} = {fw}")?;
            }
            for t in &s.witnesses {
                writeln!(f, "  b[{}] at {} = {}", t.factor, t.index, t.coefficient)?;
            }
            if let Some(fs) = &s.f_star {
                writeln!(f, "  F* = {fs}")?;
            }
            writeln!(f, "  negativity: {}", if s.negativity() { "ok" } else { "FAILS" })?;
            for fl in &s.flags {
                writeln!(f, "  FLAG: {fl}")?;
            }
            for n in &s.notes {
                writeln!(f, "  note: {n}")?;
            }
        }
        write!(f, "{}", self.sml)
    }
}

fn labels(profile: &Profile) -> Vec<String> {
    profile.factors.iter().map(ToString::to_string).collect()
}

fn is_twisted_a3_q2(form: &LieForm) -> bool {
    form.family == Family::A && form.rank == 3 && form.twist == 2 && form.q == 2
}

/// Runs extraction on the given members and records the outcome in `step`.
fn extract_into(
    step: &mut CascadeStep,
    series: &[FiniteDirichletSeries],
    r: &[u32],
) -> Result<(), ProfileError> {
    let input: Vec<(FiniteDirichletSeries, u32)> = step
        .members
        .iter()
        .map(|&i| (series[i].clone(), r[i]))
        .collect();
    match extraction(&input, step.prime, step.alpha) {
        Ok(res) => {
            for (&i, b) in step.members.iter().zip(&res.terms) {
                step.witnesses.push(WitnessTerm {
                    factor: i,
                    index: Pow::pow(&res.w, r[i]),
                    coefficient: b.clone(),
                });
            }
            step.w = Some(res.w);
            step.f_star = Some(res.f_star);
            Ok(())
        }
        Err(ProfileError::NoWitness) => {
            if !step.members.is_empty() {
                step.flags.push("no witness index among members".into());
            }
            Ok(())
        }
        Err(ProfileError::PreconditionViolated { factor, index }) => {
            step.flags.push(format!(
                "precondition violated by factor {} at index {index}",
                step.members[factor]
            ));
            Ok(())
        }
        Err(e) => Err(e),
    }
}

pub fn lie_cascade(profile: &Profile) -> Result<CascadeReport, ProfileError> {
    let labels = labels(profile);
    let sml = sml_check(&profile.r_values());
    let mut forms = Vec::new();
    for (i, f) in profile.factors.iter().enumerate() {
        match f {
            ChiefFactor::Lie { form, r } => forms.push((form, *r)),
            _ => return Err(ProfileError::WrongKind(i)),
        }
    }
    let mut report = CascadeReport {
        kind: "lie",
        labels,
        header: Vec::new(),
        steps: Vec::new(),
        sml,
    };
    let Some(p) = forms.first().map(|(f, _)| f.p) else {
        return Ok(report);
    };
    if forms.iter().any(|(f, _)| f.p != p) {
        return Err(ProfileError::MixedCharacteristic);
    }
    let mut zetas = Vec::new();
    let mut series = Vec::new();
    let r: Vec<u32> = forms.iter().map(|f| f.1).collect();
    for (i, (form, r)) in forms.iter().enumerate() {
        let z = form.zeta_p()?;
        zetas.push(z);
        series.push(factor_series_at(&profile.factors[i], &[p], i)?.series);
        report.header.push(format!("factor {i}: zeta_{p} = {z}, r = {r}"));
    }
    let m = *zetas.iter().min().expect("nonempty");
    let mersenne = (p + 1).is_power_of_two() && p >= 3;
    if m == 1 && mersenne {
        report.header.push(format!("case 1: m = 1, p = {p} = 2^t - 1"));
        report
            .header
            .push("CASE_1_SHORTCUT: handled through the q-power index route; alpha(T) is input data".into());
        return Ok(report);
    }
    if p == 2 && m <= 5 {
        report.header.push(format!("case 2: p = 2, m = {m}"));
        let mut lambda: Vec<usize> = (0..forms.len()).filter(|&i| zetas[i] <= 5).collect();
        let outside: Vec<String> = (0..forms.len())
            .filter(|i| !lambda.contains(i))
            .map(|i| i.to_string())
            .collect();
        if !outside.is_empty() {
            report.header.push(format!("outside Lambda (zeta > 5): {}", outside.join(",")));
        }
        for q in [31u64, 7] {
            let members: Vec<usize> = lambda
                .iter()
                .copied()
                .filter(|&i| series[i].has_index_divisible_by(q))
                .collect();
            let mut step = CascadeStep::new(format!("Lambda_{q}"), q, 1, members);
            extract_into(&mut step, &series, &r)?;
            step.finish(&report.labels);
            lambda.retain(|i| !step.members.contains(i));
            report.steps.push(step);
        }
        let mut step = CascadeStep::new("Lambda_5".into(), 5, 1, lambda.clone());
        let pattern = FiniteDirichletSeries::from_pairs(&[(1, 1), (27, -27)]);
        for &i in &lambda {
            let (form, ri) = forms[i];
            if !is_twisted_a3_q2(form) {
                step.flags.push(format!("factor {i} remains after the 7-step but is not U4(2)"));
                continue;
            }
            let five_free = series[i].pi_part(&[5]);
            let expected = lie::lift(&pattern, ri);
            if five_free == expected {
                step.choices.push(format!("factor {i}: 5-free part is {five_free}"));
            } else {
                step.flags.push(format!("factor {i}: 5-free part {five_free} differs from {expected}"));
            }
            let idx = BigUint::from(27u32).pow(ri);
            step.witnesses.push(WitnessTerm {
                factor: i,
                coefficient: five_free.coefficient(&idx),
                index: idx,
            });
        }
        if !lambda.is_empty() {
            let h = lambda.iter().fold(FiniteDirichletSeries::one(), |acc, &i| {
                &acc * &series[i].pi_part(&[5])
            });
            step.w = Some(BigUint::from(27u32));
            step.f_star = Some(h);
        }
        report.steps.push(step);
        return Ok(report);
    }
    let tau = if m == 1 {
        // Every prime divisor of p - 1 is primitive for exponent 1.
        (2..p).find(|&t| arith::is_prime(t) && (p - 1) % t == 0)
            .ok_or(LieError::HypothesisViolation { p, zeta: m })?
    } else {
        lie::default_tau(p, m)?
    };
    let alpha = valuation_unchecked(tau, &(BigUint::from(p).pow(m as u32) - 1u32));
    report.header.push(format!("case 3: m = {m}, tau = {tau}, alpha = v_tau(p^m - 1) = {alpha}"));
    let members: Vec<usize> = (0..forms.len()).filter(|&i| zetas[i] == m).collect();
    let mut step = CascadeStep::new(format!("I_{m}"), tau, alpha, members.clone());
    // Filter by the primitive primes of every exponent above m: factors with
    // larger zeta collapse to 1, those in I_m are untouched.
    let max_zeta = *zetas.iter().max().expect("nonempty");
    let mut pi = Vec::new();
    for t in m + 1..=max_zeta {
        for r in arith::zsigmondy_set(p, t as u32).map_err(LieError::from)?.primes {
            pi.push(u64::try_from(&r).map_err(|_| {
                LieError::Arith(arith::ArithError::OutOfRange(format!("primitive prime {r}")))
            })?);
        }
    }
    report.header.push(format!(
        "filter primes above m: {}",
        if pi.is_empty() { "-".into() } else { pi.iter().map(u64::to_string).collect::<Vec<_>>().join(",") }
    ));
    let mut filtered = series.clone();
    for (i, s) in filtered.iter_mut().enumerate() {
        let f = s.pi_part(&pi);
        if members.contains(&i) {
            if f != *s {
                step.flags.push(format!("factor {i} loses terms under the filter"));
            }
        } else if f.is_one() {
            step.choices.push(format!("factor {i} (zeta {}) filters to 1", zetas[i]));
        } else {
            step.flags.push(format!("factor {i} (zeta {}) does not filter to 1: {f}", zetas[i]));
        }
        *s = f;
    }
    let series = filtered;
    extract_into(&mut step, &series, &r)?;
    step.finish(&report.labels);
    report.steps.push(step);
    Ok(report)
}

/// Which column supplies `m_i` at each cascade prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    MofS,
    NofS,
    MofX,
    NofX,
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Column::MofS => "m(S)",
            Column::NofS => "n(S)",
            Column::MofX => "m(X)",
            Column::NofX => "n(X)",
        })
    }
}

pub fn column_choice(prime: u64, name: &str) -> Column {
    match (prime, name) {
        (31, "Th") => Column::NofS,
        (31, _) => Column::MofS,
        (23, "Co1") => Column::NofS,
        (11, "Fi22" | "Fi24'") => Column::NofX,
        _ => Column::MofX,
    }
}

pub const SPORADIC_PRIMES: [u64; 6] = [31, 23, 11, 17, 29, 7];

pub fn sporadic_cascade(profile: &Profile) -> Result<CascadeReport, ProfileError> {
    let labels = labels(profile);
    let sml = sml_check(&profile.r_values());
    let mut recs = Vec::new();
    for (i, f) in profile.factors.iter().enumerate() {
        match f {
            ChiefFactor::Sporadic { record, r } => recs.push((record, *r)),
            _ => return Err(ProfileError::WrongKind(i)),
        }
    }
    let series: Vec<FiniteDirichletSeries> = profile
        .factors
        .iter()
        .map(|f| factor_series(f, &[]).map(|s| s.series))
        .collect::<Result<_, _>>()?;
    let mut report = CascadeReport {
        kind: "sporadic",
        labels,
        header: Vec::new(),
        steps: Vec::new(),
        sml,
    };
    let mut remaining: Vec<usize> = (0..recs.len()).collect();
    for prime in SPORADIC_PRIMES {
        let members: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| sporadic::lookup(recs[i].0.name, false).map(|s| s.order.exponent(prime) > 0).unwrap_or(false))
            .collect();
        let mut step = CascadeStep::new(format!("Lambda_{prime}"), prime, 1, members.clone());
        let mut chosen: Vec<(usize, BigUint)> = Vec::new();
        for &i in &members {
            let (rec, _) = recs[i];
            let socle = sporadic::lookup(rec.name, false)?;
            let col = column_choice(prime, rec.name);
            let (value, used) = match col {
                Column::MofS => (Some(&socle.m), col),
                Column::NofS => (socle.n.as_ref(), col),
                Column::MofX => (Some(&rec.m), col),
                Column::NofX => match &rec.n {
                    Some(n) => (Some(n), col),
                    None => {
                        step.flags.push(format!(
                            "factor {i}: n({}) is not tabled, using n(S)",
                            rec.label()
                        ));
                        (socle.n.as_ref(), Column::NofS)
                    }
                },
            };
            let Some(value) = value else {
                step.flags.push(format!("factor {i}: {used} of {} is not tabled", rec.label()));
                continue;
            };
            if value.exponent(prime) == 0 {
                step.flags.push(format!(
                    "factor {i}: {prime} does not divide m_i = {used} = {value} of {}",
                    rec.label()
                ));
            }
            step.choices.push(format!("factor {i}: m_i = {used} = {value}"));
            chosen.push((i, value.value()));
        }
        if let Some(w) = chosen.iter().map(|(_, v)| v.clone()).min() {
            let mut f_star = FiniteDirichletSeries::one();
            for &i in &members {
                let idx = Pow::pow(&w, recs[i].1);
                let b = series[i].coefficient(&idx);
                if !b.is_zero() {
                    f_star = &f_star
                        * &(&FiniteDirichletSeries::one() + &FiniteDirichletSeries::monomial(idx.clone(), b.clone()));
                }
                step.witnesses.push(WitnessTerm {
                    factor: i,
                    index: idx,
                    coefficient: b,
                });
            }
            step.w = Some(w);
            step.f_star = Some(f_star);
        }
        step.finish(&report.labels);
        remaining.retain(|i| !members.contains(i));
        report.steps.push(step);
    }
    if !remaining.is_empty() {
        let left: Vec<String> = remaining.iter().map(|i| i.to_string()).collect();
        report.header.push(format!("not reached by any step: {}", left.join(",")));
    }
    Ok(report)
}
