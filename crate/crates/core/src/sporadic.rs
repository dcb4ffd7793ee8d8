//! Sporadic simple groups: orders, smallest odd supplement indices `m(X)`
//! and the second index `n(X)` where one is needed, stored factored.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::{is_prime, Factored};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SporadicError {
    #[error("unknown sporadic group {0:?}")]
    Unknown(String),
    #[error("{0} has no row for its automorphism group")]
    NoAutRow(String),
}

/// `(name, aut, |X|, m(X))`.
const TABLE: &[(&str, bool, &str, &str)] = &[
    ("M11", false, "2^4·3^2·5·11", "11"),
    ("M12", false, "2^6·3^3·5·11", "3^2·5·11"),
    ("M12", true, "2^7·3^3·5·11", "3^2·5·11"),
    ("M22", false, "2^7·3^2·5·7·11", "7·11"),
    ("M22", true, "2^8·3^2·5·7·11", "7·11"),
    ("M23", false, "2^7·3^2·5·7·11·23", "23"),
    ("M24", false, "2^10·3^3·5·7·11·23", "3·11·23"),
    ("J1", false, "2^3·3·5·7·11·19", "5·11·19"),
    ("J2", false, "2^7·3^3·5^2·7", "3^2·5·7"),
    ("J2", true, "2^8·3^3·5^2·7", "3^2·5·7"),
    ("J3", false, "2^7·3^5·5·17·19", "3^4·17·19"),
    ("J3", true, "2^8·3^5·5·17·19", "3^4·17·19"),
    ("J4", false, "2^21·3^3·5·7·11^3·23·29·31·37·43", "11^2·29·31·37·43"),
    ("HS", false, "2^9·3^2·5^3·7·11", "3·5^3·11"),
    ("HS", true, "2^10·3^2·5^3·7·11", "3·5^3·11"),
    ("Suz", false, "2^13·3^7·5^2·7·11·13", "3^3·5·7·11·13"),
    ("Suz", true, "2^14·3^7·5^2·7·11·13", "3^3·5·7·11·13"),
    ("McL", false, "2^7·3^6·5^3·7·11", "5^2·11"),
    ("McL", true, "2^8·3^6·5^3·7·11", "5^2·11"),
    ("Ru", false, "2^14·3^3·5^3·7·13·29", "3^2·5^3·13·29"),
    ("He", false, "2^10·3^3·5^2·7^3·17", "5·7^3·17"),
    ("He", true, "2^11·3^3·5^2·7^3·17", "3^2·5^2·7^2·17"),
    ("Ly", false, "2^8·3^7·5^6·7·11·31·37·67", "5^3·31·37·67"),
    ("O'N", false, "2^9·3^4·5·7^3·11·19·31", "3^2·7^2·11·19·31"),
    ("O'N", true, "2^10·3^4·5·7^3·11·19·31", "3^2·7^2·11·19·31"),
    ("Co1", false, "2^21·3^9·5^4·7^2·11·13·23", "3^6·5^3·7·13"),
    ("Co2", false, "2^18·3^6·5^3·7·11·23", "3^4·5^2·23"),
    ("Co3", false, "2^10·3^7·5^3·7·11·23", "3^3·5^2·11·23"),
    ("Fi22", false, "2^17·3^9·5^2·7·11·13", "3^7·5·13"),
    ("Fi22", true, "2^18·3^9·5^2·7·11·13", "3^7·5·13"),
    ("Fi23", false, "2^18·3^13·5^2·7·11·13·17·23", "3^4·17·23"),
    ("Fi24'", false, "2^21·3^16·5^2·7^3·11·13·17·23·29", "3^13·5·7^2·13·17·29"),
    ("Fi24'", true, "2^22·3^16·5^2·7^3·11·13·17·29", "3^13·5·7^2·13·17·29"),
    ("HN", false, "2^14·3^6·5^6·7·11·19", "3^4·5^4·7·11·19"),
    ("HN", true, "2^15·3^6·5^6·7·11·19", "3^4·5^4·7·11·19"),
    ("Th", false, "2^15·3^10·5^3·7^2·13·19·31", "3^8·5^2·7·13·19"),
    (
        "BM",
        false,
        "2^41·3^13·5^6·7^2·11·13·17·19·23·31·47",
        "3^7·5^3·7·13·17·19·31·47",
    ),
    (
        "M",
        false,
        "2^46·3^20·5^9·7^6·11^2·13^3·17·19·23·29·31·41·47·59·71",
        "3^11·5^5·7^4·11·13^2·17·19·29·31·41·47·59·71",
    ),
];

/// `(name, aut, n(X))`.
const SECOND: &[(&str, bool, &str)] = &[
    ("Co1", false, "3^4·5^2·7·11·13·23"),
    ("Fi22", false, "3^5·5·7·11·13"),
    ("Fi24'", false, "3^9·5·11·7^2·13·17·23·29"),
    ("Fi24'", true, "3^9·5·11·7^2·13·17·23·29"),
    ("Th", false, "3^8·5^2·7·13·19·31"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SporadicRecord {
    pub name: &'static str,
    pub aut: bool,
    pub order: Factored,
    pub m: Factored,
    pub n: Option<Factored>,
    pub order_text: &'static str,
    pub m_text: &'static str,
    pub n_text: Option<&'static str>,
}

impl SporadicRecord {
    pub fn label(&self) -> String {
        if self.aut {
            format!("Aut({})", self.name)
        } else {
            self.name.to_string()
        }
    }
}

impl fmt::Display for SporadicRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group {}", self.label())?;
        writeln!(f, "order {}", self.order_text)?;
        writeln!(f, "order_value {}", self.order.value())?;
        writeln!(f, "m {}", self.m_text)?;
        writeln!(f, "m_value {}", self.m.value())?;
        match self.n_text {
            Some(n) => {
                writeln!(f, "n {n}")?;
                writeln!(f, "n_value {}", self.n.as_ref().expect("parsed with text").value())
            }
            None => writeln!(f, "n -"),
        }
    }
}

fn record(row: &(&'static str, bool, &'static str, &'static str)) -> SporadicRecord {
    let (name, aut, order_text, m_text) = *row;
    let n_text = SECOND
        .iter()
        .find(|s| s.0 == name && s.1 == aut)
        .map(|s| s.2);
    let parse = |t: &str| Factored::parse(t).expect("embedded table parses");
    SporadicRecord {
        name,
        aut,
        order: parse(order_text),
        m: parse(m_text),
        n: n_text.map(parse),
        order_text,
        m_text,
        n_text,
    }
}

/// Accepts `M11`, `M_11`, `ON`, `O'N`, `Fi24`, `Fi24'`, `Fi'24`, `Fi24p`, ...
pub fn canonical_name(name: &str) -> Result<&'static str, SporadicError> {
    let squashed: String = name
        .chars()
        .filter(|c| !matches!(c, '_' | ' ' | '\'' | '{' | '}'))
        .collect::<String>()
        .to_ascii_lowercase();
    let key = match squashed.as_str() {
        "on" => "o'n",
        "fi24" | "fi24p" => "fi24'",
        other => other,
    };
    TABLE
        .iter()
        .map(|r| r.0)
        .find(|n| n.to_ascii_lowercase() == key)
        .ok_or_else(|| SporadicError::Unknown(name.to_string()))
}

/// The 26 sporadic groups in table order.
pub fn names() -> Vec<&'static str> {
    let mut out: Vec<&'static str> = Vec::new();
    for r in TABLE {
        if !out.contains(&r.0) {
            out.push(r.0);
        }
    }
    out
}

pub fn records() -> Vec<SporadicRecord> {
    TABLE.iter().map(record).collect()
}

pub fn lookup(name: &str, aut: bool) -> Result<SporadicRecord, SporadicError> {
    let name = canonical_name(name)?;
    TABLE
        .iter()
        .find(|r| r.0 == name && r.1 == aut)
        .map(record)
        .ok_or_else(|| SporadicError::NoAutRow(name.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A known inconsistency that is reported, not asserted.
    Flagged,
    Note,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Flagged => "FLAG",
            CheckStatus::Note => "NOTE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub subject: String,
    pub description: String,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn with_status(&self, status: CheckStatus) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == status).collect()
    }

    pub fn passed(&self) -> bool {
        self.with_status(CheckStatus::Fail).is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", c.status, c.subject, c.description)?;
        }
        let count = |s| self.with_status(s).len();
        writeln!(
            f,
            "summary: {} pass, {} fail, {} flagged, {} notes",
            count(CheckStatus::Pass),
            count(CheckStatus::Fail),
            count(CheckStatus::Flagged),
            count(CheckStatus::Note)
        )
    }
}

/// Cascade primes and the groups expected to remain at each step.
pub const CASCADE: &[(u64, &[&str])] = &[
    (31, &["J4", "Ly", "O'N", "BM", "M", "Th"]),
    (23, &["M23", "M24", "Co1", "Co2", "Co3", "Fi23", "Fi24'"]),
    (11, &["M11", "M12", "M22", "J1", "HS", "Suz", "McL", "HN", "Fi22"]),
    (17, &["J3", "He"]),
    (29, &["Ru"]),
    (7, &["J2"]),
];

fn verdict(subject: String, description: String, ok: bool) -> Check {
    Check {
        subject,
        description,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
    }
}

pub fn validate_tables() -> ValidationReport {
    let mut checks = Vec::new();
    let all = records();
    let two = BigUint::from(2u32);
    for r in &all {
        let label = r.label();
        let primes_ok = r
            .order
            .0
            .keys()
            .chain(r.m.0.keys())
            .chain(r.n.iter().flat_map(|n| n.0.keys()))
            .all(|p| u64::try_from(p).map(is_prime).unwrap_or(false));
        checks.push(verdict(label.clone(), "all printed bases are prime".into(), primes_ok));
        checks.push(verdict(label.clone(), format!("m = {} is odd", r.m), r.m.exponent(2) == 0));
        checks.push(verdict(label.clone(), "m divides |X|".into(), r.m.divides(&r.order)));
        let quotient = r.order.value() / r.m.value();
        let v2 = crate::arith::valuation_unchecked(2, &quotient);
        checks.push(verdict(label.clone(), "v_2(|X|/m) = v_2(|X|)".into(), v2 == r.order.exponent(2)));
        if let Some(n) = &r.n {
            checks.push(verdict(label.clone(), format!("n = {n} is odd"), n.exponent(2) == 0));
            let socle_doubled = all
                .iter()
                .find(|x| x.name == r.name && !x.aut)
                .map(|s| s.order.value() * &two)
                .expect("S row exists");
            if r.aut && !n.divides(&r.order) && (&socle_doubled % n.value()).bits() == 0 {
                checks.push(Check {
                    subject: label.clone(),
                    description: format!("n divides 2·|{}| but not the printed |X|", r.name),
                    status: CheckStatus::Note,
                });
            } else {
                checks.push(verdict(label.clone(), "n divides |X|".into(), n.divides(&r.order)));
            }
            checks.push(verdict(label.clone(), "m <= n".into(), r.m.value() <= n.value()));
        }
        if r.aut {
            let s = all.iter().find(|x| x.name == r.name && !x.aut).expect("S row exists");
            let doubled = s.order.value() * &two;
            if doubled != r.order.value() {
                checks.push(Check {
                    subject: label.clone(),
                    description: format!(
                        "printed order is not 2·|{}|: missing {}",
                        r.name,
                        Factored::of(&(doubled / r.order.value()))
                            .map(|f| f.to_string())
                            .unwrap_or_else(|_| "?".into())
                    ),
                    status: CheckStatus::Note,
                });
            } else {
                checks.push(verdict(label.clone(), format!("|X| = 2·|{}|", r.name), true));
            }
        }
    }
    let find = |name: &str| all.iter().find(|r| r.name == name && !r.aut).expect("S row");
    let m31: Vec<&str> = all
        .iter()
        .filter(|r| !r.aut && r.m.exponent(31) > 0)
        .map(|r| r.name)
        .collect();
    checks.push(verdict(
        "31-pattern".into(),
        format!("31 | m(X) exactly for J4, Ly, O'N, BM, M (found {})", m31.join(", ")),
        m31 == ["J4", "Ly", "O'N", "BM", "M"],
    ));
    let th = find("Th");
    checks.push(verdict(
        "Th".into(),
        "31 | n(Th) and 31 ∤ m(Th)".into(),
        th.n.as_ref().is_some_and(|n| n.exponent(31) == 1) && th.m.exponent(31) == 0,
    ));
    let m23: Vec<&str> = ["M23", "M24", "Co2", "Co3", "Fi23"]
        .into_iter()
        .filter(|n| find(n).m.exponent(23) == 0)
        .collect();
    checks.push(verdict(
        "23-pattern".into(),
        "23 | m(X) for M23, M24, Co2, Co3, Fi23".into(),
        m23.is_empty(),
    ));
    let co1 = find("Co1");
    checks.push(verdict(
        "Co1".into(),
        "23 | n(Co1) and 23 ∤ m(Co1)".into(),
        co1.n.as_ref().is_some_and(|n| n.exponent(23) == 1) && co1.m.exponent(23) == 0,
    ));
    let fi22 = find("Fi22");
    checks.push(verdict(
        "Fi22".into(),
        "11 | n(Fi22) and 11 ∤ m(Fi22)".into(),
        fi22.n.as_ref().is_some_and(|n| n.exponent(11) == 1) && fi22.m.exponent(11) == 0,
    ));
    let fi24 = find("Fi24'");
    if fi24.m.exponent(23) == 0 {
        checks.push(Check {
            subject: "Fi24'".into(),
            description: "23 divides |Fi24'| but not m(X); the 23-step uses m(X) for this group"
                .into(),
            status: CheckStatus::Flagged,
        });
    } else {
        checks.push(Check {
            subject: "Fi24'".into(),
            description: "23 | m(Fi24')".into(),
            status: CheckStatus::Pass,
        });
    }
    let mut remaining: Vec<&str> = names();
    for &(p, expected) in CASCADE {
        let members: Vec<&str> = remaining
            .iter()
            .copied()
            .filter(|n| find(n).order.exponent(p) > 0)
            .collect();
        let mut want = expected.to_vec();
        let mut got = members.clone();
        want.sort_unstable();
        got.sort_unstable();
        checks.push(Check {
            subject: format!("cascade {p}"),
            description: format!("remaining groups with {p} | |S|: {}", members.join(", ")),
            status: if want == got { CheckStatus::Pass } else { CheckStatus::Fail },
        });
        remaining.retain(|n| !members.contains(n));
    }
    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        let m11 = lookup("M11", false).unwrap();
        assert_eq!(m11.order, Factored::from_pairs(&[(2, 4), (3, 2), (5, 1), (11, 1)]));
        assert_eq!(m11.m.value(), BigUint::from(11u32));
        let th = lookup("Th", false).unwrap();
        assert_eq!(th.n.unwrap().to_string(), "3^8·5^2·7·13·19·31");
        let co1 = lookup("Co_1", false).unwrap();
        assert_eq!(co1.n.unwrap().to_string(), "3^4·5^2·7·11·13·23");
        assert_eq!(lookup("ON", true).unwrap().name, "O'N");
        assert_eq!(lookup("Fi'24", false).unwrap().name, "Fi24'");
        assert_eq!(lookup("M11", true), Err(SporadicError::NoAutRow("M11".into())));
        assert!(matches!(lookup("M13", false), Err(SporadicError::Unknown(_))));
        assert_eq!(names().len(), 26);
    }

    #[test]
    fn table_validation() {
        let report = validate_tables();
        assert!(report.passed(), "{report}");
        let flagged = report.with_status(CheckStatus::Flagged);
        assert_eq!(flagged.len(), 1);
        assert_eq!(flagged[0].subject, "Fi24'");
        let notes = report.with_status(CheckStatus::Note);
        assert_eq!(notes.len(), 2);
        assert!(notes.iter().all(|c| c.subject == "Aut(Fi24')"));
    }

    #[test]
    fn m12_divides() {
        let m12 = lookup("M12", false).unwrap();
        assert_eq!(m12.m.value(), BigUint::from(495u32));
        assert!(m12.m.divides(&m12.order));
        assert_eq!(lookup("BM", false).unwrap().m.exponent(31), 1);
    }
}
