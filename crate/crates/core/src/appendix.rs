//! Reference odd-part series for characteristic-2 groups with small
//! `ζ_2`, stored as printed factored terms, and the recompute-and-diff
//! report behind `verify appendix`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::arith::Factored;
use crate::lie::{self, LieError, LieForm, VariantSpec};
use crate::perm::{self, Caps, PermError};
use crate::series::FiniteDirichletSeries;

/// One printed formula. Each term `(c, n)` stands for `c · n^{1-s}`.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceRow {
    pub id: &'static str,
    pub group: &'static str,
    pub descriptor: &'static str,
    pub graph: bool,
    pub terms: &'static [(i64, &'static str)],
}

const A3_NO_GRAPH: &[(i64, &str)] = &[(-2, "3*5"), (-1, "5*7"), (3, "3*5*7"), (-1, "3^2*5*7")];

pub const REFERENCE: &[ReferenceRow] = &[
    ReferenceRow {
        id: "worked",
        group: "PSL4(2)",
        descriptor: "family=A rank=3 q=2",
        graph: false,
        terms: A3_NO_GRAPH,
    },
    ReferenceRow {
        id: "i-graph",
        group: "PSL6(2)",
        descriptor: "family=A rank=5 q=2",
        graph: true,
        terms: &[
            (-1, "3^2*7*31"),
            (-1, "3*5*7^2*31"),
            (-1, "3^3*7*31"),
            (2, "3^4*7^2*31"),
            (1, "3^3*5*7^2*31"),
            (-1, "3^4*5*7^2*31"),
        ],
    },
    ReferenceRow {
        id: "i",
        group: "PSL6(2)",
        descriptor: "family=A rank=5 q=2",
        graph: false,
        terms: &[
            (-2, "3^2*7"),
            (-1, "3^2*5*31"),
            (-2, "3*7*31"),
            (3, "3^2*7*31"),
            (6, "3^2*5*7*31"),
            (1, "3*5*7^2*31"),
            (-4, "3^3*5*7*31"),
            (-6, "3^2*5*7^2*31"),
            (5, "3^3*5*7^2*31"),
            (-1, "3^4*5*7^2*31"),
        ],
    },
    ReferenceRow {
        id: "ii-graph",
        group: "PSL5(2)",
        descriptor: "family=A rank=4 q=2",
        graph: true,
        terms: &[(-1, "3*5*31"), (-1, "3^2*7*31"), (1, "3^2*5*7*31")],
    },
    ReferenceRow {
        id: "ii",
        group: "PSL5(2)",
        descriptor: "family=A rank=4 q=2",
        graph: false,
        terms: &[
            (-2, "31"),
            (-2, "5*31"),
            (3, "3*5*31"),
            (3, "5*7*31"),
            (-4, "3*5*7*31"),
            (1, "3^2*5*7*31"),
        ],
    },
    ReferenceRow {
        id: "iii-graph",
        group: "PSL4(2)",
        descriptor: "family=A rank=3 q=2",
        graph: true,
        terms: &[(-1, "3^2*7"), (-1, "3*5*7"), (1, "3^2*5*7")],
    },
    ReferenceRow {
        id: "iii",
        group: "PSL4(2)",
        descriptor: "family=A rank=3 q=2",
        graph: false,
        terms: A3_NO_GRAPH,
    },
    ReferenceRow {
        id: "iv-graph",
        group: "PSL3(2)",
        descriptor: "family=A rank=2 q=2",
        graph: true,
        terms: &[(-1, "3*7")],
    },
    ReferenceRow {
        id: "iv",
        group: "PSL3(2)",
        descriptor: "family=A rank=2 q=2",
        graph: false,
        terms: &[(-2, "7"), (1, "3*7")],
    },
    ReferenceRow {
        id: "v-graph",
        group: "PSL3(4)",
        descriptor: "family=A rank=2 q=4",
        graph: true,
        terms: &[(-1, "3*5*7")],
    },
    ReferenceRow {
        id: "v",
        group: "PSL3(4)",
        descriptor: "family=A rank=2 q=4",
        graph: false,
        terms: &[(-2, "3*7"), (1, "3*5*7")],
    },
    ReferenceRow {
        id: "vi",
        group: "PSp6(2)",
        descriptor: "family=C rank=3 q=2",
        graph: false,
        terms: &[
            (-1, "3^2*7"),
            (-1, "3^3*5"),
            (-1, "3^2*5*7"),
            (3, "3^3*5*7"),
            (-1, "3^4*5*7"),
        ],
    },
    ReferenceRow {
        id: "vii",
        group: "U4(2)",
        descriptor: "family=A rank=3 q=2 twist=2",
        graph: false,
        terms: &[(-1, "3^3"), (-1, "3^2*5"), (1, "3^3*5")],
    },
    ReferenceRow {
        id: "viii",
        group: "POmega8+(2)",
        descriptor: "family=D rank=4 q=2",
        graph: false,
        terms: &[
            (-3, "3^2*5"),
            (-1, "3*5^2*7"),
            (3, "3^3*5^2"),
            (3, "3^3*5^2*7"),
            (-4, "3^4*5^2*7"),
            (1, "3^5*5^2*7"),
        ],
    },
];

pub fn reference_row(id: &str) -> Option<&'static ReferenceRow> {
    REFERENCE.iter().find(|r| r.id == id)
}

impl ReferenceRow {
    pub fn form(&self, variant: &VariantSpec) -> Result<LieForm, LieError> {
        let form = LieForm::parse(self.descriptor)?;
        Ok(if self.graph {
            form.with_graph(2, variant.clone())
        } else {
            form
        })
    }

    pub fn series(&self) -> FiniteDirichletSeries {
        let mut s = FiniteDirichletSeries::one();
        for &(c, idx) in self.terms {
            let n = Factored::parse(idx).expect("embedded reference data").value();
            let coeff = BigInt::from(c) * BigInt::from(n.clone());
            s = &s + &FiniteDirichletSeries::monomial(n, coeff);
        }
        s
    }
}

/// Reduced coefficients, i.e. `c` in `c · n^{1-s}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermDiff {
    pub index: BigUint,
    pub printed: BigInt,
    pub computed: BigInt,
}

impl fmt::Display for TermDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fac = Factored::of(&self.index)
            .map(|x| x.to_string())
            .unwrap_or_else(|_| self.index.to_string());
        write!(f, "({fac}) printed {} computed {}", self.printed, self.computed)
    }
}

fn reduced(series: &FiniteDirichletSeries, index: &BigUint) -> BigInt {
    series.coefficient(index) / BigInt::from(index.clone())
}

pub fn diff(printed: &FiniteDirichletSeries, computed: &FiniteDirichletSeries) -> Vec<TermDiff> {
    let indices: BTreeSet<&BigUint> = printed.terms().chain(computed.terms()).map(|(n, _)| n).collect();
    indices
        .into_iter()
        .filter(|n| printed.coefficient(n) != computed.coefficient(n))
        .map(|n| TermDiff {
            index: n.clone(),
            printed: reduced(printed, n),
            computed: reduced(computed, n),
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RowResult {
    pub row: &'static ReferenceRow,
    /// `None` for rows without a graph automorphism.
    pub variant: Option<VariantSpec>,
    pub computed: FiniteDirichletSeries,
    pub diffs: Vec<TermDiff>,
}

impl RowResult {
    pub fn matches(&self) -> bool {
        self.diffs.is_empty()
    }

    /// Printed terms the computation disagrees with.
    pub fn printed_mismatches(&self) -> Vec<&TermDiff> {
        self.diffs.iter().filter(|d| !d.printed.is_zero()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct AppendixReport {
    pub rows: Vec<RowResult>,
}

impl AppendixReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(RowResult::matches)
    }

    pub fn row(&self, id: &str, variant: Option<&VariantSpec>) -> Option<&RowResult> {
        self.rows
            .iter()
            .find(|r| r.row.id == id && r.variant.as_ref() == variant)
    }
}

impl fmt::Display for AppendixReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let variant = r.variant.as_ref().map(|v| format!(" [{v}]")).unwrap_or_default();
            let status = if r.matches() { "MATCH" } else { "MISMATCH" };
            writeln!(f, "{:<9} {:<11}{} {}", r.row.id, r.row.group, variant, status)?;
            for d in &r.diffs {
                writeln!(f, "    {d}")?;
            }
        }
        let bad = self.rows.iter().filter(|r| !r.matches()).count();
        writeln!(f, "{} rows, {} mismatched", self.rows.len(), bad)
    }
}

/// Rows without a graph automorphism are computed once; graph rows once
/// per variant.
pub fn verify(variants: &[VariantSpec]) -> Result<AppendixReport, LieError> {
    let mut rows = Vec::new();
    for row in REFERENCE {
        let runs: Vec<Option<VariantSpec>> = if row.graph {
            variants.iter().cloned().map(Some).collect()
        } else {
            vec![None]
        };
        for variant in runs {
            let form = row.form(variant.as_ref().unwrap_or(&VariantSpec::Ordinary))?;
            let (computed, _) = lie::series_from_form(&form)?;
            let diffs = diff(&row.series(), &computed);
            rows.push(RowResult {
                row,
                variant,
                computed,
                diffs,
            });
        }
    }
    Ok(AppendixReport { rows })
}

/// The odd-index supplement series of `A_8` in `S_8 ≅ PSL_4(2).2`,
/// set against the printed graph row and both catalog variants.
#[derive(Debug, Clone)]
pub struct S8Comparison {
    pub oracle: FiniteDirichletSeries,
    pub interval_size: usize,
    pub normalizer_order: usize,
    pub against: Vec<(String, FiniteDirichletSeries, Vec<TermDiff>)>,
}

impl fmt::Display for S8Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "S8 odd supplement series of A8: {}", self.oracle)?;
        writeln!(
            f,
            "Sylow-2 overgroup interval: {} members, normalizer order {}",
            self.interval_size, self.normalizer_order
        )?;
        for (name, s, diffs) in &self.against {
            let status = if diffs.is_empty() { "MATCH" } else { "MISMATCH" };
            writeln!(f, "vs {name}: {s} {status}")?;
            for d in diffs {
                writeln!(f, "    {d}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ComparisonError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

pub fn s8_comparison(caps: Caps) -> Result<S8Comparison, ComparisonError> {
    let (deg, gens) = perm::preset("S8")?;
    let g = perm::PermutationGroup::new(deg, gens, caps)?;
    let a8 = g.subgroup_from_perms(&perm::preset("A8")?.1)?;
    let odd = g.odd_supplement_series(&a8)?;
    let row = reference_row("iii-graph").expect("embedded row");
    let mut against = vec![(
        "printed iii-graph".to_string(),
        row.series(),
        diff(&row.series(), &odd.series),
    )];
    for v in [VariantSpec::Ordinary, VariantSpec::TwistedPairs] {
        let (s, _) = lie::series_from_form(&row.form(&v)?)?;
        let d = diff(&s, &odd.series);
        against.push((format!("{v} variant"), s, d));
    }
    Ok(S8Comparison {
        oracle: odd.series,
        interval_size: odd.interval.len(),
        normalizer_order: odd.normalizer_order,
        against,
    })
}
