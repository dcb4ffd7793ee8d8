//! Parabolic index catalogs: `J ⊆ I ↦ T_{W_{J*}}(x)` over the ρ-orbits `I`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{
    poincare, CoxeterError, DiagramSymmetry, DynkinDiagram, Family, IntegerPolynomial,
    OrbitStructure,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogVariant {
    Ordinary,
    TwistedPairs,
    HandEntered,
}

impl fmt::Display for CatalogVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogVariant::Ordinary => "ordinary",
            CatalogVariant::TwistedPairs => "twisted-pairs",
            CatalogVariant::HandEntered => "hand-entered",
        })
    }
}

/// Shipped catalog for `²A_3`, whose relative diagram has orbits `{1,3}`
/// and `{2}`.
pub const TWISTED_A3_CATALOG: &str = "\
# 2A3: U4(q)
form A 3 2 none
TW 0:1,1:1,2:1,3:2,4:1,5:1,6:1
J - 0:1
J 1+3 0:1,2:1
J 2 0:1,1:1
J 1+3|2 0:1,1:1,2:1,3:2,4:1,5:1,6:1
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicIndexCatalog {
    pub family: Family,
    pub rank: usize,
    pub twist: u8,
    pub graph: u8,
    pub variant: CatalogVariant,
    pub orbits: OrbitStructure,
    /// `T_W`.
    pub total: IntegerPolynomial,
    /// Indexed by the bitmask of selected orbits.
    entries: Vec<IntegerPolynomial>,
}

impl ParabolicIndexCatalog {
    pub fn build(
        diagram: &DynkinDiagram,
        symmetry: &DiagramSymmetry,
        variant: CatalogVariant,
    ) -> Result<Self, CoxeterError> {
        let orbits = symmetry.orbit_structure(diagram)?;
        let k = orbits.len();
        let mut entries = Vec::with_capacity(1 << k);
        for mask in 0..1u32 << k {
            let star = orbits.union(mask);
            let poly = match variant {
                CatalogVariant::Ordinary => diagram.parabolic_poincare(&star)?,
                CatalogVariant::TwistedPairs => twisted_pairs_poly(diagram, symmetry, &star)?,
                CatalogVariant::HandEntered => {
                    return Err(CoxeterError::UnsupportedForm(
                        "hand-entered catalogs are loaded from text".into(),
                    ))
                }
            };
            entries.push(poly);
        }
        let graph = if variant == CatalogVariant::TwistedPairs {
            symmetry.order()
        } else {
            1
        };
        Ok(Self {
            family: diagram.family,
            rank: diagram.rank,
            twist: 1,
            graph,
            variant,
            orbits,
            total: diagram.poincare(),
            entries,
        })
    }

    pub fn twisted_a3() -> Self {
        Self::from_text(TWISTED_A3_CATALOG).expect("shipped catalog parses")
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.len()) - 1
    }

    pub fn entry(&self, mask: u32) -> &IntegerPolynomial {
        &self.entries[mask as usize]
    }

    pub fn subsets(&self) -> impl Iterator<Item = (u32, &IntegerPolynomial)> {
        self.entries.iter().enumerate().map(|(m, p)| (m as u32, p))
    }

    pub fn label(&self, mask: u32) -> String {
        self.orbits.label(mask)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "form {} {} {} {}\nTW {}\n",
            self.family,
            self.rank,
            twist_word(self.twist),
            twist_word(self.graph),
            self.total.to_pairs()
        );
        for (mask, poly) in self.subsets() {
            out.push_str(&format!("J {} {}\n", self.label(mask), poly.to_pairs()));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CoxeterError> {
        let err = |line: usize, message: String| CoxeterError::Catalog { line, message };
        let mut header = None;
        let mut total = None;
        let mut rows: Vec<(usize, Vec<BTreeSet<usize>>, IntegerPolynomial)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let no = no + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "form" => {
                    let [_, family, rank, twist, graph] = fields[..] else {
                        return Err(err(no, "expected: form <family> <rank> <twist> <graph>".into()));
                    };
                    let family = Family::from_str(family).map_err(|e| err(no, e.to_string()))?;
                    let rank: usize = rank.parse().map_err(|_| err(no, format!("bad rank {rank:?}")))?;
                    family.check_rank(rank).map_err(|e| err(no, e.to_string()))?;
                    let twist = parse_twist(twist).ok_or_else(|| err(no, format!("bad twist {twist:?}")))?;
                    let graph = parse_twist(graph).ok_or_else(|| err(no, format!("bad graph {graph:?}")))?;
                    header = Some((family, rank, twist, graph));
                }
                "TW" => {
                    let [_, poly] = fields[..] else {
                        return Err(err(no, "expected: TW <poly>".into()));
                    };
                    total = Some(IntegerPolynomial::parse_pairs(poly).map_err(|m| err(no, m))?);
                }
                "J" => {
                    let [_, orbits, poly] = fields[..] else {
                        return Err(err(no, "expected: J <orbit-list> <poly>".into()));
                    };
                    let orbits = parse_orbit_list(orbits).map_err(|m| err(no, m))?;
                    let poly = IntegerPolynomial::parse_pairs(poly).map_err(|m| err(no, m))?;
                    rows.push((no, orbits, poly));
                }
                other => return Err(err(no, format!("unknown record {other:?}"))),
            }
        }
        let (family, rank, twist, graph) = header.ok_or_else(|| err(0, "missing form line".into()))?;
        let total = total.ok_or_else(|| err(0, "missing TW line".into()))?;
        let mut all: Vec<BTreeSet<usize>> = rows.iter().flat_map(|r| r.1.iter().cloned()).collect();
        all.sort();
        all.dedup();
        all.sort_by_key(|o| *o.iter().next().expect("orbits are nonempty"));
        let covered: Vec<usize> = all.iter().flat_map(|o| o.iter().copied()).collect();
        let distinct: BTreeSet<usize> = covered.iter().copied().collect();
        if covered.len() != distinct.len() || distinct != (1..=rank).collect() {
            return Err(err(0, "orbits do not partition the nodes".into()));
        }
        let orbits = OrbitStructure { orbits: all };
        let mut entries: Vec<Option<IntegerPolynomial>> = vec![None; 1 << orbits.len()];
        for (no, subset, poly) in rows {
            let mask = subset.iter().fold(0u32, |m, o| {
                m | 1 << orbits.orbits.iter().position(|x| x == o).expect("collected above")
            });
            if entries[mask as usize].replace(poly).is_some() {
                return Err(err(no, "duplicate subset".into()));
            }
        }
        let entries: Vec<IntegerPolynomial> = entries
            .into_iter()
            .enumerate()
            .map(|(m, e)| e.ok_or_else(|| err(0, format!("missing subset {}", orbits.label(m as u32)))))
            .collect::<Result<_, _>>()?;
        if entries[0] != IntegerPolynomial::one() {
            return Err(err(0, "empty subset must map to 1".into()));
        }
        if entries[entries.len() - 1] != total {
            return Err(err(0, "full subset must map to TW".into()));
        }
        Ok(Self {
            family,
            rank,
            twist,
            graph,
            variant: CatalogVariant::HandEntered,
            orbits,
            total,
            entries,
        })
    }
}

/// Components of `J*` grouped into ρ-orbits; an orbit of `k > 1` components
/// contributes `T_C(x^k)` and a stable component its own polynomial.
fn twisted_pairs_poly(
    diagram: &DynkinDiagram,
    symmetry: &DiagramSymmetry,
    star: &BTreeSet<usize>,
) -> Result<IntegerPolynomial, CoxeterError> {
    let comps = diagram.components(star)?;
    let mut used = vec![false; comps.len()];
    let mut out = IntegerPolynomial::one();
    for i in 0..comps.len() {
        if used[i] {
            continue;
        }
        let mut size = 0u32;
        let mut cur = comps[i].clone();
        loop {
            let j = comps.iter().position(|c| *c == cur).ok_or(CoxeterError::NotAnAutomorphism)?;
            if used[j] {
                break;
            }
            used[j] = true;
            size += 1;
            cur = cur.iter().map(|&v| symmetry.image(v)).collect();
        }
        let (family, rank) = diagram.sub_diagram_components(&comps[i])?[0];
        out = &out * &poincare(family, rank)?.compose_power(size);
    }
    Ok(out)
}

fn twist_word(t: u8) -> String {
    if t <= 1 {
        "none".into()
    } else {
        t.to_string()
    }
}

fn parse_twist(s: &str) -> Option<u8> {
    match s {
        "none" | "1" => Some(1),
        "2" => Some(2),
        "3" => Some(3),
        _ => None,
    }
}

fn parse_orbit_list(s: &str) -> Result<Vec<BTreeSet<usize>>, String> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split('|')
        .map(|orbit| {
            let nodes: BTreeSet<usize> = orbit
                .split('+')
                .map(|v| v.parse::<usize>().map_err(|_| format!("bad node {v:?}")))
                .collect::<Result<_, _>>()?;
            if nodes.is_empty() {
                Err("empty orbit".into())
            } else {
                Ok(nodes)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn at2(p: &IntegerPolynomial) -> BigInt {
        p.eval(&BigInt::from(2))
    }

    #[test]
    fn ordinary_a3() {
        let a3 = DynkinDiagram::new(Family::A, 3).unwrap();
        let cat = ParabolicIndexCatalog::build(&a3, &DiagramSymmetry::identity(&a3), CatalogVariant::Ordinary)
            .unwrap();
        assert_eq!(cat.len(), 3);
        // J = {2}.
        assert_eq!(at2(cat.entry(0b010)), BigInt::from(3));
        assert_eq!(at2(&cat.total) / at2(cat.entry(0b010)), BigInt::from(105));
        assert_eq!(cat.entry(cat.full_mask()), &cat.total);
    }

    #[test]
    fn twisted_pairs_a3() {
        let a3 = DynkinDiagram::new(Family::A, 3).unwrap();
        let flip = DiagramSymmetry::standard(&a3, 2).unwrap();
        let cat = ParabolicIndexCatalog::build(&a3, &flip, CatalogVariant::TwistedPairs).unwrap();
        assert_eq!(cat.label(0b01), "1+3");
        assert_eq!(cat.entry(0b01), &IntegerPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(at2(&cat.total) / at2(cat.entry(0b01)), BigInt::from(63));
    }

    #[test]
    fn shipped_twisted_catalog() {
        let cat = ParabolicIndexCatalog::twisted_a3();
        assert_eq!(at2(&cat.total), BigInt::from(135));
        let mut idx: Vec<BigInt> = cat
            .subsets()
            .filter(|(m, _)| *m != cat.full_mask())
            .map(|(_, p)| at2(&cat.total) / at2(p))
            .collect();
        idx.sort();
        assert_eq!(idx, vec![BigInt::from(27), BigInt::from(45), BigInt::from(135)]);
        let again = ParabolicIndexCatalog::from_text(&cat.to_text()).unwrap();
        assert_eq!(again, cat);
    }

    #[test]
    fn malformed_catalogs() {
        let missing = "form A 3 2 none\nTW 0:1,1:1\nJ - 0:1\nJ 1+3|2 0:1,1:1\n";
        assert!(ParabolicIndexCatalog::from_text(missing).is_err());
        let overlap = "form A 2 2 none\nTW 0:1\nJ - 0:1\nJ 1+2 0:1\nJ 2 0:1\n";
        assert!(ParabolicIndexCatalog::from_text(overlap).is_err());
        assert!(ParabolicIndexCatalog::from_text("form Q 3 2 none\n").is_err());
    }
}
