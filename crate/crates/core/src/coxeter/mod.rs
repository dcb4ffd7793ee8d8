//! Dynkin diagrams, Weyl group degrees and Poincaré polynomials.
//!
//! Nodes are numbered 1..=rank in Bourbaki order:
//! `A_n` is the path 1-2-..-n; in `B_n` node n is short, in `C_n` nodes
//! 1..n-1 are short; `D_n` branches at n-2 with leaves n-1 and n; `E_n` is
//! the path 1-3-4-..-n with node 2 attached to 4; `F_4` is 1-2=>3-4 with 3, 4
//! short; `G_2` has node 1 short.

mod catalog;
mod poly;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use catalog::{CatalogVariant, ParabolicIndexCatalog, TWISTED_A3_CATALOG};
pub use poly::{cyclotomic, factor_cyclotomic, IntegerPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: Family, rank: usize },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("node {0} outside the diagram")]
    NodeOutOfRange(usize),
    #[error("not a diagram automorphism")]
    NotAnAutomorphism,
    #[error("unsupported form: {0}")]
    UnsupportedForm(String),
    #[error("not a product of cyclotomic polynomials: {0}")]
    NotCyclotomicProduct(String),
    #[error("catalog line {line}: {message}")]
    Catalog { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Family {
    pub fn check_rank(self, rank: usize) -> Result<(), CoxeterError> {
        let ok = match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E6 => rank == 6,
            Family::E7 => rank == 7,
            Family::E8 => rank == 8,
            Family::F4 => rank == 4,
            Family::G2 => rank == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(CoxeterError::InvalidRank { family: self, rank })
        }
    }

    /// The rank of an exceptional family.
    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            Family::E6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            Family::F4 => Some(4),
            Family::G2 => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = CoxeterError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E6" => Family::E6,
            "E7" => Family::E7,
            "E8" => Family::E8,
            "F4" => Family::F4,
            "G2" => Family::G2,
            _ => return Err(CoxeterError::UnknownFamily(s.to_string())),
        })
    }
}

pub fn weyl_degrees(family: Family, rank: usize) -> Result<Vec<u32>, CoxeterError> {
    family.check_rank(rank)?;
    let n = rank as u32;
    let mut d = match family {
        Family::A => (2..=n + 1).collect(),
        Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
        Family::D => {
            let mut v: Vec<u32> = (1..n).map(|i| 2 * i).collect();
            v.push(n);
            v
        }
        Family::E6 => vec![2, 5, 6, 8, 9, 12],
        Family::E7 => vec![2, 6, 8, 10, 12, 14, 18],
        Family::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
        Family::F4 => vec![2, 6, 8, 12],
        Family::G2 => vec![2, 6],
    };
    d.sort_unstable();
    Ok(d)
}

/// `T_W(x) = Π [d_i]_x`.
pub fn poincare(family: Family, rank: usize) -> Result<IntegerPolynomial, CoxeterError> {
    Ok(weyl_degrees(family, rank)?
        .into_iter()
        .fold(IntegerPolynomial::one(), |acc, d| {
            &acc * &IntegerPolynomial::q_integer(d)
        }))
}

/// Number of positive roots, the degree of `T_W`.
pub fn positive_roots(family: Family, rank: usize) -> Result<u32, CoxeterError> {
    Ok(weyl_degrees(family, rank)?.iter().map(|d| d - 1).sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    pub family: Family,
    pub rank: usize,
    /// `(i, j, bond)` with `i < j`.
    edges: Vec<(usize, usize, u8)>,
    short: Vec<bool>,
}

impl DynkinDiagram {
    pub fn new(family: Family, rank: usize) -> Result<Self, CoxeterError> {
        family.check_rank(rank)?;
        let n = rank;
        let mut edges = Vec::new();
        let mut short = vec![false; n];
        let path = |edges: &mut Vec<(usize, usize, u8)>, from: usize, to: usize| {
            for i in from..to {
                edges.push((i, i + 1, 1));
            }
        };
        match family {
            Family::A => path(&mut edges, 1, n),
            Family::B => {
                path(&mut edges, 1, n - 1);
                edges.push((n - 1, n, 2));
                short[n - 1] = true;
            }
            Family::C => {
                path(&mut edges, 1, n - 1);
                edges.push((n - 1, n, 2));
                short[..n - 1].iter_mut().for_each(|s| *s = true);
            }
            Family::D => {
                path(&mut edges, 1, n - 1);
                edges.push((n - 2, n, 1));
            }
            Family::E6 | Family::E7 | Family::E8 => {
                edges.push((1, 3, 1));
                path(&mut edges, 3, n);
                edges.push((2, 4, 1));
            }
            Family::F4 => {
                edges.extend([(1, 2, 1), (2, 3, 2), (3, 4, 1)]);
                short[2] = true;
                short[3] = true;
            }
            Family::G2 => {
                edges.push((1, 2, 3));
                short[0] = true;
            }
        }
        edges.sort_unstable();
        Ok(Self {
            family,
            rank,
            edges,
            short,
        })
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> {
        1..=self.rank
    }

    pub fn edges(&self) -> &[(usize, usize, u8)] {
        &self.edges
    }

    pub fn is_short(&self, node: usize) -> bool {
        self.short[node - 1]
    }

    pub fn bond(&self, a: usize, b: usize) -> u8 {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        self.edges
            .iter()
            .find(|&&(x, y, _)| x == i && y == j)
            .map_or(0, |e| e.2)
    }

    fn check_nodes(&self, nodes: &BTreeSet<usize>) -> Result<(), CoxeterError> {
        match nodes.iter().find(|&&v| v == 0 || v > self.rank) {
            Some(&v) => Err(CoxeterError::NodeOutOfRange(v)),
            None => Ok(()),
        }
    }

    /// Cartan matrix with `a[i][j] = <α_i, α_j^∨>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j, m) in &self.edges {
            let (i, j) = (i - 1, j - 1);
            if m == 1 || self.short[i] == self.short[j] {
                a[i][j] = -1;
                a[j][i] = -1;
            } else {
                let (long, short) = if self.short[i] { (j, i) } else { (i, j) };
                a[long][short] = -(m as i64);
                a[short][long] = -1;
            }
        }
        a
    }

    /// Connected components of the induced sub-diagram, each classified.
    pub fn sub_diagram_components(
        &self,
        subset: &BTreeSet<usize>,
    ) -> Result<Vec<(Family, usize)>, CoxeterError> {
        Ok(self
            .components(subset)?
            .iter()
            .map(|c| self.classify(c))
            .collect())
    }

    /// Node sets of the connected components, ordered by least node.
    pub fn components(
        &self,
        subset: &BTreeSet<usize>,
    ) -> Result<Vec<BTreeSet<usize>>, CoxeterError> {
        self.check_nodes(subset)?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in subset {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(i, j, _) in &self.edges {
                    let w = if i == v {
                        j
                    } else if j == v {
                        i
                    } else {
                        continue;
                    };
                    if subset.contains(&w) && comp.insert(w) {
                        stack.push(w);
                    }
                }
            }
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        Ok(out)
    }

    fn classify(&self, comp: &BTreeSet<usize>) -> (Family, usize) {
        let k = comp.len();
        let inner: Vec<_> = self
            .edges
            .iter()
            .filter(|(i, j, _)| comp.contains(i) && comp.contains(j))
            .collect();
        let max_bond = inner.iter().map(|e| e.2).max().unwrap_or(1);
        if max_bond == 3 {
            return (Family::G2, 2);
        }
        if max_bond == 2 {
            if k == 2 {
                return (Family::B, 2);
            }
            let shorts = comp.iter().filter(|&&v| self.is_short(v)).count();
            return match shorts {
                1 => (Family::B, k),
                s if s == k - 1 => (Family::C, k),
                _ => (Family::F4, 4),
            };
        }
        let degree = |v: usize| inner.iter().filter(|e| e.0 == v || e.1 == v).count();
        let Some(branch) = comp.iter().copied().find(|&v| degree(v) == 3) else {
            return (Family::A, k);
        };
        let mut legs: Vec<usize> = inner
            .iter()
            .filter(|e| e.0 == branch || e.1 == branch)
            .map(|e| {
                let mut prev = branch;
                let mut cur = if e.0 == branch { e.1 } else { e.0 };
                let mut len = 1;
                loop {
                    let next = inner.iter().find_map(|f| {
                        let w = if f.0 == cur { f.1 } else if f.1 == cur { f.0 } else { return None };
                        (w != prev).then_some(w)
                    });
                    match next {
                        Some(w) => {
                            prev = cur;
                            cur = w;
                            len += 1;
                        }
                        None => break len,
                    }
                }
            })
            .collect();
        legs.sort_unstable();
        match legs[..] {
            [1, 1, c] => (Family::D, c + 3),
            [1, 2, 2] => (Family::E6, 6),
            [1, 2, 3] => (Family::E7, 7),
            [1, 2, 4] => (Family::E8, 8),
            _ => unreachable!("sub-diagrams of finite type diagrams are finite type"),
        }
    }

    /// `T_{W_J}` for the parabolic generated by the given nodes.
    pub fn parabolic_poincare(
        &self,
        subset: &BTreeSet<usize>,
    ) -> Result<IntegerPolynomial, CoxeterError> {
        self.sub_diagram_components(subset)?
            .into_iter()
            .try_fold(IntegerPolynomial::one(), |acc, (f, r)| {
                Ok(&acc * &poincare(f, r)?)
            })
    }

    pub fn poincare(&self) -> IntegerPolynomial {
        poincare(self.family, self.rank).expect("rank validated at construction")
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if self.family.fixed_rank().is_none() {
            write!(f, "{}", self.rank)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagramSymmetry {
    /// `rho[i - 1]` is the image of node `i`.
    rho: Vec<usize>,
    order: u8,
}

impl DiagramSymmetry {
    pub fn identity(diagram: &DynkinDiagram) -> Self {
        Self {
            rho: diagram.nodes().collect(),
            order: 1,
        }
    }

    pub fn from_images(diagram: &DynkinDiagram, images: Vec<usize>) -> Result<Self, CoxeterError> {
        let n = diagram.rank;
        let as_set: BTreeSet<usize> = images.iter().copied().collect();
        if images.len() != n || as_set != diagram.nodes().collect() {
            return Err(CoxeterError::NotAnAutomorphism);
        }
        for &(i, j, m) in diagram.edges() {
            if diagram.bond(images[i - 1], images[j - 1]) != m {
                return Err(CoxeterError::NotAnAutomorphism);
            }
        }
        let mut order = 1u8;
        let mut power = images.clone();
        while power.iter().enumerate().any(|(i, &v)| v != i + 1) {
            power = power.iter().map(|&v| images[v - 1]).collect();
            order += 1;
        }
        Ok(Self { rho: images, order })
    }

    /// The standard graph symmetry of the given order, if the diagram has one.
    /// Order 2 on `B_2`, `F_4`, `G_2` swaps the ends of the diagram, ignoring
    /// root lengths.
    pub fn standard(diagram: &DynkinDiagram, order: u8) -> Result<Self, CoxeterError> {
        if order == 1 {
            return Ok(Self::identity(diagram));
        }
        let n = diagram.rank;
        let unsupported = || {
            CoxeterError::UnsupportedForm(format!("no order-{order} symmetry of {diagram}"))
        };
        let images: Vec<usize> = match (diagram.family, order) {
            (Family::A, 2) if n >= 2 => (1..=n).rev().collect(),
            (Family::D, 2) => {
                let mut v: Vec<usize> = (1..=n).collect();
                v.swap(n - 2, n - 1);
                v
            }
            (Family::D, 3) if n == 4 => vec![3, 2, 4, 1],
            (Family::E6, 2) => vec![6, 2, 5, 4, 3, 1],
            (Family::B, 2) if n == 2 => vec![2, 1],
            (Family::F4, 2) => vec![4, 3, 2, 1],
            (Family::G2, 2) => vec![2, 1],
            _ => return Err(unsupported()),
        };
        Self::from_images(diagram, images)
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn image(&self, node: usize) -> usize {
        self.rho[node - 1]
    }

    pub fn orbit_structure(&self, diagram: &DynkinDiagram) -> Result<OrbitStructure, CoxeterError> {
        if self.rho.len() != diagram.rank {
            return Err(CoxeterError::NotAnAutomorphism);
        }
        Self::from_images(diagram, self.rho.clone())?;
        let mut seen = BTreeSet::new();
        let mut orbits = Vec::new();
        for v in diagram.nodes() {
            if seen.contains(&v) {
                continue;
            }
            let mut orbit = BTreeSet::new();
            let mut w = v;
            while orbit.insert(w) {
                w = self.image(w);
            }
            seen.extend(orbit.iter().copied());
            orbits.push(orbit);
        }
        Ok(OrbitStructure { orbits })
    }
}

/// Partition of the nodes into ρ-orbits, ordered by least node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitStructure {
    pub orbits: Vec<BTreeSet<usize>>,
}

impl OrbitStructure {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// `J*`, the union of the orbits selected by `mask`.
    pub fn union(&self, mask: u32) -> BTreeSet<usize> {
        self.orbits
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .flat_map(|(_, o)| o.iter().copied())
            .collect()
    }

    /// Catalog notation for a subset: `-` for ∅, orbits joined by `|`,
    /// nodes within an orbit by `+`.
    pub fn label(&self, mask: u32) -> String {
        let parts: Vec<String> = self
            .orbits
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, o)| o.iter().map(ToString::to_string).collect::<Vec<_>>().join("+"))
            .collect();
        if parts.is_empty() {
            "-".to_string()
        } else {
            parts.join("|")
        }
    }
}

impl fmt::Display for OrbitStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .orbits
            .iter()
            .map(|o| {
                let inner: Vec<String> = o.iter().map(ToString::to_string).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
