//! Brute-force permutation group oracle: subgroup lattices, Möbius
//! functions, probabilistic zeta coefficients and generation counts.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::series::FiniteDirichletSeries;

/// Groups up to this order get a full multiplication table.
const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("cap exceeded: {what} needs {needed}, cap is {limit}")]
    CapExceeded { what: &'static str, needed: u64, limit: u64 },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("{0} does not divide the group order")]
    PNotDividing(u64),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("group file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a subgroup of the ambient group")]
    NotSubgroup,
    #[error("bad caps setting: {0}")]
    BadCaps(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest group order for which the full lattice is built.
    pub lattice: u64,
    /// Largest `|G|^t` for tuple counts.
    pub tuples: u64,
    /// Largest index for overgroup intervals.
    pub index: u64,
    /// Largest group order that is enumerated at all.
    pub elements: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            lattice: 10_000,
            tuples: 100_000_000,
            index: 1_000,
            elements: 1_000_000,
        }
    }
}

impl Caps {
    /// Parses `lattice=..,tuples=..,index=..,elements=..`; missing keys keep
    /// their defaults.
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let mut caps = Self::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| PermError::BadCaps(item.to_string()))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| PermError::BadCaps(item.to_string()))?;
            match key.trim() {
                "lattice" => caps.lattice = value,
                "tuples" => caps.tuples = value,
                "index" => caps.index = value,
                "elements" => caps.elements = value,
                _ => return Err(PermError::BadCaps(item.to_string())),
            }
        }
        Ok(caps)
    }

    pub fn from_env() -> Result<Self, PermError> {
        match std::env::var("PROZETA_CAPS") {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(Self::default()),
        }
    }
}

/// A permutation of `{0, .., d-1}`; `(a·b)(x) = b(a(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self, PermError> {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            let slot = seen
                .get_mut(v as usize)
                .ok_or_else(|| PermError::InvalidPermutation(format!("{images:?}")))?;
            if std::mem::replace(slot, true) {
                return Err(PermError::InvalidPermutation(format!("{images:?}")));
            }
        }
        Ok(Perm(images))
    }

    /// From 1-based images `img(1) .. img(d)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self, PermError> {
        if images.len() > 255 {
            return Err(PermError::InvalidPermutation("degree above 255".into()));
        }
        let zero: Vec<u8> = images
            .iter()
            .map(|&v| {
                if (1..=images.len()).contains(&v) {
                    Ok((v - 1) as u8)
                } else {
                    Err(PermError::InvalidPermutation(format!("{images:?}")))
                }
            })
            .collect::<Result<_, _>>()?;
        Self::from_images(zero)
    }

    /// From disjoint cycles on `1..=degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (1..=degree).collect();
        for cycle in cycles {
            for (k, &v) in cycle.iter().enumerate() {
                let w = cycle[(k + 1) % cycle.len()];
                if v == 0 || v > degree {
                    return Err(PermError::InvalidPermutation(format!("{cycle:?}")));
                }
                images[v - 1] = w;
            }
        }
        Self::from_one_based(&images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.0[x] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A subgroup as a set of element ids of the ambient group.
#[derive(Debug, Clone)]
pub struct Subgroup {
    set: FixedBitSet,
    elements: Vec<u32>,
    gens: Vec<u32>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.set.hash(state);
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.set.contains(id as usize)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.set.is_subset(&other.set)
    }

    /// Sorted element ids.
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn intersection_order(&self, other: &Subgroup) -> usize {
        self.set.intersection_count(&other.set)
    }
}

#[derive(Debug, Clone)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    lookup: FxHashMap<Vec<u8>, u32>,
    inverse: Vec<u32>,
    table: Option<Vec<u32>>,
    caps: Caps,
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Perm>, caps: Caps) -> Result<Self, PermError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::InvalidPermutation(format!("{g} has degree {}", g.degree())));
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut lookup = FxHashMap::default();
        lookup.insert(id.0.clone(), 0u32);
        let mut i = 0;
        while i < elements.len() {
            for g in &generators {
                let y = elements[i].compose(g);
                if !lookup.contains_key(&y.0) {
                    if elements.len() as u64 >= caps.elements {
                        return Err(PermError::CapExceeded {
                            what: "group order",
                            needed: elements.len() as u64 + 1,
                            limit: caps.elements,
                        });
                    }
                    lookup.insert(y.0.clone(), elements.len() as u32);
                    elements.push(y);
                }
            }
            i += 1;
        }
        let n = elements.len();
        let inverse = elements
            .iter()
            .map(|e| {
                let mut inv = vec![0u8; degree];
                for (x, &y) in e.0.iter().enumerate() {
                    inv[y as usize] = x as u8;
                }
                lookup[&inv]
            })
            .collect();
        let mut group = Self {
            degree,
            generators,
            elements,
            lookup,
            inverse,
            table: None,
            caps,
        };
        if n <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    table.push(group.mul_slow(a as u32, b as u32));
                }
            }
            group.table = Some(table);
        }
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn element(&self, id: u32) -> &Perm {
        &self.elements[id as usize]
    }

    pub fn id_of(&self, perm: &Perm) -> Option<u32> {
        self.lookup.get(perm.images()).copied()
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (pa, pb) = (&self.elements[a as usize].0, &self.elements[b as usize].0);
        let mut buf = [0u8; 256];
        for (x, &y) in pa.iter().enumerate() {
            buf[x] = pb[y as usize];
        }
        self.lookup[&buf[..self.degree]]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.order() + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    fn new_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.order())
    }

    pub fn trivial(&self) -> Subgroup {
        let mut set = self.new_set();
        set.insert(0);
        Subgroup {
            set,
            elements: vec![0],
            gens: Vec::new(),
        }
    }

    pub fn whole(&self) -> Subgroup {
        let gens = self
            .generators
            .iter()
            .map(|g| self.id_of(g).expect("generators are elements"))
            .collect();
        let mut set = self.new_set();
        set.insert_range(..);
        Subgroup {
            set,
            elements: (0..self.order() as u32).collect(),
            gens,
        }
    }

    /// `<H, g>`, built as a union of right cosets of `H`.
    pub fn extend(&self, h: &Subgroup, g: u32) -> Subgroup {
        if h.contains(g) {
            return h.clone();
        }
        let mut gens = h.gens.clone();
        gens.push(g);
        let mut set = h.set.clone();
        let mut elements = h.elements.clone();
        let mut reps = vec![0u32];
        let mut i = 0;
        while i < reps.len() {
            let r = reps[i];
            i += 1;
            for &s in &gens {
                let y = self.mul(r, s);
                if !set.contains(y as usize) {
                    reps.push(y);
                    for &k in &h.elements {
                        let z = self.mul(k, y);
                        set.insert(z as usize);
                        elements.push(z);
                    }
                }
            }
        }
        elements.sort_unstable();
        Subgroup { set, elements, gens }
    }

    pub fn subgroup(&self, gens: &[u32]) -> Subgroup {
        gens.iter().fold(self.trivial(), |h, &g| self.extend(&h, g))
    }

    /// The subgroup generated by permutations, which must lie in the group.
    pub fn subgroup_from_perms(&self, perms: &[Perm]) -> Result<Subgroup, PermError> {
        let ids: Vec<u32> = perms
            .iter()
            .map(|p| self.id_of(p).ok_or(PermError::NotSubgroup))
            .collect::<Result<_, _>>()?;
        Ok(self.subgroup(&ids))
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        let x_gens: Vec<u32> = self.whole().gens;
        x_gens.iter().all(|&x| {
            let xi = self.inv(x);
            s.gens
                .iter()
                .all(|&g| s.contains(self.mul(self.mul(xi, g), x)))
        })
    }

    /// Whether `g` normalizes `h`.
    pub fn normalizes(&self, g: u32, h: &Subgroup) -> bool {
        let gi = self.inv(g);
        h.gens.iter().all(|&k| h.contains(self.mul(self.mul(gi, k), g)))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let mut n = h.clone();
        for g in 0..self.order() as u32 {
            if !n.contains(g) && self.normalizes(g, h) {
                n = self.extend(&n, g);
            }
        }
        n
    }

    /// A Sylow `p`-subgroup, grown one factor of `p` at a time inside
    /// successive normalizers.
    pub fn sylow(&self, p: u64) -> Result<Subgroup, PermError> {
        let mut target = 1usize;
        let mut n = self.order();
        while n.is_multiple_of(p as usize) {
            n /= p as usize;
            target *= p as usize;
        }
        if target == 1 {
            return Err(PermError::PNotDividing(p));
        }
        let mut q = self.trivial();
        while q.order() < target {
            let g = (0..self.order() as u32)
                .find(|&g| !q.contains(g) && q.contains(self.pow(g, p)) && self.normalizes(g, &q))
                .expect("a p-subgroup below Sylow order has a p-element in its normalizer");
            q = self.extend(&q, g);
        }
        Ok(q)
    }

    fn cyclic_generators(&self) -> Vec<u32> {
        let mut seen: HashSet<Subgroup> = HashSet::new();
        let mut reps = Vec::new();
        for g in 1..self.order() as u32 {
            let c = self.extend(&self.trivial(), g);
            if seen.insert(c) {
                reps.push(g);
            }
        }
        reps
    }

    pub fn all_subgroups(&self) -> Result<SubgroupLattice, PermError> {
        if self.order() as u64 > self.caps.lattice {
            return Err(PermError::CapExceeded {
                what: "subgroup lattice",
                needed: self.order() as u64,
                limit: self.caps.lattice,
            });
        }
        let cyclics = self.cyclic_generators();
        let mut found: HashSet<Subgroup> = HashSet::new();
        let mut list = vec![self.trivial()];
        found.insert(self.trivial());
        let mut i = 0;
        while i < list.len() {
            let h = list[i].clone();
            i += 1;
            for &c in &cyclics {
                if h.contains(c) {
                    continue;
                }
                let k = self.extend(&h, c);
                if found.insert(k.clone()) {
                    list.push(k);
                }
            }
        }
        Ok(SubgroupLattice::new(list))
    }

    /// `(double coset representatives of K\X/K)`.
    fn double_coset_reps(&self, k: &Subgroup) -> Vec<u32> {
        let mut covered = self.new_set();
        let mut reps = Vec::new();
        for g in 0..self.order() as u32 {
            if covered.contains(g as usize) {
                continue;
            }
            reps.push(g);
            for &b in &k.elements {
                let y = self.mul(g, b);
                if covered.contains(y as usize) {
                    continue;
                }
                for &a in &k.elements {
                    covered.insert(self.mul(a, y) as usize);
                }
            }
        }
        reps
    }

    /// Every `K` with `H ≤ K ≤ G`, ordered by increasing order.
    pub fn overgroups_of(&self, h: &Subgroup) -> Result<Vec<Subgroup>, PermError> {
        let index = (self.order() / h.order()) as u64;
        if index > self.caps.index {
            return Err(PermError::CapExceeded {
                what: "overgroup interval index",
                needed: index,
                limit: self.caps.index,
            });
        }
        let mut found: HashSet<Subgroup> = HashSet::from([h.clone()]);
        let mut list = vec![h.clone()];
        let mut i = 0;
        while i < list.len() {
            let k = list[i].clone();
            i += 1;
            if k.order() == self.order() {
                continue;
            }
            for g in self.double_coset_reps(&k) {
                if k.contains(g) {
                    continue;
                }
                let l = self.extend(&k, g);
                if found.insert(l.clone()) {
                    list.push(l);
                }
            }
        }
        list.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        Ok(list)
    }

    /// `Σ μ_G(H)` over `|G:H| = n`.
    pub fn pg_series(&self) -> Result<FiniteDirichletSeries, PermError> {
        let lattice = self.all_subgroups()?;
        let mu = lattice.mobius();
        let mut series = FiniteDirichletSeries::zero();
        for (h, &m) in lattice.subgroups.iter().zip(&mu.values) {
            series.add_term(BigUint::from(self.order() / h.order()), BigInt::from(m));
        }
        Ok(series)
    }

    fn check_normal(&self, s: &Subgroup) -> Result<(), PermError> {
        if self.is_normal(s) {
            Ok(())
        } else {
            Err(PermError::NotNormal)
        }
    }

    fn supplements(&self, s: &Subgroup, h: &Subgroup) -> bool {
        s.order() * h.order() == self.order() * s.intersection_order(h)
    }

    /// `c_n = Σ μ_X(H)` over `X = SH`, `|X:H| = n`.
    pub fn supplement_series(&self, s: &Subgroup) -> Result<FiniteDirichletSeries, PermError> {
        self.check_normal(s)?;
        let lattice = self.all_subgroups()?;
        let mu = lattice.mobius();
        let mut series = FiniteDirichletSeries::zero();
        for (h, &m) in lattice.subgroups.iter().zip(&mu.values) {
            if self.supplements(s, h) {
                series.add_term(BigUint::from(self.order() / h.order()), BigInt::from(m));
            }
        }
        Ok(series)
    }

    /// Odd-index part of the supplement series, from the overgroup interval
    /// of one Sylow 2-subgroup `P`. Each odd-index `H` contains
    /// `|H : N_H(P)|` Sylow 2-subgroups, so the class sum over the interval
    /// is weighted by `|X : N_X(P)| · |N_X(P) ∩ H| / |H|`.
    pub fn odd_supplement_series(&self, s: &Subgroup) -> Result<OddSupplement, PermError> {
        self.check_normal(s)?;
        let x = self.order();
        if x % 2 == 1 {
            return Ok(OddSupplement {
                series: self.supplement_series(s)?,
                interval: Vec::new(),
                normalizer_order: x,
            });
        }
        let p = self.sylow(2)?;
        let n = self.normalizer(&p);
        let interval = self.overgroups_of(&p)?;
        let mut mu = vec![0i64; interval.len()];
        for i in (0..interval.len()).rev() {
            mu[i] = if interval[i].order() == x {
                1
            } else {
                -(i + 1..interval.len())
                    .filter(|&j| interval[i].is_subgroup_of(&interval[j]))
                    .map(|j| mu[j])
                    .sum::<i64>()
            };
        }
        let mut sums: BTreeMap<usize, BigRational> = BTreeMap::new();
        let mut rows = Vec::new();
        for (h, &m) in interval.iter().zip(&mu) {
            let supp = self.supplements(s, h);
            let weight = BigRational::new(
                BigInt::from((x / n.order()) * n.intersection_order(h)),
                BigInt::from(h.order()),
            );
            if supp && m != 0 {
                *sums.entry(x / h.order()).or_insert_with(BigRational::zero) +=
                    &weight * BigInt::from(m);
            }
            rows.push(IntervalRow {
                order: h.order(),
                index: x / h.order(),
                mobius: m,
                class_size: weight,
                supplements: supp,
            });
        }
        let mut series = FiniteDirichletSeries::zero();
        for (index, c) in sums {
            assert!(c.is_integer(), "class-weighted sum at {index} is not integral");
            series.add_term(BigUint::from(index), c.to_integer());
        }
        Ok(OddSupplement {
            series,
            interval: rows,
            normalizer_order: n.order(),
        })
    }

    /// Number of `t`-tuples generating the group.
    pub fn generating_tuples(&self, t: u32) -> Result<BigUint, PermError> {
        let needed = (self.order() as u128).checked_pow(t).unwrap_or(u128::MAX);
        if needed > self.caps.tuples as u128 {
            return Err(PermError::CapExceeded {
                what: "tuple count",
                needed: needed.min(u64::MAX as u128) as u64,
                limit: self.caps.tuples,
            });
        }
        let mut memo: HashMap<(Subgroup, u32), BigUint> = HashMap::new();
        Ok(self.completions(&self.trivial(), t, &mut memo))
    }

    fn completions(
        &self,
        h: &Subgroup,
        left: u32,
        memo: &mut HashMap<(Subgroup, u32), BigUint>,
    ) -> BigUint {
        if h.order() == self.order() {
            return BigUint::from(self.order()).pow(left);
        }
        if left == 0 {
            return BigUint::zero();
        }
        if let Some(v) = memo.get(&(h.clone(), left)) {
            return v.clone();
        }
        let inside = self.completions(h, left - 1, memo) * BigUint::from(h.order());
        let mut total = inside;
        let mut seen: HashMap<Subgroup, BigUint> = HashMap::new();
        for g in 0..self.order() as u32 {
            if h.contains(g) {
                continue;
            }
            let k = self.extend(h, g);
            if let Some(v) = seen.get(&k) {
                total += v;
                continue;
            }
            let v = self.completions(&k, left - 1, memo);
            total += &v;
            seen.insert(k, v);
        }
        memo.insert((h.clone(), left), total.clone());
        total
    }

    /// `|Ω_G(t)| / |G|^t`.
    pub fn generation_probability(&self, t: u32) -> Result<BigRational, PermError> {
        let count = self.generating_tuples(t)?;
        Ok(BigRational::new(
            count.into(),
            BigInt::from(self.order()).pow(t),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalRow {
    pub order: usize,
    pub index: usize,
    pub mobius: i64,
    /// Number of conjugates of this subgroup per interval member.
    pub class_size: BigRational,
    pub supplements: bool,
}

#[derive(Debug, Clone)]
pub struct OddSupplement {
    pub series: FiniteDirichletSeries,
    pub interval: Vec<IntervalRow>,
    pub normalizer_order: usize,
}

/// All subgroups, ordered by decreasing order; the whole group comes first.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    pub subgroups: Vec<Subgroup>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    /// Parallel to `SubgroupLattice::subgroups`.
    pub values: Vec<i64>,
}

impl SubgroupLattice {
    fn new(mut subgroups: Vec<Subgroup>) -> Self {
        subgroups.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.elements.cmp(&b.elements)));
        Self { subgroups }
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn top(&self) -> &Subgroup {
        &self.subgroups[0]
    }

    pub fn position(&self, h: &Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|k| k == h)
    }

    pub fn mobius(&self) -> MobiusTable {
        let n = self.subgroups.len();
        let mut values = vec![0i64; n];
        for i in 0..n {
            values[i] = if i == 0 {
                1
            } else {
                -(0..i)
                    .filter(|&j| {
                        self.subgroups[j].order() > self.subgroups[i].order()
                            && self.subgroups[i].is_subgroup_of(&self.subgroups[j])
                    })
                    .map(|j| values[j])
                    .sum::<i64>()
            };
        }
        MobiusTable { values }
    }

    /// Indices of the maximal subgroups.
    pub fn maximal(&self) -> Vec<usize> {
        (1..self.len())
            .filter(|&i| {
                (1..self.len()).all(|j| {
                    j == i
                        || self.subgroups[j].order() <= self.subgroups[i].order()
                        || !self.subgroups[i].is_subgroup_of(&self.subgroups[j])
                })
            })
            .collect()
    }
}

fn cycle(degree: usize, points: impl IntoIterator<Item = usize>) -> Perm {
    let pts: Vec<usize> = points.into_iter().collect();
    Perm::from_cycles(degree, &[&pts]).expect("preset cycles are valid")
}

/// Generators of a named group and its degree.
pub fn preset(name: &str) -> Result<(usize, Vec<Perm>), PermError> {
    let unknown = || PermError::UnknownGroup(name.to_string());
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    if name == "Q8" {
        return Ok((8, quaternion_regular()));
    }
    if name == "PSL(3,2)" || name == "PSL(2,7)" || name == "GL(3,2)" {
        return Ok((7, psl32()));
    }
    let mut chars = name.chars();
    let kind = chars.next().ok_or_else(unknown)?;
    let n = num(chars.as_str())?;
    if n == 0 || n > 255 {
        return Err(unknown());
    }
    Ok(match kind {
        'C' => (n, vec![cycle(n, 1..=n)]),
        'S' => {
            if n == 1 {
                (1, vec![])
            } else {
                (n, vec![cycle(n, [1, 2]), cycle(n, 1..=n)])
            }
        }
        'A' => {
            if n < 3 {
                (n, vec![])
            } else if n % 2 == 1 {
                (n, vec![cycle(n, [1, 2, 3]), cycle(n, 1..=n)])
            } else {
                (n, vec![cycle(n, [1, 2, 3]), cycle(n, 2..=n)])
            }
        }
        'D' => {
            if n % 2 == 1 || n < 4 {
                return Err(unknown());
            }
            let k = n / 2;
            if k == 2 {
                let a = Perm::from_cycles(4, &[&[1, 2], &[3, 4]]).expect("valid");
                let b = Perm::from_cycles(4, &[&[1, 3], &[2, 4]]).expect("valid");
                (4, vec![a, b])
            } else {
                let refl: Vec<usize> = (1..=k).map(|i| k + 1 - i).collect();
                (k, vec![cycle(k, 1..=k), Perm::from_one_based(&refl).expect("valid")])
            }
        }
        _ => return Err(unknown()),
    })
}

/// Right regular action of `Q_8 = {±1, ±i, ±j, ±k}`.
fn quaternion_regular() -> Vec<Perm> {
    // Encoding: index = 2·unit + sign, unit ∈ {1, i, j, k}.
    let unit_mul = |a: usize, b: usize| -> (usize, bool) {
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let mul = |a: usize, b: usize| -> usize {
        let (u, neg) = unit_mul(a / 2, b / 2);
        2 * u + ((a % 2) ^ (b % 2) ^ neg as usize)
    };
    [2usize, 4]
        .iter()
        .map(|&g| {
            Perm::from_images((0..8).map(|x| mul(x, g) as u8).collect()).expect("regular action")
        })
        .collect()
}

/// `GL(3,2)` on the seven nonzero vectors of `F_2^3`, generated by the
/// transvection `e2 ↦ e1 + e2` and the cyclic coordinate shift.
fn psl32() -> Vec<Perm> {
    let vectors: Vec<u8> = (1..8).collect();
    let act = |f: &dyn Fn(u8) -> u8| -> Perm {
        Perm::from_images(
            vectors
                .iter()
                .map(|&v| f(v) - 1)
                .collect(),
        )
        .expect("matrix action permutes nonzero vectors")
    };
    // Bit 0 is e1, bit 1 is e2, bit 2 is e3.
    let transvection = act(&|v| if v & 2 != 0 { v ^ 1 } else { v });
    let shift = act(&|v| ((v << 1) | (v >> 2)) & 7);
    vec![transvection, shift]
}

/// Parses `degree <d>` followed by `gen <img(1)> .. <img(d)>` lines.
pub fn parse_group_file(text: &str) -> Result<(usize, Vec<Perm>), PermError> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let err = |message: String| PermError::Parse { line: no + 1, message };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("degree") => {
                let d: usize = fields
                    .next()
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| err("expected degree <d>".into()))?;
                if fields.next().is_some() || d == 0 || d > 255 {
                    return Err(err("expected degree <d> with 1 <= d <= 255".into()));
                }
                degree = Some(d);
            }
            Some("gen") => {
                let d = degree.ok_or_else(|| err("gen before degree".into()))?;
                let images: Vec<usize> = fields
                    .map(|v| v.parse().map_err(|_| err(format!("bad image {v:?}"))))
                    .collect::<Result<_, _>>()?;
                if images.len() != d {
                    return Err(err(format!("expected {d} images, got {}", images.len())));
                }
                gens.push(Perm::from_one_based(&images).map_err(|e| err(e.to_string()))?);
            }
            Some(other) => return Err(err(format!("unknown record {other:?}"))),
            None => {}
        }
    }
    let degree = degree.ok_or(PermError::Parse {
        line: 0,
        message: "missing degree line".into(),
    })?;
    Ok((degree, gens))
}

/// A preset name, or a path to a group file.
pub fn load_group(spec: &str, caps: Caps) -> Result<PermutationGroup, PermError> {
    let (degree, gens) = match preset(spec) {
        Ok(v) => v,
        Err(PermError::UnknownGroup(_)) if std::path::Path::new(spec).is_file() => {
            let text = std::fs::read_to_string(spec).map_err(|e| PermError::Parse {
                line: 0,
                message: e.to_string(),
            })?;
            parse_group_file(&text)?
        }
        Err(e) => return Err(e),
    };
    PermutationGroup::new(degree, gens, caps)
}
