//! Exact finite-group engine over fully enumerated permutation groups.
//!
//! A [`GroupTable`] holds every element of the group, sorted
//! lexicographically by image sequence, so element index `0` is always the
//! identity. Subgroups are handled as sets of element indices; all
//! tie-breaking picks the lexicographically least candidate.

mod bitset;
mod builder;
mod lattice;

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::{exact_log, prime_power};
use crate::perm::{GroupSpec, Perm, PermError};

pub use bitset::Bitset;
pub use builder::SubgroupBuilder;
pub use lattice::{RankResult, SubgroupClass, SubgroupClassList};

/// Default element cap for [`GroupTable::closure`].
pub const DEFAULT_CAP: usize = 1 << 20;
/// Default limit on the number of conjugacy classes of subgroups.
pub const DEFAULT_CLASS_BUDGET: usize = 1_000_000;
/// Default bound on the generator search.
pub const DEFAULT_MAX_D: u32 = 6;

const TABLE_LIMIT: usize = 1 << 12;

#[derive(Debug, Clone, Error)]
pub enum GroupError {
    #[error("closure exceeded the cap of {cap} elements ({count} found so far)")]
    CapExceeded { count: usize, cap: usize },
    #[error("group of order {order} is not a power of {ell}")]
    NotPrimePower { order: BigUint, ell: u64 },
    #[error("no generating set with at most {max_d} elements")]
    SearchExhausted { max_d: u32 },
    #[error("subgroup class budget of {budget} exhausted")]
    BudgetExceeded {
        budget: usize,
        partial: Box<SubgroupClassList>,
    },
    #[error("lower central series stabilises at order {order}")]
    NotNilpotent { order: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A fully enumerated finite permutation group.
pub struct GroupTable {
    spec: GroupSpec,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
    inverses: Vec<u32>,
    generators: Vec<u32>,
    table: OnceLock<Option<Vec<u32>>>,
    conj_tables: OnceLock<Vec<Vec<u32>>>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("degree", &self.spec.degree)
            .field("order", &self.elements.len())
            .field("name", &self.spec.name)
            .finish()
    }
}

impl GroupTable {
    /// Breadth-first closure of the generators, failing once more than `cap`
    /// elements have been found.
    pub fn closure(spec: &GroupSpec, cap: usize) -> Result<GroupTable, GroupError> {
        assert!(cap >= 1, "closure cap must be positive");
        spec.validate()?;
        let id = Perm::identity(spec.degree);
        let mut seen: HashSet<Perm> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        let gens: Vec<&Perm> = spec
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .collect();
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.then(g);
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    if seen.len() > cap {
                        return Err(GroupError::CapExceeded {
                            count: seen.len(),
                            cap,
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort_unstable();
        Ok(Self::from_sorted(spec.clone(), elements))
    }

    fn from_sorted(spec: GroupSpec, elements: Vec<Perm>) -> GroupTable {
        let index: HashMap<Perm, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let generators = spec.generators.iter().map(|g| index[g]).collect();
        GroupTable {
            spec,
            elements,
            index,
            inverses,
            generators,
            table: OnceLock::new(),
            conj_tables: OnceLock::new(),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.spec.degree
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &Perm {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, p: &Perm) -> Option<u32> {
        self.index.get(p).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.elements.len())
    }

    /// Element indices of the spec generators.
    pub fn generator_indices(&self) -> &[u32] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// `log_ell |G|` if the order is a power of `ell`.
    pub fn ell_exponent(&self, ell: u64) -> Option<u32> {
        exact_log(&self.order(), ell)
    }

    /// The prime dividing `|G|` when the group is a nontrivial prime-power group.
    pub fn prime(&self) -> Option<u64> {
        prime_power(self.elements.len() as u64).map(|(p, _)| p)
    }

    fn mult_table(&self) -> Option<&[u32]> {
        self.table
            .get_or_init(|| {
                let n = self.elements.len();
                if n > TABLE_LIMIT {
                    return None;
                }
                Some(self.build_table())
            })
            .as_deref()
    }

    fn build_table(&self) -> Vec<u32> {
        let n = self.elements.len();
        // Right-multiplication by each generator, then fill rows along a
        // spanning tree: a * b = (a * parent(b)) * s.
        let rmul: Vec<Vec<u32>> = self
            .generators
            .iter()
            .map(|&s| {
                let sp = &self.elements[s as usize];
                self.elements
                    .iter()
                    .map(|x| self.index[&x.then(sp)])
                    .collect()
            })
            .collect();
        let mut parent = vec![(u32::MAX, usize::MAX); n];
        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        visited[0] = true;
        order.push(0u32);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for (si, r) in rmul.iter().enumerate() {
                let y = r[x as usize];
                if !visited[y as usize] {
                    visited[y as usize] = true;
                    parent[y as usize] = (x, si);
                    order.push(y);
                }
            }
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            let row = &mut table[a * n..(a + 1) * n];
            row[0] = a as u32;
            for &b in &order[1..] {
                let (pb, si) = parent[b as usize];
                row[b as usize] = rmul[si][row[pb as usize] as usize];
            }
        }
        table
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.mult_table() {
            Some(t) => t[a as usize * self.elements.len() + b as usize],
            None => self.index[&self.elements[a as usize].then(&self.elements[b as usize])],
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = 0;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Conjugation tables `x -> s^-1 x s`, one per spec generator.
    pub(crate) fn generator_conjugations(&self) -> &[Vec<u32>] {
        self.conj_tables.get_or_init(|| {
            self.generators
                .iter()
                .map(|&s| {
                    (0..self.elements.len() as u32)
                        .map(|x| self.conj(x, s))
                        .collect()
                })
                .collect()
        })
    }

    pub fn full_set(&self) -> Bitset {
        Bitset::from_indices(self.len(), 0..self.len() as u32)
    }

    /// Subgroup generated by the given elements.
    pub fn generate(&self, gens: &[u32]) -> SubgroupBuilder {
        let mut b = SubgroupBuilder::trivial(self);
        for &g in gens {
            b.add(self, g);
        }
        b
    }

    /// Normal closure of `gens` under conjugation by `by`.
    pub fn normal_closure(&self, gens: &[u32], by: &[u32]) -> SubgroupBuilder {
        let mut b = self.generate(gens);
        let mut i = 0;
        while i < b.generators().len() {
            let s = b.generators()[i];
            for &t in by {
                let y = self.conj(s, t);
                b.add(self, y);
            }
            i += 1;
        }
        b
    }

    /// Materialise a subgroup as its own table.
    pub fn subgroup_table(&self, sub: &SubgroupBuilder) -> GroupTable {
        let gens: Vec<Perm> = sub
            .generators()
            .iter()
            .map(|&g| self.elements[g as usize].clone())
            .collect();
        let spec = GroupSpec::trivial(self.degree()).with_generators(gens);
        let elements = sub
            .members()
            .iter()
            .map(|i| self.elements[i as usize].clone())
            .collect();
        GroupTable::from_sorted(spec, elements)
    }

    /// Subgroup generated by all commutators, as a normal closure of the
    /// commutators of generator pairs.
    pub fn derived_subgroup(&self) -> GroupTable {
        self.subgroup_table(&self.derived_builder(&self.generators))
    }

    fn derived_builder(&self, gens: &[u32]) -> SubgroupBuilder {
        let mut comms = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                comms.push(self.commutator(a, b));
            }
        }
        self.normal_closure(&comms, gens)
    }

    /// Subgroup generated by all `ell`-th powers.
    pub fn agemo(&self, ell: u64) -> GroupTable {
        let powers: Vec<u32> = (0..self.len() as u32).map(|g| self.pow(g, ell)).collect();
        self.subgroup_table(&self.generate(&powers))
    }

    /// Subgroup generated by the elements of order dividing `ell`.
    pub fn omega1(&self, ell: u64) -> Result<GroupTable, GroupError> {
        self.require_ell_group(ell)?;
        let low: Vec<u32> = (0..self.len() as u32)
            .filter(|&g| self.pow(g, ell) == 0)
            .collect();
        Ok(self.subgroup_table(&self.generate(&low)))
    }

    fn require_ell_group(&self, ell: u64) -> Result<u32, GroupError> {
        self.ell_exponent(ell)
            .ok_or_else(|| GroupError::NotPrimePower {
                order: self.order(),
                ell,
            })
    }

    /// `N_G(H)` as a membership set.
    pub fn normalizer(&self, sub: &SubgroupBuilder) -> Bitset {
        let mut out = Bitset::new(self.len());
        for g in 0..self.len() as u32 {
            if sub
                .generators()
                .iter()
                .all(|&s| sub.contains(self.conj(s, g)))
            {
                out.insert(g);
            }
        }
        out
    }

    /// A Sylow `ell`-subgroup, grown one index-`ell` step at a time inside
    /// normalizers, always taking the least admissible element.
    pub fn sylow(&self, ell: u64) -> GroupTable {
        self.subgroup_table(&self.sylow_builder(ell))
    }

    pub(crate) fn sylow_builder(&self, ell: u64) -> SubgroupBuilder {
        let target = {
            let mut n = self.len();
            let mut t = 1usize;
            while n % ell as usize == 0 {
                n /= ell as usize;
                t *= ell as usize;
            }
            t
        };
        let mut p = SubgroupBuilder::trivial(self);
        while p.len() < target {
            let next = (0..self.len() as u32).find(|&g| {
                !p.contains(g)
                    && p.contains(self.pow(g, ell))
                    && p.generators().iter().all(|&s| p.contains(self.conj(s, g)))
            });
            let g = next.expect("a p-subgroup below Sylow order has a proper normalizer extension");
            p.add(self, g);
        }
        p
    }

    /// Length of the lower central series.
    pub fn nilpotency_class(&self) -> Result<u32, GroupError> {
        let mut current = self.generate(&self.generators);
        let mut class = 0;
        while current.len() > 1 {
            let mut comms = Vec::new();
            for &x in current.generators() {
                for &s in &self.generators {
                    comms.push(self.commutator(x, s));
                }
            }
            let next = self.normal_closure(&comms, &self.generators);
            if next.len() == current.len() {
                return Err(GroupError::NotNilpotent {
                    order: current.len(),
                });
            }
            current = next;
            class += 1;
        }
        Ok(class)
    }

    /// Frattini subgroup `H^ell [H, H]` of an `ell`-subgroup `H`.
    pub(crate) fn frattini_of(&self, sub: &SubgroupBuilder, ell: u64) -> SubgroupBuilder {
        let mut seeds: Vec<u32> = sub.elements().iter().map(|&h| self.pow(h, ell)).collect();
        let gens = sub.generators();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                seeds.push(self.commutator(a, b));
            }
        }
        self.normal_closure(&seeds, gens)
    }

    /// `d(H)` for an `ell`-subgroup `H` via `|H / Phi(H)|`.
    pub(crate) fn d_frattini_of(&self, sub: &SubgroupBuilder, ell: u64) -> Result<u32, GroupError> {
        let n = sub.len() as u64;
        if exact_log(&BigUint::from(n), ell).is_none() {
            return Err(GroupError::NotPrimePower {
                order: BigUint::from(n),
                ell,
            });
        }
        if n == 1 {
            return Ok(0);
        }
        let phi = self.frattini_of(sub, ell);
        let index = n / phi.len() as u64;
        Ok(exact_log(&BigUint::from(index), ell).expect("Frattini index is a prime power"))
    }

    /// A generating set of size `d(H)` for an `ell`-subgroup, chosen greedily
    /// outside the Frattini subgroup.
    pub(crate) fn minimal_generators_pgroup(&self, sub: &SubgroupBuilder, ell: u64) -> Vec<u32> {
        let phi = self.frattini_of(sub, ell);
        let mut span = phi.clone();
        let mut chosen = Vec::new();
        for &h in sub.elements() {
            if span.len() == sub.len() {
                break;
            }
            if !span.contains(h) {
                span.add(self, h);
                chosen.push(h);
            }
        }
        chosen
    }

    /// `d(G) = log_ell |G / G^ell [G, G]|` for an `ell`-group.
    pub fn d_frattini(&self, ell: u64) -> Result<u32, GroupError> {
        let whole = self.generate(&self.generators);
        self.d_frattini_of(&whole, ell)
    }

    /// Exact `d(G)` by level-wise search over generated subgroups.
    pub fn d_search(&self, max_d: u32) -> Result<u32, GroupError> {
        let whole = self.generate(&self.generators);
        self.d_search_of(&whole, max_d)
            .map(|gens| gens.len() as u32)
    }

    /// Minimal generating tuple of `H` by searching tuples of size
    /// `1, 2, ..`. At each level only subgroups not contained in an
    /// already-formed extension of the same parent are expanded, since a
    /// smaller subgroup can never reach `H` sooner than a larger one.
    pub(crate) fn d_search_of(
        &self,
        sub: &SubgroupBuilder,
        max_d: u32,
    ) -> Result<Vec<u32>, GroupError> {
        if sub.len() == 1 {
            return Ok(Vec::new());
        }
        let mut level: Vec<SubgroupBuilder> = vec![SubgroupBuilder::trivial(self)];
        for _ in 1..=max_d {
            let mut next: Vec<SubgroupBuilder> = Vec::new();
            let mut seen: HashSet<Bitset> = HashSet::new();
            for k in &level {
                let mut covered = k.members().clone();
                for &g in sub.elements() {
                    if covered.contains(g) {
                        continue;
                    }
                    let mut h = k.clone();
                    h.add(self, g);
                    covered.union_with(h.members());
                    if h.len() == sub.len() {
                        let mut gens = k.generators().to_vec();
                        gens.push(g);
                        return Ok(gens);
                    }
                    if seen.insert(h.members().clone()) {
                        next.push(h);
                    }
                }
            }
            // Drop subgroups dominated by another candidate.
            next.sort_by_key(|h| std::cmp::Reverse(h.len()));
            let mut kept: Vec<SubgroupBuilder> = Vec::new();
            for h in next {
                if !kept
                    .iter()
                    .any(|k| k.len() > h.len() && h.members().is_subset(k.members()))
                {
                    kept.push(h);
                }
            }
            level = kept;
        }
        Err(GroupError::SearchExhausted { max_d })
    }

    /// `d(H)`, by the Frattini quotient when `H` has prime-power order and by
    /// search otherwise.
    pub(crate) fn d_of(&self, sub: &SubgroupBuilder, max_d: u32) -> Result<u32, GroupError> {
        match prime_power(sub.len() as u64) {
            None if sub.len() == 1 => Ok(0),
            Some((ell, _)) => self.d_frattini_of(sub, ell),
            None => self.d_search_of(sub, max_d).map(|g| g.len() as u32),
        }
    }

    /// `d(G)` using the cheapest exact method.
    pub fn d(&self) -> Result<u32, GroupError> {
        let whole = self.generate(&self.generators);
        self.d_of(&whole, DEFAULT_MAX_D)
    }

    /// Whether `H` is normal in the whole group.
    pub fn is_normal(&self, sub: &SubgroupBuilder) -> bool {
        sub.generators().iter().all(|&s| {
            self.generators
                .iter()
                .all(|&g| sub.contains(self.conj(s, g)))
        })
    }

    /// Membership set of a materialised subgroup table, if it lives in this group.
    pub fn embed(&self, sub: &GroupTable) -> Option<SubgroupBuilder> {
        let mut b = SubgroupBuilder::trivial(self);
        for p in &sub.spec.generators {
            b.add(self, self.index_of(p)?);
        }
        (b.len() == sub.len()).then_some(b)
    }

    /// Spec generators of this table re-expressed as a subgroup builder.
    pub fn whole(&self) -> SubgroupBuilder {
        self.generate(&self.generators)
    }
}
