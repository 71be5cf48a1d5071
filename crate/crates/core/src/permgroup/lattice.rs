//! Conjugacy classes of subgroups, rank and d-maximality.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use super::{Bitset, GroupError, GroupTable, SubgroupBuilder, DEFAULT_MAX_D};
use crate::arith::prime_power;

/// One conjugacy class of subgroups, represented by its lexicographically
/// least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupClass {
    /// Sorted element indices of the representative.
    pub elements: Vec<u32>,
    /// A generating set of the representative.
    pub generators: Vec<u32>,
    pub class_size: u64,
}

impl SubgroupClass {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn builder(&self, g: &GroupTable) -> SubgroupBuilder {
        SubgroupBuilder::from_parts(
            Bitset::from_indices(g.len(), self.elements.iter().copied()),
            self.generators.clone(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupClassList {
    /// Sorted by order, then lexicographically by representative.
    pub classes: Vec<SubgroupClass>,
    pub exhaustive: bool,
}

impl SubgroupClassList {
    pub fn total_subgroups(&self) -> u64 {
        self.classes.iter().map(|c| c.class_size).sum()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Rank value with a witnessing subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub value: u32,
    /// Sorted element indices of the witness.
    pub witness: Vec<u32>,
    /// A generating set of the witness of size `value`.
    pub witness_generators: Vec<u32>,
    /// False when the class budget ran out; `value` is then a lower bound.
    pub exhaustive: bool,
}

struct Orbit {
    rep: SubgroupBuilder,
    size: u64,
    members: Vec<Bitset>,
}

impl GroupTable {
    /// Conjugacy class of `h` under the whole group, with its least member.
    fn conjugacy_orbit(&self, h: SubgroupBuilder) -> Orbit {
        let conj = self.generator_conjugations();
        let mut seen: HashSet<Bitset> = HashSet::new();
        seen.insert(h.members().clone());
        let mut queue = vec![(h.members().clone(), h.generators().to_vec())];
        let mut best = 0usize;
        let mut all = vec![queue[0].clone()];
        while let Some((set, gens)) = queue.pop() {
            for table in conj {
                let image = Bitset::from_indices(self.len(), set.iter().map(|x| table[x as usize]));
                if seen.insert(image.clone()) {
                    let image_gens = gens.iter().map(|&x| table[x as usize]).collect();
                    let entry = (image, image_gens);
                    if entry.0.lex_cmp(&all[best].0) == Ordering::Less {
                        best = all.len();
                    }
                    all.push(entry.clone());
                    queue.push(entry);
                }
            }
        }
        let size = all.len() as u64;
        let (rep_set, rep_gens) = all[best].clone();
        Orbit {
            rep: SubgroupBuilder::from_parts(rep_set, rep_gens),
            size,
            members: all.into_iter().map(|(s, _)| s).collect(),
        }
    }

    /// Conjugacy classes of all subgroups.
    ///
    /// Groups of prime-power order are enumerated layer by layer: every
    /// subgroup of order `ell^(k+1)` is `<K, g>` for a class representative
    /// `K` of order `ell^k` and some `g` in `N(K)` with `g^ell` in `K`.
    /// Other groups are enumerated as joins of cyclic subgroups.
    pub fn subgroup_classes(&self, budget: usize) -> Result<SubgroupClassList, GroupError> {
        match prime_power(self.len() as u64) {
            Some((ell, _)) => self.classes_pgroup(ell, budget),
            None => self.classes_by_cyclic_joins(budget),
        }
    }

    fn finish(mut classes: Vec<SubgroupClass>, exhaustive: bool) -> SubgroupClassList {
        classes.sort_by(|a, b| {
            a.elements
                .len()
                .cmp(&b.elements.len())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        SubgroupClassList {
            classes,
            exhaustive,
        }
    }

    fn orbit_to_class(orbit: &Orbit) -> SubgroupClass {
        SubgroupClass {
            elements: orbit.rep.sorted_elements(),
            generators: orbit.rep.generators().to_vec(),
            class_size: orbit.size,
        }
    }

    fn budget_error(classes: Vec<SubgroupClass>, budget: usize) -> GroupError {
        GroupError::BudgetExceeded {
            budget,
            partial: Box::new(Self::finish(classes, false)),
        }
    }

    fn classes_pgroup(&self, ell: u64, budget: usize) -> Result<SubgroupClassList, GroupError> {
        let trivial = SubgroupBuilder::trivial(self);
        let mut classes = vec![SubgroupClass {
            elements: vec![0],
            generators: vec![],
            class_size: 1,
        }];
        let mut layer = vec![trivial];
        while !layer.is_empty() {
            let mut seen: HashSet<Bitset> = HashSet::new();
            let mut next: Vec<(SubgroupBuilder, u64)> = Vec::new();
            for k in &layer {
                if k.len() == self.len() {
                    continue;
                }
                let normalizer = self.normalizer(k);
                let mut done = k.members().clone();
                for g in normalizer.iter() {
                    if done.contains(g) || !k.contains(self.pow(g, ell)) {
                        continue;
                    }
                    let mut h = k.clone();
                    h.add(self, g);
                    done.union_with(h.members());
                    if seen.contains(h.members()) {
                        continue;
                    }
                    let orbit = self.conjugacy_orbit(h);
                    seen.extend(orbit.members.iter().cloned());
                    next.push((orbit.rep.clone(), orbit.size));
                    if classes.len() + next.len() > budget {
                        classes.extend(next.iter().map(|(r, s)| SubgroupClass {
                            elements: r.sorted_elements(),
                            generators: r.generators().to_vec(),
                            class_size: *s,
                        }));
                        return Err(Self::budget_error(classes, budget));
                    }
                }
            }
            next.sort_by(|a, b| a.0.members().lex_cmp(b.0.members()));
            classes.extend(next.iter().map(|(r, s)| SubgroupClass {
                elements: r.sorted_elements(),
                generators: r.generators().to_vec(),
                class_size: *s,
            }));
            layer = next.into_iter().map(|(r, _)| r).collect();
        }
        Ok(Self::finish(classes, true))
    }

    /// Generators of the distinct cyclic subgroups, least generator each.
    fn cyclic_generators(&self) -> Vec<u32> {
        let mut covered: HashMap<Bitset, ()> = HashMap::new();
        let mut out = Vec::new();
        for g in 1..self.len() as u32 {
            let c = self.generate(&[g]);
            if covered.insert(c.members().clone(), ()).is_none() {
                out.push(g);
            }
        }
        out
    }

    pub(crate) fn classes_by_cyclic_joins(
        &self,
        budget: usize,
    ) -> Result<SubgroupClassList, GroupError> {
        let cyclic = self.cyclic_generators();
        let trivial = SubgroupBuilder::trivial(self);
        let mut seen: HashSet<Bitset> = HashSet::new();
        seen.insert(trivial.members().clone());
        let mut classes = vec![SubgroupClass {
            elements: vec![0],
            generators: vec![],
            class_size: 1,
        }];
        let mut queue = vec![trivial];
        let mut head = 0;
        while head < queue.len() {
            let k = queue[head].clone();
            head += 1;
            for &c in &cyclic {
                if k.contains(c) {
                    continue;
                }
                let mut h = k.clone();
                h.add(self, c);
                if seen.contains(h.members()) {
                    continue;
                }
                let orbit = self.conjugacy_orbit(h);
                seen.extend(orbit.members.iter().cloned());
                classes.push(Self::orbit_to_class(&orbit));
                if classes.len() > budget {
                    return Err(Self::budget_error(classes, budget));
                }
                queue.push(orbit.rep);
            }
        }
        Ok(Self::finish(classes, true))
    }

    /// `rk(G) = max d(H)` over all subgroups, with the lexicographically least
    /// class representative attaining it. A budget hit yields a flagged
    /// lower bound over the classes found so far.
    pub fn rank(&self, budget: usize) -> Result<RankResult, GroupError> {
        let (list, exhaustive) = match self.subgroup_classes(budget) {
            Ok(list) => (list, true),
            Err(GroupError::BudgetExceeded { partial, .. }) => (*partial, false),
            Err(e) => return Err(e),
        };
        self.rank_from_classes(&list, exhaustive)
    }

    pub(crate) fn rank_from_classes(
        &self,
        list: &SubgroupClassList,
        exhaustive: bool,
    ) -> Result<RankResult, GroupError> {
        let mut best: Option<(u32, &SubgroupClass)> = None;
        for class in &list.classes {
            let h = class.builder(self);
            let d = self.d_of(&h, DEFAULT_MAX_D)?;
            let better = match best {
                None => true,
                Some((bd, bc)) => d > bd || (d == bd && class.elements < bc.elements),
            };
            if better {
                best = Some((d, class));
            }
        }
        let (value, class) = best.expect("the trivial subgroup is always listed");
        let h = class.builder(self);
        let witness_generators = match prime_power(h.len() as u64) {
            Some((ell, _)) => self.minimal_generators_pgroup(&h, ell),
            None if h.len() == 1 => Vec::new(),
            None => self.d_search_of(&h, DEFAULT_MAX_D)?,
        };
        Ok(RankResult {
            value,
            witness: class.elements.clone(),
            witness_generators,
            exhaustive,
        })
    }

    /// True iff every proper subgroup needs strictly fewer generators than `G`.
    pub fn is_d_maximal(&self, budget: usize) -> Result<bool, GroupError> {
        let list = self.subgroup_classes(budget)?;
        let dg = self.d()?;
        for class in &list.classes {
            if class.order() == self.len() {
                continue;
            }
            if self.d_of(&class.builder(self), DEFAULT_MAX_D)? >= dg {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
