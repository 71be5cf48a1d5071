use super::{Bitset, GroupTable};

/// A subgroup of a [`GroupTable`] grown one generator at a time.
///
/// Adding a generator extends the element list by whole right cosets of the
/// previous subgroup (Dimino's method), so the cost of each extension is
/// linear in the size of the new subgroup.
#[derive(Clone, Debug)]
pub struct SubgroupBuilder {
    members: Bitset,
    elements: Vec<u32>,
    generators: Vec<u32>,
}

impl SubgroupBuilder {
    pub fn trivial(g: &GroupTable) -> Self {
        let mut members = Bitset::new(g.len());
        members.insert(0);
        SubgroupBuilder {
            members,
            elements: vec![0],
            generators: Vec::new(),
        }
    }

    /// Wraps a membership set already known to be a subgroup generated by `generators`.
    pub(crate) fn from_parts(members: Bitset, generators: Vec<u32>) -> Self {
        let elements = members.to_vec();
        SubgroupBuilder {
            members,
            elements,
            generators,
        }
    }

    pub fn members(&self) -> &Bitset {
        &self.members
    }

    /// Elements in discovery order (not sorted).
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn sorted_elements(&self) -> Vec<u32> {
        self.members.to_vec()
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.members.contains(x)
    }

    /// Adjoin `x`; returns false if it was already a member.
    pub fn add(&mut self, g: &GroupTable, x: u32) -> bool {
        if self.members.contains(x) {
            return false;
        }
        self.generators.push(x);
        let old = self.elements.len();
        self.push_coset(g, old, x);
        let mut rep = old;
        while rep < self.elements.len() {
            let t = self.elements[rep];
            for i in 0..self.generators.len() {
                let y = g.mul(t, self.generators[i]);
                if !self.members.contains(y) {
                    self.push_coset(g, old, y);
                }
            }
            rep += old;
        }
        true
    }

    fn push_coset(&mut self, g: &GroupTable, old: usize, t: u32) {
        for i in 0..old {
            let y = g.mul(self.elements[i], t);
            self.members.insert(y);
            self.elements.push(y);
        }
    }
}
