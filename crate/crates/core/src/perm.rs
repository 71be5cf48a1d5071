//! Permutations on `{0, .., degree - 1}` and generator-list group specs.
//!
//! Products are read left to right: `a.then(b)` maps `i` to `b[a[i]]`, so a
//! permutation group acts on the right, and `x^g = g^-1 x g`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::Descriptor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image list is not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("malformed group file: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn new(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Perm::new(images.clone()).is_ok());
        Perm(images)
    }

    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    /// A permutation from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x as usize >= degree || y as usize >= degree {
                    return Err(PermError::NotBijection(degree));
                }
                images[x as usize] = y;
            }
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn pow(&self, e: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        a.inverse().then(&b.inverse()).then(a).then(b)
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut acc = 1u64;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            acc = acc / crate::arith::gcd(acc, len) * len;
        }
        acc
    }

    /// Acts on `degree + shift` points by moving every point up by `shift`;
    /// points outside the window are fixed.
    pub fn shifted(&self, shift: usize, degree: usize) -> Perm {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in self.0.iter().enumerate() {
            images[i + shift] = x + shift as u32;
        }
        Perm(images)
    }
}

impl TryFrom<Vec<u32>> for Perm {
    type Error = PermError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<u32> {
    fn from(p: Perm) -> Self {
        p.0
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite permutation group given by its degree and generators.
///
/// Serializes to the group file format: compact JSON with keys `degree`,
/// `generators`, `name`, `descriptor` in that order, the last two omitted
/// when absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Perm>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub descriptor: Option<Descriptor>,
}

impl GroupSpec {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, PermError> {
        let spec = GroupSpec {
            degree,
            generators,
            name: None,
            descriptor: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn trivial(degree: usize) -> Self {
        GroupSpec {
            degree,
            generators: Vec::new(),
            name: None,
            descriptor: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_descriptor(mut self, descriptor: Descriptor) -> Self {
        self.descriptor = Some(descriptor);
        self
    }

    pub fn validate(&self) -> Result<(), PermError> {
        if self.degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        for (index, g) in self.generators.iter().enumerate() {
            if g.degree() != self.degree {
                return Err(PermError::DegreeMismatch {
                    index,
                    found: g.degree(),
                    expected: self.degree,
                });
            }
        }
        Ok(())
    }

    /// Canonical group-file text, newline terminated.
    pub fn to_file_string(&self) -> String {
        let mut s = serde_json::to_string(self).expect("group spec serializes");
        s.push('\n');
        s
    }

    pub fn from_file_str(s: &str) -> Result<Self, PermError> {
        let spec: GroupSpec =
            serde_json::from_str(s).map_err(|e| PermError::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Direct product acting on the disjoint union of the two domains.
    pub fn direct_product(&self, other: &GroupSpec) -> GroupSpec {
        let degree = self.degree + other.degree;
        let mut generators: Vec<Perm> = self
            .generators
            .iter()
            .map(|g| g.shifted(0, degree))
            .collect();
        generators.extend(
            other
                .generators
                .iter()
                .map(|g| g.shifted(self.degree, degree)),
        );
        GroupSpec::trivial(degree).with_generators(generators)
    }

    pub(crate) fn with_generators(mut self, generators: Vec<Perm>) -> Self {
        self.generators = generators;
        self
    }
}
