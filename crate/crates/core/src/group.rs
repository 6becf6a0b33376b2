//! Finite permutation groups held as a sorted element list.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::catalog::GroupDescriptor;
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Enumeration limits shared by constructors and the lattice engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_degree: usize,
    /// Largest group whose elements (and lattice) are fully enumerated.
    pub max_order: u64,
    pub max_subgroups: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_degree: 16,
            max_order: 5040,
            max_subgroups: 200_000,
        }
    }
}

/// Multiplication table over element positions. `mul(a, b)` is `a∘b`, `b` acting first.
pub struct CayleyTable {
    n: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    identity: usize,
}

impl CayleyTable {
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `a^k`.
    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }
}

pub struct FiniteGroup {
    descriptor: GroupDescriptor,
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    keys: Vec<u64>,
    table: OnceLock<Arc<CayleyTable>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("descriptor", &self.descriptor.to_string())
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteGroup {
    /// Closes `generators` under composition. Fails once more than `max_order`
    /// elements appear.
    pub fn generate(
        descriptor: GroupDescriptor,
        degree: usize,
        generators: Vec<Perm>,
        max_order: u64,
    ) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let elements = closure(degree, &generators, max_order)?;
        Ok(Self::from_elements(descriptor, degree, generators, elements))
    }

    /// Wraps an element list already known to be a group.
    pub(crate) fn from_elements(
        descriptor: GroupDescriptor,
        degree: usize,
        generators: Vec<Perm>,
        mut elements: Vec<Perm>,
    ) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let keys = elements.iter().map(Perm::key).collect();
        Self {
            descriptor,
            degree,
            generators,
            elements,
            keys,
            table: OnceLock::new(),
        }
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// All elements in ascending image-array order.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn position(&self, g: &Perm) -> Option<usize> {
        if g.degree() != self.degree {
            return None;
        }
        self.keys.binary_search(&g.key()).ok()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.position(g).is_some()
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree).expect("degree validated at construction")
    }

    /// Size of the element-set intersection with a group of the same degree.
    pub fn intersection_order(&self, other: &FiniteGroup) -> u64 {
        let (mut i, mut j, mut n) = (0, 0, 0u64);
        while i < self.keys.len() && j < other.keys.len() {
            match self.keys[i].cmp(&other.keys[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn same_elements(&self, other: &FiniteGroup) -> bool {
        self.degree == other.degree && self.keys == other.keys
    }

    pub fn is_subset_of(&self, other: &FiniteGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|g| other.contains(g))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| {
            self.generators
                .iter()
                .all(|b| a.compose_unchecked(b) == b.compose_unchecked(a))
        })
    }

    /// Multiplication table, built on first use.
    pub fn table(&self) -> Result<Arc<CayleyTable>> {
        if let Some(t) = self.table.get() {
            return Ok(t.clone());
        }
        if self.elements.len() > u16::MAX as usize {
            return Err(Error::CapExceeded {
                what: "group order for a multiplication table",
                limit: u16::MAX as u64,
                actual: self.order(),
            });
        }
        let n = self.elements.len();
        let rows: Vec<Vec<u16>> = self
            .elements
            .par_iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| {
                        let ab = a.compose_unchecked(b);
                        self.keys
                            .binary_search(&ab.key())
                            .expect("group is closed") as u16
                    })
                    .collect()
            })
            .collect();
        let mul: Vec<u16> = rows.into_iter().flatten().collect();
        let identity = self.position(&self.identity()).expect("identity present");
        let inv: Vec<u16> = self
            .elements
            .iter()
            .map(|a| self.position(&a.inverse()).expect("group is closed") as u16)
            .collect();
        let table = Arc::new(CayleyTable {
            n,
            mul,
            inv,
            identity,
        });
        Ok(self.table.get_or_init(|| table).clone())
    }
}

/// Breadth-first closure of a generating set.
pub(crate) fn closure(degree: usize, generators: &[Perm], max_order: u64) -> Result<Vec<Perm>> {
    let id = Perm::identity(degree)?;
    let gens: Vec<Perm> = generators.iter().copied().filter(|g| !g.is_identity()).collect();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut out = vec![id];
    seen.insert(id.key());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.compose_unchecked(g);
            if seen.insert(y.key()) {
                if out.len() as u64 >= max_order {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        limit: max_order,
                        actual: out.len() as u64 + 1,
                    });
                }
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(texts: &[&str], n: usize) -> Vec<Perm> {
        texts.iter().map(|t| Perm::parse_cycles(t, n).unwrap()).collect()
    }

    fn group(texts: &[&str], n: usize) -> FiniteGroup {
        let g = gens(texts, n);
        FiniteGroup::generate(GroupDescriptor::Gens { degree: n, generators: g.clone() }, n, g, 5040)
            .unwrap()
    }

    #[test]
    fn closure_orders() {
        assert_eq!(group(&["(1 2 3 4 5)", "(1 2)"], 5).order(), 120);
        assert_eq!(group(&["(1 2 3)"], 3).order(), 3);
        assert_eq!(group(&[], 4).order(), 1);
    }

    #[test]
    fn closure_cap() {
        let g = gens(&["(1 2 3 4 5 6 7 8)", "(1 2)"], 8);
        let err = FiniteGroup::generate(GroupDescriptor::Gens { degree: 8, generators: g.clone() }, 8, g, 5040)
            .unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn table_matches_composition() {
        let g = group(&["(1 2 3 4)", "(1 2)"], 4);
        let t = g.table().unwrap();
        for (a, pa) in g.elements().iter().enumerate() {
            assert_eq!(g.elements()[t.inv(a)], pa.inverse());
            for (b, pb) in g.elements().iter().enumerate() {
                assert_eq!(g.elements()[t.mul(a, b)], pa.compose(pb).unwrap());
            }
        }
        assert!(g.elements()[t.identity()].is_identity());
    }

    #[test]
    fn intersection_by_merge() {
        let a = group(&["(1 2)"], 3);
        let b = group(&["(1 3)"], 3);
        assert_eq!(a.intersection_order(&b), 1);
        assert_eq!(a.intersection_order(&a), 2);
        assert!(a.is_subset_of(&group(&["(1 2 3)", "(1 2)"], 3)));
    }
}
