//! Subgroups, full lattice enumeration, and the index/normality/series toolkit.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::bits::BitSet;
use crate::catalog::GroupDescriptor;
use crate::error::{Error, Result};
use crate::group::{CayleyTable, FiniteGroup, Limits};
use crate::perm::Perm;

/// A subgroup of an enumerated group, stored as a membership bitset over the
/// ambient's sorted element list.
#[derive(Clone)]
pub struct Subgroup {
    ambient: Arc<FiniteGroup>,
    members: BitSet,
    order: u64,
    id: String,
    generators: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup({} order {})", self.id, self.order)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) && self.members == other.members
    }
}

impl Eq for Subgroup {}

/// Digest of the ambient descriptor and the sorted element list.
fn subgroup_id(ambient: &FiniteGroup, members: &BitSet) -> String {
    let mut hasher = Sha256::new();
    hasher.update(ambient.descriptor().to_string().as_bytes());
    hasher.update([0u8]);
    for i in members.iter() {
        hasher.update(ambient.elements()[i].raw());
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

impl Subgroup {
    pub(crate) fn from_bits(ambient: Arc<FiniteGroup>, members: BitSet, generators: Vec<usize>) -> Self {
        let order = members.count() as u64;
        let id = subgroup_id(&ambient, &members);
        Self {
            ambient,
            members,
            order,
            id,
            generators,
        }
    }

    pub fn whole(ambient: &Arc<FiniteGroup>) -> Self {
        let gens = ambient
            .generators()
            .iter()
            .filter_map(|g| ambient.position(g))
            .collect();
        Self::from_bits(ambient.clone(), BitSet::full(ambient.order() as usize), gens)
    }

    pub fn trivial(ambient: &Arc<FiniteGroup>) -> Self {
        let mut bits = BitSet::new(ambient.order() as usize);
        bits.insert(ambient.position(&ambient.identity()).expect("identity"));
        Self::from_bits(ambient.clone(), bits, Vec::new())
    }

    /// Locates a realized group's elements inside `ambient`.
    pub fn from_group(ambient: &Arc<FiniteGroup>, group: &FiniteGroup) -> Result<Self> {
        let mut bits = BitSet::new(ambient.order() as usize);
        for g in group.elements() {
            let pos = ambient
                .position(g)
                .ok_or_else(|| Error::NotInAmbient(g.to_cycle_string()))?;
            bits.insert(pos);
        }
        let gens = group
            .generators()
            .iter()
            .filter_map(|g| ambient.position(g))
            .collect();
        Ok(Self::from_bits(ambient.clone(), bits, gens))
    }

    pub fn ambient(&self) -> &Arc<FiniteGroup> {
        &self.ambient
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.ambient
            .position(g)
            .is_some_and(|pos| self.members.contains(pos))
    }

    /// Elements in canonical (ascending) order.
    pub fn elements(&self) -> impl Iterator<Item = &Perm> + '_ {
        self.members.iter().map(|i| &self.ambient.elements()[i])
    }

    pub fn generator_positions(&self) -> &[usize] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<Perm> {
        self.generators
            .iter()
            .map(|&i| self.ambient.elements()[i])
            .collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) && self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// This subgroup as a standalone permutation group.
    pub fn to_group(&self) -> FiniteGroup {
        let gens = self.generators();
        FiniteGroup::from_elements(
            GroupDescriptor::Gens {
                degree: self.ambient.degree(),
                generators: if gens.is_empty() {
                    vec![self.ambient.identity()]
                } else {
                    gens.clone()
                },
            },
            self.ambient.degree(),
            gens,
            self.elements().copied().collect(),
        )
    }

    fn table(&self) -> Arc<CayleyTable> {
        self.ambient.table().expect("ambient was enumerated with a table")
    }

    fn same_ambient(&self, other: &Subgroup) -> Result<()> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }
}

/// Smallest subgroup of `ambient` containing `seed`.
pub fn generated_subgroup(ambient: &Arc<FiniteGroup>, seed: &[Perm]) -> Result<Subgroup> {
    let positions: Vec<usize> = seed
        .iter()
        .map(|g| {
            ambient
                .position(g)
                .ok_or_else(|| Error::NotInAmbient(g.to_cycle_string()))
        })
        .collect::<Result<_>>()?;
    let t = ambient.table()?;
    let bits = close_positions(&t, &positions);
    Ok(Subgroup::from_bits(ambient.clone(), bits, positions))
}

/// Closure of element positions under the table's multiplication.
fn close_positions(t: &CayleyTable, gens: &[usize]) -> BitSet {
    let mut bits = BitSet::new(t.len());
    let id = t.identity();
    bits.insert(id);
    let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != id).collect();
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for &g in &gens {
            let y = t.mul(x, g);
            if bits.insert(y) {
                queue.push_back(y);
            }
        }
    }
    bits
}

fn conjugate_bits(t: &CayleyTable, g: usize, bits: &BitSet) -> BitSet {
    let mut out = BitSet::new(t.len());
    for x in bits.iter() {
        out.insert(t.conj(g, x));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `n = p^a` for some `a >= 0`; in particular `is_power_of(1, p)` holds.
pub fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 || p < 2 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n > 0 && n % p == 0 {
        n /= p;
        part *= p;
    }
    part
}

/// Largest divisor of `n` coprime to `p`.
pub fn non_p_part(n: u64, p: u64) -> u64 {
    n / p_part(n, p)
}

/// A subgroup index `[H:K]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index {
    pub value: u64,
}

impl Index {
    pub fn p_part(&self, p: u64) -> u64 {
        p_part(self.value, p)
    }

    pub fn non_p_part(&self, p: u64) -> u64 {
        non_p_part(self.value, p)
    }

    pub fn is_power_of(&self, p: u64) -> bool {
        is_power_of(self.value, p)
    }
}

/// `[H:K]`, requiring `K <= H`.
pub fn index(h: &Subgroup, k: &Subgroup) -> Result<Index> {
    h.same_ambient(k)?;
    if !k.is_subgroup_of(h) {
        return Err(Error::NotContained(k.id.clone(), h.id.clone()));
    }
    Ok(Index {
        value: h.order / k.order,
    })
}

pub fn intersect(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    a.same_ambient(b)?;
    let bits = a.members.and(&b.members);
    // members of the intersection generate it
    let t = a.table();
    let gens = small_generating_set(&t, &bits);
    Ok(Subgroup::from_bits(a.ambient.clone(), bits, gens))
}

/// `⟨A ∪ B⟩`.
pub fn join(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    a.same_ambient(b)?;
    let mut gens = a.generators.clone();
    gens.extend(b.generators.iter().copied());
    let t = a.table();
    let bits = close_positions(&t, &gens);
    Ok(Subgroup::from_bits(a.ambient.clone(), bits, gens))
}

/// Greedy generating set: add elements not yet covered by the current closure.
fn small_generating_set(t: &CayleyTable, bits: &BitSet) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut covered = BitSet::new(t.len());
    covered.insert(t.identity());
    let target = bits.count();
    // prefer high-order elements: they cover more per step
    let mut candidates: Vec<usize> = bits.iter().collect();
    candidates.sort_by_key(|&x| std::cmp::Reverse(element_order(t, x)));
    for x in candidates {
        if covered.count() == target {
            break;
        }
        if !covered.contains(x) {
            gens.push(x);
            covered = close_positions(t, &gens);
        }
    }
    gens
}

fn element_order(t: &CayleyTable, x: usize) -> u64 {
    let mut k = 1;
    let mut y = x;
    while y != t.identity() {
        y = t.mul(y, x);
        k += 1;
    }
    k
}

/// `gHg^-1`.
pub fn conjugate(h: &Subgroup, g: &Perm) -> Result<Subgroup> {
    let gpos = h
        .ambient
        .position(g)
        .ok_or_else(|| Error::NotInAmbient(g.to_cycle_string()))?;
    let t = h.table();
    let bits = conjugate_bits(&t, gpos, &h.members);
    let gens = h.generators.iter().map(|&x| t.conj(gpos, x)).collect();
    Ok(Subgroup::from_bits(h.ambient.clone(), bits, gens))
}

/// `H ⊴ G`, with `H <= G` required.
pub fn is_normal(g: &Subgroup, h: &Subgroup) -> Result<bool> {
    g.same_ambient(h)?;
    if !h.is_subgroup_of(g) {
        return Err(Error::NotContained(h.id.clone(), g.id.clone()));
    }
    let t = g.table();
    Ok(g.generators.iter().all(|&x| {
        h.generators
            .iter()
            .all(|&y| h.members.contains(t.conj(x, y)))
    }))
}

/// The conjugacy class of `H` under `G`, sorted by id.
pub fn conjugates(g: &Subgroup, h: &Subgroup) -> Result<Vec<Subgroup>> {
    g.same_ambient(h)?;
    let t = g.table();
    let mut seen: HashSet<BitSet> = HashSet::from([h.members.clone()]);
    let mut out = vec![h.clone()];
    let mut queue = VecDeque::from([h.clone()]);
    while let Some(cur) = queue.pop_front() {
        for &x in &g.generators {
            let bits = conjugate_bits(&t, x, &cur.members);
            if seen.insert(bits.clone()) {
                let gens = cur.generators.iter().map(|&y| t.conj(x, y)).collect();
                let s = Subgroup::from_bits(g.ambient.clone(), bits, gens);
                out.push(s.clone());
                queue.push_back(s);
            }
        }
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// Largest normal subgroup of `G` inside `A`: the intersection of all conjugates.
pub fn normal_core(g: &Subgroup, a: &Subgroup) -> Result<Subgroup> {
    let class = conjugates(g, a)?;
    let mut core = class[0].clone();
    for c in &class[1..] {
        core = intersect(&core, c)?;
    }
    Ok(core)
}

/// `⟨[a, b] : a ∈ A, b ∈ B⟩` with `[a, b] = a^-1 b^-1 a b`.
pub fn commutator_subgroup(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    a.same_ambient(b)?;
    let t = a.table();
    let bs: Vec<usize> = b.members.iter().collect();
    let partial: Vec<BitSet> = a
        .members
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| {
            let mut set = BitSet::new(t.len());
            let xi = t.inv(x);
            for &y in &bs {
                let c = t.mul(t.mul(xi, t.inv(y)), t.mul(x, y));
                set.insert(c);
            }
            set
        })
        .collect();
    let mut commutators = BitSet::new(t.len());
    for s in partial {
        for c in s.iter() {
            commutators.insert(c);
        }
    }
    let gens = small_generating_set(&t, &closure_of(&t, &commutators));
    let bits = close_positions(&t, &gens);
    Ok(Subgroup::from_bits(a.ambient.clone(), bits, gens))
}

fn closure_of(t: &CayleyTable, set: &BitSet) -> BitSet {
    let gens: Vec<usize> = set.iter().collect();
    close_positions(t, &gens)
}

/// `G = G_0 ≥ G_1 ≥ ...` with `G_{i+1} = [G_i, G_i]`, up to stabilization.
pub fn derived_series(g: &Subgroup) -> Result<Vec<Subgroup>> {
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().unwrap();
        let next = commutator_subgroup(last, last)?;
        if next.members == last.members {
            return Ok(series);
        }
        series.push(next);
    }
}

/// `G = G_0 ≥ G_1 ≥ ...` with `G_{i+1} = [G_i, G]`, up to stabilization.
pub fn lower_central_series(g: &Subgroup) -> Result<Vec<Subgroup>> {
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().unwrap();
        let next = commutator_subgroup(last, g)?;
        if next.members == last.members {
            return Ok(series);
        }
        series.push(next);
    }
}

pub fn is_solvable(g: &Subgroup) -> Result<bool> {
    Ok(derived_series(g)?.last().unwrap().is_trivial())
}

pub fn is_nilpotent(g: &Subgroup) -> Result<bool> {
    Ok(lower_central_series(g)?.last().unwrap().is_trivial())
}

/// The complete subgroup lattice of an enumerated group, sorted by `(order, id)`.
pub struct Lattice {
    group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
    by_members: HashMap<BitSet, usize>,
    by_id: HashMap<String, usize>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice({}, {} subgroups)", self.group.descriptor(), self.subgroups.len())
    }
}

impl Lattice {
    /// Enumerates every subgroup by bottom-up closure.
    ///
    /// Cyclic subgroups seed the search; a subgroup is then extended by each
    /// prime-power-order cyclic subgroup it does not contain. Only one
    /// representative per conjugacy class is extended, while every conjugate is
    /// recorded, so the result is still the full lattice.
    pub fn enumerate(group: Arc<FiniteGroup>, limits: &Limits) -> Result<Lattice> {
        if group.order() > limits.max_order {
            return Err(Error::CapExceeded {
                what: "group order",
                limit: limits.max_order,
                actual: group.order(),
            });
        }
        let t = group.table()?;
        let n = t.len();
        let group_gens: Vec<usize> = group
            .generators()
            .iter()
            .filter_map(|g| group.position(g))
            .collect();

        let mut engine = Engine {
            t: &t,
            group_gens: &group_gens,
            seen: HashMap::new(),
            found: Vec::new(),
            cap: limits.max_subgroups,
        };

        let mut frontier = Vec::new();
        let mut extenders = Vec::new();
        let mut cyclic_seen: HashSet<BitSet> = HashSet::new();
        for g in 0..n {
            let bits = close_positions(&t, &[g]);
            if !cyclic_seen.insert(bits.clone()) {
                continue;
            }
            let ord = bits.count() as u64;
            if ord > 1 && prime_factors(ord).len() == 1 {
                extenders.push(g);
            }
            let gens = if g == t.identity() { vec![] } else { vec![g] };
            if let Some(i) = engine.add_class(bits, gens)? {
                frontier.push(i);
            }
        }

        while !frontier.is_empty() {
            let joins: Vec<Vec<(BitSet, Vec<usize>)>> = frontier
                .par_iter()
                .map(|&r| {
                    let (bits, gens) = &engine.found[r];
                    let mut local: HashSet<BitSet> = HashSet::new();
                    let mut out = Vec::new();
                    for &c in &extenders {
                        if bits.contains(c) {
                            continue;
                        }
                        let mut g2 = gens.clone();
                        g2.push(c);
                        let j = close_positions(&t, &g2);
                        if local.insert(j.clone()) {
                            out.push((j, g2));
                        }
                    }
                    out
                })
                .collect();
            let mut next = Vec::new();
            for batch in joins {
                for (bits, gens) in batch {
                    if let Some(i) = engine.add_class(bits, gens)? {
                        next.push(i);
                    }
                }
            }
            frontier = next;
        }

        let found = engine.found;
        let subgroups: Vec<Subgroup> = found
            .into_par_iter()
            .map(|(bits, gens)| Subgroup::from_bits(group.clone(), bits, gens))
            .collect();
        Ok(Self::from_subgroups(group, subgroups))
    }

    /// Assembles a lattice from subgroups already known to be complete.
    pub(crate) fn from_subgroups(group: Arc<FiniteGroup>, mut subgroups: Vec<Subgroup>) -> Lattice {
        subgroups.sort_by(|a, b| (a.order, &a.id).cmp(&(b.order, &b.id)));
        let by_members = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members.clone(), i))
            .collect();
        let by_id = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i))
            .collect();
        Lattice {
            group,
            subgroups,
            by_members,
            by_id,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// Position of a subgroup (by element set) in the sorted list.
    pub fn position(&self, s: &Subgroup) -> Option<usize> {
        if !Arc::ptr_eq(&self.group, &s.ambient) {
            return None;
        }
        self.by_members.get(&s.members).copied()
    }

    pub fn position_of_bits(&self, bits: &BitSet) -> Option<usize> {
        self.by_members.get(bits).copied()
    }

    pub fn by_id(&self, id: &str) -> Option<&Subgroup> {
        self.by_id.get(id).map(|&i| &self.subgroups[i])
    }

    pub fn whole(&self) -> &Subgroup {
        self.subgroups.last().expect("lattice is never empty")
    }

    pub fn trivial(&self) -> &Subgroup {
        &self.subgroups[0]
    }

    pub fn normal_subgroups(&self) -> Result<Vec<&Subgroup>> {
        let g = self.whole();
        let mut out = Vec::new();
        for s in &self.subgroups {
            if is_normal(g, s)? {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// First subgroup (in lattice order) whose order is the full `p`-part of `|G|`.
    pub fn sylow_subgroup(&self, p: u64) -> Result<&Subgroup> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        let target = p_part(self.group.order(), p);
        Ok(self
            .subgroups
            .iter()
            .find(|s| s.order == target)
            .expect("Sylow subgroups exist"))
    }

    /// First subgroup of order `|G|_{p'}`, if any.
    pub fn hall_complement(&self, p: u64) -> Option<&Subgroup> {
        let target = non_p_part(self.group.order(), p);
        self.subgroups.iter().find(|s| s.order == target)
    }

    /// Smallest (by order, then id) solvable subgroup that is not nilpotent.
    pub fn find_solvable_nonnilpotent(&self) -> Result<Option<&Subgroup>> {
        for s in &self.subgroups {
            if is_solvable(s)? && !is_nilpotent(s)? {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    /// For nilpotent `G`, checks that every subgroup is the direct product of
    /// its projections onto the Sylow factors. The projection onto the
    /// `q`-factor is `g ↦ g^e` with `e ≡ 1 (mod |G|_q)`, `e ≡ 0 (mod |G|_{q'})`.
    pub fn subgroup_decomposition_check(&self) -> Result<bool> {
        let g = self.whole();
        if !is_nilpotent(g)? {
            return Err(Error::NotNilpotent(self.group.descriptor().to_string()));
        }
        let t = self.group.table()?;
        let order = self.group.order();
        let primes = prime_factors(order);
        let mut exponents = Vec::new();
        for &q in &primes {
            let qpart = p_part(order, q);
            let rest = order / qpart;
            // rest * inv(rest mod qpart)
            let inv = (1..=qpart).find(|x| (rest % qpart) * x % qpart == 1 % qpart).unwrap_or(1);
            exponents.push((q, rest * inv));
        }
        for h in &self.subgroups {
            let mut product = BitSet::new(t.len());
            product.insert(t.identity());
            for &(q, e) in &exponents {
                let mut proj = BitSet::new(t.len());
                for x in h.members.iter() {
                    proj.insert(t.pow(x, e));
                }
                let sylow = self.sylow_subgroup(q)?;
                if !proj.is_subset(&h.members) || !proj.is_subset(&sylow.members) {
                    return Ok(false);
                }
                let mut next = BitSet::new(t.len());
                for a in product.iter() {
                    for b in proj.iter() {
                        next.insert(t.mul(a, b));
                    }
                }
                product = next;
            }
            if product != h.members {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct Engine<'a> {
    t: &'a CayleyTable,
    group_gens: &'a [usize],
    seen: HashMap<BitSet, usize>,
    found: Vec<(BitSet, Vec<usize>)>,
    cap: usize,
}

impl Engine<'_> {
    /// Records `bits` and its whole conjugacy class. Returns the index of
    /// `bits` when it was new, i.e. when it becomes a class representative.
    fn add_class(&mut self, bits: BitSet, gens: Vec<usize>) -> Result<Option<usize>> {
        if self.seen.contains_key(&bits) {
            return Ok(None);
        }
        let rep = self.found.len();
        self.seen.insert(bits.clone(), rep);
        self.found.push((bits.clone(), gens.clone()));
        let mut queue = VecDeque::from([(bits, gens)]);
        while let Some((cur, cur_gens)) = queue.pop_front() {
            for &x in self.group_gens {
                let conj = conjugate_bits(self.t, x, &cur);
                if self.seen.contains_key(&conj) {
                    continue;
                }
                let conj_gens: Vec<usize> = cur_gens.iter().map(|&y| self.t.conj(x, y)).collect();
                self.seen.insert(conj.clone(), self.found.len());
                self.found.push((conj.clone(), conj_gens.clone()));
                queue.push_back((conj, conj_gens));
            }
            if self.found.len() > self.cap {
                return Err(Error::CapExceeded {
                    what: "subgroup count",
                    limit: self.cap as u64,
                    actual: self.found.len() as u64,
                });
            }
        }
        Ok(Some(rep))
    }
}
