//! Components of `Γ_p(Alt_X)` through `Alt_{1..p^k}`: classified vertices,
//! the pure-alternating B-graph and brute-force cross-checks.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{alt_on_subset, alternating, factorial, realize, GroupDescriptor};
use crate::error::{Error, Result};
use crate::graph::{adjacent_by_orders, CommGraph, Vertex};
use crate::group::{closure, FiniteGroup, Limits};
use crate::lattice::{is_power_of, is_prime, Lattice, Subgroup};
use crate::perm::{all_perms_on, Perm, MAX_DEGREE};

/// Largest complement on which p-subgroups are enumerated.
pub const MAX_COMPLEMENT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexType {
    /// `|T| = p^k`.
    Type1,
    /// `|T| = p^k - 1`.
    Type2,
}

impl VertexType {
    pub fn tag(self) -> &'static str {
        match self {
            VertexType::Type1 => "type1",
            VertexType::Type2 => "type2",
        }
    }
}

/// `Alt_T × P` inside `Alt_X`, with `P` a p-group supported off `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltVertex {
    pub x_degree: usize,
    /// Bit `i - 1` set for each point `i` of `T`.
    pub support: u32,
    pub p_factor: Vec<Perm>,
    pub p_order: u64,
    pub kind: VertexType,
}

impl AltVertex {
    pub fn points(&self) -> Vec<usize> {
        mask_points(self.support)
    }

    pub fn order(&self) -> u64 {
        alt_order(self.support.count_ones() as usize) * self.p_order
    }

    pub fn label(&self) -> String {
        let mut s = alt_label(self.support);
        if self.p_order > 1 {
            let gens: Vec<String> = self.p_factor.iter().map(Perm::to_cycle_string).collect();
            s.push_str(&format!(" x <{}>", gens.join(", ")));
        }
        s
    }

    /// The subgroup `Alt_T × P` as an explicit group.
    pub fn realize(&self) -> Result<FiniteGroup> {
        let alt = alt_on_subset(self.x_degree, &self.points())?;
        let p_elems = closure(self.x_degree, &self.p_factor, self.p_order)?;
        let mut elements = Vec::with_capacity(alt.elements().len() * p_elems.len());
        for a in alt.elements() {
            for b in &p_elems {
                elements.push(a.compose_unchecked(b));
            }
        }
        let mut gens = alt.generators().to_vec();
        gens.extend(self.p_factor.iter().copied());
        let d = GroupDescriptor::Gens {
            degree: self.x_degree,
            generators: gens.clone(),
        };
        Ok(FiniteGroup::from_elements(d, self.x_degree, gens, elements))
    }
}

fn alt_order(n: usize) -> u64 {
    (factorial(n) / 2).max(1)
}

pub fn mask_points(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

/// `"Alt{1,2,3}"`.
pub fn alt_label(mask: u32) -> String {
    let pts: Vec<String> = mask_points(mask).iter().map(usize::to_string).collect();
    format!("Alt{{{}}}", pts.join(","))
}

fn points_mask(points: &[usize], x_degree: usize, expected: usize) -> Result<u32> {
    let mut mask = 0u32;
    for &pt in points {
        if pt == 0 || pt > x_degree {
            return Err(Error::PointOutOfRange { point: pt, degree: x_degree });
        }
        if mask >> (pt - 1) & 1 == 1 {
            return Err(Error::RepeatedPoint(pt));
        }
        mask |= 1 << (pt - 1);
    }
    if points.len() != expected {
        return Err(Error::Precondition(format!(
            "expected a subset of size {expected}, got {}",
            points.len()
        )));
    }
    Ok(mask)
}

/// All `size`-subsets of `{1..n}` as masks, in lexicographic order of point lists.
pub fn subsets(n: usize, size: usize) -> Vec<u32> {
    fn rec(start: usize, n: usize, left: usize, acc: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..=(n - left) {
            rec(i + 1, n, left - 1, acc | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    if size <= n {
        rec(0, n, size, 0, &mut out);
    }
    out
}

fn prime_power(p: u64, k: u32) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let q = p.checked_pow(k).filter(|&q| q <= 64).ok_or_else(|| {
        Error::Precondition(format!("{p}^{k} is beyond any supported degree"))
    })?;
    if q <= 4 {
        return Err(Error::Precondition(format!("p^k = {q} must exceed 4")));
    }
    Ok(q as usize)
}

fn check_x(x_degree: usize, q: usize) -> Result<()> {
    if x_degree > MAX_DEGREE {
        return Err(Error::CapExceeded {
            what: "degree",
            limit: MAX_DEGREE as u64,
            actual: x_degree as u64,
        });
    }
    if q > x_degree {
        return Err(Error::Precondition(format!("p^k = {q} exceeds |X| = {x_degree}")));
    }
    Ok(())
}

/// A p-group given by generators and its order.
#[derive(Clone, Debug)]
struct PGroup {
    generators: Vec<Perm>,
    order: u64,
}

/// Every p-subgroup of `Alt` on `c` points (degree `c`), trivial group first.
fn p_subgroups(c: usize, p: u64) -> Result<Vec<PGroup>> {
    let trivial = PGroup {
        generators: Vec::new(),
        order: 1,
    };
    if c < 2 {
        return Ok(vec![trivial]);
    }
    let all: Vec<usize> = (1..=c).collect();
    let p_elements: Vec<Perm> = all_perms_on(c, &all)
        .into_iter()
        .filter(|g| g.is_even() && !g.is_identity() && is_power_of(g.order(), p))
        .collect();
    let sylow = crate::lattice::p_part(alt_order(c), p);
    // every p-group is reached by adjoining one element to a maximal subgroup
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(vec![Perm::identity(c)?.key()]);
    let mut out = vec![trivial];
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let found: Vec<(Vec<u64>, PGroup)> = frontier
            .par_iter()
            .flat_map_iter(|&i| {
                let base = &out[i];
                let base_keys: HashSet<u64> = closure(c, &base.generators, base.order)
                    .expect("known group")
                    .iter()
                    .map(Perm::key)
                    .collect();
                p_elements
                    .iter()
                    .filter(move |g| !base_keys.contains(&g.key()))
                    .filter_map(move |g| {
                        let mut gens = base.generators.clone();
                        gens.push(*g);
                        let elems = closure(c, &gens, sylow).ok()?;
                        if !is_power_of(elems.len() as u64, p) {
                            return None;
                        }
                        let mut keys: Vec<u64> = elems.iter().map(Perm::key).collect();
                        keys.sort_unstable();
                        let order = elems.len() as u64;
                        Some((keys, PGroup { generators: gens, order }))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        frontier.clear();
        for (keys, group) in found {
            if seen.insert(keys) {
                frontier.push(out.len());
                out.push(group);
            }
        }
    }
    Ok(out)
}

/// Moves a degree-`c` permutation onto `points` (1-based) inside degree `x`.
fn relabel(g: &Perm, points: &[usize], x: usize) -> Perm {
    let mut images: Vec<usize> = (1..=x).collect();
    for (i, &pt) in points.iter().enumerate() {
        images[pt - 1] = points[g.apply(i + 1) - 1];
    }
    Perm::from_images(&images).expect("valid relabeling")
}

/// Every Type 1 and Type 2 vertex of the component of `Alt_{1..p^k}` in
/// `Γ_p(Alt_X)`, for odd `p`. Type 1 vertices come first; within a type the
/// order is by point list, then by p-subgroup discovery order.
pub fn classified_vertices(x_degree: usize, p: u64, k: u32) -> Result<Vec<AltVertex>> {
    let q = prime_power(p, k)?;
    if p == 2 {
        return Err(Error::Precondition(
            "p = 2 is only supported by the B-graph".into(),
        ));
    }
    check_x(x_degree, q)?;
    let widest = x_degree - (q - 1);
    if widest > MAX_COMPLEMENT {
        return Err(Error::CapExceeded {
            what: "complement size",
            limit: MAX_COMPLEMENT as u64,
            actual: widest as u64,
        });
    }
    let mut by_size: HashMap<usize, Vec<PGroup>> = HashMap::new();
    let mut out = Vec::new();
    for (size, kind) in [(q, VertexType::Type1), (q - 1, VertexType::Type2)] {
        let c = x_degree - size;
        if !by_size.contains_key(&c) {
            by_size.insert(c, p_subgroups(c, p)?);
        }
        let groups = &by_size[&c];
        for mask in subsets(x_degree, size) {
            let comp: Vec<usize> = (1..=x_degree).filter(|i| mask >> (i - 1) & 1 == 0).collect();
            for g in groups {
                out.push(AltVertex {
                    x_degree,
                    support: mask,
                    p_factor: g.generators.iter().map(|h| relabel(h, &comp, x_degree)).collect(),
                    p_order: g.order,
                    kind,
                });
            }
        }
    }
    Ok(out)
}

/// Recovers `T` from a realized `Alt_T × P`: the unique orbit `O` with
/// `|O| ≥ 4` on which the elements supported inside `O` form all of `Alt_O`.
pub fn recover_support(group: &FiniteGroup) -> Option<u32> {
    let n = group.degree();
    let mut orbits = Vec::new();
    let mut seen = 0u32;
    for s in 0..n {
        if seen >> s & 1 == 1 {
            continue;
        }
        let mut orbit = 1u32 << s;
        let mut stack = vec![s + 1];
        while let Some(pt) = stack.pop() {
            for g in group.generators() {
                let img = g.apply(pt);
                if orbit >> (img - 1) & 1 == 0 {
                    orbit |= 1 << (img - 1);
                    stack.push(img);
                }
            }
        }
        seen |= orbit;
        orbits.push(orbit);
    }
    let hits: Vec<u32> = orbits
        .into_iter()
        .filter(|&o| o.count_ones() >= 4)
        .filter(|&o| {
            let inside = group
                .elements()
                .iter()
                .filter(|g| g.support_mask() & !o == 0)
                .count() as u64;
            inside == alt_order(o.count_ones() as usize)
        })
        .collect();
    match hits.as_slice() {
        [t] => Some(*t),
        _ => None,
    }
}

/// Edge rule between pure alternating vertices with `|T| ∈ {q, q-1}`.
pub fn rule_adjacent(q: usize, a: u32, b: u32) -> bool {
    if a == b {
        return false;
    }
    let (sa, sb) = (a.count_ones() as usize, b.count_ones() as usize);
    match (sa == q, sb == q) {
        (true, true) => (a & b).count_ones() as usize == q - 1,
        (true, false) => b & !a == 0,
        (false, true) => a & !b == 0,
        (false, false) => false,
    }
}

/// The B-graph: pure `Alt_T` vertices with `|T| ∈ {p^k, p^k - 1}` and the
/// combinatorial edge rule.
#[derive(Clone, Debug)]
pub struct BGraph {
    x_degree: usize,
    p: u64,
    k: u32,
    q: usize,
    vertices: Vec<u32>,
    index: HashMap<u32, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl BGraph {
    pub fn new(x_degree: usize, p: u64, k: u32) -> Result<BGraph> {
        let q = prime_power(p, k)?;
        check_x(x_degree, q)?;
        let mut vertices = subsets(x_degree, q);
        vertices.extend(subsets(x_degree, q - 1));
        let index: HashMap<u32, usize> = vertices.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let full = if x_degree == 32 { u32::MAX } else { (1u32 << x_degree) - 1 };
        let mut adjacency: Vec<Vec<usize>> = vertices
            .par_iter()
            .map(|&t| {
                let mut nbrs = Vec::new();
                if t.count_ones() as usize == q {
                    for out_pt in mask_points(t) {
                        let smaller = t & !(1 << (out_pt - 1));
                        nbrs.push(index[&smaller]);
                        for in_pt in mask_points(full & !t) {
                            nbrs.push(index[&(smaller | 1 << (in_pt - 1))]);
                        }
                    }
                } else {
                    for in_pt in mask_points(full & !t) {
                        nbrs.push(index[&(t | 1 << (in_pt - 1))]);
                    }
                }
                nbrs.sort_unstable();
                nbrs
            })
            .collect();
        adjacency.shrink_to_fit();
        Ok(BGraph {
            x_degree,
            p,
            k,
            q,
            vertices,
            index,
            adjacency,
        })
    }

    pub fn x_degree(&self) -> usize {
        self.x_degree
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    /// `p^k`.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn kind(&self, v: usize) -> VertexType {
        if self.vertices[v].count_ones() as usize == self.q {
            VertexType::Type1
        } else {
            VertexType::Type2
        }
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn position(&self, mask: u32) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Position of `Alt_points` for a Type 1 point set.
    pub fn type1_position(&self, points: &[usize]) -> Result<usize> {
        let mask = points_mask(points, self.x_degree, self.q)?;
        Ok(self.index[&mask])
    }

    fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertices.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        let d = self.bfs(u)[v];
        (d != u32::MAX).then_some(d as usize)
    }

    /// A shortest path, lexicographically least in vertex positions.
    pub fn geodesic(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let to_target = self.bfs(v);
        if to_target[u] == u32::MAX {
            return None;
        }
        let mut path = vec![u];
        let mut cur = u;
        while to_target[cur] > 0 {
            cur = *self.adjacency[cur]
                .iter()
                .find(|&&w| to_target[w] + 1 == to_target[cur])
                .expect("bfs layers are consistent");
            path.push(cur);
        }
        Some(path)
    }

    /// Largest finite distance, by BFS from every vertex.
    pub fn diameter(&self) -> usize {
        (0..self.vertices.len())
            .into_par_iter()
            .map(|s| {
                self.bfs(s)
                    .into_iter()
                    .filter(|&d| d != u32::MAX)
                    .max()
                    .unwrap_or(0) as usize
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.vertices.is_empty() || self.bfs(0).iter().all(|&d| d != u32::MAX)
    }

    /// The B-graph as a vertex-classed subgraph of `Γ_p(Alt_X)`.
    pub fn to_comm_graph(&self) -> Result<CommGraph> {
        let x = self.x_degree;
        let g_order = alt_order(x);
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &mask)| {
                let pts = mask_points(mask);
                let gens = if pts.len() < 3 {
                    vec!["()".to_string()]
                } else {
                    (2..pts.len())
                        .map(|j| format!("({} {} {})", pts[0], pts[1], pts[j]))
                        .collect()
                };
                let order = alt_order(pts.len());
                Vertex {
                    id: alt_label(mask),
                    order,
                    index: g_order / order,
                    generators: gens,
                    class: Some(self.kind(i).tag().to_string()),
                    normal: pts.len() == x,
                }
            })
            .collect();
        let mut edges = Vec::new();
        for (i, row) in self.adjacency.iter().enumerate() {
            for &j in row {
                if i < j {
                    edges.push([i, j]);
                }
            }
        }
        CommGraph::from_parts(GroupDescriptor::Alt(x).to_string(), self.p, vertices, &edges)
    }
}

/// Distance between `Alt_{O1}` and `Alt_{O2}` in the B-graph, `|O1| = |O2| = p^k`.
pub fn b_distance(bg: &BGraph, o1: &[usize], o2: &[usize]) -> Result<usize> {
    let (u, v) = (bg.type1_position(o1)?, bg.type1_position(o2)?);
    Ok(bg.distance(u, v).expect("B-graph is connected"))
}

/// Shortest path between two Type 1 point sets, as masks.
pub fn b_geodesic(bg: &BGraph, o1: &[usize], o2: &[usize]) -> Result<Vec<u32>> {
    let (u, v) = (bg.type1_position(o1)?, bg.type1_position(o2)?);
    let path = bg.geodesic(u, v).expect("B-graph is connected");
    Ok(path.into_iter().map(|i| bg.vertices()[i]).collect())
}

/// `p^k - max(0, 2p^k - |X|)`.
pub fn longpaths_bound(p: u64, k: u32, x_size: usize) -> i64 {
    let q = p.pow(k) as i64;
    q - (2 * q - x_size as i64).max(0)
}

/// Consecutive sets differ by moving, adding or removing one point.
pub fn is_single_step(a: u32, b: u32) -> bool {
    let diff = (a ^ b).count_ones();
    diff == 1 || (diff == 2 && a.count_ones() == b.count_ones())
}

/// Checks each consecutive pair of a path of pure vertices for adjacency in
/// `Γ_p(Alt_X)` by intersecting realized element sets.
pub fn verify_b_path(x_degree: usize, p: u64, path: &[u32]) -> Result<bool> {
    let groups = path
        .iter()
        .map(|&m| alt_on_subset(x_degree, &mask_points(m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(groups.windows(2).all(|w| realized_adjacent(&w[0], &w[1], p)))
}

/// Adjacency of two explicit groups of the same degree.
pub fn realized_adjacent(a: &FiniteGroup, b: &FiniteGroup, p: u64) -> bool {
    !a.same_elements(b) && adjacent_by_orders(a.order(), b.order(), a.intersection_order(b), p)
}

/// `⟨Alt_{T1}, Alt_{T2}⟩ = Alt_{T1 ∪ T2}` by element-set equality.
pub fn verify_altoverlap(ambient_degree: usize, t1: &[usize], t2: &[usize]) -> Result<bool> {
    let m1 = points_mask(t1, ambient_degree, t1.len())?;
    let m2 = points_mask(t2, ambient_degree, t2.len())?;
    if t1.len() < 4 || t2.len() < 4 || (m1 & m2).count_ones() < 2 {
        return Err(Error::Precondition(
            "altoverlap needs |T1|, |T2| >= 4 and |T1 ∩ T2| >= 2".into(),
        ));
    }
    let a = alt_on_subset(ambient_degree, t1)?;
    let b = alt_on_subset(ambient_degree, t2)?;
    let union = mask_points(m1 | m2);
    let target = alt_on_subset(ambient_degree, &union)?;
    let mut gens = a.generators().to_vec();
    gens.extend_from_slice(b.generators());
    let generated = closure(ambient_degree, &gens, target.order())?;
    Ok(generated.len() as u64 == target.order() && generated.iter().all(|g| target.contains(g)))
}

/// Matches `s_size` against `p^k` or `p^k - 1` for some `p^k > 4`.
fn s_shape(s_size: usize, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let mut q = p as usize;
    while q <= s_size + 1 {
        if q > 4 && (s_size == q || s_size + 1 == q) {
            return Ok(q);
        }
        q *= p as usize;
    }
    Err(Error::Precondition(format!(
        "|S| = {s_size} is neither p^k nor p^k - 1 with p^k > 4 for p = {p}"
    )))
}

/// Subgroups of `Alt_{s_size}` whose index is a power of `p`.
pub fn p_power_index_subgroups(s_size: usize, p: u64, limits: &Limits) -> Result<Vec<Subgroup>> {
    s_shape(s_size, p)?;
    let lattice = Lattice::enumerate(Arc::new(alternating(s_size, limits)?), limits)?;
    let g_order = lattice.group().order();
    Ok(lattice
        .subgroups()
        .iter()
        .filter(|s| is_power_of(g_order / s.order(), p))
        .cloned()
        .collect())
}

/// Every subgroup of `Alt_S` of p-power index is `Alt_S` or, when `|S| = p^k`,
/// a point stabilizer `Alt_{S \ {v}}`.
pub fn guralnick_check(s_size: usize, p: u64) -> Result<bool> {
    let q = s_shape(s_size, p)?;
    let subs = p_power_index_subgroups(s_size, p, &Limits::default())?;
    let all: Vec<usize> = (1..=s_size).collect();
    let mut allowed = vec![alt_on_subset(s_size, &all)?];
    if s_size == q {
        for v in 1..=s_size {
            let rest: Vec<usize> = all.iter().copied().filter(|&i| i != v).collect();
            allowed.push(alt_on_subset(s_size, &rest)?);
        }
    }
    Ok(subs
        .iter()
        .all(|s| allowed.iter().any(|a| a.same_elements(&s.to_group()))))
}

/// Every p-power-index subgroup `E` of `Alt_S × P` (with `S = {1..s_size}` and
/// `P` placed on the following points) factors as `Alt_T × P'` with `T ⊆ S`,
/// `|T| ∈ {p^k, p^k - 1}` and `P' ≤ P`.
pub fn verify_decomp(
    s_size: usize,
    complement: &GroupDescriptor,
    p: u64,
    ambient_degree: usize,
    limits: &Limits,
) -> Result<bool> {
    let q = s_shape(s_size, p)?;
    let p_group = realize(complement, limits)?;
    if !is_power_of(p_group.order(), p) {
        return Err(Error::Precondition(format!("{complement} is not a {p}-group")));
    }
    if s_size + p_group.degree() > ambient_degree {
        return Err(Error::Precondition(format!(
            "degree {ambient_degree} cannot hold Alt_{s_size} and {complement}"
        )));
    }
    let s_points: Vec<usize> = (1..=s_size).collect();
    let alt_s = alt_on_subset(ambient_degree, &s_points)?;
    let p_elems: Vec<Perm> = p_group
        .elements()
        .iter()
        .map(|g| g.shifted(s_size, ambient_degree))
        .collect::<Result<_>>()?;
    let mut elements = Vec::new();
    for a in alt_s.elements() {
        for b in &p_elems {
            elements.push(a.compose_unchecked(b));
        }
    }
    let mut gens = alt_s.generators().to_vec();
    for g in p_group.generators() {
        gens.push(g.shifted(s_size, ambient_degree)?);
    }
    let d = GroupDescriptor::Gens {
        degree: ambient_degree,
        generators: gens.clone(),
    };
    let product = Arc::new(FiniteGroup::from_elements(d, ambient_degree, gens, elements));
    let lattice = Lattice::enumerate(product.clone(), limits)?;
    let s_mask: u32 = (1u32 << s_size) - 1;
    let ok = lattice
        .subgroups()
        .par_iter()
        .filter(|e| is_power_of(product.order() / e.order(), p))
        .all(|e| {
            let alt_part: Vec<&Perm> = e.elements().filter(|g| g.support_mask() & !s_mask == 0).collect();
            let p_part = e.elements().filter(|g| g.support_mask() & s_mask == 0).count() as u64;
            let Some(t) = alt_part_support(&alt_part) else {
                return false;
            };
            let t_size = t.count_ones() as usize;
            (t_size == q || t_size + 1 == q)
                && alt_part.len() as u64 == alt_order(t_size)
                && e.order() == alt_part.len() as u64 * p_part
        });
    Ok(ok)
}

/// Support of a set of permutations when it is exactly `Alt` of that support.
fn alt_part_support(elems: &[&Perm]) -> Option<u32> {
    let t = elems.iter().fold(0u32, |m, g| m | g.support_mask());
    let ok = elems.iter().all(|g| g.is_even()) && elems.len() as u64 == alt_order(t.count_ones() as usize);
    ok.then_some(t)
}

/// Comparison of a brute-forced component with the classified vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub component_size: usize,
    pub classified_size: usize,
    pub type1: usize,
    pub type2: usize,
    pub edges: usize,
    /// Distinct valences of Type 1 vertices, inside `Γ_p(Alt_X)`.
    pub type1_valences: Vec<usize>,
    pub type2_valences: Vec<usize>,
    pub matches: bool,
}

/// Compares the component of `Alt_{1..p^k}` in an already built `Γ_p(Alt_X)`
/// with [`classified_vertices`].
pub fn conncomp_closure_in(lattice: &Lattice, graph: &CommGraph, k: u32) -> Result<ClosureReport> {
    let p = graph.prime();
    let x = lattice.group().degree();
    let q = prime_power(p, k)?;
    let group = lattice.group();
    let locate = |g: &FiniteGroup| -> Result<usize> {
        let s = Subgroup::from_group(group, g)?;
        lattice
            .position(&s)
            .ok_or_else(|| Error::Invariant("realized subgroup missing from the lattice".into()))
    };
    let base: Vec<usize> = (1..=q).collect();
    let start = locate(&alt_on_subset(x, &base)?)?;
    let dist = graph.bfs(start);
    let component: Vec<usize> = (0..graph.vertex_count()).filter(|&v| dist[v].is_some()).collect();
    let classified = classified_vertices(x, p, k)?;
    let located: Vec<(usize, VertexType)> = classified
        .par_iter()
        .map(|v| Ok((locate(&v.realize()?)?, v.kind)))
        .collect::<Result<_>>()?;
    let mut classified_set: Vec<usize> = located.iter().map(|&(i, _)| i).collect();
    classified_set.sort_unstable();
    let distinct = classified_set.windows(2).all(|w| w[0] != w[1]);
    let mut valences = [Vec::new(), Vec::new()];
    for &(i, kind) in &located {
        valences[kind as usize].push(graph.neighbors(i).len());
    }
    for v in &mut valences {
        v.sort_unstable();
        v.dedup();
    }
    let [type1_valences, type2_valences] = valences;
    let edges = component.iter().map(|&v| graph.neighbors(v).len()).sum::<usize>() / 2;
    Ok(ClosureReport {
        component_size: component.len(),
        classified_size: classified.len(),
        type1: located.iter().filter(|l| l.1 == VertexType::Type1).count(),
        type2: located.iter().filter(|l| l.1 == VertexType::Type2).count(),
        edges,
        type1_valences,
        type2_valences,
        matches: distinct && classified_set == component,
    })
}

/// Brute-forces `Γ_p(Alt_X)` and compares the component of `Alt_{1..p^k}` with
/// the classified vertex set.
pub fn verify_conncomp_closure(x_degree: usize, p: u64, k: u32, limits: &Limits) -> Result<ClosureReport> {
    let lattice = Lattice::enumerate(Arc::new(alternating(x_degree, limits)?), limits)?;
    let graph = CommGraph::build(&lattice, p)?;
    conncomp_closure_in(&lattice, &graph, k)
}
