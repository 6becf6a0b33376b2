//! `Γ_p(G)`: construction, components, geodesics, checks, and DOT/JSON I/O.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::catalog::{parse_descriptor, realize, ALT_REALIZATION_CAP};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Limits};
use crate::lattice::{is_normal, is_power_of, is_prime, join, non_p_part, Lattice, Subgroup};
use crate::perm::Perm;

pub const GRAPH_SCHEMA: u32 = 1;

/// Adjacency from the three orders involved: `[A:A∩B]·[B:A∩B]` is a power of `p`.
pub fn adjacent_by_orders(order_a: u64, order_b: u64, order_meet: u64, p: u64) -> bool {
    is_power_of((order_a / order_meet) * (order_b / order_meet), p)
}

/// Edge test for two subgroups of the same group. Equal subgroups are not adjacent.
pub fn adjacent(a: &Subgroup, b: &Subgroup, p: u64) -> Result<bool> {
    if !Arc::ptr_eq(a.ambient(), b.ambient()) {
        return Err(Error::AmbientMismatch);
    }
    if a == b {
        return Ok(false);
    }
    let meet = a.members().and_count(b.members()) as u64;
    Ok(adjacent_by_orders(a.order(), b.order(), meet, p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub order: u64,
    /// `[G:V]`.
    pub index: u64,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default)]
    pub normal: bool,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    schema: u32,
    group: String,
    prime: u64,
    vertices: Vec<Vertex>,
    edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommGraph {
    group: String,
    prime: u64,
    vertices: Vec<Vertex>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonAdjacentWitness {
    pub a: String,
    pub b: String,
    /// A geodesic from `a` to `b`, as vertex ids.
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub component: usize,
    pub vertices: Vec<String>,
    pub diameter: usize,
    pub is_complete: bool,
    /// Common non-`p` part of `[G:V]`.
    pub non_p_part: u64,
    pub contains_normal: bool,
    pub witness_nonadjacent_pair: Option<NonAdjacentWitness>,
}

impl CommGraph {
    /// All-pairs adjacency over a full lattice. Vertex `i` is `lattice.subgroups()[i]`.
    pub fn build(lattice: &Lattice, p: u64) -> Result<CommGraph> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        let subs = lattice.subgroups();
        let whole = lattice.whole();
        let g_order = lattice.group().order();
        let vertices = subs
            .par_iter()
            .map(|s| {
                Ok(Vertex {
                    id: s.id().to_string(),
                    order: s.order(),
                    index: g_order / s.order(),
                    generators: s.generators().iter().map(Perm::to_cycle_string).collect(),
                    class: None,
                    normal: is_normal(whole, s)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let upper: Vec<Vec<usize>> = (0..subs.len())
            .into_par_iter()
            .map(|i| {
                let a = &subs[i];
                ((i + 1)..subs.len())
                    .filter(|&j| {
                        let b = &subs[j];
                        let meet = a.members().and_count(b.members()) as u64;
                        adjacent_by_orders(a.order(), b.order(), meet, p)
                    })
                    .collect()
            })
            .collect();
        let mut adjacency = vec![Vec::new(); subs.len()];
        for (i, row) in upper.into_iter().enumerate() {
            for j in row {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Ok(CommGraph {
            group: lattice.group().descriptor().to_string(),
            prime: p,
            vertices,
            adjacency,
        })
    }

    /// Assembles a graph from vertex metadata and an undirected edge list.
    pub fn from_parts(group: String, prime: u64, vertices: Vec<Vertex>, edges: &[[usize; 2]]) -> Result<CommGraph> {
        let n = vertices.len();
        let mut adjacency = vec![Vec::new(); n];
        for &[i, j] in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::GraphFormat(format!("bad edge [{i}, {j}]")));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for row in &mut adjacency {
            row.sort_unstable();
            let before = row.len();
            row.dedup();
            if row.len() != before {
                return Err(Error::GraphFormat("duplicate edge".into()));
            }
        }
        Ok(CommGraph {
            group,
            prime,
            vertices,
            adjacency,
        })
    }

    pub fn group(&self) -> &str {
        &self.group
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `[i, j]` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::new();
        for (i, row) in self.adjacency.iter().enumerate() {
            for &j in row {
                if i < j {
                    out.push([i, j]);
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn position_of(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn set_class(&mut self, v: usize, class: Option<String>) {
        self.vertices[v].class = class;
    }

    /// Breadth-first distances from `source`; `None` marks unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertices.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.bfs(u)[v])
    }

    /// A shortest path, lexicographically least in vertex positions.
    pub fn geodesic(&self, u: usize, v: usize) -> Result<Option<Vec<usize>>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let to_target = self.bfs(v);
        let Some(mut remaining) = to_target[u] else {
            return Ok(None);
        };
        let mut path = vec![u];
        let mut cur = u;
        while remaining > 0 {
            // neighbors are sorted, so the first closer one is the least
            cur = *self.adjacency[cur]
                .iter()
                .find(|&&w| to_target[w] == Some(remaining - 1))
                .expect("bfs layers are consistent");
            path.push(cur);
            remaining -= 1;
        }
        Ok(Some(path))
    }

    /// Component partition in vertex order; each list is ascending.
    pub fn component_sets(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.vertices.len()];
        let mut out = Vec::new();
        for s in 0..self.vertices.len() {
            if label[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![s];
            label[s] = c;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if label[w] == usize::MAX {
                        label[w] = c;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Per-component analytics. Fails if the non-`p` part of the index is not
    /// constant on a component.
    pub fn components(&self) -> Result<Vec<ComponentReport>> {
        let p = self.prime;
        self.component_sets()
            .into_iter()
            .enumerate()
            .map(|(c, members)| {
                let non_p = non_p_part(self.vertices[members[0]].index, p);
                if let Some(&bad) = members
                    .iter()
                    .find(|&&v| non_p_part(self.vertices[v].index, p) != non_p)
                {
                    return Err(Error::Invariant(format!(
                        "non-{p} part of the index differs on component {c}: {} vs {}",
                        self.vertices[members[0]].id, self.vertices[bad].id
                    )));
                }
                let eccentricities: Vec<usize> = members
                    .par_iter()
                    .map(|&s| {
                        let d = self.bfs(s);
                        members.iter().map(|&v| d[v].expect("same component")).max().unwrap_or(0)
                    })
                    .collect();
                let diameter = eccentricities.into_iter().max().unwrap_or(0);
                let witness = if diameter > 1 {
                    self.first_nonadjacent_pair(&members)?
                } else {
                    None
                };
                Ok(ComponentReport {
                    component: c,
                    vertices: members.iter().map(|&v| self.vertices[v].id.clone()).collect(),
                    diameter,
                    is_complete: diameter <= 1,
                    non_p_part: non_p,
                    contains_normal: members.iter().any(|&v| self.vertices[v].normal),
                    witness_nonadjacent_pair: witness,
                })
            })
            .collect()
    }

    fn first_nonadjacent_pair(&self, members: &[usize]) -> Result<Option<NonAdjacentWitness>> {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if !self.has_edge(a, b) {
                    let path = self.geodesic(a, b)?.expect("same component");
                    return Ok(Some(NonAdjacentWitness {
                        a: self.vertices[a].id.clone(),
                        b: self.vertices[b].id.clone(),
                        path: path.iter().map(|&v| self.vertices[v].id.clone()).collect(),
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Every component holding a normal subgroup has diameter at most 3.
    pub fn normal_components_have_small_diameter(&self) -> Result<bool> {
        Ok(self
            .components()?
            .iter()
            .filter(|c| c.contains_normal)
            .all(|c| c.diameter <= 3))
    }

    pub fn export_json(&self) -> Result<String> {
        let file = GraphFile {
            schema: GRAPH_SCHEMA,
            group: self.group.clone(),
            prime: self.prime,
            vertices: self.vertices.clone(),
            edges: self.edges(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn import_json(text: &str) -> Result<CommGraph> {
        let file: GraphFile = serde_json::from_str(text)?;
        if file.schema != GRAPH_SCHEMA {
            return Err(Error::GraphFormat(format!("unsupported schema {}", file.schema)));
        }
        let mut sorted = file.edges.clone();
        sorted.sort_unstable();
        if sorted != file.edges || file.edges.iter().any(|[i, j]| i >= j) {
            return Err(Error::GraphFormat("edges must be sorted pairs [i, j] with i < j".into()));
        }
        CommGraph::from_parts(file.group, file.prime, file.vertices, &file.edges)
    }

    /// Graphviz text. With `coloring`, class tags become fill colors; labels
    /// carry the vertex name and its valence.
    pub fn export_dot(&self, coloring: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"Gamma_{}({})\" {{", self.prime, self.group);
        if coloring {
            out.push_str("  node [style=filled, fillcolor=white];\n");
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let mut attrs = format!("label=\"{}\\n{}\"", v.id, self.adjacency[i].len());
            if coloring {
                if let Some(color) = v.class.as_deref().and_then(class_color) {
                    let _ = write!(attrs, ", fillcolor=\"{color}\"");
                }
            }
            let _ = writeln!(out, "  v{i} [{attrs}];");
        }
        for [i, j] in self.edges() {
            let _ = writeln!(out, "  v{i} -- v{j};");
        }
        out.push_str("}\n");
        out
    }

    /// Recomputes every adjacency from the descriptor and vertex generators.
    /// Returns the pairs whose stored and recomputed adjacency differ.
    pub fn recheck_edges(&self) -> Result<Vec<[usize; 2]>> {
        let descriptor = parse_descriptor(&self.group)?;
        let degree = descriptor.degree();
        let realized: Vec<FiniteGroup> = self
            .vertices
            .par_iter()
            .map(|v| {
                let gens = v
                    .generators
                    .iter()
                    .map(|s| Perm::parse_cycles(s, degree))
                    .collect::<Result<Vec<_>>>()?;
                let g = FiniteGroup::generate(descriptor.clone(), degree, gens, ALT_REALIZATION_CAP)?;
                if g.order() != v.order {
                    return Err(Error::GraphFormat(format!(
                        "vertex {} generates order {} but records {}",
                        v.id,
                        g.order(),
                        v.order
                    )));
                }
                Ok(g)
            })
            .collect::<Result<_>>()?;
        // bitsets over the ambient when it is small enough, merges otherwise
        let ambient = realize(&descriptor, &Limits::default()).ok();
        let bits: Option<Vec<BitSet>> = ambient.as_ref().map(|amb| {
            realized
                .iter()
                .map(|g| {
                    let mut b = BitSet::new(amb.order() as usize);
                    for e in g.elements() {
                        if let Some(pos) = amb.position(e) {
                            b.insert(pos);
                        }
                    }
                    b
                })
                .collect()
        });
        let p = self.prime;
        let n = self.vertices.len();
        let mismatches: Vec<Vec<[usize; 2]>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut bad = Vec::new();
                for j in (i + 1)..n {
                    let meet = match &bits {
                        Some(b) => b[i].and_count(&b[j]) as u64,
                        None => realized[i].intersection_order(&realized[j]),
                    };
                    let expected = !realized[i].same_elements(&realized[j])
                        && adjacent_by_orders(realized[i].order(), realized[j].order(), meet, p);
                    if expected != self.has_edge(i, j) {
                        bad.push([i, j]);
                    }
                }
                bad
            })
            .collect();
        Ok(mismatches.into_iter().flatten().collect())
    }
}

fn class_color(class: &str) -> Option<&'static str> {
    match class {
        "type1" => Some("#8dd3c7"),
        "type2" => Some("#fb8072"),
        _ => None,
    }
}

/// Outcome of a sampled or exhaustive property check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub instances: usize,
    pub violations: Vec<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: PropertyOutcome) {
        self.instances += other.instances;
        self.violations.extend(other.violations);
    }
}

/// Every edge joins vertices whose indices share the same non-`p` part.
pub fn samecomp_edge_check(graph: &CommGraph) -> PropertyOutcome {
    let p = graph.prime();
    let mut out = PropertyOutcome::default();
    for [i, j] in graph.edges() {
        out.instances += 1;
        let (a, b) = (&graph.vertices()[i], &graph.vertices()[j]);
        if non_p_part(a.index, p) != non_p_part(b.index, p) {
            out.violations.push(format!("{}: edge {} -- {} (p={p})", graph.group(), a.id, b.id));
        }
    }
    out
}

/// Checks [`CommGraph::normal_components_have_small_diameter`] on `Γ_p(G)`.
pub fn normal_component_diameter_check(lattice: &Lattice, p: u64) -> Result<bool> {
    CommGraph::build(lattice, p)?.normal_components_have_small_diameter()
}

/// Maps random paths of `Γ_p(G)` through `V ↦ VN` and checks that each step
/// lands on an equal or adjacent vertex of the interval `[N, G]`, which is
/// `Γ_p(G/N)` under the correspondence theorem.
pub fn quotient_contraction_sampled(
    lattice: &Lattice,
    graph: &CommGraph,
    n: &Subgroup,
    samples: usize,
    seed: u64,
) -> Result<PropertyOutcome> {
    if !is_normal(lattice.whole(), n)? {
        return Err(Error::NotNormal(n.id().to_string()));
    }
    let p = graph.prime();
    let subs = lattice.subgroups();
    let images: Vec<usize> = subs
        .iter()
        .map(|v| {
            let vn = join(v, n)?;
            Ok(lattice.position(&vn).expect("lattice is complete"))
        })
        .collect::<Result<_>>()?;
    let starts: Vec<usize> = (0..subs.len()).filter(|&v| !graph.neighbors(v).is_empty()).collect();
    let mut out = PropertyOutcome::default();
    if starts.is_empty() {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut cur = *starts.choose(&mut rng).unwrap();
        let len = rng.gen_range(1..=6);
        let mut path = vec![cur];
        for _ in 0..len {
            cur = *graph.neighbors(cur).choose(&mut rng).unwrap();
            path.push(cur);
        }
        out.instances += 1;
        let mut image_len = 0;
        for w in path.windows(2) {
            let (a, b) = (&subs[images[w[0]]], &subs[images[w[1]]]);
            if a == b {
                continue;
            }
            image_len += 1;
            if !adjacent(a, b, p)? {
                out.violations.push(format!(
                    "{}: image of edge {} -- {} is {} / {}, not adjacent (p={p}, N={})",
                    graph.group(),
                    subs[w[0]].id(),
                    subs[w[1]].id(),
                    a.id(),
                    b.id(),
                    n.id()
                ));
            }
        }
        if image_len > len {
            out.violations.push(format!("{}: image path longer than source", graph.group()));
        }
    }
    Ok(out)
}

pub fn quotient_contraction_check(lattice: &Lattice, n: &Subgroup, p: u64) -> Result<bool> {
    let graph = CommGraph::build(lattice, p)?;
    Ok(quotient_contraction_sampled(lattice, &graph, n, 200, 0x5eed)?.passed())
}

/// For `N ⊴ G`, compares all distances of `Γ_p(N)` with those between the same
/// subgroups inside `Γ_p(G)`.
pub fn embedding_isometry_check(lattice: &Lattice, n: &Subgroup, p: u64, limits: &Limits) -> Result<bool> {
    let n_group = Arc::new(n.to_group());
    let n_lattice = Lattice::enumerate(n_group.clone(), limits)?;
    let g_graph = CommGraph::build(lattice, p)?;
    let n_graph = CommGraph::build(&n_lattice, p)?;
    let into_g: Vec<usize> = n_lattice
        .subgroups()
        .iter()
        .map(|s| {
            let lifted = Subgroup::from_group(lattice.group(), &s.to_group())?;
            Ok(lattice.position(&lifted).expect("lattice is complete"))
        })
        .collect::<Result<_>>()?;
    let ok = (0..n_lattice.len()).into_par_iter().all(|a| {
        let dn = n_graph.bfs(a);
        let dg = g_graph.bfs(into_g[a]);
        (0..n_lattice.len()).all(|b| dn[b] == dg[into_g[b]])
    });
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::realize;
    use crate::lattice::{conjugate, generated_subgroup};

    fn lattice(text: &str) -> Lattice {
        let g = Arc::new(realize(&text.parse().unwrap(), &Limits::default()).unwrap());
        Lattice::enumerate(g, &Limits::default()).unwrap()
    }

    fn sub(l: &Lattice, gens: &[&str]) -> Subgroup {
        let g = l.group();
        let seed: Vec<Perm> = gens.iter().map(|s| Perm::parse_cycles(s, g.degree()).unwrap()).collect();
        generated_subgroup(g, &seed).unwrap()
    }

    fn sizes(g: &CommGraph) -> Vec<usize> {
        let mut s: Vec<usize> = g.component_sets().iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn adjacency_examples() {
        let s3 = lattice("sym:3");
        let a = sub(&s3, &["(1 2)"]);
        let b = sub(&s3, &["(1 3)"]);
        assert!(adjacent(&a, &b, 2).unwrap());
        assert!(!adjacent(&a, &a, 2).unwrap());
        let a3 = sub(&s3, &["(1 2 3)"]);
        assert!(!adjacent(s3.whole(), &a3, 3).unwrap());

        let a7 = lattice("alt:7");
        let x = sub(&a7, &["(1 2 3)", "(1 2 4)", "(1 2 5)"]);
        let y = sub(&a7, &["(2 3 4)", "(2 3 5)", "(2 3 6)"]);
        let z = sub(&a7, &["(3 4 5)", "(3 4 6)", "(3 4 7)"]);
        assert!(adjacent(&x, &y, 5).unwrap());
        assert!(!adjacent(&x, &z, 5).unwrap());
    }

    #[test]
    fn sym3_graphs() {
        let s3 = lattice("sym:3");
        let g2 = CommGraph::build(&s3, 2).unwrap();
        assert_eq!(sizes(&g2), vec![2, 4]);
        assert_eq!(g2.edge_count(), 7);
        assert!(g2.components().unwrap().iter().all(|c| c.is_complete));

        let g3 = CommGraph::build(&s3, 3).unwrap();
        assert_eq!(sizes(&g3), vec![2, 4]);
        let comps = g3.components().unwrap();
        let star = comps.iter().find(|c| c.vertices.len() == 4).unwrap();
        assert_eq!(star.diameter, 2);
        assert!(!star.is_complete);
        assert!(star.contains_normal);
        let w = star.witness_nonadjacent_pair.as_ref().unwrap();
        assert_eq!(w.path.len(), 3);
        assert_eq!(w.path[1], s3.whole().id());

        let g5 = CommGraph::build(&s3, 5).unwrap();
        assert_eq!(g5.edge_count(), 0);
        assert!(CommGraph::build(&s3, 4).is_err());
    }

    #[test]
    fn distances_and_geodesics() {
        let s3 = lattice("sym:3");
        let g3 = CommGraph::build(&s3, 3).unwrap();
        let pos = |gens: &[&str]| s3.position(&sub(&s3, gens)).unwrap();
        let (a, b) = (pos(&["(1 2)"]), pos(&["(1 3)"]));
        assert_eq!(g3.distance(a, a).unwrap(), Some(0));
        assert_eq!(g3.distance(a, b).unwrap(), Some(2));
        assert_eq!(g3.geodesic(a, b).unwrap().unwrap(), vec![a, 5, b]);
        let g2 = CommGraph::build(&s3, 2).unwrap();
        assert_eq!(g2.distance(5, a).unwrap(), None);
        assert!(g2.geodesic(5, a).unwrap().is_none());
        assert!(matches!(g2.distance(0, 99), Err(Error::UnknownVertex(_))));
        assert!(matches!(g2.position_of("nope"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn cyclic_components_complete() {
        let c12 = lattice("cyc:12");
        for p in [2, 3] {
            let g = CommGraph::build(&c12, p).unwrap();
            assert!(g.components().unwrap().iter().all(|c| c.is_complete));
        }
    }

    #[test]
    fn coprime_prime_gives_no_edges() {
        for d in ["sym:4", "dih:5", "cyc:12"] {
            let l = lattice(d);
            for p in [7, 11, 13] {
                assert_eq!(CommGraph::build(&l, p).unwrap().edge_count(), 0, "{d} p={p}");
            }
        }
    }

    #[test]
    fn normal_diameter_examples() {
        assert!(normal_component_diameter_check(&lattice("sym:3"), 3).unwrap());
        assert!(normal_component_diameter_check(&lattice("sym:4"), 2).unwrap());
        assert!(normal_component_diameter_check(&lattice("alt:5"), 5).unwrap());
    }

    #[test]
    fn contraction_examples() {
        let s4 = lattice("sym:4");
        let v4 = sub(&s4, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        assert!(quotient_contraction_check(&s4, &v4, 2).unwrap());
        assert!(quotient_contraction_check(&s4, s4.trivial(), 3).unwrap());
        let s3 = lattice("sym:3");
        let a3 = sub(&s3, &["(1 2 3)"]);
        assert!(quotient_contraction_check(&s3, &a3, 3).unwrap());
        let c2 = sub(&s3, &["(1 2)"]);
        assert!(matches!(quotient_contraction_check(&s3, &c2, 3), Err(Error::NotNormal(_))));
    }

    #[test]
    fn embedding_examples() {
        let s4 = lattice("sym:4");
        let a4 = sub(&s4, &["(1 2 3)", "(2 3 4)"]);
        assert!(embedding_isometry_check(&s4, &a4, 2, &Limits::default()).unwrap());
        assert!(embedding_isometry_check(&s4, s4.whole(), 3, &Limits::default()).unwrap());
    }

    #[test]
    fn conjugation_is_an_automorphism() {
        let s4 = lattice("sym:4");
        let g = CommGraph::build(&s4, 2).unwrap();
        for h in ["(1 2)", "(1 2 3 4)", "(1 3)(2 4)"] {
            let x = Perm::parse_cycles(h, 4).unwrap();
            let map: Vec<usize> = s4
                .subgroups()
                .iter()
                .map(|s| s4.position(&conjugate(s, &x).unwrap()).unwrap())
                .collect();
            for u in 0..g.vertex_count() {
                for v in 0..g.vertex_count() {
                    assert_eq!(g.has_edge(u, v), g.has_edge(map[u], map[v]));
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_dot() {
        let g = CommGraph::build(&lattice("sym:3"), 2).unwrap();
        let text = g.export_json().unwrap();
        assert_eq!(CommGraph::import_json(&text).unwrap(), g);
        let dot = g.export_dot(true);
        assert_eq!(dot.matches(" [label=").count(), 6);
        assert_eq!(dot.matches(" -- ").count(), 7);
        assert!(g.recheck_edges().unwrap().is_empty());
    }

    #[test]
    fn import_rejects_bad_files() {
        assert!(CommGraph::import_json("{").is_err());
        let g = CommGraph::build(&lattice("sym:3"), 2).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&g.export_json().unwrap()).unwrap();
        v["edges"][0] = serde_json::json!([3, 1]);
        assert!(CommGraph::import_json(&v.to_string()).is_err());
        v["schema"] = serde_json::json!(2);
        assert!(CommGraph::import_json(&v.to_string()).is_err());
    }

    #[test]
    fn recheck_catches_a_flipped_edge() {
        let g = CommGraph::build(&lattice("sym:3"), 3).unwrap();
        let mut edges = g.edges();
        edges.remove(0);
        let broken = CommGraph::from_parts(g.group().into(), 3, g.vertices().to_vec(), &edges).unwrap();
        assert_eq!(broken.recheck_edges().unwrap().len(), 1);
    }
}
