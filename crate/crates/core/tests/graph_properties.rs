//! Structural properties of Γ_p(G) across the fixture pool.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use commgraph::catalog::realize;
use commgraph::lattice::{conjugate, is_nilpotent, non_p_part, prime_factors};
use commgraph::verify::property_pool;
use commgraph::{CommGraph, Lattice, Limits};

fn lattices() -> &'static HashMap<&'static str, Arc<Lattice>> {
    static CELL: OnceLock<HashMap<&'static str, Arc<Lattice>>> = OnceLock::new();
    CELL.get_or_init(|| {
        property_pool()
            .into_iter()
            .map(|d| {
                let g = Arc::new(realize(&d.parse().unwrap(), &Limits::default()).unwrap());
                (d, Arc::new(Lattice::enumerate(g, &Limits::default()).unwrap()))
            })
            .collect()
    })
}

fn graphs() -> &'static HashMap<(&'static str, u64), Arc<CommGraph>> {
    static CELL: OnceLock<HashMap<(&'static str, u64), Arc<CommGraph>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = HashMap::new();
        for (d, l) in lattices() {
            for p in [2u64, 3, 5, 7] {
                out.insert((*d, p), Arc::new(CommGraph::build(l, p).unwrap()));
            }
        }
        out
    })
}

fn pick() -> impl Strategy<Value = (&'static str, u64)> {
    let pool = property_pool();
    (0..pool.len(), prop::sample::select(vec![2u64, 3, 5, 7])).prop_map(move |(i, p)| (pool[i], p))
}

/// Unique Sylow subgroup for every prime, read off the lattice.
fn sylows_unique(l: &Lattice) -> bool {
    let n = l.group().order();
    prime_factors(n).into_iter().all(|p| {
        let mut q = 1;
        while n % (q * p) == 0 {
            q *= p;
        }
        l.subgroups().iter().filter(|s| s.order() == q).count() == 1
    })
}

#[test]
fn sylow_uniqueness_matches_nilpotency() {
    for (d, l) in lattices() {
        assert_eq!(sylows_unique(l), is_nilpotent(l.whole()).unwrap(), "{d}");
    }
}

#[test]
fn coprime_primes_give_edgeless_graphs() {
    for (d, l) in lattices() {
        let order = l.group().order();
        for p in [7u64, 11, 13] {
            if order % p != 0 {
                assert_eq!(CommGraph::build(l, p).unwrap().edge_count(), 0, "{d} p={p}");
            }
        }
    }
}

#[test]
fn edges_recheck_on_every_pool_graph() {
    for ((d, p), g) in graphs() {
        let l = &lattices()[d];
        let n = g.vertex_count();
        for i in 0..n {
            assert!(!g.has_edge(i, i));
            for &j in g.neighbors(i) {
                assert!(g.has_edge(j, i));
                let (a, b) = (&l.subgroups()[i], &l.subgroups()[j]);
                let meet = a.members().and_count(b.members()) as u64;
                let prod = (a.order() / meet) * (b.order() / meet);
                assert!(commgraph::lattice::is_power_of(prod, *p), "{d} p={p}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn conjugation_preserves_adjacency((d, p) in pick(), gi in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let l = &lattices()[d];
        let g = &graphs()[&(d, p)];
        let x = *gi.get(l.group().elements());
        let image: Vec<usize> = l
            .subgroups()
            .iter()
            .map(|s| l.position(&conjugate(s, &x).unwrap()).unwrap())
            .collect();
        let n = g.vertex_count();
        let mut state = seed;
        for _ in 0..200 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = (state >> 33) as usize % n;
            let v = (state >> 13) as usize % n;
            prop_assert_eq!(g.has_edge(u, v), g.has_edge(image[u], image[v]));
        }
    }

    #[test]
    fn component_reports_are_consistent((d, p) in pick()) {
        let g = &graphs()[&(d, p)];
        let order = lattices()[d].group().order();
        for c in g.components().unwrap() {
            prop_assert_eq!(c.is_complete, c.diameter <= 1);
            let members: Vec<usize> = c.vertices.iter().map(|id| g.position_of(id).unwrap()).collect();
            for &v in &members {
                prop_assert_eq!(non_p_part(g.vertices()[v].index, p), c.non_p_part);
                prop_assert_eq!(g.vertices()[v].index, order / g.vertices()[v].order);
            }
            prop_assert_eq!(c.witness_nonadjacent_pair.is_some(), !c.is_complete);
        }
    }

    #[test]
    fn geodesics_are_shortest_paths((d, p) in pick(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let g = &graphs()[&(d, p)];
        let (u, v) = (a.index(g.vertex_count()), b.index(g.vertex_count()));
        let dist = g.distance(u, v).unwrap();
        match g.geodesic(u, v).unwrap() {
            Some(path) => {
                prop_assert_eq!(Some(path.len() - 1), dist);
                prop_assert_eq!(path[0], u);
                prop_assert_eq!(*path.last().unwrap(), v);
                for w in path.windows(2) {
                    prop_assert!(g.has_edge(w[0], w[1]));
                }
            }
            None => prop_assert!(dist.is_none()),
        }
        prop_assert_eq!(g.distance(u, v).unwrap(), g.distance(v, u).unwrap());
    }

    #[test]
    fn json_round_trip((d, p) in pick()) {
        let g = &graphs()[&(d, p)];
        let back = CommGraph::import_json(&g.export_json().unwrap()).unwrap();
        prop_assert_eq!(&back, g.as_ref());
    }
}
