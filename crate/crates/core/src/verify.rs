//! The verification suite: catalog fixtures, individual checks and the report.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::alt::{
    alt_label, b_distance, b_geodesic, classified_vertices, conncomp_closure_in, guralnick_check,
    is_single_step, longpaths_bound, mask_points, p_power_index_subgroups, realized_adjacent,
    recover_support, rule_adjacent, subsets, verify_altoverlap, verify_b_path, verify_decomp, BGraph,
};
use crate::cache::LatticeCache;
use crate::catalog::{alt_on_subset, factorial, realize, GroupDescriptor};
use crate::error::{Error, Result};
use crate::graph::{
    embedding_isometry_check, quotient_contraction_sampled, samecomp_edge_check, CommGraph,
    PropertyOutcome,
};
use crate::group::Limits;
use crate::lattice::{
    intersect, is_nilpotent, is_power_of, is_solvable, join, prime_factors, Lattice, Subgroup,
};

pub const SUITE_VERSION: &str = "1";
pub const REPORT_SCHEMA: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_160_229;

/// A fixture group with its expected structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub descriptor: &'static str,
    pub expected_nilpotent: bool,
    pub expected_solvable: bool,
}

const fn entry(descriptor: &'static str, expected_nilpotent: bool, expected_solvable: bool) -> CatalogEntry {
    CatalogEntry {
        descriptor,
        expected_nilpotent,
        expected_solvable,
    }
}

pub const CATALOG: [CatalogEntry; 11] = [
    entry("cyc:12", true, true),
    entry("dih:4", true, true),
    entry("prod(dih:4,cyc:9)", true, true),
    entry("cyc:8", true, true),
    entry("prod(cyc:3,cyc:9)", true, true),
    entry("sym:3", false, true),
    entry("dih:5", false, true),
    entry("alt:4", false, true),
    entry("sym:4", false, true),
    entry("alt:5", false, false),
    entry("prod(sym:3,cyc:5)", false, true),
];

/// Extra groups for the sampled property checks, on top of [`CATALOG`].
pub const EXTENDED_POOL: [&str; 4] = ["dih:8", "sym:5", "prod(dih:4,dih:4)", "prod(cyc:4,cyc:4)"];

pub fn property_pool() -> Vec<&'static str> {
    CATALOG
        .iter()
        .map(|e| e.descriptor)
        .chain(EXTENDED_POOL)
        .collect()
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Skip the `Alt_7` lattice; run the `Alt_6` closure instead.
    pub fast: bool,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub limits: Limits,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            fast: false,
            seed: DEFAULT_SEED,
            cache_dir: None,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The statement the check exercises.
    pub anchor: String,
    pub params: Value,
    pub passed: bool,
    pub summary: Value,
    /// Present on failure: group, subgroups, prime and a command to reproduce.
    pub witness: Option<Value>,
    pub duration_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite_version: String,
    pub tier: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The report with every duration zeroed, for run-to-run comparison.
    pub fn without_durations(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.duration_ms = 0;
        }
        r
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// What a check body returns.
pub struct Outcome {
    pub passed: bool,
    pub params: Value,
    pub summary: Value,
    pub witness: Option<Value>,
}

impl Outcome {
    fn from_property(params: Value, out: PropertyOutcome, extra: Value) -> Outcome {
        let passed = out.passed();
        let mut summary = json!({ "instances": out.instances, "violations": out.violations.len() });
        if let (Value::Object(s), Value::Object(e)) = (&mut summary, extra) {
            s.extend(e);
        }
        Outcome {
            passed,
            params,
            summary,
            witness: (!passed).then(|| json!({ "violations": out.violations.iter().take(5).collect::<Vec<_>>() })),
        }
    }
}

fn record(name: &str, anchor: &str, body: impl FnOnce() -> Result<Outcome>) -> CheckRecord {
    let start = Instant::now();
    let result = body();
    let duration_ms = start.elapsed().as_millis() as u64;
    log::info!("check {name} finished in {duration_ms} ms");
    match result {
        Ok(o) => CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            params: o.params,
            passed: o.passed,
            summary: o.summary,
            witness: o.witness,
            duration_ms,
        },
        Err(e) => CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            params: Value::Null,
            passed: false,
            summary: Value::Null,
            witness: Some(json!({ "error": e.to_string() })),
            duration_ms,
        },
    }
}

/// Lattices and graphs shared between checks.
pub struct Workspace {
    limits: Limits,
    cache: Option<LatticeCache>,
    lattices: Mutex<BTreeMap<String, Arc<Lattice>>>,
    graphs: Mutex<BTreeMap<(String, u64), Arc<CommGraph>>>,
}

impl Workspace {
    pub fn new(limits: Limits, cache_dir: Option<PathBuf>) -> Self {
        Self {
            limits,
            cache: cache_dir.map(LatticeCache::new),
            lattices: Mutex::new(BTreeMap::new()),
            graphs: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn lattice(&self, descriptor: &str) -> Result<Arc<Lattice>> {
        let d: GroupDescriptor = descriptor.parse()?;
        let key = d.to_string();
        if let Some(l) = self.lattices.lock().unwrap().get(&key) {
            return Ok(l.clone());
        }
        let group = Arc::new(realize(&d, &self.limits)?);
        let lattice = match &self.cache {
            Some(c) => c.lattice(group, &self.limits)?,
            None => Lattice::enumerate(group, &self.limits)?,
        };
        let lattice = Arc::new(lattice);
        self.lattices.lock().unwrap().insert(key, lattice.clone());
        Ok(lattice)
    }

    pub fn graph(&self, descriptor: &str, p: u64) -> Result<Arc<CommGraph>> {
        let key = (descriptor.parse::<GroupDescriptor>()?.to_string(), p);
        if let Some(g) = self.graphs.lock().unwrap().get(&key) {
            return Ok(g.clone());
        }
        let lattice = self.lattice(descriptor)?;
        let graph = Arc::new(CommGraph::build(&lattice, p)?);
        self.graphs.lock().unwrap().insert(key, graph.clone());
        Ok(graph)
    }
}

pub fn run_suite(config: &SuiteConfig) -> VerificationReport {
    let ws = Workspace::new(config.limits, config.cache_dir.clone());
    let seed = config.seed;
    let mut checks = vec![
        record("grouptheory_index_identity", "[H:K] = [HN:KN]·[H∩N:K∩N] for K ≤ H and N normal", || {
            check_grouptheory(&ws, seed, 1000)
        }),
        record("intonenormal_p_power_index", "[G:A], [G:N] powers of p with N normal give [G:A∩N] a power of p", || {
            check_intonenormal(&ws)
        }),
        record("quotient_contraction", "V ↦ VN maps paths to paths no longer than the original", || {
            check_contraction(&ws, seed, 1000)
        }),
        record("samecomp_index_constancy", "the non-p part of [G:V] is constant on each component", || {
            check_samecomp(&ws)
        }),
        record("nilpotent_iff_complete_components", "G nilpotent iff every component of every Γ_p(G) is complete", || {
            check_theorem1(&ws)
        }),
        record("normal_component_diameter", "components containing a normal subgroup have diameter at most 3", || {
            check_normal_diameter(&ws)
        }),
        record("embedding_isometry", "for N normal, Γ_p(N) embeds isometrically in Γ_p(G)", || {
            check_embedding(&ws)
        }),
        record("nonnormal_embedding_counterexample", "Alt_S × Alt_T ≤ Alt_{S∪T} does not embed isometrically", || {
            check_nonnormal_counterexample(&ws)
        }),
        record("altoverlap", "⟨Alt_T1, Alt_T2⟩ = Alt_{T1∪T2} when |T1∩T2| ≥ 2 and |Ti| ≥ 4", || {
            check_altoverlap(seed, 50)
        }),
        record("decomp_factorization", "p-power-index subgroups of Alt_S × P factor as Alt_T × P'", || {
            check_decomp(&ws)
        }),
        record("guralnick_p_power_index", "p-power-index subgroups of Alt_S are Alt_S or point stabilizers", || {
            check_guralnick()
        }),
    ];
    let closure_x = if config.fast { 6 } else { 7 };
    checks.push(record("conncomp_closure", "the component of Alt_S in Γ_p(Alt_X) is exactly the Type 1 and Type 2 vertices", || {
        check_conncomp(&ws, closure_x, seed)
    }));
    checks.push(record("bgraph_rule_agreement", "the B-graph edge rule agrees with adjacency of realized subgroups", || {
        check_rule_agreement(seed, if config.fast { 8 } else { 14 }, 500)
    }));
    checks.push(record("longpaths_bound_sweep", "B-graph distance is at least p^k - max(0, 2p^k - |X|)", || {
        check_longpaths(seed, 20)
    }));
    checks.push(record("nonormal_component", "the component of Alt_S in Γ_5(Alt_12) avoids 1 and Alt_12 and has diameter above 3", || {
        check_nonormal_component()
    }));
    let overall = checks.iter().all(|c| c.passed);
    VerificationReport {
        schema: REPORT_SCHEMA,
        suite_version: SUITE_VERSION.into(),
        tier: if config.fast { "fast" } else { "full" }.into(),
        seed,
        checks,
        overall,
    }
}

fn subgroups_of<'a>(lattice: &'a Lattice, h: &Subgroup) -> Vec<&'a Subgroup> {
    lattice.subgroups().iter().filter(|k| k.is_subgroup_of(h)).collect()
}

pub fn check_grouptheory(ws: &Workspace, seed: u64, samples: usize) -> Result<Outcome> {
    let pool = property_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
    let mut out = PropertyOutcome::default();
    for i in 0..samples {
        let d = pool[i % pool.len()];
        let lattice = ws.lattice(d)?;
        let normals = lattice.normal_subgroups()?;
        let n = *normals.choose(&mut rng).unwrap();
        let h = lattice.subgroups().choose(&mut rng).unwrap();
        let k = *subgroups_of(&lattice, h).choose(&mut rng).unwrap();
        let lhs = h.order() / k.order();
        let (hn, kn) = (join(h, n)?, join(k, n)?);
        let (hi, ki) = (intersect(h, n)?, intersect(k, n)?);
        let rhs = (hn.order() / kn.order()) * (hi.order() / ki.order());
        out.instances += 1;
        if lhs != rhs {
            out.violations.push(format!("{d}: H={} K={} N={}: {lhs} != {rhs}", h.id(), k.id(), n.id()));
        }
    }
    Ok(Outcome::from_property(json!({ "samples": samples, "pool": pool }), out, json!({})))
}

pub fn check_intonenormal(ws: &Workspace) -> Result<Outcome> {
    let pool = property_pool();
    let mut out = PropertyOutcome::default();
    for d in &pool {
        let lattice = ws.lattice(d)?;
        let g_order = lattice.group().order();
        let normals = lattice.normal_subgroups()?;
        for p in prime_factors(g_order) {
            for n in normals.iter().filter(|n| is_power_of(g_order / n.order(), p)) {
                for a in lattice.subgroups().iter().filter(|a| is_power_of(g_order / a.order(), p)) {
                    out.instances += 1;
                    let meet = a.members().and_count(n.members()) as u64;
                    if !is_power_of(g_order / meet, p) {
                        out.violations.push(format!("{d}: A={} N={} p={p}", a.id(), n.id()));
                    }
                }
            }
        }
    }
    Ok(Outcome::from_property(json!({ "pool": pool, "mode": "exhaustive" }), out, json!({})))
}

pub fn check_contraction(ws: &Workspace, seed: u64, samples: usize) -> Result<Outcome> {
    let pool = property_pool();
    let mut cases = Vec::new();
    for d in &pool {
        let lattice = ws.lattice(d)?;
        for p in prime_factors(lattice.group().order()) {
            for n in lattice.normal_subgroups()? {
                cases.push((*d, p, lattice.position(n).unwrap()));
            }
        }
    }
    let per_case = samples.div_ceil(cases.len());
    let mut out = PropertyOutcome::default();
    for (i, &(d, p, n)) in cases.iter().enumerate() {
        let lattice = ws.lattice(d)?;
        let graph = ws.graph(d, p)?;
        let n = &lattice.subgroups()[n];
        out.merge(quotient_contraction_sampled(&lattice, &graph, n, per_case, seed.wrapping_add(i as u64))?);
    }
    let cases_len = cases.len();
    Ok(Outcome::from_property(
        json!({ "pool": pool, "paths_per_case": per_case }),
        out,
        json!({ "cases": cases_len }),
    ))
}

pub fn check_samecomp(ws: &Workspace) -> Result<Outcome> {
    let mut out = PropertyOutcome::default();
    let mut components = 0;
    for e in &CATALOG {
        let lattice = ws.lattice(e.descriptor)?;
        for p in prime_factors(lattice.group().order()) {
            let graph = ws.graph(e.descriptor, p)?;
            out.merge(samecomp_edge_check(&graph));
            match graph.components() {
                Ok(c) => components += c.len(),
                Err(err) => out.violations.push(err.to_string()),
            }
        }
    }
    Ok(Outcome::from_property(json!({ "groups": "catalog" }), out, json!({ "components": components })))
}

/// Reproduction command for a graph-level finding.
fn components_command(descriptor: &str, p: u64) -> String {
    format!("commgraph graph build --group '{descriptor}' --prime {p} --out g.json && commgraph graph components --in g.json")
}

pub fn check_theorem1(ws: &Workspace) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut failure = None;
    for e in &CATALOG {
        let lattice = ws.lattice(e.descriptor)?;
        let whole = lattice.whole();
        let nilpotent = is_nilpotent(whole)?;
        let solvable = is_solvable(whole)?;
        let mut all_complete = true;
        let mut example = None;
        for p in prime_factors(lattice.group().order()) {
            let graph = ws.graph(e.descriptor, p)?;
            for c in graph.components()? {
                if !c.is_complete {
                    all_complete = false;
                    if example.is_none() {
                        let w = c.witness_nonadjacent_pair.clone().expect("non-complete component has a witness");
                        example = Some(json!({ "prime": p, "a": w.a, "b": w.b, "path": w.path }));
                    }
                }
            }
        }
        let decomposes = if nilpotent { Some(lattice.subgroup_decomposition_check()?) } else { None };
        let ok = nilpotent == e.expected_nilpotent
            && solvable == e.expected_solvable
            && nilpotent == all_complete
            && decomposes != Some(false);
        if !ok && failure.is_none() {
            let p = example.as_ref().and_then(|x| x["prime"].as_u64()).unwrap_or(2);
            failure = Some(json!({
                "group": e.descriptor,
                "nilpotent": nilpotent,
                "solvable": solvable,
                "all_components_complete": all_complete,
                "noncomplete_example": example,
                "reproduce": components_command(e.descriptor, p),
            }));
        }
        rows.push(json!({
            "group": e.descriptor,
            "nilpotent": nilpotent,
            "solvable": solvable,
            "all_components_complete": all_complete,
            "noncomplete_example": example,
        }));
    }
    // a solvable non-nilpotent subgroup inside a simple group yields the witness above
    let a5 = ws.lattice("alt:5")?;
    let inside = a5.find_solvable_nonnilpotent()?.map(|s| s.order());
    let passed = failure.is_none() && inside.is_some();
    Ok(Outcome {
        passed,
        params: json!({ "groups": CATALOG.len() }),
        summary: json!({ "rows": rows, "alt5_solvable_nonnilpotent_order": inside }),
        witness: failure.or_else(|| (!passed).then(|| json!({ "group": "alt:5", "missing": "solvable non-nilpotent subgroup" }))),
    })
}

pub fn check_normal_diameter(ws: &Workspace) -> Result<Outcome> {
    let mut worst = 0;
    let mut checked = 0;
    let mut failure = None;
    for e in &CATALOG {
        let lattice = ws.lattice(e.descriptor)?;
        for p in prime_factors(lattice.group().order()) {
            let graph = ws.graph(e.descriptor, p)?;
            for c in graph.components()? {
                // diameters come from BFS inside the component, hence finite
                if c.contains_normal {
                    checked += 1;
                    worst = worst.max(c.diameter);
                    if c.diameter > 3 && failure.is_none() {
                        failure = Some(json!({
                            "group": e.descriptor,
                            "prime": p,
                            "component": c.vertices,
                            "diameter": c.diameter,
                            "reproduce": components_command(e.descriptor, p),
                        }));
                    }
                }
            }
        }
    }
    Ok(Outcome {
        passed: failure.is_none(),
        params: json!({ "groups": "catalog", "bound": 3 }),
        summary: json!({ "components_with_normal": checked, "max_diameter": worst }),
        witness: failure,
    })
}

pub fn check_embedding(ws: &Workspace) -> Result<Outcome> {
    let mut cases = Vec::new();
    let s4 = ws.lattice("sym:4")?;
    let a4 = s4
        .subgroups()
        .iter()
        .find(|s| s.order() == 12)
        .ok_or_else(|| Error::Invariant("Sym_4 has no subgroup of order 12".into()))?;
    let mut failure = None;
    let mut run = |d: &str, lattice: &Lattice, n: &Subgroup, p: u64| -> Result<()> {
        let ok = embedding_isometry_check(lattice, n, p, ws.limits())?;
        cases.push(json!({ "group": d, "normal": n.id(), "order": n.order(), "prime": p, "isometric": ok }));
        if !ok && failure.is_none() {
            failure = Some(json!({ "group": d, "normal": n.id(), "prime": p }));
        }
        Ok(())
    };
    run("sym:4", &s4, a4, 2)?;
    for d in ["sym:4", "dih:4", "prod(sym:3,cyc:5)"] {
        let lattice = ws.lattice(d)?;
        for n in lattice.normal_subgroups()? {
            for p in prime_factors(lattice.group().order()) {
                run(d, &lattice, n, p)?;
            }
        }
    }
    Ok(Outcome {
        passed: failure.is_none(),
        params: json!({ "primary": ["sym:4", "alt:4", 2] }),
        summary: json!({ "cases": cases }),
        witness: failure,
    })
}

/// Result of the non-normal counterexample.
#[derive(Clone, Debug, Serialize)]
pub struct SplitProductWitness {
    pub alt_s: String,
    pub alt_t: String,
    pub separated_in_product: bool,
    pub path_in_alt10: Vec<String>,
    pub path_verified: bool,
}

/// `Alt_S` and `Alt_T` (`S = {1..5}`, `T = {6..10}`) in `Γ_5(Alt_S × Alt_T)`
/// versus `Γ_5(Alt_10)`.
pub fn split_product_witness(ws: &Workspace) -> Result<SplitProductWitness> {
    let lattice = ws.lattice("prod(alt:5,alt:5)")?;
    let graph = ws.graph("prod(alt:5,alt:5)", 5)?;
    let g = lattice.group();
    let s = Subgroup::from_group(g, &alt_on_subset(10, &[1, 2, 3, 4, 5])?)?;
    let t = Subgroup::from_group(g, &alt_on_subset(10, &[6, 7, 8, 9, 10])?)?;
    let (si, ti) = (lattice.position(&s).unwrap(), lattice.position(&t).unwrap());
    let separated = graph.distance(si, ti)?.is_none();
    let bg = BGraph::new(10, 5, 1)?;
    let path = b_geodesic(&bg, &[1, 2, 3, 4, 5], &[6, 7, 8, 9, 10])?;
    let verified = verify_b_path(10, 5, &path)?;
    Ok(SplitProductWitness {
        alt_s: s.id().to_string(),
        alt_t: t.id().to_string(),
        separated_in_product: separated,
        path_in_alt10: path.iter().map(|&m| alt_label(m)).collect(),
        path_verified: verified,
    })
}

pub fn check_nonnormal_counterexample(ws: &Workspace) -> Result<Outcome> {
    let w = split_product_witness(ws)?;
    let passed = w.separated_in_product && w.path_verified && w.path_in_alt10.len() == 6;
    Ok(Outcome {
        passed,
        params: json!({ "product": "prod(alt:5,alt:5)", "prime": 5 }),
        summary: serde_json::to_value(&w)?,
        witness: (!passed).then(|| {
            json!({
                "group": "prod(alt:5,alt:5)",
                "subgroups": [w.alt_s, w.alt_t],
                "prime": 5,
                "reproduce": components_command("prod(alt:5,alt:5)", 5),
            })
        }),
    })
}

/// All pairs of 4-subsets of `{1..n}` meeting in 2 or 3 points.
pub fn altoverlap_base_cases(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let four = subsets(n, 4);
    let mut out = Vec::new();
    for (i, &a) in four.iter().enumerate() {
        for &b in &four[i + 1..] {
            if matches!((a & b).count_ones(), 2 | 3) {
                out.push((mask_points(a), mask_points(b)));
            }
        }
    }
    out
}

/// Random `(T1, T2)` with `|Ti| ≥ 4`, `|T1 ∩ T2| ≥ 2` and a union of at most 9 points.
pub fn random_overlap_instance(rng: &mut impl Rng) -> (usize, Vec<usize>, Vec<usize>) {
    loop {
        let n = rng.gen_range(6..=12);
        let mut pts: Vec<usize> = (1..=n).collect();
        pts.shuffle(rng);
        let union = rng.gen_range(5..=9.min(n));
        let u = &pts[..union];
        let a_size = rng.gen_range(4..=union);
        let b_size = rng.gen_range(4..=union);
        let t1: Vec<usize> = u[..a_size].to_vec();
        let mut t2: Vec<usize> = u[union - b_size..].to_vec();
        // the union must be covered
        if a_size + b_size < union {
            continue;
        }
        if t1.iter().filter(|x| t2.contains(x)).count() < 2 {
            continue;
        }
        t2.sort_unstable();
        let mut t1 = t1;
        t1.sort_unstable();
        return (n, t1, t2);
    }
}

pub fn check_altoverlap(seed: u64, random: usize) -> Result<Outcome> {
    let mut out = PropertyOutcome::default();
    for n in [5, 6] {
        for (t1, t2) in altoverlap_base_cases(n) {
            out.instances += 1;
            if !verify_altoverlap(n, &t1, &t2)? {
                out.violations.push(format!("Alt_{n}: T1={t1:?} T2={t2:?}"));
            }
        }
    }
    let base = out.instances;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
    let instances: Vec<_> = (0..random).map(|_| random_overlap_instance(&mut rng)).collect();
    let results: Vec<Result<bool>> = instances.par_iter().map(|(n, a, b)| verify_altoverlap(*n, a, b)).collect();
    for ((n, a, b), r) in instances.iter().zip(results) {
        out.instances += 1;
        if !r? {
            out.violations.push(format!("degree {n}: T1={a:?} T2={b:?}"));
        }
    }
    Ok(Outcome::from_property(
        json!({ "base_degrees": [5, 6], "random": random }),
        out,
        json!({ "base_cases": base }),
    ))
}

pub fn check_decomp(ws: &Workspace) -> Result<Outcome> {
    let cases: [(usize, &str, u64, usize); 3] = [(5, "cyc:5", 5, 10), (4, "cyc:5", 5, 9), (5, "cyc:1", 5, 6)];
    let mut rows = Vec::new();
    let mut failure = None;
    for (s, comp, p, deg) in cases {
        let ok = verify_decomp(s, &comp.parse()?, p, deg, ws.limits())?;
        rows.push(json!({ "s_size": s, "complement": comp, "prime": p, "holds": ok }));
        if !ok && failure.is_none() {
            failure = Some(json!({ "s_size": s, "complement": comp, "prime": p, "ambient_degree": deg }));
        }
    }
    Ok(Outcome {
        passed: failure.is_none(),
        params: json!({ "cases": cases.len() }),
        summary: json!({ "rows": rows }),
        witness: failure,
    })
}

pub fn check_guralnick() -> Result<Outcome> {
    let limits = Limits::default();
    let a5_count = p_power_index_subgroups(5, 5, &limits)?.len();
    let mut rows = Vec::new();
    let mut failure = None;
    for (s, p) in [(5, 5), (4, 5), (7, 7), (6, 7)] {
        let ok = guralnick_check(s, p)?;
        rows.push(json!({ "s_size": s, "prime": p, "holds": ok }));
        if !ok && failure.is_none() {
            failure = Some(json!({ "group": format!("alt:{s}"), "prime": p }));
        }
    }
    if a5_count != 6 && failure.is_none() {
        failure = Some(json!({ "group": "alt:5", "prime": 5, "count": a5_count, "expected": 6 }));
    }
    Ok(Outcome {
        passed: failure.is_none(),
        params: json!({ "cases": [[5, 5], [4, 5], [7, 7], [6, 7]] }),
        summary: json!({ "rows": rows, "alt5_p5_count": a5_count }),
        witness: failure,
    })
}

pub fn check_conncomp(ws: &Workspace, x: usize, seed: u64) -> Result<Outcome> {
    let d = format!("alt:{x}");
    let lattice = ws.lattice(&d)?;
    let graph = ws.graph(&d, 5)?;
    let report = conncomp_closure_in(&lattice, &graph, 1)?;

    // B-graph distances agree with distances in the full component
    let bg = BGraph::new(x, 5, 1)?;
    let locate = |mask: u32| -> Result<usize> {
        let s = Subgroup::from_group(lattice.group(), &alt_on_subset(x, &mask_points(mask))?)?;
        Ok(lattice.position(&s).unwrap())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x03);
    let mut geodesic_mismatches = Vec::new();
    let mut pairs = 0;
    for _ in 0..40 {
        let a = rng.gen_range(0..bg.vertex_count());
        let b = rng.gen_range(0..bg.vertex_count());
        pairs += 1;
        let full = graph.distance(locate(bg.vertices()[a])?, locate(bg.vertices()[b])?)?;
        if full != bg.distance(a, b) {
            geodesic_mismatches.push((alt_label(bg.vertices()[a]), alt_label(bg.vertices()[b])));
        }
    }
    // T is recoverable from each realized classified vertex
    let classified = classified_vertices(x, 5, 1)?;
    let recovered = classified
        .iter()
        .all(|v| v.realize().ok().and_then(|g| recover_support(&g)) == Some(v.support));

    let expected_shape = if x == 7 {
        report.component_size == 56
            && report.type1 == 21
            && report.type2 == 35
            && report.edges == 210
            && report.type1_valences == [15]
            && report.type2_valences == [3]
    } else {
        true
    };
    let passed = report.matches && expected_shape && geodesic_mismatches.is_empty() && recovered;
    Ok(Outcome {
        passed,
        params: json!({ "x": x, "p": 5, "k": 1 }),
        summary: json!({
            "closure": report,
            "geodesic_pairs": pairs,
            "support_recovered": recovered,
        }),
        witness: (!passed).then(|| {
            json!({
                "group": d,
                "prime": 5,
                "subgroup": alt_label((1u32 << 5) - 1),
                "geodesic_mismatches": geodesic_mismatches,
                "reproduce": components_command(&d, 5),
            })
        }),
    })
}

/// Agreement of [`rule_adjacent`] with realized adjacency: exhaustive up to
/// degree 8, then `random` biased pairs per parameter set up to `max_x`.
pub fn check_rule_agreement(seed: u64, max_x: usize, random: usize) -> Result<Outcome> {
    let mut out = PropertyOutcome::default();
    let compare = |x: usize, q: usize, p: u64, pairs: &[(u32, u32)], out: &mut PropertyOutcome| -> Result<()> {
        let verdicts: Vec<bool> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let ga = alt_on_subset(x, &mask_points(a))?;
                let gb = alt_on_subset(x, &mask_points(b))?;
                Ok(realized_adjacent(&ga, &gb, p))
            })
            .collect::<Result<_>>()?;
        for (&(a, b), v) in pairs.iter().zip(verdicts) {
            out.instances += 1;
            if v != rule_adjacent(q, a, b) {
                out.violations.push(format!("X={x} p={p}: {} vs {}", alt_label(a), alt_label(b)));
            }
        }
        Ok(())
    };
    for (p, k) in [(5u64, 1u32), (7, 1)] {
        let q = p.pow(k) as usize;
        for x in q..=8 {
            let bg = BGraph::new(x, p, k)?;
            let v = bg.vertices();
            let pairs: Vec<(u32, u32)> = (0..v.len())
                .flat_map(|i| ((i + 1)..v.len()).map(move |j| (v[i], v[j])))
                .collect();
            compare(x, q, p, &pairs, &mut out)?;
        }
    }
    let exhaustive = out.instances;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
    for (p, k) in [(5u64, 1u32), (7, 1), (3, 2)] {
        let q = p.pow(k) as usize;
        let lo = q.max(9);
        if lo > max_x {
            continue;
        }
        let per_set = if p == 3 { random / 5 } else { random };
        let mut pairs = Vec::new();
        let mut by_x: BTreeMap<usize, BGraph> = BTreeMap::new();
        for i in 0..per_set {
            let x = rng.gen_range(lo..=max_x);
            let bg = match by_x.entry(x) {
                std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::btree_map::Entry::Vacant(e) => e.insert(BGraph::new(x, p, k)?),
            };
            let a = rng.gen_range(0..bg.vertex_count());
            let b = if i % 2 == 0 {
                *bg.neighbors(a).choose(&mut rng).unwrap()
            } else {
                rng.gen_range(0..bg.vertex_count())
            };
            pairs.push((x, bg.vertices()[a], bg.vertices()[b]));
        }
        for x in lo..=max_x {
            let at_x: Vec<(u32, u32)> = pairs.iter().filter(|t| t.0 == x).map(|t| (t.1, t.2)).collect();
            compare(x, q, p, &at_x, &mut out)?;
        }
    }
    Ok(Outcome::from_property(
        json!({ "exhaustive_max_x": 8, "random_max_x": max_x, "random_pairs": random }),
        out,
        json!({ "exhaustive_pairs": exhaustive }),
    ))
}

/// Random Type 1 pair with `|O1 ∩ O2| ≤ overlap`.
fn bounded_overlap_pair(rng: &mut impl Rng, x: usize, q: usize, overlap: usize) -> (Vec<usize>, Vec<usize>) {
    let mut pts: Vec<usize> = (1..=x).collect();
    pts.shuffle(rng);
    let shared = rng.gen_range(0..=overlap.min(q));
    let shared = shared.max((2 * q).saturating_sub(x));
    let mut o1: Vec<usize> = pts[..q].to_vec();
    let mut o2: Vec<usize> = pts[..shared].iter().chain(&pts[q..(2 * q - shared)]).copied().collect();
    o1.sort_unstable();
    o2.sort_unstable();
    (o1, o2)
}

pub fn check_longpaths(seed: u64, per_setting: usize) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05);
    let mut out = PropertyOutcome::default();
    let mut attained = Vec::new();
    let mut step_violations = 0;
    for (p, k) in [(5u64, 1u32), (7, 1), (3, 2)] {
        let q = p.pow(k) as usize;
        for x in (q + 2)..=16 {
            let bg = BGraph::new(x, p, k)?;
            let bound = longpaths_bound(p, k, x);
            let overlap = (2 * q).saturating_sub(x);
            for _ in 0..per_setting {
                let (o1, o2) = bounded_overlap_pair(&mut rng, x, q, overlap);
                let d = b_distance(&bg, &o1, &o2)?;
                out.instances += 1;
                if (d as i64) < bound {
                    out.violations.push(format!("p={p} k={k} X={x}: {o1:?} to {o2:?} has distance {d} < {bound}"));
                }
                let path = b_geodesic(&bg, &o1, &o2)?;
                if !path.windows(2).all(|w| is_single_step(w[0], w[1])) {
                    step_violations += 1;
                    out.violations.push(format!("p={p} k={k} X={x}: geodesic step moves more than one point"));
                }
            }
            if x >= 2 * q {
                let o1: Vec<usize> = (1..=q).collect();
                let o2: Vec<usize> = (q + 1..=2 * q).collect();
                let d = b_distance(&bg, &o1, &o2)?;
                out.instances += 1;
                attained.push(json!({ "p": p, "k": k, "x": x, "distance": d, "bound": bound }));
                if d as i64 != bound {
                    out.violations.push(format!("p={p} k={k} X={x}: disjoint sets at distance {d}, bound {bound}"));
                }
            }
        }
    }
    Ok(Outcome::from_property(
        json!({ "settings": [[5, 1], [7, 1], [3, 2]], "x_max": 16, "pairs_per_setting": per_setting }),
        out,
        json!({ "equality_cases": attained, "step_violations": step_violations }),
    ))
}

pub fn check_nonormal_component() -> Result<Outcome> {
    let x = 12;
    let classified = classified_vertices(x, 5, 1)?;
    let alt_x_order = factorial(x) / 2;
    let hits_trivial = classified.iter().any(|v| v.order() == 1);
    let hits_whole = classified.iter().any(|v| v.order() == alt_x_order);
    let bg = BGraph::new(x, 5, 1)?;
    let diameter = bg.diameter();
    let passed = !hits_trivial && !hits_whole && diameter >= 5;
    Ok(Outcome {
        passed,
        params: json!({ "x": x, "p": 5, "k": 1 }),
        summary: json!({
            "classified_vertices": classified.len(),
            "contains_trivial": hits_trivial,
            "contains_alt_x": hits_whole,
            "b_graph_vertices": bg.vertex_count(),
            "b_graph_diameter": diameter,
        }),
        witness: (!passed).then(|| json!({ "group": "alt:12", "prime": 5, "diameter": diameter })),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_descriptors_parse() {
        for e in &CATALOG {
            let d: GroupDescriptor = e.descriptor.parse().unwrap();
            assert_eq!(d.to_string(), e.descriptor);
        }
    }

    #[test]
    fn altoverlap_case_counts() {
        // pairs of 4-subsets of a 5-set always meet in 3 points
        assert_eq!(altoverlap_base_cases(5).len(), 10);
        let six = altoverlap_base_cases(6);
        assert!(six.iter().all(|(a, b)| (2..=3).contains(&a.iter().filter(|x| b.contains(x)).count())));
    }

    #[test]
    fn random_overlap_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let (n, a, b) = random_overlap_instance(&mut rng);
            let union: std::collections::BTreeSet<_> = a.iter().chain(&b).collect();
            assert!(a.len() >= 4 && b.len() >= 4 && union.len() <= 9);
            assert!(a.iter().filter(|x| b.contains(x)).count() >= 2);
            assert!(union.iter().all(|&&p| p >= 1 && p <= n));
        }
    }

    #[test]
    fn bounded_pairs_respect_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for x in 7..=16 {
            let overlap = 10usize.saturating_sub(x);
            for _ in 0..20 {
                let (a, b) = bounded_overlap_pair(&mut rng, x, 5, overlap);
                assert_eq!((a.len(), b.len()), (5, 5));
                assert!(a.iter().filter(|p| b.contains(p)).count() <= overlap);
            }
        }
    }

    #[test]
    fn report_round_trips() {
        let r = VerificationReport {
            schema: REPORT_SCHEMA,
            suite_version: SUITE_VERSION.into(),
            tier: "fast".into(),
            seed: 7,
            checks: vec![record("x", "y", || {
                Ok(Outcome { passed: true, params: json!({}), summary: json!({"n": 1}), witness: None })
            })],
            overall: true,
        };
        let back = VerificationReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn errors_become_failed_records_with_witness() {
        let r = record("boom", "-", || Err(Error::Precondition("nope".into())));
        assert!(!r.passed);
        assert!(r.witness.unwrap()["error"].as_str().unwrap().contains("nope"));
    }
}
