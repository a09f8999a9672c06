//! A registry of exhaustive and seeded randomized checks over the whole
//! library, grouped into suites and run concurrently.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::{
    closed_form_partial_covariance, condition, equicorrelation_ci, induced_model_of_table,
    is_exchangeable_table, marginalize, Equicorrelation, JointTable, TableOracle, DEFAULT_CI_TOL,
};
use crate::error::{invalid, Error, Result};
use crate::exchange::{
    characterization_check, classify_regime, faithfulness_report, is_exchangeable_model,
    orbit_closure, relabel_model, structured_assumption_check, RegimeTag, Semantics,
};
use crate::graphs::{
    c_ij, cd_ij, complement_graph, enumerate_separators, incidence_graph, induced_model,
    is_separator, markov_equivalent, separates, unshielded_collider_trisections, EdgeKind,
    GraphFamily, MixedGraph, SeparatorMode,
};
use crate::ground::{dyad_universe, GroundSet, NodePermutation, VarSet};
use crate::imodel::{
    check_property, closure_with, dual, is_semigraphoid, semigraphoid_closure, skeleton_of_model,
    IndependenceModel, Property, Rule,
};
use crate::sample;

pub const DEFAULT_SEED: u64 = 0xec1_2019;
pub const DEFAULT_NMAX: usize = 5;
/// Largest `--nmax` accepted; exhaustive separator checks at `n = 7`
/// would span `2^19` subsets per pair.
pub const NMAX_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Vector,
    Network,
    Appendix,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Vector, Suite::Network, Suite::Appendix];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Vector => "vector",
            Suite::Network => "network",
            Suite::Appendix => "appendix",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| invalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub nmax: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            nmax: DEFAULT_NMAX,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyResult {
    pub id: String,
    pub suite: Suite,
    pub passed: bool,
    /// Summary on success, counterexample on failure.
    pub detail: String,
    pub elapsed: Duration,
    /// Command that reruns this check alone.
    pub repro: String,
}

type Outcome<T = String> = std::result::Result<T, String>;
type CheckFn = Box<dyn Fn(&mut ChaCha8Rng) -> Outcome + Send + Sync>;

pub struct Check {
    pub id: String,
    pub suite: Suite,
    run: CheckFn,
}

fn lib<T>(r: Result<T>) -> Outcome<T> {
    r.map_err(|e| e.to_string())
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// FNV-1a, to derive a per-check random stream from its id.
fn id_hash(id: &str) -> u64 {
    id.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// All checks for `cfg.nmax`, in registration order.
pub fn registry(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    if !(4..=NMAX_LIMIT).contains(&cfg.nmax) {
        return Err(invalid(format!(
            "nmax must be between 4 and {NMAX_LIMIT}, got {}",
            cfg.nmax
        )));
    }
    let nmax = cfg.nmax;
    let mut out = Vec::new();
    let mut add = |id: String, suite: Suite, run: CheckFn| out.push(Check { id, suite, run });

    // vector and model-level results
    add(
        "holds-oracle-v4".into(),
        Suite::Vector,
        Box::new(|rng| holds_oracle(4, 100, rng)),
    );
    add(
        "lemma-dual".into(),
        Suite::Vector,
        Box::new(|rng| lemma_dual(200, rng)),
    );
    add(
        "lemma1".into(),
        Suite::Vector,
        Box::new(|rng| lemma1(100, rng)),
    );
    add(
        "closure-idempotent".into(),
        Suite::Vector,
        Box::new(|rng| closure_laws(100, rng)),
    );
    add(
        "prop-und".into(),
        Suite::Vector,
        Box::new(|rng| prop_und(60, rng)),
    );
    for n in 4..=nmax.min(5) {
        add(
            format!("prop4-v{n}"),
            Suite::Vector,
            Box::new(move |rng| prop4(n, rng)),
        );
        add(
            format!("prop5-v{n}"),
            Suite::Vector,
            Box::new(move |rng| prop5(n, rng)),
        );
        add(
            format!("prop3-v{n}"),
            Suite::Vector,
            Box::new(move |rng| prop3(n, rng)),
        );
        add(
            format!("theorem-vector-v{n}"),
            Suite::Vector,
            Box::new(move |rng| theorem_vector(n, rng)),
        );
        add(
            format!("example1-v{n}"),
            Suite::Vector,
            Box::new(move |_| example1(n)),
        );
    }
    add("tables-prop5".into(), Suite::Vector, Box::new(tables_prop5));
    add(
        "tables-marginal-independence".into(),
        Suite::Vector,
        Box::new(tables_marginal),
    );
    add(
        "tables-prop3n".into(),
        Suite::Vector,
        Box::new(tables_prop3n),
    );
    add(
        "gaussian-n5".into(),
        Suite::Vector,
        Box::new(|_| gaussian(5)),
    );

    // networks
    add("fig1".into(), Suite::Network, Box::new(|_| fig1()));
    for n in 4..=nmax {
        add(
            format!("prop12.1-n{n}"),
            Suite::Network,
            Box::new(move |_| prop12_1(n)),
        );
    }
    for n in 4..=nmax {
        add(
            format!("prop12.2-n{n}"),
            Suite::Network,
            Box::new(move |_| prop12_2(n)),
        );
    }
    for n in 5..=nmax {
        add(
            format!("prop12n-n{n}"),
            Suite::Network,
            Box::new(move |_| prop12n(n)),
        );
    }
    add(
        "named-separators".into(),
        Suite::Network,
        Box::new(|_| named_separators()),
    );
    for n in 4..=nmax.min(5) {
        add(
            format!("lemma5-families-n{n}"),
            Suite::Network,
            Box::new(move |_| lemma5_families(n)),
        );
        add(
            format!("prop7-n{n}"),
            Suite::Network,
            Box::new(move |rng| prop7(n, rng)),
        );
    }
    add(
        "orbit-tables-n4".into(),
        Suite::Network,
        Box::new(|rng| orbit_tables(4, rng)),
    );
    add(
        "example2-n5".into(),
        Suite::Network,
        Box::new(|_| example2()),
    );
    add(
        "algorithm1-n5".into(),
        Suite::Network,
        Box::new(|_| algorithm1()),
    );
    add(
        "assumptions-n5".into(),
        Suite::Network,
        Box::new(|_| assumptions()),
    );
    add(
        "node-disjoint-n4".into(),
        Suite::Network,
        Box::new(|rng| node_disjoint(4, rng)),
    );
    add(
        "node-disjoint-n5".into(),
        Suite::Network,
        Box::new(|rng| node_disjoint(5, rng)),
    );
    add(
        "shared-node-n4".into(),
        Suite::Network,
        Box::new(shared_node),
    );

    // appendix lemmas on mixed graphs
    add(
        "lemma3nn".into(),
        Suite::Appendix,
        Box::new(|rng| lemma3nn(100, rng)),
    );
    add(
        "lemma3n".into(),
        Suite::Appendix,
        Box::new(|rng| lemma3n(100, rng)),
    );
    add(
        "lemma3".into(),
        Suite::Appendix,
        Box::new(|rng| lemma3(100, rng)),
    );
    add(
        "lemma5-random".into(),
        Suite::Appendix,
        Box::new(|rng| lemma5_random(100, rng)),
    );
    Ok(out)
}

/// Run the registered checks of `suite` (all suites when `None`), or the
/// single check `only`. Results come back in registration order.
pub fn run_checks(
    suite: Option<Suite>,
    only: Option<&str>,
    cfg: &VerifyConfig,
) -> Result<Vec<VerifyResult>> {
    let checks: Vec<Check> = registry(cfg)?
        .into_iter()
        .filter(|c| suite.is_none_or(|s| s == c.suite))
        .filter(|c| only.is_none_or(|id| id == c.id))
        .collect();
    if let Some(id) = only {
        if checks.is_empty() {
            return Err(invalid(format!("no check named {id:?}")));
        }
    }
    Ok(checks
        .par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ id_hash(&c.id));
            let start = Instant::now();
            let outcome = (c.run)(&mut rng);
            let elapsed = start.elapsed();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            VerifyResult {
                id: c.id.clone(),
                suite: c.suite,
                passed,
                detail,
                elapsed,
                repro: format!(
                    "exchci verify --only {} --nmax {} --seed {}",
                    c.id, cfg.nmax, cfg.seed
                ),
            }
        })
        .collect())
}

/// Tab-separated summary with a header row.
pub fn results_tsv(results: &[VerifyResult]) -> String {
    let mut s = String::from("id\tsuite\tstatus\telapsed_ms\tdetail\n");
    for r in results {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            r.id,
            r.suite,
            if r.passed { "pass" } else { "fail" },
            r.elapsed.as_millis(),
            r.detail.replace(['\t', '\n'], " ")
        ));
    }
    s
}

// ---------------------------------------------------------------------------
// model-level checks

type Triple = (u32, u32, u32);

/// Fixpoint of symmetry, decomposition, weak union and contraction over
/// general triples, from the elementary statements of `m`.
fn naive_closure(m: &IndependenceModel) -> HashSet<Triple> {
    let mut set: HashSet<Triple> = m
        .iter()
        .map(|s| (s.a.bits(), s.b.bits(), s.c.bits()))
        .collect();
    loop {
        let mut fresh: Vec<Triple> = Vec::new();
        for &(a, b, c) in &set {
            fresh.push((b, a, c));
            let bs = VarSet::from_bits(b);
            for d in bs.nonempty_subsets() {
                let rest = (bs - d).bits();
                if rest != 0 {
                    fresh.push((a, rest, c));
                    fresh.push((a, rest, c | d.bits()));
                }
            }
        }
        for &(a, b, c) in &set {
            for &(a2, d, c2) in &set {
                if a2 == a && c2 == c | b && d & (a | b | c) == 0 {
                    fresh.push((a, b | d, c));
                }
            }
        }
        let before = set.len();
        set.extend(fresh);
        if set.len() == before {
            return set;
        }
    }
}

fn holds_oracle(k: usize, count: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let g = lib(GroundSet::vector(k))?;
    let all = g.all();
    let mut triples = 0;
    for _ in 0..count {
        let m = lib(sample::random_closed_model(&g, 3, rng))?;
        let naive = naive_closure(&m);
        for a in all.nonempty_subsets() {
            for b in (all - a).nonempty_subsets() {
                for c in (all - a - b).subsets() {
                    triples += 1;
                    let fast = lib(m.holds(a, b, c))?;
                    let slow = naive.contains(&(a.bits(), b.bits(), c.bits()));
                    ensure!(
                        fast == slow,
                        "holds({}, {}, {}) = {fast} but the fixpoint gives {slow} in {m:?}",
                        g.format_set(a),
                        g.format_set(b),
                        g.format_set(c)
                    );
                }
            }
        }
    }
    Ok(format!("{count} models, {triples} triples agree"))
}

fn holds(m: &IndependenceModel, p: Property) -> Outcome<bool> {
    Ok(lib(check_property(m, p))?.holds)
}

fn random_small_ground(rng: &mut ChaCha8Rng) -> Outcome<GroundSet> {
    lib(GroundSet::vector(rng.gen_range(3..=5)))
}

fn lemma_dual(count: usize, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..count {
        let g = random_small_ground(rng)?;
        let m = lib(sample::random_closed_model(&g, 3, rng))?;
        let d = dual(&m);
        ensure!(
            is_semigraphoid(&d),
            "dual of a semi-graphoid is not closed: {m:?}"
        );
        for (p, q) in [
            (Property::Intersection, Property::Composition),
            (Property::Composition, Property::Intersection),
            (
                Property::SingletonTransitivity,
                Property::SingletonTransitivity,
            ),
            (Property::UpwardStability, Property::DownwardStability),
            (Property::DownwardStability, Property::UpwardStability),
        ] {
            ensure!(
                holds(&m, p)? == holds(&d, q)?,
                "{p} of the model differs from {q} of its dual: {m:?}"
            );
        }
    }
    Ok(format!("{count} models"))
}

fn lemma1(count: usize, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..count {
        let g = random_small_ground(rng)?;
        let m = lib(sample::random_model(&g, 3, rng))?;
        let up = lib(closure_with(&m, &[Rule::UpwardStability]))?;
        ensure!(
            holds(&up, Property::Composition)?,
            "upward-stable but not compositional: {up:?}"
        );
        let down = lib(closure_with(&m, &[Rule::DownwardStability]))?;
        ensure!(
            holds(&down, Property::Intersection)?,
            "downward-stable without intersection: {down:?}"
        );
    }
    Ok(format!("{count} models"))
}

fn closure_laws(count: usize, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..count {
        let g = random_small_ground(rng)?;
        let m = lib(sample::random_model(&g, 3, rng))?;
        let mut bigger = m.clone();
        let (u, v, c) = sample::random_statement(&g, rng);
        lib(bigger.insert(u, v, c))?;
        let rules = [Rule::Intersection, Rule::Composition];
        let (cm, cb) = (semigraphoid_closure(&m), semigraphoid_closure(&bigger));
        ensure!(
            semigraphoid_closure(&cm) == cm,
            "closure is not idempotent on {m:?}"
        );
        ensure!(cm.is_subset(&cb), "closure is not monotone on {m:?}");
        let (wm, wb) = (
            lib(closure_with(&m, &rules))?,
            lib(closure_with(&bigger, &rules))?,
        );
        ensure!(
            lib(closure_with(&wm, &rules))? == wm,
            "extended closure is not idempotent on {m:?}"
        );
        ensure!(
            wm.is_subset(&wb),
            "extended closure is not monotone on {m:?}"
        );
    }
    Ok(format!("{count} models"))
}

/// The property triple of each semantics decides faithfulness to the
/// skeleton read with that semantics.
fn prop_und(count: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let mut faithful = 0;
    for i in 0..count {
        let g = random_small_ground(rng)?;
        let m = lib(sample::random_model(&g, 3, rng))?;
        // mix in models closed under the full undirected triple
        let m = if i % 2 == 0 {
            lib(closure_with(
                &m,
                &[Rule::Intersection, Rule::UpwardStability],
            ))?
        } else {
            semigraphoid_closure(&m)
        };
        for s in [Semantics::Undirected, Semantics::Bidirected] {
            let r = lib(characterization_check(&m, s))?;
            ensure!(
                r.all_hold == r.faithful_to_skeleton,
                "{s}: properties {} but faithfulness {} for {m:?}",
                r.all_hold,
                r.faithful_to_skeleton
            );
            faithful += r.faithful_to_skeleton as usize;
        }
    }
    Ok(format!("{count} models, {faithful} faithful cases"))
}

fn exchangeable_vector_models(
    n: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Outcome<Vec<IndependenceModel>> {
    let g = lib(GroundSet::vector(n))?;
    (0..count)
        .map(|_| lib(sample::random_exchangeable_model(&g, 2, rng)))
        .collect()
}

fn prop4(n: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let models = exchangeable_vector_models(n, 60, rng)?;
    for m in &models {
        ensure!(
            holds(m, Property::SingletonTransitivity)?,
            "singleton-transitivity fails on {m:?}"
        );
    }
    Ok(format!("{} models", models.len()))
}

fn prop5(n: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let models = exchangeable_vector_models(n, 60, rng)?;
    let full = n * (n - 1) / 2;
    for m in &models {
        let e = skeleton_of_model(m).edge_count();
        ensure!(e == 0 || e == full, "skeleton with {e} edges for {m:?}");
    }
    Ok(format!("{} models", models.len()))
}

fn prop3(n: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let mut models = exchangeable_vector_models(n, 40, rng)?;
    let extra: Vec<IndependenceModel> = models
        .iter()
        .flat_map(|m| {
            [
                closure_with(m, &[Rule::Composition]),
                closure_with(m, &[Rule::UpwardStability]),
            ]
        })
        .collect::<Result<_>>()
        .map_err(|e| e.to_string())?;
    models.extend(extra);
    let mut both = 0;
    for m in &models {
        let (up, comp) = (
            holds(m, Property::UpwardStability)?,
            holds(m, Property::Composition)?,
        );
        ensure!(
            up == comp,
            "upward-stability {up} but composition {comp} for {m:?}"
        );
        both += up as usize;
    }
    Ok(format!(
        "{} models, {both} with both properties",
        models.len()
    ))
}

fn theorem_vector(n: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let mut models = exchangeable_vector_models(n, 40, rng)?;
    let extra: Vec<IndependenceModel> = models
        .iter()
        .map(|m| closure_with(m, &[Rule::Intersection, Rule::Composition]))
        .collect::<Result<_>>()
        .map_err(|e| e.to_string())?;
    models.extend(extra);
    let mut applicable = 0;
    for m in &models {
        if holds(m, Property::Intersection)? && holds(m, Property::Composition)? {
            applicable += 1;
            let sk = lib(skeleton_of_model(m).with_kind(EdgeKind::Line))?;
            let r = lib(faithfulness_report(m, &sk))?;
            ensure!(
                r.faithful && (sk.edge_count() == 0 || sk.edge_count() == n * (n - 1) / 2),
                "graphoid with composition not faithful to an empty or complete graph: {m:?}"
            );
        }
    }
    Ok(format!(
        "{} models, {applicable} with intersection and composition",
        models.len()
    ))
}

fn example1(n: usize) -> Outcome {
    let g = lib(GroundSet::vector(n))?;
    let mut m = lib(IndependenceModel::new(g.clone()))?;
    lib(m.insert(0, 1, VarSet::singleton(2)))?;
    let m = lib(orbit_closure(&m))?;
    ensure!(
        semigraphoid_closure(&m) == m,
        "semi-graphoid closure adds statements"
    );
    let with_int = lib(closure_with(&m, &[Rule::Intersection]))?;
    let with_comp = lib(closure_with(&m, &[Rule::Composition]))?;
    for u in 0..n {
        for v in u + 1..n {
            ensure!(
                with_int.contains(u, v, VarSet::EMPTY),
                "intersection closure misses {u} ⊥ {v}"
            );
            let rest = g.all().without(u).without(v);
            ensure!(
                with_comp.contains(u, v, rest),
                "composition closure misses {u} ⊥ {v} | rest"
            );
        }
    }
    Ok(format!("{} statements in the orbit", m.len()))
}

// ---------------------------------------------------------------------------
// vector tables and Gaussians

fn random_vector_tables(rng: &mut ChaCha8Rng, p_zero: f64) -> Outcome<Vec<JointTable>> {
    let mut out = Vec::new();
    for k in 2..=4 {
        let g = lib(GroundSet::vector(k))?;
        for _ in 0..20 {
            out.push(lib(sample::random_exchangeable_table(&g, p_zero, rng))?);
        }
        out.push(lib(JointTable::iid(g, rng.gen_range(0.05..0.95)))?);
    }
    Ok(out)
}

fn tables_prop5(rng: &mut ChaCha8Rng) -> Outcome {
    let tables = random_vector_tables(rng, 0.4)?;
    for t in &tables {
        let m = lib(induced_model_of_table(t, DEFAULT_CI_TOL))?;
        let k = t.ground().len();
        let e = skeleton_of_model(&m).edge_count();
        ensure!(
            e == 0 || e == k * (k - 1) / 2,
            "skeleton with {e} edges from {:?}",
            t.probs()
        );
    }
    Ok(format!("{} tables", tables.len()))
}

fn tables_marginal(rng: &mut ChaCha8Rng) -> Outcome {
    let tables = random_vector_tables(rng, 0.0)?;
    let mut applicable = 0;
    for t in &tables {
        let m = lib(induced_model_of_table(t, DEFAULT_CI_TOL))?;
        if m.is_empty() {
            continue;
        }
        applicable += 1;
        let k = t.ground().len();
        for u in 0..k {
            for v in u + 1..k {
                ensure!(
                    m.contains(u, v, VarSet::EMPTY),
                    "positive table with a CI statement lacks {u} ⊥ {v}: {:?}",
                    t.probs()
                );
            }
        }
    }
    Ok(format!(
        "{} positive tables, {applicable} with some independence",
        tables.len()
    ))
}

fn tables_prop3n(rng: &mut ChaCha8Rng) -> Outcome {
    let tables = random_vector_tables(rng, 0.4)?;
    let mut conditioned = 0;
    for t in &tables {
        let all = t.ground().all();
        let k = t.ground().len();
        let m: VarSet = all.iter().filter(|_| rng.gen_bool(0.5)).collect();
        let m = if m == all { m.without(0) } else { m };
        let marg = lib(marginalize(t, m))?;
        ensure!(
            lib(is_exchangeable_table(&marg))?,
            "marginal over {m:?} not exchangeable: {:?}",
            t.probs()
        );
        let c = VarSet::singleton(rng.gen_range(0..k));
        let c = if k > 2 && rng.gen_bool(0.5) {
            c.with((c.first().unwrap() + 1) % k)
        } else {
            c
        };
        let ones: VarSet = c.iter().filter(|_| rng.gen_bool(0.5)).collect();
        match condition(t, c, ones) {
            Ok(ct) => {
                conditioned += 1;
                ensure!(
                    lib(is_exchangeable_table(&ct))?,
                    "conditional on {c:?} = {ones:?} not exchangeable: {:?}",
                    t.probs()
                );
            }
            Err(Error::NullEvent) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!(
        "{} tables, {conditioned} conditionings",
        tables.len()
    ))
}

fn gaussian(n: usize) -> Outcome {
    let grid = [-0.24, -0.1, 0.0, 0.1, 0.3, 0.5, 0.9];
    let mut queries = 0;
    for rho in grid {
        let e = lib(Equicorrelation::new(n, rho))?;
        for i in 0..n {
            for j in i + 1..n {
                let rest = VarSet::full(n).without(i).without(j);
                for c in rest.subsets() {
                    let cs: Vec<usize> = c.iter().collect();
                    let (ci, v) = lib(equicorrelation_ci(&e, i, j, &cs))?;
                    queries += 1;
                    ensure!(
                        ci == (rho == 0.0),
                        "rho = {rho}: CI {ci} for {i},{j} | {cs:?}"
                    );
                    let want = closed_form_partial_covariance(rho, cs.len());
                    ensure!(
                        (v - want).abs() <= 1e-12,
                        "rho = {rho}: partial covariance {v} vs {want}"
                    );
                }
            }
        }
    }
    Ok(format!("{queries} partial covariances"))
}

// ---------------------------------------------------------------------------
// network checks

fn fig1() -> Outcome {
    let g = lib(incidence_graph(4, EdgeKind::Line))?;
    ensure!(
        g.len() == 6 && g.edge_count() == 12,
        "L(4) has {} vertices and {} edges",
        g.len(),
        g.edge_count()
    );
    ensure!((0..6).all(|u| g.degree(u) == 4), "L(4) is not 4-regular");
    let c = lib(complement_graph(&g, EdgeKind::Line))?;
    let gs = g.ground();
    let edges: BTreeSet<(String, String)> = c
        .edges()
        .into_iter()
        .map(|(u, v, _)| (gs.element(u).to_string(), gs.element(v).to_string()))
        .collect();
    let want: BTreeSet<(String, String)> = [("1-2", "3-4"), ("1-3", "2-4"), ("1-4", "2-3")]
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    ensure!(edges == want, "complement edges {edges:?}");
    Ok("6 vertices, 12 edges, 4-regular; complement is a perfect matching".into())
}

/// Exhaustive size bounds on the separators of `u, v`: `named` separates,
/// every separator is at least (`min`) or at most (`!min`) as large, and
/// strictly so unless it is `named` or `twin`.
fn separator_bounds(
    g: &MixedGraph,
    u: usize,
    v: usize,
    named: VarSet,
    twin: VarSet,
    min: bool,
) -> Outcome<usize> {
    let gs = g.ground();
    let list = lib(enumerate_separators(g, u, v, SeparatorMode::All))?;
    ensure!(
        list.sets.contains(&named),
        "{} does not separate",
        gs.format_set(named)
    );
    let bound = named.len();
    for &c in &list.sets {
        let (ok, strict) = if min {
            (c.len() >= bound, c.len() > bound)
        } else {
            (c.len() <= bound, c.len() < bound)
        };
        ensure!(
            ok,
            "separator {} violates the size bound {bound}",
            gs.format_set(c)
        );
        ensure!(
            strict || c == named || c == twin,
            "separator {} attains the bound {bound}",
            gs.format_set(c)
        );
    }
    // extremality of the named set
    let extremal = if min {
        named
            .iter()
            .all(|w| !is_separator(g, u, v, named.without(w)))
    } else {
        (gs.all().without(u).without(v) - named)
            .iter()
            .all(|w| !is_separator(g, u, v, named.with(w)))
    };
    ensure!(
        extremal,
        "{} is not {}",
        gs.format_set(named),
        if min { "minimal" } else { "maximal" }
    );
    Ok(list.sets.len())
}

fn prop12_1(n: usize) -> Outcome {
    let g = lib(incidence_graph(n, EdgeKind::Line))?;
    let gs = g.ground().clone();
    let (u, v) = (lib(gs.index_of_dyad(1, 2))?, lib(gs.index_of_dyad(3, 4))?);
    let (cij, ckl) = (lib(c_ij(&gs, 1, 2))?, lib(c_ij(&gs, 3, 4))?);
    let count = separator_bounds(&g, u, v, cij, ckl, true)?;
    Ok(format!("{count} separators, least size {}", cij.len()))
}

fn prop12_2(n: usize) -> Outcome {
    let g = lib(incidence_graph(n, EdgeKind::Arc))?;
    let gs = g.ground().clone();
    let (u, v) = (lib(gs.index_of_dyad(1, 2))?, lib(gs.index_of_dyad(3, 4))?);
    let dij = lib(cd_ij(&gs, 1, 2))?.without(v);
    let dkl = lib(cd_ij(&gs, 3, 4))?.without(u);
    let count = separator_bounds(&g, u, v, dij, dkl, false)?;
    let direct = lib(enumerate_separators(&g, u, v, SeparatorMode::All))?.sets;
    let via_dual = dual(&lib(induced_model(&lib(incidence_graph(
        n,
        EdgeKind::Line,
    ))?))?);
    let mut dual_sets = via_dual.conditioning_sets(u, v);
    let mut direct_sorted = direct.clone();
    dual_sets.sort_by_key(|c| c.bits());
    direct_sorted.sort_by_key(|c| c.bits());
    ensure!(
        dual_sets == direct_sorted,
        "direct and dual separator lists differ"
    );
    Ok(format!("{count} separators, greatest size {}", dij.len()))
}

fn prop12n(n: usize) -> Outcome {
    let lu = lib(GraphFamily::ComplementUndirected.build(n))?;
    let gs = lu.ground().clone();
    let (u, v) = (lib(gs.index_of_dyad(1, 2))?, lib(gs.index_of_dyad(1, 3))?);
    let (dij, dik) = (lib(cd_ij(&gs, 1, 2))?, lib(cd_ij(&gs, 1, 3))?);
    let c1 = separator_bounds(&lu, u, v, dij, dik, true)?;
    let lb = lib(GraphFamily::ComplementBidirected.build(n))?;
    let cij = lib(c_ij(&gs, 1, 2))?.without(v);
    let cik = lib(c_ij(&gs, 1, 3))?.without(u);
    let c2 = separator_bounds(&lb, u, v, cij, cik, false)?;
    Ok(format!("{c1} undirected and {c2} bidirected separators"))
}

fn named_separators() -> Outcome {
    let cases = [
        (
            GraphFamily::IncidenceUndirected,
            6,
            "1-2",
            "3-4",
            "1-3,1-4,1-5,2-3,2-4,2-5,6-3,6-4,5-6",
        ),
        (
            GraphFamily::ComplementUndirected,
            5,
            "1-2",
            "1-3",
            "3-4,2-4,1-4,4-5",
        ),
    ];
    for (family, n, a, b, set) in cases {
        let g = lib(family.build(n))?;
        let gs = g.ground();
        let (u, v, c) = (
            lib(gs.parse_element(a))?,
            lib(gs.parse_element(b))?,
            lib(gs.parse_set(set))?,
        );
        ensure!(
            lib(separates(&g, VarSet::singleton(u), VarSet::singleton(v), c))?,
            "{set} does not separate {a} and {b} in {family}({n})"
        );
        ensure!(
            c.iter().all(|w| !is_separator(&g, u, v, c.without(w))),
            "{set} is not minimal in {family}({n})"
        );
    }
    Ok("both sets separate and are minimal".into())
}

fn lemma5_families(n: usize) -> Outcome {
    for (und, bi) in [
        (
            GraphFamily::IncidenceUndirected,
            GraphFamily::IncidenceBidirected,
        ),
        (
            GraphFamily::ComplementUndirected,
            GraphFamily::ComplementBidirected,
        ),
    ] {
        let mu = lib(induced_model(&lib(und.build(n))?))?;
        let mb = lib(induced_model(&lib(bi.build(n))?))?;
        ensure!(
            mb == dual(&mu),
            "{bi}({n}) does not induce the dual of {und}({n})"
        );
        for (p, q) in [
            (Property::Intersection, Property::Composition),
            (
                Property::SingletonTransitivity,
                Property::SingletonTransitivity,
            ),
            (Property::UpwardStability, Property::DownwardStability),
        ] {
            ensure!(
                holds(&mu, p)? == holds(&mb, q)?,
                "{p} of {und}({n}) differs from {q} of {bi}({n})"
            );
            ensure!(
                holds(&mb, p)? == holds(&mu, q)?,
                "{p} of {bi}({n}) differs from {q} of {und}({n})"
            );
        }
    }
    Ok("incidence and complement families".into())
}

/// The four relabeling-invariant skeletons on the dyads of `n` nodes.
fn invariant_skeletons(n: usize) -> Outcome<Vec<(&'static str, MixedGraph)>> {
    let inc = lib(incidence_graph(n, EdgeKind::Line))?;
    Ok(vec![
        ("empty", MixedGraph::empty(inc.ground().clone())),
        ("incidence", inc.clone()),
        ("complement", lib(complement_graph(&inc, EdgeKind::Line))?),
        (
            "complete",
            MixedGraph::complete(inc.ground().clone(), EdgeKind::Line),
        ),
    ])
}

fn skeleton_class(
    m: &IndependenceModel,
    classes: &[(&'static str, MixedGraph)],
) -> Option<&'static str> {
    let sk = skeleton_of_model(m);
    classes.iter().find(|c| c.1 == sk).map(|c| c.0)
}

/// Skeletons of exchangeable network models fall in the four invariant
/// classes, and every statement pairs dyads as the class dictates.
fn prop7(n: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let g = lib(dyad_universe(n))?;
    let classes = invariant_skeletons(n)?;
    let mut seen = BTreeSet::new();
    let count = 30;
    for _ in 0..count {
        let m = lib(sample::random_exchangeable_model(&g, 2, rng))?;
        let class = skeleton_class(&m, &classes)
            .ok_or_else(|| format!("skeleton outside the four classes: {m:?}"))?;
        seen.insert(class);
        for s in m.iter() {
            let (a, b) = (g.dyad(s.a.first().unwrap()), g.dyad(s.b.first().unwrap()));
            let ok = match class {
                "incidence" => !a.shares_node(b),
                "complement" => a.shares_node(b),
                _ => true,
            };
            ensure!(ok, "{class} model states {}", s.display(&g));
        }
    }
    Ok(format!("{count} models, classes seen: {seen:?}"))
}

fn orbit_tables(n: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let g = lib(dyad_universe(n))?;
    let classes = invariant_skeletons(n)?;
    let count = 20;
    for i in 0..count {
        let t = lib(sample::random_exchangeable_table(
            &g,
            if i % 2 == 0 { 0.0 } else { 0.6 },
            rng,
        ))?;
        ensure!(
            lib(is_exchangeable_table(&t))?,
            "orbit table not exchangeable"
        );
        let m = lib(induced_model_of_table(&t, DEFAULT_CI_TOL))?;
        ensure!(
            lib(is_exchangeable_model(&m))?,
            "induced model not exchangeable: {:?}",
            t.probs()
        );
        ensure!(
            skeleton_class(&m, &classes).is_some(),
            "skeleton outside the four classes: {:?}",
            t.probs()
        );
    }
    Ok(format!("{count} tables"))
}

/// The upward-stable orbit closure of `12 ⊥ 34 | {13,14,23,24}` at `n = 5`.
pub fn example2_model() -> Result<IndependenceModel> {
    let g = dyad_universe(5)?;
    let mut m = IndependenceModel::new(g.clone())?;
    m.insert(
        g.index_of_dyad(1, 2)?,
        g.index_of_dyad(3, 4)?,
        g.parse_set("1-3,1-4,2-3,2-4")?,
    )?;
    closure_with(&orbit_closure(&m)?, &[Rule::UpwardStability])
}

fn example2() -> Outcome {
    let m = lib(example2_model())?;
    ensure!(lib(is_exchangeable_model(&m))?, "model is not exchangeable");
    ensure!(holds(&m, Property::Composition)?, "composition fails");
    ensure!(holds(&m, Property::Intersection)?, "intersection fails");
    ensure!(
        !holds(&m, Property::SingletonTransitivity)?,
        "singleton-transitivity holds"
    );
    let l5 = lib(incidence_graph(5, EdgeKind::Line))?;
    ensure!(
        skeleton_of_model(&m) == l5,
        "skeleton differs from the incidence graph"
    );
    let r = lib(faithfulness_report(&m, &l5))?;
    ensure!(!r.faithful, "model is faithful to L(5)");
    Ok(format!(
        "{} statements; markovian to L(5): {}",
        m.len(),
        r.markovian
    ))
}

fn algorithm1() -> Outcome {
    let expect = [
        (GraphFamily::Empty, RegimeTag::Empty),
        (
            GraphFamily::IncidenceUndirected,
            RegimeTag::UndirectedIncidence,
        ),
        (
            GraphFamily::IncidenceBidirected,
            RegimeTag::BidirectedIncidence,
        ),
        (
            GraphFamily::ComplementUndirected,
            RegimeTag::UndirectedComplement,
        ),
        (
            GraphFamily::ComplementBidirected,
            RegimeTag::BidirectedComplement,
        ),
        (GraphFamily::Complete, RegimeTag::Complete),
    ];
    for (family, tag) in expect {
        let got = lib(classify_regime(&lib(family.build(5))?, 5))?.tag;
        ensure!(got == tag, "{family}(5) classified as {got}");
    }
    let iid = TableOracle::new(lib(JointTable::iid(lib(dyad_universe(5))?, 0.5))?);
    let got = lib(classify_regime(&iid, 5))?.tag;
    ensure!(got == RegimeTag::Empty, "iid table classified as {got}");
    Ok("six graph oracles and the iid table".into())
}

fn assumptions() -> Outcome {
    for (family, case) in [
        (
            GraphFamily::IncidenceUndirected,
            RegimeTag::UndirectedIncidence,
        ),
        (
            GraphFamily::IncidenceBidirected,
            RegimeTag::BidirectedIncidence,
        ),
        (
            GraphFamily::ComplementUndirected,
            RegimeTag::UndirectedComplement,
        ),
        (
            GraphFamily::ComplementBidirected,
            RegimeTag::BidirectedComplement,
        ),
        (GraphFamily::Empty, RegimeTag::Empty),
    ] {
        let m = lib(induced_model(&lib(family.build(5))?))?;
        let r = lib(structured_assumption_check(&m, case))?;
        ensure!(r.satisfied, "{family}(5) fails its hypotheses: {r:?}");
    }
    let r = lib(structured_assumption_check(
        &lib(example2_model())?,
        RegimeTag::UndirectedIncidence,
    ))?;
    ensure!(
        r.hypotheses[1].holds,
        "containment fails on the upward-stable model"
    );
    Ok(format!(
        "canonical models pass; upward-stable model: containment holds, swap invariance {}",
        if r.hypotheses[2].holds {
            "holds"
        } else {
            "fails"
        }
    ))
}

/// Dyads among `nodes` that stay after conditioning on `c`, with all other
/// dyads summed out, for every value of `c`.
fn conditional_on(t: &JointTable, keep: VarSet, c: VarSet) -> Outcome<Vec<JointTable>> {
    let g = t.ground();
    let marg = lib(marginalize(t, g.all() - keep - c))?;
    // indices in the marginal: `keep ∪ c` in ground order
    let kept: Vec<usize> = (keep | c).iter().collect();
    let c_local: VarSet = kept
        .iter()
        .enumerate()
        .filter(|(_, &e)| c.contains(e))
        .map(|(i, _)| i)
        .collect();
    let mut out = Vec::new();
    for ones in c_local.subsets() {
        match condition(&marg, c_local, ones) {
            Ok(ct) => out.push(ct),
            Err(Error::NullEvent) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(out)
}

/// Conditioning on dyads that share no node with the kept dyads leaves an
/// exchangeable table.
fn node_disjoint(n: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let g = lib(dyad_universe(n))?;
    let keep = lib(g.parse_set(if n == 4 { "1-2" } else { "1-2,1-3,2-3" }))?;
    let c = lib(g.parse_set(if n == 4 { "3-4" } else { "4-5" }))?;
    let count = 20;
    for i in 0..count {
        let t = lib(sample::random_exchangeable_table(
            &g,
            if i % 2 == 0 { 0.0 } else { 0.5 },
            rng,
        ))?;
        for ct in conditional_on(&t, keep, c)? {
            ensure!(
                lib(is_exchangeable_table(&ct))?,
                "conditional not exchangeable: {:?}",
                t.probs()
            );
        }
    }
    Ok(format!("{count} tables"))
}

/// Search for an exchangeable table whose conditional on a dyad sharing a
/// node with the kept dyads is not exchangeable.
fn shared_node(rng: &mut ChaCha8Rng) -> Outcome {
    let g = lib(dyad_universe(4))?;
    let keep = lib(g.parse_set("1-2,1-3,2-3"))?;
    let c = lib(g.parse_set("1-4"))?;
    for attempt in 1..=50 {
        let t = lib(sample::random_exchangeable_table(&g, 0.0, rng))?;
        for ct in conditional_on(&t, keep, c)? {
            if !lib(is_exchangeable_table(&ct))? {
                return Ok(format!("counterexample found after {attempt} tables"));
            }
        }
    }
    Err("no shared-node counterexample among 50 tables".into())
}

// ---------------------------------------------------------------------------
// appendix lemmas

fn random_graph(rng: &mut ChaCha8Rng) -> Outcome<MixedGraph> {
    let k = rng.gen_range(2..=5);
    lib(sample::random_mixed_graph(k, 0.6, rng))
}

fn collider_ends(g: &MixedGraph) -> BTreeSet<(usize, usize)> {
    unshielded_collider_trisections(g)
        .into_iter()
        .filter(|t| t.collider && !t.shielded)
        .map(|t| (t.i, t.j))
        .collect()
}

fn lemma3nn(count: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let mut applicable = 0;
    for _ in 0..count {
        let g = random_graph(rng)?;
        if g.is_maximal() && collider_ends(&g).is_empty() {
            applicable += 1;
            ensure!(
                lib(markov_equivalent(&g, &g.skeleton()))?,
                "not equivalent to its skeleton: {g:?}"
            );
        }
    }
    Ok(format!(
        "{count} graphs, {applicable} maximal without unshielded colliders"
    ))
}

fn lemma3n(count: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let mut pairs = 0;
    for _ in 0..count {
        let g = random_graph(rng)?;
        if !g.is_maximal() {
            continue;
        }
        for _ in 0..20 {
            let h = lib(sample::random_orientation(&g, rng))?;
            if h.is_maximal() && lib(markov_equivalent(&g, &h))? {
                pairs += 1;
                ensure!(
                    collider_ends(&g) == collider_ends(&h),
                    "equivalent maximal graphs with different colliders: {g:?} and {h:?}"
                );
            }
        }
    }
    Ok(format!("{pairs} equivalent maximal pairs"))
}

fn lemma3(count: usize, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..count {
        let g = random_graph(rng)?;
        let k = g.len();
        let perms: Vec<NodePermutation> = NodePermutation::all(k).collect();
        let p = &perms[rng.gen_range(0..perms.len())];
        let h = lib(g.permuted(p))?;
        let want = lib(relabel_model(&lib(induced_model(&g))?, p))?;
        ensure!(
            lib(induced_model(&h))? == want,
            "relabeled graph {h:?} disagrees with the relabeled model of {g:?}"
        );
    }
    Ok(format!("{count} graphs"))
}

fn lemma5_random(count: usize, rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..count {
        let g = random_graph(rng)?;
        let mu = lib(induced_model(&lib(g.with_kind(EdgeKind::Line))?))?;
        let mb = lib(induced_model(&lib(g.with_kind(EdgeKind::Arc))?))?;
        ensure!(
            mb == dual(&mu),
            "bidirected model is not the dual for skeleton {g:?}"
        );
    }
    Ok(format!("{count} skeletons"))
}
