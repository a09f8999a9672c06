//! Independent reference implementations used as test oracles. They favor
//! obviousness over speed and share no code with the library beyond its
//! plain data accessors.

#![allow(dead_code)]

use std::collections::BTreeSet;

use exchci::graphs::MixedGraph;
use exchci::imodel::IndependenceModel;
use exchci::{Element, GroundSet, VarSet};
use nalgebra::DMatrix;

// ---------------------------------------------------------------------------
// independence models

pub type Triple = (u32, u32, u32);

/// Closure of the elementary statements of `m` (plus their symmetric
/// images) under symmetry, decomposition, weak union and contraction,
/// computed over general triples.
pub fn naive_general_closure(m: &IndependenceModel) -> BTreeSet<Triple> {
    let mut set: BTreeSet<Triple> = BTreeSet::new();
    for s in m.iter() {
        set.insert((s.a.bits(), s.b.bits(), s.c.bits()));
    }
    loop {
        let snapshot: Vec<Triple> = set.iter().copied().collect();
        let mut grew = false;
        let mut add = |t: Triple, set: &mut BTreeSet<Triple>| {
            if set.insert(t) {
                grew = true;
            }
        };
        for &(a, b, c) in &snapshot {
            add((b, a, c), &mut set);
            // split B = B1 ∪ B2 with both parts non-empty
            let mut b1 = (b - 1) & b;
            while b1 != 0 {
                let b2 = b & !b1;
                add((a, b1, c), &mut set); // decomposition
                add((a, b1, c | b2), &mut set); // weak union
                b1 = (b1 - 1) & b;
            }
        }
        for &(a, b, c) in &snapshot {
            for &(a2, d, c2) in &snapshot {
                if a2 == a && c2 == (c | b) && d & (a | b | c) == 0 {
                    add((a, b | d, c), &mut set); // contraction
                }
            }
        }
        if !grew {
            return set;
        }
    }
}

/// Every triple `(A, B, C)` of pairwise disjoint subsets with `A`, `B`
/// non-empty.
pub fn general_triples(all: VarSet) -> Vec<(VarSet, VarSet, VarSet)> {
    let mut out = Vec::new();
    for a in all.nonempty_subsets() {
        for b in (all - a).nonempty_subsets() {
            for c in (all - a - b).subsets() {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Elementary forms of the properties. For semi-graphoids these decide
/// the general-subset versions; the tests confirm that on small grounds.
pub fn elementary_intersection(m: &IndependenceModel) -> bool {
    elementary_rule(m, |m, u, v, w, c| {
        !(m.contains(u, v, c.with(w)) && m.contains(u, w, c.with(v))) || m.contains(u, v, c)
    })
}

pub fn elementary_composition(m: &IndependenceModel) -> bool {
    elementary_rule(m, |m, u, v, w, c| {
        !(m.contains(u, v, c) && m.contains(u, w, c)) || m.contains(u, v, c.with(w))
    })
}

pub fn singleton_transitivity(m: &IndependenceModel) -> bool {
    elementary_rule(m, |m, u, v, w, c| {
        !(m.contains(u, v, c) && m.contains(u, v, c.with(w)))
            || m.contains(u, w, c)
            || m.contains(v, w, c)
    })
}

pub fn upward_stable(m: &IndependenceModel) -> bool {
    elementary_rule(m, |m, u, v, w, c| {
        !m.contains(u, v, c) || m.contains(u, v, c.with(w))
    })
}

pub fn downward_stable(m: &IndependenceModel) -> bool {
    elementary_rule(m, |m, u, v, w, c| {
        !m.contains(u, v, c.with(w)) || m.contains(u, v, c)
    })
}

/// `rule(m, u, v, w, C)` for all distinct `u, v, w` and `C` avoiding them.
fn elementary_rule(
    m: &IndependenceModel,
    rule: impl Fn(&IndependenceModel, usize, usize, usize, VarSet) -> bool,
) -> bool {
    let k = m.ground().len();
    let all = m.ground().all();
    for u in 0..k {
        for v in 0..k {
            for w in 0..k {
                if u == v || v == w || u == w {
                    continue;
                }
                for c in (all.without(u).without(v).without(w)).subsets() {
                    if !rule(m, u, v, w, c) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// General-subset intersection by brute force over `holds`.
pub fn general_intersection(m: &IndependenceModel) -> bool {
    let all = m.ground().all();
    for (a, b, c) in general_triples(all) {
        for d in (all - a - b - c).nonempty_subsets() {
            let h = |x, y, z| m.holds(x, y, z).unwrap();
            if h(a, b, c | d) && h(a, d, c | b) && !h(a, b | d, c) {
                return false;
            }
        }
    }
    true
}

/// General-subset composition by brute force over `holds`.
pub fn general_composition(m: &IndependenceModel) -> bool {
    let all = m.ground().all();
    for (a, b, c) in general_triples(all) {
        for d in (all - a - b - c).nonempty_subsets() {
            let h = |x, y, z| m.holds(x, y, z).unwrap();
            if h(a, b, c) && h(a, d, c) && !h(a, b | d, c) {
                return false;
            }
        }
    }
    true
}

/// The dual model: `⟨u,v|C⟩ ↦ ⟨u,v|V∖(C∪{u,v})⟩`.
pub fn dual_by_hand(m: &IndependenceModel) -> IndependenceModel {
    let all = m.ground().all();
    let mut d = IndependenceModel::new(m.ground().clone()).unwrap();
    for s in m.iter() {
        let (u, v) = (s.a.first().unwrap(), s.b.first().unwrap());
        d.insert(u, v, all - s.c - s.a - s.b).unwrap();
    }
    d
}

/// Pairs of non-adjacent vertices of the skeleton of `m`.
pub fn separated_pairs(m: &IndependenceModel) -> BTreeSet<(usize, usize)> {
    m.iter()
        .map(|s| (s.a.first().unwrap(), s.b.first().unwrap()))
        .collect()
}

// ---------------------------------------------------------------------------
// separation

/// Undirected separation: no path from `A` to `B` avoiding `C`.
pub fn undirected_separated(g: &MixedGraph, a: VarSet, b: VarSet, c: VarSet) -> bool {
    reach(g, a, |w| !c.contains(w)).is_disjoint(b)
}

/// Bidirected separation: no path from `A` to `B` whose inner vertices
/// all lie in `C`.
pub fn bidirected_separated(g: &MixedGraph, a: VarSet, b: VarSet, c: VarSet) -> bool {
    // vertices of B reachable directly or through C-only interiors
    let through_c = reach(g, a, |w| c.contains(w));
    let mut hit = VarSet::EMPTY;
    for x in through_c.iter() {
        hit = hit | g.neighbors(x);
    }
    (hit | through_c).is_disjoint(b)
}

/// Vertices reachable from `start` moving only onto vertices where
/// `allowed` holds (the start set is always included).
fn reach(g: &MixedGraph, start: VarSet, allowed: impl Fn(usize) -> bool) -> VarSet {
    let mut seen = start;
    let mut stack: Vec<usize> = start.iter().collect();
    while let Some(x) = stack.pop() {
        for y in g.neighbors(x).iter() {
            if !seen.contains(y) && allowed(y) {
                seen = seen.with(y);
                stack.push(y);
            }
        }
    }
    seen
}

/// Separation by enumerating walks with at most `max_edges` edges and
/// testing the section criterion on each: every collider section meets
/// `C` and every other section avoids it.
pub fn walk_separated(g: &MixedGraph, a: VarSet, b: VarSet, c: VarSet, max_edges: usize) -> bool {
    for s in a.iter() {
        let mut walk = vec![s];
        if walk_search(g, b, c, max_edges, &mut walk) {
            return false;
        }
    }
    true
}

fn is_line(g: &MixedGraph, x: usize, y: usize) -> bool {
    !g.head_at(x, y) && !g.head_at(y, x)
}

/// Extend `walk`; true once a connecting walk to `B` is found.
fn walk_search(
    g: &MixedGraph,
    b: VarSet,
    c: VarSet,
    max_edges: usize,
    walk: &mut Vec<usize>,
) -> bool {
    let last = *walk.last().unwrap();
    if b.contains(last) && walk.len() > 1 && connecting(g, walk, c) {
        return true;
    }
    if walk.len() > max_edges {
        return false;
    }
    if !closed_sections_ok(g, walk, c) {
        return false;
    }
    for y in g.neighbors(last).iter() {
        walk.push(y);
        if walk_search(g, b, c, max_edges, walk) {
            return true;
        }
        walk.pop();
    }
    false
}

/// Sections as inclusive index ranges of the walk.
fn sections(g: &MixedGraph, walk: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..walk.len() - 1 {
        if !is_line(g, walk[i], walk[i + 1]) {
            out.push((start, i));
            start = i + 1;
        }
    }
    out.push((start, walk.len() - 1));
    out
}

fn section_ok(g: &MixedGraph, walk: &[usize], (s, e): (usize, usize), c: VarSet) -> bool {
    let collider = s > 0
        && e + 1 < walk.len()
        && g.head_at(walk[s - 1], walk[s])
        && g.head_at(walk[e + 1], walk[e]);
    let meets = walk[s..=e].iter().any(|&x| c.contains(x));
    if collider {
        meets
    } else {
        !meets
    }
}

fn connecting(g: &MixedGraph, walk: &[usize], c: VarSet) -> bool {
    sections(g, walk)
        .into_iter()
        .all(|r| section_ok(g, walk, r, c))
}

/// Sections that can no longer change (all but the last) satisfy the
/// criterion. The last closed one still needs its successor edge, which
/// the walk already has.
fn closed_sections_ok(g: &MixedGraph, walk: &[usize], c: VarSet) -> bool {
    let secs = sections(g, walk);
    secs[..secs.len() - 1]
        .iter()
        .all(|&r| section_ok(g, walk, r, c))
}

/// The elementary model of a graph under a separation oracle.
pub fn model_from_oracle(
    g: &MixedGraph,
    sep: impl Fn(&MixedGraph, VarSet, VarSet, VarSet) -> bool,
) -> IndependenceModel {
    let gs = g.ground().clone();
    let mut m = IndependenceModel::new(gs.clone()).unwrap();
    let k = gs.len();
    for u in 0..k {
        for v in u + 1..k {
            for c in gs.all().without(u).without(v).subsets() {
                if sep(g, VarSet::singleton(u), VarSet::singleton(v), c) {
                    m.insert(u, v, c).unwrap();
                }
            }
        }
    }
    m
}

/// Dyads of `n` nodes in lexicographic order, as node pairs.
pub fn dyads(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push((i, j));
        }
    }
    out
}

/// Edges of the line graph of `K_n` (dyads sharing a node), by index.
pub fn incidence_edges(n: usize) -> BTreeSet<(usize, usize)> {
    let d = dyads(n);
    let mut out = BTreeSet::new();
    for x in 0..d.len() {
        for y in x + 1..d.len() {
            let (a, b) = (d[x], d[y]);
            if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                out.insert((x, y));
            }
        }
    }
    out
}

pub fn edge_set(g: &MixedGraph) -> BTreeSet<(usize, usize)> {
    g.edges()
        .into_iter()
        .map(|(u, v, _)| (u.min(v), u.max(v)))
        .collect()
}

// ---------------------------------------------------------------------------
// permutations and tables

/// All permutations of `items`.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Element index maps of the node relabelings (of the nodes occurring in
/// `g`) that map its element set onto itself.
pub fn element_symmetries(g: &GroundSet) -> Vec<Vec<usize>> {
    let elements = g.elements();
    let mut nodes: Vec<usize> = Vec::new();
    for e in elements {
        match *e {
            Element::Var(v) => nodes.push(v as usize),
            Element::Dyad(d) => {
                nodes.push(d.i());
                nodes.push(d.j());
            }
        }
    }
    nodes.sort_unstable();
    nodes.dedup();
    let mut out = Vec::new();
    for images in permutations(&nodes) {
        let img = |x: usize| images[nodes.iter().position(|&y| y == x).unwrap()];
        let map: Option<Vec<usize>> = elements
            .iter()
            .map(|e| {
                let target = match *e {
                    Element::Var(v) => Element::Var(img(v as usize) as u8),
                    Element::Dyad(d) => {
                        let (a, b) = (img(d.i()), img(d.j()));
                        Element::Dyad(exchci::Dyad::new(a.min(b), a.max(b)).unwrap())
                    }
                };
                elements.iter().position(|&f| f == target)
            })
            .collect();
        if let Some(map) = map {
            out.push(map);
        }
    }
    out
}

/// Table invariance under every symmetry of its ground set.
pub fn brute_exchangeable(g: &GroundSet, probs: &[f64], tol: f64) -> bool {
    element_symmetries(g).iter().all(|map| {
        (0..probs.len()).all(|x| {
            let y = map
                .iter()
                .enumerate()
                .filter(|(k, _)| x >> k & 1 == 1)
                .fold(0usize, |acc, (_, &t)| acc | 1 << t);
            (probs[x] - probs[y]).abs() <= tol
        })
    })
}

/// `A ⊥ B | C` by the definition, summing the full table for every
/// conditional probability.
pub fn brute_ci(probs: &[f64], a: VarSet, b: VarSet, c: VarSet, tol: f64) -> bool {
    let mass = |fix: VarSet, val: u32| -> f64 {
        probs
            .iter()
            .enumerate()
            .filter(|(x, _)| (*x as u32) & fix.bits() == val)
            .map(|(_, p)| p)
            .sum()
    };
    for cv in c.subsets() {
        let pc = mass(c, cv.bits());
        if pc <= 0.0 {
            continue;
        }
        for av in a.subsets() {
            for bv in b.subsets() {
                let pabc = mass(a | b | c, (av | bv | cv).bits());
                let pac = mass(a | c, (av | cv).bits());
                let pbc = mass(b | c, (bv | cv).bits());
                if (pabc / pc - (pac / pc) * (pbc / pc)).abs() > tol {
                    return false;
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Gaussian

/// Partial covariance of coordinates `i, j` given `C` from the inverse of
/// the covariance block on `{i, j} ∪ C`.
pub fn partial_covariance_by_inversion(
    sigma: &DMatrix<f64>,
    i: usize,
    j: usize,
    c: &[usize],
) -> f64 {
    let idx: Vec<usize> = [i, j].into_iter().chain(c.iter().copied()).collect();
    let block = sigma.select_rows(&idx).select_columns(&idx);
    let k = block.try_inverse().expect("positive definite block");
    let det = k[(0, 0)] * k[(1, 1)] - k[(0, 1)] * k[(1, 0)];
    -k[(0, 1)] / det
}
