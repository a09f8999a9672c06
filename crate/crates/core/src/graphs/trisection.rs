//! Unshielded collider trisections: walks `⟨i, ρ, j⟩` where `ρ` is a line
//! section receiving arrowheads from both `i` and `j`, and `i`, `j` are
//! distinct and non-adjacent.

use std::collections::{BTreeSet, VecDeque};

use super::MixedGraph;
use crate::ground::VarSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trisection {
    /// Endpoints with `i < j`.
    pub i: usize,
    pub j: usize,
    /// Section ends: `i` attaches at `s`, `j` at `t`.
    pub s: usize,
    pub t: usize,
    /// Vertices of a shortest line path from `s` to `t`.
    pub section: VarSet,
    pub collider: bool,
    pub shielded: bool,
}

/// Vertices on a shortest line-only path between `s` and `t`, or `None`
/// when they are not line-connected.
fn line_path(g: &MixedGraph, s: usize, t: usize) -> Option<VarSet> {
    let mut prev = vec![usize::MAX; g.len()];
    prev[s] = s;
    let mut q = VecDeque::from([s]);
    while let Some(w) = q.pop_front() {
        if w == t {
            let mut set = VarSet::singleton(t);
            let mut x = t;
            while x != s {
                x = prev[x];
                set = set.with(x);
            }
            return Some(set);
        }
        for x in g.line_neighbors(w).iter() {
            if prev[x] == usize::MAX {
                prev[x] = w;
                q.push_back(x);
            }
        }
    }
    None
}

/// All unshielded collider trisections, sorted by `(i, j, s, t)`. Each
/// section is identified by its two ends; its vertex set is one shortest
/// line path between them.
pub fn unshielded_collider_trisections(g: &MixedGraph) -> Vec<Trisection> {
    let k = g.len();
    let mut found = BTreeSet::new();
    for s in 0..k {
        // i *-> s, through a non-line edge
        let into_s: Vec<usize> = g.neighbors(s).iter().filter(|&i| g.head_at(i, s)).collect();
        if into_s.is_empty() {
            continue;
        }
        for t in 0..k {
            if line_path(g, s, t).is_none() {
                continue;
            }
            for &i in &into_s {
                for j in g.neighbors(t).iter().filter(|&j| g.head_at(j, t)) {
                    if i == j || g.adjacent(i, j) {
                        continue;
                    }
                    let tri = if i < j { (i, j, s, t) } else { (j, i, t, s) };
                    found.insert(tri);
                }
            }
        }
    }
    found
        .into_iter()
        .map(|(i, j, s, t)| Trisection {
            i,
            j,
            s,
            t,
            section: line_path(g, s, t).expect("line-connected"),
            collider: true,
            shielded: false,
        })
        .collect()
}
