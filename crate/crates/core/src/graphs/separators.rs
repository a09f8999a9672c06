//! Exhaustive separator enumeration and the named separator families over
//! dyads.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::separation::separates_pair;
use super::MixedGraph;
use crate::error::{invalid, Error, Result};
use crate::ground::{GroundSet, Kind, VarSet};
use crate::imodel::squeeze;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeparatorMode {
    /// Separators from which no single vertex can be removed.
    Minimal,
    /// Separators to which no single vertex can be added.
    Maximal,
    All,
}

impl FromStr for SeparatorMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(SeparatorMode::Minimal),
            "maximal" => Ok(SeparatorMode::Maximal),
            "all" => Ok(SeparatorMode::All),
            _ => Err(invalid(format!("unknown separator mode {s:?}"))),
        }
    }
}

impl fmt::Display for SeparatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeparatorMode::Minimal => "minimal",
            SeparatorMode::Maximal => "maximal",
            SeparatorMode::All => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorList {
    /// The two vertices are adjacent, so nothing separates them.
    pub adjacent: bool,
    /// Sorted by size, then by bit encoding.
    pub sets: Vec<VarSet>,
}

/// Whether `C` separates the single vertices `u` and `v`.
pub fn is_separator(g: &MixedGraph, u: usize, v: usize, c: VarSet) -> bool {
    separates_pair(g, u, v, c)
}

/// All `C ⊆ V∖{u,v}` separating `u` and `v`, optionally filtered to the
/// minimal or maximal ones.
pub fn enumerate_separators(
    g: &MixedGraph,
    u: usize,
    v: usize,
    mode: SeparatorMode,
) -> Result<SeparatorList> {
    let k = g.len();
    if u >= k || v >= k || u == v {
        return Err(invalid(format!("bad vertex pair ({u},{v})")));
    }
    if g.adjacent(u, v) {
        return Ok(SeparatorList {
            adjacent: true,
            sets: Vec::new(),
        });
    }
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    let rest = g.ground().all().without(u).without(v);
    let subsets: Vec<VarSet> = rest.subsets().collect();
    // separating[squeeze(C)], in subset order
    let separating: Vec<bool> = subsets
        .par_iter()
        .map(|&c| separates_pair(g, u, v, c))
        .collect();
    let sep = |c: VarSet| separating[squeeze(c.bits(), lo, hi) as usize];
    let mut sets: Vec<VarSet> = subsets
        .iter()
        .copied()
        .filter(|&c| sep(c))
        .filter(|&c| match mode {
            SeparatorMode::All => true,
            SeparatorMode::Minimal => c.iter().all(|w| !sep(c.without(w))),
            SeparatorMode::Maximal => (rest - c).iter().all(|w| !sep(c.with(w))),
        })
        .collect();
    sets.sort_by_key(|c| (c.len(), c.bits()));
    Ok(SeparatorList {
        adjacent: false,
        sets,
    })
}

fn network(g: &GroundSet) -> Result<()> {
    if g.kind() != Kind::Network || !g.is_full() {
        return Err(invalid("separator families need a full dyad ground set"));
    }
    Ok(())
}

fn check_nodes(g: &GroundSet, nodes: &[usize]) -> Result<()> {
    for (x, &a) in nodes.iter().enumerate() {
        if a == 0 || a > g.n() {
            return Err(invalid(format!("node {a} outside 1..={}", g.n())));
        }
        if nodes[..x].contains(&a) {
            return Err(invalid(format!("node {a} repeated")));
        }
    }
    Ok(())
}

fn dyads_where(g: &GroundSet, keep: impl Fn(usize, usize) -> bool) -> VarSet {
    (0..g.len())
        .filter(|&e| {
            let d = g.dyad(e);
            keep(d.i(), d.j())
        })
        .collect()
}

/// `{ik, il, jk, jl}`.
pub fn c_ijkl(g: &GroundSet, i: usize, j: usize, k: usize, l: usize) -> Result<VarSet> {
    network(g)?;
    check_nodes(g, &[i, j, k, l])?;
    [(i, k), (i, l), (j, k), (j, l)]
        .into_iter()
        .map(|(a, b)| g.index_of_dyad(a, b))
        .collect()
}

/// `{ir, jr : r ≠ i, j}`: dyads touching exactly one of `i`, `j`.
pub fn c_ij(g: &GroundSet, i: usize, j: usize) -> Result<VarSet> {
    network(g)?;
    check_nodes(g, &[i, j])?;
    let touches = |x: usize| x == i || x == j;
    Ok(dyads_where(g, |a, b| touches(a) != touches(b)))
}

/// `{lm : l, m ∉ {i, j}}`.
pub fn cd_ij(g: &GroundSet, i: usize, j: usize) -> Result<VarSet> {
    network(g)?;
    check_nodes(g, &[i, j])?;
    Ok(dyads_where(g, |a, b| {
        ![i, j].contains(&a) && ![i, j].contains(&b)
    }))
}

/// `{jr : r ≠ j}`.
pub fn c_j(g: &GroundSet, j: usize) -> Result<VarSet> {
    network(g)?;
    check_nodes(g, &[j])?;
    Ok(dyads_where(g, |a, b| a == j || b == j))
}

/// `{lm : l, m ∉ {i, j, k}}`.
pub fn cd_ijk(g: &GroundSet, i: usize, j: usize, k: usize) -> Result<VarSet> {
    network(g)?;
    check_nodes(g, &[i, j, k])?;
    let out = [i, j, k];
    Ok(dyads_where(g, |a, b| {
        !out.contains(&a) && !out.contains(&b)
    }))
}
