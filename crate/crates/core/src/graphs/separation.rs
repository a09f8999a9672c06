//! Separation by connecting walks.
//!
//! A walk decomposes into sections, maximal runs of lines. A section is a
//! collider when both walk edges around it carry an arrowhead at it. A walk
//! connects given `C` when every collider section meets `C` and every other
//! section avoids `C`.
//!
//! Walks may repeat vertices, so the search runs over a finite state space:
//! the current vertex plus what is known about the current section.

use super::MixedGraph;
use crate::error::{invalid, Result};
use crate::ground::VarSet;

/// Where the walk stands inside its current section.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Entered without an arrowhead (or the first section): the section can
    /// never be a collider and must avoid `C`.
    Free = 0,
    /// Entered with an arrowhead, no vertex in `C` so far.
    HeadOpen = 1,
    /// Entered with an arrowhead, some vertex in `C` already.
    HeadHit = 2,
}

/// Whether `C` separates `A` and `B` in `g`. `A` and `B` must be non-empty;
/// all three must be pairwise disjoint.
pub fn separates(g: &MixedGraph, a: VarSet, b: VarSet, c: VarSet) -> Result<bool> {
    let all = g.ground().all();
    if !(a | b | c).is_subset(all) {
        return Err(invalid("vertex set outside the graph"));
    }
    if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
        return Err(invalid("separation sets must be pairwise disjoint"));
    }
    if a.is_empty() || b.is_empty() {
        return Err(invalid("separation needs non-empty A and B"));
    }
    Ok(!connected(g, a, b, c))
}

pub(crate) fn separates_pair(g: &MixedGraph, u: usize, v: usize, c: VarSet) -> bool {
    !connected(g, VarSet::singleton(u), VarSet::singleton(v), c)
}

fn connected(g: &MixedGraph, a: VarSet, b: VarSet, c: VarSet) -> bool {
    let k = g.len();
    let mut seen = vec![[false; 3]; k];
    let mut stack: Vec<(usize, Mode)> = Vec::with_capacity(3 * k);
    for s in a.iter() {
        seen[s][Mode::Free as usize] = true;
        stack.push((s, Mode::Free));
    }
    let visit = |x: usize, m: Mode, seen: &mut Vec<[bool; 3]>, stack: &mut Vec<(usize, Mode)>| {
        if !seen[x][m as usize] {
            seen[x][m as usize] = true;
            stack.push((x, m));
        }
    };
    while let Some((w, mode)) = stack.pop() {
        if b.contains(w) && mode != Mode::HeadHit {
            return true;
        }
        for x in g.neighbors(w).iter() {
            let head_at_w = g.head_at(x, w);
            let head_at_x = g.head_at(w, x);
            if !head_at_w && !head_at_x {
                // a line keeps the walk inside the section
                let next = match (mode, c.contains(x)) {
                    (Mode::Free, true) => continue,
                    (Mode::Free, false) => Mode::Free,
                    (Mode::HeadOpen, true) => Mode::HeadHit,
                    (Mode::HeadOpen, false) => Mode::HeadOpen,
                    (Mode::HeadHit, _) => Mode::HeadHit,
                };
                visit(x, next, &mut seen, &mut stack);
                continue;
            }
            // leaving the section at w
            let collider = head_at_w && mode != Mode::Free;
            let ok = if collider {
                mode == Mode::HeadHit
            } else {
                mode != Mode::HeadHit
            };
            if !ok {
                continue;
            }
            let next = match (head_at_x, c.contains(x)) {
                (true, true) => Mode::HeadHit,
                (true, false) => Mode::HeadOpen,
                (false, true) => continue,
                (false, false) => Mode::Free,
            };
            visit(x, next, &mut seen, &mut stack);
        }
    }
    false
}
