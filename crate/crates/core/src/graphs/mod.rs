//! Simple mixed graphs over a ground set, the canonical families built on
//! dyads, and the independence models they induce.

mod separation;
mod separators;
mod trisection;

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::ground::{dyad_universe, GroundSet, NodePermutation, VarSet};
use crate::imodel::IndependenceModel;

pub use separation::separates;
pub use separators::{
    c_ij, c_ijkl, c_j, cd_ij, cd_ijk, enumerate_separators, is_separator, SeparatorList,
    SeparatorMode,
};
pub use trisection::{unshielded_collider_trisections, Trisection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// `u — v`, no arrowheads.
    Line,
    /// `u ↔ v`, arrowheads at both ends.
    Arc,
    /// `u → v`, arrowhead at the second endpoint.
    Arrow,
}

/// A simple graph whose edges are lines, arcs or arrows.
///
/// `head[u]` contains `v` iff the edge between `u` and `v` carries an
/// arrowhead at `v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    ground: GroundSet,
    adj: Vec<VarSet>,
    head: Vec<VarSet>,
}

impl fmt::Debug for MixedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for (u, v, kind) in self.edges() {
            let (a, b) = (self.ground.element(u), self.ground.element(v));
            let sym = match kind {
                EdgeKind::Line => "--",
                EdgeKind::Arc => "<->",
                EdgeKind::Arrow => "->",
            };
            l.entry(&format_args!("{a} {sym} {b}"));
        }
        l.finish()
    }
}

impl MixedGraph {
    pub fn empty(ground: GroundSet) -> Self {
        let k = ground.len();
        MixedGraph {
            ground,
            adj: vec![VarSet::EMPTY; k],
            head: vec![VarSet::EMPTY; k],
        }
    }

    /// Every pair joined by an edge of `kind` (arrows point from the lower
    /// index to the higher).
    pub fn complete(ground: GroundSet, kind: EdgeKind) -> Self {
        let mut g = MixedGraph::empty(ground);
        let k = g.len();
        for u in 0..k {
            for v in u + 1..k {
                g.add_edge(u, v, kind).expect("fresh pair");
            }
        }
        g
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn add_edge(&mut self, u: usize, v: usize, kind: EdgeKind) -> Result<()> {
        let k = self.len();
        if u >= k || v >= k {
            return Err(invalid(format!("edge ({u},{v}) outside {k} vertices")));
        }
        if u == v {
            return Err(invalid("loops are not allowed"));
        }
        if self.adj[u].contains(v) {
            return Err(invalid(format!(
                "vertices {} and {} are already adjacent",
                self.ground.element(u),
                self.ground.element(v)
            )));
        }
        self.adj[u] = self.adj[u].with(v);
        self.adj[v] = self.adj[v].with(u);
        match kind {
            EdgeKind::Line => {}
            EdgeKind::Arc => {
                self.head[u] = self.head[u].with(v);
                self.head[v] = self.head[v].with(u);
            }
            EdgeKind::Arrow => self.head[u] = self.head[u].with(v),
        }
        Ok(())
    }

    pub fn add_line(&mut self, u: usize, v: usize) -> Result<()> {
        self.add_edge(u, v, EdgeKind::Line)
    }

    pub fn neighbors(&self, u: usize) -> VarSet {
        self.adj[u]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Whether the edge `u v` has an arrowhead at `v`.
    pub fn head_at(&self, u: usize, v: usize) -> bool {
        self.head[u].contains(v)
    }

    /// Neighbours joined to `u` by a line.
    pub fn line_neighbors(&self, u: usize) -> VarSet {
        let mut out = VarSet::EMPTY;
        for v in self.adj[u].iter() {
            if !self.head[u].contains(v) && !self.head[v].contains(u) {
                out = out.with(v);
            }
        }
        out
    }

    pub fn edge_kind(&self, u: usize, v: usize) -> Option<EdgeKind> {
        if !self.adjacent(u, v) {
            return None;
        }
        Some(match (self.head[u].contains(v), self.head[v].contains(u)) {
            (false, false) => EdgeKind::Line,
            (true, true) => EdgeKind::Arc,
            _ => EdgeKind::Arrow,
        })
    }

    /// Edges as `(u, v, kind)`; lines and arcs have `u < v`, arrows point
    /// from `u` to `v`. Sorted by the unordered pair.
    pub fn edges(&self) -> Vec<(usize, usize, EdgeKind)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                let kind = self.edge_kind(u, v).unwrap();
                if kind == EdgeKind::Arrow && self.head[v].contains(u) {
                    out.push((v, u, kind));
                } else {
                    out.push((u, v, kind));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn is_undirected(&self) -> bool {
        self.head.iter().all(|h| h.is_empty())
    }

    pub fn is_bidirected(&self) -> bool {
        (0..self.len()).all(|u| self.head[u] == self.adj[u])
    }

    /// Strip all arrowheads.
    pub fn skeleton(&self) -> MixedGraph {
        MixedGraph {
            ground: self.ground.clone(),
            adj: self.adj.clone(),
            head: vec![VarSet::EMPTY; self.len()],
        }
    }

    /// Same skeleton with every edge replaced by `kind` (lines or arcs).
    pub fn with_kind(&self, kind: EdgeKind) -> Result<MixedGraph> {
        let head = match kind {
            EdgeKind::Line => vec![VarSet::EMPTY; self.len()],
            EdgeKind::Arc => self.adj.clone(),
            EdgeKind::Arrow => return Err(invalid("uniform edge kind must be line or arc")),
        };
        Ok(MixedGraph {
            ground: self.ground.clone(),
            adj: self.adj.clone(),
            head,
        })
    }

    /// Relabel vertices through a node permutation of the ground set.
    pub fn permuted(&self, perm: &NodePermutation) -> Result<MixedGraph> {
        let map = self.ground.element_map(perm)?;
        let k = self.len();
        let mut g = MixedGraph::empty(self.ground.clone());
        for u in 0..k {
            let pu = map[u] as usize;
            g.adj[pu] = crate::ground::map_set(&map, self.adj[u]);
            g.head[pu] = crate::ground::map_set(&map, self.head[u]);
        }
        Ok(g)
    }

    /// Whether every non-adjacent pair has some separating set.
    pub fn is_maximal(&self) -> bool {
        let all = self.ground.all();
        (0..self.len()).all(|u| {
            (u + 1..self.len()).all(|v| {
                self.adjacent(u, v)
                    || (all.without(u).without(v))
                        .subsets()
                        .any(|c| separation::separates_pair(self, u, v, c))
            })
        })
    }
}

/// The incidence graph over the dyads of `n` nodes: two dyads are adjacent
/// iff they share a node. `kind` is line or arc.
pub fn incidence_graph(n: usize, kind: EdgeKind) -> Result<MixedGraph> {
    if n < 2 {
        return Err(invalid("incidence graph needs n >= 2"));
    }
    if kind == EdgeKind::Arrow {
        return Err(invalid("incidence graph edges must be lines or arcs"));
    }
    let ground = dyad_universe(n)?;
    let mut g = MixedGraph::empty(ground);
    let k = g.len();
    for u in 0..k {
        for v in u + 1..k {
            if g.ground.dyad(u).shares_node(g.ground.dyad(v)) {
                g.add_edge(u, v, kind)?;
            }
        }
    }
    Ok(g)
}

/// Same vertices; adjacent iff not adjacent in `g`. `kind` is line or arc.
pub fn complement_graph(g: &MixedGraph, kind: EdgeKind) -> Result<MixedGraph> {
    if kind == EdgeKind::Arrow {
        return Err(invalid("complement edges must be lines or arcs"));
    }
    let mut h = MixedGraph::empty(g.ground.clone());
    let k = g.len();
    for u in 0..k {
        for v in u + 1..k {
            if !g.adjacent(u, v) {
                h.add_edge(u, v, kind)?;
            }
        }
    }
    Ok(h)
}

/// Elementary separation statements of `g`.
pub fn induced_model(g: &MixedGraph) -> Result<IndependenceModel> {
    IndependenceModel::from_fn(g.ground.clone(), |u, v, c| {
        separation::separates_pair(g, u, v, c)
    })
}

pub fn markov_equivalent(g: &MixedGraph, h: &MixedGraph) -> Result<bool> {
    if g.ground != h.ground {
        return Err(invalid("graphs have different vertex sets"));
    }
    Ok(induced_model(g)? == induced_model(h)?)
}

/// The six canonical graphs over dyads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphFamily {
    Empty,
    Complete,
    IncidenceUndirected,
    IncidenceBidirected,
    ComplementUndirected,
    ComplementBidirected,
}

impl GraphFamily {
    pub const ALL: [GraphFamily; 6] = [
        GraphFamily::Empty,
        GraphFamily::Complete,
        GraphFamily::IncidenceUndirected,
        GraphFamily::IncidenceBidirected,
        GraphFamily::ComplementUndirected,
        GraphFamily::ComplementBidirected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphFamily::Empty => "empty",
            GraphFamily::Complete => "complete",
            GraphFamily::IncidenceUndirected => "L-",
            GraphFamily::IncidenceBidirected => "Lbi",
            GraphFamily::ComplementUndirected => "Lc-",
            GraphFamily::ComplementBidirected => "Lcbi",
        }
    }

    pub fn build(self, n: usize) -> Result<MixedGraph> {
        if n < 2 {
            return Err(invalid("graph families need n >= 2"));
        }
        match self {
            GraphFamily::Empty => Ok(MixedGraph::empty(dyad_universe(n)?)),
            GraphFamily::Complete => Ok(MixedGraph::complete(dyad_universe(n)?, EdgeKind::Line)),
            GraphFamily::IncidenceUndirected => incidence_graph(n, EdgeKind::Line),
            GraphFamily::IncidenceBidirected => incidence_graph(n, EdgeKind::Arc),
            GraphFamily::ComplementUndirected => {
                complement_graph(&incidence_graph(n, EdgeKind::Line)?, EdgeKind::Line)
            }
            GraphFamily::ComplementBidirected => {
                complement_graph(&incidence_graph(n, EdgeKind::Line)?, EdgeKind::Arc)
            }
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GraphFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| invalid(format!("unknown graph family {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_graph_of_four_nodes() {
        let g = incidence_graph(4, EdgeKind::Line).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.edge_count(), 12);
        assert!((0..6).all(|u| g.degree(u) == 4));
        let c = complement_graph(&g, EdgeKind::Line).unwrap();
        let pairs: Vec<String> = c
            .edges()
            .into_iter()
            .map(|(u, v, _)| format!("{}~{}", g.ground().element(u), g.ground().element(v)))
            .collect();
        assert_eq!(pairs, ["1-2~3-4", "1-3~2-4", "1-4~2-3"]);
    }

    #[test]
    fn incidence_graph_small_and_arc() {
        let g = incidence_graph(2, EdgeKind::Line).unwrap();
        assert_eq!((g.len(), g.edge_count()), (1, 0));
        let g = incidence_graph(5, EdgeKind::Arc).unwrap();
        assert_eq!(g.len(), 10);
        assert!((0..10).all(|u| g.degree(u) == 6));
        assert!(g.edges().iter().all(|e| e.2 == EdgeKind::Arc));
        assert!(g.is_bidirected());
        assert!(incidence_graph(1, EdgeKind::Line).is_err());
    }

    #[test]
    fn complement_involution_and_empty() {
        let g = incidence_graph(5, EdgeKind::Line).unwrap();
        let cc = complement_graph(
            &complement_graph(&g, EdgeKind::Line).unwrap(),
            EdgeKind::Line,
        )
        .unwrap();
        assert_eq!(cc, g);
        let e = MixedGraph::empty(GroundSet::vector(4).unwrap());
        assert_eq!(
            complement_graph(&e, EdgeKind::Line).unwrap().edge_count(),
            6
        );
    }

    #[test]
    fn simple_graph_rules() {
        let mut g = MixedGraph::empty(GroundSet::vector(3).unwrap());
        g.add_edge(0, 1, EdgeKind::Arrow).unwrap();
        assert!(g.add_edge(1, 0, EdgeKind::Line).is_err());
        assert!(g.add_edge(2, 2, EdgeKind::Line).is_err());
        assert_eq!(g.edges(), [(0, 1, EdgeKind::Arrow)]);
        g.add_edge(2, 1, EdgeKind::Arrow).unwrap();
        assert_eq!(g.edges()[1], (2, 1, EdgeKind::Arrow));
        assert!(g.head_at(2, 1) && !g.head_at(1, 2));
        assert_eq!(g.skeleton().edges()[1].2, EdgeKind::Line);
    }

    #[test]
    fn families_parse_and_build() {
        for f in GraphFamily::ALL {
            assert_eq!(f.name().parse::<GraphFamily>().unwrap(), f);
            assert_eq!(f.build(4).unwrap().len(), 6);
        }
        assert_eq!(GraphFamily::Complete.build(4).unwrap().edge_count(), 15);
        assert!("L+".parse::<GraphFamily>().is_err());
    }

    #[test]
    fn markov_equivalence_examples() {
        let lu = incidence_graph(4, EdgeKind::Line).unwrap();
        let lb = incidence_graph(4, EdgeKind::Arc).unwrap();
        assert!(markov_equivalent(&lu, &lu).unwrap());
        assert!(!markov_equivalent(&lu, &lb).unwrap());
        let other = MixedGraph::empty(GroundSet::vector(6).unwrap());
        assert!(markov_equivalent(&lu, &other).is_err());
    }

    #[test]
    fn induced_model_extremes() {
        let g = MixedGraph::empty(GroundSet::vector(3).unwrap());
        assert_eq!(induced_model(&g).unwrap().len(), 6);
        let g = MixedGraph::complete(GroundSet::vector(3).unwrap(), EdgeKind::Line);
        assert!(induced_model(&g).unwrap().is_empty());
    }

    #[test]
    fn permuting_families_is_an_automorphism() {
        let g = incidence_graph(5, EdgeKind::Line).unwrap();
        for p in NodePermutation::all(5).step_by(7) {
            assert_eq!(g.permuted(&p).unwrap(), g);
        }
    }
}
