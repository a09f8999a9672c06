//! Ground sets, subsets, dyads and the node-relabeling action.
//!
//! Every ground set has at most [`MAX_ELEMENTS`] elements so that a subset
//! fits in one `u32`. Bit `k` of a [`VarSet`] is the `k`-th element of the
//! ground set in its fixed order. Node and vector-element identifiers are
//! 1-based.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{invalid, Error, Result};

/// Largest supported ground set.
pub const MAX_ELEMENTS: usize = 32;
/// Largest network whose dyads fit in [`MAX_ELEMENTS`].
pub const MAX_NETWORK_NODES: usize = 8;

/// A subset of a ground set, keyed by element index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarSet(u32);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        VarSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// The set `{0, .., len-1}`.
    pub fn full(len: usize) -> Self {
        debug_assert!(len <= MAX_ELEMENTS);
        if len >= 32 {
            VarSet(u32::MAX)
        } else {
            VarSet((1u32 << len) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        VarSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(VarSet::EMPTY, |s, i| s.with(i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 >> i & 1 == 1
    }

    #[must_use]
    pub fn with(self, i: usize) -> Self {
        VarSet(self.0 | 1 << i)
    }

    #[must_use]
    pub fn without(self, i: usize) -> Self {
        VarSet(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// All subsets of `self` (including the empty set and `self`) in
    /// increasing numeric order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// Non-empty subsets of `self` in increasing numeric order.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = VarSet> {
        self.subsets().skip(1)
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for VarSet {
    type Output = VarSet;
    fn bitor(self, rhs: VarSet) -> VarSet {
        VarSet(self.0 | rhs.0)
    }
}

impl BitAnd for VarSet {
    type Output = VarSet;
    fn bitand(self, rhs: VarSet) -> VarSet {
        VarSet(self.0 & rhs.0)
    }
}

impl BitXor for VarSet {
    type Output = VarSet;
    fn bitxor(self, rhs: VarSet) -> VarSet {
        VarSet(self.0 ^ rhs.0)
    }
}

impl Sub for VarSet {
    type Output = VarSet;
    fn sub(self, rhs: VarSet) -> VarSet {
        VarSet(self.0 & !rhs.0)
    }
}

/// Complement within all 32 bit positions; intersect with a ground set's
/// full set before use.
impl Not for VarSet {
    type Output = VarSet;
    fn not(self) -> VarSet {
        VarSet(!self.0)
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VarSet::from_indices(iter)
    }
}

#[derive(Clone, Debug)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

#[derive(Clone, Debug)]
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = VarSet;
    fn next(&mut self) -> Option<VarSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some(cur.wrapping_sub(self.mask) & self.mask)
        };
        Some(VarSet(cur))
    }
}

/// An unordered pair of network nodes, stored with `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dyad {
    i: u8,
    j: u8,
}

impl Dyad {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(invalid(format!("dyad {a}-{b} has equal endpoints")));
        }
        if a == 0 || b == 0 || a > u8::MAX as usize || b > u8::MAX as usize {
            return Err(invalid(format!("dyad {a}-{b}: node ids are 1-based")));
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        Ok(Dyad {
            i: i as u8,
            j: j as u8,
        })
    }

    pub fn i(self) -> usize {
        self.i as usize
    }

    pub fn j(self) -> usize {
        self.j as usize
    }

    pub fn has_node(self, x: usize) -> bool {
        self.i() == x || self.j() == x
    }

    pub fn shares_node(self, other: Dyad) -> bool {
        other.has_node(self.i()) || other.has_node(self.j())
    }

    fn permuted(self, perm: &NodePermutation) -> Dyad {
        let (a, b) = (perm.apply(self.i()), perm.apply(self.j()));
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        Dyad {
            i: i as u8,
            j: j as u8,
        }
    }
}

impl fmt::Display for Dyad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.i, self.j)
    }
}

impl fmt::Debug for Dyad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyad {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .trim()
            .split_once('-')
            .ok_or_else(|| invalid(format!("bad dyad token {s:?}")))?;
        let a = a
            .parse()
            .map_err(|_| invalid(format!("bad dyad token {s:?}")))?;
        let b = b
            .parse()
            .map_err(|_| invalid(format!("bad dyad token {s:?}")))?;
        Dyad::new(a, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Vector,
    Network,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Vector => "vector",
            Kind::Network => "network",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vector" => Ok(Kind::Vector),
            "network" => Ok(Kind::Network),
            _ => Err(invalid(format!("unknown ground kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Var(u8),
    Dyad(Dyad),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Var(v) => write!(f, "{v}"),
            Element::Dyad(d) => write!(f, "{d}"),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ordered element universe: the indices `1..=n` of a random vector, or
/// dyads of a network on `n` nodes.
///
/// Full ground sets come from [`GroundSet::vector`] and [`dyad_universe`];
/// [`GroundSet::restrict`] produces reduced ones (marginal tables).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    kind: Kind,
    n: usize,
    elements: Vec<Element>,
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} {:?}", self.kind, self.n, self.elements)
    }
}

impl GroundSet {
    pub fn vector(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("vector ground set needs n >= 1"));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::Capacity {
                what: "ground set",
                size: n,
                limit: MAX_ELEMENTS,
            });
        }
        Ok(GroundSet {
            kind: Kind::Vector,
            n,
            elements: (1..=n).map(|v| Element::Var(v as u8)).collect(),
        })
    }

    pub fn new(kind: Kind, n: usize) -> Result<Self> {
        match kind {
            Kind::Vector => GroundSet::vector(n),
            Kind::Network => dyad_universe(n),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Node count for networks, dimension for vectors.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> Element {
        self.elements[idx]
    }

    /// The dyad at `idx`; panics on vector ground sets.
    pub fn dyad(&self, idx: usize) -> Dyad {
        match self.elements[idx] {
            Element::Dyad(d) => d,
            Element::Var(_) => panic!("element {idx} of a vector ground set is not a dyad"),
        }
    }

    pub fn all(&self) -> VarSet {
        VarSet::full(self.len())
    }

    /// True for `1..=n` vectors and complete dyad universes.
    pub fn is_full(&self) -> bool {
        match self.kind {
            Kind::Vector => self.len() == self.n,
            Kind::Network => self.len() == self.n * (self.n - 1) / 2,
        }
    }

    pub fn index_of(&self, e: Element) -> Option<usize> {
        if self.is_full() {
            // lexicographic layout, no search needed
            return match (self.kind, e) {
                (Kind::Vector, Element::Var(v)) => {
                    let v = v as usize;
                    (1..=self.n).contains(&v).then(|| v - 1)
                }
                (Kind::Network, Element::Dyad(d)) => {
                    (d.j() <= self.n).then(|| dyad_index(self.n, d.i(), d.j()))
                }
                _ => None,
            };
        }
        self.elements.iter().position(|&x| x == e)
    }

    pub fn index_of_dyad(&self, a: usize, b: usize) -> Result<usize> {
        let d = Dyad::new(a, b)?;
        self.index_of(Element::Dyad(d))
            .ok_or_else(|| invalid(format!("dyad {d} is not in the ground set")))
    }

    /// Parse one element token (`3` for vectors, `1-2` for networks).
    pub fn parse_element(&self, tok: &str) -> Result<usize> {
        let e = match self.kind {
            Kind::Vector => {
                let v: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| invalid(format!("bad element token {tok:?}")))?;
                if v == 0 || v > u8::MAX as usize {
                    return Err(invalid(format!("element {v} out of range")));
                }
                Element::Var(v as u8)
            }
            Kind::Network => Element::Dyad(tok.parse()?),
        };
        self.index_of(e)
            .ok_or_else(|| invalid(format!("element {tok} is not in the ground set")))
    }

    /// Parse a comma-separated token list; braces are optional.
    pub fn parse_set(&self, s: &str) -> Result<VarSet> {
        let s = s.trim();
        let s = s
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(s);
        let mut out = VarSet::EMPTY;
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            out = out.with(self.parse_element(tok)?);
        }
        Ok(out)
    }

    /// `{a,b,c}` with tokens in ground order.
    pub fn format_set(&self, s: VarSet) -> String {
        format!("{{{}}}", s.iter().map(|i| self.elements[i]).join(","))
    }

    /// The sub-ground set made of the members of `keep`, in the same order.
    pub fn restrict(&self, keep: VarSet) -> GroundSet {
        GroundSet {
            kind: self.kind,
            n: self.n,
            elements: keep.iter().map(|i| self.elements[i]).collect(),
        }
    }

    /// Nodes touched by the dyads in `s` (network) or the element ids in `s`
    /// (vector).
    pub fn nodes_of(&self, s: VarSet) -> Vec<usize> {
        let mut out: Vec<usize> = s
            .iter()
            .flat_map(|k| match self.elements[k] {
                Element::Var(v) => vec![v as usize],
                Element::Dyad(d) => vec![d.i(), d.j()],
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Image of each element index under `perm`, or an error if some image
    /// falls outside this ground set.
    pub fn element_map(&self, perm: &NodePermutation) -> Result<Vec<u8>> {
        if perm.n() != self.n {
            return Err(invalid(format!(
                "permutation over {} nodes applied to a ground set over {}",
                perm.n(),
                self.n
            )));
        }
        self.elements
            .iter()
            .map(|&e| {
                let img = match e {
                    Element::Var(v) => Element::Var(perm.apply(v as usize) as u8),
                    Element::Dyad(d) => Element::Dyad(d.permuted(perm)),
                };
                self.index_of(img)
                    .map(|i| i as u8)
                    .ok_or_else(|| invalid(format!("{e} maps to {img}, outside the ground set")))
            })
            .collect()
    }
}

/// Index of dyad `i-j` (`i < j`) in the lexicographic universe over `n` nodes.
fn dyad_index(n: usize, i: usize, j: usize) -> usize {
    // dyads with first node < i: sum_{a<i} (n - a)
    let before = (i - 1) * n - (i - 1) * i / 2;
    before + (j - i - 1)
}

/// The network ground set over `n` nodes: dyads `1-2, 1-3, .., (n-1)-n`.
pub fn dyad_universe(n: usize) -> Result<GroundSet> {
    if n == 0 {
        return Err(invalid("network needs at least one node"));
    }
    if n > MAX_NETWORK_NODES {
        return Err(Error::Capacity {
            what: "network nodes",
            size: n,
            limit: MAX_NETWORK_NODES,
        });
    }
    let elements = (1..=n)
        .tuple_combinations()
        .map(|(i, j)| {
            Element::Dyad(Dyad {
                i: i as u8,
                j: j as u8,
            })
        })
        .collect();
    Ok(GroundSet {
        kind: Kind::Network,
        n,
        elements,
    })
}

/// A bijection on the nodes `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodePermutation {
    images: Vec<u8>,
}

impl fmt::Debug for NodePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().join(" "))
    }
}

impl NodePermutation {
    /// `images[k]` is the image of node `k + 1`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(invalid(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
            seen[x] = true;
        }
        Ok(NodePermutation {
            images: images.into_iter().map(|x| x as u8).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        NodePermutation {
            images: (1..=n as u8).collect(),
        }
    }

    /// The transposition `(a b)`.
    pub fn swap(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(invalid(format!("swap ({a} {b}) outside 1..={n}")));
        }
        let mut p = NodePermutation::identity(n);
        p.images.swap(a - 1, b - 1);
        Ok(p)
    }

    /// The cycle `1 -> 2 -> .. -> n -> 1`.
    pub fn rotation(n: usize) -> Self {
        NodePermutation {
            images: (1..=n).map(|k| (k % n + 1) as u8).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, node: usize) -> usize {
        self.images[node - 1] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &NodePermutation) -> NodePermutation {
        assert_eq!(
            self.n(),
            other.n(),
            "composing permutations of different degree"
        );
        NodePermutation {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize - 1])
                .collect(),
        }
    }

    pub fn inverse(&self) -> NodePermutation {
        let mut inv = vec![0u8; self.n()];
        for (k, &x) in self.images.iter().enumerate() {
            inv[x as usize - 1] = (k + 1) as u8;
        }
        NodePermutation { images: inv }
    }

    /// Every permutation of `1..=n`, identity first.
    pub fn all(n: usize) -> impl Iterator<Item = NodePermutation> {
        (1..=n as u8)
            .permutations(n)
            .map(|images| NodePermutation { images })
    }

    /// A generating set of the symmetric group: a transposition and an
    /// `n`-cycle (empty when `n < 2`).
    pub fn generators(n: usize) -> Vec<NodePermutation> {
        match n {
            0 | 1 => Vec::new(),
            2 => vec![NodePermutation::rotation(2)],
            _ => vec![
                NodePermutation::swap(n, 1, 2).expect("n >= 2"),
                NodePermutation::rotation(n),
            ],
        }
    }
}

/// Apply a node relabeling to a subset of `g`.
pub fn act(perm: &NodePermutation, s: VarSet, g: &GroundSet) -> Result<VarSet> {
    if !s.is_subset(g.all()) {
        return Err(invalid("set has members outside the ground set"));
    }
    let map = g.element_map(perm)?;
    Ok(map_set(&map, s))
}

/// Apply a precomputed element map (see [`GroundSet::element_map`]).
pub fn map_set(map: &[u8], s: VarSet) -> VarSet {
    s.iter().map(|i| map[i] as usize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyad_universe_orders_lexicographically() {
        let g = dyad_universe(4).unwrap();
        let names: Vec<String> = g.elements().iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["1-2", "1-3", "1-4", "2-3", "2-4", "3-4"]);
        assert_eq!(dyad_universe(2).unwrap().len(), 1);
        let g5 = dyad_universe(5).unwrap();
        assert_eq!(g5.len(), 10);
        assert_eq!(g5.element(0).to_string(), "1-2");
        assert_eq!(g5.element(9).to_string(), "4-5");
        assert!(g5.elements().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dyad_universe_rejects_bad_sizes() {
        assert!(matches!(dyad_universe(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(dyad_universe(9), Err(Error::Capacity { .. })));
        assert_eq!(dyad_universe(8).unwrap().len(), 28);
    }

    #[test]
    fn index_of_matches_position() {
        for n in 2..=8 {
            let g = dyad_universe(n).unwrap();
            for (k, &e) in g.elements().iter().enumerate() {
                assert_eq!(g.index_of(e), Some(k));
            }
        }
    }

    #[test]
    fn act_examples() {
        let g = dyad_universe(4).unwrap();
        let s = g.parse_set("{1-3}").unwrap();
        let p = NodePermutation::swap(4, 1, 2).unwrap();
        assert_eq!(g.format_set(act(&p, s, &g).unwrap()), "{2-3}");

        let s = g.parse_set("1-2,3-4").unwrap();
        let p = NodePermutation::swap(4, 3, 4).unwrap();
        assert_eq!(act(&p, s, &g).unwrap(), s);
        assert_eq!(act(&NodePermutation::identity(4), s, &g).unwrap(), s);
    }

    #[test]
    fn act_rejects_foreign_elements() {
        let g = dyad_universe(3).unwrap();
        assert!(act(&NodePermutation::identity(3), VarSet::singleton(5), &g).is_err());
        assert!(act(&NodePermutation::identity(4), VarSet::singleton(0), &g).is_err());
    }

    #[test]
    fn act_is_a_group_action_exhaustively() {
        for n in 2..=5 {
            let g = dyad_universe(n).unwrap();
            let perms: Vec<_> = NodePermutation::all(n).collect();
            let maps: Vec<_> = perms.iter().map(|p| g.element_map(p).unwrap()).collect();
            for (a, sigma) in perms.iter().enumerate() {
                for (b, tau) in perms.iter().enumerate() {
                    let comp = g.element_map(&sigma.compose(tau)).unwrap();
                    for s in g.all().subsets() {
                        let lhs = map_set(&comp, s);
                        let rhs = map_set(&maps[a], map_set(&maps[b], s));
                        assert_eq!(lhs, rhs);
                        assert_eq!(lhs.len(), s.len());
                    }
                }
            }
        }
    }

    #[test]
    fn permutation_inverse_and_generators() {
        for p in NodePermutation::all(4) {
            assert_eq!(p.compose(&p.inverse()), NodePermutation::identity(4));
        }
        assert_eq!(NodePermutation::rotation(3).apply(3), 1);
        assert!(NodePermutation::new(vec![1, 1, 2]).is_err());
    }

    #[test]
    fn subsets_enumerate_in_increasing_order() {
        let m = VarSet::from_bits(0b1011);
        let all: Vec<u32> = m.subsets().map(VarSet::bits).collect();
        assert_eq!(all, [0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(VarSet::EMPTY.subsets().count(), 1);
        assert_eq!(VarSet::full(32).len(), 32);
    }

    #[test]
    fn set_parsing_round_trips() {
        let g = dyad_universe(5).unwrap();
        let s = g.parse_set("{3-4, 2-1 ,4-5}").unwrap();
        assert_eq!(g.format_set(s), "{1-2,3-4,4-5}");
        assert_eq!(g.parse_set("{}").unwrap(), VarSet::EMPTY);
        assert!(g.parse_set("{1-6}").is_err());
        let v = GroundSet::vector(4).unwrap();
        assert_eq!(v.format_set(v.parse_set("4,1").unwrap()), "{1,4}");
    }
}
