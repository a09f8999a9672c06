//! Independence statements and models over a ground set.
//!
//! A model stores only elementary statements `⟨u,v|C⟩` (singleton sides).
//! A general statement `⟨A,B|C⟩` holds iff every `⟨u,v|C∪A'∪B'⟩` with
//! `u∈A`, `v∈B`, `A'⊆A∖u`, `B'⊆B∖v` is stored. Statements with an empty side
//! always hold and are never stored.

mod closure;
mod properties;

use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::graphs::MixedGraph;
use crate::ground::{GroundSet, VarSet};

pub use closure::{closure_with, semigraphoid_closure, Rule};
pub(crate) use properties::first_violation_message;
pub use properties::{
    check_property, is_semigraphoid, Evaluator, Property, PropertyReport, Witness,
    GENERAL_CHECK_CAPACITY,
};

/// Largest ground set a model can be built over. The elementary statement
/// space has `C(k,2)·2^(k-2)` slots; at 21 elements that is 13 MiB of bits.
pub const MODEL_CAPACITY: usize = 21;

/// A statement `⟨A,B|C⟩` with pairwise disjoint sides, normalized so that
/// `A` has the smaller bit encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Statement {
    pub a: VarSet,
    pub b: VarSet,
    pub c: VarSet,
}

impl Statement {
    pub fn new(a: VarSet, b: VarSet, c: VarSet) -> Result<Self> {
        if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
            return Err(invalid("statement sides must be pairwise disjoint"));
        }
        let (a, b) = if a.bits() <= b.bits() { (a, b) } else { (b, a) };
        Ok(Statement { a, b, c })
    }

    /// The elementary statement `⟨u,v|C⟩`.
    pub fn elementary(u: usize, v: usize, c: VarSet) -> Self {
        Statement::new(VarSet::singleton(u), VarSet::singleton(v), c)
            .expect("elementary statement with overlapping sides")
    }

    pub fn is_trivial(&self) -> bool {
        self.a.is_empty() || self.b.is_empty()
    }

    pub fn is_elementary(&self) -> bool {
        self.a.len() == 1 && self.b.len() == 1
    }

    /// Renders as `{a} ⊥ {b} | {c}` using the ground set's tokens.
    pub fn display<'a>(&'a self, g: &'a GroundSet) -> impl fmt::Display + 'a {
        StatementDisplay { s: self, g }
    }
}

struct StatementDisplay<'a> {
    s: &'a Statement,
    g: &'a GroundSet,
}

impl fmt::Display for StatementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ⊥ {} | {}",
            self.g.format_set(self.s.a),
            self.g.format_set(self.s.b),
            self.g.format_set(self.s.c)
        )
    }
}

/// Index of the unordered pair `u < v` among all pairs of `0..k`.
#[inline]
fn pair_index(k: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < k);
    u * (2 * k - u - 1) / 2 + (v - u - 1)
}

/// Remove bit positions `u < v` from `c`, shifting higher bits down.
#[inline]
pub(crate) fn squeeze(c: u32, u: usize, v: usize) -> u32 {
    let low = c & ((1u32 << u) - 1);
    let mid = (c >> (u + 1)) & ((1u32 << (v - u - 1)) - 1);
    let high = ((c as u64) >> (v + 1)) as u32;
    low | mid << u | ((high as u64) << (v - 1)) as u32
}

/// Inverse of [`squeeze`]: insert zero bits at positions `u < v`.
#[inline]
pub(crate) fn unsqueeze(s: u32, u: usize, v: usize) -> u32 {
    let low = s & ((1u32 << u) - 1);
    let mid = (s >> u) & ((1u32 << (v - u - 1)) - 1);
    let high = ((s as u64) >> (v - 1)) as u32;
    low | mid << (u + 1) | ((high as u64) << (v + 1)) as u32
}

/// A set of elementary statements over a ground set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndependenceModel {
    ground: GroundSet,
    k: usize,
    words: Vec<u64>,
}

impl fmt::Debug for IndependenceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for s in self.iter() {
            l.entry(&format_args!("{}", s.display(&self.ground)));
        }
        l.finish()
    }
}

impl IndependenceModel {
    /// The model with no non-trivial statements.
    pub fn new(ground: GroundSet) -> Result<Self> {
        let k = ground.len();
        if k > MODEL_CAPACITY {
            return Err(Error::Capacity {
                what: "independence model elements",
                size: k,
                limit: MODEL_CAPACITY,
            });
        }
        let slots = Self::slot_count(k);
        Ok(IndependenceModel {
            ground,
            k,
            words: vec![0; slots.div_ceil(64)],
        })
    }

    /// The model containing every elementary statement.
    pub fn full(ground: GroundSet) -> Result<Self> {
        let mut m = IndependenceModel::new(ground)?;
        let slots = Self::slot_count(m.k);
        for w in m.words.iter_mut() {
            *w = u64::MAX;
        }
        if slots % 64 != 0 {
            if let Some(last) = m.words.last_mut() {
                *last = (1u64 << (slots % 64)) - 1;
            }
        }
        Ok(m)
    }

    /// Build a model by evaluating `f(u, v, C)` on every elementary slot
    /// (`u < v`, `C ⊆ V∖{u,v}`). Pairs are evaluated in parallel.
    pub fn from_fn<F>(ground: GroundSet, f: F) -> Result<Self>
    where
        F: Fn(usize, usize, VarSet) -> bool + Sync,
    {
        use rayon::prelude::*;
        let mut m = IndependenceModel::new(ground)?;
        let k = m.k;
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
            .collect();
        let blocks: Vec<Vec<u32>> = pairs
            .par_iter()
            .map(|&(u, v)| {
                let rest = m.ground.all().without(u).without(v);
                rest.subsets()
                    .filter(|&c| f(u, v, c))
                    .map(|c| c.bits())
                    .collect()
            })
            .collect();
        for (&(u, v), block) in pairs.iter().zip(blocks) {
            for c in block {
                m.set_slot(m.slot(u, v, VarSet::from_bits(c)));
            }
        }
        Ok(m)
    }

    fn slot_count(k: usize) -> usize {
        if k < 2 {
            0
        } else {
            k * (k - 1) / 2 << (k - 2)
        }
    }

    #[inline]
    fn slot(&self, u: usize, v: usize, c: VarSet) -> usize {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        pair_index(self.k, u, v) << (self.k - 2) | squeeze(c.bits(), u, v) as usize
    }

    #[inline]
    fn get_slot(&self, s: usize) -> bool {
        self.words[s / 64] >> (s % 64) & 1 == 1
    }

    #[inline]
    fn set_slot(&mut self, s: usize) -> bool {
        let w = &mut self.words[s / 64];
        let bit = 1u64 << (s % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// Number of stored elementary statements.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn check_elementary(&self, u: usize, v: usize, c: VarSet) -> Result<()> {
        if u == v || u >= self.k || v >= self.k {
            return Err(invalid(format!("bad elementary pair ({u},{v})")));
        }
        if c.contains(u) || c.contains(v) || !c.is_subset(self.ground.all()) {
            return Err(invalid(
                "conditioning set overlaps the pair or leaves the ground set",
            ));
        }
        Ok(())
    }

    /// Membership of the elementary statement `⟨u,v|C⟩`. The caller
    /// guarantees `u ≠ v` and `C ∩ {u,v} = ∅`.
    #[inline]
    pub fn contains(&self, u: usize, v: usize, c: VarSet) -> bool {
        debug_assert!(u != v && !c.contains(u) && !c.contains(v));
        self.get_slot(self.slot(u, v, c))
    }

    /// Store `⟨u,v|C⟩`; returns whether it was new.
    pub fn insert(&mut self, u: usize, v: usize, c: VarSet) -> Result<bool> {
        self.check_elementary(u, v, c)?;
        let s = self.slot(u, v, c);
        Ok(self.set_slot(s))
    }

    #[inline]
    pub(crate) fn insert_unchecked(&mut self, u: usize, v: usize, c: VarSet) -> bool {
        let s = self.slot(u, v, c);
        self.set_slot(s)
    }

    pub fn remove(&mut self, u: usize, v: usize, c: VarSet) -> Result<bool> {
        self.check_elementary(u, v, c)?;
        let s = self.slot(u, v, c);
        let had = self.get_slot(s);
        self.words[s / 64] &= !(1u64 << (s % 64));
        Ok(had)
    }

    /// Add a general statement by storing its elementary expansion.
    pub fn add(&mut self, st: Statement) -> Result<()> {
        self.validate(st)?;
        if st.is_trivial() {
            return Ok(());
        }
        let ab = st.a | st.b;
        for u in st.a.iter() {
            for v in st.b.iter() {
                for t in (ab.without(u).without(v)).subsets() {
                    self.insert_unchecked(u, v, st.c | t);
                }
            }
        }
        Ok(())
    }

    fn validate(&self, st: Statement) -> Result<()> {
        let all = self.ground.all();
        if !(st.a | st.b | st.c).is_subset(all) {
            return Err(invalid(
                "statement mentions elements outside the ground set",
            ));
        }
        if !st.a.is_disjoint(st.b) || !st.a.is_disjoint(st.c) || !st.b.is_disjoint(st.c) {
            return Err(invalid("statement sides must be pairwise disjoint"));
        }
        Ok(())
    }

    /// Whether `⟨A,B|C⟩` holds under the elementary-reduction semantics.
    pub fn holds(&self, a: VarSet, b: VarSet, c: VarSet) -> Result<bool> {
        let st = Statement { a, b, c };
        self.validate(st)?;
        Ok(self.holds_unchecked(a, b, c))
    }

    pub(crate) fn holds_unchecked(&self, a: VarSet, b: VarSet, c: VarSet) -> bool {
        if a.is_empty() || b.is_empty() {
            return true;
        }
        let ab = a | b;
        a.iter().all(|u| {
            b.iter().all(|v| {
                ab.without(u)
                    .without(v)
                    .subsets()
                    .all(|t| self.contains(u, v, c | t))
            })
        })
    }

    pub fn holds_statement(&self, st: &Statement) -> Result<bool> {
        self.holds(st.a, st.b, st.c)
    }

    /// Stored statements, ordered by pair then by conditioning-set encoding.
    pub fn iter(&self) -> impl Iterator<Item = Statement> + '_ {
        let k = self.k;
        let per = if k < 2 { 0 } else { 1usize << (k - 2) };
        self.words
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| {
                let mut bits = w;
                std::iter::from_fn(move || {
                    if bits == 0 {
                        return None;
                    }
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                })
            })
            .map(move |slot| {
                let (u, v) = pair_from_index(k, slot / per);
                let c = unsqueeze((slot % per) as u32, u, v);
                Statement::elementary(u, v, VarSet::from_bits(c))
            })
    }

    /// Stored statements for the pair `u, v`, as conditioning sets.
    pub fn conditioning_sets(&self, u: usize, v: usize) -> Vec<VarSet> {
        let rest = self.ground.all().without(u).without(v);
        rest.subsets().filter(|&c| self.contains(u, v, c)).collect()
    }

    /// `self ⊆ other`, statement-wise.
    pub fn is_subset(&self, other: &IndependenceModel) -> bool {
        self.ground == other.ground
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &IndependenceModel) -> Result<()> {
        if self.ground != other.ground {
            return Err(invalid("models over different ground sets"));
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(())
    }

    pub(crate) fn k(&self) -> usize {
        self.k
    }
}

fn pair_from_index(k: usize, mut idx: usize) -> (usize, usize) {
    let mut u = 0;
    while idx >= k - u - 1 {
        idx -= k - u - 1;
        u += 1;
    }
    (u, u + 1 + idx)
}

/// The dual model: `⟨u,v|C⟩` becomes `⟨u,v|V∖({u,v}∪C)⟩`.
pub fn dual(m: &IndependenceModel) -> IndependenceModel {
    let all = m.ground.all();
    let mut out = IndependenceModel::new(m.ground.clone()).expect("same capacity");
    for st in m.iter() {
        let (u, v) = (st.a.first().unwrap(), st.b.first().unwrap());
        let rest = all - st.a - st.b - st.c;
        out.insert_unchecked(u, v, rest);
    }
    out
}

/// The undirected graph in which `u` and `v` are adjacent iff no stored
/// statement separates them.
pub fn skeleton_of_model(m: &IndependenceModel) -> MixedGraph {
    let k = m.k;
    let mut separated = vec![VarSet::EMPTY; k];
    for st in m.iter() {
        let (u, v) = (st.a.first().unwrap(), st.b.first().unwrap());
        separated[u] = separated[u].with(v);
        separated[v] = separated[v].with(u);
    }
    let mut g = MixedGraph::empty(m.ground.clone());
    for u in 0..k {
        for v in u + 1..k {
            if !separated[u].contains(v) {
                g.add_line(u, v).expect("fresh pair");
            }
        }
    }
    g
}
