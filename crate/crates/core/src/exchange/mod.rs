//! Exchangeability: orbit closure of models under node relabeling, the
//! conditional-independence oracle abstraction, the regime classifier and
//! the faithfulness and structured-assumption checks built on it.

mod assumptions;
mod faithful;
mod regime;

use crate::error::{invalid, Result};
use crate::graphs::{separates, MixedGraph};
use crate::ground::{map_set, GroundSet, NodePermutation, VarSet};
use crate::imodel::IndependenceModel;

pub use assumptions::{
    structured_assumption_check, subject_statement, AssumptionReport, Hypothesis, SetWitness,
};
pub use faithful::{
    characterization_check, faithfulness_report, CharacterizationReport, FailingTriple,
    FaithfulnessReport, Semantics,
};
pub use regime::{classify_regime, Regime, RegimeTag, SPOT_CHECK_SEED};

/// A deterministic source of answers to `A ⊥ B | C` queries.
pub trait CiOracle: Sync {
    fn ground(&self) -> &GroundSet;
    fn independent(&self, a: VarSet, b: VarSet, c: VarSet) -> Result<bool>;
}

impl CiOracle for IndependenceModel {
    fn ground(&self) -> &GroundSet {
        IndependenceModel::ground(self)
    }

    fn independent(&self, a: VarSet, b: VarSet, c: VarSet) -> Result<bool> {
        self.holds(a, b, c)
    }
}

impl CiOracle for MixedGraph {
    fn ground(&self) -> &GroundSet {
        MixedGraph::ground(self)
    }

    fn independent(&self, a: VarSet, b: VarSet, c: VarSet) -> Result<bool> {
        if a.is_empty() || b.is_empty() {
            return Ok(true);
        }
        separates(self, a, b, c)
    }
}

fn require_full(g: &GroundSet) -> Result<()> {
    if !g.is_full() {
        return Err(invalid("exchangeability needs a full ground set"));
    }
    Ok(())
}

/// Element maps of a generating set of the node permutation group.
fn generator_maps(g: &GroundSet) -> Result<Vec<Vec<u8>>> {
    NodePermutation::generators(g.n())
        .iter()
        .map(|p| g.element_map(p))
        .collect()
}

/// Smallest model containing `m` and closed under relabeling of nodes.
pub fn orbit_closure(m: &IndependenceModel) -> Result<IndependenceModel> {
    let g = m.ground();
    require_full(g)?;
    let maps = generator_maps(g)?;
    let mut out = m.clone();
    let mut work: Vec<(usize, usize, VarSet)> = m
        .iter()
        .map(|s| (s.a.first().unwrap(), s.b.first().unwrap(), s.c))
        .collect();
    while let Some((u, v, c)) = work.pop() {
        for map in &maps {
            let (pu, pv, pc) = (map[u] as usize, map[v] as usize, map_set(map, c));
            if out.insert_unchecked(pu, pv, pc) {
                work.push((pu, pv, pc));
            }
        }
    }
    Ok(out)
}

/// Image of `m` under a node relabeling.
pub fn relabel_model(m: &IndependenceModel, perm: &NodePermutation) -> Result<IndependenceModel> {
    let map = m.ground().element_map(perm)?;
    let mut out = IndependenceModel::new(m.ground().clone())?;
    for s in m.iter() {
        let (u, v) = (s.a.first().unwrap(), s.b.first().unwrap());
        out.insert_unchecked(map[u] as usize, map[v] as usize, map_set(&map, s.c));
    }
    Ok(out)
}

/// Whether every relabeling of a stored statement is stored.
pub fn is_exchangeable_model(m: &IndependenceModel) -> Result<bool> {
    let g = m.ground();
    require_full(g)?;
    let maps = generator_maps(g)?;
    Ok(m.iter().all(|s| {
        let (u, v) = (s.a.first().unwrap(), s.b.first().unwrap());
        maps.iter()
            .all(|map| m.contains(map[u] as usize, map[v] as usize, map_set(map, s.c)))
    }))
}
