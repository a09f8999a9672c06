//! The six-regime classifier for exchangeable networks.
//!
//! With nodes `i,j,k,l,m = 1..5` it searches every conditioning set for
//! `ij ⊥ kl | C` and `ij ⊥ ik | C'`. Which of the two searches succeeds
//! fixes the skeleton; membership of `ik` in the `C` witnesses (or `lm` in
//! the `C'` witnesses) fixes the edge type. Membership is tested over all
//! witnesses so that an oracle no graph can be faithful to is reported as
//! inconsistent instead of being misclassified.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::CiOracle;
use crate::error::{invalid, Error, Result};
use crate::ground::{map_set, GroundSet, Kind, NodePermutation, VarSet};
use crate::imodel::Statement;

/// Seed of the exchangeability spot check.
pub const SPOT_CHECK_SEED: u64 = 0x5eed_ec1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    Empty,
    UndirectedIncidence,
    BidirectedIncidence,
    UndirectedComplement,
    BidirectedComplement,
    Complete,
    Inconsistent,
}

impl RegimeTag {
    pub fn name(self) -> &'static str {
        match self {
            RegimeTag::Empty => "Empty",
            RegimeTag::UndirectedIncidence => "UndirectedIncidence",
            RegimeTag::BidirectedIncidence => "BidirectedIncidence",
            RegimeTag::UndirectedComplement => "UndirectedComplement",
            RegimeTag::BidirectedComplement => "BidirectedComplement",
            RegimeTag::Complete => "Complete",
            RegimeTag::Inconsistent => "Inconsistent",
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classifier outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regime {
    pub tag: RegimeTag,
    /// Least conditioning set with `12 ⊥ 34 | C`, if any.
    pub disjoint_witness: Option<Statement>,
    /// Least conditioning set with `12 ⊥ 13 | C'`, if any.
    pub shared_witness: Option<Statement>,
    /// For [`RegimeTag::Inconsistent`]: two statements the oracle accepts,
    /// one whose conditioning set contains the test dyad and one whose set
    /// does not.
    pub conflict: Option<(Statement, Statement)>,
}

/// All `C ⊆ D∖{u,v}` with `u ⊥ v | C`, in increasing bit order.
fn witnesses(oracle: &dyn CiOracle, u: usize, v: usize) -> Result<Vec<VarSet>> {
    let rest = oracle.ground().all().without(u).without(v);
    let (a, b) = (VarSet::singleton(u), VarSet::singleton(v));
    let subsets: Vec<VarSet> = rest.subsets().collect();
    let answers: Vec<bool> = subsets
        .par_iter()
        .map(|&c| oracle.independent(a, b, c))
        .collect::<Result<_>>()?;
    Ok(subsets
        .into_iter()
        .zip(answers)
        .filter_map(|(c, yes)| yes.then_some(c))
        .collect())
}

/// Compare three random elementary queries with their relabeled images.
fn spot_check(oracle: &dyn CiOracle, g: &GroundSet) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
    let perms: Vec<NodePermutation> = NodePermutation::all(g.n()).collect();
    let k = g.len();
    for _ in 0..3 {
        let u = rng.gen_range(0..k);
        let v = (u + rng.gen_range(1..k)) % k;
        let rest = g.all().without(u).without(v);
        let c: VarSet = rest.iter().filter(|_| rng.gen_bool(0.5)).collect();
        let p = &perms[rng.gen_range(0..perms.len())];
        let map = g.element_map(p)?;
        let (a, b) = (VarSet::singleton(u), VarSet::singleton(v));
        let lhs = oracle.independent(a, b, c)?;
        let rhs = oracle.independent(map_set(&map, a), map_set(&map, b), map_set(&map, c))?;
        if lhs != rhs {
            return Err(Error::Precondition(format!(
                "oracle is not exchangeable: {} is {} but its image under {:?} is {}",
                Statement::elementary(u, v, c).display(g),
                lhs,
                p,
                rhs
            )));
        }
    }
    Ok(())
}

/// Split witnesses by membership of `probe`; `None` when they agree.
fn membership(
    sets: &[VarSet],
    probe: usize,
    u: usize,
    v: usize,
) -> std::result::Result<bool, (Statement, Statement)> {
    let with = sets.iter().find(|c| c.contains(probe));
    let without = sets.iter().find(|c| !c.contains(probe));
    match (with, without) {
        (Some(&w), Some(&wo)) => Err((
            Statement::elementary(u, v, w),
            Statement::elementary(u, v, wo),
        )),
        (Some(_), None) => Ok(true),
        _ => Ok(false),
    }
}

/// Run the classifier against an oracle over the dyads of `n` nodes.
pub fn classify_regime(oracle: &dyn CiOracle, n: usize) -> Result<Regime> {
    if n < 5 {
        return Err(invalid("classifier requires n ≥ 5"));
    }
    let g = oracle.ground().clone();
    if g.kind() != Kind::Network || !g.is_full() || g.n() != n {
        return Err(invalid(format!(
            "oracle must range over the dyads of {n} nodes"
        )));
    }
    spot_check(oracle, &g)?;
    let d = |a: usize, b: usize| g.index_of_dyad(a, b);
    let (ij, kl, ik, lm) = (d(1, 2)?, d(3, 4)?, d(1, 3)?, d(4, 5)?);
    let w_kl = witnesses(oracle, ij, kl)?;
    let w_ik = witnesses(oracle, ij, ik)?;
    let mut out = Regime {
        tag: RegimeTag::Complete,
        disjoint_witness: w_kl.first().map(|&c| Statement::elementary(ij, kl, c)),
        shared_witness: w_ik.first().map(|&c| Statement::elementary(ij, ik, c)),
        conflict: None,
    };
    let split = match (w_kl.is_empty(), w_ik.is_empty()) {
        (false, false) => {
            out.tag = RegimeTag::Empty;
            return Ok(out);
        }
        (true, true) => return Ok(out),
        (false, true) => membership(&w_kl, ik, ij, kl).map(|inside| {
            if inside {
                RegimeTag::UndirectedIncidence
            } else {
                RegimeTag::BidirectedIncidence
            }
        }),
        (true, false) => membership(&w_ik, lm, ij, ik).map(|inside| {
            if inside {
                RegimeTag::UndirectedComplement
            } else {
                RegimeTag::BidirectedComplement
            }
        }),
    };
    match split {
        Ok(tag) => out.tag = tag,
        Err(pair) => {
            out.tag = RegimeTag::Inconsistent;
            out.conflict = Some(pair);
        }
    }
    Ok(out)
}
