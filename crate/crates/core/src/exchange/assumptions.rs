//! Structural hypotheses under which intersection and composition suffice
//! for faithfulness of an exchangeable network model, per regime.
//!
//! Nodes are fixed to `i,j,k,l = 1,2,3,4`. The incidence regimes look at the
//! conditioning sets of `ij ⊥ kl`, the complement regimes at those of
//! `ij ⊥ ik`. Bidirected regimes are read through duality: a maximal set
//! `C` is judged by its complement `D∖(C∪{ij,kl})`, which is a minimal set
//! of the dual model.

use super::{is_exchangeable_model, RegimeTag};
use crate::error::{invalid, Error, Result};
use crate::graphs::{c_ijkl, cd_ijk};
use crate::ground::{act, GroundSet, Kind, NodePermutation, VarSet};
use crate::imodel::{is_semigraphoid, IndependenceModel, Statement};

/// A conditioning set on which a hypothesis fails, with the relabeling
/// that moved it when the failure is a broken invariance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetWitness {
    pub set: VarSet,
    pub swap: Option<NodePermutation>,
    pub image: Option<VarSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: &'static str,
    pub holds: bool,
    pub witness: Option<SetWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionReport {
    pub case: RegimeTag,
    pub hypotheses: Vec<Hypothesis>,
    /// Whether the case's hypotheses are met. For the empty regime either
    /// alternative suffices; otherwise every hypothesis must hold.
    pub satisfied: bool,
}

fn hypothesis(name: &'static str, witness: Option<SetWitness>) -> Hypothesis {
    Hypothesis {
        name,
        holds: witness.is_none(),
        witness,
    }
}

/// Conditioning sets `C` of `⟨u,v|C⟩` in `m` from which no single element
/// can be removed (`minimal`) or to which none can be added.
fn extremal_sets(m: &IndependenceModel, u: usize, v: usize, minimal: bool) -> Vec<VarSet> {
    let rest = m.ground().all().without(u).without(v);
    m.conditioning_sets(u, v)
        .into_iter()
        .filter(|&c| {
            if minimal {
                c.iter().all(|w| !m.contains(u, v, c.without(w)))
            } else {
                (rest - c).iter().all(|w| !m.contains(u, v, c.with(w)))
            }
        })
        .collect()
}

/// The relabeling that swaps `k` with `m` and then the image of `l` with `h`,
/// so that `k ↦ m` and `l ↦ h`.
fn double_swap(n: usize, k: usize, l: usize, m: usize, h: usize) -> Result<NodePermutation> {
    let first = NodePermutation::swap(n, k, m)?;
    let second = NodePermutation::swap(n, first.apply(l), h)?;
    Ok(second.compose(&first))
}

/// Check `S` invariant under every relabeling in `perms`.
fn invariance_witness(
    g: &GroundSet,
    set: VarSet,
    judged: VarSet,
    perms: impl IntoIterator<Item = NodePermutation>,
) -> Result<Option<SetWitness>> {
    for p in perms {
        let image = act(&p, judged, g)?;
        if image != judged {
            return Ok(Some(SetWitness {
                set,
                swap: Some(p),
                image: Some(image),
            }));
        }
    }
    Ok(None)
}

/// Swaps for `ij ⊥ kl | S`: for each dyad `mh ∉ S∪{ij,kl}` with
/// `m, h ∉ {i, j}`, both relabelings `k↦m, l↦h` and `k↦h, l↦m`.
fn incidence_swaps(g: &GroundSet, s: VarSet, excluded: VarSet) -> Result<Vec<NodePermutation>> {
    let n = g.n();
    let mut out = Vec::new();
    for e in (g.all() - s - excluded).iter() {
        let d = g.dyad(e);
        if [1, 2].contains(&d.i()) || [1, 2].contains(&d.j()) {
            continue;
        }
        out.push(double_swap(n, 3, 4, d.i(), d.j())?);
        out.push(double_swap(n, 3, 4, d.j(), d.i())?);
    }
    Ok(out)
}

/// Swaps for `ij ⊥ ik | S`: `(k m)` for each `m ∉ {i,j,k}` such that some
/// `lm ∉ S∪{ij,ik}`.
fn complement_swaps(g: &GroundSet, s: VarSet, excluded: VarSet) -> Result<Vec<NodePermutation>> {
    let n = g.n();
    let outside = g.all() - s - excluded;
    let mut out = Vec::new();
    for m in 4..=n {
        let qualifies = (1..=n)
            .filter(|&l| l != m)
            .any(|l| g.index_of_dyad(l, m).is_ok_and(|e| outside.contains(e)));
        if qualifies {
            out.push(NodePermutation::swap(n, 3, m)?);
        }
    }
    Ok(out)
}

/// Verify the structured hypotheses of `case` on an exchangeable
/// semi-graphoid network model.
///
/// Each set is tested literally and, failing that, through the relabeling
/// that exchanges the two dyads' roles in the statement (`(i k)(j l)` for
/// `ij ⊥ kl`, `(j k)` for `ij ⊥ ik`); the statement is unchanged by it, so
/// a set passes when either it or its image does.
pub fn structured_assumption_check(
    m: &IndependenceModel,
    case: RegimeTag,
) -> Result<AssumptionReport> {
    let g = m.ground().clone();
    if g.kind() != Kind::Network || !g.is_full() || g.n() < 4 {
        return Err(invalid(
            "structured hypotheses need the dyads of at least 4 nodes",
        ));
    }
    if !is_semigraphoid(m) {
        return Err(Error::Precondition(
            "model is not semi-graphoid closed".into(),
        ));
    }
    if !is_exchangeable_model(m)? {
        return Err(Error::Precondition("model is not exchangeable".into()));
    }
    let n = g.n();
    let d = |a: usize, b: usize| g.index_of_dyad(a, b);
    let (ij, kl, ik) = (d(1, 2)?, d(3, 4)?, d(1, 3)?);
    let hypotheses = match case {
        RegimeTag::Complete | RegimeTag::Inconsistent => {
            return Err(invalid(format!("regime {case} has no hypotheses to check")))
        }
        RegimeTag::Empty => {
            let rest_kl = g.all().without(ij).without(kl);
            let rest_ik = g.all().without(ij).without(ik);
            let unconditional =
                m.contains(ij, kl, VarSet::EMPTY) && m.contains(ij, ik, VarSet::EMPTY);
            let conditioned = m.contains(ij, kl, rest_kl) && m.contains(ij, ik, rest_ik);
            let miss = |ok: bool, set: VarSet| {
                (!ok).then_some(SetWitness {
                    set,
                    swap: None,
                    image: None,
                })
            };
            vec![
                hypothesis("marginal independences", miss(unconditional, VarSet::EMPTY)),
                hypothesis(
                    "fully conditioned independences",
                    miss(conditioned, rest_kl),
                ),
            ]
        }
        _ => {
            let incidence = matches!(
                case,
                RegimeTag::UndirectedIncidence | RegimeTag::BidirectedIncidence
            );
            let undirected = matches!(
                case,
                RegimeTag::UndirectedIncidence | RegimeTag::UndirectedComplement
            );
            let (v, core, role_swap) = if incidence {
                let p = NodePermutation::swap(n, 1, 3)?.compose(&NodePermutation::swap(n, 2, 4)?);
                (kl, c_ijkl(&g, 1, 2, 3, 4)?, p)
            } else {
                (ik, cd_ijk(&g, 1, 2, 3)?, NodePermutation::swap(n, 2, 3)?)
            };
            let pair = VarSet::singleton(ij).with(v);
            let sets = extremal_sets(m, ij, v, undirected);
            let mut core_fail = None;
            let mut swap_fail = None;
            for &c in &sets {
                // the set the hypotheses are stated for, read dually when bidirected
                let judged = if undirected { c } else { g.all() - c - pair };
                if core_fail.is_none() && !core.is_subset(judged) {
                    core_fail = Some(SetWitness {
                        set: c,
                        swap: None,
                        image: None,
                    });
                }
                if swap_fail.is_none() {
                    let swaps = |s: VarSet| -> Result<Vec<NodePermutation>> {
                        if incidence {
                            incidence_swaps(&g, s, pair)
                        } else {
                            complement_swaps(&g, s, pair)
                        }
                    };
                    let literal = invariance_witness(&g, c, judged, swaps(judged)?)?;
                    if literal.is_some() {
                        let twin = act(&role_swap, judged, &g)?;
                        if invariance_witness(&g, c, twin, swaps(twin)?)?.is_some() {
                            swap_fail = literal;
                        }
                    }
                }
            }
            let (core_name, swap_name) = match (incidence, undirected) {
                (true, true) => (
                    "C_ijkl contained in every minimal separator",
                    "minimal separators swap-invariant",
                ),
                (true, false) => (
                    "C_ijkl disjoint from every maximal separator",
                    "maximal separators swap-invariant",
                ),
                (false, true) => (
                    "C^d_ijk contained in every minimal separator",
                    "minimal separators swap-invariant",
                ),
                (false, false) => (
                    "C^d_ijk disjoint from every maximal separator",
                    "maximal separators swap-invariant",
                ),
            };
            let exists = sets.is_empty().then_some(SetWitness {
                set: VarSet::EMPTY,
                swap: None,
                image: None,
            });
            vec![
                hypothesis("some conditioning set exists", exists),
                hypothesis(core_name, core_fail),
                hypothesis(swap_name, swap_fail),
            ]
        }
    };
    let satisfied = if case == RegimeTag::Empty {
        hypotheses.iter().any(|h| h.holds)
    } else {
        hypotheses.iter().all(|h| h.holds)
    };
    Ok(AssumptionReport {
        case,
        hypotheses,
        satisfied,
    })
}

/// The statement the hypotheses of `case` are about, for display.
pub fn subject_statement(g: &GroundSet, case: RegimeTag) -> Result<Statement> {
    let d = |a: usize, b: usize| g.index_of_dyad(a, b);
    let v = match case {
        RegimeTag::UndirectedComplement | RegimeTag::BidirectedComplement => d(1, 3)?,
        _ => d(3, 4)?,
    };
    Ok(Statement::elementary(d(1, 2)?, v, VarSet::EMPTY))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{induced_model, GraphFamily};
    use crate::imodel::{closure_with, Rule};

    fn family_model(f: GraphFamily, n: usize) -> IndependenceModel {
        induced_model(&f.build(n).unwrap()).unwrap()
    }

    #[test]
    fn canonical_models_meet_their_hypotheses() {
        for (f, case) in [
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
            let r = structured_assumption_check(&family_model(f, 5), case).unwrap();
            assert!(r.satisfied, "{f}: {r:?}");
        }
    }

    #[test]
    fn complete_case_is_rejected() {
        let m = family_model(GraphFamily::Complete, 5);
        assert!(structured_assumption_check(&m, RegimeTag::Complete).is_err());
    }

    #[test]
    fn upward_closed_example_keeps_containment_but_not_invariance() {
        let g = crate::ground::dyad_universe(5).unwrap();
        let mut m = IndependenceModel::new(g.clone()).unwrap();
        let (ij, kl) = (
            g.index_of_dyad(1, 2).unwrap(),
            g.index_of_dyad(3, 4).unwrap(),
        );
        m.insert(ij, kl, g.parse_set("1-3,1-4,2-3,2-4").unwrap())
            .unwrap();
        let m = closure_with(
            &crate::exchange::orbit_closure(&m).unwrap(),
            &[Rule::UpwardStability],
        )
        .unwrap();
        let r = structured_assumption_check(&m, RegimeTag::UndirectedIncidence).unwrap();
        assert!(r.hypotheses[1].holds);
        assert!(!r.hypotheses[2].holds);
    }
}
