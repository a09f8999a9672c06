//! Markov and faithfulness comparisons between a model and an undirected or
//! bidirected graph, and the property triples that characterize
//! faithfulness to the skeleton.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::graphs::{induced_model, EdgeKind, MixedGraph};
use crate::imodel::{
    check_property, skeleton_of_model, IndependenceModel, Property, PropertyReport, Statement,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Undirected,
    Bidirected,
}

impl FromStr for Semantics {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "undirected" => Ok(Semantics::Undirected),
            "bidirected" => Ok(Semantics::Bidirected),
            _ => Err(invalid(format!("unknown semantics {s:?}"))),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Undirected => "undirected",
            Semantics::Bidirected => "bidirected",
        })
    }
}

/// First elementary triple on which graph and model disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailingTriple {
    pub statement: Statement,
    pub separated: bool,
    pub independent: bool,
}

#[derive(Clone, Debug)]
pub struct FaithfulnessReport {
    pub graph: MixedGraph,
    /// Every separation is an independence.
    pub markovian: bool,
    /// Separations and independences coincide.
    pub faithful: bool,
    pub failing_triple: Option<FailingTriple>,
}

/// Compare `m` with the separations of `g`. Both sides obey the
/// elementary-reduction semantics (separation satisfies composition), so
/// the comparison over elementary triples decides all triples.
pub fn faithfulness_report(m: &IndependenceModel, g: &MixedGraph) -> Result<FaithfulnessReport> {
    if m.ground() != g.ground() {
        return Err(invalid("model and graph have different vertex sets"));
    }
    if !g.is_undirected() && !g.is_bidirected() {
        return Err(Error::Unsupported(
            "faithfulness is only compared against undirected or bidirected graphs".into(),
        ));
    }
    let sep = induced_model(g)?;
    let markovian = sep.is_subset(m);
    let faithful = markovian && m.is_subset(&sep);
    let failing_triple = if faithful {
        None
    } else {
        let all = m.ground().all();
        let k = m.ground().len();
        let mut first = None;
        'outer: for u in 0..k {
            for v in u + 1..k {
                for c in all.without(u).without(v).subsets() {
                    let (s, i) = (sep.contains(u, v, c), m.contains(u, v, c));
                    if s != i {
                        first = Some(FailingTriple {
                            statement: Statement::elementary(u, v, c),
                            separated: s,
                            independent: i,
                        });
                        break 'outer;
                    }
                }
            }
        }
        first
    };
    Ok(FaithfulnessReport {
        graph: g.clone(),
        markovian,
        faithful,
        failing_triple,
    })
}

#[derive(Clone, Debug)]
pub struct CharacterizationReport {
    pub semantics: Semantics,
    pub reports: Vec<PropertyReport>,
    /// Conjunction of the three properties.
    pub all_hold: bool,
    /// Faithfulness of the model to its skeleton read with `semantics`.
    pub faithful_to_skeleton: bool,
}

/// Undirected: intersection, singleton-transitivity, upward-stability.
/// Bidirected: composition, singleton-transitivity, downward-stability.
pub fn characterization_check(
    m: &IndependenceModel,
    semantics: Semantics,
) -> Result<CharacterizationReport> {
    let props = match semantics {
        Semantics::Undirected => [
            Property::Intersection,
            Property::SingletonTransitivity,
            Property::UpwardStability,
        ],
        Semantics::Bidirected => [
            Property::Composition,
            Property::SingletonTransitivity,
            Property::DownwardStability,
        ],
    };
    let reports = props
        .into_iter()
        .map(|p| check_property(m, p))
        .collect::<Result<Vec<_>>>()?;
    let kind = match semantics {
        Semantics::Undirected => EdgeKind::Line,
        Semantics::Bidirected => EdgeKind::Arc,
    };
    let skeleton = skeleton_of_model(m).with_kind(kind)?;
    let faithful_to_skeleton = faithfulness_report(m, &skeleton)?.faithful;
    Ok(CharacterizationReport {
        semantics,
        all_hold: reports.iter().all(|r| r.holds),
        reports,
        faithful_to_skeleton,
    })
}
