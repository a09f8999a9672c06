//! Fixpoint closure under elementary inference rules.
//!
//! The semi-graphoid axioms restricted to elementary statements collapse to
//! one rule: `⟨a,t|zC⟩ ∧ ⟨a,z|C⟩ ⇒ ⟨a,z|tC⟩ ∧ ⟨a,t|C⟩`. Optional rules are
//! the elementary forms of intersection and composition plus the two
//! stability properties.

use std::fmt;
use std::str::FromStr;

use super::IndependenceModel;
use crate::error::{invalid, Error, Result};
use crate::ground::VarSet;

/// An optional inference rule on top of the semi-graphoid axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Intersection,
    Composition,
    /// Accepted by the parser but rejected by [`closure_with`]: its
    /// conclusion is a disjunction, so there is no smallest closed model.
    SingletonTransitivity,
    UpwardStability,
    DownwardStability,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::Intersection,
        Rule::Composition,
        Rule::SingletonTransitivity,
        Rule::UpwardStability,
        Rule::DownwardStability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Intersection => "intersection",
            Rule::Composition => "composition",
            Rule::SingletonTransitivity => "singleton-transitivity",
            Rule::UpwardStability => "upward-stability",
            Rule::DownwardStability => "downward-stability",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| invalid(format!("unknown rule {s:?}")))
    }
}

#[derive(Clone, Copy, Default)]
pub(crate) struct RuleSet {
    intersection: bool,
    composition: bool,
    upward: bool,
    downward: bool,
}

impl RuleSet {
    pub(crate) fn from_rules(rules: &[Rule]) -> Result<Self> {
        let mut set = RuleSet::default();
        for r in rules {
            match r {
                Rule::Intersection => set.intersection = true,
                Rule::Composition => set.composition = true,
                Rule::UpwardStability => set.upward = true,
                Rule::DownwardStability => set.downward = true,
                Rule::SingletonTransitivity => {
                    return Err(invalid(
                        "singleton-transitivity has a disjunctive conclusion and cannot be used as a closure rule",
                    ))
                }
            }
        }
        Ok(set)
    }
}

/// One rule firing: the two (or one) antecedents and the conclusions.
pub(crate) struct Firing {
    pub antecedents: Vec<(usize, usize, VarSet)>,
    pub conclusions: [(usize, usize, VarSet); 2],
}

/// Call `visit` for every rule firing that uses `⟨x,y|K⟩` as an antecedent
/// together with a stored partner. Stops early when `visit` returns false.
pub(crate) fn for_each_firing(
    m: &IndependenceModel,
    rules: RuleSet,
    x: usize,
    y: usize,
    k: VarSet,
    mut visit: impl FnMut(Firing) -> bool,
) -> bool {
    let rest = m.ground().all() - k - VarSet::singleton(x) - VarSet::singleton(y);
    for (a, t) in [(x, y), (y, x)] {
        for z in k.iter() {
            let c = k.without(z);
            // ⟨a,t|zC⟩ ∧ ⟨a,z|C⟩
            if m.contains(a, z, c)
                && !visit(Firing {
                    antecedents: vec![(a, t, k), (a, z, c)],
                    conclusions: [(a, z, c.with(t)), (a, t, c)],
                })
            {
                return false;
            }
            // ⟨a,t|zC⟩ ∧ ⟨a,z|tC⟩
            if rules.intersection
                && m.contains(a, z, c.with(t))
                && !visit(Firing {
                    antecedents: vec![(a, t, k), (a, z, c.with(t))],
                    conclusions: [(a, t, c), (a, z, c)],
                })
            {
                return false;
            }
        }
        for w in rest.iter() {
            // ⟨a,w|tK⟩ ∧ ⟨a,t|K⟩
            if m.contains(a, w, k.with(t))
                && !visit(Firing {
                    antecedents: vec![(a, w, k.with(t)), (a, t, k)],
                    conclusions: [(a, t, k.with(w)), (a, w, k)],
                })
            {
                return false;
            }
            // ⟨a,t|K⟩ ∧ ⟨a,w|K⟩
            if rules.composition
                && m.contains(a, w, k)
                && !visit(Firing {
                    antecedents: vec![(a, t, k), (a, w, k)],
                    conclusions: [(a, t, k.with(w)), (a, w, k.with(t))],
                })
            {
                return false;
            }
        }
    }
    if rules.upward {
        for w in rest.iter() {
            let f = Firing {
                antecedents: vec![(x, y, k)],
                conclusions: [(x, y, k.with(w)), (x, y, k.with(w))],
            };
            if !visit(f) {
                return false;
            }
        }
    }
    if rules.downward {
        for w in k.iter() {
            let f = Firing {
                antecedents: vec![(x, y, k)],
                conclusions: [(x, y, k.without(w)), (x, y, k.without(w))],
            };
            if !visit(f) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn close(m: &IndependenceModel, rules: RuleSet) -> IndependenceModel {
    let mut out = m.clone();
    let mut work: Vec<(usize, usize, VarSet)> = m
        .iter()
        .map(|s| (s.a.first().unwrap(), s.b.first().unwrap(), s.c))
        .collect();
    let mut fresh = Vec::new();
    while let Some((x, y, k)) = work.pop() {
        for_each_firing(&out, rules, x, y, k, |f| {
            fresh.extend(f.conclusions);
            true
        });
        for (u, v, c) in fresh.drain(..) {
            if out.insert_unchecked(u, v, c) {
                work.push((u, v, c));
            }
        }
    }
    out
}

/// First rule firing whose conclusion is missing, in statement order.
pub(crate) fn first_violation(m: &IndependenceModel, rules: RuleSet) -> Option<Firing> {
    let mut found = None;
    for s in m.iter() {
        let (x, y) = (s.a.first().unwrap(), s.b.first().unwrap());
        let done = !for_each_firing(m, rules, x, y, s.c, |f| {
            if f.conclusions.iter().all(|&(u, v, c)| m.contains(u, v, c)) {
                true
            } else {
                found = Some(f);
                false
            }
        });
        if done {
            break;
        }
    }
    found
}

/// Smallest semi-graphoid containing `m`.
pub fn semigraphoid_closure(m: &IndependenceModel) -> IndependenceModel {
    close(m, RuleSet::default())
}

/// Smallest model containing `m` closed under the semi-graphoid axioms and
/// each rule in `extra`.
pub fn closure_with(m: &IndependenceModel, extra: &[Rule]) -> Result<IndependenceModel> {
    Ok(close(m, RuleSet::from_rules(extra)?))
}
