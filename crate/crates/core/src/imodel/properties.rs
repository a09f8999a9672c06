//! The nine structural properties of independence models and their
//! exhaustive checkers.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::closure::{first_violation, RuleSet};
use super::{squeeze, unsqueeze, IndependenceModel, Statement};
use crate::error::{invalid, Error, Result};
use crate::ground::VarSet;

/// Largest ground set on which properties quantified over general subsets
/// are checked. The search visits every disjoint quadruple, `5^k` of them.
pub const GENERAL_CHECK_CAPACITY: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Symmetry,
    Decomposition,
    WeakUnion,
    Contraction,
    Intersection,
    Composition,
    SingletonTransitivity,
    UpwardStability,
    DownwardStability,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Symmetry,
        Property::Decomposition,
        Property::WeakUnion,
        Property::Contraction,
        Property::Intersection,
        Property::Composition,
        Property::SingletonTransitivity,
        Property::UpwardStability,
        Property::DownwardStability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Symmetry => "symmetry",
            Property::Decomposition => "decomposition",
            Property::WeakUnion => "weak-union",
            Property::Contraction => "contraction",
            Property::Intersection => "intersection",
            Property::Composition => "composition",
            Property::SingletonTransitivity => "singleton-transitivity",
            Property::UpwardStability => "upward-stability",
            Property::DownwardStability => "downward-stability",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| invalid(format!("unknown property {s:?}")))
    }
}

/// A violated instance: every antecedent holds and every listed consequent
/// is absent. For singleton-transitivity both alternatives are listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub antecedents: Vec<Statement>,
    pub absent: Vec<Statement>,
}

impl Witness {
    /// Re-evaluate the witness against `m`.
    pub fn recheck(&self, m: &IndependenceModel) -> bool {
        !self.absent.is_empty()
            && self
                .antecedents
                .iter()
                .all(|s| m.holds_statement(s).unwrap_or(false))
            && self
                .absent
                .iter()
                .all(|s| !m.holds_statement(s).unwrap_or(true))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    fn from_witness(property: Property, witness: Option<Witness>) -> Self {
        PropertyReport {
            property,
            holds: witness.is_none(),
            witness,
        }
    }
}

/// Whether `m` is closed under the semi-graphoid axioms.
pub fn is_semigraphoid(m: &IndependenceModel) -> bool {
    first_violation(m, RuleSet::default()).is_none()
}

/// Describe the first missing semi-graphoid consequence, if any.
pub(crate) fn first_violation_message(m: &IndependenceModel) -> Option<String> {
    let f = first_violation(m, RuleSet::default())?;
    let g = m.ground();
    let show =
        |&(u, v, c): &(usize, usize, VarSet)| Statement::elementary(u, v, c).display(g).to_string();
    let missing = f
        .conclusions
        .iter()
        .find(|&&(u, v, c)| !m.contains(u, v, c))
        .expect("violation has a missing conclusion");
    let from: Vec<String> = f.antecedents.iter().map(show).collect();
    Some(format!(
        "{} follows from {}",
        show(missing),
        from.join(" and ")
    ))
}

/// Check one property exhaustively. The model must already be a
/// semi-graphoid.
pub fn check_property(m: &IndependenceModel, p: Property) -> Result<PropertyReport> {
    if let Some(msg) = first_violation_message(m) {
        return Err(Error::Precondition(format!(
            "model is not closed under the semi-graphoid axioms: {msg}"
        )));
    }
    let witness = match p {
        Property::Symmetry => None,
        Property::SingletonTransitivity => singleton_transitivity_witness(m),
        Property::UpwardStability => stability_witness(m, true),
        Property::DownwardStability => stability_witness(m, false),
        _ => {
            let k = m.ground().len();
            if k > GENERAL_CHECK_CAPACITY {
                return Err(Error::Capacity {
                    what: "general property check elements",
                    size: k,
                    limit: GENERAL_CHECK_CAPACITY,
                });
            }
            general_witness(&Evaluator::new(m), p)
        }
    };
    Ok(PropertyReport::from_witness(p, witness))
}

fn singleton_transitivity_witness(m: &IndependenceModel) -> Option<Witness> {
    let all = m.ground().all();
    for s in m.iter() {
        let (u, v) = (s.a.first().unwrap(), s.b.first().unwrap());
        for w in (all - s.a - s.b - s.c).iter() {
            if m.contains(u, v, s.c.with(w)) && !m.contains(u, w, s.c) && !m.contains(v, w, s.c) {
                return Some(Witness {
                    antecedents: vec![s, Statement::elementary(u, v, s.c.with(w))],
                    absent: vec![
                        Statement::elementary(u, w, s.c),
                        Statement::elementary(v, w, s.c),
                    ],
                });
            }
        }
    }
    None
}

fn stability_witness(m: &IndependenceModel, upward: bool) -> Option<Witness> {
    let all = m.ground().all();
    for s in m.iter() {
        let (u, v) = (s.a.first().unwrap(), s.b.first().unwrap());
        let candidates = if upward { all - s.a - s.b - s.c } else { s.c };
        for w in candidates.iter() {
            let c = if upward { s.c.with(w) } else { s.c.without(w) };
            if !m.contains(u, v, c) {
                return Some(Witness {
                    antecedents: vec![s],
                    absent: vec![Statement::elementary(u, v, c)],
                });
            }
        }
    }
    None
}

/// Fast evaluation of general statements over a fixed model.
///
/// For each pair `u<v` it tabulates `F(C,S) = ∧_{T⊆S} [⟨u,v|C∪T⟩ ∈ m]` over
/// disjoint `C, S ⊆ V∖{u,v}`, so that `⟨A,B|C⟩` costs `|A|·|B|` lookups.
pub struct Evaluator<'a> {
    model: &'a IndependenceModel,
    k: usize,
    tables: Vec<Vec<u64>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(model: &'a IndependenceModel) -> Self {
        let k = model.k();
        let r = k.saturating_sub(2);
        let size = 1usize << (2 * r);
        let mask = (1u32 << r) - 1;
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
            .collect();
        let tables = pairs
            .par_iter()
            .map(|&(u, v)| {
                let mut t = vec![0u64; size.div_ceil(64)];
                let get = |t: &[u64], i: usize| t[i / 64] >> (i % 64) & 1 == 1;
                for idx in 0..size {
                    let c = idx as u32 & mask;
                    let s = (idx >> r) as u32;
                    if c & s != 0 {
                        continue;
                    }
                    let val = if s == 0 {
                        model.contains(u, v, VarSet::from_bits(unsqueeze(c, u, v)))
                    } else {
                        let low = s & s.wrapping_neg();
                        let rest = ((s ^ low) as usize) << r;
                        get(&t, c as usize | rest) && get(&t, (c | low) as usize | rest)
                    };
                    if val {
                        t[idx / 64] |= 1 << (idx % 64);
                    }
                }
                t
            })
            .collect();
        Evaluator { model, k, tables }
    }

    pub fn model(&self) -> &IndependenceModel {
        self.model
    }

    #[inline]
    fn f(&self, u: usize, v: usize, c: VarSet, s: VarSet) -> bool {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        let r = self.k - 2;
        let pair = super::pair_index(self.k, u, v);
        let idx = squeeze(c.bits(), u, v) as usize | (squeeze(s.bits(), u, v) as usize) << r;
        self.tables[pair][idx / 64] >> (idx % 64) & 1 == 1
    }

    /// `⟨A,B|C⟩` for pairwise disjoint sets (not validated).
    #[inline]
    pub fn holds(&self, a: VarSet, b: VarSet, c: VarSet) -> bool {
        if a.is_empty() || b.is_empty() {
            return true;
        }
        let ab = a | b;
        a.iter()
            .all(|u| b.iter().all(|v| self.f(u, v, c, ab.without(u).without(v))))
    }
}

fn stmt(a: VarSet, b: VarSet, c: VarSet) -> Statement {
    Statement::new(a, b, c).expect("disjoint by construction")
}

/// Examine one instance `(A, B, D, C)`; return the witness if the property
/// fails on it.
fn instance_witness(
    e: &Evaluator<'_>,
    p: Property,
    a: VarSet,
    b: VarSet,
    d: VarSet,
    c: VarSet,
) -> Option<Witness> {
    let (antecedents, consequents) = match p {
        Property::Decomposition => {
            if !e.holds(a, b | d, c) {
                return None;
            }
            (vec![(a, b | d, c)], vec![(a, b, c), (a, d, c)])
        }
        Property::WeakUnion => {
            if !e.holds(a, b | d, c) {
                return None;
            }
            (vec![(a, b | d, c)], vec![(a, b, c | d), (a, d, c | b)])
        }
        Property::Contraction => {
            if !e.holds(a, d, c) || !e.holds(a, b, c | d) {
                return None;
            }
            (vec![(a, b, c | d), (a, d, c)], vec![(a, b | d, c)])
        }
        Property::Intersection => {
            if !e.holds(a, b, c | d) || !e.holds(a, d, c | b) {
                return None;
            }
            (vec![(a, b, c | d), (a, d, c | b)], vec![(a, b | d, c)])
        }
        Property::Composition => {
            if !e.holds(a, b, c) || !e.holds(a, d, c) {
                return None;
            }
            (vec![(a, b, c), (a, d, c)], vec![(a, b | d, c)])
        }
        _ => unreachable!("not a general-subset property"),
    };
    let absent: Vec<Statement> = consequents
        .into_iter()
        .filter(|&(x, y, z)| !e.holds(x, y, z))
        .map(|(x, y, z)| stmt(x, y, z))
        .collect();
    (!absent.is_empty()).then(|| Witness {
        antecedents: antecedents
            .into_iter()
            .map(|(x, y, z)| stmt(x, y, z))
            .collect(),
        absent,
    })
}

/// Search all disjoint `(A, B, D, C)` with `A, B, D` non-empty. Conditioning
/// sets are scanned in parallel; the witness with the least `C` wins.
fn general_witness(e: &Evaluator<'_>, p: Property) -> Option<Witness> {
    let all = e.model().ground().all();
    let cs: Vec<VarSet> = all.subsets().collect();
    cs.par_iter().find_map_first(|&c| {
        let r = all - c;
        for a in r.nonempty_subsets() {
            for b in (r - a).nonempty_subsets() {
                for d in (r - a - b).nonempty_subsets() {
                    if let Some(w) = instance_witness(e, p, a, b, d, c) {
                        return Some(w);
                    }
                }
            }
        }
        None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::GroundSet;
    use crate::imodel::{semigraphoid_closure, IndependenceModel};

    fn vector_model(k: usize, stmts: &[(usize, usize, &[usize])]) -> IndependenceModel {
        let mut m = IndependenceModel::new(GroundSet::vector(k).unwrap()).unwrap();
        for &(u, v, c) in stmts {
            m.insert(u - 1, v - 1, c.iter().map(|x| x - 1).collect())
                .unwrap();
        }
        m
    }

    #[test]
    fn evaluator_agrees_with_direct_holds() {
        let m = semigraphoid_closure(&vector_model(
            5,
            &[(1, 2, &[3]), (1, 3, &[]), (4, 5, &[1, 2]), (2, 4, &[])],
        ));
        let e = Evaluator::new(&m);
        let all = m.ground().all();
        for c in all.subsets() {
            for a in (all - c).nonempty_subsets() {
                for b in (all - c - a).nonempty_subsets() {
                    assert_eq!(e.holds(a, b, c), m.holds(a, b, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn unclosed_model_is_rejected() {
        let m = vector_model(3, &[(1, 2, &[3]), (1, 3, &[])]);
        assert!(matches!(
            check_property(&m, Property::Composition),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn intersection_witness_is_rechecked() {
        let m = semigraphoid_closure(&vector_model(3, &[(1, 2, &[3]), (1, 3, &[2])]));
        let r = check_property(&m, Property::Intersection).unwrap();
        assert!(!r.holds);
        assert!(r.witness.unwrap().recheck(&m));
        assert!(check_property(&m, Property::Symmetry).unwrap().holds);
    }

    #[test]
    fn semigraphoid_axioms_hold_on_closures() {
        let m = semigraphoid_closure(&vector_model(
            4,
            &[(1, 2, &[3]), (3, 4, &[]), (1, 4, &[2, 3])],
        ));
        for p in [
            Property::Decomposition,
            Property::WeakUnion,
            Property::Contraction,
        ] {
            assert!(check_property(&m, p).unwrap().holds, "{p}");
        }
    }

    #[test]
    fn elementary_properties() {
        let m = vector_model(3, &[(1, 2, &[]), (1, 2, &[3])]);
        let st = check_property(&m, Property::SingletonTransitivity).unwrap();
        assert!(!st.holds);
        assert!(st.witness.as_ref().unwrap().recheck(&m));
        assert!(check_property(&m, Property::UpwardStability).unwrap().holds);
        assert!(
            check_property(&m, Property::DownwardStability)
                .unwrap()
                .holds
        );
        let m = vector_model(3, &[(1, 2, &[])]);
        let up = check_property(&m, Property::UpwardStability).unwrap();
        assert!(!up.holds && up.witness.unwrap().recheck(&m));
    }

    #[test]
    fn property_names_parse() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
    }
}
