//! Seeded random generators for models, graphs and exchangeable tables.

use rand::Rng;

use crate::dist::{table_from_orbits, JointTable, OrbitIndex, OrbitWeighting};
use crate::error::Result;
use crate::exchange::orbit_closure;
use crate::graphs::{EdgeKind, MixedGraph};
use crate::ground::{GroundSet, VarSet};
use crate::imodel::{semigraphoid_closure, IndependenceModel};

/// A random elementary statement `(u, v, C)` with `u < v`; each other
/// element joins `C` with probability one half.
pub fn random_statement<R: Rng>(g: &GroundSet, rng: &mut R) -> (usize, usize, VarSet) {
    let k = g.len();
    let u = rng.gen_range(0..k);
    let v = (u + rng.gen_range(1..k)) % k;
    let c = (g.all().without(u).without(v))
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    (u.min(v), u.max(v), c)
}

/// Up to `max_seeds` random elementary statements (at least one).
pub fn random_model<R: Rng>(
    g: &GroundSet,
    max_seeds: usize,
    rng: &mut R,
) -> Result<IndependenceModel> {
    let mut m = IndependenceModel::new(g.clone())?;
    if g.len() >= 2 {
        for _ in 0..rng.gen_range(1..=max_seeds.max(1)) {
            let (u, v, c) = random_statement(g, rng);
            m.insert(u, v, c)?;
        }
    }
    Ok(m)
}

/// Semi-graphoid closure of [`random_model`].
pub fn random_closed_model<R: Rng>(
    g: &GroundSet,
    max_seeds: usize,
    rng: &mut R,
) -> Result<IndependenceModel> {
    Ok(semigraphoid_closure(&random_model(g, max_seeds, rng)?))
}

/// Exchangeable semi-graphoid: the orbit closure of random seeds, then
/// semi-graphoid closure (which keeps the model exchangeable).
pub fn random_exchangeable_model<R: Rng>(
    g: &GroundSet,
    max_seeds: usize,
    rng: &mut R,
) -> Result<IndependenceModel> {
    Ok(semigraphoid_closure(&orbit_closure(&random_model(
        g, max_seeds, rng,
    )?)?))
}

/// A random simple mixed graph on `k` vertices without semi-directed
/// cycles. Vertices are spread over randomly ordered blocks; each pair is
/// joined with probability `p`, by a line or an arc inside a block and by
/// an arc or a forward arrow between blocks.
pub fn random_mixed_graph<R: Rng>(k: usize, p: f64, rng: &mut R) -> Result<MixedGraph> {
    let mut g = MixedGraph::empty(GroundSet::vector(k)?);
    let block: Vec<usize> = (0..k).map(|_| rng.gen_range(0..k)).collect();
    for u in 0..k {
        for v in u + 1..k {
            if !rng.gen_bool(p) {
                continue;
            }
            let arc = rng.gen_bool(1.0 / 3.0);
            if arc {
                g.add_edge(u, v, EdgeKind::Arc)?;
            } else if block[u] == block[v] {
                g.add_edge(u, v, EdgeKind::Line)?;
            } else if block[u] < block[v] {
                g.add_edge(u, v, EdgeKind::Arrow)?;
            } else {
                g.add_edge(v, u, EdgeKind::Arrow)?;
            }
        }
    }
    Ok(g)
}

/// A random graph with the skeleton of `g`, built like
/// [`random_mixed_graph`].
pub fn random_orientation<R: Rng>(g: &MixedGraph, rng: &mut R) -> Result<MixedGraph> {
    let k = g.len();
    let mut h = MixedGraph::empty(g.ground().clone());
    let block: Vec<usize> = (0..k).map(|_| rng.gen_range(0..k)).collect();
    for (u, v, _) in g.edges() {
        if rng.gen_bool(1.0 / 3.0) {
            h.add_edge(u, v, EdgeKind::Arc)?;
        } else if block[u] == block[v] {
            h.add_edge(u, v, EdgeKind::Line)?;
        } else if block[u] < block[v] {
            h.add_edge(u, v, EdgeKind::Arrow)?;
        } else {
            h.add_edge(v, u, EdgeKind::Arrow)?;
        }
    }
    Ok(h)
}

/// Orbit masses drawn uniformly from `(0, 1)`, each set to zero with
/// probability `p_zero` (at least one orbit stays positive).
pub fn random_orbit_weighting<R: Rng>(
    index: &OrbitIndex,
    p_zero: f64,
    rng: &mut R,
) -> Result<OrbitWeighting> {
    let reps: Vec<VarSet> = index.orbits().map(|o| o.0).collect();
    let mut masses: Vec<(VarSet, f64)> = reps
        .iter()
        .map(|&r| {
            let m = if rng.gen_bool(p_zero) {
                0.0
            } else {
                rng.gen_range(0.01..1.0)
            };
            (r, m)
        })
        .collect();
    if masses.iter().all(|m| m.1 == 0.0) {
        let i = rng.gen_range(0..masses.len());
        masses[i].1 = 1.0;
    }
    OrbitWeighting::from_orbit_masses(index.clone(), masses)
}

/// A random exchangeable table on the full ground set `g`.
pub fn random_exchangeable_table<R: Rng>(
    g: &GroundSet,
    p_zero: f64,
    rng: &mut R,
) -> Result<JointTable> {
    table_from_orbits(&random_orbit_weighting(&OrbitIndex::new(g)?, p_zero, rng)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::is_exchangeable_table;
    use crate::exchange::is_exchangeable_model;
    use crate::ground::dyad_universe;
    use crate::imodel::is_semigraphoid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_objects_have_their_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = dyad_universe(4).unwrap();
        for _ in 0..10 {
            let m = random_exchangeable_model(&g, 2, &mut rng).unwrap();
            assert!(is_semigraphoid(&m) && is_exchangeable_model(&m).unwrap());
            let t = random_exchangeable_table(&g, 0.3, &mut rng).unwrap();
            assert!(is_exchangeable_table(&t).unwrap());
            let h = random_mixed_graph(5, 0.5, &mut rng).unwrap();
            assert_eq!(
                random_orientation(&h, &mut rng).unwrap().skeleton(),
                h.skeleton()
            );
        }
    }
}
