//! Construction of the witness set S over a locality-respecting partition,
//! and the brute-force verifier of its defining property at radius `5r`.
//!
//! Given a pair relation that is generic on far pairs of a partition, every
//! cell is classified as large (three vertices pairwise more than `2r`
//! apart) or small (a center within `2r` of the whole cell), splitting
//! in-between cells into two small halves. S collects the scattered triples,
//! the small centers, and a minimum-order duality witness for the relation
//! restricted to every ordered pair of final cells. The verifier then scans
//! for quadruples far at the target radius whose S-profiles agree but whose
//! relation values differ.

use std::collections::HashMap;

use serde::Serialize;

use crate::bitset::Bitset;
use crate::error::Result;
use crate::graph::{DistMatrix, Graph};
use crate::interpret::{apply_interpretation, phi_defect, Interpretation};
use crate::locality::{check_r_generic, refine_partition, Partition};
use crate::par;
use crate::vc::{find_duality, BiRelation, Side};

/// Classification of one partition cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// three members pairwise farther than 2r apart
    Large { s1: usize, s2: usize, s3: usize },
    /// every member within 2r of the center
    Small { c0: usize },
    /// neither; both halves are small, with the returned centers
    Split {
        c1: Vec<usize>,
        center1: usize,
        c2: Vec<usize>,
        center2: usize,
    },
}

/// Classify a cell by a greedy maximal scattered set, iterating members in
/// ascending id order and keeping those farther than `2r` from everything
/// kept so far. Three or more kept: large (first three); two kept: split
/// around them; one kept: small with it as center.
pub fn classify_cell(cell: &[usize], dist: &DistMatrix, r: u32) -> CellKind {
    let mut kept: Vec<usize> = Vec::new();
    for &v in cell {
        if kept.iter().all(|&w| dist.get(v, w).gt(2 * r)) {
            kept.push(v);
        }
    }
    match kept.len() {
        0 => unreachable!("cells are nonempty"),
        1 => CellKind::Small { c0: kept[0] },
        2 => {
            let (s1, s2) = (kept[0], kept[1]);
            let (c1, c2): (Vec<usize>, Vec<usize>) = cell
                .iter()
                .partition(|&&c| c != s2 && dist.get(c, s1).le(2 * r));
            CellKind::Split {
                c1,
                center1: s1,
                c2,
                center2: s2,
            }
        }
        _ => CellKind::Large {
            s1: kept[0],
            s2: kept[1],
            s3: kept[2],
        },
    }
}

/// Where an element of S came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// member of the scattered triple of a large final cell
    LargeTriple { cell: usize },
    /// center of a small final cell
    SmallCenter { cell: usize },
    /// member of the duality witness for the ordered final-cell pair
    Duality { from: usize, to: usize, side: Side },
}

/// The witness set with its construction metadata.
#[derive(Clone, Debug, Serialize)]
pub struct SSet {
    /// sorted, deduplicated members
    pub members: Vec<usize>,
    pub provenance: Vec<(usize, Provenance)>,
    pub r: u32,
    /// maximum duality order used across cell pairs
    pub k_observed: usize,
    /// final cell count after splitting
    pub t_effective: usize,
    /// final cells (each large or small)
    pub final_cells: Vec<Vec<usize>>,
}

impl SSet {
    /// The closed-form size bound `4 t + k t^2` implied by the construction.
    pub fn size_bound(&self) -> usize {
        4 * self.t_effective + self.k_observed * self.t_effective * self.t_effective
    }
}

/// Build S over a partition that passes `check_r_generic` at radius `r`.
pub fn build_s_set<E>(
    edge: &E,
    dist: &DistMatrix,
    partition: &Partition,
    r: u32,
    k_max: usize,
) -> Result<SSet>
where
    E: Fn(usize, usize) -> bool + Sync,
{
    debug_assert!(check_r_generic(edge, dist, partition, r).is_none());
    let mut provenance: Vec<(usize, Provenance)> = Vec::new();
    let mut final_cells: Vec<Vec<usize>> = Vec::new();
    for cell in partition.cells() {
        match classify_cell(cell, dist, r) {
            CellKind::Large { s1, s2, s3 } => {
                let idx = final_cells.len();
                for s in [s1, s2, s3] {
                    provenance.push((s, Provenance::LargeTriple { cell: idx }));
                }
                final_cells.push(cell.clone());
            }
            CellKind::Small { c0 } => {
                let idx = final_cells.len();
                provenance.push((c0, Provenance::SmallCenter { cell: idx }));
                final_cells.push(cell.clone());
            }
            CellKind::Split {
                c1,
                center1,
                c2,
                center2,
            } => {
                let idx = final_cells.len();
                provenance.push((center1, Provenance::SmallCenter { cell: idx }));
                final_cells.push(c1);
                provenance.push((center2, Provenance::SmallCenter { cell: idx + 1 }));
                final_cells.push(c2);
            }
        }
    }
    let t = final_cells.len();
    // dualities for every ordered final-cell pair, including equal pairs,
    // computed concurrently and merged in pair order
    let witnesses = par::map_range(t * t, |pair_idx| {
        let (ci, di) = (pair_idx / t, pair_idx % t);
        let cell_c = &final_cells[ci];
        let cell_d = &final_cells[di];
        let rel = BiRelation::from_fn(cell_c.len(), cell_d.len(), |i, j| {
            edge(cell_c[i], cell_d[j])
        });
        find_duality(&rel, k_max)
    });
    let mut k_observed = 0;
    for (pair_idx, w) in witnesses.into_iter().enumerate() {
        let (ci, di) = (pair_idx / t, pair_idx % t);
        let w = w?;
        k_observed = k_observed.max(w.order);
        let home = match w.side {
            Side::ASide => &final_cells[ci],
            Side::BSide => &final_cells[di],
        };
        for &local in &w.set {
            provenance.push((
                home[local],
                Provenance::Duality {
                    from: ci,
                    to: di,
                    side: w.side,
                },
            ));
        }
    }
    let mut members: Vec<usize> = provenance.iter().map(|&(v, _)| v).collect();
    members.sort_unstable();
    members.dedup();
    Ok(SSet {
        members,
        provenance,
        r,
        k_observed,
        t_effective: t,
        final_cells,
    })
}

/// A quadruple violating the witness property: far pairs with identical
/// S-profiles but different relation values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Counterexample {
    pub u: usize,
    pub v: usize,
    pub u2: usize,
    pub v2: usize,
}

/// Scan for `u, v, u2, v2` with `dist(u,v) > radius`, `dist(u2,v2) >
/// radius`, `edge(u, S) = edge(u2, S)` elementwise, `edge(S, v) = edge(S,
/// v2)`, and `edge(u, v) != edge(u2, v2)`. Far pairs are grouped by their
/// (row-profile, column-profile) pair; within a group the relation must be
/// constant, and only the canonically first true and false pairs matter.
pub fn verify_s_set<E>(
    edge: &E,
    dist: &DistMatrix,
    universe: usize,
    s: &[usize],
    radius: u32,
) -> Option<Counterexample>
where
    E: Fn(usize, usize) -> bool + Sync,
{
    type Firsts = (Option<(usize, usize)>, Option<(usize, usize)>);
    let row_profile: Vec<Bitset> = (0..universe)
        .map(|u| Bitset::from_iter(s.len(), s.iter().enumerate().filter(|(_, &w)| edge(u, w)).map(|(i, _)| i)))
        .collect();
    let col_profile: Vec<Bitset> = (0..universe)
        .map(|v| Bitset::from_iter(s.len(), s.iter().enumerate().filter(|(_, &w)| edge(w, v)).map(|(i, _)| i)))
        .collect();

    // map far pairs into per-profile-pair first-true/first-false slots; the
    // row scans run in parallel and merge keeping lexicographic minima
    let merge = |mut acc: HashMap<(Bitset, Bitset), Firsts>,
                 part: HashMap<(Bitset, Bitset), Firsts>| {
        for (key, (t, f)) in part {
            let entry = acc.entry(key).or_insert((None, None));
            entry.0 = lex_min(entry.0, t);
            entry.1 = lex_min(entry.1, f);
        }
        acc
    };
    let groups = par::map_range(universe, |u| {
        let mut local: HashMap<(Bitset, Bitset), Firsts> = HashMap::new();
        for v in 0..universe {
            if !dist.get(u, v).gt(radius) {
                continue;
            }
            let key = (row_profile[u].clone(), col_profile[v].clone());
            let entry = local.entry(key).or_insert((None, None));
            let slot = if edge(u, v) { &mut entry.0 } else { &mut entry.1 };
            *slot = lex_min(*slot, Some((u, v)));
        }
        local
    })
    .into_iter()
    .fold(HashMap::new(), merge);

    groups
        .into_values()
        .filter_map(|(t, f)| match (t, f) {
            (Some((u, v)), Some((u2, v2))) => Some(Counterexample { u, v, u2, v2 }),
            _ => None,
        })
        .min()
}

fn lex_min(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// The full run for an interpretation: image, reindexed metric, locality
/// partition, witness set, and the certified radius `5r`.
#[derive(Clone, Debug)]
pub struct SConstruction {
    pub h: Graph,
    pub back_map: Vec<usize>,
    pub dist: DistMatrix,
    pub partition: Partition,
    pub sset: SSet,
    pub radius: u32,
}

/// Apply `interp` to `graph`, refine a locality partition of the image at
/// radius `r` under the source metric, and build the witness set. The
/// returned radius `5r` is the one `verify_s_set` is expected to pass at.
pub fn s_for_interpretation(
    graph: &Graph,
    interp: &Interpretation,
    r: u32,
    k_max: usize,
) -> Result<SConstruction> {
    if let Some(defect) = phi_defect(graph, &interp.phi)? {
        return Err(defect);
    }
    let interpreted = apply_interpretation(graph, interp)?;
    let h = interpreted.graph;
    let dist = graph.dist_matrix().reindex(&interpreted.back_map);
    let edge = |u: usize, v: usize| h.has_edge(u, v);
    let partition = refine_partition(&edge, &dist, h.n(), r);
    let sset = build_s_set(&edge, &dist, &partition, r, k_max)?;
    Ok(SConstruction {
        h,
        back_map: interpreted.back_map,
        dist,
        partition,
        sset,
        radius: 5 * r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn classify_singleton_is_small() {
        let g = gen::path(4).unwrap();
        let dist = g.dist_matrix();
        assert_eq!(classify_cell(&[2], &dist, 1), CellKind::Small { c0: 2 });
    }

    #[test]
    fn classify_scattered_triple_is_large() {
        // three isolated vertices: all distances infinite
        let g = Graph::new(3);
        let dist = g.dist_matrix();
        assert_eq!(
            classify_cell(&[0, 1, 2], &dist, 5),
            CellKind::Large { s1: 0, s2: 1, s3: 2 }
        );
    }

    #[test]
    fn classify_long_path_cell_splits() {
        // a path of 4r + 2 vertices has no 2r-scattered triple and no
        // single center; the split halves are the two 2r-balls
        let r = 1;
        let n = 4 * r as usize + 2;
        let g = gen::path(n).unwrap();
        let dist = g.dist_matrix();
        let cell: Vec<usize> = (0..n).collect();
        match classify_cell(&cell, &dist, r) {
            CellKind::Split { c1, center1, c2, center2 } => {
                assert_eq!(c1, vec![0, 1, 2]);
                assert_eq!(center1, 0);
                assert_eq!(c2, vec![3, 4, 5]);
                assert_eq!(center2, 3);
                for &c in &c1 {
                    assert!(dist.get(c, center1).le(2 * r));
                }
                for &c in &c2 {
                    assert!(dist.get(c, center2).le(2 * r));
                }
            }
            other => panic!("expected split, got {other:?}"),
        }
    }

    #[test]
    fn build_on_single_vertex() {
        let g = Graph::new(1);
        let dist = g.dist_matrix();
        let edge = |u: usize, v: usize| g.has_edge(u, v);
        let p = Partition::single_cell(1);
        let s = build_s_set(&edge, &dist, &p, 1, 8).unwrap();
        assert_eq!(s.members, vec![0]);
        assert!(s.members.len() <= 2);
    }

    #[test]
    fn build_on_edgeless_graph() {
        // single cell, all distances infinite: large triple plus an A-side
        // duality singleton per ordered pair, all deduplicating into a few
        let g = Graph::new(5);
        let dist = g.dist_matrix();
        let edge = |u: usize, v: usize| g.has_edge(u, v);
        let p = Partition::single_cell(5);
        let s = build_s_set(&edge, &dist, &p, 1, 8).unwrap();
        assert_eq!(s.t_effective, 1);
        assert_eq!(s.k_observed, 1);
        assert!(s.members.len() <= 4, "got {:?}", s.members);
        assert!(verify_s_set(&edge, &dist, 5, &s.members, 5).is_none());
    }

    #[test]
    fn verify_trivial_universes() {
        let g = Graph::new(1);
        let dist = g.dist_matrix();
        let edge = |u: usize, v: usize| g.has_edge(u, v);
        assert!(verify_s_set(&edge, &dist, 0, &[], 5).is_none());
        assert!(verify_s_set(&edge, &dist, 1, &[], 5).is_none());
    }

    #[test]
    fn verify_with_s_equal_universe() {
        for seed in 0..5 {
            let g = gen::random(9, 0.4, seed).unwrap();
            let dist = g.dist_matrix();
            let edge = |u: usize, v: usize| g.has_edge(u, v);
            let all: Vec<usize> = (0..9).collect();
            assert!(verify_s_set(&edge, &dist, 9, &all, 1).is_none());
        }
    }

    #[test]
    fn planted_counterexample_is_found() {
        // relate only (0, 1) on an edgeless metric; with S empty all
        // profiles agree, every distinct pair is far, values differ
        let g = Graph::new(4);
        let dist = g.dist_matrix();
        let rel = |u: usize, v: usize| (u, v) == (0, 1);
        let ce = verify_s_set(&rel, &dist, 4, &[], 5).expect("planted violation");
        assert!(rel(ce.u, ce.v));
        assert!(!rel(ce.u2, ce.v2));
    }

    #[test]
    fn complement_of_clique_has_tiny_s() {
        let g = gen::clique(6).unwrap();
        let i = Interpretation::registry("complement").unwrap();
        let c = s_for_interpretation(&g, &i, 1, 8).unwrap();
        assert_eq!(c.partition.len(), 1);
        assert!(c.sset.members.len() <= 2, "{:?}", c.sset.members);
        assert!(verify_s_set(
            &|u, v| c.h.has_edge(u, v),
            &c.dist,
            c.h.n(),
            &c.sset.members,
            c.radius
        )
        .is_none());
    }

    #[test]
    fn square_of_grid_verifies_at_5r() {
        let g = gen::grid(6, 6).unwrap();
        let i = Interpretation::registry("square").unwrap();
        let c = s_for_interpretation(&g, &i, 2, 8).unwrap();
        assert_eq!(c.radius, 10);
        assert!(c.sset.members.len() <= c.sset.size_bound());
        assert!(verify_s_set(
            &|u, v| c.h.has_edge(u, v),
            &c.dist,
            c.h.n(),
            &c.sset.members,
            c.radius
        )
        .is_none());
    }

    #[test]
    fn identity_on_edgeless_is_tiny() {
        let g = Graph::new(6);
        let i = Interpretation::registry("identity").unwrap();
        let c = s_for_interpretation(&g, &i, 1, 8).unwrap();
        assert!(c.sset.members.len() <= 4);
        assert!(verify_s_set(
            &|u, v| c.h.has_edge(u, v),
            &c.dist,
            c.h.n(),
            &c.sset.members,
            c.radius
        )
        .is_none());
    }

    #[test]
    fn splitting_at_most_doubles_cells() {
        for seed in 0..6 {
            let g = gen::random(12, 0.3, seed).unwrap();
            let i = Interpretation::registry("complement").unwrap();
            let c = s_for_interpretation(&g, &i, 1, 8).unwrap();
            assert!(c.sset.t_effective <= 2 * c.partition.len());
            assert!(c.sset.members.len() <= c.sset.size_bound());
        }
    }
}
