//! Guarded flip decompositions: given an interpretation image `H` of `G`
//! and an enumeration of the witness set, build the flip relation `R` over
//! neighborhood traces, the flipped graph `F(H)`, the expanded source
//! `Ghat` (constants marking the enumeration, flags encoding `R`), and the
//! bounded-range formula `psi` with `F(H) = I_{psi,delta}(Ghat)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dist, DistMatrix, Graph};
use crate::interpret::{apply_interpretation, Interpretation};
use crate::logic::{freshen_binders, range_of, Formula, Term};
use crate::slemma::{s_for_interpretation, SConstruction};

/// A verified-buildable decomposition of an interpretation image.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub interp: Interpretation,
    /// enumeration c_1..c_s of the guard set, as H-ids (repetitions allowed)
    pub s_enum: Vec<usize>,
    /// trace mask per H-vertex over enumeration positions
    pub traces: Vec<u64>,
    /// realized trace masks, ascending
    pub realized: Vec<u64>,
    /// symmetric flip relation over trace masks, stored as canonical pairs
    pub rel: BTreeSet<(u64, u64)>,
    /// the guarded flip of H
    pub fh: Graph,
    pub psi: Formula,
    /// G expanded with constants `c1..cs` and flags `f_A_B`
    pub ghat: Graph,
    /// H-id -> G-id
    pub back_map: Vec<usize>,
    /// the radius bounding psi's range (the certified `5r` when the
    /// enumeration comes from the witness-set construction)
    pub r: u32,
}

fn canon(a: u64, b: u64) -> (u64, u64) {
    (a.min(b), a.max(b))
}

fn flag_name(a: u64, b: u64) -> String {
    format!("f_{a}_{b}")
}

/// Trace mask of every H-vertex over the enumeration positions.
pub fn position_traces(h: &Graph, s_enum: &[usize]) -> Result<Vec<u64>> {
    if s_enum.len() > 60 {
        return Err(Error::InvalidParam(
            "guard enumerations beyond 60 positions are unsupported".into(),
        ));
    }
    (0..h.n())
        .map(|v| {
            let mut mask = 0u64;
            for (i, &c) in s_enum.iter().enumerate() {
                h.check_vertex(c)?;
                if h.has_edge(v, c) {
                    mask |= 1 << i;
                }
            }
            Ok(mask)
        })
        .collect()
}

/// The flip relation: `(A, B)` is related iff some far pair (`dist > r` in
/// the source metric) with traces `A`, `B` is an H-edge.
pub fn build_flip_relation(
    h: &Graph,
    dist: &DistMatrix,
    s_enum: &[usize],
    r: u32,
) -> Result<BTreeSet<(u64, u64)>> {
    let traces = position_traces(h, s_enum)?;
    let mut rel = BTreeSet::new();
    for u in 0..h.n() {
        for v in h.neighbors(u).iter() {
            if u < v && dist.get(u, v).gt(r) {
                rel.insert(canon(traces[u], traces[v]));
            }
        }
    }
    Ok(rel)
}

/// Repeat the last element until the enumeration has the requested arity.
pub fn pad_enumeration(s: &[usize], arity: usize) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::InvalidParam(
            "cannot pad an empty guard enumeration".into(),
        ));
    }
    let mut out = s.to_vec();
    while out.len() < arity {
        out.push(*out.last().expect("nonempty"));
    }
    Ok(out)
}

/// Build the decomposition of `I(G)` guarded by `s_enum` at radius `r`.
///
/// `s_enum` lists H-vertices; when it comes from the witness-set
/// construction, `r` must be the certified radius `5r'`.
pub fn build_decomposition(
    g: &Graph,
    interp: &Interpretation,
    s_enum: &[usize],
    r: u32,
) -> Result<Decomposition> {
    let interpreted = apply_interpretation(g, interp)?;
    let h = interpreted.graph;
    if h.n() > 0 && s_enum.is_empty() {
        return Err(Error::InvalidParam(
            "guard enumeration is empty but the image has vertices".into(),
        ));
    }
    let dist = g.dist_matrix().reindex(&interpreted.back_map);
    let traces = position_traces(&h, s_enum)?;
    let rel = build_flip_relation(&h, &dist, s_enum, r)?;

    let mut realized: Vec<u64> = traces.clone();
    realized.sort_unstable();
    realized.dedup();

    let guarded = h.guarded_partition(s_enum)?;
    let fh = if h.n() == 0 {
        h.clone()
    } else {
        let spec = guarded.flip_spec(h.n(), rel.iter().copied())?;
        h.apply_flip(&spec)?
    };

    let mut ghat = g.clone();
    for (i, &c) in s_enum.iter().enumerate() {
        ghat.set_constant(&format!("c{}", i + 1), interpreted.back_map[c])?;
    }
    for (ai, &a) in realized.iter().enumerate() {
        for &b in &realized[ai..] {
            ghat.set_flag(&flag_name(a, b), rel.contains(&(a, b)));
        }
    }

    let psi = assemble_psi(interp, s_enum.len(), &realized, r);
    Ok(Decomposition {
        interp: interp.clone(),
        s_enum: s_enum.to_vec(),
        traces,
        realized,
        rel,
        fh,
        psi,
        ghat,
        back_map: interpreted.back_map,
        r,
    })
}

/// `psi(x, y) = (phi(x, y) ^ alpha_R(x, y)) & dist<=r(x, y)`, where
/// `alpha_R` tests the trace parts of both ends through the marked
/// constants and reads the flip relation off the flags. Flags exist only
/// for realized trace pairs; the others contribute nothing.
fn assemble_psi(interp: &Interpretation, arity: usize, realized: &[u64], r: u32) -> Formula {
    let part_formula_x = |mask: u64| -> Formula {
        let mut taken = interp.phi.all_var_names();
        taken.extend(interp.delta.all_var_names());
        taken.insert("x".into());
        taken.insert("y".into());
        let mut conjuncts = vec![interp.delta.clone()];
        for i in 0..arity {
            let phi_fresh = freshen_binders(&interp.phi, &mut taken);
            let at_const =
                phi_fresh.substitute(&[("y".to_string(), Term::Const(format!("c{}", i + 1)))]);
            conjuncts.push(if mask >> i & 1 == 1 {
                at_const
            } else {
                Formula::not(at_const)
            });
        }
        Formula::conj(conjuncts)
    };
    let part_formula = |mask: u64, var: &str| -> Formula {
        let px = part_formula_x(mask);
        if var == "x" {
            px
        } else {
            let mut taken = px.all_var_names();
            taken.insert("y".into());
            let fresh = freshen_binders(&px, &mut taken);
            fresh.substitute(&[("x".to_string(), Term::Var("y".into()))])
        }
    };
    let mut disjuncts = Vec::new();
    for &a in realized {
        for &b in realized {
            let (lo, hi) = canon(a, b);
            disjuncts.push(Formula::conj([
                Formula::Flag(flag_name(lo, hi)),
                part_formula(a, "x"),
                part_formula(b, "y"),
            ]));
        }
    }
    let alpha = Formula::and(
        Formula::not(Formula::Eq(Term::Var("x".into()), Term::Var("y".into()))),
        Formula::disj(disjuncts),
    );
    Formula::and(
        Formula::xor(interp.phi.clone(), alpha),
        Formula::DistLe(r, Term::Var("x".into()), Term::Var("y".into())),
    )
}

impl Decomposition {
    /// Rebuild the flipped graph from an alternative relation (used by the
    /// mutation checks).
    pub fn fh_with_rel(&self, h: &Graph, rel: &BTreeSet<(u64, u64)>) -> Result<Graph> {
        let guarded = h.guarded_partition(&self.s_enum)?;
        let spec = guarded.flip_spec(h.n(), rel.iter().copied())?;
        h.apply_flip(&spec)
    }

    /// `psi` with its range guard stripped (used by the mutation checks).
    pub fn psi_without_range_guard(&self) -> Formula {
        match &self.psi {
            Formula::And(core, guard) if matches!(**guard, Formula::DistLe(..)) => {
                (**core).clone()
            }
            other => other.clone(),
        }
    }

    pub fn flag_count(&self) -> usize {
        self.ghat.flags.len()
    }
}

/// Verification report for a decomposition against the image it came from.
#[derive(Clone, Debug, Serialize)]
pub struct DecompReport {
    /// exact graph equality of `F(H)` and `I_{psi,delta}(Ghat)`
    pub identity_ok: bool,
    /// first differing pair (H-ids), when not equal
    pub identity_witness: Option<(usize, usize)>,
    /// measured range of psi over all of `Ghat` is at most `r`
    pub range_ok: bool,
    pub measured_range: Dist,
    pub satisfied_pairs: usize,
    /// re-applying the guarded flip to `F(H)` recovers `H`
    pub roundtrip_ok: bool,
    pub flag_count: usize,
}

impl DecompReport {
    pub fn all_ok(&self) -> bool {
        self.identity_ok && self.range_ok && self.roundtrip_ok
    }
}

/// Check the three defining properties of a decomposition: the
/// interpretation identity, the range bound of `psi` (measured over all
/// vertices of `Ghat`, not just the image domain), and flip reversibility.
pub fn verify_decomposition(d: &Decomposition, h: &Graph) -> Result<DecompReport> {
    let psi_interp = Interpretation::new("psi", d.psi.clone(), d.interp.delta.clone())?;
    let image = apply_interpretation(&d.ghat, &psi_interp)?;
    let mut identity_ok = image.back_map == d.back_map && image.graph.n() == d.fh.n();
    let mut identity_witness = None;
    if identity_ok {
        'outer: for u in 0..d.fh.n() {
            for v in u + 1..d.fh.n() {
                if image.graph.has_edge(u, v) != d.fh.has_edge(u, v) {
                    identity_witness = Some((u, v));
                    identity_ok = false;
                    break 'outer;
                }
            }
        }
    }

    let all: Vec<usize> = (0..d.ghat.n()).collect();
    let range = range_of(&d.ghat, &d.psi, &all, None)?;
    let range_ok = range.max.le(d.r);

    let recovered = d.fh_with_rel(&d.fh, &d.rel)?;
    let roundtrip_ok = &recovered == h;

    Ok(DecompReport {
        identity_ok,
        identity_witness,
        range_ok,
        measured_range: range.max,
        satisfied_pairs: range.satisfied_pairs,
        roundtrip_ok,
        flag_count: d.flag_count(),
    })
}

/// Run the witness-set construction and decompose with its certified
/// radius.
pub fn decompose_with_witness(
    g: &Graph,
    interp: &Interpretation,
    r: u32,
    k_max: usize,
) -> Result<(Decomposition, SConstruction)> {
    let cons = s_for_interpretation(g, interp, r, k_max)?;
    let d = build_decomposition(g, interp, &cons.sset.members, cons.radius)?;
    Ok((d, cons))
}

/// Convert a position-trace relation into one over guard subsets: each
/// position mask maps to the set of distinct guard vertices it selects.
/// Useful for comparing against candidates that index by subsets of the
/// deduplicated guard set.
pub fn rel_on_vertex_sets(
    s_enum: &[usize],
    rel: &BTreeSet<(u64, u64)>,
) -> BTreeMap<(u64, u64), (u64, u64)> {
    let sorted: Vec<usize> = {
        let mut s: Vec<usize> = s_enum.to_vec();
        s.sort_unstable();
        s.dedup();
        s
    };
    let to_set_mask = |pos_mask: u64| -> u64 {
        let mut out = 0u64;
        for (i, &c) in s_enum.iter().enumerate() {
            if pos_mask >> i & 1 == 1 {
                let idx = sorted.binary_search(&c).expect("member of enumeration");
                out |= 1 << idx;
            }
        }
        out
    };
    rel.iter()
        .map(|&(a, b)| {
            let (x, y) = canon(to_set_mask(a), to_set_mask(b));
            ((a, b), (x, y))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::logic::Evaluator;

    fn two_far_cliques(k: usize) -> Graph {
        let mut g = Graph::new(2 * k);
        for u in 0..k {
            for v in u + 1..k {
                g.add_edge(u, v).unwrap();
                g.add_edge(k + u, k + v).unwrap();
            }
        }
        g
    }

    #[test]
    fn flip_relation_empty_cases() {
        // edgeless image
        let g = gen::clique(4).unwrap();
        let i = Interpretation::registry("complement").unwrap();
        let (d, _) = decompose_with_witness(&g, &i, 1, 8).unwrap();
        assert!(d.rel.is_empty());
        // diameter below r: identity on a path, far H-edges cannot exist
        let p = gen::path(6).unwrap();
        let i = Interpretation::registry("identity").unwrap();
        let (d, _) = decompose_with_witness(&p, &i, 1, 8).unwrap();
        assert!(d.rel.is_empty());
        assert_eq!(d.fh, d.interpreted_image(&p));
    }

    impl Decomposition {
        fn interpreted_image(&self, g: &Graph) -> Graph {
            apply_interpretation(g, &self.interp).unwrap().graph
        }
    }

    #[test]
    fn complement_of_two_cliques_has_nonempty_rel() {
        let g = two_far_cliques(3);
        let i = Interpretation::registry("complement").unwrap();
        let (d, cons) = decompose_with_witness(&g, &i, 1, 8).unwrap();
        assert!(!d.rel.is_empty());
        let report = verify_decomposition(&d, &cons.h).unwrap();
        assert!(report.all_ok(), "{report:?}");
        // far cross-clique edges must be gone from the flipped image
        for u in 0..3 {
            for v in 3..6 {
                assert!(!d.fh.has_edge(u, v));
            }
        }
    }

    #[test]
    fn identity_decomposition_keeps_image() {
        for g in [gen::grid(3, 3).unwrap(), gen::random(10, 0.3, 4).unwrap()] {
            let i = Interpretation::registry("identity").unwrap();
            let (d, cons) = decompose_with_witness(&g, &i, 1, 8).unwrap();
            assert_eq!(d.fh, cons.h);
            let report = verify_decomposition(&d, &cons.h).unwrap();
            assert!(report.all_ok(), "{report:?}");
        }
    }

    #[test]
    fn complement_of_k5_is_trivial() {
        let g = gen::clique(5).unwrap();
        let i = Interpretation::registry("complement").unwrap();
        let (d, cons) = decompose_with_witness(&g, &i, 1, 8).unwrap();
        assert_eq!(d.fh.edge_count(), 0);
        assert!(verify_decomposition(&d, &cons.h).unwrap().all_ok());
    }

    #[test]
    fn square_of_path_verifies() {
        let g = gen::path(30).unwrap();
        let i = Interpretation::registry("square").unwrap();
        for r in [1, 2] {
            let (d, cons) = decompose_with_witness(&g, &i, r, 8).unwrap();
            let report = verify_decomposition(&d, &cons.h).unwrap();
            assert!(report.all_ok(), "r = {r}: {report:?}");
        }
    }

    #[test]
    fn psi_agrees_with_unguarded_on_near_pairs() {
        let g = two_far_cliques(3);
        let i = Interpretation::registry("complement").unwrap();
        let (d, _) = decompose_with_witness(&g, &i, 1, 8).unwrap();
        let unguarded = d.psi_without_range_guard();
        let mut ev_full = Evaluator::new(&d.ghat, &d.psi).unwrap();
        let mut ev_core = Evaluator::new(&d.ghat, &unguarded).unwrap();
        let dist = d.ghat.dist_matrix();
        for u in 0..d.ghat.n() {
            for v in 0..d.ghat.n() {
                let full = ev_full.eval_xy(u, v).unwrap();
                let core = ev_core.eval_xy(u, v).unwrap();
                if dist.get(u, v).le(d.r) {
                    assert_eq!(full, core, "near pair ({u},{v})");
                } else {
                    assert!(!full, "far pair ({u},{v}) must not satisfy psi");
                }
            }
        }
    }

    #[test]
    fn toggled_rel_pair_breaks_identity() {
        let g = two_far_cliques(3);
        let i = Interpretation::registry("complement").unwrap();
        let (d, cons) = decompose_with_witness(&g, &i, 1, 8).unwrap();
        let mut tampered = d.clone();
        let victim = *d.rel.iter().next().expect("nonempty relation");
        tampered.rel.remove(&victim);
        tampered.fh = tampered.fh_with_rel(&cons.h, &tampered.rel).unwrap();
        let report = verify_decomposition(&tampered, &cons.h).unwrap();
        assert!(!report.identity_ok);
        assert!(report.identity_witness.is_some());
    }

    #[test]
    fn dropped_range_guard_breaks_range_on_planted_instance() {
        // two far paths with one marked vertex each; phi relates far marked
        // pairs, and a single-vertex guard cannot make the relation depend
        // only on traces, so the unguarded psi reaches across components
        let mut g = Graph::new(6);
        for (u, v) in [(0, 1), (1, 2), (3, 4), (4, 5)] {
            g.add_edge(u, v).unwrap();
        }
        g.set_color("a", [0, 3]);
        let i = Interpretation::from_text(
            "marked",
            "E(x,y) | (x!=y & U_a(x) & U_a(y))",
            "true",
        )
        .unwrap();
        let d = build_decomposition(&g, &i, &[1], 5).unwrap();
        let h = apply_interpretation(&g, &i).unwrap().graph;
        let report = verify_decomposition(&d, &h).unwrap();
        // the bad guard breaks the identity but the guard keeps the range
        assert!(report.range_ok);
        let all: Vec<usize> = (0..d.ghat.n()).collect();
        let unguarded = range_of(&d.ghat, &d.psi_without_range_guard(), &all, None).unwrap();
        assert!(unguarded.max.gt(d.r), "unguarded range {:?}", unguarded.max);
    }

    #[test]
    fn flag_count_is_canonical() {
        // star: traces over a single-center guard realize both subsets
        let mut g = Graph::new(5);
        for v in 1..5 {
            g.add_edge(0, v).unwrap();
        }
        let i = Interpretation::registry("identity").unwrap();
        let h = apply_interpretation(&g, &i).unwrap().graph;
        let _ = h;
        let d = build_decomposition(&g, &i, &[0], 5).unwrap();
        // both traces realized: 2 * (2 + 1) / 2 = 3 canonical flags
        assert_eq!(d.flag_count(), 3);
        assert_eq!(d.realized.len(), 2);
    }

    #[test]
    fn padding_repeats_last() {
        assert_eq!(pad_enumeration(&[4, 7], 4).unwrap(), vec![4, 7, 7, 7]);
        assert!(pad_enumeration(&[], 2).is_err());
    }
}
