//! VC dimension, shatter functions, and minimum-order duality witnesses for
//! finite binary relations.

use serde::Serialize;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A binary relation `E` between two finite index sets `A` (rows, `0..a`)
/// and `B` (columns, `0..b`), stored as one bitset over `A` per column.
#[derive(Clone, Debug)]
pub struct BiRelation {
    a: usize,
    b: usize,
    cols: Vec<Bitset>,
}

impl BiRelation {
    pub fn new(a: usize, b: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut cols = vec![Bitset::new(a); b];
        for (i, j) in pairs {
            if i >= a {
                return Err(Error::InvalidVertex(i, a));
            }
            if j >= b {
                return Err(Error::InvalidVertex(j, b));
            }
            cols[j].insert(i);
        }
        Ok(BiRelation { a, b, cols })
    }

    /// Build from a membership predicate, called in column-major order.
    pub fn from_fn(a: usize, b: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut cols = vec![Bitset::new(a); b];
        for (j, col) in cols.iter_mut().enumerate() {
            for i in 0..a {
                if f(i, j) {
                    col.insert(i);
                }
            }
        }
        BiRelation { a, b, cols }
    }

    /// The edge relation of a graph as a relation on `V x V`.
    pub fn from_graph_edges(g: &Graph) -> Self {
        BiRelation {
            a: g.n(),
            b: g.n(),
            cols: (0..g.n()).map(|v| g.neighbors(v).clone()).collect(),
        }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    #[inline]
    pub fn holds(&self, i: usize, j: usize) -> bool {
        self.cols[j].contains(i)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct RelJson {
            a: usize,
            b: usize,
            pairs: Vec<(usize, usize)>,
        }
        let r: RelJson = serde_json::from_value(value.clone())?;
        BiRelation::new(r.a, r.b, r.pairs)
    }

    /// Distinct column traces restricted to the row subset `rows`.
    fn traces_on(&self, rows: &[usize]) -> Vec<u64> {
        debug_assert!(rows.len() <= 64);
        let mut traces: Vec<u64> = self
            .cols
            .iter()
            .map(|col| {
                rows.iter()
                    .enumerate()
                    .filter(|(_, &i)| col.contains(i))
                    .fold(0u64, |m, (pos, _)| m | 1 << pos)
            })
            .collect();
        traces.sort_unstable();
        traces.dedup();
        traces
    }
}

/// Largest `d` such that some d-subset of `A` is shattered by the column
/// traces, by exhaustive subset search (increasing `d`; shattering is
/// monotone under subsets, so the first empty level ends the search).
pub fn vc_dimension(rel: &BiRelation) -> usize {
    if rel.b == 0 {
        return 0;
    }
    let mut best = 0;
    for d in 1..=rel.a.min(20) {
        let mut subset: Vec<usize> = Vec::new();
        if any_shattered(rel, d, 0, &mut subset) {
            best = d;
        } else {
            break;
        }
    }
    best
}

fn any_shattered(rel: &BiRelation, d: usize, start: usize, subset: &mut Vec<usize>) -> bool {
    if subset.len() == d {
        return rel.traces_on(subset).len() == 1 << d;
    }
    for i in start..rel.a {
        subset.push(i);
        // quick necessity check: the chosen prefix must still realize all
        // patterns on itself
        if rel.traces_on(subset).len() == 1 << subset.len()
            && any_shattered(rel, d, i + 1, subset)
        {
            subset.pop();
            return true;
        }
        subset.pop();
    }
    false
}

/// `pi_R(m)`: maximum number of distinct column traces over any m-subset of
/// `A` (m clamped to `|A|`).
pub fn shatter_function(rel: &BiRelation, m: usize) -> usize {
    let m = m.min(rel.a);
    let mut best = 0;
    let mut subset = Vec::new();
    shatter_rec(rel, m, 0, &mut subset, &mut best);
    best
}

fn shatter_rec(rel: &BiRelation, m: usize, start: usize, subset: &mut Vec<usize>, best: &mut usize) {
    if subset.len() == m {
        *best = (*best).max(rel.traces_on(subset).len());
        return;
    }
    for i in start..rel.a {
        subset.push(i);
        shatter_rec(rel, m, i + 1, subset, best);
        subset.pop();
    }
}

/// Which side of the duality a witness lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// a set `A' <= A` meeting the non-neighborhood of every `b in B`
    ASide,
    /// a set `B' <= B` meeting the neighborhood of every `a in A`
    BSide,
}

/// A one-sided duality witness: on the A-side, for every `b` some member
/// `a` has `!E(a, b)`; on the B-side, for every `a` some member `b` has
/// `E(a, b)`.
#[derive(Clone, Debug, Serialize)]
pub struct DualityWitness {
    pub side: Side,
    pub set: Vec<usize>,
    pub order: usize,
}

impl DualityWitness {
    /// Full scan of the defining condition.
    pub fn verify(&self, rel: &BiRelation) -> bool {
        match self.side {
            Side::ASide => (0..rel.b).all(|b| self.set.iter().any(|&a| !rel.holds(a, b))),
            Side::BSide => (0..rel.a).all(|a| self.set.iter().any(|&b| rel.holds(a, b))),
        }
    }
}

/// Minimum-order duality witness with order at most `k_max`, searching both
/// sides by iterative deepening. Ties between sides break toward the
/// B-side; within a side and order, the lexicographically least set wins.
pub fn find_duality(rel: &BiRelation, k_max: usize) -> Result<DualityWitness> {
    // hitting-set families: B-side hits row neighborhoods, A-side hits
    // column non-neighborhoods
    let b_families: Vec<Bitset> = (0..rel.a)
        .map(|i| Bitset::from_iter(rel.b, (0..rel.b).filter(|&j| rel.holds(i, j))))
        .collect();
    let a_families: Vec<Bitset> = (0..rel.b)
        .map(|j| Bitset::from_iter(rel.a, (0..rel.a).filter(|&i| !rel.holds(i, j))))
        .collect();

    // vacuous sides: no constraints at all
    if rel.a == 0 {
        return Ok(witness(rel, Side::BSide, vec![]));
    }
    if rel.b == 0 {
        return Ok(witness(rel, Side::ASide, vec![]));
    }

    let b_feasible = b_families.iter().all(|f| !f.is_empty());
    let a_feasible = a_families.iter().all(|f| !f.is_empty());
    let b_bound = greedy_cover(&b_families, rel.b);
    let a_bound = greedy_cover(&a_families, rel.a);

    for k in 1..=k_max {
        if b_feasible && k <= b_bound {
            if let Some(set) = hitting_set_lex(&b_families, rel.b, k) {
                return Ok(witness(rel, Side::BSide, set));
            }
        }
        if a_feasible && k <= a_bound {
            if let Some(set) = hitting_set_lex(&a_families, rel.a, k) {
                return Ok(witness(rel, Side::ASide, set));
            }
        }
    }
    Err(Error::NoDuality(k_max))
}

fn witness(rel: &BiRelation, side: Side, set: Vec<usize>) -> DualityWitness {
    let w = DualityWitness {
        side,
        order: set.len(),
        set,
    };
    debug_assert!(w.verify(rel), "duality witness failed its defining scan");
    w
}

/// Size of a greedy cover, seeding the deepening bound.
fn greedy_cover(families: &[Bitset], universe: usize) -> usize {
    let mut uncovered: Vec<usize> = (0..families.len()).collect();
    let mut picks = 0;
    while !uncovered.is_empty() {
        let best = (0..universe)
            .max_by_key(|&x| uncovered.iter().filter(|&&f| families[f].contains(x)).count())
            .expect("universe nonempty while families remain");
        let covered_now = uncovered
            .iter()
            .filter(|&&f| families[f].contains(best))
            .count();
        if covered_now == 0 {
            return usize::MAX; // infeasible: some family is empty
        }
        uncovered.retain(|&f| !families[f].contains(best));
        picks += 1;
    }
    picks
}

/// Lexicographically least hitting set of exactly `k` elements, or `None`.
/// Elements are chosen in ascending order; a branch dies when some family
/// can no longer be hit by the remaining candidates or when a packing of
/// pairwise disjoint uncovered families exceeds the remaining budget.
fn hitting_set_lex(families: &[Bitset], universe: usize, k: usize) -> Option<Vec<usize>> {
    fn packing_bound(families: &[Bitset], uncovered: &[usize]) -> usize {
        let mut used: Option<Bitset> = None;
        let mut count = 0;
        for &f in uncovered {
            let fam = &families[f];
            match &mut used {
                None => {
                    used = Some(fam.clone());
                    count = 1;
                }
                Some(u) => {
                    if !u.intersects(fam) {
                        u.or_with(fam);
                        count += 1;
                    }
                }
            }
        }
        count
    }

    fn go(
        families: &[Bitset],
        universe: usize,
        k: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        uncovered: &[usize],
    ) -> bool {
        if uncovered.is_empty() {
            // pad deterministically: the defining conditions only require
            // covering, so extend with the smallest unused elements
            let mut x = 0;
            while chosen.len() < k && x < universe {
                if !chosen.contains(&x) {
                    chosen.push(x);
                }
                x += 1;
            }
            return chosen.len() == k;
        }
        let remaining = k - chosen.len();
        if remaining == 0 {
            return false;
        }
        if packing_bound(families, uncovered) > remaining {
            return false;
        }
        // every uncovered family must retain a candidate >= start
        if uncovered
            .iter()
            .any(|&f| !families[f].iter().any(|x| x >= start))
        {
            return false;
        }
        for x in start..universe {
            chosen.push(x);
            let next: Vec<usize> = uncovered
                .iter()
                .copied()
                .filter(|&f| !families[f].contains(x))
                .collect();
            if go(families, universe, k, x + 1, chosen, &next) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let uncovered: Vec<usize> = (0..families.len()).collect();
    let mut chosen = Vec::new();
    if go(families, universe, k, 0, &mut chosen, &uncovered) {
        Some(chosen)
    } else {
        None
    }
}
