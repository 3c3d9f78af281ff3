//! k-expressions, exact cliquewidth for small graphs, and local cliquewidth.
//!
//! The exact search runs per label budget k. Because a join may be inserted
//! at any point where it is legal (it only ever adds edges of the target
//! graph), expressions can be normalized so that all legal joins are applied
//! eagerly; a search state then reduces to a partition of a vertex subset
//! into at most k label cells whose induced edges are all present. Unions
//! combine two disjoint states under some identification of their cells, and
//! a state is viable only if vertices sharing a cell agree on their
//! adjacency outside the subset. States are memoized per subset with
//! provenance for witness reconstruction.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;

/// A clique-width expression: `v(i)` creates a labeled vertex, `u(e1,e2)` is
/// disjoint union, `j(i,j,e)` adds all edges between labels i and j, and
/// `r(i,j,e)` renames label i to j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KExpression {
    Create(u32),
    Union(Box<KExpression>, Box<KExpression>),
    Join(u32, u32, Box<KExpression>),
    Relabel(u32, u32, Box<KExpression>),
}

/// A graph together with its vertex labels, as produced by a k-expression.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<u32>,
}

impl KExpression {
    pub fn parse(text: &str) -> Result<KExpression> {
        let mut p = KParser {
            bytes: text.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(Error::KExpression(format!(
                "trailing input at offset {}",
                p.pos
            )));
        }
        Ok(e)
    }

    /// Largest label mentioned anywhere.
    pub fn width(&self) -> u32 {
        match self {
            KExpression::Create(i) => *i,
            KExpression::Union(a, b) => a.width().max(b.width()),
            KExpression::Join(i, j, e) | KExpression::Relabel(i, j, e) => {
                (*i).max(*j).max(e.width())
            }
        }
    }

    pub fn eval(&self) -> Result<LabeledGraph> {
        match self {
            KExpression::Create(label) => {
                if *label == 0 {
                    return Err(Error::KExpression("labels start at 1".into()));
                }
                Ok(LabeledGraph {
                    graph: Graph::new(1),
                    labels: vec![*label],
                })
            }
            KExpression::Union(a, b) => {
                let la = a.eval()?;
                let lb = b.eval()?;
                let na = la.graph.n();
                let mut g = Graph::new(na + lb.graph.n());
                for (u, v) in la.graph.edges() {
                    g.add_edge(u, v)?;
                }
                for (u, v) in lb.graph.edges() {
                    g.add_edge(na + u, na + v)?;
                }
                let mut labels = la.labels;
                labels.extend(lb.labels);
                Ok(LabeledGraph { graph: g, labels })
            }
            KExpression::Join(i, j, e) => {
                if i == j {
                    return Err(Error::KExpression(format!("join({i},{i}) is not allowed")));
                }
                if *i == 0 || *j == 0 {
                    return Err(Error::KExpression("labels start at 1".into()));
                }
                let mut l = e.eval()?;
                let left: Vec<usize> = (0..l.graph.n()).filter(|&v| l.labels[v] == *i).collect();
                let right: Vec<usize> = (0..l.graph.n()).filter(|&v| l.labels[v] == *j).collect();
                for &u in &left {
                    for &v in &right {
                        if !l.graph.has_edge(u, v) {
                            l.graph.add_edge(u, v)?;
                        }
                    }
                }
                Ok(l)
            }
            KExpression::Relabel(i, j, e) => {
                if *i == 0 || *j == 0 {
                    return Err(Error::KExpression("labels start at 1".into()));
                }
                let mut l = e.eval()?;
                for lab in &mut l.labels {
                    if lab == i {
                        *lab = *j;
                    }
                }
                Ok(l)
            }
        }
    }
}

impl std::fmt::Display for KExpression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KExpression::Create(i) => write!(f, "v({i})"),
            KExpression::Union(a, b) => write!(f, "u({a},{b})"),
            KExpression::Join(i, j, e) => write!(f, "j({i},{j},{e})"),
            KExpression::Relabel(i, j, e) => write!(f, "r({i},{j},{e})"),
        }
    }
}

struct KParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl KParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::KExpression(format!(
                "expected '{}' at offset {}",
                c as char, self.pos
            )))
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::KExpression(format!(
                "expected integer at offset {start}"
            )));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::KExpression(format!("integer out of range at offset {start}")))
    }

    fn expr(&mut self) -> Result<KExpression> {
        self.skip_ws();
        let op = self
            .bytes
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::KExpression(format!("expected expression at offset {}", self.pos)))?;
        self.pos += 1;
        match op {
            b'v' => {
                self.expect(b'(')?;
                let i = self.int()?;
                self.expect(b')')?;
                Ok(KExpression::Create(i))
            }
            b'u' => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                Ok(KExpression::Union(Box::new(a), Box::new(b)))
            }
            b'j' | b'r' => {
                self.expect(b'(')?;
                let i = self.int()?;
                self.expect(b',')?;
                let j = self.int()?;
                self.expect(b',')?;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(if op == b'j' {
                    KExpression::Join(i, j, Box::new(e))
                } else {
                    KExpression::Relabel(i, j, Box::new(e))
                })
            }
            other => Err(Error::KExpression(format!(
                "unknown operation '{}' at offset {}",
                other as char,
                self.pos - 1
            ))),
        }
    }
}

/// Outcome of an exact cliquewidth computation under a label cap.
#[derive(Clone, Debug)]
pub enum CwResult {
    Exact { k: u32, witness: KExpression },
    ExceedsCap { cap: u32, upper_hint: u32 },
}

impl CwResult {
    pub fn value(&self) -> CwValue {
        match self {
            CwResult::Exact { k, .. } => CwValue::Exact(*k),
            CwResult::ExceedsCap { cap, .. } => CwValue::ExceedsCap(*cap),
        }
    }
}

/// Just the numeric outcome, ordered: any `ExceedsCap(c)` sits above
/// `Exact(k)` for k <= c.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum CwValue {
    #[serde(rename = "exact")]
    Exact(u32),
    #[serde(rename = "exceeds_cap")]
    ExceedsCap(u32),
}

impl CwValue {
    pub fn rank(self) -> u64 {
        match self {
            CwValue::Exact(k) => k as u64,
            CwValue::ExceedsCap(c) => c as u64 + 1,
        }
    }
}

const MAX_EXACT_N: usize = 16;

/// Least k <= `k_cap` admitting a k-expression for `g`, with a witness
/// expression, or `ExceedsCap` with a crude upper-bound hint.
pub fn cliquewidth_exact(g: &Graph, k_cap: u32) -> Result<CwResult> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParam("cliquewidth of the empty graph".into()));
    }
    if n > MAX_EXACT_N {
        return Err(Error::InvalidParam(format!(
            "exact cliquewidth supports at most {MAX_EXACT_N} vertices, got {n}"
        )));
    }
    let adj: Vec<u16> = (0..n)
        .map(|v| {
            let mut m = 0u16;
            for w in g.neighbors(v).iter() {
                m |= 1 << w;
            }
            m
        })
        .collect();
    for k in 1..=k_cap {
        if let Some(witness) = Solver::new(&adj, n, k as usize).run() {
            debug_assert!(witness.width() <= k);
            return Ok(CwResult::Exact { k, witness });
        }
    }
    Ok(CwResult::ExceedsCap {
        cap: k_cap,
        upper_hint: neighborhood_class_bound(&adj),
    })
}

/// Number of distinct open neighborhoods: labeling each class with one label
/// and joining adjacent classes yields a valid expression, so this bounds
/// the cliquewidth from above. Reported as a hint only.
fn neighborhood_class_bound(adj: &[u16]) -> u32 {
    let mut rows: Vec<u16> = adj.to_vec();
    rows.sort_unstable();
    rows.dedup();
    rows.len() as u32
}

type StateRef = (u16, usize);

enum Prov {
    Leaf,
    Union {
        a: StateRef,
        b: StateRef,
        /// per group: member cell indices on each side
        groups: Vec<(Vec<usize>, Vec<usize>)>,
        /// group index pairs joined after the union
        joins: Vec<(usize, usize)>,
    },
}

struct StateRec {
    cells: Vec<u16>,
    prov: Prov,
}

struct Solver<'a> {
    adj: &'a [u16],
    n: usize,
    k: usize,
    states: HashMap<u16, Vec<StateRec>>,
    seen: HashMap<u16, std::collections::HashSet<Vec<u16>>>,
}

impl<'a> Solver<'a> {
    fn new(adj: &'a [u16], n: usize, k: usize) -> Self {
        Solver {
            adj,
            n,
            k,
            states: HashMap::new(),
            seen: HashMap::new(),
        }
    }

    fn any_edge_between(&self, x: u16, y: u16) -> bool {
        let mut m = x;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if self.adj[v] & y != 0 {
                return true;
            }
        }
        false
    }

    fn complete_between(&self, x: u16, y: u16) -> bool {
        let mut m = x;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if y & !self.adj[v] != 0 {
                return false;
            }
        }
        true
    }

    fn run(&mut self) -> Option<KExpression> {
        let full: u32 = (1u32 << self.n) - 1;
        let mut subsets: Vec<u16> = (1..=full).map(|s| s as u16).collect();
        subsets.sort_by_key(|s| s.count_ones());
        for s in subsets {
            if s.count_ones() == 1 {
                self.insert(s, vec![s], Prov::Leaf);
            } else {
                self.build_subset(s);
            }
            if u32::from(s) == full && self.states.get(&s).is_some_and(|v| !v.is_empty()) {
                let cells = self.states[&s][0].cells.len();
                let desired: Vec<u32> = (1..=cells as u32).collect();
                return Some(self.reconstruct((s, 0), &desired));
            }
        }
        None
    }

    fn insert(&mut self, subset: u16, cells: Vec<u16>, prov: Prov) {
        let seen = self.seen.entry(subset).or_default();
        if seen.insert(cells.clone()) {
            self.states
                .entry(subset)
                .or_default()
                .push(StateRec { cells, prov });
        }
    }

    fn build_subset(&mut self, s: u16) {
        let low = s & s.wrapping_neg();
        // iterate proper submasks containing the lowest bit of s
        let rest = s & !low;
        let mut sub = rest;
        loop {
            let a = sub | low;
            let b = s & !a;
            if b != 0 {
                self.combine(s, a, b);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    fn combine(&mut self, s: u16, a: u16, b: u16) {
        let na = self.states.get(&a).map_or(0, Vec::len);
        let nb = self.states.get(&b).map_or(0, Vec::len);
        for ia in 0..na {
            for ib in 0..nb {
                let ca = self.states[&a][ia].cells.clone();
                let cb = self.states[&b][ib].cells.clone();
                self.groupings(s, (a, ia), (b, ib), &ca, &cb);
            }
        }
    }

    /// Enumerate identifications of the two cell lists into at most k
    /// groups, checking viability incrementally. A group is represented as
    /// `(a_mask, b_mask, out_row, a_cells, b_cells)`.
    fn groupings(&mut self, s: u16, ra: StateRef, rb: StateRef, ca: &[u16], cb: &[u16]) {
        let out = !s;
        let m = ca.len() + cb.len();
        let cell = |i: usize| if i < ca.len() { ca[i] } else { cb[i - ca.len()] };
        let out_row_of = |mask: u16| {
            let v = mask.trailing_zeros() as usize;
            self.adj[v] & out
        };
        // quick check: cells with inconsistent outside rows can never merge,
        // and every cell must itself be outside-consistent
        for i in 0..m {
            let mask = cell(i);
            let row = out_row_of(mask);
            let mut mm = mask;
            while mm != 0 {
                let v = mm.trailing_zeros() as usize;
                mm &= mm - 1;
                if self.adj[v] & out != row {
                    return;
                }
            }
        }

        let mut groups: Vec<(u16, u16, u16, Vec<usize>, Vec<usize>)> = Vec::new();
        let mut results: Vec<(Vec<(Vec<usize>, Vec<usize>)>, Vec<u16>)> = Vec::new();
        self.assign(0, m, ca.len(), &cell, &out_row_of, &mut groups, &mut results);
        for (group_spec, masks) in results {
            // joins: group pairs with cross-side edges must be completable
            let mut joined = Vec::new();
            let mut ok = true;
            'pairs: for gi in 0..group_spec.len() {
                for gj in gi + 1..group_spec.len() {
                    let (ga, gb) = (&group_spec[gi], &group_spec[gj]);
                    let a_mask_i: u16 = ga.0.iter().map(|&c| ca[c]).fold(0, |x, y| x | y);
                    let b_mask_i: u16 = ga.1.iter().map(|&c| cb[c]).fold(0, |x, y| x | y);
                    let a_mask_j: u16 = gb.0.iter().map(|&c| ca[c]).fold(0, |x, y| x | y);
                    let b_mask_j: u16 = gb.1.iter().map(|&c| cb[c]).fold(0, |x, y| x | y);
                    let needs = self.any_edge_between(a_mask_i, b_mask_j)
                        || self.any_edge_between(b_mask_i, a_mask_j);
                    if needs {
                        if !self.complete_between(masks[gi], masks[gj]) {
                            ok = false;
                            break 'pairs;
                        }
                        joined.push((gi, gj));
                    }
                }
            }
            if !ok {
                continue;
            }
            // canonical order: sort group masks, permuting the spec alongside
            let mut order: Vec<usize> = (0..masks.len()).collect();
            order.sort_by_key(|&g| masks[g]);
            let cells: Vec<u16> = order.iter().map(|&g| masks[g]).collect();
            let rank: HashMap<usize, usize> =
                order.iter().enumerate().map(|(pos, &g)| (g, pos)).collect();
            let groups_sorted: Vec<(Vec<usize>, Vec<usize>)> =
                order.iter().map(|&g| group_spec[g].clone()).collect();
            let joins_sorted: Vec<(usize, usize)> = joined
                .iter()
                .map(|&(gi, gj)| (rank[&gi], rank[&gj]))
                .collect();
            self.insert(
                s,
                cells,
                Prov::Union {
                    a: ra,
                    b: rb,
                    groups: groups_sorted,
                    joins: joins_sorted,
                },
            );
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        i: usize,
        m: usize,
        a_count: usize,
        cell: &impl Fn(usize) -> u16,
        out_row_of: &impl Fn(u16) -> u16,
        groups: &mut Vec<(u16, u16, u16, Vec<usize>, Vec<usize>)>,
        results: &mut Vec<(Vec<(Vec<usize>, Vec<usize>)>, Vec<u16>)>,
    ) {
        if i == m {
            results.push((
                groups
                    .iter()
                    .map(|g| (g.3.clone(), g.4.clone()))
                    .collect(),
                groups.iter().map(|g| g.0 | g.1).collect(),
            ));
            return;
        }
        let mask = cell(i);
        let row = out_row_of(mask);
        let is_a = i < a_count;
        let local = if is_a { i } else { i - a_count };
        for gi in 0..groups.len() {
            let (ga, gb, grow, ..) = (groups[gi].0, groups[gi].1, groups[gi].2);
            if grow != row {
                continue;
            }
            // merging into this group: no graph edges may cross sides inside
            let other_side = if is_a { gb } else { ga };
            if self.any_edge_between(mask, other_side) {
                continue;
            }
            if is_a {
                groups[gi].0 |= mask;
                groups[gi].3.push(local);
            } else {
                groups[gi].1 |= mask;
                groups[gi].4.push(local);
            }
            self.assign(i + 1, m, a_count, cell, out_row_of, groups, results);
            if is_a {
                groups[gi].0 &= !mask;
                groups[gi].3.pop();
            } else {
                groups[gi].1 &= !mask;
                groups[gi].4.pop();
            }
        }
        if groups.len() < self.k {
            groups.push(if is_a {
                (mask, 0, row, vec![local], vec![])
            } else {
                (0, mask, row, vec![], vec![local])
            });
            self.assign(i + 1, m, a_count, cell, out_row_of, groups, results);
            groups.pop();
        }
    }

    /// Build a k-expression that produces the state's cells carrying
    /// `desired` labels (one distinct label per canonical cell).
    fn reconstruct(&self, state: StateRef, desired: &[u32]) -> KExpression {
        let rec = &self.states[&state.0][state.1];
        match &rec.prov {
            Prov::Leaf => KExpression::Create(desired[0]),
            Prov::Union { a, b, groups, joins } => {
                let build_side = |side_ref: StateRef, side_is_a: bool| {
                    let side_cells = self.states[&side_ref.0][side_ref.1].cells.len();
                    let mut labels = vec![0u32; side_cells];
                    // reserve the labels of every group present on this side
                    // before handing out scratch labels
                    let mut used: Vec<u32> = groups
                        .iter()
                        .enumerate()
                        .filter(|(_, spec)| {
                            !(if side_is_a { &spec.0 } else { &spec.1 }).is_empty()
                        })
                        .map(|(g, _)| desired[g])
                        .collect();
                    let mut merges: Vec<(u32, u32)> = Vec::new();
                    for (g, spec) in groups.iter().enumerate() {
                        let members = if side_is_a { &spec.0 } else { &spec.1 };
                        for (pos, &c) in members.iter().enumerate() {
                            if pos == 0 {
                                labels[c] = desired[g];
                            } else {
                                // scratch label, merged into the group after
                                let scratch = (1..=self.k as u32)
                                    .find(|l| !used.contains(l))
                                    .expect("side has at most k cells");
                                labels[c] = scratch;
                                used.push(scratch);
                                merges.push((scratch, desired[g]));
                            }
                        }
                    }
                    let mut expr = self.reconstruct(side_ref, &labels);
                    for (from, to) in merges {
                        expr = KExpression::Relabel(from, to, Box::new(expr));
                    }
                    expr
                };
                let ea = build_side(*a, true);
                let eb = build_side(*b, false);
                let mut expr = KExpression::Union(Box::new(ea), Box::new(eb));
                for &(gi, gj) in joins {
                    expr = KExpression::Join(desired[gi], desired[gj], Box::new(expr));
                }
                expr
            }
        }
    }
}

/// Per-vertex cliquewidth of the radius-`r` ball, and the maximum.
#[derive(Clone, Debug, Serialize)]
pub struct LcwReport {
    pub r: u32,
    pub value: CwValue,
    pub per_vertex: Vec<CwValue>,
    pub max_ball_size: usize,
}

/// `lcw_r(G)`: maximum cliquewidth over all radius-`r` balls. Errors with
/// the offending vertex if some ball exceeds `ball_budget`.
pub fn local_cliquewidth(g: &Graph, r: u32, k_cap: u32, ball_budget: usize) -> Result<LcwReport> {
    if g.n() == 0 {
        return Err(Error::InvalidParam("local cliquewidth of the empty graph".into()));
    }
    let budget = ball_budget.min(MAX_EXACT_N);
    let balls: Vec<Vec<usize>> = (0..g.n())
        .map(|v| g.ball(v, r))
        .collect::<Result<_>>()?;
    if let Some(v) = (0..g.n()).find(|&v| balls[v].len() > budget) {
        return Err(Error::BallTooLarge {
            vertex: v,
            size: balls[v].len(),
            budget,
        });
    }
    let max_ball_size = balls.iter().map(Vec::len).max().unwrap_or(0);
    let per_vertex: Vec<CwValue> = par::map_items(&balls, |ball| {
        let sub = g.induced_subgraph(ball).expect("ball vertices are valid");
        cliquewidth_exact(&sub.graph, k_cap)
            .map(|r| r.value())
            .expect("ball within size budget")
    });
    let value = per_vertex
        .iter()
        .copied()
        .max_by_key(|v| v.rank())
        .expect("graph is nonempty");
    Ok(LcwReport {
        r,
        value,
        per_vertex,
        max_ball_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn exact(g: &Graph, cap: u32) -> u32 {
        match cliquewidth_exact(g, cap).unwrap() {
            CwResult::Exact { k, witness } => {
                // the witness must rebuild the graph exactly, vertex order
                // following construction order
                let built = witness.eval().unwrap();
                assert_eq!(built.graph.n(), g.n());
                let iso = relabeling_to(g, &built.graph);
                assert!(iso, "witness graph not isomorphic to input\n{witness}");
                k
            }
            CwResult::ExceedsCap { .. } => panic!("expected exact value"),
        }
    }

    /// Exhaustive isomorphism check for tiny graphs.
    fn relabeling_to(a: &Graph, b: &Graph) -> bool {
        if a.n() != b.n() || a.edge_count() != b.edge_count() {
            return false;
        }
        let n = a.n();
        let mut perm: Vec<usize> = (0..n).collect();
        fn go(perm: &mut Vec<usize>, i: usize, a: &Graph, b: &Graph) -> bool {
            let n = a.n();
            if i == n {
                return (0..n).all(|u| {
                    (u + 1..n).all(|v| a.has_edge(u, v) == b.has_edge(perm[u], perm[v]))
                });
            }
            for j in i..n {
                perm.swap(i, j);
                let consistent = (0..i).all(|u| a.has_edge(u, i) == b.has_edge(perm[u], perm[i]));
                if consistent && go(perm, i + 1, a, b) {
                    return true;
                }
                perm.swap(i, j);
            }
            false
        }
        go(&mut perm, 0, a, b)
    }

    #[test]
    fn kexpr_eval_k2_and_edgeless() {
        let e = KExpression::parse("j(1,2,u(v(1),v(2)))").unwrap();
        let g = e.eval().unwrap().graph;
        assert_eq!((g.n(), g.edge_count()), (2, 1));
        let e = KExpression::parse("u(u(v(1),v(1)),v(1))").unwrap();
        let g = e.eval().unwrap().graph;
        assert_eq!((g.n(), g.edge_count()), (3, 0));
    }

    #[test]
    fn kexpr_k3_with_two_labels() {
        // grow a triangle with labels 1, 2 only
        let text = "j(1,2,u(r(2,1,j(1,2,u(v(1),v(2)))),v(2)))";
        let g = KExpression::parse(text).unwrap().eval().unwrap().graph;
        assert_eq!((g.n(), g.edge_count()), (3, 3));
    }

    #[test]
    fn kexpr_errors() {
        assert!(matches!(
            KExpression::parse("j(1,1,v(1))").unwrap().eval(),
            Err(Error::KExpression(_))
        ));
        assert!(matches!(
            KExpression::parse("v(0)").unwrap().eval(),
            Err(Error::KExpression(_))
        ));
        assert!(KExpression::parse("w(1)").is_err());
        assert!(KExpression::parse("u(v(1)").is_err());
    }

    #[test]
    fn cw_single_vertex() {
        assert_eq!(exact(&Graph::new(1), 3), 1);
    }

    #[test]
    fn cw_cliques_are_two() {
        for n in 2..=6 {
            assert_eq!(exact(&gen::clique(n).unwrap(), 4), 2, "K_{n}");
        }
    }

    #[test]
    fn cw_p4_is_three() {
        assert_eq!(exact(&gen::path(4).unwrap(), 5), 3);
        // while P3 is a cograph
        assert_eq!(exact(&gen::path(3).unwrap(), 5), 2);
    }

    #[test]
    fn cw_c5_is_three() {
        assert_eq!(exact(&gen::cycle(5).unwrap(), 5), 3);
    }

    #[test]
    fn cw_edgeless() {
        assert_eq!(exact(&Graph::new(4), 3), 1);
    }

    #[test]
    fn cw_respects_cap() {
        match cliquewidth_exact(&gen::path(4).unwrap(), 2).unwrap() {
            CwResult::ExceedsCap { cap, upper_hint } => {
                assert_eq!(cap, 2);
                assert!(upper_hint >= 3);
            }
            CwResult::Exact { .. } => panic!("P4 has cliquewidth 3 > 2"),
        }
    }

    #[test]
    fn lcw_zero_is_one() {
        let g = gen::grid(3, 3).unwrap();
        let rep = local_cliquewidth(&g, 0, 3, 10).unwrap();
        assert_eq!(rep.value, CwValue::Exact(1));
    }

    #[test]
    fn lcw_of_clique_is_two() {
        for n in [3, 5] {
            let g = gen::clique(n).unwrap();
            let rep = local_cliquewidth(&g, 2, 4, 10).unwrap();
            assert_eq!(rep.value, CwValue::Exact(2));
        }
    }

    #[test]
    fn lcw_budget_error_names_vertex() {
        let g = gen::grid(5, 5).unwrap();
        match local_cliquewidth(&g, 2, 4, 10) {
            Err(Error::BallTooLarge { vertex, size, .. }) => {
                assert!(size > 10, "vertex {vertex} ball should exceed budget");
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn cw_monotone_under_induced_subgraphs() {
        for seed in 0..6 {
            let g = gen::random(7, 0.3, seed).unwrap();
            let keep: Vec<usize> = (0..7).filter(|v| v % 2 == 0 || v / 2 % 2 == seed as usize % 2).collect();
            let sub = g.induced_subgraph(&keep).unwrap().graph;
            if sub.n() == 0 {
                continue;
            }
            let cw_g = exact(&g, 7);
            let cw_sub = exact(&sub, 7);
            assert!(cw_sub <= cw_g, "seed {seed}: {cw_sub} > {cw_g}");
        }
    }
}
