//! Tarskian evaluation of formulas on finite graphs.
//!
//! A formula is compiled once per graph into an indexed node arena; results
//! are memoized per (node, values of the node's free variables), so a single
//! evaluator amortizes across a whole scan of pair assignments. This keeps
//! the naive `O(n^qr)` semantics usable as the oracle for everything else.

use std::collections::HashMap;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::graph::{DistMatrix, Graph};

use super::ast::{Formula, Term};

const MAX_MEMO_VARS: usize = 8;

#[derive(Clone, Copy, Debug)]
enum CTerm {
    Slot(u8),
    Vertex(usize),
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Edge(CTerm, CTerm),
    Color(usize, CTerm),
    Eq(CTerm, CTerm),
    DistLe(u32, CTerm, CTerm),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Xor(usize, usize),
    Implies(usize, usize),
    Exists(u8, usize),
    Forall(u8, usize),
}

/// A formula compiled against a fixed graph.
pub struct Evaluator<'g> {
    graph: &'g Graph,
    nodes: Vec<Node>,
    /// per node, the slots of its free variables in ascending order
    free_of: Vec<Vec<u8>>,
    root: usize,
    slot_names: Vec<String>,
    root_free: Vec<(String, u8)>,
    colors: Vec<&'g Bitset>,
    memo: Vec<HashMap<u128, bool>>,
    dist: Option<DistMatrix>,
    env: Vec<usize>,
}

impl<'g> Evaluator<'g> {
    /// Compile `formula` for evaluation on `graph`. Unknown constant, color,
    /// or flag names are rejected here.
    pub fn new(graph: &'g Graph, formula: &Formula) -> Result<Self> {
        let mut ev = Evaluator {
            graph,
            nodes: Vec::new(),
            free_of: Vec::new(),
            root: 0,
            slot_names: Vec::new(),
            root_free: Vec::new(),
            colors: Vec::new(),
            memo: Vec::new(),
            dist: None,
            env: Vec::new(),
        };
        let mut scope: Vec<(String, u8)> = Vec::new();
        ev.root = ev.compile(formula, &mut scope)?;
        ev.memo = vec![HashMap::new(); ev.nodes.len()];
        ev.env = vec![usize::MAX; ev.slot_names.len()];
        if ev.nodes.iter().any(|n| matches!(n, Node::DistLe(..))) {
            ev.dist = Some(graph.dist_matrix());
        }
        Ok(ev)
    }

    /// Share a precomputed distance matrix instead of rebuilding one for the
    /// `dist<=K` atoms.
    pub fn with_dist(graph: &'g Graph, formula: &Formula, dist: DistMatrix) -> Result<Self> {
        let mut ev = Self::new(graph, formula)?;
        ev.dist = Some(dist);
        Ok(ev)
    }

    fn new_slot(&mut self, name: &str) -> Result<u8> {
        if self.slot_names.len() >= 255 {
            return Err(Error::InvalidParam(
                "formula uses more than 255 variable slots".into(),
            ));
        }
        self.slot_names.push(name.to_string());
        Ok((self.slot_names.len() - 1) as u8)
    }

    /// Slot of a variable occurrence: innermost enclosing binder if bound,
    /// otherwise a free-variable slot shared per name. Free slots are kept
    /// apart from binder slots so quantifier loops never clobber them.
    fn slot(&mut self, name: &str, scope: &[(String, u8)]) -> Result<u8> {
        if let Some(&(_, s)) = scope.iter().rev().find(|(n, _)| n == name) {
            return Ok(s);
        }
        if let Some(&(_, s)) = self.root_free.iter().find(|(n, _)| n == name) {
            return Ok(s);
        }
        let s = self.new_slot(name)?;
        self.root_free.push((name.to_string(), s));
        Ok(s)
    }

    fn cterm(&mut self, t: &Term, scope: &[(String, u8)]) -> Result<CTerm> {
        match t {
            Term::Var(name) => Ok(CTerm::Slot(self.slot(name, scope)?)),
            Term::Const(name) => match self.graph.constants.get(name) {
                Some(&v) => Ok(CTerm::Vertex(v)),
                None => Err(Error::UnknownName {
                    kind: "constant",
                    name: name.clone(),
                }),
            },
        }
    }

    fn term_slots(t: CTerm, acc: &mut Vec<u8>) {
        if let CTerm::Slot(s) = t {
            acc.push(s);
        }
    }

    fn push(&mut self, node: Node, free: Vec<u8>) -> usize {
        let mut free = free;
        free.sort_unstable();
        free.dedup();
        self.nodes.push(node);
        self.free_of.push(free);
        self.nodes.len() - 1
    }

    fn compile(&mut self, f: &Formula, scope: &mut Vec<(String, u8)>) -> Result<usize> {
        let idx = match f {
            Formula::True => self.push(Node::Const(true), vec![]),
            Formula::False => self.push(Node::Const(false), vec![]),
            Formula::Flag(name) => match self.graph.flags.get(name) {
                Some(&b) => self.push(Node::Const(b), vec![]),
                None => {
                    return Err(Error::UnknownName {
                        kind: "flag",
                        name: name.clone(),
                    })
                }
            },
            Formula::Color(name, t) => {
                let graph: &'g Graph = self.graph;
                let set = graph.color(name).ok_or_else(|| Error::UnknownName {
                    kind: "color",
                    name: name.clone(),
                })?;
                let set_idx = self.colors.len();
                self.colors.push(set);
                let ct = self.cterm(t, scope)?;
                let mut free = vec![];
                Self::term_slots(ct, &mut free);
                self.push(Node::Color(set_idx, ct), free)
            }
            Formula::Edge(a, b) | Formula::Eq(a, b) | Formula::DistLe(_, a, b) => {
                let ca = self.cterm(a, scope)?;
                let cb = self.cterm(b, scope)?;
                let mut free = vec![];
                Self::term_slots(ca, &mut free);
                Self::term_slots(cb, &mut free);
                let node = match f {
                    Formula::Edge(..) => Node::Edge(ca, cb),
                    Formula::Eq(..) => Node::Eq(ca, cb),
                    Formula::DistLe(r, ..) => Node::DistLe(*r, ca, cb),
                    _ => unreachable!(),
                };
                self.push(node, free)
            }
            Formula::Not(g) => {
                let c = self.compile(g, scope)?;
                let free = self.free_of[c].clone();
                self.push(Node::Not(c), free)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Xor(a, b) | Formula::Implies(a, b) => {
                let ca = self.compile(a, scope)?;
                let cb = self.compile(b, scope)?;
                let mut free = self.free_of[ca].clone();
                free.extend_from_slice(&self.free_of[cb]);
                let node = match f {
                    Formula::And(..) => Node::And(ca, cb),
                    Formula::Or(..) => Node::Or(ca, cb),
                    Formula::Xor(..) => Node::Xor(ca, cb),
                    Formula::Implies(..) => Node::Implies(ca, cb),
                    _ => unreachable!(),
                };
                self.push(node, free)
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let s = self.new_slot(v)?;
                scope.push((v.clone(), s));
                let c = self.compile(g, scope)?;
                scope.pop();
                let free: Vec<u8> = self.free_of[c].iter().copied().filter(|&x| x != s).collect();
                let node = match f {
                    Formula::Exists(..) => Node::Exists(s, c),
                    _ => Node::Forall(s, c),
                };
                self.push(node, free)
            }
        };
        if self.free_of[idx].len() > MAX_MEMO_VARS {
            return Err(Error::InvalidParam(format!(
                "subformula has more than {MAX_MEMO_VARS} free variables"
            )));
        }
        Ok(idx)
    }

    fn memo_key(&self, node: usize) -> u128 {
        let mut key = 0u128;
        for &s in &self.free_of[node] {
            key = key << 16 | self.env[s as usize] as u128;
        }
        key
    }

    fn resolve(&self, t: CTerm) -> usize {
        match t {
            CTerm::Slot(s) => self.env[s as usize],
            CTerm::Vertex(v) => v,
        }
    }

    fn eval_node(&mut self, node: usize) -> bool {
        match self.nodes[node] {
            Node::Const(b) => return b,
            Node::Edge(a, b) => return self.graph.has_edge(self.resolve(a), self.resolve(b)),
            Node::Eq(a, b) => return self.resolve(a) == self.resolve(b),
            Node::Color(set, t) => return self.colors[set].contains(self.resolve(t)),
            Node::DistLe(r, a, b) => {
                let d = self
                    .dist
                    .as_ref()
                    .expect("distance matrix prepared at compile time")
                    .get(self.resolve(a), self.resolve(b));
                return d.le(r);
            }
            _ => {}
        }
        let key = self.memo_key(node);
        if let Some(&v) = self.memo[node].get(&key) {
            return v;
        }
        let value = match self.nodes[node] {
            Node::Not(c) => !self.eval_node(c),
            Node::And(a, b) => self.eval_node(a) && self.eval_node(b),
            Node::Or(a, b) => self.eval_node(a) || self.eval_node(b),
            Node::Xor(a, b) => self.eval_node(a) ^ self.eval_node(b),
            Node::Implies(a, b) => !self.eval_node(a) || self.eval_node(b),
            Node::Exists(s, c) => {
                let mut found = false;
                for v in 0..self.graph.n() {
                    self.env[s as usize] = v;
                    if self.eval_node(c) {
                        found = true;
                        break;
                    }
                }
                found
            }
            Node::Forall(s, c) => {
                let mut all = true;
                for v in 0..self.graph.n() {
                    self.env[s as usize] = v;
                    if !self.eval_node(c) {
                        all = false;
                        break;
                    }
                }
                all
            }
            _ => unreachable!(),
        };
        self.memo[node].insert(key, value);
        value
    }

    /// Evaluate under an assignment covering the formula's free variables.
    pub fn eval(&mut self, assignment: &[(&str, usize)]) -> Result<bool> {
        for (name, slot) in self.root_free.clone() {
            let value = assignment
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::UnboundVariable(name.clone()))?;
            self.graph.check_vertex(value)?;
            self.env[slot as usize] = value;
        }
        Ok(self.eval_node(self.root))
    }

    /// Evaluate a sentence (no free variables).
    pub fn eval_sentence(&mut self) -> Result<bool> {
        if let Some((name, _)) = self.root_free.first() {
            return Err(Error::UnboundVariable(name.clone()));
        }
        Ok(self.eval_node(self.root))
    }

    /// Evaluate with free variables `x` and `y` bound to `u` and `v`.
    pub fn eval_xy(&mut self, u: usize, v: usize) -> Result<bool> {
        self.eval(&[("x", u), ("y", v)])
    }
}

/// One-shot evaluation. Scans should construct an [`Evaluator`] once instead.
pub fn eval(graph: &Graph, formula: &Formula, assignment: &[(&str, usize)]) -> Result<bool> {
    Evaluator::new(graph, formula)?.eval(assignment)
}
