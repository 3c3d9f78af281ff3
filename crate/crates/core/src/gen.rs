//! Deterministic graph generators for the corpus and the CLI `gen` command.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cliquewidth::KExpression;
use crate::error::{Error, Result};
use crate::graph::Graph;

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParam(msg.to_string()))
    }
}

pub fn path(n: usize) -> Result<Graph> {
    require(n >= 1, "path: n >= 1")?;
    Graph::from_edges(n, &(0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>())
}

pub fn cycle(n: usize) -> Result<Graph> {
    require(n >= 3, "cycle: n >= 3")?;
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n - 1));
    Graph::from_edges(n, &edges)
}

/// `w x h` grid; vertex `(x, y)` has id `y * w + x`.
pub fn grid(w: usize, h: usize) -> Result<Graph> {
    require(w >= 1 && h >= 1, "grid: w, h >= 1")?;
    let mut g = Graph::new(w * h);
    for y in 0..h {
        for x in 0..w {
            let id = y * w + x;
            if x + 1 < w {
                g.add_edge(id, id + 1)?;
            }
            if y + 1 < h {
                g.add_edge(id, id + w)?;
            }
        }
    }
    Ok(g)
}

pub fn clique(n: usize) -> Result<Graph> {
    require(n >= 1, "clique: n >= 1")?;
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// Half-graph H_n: vertices a_1..a_n (ids 0..n-1) and b_1..b_n (ids n..2n-1),
/// with a_i ~ b_j iff i <= j.
pub fn half_graph(n: usize) -> Result<Graph> {
    require(n >= 1, "half_graph: n >= 1")?;
    let mut g = Graph::new(2 * n);
    for i in 0..n {
        for j in i..n {
            g.add_edge(i, n + j)?;
        }
    }
    Ok(g)
}

/// G(n, p) with a fixed seed.
pub fn random(n: usize, p: f64, seed: u64) -> Result<Graph> {
    require(n >= 1, "random: n >= 1")?;
    require((0.0..=1.0).contains(&p), "random: p in [0, 1]")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Evaluate a k-expression given in text syntax.
pub fn kexpr(text: &str) -> Result<Graph> {
    let e = KExpression::parse(text)?;
    Ok(e.eval()?.graph)
}

/// The edge-relation shattering gadget: vertices `v_1..v_d` plus one vertex
/// `w_I` per subset `I` of `{1..d}`, with `v_i ~ w_I` iff `i` is in `I`.
/// Its edge relation has VC dimension at least `d`.
pub fn shatter_gadget(d: usize) -> Result<Graph> {
    require(d >= 1 && d <= 16, "shatter_gadget: 1 <= d <= 16")?;
    let subsets = 1usize << d;
    let mut g = Graph::new(d + subsets);
    for mask in 0..subsets {
        for i in 0..d {
            if mask >> i & 1 == 1 {
                g.add_edge(i, d + mask)?;
            }
        }
    }
    Ok(g)
}

/// Named generator dispatch used by the CLI.
pub fn generate(kind: &str, params: &GenParams) -> Result<Graph> {
    match kind {
        "path" => path(params.n()?),
        "cycle" => cycle(params.n()?),
        "grid" => grid(
            params.w.ok_or_else(|| Error::InvalidParam("grid: missing w".into()))?,
            params.h.ok_or_else(|| Error::InvalidParam("grid: missing h".into()))?,
        ),
        "clique" => clique(params.n()?),
        "half_graph" => half_graph(params.n()?),
        "random" => random(
            params.n()?,
            params.p.ok_or_else(|| Error::InvalidParam("random: missing p".into()))?,
            params.seed.unwrap_or(0),
        ),
        "kexpr" => kexpr(
            params
                .kexpr
                .as_deref()
                .ok_or_else(|| Error::InvalidParam("kexpr: missing expression".into()))?,
        ),
        "shatter_gadget" => shatter_gadget(params.n()?),
        other => Err(Error::InvalidParam(format!("unknown generator kind '{other}'"))),
    }
}

#[derive(Clone, Debug, Default)]
pub struct GenParams {
    pub n: Option<usize>,
    pub w: Option<usize>,
    pub h: Option<usize>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub kexpr: Option<String>,
}

impl GenParams {
    fn n(&self) -> Result<usize> {
        self.n
            .ok_or_else(|| Error::InvalidParam("missing size parameter n".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_2x2() {
        let g = grid(2, 2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn half_graph_edge_count() {
        // |{(i, j) : i <= j}| over 1..3 is 6
        let g = half_graph(3).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(g.has_edge(0, 3 + 2)); // a_1 ~ b_3
        assert!(!g.has_edge(2, 3)); // a_3 !~ b_1
    }

    #[test]
    fn random_is_seed_deterministic() {
        let a = random(12, 0.3, 7).unwrap();
        let b = random(12, 0.3, 7).unwrap();
        let c = random(12, 0.3, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn kexpr_k2() {
        let g = kexpr("j(1,2,u(v(1),v(2)))").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn shatter_gadget_shape() {
        let g = shatter_gadget(3).unwrap();
        assert_eq!(g.n(), 3 + 8);
        // w vertex for the full subset is adjacent to all of v_1..v_3
        assert!((0..3).all(|i| g.has_edge(i, 3 + 7)));
        // w vertex for the empty subset is isolated
        assert_eq!(g.degree(3), 0);
    }
}
