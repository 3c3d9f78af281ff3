//! Simple interpretations `I_{phi,delta}`: map a colored graph to the plain
//! graph whose vertices satisfy `delta(x)` and whose edges are the distinct
//! pairs satisfying `phi(x, y)`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::logic::{Evaluator, Formula};

/// An interpretation: an edge formula `phi(x, y)` and a domain formula
/// `delta(x)`.
#[derive(Clone, Debug)]
pub struct Interpretation {
    pub name: String,
    pub phi: Formula,
    pub delta: Formula,
}

impl Interpretation {
    pub fn new(name: &str, phi: Formula, delta: Formula) -> Result<Self> {
        let phi_free = phi.free_vars();
        if !phi_free.iter().all(|v| v == "x" || v == "y") {
            return Err(Error::Arity {
                expected: "subset of {x, y}".into(),
                got: format!("{{{}}}", phi_free.into_iter().collect::<Vec<_>>().join(", ")),
            });
        }
        let delta_free = delta.free_vars();
        if !delta_free.iter().all(|v| v == "x") {
            return Err(Error::Arity {
                expected: "subset of {x}".into(),
                got: format!("{{{}}}", delta_free.into_iter().collect::<Vec<_>>().join(", ")),
            });
        }
        Ok(Interpretation {
            name: name.to_string(),
            phi,
            delta,
        })
    }

    pub fn from_text(name: &str, phi: &str, delta: &str) -> Result<Self> {
        Interpretation::new(name, Formula::parse(phi)?, Formula::parse(delta)?)
    }

    /// The built-in registry: `identity`, `complement`, `square`, `power-3`.
    pub fn registry(name: &str) -> Result<Self> {
        match name {
            "identity" => Interpretation::from_text(name, "E(x,y)", "true"),
            "complement" => Interpretation::from_text(name, "~E(x,y) & x!=y", "true"),
            "square" => Interpretation::from_text(
                name,
                "x!=y & (E(x,y) | exists z. (E(x,z) & E(z,y)))",
                "true",
            ),
            "power-3" => Interpretation::from_text(name, "x!=y & dist<=3(x,y)", "true"),
            other => Err(Error::UnknownName {
                kind: "interpretation",
                name: other.to_string(),
            }),
        }
    }

    pub fn registry_names() -> &'static [&'static str] {
        &["identity", "complement", "square", "power-3"]
    }
}

/// The image of an interpretation, with the map from new ids back to the
/// ids of the source graph.
#[derive(Clone, Debug)]
pub struct Interpreted {
    pub graph: Graph,
    /// new id -> source id; also the domain `delta(G)` in ascending order
    pub back_map: Vec<usize>,
}

/// True iff `phi(u, v) = phi(v, u)` and `phi(v, v)` is false for all
/// vertices of `graph`.
pub fn check_symmetric_irreflexive(graph: &Graph, phi: &Formula) -> Result<bool> {
    Ok(phi_defect(graph, phi)?.is_none())
}

/// First symmetry or irreflexivity defect of `phi` over all vertices.
pub fn phi_defect(graph: &Graph, phi: &Formula) -> Result<Option<Error>> {
    let domain: Vec<usize> = (0..graph.n()).collect();
    symmetry_defect(graph, phi, &domain)
}

/// First symmetry or irreflexivity defect of `phi` on `domain`, if any.
fn symmetry_defect(graph: &Graph, phi: &Formula, domain: &[usize]) -> Result<Option<Error>> {
    let mut ev = Evaluator::new(graph, phi)?;
    for &v in domain {
        if ev.eval_xy(v, v)? {
            return Ok(Some(Error::NotIrreflexive(v)));
        }
    }
    for (i, &u) in domain.iter().enumerate() {
        for &v in &domain[i + 1..] {
            if ev.eval_xy(u, v)? != ev.eval_xy(v, u)? {
                return Ok(Some(Error::NotSymmetric(u, v)));
            }
        }
    }
    Ok(None)
}

/// Apply `interp` to `graph`. The edge formula must be symmetric and
/// irreflexive on the domain; anything else is a hard error.
pub fn apply_interpretation(graph: &Graph, interp: &Interpretation) -> Result<Interpreted> {
    let mut delta_ev = Evaluator::new(graph, &interp.delta)?;
    let mut domain = Vec::new();
    for v in 0..graph.n() {
        if delta_ev.eval(&[("x", v)])? {
            domain.push(v);
        }
    }
    if let Some(err) = symmetry_defect(graph, &interp.phi, &domain)? {
        return Err(err);
    }
    let mut ev = Evaluator::new(graph, &interp.phi)?;
    let mut out = Graph::new(domain.len());
    for (i, &u) in domain.iter().enumerate() {
        for (j, &v) in domain.iter().enumerate().skip(i + 1) {
            if ev.eval_xy(u, v)? {
                out.add_edge(i, j)?;
            }
        }
    }
    Ok(Interpreted {
        graph: out,
        back_map: domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::logic::eval;

    #[test]
    fn complement_of_k3_is_edgeless() {
        let g = gen::clique(3).unwrap();
        let i = Interpretation::registry("complement").unwrap();
        let h = apply_interpretation(&g, &i).unwrap();
        assert_eq!(h.graph.n(), 3);
        assert_eq!(h.graph.edge_count(), 0);
    }

    #[test]
    fn square_of_p4() {
        let g = gen::path(4).unwrap();
        let i = Interpretation::registry("square").unwrap();
        let h = apply_interpretation(&g, &i).unwrap();
        assert_eq!(h.graph.edges(), vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn delta_filters_isolated_vertex() {
        // K2 plus an isolated vertex; keep only vertices with a neighbor
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let i = Interpretation::from_text("nbr", "E(x,y)", "exists y. E(x,y)").unwrap();
        let h = apply_interpretation(&g, &i).unwrap();
        assert_eq!(h.graph.n(), 2);
        assert_eq!(h.back_map, vec![0, 1]);
    }

    #[test]
    fn identity_is_isomorphic_under_identity_back_map() {
        let g = gen::random(9, 0.4, 11).unwrap();
        let i = Interpretation::registry("identity").unwrap();
        let h = apply_interpretation(&g, &i).unwrap();
        assert_eq!(h.back_map, (0..9).collect::<Vec<_>>());
        for u in 0..9 {
            for v in 0..9 {
                assert_eq!(h.graph.has_edge(u, v), g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn edges_match_direct_phi_evaluation() {
        let g = gen::grid(3, 3).unwrap();
        let i = Interpretation::registry("power-3").unwrap();
        let h = apply_interpretation(&g, &i).unwrap();
        for (a, &u) in h.back_map.iter().enumerate() {
            for (b, &v) in h.back_map.iter().enumerate() {
                if a != b {
                    assert_eq!(
                        h.graph.has_edge(a, b),
                        eval(&g, &i.phi, &[("x", u), ("y", v)]).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn reflexive_phi_is_rejected() {
        let g = gen::path(3).unwrap();
        let i = Interpretation::from_text("bad", "x=x", "true").unwrap();
        assert!(matches!(
            apply_interpretation(&g, &i),
            Err(Error::NotIrreflexive(0))
        ));
        assert!(!check_symmetric_irreflexive(&g, &i.phi).unwrap());
    }

    #[test]
    fn asymmetric_phi_is_rejected() {
        let mut g = gen::path(3).unwrap();
        g.set_color("a", [0]);
        let phi = Formula::parse("E(x,y) & U_a(x)").unwrap();
        assert!(!check_symmetric_irreflexive(&g, &phi).unwrap());
        let i = Interpretation::new("bad", phi, Formula::True).unwrap();
        assert!(matches!(
            apply_interpretation(&g, &i),
            Err(Error::NotSymmetric(0, 1))
        ));
    }

    #[test]
    fn plain_edge_formula_is_symmetric() {
        let g = gen::grid(2, 3).unwrap();
        let phi = Formula::parse("E(x,y)").unwrap();
        assert!(check_symmetric_irreflexive(&g, &phi).unwrap());
    }
}
