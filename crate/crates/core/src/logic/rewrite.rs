//! Edge-atom rewriting and formula range measurement.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dist, DistMatrix, Graph};

use super::ast::{Formula, Term};
use super::eval::Evaluator;

/// Replace every edge atom `E(t1, t2)` of `rho` by
/// `E(t1, t2) ^ zeta[t1/x, t2/y]`.
///
/// `zeta` may use at most the free variables `x` and `y`. Its binders are
/// renamed to fresh names first, so no substituted term can be captured;
/// edge atoms inside `zeta` itself are left alone.
pub fn rewrite_edges(rho: &Formula, zeta: &Formula) -> Result<Formula> {
    let free = zeta.free_vars();
    if !free.iter().all(|v| v == "x" || v == "y") {
        return Err(Error::Arity {
            expected: "subset of {x, y}".into(),
            got: format!("{{{}}}", free.into_iter().collect::<Vec<_>>().join(", ")),
        });
    }

    let mut taken = rho.all_var_names();
    taken.extend(zeta.all_var_names());
    let zeta_renamed = freshen_binders(zeta, &mut taken);

    fn walk(f: &Formula, zeta: &Formula) -> Formula {
        match f {
            Formula::Edge(t1, t2) => {
                let inst = zeta.substitute(&[
                    ("x".to_string(), t1.clone()),
                    ("y".to_string(), t2.clone()),
                ]);
                Formula::xor(Formula::Edge(t1.clone(), t2.clone()), inst)
            }
            Formula::True
            | Formula::False
            | Formula::Color(..)
            | Formula::Eq(..)
            | Formula::Flag(_)
            | Formula::DistLe(..) => f.clone(),
            Formula::Not(g) => Formula::not(walk(g, zeta)),
            Formula::And(a, b) => Formula::and(walk(a, zeta), walk(b, zeta)),
            Formula::Or(a, b) => Formula::or(walk(a, zeta), walk(b, zeta)),
            Formula::Xor(a, b) => Formula::xor(walk(a, zeta), walk(b, zeta)),
            Formula::Implies(a, b) => Formula::implies(walk(a, zeta), walk(b, zeta)),
            Formula::Exists(v, g) => Formula::exists(v, walk(g, zeta)),
            Formula::Forall(v, g) => Formula::forall(v, walk(g, zeta)),
        }
    }
    Ok(walk(rho, &zeta_renamed))
}

/// Alpha-rename every binder of `f` to a name outside `taken`, growing
/// `taken` along the way. Substituting into the result cannot capture.
pub(crate) fn freshen_binders(
    f: &Formula,
    taken: &mut std::collections::BTreeSet<String>,
) -> Formula {
    let mut counter = 0usize;
    let mut fresh = move |taken: &mut std::collections::BTreeSet<String>| loop {
        let name = format!("q{counter}");
        counter += 1;
        if taken.insert(name.clone()) {
            return name;
        }
    };
    fn walk(
        f: &Formula,
        taken: &mut std::collections::BTreeSet<String>,
        fresh: &mut impl FnMut(&mut std::collections::BTreeSet<String>) -> String,
    ) -> Formula {
        match f {
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let new = fresh(taken);
                let body = g.substitute(&[(v.clone(), Term::Var(new.clone()))]);
                let body = walk(&body, taken, fresh);
                match f {
                    Formula::Exists(..) => Formula::exists(&new, body),
                    _ => Formula::forall(&new, body),
                }
            }
            Formula::Not(g) => Formula::not(walk(g, taken, fresh)),
            Formula::And(a, b) => Formula::and(walk(a, taken, fresh), walk(b, taken, fresh)),
            Formula::Or(a, b) => Formula::or(walk(a, taken, fresh), walk(b, taken, fresh)),
            Formula::Xor(a, b) => Formula::xor(walk(a, taken, fresh), walk(b, taken, fresh)),
            Formula::Implies(a, b) => {
                Formula::implies(walk(a, taken, fresh), walk(b, taken, fresh))
            }
            _ => f.clone(),
        }
    }
    walk(f, taken, &mut fresh)
}

/// Measured range of a binary formula over a vertex set.
#[derive(Clone, Debug, Serialize)]
pub struct RangeReport {
    /// Maximum distance over satisfied pairs; the convention value 0 when no
    /// pair is satisfied (`satisfied_pairs` distinguishes the two cases).
    pub max: Dist,
    pub satisfied_pairs: usize,
}

/// Maximum of `dist(u, v)` over pairs of `universe` satisfying
/// `phi(x, y)`, with distances measured in `graph` (through `dist` if
/// supplied).
pub fn range_of(
    graph: &Graph,
    phi: &Formula,
    universe: &[usize],
    dist: Option<&DistMatrix>,
) -> Result<RangeReport> {
    let free = phi.free_vars();
    if !free.iter().all(|v| v == "x" || v == "y") {
        return Err(Error::Arity {
            expected: "subset of {x, y}".into(),
            got: format!("{{{}}}", free.into_iter().collect::<Vec<_>>().join(", ")),
        });
    }
    let owned;
    let dist = match dist {
        Some(d) => d,
        None => {
            owned = graph.dist_matrix();
            &owned
        }
    };
    let mut ev = Evaluator::with_dist(graph, phi, dist.clone())?;
    let mut max = Dist::Finite(0);
    let mut satisfied = 0usize;
    for &u in universe {
        for &v in universe {
            if ev.eval_xy(u, v)? {
                satisfied += 1;
                max = max.max(dist.get(u, v));
            }
        }
    }
    Ok(RangeReport {
        max,
        satisfied_pairs: satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::logic::eval;

    fn all_vertices(g: &Graph) -> Vec<usize> {
        (0..g.n()).collect()
    }

    #[test]
    fn zeta_false_preserves_semantics() {
        let g = gen::random(7, 0.4, 3).unwrap();
        let rho = Formula::parse("exists x. forall y. (x=y | E(x,y) | exists z. (E(x,z) & E(z,y)))")
            .unwrap();
        let zeta = Formula::parse("x!=x & y!=y | false & E(x,y)").unwrap();
        // free vars are {x, y} even though zeta is unsatisfiable
        let rewritten = rewrite_edges(&rho, &zeta).unwrap();
        assert_eq!(
            eval(&g, &rewritten, &[]).unwrap(),
            eval(&g, &rho, &[]).unwrap()
        );
    }

    #[test]
    fn zeta_neq_evaluates_on_complement() {
        let zeta = Formula::parse("x!=y").unwrap();
        let rho = Formula::parse("forall x. exists y. E(x,y)").unwrap();
        for seed in 0..5 {
            let g = gen::random(6, 0.5, seed).unwrap();
            let mut comp = Graph::new(6);
            for u in 0..6 {
                for v in u + 1..6 {
                    if !g.has_edge(u, v) {
                        comp.add_edge(u, v).unwrap();
                    }
                }
            }
            let rewritten = rewrite_edges(&rho, &zeta).unwrap();
            assert_eq!(
                eval(&g, &rewritten, &[]).unwrap(),
                eval(&comp, &rho, &[]).unwrap(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn one_xor_per_edge_atom() {
        let rho = Formula::parse("exists x. exists y. E(x,y)").unwrap();
        let zeta = Formula::parse("U_red(x) & U_red(y)").unwrap();
        let rewritten = rewrite_edges(&rho, &zeta).unwrap();
        fn count_xor(f: &Formula) -> usize {
            match f {
                Formula::Xor(a, b) => 1 + count_xor(a) + count_xor(b),
                Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => count_xor(g),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    count_xor(a) + count_xor(b)
                }
                _ => 0,
            }
        }
        assert_eq!(count_xor(&rewritten), 1);
    }

    #[test]
    fn capture_is_avoided() {
        // zeta binds z; rho's edge atom mentions z bound by rho's quantifier
        let rho = Formula::parse("exists z. E(z,z)").unwrap();
        let zeta = Formula::parse("exists z. (E(x,z) & E(z,y))").unwrap();
        let rewritten = rewrite_edges(&rho, &zeta).unwrap();
        // the substituted zeta must read E(z,q) & E(q,z) with a fresh q; the
        // captured reading E(z,z) & E(z,z) is constantly false here
        let g = gen::path(3).unwrap();
        assert!(eval(&g, &rewritten, &[]).unwrap());
        let captured = Formula::parse("exists z. (E(z,z) ^ exists z. (E(z,z) & E(z,z)))").unwrap();
        assert!(!eval(&g, &captured, &[]).unwrap());
    }

    #[test]
    fn zeta_arity_is_checked() {
        let rho = Formula::parse("E(x,y)").unwrap();
        let zeta = Formula::parse("E(x,z)").unwrap();
        assert!(matches!(
            rewrite_edges(&rho, &zeta),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn range_of_edge_formula() {
        let g = gen::grid(3, 3).unwrap();
        let phi = Formula::parse("E(x,y)").unwrap();
        let r = range_of(&g, &phi, &all_vertices(&g), None).unwrap();
        assert_eq!(r.max, Dist::Finite(1));
        assert!(r.satisfied_pairs > 0);
    }

    #[test]
    fn range_of_square_formula_on_path() {
        let g = gen::path(5).unwrap();
        let phi = Formula::parse("E(x,y) | exists z. (E(x,z) & E(z,y))").unwrap();
        let r = range_of(&g, &phi, &all_vertices(&g), None).unwrap();
        assert_eq!(r.max, Dist::Finite(2));
    }

    #[test]
    fn range_of_unsatisfiable_is_zero() {
        let g = gen::path(5).unwrap();
        let phi = Formula::parse("x!=x").unwrap();
        let r = range_of(&g, &phi, &all_vertices(&g), None).unwrap();
        assert_eq!(r.max, Dist::Finite(0));
        assert_eq!(r.satisfied_pairs, 0);
    }

    #[test]
    fn range_of_disconnected_satisfied_pair() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let phi = Formula::parse("~E(x,y) & x!=y").unwrap();
        let r = range_of(&g, &phi, &all_vertices(&g), None).unwrap();
        assert_eq!(r.max, Dist::Infinite);
    }
}
