//! Instance generators.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Clause, Formula, Var};

/// The `r × r` grid formula: grid variable `(i, j)` has id `i·r + j + 1`,
/// every grid edge is subdivided by a clause on its two endpoints, and the
/// extra variable `x = r² + 1` occurs positively in each horizontal-edge
/// clause and negatively in each vertical-edge clause. `{x}` is a weak and
/// strong backdoor set, while the treewidth grows with `r`.
pub fn gen_grid(r: usize) -> Result<Formula> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("grid size must be at least 2, got {r}")));
    }
    let id = |i: usize, j: usize| Var::from_id((i * r + j + 1) as u32);
    let x = Var::from_id((r * r + 1) as u32);
    let mut clauses = Vec::with_capacity(2 * r * (r - 1));
    for i in 0..r {
        for j in 0..r {
            if j + 1 < r {
                clauses.push(Clause::new([id(i, j).pos(), id(i, j + 1).pos(), x.pos()])?);
            }
            if i + 1 < r {
                clauses.push(Clause::new([id(i, j).pos(), id(i + 1, j).pos(), x.neg()])?);
            }
        }
    }
    Formula::with_num_vars(x.id(), clauses)
}

/// Variable ids used by [`gen_hitting_set`] for set `i` (0-based):
/// `(z_i, z_i')`.
pub fn hitting_set_selectors(universe_size: u32, i: usize) -> (Var, Var) {
    let base = universe_size + 2 * i as u32;
    (Var::from_id(base + 1), Var::from_id(base + 2))
}

/// Weak-backdoor encoding of a hitting set instance. Elements are the
/// variables `1..=universe_size`; set `S_i` contributes the clauses
/// `(z_i ∨ z_i')` and `(S_i ∨ ¬z_i ∨ ¬z_i')`. Minimum hitting sets and
/// minimum weak backdoor sets of the result have the same size.
pub fn gen_hitting_set(universe_size: u32, sets: &[BTreeSet<u32>]) -> Result<Formula> {
    if sets.is_empty() {
        return Err(Error::InvalidParameter("empty set family".into()));
    }
    let mut clauses = Vec::with_capacity(2 * sets.len());
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::InvalidParameter(format!("set {i} is empty")));
        }
        if let Some(&e) = s.iter().find(|&&e| e == 0 || e > universe_size) {
            return Err(Error::InvalidParameter(format!(
                "element {e} outside universe 1..={universe_size}"
            )));
        }
        let (z, z2) = hitting_set_selectors(universe_size, i);
        clauses.push(Clause::new([z.pos(), z2.pos()])?);
        let lits = s
            .iter()
            .map(|&e| Var::from_id(e).pos())
            .chain([z.neg(), z2.neg()]);
        clauses.push(Clause::new(lits)?);
    }
    Formula::with_num_vars(universe_size + 2 * sets.len() as u32, clauses)
}

/// `m` random clauses over `1..=n`, each with `r` distinct variables and
/// uniform polarities. Deterministic in `seed`.
pub fn gen_random_rcnf(n: u32, m: usize, r: usize, seed: u64) -> Result<Formula> {
    if r as u64 > u64::from(n) || (r == 0 && m > 0) {
        return Err(Error::InvalidParameter(format!(
            "cannot draw clauses of width {r} over {n} variables"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = (0..m)
        .map(|_| {
            let vars = sample(&mut rng, n as usize, r);
            let lits: Vec<_> = vars
                .iter()
                .map(|i| crate::formula::Literal::new(Var::from_id(i as u32 + 1), rng.gen_bool(0.5)))
                .collect();
            Clause::new(lits).expect("distinct variables")
        })
        .collect();
    Formula::with_num_vars(n, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::IncidenceGraph;

    #[test]
    fn grid2_shape() {
        let f = gen_grid(2).unwrap();
        assert_eq!(f.num_vars(), 5);
        assert_eq!(f.num_clauses(), 4);
        assert!(f.clauses().iter().all(|c| c.len() == 3));
        assert_eq!(f.max_clause_width(), 3);
        let g = IncidenceGraph::new(&f);
        assert_eq!(g.num_nodes(), 9);
        // 4 clauses × (2 grid endpoints + x)
        assert_eq!(g.num_edges(), 12);
        let x = Var::from_id(5);
        assert_eq!((0..4).filter(|&j| g.sign(x, j).is_some()).count(), 4);
    }

    #[test]
    fn grid_signs() {
        let f = gen_grid(3).unwrap();
        let x = Var::from_id(10);
        let pos = f.clauses().iter().filter(|c| c.polarity(x) == Some(true)).count();
        let neg = f.clauses().iter().filter(|c| c.polarity(x) == Some(false)).count();
        assert_eq!((pos, neg), (6, 6));
        assert!(gen_grid(1).is_err());
    }

    #[test]
    fn hitting_set_single() {
        let f = gen_hitting_set(1, &[[1].into()]).unwrap();
        let expected = Formula::from_ints(&[&[2, 3], &[1, -2, -3]]).unwrap();
        assert_eq!(f, expected);
        assert!(gen_hitting_set(1, &[BTreeSet::new()]).is_err());
        assert!(gen_hitting_set(1, &[]).is_err());
        assert!(gen_hitting_set(1, &[[2].into()]).is_err());
    }

    #[test]
    fn random_is_deterministic_and_well_formed() {
        let a = gen_random_rcnf(5, 5, 3, 7).unwrap();
        let b = gen_random_rcnf(5, 5, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_random_rcnf(5, 5, 3, 8).unwrap());
        assert!(a.clauses().iter().all(|c| c.len() == 3));
        assert_eq!(a.max_clause_width(), 3);
        assert!(gen_random_rcnf(2, 1, 3, 0).is_err());
    }
}
