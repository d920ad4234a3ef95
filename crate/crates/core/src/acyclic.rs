//! SAT and exact model counting for formulas whose incidence graph is a
//! forest.
//!
//! Each tree of the incidence forest is rooted at its smallest node and
//! evaluated bottom-up. A variable node keeps one value per truth value of
//! the variable; a clause node folds its children with two running states,
//! "no child satisfies me yet" and "some child satisfies me".

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Var};
use crate::graph::{IncidenceGraph, Node};

/// Number of models of a formula over an explicit universe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelCount {
    #[serde(with = "decimal")]
    pub count: BigUint,
    pub universe_size: usize,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("bad count"))
    }
}

trait Semiring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl Semiring for bool {
    fn zero() -> bool {
        false
    }
    fn one() -> bool {
        true
    }
    fn add(&self, other: &bool) -> bool {
        *self || *other
    }
    fn mul(&self, other: &bool) -> bool {
        *self && *other
    }
}

impl Semiring for BigUint {
    fn zero() -> BigUint {
        Zero::zero()
    }
    fn one() -> BigUint {
        One::one()
    }
    fn add(&self, other: &BigUint) -> BigUint {
        self + other
    }
    fn mul(&self, other: &BigUint) -> BigUint {
        self * other
    }
}

/// Per-node table. For a variable: value under `[false, true]`. For a
/// clause: `[any, satisfied]`, where `any` ignores the clause itself and
/// `satisfied` requires some child literal to be true.
struct Forest<'a> {
    g: &'a IncidenceGraph,
    /// nodes in DFS preorder, one tree after another
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    roots: Vec<usize>,
}

impl<'a> Forest<'a> {
    fn new(g: &'a IncidenceGraph) -> Result<Forest<'a>> {
        if !g.is_acyclic() {
            return Err(Error::NotAcyclic);
        }
        let n = g.num_nodes();
        let mut seen = vec![false; n];
        let mut parent = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut roots = Vec::new();
        for r in 0..n {
            if seen[r] {
                continue;
            }
            roots.push(r);
            seen[r] = true;
            let mut stack = vec![r];
            while let Some(u) = stack.pop() {
                order.push(u);
                for &w in g.graph().neighbors(u).iter().rev() {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(u);
                        stack.push(w);
                    }
                }
            }
        }
        Ok(Forest {
            g,
            order,
            parent,
            roots,
        })
    }

    fn children(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.g
            .graph()
            .neighbors(u)
            .iter()
            .copied()
            .filter(move |&w| self.parent[w] == Some(u))
    }

    /// Sign of the edge between variable node `var` and clause node `clause`.
    fn sign(&self, var: usize, clause: usize) -> bool {
        let Node::Var(v) = self.g.node(var) else {
            unreachable!("node {var} is a clause")
        };
        let j = clause - self.g.num_vars();
        self.g.sign(v, j).expect("edge exists")
    }

    fn evaluate<S: Semiring>(&self) -> Vec<[S; 2]> {
        let mut table: Vec<[S; 2]> = vec![[S::zero(), S::zero()]; self.g.num_nodes()];
        for &u in self.order.iter().rev() {
            if self.g.is_var_node(u) {
                let mut vals = [S::one(), S::one()];
                for c in self.children(u) {
                    let s = self.sign(u, c);
                    for (val, slot) in vals.iter_mut().enumerate() {
                        let [any, sat] = &table[c];
                        let factor = if s == (val == 1) { any } else { sat };
                        *slot = slot.mul(factor);
                    }
                }
                table[u] = vals;
            } else {
                let mut none = S::one();
                let mut some = S::zero();
                for w in self.children(u) {
                    let s = self.sign(w, u);
                    let [f0, f1] = &table[w];
                    let total = f0.add(f1);
                    let (sat, unsat) = if s { (f1, f0) } else { (f0, f1) };
                    some = some.mul(&total).add(&none.mul(sat));
                    none = none.mul(unsat);
                }
                table[u] = [none.add(&some), some];
            }
        }
        table
    }

    fn root_value<S: Semiring>(&self, table: &[[S; 2]], r: usize) -> S {
        if self.g.is_var_node(r) {
            table[r][0].add(&table[r][1])
        } else {
            table[r][1].clone()
        }
    }

    fn total<S: Semiring>(&self, table: &[[S; 2]]) -> S {
        self.roots
            .iter()
            .fold(S::one(), |acc, &r| acc.mul(&self.root_value(table, r)))
    }

    /// Picks values top-down, preferring false wherever both are feasible.
    fn witness(&self, table: &[[bool; 2]]) -> Vec<bool> {
        let n = self.g.num_nodes();
        let mut value = vec![false; n];
        // for clause nodes: already satisfied by the parent literal
        let mut satisfied = vec![false; n];
        for &u in &self.order {
            if self.g.is_var_node(u) {
                if self.parent[u].is_none() {
                    value[u] = !table[u][0];
                }
                for c in self.children(u) {
                    satisfied[c] = self.sign(u, c) == value[u];
                }
            } else {
                let mut need = !satisfied[u];
                for w in self.children(u) {
                    let s = self.sign(w, u);
                    if need && table[w][s as usize] {
                        value[w] = s;
                        need = false;
                    } else {
                        value[w] = !table[w][0];
                    }
                }
                debug_assert!(!need, "clause node without a satisfying child");
            }
        }
        value
    }
}

/// A total satisfying assignment over the universe of `f`, or `None` if
/// `f` is unsatisfiable. Fails with [`Error::NotAcyclic`] on cyclic input.
pub fn solve_acyclic_sat(f: &Formula) -> Result<Option<Assignment>> {
    let g = IncidenceGraph::new(f);
    let forest = Forest::new(&g)?;
    let table = forest.evaluate::<bool>();
    if !forest.total(&table) {
        return Ok(None);
    }
    let values = forest.witness(&table);
    Ok(Some(
        (0..g.num_vars())
            .map(|i| match g.node(i) {
                Node::Var(v) => (v, values[i]),
                Node::Clause(_) => unreachable!(),
            })
            .collect(),
    ))
}

/// Satisfiability of an acyclic formula.
pub fn is_acyclic_satisfiable(f: &Formula) -> Result<bool> {
    let g = IncidenceGraph::new(f);
    let forest = Forest::new(&g)?;
    Ok(forest.total(&forest.evaluate::<bool>()))
}

/// Number of assignments of `universe` satisfying every clause of `f`.
pub fn count_acyclic_models(f: &Formula, universe: &BTreeSet<Var>) -> Result<ModelCount> {
    let f = Formula::new(universe.clone(), f.clauses().to_vec())?;
    let g = IncidenceGraph::new(&f);
    let forest = Forest::new(&g)?;
    Ok(ModelCount {
        count: forest.total(&forest.evaluate::<BigUint>()),
        universe_size: universe.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Var {
        Var::from_id(i)
    }

    fn universe(n: u32) -> BTreeSet<Var> {
        (1..=n).map(v).collect()
    }

    #[test]
    fn sat_simple_clause() {
        let f = Formula::from_ints(&[&[1, 2]]).unwrap();
        let a = solve_acyclic_sat(&f).unwrap().unwrap();
        assert!(a.satisfies(&f));
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn sat_empty_clause_is_unsat() {
        let f = Formula::new(universe(1), vec![crate::formula::Clause::empty()]).unwrap();
        assert_eq!(solve_acyclic_sat(&f).unwrap(), None);
        assert_eq!(count_acyclic_models(&f, &universe(1)).unwrap().count, 0u32.into());
    }

    #[test]
    fn sat_forced_path() {
        // (x) ∧ (¬x ∨ y): only model x=1, y=1
        let f = Formula::from_ints(&[&[1], &[-1, 2]]).unwrap();
        let a = solve_acyclic_sat(&f).unwrap().unwrap();
        assert_eq!(a.get(v(1)), Some(true));
        assert_eq!(a.get(v(2)), Some(true));
    }

    #[test]
    fn rejects_cycles() {
        let f = Formula::from_ints(&[&[1, 2], &[-1, 2]]).unwrap();
        assert_eq!(solve_acyclic_sat(&f), Err(Error::NotAcyclic));
        assert_eq!(count_acyclic_models(&f, &universe(2)), Err(Error::NotAcyclic));
    }

    #[test]
    fn counts() {
        let f = Formula::from_ints(&[&[1, 2]]).unwrap();
        assert_eq!(count_acyclic_models(&f, &universe(2)).unwrap().count, 3u32.into());
        // (x∨y)∧(¬y∨z): 4 of 8 by enumeration
        let f = Formula::from_ints(&[&[1, 2], &[-2, 3]]).unwrap();
        assert_eq!(count_acyclic_models(&f, &universe(3)).unwrap().count, 4u32.into());
        let empty = Formula::default();
        let c = count_acyclic_models(&empty, &universe(5)).unwrap();
        assert_eq!(c.count, 32u32.into());
        assert_eq!(c.universe_size, 5);
    }

    #[test]
    fn universe_must_cover_occurring_vars() {
        let f = Formula::from_ints(&[&[1, 3]]).unwrap();
        assert_eq!(
            count_acyclic_models(&f, &universe(2)),
            Err(Error::OutsideUniverse(v(3)))
        );
    }

    #[test]
    fn count_serializes_as_decimal_string() {
        let c = ModelCount {
            count: BigUint::from(1u8) << 80,
            universe_size: 80,
        };
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"count":"1208925819614629174706176","universe_size":80}"#);
        let back: ModelCount = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
