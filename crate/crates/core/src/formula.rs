//! CNF data model.
//!
//! A [`Formula`] is an ordered list of clauses over an explicit variable
//! universe. Clause positions are stable identifiers: graph construction
//! refers to clause `j` as the `j`-th entry of [`Formula::clauses`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A propositional variable. Ids start at 1, as in DIMACS.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(u32);

impl Var {
    /// Returns `None` for id 0.
    pub fn new(id: u32) -> Option<Var> {
        (id >= 1).then_some(Var(id))
    }

    /// # Panics
    ///
    /// If `id == 0`.
    pub fn from_id(id: u32) -> Var {
        Var::new(id).expect("variable ids start at 1")
    }

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn pos(self) -> Literal {
        Literal::new(self, true)
    }

    pub fn neg(self) -> Literal {
        Literal::new(self, false)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Literal {
        Literal { var, positive }
    }

    /// Reads a non-zero DIMACS literal.
    pub fn from_dimacs(lit: i64) -> Option<Literal> {
        let id = u32::try_from(lit.unsigned_abs()).ok()?;
        Var::new(id).map(|v| Literal::new(v, lit > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let id = i64::from(self.var.0);
        if self.positive {
            id
        } else {
            -id
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negate(self) -> Literal {
        Literal::new(self.var, !self.positive)
    }

    /// True iff `value` assigned to this literal's variable makes it true.
    pub fn satisfied_by(self, value: bool) -> bool {
        self.positive == value
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "+{}", self.var.0)
        } else {
            write!(f, "-{}", self.var.0)
        }
    }
}

/// A clause: literals sorted by variable, at most one literal per variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, collapsing duplicate literals. A complementary pair is
    /// rejected.
    pub fn new<I: IntoIterator<Item = Literal>>(lits: I) -> Result<Clause> {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        if let Some(w) = lits.windows(2).find(|w| w[0].var == w[1].var) {
            return Err(Error::ComplementaryPair(w[0].var));
        }
        Ok(Clause { lits })
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    pub fn lits(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var)
    }

    /// Sign of `var` in this clause, if it occurs.
    pub fn polarity(&self, var: Var) -> Option<bool> {
        self.lits
            .binary_search_by_key(&var, |l| l.var)
            .ok()
            .map(|i| self.lits[i].positive)
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.polarity(lit.var) == Some(lit.positive)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.lits.iter()).finish()
    }
}

/// A partial truth assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(BTreeMap<Var, bool>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn single(var: Var, value: bool) -> Assignment {
        let mut a = Assignment::new();
        a.set(var, value);
        a
    }

    /// Assignment to `vars` (ascending) read off `bits`, where the first
    /// variable is the most significant bit. Counting `bits` upwards from 0
    /// therefore walks the assignments in lexicographic order, false < true.
    pub fn from_bits(vars: &[Var], bits: u64) -> Assignment {
        let n = vars.len();
        Assignment(
            vars.iter()
                .enumerate()
                .map(|(i, &v)| (v, (bits >> (n - 1 - i)) & 1 == 1))
                .collect(),
        )
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.0.insert(var, value);
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.0.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    /// Literals made true by this assignment.
    pub fn true_literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.iter().map(|(v, b)| Literal::new(v, b))
    }

    pub fn value_of(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var).map(|b| lit.satisfied_by(b))
    }

    /// Union with `other`; entries of `other` win on conflict.
    pub fn extended(&self, other: &Assignment) -> Assignment {
        let mut out = self.clone();
        out.0.extend(other.0.iter().map(|(&v, &b)| (v, b)));
        out
    }

    /// True iff every clause of `f` contains a literal made true here.
    pub fn satisfies(&self, f: &Formula) -> bool {
        f.clauses()
            .iter()
            .all(|c| c.lits().iter().any(|&l| self.value_of(l) == Some(true)))
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// A CNF formula over an explicit universe of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Formula {
    clauses: Vec<Clause>,
    universe: BTreeSet<Var>,
}

impl Formula {
    /// Fails if a clause mentions a variable outside `universe`.
    pub fn new(universe: BTreeSet<Var>, clauses: Vec<Clause>) -> Result<Formula> {
        for c in &clauses {
            if let Some(v) = c.vars().find(|v| !universe.contains(v)) {
                return Err(Error::OutsideUniverse(v));
            }
        }
        Ok(Formula { clauses, universe })
    }

    /// Formula over the universe `{1..=num_vars}`.
    pub fn with_num_vars(num_vars: u32, clauses: Vec<Clause>) -> Result<Formula> {
        Formula::new((1..=num_vars).map(Var).collect(), clauses)
    }

    /// Convenience constructor from DIMACS-style integer clauses; the
    /// universe is `{1..=max variable}`.
    pub fn from_ints(clauses: &[&[i64]]) -> Result<Formula> {
        let mut max = 0;
        let mut out = Vec::with_capacity(clauses.len());
        for c in clauses {
            let mut lits = Vec::with_capacity(c.len());
            for &l in c.iter() {
                let lit = Literal::from_dimacs(l)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad literal {l}")))?;
                max = max.max(lit.var.0);
                lits.push(lit);
            }
            out.push(Clause::new(lits)?);
        }
        Formula::with_num_vars(max, out)
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn universe(&self) -> &BTreeSet<Var> {
        &self.universe
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn num_vars(&self) -> usize {
        self.universe.len()
    }

    /// Total number of literal occurrences.
    pub fn length(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    /// Variables that occur in some clause.
    pub fn occurring_vars(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }

    /// Maximum clause size; 0 for a formula without clauses.
    pub fn max_clause_width(&self) -> usize {
        self.clauses.iter().map(Clause::len).max().unwrap_or(0)
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    fn check_subset<'a, I: IntoIterator<Item = &'a Var>>(&self, vars: I) -> Result<()> {
        for v in vars {
            if !self.universe.contains(v) {
                return Err(Error::OutsideUniverse(*v));
            }
        }
        Ok(())
    }

    /// `F[τ]`: drops clauses satisfied by `tau`, strips falsified literals
    /// from the rest and removes `tau`'s domain from the universe. Empty
    /// clauses are kept.
    pub fn apply(&self, tau: &Assignment) -> Result<Formula> {
        Ok(self.apply_with_origin(tau)?.0)
    }

    /// Like [`Formula::apply`], also returning for each residual clause the
    /// index of the clause of `self` it came from.
    pub fn apply_with_origin(&self, tau: &Assignment) -> Result<(Formula, Vec<usize>)> {
        self.check_subset(tau.0.keys())?;
        let mut clauses = Vec::with_capacity(self.clauses.len());
        let mut origin = Vec::with_capacity(self.clauses.len());
        for (j, c) in self.clauses.iter().enumerate() {
            if c.lits.iter().any(|&l| tau.value_of(l) == Some(true)) {
                continue;
            }
            let lits = c
                .lits
                .iter()
                .copied()
                .filter(|l| tau.get(l.var).is_none())
                .collect();
            clauses.push(Clause { lits });
            origin.push(j);
        }
        let universe = self
            .universe
            .iter()
            .copied()
            .filter(|v| tau.get(*v).is_none())
            .collect();
        Ok((Formula { clauses, universe }, origin))
    }

    /// `F − B`: removes every occurrence of the variables in `vars`. The
    /// clause count is unchanged.
    pub fn delete_vars(&self, vars: &BTreeSet<Var>) -> Result<Formula> {
        self.check_subset(vars)?;
        let clauses = self
            .clauses
            .iter()
            .map(|c| Clause {
                lits: c.lits.iter().copied().filter(|l| !vars.contains(&l.var)).collect(),
            })
            .collect();
        let universe = self.universe.difference(vars).copied().collect();
        Ok(Formula { clauses, universe })
    }

    /// Reads DIMACS CNF. The universe is `{1..=n}` from the `p cnf n m`
    /// header.
    pub fn parse_dimacs(text: &str) -> Result<Formula> {
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut header: Option<(u32, usize)> = None;
        let mut clauses = Vec::new();
        let mut current: Vec<Literal> = Vec::new();
        let mut open = false;
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(perr(line_no, "duplicate header".into()));
                }
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                    return Err(perr(line_no, format!("malformed header `{line}`")));
                }
                let n = parts[2]
                    .parse::<u32>()
                    .map_err(|_| perr(line_no, format!("bad variable count `{}`", parts[2])))?;
                let m = parts[3]
                    .parse::<usize>()
                    .map_err(|_| perr(line_no, format!("bad clause count `{}`", parts[3])))?;
                header = Some((n, m));
                continue;
            }
            let Some((n, _)) = header else {
                return Err(perr(line_no, "clause before `p cnf` header".into()));
            };
            for tok in line.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| perr(line_no, format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    if tok.starts_with('-') {
                        return Err(perr(line_no, "literal index 0".into()));
                    }
                    let clause = Clause::new(current.drain(..)).map_err(|e| match e {
                        Error::ComplementaryPair(v) => {
                            perr(line_no, format!("clause contains {v} and -{v}"))
                        }
                        other => other,
                    })?;
                    clauses.push(clause);
                    open = false;
                    continue;
                }
                let lit = Literal::from_dimacs(lit)
                    .filter(|l| l.var.0 <= n)
                    .ok_or_else(|| perr(line_no, format!("variable in `{tok}` exceeds n = {n}")))?;
                current.push(lit);
                open = true;
            }
        }
        let Some((n, m)) = header else {
            return Err(perr(last_line.max(1), "missing `p cnf` header".into()));
        };
        if open {
            return Err(perr(last_line, "unterminated clause".into()));
        }
        if clauses.len() != m {
            return Err(perr(
                last_line.max(1),
                format!("header declares {m} clauses, found {}", clauses.len()),
            ));
        }
        Formula::with_num_vars(n, clauses)
    }

    /// DIMACS text. The declared `n` is the largest universe id, so a
    /// universe of the form `{1..=n}` round-trips exactly.
    pub fn to_dimacs(&self) -> String {
        let n = self.universe.iter().next_back().map_or(0, |v| v.0);
        let mut out = format!("p cnf {} {}\n", n, self.clauses.len());
        for c in &self.clauses {
            for l in &c.lits {
                out.push_str(&l.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        Formula::parse_dimacs(s)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dimacs())
    }
}

/// Parses a comma separated variable list such as `1,4,7`.
pub fn parse_var_list(s: &str) -> Result<BTreeSet<Var>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u32>()
                .ok()
                .and_then(Var::new)
                .ok_or_else(|| Error::InvalidParameter(format!("bad variable `{t}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Var {
        Var::from_id(i)
    }

    fn vars(ids: &[u32]) -> BTreeSet<Var> {
        ids.iter().map(|&i| v(i)).collect()
    }

    // x=1, y=2, z=3
    fn xy_notx_z() -> Formula {
        Formula::from_ints(&[&[1, 2], &[-1, 3]]).unwrap()
    }

    #[test]
    fn parse_simple() {
        let f = Formula::parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f.universe(), &vars(&[1, 2]));
        assert_eq!(f.clauses(), &[Clause::new([v(1).pos(), v(2).neg()]).unwrap()]);
    }

    #[test]
    fn parse_empty_formula() {
        let f = Formula::parse_dimacs("p cnf 1 0").unwrap();
        assert_eq!(f.num_vars(), 1);
        assert_eq!(f.num_clauses(), 0);
    }

    #[test]
    fn parse_rejects_complementary_pair() {
        let err = Formula::parse_dimacs("p cnf 1 1\n1 -1 0").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn parse_errors() {
        assert!(Formula::parse_dimacs("p cnf x 1\n1 0").is_err());
        assert!(Formula::parse_dimacs("p dnf 1 1\n1 0").is_err());
        assert!(Formula::parse_dimacs("1 0").is_err());
        assert!(Formula::parse_dimacs("p cnf 2 1\n1 3 0").is_err());
        assert!(Formula::parse_dimacs("p cnf 2 1\n1 -0 2 0").is_err());
        assert!(Formula::parse_dimacs("p cnf 2 1\n1 2").is_err());
        assert!(Formula::parse_dimacs("p cnf 2 2\n1 2 0").is_err());
    }

    #[test]
    fn parse_comments_duplicates_and_multiline_clauses() {
        let f = Formula::parse_dimacs("c hello\np cnf 3 2\n1 1 -2\n 0 3 0\n").unwrap();
        assert_eq!(f.clauses()[0].len(), 2);
        assert_eq!(f.clauses()[1].lits(), &[v(3).pos()]);
    }

    #[test]
    fn emit_format() {
        let f = Formula::parse_dimacs("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(f.to_dimacs(), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(Formula::default().to_dimacs(), "p cnf 0 0\n");
    }

    #[test]
    fn apply_assignment_examples() {
        let f = xy_notx_z();
        let t = f.apply(&Assignment::single(v(1), true)).unwrap();
        assert_eq!(t.clauses(), &[Clause::new([v(3).pos()]).unwrap()]);
        assert_eq!(t.universe(), &vars(&[2, 3]));
        let fl = f.apply(&Assignment::single(v(1), false)).unwrap();
        assert_eq!(fl.clauses(), &[Clause::new([v(2).pos()]).unwrap()]);
        assert_eq!(f.apply(&Assignment::new()).unwrap(), f);
    }

    #[test]
    fn apply_keeps_empty_clauses() {
        let f = Formula::from_ints(&[&[1], &[2]]).unwrap();
        let g = f.apply(&Assignment::single(v(1), false)).unwrap();
        assert!(g.has_empty_clause());
        assert_eq!(g.num_clauses(), 2);
    }

    #[test]
    fn apply_rejects_foreign_variable() {
        let f = xy_notx_z();
        assert_eq!(
            f.apply(&Assignment::single(v(9), true)),
            Err(Error::OutsideUniverse(v(9)))
        );
    }

    #[test]
    fn delete_vars_examples() {
        let f = xy_notx_z();
        let d = f.delete_vars(&vars(&[1])).unwrap();
        assert_eq!(
            d.clauses(),
            &[Clause::new([v(2).pos()]).unwrap(), Clause::new([v(3).pos()]).unwrap()]
        );
        assert_eq!(f.delete_vars(&BTreeSet::new()).unwrap(), f);

        let tri = Formula::from_ints(&[&[1, 2], &[-1, 2], &[1, -2]]).unwrap();
        let e = tri.delete_vars(&vars(&[1, 2])).unwrap();
        assert_eq!(e.num_clauses(), 3);
        assert!(e.clauses().iter().all(Clause::is_empty));
        assert!(f.delete_vars(&vars(&[7])).is_err());
    }

    #[test]
    fn width() {
        let f = Formula::from_ints(&[&[1, 2], &[3]]).unwrap();
        assert_eq!(f.max_clause_width(), 2);
        assert_eq!(Formula::default().max_clause_width(), 0);
        assert_eq!(f.length(), 3);
    }

    #[test]
    fn assignment_bit_order() {
        let vs = [v(2), v(5)];
        let a = Assignment::from_bits(&vs, 0b01);
        assert_eq!(a.get(v(2)), Some(false));
        assert_eq!(a.get(v(5)), Some(true));
    }

    #[test]
    fn var_list() {
        assert_eq!(parse_var_list("1, 3,2").unwrap(), vars(&[1, 2, 3]));
        assert!(parse_var_list("0").is_err());
        assert!(parse_var_list("").unwrap().is_empty());
    }
}
