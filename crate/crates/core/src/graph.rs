//! Graph machinery: the signed incidence graph, the strong clause-literal
//! graph, acyclicity tests, shortest cycles and the
//! disjoint-cycles-or-feedback-vertex-set dichotomy.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Var};

/// A simple undirected graph on nodes `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Self-loops and repeated edges are
    /// dropped.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Graph { adj }
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    fn mask(&self, nodes: &BTreeSet<usize>) -> Vec<bool> {
        let mut removed = vec![false; self.num_nodes()];
        for &u in nodes {
            removed[u] = true;
        }
        removed
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_masked(&vec![false; self.num_nodes()])
    }

    /// Acyclicity of `G − removed`.
    pub fn is_acyclic_without(&self, removed: &BTreeSet<usize>) -> bool {
        self.is_acyclic_masked(&self.mask(removed))
    }

    pub(crate) fn is_acyclic_masked(&self, removed: &[bool]) -> bool {
        let mut parent: Vec<usize> = (0..self.num_nodes()).collect();
        fn root(parent: &mut [usize], mut u: usize) -> usize {
            while parent[u] != u {
                parent[u] = parent[parent[u]];
                u = parent[u];
            }
            u
        }
        for (u, v) in self.edges() {
            if removed[u] || removed[v] {
                continue;
            }
            let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true
    }

    /// Length (node count) of a shortest cycle of `G − removed`.
    pub(crate) fn girth_masked(&self, removed: &[bool]) -> Option<usize> {
        let n = self.num_nodes();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if removed[s] || self.adj[s].len() < 2 {
                continue;
            }
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            parent[s] = usize::MAX;
            queue.clear();
            queue.push_back(s);
            'bfs: while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break 'bfs;
                    }
                }
                for &w in &self.adj[u] {
                    if removed[w] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// A shortest cycle of `G − forbidden`, or `None` if that graph is a
    /// forest. Among shortest cycles the one whose node sequence, read from
    /// its minimum node, is lexicographically least is returned.
    pub fn find_cycle(&self, forbidden: &BTreeSet<usize>) -> Option<Vec<usize>> {
        self.find_cycle_masked(&self.mask(forbidden))
    }

    pub(crate) fn find_cycle_masked(&self, removed: &[bool]) -> Option<Vec<usize>> {
        let g = self.girth_masked(removed)?;
        let n = self.num_nodes();
        let mut dist = vec![usize::MAX; n];
        let mut on_path = vec![false; n];
        for s in 0..n {
            if removed[s] || self.adj[s].len() < 2 {
                continue;
            }
            // distances to s inside the subgraph of nodes >= s
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if w > s && !removed[w] && dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            let mut path = vec![s];
            on_path[s] = true;
            let found = self.extend_cycle(&mut path, &mut on_path, g, &dist, removed);
            on_path[s] = false;
            if found {
                return Some(path);
            }
        }
        unreachable!("girth {g} computed but no cycle of that length found")
    }

    fn extend_cycle(
        &self,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        g: usize,
        dist: &[usize],
        removed: &[bool],
    ) -> bool {
        let s = path[0];
        let u = *path.last().unwrap();
        if path.len() == g {
            return self.has_edge(u, s);
        }
        for &w in &self.adj[u] {
            if w <= s || removed[w] || on_path[w] || dist[w] > g - path.len() {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            if self.extend_cycle(path, on_path, g, dist, removed) {
                on_path[w] = false;
                return true;
            }
            on_path[w] = false;
            path.pop();
        }
        false
    }

    /// True iff `cycle` lists distinct nodes, at least 3, each consecutive
    /// pair (cyclically) adjacent.
    pub fn is_cycle(&self, cycle: &[usize]) -> bool {
        let distinct: BTreeSet<_> = cycle.iter().collect();
        cycle.len() >= 3
            && distinct.len() == cycle.len()
            && cycle.iter().all(|&u| u < self.num_nodes())
            && (0..cycle.len()).all(|i| self.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]))
    }
}

/// Outcome of [`disjoint_cycles_or_fvs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PackingOrFvs {
    /// Pairwise vertex-disjoint cycles, as many as requested.
    Cycles(Vec<Vec<usize>>),
    /// A feedback vertex set.
    Fvs(BTreeSet<usize>),
}

impl PackingOrFvs {
    /// Checks the dichotomy's contract against `g`.
    pub fn is_valid_for(&self, g: &Graph, k: usize) -> bool {
        match self {
            PackingOrFvs::Cycles(cycles) => {
                let mut seen = BTreeSet::new();
                cycles.len() >= k
                    && cycles.iter().all(|c| g.is_cycle(c))
                    && cycles.iter().flatten().all(|&u| seen.insert(u))
            }
            PackingOrFvs::Fvs(s) => g.is_acyclic_without(s),
        }
    }
}

/// Either `k` vertex-disjoint cycles or a feedback vertex set.
///
/// Shortest cycles are packed greedily. If the packing stops short of `k`
/// cycles, the union of its vertices meets every cycle of `g` and is
/// returned as the feedback vertex set. No bound on that set's size is
/// promised.
pub fn disjoint_cycles_or_fvs(g: &Graph, k: usize) -> Result<PackingOrFvs> {
    if k == 0 {
        return Err(Error::InvalidParameter("cycle count k' must be at least 1".into()));
    }
    let mut removed = vec![false; g.num_nodes()];
    let mut packing = Vec::new();
    while let Some(c) = g.find_cycle_masked(&removed) {
        for &u in &c {
            removed[u] = true;
        }
        packing.push(c);
        if packing.len() >= k {
            return Ok(PackingOrFvs::Cycles(packing));
        }
    }
    Ok(PackingOrFvs::Fvs(packing.into_iter().flatten().collect()))
}

/// A node of an incidence graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum Node {
    #[serde(rename = "var")]
    Var(Var),
    Clause(usize),
}

/// A cycle of an incidence graph, stored without repeating the first node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleDescriptor {
    pub nodes: Vec<Node>,
}

impl CycleDescriptor {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            Node::Var(v) => Some(*v),
            Node::Clause(_) => None,
        })
    }

    pub fn clauses(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            Node::Clause(c) => Some(*c),
            Node::Var(_) => None,
        })
    }
}

/// Signed incidence graph of a formula: variable nodes for the whole
/// universe, clause nodes by position, and one signed edge per occurrence.
///
/// Dense node indices list the variables in ascending id order first,
/// followed by the clauses.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    vars: Vec<Var>,
    var_index: BTreeMap<Var, usize>,
    num_clauses: usize,
    graph: Graph,
    /// per clause: (variable node, sign)
    clause_lits: Vec<Vec<(usize, bool)>>,
}

impl IncidenceGraph {
    pub fn new(f: &Formula) -> IncidenceGraph {
        let vars: Vec<Var> = f.universe().iter().copied().collect();
        let var_index: BTreeMap<Var, usize> =
            vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = vars.len();
        let clause_lits: Vec<Vec<(usize, bool)>> = f
            .clauses()
            .iter()
            .map(|c| {
                c.lits()
                    .iter()
                    .map(|l| (var_index[&l.var()], l.is_positive()))
                    .collect()
            })
            .collect();
        let edges = clause_lits
            .iter()
            .enumerate()
            .flat_map(|(j, lits)| lits.iter().map(move |&(u, _)| (u, n + j)));
        let graph = Graph::from_edges(n + clause_lits.len(), edges);
        IncidenceGraph {
            vars,
            var_index,
            num_clauses: clause_lits.len(),
            graph,
            clause_lits,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.num_clauses
    }

    pub fn num_nodes(&self) -> usize {
        self.graph.num_nodes()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn var_node(&self, v: Var) -> Option<usize> {
        self.var_index.get(&v).copied()
    }

    pub fn clause_node(&self, j: usize) -> usize {
        assert!(j < self.num_clauses, "clause {j} out of range");
        self.vars.len() + j
    }

    pub fn node(&self, idx: usize) -> Node {
        if idx < self.vars.len() {
            Node::Var(self.vars[idx])
        } else {
            Node::Clause(idx - self.vars.len())
        }
    }

    pub fn index_of(&self, node: Node) -> Option<usize> {
        match node {
            Node::Var(v) => self.var_node(v),
            Node::Clause(j) => (j < self.num_clauses).then(|| self.vars.len() + j),
        }
    }

    pub fn is_var_node(&self, idx: usize) -> bool {
        idx < self.vars.len()
    }

    /// Sign of the edge between `v` and clause `j`; `None` if absent.
    pub fn sign(&self, v: Var, j: usize) -> Option<bool> {
        let u = self.var_node(v)?;
        self.clause_lits
            .get(j)?
            .iter()
            .find(|&&(w, _)| w == u)
            .map(|&(_, s)| s)
    }

    /// All edges as `(variable, clause, sign)`.
    pub fn signed_edges(&self) -> impl Iterator<Item = (Var, usize, bool)> + '_ {
        self.clause_lits
            .iter()
            .enumerate()
            .flat_map(move |(j, lits)| lits.iter().map(move |&(u, s)| (self.vars[u], j, s)))
    }

    pub fn is_acyclic(&self) -> bool {
        self.graph.is_acyclic()
    }

    pub fn describe(&self, cycle: &[usize]) -> CycleDescriptor {
        CycleDescriptor {
            nodes: cycle.iter().map(|&i| self.node(i)).collect(),
        }
    }

    /// Shortest cycle avoiding `forbidden`, see [`Graph::find_cycle`].
    pub fn find_cycle(&self, forbidden: &BTreeSet<Node>) -> Option<CycleDescriptor> {
        let idx = forbidden.iter().filter_map(|&n| self.index_of(n)).collect();
        self.graph.find_cycle(&idx).map(|c| self.describe(&c))
    }

    pub fn disjoint_cycles_or_fvs(&self, k: usize) -> Result<IncidencePacking> {
        Ok(match disjoint_cycles_or_fvs(&self.graph, k)? {
            PackingOrFvs::Cycles(cs) => {
                IncidencePacking::Cycles(cs.iter().map(|c| self.describe(c)).collect())
            }
            PackingOrFvs::Fvs(s) => IncidencePacking::Fvs(s.iter().map(|&i| self.node(i)).collect()),
        })
    }

    /// Checks the cycle invariants: alternating variable/clause nodes, even
    /// length at least 4, consecutive nodes adjacent.
    pub fn is_valid_cycle(&self, c: &CycleDescriptor) -> bool {
        let Some(idx) = c.nodes.iter().map(|&n| self.index_of(n)).collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        c.len() >= 4
            && c.len().is_multiple_of(2)
            && (0..idx.len())
                .all(|i| self.is_var_node(idx[i]) != self.is_var_node(idx[(i + 1) % idx.len()]))
            && self.graph.is_cycle(&idx)
    }
}

/// Dichotomy outcome in terms of incidence-graph nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", content = "nodes", rename_all = "lowercase")]
pub enum IncidencePacking {
    Cycles(Vec<CycleDescriptor>),
    Fvs(BTreeSet<Node>),
}

/// Strong clause-literal graph: a node per literal of every universe
/// variable (both polarities), a node per clause, literal–clause incidence
/// edges and an edge between each complementary literal pair.
///
/// Dense indices: variable `i` (in ascending order) owns literal nodes `2i`
/// (positive) and `2i + 1` (negative); clause `j` is node `2n + j`.
#[derive(Clone, Debug)]
pub struct SlitGraph {
    var_index: BTreeMap<Var, usize>,
    num_vars: usize,
    graph: Graph,
}

impl SlitGraph {
    pub fn new(f: &Formula) -> SlitGraph {
        let var_index: BTreeMap<Var, usize> =
            f.universe().iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = var_index.len();
        let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (2 * i, 2 * i + 1)).collect();
        for (j, c) in f.clauses().iter().enumerate() {
            for l in c.lits() {
                let i = var_index[&l.var()];
                let lit_node = if l.is_positive() { 2 * i } else { 2 * i + 1 };
                edges.push((lit_node, 2 * n + j));
            }
        }
        let graph = Graph::from_edges(2 * n + f.num_clauses(), edges);
        SlitGraph {
            var_index,
            num_vars: n,
            graph,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn literal_node(&self, v: Var, positive: bool) -> Option<usize> {
        self.var_index
            .get(&v)
            .map(|&i| if positive { 2 * i } else { 2 * i + 1 })
    }

    pub fn clause_node(&self, j: usize) -> usize {
        2 * self.num_vars + j
    }

    /// Acyclicity of `slit(F) − N[true(τ)]`, which equals acyclicity of
    /// `inc(F[τ])`.
    pub fn residual_acyclic(&self, tau: &Assignment) -> Result<bool> {
        let mut removed = vec![false; self.graph.num_nodes()];
        for lit in tau.true_literals() {
            let u = self
                .literal_node(lit.var(), lit.is_positive())
                .ok_or(Error::OutsideUniverse(lit.var()))?;
            removed[u] = true;
            for &w in self.graph.neighbors(u) {
                removed[w] = true;
            }
        }
        Ok(self.graph.is_acyclic_masked(&removed))
    }
}

/// See [`SlitGraph::residual_acyclic`].
pub fn slit_residual_acyclic(f: &Formula, tau: &Assignment) -> Result<bool> {
    SlitGraph::new(f).residual_acyclic(tau)
}

/// Acyclicity of `inc(F)`.
pub fn formula_is_acyclic(f: &Formula) -> bool {
    IncidenceGraph::new(f).is_acyclic()
}
