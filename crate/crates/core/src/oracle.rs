//! Brute-force semantics over the induced preference graph.
//!
//! Nodes are all outcomes, indexed in mixed-radix order. A strict edge runs
//! from an outcome to each single-variable flip that its row ranks better;
//! an indifference edge joins two outcomes whose flipped values are
//! locally equal and is stored once in each direction.
//!
//! Everything here is exponential in the number of variables and guarded by
//! a node cap (default 2^20).

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::io::format_outcome;
use crate::model::{CpNet, Outcome, PartialAssignment, ValueId, Verdict};

pub const DEFAULT_NODE_CAP: u64 = 1 << 20;
pub const DEFAULT_RANKING_CAP: u64 = 12;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub node_cap: u64,
    pub exec: Exec,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            node_cap: DEFAULT_NODE_CAP,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InducedGraph {
    radices: Vec<usize>,
    /// `strict[i]`: nodes that improve on node `i` by one flip.
    strict: Vec<Vec<u32>>,
    /// `indiff[i]`: nodes one indifferent flip away from node `i`.
    indiff: Vec<Vec<u32>>,
}

pub fn build_induced_graph(net: &CpNet) -> Result<InducedGraph> {
    build_induced_graph_with(net, &OracleConfig::default())
}

pub fn build_induced_graph_with(net: &CpNet, config: &OracleConfig) -> Result<InducedGraph> {
    let report = net.validate();
    if !report.is_well_formed() {
        return Err(Error::Precondition(report.violations[0].message.clone()));
    }
    let nodes = net.outcome_count();
    if nodes > config.node_cap as u128 {
        return Err(Error::ScaleExceeded {
            nodes,
            cap: config.node_cap,
        });
    }
    let n = nodes as usize;
    let adjacency = config.exec.map_range(n, |i| {
        let o = net.outcome_at(i);
        let mut strict = Vec::new();
        let mut indiff = Vec::new();
        for var in 0..net.len() {
            let ctx = o.project(net.parents(var));
            let cur = o.get(var);
            for v in 0..net.domain_size(var) as ValueId {
                if v == cur {
                    continue;
                }
                let j = net.outcome_index(&o.with(var, v)) as u32;
                match net.compare_unchecked(var, &ctx, v, cur) {
                    Verdict::Better => strict.push(j),
                    Verdict::Equal => indiff.push(j),
                    _ => {}
                }
            }
        }
        strict.sort_unstable();
        indiff.sort_unstable();
        (strict, indiff)
    });
    let (strict, indiff) = adjacency.into_iter().unzip();
    Ok(InducedGraph {
        radices: (0..net.len()).map(|v| net.domain_size(v)).collect(),
        strict,
        indiff,
    })
}

impl InducedGraph {
    pub fn node_count(&self) -> usize {
        self.strict.len()
    }

    pub fn strict_edge_count(&self) -> usize {
        self.strict.iter().map(Vec::len).sum()
    }

    /// Undirected indifference pairs.
    pub fn indiff_edge_count(&self) -> usize {
        self.indiff.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn index(&self, o: &Outcome) -> usize {
        o.values()
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&v, &d)| acc * d + v as usize)
    }

    pub fn outcome(&self, mut index: usize) -> Outcome {
        let mut values = vec![0; self.radices.len()];
        for (slot, &d) in values.iter_mut().zip(&self.radices).rev() {
            *slot = (index % d) as ValueId;
            index /= d;
        }
        Outcome(values)
    }

    pub fn strict_successors(&self, i: usize) -> &[u32] {
        &self.strict[i]
    }

    pub fn indiff_neighbors(&self, i: usize) -> &[u32] {
        &self.indiff[i]
    }

    pub fn has_strict_edge(&self, worse: usize, better: usize) -> bool {
        self.strict[worse].binary_search(&(better as u32)).is_ok()
    }

    /// All strict edges as `(worse, better)` pairs in index order.
    pub fn strict_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.strict
            .iter()
            .enumerate()
            .flat_map(|(i, succ)| succ.iter().map(move |&j| (i, j as usize)))
    }

    fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.strict[i]
            .iter()
            .chain(&self.indiff[i])
            .map(|&j| j as usize)
    }

    /// Component id per node over strict ∪ indifference edges.
    pub fn components(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut g = DiGraph::<(), ()>::with_capacity(n, self.strict_edge_count());
        for _ in 0..n {
            g.add_node(());
        }
        for i in 0..n {
            for j in self.successors(i) {
                g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
            }
        }
        let mut comp = vec![0; n];
        for (c, members) in tarjan_scc(&g).into_iter().enumerate() {
            for node in members {
                comp[node.index()] = c;
            }
        }
        comp
    }

    /// Nodes reachable from `start` (including itself).
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in self.successors(i) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Shortest flip count from `from` to `to`, if reachable.
    pub fn distance(&self, from: usize, to: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            if i == to {
                return Some(dist[i]);
            }
            for j in self.successors(i) {
                if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        None
    }

    /// Number of distinct directed paths `from` → `to` over strict edges.
    /// Fails when a strict cycle is reachable from `from`.
    pub fn count_paths(&self, from: usize, to: usize) -> Result<BigUint> {
        // iterative DFS post-order; memo holds finished counts
        let n = self.node_count();
        let mut memo: Vec<Option<BigUint>> = vec![None; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<(usize, usize)> = vec![(from, 0)];
        on_stack[from] = true;
        while let Some(&mut (i, ref mut next)) = stack.last_mut() {
            if i == to {
                memo[i] = Some(BigUint::one());
                on_stack[i] = false;
                stack.pop();
                continue;
            }
            if let Some(&j) = self.strict[i].get(*next) {
                *next += 1;
                let j = j as usize;
                if on_stack[j] {
                    return Err(Error::Precondition(
                        "induced strict graph has a cycle".to_string(),
                    ));
                }
                if memo[j].is_none() {
                    on_stack[j] = true;
                    stack.push((j, 0));
                }
            } else {
                let total = self.strict[i]
                    .iter()
                    .map(|&j| memo[j as usize].clone().unwrap_or_default())
                    .fold(BigUint::zero(), |a, b| a + b);
                memo[i] = Some(total);
                on_stack[i] = false;
                stack.pop();
            }
        }
        Ok(memo[from].take().unwrap_or_default())
    }

    /// One line per directed edge, `worse -> better [strict|indiff]`, in
    /// node-index order.
    pub fn dump(&self, net: &CpNet) -> String {
        let mut out = String::new();
        for i in 0..self.node_count() {
            let from = format_outcome(net, &self.outcome(i));
            let mut edges: Vec<(u32, &str)> = self.strict[i]
                .iter()
                .map(|&j| (j, "strict"))
                .chain(self.indiff[i].iter().map(|&j| (j, "indiff")))
                .collect();
            edges.sort_unstable();
            for (j, kind) in edges {
                let to = format_outcome(net, &self.outcome(j as usize));
                out.push_str(&format!("{from} -> {to} [{kind}]\n"));
            }
        }
        out
    }
}

/// Induced graph plus its components, for answering many queries on one net.
#[derive(Debug, Clone)]
pub struct Oracle {
    graph: InducedGraph,
    components: Vec<usize>,
    satisfiable: bool,
}

impl Oracle {
    pub fn new(net: &CpNet) -> Result<Self> {
        Self::with_config(net, &OracleConfig::default())
    }

    pub fn with_config(net: &CpNet, config: &OracleConfig) -> Result<Self> {
        let graph = build_induced_graph_with(net, config)?;
        let components = graph.components();
        let satisfiable = graph
            .strict_edges()
            .all(|(i, j)| components[i] != components[j]);
        Ok(Oracle {
            graph,
            components,
            satisfiable,
        })
    }

    pub fn graph(&self) -> &InducedGraph {
        &self.graph
    }

    pub fn is_satisfiable(&self) -> bool {
        self.satisfiable
    }

    fn require_satisfiable(&self) -> Result<()> {
        if self.satisfiable {
            Ok(())
        } else {
            Err(Error::Unsatisfiable)
        }
    }

    /// Whether every satisfying ranking puts `better` strictly above `worse`.
    pub fn dominates(&self, better: &Outcome, worse: &Outcome) -> Result<bool> {
        self.require_satisfiable()?;
        let (b, w) = (self.graph.index(better), self.graph.index(worse));
        if self.components[b] == self.components[w] {
            return Ok(false);
        }
        Ok(self.graph.reachable_from(w)[b])
    }

    /// Whether every satisfying ranking puts the two outcomes level.
    pub fn equivalent(&self, a: &Outcome, b: &Outcome) -> Result<bool> {
        self.require_satisfiable()?;
        Ok(self.components[self.graph.index(a)] == self.components[self.graph.index(b)])
    }

    pub fn min_distance(&self, better: &Outcome, worse: &Outcome) -> Result<Option<usize>> {
        self.require_satisfiable()?;
        Ok(self
            .graph
            .distance(self.graph.index(worse), self.graph.index(better)))
    }

    /// `m[i][j]`: outcome `i` dominates outcome `j` (node indices).
    pub fn dominance_matrix(&self, exec: Exec) -> Result<Vec<Vec<bool>>> {
        self.require_satisfiable()?;
        let n = self.graph.node_count();
        let reach = exec.map_range(n, |w| self.graph.reachable_from(w));
        Ok((0..n)
            .map(|b| {
                (0..n)
                    .map(|w| reach[w][b] && self.components[b] != self.components[w])
                    .collect()
            })
            .collect())
    }
}

/// True iff no strongly connected component contains a strict edge. Cyclic
/// nets are accepted here.
pub fn oracle_satisfiable(net: &CpNet) -> Result<bool> {
    Ok(Oracle::new(net)?.is_satisfiable())
}

pub fn oracle_dominates(net: &CpNet, better: &Outcome, worse: &Outcome) -> Result<bool> {
    net.require_acyclic()?;
    net.check_outcome(better)?;
    net.check_outcome(worse)?;
    Oracle::new(net)?.dominates(better, worse)
}

pub fn oracle_min_distance(net: &CpNet, better: &Outcome, worse: &Outcome) -> Result<Option<usize>> {
    net.require_acyclic()?;
    net.check_outcome(better)?;
    net.check_outcome(worse)?;
    Oracle::new(net)?.min_distance(better, worse)
}

fn require_strict_acyclic(net: &CpNet) -> Result<()> {
    net.require_well_formed()?;
    if !net.validate().strict {
        return Err(Error::Unsupported(
            "rankings are only counted for nets whose rows are total orders".to_string(),
        ));
    }
    Ok(())
}

pub fn count_satisfying_rankings(net: &CpNet) -> Result<BigUint> {
    count_satisfying_rankings_with(net, DEFAULT_RANKING_CAP)
}

/// Counts linear extensions of the induced strict graph by dynamic
/// programming over sets of already-placed outcomes.
pub fn count_satisfying_rankings_with(net: &CpNet, cap: u64) -> Result<BigUint> {
    require_strict_acyclic(net)?;
    let nodes = net.outcome_count();
    if nodes > cap as u128 || nodes > 24 {
        return Err(Error::ScaleExceeded {
            nodes,
            cap: cap.min(24),
        });
    }
    let graph = build_induced_graph(net)?;
    let n = graph.node_count();
    // must_precede[j]: nodes that have to be ranked above j
    let mut must_precede = vec![0u32; n];
    for (worse, better) in graph.strict_edges() {
        must_precede[worse] |= 1 << better;
    }
    let full = (1usize << n) - 1;
    let mut ways = vec![BigUint::zero(); full + 1];
    ways[0] = BigUint::one();
    for mask in 0..full {
        if ways[mask].is_zero() {
            continue;
        }
        let placed = ways[mask].clone();
        for (j, &pre) in must_precede.iter().enumerate() {
            if mask & (1 << j) == 0 && (pre as usize) & !mask == 0 {
                ways[mask | (1 << j)] += &placed;
            }
        }
    }
    Ok(ways[full].clone())
}

/// Builds one ranking (best first) by recursively splitting on a root
/// variable: first parentless variable in declaration order, then the first
/// variable whose parents are all fixed.
pub fn construct_satisfying_ranking(net: &CpNet) -> Result<Vec<Outcome>> {
    net.require_standard()?;
    let nodes = net.outcome_count();
    if nodes > DEFAULT_NODE_CAP as u128 {
        return Err(Error::ScaleExceeded {
            nodes,
            cap: DEFAULT_NODE_CAP,
        });
    }
    let mut out = Vec::with_capacity(nodes as usize);
    let mut fixed = PartialAssignment::empty(net.len());
    rank_into(net, &mut fixed, &mut out);
    Ok(out)
}

fn rank_into(net: &CpNet, fixed: &mut PartialAssignment, out: &mut Vec<Outcome>) {
    let next = (0..net.len()).find(|&v| {
        fixed.get(v).is_none() && net.parents(v).iter().all(|&p| fixed.get(p).is_some())
    });
    let Some(var) = next else {
        out.push(fixed.to_outcome().expect("all variables fixed"));
        return;
    };
    let ctx: Vec<ValueId> = net
        .parents(var)
        .iter()
        .map(|&p| fixed.get(p).expect("parent fixed"))
        .collect();
    let order = net
        .row(var, &ctx)
        .and_then(|r| r.linear_order())
        .expect("standard nets have total-order rows");
    for v in order {
        fixed.set(var, v);
        rank_into(net, fixed, out);
    }
    fixed.0[var] = None;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_net, parse_outcome};

    const DINNER: &str = "var S : S_f S_v\nvar W : W_w W_r\ncpt S\n- : S_f > S_v\n\
        cpt W (S)\nS_f : W_w > W_r\nS_v : W_r > W_w\n";
    const EXAMPLE4: &str = "var A : a a_bar\nvar B : b b_bar\ncpt A\n- : a = a_bar\n\
        cpt B (A)\na : b > b_bar\na_bar : b_bar > b\n";

    fn o(net: &CpNet, text: &str) -> Outcome {
        parse_outcome(text, net).unwrap()
    }

    #[test]
    fn dinner_graph() {
        let net = parse_net(DINNER).unwrap();
        let g = build_induced_graph(&net).unwrap();
        assert_eq!((g.node_count(), g.strict_edge_count(), g.indiff_edge_count()), (4, 4, 0));
        assert!(oracle_satisfiable(&net).unwrap());
        assert_eq!(count_satisfying_rankings(&net).unwrap(), BigUint::from(1u8));
        let ranking: Vec<String> = construct_satisfying_ranking(&net)
            .unwrap()
            .iter()
            .map(|x| format_outcome(&net, x))
            .collect();
        assert_eq!(
            ranking,
            ["S=S_f,W=W_w", "S=S_f,W=W_r", "S=S_v,W=W_r", "S=S_v,W=W_w"]
        );
        let dump = g.dump(&net);
        assert!(dump.contains("S=S_v,W=W_w -> S=S_f,W=W_w [strict]\n"), "{dump}");
        assert_eq!(dump.lines().count(), 4);
    }

    #[test]
    fn example4_is_unsatisfiable() {
        let net = parse_net(EXAMPLE4).unwrap();
        let g = build_induced_graph(&net).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.strict_edge_count(), 2);
        assert_eq!(g.indiff_edge_count(), 2);
        let ab_bar = g.index(&o(&net, "A=a,B=b_bar"));
        let ab = g.index(&o(&net, "A=a,B=b"));
        assert!(g.has_strict_edge(ab_bar, ab));
        assert!(!oracle_satisfiable(&net).unwrap());
        assert!(matches!(
            oracle_dominates(&net, &o(&net, "A=a,B=b"), &o(&net, "A=a,B=b_bar")),
            Err(Error::Unsatisfiable)
        ));
        let repaired = parse_net(&EXAMPLE4.replace("a_bar : b_bar > b", "a_bar : b > b_bar")).unwrap();
        assert!(oracle_satisfiable(&repaired).unwrap());
    }

    #[test]
    fn single_variable() {
        let net = parse_net("var X : x x_bar\ncpt X\n- : x > x_bar\n").unwrap();
        let g = build_induced_graph(&net).unwrap();
        assert_eq!((g.node_count(), g.strict_edge_count()), (2, 1));
        assert_eq!(count_satisfying_rankings(&net).unwrap(), BigUint::one());
        assert_eq!(construct_satisfying_ranking(&net).unwrap(), vec![Outcome(vec![0]), Outcome(vec![1])]);
    }

    #[test]
    fn distances_and_self_queries() {
        let net = parse_net(DINNER).unwrap();
        let best = o(&net, "S=S_f,W=W_w");
        assert!(!oracle_dominates(&net, &best, &best).unwrap());
        assert_eq!(oracle_min_distance(&net, &best, &best).unwrap(), Some(0));
        let worst = o(&net, "S=S_v,W=W_w");
        assert_eq!(oracle_min_distance(&net, &best, &worst).unwrap(), Some(1));
        assert_eq!(oracle_min_distance(&net, &worst, &best).unwrap(), None);
    }

    #[test]
    fn cap_is_enforced() {
        let net = parse_net(DINNER).unwrap();
        let config = OracleConfig {
            node_cap: 3,
            ..OracleConfig::default()
        };
        assert!(matches!(
            build_induced_graph_with(&net, &config),
            Err(Error::ScaleExceeded { nodes: 4, cap: 3 })
        ));
    }

    #[test]
    fn cyclic_nets_allowed_for_satisfiability() {
        // A depends on B, B on A; both copy the other: satisfiable
        let copy = "var A : a a_bar\nvar B : b b_bar\ncpt A (B)\nb : a > a_bar\nb_bar : a_bar > a\n\
            cpt B (A)\na : b > b_bar\na_bar : b_bar > b\n";
        assert!(oracle_satisfiable(&parse_net(copy).unwrap()).unwrap());
        // A copies B, B opposes A: a four-cycle of strict flips
        let oppose = copy.replace("a : b > b_bar\na_bar : b_bar > b", "a : b_bar > b\na_bar : b > b_bar");
        let net = parse_net(&oppose).unwrap();
        assert!(!oracle_satisfiable(&net).unwrap());
        assert!(oracle_dominates(&net, &Outcome(vec![0, 0]), &Outcome(vec![1, 1])).is_err());
    }

    #[test]
    fn parallel_and_sequential_graphs_agree() {
        let net = parse_net(DINNER).unwrap();
        let seq = build_induced_graph_with(&net, &OracleConfig { exec: Exec::Sequential, ..Default::default() }).unwrap();
        let par = build_induced_graph_with(&net, &OracleConfig { exec: Exec::Parallel, ..Default::default() }).unwrap();
        assert_eq!(seq.strict, par.strict);
    }
}
