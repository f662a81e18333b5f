use std::cmp::Reverse;
use std::collections::{HashMap, VecDeque};

use super::flips::{flips_from, Flip, FlipSequence};
use super::prune::{forward_prune, settled_with, suffix_match_len, ForwardPrune};
use super::{Answer, Direction, LvfMode, SearchConfig, SearchResult, SearchStats, Strategy};
use crate::error::{Error, Result};
use crate::model::{classify_structure, CpNet, Outcome, ValueId, Verdict};

/// Everything a query needs that depends only on the net and the config.
struct Engine<'a> {
    net: &'a CpNet,
    order: Vec<usize>,
    position: Vec<usize>,
    descendants: Vec<Vec<bool>>,
    children: Vec<Vec<usize>>,
    want: Verdict,
    allow_equal: bool,
    lvf: LvfMode,
    config: &'a SearchConfig,
}

/// Whether least-variable pruning is known to be complete for `net`.
pub(crate) fn lvf_prune_is_complete(net: &CpNet) -> bool {
    let report = net.validate();
    report.binary
        && report.strict
        && report.complete_tables
        && classify_structure(net).map(|c| c.is_dpsc).unwrap_or(false)
}

pub(crate) fn effective_lvf(net: &CpNet, config: &SearchConfig) -> Result<LvfMode> {
    let complete = lvf_prune_is_complete(net);
    Ok(match config.lvf_mode {
        LvfMode::Prune if !complete && !config.force_lvf => {
            return Err(Error::Precondition(
                "least-variable pruning is only complete on binary nets with at most one directed path between any two variables; set force_lvf to run it anyway".into(),
            ))
        }
        LvfMode::Heuristic if complete => LvfMode::Prune,
        mode => mode,
    })
}

/// Generic flipping-sequence search with the configured pruning rules.
pub fn search(
    net: &CpNet,
    better: &Outcome,
    worse: &Outcome,
    config: &SearchConfig,
) -> Result<SearchResult> {
    let order = net.require_well_formed()?;
    net.check_outcome(better)?;
    net.check_outcome(worse)?;
    if better == worse {
        return Err(Error::EqualOutcomes);
    }
    let lvf = effective_lvf(net, config)?;
    let mut stats = SearchStats::default();

    let domains = if config.forward_pruning {
        match forward_prune(net, worse, better) {
            ForwardPrune::Infeasible { .. } => {
                stats.forward_infeasible = true;
                return Ok(SearchResult {
                    answer: Answer::No,
                    stats,
                });
            }
            ForwardPrune::Domains(d) => Some(d),
        }
    } else {
        None
    };

    let extended = net.has_indifference();
    let engine = Engine::new(net, order, config, lvf, extended);
    let (start, target) = match config.direction {
        Direction::Improving => (worse, better),
        Direction::Worsening => (better, worse),
    };
    let found = engine.run(start, target, domains.as_deref(), &mut stats)?;
    let Some(flips) = found else {
        return Ok(SearchResult {
            answer: Answer::No,
            stats,
        });
    };
    let mut seq = FlipSequence {
        start: start.clone(),
        flips,
    };
    if config.direction == Direction::Worsening {
        seq = seq.reversed();
    }

    if extended {
        // same component if `better` can also get back to `worse`
        let back = SearchConfig {
            direction: Direction::Improving,
            lvf_mode: LvfMode::Heuristic,
            force_lvf: false,
            ..config.clone()
        };
        let back_engine = Engine::new(net, engine.order.clone(), &back, LvfMode::Heuristic, true);
        let back_domains = match forward_prune(net, better, worse) {
            ForwardPrune::Infeasible { .. } => None,
            ForwardPrune::Domains(d) => Some(d),
        };
        let mut back_stats = SearchStats::default();
        let returns = back_domains.is_some()
            && back_engine
                .run(better, worse, back_domains.as_deref(), &mut back_stats)?
                .is_some();
        stats.absorb(&back_stats);
        if returns {
            return Ok(SearchResult {
                answer: Answer::No,
                stats,
            });
        }
    }
    Ok(SearchResult {
        answer: Answer::Yes(seq),
        stats,
    })
}

struct Node {
    values: Vec<ValueId>,
    parent: usize,
    flip: Option<Flip>,
}

impl<'a> Engine<'a> {
    fn new(
        net: &'a CpNet,
        order: Vec<usize>,
        config: &'a SearchConfig,
        lvf: LvfMode,
        allow_equal: bool,
    ) -> Self {
        let mut position = vec![0; net.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        Engine {
            net,
            descendants: net.descendants(),
            children: net.children(),
            order,
            position,
            want: match config.direction {
                Direction::Improving => Verdict::Better,
                Direction::Worsening => Verdict::Worse,
            },
            allow_equal,
            lvf,
            config,
        }
    }

    /// Children of `o` after pruning, in expansion order.
    fn children(
        &self,
        o: &Outcome,
        target: &Outcome,
        domains: Option<&[Vec<bool>]>,
        stats: &mut SearchStats,
    ) -> Vec<Flip> {
        let net = self.net;
        let n = net.len();
        let r = suffix_match_len(&self.order, o, target);
        let in_suffix = |var: usize| self.position[var] + 1 >= r;
        let raw = flips_from(net, o, self.want, self.allow_equal);
        stats.flips_generated += raw.len() as u64;

        // least-improvable variables among the unsettled ones
        let mut least = vec![false; n];
        if self.lvf != LvfMode::Off {
            let settled = settled_with(&self.order, &self.children, o, target);
            let mut improvable = vec![false; n];
            for f in &raw {
                if !settled[f.var]
                    && net.compare_unchecked(f.var, &f.context, f.to, f.from) != Verdict::Equal
                {
                    improvable[f.var] = true;
                }
            }
            for x in 0..n {
                least[x] = improvable[x]
                    && !(0..n).any(|y| self.descendants[x][y] && improvable[y]);
            }
        }

        let mut kept = Vec::with_capacity(raw.len());
        for f in raw {
            if self.config.suffix_fixing && in_suffix(f.var) {
                stats.pruned_suffix += 1;
            } else if domains.is_some_and(|d| !d[f.var][f.to as usize]) {
                stats.pruned_forward += 1;
            } else if self.lvf == LvfMode::Prune && !least[f.var] {
                stats.pruned_lvf += 1;
            } else {
                kept.push(f);
            }
        }

        // least-improvable first, then deeper variables first
        let lvf_key = |f: &Flip| (!least[f.var], Reverse(self.position[f.var]));
        let value_key = |f: &Flip| -> (usize, ValueId) {
            if !self.config.least_improving_order {
                return (0, f.to);
            }
            let rank = net
                .row(f.var, &f.context)
                .map_or(0, |rel| rel.rank_from_top(f.to));
            match self.want {
                // improving: least preferred improvement first
                Verdict::Better => (usize::MAX - rank, f.to),
                _ => (rank, f.to),
            }
        };
        if self.lvf == LvfMode::Off {
            kept.sort_by_key(|f| (f.var, value_key(f)));
        } else {
            kept.sort_by_key(|f| (lvf_key(f), f.var, value_key(f)));
        }
        kept
    }

    fn check_budget(&self, stats: &SearchStats) -> Result<()> {
        if let Some(budget) = self.config.node_budget {
            if stats.nodes_expanded > budget {
                return Err(Error::BudgetExhausted {
                    budget,
                    stats: stats.clone(),
                });
            }
        }
        Ok(())
    }

    fn run(
        &self,
        start: &Outcome,
        target: &Outcome,
        domains: Option<&[Vec<bool>]>,
        stats: &mut SearchStats,
    ) -> Result<Option<Vec<Flip>>> {
        if start == target {
            return Ok(Some(Vec::new()));
        }
        match self.config.strategy {
            Strategy::Dfs => self.dfs(start, target, domains, stats),
            Strategy::Bfs => self.bfs(start, target, domains, stats),
            Strategy::Iddfs => self.iddfs(start, target, domains, stats),
        }
    }

    fn path(nodes: &[Node], mut idx: usize, last: Flip) -> Vec<Flip> {
        let mut flips = vec![last];
        while let Some(f) = &nodes[idx].flip {
            flips.push(f.clone());
            idx = nodes[idx].parent;
        }
        flips.reverse();
        flips
    }

    fn dfs(
        &self,
        start: &Outcome,
        target: &Outcome,
        domains: Option<&[Vec<bool>]>,
        stats: &mut SearchStats,
    ) -> Result<Option<Vec<Flip>>> {
        let mut nodes = vec![Node {
            values: start.0.clone(),
            parent: 0,
            flip: None,
        }];
        let mut seen: HashMap<Vec<ValueId>, usize> = HashMap::from([(start.0.clone(), 0)]);
        stats.nodes_expanded += 1;
        self.check_budget(stats)?;
        let first = self.children(start, target, domains, stats);
        let mut stack: Vec<(usize, Vec<Flip>, usize)> = vec![(0, first, 0)];
        stats.peak_frontier = stats.peak_frontier.max(1);
        while let Some((idx, kids, next)) = stack.last_mut() {
            let Some(f) = kids.get(*next).cloned() else {
                stack.pop();
                continue;
            };
            *next += 1;
            let idx = *idx;
            let mut child = nodes[idx].values.clone();
            child[f.var] = f.to;
            if child == target.0 {
                return Ok(Some(Self::path(&nodes, idx, f)));
            }
            if seen.contains_key(&child) {
                continue;
            }
            let child_idx = nodes.len();
            seen.insert(child.clone(), child_idx);
            let child_outcome = Outcome(child.clone());
            nodes.push(Node {
                values: child,
                parent: idx,
                flip: Some(f),
            });
            stats.nodes_expanded += 1;
            self.check_budget(stats)?;
            let kids = self.children(&child_outcome, target, domains, stats);
            stack.push((child_idx, kids, 0));
            stats.peak_frontier = stats.peak_frontier.max(stack.len() as u64);
        }
        Ok(None)
    }

    fn bfs(
        &self,
        start: &Outcome,
        target: &Outcome,
        domains: Option<&[Vec<bool>]>,
        stats: &mut SearchStats,
    ) -> Result<Option<Vec<Flip>>> {
        let mut nodes = vec![Node {
            values: start.0.clone(),
            parent: 0,
            flip: None,
        }];
        let mut seen: HashMap<Vec<ValueId>, usize> = HashMap::from([(start.0.clone(), 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(idx) = queue.pop_front() {
            stats.nodes_expanded += 1;
            self.check_budget(stats)?;
            let here = Outcome(nodes[idx].values.clone());
            for f in self.children(&here, target, domains, stats) {
                let mut child = here.0.clone();
                child[f.var] = f.to;
                if child == target.0 {
                    return Ok(Some(Self::path(&nodes, idx, f)));
                }
                if seen.contains_key(&child) {
                    continue;
                }
                seen.insert(child.clone(), nodes.len());
                queue.push_back(nodes.len());
                nodes.push(Node {
                    values: child,
                    parent: idx,
                    flip: Some(f),
                });
            }
            stats.peak_frontier = stats.peak_frontier.max(queue.len() as u64);
        }
        Ok(None)
    }

    fn iddfs(
        &self,
        start: &Outcome,
        target: &Outcome,
        domains: Option<&[Vec<bool>]>,
        stats: &mut SearchStats,
    ) -> Result<Option<Vec<Flip>>> {
        for limit in 1.. {
            // shallowest depth at which each outcome was reached this round
            let mut best_depth: HashMap<Vec<ValueId>, usize> = HashMap::from([(start.0.clone(), 0)]);
            let mut cut_off = false;
            let mut path: Vec<Flip> = Vec::new();
            let mut current = start.clone();
            stats.nodes_expanded += 1;
            self.check_budget(stats)?;
            let first = self.children(start, target, domains, stats);
            let mut stack: Vec<(Vec<Flip>, usize)> = vec![(first, 0)];
            while let Some((kids, next)) = stack.last_mut() {
                let Some(f) = kids.get(*next).cloned() else {
                    stack.pop();
                    if let Some(undo) = path.pop() {
                        current = current.with(undo.var, undo.from);
                    }
                    continue;
                };
                *next += 1;
                let child = current.with(f.var, f.to);
                if child == *target {
                    path.push(f);
                    return Ok(Some(path));
                }
                let depth = stack.len();
                if best_depth.get(&child.0).is_some_and(|&d| d <= depth) {
                    continue;
                }
                best_depth.insert(child.0.clone(), depth);
                if depth >= limit {
                    cut_off = true;
                    continue;
                }
                stats.nodes_expanded += 1;
                self.check_budget(stats)?;
                let kids = self.children(&child, target, domains, stats);
                path.push(f);
                current = child;
                stack.push((kids, 0));
                stats.peak_frontier = stats.peak_frontier.max(stack.len() as u64);
            }
            if !cut_off {
                return Ok(None);
            }
        }
        unreachable!("depth limit loop only exits by returning")
    }
}
