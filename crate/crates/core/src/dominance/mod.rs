//! Dominance queries: does every ranking consistent with the net put
//! `better` strictly above `worse`? Answered by searching for an improving
//! flipping sequence from `worse` to `better`.

mod flips;
mod prune;
mod search;
mod tree_dt;

pub use flips::{improving_flips, Flip, FlipSequence};
pub use prune::{forward_prune, settled_variables, suffix_match_len, ForwardPrune};
pub use search::search;
pub use tree_dt::{tree_dt, tree_dt_applies};

use crate::error::Result;
use crate::exec::Exec;
use crate::model::{CpNet, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// Search upward from `worse`.
    #[default]
    Improving,
    /// Search downward from `better`; witnesses are reversed before return.
    Worsening,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Dfs,
    /// Shortest witnesses.
    Bfs,
    Iddfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LvfMode {
    Off,
    /// Expand least-improvable variables first.
    #[default]
    Heuristic,
    /// Expand only least-improvable variables. Complete on binary nets with
    /// at most one directed path between any two variables.
    Prune,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub direction: Direction,
    pub strategy: Strategy,
    pub suffix_fixing: bool,
    pub forward_pruning: bool,
    pub lvf_mode: LvfMode,
    /// Allow [`LvfMode::Prune`] outside the class where it is complete.
    pub force_lvf: bool,
    /// Try the least preferred improving value of a variable first.
    pub least_improving_order: bool,
    pub node_budget: Option<u64>,
    /// Let [`dominates`] route eligible queries to [`tree_dt`].
    pub use_tree_dt: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            direction: Direction::Improving,
            strategy: Strategy::Dfs,
            suffix_fixing: true,
            forward_pruning: true,
            lvf_mode: LvfMode::Heuristic,
            force_lvf: false,
            least_improving_order: true,
            node_budget: None,
            use_tree_dt: true,
        }
    }
}

impl SearchConfig {
    /// No pruning rules and no child ordering: plain visited-set search.
    pub fn unpruned() -> Self {
        SearchConfig {
            suffix_fixing: false,
            forward_pruning: false,
            lvf_mode: LvfMode::Off,
            least_improving_order: false,
            use_tree_dt: false,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub flips_generated: u64,
    pub pruned_suffix: u64,
    pub pruned_forward: u64,
    pub pruned_lvf: u64,
    pub peak_frontier: u64,
    /// Forward pruning answered the query before any search.
    pub forward_infeasible: bool,
}

impl SearchStats {
    pub(crate) fn absorb(&mut self, other: &SearchStats) {
        self.nodes_expanded += other.nodes_expanded;
        self.flips_generated += other.flips_generated;
        self.pruned_suffix += other.pruned_suffix;
        self.pruned_forward += other.pruned_forward;
        self.pruned_lvf += other.pruned_lvf;
        self.peak_frontier = self.peak_frontier.max(other.peak_frontier);
    }

    /// `key: value` lines in a fixed order.
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("nodes_expanded: {}", self.nodes_expanded),
            format!("flips_generated: {}", self.flips_generated),
            format!("pruned_suffix: {}", self.pruned_suffix),
            format!("pruned_forward: {}", self.pruned_forward),
            format!("pruned_lvf: {}", self.pruned_lvf),
            format!("peak_frontier: {}", self.peak_frontier),
            format!("forward_infeasible: {}", self.forward_infeasible),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    /// An improving flipping sequence from `worse` to `better`.
    Yes(FlipSequence),
    No,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub answer: Answer,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn is_yes(&self) -> bool {
        matches!(self.answer, Answer::Yes(_))
    }

    pub fn witness(&self) -> Option<&FlipSequence> {
        match &self.answer {
            Answer::Yes(seq) => Some(seq),
            Answer::No => None,
        }
    }
}

/// Answers `better ≻ worse`. Equal outcomes answer No at once; binary tree
/// nets go to [`tree_dt`] when allowed, everything else to [`search`].
pub fn dominates(
    net: &CpNet,
    better: &Outcome,
    worse: &Outcome,
    config: &SearchConfig,
) -> Result<SearchResult> {
    net.require_well_formed()?;
    net.check_outcome(better)?;
    net.check_outcome(worse)?;
    if better == worse {
        return Ok(SearchResult {
            answer: Answer::No,
            stats: SearchStats::default(),
        });
    }
    if config.use_tree_dt && config.direction == Direction::Improving && tree_dt_applies(net) {
        return tree_dt(net, better, worse);
    }
    search(net, better, worse, config)
}

/// Runs many `(better, worse)` queries, in parallel when `exec` allows.
/// Results come back in query order.
pub fn dominates_batch(
    net: &CpNet,
    queries: &[(Outcome, Outcome)],
    config: &SearchConfig,
    exec: Exec,
) -> Vec<Result<SearchResult>> {
    exec.map_slice(queries, |(better, worse)| dominates(net, better, worse, config))
}
