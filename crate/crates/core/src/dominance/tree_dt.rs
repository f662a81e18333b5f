use super::flips::{Flip, FlipSequence};
use super::{Answer, SearchResult, SearchStats};
use crate::error::{Error, Result};
use crate::model::{classify_structure, CpNet, Outcome, ValueId, Verdict};

/// Whether `net` is binary, tree-shaped and fully specified with total orders.
pub fn tree_dt_applies(net: &CpNet) -> bool {
    let report = net.validate();
    report.acyclic
        && report.violations.is_empty()
        && report.binary
        && report.strict
        && report.complete_tables
        && classify_structure(net).map(|c| c.is_tree).unwrap_or(false)
}

/// Backtrack-free dominance test for binary tree-structured nets.
///
/// Starting from `worse`, repeatedly drops leaves that already hold their
/// `better` value, then flips a variable that can be improved while none of
/// its remaining descendants can. Runs in O(n²) flips.
pub fn tree_dt(net: &CpNet, better: &Outcome, worse: &Outcome) -> Result<SearchResult> {
    if !tree_dt_applies(net) {
        return Err(Error::Precondition(
            "TreeDT needs a binary, tree-structured net with complete total-order tables".into(),
        ));
    }
    net.check_outcome(better)?;
    net.check_outcome(worse)?;
    if better == worse {
        return Err(Error::EqualOutcomes);
    }
    let n = net.len();
    let children = net.children();
    let descendants = net.descendants();
    let order = net.topological_order().expect("acyclic");
    let mut active = vec![true; n];
    let mut cur = worse.clone();
    let mut flips = Vec::new();
    let mut stats = SearchStats::default();
    let max_steps = n * n + n;

    loop {
        // peel satisfied leaves until none is left to peel
        loop {
            let mut removed = false;
            for &x in order.iter().rev() {
                if active[x]
                    && cur.get(x) == better.get(x)
                    && !children[x].iter().any(|&c| active[c])
                {
                    active[x] = false;
                    removed = true;
                }
            }
            if !removed {
                break;
            }
        }
        if !active.iter().any(|&a| a) {
            return Ok(SearchResult {
                answer: Answer::Yes(FlipSequence {
                    start: worse.clone(),
                    flips,
                }),
                stats,
            });
        }

        stats.nodes_expanded += 1;
        let improvement = |x: usize| -> Option<ValueId> {
            let ctx = cur.project(net.parents(x));
            let other = 1 - cur.get(x);
            (net.compare_unchecked(x, &ctx, other, cur.get(x)) == Verdict::Better).then_some(other)
        };
        let improvable: Vec<bool> = (0..n).map(|x| active[x] && improvement(x).is_some()).collect();
        let pick = order
            .iter()
            .rev()
            .copied()
            .find(|&x| improvable[x] && !(0..n).any(|y| descendants[x][y] && improvable[y]));
        let Some(x) = pick else {
            return Ok(SearchResult {
                answer: Answer::No,
                stats,
            });
        };
        let to = improvement(x).expect("picked an improvable variable");
        let flip = Flip {
            var: x,
            from: cur.get(x),
            to,
            context: cur.project(net.parents(x)),
        };
        stats.flips_generated += 1;
        cur = cur.with(x, to);
        flips.push(flip);
        if flips.len() > max_steps {
            return Err(Error::Precondition(
                "TreeDT exceeded its n² flip bound".into(),
            ));
        }
    }
}
