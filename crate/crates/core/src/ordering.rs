//! Ordering queries: is it consistent with the net to rank one outcome
//! above another? These are weaker than dominance and answered in linear
//! time.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{CpNet, Outcome, ValueId, Verdict};

/// Outcome of the paired ordering query on `(first, second)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairVerdict {
    /// `first` may be ranked above `second`, and not the reverse.
    FirstOverSecond,
    SecondOverFirst,
    /// Either order is consistent with the net.
    BothOrderable,
}

fn check_pair(net: &CpNet, a: &Outcome, b: &Outcome) -> Result<()> {
    net.check_outcome(a)?;
    net.check_outcome(b)?;
    if a == b {
        return Err(Error::EqualOutcomes);
    }
    Ok(())
}

/// Sufficient test that `under` is not entailed to beat `over`: some
/// variable whose ancestors agree in both outcomes prefers `over`'s value.
/// `false` is inconclusive.
pub fn corollary4_orderable(net: &CpNet, over: &Outcome, under: &Outcome) -> Result<bool> {
    net.require_well_formed()?;
    check_pair(net, over, under)?;
    let agree = ancestors_agree(net, over, under);
    Ok((0..net.len()).any(|x| {
        agree[x] && {
            let ctx = over.project(net.parents(x));
            net.compare_unchecked(x, &ctx, over.get(x), under.get(x)) == Verdict::Better
        }
    }))
}

/// `agree[x]`: the two outcomes match on every proper ancestor of `x`.
fn ancestors_agree(net: &CpNet, a: &Outcome, b: &Outcome) -> Vec<bool> {
    let order = net.topological_order().expect("acyclic");
    let mut agree = vec![true; net.len()];
    for &x in &order {
        agree[x] = net
            .parents(x)
            .iter()
            .all(|&p| agree[p] && a.get(p) == b.get(p));
    }
    agree
}

fn require_basic(net: &CpNet) -> Result<()> {
    net.require_well_formed()?;
    let report = net.validate();
    if !report.strict || !report.complete_tables {
        return Err(Error::Unsupported(
            "ordering queries need complete tables of total orders".into(),
        ));
    }
    Ok(())
}

/// Looks at the variables where the outcomes first differ along every
/// path from the roots. If all of them prefer one outcome, only that order
/// is consistent; otherwise both are.
pub fn paired_ordering_query(net: &CpNet, o: &Outcome, o2: &Outcome) -> Result<PairVerdict> {
    require_basic(net)?;
    check_pair(net, o, o2)?;
    Ok(pair_verdict(net, o, o2))
}

fn pair_verdict(net: &CpNet, o: &Outcome, o2: &Outcome) -> PairVerdict {
    let agree = ancestors_agree(net, o, o2);
    let (mut first, mut second) = (false, false);
    for (x, _) in agree.iter().enumerate().filter(|(_, &a)| a) {
        if o.get(x) != o2.get(x) {
            let ctx: Vec<ValueId> = o.project(net.parents(x));
            match net.compare_unchecked(x, &ctx, o.get(x), o2.get(x)) {
                Verdict::Better => first = true,
                _ => second = true,
            }
        }
    }
    match (first, second) {
        (true, false) => PairVerdict::FirstOverSecond,
        (false, true) => PairVerdict::SecondOverFirst,
        _ => PairVerdict::BothOrderable,
    }
}

/// Orders `outcomes` most preferred first so that no entailed preference
/// is contradicted. Incomparable outcomes keep their input order.
pub fn consistent_sort(net: &CpNet, outcomes: &[Outcome], exec: Exec) -> Result<Vec<Outcome>> {
    let order = consistent_sort_indices(net, outcomes, exec)?;
    Ok(order.into_iter().map(|i| outcomes[i].clone()).collect())
}

/// Like [`consistent_sort`] but returns positions into the input.
pub fn consistent_sort_indices(net: &CpNet, outcomes: &[Outcome], exec: Exec) -> Result<Vec<usize>> {
    require_basic(net)?;
    let mut seen = HashMap::new();
    for (i, o) in outcomes.iter().enumerate() {
        net.check_outcome(o)?;
        if seen.insert(o, i).is_some() {
            return Err(Error::DuplicateOutcome(i));
        }
    }
    let m = outcomes.len();
    // row i lists the j that i must precede
    let above: Vec<Vec<usize>> = exec.map_range(m, |i| {
        (0..m)
            .filter(|&j| {
                j != i
                    && pair_verdict(net, &outcomes[i], &outcomes[j]) == PairVerdict::FirstOverSecond
            })
            .collect()
    });
    let mut indeg = vec![0usize; m];
    for succ in &above {
        for &j in succ {
            indeg[j] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..m).filter(|&i| indeg[i] == 0).collect();
    let mut out = Vec::with_capacity(m);
    while let Some(i) = ready.pop_first() {
        out.push(i);
        for &j in &above[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.insert(j);
            }
        }
    }
    if out.len() != m {
        return Err(Error::Precondition("ordering relation has a cycle".into()));
    }
    Ok(out)
}
