use crate::model::{CpNet, Outcome, ValueId, Verdict};

/// Smallest 1-based position `r` in `order` such that `o` and `target`
/// agree on every variable at positions `r..=n`; `n + 1` when the last
/// variable already differs.
pub fn suffix_match_len(order: &[usize], o: &Outcome, target: &Outcome) -> usize {
    let mut r = order.len() + 1;
    for (pos, &var) in order.iter().enumerate().rev() {
        if o.get(var) != target.get(var) {
            break;
        }
        r = pos + 1;
    }
    r
}

/// Variables that agree with `target` together with all their descendants.
/// These form the longest matched suffix over every topological order.
pub fn settled_variables(net: &CpNet, o: &Outcome, target: &Outcome) -> Vec<bool> {
    let order = net.topological_order().expect("acyclic net");
    settled_with(&order, &net.children(), o, target)
}

pub(crate) fn settled_with(
    order: &[usize],
    children: &[Vec<usize>],
    o: &Outcome,
    target: &Outcome,
) -> Vec<bool> {
    let mut settled = vec![false; order.len()];
    for &x in order.iter().rev() {
        settled[x] = o.get(x) == target.get(x) && children[x].iter().all(|&c| settled[c]);
    }
    settled
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForwardPrune {
    /// `allowed[x][v]`: value `v` of variable `x` can occur on some
    /// improving path from `worse` to `better`.
    Domains(Vec<Vec<bool>>),
    /// Some variable cannot get from its `worse` value to its `better` value.
    Infeasible { variable: usize },
}

impl ForwardPrune {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, ForwardPrune::Infeasible { .. })
    }
}

/// Top-down domain filtering. For each variable, arcs of its domain
/// transition graph come from the rows whose context only uses surviving
/// parent values; a value survives if it lies on a path from `worse[X]` to
/// `better[X]`.
pub fn forward_prune(net: &CpNet, worse: &Outcome, better: &Outcome) -> ForwardPrune {
    let order = net.topological_order().expect("acyclic net");
    let mut allowed: Vec<Vec<bool>> = (0..net.len())
        .map(|x| vec![false; net.domain_size(x)])
        .collect();
    for &x in &order {
        let d = net.domain_size(x);
        // arcs[a][b]: some live row lets a improve to b
        let mut arcs = vec![vec![false; d]; d];
        let parents = net.parents(x);
        for (ctx, rel) in &net.cpt(x).rows {
            let live = parents
                .iter()
                .zip(ctx)
                .all(|(&p, &v)| allowed[p][v as usize]);
            if !live {
                continue;
            }
            for a in 0..d as ValueId {
                for b in 0..d as ValueId {
                    if a != b && matches!(rel.compare(b, a), Verdict::Better | Verdict::Equal) {
                        arcs[a as usize][b as usize] = true;
                    }
                }
            }
        }
        let from = reach(&arcs, worse.get(x) as usize, false);
        let to = reach(&arcs, better.get(x) as usize, true);
        let mut any = false;
        for v in 0..d {
            allowed[x][v] = from[v] && to[v];
            any |= allowed[x][v];
        }
        if !any {
            return ForwardPrune::Infeasible { variable: x };
        }
    }
    ForwardPrune::Domains(allowed)
}

fn reach(arcs: &[Vec<bool>], start: usize, backwards: bool) -> Vec<bool> {
    let d = arcs.len();
    let mut seen = vec![false; d];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        for b in 0..d {
            let edge = if backwards { arcs[b][a] } else { arcs[a][b] };
            if edge && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen
}
