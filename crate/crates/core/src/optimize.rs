//! Outcome optimization under evidence.

use crate::error::{Error, Result};
use crate::model::{CpNet, Outcome, PartialAssignment, ValueId};

/// Most preferred completion of `evidence`: every free variable takes its
/// best value given its already fixed parents, in topological order.
pub fn forward_sweep(net: &CpNet, evidence: &PartialAssignment) -> Result<Outcome> {
    let order = net.require_standard()?;
    sweep(net, evidence, &order)
}

/// [`forward_sweep`] along a caller-supplied topological order.
pub fn forward_sweep_with_order(
    net: &CpNet,
    evidence: &PartialAssignment,
    order: &[usize],
) -> Result<Outcome> {
    net.require_standard()?;
    check_topological(net, order)?;
    sweep(net, evidence, order)
}

fn check_topological(net: &CpNet, order: &[usize]) -> Result<()> {
    let mut position = vec![usize::MAX; net.len()];
    for (i, &v) in order.iter().enumerate() {
        if v >= net.len() || position[v] != usize::MAX {
            return Err(Error::Precondition("order is not a permutation of the variables".into()));
        }
        position[v] = i;
    }
    if order.len() != net.len() {
        return Err(Error::Precondition("order is not a permutation of the variables".into()));
    }
    for v in 0..net.len() {
        if net.parents(v).iter().any(|&p| position[p] > position[v]) {
            return Err(Error::Precondition("order is not topological".into()));
        }
    }
    Ok(())
}

fn sweep(net: &CpNet, evidence: &PartialAssignment, order: &[usize]) -> Result<Outcome> {
    net.check_partial(evidence)?;
    let mut values: Vec<ValueId> = vec![0; net.len()];
    for &var in order {
        values[var] = match evidence.get(var) {
            Some(v) => v,
            None => {
                let ctx: Vec<ValueId> = net.parents(var).iter().map(|&p| values[p]).collect();
                net.nondominated_local(var, &ctx)?[0]
            }
        };
    }
    Ok(Outcome(values))
}

/// Lazily enumerates the nondominated completions of `evidence`.
///
/// Branches depth-first over each free variable's nondominated values in
/// domain order. Each emission costs at most `n` extension steps beyond the
/// previous one plus backtracking, observable through [`Self::work`].
pub fn enumerate_nondominated<'a>(
    net: &'a CpNet,
    evidence: &PartialAssignment,
    limit: Option<usize>,
) -> Result<NondominatedIter<'a>> {
    let order = net.require_well_formed()?;
    net.check_partial(evidence)?;
    Ok(NondominatedIter {
        net,
        order,
        evidence: evidence.clone(),
        values: vec![0; net.len()],
        stack: Vec::new(),
        started: false,
        remaining: limit,
        work: 0,
    })
}

#[derive(Debug)]
pub struct NondominatedIter<'a> {
    net: &'a CpNet,
    order: Vec<usize>,
    evidence: PartialAssignment,
    values: Vec<ValueId>,
    /// One frame per assigned depth: candidate values and the next to try.
    stack: Vec<(Vec<ValueId>, usize)>,
    started: bool,
    remaining: Option<usize>,
    work: u64,
}

impl NondominatedIter<'_> {
    /// Values assigned so far across the whole enumeration.
    pub fn work(&self) -> u64 {
        self.work
    }

    fn candidates(&self, depth: usize) -> Vec<ValueId> {
        let var = self.order[depth];
        if let Some(v) = self.evidence.get(var) {
            return vec![v];
        }
        let ctx: Vec<ValueId> = self
            .net
            .parents(var)
            .iter()
            .map(|&p| self.values[p])
            .collect();
        self.net
            .nondominated_local(var, &ctx)
            .expect("context built from valid values")
    }
}

impl Iterator for NondominatedIter<'_> {
    type Item = Outcome;

    fn next(&mut self) -> Option<Outcome> {
        if self.remaining == Some(0) {
            return None;
        }
        let n = self.order.len();
        if !self.started {
            self.started = true;
            if n == 0 {
                self.remaining = Some(0);
                return Some(Outcome(Vec::new()));
            }
            let first = self.candidates(0);
            self.stack.push((first, 0));
        }
        while !self.stack.is_empty() {
            let depth = self.stack.len() - 1;
            let (cands, next) = &mut self.stack[depth];
            if *next >= cands.len() {
                self.stack.pop();
                continue;
            }
            let v = cands[*next];
            *next += 1;
            self.values[self.order[depth]] = v;
            self.work += 1;
            if depth + 1 == n {
                if let Some(r) = self.remaining.as_mut() {
                    *r -= 1;
                }
                return Some(Outcome(self.values.clone()));
            }
            let cands = self.candidates(depth + 1);
            self.stack.push((cands, 0));
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{format_outcome, parse_assignment, parse_net};
    use crate::model::Variable;

    const DINNER: &str = "var S : S_f S_v\nvar W : W_w W_r\ncpt S\n- : S_f > S_v\n\
        cpt W (S)\nS_f : W_w > W_r\nS_v : W_r > W_w\n";

    #[test]
    fn dinner_sweeps() {
        let net = parse_net(DINNER).unwrap();
        let none = PartialAssignment::empty(2);
        assert_eq!(format_outcome(&net, &forward_sweep(&net, &none).unwrap()), "S=S_f,W=W_w");
        let z = parse_assignment("S=S_v", &net, false).unwrap();
        assert_eq!(format_outcome(&net, &forward_sweep(&net, &z).unwrap()), "S=S_v,W=W_r");
        let full = parse_assignment("S=S_v,W=W_w", &net, true).unwrap();
        assert_eq!(forward_sweep(&net, &full).unwrap(), full.to_outcome().unwrap());
    }

    #[test]
    fn sweep_rejects_partial_tables_and_bad_orders() {
        let net = parse_net(&DINNER.replace("S_f : W_w > W_r\n", "")).unwrap();
        assert!(forward_sweep(&net, &PartialAssignment::empty(2)).is_err());
        let net = parse_net(DINNER).unwrap();
        assert!(forward_sweep_with_order(&net, &PartialAssignment::empty(2), &[1, 0]).is_err());
    }

    #[test]
    fn missing_row_gives_two_optima() {
        let net = parse_net(&DINNER.replace("S_f : W_w > W_r\n", "")).unwrap();
        let all: Vec<String> = enumerate_nondominated(&net, &PartialAssignment::empty(2), None)
            .unwrap()
            .map(|o| format_outcome(&net, &o))
            .collect();
        assert_eq!(all, ["S=S_f,W=W_w", "S=S_f,W=W_r"]);
    }

    #[test]
    fn empty_tables_enumerate_everything_incrementally() {
        let mut net = CpNet::new();
        for name in ["A", "B", "C", "D"] {
            net.add_variable(Variable::new(name, ["t", "f"])).unwrap();
        }
        let mut it = enumerate_nondominated(&net, &PartialAssignment::empty(4), None).unwrap();
        assert!(it.next().is_some());
        assert_eq!(it.work(), 4);
        assert_eq!(it.count(), 15);
        let limited = enumerate_nondominated(&net, &PartialAssignment::empty(4), Some(5)).unwrap();
        assert_eq!(limited.count(), 5);
    }

    #[test]
    fn empty_net_has_one_empty_outcome() {
        let net = CpNet::new();
        let all: Vec<_> = enumerate_nondominated(&net, &PartialAssignment::empty(0), None)
            .unwrap()
            .collect();
        assert_eq!(all, vec![Outcome(vec![])]);
    }
}
