//! Instance families: long-witness chains, the 3-SAT reduction, and seeded
//! random nets for property tests.

mod random;
mod sat;

pub use random::{gen_random, random_outcome, ClassConstraint, RandomNetParams, Strictness};
pub use sat::{gen_sat3, parse_dimacs, random_cnf, Cnf};

use crate::error::{Error, Result};
use crate::model::{CpNet, LocalRelation, Outcome, Statement, ValueId, Variable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub answer: bool,
    pub min_length_lower_bound: u64,
    /// Exact minimal witness length together with where the number comes from.
    pub min_length_exact: Option<(u64, String)>,
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub name: String,
    pub net: CpNet,
    pub better: Outcome,
    pub worse: Outcome,
    pub expected: Option<Expected>,
}

fn chain_variable(net: &mut CpNet, i: usize, suffixes: &[&str]) -> usize {
    let values = suffixes.iter().map(|s| format!("x{i}{s}"));
    net.add_variable(Variable::new(format!("X{i}"), values))
        .expect("chain variable names are distinct")
}

/// A binary chain of `2k + 1` variables whose only improving flipping
/// sequence between the query outcomes has `k² + 2k + 1` flips.
///
/// `X1` prefers `x1`. The next `k` variables copy their parent's polarity
/// and the last `k` oppose it. The worse outcome alternates, starting with
/// `x1_bar` at `X1`; the better outcome is all-`x`.
pub fn gen_theorem13(k: usize) -> Result<GeneratedInstance> {
    if k == 0 {
        return Err(Error::Generator("k must be at least 1".into()));
    }
    let n = 2 * k + 1;
    let mut net = CpNet::new();
    for i in 1..=n {
        let v = chain_variable(&mut net, i, &["", "_bar"]);
        if i == 1 {
            net.set_row(v, vec![], LocalRelation::from_order(2, &[0, 1]));
            continue;
        }
        net.set_parents(v, vec![v - 1]);
        let copy = i <= k + 1;
        for parent in 0..2 as ValueId {
            let best = if copy { parent } else { 1 - parent };
            net.set_row(v, vec![parent], LocalRelation::from_order(2, &[best, 1 - best]));
        }
    }
    let worse = Outcome((1..=n).map(|i| if i % 2 == 0 { 0 } else { 1 }).collect());
    let better = Outcome(vec![0; n]);
    let exact = (k * k + 2 * k + 1) as u64;
    Ok(GeneratedInstance {
        name: format!("theorem13-k{k}"),
        net,
        better,
        worse,
        expected: Some(Expected {
            answer: true,
            min_length_lower_bound: exact,
            min_length_exact: (k <= 4)
                .then(|| (exact, "measured by breadth-first search on the induced graph for k <= 4".into())),
        }),
    })
}

/// The sequence `a1 = 2`, `a_i = 2 a_(i-1) + 2`.
pub fn theorem20_terms(k: usize) -> Vec<u64> {
    let mut terms = Vec::with_capacity(k);
    let mut a = 2u64;
    for _ in 0..k {
        terms.push(a);
        a = 2 * a + 2;
    }
    terms
}

const THEOREM20_MEASURED: [u64; 3] = [7, 23, 59];

/// A three-valued chain of `2k + 1` variables with partial rows in its
/// lower half, where the shortest improving sequence from all-`x_bbar` to
/// all-`x` grows exponentially in `k`.
pub fn gen_theorem20(k: usize) -> Result<GeneratedInstance> {
    if k == 0 {
        return Err(Error::Generator("k must be at least 1".into()));
    }
    let n = 2 * k + 1;
    let (x, xb, xbb): (ValueId, ValueId, ValueId) = (0, 1, 2);
    let mut net = CpNet::new();
    for i in 1..=n {
        let v = chain_variable(&mut net, i, &["", "_bar", "_bbar"]);
        if i == 1 {
            net.set_row(v, vec![], LocalRelation::from_order(3, &[x, xb, xbb]));
            continue;
        }
        net.set_parents(v, vec![v - 1]);
        if i <= k + 1 {
            net.set_row(v, vec![x], LocalRelation::from_order(3, &[x, xb, xbb]));
            net.set_row(v, vec![xb], LocalRelation::from_order(3, &[xbb, xb, x]));
            net.set_row(v, vec![xbb], LocalRelation::from_order(3, &[x, xb, xbb]));
        } else {
            net.set_row(
                v,
                vec![x],
                LocalRelation::new(3, [Statement::strict(xb, x), Statement::strict(xb, xbb)]),
            );
            net.set_row(
                v,
                vec![xbb],
                LocalRelation::new(3, [Statement::strict(x, xb), Statement::strict(xbb, xb)]),
            );
        }
    }
    let sum: u64 = theorem20_terms(k).iter().sum();
    Ok(GeneratedInstance {
        name: format!("theorem20-k{k}"),
        net,
        better: Outcome(vec![x; n]),
        worse: Outcome(vec![xbb; n]),
        expected: Some(Expected {
            answer: true,
            min_length_lower_bound: sum,
            min_length_exact: THEOREM20_MEASURED
                .get(k - 1)
                .map(|&d| (d, "measured by breadth-first search on the induced graph".into())),
        }),
    })
}

#[cfg(test)]
mod tests;
