use rand::Rng;

use super::{Expected, GeneratedInstance};
use crate::error::{Error, Result};
use crate::model::{CpNet, LocalRelation, Outcome, ValueId, Variable};

/// Clauses as DIMACS literals: `j` is proposition `j`, `-j` its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(clauses: Vec<Vec<i32>>) -> Result<Cnf> {
        if clauses.iter().flatten().any(|&l| l == 0) {
            return Err(Error::Generator("literal 0 is not a proposition".into()));
        }
        let num_vars = clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
        Ok(Cnf { num_vars, clauses })
    }

    fn satisfied_by(&self, bits: u64) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let value = bits >> (l.unsigned_abs() - 1) & 1 == 1;
                value == (l > 0)
            })
        })
    }

    /// Truth-table check over all `2^num_vars` assignments.
    pub fn is_satisfiable(&self) -> bool {
        assert!(self.num_vars < 32, "truth table too large");
        (0..1u64 << self.num_vars).any(|bits| self.satisfied_by(bits))
    }
}

/// Reads DIMACS text. Comment lines start with `c`; the `p cnf` header is
/// optional and, when present, fixes the proposition count. Clauses end at
/// `0` and may span lines.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut declared = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        let syntax = |message: String| Error::Syntax {
            line: i + 1,
            column: 1,
            message,
        };
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            match fields.as_slice() {
                ["cnf", vars, _] => {
                    declared = Some(vars.parse::<usize>().map_err(|_| syntax(format!("bad count `{vars}`")))?)
                }
                _ => return Err(syntax("expected `p cnf <vars> <clauses>`".into())),
            }
            continue;
        }
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| syntax(format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let mut cnf = Cnf::new(clauses)?;
    if let Some(m) = declared {
        if m < cnf.num_vars {
            return Err(Error::Generator(format!(
                "header declares {m} propositions but literal {} appears",
                cnf.num_vars
            )));
        }
        cnf.num_vars = m;
    }
    Ok(cnf)
}

/// A random CNF over `num_vars` propositions with `num_clauses` clauses of
/// up to three distinct propositions each.
pub fn random_cnf(rng: &mut impl Rng, num_vars: usize, num_clauses: usize) -> Cnf {
    assert!(num_vars >= 1);
    let clauses = (0..num_clauses)
        .map(|_| {
            let width = rng.gen_range(1..=num_vars.min(3));
            let mut props: Vec<usize> = (1..=num_vars).collect();
            let mut clause = Vec::with_capacity(width);
            for _ in 0..width {
                let p = props.swap_remove(rng.gen_range(0..props.len())) as i32;
                clause.push(if rng.gen_bool(0.5) { p } else { -p });
            }
            clause
        })
        .collect();
    Cnf { num_vars, clauses }
}

const T: ValueId = 0;
const F: ValueId = 1;

/// Encodes a CNF as a binary net where all-`t` dominates all-`f` exactly
/// when the CNF is satisfiable.
///
/// Each proposition `j` gets two roots `Vj` and `NVj`, both preferring `t`.
/// Clause `Ci` depends on the root pairs of its propositions and prefers
/// `t` in a context where one of its literals has a pair that disagrees,
/// with the literal's own side at `t`.
pub fn gen_sat3(cnf: &Cnf) -> Result<GeneratedInstance> {
    if cnf.clauses.is_empty() {
        return Err(Error::Generator("CNF has no clauses".into()));
    }
    let mut net = CpNet::new();
    let tf = || ["t", "f"];
    for j in 1..=cnf.num_vars {
        for name in [format!("V{j}"), format!("NV{j}")] {
            let v = net.add_variable(Variable::new(name, tf()))?;
            net.set_row(v, vec![], LocalRelation::from_order(2, &[T, F]));
        }
    }
    let pos = |j: usize| 2 * (j - 1);
    for (i, clause) in cnf.clauses.iter().enumerate() {
        if clause.is_empty() {
            return Err(Error::Generator(format!("clause {} is empty", i + 1)));
        }
        let mut props: Vec<usize> = clause.iter().map(|l| l.unsigned_abs() as usize).collect();
        props.sort_unstable();
        props.dedup();
        if props.len() > 3 {
            return Err(Error::Generator(format!(
                "clause {} mentions {} distinct propositions",
                i + 1,
                props.len()
            )));
        }
        if let Some(&j) = props.iter().find(|&&j| j == 0 || j > cnf.num_vars) {
            return Err(Error::Generator(format!("literal {j} out of range")));
        }
        let parents: Vec<usize> = props.iter().flat_map(|&j| [pos(j), pos(j) + 1]).collect();
        let c = net.add_variable(Variable::new(format!("C{}", i + 1), tf()))?;
        net.set_parents(c, parents.clone());
        for ctx in net.contexts(c) {
            let value_of = |var: usize| ctx[parents.iter().position(|&p| p == var).unwrap()];
            let satisfied = clause.iter().any(|&l| {
                let j = l.unsigned_abs() as usize;
                let (v, nv) = (value_of(pos(j)), value_of(pos(j) + 1));
                v != nv && if l > 0 { v == T } else { nv == T }
            });
            let order = if satisfied { [T, F] } else { [F, T] };
            net.set_row(c, ctx, LocalRelation::from_order(2, &order));
        }
    }
    let n = net.len();
    Ok(GeneratedInstance {
        name: format!("sat3-m{}-c{}", cnf.num_vars, cnf.clauses.len()),
        net,
        better: Outcome(vec![T; n]),
        worse: Outcome(vec![F; n]),
        expected: Some(Expected {
            answer: cnf.is_satisfiable(),
            min_length_lower_bound: n as u64,
            min_length_exact: None,
        }),
    })
}
