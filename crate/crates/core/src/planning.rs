//! Dominance queries as classical planning problems.
//!
//! Every pair of neighbouring values in a CPT row becomes one unary
//! operator whose prevail condition is the row's parent context. A plan
//! from `init` to `goal` is then a flipping sequence made of single-step
//! flips.

use std::collections::{BTreeSet, HashMap};

use crate::dominance::{Direction, Flip, FlipSequence};
use crate::error::{Error, Result};
use crate::io::{format_outcome, parse_outcome};
use crate::model::{CpNet, Outcome, ValueId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    pub name: String,
    pub var: usize,
    /// Parent values that must hold and stay unchanged.
    pub prevail: Vec<(usize, ValueId)>,
    pub from: ValueId,
    pub to: ValueId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanningProblem {
    pub direction: Direction,
    pub operators: Vec<Operator>,
    pub init: Outcome,
    pub goal: Outcome,
}

/// Builds the planning problem for `better ≻ worse`. Improving problems
/// start at `worse`; worsening ones start at `better`.
pub fn export_planning(
    net: &CpNet,
    better: &Outcome,
    worse: &Outcome,
    direction: Direction,
) -> Result<PlanningProblem> {
    net.require_standard()?;
    net.check_outcome(better)?;
    net.check_outcome(worse)?;
    let mut operators = Vec::new();
    for var in 0..net.len() {
        let name = &net.variable(var).name;
        let parents = net.parents(var);
        for (ctx, rel) in &net.cpt(var).rows {
            let rank = net.context_rank(var, ctx);
            let order = rel.linear_order().expect("standard rows are total orders");
            for pair in order.windows(2) {
                let (hi, lo) = (pair[0], pair[1]);
                let (prefix, from, to) = match direction {
                    Direction::Improving => ("imp", lo, hi),
                    Direction::Worsening => ("wor", hi, lo),
                };
                operators.push(Operator {
                    name: format!(
                        "{prefix}_{name}_{}_to_{}_ctx{rank}",
                        net.value_name(var, from),
                        net.value_name(var, to)
                    ),
                    var,
                    prevail: parents.iter().copied().zip(ctx.iter().copied()).collect(),
                    from,
                    to,
                });
            }
        }
    }
    let (init, goal) = match direction {
        Direction::Improving => (worse.clone(), better.clone()),
        Direction::Worsening => (better.clone(), worse.clone()),
    };
    Ok(PlanningProblem {
        direction,
        operators,
        init,
        goal,
    })
}

impl PlanningProblem {
    fn lookup(&self) -> HashMap<&str, &Operator> {
        self.operators.iter().map(|op| (op.name.as_str(), op)).collect()
    }

    fn applies(op: &Operator, state: &[ValueId]) -> bool {
        state[op.var] == op.from && op.prevail.iter().all(|&(p, v)| state[p] == v)
    }

    /// Replays `plan` from `init`; `Some(states)` if every step applies.
    fn replay(&self, plan: &[String]) -> Result<Option<Vec<Outcome>>> {
        let ops = self.lookup();
        let mut state = self.init.clone();
        let mut states = vec![state.clone()];
        for name in plan {
            let op = ops
                .get(name.as_str())
                .ok_or_else(|| Error::UnknownOperator(name.clone()))?;
            if !Self::applies(op, state.values()) {
                return Ok(None);
            }
            state = state.with(op.var, op.to);
            states.push(state.clone());
        }
        Ok(Some(states))
    }

    /// Causal graph edges `(prevail variable, affected variable)`.
    pub fn causal_graph(&self) -> BTreeSet<(usize, usize)> {
        self.operators
            .iter()
            .flat_map(|op| op.prevail.iter().map(move |&(p, _)| (p, op.var)))
            .collect()
    }

    pub fn to_text(&self, net: &CpNet) -> String {
        let mut out = String::new();
        let pair = |var: usize, v: ValueId| format!("{}={}", net.variable(var).name, net.value_name(var, v));
        for op in &self.operators {
            let prevail = if op.prevail.is_empty() {
                "-".to_string()
            } else {
                op.prevail
                    .iter()
                    .map(|&(p, v)| pair(p, v))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            out.push_str(&format!("operator {}\n", op.name));
            out.push_str(&format!("prevail: {prevail}\n"));
            out.push_str(&format!("pre: {}\n", pair(op.var, op.from)));
            out.push_str(&format!("del: {}\n", pair(op.var, op.from)));
            out.push_str(&format!("add: {}\n\n", pair(op.var, op.to)));
        }
        out.push_str(&format!("init: {}\n", format_outcome(net, &self.init)));
        out.push_str(&format!("goal: {}\n", format_outcome(net, &self.goal)));
        out
    }

    /// Reads the format written by [`Self::to_text`].
    pub fn from_text(text: &str, net: &CpNet) -> Result<PlanningProblem> {
        let syntax = |line: usize, message: String| Error::Syntax {
            line,
            column: 1,
            message,
        };
        let parse_pair = |line: usize, s: &str| -> Result<(usize, ValueId)> {
            let (name, value) = s
                .split_once('=')
                .ok_or_else(|| syntax(line, format!("expected `X=v`, found `{s}`")))?;
            let var = net.var_index(name.trim())?;
            Ok((var, net.value_index(var, value.trim())?))
        };
        let mut operators = Vec::new();
        type Pending = (String, Vec<(usize, ValueId)>, Option<(usize, ValueId)>);
        let mut current: Option<Pending> = None;
        let (mut init, mut goal) = (None, None);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            let (key, rest) = match line.split_once(' ') {
                Some((k, r)) => (k, r.trim()),
                None => (line, ""),
            };
            match key {
                "operator" => {
                    current = Some((rest.to_string(), Vec::new(), None));
                }
                "prevail:" | "pre:" | "del:" | "add:" => {
                    let Some((name, prevail, pre)) = current.as_mut() else {
                        return Err(syntax(lineno, format!("`{key}` outside an operator")));
                    };
                    match key {
                        "prevail:" if rest != "-" => {
                            for part in rest.split(',') {
                                prevail.push(parse_pair(lineno, part)?);
                            }
                        }
                        "pre:" => *pre = Some(parse_pair(lineno, rest)?),
                        "add:" => {
                            let (var, to) = parse_pair(lineno, rest)?;
                            let (pvar, from) =
                                pre.ok_or_else(|| syntax(lineno, "`add:` before `pre:`".into()))?;
                            if pvar != var {
                                return Err(syntax(lineno, "operator must change one variable".into()));
                            }
                            operators.push(Operator {
                                name: std::mem::take(name),
                                var,
                                prevail: std::mem::take(prevail),
                                from,
                                to,
                            });
                            current = None;
                        }
                        _ => {}
                    }
                }
                "init:" => init = Some(parse_outcome(rest, net)?),
                "goal:" => goal = Some(parse_outcome(rest, net)?),
                other => return Err(syntax(lineno, format!("unknown key `{other}`"))),
            }
        }
        let direction = if operators.iter().any(|op| op.name.starts_with("wor_")) {
            Direction::Worsening
        } else {
            Direction::Improving
        };
        Ok(PlanningProblem {
            direction,
            operators,
            init: init.ok_or_else(|| syntax(0, "missing `init:`".into()))?,
            goal: goal.ok_or_else(|| syntax(0, "missing `goal:`".into()))?,
        })
    }
}

/// True iff `plan` applies step by step from `init` and ends at `goal`.
pub fn validate_plan(problem: &PlanningProblem, plan: &[String]) -> Result<bool> {
    Ok(problem
        .replay(plan)?
        .is_some_and(|states| states.last() == Some(&problem.goal)))
}

/// The operator names realizing an improving flipping sequence; flips that
/// skip values are split into neighbouring steps.
pub fn plan_from_sequence(
    problem: &PlanningProblem,
    net: &CpNet,
    seq: &FlipSequence,
) -> Result<Vec<String>> {
    if problem.direction != Direction::Improving {
        return Err(Error::Precondition("expected an improving problem".into()));
    }
    let mut plan = Vec::new();
    let mut state = seq.start.clone();
    for flip in &seq.flips {
        let mut cur = flip.from;
        while cur != flip.to {
            let op = problem
                .operators
                .iter()
                .find(|op| {
                    op.var == flip.var
                        && op.from == cur
                        && PlanningProblem::applies(op, state.values())
                        && net
                            .row(flip.var, &flip.context)
                            .is_some_and(|r| r.rank_from_top(op.to) >= r.rank_from_top(flip.to))
                })
                .ok_or_else(|| Error::Precondition(format!("no operator for {}", flip.describe(net))))?;
            plan.push(op.name.clone());
            cur = op.to;
            state = state.with(op.var, op.to);
        }
    }
    Ok(plan)
}

/// The flipping sequence a plan walks through. Worsening plans come back
/// reversed, so the result always improves from the worse outcome.
pub fn sequence_from_plan(problem: &PlanningProblem, net: &CpNet, plan: &[String]) -> Result<FlipSequence> {
    let states = problem
        .replay(plan)?
        .ok_or_else(|| Error::Precondition("plan does not apply".into()))?;
    let flips = states
        .windows(2)
        .map(|w| {
            let var = (0..net.len())
                .find(|&v| w[0].get(v) != w[1].get(v))
                .expect("each step changes one variable");
            Flip {
                var,
                from: w[0].get(var),
                to: w[1].get(var),
                context: w[0].project(net.parents(var)),
            }
        })
        .collect();
    let seq = FlipSequence {
        start: problem.init.clone(),
        flips,
    };
    Ok(match problem.direction {
        Direction::Improving => seq,
        Direction::Worsening => seq.reversed(),
    })
}

/// Parent edges `(parent, child)` of the net, for comparison with
/// [`PlanningProblem::causal_graph`].
pub fn parent_graph(net: &CpNet) -> BTreeSet<(usize, usize)> {
    (0..net.len())
        .flat_map(|v| net.parents(v).iter().map(move |&p| (p, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::{dominates, SearchConfig};
    use crate::io::parse_net;

    const DINNER: &str = "var S : S_f S_v\nvar W : W_w W_r\ncpt S\n- : S_f > S_v\n\
        cpt W (S)\nS_f : W_w > W_r\nS_v : W_r > W_w\n";

    #[test]
    fn operator_counts() {
        let net = parse_net("var X : x1 x2 x3\ncpt X\n- : x1 > x2 > x3\n").unwrap();
        let o = Outcome(vec![0]);
        let p = export_planning(&net, &o, &Outcome(vec![2]), Direction::Improving).unwrap();
        let names: Vec<&str> = p.operators.iter().map(|op| op.name.as_str()).collect();
        assert_eq!(names, ["imp_X_x2_to_x1_ctx0", "imp_X_x3_to_x2_ctx0"]);

        let net = parse_net(DINNER).unwrap();
        let p = export_planning(&net, &Outcome(vec![0, 0]), &Outcome(vec![1, 0]), Direction::Improving).unwrap();
        assert_eq!(p.operators.len(), 3);
        assert_eq!(p.causal_graph(), parent_graph(&net));
    }

    #[test]
    fn plans_and_witnesses_correspond() {
        let net = parse_net(DINNER).unwrap();
        let (better, worse) = (Outcome(vec![0, 0]), Outcome(vec![1, 0]));
        let p = export_planning(&net, &better, &worse, Direction::Improving).unwrap();
        let r = dominates(&net, &better, &worse, &SearchConfig::default()).unwrap();
        let plan = plan_from_sequence(&p, &net, r.witness().unwrap()).unwrap();
        assert!(validate_plan(&p, &plan).unwrap());
        let back = sequence_from_plan(&p, &net, &plan).unwrap();
        back.validate(&net, false).unwrap();
        assert_eq!(back.end(), better);

        assert!(!validate_plan(&p, &[]).unwrap());
        let blocked = vec!["imp_W_W_r_to_W_w_ctx0".to_string()];
        assert!(!validate_plan(&p, &blocked).unwrap());
        assert!(matches!(
            validate_plan(&p, &["nope".to_string()]),
            Err(Error::UnknownOperator(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let net = parse_net(DINNER).unwrap();
        for direction in [Direction::Improving, Direction::Worsening] {
            let p = export_planning(&net, &Outcome(vec![0, 0]), &Outcome(vec![1, 0]), direction).unwrap();
            let text = p.to_text(&net);
            assert!(text.contains("prevail: S=S_v\n"));
            assert_eq!(PlanningProblem::from_text(&text, &net).unwrap(), p);
        }
    }

    #[test]
    fn extended_nets_are_rejected() {
        let net = parse_net("var A : a b\ncpt A\n- : a = b\n").unwrap();
        assert!(export_planning(&net, &Outcome(vec![0]), &Outcome(vec![1]), Direction::Improving).is_err());
    }
}
