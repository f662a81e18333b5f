use super::net::CpNet;
use super::relation::{LocalRelation, ValueId, Verdict};
use crate::error::Result;

/// An indifference that a child's CPT does not respect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintWarning {
    pub variable: String,
    pub context: Vec<String>,
    pub values: (String, String),
    pub child: String,
    pub message: String,
}

/// Checks the sufficient condition for using indifference safely: whenever
/// `x ∼ x'` holds for some variable, every child must order its values the
/// same way under `x` and under `x'`, for each assignment to its remaining
/// parents. No warnings means the net is satisfiable; a warning does not
/// prove it unsatisfiable.
pub fn indifference_safety_lint(net: &CpNet) -> Result<Vec<LintWarning>> {
    net.require_acyclic()?;
    let children = net.children();
    let mut warnings = Vec::new();
    for (var, kids) in children.iter().enumerate() {
        let d = net.domain_size(var) as ValueId;
        for (ctx, rel) in &net.cpt(var).rows {
            for x in 0..d {
                for x2 in (x + 1)..d {
                    if rel.compare(x, x2) != Verdict::Equal {
                        continue;
                    }
                    for &child in kids {
                        if !child_rows_agree(net, child, var, x, x2) {
                            let context: Vec<String> = net
                                .parents(var)
                                .iter()
                                .zip(ctx)
                                .map(|(&p, &v)| format!("{}={}", net.variable(p).name, net.value_name(p, v)))
                                .collect();
                            let (xn, x2n) = (net.value_name(var, x), net.value_name(var, x2));
                            let child_name = net.variable(child).name.clone();
                            warnings.push(LintWarning {
                                variable: net.variable(var).name.clone(),
                                message: format!(
                                    "{} is indifferent between {} and {}{} but CPT({}) orders its values differently under them",
                                    net.variable(var).name,
                                    xn,
                                    x2n,
                                    if context.is_empty() {
                                        String::new()
                                    } else {
                                        format!(" given {}", context.join(","))
                                    },
                                    child_name
                                ),
                                context,
                                values: (xn.to_string(), x2n.to_string()),
                                child: child_name,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(warnings)
}

fn child_rows_agree(net: &CpNet, child: usize, parent: usize, x: ValueId, x2: ValueId) -> bool {
    let pos = net
        .parents(child)
        .iter()
        .position(|&p| p == parent)
        .expect("child lists parent");
    let empty = LocalRelation::new(net.domain_size(child), []);
    net.contexts(child)
        .into_iter()
        .filter(|ctx| ctx[pos] == x)
        .all(|ctx| {
            let mut other = ctx.clone();
            other[pos] = x2;
            let a = net.row(child, &ctx).unwrap_or(&empty);
            let b = net.row(child, &other).unwrap_or(&empty);
            a.same_semantics(b)
        })
}
