use std::collections::{BTreeMap, HashMap};

use super::assignment::{Outcome, PartialAssignment};
use super::relation::{LocalRelation, RelationClass, ValueId, Verdict};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub values: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, values: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Variable {
            name: name.into(),
            values: values.into_iter().map(Into::into).collect(),
        }
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    pub fn value_index(&self, value: &str) -> Option<ValueId> {
        self.values.iter().position(|v| v == value).map(|i| i as ValueId)
    }
}

/// Conditional preference table of one variable.
///
/// Rows are keyed by the parent values in `parents` order; a missing row
/// leaves every pair of values incomparable in that context.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cpt {
    pub parents: Vec<usize>,
    pub rows: BTreeMap<Vec<ValueId>, LocalRelation>,
}

impl Cpt {
    pub fn new(parents: Vec<usize>) -> Self {
        Cpt {
            parents,
            rows: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CpNet {
    variables: Vec<Variable>,
    cpts: Vec<Cpt>,
    by_name: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    SelfParent,
    DuplicateParent,
    UnknownParent,
    SmallDomain,
    DuplicateValue,
    ContextShape,
    ContextValue,
    RelationDomain,
    StrictCycle,
    Cycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub variable: String,
    /// Parent context of the offending row, when the violation is row-local.
    pub context: Option<Vec<String>>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub acyclic: bool,
    pub strict: bool,
    pub complete_tables: bool,
    pub binary: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// No hard violations (cycles are reported through `acyclic`).
    pub fn is_well_formed(&self) -> bool {
        self.violations.iter().all(|v| v.kind == ViolationKind::Cycle)
    }
}

impl CpNet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable with an empty parentless CPT; returns its index.
    pub fn add_variable(&mut self, var: Variable) -> Result<usize> {
        if self.by_name.contains_key(&var.name) {
            return Err(Error::Precondition(format!(
                "duplicate variable `{}`",
                var.name
            )));
        }
        let idx = self.variables.len();
        self.by_name.insert(var.name.clone(), idx);
        self.variables.push(var);
        self.cpts.push(Cpt::default());
        Ok(idx)
    }

    pub fn set_parents(&mut self, var: usize, parents: Vec<usize>) {
        self.cpts[var] = Cpt::new(parents);
    }

    pub fn set_row(&mut self, var: usize, context: Vec<ValueId>, relation: LocalRelation) {
        self.cpts[var].rows.insert(context, relation);
    }

    pub fn remove_row(&mut self, var: usize, context: &[ValueId]) -> Option<LocalRelation> {
        self.cpts[var].rows.remove(context)
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, var: usize) -> &Variable {
        &self.variables[var]
    }

    pub fn cpt(&self, var: usize) -> &Cpt {
        &self.cpts[var]
    }

    pub fn parents(&self, var: usize) -> &[usize] {
        &self.cpts[var].parents
    }

    pub fn domain_size(&self, var: usize) -> usize {
        self.variables[var].values.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn value_index(&self, var: usize, value: &str) -> Result<ValueId> {
        self.variables[var]
            .value_index(value)
            .ok_or_else(|| Error::UnknownValue {
                variable: self.variables[var].name.clone(),
                value: value.to_string(),
            })
    }

    pub fn value_name(&self, var: usize, value: ValueId) -> &str {
        &self.variables[var].values[value as usize]
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.len()];
        for (v, cpt) in self.cpts.iter().enumerate() {
            for &p in &cpt.parents {
                if p < self.len() {
                    children[p].push(v);
                }
            }
        }
        children
    }

    /// Row relation for `var` under `context`; `None` when the row is absent.
    pub fn row(&self, var: usize, context: &[ValueId]) -> Option<&LocalRelation> {
        self.cpts[var].rows.get(context)
    }

    /// Row applying to `var` in outcome `o`.
    pub fn row_at(&self, var: usize, o: &Outcome) -> Option<&LocalRelation> {
        let cpt = &self.cpts[var];
        if cpt.rows.is_empty() {
            return None;
        }
        let ctx = o.project(&cpt.parents);
        cpt.rows.get(&ctx)
    }

    fn check_context(&self, var: usize, context: &[ValueId]) -> Result<()> {
        let parents = &self.cpts[var].parents;
        if parents.len() != context.len() {
            return Err(Error::ContextShape {
                variable: self.variables[var].name.clone(),
                expected: parents.len(),
                got: context.len(),
            });
        }
        for (&p, &v) in parents.iter().zip(context) {
            if v as usize >= self.domain_size(p) {
                return Err(Error::UnknownValue {
                    variable: self.variables[p].name.clone(),
                    value: v.to_string(),
                });
            }
        }
        Ok(())
    }

    fn check_value(&self, var: usize, value: ValueId) -> Result<()> {
        if value as usize >= self.domain_size(var) {
            return Err(Error::UnknownValue {
                variable: self.variables[var].name.clone(),
                value: value.to_string(),
            });
        }
        Ok(())
    }

    /// Local comparison of two values of `var` in parent context `context`.
    pub fn compare_local(
        &self,
        var: usize,
        context: &[ValueId],
        v1: ValueId,
        v2: ValueId,
    ) -> Result<Verdict> {
        if var >= self.len() {
            return Err(Error::UnknownVariable(format!("#{var}")));
        }
        self.check_context(var, context)?;
        self.check_value(var, v1)?;
        self.check_value(var, v2)?;
        Ok(self.compare_unchecked(var, context, v1, v2))
    }

    pub(crate) fn compare_unchecked(
        &self,
        var: usize,
        context: &[ValueId],
        v1: ValueId,
        v2: ValueId,
    ) -> Verdict {
        if v1 == v2 {
            return Verdict::Equal;
        }
        match self.row(var, context) {
            Some(rel) => rel.compare(v1, v2),
            None => Verdict::Incomparable,
        }
    }

    pub fn nondominated_local(&self, var: usize, context: &[ValueId]) -> Result<Vec<ValueId>> {
        if var >= self.len() {
            return Err(Error::UnknownVariable(format!("#{var}")));
        }
        self.check_context(var, context)?;
        Ok(match self.row(var, context) {
            Some(rel) => rel.nondominated(),
            None => (0..self.domain_size(var) as ValueId).collect(),
        })
    }

    /// Number of parent contexts of `var`, i.e. |Asst(Pa(var))|.
    pub fn context_count(&self, var: usize) -> usize {
        self.cpts[var]
            .parents
            .iter()
            .map(|&p| self.domain_size(p))
            .product()
    }

    /// All parent contexts of `var` in lexicographic order.
    pub fn contexts(&self, var: usize) -> Vec<Vec<ValueId>> {
        let radices: Vec<usize> = self.cpts[var]
            .parents
            .iter()
            .map(|&p| self.domain_size(p))
            .collect();
        mixed_radix(&radices)
    }

    /// Lexicographic rank of a context among all contexts of `var`.
    pub fn context_rank(&self, var: usize, context: &[ValueId]) -> usize {
        self.cpts[var]
            .parents
            .iter()
            .zip(context)
            .fold(0, |acc, (&p, &v)| acc * self.domain_size(p) + v as usize)
    }

    pub fn outcome_count(&self) -> u128 {
        self.variables
            .iter()
            .map(|v| v.domain_size() as u128)
            .try_fold(1u128, |acc, d| acc.checked_mul(d))
            .unwrap_or(u128::MAX)
    }

    pub fn has_indifference(&self) -> bool {
        self.cpts
            .iter()
            .any(|c| c.rows.values().any(|r| r.has_indifference()))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.len();
        for (i, var) in self.variables.iter().enumerate() {
            if var.values.len() < 2 {
                violations.push(Violation {
                    kind: ViolationKind::SmallDomain,
                    variable: var.name.clone(),
                    context: None,
                    message: format!("domain of `{}` has fewer than 2 values", var.name),
                });
            }
            let mut seen = std::collections::HashSet::new();
            for v in &var.values {
                if !seen.insert(v) {
                    violations.push(Violation {
                        kind: ViolationKind::DuplicateValue,
                        variable: var.name.clone(),
                        context: None,
                        message: format!("value `{v}` declared twice"),
                    });
                }
            }
            let cpt = &self.cpts[i];
            let mut seen_parents = std::collections::HashSet::new();
            for &p in &cpt.parents {
                if p == i {
                    violations.push(Violation {
                        kind: ViolationKind::SelfParent,
                        variable: var.name.clone(),
                        context: None,
                        message: format!("self-parent: `{}` lists itself as a parent", var.name),
                    });
                } else if p >= n {
                    violations.push(Violation {
                        kind: ViolationKind::UnknownParent,
                        variable: var.name.clone(),
                        context: None,
                        message: format!("parent index {p} out of range"),
                    });
                }
                if !seen_parents.insert(p) {
                    violations.push(Violation {
                        kind: ViolationKind::DuplicateParent,
                        variable: var.name.clone(),
                        context: None,
                        message: "parent listed twice".to_string(),
                    });
                }
            }
            for (ctx, rel) in &cpt.rows {
                let ctx_names = self.context_names(i, ctx);
                let shape_ok = ctx.len() == cpt.parents.len()
                    && cpt
                        .parents
                        .iter()
                        .zip(ctx)
                        .all(|(&p, &v)| p < n && (v as usize) < self.domain_size(p));
                if ctx.len() != cpt.parents.len() {
                    violations.push(Violation {
                        kind: ViolationKind::ContextShape,
                        variable: var.name.clone(),
                        context: Some(ctx_names.clone()),
                        message: "row key does not assign exactly the parents".to_string(),
                    });
                } else if !shape_ok {
                    violations.push(Violation {
                        kind: ViolationKind::ContextValue,
                        variable: var.name.clone(),
                        context: Some(ctx_names.clone()),
                        message: "row key uses a value outside a parent's domain".to_string(),
                    });
                }
                if rel.domain_size() != var.values.len() {
                    violations.push(Violation {
                        kind: ViolationKind::RelationDomain,
                        variable: var.name.clone(),
                        context: Some(ctx_names.clone()),
                        message: "row relation sized for a different domain".to_string(),
                    });
                    continue;
                }
                let cyc = rel.strict_cycle_values();
                if !cyc.is_empty() {
                    let names: Vec<&str> =
                        cyc.iter().map(|&v| self.value_name(i, v)).collect();
                    violations.push(Violation {
                        kind: ViolationKind::StrictCycle,
                        variable: var.name.clone(),
                        context: Some(ctx_names),
                        message: format!("strict cycle through {}", names.join(", ")),
                    });
                }
            }
        }
        let acyclic = violations
            .iter()
            .all(|v| !matches!(v.kind, ViolationKind::SelfParent | ViolationKind::UnknownParent))
            && self.topological_order().is_some();
        if !acyclic {
            violations.push(Violation {
                kind: ViolationKind::Cycle,
                variable: String::new(),
                context: None,
                message: "parent graph contains a directed cycle".to_string(),
            });
        }
        let strict = self
            .cpts
            .iter()
            .all(|c| c.rows.values().all(|r| r.classify() == RelationClass::TotalOrder));
        let complete_tables = self.cpts.iter().enumerate().all(|(i, c)| {
            c.parents.iter().all(|&p| p < n)
                && self
                    .contexts(i)
                    .iter()
                    .all(|ctx| c.rows.contains_key(ctx))
        });
        let binary = self.variables.iter().all(|v| v.values.len() == 2);
        ValidationReport {
            acyclic,
            strict,
            complete_tables,
            binary,
            violations,
        }
    }

    fn context_names(&self, var: usize, ctx: &[ValueId]) -> Vec<String> {
        self.cpts[var]
            .parents
            .iter()
            .zip(ctx)
            .map(|(&p, &v)| {
                self.variables
                    .get(p)
                    .and_then(|pv| pv.values.get(v as usize))
                    .cloned()
                    .unwrap_or_else(|| format!("#{v}"))
            })
            .collect()
    }

    /// Kahn's algorithm, ties broken by declaration order. `None` if cyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for (v, cpt) in self.cpts.iter().enumerate() {
            for &p in &cpt.parents {
                if p >= n || p == v {
                    return None;
                }
                indeg[v] += 1;
            }
        }
        let children = self.children();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &c in &children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Ancestor sets as bit vectors (`anc[v][u]` = u is a proper ancestor of v).
    pub fn ancestors(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut anc = vec![vec![false; n]; n];
        if let Some(order) = self.topological_order() {
            for &v in &order {
                for &p in &self.cpts[v].parents {
                    let inherited = anc[p].clone();
                    let row = &mut anc[v];
                    row[p] = true;
                    for (dst, src) in row.iter_mut().zip(inherited) {
                        *dst |= src;
                    }
                }
            }
        }
        anc
    }

    /// Descendant sets (`desc[v][u]` = u is a proper descendant of v).
    pub fn descendants(&self) -> Vec<Vec<bool>> {
        let anc = self.ancestors();
        let n = self.len();
        let mut desc = vec![vec![false; n]; n];
        for v in 0..n {
            for u in 0..n {
                if anc[v][u] {
                    desc[u][v] = true;
                }
            }
        }
        desc
    }

    pub fn require_acyclic(&self) -> Result<Vec<usize>> {
        self.topological_order()
            .ok_or_else(|| Error::Precondition("net must be acyclic".to_string()))
    }

    /// Fails unless the net is acyclic, every row is a total order and
    /// every table is complete.
    pub fn require_standard(&self) -> Result<Vec<usize>> {
        let order = self.require_acyclic()?;
        let report = self.validate();
        if !report.is_well_formed() {
            return Err(Error::Precondition(report.violations[0].message.clone()));
        }
        if !report.complete_tables {
            return Err(Error::Precondition("CPTs must be complete".to_string()));
        }
        if !report.strict {
            return Err(Error::Precondition(
                "every CPT row must be a total order".to_string(),
            ));
        }
        Ok(order)
    }

    pub(crate) fn require_well_formed(&self) -> Result<Vec<usize>> {
        let order = self.require_acyclic()?;
        let report = self.validate();
        if let Some(v) = report
            .violations
            .iter()
            .find(|v| v.kind != ViolationKind::Cycle)
        {
            return Err(Error::Precondition(v.message.clone()));
        }
        Ok(order)
    }

    pub fn check_outcome(&self, o: &Outcome) -> Result<()> {
        if o.len() != self.len() {
            return Err(Error::AssignmentShape {
                expected: self.len(),
                got: o.len(),
            });
        }
        for (i, &v) in o.values().iter().enumerate() {
            self.check_value(i, v)?;
        }
        Ok(())
    }

    pub fn check_partial(&self, z: &PartialAssignment) -> Result<()> {
        if z.len() != self.len() {
            return Err(Error::AssignmentShape {
                expected: self.len(),
                got: z.len(),
            });
        }
        for (i, v) in z.0.iter().enumerate() {
            if let Some(v) = *v {
                self.check_value(i, v)?;
            }
        }
        Ok(())
    }

    /// Mixed-radix index of an outcome (first variable most significant).
    pub fn outcome_index(&self, o: &Outcome) -> usize {
        o.values()
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &v)| acc * self.domain_size(i) + v as usize)
    }

    pub fn outcome_at(&self, mut index: usize) -> Outcome {
        let mut values = vec![0 as ValueId; self.len()];
        for i in (0..self.len()).rev() {
            let d = self.domain_size(i);
            values[i] = (index % d) as ValueId;
            index /= d;
        }
        Outcome(values)
    }

    /// Every outcome in mixed-radix order.
    pub fn all_outcomes(&self) -> Vec<Outcome> {
        let radices: Vec<usize> = (0..self.len()).map(|i| self.domain_size(i)).collect();
        mixed_radix(&radices).into_iter().map(Outcome).collect()
    }

    /// Every completion of a partial assignment, in mixed-radix order.
    pub fn completions(&self, z: &PartialAssignment) -> Vec<Outcome> {
        let radices: Vec<usize> = (0..self.len())
            .map(|i| if z.get(i).is_some() { 1 } else { self.domain_size(i) })
            .collect();
        mixed_radix(&radices)
            .into_iter()
            .map(|mut vals| {
                for (i, v) in vals.iter_mut().enumerate() {
                    if let Some(fixed) = z.get(i) {
                        *v = fixed;
                    }
                }
                Outcome(vals)
            })
            .collect()
    }
}

fn mixed_radix(radices: &[usize]) -> Vec<Vec<ValueId>> {
    let total: usize = radices.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0 as ValueId; radices.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for i in (0..radices.len()).rev() {
            cur[i] += 1;
            if (cur[i] as usize) < radices[i] {
                break;
            }
            cur[i] = 0;
        }
    }
    out
}
