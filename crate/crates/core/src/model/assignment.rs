use super::relation::ValueId;

/// Complete assignment: one value index per variable, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(pub Vec<ValueId>);

impl Outcome {
    pub fn new(values: Vec<ValueId>) -> Self {
        Outcome(values)
    }

    pub fn values(&self) -> &[ValueId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> ValueId {
        self.0[var]
    }

    pub fn with(&self, var: usize, value: ValueId) -> Outcome {
        let mut v = self.0.clone();
        v[var] = value;
        Outcome(v)
    }

    /// Values at the given variables, e.g. a parent context.
    pub fn project(&self, vars: &[usize]) -> Vec<ValueId> {
        vars.iter().map(|&v| self.0[v]).collect()
    }

    pub fn as_partial(&self) -> PartialAssignment {
        PartialAssignment(self.0.iter().map(|&v| Some(v)).collect())
    }
}

/// Assignment to a subset of the variables; `None` marks unassigned.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialAssignment(pub Vec<Option<ValueId>>);

impl PartialAssignment {
    pub fn empty(n: usize) -> Self {
        PartialAssignment(vec![None; n])
    }

    pub fn get(&self, var: usize) -> Option<ValueId> {
        self.0[var]
    }

    pub fn set(&mut self, var: usize, value: ValueId) {
        self.0[var] = Some(value);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn assigned_count(&self) -> usize {
        self.0.iter().filter(|v| v.is_some()).count()
    }

    pub fn to_outcome(&self) -> Option<Outcome> {
        self.0.iter().copied().collect::<Option<Vec<_>>>().map(Outcome)
    }

    /// True if `o` agrees with every assigned variable.
    pub fn is_completed_by(&self, o: &Outcome) -> bool {
        self.0
            .iter()
            .zip(o.values())
            .all(|(z, v)| z.is_none_or(|z| z == *v))
    }
}
