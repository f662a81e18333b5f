use std::collections::BTreeSet;

/// Value index within one variable's domain.
pub type ValueId = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StatementKind {
    Strict,
    Indifferent,
}

/// One declared comparison between two values of a variable.
///
/// `Strict` reads "left is preferred to right". `Indifferent` statements are
/// normalized so that `left <= right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Statement {
    pub kind: StatementKind,
    pub left: ValueId,
    pub right: ValueId,
}

impl Statement {
    pub fn strict(better: ValueId, worse: ValueId) -> Self {
        Statement {
            kind: StatementKind::Strict,
            left: better,
            right: worse,
        }
    }

    pub fn indifferent(a: ValueId, b: ValueId) -> Self {
        Statement {
            kind: StatementKind::Indifferent,
            left: a.min(b),
            right: a.max(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Better,
    Worse,
    Equal,
    Incomparable,
}

impl Verdict {
    pub fn flip(self) -> Self {
        match self {
            Verdict::Better => Verdict::Worse,
            Verdict::Worse => Verdict::Better,
            v => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationClass {
    TotalOrder,
    Preorder,
    Partial,
}

/// Preference relation over one variable's domain for one parent context.
///
/// Stored as the declared statements plus the reflexive-transitive closure of
/// `Strict ∪ Indifferent ∪ Indifferent⁻¹`. Two closure bits per ordered pair:
/// `weak[a][b]` (a ⪰ b) and `strict[a][b]` (a path from a to b crosses at
/// least one strict statement).
#[derive(Debug, Clone)]
pub struct LocalRelation {
    domain: usize,
    statements: BTreeSet<Statement>,
    weak: Vec<bool>,
    strict: Vec<bool>,
}

impl PartialEq for LocalRelation {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.statements == other.statements
    }
}

impl Eq for LocalRelation {}

impl LocalRelation {
    pub fn new(domain: usize, statements: impl IntoIterator<Item = Statement>) -> Self {
        let statements: BTreeSet<Statement> = statements.into_iter().collect();
        for s in &statements {
            assert!(
                (s.left as usize) < domain && (s.right as usize) < domain,
                "statement value out of domain"
            );
        }
        let (weak, strict) = closure(domain, &statements);
        LocalRelation {
            domain,
            statements,
            weak,
            strict,
        }
    }

    /// Total order listing values best first.
    pub fn from_order(domain: usize, order: &[ValueId]) -> Self {
        Self::new(
            domain,
            order.windows(2).map(|w| Statement::strict(w[0], w[1])),
        )
    }

    pub fn domain_size(&self) -> usize {
        self.domain
    }

    pub fn statements(&self) -> &BTreeSet<Statement> {
        &self.statements
    }

    pub fn has_indifference(&self) -> bool {
        self.statements
            .iter()
            .any(|s| s.kind == StatementKind::Indifferent && s.left != s.right)
    }

    fn idx(&self, a: ValueId, b: ValueId) -> usize {
        a as usize * self.domain + b as usize
    }

    pub fn compare(&self, a: ValueId, b: ValueId) -> Verdict {
        if a == b {
            return Verdict::Equal;
        }
        let (ab, ba) = (self.idx(a, b), self.idx(b, a));
        if self.strict[ab] {
            Verdict::Better
        } else if self.strict[ba] {
            Verdict::Worse
        } else if self.weak[ab] {
            // weak paths without a strict step use only symmetric edges
            Verdict::Equal
        } else {
            Verdict::Incomparable
        }
    }

    /// Values `v` with a strict path from `v` back to `v` (or to a value
    /// weakly above it). Non-empty means the row has no preorder semantics.
    pub fn strict_cycle_values(&self) -> Vec<ValueId> {
        (0..self.domain as ValueId)
            .filter(|&v| self.strict[self.idx(v, v)])
            .collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.strict_cycle_values().is_empty()
    }

    pub fn classify(&self) -> RelationClass {
        let mut all_comparable = true;
        for a in 0..self.domain as ValueId {
            for b in (a + 1)..self.domain as ValueId {
                if self.compare(a, b) == Verdict::Incomparable {
                    all_comparable = false;
                }
            }
        }
        if !all_comparable {
            RelationClass::Partial
        } else if self.has_indifference() {
            RelationClass::Preorder
        } else {
            RelationClass::TotalOrder
        }
    }

    /// Values not strictly dominated by any other value, in domain order.
    pub fn nondominated(&self) -> Vec<ValueId> {
        (0..self.domain as ValueId)
            .filter(|&v| {
                !(0..self.domain as ValueId).any(|w| self.compare(w, v) == Verdict::Better)
            })
            .collect()
    }

    /// For a total order: values listed best first.
    pub fn linear_order(&self) -> Option<Vec<ValueId>> {
        if self.classify() != RelationClass::TotalOrder {
            return None;
        }
        let mut values: Vec<ValueId> = (0..self.domain as ValueId).collect();
        // number of values strictly above v; distinct for a total order
        values.sort_by_key(|&v| {
            (0..self.domain as ValueId)
                .filter(|&w| self.compare(w, v) == Verdict::Better)
                .count()
        });
        Some(values)
    }

    /// Number of values strictly preferred to `v`; a rank usable for
    /// least-preferred-first orderings in partial relations too.
    pub fn rank_from_top(&self, v: ValueId) -> usize {
        (0..self.domain as ValueId)
            .filter(|&w| self.compare(w, v) == Verdict::Better)
            .count()
    }

    /// Same verdict for every pair of values.
    pub fn same_semantics(&self, other: &LocalRelation) -> bool {
        self.domain == other.domain && self.weak == other.weak && self.strict == other.strict
    }
}

fn closure(domain: usize, statements: &BTreeSet<Statement>) -> (Vec<bool>, Vec<bool>) {
    let mut weak = vec![false; domain * domain];
    for v in 0..domain {
        weak[v * domain + v] = true;
    }
    for s in statements {
        let (l, r) = (s.left as usize, s.right as usize);
        weak[l * domain + r] = true;
        if s.kind == StatementKind::Indifferent {
            weak[r * domain + l] = true;
        }
    }
    for k in 0..domain {
        for i in 0..domain {
            if !weak[i * domain + k] {
                continue;
            }
            for j in 0..domain {
                if weak[k * domain + j] {
                    weak[i * domain + j] = true;
                }
            }
        }
    }
    let mut strict = vec![false; domain * domain];
    for s in statements.iter().filter(|s| s.kind == StatementKind::Strict) {
        let (l, r) = (s.left as usize, s.right as usize);
        for i in 0..domain {
            if !weak[i * domain + l] {
                continue;
            }
            for j in 0..domain {
                if weak[r * domain + j] {
                    strict[i * domain + j] = true;
                }
            }
        }
    }
    (weak, strict)
}
