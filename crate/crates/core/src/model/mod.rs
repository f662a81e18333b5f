//! CP-net data model: variables, conditional preference tables, outcomes,
//! validation and structural classification.

mod assignment;
mod lint;
mod net;
mod relation;
mod structure;

pub use assignment::{Outcome, PartialAssignment};
pub use lint::{indifference_safety_lint, LintWarning};
pub use net::{CpNet, Cpt, ValidationReport, Variable, Violation, ViolationKind};
pub use relation::{LocalRelation, RelationClass, Statement, StatementKind, ValueId, Verdict};
pub use structure::{classify_structure, path_counts, NetClass};
