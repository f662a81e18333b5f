//! Conditional ceteris-paribus preference networks (CP-nets).
//!
//! The [`model`] module holds the net itself. Queries come in three
//! families: outcome optimization ([`optimize`]), ordering ([`ordering`])
//! and dominance ([`dominance`]). [`oracle`] answers the same questions by
//! brute force over the induced preference graph and is the reference the
//! search engine is tested against.
//!
//! ```
//! use cpnet::io::{parse_net, parse_outcome};
//! use cpnet::dominance::{dominates, Answer, SearchConfig};
//!
//! let net = parse_net(
//!     "var S : S_f S_v\nvar W : W_w W_r\n\
//!      cpt S\n- : S_f > S_v\n\
//!      cpt W (S)\nS_f : W_w > W_r\nS_v : W_r > W_w\n",
//! ).unwrap();
//! let better = parse_outcome("S=S_f,W=W_w", &net).unwrap();
//! let worse = parse_outcome("S=S_v,W=W_w", &net).unwrap();
//! let result = dominates(&net, &better, &worse, &SearchConfig::default()).unwrap();
//! assert!(matches!(result.answer, Answer::Yes(_)));
//! ```

pub mod dominance;
pub mod error;
pub mod exec;
pub mod generators;
pub mod io;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod ordering;
pub mod planning;

pub use error::{Error, Result};
pub use exec::Exec;
pub use model::{CpNet, LocalRelation, Outcome, PartialAssignment, ValueId, Verdict};
