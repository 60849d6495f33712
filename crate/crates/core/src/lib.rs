//! Learning command-repair rules from examples.
//!
//! Rules are written in a small language: a rule matches the tokens of a
//! failing command and its error message against constants and variables,
//! then builds the fixed command token by token from constants and substrings
//! of the matched variables. [`synthesis`] learns the set of all rules
//! consistent with a list of examples, [`partition`] splits an unsorted
//! example corpus into groups that each admit one rule, and [`store`] keeps
//! learned rules on disk and turns them into suggestions.
//!
//! ```
//! use fixit::synthesis::{apply_symbolic, synth_rules, Example, SynthConfig};
//! use fixit::dsl::tokenize;
//!
//! let err = |name: &str| format!("Could not find or load main class {name}.java");
//! let examples = vec![
//!     Example::parse("java Run.java", &err("Run"), "java Run").unwrap(),
//!     Example::parse("java Meta.java", &err("Meta"), "java Meta").unwrap(),
//! ];
//! let rule = synth_rules(&examples, &SynthConfig::default()).unwrap();
//! let fixed = apply_symbolic(&rule, &tokenize("java Employee.java"), &tokenize(&err("Employee")));
//! assert_eq!(fixed.unwrap().join(), "java Employee");
//! ```

#[cfg(feature = "oracle")]
pub mod bench;
pub mod display;
pub mod dsl;
pub mod error;
pub mod exec;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod partition;
pub mod samples;
pub mod store;
pub mod synthesis;

pub use error::{Error, Result};
pub use exec::Exec;
