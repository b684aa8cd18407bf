//! Exact model counting over Boolean tensor networks.
//!
//! A CNF formula is drawn as a network of clause gates, `|+>` variable caps
//! and COPY tensors that fan shared variables out to their clauses. Fixing
//! every COPY tensor to 0 or 1 leaves a forest that contracts in polynomial
//! time, so the model count is a sum of `2^c` tree contractions, `c` being
//! the number of COPY tensors.
//!
//! Modules:
//! - [`cnf`]: formulas, expressions, DIMACS, generators
//! - [`tensor`]: dense Boolean tensors and gate tensors
//! - [`network`]: network construction, tree contraction, branching
//! - [`counter`]: the counting algorithm
//! - [`oracle`]: brute-force reference counts
//! - [`state`]: dense Boolean-state analytics (entropies, partition trace)
//! - [`cli`]: command-line driver

pub mod cli;
pub mod cnf;
pub mod counter;
pub mod network;
pub mod oracle;
pub mod state;
pub mod tensor;

pub use cnf::{parse_dimacs, parse_expression, BoolExpr, Formula};
pub use counter::{count_models, is_satisfiable, CountOptions, CountResult};
pub use network::{build_boolean_network, build_expr_network, Network, NetworkStats};
