//! Model counting by COPY-tensor branching.
//!
//! Fixing every COPY node to 0 or 1 turns the formula's network into a
//! forest; the count is the sum of the `2^c` forest values. Branches are
//! enumerated in lexicographic order (COPY variables ascending, 0 before 1)
//! and may be evaluated in parallel: exact integer addition makes the sum
//! independent of the schedule.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cnf::{BoolExpr, Formula};
use crate::network::{
    build_boolean_network, build_expr_network, contract_forest, contract_norm_tree_with, Network,
    NetworkError, NetworkStats,
};

pub const DEFAULT_MAX_BRANCH_VARS: usize = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CountError {
    #[error("{c} COPY tensors would need 2^{c} branches; the limit is {max} (raise --max-branch-vars or pass --force)")]
    BranchGuard { c: usize, max: usize },
    #[error("expression is not read-once")]
    NotReadOnce,
    #[error("normalized tree contracted to {0}, expected 1")]
    NormalizationFailed(f64),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// How each branch's forest is evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Closed-form value of the per-clause forest after fixing shared
    /// variables: a clause with `m` free single-occurrence literals gives
    /// `2^m` if already satisfied and `2^m - 1` otherwise.
    #[default]
    ClauseProduct,
    /// Build each branch network and contract it as a tree.
    Contraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub max_branch_vars: usize,
    pub force: bool,
    pub strategy: Strategy,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            max_branch_vars: DEFAULT_MAX_BRANCH_VARS,
            force: false,
            strategy: Strategy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub model_count: BigUint,
    pub satisfiable: bool,
    pub stats: NetworkStats,
    pub branches_evaluated: BigUint,
    pub elapsed: Duration,
}

/// Reporting surrogate `(g + c*d) * 2^c` for the contraction cost.
pub fn predicted_cost(stats: &NetworkStats) -> BigUint {
    BigUint::from(stats.g + stats.c * stats.d) << stats.c
}

fn check_guard(stats: &NetworkStats, opts: &CountOptions) -> Result<(), CountError> {
    // branch indices are u64
    if (stats.c > opts.max_branch_vars && !opts.force) || stats.c >= 64 {
        return Err(CountError::BranchGuard {
            c: stats.c,
            max: opts.max_branch_vars.min(63),
        });
    }
    Ok(())
}

/// Per-clause data for the closed-form branch evaluation.
struct ClausePlan {
    /// (index into the shared-variable list, literal is negated)
    shared: Vec<(usize, bool)>,
    /// Number of single-occurrence literals.
    free: usize,
}

struct BranchPlan {
    shared_vars: Vec<u32>,
    clauses: Vec<ClausePlan>,
    absent: usize,
    max_free: usize,
}

impl BranchPlan {
    fn new(f: &Formula) -> Self {
        let profile = f.profile();
        let shared_vars = profile.shared_vars();
        let slot: BTreeMap<u32, usize> = shared_vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let clauses: Vec<ClausePlan> = f
            .clauses()
            .iter()
            .map(|c| {
                let mut plan = ClausePlan {
                    shared: Vec::new(),
                    free: 0,
                };
                for l in c.lits() {
                    match slot.get(&l.var()) {
                        Some(&i) => plan.shared.push((i, l.is_negated())),
                        None => plan.free += 1,
                    }
                }
                plan
            })
            .collect();
        let max_free = clauses.iter().map(|c| c.free).max().unwrap_or(0);
        BranchPlan {
            shared_vars,
            clauses,
            absent: profile.absent_vars(),
            max_free,
        }
    }

    fn c(&self) -> usize {
        self.shared_vars.len()
    }

    // Value of shared variable `slot` in branch `b`; slot 0 is the most
    // significant bit so that b counts up lexicographically.
    fn bit(&self, b: u64, slot: usize) -> bool {
        (b >> (self.c() - 1 - slot)) & 1 == 1
    }

    /// Forest value of branch `b`.
    fn value(&self, b: u64) -> BigUint {
        let mut exponent = self.absent;
        // unsatisfied[m] counts clauses contributing 2^m - 1
        let mut unsatisfied = vec![0u32; self.max_free + 1];
        for clause in &self.clauses {
            let sat = clause.shared.iter().any(|&(slot, neg)| self.bit(b, slot) != neg);
            if sat {
                exponent += clause.free;
            } else if clause.free == 0 {
                return BigUint::zero();
            } else {
                unsatisfied[clause.free] += 1;
            }
        }
        let mut value = BigUint::one() << exponent;
        for (m, &k) in unsatisfied.iter().enumerate().skip(2) {
            if k > 0 {
                let factor = (BigUint::one() << m) - 1u32;
                value *= factor.pow(k);
            }
        }
        value
    }
}

enum Evaluator {
    Plan(BranchPlan),
    Tree { net: Network, c: usize },
}

impl Evaluator {
    fn new(f: &Formula, net: &Network, strategy: Strategy) -> Self {
        match strategy {
            Strategy::ClauseProduct => Evaluator::Plan(BranchPlan::new(f)),
            Strategy::Contraction => Evaluator::Tree {
                net: net.clone(),
                c: net.stats().c,
            },
        }
    }

    /// Value of the forest left after fixing every COPY node according to `b`.
    fn value(&self, b: u64) -> Result<BigUint, CountError> {
        match self {
            Evaluator::Plan(plan) => Ok(plan.value(b)),
            Evaluator::Tree { net, c } => branch_tree_value(net, *c, b),
        }
    }
}

fn branch_tree_value(net: &Network, c: usize, b: u64) -> Result<BigUint, CountError> {
    let values: Vec<bool> = (0..c).map(|slot| (b >> (c - 1 - slot)) & 1 == 1).collect();
    let tree = net.assign_copies(&values)?;
    Ok(contract_forest(&tree)?)
}

/// Values of all `2^c` branches in lexicographic order, each computed by
/// contracting the branch's tree.
pub fn branch_values(f: &Formula, opts: &CountOptions) -> Result<Vec<BigUint>, CountError> {
    let net = build_boolean_network(f);
    let stats = net.stats();
    check_guard(&stats, opts)?;
    (0..1u64 << stats.c)
        .into_par_iter()
        .map(|b| branch_tree_value(&net, stats.c, b))
        .collect()
}

/// Exact `#f`.
pub fn count_models(f: &Formula, opts: &CountOptions) -> Result<CountResult, CountError> {
    let start = Instant::now();
    let net = build_boolean_network(f);
    let stats = net.stats();
    check_guard(&stats, opts)?;
    let eval = Evaluator::new(f, &net, opts.strategy);
    let (model_count, branches) = (0..1u64 << stats.c)
        .into_par_iter()
        .map(|b| eval.value(b).map(|v| (v, 1u64)))
        .try_reduce(|| (BigUint::zero(), 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(CountResult {
        satisfiable: !model_count.is_zero(),
        model_count,
        branches_evaluated: BigUint::from(branches),
        stats,
        elapsed: start.elapsed(),
    })
}

/// `#f > 0`, stopping at the first branch with a nonzero value.
pub fn is_satisfiable(f: &Formula, opts: &CountOptions) -> Result<bool, CountError> {
    let net = build_boolean_network(f);
    let stats = net.stats();
    check_guard(&stats, opts)?;
    let eval = Evaluator::new(f, &net, opts.strategy);
    let found = (0..1u64 << stats.c)
        .into_par_iter()
        .map(|b| eval.value(b).map(|v| !v.is_zero()))
        .find_any(|r| !matches!(r, Ok(false)));
    match found {
        Some(Err(e)) => Err(e),
        Some(Ok(_)) => Ok(true),
        None => Ok(false),
    }
}

/// Satisfiability of a read-once expression, decided by contracting its
/// normalized network with its mirror image.
///
/// Every normalized gate is an isometry, so the contraction collapses to
/// `<1|id|1> = 1`. Returns the contracted value alongside the verdict.
pub fn rof_satisfiable(e: &BoolExpr) -> Result<(bool, f64), CountError> {
    if !e.is_read_once() {
        return Err(CountError::NotReadOnce);
    }
    let net = build_expr_network(e);
    let value = contract_norm_tree_with(&net, |n| n.normalized_tensor())?;
    if (value - 1.0).abs() > 1e-9 {
        return Err(CountError::NormalizationFailed(value));
    }
    Ok((true, value))
}

/// `#e` for an expression: its network is branched on COPY nodes like a
/// formula's and each branch tree is contracted.
pub fn count_expr(e: &BoolExpr, opts: &CountOptions) -> Result<BigUint, CountError> {
    let net = build_expr_network(e);
    let stats = net.stats();
    check_guard(&stats, opts)?;
    (0..1u64 << stats.c)
        .into_par_iter()
        .map(|b| branch_tree_value(&net, stats.c, b))
        .try_reduce(BigUint::zero, |a, b| Ok(a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{generate_random_ksat, parse_expression};
    use crate::oracle::brute_force_count;

    fn f(n: u32, clauses: &[&[i64]]) -> Formula {
        Formula::new(n, clauses.iter().map(|c| c.to_vec())).unwrap()
    }

    fn count(formula: &Formula) -> u64 {
        count_models(formula, &CountOptions::default())
            .unwrap()
            .model_count
            .try_into()
            .unwrap()
    }

    #[test]
    fn small_examples() {
        let contra = f(1, &[&[1], &[-1]]);
        let r = count_models(&contra, &CountOptions::default()).unwrap();
        assert!(r.model_count.is_zero());
        assert!(!r.satisfiable);
        assert_eq!(count(&f(2, &[&[1, 2]])), 3);
        assert_eq!(count(&f(3, &[&[1, 2], &[-1, 3]])), 4);
        assert_eq!(count(&Formula::new(5, Vec::<Vec<i64>>::new()).unwrap()), 32);
    }

    #[test]
    fn random_3cnf_matches_oracle() {
        let formula = generate_random_ksat(14, 20, 3, 42).unwrap();
        let r = count_models(&formula, &CountOptions::default()).unwrap();
        assert_eq!(r.model_count, brute_force_count(&formula).unwrap());
        assert_eq!(r.branches_evaluated, BigUint::one() << r.stats.c);
    }

    #[test]
    fn strategies_agree() {
        for seed in 0..20 {
            let formula = generate_random_ksat(8, 10, 3, seed).unwrap();
            let fast = count_models(&formula, &CountOptions::default()).unwrap();
            let slow = count_models(
                &formula,
                &CountOptions {
                    strategy: Strategy::Contraction,
                    ..CountOptions::default()
                },
            )
            .unwrap();
            assert_eq!(fast.model_count, slow.model_count, "seed {seed}");
        }
    }

    #[test]
    fn per_branch_values_agree() {
        let formula = generate_random_ksat(9, 7, 3, 11).unwrap();
        let plan = BranchPlan::new(&formula);
        let trees = branch_values(&formula, &CountOptions::default()).unwrap();
        for (b, v) in trees.iter().enumerate() {
            assert_eq!(plan.value(b as u64), *v, "branch {b}");
        }
    }

    #[test]
    fn guard() {
        let clauses: Vec<Vec<i64>> = (1..=5).flat_map(|v| [vec![v], vec![v, 6]]).collect();
        let formula = Formula::new(6, clauses).unwrap();
        let opts = CountOptions {
            max_branch_vars: 3,
            ..CountOptions::default()
        };
        assert_eq!(
            count_models(&formula, &opts).unwrap_err(),
            CountError::BranchGuard { c: 6, max: 3 }
        );
        let forced = CountOptions { force: true, ..opts };
        assert_eq!(count_models(&formula, &forced).unwrap().model_count, BigUint::from(2u8));
    }

    #[test]
    fn satisfiability() {
        let opts = CountOptions::default();
        assert!(!is_satisfiable(&f(1, &[&[1], &[-1]]), &opts).unwrap());
        assert!(is_satisfiable(&f(2, &[&[1, 2]]), &opts).unwrap());
        let contraction = CountOptions {
            strategy: Strategy::Contraction,
            ..opts
        };
        assert!(!is_satisfiable(&f(2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]), &contraction).unwrap());
    }

    #[test]
    fn read_once_satisfiable() {
        let e = parse_expression("(x1 | x2) & !x3").unwrap();
        let (sat, v) = rof_satisfiable(&e).unwrap();
        assert!(sat);
        assert!((v - 1.0).abs() < 1e-9);
        assert_eq!(
            rof_satisfiable(&parse_expression("x1 | x1").unwrap()).unwrap_err(),
            CountError::NotReadOnce
        );
    }

    #[test]
    fn expression_counts() {
        let opts = CountOptions::default();
        assert_eq!(count_expr(&parse_expression("x1 & !x1").unwrap(), &opts).unwrap(), BigUint::zero());
        assert_eq!(
            count_expr(&parse_expression("(x1 | x2) & (!x1 | x3)").unwrap(), &opts).unwrap(),
            BigUint::from(4u8)
        );
    }

    #[test]
    fn cost_surrogate() {
        let stats = |g, c, d| NetworkStats {
            n: 0,
            m: 0,
            g,
            c,
            d,
            branch_bound: BigUint::one() << c,
        };
        assert_eq!(predicted_cost(&stats(2, 1, 2)), BigUint::from(8u8));
        assert_eq!(predicted_cost(&stats(7, 0, 0)), BigUint::from(7u8));
    }

    #[test]
    fn cost_surrogate_is_polynomial_for_log_copies() {
        // g = n, c = ceil(log2 n), d = n  =>  (n + n log n) * n: below n^3
        let mut prev: Option<(f64, f64)> = None;
        for n in [1usize << 4, 1 << 8, 1 << 12] {
            let c = (n as f64).log2().ceil() as usize;
            let cost = predicted_cost(&NetworkStats {
                n: n as u32,
                m: n,
                g: n,
                c,
                d: n,
                branch_bound: BigUint::one() << c,
            });
            let cost: f64 = cost.to_string().parse().unwrap();
            assert!(cost <= (n as f64).powi(3), "n={n} cost={cost}");
            if let Some((pn, pc)) = prev {
                let ratio = cost / pc;
                let growth = n as f64 / pn;
                assert!(ratio <= growth.powi(3), "ratio {ratio} vs growth {growth}");
            }
            prev = Some((n as f64, cost));
        }
    }
}
