//! Brute-force ground truth.
//!
//! Every assignment is evaluated directly. Assignments are integers in
//! `[0, 2^n)` with variable 1 in the least significant bit. Kept
//! deliberately simple so it can be trusted as a reference.

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::cnf::{BoolExpr, Formula};

/// Largest variable count the oracle will enumerate.
pub const MAX_ORACLE_VARS: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{n} variables exceed the brute-force limit of {MAX_ORACLE_VARS}")]
pub struct TooManyVars {
    pub n: u32,
}

/// One truth assignment; bit `v - 1` holds variable `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assignment(pub u64);

impl Assignment {
    pub fn value(self, var: u32) -> bool {
        (self.0 >> (var - 1)) & 1 == 1
    }
}

/// Enumerates all `2^n` assignments in increasing integer order.
#[derive(Debug, Clone)]
pub struct AssignmentIterator {
    n: u32,
    cursor: u64,
}

impl AssignmentIterator {
    pub fn new(n: u32) -> Self {
        assert!(n < 64);
        AssignmentIterator { n, cursor: 0 }
    }
}

impl Iterator for AssignmentIterator {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.cursor >= 1u64 << self.n {
            return None;
        }
        let a = Assignment(self.cursor);
        self.cursor += 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = ((1u64 << self.n) - self.cursor) as usize;
        (left, Some(left))
    }
}

// A clause as (positive mask, negative mask); satisfied when
// (a & pos) | (!a & neg) is nonzero.
fn clause_masks(clauses: impl Iterator<Item = Vec<i64>>) -> Vec<(u32, u32)> {
    clauses
        .map(|c| {
            c.iter().fold((0u32, 0u32), |(p, q), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (p | bit, q)
                } else {
                    (p, q | bit)
                }
            })
        })
        .collect()
}

fn count_masks(n: u32, masks: &[(u32, u32)], want: bool) -> BigUint {
    const CHUNK: u64 = 1 << 14;
    let total = 1u64 << n;
    let chunks = total.div_ceil(CHUNK);
    let count: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(total);
            (lo..hi)
                .filter(|&a| {
                    let a = a as u32;
                    masks.iter().all(|&(p, q)| (a & p) | (!a & q) != 0) == want
                })
                .count() as u64
        })
        .sum();
    BigUint::from(count)
}

fn guard(n: u32) -> Result<(), TooManyVars> {
    if n > MAX_ORACLE_VARS {
        Err(TooManyVars { n })
    } else {
        Ok(())
    }
}

fn signed_clauses(f: &Formula) -> impl Iterator<Item = Vec<i64>> + '_ {
    f.clauses()
        .iter()
        .map(|c| c.lits().iter().map(|l| l.to_dimacs()).collect())
}

/// `#f` by evaluating every assignment.
pub fn brute_force_count(f: &Formula) -> Result<BigUint, TooManyVars> {
    guard(f.num_vars())?;
    Ok(count_masks(f.num_vars(), &clause_masks(signed_clauses(f)), true))
}

/// Number of assignments falsifying `f`, evaluated directly rather than as
/// `2^n - #f`.
pub fn brute_force_count_negated(f: &Formula) -> Result<BigUint, TooManyVars> {
    guard(f.num_vars())?;
    Ok(count_masks(f.num_vars(), &clause_masks(signed_clauses(f)), false))
}

/// Counts models of a raw, unnormalized clause list (duplicates and
/// tautologies allowed).
pub fn brute_force_count_clauses(n: u32, clauses: &[Vec<i64>]) -> Result<BigUint, TooManyVars> {
    guard(n)?;
    Ok(count_masks(n, &clause_masks(clauses.iter().cloned()), true))
}

/// `#e` by recursive evaluation at every assignment.
pub fn brute_force_count_expr(e: &BoolExpr) -> Result<BigUint, TooManyVars> {
    let n = e.num_vars();
    guard(n)?;
    let count = AssignmentIterator::new(n)
        .par_bridge()
        .filter(|a| e.eval(&|v| a.value(v)))
        .count();
    Ok(BigUint::from(count))
}

/// The satisfying assignments themselves, in enumeration order.
pub fn models(f: &Formula) -> Result<Vec<Assignment>, TooManyVars> {
    guard(f.num_vars())?;
    Ok(AssignmentIterator::new(f.num_vars())
        .filter(|a| f.eval(|v| a.value(v)))
        .collect())
}
