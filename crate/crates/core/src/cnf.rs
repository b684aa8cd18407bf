//! CNF formulas, Boolean expression trees, DIMACS and expression parsing,
//! and seeded instance generators.
//!
//! Variables are 1-based throughout. A [`Formula`] is always kept normalized:
//! literals inside a clause are sorted by variable and deduplicated, and
//! tautological clauses are dropped.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors raised while building, parsing, or generating formulas.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: missing `p cnf` header before clause data")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate `p cnf` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: malformed header `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: token `{token}` is not an integer")]
    NotAnInteger { line: usize, token: String },
    #[error("variable index {var} out of range 1..={num_vars}")]
    VarOutOfRange { var: u64, num_vars: u32 },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("empty expression")]
    EmptyExpression,
    #[error("clause width {k} exceeds the number of variables {n}")]
    WidthExceedsVars { k: usize, n: u32 },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// A literal: variable index (1-based) with polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    var: u32,
    negated: bool,
}

impl Lit {
    pub fn new(var: u32, negated: bool) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Lit { var, negated }
    }

    pub fn pos(var: u32) -> Self {
        Lit::new(var, false)
    }

    pub fn neg(var: u32) -> Self {
        Lit::new(var, true)
    }

    /// DIMACS-style signed integer, e.g. `-3` for `¬x3`.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 || value.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Lit::new(value.unsigned_abs() as u32, value < 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    /// Value of the literal when its variable takes `value`.
    pub fn eval(self, value: bool) -> bool {
        value != self.negated
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit {
            var: self.var,
            negated: !self.negated,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals, sorted by (variable, polarity) with no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn eval(&self, assignment: impl Fn(u32) -> bool) -> bool {
        self.lits.iter().any(|l| l.eval(assignment(l.var)))
    }
}

/// What normalization removed while building a [`Formula`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NormalizeReport {
    pub duplicate_literals: usize,
    pub tautologies: usize,
}

/// A CNF formula over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    /// Builds a normalized formula from DIMACS-style signed literals.
    pub fn new<C, I>(num_vars: u32, clauses: C) -> Result<Self, CnfError>
    where
        C: IntoIterator<Item = I>,
        I: IntoIterator<Item = i64>,
    {
        Self::with_report(num_vars, clauses).map(|(f, _)| f)
    }

    /// Like [`Formula::new`], also reporting what normalization dropped.
    pub fn with_report<C, I>(num_vars: u32, clauses: C) -> Result<(Self, NormalizeReport), CnfError>
    where
        C: IntoIterator<Item = I>,
        I: IntoIterator<Item = i64>,
    {
        let mut report = NormalizeReport::default();
        let mut out = Vec::new();
        for raw in clauses {
            let mut lits = Vec::new();
            for v in raw {
                let lit = Lit::from_dimacs(v).ok_or(CnfError::VarOutOfRange {
                    var: v.unsigned_abs(),
                    num_vars,
                })?;
                if lit.var > num_vars {
                    return Err(CnfError::VarOutOfRange {
                        var: lit.var as u64,
                        num_vars,
                    });
                }
                lits.push(lit);
            }
            if let Some(clause) = normalize_clause(lits, &mut report) {
                out.push(clause);
            }
        }
        Ok((
            Formula {
                num_vars,
                clauses: out,
            },
            report,
        ))
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Appends a clause, normalizing it. Returns false when it was a tautology.
    pub fn push_clause(&mut self, lits: impl IntoIterator<Item = i64>) -> Result<bool, CnfError> {
        let (f, _) = Formula::with_report(self.num_vars, [lits])?;
        match f.clauses.into_iter().next() {
            Some(c) => {
                self.clauses.push(c);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Evaluates the formula; `assignment(v)` gives the value of variable `v`.
    pub fn eval(&self, assignment: impl Fn(u32) -> bool) -> bool {
        self.clauses.iter().all(|c| c.eval(&assignment))
    }

    pub fn profile(&self) -> VarProfile {
        let mut occurrences = vec![0usize; self.num_vars as usize];
        for c in &self.clauses {
            for l in c.lits() {
                occurrences[l.var as usize - 1] += 1;
            }
        }
        VarProfile { occurrences }
    }

    /// Writes the formula in DIMACS CNF.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c.lits() {
                s.push_str(&l.to_string());
                s.push(' ');
            }
            s.push_str("0\n");
        }
        s
    }

    /// The same function written as an expression tree (AND of ORs).
    pub fn to_expr(&self) -> Option<BoolExpr> {
        let lit_expr = |l: &Lit| {
            let v = BoolExpr::Var(l.var);
            if l.negated {
                BoolExpr::Not(Box::new(v))
            } else {
                v
            }
        };
        let mut terms: Vec<BoolExpr> = Vec::with_capacity(self.clauses.len());
        for c in &self.clauses {
            match c.lits.len() {
                // An empty clause has no expression form without constants.
                0 => return None,
                1 => terms.push(lit_expr(&c.lits[0])),
                _ => terms.push(BoolExpr::Or(c.lits.iter().map(lit_expr).collect())),
            }
        }
        match terms.len() {
            0 => None,
            1 => terms.pop(),
            _ => Some(BoolExpr::And(terms)),
        }
    }
}

fn normalize_clause(mut lits: Vec<Lit>, report: &mut NormalizeReport) -> Option<Clause> {
    let before = lits.len();
    lits.sort();
    lits.dedup();
    report.duplicate_literals += before - lits.len();
    // sorted by (var, negated), so complementary literals are adjacent
    if lits.windows(2).any(|w| w[0].var == w[1].var) {
        report.tautologies += 1;
        return None;
    }
    Some(Clause { lits })
}

/// Per-variable occurrence counts (the COPY degree of each variable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarProfile {
    occurrences: Vec<usize>,
}

impl VarProfile {
    /// Occurrence count of variable `var` (1-based).
    pub fn occurrences(&self, var: u32) -> usize {
        self.occurrences[var as usize - 1]
    }

    pub fn total(&self) -> usize {
        self.occurrences.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.occurrences
            .iter()
            .enumerate()
            .map(|(i, &k)| (i as u32 + 1, k))
    }

    /// Variables occurring in at least two places, ascending.
    pub fn shared_vars(&self) -> Vec<u32> {
        self.iter().filter(|&(_, k)| k >= 2).map(|(v, _)| v).collect()
    }

    pub fn absent_vars(&self) -> usize {
        self.occurrences.iter().filter(|&&k| k == 0).count()
    }
}

/// Non-fatal conditions noticed while reading DIMACS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimacsWarning {
    ClauseCountMismatch { declared: usize, found: usize },
    TautologiesDropped(usize),
    DuplicateLiteralsRemoved(usize),
    UnterminatedClause,
}

impl fmt::Display for DimacsWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimacsWarning::ClauseCountMismatch { declared, found } => {
                write!(f, "header declares {declared} clauses but {found} were read")
            }
            DimacsWarning::TautologiesDropped(n) => write!(f, "dropped {n} tautological clause(s)"),
            DimacsWarning::DuplicateLiteralsRemoved(n) => {
                write!(f, "removed {n} duplicate literal(s)")
            }
            DimacsWarning::UnterminatedClause => write!(f, "final clause not terminated by 0"),
        }
    }
}

/// A parsed DIMACS document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub formula: Formula,
    pub warnings: Vec<DimacsWarning>,
}

/// Parses a DIMACS CNF document.
///
/// Comment lines start with `c`; a `%` line ends the clause data (some
/// benchmark archives append one). Clauses may span lines.
pub fn parse_dimacs(text: &[u8]) -> Result<Dimacs, CnfError> {
    let text = String::from_utf8_lossy(text);
    let mut header: Option<(u32, usize)> = None;
    let mut raw: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::DuplicateHeader { line: lineno });
            }
            header = Some(parse_header(trimmed, lineno)?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(CnfError::MissingHeader { line: lineno });
        };
        for tok in trimmed.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| CnfError::NotAnInteger {
                line: lineno,
                token: tok.to_string(),
            })?;
            if v == 0 {
                raw.push(std::mem::take(&mut current));
            } else {
                if v.unsigned_abs() > num_vars as u64 {
                    return Err(CnfError::VarOutOfRange {
                        var: v.unsigned_abs(),
                        num_vars,
                    });
                }
                current.push(v);
            }
        }
    }

    let Some((num_vars, declared)) = header else {
        return Err(CnfError::MissingHeader {
            line: text.lines().count().max(1),
        });
    };
    let mut warnings = Vec::new();
    if !current.is_empty() {
        raw.push(current);
        warnings.push(DimacsWarning::UnterminatedClause);
    }
    if raw.len() != declared {
        warnings.push(DimacsWarning::ClauseCountMismatch {
            declared,
            found: raw.len(),
        });
    }
    let (formula, report) = Formula::with_report(num_vars, raw)?;
    if report.tautologies > 0 {
        warnings.push(DimacsWarning::TautologiesDropped(report.tautologies));
    }
    if report.duplicate_literals > 0 {
        warnings.push(DimacsWarning::DuplicateLiteralsRemoved(report.duplicate_literals));
    }
    Ok(Dimacs { formula, warnings })
}

fn parse_header(line: &str, lineno: usize) -> Result<(u32, usize), CnfError> {
    let bad = || CnfError::BadHeader {
        line: lineno,
        text: line.to_string(),
    };
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
        return Err(bad());
    }
    let n: u32 = parts[2].parse().map_err(|_| bad())?;
    let m: usize = parts[3].parse().map_err(|_| bad())?;
    Ok((n, m))
}

/// A Boolean expression over AND, OR (arity >= 2), NOT and variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Var(u32),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
}

impl BoolExpr {
    pub fn negation(e: BoolExpr) -> BoolExpr {
        BoolExpr::Not(Box::new(e))
    }

    /// Largest variable index occurring in the expression.
    pub fn num_vars(&self) -> u32 {
        let mut max = 0;
        self.visit_leaves(&mut |v| max = max.max(v));
        max
    }

    pub fn num_leaves(&self) -> usize {
        let mut n = 0;
        self.visit_leaves(&mut |_| n += 1);
        n
    }

    /// Number of AND/OR/NOT nodes.
    pub fn num_gates(&self) -> usize {
        match self {
            BoolExpr::Var(_) => 0,
            BoolExpr::Not(e) => 1 + e.num_gates(),
            BoolExpr::And(es) | BoolExpr::Or(es) => 1 + es.iter().map(|e| e.num_gates()).sum::<usize>(),
        }
    }

    /// Leaf variables in left-to-right order.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.visit_leaves(&mut |v| out.push(v));
        out
    }

    fn visit_leaves(&self, f: &mut impl FnMut(u32)) {
        match self {
            BoolExpr::Var(v) => f(*v),
            BoolExpr::Not(e) => e.visit_leaves(f),
            BoolExpr::And(es) | BoolExpr::Or(es) => es.iter().for_each(|e| e.visit_leaves(f)),
        }
    }

    /// True iff every variable occurs in exactly one leaf.
    pub fn is_read_once(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        let mut once = true;
        self.visit_leaves(&mut |v| once &= seen.insert(v));
        once
    }

    pub fn profile(&self) -> VarProfile {
        let mut occurrences = vec![0usize; self.num_vars() as usize];
        self.visit_leaves(&mut |v| occurrences[v as usize - 1] += 1);
        VarProfile { occurrences }
    }

    /// Checks arity and index constraints.
    pub fn is_well_formed(&self) -> bool {
        match self {
            BoolExpr::Var(v) => *v >= 1,
            BoolExpr::Not(e) => e.is_well_formed(),
            BoolExpr::And(es) | BoolExpr::Or(es) => es.len() >= 2 && es.iter().all(|e| e.is_well_formed()),
        }
    }

    pub fn eval(&self, assignment: &impl Fn(u32) -> bool) -> bool {
        match self {
            BoolExpr::Var(v) => assignment(*v),
            BoolExpr::Not(e) => !e.eval(assignment),
            BoolExpr::And(es) => es.iter().all(|e| e.eval(assignment)),
            BoolExpr::Or(es) => es.iter().any(|e| e.eval(assignment)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(_) => 0,
            BoolExpr::And(_) => 1,
            BoolExpr::Not(_) | BoolExpr::Var(_) => 2,
        }
    }

    fn fmt_child(&self, child: &BoolExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // same-operator children need parentheses too, so the parse keeps the tree shape
        if child.precedence() <= self.precedence() {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Var(v) => write!(f, "x{v}"),
            BoolExpr::Not(e) => {
                f.write_str("!")?;
                match **e {
                    BoolExpr::Var(_) | BoolExpr::Not(_) => write!(f, "{e}"),
                    _ => write!(f, "({e})"),
                }
            }
            BoolExpr::And(es) | BoolExpr::Or(es) => {
                let op = if matches!(self, BoolExpr::And(_)) { " & " } else { " | " };
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    self.fmt_child(e, f)?;
                }
                Ok(())
            }
        }
    }
}

/// Parses an expression over `x<digits>`, `!`, `&`, `|` and parentheses.
///
/// Precedence from tightest: `!`, `&`, `|`. Chains of the same binary
/// operator become one n-ary node; parentheses always start a new node.
pub fn parse_expression(text: &str) -> Result<BoolExpr, CnfError> {
    let mut p = ExprParser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(CnfError::EmptyExpression);
    }
    let e = p.parse_or()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> CnfError {
        CnfError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_or(&mut self) -> Result<BoolExpr, CnfError> {
        let mut terms = vec![self.parse_and()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            terms.push(self.parse_and()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            BoolExpr::Or(terms)
        })
    }

    fn parse_and(&mut self) -> Result<BoolExpr, CnfError> {
        let mut terms = vec![self.parse_unary()?];
        while self.peek() == Some(b'&') {
            self.pos += 1;
            terms.push(self.parse_unary()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            BoolExpr::And(terms)
        })
    }

    fn parse_unary(&mut self) -> Result<BoolExpr, CnfError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(BoolExpr::negation(self.parse_unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.parse_or()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected digits after `x`"));
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match digits.parse::<u32>() {
                    Ok(v) if v >= 1 => Ok(BoolExpr::Var(v)),
                    _ => {
                        self.pos = start;
                        Err(self.error("variable index must be in 1..=4294967295"))
                    }
                }
            }
            Some(_) => Err(self.error("expected a variable, `!` or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Seeded generator used by every instance generator in this crate.
///
/// ChaCha8 seeded with [`SeedableRng::seed_from_u64`]; the stream for a
/// given seed is stable across platforms.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random k-CNF: `m` clauses over `k` distinct variables with
/// independent uniform polarities.
pub fn generate_random_ksat(n: u32, m: usize, k: usize, seed: u64) -> Result<Formula, CnfError> {
    if k == 0 {
        return Err(CnfError::InvalidParams("clause width k must be at least 1".into()));
    }
    if k > n as usize {
        return Err(CnfError::WidthExceedsVars { k, n });
    }
    let mut rng = seeded_rng(seed);
    let clauses: Vec<Vec<i64>> = (0..m).map(|_| random_clause(&mut rng, n as usize, k, None)).collect();
    Formula::new(n, clauses)
}

fn random_clause(rng: &mut ChaCha8Rng, n: usize, k: usize, pool: Option<&[u32]>) -> Vec<i64> {
    sample(rng, pool.map_or(n, |p| p.len()), k)
        .into_iter()
        .map(|i| {
            let var = pool.map_or(i as u32 + 1, |p| p[i]) as i64;
            if rng.gen_bool(0.5) {
                -var
            } else {
                var
            }
        })
        .collect()
}

/// Random r,s-CNF: every clause has exactly `r` distinct variables and every
/// variable occurs in at most `s` clauses.
///
/// Clauses are placed greedily until fewer than `r` variables have spare
/// capacity, so the result is maximal for its capacity pattern.
pub fn generate_rs_sat(n: u32, r: usize, s: usize, seed: u64) -> Result<Formula, CnfError> {
    if r == 0 || s == 0 {
        return Err(CnfError::InvalidParams("r and s must be at least 1".into()));
    }
    if r > n as usize {
        return Err(CnfError::WidthExceedsVars { k: r, n });
    }
    let mut rng = seeded_rng(seed);
    let mut used = vec![0usize; n as usize];
    let mut clauses = Vec::new();
    loop {
        let open: Vec<u32> = (1..=n).filter(|&v| used[v as usize - 1] < s).collect();
        if open.len() < r {
            break;
        }
        let clause = random_clause(&mut rng, n as usize, r, Some(&open));
        for l in &clause {
            used[l.unsigned_abs() as usize - 1] += 1;
        }
        clauses.push(clause);
    }
    Formula::new(n, clauses)
}

/// Random read-once expression with `leaves` leaves over variables `1..=leaves`.
///
/// Internal nodes are AND/OR of arity 2 or 3; a NOT is inserted above a
/// subtree with probability 1/4, never directly above another NOT.
pub fn generate_read_once(leaves: usize, seed: u64) -> Result<BoolExpr, CnfError> {
    if leaves == 0 {
        return Err(CnfError::InvalidParams("need at least one leaf".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut vars: Vec<u32> = (1..=leaves as u32).collect();
    // Fisher-Yates via rand's shuffle
    rand::seq::SliceRandom::shuffle(vars.as_mut_slice(), &mut rng);
    Ok(build_read_once(&vars, &mut rng))
}

fn build_read_once(vars: &[u32], rng: &mut ChaCha8Rng) -> BoolExpr {
    let node = if vars.len() == 1 {
        BoolExpr::Var(vars[0])
    } else {
        let arity = rng.gen_range(2..=vars.len().min(3));
        // choose arity-1 distinct cut points in 1..len
        let mut cuts: Vec<usize> = sample(rng, vars.len() - 1, arity - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort_unstable();
        let mut children = Vec::with_capacity(arity);
        let mut start = 0;
        for cut in cuts.into_iter().chain(std::iter::once(vars.len())) {
            children.push(build_read_once(&vars[start..cut], rng));
            start = cut;
        }
        if rng.gen_bool(0.5) {
            BoolExpr::And(children)
        } else {
            BoolExpr::Or(children)
        }
    };
    if rng.gen_bool(0.25) {
        BoolExpr::negation(node)
    } else {
        node
    }
}
