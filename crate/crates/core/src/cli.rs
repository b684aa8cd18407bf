//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 a size guard was hit
//! (branch limit, brute-force limit, dense-state limit), 3 an internal
//! invariant failed.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cnf::{generate_random_ksat, generate_read_once, generate_rs_sat, parse_dimacs, CnfError, Dimacs};
use crate::counter::{count_models, is_satisfiable, predicted_cost, CountError, CountOptions, DEFAULT_MAX_BRANCH_VARS};
use crate::network::{build_boolean_network, NetworkStats};
use crate::oracle::brute_force_count;
use crate::state::{dense_state, partition_trace, renyi_entropy, Bipartition, EntropyResult, StateError};

#[derive(Debug, Parser)]
#[command(name = "tncount", version, about = "Exact model counting by tensor-network contraction")]
pub struct Cli {
    /// Print a one-line JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for branch evaluation (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Refuse to branch on more COPY tensors than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_BRANCH_VARS)]
    pub max_branch_vars: usize,
    /// Ignore --max-branch-vars.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count models of a DIMACS CNF file.
    Count { path: Option<PathBuf> },
    /// Decide satisfiability.
    Solve { path: Option<PathBuf> },
    /// Network statistics and predicted cost, without branching.
    Stats {
        path: Option<PathBuf>,
        /// Also print the network as an adjacency list.
        #[arg(long)]
        dump: bool,
    },
    /// Brute-force count (at most 24 variables).
    Oracle { path: Option<PathBuf> },
    /// Rényi entropy of the Boolean state across a bipartition.
    Entropy {
        path: Option<PathBuf>,
        /// Comma-separated variables traced out, e.g. `1,3`.
        #[arg(long)]
        bipartition: String,
        /// Rényi order; 1 selects the von Neumann entropy.
        #[arg(long, default_value_t = 2.0)]
        q: f64,
    },
    /// Trace of exp(-beta H) for the non-satisfying projector H.
    Physics {
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 50.0)]
        beta: f64,
    },
    /// Generate an instance.
    Gen {
        #[arg(long, value_enum)]
        mode: GenMode,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        leaves: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenMode {
    Ksat,
    Rssat,
    Rof,
}

/// Report printed by every analysis command. All fields are always
/// present; those that do not apply to a command are `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input: String,
    pub n: u32,
    pub m: usize,
    pub g: usize,
    pub c: usize,
    pub d: usize,
    pub model_count: Option<String>,
    pub satisfiable: Option<bool>,
    pub branches_evaluated: Option<String>,
    pub predicted_cost: String,
    pub bipartition: Option<Vec<u32>>,
    pub q: Option<f64>,
    pub entropy: Option<f64>,
    pub entropy_defined: Option<bool>,
    pub beta: Option<f64>,
    pub partition_trace: Option<f64>,
    pub elapsed_ms: f64,
    pub warnings: Vec<String>,
}

impl RunReport {
    fn new(command: &str, input: String, stats: &NetworkStats, warnings: Vec<String>) -> Self {
        RunReport {
            command: command.to_string(),
            input,
            n: stats.n,
            m: stats.m,
            g: stats.g,
            c: stats.c,
            d: stats.d,
            model_count: None,
            satisfiable: None,
            branches_evaluated: None,
            predicted_cost: predicted_cost(stats).to_string(),
            bipartition: None,
            q: None,
            entropy: None,
            entropy_defined: None,
            beta: None,
            partition_trace: None,
            elapsed_ms: 0.0,
            warnings,
        }
    }

    fn to_text(&self) -> String {
        let mut lines = vec![
            format!("input: {}", self.input),
            format!("variables: {}  clauses: {}", self.n, self.m),
            format!("gates: {}  copy tensors: {}  max copy degree: {}", self.g, self.c, self.d),
            format!("predicted cost: {}", self.predicted_cost),
        ];
        if let Some(v) = &self.model_count {
            lines.push(format!("model count: {v}"));
        }
        if let Some(v) = self.satisfiable {
            lines.push(format!("satisfiable: {v}"));
        }
        if let Some(v) = &self.branches_evaluated {
            lines.push(format!("branches evaluated: {v}"));
        }
        if let Some(q) = self.q {
            let h = self.entropy.map_or("undefined".to_string(), |h| format!("{h:.12}"));
            lines.push(format!("entropy (q = {q}): {h}"));
        }
        if let (Some(b), Some(t)) = (self.beta, self.partition_trace) {
            lines.push(format!("Tr exp(-{b} H): {t:.12}"));
        }
        lines.push(format!("elapsed: {:.3} ms", self.elapsed_ms));
        for w in &self.warnings {
            lines.push(format!("warning: {w}"));
        }
        lines.join("\n")
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Guard(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Guard(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Guard(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<CnfError> for CliError {
    fn from(e: CnfError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::BranchGuard { .. } => CliError::Guard(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::TooManyVars { .. } => CliError::Guard(e.to_string()),
            StateError::Network(_) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 3;
        }
    };
    // stdin is read up front so the work can move to the pool
    let mut piped = Vec::new();
    if reads_stdin(&cli.command) {
        if let Err(e) = stdin.read_to_end(&mut piped) {
            let _ = writeln!(err, "error: <stdin>: {e}");
            return 1;
        }
    }
    match pool.install(|| execute(&cli, &piped)) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn reads_stdin(cmd: &Command) -> bool {
    let path = match cmd {
        Command::Gen { .. } => return false,
        Command::Count { path }
        | Command::Solve { path }
        | Command::Stats { path, .. }
        | Command::Oracle { path }
        | Command::Entropy { path, .. }
        | Command::Physics { path, .. } => path,
    };
    path.as_ref().is_none_or(|p| p.as_os_str() == "-")
}

fn read_input(path: &Option<PathBuf>, piped: &[u8]) -> Result<(String, Dimacs), CliError> {
    let (name, bytes) = match path {
        Some(p) if p.as_os_str() != "-" => {
            let bytes = std::fs::read(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            (p.display().to_string(), bytes)
        }
        _ => ("<stdin>".to_string(), piped.to_vec()),
    };
    Ok((name, parse_dimacs(&bytes)?))
}

fn execute(cli: &Cli, stdin: &[u8]) -> Result<String, CliError> {
    let opts = CountOptions {
        max_branch_vars: cli.max_branch_vars,
        force: cli.force,
        ..CountOptions::default()
    };
    let start = Instant::now();
    let (name, report) = match &cli.command {
        Command::Gen {
            mode,
            n,
            m,
            k,
            r,
            s,
            leaves,
            seed,
        } => return generate(*mode, *n, *m, *k, *r, *s, *leaves, *seed),
        Command::Count { path } => {
            let (name, dimacs) = read_input(path, stdin)?;
            let res = count_models(&dimacs.formula, &opts)?;
            if res.satisfiable != (res.model_count > num_bigint::BigUint::ZERO)
                || res.branches_evaluated != res.stats.branch_bound
            {
                return Err(CliError::Internal("count result failed its own consistency check".into()));
            }
            let mut rep = RunReport::new("count", name.clone(), &res.stats, warnings(&dimacs));
            rep.model_count = Some(res.model_count.to_string());
            rep.satisfiable = Some(res.satisfiable);
            rep.branches_evaluated = Some(res.branches_evaluated.to_string());
            (name, rep)
        }
        Command::Solve { path } => {
            let (name, dimacs) = read_input(path, stdin)?;
            let sat = is_satisfiable(&dimacs.formula, &opts)?;
            let stats = build_boolean_network(&dimacs.formula).stats();
            let mut rep = RunReport::new("solve", name.clone(), &stats, warnings(&dimacs));
            rep.satisfiable = Some(sat);
            (name, rep)
        }
        Command::Stats { path, dump } => {
            let (name, dimacs) = read_input(path, stdin)?;
            let net = build_boolean_network(&dimacs.formula);
            let rep = RunReport::new("stats", name.clone(), &net.stats(), warnings(&dimacs));
            if *dump && !cli.json {
                return Ok(format!("{}\n{}", rep.to_text(), net.dump().trim_end()));
            }
            (name, rep)
        }
        Command::Oracle { path } => {
            let (name, dimacs) = read_input(path, stdin)?;
            let count = brute_force_count(&dimacs.formula).map_err(|e| CliError::Guard(e.to_string()))?;
            let stats = build_boolean_network(&dimacs.formula).stats();
            let mut rep = RunReport::new("oracle", name.clone(), &stats, warnings(&dimacs));
            rep.satisfiable = Some(count > num_bigint::BigUint::ZERO);
            rep.model_count = Some(count.to_string());
            (name, rep)
        }
        Command::Entropy { path, bipartition, q } => {
            let (name, dimacs) = read_input(path, stdin)?;
            let f = &dimacs.formula;
            let psi = dense_state(f)?;
            let traced = parse_var_list(bipartition)?;
            let part = Bipartition::from_vars(f.num_vars(), &traced)?;
            let h = renyi_entropy(&psi, &part, *q)?;
            let stats = build_boolean_network(f).stats();
            let mut rep = RunReport::new("entropy", name.clone(), &stats, warnings(&dimacs));
            rep.model_count = Some(format!("{}", psi.norm_squared() as u64));
            rep.satisfiable = Some(!psi.is_zero());
            rep.bipartition = Some(part.traced_vars());
            rep.q = Some(*q);
            rep.entropy = h.value();
            rep.entropy_defined = Some(matches!(h, EntropyResult::Value(_)));
            (name, rep)
        }
        Command::Physics { path, beta } => {
            let (name, dimacs) = read_input(path, stdin)?;
            let f = &dimacs.formula;
            let trace = partition_trace(f, *beta)?;
            let res = count_models(f, &opts)?;
            let mut rep = RunReport::new("physics", name.clone(), &res.stats, warnings(&dimacs));
            rep.model_count = Some(res.model_count.to_string());
            rep.satisfiable = Some(res.satisfiable);
            rep.branches_evaluated = Some(res.branches_evaluated.to_string());
            rep.beta = Some(*beta);
            rep.partition_trace = Some(trace);
            (name, rep)
        }
    };
    let _ = name;
    let mut report = report;
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if cli.json {
        serde_json::to_string(&report).map_err(|e| CliError::Internal(e.to_string()))
    } else {
        Ok(report.to_text())
    }
}

fn warnings(d: &Dimacs) -> Vec<String> {
    d.warnings.iter().map(|w| w.to_string()).collect()
}

fn parse_var_list(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.trim_start_matches('x')
                .parse::<u32>()
                .map_err(|_| CliError::Input(format!("bad variable `{t}` in --bipartition")))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn generate(
    mode: GenMode,
    n: Option<u32>,
    m: Option<usize>,
    k: Option<usize>,
    r: Option<usize>,
    s: Option<usize>,
    leaves: Option<usize>,
    seed: u64,
) -> Result<String, CliError> {
    fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Input(format!("--{flag} is required for this mode")))
    }
    let text = match mode {
        GenMode::Ksat => {
            generate_random_ksat(need(n, "n")?, need(m, "m")?, need(k, "k")?, seed)?.to_dimacs()
        }
        GenMode::Rssat => generate_rs_sat(need(n, "n")?, need(r, "r")?, need(s, "s")?, seed)?.to_dimacs(),
        GenMode::Rof => generate_read_once(need(leaves, "leaves")?, seed)?.to_string(),
    };
    Ok(text.trim_end().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_with(args: &[&str], input: &str) -> (i32, String, String) {
        let mut stdin = input.as_bytes();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["tncount"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut stdin, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn json(out: &str) -> serde_json::Value {
        serde_json::from_str(out.trim()).unwrap()
    }

    #[test]
    fn count_json() {
        let (code, out, _) = run_with(&["count", "--json"], "p cnf 2 1\n1 2 0\n");
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1);
        let v = json(&out);
        assert_eq!(v["model_count"], "3");
        assert_eq!(v["satisfiable"], true);
        assert_eq!(v["branches_evaluated"], "1");
        assert_eq!(v["predicted_cost"], "1");
    }

    #[test]
    fn count_unsat() {
        let (code, out, _) = run_with(&["--json", "count"], "p cnf 1 2\n1 0\n-1 0\n");
        assert_eq!(code, 0);
        assert_eq!(json(&out)["model_count"], "0");
    }

    #[test]
    fn guard_exit_code() {
        // 40 shared variables, each in two clauses
        let mut text = String::from("p cnf 40 40\n");
        for v in 1..=40 {
            text.push_str(&format!("{v} {} 0\n", v % 40 + 1));
        }
        let (code, _, err) = run_with(&["count"], &text);
        assert_eq!(code, 2);
        assert!(err.contains("--force") && err.contains("--max-branch-vars"));
        let (code, _, _) = run_with(&["solve"], &text);
        assert_eq!(code, 2);
        let (code, out, _) = run_with(&["stats", "--json"], &text);
        assert_eq!(code, 0);
        assert_eq!(json(&out)["c"], 40);
    }

    #[test]
    fn parse_errors_exit_one() {
        assert_eq!(run_with(&["count"], "p cnf 1 1\n2 0\n").0, 1);
        assert_eq!(run_with(&["count", "--bogus"], "").0, 1);
        assert_eq!(run_with(&["count", "/nonexistent/file.cnf"], "").0, 1);
        assert_eq!(run_with(&[], "").0, 1);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_with(&["--help"], "");
        assert_eq!(code, 0);
        assert!(out.contains("count"));
    }

    #[test]
    fn stats_and_dump() {
        let (code, out, _) = run_with(&["stats", "--json"], "p cnf 3 2\n1 2 0\n-1 3 0\n");
        assert_eq!(code, 0);
        let v = json(&out);
        assert_eq!((v["g"].as_u64(), v["c"].as_u64(), v["d"].as_u64()), (Some(2), Some(1), Some(2)));
        assert_eq!(v["predicted_cost"], "8");
        assert!(v["model_count"].is_null());

        let (_, out, _) = run_with(&["stats", "--dump"], "p cnf 1 1\n1 0\n");
        assert!(out.contains("0\tvar(x1)\t1\t1"));
    }

    #[test]
    fn oracle_and_solve() {
        let input = "p cnf 3 2\n1 2 0\n-1 3 0\n";
        let (_, out, _) = run_with(&["oracle", "--json"], input);
        assert_eq!(json(&out)["model_count"], "4");
        let (_, out, _) = run_with(&["solve", "--json"], input);
        assert_eq!(json(&out)["satisfiable"], true);
        assert!(json(&out)["model_count"].is_null());
        let (code, _, _) = run_with(&["oracle"], "p cnf 25 1\n1 0\n");
        assert_eq!(code, 2);
    }

    #[test]
    fn entropy_and_physics() {
        let input = "p cnf 2 2\n1 -2 0\n-1 2 0\n";
        let (code, out, _) = run_with(&["entropy", "--json", "--bipartition", "1", "--q", "2"], input);
        assert_eq!(code, 0);
        let v = json(&out);
        assert!((v["entropy"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-9);
        assert_eq!(v["entropy_defined"], true);

        let (_, out, _) = run_with(&["entropy", "--json", "--bipartition", "1"], "p cnf 2 2\n1 0\n-1 0\n");
        let v = json(&out);
        assert!(v["entropy"].is_null());
        assert_eq!(v["entropy_defined"], false);

        let (code, _, _) = run_with(&["entropy", "--bipartition", "1,2"], input);
        assert_eq!(code, 1);

        let (_, out, _) = run_with(&["physics", "--json", "--beta", "50"], "p cnf 1 1\n1 0\n");
        let v = json(&out);
        assert!((v["partition_trace"].as_f64().unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(v["model_count"], "1");
    }

    #[test]
    fn gen_modes() {
        let (code, out, _) = run_with(&["gen", "--mode", "ksat", "--n", "5", "--m", "0", "--k", "3", "--seed", "1"], "");
        assert_eq!(code, 0);
        assert_eq!(out, "p cnf 5 0\n");
        let (code, _, _) = run_with(&["gen", "--mode", "ksat", "--n", "2", "--m", "1", "--k", "3"], "");
        assert_eq!(code, 1);
        let (code, out, _) = run_with(&["gen", "--mode", "rssat", "--n", "6", "--r", "3", "--s", "1", "--seed", "1"], "");
        assert_eq!(code, 0);
        assert!(out.starts_with("p cnf 6 2\n"));
        let (code, out, _) = run_with(&["gen", "--mode", "rof", "--leaves", "5", "--seed", "3"], "");
        assert_eq!(code, 0);
        assert!(crate::cnf::parse_expression(out.trim()).unwrap().is_read_once());
        assert_eq!(run_with(&["gen", "--mode", "rof"], "").0, 1);
    }
}
