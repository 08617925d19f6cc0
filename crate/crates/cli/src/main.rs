//! `qhm`: command-line front end to the classifier.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qhm_core::bimodule::{self, GeometrySpec};
use qhm_core::cf2::cf_expand;
use qhm_core::classify::{
    alg_json, check_witness, decide_equivalence, decision_to_json, normalize_rank2, reduce_dif, Budget, QhmParams,
    TraceStep, Verdict,
};
use qhm_core::exactnum::{parse_algebraic, AlgebraicReal};
use qhm_core::lattice::trace_group;

const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_WITNESS: u8 = 4;

#[derive(Parser)]
#[command(name = "qhm", version, about = "Morita equivalence of quantum Heisenberg manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank and Hermite basis of G = Z + 2mu Z + 2nu Z.
    Rank {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long)]
        json: bool,
    },
    /// Continued fraction expansion.
    Cf {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 64)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
    /// Decide Morita equivalence of two parameter sets.
    Equiv(EquivArgs),
    /// Move a rank-2 pair to the form (p/(2q), nu').
    Normalize {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long)]
        json: bool,
    },
    /// Reduce (p/(2q), nu) to (0, q nu); irrational mu is normalized first.
    Reduce {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long)]
        json: bool,
    },
    /// Residual report for the bimodule identities.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, allow_hyphen_values = true)]
        nu: f64,
        #[arg(long)]
        c: i64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-verify a saved witness.
    WitnessCheck {
        #[arg(long)]
        file: String,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    c: u64,
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    #[arg(long, allow_hyphen_values = true)]
    nu: String,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long)]
    c: u64,
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    #[arg(long, allow_hyphen_values = true)]
    nu: String,
    #[arg(long)]
    c2: u64,
    #[arg(long, allow_hyphen_values = true)]
    mu2: String,
    #[arg(long, allow_hyphen_values = true)]
    nu2: String,
    /// Height bound for the rank-3 scaling search.
    #[arg(long, default_value_t = 50)]
    budget: i64,
    #[arg(long, default_value_t = 64)]
    cf_terms: usize,
    #[arg(long, default_value_t = 8)]
    orbit_bound: i64,
    #[arg(long)]
    json: bool,
    /// Also write the JSON witness to this file.
    #[arg(long)]
    out: Option<String>,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(EXIT_USAGE)
}

fn params(c: u64, mu: &str, nu: &str) -> Result<QhmParams, String> {
    QhmParams::parse(c, mu, nu).map_err(|e| e.to_string())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn show(a: &AlgebraicReal) -> String {
    if a.is_rational() {
        a.to_string()
    } else {
        format!("{} ~ {}", a, a.to_decimal(12))
    }
}

fn print_trace(trace: &[TraceStep]) {
    for s in trace {
        println!("  {:<24} {}", s.rule, s.data);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Rank { mu, nu, json } => {
            let (mu, nu) = match (parse_algebraic(&mu), parse_algebraic(&nu)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return usage(e),
            };
            let g = match trace_group(&mu, &nu) {
                Ok(g) => g,
                Err(e) => return usage(e),
            };
            let ctx = g.context();
            let basis: Vec<AlgebraicReal> = g.lattice.basis_coords().iter().map(|v| ctx.to_algebraic(v)).collect();
            if json {
                print_json(&json!({
                    "rank": g.rank(),
                    "basis": basis.iter().map(alg_json).collect::<Vec<_>>(),
                }));
            } else {
                println!("{}", g.rank());
                for b in &basis {
                    println!("  {}", show(b));
                }
            }
            ExitCode::SUCCESS
        }
        Command::Cf { x, terms, json } => {
            let x = match parse_algebraic(&x) {
                Ok(x) => x,
                Err(e) => return usage(e),
            };
            let e = cf_expand(&x, terms);
            if json {
                print_json(&e.to_json());
            } else {
                println!("{}", e.render());
            }
            ExitCode::SUCCESS
        }
        Command::Equiv(a) => {
            let (p, p2) = match (params(a.c, &a.mu, &a.nu), params(a.c2, &a.mu2, &a.nu2)) {
                (Ok(p), Ok(p2)) => (p, p2),
                (Err(e), _) | (_, Err(e)) => return usage(e),
            };
            let budget = Budget {
                cf_terms: a.cf_terms,
                orbit_bound: a.orbit_bound,
                height_bound: a.budget,
                ..Budget::default()
            };
            let d = decide_equivalence(&p, &p2, &budget);
            let j = decision_to_json(&d);
            if let Some(path) = &a.out {
                if let Err(e) = fs::write(path, serde_json::to_string_pretty(&j).unwrap() + "\n") {
                    return usage(format!("cannot write {}: {}", path, e));
                }
            }
            if a.json {
                print_json(&j);
            } else {
                println!("verdict: {}", d.verdict.kind());
                if let Some(r) = d.rank() {
                    println!("rank: {}", r);
                }
                match &d.verdict {
                    Verdict::Equivalent { r, gl3, gl2, .. } => {
                        println!("{}", j["label"].as_str().unwrap_or_default());
                        println!("r: {}", show(r));
                        if let Some(m) = gl3 {
                            println!("gl3: {}", m);
                        }
                        if let Some(w) = gl2 {
                            println!("gl2: {} sends {} to {}", w.matrix, show(&w.x), show(&w.y));
                        }
                    }
                    Verdict::NotEquivalent(c) => println!("certificate: {} {}", c.kind(), c.values()),
                    Verdict::Unknown { reason } => println!("reason: {}", reason),
                }
                if !d.trace.is_empty() {
                    println!("trace:");
                    print_trace(&d.trace);
                }
                for msg in &d.diagnostics {
                    println!("diagnostic: {}", msg);
                }
            }
            if matches!(d.verdict, Verdict::Unknown { .. }) {
                ExitCode::from(EXIT_UNKNOWN)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Normalize { p, json } => {
            let p = match params(p.c, &p.mu, &p.nu) {
                Ok(p) => p,
                Err(e) => return usage(e),
            };
            let n = match normalize_rank2(&p) {
                Ok(n) => n,
                Err(e) => return usage(e),
            };
            if json {
                print_json(&json!({
                    "mu": alg_json(&n.params.mu),
                    "nu": alg_json(&n.params.nu),
                    "p": n.p.to_string(),
                    "q": n.q.to_string(),
                    "matrix": n.matrix.to_strings(),
                    "trace": n.trace.iter().map(|s| json!({ "rule": s.rule, "data": s.data })).collect::<Vec<_>>(),
                }));
            } else {
                println!("mu: {}", show(&n.params.mu));
                println!("nu: {}", show(&n.params.nu));
                println!("matrix: {}", n.matrix);
                println!("trace:");
                print_trace(&n.trace);
            }
            ExitCode::SUCCESS
        }
        Command::Reduce { p, json } => {
            let p = match params(p.c, &p.mu, &p.nu) {
                Ok(p) => p,
                Err(e) => return usage(e),
            };
            let mut trace = Vec::new();
            let start = if p.mu.is_rational() {
                p
            } else {
                match normalize_rank2(&p) {
                    Ok(n) => {
                        trace.extend(n.trace);
                        n.params
                    }
                    Err(e) => return usage(e),
                }
            };
            let r = match reduce_dif(&start) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            trace.extend(r.trace);
            if json {
                print_json(&json!({
                    "mu": alg_json(&r.params.mu),
                    "nu": alg_json(&r.params.nu),
                    "chain": r.chain.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "flips": r.flips,
                    "trace": trace.iter().map(|s| json!({ "rule": s.rule, "data": s.data })).collect::<Vec<_>>(),
                }));
            } else {
                println!("mu: {}", show(&r.params.mu));
                println!("nu: {}", show(&r.params.nu));
                let chain: Vec<String> = r.chain.iter().map(|x| x.to_string()).collect();
                println!("chain: ({})", chain.join(", "));
                println!("flips: {}", r.flips);
                println!("trace:");
                print_trace(&trace);
            }
            ExitCode::SUCCESS
        }
        Command::Verify { mu, nu, c, samples, seed } => {
            let spec = match GeometrySpec::new(mu, nu, c) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            if samples == 0 {
                return usage("samples must be positive");
            }
            let (reports, diagnostics) = bimodule::verify_all(&spec, samples, seed);
            let ok = reports.iter().all(|r| r.passed());
            print_json(&json!({
                "reports": reports,
                "diagnostics": diagnostics,
                "tolerance": bimodule::TOLERANCE,
                "passed": ok,
            }));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::WitnessCheck { file } => {
            let text = match fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return usage(format!("cannot read {}: {}", file, e)),
            };
            let w: Value = match serde_json::from_str(&text) {
                Ok(w) => w,
                Err(e) => return usage(format!("invalid JSON: {}", e)),
            };
            match check_witness(&w) {
                Ok(passed) => {
                    for p in passed {
                        println!("ok: {}", p);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    println!("FAILED: {}", e);
                    ExitCode::from(EXIT_WITNESS)
                }
            }
        }
    }
}
