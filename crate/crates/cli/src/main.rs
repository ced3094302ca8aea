//! `ordproof`: ordinal queries, proof checking, embedding and reduction.
//!
//! Exit codes: 0 ok or witness, 1 diagnostics, 2 parse error, 3 undecidable,
//! 4 stuck, 5 step limit.

use clap::{Args, Parser, Subcommand};
use ordproof_core::calculus::{parse_script, print_script, validate, Context, Node, Proof, Rule, Script};
use ordproof_core::language::{parse_formula, Formula, ObjTerm};
use ordproof_core::ordinals::{compare, gset, nprod, nsum, parse_ord, region, OrdTerm, Region};
use ordproof_core::reducer::{run, Limits, Outcome};
use ordproof_core::transforms::{embed, parse_skeleton};
use ordproof_core::Error;
use std::cmp::Ordering;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ordproof", version, about = "Ordinal notation, proofs with stock and witness extraction")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Config {
    /// Quantifier instances and mu candidates examined per evaluation.
    #[arg(long, global = true, default_value_t = 10_000)]
    fuel: u64,
    /// Extra candidate witnesses, comma separated ordinal terms.
    #[arg(long, global = true, value_delimiter = ',')]
    pool: Vec<String>,
    #[arg(long, global = true, default_value_t = 10_000)]
    max_steps: usize,
    /// Write a JSON-lines reduction trace here.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Stop when a formula cannot be decided (the default).
    #[arg(long, global = true, overrides_with = "no_strict")]
    strict: bool,
    #[arg(long, global = true, overrides_with = "strict")]
    no_strict: bool,
    /// File of extra axioms, one formula per line.
    #[arg(long, global = true)]
    axioms: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ordinal term queries.
    Ord {
        #[command(subcommand)]
        op: OrdOp,
    },
    /// Validate a proof script; prints o(P) when clean.
    Check { file: PathBuf },
    /// Build the initial proof with stock for a skeleton.
    Embed {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduce a proof until a true end formula appears.
    Reduce { file: PathBuf },
}

#[derive(Subcommand)]
enum OrdOp {
    Cmp { a: String, b: String },
    Nsum { a: String, b: String },
    Nprod { a: String, b: String },
    /// The finite set G_a(b).
    G { a: String, b: String },
    Region { a: String },
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 2,
            Error::Undecidable(_) => 3,
            Error::Stuck(_) => 4,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

impl Config {
    fn context(&self, defs: Context) -> Result<Context, Failure> {
        let mut ctx = defs;
        ctx.budget.fuel = self.fuel;
        for t in &self.pool {
            ctx.budget.pool.push(parse_ord(t)?);
        }
        if let Some(path) = &self.axioms {
            for line in read(path)?.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with(';')) {
                ctx.axioms.push(parse_formula(line)?);
            }
        }
        Ok(ctx)
    }

    fn limits(&self) -> Limits {
        Limits { max_steps: self.max_steps, strict: !self.no_strict }
    }
}

fn cmd_ord(op: &OrdOp) -> Result<String, Failure> {
    let two = |a: &str, b: &str| -> Result<(OrdTerm, OrdTerm), Failure> { Ok((parse_ord(a)?, parse_ord(b)?)) };
    Ok(match op {
        OrdOp::Cmp { a, b } => {
            let (a, b) = two(a, b)?;
            match compare(&a, &b)? {
                Ordering::Less => "LT",
                Ordering::Equal => "EQ",
                Ordering::Greater => "GT",
            }
            .to_string()
        }
        OrdOp::Nsum { a, b } => {
            let (a, b) = two(a, b)?;
            nsum(&a, &b).to_string()
        }
        OrdOp::Nprod { a, b } => {
            let (a, b) = two(a, b)?;
            nprod(&a, &b)?.to_string()
        }
        OrdOp::G { a, b } => {
            let (a, b) = two(a, b)?;
            let set: Vec<String> = gset(&a, &b)?.iter().map(|t| t.to_string()).collect();
            format!("{{{}}}", set.join(", "))
        }
        OrdOp::Region { a } => match region(&parse_ord(a)?)? {
            Region::Finite(n) => format!("finite {n}"),
            Region::Countable => "countable".into(),
            Region::EqOmega1 => "w1".into(),
            Region::Middle => "between w1 and r0".into(),
            Region::EqRho0 => "r0".into(),
            Region::Above => "above r0".into(),
        },
    })
}

fn load(path: &Path, cfg: &Config) -> Result<(Script, Context), Failure> {
    let script = parse_script(&read(path)?)?;
    let ctx = cfg.context(Context::from_script(&script))?;
    Ok((script, ctx))
}

/// Prints diagnostics and fails unless the proof is a proof with stock.
fn checked(p: &Proof, ctx: &Context) -> Result<OrdTerm, Failure> {
    let rep = validate(p, ctx);
    for d in &rep.diagnostics {
        eprintln!("{d}");
    }
    match (rep.diagnostics.is_empty(), rep.annotation) {
        (true, Some(ann)) => Ok(ann.o_proof().clone()),
        _ => Err(fail(1, format!("{} diagnostics", rep.diagnostics.len()))),
    }
}

fn cmd_check(path: &Path, cfg: &Config) -> Result<String, Failure> {
    let (script, ctx) = load(path, cfg)?;
    Ok(checked(&script.proof, &ctx)?.to_string())
}

fn h_count(mut n: &Node) -> usize {
    let mut k = 0;
    while n.rule == Rule::H && !n.prems.is_empty() {
        k += 1;
        n = &n.prems[0];
    }
    k
}

fn cmd_embed(path: &Path, out: Option<&Path>) -> Result<String, Failure> {
    let sk = parse_skeleton(&read(path)?)?;
    let (p, _) = embed(&sk)?;
    let k = h_count(&p.root.prems[0]);
    let text = format!("; k = {k}\n{}", print_script(&Script { proof: p, defs: sk.defs, axioms: sk.axioms }));
    match out {
        Some(o) => {
            fs::write(o, &text).map_err(|e| fail(1, format!("{}: {e}", o.display())))?;
            Ok(format!("wrote {}", o.display()))
        }
        None => Ok(text.trim_end().to_string()),
    }
}

/// `x=n` for each leading existential of the original formula the witness
/// terms instantiate.
fn describe(orig: &[Formula], terms: &[ObjTerm], formula: &Formula, ctx: &Context, p: &Proof) -> String {
    let ev = ctx.evaluator(p);
    let show = |t: &ObjTerm| match ev.eval_term(t) {
        Ok(o) => o.as_nat().map(|n| n.to_string()).unwrap_or_else(|| o.to_string()),
        Err(_) => t.to_string(),
    };
    for f in orig {
        let mut vars = Vec::new();
        let mut g = f;
        while let Formula::Ex(x, b) = g {
            vars.push(x.clone());
            g = b;
        }
        if !terms.is_empty() && terms.len() <= vars.len() {
            let parts: Vec<String> = vars.iter().zip(terms).map(|(x, t)| format!("{x}={}", show(t))).collect();
            return parts.join(" ");
        }
    }
    formula.to_string()
}

fn cmd_reduce(path: &Path, cfg: &Config) -> Result<String, Failure> {
    let (script, ctx) = load(path, cfg)?;
    checked(&script.proof, &ctx)?;
    let r = run(&script.proof, &ctx, &cfg.limits())?;
    if let Some(tp) = &cfg.trace {
        let mut out = String::new();
        for (i, st) in r.trace.iter().enumerate() {
            out.push_str(&serde_json::to_string(&st.record(i + 1)).map_err(|e| fail(1, e.to_string()))?);
            out.push('\n');
        }
        fs::write(tp, out).map_err(|e| fail(1, format!("{}: {e}", tp.display())))?;
    }
    let mut lines: Vec<String> = r.trace.iter().enumerate().map(|(i, st)| format!("{}\t{}\t{}", i + 1, st.case.as_str(), st.o_after)).collect();
    match &r.outcome {
        Outcome::Witness { formula, terms } => {
            lines.push(format!("WITNESS {}", describe(script.proof.end_sequent(), terms, formula, &ctx, &r.proof)));
            Ok(lines.join("\n"))
        }
        Outcome::StepLimit => {
            print_lines(&lines);
            Err(fail(5, format!("step limit {} reached", cfg.max_steps)))
        }
        Outcome::Stuck(m) => {
            print_lines(&lines);
            Err(fail(4, format!("stuck: {m}")))
        }
    }
}

fn print_lines(lines: &[String]) {
    let mut so = std::io::stdout().lock();
    for l in lines {
        let _ = writeln!(so, "{l}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = &cli.config;
    let res = match &cli.cmd {
        Cmd::Ord { op } => cmd_ord(op),
        Cmd::Check { file } => cmd_check(file, cfg),
        Cmd::Embed { file, output } => cmd_embed(file, output.as_deref()),
        Cmd::Reduce { file } => cmd_reduce(file, cfg),
    };
    match res {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
