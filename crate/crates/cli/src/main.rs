//! `nrc`: evaluate, check, translate and compile query expressions.
//!
//! Structured results go to stdout as JSON (or as s-expressions for the
//! translation commands); diagnostics go to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use nrc_core::decide::{self, Config, DecideError, Verdict};
use nrc_core::nrc::eval_penrc;
use nrc_core::rx::{eval_pure_rx, eval_rx, oracles_by_name};
use nrc_core::syntax::parse::{parse_gamma, parse_nrc_type, parse_pure_type};
use nrc_core::syntax::print::{pretty_nrc, pretty_xq, print_deps, print_gamma, print_ra_program};
use nrc_core::syntax::{parse, Ast, Lang, Spans};
use nrc_core::translate::deps::build_fd_id_reduction;
use nrc_core::translate::ra::compile_ra;
use nrc_core::translate::{translate_expr, translate_type};
use nrc_core::types::{NrcType, PureRxType, TypeAssignment};
use nrc_core::{Environment, JsonForm, NrcValue, PureRxValue, Reason, RxValue, Undefined};

const EXIT_USAGE: u8 = 1;
const EXIT_UNDEFINED: u8 = 3;
const EXIT_FAILS: u8 = 4;
const EXIT_BUDGET: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "nrc", version, about = "Evaluators, translations and decision procedures for RX and PENRC[kind]")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input language: rx, pure-rx, penrc, ra or deps. Inferred from the
    /// file extension (.rx .prx .nrc .ra .dep) when omitted.
    #[arg(long, global = true)]
    lang: Option<String>,

    /// Oracle suite for RX evaluation: default or bracket.
    #[arg(long, global = true, default_value = "default")]
    oracle: String,

    /// Largest number of environments a decision procedure may enumerate.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_envs: u64,

    /// Time limit for decision procedures, in seconds.
    #[arg(long, global = true, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,

    /// Disable isomorphism pruning of candidate environments.
    #[arg(long, global = true)]
    no_prune: bool,

    /// Output file (translate, compile-ra) or directory (reduce-deps).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression on an environment given as value JSON.
    Eval {
        expr: PathBuf,
        /// JSON object mapping each free variable to a value.
        #[arg(long)]
        env: Option<PathBuf>,
    },
    /// Decide well-definedness, type-checking or satisfiability.
    Check {
        expr: PathBuf,
        /// Type assignment file: one `(x T)` form per free variable.
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Output type file (mode `type`).
        #[arg(long = "type")]
        tau: Option<PathBuf>,
    },
    /// Translate a pure PERX expression into PENRC[kind].
    Translate {
        expr: PathBuf,
        /// Also translate this pure RX type assignment.
        #[arg(long)]
        gamma: Option<PathBuf>,
    },
    /// Compile a relational algebra program into RX.
    CompileRa { program: PathBuf },
    /// Build the RX expressions reducing a dependency implication problem.
    ReduceDeps { problem: PathBuf },
    /// Parse a file and print it back in canonical form.
    Parse { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Welldef,
    Type,
    Sat,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn lang_of(cli: &Cli, path: &Path) -> Result<Lang> {
    if let Some(tag) = &cli.lang {
        return Lang::from_tag(tag).ok_or_else(|| anyhow!("unknown language `{tag}`"));
    }
    path.extension()
        .and_then(|e| e.to_str())
        .and_then(Lang::from_extension)
        .ok_or_else(|| anyhow!("cannot infer the language of {}; pass --lang", path.display()))
}

fn parse_file(cli: &Cli, path: &Path) -> Result<Ast> {
    let text = read(path)?;
    parse(&text, lang_of(cli, path)?).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn config(cli: &Cli) -> Config {
    Config { max_envs: cli.max_envs, timeout: Duration::from_secs(cli.timeout), prune: !cli.no_prune }
}

fn print_json(v: &Json) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn write_out(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Eval { expr, env } => cmd_eval(cli, expr, env.as_deref()),
        Command::Check { expr, gamma, mode, tau } => cmd_check(cli, expr, gamma.as_deref(), *mode, tau.as_deref()),
        Command::Translate { expr, gamma } => cmd_translate(cli, expr, gamma.as_deref()),
        Command::CompileRa { program } => cmd_compile_ra(cli, program),
        Command::ReduceDeps { problem } => cmd_reduce_deps(cli, problem),
        Command::Parse { input } => cmd_parse(cli, input),
    }
}

// ---------------------------------------------------------------------------
// eval

fn load_env<V: JsonForm>(path: Option<&Path>, free: &std::collections::BTreeSet<String>) -> Result<Environment<V>> {
    let env = match path {
        Some(p) => {
            let text = read(p)?;
            let json: Json = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", p.display()))?;
            Environment::from_json(&json).map_err(|e| anyhow!("{}: {e}", p.display()))?
        }
        None => Environment::new(),
    };
    for x in free {
        if env.get(x).is_none() {
            bail!("free variable `{x}` has no binding in the environment");
        }
    }
    if let Some(x) = env.vars().find(|x| !free.contains(*x)) {
        bail!("the environment binds `{x}`, which is not free in the expression");
    }
    Ok(env)
}

fn undefined_json<R: Reason>(u: &Undefined<R>, spans: &Spans) -> Json {
    let span = spans.get(&u.path).map(|s| {
        json!({
            "start": {"line": s.start.line, "col": s.start.col},
            "end": {"line": s.end.line, "col": s.end.col},
        })
    });
    json!({"undefined": {"reason": u.reason.code(), "path": u.path, "span": span}})
}

fn report<V: JsonForm, R: Reason>(r: Result<V, Undefined<R>>, spans: &Spans) -> u8 {
    match r {
        Ok(v) => {
            print_json(&v.to_json());
            0
        }
        Err(u) => {
            eprintln!("{u}");
            print_json(&undefined_json(&u, spans));
            EXIT_UNDEFINED
        }
    }
}

fn cmd_eval(cli: &Cli, path: &Path, env: Option<&Path>) -> Result<u8> {
    Ok(match parse_file(cli, path)? {
        Ast::Rx(p) => {
            let oracles = oracles_by_name(&cli.oracle).ok_or_else(|| anyhow!("unknown oracle suite `{}`", cli.oracle))?;
            let env: Environment<RxValue> = load_env(env, &p.expr.free_vars())?;
            report(eval_rx(&p.expr, &env, oracles), &p.spans)
        }
        Ast::PureRx(p) => {
            let env: Environment<PureRxValue> = load_env(env, &p.expr.free_vars())?;
            report(eval_pure_rx(&p.expr, &env), &p.spans)
        }
        Ast::Penrc(p) => {
            let env: Environment<NrcValue> = load_env(env, &p.expr.free_vars())?;
            report(eval_penrc(&p.expr, &env), &p.spans)
        }
        Ast::Ra(_) | Ast::Deps(_) => bail!("eval takes an rx, pure-rx or penrc expression"),
    })
}

// ---------------------------------------------------------------------------
// check

fn load_gamma<T: nrc_core::syntax::TypeSyntax>(path: Option<&Path>) -> Result<TypeAssignment<T>> {
    match path {
        Some(p) => parse_gamma(&read(p)?).map_err(|e| anyhow!("{}:{e}", p.display())),
        None => Ok(TypeAssignment::new()),
    }
}

fn require_tau(tau: Option<&Path>) -> Result<(&Path, String)> {
    let p = tau.ok_or_else(|| anyhow!("mode `type` needs --type"))?;
    Ok((p, read(p)?))
}

fn verdict_exit<V: JsonForm>(r: Result<Verdict<V>, DecideError>) -> Result<u8> {
    match r {
        Ok(v) => {
            print_json(&v.to_json());
            Ok(if v.result { 0 } else { EXIT_FAILS })
        }
        Err(e @ (DecideError::BudgetExceeded { .. } | DecideError::Timeout { .. })) => {
            eprintln!("error: {e}");
            print_json(&json!({"error": e.to_string()}));
            Ok(EXIT_BUDGET)
        }
        Err(e) => Err(e.into()),
    }
}

/// Runs the well-definedness check that type and satisfiability checks
/// depend on; a failure is reported as the verdict of the whole command.
fn precheck<V: JsonForm>(wd: Result<Verdict<V>, DecideError>) -> Result<Option<u8>> {
    match wd {
        Ok(v) if v.result => Ok(None),
        Ok(v) => {
            eprintln!("the expression is not well-defined under the type assignment");
            print_json(&v.to_json());
            Ok(Some(EXIT_FAILS))
        }
        Err(e) => verdict_exit::<V>(Err(e)).map(Some),
    }
}

fn cmd_check(cli: &Cli, path: &Path, gamma: Option<&Path>, mode: Mode, tau: Option<&Path>) -> Result<u8> {
    let cfg = config(cli);
    match parse_file(cli, path)? {
        Ast::Penrc(p) => {
            let g: TypeAssignment<NrcType> = load_gamma(gamma)?;
            let e = &p.expr;
            let wd = decide::well_defined_penrc_with(e, &g, &cfg);
            if mode == Mode::Welldef {
                return verdict_exit(wd);
            }
            if let Some(code) = precheck(wd)? {
                return Ok(code);
            }
            match mode {
                Mode::Type => {
                    let (tp, text) = require_tau(tau)?;
                    let t = parse_nrc_type(&text).map_err(|e| anyhow!("{}:{e}", tp.display()))?;
                    verdict_exit(decide::typecheck_penrc_with(e, &g, &t, &cfg))
                }
                _ => verdict_exit(decide::satisfiable_penrc_with(e, &g, &cfg)),
            }
        }
        Ast::PureRx(p) => {
            let g: TypeAssignment<PureRxType> = load_gamma(gamma)?;
            let e = &p.expr;
            let wd = decide::well_defined_pure_rx_with(e, &g, &cfg);
            match mode {
                Mode::Welldef => verdict_exit(wd),
                Mode::Type => {
                    if let Some(code) = precheck(wd)? {
                        return Ok(code);
                    }
                    let (tp, text) = require_tau(tau)?;
                    let t = parse_pure_type(&text).map_err(|e| anyhow!("{}:{e}", tp.display()))?;
                    verdict_exit(decide::typecheck_pure_rx_with(e, &g, &t, &cfg))
                }
                Mode::Sat => bail!("satisfiability is provided for penrc expressions"),
            }
        }
        Ast::Rx(_) => bail!(
            "RX with emptiness tests or type switches has no decision procedure; \
             use a pure-rx (PERX) or penrc expression"
        ),
        Ast::Ra(_) | Ast::Deps(_) => bail!("check takes a pure-rx or penrc expression"),
    }
}

// ---------------------------------------------------------------------------
// translation commands

fn cmd_translate(cli: &Cli, path: &Path, gamma: Option<&Path>) -> Result<u8> {
    let Ast::PureRx(p) = parse_file(cli, path)? else {
        bail!("translate takes a pure-rx expression");
    };
    let mut text = pretty_nrc(&translate_expr(&p.expr)?) + "\n";
    if let Some(g) = gamma {
        let g: TypeAssignment<PureRxType> = load_gamma(Some(g))?;
        let translated: TypeAssignment<NrcType> = g.iter().map(|(x, t)| (x.clone(), translate_type(t))).collect();
        text.push_str(&print_gamma(&translated));
    }
    write_out(cli, &text)?;
    Ok(0)
}

fn cmd_compile_ra(cli: &Cli, path: &Path) -> Result<u8> {
    let Ast::Ra(prog) = parse_file(cli, path)? else {
        bail!("compile-ra takes a relational algebra program");
    };
    let (e, gamma) = compile_ra(&prog)?;
    match &cli.out {
        Some(out) => {
            std::fs::write(out, pretty_xq(&e) + "\n").with_context(|| format!("cannot write {}", out.display()))?;
            let gpath = out.with_extension("gamma");
            std::fs::write(&gpath, print_gamma(&gamma)).with_context(|| format!("cannot write {}", gpath.display()))?;
        }
        None => print!("{}\n{}", pretty_xq(&e), print_gamma(&gamma)),
    }
    Ok(0)
}

fn cmd_reduce_deps(cli: &Cli, path: &Path) -> Result<u8> {
    let Ast::Deps(problem) = parse_file(cli, path)? else {
        bail!("reduce-deps takes a dependency problem");
    };
    let dir = cli.out.as_ref().ok_or_else(|| anyhow!("reduce-deps needs --out DIR"))?;
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let red = build_fd_id_reduction(&problem);
    let files: [(&str, String); 4] = [
        ("e1.rx", pretty_xq(&red.e1) + "\n"),
        ("e2.rx", pretty_xq(&red.e2) + "\n"),
        ("input.gamma", print_gamma(&red.gamma)),
        ("output.type", nrc_core::syntax::print::rx_type_sexp(&red.output).pretty(80) + "\n"),
    ];
    for (name, text) in &files {
        let p = dir.join(name);
        std::fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?;
    }
    print_json(&json!({
        "files": files.iter().map(|(n, _)| dir.join(n).display().to_string()).collect::<Vec<_>>(),
    }));
    Ok(0)
}

fn cmd_parse(cli: &Cli, path: &Path) -> Result<u8> {
    let text = match parse_file(cli, path)? {
        Ast::Rx(p) => pretty_xq(&p.expr) + "\n",
        Ast::PureRx(p) => pretty_xq(&p.expr) + "\n",
        Ast::Penrc(p) => pretty_nrc(&p.expr) + "\n",
        Ast::Ra(p) => print_ra_program(&p),
        Ast::Deps(d) => print_deps(&d) + "\n",
    };
    write_out(cli, &text)?;
    Ok(0)
}
