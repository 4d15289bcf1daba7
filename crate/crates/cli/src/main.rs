mod diagnostic;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cctrack_core::eval::{Evaluator, Outcome, DEFAULT_FUEL};
use cctrack_core::frontend::{parse_program, Program};
use cctrack_core::fsub::{erase_term, erase_type, fsub_check, FsubContext};
use cctrack_core::{Binding, Checker, Extensions};
use cctrack_harness::fuzz::{self, FuzzConfig};

use diagnostic::{CheckReport, Diagnostic, TypedDef};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_STUCK: u8 = 2;
const EXIT_FUEL: u8 = 3;
const EXIT_USAGE: u8 = 64;
/// Status when stdout is closed early, as after a shell's SIGPIPE.
const EXIT_BROKEN_PIPE: i32 = 141;

/// `println!` that exits quietly instead of panicking when stdout is gone.
macro_rules! out {
    ($($arg:tt)*) => {
        out_raw(&format!("{}\n", format_args!($($arg)*)))
    };
}

fn out_raw(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
        .is_err()
    {
        std::process::exit(EXIT_BROKEN_PIPE);
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "cctrack",
    version,
    about = "Checker and interpreter for a capture-tracking System F<:"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type-check a program and print the types of its definitions and main term.
    Check {
        file: PathBuf,
        #[command(flatten)]
        ext: ExtArg,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the main term.
    Eval {
        file: PathBuf,
        #[command(flatten)]
        ext: ExtArg,
        /// Print every intermediate state.
        #[arg(long)]
        trace: bool,
        /// Step limit; defaults to CCTRACK_FUEL or 100000.
        #[arg(long, value_name = "N")]
        max_steps: Option<u64>,
        /// Type-check the main term first and re-check it after every step.
        #[arg(long)]
        check_each_step: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the main term with capture sets erased, and its System F<: type.
    Erase { file: PathBuf },
    /// Run the property-based soundness harness.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        #[command(flatten)]
        ext: ExtArg,
        /// Directory for shrunk counterexamples.
        #[arg(long, default_value = "crashes")]
        crash_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ExtArg {
    /// Comma-separated extensions: returns, regions, effects, or all.
    #[arg(long = "ext", value_name = "LIST", value_parser = Extensions::parse_list)]
    ext: Option<Extensions>,
}

impl ExtArg {
    fn get(&self) -> Extensions {
        self.ext.unwrap_or_default()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(match cli.command {
        Command::Check { file, ext, json } => check(&file, ext.get(), json),
        Command::Eval {
            file,
            ext,
            trace,
            max_steps,
            check_each_step,
            json,
        } => match fuel(max_steps) {
            Ok(fuel) => eval(&file, ext.get(), trace, fuel, check_each_step, json),
            Err(msg) => {
                eprintln!("cctrack: {msg}");
                EXIT_USAGE
            }
        },
        Command::Erase { file } => erase(&file),
        Command::Fuzz {
            seed,
            count,
            max_depth,
            ext,
            crash_dir,
        } => run_fuzz(seed, count, max_depth, ext.get(), &crash_dir),
    })
}

fn fuel(max_steps: Option<u64>) -> Result<u64, String> {
    if let Some(n) = max_steps {
        return Ok(n);
    }
    match std::env::var("CCTRACK_FUEL") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("CCTRACK_FUEL must be a step count, got `{s}`")),
        Err(_) => Ok(DEFAULT_FUEL),
    }
}

/// Reads and parses `file`, reporting failures in the requested format.
fn load(file: &Path, ext: Extensions, json: bool) -> Result<Program, u8> {
    let name = file.display().to_string();
    let src = fs::read_to_string(file).map_err(|e| {
        eprintln!("cctrack: cannot read {name}: {e}");
        EXIT_USAGE
    })?;
    parse_program(&src, ext).map_err(|e| {
        let d = Diagnostic::from_parse_error(&e);
        if json {
            print_json(&CheckReport::Error { diagnostic: d });
        } else {
            eprintln!("{}", d.render(&name));
        }
        EXIT_ERROR
    })
}

fn print_json<T: Serialize>(value: &T) {
    out!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable report")
    );
}

fn check(file: &Path, ext: Extensions, json: bool) -> u8 {
    let program = match load(file, ext, json) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let checker = Checker::new(program.extensions);
    let printer = program.printer();
    match program.check(&checker) {
        Ok(checked) => {
            let defs: Vec<TypedDef> = checked
                .defs
                .iter()
                .map(|(n, t)| TypedDef {
                    name: n.to_string(),
                    ty: printer.ty(t),
                })
                .collect();
            let main = checked.main.as_ref().map(|t| printer.ty(t));
            if json {
                print_json(&CheckReport::Ok { defs, main });
            } else {
                for d in &defs {
                    out!("{} : {}", d.name, d.ty);
                }
                if let Some(m) = main {
                    out!("main : {m}");
                }
            }
            EXIT_OK
        }
        Err(e) => {
            let d = Diagnostic::from_type_error(&e, &printer);
            if json {
                print_json(&CheckReport::Error { diagnostic: d });
            } else {
                eprintln!("{}", d.render(&file.display().to_string()));
            }
            EXIT_ERROR
        }
    }
}

#[derive(Serialize)]
struct TraceEntry {
    step: u64,
    rule: Option<&'static str>,
    term: String,
}

#[derive(Serialize)]
struct EvalReport {
    outcome: &'static str,
    reason: Option<&'static str>,
    steps: u64,
    term: Option<String>,
    trace: Vec<TraceEntry>,
    diagnostic: Option<Diagnostic>,
}

fn eval(
    file: &Path,
    ext: Extensions,
    trace: bool,
    fuel: u64,
    check_each_step: bool,
    json: bool,
) -> u8 {
    let program = match load(file, ext, json) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let el = program.elaborate();
    let Some(main) = el.main else {
        eprintln!("cctrack: {} has no main term", file.display());
        return EXIT_USAGE;
    };
    let printer = program.printer();
    let checker = Checker::new(program.extensions);
    let expected = if check_each_step {
        match checker.synth(&el.context, &main.term) {
            Ok(t) => Some(t),
            Err(e) => {
                let d = Diagnostic::from_type_error(&e.with_span(main.span), &printer);
                if json {
                    print_json(&CheckReport::Error { diagnostic: d });
                } else {
                    eprintln!("{}", d.render(&file.display().to_string()));
                }
                return EXIT_ERROR;
            }
        }
    } else {
        None
    };

    let mut entries = Vec::new();
    let mut violation = None;
    let evaluator = Evaluator {
        fuel,
        ..Evaluator::new(program.extensions)
    };
    let result = evaluator.run_with(&main.term, |state| {
        if trace {
            let term = printer.term(&state.term);
            if json {
                entries.push(TraceEntry {
                    step: state.step_count,
                    rule: state.last_rule,
                    term,
                });
            } else {
                out!("step {}: {term}", state.step_count);
            }
        }
        if let (Some(ty), None) = (&expected, &violation) {
            if let Err(e) = checker.check(&el.context, &state.term, ty) {
                violation = Some((state.step_count, e));
            }
        }
    });

    if let Some((step, e)) = violation {
        let mut d = Diagnostic::from_type_error(&e, &printer);
        d.message = format!("type not preserved at step {step}: {}", d.message);
        if json {
            print_json(&EvalReport {
                outcome: "preservation-failure",
                reason: None,
                steps: result.steps,
                term: None,
                trace: entries,
                diagnostic: Some(d),
            });
        } else {
            eprintln!("{}", d.render(&file.display().to_string()));
        }
        return EXIT_ERROR;
    }

    let (outcome, reason, term, code) = match &result.outcome {
        Outcome::Done(v) => ("done", None, Some(printer.term(v)), EXIT_OK),
        Outcome::Stuck(r, t) => ("stuck", Some(r.tag()), Some(printer.term(t)), EXIT_STUCK),
        Outcome::OutOfFuel => ("out-of-fuel", None, None, EXIT_FUEL),
    };
    if json {
        print_json(&EvalReport {
            outcome,
            reason,
            steps: result.steps,
            term,
            trace: entries,
            diagnostic: None,
        });
    } else {
        match (&result.outcome, term) {
            (Outcome::Done(_), Some(t)) => out!("done in {} steps: {t}", result.steps),
            (Outcome::Stuck(r, _), Some(t)) => {
                out!("stuck ({r}) after {} steps: {t}", result.steps)
            }
            _ => out!("out of fuel after {} steps", result.steps),
        }
    }
    code
}

fn erase(file: &Path) -> u8 {
    let program = match load(file, Extensions::none(), false) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let el = program.elaborate();
    let Some(main) = el.main else {
        eprintln!("cctrack: {} has no main term", file.display());
        return EXIT_USAGE;
    };
    let mut ctx = FsubContext::default();
    for b in el.context.bindings() {
        let erased = match b {
            Binding::Term(x, t) => erase_type(t).map(|t| ctx.with_term(x.clone(), t)),
            Binding::Type(x, t) => erase_type(t).map(|t| ctx.with_type(x.clone(), t)),
        };
        match erased {
            Ok(c) => ctx = c,
            Err(e) => {
                eprintln!("cctrack: {e}");
                return EXIT_ERROR;
            }
        }
    }
    let term = match erase_term(&main.term) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cctrack: {e}");
            return EXIT_ERROR;
        }
    };
    out!("term : {term}");
    match fsub_check(&ctx, &term) {
        Ok(ty) => {
            out!("type : {ty}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("cctrack: {e}");
            EXIT_ERROR
        }
    }
}

fn run_fuzz(seed: u64, count: usize, max_depth: usize, ext: Extensions, crash_dir: &Path) -> u8 {
    if max_depth == 0 {
        eprintln!("cctrack: --max-depth must be at least 1");
        return EXIT_USAGE;
    }
    let config = FuzzConfig {
        seed,
        count,
        max_depth,
        extensions: ext,
        ..FuzzConfig::default()
    };
    let report = fuzz::run(&config);
    out_raw(&report.summary());
    if report.passed() {
        return EXIT_OK;
    }
    if let Err(e) = fs::create_dir_all(crash_dir) {
        eprintln!("cctrack: cannot create {}: {e}", crash_dir.display());
        return EXIT_ERROR;
    }
    for cx in &report.violations {
        let path = crash_dir.join(cx.file_name());
        match fs::write(&path, cx.to_source()) {
            Ok(()) => eprintln!("counterexample written to {}", path.display()),
            Err(e) => eprintln!("cctrack: cannot write {}: {e}", path.display()),
        }
    }
    EXIT_ERROR
}
