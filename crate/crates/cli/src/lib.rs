//! Command-line front end for `curvedelta`.
//!
//! Exit codes: 0 certified / audit PASS, 2 undecided, 3 invalid input,
//! 4 audit FAIL.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use curvedelta::engine::{delta_certified, semigroup, EngineOptions, Outcome};
use curvedelta::family::{default_points, scan, ScanOptions};
use curvedelta::io::{emit_outcome, emit_scan, validity_value, DocOptions, Format};
use curvedelta::oracle::brute_delta;
use curvedelta::{parse_document, serialize_document, Document, SpecPoint};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_AUDIT_FAIL: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "curvedelta",
    version,
    about = "Certified delta invariants of curve singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Initial precision D
    #[arg(long, global = true)]
    dinit: Option<usize>,
    /// Maximal precision D
    #[arg(long, global = true)]
    dmax: Option<usize>,
    /// Emit JSON instead of a table
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified delta, conductor and determinacy bounds
    Delta { file: PathBuf },
    /// Value semigroup of a single branch
    Semigroup { file: PathBuf },
    /// Truncate every entry above t-degree N and print the document
    Truncate {
        file: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Certify a family at several points and audit semicontinuity
    Scan {
        file: PathBuf,
        /// Comma-separated points, e.g. `s=0,s=1,generic` or `p=2,generic`
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<String>>,
        /// Number of default points, generic included
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
    /// Reference delta at a fixed precision
    #[command(hide = true)]
    Oracle {
        file: PathBuf,
        #[arg(long = "D")]
        d: usize,
    },
}

/// Exit code for a single-germ outcome.
pub fn exit_code(outcome: &Outcome) -> i32 {
    match outcome {
        Outcome::Certified(_) => EXIT_OK,
        Outcome::Undecided(_) => EXIT_UNDECIDED,
    }
}

/// Exit code for a scan audit.
pub fn audit_exit_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_AUDIT_FAIL
    }
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(Failure(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INVALID
        }
    }
}

fn load(path: &PathBuf) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_document(&text)?)
}

fn engine_options(global: &GlobalArgs, doc: DocOptions) -> Result<EngineOptions, Failure> {
    let defaults = EngineOptions::default();
    let opts = EngineOptions {
        d_init: global.dinit.or(doc.d_init).unwrap_or(defaults.d_init),
        d_max: global.dmax.or(doc.d_max).unwrap_or(defaults.d_max),
    };
    opts.validate()?;
    Ok(opts)
}

fn format(global: &GlobalArgs) -> Format {
    if global.json {
        Format::Json
    } else {
        Format::Human
    }
}

fn expect_param(doc: Document) -> Result<(curvedelta::Parameterization, DocOptions), Failure> {
    match doc {
        Document::Param { param, options } => Ok((param, options)),
        Document::Family { .. } => Err(Failure(
            "expected a parameterization over a field; use `scan` for families".into(),
        )),
    }
}

fn invalid_input(
    param: &curvedelta::Parameterization,
    out: &mut dyn Write,
    err: &mut dyn Write,
    json: bool,
) -> Option<i32> {
    let v = param.validate();
    if v.valid {
        return None;
    }
    if json {
        let _ = writeln!(out, "{}", validity_value(&v));
    }
    let zero: Vec<usize> = v
        .branch_nonzero
        .iter()
        .enumerate()
        .filter(|(_, &nz)| !nz)
        .map(|(j, _)| j + 1)
        .collect();
    let dup: Vec<String> = v
        .duplicate_branches
        .iter()
        .map(|(a, b)| format!("{}={}", a + 1, b + 1))
        .collect();
    let _ = writeln!(
        err,
        "error: invalid parameterization (zero branches: {zero:?}, duplicate branches: [{}])",
        dup.join(", ")
    );
    Some(EXIT_INVALID)
}

fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Delta { file } => {
            let (param, doc_opts) = expect_param(load(file)?)?;
            let opts = engine_options(g, doc_opts)?;
            if let Some(code) = invalid_input(&param, out, err, g.json) {
                return Ok(code);
            }
            let outcome = delta_certified(&param, &opts)?;
            write_block(out, &emit_outcome(&outcome, format(g)))?;
            Ok(exit_code(&outcome))
        }
        Command::Semigroup { file } => {
            let (param, doc_opts) = expect_param(load(file)?)?;
            if param.branches() != 1 {
                return Err(Failure("semigroup needs a single branch (r = 1)".into()));
            }
            let opts = engine_options(g, doc_opts)?;
            if let Some(code) = invalid_input(&param, out, err, g.json) {
                return Ok(code);
            }
            match delta_certified(&param, &opts)? {
                Outcome::Certified(cert) => {
                    let sg = semigroup(&cert)?;
                    let text = if g.json {
                        semigroup_json(&sg.gaps, &sg.generators, sg.frobenius, cert.cond_total)
                    } else {
                        format!(
                            "{:<16}<{}>\n{:<16}{{{}}}\n{:<16}{}\n{:<16}{}\n",
                            "generators",
                            join(&sg.generators),
                            "gaps",
                            join(&sg.gaps),
                            "frobenius",
                            sg.frobenius,
                            "conductor",
                            cert.cond_total
                        )
                    };
                    write_block(out, &text)?;
                    Ok(EXIT_OK)
                }
                undecided => {
                    write_block(out, &emit_outcome(&undecided, format(g)))?;
                    Ok(EXIT_UNDECIDED)
                }
            }
        }
        Command::Truncate { file, order } => {
            let doc = match load(file)? {
                Document::Param { param, options } => Document::Param {
                    param: param.truncate(*order),
                    options,
                },
                Document::Family {
                    family,
                    options,
                    points,
                } => Document::Family {
                    family: family.truncate(*order),
                    options,
                    points,
                },
            };
            write_block(out, &serialize_document(&doc))?;
            Ok(EXIT_OK)
        }
        Command::Scan {
            file,
            points,
            count,
        } => {
            let Document::Family {
                family,
                options: doc_opts,
                points: doc_points,
            } = load(file)?
            else {
                return Err(Failure(
                    "scan expects a family document with a \"ring\" tag".into(),
                ));
            };
            let opts = engine_options(g, doc_opts)?;
            let points: Vec<SpecPoint> = match points {
                Some(ps) => ps
                    .iter()
                    .map(|p| SpecPoint::parse(p.trim(), family.ring()))
                    .collect::<Result<_, _>>()?,
                None => doc_points.unwrap_or_else(|| default_points(family.ring(), *count)),
            };
            let report = scan(
                &family,
                &points,
                &ScanOptions {
                    engine: opts,
                    parallel: true,
                },
            )?;
            let doc_opts = DocOptions {
                d_init: Some(opts.d_init),
                d_max: Some(opts.d_max),
            };
            write_block(out, &emit_scan(&report, doc_opts, format(g)))?;
            Ok(audit_exit_code(report.audit.pass))
        }
        Command::Oracle { file, d } => {
            let (param, _) = expect_param(load(file)?)?;
            if let Some(code) = invalid_input(&param, out, err, g.json) {
                return Ok(code);
            }
            let value = brute_delta(&param, *d)?;
            let text = if g.json {
                format!("{{\"D\":{d},\"delta_D\":{value}}}")
            } else {
                format!("{:<16}{}\n{:<16}{}\n", "precision", d, "delta_D", value)
            };
            write_block(out, &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn semigroup_json(
    gaps: &[usize],
    generators: &[usize],
    frobenius: i64,
    conductor: usize,
) -> String {
    format!(
        "{{\"gaps\":[{}],\"generators\":[{}],\"frobenius\":{},\"conductor\":{}}}",
        join(gaps),
        join(generators),
        frobenius,
        conductor
    )
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn write_block(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    if text.ends_with('\n') {
        out.write_all(text.as_bytes())?;
    } else {
        writeln!(out, "{text}")?;
    }
    Ok(())
}
