//! Subcommands. Every command yields an [`Outcome`] whose exit code is 0 when
//! all checks pass and 1 when a check fails. Usage or validation errors give 2.

use std::fs;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use triweb_core::diffset::{
    self, presentation_from_difference_set, singer_difference_set, standardize, verify_planar_difference_set,
};
use triweb_core::presentation::{builtin_exotic_15_1, degenerate, verify_axioms, verify_condition_6_variants};
use triweb_core::webfun::{all_pass, FunctorContext, RELATIONS};
use triweb_core::ybe;
use triweb_core::{PrimeField, Rationals, ScalarField, TrianglePresentation};

use crate::formats::{
    axiom_report_json, presentation_from_json, presentation_to_json, relation_reports_json, write_coo,
    DifferenceSetFile,
};

#[derive(Debug, Parser)]
#[command(name = "triweb", version, about = "Exact checks on triangle presentations and their web matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cyclic planar difference sets.
    #[command(subcommand)]
    Diffset(DiffsetCommand),
    /// Build or verify presentations.
    #[command(subcommand)]
    Presentation(PresentationCommand),
    /// Relation checks and matrix export for the functor.
    #[command(subcommand)]
    Functor(FunctorCommand),
    /// Checks on R̂ = crossing(1, 1).
    Ybe(YbeArgs),
}

#[derive(Debug, Subcommand)]
pub enum DiffsetCommand {
    Verify {
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long = "D", value_delimiter = ',')]
        set: Vec<u64>,
        #[arg(long)]
        out: Option<String>,
    },
    Standardize {
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long)]
        q: u64,
        #[arg(long = "D", value_delimiter = ',')]
        set: Vec<u64>,
        #[arg(long)]
        out: Option<String>,
    },
    Singer {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PresentationCommand {
    /// Presentation from a standard difference-set file.
    Build {
        #[arg(long)]
        from_diffset: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Six conditions plus the two variant forms of the sixth. Reads
    /// standard input when no file is given.
    Verify {
        #[arg(long = "in")]
        input: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    Builtin {
        #[arg(long, default_value = "15.1")]
        name: String,
        #[arg(long)]
        out: Option<String>,
    },
    Degenerate {
        #[arg(long = "N")]
        ground: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Re-export any presentation source as JSON.
    Export {
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct ContextArgs {
    /// `builtin:15.1`, `degenerate:N`, `singer:q` or a JSON file.
    #[arg(long)]
    pub presentation: String,
    /// Field characteristic; 0 selects the rationals.
    #[arg(long = "char")]
    pub characteristic: u64,
    #[arg(long)]
    pub override_hypotheses: bool,
}

#[derive(Debug, Subcommand)]
pub enum FunctorCommand {
    Check {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Comma-separated relation names; all when omitted.
        #[arg(long, value_delimiter = ',')]
        relations: Vec<String>,
        #[arg(long)]
        max_label: Option<usize>,
        #[arg(long)]
        out: Option<String>,
    },
    Emit {
        #[command(flatten)]
        ctx: ContextArgs,
        /// `merge:a,b`, `split:a,b` or `crossing:a,b`.
        #[arg(long)]
        emit: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct YbeArgs {
    #[command(flatten)]
    pub ctx: ContextArgs,
    #[arg(long)]
    pub out: Option<String>,
    /// Also write R̂ in coordinate format.
    #[arg(long)]
    pub matrix_out: Option<String>,
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            stdout: String::new(),
            stderr: message.into(),
        }
    }
}

type Res<T> = Result<T, Outcome>;

fn usage_err(e: impl std::fmt::Display) -> Outcome {
    Outcome::usage(format!("error: {e}"))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Writes `text` to `out` when given, otherwise returns it for stdout.
fn emit(text: String, out: &Option<String>, code: i32, stderr: String) -> Res<Outcome> {
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| usage_err(format!("cannot write {path}: {e}")))?;
            Ok(Outcome {
                code,
                stdout: String::new(),
                stderr,
            })
        }
        None => Ok(Outcome {
            code,
            stdout: text,
            stderr,
        }),
    }
}

fn read_source(path: &str) -> Res<String> {
    fs::read_to_string(path).map_err(|e| usage_err(format!("cannot read {path}: {e}")))
}

/// Resolves a presentation source: `builtin:15.1`, `degenerate:N`,
/// `singer:q` or a path to a JSON file.
pub fn load_presentation(source: &str) -> Result<(TrianglePresentation, Vec<String>), String> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return match name {
            "15.1" => Ok((builtin_exotic_15_1(), vec![])),
            other => Err(format!("unknown builtin presentation '{other}'")),
        };
    }
    if let Some(n) = source.strip_prefix("degenerate:") {
        let ground: usize = n.parse().map_err(|_| format!("'{n}' is not a ground-set size"))?;
        return degenerate(ground).map(|tp| (tp, vec![])).map_err(|e| e.to_string());
    }
    if let Some(q) = source.strip_prefix("singer:") {
        let q: u64 = q.parse().map_err(|_| format!("'{q}' is not an order"))?;
        let ds = singer_difference_set(q).map_err(|e| e.to_string())?;
        return presentation_from_difference_set(ds.modulus, ds.q, &ds.set)
            .map(|tp| (tp, vec![]))
            .map_err(|e| e.to_string());
    }
    let text = fs::read_to_string(source).map_err(|e| format!("cannot read {source}: {e}"))?;
    presentation_from_json(&text).map_err(|e| e.to_string())
}

pub fn run(cli: Cli, stdin: &mut dyn Read) -> Outcome {
    let result = match cli.command {
        Command::Diffset(cmd) => run_diffset(cmd),
        Command::Presentation(cmd) => run_presentation(cmd, stdin),
        Command::Functor(cmd) => run_functor(cmd),
        Command::Ybe(args) => run_ybe(args),
    };
    result.unwrap_or_else(|o| o)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdin),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            }
        }
    }
}

fn run_diffset(cmd: DiffsetCommand) -> Res<Outcome> {
    match cmd {
        DiffsetCommand::Verify { modulus, set, out } => {
            let report = verify_planar_difference_set(modulus, &set);
            let body = json!({
                "N": modulus,
                "D": set,
                "valid": report.valid,
                "modulus_matches_size": report.modulus_matches_size,
                "bad_entries": report.bad_entries,
                "bad_residues": report.bad_residues.iter().map(|&(r, c)| json!({"residue": r, "hits": c})).collect::<Vec<_>>(),
            });
            emit(pretty(&body), &out, if report.valid { 0 } else { 1 }, String::new())
        }
        DiffsetCommand::Standardize { modulus, q, set, out } => {
            let ds = standardize(modulus, q, &set).map_err(usage_err)?;
            let p = diffset::characteristic_of_order(q).map_err(usage_err)?;
            let mut body = serde_json::to_value(DifferenceSetFile::from(&ds)).expect("serializable");
            body["standard"] = json!(diffset::is_standard(modulus, p, &ds.set));
            emit(pretty(&body), &out, 0, String::new())
        }
        DiffsetCommand::Singer { q, out } => {
            let ds = singer_difference_set(q).map_err(usage_err)?;
            let body = serde_json::to_value(DifferenceSetFile::from(&ds)).expect("serializable");
            emit(pretty(&body), &out, 0, String::new())
        }
    }
}

fn run_presentation(cmd: PresentationCommand, stdin: &mut dyn Read) -> Res<Outcome> {
    match cmd {
        PresentationCommand::Build { from_diffset, out } => {
            let file: DifferenceSetFile =
                serde_json::from_str(&read_source(&from_diffset)?).map_err(usage_err)?;
            let tp = presentation_from_difference_set(file.modulus, file.q, &file.set).map_err(usage_err)?;
            emit(presentation_to_json(&tp) + "\n", &out, 0, String::new())
        }
        PresentationCommand::Verify { input, out } => {
            let text = match &input {
                Some(path) => read_source(path)?,
                None => {
                    let mut s = String::new();
                    stdin.read_to_string(&mut s).map_err(usage_err)?;
                    s
                }
            };
            let (tp, warnings) = presentation_from_json(&text).map_err(usage_err)?;
            let report = verify_axioms(&tp);
            let variants = verify_condition_6_variants(&tp).map_err(|e| e.to_string());
            let ok = report.all_pass() && variants.as_ref().is_ok_and(|v| v.six && v.agree());
            let body = axiom_report_json(&tp, &report, variants);
            emit(pretty(&body), &out, if ok { 0 } else { 1 }, warnings.join("\n"))
        }
        PresentationCommand::Builtin { name, out } => {
            let (tp, _) = load_presentation(&format!("builtin:{name}")).map_err(usage_err)?;
            emit(presentation_to_json(&tp) + "\n", &out, 0, String::new())
        }
        PresentationCommand::Degenerate { ground, out } => {
            let tp = degenerate(ground).map_err(usage_err)?;
            emit(presentation_to_json(&tp) + "\n", &out, 0, String::new())
        }
        PresentationCommand::Export { presentation, out } => {
            let (tp, warnings) = load_presentation(&presentation).map_err(usage_err)?;
            emit(presentation_to_json(&tp) + "\n", &out, 0, warnings.join("\n"))
        }
    }
}

fn context<K: ScalarField>(args: &ContextArgs, tp: TrianglePresentation, field: K) -> Res<FunctorContext<K>> {
    if args.override_hypotheses {
        Ok(FunctorContext::with_override(tp, field))
    } else {
        FunctorContext::new(tp, field).map_err(usage_err)
    }
}

/// Runs `body` with the field selected by `--char`.
macro_rules! with_field {
    ($args:expr, |$ctx:ident| $body:expr) => {{
        let (tp, warnings) = load_presentation(&$args.presentation).map_err(usage_err)?;
        if $args.characteristic == 0 {
            let $ctx = context(&$args, tp, Rationals)?;
            ($body, warnings)
        } else {
            let field = PrimeField::new($args.characteristic).map_err(usage_err)?;
            let $ctx = context(&$args, tp, field)?;
            ($body, warnings)
        }
    }};
}

fn run_functor(cmd: FunctorCommand) -> Res<Outcome> {
    match cmd {
        FunctorCommand::Check {
            ctx,
            relations,
            max_label,
            out,
        } => {
            if let Some(bad) = relations.iter().find(|r| !RELATIONS.contains(&r.as_str())) {
                return Err(Outcome::usage(format!(
                    "error: unknown relation '{bad}'; expected one of {}",
                    RELATIONS.join(", ")
                )));
            }
            let (reports, warnings) = with_field!(ctx, |c| {
                c.run_suite(max_label.unwrap_or(usize::MAX), |r| {
                    relations.is_empty() || relations.iter().any(|x| x == r)
                })
                .map_err(usage_err)?
            });
            let code = if all_pass(&reports) { 0 } else { 1 };
            emit(pretty(&relation_reports_json(&reports)), &out, code, warnings.join("\n"))
        }
        FunctorCommand::Emit { ctx, emit: what, out } => {
            let (kind, labels) = what
                .split_once(':')
                .ok_or_else(|| Outcome::usage(format!("error: expected kind:a,b, got '{what}'")))?;
            let labels: Vec<usize> = labels
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Outcome::usage(format!("error: bad labels in '{what}'")))?;
            let [a, b] = labels[..] else {
                return Err(Outcome::usage(format!("error: expected two labels in '{what}'")));
            };
            let (text, warnings) = with_field!(ctx, |c| {
                let m = match kind {
                    "merge" => c.merge(a, b),
                    "split" => c.split(a, b),
                    "crossing" => c.crossing(a, b),
                    other => return Err(Outcome::usage(format!("error: unknown matrix kind '{other}'"))),
                }
                .map_err(usage_err)?;
                write_coo(m)
            });
            emit(text, &out, 0, warnings.join("\n"))
        }
    }
}

fn ybe_summary<K: ScalarField>(c: &FunctorContext<K>, matrix_out: &Option<String>) -> Res<(Value, bool)> {
    let sol = ybe::rhat(c).map_err(usage_err)?;
    if let Some(path) = matrix_out {
        fs::write(path, write_coo(&sol.matrix)).map_err(|e| usage_err(format!("cannot write {path}: {e}")))?;
    }
    let tp = c.presentation();
    let involutive = ybe::check_involutive(&sol).map_err(usage_err)?;
    let braid = ybe::check_ybe(&sol).map_err(usage_err)?;
    let negated = ybe::check_ybe_negated(&sol).map_err(usage_err)?;
    let density = ybe::density_report(&sol);
    let density_applies = tp.n() == 3 && tp.q() >= 2;
    let closed_form = if tp.n() == 3 {
        Some(ybe::rhat_closed_form(tp, c.field().clone()).map_err(usage_err)? == sol.matrix)
    } else {
        None
    };
    let signed_swap = (tp.q() == 1).then(|| ybe::signed_swap(sol.points, c.field().clone()) == sol.matrix);
    let census_ok = tp.n() != 3 || ybe::column_census_violations(&sol, tp).is_empty();
    let ok = involutive.pass
        && braid.pass
        && negated.pass
        && (!density_applies || density.bound_ok)
        && closed_form != Some(false)
        && signed_swap != Some(false)
        && census_ok;
    let body = json!({
        "N": sol.points,
        "p": sol.characteristic,
        "q": sol.q,
        "nnz": density.nnz,
        "involutive": involutive.pass,
        "ybe": braid.pass,
        "ybe_negated": negated.pass,
        "density_bound_ok": density_applies.then_some(density.bound_ok),
        "column_census_ok": census_ok,
        "closed_form_matches": closed_form,
        "signed_swap_matches": signed_swap,
        "hypotheses_overridden": sol.hypotheses_overridden,
        "witnesses": {
            "involutive": crate::formats::relation_report_json(&involutive)["witness"],
            "ybe": crate::formats::relation_report_json(&braid)["witness"],
        },
    });
    Ok((body, ok))
}

fn run_ybe(args: YbeArgs) -> Res<Outcome> {
    let ((body, ok), warnings) = with_field!(args.ctx, |c| ybe_summary(&c, &args.matrix_out)?);
    emit(pretty(&body), &args.out, if ok { 0 } else { 1 }, warnings.join("\n"))
}
