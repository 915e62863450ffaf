//! The `kad` command line: argument definitions and command execution.
//!
//! Every command yields a [`Report`] holding plain text, a JSON value and an
//! exit status: 0 when the checked property holds, 1 when it is refuted.
//! Errors (bad input, unsupported operations, exceeded bounds) map to 2.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::axioms::{check_axioms, AxiomProfile, CheckError, CheckReport};
use crate::cofinite::{candidates, refute_wlp_candidate, verdict_is_sound, CofiniteError, EvPeriodicSet, Verdict};
use crate::finite::{
    boolean_algebra, check_phi, for_each_model, lemma4_model, trivial_algebra, Constraint, FiniteAlgebra,
    SearchConfig, SearchError,
};
use crate::hoare::vcgen::{vcgen, VcRecord};
use crate::hoare::{
    synth_mid_in, synth_mid_program, triple, triple_in, Bindings, HoareError, Method, Program, ProgramFile,
    TestExpr,
};
use crate::model::{eval, Env, EvalError, Model};
use crate::parse::{parse_term, ParseError};
use crate::rel::{as_finite_algebra, RelError, StateSpace};
use crate::term::Sort;

#[derive(Debug, Parser)]
#[command(name = "kad", version, about = "Kleene algebra with tests and domain: models, axioms, wlp")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    /// Three elements 0 < a < 1 with a;a = 0 and tests {0, 1}.
    Lemma4,
    /// All relations over one state.
    Rel1,
    /// All relations over two states.
    Rel2,
    /// The one-element algebra.
    Trivial,
    /// The two-element boolean algebra.
    Boolean,
}

impl Builtin {
    fn name(self) -> &'static str {
        match self {
            Builtin::Lemma4 => "lemma4",
            Builtin::Rel1 => "rel1",
            Builtin::Rel2 => "rel2",
            Builtin::Trivial => "trivial",
            Builtin::Boolean => "boolean",
        }
    }

    pub fn algebra(self) -> FiniteAlgebra {
        let rel = |n| as_finite_algebra(&StateSpace::numbered(n).expect("small space")).expect("within bound");
        match self {
            Builtin::Lemma4 => lemma4_model(),
            Builtin::Rel1 => rel(1),
            Builtin::Rel2 => rel(2),
            Builtin::Trivial => trivial_algebra(),
            Builtin::Boolean => boolean_algebra(),
        }
    }
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct ModelArgs {
    /// Model file with operation tables.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Built-in model.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstraintArg {
    PhiFails,
    PhiHolds,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every axiom of a profile at every assignment.
    CheckAxioms {
        #[command(flatten)]
        source: ModelArgs,
        #[arg(long)]
        profile: AxiomProfile,
    },
    /// Evaluate a term. Identifiers naming carrier elements denote them.
    Eval {
        #[command(flatten)]
        source: ModelArgs,
        term: String,
        /// Extra bindings `name=element`.
        #[arg(long = "bind", value_name = "NAME=ELEMENT")]
        binds: Vec<String>,
    },
    /// Check that every valid triple {p} x;y {q} has an intermediate assertion.
    CheckPhi {
        #[command(flatten)]
        source: ModelArgs,
    },
    /// Enumerate models of a profile up to isomorphism.
    FindModels {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        profile: AxiomProfile,
        #[arg(long, value_enum)]
        constraint: Option<ConstraintArg>,
        /// Stop after this many models.
        #[arg(long)]
        limit: Option<usize>,
        /// Largest carrier size the search accepts.
        #[arg(long, default_value_t = SearchConfig::default().max_size)]
        max_size: usize,
    },
    /// Generate and check verification conditions for the program in a file.
    Vcgen {
        file: PathBuf,
        /// Precondition, a test expression over the file's tests.
        #[arg(long)]
        pre: String,
        /// Postcondition, a test expression over the file's tests.
        #[arg(long)]
        post: String,
    },
    /// Synthesize an intermediate assertion r with {p}x{r} and {r}y{q}.
    ///
    /// With a program file, x and y are programs and p, q test expressions;
    /// with a model, all four are terms.
    SynthMid {
        /// Program file supplying relations and tests.
        #[arg(long, conflicts_with_all = ["model", "builtin"])]
        program_file: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, value_enum)]
        builtin: Option<Builtin>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Synthesis method; all three when omitted.
        #[arg(long)]
        method: Option<Method>,
    },
    /// Scripted demonstrations.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// The intermediate-assertion sentence fails in a KAT but holds with antidomain.
    Separation,
    /// A set outside the finite/cofinite tests has no weakest liberal precondition.
    Nonexpressivity {
        /// A set literal: evens, odds, finite{..}, cofinite{..}, periodic(N; {..}; p; {..}).
        #[arg(long, default_value = "evens")]
        set: String,
        #[arg(long, default_value_t = 100)]
        candidates: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Hoare(#[from] HoareError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Cofinite(#[from] CofiniteError),
}

/// The outcome of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub holds: bool,
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.holds {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::CheckAxioms { source, profile } => cmd_check_axioms(source, *profile),
        Command::Eval { source, term, binds } => cmd_eval(source, term, binds),
        Command::CheckPhi { source } => cmd_check_phi(source),
        Command::FindModels {
            size,
            profile,
            constraint,
            limit,
            max_size,
        } => cmd_find_models(*size, *profile, *constraint, *limit, *max_size),
        Command::Vcgen { file, pre, post } => cmd_vcgen(file, pre, post),
        Command::SynthMid {
            program_file,
            model,
            builtin,
            x,
            y,
            p,
            q,
            method,
        } => {
            let methods = method.map_or(Method::ALL.to_vec(), |m| vec![m]);
            match program_file {
                Some(path) => cmd_synth_rel(path, x, y, p, q, &methods),
                None => {
                    let source = ModelArgs {
                        model: model.clone(),
                        builtin: *builtin,
                    };
                    cmd_synth_model(&source, x, y, p, q, &methods)
                }
            }
        }
        Command::Demo(Demo::Separation) => demo_separation(),
        Command::Demo(Demo::Nonexpressivity { set, candidates }) => demo_nonexpressivity(set, *candidates),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_model(source: &ModelArgs) -> Result<(String, FiniteAlgebra), CliError> {
    match (&source.model, source.builtin) {
        (Some(path), None) => {
            let text = read(path)?;
            let alg = FiniteAlgebra::parse_model_file(&text).map_err(|e| CliError::File {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            Ok((path.display().to_string(), alg))
        }
        (None, Some(b)) => Ok((b.name().to_string(), b.algebra())),
        _ => Err(CliError::Usage("give exactly one of --model and --builtin".into())),
    }
}

fn describe(label: &str, alg: &FiniteAlgebra) -> String {
    match alg.tests() {
        Some(t) => format!("{label} ({} elements, {} tests)", alg.size(), t.len()),
        None => format!("{label} ({} elements, no tests)", alg.size()),
    }
}

fn status(holds: bool, yes: &str, no: &str) -> String {
    if holds { yes } else { no }.to_string()
}

fn check_report_text(label: &str, alg: &FiniteAlgebra, r: &CheckReport) -> String {
    let mut out = format!(
        "model: {}\nprofile: {}\naxioms checked: {}\ninstances checked: {}\n",
        describe(label, alg),
        r.profile,
        r.axioms_checked,
        r.instances_checked
    );
    for v in &r.violations {
        out.push_str(&format!("violation: {v}\n"));
    }
    out.push_str(&format!("result: {}\n", status(r.passed, "passed", "violated")));
    out
}

fn cmd_check_axioms(source: &ModelArgs, profile: AxiomProfile) -> Result<Report, CliError> {
    let (label, alg) = load_model(source)?;
    let r = check_axioms(&alg, profile)?;
    Ok(Report {
        holds: r.passed,
        text: check_report_text(&label, &alg, &r),
        json: json!({ "command": "check-axioms", "model": label, "report": r }),
    })
}

/// Environment binding carrier element names that are identifiers, then
/// explicit `name=element` bindings. Returns the names bound to tests too.
fn term_env(alg: &FiniteAlgebra, binds: &[String]) -> Result<(Env<usize>, BTreeSet<String>), CliError> {
    let mut pairs: Vec<(String, usize)> = alg
        .names()
        .iter()
        .enumerate()
        .filter(|(_, n)| n.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_'))
        .map(|(i, n)| (n.clone(), i))
        .collect();
    for b in binds {
        let (name, elem) = b
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("binding `{b}` is not of the form name=element")))?;
        let value = alg
            .index_of(elem.trim())
            .ok_or_else(|| CliError::Usage(format!("no element named `{}`", elem.trim())))?;
        pairs.retain(|(n, _)| n != name.trim());
        pairs.push((name.trim().to_string(), value));
    }
    let mut env = Env::new();
    let mut tests = BTreeSet::new();
    for (name, value) in pairs {
        let sort = if alg.is_test(&value) {
            tests.insert(name.clone());
            Sort::Test
        } else {
            Sort::Element
        };
        env.insert(name, value, sort);
    }
    Ok((env, tests))
}

fn eval_text(alg: &FiniteAlgebra, env: &Env<usize>, tests: &BTreeSet<String>, text: &str) -> Result<usize, CliError> {
    let term = parse_term(text, tests)?;
    Ok(eval(alg, &term, env)?)
}

fn cmd_eval(source: &ModelArgs, term: &str, binds: &[String]) -> Result<Report, CliError> {
    let (label, alg) = load_model(source)?;
    let (env, tests) = term_env(&alg, binds)?;
    let value = eval_text(&alg, &env, &tests, term)?;
    let name = alg.name(value).to_string();
    Ok(Report {
        holds: true,
        text: format!("model: {}\nterm: {term}\nvalue: {name}\n", describe(&label, &alg)),
        json: json!({ "command": "eval", "model": label, "term": term, "value": name }),
    })
}

fn cmd_check_phi(source: &ModelArgs) -> Result<Report, CliError> {
    let (label, alg) = load_model(source)?;
    let outcome = check_phi(&alg)?;
    let witness = outcome.witness.map(|(x, y, p, q)| {
        [("x", x), ("y", y), ("p", p), ("q", q)].map(|(k, v)| (k, alg.name(v).to_string()))
    });
    let mut text = format!(
        "model: {}\npremises checked: {}\nresult: {}\n",
        describe(&label, &alg),
        outcome.premises_checked,
        status(outcome.holds, "holds", "refuted")
    );
    if let Some(w) = &witness {
        let parts: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
        text.push_str(&format!("witness: {}\n", parts.join(" ")));
    }
    let wjson = witness.map(|w| w.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>());
    Ok(Report {
        holds: outcome.holds,
        text,
        json: json!({
            "command": "check-phi",
            "model": label,
            "holds": outcome.holds,
            "premises_checked": outcome.premises_checked,
            "witness": wjson,
        }),
    })
}

fn cmd_find_models(
    size: usize,
    profile: AxiomProfile,
    constraint: Option<ConstraintArg>,
    limit: Option<usize>,
    max_size: usize,
) -> Result<Report, CliError> {
    let constraint = constraint.map(|c| match c {
        ConstraintArg::PhiFails => Constraint::PhiFails,
        ConstraintArg::PhiHolds => Constraint::PhiHolds,
    });
    let mut models = Vec::new();
    for_each_model(size, profile, constraint, SearchConfig { max_size }, |m| {
        models.push(m);
        if limit.is_some_and(|l| models.len() >= l) {
            std::ops::ControlFlow::Break(())
        } else {
            std::ops::ControlFlow::Continue(())
        }
    })?;
    let constraint_name = match constraint {
        Some(Constraint::PhiFails) => "phi-fails",
        Some(Constraint::PhiHolds) => "phi-holds",
        None => "none",
    };
    let mut text = format!(
        "profile: {profile}\nsize: {size}\nconstraint: {constraint_name}\nmodels found: {}\n",
        models.len()
    );
    for (i, m) in models.iter().enumerate() {
        text.push_str(&format!("\n# model {}\n{}", i + 1, m.to_model_file()));
    }
    Ok(Report {
        holds: !models.is_empty(),
        text,
        json: json!({
            "command": "find-models",
            "profile": profile,
            "size": size,
            "constraint": constraint_name,
            "models": models.iter().map(FiniteAlgebra::to_model_file).collect::<Vec<_>>(),
        }),
    })
}

fn load_program_file(path: &Path) -> Result<ProgramFile, CliError> {
    ProgramFile::parse(&read(path)?).map_err(|e| CliError::File {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn cmd_vcgen(path: &Path, pre: &str, post: &str) -> Result<Report, CliError> {
    let file = load_program_file(path)?;
    let prog = file.program.as_ref().ok_or_else(|| CliError::File {
        path: path.display().to_string(),
        message: "no `program:` section".into(),
    })?;
    let b = &file.bindings;
    let pre_rel = b.eval_test(&TestExpr::parse(pre)?)?;
    let post_rel = b.eval_test(&TestExpr::parse(post)?)?;
    let report = vcgen(prog, &pre_rel, &post_rel, b)?;
    let semantic = triple(&pre_rel, &b.denote(prog)?, &post_rel)?;
    let records: Vec<VcRecord> = report.conditions.iter().map(VcRecord::from).collect();
    let mut text = format!(
        "program: {prog}\npre: {pre} = {pre_rel}\npost: {post} = {post_rel}\nprecondition: {}\n",
        report.precondition
    );
    for (i, r) in records.iter().enumerate() {
        let verdict = if r.holds {
            "holds".to_string()
        } else {
            format!("fails at {}", r.failing_states.join(" "))
        };
        text.push_str(&format!("vc {}: {}: {} <= {}: {verdict}\n", i + 1, r.description, r.lhs, r.rhs));
    }
    text.push_str(&format!("triple: {}\n", status(semantic, "holds", "fails")));
    text.push_str(&format!("result: {}\n", status(report.valid(), "valid", "invalid")));
    Ok(Report {
        holds: report.valid(),
        text,
        json: json!({
            "command": "vcgen",
            "program": prog.to_string(),
            "pre": pre_rel.to_string(),
            "post": post_rel.to_string(),
            "precondition": report.precondition.to_string(),
            "conditions": records,
            "triple_holds": semantic,
            "valid": report.valid(),
        }),
    })
}

struct SynthLine {
    method: Method,
    r: String,
    first: bool,
    second: bool,
}

fn synth_report(header: String, lines: Result<Vec<SynthLine>, HoareError>) -> Result<Report, CliError> {
    let lines = match lines {
        Ok(l) => l,
        Err(e @ HoareError::PremiseFails { .. }) => {
            return Ok(Report {
                holds: false,
                text: format!("{header}result: refuted ({e})\n"),
                json: json!({ "command": "synth-mid", "premise": false, "results": [] }),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let mut text = header;
    let holds = lines.iter().all(|l| l.first && l.second);
    for l in &lines {
        text.push_str(&format!(
            "{}: r = {}  {{p}}x{{r}}: {}  {{r}}y{{q}}: {}\n",
            l.method,
            l.r,
            status(l.first, "holds", "fails"),
            status(l.second, "holds", "fails")
        ));
    }
    text.push_str(&format!("result: {}\n", status(holds, "valid", "invalid")));
    let results: Vec<Value> = lines
        .iter()
        .map(|l| json!({ "method": l.method.to_string(), "r": l.r, "first": l.first, "second": l.second }))
        .collect();
    Ok(Report {
        holds,
        text,
        json: json!({ "command": "synth-mid", "premise": true, "results": results }),
    })
}

fn cmd_synth_rel(path: &Path, x: &str, y: &str, p: &str, q: &str, methods: &[Method]) -> Result<Report, CliError> {
    let file = load_program_file(path)?;
    let b: &Bindings = &file.bindings;
    let (xp, yp) = (Program::parse(x)?, Program::parse(y)?);
    let p = b.eval_test(&TestExpr::parse(p)?)?;
    let q = b.eval_test(&TestExpr::parse(q)?)?;
    let (xr, yr) = (b.denote(&xp)?, b.denote(&yp)?);
    let header = format!("x: {xp}\ny: {yp}\np: {p}\nq: {q}\n");
    let lines = methods
        .iter()
        .map(|&m| {
            let r = synth_mid_program(&xp, &yp, &p, &q, m, b)?;
            Ok(SynthLine {
                method: m,
                first: triple(&p, &xr, &r)?,
                second: triple(&r, &yr, &q)?,
                r: r.to_string(),
            })
        })
        .collect();
    synth_report(header, lines)
}

fn cmd_synth_model(source: &ModelArgs, x: &str, y: &str, p: &str, q: &str, methods: &[Method]) -> Result<Report, CliError> {
    let (label, alg) = load_model(source)?;
    let (env, tests) = term_env(&alg, &[])?;
    let [xv, yv, pv, qv] = [x, y, p, q].map(|t| eval_text(&alg, &env, &tests, t));
    let (xv, yv, pv, qv) = (xv?, yv?, pv?, qv?);
    let header = format!(
        "model: {}\nx: {}\ny: {}\np: {}\nq: {}\n",
        describe(&label, &alg),
        alg.name(xv),
        alg.name(yv),
        alg.name(pv),
        alg.name(qv)
    );
    let lines = methods
        .iter()
        .map(|&m| {
            let r = synth_mid_in(&alg, &xv, &yv, &pv, &qv, m)?;
            Ok(SynthLine {
                method: m,
                first: triple_in(&alg, &pv, &xv, &r)?,
                second: triple_in(&alg, &r, &yv, &qv)?,
                r: alg.name(r).to_string(),
            })
        })
        .collect();
    synth_report(header, lines)
}

fn demo_separation() -> Result<Report, CliError> {
    let lemma4 = lemma4_model();
    let kat = check_axioms(&lemma4, AxiomProfile::Kat)?;
    let phi4 = check_phi(&lemma4)?;
    let rel2 = Builtin::Rel2.algebra();
    let kad = check_axioms(&rel2, AxiomProfile::Kad)?;
    let phi2 = check_phi(&rel2)?;
    let witness = phi4
        .witness
        .map(|(x, y, p, q)| [x, y, p, q].map(|e| lemma4.name(e).to_string()));
    let separated = kat.passed && !phi4.holds && kad.passed && phi2.holds;
    let mut text = String::new();
    text.push_str(&format!(
        "step 1: lemma4 satisfies the KAT axioms: {}\n",
        status(kat.passed, "yes", "no")
    ));
    text.push_str(&format!(
        "step 2: phi in lemma4: {}{}\n",
        status(phi4.holds, "holds", "fails"),
        witness
            .as_ref()
            .map(|[x, y, p, q]| format!(" at x={x} y={y} p={p} q={q}"))
            .unwrap_or_default()
    ));
    text.push_str(&format!(
        "step 3: relations over 2 states satisfy the KAD axioms: {}\n",
        status(kad.passed, "yes", "no")
    ));
    text.push_str(&format!(
        "step 4: phi in relations over 2 states: {} ({} premises)\n",
        status(phi2.holds, "holds", "fails"),
        phi2.premises_checked
    ));
    if separated {
        text.push_str("summary: KAT ⊬ φ, AS ⊢ φ\n");
    } else {
        text.push_str("summary: separation not reproduced\n");
    }
    Ok(Report {
        holds: separated,
        text,
        json: json!({
            "command": "demo separation",
            "lemma4_kat": kat.passed,
            "lemma4_phi": phi4.holds,
            "lemma4_witness": witness,
            "rel2_kad": kad.passed,
            "rel2_phi": phi2.holds,
            "separated": separated,
        }),
    })
}

fn demo_nonexpressivity(set: &str, count: usize) -> Result<Report, CliError> {
    let c = EvPeriodicSet::parse(set)?;
    let mut text = format!("set: {c}\ncandidates: {count}\n");
    let mut rows = Vec::new();
    let mut all_sound = true;
    for (i, r) in candidates(&c)?.take(count).enumerate() {
        let verdict = refute_wlp_candidate(&c, &r)?;
        let sound = verdict_is_sound(&c, &r, &verdict);
        all_sound &= sound;
        text.push_str(&format!(
            "{}: {r}: {verdict}{}\n",
            i + 1,
            if sound { "" } else { " (UNSOUND)" }
        ));
        let (kind, witness, extension) = match &verdict {
            Verdict::NotAPrecondition(w) => ("not-a-precondition", *w, None),
            Verdict::NotMaximal { witness, extension } => ("not-maximal", *witness, Some(extension.to_string())),
        };
        rows.push(json!({
            "candidate": r.to_string(),
            "verdict": kind,
            "witness": witness,
            "extension": extension,
            "checked": sound,
        }));
    }
    text.push_str(&format!(
        "result: {}\n",
        status(all_sound, "every candidate refuted", "some verdict failed its check")
    ));
    Ok(Report {
        holds: all_sound,
        text,
        json: json!({ "command": "demo nonexpressivity", "set": c.to_string(), "candidates": rows, "refuted": all_sound }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Report, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("kad").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn lemma4_phi_witness() {
        let r = run_args(&["check-phi", "--builtin", "lemma4"]).unwrap();
        assert_eq!(r.exit_code(), 1);
        assert!(r.text.contains("witness: x=a y=a p=1 q=0"), "{}", r.text);
    }

    #[test]
    fn eval_with_element_names() {
        let r = run_args(&["eval", "--builtin", "lemma4", "1 ; a ; !0"]).unwrap();
        assert!(r.text.ends_with("value: a\n"));
        let r = run_args(&["eval", "--builtin", "rel2", "--bind", "x={(1,2)}", "a(x)"]).unwrap();
        assert!(r.text.ends_with("value: {(2,2)}\n"), "{}", r.text);
    }

    #[test]
    fn eval_errors() {
        assert!(matches!(
            run_args(&["eval", "--builtin", "lemma4", "a(a)"]),
            Err(CliError::Eval(EvalError::MissingOperation(_)))
        ));
        assert!(matches!(run_args(&["eval", "--builtin", "lemma4", "a +"]), Err(CliError::Parse(_))));
    }

    #[test]
    fn model_source_is_required() {
        assert!(Cli::try_parse_from(["kad", "check-phi"]).is_err());
        assert!(Cli::try_parse_from(["kad", "check-phi", "--builtin", "lemma4", "--model", "m.txt"]).is_err());
        assert!(Cli::try_parse_from(["kad", "check-axioms", "--builtin", "lemma4", "--profile", "bogus"]).is_err());
    }

    #[test]
    fn synth_in_table_model() {
        let r = run_args(&[
            "synth-mid", "--builtin", "rel2", "--x", "1", "--y", "1", "--p", "1", "--q", "1",
        ])
        .unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.text);
        let r = run_args(&["synth-mid", "--builtin", "boolean", "--x", "1", "--y", "1", "--p", "1", "--q", "0"]).unwrap();
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn separation_demo() {
        let r = run_args(&["demo", "separation"]).unwrap();
        assert!(r.holds);
        assert!(r.text.contains("KAT ⊬ φ, AS ⊢ φ"));
    }

    #[test]
    fn nonexpressivity_demo() {
        let r = run_args(&["demo", "nonexpressivity", "--set", "evens", "--candidates", "10"]).unwrap();
        assert!(r.holds);
        assert_eq!(r.json["candidates"].as_array().unwrap().len(), 10);
        assert!(matches!(
            run_args(&["demo", "nonexpressivity", "--set", "finite{1}"]),
            Err(CliError::Cofinite(CofiniteError::SetIsTest(_)))
        ));
    }
}
