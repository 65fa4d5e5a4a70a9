//! `obstrukt`: command-line front end for finite-group cohomology, cup and
//! Massey products, extensions and embedding problems.
//!
//! Every group is finite. A profinite group enters only through a finite
//! quotient: a continuous homomorphism to a finite group factors through one,
//! so finite instances carry all of the computable content.
//!
//! Exit status is 0 on success, 2 when a checked identity fails on some
//! instance, and 1 on malformed input or an exhausted search budget.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use obstrukt::abelian::FinAbGroup;
use obstrukt::cochain::{cohomology, CohomologyClass};
use obstrukt::corpus::{
    self, CorpusKind, DwyerCase, EmbeddingCase, SectionFormulaInstance, DEFAULT_SEED,
};
use obstrukt::embedding::{self, characters, dwyer_check, solve_with_budget};
use obstrukt::error::Error;
use obstrukt::extensions::{class_of_extension, SECTION_FORMULA_SIGN};
use obstrukt::groups::{node_budget, FiniteGroup, GroupHom};
use obstrukt::json::{build_action, parse, to_value, ActionSpec, CochainSpec, GroupSpec, HomSpec, ProblemSpec};
use obstrukt::products::{characters_as_cochains, cup_classes, massey_contains_zero, massey_product, CoeffPairing, MasseyZero};

#[derive(Parser, Debug)]
#[command(name = "obstrukt", version, about = "Cohomology, extensions and embedding problems for finite groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Node cap for homomorphism and defining-system searches; defaults to
    /// OBSTRUKT_BUDGET or 10^7.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Seed for sampled classes and generated corpora.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// H^n(G, M) as an abelian group.
    Cohomology {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        degree: usize,
    },
    /// Cup product of two classes or cocycles under the multiplication pairing.
    Cup {
        #[command(flatten)]
        module: ModuleArgs,
        /// `{"degree": p, "class": [..]}` or a cochain `{"degree": p, "entries": [..]}`.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Whether the mod-2 Massey product of characters is defined and contains 0.
    Massey {
        #[arg(long)]
        group: String,
        /// Indices into the list of characters (`0,2,2`) or a JSON array of
        /// element images per character.
        #[arg(long)]
        characters: String,
        /// Length of the product; a single character is repeated.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Solutions and obstruction class of an embedding problem.
    Solve {
        /// Problem JSON, inline or as a file path.
        #[arg(long, conflicts_with = "corpus")]
        problem: Option<String>,
        /// `default` or a corpus file from `emit-corpus embedding`.
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// Dwyer's criterion: Massey vanishing against the unipotent embedding problem.
    Dwyer {
        #[arg(long, requires = "characters", conflicts_with = "corpus")]
        base: Option<String>,
        #[arg(long)]
        characters: Option<String>,
        /// `default` or a corpus file from `emit-corpus dwyer`.
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// The section formula for the edge map on a corpus of extensions.
    #[command(name = "verify-cor65")]
    VerifySectionFormula {
        /// `default` or a corpus file from `emit-corpus extensions`.
        #[arg(long, default_value = "default")]
        corpus: String,
        /// Sign of the section-difference term; defaults to the pinned sign.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<i64>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// SL(2,5) over A5 pulled back along an involution.
    IcosahedralExample,
    /// Writes a generated corpus.
    EmitCorpus {
        /// extensions, dwyer or embedding.
        kind: String,
        #[arg(long)]
        size: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct ModuleArgs {
    /// Shorthand (`A5`, `Z2xZ2`, `SL2(5)`), inline JSON, or `@file`.
    #[arg(long)]
    group: String,
    /// Coefficient group: `Z2`, `Z2xZ4`, or `{"factors": [..]}`.
    #[arg(long, default_value = "Z2")]
    coeff: String,
    /// Action as `{"element": matrix}`; unlisted elements act trivially
    /// unless generated by listed ones.
    #[arg(long)]
    action: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SearchBudgetExceeded(_) | Error::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Report {
    body: Map<String, Value>,
    disagreement: bool,
}

impl Report {
    fn new(body: Value, disagreement: bool) -> Self {
        let Value::Object(body) = body else {
            unreachable!("reports are JSON objects")
        };
        Report { body, disagreement }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let budget = cli.common.budget.unwrap_or_else(node_budget);
    let outcome = run(&cli, budget).and_then(|mut r| {
        r.body.insert("seed".into(), json!(cli.common.seed));
        r.body.insert("budget".into(), json!(budget));
        let text = serde_json::to_string_pretty(&Value::Object(r.body)).expect("JSON values serialize") + "\n";
        match &cli.common.output {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(r.disagreement)
    });
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(Failure::Input(msg) | Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, budget: u64) -> CliResult<Report> {
    let seed = cli.common.seed;
    match &cli.command {
        Command::Cohomology { module, degree } => cohomology_cmd(module, *degree),
        Command::Cup { module, left, right } => cup_cmd(module, left, right),
        Command::Massey { group, characters, n } => massey_cmd(group, characters, *n, budget),
        Command::Solve { problem, corpus, size } => match (problem, corpus) {
            (Some(p), _) => solve_cmd(p, budget),
            (None, Some(c)) => solve_corpus(c, seed, *size),
            (None, None) => Err(Failure::Input("solve needs --problem or --corpus".into())),
        },
        Command::Dwyer {
            base,
            characters,
            corpus,
            size,
        } => match (base, characters, corpus) {
            (Some(b), Some(c), _) => dwyer_single(b, c, budget),
            (_, _, Some(c)) => dwyer_corpus(c, seed, *size, budget),
            _ => Err(Failure::Input("dwyer needs --base with --characters, or --corpus".into())),
        },
        Command::VerifySectionFormula { corpus, sign, size } => section_formula_cmd(corpus, *sign, *size, seed),
        Command::IcosahedralExample => icosahedral_cmd(),
        Command::EmitCorpus { kind, size } => {
            let kind: CorpusKind = kind.parse()?;
            Ok(Report::new(corpus::emit_corpus(kind, seed, *size)?, false))
        }
    }
}

// ---------------------------------------------------------------------------
// Argument decoding.

fn read_file(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
}

/// The JSON text behind an argument: `@file`, or inline text starting with
/// a JSON delimiter. `None` for anything else.
fn json_text(arg: &str) -> CliResult<Option<String>> {
    if let Some(path) = arg.strip_prefix('@') {
        return read_file(path).map(Some);
    }
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        return Ok(Some(arg.to_string()));
    }
    Ok(None)
}

/// Inline JSON, `@file`, or a plain file path.
fn json_or_path(arg: &str) -> CliResult<String> {
    match json_text(arg)? {
        Some(t) => Ok(t),
        None => read_file(arg),
    }
}

fn group_arg(arg: &str) -> CliResult<FiniteGroup> {
    let spec = match json_text(arg)? {
        Some(t) => parse::<GroupSpec>(&t)?,
        None => GroupSpec::from(arg),
    };
    Ok(spec.build()?)
}

fn coeff_arg(arg: &str) -> CliResult<FinAbGroup> {
    match json_text(arg)? {
        Some(t) => Ok(parse(&t)?),
        None => Ok(arg.parse()?),
    }
}

fn module_arg(m: &ModuleArgs) -> CliResult<(FiniteGroup, obstrukt::gmodule::GModule)> {
    let group = group_arg(&m.group)?;
    let coeff = coeff_arg(&m.coeff)?;
    let action: ActionSpec = match &m.action {
        Some(a) => parse(&json_or_path(a)?)?,
        None => ActionSpec::new(),
    };
    let module = build_action(&group, &coeff, &action)?;
    Ok((group, module))
}

fn characters_arg(base: &FiniteGroup, arg: &str) -> CliResult<Vec<GroupHom>> {
    if let Some(t) = json_text(arg)? {
        let images: Vec<Vec<usize>> = parse(&t)?;
        let case = DwyerCase {
            name: String::new(),
            base: GroupSpec::from_group(base),
            characters: images,
        };
        return Ok(case.build()?);
    }
    let all = characters(base)?;
    arg.split(',')
        .map(|s| {
            let i: usize = s
                .trim()
                .parse()
                .map_err(|_| Failure::Input(format!("character index '{s}' is not a number")))?;
            all.get(i).cloned().ok_or_else(|| {
                Failure::Input(format!("character index {i} out of range; {} has {} characters", base.label(), all.len()))
            })
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ClassInput {
    Class { degree: usize, class: Vec<i64> },
    Cochain(CochainSpec),
}

fn class_arg(module: &obstrukt::gmodule::GModule, arg: &str) -> CliResult<CohomologyClass> {
    let input: ClassInput = parse(&json_or_path(arg)?)?;
    Ok(match input {
        ClassInput::Class { degree, class } => cohomology(module, degree)?.class(&class)?,
        ClassInput::Cochain(spec) => {
            let c = spec.build(module)?;
            cohomology(module, spec.degree)?.class_of(&c)?
        }
    })
}

fn class_json(c: &CohomologyClass) -> Value {
    json!({
        "degree": c.degree(),
        "class": c.element(),
        "group": c.parent().group().factors(),
        "is_zero": c.is_zero(),
    })
}

fn corpus_text(arg: &str) -> CliResult<Option<String>> {
    if arg == "default" {
        return Ok(None);
    }
    json_or_path(arg).map(Some)
}

/// A corpus object `{"seed", "instances"}` or a bare array of instances.
fn corpus_instances<T: for<'de> Deserialize<'de>>(text: &str) -> CliResult<Vec<T>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Either<T> {
        Wrapped { instances: Vec<T> },
        Bare(Vec<T>),
    }
    Ok(match parse::<Either<T>>(text)? {
        Either::Wrapped { instances } | Either::Bare(instances) => instances,
    })
}

fn truncate<T>(mut v: Vec<T>, size: Option<usize>) -> Vec<T> {
    if let Some(n) = size {
        v.truncate(n);
    }
    v
}

// ---------------------------------------------------------------------------
// Commands.

fn cohomology_cmd(m: &ModuleArgs, degree: usize) -> CliResult<Report> {
    let (group, module) = module_arg(m)?;
    let h = cohomology(&module, degree)?;
    Ok(Report::new(
        json!({
            "group": group.label(),
            "group_order": group.order(),
            "coeff": module.coeff().factors(),
            "degree": degree,
            "order": h.order(),
            "invariants": h.group().factors(),
        }),
        false,
    ))
}

fn cup_cmd(m: &ModuleArgs, left: &str, right: &str) -> CliResult<Report> {
    let (_, module) = module_arg(m)?;
    let a = class_arg(&module, left)?;
    let b = class_arg(&module, right)?;
    let pr = CoeffPairing::multiplication(&module)?;
    let c = cup_classes(&a, &b, &pr)?;
    Ok(Report::new(
        json!({
            "left": class_json(&a),
            "right": class_json(&b),
            "cup": class_json(&c),
            "order": c.order(),
        }),
        false,
    ))
}

fn massey_status(r: &MasseyZero) -> &'static str {
    match r {
        MasseyZero::Contains(_) => "contains_zero",
        MasseyZero::Excludes => "excludes_zero",
        MasseyZero::BudgetExceeded => "budget_exceeded",
    }
}

fn massey_cmd(group: &str, chars: &str, n: Option<usize>, budget: u64) -> CliResult<Report> {
    let base = group_arg(group)?;
    let mut chars = characters_arg(&base, chars)?;
    if let Some(n) = n {
        if chars.len() == 1 {
            chars = vec![chars[0].clone(); n];
        } else if chars.len() != n {
            return Err(Failure::Input(format!("--n {n} but {} characters given", chars.len())));
        }
    }
    if chars.len() < 2 {
        return Err(Failure::Input("a Massey product needs at least two characters".into()));
    }
    let cochains = characters_as_cochains(&chars, 2)?;
    let result = massey_contains_zero(&cochains, budget)?;
    if let MasseyZero::BudgetExceeded = result {
        return Err(Failure::Budget(format!("Massey search exceeded {budget} nodes")));
    }
    let mut body = json!({
        "group": base.label(),
        "n": chars.len(),
        "characters": chars.iter().map(|c| c.images().to_vec()).collect::<Vec<_>>(),
        "status": massey_status(&result),
    });
    if let MasseyZero::Contains(ds) = &result {
        let entries: Vec<Value> = ds
            .entries()
            .into_iter()
            .map(|((i, j), c)| json!({"i": i, "j": j, "cochain": CochainSpec::from_cochain(c)}))
            .collect();
        body["witness"] = json!({
            "defining_system": entries,
            "product": class_json(&massey_product(ds)?),
        });
    }
    Ok(Report::new(body, false))
}

fn solve_cmd(problem: &str, budget: u64) -> CliResult<Report> {
    let spec: ProblemSpec = parse(&json_or_path(problem)?)?;
    let e = spec.build()?;
    let sols = solve_with_budget(&e, budget)?;
    let mut body = json!({
        "base_order": e.base().order(),
        "kernel_order": e.kernel().order(),
        "solvable": !sols.is_empty(),
        "solutions": sols.iter().map(|s| HomSpec::from_hom(s.representative())).collect::<Vec<_>>(),
    });
    let gamma = match embedding::gamma_of(&e) {
        Ok(g) => g,
        Err(Error::KernelNotAbelian) => {
            body["kernel_abelian"] = json!(false);
            return Ok(Report::new(body, false));
        }
        Err(x) => return Err(x.into()),
    };
    let c = class_of_extension(&gamma)?;
    let h1 = cohomology(gamma.module(), 1)?.order();
    let consistent = sols.is_empty() != c.is_zero() && (sols.is_empty() || sols.len() as u64 == h1);
    body["kernel_abelian"] = json!(true);
    body["obstruction"] = class_json(&c);
    body["h1_order"] = json!(h1);
    body["consistent"] = json!(consistent);
    Ok(Report::new(body, !consistent))
}

fn solve_corpus(arg: &str, seed: u64, size: Option<usize>) -> CliResult<Report> {
    let cases: Vec<EmbeddingCase> = match corpus_text(arg)? {
        None => corpus::embedding_corpus(seed, None).instances,
        Some(t) => corpus_instances(&t)?,
    };
    let cases = truncate(cases, size);
    let outcomes = cases
        .par_iter()
        .map(corpus::check_embedding)
        .collect::<Result<Vec<_>, _>>()?;
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
    Ok(Report::new(
        json!({
            "cases": outcomes.len(),
            "solvable": outcomes.iter().filter(|o| o.solutions > 0).count(),
            "failed": failed,
            "all_passed": failed.is_empty(),
            "instances": outcomes,
        }),
        !failed.is_empty(),
    ))
}

fn dwyer_single(base: &str, chars: &str, budget: u64) -> CliResult<Report> {
    let g = group_arg(base)?;
    let chars = characters_arg(&g, chars)?;
    let report = dwyer_check(&chars, budget)?;
    let agree = report
        .agree()
        .ok_or_else(|| Failure::Budget(format!("Dwyer check did not finish within {budget} nodes")))?;
    Ok(Report::new(
        json!({
            "base": g.label(),
            "characters": chars.iter().map(|c| c.images().to_vec()).collect::<Vec<_>>(),
            "massey_contains_zero": report.massey_contains_zero,
            "solvable": report.solvable,
            "agree": agree,
        }),
        !agree,
    ))
}

fn dwyer_corpus(arg: &str, seed: u64, size: Option<usize>, budget: u64) -> CliResult<Report> {
    let cases: Vec<DwyerCase> = match corpus_text(arg)? {
        None => corpus::dwyer_corpus(seed, None)?.instances,
        Some(t) => corpus_instances(&t)?,
    };
    let cases = truncate(cases, size);
    let outcomes = cases
        .par_iter()
        .map(|c| corpus::check_dwyer(c, budget))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(o) = outcomes.iter().find(|o| o.report.agree().is_none()) {
        return Err(Failure::Budget(format!("'{}' did not finish within {budget} nodes", o.name)));
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
    Ok(Report::new(
        json!({
            "cases": outcomes.len(),
            "solvable": outcomes.iter().filter(|o| o.report.solvable == Some(true)).count(),
            "failed": failed,
            "all_agree": failed.is_empty(),
            "instances": outcomes,
        }),
        !failed.is_empty(),
    ))
}

#[derive(Serialize)]
struct SignRecord {
    sign: i64,
    pinned: i64,
    formula: &'static str,
    /// Instances whose checks hold under one sign only.
    decided_by: Vec<String>,
    holds_with_plus: bool,
    holds_with_minus: bool,
}

fn section_formula_cmd(arg: &str, sign: Option<i64>, size: Option<usize>, seed: u64) -> CliResult<Report> {
    let sign = sign.unwrap_or(SECTION_FORMULA_SIGN);
    if sign != 1 && sign != -1 {
        return Err(Failure::Input(format!("sign must be 1 or -1, got {sign}")));
    }
    let instances: Vec<SectionFormulaInstance> = match corpus_text(arg)? {
        None => corpus::extension_corpus(seed, None).instances,
        Some(t) => corpus_instances(&t)?,
    };
    let instances = truncate(instances, size);
    let outcomes = instances
        .par_iter()
        .map(|inst| corpus::check_section_formula(inst, sign, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let record = SignRecord {
        sign,
        pinned: SECTION_FORMULA_SIGN,
        formula: "s1^*(c) - s2^*(c) = sign * [s1 - s2] ∪ delta(c)",
        decided_by: outcomes
            .iter()
            .filter(|o| (o.holds_with_plus == o.checks) != (o.holds_with_minus == o.checks))
            .map(|o| o.name.clone())
            .collect(),
        holds_with_plus: outcomes.iter().all(|o| o.holds_with_plus == o.checks),
        holds_with_minus: outcomes.iter().all(|o| o.holds_with_minus == o.checks),
    };
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
    Ok(Report::new(
        json!({
            "sign_convention": record,
            "instances": outcomes,
            "failed": failed,
            "all_passed": failed.is_empty(),
        }),
        !failed.is_empty(),
    ))
}

fn icosahedral_cmd() -> CliResult<Report> {
    let r = embedding::icosahedral_example()?;
    let expected = r.pulled_back_order == 4
        && r.pulled_back_cyclic
        && r.pulled_back_class.iter().any(|&x| x != 0)
        && r.witness.is_some();
    let mut body = to_value(&r);
    body["matches_expected"] = json!(expected);
    Ok(Report::new(body, !expected))
}
