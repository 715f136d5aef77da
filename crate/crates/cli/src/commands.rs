use crate::error::CliError;
use crate::Common;
use condmodel::analysis::{argmin as solve, bw_subsequence, limsup, CondSequence, Expr, Scenario, Selection};
use condmodel::eval::axioms::{axiom_suite, AxiomReport};
use condmodel::eval::report::{TruthReport, SCHEMA};
use condmodel::eval::sequent::{check_rule, Counterexample, Rule, RuleInstance};
use condmodel::formula::parse_file;
use condmodel::laws::{boolean_laws as laws, LawReport};
use condmodel::measure::SpaceConfig;
use condmodel::numio::parse_rational;
use condmodel::sample::{AssignmentShape, FormulaShape};
use condmodel::{Assignment, Bounds, CondNat, CondReal, MeasureSpace, Sampler};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

/// Counterexamples kept per rule in the report.
const MAX_COUNTEREXAMPLES: usize = 5;
const MAX_HORIZON: u64 = 1 << 20;

pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    pub instances: usize,
    pub atoms: usize,
    pub universe: u32,
    pub ternary_universe: u32,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

fn space(common: &Common, default_atoms: Option<usize>) -> Result<MeasureSpace, CliError> {
    match (&common.space, default_atoms) {
        (Some(path), _) => MeasureSpace::load(path).map_err(CliError::config),
        (None, Some(k)) => MeasureSpace::uniform(k).map_err(CliError::config),
        (None, None) => Err(CliError::config("--space is required")),
    }
}

fn bounds(common: &Common, default: (u64, u32)) -> Result<Bounds, CliError> {
    let (b, bs) = match &common.bounds {
        None => default,
        Some(text) => {
            let bad = || CliError::config(format!("--bounds `{text}`: expected B,Bset"));
            let (b, bs) = text.split_once(',').ok_or_else(bad)?;
            (b.trim().parse().map_err(|_| bad())?, bs.trim().parse().map_err(|_| bad())?)
        }
    };
    Bounds::new(b, bs).map_err(CliError::config)
}

fn emit<T: Serialize>(common: &Common, report: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::config(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct EvalEntry {
    line: usize,
    #[serde(flatten)]
    outcome: EvalOutcome,
}

#[derive(Serialize)]
#[serde(untagged)]
enum EvalOutcome {
    Report(TruthReport),
    Error { formula: String, error: String },
}

#[derive(Serialize)]
struct EvalReport {
    schema: &'static str,
    command: &'static str,
    space: SpaceConfig,
    bounds: Bounds,
    formulas: Vec<EvalEntry>,
}

pub fn eval(common: &Common, assign: Option<&Path>, formulas: &Path) -> Result<bool, CliError> {
    let space = space(common, None)?;
    let bounds = bounds(common, (4, 4))?;
    let beta = match assign {
        Some(path) => Assignment::from_json(&space, &read(path)?).map_err(CliError::config)?,
        None => Assignment::new(&space),
    };
    let parsed = parse_file(&read(formulas)?).map_err(|e| CliError::syntax(formulas, &e))?;
    let mut ok = true;
    let mut entries = Vec::with_capacity(parsed.len());
    for item in parsed {
        let outcome = match TruthReport::build(&item.formula, &space, &beta, bounds) {
            Ok(r) => {
                eprintln!("line {}: {} on {} (measure {})", item.line, r.formula, r.event, r.measure);
                EvalOutcome::Report(r)
            }
            Err(e) => {
                ok = false;
                eprintln!("line {}: {e}", item.line);
                EvalOutcome::Error { formula: item.formula.to_string(), error: e.to_string() }
            }
        };
        entries.push(EvalEntry { line: item.line, outcome });
    }
    let report = EvalReport { schema: SCHEMA, command: "eval", space: space.to_config(), bounds, formulas: entries };
    emit(common, &report)?;
    Ok(ok)
}

#[derive(Serialize)]
struct SuiteReport<T> {
    schema: &'static str,
    command: &'static str,
    suite: &'static str,
    seed: u64,
    passed: bool,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct AxiomBody {
    space: SpaceConfig,
    bounds: Bounds,
    report: AxiomReport,
}

pub fn axioms(common: &Common, opts: &SuiteOptions) -> Result<bool, CliError> {
    let space = space(common, Some(2))?;
    let bounds = bounds(common, (4, 5))?;
    let mut sampler = Sampler::new(opts.seed);
    let report = axiom_suite(&space, bounds, &mut sampler, opts.trials).map_err(CliError::eval)?;
    let passed = report.passed();
    if passed {
        eprintln!("all axioms Ω: {} checks on {} sampled assignments", report.checks.len(), opts.trials);
    } else {
        eprintln!("{} axiom evaluations fell short of Ω", report.failures.len());
    }
    let body = AxiomBody { space: space.to_config(), bounds, report };
    emit(common, &SuiteReport { schema: SCHEMA, command: "suite", suite: "axioms", seed: opts.seed, passed, body })?;
    Ok(passed)
}

#[derive(Serialize)]
struct RuleSummary {
    rule: &'static str,
    instances: usize,
    gated: usize,
    trials: usize,
    premises_correct: usize,
    out_of_domain: usize,
    failures: usize,
    counterexamples: Vec<Counterexample>,
}

#[derive(Serialize)]
struct RulesBody {
    space: SpaceConfig,
    bounds: Bounds,
    rules: Vec<RuleSummary>,
}

pub fn rules(common: &Common, opts: &SuiteOptions) -> Result<bool, CliError> {
    let space = space(common, Some(2))?;
    let bounds = bounds(common, (3, 3))?;
    let mut sampler = Sampler::new(opts.seed);
    let shape = FormulaShape { max_depth: 2, max_quantifiers: 1, ..FormulaShape::new(&["y", "z"], &["Y"]) };
    let values = AssignmentShape { num_below: 2 * bounds.num(), set_universe: bounds.set(), cofinite: 0.2 };
    let mut summaries = Vec::with_capacity(Rule::ALL.len());
    for rule in Rule::ALL {
        let mut s = RuleSummary {
            rule: rule.name(),
            instances: opts.instances,
            gated: 0,
            trials: 0,
            premises_correct: 0,
            out_of_domain: 0,
            failures: 0,
            counterexamples: Vec::new(),
        };
        for _ in 0..opts.instances {
            let inst = RuleInstance::random(rule, &mut sampler, &shape);
            let r = check_rule(&inst, &mut sampler, &values, space.atom_count(), opts.trials, bounds)
                .map_err(CliError::eval)?;
            s.gated += usize::from(r.gated.is_some());
            s.trials += r.trials;
            s.premises_correct += r.premises_correct;
            s.out_of_domain += r.out_of_domain;
            s.failures += r.counterexamples.len();
            let room = MAX_COUNTEREXAMPLES.saturating_sub(s.counterexamples.len());
            s.counterexamples.extend(r.counterexamples.into_iter().take(room));
        }
        eprintln!(
            "{}: {} trials, {} with correct premises, {} failures",
            s.rule, s.trials, s.premises_correct, s.failures
        );
        summaries.push(s);
    }
    let passed = summaries.iter().all(|s| s.failures == 0);
    let body = RulesBody { space: space.to_config(), bounds, rules: summaries };
    emit(common, &SuiteReport { schema: SCHEMA, command: "suite", suite: "rules", seed: opts.seed, passed, body })?;
    Ok(passed)
}

#[derive(Serialize)]
struct LawsBody {
    ternary_universe: u32,
    reports: Vec<LawReport>,
}

pub fn boolean_laws(common: &Common, opts: &SuiteOptions) -> Result<bool, CliError> {
    if !(1..=4).contains(&opts.atoms) || !(1..=6).contains(&opts.universe) || opts.ternary_universe > opts.universe {
        return Err(CliError::config("boolean-laws needs 1 ≤ atoms ≤ 4 and 1 ≤ ternary universe ≤ universe ≤ 6"));
    }
    let reports: Vec<LawReport> = (1..=opts.atoms)
        .map(|k| {
            // one-atom spaces are cheap enough for the full ternary check
            let ternary = if k == 1 { opts.universe } else { opts.ternary_universe };
            laws(k, opts.universe, ternary)
        })
        .collect();
    let passed = reports.iter().all(LawReport::passed);
    for r in &reports {
        let failures: u64 = r.laws.values().map(|c| c.failures).sum();
        eprintln!("k={}: {} sets, {} law instances, {} failures", r.atoms, r.sets, r.checks(), failures);
    }
    let body = LawsBody { ternary_universe: opts.ternary_universe, reports };
    let report = SuiteReport { schema: SCHEMA, command: "suite", suite: "boolean-laws", seed: opts.seed, passed, body };
    emit(common, &report)?;
    Ok(passed)
}

#[derive(Serialize)]
struct ArgminReport {
    schema: &'static str,
    command: &'static str,
    selection: Selection,
}

pub fn argmin(common: &Common, scenario: &Path) -> Result<bool, CliError> {
    let atoms = match &common.space {
        Some(_) => Some(space(common, None)?.atom_count()),
        None => None,
    };
    let table = Scenario::load(scenario).map_err(CliError::analysis)?;
    let (w, f) = table.build(atoms).map_err(CliError::analysis)?;
    let selection = solve(&w, &f).map_err(CliError::analysis)?;
    eprintln!("minimum {} on {} atoms", serde_json::to_string(&selection.value).expect("serializes"), w.atom_count());
    emit(common, &ArgminReport { schema: SCHEMA, command: "argmin", selection })?;
    Ok(true)
}

/// `{"terms": ["(-1)^x", "1/(x+1)"], "target": ["1", "0"], "eps": ["1/2", "1/4"],
///   "horizon": 1000, "window": 100, "bound": ["1", "1"]}`; terms read the
/// index as `x`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceFile {
    terms: Vec<String>,
    target: Vec<String>,
    eps: Vec<String>,
    horizon: u64,
    #[serde(default)]
    window: Option<u64>,
    #[serde(default)]
    bound: Option<Vec<String>>,
}

#[derive(Serialize)]
struct BwReport {
    schema: &'static str,
    command: &'static str,
    horizon: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    limsup: Option<CondReal>,
    indices: Vec<CondNat>,
}

fn rationals(field: &str, texts: &[String]) -> Result<Vec<BigRational>, CliError> {
    texts
        .iter()
        .map(|t| parse_rational(t).ok_or_else(|| CliError::scenario(format!("{field}: `{t}` is not a rational"))))
        .collect()
}

pub fn bw(common: &Common, sequence: &Path) -> Result<bool, CliError> {
    let file: SequenceFile = serde_json::from_str(&read(sequence)?)
        .map_err(|e| CliError::scenario(format!("{}: {e}", sequence.display())))?;
    let k = file.terms.len();
    if let Some(path) = &common.space {
        let n = MeasureSpace::load(path).map_err(CliError::config)?.atom_count();
        if n != k {
            return Err(CliError::config(format!("sequence has {k} atoms, space has {n}")));
        }
    }
    if file.horizon == 0 || file.horizon > MAX_HORIZON {
        return Err(CliError::scenario(format!("horizon must lie in 1..={MAX_HORIZON}")));
    }
    if file.target.len() != k || file.bound.as_ref().is_some_and(|b| b.len() != k) {
        return Err(CliError::scenario(format!("target and bound need one entry per term ({k})")));
    }
    let target = rationals("target", &file.target)?;
    let eps = rationals("eps", &file.eps)?;
    // terms are tabulated up front so evaluation errors surface here
    let mut generators = Vec::with_capacity(k);
    for (a, text) in file.terms.iter().enumerate() {
        let expr = Expr::parse(text).map_err(|e| CliError::scenario(format!("term {a}: {e}")))?;
        let table: Vec<BigRational> = (0..file.horizon)
            .map(|i| {
                expr.eval(&[BigRational::from_integer(i.into())])
                    .map_err(|e| CliError::scenario(format!("term {a} at index {i}: {e}")))
            })
            .collect::<Result<_, _>>()?;
        let table = Arc::new(table);
        generators.push(move |i: u64| table[i as usize].clone());
    }
    let seq = CondSequence::from_fns(generators);
    let limsup = match &file.bound {
        Some(bound) => {
            let bound = CondReal::from_values(rationals("bound", bound)?);
            let window = file.window.unwrap_or(file.horizon.div_ceil(10));
            Some(limsup(&seq, file.horizon, window, &bound).map_err(CliError::analysis)?)
        }
        None => None,
    };
    let indices = bw_subsequence(&seq, &target, &eps, file.horizon).map_err(CliError::analysis)?;
    eprintln!("{} indices at every one of {k} atoms", indices.len());
    emit(common, &BwReport { schema: SCHEMA, command: "bw", horizon: file.horizon, limsup, indices })?;
    Ok(true)
}
