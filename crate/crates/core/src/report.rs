//! End-to-end evaluation of a strategy, plus the reproduction table.

use std::fmt::{self, Display, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::judge::{classify_privacy, count_consistent, membership_counts, verify_proof, PrivacyReport, ProofVerdict};
use crate::metrics::{
    best_single_guess_from_counts, minimax_distribution, revealing_metrics, strategy6_asymptotic, strategy6_factor,
    CaseStructure, Pile, PlacementDistribution, RevealingMetrics, SingleGuess, MAX_MINIMAX_CASES,
};
use crate::rational::Rational;
use crate::search::{optimal_f2_new_possibilities, search_discreet, SearchOutcome};
use crate::strategies::{build_named, StrategyBundle};
use crate::weighmodel::{
    simulate_transcript, FakeSet, Outcome, ProblemInstance, Transcript, Weighing, WeighingPlan,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimaxGuess {
    pub distribution: PlacementDistribution,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessAnalysis {
    pub uniform: SingleGuess,
    pub minimax: Option<MinimaxGuess>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: ProblemInstance,
    pub strategy: String,
    pub transcript: Transcript,
    pub placement: FakeSet,
    pub verdict: ProofVerdict,
    /// Absent when the proof is invalid.
    pub privacy: Option<PrivacyReport>,
    /// Absent when no set of `f` fakes fits the transcript.
    pub metrics: Option<RevealingMetrics>,
    pub guess: Option<GuessAnalysis>,
}

impl RunReport {
    /// Runs the judge and metrics over a transcript. The minimax guess is
    /// only computed when a case structure is supplied and is small enough.
    pub fn evaluate(
        strategy: &str,
        instance: &ProblemInstance,
        transcript: Transcript,
        placement: FakeSet,
        cases: Option<&CaseStructure>,
    ) -> Result<RunReport> {
        transcript.validate()?;
        if transcript.plan.t != instance.t {
            return Err(Error::Argument(format!(
                "plan is over {} coins but t={}",
                transcript.plan.t, instance.t
            )));
        }
        let verdict = verify_proof(instance, &transcript, &placement)?;
        let privacy = if verdict.valid { Some(classify_privacy(instance, &transcript)?) } else { None };
        let (metrics, guess) = if verdict.consistent_count_f > 0 {
            let metrics = revealing_metrics(instance.t, instance.f, verdict.consistent_count_f)?;
            let counts = membership_counts(instance.t, instance.f, &transcript)?;
            let uniform = best_single_guess_from_counts(&counts, verdict.consistent_count_f)?;
            let minimax = match cases {
                Some(cs) if !cs.cases.is_empty() && cs.cases.len() <= MAX_MINIMAX_CASES => {
                    let (distribution, value) = minimax_distribution(cs)?;
                    Some(MinimaxGuess { distribution, value })
                }
                _ => None,
            };
            (Some(metrics), Some(GuessAnalysis { uniform, minimax }))
        } else {
            (None, None)
        };
        Ok(RunReport {
            instance: *instance,
            strategy: strategy.to_string(),
            transcript,
            placement,
            verdict,
            privacy,
            metrics,
            guess,
        })
    }

    pub fn from_bundle(bundle: &StrategyBundle) -> Result<RunReport> {
        RunReport::evaluate(
            &bundle.name,
            &bundle.instance,
            bundle.transcript()?,
            bundle.placement.clone(),
            Some(&bundle.cases),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Human-readable summary derived from the same fields as the JSON.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instance   {}  strategy {}", self.instance, self.strategy);
        let _ = writeln!(out, "weighings  {}", self.transcript.plan.len());
        for (w, o) in self.transcript.plan.weighings.iter().zip(&self.transcript.outcomes) {
            let _ = writeln!(out, "  {:?} vs {:?} -> {}", w.left, w.right, outcome_word(*o));
        }
        let _ = writeln!(
            out,
            "proof      {} (consistent with f: {}, with d: {})",
            if self.verdict.valid { "valid" } else { "INVALID" },
            self.verdict.consistent_count_f,
            self.verdict.consistent_count_d
        );
        match &self.privacy {
            Some(p) if p.discreet => {
                let _ = writeln!(out, "privacy    discreet");
            }
            Some(p) => {
                let _ = writeln!(
                    out,
                    "privacy    indiscreet: {} revealed real {:?}, {} revealed fake {:?}",
                    p.revealed_real.len(),
                    p.revealed_real,
                    p.revealed_fake.len(),
                    p.revealed_fake
                );
            }
            None => {
                let _ = writeln!(out, "privacy    n/a");
            }
        }
        if let Some(m) = &self.metrics {
            let _ = writeln!(
                out,
                "metrics    old {} new {} X {} ({}) R {} ({})",
                m.old_possibilities,
                m.new_possibilities,
                m.factor_x,
                m.x_display(),
                m.coefficient_r,
                m.r_display()
            );
        }
        if let Some(g) = &self.guess {
            let _ = writeln!(out, "guess      uniform: coin {} with {}", g.uniform.coin, g.uniform.prob);
            if let Some(mm) = &g.minimax {
                let p: Vec<String> = mm.distribution.probabilities.iter().map(|r| r.to_string()).collect();
                let _ = writeln!(out, "           minimax: {} with p = ({})", mm.value, p.join(", "));
            }
        }
        out
    }
}

fn outcome_word(o: Outcome) -> &'static str {
    match o {
        Outcome::Balanced => "balanced",
        Outcome::LeftLighter => "left lighter",
        Outcome::RightLighter => "right lighter",
    }
}

/// Input of `verify`: a plan, optionally its outcomes, and the placement.
/// `f` and `d` may come from the file or the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyInput {
    pub t: usize,
    #[serde(default)]
    pub f: Option<usize>,
    #[serde(default)]
    pub d: Option<usize>,
    pub weighings: Vec<Weighing>,
    #[serde(default)]
    pub outcomes: Option<Vec<Outcome>>,
    pub placement: FakeSet,
    #[serde(default)]
    pub cases: Option<Vec<Vec<Pile>>>,
}

pub fn parse_verify_input(bytes: &[u8]) -> Result<VerifyInput> {
    Ok(serde_json::from_slice(bytes)?)
}

impl VerifyInput {
    /// Resolves the instance; flags win over the file. `f` defaults to the
    /// placement size.
    pub fn instance(&self, f: Option<usize>, d: Option<usize>) -> Result<ProblemInstance> {
        let f = f.or(self.f).unwrap_or(self.placement.len());
        let d = d.or(self.d).ok_or_else(|| Error::Argument("the alternative count d is missing".into()))?;
        ProblemInstance::new(self.t, f, d)
    }

    /// The transcript to judge: given outcomes, or the ones the placement
    /// produces.
    pub fn transcript(&self) -> Result<Transcript> {
        let plan = WeighingPlan::new(self.t, self.weighings.clone())?;
        match &self.outcomes {
            Some(o) => Transcript::new(plan, o.clone()),
            None => {
                self.placement.check_range(self.t)?;
                simulate_transcript(&plan, &self.placement)
            }
        }
    }

    pub fn case_structure(&self) -> Result<Option<CaseStructure>> {
        match &self.cases {
            None => Ok(None),
            Some(cases) => {
                let cs = CaseStructure { t: self.t, cases: cases.clone() };
                cs.validate()?;
                Ok(Some(cs))
            }
        }
    }

    pub fn evaluate(&self, f: Option<usize>, d: Option<usize>) -> Result<RunReport> {
        let inst = self.instance(f, d)?;
        let cases = self.case_structure()?;
        RunReport::evaluate("custom", &inst, self.transcript()?, self.placement.clone(), cases.as_ref())
    }
}

impl From<&StrategyBundle> for VerifyInput {
    fn from(b: &StrategyBundle) -> Self {
        VerifyInput {
            t: b.instance.t,
            f: Some(b.instance.f),
            d: Some(b.instance.d),
            weighings: b.plan.weighings.clone(),
            outcomes: b.transcript().ok().map(|tr| tr.outcomes),
            placement: b.placement.clone(),
            cases: Some(b.cases.cases.clone()),
        }
    }
}

/// Input of `guess`: consistent sets are recomputed from the transcript;
/// a case structure adds the minimax analysis.
pub type GuessInput = VerifyInput;

/// One line of the reproduction table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproRow {
    pub group: String,
    pub check: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

pub const REPRO_GROUPS: [&str; 6] = ["counts", "metrics", "privacy", "guess", "search", "optimality"];

struct Rows {
    filter: Option<String>,
    rows: Vec<ReproRow>,
}

impl Rows {
    fn wants(&self, group: &str) -> bool {
        self.filter.as_deref().is_none_or(|f| f == group)
    }

    fn push(&mut self, group: &str, check: impl Into<String>, expected: impl Display, computed: impl Display) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        self.rows.push(ReproRow {
            group: group.into(),
            check: check.into(),
            pass: expected == computed,
            expected,
            computed,
        });
    }

    fn fail(&mut self, group: &str, check: impl Into<String>, expected: impl Display, err: &Error) {
        self.rows.push(ReproRow {
            group: group.into(),
            check: check.into(),
            expected: expected.to_string(),
            computed: format!("error: {err}"),
            pass: false,
        });
    }
}

struct Evaluated {
    bundle: StrategyBundle,
    report: RunReport,
}

fn evaluate_named(name: &str, t: usize, f: usize, d: usize, a: Option<usize>) -> Result<Evaluated> {
    let bundle = build_named(name, &ProblemInstance::new(t, f, d)?, a)?;
    let report = RunReport::from_bundle(&bundle)?;
    Ok(Evaluated { bundle, report })
}

fn revealed_real(r: &RunReport) -> String {
    r.privacy.as_ref().map_or("n/a".into(), |p| p.revealed_real.len().to_string())
}

fn discreet_word(r: &RunReport) -> &'static str {
    match &r.privacy {
        Some(p) if p.discreet => "discreet",
        Some(_) => "indiscreet",
        None => "invalid",
    }
}

fn x_at(r: &RunReport, places: u32) -> String {
    r.metrics.as_ref().map_or("n/a".into(), |m| m.factor_x.round_half_even(places))
}

fn r_at(r: &RunReport, places: u32) -> String {
    r.metrics.as_ref().map_or("n/a".into(), |m| m.coefficient_r.round_half_even(places))
}

fn uniform_guess(r: &RunReport) -> String {
    r.guess.as_ref().map_or("n/a".into(), |g| g.uniform.prob.to_string())
}

fn minimax_value(r: &RunReport) -> String {
    r.guess
        .as_ref()
        .and_then(|g| g.minimax.as_ref())
        .map_or("n/a".into(), |m| m.value.to_string())
}

/// Every published number the library reproduces, optionally restricted to
/// one group (see [`REPRO_GROUPS`]).
pub fn reproduce(filter: Option<&str>) -> Result<Vec<ReproRow>> {
    if let Some(f) = filter {
        if !REPRO_GROUPS.contains(&f) {
            return Err(Error::Argument(format!(
                "unknown group {f:?}, expected one of {}",
                REPRO_GROUPS.join(", ")
            )));
        }
    }
    let mut rows = Rows { filter: filter.map(String::from), rows: Vec::new() };
    let needs_strategies = ["counts", "metrics", "privacy", "guess"].iter().any(|g| rows.wants(g));
    if needs_strategies {
        strategy_rows(&mut rows);
    }
    if rows.wants("metrics") {
        asymptotic_rows(&mut rows);
    }
    if rows.wants("search") {
        search_rows(&mut rows);
    }
    if rows.wants("optimality") {
        optimality_rows(&mut rows);
    }
    Ok(rows.rows)
}

fn strategy_rows(rows: &mut Rows) {
    type Check = fn(&Evaluated) -> String;
    struct StrategyChecks {
        label: &'static str,
        name: &'static str,
        inst: (usize, usize, usize),
        a: Option<usize>,
        checks: Vec<(&'static str, &'static str, &'static str, Check)>,
    }
    let strategies = vec![
        StrategyChecks {
            label: "strategy 1 (80-2-1)",
            name: "equal-piles",
            inst: (80, 2, 1),
            a: Some(2),
            checks: vec![
                ("counts", "new possibilities", "1600", |e| e.report.verdict.consistent_count_f.to_string()),
                ("metrics", "X", "1.975", |e| x_at(&e.report, 3)),
                ("metrics", "R", "0.494", |e| r_at(&e.report, 3)),
                ("privacy", "privacy", "discreet", |e| discreet_word(&e.report).into()),
            ],
        },
        StrategyChecks {
            label: "strategy 2 (80-3-2)",
            name: "leftover-reveal",
            inst: (80, 3, 2),
            a: None,
            checks: vec![
                ("counts", "new possibilities", "16900", |e| e.report.verdict.consistent_count_f.to_string()),
                ("metrics", "X", "4.86", |e| x_at(&e.report, 2)),
                ("metrics", "R", "0.794", |e| r_at(&e.report, 3)),
                ("privacy", "revealed real coins", "3", |e| revealed_real(&e.report)),
                ("guess", "uniform best guess", "1/25", |e| uniform_guess(&e.report)),
            ],
        },
        StrategyChecks {
            label: "strategy 3 (80-3-2)",
            name: "reference-pile",
            inst: (80, 3, 2),
            a: None,
            checks: vec![
                ("counts", "new possibilities", "8000", |e| e.report.verdict.consistent_count_f.to_string()),
                ("metrics", "X", "10.27", |e| x_at(&e.report, 2)),
                ("privacy", "revealed real coins", "20", |e| revealed_real(&e.report)),
                ("guess", "uniform best guess", "1/20", |e| uniform_guess(&e.report)),
            ],
        },
        StrategyChecks {
            label: "strategy 4 (80-3-2)",
            name: "official",
            inst: (80, 3, 2),
            a: None,
            checks: vec![
                ("counts", "new possibilities", "8000", |e| e.report.verdict.consistent_count_f.to_string()),
                ("metrics", "X", "10.27", |e| x_at(&e.report, 2)),
                ("metrics", "R", "0.903", |e| r_at(&e.report, 3)),
                ("privacy", "privacy", "discreet", |e| discreet_word(&e.report).into()),
                ("guess", "uniform best guess", "1/20", |e| uniform_guess(&e.report)),
                ("guess", "minimax guess", "1/20", |e| minimax_value(&e.report)),
            ],
        },
        StrategyChecks {
            label: "strategy 5 (80-3-2)",
            name: "triple-case",
            inst: (80, 3, 2),
            a: None,
            checks: vec![
                ("counts", "pile sizes", "24,1,2,24,1,2,23,2,1", |e| pile_sizes(&e.bundle)),
                ("privacy", "privacy", "discreet", |e| discreet_word(&e.report).into()),
                ("guess", "minimax guess", "1/25", |e| minimax_value(&e.report)),
                ("guess", "minimax placement", "23/25,1/25,1/25", |e| {
                    e.report
                        .guess
                        .as_ref()
                        .and_then(|g| g.minimax.as_ref())
                        .map_or("n/a".into(), |m| {
                            m.distribution.probabilities.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
                        })
                }),
            ],
        },
        StrategyChecks {
            label: "strategy 6 (80-4-3, a=4)",
            name: "equal-piles",
            inst: (80, 4, 3),
            a: Some(4),
            checks: vec![
                ("counts", "new possibilities", "160000", |e| e.report.verdict.consistent_count_f.to_string()),
                ("metrics", "X", "9.9", |e| x_at(&e.report, 1)),
            ],
        },
        StrategyChecks {
            label: "strategy 6 (80-4-3, a=2)",
            name: "equal-piles",
            inst: (80, 4, 3),
            a: Some(2),
            checks: vec![
                ("counts", "new possibilities", "608400", |e| e.report.verdict.consistent_count_f.to_string()),
                ("metrics", "X", "2.60", |e| x_at(&e.report, 2)),
                ("metrics", "R", "0.615", |e| r_at(&e.report, 3)),
            ],
        },
    ];
    for entry in strategies {
        let wanted: Vec<_> = entry.checks.iter().filter(|c| rows.wants(c.0)).collect();
        if wanted.is_empty() {
            continue;
        }
        let (t, f, d) = entry.inst;
        match evaluate_named(entry.name, t, f, d, entry.a) {
            Ok(e) => {
                for (group, what, expected, check) in wanted {
                    rows.push(group, format!("{}: {what}", entry.label), expected, check(&e));
                }
            }
            Err(err) => {
                for (group, what, expected, _) in wanted {
                    rows.fail(group, format!("{}: {what}", entry.label), expected, &err);
                }
            }
        }
    }

    if rows.wants("guess") {
        for (t, f, d) in [(80usize, 3usize, 2usize), (100, 3, 2), (50, 4, 3)] {
            let expected = format!("1/{}", t / f - d.div_ceil(f));
            let check = format!("strategy 2* ({t}-{f}-{d}): uniform best guess");
            match evaluate_named("leftover-reveal", t, f, d, None) {
                Ok(e) => rows.push("guess", check, expected, uniform_guess(&e.report)),
                Err(err) => rows.fail("guess", check, expected, &err),
            }
        }
    }
}

fn pile_sizes(b: &StrategyBundle) -> String {
    // sizes listed as A1,B1,C1,A2,B2,C2,...
    let f = b.instance.f;
    let sizes = |case: usize| -> Vec<usize> {
        b.cases.cases.get(case).map_or(vec![], |c| c.iter().map(|p| p.coins.len()).collect())
    };
    let (a, bb, c) = (sizes(0), sizes(1), sizes(2));
    (0..f)
        .flat_map(|i| [a.get(i), bb.get(i), c.get(i)])
        .map(|s| s.map_or("?".into(), |s| s.to_string()))
        .collect::<Vec<_>>()
        .join(",")
}

fn asymptotic_rows(rows: &mut Rows) {
    for (t, f, a, expected) in [(80, 4, 4, "9.885"), (80, 4, 2, "2.600"), (80, 2, 2, "1.975")] {
        let check = format!("strategy 6 factor ({t}, {f}, a={a})");
        match strategy6_factor(t, f, a) {
            Ok(x) => rows.push("metrics", check, expected, x.round_half_even(3)),
            Err(e) => rows.fail("metrics", check, expected, &e),
        }
    }
    for (f, a, expected) in [(2, 2, "2.000"), (4, 4, "10.667"), (4, 2, "2.667")] {
        let check = format!("strategy 6 limit (f={f}, a={a})");
        match strategy6_asymptotic(f, a) {
            Ok(x) => rows.push("metrics", check, expected, format!("{x:.3}")),
            Err(e) => rows.fail("metrics", check, expected, &e),
        }
    }
}

fn search_rows(rows: &mut Rows) {
    for t in [3, 5, 7] {
        let check = format!("no discreet plan for ({t},2,1), up to 3 weighings");
        match search_discreet(t, 2, 1, 3) {
            Ok(SearchOutcome::Exhausted { .. }) => rows.push("search", check, "exhausted", "exhausted"),
            Ok(SearchOutcome::Found(w)) => rows.push("search", check, "exhausted", format!("witness {}", w.profile)),
            Err(e) => rows.fail("search", check, "exhausted", &e),
        }
    }
    let check = "discreet plan for (9,2,1), up to 2 weighings";
    match search_discreet(9, 2, 1, 2) {
        Ok(SearchOutcome::Found(w)) => rows.push("search", check, "found", verified_word(&w.bundle)),
        Ok(SearchOutcome::Exhausted { .. }) => rows.push("search", check, "found", "exhausted"),
        Err(e) => rows.fail("search", check, "found", &e),
    }
}

fn verified_word(b: &StrategyBundle) -> &'static str {
    match RunReport::from_bundle(b) {
        Ok(r) if r.verdict.valid && r.privacy.as_ref().is_some_and(|p| p.discreet) => "found",
        _ => "found but not discreet",
    }
}

fn optimality_rows(rows: &mut Rows) {
    for (t, expected) in [(80, "1600 (40,40)"), (9, "6 (2,1)(2,1)(2,1)")] {
        let check = format!("best two-against-one new possibilities, t={t}");
        match optimal_f2_new_possibilities(t) {
            Ok((v, dist)) => {
                let pairs: String = dist.canonical().pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
                rows.push("optimality", check, expected, format!("{v} {pairs}"));
            }
            Err(e) => rows.fail("optimality", check, expected, &e),
        }
    }
    // Strategy 1 attains the even optimum.
    let check = "strategy 1 attains the optimum at t=80";
    match (ProblemInstance::new(80, 2, 1), optimal_f2_new_possibilities(80)) {
        (Ok(inst), Ok((v, _))) => {
            let computed = build_named("equal-piles", &inst, Some(2))
                .and_then(|b| count_consistent(80, 2, &b.transcript()?))
                .map_or_else(|e| format!("error: {e}"), |c| c.to_string());
            rows.push("optimality", check, v, computed);
        }
        (Err(e), _) | (_, Err(e)) => rows.fail("optimality", check, "1600", &e),
    }
}

pub fn render_rows(rows: &[ReproRow]) -> String {
    let width = rows.iter().map(|r| r.check.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let _ = writeln!(
            out,
            "{} {:<10} {:<width$}  expected {:<24} computed {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.group,
            r.check,
            r.expected,
            r.computed
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let _ = writeln!(out, "{} rows, {} failed", rows.len(), failed);
    out
}

impl Display for ReproRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: expected {}, computed {}", self.group, self.check, self.expected, self.computed)
    }
}
