//! Command runners behind the `symdyn` binary.

use std::fmt;

use serde_json::json;
use symdyn_core::boolean_algebra::{modsat_boolean, modsat_matrix, Resolution, StoneDual};
use symdyn_core::config::{ConfigError, SystemConfig};
use symdyn_core::free_group::FreeGroup;
use symdyn_core::ideals::{
    check_ideal_lattice, check_matrix_units, check_property_star, check_property_starstar, check_psi, matrix_units, quotient_report, tail_class_sample, Psi,
    HULL_STEPS,
};
use symdyn_core::partial_action::{check_disjointness, check_partial_action_axioms};
use symdyn_core::representation::{
    verify_appendix_axiom_sets, verify_ck_relations, verify_crossed_product, verify_definition_relations, verify_lambda_phi, verify_lemmas,
    FiniteBasis, Representation,
};
use symdyn_core::{Algebra, PresentationKind, Report, ReportBuilder, ShiftError, Side, Verdict};

/// Suites accepted by `check`.
pub const SUITES: [&str; 8] = ["axioms", "definition", "appendix", "ck", "crossed", "lambda-phi", "stone", "modsat"];

/// Longest positive word used by the word-level relation checks.
const WORD_LEN: usize = 3;
/// Size of the random diagonal matrices in the modsat suite.
const MATRIX_SIZE: usize = 8;
const MODSAT_MAX_N: usize = 5;
/// Splice exponent bound for matrix units.
const SPLICE_BOUND: usize = 8;
/// Shifts of the left special sequence sampled for matrix units.
const UNIT_SHIFTS: usize = 2;
const KAPPA_SAMPLES: usize = 50;

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Shift(ShiftError),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Shift(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<ShiftError> for CliError {
    fn from(e: ShiftError) -> Self {
        CliError::Shift(e)
    }
}

impl CliError {
    /// A bounded search ran out is not an input error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Shift(ShiftError::Inconclusive { .. }) => 2,
            _ => 3,
        }
    }
}

/// Reports of one command, and a DOT graph when the command draws one.
#[derive(Debug, Default)]
pub struct Outcome {
    pub reports: Vec<Report>,
    pub dot: Option<String>,
}

impl Outcome {
    pub fn verdict(&self) -> Verdict {
        Report::combined_verdict(&self.reports)
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict() {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.reports).expect("reports serialize")
    }
}

/// Command-line values that replace configured bounds.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub depth: Option<usize>,
    pub resolution: Option<(usize, usize)>,
    pub radius: Option<usize>,
    pub coverage_floor: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, config: &mut SystemConfig) -> Result<(), ConfigError> {
        let b = &mut config.bounds;
        if let Some(s) = self.seed {
            b.seed = s;
        }
        if let Some(d) = self.depth {
            b.scan_depth = d;
        }
        if let Some((k, l)) = self.resolution {
            b.resolution = [k, l];
        }
        if let Some(r) = self.radius {
            b.radius = r;
        }
        if let Some(f) = self.coverage_floor {
            b.coverage_floor = f;
        }
        config.validate()
    }
}

/// Parse `K,L`.
pub fn parse_resolution(text: &str) -> Result<(usize, usize), String> {
    let (k, l) = text.split_once(',').ok_or_else(|| format!("expected K,L, got {text:?}"))?;
    let num = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    Ok((num(k)?, num(l)?))
}

fn one_sided(config: &SystemConfig) -> Result<Algebra, CliError> {
    if config.system.side != Side::OneSided {
        return Err(CliError::Usage("this command needs side = \"one-sided\"".into()));
    }
    Ok(config.algebra()?)
}

/// Presentation, factor counts and atom counts.
pub fn describe(config: &SystemConfig) -> Result<Outcome, CliError> {
    let alg = config.algebra()?;
    let pres = alg.presentation();
    let mut b = ReportBuilder::new("describe");
    b.param("alphabet", pres.alphabet().names().iter().collect::<String>())
        .param("kind", pres.kind_name())
        .param("side", json!(pres.side()));
    let counts = (1..=config.bounds.scan_depth).map(|n| pres.factors(n).map(|f| f.len())).collect::<Result<Vec<_>, _>>()?;
    b.metric("factor_counts", json!(counts));
    if let Some(s) = pres.memory() {
        b.metric("memory", s);
    }
    let r = config.bounds.resolution();
    let mut atoms = serde_json::Map::new();
    for k in 0..=r.k {
        for l in 0..=r.l {
            atoms.insert(format!("{k},{l}"), json!(alg.atoms(Resolution::new(k, l))?.len()));
        }
    }
    b.metric("atom_counts", serde_json::Value::Object(atoms));
    b.metric("exact", alg.is_exact());
    Ok(Outcome { reports: vec![b.finish(0.0)], dot: None })
}

fn basis_points(alg: &Algebra, config: &SystemConfig) -> Result<Vec<symdyn_core::Point>, CliError> {
    let pres = alg.presentation();
    let [q, p] = config.bounds.basis;
    if matches!(pres.kind(), PresentationKind::Substitution(_)) {
        return Ok(tail_class_sample(pres, 2 * q + p)?.1);
    }
    let q = if pres.side() == Side::TwoSided { 0 } else { q };
    Ok(pres.eventually_periodic_points(q, p)?)
}

fn representation<'a>(alg: &'a Algebra, config: &SystemConfig) -> Result<Representation<'a>, CliError> {
    let [q, p] = config.bounds.basis;
    let basis = match alg.side() {
        Side::OneSided => FiniteBasis::build(alg, q, p, config.bounds.closure_depth)?,
        Side::TwoSided => FiniteBasis::build(alg, 0, p, 0)?,
    };
    Ok(Representation::new(alg, basis))
}

/// Run the named verification suites.
pub fn check(config: &SystemConfig, suites: &[String]) -> Result<Outcome, CliError> {
    if suites.is_empty() {
        return Err(CliError::Usage(format!("no suite given; choose from {}", SUITES.join(", "))));
    }
    if let Some(bad) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(CliError::Usage(format!("unknown suite {bad:?}; choose from {}", SUITES.join(", "))));
    }
    let alg = config.algebra()?;
    let b = &config.bounds;
    let floor = b.coverage_floor;
    let mut out = Outcome::default();
    for suite in suites {
        match suite.as_str() {
            "axioms" => {
                let points = basis_points(&alg, config)?;
                let ball = FreeGroup::new(alg.presentation().rank()).ball(b.radius);
                out.reports.push(check_partial_action_axioms(alg.action(), &ball, &points, floor)?);
                out.reports.push(check_disjointness(alg.action(), WORD_LEN, &points, floor)?);
            }
            "definition" => {
                let rep = representation(&alg, config)?;
                out.reports.push(verify_definition_relations(&rep, b.radius, floor)?);
                out.reports.push(verify_lemmas(&rep, b.radius, b.samples, b.seed, floor)?);
            }
            "appendix" => out.reports.push(verify_appendix_axiom_sets(&representation(&alg, config)?, b.radius, floor)?),
            "ck" => out.reports.push(verify_ck_relations(&representation(&alg, config)?, true, WORD_LEN, floor)?),
            "crossed" => out.reports.push(verify_crossed_product(&representation(&alg, config)?, b.radius, floor)?),
            "lambda-phi" => out.reports.push(verify_lambda_phi(&representation(&alg, config)?, b.radius, b.samples, b.seed, floor)?),
            "stone" => {
                let dual = StoneDual::build(&alg, b.resolution())?;
                out.reports.push(dual.check_separation());
                out.reports.push(dual.check_iso(&alg, b.samples, b.seed)?);
                out.dot = Some(dual.to_dot(alg.presentation().alphabet().names()));
            }
            "modsat" => {
                out.reports.push(modsat_matrix(MODSAT_MAX_N, b.samples, MATRIX_SIZE, b.seed));
                out.reports.push(modsat_boolean(&alg, b.resolution(), MODSAT_MAX_N, b.samples, b.seed)?);
            }
            _ => unreachable!("suite names were validated"),
        }
    }
    Ok(out)
}

/// The lattice of invariant admissible sets, with the quotient check for
/// each of its elements.
pub fn ideals(config: &SystemConfig) -> Result<Outcome, CliError> {
    let alg = config.algebra()?;
    let b = &config.bounds;
    let (report, lattice) = check_ideal_lattice(&alg, b.resolution(), HULL_STEPS, b.coverage_floor)?;
    let mut reports = vec![report];
    for cert in &lattice.sets {
        reports.push(quotient_report(&alg, cert, b.radius, b.coverage_floor)?);
    }
    Ok(Outcome { reports, dot: Some(lattice.to_dot(alg.presentation().alphabet().names())) })
}

/// Left special ledger and properties (*) and (**).
pub fn special(config: &SystemConfig) -> Result<Outcome, CliError> {
    let pres = config.presentation()?;
    let b = &config.bounds;
    let (mut report, ledger) = check_property_starstar(&pres, b.star_length, b.scan_depth, b.witness_bound)?;
    let candidates: Vec<_> = ledger
        .candidates
        .iter()
        .map(|c| json!({ "word": pres.alphabet().render(&c.word), "class": c.class, "periodic": c.periodic }))
        .collect();
    report.metrics.insert("candidates".into(), json!(candidates));
    Ok(Outcome { reports: vec![report], dot: None })
}

/// The map from one-sided to two-sided Boolean algebras.
pub fn psi(config: &SystemConfig) -> Result<Outcome, CliError> {
    let one = config.algebra_on(Side::OneSided)?;
    let two = config.algebra_on(Side::TwoSided)?;
    let b = &config.bounds;
    let r = b.resolution();
    let level = r.l.max(1);
    // ψ is only defined under property (*); report its failure instead.
    let star = check_property_star(one.presentation(), level, b.witness_bound)?;
    if !star.passed() {
        return Ok(Outcome { reports: vec![star], dot: None });
    }
    let map = Psi::new(&one, &two, level)?;
    let report = check_psi(&map, r, b.samples, KAPPA_SAMPLES, b.seed, b.coverage_floor)?;
    Ok(Outcome { reports: vec![star, report], dot: None })
}

/// Matrix units on the tail class of the left special sequence.
pub fn units(config: &SystemConfig) -> Result<Outcome, CliError> {
    let alg = one_sided(config)?;
    let (_, sample) = tail_class_sample(alg.presentation(), UNIT_SHIFTS)?;
    let system = matrix_units(&alg, sample, SPLICE_BOUND, config.bounds.max_k)?;
    let report = check_matrix_units(&alg, &system, config.bounds.max_k, config.bounds.coverage_floor)?;
    Ok(Outcome { reports: vec![report], dot: None })
}
