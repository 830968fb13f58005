//! Command-line front end: `ball`, `triple`, `classc`, `homogenize`, `classify`.
//!
//! Exit codes: 0 pass, 1 check failure, 2 resource limit, 3 unsupported
//! (finite-group homogenization), 64 usage.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{
    enumerate_ball, export_json, geodesic_counts, BallBudget, BallTable, CayleyError,
    GeodesicCounts,
};
use crate::clifford::CliffordRep;
use crate::dirac::{
    class_c_estimate, derivation_table, heat_trace, index_d_plus, phase_field,
    resolvent_growth_check, spectrum, square_check, DerivationTable, DiracError, TruncatedDirac,
    DEFAULT_MAX_DIM,
};
use crate::group::{
    build_oracle, parse_group, CompletionBudget, Element, GroupError, GroupOracle, GroupSpec,
    Letter,
};
use crate::homogenize::{
    assemble_homogenized_dirac, classify, default_grid, homogenized_derivations, require_infinite,
    required_radius, validate_growth_function, ClassifyOptions, GrowthFunction, HomogenizeError,
    SphereMeasure,
};
use crate::rational::{ratio_string, Rational};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "spectral-groups",
    version,
    about = "Truncated spectral triples on Cayley graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Enumerate a ball and export path counts.
    Ball,
    /// Assemble the truncated Dirac operator and run its checks.
    Triple,
    /// Class-C evidence for sample elements.
    Classc,
    /// Homogenized derivations and Dirac checks for one growth function.
    Homogenize,
    /// Translation-invariance experiments over a family of growth functions.
    Classify,
}

#[derive(Debug, Clone, Default, Args)]
struct Opts {
    /// Group: Z, Z2, F2, C6, B(2,1), products with `x` and `*`, or `<a,b | aba B>`.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Ball radius N.
    #[arg(long, global = true)]
    radius: Option<usize>,
    /// Growth function: zero, log, default, linear:c, blend:l, power:p, table:x:y,…
    #[arg(long = "f", global = true)]
    f: Vec<String>,
    /// Heat-trace parameter; repeatable.
    #[arg(long = "t", global = true, allow_negative_numbers = true)]
    t: Vec<f64>,
    /// Sample element as a word (`e` for the identity); repeatable.
    #[arg(long = "g", global = true)]
    g: Vec<String>,
    /// Output directory; reports go to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    budget_elements: Option<usize>,
    #[arg(long, global = true)]
    budget_seconds: Option<f64>,
    /// Largest operator dimension 2^{2d}·|B^N| to assemble.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Seed for sampling elements.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// key=value file; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

/// Resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub group: String,
    pub radius: usize,
    pub f: Vec<String>,
    pub t: Vec<f64>,
    pub g: Vec<String>,
    pub out: Option<PathBuf>,
    pub budget: BallBudget,
    pub max_dim: usize,
    pub seed: u64,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        let code = match e {
            GroupError::CompletionExceeded { .. } => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<CayleyError> for CliError {
    fn from(e: CayleyError) -> Self {
        let code = match e {
            CayleyError::NotInBall(_) => EXIT_USAGE,
            _ => EXIT_RESOURCE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DiracError> for CliError {
    fn from(e: DiracError) -> Self {
        let code = match e {
            DiracError::NonPositiveT(_) => EXIT_USAGE,
            _ => EXIT_RESOURCE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<HomogenizeError> for CliError {
    fn from(e: HomogenizeError) -> Self {
        match e {
            HomogenizeError::EmptySphere(_) | HomogenizeError::FiniteGroup => CliError {
                code: EXIT_UNSUPPORTED,
                message: e.to_string(),
            },
            HomogenizeError::InvalidFunction(_) => usage(e.to_string()),
            HomogenizeError::Dirac(d) => d.into(),
            HomogenizeError::Cayley(c) => c.into(),
            HomogenizeError::MarginInsufficient { .. } => CliError {
                code: EXIT_RESOURCE,
                message: e.to_string(),
            },
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_RESOURCE,
        message: format!("{}: {e}", path.display()),
    }
}

/// Reads `key=value` lines; `#` starts a comment. List keys (`f`, `t`, `g`)
/// may repeat.
pub fn read_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| usage(format!("invalid value for {key}: {value:?}")))
}

fn resolve(opts: Opts) -> Result<RunConfig, CliError> {
    let mut base = Opts::default();
    if let Some(path) = &opts.config {
        let text =
            std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        for (k, v) in read_config(&text)? {
            match k.as_str() {
                "group" => base.group = Some(v),
                "radius" => base.radius = Some(parse_value(&k, &v)?),
                "f" => base.f.push(v),
                "t" => base.t.push(parse_value(&k, &v)?),
                "g" => base.g.push(v),
                "out" => base.out = Some(PathBuf::from(v)),
                "budget-elements" => base.budget_elements = Some(parse_value(&k, &v)?),
                "budget-seconds" => base.budget_seconds = Some(parse_value(&k, &v)?),
                "max-dim" => base.max_dim = Some(parse_value(&k, &v)?),
                "seed" => base.seed = Some(parse_value(&k, &v)?),
                _ => return Err(usage(format!("unknown config key {k:?}"))),
            }
        }
    }
    let pick_list =
        |flag: Vec<String>, file: Vec<String>| if flag.is_empty() { file } else { flag };
    let t = if opts.t.is_empty() { base.t } else { opts.t };
    let config = RunConfig {
        group: opts
            .group
            .or(base.group)
            .ok_or_else(|| usage("--group is required"))?,
        radius: opts.radius.or(base.radius).unwrap_or(3),
        f: pick_list(opts.f, base.f),
        t: if t.is_empty() { vec![1.0] } else { t },
        g: pick_list(opts.g, base.g),
        out: opts.out.or(base.out),
        budget: BallBudget {
            max_elements: opts
                .budget_elements
                .or(base.budget_elements)
                .unwrap_or(BallBudget::default().max_elements),
            max_seconds: opts.budget_seconds.or(base.budget_seconds),
        },
        max_dim: opts.max_dim.or(base.max_dim).unwrap_or(DEFAULT_MAX_DIM),
        seed: opts.seed.or(base.seed).unwrap_or(0),
    };
    if config.budget.max_elements == 0 || config.max_dim == 0 {
        return Err(usage("budgets must be positive"));
    }
    if let Some(s) = config.budget.max_seconds {
        if s.is_nan() || s <= 0.0 {
            return Err(usage("--budget-seconds must be positive"));
        }
    }
    if let Some(&t) = config.t.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(usage(format!("--t must be positive, got {t}")));
    }
    Ok(config)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match resolve(cli.opts).and_then(|config| execute(cli.command, &config)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

fn execute(command: Command, config: &RunConfig) -> Result<i32, CliError> {
    let spec = parse_group(&config.group)?;
    let oracle = build_oracle(&spec, &CompletionBudget::default())?;
    let oracle = oracle.as_ref();
    let outputs = match command {
        Command::Ball => cmd_ball(oracle, config)?,
        Command::Triple => cmd_triple(oracle, config)?,
        Command::Classc => cmd_classc(oracle, &spec, config)?,
        Command::Homogenize => cmd_homogenize(oracle, config)?,
        Command::Classify => cmd_classify(oracle, config)?,
    };
    emit(config, &outputs.files)?;
    Ok(outputs.code)
}

struct Outputs {
    files: Vec<(&'static str, String)>,
    code: i32,
}

fn emit(config: &RunConfig, files: &[(&str, String)]) -> Result<(), CliError> {
    match &config.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            for (name, body) in files {
                let path = dir.join(name);
                std::fs::write(&path, body).map_err(|e| io_error(&path, e))?;
            }
        }
        None => {
            for (_, body) in files {
                print!("{body}");
                if !body.ends_with('\n') {
                    println!();
                }
            }
        }
    }
    Ok(())
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn ball(
    oracle: &dyn GroupOracle,
    radius: usize,
    config: &RunConfig,
) -> Result<(BallTable, GeodesicCounts), CliError> {
    let table = enumerate_ball(oracle, radius, &config.budget)?;
    let counts = geodesic_counts(&table);
    Ok((table, counts))
}

/// Parses a word over the group's alphabet; `e` is the identity.
pub fn parse_element(oracle: &dyn GroupOracle, text: &str) -> Result<Element, CliError> {
    let text = text.trim();
    if text == "e" || text.is_empty() {
        return Ok(oracle.identity());
    }
    let word = oracle.alphabet().parse_word(text)?;
    Ok(oracle.normal_form(&word))
}

fn sample_words(oracle: &dyn GroupOracle, config: &RunConfig) -> Vec<String> {
    if config.g.is_empty() {
        let alphabet = oracle.alphabet();
        alphabet
            .letters()
            .filter(|l| !l.is_inverse())
            .map(|l| alphabet.symbol(l).to_string())
            .collect()
    } else {
        config.g.clone()
    }
}

fn cmd_ball(oracle: &dyn GroupOracle, config: &RunConfig) -> Result<Outputs, CliError> {
    let (table, counts) = ball(oracle, config.radius, config)?;
    let mut body = export_json(oracle, &table, &counts);
    body.push('\n');
    Ok(Outputs {
        files: vec![("ball.json", body)],
        code: EXIT_PASS,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: &'static str,
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn check(name: impl Into<String>, ok: bool, margin: Option<f64>, detail: Option<String>) -> Check {
    Check {
        name: name.into(),
        status: if ok { "pass" } else { "fail" },
        margin,
        detail,
    }
}

/// Exact and numeric checks shared by `triple` and `homogenize`.
pub fn dirac_checks(
    dirac: &TruncatedDirac,
    dtable: &DerivationTable,
    cliff: &CliffordRep,
    ts: &[f64],
) -> Result<Vec<Check>, CliError> {
    let mut checks = vec![check("symmetric", dirac.is_symmetric(), None, None)];
    checks.push(check(
        "grading_anticommutes",
        dirac.anticommutes_with_grading(),
        None,
        None,
    ));
    let sq = square_check(dirac, dtable);
    checks.push(check(
        "square_diagonal",
        sq.exact,
        Some(0.0),
        Some(format!("max deviation {}", sq.max_deviation)),
    ));
    let res = resolvent_growth_check(dtable);
    let margin = res
        .spheres
        .iter()
        .filter_map(|s| s.margin)
        .min_by(f64::total_cmp);
    checks.push(check(
        "resolvent_growth",
        res.holds,
        margin,
        Some(format!(
            "{} equality cases, {} violations",
            res.equality_cases.len(),
            res.violations.len()
        )),
    ));
    let idx = index_d_plus(dirac);
    let zero_fibers = (0..dtable.len())
        .filter(|&g| dtable.r_squared(g) == Rational::from_integer(0.into()))
        .count();
    let expected = zero_fibers * cliff.dim() / 2;
    checks.push(check(
        "index_zero",
        idx.index == 0 && idx.ker_plus == expected && idx.ker_minus == expected,
        None,
        Some(format!(
            "ker+ {} ker- {} index {}",
            idx.ker_plus, idx.ker_minus, idx.index
        )),
    ));
    for &t in ts {
        let h = heat_trace(dtable, t)?;
        let monotone = h.partial_sums.windows(2).all(|w| w[1] >= w[0])
            && h.partial_sums.iter().all(|x| x.is_finite());
        checks.push(check(
            format!("heat_trace(t={t})"),
            monotone,
            Some(h.last_increment()),
            Some(format!(
                "T_N = {}",
                h.partial_sums.last().copied().unwrap_or(0.0)
            )),
        ));
    }
    let phase = phase_field(dtable, cliff);
    let verdict = serde_json::to_value(phase.verdict).expect("verdict serializes");
    checks.push(check(
        "phase",
        phase.fibers_unitary,
        None,
        Some(verdict.as_str().unwrap_or_default().to_string()),
    ));
    Ok(checks)
}

fn diagnostics(
    oracle: &dyn GroupOracle,
    config: &RunConfig,
    n: usize,
    dim: usize,
    checks: &[Check],
) -> Value {
    json!({
        "group": config.group,
        "S": oracle.alphabet().symbols(),
        "N": n,
        "dim": dim,
        "checks": checks,
    })
}

fn checks_code(checks: &[Check]) -> i32 {
    if checks.iter().all(|c| c.status == "pass") {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}

fn clifford(slots: usize) -> Result<CliffordRep, CliError> {
    CliffordRep::new(slots).map_err(|e| CliError {
        code: EXIT_UNSUPPORTED,
        message: e.to_string(),
    })
}

fn cmd_triple(oracle: &dyn GroupOracle, config: &RunConfig) -> Result<Outputs, CliError> {
    let n = config.radius;
    let (table, counts) = ball(oracle, n, config)?;
    let dtable = derivation_table(&table, &counts, n);
    let cliff = clifford(dtable.alphabet_size())?;
    let dirac = crate::dirac::assemble_dirac(&dtable, &cliff, config.max_dim)?;
    let checks = dirac_checks(&dirac, &dtable, &cliff, &config.t)?;
    let diag = diagnostics(oracle, config, n, dirac.dim(), &checks);
    let csv = spectrum(&dtable, cliff.dim()).to_csv();
    Ok(Outputs {
        files: vec![("diagnostics.json", pretty(&diag)), ("spectrum.csv", csv)],
        code: checks_code(&checks),
    })
}

#[derive(Debug, Serialize)]
struct WitnessRow {
    n: usize,
    length_h: usize,
    length_gh: usize,
    ratio_h: String,
    ratio_gh: String,
    scaled_delta: String,
    matches_expected: bool,
}

/// Rows for `g = a`, `h = a^{2ⁿ}`, `s = b` in B(2,1), while `gh` stays in the ball.
pub fn bs_witness(
    oracle: &dyn GroupOracle,
    table: &BallTable,
    counts: &GeodesicCounts,
    max_n: u32,
) -> Vec<(usize, usize, usize, [String; 2], Rational)> {
    let a = oracle.generator(Letter(0));
    let b = Letter(2);
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let mut h = oracle.identity();
        for _ in 0..(1u64 << n) {
            h = oracle.multiply(&h, &a);
        }
        let gh = oracle.multiply(&a, &h);
        let (Some(hi), Some(ghi)) = (table.index_of(&h), table.index_of(&gh)) else {
            break;
        };
        let rh = crate::dirac::geodesic_ratio(counts, hi, b);
        let rgh = crate::dirac::geodesic_ratio(counts, ghi, b);
        let scaled = num_traits::Signed::abs(&(&rgh - &rh))
            * Rational::from_integer(table.length(hi).into());
        rows.push((
            n as usize,
            table.length(hi),
            table.length(ghi),
            [
                format!("{}/{}", counts.p_s(hi, b), counts.p(hi)),
                format!("{}/{}", counts.p_s(ghi, b), counts.p(ghi)),
            ],
            scaled,
        ));
    }
    rows
}

fn cmd_classc(
    oracle: &dyn GroupOracle,
    spec: &GroupSpec,
    config: &RunConfig,
) -> Result<Outputs, CliError> {
    let n = config.radius;
    let words = sample_words(oracle, config);
    let elements: Vec<Element> = words
        .iter()
        .map(|w| parse_element(oracle, w))
        .collect::<Result<_, _>>()?;
    let longest = words
        .iter()
        .map(|w| {
            if w.trim() == "e" {
                0
            } else {
                w.chars().filter(|c| !c.is_whitespace()).count()
            }
        })
        .max()
        .unwrap_or(0);
    let (table, counts) = ball(oracle, n + longest, config)?;
    let mut samples = Vec::new();
    for (word, g) in words.iter().zip(&elements) {
        let rep = class_c_estimate(oracle, &table, &counts, g, n)?;
        samples.push(json!({
            "g": word,
            "normal_form": oracle.format(g),
            "length": table.word_length(g)?,
            "M": rep.per_sphere.iter().map(ratio_string).collect::<Vec<_>>(),
            "slope": rep.slope,
            "verdict": rep.verdict,
        }));
    }
    let mut report = json!({
        "group": config.group,
        "S": oracle.alphabet().symbols(),
        "N": n,
        "samples": samples,
    });
    if matches!(spec, GroupSpec::BaumslagSolitar21) {
        let rows: Vec<WitnessRow> = bs_witness(oracle, &table, &counts, 16)
            .into_iter()
            .map(|(n, lh, lgh, [rh, rgh], scaled)| WitnessRow {
                n,
                length_h: lh,
                length_gh: lgh,
                matches_expected: rh == "2/2" && rgh == "2/4",
                ratio_h: rh,
                ratio_gh: rgh,
                scaled_delta: ratio_string(&scaled),
            })
            .collect();
        report["witness"] = json!({ "g": "a", "h": "a^(2^n)", "s": "b", "rows": rows });
    }
    let growth = samples_growth(&report);
    report["any_growth"] = json!(growth);
    Ok(Outputs {
        files: vec![("classc.json", pretty(&report))],
        code: EXIT_PASS,
    })
}

fn samples_growth(report: &Value) -> bool {
    report["samples"]
        .as_array()
        .map(|s| {
            s.iter()
                .any(|x| x["verdict"]["kind"] == json!("GrowthEvidence"))
        })
        .unwrap_or(false)
}

fn growth_functions(config: &RunConfig) -> Result<Vec<GrowthFunction>, CliError> {
    config
        .f
        .iter()
        .map(|f| GrowthFunction::parse(f).map_err(CliError::from))
        .collect()
}

fn cmd_homogenize(oracle: &dyn GroupOracle, config: &RunConfig) -> Result<Outputs, CliError> {
    require_infinite(oracle)?;
    let f = match growth_functions(config)?.as_slice() {
        [] => GrowthFunction::Default,
        [f] => f.clone(),
        _ => return Err(usage("homogenize takes a single --f")),
    };
    let n = config.radius;
    let validation = validate_growth_function(&f, &default_grid());
    let (table, counts) = ball(oracle, required_radius(&f, n), config)?;
    let measure = SphereMeasure::new(&table)?;
    let h = homogenized_derivations(oracle, &table, &counts, &measure, &f, n)?;
    let cliff = clifford(table.alphabet_size())?;
    let dirac = assemble_homogenized_dirac(&h, &cliff, config.max_dim)?;
    let mut checks = vec![check(
        "growth_function",
        validation.passes,
        None,
        Some(format!("{} violations", validation.violations.len())),
    )];
    let row_sums = (1..h.table.len()).all(|g| {
        let total: Rational = h.table.row(g).iter().map(|(_, v)| v.clone()).sum();
        total == Rational::from_integer(h.table.length(g).into())
    });
    checks.push(check("weights_sum_to_length", row_sums, None, None));
    let plain = derivation_table(&table, &counts, n);
    if f == GrowthFunction::Zero {
        let plain_dirac = crate::dirac::assemble_dirac(&plain, &cliff, config.max_dim)?;
        checks.push(check(
            "equals_plain",
            h.table == plain && dirac == plain_dirac,
            None,
            Some("D~ = D bit-exact".to_string()),
        ));
    }
    checks.extend(dirac_checks(&dirac, &h.table, &cliff, &config.t)?);
    let alphabet = oracle.alphabet();
    let derivations: Vec<Value> = (0..h.table.len())
        .map(|g| {
            let values: serde_json::Map<String, Value> = h
                .table
                .row(g)
                .iter()
                .map(|(s, v)| (alphabet.symbol(*s).to_string(), json!(ratio_string(v))))
                .collect();
            json!({
                "index": g,
                "length": h.table.length(g),
                "normalizer": ratio_string(&h.normalizers[g]),
                "values": values,
            })
        })
        .collect();
    let report = json!({
        "group": config.group,
        "S": alphabet.symbols(),
        "N": n,
        "ball_radius": table.radius(),
        "f_name": f.name(),
        "lambda_f": f.lambda(),
        "growth_validation": validation,
        "measure_ball_mass": ratio_string(&measure.ball_mass(n)),
        "checks": checks,
        "derivations": derivations,
    });
    Ok(Outputs {
        files: vec![("homogenize.json", pretty(&report))],
        code: checks_code(&checks),
    })
}

fn cmd_classify(oracle: &dyn GroupOracle, config: &RunConfig) -> Result<Outputs, CliError> {
    let mut options = ClassifyOptions {
        seed: config.seed,
        budget: config.budget,
        ..Default::default()
    };
    let family = growth_functions(config)?;
    if !family.is_empty() {
        options.family = family;
    }
    options.max_n = config.radius.max(1);
    options.min_n = options.min_n.min(options.max_n);
    let report = classify(oracle, &config.group, &options)?;
    Ok(Outputs {
        files: vec![("classify.json", pretty(&report))],
        code: EXIT_PASS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        run(std::iter::once("spectral-groups").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors() {
        assert_eq!(code(&["triple", "--group", "Z2", "--t", "-1"]), EXIT_USAGE);
        assert_eq!(code(&["nosuch"]), EXIT_USAGE);
        assert_eq!(code(&["ball"]), EXIT_USAGE);
        assert_eq!(code(&["ball", "--group", "<a b"]), EXIT_USAGE);
    }

    #[test]
    fn finite_group_homogenization_is_unsupported() {
        assert_eq!(
            code(&["homogenize", "--group", "C6", "--f", "zero"]),
            EXIT_UNSUPPORTED
        );
    }

    #[test]
    fn resource_limits() {
        assert_eq!(
            code(&[
                "ball",
                "--group",
                "F2",
                "--radius",
                "6",
                "--budget-elements",
                "100"
            ]),
            EXIT_RESOURCE
        );
        assert_eq!(
            code(&[
                "triple",
                "--group",
                "Z2",
                "--radius",
                "3",
                "--max-dim",
                "10"
            ]),
            EXIT_RESOURCE
        );
    }

    #[test]
    fn config_parsing() {
        let parsed = read_config("group = Z2 # comment\n\nt=0.5\nt=2\n").unwrap();
        assert_eq!(parsed[0], ("group".to_string(), "Z2".to_string()));
        assert_eq!(parsed.len(), 3);
        assert!(read_config("nonsense").is_err());
    }
}
