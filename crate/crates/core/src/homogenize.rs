//! Sphere-uniform measure, growth functions, homogenized derivations and the
//! A₀/A_λ/A₁ classification experiments.
//!
//! Averages are taken over the real-radius ball `{γ : ℓ(γ) ≤ f(ℓ(x))}`
//! translated to `x`. Terms with `γx = e` are left out of both the weighted
//! sum and its normalization, so for `x ≠ e` the averaged ratios still sum
//! to one over `s`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cayley::{
    enumerate_ball, geodesic_counts, BallBudget, BallTable, CayleyError, GeodesicCounts,
};
use crate::clifford::CliffordRep;
use crate::dirac::{
    assemble_dirac, phase_field, ratio_vector, verdict_for, ClassCReport, ClassCVerdict,
    DerivationTable, DiracError, PhaseVerdict, TruncatedDirac,
};
use crate::exec::{map_range, Exec};
use crate::group::{Element, GroupOracle, Letter};
use crate::rational::{int, ratio_string, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HomogenizeError {
    #[error("sphere {0} is empty; the measure is undefined for finite groups")]
    EmptySphere(usize),
    #[error("homogenization is not defined for finite groups")]
    FiniteGroup,
    #[error("ball radius {available} is too small; at least {required} is needed")]
    MarginInsufficient { required: usize, available: usize },
    #[error("invalid growth function: {0}")]
    InvalidFunction(String),
    #[error(transparent)]
    Dirac(#[from] DiracError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

/// Rejects groups known to be finite.
pub fn require_infinite(oracle: &dyn GroupOracle) -> Result<(), HomogenizeError> {
    match oracle.is_finite() {
        Some(true) => Err(HomogenizeError::FiniteGroup),
        _ => Ok(()),
    }
}

/// `μ(g) = 1/(#S^{ℓ(g)} · 2^{ℓ(g)+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereMeasure {
    weights: Vec<Rational>,
    sphere_sizes: Vec<usize>,
}

impl SphereMeasure {
    pub fn new(table: &BallTable) -> Result<Self, HomogenizeError> {
        let sphere_sizes = table.sphere_sizes();
        let weights = sphere_sizes
            .iter()
            .enumerate()
            .map(|(n, &size)| {
                if size == 0 {
                    return Err(HomogenizeError::EmptySphere(n));
                }
                Ok(Rational::new(BigInt::one(), BigInt::from(size) << (n + 1)))
            })
            .collect::<Result<_, _>>()?;
        Ok(SphereMeasure {
            weights,
            sphere_sizes,
        })
    }

    pub fn radius(&self) -> usize {
        self.weights.len() - 1
    }

    /// `μ_n`, the mass of one element of sphere `n`.
    pub fn weight(&self, n: usize) -> &Rational {
        &self.weights[n]
    }

    /// `μ(B^n) = Σ_{ℓ(g) ≤ n} μ(g)`.
    pub fn ball_mass(&self, n: usize) -> Rational {
        (0..=n)
            .map(|k| &self.weights[k] * int(self.sphere_sizes[k] as i64))
            .sum()
    }
}

/// Admissible-function candidates `f: ℝ₊ → ℝ`.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthFunction {
    Zero,
    /// `log₂(x+1)`
    Log,
    /// `c·x`
    Linear(f64),
    /// `λx + log₂(x+1)`
    Blend(f64),
    /// `x + log₂(x+1)`
    Default,
    /// `x^p`
    Power(f64),
    /// Piecewise linear through `(0,0)` and the given points, continued with
    /// the last slope.
    Table(Vec<(f64, f64)>),
}

pub fn default_f() -> GrowthFunction {
    GrowthFunction::Default
}

impl GrowthFunction {
    /// Parses `zero`, `log`, `default`, `linear:c`, `blend:λ`, `power:p` or
    /// `table:x1:y1,x2:y2,…`.
    pub fn parse(text: &str) -> Result<Self, HomogenizeError> {
        let bad = || HomogenizeError::InvalidFunction(text.to_string());
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(bad)
        };
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a)),
            None => (text.trim(), None),
        };
        let f = match (head, arg) {
            ("zero" | "0", None) => GrowthFunction::Zero,
            ("log", None) => GrowthFunction::Log,
            ("default", None) => GrowthFunction::Default,
            ("linear", Some(c)) => GrowthFunction::Linear(num(c)?),
            ("blend", Some(l)) => GrowthFunction::Blend(num(l)?),
            ("power", Some(p)) => GrowthFunction::Power(num(p)?),
            ("table", Some(pts)) => {
                let mut points = Vec::new();
                for pair in pts.split(',') {
                    let (x, y) = pair.split_once(':').ok_or_else(bad)?;
                    points.push((num(x)?, num(y)?));
                }
                if points.windows(2).any(|w| w[1].0 <= w[0].0)
                    || points.first().is_none_or(|p| p.0 <= 0.0)
                {
                    return Err(bad());
                }
                GrowthFunction::Table(points)
            }
            _ => return Err(bad()),
        };
        Ok(f)
    }

    pub fn name(&self) -> String {
        match self {
            GrowthFunction::Zero => "zero".into(),
            GrowthFunction::Log => "log".into(),
            GrowthFunction::Default => "default".into(),
            GrowthFunction::Linear(c) => format!("linear:{c}"),
            GrowthFunction::Blend(l) => format!("blend:{l}"),
            GrowthFunction::Power(p) => format!("power:{p}"),
            GrowthFunction::Table(pts) => {
                let body: Vec<String> = pts.iter().map(|(x, y)| format!("{x}:{y}")).collect();
                format!("table:{}", body.join(","))
            }
        }
    }

    fn table_segment(pts: &[(f64, f64)], x: f64) -> (f64, f64, f64) {
        let mut prev = (0.0, 0.0);
        for &(px, py) in pts {
            let slope = (py - prev.1) / (px - prev.0);
            if x < px {
                return (prev.0, prev.1, slope);
            }
            prev = (px, py);
        }
        let n = pts.len();
        let before = if n >= 2 { pts[n - 2] } else { (0.0, 0.0) };
        (prev.0, prev.1, (prev.1 - before.1) / (prev.0 - before.0))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            GrowthFunction::Zero => 0.0,
            GrowthFunction::Log => (x + 1.0).log2(),
            GrowthFunction::Default => x + (x + 1.0).log2(),
            GrowthFunction::Linear(c) => c * x,
            GrowthFunction::Blend(l) => l * x + (x + 1.0).log2(),
            GrowthFunction::Power(p) => x.powf(*p),
            GrowthFunction::Table(pts) => {
                let (x0, y0, slope) = Self::table_segment(pts, x);
                y0 + slope * (x - x0)
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let log_term = 1.0 / ((x + 1.0) * std::f64::consts::LN_2);
        match self {
            GrowthFunction::Zero => 0.0,
            GrowthFunction::Log => log_term,
            GrowthFunction::Default => 1.0 + log_term,
            GrowthFunction::Linear(c) => *c,
            GrowthFunction::Blend(l) => l + log_term,
            GrowthFunction::Power(p) => {
                if x == 0.0 && *p < 1.0 {
                    f64::INFINITY
                } else {
                    p * x.powf(p - 1.0)
                }
            }
            GrowthFunction::Table(pts) => Self::table_segment(pts, x).2,
        }
    }

    /// Declared `λ_f = lim f′`.
    pub fn lambda(&self) -> f64 {
        match self {
            GrowthFunction::Zero | GrowthFunction::Log => 0.0,
            GrowthFunction::Default => 1.0,
            GrowthFunction::Linear(c) => *c,
            GrowthFunction::Blend(l) => *l,
            GrowthFunction::Power(p) if *p < 1.0 => 0.0,
            GrowthFunction::Power(p) if *p == 1.0 => 1.0,
            GrowthFunction::Power(_) => f64::INFINITY,
            GrowthFunction::Table(pts) => Self::table_segment(pts, f64::INFINITY).2,
        }
    }

    /// Largest integer radius `r` with `r ≤ f(n)`; `ℓ(γ) ≤ f(n)` iff `ℓ(γ) ≤ r`.
    pub fn radius_at(&self, n: usize) -> usize {
        let log = (n + 1).ilog2() as usize;
        match self {
            GrowthFunction::Zero => 0,
            GrowthFunction::Log => log,
            GrowthFunction::Default => n + log,
            _ => self.eval(n as f64).max(0.0).floor() as usize,
        }
    }
}

/// 100 evenly spaced points in `[0, 10³]`.
pub fn default_grid() -> Vec<f64> {
    (0..100).map(|i| i as f64 * 1000.0 / 99.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub f_name: String,
    pub lambda_f: f64,
    pub passes: bool,
    /// `(condition, x)` for every failed grid check.
    pub violations: Vec<(String, f64)>,
}

pub const GRID_TOLERANCE: f64 = 1e-12;

/// Grid check of `f(0) = 0`, `f ≥ 0`, `f′ ≥ 0`, `f′` nonincreasing and
/// `λ_f ∈ [0, 1]`. The declared limit is checked by requiring the gap
/// `|f′ − λ_f|` to shrink past the grid and fall below `1e−3` at `10³·x_max`.
pub fn validate_growth_function(f: &GrowthFunction, grid: &[f64]) -> GrowthReport {
    let tol = GRID_TOLERANCE;
    let mut violations = Vec::new();
    if f.eval(0.0).abs() > tol {
        violations.push(("f(0) = 0".to_string(), 0.0));
    }
    for &x in grid {
        if f.eval(x) < -tol {
            violations.push(("f >= 0".to_string(), x));
        }
        if f.derivative(x) < -tol {
            violations.push(("f' >= 0".to_string(), x));
        }
    }
    for w in grid.windows(2) {
        let (d0, d1) = (f.derivative(w[0]), f.derivative(w[1]));
        if d1 > d0 + tol * d0.abs().max(1.0) {
            violations.push(("f'' <= 0".to_string(), w[1]));
        }
    }
    let lambda = f.lambda();
    if !(0.0..=1.0).contains(&lambda) {
        violations.push(("lambda_f <= 1".to_string(), f64::INFINITY));
    } else if let Some(&x_max) = grid.iter().max_by(|a, b| a.total_cmp(b)) {
        let near = (f.derivative(x_max) - lambda).abs();
        let far = (f.derivative(x_max * 1e3) - lambda).abs();
        if far > near + tol || far > 1e-3 {
            violations.push(("lim f' = lambda_f".to_string(), x_max));
        }
    }
    GrowthReport {
        f_name: f.name(),
        lambda_f: lambda,
        passes: violations.is_empty(),
        violations,
    }
}

/// Ball radius needed to average every element of length at most `n`.
pub fn required_radius(f: &GrowthFunction, n: usize) -> usize {
    (0..=n).map(|k| f.radius_at(k) + k).max().unwrap_or(0)
}

/// Cached left-translation averages of `p_s/p` on a ball.
pub struct Homogenizer<'a> {
    oracle: &'a dyn GroupOracle,
    table: &'a BallTable,
    counts: &'a GeodesicCounts,
    measure: &'a SphereMeasure,
    f: &'a GrowthFunction,
}

/// Averaged ratios at one element and the normalizer `μ(B^{f(ℓ(x))}·x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Average {
    pub ratios: Vec<Rational>,
    pub mass: Rational,
}

impl<'a> Homogenizer<'a> {
    pub fn new(
        oracle: &'a dyn GroupOracle,
        table: &'a BallTable,
        counts: &'a GeodesicCounts,
        measure: &'a SphereMeasure,
        f: &'a GrowthFunction,
    ) -> Self {
        Homogenizer {
            oracle,
            table,
            counts,
            measure,
            f,
        }
    }

    pub fn check_margin(&self, n: usize) -> Result<(), HomogenizeError> {
        let required = required_radius(self.f, n);
        let available = self.table.radius().min(self.measure.radius());
        if available < required {
            return Err(HomogenizeError::MarginInsufficient {
                required,
                available,
            });
        }
        Ok(())
    }

    /// `Σ_γ (p_s(γx)/p(γx)) μ(γx)/μ(B·x)` over `ℓ(γ) ≤ f(ℓ(x))`, `γx ≠ e`.
    pub fn average(&self, x: usize) -> Average {
        let letters = self.table.alphabet_size();
        let r = self.f.radius_at(self.table.length(x));
        let target = self.table.element(x);
        let mut sums = vec![Rational::zero(); letters];
        let mut mass = Rational::zero();
        for gamma in 0..self.table.ball_size(r) {
            let y = if gamma == 0 {
                x
            } else {
                let gx = self.oracle.multiply(self.table.element(gamma), target);
                self.table
                    .index_of(&gx)
                    .expect("margin checked before averaging")
            };
            if y == 0 {
                continue;
            }
            let mu = self.measure.weight(self.table.length(y));
            mass += mu;
            for (s, q) in self.counts.ratios(y) {
                sums[s.index()] += q * mu;
            }
        }
        if !mass.is_zero() {
            sums.iter_mut().for_each(|v| *v /= &mass);
        }
        Average { ratios: sums, mass }
    }

    pub fn averages(&self, n: usize, exec: Exec) -> Result<Vec<Average>, HomogenizeError> {
        self.check_margin(n)?;
        Ok(map_range(exec, 0, self.table.ball_size(n), |x| {
            self.average(x)
        }))
    }
}

/// `∂̃_s(g)` as a derivation table, with the normalizers `μ(B^{f(ℓ(g))}·g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogenizedDerivationTable {
    pub f_name: String,
    pub table: DerivationTable,
    pub normalizers: Vec<Rational>,
}

pub fn homogenized_derivations(
    oracle: &dyn GroupOracle,
    table: &BallTable,
    counts: &GeodesicCounts,
    measure: &SphereMeasure,
    f: &GrowthFunction,
    radius: usize,
) -> Result<HomogenizedDerivationTable, HomogenizeError> {
    homogenized_derivations_with(oracle, table, counts, measure, f, radius, Exec::default())
}

pub fn homogenized_derivations_with(
    oracle: &dyn GroupOracle,
    table: &BallTable,
    counts: &GeodesicCounts,
    measure: &SphereMeasure,
    f: &GrowthFunction,
    radius: usize,
    exec: Exec,
) -> Result<HomogenizedDerivationTable, HomogenizeError> {
    let hom = Homogenizer::new(oracle, table, counts, measure, f);
    let averages = hom.averages(radius, exec)?;
    let n = averages.len();
    let rows = averages
        .iter()
        .enumerate()
        .map(|(g, avg)| {
            let len = int(table.length(g) as i64);
            avg.ratios
                .iter()
                .enumerate()
                .map(|(s, q)| (Letter(s as u8), q * &len))
                .collect()
        })
        .collect();
    let dtable = DerivationTable::from_rows(
        table.alphabet_size(),
        table.lengths()[..n].to_vec(),
        table.sphere_offsets()[..radius + 2].to_vec(),
        rows,
    );
    Ok(HomogenizedDerivationTable {
        f_name: f.name(),
        table: dtable,
        normalizers: averages.into_iter().map(|a| a.mass).collect(),
    })
}

pub fn assemble_homogenized_dirac(
    h: &HomogenizedDerivationTable,
    cliff: &CliffordRep,
    max_dim: usize,
) -> Result<TruncatedDirac, HomogenizeError> {
    Ok(assemble_dirac(&h.table, cliff, max_dim)?)
}

/// `C_n = max_{ℓ(h)=n, s} ℓ(h)·|avg_s(gh) − avg_s(h)|` for `n = 1..=radius`.
pub fn translation_check(
    oracle: &dyn GroupOracle,
    table: &BallTable,
    counts: &GeodesicCounts,
    measure: &SphereMeasure,
    f: &GrowthFunction,
    g: &Element,
    radius: usize,
) -> Result<ClassCReport, HomogenizeError> {
    let len_g = table.word_length(g)?;
    let hom = Homogenizer::new(oracle, table, counts, measure, f);
    let averages = hom.averages(radius + len_g, Exec::default())?;
    Ok(translation_check_from_averages(
        oracle, table, &averages, g, radius,
    ))
}

/// [`translation_check`] on precomputed averages covering length `radius + ℓ(g)`.
pub fn translation_check_from_averages(
    oracle: &dyn GroupOracle,
    table: &BallTable,
    averages: &[Average],
    g: &Element,
    radius: usize,
) -> ClassCReport {
    let per_sphere: Vec<Rational> = (1..=radius)
        .map(|n| {
            let range = table.sphere(n);
            map_range(Exec::default(), range.start, range.end, |h| {
                let gh = table
                    .index_of(&oracle.multiply(g, table.element(h)))
                    .expect("gh lies in the enlarged ball");
                let len = int(n as i64);
                averages[gh]
                    .ratios
                    .iter()
                    .zip(&averages[h].ratios)
                    .map(|(x, y)| (x - y).abs() * &len)
                    .max()
                    .unwrap_or_else(Rational::zero)
            })
            .into_iter()
            .max()
            .unwrap_or_else(Rational::zero)
        })
        .collect();
    let (k_hat, slope, verdict) = verdict_for(&per_sphere);
    ClassCReport {
        per_sphere,
        k_hat,
        slope,
        verdict,
    }
}

/// `p_s/p` per letter; the `f = 0` average.
pub fn plain_ratios(counts: &GeodesicCounts, x: usize) -> Vec<Rational> {
    ratio_vector(counts, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TypeEstimate {
    #[serde(rename = "A0 evidence")]
    A0,
    #[serde(rename = "A0+/A_lambda evidence")]
    ALambda,
    #[serde(rename = "A1 evidence")]
    A1,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslationEntry {
    pub g: String,
    pub per_sphere_max: Vec<String>,
    pub verdict: ClassCVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub f_name: String,
    pub lambda_f: f64,
    /// Sphere range `1..=N` tested, `None` when the budget allows no test.
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub admissible: bool,
    pub translation: Vec<TranslationEntry>,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub group: String,
    #[serde(rename = "S")]
    pub generating_set: Vec<String>,
    pub ball_radius: usize,
    pub candidates: Vec<Candidate>,
    pub smallest_passing_lambda: Option<f64>,
    pub estimate: TypeEstimate,
    pub caveat: &'static str,
}

pub const CLASSIFY_CAVEAT: &str =
    "evidence only: the estimate is an upper bound for the given generating set on a finite ball";

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub family: Vec<GrowthFunction>,
    /// Tested spheres are `1..=N` with `N ≤ max_n`, as large as the ball allows.
    pub max_n: usize,
    pub min_n: usize,
    pub budget: BallBudget,
    /// Extra sample elements of length 2, drawn with this seed.
    pub extra_samples: usize,
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            family: vec![
                GrowthFunction::Zero,
                GrowthFunction::Log,
                GrowthFunction::Blend(0.5),
                GrowthFunction::Default,
            ],
            max_n: 8,
            min_n: 3,
            budget: BallBudget {
                max_elements: 200_000,
                max_seconds: None,
            },
            extra_samples: 2,
            seed: 0,
        }
    }
}

/// Generators followed by `extra` distinct seeded picks from sphere 2.
pub fn sample_elements(
    oracle: &dyn GroupOracle,
    table: &BallTable,
    extra: usize,
    seed: u64,
) -> Vec<Element> {
    let mut out: Vec<Element> = oracle
        .alphabet()
        .letters()
        .filter(|l| !l.is_inverse())
        .map(|l| oracle.generator(l))
        .collect();
    if table.radius() >= 2 && extra > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sphere: Vec<usize> = table.sphere(2).collect();
        let mut picks: Vec<usize> = sphere
            .choose_multiple(&mut rng, extra.min(sphere.len()))
            .copied()
            .collect();
        picks.sort_unstable();
        out.extend(picks.into_iter().map(|i| table.element(i).clone()));
    }
    out
}

fn enumerate_within(
    oracle: &dyn GroupOracle,
    radius: usize,
    budget: &BallBudget,
) -> Result<BallTable, HomogenizeError> {
    match enumerate_ball(oracle, radius, budget) {
        Ok(t) => Ok(t),
        Err(CayleyError::ResourceExceeded { radius_reached, .. }) => {
            Ok(enumerate_ball(oracle, radius_reached, budget)?)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn classify(
    oracle: &dyn GroupOracle,
    group: &str,
    options: &ClassifyOptions,
) -> Result<ClassificationReport, HomogenizeError> {
    require_infinite(oracle)?;
    let mut family = options.family.clone();
    family.sort_by(|a, b| a.lambda().total_cmp(&b.lambda()));
    let max_sample_len = if options.extra_samples > 0 { 2 } else { 1 };
    let needed = family
        .iter()
        .map(|f| f.radius_at(options.max_n + max_sample_len) + options.max_n + max_sample_len)
        .max()
        .unwrap_or(options.max_n + max_sample_len);
    let table = enumerate_within(oracle, needed, &options.budget)?;
    let counts = geodesic_counts(&table);
    let measure = SphereMeasure::new(&table)?;
    let samples = sample_elements(oracle, &table, options.extra_samples, options.seed);

    let mut candidates = Vec::new();
    for f in &family {
        let admissible = validate_growth_function(f, &default_grid()).passes;
        let fits = |n: usize| {
            samples.iter().all(|g| {
                let l = table.word_length(g).unwrap_or(usize::MAX / 4);
                f.radius_at(n + l) + n + l <= table.radius()
            })
        };
        let n = (options.min_n..=options.max_n).rev().find(|&n| fits(n));
        let mut translation = Vec::new();
        if let (Some(n), true) = (n, admissible) {
            let longest = samples
                .iter()
                .filter_map(|g| table.word_length(g).ok())
                .max()
                .unwrap_or(0);
            let averages = Homogenizer::new(oracle, &table, &counts, &measure, f)
                .averages(n + longest, Exec::default())?;
            for g in &samples {
                let rep = translation_check_from_averages(oracle, &table, &averages, g, n);
                translation.push(TranslationEntry {
                    g: oracle.format(g),
                    per_sphere_max: rep.per_sphere.iter().map(ratio_string).collect(),
                    verdict: rep.verdict,
                });
            }
        }
        let passes = admissible
            && n.is_some()
            && translation
                .iter()
                .all(|c| matches!(c.verdict, ClassCVerdict::BoundedEvidence { .. }));
        candidates.push(Candidate {
            f_name: f.name(),
            lambda_f: f.lambda(),
            n,
            admissible,
            translation,
            passes,
        });
    }
    let smallest_passing_lambda = candidates.iter().find(|c| c.passes).map(|c| c.lambda_f);
    let estimate = match smallest_passing_lambda {
        None => TypeEstimate::Inconclusive,
        Some(0.0) => TypeEstimate::A0,
        Some(l) if l < 1.0 => TypeEstimate::ALambda,
        Some(_) => TypeEstimate::A1,
    };
    Ok(ClassificationReport {
        group: group.to_string(),
        generating_set: oracle.alphabet().symbols(),
        ball_radius: table.radius(),
        candidates,
        smallest_passing_lambda,
        estimate,
        caveat: CLASSIFY_CAVEAT,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSurveyEntry {
    pub f_name: String,
    pub lambda_f: f64,
    pub verdict: PhaseVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSurvey {
    pub entries: Vec<PhaseSurveyEntry>,
    /// Some tested `(S, f)` has a non-constant direction field.
    pub any_nontrivial: bool,
}

pub fn phase_triviality_survey(
    oracle: &dyn GroupOracle,
    table: &BallTable,
    counts: &GeodesicCounts,
    measure: &SphereMeasure,
    family: &[GrowthFunction],
    radius: usize,
) -> Result<PhaseSurvey, HomogenizeError> {
    let cliff = CliffordRep::new(table.alphabet_size())
        .map_err(|e| HomogenizeError::InvalidFunction(e.to_string()))?;
    let mut entries = Vec::new();
    for f in family {
        let h = homogenized_derivations(oracle, table, counts, measure, f, radius)?;
        let phase = phase_field(&h.table, &cliff);
        entries.push(PhaseSurveyEntry {
            f_name: f.name(),
            lambda_f: f.lambda(),
            verdict: phase.verdict,
        });
    }
    let any_nontrivial = entries
        .iter()
        .any(|e| e.verdict == PhaseVerdict::Nontrivial);
    Ok(PhaseSurvey {
        entries,
        any_nontrivial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{
        class_c_estimate, derivation_table, index_d_plus, square_check, DEFAULT_MAX_DIM,
    };
    use crate::group::{build_oracle, parse_group, CompletionBudget, Oracle};

    fn setup(group: &str, radius: usize) -> (Oracle, BallTable, GeodesicCounts, SphereMeasure) {
        let oracle =
            build_oracle(&parse_group(group).unwrap(), &CompletionBudget::default()).unwrap();
        let table = enumerate_ball(oracle.as_ref(), radius, &BallBudget::default()).unwrap();
        let counts = geodesic_counts(&table);
        let measure = SphereMeasure::new(&table).unwrap();
        (oracle, table, counts, measure)
    }

    #[test]
    fn measure_values_and_partial_sums() {
        let (_, _, _, mu) = setup("Z2", 8);
        assert_eq!(*mu.weight(0), Rational::new(1.into(), 2.into()));
        assert_eq!(*mu.weight(1), Rational::new(1.into(), 16.into()));
        for n in 0..=8 {
            let expected = Rational::one() - Rational::new(1.into(), BigInt::one() << (n + 1));
            assert_eq!(mu.ball_mass(n), expected);
        }
    }

    #[test]
    fn finite_groups_are_refused() {
        let oracle =
            build_oracle(&parse_group("C6").unwrap(), &CompletionBudget::default()).unwrap();
        assert_eq!(
            require_infinite(oracle.as_ref()),
            Err(HomogenizeError::FiniteGroup)
        );
        let table = enumerate_ball(oracle.as_ref(), 5, &BallBudget::default()).unwrap();
        assert_eq!(
            SphereMeasure::new(&table),
            Err(HomogenizeError::EmptySphere(4))
        );
    }

    #[test]
    fn default_function_values() {
        let f = default_f();
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(1.0), 2.0);
        assert_eq!(f.lambda(), 1.0);
        assert_eq!(f.radius_at(1), 2);
        assert_eq!(f.radius_at(3), 5);
        assert_eq!(f.radius_at(4), 6);
        let grid = default_grid();
        assert_eq!(grid.len(), 100);
        assert!(grid
            .windows(2)
            .all(|w| f.derivative(w[1]) < f.derivative(w[0])));
    }

    #[test]
    fn growth_validation() {
        let grid = default_grid();
        assert!(validate_growth_function(&GrowthFunction::Zero, &grid).passes);
        assert!(validate_growth_function(&default_f(), &grid).passes);
        assert!(validate_growth_function(&GrowthFunction::Log, &grid).passes);
        assert!(validate_growth_function(&GrowthFunction::Blend(0.5), &grid).passes);
        let square = validate_growth_function(&GrowthFunction::Power(2.0), &grid);
        assert!(!square.passes);
        assert!(square.violations.iter().any(|(c, _)| c == "f'' <= 0"));
        let convex = GrowthFunction::parse("table:1:1,2:4,3:9").unwrap();
        assert!(!validate_growth_function(&convex, &grid).passes);
        let concave = GrowthFunction::parse("table:1:2,3:3").unwrap();
        assert!(validate_growth_function(&concave, &grid).passes);
        assert_eq!(concave.lambda(), 0.5);
        assert!(!validate_growth_function(&GrowthFunction::Linear(2.0), &grid).passes);
    }

    #[test]
    fn parse_round_trip() {
        for text in [
            "zero",
            "log",
            "default",
            "linear:0.5",
            "blend:0.25",
            "power:2",
            "table:1:2,3:3",
        ] {
            assert_eq!(GrowthFunction::parse(text).unwrap().name(), text);
        }
        assert!(GrowthFunction::parse("cubic").is_err());
        assert!(GrowthFunction::parse("table:2:1,1:3").is_err());
    }

    #[test]
    fn zero_function_reproduces_plain_derivations() {
        for group in ["Z2", "F2"] {
            let (o, t, c, mu) = setup(group, 4);
            let h =
                homogenized_derivations(o.as_ref(), &t, &c, &mu, &GrowthFunction::Zero, 4).unwrap();
            assert_eq!(h.table, derivation_table(&t, &c, 4));
        }
    }

    #[test]
    fn weights_sum_to_length() {
        let (o, t, c, mu) = setup("Z2", 8);
        let h = homogenized_derivations(o.as_ref(), &t, &c, &mu, &default_f(), 2).unwrap();
        assert!(h.table.row(0).is_empty());
        for g in 1..h.table.len() {
            let total: Rational = h.table.row(g).iter().map(|(_, v)| v.clone()).sum();
            assert_eq!(total, int(h.table.length(g) as i64));
        }
    }

    #[test]
    fn margin_is_enforced() {
        let (o, t, c, mu) = setup("Z2", 5);
        let err = homogenized_derivations(o.as_ref(), &t, &c, &mu, &default_f(), 3).unwrap_err();
        assert_eq!(
            err,
            HomogenizeError::MarginInsufficient {
                required: 8,
                available: 5
            }
        );
    }

    #[test]
    fn homogenized_dirac_square_and_index() {
        let (o, t, c, mu) = setup("Z2", 10);
        let h = homogenized_derivations(o.as_ref(), &t, &c, &mu, &default_f(), 3).unwrap();
        let cliff = CliffordRep::new(4).unwrap();
        let d = assemble_homogenized_dirac(&h, &cliff, DEFAULT_MAX_DIM).unwrap();
        assert!(d.is_symmetric());
        assert!(d.anticommutes_with_grading());
        assert!(square_check(&d, &h.table).exact);
        assert_eq!(index_d_plus(&d).index, 0);
    }

    #[test]
    fn zero_translation_check_is_class_c() {
        let (o, t, c, mu) = setup("B(2,1)", 7);
        let a = o.generator(Letter(0));
        let lhs = translation_check(o.as_ref(), &t, &c, &mu, &GrowthFunction::Zero, &a, 6).unwrap();
        let rhs = class_c_estimate(o.as_ref(), &t, &c, &a, 6).unwrap();
        assert_eq!(lhs, rhs);
        let e = translation_check(o.as_ref(), &t, &c, &mu, &default_f(), &o.identity(), 2).unwrap();
        assert!(e.per_sphere.iter().all(Zero::is_zero));
    }

    #[test]
    fn survey_and_synthetic_classification() {
        let (o, t, c, mu) = setup("Z2", 6);
        let survey =
            phase_triviality_survey(o.as_ref(), &t, &c, &mu, &[GrowthFunction::Zero], 3).unwrap();
        assert!(survey.any_nontrivial);
        let report = classify(
            o.as_ref(),
            "Z2",
            &ClassifyOptions {
                max_n: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(report.estimate, TypeEstimate::A0);
        assert_eq!(report.candidates[0].f_name, "zero");
        assert!(report.candidates[0].passes);
    }

    #[test]
    fn sampling_is_seeded() {
        let (o, t, _, _) = setup("F2", 3);
        let a = sample_elements(o.as_ref(), &t, 2, 7);
        assert_eq!(a, sample_elements(o.as_ref(), &t, 2, 7));
        assert_eq!(a.len(), 4);
        assert_eq!(a[0], o.generator(Letter(0)));
    }
}
