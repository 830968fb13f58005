//! The truncated Dirac operator `D = Σ_s c_s ⊗ ∂_s` on `Λ(ℝ^S) ⊗ ℓ²(B^N)`
//! and its spectral diagnostics.
//!
//! Basis index convention: `Ω`-mask `m` and ball element `g` sit at
//! `m · |B^N| + g`, matching the Kronecker product `c_s ⊗ ∂_s`.
//!
//! Identities (`D` symmetric, `D²` diagonal, kernels, class-𝒞 quantities) are
//! checked in exact rational arithmetic. Eigenvalues, heat traces and norm
//! estimates are binary64.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cayley::{BallTable, GeodesicCounts};
use crate::clifford::CliffordRep;
use crate::exec::{map_range, Exec};
use crate::group::{Element, GroupOracle, Letter};
use crate::rational::{int, ratio_string, to_f64, Rational};
use crate::sparse::SparseMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiracError {
    #[error("operator dimension {dim} exceeds the budget of {limit}")]
    Resource { dim: usize, limit: usize },
    #[error("heat-trace parameter t must be positive and finite, got {0}")]
    NonPositiveT(f64),
    #[error("ball radius {available} is too small; at least {required} is needed")]
    MarginInsufficient { required: usize, available: usize },
    #[error("element is not in the enumerated ball")]
    NotInBall,
}

/// Default limit on `2^{2d} · |B^N|`.
pub const DEFAULT_MAX_DIM: usize = 1 << 21;

/// Exact diagonal derivations `∂_s(g)` on a ball, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivationTable {
    letters: usize,
    lengths: Vec<u32>,
    sphere_offsets: Vec<usize>,
    rows: Vec<Vec<(Letter, Rational)>>,
}

impl DerivationTable {
    /// Builds a table from explicit rows. `sphere_offsets` has one entry per
    /// sphere plus a final end offset; zero values are dropped.
    pub fn from_rows(
        letters: usize,
        lengths: Vec<u32>,
        sphere_offsets: Vec<usize>,
        rows: Vec<Vec<(Letter, Rational)>>,
    ) -> Self {
        assert_eq!(lengths.len(), rows.len());
        assert_eq!(
            *sphere_offsets.last().expect("at least one sphere"),
            rows.len()
        );
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        DerivationTable {
            letters,
            lengths,
            sphere_offsets,
            rows,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `2d`.
    pub fn alphabet_size(&self) -> usize {
        self.letters
    }

    pub fn radius(&self) -> usize {
        self.sphere_offsets.len() - 2
    }

    pub fn length(&self, g: usize) -> usize {
        self.lengths[g] as usize
    }

    pub fn sphere(&self, n: usize) -> std::ops::Range<usize> {
        self.sphere_offsets[n]..self.sphere_offsets[n + 1]
    }

    /// Non-zero `(s, ∂_s(g))` in letter order.
    pub fn row(&self, g: usize) -> &[(Letter, Rational)] {
        &self.rows[g]
    }

    pub fn get(&self, g: usize, s: Letter) -> Rational {
        self.rows[g]
            .iter()
            .find(|(l, _)| *l == s)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn dense_row(&self, g: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.letters];
        for (s, v) in &self.rows[g] {
            out[s.index()] = v.clone();
        }
        out
    }

    /// `r(g)² = Σ_s ∂_s(g)²`.
    pub fn r_squared(&self, g: usize) -> Rational {
        self.rows[g].iter().map(|(_, v)| v * v).sum()
    }

    /// `∂_s` as a diagonal matrix on `ℓ²(B^N)`.
    pub fn diagonal(&self, s: Letter) -> SparseMatrix {
        SparseMatrix::diagonal((0..self.len()).map(|g| self.get(g, s)))
    }
}

/// `∂_s(g) = (p_s(g)/p(g)) · ℓ(g)` on the ball of radius `radius`.
pub fn derivation_table(
    table: &BallTable,
    counts: &GeodesicCounts,
    radius: usize,
) -> DerivationTable {
    derivation_table_with(table, counts, radius, Exec::default())
}

pub fn derivation_table_with(
    table: &BallTable,
    counts: &GeodesicCounts,
    radius: usize,
    exec: Exec,
) -> DerivationTable {
    let radius = radius.min(table.radius());
    let n = table.ball_size(radius);
    let rows = map_range(exec, 0, n, |g| {
        let len = int(table.length(g) as i64);
        counts
            .ratios(g)
            .into_iter()
            .map(|(s, q)| (s, q * &len))
            .collect()
    });
    DerivationTable::from_rows(
        table.alphabet_size(),
        table.lengths()[..n].to_vec(),
        table.sphere_offsets()[..radius + 2].to_vec(),
        rows,
    )
}

/// Sparse symmetric rational matrix of `D` on the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedDirac {
    fock_dim: usize,
    ball: usize,
    matrix: SparseMatrix,
}

impl TruncatedDirac {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn ball_size(&self) -> usize {
        self.ball
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn index(&self, mask: usize, g: usize) -> usize {
        mask * self.ball + g
    }

    /// `γ ⊗ I` as a diagonal matrix.
    pub fn grading(&self) -> SparseMatrix {
        SparseMatrix::diagonal((0..self.dim()).map(|i| parity_sign(i / self.ball)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix.is_symmetric()
    }

    /// `(γ ⊗ I) D + D (γ ⊗ I) = 0`, exactly.
    pub fn anticommutes_with_grading(&self) -> bool {
        let gamma = self.grading();
        gamma
            .mul(&self.matrix)
            .add(&self.matrix.mul(&gamma))
            .is_zero()
    }

    /// `I ⊗ u_g` for the left translation `h ↦ g·h`; entries leaving the ball
    /// are dropped.
    pub fn translation(&self, translate: &[Option<usize>]) -> SparseMatrix {
        assert_eq!(translate.len(), self.ball);
        let triplets = (0..self.fock_dim).flat_map(|m| {
            translate.iter().enumerate().filter_map(move |(h, gh)| {
                gh.filter(|&x| x < self.ball)
                    .map(|x| (self.index(m, x), self.index(m, h), int(1)))
            })
        });
        SparseMatrix::from_triplets(self.dim(), self.dim(), triplets)
    }
}

fn parity_sign(mask: usize) -> Rational {
    int(if mask.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    })
}

/// Assembles `Σ_s c_s ⊗ ∂_s`.
pub fn assemble_dirac(
    dtable: &DerivationTable,
    cliff: &CliffordRep,
    max_dim: usize,
) -> Result<TruncatedDirac, DiracError> {
    assert_eq!(
        cliff.space().slots(),
        dtable.alphabet_size(),
        "Clifford slots must match the generating set"
    );
    let dim = cliff.dim().saturating_mul(dtable.len());
    if dim > max_dim {
        return Err(DiracError::Resource {
            dim,
            limit: max_dim,
        });
    }
    let n = dtable.len();
    let triplets = (0..dtable.alphabet_size()).flat_map(|s| {
        cliff.generator(s).entries().flat_map(move |(i, j, c)| {
            (0..n).filter_map(move |g| {
                let d = dtable.get(g, Letter(s as u8));
                (!d.is_zero()).then(|| (i * n + g, j * n + g, c * d))
            })
        })
    });
    Ok(TruncatedDirac {
        fock_dim: cliff.dim(),
        ball: n,
        matrix: SparseMatrix::from_triplets(dim, dim, triplets),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquareCheck {
    pub exact: bool,
    pub max_deviation: String,
}

/// Compares `D·D` with `I ⊗ Σ_s ∂_s²` entrywise in exact arithmetic.
pub fn square_check(dirac: &TruncatedDirac, dtable: &DerivationTable) -> SquareCheck {
    let square = dirac.matrix.mul(&dirac.matrix);
    let r2: Vec<Rational> = (0..dtable.len()).map(|g| dtable.r_squared(g)).collect();
    let expected = SparseMatrix::diagonal((0..dirac.dim()).map(|i| r2[i % dirac.ball].clone()));
    let deviation = square.sub(&expected).max_abs_entry();
    SquareCheck {
        exact: deviation.is_zero(),
        max_deviation: ratio_string(&deviation),
    }
}

/// Fiber spectrum of `D` at one ball element.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberSpectrum {
    pub g: usize,
    pub length: usize,
    pub r_squared: Rational,
    pub r: f64,
}

/// Closed-form spectrum: `±r(g)` with multiplicity `2^{2d−1}` each when
/// `r(g) > 0`, and `0` with multiplicity `2^{2d}` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub fock_dim: usize,
    pub fibers: Vec<FiberSpectrum>,
}

impl SpectralData {
    /// `(eigenvalue, multiplicity)` rows per fiber, in element order.
    pub fn rows(&self) -> Vec<(usize, f64, usize)> {
        let half = self.fock_dim / 2;
        self.fibers
            .iter()
            .flat_map(|f| {
                if f.r_squared.is_zero() {
                    vec![(f.g, 0.0, self.fock_dim)]
                } else {
                    vec![(f.g, -f.r, half), (f.g, f.r, half)]
                }
            })
            .collect()
    }

    /// Full eigenvalue multiset, sorted ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .rows()
            .into_iter()
            .flat_map(|(_, e, m)| std::iter::repeat_n(e, m))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// `(dim ker ∩ H⁺, dim ker ∩ H⁻)`.
    pub fn kernel_by_parity(&self) -> (usize, usize) {
        let zero = self.fibers.iter().filter(|f| f.r_squared.is_zero()).count();
        (zero * self.fock_dim / 2, zero * self.fock_dim / 2)
    }

    /// CSV with header `g_index,length,r_squared_num,r_squared_den,eigenvalue,multiplicity`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("g_index,length,r_squared_num,r_squared_den,eigenvalue,multiplicity\n");
        let half = self.fock_dim / 2;
        for f in &self.fibers {
            let (num, den) = (f.r_squared.numer(), f.r_squared.denom());
            if f.r_squared.is_zero() {
                out.push_str(&format!(
                    "{},{},{num},{den},{:?},{}\n",
                    f.g, f.length, 0.0f64, self.fock_dim
                ));
            } else {
                out.push_str(&format!(
                    "{},{},{num},{den},{:?},{half}\n",
                    f.g, f.length, -f.r
                ));
                out.push_str(&format!(
                    "{},{},{num},{den},{:?},{half}\n",
                    f.g, f.length, f.r
                ));
            }
        }
        out
    }
}

pub fn spectrum(dtable: &DerivationTable, fock_dim: usize) -> SpectralData {
    let fibers = map_range(Exec::default(), 0, dtable.len(), |g| {
        let r_squared = dtable.r_squared(g);
        let r = to_f64(&r_squared).sqrt();
        FiberSpectrum {
            g,
            length: dtable.length(g),
            r_squared,
            r,
        }
    });
    SpectralData { fock_dim, fibers }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereGrowth {
    pub n: usize,
    /// `min_{ℓ(g)=n} Σ_s ∂_s(g)²`, `None` for an empty sphere.
    pub min_r_squared: Option<String>,
    pub bound: String,
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventReport {
    pub spheres: Vec<SphereGrowth>,
    pub holds: bool,
    /// Elements with `Σ_s ∂_s(g)² < (ℓ(g)/2d)²`.
    pub violations: Vec<usize>,
    /// Elements with `Σ_s ∂_s(g)² = (ℓ(g)/2d)²` exactly.
    pub equality_cases: Vec<usize>,
}

/// Checks `min_{ℓ(g)=n} Σ_s ∂_s(g)² ≥ (n/2d)²` on every non-trivial sphere.
pub fn resolvent_growth_check(dtable: &DerivationTable) -> ResolventReport {
    let two_d = dtable.alphabet_size() as i64;
    let mut spheres = Vec::new();
    let mut violations = Vec::new();
    let mut equality_cases = Vec::new();
    for n in 1..=dtable.radius() {
        let bound = Rational::new(BigInt::from(n * n), BigInt::from(two_d * two_d));
        let mut min: Option<Rational> = None;
        for g in dtable.sphere(n) {
            let r2 = dtable.r_squared(g);
            match r2.cmp(&bound) {
                std::cmp::Ordering::Less => violations.push(g),
                std::cmp::Ordering::Equal => equality_cases.push(g),
                std::cmp::Ordering::Greater => {}
            }
            if min.as_ref().is_none_or(|m| r2 < *m) {
                min = Some(r2);
            }
        }
        spheres.push(SphereGrowth {
            n,
            margin: min.as_ref().map(|m| to_f64(&(m - &bound))),
            min_r_squared: min.as_ref().map(ratio_string),
            bound: ratio_string(&bound),
        });
    }
    ResolventReport {
        spheres,
        holds: violations.is_empty(),
        violations,
        equality_cases,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseVerdict {
    Trivial,
    Nontrivial,
}

/// Unit direction field `u(g) = ∂(g)/r(g)` for `g ≠ e`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    /// `(∂(g), r(g)²)` per element with `r(g) > 0`.
    pub directions: Vec<Option<(Vec<Rational>, Rational)>>,
    pub verdict: PhaseVerdict,
    /// Every fiber satisfies `c_{u(g)}² = I`.
    pub fibers_unitary: bool,
}

impl PhaseField {
    pub fn unit_vector_f64(&self, g: usize) -> Option<Vec<f64>> {
        let (v, r2) = self.directions[g].as_ref()?;
        let r = to_f64(r2).sqrt();
        Some(v.iter().map(|x| to_f64(x) / r).collect())
    }
}

/// L1-normalized direction; two non-negative vectors have the same unit
/// direction iff these agree.
fn l1_direction(v: &[Rational]) -> Vec<Rational> {
    let total: Rational = v.iter().map(|x| x.abs()).sum();
    v.iter().map(|x| x / &total).collect()
}

/// The phase is trivial on a truncation iff `u(g)` is constant over all
/// `g ≠ e` with `r(g) > 0`.
pub fn phase_field(dtable: &DerivationTable, cliff: &CliffordRep) -> PhaseField {
    let directions: Vec<Option<(Vec<Rational>, Rational)>> =
        map_range(Exec::default(), 0, dtable.len(), |g| {
            let r2 = dtable.r_squared(g);
            (!r2.is_zero()).then(|| (dtable.dense_row(g), r2))
        });
    let fibers_unitary = map_range(Exec::default(), 0, dtable.len(), |g| match &directions[g] {
        None => true,
        Some((v, r2)) => {
            let c = cliff.multiplication(v);
            c.mul(&c) == SparseMatrix::identity(cliff.dim()).scale(r2)
        }
    })
    .into_iter()
    .all(|ok| ok);
    let normalized: Vec<Vec<Rational>> = directions
        .iter()
        .flatten()
        .map(|(v, _)| l1_direction(v))
        .collect();
    let constant = normalized.windows(2).all(|w| w[0] == w[1]);
    PhaseField {
        directions,
        verdict: if constant {
            PhaseVerdict::Trivial
        } else {
            PhaseVerdict::Nontrivial
        },
        fibers_unitary,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub ker_plus: usize,
    pub ker_minus: usize,
    pub index: i64,
}

/// Kernel dimensions of `D₊: H⁺ → H⁻` and `D₋ = D₊ᵀ` by exact rank.
pub fn index_d_plus(dirac: &TruncatedDirac) -> IndexReport {
    let (even, odd): (Vec<usize>, Vec<usize>) =
        (0..dirac.dim()).partition(|&i| (i / dirac.ball).count_ones().is_multiple_of(2));
    let d_plus = dirac.matrix.submatrix(&odd, &even);
    let d_minus = dirac.matrix.submatrix(&even, &odd);
    let ker_plus = even.len() - d_plus.rank();
    let ker_minus = odd.len() - d_minus.rank();
    IndexReport {
        ker_plus,
        ker_minus,
        index: ker_plus as i64 - ker_minus as i64,
    }
}

/// Partial sums `T_n(t) = 2^{2d} Σ_{ℓ(g) ≤ n} exp(−t r(g)²)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatTrace {
    pub t: f64,
    pub partial_sums: Vec<f64>,
    /// Contribution of sphere `n`; the last one is the convergence diagnostic.
    pub increments: Vec<f64>,
}

impl HeatTrace {
    pub fn last_increment(&self) -> f64 {
        *self.increments.last().expect("sphere 0 is always present")
    }

    /// First sphere whose increment, and every later one, is below `tol`.
    pub fn settled_at(&self, tol: f64) -> Option<usize> {
        let last_big = self.increments.iter().rposition(|&x| x >= tol);
        match last_big {
            None => Some(0),
            Some(n) if n + 1 < self.increments.len() => Some(n + 1),
            Some(_) => None,
        }
    }
}

pub fn heat_trace(dtable: &DerivationTable, t: f64) -> Result<HeatTrace, DiracError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(DiracError::NonPositiveT(t));
    }
    let fock = (1u64 << dtable.alphabet_size()) as f64;
    let terms: Vec<f64> = map_range(Exec::default(), 0, dtable.len(), |g| {
        (-t * to_f64(&dtable.r_squared(g))).exp()
    });
    let increments: Vec<f64> = (0..=dtable.radius())
        .map(|n| fock * terms[dtable.sphere(n)].iter().sum::<f64>())
        .collect();
    let partial_sums = increments
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    Ok(HeatTrace {
        t,
        partial_sums,
        increments,
    })
}

/// `[D, I ⊗ u_g]` on the truncation.
#[derive(Debug, Clone)]
pub struct CommutatorReport {
    pub matrix: SparseMatrix,
    /// `translate[h] = Some(gh)` for interior `h` (with `gh` in the ball).
    pub translate: Vec<Option<usize>>,
    /// Power-iteration estimate of the norm restricted to interior columns.
    pub norm_estimate: f64,
    /// `max_h |Σ_s (∂_s(gh) − ∂_s(h)) v_s|₂` over interior `h`.
    pub block_norm: f64,
    /// `max_{h, s} |∂_s(gh) − ∂_s(h)|` over interior `h`, exact.
    pub max_coefficient: Rational,
}

impl CommutatorReport {
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.translate
            .iter()
            .enumerate()
            .filter_map(|(h, gh)| gh.map(|x| (h, x)))
    }
}

pub fn commutator(
    oracle: &dyn GroupOracle,
    table: &BallTable,
    dirac: &TruncatedDirac,
    dtable: &DerivationTable,
    g: &Element,
) -> Result<CommutatorReport, DiracError> {
    let radius = dtable.radius();
    let len_g = table.word_length(g).map_err(|_| DiracError::NotInBall)?;
    if len_g > radius {
        return Err(DiracError::MarginInsufficient {
            required: len_g,
            available: radius,
        });
    }
    let n = dtable.len();
    let translate: Vec<Option<usize>> = table
        .left_translate(oracle, g, Exec::default())
        .into_iter()
        .take(n)
        .map(|gh| gh.filter(|&x| x < n))
        .collect();
    let u = dirac.translation(&translate);
    let matrix = dirac.matrix.mul(&u).sub(&u.mul(&dirac.matrix));

    let mut block_sq = Rational::zero();
    let mut max_coefficient = Rational::zero();
    for (h, gh) in translate
        .iter()
        .enumerate()
        .filter_map(|(h, gh)| gh.map(|x| (h, x)))
    {
        let w: Vec<Rational> = dtable
            .dense_row(gh)
            .into_iter()
            .zip(dtable.dense_row(h))
            .map(|(a, b)| a - b)
            .collect();
        let sq: Rational = w.iter().map(|x| x * x).sum();
        if sq > block_sq {
            block_sq = sq;
        }
        for x in &w {
            if x.abs() > max_coefficient {
                max_coefficient = x.abs();
            }
        }
    }
    let interior_cols: Vec<usize> = (0..dirac.fock_dim)
        .flat_map(|m| {
            translate
                .iter()
                .enumerate()
                .filter(|(_, gh)| gh.is_some())
                .map(move |(h, _)| m * n + h)
        })
        .collect();
    let restricted = matrix.submatrix(&(0..matrix.rows()).collect::<Vec<_>>(), &interior_cols);
    Ok(CommutatorReport {
        norm_estimate: power_norm(&restricted, 500, 1e-13),
        block_norm: to_f64(&block_sq).sqrt(),
        max_coefficient,
        matrix,
        translate,
    })
}

/// Column of `[D, u_g]` at `Ω ⊗ e_h` from the closed form
/// `Σ_s (∂_s(gh) − ∂_s(h)) v_s ⊗ e_{gh}`.
pub fn commutator_closed_form(
    dirac: &TruncatedDirac,
    dtable: &DerivationTable,
    h: usize,
    gh: usize,
) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dirac.dim()];
    for s in 0..dtable.alphabet_size() {
        let l = Letter(s as u8);
        out[dirac.index(1 << s, gh)] = dtable.get(gh, l) - dtable.get(h, l);
    }
    out
}

/// Largest singular value by power iteration on `AᵀA`.
pub fn power_norm(a: &SparseMatrix, max_iter: usize, tol: f64) -> f64 {
    if a.cols() == 0 || a.is_zero() {
        return 0.0;
    }
    let at = a.transpose();
    // deterministic, generic start vector
    let mut x: Vec<f64> = (0..a.cols())
        .map(|i| 1.0 + ((i as f64 * 0.618_033_988_75).fract()))
        .collect();
    let mut sigma = 0.0;
    for _ in 0..max_iter {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
        let y = at.apply_f64(&a.apply_f64(&x));
        let lambda: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let next = lambda.max(0.0).sqrt();
        x = y;
        if (next - sigma).abs() <= tol * next.max(1.0) {
            return next;
        }
        sigma = next;
    }
    sigma
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ClassCVerdict {
    /// `M_n` shows no linear trend; `k_hat = max_n M_n`.
    BoundedEvidence {
        k_hat: String,
    },
    GrowthEvidence {
        slope: f64,
    },
}

/// Sequence `M_n = max_{ℓ(h)=n, s} ℓ(h) |p_s(gh)/p(gh) − p_s(h)/p(h)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCReport {
    /// `M_1, …, M_N`.
    pub per_sphere: Vec<Rational>,
    pub k_hat: Rational,
    pub slope: f64,
    pub verdict: ClassCVerdict,
}

/// Least-squares slope above which `M_n` counts as growing.
pub const GROWTH_SLOPE: f64 = 0.25;

/// Least-squares slope of `values[i]` against `n = first + i`, fitted on the
/// upper half of the range.
pub fn tail_slope(values: &[f64], first: usize) -> f64 {
    let start = values.len() / 2;
    let pts: Vec<(f64, f64)> = values[start..]
        .iter()
        .enumerate()
        .map(|(i, &y)| ((first + start + i) as f64, y))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

pub fn verdict_for(per_sphere: &[Rational]) -> (Rational, f64, ClassCVerdict) {
    let k_hat = per_sphere
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let slope = tail_slope(&per_sphere.iter().map(to_f64).collect::<Vec<_>>(), 1);
    let verdict = if slope > GROWTH_SLOPE {
        ClassCVerdict::GrowthEvidence { slope }
    } else {
        ClassCVerdict::BoundedEvidence {
            k_hat: ratio_string(&k_hat),
        }
    };
    (k_hat, slope, verdict)
}

/// Per-element ratio vector `p_s(x)/p(x)` (zero at `e`).
pub fn ratio_vector(counts: &GeodesicCounts, x: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); counts.alphabet_size()];
    for (s, q) in counts.ratios(x) {
        out[s.index()] = q;
    }
    out
}

/// Empirical class-𝒞 evidence for `g` on spheres `1..=radius`. Needs the
/// table to contain every `gh`, i.e. radius `radius + ℓ(g)`.
pub fn class_c_estimate(
    oracle: &dyn GroupOracle,
    table: &BallTable,
    counts: &GeodesicCounts,
    g: &Element,
    radius: usize,
) -> Result<ClassCReport, DiracError> {
    let len_g = table.word_length(g).map_err(|_| DiracError::NotInBall)?;
    let required = radius + len_g;
    if table.radius() < required {
        return Err(DiracError::MarginInsufficient {
            required,
            available: table.radius(),
        });
    }
    let per_sphere: Vec<Rational> = (1..=radius)
        .map(|n| {
            let range = table.sphere(n);
            map_range(Exec::default(), range.start, range.end, |h| {
                let gh = table
                    .index_of(&oracle.multiply(g, table.element(h)))
                    .expect("gh lies in the enlarged ball");
                let a = ratio_vector(counts, gh);
                let b = ratio_vector(counts, h);
                let len = int(n as i64);
                a.iter()
                    .zip(&b)
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
    Ok(ClassCReport {
        per_sphere,
        k_hat,
        slope,
        verdict,
    })
}

/// Exact ratio `p_s(x)/p(x)`.
pub fn geodesic_ratio(counts: &GeodesicCounts, x: usize, s: Letter) -> Rational {
    crate::rational::ratio(&counts.p_s(x, s), counts.p(x))
}

/// Convenience for diagnostics: exact rational rendered as `num/den`.
pub fn fmt_ratio(q: &BigRational) -> String {
    ratio_string(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{enumerate_ball, geodesic_counts, BallBudget};
    use crate::group::{build_oracle, parse_group, CompletionBudget, Oracle};

    struct Setup {
        oracle: Oracle,
        table: BallTable,
        counts: GeodesicCounts,
    }

    fn setup(group: &str, radius: usize) -> Setup {
        let oracle =
            build_oracle(&parse_group(group).unwrap(), &CompletionBudget::default()).unwrap();
        let table = enumerate_ball(oracle.as_ref(), radius, &BallBudget::default()).unwrap();
        let counts = geodesic_counts(&table);
        Setup {
            oracle,
            table,
            counts,
        }
    }

    fn dirac_for(s: &Setup, n: usize) -> (DerivationTable, CliffordRep, TruncatedDirac) {
        let dt = derivation_table(&s.table, &s.counts, n);
        let cliff = CliffordRep::new(dt.alphabet_size()).unwrap();
        let d = assemble_dirac(&dt, &cliff, DEFAULT_MAX_DIM).unwrap();
        (dt, cliff, d)
    }

    #[test]
    fn z2_derivations_are_coordinates() {
        let s = setup("Z2", 6);
        let dt = derivation_table(&s.table, &s.counts, 6);
        for n in 0..=3i64 {
            for m in 0..=3i64 {
                let g = s.table.index_of(&Element::Lattice(vec![n, m])).unwrap();
                assert_eq!(dt.get(g, Letter(1)), int(n));
                assert_eq!(dt.get(g, Letter(3)), int(m));
            }
        }
        assert!(dt.row(0).is_empty());
    }

    #[test]
    fn z2_dimension_and_structure() {
        let s = setup("Z2", 2);
        let (dt, _, d) = dirac_for(&s, 2);
        assert_eq!(d.dim(), 208);
        assert!(d.is_symmetric());
        assert!(d.anticommutes_with_grading());
        for g in 0..dt.len() {
            let col = d.matrix().transpose();
            assert_eq!(col.row(d.index(0, g)).len(), dt.row(g).len());
        }
    }

    #[test]
    fn square_is_diagonal() {
        let s = setup("Z", 10);
        let (dt, _, d) = dirac_for(&s, 10);
        let check = square_check(&d, &dt);
        assert!(check.exact, "{}", check.max_deviation);
        assert_eq!(check.max_deviation, "0/1");
    }

    #[test]
    fn fiber_eigenvalues() {
        let s = setup("Z2", 2);
        let (dt, _, _) = dirac_for(&s, 2);
        let spec = spectrum(&dt, 16);
        let g = s.table.index_of(&Element::Lattice(vec![1, 1])).unwrap();
        assert_eq!(spec.fibers[g].r_squared, int(2));
        assert!((spec.fibers[g].r - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(spec.rows()[0], (0, 0.0, 16));
        assert_eq!(spec.kernel_by_parity(), (8, 8));
        assert_eq!(spec.eigenvalues().len(), 16 * 13);

        let f = setup("F2", 3);
        let (dt, _, _) = dirac_for(&f, 3);
        let spec = spectrum(&dt, 16);
        for fiber in spec.fibers.iter().filter(|x| x.length == 3) {
            assert_eq!(fiber.r, 3.0);
        }
    }

    #[test]
    fn spectrum_csv_header_and_rows() {
        let s = setup("Z", 1);
        let (dt, _, _) = dirac_for(&s, 1);
        let csv = spectrum(&dt, 4).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "g_index,length,r_squared_num,r_squared_den,eigenvalue,multiplicity"
        );
        assert_eq!(lines[1], "0,0,0,1,0.0,4");
        assert_eq!(lines[2], "1,1,1,1,-1.0,2");
        assert_eq!(lines.len(), 6);
    }

    #[test]
    fn resolvent_bound_for_free_group_is_loose() {
        let s = setup("F2", 4);
        let (dt, _, _) = dirac_for(&s, 4);
        let report = resolvent_growth_check(&dt);
        assert!(report.holds);
        assert!(report.equality_cases.is_empty());
        assert_eq!(report.spheres[3].min_r_squared.as_deref(), Some("16/1"));
    }

    #[test]
    fn phase_directions() {
        let s = setup("Z", 3);
        let (dt, cliff, _) = dirac_for(&s, 3);
        let phase = phase_field(&dt, &cliff);
        assert_eq!(phase.verdict, PhaseVerdict::Nontrivial);
        assert!(phase.fibers_unitary);
        let a3 = s.table.index_of(&Element::Lattice(vec![3])).unwrap();
        let inv3 = s.table.index_of(&Element::Lattice(vec![-3])).unwrap();
        assert_eq!(phase.unit_vector_f64(a3).unwrap(), vec![0.0, 1.0]);
        assert_eq!(phase.unit_vector_f64(inv3).unwrap(), vec![1.0, 0.0]);
        assert!(phase.directions[0].is_none());
    }

    #[test]
    fn constant_field_is_trivial() {
        let rows = (0..4)
            .map(|g| {
                if g == 0 {
                    vec![]
                } else {
                    vec![(Letter(0), int(g))]
                }
            })
            .collect();
        let dt = DerivationTable::from_rows(2, vec![0, 1, 2, 3], vec![0, 1, 2, 3, 4], rows);
        let phase = phase_field(&dt, &CliffordRep::new(2).unwrap());
        assert_eq!(phase.verdict, PhaseVerdict::Trivial);
    }

    #[test]
    fn index_is_zero_on_small_balls() {
        let s = setup("Z", 4);
        let (_, _, d) = dirac_for(&s, 4);
        assert_eq!(
            index_d_plus(&d),
            IndexReport {
                ker_plus: 2,
                ker_minus: 2,
                index: 0
            }
        );
    }

    #[test]
    fn heat_trace_rejects_bad_t_and_starts_at_fock_dim() {
        let s = setup("Z2", 3);
        let (dt, _, _) = dirac_for(&s, 3);
        assert_eq!(heat_trace(&dt, -1.0), Err(DiracError::NonPositiveT(-1.0)));
        assert!(heat_trace(&dt, 0.0).is_err());
        let h = heat_trace(&dt, 1.0).unwrap();
        assert_eq!(h.partial_sums[0], 16.0);
        assert!(h.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        let slower = heat_trace(&dt, 2.0).unwrap();
        assert!(slower
            .partial_sums
            .iter()
            .zip(&h.partial_sums)
            .all(|(a, b)| a <= b));
    }

    #[test]
    fn settled_at_finds_tail() {
        let h = HeatTrace {
            t: 1.0,
            partial_sums: vec![],
            increments: vec![5.0, 1.0, 1e-9, 1e-10],
        };
        assert_eq!(h.settled_at(1e-8), Some(2));
        let h = HeatTrace {
            t: 1.0,
            partial_sums: vec![],
            increments: vec![5.0, 1.0],
        };
        assert_eq!(h.settled_at(1e-8), None);
    }

    #[test]
    fn commutator_matches_closed_form_on_z2() {
        let s = setup("Z2", 3);
        let (dt, _, d) = dirac_for(&s, 3);
        let a = s.oracle.generator(Letter(0));
        let rep = commutator(s.oracle.as_ref(), &s.table, &d, &dt, &a).unwrap();
        let cols = rep.matrix.transpose();
        for (h, gh) in rep.interior() {
            let expected = commutator_closed_form(&d, &dt, h, gh);
            let mut got = vec![Rational::zero(); d.dim()];
            for (i, v) in cols.row(d.index(0, h)) {
                got[*i] = v.clone();
            }
            assert_eq!(got, expected, "h={h}");
        }
        assert_eq!(rep.max_coefficient, int(1));
        assert!(
            (rep.norm_estimate - 1.0).abs() < 1e-9,
            "{}",
            rep.norm_estimate
        );
        assert!((rep.block_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn graded_commutator_with_clifford_words() {
        let s = setup("Z2", 2);
        let (dt, cliff, d) = dirac_for(&s, 2);
        let space = cliff.space();
        let id = SparseMatrix::identity(dt.len());
        let words: [&[usize]; 3] = [&[1], &[0, 3], &[2, 1, 3]];
        for word in words {
            let x = space.cliff_word(word).unwrap().kron(&id);
            let lhs = crate::clifford::graded_commutator(d.matrix(), true, &x, word.len() % 2 == 1);
            let mut rhs = SparseMatrix::zeros(d.dim(), d.dim());
            for (i, &si) in word.iter().enumerate() {
                let mut rest = word.to_vec();
                rest.remove(i);
                let sign = if i % 2 == 0 { 2 } else { -2 };
                let xi = space.cliff_word(&rest).unwrap().scale(&int(sign));
                rhs = rhs.add(&xi.kron(&dt.diagonal(Letter(si as u8))));
            }
            assert_eq!(lhs, rhs, "word={word:?}");
        }
    }

    #[test]
    fn class_c_of_identity_is_zero() {
        let s = setup("Z2", 4);
        let rep = class_c_estimate(
            s.oracle.as_ref(),
            &s.table,
            &s.counts,
            &s.oracle.identity(),
            4,
        )
        .unwrap();
        assert!(rep.per_sphere.iter().all(Zero::is_zero));
        assert!(matches!(rep.verdict, ClassCVerdict::BoundedEvidence { .. }));
    }

    #[test]
    fn class_c_needs_margin() {
        let s = setup("Z2", 4);
        let a = s.oracle.generator(Letter(0));
        assert_eq!(
            class_c_estimate(s.oracle.as_ref(), &s.table, &s.counts, &a, 4).unwrap_err(),
            DiracError::MarginInsufficient {
                required: 5,
                available: 4
            }
        );
    }

    #[test]
    fn resource_budget() {
        let s = setup("Z2", 3);
        let dt = derivation_table(&s.table, &s.counts, 3);
        let cliff = CliffordRep::new(4).unwrap();
        assert!(matches!(
            assemble_dirac(&dt, &cliff, 100),
            Err(DiracError::Resource {
                dim: 400,
                limit: 100
            })
        ));
    }
}
