//! Cayley-graph balls, word lengths and exact geodesic counts.
//!
//! Edges are right multiplications between `g` and `g·s`, so the word metric is
//! `d(g, h) = ℓ(h⁻¹g)`. With this orientation `p_s(g) = p(g·s)` whenever the
//! first step `s` of a geodesic from `g` to `e` is possible.

use std::collections::HashMap;
use std::ops::Range;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde::Serialize as DeriveSerialize;
use thiserror::Error;

use crate::exec::{map_range, map_slice, Exec};
use crate::group::{Element, GroupOracle, Letter};
use crate::rational::ratio;

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CayleyError {
    #[error(
        "resource budget exceeded at radius {radius_reached} with {elements} elements: {reason}"
    )]
    ResourceExceeded {
        radius_reached: usize,
        elements: usize,
        reason: String,
    },
    #[error("element {0} is not in the enumerated ball")]
    NotInBall(String),
    #[error("brute force would enumerate {sequences} sequences (limit {limit})")]
    BruteForceBudget { sequences: f64, limit: u64 },
}

/// Limits for [`enumerate_ball`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallBudget {
    pub max_elements: usize,
    pub max_seconds: Option<f64>,
}

impl Default for BallBudget {
    fn default() -> Self {
        BallBudget {
            max_elements: 4_000_000,
            max_seconds: None,
        }
    }
}

/// The ball `B^N` with word lengths and the right-multiplication graph.
///
/// Elements are ordered by length, and inside a sphere by (parent index,
/// generator order) of their first discovery. Any prefix
/// `0..sphere_offsets[n + 1]` is therefore the ball of radius `n`.
#[derive(Debug, Clone)]
pub struct BallTable {
    radius: usize,
    letters: usize,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    lengths: Vec<u32>,
    sphere_offsets: Vec<usize>,
    right: Vec<u32>,
    involutive: Vec<Letter>,
}

impl BallTable {
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `#S = 2d`.
    pub fn alphabet_size(&self) -> usize {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i] as usize
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    /// Index range of the sphere of radius `n` (empty beyond the radius).
    pub fn sphere(&self, n: usize) -> Range<usize> {
        if n > self.radius {
            return self.len()..self.len();
        }
        self.sphere_offsets[n]..self.sphere_offsets[n + 1]
    }

    pub fn sphere_offsets(&self) -> &[usize] {
        &self.sphere_offsets
    }

    /// `#𝕊^n` for `n = 0..=N`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.sphere_offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect()
    }

    /// Number of elements of length at most `n`.
    pub fn ball_size(&self, n: usize) -> usize {
        self.sphere_offsets[n.min(self.radius) + 1]
    }

    /// Index of `g·s`, if it lies in the ball.
    pub fn neighbor(&self, g: usize, s: Letter) -> Option<usize> {
        match self.right[g * self.letters + s.index()] {
            NONE => None,
            j => Some(j as usize),
        }
    }

    /// Letters `s` with `ℓ(g·s) = ℓ(g) − 1`, with the target index.
    pub fn down_neighbors(&self, g: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        let len = self.lengths[g];
        (0..self.letters as u8).filter_map(move |s| {
            let j = self.neighbor(g, Letter(s))?;
            (len > 0 && self.lengths[j] == len - 1).then_some((Letter(s), j))
        })
    }

    /// Letters `s ∈ S` that equal their own inverse in the group.
    pub fn involutive_letters(&self) -> &[Letter] {
        &self.involutive
    }

    /// Word length of `g`, read from the BFS.
    pub fn word_length(&self, g: &Element) -> Result<usize, CayleyError> {
        self.index_of(g)
            .map(|i| self.length(i))
            .ok_or_else(|| CayleyError::NotInBall(format!("{g:?}")))
    }

    /// A geodesic word for element `i`, following the first down-neighbor.
    pub fn geodesic_word(&self, mut i: usize) -> Vec<Letter> {
        let mut path = Vec::new();
        while let Some((s, j)) = self.down_neighbors(i).next() {
            path.push(s);
            i = j;
        }
        // g·s_1⋯s_k = e, so g = s_k⁻¹ ⋯ s_1⁻¹
        path.iter().rev().map(|s| s.inverse()).collect()
    }

    /// Left translation `h ↦ g·h` on the ball, `None` where it leaves the ball.
    pub fn left_translate(
        &self,
        oracle: &dyn GroupOracle,
        g: &Element,
        exec: Exec,
    ) -> Vec<Option<usize>> {
        map_slice(exec, &self.elements, |h| {
            self.index_of(&oracle.multiply(g, h))
        })
    }
}

/// Enumerates `B^N` by breadth-first search from `e`.
pub fn enumerate_ball(
    oracle: &dyn GroupOracle,
    radius: usize,
    budget: &BallBudget,
) -> Result<BallTable, CayleyError> {
    enumerate_ball_with(oracle, radius, budget, Exec::default())
}

pub fn enumerate_ball_with(
    oracle: &dyn GroupOracle,
    radius: usize,
    budget: &BallBudget,
    exec: Exec,
) -> Result<BallTable, CayleyError> {
    let started = Instant::now();
    let letters: Vec<Letter> = oracle.alphabet().letters().collect();
    let k = letters.len();
    let identity = oracle.identity();
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::from([(identity, 0usize)]);
    let mut lengths = vec![0u32];
    let mut sphere_offsets = vec![0usize, 1];
    let mut right: Vec<u32> = Vec::new();

    for n in 0..=radius {
        let sphere = sphere_offsets[n]..sphere_offsets[n + 1];
        // products in parallel, then a sequential pass fixes discovery order
        let products: Vec<Vec<Element>> = map_slice(exec, &elements[sphere.clone()], |g| {
            letters
                .iter()
                .map(|&s| oracle.right_multiply(g, s))
                .collect()
        });
        for products in products {
            for h in products {
                let j = match index.get(&h) {
                    Some(&j) => j as u32,
                    None if n < radius => {
                        let j = elements.len();
                        index.insert(h.clone(), j);
                        elements.push(h);
                        lengths.push(n as u32 + 1);
                        j as u32
                    }
                    None => NONE,
                };
                right.push(j);
            }
        }
        if n < radius {
            sphere_offsets.push(elements.len());
        }
        if elements.len() > budget.max_elements {
            return Err(CayleyError::ResourceExceeded {
                radius_reached: n,
                elements: elements.len(),
                reason: format!("more than {} elements", budget.max_elements),
            });
        }
        if let Some(limit) = budget.max_seconds {
            let elapsed = started.elapsed().as_secs_f64();
            if elapsed > limit {
                return Err(CayleyError::ResourceExceeded {
                    radius_reached: n,
                    elements: elements.len(),
                    reason: format!("{elapsed:.1}s elapsed (limit {limit}s)"),
                });
            }
        }
    }
    debug_assert_eq!(right.len(), elements.len() * k);
    Ok(BallTable {
        radius,
        letters: k,
        elements,
        index,
        lengths,
        sphere_offsets,
        right,
        involutive: oracle.involutive_letters(),
    })
}

/// Exact geodesic counts `p(g)` and `p_s(g)` on a ball.
#[derive(Debug, Clone)]
pub struct GeodesicCounts {
    letters: usize,
    p: Vec<BigUint>,
    /// index of `g·s` when it is one step closer to `e`, else `NONE`
    first_step: Vec<u32>,
}

impl GeodesicCounts {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.letters
    }

    pub fn p(&self, g: usize) -> &BigUint {
        &self.p[g]
    }

    /// Number of geodesics from `g` to `e` whose first step is `s`.
    pub fn p_s(&self, g: usize, s: Letter) -> BigUint {
        match self.first_step[g * self.letters + s.index()] {
            NONE => BigUint::zero(),
            j => self.p[j as usize].clone(),
        }
    }

    /// Non-zero ratios `p_s(g)/p(g)` in letter order. Empty at `e`.
    pub fn ratios(&self, g: usize) -> Vec<(Letter, BigRational)> {
        (0..self.letters as u8)
            .filter_map(|s| {
                let j = self.first_step[g * self.letters + s as usize];
                (j != NONE).then(|| (Letter(s), ratio(&self.p[j as usize], &self.p[g])))
            })
            .collect()
    }

    /// Index of `g·s` when `p_s(g) > 0`.
    pub fn step_target(&self, g: usize, s: Letter) -> Option<usize> {
        match self.first_step[g * self.letters + s.index()] {
            NONE => None,
            j => Some(j as usize),
        }
    }
}

pub fn geodesic_counts(table: &BallTable) -> GeodesicCounts {
    geodesic_counts_with(table, Exec::default())
}

/// Dynamic programming in increasing length: `p(e) = 1` and
/// `p(g) = Σ_{ℓ(gs) = ℓ(g) − 1} p(gs)`.
pub fn geodesic_counts_with(table: &BallTable, exec: Exec) -> GeodesicCounts {
    let k = table.alphabet_size();
    let first_step: Vec<u32> = map_range(exec, 0, table.len(), |g| {
        let mut row = vec![NONE; k];
        for (s, j) in table.down_neighbors(g) {
            row[s.index()] = j as u32;
        }
        row
    })
    .concat();
    let mut p: Vec<BigUint> = Vec::with_capacity(table.len());
    p.push(BigUint::one());
    for n in 1..=table.radius() {
        let range = table.sphere(n);
        let done = &p;
        let sphere: Vec<BigUint> = map_range(exec, range.start, range.end, |g| {
            first_step[g * k..(g + 1) * k]
                .iter()
                .filter(|&&j| j != NONE)
                .map(|&j| &done[j as usize])
                .sum()
        });
        p.extend(sphere);
    }
    GeodesicCounts {
        letters: k,
        p,
        first_step,
    }
}

/// Counts geodesics from `g` (of length `length`) to `e` by trying every
/// letter sequence of that length. A sequence of `ℓ(g)` letters that ends at
/// `e` is necessarily a geodesic, so no word lengths are consulted.
pub fn brute_force_geodesics(
    oracle: &dyn GroupOracle,
    g: &Element,
    length: usize,
    max_sequences: u64,
) -> Result<(BigUint, Vec<BigUint>), CayleyError> {
    let k = oracle.alphabet().size();
    let sequences = (k as f64).powi(length as i32);
    if sequences > max_sequences as f64 {
        return Err(CayleyError::BruteForceBudget {
            sequences,
            limit: max_sequences,
        });
    }
    let generators: Vec<Element> = oracle
        .alphabet()
        .letters()
        .map(|s| oracle.generator(s))
        .collect();
    let identity = oracle.identity();
    let mut per_first = vec![BigUint::zero(); k];
    if length == 0 {
        return Ok((BigUint::from(u8::from(*g == identity)), per_first));
    }

    fn walk(
        oracle: &dyn GroupOracle,
        gens: &[Element],
        e: &Element,
        x: &Element,
        left: usize,
    ) -> u64 {
        if left == 0 {
            return u64::from(x == e);
        }
        gens.iter()
            .map(|s| walk(oracle, gens, e, &oracle.multiply(x, s), left - 1))
            .sum()
    }

    for (s, gen) in generators.iter().enumerate() {
        let x = oracle.multiply(g, gen);
        per_first[s] = BigUint::from(walk(oracle, &generators, &identity, &x, length - 1));
    }
    let total = per_first.iter().sum();
    Ok((total, per_first))
}

struct CountMap(Vec<(String, String)>);

impl Serialize for CountMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(DeriveSerialize)]
struct ExportElement {
    index: usize,
    length: usize,
    normal_form_string: String,
    p: String,
    p_s: CountMap,
}

#[derive(DeriveSerialize)]
struct Export {
    radius: usize,
    sphere_sizes: Vec<usize>,
    involutive_generators: Vec<String>,
    elements: Vec<ExportElement>,
}

/// Ball export as pretty JSON; counts are decimal strings.
pub fn export_json(oracle: &dyn GroupOracle, table: &BallTable, counts: &GeodesicCounts) -> String {
    let alphabet = oracle.alphabet();
    let elements = (0..table.len())
        .map(|i| ExportElement {
            index: i,
            length: table.length(i),
            normal_form_string: oracle.format(table.element(i)),
            p: counts.p(i).to_string(),
            p_s: CountMap(
                alphabet
                    .letters()
                    .map(|s| (alphabet.symbol(s).to_string(), counts.p_s(i, s).to_string()))
                    .collect(),
            ),
        })
        .collect();
    let export = Export {
        radius: table.radius(),
        sphere_sizes: table.sphere_sizes(),
        involutive_generators: table
            .involutive_letters()
            .iter()
            .map(|&s| alphabet.symbol(s).to_string())
            .collect(),
        elements,
    };
    serde_json::to_string_pretty(&export).expect("ball export serializes")
}
