//! Exterior algebra `Λ(ℝ^S)` and its Clifford operators.
//!
//! Basis vectors are subsets of the `2d` generator slots, stored as bit masks
//! and ordered as unsigned integers; `Ω` is the empty mask. The wedge
//! `v_{i₁} ∧ ⋯ ∧ v_{i_k}` with `i₁ < ⋯ < i_k` is the basis vector of its mask.

use num_traits::One;
use thiserror::Error;

use crate::rational::{int, Rational};
use crate::sparse::SparseMatrix;

/// Largest supported `2d`; the Fock space then has `2^16` basis vectors.
pub const MAX_SLOTS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("slot {slot} out of range for {slots} slots")]
    SlotOutOfRange { slot: usize, slots: usize },
    #[error("slot {0} repeated in Clifford word")]
    RepeatedSlot(usize),
    #[error("{0} slots exceeds the supported maximum of {MAX_SLOTS}")]
    TooManySlots(usize),
}

/// The `2^{2d}`-dimensional Fock space over `2d` slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    slots: usize,
}

impl FockSpace {
    pub fn new(slots: usize) -> Result<Self, CliffordError> {
        if slots > MAX_SLOTS {
            return Err(CliffordError::TooManySlots(slots));
        }
        Ok(FockSpace { slots })
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn dim(&self) -> usize {
        1 << self.slots
    }

    pub fn degree(mask: usize) -> u32 {
        mask.count_ones()
    }

    fn check(&self, s: usize) -> Result<(), CliffordError> {
        if s >= self.slots {
            return Err(CliffordError::SlotOutOfRange {
                slot: s,
                slots: self.slots,
            });
        }
        Ok(())
    }

    /// `a_{v_s}`: `mask ↦ (−1)^{#occupied slots before s} (mask ∪ {s})`.
    pub fn creation(&self, s: usize) -> Result<SparseMatrix, CliffordError> {
        self.check(s)?;
        let bit = 1usize << s;
        let triplets = (0..self.dim()).filter(|m| m & bit == 0).map(|m| {
            let sign = if (m & (bit - 1)).count_ones().is_multiple_of(2) {
                1
            } else {
                -1
            };
            (m | bit, m, int(sign))
        });
        Ok(SparseMatrix::from_triplets(
            self.dim(),
            self.dim(),
            triplets,
        ))
    }

    /// `a*_{v_s}`, the transpose of the creation operator.
    pub fn annihilation(&self, s: usize) -> Result<SparseMatrix, CliffordError> {
        Ok(self.creation(s)?.transpose())
    }

    /// `c_s = a_{v_s} + a*_{v_s}`.
    pub fn clifford_generator(&self, s: usize) -> Result<SparseMatrix, CliffordError> {
        let a = self.creation(s)?;
        Ok(a.add(&a.transpose()))
    }

    /// Parity grading `γ = (−1)^{degree}`.
    pub fn grading(&self) -> Grading {
        Grading {
            signs: (0..self.dim())
                .map(|m| if Self::degree(m) % 2 == 0 { 1 } else { -1 })
                .collect(),
        }
    }

    /// Ordered product `c_{s₁} ⋯ c_{s_r}` of distinct generators.
    pub fn cliff_word(&self, slots: &[usize]) -> Result<SparseMatrix, CliffordError> {
        for (i, &s) in slots.iter().enumerate() {
            self.check(s)?;
            if slots[..i].contains(&s) {
                return Err(CliffordError::RepeatedSlot(s));
            }
        }
        let mut out = SparseMatrix::identity(self.dim());
        for &s in slots {
            out = out.mul(&self.clifford_generator(s)?);
        }
        Ok(out)
    }

    /// Closed form of the graded commutator `[c_s, c_{s₁} ⋯ c_{s_r}]`:
    /// `2 Σᵢ (−1)^{i+1} δ_{s,sᵢ} c_{s₁} ⋯ ĉ_{sᵢ} ⋯ c_{s_r}` (1-based `i`).
    pub fn commutator_closed_form(
        &self,
        s: usize,
        slots: &[usize],
    ) -> Result<SparseMatrix, CliffordError> {
        let mut out = SparseMatrix::zeros(self.dim(), self.dim());
        for (i, &si) in slots.iter().enumerate() {
            if si != s {
                continue;
            }
            let mut rest = slots.to_vec();
            rest.remove(i);
            let sign = if i % 2 == 0 { 2 } else { -2 };
            out = out.add(&self.cliff_word(&rest)?.scale(&int(sign)));
        }
        Ok(out)
    }
}

/// Diagonal `±1` grading operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    signs: Vec<i8>,
}

impl Grading {
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn matrix(&self) -> SparseMatrix {
        SparseMatrix::diagonal(self.signs.iter().map(|&s| int(s as i64)))
    }

    pub fn trace(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }
}

/// Graded commutator `xy − (−1)^{|x||y|} yx` for homogeneous `x`, `y`.
pub fn graded_commutator(
    x: &SparseMatrix,
    x_odd: bool,
    y: &SparseMatrix,
    y_odd: bool,
) -> SparseMatrix {
    let xy = x.mul(y);
    let yx = y.mul(x);
    if x_odd && y_odd {
        xy.add(&yx)
    } else {
        xy.sub(&yx)
    }
}

/// The Clifford generators of a Fock space, built once.
#[derive(Debug, Clone)]
pub struct CliffordRep {
    space: FockSpace,
    generators: Vec<SparseMatrix>,
}

impl CliffordRep {
    pub fn new(slots: usize) -> Result<Self, CliffordError> {
        let space = FockSpace::new(slots)?;
        let generators = (0..slots)
            .map(|s| space.clifford_generator(s))
            .collect::<Result<_, _>>()?;
        Ok(CliffordRep { space, generators })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn generator(&self, s: usize) -> &SparseMatrix {
        &self.generators[s]
    }

    /// `Σ_s w_s c_s`.
    pub fn multiplication(&self, weights: &[Rational]) -> SparseMatrix {
        assert_eq!(weights.len(), self.generators.len());
        let triplets = self
            .generators
            .iter()
            .zip(weights)
            .flat_map(|(c, w)| c.entries().map(move |(i, j, v)| (i, j, v * w)));
        SparseMatrix::from_triplets(self.dim(), self.dim(), triplets)
    }
}

/// Basis vector of `mask` as an exact column vector.
pub fn basis_vector(dim: usize, mask: usize) -> Vec<Rational> {
    (0..dim)
        .map(|i| if i == mask { Rational::one() } else { int(0) })
        .collect()
}
