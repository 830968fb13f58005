//! Word problem oracles for finitely generated groups.
//!
//! A group is described by a [`GroupSpec`] and turned into a [`GroupOracle`]
//! by [`build_oracle`]. Built-in families use closed-form normal forms; finite
//! presentations go through bounded Knuth–Bendix completion and are refused
//! when completion does not finish inside the budget.
//!
//! Letters are numbered so that generator `i` is letter `2i` and its inverse
//! is letter `2i + 1`. Every loop over the generating set follows this order.

mod builtin;
pub mod parse;
mod product;
pub mod rewriting;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use parse::{parse_group, parse_presentation};
pub use rewriting::{kb_complete, CompletionBudget, CompletionStatus, RewritingSystem};

/// One symbol of the symmetric generating set `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u8);

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// Index of the underlying generator.
    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Finite word over an alphabet. May be unreduced; the empty word is `e`.
pub type Word = Vec<Letter>;

/// Formal inverse of a word.
pub fn invert_word(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inverse()).collect()
}

/// Cancels adjacent `x x⁻¹` pairs.
pub fn free_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Ordered generator names. Generator `i` prints as its lowercase name and
/// its inverse as the uppercase form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<char>,
}

impl Alphabet {
    pub fn new(names: Vec<char>) -> Result<Self, GroupError> {
        if names.is_empty() {
            return Err(GroupError::InvalidParameter(
                "at least one generator is required".into(),
            ));
        }
        if names.len() > 26 {
            return Err(GroupError::InvalidParameter(
                "at most 26 generators are supported".into(),
            ));
        }
        for (i, c) in names.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(GroupError::InvalidParameter(format!(
                    "generator name {c:?} is not a lowercase letter"
                )));
            }
            if names[..i].contains(c) {
                return Err(GroupError::DuplicateGenerator(*c));
            }
        }
        Ok(Alphabet { names })
    }

    /// `a, b, c, ...` for `rank` generators.
    pub fn standard(rank: usize) -> Result<Self, GroupError> {
        Alphabet::new((0..rank).map(|i| (b'a' + i as u8) as char).collect())
    }

    /// Number of generators `d`.
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// Number of letters `2d = #S`.
    pub fn size(&self) -> usize {
        2 * self.names.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.size() as u8).map(Letter)
    }

    pub fn generator_names(&self) -> &[char] {
        &self.names
    }

    pub fn symbol(&self, l: Letter) -> char {
        let c = self.names[l.generator()];
        if l.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn letter_of(&self, c: char) -> Option<Letter> {
        let lower = c.to_ascii_lowercase();
        let i = self.names.iter().position(|&n| n == lower)?;
        Some(Letter((2 * i + usize::from(c.is_ascii_uppercase())) as u8))
    }

    /// Parses a word such as `"a b A"` or `"abA"`; whitespace is ignored.
    pub fn parse_word(&self, text: &str) -> Result<Word, GroupError> {
        let mut word = Vec::new();
        for (offset, c) in text.char_indices() {
            if c.is_whitespace() {
                continue;
            }
            match self.letter_of(c) {
                Some(l) => word.push(l),
                None => return Err(GroupError::UndeclaredSymbol { symbol: c, offset }),
            }
        }
        Ok(word)
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter().map(|&l| self.symbol(l)).collect()
    }

    /// Symbols of all letters in canonical order, e.g. `["a", "A", "b", "B"]`.
    pub fn symbols(&self) -> Vec<String> {
        self.letters().map(|l| self.symbol(l).to_string()).collect()
    }
}

/// Description of a group together with its generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    IntegerLattice(u32),
    FreeGroup(u32),
    CyclicFinite(u64),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    FreeProduct(Box<GroupSpec>, Box<GroupSpec>),
    /// `⟨a, b | a² b a⁻¹ b⁻¹⟩`.
    BaumslagSolitar21,
    Presented {
        generators: Vec<char>,
        relators: Vec<Word>,
    },
}

impl GroupSpec {
    /// Number of generators `d`.
    pub fn rank(&self) -> usize {
        match self {
            GroupSpec::IntegerLattice(n) | GroupSpec::FreeGroup(n) => *n as usize,
            GroupSpec::CyclicFinite(_) => 1,
            GroupSpec::BaumslagSolitar21 => 2,
            GroupSpec::DirectProduct(l, r) | GroupSpec::FreeProduct(l, r) => l.rank() + r.rank(),
            GroupSpec::Presented { generators, .. } => generators.len(),
        }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        match self {
            GroupSpec::IntegerLattice(0) | GroupSpec::FreeGroup(0) => {
                Err(GroupError::InvalidParameter("rank must be positive".into()))
            }
            GroupSpec::CyclicFinite(k) if *k < 2 => Err(GroupError::InvalidParameter(
                "cyclic order must be at least 2 (e is not allowed in S)".into(),
            )),
            GroupSpec::DirectProduct(l, r) | GroupSpec::FreeProduct(l, r) => {
                l.validate()?;
                r.validate()
            }
            GroupSpec::Presented {
                generators,
                relators,
            } => {
                let alphabet = Alphabet::new(generators.clone())?;
                if let Some(l) = relators
                    .iter()
                    .flatten()
                    .find(|l| l.index() >= alphabet.size())
                {
                    return Err(GroupError::InvalidParameter(format!(
                        "relator letter {} out of range",
                        l.0
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }?;
        if self.rank() > 26 {
            return Err(GroupError::InvalidParameter(
                "at most 26 generators are supported".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::IntegerLattice(1) => write!(f, "Z"),
            GroupSpec::IntegerLattice(n) => write!(f, "Z{n}"),
            GroupSpec::FreeGroup(n) => write!(f, "F{n}"),
            GroupSpec::CyclicFinite(k) => write!(f, "C{k}"),
            GroupSpec::DirectProduct(l, r) => write!(f, "({l} x {r})"),
            GroupSpec::FreeProduct(l, r) => write!(f, "({l} * {r})"),
            GroupSpec::BaumslagSolitar21 => write!(f, "B(2,1)"),
            GroupSpec::Presented {
                generators,
                relators,
            } => {
                let alphabet = Alphabet::new(generators.clone()).map_err(|_| fmt::Error)?;
                let gens: Vec<String> = generators.iter().map(|c| c.to_string()).collect();
                let rels: Vec<String> = relators.iter().map(|r| alphabet.format_word(r)).collect();
                write!(f, "<{} | {}>", gens.join(","), rels.join(", "))
            }
        }
    }
}

/// Canonical representation of a group element. Two elements of the same
/// oracle are equal iff their normal forms are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    /// Coordinates in `ℤⁿ`.
    Lattice(Vec<i64>),
    /// Freely reduced word, or an irreducible word of a confluent rewriting system.
    Word(Word),
    /// Residue modulo the order.
    Cyclic(u64),
    /// The affine map `x ↦ 2^scale · x + shift`.
    Affine {
        scale: i64,
        shift: BigRational,
    },
    Pair(Box<Element>, Box<Element>),
    /// Alternating sequence of non-trivial factor elements, tagged by side.
    Alternating(Vec<(u8, Element)>),
}

/// Word problem interface for a group with a fixed generating set.
///
/// Implementations are immutable and can be shared across threads.
pub trait GroupOracle: Send + Sync + fmt::Debug {
    fn alphabet(&self) -> &Alphabet;
    fn identity(&self) -> Element;
    fn generator(&self, letter: Letter) -> Element;
    fn multiply(&self, g: &Element, h: &Element) -> Element;
    fn invert(&self, g: &Element) -> Element;
    /// `Some(true)` when the group is known to be finite, `None` if unknown.
    fn is_finite(&self) -> Option<bool>;
    fn format(&self, g: &Element) -> String;

    fn normal_form(&self, word: &[Letter]) -> Element {
        word.iter().fold(self.identity(), |acc, &l| {
            self.multiply(&acc, &self.generator(l))
        })
    }

    fn right_multiply(&self, g: &Element, letter: Letter) -> Element {
        self.multiply(g, &self.generator(letter))
    }

    /// Letters `s` with `s = s⁻¹` as group elements (e.g. `a` in `C2`).
    fn involutive_letters(&self) -> Vec<Letter> {
        self.alphabet()
            .letters()
            .filter(|&l| !l.is_inverse() && self.generator(l) == self.generator(l.inverse()))
            .collect()
    }
}

pub type Oracle = Box<dyn GroupOracle>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(char),
    #[error("undeclared symbol {symbol:?} at offset {offset}")]
    UndeclaredSymbol { symbol: char, offset: usize },
    #[error("invalid group parameter: {0}")]
    InvalidParameter(String),
    #[error("Knuth-Bendix completion exceeded its budget ({rules} rules): {reason}")]
    CompletionExceeded { rules: usize, reason: String },
}

/// Builds the word-problem oracle for `spec`.
pub fn build_oracle(spec: &GroupSpec, budget: &CompletionBudget) -> Result<Oracle, GroupError> {
    spec.validate()?;
    Ok(match spec {
        GroupSpec::IntegerLattice(n) => Box::new(builtin::Lattice::new(*n as usize)?),
        GroupSpec::FreeGroup(r) => Box::new(builtin::Free::new(*r as usize)?),
        GroupSpec::CyclicFinite(k) => Box::new(builtin::Cyclic::new(*k)?),
        GroupSpec::BaumslagSolitar21 => Box::new(builtin::BaumslagSolitar21::new()),
        GroupSpec::DirectProduct(l, r) => Box::new(product::Direct::new(
            build_oracle(l, budget)?,
            build_oracle(r, budget)?,
        )?),
        GroupSpec::FreeProduct(l, r) => Box::new(product::Free::new(
            build_oracle(l, budget)?,
            build_oracle(r, budget)?,
        )?),
        GroupSpec::Presented {
            generators,
            relators,
        } => {
            let alphabet = Alphabet::new(generators.clone())?;
            let system = kb_complete(alphabet.size(), relators, budget);
            match system.status {
                CompletionStatus::Confluent => {
                    Box::new(rewriting::Presented::new(alphabet, system))
                }
                CompletionStatus::Incomplete(reason) => {
                    return Err(GroupError::CompletionExceeded {
                        rules: system.rules.len(),
                        reason,
                    })
                }
            }
        }
    })
}

pub(crate) fn format_dyadic(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
