//! Closed-form oracles for the built-in families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{
    format_dyadic, free_reduce, invert_word, Alphabet, Element, GroupError, GroupOracle, Letter,
};

/// `ℤⁿ` with the standard basis and its negatives.
#[derive(Debug)]
pub(crate) struct Lattice {
    alphabet: Alphabet,
}

impl Lattice {
    pub(crate) fn new(rank: usize) -> Result<Self, GroupError> {
        Ok(Lattice {
            alphabet: Alphabet::standard(rank)?,
        })
    }

    fn coords<'a>(&self, g: &'a Element) -> &'a [i64] {
        match g {
            Element::Lattice(v) => v,
            other => panic!("foreign element {other:?} passed to lattice oracle"),
        }
    }
}

impl GroupOracle for Lattice {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        Element::Lattice(vec![0; self.alphabet.rank()])
    }

    fn generator(&self, letter: Letter) -> Element {
        let mut v = vec![0; self.alphabet.rank()];
        v[letter.generator()] = if letter.is_inverse() { -1 } else { 1 };
        Element::Lattice(v)
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let (g, h) = (self.coords(g), self.coords(h));
        Element::Lattice(g.iter().zip(h).map(|(x, y)| x + y).collect())
    }

    fn invert(&self, g: &Element) -> Element {
        Element::Lattice(self.coords(g).iter().map(|x| -x).collect())
    }

    fn is_finite(&self) -> Option<bool> {
        Some(false)
    }

    fn format(&self, g: &Element) -> String {
        let parts: Vec<String> = self.coords(g).iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Free group on `r` generators; normal forms are freely reduced words.
#[derive(Debug)]
pub(crate) struct Free {
    alphabet: Alphabet,
}

impl Free {
    pub(crate) fn new(rank: usize) -> Result<Self, GroupError> {
        Ok(Free {
            alphabet: Alphabet::standard(rank)?,
        })
    }
}

fn word_of(g: &Element) -> &[Letter] {
    match g {
        Element::Word(w) => w,
        other => panic!("foreign element {other:?} passed to word oracle"),
    }
}

impl GroupOracle for Free {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        Element::Word(Vec::new())
    }

    fn generator(&self, letter: Letter) -> Element {
        Element::Word(vec![letter])
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let (g, h) = (word_of(g), word_of(h));
        // cancel across the junction only; both sides are already reduced
        let mut k = 0;
        while k < g.len() && k < h.len() && g[g.len() - 1 - k] == h[k].inverse() {
            k += 1;
        }
        let mut out = Vec::with_capacity(g.len() + h.len() - 2 * k);
        out.extend_from_slice(&g[..g.len() - k]);
        out.extend_from_slice(&h[k..]);
        Element::Word(out)
    }

    fn invert(&self, g: &Element) -> Element {
        Element::Word(invert_word(word_of(g)))
    }

    fn is_finite(&self) -> Option<bool> {
        Some(false)
    }

    fn format(&self, g: &Element) -> String {
        self.alphabet.format_word(word_of(g))
    }

    fn normal_form(&self, word: &[Letter]) -> Element {
        Element::Word(free_reduce(word))
    }
}

/// `ℤ/k` generated by `a = 1`.
#[derive(Debug)]
pub(crate) struct Cyclic {
    alphabet: Alphabet,
    order: u64,
}

impl Cyclic {
    pub(crate) fn new(order: u64) -> Result<Self, GroupError> {
        if order < 2 {
            return Err(GroupError::InvalidParameter(
                "cyclic order must be at least 2".into(),
            ));
        }
        Ok(Cyclic {
            alphabet: Alphabet::standard(1)?,
            order,
        })
    }

    fn residue(&self, g: &Element) -> u64 {
        match g {
            Element::Cyclic(r) => *r,
            other => panic!("foreign element {other:?} passed to cyclic oracle"),
        }
    }
}

impl GroupOracle for Cyclic {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        Element::Cyclic(0)
    }

    fn generator(&self, letter: Letter) -> Element {
        Element::Cyclic(if letter.is_inverse() {
            self.order - 1
        } else {
            1
        })
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        Element::Cyclic((self.residue(g) + self.residue(h)) % self.order)
    }

    fn invert(&self, g: &Element) -> Element {
        Element::Cyclic((self.order - self.residue(g)) % self.order)
    }

    fn is_finite(&self) -> Option<bool> {
        Some(true)
    }

    fn format(&self, g: &Element) -> String {
        format!("a^{}", self.residue(g))
    }
}

/// `⟨a, b | a² b a⁻¹ b⁻¹⟩` via its faithful affine action on the dyadic
/// rationals: `a ↦ (x ↦ x + 1)`, `b ↦ (x ↦ 2x)`. Products compose
/// right-to-left, so the word `s₁⋯s_k` acts as `s₁ ∘ ⋯ ∘ s_k`.
#[derive(Debug)]
pub(crate) struct BaumslagSolitar21 {
    alphabet: Alphabet,
}

impl BaumslagSolitar21 {
    pub(crate) fn new() -> Self {
        BaumslagSolitar21 {
            alphabet: Alphabet::standard(2).expect("two generators"),
        }
    }

    fn parts<'a>(&self, g: &'a Element) -> (i64, &'a BigRational) {
        match g {
            Element::Affine { scale, shift } => (*scale, shift),
            other => panic!("foreign element {other:?} passed to B(2,1) oracle"),
        }
    }
}

fn pow2(k: i64) -> BigRational {
    let two = BigInt::from(2);
    if k >= 0 {
        BigRational::from_integer(num_traits::pow(two, k as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(two, (-k) as usize))
    }
}

impl GroupOracle for BaumslagSolitar21 {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        Element::Affine {
            scale: 0,
            shift: BigRational::zero(),
        }
    }

    fn generator(&self, letter: Letter) -> Element {
        let (scale, shift) = match (letter.generator(), letter.is_inverse()) {
            (0, false) => (0, BigRational::one()),
            (0, true) => (0, -BigRational::one()),
            (_, false) => (1, BigRational::zero()),
            (_, true) => (-1, BigRational::zero()),
        };
        Element::Affine { scale, shift }
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        // (2^k x + c) ∘ (2^j x + d) = 2^(k+j) x + 2^k d + c
        let (k, c) = self.parts(g);
        let (j, d) = self.parts(h);
        let shift = if d.is_zero() {
            c.clone()
        } else {
            pow2(k) * d + c
        };
        Element::Affine {
            scale: k + j,
            shift,
        }
    }

    fn invert(&self, g: &Element) -> Element {
        let (k, c) = self.parts(g);
        Element::Affine {
            scale: -k,
            shift: -(pow2(-k) * c),
        }
    }

    fn is_finite(&self) -> Option<bool> {
        Some(false)
    }

    fn format(&self, g: &Element) -> String {
        let (k, c) = self.parts(g);
        format!("[2^{k}x+{}]", format_dyadic(c))
    }
}
