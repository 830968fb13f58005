//! Direct and free products of two oracles. The generating set is the union
//! of the factors' generating sets, renamed `a, b, c, ...` in order.

use super::{Alphabet, Element, GroupError, GroupOracle, Letter, Oracle};

fn split(left: &Oracle, letter: Letter) -> (u8, Letter) {
    let n = left.alphabet().size() as u8;
    if letter.0 < n {
        (0, letter)
    } else {
        (1, Letter(letter.0 - n))
    }
}

fn joint_alphabet(left: &Oracle, right: &Oracle) -> Result<Alphabet, GroupError> {
    Alphabet::standard(left.alphabet().rank() + right.alphabet().rank())
}

#[derive(Debug)]
pub(crate) struct Direct {
    alphabet: Alphabet,
    left: Oracle,
    right: Oracle,
}

impl Direct {
    pub(crate) fn new(left: Oracle, right: Oracle) -> Result<Self, GroupError> {
        Ok(Direct {
            alphabet: joint_alphabet(&left, &right)?,
            left,
            right,
        })
    }

    fn parts<'a>(&self, g: &'a Element) -> (&'a Element, &'a Element) {
        match g {
            Element::Pair(x, y) => (x, y),
            other => panic!("foreign element {other:?} passed to direct product oracle"),
        }
    }
}

impl GroupOracle for Direct {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        Element::Pair(
            Box::new(self.left.identity()),
            Box::new(self.right.identity()),
        )
    }

    fn generator(&self, letter: Letter) -> Element {
        match split(&self.left, letter) {
            (0, l) => Element::Pair(
                Box::new(self.left.generator(l)),
                Box::new(self.right.identity()),
            ),
            (_, l) => Element::Pair(
                Box::new(self.left.identity()),
                Box::new(self.right.generator(l)),
            ),
        }
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let (g1, g2) = self.parts(g);
        let (h1, h2) = self.parts(h);
        Element::Pair(
            Box::new(self.left.multiply(g1, h1)),
            Box::new(self.right.multiply(g2, h2)),
        )
    }

    fn invert(&self, g: &Element) -> Element {
        let (g1, g2) = self.parts(g);
        Element::Pair(
            Box::new(self.left.invert(g1)),
            Box::new(self.right.invert(g2)),
        )
    }

    fn is_finite(&self) -> Option<bool> {
        match (self.left.is_finite(), self.right.is_finite()) {
            (Some(true), Some(true)) => Some(true),
            (Some(false), _) | (_, Some(false)) => Some(false),
            _ => None,
        }
    }

    fn format(&self, g: &Element) -> String {
        let (g1, g2) = self.parts(g);
        format!("({}, {})", self.left.format(g1), self.right.format(g2))
    }
}

/// Free product. Normal forms alternate between non-trivial elements of the
/// two factors.
#[derive(Debug)]
pub(crate) struct Free {
    alphabet: Alphabet,
    factors: [Oracle; 2],
}

impl Free {
    pub(crate) fn new(left: Oracle, right: Oracle) -> Result<Self, GroupError> {
        Ok(Free {
            alphabet: joint_alphabet(&left, &right)?,
            factors: [left, right],
        })
    }

    fn syllables<'a>(&self, g: &'a Element) -> &'a [(u8, Element)] {
        match g {
            Element::Alternating(v) => v,
            other => panic!("foreign element {other:?} passed to free product oracle"),
        }
    }
}

impl GroupOracle for Free {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        Element::Alternating(Vec::new())
    }

    fn generator(&self, letter: Letter) -> Element {
        let (side, l) = split(&self.factors[0], letter);
        let x = self.factors[side as usize].generator(l);
        if x == self.factors[side as usize].identity() {
            return self.identity();
        }
        Element::Alternating(vec![(side, x)])
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let mut out = self.syllables(g).to_vec();
        let mut rest = self.syllables(h).iter();
        for (side, y) in rest.by_ref() {
            match out.last() {
                Some((s, x)) if s == side => {
                    let oracle = &self.factors[*side as usize];
                    let z = oracle.multiply(x, y);
                    out.pop();
                    if z != oracle.identity() {
                        out.push((*side, z));
                        break;
                    }
                }
                _ => {
                    out.push((*side, y.clone()));
                    break;
                }
            }
        }
        out.extend(rest.cloned());
        Element::Alternating(out)
    }

    fn invert(&self, g: &Element) -> Element {
        Element::Alternating(
            self.syllables(g)
                .iter()
                .rev()
                .map(|(side, x)| (*side, self.factors[*side as usize].invert(x)))
                .collect(),
        )
    }

    fn is_finite(&self) -> Option<bool> {
        // factors always contain a generator outside e, so the product is infinite
        Some(false)
    }

    fn format(&self, g: &Element) -> String {
        let v = self.syllables(g);
        if v.is_empty() {
            return "e".into();
        }
        v.iter()
            .map(|(side, x)| {
                format!(
                    "{}{}",
                    if *side == 0 { "L" } else { "R" },
                    self.factors[*side as usize].format(x)
                )
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}
