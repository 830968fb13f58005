//! Parsers for finite presentations and named built-in groups.
//!
//! Presentation grammar (ASCII):
//!
//! ```text
//! presentation := '<' gen (',' gen)* '|' [relator (',' relator)*] '>'
//! gen          := lowercase letter
//! relator      := letter+          (whitespace between letters is ignored)
//! ```
//!
//! Uppercase letters denote inverses. Named groups: `Z`, `Zn`, `Fn`, `Cn`,
//! `B(2,1)` (also `BS(1,2)`, `BS21`), combined with `x` (direct product, binds
//! tighter) and `*` (free product), with parentheses.

use super::{GroupError, GroupSpec};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> GroupError {
        GroupError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), GroupError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.error(format!("expected {want:?}, found end of input"))),
        }
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        self.text[start..self.pos].parse().ok()
    }
}

/// Parses `<g1,g2,... | r1, r2, ...>`.
pub fn parse_presentation(text: &str) -> Result<GroupSpec, GroupError> {
    let mut cur = Cursor::new(text);
    let spec = presentation(&mut cur)?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.error("trailing input after presentation"));
    }
    Ok(spec)
}

fn presentation(cur: &mut Cursor<'_>) -> Result<GroupSpec, GroupError> {
    cur.expect('<')?;
    let mut generators = Vec::new();
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                if generators.contains(&c) {
                    return Err(GroupError::DuplicateGenerator(c));
                }
                generators.push(c);
                cur.bump();
            }
            Some(c) => {
                return Err(cur.error(format!("expected a lowercase generator, found {c:?}")))
            }
            None => return Err(cur.error("expected a generator, found end of input")),
        }
        cur.skip_ws();
        match cur.peek() {
            Some(',') => {
                cur.bump();
            }
            Some('|') => {
                cur.bump();
                break;
            }
            Some(c) => return Err(cur.error(format!("expected ',' or '|', found {c:?}"))),
            None => return Err(cur.error("expected ',' or '|', found end of input")),
        }
    }
    let alphabet = super::Alphabet::new(generators.clone())?;
    let mut relators = Vec::new();
    let mut current = Vec::new();
    loop {
        cur.skip_ws();
        let offset = cur.pos;
        match cur.bump() {
            Some('>') => break,
            Some(',') => {
                if !current.is_empty() {
                    relators.push(std::mem::take(&mut current));
                }
            }
            Some(c) if c.is_ascii_alphabetic() => match alphabet.letter_of(c) {
                Some(l) => current.push(l),
                None => return Err(GroupError::UndeclaredSymbol { symbol: c, offset }),
            },
            Some(c) => {
                return Err(GroupError::Syntax {
                    offset,
                    message: format!("unexpected {c:?} in relators"),
                })
            }
            None => return Err(cur.error("expected '>', found end of input")),
        }
    }
    if !current.is_empty() {
        relators.push(current);
    }
    Ok(GroupSpec::Presented {
        generators,
        relators,
    })
}

/// Parses a named built-in, a product expression, or a presentation.
pub fn parse_group(text: &str) -> Result<GroupSpec, GroupError> {
    let mut cur = Cursor::new(text);
    let spec = free_product(&mut cur)?;
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(cur.error(format!("unexpected {c:?}")));
    }
    Ok(spec)
}

fn free_product(cur: &mut Cursor<'_>) -> Result<GroupSpec, GroupError> {
    let mut spec = direct_product(cur)?;
    loop {
        cur.skip_ws();
        if cur.peek() != Some('*') {
            return Ok(spec);
        }
        cur.bump();
        let rhs = direct_product(cur)?;
        spec = GroupSpec::FreeProduct(Box::new(spec), Box::new(rhs));
    }
}

fn direct_product(cur: &mut Cursor<'_>) -> Result<GroupSpec, GroupError> {
    let mut spec = atom(cur)?;
    loop {
        cur.skip_ws();
        if cur.peek() != Some('x') {
            return Ok(spec);
        }
        cur.bump();
        let rhs = atom(cur)?;
        spec = GroupSpec::DirectProduct(Box::new(spec), Box::new(rhs));
    }
}

fn atom(cur: &mut Cursor<'_>) -> Result<GroupSpec, GroupError> {
    cur.skip_ws();
    let start = cur.pos;
    let rest = &cur.text[cur.pos..];
    for alias in ["B(2,1)", "BS(1,2)", "BS21"] {
        if rest.starts_with(alias) {
            cur.pos += alias.len();
            return Ok(GroupSpec::BaumslagSolitar21);
        }
    }
    let positive = |n: Option<u64>| match n {
        Some(n) if n > 0 && n <= u32::MAX as u64 => Ok(n),
        _ => Err(GroupError::Syntax {
            offset: start,
            message: "expected a positive parameter".into(),
        }),
    };
    match cur.peek() {
        Some('<') => presentation(cur),
        Some('(') => {
            cur.bump();
            let inner = free_product(cur)?;
            cur.expect(')')?;
            Ok(inner)
        }
        Some('Z') => {
            cur.bump();
            let n = if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                {
                    let n = cur.number();
                    positive(n)?
                }
            } else {
                1
            };
            Ok(GroupSpec::IntegerLattice(n as u32))
        }
        Some('F') => {
            cur.bump();
            let n = cur.number();
            Ok(GroupSpec::FreeGroup(positive(n)? as u32))
        }
        Some('C') => {
            cur.bump();
            let n = cur.number();
            let k = positive(n)?;
            if k < 2 {
                return Err(GroupError::InvalidParameter(
                    "cyclic order must be at least 2".into(),
                ));
            }
            Ok(GroupSpec::CyclicFinite(k))
        }
        Some(c) => Err(cur.error(format!("unknown group starting with {c:?}"))),
        None => Err(cur.error("expected a group, found end of input")),
    }
}
