//! Knuth–Bendix completion of string rewriting systems under the shortlex
//! order, and the oracle built on a confluent result.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{free_reduce, invert_word, Alphabet, Element, GroupOracle, Letter, Word};

/// Limits for [`kb_complete`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionBudget {
    pub max_rules: usize,
    pub max_rule_length: usize,
    /// Number of critical-pair passes.
    pub max_iterations: usize,
}

impl Default for CompletionBudget {
    fn default() -> Self {
        CompletionBudget {
            max_rules: 512,
            max_rule_length: 40,
            max_iterations: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompletionStatus {
    Confluent,
    /// The word problem was not settled; the string says which limit was hit.
    Incomplete(String),
}

#[derive(Debug, Clone)]
pub struct RewritingSystem {
    /// `(lhs, rhs)` with `rhs < lhs` in shortlex order.
    pub rules: Vec<(Word, Word)>,
    pub status: CompletionStatus,
    lengths: Vec<usize>,
    lookup: HashMap<Word, Word>,
}

/// Shortlex comparison: shorter words first, then lexicographic by letter index.
pub fn shortlex(u: &[Letter], v: &[Letter]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

impl RewritingSystem {
    fn from_rules(rules: Vec<(Word, Word)>, status: CompletionStatus) -> Self {
        let lookup: HashMap<Word, Word> = rules.iter().cloned().collect();
        let mut lengths: Vec<usize> = rules.iter().map(|(l, _)| l.len()).collect();
        lengths.sort_unstable();
        lengths.dedup();
        RewritingSystem {
            rules,
            status,
            lengths,
            lookup,
        }
    }

    pub fn is_confluent(&self) -> bool {
        self.status == CompletionStatus::Confluent
    }

    /// Rewrites `word` to an irreducible word.
    ///
    /// Letters are fed onto an output stack; the stack never contains a left
    /// hand side, so only its suffixes need checking after each push.
    pub fn reduce(&self, word: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(word.len());
        let mut pending: Vec<Letter> = word.iter().rev().copied().collect();
        while let Some(l) = pending.pop() {
            out.push(l);
            for &k in &self.lengths {
                if k > out.len() {
                    break;
                }
                if let Some(rhs) = self.lookup.get(&out[out.len() - k..]) {
                    out.truncate(out.len() - k);
                    pending.extend(rhs.iter().rev());
                    break;
                }
            }
        }
        out
    }
}

/// Runs bounded Knuth–Bendix completion on `⟨S | relators⟩`, where the
/// alphabet has `alphabet_size` letters paired as `(2i, 2i+1)`.
pub fn kb_complete(
    alphabet_size: usize,
    relators: &[Word],
    budget: &CompletionBudget,
) -> RewritingSystem {
    let mut equations: Vec<(Word, Word)> = (0..alphabet_size as u8)
        .map(|i| (vec![Letter(i), Letter(i).inverse()], Vec::new()))
        .collect();
    for r in relators {
        let r = free_reduce(r);
        if !r.is_empty() {
            equations.push((r, Vec::new()));
        }
    }

    let mut rules: Vec<(Word, Word)> = Vec::new();
    for _ in 0..budget.max_iterations {
        if let Err(reason) = absorb(&mut rules, &mut equations, budget) {
            return RewritingSystem::from_rules(rules, CompletionStatus::Incomplete(reason));
        }
        // critical pairs between every ordered pair of rules
        let system = RewritingSystem::from_rules(rules.clone(), CompletionStatus::Confluent);
        for (l1, r1) in &rules {
            for (l2, r2) in &rules {
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] != l2[..k] {
                        continue;
                    }
                    let mut left = r1.clone();
                    left.extend_from_slice(&l2[k..]);
                    let mut right = l1[..l1.len() - k].to_vec();
                    right.extend_from_slice(r2);
                    let (a, b) = (system.reduce(&left), system.reduce(&right));
                    if a != b {
                        equations.push((a, b));
                    }
                }
            }
        }
        if equations.is_empty() {
            return RewritingSystem::from_rules(rules, CompletionStatus::Confluent);
        }
    }
    RewritingSystem::from_rules(
        rules,
        CompletionStatus::Incomplete(format!(
            "critical pairs unresolved after {} passes",
            budget.max_iterations
        )),
    )
}

/// Orients and inter-reduces pending equations into `rules`.
fn absorb(
    rules: &mut Vec<(Word, Word)>,
    equations: &mut Vec<(Word, Word)>,
    budget: &CompletionBudget,
) -> Result<(), String> {
    while let Some((u, v)) = equations.pop() {
        let system = RewritingSystem::from_rules(rules.clone(), CompletionStatus::Confluent);
        let (u, v) = (system.reduce(&u), system.reduce(&v));
        let (lhs, rhs) = match shortlex(&u, &v) {
            Ordering::Equal => continue,
            Ordering::Greater => (u, v),
            Ordering::Less => (v, u),
        };
        if lhs.len() > budget.max_rule_length {
            return Err(format!(
                "rule length {} exceeds {}",
                lhs.len(),
                budget.max_rule_length
            ));
        }
        // rules whose lhs contains the new lhs become equations again
        let mut kept = Vec::with_capacity(rules.len() + 1);
        for (l, r) in rules.drain(..) {
            if contains(&l, &lhs) {
                equations.push((l, r));
            } else {
                kept.push((l, r));
            }
        }
        kept.push((lhs, rhs));
        let system = RewritingSystem::from_rules(kept.clone(), CompletionStatus::Confluent);
        *rules = kept
            .into_iter()
            .map(|(l, r)| {
                let r = system.reduce(&r);
                (l, r)
            })
            .collect();
        if rules.len() > budget.max_rules {
            return Err(format!("more than {} rules", budget.max_rules));
        }
    }
    rules.sort_by(|a, b| shortlex(&a.0, &b.0));
    Ok(())
}

fn contains(haystack: &[Letter], needle: &[Letter]) -> bool {
    needle.len() <= haystack.len() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Oracle for a finite presentation with a confluent rewriting system.
#[derive(Debug)]
pub(crate) struct Presented {
    alphabet: Alphabet,
    system: RewritingSystem,
}

impl Presented {
    pub(crate) fn new(alphabet: Alphabet, system: RewritingSystem) -> Self {
        debug_assert!(system.is_confluent());
        Presented { alphabet, system }
    }

    fn word<'a>(&self, g: &'a Element) -> &'a [Letter] {
        match g {
            Element::Word(w) => w,
            other => panic!("foreign element {other:?} passed to presentation oracle"),
        }
    }
}

impl GroupOracle for Presented {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Element {
        Element::Word(Vec::new())
    }

    fn generator(&self, letter: Letter) -> Element {
        Element::Word(self.system.reduce(&[letter]))
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let mut w = self.word(g).to_vec();
        w.extend_from_slice(self.word(h));
        Element::Word(self.system.reduce(&w))
    }

    fn invert(&self, g: &Element) -> Element {
        Element::Word(self.system.reduce(&invert_word(self.word(g))))
    }

    fn is_finite(&self) -> Option<bool> {
        None
    }

    fn format(&self, g: &Element) -> String {
        self.alphabet.format_word(self.word(g))
    }

    fn normal_form(&self, word: &[Letter]) -> Element {
        Element::Word(self.system.reduce(word))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(alphabet: &Alphabet, s: &str) -> Word {
        alphabet.parse_word(s).unwrap()
    }

    #[test]
    fn free_presentation_has_only_cancellation_rules() {
        let sys = kb_complete(4, &[], &CompletionBudget::default());
        assert!(sys.is_confluent());
        assert_eq!(sys.rules.len(), 4);
        assert!(sys.rules.iter().all(|(l, r)| l.len() == 2 && r.is_empty()));
    }

    #[test]
    fn z2_completes_to_sorted_normal_forms() {
        let al = Alphabet::standard(2).unwrap();
        let sys = kb_complete(4, &[w(&al, "abAB")], &CompletionBudget::default());
        assert!(sys.is_confluent());
        assert_eq!(al.format_word(&sys.reduce(&w(&al, "bAbaBa"))), "ab");
        assert_eq!(al.format_word(&sys.reduce(&w(&al, "BBaA b a"))), "aB");
        assert_eq!(al.format_word(&sys.reduce(&w(&al, "BAbA"))), "AA");
    }

    #[test]
    fn critical_pairs_of_z2_system_all_resolve() {
        let al = Alphabet::standard(2).unwrap();
        let sys = kb_complete(4, &[w(&al, "abAB")], &CompletionBudget::default());
        for (l1, r1) in &sys.rules {
            for (l2, r2) in &sys.rules {
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let mut x = r1.clone();
                        x.extend_from_slice(&l2[k..]);
                        let mut y = l1[..l1.len() - k].to_vec();
                        y.extend_from_slice(r2);
                        assert_eq!(sys.reduce(&x), sys.reduce(&y));
                    }
                }
            }
        }
    }

    #[test]
    fn baumslag_solitar_with_four_rules_is_incomplete() {
        let al = Alphabet::standard(2).unwrap();
        let tiny = CompletionBudget {
            max_rules: 4,
            max_rule_length: 40,
            max_iterations: 64,
        };
        let sys = kb_complete(4, &[w(&al, "aabAB")], &tiny);
        assert!(matches!(sys.status, CompletionStatus::Incomplete(_)));
    }

    #[test]
    fn finite_cyclic_presentation_completes() {
        let al = Alphabet::standard(1).unwrap();
        let sys = kb_complete(2, &[w(&al, "aaa")], &CompletionBudget::default());
        assert!(sys.is_confluent());
        assert_eq!(sys.reduce(&w(&al, "aaaaa")), w(&al, "A"));
    }

    #[test]
    fn reduction_is_idempotent() {
        let al = Alphabet::standard(2).unwrap();
        let sys = kb_complete(4, &[w(&al, "abAB")], &CompletionBudget::default());
        let word = w(&al, "BaBAbbaAbA");
        let once = sys.reduce(&word);
        assert_eq!(sys.reduce(&once), once);
    }
}
