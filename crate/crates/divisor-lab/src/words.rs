//! Words in the free product of a group with a free group, the text DSL for
//! writing them, and (generalized) equation systems with their exponent-sum
//! matrices.
//!
//! DSL grammar:
//! ```text
//! word   := factor+
//! factor := atom ["^" int]
//! atom   := ident | "(" word ")" | "[" word "," word "]"
//! ident  := letter (letter | digit)*
//! ```
//! Multiplication is juxtaposition; idents are separated by whitespace or
//! punctuation; `[u,v]` is the commutator u^{-1} v^{-1} u v; powers and
//! parenthesized groups are unrolled into plain letter sequences.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::group::{DoubleCoset, ElementId, FiniteGroup, Subgroup};
use crate::IntMatrix;

/// Hard ceiling on the letter count of a single parsed word, so `w^999999999`
/// cannot exhaust memory.
pub const MAX_WORD_LETTERS: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unbound name {name:?} at byte {position}")]
    UnboundName { name: String, position: usize },
    #[error("variable index {index} exceeds arity {arity}")]
    ArityExceeded { index: usize, arity: usize },
    #[error("word expands to more than {MAX_WORD_LETTERS} letters")]
    TooLong,
}

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("word arity {word} does not match system arity {system}")]
    ArityMismatch { word: usize, system: usize },
    #[error("subsystem index {0} out of range")]
    SubsystemIndex(usize),
    #[error("equation data belongs to a different group")]
    GroupMismatch,
    #[error("a system needs at least one unknown")]
    NoUnknowns,
}

/// One letter of a word: a signed variable occurrence or a group coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    /// `index` is 1-based (1..=arity); `inverse` marks exponent -1.
    Var {
        index: usize,
        inverse: bool,
    },
    Coeff(ElementId),
}

/// A word over the coefficients and variables x_1..x_m, stored unreduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    arity: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(arity: usize, letters: Vec<Letter>) -> Result<Self, ParseError> {
        for letter in &letters {
            if let Letter::Var { index, .. } = letter {
                if *index == 0 || *index > arity {
                    return Err(ParseError::ArityExceeded {
                        index: *index,
                        arity,
                    });
                }
            }
        }
        Ok(Word { arity, letters })
    }

    pub fn empty(arity: usize) -> Self {
        Word {
            arity,
            letters: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_coefficient_free(&self) -> bool {
        self.letters.iter().all(|l| matches!(l, Letter::Var { .. }))
    }

    /// Net signed count of occurrences of variable `j` (1-based).
    pub fn exponent_sum(&self, j: usize) -> i64 {
        assert!(j >= 1 && j <= self.arity, "variable index out of range");
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Var { index, inverse } if *index == j => {
                    if *inverse {
                        -1
                    } else {
                        1
                    }
                }
                _ => 0,
            })
            .sum()
    }

    pub fn exponent_sums(&self) -> Vec<i64> {
        (1..=self.arity).map(|j| self.exponent_sum(j)).collect()
    }

    /// Left-to-right product of the letters under the substitution.
    pub fn evaluate(&self, group: &FiniteGroup, assignment: &[ElementId]) -> ElementId {
        assert_eq!(assignment.len(), self.arity, "assignment arity mismatch");
        let mut acc = group.identity();
        for letter in &self.letters {
            let x = match letter {
                Letter::Var { index, inverse } => {
                    let v = assignment[index - 1];
                    if *inverse {
                        group.inv(v)
                    } else {
                        v
                    }
                }
                Letter::Coeff(c) => *c,
            };
            acc = group.mul(acc, x);
        }
        acc
    }

    /// Formal inverse: reversed letters with flipped signs; coefficient
    /// letters invert through the group.
    pub fn inverse(&self, group: &FiniteGroup) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| invert_letter(*l, group))
            .collect();
        Word {
            arity: self.arity,
            letters,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            arity: self.arity,
            letters,
        }
    }

    /// Distinct coefficient letters, in element-id order.
    pub fn coefficients(&self) -> Vec<ElementId> {
        let set: BTreeSet<ElementId> = self
            .letters
            .iter()
            .filter_map(|l| match l {
                Letter::Coeff(c) => Some(*c),
                _ => None,
            })
            .collect();
        set.into_iter().collect()
    }

    /// Renders the word back into DSL text. Variables take their names from
    /// `unknowns`; coefficients go through `coeff_name`.
    pub fn to_dsl(&self, unknowns: &[String], coeff_name: &dyn Fn(ElementId) -> String) -> String {
        assert_eq!(unknowns.len(), self.arity);
        if self.letters.is_empty() {
            // An empty factor list is not valid DSL; emit a cancelling pair.
            if self.arity > 0 {
                return format!("{0} {0}^-1", unknowns[0]);
            }
            panic!("cannot render an empty word with no variables");
        }
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Var { index, inverse } => {
                    let name = &unknowns[*index - 1];
                    if *inverse {
                        format!("{name}^-1")
                    } else {
                        name.clone()
                    }
                }
                Letter::Coeff(c) => coeff_name(*c),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn invert_letter(l: Letter, group: &FiniteGroup) -> Letter {
    match l {
        Letter::Var { index, inverse } => Letter::Var {
            index,
            inverse: !inverse,
        },
        Letter::Coeff(c) => Letter::Coeff(group.inv(c)),
    }
}

/// Parses DSL text into a word. Idents matching an entry of `unknowns` become
/// variables; idents in `coefficients` become group elements; anything else
/// is unbound.
pub fn parse_word(
    text: &str,
    unknowns: &[String],
    coefficients: &BTreeMap<String, ElementId>,
    group: &FiniteGroup,
) -> Result<Word, ParseError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        unknowns,
        coefficients,
        group,
    };
    let letters = parser.parse_word_body(&[])?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Word::new(unknowns.len(), letters)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    unknowns: &'a [String],
    coefficients: &'a BTreeMap<String, ElementId>,
    group: &'a FiniteGroup,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(u8::is_ascii_whitespace)
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    /// word := factor+ (stops at any byte in `terminators`)
    fn parse_word_body(&mut self, terminators: &[u8]) -> Result<Vec<Letter>, ParseError> {
        let mut letters = Vec::new();
        let mut any = false;
        while let Some(c) = self.peek() {
            if terminators.contains(&c) {
                break;
            }
            letters.extend(self.parse_factor()?);
            if letters.len() > MAX_WORD_LETTERS {
                return Err(ParseError::TooLong);
            }
            any = true;
        }
        if !any {
            return Err(self.syntax("expected a factor"));
        }
        Ok(letters)
    }

    /// factor := atom ["^" int]
    fn parse_factor(&mut self) -> Result<Vec<Letter>, ParseError> {
        let atom = self.parse_atom()?;
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b'^') {
            self.pos += 1;
            let exponent = self.parse_int()?;
            return repeat_atom(&atom, exponent, self.group);
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<Vec<Letter>, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_word_body(b")")?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.parse_word_body(b",")?;
                self.expect(b',')?;
                let v = self.parse_word_body(b"]")?;
                self.expect(b']')?;
                // [u, v] = u^{-1} v^{-1} u v
                let mut letters = invert_letters(&u, self.group);
                letters.extend(invert_letters(&v, self.group));
                letters.extend_from_slice(&u);
                letters.extend_from_slice(&v);
                Ok(letters)
            }
            Some(c) if c.is_ascii_alphabetic() => self.parse_ident(),
            _ => Err(self.syntax("expected an identifier, '(' or '['")),
        }
    }

    fn parse_ident(&mut self) -> Result<Vec<Letter>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii ident");
        if let Some(idx) = self.unknowns.iter().position(|u| u == name) {
            return Ok(vec![Letter::Var {
                index: idx + 1,
                inverse: false,
            }]);
        }
        if let Some(&id) = self.coefficients.get(name) {
            return Ok(vec![Letter::Coeff(id)]);
        }
        Err(ParseError::UnboundName {
            name: name.to_string(),
            position: start,
        })
    }

    fn parse_int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.syntax("expected an integer exponent"))
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected {:?}", c as char)))
        }
    }
}

fn invert_letters(letters: &[Letter], group: &FiniteGroup) -> Vec<Letter> {
    letters
        .iter()
        .rev()
        .map(|l| invert_letter(*l, group))
        .collect()
}

fn repeat_atom(
    atom: &[Letter],
    exponent: i64,
    group: &FiniteGroup,
) -> Result<Vec<Letter>, ParseError> {
    let (base, count) = if exponent < 0 {
        (invert_letters(atom, group), exponent.unsigned_abs())
    } else {
        (atom.to_vec(), exponent as u64)
    };
    let total = (base.len() as u64).saturating_mul(count);
    if total > MAX_WORD_LETTERS as u64 {
        return Err(ParseError::TooLong);
    }
    let mut out = Vec::with_capacity(total as usize);
    for _ in 0..count {
        out.extend_from_slice(&base);
    }
    Ok(out)
}

/// A constraint `word ∈ H g H`. Plain equations `w = 1` carry the trivial
/// subgroup and the identity representative.
#[derive(Debug, Clone)]
pub struct GeneralizedEquation {
    pub word: Word,
    pub subgroup: Subgroup,
    pub representative: ElementId,
}

impl GeneralizedEquation {
    pub fn new(word: Word, subgroup: Subgroup, representative: ElementId) -> Self {
        assert!(representative < subgroup.group().order());
        GeneralizedEquation {
            word,
            subgroup,
            representative,
        }
    }

    pub fn plain(group: &FiniteGroup, word: Word) -> Self {
        GeneralizedEquation {
            word,
            subgroup: group.trivial_subgroup(),
            representative: group.identity(),
        }
    }

    pub fn is_plain(&self) -> bool {
        self.subgroup.is_trivial() && self.representative == 0
    }

    /// The full double coset this equation constrains its word into.
    pub fn coset(&self) -> DoubleCoset {
        self.subgroup.double_coset(self.representative)
    }
}

/// An indexed system of generalized equations with a marked subsystem.
#[derive(Debug, Clone)]
pub struct GeneralizedSystem {
    group: FiniteGroup,
    arity: usize,
    equations: Vec<GeneralizedEquation>,
    subsystem: Vec<usize>,
}

impl GeneralizedSystem {
    pub fn new(
        group: FiniteGroup,
        arity: usize,
        equations: Vec<GeneralizedEquation>,
        mut subsystem: Vec<usize>,
    ) -> Result<Self, SystemError> {
        if arity == 0 {
            return Err(SystemError::NoUnknowns);
        }
        for eq in &equations {
            if eq.word.arity() != arity {
                return Err(SystemError::ArityMismatch {
                    word: eq.word.arity(),
                    system: arity,
                });
            }
            if !eq.subgroup.group().same_group(&group) {
                return Err(SystemError::GroupMismatch);
            }
            for c in eq.word.coefficients() {
                if c >= group.order() {
                    return Err(SystemError::GroupMismatch);
                }
            }
        }
        subsystem.sort_unstable();
        subsystem.dedup();
        if let Some(&bad) = subsystem.iter().find(|&&j| j >= equations.len()) {
            return Err(SystemError::SubsystemIndex(bad));
        }
        Ok(GeneralizedSystem {
            group,
            arity,
            equations,
            subsystem,
        })
    }

    /// A system of plain equations `w_i = 1` with the subsystem being
    /// everything (the classical regime).
    pub fn plain(group: FiniteGroup, arity: usize, words: Vec<Word>) -> Result<Self, SystemError> {
        let subsystem = (0..words.len()).collect();
        let equations = words
            .into_iter()
            .map(|w| GeneralizedEquation::plain(&group, w))
            .collect();
        GeneralizedSystem::new(group, arity, equations, subsystem)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn equations(&self) -> &[GeneralizedEquation] {
        &self.equations
    }

    pub fn subsystem(&self) -> &[usize] {
        &self.subsystem
    }

    pub fn is_plain(&self) -> bool {
        self.equations.iter().all(GeneralizedEquation::is_plain)
    }

    /// Exponent-sum matrix of the chosen rows, in equation order. An empty
    /// row set gives a 0 x m matrix.
    pub fn system_matrix(&self, rows: &[usize]) -> IntMatrix {
        let mut idx: Vec<usize> = rows.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let data: Vec<BigInt> = idx
            .iter()
            .flat_map(|&i| {
                self.equations[i]
                    .word
                    .exponent_sums()
                    .into_iter()
                    .map(BigInt::from)
            })
            .collect();
        IntMatrix::new(idx.len(), self.arity, data)
    }

    pub fn full_matrix(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.equations.len()).collect();
        self.system_matrix(&rows)
    }

    pub fn subsystem_matrix(&self) -> IntMatrix {
        self.system_matrix(&self.subsystem)
    }

    /// All coefficient letters across every equation of the system (the
    /// constraint data H_i, g_i is not part of this set).
    pub fn coefficient_set(&self) -> Vec<ElementId> {
        let set: BTreeSet<ElementId> = self
            .equations
            .iter()
            .flat_map(|eq| eq.word.coefficients())
            .collect();
        set.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::{self, CatalogKind};
    use proptest::prelude::*;

    fn s4_with_ab() -> (FiniteGroup, BTreeMap<String, ElementId>) {
        let g = catalog::build(&CatalogKind::Symmetric(4)).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert("a".to_string(), g.element_by_name("(12)").unwrap());
        coeffs.insert("b".to_string(), g.element_by_name("(34)").unwrap());
        (g, coeffs)
    }

    fn xy() -> Vec<String> {
        vec!["x".to_string(), "y".to_string()]
    }

    #[test]
    fn single_variable() {
        let (g, coeffs) = s4_with_ab();
        let w = parse_word("x", &["x".to_string()], &coeffs, &g).unwrap();
        assert_eq!(w.letters().len(), 1);
        assert_eq!(w.exponent_sum(1), 1);
    }

    #[test]
    fn worked_example_exponent_sums() {
        let (g, coeffs) = s4_with_ab();
        let w1 = parse_word("x a y^2 [x,y]^2019 (x b y)^3", &xy(), &coeffs, &g).unwrap();
        assert_eq!(w1.exponent_sum(1), 4);
        assert_eq!(w1.exponent_sum(2), 5);
        let w2 = parse_word("b x^3 y [x,y]^100 (x b y)^4", &xy(), &coeffs, &g).unwrap();
        assert_eq!(w2.exponent_sum(1), 7);
        assert_eq!(w2.exponent_sum(2), 5);
        let w3 = parse_word("[x, y^5] x^-2", &xy(), &coeffs, &g).unwrap();
        assert_eq!(w3.exponent_sum(1), -2);
        assert_eq!(w3.exponent_sum(2), 0);
    }

    #[test]
    fn cancelling_pair_has_zero_sum() {
        let (g, coeffs) = s4_with_ab();
        let w = parse_word("x^-1 x", &["x".to_string()], &coeffs, &g).unwrap();
        assert_eq!(w.letters().len(), 2);
        assert_eq!(w.exponent_sum(1), 0);
    }

    #[test]
    fn evaluate_cases() {
        let (g, coeffs) = s4_with_ab();
        let empty = Word::empty(1);
        assert_eq!(empty.evaluate(&g, &[3]), g.identity());

        let ab = parse_word("a b", &["x".to_string()], &coeffs, &g).unwrap();
        let expect = g.mul(coeffs["a"], coeffs["b"]);
        assert_eq!(ab.evaluate(&g, &[0]), expect);

        // Commutator of a commuting pair is the identity.
        let comm = parse_word("[x, y]", &xy(), &coeffs, &g).unwrap();
        let c = g.element_by_name("(12)").unwrap();
        let d = g.element_by_name("(34)").unwrap();
        assert_eq!(comm.evaluate(&g, &[c, d]), g.identity());
    }

    #[test]
    fn parse_errors() {
        let (g, coeffs) = s4_with_ab();
        let u = vec!["x".to_string()];
        assert!(matches!(
            parse_word("x )", &u, &coeffs, &g),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_word("x q x", &u, &coeffs, &g),
            Err(ParseError::UnboundName { .. })
        ));
        assert!(matches!(
            parse_word("x^999999999999", &u, &coeffs, &g),
            Err(ParseError::TooLong)
        ));
        assert!(matches!(
            Word::new(
                1,
                vec![Letter::Var {
                    index: 2,
                    inverse: false
                }]
            ),
            Err(ParseError::ArityExceeded { .. })
        ));
    }

    #[test]
    fn worked_example_matrix() {
        let (g, coeffs) = s4_with_ab();
        let words = [
            "x a y^2 [x,y]^2019 (x b y)^3",
            "b x^3 y [x,y]^100 (x b y)^4",
            "[x, y^5] x^-2",
        ]
        .iter()
        .map(|t| parse_word(t, &xy(), &coeffs, &g).unwrap())
        .collect();
        let sys = GeneralizedSystem::plain(g, 2, words).unwrap();
        let m = sys.full_matrix();
        assert_eq!(
            m,
            IntMatrix::from_i64_rows(&[vec![4, 5], vec![7, 5], vec![-2, 0],])
        );
        assert_eq!(sys.system_matrix(&[]).rows(), 0);
        assert_eq!(sys.system_matrix(&[]).cols(), 2);
        // {a, b} and nothing else.
        let coeff_ids = sys.coefficient_set();
        assert_eq!(coeff_ids.len(), 2);
    }

    #[test]
    fn commutator_word_matrix_row() {
        let (g, coeffs) = s4_with_ab();
        let w = parse_word("x y x^-1 y^-1", &xy(), &coeffs, &g).unwrap();
        let sys = GeneralizedSystem::plain(g, 2, vec![w]).unwrap();
        assert_eq!(sys.full_matrix(), IntMatrix::from_i64_rows(&[vec![0, 0]]));
    }

    #[test]
    fn coefficient_set_is_a_set() {
        let (g, coeffs) = s4_with_ab();
        let w = parse_word("a a^-1 x", &["x".to_string()], &coeffs, &g).unwrap();
        // a and a^{-1} = a are the same transposition.
        assert_eq!(w.coefficients().len(), 1);
    }

    #[test]
    fn dsl_round_trip() {
        let (g, coeffs) = s4_with_ab();
        let w = parse_word("x a y^-2 [x, b y]^3", &xy(), &coeffs, &g).unwrap();
        let names: BTreeMap<ElementId, String> =
            coeffs.iter().map(|(k, v)| (*v, k.clone())).collect();
        let text = w.to_dsl(&xy(), &|id| names[&id].clone());
        let reparsed = parse_word(&text, &xy(), &coeffs, &g).unwrap();
        assert_eq!(w, reparsed);
    }

    fn arb_letter() -> impl Strategy<Value = Letter> {
        prop_oneof![
            (1usize..=2, any::<bool>()).prop_map(|(index, inverse)| Letter::Var { index, inverse }),
            (0usize..24).prop_map(Letter::Coeff),
        ]
    }

    proptest! {
        // Inserting a cancelling pair anywhere never changes exponent sums.
        #[test]
        fn exponent_sums_stable_under_cancelling_insertion(
            letters in proptest::collection::vec(arb_letter(), 0..12),
            extra in arb_letter(),
            split in 0usize..12,
        ) {
            let (g, _) = s4_with_ab();
            let w = Word::new(2, letters.clone()).unwrap();
            let at = split.min(letters.len());
            let mut padded = letters.clone();
            padded.insert(at, invert_letter(extra, &g));
            padded.insert(at, extra);
            let w2 = Word::new(2, padded).unwrap();
            prop_assert_eq!(w.exponent_sums(), w2.exponent_sums());
        }

        // Arbitrary input must come back as a word or an error, never a panic.
        #[test]
        fn parser_never_panics(text in "[ -~]{0,40}") {
            let (g, coeffs) = s4_with_ab();
            let _ = parse_word(&text, &xy(), &coeffs, &g);
        }

        // evaluate is a monoid homomorphism with respect to concatenation.
        #[test]
        fn evaluate_respects_concatenation(
            a in proptest::collection::vec(arb_letter(), 0..10),
            b in proptest::collection::vec(arb_letter(), 0..10),
            x in 0usize..24,
            y in 0usize..24,
        ) {
            let (g, _) = s4_with_ab();
            let wa = Word::new(2, a).unwrap();
            let wb = Word::new(2, b).unwrap();
            let t = [x, y];
            prop_assert_eq!(
                wa.concat(&wb).evaluate(&g, &t),
                g.mul(wa.evaluate(&g, &t), wb.evaluate(&g, &t))
            );
        }
    }
}
