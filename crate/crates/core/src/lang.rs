//! Syntax of the unary languages `L_q`: atoms, state descriptions and
//! quantifier-free sentences.
//!
//! Atoms are indexed `1..=2^q` in the usual lexicographic order: writing
//! `index - 1` in binary over `q` bits, most significant bit first, a `1` bit
//! at position `k` means `P_k` occurs negated. So `α_1` is all-positive and
//! `α_{2^q}` all-negative.

use std::fmt;
use std::str::FromStr;

use crate::error::{parse_err, Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Language {
    q: usize,
}

impl Language {
    pub fn new(q: usize, limits: &Limits) -> Result<Self> {
        limits.check_q(q)?;
        Ok(Language { q })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn atom_count(&self) -> usize {
        1 << self.q
    }
}

/// Number of atoms of `L_q`.
pub fn atom_count(q: usize) -> usize {
    1usize << q
}

/// Negation count of atom `index` (1-based) in `L_q`.
pub fn gamma_of(index: usize) -> usize {
    (index - 1).count_ones() as usize
}

/// Whether predicate `pred` (1-based) occurs negated in atom `index` of `L_q`.
pub fn negated_in(q: usize, index: usize, pred: usize) -> bool {
    ((index - 1) >> (q - pred)) & 1 == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    q: usize,
    index: usize,
}

impl Atom {
    pub fn new(q: usize, index: usize) -> Result<Self> {
        if q == 0 || q >= usize::BITS as usize {
            return Err(Error::Bounds(format!("q = {q} out of range")));
        }
        if index == 0 || index > atom_count(q) {
            return Err(Error::Bounds(format!(
                "atom index {index} outside 1..={}",
                atom_count(q)
            )));
        }
        Ok(Atom { q, index })
    }

    /// Builds the atom from its polarity marks; `true` means negated.
    pub fn from_negations(negated: &[bool]) -> Result<Self> {
        let q = negated.len();
        let code = negated.iter().fold(0usize, |acc, &n| (acc << 1) | n as usize);
        Atom::new(q, code + 1)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Polarity marks, `true` for a negated predicate, `P_1` first.
    pub fn negations(&self) -> Vec<bool> {
        (1..=self.q).map(|k| negated_in(self.q, self.index, k)).collect()
    }

    pub fn gamma(&self) -> usize {
        gamma_of(self.index)
    }

    pub fn complement(&self) -> Atom {
        Atom {
            q: self.q,
            index: atom_count(self.q) + 1 - self.index,
        }
    }

    pub fn sign_string(&self) -> String {
        self.negations()
            .iter()
            .map(|&n| if n { '-' } else { '+' })
            .collect()
    }

    /// Conjunction form, e.g. `P1 & ~P2 & P3`.
    pub fn formula(&self) -> String {
        self.negations()
            .iter()
            .enumerate()
            .map(|(k, &n)| format!("{}P{}", if n { "~" } else { "" }, k + 1))
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sign_string())
    }
}

/// All `2^q` atoms of `L_q` in lexicographic order.
pub fn atoms(q: usize, limits: &Limits) -> Result<Vec<Atom>> {
    limits.check_q(q)?;
    limits.check_power(2, q, "atoms")?;
    Ok((1..=atom_count(q)).map(|index| Atom { q, index }).collect())
}

pub fn gamma(atom: &Atom) -> usize {
    atom.gamma()
}

/// A state description `α_{h_1}(a_1) ∧ … ∧ α_{h_n}(a_n)`; `n = 0` is `⊤`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateDescription {
    q: usize,
    atoms: Vec<usize>,
}

impl StateDescription {
    pub fn new(q: usize, atoms: Vec<usize>) -> Result<Self> {
        if q == 0 || q >= usize::BITS as usize {
            return Err(Error::Bounds(format!("q = {q} out of range")));
        }
        let count = atom_count(q);
        if let Some(bad) = atoms.iter().find(|&&h| h == 0 || h > count) {
            return Err(Error::Bounds(format!(
                "atom index {bad} outside 1..={count}"
            )));
        }
        Ok(StateDescription { q, atoms })
    }

    pub fn top(q: usize) -> Self {
        StateDescription {
            q,
            atoms: Vec::new(),
        }
    }

    pub(crate) fn from_parts_unchecked(q: usize, atoms: Vec<usize>) -> Self {
        StateDescription { q, atoms }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atom indices `h_1..h_n`.
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn atom(&self, constant: usize) -> Option<Atom> {
        self.atoms.get(constant.checked_sub(1)?).map(|&index| Atom {
            q: self.q,
            index,
        })
    }

    /// `self ∧ α_h(a_{n+1})`.
    pub fn extended(&self, h: usize) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.push(h);
        StateDescription { q: self.q, atoms }
    }

    pub fn prefix(&self, n: usize) -> Self {
        StateDescription {
            q: self.q,
            atoms: self.atoms[..n.min(self.atoms.len())].to_vec(),
        }
    }

    /// Position of this description in the lexicographic enumeration of
    /// all descriptions of the same length.
    pub fn code(&self) -> usize {
        let base = atom_count(self.q);
        self.atoms.iter().fold(0, |acc, &h| acc * base + (h - 1))
    }

    pub fn from_code(q: usize, n: usize, mut code: usize) -> Self {
        let base = atom_count(q);
        let mut atoms = vec![0; n];
        for slot in atoms.iter_mut().rev() {
            *slot = code % base + 1;
            code /= base;
        }
        StateDescription { q, atoms }
    }

    /// All `(2^q)^n` descriptions of length `n`, lexicographically.
    pub fn enumerate(q: usize, n: usize, limits: &Limits) -> Result<SdIter> {
        limits.check_q(q)?;
        let total = limits.check_power(atom_count(q) as u64, n, "state descriptions")?;
        Ok(SdIter {
            q,
            n,
            next: 0,
            total: total as usize,
        })
    }

    /// Restriction to the first `q_target` predicates.
    pub fn restrict(&self, q_target: usize) -> Result<Self> {
        if q_target == 0 || q_target > self.q {
            return Err(Error::Bounds(format!(
                "cannot restrict L_{} to L_{q_target}",
                self.q
            )));
        }
        let shift = self.q - q_target;
        Ok(StateDescription {
            q: q_target,
            atoms: self.atoms.iter().map(|&h| ((h - 1) >> shift) + 1).collect(),
        })
    }
}

impl fmt::Display for StateDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sd(self))
    }
}

impl FromStr for StateDescription {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_sd(s)
    }
}

pub struct SdIter {
    q: usize,
    n: usize,
    next: usize,
    total: usize,
}

impl Iterator for SdIter {
    type Item = StateDescription;

    fn next(&mut self) -> Option<StateDescription> {
        if self.next >= self.total {
            return None;
        }
        let sd = StateDescription::from_code(self.q, self.n, self.next);
        self.next += 1;
        Some(sd)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SdIter {}

/// Parses `q=<int>: <tok> <tok> ...` where each token is a sign string of
/// length `q` over `{+,-}` or an atom index written `@<index>`.
pub fn parse_sd(text: &str) -> Result<StateDescription> {
    if let Some(pos) = text.find(|c: char| !c.is_ascii()) {
        return Err(parse_err(pos, "non-ASCII character"));
    }
    let bytes = text.as_bytes();
    let mut pos = skip_ws(bytes, 0);
    if !text[pos..].starts_with("q=") {
        return Err(parse_err(pos, "expected `q=`"));
    }
    pos += 2;
    let start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    let q: usize = text[start..pos]
        .parse()
        .map_err(|_| parse_err(start, "expected predicate count"))?;
    if q == 0 || q >= 32 {
        return Err(parse_err(start, format!("predicate count {q} out of range")));
    }
    pos = skip_ws(bytes, pos);
    if pos >= bytes.len() || bytes[pos] != b':' {
        return Err(parse_err(pos, "expected `:`"));
    }
    pos += 1;

    let mut atoms = Vec::new();
    loop {
        pos = skip_ws(bytes, pos);
        if pos >= bytes.len() {
            break;
        }
        let tok_start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let tok = &text[tok_start..pos];
        atoms.push(parse_atom_token(tok, tok_start, q)?);
    }
    Ok(StateDescription { q, atoms })
}

fn parse_atom_token(tok: &str, at: usize, q: usize) -> Result<usize> {
    if let Some(idx) = tok.strip_prefix('@') {
        let index: usize = idx
            .parse()
            .map_err(|_| parse_err(at + 1, "expected atom index after `@`"))?;
        if index == 0 || index > atom_count(q) {
            return Err(parse_err(
                at,
                format!("atom index {index} outside 1..={}", atom_count(q)),
            ));
        }
        return Ok(index);
    }
    let mut code = 0usize;
    for (i, c) in tok.bytes().enumerate() {
        let bit = match c {
            b'+' => 0,
            b'-' => 1,
            _ => {
                return Err(parse_err(
                    at + i,
                    format!("invalid polarity mark `{}`", c as char),
                ))
            }
        };
        if i >= q {
            return Err(parse_err(at + i, format!("sign string longer than q = {q}")));
        }
        code = (code << 1) | bit;
    }
    if tok.len() != q {
        return Err(parse_err(
            at,
            format!("sign string of length {} for q = {q}", tok.len()),
        ));
    }
    Ok(code + 1)
}

fn skip_ws(bytes: &[u8], mut pos: usize) -> usize {
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

pub fn format_sd(sd: &StateDescription) -> String {
    let mut out = format!("q={}:", sd.q);
    for &h in &sd.atoms {
        out.push(' ');
        out.push_str(&Atom { q: sd.q, index: h }.sign_string());
    }
    out
}

/// Index form, e.g. `q=3: @2 @5 @7 @7 @4`.
pub fn format_sd_indices(sd: &StateDescription) -> String {
    let mut out = format!("q={}:", sd.q);
    for &h in &sd.atoms {
        out.push_str(&format!(" @{h}"));
    }
    out
}

/// Quantifier-free sentences over literals `±P_i(a_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QfSentence {
    True,
    False,
    /// `P_pred(a_constant)`, both 1-based.
    Lit { pred: usize, constant: usize },
    Not(Box<QfSentence>),
    And(Box<QfSentence>, Box<QfSentence>),
    Or(Box<QfSentence>, Box<QfSentence>),
}

impl QfSentence {
    pub fn lit(pred: usize, constant: usize, positive: bool) -> Self {
        let l = QfSentence::Lit { pred, constant };
        if positive {
            l
        } else {
            QfSentence::Not(Box::new(l))
        }
    }

    pub fn and(self, other: QfSentence) -> Self {
        QfSentence::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: QfSentence) -> Self {
        QfSentence::Or(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> Self {
        QfSentence::Not(Box::new(self))
    }

    /// Conjunction of `(pred, constant, positive)` literals; empty gives `⊤`.
    pub fn conjunction(lits: &[(usize, usize, bool)]) -> Self {
        lits.iter()
            .map(|&(p, c, s)| QfSentence::lit(p, c, s))
            .reduce(QfSentence::and)
            .unwrap_or(QfSentence::True)
    }

    fn visit_literals(&self, f: &mut impl FnMut(usize, usize)) {
        match self {
            QfSentence::True | QfSentence::False => {}
            QfSentence::Lit { pred, constant } => f(*pred, *constant),
            QfSentence::Not(s) => s.visit_literals(f),
            QfSentence::And(a, b) | QfSentence::Or(a, b) => {
                a.visit_literals(f);
                b.visit_literals(f);
            }
        }
    }

    /// Sorted, deduplicated `(pred, constant)` pairs occurring in the sentence.
    pub fn literal_variables(&self) -> Vec<(usize, usize)> {
        let mut vars = Vec::new();
        self.visit_literals(&mut |p, c| vars.push((p, c)));
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn mentioned_predicates(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.literal_variables().iter().map(|&(p, _)| p).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn mentioned_constants(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.literal_variables().iter().map(|&(_, c)| c).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn max_constant(&self) -> usize {
        self.mentioned_constants().last().copied().unwrap_or(0)
    }

    pub fn max_predicate(&self) -> usize {
        self.mentioned_predicates().last().copied().unwrap_or(0)
    }

    /// Truth value under an assignment of the literal variables.
    pub fn eval_with(&self, value: &impl Fn(usize, usize) -> bool) -> bool {
        match self {
            QfSentence::True => true,
            QfSentence::False => false,
            QfSentence::Lit { pred, constant } => value(*pred, *constant),
            QfSentence::Not(s) => !s.eval_with(value),
            QfSentence::And(a, b) => a.eval_with(value) && b.eval_with(value),
            QfSentence::Or(a, b) => a.eval_with(value) || b.eval_with(value),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            QfSentence::True => f.write_str("T"),
            QfSentence::False => f.write_str("F"),
            QfSentence::Lit { pred, constant } => write!(f, "P{pred}(a{constant})"),
            QfSentence::Not(s) => {
                f.write_str("~")?;
                s.fmt_prec(f, 3)
            }
            QfSentence::And(a, b) => {
                if prec > 2 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 2)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 3)?;
                if prec > 2 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            QfSentence::Or(a, b) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 1)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 2)?;
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for QfSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl FromStr for QfSentence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_sentence(s)
    }
}

/// Parses sentences such as `P1(a1) & ~(P2(a2) | P3(a1))`.
///
/// Negation is `~`, `!` or `-`; conjunction `&`; disjunction `|`; `T` and
/// `F` are the constants. `&` binds tighter than `|`.
pub fn parse_sentence(text: &str) -> Result<QfSentence> {
    let mut p = SentenceParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let s = p.disjunction()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(parse_err(p.pos, "unexpected trailing input"));
    }
    Ok(s)
}

struct SentenceParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl SentenceParser<'_> {
    fn ws(&mut self) {
        self.pos = skip_ws(self.src, self.pos);
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn disjunction(&mut self) -> Result<QfSentence> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<QfSentence> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<QfSentence> {
        match self.peek() {
            Some(b'~' | b'!' | b'-') => {
                self.pos += 1;
                Ok(self.unary()?.negate())
            }
            Some(b'(') => {
                self.pos += 1;
                let s = self.disjunction()?;
                if self.peek() != Some(b')') {
                    return Err(parse_err(self.pos, "expected `)`"));
                }
                self.pos += 1;
                Ok(s)
            }
            Some(b'T') => {
                self.pos += 1;
                Ok(QfSentence::True)
            }
            Some(b'F') => {
                self.pos += 1;
                Ok(QfSentence::False)
            }
            Some(b'P') => self.literal(),
            Some(c) => Err(parse_err(self.pos, format!("unexpected `{}`", c as char))),
            None => Err(parse_err(self.pos, "unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .filter(|&n: &usize| n > 0)
            .ok_or_else(|| parse_err(start, "expected positive index"))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(parse_err(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn literal(&mut self) -> Result<QfSentence> {
        self.expect(b'P')?;
        let pred = self.number()?;
        self.expect(b'(')?;
        self.expect(b'a')?;
        let constant = self.number()?;
        self.expect(b')')?;
        Ok(QfSentence::Lit { pred, constant })
    }
}

/// Truth value of `s` under the literal assignment induced by `sd`.
pub fn models(sd: &StateDescription, s: &QfSentence) -> Result<bool> {
    let vars = s.literal_variables();
    if let Some(&(_, c)) = vars.iter().max_by_key(|&&(_, c)| c) {
        if c > sd.len() {
            return Err(Error::InsufficientConstants {
                needed: c,
                available: sd.len(),
            });
        }
    }
    if let Some(&(p, _)) = vars.iter().max_by_key(|&&(p, _)| p) {
        if p > sd.q() {
            return Err(Error::Bounds(format!(
                "sentence mentions P{p} but the language is L_{}",
                sd.q()
            )));
        }
    }
    let q = sd.q();
    Ok(s.eval_with(&|pred, constant| !negated_in(q, sd.atoms[constant - 1], pred)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn lexicographic_atoms() {
        let a1 = atoms(1, &lim()).unwrap();
        assert_eq!(a1.iter().map(|a| a.sign_string()).collect::<Vec<_>>(), ["+", "-"]);
        let a2 = atoms(2, &lim()).unwrap();
        assert_eq!(
            a2.iter().map(|a| a.sign_string()).collect::<Vec<_>>(),
            ["++", "+-", "-+", "--"]
        );
        let a3 = atoms(3, &lim()).unwrap();
        assert_eq!(a3[5].index(), 6);
        assert_eq!(a3[5].formula(), "~P1 & P2 & ~P3");
        assert!(atoms(0, &lim()).is_err());
        assert!(atoms(17, &lim()).is_err());
    }

    #[test]
    fn negation_counts() {
        for q in 1..=5 {
            assert_eq!(Atom::new(q, 1).unwrap().gamma(), 0);
        }
        assert_eq!(Atom::new(3, 2).unwrap().gamma(), 1);
        assert_eq!(Atom::new(3, 6).unwrap().gamma(), 2);
        assert_eq!(Atom::new(3, 8).unwrap().gamma(), 3);
    }

    #[test]
    fn bijection_and_complement() {
        for q in 1..=8 {
            for a in atoms(q, &lim()).unwrap() {
                let back = Atom::from_negations(&a.negations()).unwrap();
                assert_eq!(back, a);
                let c = a.complement();
                assert_eq!(c.index(), atom_count(q) + 1 - a.index());
                assert!(a
                    .negations()
                    .iter()
                    .zip(c.negations())
                    .all(|(x, y)| *x != y));
            }
        }
    }

    #[test]
    fn parse_example_description() {
        let sd = parse_sd("q=3: ++- -++ --+ --+ +--").unwrap();
        assert_eq!(sd.atoms(), &[2, 5, 7, 7, 4]);
        assert_eq!(format_sd(&sd), "q=3: ++- -++ --+ --+ +--");
        let idx = parse_sd("q=3: @2 @5 @7 @7 @4").unwrap();
        assert_eq!(idx, sd);
        assert_eq!(format_sd_indices(&sd), "q=3: @2 @5 @7 @7 @4");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_sd("q=2: +*") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_sd("q=2: +"), Err(Error::Parse { pos: 5, .. })));
        assert!(matches!(parse_sd("q=2: +++"), Err(Error::Parse { pos: 7, .. })));
        assert!(parse_sd("q=2 ++").is_err());
        assert!(parse_sd("p=2: ++").is_err());
        assert!(parse_sd("q=2: @5").is_err());
        assert!(parse_sd("q=2: \u{2212}+").is_err());
    }

    #[test]
    fn empty_description_is_top() {
        let sd = parse_sd("q=2:").unwrap();
        assert!(sd.is_empty());
        assert_eq!(sd, StateDescription::top(2));
        assert_eq!(format_sd(&sd), "q=2:");
        assert!(models(&sd, &QfSentence::True).unwrap());
    }

    #[test]
    fn literal_lookup() {
        let theta = parse_sd("q=3: ++- -++ --+ --+ +--").unwrap();
        let s: QfSentence = "P1(a1)".parse().unwrap();
        assert!(models(&theta, &s).unwrap());
        let s: QfSentence = "~P1(a2) & P3(a2)".parse().unwrap();
        assert!(models(&theta, &s).unwrap());
        let s: QfSentence = "P1(a6)".parse().unwrap();
        assert_eq!(
            models(&theta, &s),
            Err(Error::InsufficientConstants {
                needed: 6,
                available: 5
            })
        );
        let s: QfSentence = "P4(a1)".parse().unwrap();
        assert!(matches!(models(&theta, &s), Err(Error::Bounds(_))));
    }

    #[test]
    fn sentence_syntax() {
        let s = parse_sentence("P1(a1) | ~P1(a1) & P2(a2)").unwrap();
        assert_eq!(s.to_string(), "P1(a1) | ~P1(a1) & P2(a2)");
        let s = parse_sentence("~(P1(a1) | P2(a3))").unwrap();
        assert_eq!(s.to_string(), "~(P1(a1) | P2(a3))");
        assert_eq!(s.mentioned_constants(), vec![1, 3]);
        assert_eq!(s.max_predicate(), 2);
        assert!(parse_sentence("P1(a1) &").is_err());
        assert!(parse_sentence("P0(a1)").is_err());
        assert!(parse_sentence("(P1(a1)").is_err());
    }

    #[test]
    fn codes_enumerate_lexicographically() {
        let all: Vec<_> = StateDescription::enumerate(2, 2, &lim()).unwrap().collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].atoms(), &[1, 1]);
        assert_eq!(all[1].atoms(), &[1, 2]);
        assert_eq!(all[15].atoms(), &[4, 4]);
        for (i, sd) in all.iter().enumerate() {
            assert_eq!(sd.code(), i);
        }
        assert!(StateDescription::enumerate(4, 7, &lim()).is_err());
    }

    #[test]
    fn restriction_keeps_leading_predicates() {
        let sd = parse_sd("q=3: +-- -+- ---").unwrap();
        assert_eq!(format_sd(&sd.restrict(1).unwrap()), "q=1: + - -");
        assert_eq!(format_sd(&sd.restrict(2).unwrap()), "q=2: +- -+ --");
    }
}
