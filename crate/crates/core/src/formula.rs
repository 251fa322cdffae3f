//! Multimodal propositional formulas.
//!
//! The abstract syntax is minimal: `⊥`, variables, implication and indexed
//! boxes. Everything else (`~`, `&`, `|`, `true`, `<>i`) is sugar that the
//! parser expands and the printer folds back.
//!
//! Concrete syntax:
//!
//! ```text
//! form  := impl
//! impl  := disj ("->" impl)?
//! disj  := conj ("|" conj)*
//! conj  := unary ("&" unary)*
//! unary := "~" unary | "[]" INT unary | "<>" INT unary | atom
//! atom  := "false" | "true" | IDENT | "(" form ")"
//! ```

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

/// Modal depth accepted by [`enumerate_closed`] unless a larger cap is passed.
pub const DEFAULT_CLOSED_DEPTH_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Var(String),
    Implies(Box<Formula>, Box<Formula>),
    /// `[]i body`; modality indices start at 1.
    Box(usize, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("modality {index} at {pos} is out of range 1..={max}")]
    ModalityOutOfRange { index: usize, max: usize, pos: usize },
    #[error("formula is not closed (contains variables {0:?})")]
    NotClosed(Vec<String>),
    #[error("requested depth {requested} exceeds cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(modality: usize, body: Formula) -> Self {
        Formula::Box(modality, Box::new(body))
    }

    /// `count` nested boxes of the same modality.
    pub fn boxes(modality: usize, count: usize, body: Formula) -> Self {
        (0..count).fold(body, |acc, _| Formula::boxed(modality, acc))
    }

    pub fn top() -> Self {
        Formula::implies(Formula::Bottom, Formula::Bottom)
    }

    pub fn not(a: Formula) -> Self {
        Formula::implies(a, Formula::Bottom)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::implies(a, Formula::not(b)))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::implies(Formula::not(a), b)
    }

    pub fn diamond(modality: usize, a: Formula) -> Self {
        Formula::not(Formula::boxed(modality, Formula::not(a)))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Formula::Bottom)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Implies(a, b) if a.is_bottom() && b.is_bottom())
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Var(_) => 0,
            Formula::Implies(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Box(_, a) => 1 + a.modal_depth(),
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out, &mut BTreeSet::new());
        out
    }

    pub fn modalities(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect(&self, vars: &mut BTreeSet<String>, mods: &mut BTreeSet<usize>) {
        match self {
            Formula::Bottom => {}
            Formula::Var(v) => {
                vars.insert(v.clone());
            }
            Formula::Implies(a, b) => {
                a.collect(vars, mods);
                b.collect(vars, mods);
            }
            Formula::Box(i, a) => {
                mods.insert(*i);
                a.collect(vars, mods);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Formula::Bottom => true,
            Formula::Var(_) => false,
            Formula::Implies(a, b) => a.is_closed() && b.is_closed(),
            Formula::Box(_, a) => a.is_closed(),
        }
    }

    /// Largest modality index used, 0 for modality-free formulas.
    pub fn max_modality(&self) -> usize {
        self.modalities().into_iter().next_back().unwrap_or(0)
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Var(_) => 1,
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
            Formula::Box(_, a) => 1 + a.size(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaStats {
    pub modal_depth: usize,
    pub variables: BTreeSet<String>,
    pub modalities_used: BTreeSet<usize>,
    pub is_closed: bool,
}

pub fn stats(f: &Formula) -> FormulaStats {
    let variables = f.variables();
    FormulaStats {
        modal_depth: f.modal_depth(),
        is_closed: variables.is_empty(),
        variables,
        modalities_used: f.modalities(),
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Arrow,
    Bar,
    Amp,
    Tilde,
    BoxOp,
    DiaOp,
    LParen,
    RParen,
    Int(usize),
    Ident(String),
    False,
    True,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Arrow => write!(f, "'->'"),
            Tok::Bar => write!(f, "'|'"),
            Tok::Amp => write!(f, "'&'"),
            Tok::Tilde => write!(f, "'~'"),
            Tok::BoxOp => write!(f, "'[]'"),
            Tok::DiaOp => write!(f, "'<>'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::False => write!(f, "'false'"),
            Tok::True => write!(f, "'true'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn syntax(pos: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = bytes.get(i..i + 2);
        let tok = match c {
            b'-' if two == Some(b"->") => {
                i += 2;
                Tok::Arrow
            }
            b'[' if two == Some(b"[]") => {
                i += 2;
                Tok::BoxOp
            }
            b'<' if two == Some(b"<>") => {
                i += 2;
                Tok::DiaOp
            }
            b'|' => {
                i += 1;
                Tok::Bar
            }
            b'&' => {
                i += 1;
                Tok::Amp
            }
            b'~' => {
                i += 1;
                Tok::Tilde
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i]
                    .parse()
                    .map_err(|_| syntax(start, "integer too large"))?;
                Tok::Int(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "false" => Tok::False,
                    "true" => Tok::True,
                    s => Tok::Ident(s.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    n_modalities: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn modality(&mut self) -> Result<usize, FormulaError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(index) if (1..=self.n_modalities).contains(&index) => Ok(index),
            Tok::Int(index) => Err(FormulaError::ModalityOutOfRange {
                index,
                max: self.n_modalities,
                pos,
            }),
            other => Err(syntax(pos, format!("expected modality index, found {other}"))),
        }
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::BoxOp => {
                self.bump();
                let i = self.modality()?;
                Ok(Formula::boxed(i, self.unary()?))
            }
            Tok::DiaOp => {
                self.bump();
                let i = self.modality()?;
                Ok(Formula::diamond(i, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let pos = self.pos();
        match self.bump() {
            Tok::False => Ok(Formula::Bottom),
            Tok::True => Ok(Formula::top()),
            Tok::Ident(name) => Ok(Formula::Var(name)),
            Tok::LParen => {
                let inner = self.implication()?;
                let close = self.pos();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    other => Err(syntax(close, format!("expected ')', found {other}"))),
                }
            }
            other => Err(syntax(pos, format!("expected a formula, found {other}"))),
        }
    }
}

/// Parses `text` over modalities `1..=n_modalities`, expanding all sugar.
pub fn parse(text: &str, n_modalities: usize) -> Result<Formula, FormulaError> {
    if n_modalities == 0 {
        return Err(syntax(0, "modality count must be at least 1"));
    }
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        n_modalities,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), format!("unexpected {}", p.peek())));
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Printing

enum View<'a> {
    False,
    True,
    Var(&'a str),
    Not(&'a Formula),
    Box(usize, &'a Formula),
    Dia(usize, &'a Formula),
    And(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    Imp(&'a Formula, &'a Formula),
}

// Every abbreviation re-expands to exactly the matched tree, so printing
// through a view never changes the AST.
fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::Bottom => View::False,
        Formula::Var(v) => View::Var(v),
        Formula::Box(i, a) => View::Box(*i, a),
        Formula::Implies(a, b) if a.is_bottom() && b.is_bottom() => View::True,
        Formula::Implies(a, b) if b.is_bottom() => match a.as_ref() {
            Formula::Box(i, inner) => match inner.as_ref() {
                Formula::Implies(c, bot) if bot.is_bottom() => View::Dia(*i, c),
                _ => View::Not(a),
            },
            Formula::Implies(c, d) => match d.as_ref() {
                Formula::Implies(e, bot) if bot.is_bottom() => View::And(c, e),
                _ => View::Not(a),
            },
            _ => View::Not(a),
        },
        Formula::Implies(a, b) => match a.as_ref() {
            Formula::Implies(c, bot) if bot.is_bottom() => View::Or(c, b),
            _ => View::Imp(a, b),
        },
    }
}

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(v: &View<'_>) -> u8 {
    match v {
        View::False | View::True | View::Var(_) => PREC_ATOM,
        View::Not(_) | View::Box(..) | View::Dia(..) => PREC_UNARY,
        View::And(..) => PREC_AND,
        View::Or(..) => PREC_OR,
        View::Imp(..) => PREC_IMP,
    }
}

fn write_at(out: &mut String, f: &Formula, min: u8) {
    let v = view(f);
    let paren = precedence(&v) < min;
    if paren {
        out.push('(');
    }
    match v {
        View::False => out.push_str("false"),
        View::True => out.push_str("true"),
        View::Var(name) => out.push_str(name),
        View::Not(a) => {
            out.push('~');
            write_at(out, a, PREC_UNARY);
        }
        View::Box(i, a) => {
            out.push_str(&format!("[]{i} "));
            write_at(out, a, PREC_UNARY);
        }
        View::Dia(i, a) => {
            out.push_str(&format!("<>{i} "));
            write_at(out, a, PREC_UNARY);
        }
        View::And(a, b) => {
            write_at(out, a, PREC_AND);
            out.push_str(" & ");
            write_at(out, b, PREC_UNARY);
        }
        View::Or(a, b) => {
            write_at(out, a, PREC_OR);
            out.push_str(" | ");
            write_at(out, b, PREC_AND);
        }
        View::Imp(a, b) => {
            write_at(out, a, PREC_OR);
            out.push_str(" -> ");
            write_at(out, b, PREC_IMP);
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_at(&mut out, f, PREC_IMP);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

// ---------------------------------------------------------------------------
// Closed formulas

/// Bottom-up rewriting of a closed formula with `[]i true <-> true` and, for
/// modalities in `serial`, `[]i false <-> false`, plus boolean constant
/// folding. When every modality of `f` is serial the result is `true` or
/// `false`.
pub fn simplify_closed(f: &Formula, serial: &BTreeSet<usize>) -> Result<Formula, FormulaError> {
    if !f.is_closed() {
        return Err(FormulaError::NotClosed(f.variables().into_iter().collect()));
    }
    Ok(simplify(f, serial))
}

fn simplify(f: &Formula, serial: &BTreeSet<usize>) -> Formula {
    match f {
        Formula::Bottom | Formula::Var(_) => f.clone(),
        Formula::Box(i, a) => {
            let a = simplify(a, serial);
            if a.is_top() {
                Formula::top()
            } else if a.is_bottom() && serial.contains(i) {
                Formula::Bottom
            } else {
                Formula::boxed(*i, a)
            }
        }
        Formula::Implies(a, b) => {
            let a = simplify(a, serial);
            let b = simplify(b, serial);
            if a.is_bottom() || b.is_top() || a == b {
                return Formula::top();
            }
            if a.is_top() {
                return b;
            }
            if b.is_bottom() {
                if let Formula::Implies(c, d) = &a {
                    if d.is_bottom() {
                        return (**c).clone();
                    }
                }
            }
            Formula::implies(a, b)
        }
    }
}

/// Closed formulas of modal depth at most `depth` over `modalities`, with
/// the default depth cap.
pub fn enumerate_closed(
    depth: usize,
    modalities: &BTreeSet<usize>,
) -> Result<Vec<Formula>, FormulaError> {
    enumerate_closed_with_cap(depth, modalities, DEFAULT_CLOSED_DEPTH_CAP)
}

/// Level `d` takes the previous level together with every `[]i A` for `A`
/// in it as building blocks and adds one layer of implications between
/// them. Results are simplified (no seriality) and deduplicated
/// syntactically, in first-seen order.
pub fn enumerate_closed_with_cap(
    depth: usize,
    modalities: &BTreeSet<usize>,
    cap: usize,
) -> Result<Vec<Formula>, FormulaError> {
    if depth > cap {
        return Err(FormulaError::CapExceeded {
            requested: depth,
            cap,
        });
    }
    let none = BTreeSet::new();
    let mut level: Vec<Formula> = Vec::new();
    for d in 0..=depth {
        let mut blocks = Dedup::default();
        if d == 0 {
            blocks.push(Formula::Bottom);
        } else {
            for a in &level {
                blocks.push(a.clone());
            }
            for a in &level {
                for &i in modalities {
                    blocks.push(simplify(&Formula::boxed(i, a.clone()), &none));
                }
            }
        }
        let blocks = blocks.items;
        let mut next = Dedup::default();
        for b in &blocks {
            next.push(b.clone());
        }
        for a in &blocks {
            for b in &blocks {
                next.push(simplify(&Formula::implies(a.clone(), b.clone()), &none));
            }
        }
        level = next.items;
    }
    Ok(level)
}

#[derive(Default)]
struct Dedup {
    seen: HashSet<Formula>,
    items: Vec<Formula>,
}

impl Dedup {
    fn push(&mut self, f: Formula) {
        if self.seen.insert(f.clone()) {
            self.items.push(f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s, 2).unwrap()
    }

    fn mods(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn parses_normality_axiom() {
        let f = parse("[]1 (p -> q) -> ([]1 p -> []1 q)", 1).unwrap();
        let expected = Formula::implies(
            Formula::boxed(1, Formula::implies(Formula::var("p"), Formula::var("q"))),
            Formula::implies(
                Formula::boxed(1, Formula::var("p")),
                Formula::boxed(1, Formula::var("q")),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_atoms_and_sugar() {
        assert_eq!(p("false"), Formula::Bottom);
        assert_eq!(p("true"), Formula::top());
        assert_eq!(
            p("<>2 p"),
            Formula::implies(
                Formula::boxed(2, Formula::implies(Formula::var("p"), Formula::Bottom)),
                Formula::Bottom
            )
        );
        assert_eq!(p("~p"), Formula::not(Formula::var("p")));
        assert_eq!(p("a | b"), Formula::or(Formula::var("a"), Formula::var("b")));
        assert_eq!(p("a & b"), Formula::and(Formula::var("a"), Formula::var("b")));
    }

    #[test]
    fn precedence_and_associativity() {
        let (a, b, c) = (Formula::var("a"), Formula::var("b"), Formula::var("c"));
        assert_eq!(
            p("a -> b -> c"),
            Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone()))
        );
        assert_eq!(
            p("a | b & c"),
            Formula::or(a.clone(), Formula::and(b.clone(), c.clone()))
        );
        assert_eq!(
            p("a | b | c"),
            Formula::or(Formula::or(a.clone(), b.clone()), c.clone())
        );
        assert_eq!(
            p("~a & []1 b"),
            Formula::and(Formula::not(a.clone()), Formula::boxed(1, b.clone()))
        );
        assert_eq!(p("[]1 a -> b"), Formula::implies(Formula::boxed(1, a), b));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(
            parse("[]3 p", 2),
            Err(FormulaError::ModalityOutOfRange {
                index: 3,
                max: 2,
                pos: 2
            })
        );
        assert!(matches!(parse("[]0 p", 2), Err(FormulaError::ModalityOutOfRange { .. })));
        assert!(matches!(parse("(p -> q", 1), Err(FormulaError::Syntax { pos: 7, .. })));
        assert!(matches!(parse("p q", 1), Err(FormulaError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("p $ q", 1), Err(FormulaError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("[] p", 1), Err(FormulaError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("", 1), Err(FormulaError::Syntax { pos: 0, .. })));
    }

    #[test]
    fn prints_basic_forms() {
        assert_eq!(print(&Formula::Bottom), "false");
        assert_eq!(print(&Formula::boxed(1, Formula::var("p"))), "[]1 p");
        assert_eq!(print(&p("<>2 p")), "<>2 p");
        assert_eq!(print(&p("[]1 (p -> q) -> []1 p -> []1 q")), "[]1 (p -> q) -> []1 p -> []1 q");
        assert_eq!(print(&p("(a -> b) -> c")), "(a -> b) -> c");
        assert_eq!(print(&p("a | (b | c)")), "a | (b | c)");
        assert_eq!(print(&p("~(a & b)")), "~(a & b)");
    }

    #[test]
    fn stats_examples() {
        let s = stats(&p("[]1 false"));
        assert_eq!(s.modal_depth, 1);
        assert!(s.variables.is_empty());
        assert_eq!(s.modalities_used, mods(&[1]));
        assert!(s.is_closed);

        let s = stats(&p("[]1 false -> []2 []1 false"));
        assert_eq!(s.modal_depth, 2);
        assert_eq!(s.modalities_used, mods(&[1, 2]));
        assert!(s.is_closed);

        let s = stats(&p("p"));
        assert_eq!(s.modal_depth, 0);
        assert_eq!(s.variables.into_iter().collect::<Vec<_>>(), vec!["p".to_string()]);
        assert!(!s.is_closed);
    }

    #[test]
    fn simplify_examples() {
        let serial1 = mods(&[1]);
        let none = mods(&[]);
        assert_eq!(simplify_closed(&p("[]1 false"), &serial1).unwrap(), Formula::Bottom);
        assert_eq!(simplify_closed(&p("[]1 true"), &none).unwrap(), Formula::top());
        let irreducible = p("[]1 []1 false");
        assert_eq!(simplify_closed(&irreducible, &none).unwrap(), irreducible);
        assert!(matches!(
            simplify_closed(&p("[]1 q"), &none),
            Err(FormulaError::NotClosed(_))
        ));
        assert_eq!(simplify_closed(&p("~~[]1 false"), &none).unwrap(), p("[]1 false"));
    }

    #[test]
    fn enumerate_small_depths() {
        let d0 = enumerate_closed(0, &mods(&[1])).unwrap();
        assert_eq!(d0, vec![Formula::Bottom, Formula::top()]);

        let d1 = enumerate_closed(1, &mods(&[1])).unwrap();
        assert!(d1.contains(&p("[]1 false")));
        assert!(d1.contains(&Formula::top()));
        assert!(!d1.contains(&p("[]1 true")));
        assert_eq!(d1.len(), 4);

        assert!(matches!(
            enumerate_closed(4, &mods(&[1])),
            Err(FormulaError::CapExceeded { requested: 4, cap: 3 })
        ));
    }

    #[test]
    fn enumerated_formulas_respect_bounds() {
        let two = mods(&[1, 2]);
        for f in enumerate_closed(2, &two).unwrap() {
            assert!(f.is_closed());
            assert!(f.modal_depth() <= 2);
            assert!(f.modalities().is_subset(&two));
        }
    }
}
