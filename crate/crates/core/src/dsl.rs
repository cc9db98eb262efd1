//! Input documents describing a fibration.
//!
//! ```text
//! # elliptic surface E(1)
//! genus 1
//! preset chain
//! base S2
//! word (a b)^6
//! ```
//!
//! Statements are one per line: `genus INT`, `base D2|S2`, `preset NAME`,
//! `curve LABEL INT…` (2g coefficients in the order a1 b1 a2 b2 …),
//! `curve LABEL sep H`, `hyperelliptic yes|no|auto`, and `word EXPR`. Commas
//! count as whitespace and `#` starts a comment. A word expression is a
//! sequence of labels and parenthesised groups, each optionally raised to
//! an integer power; a parenthesised group may span several lines. Several
//! `word` lines are concatenated. Twists are attached left to right.
//!
//! Negative exponents (`a^-1`, `(a b)^-2`) denote negative twists and are
//! only accepted when achiral mode is enabled.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::catalog::{preset, CurveTable};
use crate::cycle::{CycleKind, VanishingCycle};
use crate::error::{Error, Result};
use crate::fibration::{Base, FibrationSpec, Hyperelliptic};
use crate::homology::{GenusContext, HomologyClass};

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    Caret,
    Newline,
    Eof,
}

fn parse_error<T>(pos: Pos, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            '\n' => {
                chars.next();
                out.push((Tok::Newline, pos));
                line += 1;
                column = 1;
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
                continue;
            }
            c if c.is_whitespace() || c == ',' => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push((Tok::LParen, pos));
            }
            ')' => {
                chars.next();
                out.push((Tok::RParen, pos));
            }
            '^' => {
                chars.next();
                out.push((Tok::Caret, pos));
            }
            c if c == '-' || c.is_ascii_digit() => {
                let mut s = String::new();
                s.push(c);
                chars.next();
                column += 1;
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    chars.next();
                    column += 1;
                }
                if s == "-" {
                    return parse_error(pos, "expected digits after '-'");
                }
                out.push((Tok::Int(s.parse().expect("digits")), pos));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars
                    .peek()
                    .filter(|d| d.is_alphanumeric() || matches!(d, '_' | '\'' | '.'))
                {
                    s.push(d);
                    chars.next();
                    column += 1;
                }
                out.push((Tok::Ident(s), pos));
                continue;
            }
            other => return parse_error(pos, format!("unexpected character {other:?}")),
        }
        column += 1;
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

/// One element of a word expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordItem {
    Token { label: String, pos: Pos },
    /// `(items)^exponent`; a negative exponent inverts and reverses.
    Group { items: Vec<WordItem>, exponent: i64, pos: Pos },
}

/// A parsed word expression.
pub type WordAst = Vec<WordItem>;

/// A label in a flattened word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatToken {
    pub label: String,
    pub inverse: bool,
    pub pos: Pos,
}

/// Expands groups, preserving order.
pub fn flatten(ast: &[WordItem]) -> Vec<FlatToken> {
    let mut out = Vec::new();
    for item in ast {
        flatten_into(item, &mut out);
    }
    out
}

fn flatten_into(item: &WordItem, out: &mut Vec<FlatToken>) {
    match item {
        WordItem::Token { label, pos } => out.push(FlatToken {
            label: label.clone(),
            inverse: false,
            pos: *pos,
        }),
        WordItem::Group { items, exponent, .. } => {
            let once = flatten(items);
            let inverse_once: Vec<FlatToken> = once
                .iter()
                .rev()
                .map(|t| FlatToken {
                    inverse: !t.inverse,
                    ..t.clone()
                })
                .collect();
            let block = if *exponent < 0 { &inverse_once } else { &once };
            for _ in 0..exponent.unsigned_abs() {
                out.extend(block.iter().cloned());
            }
        }
    }
}

fn has_negative_exponent(ast: &[WordItem]) -> Option<Pos> {
    ast.iter().find_map(|item| match item {
        WordItem::Token { .. } => None,
        WordItem::Group { exponent, pos, .. } if *exponent < 0 => Some(*pos),
        WordItem::Group { items, .. } => has_negative_exponent(items),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum CurveBody {
    Class(Vec<BigInt>),
    Separating(BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CurveDef {
    label: String,
    body: CurveBody,
}

impl CurveDef {
    pub(crate) fn resolve(&self, ctx: GenusContext, pos: Pos) -> Result<VanishingCycle> {
        match &self.body {
            CurveBody::Class(coeffs) => {
                if coeffs.len() != ctx.dim() {
                    return Err(Error::Semantic(format!(
                        "line {}: curve {} has {} coefficients, genus {} needs {}",
                        pos.line,
                        self.label,
                        coeffs.len(),
                        ctx.genus(),
                        ctx.dim()
                    )));
                }
                let class = HomologyClass::new(ctx, coeffs.clone())?;
                VanishingCycle::nonseparating(self.label.clone(), class)
            }
            CurveBody::Separating(h) => {
                let h = h
                    .to_usize()
                    .ok_or_else(|| Error::Validation(format!("curve {}: bad piece genus {h}", self.label)))?;
                VanishingCycle::separating(ctx, self.label.clone(), h)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Statement {
    Genus(usize),
    Base(Base),
    Preset(String),
    Curve(CurveDef),
    Hyperelliptic(Hyperelliptic),
    Word(WordAst),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos)> {
        match self.next() {
            (Tok::Ident(s), pos) => Ok((s, pos)),
            (_, pos) => parse_error(pos, format!("expected {what}")),
        }
    }

    fn int(&mut self, what: &str) -> Result<(BigInt, Pos)> {
        match self.next() {
            (Tok::Int(n), pos) => Ok((n, pos)),
            (_, pos) => parse_error(pos, format!("expected {what}")),
        }
    }

    fn end_of_statement(&mut self) -> Result<()> {
        match self.next() {
            (Tok::Newline | Tok::Eof, _) => Ok(()),
            (_, pos) => parse_error(pos, "unexpected token at end of statement"),
        }
    }

    fn statements(&mut self) -> Result<Vec<(Statement, Pos)>> {
        let mut out = Vec::new();
        loop {
            match self.next() {
                (Tok::Eof, _) => return Ok(out),
                (Tok::Newline, _) => continue,
                (Tok::Ident(kw), pos) => {
                    let stmt = self.statement(&kw, pos)?;
                    out.push((stmt, pos));
                }
                (_, pos) => return parse_error(pos, "expected a statement keyword"),
            }
        }
    }

    fn statement(&mut self, keyword: &str, pos: Pos) -> Result<Statement> {
        let stmt = match keyword {
            "genus" => {
                let (g, p) = self.int("a genus")?;
                let g = g.to_usize().ok_or(()).or_else(|_| parse_error(p, "genus must be a non-negative integer"))?;
                Statement::Genus(g)
            }
            "base" => {
                let (b, p) = self.ident("D2 or S2")?;
                match b.parse() {
                    Ok(base) => Statement::Base(base),
                    Err(_) => return parse_error(p, format!("unknown base {b:?}, expected D2 or S2")),
                }
            }
            "preset" => Statement::Preset(self.ident("a preset name")?.0),
            "hyperelliptic" => {
                let (v, p) = self.ident("yes, no or auto")?;
                Statement::Hyperelliptic(match v.as_str() {
                    "yes" => Hyperelliptic::Asserted,
                    "no" => Hyperelliptic::Denied,
                    "auto" => Hyperelliptic::Auto,
                    _ => return parse_error(p, "expected yes, no or auto"),
                })
            }
            "curve" => {
                let (label, _) = self.ident("a curve label")?;
                let body = if matches!(&self.peek().0, Tok::Ident(s) if s == "sep") {
                    self.next();
                    CurveBody::Separating(self.int("a piece genus")?.0)
                } else {
                    let mut coeffs = Vec::new();
                    while let Tok::Int(n) = &self.peek().0 {
                        coeffs.push(n.clone());
                        self.next();
                    }
                    if coeffs.is_empty() {
                        return parse_error(self.peek().1, "expected coefficients or 'sep'");
                    }
                    CurveBody::Class(coeffs)
                };
                Statement::Curve(CurveDef { label, body })
            }
            "word" => {
                let items = self.word_items(None)?;
                if items.is_empty() {
                    return parse_error(pos, "empty word");
                }
                Statement::Word(items)
            }
            other => return parse_error(pos, format!("unknown statement {other:?}")),
        };
        self.end_of_statement()?;
        Ok(stmt)
    }

    /// Items up to the end of the statement, or up to the `)` matching the
    /// `(` at `open`.
    fn word_items(&mut self, open: Option<Pos>) -> Result<WordAst> {
        let mut items = Vec::new();
        loop {
            let (tok, pos) = self.peek().clone();
            let item = match tok {
                Tok::Newline if open.is_some() => {
                    self.next();
                    continue;
                }
                Tok::Newline | Tok::Eof => match open {
                    None => return Ok(items),
                    Some(open) => return parse_error(open, "unclosed '('"),
                },
                Tok::RParen if open.is_some() => {
                    self.next();
                    return Ok(items);
                }
                Tok::RParen => return parse_error(pos, "unmatched ')'"),
                Tok::Ident(label) => {
                    self.next();
                    WordItem::Token { label, pos }
                }
                Tok::LParen => {
                    self.next();
                    let inner = self.word_items(Some(pos))?;
                    if inner.is_empty() {
                        return parse_error(pos, "empty group");
                    }
                    WordItem::Group {
                        items: inner,
                        exponent: 1,
                        pos,
                    }
                }
                Tok::Caret => return parse_error(pos, "'^' must follow a label or group"),
                Tok::Int(_) => return parse_error(pos, "unexpected number in word"),
            };
            let item = if matches!(self.peek().0, Tok::Caret) {
                self.next();
                let (k, kpos) = self.int("an exponent")?;
                let k = k.to_i64().ok_or(()).or_else(|_| parse_error(kpos, "exponent too large"))?;
                if k == 0 {
                    return parse_error(kpos, "exponent must be nonzero");
                }
                match item {
                    WordItem::Group { items, exponent: 1, pos } => WordItem::Group { items, exponent: k, pos },
                    token => WordItem::Group {
                        items: vec![token],
                        exponent: k,
                        pos,
                    },
                }
            } else {
                item
            };
            items.push(item);
        }
    }
}

pub(crate) fn parse_statements(text: &str) -> Result<Vec<(Statement, Pos)>> {
    Parser { toks: lex(text)?, at: 0 }.statements()
}

/// Parsing switches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept negative exponents (negative twists).
    pub achiral: bool,
}

/// A document with its curve table resolved but its word still as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub ctx: GenusContext,
    pub base: Base,
    pub hyperelliptic: Hyperelliptic,
    pub table: CurveTable,
    pub word: WordAst,
}

impl Document {
    /// Resolves labels and builds a validated spec.
    pub fn to_spec(&self, opts: ParseOptions) -> Result<FibrationSpec> {
        if let (false, Some(pos)) = (opts.achiral, has_negative_exponent(&self.word)) {
            return Err(Error::Semantic(format!(
                "line {}, column {}: negative exponents need achiral mode",
                pos.line, pos.column
            )));
        }
        let word = flatten(&self.word)
            .into_iter()
            .map(|t| {
                let cycle = self.table.get(&t.label).ok_or_else(|| {
                    Error::Semantic(format!(
                        "line {}, column {}: undefined curve label {:?}",
                        t.pos.line, t.pos.column, t.label
                    ))
                })?;
                Ok(if t.inverse { cycle.inverted() } else { cycle.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FibrationSpec::new(self.ctx, self.base, word)?.with_hyperelliptic(self.hyperelliptic))
    }
}

/// Parses a document without resolving the word.
pub fn parse_document(text: &str) -> Result<Document> {
    let mut ctx: Option<GenusContext> = None;
    let mut base = None;
    let mut hyperelliptic = Hyperelliptic::Auto;
    let mut word = Vec::new();
    let mut presets: Vec<(String, Pos)> = Vec::new();
    let mut curves: Vec<(CurveDef, Pos)> = Vec::new();
    for (stmt, pos) in parse_statements(text)? {
        match stmt {
            Statement::Genus(g) => {
                if ctx.is_some() {
                    return Err(Error::Semantic(format!("line {}: genus given twice", pos.line)));
                }
                ctx = Some(GenusContext::new(g)?);
            }
            Statement::Base(b) => base = Some(b),
            Statement::Hyperelliptic(h) => hyperelliptic = h,
            Statement::Preset(p) => presets.push((p, pos)),
            Statement::Curve(c) => curves.push((c, pos)),
            Statement::Word(w) => word.extend(w),
        }
    }
    let ctx = ctx.ok_or_else(|| Error::Semantic("missing genus statement".into()))?;
    let base = base.ok_or_else(|| Error::Semantic("missing base statement".into()))?;
    if word.is_empty() {
        return Err(Error::Semantic("missing word statement".into()));
    }
    let mut table = CurveTable::new(ctx);
    for (name, pos) in presets {
        let p = preset(ctx, &name).map_err(|e| Error::Semantic(format!("line {}: {e}", pos.line)))?;
        table.extend(&p)?;
    }
    let mut defined = CurveTable::new(ctx);
    for (def, pos) in curves {
        defined.insert(def.resolve(ctx, pos)?)?;
    }
    table.extend(&defined)?;
    Ok(Document {
        ctx,
        base,
        hyperelliptic,
        table,
        word,
    })
}

/// Parses and validates a document with default options.
pub fn parse(text: &str) -> Result<FibrationSpec> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, opts: ParseOptions) -> Result<FibrationSpec> {
    parse_document(text)?.to_spec(opts)
}

/// One `curve` line.
pub fn render_curve(cycle: &VanishingCycle) -> String {
    match cycle.kind() {
        CycleKind::Separating { piece_genus } => format!("curve {} sep {piece_genus}", cycle.label()),
        CycleKind::Nonseparating(c) => {
            let coeffs: Vec<String> = c.coeffs().iter().map(|x| x.to_string()).collect();
            format!("curve {} {}", cycle.label(), coeffs.join(" "))
        }
    }
}

/// Canonical document for a spec: explicit curve lines for every label used,
/// then the flattened word. Parsing the output gives back an equal spec,
/// except that labels shared by different curves are made unique.
pub fn render(spec: &FibrationSpec) -> String {
    let mut defs: Vec<VanishingCycle> = Vec::new();
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut seen: Vec<(VanishingCycle, String)> = Vec::new();
    for (i, cycle) in spec.word().iter().enumerate() {
        let positive = if cycle.is_inverse() { cycle.inverted() } else { cycle.clone() };
        if let Some((_, name)) = seen
            .iter()
            .find(|(orig, _)| orig.kind() == positive.kind() && orig.label() == positive.label())
        {
            names.insert(i, name.clone());
            continue;
        }
        let mut label = positive.label().to_string();
        let mut k = 1;
        while defs.iter().any(|d| d.label() == label) {
            label = format!("{}_{k}", positive.label());
            k += 1;
        }
        names.insert(i, label.clone());
        defs.push(positive.relabeled(label.clone()));
        seen.push((positive, label));
    }
    let mut out = String::new();
    let _ = writeln!(out, "genus {}", spec.genus());
    let _ = writeln!(out, "base {}", spec.base());
    let _ = writeln!(out, "hyperelliptic {}", spec.hyperelliptic());
    for d in &defs {
        let _ = writeln!(out, "{}", render_curve(d));
    }
    let tokens: Vec<String> = spec
        .word()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let name = &names[&i];
            if c.is_inverse() {
                format!("{name}^-1")
            } else {
                name.clone()
            }
        })
        .collect();
    let _ = writeln!(out, "word {}", tokens.join(" "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(spec: &FibrationSpec) -> Vec<String> {
        spec.word().iter().map(|c| c.label().to_string()).collect()
    }

    fn flat_labels(text: &str) -> Vec<String> {
        let doc = parse_document(&format!("genus 1\nbase D2\n{text}")).unwrap();
        flatten(&doc.word).into_iter().map(|t| t.label).collect()
    }

    #[test]
    fn elliptic_surface_document() {
        let spec = parse("genus 1\npreset chain\nbase S2\nword (a b)^6").unwrap();
        assert_eq!(spec.word().len(), 12);
        assert_eq!(spec.base(), Base::Sphere);
        assert_eq!(labels(&spec)[..3], ["a", "b", "a"]);
    }

    #[test]
    fn palindromic_word() {
        let spec = parse("genus 2\npreset chain\nbase S2\nword (c1 c2 c3 c4 c5 c5 c4 c3 c2 c1)^2").unwrap();
        let l = labels(&spec);
        assert_eq!(l.len(), 20);
        assert_eq!(l[..10], l[10..]);
        assert_eq!(l[4], "c5");
        assert_eq!(l[5], "c5");
    }

    #[test]
    fn flattening() {
        assert_eq!(flat_labels("word (a b)^2"), ["a", "b", "a", "b"]);
        assert_eq!(flat_labels("word ((a)^2 b)^2"), ["a", "a", "b", "a", "a", "b"]);
        assert_eq!(flat_labels("word a"), ["a"]);
        assert_eq!(flat_labels("word a^3, b"), ["a", "a", "a", "b"]);
        assert_eq!(flat_labels("word (a\n b)\nword b"), ["a", "b", "b"]);
    }

    #[test]
    fn errors() {
        let e = parse("genus 1\npreset chain\nbase S2\nword x").unwrap_err();
        assert!(matches!(e, Error::Semantic(_)), "{e}");
        assert!(e.to_string().contains("x"));

        let e = parse("genus 1\npreset chain\nbase S2\nword (a b").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e}");

        let e = parse("genus 1\npreset chain\nbase S2\nword (a b)^0").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, column: 12, .. }), "{e}");

        assert!(matches!(parse("genus 1\npreset chain\nword a"), Err(Error::Semantic(_))));
        assert!(matches!(parse("base S2\nword a"), Err(Error::Semantic(_))));
        assert!(matches!(parse("genus 1\nbase S2\npreset chain\n"), Err(Error::Semantic(_))));
        assert!(matches!(parse("genus 1\nbase T2\nword a"), Err(Error::Parse { .. })));
        assert!(matches!(parse("genus 1\nbase S2\nfrobnicate"), Err(Error::Parse { .. })));
        assert!(matches!(parse("genus 1\nbase S2 extra\nword a"), Err(Error::Parse { .. })));
        assert!(matches!(parse("genus 0\nbase S2\nword a"), Err(Error::Validation(_))));
        assert!(matches!(parse("genus 1\nbase S2\ncurve x 2 0\nword x"), Err(Error::Validation(_))));
        assert!(matches!(parse("genus 1\nbase S2\ncurve x 1 0 0\nword x"), Err(Error::Semantic(_))));
        assert!(matches!(parse("genus 1\nbase S2\nword $"), Err(Error::Parse { .. })));
    }

    #[test]
    fn negative_exponents_need_achiral() {
        let text = "genus 1\npreset chain\nbase D2\nword a b^-1";
        assert!(matches!(parse(text), Err(Error::Semantic(_))));
        let spec = parse_with(text, ParseOptions { achiral: true }).unwrap();
        assert!(spec.is_achiral());
        assert!(spec.word()[1].is_inverse());

        let doc = parse_document("genus 1\npreset chain\nbase D2\nword (a b)^-2").unwrap();
        let flat = flatten(&doc.word);
        let shown: Vec<(String, bool)> = flat.into_iter().map(|t| (t.label, t.inverse)).collect();
        assert_eq!(
            shown,
            vec![
                ("b".into(), true),
                ("a".into(), true),
                ("b".into(), true),
                ("a".into(), true)
            ]
        );
    }

    #[test]
    fn render_round_trip() {
        let text = "genus 2\npreset chain\nbase S2\ncurve s sep 1\nhyperelliptic yes\nword (c1 c2)^3 s c5";
        let spec = parse(text).unwrap();
        let rendered = render(&spec);
        assert_eq!(parse(&rendered).unwrap(), spec);
        assert!(rendered.starts_with("genus 2\nbase S2\nhyperelliptic yes\ncurve c1 1 0 0 0\n"));
    }

    #[test]
    fn render_disambiguates_labels() {
        let ctx = GenusContext::new(1).unwrap();
        let x1 = VanishingCycle::nonseparating("x", HomologyClass::a(ctx, 1)).unwrap();
        let x2 = VanishingCycle::nonseparating("x", HomologyClass::b(ctx, 1)).unwrap();
        let spec = FibrationSpec::new(ctx, Base::Disk, vec![x1, x2.clone(), x2]).unwrap();
        let back = parse(&render(&spec)).unwrap();
        assert_eq!(labels(&back), ["x", "x_1", "x_1"]);
        let classes: Vec<_> = back.word().iter().map(|c| c.class()).collect();
        let orig: Vec<_> = spec.word().iter().map(|c| c.class()).collect();
        assert_eq!(classes, orig);
    }
}
