//! The line-oriented input format.
//!
//! ```text
//! field Q                                   | field F <p>
//! generator <name> degree <d> [bidegree <p> <q>] [nilpotent <e>]
//! cap <D>
//! d <generator> = <expr>
//! operator <name> degree <k> { <monomial> -> <expr> ; ... }
//! multivector <name> arity <k> = <expr in @generator words>
//! lie <name> basis <x> <y> ...
//! bracket <lie> <x> <y> = <expr in the lie basis>
//! structure bv delta = <operator>
//! structure bv_infinity deltas = <operator>, ...
//! structure hierarchy lambda = <operator>
//! structure koszul pi = <multivector>
//! structure jacobi pi = <multivector> eta = <multivector>
//! structure generalized_poisson pis = <multivector>, ...
//! structure dg_lie delta = <operator>
//! structure dg_lie coefficients <lie> [iota <expr>, ...]
//! ```
//!
//! Expressions are `+`/`-` separated terms `coeff monomial`; coefficients
//! are `a`, `a/b` or `a mod p`; monomials are juxtaposed names, optionally
//! with powers `x^2`. `#` starts a comment. Operator bodies may span lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::algebra::{is_identifier, Algebra, AlgebraPresentation, Element, Generator, Monomial};
use crate::bv::BVStructure;
use crate::dglie::DgLie;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{zero_vector, Vector};
use crate::multivector::{LieStructure, MultiVector};
use crate::operator::GradedOperator;

/// Which structure a document describes, by the names of its ingredients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureSpec {
    Bv { delta: String },
    BvInfinity { deltas: Vec<String> },
    Hierarchy { lambda: String },
    Koszul { pi: String },
    Jacobi { pi: String, eta: String },
    GeneralizedPoisson { pis: Vec<String> },
    DgLieDerived { delta: String },
    DgLieCochains { lie: String, iota: Option<Vec<Vector>> },
}

impl StructureSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            StructureSpec::Bv { .. } => "bv",
            StructureSpec::BvInfinity { .. } => "bv_infinity",
            StructureSpec::Hierarchy { .. } => "hierarchy",
            StructureSpec::Koszul { .. } => "koszul",
            StructureSpec::Jacobi { .. } => "jacobi",
            StructureSpec::GeneralizedPoisson { .. } => "generalized_poisson",
            StructureSpec::DgLieDerived { .. } | StructureSpec::DgLieCochains { .. } => "dg_lie",
        }
    }
}

/// A named Lie algebra with basis names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedLie {
    pub basis: Vec<String>,
    pub structure: LieStructure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub algebra: Algebra,
    pub d: GradedOperator,
    pub operators: BTreeMap<String, GradedOperator>,
    pub multivectors: BTreeMap<String, MultiVector>,
    pub lies: BTreeMap<String, NamedLie>,
    pub structure: Option<StructureSpec>,
}

impl Document {
    pub fn new(algebra: &Algebra, d: GradedOperator) -> Self {
        Document {
            algebra: algebra.clone(),
            d,
            operators: BTreeMap::new(),
            multivectors: BTreeMap::new(),
            lies: BTreeMap::new(),
            structure: None,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    fn operator(&self, name: &str) -> Result<&GradedOperator> {
        self.operators
            .get(name)
            .ok_or_else(|| Error::Precondition(format!("unknown operator {name}")))
    }

    fn multivector(&self, name: &str) -> Result<&MultiVector> {
        self.multivectors
            .get(name)
            .ok_or_else(|| Error::Precondition(format!("unknown multivector {name}")))
    }

    fn structure(&self) -> Result<&StructureSpec> {
        self.structure
            .as_ref()
            .ok_or_else(|| Error::Precondition("the document declares no structure".into()))
    }

    pub fn is_dg_lie_only(&self) -> bool {
        matches!(self.structure, Some(StructureSpec::DgLieCochains { .. }))
    }

    /// The BV or BV∞ structure the document declares.
    pub fn bv_structure(&self) -> Result<BVStructure> {
        let d = self.d.clone();
        match self.structure()? {
            StructureSpec::Bv { delta } | StructureSpec::DgLieDerived { delta } => {
                BVStructure::classical(d, self.operator(delta)?.clone())
            }
            StructureSpec::BvInfinity { deltas } => {
                let ops = deltas
                    .iter()
                    .map(|n| self.operator(n).cloned())
                    .collect::<Result<Vec<_>>>()?;
                BVStructure::new(d, ops, None)
            }
            StructureSpec::Hierarchy { lambda } => BVStructure::build_hierarchy(d, self.operator(lambda)?.clone()),
            StructureSpec::Koszul { pi } => BVStructure::koszul(d, self.multivector(pi)?),
            StructureSpec::Jacobi { pi, eta } => {
                BVStructure::jacobi_structure(d, self.multivector(pi)?, self.multivector(eta)?)
            }
            StructureSpec::GeneralizedPoisson { pis } => {
                let mvs = pis
                    .iter()
                    .map(|n| self.multivector(n).cloned())
                    .collect::<Result<Vec<_>>>()?;
                BVStructure::generalized_poisson(d, &mvs)
            }
            StructureSpec::DgLieCochains { .. } => Err(Error::Precondition(
                "a dg_lie coefficients document has no BV structure".into(),
            )),
        }
    }

    /// The dg-Lie algebra: twisted cochains for `dg_lie coefficients`, the
    /// derived bracket of the BV structure otherwise.
    pub fn dg_lie(&self) -> Result<DgLie> {
        match self.structure()? {
            StructureSpec::DgLieCochains { lie, iota } => {
                let h = self
                    .lies
                    .get(lie)
                    .ok_or_else(|| Error::Precondition(format!("unknown lie algebra {lie}")))?;
                match iota {
                    None => DgLie::tensor(&self.d, &h.structure),
                    Some(iota) => {
                        let g = LieStructure::from_ce_differential(&self.d)?;
                        if let Some((i, j, k)) = g.jacobi_witness() {
                            return Err(Error::JacobiFailure(format!("CE algebra fails Jacobi on ({i}, {j}, {k})")));
                        }
                        DgLie::cochains(&g, &h.structure, iota)
                    }
                }
            }
            _ => DgLie::from_bv(&self.bv_structure()?),
        }
    }

    /// Reduction modulo `p` of every coefficient.
    pub fn reduce_mod(&self, p: u64) -> Result<Document> {
        let field = FieldSpec::prime_field(p)?;
        let algebra = self.algebra.with_field(field)?;
        let operators = self
            .operators
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.map_into(&algebra)?)))
            .collect::<Result<_>>()?;
        let multivectors = self
            .multivectors
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.map_into(field)?)))
            .collect::<Result<_>>()?;
        let lies = self
            .lies
            .iter()
            .map(|(k, v)| {
                Ok((
                    k.clone(),
                    NamedLie {
                        basis: v.basis.clone(),
                        structure: v.structure.map_into(field)?,
                    },
                ))
            })
            .collect::<Result<_>>()?;
        let structure = match &self.structure {
            Some(StructureSpec::DgLieCochains { lie, iota: Some(iota) }) => Some(StructureSpec::DgLieCochains {
                lie: lie.clone(),
                iota: Some(
                    iota.iter()
                        .map(|v| v.iter().map(|c| field.convert(c)).collect::<Result<Vec<_>>>())
                        .collect::<Result<_>>()?,
                ),
            }),
            other => other.clone(),
        };
        Ok(Document {
            d: self.d.map_into(&algebra)?,
            algebra,
            operators,
            multivectors,
            lies,
            structure,
        })
    }
}

// ---------------------------------------------------------------- printing

fn generator_names(a: &Algebra) -> Vec<String> {
    a.generators().iter().map(|g| g.name.clone()).collect()
}

fn format_scalar(c: &Scalar) -> String {
    c.to_string()
}

fn format_lie_vector(names: &[String], v: &[Scalar]) -> String {
    let mut out = String::new();
    for (k, (c, name)) in v.iter().zip(names).filter(|(c, _)| !c.is_zero()).enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            let _ = write!(out, "{} {name}", format_scalar(&mag));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Canonical text of a document; `parse(&print(doc)) == doc`.
pub fn print(doc: &Document) -> String {
    let a = &doc.algebra;
    let mut out = String::new();
    match a.field() {
        FieldSpec::Rationals => out.push_str("field Q\n"),
        FieldSpec::PrimeField(p) => {
            let _ = writeln!(out, "field F {p}");
        }
    }
    for g in a.generators() {
        let _ = write!(out, "generator {} degree {}", g.name, g.degree);
        if let Some((p, q)) = g.bidegree {
            let _ = write!(out, " bidegree {p} {q}");
        }
        if !g.is_odd() {
            if let Some(e) = g.nilpotency {
                let _ = write!(out, " nilpotent {e}");
            }
        }
        out.push('\n');
    }
    let _ = writeln!(out, "cap {}", a.degree_cap());
    for (i, img) in doc.d.generator_images().iter().enumerate() {
        if !img.is_zero() {
            let _ = writeln!(out, "d {} = {}", a.generators()[i].name, img);
        }
    }
    for (name, op) in &doc.operators {
        let _ = write!(out, "operator {name} degree {} {{", op.degree());
        let images: Vec<(Monomial, Element)> = op.images().into_iter().filter(|(_, e)| !e.is_zero()).collect();
        if images.is_empty() {
            out.push_str(" }\n");
        } else {
            out.push('\n');
            for (m, e) in images {
                let _ = writeln!(out, "  {} -> {} ;", a.format_monomial(&m), e);
            }
            out.push_str("}\n");
        }
    }
    let names = generator_names(a);
    for (name, mv) in &doc.multivectors {
        let _ = writeln!(out, "multivector {name} arity {} = {}", mv.arity(), format_multivector(&names, mv));
    }
    for (name, lie) in &doc.lies {
        let _ = writeln!(out, "lie {name} basis {}", lie.basis.join(" "));
        let n = lie.basis.len();
        for i in 0..n {
            for j in i + 1..n {
                let br = lie.structure.bracket_basis(i, j);
                if br.is_zero() {
                    continue;
                }
                let mut v = zero_vector(a.field(), n);
                for (k, c) in br.terms() {
                    v[k[0]] = c.clone();
                }
                let _ = writeln!(
                    out,
                    "bracket {name} {} {} = {}",
                    lie.basis[i],
                    lie.basis[j],
                    format_lie_vector(&lie.basis, &v)
                );
            }
        }
    }
    if let Some(s) = &doc.structure {
        out.push_str("structure ");
        match s {
            StructureSpec::Bv { delta } => {
                let _ = write!(out, "bv delta = {delta}");
            }
            StructureSpec::BvInfinity { deltas } => {
                let _ = write!(out, "bv_infinity deltas = {}", deltas.join(", "));
            }
            StructureSpec::Hierarchy { lambda } => {
                let _ = write!(out, "hierarchy lambda = {lambda}");
            }
            StructureSpec::Koszul { pi } => {
                let _ = write!(out, "koszul pi = {pi}");
            }
            StructureSpec::Jacobi { pi, eta } => {
                let _ = write!(out, "jacobi pi = {pi} eta = {eta}");
            }
            StructureSpec::GeneralizedPoisson { pis } => {
                let _ = write!(out, "generalized_poisson pis = {}", pis.join(", "));
            }
            StructureSpec::DgLieDerived { delta } => {
                let _ = write!(out, "dg_lie delta = {delta}");
            }
            StructureSpec::DgLieCochains { lie, iota } => {
                let _ = write!(out, "dg_lie coefficients {lie}");
                if let Some(iota) = iota {
                    let basis = &doc.lies[lie].basis;
                    let parts: Vec<String> = iota.iter().map(|v| format_lie_vector(basis, v)).collect();
                    let _ = write!(out, " iota {}", parts.join(", "));
                }
            }
        }
        out.push('\n');
    }
    out
}

fn format_multivector(names: &[String], mv: &MultiVector) -> String {
    let mut out = String::new();
    for (k, (word, c)) in mv.terms().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let w: Vec<String> = word.iter().map(|&i| format!("@{}", names[i])).collect();
        if word.is_empty() {
            out.push_str(&format_scalar(&mag));
        } else if mag.is_one() {
            out.push_str(&w.join(" "));
        } else {
            let _ = write!(out, "{} {}", format_scalar(&mag), w.join(" "));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

// ----------------------------------------------------------------- lexing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Dual(String),
    Int(BigInt),
    Sym(&'static str),
    Newline,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> Error {
    Error::Semantic {
        line,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let push = |tok: Tok, out: &mut Vec<Token>| out.push(Token { tok, line, column });
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                push(Tok::Int(s.parse().expect("digits")), &mut out);
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' || c == '@' {
                let dual = c == '@';
                let start = if dual { i + 1 } else { i };
                i = start;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                if dual {
                    if s.is_empty() {
                        return Err(syntax(line, column, "expected a generator name after '@'"));
                    }
                    push(Tok::Dual(s), &mut out);
                } else {
                    push(Tok::Ident(s), &mut out);
                }
                continue;
            }
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            if two == "->" {
                push(Tok::Sym("->"), &mut out);
                i += 2;
                continue;
            }
            let sym = match c {
                '=' => "=",
                '+' => "+",
                '-' => "-",
                '/' => "/",
                '{' => "{",
                '}' => "}",
                ';' => ";",
                ',' => ",",
                '^' => "^",
                _ => return Err(syntax(line, column, format!("unexpected character '{c}'"))),
            };
            if sym == "{" {
                depth += 1;
            }
            if sym == "}" {
                if depth == 0 {
                    return Err(syntax(line, column, "unmatched '}'"));
                }
                depth -= 1;
            }
            push(Tok::Sym(sym), &mut out);
            i += 1;
        }
        if depth == 0 {
            out.push(Token {
                tok: Tok::Newline,
                line,
                column: chars.len() + 1,
            });
        }
    }
    if depth > 0 {
        let line = text.lines().count();
        return Err(syntax(line, 1, "unterminated operator body"));
    }
    Ok(out)
}

// ---------------------------------------------------------------- parsing

/// A term `coeff atom atom ...` of an expression, before interpretation.
#[derive(Clone, Debug)]
struct RawTerm {
    coeff: (BigInt, BigInt, Option<BigInt>),
    negative: bool,
    atoms: Vec<(Tok, u32, usize)>,
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> (usize, usize) {
        match self.peek().or_else(|| self.toks.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        }
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax(l, c, msg)
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{kw}'"))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == kw)
    }

    fn sym(&mut self, s: &str) -> Result<()> {
        match self.peek() {
            Some(Token { tok: Tok::Sym(x), .. }) if *x == s => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{s}'"))),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(x), .. }) if *x == s)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let neg = if self.is_sym("-") {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek() {
            Some(Token { tok: Tok::Int(n), .. }) => {
                self.pos += 1;
                Ok(if neg { -n.clone() } else { n.clone() })
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn small_integer(&mut self) -> Result<i64> {
        let (l, c) = self.here();
        let n = self.integer()?;
        i64::try_from(&n).map_err(|_| syntax(l, c, "integer out of range"))
    }

    fn end(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    /// `[+|-] term ((+|-) term)*` until a stop symbol or the end.
    fn expression(&mut self, stops: &[&str]) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.is_sym("-") {
            self.pos += 1;
            negative = true;
        } else if self.is_sym("+") {
            self.pos += 1;
        }
        loop {
            terms.push(self.term(negative)?);
            if self.is_sym("+") {
                self.pos += 1;
                negative = false;
            } else if self.is_sym("-") {
                self.pos += 1;
                negative = true;
            } else if self.at_end() || stops.iter().any(|s| self.is_sym(s) || self.is_keyword(s)) {
                return Ok(terms);
            } else {
                return Err(self.err("expected '+', '-' or the end of the expression"));
            }
        }
    }

    fn term(&mut self, negative: bool) -> Result<RawTerm> {
        let mut coeff = (BigInt::from(1), BigInt::from(1), None);
        let mut has_coeff = false;
        if let Some(Token { tok: Tok::Int(n), .. }) = self.peek() {
            self.pos += 1;
            has_coeff = true;
            coeff.0 = n.clone();
            if self.is_sym("/") {
                self.pos += 1;
                match self.next() {
                    Some(Token { tok: Tok::Int(d), .. }) => coeff.1 = d.clone(),
                    _ => {
                        self.pos -= 1;
                        return Err(self.err("expected a denominator"));
                    }
                }
            }
            if self.is_keyword("mod") {
                self.pos += 1;
                match self.next() {
                    Some(Token { tok: Tok::Int(p), .. }) => coeff.2 = Some(p.clone()),
                    _ => {
                        self.pos -= 1;
                        return Err(self.err("expected a modulus after 'mod'"));
                    }
                }
            }
        }
        let mut atoms = Vec::new();
        while let Some(t) = self.peek() {
            match &t.tok {
                Tok::Ident(s) if !matches!(s.as_str(), "mod" | "iota" | "eta") => {}
                Tok::Dual(_) => {}
                _ => break,
            }
            self.pos += 1;
            let mut power = 1u32;
            if self.is_sym("^") {
                self.pos += 1;
                let (l, c) = self.here();
                let n = self.small_integer()?;
                power = u32::try_from(n).ok().filter(|&p| p > 0).ok_or_else(|| syntax(l, c, "bad exponent"))?;
            }
            atoms.push((t.tok.clone(), power, t.column));
        }
        if !has_coeff && atoms.is_empty() {
            return Err(self.err("expected a term"));
        }
        Ok(RawTerm {
            coeff,
            negative,
            atoms,
        })
    }
}

fn scalar_of(field: FieldSpec, line: usize, t: &RawTerm) -> Result<Scalar> {
    let (num, den, modulus) = &t.coeff;
    if let Some(p) = modulus {
        match field {
            FieldSpec::PrimeField(q) if BigInt::from(q) == *p => {}
            _ => return Err(semantic(line, format!("coefficient mod {p} does not match the field {field}"))),
        }
    }
    let c = field
        .from_ratio(num, den)
        .map_err(|e| semantic(line, format!("bad coefficient: {e}")))?;
    Ok(if t.negative { -c } else { c })
}

fn element_of(a: &Algebra, line: usize, terms: &[RawTerm]) -> Result<Element> {
    let mut out = a.zero();
    for t in terms {
        let c = scalar_of(a.field(), line, t)?;
        let mut x = a.unit();
        for (atom, power, _) in &t.atoms {
            let Tok::Ident(name) = atom else {
                return Err(semantic(line, "dual generators are only allowed in multivectors"));
            };
            let i = a
                .generator_index(name)
                .ok_or_else(|| semantic(line, format!("unknown generator {name}")))?;
            for _ in 0..*power {
                x = &x * &a.generator(i);
            }
        }
        out = &out + &x.scale(&c);
    }
    Ok(out)
}

fn parse_monomial(a: &Algebra, line: usize, terms: &[RawTerm]) -> Result<Monomial> {
    let e = element_of(a, line, terms)?;
    let mut it = e.terms();
    match (it.next(), it.next()) {
        (Some((m, c)), None) if c.is_one() && terms.len() == 1 => Ok(m.clone()),
        _ => Err(semantic(line, "expected a single basis monomial")),
    }
}

fn multivector_of(a: &Algebra, line: usize, arity: usize, terms: &[RawTerm]) -> Result<MultiVector> {
    let mut words = Vec::new();
    for t in terms {
        let c = scalar_of(a.field(), line, t)?;
        let mut word = Vec::new();
        for (atom, power, _) in &t.atoms {
            let Tok::Dual(name) = atom else {
                return Err(semantic(line, "multivector terms are words in @generator duals"));
            };
            let i = a
                .generator_index(name)
                .ok_or_else(|| semantic(line, format!("unknown generator {name}")))?;
            if a.generators()[i].degree != 1 {
                return Err(semantic(line, format!("{name} is not a degree-1 generator")));
            }
            for _ in 0..*power {
                word.push(i);
            }
        }
        // A bare `0` is the zero multivector of any arity.
        if word.is_empty() && c.is_zero() {
            continue;
        }
        if word.len() != arity {
            return Err(semantic(line, format!("term of arity {} in a multivector of arity {arity}", word.len())));
        }
        words.push((word, c));
    }
    MultiVector::from_terms(a.field(), arity, words).map_err(|e| semantic(line, e.to_string()))
}

fn lie_vector_of(field: FieldSpec, basis: &[String], line: usize, terms: &[RawTerm]) -> Result<Vector> {
    let mut v = zero_vector(field, basis.len());
    for t in terms {
        let c = scalar_of(field, line, t)?;
        match t.atoms.as_slice() {
            [] => {
                if !c.is_zero() {
                    return Err(semantic(line, "a Lie algebra element needs basis names"));
                }
            }
            [(Tok::Ident(name), 1, _)] => {
                let k = basis
                    .iter()
                    .position(|b| b == name)
                    .ok_or_else(|| semantic(line, format!("unknown basis element {name}")))?;
                v[k] = &v[k] + &c;
            }
            _ => return Err(semantic(line, "Lie algebra terms are single basis names")),
        }
    }
    Ok(v)
}

struct Statement<'a> {
    line: usize,
    toks: &'a [Token],
}

fn statements(toks: &[Token]) -> Vec<Statement<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, t) in toks.iter().enumerate() {
        if t.tok == Tok::Newline {
            if i > start {
                out.push(Statement {
                    line: toks[start].line,
                    toks: &toks[start..i],
                });
            }
            start = i + 1;
        }
    }
    out
}

#[derive(Default)]
struct Builder {
    field: Option<FieldSpec>,
    generators: Vec<Generator>,
    cap: Option<i64>,
}

pub fn parse(text: &str) -> Result<Document> {
    let toks = lex(text)?;
    let stmts = statements(&toks);
    let mut b = Builder::default();
    // Pass 1: field, generators and cap fix the algebra.
    let mut rest = Vec::new();
    for s in &stmts {
        let mut c = Cursor { toks: s.toks, pos: 0 };
        let head = c.ident("a statement keyword")?;
        match head.as_str() {
            "field" => {
                if b.field.is_some() {
                    return Err(semantic(s.line, "field declared twice"));
                }
                let kind = c.ident("Q or F")?;
                let f = match kind.as_str() {
                    "Q" => FieldSpec::Rationals,
                    "F" => {
                        let (l, col) = c.here();
                        let p = c.small_integer()?;
                        let p = u64::try_from(p).map_err(|_| syntax(l, col, "negative modulus"))?;
                        FieldSpec::prime_field(p).map_err(|e| semantic(s.line, e.to_string()))?
                    }
                    _ => return Err(syntax(s.line, s.toks[1].column, "expected Q or F")),
                };
                c.end()?;
                b.field = Some(f);
            }
            "generator" => {
                let name = c.ident("a generator name")?;
                if !is_identifier(&name) {
                    return Err(semantic(s.line, format!("invalid generator name {name}")));
                }
                c.keyword("degree")?;
                let degree = c.small_integer()?;
                let mut bidegree = None;
                let mut nilpotency = None;
                while !c.at_end() {
                    if c.is_keyword("bidegree") {
                        c.pos += 1;
                        let p = c.small_integer()?;
                        let q = c.small_integer()?;
                        bidegree = Some((p, q));
                    } else if c.is_keyword("nilpotent") {
                        c.pos += 1;
                        let (l, col) = c.here();
                        let e = c.small_integer()?;
                        nilpotency = Some(u32::try_from(e).map_err(|_| syntax(l, col, "bad nilpotency"))?);
                    } else {
                        return Err(c.err("expected 'bidegree' or 'nilpotent'"));
                    }
                }
                let mut g = if degree % 2 != 0 {
                    let mut g = Generator::odd(&name, degree);
                    if let Some(e) = nilpotency {
                        g.nilpotency = Some(e);
                    }
                    g
                } else {
                    Generator {
                        name,
                        degree,
                        bidegree: None,
                        nilpotency,
                    }
                };
                if let Some((p, q)) = bidegree {
                    g = g.with_bidegree(p, q);
                }
                b.generators.push(g);
            }
            "cap" => {
                if b.cap.is_some() {
                    return Err(semantic(s.line, "cap declared twice"));
                }
                b.cap = Some(c.small_integer()?);
                c.end()?;
            }
            _ => rest.push(s),
        }
    }
    let field = b.field.ok_or_else(|| semantic(1, "missing field declaration"))?;
    let cap = b.cap.unwrap_or_else(|| {
        b.generators
            .iter()
            .map(|g| if g.is_odd() { g.degree.max(0) } else { g.degree.max(0) * (g.nilpotency.unwrap_or(2) as i64 - 1) })
            .sum()
    });
    let presentation = AlgebraPresentation::new(field, b.generators, cap);
    let line_of_generators = stmts.first().map_or(1, |s| s.line);
    let a = Algebra::new(presentation).map_err(|e| semantic(line_of_generators, e.to_string()))?;
    let mut d_images: Vec<Option<Element>> = vec![None; a.num_generators()];
    let mut doc = Document::new(&a, GradedOperator::zero(&a, 1));
    for s in rest {
        let mut c = Cursor { toks: s.toks, pos: 0 };
        let head = c.ident("a statement keyword")?;
        match head.as_str() {
            "d" => {
                let name = c.ident("a generator name")?;
                let i = a
                    .generator_index(&name)
                    .ok_or_else(|| semantic(s.line, format!("unknown generator {name}")))?;
                c.sym("=")?;
                let e = element_of(&a, s.line, &c.expression(&[])?)?;
                c.end()?;
                let want = a.generators()[i].degree + 1;
                if !e.is_homogeneous_of(want) {
                    return Err(semantic(s.line, format!("degree mismatch: d {name} must have degree {want}")));
                }
                if d_images[i].is_some() {
                    return Err(semantic(s.line, format!("d {name} declared twice")));
                }
                d_images[i] = Some(e);
            }
            "operator" => {
                let name = c.ident("an operator name")?;
                c.keyword("degree")?;
                let degree = c.small_integer()?;
                c.sym("{")?;
                let mut images: BTreeMap<Monomial, Element> = BTreeMap::new();
                while !c.is_sym("}") {
                    let line = c.here().0;
                    let m = parse_monomial(&a, line, &c.expression(&["->"])?)?;
                    c.sym("->")?;
                    let e = element_of(&a, line, &c.expression(&[";", "}"])?)?;
                    let want = a.monomial_degree(&m) + degree;
                    if !e.is_homogeneous_of(want) {
                        return Err(semantic(
                            line,
                            format!("degree mismatch: image of {} must have degree {want}", a.format_monomial(&m)),
                        ));
                    }
                    if images.insert(m.clone(), e).is_some() {
                        return Err(semantic(line, format!("image of {} given twice", a.format_monomial(&m))));
                    }
                    if c.is_sym(";") {
                        c.pos += 1;
                    }
                }
                c.sym("}")?;
                c.end()?;
                let op = GradedOperator::from_fn(&a, degree, |m| Ok(images.get(m).cloned().unwrap_or_else(|| a.zero())))
                    .map_err(|e| semantic(s.line, e.to_string()))?;
                if doc.operators.insert(name.clone(), op).is_some() {
                    return Err(semantic(s.line, format!("operator {name} declared twice")));
                }
            }
            "multivector" => {
                let name = c.ident("a multivector name")?;
                c.keyword("arity")?;
                let (l, col) = c.here();
                let arity = usize::try_from(c.small_integer()?).map_err(|_| syntax(l, col, "bad arity"))?;
                c.sym("=")?;
                let mv = multivector_of(&a, s.line, arity, &c.expression(&[])?)?;
                c.end()?;
                if doc.multivectors.insert(name.clone(), mv).is_some() {
                    return Err(semantic(s.line, format!("multivector {name} declared twice")));
                }
            }
            "lie" => {
                let name = c.ident("a Lie algebra name")?;
                c.keyword("basis")?;
                let mut basis = Vec::new();
                while !c.at_end() {
                    basis.push(c.ident("a basis name")?);
                }
                if basis.is_empty() {
                    return Err(semantic(s.line, "a Lie algebra needs a basis"));
                }
                let lie = NamedLie {
                    structure: LieStructure::abelian(field, basis.len()),
                    basis,
                };
                if doc.lies.insert(name.clone(), lie).is_some() {
                    return Err(semantic(s.line, format!("lie algebra {name} declared twice")));
                }
            }
            "bracket" => {
                let name = c.ident("a Lie algebra name")?;
                let lie = doc
                    .lies
                    .get(&name)
                    .ok_or_else(|| semantic(s.line, format!("unknown lie algebra {name}")))?
                    .clone();
                let x = c.ident("a basis name")?;
                let y = c.ident("a basis name")?;
                c.sym("=")?;
                let v = lie_vector_of(field, &lie.basis, s.line, &c.expression(&[])?)?;
                c.end()?;
                let pos = |n: &str| {
                    lie.basis
                        .iter()
                        .position(|b| b == n)
                        .ok_or_else(|| semantic(s.line, format!("unknown basis element {n}")))
                };
                let (i, j) = (pos(&x)?, pos(&y)?);
                let mut entries = Vec::new();
                let n = lie.basis.len();
                for p in 0..n {
                    for q in p + 1..n {
                        let br = lie.structure.bracket_basis(p, q);
                        if (p, q) == (i.min(j), i.max(j)) || br.is_zero() {
                            continue;
                        }
                        entries.push(((p, q), br.terms().map(|(k, c)| (k[0], c.clone())).collect()));
                    }
                }
                let value: Vec<(usize, Scalar)> = if i < j {
                    v.iter().cloned().enumerate().collect()
                } else {
                    v.iter().map(|c| -c).enumerate().collect()
                };
                if i == j {
                    return Err(semantic(s.line, "a bracket of an element with itself is zero"));
                }
                entries.push(((i.min(j), i.max(j)), value));
                let structure =
                    LieStructure::from_brackets(field, n, entries).map_err(|e| semantic(s.line, e.to_string()))?;
                doc.lies.insert(
                    name,
                    NamedLie {
                        basis: lie.basis,
                        structure,
                    },
                );
            }
            "structure" => {
                if doc.structure.is_some() {
                    return Err(semantic(s.line, "structure declared twice"));
                }
                doc.structure = Some(parse_structure(&mut c, &doc, s.line)?);
            }
            other => return Err(syntax(s.line, s.toks[0].column, format!("unknown statement '{other}'"))),
        }
    }
    let images: Vec<Element> = d_images.into_iter().map(|e| e.unwrap_or_else(|| a.zero())).collect();
    doc.d = GradedOperator::derivation_from_images(&a, 1, &images).map_err(|e| semantic(1, e.to_string()))?;
    Ok(doc)
}

fn name_list(c: &mut Cursor<'_>) -> Result<Vec<String>> {
    let mut out = vec![c.ident("a name")?];
    while c.is_sym(",") {
        c.pos += 1;
        out.push(c.ident("a name")?);
    }
    Ok(out)
}

fn parse_structure(c: &mut Cursor<'_>, doc: &Document, line: usize) -> Result<StructureSpec> {
    let kind = c.ident("a structure kind")?;
    let need_op = |n: &str| {
        if doc.operators.contains_key(n) {
            Ok(())
        } else {
            Err(semantic(line, format!("unknown operator {n}")))
        }
    };
    let need_mv = |n: &str| {
        if doc.multivectors.contains_key(n) {
            Ok(())
        } else {
            Err(semantic(line, format!("unknown multivector {n}")))
        }
    };
    let spec = match kind.as_str() {
        "bv" | "dg_lie" if c.is_keyword("delta") => {
            c.pos += 1;
            c.sym("=")?;
            let delta = c.ident("an operator name")?;
            need_op(&delta)?;
            if kind == "bv" {
                StructureSpec::Bv { delta }
            } else {
                StructureSpec::DgLieDerived { delta }
            }
        }
        "dg_lie" => {
            c.keyword("coefficients")?;
            let lie = c.ident("a Lie algebra name")?;
            let h = doc
                .lies
                .get(&lie)
                .ok_or_else(|| semantic(line, format!("unknown lie algebra {lie}")))?;
            let iota = if c.is_keyword("iota") {
                c.pos += 1;
                let mut v = vec![lie_vector_of(doc.field(), &h.basis, line, &c.expression(&[","])?)?];
                while c.is_sym(",") {
                    c.pos += 1;
                    v.push(lie_vector_of(doc.field(), &h.basis, line, &c.expression(&[","])?)?);
                }
                if v.len() != doc.algebra.num_generators() {
                    return Err(semantic(line, "iota needs one element per generator"));
                }
                Some(v)
            } else {
                None
            };
            StructureSpec::DgLieCochains { lie, iota }
        }
        "bv_infinity" => {
            c.keyword("deltas")?;
            c.sym("=")?;
            let deltas = name_list(c)?;
            for n in &deltas {
                need_op(n)?;
            }
            StructureSpec::BvInfinity { deltas }
        }
        "hierarchy" => {
            c.keyword("lambda")?;
            c.sym("=")?;
            let lambda = c.ident("an operator name")?;
            need_op(&lambda)?;
            StructureSpec::Hierarchy { lambda }
        }
        "koszul" => {
            c.keyword("pi")?;
            c.sym("=")?;
            let pi = c.ident("a multivector name")?;
            need_mv(&pi)?;
            StructureSpec::Koszul { pi }
        }
        "jacobi" => {
            c.keyword("pi")?;
            c.sym("=")?;
            let pi = c.ident("a multivector name")?;
            c.keyword("eta")?;
            c.sym("=")?;
            let eta = c.ident("a multivector name")?;
            need_mv(&pi)?;
            need_mv(&eta)?;
            StructureSpec::Jacobi { pi, eta }
        }
        "generalized_poisson" => {
            c.keyword("pis")?;
            c.sym("=")?;
            let pis = name_list(c)?;
            for n in &pis {
                need_mv(n)?;
            }
            StructureSpec::GeneralizedPoisson { pis }
        }
        "bv" => return Err(c.err("expected 'delta'")),
        other => return Err(semantic(line, format!("unknown structure kind {other}"))),
    };
    c.end()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEIS: &str = "\
field Q
generator e1 degree 1
generator e2 degree 1
generator e3 degree 1
d e3 = e1 e2
multivector pi arity 2 = @e1 @e2
structure koszul pi = pi
";

    #[test]
    fn round_trip() {
        let doc = parse(HEIS).unwrap();
        let text = print(&doc);
        assert_eq!(parse(&text).unwrap(), doc);
        assert_eq!(print(&parse(&text).unwrap()), text);
        let b = doc.bv_structure().unwrap();
        assert!(crate::bv::verify_bv(&b).passed());
    }

    #[test]
    fn single_generator() {
        let doc = parse("field Q\ngenerator e1 degree 1\nd e1 = 0\n").unwrap();
        assert_eq!(doc.algebra.num_generators(), 1);
        assert!(doc.d.is_zero());
    }

    #[test]
    fn degree_mismatch_reported_with_line() {
        let err = parse("field Q\ngenerator e1 degree 1\ngenerator e2 degree 1\nd e1 = e1\n").unwrap_err();
        assert!(matches!(err, Error::Semantic { line: 4, .. }), "{err}");
        assert!(parse("field Q\ngenerator e1 degree 1\ngenerator e2 degree 1\nd e1 = e1 e2\n").is_ok());
    }

    #[test]
    fn syntax_error_position() {
        let err = parse("field Q\ngenerator e1 degree 1\nd e1 = 2 $ e1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 3,
                column: 10,
                message: "unexpected character '$'".into()
            }
        );
    }

    #[test]
    fn operator_block_and_modular_coefficients() {
        let text = "\
field F 5
generator a degree 1
generator b degree 2 nilpotent 3
operator D degree -1 {
  a -> 3 mod 5 ;
  a b -> 2 b
}
";
        let doc = parse(text).unwrap();
        let op = &doc.operators["D"];
        let a = &doc.algebra;
        assert_eq!(op.apply(&a.generator(0)).unwrap(), a.unit().scale(&a.field().from_i64(3)));
        assert_eq!(parse(&print(&doc)).unwrap(), doc);
        assert!(matches!(
            parse("field Q\ngenerator a degree 1\noperator D degree -1 { a -> 1 mod 5 }\n"),
            Err(Error::Semantic { line: 3, .. })
        ));
    }

    #[test]
    fn unknown_names_rejected() {
        assert!(matches!(
            parse("field Q\ngenerator e1 degree 1\nd e2 = 0\n"),
            Err(Error::Semantic { line: 3, .. })
        ));
        assert!(matches!(
            parse("field Q\ngenerator e1 degree 1\nstructure koszul pi = p\n"),
            Err(Error::Semantic { line: 3, .. })
        ));
    }
}
