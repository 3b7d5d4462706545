//! Line-oriented reader for presentation files.
//!
//! ```text
//! field GF(2)            # or: field Q
//! gen x:1 y:1
//! rel x*y + y*x; y^2
//! module M
//! mgen e:0
//! mrel e*x
//! ideal I = (x, y)
//! ideal Z = 0
//! wit I Z Z 1 x
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, Scalar};
use crate::families::{IdealSpec, WitnessTriple};

use super::poly::{ModElement, NcPolynomial};
use super::presentation::{eliminate_linear_relations, ModulePresentation, Presentation};
use super::word::{GeneratorSet, Word};

/// Everything a presentation file can declare.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub algebra: Presentation,
    pub modules: Vec<ModulePresentation>,
    pub ideals: Vec<IdealSpec>,
    pub witnesses: Vec<WitnessTriple>,
}

impl Document {
    pub fn module(&self, name: &str) -> Option<&ModulePresentation> {
        self.modules.iter().find(|m| m.name() == name)
    }

    /// Render in the input format; parsing the output reproduces `self`.
    pub fn to_text(&self) -> String {
        let field = self.algebra.field();
        let gens = self.algebra.gens();
        let mut s = self.algebra.to_string();
        for m in &self.modules {
            s.push_str(&m.format_block());
        }
        for i in &self.ideals {
            if i.generators.is_empty() {
                s.push_str(&format!("ideal {} = 0\n", i.name));
            } else {
                let parts: Vec<String> = i.generators.iter().map(|p| p.format(field, gens)).collect();
                s.push_str(&format!("ideal {} = ({})\n", i.name, parts.join(", ")));
            }
        }
        for w in &self.witnesses {
            s.push_str(&format!("wit {} {} {} {} {}\n", w.ideal, w.j1, w.j2, w.t, w.x.format(field, gens)));
        }
        s
    }
}

/// Parse a presentation file. Generators that occur linearly in relations
/// are eliminated and relations are minimized before returning.
pub fn parse_presentation(text: &str) -> Result<Document> {
    let mut p = Parser::default();
    for (i, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("");
        p.statement(i + 1, line)?;
    }
    p.finish()
}

struct RawModule {
    name: String,
    gens: Vec<(String, u32)>,
    rels: Vec<(usize, String, usize)>,
}

/// `(line, name, [(generator text, column)])`.
type RawIdeal = (usize, String, Vec<(String, usize)>);

#[derive(Default)]
struct Parser {
    field: Option<FieldSpec>,
    gens: Vec<(String, u32)>,
    rels: Vec<(usize, String, usize)>,
    modules: Vec<RawModule>,
    ideals: Vec<RawIdeal>,
    wits: Vec<(usize, [String; 3], u32, String, usize)>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Split `body` (starting at 1-based column `col0`) on `sep`, returning
/// trimmed pieces with their columns.
fn split_with_columns(body: &str, col0: usize, sep: char) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    let chars: Vec<char> = body.chars().collect();
    for i in 0..=chars.len() {
        if i == chars.len() || chars[i] == sep {
            let piece: String = chars[start..i].iter().collect();
            let lead = piece.len() - piece.trim_start().len();
            if !piece.trim().is_empty() {
                out.push((piece.trim().to_string(), col0 + start + lead));
            }
            start = i + 1;
        }
    }
    out
}

fn parse_decls(line: usize, body: &str, col0: usize, allow_zero: bool) -> Result<Vec<(String, u32)>> {
    let mut out = Vec::new();
    let mut col = col0;
    for tok in body.split_whitespace() {
        let offset = body[col - col0..].find(tok).unwrap_or(0);
        let at = col + offset;
        col = at + tok.len();
        let Some((name, deg)) = tok.split_once(':') else {
            return Err(syntax(line, at, format!("expected name:degree, found `{tok}`")));
        };
        if name.is_empty() || !name.starts_with(is_ident_start) || !name.chars().all(is_ident) {
            return Err(syntax(line, at, format!("invalid name `{name}`")));
        }
        let d: u32 = deg.parse().map_err(|_| syntax(line, at + name.len() + 1, format!("invalid degree `{deg}`")))?;
        if d == 0 && !allow_zero {
            return Err(Error::DegreeZeroGenerator { name: name.into() });
        }
        out.push((name.to_string(), d));
    }
    Ok(out)
}

impl Parser {
    fn statement(&mut self, line: usize, text: &str) -> Result<()> {
        let trimmed = text.trim_start();
        if trimmed.trim().is_empty() {
            return Ok(());
        }
        let indent = text.len() - trimmed.len();
        let kw_end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let kw = &trimmed[..kw_end];
        let body = &trimmed[kw_end..];
        let body_col = indent + kw_end + 1;
        match kw {
            "field" => {
                let v = body.trim();
                let f = if v == "Q" {
                    FieldSpec::Rationals
                } else if let Some(p) = v.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
                    let p: u32 = p.trim().parse().map_err(|_| syntax(line, body_col, "invalid prime"))?;
                    FieldSpec::prime(p).map_err(|e| syntax(line, body_col, e.to_string()))?
                } else {
                    return Err(syntax(line, body_col, format!("unknown field `{v}`")));
                };
                if self.field.is_some() {
                    return Err(syntax(line, 1, "field declared twice"));
                }
                self.field = Some(f);
            }
            "gen" => {
                if !self.rels.is_empty() || !self.modules.is_empty() {
                    return Err(syntax(line, 1, "generators must be declared before relations"));
                }
                self.gens.extend(parse_decls(line, body, body_col, false)?);
            }
            "rel" => {
                if !self.modules.is_empty() {
                    return Err(syntax(line, 1, "algebra relations must precede module blocks"));
                }
                for (piece, col) in split_with_columns(body, body_col, ';') {
                    self.rels.push((line, piece, col));
                }
            }
            "module" => {
                let name = body.trim();
                if name.is_empty() || !name.starts_with(is_ident_start) || !name.chars().all(is_ident) {
                    return Err(syntax(line, body_col, "expected a module name"));
                }
                self.modules.push(RawModule { name: name.into(), gens: Vec::new(), rels: Vec::new() });
            }
            "mgen" => {
                let decls = parse_decls(line, body, body_col, true)?;
                let m = self.modules.last_mut().ok_or_else(|| syntax(line, 1, "mgen outside a module block"))?;
                m.gens.extend(decls);
            }
            "mrel" => {
                let m = self.modules.last_mut().ok_or_else(|| syntax(line, 1, "mrel outside a module block"))?;
                for (piece, col) in split_with_columns(body, body_col, ';') {
                    m.rels.push((line, piece, col));
                }
            }
            "ideal" => {
                let Some((name, rhs)) = body.split_once('=') else {
                    return Err(syntax(line, body_col, "expected `ideal NAME = (...)`"));
                };
                let name = name.trim().to_string();
                let rhs_col = body_col + body.find('=').unwrap() + 1;
                let rhs_trim = rhs.trim();
                let lead = rhs.len() - rhs.trim_start().len();
                let gens = if rhs_trim == "0" {
                    Vec::new()
                } else if let Some(inner) = rhs_trim.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                    split_with_columns(inner, rhs_col + lead + 1, ',')
                } else {
                    return Err(syntax(line, rhs_col, "ideal generators must be parenthesized"));
                };
                self.ideals.push((line, name, gens));
            }
            "wit" => {
                let parts: Vec<&str> = body.split_whitespace().collect();
                if parts.len() < 5 {
                    return Err(syntax(line, body_col, "expected `wit I J1 J2 t poly`"));
                }
                let t: u32 = parts[3].parse().map_err(|_| syntax(line, body_col, "invalid shift t"))?;
                if t == 0 {
                    return Err(syntax(line, body_col, "shift t must be positive"));
                }
                // the polynomial is everything after the fourth token
                let mut rest = body;
                for p in &parts[..4] {
                    let at = rest.find(p).unwrap() + p.len();
                    rest = &rest[at..];
                }
                let col = body_col + (body.len() - rest.len()) + (rest.len() - rest.trim_start().len());
                self.wits.push((line, [parts[0].into(), parts[1].into(), parts[2].into()], t, rest.trim().into(), col));
            }
            other => return Err(syntax(line, indent + 1, format!("unknown statement `{other}`"))),
        }
        Ok(())
    }

    fn finish(self) -> Result<Document> {
        let field = self.field.ok_or_else(|| syntax(1, 1, "missing `field` header"))?;
        let (names, degrees): (Vec<String>, Vec<u32>) = self.gens.iter().cloned().unzip();
        let gens = GeneratorSet::new(names, degrees)?;

        let mut rels = Vec::new();
        for (line, text, col) in &self.rels {
            let terms = parse_terms(*line, text, *col, field)?;
            rels.push(poly_from_terms(*line, field, &gens, terms)?);
        }
        let elim = eliminate_linear_relations(field, &gens, rels)?;
        let algebra = Presentation::new(field, elim.gens.clone(), elim.rels.clone())?;

        let mut modules = Vec::new();
        for m in &self.modules {
            if modules.iter().any(|x: &ModulePresentation| x.name() == m.name) {
                return Err(Error::Input(format!("module `{}` declared twice", m.name)));
            }
            let mgen_names: Vec<String> = m.gens.iter().map(|g| g.0.clone()).collect();
            let mgen_degrees: Vec<u32> = m.gens.iter().map(|g| g.1).collect();
            let mut mrels = Vec::new();
            for (line, text, col) in &m.rels {
                let terms = parse_terms(*line, text, *col, field)?;
                let raw = module_elem_from_terms(*line, field, &gens, &mgen_names, &mgen_degrees, terms)?;
                mrels.push(elim.apply_module(field, &raw));
            }
            modules.push(ModulePresentation::new(m.name.clone(), algebra.clone(), mgen_names, mgen_degrees, mrels)?);
        }

        let mut ideals = Vec::new();
        for (line, name, parts) in &self.ideals {
            if ideals.iter().any(|i: &IdealSpec| &i.name == name) {
                return Err(Error::Input(format!("ideal `{name}` declared twice")));
            }
            let mut generators = Vec::new();
            for (text, col) in parts {
                let terms = parse_terms(*line, text, *col, field)?;
                let p = poly_from_terms(*line, field, &gens, terms)?;
                let p = elim.apply(field, &p);
                if !p.is_zero() {
                    generators.push(p);
                }
            }
            ideals.push(IdealSpec { name: name.clone(), generators });
        }

        let mut witnesses = Vec::new();
        for (line, [i, j1, j2], t, text, col) in &self.wits {
            for n in [i, j1, j2] {
                if !ideals.iter().any(|x| &x.name == n) {
                    return Err(Error::Input(format!("witness at line {line} names unknown ideal `{n}`")));
                }
            }
            let terms = parse_terms(*line, text, *col, field)?;
            let x = elim.apply(field, &poly_from_terms(*line, field, &gens, terms)?);
            witnesses.push(WitnessTriple { ideal: i.clone(), j1: j1.clone(), j2: j2.clone(), t: *t, x });
        }

        Ok(Document { algebra, modules, ideals, witnesses })
    }
}

/// One parsed term: coefficient and the factor names with their columns.
struct RawTerm {
    coeff: Scalar,
    factors: Vec<(String, usize)>,
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    text: &'a str,
}

impl Cursor<'_> {
    fn col(&self) -> usize {
        self.col0 + self.pos
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect::<String>().parse().unwrap())
    }

    fn ident(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.chars.len() && is_ident_start(self.chars[self.pos]) {
            while self.pos < self.chars.len() && is_ident(self.chars[self.pos]) {
                self.pos += 1;
            }
            Some((self.chars[start..self.pos].iter().collect(), self.col0 + start))
        } else {
            None
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let _ = self.text;
        syntax(self.line, self.col(), msg)
    }
}

fn parse_terms(line: usize, text: &str, col0: usize, field: FieldSpec) -> Result<Vec<RawTerm>> {
    let mut c = Cursor { chars: text.chars().collect(), pos: 0, line, col0, text };
    let mut terms = Vec::new();
    if c.peek() == Some('0') && text.trim() == "0" {
        return Ok(terms);
    }
    let mut first = true;
    loop {
        let mut sign = 1i64;
        match c.peek() {
            Some('+') if !first => c.pos += 1,
            Some('-') => {
                c.pos += 1;
                sign = -1;
            }
            Some(_) if first => {}
            None if first => return Err(c.err("expected a term")),
            _ => return Err(c.err("expected `+` or `-`")),
        }
        first = false;
        let mut coeff = field.from_i64(sign);
        let mut factors = Vec::new();
        if let Some(num) = c.number() {
            let value = if c.peek() == Some('/') {
                c.pos += 1;
                let den = c.number().ok_or_else(|| c.err("expected a denominator"))?;
                field.from_ratio(&num, &den).map_err(|e| c.err(e.to_string()))?
            } else {
                field.from_bigint(&num)
            };
            coeff = field.mul(&coeff, &value);
            if c.peek() == Some('*') {
                c.pos += 1;
            } else {
                terms.push(RawTerm { coeff, factors });
                if c.peek().is_none() {
                    break;
                }
                continue;
            }
        }
        loop {
            let (name, col) = c.ident().ok_or_else(|| c.err("expected a generator name"))?;
            let mut power = 1usize;
            if c.peek() == Some('^') {
                c.pos += 1;
                let e = c.number().ok_or_else(|| c.err("expected an exponent"))?;
                power = usize::try_from(e).map_err(|_| c.err("exponent too large"))?;
                if power == 0 {
                    return Err(c.err("exponent must be positive"));
                }
            }
            for _ in 0..power {
                factors.push((name.clone(), col));
            }
            if c.peek() == Some('*') {
                c.pos += 1;
            } else {
                break;
            }
        }
        terms.push(RawTerm { coeff, factors });
        if c.peek().is_none() {
            break;
        }
    }
    Ok(terms)
}

fn letters_of(line: usize, gens: &GeneratorSet, factors: &[(String, usize)]) -> Result<Word> {
    let mut letters = Vec::with_capacity(factors.len());
    for (name, _) in factors {
        let g = gens.index_of(name).ok_or_else(|| Error::UnknownGenerator { line, name: name.clone() })?;
        letters.push(g as u8);
    }
    Ok(Word::from_letters(letters))
}

fn poly_from_terms(line: usize, field: FieldSpec, gens: &GeneratorSet, terms: Vec<RawTerm>) -> Result<NcPolynomial> {
    let mut degree = None;
    let mut out = Vec::new();
    for t in terms {
        let w = letters_of(line, gens, &t.factors)?;
        let d = gens.word_degree(&w);
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => return Err(Error::Inhomogeneous { line, first: e, second: d }),
            _ => {}
        }
        out.push((w, t.coeff));
    }
    Ok(NcPolynomial::from_terms(field, degree.unwrap_or(0), out))
}

fn module_elem_from_terms(
    line: usize,
    field: FieldSpec,
    gens: &GeneratorSet,
    mgen_names: &[String],
    mgen_degrees: &[u32],
    terms: Vec<RawTerm>,
) -> Result<ModElement> {
    let mut degree = None;
    let mut out = Vec::new();
    for t in terms {
        let Some(((head, col), rest)) = t.factors.split_first() else {
            return Err(syntax(line, 1, "module terms must start with a module generator"));
        };
        let g = mgen_names.iter().position(|n| n == head).ok_or_else(|| {
            if gens.index_of(head).is_some() {
                syntax(line, *col, format!("module term must start with a module generator, found `{head}`"))
            } else {
                Error::UnknownGenerator { line, name: head.clone() }
            }
        })?;
        let w = letters_of(line, gens, rest)?;
        let d = mgen_degrees[g] + gens.word_degree(&w);
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => return Err(Error::Inhomogeneous { line, first: e, second: d }),
            _ => {}
        }
        out.push(((g, w), t.coeff));
    }
    Ok(ModElement::from_terms(field, degree.unwrap_or(0), out))
}
