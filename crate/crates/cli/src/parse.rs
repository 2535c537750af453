//! Scheme-expression syntax.
//!
//! ```text
//! expr  := base
//!        | affine(expr, d)        | affine(base=expr, d=d)
//!        | proj(expr, d)          | proj(base=expr, d=d)
//!        | grass(expr, k, n)      | grass(base=expr, k=k, n=n)
//!        | flag(expr, n1+...+nl)  | flag(base=expr, type=n1+...+nl [, n=n])
//!        | union(expr, expr, ...)
//! base  := Q | Q(i) | Q(sqrt d) | F(q) | label
//! ```
//!
//! Labels come from a field-config file. Whitespace is insignificant.

use std::collections::BTreeMap;
use std::fmt;

use cellzeta::{FiniteField, NumberField, SchemeExpr};

/// A syntax or validation error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    pub pos: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Malformed text or an unknown name.
    Syntax,
    /// Well-formed text describing an invalid object, such as `k > n`.
    Invalid,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col = self.input[..self.pos.min(self.input.len())].chars().count();
        writeln!(f, "at column {}: {}", col + 1, self.message)?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {}^", " ".repeat(col))
    }
}

impl std::error::Error for ParseError {}

/// Field labels available to the parser besides the built-in ones.
#[derive(Debug, Clone, Default)]
pub struct FieldTable {
    fields: BTreeMap<String, NumberField>,
}

impl FieldTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, field: NumberField) -> Option<NumberField> {
        self.fields.insert(field.label().to_string(), field)
    }

    pub fn get(&self, label: &str) -> Option<&NumberField> {
        self.fields.get(label)
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }
}

/// Words with a fixed meaning; they cannot be used as field labels.
pub const RESERVED: [&str; 8] = ["Q", "F", "affine", "proj", "grass", "flag", "union", "sqrt"];

/// Whether `label` can be written in an expression.
pub fn is_valid_label(label: &str) -> bool {
    let mut chars = label.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
        && !RESERVED.contains(&label)
}

pub fn parse_scheme(text: &str, fields: &FieldTable) -> Result<SchemeExpr, ParseError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        fields,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(expr)
}

/// Parses a single base: `Q`, `Q(i)`, `Q(sqrt d)`, `F(q)` or a label.
pub fn parse_base(text: &str, fields: &FieldTable) -> Result<SchemeExpr, ParseError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        fields,
    };
    p.skip_ws();
    let start = p.pos;
    let word = p.ident()?;
    let base = p.base(&word, start)?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(base)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    fields: &'a FieldTable,
}

enum Arg {
    Expr(SchemeExpr, usize),
    Int(i64, usize),
    Type(Vec<u32>, usize),
}

impl Arg {
    fn pos(&self) -> usize {
        match self {
            Arg::Expr(_, p) | Arg::Int(_, p) | Arg::Type(_, p) => *p,
        }
    }
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            input: self.src.to_string(),
            pos,
            message: message.into(),
            kind: ParseErrorKind::Syntax,
        }
    }

    fn invalid_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Invalid,
            ..self.error_at(pos, message)
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return Err(self.error("expected a scheme or field name")),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn int(&mut self) -> Result<(i64, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.pos += 1;
            self.skip_ws();
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(self.error_at(start, "expected an integer"));
        }
        let text: String = self.src[start..self.pos]
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        text.parse()
            .map(|v| (v, start))
            .map_err(|_| self.error_at(start, "integer out of range"))
    }

    fn expr(&mut self) -> Result<SchemeExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let word = self.ident()?;
        match word.as_str() {
            "affine" | "proj" | "grass" | "flag" | "union" => self.call(&word, start),
            _ => self.base(&word, start),
        }
    }

    fn base(&mut self, word: &str, start: usize) -> Result<SchemeExpr, ParseError> {
        match word {
            "Q" => {
                if !self.eat('(') {
                    return Ok(SchemeExpr::base(NumberField::rationals()));
                }
                let inner = self.pos;
                let name = self.ident()?;
                let d = match name.as_str() {
                    "i" => -1,
                    "sqrt" => self.int()?.0,
                    _ => return Err(self.error_at(inner, "expected 'i' or 'sqrt d'")),
                };
                self.expect(')')?;
                NumberField::quadratic(d)
                    .map(SchemeExpr::base)
                    .map_err(|e| self.invalid_at(start, e.to_string()))
            }
            "F" => {
                self.expect('(')?;
                let (q, at) = self.int()?;
                self.expect(')')?;
                let q = u64::try_from(q)
                    .map_err(|_| self.invalid_at(at, "field size must be positive"))?;
                FiniteField::new(q)
                    .map(SchemeExpr::finite)
                    .map_err(|e| self.invalid_at(at, e.to_string()))
            }
            label => match self.fields.get(label) {
                Some(k) => Ok(SchemeExpr::base(k.clone())),
                None => Err(self.error_at(start, format!("unknown field label '{label}'"))),
            },
        }
    }

    /// An argument: a flag type, an integer, or a nested expression.
    fn arg(&mut self) -> Result<Arg, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '-' => {
                let (first, _) = self.int()?;
                self.skip_ws();
                if self.peek() != Some('+') {
                    return Ok(Arg::Int(first, start));
                }
                let mut parts = vec![first];
                while self.eat('+') {
                    parts.push(self.int()?.0);
                }
                let parts = parts
                    .into_iter()
                    .map(|p| {
                        u32::try_from(p).map_err(|_| {
                            self.invalid_at(start, "flag type parts must be non-negative")
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Arg::Type(parts, start))
            }
            _ => Ok(Arg::Expr(self.expr()?, start)),
        }
    }

    fn call(&mut self, name: &str, start: usize) -> Result<SchemeExpr, ParseError> {
        self.expect('(')?;
        let mut positional: Vec<Arg> = Vec::new();
        let mut keyword: BTreeMap<String, Arg> = BTreeMap::new();
        loop {
            self.skip_ws();
            let here = self.pos;
            // keyword argument?
            let save = self.pos;
            let key = match self.ident() {
                Ok(id) if self.eat('=') => Some(id),
                _ => {
                    self.pos = save;
                    None
                }
            };
            let value = self.arg()?;
            match key {
                Some(k) => {
                    if keyword.insert(k.clone(), value).is_some() {
                        return Err(self.error_at(here, format!("duplicate argument '{k}'")));
                    }
                }
                None if !keyword.is_empty() => {
                    return Err(self.error_at(here, "positional argument after keyword arguments"))
                }
                None => positional.push(value),
            }
            if self.eat(')') {
                break;
            }
            self.expect(',')?;
        }
        let mut args = Args {
            parser: self,
            name,
            start,
            positional,
            keyword,
            next: 0,
        };
        let out = match name {
            "union" => {
                let mut parts = Vec::new();
                if !args.keyword.is_empty() {
                    let pos = args.keyword.values().next().map(Arg::pos).unwrap_or(start);
                    return Err(args
                        .parser
                        .error_at(pos, "union takes positional arguments only"));
                }
                for a in std::mem::take(&mut args.positional) {
                    match a {
                        Arg::Expr(e, _) => parts.push(e),
                        other => {
                            return Err(args.parser.error_at(other.pos(), "expected a scheme"))
                        }
                    }
                }
                SchemeExpr::union(parts)
                    .map_err(|e| args.parser.invalid_at(start, e.to_string()))?
            }
            "affine" => {
                let base = args.expr("base")?;
                let d = args.count("d")?;
                args.finish()?;
                base.affine(d)
            }
            "proj" => {
                let base = args.expr("base")?;
                let d = args.count("d")?;
                args.finish()?;
                base.proj(d)
            }
            "grass" => {
                let base = args.expr("base")?;
                let k = args.count("k")?;
                let n = args.count("n")?;
                args.finish()?;
                base.grassmannian(k, n)
                    .map_err(|e| self.invalid_at(start, e.to_string()))?
            }
            "flag" => {
                let base = args.expr("base")?;
                let (parts, at) = args.flag_type("type")?;
                let n = args.optional_count("n")?;
                args.finish()?;
                let sum: u32 = parts.iter().sum();
                if let Some(n) = n {
                    if n != sum {
                        return Err(
                            self.invalid_at(at, format!("flag type sums to {sum}, but n = {n}"))
                        );
                    }
                }
                base.flag(parts)
                    .map_err(|e| self.invalid_at(at, e.to_string()))?
            }
            _ => unreachable!("caller checks the name"),
        };
        Ok(out)
    }
}

struct Args<'p, 'a> {
    parser: &'p Parser<'a>,
    name: &'p str,
    start: usize,
    positional: Vec<Arg>,
    keyword: BTreeMap<String, Arg>,
    next: usize,
}

impl Args<'_, '_> {
    fn take(&mut self, key: &str) -> Option<Arg> {
        if let Some(a) = self.keyword.remove(key) {
            return Some(a);
        }
        if self.next < self.positional.len() {
            // placeholder swap keeps indices stable
            let a = std::mem::replace(&mut self.positional[self.next], Arg::Int(0, 0));
            self.next += 1;
            return Some(a);
        }
        None
    }

    fn missing(&self, key: &str) -> ParseError {
        self.parser.error_at(
            self.start,
            format!("{} is missing the argument '{key}'", self.name),
        )
    }

    fn expr(&mut self, key: &str) -> Result<SchemeExpr, ParseError> {
        match self.take(key) {
            Some(Arg::Expr(e, _)) => Ok(e),
            Some(other) => Err(self
                .parser
                .error_at(other.pos(), format!("'{key}' must be a scheme"))),
            None => Err(self.missing(key)),
        }
    }

    fn count(&mut self, key: &str) -> Result<u32, ParseError> {
        match self.optional_count(key)? {
            Some(v) => Ok(v),
            None => Err(self.missing(key)),
        }
    }

    fn optional_count(&mut self, key: &str) -> Result<Option<u32>, ParseError> {
        match self.take(key) {
            Some(Arg::Int(v, at)) => u32::try_from(v).map(Some).map_err(|_| {
                self.parser
                    .invalid_at(at, format!("'{key}' must be a non-negative integer"))
            }),
            Some(other) => Err(self
                .parser
                .error_at(other.pos(), format!("'{key}' must be an integer"))),
            None => Ok(None),
        }
    }

    fn flag_type(&mut self, key: &str) -> Result<(Vec<u32>, usize), ParseError> {
        match self.take(key) {
            Some(Arg::Type(parts, at)) => Ok((parts, at)),
            Some(Arg::Int(v, at)) => u32::try_from(v).map(|v| (vec![v], at)).map_err(|_| {
                self.parser
                    .invalid_at(at, "flag type parts must be non-negative")
            }),
            Some(Arg::Expr(_, at)) => {
                Err(self.parser.error_at(at, "expected a flag type n1+n2+..."))
            }
            None => Err(self.missing(key)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if let Some((key, arg)) = self.keyword.iter().next() {
            return Err(self
                .parser
                .error_at(arg.pos(), format!("{} has no argument '{key}'", self.name)));
        }
        if let Some(extra) = self.positional.get(self.next) {
            return Err(self
                .parser
                .error_at(extra.pos(), format!("too many arguments to {}", self.name)));
        }
        Ok(())
    }
}
