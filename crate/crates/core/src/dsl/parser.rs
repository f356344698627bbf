//! Line-oriented recursive-descent parser for `.opt` circuit files.

use std::fmt;

use super::ast::*;
use crate::algebra::PathLabel;
use crate::elements::BasisTarget;

const MAX_DEPTH: usize = 128;

const STATEMENT_KEYWORDS: [&str; 8] = ["paths", "param", "source", "bs", "pbs", "pr", "hwp", "basis"];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: expected {}, found {found}", expected.join(" | "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{column}: duplicate path declaration `{name}`")]
    DuplicatePath { line: usize, column: usize, name: String },
    #[error("{line}:{column}: duplicate parameter declaration `{name}`")]
    DuplicateParam { line: usize, column: usize, name: String },
    #[error("{line}:{column}: input is not valid UTF-8")]
    InvalidUtf8 { line: usize, column: usize },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::DuplicatePath { line, column, .. }
            | ParseError::DuplicateParam { line, column, .. }
            | ParseError::InvalidUtf8 { line, column } => (*line, *column),
        }
    }
}

/// Parses raw bytes, reporting invalid UTF-8 as a positioned diagnostic.
pub fn parse_bytes(bytes: &[u8]) -> Result<Circuit, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let line = 1 + valid.iter().filter(|&&b| b == b'\n').count();
            let line_start = valid.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
            // the prefix is valid UTF-8 by construction
            let column = 1 + std::str::from_utf8(&valid[line_start..]).map_or(0, |s| s.chars().count());
            Err(ParseError::InvalidUtf8 { line, column })
        }
    }
}

pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit = Circuit::default();
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut p = LineParser::new(content, line_no);
        p.skip_ws();
        if p.at_end() {
            continue;
        }
        p.statement(&mut circuit)?;
    }
    Ok(circuit)
}

/// Parses a standalone expression (used by tests and the CLI).
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = LineParser::new(text, 1);
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(&["end of expression"]));
    }
    Ok(e)
}

struct LineParser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    depth: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum AttrKind {
    Expr,
    Path,
    PortList { allow_vacuum: bool },
    Pol,
}

enum AttrValue {
    Expr(Expr),
    Path(PathLabel),
    Ports([Option<PathLabel>; 2]),
    Pol(SourcePol),
}

impl<'a> LineParser<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        LineParser {
            src,
            pos: 0,
            line,
            depth: 0,
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn column(&self) -> usize {
        1 + self.src[..self.pos].chars().count()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn found(&self) -> String {
        match self.peek() {
            None => "end of line".to_string(),
            Some(_) => {
                let tok: String = self
                    .rest()
                    .chars()
                    .take_while(|c| !c.is_whitespace())
                    .take(16)
                    .collect();
                format!("`{tok}`")
            }
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.found(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    /// `[A-Za-z0-9_]+`
    fn word(&mut self) -> Option<&'a str> {
        let len = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
            .count();
        if len == 0 {
            return None;
        }
        let w = &self.src[self.pos..self.pos + len];
        self.pos += len;
        Some(w)
    }

    fn identifier(&mut self) -> Option<&'a str> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => self.word(),
            _ => None,
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(&["end of line"]))
        }
    }

    fn statement(&mut self, circuit: &mut Circuit) -> Result<(), ParseError> {
        let start = self.pos;
        let keyword = match self.word() {
            Some(w) if STATEMENT_KEYWORDS.contains(&w) => w,
            _ => {
                self.pos = start;
                return Err(self.error(&STATEMENT_KEYWORDS));
            }
        };
        match keyword {
            "paths" => self.paths_decl(circuit),
            "param" => self.param_decl(circuit),
            "source" => {
                let source = self.source()?;
                circuit.statements.push(Statement {
                    kind: StatementKind::Source(source),
                    line: self.line,
                });
                Ok(())
            }
            element => {
                let spec = self.element(element)?;
                circuit.statements.push(Statement {
                    kind: StatementKind::Element(spec),
                    line: self.line,
                });
                Ok(())
            }
        }
    }

    fn require_ws(&mut self) -> Result<(), ParseError> {
        if matches!(self.peek(), Some(' ' | '\t')) {
            self.skip_ws();
            Ok(())
        } else {
            Err(self.error(&["whitespace"]))
        }
    }

    fn path_label(&mut self) -> Result<PathLabel, ParseError> {
        match self.word() {
            Some(w) => Ok(PathLabel::new(w)),
            None => Err(self.error(&["path label"])),
        }
    }

    fn paths_decl(&mut self, circuit: &mut Circuit) -> Result<(), ParseError> {
        self.require_ws()?;
        loop {
            self.skip_ws();
            let column = self.column();
            let label = self.path_label()?;
            if circuit.paths.contains(&label) {
                return Err(ParseError::DuplicatePath {
                    line: self.line,
                    column,
                    name: label.to_string(),
                });
            }
            circuit.paths.push(label);
            self.skip_ws();
            if !self.eat(',') {
                break;
            }
        }
        self.end_of_statement()
    }

    fn param_decl(&mut self, circuit: &mut Circuit) -> Result<(), ParseError> {
        self.require_ws()?;
        let column = self.column();
        let start = self.pos;
        let name = match self.identifier() {
            Some(n) if !is_reserved(n) => n.to_string(),
            _ => {
                self.pos = start;
                return Err(self.error(&["parameter name"]));
            }
        };
        self.skip_ws();
        let default = if self.eat('=') {
            self.skip_ws();
            Some(self.signed_number()?)
        } else {
            None
        };
        self.end_of_statement()?;
        if circuit.param(&name).is_some() {
            return Err(ParseError::DuplicateParam {
                line: self.line,
                column,
                name,
            });
        }
        circuit.params.push(ParamDecl { name, default });
        Ok(())
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let x = self.number()?;
        Ok(if negative { -x } else { x })
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let bytes = self.rest().as_bytes();
        let mut i = 0;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        let int_digits = digits(&mut i);
        let mut frac_digits = 0;
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            frac_digits = digits(&mut i);
        }
        if int_digits + frac_digits == 0 {
            return Err(self.error(&["number"]));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) > 0 {
                i = j;
            }
        }
        let text = &self.rest()[..i];
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => {
                self.pos += i;
                Ok(x)
            }
            _ => Err(self.error(&["finite number"])),
        }
    }

    /// Parses `key=value` attributes in any order; each listed key must
    /// appear exactly once.
    fn attributes(&mut self, spec: &[(&'static str, AttrKind)]) -> Result<Vec<AttrValue>, ParseError> {
        let mut values: Vec<Option<AttrValue>> = spec.iter().map(|_| None).collect();
        let keys: Vec<&str> = spec.iter().map(|(k, _)| *k).collect();
        loop {
            let had_ws = matches!(self.peek(), Some(' ' | '\t'));
            self.skip_ws();
            if self.at_end() {
                break;
            }
            if !had_ws {
                return Err(self.error(&["whitespace"]));
            }
            let start = self.pos;
            let key = self.word();
            let idx = key.and_then(|k| keys.iter().position(|x| *x == k));
            let Some(idx) = idx.filter(|i| values[*i].is_none()) else {
                self.pos = start;
                let remaining: Vec<&str> = keys
                    .iter()
                    .zip(&values)
                    .filter(|(_, v)| v.is_none())
                    .map(|(k, _)| *k)
                    .collect();
                return Err(self.error(if remaining.is_empty() {
                    &["end of line"]
                } else {
                    &remaining
                }));
            };
            self.skip_ws();
            self.expect('=', "`=`")?;
            self.skip_ws();
            let value = match spec[idx].1 {
                AttrKind::Expr => AttrValue::Expr(self.expr()?),
                AttrKind::Path => AttrValue::Path(self.path_label()?),
                AttrKind::PortList { allow_vacuum } => AttrValue::Ports(self.port_list(allow_vacuum)?),
                AttrKind::Pol => AttrValue::Pol(self.source_pol()?),
            };
            values[idx] = Some(value);
        }
        let missing: Vec<&str> = keys
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.is_none())
            .map(|(k, _)| *k)
            .collect();
        if !missing.is_empty() {
            return Err(self.error(&missing));
        }
        Ok(values.into_iter().flatten().collect())
    }

    fn port_list(&mut self, allow_vacuum: bool) -> Result<[Option<PathLabel>; 2], ParseError> {
        let first = self.path_label()?;
        self.skip_ws();
        self.expect(',', "`,`")?;
        self.skip_ws();
        let second = if allow_vacuum && self.eat('-') {
            None
        } else {
            match self.word() {
                Some(w) => Some(PathLabel::new(w)),
                None if allow_vacuum => return Err(self.error(&["path label", "`-`"])),
                None => return Err(self.error(&["path label"])),
            }
        };
        Ok([Some(first), second])
    }

    fn source_pol(&mut self) -> Result<SourcePol, ParseError> {
        for pol in [SourcePol::Plus45, SourcePol::Minus45, SourcePol::H, SourcePol::V] {
            let kw = pol.keyword();
            if self.rest().starts_with(kw) {
                let after = self.rest()[kw.len()..].chars().next();
                if after.is_none_or(|c| !(c.is_ascii_alphanumeric() || c == '_')) {
                    self.pos += kw.len();
                    return Ok(pol);
                }
            }
        }
        Err(self.error(&["+45", "-45", "H", "V"]))
    }

    fn source(&mut self) -> Result<Source, ParseError> {
        self.require_ws()?;
        let start = self.pos;
        let kind = self.word();
        match kind {
            Some("photon") => {
                let mut v = self
                    .attributes(&[("path", AttrKind::Path), ("h", AttrKind::Expr), ("v", AttrKind::Expr)])?
                    .into_iter();
                Ok(Source::Photon {
                    path: take_path(v.next()),
                    h: take_expr(v.next()),
                    v: take_expr(v.next()),
                })
            }
            Some("coherent") => {
                let mut v = self
                    .attributes(&[
                        ("path", AttrKind::Path),
                        ("alpha", AttrKind::Expr),
                        ("pol", AttrKind::Pol),
                    ])?
                    .into_iter();
                Ok(Source::Coherent {
                    path: take_path(v.next()),
                    alpha: take_expr(v.next()),
                    pol: match v.next() {
                        Some(AttrValue::Pol(p)) => p,
                        _ => unreachable!("attribute kinds are fixed by the attribute table"),
                    },
                })
            }
            Some("vacuum") => {
                let mut v = self.attributes(&[("path", AttrKind::Path)])?.into_iter();
                Ok(Source::Vacuum {
                    path: take_path(v.next()),
                })
            }
            _ => {
                self.pos = start;
                Err(self.error(&["photon", "coherent", "vacuum"]))
            }
        }
    }

    fn element(&mut self, keyword: &str) -> Result<ElementSpec, ParseError> {
        let two_port = |eta: bool| {
            let mut spec = Vec::new();
            if eta {
                spec.push(("eta", AttrKind::Expr));
            }
            spec.push(("in", AttrKind::PortList { allow_vacuum: true }));
            spec.push(("out", AttrKind::PortList { allow_vacuum: false }));
            spec
        };
        match keyword {
            "bs" => {
                let mut v = self.attributes(&two_port(true))?.into_iter();
                Ok(ElementSpec::Bs {
                    eta: take_expr(v.next()),
                    inputs: take_ports(v.next()),
                    outputs: take_ports(v.next()).map(|p| p.expect("out ports are never vacuum")),
                })
            }
            "pbs" => {
                let mut v = self.attributes(&two_port(false))?.into_iter();
                Ok(ElementSpec::Pbs {
                    inputs: take_ports(v.next()),
                    outputs: take_ports(v.next()).map(|p| p.expect("out ports are never vacuum")),
                })
            }
            "pr" => {
                let mut v = self
                    .attributes(&[("theta", AttrKind::Expr), ("path", AttrKind::Path)])?
                    .into_iter();
                Ok(ElementSpec::Pr {
                    theta: take_expr(v.next()),
                    path: take_path(v.next()),
                })
            }
            "hwp" => {
                let mut v = self
                    .attributes(&[("delta", AttrKind::Expr), ("path", AttrKind::Path)])?
                    .into_iter();
                Ok(ElementSpec::Hwp {
                    delta: take_expr(v.next()),
                    path: take_path(v.next()),
                })
            }
            "basis" => {
                self.require_ws()?;
                let start = self.pos;
                let target = match self.word() {
                    Some("RL") => BasisTarget::RL,
                    Some("DIAG") => BasisTarget::Diag,
                    _ => {
                        self.pos = start;
                        return Err(self.error(&["RL", "DIAG"]));
                    }
                };
                let mut v = self.attributes(&[("path", AttrKind::Path)])?.into_iter();
                Ok(ElementSpec::Basis {
                    target,
                    path: take_path(v.next()),
                })
            }
            _ => unreachable!("statement keywords are dispatched above"),
        }
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(self.error(&["shallower expression nesting"]))
        } else {
            Ok(())
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.descend()?;
        let mut lhs = self.term()?;
        loop {
            let save = self.pos;
            self.skip_ws();
            if self.eat('+') {
                self.skip_ws();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                self.skip_ws();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                self.pos = save;
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let save = self.pos;
            self.skip_ws();
            if self.eat('*') {
                self.skip_ws();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                self.skip_ws();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                self.pos = save;
                break;
            }
        }
        Ok(lhs)
    }

    // unary := '-' unary | primary
    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            self.descend()?;
            self.skip_ws();
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                self.skip_ws();
                self.expect(')', "`)`")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => Ok(Expr::Num(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.identifier().unwrap_or_default();
                if name == "pi" {
                    return Ok(Expr::Pi);
                }
                if let Some(f) = Func::from_name(name) {
                    self.skip_ws();
                    if !self.eat('(') {
                        return Err(self.error(&["`(`"]));
                    }
                    self.skip_ws();
                    let arg = self.expr()?;
                    self.skip_ws();
                    self.expect(')', "`)`")?;
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                Ok(Expr::Param(name.to_string()))
            }
            _ => Err(self.error(&["number", "parameter", "pi", "function call", "`(`", "`-`"])),
        }
    }
}

pub(crate) fn is_reserved(name: &str) -> bool {
    name == "pi" || Func::from_name(name).is_some()
}

fn take_expr(v: Option<AttrValue>) -> Expr {
    match v {
        Some(AttrValue::Expr(e)) => e,
        _ => unreachable!("attribute kinds are fixed by the attribute table"),
    }
}

fn take_path(v: Option<AttrValue>) -> PathLabel {
    match v {
        Some(AttrValue::Path(p)) => p,
        _ => unreachable!("attribute kinds are fixed by the attribute table"),
    }
}

fn take_ports(v: Option<AttrValue>) -> [Option<PathLabel>; 2] {
    match v {
        Some(AttrValue::Ports(p)) => p,
        _ => unreachable!("attribute kinds are fixed by the attribute table"),
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syntax_at(text: &str) -> (usize, usize) {
        match parse(text) {
            Err(e) => e.position(),
            Ok(c) => panic!("expected error, parsed {c:?}"),
        }
    }

    #[test]
    fn empty_input_is_empty_circuit() {
        assert_eq!(parse("").unwrap(), Circuit::default());
        assert_eq!(parse("# only a comment\n\n   \r\n").unwrap(), Circuit::default());
    }

    #[test]
    fn full_statement_set() {
        let text = "paths 1, 2,3\r\nparam alpha = 1.5\nparam t\n\
                    source photon path=1 h=sin(alpha) v=cos(alpha)  # input\n\
                    source coherent path=2 alpha=alpha*sqrt(1 - t) pol=-45\n\
                    source vacuum path=3\n\
                    bs eta=1-t in=1,- out=1,4\n\
                    pbs out=5,6 in=2,3\n\
                    pr theta=pi/2 path=4\nhwp delta=-pi/4 path=5\nbasis RL path=6\n";
        let c = parse(text).unwrap();
        assert_eq!(c.paths.len(), 3);
        assert_eq!(c.params[0].default, Some(1.5));
        assert_eq!(c.params[1].default, None);
        assert_eq!(c.sources().count(), 3);
        assert_eq!(c.elements().count(), 5);
        let (bs, line) = c.elements().next().unwrap();
        assert_eq!(line, 7);
        match bs {
            ElementSpec::Bs { eta, inputs, outputs } => {
                assert_eq!(*eta, Expr::Sub(Box::new(Expr::Num(1.0)), Box::new(Expr::param("t"))));
                assert_eq!(inputs[1], None);
                assert_eq!(outputs[1].as_str(), "4");
            }
            other => panic!("unexpected {other:?}"),
        }
        let (src, _) = c.sources().nth(1).unwrap();
        assert!(matches!(
            src,
            Source::Coherent {
                pol: SourcePol::Minus45,
                ..
            }
        ));
    }

    #[test]
    fn precedence_and_unary_minus() {
        let e = parse_expr("-a*b + c/d - -e").unwrap();
        let a = Expr::param("a");
        let expected = Expr::Sub(
            Box::new(Expr::Add(
                Box::new(Expr::Mul(Box::new(Expr::Neg(Box::new(a))), Box::new(Expr::param("b")))),
                Box::new(Expr::Div(Box::new(Expr::param("c")), Box::new(Expr::param("d")))),
            )),
            Box::new(Expr::Neg(Box::new(Expr::param("e")))),
        );
        assert_eq!(e, expected);
        assert_eq!(parse_expr("1e-3").unwrap(), Expr::Num(1e-3));
        assert_eq!(parse_expr(".5").unwrap(), Expr::Num(0.5));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(syntax_at("frobnicate 1"), (1, 1));
        assert_eq!(syntax_at("paths 1\nbs eta= in=1,- out=1,2").0, 2);
        assert_eq!(syntax_at("paths 1\nbs eta=* in=1,- out=1,2"), (2, 8));
        assert_eq!(syntax_at("pr theta=1 path=1 path=2"), (1, 19));
        assert_eq!(syntax_at("pr theta=1"), (1, 11));
        assert_eq!(syntax_at("basis XY path=1"), (1, 7));
        assert_eq!(syntax_at("pr theta=cos 1 path=1"), (1, 14));
        assert_eq!(syntax_at("pr theta=1e999 path=1"), (1, 10));
        match parse("hwp delta=(1 path=1").unwrap_err() {
            ParseError::Syntax { expected, .. } => assert_eq!(expected, ["`)`"]),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            parse("paths 1,2\npaths 2").unwrap_err(),
            ParseError::DuplicatePath { line: 2, .. }
        ));
        assert!(matches!(
            parse("param a\nparam a = 1").unwrap_err(),
            ParseError::DuplicateParam { line: 2, .. }
        ));
    }

    #[test]
    fn reserved_param_names_rejected() {
        assert!(parse("param pi").is_err());
        assert!(parse("param cis = 1").is_err());
    }

    #[test]
    fn out_of_range_eta_still_parses() {
        assert!(parse("paths 1,2\nbs eta=1.2 in=1,- out=1,2").is_ok());
    }

    #[test]
    fn deep_nesting_is_a_diagnostic() {
        let deep = format!("pr theta={}1{} path=1", "(".repeat(5000), ")".repeat(5000));
        assert!(parse(&deep).is_err());
        let negs = format!("pr theta={}1 path=1", "-".repeat(5000));
        assert!(parse(&negs).is_err());
    }

    #[test]
    fn invalid_utf8_reports_position() {
        let bytes = b"paths 1\nbs \xff";
        assert_eq!(
            parse_bytes(bytes).unwrap_err(),
            ParseError::InvalidUtf8 { line: 2, column: 4 }
        );
    }
}
