//! Concrete syntax: a parser and printer for process terms, and ingestion of
//! line-based triple files into data terms.
//!
//! ```text
//! process := 'ex' VAR+ '.' process | choice
//! choice  := par ('+' par)*
//! par     := seq ('|' seq)*
//! seq     := atom (';' atom)*
//! atom    := '1' | literal | '(' process ')'
//! literal := tuple | '*' tuple | '#' tuple
//! tuple   := '[' (NAME | VAR)+ ']'
//! ```
//!
//! `VAR` is `?ident`; a name is an identifier or an `<iri>`. Binary
//! operators associate to the left. `//` starts a line comment. A binder
//! may also appear as an operand (`[a] | ex ?x. [?x]`) and then extends as
//! far right as possible.

use std::fmt;

use thiserror::Error;

use crate::terms::{is_identifier_char, Atom, Label, Name, Polarity, Process, Tuple, Variable};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct SourceSpan {
    pub byte_start: usize,
    pub byte_end: usize,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected ", self.span.line, self.span.column)?;
        match self.expected.as_slice() {
            [] => f.write_str("nothing")?,
            [one] => f.write_str(one)?,
            [init @ .., last] => write!(f, "{} or {}", init.join(", "), last)?,
        }
        write!(f, ", found {}", self.found)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Var(String),
    Iri(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Var(s) => format!("`?{s}`"),
            Tok::Iri(s) => format!("`<{s}>`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    line_start: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            line_start: 0,
        }
    }

    fn span_from(&self, start: usize, line: usize, line_start: usize) -> SourceSpan {
        SourceSpan {
            byte_start: start,
            byte_end: self.pos,
            line,
            column: self.src[line_start..start].chars().count() + 1,
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.line_start = self.pos;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.src[self.pos..].starts_with("//") => {
                    while let Some(c) = self.peek_char() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, SourceSpan), ParseError> {
        self.skip_trivia();
        let (start, line, line_start) = (self.pos, self.line, self.line_start);
        let Some(c) = self.bump() else {
            return Ok((Tok::Eof, self.span_from(start, line, line_start)));
        };
        let tok = match c {
            '[' | ']' | '(' | ')' | ';' | '|' | '+' | '*' | '#' | '.' => Tok::Sym(c),
            '?' => {
                let ident = self.ident();
                if ident.is_empty() {
                    return Err(ParseError {
                        span: self.span_from(start, line, line_start),
                        expected: vec!["variable name after `?`".into()],
                        found: self.peek_char().map_or("end of input".into(), |c| format!("`{c}`")),
                    });
                }
                Tok::Var(ident)
            }
            '<' => {
                let body_start = self.pos;
                loop {
                    match self.peek_char() {
                        Some('>') => break,
                        Some(c) if !c.is_whitespace() && c != '<' => {
                            self.bump();
                        }
                        other => {
                            return Err(ParseError {
                                span: self.span_from(start, line, line_start),
                                expected: vec!["`>` closing the IRI".into()],
                                found: other.map_or("end of input".into(), |c| format!("{c:?}")),
                            })
                        }
                    }
                }
                let body = self.src[body_start..self.pos].to_string();
                self.bump();
                if body.is_empty() {
                    return Err(ParseError {
                        span: self.span_from(start, line, line_start),
                        expected: vec!["nonempty IRI".into()],
                        found: "`<>`".into(),
                    });
                }
                Tok::Iri(body)
            }
            c if is_identifier_char(c) => {
                let mut ident = c.to_string();
                ident.push_str(&self.ident());
                Tok::Ident(ident)
            }
            other => {
                return Err(ParseError {
                    span: self.span_from(start, line, line_start),
                    expected: vec!["a token".into()],
                    found: format!("{other:?}"),
                })
            }
        };
        Ok((tok, self.span_from(start, line, line_start)))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek_char(), Some(c) if is_identifier_char(c)) {
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    span: SourceSpan,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let (tok, span) = lexer.next()?;
        Ok(Parser { lexer, tok, span })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let (tok, span) = self.lexer.next()?;
        self.tok = tok;
        self.span = span;
        Ok(())
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            span: self.span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.tok.describe(),
        }
    }

    fn eat(&mut self, c: char) -> Result<bool, ParseError> {
        if self.tok == Tok::Sym(c) {
            self.advance()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn process(&mut self) -> Result<Process, ParseError> {
        if self.tok == Tok::Ident("ex".into()) {
            self.advance()?;
            let mut vars = Vec::new();
            while let Tok::Var(x) = &self.tok {
                vars.push(Variable::new(x));
                self.advance()?;
            }
            if vars.is_empty() {
                return Err(self.error(&["variable"]));
            }
            if !self.eat('.')? {
                return Err(self.error(&["variable", "`.`"]));
            }
            let body = self.process()?;
            return Ok(vars.into_iter().rev().fold(body, |b, x| Process::exists(x, b)));
        }
        self.choice()
    }

    fn choice(&mut self) -> Result<Process, ParseError> {
        let mut acc = self.par()?;
        while self.eat('+')? {
            acc = Process::choice(acc, self.par()?);
        }
        Ok(acc)
    }

    fn par(&mut self) -> Result<Process, ParseError> {
        let mut acc = self.seq()?;
        while self.eat('|')? {
            acc = Process::par(acc, self.seq()?);
        }
        Ok(acc)
    }

    fn seq(&mut self) -> Result<Process, ParseError> {
        let mut acc = self.atom()?;
        while self.eat(';')? {
            acc = Process::seq(acc, self.atom()?);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Process, ParseError> {
        const EXPECTED: [&str; 6] = ["`1`", "`[`", "`*`", "`#`", "`(`", "`ex`"];
        match &self.tok {
            // A binder after an operator scopes to the end, as at the start.
            Tok::Ident(s) if s == "ex" => self.process(),
            Tok::Ident(s) if s == "1" => {
                self.advance()?;
                Ok(Process::Unit)
            }
            Tok::Sym('(') => {
                self.advance()?;
                let inner = self.process()?;
                if !self.eat(')')? {
                    return Err(self.error(&["`)`", "`;`", "`|`", "`+`"]));
                }
                Ok(inner)
            }
            Tok::Sym('[') => Ok(Process::Literal(Label::consume(self.tuple()?))),
            Tok::Sym('*') => {
                self.advance()?;
                Ok(Process::Literal(Label::stored(self.tuple()?)))
            }
            Tok::Sym('#') => {
                self.advance()?;
                Ok(Process::Literal(Label::artefact(self.tuple()?)))
            }
            _ => Err(self.error(&EXPECTED)),
        }
    }

    fn tuple(&mut self) -> Result<Tuple, ParseError> {
        if !self.eat('[')? {
            return Err(self.error(&["`[`"]));
        }
        let mut atoms = Vec::new();
        loop {
            match &self.tok {
                Tok::Ident(s) => atoms.push(Atom::Name(Name::new(s))),
                Tok::Iri(s) => atoms.push(Atom::Name(Name::new(s))),
                Tok::Var(x) => atoms.push(Atom::Var(Variable::new(x))),
                Tok::Sym(']') if !atoms.is_empty() => break,
                _ if atoms.is_empty() => return Err(self.error(&["name", "variable"])),
                _ => return Err(self.error(&["name", "variable", "`]`"])),
            }
            self.advance()?;
        }
        self.advance()?;
        Ok(Tuple::new(atoms))
    }
}

/// Parses a process term.
pub fn parse_process(text: &str) -> Result<Process, ParseError> {
    let mut parser = Parser::new(text)?;
    let p = parser.process()?;
    if parser.tok != Tok::Eof {
        return Err(parser.error(&["`;`", "`|`", "`+`", "end of input"]));
    }
    Ok(p)
}

const PREC_TOP: u8 = 0;
const PREC_CHOICE: u8 = 1;
const PREC_PAR: u8 = 2;
const PREC_SEQ: u8 = 3;
const PREC_ATOM: u8 = 4;

/// Prints a term with the fewest parentheses that still parse back to the
/// same tree.
pub fn print_process(p: &Process) -> String {
    let mut out = String::new();
    write_process(p, PREC_TOP, &mut out);
    out
}

fn write_process(p: &Process, ctx: u8, out: &mut String) {
    let binary = |a: &Process, b: &Process, prec: u8, op: &str, out: &mut String| {
        let parens = ctx > prec;
        if parens {
            out.push('(');
        }
        write_process(a, prec, out);
        out.push_str(op);
        write_process(b, prec + 1, out);
        if parens {
            out.push(')');
        }
    };
    match p {
        Process::Unit => out.push('1'),
        Process::Literal(l) => out.push_str(&l.to_string()),
        Process::Choice(a, b) => binary(a, b, PREC_CHOICE, " + ", out),
        Process::Par(a, b) => binary(a, b, PREC_PAR, " | ", out),
        Process::Seq(a, b) => binary(a, b, PREC_SEQ, " ; ", out),
        Process::Exists(..) => {
            let parens = ctx > PREC_TOP;
            if parens {
                out.push('(');
            }
            out.push_str("ex");
            let mut body = p;
            while let Process::Exists(x, inner) = body {
                out.push(' ');
                out.push_str(&x.to_string());
                body = inner;
            }
            out.push_str(". ");
            write_process(body, PREC_TOP, out);
            if parens {
                out.push(')');
            }
        }
    }
}

// Silences the unused-constant lint while keeping the table complete.
const _: u8 = PREC_ATOM;

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_process(self))
    }
}

/// Reads a triple file: one `subject property object .` per line, `#`
/// comments, blank lines ignored. Produces a right-nested parallel
/// composition of stored triples in line order, or `1` for no triples.
pub fn parse_triples(text: &str) -> Result<Process, ParseError> {
    let mut triples = Vec::new();
    let mut offset = 0;
    for (index, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let tokens = triple_tokens(line, offset, index + 1)?;
        offset += raw.len() + 1;
        if tokens.is_empty() {
            continue;
        }
        let line_span = |start: usize, end: usize| SourceSpan {
            byte_start: start,
            byte_end: end,
            line: index + 1,
            column: line[..start - (offset - raw.len() - 1)].chars().count() + 1,
        };
        let (last_text, last_start, last_end) = tokens.last().cloned().expect("nonempty");
        if last_text != "." {
            return Err(ParseError {
                span: line_span(last_start, last_end),
                expected: vec!["`.` ending the triple".into()],
                found: format!("`{last_text}`"),
            });
        }
        if tokens.len() != 4 {
            let (text, start, end) = tokens[tokens.len().min(4) - 1].clone();
            return Err(ParseError {
                span: line_span(start, end),
                expected: vec!["exactly three terms before `.`".into()],
                found: format!("{} terms (at `{}`)", tokens.len() - 1, text),
            });
        }
        let mut atoms = Vec::with_capacity(3);
        for (text, start, end) in &tokens[..3] {
            let name = if let Some(iri) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
                (!iri.is_empty() && !iri.contains(['<', '>'])).then(|| Name::new(iri))
            } else {
                crate::terms::is_identifier(text).then(|| Name::new(text))
            };
            match name {
                Some(n) => atoms.push(Atom::Name(n)),
                None => {
                    return Err(ParseError {
                        span: line_span(*start, *end),
                        expected: vec!["identifier or <iri>".into()],
                        found: format!("`{text}`"),
                    })
                }
            }
        }
        triples.push(Process::Literal(Label::new(Polarity::Stored, Tuple::new(atoms))));
    }
    Ok(match triples.into_iter().rev().reduce(|acc, t| Process::par(t, acc)) {
        Some(p) => p,
        None => Process::Unit,
    })
}

/// Whitespace-separated tokens of one line with absolute byte offsets; a
/// trailing `.` glued to the last term is split off.
fn triple_tokens(line: &str, offset: usize, line_no: usize) -> Result<Vec<(String, usize, usize)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '#' {
            break;
        }
        let start = i;
        let mut end = i;
        if c == '<' {
            let mut closed = false;
            for (j, d) in chars.by_ref() {
                end = j + d.len_utf8();
                if d == '>' && j > start {
                    closed = true;
                    break;
                }
            }
            if !closed {
                return Err(ParseError {
                    span: SourceSpan {
                        byte_start: offset + start,
                        byte_end: offset + end,
                        line: line_no,
                        column: line[..start].chars().count() + 1,
                    },
                    expected: vec!["`>` closing the IRI".into()],
                    found: "end of line".into(),
                });
            }
        } else {
            while let Some(&(j, d)) = chars.peek() {
                if d.is_whitespace() {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
        }
        let text = &line[start..end];
        if text.len() > 1 && text.ends_with('.') && !text.starts_with('<') {
            tokens.push((text[..text.len() - 1].to_string(), offset + start, offset + end - 1));
            tokens.push((".".to_string(), offset + end - 1, offset + end));
        } else {
            tokens.push((text.to_string(), offset + start, offset + end));
        }
    }
    Ok(tokens)
}
