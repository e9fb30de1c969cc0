//! Plain-text documents describing a system, in one of two forms.
//!
//! The family form gives the six parameters of the canonical two-vertex
//! family:
//!
//! ```text
//! # the worked example
//! family: { a: 1/4, g_u: 5/12, b: 1/3, c: 1/7, g_v: 11/21, d: 1/3 }
//! ```
//!
//! The graph form lists vertices and edges explicitly:
//!
//! ```text
//! vertices: 1
//! edges: [
//!   { id: 1, from: 0, to: 0, ratio: 1/3, translation: 0 },
//!   { id: 2, from: 0, to: 0, ratio: 1/3, translation: 2/3 },
//! ]
//! ```
//!
//! Numbers are exact rationals (`p/q` or integers); decimal literals are
//! rejected so no floating point enters the input path. `u` and `v` are
//! accepted as aliases for vertices 0 and 1. `#` starts a comment.
//! Parsing checks syntax only; [`IfsDocument::build`] runs the structural
//! validation and returns the system.

use crate::ifs_graph::{Edge, GraphIfs, IfsError, Similarity};
use crate::rational::{format_rational, parse_rational, ParseRationalError, Rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DocumentError {
    #[error("line {line}: unexpected character {found:?}")]
    UnexpectedCharacter { line: usize, found: char },
    #[error("line {line}: expected {expected}, found {found}")]
    UnexpectedToken { line: usize, expected: &'static str, found: String },
    #[error("unexpected end of document, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("{context} is missing the key `{key}`")]
    MissingKey { context: &'static str, key: &'static str },
    #[error("line {line}: {source}")]
    BadNumber {
        line: usize,
        #[source]
        source: ParseRationalError,
    },
    #[error("line {line}: `{found}` is not a vertex (an index, `u`, or `v`)")]
    BadVertex { line: usize, found: String },
    #[error("line {line}: `{found}` is not a non-negative integer")]
    NotAnInteger { line: usize, found: String },
    #[error("a document holds either a family or a graph, not both")]
    MixedForms,
    #[error("the document describes no system")]
    Empty,
}

/// A parsed input document; syntax-checked but not yet validated as a
/// system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IfsDocument {
    Family {
        a: Rational,
        g_u: Rational,
        b: Rational,
        c: Rational,
        g_v: Rational,
        d: Rational,
    },
    Graph { vertices: usize, edges: Vec<Edge> },
}

impl IfsDocument {
    pub fn parse(text: &str) -> Result<IfsDocument, DocumentError> {
        Parser::new(lex(text)?).document()
    }

    /// Runs the structural validation and builds the system.
    pub fn build(&self) -> Result<GraphIfs, IfsError> {
        match self {
            IfsDocument::Family { a, g_u, b, c, g_v, d } => crate::ifs_graph::canonical_two_vertex(
                a.clone(),
                g_u.clone(),
                b.clone(),
                c.clone(),
                g_v.clone(),
                d.clone(),
            ),
            IfsDocument::Graph { vertices, edges } => GraphIfs::new(*vertices, edges.clone()),
        }
    }

    /// The document describing an existing system; systems of the canonical
    /// two-vertex shape come back in family form.
    pub fn from_ifs(ifs: &GraphIfs) -> IfsDocument {
        match crate::ifs_graph::CanonicalFamily::from_ifs(ifs) {
            Some(f) => IfsDocument::Family {
                a: f.a,
                g_u: f.g_u,
                b: f.b,
                c: f.c,
                g_v: f.g_v,
                d: f.d,
            },
            None => IfsDocument::Graph {
                vertices: ifs.vertex_count(),
                edges: ifs.edges().to_vec(),
            },
        }
    }

    /// Canonical emission; re-parsing yields an equal document.
    pub fn emit(&self) -> String {
        match self {
            IfsDocument::Family { a, g_u, b, c, g_v, d } => {
                format!(
                    "family: {{\n  a: {},\n  g_u: {},\n  b: {},\n  c: {},\n  g_v: {},\n  d: {},\n}}\n",
                    format_rational(a),
                    format_rational(g_u),
                    format_rational(b),
                    format_rational(c),
                    format_rational(g_v),
                    format_rational(d),
                )
            }
            IfsDocument::Graph { vertices, edges } => {
                let mut out = format!("vertices: {vertices}\nedges: [\n");
                for e in edges {
                    out.push_str(&format!(
                        "  {{ id: {}, from: {}, to: {}, ratio: {}, translation: {} }},\n",
                        e.id,
                        e.from,
                        e.to,
                        format_rational(&e.map.ratio),
                        format_rational(&e.map.translation),
                    ));
                }
                out.push_str("]\n");
                out
            }
        }
    }
}

impl std::fmt::Display for IfsDocument {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.emit())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Colon,
    Comma,
    OpenBrace,
    CloseBrace,
    OpenBracket,
    CloseBracket,
    Word(String),
    Number(String),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Colon => "`:`".into(),
            Token::Comma => "`,`".into(),
            Token::OpenBrace => "`{`".into(),
            Token::CloseBrace => "`}`".into(),
            Token::OpenBracket => "`[`".into(),
            Token::CloseBracket => "`]`".into(),
            Token::Word(w) => format!("`{w}`"),
            Token::Number(n) => format!("`{n}`"),
        }
    }
}

struct Lexed {
    token: Token,
    line: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, DocumentError> {
    let mut tokens = Vec::new();
    let mut line = 1;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        break;
                    }
                }
            }
            ':' | ',' | '{' | '}' | '[' | ']' => {
                chars.next();
                let token = match ch {
                    ':' => Token::Colon,
                    ',' => Token::Comma,
                    '{' => Token::OpenBrace,
                    '}' => Token::CloseBrace,
                    '[' => Token::OpenBracket,
                    _ => Token::CloseBracket,
                };
                tokens.push(Lexed { token, line });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Lexed { token: Token::Word(word), line });
            }
            // Decimal points are carried into the literal so that number
            // parsing can reject them with a pointed message.
            c if c.is_ascii_digit() || c == '-' => {
                let mut number = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() || c == '/' || c == '.' || c == '-' {
                        number.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Lexed { token: Token::Number(number), line });
            }
            other => return Err(DocumentError::UnexpectedCharacter { line, found: other }),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn new(tokens: Vec<Lexed>) -> Parser {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&Lexed> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self, expected: &'static str) -> Result<&Lexed, DocumentError> {
        let lexed = self.tokens.get(self.pos).ok_or(DocumentError::UnexpectedEnd { expected })?;
        self.pos += 1;
        Ok(lexed)
    }

    fn expect(&mut self, token: Token, expected: &'static str) -> Result<(), DocumentError> {
        let found = self.next(expected)?;
        if found.token == token {
            Ok(())
        } else {
            Err(DocumentError::UnexpectedToken {
                line: found.line,
                expected,
                found: found.token.describe(),
            })
        }
    }

    fn document(mut self) -> Result<IfsDocument, DocumentError> {
        let mut family: Option<Vec<(&'static str, Rational)>> = None;
        let mut vertices: Option<usize> = None;
        let mut edges: Option<Vec<Edge>> = None;
        while let Some(lexed) = self.peek() {
            let line = lexed.line;
            let word = match &lexed.token {
                Token::Word(w) => w.clone(),
                other => {
                    return Err(DocumentError::UnexpectedToken {
                        line,
                        expected: "`family`, `vertices`, or `edges`",
                        found: other.describe(),
                    })
                }
            };
            self.pos += 1;
            self.expect(Token::Colon, "`:`")?;
            match word.as_str() {
                "family" => {
                    if family.is_some() {
                        return Err(DocumentError::DuplicateKey { line, key: word });
                    }
                    family = Some(self.family_fields()?);
                }
                "vertices" => {
                    if vertices.is_some() {
                        return Err(DocumentError::DuplicateKey { line, key: word });
                    }
                    vertices = Some(self.integer("a vertex count")?);
                }
                "edges" => {
                    if edges.is_some() {
                        return Err(DocumentError::DuplicateKey { line, key: word });
                    }
                    edges = Some(self.edge_list()?);
                }
                _ => return Err(DocumentError::UnknownKey { line, key: word }),
            }
        }
        match (family, vertices, edges) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => Err(DocumentError::MixedForms),
            (Some(fields), None, None) => {
                let get = |key: &str| {
                    fields
                        .iter()
                        .find(|(k, _)| *k == key)
                        .map(|(_, v)| v.clone())
                        .expect("all six keys checked present")
                };
                Ok(IfsDocument::Family {
                    a: get("a"),
                    g_u: get("g_u"),
                    b: get("b"),
                    c: get("c"),
                    g_v: get("g_v"),
                    d: get("d"),
                })
            }
            (None, Some(vertices), Some(edges)) => Ok(IfsDocument::Graph { vertices, edges }),
            (None, Some(_), None) => {
                Err(DocumentError::MissingKey { context: "the graph form", key: "edges" })
            }
            (None, None, Some(_)) => {
                Err(DocumentError::MissingKey { context: "the graph form", key: "vertices" })
            }
            (None, None, None) => Err(DocumentError::Empty),
        }
    }

    /// `{ a: r, g_u: r, b: r, c: r, g_v: r, d: r }` in any order.
    fn family_fields(&mut self) -> Result<Vec<(&'static str, Rational)>, DocumentError> {
        const KEYS: [&str; 6] = ["a", "g_u", "b", "c", "g_v", "d"];
        let mut fields: Vec<(&'static str, Rational)> = Vec::new();
        self.expect(Token::OpenBrace, "`{`")?;
        loop {
            let lexed = self.next("a parameter name or `}`")?;
            let line = lexed.line;
            match &lexed.token {
                Token::CloseBrace => break,
                Token::Word(w) => {
                    let Some(&key) = KEYS.iter().find(|k| *k == w) else {
                        return Err(DocumentError::UnknownKey { line, key: w.clone() });
                    };
                    if fields.iter().any(|(k, _)| *k == key) {
                        return Err(DocumentError::DuplicateKey { line, key: key.into() });
                    }
                    self.expect(Token::Colon, "`:`")?;
                    let value = self.rational("a rational parameter value")?;
                    fields.push((key, value));
                    self.comma_or_close(Token::CloseBrace, "`,` or `}`")?;
                }
                other => {
                    return Err(DocumentError::UnexpectedToken {
                        line,
                        expected: "a parameter name or `}`",
                        found: other.describe(),
                    })
                }
            }
        }
        for key in KEYS {
            if !fields.iter().any(|(k, _)| *k == key) {
                return Err(DocumentError::MissingKey { context: "the family form", key });
            }
        }
        Ok(fields)
    }

    fn edge_list(&mut self) -> Result<Vec<Edge>, DocumentError> {
        let mut edges = Vec::new();
        self.expect(Token::OpenBracket, "`[`")?;
        loop {
            let lexed = self.next("an edge record or `]`")?;
            match &lexed.token {
                Token::CloseBracket => break,
                Token::OpenBrace => {
                    edges.push(self.edge_record()?);
                    self.comma_or_close(Token::CloseBracket, "`,` or `]`")?;
                }
                other => {
                    return Err(DocumentError::UnexpectedToken {
                        line: lexed.line,
                        expected: "an edge record or `]`",
                        found: other.describe(),
                    })
                }
            }
        }
        Ok(edges)
    }

    /// Fields after the opening brace: id, from, to, ratio, translation.
    fn edge_record(&mut self) -> Result<Edge, DocumentError> {
        let mut id: Option<u32> = None;
        let mut from: Option<usize> = None;
        let mut to: Option<usize> = None;
        let mut ratio: Option<Rational> = None;
        let mut translation: Option<Rational> = None;
        loop {
            let lexed = self.next("an edge field or `}`")?;
            let line = lexed.line;
            match &lexed.token {
                Token::CloseBrace => break,
                Token::Word(w) => {
                    let key = w.clone();
                    self.expect(Token::Colon, "`:`")?;
                    match key.as_str() {
                        "id" if id.is_none() => {
                            let value = self.integer("an edge id")?;
                            id = Some(u32::try_from(value).map_err(|_| {
                                DocumentError::NotAnInteger { line, found: value.to_string() }
                            })?);
                        }
                        "from" if from.is_none() => from = Some(self.vertex()?),
                        "to" if to.is_none() => to = Some(self.vertex()?),
                        "ratio" if ratio.is_none() => {
                            ratio = Some(self.rational("a rational ratio")?)
                        }
                        "translation" if translation.is_none() => {
                            translation = Some(self.rational("a rational translation")?)
                        }
                        "id" | "from" | "to" | "ratio" | "translation" => {
                            return Err(DocumentError::DuplicateKey { line, key })
                        }
                        _ => return Err(DocumentError::UnknownKey { line, key }),
                    }
                    self.comma_or_close(Token::CloseBrace, "`,` or `}`")?;
                }
                other => {
                    return Err(DocumentError::UnexpectedToken {
                        line,
                        expected: "an edge field or `}`",
                        found: other.describe(),
                    })
                }
            }
        }
        let context = "an edge record";
        let id = id.ok_or(DocumentError::MissingKey { context, key: "id" })?;
        let from = from.ok_or(DocumentError::MissingKey { context, key: "from" })?;
        let to = to.ok_or(DocumentError::MissingKey { context, key: "to" })?;
        let ratio = ratio.ok_or(DocumentError::MissingKey { context, key: "ratio" })?;
        let translation =
            translation.ok_or(DocumentError::MissingKey { context, key: "translation" })?;
        Ok(Edge { id, from, to, map: Similarity::new(ratio, translation) })
    }

    /// Consumes a separating comma; a closing delimiter ends the list and
    /// is pushed back for the caller.
    fn comma_or_close(&mut self, close: Token, expected: &'static str) -> Result<(), DocumentError> {
        let lexed = self.next(expected)?;
        if lexed.token == Token::Comma {
            Ok(())
        } else if lexed.token == close {
            self.pos -= 1;
            Ok(())
        } else {
            Err(DocumentError::UnexpectedToken {
                line: lexed.line,
                expected,
                found: lexed.token.describe(),
            })
        }
    }

    fn rational(&mut self, expected: &'static str) -> Result<Rational, DocumentError> {
        let lexed = self.next(expected)?;
        match &lexed.token {
            Token::Number(text) => parse_rational(text)
                .map_err(|source| DocumentError::BadNumber { line: lexed.line, source }),
            other => Err(DocumentError::UnexpectedToken {
                line: lexed.line,
                expected,
                found: other.describe(),
            }),
        }
    }

    fn integer(&mut self, expected: &'static str) -> Result<usize, DocumentError> {
        let lexed = self.next(expected)?;
        match &lexed.token {
            Token::Number(text) => text.parse::<usize>().map_err(|_| {
                DocumentError::NotAnInteger { line: lexed.line, found: text.clone() }
            }),
            other => Err(DocumentError::UnexpectedToken {
                line: lexed.line,
                expected,
                found: other.describe(),
            }),
        }
    }

    /// A vertex index, or the aliases `u` (0) and `v` (1).
    fn vertex(&mut self) -> Result<usize, DocumentError> {
        let lexed = self.next("a vertex")?;
        match &lexed.token {
            Token::Number(text) => text.parse::<usize>().map_err(|_| {
                DocumentError::BadVertex { line: lexed.line, found: text.clone() }
            }),
            Token::Word(w) if w == "u" => Ok(0),
            Token::Word(w) if w == "v" => Ok(1),
            other => Err(DocumentError::BadVertex {
                line: lexed.line,
                found: other.describe(),
            }),
        }
    }
}
