//! Recursive-descent parser for the formula grammar.
//!
//! Precedence, tightest first: `~`, `&`, `|`, `->`, `<->`. The arrows
//! associate right, `&` and `|` left. `#` starts a comment running to the
//! end of the line.

use std::fmt;

use thiserror::Error;

use super::{Formula, Symbol};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: found {}, expected {}",
            self.line,
            self.col,
            self.found,
            self.expected.join(" or ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("identifier '{name}'"),
            Token::True => "'true'".into(),
            Token::False => "'false'".into(),
            Token::Not => "'~'".into(),
            Token::And => "'&'".into(),
            Token::Or => "'|'".into(),
            Token::Implies => "'->'".into(),
            Token::Iff => "'<->'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Lexer<'a> {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, found: String, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            found,
            expected,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Token, Pos)>, ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            let pos = Pos {
                line: self.line,
                col: self.col,
            };
            let token = match c {
                '~' => {
                    self.bump();
                    Token::Not
                }
                '&' => {
                    self.bump();
                    Token::And
                }
                '|' => {
                    self.bump();
                    Token::Or
                }
                '(' => {
                    self.bump();
                    Token::LParen
                }
                ')' => {
                    self.bump();
                    Token::RParen
                }
                '-' => {
                    self.bump();
                    match self.chars.peek() {
                        Some('>') => {
                            self.bump();
                            Token::Implies
                        }
                        other => {
                            let found = match other {
                                Some(c) => format!("'-{c}'"),
                                None => "end of input".into(),
                            };
                            return Err(self.error(found, vec!["'->'"]));
                        }
                    }
                }
                '<' => {
                    self.bump();
                    for want in ['-', '>'] {
                        if self.chars.peek() != Some(&want) {
                            return Err(self.error(format!("'{c}'"), vec!["'<->'"]));
                        }
                        self.bump();
                    }
                    Token::Iff
                }
                c if c.is_ascii_alphabetic() => {
                    let mut name = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            name.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    match name.as_str() {
                        "true" => Token::True,
                        "false" => Token::False,
                        _ => Token::Ident(name),
                    }
                }
                other => {
                    return Err(self.error(format!("'{other}'"), vec!["a formula token"]));
                }
            };
            out.push((token, pos));
        }
        Ok(out)
    }
}

const FORMULA_START: [&str; 5] = ["identifier", "'true'", "'false'", "'~'", "'('"];

struct Parser {
    tokens: Vec<(Token, Pos)>,
    index: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.index).map(|(t, _)| t.clone());
        self.index += 1;
        t
    }

    fn error_here(&self, expected: Vec<&'static str>) -> ParseError {
        match self.tokens.get(self.index) {
            Some((token, pos)) => ParseError {
                line: pos.line,
                col: pos.col,
                found: token.describe(),
                expected,
            },
            None => ParseError {
                line: self.end.line,
                col: self.end.col,
                found: "end of input".into(),
                expected,
            },
        }
    }

    fn parse_iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.parse_implies()?;
        if self.peek() == Some(&Token::Iff) {
            self.bump();
            let right = self.parse_iff()?;
            Ok(Formula::iff(left, right))
        } else {
            Ok(left)
        }
    }

    fn parse_implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.parse_or()?;
        if self.peek() == Some(&Token::Implies) {
            self.bump();
            let right = self.parse_implies()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.parse_and()?;
        while self.peek() == Some(&Token::Or) {
            self.bump();
            let right = self.parse_and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.parse_unary()?;
        while self.peek() == Some(&Token::And) {
            self.bump();
            let right = self.parse_unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Token::Not) {
            self.bump();
            let inner = self.parse_unary()?;
            return Ok(Formula::not(inner));
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::Ident(_)) => {
                let Some(Token::Ident(name)) = self.bump() else {
                    unreachable!()
                };
                // lexer only forms identifiers matching the symbol shape
                let symbol = Symbol::new(&name).expect("lexer produced a valid identifier");
                Ok(Formula::Var(symbol))
            }
            Some(Token::True) => {
                self.bump();
                Ok(Formula::True)
            }
            Some(Token::False) => {
                self.bump();
                Ok(Formula::False)
            }
            Some(Token::LParen) => {
                self.bump();
                let inner = self.parse_iff()?;
                if self.peek() == Some(&Token::RParen) {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(self.error_here(vec!["')'", "a binary connective"]))
                }
            }
            _ => Err(self.error_here(FORMULA_START.to_vec())),
        }
    }
}

/// Parses one formula. Empty input (after comments and whitespace) is an
/// error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let lexer = Lexer::new(text);
    let mut end = Pos { line: 1, col: 1 };
    for (i, line) in text.lines().enumerate() {
        end = Pos {
            line: i + 1,
            col: line.chars().count() + 1,
        };
    }
    let tokens = lexer.tokens()?;
    if tokens.is_empty() {
        return Err(ParseError {
            line: end.line,
            col: end.col,
            found: "empty input".into(),
            expected: FORMULA_START.to_vec(),
        });
    }
    let mut parser = Parser { tokens, index: 0, end };
    let formula = parser.parse_iff()?;
    if parser.index < parser.tokens.len() {
        return Err(parser.error_here(vec!["a binary connective", "end of input"]));
    }
    Ok(formula)
}
