//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! imp   := or ( "->" imp )?
//! or    := and ( "|" and )*
//! and   := unary ( "&" unary )*
//! unary := "~" unary | modal unary | primary
//! modal := "[]" | "<>" | "<" k ">" | "L(" n/d ")" | "M(" n/d ")" | "[m]"
//! primary := "true" | "false" | atom | "(" imp ")"
//! ```
//!
//! `f -> g` is read as `~f | g`.

use thiserror::Error;

use super::formula::{Formula, Modality};
use crate::liftings::LambdaSignature;
use crate::num::{is_unit_interval, parse_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown modality {token:?} at position {position}")]
    UnknownModality { token: String, position: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    True,
    False,
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    Modal(Modality),
    Ident(String),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn error<T>(&self, position: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn tokens(mut self) -> Result<Vec<(usize, Token)>, ParseError> {
        let mut out = Vec::new();
        loop {
            let trimmed = self.rest().trim_start();
            self.pos = self.src.len() - trimmed.len();
            let start = self.pos;
            let Some(c) = trimmed.chars().next() else {
                return Ok(out);
            };
            let token = match c {
                '~' => self.advance(1, Token::Tilde),
                '&' => self.advance(1, Token::Amp),
                '|' => self.advance(1, Token::Bar),
                '(' => self.advance(1, Token::LParen),
                ')' => self.advance(1, Token::RParen),
                '-' if trimmed.starts_with("->") => self.advance(2, Token::Arrow),
                '[' if trimmed.starts_with("[]") => self.advance(2, Token::Modal(Modality::Box)),
                '[' if trimmed.starts_with("[m]") => {
                    self.advance(3, Token::Modal(Modality::NbhdBox))
                }
                '<' if trimmed.starts_with("<>") => {
                    self.advance(2, Token::Modal(Modality::Diamond))
                }
                '<' => {
                    let digits: String = trimmed[1..]
                        .chars()
                        .take_while(|c| c.is_ascii_digit())
                        .collect();
                    if digits.is_empty() || !trimmed[1 + digits.len()..].starts_with('>') {
                        return self.error(start, "expected <>, or <k> with k a natural number");
                    }
                    let k: u64 = match digits.parse() {
                        Ok(k) => k,
                        Err(_) => return self.error(start, "grade out of range"),
                    };
                    self.advance(digits.len() + 2, Token::Modal(Modality::DiamondK(k)))
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let ident: String = trimmed
                        .chars()
                        .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
                        .collect();
                    let after = &trimmed[ident.len()..];
                    if (ident == "L" || ident == "M") && after.starts_with('(') {
                        let Some(close) = after.find(')') else {
                            return self.error(start, "unclosed probability index");
                        };
                        let index = &after[1..close];
                        let p: Rational = match parse_rational(index) {
                            Ok(p) => p,
                            Err(e) => return self.error(start + 2, e),
                        };
                        if !is_unit_interval(&p) {
                            return self.error(start + 2, "probability index outside [0,1]");
                        }
                        let m = if ident == "L" {
                            Modality::AtLeast(p)
                        } else {
                            Modality::MoreThan(p)
                        };
                        self.advance(ident.len() + close + 1, Token::Modal(m))
                    } else {
                        let token = match ident.as_str() {
                            "true" => Token::True,
                            "false" => Token::False,
                            _ => Token::Ident(ident.clone()),
                        };
                        self.advance(ident.len(), token)
                    }
                }
                other => return self.error(start, format!("unexpected character {other:?}")),
            };
            out.push((start, token));
        }
    }

    fn advance(&mut self, len: usize, token: Token) -> Token {
        self.pos += len;
        token
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    next: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.next).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.next).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.next).map(|(_, t)| t.clone());
        self.next += 1;
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.position(),
            message: message.into(),
        })
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Arrow) {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::or(Formula::neg(lhs), rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Bar) {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::Amp) {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::Tilde) => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Some(Token::Modal(_)) => {
                let Some(Token::Modal(m)) = self.bump() else {
                    unreachable!()
                };
                Ok(Formula::modal(m, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.bump() {
            Some(Token::True) => Ok(Formula::Top),
            Some(Token::False) => Ok(Formula::Bot),
            Some(Token::Ident(name)) => Ok(Formula::atom(name)),
            Some(Token::LParen) => {
                let inner = self.implication()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => {
                        self.next -= 1;
                        self.fail("expected ')'")
                    }
                }
            }
            Some(_) => {
                self.next -= 1;
                self.fail("expected a formula")
            }
            None => self.fail("unexpected end of input"),
        }
    }
}

/// Parses without checking modalities against a signature.
pub fn parse_unchecked(text: &str) -> Result<Formula, ParseError> {
    let tokens = Lexer { src: text, pos: 0 }.tokens()?;
    let mut parser = Parser {
        tokens,
        next: 0,
        end: text.len(),
    };
    let f = parser.implication()?;
    if parser.next < parser.tokens.len() {
        return parser.fail("trailing input");
    }
    Ok(f)
}

/// Parses and checks that every operator belongs to `sig`.
pub fn parse_formula(text: &str, sig: &LambdaSignature) -> Result<Formula, ParseError> {
    let tokens = Lexer { src: text, pos: 0 }.tokens()?;
    for (position, token) in &tokens {
        let m = match token {
            Token::Modal(m) => m.clone(),
            Token::Ident(name) => Modality::Atom(name.clone()),
            _ => continue,
        };
        if !sig.admits(&m) {
            let token = text[*position..]
                .split(|c: char| c.is_whitespace() || c == '&' || c == '|')
                .next()
                .unwrap_or_default()
                .to_string();
            return Err(ParseError::UnknownModality {
                token,
                position: *position,
            });
        }
    }
    parse_unchecked(text)
}
