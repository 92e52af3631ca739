//! Concrete syntax for LTLf formulas.
//!
//! Precedence, loosest first: `->` (right associative), `|`, `&`, the binary
//! temporal operators `U` and `R` (right associative), then the prefix
//! operators `!`, `X`, `WX`, `F`, `G`. The words `true`, `false`, `X`, `WX`,
//! `F`, `G`, `U` and `R` are reserved and cannot be used as atom names.

use super::formula::*;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Bang,
    Next,
    WeakNext,
    Eventually,
    Always,
    Until,
    Release,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    End,
}

const OPERAND_START: &[&str] = &["identifier", "true", "false", "(", "!", "X", "WX", "F", "G"];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'!' => Tok::Bang,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'-' if bytes.get(self.pos + 1) == Some(&b'>') => {
                self.pos += 2;
                return Ok((start, Tok::Arrow));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos + 1;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                let word = &self.src[self.pos..end];
                self.pos = end;
                let tok = match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => Tok::Next,
                    "WX" => Tok::WeakNext,
                    "F" => Tok::Eventually,
                    "G" => Tok::Always,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    _ => Tok::Ident(word.to_string()),
                };
                return Ok((start, tok));
            }
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    expected: vec!["a valid token"],
                })
            }
        };
        self.pos += 1;
        Ok((start, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    offset: usize,
    tok: Tok,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        let (offset, tok) = self.lexer.next_token()?;
        self.offset = offset;
        self.tok = tok;
        Ok(())
    }

    fn fail<T>(&self, expected: &[&'static str]) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset,
            expected: expected.to_vec(),
        })
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.tok == Tok::Arrow {
            self.bump()?;
            let rhs = self.implication()?;
            return Ok(implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.tok == Tok::Or {
            self.bump()?;
            lhs = or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.temporal()?;
        while self.tok == Tok::And {
            self.bump()?;
            lhs = and(lhs, self.temporal()?);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        match self.tok {
            Tok::Until => {
                self.bump()?;
                Ok(until(lhs, self.temporal()?))
            }
            Tok::Release => {
                self.bump()?;
                Ok(release(lhs, self.temporal()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        let wrap: fn(Formula) -> Formula = match self.tok {
            Tok::Bang => not,
            Tok::Next => next,
            Tok::WeakNext => weak_next,
            Tok::Eventually => eventually,
            Tok::Always => always,
            _ => return self.primary(),
        };
        self.bump()?;
        Ok(wrap(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula> {
        let f = match &self.tok {
            Tok::Ident(name) => atom(name),
            Tok::True => True,
            Tok::False => False,
            Tok::LParen => {
                self.bump()?;
                let inner = self.implication()?;
                if self.tok != Tok::RParen {
                    return self.fail(&[")", "&", "|", "->", "U", "R"]);
                }
                inner
            }
            _ => return self.fail(OPERAND_START),
        };
        self.bump()?;
        Ok(f)
    }
}

/// Parses a formula. Errors carry the byte offset of the offending token and
/// the set of tokens that would have been accepted there.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut parser = Parser {
        lexer: Lexer { src: text, pos: 0 },
        offset: 0,
        tok: Tok::End,
    };
    parser.bump()?;
    let f = parser.implication()?;
    if parser.tok != Tok::End {
        return parser.fail(&["end of input", "&", "|", "->", "U", "R"]);
    }
    Ok(f)
}
