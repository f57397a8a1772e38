//! Recursive-descent parser for univariate expressions.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          (right-associative)
//! primary := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
//! FUNC    := sin | cos | tan | exp | log | sqrt | abs | erf | gamma
//! ```
//!
//! The right operand of `^` must not depend on `x`.

use super::ast::{BinaryOp, ExprAst, UnaryFn};
use super::lexer::{Token, TokenKind};
use crate::error::{Error, Result};

pub fn parse(tokens: &[Token]) -> Result<ExprAst> {
    if tokens.last().map(|t| t.kind) != Some(TokenKind::End) {
        return Err(Error::Parse { position: 0, expected: "token stream terminated by end".into() });
    }
    let mut p = Parser { tokens, pos: 0 };
    let ast = p.expr()?;
    let tok = p.peek();
    if tok.kind != TokenKind::End {
        return Err(p.error("operator or end of input"));
    }
    Ok(ast)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &'a Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> &'a Token {
        let t = &self.tokens[self.pos];
        if t.kind != TokenKind::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse { position: self.peek().position, expected: expected.to_string() }
    }

    fn eat(&mut self, kind: TokenKind, text: &str) -> bool {
        if self.peek().is(kind, text) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(TokenKind::Operator, "+") {
                BinaryOp::Add
            } else if self.eat(TokenKind::Operator, "-") {
                BinaryOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = ExprAst::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(TokenKind::Operator, "*") {
                BinaryOp::Mul
            } else if self.eat(TokenKind::Operator, "/") {
                BinaryOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = ExprAst::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<ExprAst> {
        if self.eat(TokenKind::Operator, "-") {
            let arg = self.unary()?;
            return Ok(ExprAst::unary(UnaryFn::Neg, arg));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst> {
        let base = self.primary()?;
        if self.peek().is(TokenKind::Operator, "^") {
            self.advance();
            let position = self.peek().position;
            let exponent = self.unary()?;
            if exponent.contains_variable() {
                return Err(Error::NonConstantExponent { position });
            }
            return Ok(ExprAst::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ExprAst> {
        let tok = self.peek();
        match tok.kind {
            TokenKind::Number => {
                let value: f64 = tok.text.parse().map_err(|_| self.error("number"))?;
                self.advance();
                Ok(ExprAst::Constant(value))
            }
            TokenKind::Identifier if tok.text == "x" => {
                self.advance();
                Ok(ExprAst::Variable)
            }
            TokenKind::Identifier => {
                let Some(func) = UnaryFn::from_name(&tok.text) else {
                    return Err(self.error("'x' or a known function name"));
                };
                self.advance();
                if !self.eat(TokenKind::Paren, "(") {
                    return Err(self.error("'('"));
                }
                let arg = self.expr()?;
                if !self.eat(TokenKind::Paren, ")") {
                    return Err(self.error("')'"));
                }
                Ok(ExprAst::unary(func, arg))
            }
            TokenKind::Paren if tok.text == "(" => {
                self.advance();
                let inner = self.expr()?;
                if !self.eat(TokenKind::Paren, ")") {
                    return Err(self.error("')'"));
                }
                Ok(inner)
            }
            _ => Err(self.error("number, 'x', function or '('")),
        }
    }
}
