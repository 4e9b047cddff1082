use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseError, ParseErrorKind};
use crate::algebra::{GaussianRational, PhasePolynomial, Rational};
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Guards against pathological inputs: parenthesis nesting and the total
/// degree an expression is allowed to reach while being built.
const MAX_DEPTH: usize = 64;
pub(super) const MAX_EXPONENT: u32 = 16;
pub(super) const MAX_DEGREE: u32 = 64;

pub(super) struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    env: Option<&'a BTreeMap<String, PhasePolynomial>>,
    end_line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    pub(super) fn new(
        src: &str,
        env: Option<&'a BTreeMap<String, PhasePolynomial>>,
    ) -> Result<Self, ParseError> {
        let tokens = tokenize(src)?;
        let (end_line, end_col) = tokens.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
        Ok(Parser {
            tokens,
            pos: 0,
            env,
            end_line,
            end_col,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                line: t.line,
                col: t.col,
                kind,
            },
            None => ParseError {
                line: self.end_line,
                col: self.end_col,
                kind,
            },
        }
    }

    pub(super) fn parse_full(&mut self) -> Result<PhasePolynomial, ParseError> {
        let poly = self.expression(0)?;
        if let Some(t) = self.peek() {
            return Err(ParseError {
                line: t.line,
                col: t.col,
                kind: ParseErrorKind::Syntax(format!("unexpected {}", describe(&t.kind))),
            });
        }
        Ok(poly)
    }

    /// expression := term (('+'|'-') term)*
    fn expression(&mut self, depth: usize) -> Result<PhasePolynomial, ParseError> {
        let mut acc = self.term(depth)?;
        while let Some(t) = self.peek() {
            match t.kind {
                TokenKind::Plus => {
                    self.next();
                    acc = &acc + &self.term(depth)?;
                }
                TokenKind::Minus => {
                    self.next();
                    acc = &acc - &self.term(depth)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// term := factor ('*' factor)*
    fn term(&mut self, depth: usize) -> Result<PhasePolynomial, ParseError> {
        let mut acc = self.factor(depth)?;
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Star)) {
            self.next();
            let rhs = self.factor(depth)?;
            self.check_degree(acc.total_degree() + rhs.total_degree())?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    /// factor := '-' factor | power
    fn factor(&mut self, depth: usize) -> Result<PhasePolynomial, ParseError> {
        if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Minus)) {
            self.next();
            return Ok(-self.factor(depth)?);
        }
        self.power(depth)
    }

    /// power := atom ['^' exponent]
    fn power(&mut self, depth: usize) -> Result<PhasePolynomial, ParseError> {
        let (base, base_is_kappa) = self.atom(depth)?;
        if !matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Caret)) {
            return Ok(base);
        }
        self.next();
        let exponent = self.exponent()?;
        if base_is_kappa {
            return Ok(PhasePolynomial::kappa(exponent));
        }
        if exponent < 0 {
            return Err(self.previous_error(ParseErrorKind::NegativeExponent));
        }
        let exponent = exponent as u32;
        self.check_degree(base.total_degree().saturating_mul(exponent))?;
        Ok(base.pow(exponent))
    }

    /// exponent := ['-'] integer, bounded by `MAX_EXPONENT`
    fn exponent(&mut self) -> Result<i32, ParseError> {
        let negative = if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Minus)) {
            self.next();
            true
        } else {
            false
        };
        let token = self
            .next()
            .ok_or_else(|| self.error_here(ParseErrorKind::UnexpectedEnd))?;
        let TokenKind::Number(value) = &token.kind else {
            return Err(ParseError {
                line: token.line,
                col: token.col,
                kind: ParseErrorKind::Syntax("expected integer exponent".into()),
            });
        };
        if !value.is_integer() {
            return Err(ParseError {
                line: token.line,
                col: token.col,
                kind: ParseErrorKind::NonIntegerExponent,
            });
        }
        let magnitude = value.to_integer().to_u32().filter(|&m| m <= MAX_EXPONENT);
        let Some(magnitude) = magnitude else {
            return Err(ParseError {
                line: token.line,
                col: token.col,
                kind: ParseErrorKind::ExponentTooLarge,
            });
        };
        Ok(if negative {
            -(magnitude as i32)
        } else {
            magnitude as i32
        })
    }

    /// atom := number | 'i' | 'k' | variable | name | '(' expression ')'
    ///
    /// Returns the polynomial plus a flag telling `power` that the base was
    /// the bare symbol `k`, whose exponent may be negative.
    fn atom(&mut self, depth: usize) -> Result<(PhasePolynomial, bool), ParseError> {
        let token = self
            .next()
            .ok_or_else(|| self.error_here(ParseErrorKind::UnexpectedEnd))?;
        match token.kind {
            TokenKind::Number(value) => Ok((
                PhasePolynomial::constant(GaussianRational::new(value, Rational::zero())),
                false,
            )),
            TokenKind::ImaginaryUnit => Ok((
                PhasePolynomial::constant(GaussianRational::new(Rational::zero(), Rational::one())),
                false,
            )),
            TokenKind::Kappa => Ok((PhasePolynomial::kappa(1), true)),
            TokenKind::Variable(v) => Ok((PhasePolynomial::variable(v), false)),
            TokenKind::Name(name) => {
                let poly = self.env.and_then(|env| env.get(&name)).cloned();
                match poly {
                    Some(p) => Ok((p, false)),
                    None => Err(ParseError {
                        line: token.line,
                        col: token.col,
                        kind: ParseErrorKind::UndefinedName(name),
                    }),
                }
            }
            TokenKind::LParen => {
                if depth + 1 > MAX_DEPTH {
                    return Err(ParseError {
                        line: token.line,
                        col: token.col,
                        kind: ParseErrorKind::TooDeep,
                    });
                }
                let inner = self.expression(depth + 1)?;
                match self.next() {
                    Some(Token {
                        kind: TokenKind::RParen,
                        ..
                    }) => Ok((inner, false)),
                    Some(t) => Err(ParseError {
                        line: t.line,
                        col: t.col,
                        kind: ParseErrorKind::Syntax(format!(
                            "expected ')', found {}",
                            describe(&t.kind)
                        )),
                    }),
                    None => Err(self.error_here(ParseErrorKind::Syntax(
                        "expected ')' before end of input".into(),
                    ))),
                }
            }
            other => Err(ParseError {
                line: token.line,
                col: token.col,
                kind: ParseErrorKind::Syntax(format!("unexpected {}", describe(&other))),
            }),
        }
    }

    fn previous_error(&self, kind: ParseErrorKind) -> ParseError {
        let t = &self.tokens[self.pos.saturating_sub(1)];
        ParseError {
            line: t.line,
            col: t.col,
            kind,
        }
    }

    fn check_degree(&self, degree: u32) -> Result<(), ParseError> {
        if degree > MAX_DEGREE {
            Err(self.error_here(ParseErrorKind::DegreeTooLarge))
        } else {
            Ok(())
        }
    }
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Number(n) => format!("number `{}`", n),
        TokenKind::ImaginaryUnit => "`i`".into(),
        TokenKind::Kappa => "`k`".into(),
        TokenKind::Variable(v) => format!("variable `{}`", v),
        TokenKind::Name(n) => format!("name `{}`", n),
        TokenKind::Plus => "`+`".into(),
        TokenKind::Minus => "`-`".into(),
        TokenKind::Star => "`*`".into(),
        TokenKind::Caret => "`^`".into(),
        TokenKind::LParen => "`(`".into(),
        TokenKind::RParen => "`)`".into(),
    }
}

/// Parses a single expression with no names in scope.
pub fn parse(src: &str) -> Result<PhasePolynomial, ParseError> {
    Parser::new(src, None)?.parse_full()
}

/// Parses a single expression; bare names resolve against `env`.
pub fn parse_with_env(
    src: &str,
    env: &BTreeMap<String, PhasePolynomial>,
) -> Result<PhasePolynomial, ParseError> {
    Parser::new(src, Some(env))?.parse_full()
}
