use super::{ParseError, ParseErrorKind};
use crate::algebra::{CanonicalVariable, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub(super) enum TokenKind {
    Number(Rational),
    ImaginaryUnit,
    Kappa,
    Variable(CanonicalVariable),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
pub(super) struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

/// Tokenizes one expression. `#` starts a comment running to end of line.
pub(super) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };

        match c {
            ' ' | '\t' | '\r' | '\n' => {
                advance(&mut i, &mut line, &mut col);
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(&mut i, &mut line, &mut col);
                }
            }
            '+' => {
                tokens.push(Token {
                    kind: TokenKind::Plus,
                    line: tline,
                    col: tcol,
                });
                advance(&mut i, &mut line, &mut col);
            }
            '-' => {
                tokens.push(Token {
                    kind: TokenKind::Minus,
                    line: tline,
                    col: tcol,
                });
                advance(&mut i, &mut line, &mut col);
            }
            '*' => {
                tokens.push(Token {
                    kind: TokenKind::Star,
                    line: tline,
                    col: tcol,
                });
                advance(&mut i, &mut line, &mut col);
            }
            '^' => {
                tokens.push(Token {
                    kind: TokenKind::Caret,
                    line: tline,
                    col: tcol,
                });
                advance(&mut i, &mut line, &mut col);
            }
            '(' => {
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    line: tline,
                    col: tcol,
                });
                advance(&mut i, &mut line, &mut col);
            }
            ')' => {
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    line: tline,
                    col: tcol,
                });
                advance(&mut i, &mut line, &mut col);
            }
            '0'..='9' => {
                let mut numer = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    numer.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
                // Exact literals: canonical text can carry arbitrarily large
                // integers, so the lexer must not go through machine words.
                let numer: BigInt = numer.parse().expect("digit strings parse");
                let mut denom = BigInt::from(1);
                // A directly attached "/digits" is part of the rational literal.
                if i < chars.len() && chars[i] == '/' {
                    let slash_col = col;
                    advance(&mut i, &mut line, &mut col);
                    let mut d = String::new();
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        d.push(chars[i]);
                        advance(&mut i, &mut line, &mut col);
                    }
                    if d.is_empty() {
                        return Err(ParseError {
                            line: tline,
                            col: slash_col,
                            kind: ParseErrorKind::Syntax(
                                "expected digits after '/' in rational literal".into(),
                            ),
                        });
                    }
                    denom = d.parse().expect("digit strings parse");
                    if denom.is_zero() {
                        return Err(ParseError {
                            line: tline,
                            col: tcol,
                            kind: ParseErrorKind::ZeroDenominator,
                        });
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Number(Rational::new(numer, denom)),
                    line: tline,
                    col: tcol,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    word.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
                tokens.push(Token {
                    kind: classify_word(&word, tline, tcol)?,
                    line: tline,
                    col: tcol,
                });
            }
            other => {
                return Err(ParseError {
                    line: tline,
                    col: tcol,
                    kind: ParseErrorKind::UnexpectedChar(other),
                });
            }
        }
    }
    Ok(tokens)
}

/// `i` and `k` are reserved; `x`/`y`/`px`/`py` with an optional particle
/// index are canonical variables (index defaults to 1); anything else is a
/// name resolved against the definition environment.
fn classify_word(word: &str, line: usize, col: usize) -> Result<TokenKind, ParseError> {
    if word == "i" {
        return Ok(TokenKind::ImaginaryUnit);
    }
    if word == "k" {
        return Ok(TokenKind::Kappa);
    }
    if let Some(v) = classify_variable(word, line, col)? {
        return Ok(TokenKind::Variable(v));
    }
    Ok(TokenKind::Name(word.to_string()))
}

pub(super) fn classify_variable(
    word: &str,
    line: usize,
    col: usize,
) -> Result<Option<CanonicalVariable>, ParseError> {
    let (prefix, rest) = if let Some(rest) = word.strip_prefix("px") {
        ("px", rest)
    } else if let Some(rest) = word.strip_prefix("py") {
        ("py", rest)
    } else if let Some(rest) = word.strip_prefix('x') {
        ("x", rest)
    } else if let Some(rest) = word.strip_prefix('y') {
        ("y", rest)
    } else {
        return Ok(None);
    };
    if !rest.is_empty() && !rest.chars().all(|c| c.is_ascii_digit()) {
        return Ok(None);
    }
    let particle: u32 = if rest.is_empty() {
        1
    } else {
        rest.parse().map_err(|_| ParseError {
            line,
            col,
            kind: ParseErrorKind::NumberOverflow,
        })?
    };
    if particle == 0 {
        return Err(ParseError {
            line,
            col,
            kind: ParseErrorKind::InvalidParticleIndex,
        });
    }
    let v = match prefix {
        "x" => CanonicalVariable::x(particle),
        "y" => CanonicalVariable::y(particle),
        "px" => CanonicalVariable::px(particle),
        "py" => CanonicalVariable::py(particle),
        _ => unreachable!(),
    };
    Ok(Some(v))
}
