//! Textual expression language for phase-space polynomials.
//!
//! Grammar (whitespace-insensitive, `#` comments to end of line):
//!
//! ```text
//! expression := term (('+' | '-') term)*
//! term       := factor ('*' factor)*
//! factor     := '-' factor | power
//! power      := atom ['^' exponent]
//! atom       := rational | 'i' | 'k' | variable | name | '(' expression ')'
//! rational   := digits ['/' digits]
//! variable   := ('x' | 'y' | 'px' | 'py') [digits]      # index defaults to 1
//! exponent   := ['-'] integer                           # negative only on k
//! ```
//!
//! `k` denotes the structure scale and is the one symbol allowed a negative
//! exponent; exponents on variables and grouped expressions must be
//! nonnegative integers. `canonical_text` prints the deterministic canonical
//! form, and `parse(canonical_text(p)) == p` for every polynomial.

mod defs;
mod lexer;
mod parse;
mod print;

pub use defs::{parse_definitions, Definitions, DefinitionsError};
pub use parse::{parse, parse_with_env};
pub use print::canonical_text;

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    NumberOverflow,
    ZeroDenominator,
    InvalidParticleIndex,
    Syntax(String),
    UnexpectedEnd,
    UndefinedName(String),
    NonIntegerExponent,
    NegativeExponent,
    ExponentTooLarge,
    DegreeTooLarge,
    TooDeep,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{}`", c),
            ParseErrorKind::NumberOverflow => write!(f, "numeric literal out of range"),
            ParseErrorKind::ZeroDenominator => write!(f, "rational literal has zero denominator"),
            ParseErrorKind::InvalidParticleIndex => {
                write!(f, "particle index must be at least 1")
            }
            ParseErrorKind::Syntax(msg) => write!(f, "{}", msg),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UndefinedName(name) => write!(f, "undefined name `{}`", name),
            ParseErrorKind::NonIntegerExponent => write!(f, "exponent must be an integer"),
            ParseErrorKind::NegativeExponent => {
                write!(f, "negative exponents are only allowed on `k`")
            }
            ParseErrorKind::ExponentTooLarge => {
                write!(
                    f,
                    "exponent exceeds the supported maximum of {}",
                    parse::MAX_EXPONENT
                )
            }
            ParseErrorKind::DegreeTooLarge => {
                write!(
                    f,
                    "expression degree exceeds the supported maximum of {}",
                    parse::MAX_DEGREE
                )
            }
            ParseErrorKind::TooDeep => write!(f, "expression is nested too deeply"),
        }
    }
}
