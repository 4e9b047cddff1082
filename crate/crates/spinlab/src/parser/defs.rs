use super::lexer::classify_variable;
use super::{parse_with_env, ParseError, ParseErrorKind};
use crate::algebra::PhasePolynomial;
use std::collections::BTreeMap;
use thiserror::Error;

/// Named definitions loaded from an expression file.
///
/// File format: one `name := expression` per line; later lines may refer to
/// earlier names; `#` comments run to end of line; blank lines are skipped.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    map: BTreeMap<String, PhasePolynomial>,
    order: Vec<String>,
}

impl Definitions {
    pub fn get(&self, name: &str) -> Option<&PhasePolynomial> {
        self.map.get(name)
    }

    /// Names in the order they were defined.
    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn env(&self) -> &BTreeMap<String, PhasePolynomial> {
        &self.map
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DefinitionsError {
    #[error("line {line}: expected `name := expression`")]
    MissingAssignment { line: usize },
    #[error("line {line}: `{name}` is not a valid definition name")]
    InvalidName { line: usize, name: String },
    #[error("line {line}: `{name}` is reserved by the expression grammar")]
    ReservedName { line: usize, name: String },
    #[error("line {line}: `{name}` is defined twice")]
    Redefined { line: usize, name: String },
    #[error("{0}")]
    Expression(#[from] ParseError),
}

/// Parses an expression file into an ordered set of named polynomials.
pub fn parse_definitions(text: &str) -> Result<Definitions, DefinitionsError> {
    let mut defs = Definitions::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let stripped = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        if stripped.trim().is_empty() {
            continue;
        }
        let Some(assign) = stripped.find(":=") else {
            return Err(DefinitionsError::MissingAssignment { line: line_no });
        };
        let name = stripped[..assign].trim();
        let expr = &stripped[assign + 2..];
        validate_name(name, line_no)?;
        if defs.map.contains_key(name) {
            return Err(DefinitionsError::Redefined {
                line: line_no,
                name: name.to_string(),
            });
        }
        let poly = parse_with_env(expr, &defs.map).map_err(|e| {
            // Report positions in file coordinates. The expression substring
            // begins right after ":=", and never spans multiple lines.
            let col = if e.line == 1 {
                assign + 2 + e.col
            } else {
                e.col
            };
            DefinitionsError::Expression(ParseError {
                line: line_no,
                col,
                kind: e.kind,
            })
        })?;
        defs.map.insert(name.to_string(), poly);
        defs.order.push(name.to_string());
    }
    Ok(defs)
}

fn validate_name(name: &str, line: usize) -> Result<(), DefinitionsError> {
    let mut chars = name.chars();
    let valid = match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    };
    if !valid {
        return Err(DefinitionsError::InvalidName {
            line,
            name: name.to_string(),
        });
    }
    let reserved = name == "i"
        || name == "k"
        || matches!(classify_variable(name, line, 1), Ok(Some(_)) | Err(_));
    if reserved {
        return Err(DefinitionsError::ReservedName {
            line,
            name: name.to_string(),
        });
    }
    Ok(())
}

impl DefinitionsError {
    /// True when the failure is an undefined-name lookup rather than a
    /// lexical or structural problem.
    pub fn is_undefined_name(&self) -> bool {
        matches!(
            self,
            DefinitionsError::Expression(ParseError {
                kind: ParseErrorKind::UndefinedName(_),
                ..
            })
        )
    }
}
