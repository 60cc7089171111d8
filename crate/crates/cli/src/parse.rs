//! Command-line syntax for lists of classes: groups separated by `;` (or
//! newlines), entries within a group separated by `,`.

use std::fmt;
use std::str::FromStr;

use upsilon_core::{AlcovePoint, SchubertIndex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

/// Split into groups of trimmed entries, remembering where each entry starts.
fn tokenize(input: &str) -> Result<Vec<Vec<Token<'_>>>, ParseError> {
    let mut groups = Vec::new();
    for (line_no, line) in input.lines().enumerate() {
        let mut offset = 0;
        for group in line.split(';') {
            let group_start = offset;
            offset += group.len() + 1;
            if group.trim().is_empty() {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(ParseError {
                    line: line_no + 1,
                    column: line[..group_start].chars().count() + 1,
                    message: "empty group".into(),
                });
            }
            let mut tokens = Vec::new();
            let mut entry_offset = group_start;
            for entry in group.split(',') {
                let lead = entry.len() - entry.trim_start().len();
                let column = line[..entry_offset + lead].chars().count() + 1;
                if entry.trim().is_empty() {
                    return Err(ParseError {
                        line: line_no + 1,
                        column,
                        message: "empty entry".into(),
                    });
                }
                tokens.push(Token {
                    text: entry.trim(),
                    line: line_no + 1,
                    column,
                });
                entry_offset += entry.len() + 1;
            }
            groups.push(tokens);
        }
    }
    if groups.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "no classes given".into(),
        });
    }
    Ok(groups)
}

fn parse_groups<T: FromStr>(input: &str, what: &str) -> Result<Vec<(Vec<T>, usize, usize)>, ParseError> {
    tokenize(input)?
        .into_iter()
        .map(|tokens| {
            let (line, column) = (tokens[0].line, tokens[0].column);
            let values = tokens
                .iter()
                .map(|t| {
                    t.text.parse::<T>().map_err(|_| ParseError {
                        line: t.line,
                        column: t.column,
                        message: format!("expected {what}, found `{}`", t.text),
                    })
                })
                .collect::<Result<Vec<T>, _>>()?;
            Ok((values, line, column))
        })
        .collect()
}

/// `1,2;1,3;2,4` as index sets in `{1, …, n}`.
pub fn subsets(input: &str, n: usize) -> Result<Vec<SchubertIndex>, ParseError> {
    parse_groups::<usize>(input, "a positive integer")?
        .into_iter()
        .map(|(values, line, column)| {
            SchubertIndex::new(&values, n).map_err(|e| ParseError {
                line,
                column,
                message: e.to_string(),
            })
        })
        .collect()
}

/// `0.3,-0.3;0.1,-0.1` as alcove points. Coordinates are taken as given;
/// a tuple that does not sum to zero is rejected rather than corrected.
pub fn alcove_points(input: &str) -> Result<Vec<AlcovePoint>, ParseError> {
    parse_groups::<f64>(input, "a real number")?
        .into_iter()
        .map(|(values, line, column)| {
            AlcovePoint::new(values).map_err(|e| ParseError {
                line,
                column,
                message: e.to_string(),
            })
        })
        .collect()
}

/// `0.1,0.1,0.3` as `SU(2)` class parameters `ζ ∈ [0, 1/2]`.
pub fn su2_parameters(input: &str) -> Result<Vec<AlcovePoint>, ParseError> {
    let tokens = tokenize(input)?;
    if tokens.len() != 1 {
        return Err(ParseError {
            line: tokens[1][0].line,
            column: tokens[1][0].column,
            message: "SU(2) parameters form a single comma-separated list".into(),
        });
    }
    tokens[0]
        .iter()
        .map(|t| {
            let z: f64 = t.text.parse().map_err(|_| ParseError {
                line: t.line,
                column: t.column,
                message: format!("expected a real number, found `{}`", t.text),
            })?;
            AlcovePoint::su2(z).map_err(|e| ParseError {
                line: t.line,
                column: t.column,
                message: e.to_string(),
            })
        })
        .collect()
}

/// A single alcove point.
pub fn alcove_point(input: &str) -> Result<AlcovePoint, ParseError> {
    let mut points = alcove_points(input)?;
    if points.len() != 1 {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: format!("expected one alcove point, found {}", points.len()),
        });
    }
    Ok(points.remove(0))
}

/// `200` or `200x120`.
pub fn mesh(input: &str) -> Result<(usize, usize), String> {
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("bad mesh size `{s}`"));
    match input.split_once(['x', 'X']) {
        Some((s, t)) => Ok((parse(s)?, parse(t)?)),
        None => {
            let m = parse(input)?;
            Ok((m, m))
        }
    }
}
