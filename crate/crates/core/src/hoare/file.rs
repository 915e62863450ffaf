//! Program files: a state space, named relations and tests, and optionally a
//! program.
//!
//! ```text
//! states: 1 2 3
//! rel x = {(1,2),(2,3)}
//! test p = {(1,1)}
//! test q = !p          # a literal, or an expression over earlier tests
//! program:
//! while p do x od
//! ```

use thiserror::Error;

use super::{syntax, Bindings, HoareError, Program, TestExpr};
use crate::parse::{Cursor, ParseError};
use crate::rel::{Rel, RelError, StateSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ProgramFileError {
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl ToString) -> ProgramFileError {
    ProgramFileError {
        line,
        message: message.to_string(),
    }
}

#[derive(Debug, Clone)]
pub struct ProgramFile {
    pub bindings: Bindings,
    pub program: Option<Program>,
}

fn looks_like_literal(text: &str) -> bool {
    let t = text.trim_start();
    t.starts_with('{') || ["id", "empty", "full"].contains(&t.trim())
}

impl ProgramFile {
    pub fn parse(text: &str) -> Result<ProgramFile, ProgramFileError> {
        let lines: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap_or("")).collect();
        let mut bindings: Option<Bindings> = None;
        let mut program = None;
        let mut i = 0;
        while i < lines.len() {
            let line_no = i + 1;
            let line = lines[i].trim();
            i += 1;
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("states:") {
                if bindings.is_some() {
                    return Err(err(line_no, "`states:` given twice"));
                }
                let space = StateSpace::new(rest.split_whitespace()).map_err(|e| err(line_no, e))?;
                bindings = Some(Bindings::new(space));
                continue;
            }
            if let Some(rest) = line.strip_prefix("program:") {
                let body_start = i;
                let mut body = vec![rest];
                body.extend(lines[i..].iter().copied());
                program = Some(parse_program(&body, line_no, body_start)?);
                break;
            }
            let b = bindings
                .as_mut()
                .ok_or_else(|| err(line_no, "declarations must follow a `states:` line"))?;
            let (kind, rest) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| err(line_no, format!("expected a declaration, found `{line}`")))?;
            let (name, value) = rest
                .split_once('=')
                .ok_or_else(|| err(line_no, "expected `name = value`"))?;
            let name = name.trim();
            let starts_ok = name.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_');
            if !starts_ok || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(err(line_no, format!("bad name `{name}`")));
            }
            if b.rel(name).is_some() || b.test(name).is_some() {
                return Err(err(line_no, format!("`{name}` declared twice")));
            }
            let declared = match kind {
                "rel" => Rel::parse(b.space(), value)
                    .map_err(HoareError::from)
                    .and_then(|r| b.bind_rel(name, r)),
                "test" if looks_like_literal(value) => Rel::parse(b.space(), value)
                    .map_err(HoareError::from)
                    .and_then(|r| b.bind_test(name, r)),
                "test" => TestExpr::parse(value)
                    .map_err(|e| HoareError::Rel(RelError::Parse(e)))
                    .and_then(|t| b.eval_test(&t))
                    .and_then(|r| b.bind_test(name, r)),
                other => return Err(err(line_no, format!("unknown declaration `{other}`"))),
            };
            declared.map_err(|e| err(line_no, e))?;
        }
        let bindings = bindings.ok_or_else(|| err(0, "missing `states:` line"))?;
        Ok(ProgramFile { bindings, program })
    }
}

/// Parses the program text spanning `body`, whose first entry sits on line
/// `first_line` and the rest from line `rest_start + 1` on.
fn parse_program(body: &[&str], first_line: usize, rest_start: usize) -> Result<Program, ProgramFileError> {
    let text = body.join("\n");
    let locate = |e: ParseError| {
        // Columns count characters of the joined text, newlines included.
        let mut remaining = e.column.saturating_sub(1);
        for (k, l) in body.iter().enumerate() {
            let len = l.chars().count() + 1;
            if remaining < len {
                let line = if k == 0 { first_line } else { rest_start + k };
                return err(line, e.message);
            }
            remaining -= len;
        }
        err(rest_start + body.len().saturating_sub(1), e.message)
    };
    let mut cur = Cursor::new(&text).map_err(locate)?;
    if cur.at_end() {
        return Err(err(first_line, "empty program"));
    }
    let p = syntax::parse_seq(&mut cur).map_err(locate)?;
    cur.finish().map_err(locate)?;
    Ok(p)
}
