//! Text format for finite algebras.
//!
//! ```text
//! carrier: 0 a 1
//! zero: 0
//! one: 1
//! tests: 0 1
//! plus: 0 a -> a
//! times: a a -> 0
//! star: a -> 1
//! not: 0 -> 1
//! ```
//!
//! Every table that appears must be total; `#` starts a comment.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{AlgebraParts, Elem, FiniteAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ModelFileError {
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ModelFileError {
    ModelFileError {
        line,
        message: message.into(),
    }
}

const UNARY: [&str; 4] = ["star", "adom", "aran", "not"];

impl FiniteAlgebra {
    pub fn parse_model_file(text: &str) -> Result<FiniteAlgebra, ModelFileError> {
        let mut lines: Vec<(usize, &str, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| err(i + 1, format!("expected `key: ...`, found `{line}`")))?;
            lines.push((i + 1, key.trim(), rest.trim()));
        }

        let single = |key: &str| -> Result<Option<(usize, &str)>, ModelFileError> {
            let mut found = lines.iter().filter(|(_, k, _)| *k == key);
            let first = found.next().map(|(l, _, r)| (*l, *r));
            if let Some((l, _, _)) = found.next() {
                return Err(err(*l, format!("`{key}` given twice")));
            }
            Ok(first)
        };

        let (carrier_line, carrier) =
            single("carrier")?.ok_or_else(|| err(0, "missing `carrier:` line"))?;
        let names: Vec<String> = carrier.split_whitespace().map(str::to_string).collect();
        if names.is_empty() {
            return Err(err(carrier_line, "carrier is empty"));
        }
        let n = names.len();
        let lookup = |line: usize, name: &str| -> Result<Elem, ModelFileError> {
            names
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| err(line, format!("unknown element `{name}`")))
        };
        let element = |key: &str| -> Result<Elem, ModelFileError> {
            let (line, rest) = single(key)?.ok_or_else(|| err(0, format!("missing `{key}:` line")))?;
            lookup(line, rest)
        };
        let zero = element("zero")?;
        let one = element("one")?;
        let tests = match single("tests")? {
            Some((line, rest)) => Some(
                rest.split_whitespace()
                    .map(|e| lookup(line, e))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };

        let mut binary: BTreeMap<&str, Vec<Option<Elem>>> = BTreeMap::new();
        let mut unary: BTreeMap<&str, Vec<Option<Elem>>> = BTreeMap::new();
        let mut first_line: BTreeMap<&str, usize> = BTreeMap::new();
        for &(line, key, rest) in &lines {
            let is_binary = key == "plus" || key == "times";
            if !is_binary && !UNARY.contains(&key) {
                if !["carrier", "zero", "one", "tests"].contains(&key) {
                    return Err(err(line, format!("unknown key `{key}`")));
                }
                continue;
            }
            first_line.entry(key).or_insert(line);
            let (args, result) = rest
                .split_once("->")
                .ok_or_else(|| err(line, "expected `args -> result`"))?;
            let args: Vec<Elem> = args
                .split_whitespace()
                .map(|e| lookup(line, e))
                .collect::<Result<_, _>>()?;
            let result = lookup(line, result.trim())?;
            let (table, index) = if is_binary {
                if args.len() != 2 {
                    return Err(err(line, format!("`{key}` rows take two arguments")));
                }
                (binary.entry(key).or_insert_with(|| vec![None; n * n]), args[0] * n + args[1])
            } else {
                if args.len() != 1 {
                    return Err(err(line, format!("`{key}` rows take one argument")));
                }
                (unary.entry(key).or_insert_with(|| vec![None; n]), args[0])
            };
            if table[index].is_some() {
                return Err(err(line, format!("duplicate `{key}` row")));
            }
            table[index] = Some(result);
        }

        let total = |key: &str, table: Vec<Option<Elem>>, arity: usize| -> Result<Vec<Elem>, ModelFileError> {
            let line = first_line.get(key).copied().unwrap_or(0);
            table
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.ok_or_else(|| {
                        let row = if arity == 2 {
                            format!("{} {}", names[i / n], names[i % n])
                        } else {
                            names[i].clone()
                        };
                        err(line, format!("`{key}` table has no row for `{row}`"))
                    })
                })
                .collect()
        };
        let mut take_binary = |key: &str| -> Result<Vec<Elem>, ModelFileError> {
            let table = binary
                .remove(key)
                .ok_or_else(|| err(0, format!("missing `{key}` table")))?;
            total(key, table, 2)
        };
        let plus = take_binary("plus")?;
        let times = take_binary("times")?;
        let mut take_unary = |key: &str| -> Result<Option<Vec<Elem>>, ModelFileError> {
            unary.remove(key).map(|t| total(key, t, 1)).transpose()
        };
        let star = take_unary("star")?;
        let adom = take_unary("adom")?;
        let aran = take_unary("aran")?;
        // `not` rows are only given for tests.
        let complement = unary.remove("not");

        FiniteAlgebra::new(AlgebraParts {
            names: names.clone(),
            zero,
            one,
            plus,
            times,
            star,
            adom,
            aran,
            tests,
            complement,
        })
        .map_err(|e| err(0, e.to_string()))
    }

    /// Renders the algebra in the model-file format.
    pub fn to_model_file(&self) -> String {
        let n = self.size();
        let name = |x: Elem| self.names[x].as_str();
        let mut out = String::new();
        out.push_str(&format!("carrier: {}\n", self.names.join(" ")));
        out.push_str(&format!("zero: {}\n", name(self.zero)));
        out.push_str(&format!("one: {}\n", name(self.one)));
        if let Some(t) = &self.tests {
            let t: Vec<&str> = t.iter().map(|&x| name(x)).collect();
            out.push_str(&format!("tests: {}\n", t.join(" ")));
        }
        for (key, table) in [("plus", &self.plus), ("times", &self.times)] {
            for x in 0..n {
                for y in 0..n {
                    out.push_str(&format!("{key}: {} {} -> {}\n", name(x), name(y), name(table[x * n + y])));
                }
            }
        }
        for (key, table) in [("star", &self.star), ("adom", &self.adom), ("aran", &self.aran)] {
            if let Some(t) = table {
                for (x, &tx) in t.iter().enumerate() {
                    out.push_str(&format!("{key}: {} -> {}\n", name(x), name(tx)));
                }
            }
        }
        if let Some(c) = &self.complement {
            for (x, cx) in c.iter().enumerate() {
                if let Some(y) = cx {
                    out.push_str(&format!("not: {} -> {}\n", name(x), name(*y)));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{boolean_algebra, lemma4_model};

    #[test]
    fn round_trip_builtins() {
        for m in [lemma4_model(), boolean_algebra()] {
            let text = m.to_model_file();
            assert_eq!(FiniteAlgebra::parse_model_file(&text).unwrap(), m);
        }
    }

    #[test]
    fn missing_row_is_an_error() {
        let text = lemma4_model().to_model_file();
        let without: String = text
            .lines()
            .filter(|l| *l != "times: a a -> 0")
            .map(|l| format!("{l}\n"))
            .collect();
        let e = FiniteAlgebra::parse_model_file(&without).unwrap_err();
        assert!(e.message.contains("no row for `a a`"), "{e}");
    }

    #[test]
    fn line_numbers_in_errors() {
        let text = "carrier: 0 1\nzero: 0\none: 1\nplus: 0 0 -> 2\n";
        let e = FiniteAlgebra::parse_model_file(text).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("unknown element `2`"));
        let text = "carrier: 0 1\nzero: 0\none: 1\nplus: 0 0 -> 0\nplus: 0 0 -> 1\n";
        assert_eq!(FiniteAlgebra::parse_model_file(text).unwrap_err().line, 5);
        let text = "carrier: 0 1\nzero 0\n";
        assert_eq!(FiniteAlgebra::parse_model_file(text).unwrap_err().line, 2);
        let text = "carrier: 0 1\nzero: 0\none: 1\nfoo: 1\n";
        assert_eq!(FiniteAlgebra::parse_model_file(text).unwrap_err().line, 4);
    }

    #[test]
    fn comments_and_blank_lines() {
        let mut text = String::from("# the boolean algebra\n\n");
        text.push_str(&boolean_algebra().to_model_file());
        assert_eq!(FiniteAlgebra::parse_model_file(&text).unwrap(), boolean_algebra());
    }
}
