//! Text forms of moment functionals.
//!
//! Rule strings: `free(gauss, semicircle, delta(0.5), moments(0, 1, 0, 2))`,
//! `gaussian(3)`, `semicircle(2)`, `haar(2)`, `delta(1.5, -2)`.
//!
//! Table files: `word : re [im]` lines, `#` comments, and optional
//! `dim = n` / `degree = d` directives (otherwise inferred).

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Component, MomentFunctional, MAX_EVAL_DEGREE};
use crate::error::{Error, Result};
use crate::ncseries::text::parse_word;

/// Most variables a parsed rule may declare.
pub const MAX_RULE_ARITY: usize = 64;

fn err(msg: impl Into<String>) -> Error {
    Error::parse(1, msg)
}

/// Splits `name(args)` into the name and the top-level comma-separated args.
fn call(text: &str) -> Result<(&str, Vec<&str>)> {
    let text = text.trim();
    let Some(open) = text.find('(') else {
        return Ok((text, Vec::new()));
    };
    if !text.ends_with(')') {
        return Err(err(format!("missing `)` in `{text}`")));
    }
    let name = text[..open].trim();
    let inner = &text[open + 1..text.len() - 1];
    let mut args = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(err("unbalanced parentheses"));
                }
            }
            ',' if depth == 0 => {
                args.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(err("unbalanced parentheses"));
    }
    if !inner.trim().is_empty() {
        args.push(inner[start..].trim());
    }
    if args.iter().any(|a| a.is_empty()) {
        return Err(err(format!("empty argument in `{text}`")));
    }
    Ok((name, args))
}

fn number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| err(format!("expected a finite number, got `{s}`")))
}

fn count(args: &[&str], what: &str) -> Result<usize> {
    let [a] = args else {
        return Err(err(format!("{what} takes one argument")));
    };
    let n: usize = a.parse().map_err(|_| err(format!("expected a count, got `{a}`")))?;
    if n == 0 || n > MAX_RULE_ARITY {
        return Err(err(format!("count {n} outside 1..={MAX_RULE_ARITY}")));
    }
    Ok(n)
}

fn component(text: &str) -> Result<Component> {
    let (name, args) = call(text)?;
    let no_args = |c: Component| {
        if args.is_empty() {
            Ok(c)
        } else {
            Err(err(format!("`{name}` takes no arguments")))
        }
    };
    match name {
        "gauss" | "gaussian" => no_args(Component::Gauss),
        "semicircle" => no_args(Component::Semicircle),
        "haar-circle" | "circle" => no_args(Component::HaarCircle),
        "delta" => match args.as_slice() {
            [a] => Ok(Component::Delta(Complex64::new(number(a)?, 0.0))),
            _ => Err(err("component delta takes one argument")),
        },
        "moments" => {
            if args.is_empty() || args.len() > MAX_EVAL_DEGREE {
                return Err(err(format!("moments takes 1..={MAX_EVAL_DEGREE} values")));
            }
            Ok(Component::Moments(
                args.iter()
                    .map(|a| number(a).map(|x| Complex64::new(x, 0.0)))
                    .collect::<Result<_>>()?,
            ))
        }
        _ => Err(err(format!("unknown component `{name}`"))),
    }
}

impl MomentFunctional {
    pub fn parse_rule(text: &str) -> Result<MomentFunctional> {
        let (name, args) = call(text)?;
        match name {
            "free" => {
                if args.is_empty() || args.len() > MAX_RULE_ARITY {
                    return Err(err(format!("free takes 1..={MAX_RULE_ARITY} components")));
                }
                MomentFunctional::free_product(args.iter().map(|a| component(a)).collect::<Result<_>>()?)
            }
            "gaussian" => MomentFunctional::free_gaussian(count(&args, name)?),
            "semicircle" => MomentFunctional::free_semicircle(count(&args, name)?, MAX_EVAL_DEGREE),
            "haar" => MomentFunctional::haar_free_product(count(&args, name)?),
            "delta" => {
                if args.is_empty() || args.len() > MAX_RULE_ARITY {
                    return Err(err(format!("delta takes 1..={MAX_RULE_ARITY} coordinates")));
                }
                let a: Vec<Complex64> = args
                    .iter()
                    .map(|a| number(a).map(|x| Complex64::new(x, 0.0)))
                    .collect::<Result<_>>()?;
                MomentFunctional::delta_free_product(&a)
            }
            _ => Err(err(format!("unknown rule `{name}`"))),
        }
    }

    pub fn parse_table(text: &str) -> Result<MomentFunctional> {
        let mut entries = BTreeMap::new();
        let mut dim = None;
        let mut degree = None;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let ln = k + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((key, value)) = line.split_once('=') {
                let v: usize = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("bad value `{}`", value.trim())))?;
                match key.trim() {
                    "dim" if (1..=MAX_RULE_ARITY).contains(&v) => dim = Some(v),
                    "degree" if v <= MAX_EVAL_DEGREE => degree = Some(v),
                    other => return Err(Error::parse(ln, format!("bad directive `{other} = {v}`"))),
                }
                continue;
            }
            let (w, c) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln, "expected `word : re [im]`"))?;
            let word = parse_word(w).map_err(|m| Error::parse(ln, m))?;
            if word.degree() > MAX_EVAL_DEGREE {
                return Err(Error::parse(ln, format!("degree above {MAX_EVAL_DEGREE}")));
            }
            let nums: Vec<&str> = c.split_whitespace().collect();
            let num = |s: &str| number(s).map_err(|_| Error::parse(ln, format!("bad number `{s}`")));
            let value = match nums.as_slice() {
                [re] => Complex64::new(num(re)?, 0.0),
                [re, im] => Complex64::new(num(re)?, num(im)?),
                _ => return Err(Error::parse(ln, "expected `re` or `re im`")),
            };
            if entries.insert(word, value).is_some() {
                return Err(Error::parse(ln, "duplicate word"));
            }
        }
        let dim = match dim {
            Some(d) => d,
            None => entries
                .keys()
                .map(|w| usize::from(w.max_letter()))
                .max()
                .unwrap_or(0)
                .max(1),
        };
        let max_degree = degree.unwrap_or_else(|| entries.keys().map(|w| w.degree()).max().unwrap_or(0));
        MomentFunctional::table(dim, max_degree, entries)
    }
}
