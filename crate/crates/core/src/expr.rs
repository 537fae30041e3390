//! Algebra expressions for the command line.
//!
//! ```text
//! expr := GROUP                     named group, e.g. C3, Q8, D6xC12
//!       | PATH.json                 algebra in JSON form
//!       | flat(expr)                flat extension of a group
//!       | ps(expr)                  pointed semidiscriminator
//!       | prod(expr, expr)          direct product
//!       | quot(expr, cong#i)        quotient by the i-th congruence
//!       | sub(expr, label, ...)     generated subalgebra
//! ```

use crate::algebra::{AlgebraError, FinAlgebra};
use crate::congruences::{all_congruences, CongruenceError, DEFAULT_SIZE_BOUND};
use crate::constructions::{self, flat_group, pointed_semidiscriminator, ConstructionError};
use crate::groups::{direct_product, named_group, subgroup_generated, Group, GroupError};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("syntax error in '{0}': {1}")]
    Syntax(String, String),
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error("{0} expects a group")]
    NotAGroup(String),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("congruence index {0} out of range ({1} congruences)")]
    CongruenceIndex(usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
}

/// Result of evaluating an expression. Groups stay groups as long as
/// possible so that group-only constructions apply.
#[derive(Debug, Clone)]
pub enum Value {
    Group(Group),
    Algebra(FinAlgebra),
}

impl Value {
    pub fn algebra(&self) -> &FinAlgebra {
        match self {
            Value::Group(g) => g.algebra(),
            Value::Algebra(a) => a,
        }
    }

    pub fn into_algebra(self) -> FinAlgebra {
        match self {
            Value::Group(g) => g.into_algebra(),
            Value::Algebra(a) => a,
        }
    }

    /// The value as a group, converting a JSON algebra with a group table.
    pub fn as_group(&self, context: &str) -> Result<Group, ExprError> {
        match self {
            Value::Group(g) => Ok(g.clone()),
            Value::Algebra(a) => {
                let mul = a.op_index("mul", 2).map_err(|_| ExprError::NotAGroup(context.into()))?;
                let labels = a.elements().map(|e| a.label(e)).collect();
                Group::from_table(context, a.size(), a.table(mul).to_vec(), labels)
                    .map_err(|_| ExprError::NotAGroup(context.into()))
            }
        }
    }
}

pub fn parse_algebra(src: &str) -> Result<Value, ExprError> {
    eval(src.trim(), src)
}

fn syntax(src: &str, msg: impl Into<String>) -> ExprError {
    ExprError::Syntax(src.to_string(), msg.into())
}

/// Splits `a, b(c, d), e` at top-level commas.
fn split_args<'a>(s: &'a str, src: &str) -> Result<Vec<&'a str>, ExprError> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(syntax(src, "unbalanced ')'"));
                }
            }
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(syntax(src, "unbalanced '('"));
    }
    out.push(s[start..].trim());
    if out.iter().any(|a| a.is_empty()) {
        return Err(syntax(src, "empty argument"));
    }
    Ok(out)
}

fn eval(s: &str, src: &str) -> Result<Value, ExprError> {
    if s.is_empty() {
        return Err(syntax(src, "empty expression"));
    }
    if let Some(open) = s.find('(') {
        let head = &s[..open];
        if !s.ends_with(')') || head.is_empty() || !head.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(syntax(src, format!("malformed call '{s}'")));
        }
        let args = split_args(&s[open + 1..s.len() - 1], src)?;
        return call(head, &args, src);
    }
    if s.ends_with(".json") || s.contains('/') {
        return load_json(Path::new(s)).map(Value::Algebra);
    }
    Ok(Value::Group(named_group(s)?))
}

fn arity(head: &str, args: &[&str], n: usize, src: &str) -> Result<(), ExprError> {
    if args.len() != n {
        return Err(syntax(src, format!("{head} takes {n} argument(s), got {}", args.len())));
    }
    Ok(())
}

fn call(head: &str, args: &[&str], src: &str) -> Result<Value, ExprError> {
    match head {
        "flat" => {
            arity(head, args, 1, src)?;
            let g = eval(args[0], src)?.as_group("flat")?;
            Ok(Value::Algebra(flat_group(&g)))
        }
        "ps" => {
            arity(head, args, 1, src)?;
            let a = eval(args[0], src)?.into_algebra();
            Ok(Value::Algebra(pointed_semidiscriminator(&a)?))
        }
        "prod" => {
            arity(head, args, 2, src)?;
            match (eval(args[0], src)?, eval(args[1], src)?) {
                (Value::Group(g), Value::Group(h)) => Ok(Value::Group(direct_product(&g, &h)?)),
                (a, b) => Ok(Value::Algebra(constructions::product(a.algebra(), b.algebra())?)),
            }
        }
        "quot" => {
            arity(head, args, 2, src)?;
            let a = eval(args[0], src)?.into_algebra();
            let i: usize = args[1]
                .strip_prefix("cong#")
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| syntax(src, "expected cong#INDEX"))?;
            let lattice = all_congruences(&a, DEFAULT_SIZE_BOUND)?;
            let theta = lattice.congruences.get(i).ok_or(ExprError::CongruenceIndex(i, lattice.len()))?;
            Ok(Value::Algebra(constructions::quotient(&a, theta)?.0))
        }
        "sub" => {
            if args.len() < 2 {
                return Err(syntax(src, "sub takes an algebra and at least one element"));
            }
            let v = eval(args[0], src)?;
            let a = v.algebra();
            let gens = args[1..]
                .iter()
                .map(|l| a.elements().find(|&e| a.label(e) == *l).ok_or_else(|| ExprError::UnknownElement(l.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            match &v {
                Value::Group(g) => Ok(Value::Group(subgroup_generated(g, &gens)?.group)),
                Value::Algebra(a) => Ok(Value::Algebra(constructions::subalgebra_generated(a, &gens)?.0)),
            }
        }
        other => Err(syntax(src, format!("unknown construction '{other}'"))),
    }
}

pub fn load_json(path: &Path) -> Result<FinAlgebra, ExprError> {
    let io = |e: String| ExprError::Io(path.display().to_string(), e);
    let text = std::fs::read_to_string(path).map_err(|e| io(e.to_string()))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| io(e.to_string()))?;
    Ok(FinAlgebra::from_json(&v)?)
}
