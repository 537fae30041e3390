use super::ast::{Identity, QuasiIdentity, Term};
use crate::algebra::{AlgebraError, Element, FinAlgebra};
use crate::report::Report;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("exponent evaluates to 0 outside a product at n = {0}")]
    ZeroExponent(u64),
    #[error("parameter n must be at least 1")]
    InvalidN,
}

/// A term with operation indices and exponents resolved for one algebra and
/// one concrete `n`.
#[derive(Debug, Clone)]
enum Node {
    Var(usize),
    Add(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, u64),
    Inv(Box<Node>),
}

#[derive(Debug, Clone, Copy, Default)]
struct Ops {
    add: Option<usize>,
    mul: Option<usize>,
    inv: Option<usize>,
}

struct Compiler<'a> {
    alg: &'a FinAlgebra,
    vars: &'a [String],
    n: u64,
    ops: Ops,
}

impl Compiler<'_> {
    fn op(&mut self, which: &str) -> Result<usize, EvalError> {
        let (slot, arity) = match which {
            "add" => (&mut self.ops.add, 2),
            "mul" => (&mut self.ops.mul, 2),
            _ => (&mut self.ops.inv, 1),
        };
        if let Some(i) = *slot {
            return Ok(i);
        }
        let i = self.alg.op_index(which, arity)?;
        *slot = Some(i);
        Ok(i)
    }

    fn compile(&mut self, t: &Term) -> Result<Node, EvalError> {
        Ok(match t {
            Term::Var(v) => {
                let i = self.vars.iter().position(|x| x == v).ok_or_else(|| EvalError::UnboundVariable(v.clone()))?;
                Node::Var(i)
            }
            Term::Add(a, b) => {
                self.op("add")?;
                Node::Add(Box::new(self.compile(a)?), Box::new(self.compile(b)?))
            }
            Term::Mul(a, b) => {
                self.op("mul")?;
                if let Term::Pow(base, e) = b.as_ref() {
                    if e.value(self.n) == Some(0) {
                        // u * v^0 := u
                        self.compile(base)?;
                        return self.compile(a);
                    }
                }
                Node::Mul(Box::new(self.compile(a)?), Box::new(self.compile(b)?))
            }
            Term::Pow(a, e) => {
                self.op("mul")?;
                match e.value(self.n) {
                    Some(0) | None => return Err(EvalError::ZeroExponent(self.n)),
                    Some(k) => Node::Pow(Box::new(self.compile(a)?), k),
                }
            }
            Term::Inv(a) => {
                self.op("inv")?;
                Node::Inv(Box::new(self.compile(a)?))
            }
        })
    }
}

/// A term compiled against a particular algebra, variable order and `n`.
pub struct CompiledTerm<'a> {
    alg: &'a FinAlgebra,
    root: Node,
    ops: Ops,
}

impl<'a> CompiledTerm<'a> {
    pub fn new(alg: &'a FinAlgebra, t: &Term, vars: &[String], n: u64) -> Result<Self, EvalError> {
        if n == 0 {
            return Err(EvalError::InvalidN);
        }
        let mut c = Compiler { alg, vars, n, ops: Ops::default() };
        let root = c.compile(t)?;
        Ok(CompiledTerm { alg, root, ops: c.ops })
    }

    pub fn eval(&self, env: &[Element]) -> Element {
        self.eval_node(&self.root, env)
    }

    fn eval_node(&self, node: &Node, env: &[Element]) -> Element {
        match node {
            Node::Var(i) => env[*i],
            Node::Add(a, b) => {
                let (x, y) = (self.eval_node(a, env), self.eval_node(b, env));
                self.alg.binary(self.ops.add.expect("resolved"), x, y)
            }
            Node::Mul(a, b) => {
                let (x, y) = (self.eval_node(a, env), self.eval_node(b, env));
                self.alg.binary(self.ops.mul.expect("resolved"), x, y)
            }
            Node::Pow(a, k) => {
                let m = self.ops.mul.expect("resolved");
                let x = self.eval_node(a, env);
                let mut acc = x;
                for _ in 1..*k {
                    acc = self.alg.binary(m, acc, x);
                }
                acc
            }
            Node::Inv(a) => {
                let x = self.eval_node(a, env);
                self.alg.unary(self.ops.inv.expect("resolved"), x)
            }
        }
    }
}

/// Evaluates `t` in `alg` under `assignment`.
pub fn eval(alg: &FinAlgebra, t: &Term, assignment: &BTreeMap<String, Element>, n: u64) -> Result<Element, EvalError> {
    let vars: Vec<String> = t.vars().into_iter().collect();
    let mut env = Vec::with_capacity(vars.len());
    for v in &vars {
        let &e = assignment.get(v).ok_or_else(|| EvalError::UnboundVariable(v.clone()))?;
        if e >= alg.size() {
            return Err(AlgebraError::ElementOutOfRange(e).into());
        }
        env.push(e);
    }
    Ok(CompiledTerm::new(alg, t, &vars, n)?.eval(&env))
}

fn assignment_json(alg: &FinAlgebra, vars: &[String], env: &[Element]) -> Value {
    let mut labels = Map::new();
    let mut indices = Map::new();
    for (v, &e) in vars.iter().zip(env) {
        labels.insert(v.clone(), json!(alg.label(e)));
        indices.insert(v.clone(), json!(e));
    }
    json!({"assignment": labels, "indices": indices})
}

/// Exhaustive satisfaction check of a (quasi-)identity.
///
/// Assignments are visited in lexicographic order of the variables sorted
/// by name, so a reported counterexample is the least failing assignment.
/// Assignments violating a premise are skipped. After `budget` assignments
/// without a decision the verdict is `unknown`.
pub fn satisfies(alg: &FinAlgebra, phi: &QuasiIdentity, n: u64, budget: u64) -> Result<Report, EvalError> {
    let claim = phi.to_string();
    let vars: Vec<String> = phi.vars().into_iter().collect();
    let compile = |id: &Identity| -> Result<(CompiledTerm, CompiledTerm), EvalError> {
        Ok((CompiledTerm::new(alg, &id.lhs, &vars, n)?, CompiledTerm::new(alg, &id.rhs, &vars, n)?))
    };
    let premises = phi.premises.iter().map(compile).collect::<Result<Vec<_>, _>>()?;
    let (lhs, rhs) = compile(&phi.conclusion)?;

    let k = alg.size();
    let mut env = vec![0; vars.len()];
    let mut evaluations = 0u64;
    let mut skipped = 0u64;
    loop {
        if evaluations >= budget {
            return Ok(Report::unknown(claim, format!("budget exceeded after {evaluations} assignments"))
                .with_evaluations(evaluations));
        }
        evaluations += 1;
        if premises.iter().all(|(l, r)| l.eval(&env) == r.eval(&env)) {
            let (a, b) = (lhs.eval(&env), rhs.eval(&env));
            if a != b {
                let mut w = assignment_json(alg, &vars, &env);
                w["lhs"] = json!(alg.label(a));
                w["rhs"] = json!(alg.label(b));
                return Ok(Report::fail(claim, format!("fails: lhs = {}, rhs = {}", alg.label(a), alg.label(b)))
                    .with_witness(w)
                    .with_evaluations(evaluations));
            }
        } else {
            skipped += 1;
        }
        // odometer, last variable fastest
        let mut i = vars.len();
        loop {
            if i == 0 {
                let detail = if phi.premises.is_empty() {
                    format!("holds on all {evaluations} assignments")
                } else {
                    format!("holds on all {evaluations} assignments ({skipped} fail a premise)")
                };
                return Ok(Report::pass(claim, detail).with_evaluations(evaluations));
            }
            i -= 1;
            env[i] += 1;
            if env[i] < k {
                break;
            }
            env[i] = 0;
        }
    }
}

/// Checks a conjunction of identities; stops at the first non-pass.
pub fn satisfies_all(
    alg: &FinAlgebra,
    claim: &str,
    ids: &[Identity],
    n: u64,
    budget: u64,
) -> Result<Report, EvalError> {
    let mut total = 0u64;
    for id in ids {
        let r = satisfies(alg, &id.clone().into(), n, budget.saturating_sub(total))?;
        total += r.evaluations;
        if !r.is_pass() {
            let detail = format!("{}: {}", r.claim, r.detail);
            let mut out = r.with_claim(claim).with_evaluations(total);
            out.detail = detail;
            return Ok(out);
        }
    }
    Ok(Report::pass(claim, format!("{} identities hold", ids.len())).with_evaluations(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_algebra, Signature};
    use crate::report::Verdict;
    use crate::terms::parse::{parse_identity, parse_quasi_identity, parse_term, Dialect};

    // C_2 flat extension: 0, e, a with a^2 = e
    fn c2_flat() -> FinAlgebra {
        let add = vec![0, 0, 0, 0, 1, 0, 0, 0, 2];
        let mul = vec![0, 0, 0, 0, 1, 2, 0, 2, 1];
        make_algebra(3, Signature::semiring(), vec![add, mul]).unwrap()
    }

    fn env(pairs: &[(&str, Element)]) -> BTreeMap<String, Element> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn x_plus_x_is_x() {
        let s = c2_flat();
        let t = parse_term("x + x", Dialect::Semiring).unwrap();
        for x in 0..3 {
            assert_eq!(eval(&s, &t, &env(&[("x", x)]), 1).unwrap(), x);
        }
    }

    #[test]
    fn right_factor_zero_power_is_dropped() {
        let s = c2_flat();
        let t = parse_term("x*y^0", Dialect::Semiring).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(eval(&s, &t, &env(&[("x", x), ("y", y)]), 1).unwrap(), x);
            }
        }
        let t = parse_term("x*y^(n-1)", Dialect::Semiring).unwrap();
        assert_eq!(eval(&s, &t, &env(&[("x", 2), ("y", 0)]), 1).unwrap(), 2);
        assert_eq!(eval(&s, &t, &env(&[("x", 2), ("y", 0)]), 2).unwrap(), 0);
    }

    #[test]
    fn unbound_variable() {
        let s = c2_flat();
        let t = parse_term("x*y", Dialect::Semiring).unwrap();
        assert_eq!(eval(&s, &t, &env(&[("x", 1)]), 1), Err(EvalError::UnboundVariable("y".into())));
    }

    #[test]
    fn m_of_a_is_zero_in_c2_flat() {
        let s = c2_flat();
        let t = parse_term("x + x^n", Dialect::Semiring).unwrap();
        assert_eq!(eval(&s, &t, &env(&[("x", 2)]), 2).unwrap(), 0);
    }

    #[test]
    fn least_counterexample() {
        let s = c2_flat();
        let id = parse_identity("x*y = x", Dialect::Semiring).unwrap();
        let r = satisfies(&s, &id.into(), 1, u64::MAX).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        // (0, *) all give 0; (1, 0) gives 0 != 1
        assert_eq!(r.witness.unwrap()["indices"], json!({"x": 1, "y": 0}));
    }

    #[test]
    fn quasi_identity_premises_filter() {
        let s = c2_flat();
        let q = parse_quasi_identity("x*x = x & y*y = y & x + y = x*y -> x*y = y*x", Dialect::Semiring).unwrap();
        assert!(satisfies(&s, &q, 1, u64::MAX).unwrap().is_pass());
        let q = parse_quasi_identity("x*x = y*y -> x = y", Dialect::Semiring).unwrap();
        let r = satisfies(&s, &q, 1, u64::MAX).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witness.unwrap()["indices"], json!({"x": 1, "y": 2}));
    }

    #[test]
    fn budget_exceeded_is_unknown() {
        let s = c2_flat();
        let id = parse_identity("x*(y*z) = (x*y)*z", Dialect::Semiring).unwrap();
        let r = satisfies(&s, &id.into(), 1, 10).unwrap();
        assert_eq!(r.verdict, Verdict::Unknown);
        assert_eq!(r.evaluations, 10);
    }

    #[test]
    fn missing_inverse_op() {
        let s = c2_flat();
        let id = parse_identity("x' = x", Dialect::Group).unwrap();
        assert!(matches!(satisfies(&s, &id.into(), 1, 100), Err(EvalError::Algebra(AlgebraError::MissingOp(_)))));
    }
}
