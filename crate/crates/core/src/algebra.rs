//! Finite algebras given by operation tables.
//!
//! Elements of a `FinAlgebra` of size `k` are the indices `0..k`. An
//! operation of arity `m` is stored as a flat row-major table of length
//! `k^m`; the first argument is the most significant digit, so for a binary
//! operation the row index is the first argument.

use crate::report::Report;
use serde_json::{json, Map, Value};
use std::collections::BTreeSet;
use thiserror::Error;

/// An element of a finite algebra: an index into its universe.
pub type Element = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("algebra size must be positive")]
    EmptyUniverse,
    #[error("duplicate operation name `{0}`")]
    DuplicateOp(String),
    #[error("missing operation `{0}`")]
    MissingOp(String),
    #[error("operation `{name}` has arity {found}, expected {expected}")]
    WrongArity { name: String, expected: usize, found: usize },
    #[error("dimension mismatch in table `{op}`: {detail}")]
    DimensionMismatch { op: String, detail: String },
    #[error("entry out of range in table `{op}`: {value} is not below {size}")]
    EntryOutOfRange { op: String, value: usize, size: usize },
    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("exponent must be positive for a bare power")]
    ZeroPower,
    #[error("element {0} out of range")]
    ElementOutOfRange(usize),
    #[error("parameter n must be at least 1")]
    InvalidN,
    #[error("malformed algebra json: {0}")]
    Json(String),
}

/// An operation symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols with unique names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    ops: Vec<OpSymbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(ops: impl IntoIterator<Item = (S, usize)>) -> Result<Self, AlgebraError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (name, arity) in ops {
            let name = name.into();
            if !seen.insert(name.clone()) {
                return Err(AlgebraError::DuplicateOp(name));
            }
            out.push(OpSymbol { name, arity });
        }
        Ok(Signature { ops: out })
    }

    /// `add` and `mul`, both binary.
    pub fn semiring() -> Self {
        Signature::new([("add", 2), ("mul", 2)]).expect("distinct names")
    }

    /// `mul` (binary) and `inv` (unary).
    pub fn group() -> Self {
        Signature::new([("mul", 2), ("inv", 1)]).expect("distinct names")
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// Appends a symbol, failing on a name clash.
    pub fn with_op(&self, name: &str, arity: usize) -> Result<Signature, AlgebraError> {
        if self.contains(name) {
            return Err(AlgebraError::DuplicateOp(name.to_string()));
        }
        let mut ops = self.ops.clone();
        ops.push(OpSymbol { name: name.to_string(), arity });
        Ok(Signature { ops })
    }
}

/// A finite algebra: universe `0..size`, one table per operation symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinAlgebra {
    size: usize,
    signature: Signature,
    tables: Vec<Vec<Element>>,
    labels: Option<Vec<String>>,
}

fn pow_usize(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

impl FinAlgebra {
    /// Validating constructor. Tables are flat, in signature order.
    pub fn new(
        size: usize,
        signature: Signature,
        tables: Vec<Vec<Element>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyUniverse);
        }
        if tables.len() != signature.len() {
            return Err(AlgebraError::DimensionMismatch {
                op: "<signature>".into(),
                detail: format!("{} tables for {} operations", tables.len(), signature.len()),
            });
        }
        for (sym, table) in signature.ops().iter().zip(&tables) {
            let expected = pow_usize(size, sym.arity).ok_or_else(|| AlgebraError::DimensionMismatch {
                op: sym.name.clone(),
                detail: "table too large".into(),
            })?;
            if table.len() != expected {
                return Err(AlgebraError::DimensionMismatch {
                    op: sym.name.clone(),
                    detail: format!("expected {} entries, found {}", expected, table.len()),
                });
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= size) {
                return Err(AlgebraError::EntryOutOfRange { op: sym.name.clone(), value: bad, size });
            }
        }
        if let Some(l) = &labels {
            if l.len() != size {
                return Err(AlgebraError::LabelCount { expected: size, found: l.len() });
            }
        }
        Ok(FinAlgebra { size, signature, tables, labels })
    }

    /// Builds an algebra from nested JSON-style tables (`tables[i]` nested
    /// `arity` levels deep; a nullary table is a bare number).
    pub fn from_nested(
        size: usize,
        signature: Signature,
        tables: &[Value],
        labels: Option<Vec<String>>,
    ) -> Result<Self, AlgebraError> {
        if tables.len() != signature.len() {
            return Err(AlgebraError::DimensionMismatch {
                op: "<signature>".into(),
                detail: format!("{} tables for {} operations", tables.len(), signature.len()),
            });
        }
        let mut flat = Vec::with_capacity(tables.len());
        for (sym, t) in signature.ops().iter().zip(tables) {
            let mut out = Vec::new();
            flatten_table(&sym.name, t, sym.arity, size, &mut out)?;
            flat.push(out);
        }
        FinAlgebra::new(size, signature, flat, labels)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn table(&self, op: usize) -> &[Element] {
        &self.tables[op]
    }

    pub fn tables(&self) -> &[Vec<Element>] {
        &self.tables
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, e: Element) -> String {
        match &self.labels {
            Some(l) => l[e].clone(),
            None => e.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, AlgebraError> {
        if labels.len() != self.size {
            return Err(AlgebraError::LabelCount { expected: self.size, found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// Index of the named operation, checking its arity.
    pub fn op_index(&self, name: &str, arity: usize) -> Result<usize, AlgebraError> {
        let i = self.signature.index_of(name).ok_or_else(|| AlgebraError::MissingOp(name.into()))?;
        let found = self.signature.ops()[i].arity;
        if found != arity {
            return Err(AlgebraError::WrongArity { name: name.into(), expected: arity, found });
        }
        Ok(i)
    }

    pub fn apply(&self, op: usize, args: &[Element]) -> Element {
        let mut idx = 0;
        for &a in args {
            idx = idx * self.size + a;
        }
        self.tables[op][idx]
    }

    #[inline]
    pub fn binary(&self, op: usize, a: Element, b: Element) -> Element {
        self.tables[op][a * self.size + b]
    }

    #[inline]
    pub fn unary(&self, op: usize, a: Element) -> Element {
        self.tables[op][a]
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size
    }

    /// View as a semiring with binary `add` and `mul`.
    pub fn semiring(&self) -> Result<Semiring<'_>, AlgebraError> {
        Ok(Semiring { alg: self, add: self.op_index("add", 2)?, mul: self.op_index("mul", 2)? })
    }

    /// Serializes to the JSON algebra format.
    pub fn to_json(&self) -> Value {
        let signature: Vec<Value> =
            self.signature.ops().iter().map(|o| json!([o.name, o.arity])).collect();
        let mut tables = Map::new();
        for (sym, t) in self.signature.ops().iter().zip(&self.tables) {
            tables.insert(sym.name.clone(), nest_table(t, sym.arity, self.size));
        }
        let mut obj = Map::new();
        obj.insert("size".into(), json!(self.size));
        obj.insert("signature".into(), Value::Array(signature));
        obj.insert("tables".into(), Value::Object(tables));
        if let Some(l) = &self.labels {
            obj.insert("labels".into(), json!(l));
        }
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        let bad = |m: &str| AlgebraError::Json(m.to_string());
        let size = v.get("size").and_then(Value::as_u64).ok_or_else(|| bad("missing size"))? as usize;
        let sig_v = v.get("signature").and_then(Value::as_array).ok_or_else(|| bad("missing signature"))?;
        let mut ops = Vec::new();
        for s in sig_v {
            let pair = s.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("signature entries are [name, arity]"))?;
            let name = pair[0].as_str().ok_or_else(|| bad("operation name must be a string"))?;
            let arity = pair[1].as_u64().ok_or_else(|| bad("arity must be a non-negative integer"))?;
            ops.push((name.to_string(), arity as usize));
        }
        let signature = Signature::new(ops)?;
        let tables_v = v.get("tables").and_then(Value::as_object).ok_or_else(|| bad("missing tables"))?;
        let mut tables = Vec::new();
        for sym in signature.ops() {
            let t = tables_v.get(&sym.name).ok_or_else(|| AlgebraError::MissingOp(sym.name.clone()))?;
            tables.push(t.clone());
        }
        let labels = match v.get("labels") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(
                a.iter()
                    .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("labels must be strings")))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            Some(_) => return Err(bad("labels must be an array")),
        };
        FinAlgebra::from_nested(size, signature, &tables, labels)
    }
}

fn flatten_table(op: &str, v: &Value, depth: usize, size: usize, out: &mut Vec<Element>) -> Result<(), AlgebraError> {
    if depth == 0 {
        let x = v.as_u64().ok_or_else(|| AlgebraError::DimensionMismatch {
            op: op.into(),
            detail: "expected an element index".into(),
        })? as usize;
        if x >= size {
            return Err(AlgebraError::EntryOutOfRange { op: op.into(), value: x, size });
        }
        out.push(x);
        return Ok(());
    }
    let arr = v.as_array().ok_or_else(|| AlgebraError::DimensionMismatch {
        op: op.into(),
        detail: "expected a nested array".into(),
    })?;
    if arr.len() != size {
        return Err(AlgebraError::DimensionMismatch {
            op: op.into(),
            detail: format!("ragged table: row of length {} in algebra of size {}", arr.len(), size),
        });
    }
    for item in arr {
        flatten_table(op, item, depth - 1, size, out)?;
    }
    Ok(())
}

fn nest_table(t: &[Element], arity: usize, size: usize) -> Value {
    if arity == 0 {
        return json!(t[0]);
    }
    if arity == 1 {
        return json!(t);
    }
    let stride = t.len() / size;
    Value::Array((0..size).map(|i| nest_table(&t[i * stride..(i + 1) * stride], arity - 1, size)).collect())
}

/// Borrowed semiring view resolving the `add`/`mul` op indices once.
#[derive(Clone, Copy)]
pub struct Semiring<'a> {
    alg: &'a FinAlgebra,
    add: usize,
    mul: usize,
}

impl<'a> Semiring<'a> {
    pub fn algebra(&self) -> &'a FinAlgebra {
        self.alg
    }

    pub fn size(&self) -> usize {
        self.alg.size
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        self.alg.binary(self.add, a, b)
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.alg.binary(self.mul, a, b)
    }

    /// `s^k` for `k >= 1`.
    pub fn pow(&self, s: Element, k: u64) -> Element {
        debug_assert!(k >= 1);
        let mut acc = s;
        for _ in 1..k {
            acc = self.mul(acc, s);
        }
        acc
    }

    /// `M(s) = s + s^n`.
    pub fn m(&self, s: Element, n: u64) -> Element {
        self.add(s, self.pow(s, n))
    }

    pub fn is_idempotent(&self, e: Element) -> bool {
        self.mul(e, e) == e
    }

    pub fn idempotents(&self) -> Vec<Element> {
        self.alg.elements().filter(|&e| self.is_idempotent(e)).collect()
    }
}

/// `make_algebra`: validated construction from flat tables.
/// Flat table of an `arity`-ary operation on `0..k`, first argument most
/// significant.
pub fn tabulate(k: usize, arity: usize, mut f: impl FnMut(&[Element]) -> Element) -> Vec<Element> {
    let total = k.pow(arity as u32);
    let mut out = Vec::with_capacity(total);
    let mut args = vec![0; arity];
    for _ in 0..total {
        out.push(f(&args));
        for i in (0..arity).rev() {
            args[i] += 1;
            if args[i] < k {
                break;
            }
            args[i] = 0;
        }
    }
    out
}

pub fn make_algebra(size: usize, signature: Signature, tables: Vec<Vec<Element>>) -> Result<FinAlgebra, AlgebraError> {
    FinAlgebra::new(size, signature, tables, None)
}

fn mul_index(s: &FinAlgebra) -> Result<usize, AlgebraError> {
    s.op_index("mul", 2)
}

/// All multiplicative idempotents, ascending.
pub fn idempotents(s: &FinAlgebra) -> Result<Vec<Element>, AlgebraError> {
    let m = mul_index(s)?;
    Ok(s.elements().filter(|&e| s.binary(m, e, e) == e).collect())
}

/// `s^k` under `mul`; `k = 0` is rejected.
pub fn power(s: &FinAlgebra, x: Element, k: u64) -> Result<Element, AlgebraError> {
    if k == 0 {
        return Err(AlgebraError::ZeroPower);
    }
    if x >= s.size() {
        return Err(AlgebraError::ElementOutOfRange(x));
    }
    let m = mul_index(s)?;
    let mut acc = x;
    for _ in 1..k {
        acc = s.binary(m, acc, x);
    }
    Ok(acc)
}

/// `M(x) = x + x^n`.
pub fn m_operator(s: &FinAlgebra, x: Element, n: u64) -> Result<Element, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::InvalidN);
    }
    if x >= s.size() {
        return Err(AlgebraError::ElementOutOfRange(x));
    }
    Ok(s.semiring()?.m(x, n))
}

/// Checks the ai-semiring axioms directly on the tables. On failure the
/// witness names the axiom and the lexicographically least offending triple.
pub fn check_ai_semiring(s: &FinAlgebra) -> Result<Report, AlgebraError> {
    let sr = s.semiring()?;
    let k = s.size();
    let claim = "ai-semiring";
    let mut evaluations = 0u64;
    let fail = |axiom: &str, triple: &[Element], evaluations: u64| {
        let labels: Vec<String> = triple.iter().map(|&e| s.label(e)).collect();
        Report::fail(claim, format!("{axiom} fails at {}", labels.join(", ")))
            .with_witness(json!({"axiom": axiom, "elements": triple, "labels": labels}))
            .with_evaluations(evaluations)
    };
    for a in 0..k {
        evaluations += 1;
        if sr.add(a, a) != a {
            return Ok(fail("additive idempotency", &[a], evaluations));
        }
    }
    for a in 0..k {
        for b in 0..k {
            evaluations += 1;
            if sr.add(a, b) != sr.add(b, a) {
                return Ok(fail("additive commutativity", &[a, b], evaluations));
            }
        }
    }
    type Axiom<'s> = (&'static str, Box<dyn Fn(Element, Element, Element) -> bool + 's>);
    let axioms: [Axiom; 4] = [
        ("additive associativity", Box::new(|a, b, c| sr.add(a, sr.add(b, c)) == sr.add(sr.add(a, b), c))),
        ("multiplicative associativity", Box::new(|a, b, c| sr.mul(a, sr.mul(b, c)) == sr.mul(sr.mul(a, b), c))),
        ("left distributivity", Box::new(|a, b, c| sr.mul(a, sr.add(b, c)) == sr.add(sr.mul(a, b), sr.mul(a, c)))),
        ("right distributivity", Box::new(|a, b, c| sr.mul(sr.add(a, b), c) == sr.add(sr.mul(a, c), sr.mul(b, c)))),
    ];
    for (name, holds) in &axioms {
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    evaluations += 1;
                    if !holds(a, b, c) {
                        return Ok(fail(name, &[a, b, c], evaluations));
                    }
                }
            }
        }
    }
    Ok(Report::pass(claim, format!("all ai-semiring axioms hold on {k} elements")).with_evaluations(evaluations))
}

/// Idempotents of an Sr_n member are exactly the n-th powers and form a
/// subsemiring.
pub fn check_idempotent_powers(s: &FinAlgebra, n: u64) -> Result<Report, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::InvalidN);
    }
    let sr = s.semiring()?;
    let claim = "idempotent-powers";
    let idem: BTreeSet<Element> = sr.idempotents().into_iter().collect();
    let powers: BTreeSet<Element> = s.elements().map(|x| sr.pow(x, n)).collect();
    if idem != powers {
        return Ok(Report::fail(claim, "idempotents differ from n-th powers").with_witness(json!({
            "idempotents": idem, "powers": powers
        })));
    }
    for &e in &idem {
        for &f in &idem {
            for (op, v) in [("add", sr.add(e, f)), ("mul", sr.mul(e, f))] {
                if !idem.contains(&v) {
                    return Ok(Report::fail(claim, format!("idempotents not closed under {op}"))
                        .with_witness(json!({"op": op, "pair": [e, f], "result": v})));
                }
            }
        }
    }
    Ok(Report::pass(claim, format!("{} idempotents = n-th powers, closed under add and mul", idem.len())))
}
