//! Flat extensions, semidiscriminator extensions, products, subalgebras,
//! quotients and the Clifford decomposition.

use crate::algebra::{tabulate, AlgebraError, Element, FinAlgebra, Signature};
use crate::classes::{check_in_class, Class};
use crate::congruences::is_congruence;
use crate::groups::Group;
use crate::partition::Partition;
use crate::report::Report;
use crate::terms::EvalError;
use serde_json::json;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("operation `{0}` already present in the signature")]
    NameClash(String),
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("subset is not closed under `{0}`")]
    NotClosed(String),
    #[error("partition is not a congruence")]
    NotACongruence,
    #[error("idempotents {0} and {1} do not commute")]
    IdempotentsDoNotCommute(Element, Element),
    #[error("not a semilattice of groups: {0}")]
    NotClifford(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatMode {
    /// Base is a group; the result has `add` (flat rule) and `mul`.
    GroupToSemiring,
    /// Every base op is kept, absorbing at the new element, plus a flat `meet`.
    GenericWithMeet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlatExtension {
    pub base: FinAlgebra,
    pub result: FinAlgebra,
    /// `embedding[x]` is the image of base element `x` (always `x + 1`).
    pub embedding: Vec<Element>,
}

fn labels_or_indices(a: &FinAlgebra) -> Vec<String> {
    a.elements().map(|x| a.label(x)).collect()
}

/// Adjoins an absorbing element at index 0 and shifts the base by one.
/// In group mode only `mul` is kept and `add` follows the flat rule
/// (`a + a = a`, otherwise `0`); in generic mode the flat op is `meet`.
pub fn flat_extension(a: &FinAlgebra, mode: FlatMode) -> Result<FlatExtension, ConstructionError> {
    let k = a.size() + 1;
    let flat = |args: &[Element]| if args[0] == args[1] { args[0] } else { 0 };
    let lift = |op: usize, arity: usize| {
        tabulate(k, arity, |args| {
            if args.contains(&0) {
                0
            } else {
                let base: Vec<Element> = args.iter().map(|x| x - 1).collect();
                a.apply(op, &base) + 1
            }
        })
    };
    let (signature, tables, zero) = match mode {
        FlatMode::GroupToSemiring => {
            let m = a.op_index("mul", 2)?;
            (Signature::semiring(), vec![tabulate(k, 2, flat), lift(m, 2)], "0")
        }
        FlatMode::GenericWithMeet => {
            if a.signature().contains("meet") {
                return Err(ConstructionError::NameClash("meet".into()));
            }
            let signature = a.signature().with_op("meet", 2)?;
            let mut tables: Vec<Vec<Element>> =
                a.signature().ops().iter().enumerate().map(|(i, o)| lift(i, o.arity)).collect();
            tables.push(tabulate(k, 2, flat));
            (signature, tables, "inf")
        }
    };
    let mut labels = vec![zero.to_string()];
    labels.extend(labels_or_indices(a));
    let result = FinAlgebra::new(k, signature, tables, Some(labels))?;
    Ok(FlatExtension { base: a.clone(), result, embedding: (1..k).collect() })
}

/// The flat extension `G^♭` of a group, as an ai-semiring.
pub fn flat_group(g: &Group) -> FinAlgebra {
    flat_extension(g.algebra(), FlatMode::GroupToSemiring).expect("groups have mul").result
}

/// Adds the right projection `rhd` (`a ▷ b = b`) and flat-extends with `meet`.
pub fn pointed_semidiscriminator(a: &FinAlgebra) -> Result<FinAlgebra, ConstructionError> {
    for name in ["rhd", "meet"] {
        if a.signature().contains(name) {
            return Err(ConstructionError::NameClash(name.into()));
        }
    }
    let signature = a.signature().with_op("rhd", 2)?;
    let mut tables = a.tables().to_vec();
    tables.push(tabulate(a.size(), 2, |args| args[1]));
    let with_rhd = FinAlgebra::new(a.size(), signature, tables, a.labels().map(<[String]>::to_vec))?;
    Ok(flat_extension(&with_rhd, FlatMode::GenericWithMeet)?.result)
}

/// Checks `(x ∧ y) ▷ z = z` when `x = y ≠ ∞` and `∞` otherwise, on all triples.
pub fn check_semidiscriminator(ps: &FinAlgebra) -> Result<Report, AlgebraError> {
    let claim = "pointed-semidiscriminator";
    let meet = ps.op_index("meet", 2)?;
    let rhd = ps.op_index("rhd", 2)?;
    let k = ps.size();
    for x in 0..k {
        for y in 0..k {
            for z in 0..k {
                let got = ps.binary(rhd, ps.binary(meet, x, y), z);
                let want = if x == y && x != 0 { z } else { 0 };
                if got != want {
                    return Ok(Report::fail(claim, format!("(x∧y)▷z = {} but expected {}", ps.label(got), ps.label(want)))
                        .with_witness(json!({"x": ps.label(x), "y": ps.label(y), "z": ps.label(z)})));
                }
            }
        }
    }
    Ok(Report::pass(claim, format!("all {} triples", k * k * k)).with_evaluations((k * k * k) as u64))
}

/// On `G^♭` with `n` a multiple of the exponent: `t(x, y) = x^n*y` agrees with
/// `x ▷ y` of `ps(G)`, and `t(x + y, z)` is the semidiscriminator.
pub fn check_power_term_rhd(g: &Group, n: u64) -> Result<Report, ConstructionError> {
    let claim = format!("power-term-rhd-{}-n{n}", g.name());
    if n == 0 || !n.is_multiple_of(g.exponent()) {
        return Ok(Report::inapplicable(claim, format!("exponent {} does not divide n = {n}", g.exponent())));
    }
    let flat = flat_group(g);
    let s = flat.semiring()?;
    let ps = pointed_semidiscriminator(g.algebra())?;
    let rhd = ps.op_index("rhd", 2)?;
    let meet = ps.op_index("meet", 2)?;
    let k = flat.size();
    let t = |x, y| s.mul(s.pow(x, n), y);
    for x in 0..k {
        for y in 0..k {
            if t(x, y) != ps.binary(rhd, x, y) {
                return Ok(Report::fail(claim, "x^n*y differs from x ▷ y").with_witness(json!({"x": x, "y": y})));
            }
            if s.add(x, y) != ps.binary(meet, x, y) {
                return Ok(Report::fail(claim, "+ differs from ∧").with_witness(json!({"x": x, "y": y})));
            }
            for z in 0..k {
                let want = if x == y && x != 0 { z } else { 0 };
                if t(s.add(x, y), z) != want {
                    return Ok(Report::fail(claim, "(x + y)^n*z is not the semidiscriminator")
                        .with_witness(json!({"x": x, "y": y, "z": z})));
                }
            }
        }
    }
    Ok(Report::pass(claim, format!("{k}^3 triples")).with_evaluations((k * k * k) as u64))
}

/// Direct product; the pair `(s, t)` sits at index `s*|T| + t`.
pub fn product(s: &FinAlgebra, t: &FinAlgebra) -> Result<FinAlgebra, ConstructionError> {
    if s.signature() != t.signature() {
        return Err(ConstructionError::SignatureMismatch);
    }
    let m = t.size();
    let k = s.size() * m;
    let tables = s
        .signature()
        .ops()
        .iter()
        .enumerate()
        .map(|(op, sym)| {
            tabulate(k, sym.arity, |args| {
                let left: Vec<Element> = args.iter().map(|x| x / m).collect();
                let right: Vec<Element> = args.iter().map(|x| x % m).collect();
                s.apply(op, &left) * m + t.apply(op, &right)
            })
        })
        .collect();
    let labels = (0..k).map(|x| format!("({},{})", s.label(x / m), t.label(x % m))).collect();
    Ok(FinAlgebra::new(k, s.signature().clone(), tables, Some(labels))?)
}

/// Restricts `a` to a closed subset, re-indexed in increasing order.
pub fn restrict_to(a: &FinAlgebra, subset: &[Element]) -> Result<FinAlgebra, ConstructionError> {
    let mut index = vec![usize::MAX; a.size()];
    for (i, &x) in subset.iter().enumerate() {
        index[x] = i;
    }
    let k = subset.len();
    let mut tables = Vec::with_capacity(a.signature().len());
    for (op, sym) in a.signature().ops().iter().enumerate() {
        let mut closed = true;
        let table = tabulate(k, sym.arity, |args| {
            let parent: Vec<Element> = args.iter().map(|&i| subset[i]).collect();
            let v = index[a.apply(op, &parent)];
            if v == usize::MAX {
                closed = false;
                0
            } else {
                v
            }
        });
        if !closed {
            return Err(ConstructionError::NotClosed(sym.name.clone()));
        }
        tables.push(table);
    }
    let labels = subset.iter().map(|&x| a.label(x)).collect();
    Ok(FinAlgebra::new(k, a.signature().clone(), tables, Some(labels))?)
}

/// Closure of `subset` under every operation (constants included).
pub fn closure(a: &FinAlgebra, subset: &[Element]) -> Vec<Element> {
    let mut set: BTreeSet<Element> = subset.iter().copied().collect();
    loop {
        let current: Vec<Element> = set.iter().copied().collect();
        let before = set.len();
        for (op, sym) in a.signature().ops().iter().enumerate() {
            let m = current.len();
            if m == 0 && sym.arity > 0 {
                continue;
            }
            let total = m.pow(sym.arity as u32);
            let mut args = vec![0; sym.arity];
            for idx in 0..total {
                let mut r = idx;
                for slot in args.iter_mut().rev() {
                    *slot = current[r % m];
                    r /= m;
                }
                set.insert(a.apply(op, &args));
            }
        }
        if set.len() == before {
            return current;
        }
    }
}

/// Generated subalgebra with the inclusion map (subalgebra index -> parent).
pub fn subalgebra_generated(a: &FinAlgebra, subset: &[Element]) -> Result<(FinAlgebra, Vec<Element>), ConstructionError> {
    if let Some(&bad) = subset.iter().find(|&&x| x >= a.size()) {
        return Err(AlgebraError::ElementOutOfRange(bad).into());
    }
    let inclusion = closure(a, subset);
    if inclusion.is_empty() {
        return Err(AlgebraError::EmptyUniverse.into());
    }
    Ok((restrict_to(a, &inclusion)?, inclusion))
}

/// Quotient by a congruence; block `i` (numbered by least member) is element
/// `i`, labelled by its least member. Returns the projection as well.
pub fn quotient(a: &FinAlgebra, theta: &Partition) -> Result<(FinAlgebra, Vec<Element>), ConstructionError> {
    if theta.len() != a.size() || !is_congruence(a, theta) {
        return Err(ConstructionError::NotACongruence);
    }
    let reps = theta.representatives();
    let k = reps.len();
    let tables = a
        .signature()
        .ops()
        .iter()
        .enumerate()
        .map(|(op, sym)| {
            tabulate(k, sym.arity, |args| {
                let parent: Vec<Element> = args.iter().map(|&b| reps[b]).collect();
                theta.block_of(a.apply(op, &parent))
            })
        })
        .collect();
    let labels = reps.iter().map(|&r| a.label(r)).collect();
    let q = FinAlgebra::new(k, a.signature().clone(), tables, Some(labels))?;
    Ok((q, theta.block_ids().to_vec()))
}

/// `S` as a semilattice `Y` of groups `G_α = { s : s^n = α }`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordDecomposition {
    /// The idempotents, ascending; `Y` is this set under `mul`.
    pub semilattice: Vec<Element>,
    /// `(α, G_α)` in the order of `semilattice`.
    pub components: Vec<(Element, Vec<Element>)>,
    /// `component_of[s]` is the position of `s^n` in `semilattice`.
    pub component_of: Vec<usize>,
}

/// Decomposes `s` and verifies each component is a group with identity `α`
/// and that `G_α G_β ⊆ G_{αβ}`.
pub fn clifford_decompose(a: &FinAlgebra, n: u64) -> Result<CliffordDecomposition, ConstructionError> {
    if n == 0 {
        return Err(AlgebraError::InvalidN.into());
    }
    let s = a.semiring()?;
    let idem = s.idempotents();
    for (i, &e) in idem.iter().enumerate() {
        for &f in &idem[i + 1..] {
            if s.mul(e, f) != s.mul(f, e) {
                return Err(ConstructionError::IdempotentsDoNotCommute(e, f));
            }
        }
    }
    let mut component_of = Vec::with_capacity(a.size());
    for x in a.elements() {
        let alpha = s.pow(x, n);
        let pos = idem
            .binary_search(&alpha)
            .map_err(|_| ConstructionError::NotClifford(format!("{}^{n} is not idempotent", a.label(x))))?;
        component_of.push(pos);
    }
    let mut components: Vec<(Element, Vec<Element>)> = idem.iter().map(|&e| (e, Vec::new())).collect();
    for x in a.elements() {
        components[component_of[x]].1.push(x);
    }
    for (alpha, members) in &components {
        for &x in members {
            if s.mul(*alpha, x) != x || s.mul(x, *alpha) != x {
                return Err(ConstructionError::NotClifford(format!(
                    "{} is not an identity for {}",
                    a.label(*alpha),
                    a.label(x)
                )));
            }
            if !members.iter().any(|&y| s.mul(x, y) == *alpha && s.mul(y, x) == *alpha) {
                return Err(ConstructionError::NotClifford(format!("{} has no inverse in its component", a.label(x))));
            }
        }
    }
    for x in a.elements() {
        for y in a.elements() {
            let (ex, ey) = (idem[component_of[x]], idem[component_of[y]]);
            let target = idem.binary_search(&s.mul(ex, ey)).expect("idempotents commute, so ef is idempotent");
            if component_of[s.mul(x, y)] != target {
                return Err(ConstructionError::NotClifford(format!(
                    "{}*{} leaves the product component",
                    a.label(x),
                    a.label(y)
                )));
            }
        }
    }
    Ok(CliffordDecomposition { semilattice: idem, components, component_of })
}

/// The inverse of each element within its Clifford component. Agrees with
/// `s^(2n-1)`, which is checked.
pub fn clifford_inverse(a: &FinAlgebra, n: u64) -> Result<Vec<Element>, ConstructionError> {
    let d = clifford_decompose(a, n)?;
    let s = a.semiring()?;
    let mut inv = Vec::with_capacity(a.size());
    for x in a.elements() {
        let (alpha, members) = &d.components[d.component_of[x]];
        let y = *members.iter().find(|&&y| s.mul(x, y) == *alpha).expect("checked by decomposition");
        if s.pow(x, 2 * n - 1) != y {
            return Err(ConstructionError::NotClifford(format!("inverse of {} is not its power", a.label(x))));
        }
        inv.push(y);
    }
    Ok(inv)
}

/// `a` with an extra unary `inv` holding the Clifford inverse.
pub fn with_clifford_inverse(a: &FinAlgebra, n: u64) -> Result<FinAlgebra, ConstructionError> {
    if a.signature().contains("inv") {
        return Err(ConstructionError::NameClash("inv".into()));
    }
    let inv = clifford_inverse(a, n)?;
    let mut tables = a.tables().to_vec();
    tables.push(inv);
    Ok(FinAlgebra::new(a.size(), a.signature().with_op("inv", 1)?, tables, a.labels().map(<[String]>::to_vec))?)
}

/// In an M_n member: if `J` is a mul-ideal, `H` a subgroup disjoint from
/// `J` and `J ∪ H` a mul-ideal, then `a + b ∈ J` for distinct `a, b ∈ J ∪ H`.
pub fn verify_ideal_lemma(a: &FinAlgebra, j: &[Element], h: &[Element], n: u64, budget: u64) -> Result<Report, EvalError> {
    let claim = "ideal-sum";
    let class = check_in_class(a, Class::M, n, budget)?;
    if !class.is_pass() {
        return Ok(Report::inapplicable(claim, format!("not in M_{n}: {}", class.detail)));
    }
    let s = a.semiring()?;
    let jset: BTreeSet<Element> = j.iter().copied().collect();
    let hset: BTreeSet<Element> = h.iter().copied().collect();
    if let Some(&bad) = jset.iter().chain(&hset).find(|&&x| x >= a.size()) {
        return Err(AlgebraError::ElementOutOfRange(bad).into());
    }
    let is_ideal = |set: &BTreeSet<Element>| {
        !set.is_empty() && set.iter().all(|&x| a.elements().all(|y| set.contains(&s.mul(x, y)) && set.contains(&s.mul(y, x))))
    };
    if !is_ideal(&jset) {
        return Ok(Report::inapplicable(claim, "J is not a multiplicative ideal"));
    }
    let identity = hset.iter().copied().find(|&e| hset.iter().all(|&x| s.mul(e, x) == x && s.mul(x, e) == x));
    let is_group = match identity {
        Some(e) => hset.iter().all(|&x| {
            hset.iter().all(|&y| hset.contains(&s.mul(x, y))) && hset.iter().any(|&y| s.mul(x, y) == e && s.mul(y, x) == e)
        }),
        None => false,
    };
    if !is_group {
        return Ok(Report::inapplicable(claim, "H is not a subgroup"));
    }
    if !jset.is_disjoint(&hset) {
        return Ok(Report::inapplicable(claim, "J and H intersect"));
    }
    let union: BTreeSet<Element> = jset.union(&hset).copied().collect();
    if !is_ideal(&union) {
        return Ok(Report::inapplicable(claim, "J ∪ H is not a multiplicative ideal"));
    }
    let mut checked = 0u64;
    for &x in &union {
        for &y in &union {
            if x < y {
                checked += 1;
                if !jset.contains(&s.add(x, y)) {
                    return Ok(Report::fail(claim, format!("{} + {} is not in J", a.label(x), a.label(y)))
                        .with_witness(json!({"a": a.label(x), "b": a.label(y)}))
                        .with_evaluations(checked));
                }
            }
        }
    }
    Ok(Report::pass(claim, format!("{checked} distinct pairs sum into J")).with_evaluations(checked))
}
