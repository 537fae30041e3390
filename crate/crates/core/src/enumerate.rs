//! Exhaustive generation of small ai-semirings up to isomorphism.
//!
//! Additive reducts are semilattices; these are generated first and reduced
//! to lexicographically least representatives `A`. For each `A` the
//! multiplication table is filled cell by cell, pruning on associativity and
//! both distributive laws, and a completed table `M` is kept only when it is
//! least in its orbit under `Aut(A)`. The pair `(A, M)` is then the least
//! relabelling of the algebra, i.e. its canonical form.

use crate::algebra::{Element, FinAlgebra, Signature};
use crate::classes::{in_class, Class};
use crate::congruences::{check_flat_decomposition, check_tau_extensions, classify_si, restriction_check};
use crate::iso::{canonical_form, for_each_permutation, relabelled_tables};
use crate::report::{combine, Report, Verdict};
use crate::terms::{satisfies_all, schema, EvalError, DEFAULT_BUDGET};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};
use thiserror::Error;

pub const MAX_ORDER: usize = 5;
pub const CENSUS_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("order {0} outside 1..=5")]
    OrderOutOfRange(usize),
    #[error("order 5 must be requested explicitly")]
    OrderNotEnabled,
    #[error("n must be at least 1")]
    InvalidN,
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("time limit of {0:?} exceeded")]
    TimeLimit(Duration),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("malformed census: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Filter {
    AllAi,
    Class(Class),
}

impl Filter {
    pub fn key(self) -> &'static str {
        match self {
            Filter::AllAi => "all-ai",
            Filter::Class(Class::Sr) => "Srn",
            Filter::Class(Class::M) => "Mn",
            Filter::Class(Class::N) => "Nn",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" | "all-ai" | "ai" => Ok(Filter::AllAi),
            other => other.parse::<Class>().map(Filter::Class),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnumSpec {
    pub order: usize,
    pub filter: Filter,
    pub n: u64,
    pub up_to_iso: bool,
}

impl EnumSpec {
    pub fn new(order: usize, filter: Filter, n: u64) -> Self {
        EnumSpec { order, filter, n, up_to_iso: true }
    }

    /// The string hashed into the census provenance.
    pub fn config_string(&self) -> String {
        format!(
            "flatcliff-census/v{CENSUS_FORMAT_VERSION} order={} filter={} n={} up_to_iso={}",
            self.order, self.filter, self.n, self.up_to_iso
        )
    }

    pub fn provenance(&self) -> String {
        hex::encode(Sha256::digest(self.config_string().as_bytes()))
    }
}

/// Resource limits for the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    /// Maximum number of search-tree nodes over all branches.
    pub budget: u64,
    pub allow_order5: bool,
    pub time_limit: Option<Duration>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { budget: DEFAULT_BUDGET, allow_order5: false, time_limit: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub spec: EnumSpec,
    pub algebras: Vec<FinAlgebra>,
    /// Members of each class among all ai-semirings of this order (up to
    /// isomorphism), keyed by filter name.
    pub counts: BTreeMap<String, usize>,
    pub provenance: String,
}

impl Census {
    pub fn to_json(&self) -> Value {
        json!({
            "metadata": {
                "version": CENSUS_FORMAT_VERSION,
                "order": self.spec.order,
                "filter": self.spec.filter.key(),
                "n": self.spec.n,
                "up_to_iso": self.spec.up_to_iso,
                "count": self.algebras.len(),
                "counts": self.counts,
                "provenance": self.provenance,
            },
            "algebras": self.algebras.iter().map(FinAlgebra::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Census, EnumError> {
        let bad = |m: &str| EnumError::Malformed(m.to_string());
        let meta = v.get("metadata").ok_or_else(|| bad("missing metadata"))?;
        let order = meta.get("order").and_then(Value::as_u64).ok_or_else(|| bad("order"))? as usize;
        let filter: Filter =
            meta.get("filter").and_then(Value::as_str).ok_or_else(|| bad("filter"))?.parse().map_err(|e: String| bad(&e))?;
        let n = meta.get("n").and_then(Value::as_u64).ok_or_else(|| bad("n"))?;
        let up_to_iso = meta.get("up_to_iso").and_then(Value::as_bool).ok_or_else(|| bad("up_to_iso"))?;
        let counts = serde_json::from_value(meta.get("counts").cloned().ok_or_else(|| bad("counts"))?)
            .map_err(|e| bad(&e.to_string()))?;
        let provenance = meta.get("provenance").and_then(Value::as_str).ok_or_else(|| bad("provenance"))?.to_string();
        let algebras = v
            .get("algebras")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("algebras"))?
            .iter()
            .map(|a| FinAlgebra::from_json(a).map_err(|e| bad(&e.to_string())))
            .collect::<Result<_, _>>()?;
        Ok(Census { spec: EnumSpec { order, filter, n, up_to_iso }, algebras, counts, provenance })
    }
}

const UNDEF: u8 = u8::MAX;

/// Shared node counter and deadline.
struct Limits {
    nodes: AtomicU64,
    budget: u64,
    deadline: Option<Instant>,
    aborted: AtomicBool,
}

impl Limits {
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        if n.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.aborted.store(true, Ordering::Relaxed);
                    return false;
                }
            }
        }
        !self.aborted.load(Ordering::Relaxed)
    }
}

/// All semilattice tables on `0..k` (commutative, idempotent, associative).
fn labelled_semilattices(k: usize) -> Vec<Vec<u8>> {
    fn rec(k: usize, cells: &[(usize, usize)], at: usize, t: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if at == cells.len() {
            out.push(t.clone());
            return;
        }
        let (i, j) = cells[at];
        for v in 0..k as u8 {
            t[i * k + j] = v;
            t[j * k + i] = v;
            if semilattice_consistent(k, t) {
                rec(k, cells, at + 1, t, out);
            }
        }
        t[i * k + j] = UNDEF;
        t[j * k + i] = UNDEF;
    }
    let mut t = vec![UNDEF; k * k];
    for i in 0..k {
        t[i * k + i] = i as u8;
    }
    let cells: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    rec(k, &cells, 0, &mut t, &mut out);
    out
}

fn semilattice_consistent(k: usize, t: &[u8]) -> bool {
    for a in 0..k {
        for b in 0..k {
            let ab = t[a * k + b];
            if ab == UNDEF {
                continue;
            }
            for c in 0..k {
                let bc = t[b * k + c];
                if bc == UNDEF {
                    continue;
                }
                let (l, r) = (t[ab as usize * k + c], t[a * k + bc as usize]);
                if l != UNDEF && r != UNDEF && l != r {
                    return false;
                }
            }
        }
    }
    true
}

fn to_elements(t: &[u8]) -> Vec<Element> {
    t.iter().map(|&x| x as Element).collect()
}

/// Semilattice tables up to isomorphism, each the least over relabellings,
/// in increasing order.
fn semilattice_representatives(k: usize) -> Vec<Vec<u8>> {
    let sig = Signature::new([("add", 2)]).expect("valid");
    let reps: BTreeSet<Vec<u8>> = labelled_semilattices(k)
        .into_iter()
        .map(|t| {
            let a = FinAlgebra::new(k, sig.clone(), vec![to_elements(&t)], None).expect("valid table");
            let (c, _) = canonical_form(&a).expect("small");
            c.table(0).iter().map(|&x| x as u8).collect()
        })
        .collect();
    reps.into_iter().collect()
}

fn automorphisms(k: usize, add: &[u8]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_permutation(k, |p| {
        let ok = (0..k).all(|x| (0..k).all(|y| p[add[x * k + y] as usize] == add[p[x] * k + p[y]] as usize));
        if ok {
            out.push(p.to_vec());
        }
    });
    out
}

struct MulSearch<'a> {
    k: usize,
    add: &'a [u8],
    mul: Vec<u8>,
    auts: &'a [Vec<usize>],
    limits: &'a Limits,
    found: Vec<Vec<u8>>,
}

impl MulSearch<'_> {
    fn consistent(&self) -> bool {
        let (k, add, m) = (self.k, self.add, &self.mul);
        let at = |a: u8, b: u8| -> u8 {
            if a == UNDEF || b == UNDEF {
                UNDEF
            } else {
                m[a as usize * k + b as usize]
            }
        };
        for a in 0..k as u8 {
            for b in 0..k as u8 {
                let ab = at(a, b);
                for c in 0..k as u8 {
                    let bc = at(b, c);
                    let (l, r) = (at(ab, c), at(a, bc));
                    if l != UNDEF && r != UNDEF && l != r {
                        return false;
                    }
                    let s = add[b as usize * k + c as usize];
                    let ac = at(a, c);
                    // a(b + c) = ab + ac
                    let lhs = at(a, s);
                    if lhs != UNDEF && ab != UNDEF && ac != UNDEF && lhs != add[ab as usize * k + ac as usize] {
                        return false;
                    }
                    // (b + c)a = ba + ca
                    let (ba, ca) = (at(b, a), at(c, a));
                    let lhs = at(s, a);
                    if lhs != UNDEF && ba != UNDEF && ca != UNDEF && lhs != add[ba as usize * k + ca as usize] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn is_orbit_least(&self) -> bool {
        let k = self.k;
        self.auts.iter().all(|p| {
            // compare M^p with M cell by cell in row-major order
            let mut inv = vec![0; k];
            for (x, &y) in p.iter().enumerate() {
                inv[y] = x;
            }
            for x in 0..k {
                for y in 0..k {
                    let image = p[self.mul[inv[x] * k + inv[y]] as usize] as u8;
                    let own = self.mul[x * k + y];
                    if image != own {
                        return image > own;
                    }
                }
            }
            true
        })
    }

    fn fill(&mut self, cell: usize) {
        if !self.limits.tick() {
            return;
        }
        if cell == self.k * self.k {
            if self.is_orbit_least() {
                self.found.push(self.mul.clone());
            }
            return;
        }
        for v in 0..self.k as u8 {
            self.mul[cell] = v;
            if self.consistent() {
                self.fill(cell + 1);
            }
        }
        self.mul[cell] = UNDEF;
    }
}

/// All ai-semirings of order `k` up to isomorphism, in canonical form and
/// sorted by their concatenated tables.
pub fn all_ai_semirings(k: usize, options: EnumOptions) -> Result<Vec<FinAlgebra>, EnumError> {
    if k == 0 || k > MAX_ORDER {
        return Err(EnumError::OrderOutOfRange(k));
    }
    if k == MAX_ORDER && !options.allow_order5 {
        return Err(EnumError::OrderNotEnabled);
    }
    let limits = Limits {
        nodes: AtomicU64::new(0),
        budget: options.budget,
        deadline: options.time_limit.map(|d| Instant::now() + d),
        aborted: AtomicBool::new(false),
    };
    let reps = semilattice_representatives(k);
    let per_rep: Vec<Vec<(Vec<u8>, Vec<u8>)>> = reps
        .par_iter()
        .map(|add| {
            let auts = automorphisms(k, add);
            let mut s = MulSearch { k, add, mul: vec![UNDEF; k * k], auts: &auts, limits: &limits, found: Vec::new() };
            s.fill(0);
            s.found.into_iter().map(|m| (add.clone(), m)).collect()
        })
        .collect();
    if limits.aborted.load(Ordering::Relaxed) {
        return match options.time_limit {
            Some(d) if limits.nodes.load(Ordering::Relaxed) <= options.budget => Err(EnumError::TimeLimit(d)),
            _ => Err(EnumError::BudgetExceeded(options.budget)),
        };
    }
    Ok(per_rep
        .into_iter()
        .flatten()
        .map(|(add, mul)| {
            FinAlgebra::new(k, Signature::semiring(), vec![to_elements(&add), to_elements(&mul)], None).expect("valid tables")
        })
        .collect())
}

/// Every distinct relabelling of `a`, sorted by tables.
fn relabellings(a: &FinAlgebra) -> Vec<FinAlgebra> {
    let k = a.size();
    let mut seen: BTreeSet<Vec<Element>> = BTreeSet::new();
    for_each_permutation(k, |p| {
        seen.insert(relabelled_tables(a, p));
    });
    seen.into_iter()
        .map(|t| FinAlgebra::new(k, a.signature().clone(), vec![t[..k * k].to_vec(), t[k * k..].to_vec()], None).expect("valid"))
        .collect()
}

pub fn enumerate(spec: EnumSpec, options: EnumOptions) -> Result<Census, EnumError> {
    if spec.n == 0 {
        return Err(EnumError::InvalidN);
    }
    let all = all_ai_semirings(spec.order, options)?;
    let memberships: Vec<[bool; 3]> = all
        .par_iter()
        .map(|a| -> Result<[bool; 3], EvalError> {
            let mut out = [false; 3];
            for (i, c) in [Class::Sr, Class::M, Class::N].into_iter().enumerate() {
                out[i] = in_class(a, c, spec.n, DEFAULT_BUDGET)?.expect("small algebras fit the budget");
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    let mut counts = BTreeMap::new();
    counts.insert(Filter::AllAi.key().to_string(), all.len());
    for (i, c) in [Class::Sr, Class::M, Class::N].into_iter().enumerate() {
        counts.insert(Filter::Class(c).key().to_string(), memberships.iter().filter(|m| m[i]).count());
    }
    let keep = |m: &[bool; 3]| match spec.filter {
        Filter::AllAi => true,
        Filter::Class(Class::Sr) => m[0],
        Filter::Class(Class::M) => m[1],
        Filter::Class(Class::N) => m[2],
    };
    let mut algebras: Vec<FinAlgebra> =
        all.into_iter().zip(&memberships).filter(|(_, m)| keep(m)).map(|(a, _)| a).collect();
    if !spec.up_to_iso {
        algebras = algebras.iter().flat_map(relabellings).collect();
        algebras.sort_by(|a, b| a.tables().cmp(b.tables()));
    }
    Ok(Census { spec, algebras, counts, provenance: spec.provenance() })
}

/// Members of the censuses of orders `1..=order_max` passing `filter`.
pub fn census_members(order_max: usize, filter: Filter, n: u64, options: EnumOptions) -> Result<Vec<FinAlgebra>, EnumError> {
    let mut out = Vec::new();
    for k in 1..=order_max {
        out.extend(enumerate(EnumSpec::new(k, filter, n), options)?.algebras);
    }
    Ok(out)
}

fn mn_members(order_max: usize, n: u64, options: EnumOptions) -> Result<Vec<FinAlgebra>, EnumError> {
    census_members(order_max, Filter::Class(Class::M), n, options)
}

fn sweep(claim: &str, reports: Vec<(usize, Report)>) -> Report {
    let verdict = combine(reports.iter().map(|(_, r)| r.verdict));
    let total = reports.len();
    let evaluations = reports.iter().map(|(_, r)| r.evaluations).sum();
    let bad = reports.iter().find(|(_, r)| !matches!(r.verdict, Verdict::Pass | Verdict::Assumed | Verdict::Inapplicable));
    let report = match bad {
        None => Report::pass(claim, format!("{total} algebras")),
        Some((i, r)) => Report::new(claim, verdict, format!("member #{i}: {}", r.detail))
            .with_witness(json!({"member": i, "report": r})),
    };
    report.with_evaluations(evaluations)
}

/// The four characterisations of subdirect irreducibility agree on every
/// `M_n` member of order at most `order_max`.
pub fn verify_prop46(order_max: usize, n: u64, options: EnumOptions) -> Result<Report, EnumError> {
    let members = mn_members(order_max, n, options)?;
    let reports = members
        .par_iter()
        .enumerate()
        .map(|(i, a)| Ok((i, classify_si(a, n, DEFAULT_BUDGET).map_err(|e| EnumError::Malformed(e.to_string()))?)))
        .collect::<Result<Vec<_>, EnumError>>()?;
    let si = reports.iter().filter(|(_, r)| r.witness.as_ref().is_some_and(|w| w["si"] == json!(true))).count();
    let mut r = sweep(&format!("si-equivalence-order{order_max}-n{n}"), reports);
    if r.is_pass() {
        r.detail = format!("{} members of M_{n}, {si} subdirectly irreducible", members.len());
    }
    Ok(r)
}

/// Every `M_n` member of order at most `order_max` is a subdirect product of
/// flat extensions of groups.
pub fn verify_flat_decompositions(order_max: usize, n: u64, options: EnumOptions) -> Result<Report, EnumError> {
    let members = mn_members(order_max, n, options)?;
    let reports = members
        .par_iter()
        .enumerate()
        .filter(|(_, a)| a.size() > 1)
        .map(|(i, a)| {
            Ok((i, check_flat_decomposition(a, n, DEFAULT_BUDGET).map_err(|e| EnumError::Malformed(e.to_string()))?))
        })
        .collect::<Result<Vec<_>, EnumError>>()?;
    Ok(sweep(&format!("subdirect-flat-order{order_max}-n{n}"), reports))
}

/// Congruences diagonal on idempotents are diagonal, on census members
/// passing `filter`.
pub fn verify_restriction(order_max: usize, filter: Filter, n: u64, options: EnumOptions) -> Result<Report, EnumError> {
    let members = census_members(order_max, filter, n, options)?;
    let reports = members
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            Ok((i, restriction_check(a, n, DEFAULT_BUDGET).map_err(|e| EnumError::Malformed(e.to_string()))?))
        })
        .collect::<Result<Vec<_>, EnumError>>()?;
    Ok(sweep(&format!("idempotent-restriction-{filter}-order{order_max}-n{n}"), reports))
}

/// Every congruence of the idempotent subalgebra extends through τ to a
/// congruence restricting back to it, on `M_n` members; τ is monotone.
pub fn verify_tau(order_max: usize, n: u64, options: EnumOptions) -> Result<Report, EnumError> {
    let members = mn_members(order_max, n, options)?;
    let reports = members
        .par_iter()
        .enumerate()
        .map(|(i, a)| Ok((i, check_tau_extensions(a, n, DEFAULT_BUDGET).map_err(|e| EnumError::Malformed(e.to_string()))?)))
        .collect::<Result<Vec<_>, EnumError>>()?;
    Ok(sweep(&format!("tau-extension-order{order_max}-n{n}"), reports))
}

/// Schemas derived along the way from each basis to the other.
pub const CHAIN_SCHEMAS: &[&str] = &["chain-half", "chain-product", "chain-e", "powstep", "summing", "center"];

/// On the `Sr_n` census: membership in `M_n` coincides with membership in
/// `N_n`, and the intermediate identities hold on every `M_n` member.
pub fn verify_basis_equivalence(order_max: usize, n: u64, options: EnumOptions) -> Result<Report, EnumError> {
    let claim = format!("basis-equivalence-order{order_max}-n{n}");
    let mut members = Vec::new();
    for k in 1..=order_max {
        members.extend(enumerate(EnumSpec::new(k, Filter::Class(Class::Sr), n), options)?.algebras);
    }
    let chain: Vec<_> = CHAIN_SCHEMAS.iter().flat_map(|key| schema(key).expect("builtin").identities(n)).collect();
    let results = members
        .par_iter()
        .map(|a| -> Result<(bool, bool, Option<Report>), EvalError> {
            let m = in_class(a, Class::M, n, DEFAULT_BUDGET)?.expect("fits budget");
            let nn = in_class(a, Class::N, n, DEFAULT_BUDGET)?.expect("fits budget");
            let chain_report = if m { Some(satisfies_all(a, "derivation-chain", &chain, n, DEFAULT_BUDGET)?) } else { None };
            Ok((m, nn, chain_report))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let discrepancies: Vec<usize> = results.iter().enumerate().filter(|(_, (m, nn, _))| m != nn).map(|(i, _)| i).collect();
    let chain_failures: Vec<(usize, &Report)> = results
        .iter()
        .enumerate()
        .filter_map(|(i, (_, _, r))| r.as_ref().filter(|r| !r.is_pass()).map(|r| (i, r)))
        .collect();
    let in_m = results.iter().filter(|(m, _, _)| *m).count();
    let witness = json!({
        "members": members.len(),
        "in_mn": in_m,
        "discrepancies": discrepancies,
        "chain_failures": chain_failures.iter().map(|(i, r)| json!({"member": i, "detail": r.detail})).collect::<Vec<_>>(),
    });
    let report = if discrepancies.is_empty() && chain_failures.is_empty() {
        Report::pass(claim, format!("{} members of Sr_{n}, {in_m} in M_n = N_n; 0 discrepancies", members.len()))
    } else {
        Report::fail(claim, format!("{} discrepancies, {} chain failures", discrepancies.len(), chain_failures.len()))
    };
    Ok(report.with_witness(witness).with_evaluations(members.len() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::check_ai_semiring;
    use crate::constructions::flat_group;
    use crate::groups::cyclic;
    use crate::iso::is_isomorphic;

    fn opts() -> EnumOptions {
        EnumOptions::default()
    }

    /// Independent oracle: brute force over all labelled tables, dedup by
    /// canonical form.
    fn brute_force(k: usize) -> Vec<FinAlgebra> {
        let cells = k * k;
        let total = k.pow(cells as u32);
        let tables: Vec<Vec<Element>> = (0..total)
            .map(|mut i| {
                let mut t = vec![0; cells];
                for slot in t.iter_mut().rev() {
                    *slot = i % k;
                    i /= k;
                }
                t
            })
            .collect();
        let sig = Signature::semiring();
        let adds: Vec<&Vec<Element>> = tables
            .iter()
            .filter(|t| {
                let a = FinAlgebra::new(k, Signature::new([("add", 2)]).unwrap(), vec![t.to_vec()], None).unwrap();
                (0..k).all(|x| t[x * k + x] == x)
                    && (0..k).all(|x| (0..k).all(|y| t[x * k + y] == t[y * k + x]))
                    && (0..k).all(|x| (0..k).all(|y| (0..k).all(|z| a.binary(0, a.binary(0, x, y), z) == a.binary(0, x, a.binary(0, y, z)))))
            })
            .collect();
        let mut canon: BTreeSet<Vec<Vec<Element>>> = BTreeSet::new();
        for add in adds {
            for mul in &tables {
                let a = FinAlgebra::new(k, sig.clone(), vec![add.clone(), mul.clone()], None).unwrap();
                if check_ai_semiring(&a).unwrap().is_pass() {
                    canon.insert(canonical_form(&a).unwrap().0.tables().to_vec());
                }
            }
        }
        canon.into_iter().map(|t| FinAlgebra::new(k, sig.clone(), t, None).unwrap()).collect()
    }

    #[test]
    fn matches_brute_force_up_to_order_3() {
        for k in 1..=3 {
            let fast = all_ai_semirings(k, opts()).unwrap();
            let slow = brute_force(k);
            assert_eq!(fast, slow, "order {k}");
        }
    }

    #[test]
    fn census_members_are_canonical_and_distinct() {
        let all = all_ai_semirings(3, opts()).unwrap();
        for a in &all {
            assert_eq!(canonical_form(a).unwrap().0.tables(), a.tables());
        }
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert!(!is_isomorphic(a, b));
            }
        }
    }

    #[test]
    fn order_one_and_two() {
        assert_eq!(all_ai_semirings(1, opts()).unwrap().len(), 1);
        let m1 = enumerate(EnumSpec::new(2, Filter::Class(Class::M), 1), opts()).unwrap();
        // the 2-element duplicated semilattice
        let chain = FinAlgebra::new(2, Signature::semiring(), vec![vec![0, 0, 0, 1], vec![0, 0, 0, 1]], None).unwrap();
        assert!(m1.algebras.iter().any(|a| is_isomorphic(a, &chain)));
    }

    #[test]
    fn flat_c2_in_order3_m2_census() {
        let census = enumerate(EnumSpec::new(3, Filter::Class(Class::M), 2), opts()).unwrap();
        let f = flat_group(&cyclic(2).unwrap());
        assert!(census.algebras.iter().any(|a| is_isomorphic(a, &f)));
        for a in &census.algebras {
            assert_eq!(in_class(a, Class::M, 2, DEFAULT_BUDGET).unwrap(), Some(true));
        }
    }

    #[test]
    fn deterministic_with_stable_provenance() {
        let spec = EnumSpec::new(3, Filter::AllAi, 1);
        let a = enumerate(spec, opts()).unwrap();
        let b = enumerate(spec, opts()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.provenance.len(), 64);
        assert_ne!(a.provenance, EnumSpec::new(3, Filter::AllAi, 2).provenance());
        let back = Census::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn labelled_census_is_orbit_union() {
        let iso = enumerate(EnumSpec::new(2, Filter::AllAi, 1), opts()).unwrap();
        let labelled = enumerate(EnumSpec { up_to_iso: false, ..iso.spec }, opts()).unwrap();
        let expected: usize = iso.algebras.iter().map(|a| relabellings(a).len()).sum();
        assert_eq!(labelled.algebras.len(), expected);
    }

    #[test]
    fn limits() {
        assert_eq!(all_ai_semirings(6, opts()).unwrap_err(), EnumError::OrderOutOfRange(6));
        assert_eq!(all_ai_semirings(5, opts()).unwrap_err(), EnumError::OrderNotEnabled);
        let tiny = EnumOptions { budget: 10, ..opts() };
        assert_eq!(all_ai_semirings(3, tiny).unwrap_err(), EnumError::BudgetExceeded(10));
    }

    /// Principal congruences detect a non-diagonal congruence that is
    /// diagonal on idempotents exactly when the full lattice does.
    #[test]
    fn restriction_principal_matches_lattice() {
        use crate::congruences::{all_congruences, principal_congruence, DEFAULT_SIZE_BOUND};
        for k in 2..=3 {
            for a in all_ai_semirings(k, opts()).unwrap() {
                let idem = a.semiring().unwrap().idempotents();
                let lattice = all_congruences(&a, DEFAULT_SIZE_BOUND).unwrap();
                let full = lattice.congruences.iter().any(|t| !t.is_diagonal() && t.restrict(&idem).is_diagonal());
                let principal = (0..k).any(|x| (x + 1..k).any(|y| principal_congruence(&a, x, y).restrict(&idem).is_diagonal()));
                assert_eq!(full, principal);
            }
        }
    }

    #[test]
    fn sweeps_small() {
        for n in 1..=3 {
            assert!(verify_prop46(3, n, opts()).unwrap().is_pass(), "n = {n}");
            assert!(verify_basis_equivalence(3, n, opts()).unwrap().is_pass(), "n = {n}");
        }
        assert!(verify_tau(3, 2, opts()).unwrap().is_pass());
        assert!(verify_restriction(3, Filter::Class(Class::M), 2, opts()).unwrap().is_pass());
        assert!(verify_restriction(3, Filter::Class(Class::Sr), 2, opts()).unwrap().is_pass());
        assert!(verify_flat_decompositions(3, 2, opts()).unwrap().is_pass());
    }
}
