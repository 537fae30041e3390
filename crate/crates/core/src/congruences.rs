//! Principal congruences, congruence lattices, monoliths, the restriction
//! property on idempotents, the τ extension and subdirect decompositions.

use crate::algebra::{AlgebraError, Element, FinAlgebra};
use crate::classes::{check_in_class, Class};
use crate::constructions::{flat_group, quotient, restrict_to};
use crate::groups::Group;
use crate::iso::is_isomorphic;
use crate::partition::{Partition, UnionFind};
use crate::report::Report;
use crate::terms::EvalError;
use serde_json::json;
use thiserror::Error;

pub const DEFAULT_SIZE_BOUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("algebra has {size} elements; the congruence lattice is limited to {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("relation is not a congruence of the idempotent subalgebra")]
    NotACongruence,
    #[error("idempotents are not closed under the operations")]
    IdempotentsNotClosed,
    #[error("partition has {found} points, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<AlgebraError> for CongruenceError {
    fn from(e: AlgebraError) -> Self {
        CongruenceError::Eval(e.into())
    }
}

/// Every operation maps related arguments to related results.
pub fn is_congruence(a: &FinAlgebra, theta: &Partition) -> bool {
    if theta.len() != a.size() {
        return false;
    }
    let k = a.size();
    let reps = theta.representatives();
    for (op, sym) in a.signature().ops().iter().enumerate() {
        if sym.arity == 0 {
            continue;
        }
        let others = k.pow(sym.arity as u32 - 1);
        let mut args = vec![0; sym.arity];
        for x in 0..k {
            let r = reps[theta.block_of(x)];
            if r == x {
                continue;
            }
            for pos in 0..sym.arity {
                for idx in 0..others {
                    let mut rest = idx;
                    for (i, slot) in args.iter_mut().enumerate().rev() {
                        if i != pos {
                            *slot = rest % k;
                            rest /= k;
                        }
                    }
                    args[pos] = x;
                    let u = a.apply(op, &args);
                    args[pos] = r;
                    if !theta.related(u, a.apply(op, &args)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Least congruence containing `base` (itself a congruence) and `pairs`,
/// closing under one-step translations.
pub fn congruence_generated(a: &FinAlgebra, base: &Partition, pairs: &[(Element, Element)]) -> Partition {
    let k = a.size();
    let mut uf = UnionFind::from_partition(base);
    let mut pending: Vec<(Element, Element)> = Vec::new();
    for &(x, y) in pairs {
        if uf.union(x, y) {
            pending.push((x, y));
        }
    }
    let ops: Vec<(usize, usize)> =
        a.signature().ops().iter().enumerate().filter(|(_, s)| s.arity > 0).map(|(i, s)| (i, s.arity)).collect();
    let mut args = Vec::new();
    while let Some((x, y)) = pending.pop() {
        for &(op, arity) in &ops {
            if arity == 2 {
                // fast path for binary operations
                for c in 0..k {
                    for (u, v) in [(a.binary(op, x, c), a.binary(op, y, c)), (a.binary(op, c, x), a.binary(op, c, y))] {
                        if uf.union(u, v) {
                            pending.push((u, v));
                        }
                    }
                }
                continue;
            }
            args.resize(arity, 0);
            let others = k.pow(arity as u32 - 1);
            for pos in 0..arity {
                for idx in 0..others {
                    let mut rest = idx;
                    for (i, slot) in args.iter_mut().enumerate().rev() {
                        if i != pos {
                            *slot = rest % k;
                            rest /= k;
                        }
                    }
                    args[pos] = x;
                    let u = a.apply(op, &args);
                    args[pos] = y;
                    let v = a.apply(op, &args);
                    if uf.union(u, v) {
                        pending.push((u, v));
                    }
                }
            }
        }
    }
    uf.into_partition()
}

pub fn principal_congruence(a: &FinAlgebra, x: Element, y: Element) -> Partition {
    congruence_generated(a, &Partition::diagonal(a.size()), &[(x, y)])
}

/// All congruences in canonical order (finest first), with the lattice order.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceLattice {
    pub congruences: Vec<Partition>,
}

impl CongruenceLattice {
    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.congruences.iter().position(|q| q == p)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.congruences[i].refines(&self.congruences[j])
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.index_of(&self.congruences[i].join(&self.congruences[j])).expect("lattice closed under join")
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.index_of(&self.congruences[i].meet(&self.congruences[j])).expect("lattice closed under meet")
    }

    pub fn join_table(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.join(i, j)).collect()).collect()
    }

    pub fn meet_table(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.meet(i, j)).collect()).collect()
    }
}

/// Distinct non-trivial principal congruences, sorted canonically.
pub fn principal_congruences(a: &FinAlgebra) -> Vec<Partition> {
    let k = a.size();
    let mut out: Vec<Partition> = Vec::new();
    for x in 0..k {
        for y in x + 1..k {
            out.push(principal_congruence(a, x, y));
        }
    }
    out.sort_by(|p, q| p.canonical_cmp(q));
    out.dedup();
    out
}

/// All congruences, as joins of principal ones.
pub fn all_congruences(a: &FinAlgebra, bound: usize) -> Result<CongruenceLattice, CongruenceError> {
    if a.size() > bound {
        return Err(CongruenceError::SizeBound { size: a.size(), bound });
    }
    let principals = principal_congruences(a);
    let mut all: std::collections::HashSet<Partition> = std::collections::HashSet::new();
    all.insert(Partition::diagonal(a.size()));
    let mut frontier: Vec<Partition> = principals.clone();
    while let Some(p) = frontier.pop() {
        if !all.insert(p.clone()) {
            continue;
        }
        for q in &principals {
            if !q.refines(&p) {
                let j = p.join(q);
                if !all.contains(&j) {
                    frontier.push(j);
                }
            }
        }
    }
    let mut congruences: Vec<Partition> = all.into_iter().collect();
    congruences.sort_by(|p, q| p.canonical_cmp(q));
    Ok(CongruenceLattice { congruences })
}

/// The least non-diagonal congruence, if any. The one-element algebra has none.
///
/// Keeps a running principal congruence `Cg(c, d)` and shrinks it: whenever
/// `(c, d)` is not in `Cg(x, y)` the meet of the two is taken and a new
/// generating pair is picked from it; a diagonal meet means no monolith.
pub fn monolith(a: &FinAlgebra) -> Option<Partition> {
    let k = a.size();
    if k < 2 {
        return None;
    }
    let mut current = principal_congruence(a, 0, 1);
    let mut gen = (0, 1);
    for x in 0..k {
        for y in x + 1..k {
            let p = principal_congruence(a, x, y);
            if p.related(gen.0, gen.1) {
                continue;
            }
            let m = current.meet(&p);
            let pair = m.blocks().into_iter().find(|b| b.len() > 1).map(|b| (b[0], b[1]))?;
            gen = pair;
            current = principal_congruence(a, pair.0, pair.1);
        }
    }
    Some(current)
}

pub fn is_subdirectly_irreducible(a: &FinAlgebra) -> bool {
    monolith(a).is_some()
}

/// Exactly two congruences: every pair of distinct elements generates the
/// universal relation.
pub fn is_simple(a: &FinAlgebra) -> bool {
    let k = a.size();
    k > 1 && (0..k).all(|x| (x + 1..k).all(|y| principal_congruence(a, x, y).is_universal()))
}

/// For S in Sr_n: a congruence whose restriction to the idempotents is the
/// diagonal is itself the diagonal.
///
/// Every non-diagonal congruence contains a principal one, so checking the
/// principal congruences is exhaustive.
pub fn restriction_check(a: &FinAlgebra, n: u64, budget: u64) -> Result<Report, CongruenceError> {
    let claim = "idempotent-restriction";
    let class = check_in_class(a, Class::Sr, n, budget)?;
    if !class.is_pass() {
        return Ok(Report::inapplicable(claim, format!("not in Sr_{n}: {}", class.detail)));
    }
    let idem = a.semiring()?.idempotents();
    let k = a.size();
    let mut checked = 0u64;
    for x in 0..k {
        for y in x + 1..k {
            checked += 1;
            let theta = principal_congruence(a, x, y);
            if theta.restrict(&idem).is_diagonal() {
                return Ok(Report::fail(claim, format!("Cg({}, {}) is diagonal on idempotents", a.label(x), a.label(y)))
                    .with_witness(json!({"pair": [a.label(x), a.label(y)], "congruence": theta}))
                    .with_evaluations(checked));
            }
        }
    }
    Ok(Report::pass(claim, format!("{checked} principal congruences checked")).with_evaluations(checked))
}

/// Outcome of extending a congruence of the idempotents to the whole algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct TauExtension {
    /// The relation as a partition, when it is an equivalence.
    pub tau: Option<Partition>,
    pub is_congruence: bool,
    pub restricts_to_rho: bool,
}

impl TauExtension {
    pub fn holds(&self) -> bool {
        self.tau.is_some() && self.is_congruence && self.restricts_to_rho
    }
}

/// `a τ b` iff some idempotent `e` has `ea = eb` and `e ρ a^n ρ b^n`.
/// `rho` is indexed by position in the ascending idempotent list.
pub fn tau_extension(a: &FinAlgebra, rho: &Partition, n: u64) -> Result<TauExtension, CongruenceError> {
    if n == 0 {
        return Err(AlgebraError::InvalidN.into());
    }
    let s = a.semiring()?;
    let idem = s.idempotents();
    if rho.len() != idem.len() {
        return Err(CongruenceError::WrongLength { expected: idem.len(), found: rho.len() });
    }
    let sub = restrict_to(a, &idem).map_err(|_| CongruenceError::IdempotentsNotClosed)?;
    if !is_congruence(&sub, rho) {
        return Err(CongruenceError::NotACongruence);
    }
    let mut pos = vec![usize::MAX; a.size()];
    for (i, &e) in idem.iter().enumerate() {
        pos[e] = i;
    }
    let k = a.size();
    let powers: Vec<Element> = a.elements().map(|x| s.pow(x, n)).collect();
    let rel = |x: Element, y: Element| {
        let (px, py) = (pos[powers[x]], pos[powers[y]]);
        px != usize::MAX
            && py != usize::MAX
            && rho.related(px, py)
            && idem.iter().enumerate().any(|(i, &e)| s.mul(e, x) == s.mul(e, y) && rho.related(i, px))
    };
    let mut matrix = vec![false; k * k];
    for x in 0..k {
        for y in 0..k {
            matrix[x * k + y] = rel(x, y);
        }
    }
    let reflexive = (0..k).all(|x| matrix[x * k + x]);
    let symmetric = (0..k).all(|x| (0..k).all(|y| matrix[x * k + y] == matrix[y * k + x]));
    let transitive =
        (0..k).all(|x| (0..k).all(|y| !matrix[x * k + y] || (0..k).all(|z| !matrix[y * k + z] || matrix[x * k + z])));
    if !(reflexive && symmetric && transitive) {
        return Ok(TauExtension { tau: None, is_congruence: false, restricts_to_rho: false });
    }
    let tau = Partition::from_pairs(k, (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).filter(|&(x, y)| matrix[x * k + y]));
    let is_cong = is_congruence(a, &tau);
    let restricts = tau.restrict(&idem) == *rho;
    Ok(TauExtension { tau: Some(tau), is_congruence: is_cong, restricts_to_rho: restricts })
}

/// Whether the multiplicative reduct restricted to `S \ {z}` is a group;
/// returns that group.
fn group_without(a: &FinAlgebra, z: Element) -> Option<Group> {
    let s = a.semiring().ok()?;
    let rest: Vec<Element> = a.elements().filter(|&x| x != z).collect();
    if rest.is_empty() {
        return None;
    }
    let mut index = vec![usize::MAX; a.size()];
    for (i, &x) in rest.iter().enumerate() {
        index[x] = i;
    }
    let mut mul = Vec::with_capacity(rest.len() * rest.len());
    for &x in &rest {
        for &y in &rest {
            let v = index[s.mul(x, y)];
            if v == usize::MAX {
                return None;
            }
            mul.push(v);
        }
    }
    let labels = rest.iter().map(|&x| a.label(x)).collect();
    Group::from_table("nonzero", rest.len(), mul, labels).ok()
}

/// For S in M_n: every congruence of the idempotent subsemiring extends
/// through τ to a congruence of S restricting back to it, and τ is monotone.
pub fn check_tau_extensions(a: &FinAlgebra, n: u64, budget: u64) -> Result<Report, CongruenceError> {
    let claim = "tau-extension";
    let class = check_in_class(a, Class::M, n, budget)?;
    if !class.is_pass() {
        return Ok(Report::inapplicable(claim, format!("not in M_{n}: {}", class.detail)));
    }
    let idem = a.semiring()?.idempotents();
    let sub = restrict_to(a, &idem).map_err(|_| CongruenceError::IdempotentsNotClosed)?;
    let lattice = all_congruences(&sub, DEFAULT_SIZE_BOUND)?;
    let mut taus: Vec<Partition> = Vec::new();
    for rho in &lattice.congruences {
        let t = tau_extension(a, rho, n)?;
        match t.tau {
            Some(tau) if t.is_congruence && t.restricts_to_rho => taus.push(tau),
            _ => {
                return Ok(Report::fail(claim, format!("extension of {rho} fails"))
                    .with_witness(json!({"rho": rho, "is_congruence": t.is_congruence, "restricts_to_rho": t.restricts_to_rho})))
            }
        }
    }
    for (x, rx) in lattice.congruences.iter().enumerate() {
        for (y, ry) in lattice.congruences.iter().enumerate() {
            if rx.refines(ry) && !taus[x].refines(&taus[y]) {
                return Ok(Report::fail(claim, format!("τ not monotone at {rx} ⊆ {ry}")).with_witness(json!({"rho": [rx, ry]})));
            }
        }
    }
    Ok(Report::pass(claim, format!("{} congruences of the idempotents extended", taus.len())).with_evaluations(taus.len() as u64))
}

/// A multiplicative zero exists and the remaining elements form a group.
pub fn is_semifield(a: &FinAlgebra) -> bool {
    let Ok(s) = a.semiring() else { return false };
    a.elements()
        .find(|&z| a.elements().all(|x| s.mul(z, x) == z && s.mul(x, z) == z))
        .is_some_and(|z| group_without(a, z).is_some())
}

/// Is `a` isomorphic to `G^♭` for a group `G` of exponent dividing `n`?
/// Returns the group when it is.
pub fn flat_extension_of_group(a: &FinAlgebra, n: u64) -> Option<Group> {
    a.elements().find_map(|z| {
        let g = group_without(a, z)?;
        if !n.is_multiple_of(g.exponent()) {
            return None;
        }
        is_isomorphic(a, &flat_group(&g)).then_some(g)
    })
}

/// Four independent characterisations of subdirect irreducibility in M_n;
/// passes iff they agree.
pub fn classify_si(a: &FinAlgebra, n: u64, budget: u64) -> Result<Report, CongruenceError> {
    let claim = "si-equivalence";
    let class = check_in_class(a, Class::M, n, budget)?;
    if !class.is_pass() {
        return Ok(Report::inapplicable(claim, format!("not in M_{n}: {}", class.detail)));
    }
    let si = is_subdirectly_irreducible(a);
    let semifield = is_semifield(a);
    let flat = flat_extension_of_group(a, n).is_some();
    let simple = is_simple(a);
    let flags = json!({"si": si, "semifield": semifield, "flat_group": flat, "simple": simple});
    if si == semifield && semifield == flat && flat == simple {
        Ok(Report::pass(claim, format!("all four {si}")).with_witness(flags))
    } else {
        Ok(Report::fail(claim, "characterisations disagree").with_witness(flags))
    }
}

/// Greedily enlarges the diagonal to a congruence maximal among those
/// separating `x` and `y`.
fn maximal_separating(a: &FinAlgebra, x: Element, y: Element) -> Partition {
    let k = a.size();
    let mut theta = Partition::diagonal(k);
    for c in 0..k {
        for d in c + 1..k {
            if theta.related(c, d) {
                continue;
            }
            let bigger = congruence_generated(a, &theta, &[(c, d)]);
            if !bigger.related(x, y) {
                theta = bigger;
            }
        }
    }
    theta
}

/// A family of congruences with diagonal meet and SI quotients.
pub fn subdirect_decomposition(a: &FinAlgebra) -> Result<Vec<(Partition, FinAlgebra)>, CongruenceError> {
    let k = a.size();
    if k < 2 {
        return Ok(Vec::new());
    }
    let mut family: Vec<Partition> = Vec::new();
    for x in 0..k {
        for y in x + 1..k {
            if family.iter().any(|p| !p.related(x, y)) {
                continue;
            }
            let m = maximal_separating(a, x, y);
            if m.is_diagonal() {
                let q = quotient(a, &m).expect("diagonal is a congruence").0;
                return Ok(vec![(m, q)]);
            }
            family.push(m);
        }
    }
    family.sort_by(|p, q| p.canonical_cmp(q));
    family.dedup();
    // drop redundant members, coarsest first
    let mut i = family.len();
    while i > 0 {
        i -= 1;
        let meet = family
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Partition::universal(k), |acc, (_, p)| acc.meet(p));
        if meet.is_diagonal() && family.len() > 1 {
            family.remove(i);
        }
    }
    Ok(family
        .into_iter()
        .map(|p| {
            let q = quotient(a, &p).expect("built from congruences").0;
            (p, q)
        })
        .collect())
}

/// For S in M_n: every factor of the subdirect decomposition is a flat
/// extension of a group of exponent dividing `n`.
pub fn check_flat_decomposition(a: &FinAlgebra, n: u64, budget: u64) -> Result<Report, CongruenceError> {
    let claim = "subdirect-flat-factors";
    let class = check_in_class(a, Class::M, n, budget)?;
    if !class.is_pass() {
        return Ok(Report::inapplicable(claim, format!("not in M_{n}: {}", class.detail)));
    }
    if a.size() < 2 {
        return Ok(Report::inapplicable(claim, "one-element algebra"));
    }
    let factors = subdirect_decomposition(a)?;
    let meet = factors.iter().fold(Partition::universal(a.size()), |acc, (p, _)| acc.meet(p));
    if !meet.is_diagonal() {
        return Ok(Report::fail(claim, "kernels do not meet to the diagonal"));
    }
    let mut orders = Vec::new();
    for (p, q) in &factors {
        if !is_subdirectly_irreducible(q) {
            return Ok(Report::fail(claim, format!("quotient by {p} is not SI")).with_witness(json!({"kernel": p})));
        }
        match flat_extension_of_group(q, n) {
            Some(g) => orders.push(g.size()),
            None => {
                return Ok(Report::fail(claim, format!("quotient by {p} is not a flat extension of a group"))
                    .with_witness(json!({"kernel": p, "quotient": q.to_json()})))
            }
        }
    }
    Ok(Report::pass(claim, format!("{} flat factors", factors.len())).with_witness(json!({"group_orders": orders})))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_algebra, Signature};
    use crate::constructions::product;
    use crate::groups::{cyclic, named_group};
    use crate::report::Verdict;
    use crate::terms::DEFAULT_BUDGET;

    fn flat(name: &str) -> FinAlgebra {
        flat_group(&named_group(name).unwrap())
    }

    /// Reference: every equivalence relation on `0..k`, filtered by `is_congruence`.
    fn brute_force_congruences(a: &FinAlgebra) -> Vec<Partition> {
        fn rec(k: usize, labels: &mut Vec<usize>, max: usize, out: &mut Vec<Partition>) {
            if labels.len() == k {
                out.push(Partition::from_labels(labels));
                return;
            }
            for l in 0..=max {
                labels.push(l);
                rec(k, labels, max.max(l + 1), out);
                labels.pop();
            }
        }
        let mut all = Vec::new();
        rec(a.size(), &mut Vec::new(), 0, &mut all);
        let mut out: Vec<Partition> = all.into_iter().filter(|p| is_congruence(a, p)).collect();
        out.sort_by(|p, q| p.canonical_cmp(q));
        out
    }

    fn chain(k: usize) -> FinAlgebra {
        // duplicated semilattice: min as both operations
        let t: Vec<Element> = (0..k * k).map(|i| (i / k).min(i % k)).collect();
        make_algebra(k, Signature::semiring(), vec![t.clone(), t]).unwrap()
    }

    #[test]
    fn flat_groups_are_simple() {
        for name in ["C2", "C3", "C4", "Q8"] {
            let f = flat(name);
            assert_eq!(all_congruences(&f, 12).unwrap().len(), 2, "{name}");
            assert!(is_simple(&f));
            assert!(monolith(&f).unwrap().is_universal());
        }
        assert!(principal_congruence(&flat("C2"), 1, 2).is_universal());
    }

    #[test]
    fn lattice_matches_brute_force() {
        let f = flat("C2");
        let p = product(&f, &f).unwrap();
        for a in [chain(4), p, flat("C3"), chain(1)] {
            assert_eq!(all_congruences(&a, 12).unwrap().congruences, brute_force_congruences(&a));
        }
    }

    #[test]
    fn product_not_si() {
        let f = flat("C2");
        let p = product(&f, &f).unwrap();
        assert!(monolith(&p).is_none());
        assert!(!is_simple(&p));
        // collapsing (e, 0) with (e, e) collapses the second coordinate
        let theta = principal_congruence(&p, 3, 4);
        let kernel = Partition::from_labels(&(0..9).map(|x| x / 3).collect::<Vec<_>>());
        assert_eq!(theta, kernel);
    }

    #[test]
    fn two_element_chain_is_si_and_one_element_is_not() {
        assert!(is_subdirectly_irreducible(&chain(2)));
        assert!(!is_subdirectly_irreducible(&chain(1)));
        assert!(!is_simple(&chain(1)));
        assert!(!is_subdirectly_irreducible(&chain(3)));
    }

    #[test]
    fn monolith_below_every_nontrivial_congruence() {
        let e = flat("E");
        let p = product(&e, &chain(2)).unwrap();
        for a in [chain(3), p, flat("C2")] {
            let lattice = all_congruences(&a, 12).unwrap();
            match monolith(&a) {
                Some(m) => {
                    assert!(lattice.congruences.iter().filter(|c| !c.is_diagonal()).all(|c| m.refines(c)));
                }
                None => {
                    let nontrivial: Vec<&Partition> = lattice.congruences.iter().filter(|c| !c.is_diagonal()).collect();
                    assert!(!nontrivial.iter().any(|m| nontrivial.iter().all(|c| m.refines(c))));
                }
            }
        }
    }

    #[test]
    fn restriction_on_flat() {
        assert!(restriction_check(&flat("C3"), 3, DEFAULT_BUDGET).unwrap().is_pass());
        assert_eq!(restriction_check(&flat("C3"), 2, DEFAULT_BUDGET).unwrap().verdict, Verdict::Inapplicable);
    }

    #[test]
    fn tau_on_flat_c2() {
        let f = flat("C2");
        let t = tau_extension(&f, &Partition::universal(2), 2).unwrap();
        assert!(t.holds());
        assert!(t.tau.unwrap().is_universal());
        let t = tau_extension(&f, &Partition::diagonal(2), 2).unwrap();
        assert!(t.holds());
        assert!(t.tau.unwrap().is_diagonal());
    }

    #[test]
    fn classify_examples() {
        let r = classify_si(&flat("C2"), 2, DEFAULT_BUDGET).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.witness.unwrap()["si"], json!(true));
        let r = classify_si(&chain(1), 1, DEFAULT_BUDGET).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.witness.unwrap()["simple"], json!(false));
        let f = flat("C2");
        let r = classify_si(&product(&f, &f).unwrap(), 2, DEFAULT_BUDGET).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.witness.unwrap()["semifield"], json!(false));
    }

    #[test]
    fn decomposition_of_c2_c3_product() {
        let (f2, f3) = (flat("C2"), flat("C3"));
        let p = product(&f2, &f3).unwrap();
        let factors = subdirect_decomposition(&p).unwrap();
        assert_eq!(factors.len(), 2);
        let sizes: Vec<usize> = factors.iter().map(|(_, q)| q.size()).collect();
        assert!(sizes.contains(&3) && sizes.contains(&4));
        for (_, q) in &factors {
            assert!(is_isomorphic(q, &f2) || is_isomorphic(q, &f3));
        }
        assert!(check_flat_decomposition(&p, 6, DEFAULT_BUDGET).unwrap().is_pass());
        let single = subdirect_decomposition(&f3).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single[0].0.is_diagonal());
    }

    #[test]
    fn group_congruences_are_normal_subgroups() {
        let d6 = named_group("D6").unwrap();
        // D6 has normal subgroups 1, C3, D6
        assert_eq!(all_congruences(d6.algebra(), 12).unwrap().len(), 3);
        assert_eq!(all_congruences(cyclic(4).unwrap().algebra(), 12).unwrap().len(), 3);
    }

    #[test]
    fn size_bound() {
        let big = flat("D8");
        assert!(matches!(all_congruences(&big, 5), Err(CongruenceError::SizeBound { .. })));
    }
}
