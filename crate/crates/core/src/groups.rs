//! Concrete finite groups as full multiplication tables.

use crate::algebra::{AlgebraError, Element, FinAlgebra, Signature};
use crate::report::Report;
use serde_json::json;
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("no element labelled `{0}`")]
    UnknownElement(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A finite group with ops `mul` (index 0) and `inv` (index 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    alg: FinAlgebra,
    name: String,
    identity: Element,
    exponent: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Label of `base^k` in multiplicative word notation.
fn power_label(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn word(parts: &[String]) -> String {
    let w: String = parts.concat();
    if w.is_empty() {
        "1".to_string()
    } else {
        w
    }
}

impl Group {
    /// Builds a group from a multiplication table, deriving identity and
    /// inverses. Fails unless the table is a group.
    pub fn from_table(name: &str, size: usize, mul: Vec<Element>, labels: Vec<String>) -> Result<Group, GroupError> {
        Self::build(name, size, mul, labels, true)
    }

    /// Like `from_table` but skips the cubic associativity scan; for tables
    /// inherited from a known group (products, subgroups).
    fn from_associative_table(name: &str, size: usize, mul: Vec<Element>, labels: Vec<String>) -> Result<Group, GroupError> {
        Self::build(name, size, mul, labels, false)
    }

    fn build(name: &str, size: usize, mul: Vec<Element>, labels: Vec<String>, check: bool) -> Result<Group, GroupError> {
        // validates dimensions and ranges before the scans below index into it
        FinAlgebra::new(size, Signature::new([("mul", 2)])?, vec![mul.clone()], None)?;
        let identity = (0..size)
            .find(|&e| (0..size).all(|x| mul[e * size + x] == x && mul[x * size + e] == x))
            .ok_or_else(|| GroupError::NotAGroup("no identity".into()))?;
        let mut inv = vec![0; size];
        for (x, slot) in inv.iter_mut().enumerate() {
            *slot = (0..size)
                .find(|&y| mul[x * size + y] == identity && mul[y * size + x] == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("element {x} has no inverse")))?;
        }
        let alg = FinAlgebra::new(size, Signature::group(), vec![mul, inv], Some(labels))?;
        if check {
            let axioms = check_group_axioms(&alg)?;
            if !axioms.is_pass() {
                return Err(GroupError::NotAGroup(axioms.detail));
            }
        }
        let mut g = Group { alg, name: name.to_string(), identity, exponent: 1 };
        g.exponent = g.elements().map(|x| g.order(x)).fold(1, lcm);
        Ok(g)
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.alg
    }

    pub fn into_algebra(self) -> FinAlgebra {
        self.alg
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.alg.size()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size()
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.alg.binary(0, a, b)
    }

    pub fn inv(&self, a: Element) -> Element {
        self.alg.unary(1, a)
    }

    pub fn pow(&self, a: Element, k: u64) -> Element {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn order(&self, a: Element) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn label(&self, a: Element) -> String {
        self.alg.label(a)
    }

    /// Looks an element up by its label, e.g. `"a^2b"` or `"(a,c)"`.
    pub fn element(&self, label: &str) -> Result<Element, GroupError> {
        let want: String = label.chars().filter(|c| !c.is_whitespace()).collect();
        self.elements()
            .find(|&x| self.label(x) == want)
            .ok_or_else(|| GroupError::UnknownElement(label.to_string()))
    }

    pub fn commutator(&self, a: Element, b: Element) -> Element {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Closure of `gens` as a sorted subset of the universe.
    pub fn closure(&self, gens: &[Element]) -> Vec<Element> {
        let mut seen = vec![false; self.size()];
        seen[self.identity] = true;
        let mut queue: VecDeque<Element> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.elements().filter(|&x| seen[x]).collect()
    }

    /// Length of the lower central series; `None` if it stabilises above the
    /// trivial group. The trivial group has class 0.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let all: Vec<Element> = self.elements().collect();
        let mut current = all.clone();
        let mut class = 0;
        while current.len() > 1 {
            let comms: BTreeSet<Element> =
                all.iter().flat_map(|&g| current.iter().map(move |&h| (g, h))).map(|(g, h)| self.commutator(g, h)).collect();
            let next = self.closure(&comms.into_iter().collect::<Vec<_>>());
            if next.len() == current.len() {
                return None;
            }
            current = next;
            class += 1;
        }
        Some(class)
    }
}

/// A subgroup with its own dense indexing.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: Group,
    /// `inclusion[i]` is the parent element of subgroup element `i`.
    pub inclusion: Vec<Element>,
}

/// Closure of `gens` under multiplication, re-indexed in increasing parent order.
pub fn subgroup_generated(g: &Group, gens: &[Element]) -> Result<Subgroup, GroupError> {
    if let Some(&bad) = gens.iter().find(|&&x| x >= g.size()) {
        return Err(AlgebraError::ElementOutOfRange(bad).into());
    }
    let inclusion = g.closure(gens);
    let mut index = vec![usize::MAX; g.size()];
    for (i, &x) in inclusion.iter().enumerate() {
        index[x] = i;
    }
    let k = inclusion.len();
    let mut mul = Vec::with_capacity(k * k);
    for &x in &inclusion {
        for &y in &inclusion {
            mul.push(index[g.mul(x, y)]);
        }
    }
    let labels = inclusion.iter().map(|&x| g.label(x)).collect();
    let gen_labels: Vec<String> = gens.iter().map(|&x| g.label(x)).collect();
    let name = format!("<{}>", gen_labels.join(", "));
    let group = Group::from_associative_table(&name, k, mul, labels)?;
    Ok(Subgroup { group, inclusion })
}

/// The cyclic group of order `m` generated by `c`.
pub fn cyclic(m: usize) -> Result<Group, GroupError> {
    if m == 0 {
        return Err(GroupError::InvalidParameter("cyclic order must be at least 1".into()));
    }
    let mul = (0..m * m).map(|i| (i / m + i % m) % m).collect();
    let labels = (0..m).map(|i| word(&[power_label("c", i)])).collect();
    Group::from_table(&format!("C{m}"), m, mul, labels)
}

/// The dihedral group of order `2p`: elements `a^i b^j` at index `i + p*j`,
/// with `a^p = b^2 = 1` and `ab = ba^(p-1)`.
pub fn dihedral(p: usize) -> Result<Group, GroupError> {
    if p < 2 {
        return Err(GroupError::InvalidParameter("dihedral parameter must be at least 2".into()));
    }
    let k = 2 * p;
    let mut mul = Vec::with_capacity(k * k);
    for x in 0..k {
        let (i, j) = (x % p, x / p);
        for y in 0..k {
            let (m, l) = (y % p, y / p);
            let rot = if j == 0 { (i + m) % p } else { (i + p - m) % p };
            mul.push(rot + p * ((j + l) % 2));
        }
    }
    let labels = (0..k).map(|x| word(&[power_label("a", x % p), power_label("b", x / p)])).collect();
    Group::from_table(&format!("D{k}"), k, mul, labels)
}

/// The quaternion group `{±1, ±i, ±j, ±k}`.
pub fn quaternion() -> Result<Group, GroupError> {
    // unit index u in {1, i, j, k} = {0, 1, 2, 3}, sign s; element 2u + s
    let unit_mul = |u: usize, v: usize| -> (usize, bool) {
        match (u, v) {
            (0, w) | (w, 0) => (w, false),
            (a, b) if a == b => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let mut mul = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (w, neg) = unit_mul(x / 2, y / 2);
            let sign = (x % 2 + y % 2 + usize::from(neg)) % 2;
            mul.push(2 * w + sign);
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
    Group::from_table("Q8", 8, mul, labels)
}

/// The Heisenberg group mod `p`: triples `(x, y, z)` at index `x*p^2 + y*p + z`
/// with `(x,y,z)(x',y',z') = (x+x', y+y', z+z'+x*y')`, i.e. upper
/// unitriangular 3x3 matrices. Generators `a = (1,0,0)`, `b = (0,1,0)`,
/// central `c = (0,0,1)`, and `ab = bac`.
pub fn heisenberg(p: usize) -> Result<Group, GroupError> {
    if !is_prime(p as u64) {
        return Err(GroupError::InvalidParameter(format!("heisenberg needs a prime, got {p}")));
    }
    let k = p * p * p;
    let split = |e: usize| (e / (p * p), (e / p) % p, e % p);
    let mut mul = Vec::with_capacity(k * k);
    for u in 0..k {
        let (x, y, z) = split(u);
        for v in 0..k {
            let (x2, y2, z2) = split(v);
            mul.push(((x + x2) % p) * p * p + ((y + y2) % p) * p + (z + z2 + x * y2) % p);
        }
    }
    let labels = (0..k)
        .map(|e| {
            let (x, y, z) = split(e);
            word(&[power_label("b", y), power_label("a", x), power_label("c", z)])
        })
        .collect();
    Group::from_table(&format!("H{p}"), k, mul, labels)
}

/// Direct product; element `(g, h)` sits at index `g*|H| + h`.
pub fn direct_product(g: &Group, h: &Group) -> Result<Group, GroupError> {
    let (m, n) = (g.size(), h.size());
    let k = m * n;
    let mut mul = Vec::with_capacity(k * k);
    for x in 0..k {
        for y in 0..k {
            mul.push(g.mul(x / n, y / n) * n + h.mul(x % n, y % n));
        }
    }
    let labels = (0..k).map(|x| format!("({},{})", g.label(x / n), h.label(x % n))).collect();
    Group::from_associative_table(&format!("{}x{}", g.name(), h.name()), k, mul, labels)
}

/// `Ĥ_p`, the subgroup of `H_p × C_{p²}` generated by `(a,c)` and `(b,1)`.
pub fn heisenberg_tilde(p: usize) -> Result<Group, GroupError> {
    let prod = direct_product(&heisenberg(p)?, &cyclic(p * p)?)?;
    let gens = [prod.element("(a,c)")?, prod.element("(b,1)")?];
    Ok(subgroup_generated(&prod, &gens)?.group.with_name(format!("Htilde{p}")))
}

/// `D̃_{2p}`, the subgroup of `D_{2p} × C_{4p}` generated by `(a,1)` and `(b,c^p)`.
pub fn dihedral_tilde(p: usize) -> Result<Group, GroupError> {
    let prod = direct_product(&dihedral(p)?, &cyclic(4 * p)?)?;
    let gens = [prod.element("(a,1)")?, prod.element(&format!("(b,{})", power_label("c", p)))?];
    Ok(subgroup_generated(&prod, &gens)?.group.with_name(format!("Dtilde{}", 2 * p)))
}

/// Parses names such as `C4`, `D6`, `Q8`, `H3`, `E`, `Htilde3`, `Dtilde6` and
/// `x`-separated products like `H3xC9`.
pub fn named_group(name: &str) -> Result<Group, GroupError> {
    let name = name.trim();
    let factors: Vec<&str> = name.split('x').collect();
    if factors.len() > 1 {
        let mut acc = named_group(factors[0])?;
        for f in &factors[1..] {
            acc = direct_product(&acc, &named_group(f)?)?;
        }
        return Ok(acc);
    }
    let unknown = || GroupError::UnknownGroup(name.to_string());
    let num = |prefix: &str| -> Result<usize, GroupError> {
        name.strip_prefix(prefix).and_then(|d| d.parse().ok()).ok_or_else(unknown)
    };
    if name == "E" {
        return Ok(cyclic(1)?.with_name("E"));
    }
    if name.starts_with("Htilde") {
        return heisenberg_tilde(num("Htilde")?);
    }
    if name.starts_with("Dtilde") {
        let k = num("Dtilde")?;
        if k % 2 != 0 {
            return Err(unknown());
        }
        return dihedral_tilde(k / 2);
    }
    match name.chars().next() {
        Some('C') => cyclic(num("C")?),
        Some('D') => {
            let k = num("D")?;
            if k % 2 != 0 {
                return Err(unknown());
            }
            dihedral(k / 2)
        }
        Some('Q') if name == "Q8" => quaternion(),
        Some('H') => heisenberg(num("H")?),
        _ => Err(unknown()),
    }
}

/// Checks associativity, identity and inverse laws of a `(mul, inv)` table.
pub fn check_group_axioms(alg: &FinAlgebra) -> Result<Report, AlgebraError> {
    let claim = "group-axioms";
    let m = alg.op_index("mul", 2)?;
    let i = alg.op_index("inv", 1)?;
    let k = alg.size();
    let mul = |a, b| alg.binary(m, a, b);
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Ok(Report::fail(claim, "mul is not associative")
                        .with_witness(json!({"axiom": "associativity", "elements": [a, b, c]})));
                }
            }
        }
    }
    let Some(e) = (0..k).find(|&e| (0..k).all(|x| mul(e, x) == x && mul(x, e) == x)) else {
        return Ok(Report::fail(claim, "no identity element"));
    };
    for a in 0..k {
        let b = alg.unary(i, a);
        if mul(a, b) != e || mul(b, a) != e {
            return Ok(Report::fail(claim, format!("inv({a}) is not an inverse"))
                .with_witness(json!({"axiom": "inverse", "elements": [a]})));
        }
    }
    Ok(Report::pass(claim, format!("group of order {k}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_exponents() {
        let cases = [("C4", 4, 4), ("C9", 9, 9), ("D6", 6, 6), ("Q8", 8, 4), ("H3", 27, 3), ("E", 1, 1), ("C1", 1, 1)];
        for (name, order, exp) in cases {
            let g = named_group(name).unwrap();
            assert_eq!((g.size(), g.exponent()), (order, exp), "{name}");
        }
    }

    #[test]
    fn heisenberg_relations() {
        let h = heisenberg(3).unwrap();
        let (a, b, c) = (h.element("a").unwrap(), h.element("b").unwrap(), h.element("c").unwrap());
        assert_eq!(h.mul(a, b), h.mul(h.mul(b, a), c));
        assert_eq!(h.mul(a, c), h.mul(c, a));
        assert_eq!(h.mul(b, c), h.mul(c, b));
        for x in [a, b, c] {
            assert_eq!(h.order(x), 3);
        }
        assert_eq!(h.closure(&[a, b]).len(), 27);
    }

    #[test]
    fn dihedral_relation() {
        let d = dihedral(3).unwrap();
        let (a, b) = (d.element("a").unwrap(), d.element("b").unwrap());
        assert_eq!(d.mul(a, b), d.mul(b, d.pow(a, 2)));
        assert_eq!(d.order(a), 3);
        assert_eq!(d.order(b), 2);
        assert!(!d.is_abelian());
        assert_eq!(d.nilpotency_class(), None);
    }

    #[test]
    fn nilpotency() {
        assert_eq!(heisenberg(3).unwrap().nilpotency_class(), Some(2));
        assert_eq!(quaternion().unwrap().nilpotency_class(), Some(2));
        assert_eq!(cyclic(5).unwrap().nilpotency_class(), Some(1));
        assert_eq!(cyclic(1).unwrap().nilpotency_class(), Some(0));
        assert!(!quaternion().unwrap().is_abelian());
    }

    #[test]
    fn product_exponent_is_lcm() {
        let g = named_group("H3xC9").unwrap();
        assert_eq!(g.size(), 243);
        assert_eq!(g.exponent(), 9);
        assert_eq!(named_group("C4xC6").unwrap().exponent(), 12);
    }

    #[test]
    fn tilde_orders() {
        // independent count: (a,c) has order 9, and <(a,c),(b,1)> contains
        // (c,1) = [(a,c),(b,1)]-commutator and (1,c^3) = (a,c)^3
        let h = heisenberg_tilde(3).unwrap();
        assert_eq!(h.size(), 81);
        assert_eq!(h.exponent(), 9);
        let d = dihedral_tilde(3).unwrap();
        assert_eq!(d.size(), 12);
        assert_eq!(named_group("Dtilde6").unwrap().size(), 12);
    }

    #[test]
    fn constructions_pass_axioms() {
        for name in ["C1", "C6", "D6", "Q8", "H3", "Htilde3", "Dtilde6", "C2xC3", "D6xC12"] {
            let g = named_group(name).unwrap();
            assert!(check_group_axioms(g.algebra()).unwrap().is_pass(), "{name}");
        }
    }

    #[test]
    fn trivial_subgroup() {
        let g = quaternion().unwrap();
        let s = subgroup_generated(&g, &[g.identity()]).unwrap();
        assert_eq!(s.group.size(), 1);
        assert_eq!(s.inclusion, vec![g.identity()]);
    }

    #[test]
    fn invalid_parameters() {
        assert!(cyclic(0).is_err());
        assert!(heisenberg(4).is_err());
        assert!(named_group("Z5").is_err());
        assert!(named_group("D5").is_err());
    }

    #[test]
    fn non_group_table_rejected() {
        let r = Group::from_table("bad", 2, vec![0, 0, 0, 0], vec!["x".into(), "y".into()]);
        assert!(matches!(r, Err(GroupError::NotAGroup(_))));
    }
}
