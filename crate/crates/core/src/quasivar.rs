//! Quasivariety membership between finite groups via homomorphism kernels,
//! and the two five-element non-modular sublattices of group quasivarieties.

use crate::algebra::Element;
use crate::groups::{cyclic, dihedral, dihedral_tilde, direct_product, heisenberg, heisenberg_tilde, Group, GroupError};
use crate::iso::is_homomorphism;
use crate::partition::Partition;
use crate::report::{Report, Verdict};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::VecDeque;
use std::fmt;

/// Default number of Cayley-edge checks allowed per homomorphism search.
pub const DEFAULT_HOM_BUDGET: u64 = 100_000_000;

/// Largest source size for which an embedding certificate is materialised.
pub const CERTIFICATE_MAX: usize = 100;

const NONE: Element = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomMode {
    All,
    /// Stop as soon as the kernels found so far meet to the diagonal.
    SeparatingClosure,
}

/// Search configuration shared by all membership queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget: u64,
    /// Shuffles candidate images; `None` keeps increasing index order.
    pub seed: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_HOM_BUDGET, seed: None }
    }
}

/// A small generating set: a single generator or pair when one exists
/// (smallest element orders preferred), otherwise grown greedily.
pub fn generating_set(g: &Group) -> Vec<Element> {
    let k = g.size();
    if k == 1 {
        return Vec::new();
    }
    let mut by_order: Vec<Element> = g.elements().filter(|&x| x != g.identity()).collect();
    by_order.sort_by_key(|&x| (g.order(x), x));
    if let Some(&x) = by_order.iter().find(|&&x| g.order(x) as usize == k) {
        return vec![x];
    }
    if k <= 300 {
        let mut best: Option<(u64, Element, Element)> = None;
        for (i, &x) in by_order.iter().enumerate() {
            for &y in &by_order[i + 1..] {
                let cost = g.order(x) * g.order(y);
                if best.is_some_and(|(c, _, _)| c <= cost) {
                    continue;
                }
                if g.closure(&[x, y]).len() == k {
                    best = Some((cost, x, y));
                }
            }
        }
        if let Some((_, x, y)) = best {
            return vec![x, y];
        }
    }
    let mut gens = Vec::new();
    let mut span = g.closure(&gens);
    while span.len() < k {
        let pick = by_order
            .iter()
            .copied()
            .filter(|x| span.binary_search(x).is_err())
            .max_by_key(|&x| {
                let mut with = gens.clone();
                with.push(x);
                (g.closure(&with).len(), std::cmp::Reverse(g.order(x)), std::cmp::Reverse(x))
            })
            .expect("span is proper");
        gens.push(pick);
        span = g.closure(&gens);
    }
    gens
}

struct HomSearch<'a> {
    a: &'a Group,
    b: &'a Group,
    gens: Vec<Element>,
    images: Vec<Element>,
    candidates: Vec<Vec<Element>>,
    phi: Vec<Element>,
    added: Vec<Element>,
    checks: u64,
    budget: u64,
    exhausted: bool,
    stop: bool,
}

impl HomSearch<'_> {
    /// Extends the partial map by `gens[i] -> h` along Cayley edges.
    fn extend(&mut self, i: usize, h: Element) -> bool {
        self.images[i] = h;
        let mut queue: VecDeque<(Element, bool)> = VecDeque::new();
        for x in self.a.elements() {
            if self.phi[x] != NONE {
                queue.push_back((x, false));
            }
        }
        while let Some((x, all)) = queue.pop_front() {
            let range = if all { 0..=i } else { i..=i };
            for j in range {
                self.checks += 1;
                if self.checks > self.budget {
                    self.exhausted = true;
                    return false;
                }
                let y = self.a.mul(x, self.gens[j]);
                let want = self.b.mul(self.phi[x], self.images[j]);
                if self.phi[y] == NONE {
                    self.phi[y] = want;
                    self.added.push(y);
                    queue.push_back((y, true));
                } else if self.phi[y] != want {
                    return false;
                }
            }
        }
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.added.len() > mark {
            let x = self.added.pop().expect("nonempty");
            self.phi[x] = NONE;
        }
    }

    fn level(&mut self, i: usize, visit: &mut dyn FnMut(&[Element]) -> bool) {
        if i == self.gens.len() {
            if !visit(&self.phi) {
                self.stop = true;
            }
            return;
        }
        for c in 0..self.candidates[i].len() {
            let h = self.candidates[i][c];
            let mark = self.added.len();
            if self.extend(i, h) {
                self.level(i + 1, visit);
            }
            self.rollback(mark);
            if self.stop || self.exhausted {
                return;
            }
        }
    }
}

/// Outcome of a homomorphism search.
#[derive(Debug, Clone, PartialEq)]
pub struct HomSearchResult {
    /// Homomorphisms retained (all in `All` mode; in `SeparatingClosure`
    /// mode only those that refined the kernel meet).
    pub homs: Vec<Vec<Element>>,
    pub kernel_meet: Partition,
    pub checks: u64,
    /// The budget ran out before the search finished.
    pub exhausted: bool,
}

fn search(a: &Group, b: &Group, config: SearchConfig, visit: &mut dyn FnMut(&[Element]) -> bool) -> (u64, bool) {
    let gens = generating_set(a);
    let mut rng = config.seed.map(ChaCha8Rng::seed_from_u64);
    let candidates = gens
        .iter()
        .map(|&g| {
            let og = a.order(g);
            let mut c: Vec<Element> = b.elements().filter(|&h| og.is_multiple_of(b.order(h))).collect();
            if let Some(rng) = rng.as_mut() {
                c.shuffle(rng);
            }
            c
        })
        .collect();
    let mut phi = vec![NONE; a.size()];
    phi[a.identity()] = b.identity();
    let mut s = HomSearch {
        a,
        b,
        images: vec![0; gens.len()],
        gens,
        candidates,
        phi,
        added: Vec::new(),
        checks: 0,
        budget: config.budget,
        exhausted: false,
        stop: false,
    };
    s.level(0, visit);
    (s.checks, s.exhausted)
}

/// Homomorphisms `a -> b` found by backtracking over generator images.
pub fn homomorphisms(a: &Group, b: &Group, mode: HomMode, config: SearchConfig) -> HomSearchResult {
    let mut meet = Partition::universal(a.size());
    let mut homs = Vec::new();
    let (checks, exhausted) = search(a, b, config, &mut |phi| {
        let kernel = Partition::from_labels(phi);
        let refined = meet.meet(&kernel);
        let progress = refined != meet;
        meet = refined;
        if mode == HomMode::All || progress {
            homs.push(phi.to_vec());
        }
        !(mode == HomMode::SeparatingClosure && meet.is_diagonal())
    });
    HomSearchResult { homs, kernel_meet: meet, checks, exhausted }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    True,
    False,
    Unknown,
}

impl Membership {
    pub fn and(self, other: Membership) -> Membership {
        match (self, other) {
            (Membership::False, _) | (_, Membership::False) => Membership::False,
            (Membership::Unknown, _) | (_, Membership::Unknown) => Membership::Unknown,
            _ => Membership::True,
        }
    }

    pub fn not(self) -> Membership {
        match self {
            Membership::True => Membership::False,
            Membership::False => Membership::True,
            Membership::Unknown => Membership::Unknown,
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::True => "true",
            Membership::False => "false",
            Membership::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipResult {
    pub membership: Membership,
    /// Meet of the kernels of all homomorphisms found (into any target).
    pub kernel_meet: Partition,
    pub checks: u64,
    /// Number of factors `m` of the verified embedding into a product of targets.
    pub certificate_factors: Option<usize>,
}

/// Is `a` in the quasivariety generated by `targets`? True iff the kernels
/// of all homomorphisms into the targets meet to the diagonal.
pub fn in_qvar_of(a: &Group, targets: &[&Group], config: SearchConfig) -> MembershipResult {
    let mut meet = Partition::universal(a.size());
    let mut separating: Vec<(usize, Vec<Element>)> = Vec::new();
    let mut checks = 0;
    let mut exhausted = false;
    for (t, b) in targets.iter().enumerate() {
        if meet.is_diagonal() {
            break;
        }
        let remaining = SearchConfig { budget: config.budget.saturating_sub(checks), ..config };
        let (used, ran_out) = search(a, b, remaining, &mut |phi| {
            let refined = meet.meet(&Partition::from_labels(phi));
            if refined != meet {
                meet = refined;
                separating.push((t, phi.to_vec()));
            }
            !meet.is_diagonal()
        });
        checks += used;
        if ran_out {
            exhausted = true;
            break;
        }
    }
    let membership = if meet.is_diagonal() {
        Membership::True
    } else if exhausted {
        Membership::Unknown
    } else {
        Membership::False
    };
    let certificate_factors = if membership == Membership::True && a.size() <= CERTIFICATE_MAX {
        // the kernels separate points, so the product map must be an embedding
        assert!(verify_embedding(a, targets, &separating), "separating homomorphisms do not embed");
        Some(separating.len())
    } else {
        None
    };
    MembershipResult { membership, kernel_meet: meet, checks, certificate_factors }
}

/// Checks that `x -> (φ_1(x), ..., φ_m(x))` is an injective homomorphism
/// into the product of the respective targets.
fn verify_embedding(a: &Group, targets: &[&Group], homs: &[(usize, Vec<Element>)]) -> bool {
    let all_homs = homs.iter().all(|(t, phi)| is_homomorphism(a.algebra(), targets[*t].algebra(), phi));
    let mut tuples: Vec<Vec<Element>> =
        a.elements().map(|x| homs.iter().map(|(_, phi)| phi[x]).collect()).collect();
    tuples.sort();
    tuples.dedup();
    all_homs && tuples.len() == a.size()
}

pub fn in_qvar(a: &Group, b: &Group, config: SearchConfig) -> MembershipResult {
    in_qvar_of(a, &[b], config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QvarRelation {
    #[serde(rename = "A<B")]
    Less,
    #[serde(rename = "B<A")]
    Greater,
    #[serde(rename = "equal")]
    Equal,
    #[serde(rename = "incomparable")]
    Incomparable,
    #[serde(rename = "unknown")]
    Unknown,
}

impl fmt::Display for QvarRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QvarRelation::Less => "A<B",
            QvarRelation::Greater => "B<A",
            QvarRelation::Equal => "equal",
            QvarRelation::Incomparable => "incomparable",
            QvarRelation::Unknown => "unknown",
        })
    }
}

/// Compares `qvar{a}` with `qvar{b}`.
pub fn qvar_relation(a: &Group, b: &Group, config: SearchConfig) -> (QvarRelation, u64) {
    let ab = in_qvar(a, b, config);
    let ba = in_qvar(b, a, config);
    let rel = match (ab.membership, ba.membership) {
        (Membership::True, Membership::True) => QvarRelation::Equal,
        (Membership::True, Membership::False) => QvarRelation::Less,
        (Membership::False, Membership::True) => QvarRelation::Greater,
        (Membership::False, Membership::False) => QvarRelation::Incomparable,
        _ => QvarRelation::Unknown,
    };
    (rel, ab.checks + ba.checks)
}

/// `qvar{a} ∨ qvar{b} = qvar{t}`: `t ∈ qvar{a, b}` and `a, b ∈ qvar{t}`.
/// Equivalent to mutual membership of `t` and `a × b`, since `qvar{a × b}`
/// is `qvar{a, b}`.
pub fn join_equals(a: &Group, b: &Group, t: &Group, config: SearchConfig) -> (Membership, u64) {
    let up = in_qvar_of(t, &[a, b], config);
    let left = in_qvar(a, t, config);
    let right = in_qvar(b, t, config);
    (up.membership.and(left.membership).and(right.membership), up.checks + left.checks + right.checks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PentagonKind {
    /// Inside groups of exponent dividing p².
    OddSquare,
    /// Inside groups of exponent dividing 4p.
    FourP,
}

impl PentagonKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PentagonKind::OddSquare => "odd-square",
            PentagonKind::FourP => "four-p",
        }
    }
}

impl std::str::FromStr for PentagonKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "odd-square" => Ok(PentagonKind::OddSquare),
            "four-p" => Ok(PentagonKind::FourP),
            _ => Err(format!("unknown pentagon kind `{s}` (expected odd-square or four-p)")),
        }
    }
}

/// The five generating groups of a pentagon.
pub struct PentagonSpec {
    pub kind: PentagonKind,
    pub p: usize,
    pub bottom: Group,
    pub left_lower: Group,
    pub left_upper: Group,
    pub right: Group,
    pub top: Group,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PentagonError {
    #[error("p must be an odd prime, got {0}")]
    NotOddPrime(usize),
    #[error("p = {0} is beyond the supported range; enable large parameters to try it")]
    TooLarge(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl PentagonSpec {
    pub fn new(kind: PentagonKind, p: usize, allow_large: bool) -> Result<Self, PentagonError> {
        if p < 3 || p.is_multiple_of(2) || !(2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return Err(PentagonError::NotOddPrime(p));
        }
        if p > 5 || (p == 5 && !allow_large) {
            return Err(PentagonError::TooLarge(p));
        }
        Ok(match kind {
            PentagonKind::OddSquare => {
                let h = heisenberg(p)?;
                let c = cyclic(p * p)?;
                PentagonSpec {
                    kind,
                    p,
                    bottom: cyclic(p)?,
                    left_lower: c.clone(),
                    left_upper: heisenberg_tilde(p)?,
                    top: direct_product(&h, &c)?,
                    right: h,
                }
            }
            PentagonKind::FourP => {
                let d = dihedral(p)?;
                let c = cyclic(4 * p)?;
                PentagonSpec {
                    kind,
                    p,
                    bottom: cyclic(2 * p)?,
                    left_lower: c.clone(),
                    left_upper: dihedral_tilde(p)?,
                    top: direct_product(&d, &c)?,
                    right: d,
                }
            }
        })
    }

    pub fn claim(&self) -> String {
        format!("pentagon-{}-p{}", self.kind.as_str(), self.p)
    }

    fn nodes(&self) -> [(&'static str, &Group); 5] {
        [
            ("bottom", &self.bottom),
            ("left-lower", &self.left_lower),
            ("left-upper", &self.left_upper),
            ("right", &self.right),
            ("top", &self.top),
        ]
    }
}

fn membership_verdict(m: Membership, expected: bool) -> Verdict {
    match m {
        Membership::Unknown => Verdict::Unknown,
        Membership::True => Verdict::from_bool(expected),
        Membership::False => Verdict::from_bool(!expected),
    }
}

/// Checks every edge, non-edge and join of the pentagon; the two meets are
/// recorded as assumed. Returns the overall report followed by one report
/// per item.
pub fn verify_pentagon(spec: &PentagonSpec, config: SearchConfig) -> Vec<Report> {
    let base = spec.claim();
    let name = |g: &Group| g.name().to_string();
    let mut items: Vec<Report> = Vec::new();

    let edges = [
        (&spec.bottom, &spec.left_lower),
        (&spec.left_lower, &spec.left_upper),
        (&spec.left_upper, &spec.top),
        (&spec.bottom, &spec.right),
        (&spec.right, &spec.top),
    ];
    for (lo, hi) in edges {
        let up = in_qvar(lo, hi, config);
        let down = in_qvar(hi, lo, config);
        let verdict = crate::report::combine([
            membership_verdict(up.membership, true),
            membership_verdict(down.membership, false),
        ]);
        items.push(Report::new(
            format!("{base}/edge:{}<{}", name(lo), name(hi)),
            verdict,
            format!("{} in qvar{{{}}}: {}; converse: {}", name(lo), name(hi), up.membership, down.membership),
        )
        .with_witness(json!({"converse_kernel_meet": down.kernel_meet, "certificate_factors": up.certificate_factors}))
        .with_evaluations(up.checks + down.checks));
    }

    for (x, y) in [(&spec.left_lower, &spec.right), (&spec.left_upper, &spec.right)] {
        let (rel, checks) = qvar_relation(x, y, config);
        let verdict = match rel {
            QvarRelation::Incomparable => Verdict::Pass,
            QvarRelation::Unknown => Verdict::Unknown,
            _ => Verdict::Fail,
        };
        items.push(
            Report::new(format!("{base}/incomparable:{}|{}", name(x), name(y)), verdict, format!("relation {rel}"))
                .with_evaluations(checks),
        );
    }

    for (x, y) in [(&spec.left_lower, &spec.right), (&spec.left_upper, &spec.right)] {
        let (m, checks) = join_equals(x, y, &spec.top, config);
        items.push(
            Report::new(
                format!("{base}/join:{}v{}={}", name(x), name(y), name(&spec.top)),
                membership_verdict(m, true),
                format!("join equals top: {m}"),
            )
            .with_evaluations(checks),
        );
    }

    for x in [&spec.left_lower, &spec.left_upper] {
        items.push(Report::new(
            format!("{base}/meet:{}^{}={}", name(x), name(&spec.right), name(&spec.bottom)),
            Verdict::Assumed,
            "taken from the literature; meets of quasivarieties are not machine-checked",
        ));
    }

    let checked = crate::report::combine(items.iter().map(|r| r.verdict));
    let modular = Report::new(
        format!("{base}/modular-law"),
        checked,
        format!(
            "with a = {}, b = {}, c = {}: a v (c ^ b) = a but (a v c) ^ b = b, and a < b",
            name(&spec.left_lower),
            name(&spec.left_upper),
            name(&spec.right)
        ),
    );
    items.push(modular);

    let total: u64 = items.iter().map(|r| r.evaluations).sum();
    let overall = match checked {
        Verdict::Pass | Verdict::Assumed => {
            Report::pass(base.clone(), "non-modularity confirmed modulo assumed meets")
        }
        v => {
            let culprit = items.iter().find(|r| r.verdict == v).map(|r| r.claim.clone()).unwrap_or_default();
            Report::new(base.clone(), v, format!("{} at {culprit}", v.as_str()))
        }
    }
    .with_witness(json!({
        "nodes": spec.nodes().iter().map(|(role, g)| json!({"role": role, "group": g.name(), "order": g.size(), "exponent": g.exponent()})).collect::<Vec<_>>(),
    }))
    .with_evaluations(total);
    let mut out = vec![overall];
    items.sort_by(|a, b| a.claim.cmp(&b.claim));
    out.extend(items);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::named_group;

    fn g(name: &str) -> Group {
        named_group(name).unwrap()
    }

    #[test]
    fn hom_counts() {
        let all = |a: &str, b: &str| homomorphisms(&g(a), &g(b), HomMode::All, SearchConfig::default());
        assert_eq!(all("C2", "C2").homs.len(), 2);
        // oracle: |Hom(C_m, C_n)| = gcd(m, n)
        assert_eq!(all("C4", "C6").homs.len(), 2);
        assert_eq!(all("C9", "C3").homs.len(), 3);
        // commuting pairs from {1, three reflections}: 1 + 3 + 3 + 3
        assert_eq!(all("C2xC2", "D6").homs.len(), 10);
        let r = all("C4", "C2");
        assert_eq!(r.kernel_meet, Partition::from_labels(&[0, 1, 0, 1]));
    }

    #[test]
    fn every_found_map_is_a_hom() {
        let (a, b) = (g("D6"), g("Q8"));
        for phi in homomorphisms(&a, &b, HomMode::All, SearchConfig::default()).homs {
            assert!(is_homomorphism(a.algebra(), b.algebra(), &phi));
        }
    }

    #[test]
    fn memberships() {
        let cfg = SearchConfig::default();
        assert_eq!(in_qvar(&g("C3"), &g("H3"), cfg).membership, Membership::True);
        assert_eq!(in_qvar(&g("C9"), &g("H3"), cfg).membership, Membership::False);
        assert_eq!(in_qvar(&g("E"), &g("C5"), cfg).membership, Membership::True);
        assert_eq!(in_qvar(&g("C4"), &g("C2"), cfg).membership, Membership::False);
        let r = in_qvar(&g("C3"), &g("H3"), cfg);
        assert_eq!(r.certificate_factors, Some(1));
        // C2xC2 needs two factors of C2
        assert_eq!(in_qvar(&g("C2xC2"), &g("C2"), cfg).certificate_factors, Some(2));
    }

    #[test]
    fn relations_and_joins() {
        let cfg = SearchConfig::default();
        assert_eq!(qvar_relation(&g("C3"), &g("C9"), cfg).0, QvarRelation::Less);
        assert_eq!(qvar_relation(&g("C9"), &g("H3"), cfg).0, QvarRelation::Incomparable);
        assert_eq!(qvar_relation(&g("Q8"), &g("Q8"), cfg).0, QvarRelation::Equal);
        assert_eq!(join_equals(&g("C2"), &g("C3"), &g("C6"), cfg).0, Membership::True);
        assert_eq!(join_equals(&g("D6"), &g("E"), &g("D6"), cfg).0, Membership::True);
        assert_eq!(join_equals(&g("C2"), &g("C3"), &g("C12"), cfg).0, Membership::False);
    }

    #[test]
    fn tiny_budget_is_unknown() {
        let r = in_qvar(&g("H3"), &g("C9"), SearchConfig { budget: 5, seed: None });
        assert_eq!(r.membership, Membership::Unknown);
    }

    #[test]
    fn shuffled_search_same_meet() {
        let base = homomorphisms(&g("D6"), &g("D6"), HomMode::All, SearchConfig::default());
        for seed in 0..3 {
            let r = homomorphisms(&g("D6"), &g("D6"), HomMode::All, SearchConfig { seed: Some(seed), ..Default::default() });
            assert_eq!(r.kernel_meet, base.kernel_meet);
            let mut a = r.homs.clone();
            let mut b = base.homs.clone();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn pentagon_guard() {
        assert_eq!(PentagonSpec::new(PentagonKind::OddSquare, 2, false).err(), Some(PentagonError::NotOddPrime(2)));
        assert_eq!(PentagonSpec::new(PentagonKind::FourP, 9, false).err(), Some(PentagonError::NotOddPrime(9)));
        assert_eq!(PentagonSpec::new(PentagonKind::FourP, 5, false).err(), Some(PentagonError::TooLarge(5)));
    }

    #[test]
    fn generating_sets_generate() {
        for name in ["C1", "C9", "D6", "Q8", "H3", "Htilde3", "H3xC9", "D6xC12"] {
            let grp = g(name);
            let gens = generating_set(&grp);
            assert_eq!(grp.closure(&gens).len(), grp.size(), "{name}");
        }
    }
}
