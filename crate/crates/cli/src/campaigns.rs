//! Verification campaigns: fixed claim lists run over the fixture corpus.
//!
//! Every campaign returns its reports sorted by claim id. Items inside a
//! claim run in parallel; the first failing item in corpus order is the one
//! reported, so output does not depend on scheduling.

use flatcliff::algebra::{check_idempotent_powers, Element, FinAlgebra};
use flatcliff::classes::{check_in_class, in_class, Class};
use flatcliff::congruences::{
    check_flat_decomposition, check_tau_extensions, classify_si, flat_extension_of_group, is_semifield, is_simple,
    is_subdirectly_irreducible, restriction_check,
};
use flatcliff::constructions::{
    check_power_term_rhd, check_semidiscriminator, flat_group, pointed_semidiscriminator, product, verify_ideal_lemma,
    with_clifford_inverse,
};
use flatcliff::enumerate::{verify_basis_equivalence, EnumOptions};
use flatcliff::fixtures::{census_members, fixture_groups, small_groups};
use flatcliff::groups::Group;
use flatcliff::report::{combine, Report, Verdict};
use flatcliff::terms::{satisfies_all, schema, Identity};
use rayon::prelude::*;
use serde_json::json;
use std::collections::BTreeSet;

/// Census orders used by the campaigns.
pub const CENSUS_ORDER: usize = 4;

/// Largest algebra for which all mul-ideals are enumerated.
const IDEAL_ENUMERATION_MAX: usize = 10;

/// A named algebra of the corpus.
#[derive(Debug, Clone)]
pub struct Item {
    pub name: String,
    pub algebra: FinAlgebra,
    /// The group when the item is its flat extension.
    pub group: Option<Group>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub n: u64,
    /// Census members of `Sr_n`, then the members of `m`.
    pub sr: Vec<Item>,
    /// Census members of `M_n`, flat extensions of fixture groups of exponent
    /// dividing `n`, and products of two small such flats.
    pub m: Vec<Item>,
}

fn census_items(class: Class, n: u64) -> Result<Vec<Item>, String> {
    let members = census_members(CENSUS_ORDER, class, n).map_err(|e| e.to_string())?;
    let key = match class {
        Class::Sr => "Srn",
        Class::M => "Mn",
        Class::N => "Nn",
    };
    Ok(members
        .into_iter()
        .enumerate()
        .map(|(i, algebra)| Item { name: format!("census:{key}-n{n}#{i}"), algebra, group: None })
        .collect())
}

impl Corpus {
    pub fn new(n: u64) -> Result<Corpus, String> {
        let flats: Vec<Item> = fixture_groups()
            .into_iter()
            .filter(|g| n.is_multiple_of(g.exponent()))
            .map(|g| Item { name: format!("flat({})", g.name()), algebra: flat_group(&g), group: Some(g) })
            .collect();
        let small: Vec<&Item> = flats.iter().filter(|f| f.algebra.size() <= 4).collect();
        let mut products = Vec::new();
        for (i, a) in small.iter().enumerate() {
            for b in &small[i..] {
                let algebra = product(&a.algebra, &b.algebra).map_err(|e| e.to_string())?;
                products.push(Item { name: format!("prod({},{})", a.name, b.name), algebra, group: None });
            }
        }
        let mut m = census_items(Class::M, n)?;
        m.extend(flats);
        m.extend(products);
        let mut sr = census_items(Class::Sr, n)?;
        sr.extend(m.iter().filter(|i| !i.name.starts_with("census:")).cloned());
        Ok(Corpus { n, sr, m })
    }
}

/// Runs `check` on every item and folds the results into one report for
/// `claim`. Errors count as unknown.
pub fn sweep<F>(claim: &str, items: &[Item], check: F) -> Report
where
    F: Fn(&Item) -> Result<Report, String> + Sync,
{
    let results: Vec<Report> = items
        .par_iter()
        .map(|item| check(item).unwrap_or_else(|e| Report::unknown(claim, format!("error: {e}"))))
        .collect();
    let verdict = combine(results.iter().map(|r| r.verdict));
    let evaluations = results.iter().map(|r| r.evaluations).sum();
    let applicable = results.iter().filter(|r| r.verdict != Verdict::Inapplicable).count();
    let first = |v: Verdict| items.iter().zip(&results).find(|(_, r)| r.verdict == v);
    let report = match verdict {
        Verdict::Fail | Verdict::Unknown => {
            let (item, r) = first(verdict).expect("verdict came from some item");
            Report::new(claim, verdict, format!("{}: {}", item.name, r.detail))
                .with_witness(json!({"algebra": item.name, "table": item.algebra.to_json(), "report": r}))
        }
        _ if applicable == items.len() => Report::new(claim, verdict, format!("{} checked", algebras(applicable))),
        _ => Report::new(claim, verdict, format!("{} checked, {} inapplicable", algebras(applicable), items.len() - applicable)),
    };
    report.with_evaluations(evaluations)
}

fn algebras(k: usize) -> String {
    if k == 1 {
        "1 algebra".to_string()
    } else {
        format!("{k} algebras")
    }
}

fn identities(keys: &[&str], n: u64) -> Vec<Identity> {
    keys.iter().flat_map(|k| schema(k).expect("builtin schema").identities(n)).collect()
}

fn schema_check(claim: &str, items: &[Item], keys: &[&str], n: u64, budget: u64) -> Report {
    let ids = identities(keys, n);
    sweep(claim, items, |item| satisfies_all(&item.algebra, claim, &ids, n, budget).map_err(|e| e.to_string()))
}

/// Subsets closed under multiplication generated by at most two elements.
fn small_mul_closures(a: &FinAlgebra) -> BTreeSet<Vec<Element>> {
    let s = a.semiring().expect("semiring signature");
    let mut out = BTreeSet::new();
    for x in a.elements() {
        for y in x..a.size() {
            let mut set: BTreeSet<Element> = [x, y].into_iter().collect();
            loop {
                let new: Vec<Element> =
                    set.iter().flat_map(|&p| set.iter().map(move |&q| (p, q))).map(|(p, q)| s.mul(p, q)).collect();
                let before = set.len();
                set.extend(new);
                if set.len() == before {
                    break;
                }
            }
            out.insert(set.into_iter().collect());
        }
    }
    out
}

fn mul_ideals(a: &FinAlgebra) -> Vec<Vec<Element>> {
    let s = a.semiring().expect("semiring signature");
    let k = a.size();
    (1u32..1 << k)
        .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|j| {
            let set: BTreeSet<Element> = j.iter().copied().collect();
            j.iter().all(|&x| a.elements().all(|y| set.contains(&s.mul(x, y)) && set.contains(&s.mul(y, x))))
        })
        .collect()
}

/// The ideal lemma over all pairs (J, H) of a small algebra, or over
/// `({0}, G)` for a flat extension.
fn ideal_lemma_item(item: &Item, n: u64, budget: u64) -> Result<Report, String> {
    let claim = "ideal-sum";
    let a = &item.algebra;
    let pairs: Vec<(Vec<Element>, Vec<Element>)> = if let Some(g) = &item.group {
        vec![(vec![0], (1..=g.size()).collect())]
    } else if a.size() <= IDEAL_ENUMERATION_MAX {
        let hs = small_mul_closures(a);
        mul_ideals(a).into_iter().flat_map(|j| hs.iter().map(move |h| (j.clone(), h.clone()))).collect()
    } else {
        return Ok(Report::inapplicable(claim, "too large to enumerate ideals"));
    };
    let mut applicable = 0u64;
    let mut evaluations = 0u64;
    for (j, h) in &pairs {
        let r = verify_ideal_lemma(a, j, h, n, budget).map_err(|e| e.to_string())?;
        evaluations += r.evaluations;
        match r.verdict {
            Verdict::Inapplicable => {}
            Verdict::Pass => applicable += 1,
            _ => return Ok(r.with_witness(json!({"J": j, "H": h}))),
        }
    }
    if applicable == 0 {
        return Ok(Report::inapplicable(claim, "no admissible (J, H)"));
    }
    Ok(Report::pass(claim, format!("{applicable} admissible (J, H) pairs")).with_evaluations(evaluations))
}

fn semifield_is_flat(item: &Item, n: u64) -> Report {
    let claim = "semifield-flat";
    if !is_semifield(&item.algebra) {
        return Report::inapplicable(claim, "not a semifield");
    }
    match flat_extension_of_group(&item.algebra, n) {
        Some(g) => Report::pass(claim, format!("flat extension of a group of order {}", g.size())),
        None => Report::fail(claim, "semifield is not the flat extension of its nonzero part"),
    }
}

fn si_is_semifield(item: &Item) -> Report {
    let claim = "si-semifield";
    if !is_subdirectly_irreducible(&item.algebra) {
        return Report::inapplicable(claim, "not subdirectly irreducible");
    }
    if is_semifield(&item.algebra) {
        Report::pass(claim, "SI and a semifield")
    } else {
        Report::fail(claim, "SI but not a semifield")
    }
}

fn in_m(item: &Item, n: u64, budget: u64) -> Result<bool, String> {
    Ok(in_class(&item.algebra, Class::M, n, budget).map_err(|e| e.to_string())? == Some(true))
}

/// Simplicity of every fixture flat extension, independent of `n`.
pub fn flat_simplicity(groups: &[Group]) -> Report {
    let items: Vec<Item> = groups
        .iter()
        .map(|g| Item { name: format!("flat({})", g.name()), algebra: flat_group(g), group: Some(g.clone()) })
        .collect();
    sweep("lemma-2.3", &items, |item| {
        Ok(Report::new("flat-simple", Verdict::from_bool(is_simple(&item.algebra)), "exactly two congruences"))
    })
}

pub fn verify_lemmas(n: u64, budget: u64) -> Result<Vec<Report>, String> {
    let corpus = Corpus::new(n)?;
    let (sr, m) = (&corpus.sr, &corpus.m);
    let mut reports = vec![
        flat_simplicity(&fixture_groups()),
        sweep("lemma-3.1", sr, |item| {
            let class = check_in_class(&item.algebra, Class::Sr, n, budget).map_err(|e| e.to_string())?;
            if !class.is_pass() {
                return Ok(Report::inapplicable("idempotent-powers", class.detail));
            }
            check_idempotent_powers(&item.algebra, n).map_err(|e| e.to_string())
        }),
        schema_check("lemma-3.2", sr, &["powhom"], n, budget),
        schema_check("lemma-3.3", sr, &["mop", "mexpand"], n, budget),
        sweep("lemma-3.4", sr, |item| restriction_check(&item.algebra, n, budget).map_err(|e| e.to_string())),
        schema_check("lemma-4.1", m, &["center", "summing", "new1"], n, budget),
        sweep("lemma-4.2", m, |item| ideal_lemma_item(item, n, budget)),
        sweep("cor-4.3", m, |item| Ok(semifield_is_flat(item, n))),
        sweep("lemma-4.4", m, |item| check_tau_extensions(&item.algebra, n, budget).map_err(|e| e.to_string())),
        sweep("lemma-4.5", m, |item| Ok(si_is_semifield(item))),
        sweep("prop-4.6", m, |item| classify_si(&item.algebra, n, budget).map_err(|e| e.to_string())),
        sweep("cor-4.7", m, |item| {
            if item.algebra.size() < 2 {
                return Ok(Report::inapplicable("subdirect-flat-factors", "one-element algebra"));
            }
            check_flat_decomposition(&item.algebra, n, budget).map_err(|e| e.to_string())
        }),
    ];
    reports.sort_by(|a, b| a.claim.cmp(&b.claim));
    Ok(reports)
}

pub fn verify_theorem(n: u64, budget: u64) -> Result<Vec<Report>, String> {
    let flats: Vec<Item> = fixture_groups()
        .into_iter()
        .map(|g| Item { name: format!("flat({})", g.name()), algebra: flat_group(&g), group: Some(g) })
        .collect();
    let flat_in_m = sweep("theorem-5.2-flat", &flats, |item| {
        let g = item.group.as_ref().expect("flat items carry groups");
        let member = in_m(item, n, budget)?;
        let expected = n.is_multiple_of(g.exponent());
        let detail = format!("exponent {}, in M_{n}: {member}", g.exponent());
        Ok(Report::new("flat-membership", Verdict::from_bool(member == expected), detail))
    });
    let census = census_items(Class::M, n)?;
    let sharp = sweep("theorem-5.2-sharp", &census, |item| {
        let claim = "si-nonzero-group";
        if !is_subdirectly_irreducible(&item.algebra) {
            return Ok(Report::inapplicable(claim, "not subdirectly irreducible"));
        }
        match flat_extension_of_group(&item.algebra, n) {
            Some(g) => Ok(Report::pass(claim, format!("nonzero part a group of exponent {}", g.exponent()))),
            None => Ok(Report::fail(claim, "SI member whose nonzero part is not a group of exponent dividing n")),
        }
    });
    let two = sweep("theorem-5.2-two-idempotents", &census, |item| {
        let claim = "si-two-idempotents";
        if !is_subdirectly_irreducible(&item.algebra) {
            return Ok(Report::inapplicable(claim, "not subdirectly irreducible"));
        }
        let idem = item.algebra.semiring().map_err(|e| e.to_string())?.idempotents().len();
        Ok(Report::new(claim, Verdict::from_bool(idem == 2), format!("{idem} idempotents")))
    });
    let mut reports = vec![flat_in_m, sharp, two];
    reports.sort_by(|a, b| a.claim.cmp(&b.claim));
    Ok(reports)
}

pub fn verify_basis(n: u64, order: usize, budget: u64, options: EnumOptions) -> Result<Vec<Report>, String> {
    let census = verify_basis_equivalence(order, n, options).map_err(|e| e.to_string())?;
    let flats: Vec<Item> = small_groups()
        .into_iter()
        .map(|g| Item { name: format!("flat({})", g.name()), algebra: flat_group(&g), group: Some(g) })
        .collect();
    let both = sweep("basis-small-group-flats", &flats, |item| {
        let e = item.group.as_ref().expect("flat items carry groups").exponent();
        let m = in_class(&item.algebra, Class::M, e, budget).map_err(|e| e.to_string())?;
        let nn = in_class(&item.algebra, Class::N, e, budget).map_err(|e| e.to_string())?;
        let ok = m == Some(true) && nn == Some(true);
        Ok(Report::new("both-bases", Verdict::from_bool(ok), format!("n = {e}: M {m:?}, N {nn:?}")))
    });
    let mut reports = vec![census, both];
    reports.sort_by(|a, b| a.claim.cmp(&b.claim));
    Ok(reports)
}

/// Semidiscriminator behaviour of `ps(C2)` and `ps(C3)`, the power term
/// `x^n*y` on fixture flats, and the Clifford meet identity.
pub fn ps_check(n: Option<u64>, budget: u64) -> Result<Vec<Report>, String> {
    let mut reports = Vec::new();
    for g in fixture_groups().into_iter().filter(|g| ["C2", "C3"].contains(&g.name())) {
        let ps = pointed_semidiscriminator(g.algebra()).map_err(|e| e.to_string())?;
        let r = check_semidiscriminator(&ps).map_err(|e| e.to_string())?;
        reports.push(r.with_claim(format!("ps-semidiscriminator-{}", g.name())));
    }
    let flats: Vec<Item> = fixture_groups()
        .into_iter()
        .map(|g| Item { name: format!("flat({})", g.name()), algebra: flat_group(&g), group: Some(g) })
        .collect();
    let claim = match n {
        Some(n) => format!("power-term-rhd-n{n}"),
        None => "power-term-rhd".to_string(),
    };
    reports.push(sweep(&claim, &flats, |item| {
        let g = item.group.as_ref().expect("flat items carry groups");
        check_power_term_rhd(g, n.unwrap_or(g.exponent())).map_err(|e| e.to_string())
    }));
    let natorder = schema("natorder-clifford").expect("builtin");
    reports.push(sweep("clifford-meet-identity", &flats, |item| {
        let g = item.group.as_ref().expect("flat items carry groups");
        let e = n.unwrap_or(g.exponent());
        if !e.is_multiple_of(g.exponent()) {
            return Ok(Report::inapplicable("clifford-meet", "exponent does not divide n"));
        }
        let with_inv = with_clifford_inverse(&item.algebra, e).map_err(|e| e.to_string())?;
        satisfies_all(&with_inv, "clifford-meet", &natorder.identities(e), e, budget).map_err(|e| e.to_string())
    }));
    reports.sort_by(|a, b| a.claim.cmp(&b.claim));
    Ok(reports)
}
