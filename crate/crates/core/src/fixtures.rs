//! The standard corpus of groups used by the verification campaigns.

use crate::algebra::FinAlgebra;
use crate::classes::Class;
use crate::constructions::flat_group;
use crate::enumerate::{Census, EnumError, EnumOptions, EnumSpec, Filter};
use crate::groups::{named_group, Group};

/// Named groups of order at most 72 that appear in the pentagon and the
/// lemma checks.
pub const FIXTURE_GROUPS: &[&str] =
    &["E", "C2", "C3", "C4", "C6", "C9", "C12", "D6", "Dtilde6", "Q8", "H3", "D6xC12"];

/// Groups whose flat extensions must be simple in the acceptance sweep.
pub const SIMPLICITY_GROUPS: &[&str] = &["C2", "C3", "C4", "C6", "Q8", "D6", "H3"];

/// One representative of every isomorphism type of group of order at most 8.
pub const SMALL_GROUPS: &[&str] = &[
    "E", "C2", "C3", "C4", "C2xC2", "C5", "C6", "D6", "C7", "C8", "C2xC4", "C2xC2xC2", "D8", "Q8",
];

fn build(names: &[&str]) -> Vec<Group> {
    names.iter().map(|n| named_group(n).unwrap_or_else(|e| panic!("fixture {n}: {e}"))).collect()
}

pub fn fixture_groups() -> Vec<Group> {
    build(FIXTURE_GROUPS)
}

pub fn small_groups() -> Vec<Group> {
    build(SMALL_GROUPS)
}

/// `(name, flat extension)` for every fixture group.
pub fn fixture_flats() -> Vec<(String, FinAlgebra)> {
    fixture_groups().iter().map(|g| (format!("flat({})", g.name()), flat_group(g))).collect()
}

/// Shipped censuses: `(filter, n, order, JSON)`.
const SHIPPED_CENSUSES: &[(&str, u64, usize, &str)] = &[
    ("Srn", 1, 1, include_str!("../fixtures/census/Srn-n1-order1.json")),
    ("Srn", 1, 2, include_str!("../fixtures/census/Srn-n1-order2.json")),
    ("Srn", 1, 3, include_str!("../fixtures/census/Srn-n1-order3.json")),
    ("Srn", 1, 4, include_str!("../fixtures/census/Srn-n1-order4.json")),
    ("Srn", 2, 1, include_str!("../fixtures/census/Srn-n2-order1.json")),
    ("Srn", 2, 2, include_str!("../fixtures/census/Srn-n2-order2.json")),
    ("Srn", 2, 3, include_str!("../fixtures/census/Srn-n2-order3.json")),
    ("Srn", 2, 4, include_str!("../fixtures/census/Srn-n2-order4.json")),
    ("Srn", 3, 1, include_str!("../fixtures/census/Srn-n3-order1.json")),
    ("Srn", 3, 2, include_str!("../fixtures/census/Srn-n3-order2.json")),
    ("Srn", 3, 3, include_str!("../fixtures/census/Srn-n3-order3.json")),
    ("Srn", 3, 4, include_str!("../fixtures/census/Srn-n3-order4.json")),
    ("Mn", 1, 1, include_str!("../fixtures/census/Mn-n1-order1.json")),
    ("Mn", 1, 2, include_str!("../fixtures/census/Mn-n1-order2.json")),
    ("Mn", 1, 3, include_str!("../fixtures/census/Mn-n1-order3.json")),
    ("Mn", 1, 4, include_str!("../fixtures/census/Mn-n1-order4.json")),
    ("Mn", 2, 1, include_str!("../fixtures/census/Mn-n2-order1.json")),
    ("Mn", 2, 2, include_str!("../fixtures/census/Mn-n2-order2.json")),
    ("Mn", 2, 3, include_str!("../fixtures/census/Mn-n2-order3.json")),
    ("Mn", 2, 4, include_str!("../fixtures/census/Mn-n2-order4.json")),
    ("Mn", 3, 1, include_str!("../fixtures/census/Mn-n3-order1.json")),
    ("Mn", 3, 2, include_str!("../fixtures/census/Mn-n3-order2.json")),
    ("Mn", 3, 3, include_str!("../fixtures/census/Mn-n3-order3.json")),
    ("Mn", 3, 4, include_str!("../fixtures/census/Mn-n3-order4.json")),
];

/// Census of the given order for `Sr_n` or `M_n`; read from the shipped
/// files when available and enumerated otherwise.
pub fn census(order: usize, class: Class, n: u64) -> Result<Census, EnumError> {
    let filter = Filter::Class(class);
    let shipped = SHIPPED_CENSUSES.iter().find(|(f, sn, k, _)| *f == filter.key() && *sn == n && *k == order);
    match shipped {
        Some((_, _, _, text)) => {
            let v = serde_json::from_str(text).map_err(|e| EnumError::Malformed(e.to_string()))?;
            Census::from_json(&v)
        }
        None => crate::enumerate::enumerate(EnumSpec::new(order, filter, n), EnumOptions::default()),
    }
}

/// Members of the censuses of orders `1..=order_max`.
pub fn census_members(order_max: usize, class: Class, n: u64) -> Result<Vec<FinAlgebra>, EnumError> {
    let mut out = Vec::new();
    for k in 1..=order_max {
        out.extend(census(k, class, n)?.algebras);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;

    #[test]
    fn shipped_censuses_are_current() {
        for &(f, n, k, _) in SHIPPED_CENSUSES {
            let filter: Filter = f.parse().unwrap();
            let Filter::Class(class) = filter else { unreachable!() };
            let fresh = crate::enumerate::enumerate(EnumSpec::new(k, filter, n), EnumOptions::default()).unwrap();
            assert_eq!(census(k, class, n).unwrap(), fresh, "{f} n={n} order={k}");
        }
    }

    #[test]
    fn shipped_flats_are_current() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/flat");
        for g in fixture_groups() {
            let text = std::fs::read_to_string(dir.join(format!("{}.json", g.name()))).unwrap();
            let shipped = FinAlgebra::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(shipped, flat_group(&g), "{}", g.name());
        }
    }

    #[test]
    fn orders() {
        let sizes: Vec<usize> = fixture_groups().iter().map(Group::size).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 6, 9, 12, 6, 12, 8, 27, 72]);
        assert!(fixture_groups().iter().all(|g| g.size() <= 72));
    }

    #[test]
    fn small_groups_pairwise_distinct() {
        let gs = small_groups();
        for (i, a) in gs.iter().enumerate() {
            assert!(a.size() <= 8);
            for b in &gs[i + 1..] {
                assert!(!is_isomorphic(a.algebra(), b.algebra()), "{} ~ {}", a.name(), b.name());
            }
        }
        // counts per order: 1,1,1,2,1,2,1,5
        let mut per = [0; 9];
        for g in &gs {
            per[g.size()] += 1;
        }
        assert_eq!(per[1..], [1, 1, 1, 2, 1, 2, 1, 5]);
    }
}
