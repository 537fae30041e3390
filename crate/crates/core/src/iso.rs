//! Isomorphism testing and canonical forms of finite algebras.

use crate::algebra::{Element, FinAlgebra};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("canonical form limited to {max} elements, got {size}")]
    TooLarge { size: usize, max: usize },
}

pub const CANONICAL_MAX: usize = 8;

/// Per-element isomorphism invariants, refined once by neighbourhood.
fn invariants(a: &FinAlgebra) -> Vec<Vec<u64>> {
    let k = a.size();
    let mut base: Vec<Vec<u64>> = vec![Vec::new(); k];
    for (op, sym) in a.signature().ops().iter().enumerate() {
        match sym.arity {
            0 => {
                let c = a.apply(op, &[]);
                for (x, v) in base.iter_mut().enumerate() {
                    v.push(u64::from(x == c));
                }
            }
            1 => {
                let mut preimages = vec![0u64; k];
                for x in 0..k {
                    preimages[a.unary(op, x)] += 1;
                }
                for (x, v) in base.iter_mut().enumerate() {
                    v.push(u64::from(a.unary(op, x) == x));
                    v.push(preimages[x]);
                }
            }
            2 => {
                let mut image_count = vec![0u64; k];
                for x in 0..k {
                    for y in 0..k {
                        image_count[a.binary(op, x, y)] += 1;
                    }
                }
                for (x, v) in base.iter_mut().enumerate() {
                    let f = |p, q| a.binary(op, p, q);
                    v.push(u64::from(f(x, x) == x));
                    v.push((0..k).filter(|&y| f(x, y) == x).count() as u64);
                    v.push((0..k).filter(|&y| f(y, x) == x).count() as u64);
                    v.push((0..k).filter(|&y| f(x, y) == y).count() as u64);
                    v.push((0..k).filter(|&y| f(y, x) == y).count() as u64);
                    v.push((0..k).filter(|&y| f(x, y) == f(y, x)).count() as u64);
                    v.push(image_count[x]);
                    // size of the monogenic orbit x, x.x, (x.x).x, ...
                    let mut seen = vec![false; k];
                    let mut cur = x;
                    let mut len = 0;
                    while !seen[cur] {
                        seen[cur] = true;
                        len += 1;
                        cur = f(cur, x);
                    }
                    v.push(len);
                }
            }
            _ => {}
        }
    }
    // one refinement round: multiset of base classes of f(x, y) over y
    let mut classes: Vec<Vec<u64>> = base.clone();
    let mut sorted = base.clone();
    sorted.sort();
    sorted.dedup();
    let class_of = |v: &Vec<u64>| sorted.binary_search(v).expect("present") as u64;
    for (op, sym) in a.signature().ops().iter().enumerate() {
        if sym.arity != 2 {
            continue;
        }
        for (x, c) in classes.iter_mut().enumerate() {
            let mut row: Vec<u64> = (0..k).map(|y| class_of(&base[a.binary(op, x, y)])).collect();
            row.sort_unstable();
            c.extend(row);
            let mut col: Vec<u64> = (0..k).map(|y| class_of(&base[a.binary(op, y, x)])).collect();
            col.sort_unstable();
            c.extend(col);
        }
    }
    classes
}

struct Search<'a> {
    a: &'a FinAlgebra,
    b: &'a FinAlgebra,
    inv_a: Vec<Vec<u64>>,
    inv_b: Vec<Vec<u64>>,
    map: Vec<Element>,
    used: Vec<bool>,
    trail: Vec<Element>,
    assigned: Vec<Element>,
}

const NONE: Element = usize::MAX;

impl Search<'_> {
    /// Assigns `x -> y` and closes under the operations; false on conflict.
    fn assign(&mut self, x: Element, y: Element) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            if self.map[x] != NONE {
                if self.map[x] != y {
                    return false;
                }
                continue;
            }
            if self.used[y] || self.inv_a[x] != self.inv_b[y] {
                return false;
            }
            self.map[x] = y;
            self.used[y] = true;
            self.trail.push(x);
            self.assigned.push(x);
            for (op, sym) in self.a.signature().ops().iter().enumerate() {
                match sym.arity {
                    1 => queue.push((self.a.unary(op, x), self.b.unary(op, y))),
                    2 => {
                        for i in 0..self.assigned.len() {
                            let u = self.assigned[i];
                            let v = self.map[u];
                            queue.push((self.a.binary(op, x, u), self.b.binary(op, y, v)));
                            queue.push((self.a.binary(op, u, x), self.b.binary(op, v, y)));
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().expect("nonempty");
            self.used[self.map[x]] = false;
            self.map[x] = NONE;
            self.assigned.pop();
        }
    }

    fn full_check(&self) -> bool {
        self.a.signature().ops().iter().enumerate().all(|(op, sym)| {
            if sym.arity <= 2 {
                return true;
            }
            let total = self.a.size().pow(sym.arity as u32);
            let mut args = vec![0; sym.arity];
            (0..total).all(|idx| {
                let mut r = idx;
                for slot in args.iter_mut().rev() {
                    *slot = r % self.a.size();
                    r /= self.a.size();
                }
                let image: Vec<Element> = args.iter().map(|&x| self.map[x]).collect();
                self.map[self.a.apply(op, &args)] == self.b.apply(op, &image)
            })
        })
    }

    fn solve(&mut self, order: &[Element]) -> bool {
        let Some(&x) = order.iter().find(|&&x| self.map[x] == NONE) else {
            return self.full_check();
        };
        for y in 0..self.b.size() {
            if self.used[y] || self.inv_a[x] != self.inv_b[y] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(x, y) && self.solve(order) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// An isomorphism `a -> b` as an element map, if one exists.
pub fn find_isomorphism(a: &FinAlgebra, b: &FinAlgebra) -> Option<Vec<Element>> {
    if a.size() != b.size() || a.signature() != b.signature() {
        return None;
    }
    let inv_a = invariants(a);
    let inv_b = invariants(b);
    let mut ma = inv_a.clone();
    let mut mb = inv_b.clone();
    ma.sort();
    mb.sort();
    if ma != mb {
        return None;
    }
    let k = a.size();
    let mut search = Search {
        a,
        b,
        inv_a,
        inv_b,
        map: vec![NONE; k],
        used: vec![false; k],
        trail: Vec::new(),
        assigned: Vec::new(),
    };
    for (op, sym) in a.signature().ops().iter().enumerate() {
        if sym.arity == 0 && !search.assign(a.apply(op, &[]), b.apply(op, &[])) {
            return None;
        }
    }
    // most constrained first: smallest invariant class
    let mut order: Vec<Element> = (0..k).collect();
    order.sort_by_key(|&x| (search.inv_a.iter().filter(|v| **v == search.inv_a[x]).count(), x));
    if search.solve(&order) {
        Some(search.map)
    } else {
        None
    }
}

pub fn is_isomorphic(a: &FinAlgebra, b: &FinAlgebra) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Checks that `map` is a homomorphism `a -> b` for every shared operation.
pub fn is_homomorphism(a: &FinAlgebra, b: &FinAlgebra, map: &[Element]) -> bool {
    a.signature() == b.signature()
        && map.len() == a.size()
        && a.signature().ops().iter().enumerate().all(|(op, sym)| {
            let k = a.size();
            let total = k.pow(sym.arity as u32);
            let mut args = vec![0; sym.arity];
            (0..total).all(|idx| {
                let mut r = idx;
                for slot in args.iter_mut().rev() {
                    *slot = r % k;
                    r /= k;
                }
                let image: Vec<Element> = args.iter().map(|&x| map[x]).collect();
                map[a.apply(op, &args)] == b.apply(op, &image)
            })
        })
}

/// Calls `f` on every permutation of `0..k` (Heap's algorithm).
pub fn for_each_permutation(k: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..k).collect();
    let mut c = vec![0; k];
    f(&p);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Concatenated tables of `a` relabelled by `perm` (old -> new).
pub fn relabelled_tables(a: &FinAlgebra, perm: &[Element]) -> Vec<Element> {
    let k = a.size();
    let mut inverse = vec![0; k];
    for (x, &y) in perm.iter().enumerate() {
        inverse[y] = x;
    }
    let mut out = Vec::new();
    for (op, sym) in a.signature().ops().iter().enumerate() {
        let total = k.pow(sym.arity as u32);
        let mut args = vec![0; sym.arity];
        for idx in 0..total {
            let mut r = idx;
            for slot in args.iter_mut().rev() {
                *slot = inverse[r % k];
                r /= k;
            }
            out.push(perm[a.apply(op, &args)]);
        }
    }
    out
}

/// The relabelling of `a` whose concatenated tables are lexicographically
/// least over all permutations, together with that permutation (old -> new).
pub fn canonical_form(a: &FinAlgebra) -> Result<(FinAlgebra, Vec<Element>), IsoError> {
    let k = a.size();
    if k > CANONICAL_MAX {
        return Err(IsoError::TooLarge { size: k, max: CANONICAL_MAX });
    }
    let mut best: Option<(Vec<Element>, Vec<Element>)> = None;
    for_each_permutation(k, |perm| {
        let t = relabelled_tables(a, perm);
        if best.as_ref().is_none_or(|(b, _)| t < *b) {
            best = Some((t, perm.to_vec()));
        }
    });
    let (flat, perm) = best.expect("at least the identity permutation");
    let mut tables = Vec::new();
    let mut at = 0;
    for sym in a.signature().ops() {
        let len = k.pow(sym.arity as u32);
        tables.push(flat[at..at + len].to_vec());
        at += len;
    }
    let labels = a.labels().map(|l| {
        let mut out = vec![String::new(); k];
        for (x, &y) in perm.iter().enumerate() {
            out[y] = l[x].clone();
        }
        out
    });
    let canon = FinAlgebra::new(k, a.signature().clone(), tables, labels).expect("relabelling preserves validity");
    Ok((canon, perm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{flat_group, product};
    use crate::groups::named_group;

    #[test]
    fn permutations_count() {
        let mut n = 0;
        let mut seen = std::collections::BTreeSet::new();
        for_each_permutation(4, |p| {
            n += 1;
            seen.insert(p.to_vec());
        });
        assert_eq!((n, seen.len()), (24, 24));
    }

    #[test]
    fn relabelled_copies_are_isomorphic() {
        let f = flat_group(&named_group("D6").unwrap());
        let perm: Vec<Element> = (0..f.size()).rev().collect();
        let t = relabelled_tables(&f, &perm);
        let k = f.size();
        let g = FinAlgebra::new(k, f.signature().clone(), vec![t[..k * k].to_vec(), t[k * k..].to_vec()], None).unwrap();
        let map = find_isomorphism(&f, &g).unwrap();
        assert!(is_homomorphism(&f, &g, &map));
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        let c4 = flat_group(&named_group("C4").unwrap());
        let v4 = flat_group(&named_group("C2xC2").unwrap());
        assert!(!is_isomorphic(&c4, &v4));
        let q8 = flat_group(&named_group("Q8").unwrap());
        let d8 = flat_group(&named_group("D8").unwrap());
        assert!(!is_isomorphic(&q8, &d8));
        assert!(is_isomorphic(&q8, &q8));
    }

    #[test]
    fn c6_is_c2_times_c3() {
        let c6 = named_group("C6").unwrap();
        let c2c3 = named_group("C2xC3").unwrap();
        assert!(is_isomorphic(c6.algebra(), c2c3.algebra()));
        let big = named_group("H3xC9").unwrap();
        assert!(is_isomorphic(big.algebra(), named_group("H3xC9").unwrap().algebra()));
    }

    #[test]
    fn canonical_form_is_invariant() {
        let f = flat_group(&named_group("C2").unwrap());
        let p = product(&f, &f).unwrap();
        assert!(canonical_form(&p).is_err());
        let (c1, perm) = canonical_form(&f).unwrap();
        assert_eq!(relabelled_tables(&f, &perm), [c1.table(0), c1.table(1)].concat());
        let swapped = FinAlgebra::new(
            3,
            f.signature().clone(),
            {
                let t = relabelled_tables(&f, &[2, 0, 1]);
                vec![t[..9].to_vec(), t[9..].to_vec()]
            },
            None,
        )
        .unwrap();
        let (c2, _) = canonical_form(&swapped).unwrap();
        assert_eq!(c1.tables(), c2.tables());
    }
}
