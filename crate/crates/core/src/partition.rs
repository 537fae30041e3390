use crate::algebra::Element;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// An equivalence relation on `0..k`, stored as a canonical block-id array:
/// blocks are numbered in order of their least member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Partition {
    blocks: Vec<usize>,
    count: usize,
}

/// Union-find with path halving; the representative of a set is its least member.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(k: usize) -> Self {
        UnionFind { parent: (0..k).collect() }
    }

    pub fn from_partition(p: &Partition) -> Self {
        let mut first = vec![usize::MAX; p.count];
        let mut parent = Vec::with_capacity(p.len());
        for (x, &b) in p.blocks.iter().enumerate() {
            if first[b] == usize::MAX {
                first[b] = x;
            }
            parent.push(first[b]);
        }
        UnionFind { parent }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        match ra.cmp(&rb) {
            Ordering::Equal => false,
            Ordering::Less => {
                self.parent[rb] = ra;
                true
            }
            Ordering::Greater => {
                self.parent[ra] = rb;
                true
            }
        }
    }

    pub fn into_partition(mut self) -> Partition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&labels)
    }
}

impl Partition {
    pub fn diagonal(k: usize) -> Self {
        Partition { blocks: (0..k).collect(), count: k }
    }

    pub fn universal(k: usize) -> Self {
        Partition { blocks: vec![0; k], count: k.min(1) }
    }

    /// Canonicalises an arbitrary labelling.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut seen: std::collections::HashMap<T, usize> = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        Partition { blocks, count: seen.len() }
    }

    pub fn from_pairs(k: usize, pairs: impl IntoIterator<Item = (Element, Element)>) -> Self {
        let mut uf = UnionFind::new(k);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        uf.into_partition()
    }

    pub fn from_block_lists(k: usize, lists: &[Vec<Element>]) -> Self {
        Partition::from_pairs(k, lists.iter().flat_map(|l| l.windows(2).map(|w| (w[0], w[1]))))
    }

    /// Size of the underlying universe.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.count
    }

    pub fn block_of(&self, x: Element) -> usize {
        self.blocks[x]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.blocks
    }

    pub fn related(&self, a: Element, b: Element) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    pub fn is_diagonal(&self) -> bool {
        self.count == self.blocks.len()
    }

    pub fn is_universal(&self) -> bool {
        self.count <= 1
    }

    /// Blocks as sorted member lists, in block order.
    pub fn blocks(&self) -> Vec<Vec<Element>> {
        let mut out = vec![Vec::new(); self.count];
        for (x, &b) in self.blocks.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    /// Least member of each block, in block order.
    pub fn representatives(&self) -> Vec<Element> {
        let mut reps = Vec::with_capacity(self.count);
        for (x, &b) in self.blocks.iter().enumerate() {
            if b == reps.len() {
                reps.push(x);
            }
        }
        reps
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![usize::MAX; self.count];
        self.blocks.iter().zip(&other.blocks).all(|(&b, &o)| {
            if image[b] == usize::MAX {
                image[b] = o;
            }
            image[b] == o
        })
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = self.blocks.iter().copied().zip(other.blocks.iter().copied()).collect();
        Partition::from_labels(&pairs)
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::from_partition(self);
        let reps = other.representatives();
        for (x, &b) in other.blocks.iter().enumerate() {
            uf.union(reps[b], x);
        }
        uf.into_partition()
    }

    /// Restriction to `subset`, indexed by position in `subset`.
    pub fn restrict(&self, subset: &[Element]) -> Partition {
        let labels: Vec<usize> = subset.iter().map(|&x| self.blocks[x]).collect();
        Partition::from_labels(&labels)
    }

    /// Ordering used to number congruences: coarser partitions (fewer blocks)
    /// last, finer first; ties broken by the block array.
    pub fn canonical_cmp(&self, other: &Partition) -> Ordering {
        other.count.cmp(&self.count).then_with(|| self.blocks.cmp(&other.blocks))
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = String;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        let p = Partition::from_labels(&v);
        if p.blocks != v {
            return Err("block array is not in canonical form".into());
        }
        Ok(p)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.blocks() {
            let items: Vec<String> = b.iter().map(ToString::to_string).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}
