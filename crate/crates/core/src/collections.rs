//! Small data structures shared by the simulators.

use std::collections::HashMap;
use std::hash::Hash;

use rand::Rng;

/// Set with O(1) insert, remove and uniform sampling.
#[derive(Debug, Clone)]
pub struct IndexedSet<T> {
    items: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T> Default for IndexedSet<T> {
    fn default() -> Self {
        Self {
            items: Vec::new(),
            index: HashMap::new(),
        }
    }
}

impl<T: Copy + Eq + Hash> IndexedSet<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: &T) -> bool {
        self.index.contains_key(item)
    }

    pub fn insert(&mut self, item: T) -> bool {
        if self.index.contains_key(&item) {
            return false;
        }
        self.index.insert(item, self.items.len());
        self.items.push(item);
        true
    }

    pub fn remove(&mut self, item: &T) -> bool {
        let Some(pos) = self.index.remove(item) else {
            return false;
        };
        let last = self.items.pop().expect("index and items agree");
        if pos < self.items.len() {
            self.items[pos] = last;
            self.index.insert(last, pos);
        }
        true
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<T> {
        if self.items.is_empty() {
            None
        } else {
            Some(self.items[rng.random_range(0..self.items.len())])
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.items.iter()
    }
}

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if two components merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Fenwick tree over nonnegative integer weights with prefix search.
#[derive(Debug, Clone)]
pub struct Fenwick {
    tree: Vec<i64>,
}

impl Fenwick {
    pub fn new(n: usize) -> Self {
        Self { tree: vec![0; n + 1] }
    }

    /// Builds the tree over `weights` in linear time.
    pub fn from_weights(weights: &[i64]) -> Self {
        let mut tree = vec![0; weights.len() + 1];
        tree[1..].copy_from_slice(weights);
        for k in 1..tree.len() {
            let parent = k + (k & k.wrapping_neg());
            if parent < tree.len() {
                tree[parent] += tree[k];
            }
        }
        Self { tree }
    }

    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total(&self) -> i64 {
        self.prefix(self.len())
    }

    pub fn add(&mut self, i: usize, delta: i64) {
        let mut k = i + 1;
        while k < self.tree.len() {
            self.tree[k] += delta;
            k += k & k.wrapping_neg();
        }
    }

    /// Sum over `[0, i)`.
    pub fn prefix(&self, i: usize) -> i64 {
        let mut k = i;
        let mut s = 0;
        while k > 0 {
            s += self.tree[k];
            k &= k - 1;
        }
        s
    }

    /// Smallest index `i` with `prefix(i + 1) > target`.
    pub fn search(&self, mut target: i64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn indexed_set_swap_remove() {
        let mut s = IndexedSet::new();
        for i in 0..5 {
            assert!(s.insert(i));
        }
        assert!(!s.insert(3));
        assert!(s.remove(&1));
        assert!(!s.remove(&1));
        assert_eq!(s.len(), 4);
        let mut rng = seeded(0);
        for _ in 0..100 {
            let x = s.sample(&mut rng).unwrap();
            assert!(x != 1 && s.contains(&x));
        }
    }

    #[test]
    fn union_find_counts_components() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(0, 1));
        assert!(!uf.union(1, 0));
        assert!(uf.union(2, 3));
        assert_eq!(uf.components(), 2);
        assert!(uf.union(0, 3));
        assert_eq!(uf.find(2), uf.find(1));
        assert_eq!(uf.components(), 1);
    }

    #[test]
    fn fenwick_search_matches_linear_scan() {
        let weights = [3i64, 0, 2, 5, 0, 1];
        let mut f = Fenwick::new(weights.len());
        for (i, &w) in weights.iter().enumerate() {
            f.add(i, w);
        }
        assert_eq!(f.prefix(weights.len()), 11);
        for target in 0..11 {
            let mut acc = 0;
            let expected = weights
                .iter()
                .position(|&w| {
                    acc += w;
                    acc > target
                })
                .unwrap();
            assert_eq!(f.search(target), expected, "target {target}");
        }
        let g = Fenwick::from_weights(&weights);
        for i in 0..=weights.len() {
            assert_eq!(g.prefix(i), f.prefix(i));
        }
        assert_eq!(g.total(), 11);
    }
}
