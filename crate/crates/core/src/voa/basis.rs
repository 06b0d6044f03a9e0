//! Partition-labelled bases, one block per level.

use std::collections::HashMap;

/// Weakly decreasing parts, e.g. `[2, 1]` for `x(-2)x(-1)` applied to the
/// lowest state.
pub type Partition = Vec<u32>;

/// All partitions of `n` with parts in `min_part..=max_part`, in
/// lexicographically decreasing order.
pub fn partitions(n: u32, min_part: u32, max_part: u32) -> Vec<Partition> {
    fn rec(n: u32, min_part: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        let top = max_part.min(n);
        for part in (min_part..=top).rev() {
            prefix.push(part);
            rec(n - part, min_part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, min_part.max(1), max_part, &mut Vec::new(), &mut out);
    out
}

/// Canonical form of a multiset of parts.
pub fn canonical(mut parts: Vec<u32>) -> Partition {
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

pub fn size(p: &[u32]) -> usize {
    p.iter().map(|&x| x as usize).sum()
}

/// Per-level partition bases with parts at least `min_part`.
#[derive(Clone, Debug)]
pub struct LevelBasis {
    min_part: u32,
    labels: Vec<Vec<Partition>>,
    index: Vec<HashMap<Partition, usize>>,
}

impl LevelBasis {
    pub fn new(min_part: u32, max_level: usize) -> Self {
        let labels: Vec<Vec<Partition>> = (0..=max_level).map(|k| partitions(k as u32, min_part, k as u32)).collect();
        let index = labels.iter().map(|l| l.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect()).collect();
        Self { min_part, labels, index }
    }

    pub fn min_part(&self) -> u32 {
        self.min_part
    }

    pub fn max_level(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn dim(&self, level: usize) -> usize {
        self.labels.get(level).map_or(0, Vec::len)
    }

    pub fn label(&self, level: usize, index: usize) -> &Partition {
        &self.labels[level][index]
    }

    pub fn labels(&self, level: usize) -> &[Partition] {
        &self.labels[level]
    }

    pub fn index_of(&self, p: &[u32]) -> Option<usize> {
        self.index.get(size(p))?.get(p).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let all = LevelBasis::new(1, 10);
        let dims: Vec<usize> = (0..=10).map(|k| all.dim(k)).collect();
        assert_eq!(dims, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        let vir = LevelBasis::new(2, 8);
        let dims: Vec<usize> = (0..=8).map(|k| vir.dim(k)).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 2, 2, 4, 4, 7]);
    }

    #[test]
    fn ordering_and_lookup() {
        let b = LevelBasis::new(1, 4);
        assert_eq!(b.labels(3), &[vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(b.index_of(&[2, 1]), Some(1));
        assert_eq!(b.index_of(&[5]), None);
        assert_eq!(canonical(vec![1, 3, 2]), vec![3, 2, 1]);
    }
}
