//! Finite `d`-ary rooted trees stored level by level.
//!
//! A vertex is addressed by its level and its position within that level.
//! Child lists hold positions in the next level. Every vertex strictly below
//! the last level has between 1 and `d` children; last-level vertices have
//! none and count as neither complete nor incomplete.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stable address of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexRef {
    pub level: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTree {
    arity: usize,
    levels: Vec<Vec<Vertex>>,
}

/// Incomplete-vertex statistics of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncompleteCounts {
    pub per_level: Vec<usize>,
    pub total: usize,
}

impl IncompleteCounts {
    /// `per_level[k] / d^k` as exact rationals.
    pub fn scaled(&self, d: usize) -> Vec<BigRational> {
        let d = num_bigint::BigInt::from(d);
        self.per_level
            .iter()
            .enumerate()
            .map(|(k, &c)| BigRational::new(c.into(), num_traits::pow(d.clone(), k)))
            .collect()
    }
}

impl FiniteTree {
    /// Builds a tree from per-level child lists. `children[k][i]` lists the
    /// positions in level `k + 1` of the children of vertex `i` at level `k`.
    /// The final entry describes the leaves and must contain only empty lists.
    pub fn from_children(d: usize, children: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid(format!("arity bound must be at least 2, got {d}")));
        }
        if children.is_empty() || children[0].len() != 1 {
            return Err(Error::invalid("level 0 must hold exactly one root vertex"));
        }
        let height = children.len() - 1;
        let mut levels: Vec<Vec<Vertex>> = children
            .into_iter()
            .map(|lvl| {
                lvl.into_iter()
                    .map(|c| Vertex { parent: None, children: c })
                    .collect()
            })
            .collect();
        for k in 0..=height {
            let next_len = levels.get(k + 1).map_or(0, Vec::len);
            let mut seen = vec![false; next_len];
            for (i, v) in levels[k].iter().enumerate() {
                if k == height {
                    if !v.children.is_empty() {
                        return Err(Error::invalid(format!("leaf ({k},{i}) has children")));
                    }
                    continue;
                }
                if v.children.is_empty() || v.children.len() > d {
                    return Err(Error::invalid(format!(
                        "vertex ({k},{i}) has {} children, expected 1..={d}",
                        v.children.len()
                    )));
                }
                for &c in &v.children {
                    if c >= next_len || seen[c] {
                        return Err(Error::invalid(format!(
                            "vertex ({k},{i}) has invalid or shared child {c}"
                        )));
                    }
                    seen[c] = true;
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::invalid(format!("level {} has an orphan vertex", k + 1)));
            }
            if k < height {
                let (head, tail) = levels.split_at_mut(k + 1);
                for (i, v) in head[k].iter().enumerate() {
                    for &c in &v.children {
                        tail[0][c].parent = Some(i);
                    }
                }
            }
        }
        Ok(FiniteTree { arity: d, levels })
    }

    /// Builds a tree in which vertex `i` of level `k` has `counts[k][i]`
    /// children, assigned consecutively in the next level.
    pub fn from_child_counts(d: usize, counts: &[Vec<usize>]) -> Result<Self> {
        let mut children = Vec::with_capacity(counts.len() + 1);
        let mut width = 1;
        for lvl in counts {
            if lvl.len() != width {
                return Err(Error::invalid("child-count level has wrong width"));
            }
            let mut next = 0;
            let mut lists = Vec::with_capacity(width);
            for &c in lvl {
                lists.push((next..next + c).collect());
                next += c;
            }
            children.push(lists);
            width = next;
        }
        children.push(vec![Vec::new(); width]);
        Self::from_children(d, children)
    }

    /// The complete `d`-ary tree of height `n`.
    pub fn complete(d: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid(format!("arity bound must be at least 2, got {d}")));
        }
        let mut counts = Vec::with_capacity(n);
        let mut width = 1usize;
        for _ in 0..n {
            counts.push(vec![d; width]);
            width = width
                .checked_mul(d)
                .ok_or_else(|| Error::too_large("complete tree", "overflow", usize::MAX))?;
        }
        Self::from_child_counts(d, &counts)
    }

    /// Path of height `n`: every internal vertex has one child.
    pub fn path(d: usize, n: usize) -> Result<Self> {
        Self::from_child_counts(d, &vec![vec![1]; n])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &[Vertex] {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[Vec<Vertex>] {
        &self.levels
    }

    pub fn vertex(&self, v: VertexRef) -> &Vertex {
        &self.levels[v.level][v.index]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// True when every non-leaf vertex has exactly `d` children.
    pub fn is_complete(&self) -> bool {
        self.incomplete_counts().total == 0
    }

    /// The subtree on levels `0..=n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.height() {
            return Err(Error::OutOfRange { index: n, limit: self.height() });
        }
        let mut levels = self.levels[..=n].to_vec();
        for v in &mut levels[n] {
            v.children.clear();
        }
        Ok(FiniteTree { arity: self.arity, levels })
    }

    /// Number of incomplete vertices per non-leaf level and in total.
    pub fn incomplete_counts(&self) -> IncompleteCounts {
        let h = self.height();
        let per_level: Vec<usize> = self.levels[..h]
            .iter()
            .map(|lvl| lvl.iter().filter(|v| v.children.len() < self.arity).count())
            .collect();
        let total = per_level.iter().sum();
        IncompleteCounts { per_level, total }
    }

    /// Quotient by a level-preserving equivalence compatible with the parent
    /// map. `labels[k][i]` is the class of vertex `(k, i)`; classes on each
    /// level must be numbered `0..m` and children of equivalent vertices must
    /// fall in matching classes (which holds for orbits of an automorphism
    /// group).
    pub fn quotient_by(&self, labels: &[Vec<usize>]) -> Result<Self> {
        if labels.len() != self.levels.len()
            || labels.iter().zip(&self.levels).any(|(l, v)| l.len() != v.len())
        {
            return Err(Error::TreeMismatch("orbit labelling does not match tree shape".into()));
        }
        let h = self.height();
        let mut children = Vec::with_capacity(h + 1);
        for k in 0..=h {
            let classes = labels[k].iter().max().map_or(0, |m| m + 1);
            let mut lists: Vec<Option<Vec<usize>>> = vec![None; classes];
            for (i, v) in self.levels[k].iter().enumerate() {
                let mut kids: Vec<usize> = v.children.iter().map(|&c| labels[k + 1][c]).collect();
                kids.sort_unstable();
                kids.dedup();
                match &lists[labels[k][i]] {
                    None => lists[labels[k][i]] = Some(kids),
                    Some(prev) if *prev == kids => {}
                    Some(_) => {
                        return Err(Error::TreeMismatch(
                            "labelling is not compatible with the parent map".into(),
                        ))
                    }
                }
            }
            let lists = lists
                .into_iter()
                .map(|l| l.ok_or_else(|| Error::TreeMismatch("labels are not contiguous".into())))
                .collect::<Result<Vec<_>>>()?;
            children.push(lists);
        }
        Self::from_children(self.arity, children)
    }

    /// Canonical ids of all rooted subtrees: two vertices get the same id iff
    /// their subtrees are isomorphic. Ids come from `interner`, so trees
    /// sharing an interner can be compared.
    pub fn canonical_ids(&self, interner: &mut ShapeInterner) -> Vec<Vec<usize>> {
        let h = self.height();
        let mut ids: Vec<Vec<usize>> = vec![Vec::new(); h + 1];
        for k in (0..=h).rev() {
            ids[k] = self.levels[k]
                .iter()
                .map(|v| {
                    let mut sig: Vec<usize> = v.children.iter().map(|&c| ids[k + 1][c]).collect();
                    sig.sort_unstable();
                    interner.intern(sig)
                })
                .collect();
        }
        ids
    }

    /// Rooted-tree isomorphism, ignoring child order.
    pub fn is_isomorphic(&self, other: &FiniteTree) -> bool {
        if self.arity != other.arity || self.level_sizes() != other.level_sizes() {
            return false;
        }
        let mut interner = ShapeInterner::default();
        let a = self.canonical_ids(&mut interner);
        let b = other.canonical_ids(&mut interner);
        a[0][0] == b[0][0]
    }

    /// Graphviz rendering; refused above 200 vertices.
    pub fn to_dot(&self) -> Result<String> {
        const MAX: usize = 200;
        if self.num_vertices() > MAX {
            return Err(Error::too_large("DOT output", self.num_vertices(), MAX));
        }
        let mut out = String::from("digraph tree {\n  node [shape=point];\n");
        for (k, lvl) in self.levels.iter().enumerate() {
            for (i, v) in lvl.iter().enumerate() {
                let _ = writeln!(out, "  v{k}_{i};");
                for &c in &v.children {
                    let _ = writeln!(out, "  v{k}_{i} -> v{}_{c};", k + 1);
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeJson::from(self)).expect("tree serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: TreeJson =
            serde_json::from_str(s).map_err(|e| Error::invalid(format!("tree JSON: {e}")))?;
        raw.try_into()
    }
}

/// Interns sorted child-signatures to small integers.
#[derive(Debug, Default)]
pub struct ShapeInterner {
    ids: HashMap<Vec<usize>, usize>,
}

impl ShapeInterner {
    pub fn intern(&mut self, sig: Vec<usize>) -> usize {
        let next = self.ids.len();
        *self.ids.entry(sig).or_insert(next)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexJson {
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeJson {
    pub d: usize,
    pub height: usize,
    pub levels: Vec<Vec<VertexJson>>,
}

impl From<&FiniteTree> for TreeJson {
    fn from(t: &FiniteTree) -> Self {
        TreeJson {
            d: t.arity,
            height: t.height(),
            levels: t
                .levels
                .iter()
                .map(|lvl| {
                    lvl.iter()
                        .map(|v| VertexJson { children: v.children.clone() })
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<TreeJson> for FiniteTree {
    type Error = Error;

    fn try_from(raw: TreeJson) -> Result<Self> {
        if raw.levels.len() != raw.height + 1 {
            return Err(Error::invalid("height does not match number of levels"));
        }
        FiniteTree::from_children(
            raw.d,
            raw.levels
                .into_iter()
                .map(|l| l.into_iter().map(|v| v.children).collect())
                .collect(),
        )
    }
}

impl Serialize for FiniteTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TreeJson::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_tree_sizes() {
        assert_eq!(FiniteTree::complete(2, 0).unwrap().num_vertices(), 1);
        assert_eq!(FiniteTree::complete(2, 3).unwrap().num_vertices(), 15);
        assert_eq!(FiniteTree::complete(3, 2).unwrap().num_vertices(), 13);
        assert!(FiniteTree::complete(1, 2).is_err());
    }

    #[test]
    fn truncation() {
        let t = FiniteTree::complete(2, 3).unwrap();
        assert_eq!(t.truncate(3).unwrap(), t);
        let t1 = t.truncate(1).unwrap();
        assert_eq!(t1.num_vertices(), 3);
        assert_eq!(t1, FiniteTree::complete(2, 1).unwrap());
        assert_eq!(t.truncate(0).unwrap().num_vertices(), 1);
        assert!(t.truncate(4).is_err());
    }

    #[test]
    fn incomplete_counting() {
        let t = FiniteTree::complete(2, 3).unwrap();
        assert_eq!(
            t.incomplete_counts(),
            IncompleteCounts { per_level: vec![0, 0, 0], total: 0 }
        );
        let p = FiniteTree::path(2, 3).unwrap();
        assert_eq!(p.incomplete_counts().per_level, vec![1, 1, 1]);
        assert_eq!(p.incomplete_counts().total, 3);
        // shape of the preimage tree of x^2 - 1 over -1
        let s = FiniteTree::from_child_counts(2, &[vec![1], vec![2]]).unwrap();
        assert_eq!(s.incomplete_counts().per_level, vec![1, 0]);
        assert_eq!(s.incomplete_counts().total, 1);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(FiniteTree::from_children(2, vec![vec![vec![0, 1, 2]], vec![vec![]; 3]]).is_err());
        assert!(FiniteTree::from_children(2, vec![vec![vec![0]], vec![vec![]; 2]]).is_err());
        assert!(FiniteTree::from_children(2, vec![vec![vec![0, 0]], vec![vec![]]]).is_err());
        assert!(FiniteTree::from_children(2, vec![vec![vec![]], vec![vec![]]]).is_err());
    }

    #[test]
    fn isomorphism_ignores_child_order() {
        let a = FiniteTree::from_children(
            2,
            vec![vec![vec![0, 1]], vec![vec![0], vec![1, 2]], vec![vec![]; 3]],
        )
        .unwrap();
        let b = FiniteTree::from_children(
            2,
            vec![vec![vec![1, 0]], vec![vec![0, 1], vec![2]], vec![vec![]; 3]],
        )
        .unwrap();
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&FiniteTree::complete(2, 2).unwrap()));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let t = FiniteTree::from_children(
            3,
            vec![vec![vec![1, 0]], vec![vec![2], vec![0, 1]], vec![vec![]; 3]],
        )
        .unwrap();
        let s = t.to_json();
        assert_eq!(
            s,
            r#"{"d":3,"height":2,"levels":[[{"children":[1,0]}],[{"children":[2]},{"children":[0,1]}],[{"children":[]},{"children":[]},{"children":[]}]]}"#
        );
        let back = FiniteTree::from_json(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn dot_output_is_capped() {
        assert!(FiniteTree::complete(2, 2).unwrap().to_dot().unwrap().contains("v1_0 -> v2_1"));
        assert!(FiniteTree::complete(2, 8).unwrap().to_dot().is_err());
    }

    #[test]
    fn scaled_counts_are_exact() {
        let p = FiniteTree::path(2, 3).unwrap();
        let s = p.incomplete_counts().scaled(2);
        assert_eq!(s[2], BigRational::new(1.into(), 4.into()));
    }
}
