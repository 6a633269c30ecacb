use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tree::FiniteTree;

/// A tree automorphism stored as one child permutation per non-leaf vertex.
///
/// `perms[k][i][j] = j'` means the `j`-th child of vertex `(k, i)` is sent to
/// the `j'`-th child of the image of `(k, i)`.
#[derive(Debug, Clone)]
pub struct TreePortrait {
    tree: Arc<FiniteTree>,
    perms: Vec<Vec<Vec<u16>>>,
}

impl PartialEq for TreePortrait {
    fn eq(&self, other: &Self) -> bool {
        self.perms == other.perms
    }
}

impl Eq for TreePortrait {}

impl Hash for TreePortrait {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.perms.hash(state);
    }
}

pub(crate) fn same_tree(a: &Arc<FiniteTree>, b: &Arc<FiniteTree>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl TreePortrait {
    /// Validates that the portrait induces a level-preserving bijection that
    /// respects edges, i.e. each vertex and its image have equally many
    /// children all the way down.
    pub fn new(tree: Arc<FiniteTree>, perms: Vec<Vec<Vec<u16>>>) -> Result<Self> {
        let h = tree.height();
        if perms.len() != h {
            return Err(Error::IllegalPortrait(format!(
                "expected {h} levels of permutations, got {}",
                perms.len()
            )));
        }
        for (k, lvl) in perms.iter().enumerate() {
            if lvl.len() != tree.level(k).len() {
                return Err(Error::IllegalPortrait(format!("level {k} has wrong width")));
            }
            for (i, p) in lvl.iter().enumerate() {
                let c = tree.level(k)[i].children.len();
                let mut seen = vec![false; c];
                if p.len() != c {
                    return Err(Error::IllegalPortrait(format!(
                        "vertex ({k},{i}) permutation has length {}, expected {c}",
                        p.len()
                    )));
                }
                for &x in p {
                    let x = x as usize;
                    if x >= c || seen[x] {
                        return Err(Error::IllegalPortrait(format!(
                            "vertex ({k},{i}) carries a non-permutation"
                        )));
                    }
                    seen[x] = true;
                }
            }
        }
        let portrait = TreePortrait { tree, perms };
        portrait.checked_vertex_map()?;
        Ok(portrait)
    }

    pub(crate) fn new_unchecked(tree: Arc<FiniteTree>, perms: Vec<Vec<Vec<u16>>>) -> Self {
        TreePortrait { tree, perms }
    }

    pub fn identity(tree: Arc<FiniteTree>) -> Self {
        let h = tree.height();
        let perms = (0..h)
            .map(|k| {
                tree.level(k)
                    .iter()
                    .map(|v| (0..v.children.len() as u16).collect())
                    .collect()
            })
            .collect();
        TreePortrait { tree, perms }
    }

    pub fn tree(&self) -> &Arc<FiniteTree> {
        &self.tree
    }

    pub fn perms(&self) -> &[Vec<Vec<u16>>] {
        &self.perms
    }

    pub fn is_identity(&self) -> bool {
        self.perms
            .iter()
            .flatten()
            .all(|p| p.iter().enumerate().all(|(j, &x)| j == x as usize))
    }

    /// Image of every vertex, level by level.
    pub fn vertex_map(&self) -> Vec<Vec<usize>> {
        self.checked_vertex_map().expect("portrait validated at construction")
    }

    fn checked_vertex_map(&self) -> Result<Vec<Vec<usize>>> {
        let t = &self.tree;
        let h = t.height();
        let mut images = Vec::with_capacity(h + 1);
        images.push(vec![0usize]);
        for k in 0..h {
            let mut next = vec![0; t.level(k + 1).len()];
            for (i, v) in t.level(k).iter().enumerate() {
                let img_index = images[k][i];
                let img = &t.level(k)[img_index];
                if img.children.len() != v.children.len() {
                    return Err(Error::IllegalPortrait(format!(
                        "vertex ({k},{i}) with {} children sent to ({k},{img_index}) with {}",
                        v.children.len(),
                        img.children.len()
                    )));
                }
                for (j, &c) in v.children.iter().enumerate() {
                    next[c] = img.children[self.perms[k][i][j] as usize];
                }
            }
            images.push(next);
        }
        Ok(images)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &TreePortrait) -> Result<TreePortrait> {
        if !same_tree(&self.tree, &other.tree) {
            return Err(Error::TreeMismatch("cannot compose portraits on different trees".into()));
        }
        let inner = other.vertex_map();
        Ok(self.compose_with_map(other, &inner))
    }

    pub(crate) fn compose_with_map(&self, other: &TreePortrait, other_map: &[Vec<usize>]) -> TreePortrait {
        let perms = other
            .perms
            .iter()
            .enumerate()
            .map(|(k, lvl)| {
                lvl.iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let outer = &self.perms[k][other_map[k][i]];
                        p.iter().map(|&j| outer[j as usize]).collect()
                    })
                    .collect()
            })
            .collect();
        TreePortrait { tree: self.tree.clone(), perms }
    }

    pub fn inverse(&self) -> TreePortrait {
        let map = self.vertex_map();
        let mut perms: Vec<Vec<Vec<u16>>> = self
            .perms
            .iter()
            .map(|lvl| lvl.iter().map(|p| vec![0; p.len()]).collect())
            .collect();
        for (k, lvl) in self.perms.iter().enumerate() {
            for (i, p) in lvl.iter().enumerate() {
                let img = map[k][i];
                for (j, &x) in p.iter().enumerate() {
                    perms[k][img][x as usize] = j as u16;
                }
            }
        }
        TreePortrait { tree: self.tree.clone(), perms }
    }

    /// Restriction to the truncated tree on levels `0..=n`.
    pub fn restrict(&self, n: usize) -> Result<TreePortrait> {
        let target = Arc::new(self.tree.truncate(n)?);
        Ok(self.restrict_onto(target))
    }

    /// Restriction onto an already-built truncation (shared by a group).
    pub(crate) fn restrict_onto(&self, target: Arc<FiniteTree>) -> TreePortrait {
        let n = target.height();
        TreePortrait { tree: target, perms: self.perms[..n].to_vec() }
    }

    /// Extends the automorphism to the complete `d`-ary tree of the same
    /// height. Each vertex with `c < d` children gets `d - c` complete
    /// subtrees appended after its own children; appended slot `j` of `v`
    /// goes to appended slot `j` of the image of `v`, identically below.
    pub fn embed_complete(&self) -> Result<TreePortrait> {
        let t = &self.tree;
        let d = t.arity();
        let h = t.height();
        let complete = Arc::new(FiniteTree::complete(d, h)?);
        // address of each vertex of `t` inside the complete tree
        let mut addr: Vec<Vec<usize>> = vec![vec![0]];
        for k in 0..h {
            let mut next = vec![0; t.level(k + 1).len()];
            for (i, v) in t.level(k).iter().enumerate() {
                for (j, &c) in v.children.iter().enumerate() {
                    next[c] = addr[k][i] * d + j;
                }
            }
            addr.push(next);
        }
        let mut perms: Vec<Vec<Vec<u16>>> = (0..h)
            .map(|k| vec![(0..d as u16).collect(); complete.level(k).len()])
            .collect();
        for k in 0..h {
            for (i, p) in self.perms[k].iter().enumerate() {
                let slot = &mut perms[k][addr[k][i]];
                for (j, &x) in p.iter().enumerate() {
                    slot[j] = x;
                }
            }
        }
        Ok(TreePortrait { tree: complete, perms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: usize, n: usize) -> Arc<FiniteTree> {
        Arc::new(FiniteTree::complete(d, n).unwrap())
    }

    #[test]
    fn root_swap_is_an_involution() {
        let tree = t(2, 1);
        let s = TreePortrait::new(tree.clone(), vec![vec![vec![1, 0]]]).unwrap();
        let id = TreePortrait::identity(tree);
        assert_eq!(s.compose(&s).unwrap(), id);
        assert_eq!(id.compose(&s).unwrap(), s);
        assert_eq!(s.inverse(), s);
    }

    #[test]
    fn inverse_cancels() {
        let tree = t(3, 2);
        let s = TreePortrait::new(
            tree.clone(),
            vec![vec![vec![1, 2, 0]], vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]]],
        )
        .unwrap();
        assert!(s.compose(&s.inverse()).unwrap().is_identity());
        assert!(s.inverse().compose(&s).unwrap().is_identity());
    }

    #[test]
    fn restriction_kills_deep_swaps() {
        let tree = t(2, 2);
        let s = TreePortrait::new(tree, vec![vec![vec![0, 1]], vec![vec![1, 0], vec![0, 1]]]).unwrap();
        assert!(s.restrict(1).unwrap().is_identity());
        assert_eq!(s.restrict(2).unwrap(), s);
        assert!(s.restrict(0).unwrap().is_identity());
        assert!(s.restrict(3).is_err());
    }

    #[test]
    fn rejects_shape_breaking_maps() {
        // root has children with 1 and 2 children; swapping them is illegal
        let tree = Arc::new(FiniteTree::from_child_counts(2, &[vec![2], vec![1, 2]]).unwrap());
        assert!(TreePortrait::new(tree.clone(), vec![vec![vec![1, 0]], vec![vec![0], vec![0, 1]]]).is_err());
        assert!(TreePortrait::new(tree, vec![vec![vec![0, 1]], vec![vec![0], vec![1, 0]]]).is_ok());
    }

    #[test]
    fn mismatched_trees_do_not_compose() {
        let a = TreePortrait::identity(t(2, 1));
        let b = TreePortrait::identity(t(2, 2));
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn embedding_extends_identically() {
        let tree = Arc::new(FiniteTree::from_child_counts(2, &[vec![2], vec![1, 1]]).unwrap());
        let s = TreePortrait::new(tree, vec![vec![vec![1, 0]], vec![vec![0], vec![0]]]).unwrap();
        let e = s.embed_complete().unwrap();
        assert_eq!(e.tree().num_vertices(), 7);
        assert_eq!(e.perms()[0][0], vec![1, 0]);
        assert!(e.perms()[1].iter().all(|p| p == &vec![0, 1]));
        assert!(e.compose(&e).unwrap().is_identity());
    }
}
