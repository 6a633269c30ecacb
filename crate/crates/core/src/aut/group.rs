use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::portrait::{same_tree, TreePortrait};
use crate::error::{Error, Result};
use crate::tree::{FiniteTree, ShapeInterner};

/// Default element cap for explicit enumeration.
pub const DEFAULT_GROUP_CAP: usize = 100_000;

/// A finite group of tree automorphisms held as an explicit, deduplicated
/// element list. Element 0 is always the identity.
#[derive(Debug, Clone)]
pub struct PortraitGroup {
    tree: Arc<FiniteTree>,
    elements: Vec<TreePortrait>,
    index: HashMap<TreePortrait, usize>,
}

impl PortraitGroup {
    pub fn trivial(tree: Arc<FiniteTree>) -> Self {
        let id = TreePortrait::identity(tree.clone());
        let index = HashMap::from([(id.clone(), 0)]);
        PortraitGroup { tree, elements: vec![id], index }
    }

    /// Wraps an element list that is already known to be a group.
    pub(crate) fn from_elements_unchecked(tree: Arc<FiniteTree>, mut elements: Vec<TreePortrait>) -> Self {
        if let Some(pos) = elements.iter().position(TreePortrait::is_identity) {
            elements.swap(0, pos);
        }
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        PortraitGroup { tree, elements, index }
    }

    /// Checks the group axioms on an explicit element set. Closure under
    /// composition suffices for a finite set.
    pub fn from_elements(tree: Arc<FiniteTree>, elements: Vec<TreePortrait>) -> Result<Self> {
        let mut uniq: Vec<TreePortrait> = Vec::new();
        let mut index = HashMap::new();
        for e in elements {
            if !same_tree(e.tree(), &tree) {
                return Err(Error::TreeMismatch("element lives on another tree".into()));
            }
            if !index.contains_key(&e) {
                index.insert(e.clone(), uniq.len());
                uniq.push(e);
            }
        }
        let g = Self::from_elements_unchecked(tree, uniq);
        let maps: Vec<_> = g.elements.iter().map(TreePortrait::vertex_map).collect();
        for a in &g.elements {
            for (b, bm) in g.elements.iter().zip(&maps) {
                if !g.index.contains_key(&a.compose_with_map(b, bm)) {
                    return Err(Error::invalid("element set is not closed under composition"));
                }
            }
        }
        if !g.elements.first().is_some_and(TreePortrait::is_identity) {
            return Err(Error::invalid("element set lacks the identity"));
        }
        Ok(g)
    }

    pub fn tree(&self) -> &Arc<FiniteTree> {
        &self.tree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[TreePortrait] {
        &self.elements
    }

    pub fn contains(&self, g: &TreePortrait) -> bool {
        self.index.contains_key(g)
    }

    pub fn index_of(&self, g: &TreePortrait) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Multiplication table by element index: `table[a][b] = a ∘ b`.
    pub fn cayley_table(&self) -> Vec<Vec<u32>> {
        let maps: Vec<_> = self.elements.iter().map(TreePortrait::vertex_map).collect();
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .zip(&maps)
                    .map(|(b, bm)| self.index[&a.compose_with_map(b, bm)] as u32)
                    .collect()
            })
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        let maps: Vec<_> = self.elements.iter().map(TreePortrait::vertex_map).collect();
        for (i, a) in self.elements.iter().enumerate() {
            for j in i + 1..self.elements.len() {
                let b = &self.elements[j];
                if a.compose_with_map(b, &maps[j]) != b.compose_with_map(a, &maps[i]) {
                    return false;
                }
            }
        }
        true
    }

    /// Orbit labels of the vertices of one level, numbered by first
    /// appearance.
    pub fn orbits(&self, level: usize) -> Result<Vec<Vec<usize>>> {
        if level > self.tree.height() {
            return Err(Error::OutOfRange { index: level, limit: self.tree.height() });
        }
        let labels = self.orbit_labels();
        let classes = labels[level].iter().max().map_or(0, |m| m + 1);
        let mut parts = vec![Vec::new(); classes];
        for (v, &c) in labels[level].iter().enumerate() {
            parts[c].push(v);
        }
        Ok(parts)
    }

    /// Orbit label of every vertex of the tree.
    pub fn orbit_labels(&self) -> Vec<Vec<usize>> {
        let maps: Vec<_> = self.elements.iter().map(TreePortrait::vertex_map).collect();
        (0..=self.tree.height())
            .map(|k| {
                let n = self.tree.level(k).len();
                let mut label = vec![usize::MAX; n];
                let mut next = 0;
                for v in 0..n {
                    if label[v] != usize::MAX {
                        continue;
                    }
                    for m in &maps {
                        label[m[k][v]] = next;
                    }
                    next += 1;
                }
                label
            })
            .collect()
    }

    /// The quotient tree `T/G`.
    pub fn quotient_tree(&self) -> Result<FiniteTree> {
        self.tree.quotient_by(&self.orbit_labels())
    }

    /// Image of the group under restriction to levels `0..=n`.
    pub fn restrict(&self, n: usize) -> Result<PortraitGroup> {
        let target = Arc::new(self.tree.truncate(n)?);
        let mut seen = HashMap::new();
        let mut elements = Vec::new();
        for e in &self.elements {
            let r = e.restrict_onto(target.clone());
            if !seen.contains_key(&r) {
                seen.insert(r.clone(), elements.len());
                elements.push(r);
            }
        }
        Ok(Self::from_elements_unchecked(target, elements))
    }

    /// Subgroup given by element indices (assumed closed).
    pub(crate) fn subgroup_from_indices(&self, idx: impl IntoIterator<Item = usize>) -> PortraitGroup {
        let elements = idx.into_iter().map(|i| self.elements[i].clone()).collect();
        Self::from_elements_unchecked(self.tree.clone(), elements)
    }
}

/// The subgroup generated by `gens`, by breadth-first closure. Fails once
/// more than `cap` elements have been produced.
pub fn closure(tree: Arc<FiniteTree>, gens: &[TreePortrait], cap: usize) -> Result<PortraitGroup> {
    if cap == 0 {
        return Err(Error::invalid("closure cap must be positive"));
    }
    for g in gens {
        if !same_tree(g.tree(), &tree) {
            return Err(Error::TreeMismatch("generator lives on another tree".into()));
        }
    }
    let gen_maps: Vec<_> = gens.iter().map(TreePortrait::vertex_map).collect();
    let id = TreePortrait::identity(tree.clone());
    let mut index = HashMap::from([(id.clone(), 0usize)]);
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (g, gm) in gens.iter().zip(&gen_maps) {
            let x = elements[i].compose_with_map(g, gm);
            if !index.contains_key(&x) {
                if elements.len() >= cap {
                    return Err(Error::too_large("generated group", format!("more than {cap} elements"), cap));
                }
                index.insert(x.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(x);
            }
        }
    }
    Ok(PortraitGroup { tree, elements, index })
}

/// `d!^((d^n - 1)/(d - 1))`, the order of the automorphism group of the
/// complete `d`-ary tree of height `n`.
pub fn aut_order_formula(d: u32, n: u32) -> Result<BigUint> {
    if d < 2 {
        return Err(Error::invalid(format!("arity must be at least 2, got {d}")));
    }
    let fact: BigUint = (1..=d).map(BigUint::from).product();
    let internal = (num_traits::pow(BigUint::from(d), n as usize) - 1u32) / (d - 1);
    let exp = internal
        .to_usize()
        .ok_or_else(|| Error::too_large("automorphism group order", "exponent overflow", usize::MAX))?;
    Ok(num_traits::pow(fact, exp))
}

/// `|Aut(T)|` for an arbitrary finite tree, from the subtree-shape
/// multiplicities at every vertex.
pub fn aut_order(tree: &FiniteTree) -> BigUint {
    let mut interner = ShapeInterner::default();
    let ids = tree.canonical_ids(&mut interner);
    let h = tree.height();
    let mut orders: Vec<Vec<BigUint>> = vec![Vec::new(); h + 1];
    orders[h] = vec![BigUint::one(); tree.level(h).len()];
    for k in (0..h).rev() {
        orders[k] = tree
            .level(k)
            .iter()
            .map(|v| {
                let mut groups: HashMap<usize, (u32, BigUint)> = HashMap::new();
                for &c in &v.children {
                    let e = groups.entry(ids[k + 1][c]).or_insert((0, orders[k + 1][c].clone()));
                    e.0 += 1;
                }
                groups.values().fold(BigUint::one(), |acc, (m, sub)| {
                    let fact: BigUint = (1..=*m).map(BigUint::from).product();
                    acc * fact * num_traits::pow(sub.clone(), *m as usize)
                })
            })
            .collect();
    }
    orders[0][0].clone()
}

/// The full automorphism group as an explicit element list.
pub fn enumerate_aut(tree: Arc<FiniteTree>, cap: usize) -> Result<PortraitGroup> {
    let order = aut_order(&tree);
    if order > BigUint::from(cap) {
        return Err(Error::too_large("automorphism group", order, cap));
    }
    let mut interner = ShapeInterner::default();
    let ids = tree.canonical_ids(&mut interner);
    let h = tree.height();
    let mut perms: Vec<Vec<Vec<u16>>> = (0..h)
        .map(|k| tree.level(k).iter().map(|v| vec![0; v.children.len()]).collect())
        .collect();
    let mut out = Vec::new();
    let mut work = if h > 0 { vec![(0usize, 0usize, 0usize)] } else { Vec::new() };
    expand(&tree, &ids, &mut work, &mut perms, &mut out);
    let elements = out
        .into_iter()
        .map(|p| TreePortrait::new_unchecked(tree.clone(), p))
        .collect();
    Ok(PortraitGroup::from_elements_unchecked(tree, elements))
}

/// Depth-first product over vertices: pops a pending pair `(level, v, w)`
/// with `w` the already-chosen image of `v`, tries every shape-preserving
/// bijection from the children of `v` to the children of `w`, and recurses.
fn expand(
    tree: &FiniteTree,
    ids: &[Vec<usize>],
    work: &mut Vec<(usize, usize, usize)>,
    perms: &mut Vec<Vec<Vec<u16>>>,
    out: &mut Vec<Vec<Vec<Vec<u16>>>>,
) {
    let Some((k, v, w)) = work.pop() else {
        out.push(perms.clone());
        return;
    };
    let src: Vec<usize> = tree.level(k)[v].children.iter().map(|&c| ids[k + 1][c]).collect();
    let dst: Vec<usize> = tree.level(k)[w].children.iter().map(|&c| ids[k + 1][c]).collect();
    let mut bijections = Vec::new();
    let mut current = Vec::with_capacity(src.len());
    let mut used = vec![false; dst.len()];
    matching_bijections(&src, &dst, &mut current, &mut used, &mut bijections);
    let leaf_children = k + 1 == tree.height();
    for b in bijections {
        let pushed = if leaf_children { 0 } else { src.len() };
        for (j, &x) in b.iter().enumerate() {
            if !leaf_children {
                let cv = tree.level(k)[v].children[j];
                let cw = tree.level(k)[w].children[x as usize];
                work.push((k + 1, cv, cw));
            }
        }
        perms[k][v] = b;
        expand(tree, ids, work, perms, out);
        work.truncate(work.len() - pushed);
    }
    work.push((k, v, w));
}

fn matching_bijections(
    src: &[usize],
    dst: &[usize],
    current: &mut Vec<u16>,
    used: &mut [bool],
    out: &mut Vec<Vec<u16>>,
) {
    let j = current.len();
    if j == src.len() {
        out.push(current.clone());
        return;
    }
    for x in 0..dst.len() {
        if !used[x] && dst[x] == src[j] {
            used[x] = true;
            current.push(x as u16);
            matching_bijections(src, dst, current, used, out);
            current.pop();
            used[x] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(d: usize, n: usize) -> Arc<FiniteTree> {
        Arc::new(FiniteTree::complete(d, n).unwrap())
    }

    #[test]
    fn order_formula_values() {
        assert_eq!(aut_order_formula(2, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(aut_order_formula(2, 3).unwrap(), BigUint::from(128u32));
        assert_eq!(aut_order_formula(3, 2).unwrap(), BigUint::from(1296u32));
        assert_eq!(aut_order_formula(2, 0).unwrap(), BigUint::one());
    }

    #[test]
    fn enumeration_matches_formula() {
        for (d, n) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
            let g = enumerate_aut(complete(d, n), DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(BigUint::from(g.order()), aut_order_formula(d as u32, n as u32).unwrap());
        }
    }

    #[test]
    fn enumeration_of_irregular_trees() {
        let path = Arc::new(FiniteTree::path(2, 2).unwrap());
        assert_eq!(enumerate_aut(path, 10).unwrap().order(), 1);
        let collapsed = Arc::new(FiniteTree::from_child_counts(2, &[vec![1], vec![2]]).unwrap());
        assert_eq!(enumerate_aut(collapsed, 10).unwrap().order(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_aut(complete(2, 4), 1000).unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
    }

    #[test]
    fn closure_of_generators() {
        let t1 = complete(2, 1);
        assert_eq!(closure(t1.clone(), &[], 10).unwrap().order(), 1);
        let swap = TreePortrait::new(t1.clone(), vec![vec![vec![1, 0]]]).unwrap();
        assert_eq!(closure(t1, &[swap], 10).unwrap().order(), 2);

        let t2 = complete(2, 2);
        let top = TreePortrait::new(t2.clone(), vec![vec![vec![1, 0]], vec![vec![0, 1], vec![0, 1]]]).unwrap();
        let low = TreePortrait::new(t2.clone(), vec![vec![vec![0, 1]], vec![vec![1, 0], vec![0, 1]]]).unwrap();
        let g = closure(t2.clone(), &[top, low], 100).unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        assert!(closure(t2, g.elements(), 4).is_err());
    }

    #[test]
    fn orbits_and_quotients() {
        let t2 = complete(2, 2);
        let trivial = PortraitGroup::trivial(t2.clone());
        assert_eq!(trivial.orbits(2).unwrap().len(), 4);
        assert!(trivial.quotient_tree().unwrap().is_isomorphic(&t2));

        let full = enumerate_aut(t2.clone(), 100).unwrap();
        for k in 0..=2 {
            assert_eq!(full.orbits(k).unwrap().len(), 1);
        }
        let q = full.quotient_tree().unwrap();
        assert_eq!(q, FiniteTree::path(2, 2).unwrap());

        let low = TreePortrait::new(t2.clone(), vec![vec![vec![0, 1]], vec![vec![1, 0], vec![0, 1]]]).unwrap();
        let g = closure(t2, &[low], 10).unwrap();
        let mut sizes: Vec<usize> = g.orbits(2).unwrap().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2]);

        let t1 = complete(2, 1);
        let swap = TreePortrait::new(t1.clone(), vec![vec![vec![1, 0]]]).unwrap();
        let g = closure(t1, &[swap], 10).unwrap();
        assert_eq!(g.quotient_tree().unwrap(), FiniteTree::path(2, 1).unwrap());
    }

    #[test]
    fn restriction_images_divide() {
        let g = enumerate_aut(complete(2, 3), 1000).unwrap();
        let r = g.restrict(2).unwrap();
        assert_eq!(r.order(), 8);
        assert_eq!(g.order() % r.order(), 0);
    }

    #[test]
    fn from_elements_checks_closure() {
        let t1 = complete(2, 1);
        let swap = TreePortrait::new(t1.clone(), vec![vec![vec![1, 0]]]).unwrap();
        assert!(PortraitGroup::from_elements(t1.clone(), vec![swap.clone()]).is_err());
        let id = TreePortrait::identity(t1.clone());
        assert_eq!(PortraitGroup::from_elements(t1, vec![swap, id]).unwrap().order(), 2);
    }
}
