use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use super::group::PortraitGroup;
use super::symmetric::largest_abelian_order;
use crate::error::{Error, Result};
use crate::tree::FiniteTree;

/// Default cap on the ambient group order for the abelian sweep.
pub const DEFAULT_ABELIAN_CAP: usize = 2000;

type Bits = Vec<u64>;

fn bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn members(b: &Bits, n: usize) -> impl Iterator<Item = usize> + '_ {
    (0..n).filter(move |&i| bit(b, i))
}

/// All abelian subgroups of `g`, deduplicated as element sets and listed by
/// increasing order.
///
/// Every abelian subgroup arises by adjoining its elements one at a time to
/// the trivial group, each intermediate group being abelian, so a search that
/// only ever extends a subgroup `H` by elements of its centralizer reaches
/// all of them.
pub fn enumerate_abelian_subgroups(g: &PortraitGroup, cap: usize) -> Result<Vec<PortraitGroup>> {
    abelian_subgroup_indices(g, cap).map(|subs| {
        subs.into_iter()
            .map(|s| g.subgroup_from_indices(s))
            .collect()
    })
}

/// Same search, returning sorted element-index sets into `g.elements()`.
pub fn abelian_subgroup_indices(g: &PortraitGroup, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.order();
    if n > cap {
        return Err(Error::too_large("abelian subgroup sweep", n, cap));
    }
    let table = g.cayley_table();
    let words = n.div_ceil(64);
    let centralizers: Vec<Bits> = (0..n)
        .map(|a| {
            let mut c = vec![0u64; words];
            for b in 0..n {
                if table[a][b] == table[b][a] {
                    set(&mut c, b);
                }
            }
            c
        })
        .collect();

    let mut trivial = vec![0u64; words];
    set(&mut trivial, 0);
    let full_cent = {
        let mut c = vec![0u64; words];
        (0..n).for_each(|i| set(&mut c, i));
        c
    };
    let mut seen: HashSet<Bits> = HashSet::from([trivial.clone()]);
    let mut stack = vec![(trivial, full_cent)];
    while let Some((h, cent)) = stack.pop() {
        for x in members(&cent, n) {
            if bit(&h, x) {
                continue;
            }
            let next = extend(&table, &h, x, words);
            if seen.contains(&next) {
                continue;
            }
            let next_cent: Bits = cent.iter().zip(&centralizers[x]).map(|(a, b)| a & b).collect();
            seen.insert(next.clone());
            stack.push((next, next_cent));
        }
    }
    let mut out: Vec<Vec<usize>> = seen.iter().map(|b| members(b, n).collect()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// `⟨H, x⟩` for `x` commuting with the abelian group `H`.
fn extend(table: &[Vec<u32>], h: &Bits, x: usize, words: usize) -> Bits {
    let n = table.len();
    let mut out = h.clone();
    let elems: Vec<usize> = members(h, n).collect();
    let mut power = x;
    while power != 0 {
        for &e in &elems {
            set(&mut out, table[e][power] as usize);
        }
        power = table[power][x] as usize;
    }
    debug_assert_eq!(out.len(), words);
    out
}

/// Outcome of checking `|G| <= q^I(T/G)` for an abelian group `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianBoundReport {
    #[serde(serialize_with = "crate::report::biguint_string")]
    pub order: BigUint,
    pub abelian: bool,
    #[serde(rename = "I_quotient")]
    pub i_quotient: usize,
    pub q: u64,
    #[serde(skip)]
    pub rhs: BigUint,
    pub bound_holds: bool,
}

/// Checks the abelian-subgroup bound: `|G| <= q^I(T/G)` where `q` is the
/// order of a largest abelian subgroup of `S_d` and `I` counts incomplete
/// vertices of the quotient tree.
pub fn verify_abelian_bound(tree: &FiniteTree, g: &PortraitGroup) -> Result<AbelianBoundReport> {
    if **g.tree() != *tree {
        return Err(Error::TreeMismatch("group does not act on this tree".into()));
    }
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let q = largest_abelian_order(tree.arity())?;
    let i_quotient = g.quotient_tree()?.incomplete_counts().total;
    let rhs = num_traits::pow(BigUint::from(q), i_quotient);
    let order = BigUint::from(g.order());
    Ok(AbelianBoundReport {
        bound_holds: order <= rhs,
        order,
        abelian: true,
        i_quotient,
        q,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::aut::{closure, enumerate_aut, TreePortrait};

    fn complete(d: usize, n: usize) -> Arc<FiniteTree> {
        Arc::new(FiniteTree::complete(d, n).unwrap())
    }

    #[test]
    fn trivial_and_order_two() {
        let t = complete(2, 2);
        let triv = PortraitGroup::trivial(t.clone());
        assert_eq!(enumerate_abelian_subgroups(&triv, 10).unwrap().len(), 1);

        let g = enumerate_aut(complete(2, 1), 10).unwrap();
        assert_eq!(enumerate_abelian_subgroups(&g, 10).unwrap().len(), 2);
    }

    #[test]
    fn dihedral_of_order_eight() {
        let g = enumerate_aut(complete(2, 2), 100).unwrap();
        let subs = enumerate_abelian_subgroups(&g, 100).unwrap();
        // trivial, five of order 2, three of order 4
        assert_eq!(subs.len(), 9);
        assert!(subs.iter().all(PortraitGroup::is_abelian));
    }

    #[test]
    fn sweep_cap() {
        let g = enumerate_aut(complete(2, 3), 1000).unwrap();
        assert!(enumerate_abelian_subgroups(&g, 100).is_err());
    }

    #[test]
    fn bound_examples() {
        let t2 = complete(2, 2);
        let r = verify_abelian_bound(&t2, &PortraitGroup::trivial(t2.clone())).unwrap();
        assert_eq!((r.order.clone(), r.rhs.clone(), r.bound_holds), (1u32.into(), 1u32.into(), true));

        let t1 = complete(2, 1);
        let swap = TreePortrait::new(t1.clone(), vec![vec![vec![1, 0]]]).unwrap();
        let g = closure(t1.clone(), &[swap], 4).unwrap();
        let r = verify_abelian_bound(&t1, &g).unwrap();
        assert_eq!(r.i_quotient, 1);
        assert_eq!(r.rhs, 2u32.into());
        assert!(r.bound_holds);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"order":"2","abelian":true,"I_quotient":1,"q":2,"bound_holds":true}"#
        );
    }

    #[test]
    fn non_abelian_is_rejected() {
        let t = complete(2, 2);
        let g = enumerate_aut(t.clone(), 100).unwrap();
        assert_eq!(verify_abelian_bound(&t, &g).unwrap_err(), Error::NotAbelian);
    }
}
