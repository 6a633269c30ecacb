//! Exhaustive search for the largest abelian subgroup of a small symmetric
//! group.

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};

type Perm = Vec<u8>;

fn all_perms(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Perm = (0..d as u8).collect();
    heap_permute(d, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, cur: &mut Perm, out: &mut Vec<Perm>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, cur, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, cur, out);
}

fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn commutes(a: &[u8], b: &[u8]) -> bool {
    b.iter().enumerate().all(|(i, &x)| a[x as usize] == b[a[i] as usize])
}

fn cycle_type(p: &[u8]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut lens = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        lens.push(len);
    }
    lens.sort_unstable();
    lens
}

/// Subgroup generated by an abelian set, as a sorted element list.
fn abelian_closure(base: &[Perm], g: &Perm) -> Vec<Perm> {
    let mut out: Vec<Perm> = base.to_vec();
    let mut power = g.clone();
    let id: Perm = (0..g.len() as u8).collect();
    let mut powers = Vec::new();
    while power != id {
        powers.push(power.clone());
        power = compose(g, &power);
    }
    let mut extra = Vec::new();
    for h in base {
        for p in &powers {
            extra.push(compose(h, p));
        }
    }
    out.extend(extra);
    out.sort();
    out.dedup();
    out
}

/// Order of the largest abelian subgroup of `S_d`, for `2 <= d <= 8`.
///
/// Any abelian subgroup is conjugate to one containing a fixed
/// representative of some cycle type, so the search roots at one element per
/// cycle type and then grows commuting generating sets inside running
/// centralizers. A branch is cut once its centralizer is no larger than the
/// best order found, since every abelian overgroup lies inside it.
pub fn largest_abelian_order(d: usize) -> Result<u64> {
    static CACHE: [OnceLock<u64>; 9] = [const { OnceLock::new() }; 9];
    if !(2..=8).contains(&d) {
        return Err(Error::invalid(format!("largest abelian order supported for 2 <= d <= 8, got {d}")));
    }
    Ok(*CACHE[d].get_or_init(|| search(d)))
}

fn search(d: usize) -> u64 {
    let group = all_perms(d);
    let id: Perm = (0..d as u8).collect();
    let mut reps: Vec<Perm> = Vec::new();
    let mut types = HashSet::new();
    for p in &group {
        if *p != id && types.insert(cycle_type(p)) {
            reps.push(p.clone());
        }
    }
    let mut best = 1u64;
    let mut seen: HashSet<Vec<Perm>> = HashSet::new();
    for r in reps {
        let h = abelian_closure(&[id.clone()], &r);
        let cent: Vec<Perm> = group.iter().filter(|x| commutes(x, &r)).cloned().collect();
        if seen.insert(h.clone()) {
            grow(&h, &cent, &mut best, &mut seen);
        }
    }
    best
}

fn grow(h: &[Perm], cent: &[Perm], best: &mut u64, seen: &mut HashSet<Vec<Perm>>) {
    *best = (*best).max(h.len() as u64);
    if cent.len() as u64 <= *best {
        return;
    }
    for x in cent {
        if h.binary_search(x).is_ok() {
            continue;
        }
        let next = abelian_closure(h, x);
        if !seen.insert(next.clone()) {
            continue;
        }
        let next_cent: Vec<Perm> = cent.iter().filter(|y| commutes(y, x)).cloned().collect();
        grow(&next, &next_cent, best, seen);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_symmetric_groups() {
        assert_eq!(largest_abelian_order(2).unwrap(), 2);
        assert_eq!(largest_abelian_order(3).unwrap(), 3);
        assert_eq!(largest_abelian_order(4).unwrap(), 4);
        assert_eq!(largest_abelian_order(5).unwrap(), 6);
        assert_eq!(largest_abelian_order(6).unwrap(), 9);
    }

    #[test]
    fn out_of_range() {
        assert!(largest_abelian_order(1).is_err());
        assert!(largest_abelian_order(9).is_err());
    }

    #[test]
    fn perm_helpers() {
        assert_eq!(all_perms(4).len(), 24);
        assert_eq!(cycle_type(&[1, 0, 3, 2, 4]), vec![1, 2, 2]);
        assert!(commutes(&[1, 0, 2, 3], &[0, 1, 3, 2]));
        assert!(!commutes(&[1, 0, 2], &[0, 2, 1]));
    }
}
