use serde::Serialize;

use super::field::{Elem, TowerField};
use crate::error::{Error, Result};

/// Dependent element `e = (prod of basis[subset]) · root^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub index: usize,
    pub subset: Vec<usize>,
    pub root: Elem,
}

/// Rank of a list of elements in the square-class group `F*/F*^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareClassRank {
    pub rank: usize,
    /// Indices into the input of an independent basis.
    pub basis: Vec<usize>,
    pub relations: Vec<Relation>,
}

#[derive(Serialize)]
struct RankSummary<'a> {
    rank: usize,
    basis: &'a [usize],
    dependent: Vec<(usize, &'a [usize])>,
}

impl Serialize for SquareClassRank {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RankSummary {
            rank: self.rank,
            basis: &self.basis,
            dependent: self.relations.iter().map(|r| (r.index, r.subset.as_slice())).collect(),
        }
        .serialize(s)
    }
}

/// Square roots of `elems` in `F(√e : e in elems)`, extending `field` in
/// place. Returns the rank data and, for each input, a root in the
/// extended field.
///
/// Works by Kummer theory: once `b_1, ..., b_r` are adjoined, a square root
/// of an element of `F` that exists in the extension lies in a single
/// eigenline `F · prod_{j in S} √b_j`, so the subset `S` can be read off
/// the coordinates of the root.
pub(crate) fn extend_with_roots(
    field: &mut TowerField,
    elems: &[Elem],
    max_height: usize,
) -> Result<(SquareClassRank, Vec<Elem>)> {
    let base = field.height();
    let mut basis = Vec::new();
    // per basis element: δ = c^2 · radicand, so √δ = c · generator
    let mut scales = Vec::new();
    let mut relations = Vec::new();
    let mut roots = Vec::with_capacity(elems.len());
    for (index, e) in elems.iter().enumerate() {
        if e.is_zero() {
            return Err(Error::invalid("square classes of zero are undefined"));
        }
        if let Some(w) = field.is_square(e) {
            let (subset, c) = read_eigenline(field, &w, base);
            let mut root = c;
            for &j in &subset {
                root = field.div(&root, &scales[j]);
            }
            debug_assert!({
                let mut prod = field.square(&root);
                for &j in &subset {
                    prod = field.mul(&prod, &elems[basis[j]]);
                }
                prod == *e
            });
            relations.push(Relation { index, subset, root });
            roots.push(w);
            continue;
        }
        if field.height() >= max_height {
            return Err(Error::too_large("tower height", field.height() + 1, max_height));
        }
        let (w, doubled) = field.adjoin_sqrt(e)?;
        debug_assert!(doubled);
        let generator = field.generator(field.height() - 1);
        scales.push(coefficient_of(&w, &generator));
        basis.push(index);
        roots.push(w);
    }
    let rank = basis.len();
    Ok((SquareClassRank { rank, basis, relations }, roots))
}

/// `w = c · prod_{j in S} g_(base + j)` with `c` below `base`.
fn read_eigenline(field: &TowerField, w: &Elem, base: usize) -> (Vec<usize>, Elem) {
    let low = 1usize << base;
    let coords = w.coords();
    let block = coords
        .iter()
        .position(|c| !num_traits::Zero::is_zero(c))
        .map_or(0, |i| i / low);
    debug_assert!(coords
        .iter()
        .enumerate()
        .all(|(i, c)| num_traits::Zero::is_zero(c) || i / low == block));
    let subset: Vec<usize> = (0..usize::BITS as usize).filter(|b| block >> b & 1 == 1).collect();
    let c = if coords.len() <= low {
        w.clone()
    } else {
        let mut v = coords[block * low..(block + 1) * low].to_vec();
        v.resize(low, num_traits::Zero::zero());
        Elem::from_coords(v)
    };
    let _ = field;
    (subset, c)
}

/// The rational-below factor `c` in `w = c · g`.
fn coefficient_of(w: &Elem, g: &Elem) -> Elem {
    let half = g.coords().len() / 2;
    let mut v = w.coords()[half..].to_vec();
    v.resize(half, num_traits::Zero::zero());
    Elem::from_coords(v)
}

/// Rank, basis and relations of `elems` in `F*/F*^2`, leaving `field`
/// untouched.
pub fn square_class_rank(field: &TowerField, elems: &[Elem]) -> Result<SquareClassRank> {
    let mut scratch = field.clone();
    Ok(extend_with_roots(&mut scratch, elems, usize::MAX)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_examples() {
        let f = TowerField::rationals();
        let r = square_class_rank(&f, &[Elem::int(4), Elem::int(9)]).unwrap();
        assert_eq!(r.rank, 0);
        let r = square_class_rank(&f, &[Elem::int(2), Elem::int(3), Elem::int(6)]).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.basis, vec![0, 1]);
        assert_eq!(r.relations.len(), 1);
        assert_eq!(r.relations[0].subset, vec![0, 1]);
        // 6 = 2 · 3 · 1^2
        assert_eq!(f.square(&r.relations[0].root), Elem::one());
        let r = square_class_rank(&f, &[Elem::int(8), Elem::int(18)]).unwrap();
        assert_eq!((r.rank, r.relations[0].subset.clone()), (1, vec![0]));
        // 18 = 8 · (3/2)^2
        assert_eq!(f.square(&r.relations[0].root), Elem::rational(num_rational::BigRational::new(9.into(), 4.into())));
    }

    #[test]
    fn over_gaussian_field() {
        let mut f = TowerField::rationals();
        f.adjoin_sqrt(&Elem::int(-1)).unwrap();
        let i = f.generator(0);
        let a = i.sub(&Elem::one());
        let b = i.neg().sub(&Elem::one());
        let r = square_class_rank(&f, &[a, b]).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(f.height(), 1);
    }

    #[test]
    fn roots_are_roots() {
        let mut f = TowerField::rationals();
        let elems = [Elem::int(2), Elem::int(5), Elem::int(10), Elem::int(-1), Elem::int(-20)];
        let (rank, roots) = extend_with_roots(&mut f, &elems, 12).unwrap();
        assert_eq!(rank.rank, 3);
        for (e, w) in elems.iter().zip(&roots) {
            assert_eq!(&f.square(w), e);
        }
        let mut g = TowerField::rationals();
        assert!(extend_with_roots(&mut g, &elems, 2).is_err());
    }
}
