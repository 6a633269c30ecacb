//! Shapes of preimage trees `T_{f,α}` for maps of any degree.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::map::{ProjPoint, RationalMap};
use super::modp::rational_roots;
use super::orbit::CriticalOrbits;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::tree::FiniteTree;

/// Cap on the number of vertices materialized in a shape tree.
pub const MAX_SHAPE_VERTICES: usize = 1 << 20;

/// Level statistics of `T_{f,α}` truncated at `depth`, with the tree itself
/// when its edge structure could be decided.
#[derive(Clone, Debug, Serialize)]
pub struct TreeShape {
    pub arity: usize,
    pub depth: usize,
    /// `|L_n|`, the number of distinct points of `f^(-n)(α)`.
    pub level_sizes: Vec<usize>,
    /// Incomplete vertices per internal level, where known.
    pub incomplete: Vec<Option<usize>>,
    #[serde(skip)]
    pub tree: Option<FiniteTree>,
    /// Why the tree is missing, if it is.
    pub undeterminable: Option<String>,
}

#[derive(Clone, Debug)]
enum Item {
    /// An exactly known rational vertex.
    Point(ProjPoint),
    /// A vertex no post-critical point lies above within the horizon, so its
    /// subtree is complete.
    Generic,
}

/// `|L_n|` for `n <= depth` from the radicals of the preimage polynomials.
pub fn level_sizes(f: &RationalMap, alpha: &ProjPoint, depth: usize, bit_cap: u64) -> Result<Vec<usize>> {
    f.require_dynamical()?;
    Ok(f.iterates(depth, bit_cap)?.iter().map(|g| g.fiber(alpha).distinct()).collect())
}

/// Builds the shape of `T_{f,α}` through level `depth`.
///
/// Rational vertices are tracked exactly. A vertex is expanded generically,
/// with `d` children at every later level, once no critical orbit can land
/// on it within the horizon. Irrational vertices that do lie on a critical
/// orbit would need root isolation to tell apart; for `d = 2` those cases
/// are handed to the exact quadratic tower, otherwise the tree is reported
/// as undeterminable while the level sizes are still returned.
pub fn tree_shape(f: &RationalMap, alpha: &ProjPoint, depth: usize, bit_cap: u64) -> Result<TreeShape> {
    let sizes = level_sizes(f, alpha, depth, bit_cap)?;
    let d = f.degree();
    let orbits = CriticalOrbits::new(f, depth, bit_cap)?;
    let mut shape = TreeShape {
        arity: d,
        depth,
        level_sizes: sizes.clone(),
        incomplete: vec![None; depth],
        tree: None,
        undeterminable: None,
    };
    let total: usize = sizes.iter().sum();
    if total > MAX_SHAPE_VERTICES {
        shape.undeterminable = Some(format!("{total} vertices exceed the cap of {MAX_SHAPE_VERTICES}"));
        return Ok(shape);
    }

    let special = |p: &ProjPoint, level: usize| depth > level && orbits.first_hit(p, depth - level).is_some();
    let root = if special(alpha, 0) { Item::Point(alpha.clone()) } else { Item::Generic };
    let mut items = vec![root];
    let mut children: Vec<Vec<Vec<usize>>> = Vec::new();
    for level in 0..depth {
        let mut next = Vec::new();
        let mut kids = Vec::with_capacity(items.len());
        for item in &items {
            let start = next.len();
            match item {
                Item::Generic => next.extend((0..d).map(|_| Item::Generic)),
                Item::Point(beta) => {
                    let fiber = f.fiber(beta);
                    let radical = fiber.poly.radical();
                    let roots = rational_roots(&radical)?;
                    let mut irrational = radical;
                    for r in &roots {
                        irrational = irrational.div_exact(&Poly::new(vec![-r.clone(), BigRational::one()]));
                    }
                    let below = level + 1;
                    for r in roots {
                        let p = ProjPoint::Finite(r);
                        next.push(if special(&p, below) { Item::Point(p) } else { Item::Generic });
                    }
                    if fiber.infinity_multiplicity > 0 {
                        let p = ProjPoint::Infinity;
                        next.push(if special(&p, below) { Item::Point(p) } else { Item::Generic });
                    }
                    let k = irrational.deg0();
                    if k > 0 && depth > below && orbits.meets_roots_of(&irrational, depth - below) {
                        return handoff(f, alpha, shape, format!(
                            "level {below} has irrational vertices on a critical orbit (factor {irrational})"
                        ));
                    }
                    next.extend((0..k).map(|_| Item::Generic));
                }
            }
            kids.push((start..next.len()).collect::<Vec<_>>());
        }
        shape.incomplete[level] = Some(kids.iter().filter(|c| c.len() < d).count());
        children.push(kids);
        items = next;
    }
    children.push(vec![Vec::new(); items.len()]);
    let tree = FiniteTree::from_children(d, children)?;
    if tree.level_sizes() != sizes {
        return Err(Error::invalid(format!(
            "tree levels {:?} disagree with radical degrees {sizes:?}",
            tree.level_sizes()
        )));
    }
    shape.tree = Some(tree);
    Ok(shape)
}

fn handoff(f: &RationalMap, alpha: &ProjPoint, mut shape: TreeShape, reason: String) -> Result<TreeShape> {
    if f.degree() == 2 {
        if let Ok(exact) = crate::quad_tower::exact_tree(f, alpha, shape.depth) {
            shape.incomplete = exact
                .incomplete_counts()
                .per_level
                .iter()
                .take(shape.depth)
                .map(|&c| Some(c))
                .collect();
            shape.tree = Some(exact);
            return Ok(shape);
        }
    }
    shape.undeterminable = Some(format!("edge structure undeterminable at this degree: {reason}"));
    Ok(shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::map::DEFAULT_BIT_CAP;
    use crate::dynamics::parse::{parse_map, parse_point};

    fn shape(f: &str, a: &str, depth: usize) -> TreeShape {
        tree_shape(&parse_map(f).unwrap(), &parse_point(a).unwrap(), depth, DEFAULT_BIT_CAP).unwrap()
    }

    #[test]
    fn spec_shapes() {
        let s = shape("x^2", "0", 3);
        assert_eq!(s.level_sizes, vec![1, 1, 1, 1]);
        assert_eq!(s.incomplete, vec![Some(1); 3]);
        assert_eq!(s.tree.unwrap(), FiniteTree::path(2, 3).unwrap());

        let s = shape("x^2-1", "-1", 2);
        assert_eq!(s.level_sizes, vec![1, 1, 2]);

        let s = shape("x^2+1", "0", 2);
        assert_eq!(s.level_sizes, vec![1, 2, 4]);
        assert!(s.tree.unwrap().is_complete());
    }

    #[test]
    fn rational_collapse() {
        // -1 -> 0 -> -1 under x^2 - 1: both are critical values
        let s = shape("x^2-1", "0", 4);
        let t = s.tree.expect("rational critical orbit is decidable");
        assert_eq!(t.level_sizes(), s.level_sizes);
        assert_eq!(s.level_sizes, vec![1, 2, 3, 6, 11]);
    }

    #[test]
    fn cubic_chebyshev() {
        // critical values ±2 of x^3 - 3x; 2 is fixed, -2 -> -2
        let s = shape("x^3-3*x", "2", 3);
        let t = s.tree.unwrap();
        assert_eq!(t.level_sizes(), s.level_sizes);
        assert_eq!(s.level_sizes[1], 2);
    }

    #[test]
    fn non_postcritical_is_complete() {
        let s = shape("x^3+x+1", "5", 2);
        assert_eq!(s.level_sizes, vec![1, 3, 9]);
        assert!(s.tree.unwrap().is_complete());
    }
}
