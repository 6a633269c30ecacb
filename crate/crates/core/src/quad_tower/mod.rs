//! Exact Galois degrees `[K(f^(-n)(α)) : K]` and labeled preimage trees for
//! quadratic rational maps, computed inside multiquadratic towers.

mod claims;
mod field;
mod rank;

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::dimension::DegreeSequence;
use crate::dynamics::{Poly, ProjPoint, RationalMap, DEFAULT_BIT_CAP};
use crate::error::{Error, Result};
use crate::tree::{FiniteTree, VertexRef};

pub use claims::{periodic_claim_check, pullback_check, ClaimReport, PullbackReport};
pub use field::{rational_sqrt, Elem, TowerField, Q};
pub use rank::{square_class_rank, Relation, SquareClassRank};

/// Depth accepted without an explicit override.
pub const DEFAULT_MAX_DEPTH: usize = 4;
/// Tower height cap: degree at most `2^12` over the rationals.
pub const DEFAULT_MAX_HEIGHT: usize = 12;

/// A point of the projective line over a tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TPoint {
    Finite(Elem),
    Infinity,
}

impl TPoint {
    pub fn height_bits(&self) -> u64 {
        match self {
            TPoint::Finite(e) => e.height_bits(),
            TPoint::Infinity => 0,
        }
    }
}

impl From<&ProjPoint> for TPoint {
    fn from(p: &ProjPoint) -> Self {
        match p {
            ProjPoint::Finite(a) => TPoint::Finite(Elem::rational(a.clone())),
            ProjPoint::Infinity => TPoint::Infinity,
        }
    }
}

impl fmt::Display for TPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TPoint::Infinity => f.write_str("inf"),
            TPoint::Finite(e) => write!(f, "[{}]", e.to_strings().join(", ")),
        }
    }
}

impl Serialize for TPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TPoint::Infinity => s.serialize_str("inf"),
            TPoint::Finite(e) => e.to_strings().serialize(s),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TowerOptions {
    /// Rationals whose square roots generate the base field.
    pub base_radicands: Vec<BigRational>,
    pub max_depth: usize,
    pub max_height: usize,
    pub bit_cap: u64,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            base_radicands: Vec::new(),
            max_depth: DEFAULT_MAX_DEPTH,
            max_height: DEFAULT_MAX_HEIGHT,
            bit_cap: DEFAULT_BIT_CAP,
        }
    }
}

fn require_quadratic(f: &RationalMap) -> Result<()> {
    if f.degree() != 2 {
        return Err(Error::Unsupported(format!(
            "exact towers need a degree-2 map, got degree {}",
            f.degree()
        )));
    }
    Ok(())
}

fn coeff(p: &Poly, i: usize) -> Elem {
    Elem::rational(p.coeff(i))
}

fn horner(field: &TowerField, p: &Poly, x: &Elem) -> Elem {
    p.coeffs()
        .iter()
        .rev()
        .fold(Elem::zero(), |acc, c| field.mul(&acc, x).add(&Elem::rational(c.clone())))
}

/// `f(p)` over the tower.
pub fn apply(f: &RationalMap, field: &TowerField, p: &TPoint) -> TPoint {
    let (num, den) = (f.numerator(), f.denominator());
    match p {
        TPoint::Infinity => match num.deg0().cmp(&den.deg0()) {
            std::cmp::Ordering::Greater => TPoint::Infinity,
            std::cmp::Ordering::Equal => TPoint::Finite(Elem::rational(num.lead() / den.lead())),
            std::cmp::Ordering::Less => TPoint::Finite(Elem::zero()),
        },
        TPoint::Finite(x) => {
            let bottom = horner(field, den, x);
            if bottom.is_zero() {
                TPoint::Infinity
            } else {
                TPoint::Finite(field.div(&horner(field, num, x), &bottom))
            }
        }
    }
}

/// `N(x) - βD(x) = A x^2 + B x + C`, or `D` itself for `β = ∞`.
fn fiber_coefficients(f: &RationalMap, field: &TowerField, beta: &TPoint) -> [Elem; 3] {
    let (num, den) = (f.numerator(), f.denominator());
    match beta {
        TPoint::Infinity => [coeff(den, 2), coeff(den, 1), coeff(den, 0)],
        TPoint::Finite(b) => {
            let at = |i| coeff(num, i).sub(&field.mul(b, &coeff(den, i)));
            [at(2), at(1), at(0)]
        }
    }
}

fn discriminant(field: &TowerField, [a, b, c]: &[Elem; 3]) -> Elem {
    field.square(b).sub(&field.mul(a, c).scale(&Q::from_integer(4.into())))
}

/// Preimages of `β` under `f`, with multiplicities, adjoining a square root
/// to `field` if needed. The root with formal radical coordinate `+1` comes
/// first.
pub fn preimage_points(f: &RationalMap, field: &mut TowerField, beta: &TPoint) -> Result<Vec<(TPoint, usize)>> {
    require_quadratic(f)?;
    let abc = fiber_coefficients(f, field, beta);
    let disc = discriminant(field, &abc);
    let root = if abc[0].is_zero() || disc.is_zero() {
        None
    } else {
        Some(field.adjoin_sqrt(&disc)?.0)
    };
    Ok(solve(field, &abc, root.as_ref()))
}

fn solve(field: &TowerField, [a, b, c]: &[Elem; 3], root: Option<&Elem>) -> Vec<(TPoint, usize)> {
    if a.is_zero() {
        if b.is_zero() {
            return vec![(TPoint::Infinity, 2)];
        }
        return vec![(TPoint::Finite(field.div(c, b).neg()), 1), (TPoint::Infinity, 1)];
    }
    let two_a = a.scale(&Q::from_integer(2.into()));
    match root {
        None => vec![(TPoint::Finite(field.div(&b.neg(), &two_a)), 2)],
        Some(s) => [s.clone(), s.neg()]
            .iter()
            .map(|s| (TPoint::Finite(field.div(&s.sub(b), &two_a)), 1))
            .collect(),
    }
}

/// Levels of preimages grown from a set of starting points.
#[derive(Clone, Debug)]
pub(crate) struct Growth {
    pub points: Vec<Vec<TPoint>>,
    pub children: Vec<Vec<Vec<usize>>>,
    /// Tower height after each completed level.
    pub heights: Vec<usize>,
    pub ranks: Vec<usize>,
    pub collapses: Vec<VertexRef>,
    pub truncated: Option<String>,
}

/// Grows `depth` levels of preimages below `start`, extending `field` one
/// level at a time by an independent set of discriminants. Stops early,
/// keeping the completed prefix, when a cap is hit.
pub(crate) fn grow(
    f: &RationalMap,
    field: &mut TowerField,
    start: Vec<TPoint>,
    depth: usize,
    opts: &TowerOptions,
) -> Result<Growth> {
    require_quadratic(f)?;
    let mut g = Growth {
        points: vec![start],
        children: Vec::new(),
        heights: vec![field.height()],
        ranks: Vec::new(),
        collapses: Vec::new(),
        truncated: None,
    };
    for level in 0..depth {
        let current = g.points.last().expect("start level");
        let abcs: Vec<[Elem; 3]> = current.iter().map(|b| fiber_coefficients(f, field, b)).collect();
        let discs: Vec<Elem> = abcs.iter().map(|abc| discriminant(field, abc)).collect();
        let split: Vec<usize> = (0..abcs.len())
            .filter(|&i| !abcs[i][0].is_zero() && !discs[i].is_zero())
            .collect();
        let mut next_field = field.clone();
        let wanted: Vec<Elem> = split.iter().map(|&i| discs[i].clone()).collect();
        let (rank, roots) = match rank::extend_with_roots(&mut next_field, &wanted, opts.max_height) {
            Ok(r) => r,
            Err(Error::TooLarge { .. }) => {
                g.truncated = Some(format!(
                    "level {} would exceed tower degree 2^{}",
                    level + 1,
                    opts.max_height
                ));
                break;
            }
            Err(e) => return Err(e),
        };
        let mut next = Vec::new();
        let mut kids = Vec::with_capacity(current.len());
        let mut root_of = vec![None; abcs.len()];
        for (&i, r) in split.iter().zip(&roots) {
            root_of[i] = Some(r);
        }
        for (i, abc) in abcs.iter().enumerate() {
            let root = root_of[i];
            let sols = solve(&next_field, abc, root);
            if sols.len() == 1 {
                g.collapses.push(VertexRef { level, index: i });
            }
            kids.push((next.len()..next.len() + sols.len()).collect::<Vec<_>>());
            next.extend(sols.into_iter().map(|(p, _)| p));
        }
        let bits = next.iter().map(TPoint::height_bits).max().unwrap_or(0);
        if bits > opts.bit_cap {
            g.truncated = Some(format!("level {} has {bits}-bit coordinates, cap is {}", level + 1, opts.bit_cap));
            break;
        }
        *field = next_field;
        g.points.push(next);
        g.children.push(kids);
        g.heights.push(field.height());
        g.ranks.push(rank.rank);
    }
    Ok(g)
}

/// Result of [`galois_degree_sequence`].
#[derive(Clone, Debug)]
pub struct TowerRun {
    pub field: TowerField,
    /// Height of the base field inside `field`.
    pub base_height: usize,
    /// `[K_n : K]` for each completed level.
    pub degrees: Vec<BigUint>,
    /// Square-class rank adjoined at each level.
    pub ranks: Vec<usize>,
    pub tree: FiniteTree,
    pub points: Vec<Vec<TPoint>>,
    /// Vertices with a single preimage.
    pub collapses: Vec<VertexRef>,
    /// Set when a cap stopped the computation before the requested depth.
    pub truncated: Option<String>,
}

impl TowerRun {
    pub fn sequence(&self) -> Result<DegreeSequence> {
        DegreeSequence::new(2, self.degrees.clone())
    }

    /// Tree JSON with a `point` per vertex and the tower's radicands.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct V<'a> {
            children: &'a [usize],
            point: &'a TPoint,
        }
        #[derive(Serialize)]
        struct T<'a> {
            d: usize,
            height: usize,
            radicands: Vec<Vec<String>>,
            base_height: usize,
            #[serde(serialize_with = "crate::report::biguint_vec_string")]
            degrees: &'a [BigUint],
            truncated: &'a Option<String>,
            levels: Vec<Vec<V<'a>>>,
        }
        let t = T {
            d: 2,
            height: self.tree.height(),
            radicands: self.field.radicands().iter().map(Elem::to_strings).collect(),
            base_height: self.base_height,
            degrees: &self.degrees,
            truncated: &self.truncated,
            levels: self
                .tree
                .levels()
                .iter()
                .zip(&self.points)
                .map(|(lvl, pts)| {
                    lvl.iter()
                        .zip(pts)
                        .map(|(v, p)| V { children: &v.children, point: p })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&t).expect("tree json")
    }
}

/// Exact degrees `[K_n : K]` for `n <= depth` and the labeled tree
/// `T_{f,α}`, where `K` is the rationals extended by
/// `opts.base_radicands`.
pub fn galois_degree_sequence(
    f: &RationalMap,
    alpha: &ProjPoint,
    depth: usize,
    opts: &TowerOptions,
) -> Result<TowerRun> {
    require_quadratic(f)?;
    if depth > opts.max_depth {
        return Err(Error::too_large("tower depth", depth, opts.max_depth));
    }
    let mut field = TowerField::rationals();
    for r in &opts.base_radicands {
        field.adjoin_sqrt(&Elem::rational(r.clone()))?;
    }
    let base_height = field.height();
    let g = grow(f, &mut field, vec![TPoint::from(alpha)], depth, opts)?;
    let mut children = g.children;
    children.push(vec![Vec::new(); g.points.last().map_or(0, Vec::len)]);
    let tree = FiniteTree::from_children(2, children)?;
    Ok(TowerRun {
        field,
        base_height,
        degrees: g.heights.iter().map(|&h| BigUint::one() << (h - base_height)).collect(),
        ranks: g.ranks,
        tree,
        points: g.points,
        collapses: g.collapses,
        truncated: g.truncated,
    })
}

/// The exact preimage tree through `depth`, failing if a cap intervenes.
pub fn exact_tree(f: &RationalMap, alpha: &ProjPoint, depth: usize) -> Result<FiniteTree> {
    let opts = TowerOptions { max_depth: depth.max(DEFAULT_MAX_DEPTH), ..TowerOptions::default() };
    let run = galois_degree_sequence(f, alpha, depth, &opts)?;
    match run.truncated {
        Some(why) => Err(Error::Resource(why)),
        None => Ok(run.tree),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{parse_map, parse_point, tree_shape};

    fn run(f: &str, a: &str, n: usize) -> TowerRun {
        galois_degree_sequence(&parse_map(f).unwrap(), &parse_point(a).unwrap(), n, &TowerOptions::default()).unwrap()
    }

    fn degs(r: &TowerRun) -> Vec<u64> {
        r.degrees.iter().map(|d| d.try_into().unwrap()).collect()
    }

    #[test]
    fn spec_degrees() {
        assert_eq!(degs(&run("x^2+1", "0", 2)), vec![1, 2, 8]);
        assert_eq!(degs(&run("x^2", "0", 4)), vec![1, 1, 1, 1, 1]);
        assert_eq!(degs(&run("x^2", "2", 2)), vec![1, 2, 8]);
    }

    #[test]
    fn preimages() {
        let f = parse_map("x^2").unwrap();
        let mut field = TowerField::rationals();
        let pts = preimage_points(&f, &mut field, &TPoint::Finite(Elem::int(2))).unwrap();
        assert_eq!(field.height(), 1);
        assert_eq!(pts[0].0, TPoint::Finite(field.generator(0)));
        assert_eq!(pts[1].0, TPoint::Finite(field.generator(0).neg()));

        let f = parse_map("x^2-1").unwrap();
        let mut field = TowerField::rationals();
        let pts = preimage_points(&f, &mut field, &TPoint::Finite(Elem::int(-1))).unwrap();
        assert_eq!(pts, vec![(TPoint::Finite(Elem::zero()), 2)]);

        let f = parse_map("x^2+1").unwrap();
        let mut field = TowerField::rationals();
        field.adjoin_sqrt(&Elem::int(-1)).unwrap();
        let i = TPoint::Finite(field.generator(0));
        let pts = preimage_points(&f, &mut field, &i).unwrap();
        assert_eq!(field.height(), 2);
        for (p, _) in &pts {
            assert_eq!(apply(&f, &field, p), i);
        }

        let f = parse_map("1/x^2").unwrap();
        let mut field = TowerField::rationals();
        let pts = preimage_points(&f, &mut field, &TPoint::Infinity).unwrap();
        assert_eq!(pts, vec![(TPoint::Finite(Elem::zero()), 2)]);
        let pts = preimage_points(&f, &mut field, &TPoint::Finite(Elem::zero())).unwrap();
        assert_eq!(pts, vec![(TPoint::Infinity, 2)]);
    }

    #[test]
    fn tree_edges_are_f() {
        let f = parse_map("x^2-1").unwrap();
        let r = run("x^2-1", "0", 3);
        for k in 1..r.points.len() {
            for (i, v) in r.tree.level(k).iter().enumerate() {
                let parent = &r.points[k - 1][v.parent.unwrap()];
                assert_eq!(&apply(&f, &r.field, &r.points[k][i]), parent);
            }
        }
    }

    #[test]
    fn agrees_with_radical_degrees() {
        for (f, a, n) in [("x^2-1", "0", 4), ("x^2-2", "2", 4), ("x^2+1", "0", 3), ("(x^2+1)/x", "1", 3)] {
            let r = run(f, a, n);
            assert!(r.truncated.is_none());
            let s = tree_shape(&parse_map(f).unwrap(), &parse_point(a).unwrap(), n, DEFAULT_BIT_CAP).unwrap();
            assert_eq!(r.tree.level_sizes(), s.level_sizes, "{f} at {a}");
        }
    }

    #[test]
    fn base_extension() {
        let opts = TowerOptions { base_radicands: vec![Q::from_integer((-1).into())], ..TowerOptions::default() };
        let r = galois_degree_sequence(&parse_map("x^2+1").unwrap(), &ProjPoint::int(0), 2, &opts).unwrap();
        assert_eq!(degs(&r), vec![1, 1, 4]);
        assert_eq!(r.base_height, 1);
    }

    #[test]
    fn caps() {
        let opts = TowerOptions { max_height: 2, ..TowerOptions::default() };
        let r = galois_degree_sequence(&parse_map("x^2+1").unwrap(), &ProjPoint::int(0), 3, &opts).unwrap();
        assert_eq!(degs(&r), vec![1, 2]);
        assert!(r.truncated.is_some());
        assert!(galois_degree_sequence(&parse_map("x^2+1").unwrap(), &ProjPoint::int(0), 5, &TowerOptions::default()).is_err());
        assert!(galois_degree_sequence(&parse_map("x^3").unwrap(), &ProjPoint::int(0), 1, &TowerOptions::default()).is_err());
    }
}
