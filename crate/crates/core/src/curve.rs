//! The Sierpinski-Knopp curve on the canonical triangle.
//!
//! The root triangle has entry `(0,0)`, right-angle vertex `(1,1)` and exit
//! `(2,0)`, so its area is exactly 1. Subdividing a fraction drops the
//! altitude from its right-angle vertex: the first child runs from the entry
//! to the right-angle vertex, the second from there to the exit. Both children
//! keep the altitude foot as their own right-angle vertex, which keeps every
//! vertex dyadic.

use std::cmp::Ordering;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact::{check_depth, Dyadic};

/// Largest order for which whole tilings or sample tables are materialized.
pub const MAX_MATERIALIZED_ORDER: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: Dyadic,
    pub y: Dyadic,
}

impl Point {
    pub fn new(x: Dyadic, y: Dyadic) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Dyadic::from(x), Dyadic::from(y))
    }

    pub fn origin() -> Self {
        Point::from_ints(0, 0)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new((&self.x + &other.x).half(), (&self.y + &other.y).half())
    }

    pub fn dist_sq(&self, other: &Point) -> Dyadic {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        dx.square() + dy.square()
    }

    pub fn norm_sq(&self) -> Dyadic {
        self.x.square() + self.y.square()
    }

    pub fn dot(&self, other: &Point) -> Dyadic {
        &self.x * &other.x + &self.y * &other.y
    }

    /// z-component of the cross product of two vectors.
    pub fn cross(&self, other: &Point) -> Dyadic {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn scale_pow2(&self, shift: i64) -> Point {
        Point::new(self.x.mul_pow2(shift), self.y.mul_pow2(shift))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

/// Orientation of `c` relative to the directed line `a -> b`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    (b - a).cross(&(c - a)).signum()
}

/// Closed point-in-triangle test; works for either winding.
pub fn triangle_contains(a: &Point, b: &Point, c: &Point, p: &Point) -> bool {
    let s = [orient(a, b, p), orient(b, c, p), orient(c, a, p)];
    let has_pos = s.contains(&Ordering::Greater);
    let has_neg = s.contains(&Ordering::Less);
    !(has_pos && has_neg)
}

/// Order and index of a fraction: the time interval `[k/2^n, (k+1)/2^n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FractionId {
    pub order: u32,
    pub index: u128,
}

/// One fraction of the curve with its traversal orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FractionRepr", into = "FractionRepr")]
pub struct OrientedFraction {
    pub order: u32,
    pub index: u128,
    pub entry: Point,
    pub right: Point,
    pub exit: Point,
}

#[derive(Serialize, Deserialize)]
struct FractionRepr {
    order: u32,
    index: u128,
    entry: Point,
    right: Point,
    exit: Point,
    time_start: Dyadic,
    time_end: Dyadic,
}

impl From<OrientedFraction> for FractionRepr {
    fn from(f: OrientedFraction) -> Self {
        FractionRepr {
            time_start: f.time_start(),
            time_end: f.time_end(),
            order: f.order,
            index: f.index,
            entry: f.entry,
            right: f.right,
            exit: f.exit,
        }
    }
}

impl TryFrom<FractionRepr> for OrientedFraction {
    type Error = Error;
    fn try_from(r: FractionRepr) -> Result<Self> {
        let f = OrientedFraction {
            order: r.order,
            index: r.index,
            entry: r.entry,
            right: r.right,
            exit: r.exit,
        };
        if f.order > 127 || f.index >> f.order != 0 {
            return Err(domain("fraction index out of range"));
        }
        if f.time_start() != r.time_start || f.time_end() != r.time_end {
            return Err(domain("fraction times disagree with its order and index"));
        }
        Ok(f)
    }
}

impl OrientedFraction {
    pub fn id(&self) -> FractionId {
        FractionId {
            order: self.order,
            index: self.index,
        }
    }

    /// `k / 2^n`.
    pub fn time_start(&self) -> Dyadic {
        Dyadic::new(self.index, self.order)
    }

    /// `(k + 1) / 2^n`.
    pub fn time_end(&self) -> Dyadic {
        Dyadic::new(self.index + 1, self.order)
    }

    /// `2^-n`, the length of the fractal period.
    pub fn duration(&self) -> Dyadic {
        Dyadic::pow2_neg(self.order)
    }

    pub fn altitude_foot(&self) -> Point {
        self.entry.midpoint(&self.exit)
    }

    /// Exact area (the triangle is similar to the root with area 1).
    pub fn area(&self) -> Dyadic {
        (&self.right - &self.entry).cross(&(&self.exit - &self.entry)).abs().half()
    }

    pub fn contains(&self, p: &Point) -> bool {
        triangle_contains(&self.entry, &self.right, &self.exit, p)
    }

    pub fn vertices(&self) -> [&Point; 3] {
        [&self.entry, &self.right, &self.exit]
    }

    pub fn centroid_f64(&self) -> (f64, f64) {
        let [a, b, c] = self.vertices().map(Point::to_f64);
        ((a.0 + b.0 + c.0) / 3.0, (a.1 + b.1 + c.1) / 3.0)
    }

    /// First (`false`) or second (`true`) half.
    pub fn child(&self, second: bool) -> OrientedFraction {
        let foot = self.altitude_foot();
        if second {
            OrientedFraction {
                order: self.order + 1,
                index: 2 * self.index + 1,
                entry: self.right.clone(),
                right: foot,
                exit: self.exit.clone(),
            }
        } else {
            OrientedFraction {
                order: self.order + 1,
                index: 2 * self.index,
                entry: self.entry.clone(),
                right: foot,
                exit: self.right.clone(),
            }
        }
    }

    pub fn subdivide(&self) -> (OrientedFraction, OrientedFraction) {
        let foot = self.altitude_foot();
        let first = OrientedFraction {
            order: self.order + 1,
            index: 2 * self.index,
            entry: self.entry.clone(),
            right: foot.clone(),
            exit: self.right.clone(),
        };
        let second = OrientedFraction {
            order: self.order + 1,
            index: 2 * self.index + 1,
            entry: self.right.clone(),
            right: foot,
            exit: self.exit.clone(),
        };
        (first, second)
    }

    /// All descendants of order `self.order + levels`, in time order.
    pub fn descendants(&self, levels: u32) -> Vec<OrientedFraction> {
        let mut level = vec![self.clone()];
        for _ in 0..levels {
            level = level
                .iter()
                .flat_map(|f| {
                    let (a, b) = f.subdivide();
                    [a, b]
                })
                .collect();
        }
        level
    }
}

pub fn root_fraction() -> OrientedFraction {
    OrientedFraction {
        order: 0,
        index: 0,
        entry: Point::from_ints(0, 0),
        right: Point::from_ints(1, 1),
        exit: Point::from_ints(2, 0),
    }
}

pub fn subdivide(f: &OrientedFraction) -> (OrientedFraction, OrientedFraction) {
    f.subdivide()
}

/// The fraction on `[k/2^n, (k+1)/2^n]`, reached by following the bits of
/// `k` from the most significant end.
pub fn fraction_at(n: u32, k: u128) -> Result<OrientedFraction> {
    check_depth(n)?;
    if n < 128 && k >> n != 0 {
        return Err(domain(format!("index {k} is not below 2^{n}")));
    }
    let mut f = root_fraction();
    for bit in (0..n).rev() {
        f = f.child((k >> bit) & 1 == 1);
    }
    Ok(f)
}

fn check_unit_time(t: &Dyadic) -> Result<()> {
    if t.is_negative() || *t > Dyadic::one() {
        return Err(domain(format!("time {t} is outside [0,1]")));
    }
    Ok(())
}

/// `s(t)` for a dyadic time, exactly.
pub fn evaluate(t: &Dyadic) -> Result<Point> {
    check_unit_time(t)?;
    if *t == Dyadic::one() {
        return Ok(root_fraction().exit);
    }
    let n = t.exponent();
    check_depth(n)?;
    let k = t
        .numerator()
        .try_into()
        .map_err(|_| domain(format!("time {t} has an unrepresentable index")))?;
    Ok(fraction_at(n, k)?.entry)
}

/// Approximates `s(t)` by the entry of the depth-`depth` fraction containing
/// `t`. The second value bounds the squared error: `4 * 2^-depth`, the squared
/// diameter of that fraction.
pub fn evaluate_real(t: f64, depth: u32) -> Result<(Point, Dyadic)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("time {t} is outside [0,1]")));
    }
    check_depth(depth)?;
    let bound = Dyadic::new(4, depth);
    if t == 1.0 {
        return Ok((root_fraction().exit, bound));
    }
    let exact = Dyadic::from_f64(t)?;
    // floor(t * 2^depth); t is nonnegative so the shift floors.
    let scaled = exact.numerator() << depth as u64 >> exact.exponent() as u64;
    let k: u128 = scaled
        .try_into()
        .map_err(|_| domain("fraction index does not fit"))?;
    Ok((fraction_at(depth, k)?.entry, bound))
}

/// Every order-`depth` fraction whose closed triangle contains `p`, sorted by
/// index. Points outside the root triangle have no preimages.
pub fn preimages(p: &Point, depth: u32) -> Result<Vec<FractionId>> {
    check_depth(depth)?;
    let root = root_fraction();
    if !root.contains(p) {
        return Ok(Vec::new());
    }
    let mut frontier = vec![root];
    for _ in 0..depth {
        frontier = frontier
            .iter()
            .flat_map(|f| {
                let (a, b) = f.subdivide();
                [a, b]
            })
            .filter(|f| f.contains(p))
            .collect();
    }
    let mut ids: Vec<FractionId> = frontier.iter().map(OrientedFraction::id).collect();
    ids.sort();
    Ok(ids)
}

fn check_materialized(n: u32) -> Result<()> {
    check_depth(n)?;
    if n > MAX_MATERIALIZED_ORDER {
        return Err(domain(format!(
            "order {n} would materialize 2^{n} fractions (limit {MAX_MATERIALIZED_ORDER})"
        )));
    }
    Ok(())
}

/// All `2^n` fractions of order `n` in time order.
pub fn tiling(n: u32) -> Result<Vec<OrientedFraction>> {
    check_materialized(n)?;
    Ok(root_fraction().descendants(n))
}

/// `s(k / 2^depth)` for `k = 0..=2^depth`.
pub fn samples(depth: u32) -> Result<Vec<Point>> {
    let tiles = tiling(depth)?;
    let mut points: Vec<Point> = tiles.iter().map(|f| f.entry.clone()).collect();
    points.push(root_fraction().exit);
    Ok(points)
}

/// A plane curve parametrized by `[0,1]` that can be evaluated at dyadic times.
pub trait PlaneCurve: Sync {
    fn name(&self) -> &'static str;

    fn evaluate(&self, t: &Dyadic) -> Result<Point>;

    /// Values at `k / 2^depth` for `k = 0..=2^depth`.
    fn samples(&self, depth: u32) -> Result<Vec<Point>> {
        check_materialized(depth)?;
        (0..=(1u128 << depth))
            .map(|k| self.evaluate(&Dyadic::new(k, depth)))
            .collect()
    }
}

/// The Sierpinski-Knopp curve in canonical placement.
#[derive(Clone, Copy, Debug, Default)]
pub struct SierpinskiKnopp;

impl PlaneCurve for SierpinskiKnopp {
    fn name(&self) -> &'static str {
        "sierpinski-knopp"
    }

    fn evaluate(&self, t: &Dyadic) -> Result<Point> {
        evaluate(t)
    }

    fn samples(&self, depth: u32) -> Result<Vec<Point>> {
        samples(depth)
    }
}
