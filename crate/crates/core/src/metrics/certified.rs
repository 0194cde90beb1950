//! Certified upper bound on the locality by branch and bound.
//!
//! Any pair `t1 < t2` lies in two different halves of the smallest fraction
//! containing both, and similarity preserves the SLR, so the locality equals
//! the supremum over `t1` in `[0, 1/2]`, `t2` in `[1/2, 1]`. Write `f_j`, `g_j`
//! for the order-`j` fractions that end and start at `1/2`. The cross-half set
//! `f_1 x g_1` splits into the pieces `(f_j.0, g_j.0)`, `(f_j.0, g_j.1)`,
//! `(f_j.1, g_j.1)` over all `j >= 1` (`.0`/`.1` are the two children), each
//! with a positive time gap. The junction configuration is self-similar with
//! some period `p` (checked exactly below), so the pieces of levels `1..=p`
//! already carry the supremum.
//!
//! A piece `(F, G)` is bounded by `max |u - v|^2 / (start(G) - end(F))` over
//! vertices `u` of `F` and `v` of `G`; both images are their triangles, so
//! this dominates every pair in the piece. Pieces are refined depth first
//! down to `depth_limit`. Child bounds never exceed the parent's, so the
//! result is nonincreasing in `depth_limit`.

use std::cmp::Ordering;

use super::{LocalityReport, SlrWitness};
use crate::curve::{root_fraction, OrientedFraction, Point};
use crate::error::{domain, Error, Result};
use crate::exact::{check_depth, Dyadic, ExactRatio};

/// Beyond this depth the `u128` bound comparisons could overflow.
pub const MAX_CERTIFIED_DEPTH: u32 = 56;

/// Longest junction period that is searched for.
const MAX_PERIOD: u32 = 4;

/// `num / den` with `num` in units of `4^-scale` and `den` in `2^-time_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    fn cmp(&self, other: &Ratio) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// A fraction with integer vertex coordinates (units `2^-scale`).
#[derive(Clone, Debug)]
struct Tri {
    order: u32,
    index: u128,
    v: [[i64; 2]; 3],
}

struct Units {
    scale: u32,
    time_exp: u32,
}

impl Tri {
    fn from_fraction(f: &OrientedFraction, units: &Units) -> Result<Tri> {
        let conv = |p: &Point| -> Result<[i64; 2]> {
            let c = |d: &Dyadic| {
                d.scaled_numerator(units.scale)
                    .and_then(|n| i64::try_from(&n).ok())
                    .ok_or_else(|| Error::Overflow(format!("coordinate {d} off the search grid")))
            };
            Ok([c(&p.x)?, c(&p.y)?])
        };
        Ok(Tri {
            order: f.order,
            index: f.index,
            v: [conv(&f.entry)?, conv(&f.right)?, conv(&f.exit)?],
        })
    }

    fn children(&self) -> Result<(Tri, Tri)> {
        let [e, r, x] = self.v;
        let sx = e[0] + x[0];
        let sy = e[1] + x[1];
        if sx % 2 != 0 || sy % 2 != 0 {
            return Err(Error::Overflow("search grid too coarse for subdivision".into()));
        }
        let foot = [sx / 2, sy / 2];
        Ok((
            Tri {
                order: self.order + 1,
                index: 2 * self.index,
                v: [e, foot, r],
            },
            Tri {
                order: self.order + 1,
                index: 2 * self.index + 1,
                v: [r, foot, x],
            },
        ))
    }

    /// Times of entry, right-angle vertex and exit, in units `2^-time_exp`.
    fn times(&self, time_exp: u32) -> [u128; 3] {
        let shift = time_exp - self.order - 1;
        let start = (2 * self.index) << shift;
        [start, start + (1 << shift), start + (2 << shift)]
    }
}

fn dist_sq(a: [i64; 2], b: [i64; 2]) -> u128 {
    let dx = (a[0] - b[0]).unsigned_abs() as u128;
    let dy = (a[1] - b[1]).unsigned_abs() as u128;
    dx * dx + dy * dy
}

struct Piece {
    first: Tri,
    second: Tri,
    bound: Ratio,
}

/// Best attained pair so far: ratio, then smallest `(t1, t2)`.
#[derive(Clone, Copy)]
struct Attained {
    ratio: Ratio,
    t1: u128,
    t2: u128,
}

struct Search {
    units: Units,
    depth_limit: u32,
    attained: Attained,
    upper: Ratio,
    visited: u64,
}

impl Search {
    fn piece(&mut self, first: Tri, second: Tri) -> Piece {
        let tf = first.times(self.units.time_exp);
        let tg = second.times(self.units.time_exp);
        let mut far = 0;
        for (a, ta) in first.v.iter().zip(tf) {
            for (b, tb) in second.v.iter().zip(tg) {
                let d = dist_sq(*a, *b);
                far = far.max(d);
                let cand = Attained {
                    ratio: Ratio { num: d, den: tb - ta },
                    t1: ta,
                    t2: tb,
                };
                let better = match cand.ratio.cmp(&self.attained.ratio) {
                    Ordering::Greater => true,
                    Ordering::Equal => (cand.t1, cand.t2) < (self.attained.t1, self.attained.t2),
                    Ordering::Less => false,
                };
                if better {
                    self.attained = cand;
                    if cand.ratio.cmp(&self.upper) == Ordering::Greater {
                        self.upper = cand.ratio;
                    }
                }
            }
        }
        let gap = tg[0] - tf[2];
        Piece {
            first,
            second,
            bound: Ratio { num: far, den: gap },
        }
    }

    fn run(&mut self, initial: Vec<Piece>) -> Result<()> {
        let mut stack = initial;
        stack.sort_by(|a, b| a.bound.cmp(&b.bound));
        while let Some(p) = stack.pop() {
            self.visited += 1;
            if p.bound.cmp(&self.upper) != Ordering::Greater {
                continue;
            }
            if p.first.order >= self.depth_limit {
                self.upper = p.bound;
                continue;
            }
            let (f0, f1) = p.first.children()?;
            let (g0, g1) = p.second.children()?;
            let mut kids = [
                self.piece(f0.clone(), g0.clone()),
                self.piece(f0, g1.clone()),
                self.piece(f1.clone(), g0),
                self.piece(f1, g1),
            ];
            kids.sort_by(|a, b| a.bound.cmp(&b.bound));
            stack.extend(kids.into_iter().filter(|k| k.bound.cmp(&self.upper) == Ordering::Greater));
        }
        Ok(())
    }
}

/// The fractions of order `j` ending and starting at time `1/2`, for
/// `j = 1..=count`.
fn junction_pairs(count: u32) -> Vec<(OrientedFraction, OrientedFraction)> {
    let (mut f, mut g) = root_fraction().subdivide();
    let mut out = Vec::new();
    for _ in 0..count {
        let next_f = f.child(true);
        let next_g = g.child(false);
        out.push((f, g));
        f = next_f;
        g = next_g;
    }
    out
}

/// True if one similarity maps both oriented triangles of `a` onto those of `b`.
fn similar_junctions(
    a: &(OrientedFraction, OrientedFraction),
    b: &(OrientedFraction, OrientedFraction),
) -> bool {
    let p = &a.0.exit;
    let q = &b.0.exit;
    if a.1.entry != *p || b.1.entry != *q {
        return false;
    }
    let u = &a.0.entry - p;
    let v = &a.0.right - p;
    let u2 = &b.0.entry - q;
    let v2 = &b.0.right - q;
    let Some(inv) = u.cross(&v).recip_pow2() else {
        return false;
    };
    // [u v]^-1 = inv * [[v.y, -v.x], [-u.y, u.x]]
    let i00 = &v.y * &inv;
    let i01 = -(&v.x * &inv);
    let i10 = -(&u.y * &inv);
    let i11 = &u.x * &inv;
    let m00 = &u2.x * &i00 + &v2.x * &i10;
    let m01 = &u2.x * &i01 + &v2.x * &i11;
    let m10 = &u2.y * &i00 + &v2.y * &i10;
    let m11 = &u2.y * &i01 + &v2.y * &i11;
    let apply = |w: &Point| Point::new(&m00 * &w.x + &m01 * &w.y, &m10 * &w.x + &m11 * &w.y);
    [(&a.1.right, &b.1.right), (&a.1.exit, &b.1.exit), (&a.0.entry, &b.0.entry)]
        .iter()
        .all(|(src, dst)| apply(&(*src - p)) == (*dst - q))
}

/// Smallest `p` such that the level-`1 + p` junction is similar to level 1.
pub(crate) fn junction_period() -> Result<u32> {
    let pairs = junction_pairs(MAX_PERIOD + 1);
    (1..=MAX_PERIOD)
        .find(|&p| similar_junctions(&pairs[0], &pairs[p as usize]))
        .ok_or_else(|| domain("junction at t = 1/2 is not self-similar within the searched periods"))
}

/// Branch-and-bound upper bound on the locality, refined to `depth_limit`.
///
/// `certified_upper` is exact and sound; `attained_max` is the best SLR
/// actually met at fraction vertices during the search.
pub fn locality_certified(depth_limit: u32) -> Result<LocalityReport> {
    if depth_limit < 2 {
        return Err(domain(format!("depth_limit {depth_limit} is below 2")));
    }
    check_depth(depth_limit)?;
    if depth_limit > MAX_CERTIFIED_DEPTH {
        return Err(Error::Overflow(format!(
            "certified search supports depth_limit <= {MAX_CERTIFIED_DEPTH}"
        )));
    }
    let period = junction_period()?;
    let max_order = depth_limit.max(period + 1);
    let units = Units {
        scale: max_order.div_ceil(2) + 1,
        time_exp: max_order + 1,
    };

    let mut search = Search {
        depth_limit,
        attained: Attained {
            ratio: Ratio { num: 0, den: 1 },
            t1: 0,
            t2: 1,
        },
        upper: Ratio { num: 0, den: 1 },
        visited: 0,
        units,
    };
    let mut initial = Vec::new();
    for (f, g) in junction_pairs(period) {
        let (f0, f1) = f.subdivide();
        let (g0, g1) = g.subdivide();
        let f0 = Tri::from_fraction(&f0, &search.units)?;
        let f1 = Tri::from_fraction(&f1, &search.units)?;
        let g0 = Tri::from_fraction(&g0, &search.units)?;
        let g1 = Tri::from_fraction(&g1, &search.units)?;
        initial.push(search.piece(f0.clone(), g0));
        initial.push(search.piece(f0, g1.clone()));
        initial.push(search.piece(f1, g1));
    }
    search.run(initial)?;

    let to_exact = |r: Ratio| {
        ExactRatio::new(
            Dyadic::new(r.num, 2 * search.units.scale),
            Dyadic::new(r.den, search.units.time_exp),
        )
    };
    let attained_max = to_exact(search.attained.ratio)?;
    let certified_upper = to_exact(search.upper)?;
    let t1 = Dyadic::new(search.attained.t1, search.units.time_exp);
    let t2 = Dyadic::new(search.attained.t2, search.units.time_exp);
    Ok(LocalityReport {
        curve: "sierpinski-knopp".to_string(),
        depth: depth_limit,
        witness: SlrWitness {
            t1,
            t2,
            value: attained_max.clone(),
        },
        attained_max,
        certified_upper: Some(certified_upper),
    })
}
