//! Exhaustive maximum of the SLR over a dyadic sample grid.

use std::cmp::Ordering;

use rayon::prelude::*;

use super::{slr_of_points, LocalityReport, SlrWitness};
use crate::curve::{PlaneCurve, Point};
use crate::error::Result;
use crate::exact::{check_depth, Dyadic, ExactRatio};

/// Sample coordinates scaled by `2^exp` to integers.
pub(crate) struct Grid {
    pub coords: Vec<[i64; 2]>,
    pub exp: u32,
}

/// Largest coordinate magnitude accepted on the integer path. Squared
/// distances then stay below 2^85, and products with time gaps below 2^24
/// fit in a `u128`.
const GRID_LIMIT: i64 = 1 << 40;

impl Grid {
    pub fn new(points: &[Point]) -> Option<Grid> {
        let exp = points
            .iter()
            .flat_map(|p| [p.x.exponent(), p.y.exponent()])
            .max()
            .unwrap_or(0);
        let scale = |d: &Dyadic| -> Option<i64> {
            let v = i64::try_from(&d.scaled_numerator(exp)?).ok()?;
            (v.abs() < GRID_LIMIT).then_some(v)
        };
        let coords = points
            .iter()
            .map(|p| Some([scale(&p.x)?, scale(&p.y)?]))
            .collect::<Option<Vec<_>>>()?;
        Some(Grid { coords, exp })
    }

    pub fn dist_sq(&self, i: usize, j: usize) -> u128 {
        let [ax, ay] = self.coords[i];
        let [bx, by] = self.coords[j];
        let dx = (ax - bx).unsigned_abs() as u128;
        let dy = (ay - by).unsigned_abs() as u128;
        dx * dx + dy * dy
    }
}

/// Best pair found so far: `dist_sq / gap` in grid units.
#[derive(Clone, Copy)]
struct Best {
    dist_sq: u128,
    gap: u128,
    i: usize,
    j: usize,
}

impl Best {
    fn ratio_cmp(&self, other: &Best) -> Ordering {
        (self.dist_sq * other.gap).cmp(&(other.dist_sq * self.gap))
    }

    /// Larger ratio wins; ties go to the smaller `(i, j)`.
    fn better(self, other: Best) -> Best {
        match self.ratio_cmp(&other) {
            Ordering::Greater => self,
            Ordering::Less => other,
            Ordering::Equal => {
                if (self.i, self.j) <= (other.i, other.j) {
                    self
                } else {
                    other
                }
            }
        }
    }
}

fn check_size(depth: u32) -> Result<()> {
    check_depth(depth)?;
    if depth > 24 {
        return Err(crate::error::domain(format!(
            "exhaustive search at depth {depth} would visit about 2^{} pairs",
            2 * depth - 1
        )));
    }
    Ok(())
}

fn report(
    curve: &dyn PlaneCurve,
    depth: u32,
    points: &[Point],
    i: usize,
    j: usize,
) -> Result<LocalityReport> {
    let t1 = Dyadic::new(i as u64, depth);
    let t2 = Dyadic::new(j as u64, depth);
    let value = slr_of_points(&points[i], &points[j], &(&t2 - &t1))?;
    Ok(LocalityReport {
        curve: curve.name().to_string(),
        depth,
        attained_max: value.clone(),
        witness: SlrWitness { t1, t2, value },
        certified_upper: None,
    })
}

/// Exact maximum SLR of `curve` over all pairs of times `k / 2^depth`,
/// with the lexicographically smallest maximizing pair as witness.
///
/// Rows are searched in parallel; the reduction is a total order on
/// `(ratio, i, j)`, so the result does not depend on scheduling.
pub fn locality_exhaustive(curve: &dyn PlaneCurve, depth: u32) -> Result<LocalityReport> {
    check_size(depth)?;
    let points = curve.samples(depth)?;
    let Some(grid) = Grid::new(&points) else {
        return locality_exhaustive_generic(curve, depth);
    };
    let n = points.len();
    let best = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let mut best = Best {
                dist_sq: grid.dist_sq(i, i + 1),
                gap: 1,
                i,
                j: i + 1,
            };
            for j in i + 2..n {
                let cand = Best {
                    dist_sq: grid.dist_sq(i, j),
                    gap: (j - i) as u128,
                    i,
                    j,
                };
                if cand.ratio_cmp(&best) == Ordering::Greater {
                    best = cand;
                }
            }
            best
        })
        .reduce_with(Best::better)
        .expect("at least one pair");
    report(curve, depth, &points, best.i, best.j)
}

/// Same search carried out entirely in [`ExactRatio`] arithmetic. Used when
/// sample coordinates do not fit the integer grid, and as a second route in
/// tests.
pub fn locality_exhaustive_generic(curve: &dyn PlaneCurve, depth: u32) -> Result<LocalityReport> {
    check_size(depth)?;
    let points = curve.samples(depth)?;
    let step = Dyadic::pow2_neg(depth);
    let mut best: Option<(ExactRatio, usize, usize)> = None;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let gap = &step * &Dyadic::from((j - i) as u64);
            let value = slr_of_points(&points[i], &points[j], &gap)?;
            if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                best = Some((value, i, j));
            }
        }
    }
    let (_, i, j) = best.expect("at least one pair");
    report(curve, depth, &points, i, j)
}
