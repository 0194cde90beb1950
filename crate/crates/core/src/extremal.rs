//! Grid search for the largest triangle with `c^2 <= 4` and `a^2 + b^2 <= 4`.
//!
//! This is the one floating-point module: the question is a continuous
//! optimization and the search only corroborates that the optimum is the
//! right isosceles triangle `(sqrt 2, sqrt 2, 2)` of area 1. Feasibility and
//! the argmax are decided on integer grid indices, so only the reported area
//! is rounded.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Side lengths sorted so that `a <= b <= c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleSides {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TriangleSides {
    /// Sorts the sides and checks the triangle inequality (degenerate
    /// triangles are allowed).
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let mut s = [x, y, z];
        if s.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(domain(format!("side lengths {s:?} must be finite and nonnegative")));
        }
        s.sort_by(f64::total_cmp);
        let [a, b, c] = s;
        if a + b < c * (1.0 - 1e-12) {
            return Err(domain(format!("sides {a}, {b}, {c} violate the triangle inequality")));
        }
        Ok(TriangleSides { a, b, c })
    }
}

/// Area by Kahan's stable form of Heron's formula.
pub fn heron_area(t: &TriangleSides) -> Result<f64> {
    let t = TriangleSides::new(t.a, t.b, t.c)?;
    let (x, y, z) = (t.c, t.b, t.a);
    let p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
    Ok(0.25 * p.max(0.0).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub max_area: f64,
    pub argmax: TriangleSides,
    pub resolution: u32,
}

/// `16 * area^2` in grid units, exact for resolutions up to a few thousand.
fn heron16(a: u64, b: u64, c: u64) -> u64 {
    (a + b + c) * (b + c - a) * (a + c - b) * (a + b - c)
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Candidate {
    heron16: u64,
    sides: (u64, u64, u64),
}

impl Candidate {
    /// Larger area wins; ties go to the lexicographically smaller sides.
    fn better(self, other: Candidate) -> Candidate {
        match self.heron16.cmp(&other.heron16) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                if self.sides <= other.sides {
                    self
                } else {
                    other
                }
            }
        }
    }
}

/// Searches all `a <= b <= c` on the grid `{0, 2/r, ..., 2}` with
/// `a^2 + b^2 <= 4` and `c <= min(2, a + b)`.
///
/// The candidates for `c` run over every grid value in `[b, min(2, a + b)]`;
/// the clipped sum `min(2, a + b)` and `c = 2` are grid values themselves.
pub fn treug_search(resolution: u32) -> Result<ExtremalResult> {
    if resolution < 2 {
        return Err(domain(format!("resolution {resolution} is below 2")));
    }
    if resolution > 20_000 {
        return Err(domain(format!("resolution {resolution} is above 20000")));
    }
    let r = u64::from(resolution);
    let best = (0..=r)
        .into_par_iter()
        .filter_map(|ia| {
            let mut best: Option<Candidate> = None;
            for ib in ia..=r {
                if ia * ia + ib * ib > r * r {
                    break;
                }
                for ic in ib..=r.min(ia + ib) {
                    let cand = Candidate {
                        heron16: heron16(ia, ib, ic),
                        sides: (ia, ib, ic),
                    };
                    best = Some(best.map_or(cand, |b| b.better(cand)));
                }
            }
            best
        })
        .reduce_with(Candidate::better)
        .expect("the zero triangle is always feasible");

    let step = 2.0 / f64::from(resolution);
    let (ia, ib, ic) = best.sides;
    Ok(ExtremalResult {
        max_area: 0.25 * (best.heron16 as f64).sqrt() * step * step,
        argmax: TriangleSides {
            a: ia as f64 * step,
            b: ib as f64 * step,
            c: ic as f64 * step,
        },
        resolution,
    })
}
