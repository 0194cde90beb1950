//! Baseline curves for locality comparisons.
//!
//! The Hilbert curve here fills the unit square, enters at `(0,0)` and leaves
//! at `(1,0)`. At time `t` with base-4 expansion `0.q1 q2 ... qd` the point is
//! `T_q1(T_q2(... T_qd((0,0))))`, where the four maps place scaled copies in
//! the lower-left (transposed), upper-left, upper-right and lower-right
//! (anti-transposed) quadrants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::{PlaneCurve, Point};
use crate::error::{domain, Error, Result};
use crate::exact::{check_depth, Dyadic};
use crate::metrics::{locality_exhaustive, LocalityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RivalCurveId {
    Hilbert,
}

impl RivalCurveId {
    pub const ALL: [RivalCurveId; 1] = [RivalCurveId::Hilbert];

    pub fn curve(self) -> &'static dyn PlaneCurve {
        match self {
            RivalCurveId::Hilbert => &Hilbert,
        }
    }
}

impl fmt::Display for RivalCurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.curve().name())
    }
}

impl FromStr for RivalCurveId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hilbert" => Ok(RivalCurveId::Hilbert),
            other => Err(Error::Parse(format!("unknown rival curve {other:?}"))),
        }
    }
}

/// `(A, b)` with `T_q(p) = (A p + b) / 2`.
const HILBERT_MAPS: [([[i64; 2]; 2], [i64; 2]); 4] = [
    ([[0, 1], [1, 0]], [0, 0]),
    ([[1, 0], [0, 1]], [0, 1]),
    ([[1, 0], [0, 1]], [1, 1]),
    ([[0, -1], [-1, 0]], [2, 1]),
];

/// Base-4 digits of `k` (most significant first), `d` of them.
fn digits(k: u128, d: u32) -> impl Iterator<Item = usize> {
    (0..d).rev().map(move |i| ((k >> (2 * i)) & 3) as usize)
}

/// Entry point of cell `k` of order `d`, scaled by `2^d`.
fn hilbert_entry_scaled(k: u128, d: u32) -> [i128; 2] {
    // Apply the innermost map first: P_{j+1} = A P_j + 2^j b.
    let mut p = [0i128, 0i128];
    let ds: Vec<usize> = digits(k, d).collect();
    for (j, &q) in ds.iter().rev().enumerate() {
        let (a, b) = HILBERT_MAPS[q];
        let scale = 1i128 << j;
        p = [
            i128::from(a[0][0]) * p[0] + i128::from(a[0][1]) * p[1] + scale * i128::from(b[0]),
            i128::from(a[1][0]) * p[0] + i128::from(a[1][1]) * p[1] + scale * i128::from(b[1]),
        ];
    }
    p
}

/// Integer coordinates `(ix, iy)` of the lower-left corner of the order-`d`
/// cell visited `k`-th.
pub fn hilbert_cell(k: u128, d: u32) -> [i128; 2] {
    // The cell is the image of the unit square; take the minimum corner.
    let mut lo = [i128::MAX, i128::MAX];
    for corner in [[0, 0], [1, 0], [0, 1], [1, 1]] {
        let mut p: [i128; 2] = corner;
        let ds: Vec<usize> = digits(k, d).collect();
        for (j, &q) in ds.iter().rev().enumerate() {
            let (a, b) = HILBERT_MAPS[q];
            let scale = 1i128 << j;
            p = [
                i128::from(a[0][0]) * p[0] + i128::from(a[0][1]) * p[1] + scale * i128::from(b[0]),
                i128::from(a[1][0]) * p[0] + i128::from(a[1][1]) * p[1] + scale * i128::from(b[1]),
            ];
        }
        lo = [lo[0].min(p[0]), lo[1].min(p[1])];
    }
    lo
}

/// Exact Hilbert curve point at a dyadic time.
pub fn hilbert_evaluate(t: &Dyadic) -> Result<Point> {
    if t.is_negative() || *t > Dyadic::one() {
        return Err(domain(format!("time {t} is outside [0,1]")));
    }
    if *t == Dyadic::one() {
        return Ok(Point::from_ints(1, 0));
    }
    check_depth(t.exponent())?;
    let d = t.exponent().div_ceil(2);
    if d > 62 {
        return Err(Error::Overflow(format!("base-4 depth {d} exceeds 62")));
    }
    let k: u128 = t
        .scaled_numerator(2 * d)
        .and_then(|n| n.try_into().ok())
        .ok_or_else(|| domain(format!("time {t} has an unrepresentable index")))?;
    let [x, y] = hilbert_entry_scaled(k, d);
    Ok(Point::new(Dyadic::new(x, d), Dyadic::new(y, d)))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Hilbert;

impl PlaneCurve for Hilbert {
    fn name(&self) -> &'static str {
        "hilbert"
    }

    fn evaluate(&self, t: &Dyadic) -> Result<Point> {
        hilbert_evaluate(t)
    }
}

/// Exhaustive dyadic locality of a rival curve at binary depth `depth`.
pub fn rival_locality(id: RivalCurveId, depth: u32) -> Result<LocalityReport> {
    locality_exhaustive(id.curve(), depth)
}
