//! Square-to-linear ratio (SLR) and locality.
//!
//! `slr(t1, t2) = |s(t2) - s(t1)|^2 / |t2 - t1|`. Locality is the supremum of
//! the SLR over all pairs. [`locality_dyadic`] computes the exact maximum over
//! the dyadic grid of a given depth (a lower bound that already hits 4), and
//! [`locality_certified`] computes a certified upper bound by branch and bound.

mod certified;
pub(crate) mod search;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::curve::{evaluate, fraction_at, OrientedFraction, Point, SierpinskiKnopp};
use crate::error::{domain, Result};
use crate::exact::{check_depth, Dyadic, ExactRatio};

pub use certified::{locality_certified, MAX_CERTIFIED_DEPTH};
pub use search::{locality_exhaustive, locality_exhaustive_generic};

/// A pair of times together with its exact SLR.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlrWitness {
    pub t1: Dyadic,
    pub t2: Dyadic,
    pub value: ExactRatio,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub curve: String,
    pub depth: u32,
    pub attained_max: ExactRatio,
    pub witness: SlrWitness,
    pub certified_upper: Option<ExactRatio>,
}

/// SLR of two curve points `dt` apart. Coincident images give 0.
pub fn slr_of_points(p1: &Point, p2: &Point, dt: &Dyadic) -> Result<ExactRatio> {
    ExactRatio::new(p1.dist_sq(p2), dt.abs())
}

/// Exact SLR of the Sierpinski-Knopp curve; symmetric in its arguments.
pub fn slr(t1: &Dyadic, t2: &Dyadic) -> Result<ExactRatio> {
    if t1 == t2 {
        return Err(domain(format!("slr needs distinct times, got {t1} twice")));
    }
    let p1 = evaluate(t1)?;
    let p2 = evaluate(t2)?;
    slr_of_points(&p1, &p2, &(t2 - t1))
}

/// Exact maximum SLR over all pairs of times `k / 2^depth`.
///
/// Ties go to the lexicographically smallest `(t1, t2)`.
pub fn locality_dyadic(depth: u32) -> Result<LocalityReport> {
    locality_exhaustive(&SierpinskiKnopp, depth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngleClass {
    AcuteAtMiddle,
    RightAtMiddle,
    ObtuseAtMiddle,
}

/// Everything [`angle_triple`] measures about three curve points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleReport {
    pub d12_sq: Dyadic,
    pub d23_sq: Dyadic,
    pub d13_sq: Dyadic,
    pub slr12: ExactRatio,
    pub slr23: ExactRatio,
    pub slr13: ExactRatio,
    pub angle_class: AngleClass,
    /// If the angle at the middle image is not obtuse then
    /// `max(slr12, slr23) >= slr13`, strictly when it is acute.
    pub lemma_holds: bool,
    /// If the angle is obtuse then `slr13 >= min(slr12, slr23)`.
    pub converse_holds: bool,
}

/// Classifies the angle at `s(t2)` and checks the angle inequality on the triple.
///
/// The angle at the middle image is not obtuse exactly when
/// `d13^2 <= d12^2 + d23^2`. In that case the mediant inequality gives
/// `slr13 <= (d12^2 + d23^2) / (t3 - t1) <= max(slr12, slr23)`.
pub fn angle_triple(t1: &Dyadic, t2: &Dyadic, t3: &Dyadic) -> Result<AngleReport> {
    if !(t1 < t2 && t2 < t3) {
        return Err(domain(format!("angle_triple needs t1 < t2 < t3, got {t1}, {t2}, {t3}")));
    }
    let points = [evaluate(t1)?, evaluate(t2)?, evaluate(t3)?];
    angle_report(&[t1, t2, t3], &points)
}

pub(crate) fn angle_report(times: &[&Dyadic; 3], p: &[Point; 3]) -> Result<AngleReport> {
    let d12_sq = p[0].dist_sq(&p[1]);
    let d23_sq = p[1].dist_sq(&p[2]);
    let d13_sq = p[0].dist_sq(&p[2]);
    let slr12 = ExactRatio::new(d12_sq.clone(), times[1] - times[0])?;
    let slr23 = ExactRatio::new(d23_sq.clone(), times[2] - times[1])?;
    let slr13 = ExactRatio::new(d13_sq.clone(), times[2] - times[0])?;

    let legs = &d12_sq + &d23_sq;
    let angle_class = match d13_sq.cmp(&legs) {
        Ordering::Greater => AngleClass::ObtuseAtMiddle,
        Ordering::Equal => AngleClass::RightAtMiddle,
        Ordering::Less => AngleClass::AcuteAtMiddle,
    };
    let larger = (&slr12).max(&slr23);
    let smaller = (&slr12).min(&slr23);
    let lemma_holds = match angle_class {
        AngleClass::AcuteAtMiddle => *larger > slr13,
        AngleClass::RightAtMiddle => *larger >= slr13,
        AngleClass::ObtuseAtMiddle => true,
    };
    let converse_holds = match angle_class {
        AngleClass::ObtuseAtMiddle => slr13 >= *smaller,
        _ => true,
    };
    Ok(AngleReport {
        d12_sq,
        d23_sq,
        d13_sq,
        slr12,
        slr23,
        slr13,
        angle_class,
        lemma_holds,
        converse_holds,
    })
}

/// True iff every sample lies in the closed disk whose diameter is the
/// hypotenuse of `f`: `|p - center|^2 <= 2^-n`.
pub fn disk_contains_samples(f: &OrientedFraction, samples: &[Point]) -> bool {
    let center = f.altitude_foot();
    let radius_sq = f.duration();
    samples.iter().all(|p| p.dist_sq(&center) <= radius_sq)
}

/// Checks that the curve restricted to fraction `(n, k)`, sampled at all
/// times with denominator `2^sample_depth`, stays in the disk over the
/// fraction's hypotenuse.
pub fn disk_containment(n: u32, k: u128, sample_depth: u32) -> Result<bool> {
    if sample_depth < n {
        return Err(domain(format!("sample depth {sample_depth} is below order {n}")));
    }
    check_depth(sample_depth)?;
    let f = fraction_at(n, k)?;
    let levels = sample_depth - n;
    if levels > crate::curve::MAX_MATERIALIZED_ORDER {
        return Err(domain(format!("{levels} sampling levels inside one fraction is too many")));
    }
    let tiles = f.descendants(levels);
    let mut samples: Vec<Point> = tiles.iter().map(|c| c.entry.clone()).collect();
    samples.push(f.exit.clone());
    Ok(disk_contains_samples(&f, &samples))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionMetrics {
    pub leg_sq: Dyadic,
    pub hyp_sq: Dyadic,
    /// SLR of the fraction's own endpoints.
    pub slr_across: ExactRatio,
}

pub fn fraction_metrics(f: &OrientedFraction) -> Result<FractionMetrics> {
    let leg_sq = f.entry.dist_sq(&f.right);
    let hyp_sq = f.entry.dist_sq(&f.exit);
    let slr_across = ExactRatio::new(hyp_sq.clone(), f.duration())?;
    Ok(FractionMetrics {
        leg_sq,
        hyp_sq,
        slr_across,
    })
}
