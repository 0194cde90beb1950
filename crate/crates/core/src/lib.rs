//! Exact analysis of the Sierpinski-Knopp space-filling curve.
//!
//! * [`exact`]: dyadic rationals and exact ratios.
//! * [`curve`]: the curve, its fractions, evaluation and tilings.
//! * [`metrics`]: square-to-linear ratio, locality searches, angle and disk checks.
//! * [`extremal`]: grid search over triangles with bounded sides.
//! * [`certify`]: certification of sampled candidate curves.
//! * [`rivals`]: the Hilbert curve as a comparison baseline.

pub mod certify;
pub mod curve;
pub mod error;
pub mod exact;
pub mod extremal;
pub mod metrics;
pub mod rivals;

pub use curve::{OrientedFraction, PlaneCurve, Point, SierpinskiKnopp};
pub use error::{Error, Result};
pub use exact::{Dyadic, ExactRatio};
