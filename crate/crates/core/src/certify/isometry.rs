//! Plane isometries with rotation by multiples of 45 degrees, evaluated
//! exactly in `Z[1/2][sqrt 2]`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::curve::Point;
use crate::error::{Error, Result};
use crate::exact::Dyadic;

/// `rational + irrational * sqrt(2)` with dyadic parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surd {
    pub rational: Dyadic,
    pub sqrt2: Dyadic,
}

impl Surd {
    pub fn new(rational: Dyadic, sqrt2: Dyadic) -> Self {
        Surd { rational, sqrt2 }
    }

    pub fn zero() -> Self {
        Surd::from(Dyadic::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero()
    }

    /// Exact sign of `a + b sqrt 2`.
    pub fn signum(&self) -> Ordering {
        let a = self.rational.signum();
        let b = self.sqrt2.signum();
        match (a, b) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                // Opposite signs: compare a^2 with 2 b^2.
                let a2 = self.rational.square();
                let b2 = self.sqrt2.square().mul_pow2(1);
                match a2.cmp(&b2) {
                    Ordering::Greater => a,
                    Ordering::Less => b,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64() + self.sqrt2.to_f64() * std::f64::consts::SQRT_2
    }
}

impl From<Dyadic> for Surd {
    fn from(d: Dyadic) -> Self {
        Surd::new(d, Dyadic::zero())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational.is_zero(), self.sqrt2.is_zero()) {
            (_, true) => write!(f, "{}", self.rational),
            (true, false) => write!(f, "{}*sqrt2", self.sqrt2),
            (false, false) => write!(f, "{} + {}*sqrt2", self.rational, self.sqrt2),
        }
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        Surd::new(&self.rational + &rhs.rational, &self.sqrt2 + &rhs.sqrt2)
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        Surd::new(&self.rational - &rhs.rational, &self.sqrt2 - &rhs.sqrt2)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let rational = &self.rational * &rhs.rational + (&self.sqrt2 * &rhs.sqrt2).mul_pow2(1);
        let sqrt2 = &self.rational * &rhs.sqrt2 + &self.sqrt2 * &rhs.rational;
        Surd::new(rational, sqrt2)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-&self.rational, -&self.sqrt2)
    }
}

/// A point with coordinates in `Z[1/2][sqrt 2]`.
pub type SurdPoint = [Surd; 2];

pub fn surd_dist_sq(p: &SurdPoint, q: &SurdPoint) -> Surd {
    let dx = &p[0] - &q[0];
    let dy = &p[1] - &q[1];
    &(&dx * &dx) + &(&dy * &dy)
}

fn lift(p: &Point) -> SurdPoint {
    [Surd::from(p.x.clone()), Surd::from(p.y.clone())]
}

/// `cos` and `sin` of `k * 45` degrees.
fn cos_sin(eighths: u8) -> (Surd, Surd) {
    let half_root = || Surd::new(Dyadic::zero(), Dyadic::new(1, 1));
    let table = |k: u8| -> Surd {
        match k % 8 {
            0 => Surd::from(Dyadic::one()),
            1 | 7 => half_root(),
            2 | 6 => Surd::zero(),
            3 | 5 => -&half_root(),
            _ => Surd::from(-Dyadic::one()),
        }
    };
    // sin(x) = cos(x - 90deg)
    (table(eighths), table((eighths + 6) % 8))
}

/// `x -> R(45 * rotation_eighths) * F * x + translation`, where `F` is the
/// reflection `(x, y) -> (x, -y)` when `reflected` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isometry {
    pub rotation_eighths: u8,
    pub reflected: bool,
    pub determinant: i8,
    pub linear: [[Surd; 2]; 2],
    pub translation: SurdPoint,
}

impl Isometry {
    pub fn new(rotation_eighths: u8, reflected: bool, translation: SurdPoint) -> Self {
        let rotation_eighths = rotation_eighths % 8;
        let (c, s) = cos_sin(rotation_eighths);
        let linear = if reflected {
            // R * diag(1, -1)
            [[c.clone(), s.clone()], [s, -&c]]
        } else {
            [[c.clone(), -&s], [s, c]]
        };
        Isometry {
            rotation_eighths,
            reflected,
            determinant: if reflected { -1 } else { 1 },
            linear,
            translation,
        }
    }

    pub fn identity() -> Self {
        Isometry::new(0, false, [Surd::zero(), Surd::zero()])
    }

    /// An isometry with a dyadic translation.
    pub fn dyadic(rotation_eighths: u8, reflected: bool, translation: &Point) -> Self {
        Isometry::new(rotation_eighths, reflected, lift(translation))
    }

    fn apply_linear(&self, p: &SurdPoint) -> SurdPoint {
        let m = &self.linear;
        [
            &(&m[0][0] * &p[0]) + &(&m[0][1] * &p[1]),
            &(&m[1][0] * &p[0]) + &(&m[1][1] * &p[1]),
        ]
    }

    pub fn apply_surd(&self, p: &SurdPoint) -> SurdPoint {
        let l = self.apply_linear(p);
        [&l[0] + &self.translation[0], &l[1] + &self.translation[1]]
    }

    pub fn apply(&self, p: &Point) -> SurdPoint {
        self.apply_surd(&lift(p))
    }

    /// The image, when it is dyadic.
    pub fn apply_exact(&self, p: &Point) -> Option<Point> {
        let [x, y] = self.apply(p);
        (x.is_rational() && y.is_rational()).then(|| Point::new(x.rational, y.rational))
    }

    pub fn inverse(&self) -> Isometry {
        // Orthogonal linear part: inverse is the transpose.
        let (rotation, reflected) = if self.reflected {
            (self.rotation_eighths, true)
        } else {
            ((8 - self.rotation_eighths) % 8, false)
        };
        let mut inv = Isometry::new(rotation, reflected, [Surd::zero(), Surd::zero()]);
        let t = inv.apply_linear(&self.translation);
        inv.translation = [-&t[0], -&t[1]];
        inv
    }

    pub fn compose(&self, then: &Isometry) -> Isometry {
        // then(self(x)): linear part L2 L1, translation L2 t1 + t2.
        let probe = |iso: &Isometry| -> (u8, bool) { (iso.rotation_eighths, iso.reflected) };
        let (r1, f1) = probe(self);
        let (r2, f2) = probe(then);
        // F R(a) = R(-a) F.
        let (rotation, reflected) = if f2 { ((r2 + 8 - r1) % 8, !f1) } else { ((r1 + r2) % 8, f1) };
        let mut out = Isometry::new(rotation, reflected, [Surd::zero(), Surd::zero()]);
        let t = then.apply_linear(&self.translation);
        out.translation = [&t[0] + &then.translation[0], &t[1] + &then.translation[1]];
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Isometry::identity()
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("identity");
        }
        write!(
            f,
            "x -> R({} deg){} x + ({}, {})",
            45 * u32::from(self.rotation_eighths),
            if self.reflected { " * reflect_x" } else { "" },
            self.translation[0],
            self.translation[1]
        )
    }
}

/// Canonical images of the anchors at `t = 0, 1/2, 1`.
pub(crate) fn canonical_anchors() -> [Point; 3] {
    [Point::from_ints(0, 0), Point::from_ints(1, 1), Point::from_ints(2, 0)]
}

/// The isometry among the 16 candidates that carries `anchors` closest to
/// the canonical ones, provided both remaining anchors land within `tol`
/// (squared distance). The first anchor is matched exactly by construction.
pub(crate) fn fit_anchors(anchors: &[Point; 3], tol: &Dyadic) -> Result<Isometry> {
    let targets = canonical_anchors().map(|p| lift(&p));
    let tol = Surd::from(tol.clone());
    let mut best: Option<(Surd, Isometry)> = None;
    for reflected in [false, true] {
        for rotation in 0..8u8 {
            let mut iso = Isometry::new(rotation, reflected, [Surd::zero(), Surd::zero()]);
            let a = iso.apply(&anchors[0]);
            iso.translation = [-&a[0], -&a[1]];
            let eb = surd_dist_sq(&iso.apply(&anchors[1]), &targets[1]);
            let ec = surd_dist_sq(&iso.apply(&anchors[2]), &targets[2]);
            let err = if (&eb - &ec).signum() == Ordering::Less { ec } else { eb };
            if (&err - &tol).signum() == Ordering::Greater {
                continue;
            }
            let improves = match &best {
                None => true,
                Some((e, _)) => (&err - e).signum() == Ordering::Less,
            };
            if improves {
                best = Some((err, iso));
            }
        }
    }
    best.map(|(_, iso)| iso).ok_or_else(|| {
        Error::NoIsometry(format!(
            "anchors {}, {}, {} are not congruent to (0,0), (1,1), (2,0) under a 45-degree-grid isometry",
            anchors[0], anchors[1], anchors[2]
        ))
    })
}
