//! Slope arithmetic on the projective rational line.
//!
//! A slope is a primitive vector `a*mu + b*lon` stored as `(mer, lon) = (a, b)`
//! with value `lon/mer`; `mer = 0` is the infinite slope. Unimodular matrices
//! act on column vectors `(a, b)^T`. The bypass rule follows the Farey
//! tessellation: the circular order realizing the "counterclockwise" arc is
//! the decreasing-slope sweep (equivalently, increasing angle of the
//! numerator/denominator vector normalized to the closed upper half-plane).
//! Every arc test is a sign test on a 2x2 integer determinant.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cfrac::convergents;
use crate::error::{Error, Result};

/// A point of the projective rational line in canonical form:
/// `mer > 0` with `gcd(mer, |lon|) = 1`, or `(0, 1)` for the infinite slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    mer: i64,
    lon: i64,
}

impl Slope {
    /// Builds the slope with value `lon/mer`, reducing and sign-normalizing.
    pub fn new(mer: i64, lon: i64) -> Result<Self> {
        if mer == 0 && lon == 0 {
            return Err(Error::usage("slope vector (0,0)"));
        }
        let g = gcd64(mer, lon);
        let (mut mer, mut lon) = (mer / g, lon / g);
        if mer < 0 || (mer == 0 && lon < 0) {
            mer = -mer;
            lon = -lon;
        }
        Ok(Slope { mer, lon })
    }

    pub fn infinity() -> Self {
        Slope { mer: 0, lon: 1 }
    }

    /// The slope with finite value `num/den` (den > 0 after normalization).
    pub fn from_value(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::usage("finite slope with zero denominator"));
        }
        Slope::new(den, num)
    }

    pub fn integer(n: i64) -> Self {
        Slope { mer: 1, lon: n }
    }

    pub fn mer(&self) -> i64 {
        self.mer
    }

    pub fn lon(&self) -> i64 {
        self.lon
    }

    pub fn is_infinite(&self) -> bool {
        self.mer == 0
    }
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mer == 0 {
            write!(f, "inf")
        } else if self.mer == 1 {
            write!(f, "{}", self.lon)
        } else {
            write!(f, "{}/{}", self.lon, self.mer)
        }
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "-inf" {
            return Ok(Slope::infinity());
        }
        let parse = |t: &str| {
            t.parse::<i64>()
                .map_err(|_| Error::usage(format!("invalid slope component {t:?}")))
        };
        match s.split_once('/') {
            Some((num, den)) => Slope::new(parse(den)?, parse(num)?),
            None => Ok(Slope::integer(parse(s)?)),
        }
    }
}

/// 2x2 integer matrix with determinant +-1, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMat2 {
    entries: [[i64; 2]; 2],
}

impl IntMat2 {
    pub fn new(entries: [[i64; 2]; 2]) -> Result<Self> {
        let m = IntMat2 { entries };
        if m.det().abs() != 1 {
            return Err(Error::usage(format!(
                "matrix {entries:?} has determinant {}, expected +-1",
                m.det()
            )));
        }
        Ok(m)
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.entries
    }

    pub fn det(&self) -> i64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn mul(&self, other: &IntMat2) -> IntMat2 {
        let a = &self.entries;
        let b = &other.entries;
        IntMat2 {
            entries: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    /// Exact inverse; integral because the determinant is +-1.
    pub fn inverse(&self) -> IntMat2 {
        let d = self.det();
        let e = &self.entries;
        IntMat2 {
            entries: [[d * e[1][1], -d * e[0][1]], [-d * e[1][0], d * e[0][0]]],
        }
    }
}

/// Projective action of a unimodular matrix on a slope vector.
pub fn act(m: &IntMat2, s: Slope) -> Result<Slope> {
    let e = m.entries;
    let mer = e[0][0] as i128 * s.mer as i128 + e[0][1] as i128 * s.lon as i128;
    let lon = e[1][0] as i128 * s.mer as i128 + e[1][1] as i128 * s.lon as i128;
    let mer = i64::try_from(mer).map_err(|_| Error::Overflow)?;
    let lon = i64::try_from(lon).map_err(|_| Error::Overflow)?;
    Slope::new(mer, lon)
}

/// Whether two slopes are joined by an edge of the Farey tessellation.
pub fn is_farey_edge(s1: Slope, s2: Slope) -> bool {
    let d = s1.mer as i128 * s2.lon as i128 - s2.mer as i128 * s1.lon as i128;
    d.abs() == 1
}

/// The gluing data of the decomposition: `B = [[p, q], [-p', -q']]` from the
/// cycle tuple, `A = [[-p, q], [p', -q']]`, and `g = [[r, r'], [-s, -s']]`
/// from the arm tuple.
pub fn build_matrices(a: &[i64], z: &[i64]) -> Result<(IntMat2, IntMat2, IntMat2)> {
    let ca = convergents(a)?;
    let cz = convergents(z)?;
    let f = |x: &BigInt| i64::try_from(x).map_err(|_| Error::Overflow);
    let (p, q, pp, qp) = (f(&ca.p)?, f(&ca.q)?, f(&ca.p_prev)?, f(&ca.q_prev)?);
    let (r, s, rp, sp) = (f(&cz.p)?, f(&cz.q)?, f(&cz.p_prev)?, f(&cz.q_prev)?);
    let b = IntMat2::new([[p, q], [-pp, -qp]])?;
    let a_mat = IntMat2::new([[-p, q], [pp, -qp]])?;
    let g = IntMat2::new([[r, rp], [-s, -sp]])?;
    Ok((b, a_mat, g))
}

/// Which side of the torus the bypass is attached to. `Front` reads the arc
/// from the ruling slope to the dividing slope; `Back` exchanges the ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Front,
    Back,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "front" => Ok(Side::Front),
            "back" => Ok(Side::Back),
            other => Err(Error::usage(format!("invalid side {other:?}"))),
        }
    }
}

type Vec2 = (BigInt, BigInt);

fn vec2(s: Slope) -> Vec2 {
    (BigInt::from(s.mer), BigInt::from(s.lon))
}

fn det_big(a: &Vec2, b: &Vec2) -> BigInt {
    &a.0 * &b.1 - &b.0 * &a.1
}

fn canon_big(v: Vec2) -> Vec2 {
    if v.0.is_negative() || (v.0.is_zero() && v.1.is_negative()) {
        (-v.0, -v.1)
    } else {
        v
    }
}

/// Closed-arc membership for the sweep from `from` to `to` in the circular
/// order (the decreasing-slope direction, wrapping through infinity).
/// `from != to` is assumed.
fn in_arc(x: &Vec2, from: &Vec2, to: &Vec2) -> bool {
    let after_from = !det_big(x, from).is_negative();
    let before_to = !det_big(to, x).is_negative();
    if det_big(to, from).is_positive() {
        after_from && before_to
    } else {
        after_from || before_to
    }
}

/// Bypass attachment on a torus carrying a single dividing-curve pair of
/// slope `s`, along a ruling of slope `r`: the new dividing slope is the
/// point of the arc closest to `r` carrying a Farey edge to `s`. The arc is
/// half-open at its starting point, so the front side walks `(r, s]` and the
/// back side walks `(s, r]`; only the back side can land on `r` itself.
pub fn bypass_slope(s: Slope, r: Slope, side: Side) -> Result<Slope> {
    if s == r {
        return Err(Error::usage(
            "bypass needs ruling slope distinct from dividing slope",
        ));
    }
    let us = vec2(s);
    let ur = vec2(r);
    let (from, to) = match side {
        Side::Front => (&ur, &us),
        Side::Back => (&us, &ur),
    };

    // One Farey neighbor of s via the extended Euclidean algorithm; the full
    // neighbor family is w + k*us for k in Z, reduced so the search window
    // stays small.
    let egcd = us.1.extended_gcd(&us.0);
    debug_assert!(egcd.gcd.is_one());
    let mut w: Vec2 = (egcd.x, -egcd.y);
    let t = if !us.0.is_zero() {
        w.0.div_floor(&us.0)
    } else {
        w.1.div_floor(&us.1)
    };
    w = (w.0 - &t * &us.0, w.1 - &t * &us.1);
    debug_assert!((det_big(&w, &us)).is_one());

    let neighbor = |k: &BigInt| -> Vec2 { canon_big((&w.0 + k * &us.0, &w.1 + k * &us.1)) };
    let member = |k: &BigInt| -> bool {
        let v = neighbor(k);
        v != *from && in_arc(&v, from, to)
    };

    // Membership is true on exactly one half-line of k; every change point is
    // within this window.
    let window: BigInt = det_big(&w, &ur).abs() + w.0.abs() + w.1.abs() + 2;
    let (mut lo, mut hi) = (-window.clone(), window.clone());
    let at_hi = member(&hi);
    if at_hi == member(&lo) {
        return Err(Error::Internal(
            "bypass arc search found no boundary".into(),
        ));
    }
    // Bisect to the boundary; the boundary neighbor is the arc's candidate
    // farthest from s, hence closest to r.
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        if member(&mid) == at_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let boundary = if at_hi { hi } else { lo };
    let v = neighbor(&boundary);
    let mer = i64::try_from(&v.0).map_err(|_| Error::Overflow)?;
    let lon = i64::try_from(&v.1).map_err(|_| Error::Overflow)?;
    let result = Slope::new(mer, lon)?;
    debug_assert!(is_farey_edge(result, s));
    Ok(result)
}

/// A torus dividing set: `pairs` parallel curve pairs of a common slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividingSet {
    pub slope: Slope,
    pub pairs: u32,
}

impl DividingSet {
    pub fn new(slope: Slope, pairs: u32) -> Result<Self> {
        if pairs == 0 {
            return Err(Error::usage("dividing set needs at least one curve pair"));
        }
        Ok(DividingSet { slope, pairs })
    }
}

/// Bypass attachment on a general dividing set: with more than one pair the
/// count drops and the slope is unchanged; with one pair the slope moves by
/// the Farey rule.
pub fn bypass_on_dividing_set(d: &DividingSet, r: Slope, side: Side) -> Result<DividingSet> {
    if d.slope == r {
        return Err(Error::usage(
            "bypass needs ruling slope distinct from dividing slope",
        ));
    }
    if d.pairs > 1 {
        Ok(DividingSet {
            slope: d.slope,
            pairs: d.pairs - 1,
        })
    } else {
        Ok(DividingSet {
            slope: bypass_slope(d.slope, r, side)?,
            pairs: 1,
        })
    }
}

/// Slope of the torus produced by rounding the edges of two boundary tori of
/// slopes b/a and t/a (equal denominators) joined by two vertical annuli,
/// each dividing set carrying k pairs: `(kb + kt + 1) / (ka)`.
pub fn edge_round_slope(k: u32, s0: Slope, s1: Slope) -> Result<Slope> {
    if k == 0 {
        return Err(Error::usage("edge rounding needs k >= 1"));
    }
    if s0.mer != s1.mer || s0.mer == 0 {
        return Err(Error::ImbalancedAnnulus(s0.to_string(), s1.to_string()));
    }
    let k = k as i128;
    let lon = k * s0.lon as i128 + k * s1.lon as i128 + 1;
    let mer = k * s0.mer as i128;
    Slope::new(
        i64::try_from(mer).map_err(|_| Error::Overflow)?,
        i64::try_from(lon).map_err(|_| Error::Overflow)?,
    )
}

fn slope_from_big(mer: BigInt, lon: BigInt) -> Result<Slope> {
    if mer.is_zero() && lon.is_zero() {
        return Err(Error::Internal("zero slope vector".into()));
    }
    let g = mer.gcd(&lon);
    let (mer, lon) = (mer / &g, lon / g);
    Slope::new(
        i64::try_from(&mer).map_err(|_| Error::Overflow)?,
        i64::try_from(&lon).map_err(|_| Error::Overflow)?,
    )
}

/// The dividing slopes on the three boundary tori of the complement of the
/// singular fiber, for a cycle tuple `a`, arm tuple `z`, splitting slope
/// `t0 = b/a`, and fiber twisting number `-m`:
/// `b/a`, `(bp + ap')/(bq + aq')`, `-(ms - s')/(mr - r')`.
pub fn slope_triple(a: &[i64], z: &[i64], t0: Slope, m: i64) -> Result<(Slope, Slope, Slope)> {
    if m < 1 {
        return Err(Error::usage("twisting parameter m must be >= 1"));
    }
    let ca = convergents(a)?;
    let cz = convergents(z)?;
    let b = BigInt::from(t0.lon);
    let av = BigInt::from(t0.mer);
    let s1 = slope_from_big(&b * &ca.q + &av * &ca.q_prev, &b * &ca.p + &av * &ca.p_prev)?;
    let m = BigInt::from(m);
    let s2 = slope_from_big(&m * &cz.p - &cz.p_prev, -(&m * &cz.q - &cz.q_prev))?;
    Ok((t0, s1, s2))
}

/// The normalized dividing slopes `(-1, (p-p')/(q-q'), -1)` reached by the
/// thinning procedure; defined for cycles of length > 1 with `a_1 >= 3`.
pub fn normal_form_targets(a: &[i64]) -> Result<(Slope, Slope, Slope)> {
    if a.len() < 2 {
        return Err(Error::usage("cycle tuple must have length >= 2"));
    }
    if a[0] < 3 {
        return Err(Error::usage("first cycle entry must be >= 3"));
    }
    let c = convergents(a)?;
    let mid = slope_from_big(&c.q - &c.q_prev, &c.p - &c.p_prev)?;
    let minus_one = Slope::integer(-1);
    Ok((minus_one, mid, minus_one))
}
