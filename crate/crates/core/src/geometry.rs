//! Directions on the unit sphere and axis-aligned detector boxes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// A measurement direction. Always stored normalized.
///
/// Serializes as `[x, y, z]`; deserialization normalizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: UnitVector3 = UnitVector3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: UnitVector3 = UnitVector3 { x: 0.0, y: 0.0, z: 1.0 };

    /// Normalize `(x, y, z)`. Fails on the zero vector or non-finite input.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        // Scale first so tiny or huge inputs do not under/overflow in the norm.
        let scale = x.abs().max(y.abs()).max(z.abs());
        if ![x, y, z].iter().all(|c| c.is_finite()) || scale == 0.0 {
            return Err(Error::DegenerateDirection);
        }
        // Already-unit input is kept bit for bit so serialized vectors round-trip.
        let n2 = x * x + y * y + z * z;
        if (n2 - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(UnitVector3 { x, y, z });
        }
        let (sx, sy, sz) = (x / scale, y / scale, z / scale);
        let norm = (sx * sx + sy * sy + sz * sz).sqrt();
        let v = UnitVector3 {
            x: sx / norm,
            y: sy / norm,
            z: sz / norm,
        };
        debug_assert!((v.norm_squared() - 1.0).abs() <= NORM_TOL);
        Ok(v)
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    /// Direction with polar angle `theta` from +z and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        // Exactly unit up to rounding; renormalize to keep the invariant tight.
        Self::new(st * cp, st * sp, ct).expect("spherical direction is never zero")
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    fn norm_squared(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Inner product, clamped to `[-1, 1]` against rounding.
    pub fn dot(&self, other: &UnitVector3) -> f64 {
        (self.x * other.x + self.y * other.y + self.z * other.z).clamp(-1.0, 1.0)
    }

}

impl std::ops::Neg for UnitVector3 {
    type Output = UnitVector3;
    fn neg(self) -> Self {
        UnitVector3 {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl Serialize for UnitVector3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitVector3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = <[f64; 3]>::deserialize(d)?;
        UnitVector3::from_array(v).map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`UnitVector3::new`].
pub fn make_unit(x: f64, y: f64, z: f64) -> Result<UnitVector3> {
    UnitVector3::new(x, y, z)
}

pub fn dot(u: &UnitVector3, v: &UnitVector3) -> f64 {
    u.dot(v)
}

/// Axis-aligned box `[lo_0, hi_0] x [lo_1, hi_1] x [lo_2, hi_2]` with positive volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox")]
pub struct BoxRegion {
    lo: [f64; 3],
    hi: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBox {
    lo: [f64; 3],
    hi: [f64; 3],
}

impl TryFrom<RawBox> for BoxRegion {
    type Error = Error;
    fn try_from(raw: RawBox) -> Result<Self> {
        BoxRegion::new(raw.lo, raw.hi)
    }
}

impl BoxRegion {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        for i in 0..3 {
            if !lo[i].is_finite() || !hi[i].is_finite() {
                return Err(Error::InvalidRegion(format!("non-finite bound on axis {i}")));
            }
            if lo[i] >= hi[i] {
                return Err(Error::InvalidRegion(format!(
                    "axis {i}: lo {} must be below hi {}",
                    lo[i], hi[i]
                )));
            }
        }
        Ok(BoxRegion { lo, hi })
    }

    /// Cube `center +- half_width` on every axis.
    pub fn cube(center: [f64; 3], half_width: f64) -> Result<Self> {
        let lo = [0, 1, 2].map(|i| center[i] - half_width);
        let hi = [0, 1, 2].map(|i| center[i] + half_width);
        Self::new(lo, hi)
    }

    pub fn lo(&self) -> [f64; 3] {
        self.lo
    }
    pub fn hi(&self) -> [f64; 3] {
        self.hi
    }

    pub fn volume(&self) -> f64 {
        (0..3).map(|i| self.hi[i] - self.lo[i]).product()
    }

    pub fn translate(&self, l: [f64; 3]) -> BoxRegion {
        BoxRegion {
            lo: [0, 1, 2].map(|i| self.lo[i] + l[i]),
            hi: [0, 1, 2].map(|i| self.hi[i] + l[i]),
        }
    }

    /// `true` iff `inner` lies inside `self` on every axis (closed boxes).
    pub fn contains(&self, inner: &BoxRegion) -> bool {
        (0..3).all(|i| self.lo[i] <= inner.lo[i] && inner.hi[i] <= self.hi[i])
    }

    pub fn contains_point(&self, p: [f64; 3]) -> bool {
        (0..3).all(|i| self.lo[i] <= p[i] && p[i] <= self.hi[i])
    }
}

pub fn translate(r: &BoxRegion, l: [f64; 3]) -> BoxRegion {
    r.translate(l)
}

pub fn contains(outer: &BoxRegion, inner: &BoxRegion) -> bool {
    outer.contains(inner)
}
