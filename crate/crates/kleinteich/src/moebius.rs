//! Conformal and anticonformal fractional-linear maps of the Riemann sphere.
//!
//! Points live in homogeneous coordinates so that infinity, cross ratios and
//! matrix action need no special cases. Maps carry a parity bit: parity
//! `Conformal` acts as z -> (az+b)/(cz+d), parity `Anticonformal` acts on the
//! conjugate, z -> (a z̄ + b)/(c z̄ + d). Matrices are normalized to
//! determinant one; all comparisons are projective (±M identified).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// |tr² − 4| threshold below which a det-1 conformal map counts as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-9;
/// Determinant magnitude below which construction is rejected.
pub const DET_TOL: f64 = 1e-12;
/// Default chordal tolerance for point equality.
pub const POINT_TOL: f64 = 1e-9;

/// A point of the Riemann sphere as a homogeneous pair; the point is u/v,
/// with v = 0 meaning infinity. (u, v) = (0, 0) is never constructed.
#[derive(Debug, Clone, Copy)]
pub struct SpherePoint {
    pub u: Complex64,
    pub v: Complex64,
}

impl SpherePoint {
    pub fn finite(z: Complex64) -> Self {
        SpherePoint { u: z, v: Complex64::new(1.0, 0.0) }
    }

    pub fn infinity() -> Self {
        SpherePoint { u: Complex64::new(1.0, 0.0), v: Complex64::new(0.0, 0.0) }
    }

    /// Rescale so the larger coordinate has unit magnitude. Keeps the
    /// homogeneous determinant tests well conditioned after long orbits.
    pub fn normalized(&self) -> Self {
        let s = self.u.norm().max(self.v.norm());
        SpherePoint { u: self.u / s, v: self.v / s }
    }

    pub fn is_infinite(&self) -> bool {
        self.v.norm() <= POINT_TOL * self.u.norm()
    }

    /// The affine value u/v, or None for infinity.
    pub fn to_complex(&self) -> Option<Complex64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.u / self.v)
        }
    }

    /// Chordal distance: |u1 v2 − v1 u2| / (‖p1‖ ‖p2‖), in [0, 1].
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        let n1 = (self.u.norm_sqr() + self.v.norm_sqr()).sqrt();
        let n2 = (other.u.norm_sqr() + other.v.norm_sqr()).sqrt();
        (self.u * other.v - self.v * other.u).norm() / (n1 * n2)
    }

    /// Equality as sphere points: u1·v2 − u2·v1 = 0 within `tol` (chordal).
    pub fn approx_eq(&self, other: &SpherePoint, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }
}

/// Orientation parity of an extended Moebius map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Conformal,
    Anticonformal,
}

impl Parity {
    pub fn compose(self, other: Parity) -> Parity {
        if self == other {
            Parity::Conformal
        } else {
            Parity::Anticonformal
        }
    }

    pub fn is_anticonformal(self) -> bool {
        self == Parity::Anticonformal
    }
}

/// Conjugacy type of an extended Moebius map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapClass {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
    Anticonformal,
}

/// A 2×2 complex matrix with determinant normalized to one, plus a parity
/// bit. Houses both Moebius and anti-Moebius maps.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedMoebius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub parity: Parity,
}

impl ExtendedMoebius {
    /// Build a map from matrix entries, scaling by a square root of
    /// 1/(ad−bc) so det = 1. Either sign branch is accepted; the projective
    /// class is what matters.
    pub fn new(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        parity: Parity,
    ) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if det.norm() <= DET_TOL * scale.powi(2).max(1.0) {
            return Err(Error::ZeroDeterminant);
        }
        let s = det.sqrt();
        Ok(ExtendedMoebius { a: a / s, b: b / s, c: c / s, d: d / s, parity })
    }

    pub fn conformal(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        Self::new(a, b, c, d, Parity::Conformal)
    }

    pub fn identity() -> Self {
        ExtendedMoebius {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
            parity: Parity::Conformal,
        }
    }

    /// z -> z + t.
    pub fn translation(t: Complex64) -> Self {
        ExtendedMoebius {
            a: Complex64::new(1.0, 0.0),
            b: t,
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
            parity: Parity::Conformal,
        }
    }

    fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    fn conj_entries(&self) -> [Complex64; 4] {
        [self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj()]
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// f ∘ g. When f is anticonformal the right factor enters conjugated:
    /// M_{f∘g} = M_f · conj(M_g).
    pub fn compose(&self, g: &ExtendedMoebius) -> ExtendedMoebius {
        let n = if self.parity.is_anticonformal() { g.conj_entries() } else { g.entries() };
        ExtendedMoebius {
            a: self.a * n[0] + self.b * n[2],
            b: self.a * n[1] + self.b * n[3],
            c: self.c * n[0] + self.d * n[2],
            d: self.c * n[1] + self.d * n[3],
            parity: self.parity.compose(g.parity),
        }
    }

    /// The inverse map. For parity −1 the matrix is conj(M)^{-1}.
    pub fn inverse(&self) -> ExtendedMoebius {
        let (a, b, c, d) = (self.d, -self.b, -self.c, self.a);
        if self.parity.is_anticonformal() {
            ExtendedMoebius {
                a: a.conj(),
                b: b.conj(),
                c: c.conj(),
                d: d.conj(),
                parity: self.parity,
            }
        } else {
            ExtendedMoebius { a, b, c, d, parity: self.parity }
        }
    }

    /// Matrix action on homogeneous coordinates, conjugating the point first
    /// when the map is anticonformal.
    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        let p = p.normalized();
        let (u, v) = if self.parity.is_anticonformal() {
            (p.u.conj(), p.v.conj())
        } else {
            (p.u, p.v)
        };
        SpherePoint { u: self.a * u + self.b * v, v: self.c * u + self.d * v }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        projectively_equal(self, &ExtendedMoebius::identity(), tol)
    }

    /// Classify by trace squared. Anticonformal maps are never classified
    /// beyond `Anticonformal`; involutions are detected by squaring instead.
    pub fn classify(&self) -> MapClass {
        if self.parity.is_anticonformal() {
            return MapClass::Anticonformal;
        }
        let t2 = self.trace() * self.trace();
        if (t2 - 4.0).norm() < PARABOLIC_TOL {
            if self.is_identity(PARABOLIC_TOL) {
                MapClass::Identity
            } else {
                MapClass::Parabolic
            }
        } else if t2.im.abs() < PARABOLIC_TOL && t2.re >= 0.0 && t2.re < 4.0 {
            MapClass::Elliptic
        } else {
            MapClass::Loxodromic
        }
    }

    /// The unique fixed point of a parabolic map: (a−d)/(2c) when c ≠ 0,
    /// otherwise infinity. The closed form avoids the cancellation the
    /// quadratic formula suffers at a double root.
    pub fn parabolic_fixed_point(&self) -> Result<SpherePoint> {
        if self.classify() != MapClass::Parabolic {
            return Err(Error::NotParabolic);
        }
        if self.c.norm() <= DET_TOL {
            Ok(SpherePoint::infinity())
        } else {
            Ok(SpherePoint::finite((self.a - self.d) / (2.0 * self.c)))
        }
    }

    /// The unique parabolic square root: flip the matrix sign so trace = +2,
    /// then (M + I)/2, which has det exactly 1.
    pub fn parabolic_sqrt(&self) -> Result<ExtendedMoebius> {
        if self.classify() != MapClass::Parabolic {
            return Err(Error::NotParabolic);
        }
        let s = if self.trace().re < 0.0 { -1.0 } else { 1.0 };
        Ok(ExtendedMoebius {
            a: (s * self.a + 1.0) / 2.0,
            b: s * self.b / 2.0,
            c: s * self.c / 2.0,
            d: (s * self.d + 1.0) / 2.0,
            parity: Parity::Conformal,
        })
    }
}

/// True iff parities match and M_f = ±M_g entrywise within `tol`.
pub fn projectively_equal(f: &ExtendedMoebius, g: &ExtendedMoebius, tol: f64) -> bool {
    if f.parity != g.parity {
        return false;
    }
    let fe = f.entries();
    let ge = g.entries();
    let plus = fe.iter().zip(ge.iter()).all(|(x, y)| (x - y).norm() <= tol);
    let minus = fe.iter().zip(ge.iter()).all(|(x, y)| (x + y).norm() <= tol);
    plus || minus
}

fn pair_det(p: &SpherePoint, q: &SpherePoint) -> Complex64 {
    p.u * q.v - p.v * q.u
}

/// Cross ratio of four sphere points, normalized so cr(∞, 0, 1, z) = z.
pub fn cross_ratio(
    p1: &SpherePoint,
    p2: &SpherePoint,
    p3: &SpherePoint,
    p4: &SpherePoint,
) -> Result<Complex64> {
    // No normalization here: the formula is scale-invariant, and keeping
    // the raw homogeneous coordinates makes cr(∞, 0, 1, z) = z exact.
    let num = pair_det(p4, p2) * pair_det(p3, p1);
    let den = pair_det(p4, p1) * pair_det(p3, p2);
    let scale2 = [p1, p2, p3, p4]
        .iter()
        .map(|p| p.u.norm_sqr() + p.v.norm_sqr())
        .product::<f64>();
    if den.norm_sqr() <= DET_TOL * DET_TOL * scale2 {
        return Err(Error::DegenerateCrossRatio);
    }
    Ok(num / den)
}
