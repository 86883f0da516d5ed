//! Determinant-one 2x2 matrices acting on the upper half-plane, with the
//! projective sign convention `gamma > 0`, or `gamma = 0` and `alpha > 0`.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Trace classification of a Mobius transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// A point of the closed upper half-plane, boundary reals and infinity
/// included. The imaginary part of an interior point is its height.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Interior { x: Scalar, y: Scalar },
    Boundary(Scalar),
    Infinity,
}

impl Point {
    pub fn interior(x: Scalar, y: Scalar) -> Point {
        debug_assert!(y.is_positive());
        Point::Interior { x, y }
    }

    /// Height of an interior point.
    pub fn height(&self) -> Option<&Scalar> {
        match self {
            Point::Interior { y, .. } => Some(y),
            _ => None,
        }
    }

    pub fn translated(&self, t: &Scalar) -> Point {
        match self {
            Point::Interior { x, y } => Point::Interior {
                x: x.add(t),
                y: y.clone(),
            },
            Point::Boundary(x) => Point::Boundary(x.add(t)),
            Point::Infinity => Point::Infinity,
        }
    }
}

/// A sign-canonicalized determinant-one matrix.
#[derive(Clone, Debug)]
pub struct Mobius {
    alpha: Scalar,
    beta: Scalar,
    gamma: Scalar,
    delta: Scalar,
}

impl Mobius {
    /// Builds a matrix, checking `det = 1` (exactly in exact mode, within
    /// tolerance otherwise) and canonicalizing the projective sign.
    pub fn new(alpha: Scalar, beta: Scalar, gamma: Scalar, delta: Scalar) -> Result<Mobius> {
        let det = alpha.mul(&delta).sub(&beta.mul(&gamma));
        if !det.approx_eq(&Scalar::one()) {
            return Err(Error::InvalidInput(format!(
                "determinant {} is not 1",
                det.to_wire()
            )));
        }
        Ok(Self::from_raw([alpha, beta, gamma, delta]))
    }

    /// Canonicalizes a raw entry array without a determinant check.
    pub(crate) fn from_raw(m: [Scalar; 4]) -> Mobius {
        let [alpha, beta, gamma, delta] = m;
        let flip = gamma.is_negative() || (gamma.is_zero() && alpha.is_negative());
        if flip {
            Mobius {
                alpha: alpha.neg(),
                beta: beta.neg(),
                gamma: gamma.neg(),
                delta: delta.neg(),
            }
        } else {
            Mobius {
                alpha,
                beta,
                gamma,
                delta,
            }
        }
    }

    pub fn identity() -> Mobius {
        Mobius::from_raw([Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one()])
    }

    /// The translation `z -> z + t`.
    pub fn translation(t: &Scalar) -> Mobius {
        Mobius::from_raw([Scalar::one(), t.clone(), Scalar::zero(), Scalar::one()])
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }
    pub fn beta(&self) -> &Scalar {
        &self.beta
    }
    pub fn gamma(&self) -> &Scalar {
        &self.gamma
    }
    pub fn delta(&self) -> &Scalar {
        &self.delta
    }

    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta]
    }

    pub(crate) fn raw(&self) -> [Scalar; 4] {
        [
            self.alpha.clone(),
            self.beta.clone(),
            self.gamma.clone(),
            self.delta.clone(),
        ]
    }

    pub fn trace(&self) -> Scalar {
        self.alpha.add(&self.delta)
    }

    pub fn det(&self) -> Scalar {
        self.alpha.mul(&self.delta).sub(&self.beta.mul(&self.gamma))
    }

    /// Classifies by |trace| against 2, within scalar tolerance.
    pub fn classify(&self) -> Class {
        let t = self.trace().abs();
        let two = Scalar::from_i64(2);
        if t.approx_eq(&two) {
            Class::Parabolic
        } else if t.lt(&two) {
            Class::Elliptic
        } else {
            Class::Hyperbolic
        }
    }

    pub fn mul(&self, rhs: &Mobius) -> Mobius {
        Mobius::from_raw(mul_raw(&self.raw(), &rhs.raw()))
    }

    pub fn inv(&self) -> Mobius {
        Mobius::from_raw([
            self.delta.clone(),
            self.beta.neg(),
            self.gamma.neg(),
            self.alpha.clone(),
        ])
    }

    /// `g * self * g^-1`.
    pub fn conjugate(&self, by: &Mobius) -> Mobius {
        by.mul(self).mul(&by.inv())
    }

    /// Projective equality within scalar tolerance (both sides canonical).
    pub fn approx_eq(&self, rhs: &Mobius) -> bool {
        self.entries()
            .iter()
            .zip(rhs.entries())
            .all(|(a, b)| a.approx_eq(b))
    }

    /// Largest entrywise deviation from `rhs`.
    pub fn residual(&self, rhs: &Mobius) -> Scalar {
        self.entries()
            .iter()
            .zip(rhs.entries())
            .map(|(a, b)| a.sub(b).abs())
            .fold(Scalar::zero(), |m, d| m.max_of(&d))
    }

    /// The fractional-linear action on points of the closed half-plane.
    pub fn apply(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => {
                if self.gamma.is_zero() {
                    Point::Infinity
                } else {
                    Point::Boundary(self.alpha.div(&self.gamma).expect("gamma nonzero"))
                }
            }
            Point::Boundary(x) => {
                let den = self.gamma.mul(x).add(&self.delta);
                if den.is_zero() {
                    Point::Infinity
                } else {
                    let num = self.alpha.mul(x).add(&self.beta);
                    Point::Boundary(num.div(&den).expect("nonzero denominator"))
                }
            }
            Point::Interior { x, y } => {
                // (alpha w + beta)/(gamma w + delta) for w = x + iy, via
                // multiplication by the conjugate of the denominator.
                let nre = self.alpha.mul(x).add(&self.beta);
                let nim = self.alpha.mul(y);
                let dre = self.gamma.mul(x).add(&self.delta);
                let dim = self.gamma.mul(y);
                let den = dre.mul(&dre).add(&dim.mul(&dim));
                let re = nre.mul(&dre).add(&nim.mul(&dim)).div(&den).expect("interior");
                let im = nim.mul(&dre).sub(&nre.mul(&dim)).div(&den).expect("interior");
                Point::Interior { x: re, y: im }
            }
        }
    }

    /// Fixed point of an order-two elliptic: `(alpha + i)/gamma`, of height
    /// `1/gamma`.
    pub fn fixed_point(&self) -> Result<Point> {
        if !self.trace().approx_eq(&Scalar::zero()) {
            return Err(Error::NotElliptic);
        }
        // Trace zero with gamma = 0 would force det = -alpha^2 < 0.
        let x = self.alpha.div(&self.gamma)?;
        let y = self.gamma.recip()?;
        Ok(Point::Interior { x, y })
    }
}

impl Serialize for Mobius {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(4))?;
        for e in self.entries() {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

/// Plain 2x2 product without sign canonicalization. Shadow chains and the
/// overlap certificates need literal matrix powers.
pub(crate) fn mul_raw(a: &[Scalar; 4], b: &[Scalar; 4]) -> [Scalar; 4] {
    [
        a[0].mul(&b[0]).add(&a[1].mul(&b[2])),
        a[0].mul(&b[1]).add(&a[1].mul(&b[3])),
        a[2].mul(&b[0]).add(&a[3].mul(&b[2])),
        a[2].mul(&b[1]).add(&a[3].mul(&b[3])),
    ]
}
