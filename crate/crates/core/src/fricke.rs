//! Fricke triples `a^2 + b^2 + c^2 = abc`, normalized completion, and the
//! groups of signature (0; 2, 2, 2; infinity) they generate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mobius::{Mobius, Point};
use crate::scalar::Scalar;

/// A solution of `a^2 + b^2 + c^2 = abc`, with its normalization status.
#[derive(Clone, Debug, Serialize)]
pub struct FrickeTriple {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    /// True iff `2 < a <= b <= c < ab/2`, the orbit-representative region.
    pub normalized: bool,
}

impl FrickeTriple {
    pub fn new(a: Scalar, b: Scalar, c: Scalar) -> Result<FrickeTriple> {
        let residual = fricke_residual(&a, &b, &c);
        if !residual.approx_eq(&Scalar::zero()) {
            return Err(Error::InvalidTriple {
                residual: residual.to_wire(),
            });
        }
        let two = Scalar::from_i64(2);
        let half_ab = a.mul(&b).div(&two).expect("2 != 0");
        let normalized = two.lt(&a) && a.le(&b) && b.le(&c) && c.lt(&half_ab);
        Ok(FrickeTriple { a, b, c, normalized })
    }

    pub fn modular() -> FrickeTriple {
        FrickeTriple::new(Scalar::from_i64(3), Scalar::from_i64(3), Scalar::from_i64(3))
            .expect("3,3,3 satisfies the equation")
    }
}

/// `a^2 + b^2 + c^2 - abc`.
pub fn fricke_residual(a: &Scalar, b: &Scalar, c: &Scalar) -> Scalar {
    a.mul(a)
        .add(&b.mul(b))
        .add(&c.mul(c))
        .sub(&a.mul(b).mul(c))
}

/// Solves `c^2 - abc + a^2 + b^2 = 0` for the root in `[b, ab/2)`.
///
/// Exactly one root can lie in the window (the two roots sum to `ab`), so the
/// completion is unambiguous when it exists.
pub fn fricke_complete(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    let two = Scalar::from_i64(2);
    if !two.lt(a) || !two.lt(b) || a.gt(b) {
        return Err(Error::InvalidInput(
            "completion needs 2 < a <= b".to_string(),
        ));
    }
    let ab = a.mul(b);
    let disc = ab.mul(&ab).sub(&Scalar::from_i64(4).mul(&a.mul(a).add(&b.mul(b))));
    if disc.is_negative() {
        return Err(Error::NonrealRoot);
    }
    let sq = disc.sqrt()?;
    let half_ab = ab.div(&two)?;
    for root in [ab.sub(&sq).div(&two)?, ab.add(&sq).div(&two)?] {
        // The window's closed left end c = b is attainable; float rounding
        // may land a hair below it, so test with the scalar tolerance and
        // snap the boundary case back onto b.
        let tol = root.tolerance();
        if root.ge(&b.sub(&tol)) && root.lt(&half_ab) {
            return Ok(if root.sub(b).abs().le(&tol) {
                b.clone()
            } else {
                root
            });
        }
    }
    Err(Error::NoNormalizedCompletion)
}

/// The generators and fundamental translation built from a Fricke triple.
#[derive(Clone, Debug, Serialize)]
pub struct GroupData {
    pub triple: FrickeTriple,
    pub t0: Mobius,
    pub t1: Mobius,
    pub t2: Mobius,
    pub s_a: Mobius,
}

/// Builds the three order-two generators and the translation `z -> z + a`.
///
/// The undetermined upper-right entries of `T1` and `T2` are solved from
/// trace zero plus determinant one.
pub fn build_group(triple: FrickeTriple) -> Result<GroupData> {
    let (a, b, c) = (&triple.a, &triple.b, &triple.c);
    let one = Scalar::one();

    let a_over_c = a.div(c)?;
    let t0 = Mobius::new(
        Scalar::zero(),
        a_over_c.neg(),
        c.div(a)?,
        Scalar::zero(),
    )?;

    // T1 = [[a/c, *], [b/a, -a/c]]; * = -(1 + (a/c)^2) / (b/a).
    let b_over_a = b.div(a)?;
    let t1_beta = one.add(&a_over_c.mul(&a_over_c)).neg().div(&b_over_a)?;
    let t1 = Mobius::new(a_over_c.clone(), t1_beta, b_over_a, a_over_c.neg())?;

    // T2 = [[a - b/c, *], [1, -(a - b/c)]]; * = -(1 + (a - b/c)^2).
    let d2 = a.sub(&b.div(c)?);
    let t2_beta = one.add(&d2.mul(&d2)).neg();
    let t2 = Mobius::new(d2.clone(), t2_beta, one.clone(), d2.neg())?;

    let s_a = Mobius::translation(a);
    debug_assert!(t2.mul(&t1).mul(&t0).approx_eq(&s_a));

    Ok(GroupData {
        triple,
        t0,
        t1,
        t2,
        s_a,
    })
}

impl GroupData {
    /// Largest entrywise deviation of `T2 T1 T0` from `S^a`.
    pub fn product_residual(&self) -> Scalar {
        self.t2.mul(&self.t1).mul(&self.t0).residual(&self.s_a)
    }
}

/// The fundamental hexagon `(infinity, e, f, F(e), g, a + e)` for a generator
/// triple, where `e, f, g` are the fixed points of `E, F, G`.
pub fn fundamental_hexagon(e: &Mobius, f: &Mobius, g: &Mobius, a: &Scalar) -> Result<[Point; 6]> {
    let pe = e.fixed_point()?;
    let pf = f.fixed_point()?;
    let pg = g.fixed_point()?;
    let fe = f.apply(&pe);
    let ae = pe.translated(a);
    Ok([Point::Infinity, pe, pf, fe, pg, ae])
}
