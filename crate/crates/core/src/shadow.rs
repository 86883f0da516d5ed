//! Horocycle shadows on the real line, the overlap predicate, excision
//! intervals, bi-infinite shadow chains, and the exact certificates behind
//! the chain-overlap lemmas.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mobius::{mul_raw, Class, Mobius};
use crate::scalar::Scalar;

/// The shadow of the `a`-horocycle anchored at `alpha/gamma`: the closed
/// interval of radius `1/(a gamma^2)` centered at the anchor.
#[derive(Clone, Debug, Serialize)]
pub struct Shadow {
    pub center: Scalar,
    pub radius: Scalar,
    pub gamma: Scalar,
}

impl Shadow {
    pub fn from_anchor(alpha: &Scalar, gamma: &Scalar, a: &Scalar) -> Result<Shadow> {
        if gamma.is_zero() {
            return Err(Error::AnchoredAtInfinity);
        }
        let g = gamma.abs();
        let center = alpha.div(gamma)?;
        let radius = a.mul(&g).mul(&g).recip()?;
        Ok(Shadow {
            center,
            radius,
            gamma: g,
        })
    }

    pub fn lo(&self) -> Scalar {
        self.center.sub(&self.radius)
    }

    pub fn hi(&self) -> Scalar {
        self.center.add(&self.radius)
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.lo().le(x) && x.le(&self.hi())
    }
}

/// Shadow of `v(infinity)` for the `a`-horocycle at that parabolic point.
pub fn shadow_of(v: &Mobius, a: &Scalar) -> Result<Shadow> {
    Shadow::from_anchor(v.alpha(), v.gamma(), a)
}

/// Strict overlap test for two shadows, ordering the pair internally:
/// for centers `p < q`, true iff `p + r_p > q - r_q`. Identical centers
/// count as overlapping.
pub fn overlaps(s1: &Shadow, s2: &Shadow) -> bool {
    let (left, right) = if s1.center.le(&s2.center) {
        (s1, s2)
    } else {
        (s2, s1)
    };
    if left.center.cmp_total(&right.center) == std::cmp::Ordering::Equal {
        return true;
    }
    left.hi().gt(&right.lo())
}

/// The open interval around `alpha/gamma` of width `w_a(gamma) =
/// a - sqrt(a^2 - 4/gamma^2)`, equal to the union of the two shadow chains.
#[derive(Clone, Debug, Serialize)]
pub struct ExcisionInterval {
    pub center: Scalar,
    pub half_width: Scalar,
    /// The anchoring gamma of the source elliptic.
    pub gamma: Scalar,
    /// The order-two elliptic whose chains fill the interval.
    pub source: Mobius,
}

impl ExcisionInterval {
    pub fn lo(&self) -> Scalar {
        self.center.sub(&self.half_width)
    }

    pub fn hi(&self) -> Scalar {
        self.center.add(&self.half_width)
    }

    pub fn width(&self) -> Scalar {
        self.half_width.mul(&Scalar::from_i64(2))
    }
}

/// Excision width `w_a(gamma)` computed in the cancellation-free form
/// `(4/gamma^2) / (a + sqrt(a^2 - 4/gamma^2))`.
pub fn excision_width(gamma: &Scalar, a: &Scalar) -> Result<Scalar> {
    Ok(excision_half_width(gamma, a)?.mul(&Scalar::from_i64(2)))
}

fn excision_half_width(gamma: &Scalar, a: &Scalar) -> Result<Scalar> {
    let two = Scalar::from_i64(2);
    let inv_g2 = gamma.mul(gamma).recip()?;
    let quarter = a.mul(a).div(&Scalar::from_i64(4))?;
    let r2 = quarter.sub(&inv_g2);
    if r2.is_negative() || r2.is_zero() {
        return Err(Error::NotHyperbolic);
    }
    let r = r2.sqrt()?;
    inv_g2.div(&a.div(&two)?.add(&r))
}

/// Builds `I_A` for an order-two elliptic `A`; requires `A S^-a` hyperbolic,
/// i.e. `a |gamma| > 2`.
pub fn excision_interval(elliptic: &Mobius, a: &Scalar) -> Result<ExcisionInterval> {
    if !elliptic.trace().approx_eq(&Scalar::zero()) {
        return Err(Error::NotElliptic);
    }
    let m = elliptic.mul(&Mobius::translation(a).inv());
    if m.classify() != Class::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let center = elliptic.alpha().div(elliptic.gamma())?;
    let half_width = excision_half_width(elliptic.gamma(), a)?;
    Ok(ExcisionInterval {
        center,
        half_width,
        gamma: elliptic.gamma().clone(),
        source: elliptic.clone(),
    })
}

/// Which of the two parabolic chains of `A` to follow: the orbit of
/// `N = A S^a` walks left from the anchor, the orbit of `M = A S^-a` right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainDirection {
    Left,
    Right,
}

fn chain_generator(elliptic: &Mobius, a: &Scalar, dir: ChainDirection) -> Result<[Scalar; 4]> {
    if !elliptic.trace().approx_eq(&Scalar::zero()) {
        return Err(Error::NotElliptic);
    }
    let s = match dir {
        ChainDirection::Left => Mobius::translation(a),
        ChainDirection::Right => Mobius::translation(a).inv(),
    };
    let w = elliptic.mul(&s);
    if w.classify() != Class::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    // Literal SL2 product, no sign canonicalization: the certificates are
    // identities in the entries of actual powers.
    Ok(mul_raw(&elliptic.raw(), &s.raw()))
}

/// Shadows of `W^k(infinity)`, `k = 1..=kmax`, for `W` the chain generator.
pub fn shadow_chain(
    elliptic: &Mobius,
    a: &Scalar,
    dir: ChainDirection,
    kmax: u32,
) -> Result<Vec<Shadow>> {
    let w = chain_generator(elliptic, a, dir)?;
    let mut out = Vec::with_capacity(kmax as usize);
    let mut pw = w.clone();
    for _ in 1..=kmax {
        out.push(Shadow::from_anchor(&pw[0], &pw[2], a)?);
        pw = mul_raw(&pw, &w);
    }
    Ok(out)
}

/// Both sides of the two chain-overlap identities, from literal powers
/// `W^k`, `W^(k+1)`:
///
/// * `gamma_{k+1}^2 + gamma_k^2 - a gamma |gamma_k gamma_{k+1}| = gamma^2`,
/// * `alpha_{k+1} gamma_k - gamma_{k+1} alpha_k = -gamma`.
///
/// For the left chain the product `gamma_k gamma_{k+1}` is already positive;
/// for the right chain it alternates in sign, and the magnitude restores the
/// ordered-pair form of the overlap condition.
#[derive(Clone, Debug, Serialize)]
pub struct OverlapCertificate {
    pub gamma_identity_lhs: Scalar,
    pub gamma_identity_rhs: Scalar,
    pub cross_identity_lhs: Scalar,
    pub cross_identity_rhs: Scalar,
}

impl OverlapCertificate {
    pub fn holds_exactly(&self) -> bool {
        self.gamma_identity_lhs
            .sub(&self.gamma_identity_rhs)
            .is_zero()
            && self
                .cross_identity_lhs
                .sub(&self.cross_identity_rhs)
                .is_zero()
    }
}

pub fn overlap_certificate(
    elliptic: &Mobius,
    a: &Scalar,
    k: u32,
    dir: ChainDirection,
) -> Result<OverlapCertificate> {
    if k == 0 {
        return Err(Error::InvalidInput("certificate needs k >= 1".into()));
    }
    let w = chain_generator(elliptic, a, dir)?;
    let mut pk = w.clone();
    for _ in 1..k {
        pk = mul_raw(&pk, &w);
    }
    let pk1 = mul_raw(&pk, &w);
    let g = elliptic.gamma();
    let (ak, gk) = (&pk[0], &pk[2]);
    let (ak1, gk1) = (&pk1[0], &pk1[2]);
    let gamma_identity_lhs = gk1
        .mul(gk1)
        .add(&gk.mul(gk))
        .sub(&a.mul(g).mul(&gk.mul(gk1).abs()));
    let cross_identity_lhs = ak1.mul(gk).sub(&gk1.mul(ak));
    Ok(OverlapCertificate {
        gamma_identity_lhs,
        gamma_identity_rhs: g.mul(g),
        cross_identity_lhs,
        cross_identity_rhs: g.neg(),
    })
}
