//! Successor maps `sigma_m(p/q) = p/q + 1/(m q^2)`, `tau_m = p/q - 1/(m q^2)`,
//! closed-form descendants, and dribble endpoints with a certified tail bound.

use num::traits::{One, Signed};
use num::{BigInt, BigRational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::shadow::Shadow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Left,
    Right,
}

fn step(r: &BigRational, m: i64, dir: Direction) -> BigRational {
    let q = r.denom();
    let inc = BigRational::new(BigInt::one(), BigInt::from(m) * q * q);
    match dir {
        Direction::Right => r + inc,
        Direction::Left => r - inc,
    }
}

/// `p/q + 1/(m q^2)`; the result `(m p q + 1)/(m q^2)` is already reduced.
pub fn sigma(r: &BigRational, m: i64) -> BigRational {
    step(r, m, Direction::Right)
}

/// `p/q - 1/(m q^2)`.
pub fn tau(r: &BigRational, m: i64) -> BigRational {
    step(r, m, Direction::Left)
}

/// Closed form of the k-fold iterate: `p/q +- m * sum_{n=1..k} (m q)^(-2^n)`.
pub fn descendant(r: &BigRational, m: i64, k: u32, dir: Direction) -> Result<BigRational> {
    if k < 1 {
        return Err(Error::InvalidInput("descendant needs k >= 1".into()));
    }
    let mq = BigInt::from(m) * r.denom();
    let mut sum = BigRational::from_integer(0.into());
    for n in 1..=k {
        sum += BigRational::new(BigInt::one(), mq.pow(2u32.pow(n)));
    }
    sum *= BigRational::from_integer(BigInt::from(m));
    Ok(match dir {
        Direction::Right => r + sum,
        Direction::Left => r - sum,
    })
}

/// Shadow of the `m`-horocycle at the k-th descendant.
pub fn descendant_shadow(r: &BigRational, m: i64, k: u32, dir: Direction) -> Result<Shadow> {
    let d = if k == 0 {
        r.clone()
    } else {
        descendant(r, m, k, dir)?
    };
    Shadow::from_anchor(
        &Scalar::from_rational(BigRational::from_integer(d.numer().clone())),
        &Scalar::from_rational(BigRational::from_integer(d.denom().clone())),
        &Scalar::from_i64(m),
    )
}

/// The open interval swept by the shadows of `p/q` and all of its
/// descendants, with endpoints `p/q +- m sum_k (m q)^(-2^k)` computed to a
/// requested precision under a rigorous geometric tail bound.
#[derive(Clone, Debug, Serialize)]
pub struct Dribble {
    pub p: BigInt,
    pub q: BigInt,
    pub m: i64,
    pub right_endpoint: Scalar,
    pub left_endpoint: Scalar,
    /// Terms kept in the doubly-exponential series.
    pub k_terms: u32,
    /// The neglected tail is below `2^(tail_bound_exponent)`.
    pub tail_bound_exponent: i64,
}

/// Endpoint computation: the series is summed exactly in the rationals until
/// the tail bound `2 m (m q)^(-2^(k+1))` drops below `2^-(precision + 8)`,
/// then rounded to `precision` bits.
pub fn dribble_endpoints(r: &BigRational, m: i64, precision: usize) -> Result<Dribble> {
    if m < 1 {
        return Err(Error::InvalidInput("dribble needs m >= 1".into()));
    }
    let mq = BigRational::from_integer(BigInt::from(m) * r.denom());
    if mq.abs() <= BigRational::one() {
        return Err(Error::InvalidInput(
            "m q must exceed 1 for a convergent dribble series".into(),
        ));
    }
    // bits(mq) lower-bounds log2(mq); tail after k terms is below
    // 2 m (m q)^(-2^(k+1)).
    let log2_mq = (mq.to_integer().bits() - 1).max(1) as i64;
    let target = precision as i64 + 8;
    let mut k = 1u32;
    while 2i64.pow(k + 1).saturating_mul(log2_mq) < target + 2 + (64 - m.leading_zeros()) as i64 {
        k += 1;
    }
    let sum = descendant(r, m, k, Direction::Right)? - r;
    let alpha = r + &sum;
    let beta = r - &sum;
    let tail_bound_exponent = 2 + (64 - m.leading_zeros()) as i64 - 2i64.pow(k + 1) * log2_mq;
    Ok(Dribble {
        p: r.numer().clone(),
        q: r.denom().clone(),
        m,
        right_endpoint: Scalar::float_from_rational(&alpha, precision),
        left_endpoint: Scalar::float_from_rational(&beta, precision),
        k_terms: k,
        tail_bound_exponent,
    })
}
