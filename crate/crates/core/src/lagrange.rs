//! Convergent-based estimation of the classical Lagrange value: the largest
//! `1/(q_n^2 |x - p_n/q_n|)` over a trailing window of convergents.

use num::traits::Signed;
use num::traits::Zero;
use num::{BigInt, BigRational};

use crate::cf::CfWord;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Convergents closer than `GUARD` indices to either end of the available
/// expansion are skipped: the head transients overshoot the limsup and the
/// tail indices see a truncated remainder. With all-1 words the induced
/// error at distance g is about sqrt(5) phi^(-2g), under 7e-8 for g = 18.
const GUARD: usize = 18;

/// Lower estimate of the Lagrange value from a finite expansion: the maximum
/// of `1/(q_n^2 |x - p_n/q_n|)` over the last `window` usable convergents.
pub fn estimate_from_word(word: &CfWord, window: usize) -> Result<Scalar> {
    if window < 10 {
        return Err(Error::InvalidInput("window must be at least 10".into()));
    }
    if !word.quotients.iter().all(|&q| q >= 1) {
        return Err(Error::InvalidInput(
            "estimator needs a positive word".into(),
        ));
    }
    let n_q = word.n();
    if n_q < 2 * GUARD + 2 {
        return Err(Error::InsufficientExpansion {
            needed: 2 * GUARD + 2,
            got: n_q,
        });
    }
    let convergents = word.convergents();
    let (p_end, q_end) = convergents.last().expect("nonempty");
    // Usable convergent indices, inclusive.
    let hi = n_q - 1 - GUARD;
    let lo = GUARD.max(hi.saturating_sub(window - 1));
    let mut best: Option<BigRational> = None;
    for (p_n, q_n) in &convergents[lo..=hi] {
        // 1/(q_n^2 |x - p_n/q_n|) = q_N / (q_n |p_N q_n - p_n q_N|).
        let cross = (p_end * q_n - p_n * q_end).abs();
        let est = BigRational::new(q_end.clone(), q_n * cross);
        best = Some(match best {
            Some(b) if b >= est => b,
            _ => est,
        });
    }
    Ok(Scalar::Exact(best.expect("window nonempty")))
}

/// Estimator for a scalar input. Exact rationals are rejected (their
/// expansion terminates); floats are expanded as far as their precision
/// supports, cutting off once `q_n` reaches the rounding radius.
pub fn estimate_from_scalar(x: &Scalar, window: usize) -> Result<Scalar> {
    match x {
        Scalar::Exact(_) => Err(Error::RationalInput),
        Scalar::Float(_) => {
            let p = x.precision().unwrap_or(crate::scalar::DEFAULT_PRECISION);
            let word = expand_float(x, p)?;
            let est = estimate_from_word(&word, window)?;
            Ok(est.to_float(p))
        }
    }
}

/// Continued fraction of a float's exact value, truncated where the
/// quotients would start encoding rounding noise (q_n above 2^((p-4)/2)).
fn expand_float(x: &Scalar, p: usize) -> Result<CfWord> {
    let r = match x {
        Scalar::Float(f) => {
            crate::scalar::bigfloat_to_rational(f).ok_or(Error::InvalidInput(
                "non-finite float input".into(),
            ))?
        }
        Scalar::Exact(r) => r.clone(),
    };
    let q_cap = BigInt::from(1) << ((p.saturating_sub(4)) / 2);
    let mut quotients = Vec::new();
    let mut v = r;
    let a0_big = v.floor().to_integer();
    let a0 = i64::try_from(a0_big.clone())
        .map_err(|_| Error::InvalidInput("integer part too large".into()))?;
    v -= BigRational::from_integer(a0_big);
    let (mut q_prev, mut q_n) = (BigInt::from(0), BigInt::from(1));
    loop {
        if v.is_zero() {
            // The expansion terminated: the input was genuinely rational at
            // this precision.
            return Err(Error::RationalInput);
        }
        v = v.recip();
        let a_big = v.floor().to_integer();
        let a = i64::try_from(a_big.clone())
            .map_err(|_| Error::InvalidInput("partial quotient overflow".into()))?;
        v -= BigRational::from_integer(a_big);
        let q_next = BigInt::from(a) * &q_n + &q_prev;
        if q_next > q_cap {
            break;
        }
        quotients.push(a);
        q_prev = std::mem::replace(&mut q_n, q_next);
    }
    Ok(CfWord::new(a0, quotients))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_word_gives_sqrt5() {
        // [1; 1 x 39]: the golden-ratio word. Reference sqrt(5).
        let w = CfWord::new(1, vec![1; 39]);
        let est = estimate_from_word(&w, 40).unwrap();
        let sqrt5 = 2.2360679774997896964091736687747_f64;
        assert!((est.to_f64() - sqrt5).abs() < 1e-6, "est = {}", est.to_f64());
        // Longer word and window, same answer.
        let w = CfWord::new(1, vec![1; 100]);
        let est = estimate_from_word(&w, 60).unwrap();
        assert!((est.to_f64() - sqrt5).abs() < 1e-6);
    }

    #[test]
    fn all_twos_word_gives_sqrt8() {
        let w = CfWord::new(2, vec![2; 60]);
        let est = estimate_from_word(&w, 40).unwrap();
        let sqrt8 = 2.8284271247461900976033774484194_f64;
        assert!((est.to_f64() - sqrt8).abs() < 1e-6);
    }

    #[test]
    fn rational_scalar_rejected() {
        let x = Scalar::from_ratio(5, 12);
        assert_eq!(estimate_from_scalar(&x, 40).unwrap_err(), Error::RationalInput);
    }

    #[test]
    fn short_word_rejected() {
        let w = CfWord::new(1, vec![1; 20]);
        assert!(matches!(
            estimate_from_word(&w, 40).unwrap_err(),
            Error::InsufficientExpansion { .. }
        ));
    }

    #[test]
    fn float_quadratic_surd_estimates() {
        // The golden ratio (1 + sqrt 5)/2 = [1; 1, 1, ...] attains the
        // spectrum bottom sqrt(5).
        let phi = Scalar::from_i64(5)
            .sqrt()
            .unwrap()
            .add(&Scalar::one())
            .div(&Scalar::from_i64(2))
            .unwrap();
        let est = estimate_from_scalar(&phi, 60).unwrap();
        assert!((est.to_f64() - 2.2360679774997896).abs() < 1e-6);
    }

    #[test]
    fn window_too_small_rejected() {
        let w = CfWord::new(1, vec![1; 60]);
        assert!(matches!(
            estimate_from_word(&w, 9).unwrap_err(),
            Error::InvalidInput(_)
        ));
    }
}
