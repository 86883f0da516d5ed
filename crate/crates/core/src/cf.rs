//! Finite continued fraction words, Euclidean expansion, exact evaluation,
//! and the folding operation `p/q + (-1)^n/(m q^2)`.
//!
//! Canonical words have all partial quotients >= 1 and last quotient > 1.
//! Folding produces words with a possible interior zero (when the last
//! quotient is 1) or a trailing 1; canonicalization applies the rewrites
//! `[..., x, 0, y, ...] -> [..., x + y, ...]` and `[..., x, 1] -> [..., x + 1]`.
//! Signed words appear only as evaluation-ready intermediates.

use num::traits::{One, Zero};
use num::{BigInt, BigRational};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite continued fraction `[a0; a1, ..., an]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfWord {
    pub a0: i64,
    pub quotients: Vec<i64>,
    canonical: bool,
}

impl CfWord {
    /// Builds a word and records whether it is in canonical form.
    pub fn new(a0: i64, quotients: Vec<i64>) -> CfWord {
        let canonical = is_canonical(&quotients);
        CfWord {
            a0,
            quotients,
            canonical,
        }
    }

    /// Builds a word that must be canonical.
    pub fn canonical(a0: i64, quotients: Vec<i64>) -> Result<CfWord> {
        if !is_canonical(&quotients) {
            return Err(Error::InvalidInput(format!(
                "not a canonical word: {quotients:?}"
            )));
        }
        Ok(CfWord {
            a0,
            quotients,
            canonical: true,
        })
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Number of partial quotients after `a0`.
    pub fn n(&self) -> usize {
        self.quotients.len()
    }

    /// Exact value by right-to-left 2x2 integer matrix products; works for
    /// signed and zero quotients.
    pub fn eval(&self) -> Result<BigRational> {
        let (p, q) = self.convergent_pair()?;
        if q.is_zero() {
            return Err(Error::DivergentWord);
        }
        Ok(BigRational::new(p, q))
    }

    fn convergent_pair(&self) -> Result<(BigInt, BigInt)> {
        let mut p_prev = BigInt::one();
        let mut p = BigInt::from(self.a0);
        let mut q_prev = BigInt::zero();
        let mut q = BigInt::one();
        for &a in &self.quotients {
            let ab = BigInt::from(a);
            let p_next = &ab * &p + &p_prev;
            let q_next = &ab * &q + &q_prev;
            if q_next.is_zero() && q.is_zero() {
                return Err(Error::DivergentWord);
            }
            p_prev = p;
            p = p_next;
            q_prev = q;
            q = q_next;
        }
        Ok((p, q))
    }

    /// Convergents `p_k/q_k` for `k = 0..=n` (index 0 is `a0/1`). Only
    /// meaningful for words with positive quotients.
    pub fn convergents(&self) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::with_capacity(self.n() + 1);
        let mut p_prev = BigInt::one();
        let mut p = BigInt::from(self.a0);
        let mut q_prev = BigInt::zero();
        let mut q = BigInt::one();
        out.push((p.clone(), q.clone()));
        for &a in &self.quotients {
            let ab = BigInt::from(a);
            let p_next = &ab * &p + &p_prev;
            let q_next = &ab * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            out.push((p.clone(), q.clone()));
        }
        out
    }

    /// Canonical Euclidean expansion of a rational (last quotient > 1).
    pub fn expand(r: &BigRational) -> Result<CfWord> {
        let mut quotients = Vec::new();
        let mut x = r.clone();
        let a0_big = x.floor().to_integer();
        let a0 = int_to_i64(&a0_big)?;
        x -= BigRational::from_integer(a0_big);
        while !x.is_zero() {
            x = x.recip();
            let a_big = x.floor().to_integer();
            quotients.push(int_to_i64(&a_big)?);
            x -= BigRational::from_integer(a_big);
        }
        debug_assert!(is_canonical(&quotients));
        Ok(CfWord::new(a0, quotients))
    }

    /// Zero-collapse and trailing-1 merge for nonnegative raw words.
    pub fn canonicalize(&self) -> Result<CfWord> {
        if self.quotients.iter().any(|&q| q < 0) {
            // Signed forms are evaluation-only; re-expand the value.
            return CfWord::expand(&self.eval()?);
        }
        let mut qs = self.quotients.clone();
        loop {
            let Some(pos) = qs.iter().position(|&q| q == 0) else {
                break;
            };
            if pos == 0 || pos + 1 >= qs.len() {
                // Leading or trailing zero: fall back to re-expansion.
                return CfWord::expand(&self.eval()?);
            }
            let merged = qs[pos - 1] + qs[pos + 1];
            qs.splice(pos - 1..=pos + 1, [merged]);
        }
        if qs.len() > 1 && *qs.last().unwrap() == 1 {
            qs.pop();
            *qs.last_mut().unwrap() += 1;
        } else if qs.len() == 1 && qs[0] == 1 {
            return Ok(CfWord::new(self.a0 + 1, Vec::new()));
        }
        let w = CfWord::new(self.a0, qs);
        debug_assert_eq!(w.eval().unwrap(), self.eval().unwrap());
        Ok(w)
    }
}

impl Serialize for CfWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.n() + 1))?;
        seq.serialize_element(&self.a0)?;
        for q in &self.quotients {
            seq.serialize_element(q)?;
        }
        seq.end()
    }
}

fn is_canonical(quotients: &[i64]) -> bool {
    quotients.iter().all(|&q| q >= 1) && quotients.last().map_or(true, |&q| q > 1)
}

fn int_to_i64(b: &BigInt) -> Result<i64> {
    i64::try_from(b.clone()).map_err(|_| {
        Error::InvalidInput(format!("partial quotient {b} does not fit a machine word"))
    })
}

pub fn reverse(word: &[i64]) -> Vec<i64> {
    word.iter().rev().copied().collect()
}

pub fn is_palindrome(word: &[i64]) -> bool {
    word.iter().eq(word.iter().rev())
}

/// The folded word `[a0; a1..an, m-1, 1, an - 1, a(n-1), ..., a1]`, with
/// value `p/q + (-1)^n/(m q^2)`, canonicalized. Accepts any word with
/// quotients >= 1 and n >= 1 (the case machinery folds trailing-1 forms);
/// the sign of the increment follows the parity of the given form.
pub fn fold(w: &CfWord, m: i64) -> Result<CfWord> {
    if m < 2 {
        return Err(Error::CaseUnsupported { m });
    }
    if w.n() < 1 || w.quotients.iter().any(|&q| q < 1) {
        return Err(Error::InvalidInput(
            "fold needs a positive word with n >= 1".into(),
        ));
    }
    let qs = &w.quotients;
    let n = qs.len();
    let mut out = Vec::with_capacity(2 * n + 3);
    out.extend_from_slice(qs);
    out.push(m - 1);
    out.push(1);
    out.push(qs[n - 1] - 1);
    out.extend(qs[..n - 1].iter().rev());
    let folded = CfWord::new(w.a0, out).canonicalize()?;

    #[cfg(debug_assertions)]
    {
        let v = w.eval().unwrap();
        let q = v.denom().clone();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let inc = BigRational::new(BigInt::from(sign), BigInt::from(m) * &q * &q);
        assert_eq!(folded.eval().unwrap(), v + inc);
    }
    Ok(folded)
}

/// The signed folding form `[a0; a1..an, m, -an, ..., -a1]`; evaluates to the
/// same rational as [`fold`]. Exposed for evaluation and display.
pub fn signed_fold_word(w: &CfWord, m: i64) -> CfWord {
    let qs = &w.quotients;
    let mut out = Vec::with_capacity(2 * qs.len() + 1);
    out.extend_from_slice(qs);
    out.push(m);
    out.extend(qs.iter().rev().map(|&q| -q));
    CfWord::new(w.a0, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn expansion_examples() {
        // Euclidean-algorithm oracle values.
        let w = CfWord::expand(&rat(31, 75)).unwrap();
        assert_eq!(w.a0, 0);
        assert_eq!(w.quotients, vec![2, 2, 2, 1, 1, 2]);
        assert!(w.is_canonical());

        // 5/12 in canonical form; the trailing-1 variant evaluates equally.
        let w = CfWord::expand(&rat(5, 12)).unwrap();
        assert_eq!(w.quotients, vec![2, 2, 2]);
        let alt = CfWord::new(0, vec![2, 2, 1, 1]);
        assert!(!alt.is_canonical());
        assert_eq!(alt.eval().unwrap(), rat(5, 12));
        assert_eq!(alt.canonicalize().unwrap(), w);

        let w = CfWord::expand(&rat(3, 1)).unwrap();
        assert_eq!((w.a0, w.n()), (3, 0));
        assert_eq!(w.eval().unwrap(), rat(3, 1));

        let w = CfWord::expand(&rat(-1, 2)).unwrap();
        assert_eq!((w.a0, w.quotients.clone()), (-1, vec![2]));
    }

    #[test]
    fn eval_signed_form() {
        // Matrix-product evaluation of signed words. The signed folding form
        // of 1/2 with m = 3 is [0; 2, 3, -2] and equals 5/12; flipping the
        // fold entry to -3 gives 7/12 instead.
        let w = CfWord::new(0, vec![2, 3, -2]);
        assert_eq!(w.eval().unwrap(), rat(5, 12));
        let w = CfWord::new(0, vec![2, -3, -2]);
        assert_eq!(w.eval().unwrap(), rat(7, 12));
    }

    #[test]
    fn eval_divergent() {
        // [0; 1, -1]: denominator hits zero.
        let w = CfWord::new(0, vec![1, -1]);
        assert_eq!(w.eval().unwrap_err(), Error::DivergentWord);
    }

    #[test]
    fn fold_examples() {
        // [0;2] with m=3: n=1, minus sign, 1/2 - 1/12 = 5/12 = [0;2,2,1,1]
        // before canonicalization, [0;2,2,2] after.
        let w = CfWord::canonical(0, vec![2]).unwrap();
        let f = fold(&w, 3).unwrap();
        assert_eq!(f.eval().unwrap(), rat(5, 12));
        assert_eq!(f.quotients, vec![2, 2, 2]);

        // [0;2,2] with m=3: n=2, plus sign, 2/5 + 1/75 = 31/75.
        let w = CfWord::canonical(0, vec![2, 2]).unwrap();
        let f = fold(&w, 3).unwrap();
        assert_eq!(f.quotients, vec![2, 2, 2, 1, 1, 2]);
        assert_eq!(f.eval().unwrap(), rat(31, 75));

        // Fold again: [0;2,2,2,1,1,2] -> 14-letter word, 6976/16875.
        let f2 = fold(&f, 3).unwrap();
        assert_eq!(
            f2.quotients,
            vec![2, 2, 2, 1, 1, 2, 2, 1, 1, 1, 1, 2, 2, 2]
        );
        assert_eq!(f2.eval().unwrap(), rat(6976, 16875));
    }

    #[test]
    fn fold_signed_form_agrees() {
        for (p, q, m) in [(1i64, 2i64, 3i64), (2, 5, 3), (5, 12, 4), (3, 7, 2)] {
            let w = CfWord::expand(&rat(p, q)).unwrap();
            if w.n() < 1 {
                continue;
            }
            let f = fold(&w, m).unwrap();
            let s = signed_fold_word(&w, m);
            assert_eq!(s.eval().unwrap(), f.eval().unwrap());
        }
    }

    #[test]
    fn fold_of_trailing_one_form_collapses_zero() {
        // [0; 2,2,1,1] (value 5/12, 4 quotients): folding adds with the even
        // parity of the form and the interior zero collapses.
        let w = CfWord::new(0, vec![2, 2, 1, 1]);
        let f = fold(&w, 3).unwrap();
        assert_eq!(f.eval().unwrap(), rat(5, 12) + rat(1, 3 * 144));
        assert_eq!(f.quotients, vec![2, 2, 1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn expansion_inverts_eval() {
        for (p, q) in [(31, 75), (5, 12), (7, 3), (-9, 7), (22, 7)] {
            let w = CfWord::expand(&rat(p, q)).unwrap();
            assert_eq!(w.eval().unwrap(), rat(p, q));
        }
    }
}
