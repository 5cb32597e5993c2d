//! Conversion between Chern classes and Chern characters via the Newton
//! identities on power sums of Chern roots, over any commutative ring with
//! exact rational scalars. Also provides the K-theoretic negation
//! `ch(-E) = -ch(E)`, which is how classes of virtual sheaves enter.

use crate::rational::{factorial, q, Q};

/// The minimal ring interface the conversions need. Implemented by plain
/// rationals and by the Chern-character expressions of the Hilbert-scheme
/// module.
pub trait CommRing: Clone {
    fn zero(&self) -> Self;
    fn one(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, by: &Q) -> Self;

    fn neg(&self) -> Self {
        self.scale(&-q(1))
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl CommRing for Q {
    fn zero(&self) -> Self {
        q(0)
    }
    fn one(&self) -> Self {
        q(1)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, by: &Q) -> Self {
        self * by
    }
}

/// Chern classes `c_1..c_N` from characters `ch_1..ch_N` (`ch[i-1]` is
/// `ch_i`). Newton: `j·c_j = sum_{i=1..j} (-1)^{i-1} c_{j-i} p_i` with
/// `p_i = i!·ch_i`.
pub fn chern_from_character<R: CommRing>(witness: &R, ch: &[R]) -> Vec<R> {
    let n = ch.len();
    let p: Vec<R> = ch
        .iter()
        .enumerate()
        .map(|(idx, v)| v.scale(&factorial(idx + 1)))
        .collect();
    let mut c: Vec<R> = Vec::with_capacity(n + 1);
    c.push(witness.one()); // c_0
    for j in 1..=n {
        let mut acc = witness.zero();
        for i in 1..=j {
            let term = c[j - i].mul(&p[i - 1]);
            acc = if i % 2 == 1 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        c.push(acc.scale(&(q(1) / q(j as i64))));
    }
    c.remove(0);
    c
}

/// Characters `ch_1..ch_N` from Chern classes `c_1..c_N`; the inverse
/// direction: `p_j = sum_{i=1..j-1} (-1)^{i-1} c_i p_{j-i} + (-1)^{j-1} j c_j`.
pub fn character_from_chern<R: CommRing>(witness: &R, c: &[R]) -> Vec<R> {
    let n = c.len();
    let mut p: Vec<R> = Vec::with_capacity(n);
    for j in 1..=n {
        let mut acc = c[j - 1].scale(&q(j as i64));
        if j % 2 == 0 {
            acc = acc.neg();
        }
        for i in 1..j {
            let term = c[i - 1].mul(&p[j - i - 1]);
            acc = if i % 2 == 1 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        p.push(acc);
    }
    let _ = witness;
    p.iter()
        .enumerate()
        .map(|(idx, v)| v.scale(&(q(1) / factorial(idx + 1))))
        .collect()
}

/// `ch(-E)` from `ch(E)`.
pub fn negate_character<R: CommRing>(ch: &[R]) -> Vec<R> {
    ch.iter().map(|v| v.neg()).collect()
}

/// Truncated total-class product `(1 + a_1 + ...)(1 + b_1 + ...)` keeping
/// degrees `1..=N`; inputs and output omit the degree-0 term 1.
pub fn total_class_product<R: CommRing>(witness: &R, a: &[R], b: &[R], n: usize) -> Vec<R> {
    let mut out: Vec<R> = vec![witness.zero(); n];
    for j in 1..=n {
        let mut acc = witness.zero();
        if j <= a.len() {
            acc = acc.add(&a[j - 1]);
        }
        if j <= b.len() {
            acc = acc.add(&b[j - 1]);
        }
        for i in 1..j {
            if i <= a.len() && (j - i) <= b.len() {
                acc = acc.add(&a[i - 1].mul(&b[j - i - 1]));
            }
        }
        out[j - 1] = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_ratio;
    use num::traits::Zero;

    #[test]
    fn line_bundle_like_character() {
        // ch = (x, 0, 0, ...) gives c_i = x^i / i!.
        let x = q(3);
        let ch = vec![x.clone(), q(0), q(0), q(0)];
        let c = chern_from_character(&q(0), &ch);
        assert_eq!(c[0], q(3));
        assert_eq!(c[1], q_ratio(9, 2));
        assert_eq!(c[2], q_ratio(27, 6));
        assert_eq!(c[3], q_ratio(81, 24));
    }

    #[test]
    fn rank_normalized_sheaf() {
        // ch_1 = 0, ch_2 = y gives c_1 = 0, c_2 = -y.
        let ch = vec![q(0), q(5)];
        let c = chern_from_character(&q(0), &ch);
        assert_eq!(c[0], q(0));
        assert_eq!(c[1], q(-5));
    }

    #[test]
    fn negation_on_total_class() {
        // c(E)·c(-E) = 1 after truncation.
        let ch = vec![q(1), q_ratio(1, 2), q(-2), q(0), q_ratio(3, 7)];
        let c = chern_from_character(&q(0), &ch);
        let c_neg = chern_from_character(&q(0), &negate_character(&ch));
        let prod = total_class_product(&q(0), &c, &c_neg, ch.len());
        assert!(prod.iter().all(|v| v.is_zero()));
    }
}
