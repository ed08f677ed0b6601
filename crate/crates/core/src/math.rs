//! Index arithmetic, binomials and ordered subset enumeration.
//!
//! Everything here is 1-indexed where the scheduling constructions are
//! 1-indexed: [`mod1`] folds a positive integer into `1..=c`, and the
//! `l`-th subset returned by [`ksubsets`] lives at position `l - 1`.

use num_rational::Ratio;
use thiserror::Error;

/// Exact rational used for every DoF quantity.
pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    #[error("mod1 needs positive operands, got x={x}, c={c}")]
    NonPositive { x: i64, c: i64 },
    #[error("cannot draw {k}-subsets from a ground set of {n} elements")]
    SubsetTooLarge { n: usize, k: usize },
    #[error("ground list has a repeated element")]
    RepeatedElement,
}

/// Wrap-around modulus with range `1..=c`: `mod1(c, c) == c` and
/// `mod1(d + c, c) == mod1(d, c)`.
pub fn mod1(x: i64, c: i64) -> Result<i64, MathError> {
    if x <= 0 || c <= 0 {
        return Err(MathError::NonPositive { x, c });
    }
    Ok((x - 1) % c + 1)
}

/// Unchecked [`mod1`] for callers that already hold valid operands.
#[inline]
pub(crate) fn wrap1(x: usize, c: usize) -> usize {
    debug_assert!(x >= 1 && c >= 1);
    (x - 1) % c + 1
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All `k`-subsets of `ground`, lexicographic in ground-list positions.
///
/// The order is deterministic, so `ksubsets(g, k)[l - 1]` is a well-defined
/// "l-th k-tuple".
pub fn ksubsets<T: Copy + PartialEq>(ground: &[T], k: usize) -> Result<Vec<Vec<T>>, MathError> {
    let n = ground.len();
    if k > n {
        return Err(MathError::SubsetTooLarge { n, k });
    }
    for (i, a) in ground.iter().enumerate() {
        if ground[i + 1..].contains(a) {
            return Err(MathError::RepeatedElement);
        }
    }
    let mut out = Vec::with_capacity(binomial(n as i64, k as i64) as usize);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| ground[i]).collect());
        // rightmost position that can still advance
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            break;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(out)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `ceil(r)` for a non-negative rational.
pub(crate) fn ceil_nonneg(r: Rational) -> i128 {
    let (n, d) = (*r.numer(), *r.denom());
    (n + d - 1) / d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mod1_examples() {
        assert_eq!(mod1(4, 4), Ok(4));
        assert_eq!(mod1(1, 5), Ok(1));
        assert_eq!(mod1(6, 4), Ok(2));
        assert!(mod1(0, 4).is_err());
        assert!(mod1(3, 0).is_err());
        assert!(mod1(-2, 3).is_err());
    }

    #[test]
    fn ksubsets_examples() {
        assert_eq!(ksubsets(&[2, 3], 2).unwrap(), vec![vec![2, 3]]);
        assert_eq!(
            ksubsets(&[1, 2, 3], 2).unwrap(),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(ksubsets(&[1, 2, 3, 4, 5], 2).unwrap().len(), 10);
        assert_eq!(ksubsets::<u8>(&[], 0).unwrap(), vec![Vec::<u8>::new()]);
        assert!(ksubsets(&[1, 2], 3).is_err());
        assert_eq!(ksubsets(&[1, 1], 1), Err(MathError::RepeatedElement));
    }

    #[test]
    fn ksubsets_follows_ground_order_not_value_order() {
        assert_eq!(
            ksubsets(&[5, 1, 3], 2).unwrap(),
            vec![vec![5, 1], vec![5, 3], vec![1, 3]]
        );
    }

    /// Brute-force oracle: every bitmask with `k` bits set, ordered by the
    /// reversed-bit reading that matches lexicographic position order.
    fn bitmask_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
            .collect();
        all.sort();
        all
    }

    #[test]
    fn ksubsets_exhaustive_against_bitmask_oracle() {
        for n in 0..=12usize {
            let ground: Vec<usize> = (0..n).collect();
            for k in 0..=n {
                let got = ksubsets(&ground, k).unwrap();
                assert_eq!(got.len() as u128, binomial(n as i64, k as i64));
                assert_eq!(got, bitmask_subsets(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(3, -1), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }

    #[test]
    fn lemma_sum_of_shifted_binomials() {
        for p in 1..=12i64 {
            for q in 1..=p {
                let lhs: u128 = (1..=p - q + 1).map(|r| binomial(p - r, q - 1)).sum();
                assert_eq!(lhs, binomial(p, q), "P={p} Q={q}");
            }
        }
    }

    #[test]
    fn ceil_of_rationals() {
        assert_eq!(ceil_nonneg(Rational::new(6, 1)), 6);
        assert_eq!(ceil_nonneg(Rational::new(13, 2)), 7);
        assert_eq!(ceil_nonneg(Rational::new(0, 3)), 0);
    }

    proptest! {
        #[test]
        fn mod1_range_and_period(x in 1i64..10_000, c in 1i64..500) {
            let v = mod1(x, c).unwrap();
            prop_assert!((1..=c).contains(&v));
            prop_assert_eq!(mod1(x + c, c).unwrap(), v);
            prop_assert_eq!(wrap1(x as usize, c as usize) as i64, v);
        }

        #[test]
        fn rational_sum_is_reduced(a in -1000i128..1000, b in 1i128..1000, c in -1000i128..1000, d in 1i128..1000) {
            let s = Rational::new(a, b) + Rational::new(c, d);
            let g = num_integer_gcd(*s.numer(), *s.denom());
            prop_assert_eq!(g, 1);
            prop_assert!(*s.denom() > 0);
            prop_assert_eq!(s * Rational::from_integer(b * d), Rational::from_integer(a * d + c * b));
        }
    }

    fn num_integer_gcd(a: i128, b: i128) -> i128 {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
}
