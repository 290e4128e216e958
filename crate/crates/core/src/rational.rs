//! Exact rational scalars and small combinatorial helpers.
//!
//! All weights produced by the recursions are exact rationals; nothing in
//! this crate rounds. `Rational` is a re-export of `num::BigRational` so
//! values like `1/(2(l+1)!)` stay representable for any `l`.

pub use num::bigint::BigInt as Int;
pub use num::rational::BigRational as Rational;
use num::{One, Zero};

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> Int {
    let mut acc = Int::one();
    for k in 2..=n {
        acc *= Int::from(k);
    }
    acc
}

/// Multinomial coefficient `(sum parts)! / prod parts!`.
pub fn multinomial(parts: &[usize]) -> Int {
    let total: usize = parts.iter().sum();
    let mut num = factorial(total);
    for &p in parts {
        num /= factorial(p);
    }
    num
}

/// `2^k` as a big integer.
pub fn pow2(k: usize) -> Int {
    Int::one() << k
}

/// Advance to the next composition of a fixed total into `parts.len()`
/// nonnegative parts (colex order); returns false after the last one. Start
/// from `[total, 0, ..., 0]`.
pub fn next_composition(parts: &mut [usize]) -> bool {
    let n = parts.len();
    if n <= 1 {
        return false;
    }
    if let Some(pos) = (0..n - 1).find(|&p| parts[p] > 0) {
        let head = parts[pos];
        parts[pos] = 0;
        parts[0] = head - 1;
        parts[pos + 1] += 1;
        true
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), Int::from(1));
        assert_eq!(factorial(1), Int::from(1));
        assert_eq!(factorial(7), Int::from(5040));
    }

    #[test]
    fn multinomial_matches_binomial() {
        assert_eq!(multinomial(&[2, 1]), Int::from(3));
        assert_eq!(multinomial(&[1, 1, 1]), Int::from(6));
        assert_eq!(multinomial(&[0, 4]), Int::from(1));
    }

    #[test]
    fn rationals_reduce() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(1, 12) + rat(1, 12), rat(1, 6));
    }
}
