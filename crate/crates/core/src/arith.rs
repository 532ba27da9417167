//! Integer helpers: modular arithmetic, `p`-adic valuations of integers,
//! carry counting for binomial coefficients, and the digit-sum bound `alpha`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Least quadratic non-residue modulo the odd prime `p`.
pub fn least_non_residue(p: u64) -> u64 {
    (2..p)
        .find(|&q| mod_pow(q, (p - 1) / 2, p) == p - 1)
        .expect("odd prime has a non-residue")
}

/// Least primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("prime has a primitive root")
}

/// `p`-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation_int(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

pub fn valuation_i64(n: i64, p: u64) -> Option<u64> {
    valuation_int(&BigInt::from(n), p)
}

/// Exact binomial coefficient as a big integer (zero when `j > n`).
pub fn binomial(n: u64, j: u64) -> BigInt {
    if j > n {
        return BigInt::zero();
    }
    let j = j.min(n - j);
    let mut acc = BigInt::from(1u32);
    for i in 0..j {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `v_p(C(n, j))`, computed as the number of carries when adding `j` and
/// `n - j` in base `p`.
pub fn binomial_valuation(n: u64, j: u64, p: u64) -> u64 {
    assert!(j <= n, "binomial_valuation requires j <= n");
    let (mut a, mut b) = (j, n - j);
    let mut carry = 0;
    let mut carries = 0;
    while a > 0 || b > 0 || carry > 0 {
        let s = a % p + b % p + carry;
        carry = u64::from(s >= p);
        carries += carry;
        a /= p;
        b /= p;
    }
    carries
}

/// `alpha(n) = sum_{j >= 1} floor(n / (p^(j-1) (p - 1)))`.
pub fn alpha(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut denom = p - 1;
    while denom <= n {
        total += n / denom;
        match denom.checked_mul(p) {
            Some(d) => denom = d,
            None => break,
        }
    }
    total
}

/// `x mod m` as a representative in `{0, ..., m - 1}`.
pub fn bracket(x: i64, m: i64) -> i64 {
    x.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_valuation_examples() {
        assert_eq!(binomial_valuation(22, 2, 5), 0);
        assert_eq!(binomial_valuation(5, 1, 5), 1);
        assert_eq!(binomial_valuation(17, 0, 5), 0);
        assert_eq!(binomial(22, 2), BigInt::from(231));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(3, 5), 0);
        assert_eq!(alpha(4, 5), 1);
        assert_eq!(alpha(0, 7), 0);
        assert_eq!(alpha(10, 5), 2);
    }

    #[test]
    fn integer_valuations() {
        assert_eq!(valuation_i64(-230, 5), Some(1));
        assert_eq!(valuation_i64(0, 5), None);
        assert_eq!(valuation_i64(5150, 5), Some(2));
    }

    #[test]
    fn small_field_constants() {
        assert_eq!(least_non_residue(5), 2);
        assert_eq!(least_non_residue(7), 3);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(mod_inv(3, 5), Some(2));
        assert_eq!(mod_inv(5, 25), None);
    }
}
