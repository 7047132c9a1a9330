//! Small integer number theory used across the crate.

use alloc::vec::Vec;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Exponent of `p` in `n`; `n` must be nonzero.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Prime factorization by trial division, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = Vec::from([1u64]);
    for (p, e) in factor(n) {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn sigma(n: u64, k: u32) -> u64 {
    divisors(n).iter().map(|d| d.pow(k)).sum()
}
