//! Modular arithmetic helpers shared by the primality, order-finding, and
//! fingerprinting code.

/// `(a * b) mod n` without overflow for any u64 operands.
pub fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// `a^e mod n` by square-and-multiply.
pub fn powmod(mut a: u64, mut e: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Jacobi symbol (a/n) for odd n > 0. Returns 0, 1, or -1.
pub fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1 && n > 0);
    a %= n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Odd primes up to and including `limit`, plus 2, by sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= limit {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Largest integer r with r^e <= n, found by binary search on exact integer
/// powers.
pub fn integer_root(n: u64, e: u32) -> u64 {
    if e == 1 {
        return n;
    }
    let mut lo = 1u64;
    let mut hi = 1u64 << (64 / e + 1).min(63);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        match checked_pow(mid, e) {
            Some(p) if p <= n => lo = mid,
            _ => hi = mid - 1,
        }
    }
    lo
}

fn checked_pow(base: u64, e: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
