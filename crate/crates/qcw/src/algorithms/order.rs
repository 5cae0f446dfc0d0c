//! Order finding by brute force at desk scale, and the classical reduction
//! from factoring to order finding: pick a random base, find its order, and
//! split N through gcd(a^{r/2} ± 1, N) when the order is even.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::boolcircuit::{solovay_strassen, Primality};
use crate::error::{Error, Result};
use crate::numtheory::{gcd, integer_root, mulmod};

/// Order search above this modulus would iterate too long for a desk run.
const MAX_ORDER_MODULUS: u64 = 1 << 20;

/// Random-base attempts per composite before giving up.
const SPLIT_ATTEMPTS: u32 = 64;

/// Primality certification rounds used on every emitted factor.
const CERT_ROUNDS: u32 = 20;

/// The multiplicative order r of a modulo N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderResult {
    pub a: u64,
    pub n: u64,
    /// Least positive r with a^r ≡ 1 (mod N).
    pub r: u64,
}

/// Finds the order by iterated multiplication.
pub fn brute_force_order(a: u64, n: u64) -> Result<OrderResult> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("modulus {n} too small")));
    }
    if n > MAX_ORDER_MODULUS {
        return Err(Error::ResourceLimit(format!(
            "order search modulo {n} exceeds the 2^20 desk-scale cap"
        )));
    }
    let a = a % n;
    if gcd(a, n) != 1 {
        return Err(Error::InvalidInput(format!(
            "gcd({a}, {n}) = {} != 1",
            gcd(a, n)
        )));
    }
    let mut acc = a;
    for r in 1..n {
        if acc == 1 {
            return Ok(OrderResult { a, n, r });
        }
        acc = mulmod(acc, a, n);
    }
    // Euler: the order always divides φ(N) < N for coprime a.
    Ok(OrderResult { a, n, r: n - 1 })
}

/// Source of multiplicative orders; tests substitute counting or lying
/// implementations.
pub type OrderSource<'a> = dyn FnMut(u64, u64) -> Result<OrderResult> + 'a;

/// Prime factorization (with multiplicity, ascending) via the order oracle.
///
/// Small cases are handled classically first: factors of two are stripped,
/// certified primes are emitted, and perfect powers are split by integer
/// roots. For the remaining odd composites, random bases are drawn until an
/// even-order base with a^{r/2} ≢ -1 splits N through gcd(a^{r/2} ± 1, N).
/// A base sharing a factor with N is itself a split, not an error. Every
/// emitted prime is certified by Solovay–Strassen.
pub fn factor_from_order(
    n: u64,
    order_source: &mut OrderSource<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut factors = Vec::new();
    split(n, order_source, rng, &mut factors)?;
    factors.sort_unstable();
    Ok(factors)
}

fn is_certified_prime(n: u64, rng: &mut ChaCha8Rng) -> Result<bool> {
    if n == 2 {
        return Ok(true);
    }
    if n < 2 || n % 2 == 0 {
        return Ok(false);
    }
    Ok(solovay_strassen(n, CERT_ROUNDS, rng)? == Primality::ProbablyPrime)
}

fn split(
    n: u64,
    order_source: &mut OrderSource<'_>,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<u64>,
) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if n % 2 == 0 {
        out.push(2);
        return split(n / 2, order_source, rng, out);
    }
    if is_certified_prime(n, rng)? {
        out.push(n);
        return Ok(());
    }
    // Perfect powers: the random-base split cannot separate p^e.
    for e in 2..=n.ilog2() {
        let root = integer_root(n, e);
        if root >= 2 && root.pow(e) == n {
            for _ in 0..e {
                split(root, order_source, rng, out)?;
            }
            return Ok(());
        }
    }
    for _ in 0..SPLIT_ATTEMPTS {
        let a = rng.gen_range(2..n - 1);
        let g = gcd(a, n);
        if g != 1 {
            // The base itself reveals a factor.
            split(g, order_source, rng, out)?;
            return split(n / g, order_source, rng, out);
        }
        let order = order_source(a, n)?;
        if order.r % 2 != 0 {
            continue;
        }
        let h = powmod_desk(a, order.r / 2, n);
        if h == n - 1 {
            continue;
        }
        let f1 = gcd(h + 1, n);
        let f2 = gcd(h + n - 1, n);
        let f = if f1 > 1 && f1 < n {
            f1
        } else if f2 > 1 && f2 < n {
            f2
        } else {
            continue;
        };
        split(f, order_source, rng, out)?;
        return split(n / f, order_source, rng, out);
    }
    Err(Error::BudgetExhausted(format!(
        "no splitting base found for {n} in {SPLIT_ATTEMPTS} attempts; retry with another seed"
    )))
}

fn powmod_desk(a: u64, e: u64, n: u64) -> u64 {
    crate::numtheory::powmod(a, e, n)
}
