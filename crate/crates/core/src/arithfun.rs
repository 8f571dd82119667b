//! Multiplicative arithmetic functions.
//!
//! Factorization is full 64-bit: trial division by sieved primes up to 1e6,
//! then deterministic Miller-Rabin plus Brent's variant of Pollard's rho for
//! the remaining cofactors. Everything downstream (tau, mu, squarefree
//! splits, the g-function) is derived from the prime-exponent list.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::primes::{is_prime_u64, mod_pow, mul_mod};

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::with_capacity(78_498);
        for p in 2..=n {
            if !composite[p] {
                out.push(p as u32);
                let mut m = p * p;
                while m <= n {
                    composite[m] = true;
                    m += p;
                }
            }
        }
        out
    })
}

/// Prime-exponent list of an unsigned 64-bit integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Distinct primes with exponents, ascending.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn mobius(&self) -> i32 {
        if self.factors.iter().any(|&(_, e)| e >= 2) {
            0
        } else if self.factors.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn sqfree_split(&self) -> SqfreeSplit {
        let mut root = 1u64;
        let mut sqfree = 1u64;
        for &(p, e) in &self.factors {
            root *= p.pow(e / 2);
            if e % 2 == 1 {
                sqfree *= p;
            }
        }
        SqfreeSplit { root, sqfree }
    }
}

/// Decomposition n = root^2 * sqfree with sqfree squarefree and root maximal.
///
/// Maximality makes tau(root) smallest among valid splits, which is the
/// direction that matters when tau(root) feeds an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SqfreeSplit {
    pub root: u64,
    pub sqfree: u64,
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::domain("factorize(0)"));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    for &p in small_primes() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        if m < TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT {
            // trial division covered sqrt(m), so the cofactor is prime
            factors.push((m, 1));
        } else {
            let mut rest = Vec::new();
            split_large(m, &mut rest);
            rest.sort_unstable();
            for p in rest {
                match factors.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, e)) => *e += 1,
                    None => factors.push((p, 1)),
                }
            }
            factors.sort_unstable_by_key(|&(p, _)| p);
        }
    }
    Ok(Factorization { n, factors })
}

/// Recursively split a cofactor known to have no prime factor below 1e6.
fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime_u64(m) {
        out.push(m);
        return;
    }
    let d = pollard_rho(m);
    split_large(d, out);
    split_large(m / d, out);
}

/// Brent-cycle Pollard rho. Only called on odd composites > 1e12.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime_u64(n));
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Number of divisors.
pub fn tau(n: u64) -> Result<u64> {
    Ok(factorize(n)?.tau())
}

/// Moebius function, 0 on non-squarefree input.
pub fn mobius(n: u64) -> Result<i32> {
    Ok(factorize(n)?.mobius())
}

/// Number of distinct prime factors.
pub fn omega(n: u64) -> Result<u32> {
    Ok(factorize(n)?.omega())
}

/// True iff n is positive and divisible by no square > 1. Zero is not
/// squarefree by convention: a representation summand must be positive.
pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    factorize(n).map(|f| f.is_squarefree()).unwrap_or(false)
}

pub fn sqfree_split(n: u64) -> Result<SqfreeSplit> {
    Ok(factorize(n)?.sqfree_split())
}

/// The completely multiplicative g-function at a prime, for a fixed target n.
///
/// g(2) is 0 when n = 2, 3 (mod 4) and 2 when n = 0, 1 (mod 4). For odd p:
/// 0 when p exactly divides n or n is a non-residue mod p, p when p^2 | n,
/// and 2 when n is a nonzero square mod p (decided by Euler's criterion).
/// In every case this equals the number of solutions of x^2 = n (mod p^2)
/// on a window of length p^2, which [`count_roots_mod_p2`] verifies by
/// exhaustion.
pub fn g_at_prime(n: u64, p: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("g_at_prime with n = 0"));
    }
    if !is_prime_u64(p) {
        return Err(Error::domain(format!("g_at_prime at non-prime {p}")));
    }
    if p == 2 {
        return Ok(match n % 4 {
            0 | 1 => 2,
            _ => 0,
        });
    }
    if n.is_multiple_of(p) {
        return Ok(if (n / p).is_multiple_of(p) { p } else { 0 });
    }
    let legendre = mod_pow(n % p, (p - 1) / 2, p);
    Ok(if legendre == 1 { 2 } else { 0 })
}

/// g extended multiplicatively to d, with overflow made explicit.
pub fn g_value(n: u64, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::domain("g_value with d = 0"));
    }
    let mut acc: u64 = 1;
    for &(p, e) in factorize(d)?.factors() {
        let gp = g_at_prime(n, p)?;
        for _ in 0..e {
            acc = acc
                .checked_mul(gp)
                .ok_or_else(|| Error::Overflow(format!("g({n}, {d}) exceeds 64 bits")))?;
        }
    }
    Ok(acc)
}

/// Exhaustive count of x in [0, p^2) with x^2 = n (mod p^2).
///
/// This is the oracle for [`g_at_prime`]; it shares no logic with it.
/// Squares are tracked incrementally so the scan is addition-only.
pub fn count_roots_mod_p2(n: u64, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::domain(format!("count_roots_mod_p2 at non-prime {p}")));
    }
    let m = p
        .checked_mul(p)
        .ok_or_else(|| Error::capacity(format!("p^2 overflows for p = {p}")))?;
    let target = n % m;
    let mut count = 0u64;
    let mut sq = 0u64; // x^2 mod m
    let mut inc = 1u64; // (2x + 1) mod m
    for _ in 0..m {
        if sq == target {
            count += 1;
        }
        sq += inc;
        if sq >= m {
            sq -= m;
        }
        inc += 2;
        if inc >= m {
            inc -= m;
        }
    }
    Ok(count)
}
