//! Prime arithmetic for membership in the symbolic sets: a cached table of
//! the first primes, prime counting, primality and prime-power detection.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Number of primes held in the cached table.
pub const TABLE_PRIMES: usize = 10_000;

/// Largest prime whose index is computed by prime counting.
pub const MAX_COUNTED_PRIME: u64 = 1_000_000_000_000;

/// The first [`TABLE_PRIMES`] primes, ascending.
pub fn table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // p_10000 = 104729
        let limit = 104_730usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::with_capacity(TABLE_PRIMES);
        for i in 2..limit {
            if composite[i] {
                continue;
            }
            primes.push(i as u64);
            let mut j = i * i;
            while j < limit {
                composite[j] = true;
                j += i;
            }
        }
        primes.truncate(TABLE_PRIMES);
        primes
    })
}

fn largest_tabled() -> u64 {
    *table().last().expect("nonempty table")
}

/// The `n`-th prime, counting from `p_1 = 2`, for `n ≤ TABLE_PRIMES`.
pub fn nth_prime(n: usize) -> Option<u64> {
    n.checked_sub(1).and_then(|i| table().get(i).copied())
}

/// Number of primes `≤ x`, by the Lucy–Hedgehog recurrence over the values
/// `⌊x / k⌋`.
pub fn prime_count(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    let r = x.isqrt();
    // small[v] = count for v ≤ r, large[k] = count for ⌊x/k⌋
    let mut small: Vec<u64> = (0..=r).map(|v| v.saturating_sub(1)).collect();
    let mut large: Vec<u64> = (0..=r).map(|k| x.checked_div(k).map_or(0, |q| q - 1)).collect();
    for p in 2..=r {
        if small[p as usize] == small[p as usize - 1] {
            continue;
        }
        let below = small[p as usize - 1];
        let p2 = p * p;
        for k in 1..=r {
            let v = x / k;
            if v < p2 {
                break;
            }
            let vp = v / p;
            let sub = if vp <= r { small[vp as usize] } else { large[(k * p) as usize] };
            large[k as usize] -= sub - below;
        }
        for v in (p2..=r).rev() {
            small[v as usize] -= small[(v / p) as usize] - below;
        }
    }
    large[1]
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Index of the prime `p` (`p_1 = 2`).
pub fn prime_index(p: u64) -> Result<u64> {
    debug_assert!(is_prime(p));
    if p <= largest_tabled() {
        let i = table().binary_search(&p).expect("tabled prime");
        return Ok(i as u64 + 1);
    }
    if p <= MAX_COUNTED_PRIME {
        return Ok(prime_count(p));
    }
    Err(Error::PrimeIndexUnavailable(p))
}

fn integer_root(x: u64, m: u32) -> u64 {
    let mut r = (x as f64).powf(1.0 / m as f64).round() as u64;
    while r > 0 && r.checked_pow(m).is_none_or(|v| v > x) {
        r -= 1;
    }
    while (r + 1).checked_pow(m).is_some_and(|v| v <= x) {
        r += 1;
    }
    r
}

/// `x = p^m` with `p` prime and `m ≥ 1`, if such a representation exists.
pub fn prime_power(x: u64) -> Option<(u64, u32)> {
    if x < 2 {
        return None;
    }
    for &p in table() {
        if p.saturating_mul(p) > x {
            // no factor up to √x: x is prime
            return Some((x, 1));
        }
        if x.is_multiple_of(p) {
            let (mut rest, mut m) = (x, 0);
            while rest % p == 0 {
                rest /= p;
                m += 1;
            }
            return (rest == 1).then_some((p, m));
        }
    }
    // every prime factor exceeds the table, so at most three of them
    (1..=3).find_map(|m| {
        let r = integer_root(x, m);
        (r.checked_pow(m) == Some(x) && is_prime(r)).then_some((r, m))
    })
}

/// Like [`prime_power`] for arbitrary size, limited to prime bases from
/// the table.
pub fn prime_power_big(x: &BigUint) -> Result<Option<(u64, u32)>> {
    if let Some(small) = x.to_u64() {
        return Ok(prime_power(small));
    }
    for &p in table() {
        let bp = BigUint::from(p);
        if (x % &bp).is_zero() {
            let (mut rest, mut m) = (x.clone(), 0u32);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
                m += 1;
            }
            return Ok(rest.is_one().then_some((p, m)));
        }
    }
    Err(Error::FactorizationOutOfRange(x.to_string()))
}
