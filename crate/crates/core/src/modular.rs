//! Univariate gcd over ℚ by reduction modulo word-size primes.
//!
//! Euclid's algorithm over ℚ lets coefficients grow with every remainder; for
//! high degrees that is ruinous. Here the gcd is computed modulo a run of primes,
//! combined by the Chinese remainder theorem and accepted only once it divides
//! both inputs exactly.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::coeff::{QPoly, Rational};

/// Primitive integer polynomial proportional to `p` (nonzero).
fn primitive(p: &QPoly) -> Vec<BigInt> {
    let l = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn is_prime(n: u64) -> bool {
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

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut base, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    r
}

fn reduce(p: &[BigInt], m: u64) -> Vec<u64> {
    let bm = BigInt::from(m);
    let mut v: Vec<u64> = p.iter().map(|c| c.mod_floor(&bm).to_u64().unwrap_or(0)).collect();
    trim(&mut v);
    v
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd over `𝔽_p`.
fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap_or(&1), p);
        let db = b.len() - 1;
        while a.len() > db {
            let c = mul_mod(*a.last().unwrap_or(&0), inv, p);
            let shift = a.len() - 1 - db;
            for (j, &bj) in b.iter().enumerate() {
                let t = mul_mod(c, bj, p);
                a[shift + j] = (a[shift + j] + p - t) % p;
            }
            trim(&mut a);
        }
        core::mem::swap(&mut a, &mut b);
    }
    let inv = inv_mod(*a.last().unwrap_or(&1), p);
    a.iter().map(|&c| mul_mod(c, inv, p)).collect()
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if (&r << 1u32) > *m {
        r - m
    } else {
        r
    }
}

/// Monic gcd of two nonzero polynomials.
pub(crate) fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (pa, pb) = (primitive(a), primitive(b));
    let (la, lb) = (pa.last().cloned().unwrap_or_default(), pb.last().cloned().unwrap_or_default());
    let lcg = la.gcd(&lb);
    let mut prime = (1u64 << 31) - 1;
    let mut acc: Option<(Vec<BigInt>, BigInt)> = None;
    let mut last: Option<QPoly> = None;
    loop {
        while !is_prime(prime) {
            prime -= 2;
        }
        let p = prime;
        prime -= 2;
        let bp = BigInt::from(p);
        if (&la % &bp).is_zero() || (&lb % &bp).is_zero() {
            continue;
        }
        let g = gcd_mod(&reduce(&pa, p), &reduce(&pb, p), p);
        if g.len() == 1 {
            return QPoly::constant(Rational::one());
        }
        let s = lcg.mod_floor(&bp).to_u64().unwrap_or(0);
        let g: Vec<BigInt> = g.iter().map(|&c| BigInt::from(mul_mod(c, s, p))).collect();
        acc = match acc {
            Some((prev, m)) if prev.len() == g.len() => {
                // x ≡ prev (mod m), x ≡ g (mod p)
                let minv = BigInt::from(inv_mod((&m % &bp).to_u64().unwrap_or(0), p));
                let next: Vec<BigInt> = prev
                    .iter()
                    .zip(&g)
                    .map(|(x, y)| {
                        let t = ((y - x) * &minv).mod_floor(&bp);
                        x + &m * t
                    })
                    .collect();
                Some((next, m * &bp))
            }
            // a smaller degree means every earlier prime was unlucky
            Some((prev, m)) if prev.len() < g.len() => Some((prev, m)),
            _ => Some((g, bp)),
        };
        let (coeffs, m) = acc.as_ref().map(|(c, m)| (c.clone(), m.clone())).unwrap_or_default();
        let cand = QPoly::new(coeffs.iter().map(|c| Rational::from_integer(symmetric(c, &m))).collect()).monic();
        if last.as_ref() == Some(&cand) && a.rem(&cand).is_zero() && b.rem(&cand).is_zero() {
            return cand;
        }
        last = Some(cand);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_euclid() {
        let q = QPoly::from_ints;
        let g = q(&[3, -7, 0, 2]);
        let a = g.mul(&q(&[1, 1, 5, 0, 9])).mul(&q(&[123456789, 1]));
        let b = g.mul(&q(&[-4, 0, 0, 1])).scale(&Rational::new(3.into(), 7.into()));
        assert_eq!(gcd(&a, &b), g.monic());
        assert_eq!(gcd(&q(&[1, 0, 1]), &q(&[-1, 1])), q(&[1]));
        let big = q(&[1, 1]).mul(&q(&[1 << 40, -3])).mul(&q(&[5, 0, 1 << 35]));
        assert_eq!(gcd(&big, &big.derivative().mul(&q(&[1 << 40, -3]))), q(&[1 << 40, -3]).monic());
        assert!(gcd(&big, &big).sub(&big.monic()).is_zero());
    }
}
