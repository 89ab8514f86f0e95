//! Finite fields GF(p^f).
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits of the code
//! are the coefficients of a polynomial residue (lowest degree first) modulo
//! the lexicographically least monic irreducible of degree `f`. The code
//! order is the fixed total order on field elements used by canonical forms.

use crate::error::{Error, Result};

/// Largest field order this module will build tables for.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

pub type Fe = u32;

#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    degree: u32,
    q: u32,
    /// Coefficients `c_0..c_{f-1}` of the modulus `x^f + ... + c_0`.
    modulus: Vec<u32>,
    exp: Vec<Fe>,
    log: Vec<u32>,
}

/// Returns `(p, f)` with `q = p^f`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..)
        .take_while(|d: &u64| d * d <= q)
        .find(|d| q.is_multiple_of(*d))
        .unwrap_or(q);
    let (mut rest, mut f) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        f += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, f))
}

fn digits(mut x: u32, p: u32, f: u32) -> Vec<u32> {
    (0..f)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Polynomial product modulo a monic polynomial, all coefficients mod `p`.
fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let f = modulus.len();
    let mut prod = vec![0u64; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for top in (f..2 * f).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        // x^f = -(c_0 + ... + c_{f-1} x^{f-1})
        for (i, &m) in modulus.iter().enumerate() {
            let sub = c * m as u64 % p as u64;
            prod[top - f + i] = (prod[top - f + i] + p as u64 - sub) % p as u64;
        }
    }
    prod[..f].iter().map(|&c| c as u32).collect()
}

fn has_factor_of_degree(tail: &[u32], p: u32, d: u32) -> bool {
    // Trial division of x^f + tail by every monic polynomial of degree d.
    let f = tail.len();
    let mut full: Vec<u32> = tail.to_vec();
    full.push(1);
    for code in 0..p.pow(d) {
        let mut div = digits(code, p, d);
        div.push(1);
        let mut rem = full.clone();
        for top in (d as usize..=f).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            for (i, &dc) in div.iter().enumerate() {
                let idx = top - d as usize + i;
                rem[idx] = (rem[idx] + p - c * dc % p) % p;
            }
        }
        if rem[..d as usize].iter().all(|&c| c == 0) {
            return true;
        }
    }
    false
}

fn least_irreducible(p: u32, f: u32) -> Vec<u32> {
    if f == 1 {
        return vec![0];
    }
    (0..p.pow(f))
        .map(|code| digits(code, p, f))
        .find(|tail| tail[0] != 0 && !(1..=f / 2).any(|d| has_factor_of_degree(tail, p, d)))
        .expect("an irreducible polynomial exists in every degree")
}

impl GaloisField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, degree) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_FIELD_ORDER as u64 {
            return Err(Error::CapExceeded {
                what: "field order",
                value: q as u128,
                cap: MAX_FIELD_ORDER as u128,
            });
        }
        let q = q as u32;
        let modulus = least_irreducible(p, degree);
        // Smallest code generating the multiplicative group.
        let mut exp = Vec::with_capacity(q as usize);
        for g in 1..q {
            let gd = digits(g, p, degree);
            exp.clear();
            let mut cur = digits(1, p, degree);
            loop {
                exp.push(undigits(&cur, p));
                cur = mul_mod(&cur, &gd, &modulus, p);
                if undigits(&cur, p) == 1 {
                    break;
                }
            }
            if exp.len() == (q - 1) as usize {
                break;
            }
        }
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        Ok(Self {
            p,
            degree,
            q,
            modulus,
            exp,
            log,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficients `c_0..c_{f-1}` of the defining polynomial (monic, implicit leading 1).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> Fe {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.degree == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        let m = self.q - 1;
        let e = self.log[a as usize] + self.log[b as usize];
        self.exp[(if e >= m { e - m } else { e }) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        let m = self.q - 1;
        Some(self.exp[((m - self.log[a as usize]) % m) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let m = (self.q - 1) as u64;
        self.exp[(self.log[a as usize] as u64 * (e % m) % m) as usize]
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        n.rem_euclid(self.p as i64) as Fe
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.q
    }
}
