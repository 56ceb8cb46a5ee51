//! Dirichlet characters with exact root-of-unity values e^(2 pi i k/n),
//! built from the cyclic decomposition of (Z/m)^x.

use crate::arith::{euler_phi, factor, mulmod, powmod};
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("modulus must be >= 1")]
    BadModulus,
    #[error("character tables disagree on a common unit")]
    Incompatible,
}

/// e^(2 pi i num/den), stored reduced with 0 <= num < den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    pub num: u64,
    pub den: u64,
}

impl RootOfUnity {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den >= 1);
        let num = num % den;
        let g = num.gcd(&den);
        if num == 0 {
            RootOfUnity { num: 0, den: 1 }
        } else {
            RootOfUnity {
                num: num / g,
                den: den / g,
            }
        }
    }

    pub fn one() -> Self {
        RootOfUnity { num: 0, den: 1 }
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        let den = self.den.lcm(&other.den);
        RootOfUnity::new(
            self.num * (den / self.den) + other.num * (den / other.den),
            den,
        )
    }

    pub fn pow(&self, e: u64) -> Self {
        RootOfUnity::new(self.num.wrapping_mul(e % self.den), self.den)
    }

    pub fn inv(&self) -> Self {
        RootOfUnity::new(self.den - self.num, self.den)
    }
}

/// A Dirichlet character mod m as its full value table on residues,
/// completely multiplicative on units, zero (None) off units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<Option<RootOfUnity>>,
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        let values = (0..modulus.max(1))
            .map(|r| {
                if modulus == 1 || r.gcd(&modulus) == 1 {
                    Some(RootOfUnity::one())
                } else {
                    None
                }
            })
            .collect();
        DirichletCharacter {
            modulus: modulus.max(1),
            values,
        }
    }

    /// The quadratic character mod an odd prime q (Legendre symbol).
    pub fn quadratic(q: u64) -> Self {
        let values = (0..q)
            .map(|r| {
                if r == 0 {
                    None
                } else if powmod(r, (q - 1) / 2, q) == 1 {
                    Some(RootOfUnity::one())
                } else {
                    Some(RootOfUnity::new(1, 2))
                }
            })
            .collect();
        DirichletCharacter { modulus: q, values }
    }

    pub fn from_values(
        modulus: u64,
        values: Vec<Option<RootOfUnity>>,
    ) -> Result<Self, CharacterError> {
        if modulus == 0 || values.len() != modulus.max(1) as usize {
            return Err(CharacterError::BadModulus);
        }
        Ok(DirichletCharacter { modulus, values })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// None off the units of Z/m.
    pub fn value(&self, r: u64) -> Option<RootOfUnity> {
        self.values[(r % self.modulus) as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.map(|z| z.is_one()).unwrap_or(true))
    }

    /// lcm of the value orders.
    pub fn order(&self) -> u64 {
        self.values
            .iter()
            .flatten()
            .fold(1u64, |acc, z| acc.lcm(&z.order()))
    }

    pub fn kernel(&self) -> Vec<u64> {
        (0..self.modulus)
            .filter(|&r| self.value(r).map(|z| z.is_one()).unwrap_or(false))
            .collect()
    }

    /// Lift to a multiple of the modulus.
    pub fn lift(&self, modulus: u64) -> Self {
        assert!(modulus % self.modulus == 0);
        let values = (0..modulus)
            .map(|r| {
                if r.gcd(&modulus) == 1 {
                    self.value(r)
                } else {
                    None
                }
            })
            .collect();
        DirichletCharacter { modulus, values }
    }

    /// Pointwise product after lifting to the lcm modulus.
    pub fn mul(&self, other: &Self) -> Self {
        let m = self.modulus.lcm(&other.modulus);
        let a = self.lift(m);
        let b = other.lift(m);
        let values = (0..m)
            .map(|r| match (a.value(r), b.value(r)) {
                (Some(x), Some(y)) => Some(x.mul(&y)),
                _ => None,
            })
            .collect();
        DirichletCharacter { modulus: m, values }
    }

    pub fn inv(&self) -> Self {
        let values = self.values.iter().map(|v| v.map(|z| z.inv())).collect();
        DirichletCharacter {
            modulus: self.modulus,
            values,
        }
    }

    /// Exponent map on all values (the Galois action on roots of unity).
    pub fn power_values(&self, t: u64) -> Self {
        let values = self.values.iter().map(|v| v.map(|z| z.pow(t))).collect();
        DirichletCharacter {
            modulus: self.modulus,
            values,
        }
    }

    /// Equal as functions on residues coprime to both moduli (one may be an
    /// imprimitive lift of the other).
    pub fn equivalent(&self, other: &Self) -> bool {
        let m = self.modulus.lcm(&other.modulus);
        (0..m)
            .filter(|&r| r.gcd(&m) == 1)
            .all(|r| self.value(r) == other.value(r))
    }
}

/// Cyclic decomposition of (Z/m)^x: (generator, order) pairs with the
/// generators lifted through the CRT to be 1 mod the other factors.
pub fn unit_group_generators(m: u64) -> Vec<(u64, u64)> {
    if m <= 2 {
        return Vec::new();
    }
    let mut gens = Vec::new();
    for (p, e) in factor(m) {
        let pe = p.pow(e);
        let rest = m / pe;
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                return g % m;
            }
            // x = 1 + rest * t with t = (g - 1) / rest mod pe
            let (_, inv_rest, _) = ext_gcd(rest as i64, pe as i64);
            let inv = inv_rest.rem_euclid(pe as i64) as u64;
            let t = mulmod(inv, (g + pe - 1) % pe, pe);
            (1 + mulmod(rest % m, t, m)) % m
        };
        if p == 2 {
            match e {
                1 => {}
                2 => gens.push((lift(3), 2)),
                _ => {
                    gens.push((lift(pe - 1), 2));
                    gens.push((lift(5), 1 << (e - 2)));
                }
            }
        } else {
            let g = primitive_root_mod_prime_power(p, e);
            gens.push((lift(g), euler_phi(pe)));
        }
    }
    gens
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn primitive_root_mod_prime_power(p: u64, e: u32) -> u64 {
    let phi_p = p - 1;
    let fs = factor(phi_p);
    let g = (2..p)
        .find(|&g| fs.iter().all(|&(q, _)| powmod(g, phi_p / q, p) != 1))
        .expect("primitive root mod p exists");
    if e == 1 {
        return g;
    }
    // g or g + p generates mod p^2, and then mod every higher power
    let pe = p.pow(e);
    let phi_p2 = p * (p - 1);
    if powmod(g % (p * p), phi_p2 / p, p * p) != 1 {
        g % pe
    } else {
        (g + p) % pe
    }
}

/// Every Dirichlet character of modulus m, enumerated through exponent
/// vectors on the unit-group generators. phi(m) characters in total.
pub fn enumerate_characters(m: u64) -> Vec<DirichletCharacter> {
    if m == 1 {
        return vec![DirichletCharacter::trivial(1)];
    }
    let gens = unit_group_generators(m);
    // enumerate unit-group elements once as exponent vectors
    let mut unit_exponents: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut exps = vec![0u64; gens.len()];
    loop {
        let mut r = 1u64 % m;
        for (i, &(g, _)) in gens.iter().enumerate() {
            r = mulmod(r, powmod(g, exps[i], m), m);
        }
        unit_exponents.push((r, exps.clone()));
        let mut i = 0;
        loop {
            if i == gens.len() {
                break;
            }
            exps[i] += 1;
            if exps[i] < gens[i].1 {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if exps.iter().all(|&e| e == 0) {
            break;
        }
        if gens.is_empty() {
            break;
        }
    }

    let mut chars = Vec::new();
    let mut ks = vec![0u64; gens.len()];
    loop {
        let mut values: Vec<Option<RootOfUnity>> = vec![None; m as usize];
        for (r, exps) in &unit_exponents {
            let mut z = RootOfUnity::one();
            for (i, &(_, d)) in gens.iter().enumerate() {
                z = z.mul(&RootOfUnity::new(ks[i] * exps[i] % d, d));
            }
            values[*r as usize] = Some(z);
        }
        chars.push(DirichletCharacter { modulus: m, values });
        let mut i = 0;
        loop {
            if i == gens.len() {
                return chars;
            }
            ks[i] += 1;
            if ks[i] < gens[i].1 {
                break;
            }
            ks[i] = 0;
            i += 1;
        }
        if ks.iter().all(|&k| k == 0) {
            return chars;
        }
    }
}
