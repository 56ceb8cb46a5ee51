//! Cantor arithmetic on the Jacobian of y^2 = f(x) for monic quintic f over
//! F_p, in Mumford representation (u, v) with u monic of degree <= 2,
//! deg v < deg u and u | f - v^2.
//!
//! Used to pick the group order among a handful of candidates: a candidate N
//! survives only if N * D = 0 for random divisors D.

use crate::arith::sqrt_mod;
use crate::ffield::{Field, Poly, PrimeField};
use rand::Rng;

type P = Poly<PrimeField>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub u: P,
    pub v: P,
}

impl Divisor {
    pub fn identity() -> Self {
        Divisor {
            u: P { coeffs: vec![1u64] },
            v: P::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.u.degree() == Some(0)
    }
}

/// The Jacobian context: p and the monic quintic.
pub struct Jacobian {
    pub fld: PrimeField,
    pub f: P,
}

impl Jacobian {
    /// `f` must be monic of degree 5 over F_p.
    pub fn new(fld: PrimeField, coeffs: Vec<u64>) -> Self {
        let f = P::new(&fld, coeffs);
        assert_eq!(f.degree(), Some(5), "odd model of degree 5");
        assert_eq!(f.leading(), Some(&1), "monic model");
        Jacobian { fld, f }
    }

    /// Degree-1 divisor attached to an affine point (x0, y0).
    pub fn point_divisor(&self, x0: u64, y0: u64) -> Divisor {
        let fld = &self.fld;
        Divisor {
            u: P::new(fld, vec![fld.neg(&x0), 1]),
            v: P::new(fld, vec![y0 % fld.ell()]),
        }
    }

    /// Random degree-1 divisor by sampling x until f(x) is a square.
    pub fn random_divisor(&self, rng: &mut impl Rng) -> Divisor {
        let fld = &self.fld;
        loop {
            let x0 = rng.random_range(0..fld.ell());
            let fx = self.f.eval(fld, &x0);
            if let Some(y0) = sqrt_mod(fx, fld.ell()) {
                if y0 != 0 || fx == 0 {
                    return self.point_divisor(x0, y0);
                }
            }
        }
    }

    pub fn neg(&self, d: &Divisor) -> Divisor {
        let fld = &self.fld;
        let (_, v) = d.v.scale(fld, &fld.neg(&1)).divrem(fld, &d.u);
        Divisor { u: d.u.clone(), v }
    }

    /// Cantor composition followed by reduction to deg u <= 2.
    pub fn add(&self, d1: &Divisor, d2: &Divisor) -> Divisor {
        let fld = &self.fld;
        if d1.is_identity() {
            return d2.clone();
        }
        if d2.is_identity() {
            return d1.clone();
        }
        // composition
        let (g1, e1, e2) = d1.u.xgcd(fld, &d2.u);
        let v1v2 = d1.v.add(fld, &d2.v);
        let (d, c1, c2) = g1.xgcd(fld, &v1v2);
        // d = c1*(e1 u1 + e2 u2) + c2 (v1 + v2)
        let s1 = c1.mul(fld, &e1);
        let s2 = c1.mul(fld, &e2);
        let s3 = c2;

        let u1u2 = d1.u.mul(fld, &d2.u);
        let d_sq = d.mul(fld, &d);
        let (u, rem) = u1u2.divrem(fld, &d_sq);
        debug_assert!(rem.is_zero());

        // v = (s1 u1 v2 + s2 u2 v1 + s3 (v1 v2 + f)) / d  mod u
        let t1 = s1.mul(fld, &d1.u).mul(fld, &d2.v);
        let t2 = s2.mul(fld, &d2.u).mul(fld, &d1.v);
        let t3 = s3.mul(fld, &d1.v.mul(fld, &d2.v).add(fld, &self.f));
        let num = t1.add(fld, &t2).add(fld, &t3);
        let (vq, vrem) = num.divrem(fld, &d);
        debug_assert!(vrem.is_zero());
        let (_, v) = vq.divrem(fld, &u);

        self.reduce(Divisor { u, v })
    }

    fn reduce(&self, mut d: Divisor) -> Divisor {
        let fld = &self.fld;
        while d.u.degree() > Some(2) {
            // u' = (f - v^2) / u, v' = -v mod u'
            let num = self.f.sub(fld, &d.v.mul(fld, &d.v));
            let (u2, rem) = num.divrem(fld, &d.u);
            debug_assert!(rem.is_zero());
            let u2 = u2.monic(fld);
            let (_, v2) = d.v.scale(fld, &fld.neg(&1)).divrem(fld, &u2);
            d = Divisor { u: u2, v: v2 };
        }
        d.u = d.u.monic(fld);
        d
    }

    pub fn double(&self, d: &Divisor) -> Divisor {
        self.add(d, d)
    }

    pub fn scalar_mul(&self, n: u64, d: &Divisor) -> Divisor {
        let mut acc = Divisor::identity();
        let mut base = d.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.double(&base);
            n >>= 1;
        }
        acc
    }

    /// Membership check used by debug assertions and tests.
    pub fn is_valid(&self, d: &Divisor) -> bool {
        let fld = &self.fld;
        if d.u.leading() != Some(&1) {
            return false;
        }
        if d.v.degree() >= d.u.degree() && !d.v.is_zero() {
            return false;
        }
        let num = self.f.sub(fld, &d.v.mul(fld, &d.v));
        let (_, rem) = num.divrem(fld, &d.u);
        rem.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn jac(p: u64, f: &[i64]) -> Jacobian {
        let fld = PrimeField::new(p).unwrap();
        let coeffs = f.iter().map(|&c| fld.reduce_i64(c)).collect();
        Jacobian::new(fld, coeffs)
    }

    #[test]
    fn group_axioms_random() {
        let j = jac(101, &[1, 1, 0, 0, 0, 1]); // y^2 = x^5 + x + 1
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = j.random_divisor(&mut rng);
            let b = j.random_divisor(&mut rng);
            let c = j.random_divisor(&mut rng);
            assert!(j.is_valid(&a));
            // commutativity and associativity
            assert_eq!(j.add(&a, &b), j.add(&b, &a));
            assert_eq!(j.add(&j.add(&a, &b), &c), j.add(&a, &j.add(&b, &c)));
            // inverse
            assert!(j.add(&a, &j.neg(&a)).is_identity());
            // scalar mult consistency: 5D = 2D + 2D + D
            let d5 = j.scalar_mul(5, &a);
            let d2 = j.scalar_mul(2, &a);
            assert_eq!(d5, j.add(&j.add(&d2, &d2), &a));
        }
    }

    #[test]
    fn group_order_kills_every_divisor() {
        // y^2 = x^5 + x over F_7; N1 and N2 by brute force in-test, then
        // P(1) = p^2 + 1 - a(p+1) + b must kill random divisors.
        let p = 7i64;
        let f = |x: i64| (x.pow(5) + x).rem_euclid(p);
        let chi = |z: i64| -> i64 {
            if z % p == 0 {
                0
            } else if (1..p).any(|y| (y * y - z).rem_euclid(p) == 0) {
                1
            } else {
                -1
            }
        };
        let n1: i64 = (0..p).map(|x| 1 + chi(f(x))).sum::<i64>() + 1;
        // F_49 = F_7(t), t^2 = 3 (3 is a non-residue mod 7)
        let mut n2 = 1i64; // point at infinity
        for u in 0..p {
            for v in 0..p {
                // x = u + v t; compute f(x) = x^5 + x by repeated squaring
                let mul = |a: (i64, i64), b: (i64, i64)| {
                    (
                        (a.0 * b.0 + 3 * a.1 * b.1).rem_euclid(p),
                        (a.0 * b.1 + a.1 * b.0).rem_euclid(p),
                    )
                };
                let x = (u, v);
                let x2 = mul(x, x);
                let x4 = mul(x2, x2);
                let x5 = mul(x4, x);
                let fx = ((x5.0 + u).rem_euclid(p), (x5.1 + v).rem_euclid(p));
                // chi of F_49 via the norm to F_7
                let norm = (fx.0 * fx.0 - 3 * fx.1 * fx.1).rem_euclid(p);
                n2 += 1 + chi(norm);
            }
        }
        let a = p + 1 - n1;
        let s2 = p * p + 1 - n2;
        assert_eq!((a * a - s2) % 2, 0);
        let b = (a * a - s2) / 2;
        let order = (p * p + 1 - a * (p + 1) + b) as u64;

        let j = jac(7, &[0, 1, 0, 0, 0, 1]);
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..30 {
            let d = j.random_divisor(&mut rng);
            assert!(j.scalar_mul(order, &d).is_identity());
        }
    }
}
