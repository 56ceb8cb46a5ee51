//! Explicit small number fields E = Q[x]/(f), deg f <= 4, with exact
//! rational arithmetic, user-supplied automorphisms, and minimal polynomials
//! by linear algebra over Q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

pub type Q = BigRational;
/// Power-basis coordinates, lowest first, length = field degree.
pub type NfElement = Vec<Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberFieldError {
    #[error("defining polynomial must be monic with integer coefficients, degree 1..=4")]
    BadDefiningPoly,
    #[error("defining polynomial is reducible over Q")]
    Reducible,
    #[error("map does not permute the roots of the defining polynomial")]
    NotAnAutomorphism,
    #[error("automorphisms do not form a group under composition")]
    NotAGroup,
    #[error("no primitive element found by averaging")]
    DegenerateAveraging,
    #[error("supplied root of unity has the wrong order")]
    BadRootOfUnity,
}

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

pub fn poly_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_else(Q::zero)
                    + b.get(i).cloned().unwrap_or_else(Q::zero)
            })
            .collect(),
    )
}

pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn poly_divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = trim(a.to_vec());
    let mut quot = vec![Q::zero(); rem.len().saturating_sub(b.len() - 1)];
    while rem.len() >= b.len() {
        let c = rem.last().unwrap() / b.last().unwrap();
        let pos = rem.len() - b.len();
        for (j, bc) in b.iter().enumerate() {
            let t = &c * bc;
            rem[pos + j] -= t;
        }
        quot[pos] = c;
        rem = trim(rem);
        if rem.len() < b.len() {
            break;
        }
    }
    (trim(quot), rem)
}

fn poly_xgcd(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>, Vec<Q>) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![Q::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Q::one()]);
    while !r1.is_empty() {
        let (quot, rem) = poly_divrem(&r0, &r1);
        let ns = poly_add(
            &s0,
            &poly_mul(&quot, &s1).iter().map(|c| -c).collect::<Vec<_>>(),
        );
        let nt = poly_add(
            &t0,
            &poly_mul(&quot, &t1).iter().map(|c| -c).collect::<Vec<_>>(),
        );
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, ns);
        t0 = std::mem::replace(&mut t1, nt);
    }
    if let Some(l) = r0.last().cloned() {
        let inv = Q::one() / l;
        r0 = r0.iter().map(|c| c * &inv).collect();
        s0 = s0.iter().map(|c| c * &inv).collect();
        t0 = t0.iter().map(|c| c * &inv).collect();
    }
    (r0, s0, t0)
}

/// Substitute `inner` for the variable of `outer`.
pub fn poly_compose(outer: &[Q], inner: &[Q]) -> Vec<Q> {
    let mut acc = Vec::new();
    for c in outer.iter().rev() {
        acc = poly_mul(&acc, inner);
        acc = poly_add(&acc, &[c.clone()]);
    }
    acc
}

/// Irreducibility over Q of a monic integer polynomial of degree <= 4, by
/// Gauss's lemma: no integer root, and for quartics no monic integer
/// quadratic factor pair.
fn is_irreducible_monic_z(coeffs: &[BigInt]) -> bool {
    let d = coeffs.len() - 1;
    if d == 1 {
        return true;
    }
    let c0 = &coeffs[0];
    if c0.is_zero() {
        return false;
    }
    // rational (hence integer) roots divide the constant term
    for r in divisors_signed(c0) {
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &r + c;
        }
        if acc.is_zero() {
            return false;
        }
    }
    if d < 4 {
        return true; // degrees 2 and 3 without roots are irreducible
    }
    // x^4 + a3 x^3 + a2 x^2 + a1 x + a0 = (x^2 + p x + q)(x^2 + r x + s):
    // q s = a0, p + r = a3, q + s + p r = a2, p s + q r = a1
    let (a0, a1, a2, a3) = (&coeffs[0], &coeffs[1], &coeffs[2], &coeffs[3]);
    for qf in divisors_signed(a0) {
        let s = a0 / &qf;
        // p, r are the integer roots of t^2 - a3 t + (a2 - q - s), if any
        let b = a2 - &qf - &s;
        let disc = a3 * a3 - BigInt::from(4) * &b;
        if disc.sign() == num_bigint::Sign::Minus {
            continue;
        }
        let root = num_integer::Roots::sqrt(&disc);
        if &root * &root != disc {
            continue;
        }
        for pr in [(a3 + &root), (a3 - &root)] {
            if (&pr % BigInt::from(2)).is_zero() {
                let p = pr / BigInt::from(2);
                let r = a3 - &p;
                if &p * &s + &qf * &r == *a1 {
                    return false;
                }
            }
        }
    }
    true
}

fn divisors_signed(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(-d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e.clone());
                out.push(-e);
            }
        }
        d += 1;
    }
    out
}

/// The number field E = Q[x]/(defining), with its automorphisms given as
/// images of the generator, and optional primitive roots of unity of E
/// (needed only to embed character values of order > 2).
#[derive(Debug, Clone, PartialEq)]
pub struct NumberFieldSpec {
    defining: Vec<Q>,
    automorphisms: Vec<NfElement>,
    pub roots_of_unity: BTreeMap<u64, NfElement>,
}

impl NumberFieldSpec {
    /// `defining`: monic integer coefficients, lowest first, degree 1..=4.
    /// `automorphism_images`: image of the generator for each automorphism;
    /// the identity (image = x) is added when missing.
    pub fn new(
        defining: Vec<i64>,
        automorphism_images: Vec<Vec<Q>>,
    ) -> Result<Self, NumberFieldError> {
        let defining_z: Vec<BigInt> = defining.iter().map(|&c| BigInt::from(c)).collect();
        let d = defining.len().saturating_sub(1);
        if !(1..=4).contains(&d) || defining[d] != 1 {
            return Err(NumberFieldError::BadDefiningPoly);
        }
        if !is_irreducible_monic_z(&defining_z) {
            return Err(NumberFieldError::Reducible);
        }
        let defining: Vec<Q> = defining.iter().map(|&c| q(c)).collect();
        let mut spec = NumberFieldSpec {
            defining,
            automorphisms: Vec::new(),
            roots_of_unity: BTreeMap::new(),
        };
        let identity = spec.generator();
        let mut images = automorphism_images;
        if !images.iter().any(|im| spec.reduce(im.clone()) == identity) {
            images.insert(0, identity.clone());
        }
        for im in &images {
            let im = spec.reduce(im.clone());
            // f(sigma(x)) = 0 mod f: sigma permutes the roots
            let composed = poly_compose(&spec.defining, &im);
            let (_, rem) = poly_divrem(&composed, &spec.defining);
            if !rem.is_empty() {
                return Err(NumberFieldError::NotAnAutomorphism);
            }
            spec.automorphisms.push(im);
        }
        // distinct and closed under composition
        for i in 0..spec.automorphisms.len() {
            for j in 0..spec.automorphisms.len() {
                if i != j && spec.automorphisms[i] == spec.automorphisms[j] {
                    return Err(NumberFieldError::NotAGroup);
                }
                let comp = spec.compose_auts(i, j);
                if !spec.automorphisms.contains(&comp) {
                    return Err(NumberFieldError::NotAGroup);
                }
            }
        }
        Ok(spec)
    }

    /// Registers a primitive root of unity of exact order `order`.
    pub fn with_root_of_unity(
        mut self,
        order: u64,
        zeta: NfElement,
    ) -> Result<Self, NumberFieldError> {
        let zeta = self.reduce(zeta);
        let mut pow = zeta.clone();
        for _ in 1..order {
            if pow == self.one() {
                return Err(NumberFieldError::BadRootOfUnity);
            }
            pow = self.mul(&pow, &zeta);
        }
        if pow != self.one() {
            return Err(NumberFieldError::BadRootOfUnity);
        }
        self.roots_of_unity.insert(order, zeta);
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.defining.len() - 1
    }

    pub fn automorphism_count(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn automorphism_image(&self, idx: usize) -> &NfElement {
        &self.automorphisms[idx]
    }

    pub fn identity_aut(&self) -> usize {
        let g = self.generator();
        self.automorphisms.iter().position(|a| *a == g).unwrap()
    }

    pub fn zero(&self) -> NfElement {
        vec![Q::zero(); self.degree()]
    }

    pub fn one(&self) -> NfElement {
        self.from_rational(Q::one())
    }

    pub fn from_rational(&self, c: Q) -> NfElement {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    pub fn generator(&self) -> NfElement {
        let mut v = self.zero();
        if self.degree() == 1 {
            // Q itself: the generator is the root of the linear polynomial
            v[0] = -self.defining[0].clone();
        } else {
            v[1] = Q::one();
        }
        v
    }

    /// Pads/reduces arbitrary polynomial coordinates into the power basis.
    pub fn reduce(&self, coords: Vec<Q>) -> NfElement {
        let (_, rem) = poly_divrem(&coords, &self.defining);
        let mut v = rem;
        v.resize(self.degree(), Q::zero());
        v
    }

    pub fn is_zero(&self, a: &NfElement) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &NfElement, b: &NfElement) -> NfElement {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &NfElement, b: &NfElement) -> NfElement {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn mul(&self, a: &NfElement, b: &NfElement) -> NfElement {
        self.reduce(poly_mul(a, b))
    }

    pub fn scale(&self, a: &NfElement, c: &Q) -> NfElement {
        a.iter().map(|x| x * c).collect()
    }

    pub fn inv(&self, a: &NfElement) -> Option<NfElement> {
        if self.is_zero(a) {
            return None;
        }
        let (g, s, _) = poly_xgcd(&trim(a.clone()), &self.defining);
        if g.len() != 1 {
            return None; // cannot happen over an irreducible modulus
        }
        Some(self.reduce(s))
    }

    /// sigma(e) for the automorphism with index `idx`.
    pub fn apply_aut(&self, idx: usize, e: &NfElement) -> NfElement {
        self.reduce(poly_compose(e, &self.automorphisms[idx]))
    }

    /// Index of sigma . tau (apply tau first).
    pub fn compose_aut_indices(&self, sigma: usize, tau: usize) -> usize {
        let comp = self.compose_auts(sigma, tau);
        self.automorphisms
            .iter()
            .position(|a| *a == comp)
            .expect("automorphisms form a group")
    }

    fn compose_auts(&self, sigma: usize, tau: usize) -> NfElement {
        // (sigma tau)(x) = sigma(tau(x)) = tau_image evaluated at sigma_image
        self.reduce(poly_compose(
            &self.automorphisms[tau],
            &self.automorphisms[sigma],
        ))
    }

    /// Index of the inverse automorphism.
    pub fn invert_aut(&self, sigma: usize) -> usize {
        let id = self.identity_aut();
        (0..self.automorphisms.len())
            .find(|&t| self.compose_aut_indices(sigma, t) == id)
            .expect("group")
    }

    /// Monic minimal polynomial of `e` over Q, coefficients lowest first.
    pub fn minimal_polynomial(&self, e: &NfElement) -> Vec<Q> {
        let d = self.degree();
        // rows: 1, e, e^2, ..., e^k in the power basis; find first dependency
        let mut powers: Vec<NfElement> = vec![self.one()];
        for k in 1..=d {
            let prev = powers.last().unwrap();
            powers.push(self.mul(prev, e));
            if let Some(dep) = linear_dependency(&powers, d) {
                let _ = k;
                return dep;
            }
        }
        unreachable!("e^deg is always dependent on lower powers")
    }
}

/// Smallest monic dependency among the given power-basis vectors, if the
/// last vector is a combination of the earlier ones.
fn linear_dependency(powers: &[NfElement], dim: usize) -> Option<Vec<Q>> {
    let k = powers.len() - 1;
    // solve sum_{i<k} x_i powers[i] = -powers[k]
    let mut aug: Vec<Vec<Q>> = (0..dim)
        .map(|row| {
            let mut r: Vec<Q> = (0..k).map(|i| powers[i][row].clone()).collect();
            r.push(-powers[k][row].clone());
            r
        })
        .collect();
    let ncols = k;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..dim).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, p);
        let inv = Q::one() / aug[rank][col].clone();
        for c in 0..=ncols {
            aug[rank][c] = &aug[rank][c] * &inv;
        }
        for r in 0..dim {
            if r != rank && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..=ncols {
                    let t = &f * &aug[rank][c];
                    aug[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    for r in rank..dim {
        if !aug[r][ncols].is_zero() {
            return None; // inconsistent: powers[k] independent
        }
    }
    if pivots.len() < ncols {
        // earlier powers already dependent; handled at a smaller k
        return None;
    }
    let mut coeffs = vec![Q::zero(); k + 1];
    coeffs[k] = Q::one();
    for (r, &c) in pivots.iter().enumerate() {
        coeffs[c] = aug[r][ncols].clone();
    }
    Some(coeffs)
}

/// Convenience constructors for synthetic systems.
pub fn rational_field() -> NumberFieldSpec {
    NumberFieldSpec::new(vec![0, 1], vec![]).unwrap()
}

pub fn quadratic_field(d: i64) -> NumberFieldSpec {
    // x^2 - d with conjugation
    NumberFieldSpec::new(vec![-d, 0, 1], vec![vec![Q::zero(), q(-1)]]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_field_arithmetic() {
        let e = quadratic_field(2);
        assert_eq!(e.degree(), 2);
        assert_eq!(e.automorphism_count(), 2);
        let g = e.generator(); // sqrt(2)
        assert_eq!(e.mul(&g, &g), e.from_rational(q(2)));
        let conj = 1 - e.identity_aut();
        assert_eq!(e.apply_aut(conj, &g), e.scale(&g, &q(-1)));
        // inverse: 1/(1 + sqrt2) = sqrt2 - 1
        let x = e.add(&e.one(), &g);
        let xi = e.inv(&x).unwrap();
        assert_eq!(e.mul(&x, &xi), e.one());
        assert_eq!(xi, e.sub(&g, &e.one()));
    }

    #[test]
    fn irreducibility_guards() {
        // x^2 - 1 splits
        assert!(NumberFieldSpec::new(vec![-1, 0, 1], vec![]).is_err());
        // x^4 + 4 = (x^2-2x+2)(x^2+2x+2)
        assert!(NumberFieldSpec::new(vec![4, 0, 0, 0, 1], vec![]).is_err());
        // x^4 - 10x^2 + 1 is irreducible (biquadratic primitive element)
        assert!(NumberFieldSpec::new(vec![1, 0, -10, 0, 1], vec![]).is_ok());
        // x^4 + 1 is irreducible
        assert!(NumberFieldSpec::new(vec![1, 0, 0, 0, 1], vec![]).is_ok());
        // non-monic rejected
        assert!(NumberFieldSpec::new(vec![1, 0, 2], vec![]).is_err());
    }

    #[test]
    fn non_automorphism_rejected() {
        // x -> x + 1 does not fix x^2 - 2
        assert!(NumberFieldSpec::new(vec![-2, 0, 1], vec![vec![q(1), q(1)]]).is_err());
    }

    #[test]
    fn biquadratic_klein_four() {
        let e = biquadratic_sqrt2_sqrt3();
        assert_eq!(e.automorphism_count(), 4);
        // every non-identity automorphism is an involution
        let id = e.identity_aut();
        for s in 0..4 {
            let sq = e.compose_aut_indices(s, s);
            assert_eq!(sq, id);
        }
    }

    pub(super) fn biquadratic_sqrt2_sqrt3() -> NumberFieldSpec {
        // generator g = sqrt2 + sqrt3, minimal polynomial x^4 - 10x^2 + 1;
        // sigma: sqrt2 -> -sqrt2 sends g to 10g - g^3, tau: sqrt3 -> -sqrt3
        // sends g to g^3 - 10g, sigma tau sends g to -g
        NumberFieldSpec::new(
            vec![1, 0, -10, 0, 1],
            vec![
                vec![q(0), q(10), q(0), q(-1)],
                vec![q(0), q(-10), q(0), q(1)],
                vec![q(0), q(-1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn minimal_polynomials() {
        let e = quadratic_field(2);
        let g = e.generator();
        assert_eq!(e.minimal_polynomial(&g), vec![q(-2), q(0), q(1)]);
        assert_eq!(
            e.minimal_polynomial(&e.from_rational(q(7))),
            vec![q(-7), q(1)]
        );
        let b = biquadratic_sqrt2_sqrt3();
        assert_eq!(
            b.minimal_polynomial(&b.generator()),
            vec![q(1), q(0), q(-10), q(0), q(1)]
        );
        // sqrt2 = (g^3 - 9g)/2 has minimal polynomial x^2 - 2
        let sqrt2 = b.reduce(vec![q(0), -q(9) / q(2), q(0), q(1) / q(2)]);
        assert_eq!(b.minimal_polynomial(&sqrt2), vec![q(-2), q(0), q(1)]);
        assert_eq!(b.mul(&sqrt2, &sqrt2), b.from_rational(q(2)));
    }

    #[test]
    fn roots_of_unity_registration() {
        // Q(i): x^2 + 1, i has order 4
        let e = NumberFieldSpec::new(vec![1, 0, 1], vec![vec![Q::zero(), q(-1)]]).unwrap();
        let i = e.generator();
        let e = e.with_root_of_unity(4, i).unwrap();
        assert!(e.roots_of_unity.contains_key(&4));
        // wrong order rejected
        let e2 = NumberFieldSpec::new(vec![1, 0, 1], vec![]).unwrap();
        let g = e2.generator();
        assert!(e2.with_root_of_unity(2, g).is_err());
    }
}
