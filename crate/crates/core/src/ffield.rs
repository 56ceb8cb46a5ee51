//! Exact arithmetic in prime fields `F_l`, small extension fields `F_{l^k}`
//! (k <= 4) and univariate polynomials over them, plus exact big-integer
//! resultants and discriminants.
//!
//! Fields are value objects implementing [`Field`]; elements are plain data
//! (`u64` for prime fields, a fixed coordinate array for extensions) so the
//! enumeration kernels in `gsp4`/`census` monomorphise to tight word
//! arithmetic.

use crate::arith::{addmod, invmod, is_prime_u64, mulmod, submod};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("undefined roots of the zero polynomial")]
    ZeroPolynomial,
    #[error("degree too small")]
    DegreeTooSmall,
    #[error("defining polynomial of degree {degree} is not irreducible over F_{ell}")]
    ReducibleDefiningPoly { ell: u64, degree: usize },
    #[error("extension degree {0} unsupported (k <= 4)")]
    DegreeUnsupported(usize),
}

/// A finite field together with arithmetic on its element type.
pub trait Field {
    type El: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug;

    fn order(&self) -> u64;
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    /// Embedding of the rational integer `v` through the prime subfield.
    fn from_u64(&self, v: u64) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    /// None iff `a == 0`.
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
    /// Every element exactly once, deterministic order starting with 0.
    fn elements(&self) -> Vec<Self::El>;

    fn pow(&self, a: &Self::El, mut e: u64) -> Self::El {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_unit(&self, a: &Self::El) -> bool {
        !self.is_zero(a)
    }
}

/// The prime field `F_l`, elements are `u64` residues in `[0, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    ell: u64,
}

impl PrimeField {
    pub fn new(ell: u64) -> Result<Self, FieldError> {
        if ell < 3 || !is_prime_u64(ell) {
            return Err(FieldError::NotOddPrime(ell));
        }
        Ok(PrimeField { ell })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.ell as i64) as u64
    }
}

impl Field for PrimeField {
    type El = u64;

    fn order(&self) -> u64 {
        self.ell
    }
    fn characteristic(&self) -> u64 {
        self.ell
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.ell
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        addmod(*a, *b, self.ell)
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        submod(*a, *b, self.ell)
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.ell)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.ell - *a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(invmod(*a, self.ell))
        }
    }
    fn elements(&self) -> Vec<u64> {
        (0..self.ell).collect()
    }
}

/// Coordinates of an `F_{l^k}` element in the fixed polynomial basis,
/// constant term first; slots past `k-1` stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtEl(pub [u64; 4]);

/// `F_{l^k}` presented as `F_l[x]/(defining)`, `defining` monic irreducible
/// of degree `k <= 4`, coefficients lowest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    base: PrimeField,
    k: usize,
    defining: Vec<u64>,
}

impl ExtField {
    /// Verifies the defining polynomial is monic irreducible of degree `<= 4`.
    pub fn new(ell: u64, defining: Vec<u64>) -> Result<Self, FieldError> {
        let base = PrimeField::new(ell)?;
        let k = defining.len().saturating_sub(1);
        if k == 0 || k > 4 {
            return Err(FieldError::DegreeUnsupported(k));
        }
        if defining[k] != 1 || defining.iter().any(|&c| c >= ell) {
            return Err(FieldError::ReducibleDefiningPoly { ell, degree: k });
        }
        let f = Poly::new(&base, defining.clone());
        if !is_irreducible(&base, &f) {
            return Err(FieldError::ReducibleDefiningPoly { ell, degree: k });
        }
        Ok(ExtField { base, k, defining })
    }

    /// The field with the lexicographically least monic irreducible defining
    /// polynomial of degree `k`, a fixed reproducible table.
    pub fn with_least_defining(ell: u64, k: usize) -> Result<Self, FieldError> {
        let base = PrimeField::new(ell)?;
        if k == 0 || k > 4 {
            return Err(FieldError::DegreeUnsupported(k));
        }
        if k == 1 {
            // x itself: F_l presented as a degree-1 extension.
            return Ok(ExtField {
                base,
                k,
                defining: vec![0, 1],
            });
        }
        for code in 0..ell.pow(k as u32) {
            let mut coeffs = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                coeffs.push(c % ell);
                c /= ell;
            }
            coeffs.push(1);
            let f = Poly::new(&base, coeffs.clone());
            if is_irreducible(&base, &f) {
                return Ok(ExtField {
                    base,
                    k,
                    defining: coeffs,
                });
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_l")
    }

    pub fn ell(&self) -> u64 {
        self.base.ell()
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn defining_poly(&self) -> &[u64] {
        &self.defining
    }

    pub fn from_coords(&self, coords: &[u64]) -> ExtEl {
        let mut a = [0u64; 4];
        for (i, &c) in coords.iter().take(self.k).enumerate() {
            a[i] = c % self.ell();
        }
        ExtEl(a)
    }

    /// Reduces slots `k..` of a raw product back into the basis.
    fn reduce(&self, raw: &mut [u64; 8]) {
        let ell = self.ell();
        for i in (self.k..8).rev() {
            let c = raw[i];
            if c == 0 {
                continue;
            }
            raw[i] = 0;
            // x^i = x^(i-k) * (x^k) = -x^(i-k) * (defining - x^k)
            for j in 0..self.k {
                let t = mulmod(c, self.defining[j], ell);
                raw[i - self.k + j] = submod(raw[i - self.k + j], t, ell);
            }
        }
    }
}

impl Field for ExtField {
    type El = ExtEl;

    fn order(&self) -> u64 {
        self.ell().pow(self.k as u32)
    }
    fn characteristic(&self) -> u64 {
        self.ell()
    }
    fn zero(&self) -> ExtEl {
        ExtEl([0; 4])
    }
    fn one(&self) -> ExtEl {
        let mut a = [0; 4];
        a[0] = 1 % self.ell();
        ExtEl(a)
    }
    fn from_u64(&self, v: u64) -> ExtEl {
        let mut a = [0; 4];
        a[0] = v % self.ell();
        ExtEl(a)
    }
    fn is_zero(&self, a: &ExtEl) -> bool {
        a.0 == [0; 4]
    }
    fn add(&self, a: &ExtEl, b: &ExtEl) -> ExtEl {
        let ell = self.ell();
        let mut out = [0; 4];
        for i in 0..self.k {
            out[i] = addmod(a.0[i], b.0[i], ell);
        }
        ExtEl(out)
    }
    fn sub(&self, a: &ExtEl, b: &ExtEl) -> ExtEl {
        let ell = self.ell();
        let mut out = [0; 4];
        for i in 0..self.k {
            out[i] = submod(a.0[i], b.0[i], ell);
        }
        ExtEl(out)
    }
    fn mul(&self, a: &ExtEl, b: &ExtEl) -> ExtEl {
        let ell = self.ell();
        let mut raw = [0u64; 8];
        for i in 0..self.k {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.k {
                raw[i + j] = addmod(raw[i + j], mulmod(a.0[i], b.0[j], ell), ell);
            }
        }
        self.reduce(&mut raw);
        ExtEl([raw[0], raw[1], raw[2], raw[3]])
    }
    fn neg(&self, a: &ExtEl) -> ExtEl {
        let ell = self.ell();
        let mut out = [0; 4];
        for i in 0..self.k {
            out[i] = if a.0[i] == 0 { 0 } else { ell - a.0[i] };
        }
        ExtEl(out)
    }
    fn inv(&self, a: &ExtEl) -> Option<ExtEl> {
        if self.is_zero(a) {
            return None;
        }
        // a^(q-2) keeps the code path branch-free; q <= l^4 stays tiny here.
        Some(self.pow(a, self.order() - 2))
    }
    fn elements(&self) -> Vec<ExtEl> {
        let ell = self.ell();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut coords = [0u64; 4];
        loop {
            out.push(ExtEl(coords));
            let mut i = 0;
            loop {
                if i == self.k {
                    return out;
                }
                coords[i] += 1;
                if coords[i] < ell {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }
}

/// Dense univariate polynomial over `F`, coefficients lowest degree first,
/// no trailing zeros (the zero polynomial has an empty coefficient vector).
pub struct Poly<F: Field> {
    pub coeffs: Vec<F::El>,
}

// manual impls: derives would demand the field type itself be Clone/Eq
impl<F: Field> Clone for Poly<F> {
    fn clone(&self) -> Self {
        Poly {
            coeffs: self.coeffs.clone(),
        }
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> std::fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly({:?})", self.coeffs)
    }
}

impl<F: Field> Poly<F> {
    pub fn new(f: &F, mut coeffs: Vec<F::El>) -> Self {
        while coeffs.last().map(|c| f.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F::El> {
        self.coeffs.last()
    }

    pub fn eval(&self, f: &F, x: &F::El) -> F::El {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    pub fn add(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| f.zero());
            out.push(f.add(&a, &b));
        }
        Poly::new(f, out)
    }

    pub fn sub(&self, f: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| f.zero());
            out.push(f.sub(&a, &b));
        }
        Poly::new(f, out)
    }

    pub fn mul(&self, f: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn scale(&self, f: &F, c: &F::El) -> Self {
        Poly::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Quotient and remainder; panics if `divisor` is zero.
    pub fn divrem(&self, f: &F, divisor: &Self) -> (Self, Self) {
        let dlead = divisor.leading().expect("division by the zero polynomial");
        let dinv = f.inv(dlead).expect("leading coefficient must be a unit");
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); self.coeffs.len().saturating_sub(ddeg)];
        while rem.len() > ddeg && !rem.is_empty() {
            let top = rem.last().unwrap().clone();
            let pos = rem.len() - 1 - ddeg;
            if !f.is_zero(&top) {
                let q = f.mul(&top, &dinv);
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[pos + j] = f.sub(&rem[pos + j], &f.mul(&q, d));
                }
                quot[pos] = q;
            }
            rem.pop();
        }
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn derivative(&self, f: &F) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(&f.from_u64(i as u64), c))
            .collect();
        Poly::new(f, out)
    }

    pub fn monic(&self, f: &F) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(f, &f.inv(l).expect("unit leading coefficient")),
        }
    }

    pub fn gcd(&self, f: &F, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Extended gcd: returns monic `g` and `(s, t)` with `s*self + t*other = g`.
    pub fn xgcd(&self, f: &F, other: &Self) -> (Self, Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Poly::new(f, vec![f.one()]);
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::new(f, vec![f.one()]);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(f, &r1);
            let s = s0.sub(f, &q.mul(f, &s1));
            let t = t0.sub(f, &q.mul(f, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let linv = f.inv(l).expect("unit leading coefficient");
                (r0.scale(f, &linv), s0.scale(f, &linv), t0.scale(f, &linv))
            }
        }
    }

    /// `x^e mod self` by square and multiply.
    pub fn x_pow_mod(f: &F, e: u64, modulus: &Self) -> Self {
        let x = Poly::new(f, vec![f.zero(), f.one()]);
        let mut acc = Poly::new(f, vec![f.one()]);
        let mut base = x.divrem(f, modulus).1;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).divrem(f, modulus).1;
            }
            base = base.mul(f, &base).divrem(f, modulus).1;
            e >>= 1;
        }
        acc
    }

    /// Synthetic division by `(x - r)`; the caller guarantees `r` is a root.
    pub fn deflate(&self, f: &F, r: &F::El) -> Self {
        let d = self.degree().expect("deflating the zero polynomial");
        let mut out = vec![f.zero(); d];
        let mut carry = f.zero();
        for i in (0..=d).rev() {
            let c = f.add(&self.coeffs[i], &f.mul(&carry, r));
            if i > 0 {
                out[i - 1] = c.clone();
            }
            carry = c;
        }
        Poly::new(f, out)
    }
}

/// Irreducibility over `F_l` for degree `<= 4`: no factor of degree
/// `<= deg/2`, tested via gcd with `x^(l^j) - x`.
pub fn is_irreducible(f: &PrimeField, poly: &Poly<PrimeField>) -> bool {
    let d = match poly.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x = Poly::new(f, vec![0, 1]);
    for j in 1..=(d / 2) {
        let e = f.ell().pow(j as u32);
        let xq = Poly::x_pow_mod(f, e, poly);
        let g = xq.sub(f, &x).gcd(f, poly);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Every root in the coefficient field with multiplicity, found by repeated
/// deflation. Errors on the zero polynomial.
pub fn roots_in_field<F: Field>(f: &F, poly: &Poly<F>) -> Result<Vec<F::El>, FieldError> {
    if poly.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    let mut work = poly.clone();
    for e in f.elements() {
        while !work.is_zero() && work.degree() >= Some(1) && f.is_zero(&work.eval(f, &e)) {
            work = work.deflate(f, &e);
            roots.push(e.clone());
        }
    }
    Ok(roots)
}

/// True iff `poly` splits into linear factors over the coefficient field and
/// none of its roots is zero. Non-monic input is normalised internally.
pub fn splits_completely_nonzero<F: Field>(f: &F, poly: &Poly<F>) -> Result<bool, FieldError> {
    if poly.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let p = poly.monic(f);
    let d = p.degree().unwrap();
    if d == 0 {
        return Ok(true);
    }
    if f.is_zero(&p.eval(f, &f.zero())) {
        return Ok(false);
    }
    let roots = roots_in_field(f, &p)?;
    Ok(roots.len() == d)
}

// ---------------------------------------------------------------------------
// Exact integer polynomials: resultants and discriminants
// ---------------------------------------------------------------------------

/// Drops trailing zero coefficients (lowest degree first convention).
fn trim_z(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().map(|x| x.is_zero()).unwrap_or(false) {
        c.pop();
    }
    c
}

/// Resultant of two integer polynomials via Bareiss elimination of the
/// Sylvester matrix (fraction-free, exact).
pub fn resultant_z(fc: &[BigInt], gc: &[BigInt]) -> BigInt {
    let fc = trim_z(fc.to_vec());
    let gc = trim_z(gc.to_vec());
    let (m, n) = (fc.len() - 1, gc.len() - 1);
    if m == 0 {
        return fc[0].pow(n as u32);
    }
    if n == 0 {
        return gc[0].pow(m as u32);
    }
    let size = m + n;
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (j, c) in fc.iter().rev().enumerate() {
            a[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in gc.iter().rev().enumerate() {
            a[n + row][row + j] = c.clone();
        }
    }
    bareiss_det(a)
}

/// Exact determinant of an integer matrix by fraction-free Gaussian
/// elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Discriminant of an integer polynomial of degree >= 2:
/// `(-1)^(d(d-1)/2) * Res(f, f') / lc(f)`.
pub fn discriminant_z(fc: &[BigInt]) -> Result<BigInt, FieldError> {
    let fc = trim_z(fc.to_vec());
    if fc.len() < 3 {
        return Err(FieldError::DegreeTooSmall);
    }
    let d = fc.len() - 1;
    let deriv: Vec<BigInt> = fc
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant_z(&fc, &deriv);
    let lc = fc.last().unwrap();
    let signed = if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    };
    Ok(signed / lc)
}

/// Convenience wrapper for i64 coefficient vectors (lowest first).
pub fn discriminant_i64(fc: &[i64]) -> Result<BigInt, FieldError> {
    let v: Vec<BigInt> = fc.iter().map(|&c| BigInt::from(c)).collect();
    discriminant_z(&v)
}

/// Reduction of an integer polynomial mod l, lowest first.
pub fn reduce_poly_mod(fc: &[BigInt], f: &PrimeField) -> Poly<PrimeField> {
    let ell = BigInt::from(f.ell());
    let coeffs = fc
        .iter()
        .map(|c| {
            let mut r = c % &ell;
            if r.is_negative() {
                r += &ell;
            }
            let (_, digits) = r.to_u64_digits();
            digits.first().copied().unwrap_or(0)
        })
        .collect();
    Poly::new(f, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(ell: u64) -> PrimeField {
        PrimeField::new(ell).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(5).is_ok());
    }

    #[test]
    fn roots_x2_minus_1_mod_5() {
        let f = fp(5);
        let p = Poly::new(&f, vec![4, 0, 1]); // x^2 - 1
        let mut r = roots_in_field(&f, &p).unwrap();
        r.sort_unstable();
        assert_eq!(r, vec![1, 4]);
    }

    #[test]
    fn roots_x4_minus_2_mod_5_empty() {
        let f = fp(5);
        let p = Poly::new(&f, vec![3, 0, 0, 0, 1]); // x^4 - 2
        assert!(roots_in_field(&f, &p).unwrap().is_empty());
    }

    #[test]
    fn roots_with_multiplicity_mod_7() {
        let f = fp(7);
        // (x-2)^3 (x-3)
        let lin2 = Poly::new(&f, vec![5, 1]);
        let lin3 = Poly::new(&f, vec![4, 1]);
        let p = lin2.mul(&f, &lin2).mul(&f, &lin2).mul(&f, &lin3);
        let mut r = roots_in_field(&f, &p).unwrap();
        r.sort_unstable();
        assert_eq!(r, vec![2, 2, 2, 3]);
    }

    #[test]
    fn roots_of_zero_poly_error() {
        let f = fp(5);
        assert_eq!(
            roots_in_field(&f, &Poly::zero()),
            Err(FieldError::ZeroPolynomial)
        );
    }

    #[test]
    fn splits_examples() {
        let f5 = fp(5);
        // (x-1)^4
        let lin = Poly::new(&f5, vec![4, 1]);
        let p = lin.mul(&f5, &lin).mul(&f5, &lin).mul(&f5, &lin);
        assert!(splits_completely_nonzero(&f5, &p).unwrap());
        // x^4 - 2 has no roots mod 5
        let q = Poly::new(&f5, vec![3, 0, 0, 0, 1]);
        assert!(!splits_completely_nonzero(&f5, &q).unwrap());
        // root zero excluded
        let f7 = fp(7);
        let x = Poly::new(&f7, vec![0, 1]);
        let m = x
            .mul(&f7, &Poly::new(&f7, vec![6, 1]))
            .mul(&f7, &Poly::new(&f7, vec![5, 1]))
            .mul(&f7, &Poly::new(&f7, vec![4, 1]));
        assert!(!splits_completely_nonzero(&f7, &m).unwrap());
        // non-monic input is normalised
        let scaled = p.scale(&f5, &3);
        assert!(splits_completely_nonzero(&f5, &scaled).unwrap());
    }

    #[test]
    fn discriminant_examples() {
        // x^2 - 5 -> 20
        assert_eq!(discriminant_i64(&[-5, 0, 1]).unwrap(), BigInt::from(20));
        // x^3 - x -> 4
        assert_eq!(discriminant_i64(&[0, -1, 0, 1]).unwrap(), BigInt::from(4));
        // x^4 + 1 -> 256
        assert_eq!(
            discriminant_i64(&[1, 0, 0, 0, 1]).unwrap(),
            BigInt::from(256)
        );
        // degree guard
        assert!(discriminant_i64(&[1, 1]).is_err());
    }

    #[test]
    fn ext_field_arithmetic() {
        let f9 = ExtField::with_least_defining(3, 2).unwrap();
        assert_eq!(f9.order(), 9);
        let els = f9.elements();
        assert_eq!(els.len(), 9);
        // every nonzero element has an inverse, and x * x^-1 = 1
        for e in &els {
            if f9.is_zero(e) {
                continue;
            }
            let i = f9.inv(e).unwrap();
            assert_eq!(f9.mul(e, &i), f9.one());
        }
        // multiplicative group has order q - 1
        for e in &els {
            if !f9.is_zero(e) {
                assert_eq!(f9.pow(e, 8), f9.one());
            }
        }
    }

    #[test]
    fn ext_field_degree_four() {
        let f = ExtField::with_least_defining(5, 4).unwrap();
        assert_eq!(f.order(), 625);
        let g = f.from_coords(&[2, 1, 0, 3]);
        assert_eq!(f.pow(&g, 624), f.one());
        assert_eq!(f.mul(&g, &f.inv(&g).unwrap()), f.one());
    }

    #[test]
    fn reducible_defining_rejected() {
        // x^2 - 1 = (x-1)(x+1) over F_5
        assert!(ExtField::new(5, vec![4, 0, 1]).is_err());
        // x^2 + 2 is irreducible over F_5 (-2 is not a QR mod 5)
        assert!(ExtField::new(5, vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn divrem_roundtrip() {
        let f = fp(13);
        let a = Poly::new(&f, vec![3, 1, 4, 1, 5, 9, 2]);
        let b = Poly::new(&f, vec![7, 0, 2, 1]);
        let (q, r) = a.divrem(&f, &b);
        let back = q.mul(&f, &b).add(&f, &r);
        assert_eq!(back, a);
        assert!(r.degree() < b.degree());
    }
}
