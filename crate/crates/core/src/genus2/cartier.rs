//! Cartier-Manin matrix of y^2 = f(x) mod p in O(p) time.
//!
//! With h = f^m, m = (p-1)/2, the identity f h' = m f' h forces the linear
//! recurrence
//!
//! ```text
//!   sum_{j=0..d} f_j (i - j(m+1)) c_{i-j} = 0        (c_k = [x^k] h)
//! ```
//!
//! which is run upward from c_0 = f(0)^m for c_{p-1}, c_{p-2} (all indices
//! i < p, so f(0) i stays invertible) and downward from c_{dm} = lc(f)^m for
//! c_{2p-1}, c_{2p-2} (the first downward singularity sits at dm - p, which
//! is below 2p - 2 for both d = 5 and d = 6). The matrix
//!
//! ```text
//!   M = ( c_{p-1}   c_{p-2}  )
//!       ( c_{2p-1}  c_{2p-2} )
//! ```
//!
//! determines the Frobenius characteristic polynomial mod p:
//! X^4 - a X^3 + b X^2 - a p X + p^2 = X^2 (X^2 - tr(M) X + det(M)) mod p.

use crate::arith::{invmod, mulmod, submod};

/// (a mod p, b mod p) for y^2 = f(x), f given by its residues mod p, lowest
/// first, with f[0] != 0 and lc(f) != 0 mod p. Callers shift x when f(0) = 0.
pub fn charpoly_mod_p(fbar: &[u64], p: u64) -> (u64, u64) {
    let m = cartier_manin_matrix(fbar, p);
    let tr = (m[0][0] + m[1][1]) % p;
    let det = submod(mulmod(m[0][0], m[1][1], p), mulmod(m[0][1], m[1][0], p), p);
    (tr, det)
}

/// The 2x2 matrix of coefficients [[c_{p-1}, c_{p-2}], [c_{2p-1}, c_{2p-2}]]
/// of f^((p-1)/2) mod p.
pub fn cartier_manin_matrix(fbar: &[u64], p: u64) -> [[u64; 2]; 2] {
    let d = fbar.len() - 1;
    debug_assert!(d == 5 || d == 6);
    debug_assert!(fbar[0] % p != 0, "constant term must be a unit");
    debug_assert!(fbar[d] % p != 0, "leading term must be a unit");
    let m = (p - 1) / 2;
    let m1 = (m + 1) % p;

    // upward: ring buffer of the last d+1 coefficients, c_0 = f0^m
    let f0_inv = invmod(fbar[0], p);
    let mut win = vec![0u64; d + 1];
    win[0] = crate::arith::powmod(fbar[0], m, p);
    let (mut c_pm1, mut c_pm2) = (0u64, 0u64);
    for i in 1..p {
        // c_i = -(1/(f0 i)) sum_{j=1..d} f_j (i - j(m+1)) c_{i-j}
        let mut acc = 0u64;
        for j in 1..=d.min(i as usize) {
            let cij = win[(i as usize - j) % (d + 1)];
            if cij == 0 || fbar[j] == 0 {
                continue;
            }
            let coeff = submod(i % p, mulmod(j as u64 % p, m1, p), p);
            acc = (acc + mulmod(mulmod(fbar[j], coeff, p), cij, p)) % p;
        }
        let ci = if acc == 0 {
            0
        } else {
            let scale = mulmod(f0_inv, invmod(i % p, p), p);
            p - mulmod(acc, scale, p)
        };
        win[i as usize % (d + 1)] = ci;
        if i == p - 1 {
            c_pm1 = ci;
        }
        if i == p - 2 {
            c_pm2 = ci;
        }
    }

    // downward from the top coefficient c_{dm} = lc^m, zeros above
    let dm = d as u64 * m;
    let fd_inv = invmod(fbar[d], p);
    let mut high = vec![0u64; d + 1]; // high[k % (d+1)] = c_k for the window above
    high[(dm % (d + 1) as u64) as usize] = crate::arith::powmod(fbar[d], m, p);
    let (mut c2pm1, mut c2pm2) = (0u64, 0u64);
    if dm == 2 * p - 1 {
        c2pm1 = high[(dm % (d + 1) as u64) as usize];
    }
    let mut k = dm;
    while k > 2 * p - 2 {
        k -= 1;
        // c_k = -(1/(f_d (k - dm))) sum_{j=0..d-1} f_j (k + d - j(m+1)) c_{k+d-j}
        let mut acc = 0u64;
        for j in 0..d {
            let idx = k + d as u64 - j as u64;
            if idx > dm {
                continue;
            }
            let c = high[(idx % (d + 1) as u64) as usize];
            if c == 0 || fbar[j] == 0 {
                continue;
            }
            let coeff = submod((k + d as u64) % p, mulmod(j as u64 % p, m1, p), p);
            acc = (acc + mulmod(mulmod(fbar[j], coeff, p), c, p)) % p;
        }
        let denom = submod(k % p, dm % p, p);
        debug_assert!(denom != 0, "downward recurrence hit its singularity");
        let ck = if acc == 0 {
            0
        } else {
            let scale = mulmod(fd_inv, invmod(denom, p), p);
            p - mulmod(acc, scale, p)
        };
        high[(k % (d + 1) as u64) as usize] = ck;
        if k == 2 * p - 1 {
            c2pm1 = ck;
        }
        if k == 2 * p - 2 {
            c2pm2 = ck;
        }
    }

    [[c_pm1, c_pm2], [c2pm1, c2pm2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{mulmod, sieve_primes};

    /// Oracle: expand f^((p-1)/2) mod p by schoolbook multiplication.
    fn power_coeffs_oracle(fbar: &[u64], p: u64) -> Vec<u64> {
        let m = (p - 1) / 2;
        let mut acc = vec![1u64];
        for _ in 0..m {
            let mut next = vec![0u64; acc.len() + fbar.len() - 1];
            for (i, &a) in acc.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in fbar.iter().enumerate() {
                    next[i + j] = (next[i + j] + mulmod(a, b, p)) % p;
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn recurrence_matches_expansion_oracle() {
        for &p in &sieve_primes(60)[1..] {
            // a few fixed quintics and sextics with unit ends mod p
            for f in [
                vec![1u64, 1, 0, 0, 0, 1],
                vec![2, 0, 1, 3, 0, 1],
                vec![1, 2, 3, 4, 5, 6, 1],
                vec![3, 0, 0, 1, 0, 0, 2],
            ] {
                let fbar: Vec<u64> = f.iter().map(|&c| c % p).collect();
                if fbar[0] == 0 || *fbar.last().unwrap() == 0 {
                    continue;
                }
                let oracle = power_coeffs_oracle(&fbar, p);
                let at = |k: u64| oracle.get(k as usize).copied().unwrap_or(0);
                let m = cartier_manin_matrix(&fbar, p);
                assert_eq!(m[0][0], at(p - 1), "c_(p-1) at p={p} f={fbar:?}");
                assert_eq!(m[0][1], at(p - 2), "c_(p-2) at p={p}");
                assert_eq!(m[1][0], at(2 * p - 1), "c_(2p-1) at p={p}");
                assert_eq!(m[1][1], at(2 * p - 2), "c_(2p-2) at p={p}");
            }
        }
    }
}
