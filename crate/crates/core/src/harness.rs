//! The Lang-Trotter harness: pi_f(x, a) = #{p <= x : a_p = a} and its
//! splitting-restricted refinement pi(x, a; l), tabulated from Frobenius
//! records against the theorem bound curves.
//!
//! Counting paths are integer-exact; floating point only enters the bound
//! columns.

use crate::chebotarev::{alpha_value, bound_curve_grh, bound_curve_unconditional, Regime};
use crate::ffield::{reduce_poly_mod, roots_in_field, splits_completely_nonzero, PrimeField};
use crate::genus2::FrobeniusRecord;
use crate::twists::KernelField;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("records must be sorted by p")]
    Unsorted,
    #[error("x grid must be strictly increasing")]
    BadGrid,
    #[error("l = {0} divides the level")]
    EllDividesLevel(u64),
    #[error(transparent)]
    Field(#[from] crate::ffield::FieldError),
}

/// One row of the count table with its bound columns.
#[derive(Debug, Clone, PartialEq)]
pub struct LTCount {
    pub x: f64,
    pub a: i64,
    pub count: u64,
    pub bound_unconditional: f64,
    pub bound_grh: f64,
}

/// Twist data attached to an eigenvalue system: the kernel field K with its
/// split test, [K:Q], and optionally the minimal polynomial of F for the
/// "l splits completely in F" filter.
#[derive(Debug, Clone)]
pub struct TwistDatum {
    pub kernel: KernelField,
    pub f_minpoly: Option<Vec<i64>>,
}

impl TwistDatum {
    /// l splits completely in F: the minimal polynomial of F has deg-many
    /// distinct roots mod l. Trivially true for F = Q.
    pub fn ell_splits_in_f(&self, ell: u64) -> Result<bool, HarnessError> {
        let Some(minpoly) = &self.f_minpoly else {
            return Ok(true);
        };
        let fld = PrimeField::new(ell)?;
        let coeffs: Vec<BigInt> = minpoly.iter().map(|&c| BigInt::from(c)).collect();
        let poly = reduce_poly_mod(&coeffs, &fld);
        if poly.degree() != Some(minpoly.len() - 1) {
            return Ok(false); // leading coefficient vanished mod l
        }
        let roots = roots_in_field(&fld, &poly)?;
        let mut distinct = roots.clone();
        distinct.sort_unstable();
        distinct.dedup();
        Ok(roots.len() == minpoly.len() - 1 && distinct.len() == roots.len())
    }
}

fn check_sorted(records: &[FrobeniusRecord]) -> Result<(), HarnessError> {
    if records.windows(2).all(|w| w[0].p < w[1].p) {
        Ok(())
    } else {
        Err(HarnessError::Unsorted)
    }
}

/// Exact counts of {p <= x : a_p = a} along the grid, with the two bound
/// curves filled from the closed-form exponents for the given n.
pub fn tabulate_pi_f(
    records: &[FrobeniusRecord],
    a: i64,
    x_grid: &[f64],
    n: u64,
    epsilon: f64,
) -> Result<Vec<LTCount>, HarnessError> {
    check_sorted(records)?;
    if x_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::BadGrid);
    }
    let alpha_u = ratio_f64(alpha_value(n, Regime::Unconditional, a == 0));
    let alpha_g = ratio_f64(alpha_value(n, Regime::Grh, a == 0));
    let mut out = Vec::with_capacity(x_grid.len());
    let mut idx = 0usize;
    let mut count = 0u64;
    for &x in x_grid {
        while idx < records.len() && (records[idx].p as f64) <= x {
            if records[idx].a == a {
                count += 1;
            }
            idx += 1;
        }
        out.push(LTCount {
            x,
            a,
            count,
            bound_unconditional: bound_curve_unconditional(x, alpha_u, epsilon),
            bound_grh: bound_curve_grh(x, alpha_g),
        });
    }
    Ok(out)
}

fn ratio_f64(r: num_rational::Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PiXalCount {
    /// the count, scaled by [K:Q] when twist data is attached
    pub count: u64,
    /// audit column: records excluded because p | l N
    pub excluded: u64,
}

/// pi(x, a; l): primes p <= x with a_p = a whose Frobenius quartic splits
/// into linear factors with nonzero roots mod l. With twist data attached,
/// only primes passing the kernel-field split test count, scaled by [K:Q].
pub fn pi_x_a_l(
    records: &[FrobeniusRecord],
    a: i64,
    ell: u64,
    x: u64,
    level: u64,
    twist: Option<&TwistDatum>,
) -> Result<PiXalCount, HarnessError> {
    check_sorted(records)?;
    if level > 1 && level % ell == 0 {
        return Err(HarnessError::EllDividesLevel(ell));
    }
    let fld = PrimeField::new(ell)?;
    let mut count = 0u64;
    let mut excluded = 0u64;
    for rec in records.iter().take_while(|r| r.p <= x) {
        if rec.p == ell || (level > 1 && rec.p % level == 0) {
            excluded += 1;
            continue;
        }
        if rec.a != a {
            continue;
        }
        if let Some(t) = twist {
            if !t.kernel.split_test(rec.p) {
                continue;
            }
        }
        let cp = rec.charpoly_mod(&fld);
        if splits_completely_nonzero(&fld, &cp)? {
            count += 1;
        }
    }
    let scale = twist.map(|t| t.kernel.degree).unwrap_or(1);
    Ok(PiXalCount {
        count: count * scale,
        excluded,
    })
}

/// The interval refinement report: the schedule prime window I = [y, y+u],
/// pi(x, a; l) for every admissible l in I, the maximum, and the conditional
/// bound curve it is compared against.
#[derive(Debug, Clone)]
pub struct MurtyReport {
    pub x: u64,
    pub a: i64,
    pub y: f64,
    pub u: f64,
    pub interval: (u64, u64),
    /// set when the desk-scale interval had to violate y >= u
    pub widened: bool,
    pub evaluated: Vec<(u64, u64)>,
    pub max_ell: u64,
    pub max_count: u64,
    pub pi_f_count: u64,
    pub bound_grh: f64,
}

/// Evaluates pi(x, a; l) over the primes of the schedule interval
/// [y, y + u], y = x^(alpha/n)/(log x)^(2 alpha/n), u >= sqrt(y)
/// (log y)^(1+eps) log(xy), widening (and flagging) the interval until it
/// holds at least two primes.
pub fn murty_interval_report(
    records: &[FrobeniusRecord],
    a: i64,
    x: u64,
    epsilon: f64,
    n: u64,
    level: u64,
    twist: Option<&TwistDatum>,
) -> Result<MurtyReport, HarnessError> {
    check_sorted(records)?;
    let alpha = ratio_f64(alpha_value(n, Regime::Grh, a == 0));
    let xf = x as f64;
    let y = crate::chebotarev::optimizing_y(xf, n, alpha).max(2.0);
    let u_min = y.sqrt() * y.ln().max(1.0).powf(1.0 + epsilon) * (xf * y).ln();
    let mut u = u_min.max(2.0);
    let primes_in = |lo: f64, hi: f64| -> Vec<u64> {
        crate::arith::sieve_primes(hi.ceil() as u64)
            .into_iter()
            // odd primes only: the mod-l machinery lives over odd l
            .filter(|&p| p >= 3 && (p as f64) >= lo && (level <= 1 || level % p != 0))
            .collect()
    };
    let mut interval_primes = primes_in(y, y + u);
    let mut widened = u > y;
    while interval_primes.len() < 2 {
        u *= 2.0;
        widened = true;
        interval_primes = primes_in(y, y + u);
    }
    let mut evaluated = Vec::new();
    for &ell in &interval_primes {
        if let Some(t) = twist {
            if !t.ell_splits_in_f(ell)? {
                continue;
            }
        }
        let c = pi_x_a_l(records, a, ell, x, level, twist)?;
        evaluated.push((ell, c.count));
    }
    while evaluated.is_empty() {
        // interval held primes but the F-splitting filter removed them all
        u *= 2.0;
        widened = true;
        interval_primes = primes_in(y, y + u);
        for &ell in &interval_primes {
            if let Some(t) = twist {
                if !t.ell_splits_in_f(ell)? {
                    continue;
                }
            }
            let c = pi_x_a_l(records, a, ell, x, level, twist)?;
            evaluated.push((ell, c.count));
        }
    }
    let &(max_ell, max_count) = evaluated
        .iter()
        .max_by_key(|(ell, c)| (*c, std::cmp::Reverse(*ell)))
        .unwrap();
    let pi_f_count = records
        .iter()
        .take_while(|r| r.p <= x)
        .filter(|r| r.a == a)
        .count() as u64;
    Ok(MurtyReport {
        x,
        a,
        y,
        u,
        interval: (y.floor() as u64, (y + u).ceil() as u64),
        widened,
        evaluated,
        max_ell,
        max_count,
        pi_f_count,
        bound_grh: bound_curve_grh(xf, alpha),
    })
}

/// Bound-curve table for plotting: x, unconditional curve, GRH curve.
pub fn bound_curve_report(
    x_grid: &[f64],
    profile: &crate::chebotarev::BoundProfile,
) -> Result<Vec<(f64, f64, f64)>, HarnessError> {
    if x_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::BadGrid);
    }
    let alpha = profile.alpha_f64();
    Ok(x_grid
        .iter()
        .map(|&x| {
            (
                x,
                bound_curve_unconditional(x, alpha, profile.epsilon),
                bound_curve_grh(x, alpha),
            )
        })
        .collect())
}

/// Report CSV: x, a, count, pi_x_a_l_max, curve_uncond, curve_grh.
pub fn lt_report_csv(rows: &[(LTCount, Option<u64>)]) -> String {
    let mut out = String::from("x,a,count,pi_x_a_l_max,curve_uncond,curve_grh\n");
    for (row, pimax) in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.6},{:.6}\n",
            row.x,
            row.a,
            row.count,
            pimax.map(|v| v.to_string()).unwrap_or_default(),
            row.bound_unconditional,
            row.bound_grh,
        ));
    }
    out
}

/// Empirical class frequency of a simulated stream against |C|/|G|, the
/// bridge between the simulator and the counting pipeline.
pub fn stream_class_ratio(
    stream: &crate::chebotarev::FrobeniusStream,
    in_class: &[bool],
    x: u64,
) -> (f64, f64) {
    let total = stream.draws.iter().take_while(|d| d.0 <= x).count() as f64;
    let hit = crate::chebotarev::pi_class(stream, in_class, x) as f64;
    let expected: u64 = stream
        .classes
        .iter()
        .zip(in_class)
        .filter(|(_, &b)| b)
        .map(|(c, _)| c.size)
        .sum();
    (
        hit / total.max(1.0),
        expected.to_f64().unwrap() / stream.group_order as f64,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus2::{fixed_curves, scan_curve};

    fn toy_records() -> Vec<FrobeniusRecord> {
        // synthetic table; charpoly invariants are not exercised here
        [(3u64, 1i64), (5, 0), (7, -2), (11, 0), (13, 4)]
            .into_iter()
            .map(|(p, a)| FrobeniusRecord {
                p,
                a,
                b: 0,
                weight_exponent: 1,
            })
            .collect()
    }

    #[test]
    fn empty_and_toy_counts() {
        let grid = [10.0, 100.0];
        let rows = tabulate_pi_f(&[], 0, &grid, 1, 0.0).unwrap();
        assert!(rows.iter().all(|r| r.count == 0));
        let rows = tabulate_pi_f(&toy_records(), 0, &grid, 1, 0.0).unwrap();
        assert_eq!(rows[0].count, 1); // p = 5 only
        assert_eq!(rows[1].count, 2); // p = 5, 11
    }

    #[test]
    fn unsorted_input_rejected() {
        let mut recs = toy_records();
        recs.swap(0, 1);
        assert!(matches!(
            tabulate_pi_f(&recs, 0, &[10.0], 1, 0.0),
            Err(HarnessError::Unsorted)
        ));
        assert!(matches!(
            tabulate_pi_f(&toy_records(), 0, &[10.0, 10.0], 1, 0.0),
            Err(HarnessError::BadGrid)
        ));
    }

    #[test]
    fn partition_property() {
        let curve = &fixed_curves()[0];
        let scan = scan_curve(curve, 2000).unwrap();
        let mut values: Vec<i64> = scan.records.iter().map(|r| r.a).collect();
        values.sort_unstable();
        values.dedup();
        let total: u64 = values
            .iter()
            .map(|&a| tabulate_pi_f(&scan.records, a, &[2000.0], 1, 0.0).unwrap()[0].count)
            .sum();
        assert_eq!(total as usize, scan.records.len());
    }

    #[test]
    fn filter_monotonicity() {
        let curve = &fixed_curves()[0];
        let scan = scan_curve(curve, 3000).unwrap();
        for a in [-2i64, -1, 0, 1, 2] {
            let full = tabulate_pi_f(&scan.records, a, &[3000.0], 1, 0.0).unwrap()[0].count;
            for ell in [5u64, 13] {
                let refined = pi_x_a_l(&scan.records, a, ell, 3000, 1, None).unwrap();
                assert!(refined.count <= full, "a={a} ell={ell}");
            }
        }
    }

    #[test]
    fn vacuous_splitting_condition() {
        // artificial records whose charpoly is (X-1)^4 mod l: a = 4, b = 6,
        // p = 1 mod l makes X^4 - 4X^3 + 6X^2 - 4pX + p^2 = (X-1)^4
        let ell = 5u64;
        let recs: Vec<FrobeniusRecord> = [11u64, 31, 41]
            .into_iter()
            .map(|p| FrobeniusRecord {
                p,
                a: 4,
                b: 6,
                weight_exponent: 1,
            })
            .collect();
        let refined = pi_x_a_l(&recs, 4, ell, 100, 1, None).unwrap();
        let full = tabulate_pi_f(&recs, 4, &[100.0], 1, 0.0).unwrap()[0].count;
        assert_eq!(refined.count, full);
    }

    #[test]
    fn no_roots_mod_5_is_excluded() {
        // X^4 - 2 mod 5 has no roots: a record with that reduction never
        // counts at l = 5. Take p = 7, a = 0, b = 0: X^4 + 49 = X^4 + 4 =
        // X^4 - 1 mod 5, which splits with roots {1,2,3,4}: counts. Then
        // p = 13, a = 0, b = 3: X^4 + 3X^2 + 169 = X^4 + 3X^2 + 4 mod 5.
        let rec_split = FrobeniusRecord {
            p: 7,
            a: 0,
            b: 0,
            weight_exponent: 1,
        };
        let r1 = pi_x_a_l(&[rec_split], 0, 5, 100, 1, None).unwrap();
        assert_eq!(r1.count, 1);
        let rec_other = FrobeniusRecord {
            p: 13,
            a: 0,
            b: 3,
            weight_exponent: 1,
        };
        let r2 = pi_x_a_l(&[rec_other], 0, 5, 100, 1, None).unwrap();
        // oracle: evaluate X^4 + 3X^2 + 4 at all residues mod 5
        let fld = PrimeField::new(5).unwrap();
        let poly = rec_other.charpoly_mod(&fld);
        let expected = splits_completely_nonzero(&fld, &poly).unwrap();
        assert_eq!(r2.count == 1, expected);
    }

    #[test]
    fn ell_equal_to_record_prime_is_audited() {
        let recs = toy_records();
        let r = pi_x_a_l(&recs, 0, 5, 100, 1, None).unwrap();
        assert_eq!(r.excluded, 1); // p = 5 itself
    }

    #[test]
    fn murty_report_runs_and_ratio_bounded() {
        let curve = &fixed_curves()[0];
        let scan = scan_curve(curve, 5000).unwrap();
        let report = murty_interval_report(&scan.records, 0, 5000, 0.05, 1, 1, None).unwrap();
        assert!(report.evaluated.len() >= 2);
        assert!(report.max_count <= report.pi_f_count);
        assert!(report.widened, "desk scale always widens");
        // the interval contains the evaluated primes
        for (ell, _) in &report.evaluated {
            assert!(*ell >= report.interval.0 && *ell <= report.interval.1);
        }
    }

    #[test]
    fn twist_scaling_and_split_filter() {
        // kernel = {1, 4} mod 5, degree 2: only split primes count, doubled
        let kernel = KernelField {
            modulus: 5,
            kernel: vec![1, 4],
            degree: 2,
        };
        let datum = TwistDatum {
            kernel,
            f_minpoly: None,
        };
        let recs: Vec<FrobeniusRecord> = [(11u64, 0i64), (13, 0), (19, 0), (29, 0)]
            .into_iter()
            .map(|(p, a)| FrobeniusRecord {
                p,
                a,
                b: 2,
                weight_exponent: 1,
            })
            .collect();
        let with = pi_x_a_l(&recs, 0, 7, 100, 1, Some(&datum)).unwrap();
        let without = pi_x_a_l(&recs, 0, 7, 100, 1, None).unwrap();
        // split test keeps p = 11 (1 mod 5), 19 (4 mod 5), 29 (4 mod 5)
        assert!(with.count % 2 == 0);
        assert!(with.count / 2 <= without.count);
    }

    #[test]
    fn ell_splits_in_f_filter() {
        let datum = TwistDatum {
            kernel: KernelField {
                modulus: 1,
                kernel: vec![0],
                degree: 1,
            },
            f_minpoly: Some(vec![-2, 0, 1]), // x^2 - 2
        };
        // 2 is a QR mod 7 (3^2 = 2), not mod 5
        assert!(datum.ell_splits_in_f(7).unwrap());
        assert!(!datum.ell_splits_in_f(5).unwrap());
    }

    #[test]
    fn bound_curves_shape() {
        use crate::chebotarev::{BoundProfile, Regime};
        let profile = BoundProfile::new(1, Regime::Grh, false, 0.0);
        let grid: Vec<f64> = (1..=6).map(|k| 10f64.powi(k)).collect();
        let rows = bound_curve_report(&grid, &profile).unwrap();
        // eps = 0: the unconditional curve is x/(log x)^(1+alpha)
        for (x, uncond, _) in &rows {
            let expect = x / x.ln().powf(1.0 + 1.0 / 12.0);
            assert!((uncond - expect).abs() < 1e-9 * expect);
        }
        // n = 2 curve is eventually below the n = 1 curve
        let p1 = BoundProfile::new(1, Regime::Grh, false, 0.0);
        let p2 = BoundProfile::new(2, Regime::Grh, false, 0.0);
        let big = 1e12;
        assert!(bound_curve_grh(big, p2.alpha_f64()) < bound_curve_grh(big, p1.alpha_f64()));
    }
}
