//! Command surface, configuration, data ingestion, and the point-count /
//! record cache.
//!
//! Every artifact is a versioned plain-text CSV written atomically (temp file
//! + rename). Runs are reproducible from (config, input files, seed).

use crate::census;
use crate::chebotarev::{self, BoundProfile, ClassSpec, Regime};
use crate::genus2::{self, FrobeniusRecord, Genus2Error, HyperellipticCurve};
use crate::harness;
use crate::twists;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("validation: {0}")]
    Validation(String),
    #[error("arithmetic inconsistency: {0}")]
    Arithmetic(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status: 1 validation, 2 arithmetic inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Arithmetic(_) => 2,
            _ => 1,
        }
    }
}

impl From<Genus2Error> for CliError {
    fn from(e: Genus2Error) -> Self {
        match &e {
            Genus2Error::ArithmeticInconsistency { .. } => CliError::Arithmetic(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<census::CensusError> for CliError {
    fn from(e: census::CensusError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<chebotarev::ChebotarevError> for CliError {
    fn from(e: chebotarev::ChebotarevError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<twists::TwistError> for CliError {
    fn from(e: twists::TwistError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<harness::HarnessError> for CliError {
    fn from(e: harness::HarnessError) -> Self {
        CliError::Validation(e.to_string())
    }
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum Command {
    Census {
        ells: Vec<u64>,
        degrees: Vec<usize>,
        weight_exponent: u64,
        trace_residue: u64,
    },
    CurveScan {
        curves_file: Option<PathBuf>,
        pmax: u64,
    },
    LtCount {
        curves_file: Option<PathBuf>,
        curve_label: Option<String>,
        pmax: u64,
        a_values: Vec<i64>,
        ells: Vec<u64>,
        x_grid: Vec<u64>,
        epsilon: f64,
    },
    Bounds {
        ns: Vec<u64>,
        regime: Regime,
        a_zero: bool,
        epsilon: f64,
        x_grid: Vec<f64>,
    },
    Twists {
        eigen_file: Option<PathBuf>,
        synthetic_d: Option<i64>,
        modulus_bound: u64,
        exceptions: usize,
        b_table_file: Option<PathBuf>,
    },
    Simulate {
        group_order: u64,
        class_sizes: Vec<(String, u64)>,
        x: u64,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub out_dir: PathBuf,
    pub cache_path: Option<PathBuf>,
    pub seed: u64,
    pub threads: Option<usize>,
}

/// Optional key=value config file; flags win on conflict, so the caller
/// applies these only to unset options.
pub fn parse_config_file(text: &str) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    map
}

// ---------------------------------------------------------------------------
// Atomic artifact writing
// ---------------------------------------------------------------------------

pub fn atomic_write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Record cache
// ---------------------------------------------------------------------------

const CACHE_HEADER: &str = "# ltlab-cache v1";

fn fnv64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Frobenius records keyed by (curve label, p), with per-row checksums.
/// Corrupt rows are dropped (and recomputed by the caller); a version
/// mismatch drops everything with a warning.
#[derive(Debug, Default, Clone)]
pub struct RecordCache {
    entries: BTreeMap<(String, u64), FrobeniusRecord>,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct CacheLoadReport {
    pub version_mismatch: bool,
    pub corrupt_rows: u64,
    pub loaded: u64,
}

impl RecordCache {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: &str, p: u64) -> Option<&FrobeniusRecord> {
        self.entries.get(&(label.to_string(), p))
    }

    pub fn insert(&mut self, label: &str, rec: FrobeniusRecord) {
        self.entries.insert((label.to_string(), rec.p), rec);
    }

    fn row_body(label: &str, rec: &FrobeniusRecord) -> String {
        format!(
            "{label},{},{},{},{}",
            rec.p, rec.a, rec.b, rec.weight_exponent
        )
    }

    pub fn to_string(&self) -> String {
        let mut out = String::from(CACHE_HEADER);
        out.push('\n');
        for ((label, _), rec) in &self.entries {
            let body = Self::row_body(label, rec);
            let _ = writeln!(out, "{body},{:016x}", fnv64(body.as_bytes()));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        atomic_write(path, &self.to_string())
    }

    pub fn load(path: &Path) -> (Self, CacheLoadReport) {
        let mut cache = RecordCache::default();
        let mut report = CacheLoadReport::default();
        let Ok(text) = std::fs::read_to_string(path) else {
            return (cache, report);
        };
        let mut lines = text.lines();
        if lines.next() != Some(CACHE_HEADER) {
            report.version_mismatch = true;
            return (cache, report);
        }
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let Some((body, sum)) = line.rsplit_once(',') else {
                report.corrupt_rows += 1;
                continue;
            };
            let expected = format!("{:016x}", fnv64(body.as_bytes()));
            if sum != expected {
                report.corrupt_rows += 1;
                continue;
            }
            let fields: Vec<&str> = body.split(',').collect();
            if fields.len() != 5 {
                report.corrupt_rows += 1;
                continue;
            }
            let parsed = (
                fields[1].parse::<u64>(),
                fields[2].parse::<i64>(),
                fields[3].parse::<i64>(),
                fields[4].parse::<u64>(),
            );
            if let (Ok(p), Ok(a), Ok(b), Ok(c)) = parsed {
                cache.insert(
                    fields[0],
                    FrobeniusRecord {
                        p,
                        a,
                        b,
                        weight_exponent: c,
                    },
                );
                report.loaded += 1;
            } else {
                report.corrupt_rows += 1;
            }
        }
        (cache, report)
    }
}

/// Scan with cache: rows found in the cache are reused; everything else is
/// computed and written back.
pub fn cached_scan(
    curve: &HyperellipticCurve,
    pmax: u64,
    cache: &mut RecordCache,
) -> Result<genus2::ScanResult, CliError> {
    let primes = crate::arith::sieve_primes(pmax);
    let mut result = genus2::ScanResult::default();
    let mut missing = Vec::new();
    for &p in &primes {
        if !curve.good_reduction(p) {
            result.bad_primes.push(p);
        } else if let Some(rec) = cache.get(curve.label(), p) {
            result.records.push(*rec);
        } else {
            missing.push(p);
        }
    }
    if !missing.is_empty() {
        use rayon::prelude::*;
        let fresh: Result<Vec<FrobeniusRecord>, Genus2Error> = missing
            .par_iter()
            .map(|&p| genus2::frobenius_record(curve, p))
            .collect();
        for rec in fresh? {
            cache.insert(curve.label(), rec);
            result.records.push(rec);
        }
    }
    result.records.sort_by_key(|r| r.p);
    Ok(result)
}

// ---------------------------------------------------------------------------
// Artifact CSV writers
// ---------------------------------------------------------------------------

pub fn records_to_csv(records: &[FrobeniusRecord]) -> String {
    let mut out = String::from("p,a_p,b_p,c0,c1,c2,c3\n");
    for r in records {
        let c = r.charpoly_coeffs();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.p, r.a, r.b, c[0], c[1], c[2], c[3]
        );
    }
    out
}

pub fn parse_records_csv(text: &str) -> Result<Vec<FrobeniusRecord>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() < 3 {
            return Err(CliError::Validation(format!("records csv line {}", i + 1)));
        }
        let (p, a, b) = (
            f[0].parse::<u64>()
                .map_err(|e| CliError::Validation(e.to_string()))?,
            f[1].parse::<i64>()
                .map_err(|e| CliError::Validation(e.to_string()))?,
            f[2].parse::<i64>()
                .map_err(|e| CliError::Validation(e.to_string()))?,
        );
        out.push(FrobeniusRecord {
            p,
            a,
            b,
            weight_exponent: genus2::WEIGHT_EXPONENT,
        });
    }
    Ok(out)
}

pub fn bound_profiles_csv(profiles: &[BoundProfile]) -> String {
    let mut out = String::from("n,regime,a_zero,alpha_num,alpha_den\n");
    for p in profiles {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.n,
            p.regime,
            p.a_zero,
            p.alpha.numer(),
            p.alpha.denom()
        );
    }
    out
}

pub fn stream_dump_csv(stream: &chebotarev::FrobeniusStream) -> String {
    let mut out = String::from("p,class_label\n");
    for &(p, c) in &stream.draws {
        let _ = writeln!(out, "{p},{}", stream.classes[c as usize].label);
    }
    out
}

// ---------------------------------------------------------------------------
// Command dispatch
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
pub struct RunOutcome {
    pub artifacts: Vec<PathBuf>,
    pub summary: String,
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    if let Some(t) = config.threads {
        // ignore failure: the global pool may already be initialised
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let mut outcome = RunOutcome::default();
    match &config.command {
        Command::Census {
            ells,
            degrees,
            weight_exponent,
            trace_residue,
        } => {
            if ells.is_empty() || degrees.is_empty() {
                return Err(CliError::Validation("census needs --ell and --n".into()));
            }
            let report = census::run_census(ells, degrees, *weight_exponent, *trace_residue)?;
            let path = config.out_dir.join("census.csv");
            atomic_write(&path, &report.to_csv())?;
            outcome.artifacts.push(path);
            let txt = config.out_dir.join("census.txt");
            atomic_write(&txt, &report.to_summary())?;
            outcome.artifacts.push(txt);
            outcome.summary = report.to_summary();
        }
        Command::CurveScan { curves_file, pmax } => {
            let curves = load_curves(curves_file.as_deref())?;
            let mut cache = load_cache(config);
            for curve in &curves {
                let scan = cached_scan(curve, *pmax, &mut cache)?;
                let path = config
                    .out_dir
                    .join(format!("records_{}.csv", curve.label()));
                atomic_write(&path, &records_to_csv(&scan.records))?;
                let _ = writeln!(
                    outcome.summary,
                    "{}: {} records, {} bad primes",
                    curve.label(),
                    scan.records.len(),
                    scan.bad_primes.len()
                );
                outcome.artifacts.push(path);
            }
            save_cache(config, &cache)?;
        }
        Command::LtCount {
            curves_file,
            curve_label,
            pmax,
            a_values,
            ells,
            x_grid,
            epsilon,
        } => {
            let curves = load_curves(curves_file.as_deref())?;
            let curve = match curve_label {
                Some(l) => curves
                    .iter()
                    .find(|c| c.label() == l)
                    .ok_or_else(|| CliError::Validation(format!("no curve labelled {l}")))?,
                None => curves
                    .first()
                    .ok_or_else(|| CliError::Validation("empty curve list".into()))?,
            };
            let mut cache = load_cache(config);
            let scan = cached_scan(curve, *pmax, &mut cache)?;
            save_cache(config, &cache)?;
            let grid: Vec<f64> = x_grid.iter().map(|&x| x as f64).collect();
            let mut rows = Vec::new();
            for &a in a_values {
                let counts = harness::tabulate_pi_f(&scan.records, a, &grid, 1, *epsilon)?;
                for (i, c) in counts.into_iter().enumerate() {
                    let pimax = ells
                        .iter()
                        .map(|&ell| {
                            harness::pi_x_a_l(&scan.records, a, ell, x_grid[i], 1, None)
                                .map(|r| r.count)
                        })
                        .collect::<Result<Vec<u64>, _>>()?
                        .into_iter()
                        .max();
                    rows.push((c, pimax));
                }
            }
            let path = config.out_dir.join("lt_report.csv");
            atomic_write(&path, &harness::lt_report_csv(&rows))?;
            outcome.artifacts.push(path);
            let _ = writeln!(
                outcome.summary,
                "lt-count over {} records of {}",
                scan.records.len(),
                curve.label()
            );
        }
        Command::Bounds {
            ns,
            regime,
            a_zero,
            epsilon,
            x_grid,
        } => {
            let profiles: Vec<BoundProfile> = ns
                .iter()
                .map(|&n| BoundProfile::new(n, *regime, *a_zero, *epsilon))
                .collect();
            let path = config.out_dir.join("bound_profiles.csv");
            atomic_write(&path, &bound_profiles_csv(&profiles))?;
            outcome.artifacts.push(path);
            if x_grid.len() >= 2 {
                let mut curves = String::from("x,n,curve_uncond,curve_grh\n");
                for p in &profiles {
                    for row in harness::bound_curve_report(x_grid, p)? {
                        let _ = writeln!(curves, "{},{},{:.6},{:.6}", row.0, p.n, row.1, row.2);
                    }
                }
                let cpath = config.out_dir.join("bound_curves.csv");
                atomic_write(&cpath, &curves)?;
                outcome.artifacts.push(cpath);
            }
            for p in &profiles {
                let _ = writeln!(
                    outcome.summary,
                    "n={} {} a_zero={} alpha={}/{}",
                    p.n,
                    p.regime,
                    p.a_zero,
                    p.alpha.numer(),
                    p.alpha.denom()
                );
            }
        }
        Command::Twists {
            eigen_file,
            synthetic_d,
            modulus_bound,
            exceptions,
            b_table_file,
        } => {
            let system = match (synthetic_d, eigen_file) {
                (Some(d), _) => twists::synthetic_quadratic_system(*d, 100 * modulus_bound + 50)?,
                (None, Some(path)) => {
                    // rational coefficient field unless a synthetic system is
                    // requested; general fields enter through the library API
                    let field = twists::numberfield::rational_field();
                    let text = std::fs::read_to_string(path)?;
                    let table = twists::parse_eigen_table(&field, &text)?;
                    twists::EigenvalueSystem::new(
                        field,
                        table,
                        1,
                        twists::characters::DirichletCharacter::trivial(1),
                    )?
                }
                (None, None) => {
                    return Err(CliError::Validation(
                        "twists needs --eigen FILE or --synthetic D".into(),
                    ))
                }
            };
            let found = twists::detect_inner_twists(&system, *modulus_bound, *exceptions)?;
            let (gamma, f_deg, _, minpoly) = twists::fixed_field_degree(&system, &found)?;
            let kernel = twists::kernel_field(&found);
            let mut report = String::new();
            let _ = writeln!(report, "twists,{}", found.len());
            for t in &found {
                let _ = writeln!(
                    report,
                    "twist,sigma={},chi_modulus={},chi_order={}",
                    t.sigma,
                    t.chi.modulus(),
                    t.chi.order()
                );
            }
            let _ = writeln!(report, "gamma_order,{gamma}");
            let _ = writeln!(report, "f_degree,{f_deg}");
            let _ = writeln!(
                report,
                "f_minpoly,{}",
                minpoly
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            );
            let _ = writeln!(
                report,
                "kernel_field,m={},degree={},S={}",
                kernel.modulus,
                kernel.degree,
                kernel
                    .kernel
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            );
            if let Some(bpath) = b_table_file {
                let text = std::fs::read_to_string(bpath)?;
                let btable = twists::parse_eigen_table(&system.field, &text)?;
                match twists::check_f_equals_q_bq(&system.field, &btable, f_deg) {
                    Some(q) => {
                        let _ = writeln!(report, "f_equals_q_bq,witness={q}");
                    }
                    None => {
                        let _ = writeln!(report, "f_equals_q_bq,none");
                    }
                }
            }
            let path = config.out_dir.join("twists.csv");
            atomic_write(&path, &report)?;
            outcome.artifacts.push(path);
            outcome.summary = report;
        }
        Command::Simulate {
            group_order,
            class_sizes,
            x,
        } => {
            let classes: Vec<ClassSpec> = class_sizes
                .iter()
                .map(|(label, size)| ClassSpec {
                    label: label.clone(),
                    size: *size,
                })
                .collect();
            let stream =
                chebotarev::simulate_frobenius(&classes, *group_order, *x, config.seed, None)?;
            let path = config.out_dir.join("stream.csv");
            atomic_write(&path, &stream_dump_csv(&stream))?;
            outcome.artifacts.push(path);
            let p = chebotarev::chi_square_pvalue(&stream);
            let _ = writeln!(
                outcome.summary,
                "simulated {} draws, chi-square p = {p:.6}",
                stream.draws.len()
            );
        }
    }
    Ok(outcome)
}

fn load_curves(file: Option<&Path>) -> Result<Vec<HyperellipticCurve>, CliError> {
    match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok(genus2::parse_curve_list(&text)?)
        }
        None => Ok(genus2::fixed_curves()),
    }
}

fn load_cache(config: &RunConfig) -> RecordCache {
    match &config.cache_path {
        Some(path) => {
            let (cache, report) = RecordCache::load(path);
            if report.version_mismatch {
                eprintln!("warning: cache version mismatch; recomputing everything");
            }
            if report.corrupt_rows > 0 {
                eprintln!(
                    "warning: {} corrupt cache rows dropped and recomputed",
                    report.corrupt_rows
                );
            }
            cache
        }
        None => RecordCache::default(),
    }
}

fn save_cache(config: &RunConfig, cache: &RecordCache) -> Result<(), CliError> {
    if let Some(path) = &config.cache_path {
        cache.save(path)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(p: u64, a: i64, b: i64) -> FrobeniusRecord {
        FrobeniusRecord {
            p,
            a,
            b,
            weight_exponent: 1,
        }
    }

    #[test]
    fn cache_roundtrip_and_checksums() {
        let dir = std::env::temp_dir().join(format!("ltlab-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.csv");
        let mut cache = RecordCache::default();
        for p in [3u64, 5, 7, 11] {
            cache.insert("c1", rec(p, 1, 2));
        }
        cache.save(&path).unwrap();
        let (back, report) = RecordCache::load(&path);
        assert_eq!(back.len(), 4);
        assert_eq!(report.corrupt_rows, 0);
        assert_eq!(back.get("c1", 7), Some(&rec(7, 1, 2)));

        // flip one checksum: exactly that row is dropped
        let text = std::fs::read_to_string(&path).unwrap();
        let corrupted: Vec<String> = text
            .lines()
            .map(|l| {
                if l.contains("c1,7,") {
                    let mut s = l.to_string();
                    s.pop();
                    s.push('0');
                    s
                } else {
                    l.to_string()
                }
            })
            .collect();
        std::fs::write(&path, corrupted.join("\n")).unwrap();
        let (back, report) = RecordCache::load(&path);
        assert_eq!(report.corrupt_rows, 1);
        assert_eq!(back.len(), 3);
        assert!(back.get("c1", 7).is_none());

        // truncated file: intact prefix is salvaged
        let text = std::fs::read_to_string(&path).unwrap();
        let cut = &text[..text.len() - 10];
        std::fs::write(&path, cut).unwrap();
        let (back, report) = RecordCache::load(&path);
        assert!(back.len() >= 2);
        assert!(report.corrupt_rows >= 1);

        // version mismatch: full recompute
        std::fs::write(&path, "# ltlab-cache v999\nc1,3,1,2,1,deadbeef\n").unwrap();
        let (back, report) = RecordCache::load(&path);
        assert!(report.version_mismatch);
        assert!(back.is_empty());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn records_csv_roundtrip() {
        let records = vec![rec(3, -1, 2), rec(5, 0, -3)];
        let csv = records_to_csv(&records);
        assert!(csv.starts_with("p,a_p,b_p,c0,c1,c2,c3\n"));
        let back = parse_records_csv(&csv).unwrap();
        assert_eq!(back, records);
        // charpoly columns: c0 = p^2, c1 = -a p, c2 = b, c3 = -a
        let line: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(line, vec!["3", "-1", "2", "9", "3", "2", "1"]);
    }

    #[test]
    fn config_file_parsing() {
        let map = parse_config_file("# comment\npmax = 500\nout=/tmp/x\n\nbad line\n");
        assert_eq!(map.get("pmax").map(String::as_str), Some("500"));
        assert_eq!(map.get("out").map(String::as_str), Some("/tmp/x"));
        assert_eq!(map.len(), 2);
    }

    #[test]
    fn fnv_is_stable() {
        // pinned so cache files survive recompilation
        assert_eq!(fnv64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv64(b"a"), 0xaf63dc4c8601ec8c);
    }
}
