//! Monte-Carlo sweeps of verdict frequencies over random POVM pairs.

use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, Category, ClassifyOptions, FeasibilityOptions};
use crate::error::{Error, Result};
use crate::fsio::write_atomic;
use crate::povm::{sample_random_povm, PovmPair};
use crate::rng;
use crate::tol::Tolerances;

pub const CSV_HEADER: &str = "m,n_samples,n_adaptive_only,n_not_distinguishable,n_undetermined,p_adaptive,stderr";

/// Samples per point used when none is given.
pub fn default_samples(d: usize) -> u64 {
    if d <= 3 {
        10_000
    } else {
        500
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub d: usize,
    pub m_values: Vec<usize>,
    pub samples_per_point: u64,
    pub master_seed: u64,
    pub feasibility: FeasibilityOptions,
    pub tolerances: Tolerances,
}

impl SweepConfig {
    pub fn new(d: usize, m_values: Vec<usize>, samples_per_point: u64, master_seed: u64) -> Self {
        Self {
            d,
            m_values,
            samples_per_point,
            master_seed,
            feasibility: FeasibilityOptions::default(),
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidShape(format!("dimension must be at least 2, got {}", self.d)));
        }
        if self.m_values.is_empty() {
            return Err(Error::InvalidShape("no effect counts given".into()));
        }
        let (lo, hi) = (self.d, self.d * self.d);
        if let Some(m) = self.m_values.iter().find(|&&m| m < lo || m > hi) {
            return Err(Error::InvalidShape(format!("effect count {m} outside [{lo}, {hi}]")));
        }
        if self.samples_per_point == 0 {
            return Err(Error::InvalidShape("samples per point must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: usize,
    pub n_samples: u64,
    pub n_adaptive_only: u64,
    pub n_not_distinguishable: u64,
    pub n_undetermined: u64,
    pub p_adaptive: f64,
    pub stderr: f64,
}

impl SweepRow {
    pub fn from_counts(m: usize, adaptive: u64, not_distinguishable: u64, undetermined: u64) -> Self {
        let n = adaptive + not_distinguishable + undetermined;
        let p = adaptive as f64 / n as f64;
        Self {
            m,
            n_samples: n,
            n_adaptive_only: adaptive,
            n_not_distinguishable: not_distinguishable,
            n_undetermined: undetermined,
            p_adaptive: p,
            stderr: (p * (1.0 - p) / n as f64).sqrt(),
        }
    }
}

/// Verdict for sample `index` at effect count `m`. The pair and the
/// feasibility restarts are drawn from the sample's own stream.
pub fn classify_sample(cfg: &SweepConfig, m: usize, index: u64) -> Result<Category> {
    let tol = &cfg.tolerances;
    let mut r = rng::stream(cfg.master_seed, rng::stream_id(m as u64, index));
    let first = sample_random_povm::<f64, _>(cfg.d, m, &mut r, tol)?;
    let second = sample_random_povm::<f64, _>(cfg.d, m, &mut r, tol)?;
    let pair = PovmPair::new(first, second)?;
    let opts = ClassifyOptions {
        feasibility: FeasibilityOptions {
            seed: r.random(),
            ..cfg.feasibility
        },
        parallel_uses: Vec::new(),
    };
    Ok(classify(&pair, &opts, tol)?.category)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    cfg.m_values
        .iter()
        .map(|&m| {
            let verdicts: Vec<Result<Category>> = (0..cfg.samples_per_point)
                .into_par_iter()
                .map(|k| classify_sample(cfg, m, k))
                .collect();
            let mut counts = [0u64; 3];
            for (k, v) in verdicts.into_iter().enumerate() {
                let cat = v.map_err(|e| Error::Sample {
                    m,
                    index: k as u64,
                    source: Box::new(e),
                })?;
                counts[match cat {
                    Category::AdaptiveOnly => 0,
                    Category::NotPerfectlyDistinguishable => 1,
                    Category::FiniteDistinguishableParallelUndetermined => 2,
                }] += 1;
            }
            Ok(SweepRow::from_counts(m, counts[0], counts[1], counts[2]))
        })
        .collect()
}

/// Positional decimal with 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0000000000000000".into();
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mant),
    };
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{body}")
}

pub fn format_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.m,
            r.n_samples,
            r.n_adaptive_only,
            r.n_not_distinguishable,
            r.n_undetermined,
            format_sig17(r.p_adaptive),
            format_sig17(r.stderr)
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let bad = |line: usize, what: &str| Error::InvalidShape(format!("CSV line {line}: {what}"));
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(bad(1, "unexpected header"));
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let n = k + 2;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad(n, "expected 7 fields"));
            }
            let int = |s: &str| s.parse::<u64>().map_err(|_| bad(n, "bad integer"));
            let real = |s: &str| s.parse::<f64>().map_err(|_| bad(n, "bad number"));
            Ok(SweepRow {
                m: int(f[0])? as usize,
                n_samples: int(f[1])?,
                n_adaptive_only: int(f[2])?,
                n_not_distinguishable: int(f[3])?,
                n_undetermined: int(f[4])?,
                p_adaptive: real(f[5])?,
                stderr: real(f[6])?,
            })
        })
        .collect()
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidShape("no rows to write".into()));
    }
    write_atomic(path, format_csv(rows).as_bytes())
}

/// Config and results, written next to the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSidecar {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

pub fn emit_sidecar(cfg: &SweepConfig, rows: &[SweepRow], path: &Path) -> Result<()> {
    let side = SweepSidecar {
        config: cfg.clone(),
        rows: rows.to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&side)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sig17_formatting() {
        assert_eq!(format_sig17(0.4), "0.40000000000000002");
        assert_eq!(format_sig17(1.0), "1.0000000000000000");
        assert_eq!(format_sig17(0.0), "0.0000000000000000");
        assert_eq!(format_sig17(0.0049), "0.0048999999999999998");
        assert_eq!(format_sig17(-12.5), "-12.500000000000000");
        assert_eq!(format_sig17(1e20), "100000000000000000000");
    }

    proptest! {
        #[test]
        fn sig17_round_trips(x in prop::num::f64::NORMAL | prop::num::f64::ZERO) {
            let s = format_sig17(x);
            prop_assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.trim_start_matches('-').chars().filter(|c| c.is_ascii_digit()).collect::<String>();
            prop_assert!(digits.trim_matches('0').len() <= 17);
        }

        #[test]
        fn rows_round_trip_through_csv(
            counts in prop::collection::vec((1usize..50, 0u64..1000, 0u64..1000, 0u64..1000), 1..6)
        ) {
            let rows: Vec<SweepRow> = counts
                .into_iter()
                .filter(|(_, a, b, c)| a + b + c > 0)
                .map(|(m, a, b, c)| SweepRow::from_counts(m, a, b, c))
                .collect();
            prop_assume!(!rows.is_empty());
            let text = format_csv(&rows);
            prop_assert!(!text.contains('\r'));
            prop_assert_eq!(text.lines().count(), rows.len() + 1);
            prop_assert_eq!(parse_csv(&text).unwrap(), rows);
        }
    }

    #[test]
    fn single_row_file_has_two_lines() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        emit_csv(&[SweepRow::from_counts(3, 4, 5, 1)], &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.ends_with('\n'));
        assert!(emit_csv(&[], &p).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::new(1, vec![1], 10, 0).validate().is_err());
        assert!(SweepConfig::new(2, vec![5], 10, 0).validate().is_err());
        assert!(SweepConfig::new(2, vec![1], 10, 0).validate().is_err());
        assert!(SweepConfig::new(2, vec![3], 0, 0).validate().is_err());
        assert!(SweepConfig::new(2, vec![], 10, 0).validate().is_err());
        assert!(SweepConfig::new(2, vec![2, 3, 4], 10, 0).validate().is_ok());
    }

    #[test]
    fn full_effect_count_is_never_distinguishable() {
        let rows = run_sweep(&SweepConfig::new(2, vec![4], 100, 1)).unwrap();
        assert_eq!(rows[0].n_not_distinguishable, 100);
        assert_eq!(rows[0].p_adaptive, 0.0);
    }

    #[test]
    fn counts_are_consistent() {
        let rows = run_sweep(&SweepConfig::new(2, vec![2, 3], 200, 2)).unwrap();
        for r in &rows {
            assert_eq!(r.n_adaptive_only + r.n_not_distinguishable + r.n_undetermined, r.n_samples);
            assert_eq!(r.p_adaptive, r.n_adaptive_only as f64 / r.n_samples as f64);
        }
        // Von Neumann measurements are never adaptive-only.
        assert_eq!(rows[0].n_adaptive_only, 0);
    }

    #[test]
    fn sweep_is_independent_of_worker_count() {
        let cfg = SweepConfig::new(2, vec![3], 300, 77);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| format_csv(&run_sweep(&cfg).unwrap()))
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn sample_errors_carry_context() {
        let mut cfg = SweepConfig::new(2, vec![3], 5, 0);
        cfg.tolerances.completeness = -1.0;
        match run_sweep(&cfg) {
            Err(Error::Sample { m: 3, index: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
