use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use povmdisc::adaptive::{simulate_exact, simulate_sampled, synthesize, AChoice, SchemeFile};
use povmdisc::classify::{classify, parallel_check, ClassifyOptions, FeasibilityOptions, VerdictFile};
use povmdisc::experiments::{default_samples, emit_csv, emit_sidecar, run_sweep, SweepConfig};
use povmdisc::fsio::{read_to_string, write_atomic};
use povmdisc::json::{ket_in, matrix_out, JsonVector};
use povmdisc::povm::{build_sic, sample_random_povm, PovmPairFile, DEFAULT_SIC_PERMUTATION};
use povmdisc::{rng, Pair, Scheme, Tolerances};

use crate::{AChoiceArg, Cli, Command, SearchArgs};

const FULL_SCALE_SAMPLES: u64 = 1_000_000;

pub fn run(cli: Cli) -> Result<()> {
    let tol = tolerances(cli.tol)?;
    match cli.command {
        Command::Sic { dim, perm, fiducial, out } => {
            let fid = fiducial
                .map(|p| -> Result<_> {
                    let v: JsonVector = serde_json::from_str(&read_to_string(&p)?)
                        .with_context(|| format!("{}: malformed fiducial", p.display()))?;
                    Ok(ket_in::<f64>(&v)?)
                })
                .transpose()?;
            let first = build_sic(dim, fid.as_ref(), &tol)?;
            let perm = match perm {
                Some(p) => p,
                None if dim == 3 => DEFAULT_SIC_PERMUTATION.to_vec(),
                None => bail!("--perm is required for d = {dim}"),
            };
            let second = first.permute_effects(&perm)?;
            write_pair(&Pair::new(first, second)?, &out)
        }
        Command::Random { dim, effects, seed, out } => {
            if dim == 0 || effects < dim {
                bail!("need dim >= 1 and effects >= dim (got dim = {dim}, effects = {effects})");
            }
            let mut r = rng::stream(seed, 0);
            let first = sample_random_povm(dim, effects, &mut r, &tol)?;
            let second = sample_random_povm(dim, effects, &mut r, &tol)?;
            write_pair(&Pair::new(first, second)?, &out)
        }
        Command::Classify { pair, parallel_n, search } => {
            let pair = read_pair(&pair, &tol)?;
            let opts = ClassifyOptions {
                feasibility: feasibility(&search),
                parallel_uses: parallel_n,
            };
            let verdict = classify(&pair, &opts, &tol)?;
            print_json(&VerdictFile::from(&verdict))
        }
        Command::Synthesize {
            pair,
            out,
            a_choice,
            candidates,
            seed,
        } => {
            let pair = read_pair(&pair, &tol)?;
            let choice = match a_choice {
                AChoiceArg::Canonical => AChoice::Canonical,
                AChoiceArg::MatchOverlap => AChoice::MatchOverlap { seed, candidates },
            };
            let scheme = synthesize(&pair, choice, &tol)?;
            eprintln!(
                "scheme for d = {}, m = {}: overlap |<xi|eta>| = {:.12}",
                scheme.d,
                scheme.m,
                scheme.overlap()
            );
            let mut text = SchemeFile::from_scheme(&scheme).to_json()?;
            text.push('\n');
            write_atomic(&out, text.as_bytes())?;
            Ok(())
        }
        Command::Simulate {
            scheme,
            pair,
            shots,
            seed,
        } => {
            let text = read_to_string(&scheme)?;
            let file = SchemeFile::from_json(&text).with_context(|| format!("{}: malformed scheme", scheme.display()))?;
            let scheme: Scheme = file.to_scheme()?;
            let pair = read_pair(&pair, &tol)?;
            let report = match shots {
                None => simulate_exact(&scheme, &pair, &tol)?,
                Some(n) => simulate_sampled(&scheme, &pair, n, seed, &tol)?,
            };
            print_json(&report)
        }
        Command::ParallelCheck { pair, uses, search } => {
            let pair = read_pair(&pair, &tol)?;
            let chk = parallel_check(&pair, uses, &feasibility(&search), &tol)?;
            print_json(&serde_json::json!({
                "uses": chk.uses,
                "found": chk.witness.is_some(),
                "max_orthogonality": chk.max_orthogonality,
                "span_rank": chk.span_rank,
                "witness": chk.witness.as_ref().map(matrix_out),
            }))
        }
        Command::Sweep {
            dim,
            effects,
            samples,
            full_scale,
            seed,
            out,
            sidecar,
            threads,
            restarts,
            max_iter,
        } => {
            let m_values = parse_effects(&effects)?;
            let n = if full_scale {
                FULL_SCALE_SAMPLES
            } else {
                samples.unwrap_or_else(|| default_samples(dim))
            };
            let mut cfg = SweepConfig::new(dim, m_values, n, seed);
            cfg.tolerances = tol;
            cfg.feasibility.restarts = restarts;
            cfg.feasibility.max_iter = max_iter;
            cfg.validate()?;
            eprintln!(
                "sweep d = {dim}, m in {:?}, {n} samples per point, seed {seed}",
                cfg.m_values
            );
            let rows = match threads {
                Some(t) => rayon_pool(t)?.install(|| run_sweep(&cfg))?,
                None => run_sweep(&cfg)?,
            };
            emit_csv(&rows, &out)?;
            if let Some(p) = sidecar {
                emit_sidecar(&cfg, &rows, &p)?;
            }
            Ok(())
        }
    }
}

fn rayon_pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?)
}

/// Default tolerances with `atol` taken from `--tol`, else `POVMDISC_TOL`.
fn tolerances(flag: Option<f64>) -> Result<Tolerances> {
    let env = match std::env::var("POVMDISC_TOL") {
        Ok(s) => Some(
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("POVMDISC_TOL={s:?} is not a number"))?,
        ),
        Err(_) => None,
    };
    match flag.or(env) {
        Some(t) if !(t.is_finite() && t > 0.0) => bail!("tolerance must be a positive number, got {t}"),
        Some(t) => Ok(Tolerances::default().with_atol(t)),
        None => Ok(Tolerances::default()),
    }
}

fn feasibility(s: &SearchArgs) -> FeasibilityOptions {
    FeasibilityOptions {
        max_iter: s.max_iter,
        restarts: s.restarts,
        seed: s.seed,
    }
}

fn read_pair(path: &Path, tol: &Tolerances) -> Result<Pair> {
    let text = read_to_string(path)?;
    let file = PovmPairFile::from_json(&text).with_context(|| format!("{}: malformed POVM pair", path.display()))?;
    file.to_pair(tol).with_context(|| format!("{}: invalid POVM pair", path.display()))
}

fn write_pair(pair: &Pair, out: &Path) -> Result<()> {
    let mut text = PovmPairFile::from_pair(pair).to_json();
    text.push('\n');
    write_atomic(out, text.as_bytes())?;
    Ok(())
}

fn print_json<S: serde::Serialize>(value: &S) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

/// Parses `M`, `M1..M2`, `M1..M2:STEP` (inclusive) or `M1,M2,...`.
pub fn parse_effects(spec: &str) -> Result<Vec<usize>> {
    let num = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .with_context(|| format!("bad effect count {s:?} in {spec:?}"))
    };
    if let Some((lo, rest)) = spec.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((h, s)) => (num(h)?, num(s)?),
            None => (num(rest)?, 1),
        };
        let lo = num(lo)?;
        if step == 0 || hi < lo {
            bail!("empty effect range {spec:?}");
        }
        return Ok((lo..=hi).step_by(step).collect());
    }
    spec.split(',').map(num).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effect_specs() {
        assert_eq!(parse_effects("3").unwrap(), vec![3]);
        assert_eq!(parse_effects("10,20,45").unwrap(), vec![10, 20, 45]);
        assert_eq!(parse_effects("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_effects("10..45:10").unwrap(), vec![10, 20, 30, 40]);
        assert!(parse_effects("4..2").is_err());
        assert!(parse_effects("2..4:0").is_err());
        assert!(parse_effects("x").is_err());
    }

    #[test]
    fn tolerance_flag_sets_atol() {
        assert_eq!(tolerances(Some(1e-6)).unwrap().atol, 1e-6);
        assert!(tolerances(Some(-1.0)).is_err());
    }
}
