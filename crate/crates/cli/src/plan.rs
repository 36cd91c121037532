use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use supercong::arith::{vp, GranvilleBatch, GranvilleSample, PAdicVal};
use supercong::digits::DigitContext;
use supercong::engine::{self, Cell, SweepParams, SweepResult};
use supercong::{hyp, rep};

use crate::config::{BSpec, ConfigError, GranvilleConfig, SweepConfig, Target};
use crate::report::{CheckRecord, Report};

const DEFAULT_PRIMES: [u64; 4] = [2, 3, 5, 7];
const MAX_FAILURES: usize = 20;
const MAX_SUM_TERMS: usize = 64;
const MAX_M_TOP: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Job {
    Key { p: u64, n: u32 },
    Hyp { p: u64, n: u32 },
    Main { p: u64, n: u32 },
    IntroCoeff { p: u64, n: u32 },
    Digit { target: Target, ctx: DigitContext },
    P2 { n: u32, a: u32 },
    Granville { p: u64 },
}

fn primes_for(cfg: &SweepConfig, target: Target) -> Vec<u64> {
    let base = cfg.p.clone().unwrap_or_else(|| DEFAULT_PRIMES.to_vec());
    match target {
        t if t.odd_primes_only() => base.into_iter().filter(|&p| p != 2).collect(),
        Target::P2 => base.into_iter().filter(|&p| p == 2).collect(),
        _ => base,
    }
}

fn pn_grid(cfg: &SweepConfig, primes: &[u64]) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for &p in primes {
        match &cfg.n {
            Some(ns) => out.extend(ns.iter().map(|&n| (p, n))),
            None => {
                out.extend([(p, 1), (p, 2)]);
                if p == 3 {
                    out.push((3, 3));
                }
            }
        }
    }
    out
}

fn a_values(cfg: &SweepConfig, n: u32) -> Vec<u32> {
    match &cfg.a {
        Some(list) => list.iter().copied().filter(|&a| a >= n).collect(),
        None => (n..=n + 2).collect(),
    }
}

fn b_values(cfg: &SweepConfig, p: u64) -> Vec<u64> {
    match &cfg.b {
        BSpec::All => (1..p).collect(),
        BSpec::List(bs) => bs.iter().copied().filter(|&b| b < p).collect(),
    }
}

/// Expands a config into independent jobs, rejecting parameter boxes the
/// verifiers cannot handle.
pub fn plan(cfg: &SweepConfig) -> Result<Vec<Job>, ConfigError> {
    cfg.validate()?;
    let targets: Vec<Target> = if cfg.target == Target::All { Target::CONCRETE.to_vec() } else { vec![cfg.target] };
    let mut jobs = Vec::new();
    for t in targets {
        let primes = primes_for(cfg, t);
        match t {
            Target::Key | Target::Hyp | Target::Main | Target::IntroCoeff => {
                for (p, n) in pn_grid(cfg, &primes) {
                    let pn = p.checked_pow(n).filter(|&q| q <= 4096);
                    if pn.is_none() {
                        return Err(ConfigError::Invalid(format!("p^n = {p}^{n} is beyond the supported range")));
                    }
                    jobs.push(match t {
                        Target::Key => Job::Key { p, n },
                        Target::Hyp => Job::Hyp { p, n },
                        Target::Main => Job::Main { p, n },
                        _ => Job::IntroCoeff { p, n },
                    });
                }
            }
            Target::P2 => {
                for (_, n) in pn_grid(cfg, &primes) {
                    for a in a_values(cfg, n) {
                        if a > 40 {
                            return Err(ConfigError::Invalid(format!("a = {a} is too large")));
                        }
                        jobs.push(Job::P2 { n, a });
                    }
                }
            }
            Target::Granville => jobs.extend(primes.iter().map(|&p| Job::Granville { p })),
            _ => {
                for (p, n) in pn_grid(cfg, &primes) {
                    for b in b_values(cfg, p) {
                        for a in a_values(cfg, n) {
                            let ctx = DigitContext::new(p, b, n, a)?;
                            if ctx.m_top() > MAX_M_TOP {
                                return Err(ConfigError::Invalid(format!(
                                    "m(2^a - 1) = {} for p={p} b={b} a={a} is beyond the supported range",
                                    ctx.m_top()
                                )));
                            }
                            jobs.push(Job::Digit { target: t, ctx });
                        }
                    }
                }
            }
        }
    }
    Ok(jobs)
}

/// Seeded samples for one prime: `n <= n_max`, `j <= j_max`, `1 <= l <= l_max`.
pub fn granville_samples(p: u64, g: &GranvilleConfig) -> Vec<GranvilleSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..g.samples)
        .map(|_| GranvilleSample {
            n: rng.gen_range(0..=g.n_max),
            j: rng.gen_range(0..=g.j_max),
            l: rng.gen_range(1..=g.l_max.max(1)),
        })
        .collect()
}

fn from_sweep(target: Target, res: SweepResult) -> CheckRecord {
    CheckRecord {
        target,
        params: res.params,
        cells: res.cells.len(),
        min_margin: res.min_margin(),
        pass: res.all_pass,
        cross_check: res.cross_check,
        failures: res.cells.iter().filter(|c| !c.pass).take(MAX_FAILURES).cloned().collect(),
        detail: None,
        elapsed_ms: 0,
        cell_list: res.cells,
    }
}

fn odd_params(p: u64, n: u32) -> SweepParams {
    SweepParams { p, b: None, n, a: None }
}

fn cell(i: u64, valuation: PAdicVal, n: u32) -> Cell {
    let required = PAdicVal::Finite(n as i64);
    Cell { k: None, r: None, i, j: None, valuation, required, pass: valuation >= required }
}

fn custom(target: Target, params: SweepParams, cells: Vec<Cell>, pass: bool, detail: serde_json::Value) -> CheckRecord {
    let mut res = SweepResult { params, all_pass: pass && cells.iter().all(|c| c.pass), cells, cross_check: None };
    res.cells.sort();
    let mut rec = from_sweep(target, res);
    rec.detail = Some(detail);
    rec
}

pub fn execute(job: &Job, cfg: &SweepConfig) -> Result<CheckRecord, ConfigError> {
    let start = Instant::now();
    let mut rec = match *job {
        Job::Key { p, n } => from_sweep(Target::Key, engine::verify_key(p, n, cfg.i_max)?),
        Job::P2 { n, a } => from_sweep(Target::P2, engine::verify_p2_corollary(n, a, cfg.i_max)?),
        Job::IntroCoeff { p, n } => from_sweep(Target::IntroCoeff, rep::verify_intro_coefficients(p, n)?),
        Job::Digit { target, ctx } => from_sweep(
            target,
            match target {
                Target::Gen1 => engine::verify_gen1(&ctx, cfg.i_max),
                Target::Gen2 => engine::verify_gen2(&ctx),
                Target::LemmaY => engine::verify_lemma_y(&ctx),
                Target::LemmaInd => engine::verify_lemma_ind(&ctx),
                _ => engine::verify_lemma_base(&ctx),
            },
        ),
        Job::Main { p, n } => {
            let c = rep::verify_main(p, n)?;
            let mut detail = json!({ "terms": c.terms });
            if c.terms <= MAX_SUM_TERMS {
                detail["sum"] = json!(c.sum.to_string());
            }
            custom(Target::Main, odd_params(p, n), vec![cell(0, c.min_valuation, n)], c.pass, detail)
        }
        Job::Hyp { p, n } => {
            let c = hyp::verify_hyp(p, n)?;
            let i0 = hyp::verify_i0(p, n)?;
            let half = (p.pow(n) - 1) / 2;
            let cells = (0..=half).map(|i| cell(i, vp(&c.sum.coeff((half - i) as usize), p), n)).collect();
            let detail = json!({
                "sum": c.sum.to_string(),
                "forms_agree": c.forms_agree,
                "bridge": c.bridge,
                "i0": i0,
            });
            custom(Target::Hyp, odd_params(p, n), cells, c.pass && i0.pass, detail)
        }
        Job::Granville { p } => {
            let samples = granville_samples(p, &cfg.granville);
            let outcomes = GranvilleBatch::new(p).verify(&samples);
            let failed: Vec<_> = outcomes.iter().filter(|o| !o.pass()).take(MAX_FAILURES).collect();
            let delta_plus = samples.iter().filter(|s| p == 2 && s.l >= 3).count();
            let detail = json!({
                "samples": samples.len(),
                "delta_plus_branch": delta_plus,
                "failures": failed,
            });
            let pass = outcomes.iter().all(|o| o.pass());
            let mut rec = custom(Target::Granville, odd_params(p, 0), Vec::new(), pass, detail);
            rec.cells = samples.len();
            rec
        }
    };
    rec.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(rec)
}

/// Runs every job on a pool of `cfg.jobs` threads, printing a heartbeat to
/// standard error every two seconds.
pub fn run(cfg: &SweepConfig) -> Result<Report, ConfigError> {
    let jobs = plan(cfg)?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| ConfigError::Invalid(format!("cannot start {} worker threads: {e}", cfg.jobs)))?;
    let done = AtomicUsize::new(0);
    let total = jobs.len();
    let (stop_tx, stop_rx) = mpsc::channel::<()>();
    let records = std::thread::scope(|s| {
        let done = &done;
        s.spawn(move || {
            while let Err(mpsc::RecvTimeoutError::Timeout) = stop_rx.recv_timeout(Duration::from_secs(2)) {
                eprintln!(
                    "verify: {}/{} checks done, {:.1}s elapsed",
                    done.load(Ordering::Relaxed),
                    total,
                    start.elapsed().as_secs_f64()
                );
            }
        });
        let out = pool.install(|| {
            jobs.par_iter()
                .map(|job| {
                    let r = execute(job, cfg);
                    done.fetch_add(1, Ordering::Relaxed);
                    r
                })
                .collect::<Result<Vec<_>, _>>()
        });
        drop(stop_tx);
        out
    })?;
    Ok(Report::assemble(cfg.clone(), records, start.elapsed().as_millis() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids() {
        let jobs = plan(&SweepConfig::new(Target::Key)).unwrap();
        assert_eq!(jobs.len(), 7);
        assert!(jobs.contains(&Job::Key { p: 3, n: 3 }));
        let mut cfg = SweepConfig::new(Target::Gen2);
        cfg.p = Some(vec![3]);
        cfg.n = Some(vec![1]);
        assert_eq!(plan(&cfg).unwrap().len(), 2 * 3);
        let all = plan(&SweepConfig::new(Target::All)).unwrap();
        assert!(all.iter().all(|j| !matches!(j, Job::Main { p: 2, .. } | Job::Hyp { p: 2, .. })));
        assert!(all.contains(&Job::Granville { p: 7 }));
        assert!(all.contains(&Job::P2 { n: 2, a: 4 }));
    }

    #[test]
    fn b_list_is_trimmed_for_default_primes() {
        let mut cfg = SweepConfig::new(Target::Gen1);
        cfg.b = BSpec::List(vec![2]);
        cfg.n = Some(vec![1]);
        let jobs = plan(&cfg).unwrap();
        assert!(jobs.iter().all(|j| matches!(j, Job::Digit { ctx, .. } if ctx.p != 2)));
    }

    #[test]
    fn oversized_boxes_are_config_errors() {
        let mut cfg = SweepConfig::new(Target::Main);
        cfg.p = Some(vec![101]);
        cfg.n = Some(vec![3]);
        assert!(plan(&cfg).is_err());
        let mut cfg = SweepConfig::new(Target::Gen2);
        cfg.p = Some(vec![7]);
        cfg.n = Some(vec![9]);
        assert!(plan(&cfg).is_err());
    }

    #[test]
    fn samples_are_seeded() {
        let g = GranvilleConfig { samples: 50, ..GranvilleConfig::default() };
        assert_eq!(granville_samples(3, &g), granville_samples(3, &g));
        assert_ne!(granville_samples(3, &g), granville_samples(5, &g));
        assert!(granville_samples(2, &g).iter().all(|s| s.n <= g.n_max && s.j <= 6 && (1..=6).contains(&s.l)));
    }
}
