//! Dense-versus-block timing grid.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpd_core::means::geometric_mean_blocks;
use tpd_core::oracle::ORACLE_MAX_DIM;
use tpd_core::{sample, MeanPath, Oracle, Result, Tensor3};

use crate::fmt;

pub const CSV_HEADER: &str = "n,p,path,wall_time_s,rel_agreement,repetitions";

#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub n: usize,
    pub p: usize,
    pub path: MeanPath,
    pub wall_time_s: f64,
    pub rel_agreement: Option<f64>,
    pub repetitions: usize,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub n_list: Vec<usize>,
    pub p_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub force_dense: bool,
}

/// Input pair for grid point `(n, p)`; depends only on `seed`, `n` and `p`.
pub fn inputs(seed: u64, n: usize, p: usize) -> (Tensor3, Tensor3) {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((n as u64) << 32)
        .wrapping_add(p as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(mix);
    (sample::tpd(&mut rng, n, p, true), sample::tpd(&mut rng, n, p, true))
}

/// Runs `f` `reps` times and keeps the fastest wall time.
fn time_min<T>(reps: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, Duration)> {
    let mut best: Option<(T, Duration)> = None;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let out = f()?;
        let elapsed = start.elapsed();
        if best.as_ref().is_none_or(|(_, d)| elapsed < *d) {
            best = Some((out, elapsed));
        }
    }
    Ok(best.expect("at least one repetition"))
}

pub fn run_point(n: usize, p: usize, cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let (a, b) = inputs(cfg.seed, n, p);
    let reps = cfg.reps.max(1);
    let (fast, t_fast) = time_min(reps, || geometric_mean_blocks(&a, &b))?;
    let mut out = vec![BenchRecord {
        n,
        p,
        path: MeanPath::FourierBlocks,
        wall_time_s: t_fast.as_secs_f64(),
        rel_agreement: None,
        repetitions: reps,
    }];
    if n * p <= ORACLE_MAX_DIM || cfg.force_dense {
        let oracle = if cfg.force_dense { Oracle::unbounded() } else { Oracle::default() };
        let (dense, t_dense) = time_min(reps, || oracle.tensor_gmean(&a, &b))?;
        let agreement = fast.rel_diff(&dense);
        out[0].rel_agreement = Some(agreement);
        out.push(BenchRecord {
            n,
            p,
            path: MeanPath::DenseOracle,
            wall_time_s: t_dense.as_secs_f64(),
            rel_agreement: Some(agreement),
            repetitions: reps,
        });
    }
    Ok(out)
}

pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let mut rows = Vec::new();
    for &n in &cfg.n_list {
        for &p in &cfg.p_list {
            rows.extend(run_point(n, p, cfg)?);
        }
    }
    Ok(rows)
}

pub fn path_name(path: MeanPath) -> &'static str {
    match path {
        MeanPath::FourierBlocks => "FourierBlocks",
        MeanPath::DenseOracle => "DenseOracle",
    }
}

pub fn to_csv(rows: &[BenchRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let agreement = r.rel_agreement.map(fmt::real).unwrap_or_default();
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.n,
            r.p,
            path_name(r.path),
            fmt::real(r.wall_time_s),
            agreement,
            r.repetitions
        )
        .expect("writing to a String");
    }
    s
}
