//! Scalability workload: the `java Run.java` / `java Meta.java` pair with
//! every token list repeated `size` times.

use std::time::{Duration, Instant};

use crate::exec::Exec;
use crate::samples;
use crate::synthesis::{synth_rules, Example, SynthConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Lazy,
    NonLazy,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    pub seconds: f64,
}

pub fn workload(size: usize) -> Vec<Example> {
    samples::repeated(&samples::run_meta(), size)
}

/// Runs one synthesis; panics if it fails, since the workload always has a rule.
pub fn time_once(mode: Mode, es: &[Example], cfg: &SynthConfig) -> Duration {
    let start = Instant::now();
    let rule = match mode {
        Mode::Lazy => synth_rules(es, cfg),
        Mode::NonLazy => crate::oracle::nonlazy_synth(es, cfg),
    };
    let elapsed = start.elapsed();
    assert!(rule.is_some(), "benchmark workload must be synthesizable");
    elapsed
}

/// Median of `runs` sequential timings per size.
pub fn run(sizes: &[usize], mode: Mode, runs: usize) -> Vec<BenchRow> {
    let cfg = SynthConfig {
        exec: Exec::Sequential,
        ..SynthConfig::default()
    };
    sizes
        .iter()
        .map(|&size| {
            let es = workload(size);
            let mut times: Vec<f64> = (0..runs.max(1))
                .map(|_| time_once(mode, &es, &cfg).as_secs_f64())
                .collect();
            times.sort_by(f64::total_cmp);
            BenchRow {
                size,
                seconds: times[times.len() / 2],
            }
        })
        .collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("size,seconds\n");
    for r in rows {
        out.push_str(&format!("{},{:.6}\n", r.size, r.seconds));
    }
    out
}
