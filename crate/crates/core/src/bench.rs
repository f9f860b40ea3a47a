//! Size and exactness benchmark over generated instances.

use crate::error::Result;
use crate::generate::{generate, suite, InstanceSpec};
use crate::knz::build_knz_minor;
use crate::pipeline::{build, BuildConfig};
use crate::verify::verify_emulator;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::time::Instant;

/// Either an explicit list of instances or the first `suite` suite entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BenchSpec {
    List(Vec<InstanceSpec>),
    Suite { suite: usize },
}

impl BenchSpec {
    pub fn instances(&self) -> Vec<InstanceSpec> {
        match self {
            BenchSpec::List(v) => v.clone(),
            BenchSpec::Suite { suite: n } => suite(*n),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub seed: u64,
    pub f: usize,
    pub k: usize,
    #[serde(rename = "|V(G)|")]
    pub n_g: usize,
    #[serde(rename = "|V(H)|")]
    pub n_h: usize,
    #[serde(rename = "|V(KNZ)|")]
    pub n_knz: usize,
    #[serde(rename = "exact?")]
    pub exact: bool,
    pub lp_iters: usize,
    pub elim_iters: usize,
    pub wall_ms: u128,
}

pub fn bench_one(spec: &InstanceSpec) -> Result<BenchRow> {
    let inst = generate(spec)?;
    let start = Instant::now();
    let built = build(&inst, &BuildConfig { seed: spec.seed, ..Default::default() })?;
    let wall_ms = start.elapsed().as_millis();
    let report = verify_emulator(&inst, &built.emulator)?;
    let knz = build_knz_minor(&inst)?;
    Ok(BenchRow {
        seed: spec.seed,
        f: inst.f(),
        k: built.stats.k,
        n_g: inst.graph.n(),
        n_h: built.emulator.graph.n(),
        n_knz: knz.emulator.graph.n(),
        exact: report.ok(),
        lp_iters: built.stats.lp_rounds,
        elim_iters: built.stats.elim_iterations,
        wall_ms,
    })
}

/// Runs every instance independently, in parallel.
pub fn run_bench(specs: &[InstanceSpec]) -> Result<Vec<BenchRow>> {
    specs.par_iter().map(bench_one).collect()
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| crate::error::Error::Internal(format!("csv: {e}")))?;
    }
    w.flush()?;
    Ok(())
}
