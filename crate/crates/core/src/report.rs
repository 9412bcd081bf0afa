//! File outputs: trace CSV, run report JSON, benchmark CSV and DOT exports.
//!
//! Trace columns: `iteration,edges,acceptance,log_pi`.
//! Bench columns: `backend,n,iterations,seconds,final_edges,acceptance`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repr::BackendKind;
use crate::sampler::{BackendSelection, Sampler, SamplerConfig, TraceRecord};
use crate::scalar::Scalar;

pub const TRACE_FILE: &str = "trace.csv";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: u64,
    pub edges: usize,
    pub acceptance: f64,
    pub log_pi: f64,
}

impl<T: Scalar> From<&TraceRecord<T>> for TraceRow {
    fn from(r: &TraceRecord<T>) -> Self {
        Self {
            iteration: r.iteration,
            edges: r.edges,
            acceptance: r.acceptance,
            log_pi: r.log_pi.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// Streams trace rows to CSV.
pub struct TraceWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl TraceWriter<BufWriter<File>> {
    pub fn create(path: &Path) -> Result<Self> {
        Ok(Self::new(BufWriter::new(File::create(path)?)))
    }
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        Self {
            inner: csv::Writer::from_writer(out),
        }
    }

    pub fn write<T: Scalar>(&mut self, record: &TraceRecord<T>) -> Result<()> {
        self.inner.serialize(TraceRow::from(record))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| Error::Io(e.to_string()))
    }
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: SamplerConfig,
    pub wall_seconds: f64,
    pub iterations_per_sec: f64,
    pub final_edges: usize,
    /// Applied proportion over the whole run.
    pub mean_acceptance: f64,
    pub trace_path: Option<PathBuf>,
}

impl RunReport {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut f, self)?;
        writeln!(f)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(File::open(path)?)?)
    }
}

fn rate(iterations: u64, seconds: f64) -> f64 {
    if seconds > 0.0 {
        iterations as f64 / seconds
    } else {
        0.0
    }
}

/// Runs `config` to completion, writing `trace.csv` and `report.json` into
/// `out_dir`. The finished sampler is returned for export.
pub fn sample_to_dir(config: &SamplerConfig, out_dir: &Path) -> Result<(RunReport, Sampler<f64>)> {
    fs::create_dir_all(out_dir)?;
    let trace_path = out_dir.join(TRACE_FILE);
    let mut sampler = Sampler::<f64>::new(config.clone())?;
    let mut writer = TraceWriter::create(&trace_path)?;
    let start = Instant::now();
    sampler.run_with(|r| writer.write(r))?;
    if config.backend == BackendSelection::All {
        sampler.check_agreement(0, 0)?;
    }
    let wall_seconds = start.elapsed().as_secs_f64();
    writer.finish()?;
    let report = RunReport {
        config: config.clone(),
        wall_seconds,
        iterations_per_sec: rate(config.iterations, wall_seconds),
        final_edges: sampler.edge_count(),
        mean_acceptance: sampler.acceptance().overall(),
        trace_path: Some(trace_path),
    };
    report.write(&out_dir.join(REPORT_FILE))?;
    Ok((report, sampler))
}

/// The four DOT views of the sampler's final state, as `(file name, text)`.
/// Views for backends that were not part of the run are rebuilt by replaying
/// the same configuration with every backend.
pub fn dot_views(sampler: &Sampler<f64>) -> Result<Vec<(String, String)>> {
    let replayed;
    let source = if sampler.config().backend == BackendSelection::All {
        sampler
    } else {
        let mut cfg = sampler.config().clone();
        cfg.backend = BackendSelection::All;
        cfg.iterations = sampler.iteration();
        let mut s = Sampler::<f64>::new(cfg)?;
        s.run_with(|_| Ok(()))?;
        replayed = s;
        &replayed
    };
    Ok(source
        .representations()
        .into_iter()
        .map(|r| (format!("{}.dot", r.kind()), r.to_dot()))
        .collect())
}

pub fn write_dot_views(sampler: &Sampler<f64>, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut paths = Vec::new();
    for (name, text) in dot_views(sampler)? {
        let path = out_dir.join(name);
        fs::write(&path, text)?;
        paths.push(path);
    }
    Ok(paths)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub backend: BackendKind,
    pub n: usize,
    pub iterations: u64,
    pub seconds: f64,
    pub final_edges: usize,
    pub acceptance: f64,
}

/// One timed run per `(n, backend)` cell, all with the same seed.
#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub sizes: Vec<usize>,
    pub backends: Vec<BackendKind>,
    pub iterations: u64,
    pub seed: u64,
    pub model: crate::potentials::ModelSpec,
    pub restricted_search: bool,
    /// Run cells on separate threads. Timings then compete for cores.
    pub parallel: bool,
}

impl BenchSpec {
    fn cells(&self) -> Vec<SamplerConfig> {
        let mut out = Vec::new();
        for &n in &self.sizes {
            for &kind in &self.backends {
                let mut cfg = SamplerConfig::new(n, self.iterations, self.seed)
                    .with_model(self.model)
                    .with_backend(kind.into());
                cfg.restricted_search = self.restricted_search;
                out.push(cfg);
            }
        }
        out
    }

    pub fn run(&self) -> Result<Vec<BenchRow>> {
        let cells = self.cells();
        for cfg in &cells {
            cfg.validate()?;
        }
        if !self.parallel {
            return cells.iter().map(bench_cell).collect();
        }
        std::thread::scope(|scope| {
            let handles: Vec<_> = cells.iter().map(|cfg| scope.spawn(move || bench_cell(cfg))).collect();
            handles
                .into_iter()
                .map(|h| {
                    h.join()
                        .unwrap_or_else(|_| Err(Error::Io("bench cell panicked".into())))
                })
                .collect()
        })
    }
}

fn bench_cell(cfg: &SamplerConfig) -> Result<BenchRow> {
    let mut sampler = Sampler::<f64>::new(cfg.clone())?;
    let start = Instant::now();
    sampler.run_with(|_| Ok(()))?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(BenchRow {
        backend: cfg.backend.kinds()[0],
        n: cfg.n,
        iterations: cfg.iterations,
        seconds,
        final_edges: sampler.edge_count(),
        acceptance: sampler.acceptance().overall(),
    })
}

pub fn write_bench(rows: &[BenchRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bench(path: &Path) -> Result<Vec<BenchRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::ModelSpec;

    #[test]
    fn trace_csv_has_the_documented_header() {
        let mut s = Sampler::<f64>::new(SamplerConfig::new(5, 3, 1)).unwrap();
        let mut w = TraceWriter::new(Vec::new());
        s.run_with(|r| w.write(r)).unwrap();
        let text = String::from_utf8(w.finish().unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("iteration,edges,acceptance,log_pi"));
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn sample_and_export_round_trip() {
        let dir = std::env::temp_dir().join(format!("decos-report-{}", std::process::id()));
        let cfg = SamplerConfig::new(6, 500, 3)
            .with_model(ModelSpec::EdgePenalty { alpha: 0.5 })
            .with_thin(10);
        let (report, sampler) = sample_to_dir(&cfg, &dir).unwrap();
        assert_eq!(RunReport::read(&dir.join(REPORT_FILE)).unwrap(), report);
        let rows = read_trace(&dir.join(TRACE_FILE)).unwrap();
        assert_eq!(rows.len(), 50);
        assert_eq!(rows.last().unwrap().edges, report.final_edges);
        assert!((0.0..=1.0).contains(&report.mean_acceptance));

        let views = dot_views(&sampler).unwrap();
        let names: Vec<_> = views.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["graph.dot", "junction.dot", "almond.dot", "ibarra.dot"]);
        let edges = views[0].1.matches(" -- ").count();
        assert_eq!(edges, report.final_edges);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn bench_rows_are_reproducible_apart_from_timing() {
        let spec = BenchSpec {
            sizes: vec![6, 9],
            backends: BackendKind::ALL.to_vec(),
            iterations: 2000,
            seed: 5,
            model: ModelSpec::Uniform,
            restricted_search: false,
            parallel: false,
        };
        let strip = |rows: Vec<BenchRow>| {
            rows.into_iter()
                .map(|r| (r.backend, r.n, r.iterations, r.final_edges, r.acceptance.to_bits()))
                .collect::<Vec<_>>()
        };
        let a = strip(spec.run().unwrap());
        let b = strip(
            BenchSpec {
                parallel: true,
                ..spec.clone()
            }
            .run()
            .unwrap(),
        );
        assert_eq!(a.len(), 8);
        assert_eq!(a, b);
        // Same seed, same chain: every backend lands on the same graph.
        assert!(a.chunks(4).all(|c| c.iter().all(|r| r.3 == c[0].3)));
    }
}
