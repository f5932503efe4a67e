use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use rayon::prelude::*;

use super::config::{ExperimentConfig, Threads};
use super::fit::{format_lln_table, lln_table};
use super::plot;
use super::record::{csv_writer, TrialRecord, TrialStatus, RESULTS_HEADER};
use super::run_spec;
use crate::error::{Error, Result};

/// Environment variable overriding the configured worker count.
pub const THREADS_ENV: &str = "AREATRAP_THREADS";

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Explicit worker count; wins over the environment and the config.
    pub threads: Option<usize>,
    /// Stop launching trials after this many have started. Used to test
    /// recovery from interrupted sweeps.
    pub abort_after: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub trials: usize,
    pub solved: usize,
    pub infeasible: usize,
    pub threads: usize,
    /// Every file written, results first.
    pub written: Vec<PathBuf>,
    pub records: Vec<TrialRecord>,
}

/// Worker count: explicit value, then `AREATRAP_THREADS`, then the config.
pub fn resolve_threads(explicit: Option<usize>, configured: Threads) -> Result<usize> {
    if let Some(k) = explicit {
        return if k == 0 {
            Err(Error::Validation("thread count must be at least 1".into()))
        } else {
            Ok(k)
        };
    }
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        return match raw.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(k),
            _ => Err(Error::Validation(format!("{THREADS_ENV}={raw:?} is not a positive integer"))),
        };
    }
    Ok(match configured {
        Threads::Fixed(k) => k,
        Threads::Auto => std::thread::available_parallelism().map_or(1, |k| k.get()),
    })
}

pub(crate) fn marker_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".incomplete");
    out.with_file_name(name)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Runs every trial of the config and writes results sorted by trial index.
///
/// Rows are flushed as soon as they extend the completed prefix, so an
/// interrupted sweep leaves a valid CSV of the first trials next to an
/// `<out>.incomplete` marker.
pub fn sweep(config: &ExperimentConfig, out: &Path, opts: &SweepOptions) -> Result<SweepSummary> {
    config.validate()?;
    let threads = resolve_threads(opts.threads, config.threads)?;
    let specs = config.trials();

    let file = File::create(out).map_err(|e| Error::io(out, e))?;
    let marker = marker_path(out);
    fs::write(&marker, b"").map_err(|e| Error::io(&marker, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;

    let (tx, rx) = mpsc::channel::<(usize, TrialRecord)>();
    let started = AtomicUsize::new(0);
    let (computed, written) = std::thread::scope(|s| {
        let writer = s.spawn(move || -> Result<Vec<TrialRecord>> {
            let mut w = csv_writer(BufWriter::new(file));
            let flush = |w: &mut csv::Writer<BufWriter<File>>| w.flush().map_err(|e| Error::io(out, e));
            w.write_record(RESULTS_HEADER)?;
            flush(&mut w)?;
            let mut pending = BTreeMap::new();
            let mut done = Vec::new();
            for (i, rec) in rx {
                pending.insert(i, rec);
                while let Some(rec) = pending.remove(&done.len()) {
                    w.write_record(rec.cells())?;
                    done.push(rec);
                }
                flush(&mut w)?;
            }
            Ok(done)
        });
        let computed = pool.install(|| {
            specs.par_iter().enumerate().try_for_each_with(tx, |tx, (i, spec)| {
                if let Some(k) = opts.abort_after {
                    if started.fetch_add(1, Ordering::SeqCst) >= k {
                        return Err(Error::Interrupted { completed: 0 });
                    }
                }
                let rec = run_spec(config, spec)?.record;
                // a closed channel means the writer failed; it reports why
                let _ = tx.send((i, rec));
                Ok(())
            })
        });
        (computed, writer.join().expect("writer thread panicked"))
    });
    let records = written?;
    match computed {
        Err(Error::Interrupted { .. }) => {
            return Err(Error::Interrupted {
                completed: records.len(),
            })
        }
        Err(e) => return Err(e),
        Ok(()) => {}
    }

    let mut files = vec![out.to_path_buf()];
    let o = &config.outputs;
    if let Some(p) = &o.lln_table {
        let p = config.resolve(p);
        write_text(&p, &format_lln_table(&lln_table(&records)?))?;
        files.push(p);
    }
    if let Some(p) = &o.exponents_svg {
        let p = config.resolve(p);
        write_text(&p, &plot::exponents_figure(&records, plot::EXPONENT_FIELDS)?.to_svg()?)?;
        files.push(p);
    }
    if let Some(p) = &o.lln_svg {
        let p = config.resolve(p);
        write_text(&p, &plot::lln_figure(&records)?.to_svg()?)?;
        files.push(p);
    }
    fs::remove_file(&marker).map_err(|e| Error::io(&marker, e))?;

    let solved = records.iter().filter(|r| r.status == TrialStatus::Solved).count();
    Ok(SweepSummary {
        trials: records.len(),
        solved,
        infeasible: records.len() - solved,
        threads,
        written: files,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mini() -> ExperimentConfig {
        ExperimentConfig::from_json(
            r#"{"master_seed": 5, "n_values": [8, 12, 16], "alpha_values": [0.1, 0.3],
                "replicates": 2}"#,
        )
        .unwrap()
    }

    #[test]
    fn row_count_and_order() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.csv");
        let s = sweep(&mini(), &out, &SweepOptions { threads: Some(2), ..Default::default() }).unwrap();
        assert_eq!(s.trials, 12);
        let recs = super::super::read_records(File::open(&out).unwrap()).unwrap();
        assert_eq!(recs.len(), 12);
        assert!(recs.iter().enumerate().all(|(i, r)| r.trial_index == i as u64));
        assert!(!marker_path(&out).exists());
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        sweep(&mini(), &a, &SweepOptions { threads: Some(1), ..Default::default() }).unwrap();
        sweep(&mini(), &b, &SweepOptions { threads: Some(8), ..Default::default() }).unwrap();
        assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    }

    #[test]
    fn interrupted_sweep_leaves_marker_and_prefix() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.csv");
        let opts = SweepOptions {
            threads: Some(1),
            abort_after: Some(5),
        };
        match sweep(&mini(), &out, &opts) {
            Err(Error::Interrupted { completed }) => assert_eq!(completed, 5),
            other => panic!("{other:?}"),
        }
        assert!(marker_path(&out).exists());
        let partial = super::super::read_records(File::open(&out).unwrap()).unwrap();
        assert_eq!(partial.len(), 5);

        sweep(&mini(), &out, &SweepOptions { threads: Some(1), ..Default::default() }).unwrap();
        assert!(!marker_path(&out).exists());
        let full = super::super::read_records(File::open(&out).unwrap()).unwrap();
        assert_eq!(&full[..5], &partial[..]);
    }

    #[test]
    fn unwritable_output_fails_before_compute() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("missing").join("r.csv");
        assert!(matches!(sweep(&mini(), &out, &SweepOptions::default()), Err(Error::Io { .. })));
    }
}
