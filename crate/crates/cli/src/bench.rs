use inckm::bench::{
    emit_report, estimate_threshold, read_replay, render_summary, resample, run_benchmark, BatchSource, BenchConfig,
    CostBasis, DeltaSeries,
};
use inckm::ingest::{Dataset, IngestOptions};
use inckm::Record;

use crate::args::BenchArgs;
use crate::error::CliError;
use crate::input::{load_dataset, options};
use crate::registry;

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    let has_header = !args.input.no_header;
    let dataset = match &args.data {
        Some(path) => Some(load_dataset(path, has_header, &options(&args.input))?),
        None => None,
    };
    let series = match (&args.replay, &dataset) {
        (Some(replay), _) => read_replay(replay)?,
        (None, Some(ds)) => measure(ds, args)?,
        (None, None) => return Err(CliError::Usage("a dataset or --replay is required".into())),
    };

    let mut estimates = vec![estimate_threshold(&series, CostBasis::WallTime)];
    if series.has_counters {
        estimates.push(estimate_threshold(&series, CostBasis::DistanceEvals));
    }
    print!("{}", render_summary(&series, &estimates));

    if let Some(dir) = &args.out_dir {
        emit_report(&series, &estimates, dir)?;
        println!("report written to {}", dir.display());
    }
    if let Some(ds) = &dataset {
        let wall = &estimates[0];
        let path = registry::resolve(args.registry.as_deref());
        let fingerprint = ds.fingerprint();
        registry::record(
            &path,
            &fingerprint,
            registry::Entry {
                crossover_percent: wall.crossover_percent(),
                max_delta_percent: wall.range.1,
                basis: wall.basis.to_string(),
            },
        )?;
        println!("threshold recorded for dataset {} in {}", &fingerprint[..12], path.display());
    }
    Ok(())
}

fn measure(ds: &Dataset, args: &BenchArgs) -> Result<DeltaSeries, CliError> {
    let largest = args.deltas.iter().copied().max().unwrap_or(0);
    let mut base: Vec<Record> = ds.records.iter().take(args.base_size).cloned().collect();
    if base.len() < args.base_size {
        if !args.synthesize || ds.is_empty() {
            return Err(CliError::Data(format!(
                "dataset has {} records but --base-size is {}; pass --synthesize to pad it",
                ds.len(),
                args.base_size
            )));
        }
        let next = ds.records.iter().map(|r| r.id.0).max().map_or(0, |m| m + 1);
        let pad = resample(&ds.records, args.base_size - base.len(), args.noise, args.seed, next);
        base.extend(pad);
    }

    let source = if let Some(ext) = &args.extension {
        let opts = IngestOptions {
            feature_columns: (!args.input.no_header).then(|| ds.attribute_names.clone()),
            id_column: None,
            skip_missing: args.input.skip_missing,
        };
        let extra = load_dataset(ext, !args.input.no_header, &opts)?;
        BatchSource::Extension(extra.records.into_iter().map(|r| r.vector).collect())
    } else if ds.len() >= args.base_size + largest {
        BatchSource::Extension(ds.records[args.base_size..].iter().map(|r| r.vector.clone()).collect())
    } else {
        BatchSource::Resample { noise: args.noise }
    };

    let config = BenchConfig {
        repetitions: args.repetitions,
        source,
        seed: args.seed,
        ..BenchConfig::default()
    };
    let base = Dataset::new(ds.attribute_names.clone(), base);
    Ok(run_benchmark(&base, &args.deltas, args.k, args.metric, &config)?)
}
