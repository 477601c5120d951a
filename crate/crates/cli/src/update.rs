use inckm::bench::delta_percent;
use inckm::ingest::IngestOptions;
use inckm::store::{load_model, save_model};
use inckm::{incremental_insert, RecordId};

use crate::args::UpdateArgs;
use crate::error::CliError;
use crate::input::{is_blank, load_dataset};
use crate::registry;
use crate::table::Table;

pub fn run(args: &UpdateArgs) -> Result<(), CliError> {
    let mut stored = load_model(&args.model)?;
    let has_header = !args.no_header;
    let opts = IngestOptions {
        feature_columns: has_header.then(|| stored.attribute_names.clone()),
        id_column: args.id_column.clone(),
        skip_missing: args.skip_missing,
    };

    if let Some(base) = &args.base_data {
        let base_opts = IngestOptions {
            id_column: None,
            ..opts.clone()
        };
        let fp = load_dataset(base, has_header, &base_opts)?.fingerprint();
        if fp != stored.dataset_fingerprint {
            let msg = format!(
                "{} does not match the data the model was fitted on (fingerprint {} vs {})",
                base.display(),
                &fp[..12],
                &stored.dataset_fingerprint[..12.min(stored.dataset_fingerprint.len())]
            );
            if args.strict_fingerprint {
                return Err(CliError::Data(msg));
            }
            eprintln!("warning: {msg}");
        }
    }

    let mut batch = if is_blank(&args.data)? {
        Vec::new()
    } else {
        load_dataset(&args.data, has_header, &opts)?.records
    };
    if args.id_column.is_none() {
        let next = stored.members.max_id().map_or(0, |id| id.0 + 1);
        for (i, r) in batch.iter_mut().enumerate() {
            r.id = RecordId(next + i as u64);
        }
    }

    let assignments = incremental_insert(&mut stored.model, &batch, args.update_means)?;
    let mut table = Table::new(["id", "label", "cluster", "distance"]);
    for (r, a) in batch.iter().zip(&assignments) {
        let name = r.label.clone().unwrap_or_else(|| format!("#{}", r.id));
        println!("{name} -> cluster {} (distance {:.4})", a.cluster_index, a.distance);
        table.push(vec![
            r.id.to_string(),
            r.label.clone().unwrap_or_default(),
            a.cluster_index.to_string(),
            a.distance.to_string(),
        ]);
    }
    println!("{} records assigned", batch.len());

    if !batch.is_empty() {
        stored.inserted_since_fit += batch.len() as u64;
        for r in batch {
            stored.members.insert(r);
        }
        save_model(&stored, &args.model)?;
    }
    if let Some(dir) = &args.out_dir {
        table.write_csv(dir, "assignments.csv")?;
    }

    let base = stored.record_count as usize;
    let delta = delta_percent(base, base + stored.inserted_since_fit as usize)?;
    println!("δ = {delta:.1}%");
    advise(delta, &stored.dataset_fingerprint, args)
}

fn advise(delta: f64, fingerprint: &str, args: &UpdateArgs) -> Result<(), CliError> {
    let path = registry::resolve(args.registry.as_deref());
    let entry = registry::load(&path)?.remove(fingerprint);
    match (entry, args.threshold) {
        (Some(registry::Entry { crossover_percent: Some(t), .. }), _) => compare(delta, t, "measured by bench"),
        (_, Some(t)) => compare(delta, t, "from --threshold"),
        (Some(e), None) => {
            if delta > e.max_delta_percent {
                println!(
                    "advice: δ {delta:.1}% is beyond the benchmarked range (up to {:.1}%); rerun bench to locate the threshold",
                    e.max_delta_percent
                );
            } else {
                println!(
                    "advice: incremental insertion was cheaper throughout the benchmarked range (up to {:.1}%); keep the incremental result",
                    e.max_delta_percent
                );
            }
        }
        (None, None) => eprintln!(
            "warning: no threshold configured for this model; run `inckm bench` on its dataset or pass --threshold"
        ),
    }
    Ok(())
}

fn compare(delta: f64, threshold: f64, source: &str) {
    if delta > threshold {
        println!(
            "advice: δ {delta:.1}% exceeds the {threshold:.1}% threshold ({source}); rerun K-means on the whole database"
        );
    } else {
        println!("advice: δ {delta:.1}% is within the {threshold:.1}% threshold ({source}); keep the incremental result");
    }
}
