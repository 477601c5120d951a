use inckm::store::{save_model, StoredModel};
use inckm::{lloyd_fit, FitConfig};

use crate::args::FitArgs;
use crate::error::CliError;
use crate::input::{load_dataset, options, parse_init, timestamp};
use crate::table::show_model;

pub fn run(args: &FitArgs) -> Result<(), CliError> {
    let init = parse_init(&args.init)?;
    let ds = load_dataset(&args.data, !args.input.no_header, &options(&args.input))?;
    if ds.is_empty() {
        return Err(CliError::Data(format!("{}: no records", args.data.display())));
    }
    let config = FitConfig::new(args.k, args.metric)
        .with_init(init)
        .with_max_iterations(args.max_iterations);
    let fit = lloyd_fit(&ds.records, &config)?;
    if !fit.converged {
        eprintln!("warning: stopped after {} iterations without converging", args.max_iterations);
    }

    let stored = StoredModel {
        model: fit.model,
        dataset_fingerprint: ds.fingerprint(),
        attribute_names: ds.attribute_names,
        created_at: timestamp()?,
        record_count: ds.records.len() as u64,
        inserted_since_fit: 0,
        deleted_since_fit: 0,
        members: ds.records.into_iter().collect(),
    };
    save_model(&stored, &args.model_out)?;
    println!(
        "fitted {} records into {} clusters; model written to {}",
        stored.record_count,
        stored.model.k(),
        args.model_out.display()
    );
    println!();
    show_model(&stored, args.out_dir.as_deref())
}
