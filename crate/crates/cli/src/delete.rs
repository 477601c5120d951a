use inckm::incremental_delete;
use inckm::store::{load_model, save_model, MemberTable};
use inckm::RecordId;

use crate::args::DeleteArgs;
use crate::error::CliError;
use crate::table::show_model;

pub fn run(args: &DeleteArgs) -> Result<(), CliError> {
    let mut stored = load_model(&args.model)?;
    let ids = args
        .records
        .iter()
        .map(|t| resolve(t, args.by_label, &stored.members))
        .collect::<Result<Vec<_>, _>>()?;

    if !ids.is_empty() {
        incremental_delete(&mut stored.model, &ids, &stored.members)?;
        for id in &ids {
            stored.members.remove(*id);
        }
        stored.deleted_since_fit += ids.len() as u64;
        save_model(&stored, &args.model)?;
    }
    println!("{} records deleted", ids.len());
    println!();
    show_model(&stored, args.out_dir.as_deref())
}

fn resolve(token: &str, by_label: bool, members: &MemberTable) -> Result<RecordId, CliError> {
    if !by_label {
        if let Ok(id) = token.parse::<u64>() {
            return Ok(RecordId(id));
        }
    }
    let matches: Vec<RecordId> = members
        .iter()
        .filter(|r| r.label.as_deref() == Some(token))
        .map(|r| r.id)
        .collect();
    match matches.as_slice() {
        [id] => Ok(*id),
        [] => Err(CliError::Data(format!("no record labelled {token:?}"))),
        many => Err(CliError::Data(format!(
            "label {token:?} matches {} records (ids {}); delete by id instead",
            many.len(),
            many.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        ))),
    }
}
