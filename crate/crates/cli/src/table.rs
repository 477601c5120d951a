//! Printed tables and their CSV copies.

use std::path::Path;

use inckm::store::StoredModel;

use crate::error::{io_error, CliError};

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn print(&self) {
        println!("{}", self.header.join("\t"));
        for r in &self.rows {
            println!("{}", r.join("\t"));
        }
    }

    pub fn write_csv(&self, dir: &Path, name: &str) -> Result<(), CliError> {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        let path = dir.join(name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| io_error(&path, e))?;
        w.write_record(&self.header).map_err(|e| io_error(&path, e))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| io_error(&path, e))?;
        }
        w.flush().map_err(|e| io_error(&path, e))
    }
}

pub fn cluster_means(m: &StoredModel) -> Table {
    let mut t = Table::new(
        std::iter::once("clusterid".to_string())
            .chain(std::iter::once("members".to_string()))
            .chain(m.attribute_names.iter().map(|a| format!("{a} mean"))),
    );
    for (i, c) in m.model.clusters().iter().enumerate() {
        let mut row = vec![format!("cluster{i}"), c.member_count().to_string()];
        row.extend(c.centroid().as_slice().iter().map(|x| format!("{x:.6}")));
        t.push(row);
    }
    t
}

pub fn run_parameters(m: &StoredModel) -> Table {
    let mut t = Table::new(["clusternumber", "distancefunction", "clusteriteration", "squareError"]);
    t.push(vec![
        m.model.k().to_string(),
        m.model.metric().tag().to_string(),
        m.model.iterations().to_string(),
        format!("{:.5}", m.model.square_error()),
    ]);
    t
}

/// Prints the means and run parameters, copying both to `out_dir` if set.
pub fn show_model(m: &StoredModel, out_dir: Option<&Path>) -> Result<(), CliError> {
    let means = cluster_means(m);
    let params = run_parameters(m);
    means.print();
    println!();
    params.print();
    if let Some(dir) = out_dir {
        means.write_csv(dir, "cluster_means.csv")?;
        params.write_csv(dir, "run_parameters.csv")?;
    }
    Ok(())
}
