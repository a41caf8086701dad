//! Column-oriented result tables and their CSV encoding.

use std::path::Path;

use pseudochiral::C64;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
        }
    }
}

/// A rectangular table; complex quantities occupy a `_re`/`_im` column pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        ResultTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Row) {
        assert_eq!(
            row.0.len(),
            self.header.len(),
            "row width does not match header"
        );
        self.rows.push(row.0);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Experiment(format!("csv encoding: {e}"));
        w.write_record(&self.header).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render()))
                .map_err(fail)?;
        }
        w.into_inner()
            .map_err(|e| CliError::Experiment(format!("csv encoding: {e}")))
    }
}

/// Builder for one table row.
#[derive(Debug, Clone, Default)]
pub struct Row(Vec<Cell>);

impl Row {
    pub fn new() -> Self {
        Row(Vec::new())
    }

    pub fn real(mut self, v: f64) -> Self {
        self.0.push(Cell::Real(v));
        self
    }

    pub fn int(mut self, v: i64) -> Self {
        self.0.push(Cell::Int(v));
        self
    }

    pub fn complex(self, z: C64) -> Self {
        self.real(z.re).real(z.im)
    }
}

/// Header names for a complex column.
pub fn complex_columns(name: &str) -> [String; 2] {
    [format!("{name}_re"), format!("{name}_im")]
}

/// Files produced by one run, held in memory until everything has been computed.
#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn add_table(&mut self, name: &str, table: &ResultTable) -> CliResult<()> {
        let bytes = table.to_csv()?;
        self.files.push((name.to_string(), bytes));
        Ok(())
    }

    pub fn add_json(&mut self, name: &str, value: &serde_json::Value) -> CliResult<()> {
        let mut bytes = serde_json::to_vec_pretty(value)
            .map_err(|e| CliError::Experiment(format!("json encoding: {e}")))?;
        bytes.push(b'\n');
        self.files.push((name.to_string(), bytes));
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, b)| b.as_slice())
    }

    pub fn write_all(&self, dir: &Path) -> CliResult<()> {
        let io = |path: &Path| {
            let path = path.display().to_string();
            move |source| CliError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(io(&path))?;
        }
        Ok(())
    }
}
