//! Column-oriented tables: the covariates going in and the simulated
//! outcomes coming out. Columns are either numeric (f64, `inf` allowed for
//! cured/right-open values, `nan` for not-applicable latent cells) or
//! categorical (string levels).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Column::Numeric(_))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    names: Vec<String>,
    columns: Vec<Column>,
    n_rows: usize,
}

impl Table {
    pub fn new() -> Self {
        Table::default()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    /// Append a column; the first column fixes the row count.
    pub fn push(&mut self, name: &str, column: Column) -> Result<()> {
        if self.has_column(name) {
            return Err(Error::BadColumn {
                name: name.to_string(),
                message: "duplicate column name".to_string(),
            });
        }
        if self.columns.is_empty() {
            self.n_rows = column.len();
        } else if column.len() != self.n_rows {
            return Err(Error::LengthMismatch {
                message: format!(
                    "column `{name}` has {} rows, table has {}",
                    column.len(),
                    self.n_rows
                ),
            });
        }
        self.names.push(name.to_string());
        self.columns.push(column);
        Ok(())
    }

    /// Replace an existing column or append a new one.
    pub fn set(&mut self, name: &str, column: Column) -> Result<()> {
        if let Some(idx) = self.names.iter().position(|n| n == name) {
            if column.len() != self.n_rows {
                return Err(Error::LengthMismatch {
                    message: format!(
                        "column `{name}` has {} rows, table has {}",
                        column.len(),
                        self.n_rows
                    ),
                });
            }
            self.columns[idx] = column;
            Ok(())
        } else {
            self.push(name, column)
        }
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.columns[i])
            .ok_or_else(|| Error::MissingColumn {
                name: name.to_string(),
            })
    }

    pub fn numeric(&self, name: &str) -> Result<&[f64]> {
        match self.column(name)? {
            Column::Numeric(v) => Ok(v),
            Column::Categorical(_) => Err(Error::BadColumn {
                name: name.to_string(),
                message: "expected a numeric column".to_string(),
            }),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Column)> {
        self.names.iter().zip(self.columns.iter())
    }

    /// New table with the given columns, in the given order.
    pub fn select(&self, names: &[String]) -> Result<Table> {
        let mut out = Table::new();
        // An empty table keeps the declared shape even at zero columns of data.
        out.n_rows = self.n_rows;
        for name in names {
            out.push(name, self.column(name)?.clone())?;
        }
        Ok(out)
    }
}
