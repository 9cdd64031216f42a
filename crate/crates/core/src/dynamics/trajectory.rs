use crate::error::{arg_err, Result};

/// Observables recorded on a uniform time grid (times in periods).
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    columns: Vec<(String, Vec<f64>)>,
    /// Elementary steps between consecutive records.
    pub record_stride: usize,
}

impl Trajectory {
    pub fn new(names: &[&str], record_stride: usize) -> Self {
        Self {
            times: Vec::new(),
            columns: names.iter().map(|n| (n.to_string(), Vec::new())).collect(),
            record_stride,
        }
    }

    /// Assembles a trajectory from finished columns.
    pub fn from_columns(times: Vec<f64>, columns: Vec<(String, Vec<f64>)>, record_stride: usize) -> Result<Self> {
        if columns.iter().any(|(_, c)| c.len() != times.len()) {
            return arg_err("every column must have one value per time point");
        }
        Ok(Self { times, columns, record_stride })
    }

    pub fn push(&mut self, t: f64, row: &[f64]) {
        assert_eq!(row.len(), self.columns.len(), "row length does not match the column count");
        self.times.push(t);
        for ((_, col), &x) in self.columns.iter_mut().zip(row) {
            col.push(x);
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_slice())
    }

    /// P_D(t).
    pub fn donor_population(&self) -> Option<&[f64]> {
        self.column("P_D")
    }

    pub fn columns(&self) -> &[(String, Vec<f64>)] {
        &self.columns
    }

    /// Largest |a(t) − b(t)| over the common grid points of two trajectories.
    ///
    /// Points are matched by time within 1e-9 periods.
    pub fn max_deviation(&self, other: &Trajectory, column: &str) -> Result<f64> {
        let (Some(a), Some(b)) = (self.column(column), other.column(column)) else {
            return arg_err(format!("column {column} missing"));
        };
        let mut j = 0;
        let mut worst: f64 = 0.0;
        let mut matched = 0;
        for (i, &t) in self.times.iter().enumerate() {
            while j < other.times.len() && other.times[j] < t - 1e-9 {
                j += 1;
            }
            if j < other.times.len() && (other.times[j] - t).abs() <= 1e-9 {
                worst = worst.max((a[i] - b[j]).abs());
                matched += 1;
            }
        }
        if matched == 0 {
            return arg_err("trajectories share no time points");
        }
        Ok(worst)
    }
}
