//! One-parameter sweeps over `phitheta`, emitted as CSV.

use std::collections::HashMap;
use std::fmt::Write;

use kprod_core::measures::Reduction;
use kprod_core::partitions::family;
use kprod_core::{states, MeasureParam, MeasureRegistry, Partition, Tolerances};
use rayon::prelude::*;

use crate::{parse_real, CliError};

/// `measure:p:k`, e.g. `pe:2:2` or `gpe:1/3:2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub measure: String,
    pub param: MeasureParam,
}

impl Series {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let [measure, p, k] = parts[..] else {
            return Err(CliError::Usage(format!("series `{text}` is not measure:p:k")));
        };
        let k: usize = k.parse().map_err(|_| CliError::Usage(format!("bad k in series `{text}`")))?;
        Ok(Self {
            label: text.to_string(),
            measure: measure.to_string(),
            param: MeasureParam::new(parse_real(p)?, k)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub series: Vec<Series>,
}

impl SweepSpec {
    pub fn grid(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        (0..self.steps)
            .map(|i| self.start + span * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.steps < 2 {
            return Err(CliError::Usage("a sweep needs at least 2 steps".into()));
        }
        let inside = |x: f64| (0.0..=90.0).contains(&x);
        if !inside(self.start) || !inside(self.stop) {
            return Err(CliError::Usage("phitheta grid must lie within [0, 90] degrees".into()));
        }
        if self.series.is_empty() {
            return Err(CliError::Usage("no series requested".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub value: f64,
    /// Minimizing partitions, present for min-type measures.
    pub argmin: Option<Vec<Partition>>,
}

#[derive(Debug, Clone)]
pub struct Kink {
    pub series: usize,
    /// Grid indices `i` and `i + 1` whose argmin sets differ.
    pub between: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub theta: Vec<f64>,
    /// `rows[i][s]` for grid point `i` and series `s`.
    pub rows: Vec<Vec<Cell>>,
}

pub fn run(spec: &SweepSpec, registry: &MeasureRegistry, tol: &Tolerances) -> Result<SweepTable, CliError> {
    spec.validate()?;
    let measures = spec
        .series
        .iter()
        .map(|s| registry.get(&s.measure))
        .collect::<Result<Vec<_>, _>>()?;
    let theta = spec.grid();
    let rows = theta
        .par_iter()
        .map(|&t| {
            let state = states::phitheta(t);
            spec.series
                .iter()
                .zip(&measures)
                .map(|(series, m)| {
                    let report = m.evaluate(&state, &series.param, tol)?;
                    let argmin = (report.reduction == Reduction::Min).then_some(report.argmin);
                    Ok(Cell {
                        value: report.value,
                        argmin,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepTable {
        spec: spec.clone(),
        theta,
        rows,
    })
}

impl SweepTable {
    pub fn column(&self, series: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[series].value).collect()
    }

    pub fn kinks(&self) -> Vec<Kink> {
        let mut out = Vec::new();
        for s in 0..self.spec.series.len() {
            for i in 0..self.rows.len().saturating_sub(1) {
                let (a, b) = (&self.rows[i][s].argmin, &self.rows[i + 1][s].argmin);
                if a.is_some() && a != b {
                    out.push(Kink {
                        series: s,
                        between: (i, i + 1),
                    });
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        // partition ids are positions in the enumeration order of each series' family
        let mut ids: Vec<Option<HashMap<Partition, usize>>> = Vec::new();
        let n = states::phitheta(0.0).n();
        for (s, series) in self.spec.series.iter().enumerate() {
            let min_type = self.rows.first().is_some_and(|r| r[s].argmin.is_some());
            ids.push(if min_type {
                let genuine = series.measure.starts_with("genuine");
                let fam = family(n, series.param.k(), genuine)?;
                Some(fam.into_iter().enumerate().map(|(i, p)| (p, i)).collect())
            } else {
                None
            });
        }

        let mut out = String::from("theta_deg");
        for (series, ids) in self.spec.series.iter().zip(&ids) {
            write!(out, ",{}", series.label).unwrap();
            if ids.is_some() {
                write!(out, ",{}:argmin_partition_id", series.label).unwrap();
            }
        }
        out.push('\n');
        for (t, row) in self.theta.iter().zip(&self.rows) {
            write!(out, "{t}").unwrap();
            for (cell, ids) in row.iter().zip(&ids) {
                write!(out, ",{}", cell.value).unwrap();
                if let Some(ids) = ids {
                    let first = cell.argmin.as_ref().and_then(|a| a.first());
                    match first {
                        Some(p) => write!(out, ",{}", ids[p]).unwrap(),
                        None => out.push(','),
                    }
                }
            }
            out.push('\n');
        }
        let show = |set: &Option<Vec<Partition>>| {
            set.iter()
                .flatten()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        for kink in self.kinks() {
            let (i, j) = kink.between;
            writeln!(
                out,
                "# kink {} theta_deg {} -> {}: [{}] -> [{}]",
                self.spec.series[kink.series].label,
                self.theta[i],
                self.theta[j],
                show(&self.rows[i][kink.series].argmin),
                show(&self.rows[j][kink.series].argmin),
            )
            .unwrap();
        }
        Ok(out)
    }
}
