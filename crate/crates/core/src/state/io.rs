//! JSON state files.
//!
//! ```json
//! {"dims": [2, 2], "amplitudes": [[0.7071067811865476, 0.0], [0, 0], [0, 0], [0.7071067811865476, 0]]}
//! {"dims": [2], "matrix": [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]}
//! ```
//!
//! `matrix` is row-major. Unknown fields are ignored.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use super::{DensityOperator, PureState, RegisterLayout};
use crate::config::Tolerances;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum StateData {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl StateData {
    pub fn layout(&self) -> &RegisterLayout {
        match self {
            StateData::Pure(s) => s.layout(),
            StateData::Mixed(op) => op.layout(),
        }
    }

    pub fn to_density(&self) -> DensityOperator {
        match self {
            StateData::Pure(s) => s.to_density(),
            StateData::Mixed(op) => op.clone(),
        }
    }
}

#[derive(Serialize)]
struct PureFile<'a> {
    dims: &'a [usize],
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct MixedFile<'a> {
    dims: &'a [usize],
    matrix: Vec<[f64; 2]>,
}

pub fn pure_to_value(state: &PureState) -> Value {
    let file = PureFile {
        dims: state.layout().dims(),
        amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
    };
    serde_json::to_value(file).expect("state serializes")
}

pub fn density_to_value(op: &DensityOperator) -> Value {
    let m = op.matrix();
    let matrix = (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |c| [m[(r, c)].re, m[(r, c)].im]))
        .collect();
    let file = MixedFile {
        dims: op.layout().dims(),
        matrix,
    };
    serde_json::to_value(file).expect("state serializes")
}

pub fn to_value(data: &StateData) -> Value {
    match data {
        StateData::Pure(s) => pure_to_value(s),
        StateData::Mixed(op) => density_to_value(op),
    }
}

pub fn to_json(data: &StateData) -> String {
    serde_json::to_string(&to_value(data)).expect("state serializes")
}

pub fn from_json(text: &str, tol: &Tolerances) -> Result<StateData> {
    let value: Value = serde_json::from_str(text)?;
    from_value(&value, tol)
}

pub fn read_file(path: &std::path::Path, tol: &Tolerances) -> Result<StateData> {
    from_json(&std::fs::read_to_string(path)?, tol)
}

pub fn from_value(value: &Value, tol: &Tolerances) -> Result<StateData> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::field("<root>", "expected a JSON object"))?;
    let dims_value = obj
        .get("dims")
        .ok_or_else(|| Error::field("dims", "missing"))?;
    let dims_array = dims_value
        .as_array()
        .ok_or_else(|| Error::field("dims", "expected an array of integers"))?;
    let mut dims = Vec::with_capacity(dims_array.len());
    for (i, d) in dims_array.iter().enumerate() {
        let d = d
            .as_u64()
            .ok_or_else(|| Error::field(format!("dims[{i}]"), "expected a positive integer"))?;
        dims.push(d as usize);
    }
    let layout = RegisterLayout::new(dims).map_err(|e| Error::field("dims", e.to_string()))?;
    let dim = layout.total_dim();

    match (obj.get("amplitudes"), obj.get("matrix")) {
        (Some(_), Some(_)) => Err(Error::field(
            "amplitudes",
            "both `amplitudes` and `matrix` are present",
        )),
        (None, None) => Err(Error::field("amplitudes", "missing (or provide `matrix`)")),
        (Some(a), None) => {
            let amps = complex_list(a, "amplitudes", dim)?;
            PureState::new(layout, amps, tol)
                .map(StateData::Pure)
                .map_err(|e| Error::field("amplitudes", e.to_string()))
        }
        (None, Some(m)) => {
            let entries = complex_list(m, "matrix", dim * dim)?;
            let matrix = DMatrix::from_row_slice(dim, dim, &entries);
            DensityOperator::new(layout, matrix, tol)
                .map(StateData::Mixed)
                .map_err(|e| Error::field("matrix", e.to_string()))
        }
    }
}

fn complex_list(value: &Value, field: &str, expected: usize) -> Result<Vec<Complex64>> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::field(field, "expected an array of [re, im] pairs"))?;
    if items.len() != expected {
        return Err(Error::field(
            field,
            format!("expected {expected} entries, found {}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let pair = item.as_array().filter(|p| p.len() == 2);
            let parts = pair.and_then(|p| Some((p[0].as_f64()?, p[1].as_f64()?)));
            parts
                .map(|(re, im)| Complex64::new(re, im))
                .ok_or_else(|| Error::field(format!("{field}[{i}]"), "expected [re, im] numbers"))
        })
        .collect()
}
