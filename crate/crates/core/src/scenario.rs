//! Scenario files: the JSON interchange format consumed and emitted by the
//! CLI. A scenario names observables, kernels and states over one backend.
//!
//! Conventions: complex numbers are two-element arrays `[re, im]`, matrices
//! are row-major arrays of rows, kernels are arrays of stochastic rows.
//! Parsing failures carry the JSON path of the offending value.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::effects::{Backend, EffectElement, State};
use crate::error::PovError;
use crate::hermit::CMatrix;
use crate::kernels::MarkovKernel;
use crate::observables::Observable;

/// Parsed scenario: named objects sharing one backend and dimension.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub dim: usize,
    pub backend: Backend,
    pub observables: BTreeMap<String, Observable>,
    pub kernels: BTreeMap<String, MarkovKernel>,
    pub states: BTreeMap<String, State>,
}

fn bad(path: &str, what: &str) -> PovError {
    PovError::InvalidInput(format!("{path}: {what}"))
}

fn as_f64(v: &Value, path: &str) -> Result<f64, PovError> {
    v.as_f64().ok_or_else(|| bad(path, "expected a number"))
}

fn as_complex(v: &Value, path: &str) -> Result<Complex64, PovError> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad(path, "expected a two-element [re, im] array"))?;
    if arr.len() != 2 {
        return Err(bad(path, "expected exactly two elements [re, im]"));
    }
    Ok(Complex64::new(
        as_f64(&arr[0], &format!("{path}[0]"))?,
        as_f64(&arr[1], &format!("{path}[1]"))?,
    ))
}

fn as_real_vec(v: &Value, path: &str) -> Result<Vec<f64>, PovError> {
    let arr = v.as_array().ok_or_else(|| bad(path, "expected an array of numbers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| as_f64(x, &format!("{path}[{i}]")))
        .collect()
}

fn as_complex_matrix(v: &Value, dim: usize, path: &str) -> Result<CMatrix, PovError> {
    let rows = v.as_array().ok_or_else(|| bad(path, "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(bad(path, &format!("expected {dim} rows, got {}", rows.len())));
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let entries = row.as_array().ok_or_else(|| bad(&rpath, "expected a row array"))?;
        if entries.len() != dim {
            return Err(bad(&rpath, &format!("expected {dim} entries, got {}", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            m[(i, j)] = as_complex(e, &format!("{rpath}[{j}]"))?;
        }
    }
    CMatrix::new_hermitian(m).map_err(|e| bad(path, &e.to_string()))
}

fn parse_effect(v: &Value, backend: Backend, dim: usize, path: &str) -> Result<EffectElement, PovError> {
    match backend {
        Backend::Hilbert => {
            let m = as_complex_matrix(v, dim, path)?;
            EffectElement::hilbert(m).map_err(|e| bad(path, &e.to_string()))
        }
        Backend::Tribe => {
            let vals = as_real_vec(v, path)?;
            if vals.len() != dim {
                return Err(bad(path, &format!("expected {dim} coordinates, got {}", vals.len())));
            }
            EffectElement::tribe(vals).map_err(|e| bad(path, &e.to_string()))
        }
    }
}

fn parse_state(v: &Value, backend: Backend, dim: usize, path: &str) -> Result<State, PovError> {
    match backend {
        Backend::Hilbert => {
            let m = as_complex_matrix(v, dim, path)?;
            State::density(m).map_err(|e| bad(path, &e.to_string()))
        }
        Backend::Tribe => {
            let vals = as_real_vec(v, path)?;
            if vals.len() != dim {
                return Err(bad(path, &format!("expected {dim} weights, got {}", vals.len())));
            }
            State::probability(vals).map_err(|e| bad(path, &e.to_string()))
        }
    }
}

impl Scenario {
    /// Parse a scenario from JSON text.
    pub fn from_str(text: &str) -> Result<Self, PovError> {
        let root: Value = serde_json::from_str(text)
            .map_err(|e| PovError::InvalidInput(format!("not valid JSON: {e}")))?;
        let obj = root.as_object().ok_or_else(|| bad("$", "expected a JSON object"))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("$.dim", "expected a positive integer"))? as usize;
        if dim == 0 {
            return Err(bad("$.dim", "dimension must be positive"));
        }
        let backend = match obj.get("backend").and_then(Value::as_str).unwrap_or("hilbert") {
            "hilbert" => Backend::Hilbert,
            "tribe" => Backend::Tribe,
            other => return Err(bad("$.backend", &format!("unknown backend `{other}`"))),
        };

        let mut observables = BTreeMap::new();
        if let Some(section) = obj.get("observables") {
            let map = section
                .as_object()
                .ok_or_else(|| bad("$.observables", "expected an object of named observables"))?;
            for (name, spec) in map {
                let path = format!("$.observables.{name}");
                let spec = spec.as_object().ok_or_else(|| bad(&path, "expected an object"))?;
                let labels = as_real_vec(
                    spec.get("labels").ok_or_else(|| bad(&path, "missing `labels`"))?,
                    &format!("{path}.labels"),
                )?;
                let atoms_v = spec
                    .get("atoms")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad(&path, "missing `atoms` array"))?;
                let atoms = atoms_v
                    .iter()
                    .enumerate()
                    .map(|(i, a)| parse_effect(a, backend, dim, &format!("{path}.atoms[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let obs = Observable::new(labels, atoms).map_err(|e| bad(&path, &e.to_string()))?;
                observables.insert(name.clone(), obs);
            }
        }

        let mut kernels = BTreeMap::new();
        if let Some(section) = obj.get("kernels") {
            let map = section
                .as_object()
                .ok_or_else(|| bad("$.kernels", "expected an object of named kernels"))?;
            for (name, spec) in map {
                let path = format!("$.kernels.{name}");
                let rows_v = spec.as_array().ok_or_else(|| bad(&path, "expected an array of rows"))?;
                let rows = rows_v
                    .iter()
                    .enumerate()
                    .map(|(i, r)| as_real_vec(r, &format!("{path}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let k = MarkovKernel::new(rows).map_err(|e| bad(&path, &e.to_string()))?;
                kernels.insert(name.clone(), k);
            }
        }

        let mut states = BTreeMap::new();
        if let Some(section) = obj.get("states") {
            let map = section
                .as_object()
                .ok_or_else(|| bad("$.states", "expected an object of named states"))?;
            for (name, spec) in map {
                let path = format!("$.states.{name}");
                states.insert(name.clone(), parse_state(spec, backend, dim, &path)?);
            }
        }

        Ok(Scenario { dim, backend, observables, kernels, states })
    }

    /// Parse a scenario file.
    pub fn from_path(path: &Path) -> Result<Self, PovError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PovError::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn observable(&self, name: &str) -> Result<&Observable, PovError> {
        self.observables
            .get(name)
            .ok_or_else(|| PovError::InvalidInput(format!("no observable named `{name}`")))
    }

    pub fn kernel(&self, name: &str) -> Result<&MarkovKernel, PovError> {
        self.kernels
            .get(name)
            .ok_or_else(|| PovError::InvalidInput(format!("no kernel named `{name}`")))
    }

    pub fn state(&self, name: &str) -> Result<&State, PovError> {
        self.states
            .get(name)
            .ok_or_else(|| PovError::InvalidInput(format!("no state named `{name}`")))
    }

    /// Serialize back to the JSON schema. Map keys are emitted in sorted
    /// order so output is byte-stable.
    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("dim".into(), json!(self.dim));
        root.insert(
            "backend".into(),
            json!(match self.backend {
                Backend::Hilbert => "hilbert",
                Backend::Tribe => "tribe",
            }),
        );
        let mut obs = Map::new();
        for (name, o) in &self.observables {
            obs.insert(name.clone(), observable_to_json(o));
        }
        root.insert("observables".into(), Value::Object(obs));
        let mut kers = Map::new();
        for (name, k) in &self.kernels {
            kers.insert(name.clone(), json!(k.rows()));
        }
        root.insert("kernels".into(), Value::Object(kers));
        let mut sts = Map::new();
        for (name, s) in &self.states {
            sts.insert(name.clone(), state_to_json(s));
        }
        root.insert("states".into(), Value::Object(sts));
        Value::Object(root)
    }
}

/// JSON form of an effect under the scenario conventions.
pub fn effect_to_json(e: &EffectElement) -> Value {
    match e {
        EffectElement::Hilbert(a) => {
            let d = a.dim();
            let m = a.matrix();
            let rows: Vec<Value> = (0..d)
                .map(|i| {
                    let row: Vec<Value> =
                        (0..d).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect();
                    Value::Array(row)
                })
                .collect();
            Value::Array(rows)
        }
        EffectElement::Tribe(v) => json!(v),
    }
}

/// JSON form of an observable.
pub fn observable_to_json(o: &Observable) -> Value {
    let atoms: Vec<Value> = o.atoms().iter().map(effect_to_json).collect();
    json!({ "labels": o.labels(), "atoms": atoms })
}

/// JSON form of a state.
pub fn state_to_json(s: &State) -> Value {
    match s {
        State::Hilbert(rho) => {
            effect_to_json(&EffectElement::Hilbert(rho.clone()))
        }
        State::Tribe(p) => json!(p),
    }
}
