use std::fmt;
use std::path::Path;

use lil_core::algebra::DEFAULT_MAX_N;
use lil_core::exact::{Mat, Subspace};
use lil_core::{DigraphAlgebra, Pattern};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

/// Report schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// Anything wrong with the input rather than with the mathematics.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! input_err {
    ($($t:tt)*) => { $crate::report::InputError(format!($($t)*)) };
}
pub(crate) use input_err;

/// Converts any displayable library error into an input error.
pub fn bad<E: fmt::Display>(context: &str) -> impl Fn(E) -> InputError + '_ {
    move |e| InputError(format!("{context}: {e}"))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Caps {
    pub max_n: usize,
    pub max_pairs: usize,
}

impl Caps {
    pub fn from_env(max_pairs: usize) -> Result<Self, InputError> {
        let max_n = match std::env::var("LIL_MAX_N") {
            Ok(v) => v.trim().parse().map_err(|_| input_err!("LIL_MAX_N must be a positive integer, got {v:?}"))?,
            Err(_) => DEFAULT_MAX_N,
        };
        Ok(Caps { max_n, max_pairs })
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub inputs: Value,
    pub outcome: &'static str,
    pub details: Value,
}

impl Report {
    pub fn new(command: &str, inputs: Value, passed: bool, details: Value) -> Self {
        Report {
            version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs,
            outcome: if passed { "pass" } else { "fail" },
            details,
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == "pass"
    }

    pub fn render(&self, pretty: bool) -> String {
        let out = if pretty { serde_json::to_string_pretty(self) } else { serde_json::to_string(self) };
        out.expect("reports serialize")
    }
}

pub fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| input_err!("{}: {e}", path.display()))
}

pub fn load_pattern(path: &Path, caps: &Caps) -> Result<Pattern, InputError> {
    Pattern::parse_with_cap(&read(path)?, caps.max_n).map_err(|e| input_err!("{}: {e}", path.display()))
}

pub fn load_algebra(path: &Path, caps: &Caps) -> Result<DigraphAlgebra, InputError> {
    load_pattern(path, caps)?.validate().map_err(|e| input_err!("{}: {e}", path.display()))
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    serde_json::from_str(&read(path)?).map_err(|e| input_err!("{}: {e}", path.display()))
}

/// A subspace of `alg`, given as JSON.
pub fn load_subspace(path: &Path, alg: &DigraphAlgebra) -> Result<Subspace, InputError> {
    let s: Subspace = load_json(path)?;
    alg.check_subspace(&s).map_err(|e| input_err!("{}: {e}", path.display()))?;
    Ok(s)
}

/// A JSON list of matrices, all inside `alg`.
pub fn load_matrices(path: &Path, alg: &DigraphAlgebra) -> Result<Vec<Mat>, InputError> {
    let ms: Vec<Mat> = load_json(path)?;
    for (k, m) in ms.iter().enumerate() {
        alg.check_element(m).map_err(|e| input_err!("{}: matrix {}: {e}", path.display(), k + 1))?;
    }
    Ok(ms)
}

pub fn path_str(p: &Path) -> String {
    p.display().to_string()
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Basis matrices of a subspace of `M_n`, for reports.
pub fn basis_matrices(n: usize, s: &Subspace) -> Value {
    let ms: Vec<Mat> = s.basis().iter().map(|b| Mat::from_coords(n, b).expect("square")).collect();
    json!(ms)
}
