//! JSON space definitions.
//!
//! ```json
//! {
//!   "n": 2, "m": 4, "p": 2,
//!   "functionals": [[1, 0], [0, 1], ["1/2", "1/3"], [0.25, -1]],
//!   "hyperplane": [1, 1],
//!   "witnesses": [{"tuple": [1, 2, 3, 4], "vector": ["1", "-1/2", 0, 0]}],
//!   "alpha": 0.125, "beta": 16,
//!   "search": {"seed": 7, "restarts": 32}
//! }
//! ```
//!
//! Integers and `"a/b"` or decimal strings are exact; JSON floats are taken as
//! their binary value. A family is exact only when every entry is.

use projconst::numerics::{rational, Matrix, Rational};
use projconst::optimize::SearchConfig;
use projconst::params::{Witness, WitnessMap};
use projconst::space::FunctionalFamily;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct SpaceConfig {
    pub n: usize,
    pub m: usize,
    pub p: u32,
    pub family: FunctionalFamily,
    /// Entries as written, for the report echo.
    pub functionals: Vec<Vec<String>>,
    pub hyperplane: Option<Vec<f64>>,
    pub witnesses: Option<WitnessMap>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// `None` when the config has no `search` object.
    pub search: Option<SearchConfig>,
}

/// A parsed matrix or vector entry.
#[derive(Debug, Clone, PartialEq)]
enum Entry {
    Exact(Rational),
    Float(f64),
}

impl Entry {
    fn to_f64(&self) -> f64 {
        match self {
            Entry::Exact(r) => rational::to_f64(r),
            Entry::Float(x) => *x,
        }
    }
}

fn err(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_string(), message: msg.into() }
}

fn entry(v: &Value, path: &str) -> Result<Entry, CliError> {
    match v {
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                return Ok(Entry::Exact(rational::int(i)));
            }
            let x = num.as_f64().ok_or_else(|| err(path, "number out of range"))?;
            if !x.is_finite() {
                return Err(err(path, "non-finite number"));
            }
            Ok(Entry::Float(x))
        }
        Value::String(s) => rational::parse(s).map(Entry::Exact).ok_or_else(|| err(path, format!("cannot parse {s:?} as a rational"))),
        _ => Err(err(path, "expected a number or a rational string")),
    }
}

fn entries(v: &Value, path: &str, len: usize) -> Result<Vec<Entry>, CliError> {
    let arr = v.as_array().ok_or_else(|| err(path, "expected an array"))?;
    if arr.len() != len {
        return Err(err(path, format!("expected {len} entries, found {}", arr.len())));
    }
    arr.iter().enumerate().map(|(i, x)| entry(x, &format!("{path}/{i}"))).collect()
}

fn uint(obj: &serde_json::Map<String, Value>, key: &str) -> Result<u64, CliError> {
    let path = format!("/{key}");
    obj.get(key).ok_or_else(|| err(&path, "missing field"))?.as_u64().ok_or_else(|| err(&path, "expected a nonnegative integer"))
}

fn positive_f64(obj: &serde_json::Map<String, Value>, key: &str) -> Result<Option<f64>, CliError> {
    let path = format!("/{key}");
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => {
            let x = entry(v, &path)?.to_f64();
            if x > 0.0 {
                Ok(Some(x))
            } else {
                Err(err(&path, "must be positive"))
            }
        }
    }
}

fn search(v: &Value) -> Result<SearchConfig, CliError> {
    let mut cfg = SearchConfig::default();
    let obj = v.as_object().ok_or_else(|| err("/search", "expected an object"))?;
    for (key, val) in obj {
        let path = format!("/search/{key}");
        match key.as_str() {
            "seed" => cfg.seed = val.as_u64().ok_or_else(|| err(&path, "expected a nonnegative integer"))?,
            "restarts" => cfg.restarts = val.as_u64().ok_or_else(|| err(&path, "expected a nonnegative integer"))? as usize,
            "max_iters" => cfg.max_iters = val.as_u64().ok_or_else(|| err(&path, "expected a nonnegative integer"))? as usize,
            "tol" => cfg.tol = val.as_f64().ok_or_else(|| err(&path, "expected a number"))?,
            "adaptive" => cfg.adaptive = val.as_bool().ok_or_else(|| err(&path, "expected a boolean"))?,
            _ => return Err(err(&path, "unknown field")),
        }
    }
    cfg.validate().map_err(|e| err("/search", e.to_string()))?;
    Ok(cfg)
}

fn witnesses(v: &Value, n: usize, m: usize) -> Result<WitnessMap, CliError> {
    let arr = v.as_array().ok_or_else(|| err("/witnesses", "expected an array"))?;
    let mut map = WitnessMap::new();
    for (k, item) in arr.iter().enumerate() {
        let base = format!("/witnesses/{k}");
        let tuple: Vec<usize> = item
            .get("tuple")
            .and_then(Value::as_array)
            .ok_or_else(|| err(&format!("{base}/tuple"), "expected an array of four indices"))?
            .iter()
            .map(|x| x.as_u64().map(|i| i as usize).filter(|i| (1..=m).contains(i)))
            .collect::<Option<_>>()
            .filter(|t: &Vec<usize>| t.len() == 4)
            .ok_or_else(|| err(&format!("{base}/tuple"), format!("expected four indices in 1..={m}")))?;
        let key = (tuple[0], tuple[1], tuple[2], tuple[3]);
        let path = format!("{base}/vector");
        let vector = entries(item.get("vector").ok_or_else(|| err(&path, "missing field"))?, &path, n)?;
        let witness = if vector.iter().all(|e| matches!(e, Entry::Exact(_))) {
            Witness::Exact(vector.into_iter().map(|e| if let Entry::Exact(r) = e { r } else { unreachable!() }).collect())
        } else {
            Witness::Float(vector.iter().map(Entry::to_f64).collect())
        };
        map.insert(key, witness);
    }
    Ok(map)
}

/// Parses and validates a space definition.
pub fn parse_config(text: &str) -> Result<SpaceConfig, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| err("", "expected an object"))?;
    let n = uint(obj, "n")? as usize;
    let m = uint(obj, "m")? as usize;
    let p = u32::try_from(uint(obj, "p")?).map_err(|_| err("/p", "too large"))?;
    if n == 0 || m == 0 || p == 0 {
        return Err(err("", "n, m and p must be positive"));
    }
    let rows_v = obj.get("functionals").ok_or_else(|| err("/functionals", "missing field"))?;
    let rows_arr = rows_v.as_array().ok_or_else(|| err("/functionals", "expected an array of rows"))?;
    if rows_arr.len() != m {
        return Err(err("/functionals", format!("expected {m} rows, found {}", rows_arr.len())));
    }
    let rows = rows_arr
        .iter()
        .enumerate()
        .map(|(i, r)| entries(r, &format!("/functionals/{i}"), n))
        .collect::<Result<Vec<_>, _>>()?;
    let functionals = rows_arr.iter().map(|r| r.as_array().unwrap().iter().map(echo).collect()).collect();

    let exact = rows.iter().flatten().all(|e| matches!(e, Entry::Exact(_)));
    let family = if exact {
        let rat = rows
            .iter()
            .map(|r| r.iter().map(|e| if let Entry::Exact(q) = e { q.clone() } else { unreachable!() }).collect())
            .collect();
        FunctionalFamily::from_rationals(rat, p)
    } else {
        let data: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(Entry::to_f64).collect()).collect();
        Matrix::from_rows(&data).and_then(|mat| FunctionalFamily::new(mat, p))
    }
    .map_err(|e| match e {
        projconst::Error::RankDeficient { rank, expected } => CliError::RankDeficient { rank, expected },
        other => err("/functionals", other.to_string()),
    })?;

    let hyperplane = match obj.get("hyperplane") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let h: Vec<f64> = entries(v, "/hyperplane", n)?.iter().map(Entry::to_f64).collect();
            if h.iter().all(|x| *x == 0.0) {
                return Err(err("/hyperplane", "zero functional"));
            }
            Some(h)
        }
    };
    let witnesses = match obj.get("witnesses") {
        None | Some(Value::Null) => None,
        Some(v) => Some(witnesses(v, n, m)?),
    };
    Ok(SpaceConfig {
        n,
        m,
        p,
        family,
        functionals,
        hyperplane,
        witnesses,
        alpha: positive_f64(obj, "alpha")?,
        beta: positive_f64(obj, "beta")?,
        search: match obj.get("search") {
            None | Some(Value::Null) => None,
            Some(v) => Some(search(v)?),
        },
    })
}

fn echo(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
