//! File helpers shared by the JSON formats.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|source| Error::Parse { path: path.to_owned(), source })
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub(crate) fn parse_index(key: &str, what: &str) -> Result<usize> {
    key.trim()
        .parse()
        .map_err(|_| Error::Format(format!("{what} key {key:?} is not a non-negative integer")))
}

pub(crate) fn parse_pair(key: &str) -> Result<(usize, usize)> {
    let (u, v) = key
        .split_once(',')
        .ok_or_else(|| Error::Format(format!("coupler key {key:?} is not of the form \"u,v\"")))?;
    Ok((parse_index(u, "coupler")?, parse_index(v, "coupler")?))
}

pub(crate) fn as_f64(value: &Value, what: &str) -> Result<f64> {
    value.as_f64().ok_or_else(|| Error::Format(format!("{what} value {value} is not a number")))
}

pub(crate) fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub(crate) fn index_map<I: IntoIterator<Item = (String, f64)>>(items: I) -> Map<String, Value> {
    items.into_iter().map(|(k, v)| (k, number(v))).collect()
}
