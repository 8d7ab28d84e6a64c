use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{Graph, IsingModel};
use crate::error::{Error, Result};
use crate::io::{as_f64, index_map, parse_index, parse_pair, read_json, write_json};

/// On-disk form: `{"n": int, "h": {"v": float}, "J": {"u,v": float}}`.
///
/// Graph files use the same layout with empty `h`/`J` and an `edges` list;
/// when both are present the edge set is the union of `edges` and the `J` keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub h: Map<String, Value>,
    #[serde(default, rename = "J")]
    pub j: Map<String, Value>,
}

impl ModelFile {
    pub fn from_model(model: &IsingModel) -> Self {
        let h = model
            .h()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(v, w)| (v.to_string(), *w));
        let j = model.couplings().map(|((u, v), w)| (format!("{u},{v}"), w));
        Self { n: model.n(), edges: Vec::new(), h: index_map(h), j: index_map(j) }
    }

    pub fn from_graph(g: &Graph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            h: Map::new(),
            j: Map::new(),
        }
    }

    pub fn to_model(&self) -> Result<IsingModel> {
        let mut h = vec![0.0; self.n];
        for (k, w) in &self.h {
            let v = parse_index(k, "h")?;
            if v >= self.n {
                return Err(Error::Format(format!("h key {v} out of range for n={}", self.n)));
            }
            h[v] = as_f64(w, "h")?;
        }
        let mut pairs = Vec::with_capacity(self.j.len());
        for (k, w) in &self.j {
            let (u, v) = parse_pair(k)?;
            if u >= v {
                return Err(Error::Format(format!("coupler key {k:?} must satisfy u < v")));
            }
            pairs.push(((u, v), as_f64(w, "J")?));
        }
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&[u, v]| (u.min(v), u.max(v))).collect();
        edges.extend(pairs.iter().map(|&(e, _)| e));
        edges.sort_unstable();
        edges.dedup();
        let graph = Graph::new(self.n, edges)?;
        let mut j = vec![0.0; graph.edge_count()];
        for ((u, v), w) in pairs {
            let e = graph.edge_index(u, v).expect("edge inserted above");
            j[e] = w;
        }
        IsingModel::from_parts(graph, h, j)
    }
}

pub fn read_model(path: &Path) -> Result<IsingModel> {
    read_json::<ModelFile>(path)?.to_model()
}

pub fn write_model(path: &Path, model: &IsingModel) -> Result<()> {
    write_json(path, &ModelFile::from_model(model))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_layout() {
        let text = r#"{"n": 3, "h": {"0": 0.5}, "J": {"0,1": 1.0, "1,2": -2.0}}"#;
        let file: ModelFile = serde_json::from_str(text).unwrap();
        let m = file.to_model().unwrap();
        assert_eq!(m.h(), &[0.5, 0.0, 0.0]);
        assert_eq!(m.coupling(1, 2), -2.0);
        assert_eq!(ModelFile::from_model(&m).to_model().unwrap(), m);
    }

    #[test]
    fn graph_file_keeps_edges() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let text = serde_json::to_string(&ModelFile::from_graph(&g)).unwrap();
        let back: ModelFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_model().unwrap().graph(), &g);
    }

    #[test]
    fn rejects_reversed_keys() {
        let text = r#"{"n": 3, "h": {}, "J": {"1,0": 1.0}}"#;
        let file: ModelFile = serde_json::from_str(text).unwrap();
        assert!(file.to_model().is_err());
    }
}
