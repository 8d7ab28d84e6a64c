use std::fmt::Write as _;
use std::path::Path;

use crate::error::{invalid, Error, Result};

/// Annealing schedule `H(s) = a(s)·H_M + b(s)·H_P`, sampled on a grid and
/// linearly interpolated. `s = t/T` is the annealing fraction; the total
/// anneal time `T` itself plays no role in the static spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    points: Vec<(f64, f64, f64)>,
}

impl Default for Schedule {
    fn default() -> Self {
        Self::linear()
    }
}

impl Schedule {
    /// `a(s) = 1 − s`, `b(s) = s`.
    pub fn linear() -> Self {
        Self { points: vec![(0.0, 1.0, 0.0), (1.0, 0.0, 1.0)] }
    }

    pub fn new(points: Vec<(f64, f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(invalid("schedule needs at least two points"));
        }
        if points.first().map(|p| p.0) != Some(0.0) || points.last().map(|p| p.0) != Some(1.0) {
            return Err(invalid("schedule must start at s=0 and end at s=1"));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid("schedule s values must be strictly increasing"));
        }
        if points.iter().any(|&(s, a, b)| !(s.is_finite() && a.is_finite() && b.is_finite())) {
            return Err(invalid("schedule contains non-finite values"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64, f64)] {
        &self.points
    }

    pub fn is_linear(&self) -> bool {
        *self == Self::linear()
    }

    /// `(a(s), b(s))`.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        let s = s.clamp(0.0, 1.0);
        let i = self.points.partition_point(|p| p.0 <= s).clamp(1, self.points.len() - 1);
        let (s0, a0, b0) = self.points[i - 1];
        let (s1, a1, b1) = self.points[i];
        let t = (s - s0) / (s1 - s0);
        (a0 + t * (a1 - a0), b0 + t * (b1 - b0))
    }

    /// Parses `s,a,b` CSV with a header row.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Format("empty schedule file".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["s", "a", "b"] {
            return Err(Error::Format(format!("schedule header must be s,a,b, got {header:?}")));
        }
        let mut points = Vec::new();
        for (i, line) in lines.enumerate() {
            let vals: Vec<f64> = line
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::Format(format!("schedule row {} is not numeric: {line:?}", i + 1)))?;
            let [s, a, b] = vals[..] else {
                return Err(Error::Format(format!("schedule row {} needs 3 columns", i + 1)));
            };
            points.push((s, a, b));
        }
        Self::new(points)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,a,b\n");
        for (s, a, b) in &self.points {
            let _ = writeln!(out, "{s},{a},{b}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_interpolation() {
        let sch = Schedule::linear();
        assert_eq!(sch.eval(0.25), (0.75, 0.25));
        assert_eq!(sch.eval(1.0), (0.0, 1.0));

        let sch = Schedule::new(vec![(0.0, 2.0, 0.0), (0.5, 1.0, 0.1), (1.0, 0.0, 3.0)]).unwrap();
        let (a, b) = sch.eval(0.75);
        assert!((a - 0.5).abs() < 1e-15 && (b - 1.55).abs() < 1e-15);
        assert_eq!(sch.eval(0.5), (1.0, 0.1));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Schedule::new(vec![(0.0, 1.0, 0.0)]).is_err());
        assert!(Schedule::new(vec![(0.1, 1.0, 0.0), (1.0, 0.0, 1.0)]).is_err());
        assert!(Schedule::new(vec![(0.0, 1.0, 0.0), (0.5, 0.5, 0.5), (0.5, 0.5, 0.5), (1.0, 0.0, 1.0)]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let sch = Schedule::new(vec![(0.0, 1.0, 0.0), (0.3, 0.6, 0.2), (1.0, 0.0, 1.0)]).unwrap();
        assert_eq!(Schedule::from_csv(&sch.to_csv()).unwrap(), sch);
        assert!(Schedule::from_csv("x,y,z\n0,1,0\n1,0,1\n").is_err());
    }
}
