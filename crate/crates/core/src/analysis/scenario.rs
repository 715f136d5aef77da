//! Scenario tables: one row per box, `atom, lo…, hi…, delta, integrand`.

use super::field::MAX_GRID_POINTS;
use super::{AnalysisError, CompactField, Expr, GridBox, Integrand, Slice};
use crate::numio::parse_rational;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub atom: usize,
    pub lo: Vec<String>,
    pub hi: Vec<String>,
    pub delta: String,
    pub integrand: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub rows: Vec<ScenarioRow>,
}

fn malformed(row: usize, reason: impl Into<String>) -> AnalysisError {
    AnalysisError::MalformedScenario { row, reason: reason.into() }
}

impl Scenario {
    /// `{"rows": [{"atom": 0, "lo": ["-1"], "hi": ["1"], "delta": "1", "integrand": "x^2"}]}`
    pub fn from_json(text: &str) -> Result<Self, AnalysisError> {
        serde_json::from_str(text).map_err(|e| malformed(e.line(), e.to_string()))
    }

    /// Headerless CSV, or with a header whose first field is `atom`.
    pub fn from_csv(text: &str) -> Result<Self, AnalysisError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| malformed(i + 1, e.to_string()))?;
            let fields: Vec<&str> = record.iter().collect();
            if i == 0 && fields.first() == Some(&"atom") {
                continue;
            }
            let row = rows.len() + 1;
            if fields.len() < 3 || fields.len().is_multiple_of(2) {
                return Err(malformed(
                    row,
                    format!("{} fields; expected atom, lo…, hi…, delta, integrand", fields.len()),
                ));
            }
            let n = (fields.len() - 3) / 2;
            let atom = fields[0].parse().map_err(|_| malformed(row, format!("bad atom `{}`", fields[0])))?;
            rows.push(ScenarioRow {
                atom,
                lo: fields[1..1 + n].iter().map(|s| s.to_string()).collect(),
                hi: fields[1 + n..1 + 2 * n].iter().map(|s| s.to_string()).collect(),
                delta: fields[1 + 2 * n].to_string(),
                integrand: fields[2 + 2 * n].to_string(),
            });
        }
        Ok(Self { rows })
    }

    /// Reads CSV for `.csv` paths and JSON otherwise.
    pub fn load(path: &Path) -> Result<Self, AnalysisError> {
        let text = std::fs::read_to_string(path).map_err(|e| malformed(0, format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            Self::from_csv(&text)
        } else {
            Self::from_json(&text)
        }
    }

    /// Builds the field and integrand. Rows are numbered from 1; every atom
    /// `0..atom_count` needs at least one row, and rows of one atom share
    /// `delta` and `integrand`.
    pub fn build(&self, atom_count: Option<usize>) -> Result<(CompactField, Integrand), AnalysisError> {
        let k = match atom_count {
            Some(k) => k,
            None => self.rows.iter().map(|r| r.atom + 1).max().ok_or_else(|| malformed(0, "no rows"))?,
        };
        let mut per_atom: Vec<Option<(Vec<GridBox>, String, String)>> = vec![None; k];
        for (i, row) in self.rows.iter().enumerate() {
            let n = i + 1;
            if row.atom >= k {
                return Err(malformed(n, format!("atom {} outside 0..{k}", row.atom)));
            }
            if row.lo.len() != row.hi.len() {
                return Err(malformed(n, "lo and hi differ in length"));
            }
            let parse = |v: &Vec<String>| -> Result<Vec<_>, AnalysisError> {
                v.iter().map(|s| parse_rational(s).ok_or_else(|| malformed(n, format!("bad number `{s}`")))).collect()
            };
            let b = GridBox::new(parse(&row.lo)?, parse(&row.hi)?).ok_or_else(|| malformed(n, "empty box"))?;
            match &mut per_atom[row.atom] {
                slot @ None => *slot = Some((vec![b], row.delta.clone(), row.integrand.clone())),
                Some((boxes, delta, integrand)) => {
                    if *delta != row.delta || *integrand != row.integrand {
                        return Err(malformed(n, format!("atom {} has conflicting delta or integrand", row.atom)));
                    }
                    if boxes[0].dim() != b.dim() {
                        return Err(malformed(n, format!("atom {} mixes dimensions", row.atom)));
                    }
                    boxes.push(b);
                }
            }
        }
        let mut slices = Vec::with_capacity(k);
        let mut exprs = Vec::with_capacity(k);
        for (a, entry) in per_atom.into_iter().enumerate() {
            let (boxes, delta, integrand) = entry.ok_or_else(|| malformed(0, format!("atom {a} has no rows")))?;
            let row = self.rows.iter().position(|r| r.atom == a).expect("atom has a row") + 1;
            let delta = parse_rational(&delta).ok_or_else(|| malformed(row, format!("bad delta `{delta}`")))?;
            let slice = Slice::new(boxes, delta).ok_or_else(|| malformed(row, "delta must be positive"))?;
            if slice.grid_size() > MAX_GRID_POINTS {
                return Err(malformed(row, format!("grid exceeds {MAX_GRID_POINTS} points")));
            }
            let expr = Expr::parse(&integrand).map_err(|e| malformed(row, format!("integrand: {e}")))?;
            if expr.arity() > slice.dim() {
                return Err(malformed(row, format!("integrand reads x{} in dimension {}", expr.arity(), slice.dim())));
            }
            slices.push(slice);
            exprs.push(expr);
        }
        Ok((CompactField::new(slices), Integrand::new(exprs)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{argmin, selections_contain, RaggedVec};
    use num_rational::BigRational;

    const CSV: &str = "atom,lo,hi,delta,integrand\n0,0,1,1/2,x\n1,2,3,1/2,x\n";

    #[test]
    fn csv_and_json_agree() {
        let from_csv = Scenario::from_csv(CSV).unwrap();
        let json = serde_json::to_string(&from_csv).unwrap();
        assert_eq!(Scenario::from_json(&json).unwrap(), from_csv);
        let (w, _) = from_csv.build(None).unwrap();
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let x = RaggedVec::new(vec![vec![q(1, 2)], vec![q(5, 2)]]);
        assert!(selections_contain(&w, &x).unwrap().is_full());
    }

    #[test]
    fn quadratic_scenario() {
        let s = Scenario::from_csv("0,-1,1,1,x^2\n1,-1,1,1,(x-1)^2\n").unwrap();
        let (w, f) = s.build(Some(2)).unwrap();
        let sel = argmin(&w, &f).unwrap();
        assert_eq!(sel.point, RaggedVec::from_ints(&[&[0], &[1]]));
    }

    #[test]
    fn malformed_rows() {
        let err = |text: &str| match Scenario::from_csv(text).and_then(|s| s.build(None)) {
            Err(AnalysisError::MalformedScenario { row, .. }) => row,
            other => panic!("expected malformed scenario, got {other:?}"),
        };
        assert_eq!(err("0,0,1,1,x\n1,3,2,1,x\n"), 2);
        assert_eq!(err("0,0,1,0,x\n"), 1);
        assert_eq!(err("0,0,1,1\n"), 1);
        assert_eq!(err("0,0,1,1,y\n"), 1);
        assert_eq!(err("0,0,1,1,x2\n"), 1);
        assert_eq!(err("1,0,1,1,x\n"), 0);
        assert_eq!(err("0,0,1,1,x\n0,0,1,1/2,x\n"), 2);
        assert_eq!(err("0,0,1000000,1/1000,x\n"), 1);
        assert!(matches!(Scenario::from_json("{"), Err(AnalysisError::MalformedScenario { .. })));
    }

    #[test]
    fn quoted_integrand_with_commas() {
        let s = Scenario::from_csv("0,0,0,1,1,1,\"min(x1, x2)\"\n").unwrap();
        assert_eq!(s.rows[0].lo.len(), 2);
        s.build(None).unwrap();
    }
}
