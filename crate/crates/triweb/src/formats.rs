//! On-disk formats: presentation and difference-set JSON, relation reports,
//! and the coordinate ("COO") matrix text format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use triweb_core::diffset::DifferenceSet;
use triweb_core::geometry::{GeometryModel, IncidenceGeometry};
use triweb_core::presentation::{incidence_from_triples, AxiomReport, Condition6Variants, Triple};
use triweb_core::webfun::RelationReport;
use triweb_core::{ScalarField, SparseMatrix, TrianglePresentation};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid file:\n  {}", .0.join("\n  "))]
    Schema(Vec<String>),
    #[error("{0}")]
    Core(#[from] triweb_core::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementRecord {
    pub id: usize,
    pub dim: usize,
    pub name: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationFile {
    pub n: usize,
    pub q: u64,
    #[serde(default)]
    pub characteristic_zero_only: bool,
    pub elements: Vec<ElementRecord>,
    pub sigma: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidence: Option<Vec<[usize; 2]>>,
    pub triples: Vec<Triple>,
}

impl PresentationFile {
    pub fn from_presentation(tp: &TrianglePresentation) -> Self {
        let elements = (0..tp.len())
            .map(|id| ElementRecord {
                id,
                dim: tp.dim(id),
                name: tp.name(id).to_string(),
            })
            .collect();
        let sigma = (0..tp.len())
            .filter(|&u| u <= tp.sigma(u))
            .map(|u| [u, tp.sigma(u)])
            .collect();
        let incidence = tp.geometry().incident_pairs().into_iter().map(|(u, v)| [u, v]).collect();
        Self {
            n: tp.n(),
            q: tp.q(),
            characteristic_zero_only: tp.characteristic_zero_only(),
            elements,
            sigma,
            incidence: Some(incidence),
            triples: tp.triples().to_vec(),
        }
    }

    /// Validates the file and builds the presentation. Returns warnings for
    /// recoverable issues such as repeated triples.
    pub fn into_presentation(self) -> Result<(TrianglePresentation, Vec<String>), FormatError> {
        let mut errors = Vec::new();
        let len = self.elements.len();
        let mut by_id: BTreeMap<usize, &ElementRecord> = BTreeMap::new();
        for e in &self.elements {
            if by_id.insert(e.id, e).is_some() {
                errors.push(format!("element id {} appears twice", e.id));
            }
            if e.dim == 0 || e.dim >= self.n {
                errors.push(format!("element {} has dimension {} outside 1..{}", e.id, e.dim, self.n.saturating_sub(1)));
            }
        }
        if by_id.keys().copied().ne(0..len) {
            errors.push(format!("element ids must be exactly 0..{len}"));
        }
        let mut sigma = vec![usize::MAX; len];
        for &[a, b] in &self.sigma {
            if a >= len || b >= len {
                errors.push(format!("sigma pair [{a}, {b}] has a dangling id"));
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if sigma[x] != usize::MAX && sigma[x] != y {
                    errors.push(format!("sigma is not an involution: {x} maps to both {} and {y}", sigma[x]));
                }
                sigma[x] = y;
            }
        }
        if let Some(u) = sigma.iter().position(|&s| s == usize::MAX) {
            errors.push(format!("sigma is undefined on element {u}"));
        }
        for t in &self.triples {
            if t.iter().any(|&x| x >= len) {
                errors.push(format!("triple {t:?} has a dangling id"));
            }
        }
        if let Some(pairs) = &self.incidence {
            for &[u, v] in pairs {
                if u >= len || v >= len {
                    errors.push(format!("incidence [{u}, {v}] has a dangling id"));
                }
            }
        }
        if errors.is_empty() {
            for (u, &s) in sigma.iter().enumerate() {
                if by_id[&u].dim + by_id[&s].dim != self.n {
                    errors.push(format!(
                        "sigma dimension swap violated: {} (dim {}) maps to {} (dim {})",
                        by_id[&u].name, by_id[&u].dim, by_id[&s].name, by_id[&s].dim
                    ));
                }
            }
        }
        if !errors.is_empty() {
            return Err(FormatError::Schema(errors));
        }

        let dims = (0..len).map(|id| by_id[&id].dim).collect();
        let names = (0..len).map(|id| by_id[&id].name.clone()).collect();
        let pairs: Vec<(usize, usize)> = match &self.incidence {
            Some(p) => p.iter().map(|&[u, v]| (u, v)).collect(),
            None => incidence_from_triples(&sigma, &self.triples),
        };
        let geometry = IncidenceGeometry::new(self.n, self.q, dims, names, pairs, GeometryModel::Explicit)?;
        let tp = TrianglePresentation::build(geometry, sigma, self.triples, self.characteristic_zero_only)?;
        let mut warnings = Vec::new();
        if tp.duplicates_dropped() > 0 {
            warnings.push(format!("dropped {} duplicate triple(s)", tp.duplicates_dropped()));
        }
        Ok((tp, warnings))
    }
}

pub fn presentation_to_json(tp: &TrianglePresentation) -> String {
    serde_json::to_string_pretty(&PresentationFile::from_presentation(tp)).expect("serializable")
}

pub fn presentation_from_json(text: &str) -> Result<(TrianglePresentation, Vec<String>), FormatError> {
    let file: PresentationFile = serde_json::from_str(text)?;
    file.into_presentation()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceSetFile {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub q: u64,
    #[serde(rename = "D")]
    pub set: Vec<u64>,
}

impl From<&DifferenceSet> for DifferenceSetFile {
    fn from(ds: &DifferenceSet) -> Self {
        Self {
            modulus: ds.modulus,
            q: ds.q,
            set: ds.set.clone(),
        }
    }
}

pub fn relation_report_json(r: &RelationReport) -> Value {
    json!({
        "relation": r.relation,
        "labels": r.labels,
        "pass": r.pass,
        "witness": r.witness.as_ref().map(|w| json!({
            "row": w.row,
            "col": w.col,
            "lhs": w.lhs,
            "rhs": w.rhs,
        })),
        "hypotheses_overridden": r.hypotheses_overridden,
    })
}

pub fn relation_reports_json(reports: &[RelationReport]) -> Value {
    Value::Array(reports.iter().map(relation_report_json).collect())
}

/// Condition report with witnesses rendered as element names. For
/// condition 6 and its variants the trailing count of solutions found is
/// reported separately as `found`.
pub fn axiom_report_json(
    tp: &TrianglePresentation,
    report: &AxiomReport,
    variants: Result<Condition6Variants, String>,
) -> Value {
    let conditions: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            let mut entry = json!({ "condition": c.condition, "pass": c.pass, "witness": Value::Null });
            if let Some(w) = &c.witness {
                let (ids, found) = if c.condition == 6 { (&w[..5], Some(w[5])) } else { (&w[..], None) };
                entry["witness"] = json!(ids.iter().map(|&x| tp.name(x)).collect::<Vec<_>>());
                if let Some(f) = found {
                    entry["found"] = json!(f);
                }
            }
            entry
        })
        .collect();
    let variants = match variants {
        Ok(v) => json!({
            "six": v.six,
            "six_prime": v.six_prime,
            "six_double_prime": v.six_double_prime,
        }),
        Err(e) => json!({ "error": e }),
    };
    json!({
        "conditions": conditions,
        "variants": variants,
        "pass": report.all_pass(),
    })
}

/// `rows cols characteristic nnz` header, then one `i j v` line per stored
/// entry in row-major order.
pub fn write_coo<K: ScalarField>(m: &SparseMatrix<K>) -> String {
    let mut out = format!("{} {} {} {}\n", m.rows(), m.cols(), m.field().characteristic(), m.nnz());
    for (i, j, v) in m.iter() {
        writeln!(out, "{i} {j} {v}").expect("writing to a String");
    }
    out
}

/// Parsed coordinate file with values kept as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooFile {
    pub rows: usize,
    pub cols: usize,
    pub characteristic: u64,
    pub entries: Vec<(usize, usize, String)>,
}

pub fn read_coo(text: &str) -> Result<CooFile, FormatError> {
    let bad = |msg: String| FormatError::Schema(vec![msg]);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| bad("empty file".into()))?.split_whitespace().collect();
    if header.len() != 4 {
        return Err(bad(format!("header needs 4 fields, got {}", header.len())));
    }
    let num = |s: &str| s.parse::<u64>().map_err(|_| bad(format!("'{s}' is not a number")));
    let (rows, cols, characteristic, nnz) =
        (num(header[0])? as usize, num(header[1])? as usize, num(header[2])?, num(header[3])? as usize);
    let mut entries = Vec::with_capacity(nnz);
    for (k, line) in lines.enumerate() {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad(format!("line {} needs 3 fields", k + 2)));
        }
        let (i, j) = (num(f[0])? as usize, num(f[1])? as usize);
        if i >= rows || j >= cols {
            return Err(bad(format!("entry ({i}, {j}) outside {rows}x{cols}")));
        }
        entries.push((i, j, f[2].to_string()));
    }
    if entries.len() != nnz {
        return Err(bad(format!("header promises {nnz} entries, found {}", entries.len())));
    }
    Ok(CooFile {
        rows,
        cols,
        characteristic,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use triweb_core::presentation::{builtin_exotic_15_1, degenerate};
    use triweb_core::PrimeField;

    #[test]
    fn round_trips() {
        for tp in [builtin_exotic_15_1(), degenerate(4).unwrap()] {
            let (back, warnings) = presentation_from_json(&presentation_to_json(&tp)).unwrap();
            assert_eq!(back, tp);
            assert!(warnings.is_empty());
        }
    }

    #[test]
    fn missing_incidence_is_reconstructed() {
        let tp = builtin_exotic_15_1();
        let mut file = PresentationFile::from_presentation(&tp);
        file.incidence = None;
        let (back, _) = file.into_presentation().unwrap();
        assert_eq!(back, tp);
    }

    #[test]
    fn point_to_point_sigma_is_rejected() {
        let tp = builtin_exotic_15_1();
        let mut file = PresentationFile::from_presentation(&tp);
        file.sigma[0] = [0, 1];
        file.sigma.retain(|p| p[0] != 1 && p[1] != 1 || *p == [0, 1]);
        let err = file.into_presentation().unwrap_err().to_string();
        assert!(err.contains("sigma"), "{err}");
    }

    #[test]
    fn duplicate_triples_warn() {
        let tp = builtin_exotic_15_1();
        let mut file = PresentationFile::from_presentation(&tp);
        file.triples.push(file.triples[0]);
        let (back, warnings) = file.into_presentation().unwrap();
        assert_eq!(back.triples().len(), 104);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn coo_round_trip() {
        let f = PrimeField::new(5).unwrap();
        let m = SparseMatrix::from_int_triplets(2, 3, f, [(0, 2, 4), (1, 0, 1)]).unwrap();
        let text = write_coo(&m);
        assert_eq!(text, "2 3 5 2\n0 2 4\n1 0 1\n");
        let parsed = read_coo(&text).unwrap();
        assert_eq!(parsed.entries, [(0, 2, "4".to_string()), (1, 0, "1".to_string())]);
        assert!(read_coo("2 3 5 3\n0 2 4\n").is_err());
    }
}
