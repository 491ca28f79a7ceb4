//! JSON documents read and written by the command line tool.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::classify::ClassificationRecord;
use crate::heisenberg::{WeylFailure, WeylReport};
use crate::reduction::{doubled, Verification};
use crate::{AlternatingForm, Decomposition, Error, FiniteAbelianGroup, HomMatrix, Result, Step};

/// `{"group": "Z/2 x Z/2", "q": [[0, 1], [1, 0]]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormFile {
    pub group: String,
    pub q: Vec<Vec<i64>>,
}

impl FormFile {
    pub fn from_form(e: &AlternatingForm) -> Self {
        FormFile { group: e.group().to_string(), q: signed(e.to_rows()) }
    }

    pub fn to_form(&self) -> Result<AlternatingForm> {
        AlternatingForm::new(&self.group.parse()?, &self.q)
    }
}

/// `{"base": "Z/2", "phi": [[1, 0], [0, 1]], "trace": [{"kind": "swap", "i": 0, "j": 1}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub base: String,
    pub phi: Vec<Vec<i64>>,
    pub trace: Vec<Step>,
}

impl DecompositionFile {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        DecompositionFile { base: d.base.to_string(), phi: signed(d.phi.to_rows()), trace: d.trace.clone() }
    }

    /// `φ` maps `A × Â` onto a group with the same invariant factors.
    pub fn to_decomposition(&self) -> Result<Decomposition> {
        let base: FiniteAbelianGroup = self.base.parse()?;
        let k = doubled(&base);
        let phi = HomMatrix::new(&k, &k, &self.phi)?;
        Ok(Decomposition { base, phi, trace: self.trace.clone() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationFile {
    pub order_n: u64,
    pub phase_groups: Vec<String>,
    pub count: usize,
}

impl ClassificationFile {
    pub fn from_record(r: &ClassificationRecord) -> Self {
        ClassificationFile {
            order_n: r.order_n,
            phase_groups: r.phase_groups.iter().map(ToString::to_string).collect(),
            count: r.count,
        }
    }

    pub fn to_record(&self) -> Result<ClassificationRecord> {
        Ok(ClassificationRecord {
            order_n: self.order_n,
            phase_groups: self.phase_groups.iter().map(|g| g.parse()).collect::<Result<_>>()?,
            count: self.count,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleFile {
    pub x: Vec<u64>,
    pub chi: Vec<u64>,
    pub x2: Vec<u64>,
    pub chi2: Vec<u64>,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFile {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exhaustive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<CounterexampleFile>,
}

impl From<&Verification> for VerificationFile {
    fn from(v: &Verification) -> Self {
        match v {
            Verification::Valid { exhaustive } => {
                VerificationFile { valid: true, exhaustive: Some(*exhaustive), reason: None, counterexample: None }
            }
            Verification::NotBijective => VerificationFile {
                valid: false,
                exhaustive: None,
                reason: Some("phi is not bijective".into()),
                counterexample: None,
            },
            Verification::Counterexample(c) => VerificationFile {
                valid: false,
                exhaustive: None,
                reason: Some("pairing identity fails".into()),
                counterexample: Some(CounterexampleFile {
                    x: c.x.clone(),
                    chi: c.chi.clone(),
                    x2: c.x2.clone(),
                    chi2: c.chi2.clone(),
                    lhs: c.lhs,
                    rhs: c.rhs,
                }),
            },
        }
    }
}

/// Floats are written with 17 significant digits.
fn sig17<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if !v.is_finite() {
        return s.serialize_none();
    }
    let raw = RawValue::from_string(format!("{v:.16e}")).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylFailureFile {
    pub relation: String,
    pub operands: Vec<Vec<u64>>,
    #[serde(serialize_with = "sig17")]
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylReportFile {
    pub group: String,
    pub dim: usize,
    #[serde(serialize_with = "sig17")]
    pub max_deviation: f64,
    #[serde(serialize_with = "sig17")]
    pub unitarity_deviation: f64,
    pub unitarity_ok: bool,
    pub commutant_dimension: usize,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub failures: Vec<WeylFailureFile>,
}

impl WeylReportFile {
    pub fn from_report(group: &FiniteAbelianGroup, r: &WeylReport) -> Self {
        WeylReportFile {
            group: group.to_string(),
            dim: r.dim,
            max_deviation: r.max_deviation,
            unitarity_deviation: r.unitarity_deviation,
            unitarity_ok: r.unitarity_ok,
            commutant_dimension: r.commutant_dimension,
            pairs_checked: r.pairs_checked,
            exhaustive: r.exhaustive,
            failures: r
                .failures
                .iter()
                .map(|f| WeylFailureFile { relation: f.relation.clone(), operands: f.operands.clone(), deviation: f.deviation })
                .collect(),
        }
    }

    pub fn to_report(&self) -> WeylReport {
        WeylReport {
            dim: self.dim,
            max_deviation: self.max_deviation,
            unitarity_deviation: self.unitarity_deviation,
            unitarity_ok: self.unitarity_ok,
            commutant_dimension: self.commutant_dimension,
            pairs_checked: self.pairs_checked,
            exhaustive: self.exhaustive,
            failures: self
                .failures
                .iter()
                .map(|f| WeylFailure { relation: f.relation.clone(), operands: f.operands.clone(), deviation: f.deviation })
                .collect(),
        }
    }
}

fn signed(rows: Vec<Vec<u64>>) -> Vec<Vec<i64>> {
    rows.into_iter().map(|r| r.into_iter().map(|v| v as i64).collect()).collect()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("document types serialize")
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}

/// Every JSON document in a whitespace separated stream.
pub fn from_json_stream<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    serde_json::Deserializer::from_str(text)
        .into_iter::<T>()
        .map(|r| r.map_err(|e| Error::Json(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{verify_weyl_relations, weyl_operators, DEFAULT_MAX_DIM};
    use crate::reduction::symplectic_reduce;
    use crate::Limits;

    #[test]
    fn form_file_round_trip() {
        let text = r#"{"group": "Z/2 x Z/2", "q": [[0, 1], [1, 0]]}"#;
        let file: FormFile = from_json(text).unwrap();
        let e = file.to_form().unwrap();
        assert_eq!(FormFile::from_form(&e), file);
        let again: FormFile = from_json(&to_json(&file)).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn form_file_errors_name_the_entry() {
        let file: FormFile = from_json(r#"{"group": "Z/2 x Z/2", "q": [[0, 1], [0, 0]]}"#).unwrap();
        assert_eq!(file.to_form(), Err(Error::NotSkew { row: 0, col: 1, modulus: 2 }));
        let file: FormFile = from_json(r#"{"group": "Z/4 x Zx2", "q": []}"#).unwrap();
        assert!(matches!(file.to_form(), Err(Error::GroupLiteral { .. })));
        assert!(matches!(from_json::<FormFile>("{\"group\": 3}"), Err(Error::Json(_))));
    }

    #[test]
    fn decomposition_round_trip() {
        let e = AlternatingForm::new(&"Z/3 x Z/3".parse().unwrap(), &[vec![0, 2], vec![1, 0]]).unwrap();
        let d = symplectic_reduce(&e, &Limits::default()).unwrap();
        let text = to_json(&DecompositionFile::from_decomposition(&d));
        assert_eq!(text, r#"{"base":"Z/3","phi":[[2,0],[0,1]],"trace":[{"kind":"scale","i":0,"sigma":2}]}"#);
        let back: DecompositionFile = from_json(&text).unwrap();
        assert_eq!(back.to_decomposition().unwrap(), d);
    }

    #[test]
    fn weyl_report_digits() {
        let g: FiniteAbelianGroup = "Z/3".parse().unwrap();
        let report = verify_weyl_relations(&weyl_operators(&g, DEFAULT_MAX_DIM).unwrap());
        let mut file = WeylReportFile::from_report(&g, &report);
        file.max_deviation = 0.1;
        let text = to_json(&file);
        assert!(text.contains(r#""max_deviation":1.0000000000000001e-1"#), "{text}");
        let back: WeylReportFile = from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(WeylReportFile::from_report(&g, &back.to_report()), file);
    }

    #[test]
    fn streams() {
        let docs: Vec<FormFile> =
            from_json_stream("{\"group\":\"Z/1\",\"q\":[]}\n{\"group\":\"Z/2 x Z/2\",\"q\":[[0,1],[1,0]]}\n").unwrap();
        assert_eq!(docs.len(), 2);
        assert!(from_json_stream::<FormFile>("{\"group\":\"Z/1\",\"q\":[]} {").is_err());
    }
}
