//! Count-record files: `{"schema": "counts/v1", "spec": {...}, "records": [...]}`.

use super::RunSpec;
use crate::dcqd::{BellLabel, InputLabel, ProbeRecord, QstRecord};
use crate::error::{Error, Result};
use crate::quantum::Polarization;
use crate::sqpt::Basis;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::Path;

pub const SCHEMA: &str = "counts/v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqptRecord {
    pub config_id: usize,
    pub input: Polarization,
    pub basis: Basis,
    pub counts: [u64; 2],
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BellCounts {
    pub phi_plus: u64,
    pub phi_minus: u64,
    pub psi_plus: u64,
    pub psi_minus: u64,
}

impl BellCounts {
    pub fn from_array(a: [u64; 4]) -> Self {
        BellCounts { phi_plus: a[0], phi_minus: a[1], psi_plus: a[2], psi_minus: a[3] }
    }

    /// Ordered `(Φ+, Φ−, Ψ+, Ψ−)`.
    pub fn as_array(&self) -> [u64; 4] {
        [self.phi_plus, self.phi_minus, self.psi_plus, self.psi_minus]
    }

    pub fn get(&self, label: BellLabel) -> u64 {
        self.as_array()[label.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcqdRecord {
    pub config_id: usize,
    pub input_label: InputLabel,
    pub counts: BellCounts,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CountRecord {
    Sqpt(SqptRecord),
    Dcqd(DcqdRecord),
    Qst(QstRecord),
    Probe(ProbeRecord),
}

impl CountRecord {
    pub fn config_id(&self) -> usize {
        match self {
            CountRecord::Sqpt(r) => r.config_id,
            CountRecord::Dcqd(r) => r.config_id,
            CountRecord::Qst(r) => r.config_id,
            CountRecord::Probe(r) => r.config_id,
        }
    }

    pub fn budget(&self) -> u64 {
        match self {
            CountRecord::Sqpt(r) => r.budget,
            CountRecord::Dcqd(r) => r.budget,
            CountRecord::Qst(r) => r.budget,
            CountRecord::Probe(r) => r.budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountFile {
    pub schema: String,
    pub spec: RunSpec,
    pub records: Vec<CountRecord>,
}

#[derive(Deserialize)]
struct SchemaProbe {
    schema: Option<String>,
}

impl CountFile {
    pub fn new(spec: RunSpec, records: Vec<CountRecord>) -> Self {
        CountFile { schema: SCHEMA.to_string(), spec, records }
    }

    pub fn to_json(&self) -> String {
        crate::io::to_json_string(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let probe: SchemaProbe = serde_json::from_str(text).map_err(|e| Error::Parse { path: ".".into(), message: e.to_string() })?;
        match probe.schema.as_deref() {
            Some(SCHEMA) => {}
            Some(other) => return Err(Error::SchemaVersion { found: other.to_string(), supported: SCHEMA.to_string() }),
            None => return Err(Error::Parse { path: "schema".into(), message: "missing schema field".into() }),
        }
        let file: CountFile = crate::io::from_json_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        let mut seen = HashSet::new();
        for (k, rec) in self.records.iter().enumerate() {
            if rec.budget() == 0 {
                return Err(Error::Parse { path: format!("records[{k}].budget"), message: "budget must be at least 1".into() });
            }
            if !seen.insert(rec.config_id()) {
                return Err(Error::Parse { path: format!("records[{k}].config_id"), message: format!("duplicate config_id {}", rec.config_id()) });
            }
            let ok = matches!(
                (self.spec.scheme, rec),
                (super::Scheme::Sqpt, CountRecord::Sqpt(_))
                    | (super::Scheme::Dcqd, CountRecord::Dcqd(_))
                    | (super::Scheme::Calibration, CountRecord::Qst(_) | CountRecord::Probe(_))
            );
            if !ok {
                return Err(Error::Parse { path: format!("records[{k}].type"), message: format!("record type does not match scheme {:?}", self.spec.scheme) });
            }
        }
        Ok(())
    }

    pub fn sqpt_records(&self) -> Vec<&SqptRecord> {
        self.records.iter().filter_map(|r| if let CountRecord::Sqpt(x) = r { Some(x) } else { None }).collect()
    }

    pub fn dcqd_records(&self) -> Vec<&DcqdRecord> {
        self.records.iter().filter_map(|r| if let CountRecord::Dcqd(x) = r { Some(x) } else { None }).collect()
    }

    pub fn qst_records(&self) -> Vec<QstRecord> {
        self.records.iter().filter_map(|r| if let CountRecord::Qst(x) = r { Some(x.clone()) } else { None }).collect()
    }

    pub fn probe_records(&self) -> Vec<ProbeRecord> {
        self.records.iter().filter_map(|r| if let CountRecord::Probe(x) = r { Some(x.clone()) } else { None }).collect()
    }
}
