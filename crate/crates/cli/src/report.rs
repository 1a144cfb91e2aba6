//! Experiment reports and their CSV and JSON forms.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::probe::Provenance;

pub const CSV_HEADER: [&str; 7] = [
    "experiment",
    "n",
    "param",
    "value",
    "bound",
    "ratio",
    "pass",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    pub n: usize,
    pub param: String,
    #[serde(with = "float_text")]
    pub value: f64,
    #[serde(with = "opt_float_text")]
    pub bound: Option<f64>,
    #[serde(with = "opt_float_text")]
    pub ratio: Option<f64>,
    pub pass: bool,
    pub provenance: Provenance,
    /// Offset of the worst sample; absent for deterministic rows.
    pub sample: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub config_hash: String,
    pub version: String,
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub gates: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

impl Row {
    pub fn label(&self) -> String {
        format!("{} n={} {}", self.experiment, self.n, self.param)
    }

    fn is_gate(&self) -> bool {
        self.provenance != Provenance::Recorded
    }
}

impl Report {
    pub fn new(config: &ExperimentConfig, rows: Vec<Row>) -> Self {
        let gates: Vec<&Row> = rows.iter().filter(|r| r.is_gate()).collect();
        let failed: Vec<String> = gates
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.label())
            .collect();
        let summary = Summary {
            gates: gates.len(),
            passed: gates.len() - failed.len(),
            pass: failed.is_empty(),
            failed,
        };
        Report {
            meta: Meta {
                seed: config.seed,
                config_hash: config.hash(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                config: config.clone(),
            },
            rows,
            summary,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.experiment.clone(),
                r.n.to_string(),
                r.param.clone(),
                fmt_float(r.value),
                r.bound.map(fmt_float).unwrap_or_default(),
                r.ratio.map(fmt_float).unwrap_or_default(),
                r.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One line per row: status, label, value against bound, and the bound's provenance.
    pub fn gate_lines(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                let status = match (r.is_gate(), r.pass) {
                    (false, _) => "INFO",
                    (true, true) => "PASS",
                    (true, false) => "FAIL",
                };
                let bound = r.bound.map(|b| format!(" bound={b:?}")).unwrap_or_default();
                format!(
                    "{status} {} value={:?}{bound} [{}]",
                    r.label(),
                    r.value,
                    r.provenance.label()
                )
            })
            .collect()
    }
}

/// Finite floats as JSON numbers, non-finite ones as the strings `NaN`, `inf`, `-inf`.
mod float_text {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub enum Wire {
        Num(f64),
        Text(String),
    }

    pub fn to_wire(v: f64) -> Wire {
        if v.is_finite() {
            Wire::Num(v)
        } else {
            Wire::Text(format!("{v:?}"))
        }
    }

    pub fn from_wire<E: serde::de::Error>(w: Wire) -> Result<f64, E> {
        match w {
            Wire::Num(v) => Ok(v),
            Wire::Text(s) => s.parse().map_err(|_| E::custom(format!("bad float {s:?}"))),
        }
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_wire(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_wire(Wire::deserialize(d)?)
    }
}

mod opt_float_text {
    use super::float_text::{from_wire, to_wire, Wire};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(to_wire).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<Wire>::deserialize(d)?.map(from_wire).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    fn rows() -> Vec<Row> {
        vec![
            Row {
                experiment: "lemma4".into(),
                n: 3,
                param: "constant".into(),
                value: 1.5,
                bound: Some(4.0),
                ratio: Some(0.375),
                pass: true,
                provenance: Provenance::PaperConstant,
                sample: Some(12),
            },
            Row {
                experiment: "growth".into(),
                n: 3,
                param: "orlicz_chain".into(),
                value: f64::NAN,
                bound: None,
                ratio: None,
                pass: true,
                provenance: Provenance::Recorded,
                sample: None,
            },
            Row {
                experiment: "growth".into(),
                n: 4,
                param: "ratio_drift".into(),
                value: 0.07,
                bound: Some(0.05),
                ratio: Some(f64::INFINITY),
                pass: false,
                provenance: Provenance::ConfiguredBudget,
                sample: None,
            },
        ]
    }

    #[test]
    fn summary_counts_gates_only() {
        let r = Report::new(&ExperimentConfig::new(Experiment::ReportAll), rows());
        assert_eq!(r.summary.gates, 2);
        assert_eq!(r.summary.passed, 1);
        assert_eq!(r.summary.failed, vec!["growth n=4 ratio_drift".to_string()]);
        assert!(!r.summary.pass);
        let lines = r.gate_lines();
        assert!(
            lines[0].starts_with("PASS lemma4 n=3 constant")
                && lines[0].ends_with("[paper constant]")
        );
        assert!(lines[1].starts_with("INFO"));
        assert!(lines[2].starts_with("FAIL"));
    }

    #[test]
    fn csv_schema() {
        let r = Report::new(&ExperimentConfig::new(Experiment::ReportAll), rows());
        let mut out = Vec::new();
        r.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "experiment,n,param,value,bound,ratio,pass");
        assert_eq!(lines[1], "lemma4,3,constant,1.5,4.0,0.375,true");
        assert_eq!(lines[2], "growth,3,orlicz_chain,NaN,,,true");
        assert_eq!(lines[3], "growth,4,ratio_drift,0.07,0.05,inf,false");
    }

    #[test]
    fn json_round_trip_keeps_non_finite_values() {
        let r = Report::new(&ExperimentConfig::new(Experiment::ReportAll), rows());
        let mut out = Vec::new();
        r.write_json(&mut out).unwrap();
        let back = Report::from_json(std::str::from_utf8(&out).unwrap()).unwrap();
        assert!(back.rows[1].value.is_nan());
        assert_eq!(back.rows[2].ratio, Some(f64::INFINITY));
        assert_eq!(back.rows[0], r.rows[0]);
        assert_eq!(back.meta, r.meta);
        assert!(String::from_utf8(out)
            .unwrap()
            .contains("\"configured budget\""));
    }
}
