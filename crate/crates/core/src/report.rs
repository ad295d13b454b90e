//! Tabular output of survey records (CSV and its JSON mirror) and the run
//! manifest written next to them.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::state::SystemDims;
use crate::survey::{Statistic, SurveyConfig, SurveyRecord};

pub const CSV_HEADER: [&str; 9] = [
    "n1",
    "n2",
    "N",
    "samples",
    "label",
    "count",
    "probability",
    "std_error",
    "boundary_count",
];

/// One statistic of one dimension pair.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Row {
    pub n1: usize,
    pub n2: usize,
    #[serde(rename = "N")]
    pub total: usize,
    pub samples: u64,
    pub label: String,
    pub count: u64,
    pub probability: f64,
    pub std_error: f64,
    pub boundary_count: u64,
}

pub fn rows(records: &[SurveyRecord]) -> Vec<Row> {
    records
        .iter()
        .flat_map(|rec| {
            rec.labels().map(move |label| Row {
                n1: rec.dims.n_a,
                n2: rec.dims.n_b,
                total: rec.dims.total(),
                samples: rec.samples,
                label: label.as_str().to_owned(),
                count: rec.count(label),
                probability: rec.probability(label),
                std_error: rec.std_error(label),
                boundary_count: rec.boundary_count(label),
            })
        })
        .collect()
}

pub fn write_csv<W: Write>(records: &[SurveyRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows(records) {
        w.serialize(row)?;
    }
    if records.iter().all(|r| r.counts.is_empty()) {
        w.write_record(CSV_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(records: &[SurveyRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

pub fn json_string(records: &[SurveyRecord]) -> Result<String> {
    Ok(serde_json::to_string_pretty(&rows(records))?)
}

/// Parses an emitted CSV, checking the header and each row's internal
/// consistency (`N = n1 * n2`, `count <= samples`, known label).
pub fn parse_csv<R: Read>(input: R) -> Result<Vec<Row>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::parse(
            1,
            format!("unexpected CSV header `{}`", header.as_slice()),
        ));
    }
    let mut out = Vec::new();
    for (k, row) in rdr.deserialize::<Row>().enumerate() {
        let line = k + 2;
        let row = row?;
        row.label.parse::<Statistic>()?;
        if row.n1.checked_mul(row.n2) != Some(row.total) {
            return Err(Error::parse(line, "N is not n1 * n2"));
        }
        if row.count > row.samples || row.boundary_count > row.samples {
            return Err(Error::parse(line, "count exceeds samples"));
        }
        out.push(row);
    }
    Ok(out)
}

/// Rebuilds records (counts only) from parsed rows, in first-seen order.
pub fn records_from_rows(rows: &[Row]) -> Result<Vec<SurveyRecord>> {
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut by_dims: BTreeMap<(usize, usize), SurveyRecord> = BTreeMap::new();
    for (k, row) in rows.iter().enumerate() {
        let line = k + 2;
        let dims = SystemDims::new(row.n1, row.n2).map_err(|e| Error::parse(line, e.to_string()))?;
        let label: Statistic = row.label.parse()?;
        let rec = by_dims.entry((row.n1, row.n2)).or_insert_with(|| {
            order.push((row.n1, row.n2));
            let mut r = SurveyRecord::empty(dims, std::iter::empty());
            r.samples = row.samples;
            r
        });
        if rec.samples != row.samples {
            return Err(Error::parse(line, "inconsistent sample counts for one dimension"));
        }
        if rec.counts.insert(label, row.count).is_some() {
            return Err(Error::parse(line, format!("duplicate label `{label}`")));
        }
        rec.boundary_counts.insert(label, row.boundary_count);
    }
    Ok(order.into_iter().filter_map(|k| by_dims.remove(&k)).collect())
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DimensionTiming {
    pub n1: usize,
    pub n2: usize,
    pub seconds: f64,
}

/// Everything needed to reproduce a survey output.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub config: SurveyConfig,
    pub format: String,
    pub plots: bool,
    pub timings: Vec<DimensionTiming>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: RunManifest = serde_json::from_str(text)?;
        m.config.validate()?;
        Ok(m)
    }
}
