//! Per-graph summary rows of `ccrecon run`, as CSV or JSON.

use serde::Serialize;

pub const CSV_HEADER: &str = "protocol,class,n,class_size,rounds,bandwidth_bits,cost,lb_bits,accepts,rejects,errors";

/// Aggregate over the seeds run on one input graph. `bandwidth_bits` and
/// `rounds` are the largest observed; `lb_bits` is `log2 |G_n| / n`, the
/// per-node share of the information lower bound; `errors` counts outputs
/// contradicting enumeration truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub protocol: String,
    pub class: String,
    pub n: usize,
    pub class_size: u64,
    pub rounds: usize,
    pub bandwidth_bits: usize,
    pub cost: usize,
    pub lb_bits: f64,
    pub accepts: u64,
    pub rejects: u64,
    pub errors: u64,
}

/// `log2 |G_n| / n`, rounded to six decimals so both formats print it alike.
pub fn lower_bound_bits(class_size: u64, n: usize) -> f64 {
    if class_size == 0 {
        return 0.0;
    }
    let raw = (class_size as f64).log2() / n as f64;
    (raw * 1e6).round() / 1e6
}

pub fn to_csv(rows: &[SummaryRow]) -> anyhow::Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = String::from_utf8(w.into_inner()?)?;
    Ok(format!("{CSV_HEADER}\n{body}"))
}

pub fn to_json(rows: &[SummaryRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> SummaryRow {
        SummaryRow {
            protocol: "weak-2r".into(),
            class: "forests".into(),
            n: 5,
            class_size: 291,
            rounds: 2,
            bandwidth_bits: 16,
            cost: 32,
            lb_bits: lower_bound_bits(291, 5),
            accepts: 1,
            rejects: 0,
            errors: 0,
        }
    }

    #[test]
    fn csv_layout() {
        let text = to_csv(&[row()]).unwrap();
        assert_eq!(text, format!("{CSV_HEADER}\nweak-2r,forests,5,291,2,16,32,1.636975,1,0,0\n"));
    }

    #[test]
    fn same_data_in_json() {
        let rows = vec![row(), row()];
        let csv_text = to_csv(&rows).unwrap();
        let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
        let from_csv: Vec<serde_json::Value> = reader
            .records()
            .map(|r| {
                let r = r.unwrap();
                let mut obj = serde_json::Map::new();
                for (h, v) in CSV_HEADER.split(',').zip(r.iter()) {
                    let parsed: serde_json::Value = serde_json::from_str(v).unwrap_or(serde_json::Value::String(v.into()));
                    obj.insert(h.into(), parsed);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let from_json: Vec<serde_json::Value> = serde_json::from_str(&to_json(&rows)).unwrap();
        assert_eq!(from_csv, from_json);
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(lower_bound_bits(8, 3), 1.0);
        assert_eq!(lower_bound_bits(1, 4), 0.0);
        assert_eq!(lower_bound_bits(0, 4), 0.0);
    }
}
