//! Tidy plot series `series,x,y,y_lo,y_hi` from result files.

use std::collections::HashMap;

use crate::output::{Cell, Table};

struct Layout {
    x: &'static str,
    /// (y, y_lo, y_hi, fixed series name or None for a per-row name)
    ys: &'static [(&'static str, &'static str, &'static str, &'static str)],
    /// columns whose values name the series, as `col=value`
    keys: &'static [&'static str],
    /// column whose value is used verbatim as the series name
    label: Option<&'static str>,
}

fn layout(header: &[String]) -> Option<Layout> {
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    let starts = |cols: &[&str]| h.len() >= cols.len() && h[..cols.len()] == *cols;
    let est = &[("p_hat", "ci_low", "ci_high", "")][..];
    if starts(&["lambda", "event", "hits"]) {
        Some(Layout { x: "lambda", ys: est, keys: &[], label: Some("event") })
    } else if starts(&["lambda", "r", "c", "hits"]) {
        Some(Layout { x: "r", ys: est, keys: &["lambda", "c"], label: None })
    } else if starts(&["lambda", "r", "event", "hits"]) {
        Some(Layout { x: "r", ys: est, keys: &["lambda"], label: Some("event") })
    } else if starts(&["order", "lambda", "r", "hits"]) {
        Some(Layout { x: "lambda", ys: est, keys: &["r"], label: None })
    } else if starts(&["lambda", "r", "c", "c_prime", "covering_count"]) {
        Some(Layout {
            x: "lambda",
            ys: &[
                ("lhs_p_hat", "lhs_ci_low", "lhs_ci_high", "lhs"),
                ("rhs_p_hat", "rhs_ci_low", "rhs_ci_high", "rhs"),
            ],
            keys: &["r", "c", "c_prime"],
            label: None,
        })
    } else if starts(&["lambda", "lambda_prime", "r"]) {
        Some(Layout {
            x: "r",
            ys: &[
                ("low_p_hat", "low_ci_low", "low_ci_high", "low"),
                ("high_p_hat", "high_ci_low", "high_ci_high", "high"),
            ],
            keys: &["lambda", "lambda_prime"],
            label: None,
        })
    } else if starts(&["lambda", "r", "x_norm"]) {
        Some(Layout {
            x: "lambda",
            ys: &[("cov", "ci_low", "ci_high", "cov")],
            keys: &["r", "x_norm"],
            label: None,
        })
    } else {
        None
    }
}

/// Converts one result file (timestamp line optional) into plot series.
/// Rows are grouped by series in order of first appearance and sorted by x
/// within each series.
pub fn series_from_result(text: &str) -> Result<Table, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| format!("unreadable header: {e}"))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.iter().all(|c| c.is_empty()) {
        return Err("missing header line".into());
    }
    let lay = layout(&header).ok_or_else(|| format!("not a plottable result table (columns: {})", header.join(",")))?;
    let col = |name: &str| {
        header
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| format!("missing column `{name}`"))
    };
    let x_col = col(lay.x)?;
    let key_cols = lay.keys.iter().map(|k| col(k).map(|i| (*k, i))).collect::<Result<Vec<_>, _>>()?;
    let label_col = lay.label.map(col).transpose()?;
    let y_cols = lay
        .ys
        .iter()
        .map(|(y, lo, hi, name)| Ok((col(y)?, col(lo)?, col(hi)?, *name)))
        .collect::<Result<Vec<_>, String>>()?;

    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, Vec<[f64; 4]>> = HashMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| format!("row {}: {e}", i + 1))?;
        let num = |j: usize| -> Result<f64, String> {
            let s = rec.get(j).unwrap_or("");
            s.parse::<f64>()
                .map_err(|_| format!("row {}: column `{}` is not a number: `{s}`", i + 1, header[j]))
        };
        let x = num(x_col)?;
        let mut base: Vec<String> = Vec::new();
        if let Some(j) = label_col {
            base.push(rec.get(j).unwrap_or("").to_string());
        }
        for (k, j) in &key_cols {
            base.push(format!("{k}={}", rec.get(*j).unwrap_or("")));
        }
        for &(y, lo, hi, name) in &y_cols {
            let mut parts = Vec::new();
            if !name.is_empty() {
                parts.push(name.to_string());
            }
            parts.extend(base.iter().cloned());
            let series = parts.join(" ");
            if !groups.contains_key(&series) {
                order.push(series.clone());
            }
            groups.entry(series).or_default().push([x, num(y)?, num(lo)?, num(hi)?]);
        }
    }
    let mut t = Table::new(&["series", "x", "y", "y_lo", "y_hi"]);
    for name in order {
        let mut pts = groups.remove(&name).unwrap_or_default();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        for p in pts {
            t.push(vec![
                Cell::Text(name.clone()),
                p[0].into(),
                p[1].into(),
                p[2].into(),
                p[3].into(),
            ]);
        }
    }
    Ok(t)
}
