use discern::io::format_g17;
use discern::EvaluationReport;

fn show(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |v| format!("{v:.6}"))
}

pub fn print_report(report: &EvaluationReport) {
    println!("{:<12}{}", "k", report.k);
    println!("{:<12}{}", "silhouette", show(report.silhouette));
    println!("{:<12}{}", "sse", show(Some(report.sse)));
    println!("{:<12}{}", "ari", show(report.ari));
    println!("{:<12}{}", "purity", show(report.purity));
}

/// One method's line in a comparison table, averaged over its runs.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub method: String,
    pub k: usize,
    pub runs: usize,
    pub silhouette: Option<f64>,
    pub purity: Option<f64>,
    pub ari: Option<f64>,
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let present: Vec<f64> = values.flatten().collect();
    (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64)
}

impl CompareRow {
    pub fn from_reports(method: &str, reports: &[EvaluationReport]) -> Self {
        CompareRow {
            method: method.to_string(),
            k: reports.first().map_or(0, |r| r.k),
            runs: reports.len(),
            silhouette: mean(reports.iter().map(|r| r.silhouette)),
            purity: mean(reports.iter().map(|r| r.purity)),
            ari: mean(reports.iter().map(|r| r.ari)),
        }
    }

    pub fn to_csv(rows: &[CompareRow]) -> String {
        let cell = |v: Option<f64>| v.map_or_else(String::new, format_g17);
        let mut out = String::from("method,k,runs,asc,purity,ari\n");
        for row in rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.method,
                row.k,
                row.runs,
                cell(row.silhouette),
                cell(row.purity),
                cell(row.ari)
            ));
        }
        out
    }

    /// Aligned table with three decimals.
    pub fn to_text(rows: &[CompareRow]) -> String {
        let cell = |v: Option<f64>| v.map_or_else(|| "-".into(), |v| format!("{v:.3}"));
        let width = rows.iter().map(|r| r.method.len()).max().unwrap_or(0).max("method".len());
        let mut out = format!("{:<width$}  {:>3}  {:>4}  {:>6}  {:>6}  {:>6}\n", "method", "k", "runs", "asc", "purity", "ari");
        for row in rows {
            out.push_str(&format!(
                "{:<width$}  {:>3}  {:>4}  {:>6}  {:>6}  {:>6}\n",
                row.method,
                row.k,
                row.runs,
                cell(row.silhouette),
                cell(row.purity),
                cell(row.ari)
            ));
        }
        out
    }
}
