use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Write `<base>.csv` (`index,actual,predicted`) and `<base>.svg` (both
/// curves and a legend). Returns the two paths.
pub fn export_predictions(actuals: &[f64], predicted: &[f64], base: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    if actuals.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: actuals.len(),
            right: predicted.len(),
        });
    }
    let base = base.as_ref();
    let csv_path = base.with_extension("csv");
    let svg_path = base.with_extension("svg");

    let mut writer = csv::Writer::from_path(&csv_path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(&csv_path, io),
        other => Error::InvalidArgument(format!("{other:?}")),
    })?;
    writer.write_record(["index", "actual", "predicted"])?;
    for (i, (a, p)) in actuals.iter().zip(predicted).enumerate() {
        // `{}` on f64 prints the shortest string that parses back exactly
        writer.write_record([i.to_string(), a.to_string(), p.to_string()])?;
    }
    writer.flush().map_err(|e| Error::io(&csv_path, e))?;

    std::fs::write(&svg_path, line_chart(actuals, predicted)).map_err(|e| Error::io(&svg_path, e))?;
    Ok((csv_path, svg_path))
}

/// Read back a file written by [`export_predictions`].
pub fn read_predictions_csv(path: impl AsRef<Path>) -> Result<(Vec<f64>, Vec<f64>)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let (mut actual, mut predicted) = (Vec::new(), Vec::new());
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let field = |k: usize| -> Result<f64> {
            let cell = rec.get(k).unwrap_or("");
            cell.parse().map_err(|_| Error::Parse {
                row: i + 2,
                value: cell.to_string(),
            })
        };
        actual.push(field(1)?);
        predicted.push(field(2)?);
    }
    Ok((actual, predicted))
}

fn polyline(values: &[f64], lo: f64, hi: f64, color: &str) -> String {
    let n = values.len().max(2) - 1;
    let span = if hi > lo { hi - lo } else { 1.0 };
    let points: Vec<String> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let x = MARGIN + (WIDTH - 2.0 * MARGIN) * i as f64 / n as f64;
            let y = HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * (v - lo) / span;
            format!("{x:.2},{y:.2}")
        })
        .collect();
    format!(
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
        points.join(" ")
    )
}

fn line_chart(actuals: &[f64], predicted: &[f64]) -> String {
    let all = actuals.iter().chain(predicted).copied().filter(|v| v.is_finite());
    let (lo, hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="black"><line x1="{m}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{m}" y1="{m}" x2="{m}" y2="{b}"/></g>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="11"><text x="5" y="{}">{hi:.4}</text><text x="5" y="{}">{lo:.4}</text></g>"#,
        MARGIN + 4.0,
        HEIGHT - MARGIN
    );
    let _ = writeln!(s, "{}", polyline(actuals, lo, hi, "#1f77b4"));
    let _ = writeln!(s, "{}", polyline(predicted, lo, hi, "#d62728"));
    let lx = WIDTH - MARGIN - 130.0;
    let _ = writeln!(
        s,
        concat!(
            r#"<g class="legend" font-family="sans-serif" font-size="12">"#,
            r##"<rect x="{x}" y="12" width="14" height="3" fill="#1f77b4"/><text x="{tx}" y="18">actual</text>"##,
            r##"<rect x="{x}" y="30" width="14" height="3" fill="#d62728"/><text x="{tx}" y="36">predicted</text>"##,
            "</g>"
        ),
        x = lx,
        tx = lx + 20.0
    );
    s.push_str("</svg>\n");
    s
}
