use std::fs;
use std::path::Path;

use chaoscipher::analysis::AnalysisReport;
use chaoscipher::Result;

use crate::args::{Format, OutputArgs};

/// Writes `text` to `path`, or to standard output when no path is given.
pub fn write_out(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

pub fn render(report: &AnalysisReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv()?,
        Format::Text => report.to_text(),
    })
}

pub fn emit_report(report: &AnalysisReport, out: &OutputArgs) -> Result<()> {
    write_out(&render(report, out.format)?, out.out.as_deref())
}
