use chaoscipher::analysis::{
    adjacent_pixel_correlation, chi_square_uniform, entropy, entropy_of_counts, histogram, mse,
    npcr, pearson, psnr, ssim, uaci, AnalysisReport, Direction, Table, Value,
};
use chaoscipher::{Error, ImageBuffer, Result};

use crate::args::{AnalyzeArgs, Metric};
use crate::output::emit_report;

const CHANNEL_NAMES: [&str; 3] = ["R", "G", "B"];

fn channel_name(img: &ImageBuffer, c: usize) -> &'static str {
    if img.channels() == 1 { "gray" } else { CHANNEL_NAMES[c] }
}

fn expect_paths(metric: Metric, n: usize, want: usize) -> Result<()> {
    if n != want {
        return Err(Error::InvalidArgument(format!(
            "{metric:?} takes {want} image path(s), got {n}"
        )));
    }
    Ok(())
}

pub fn run(args: AnalyzeArgs) -> Result<()> {
    let metric = args.metric;
    let want = match metric {
        Metric::Entropy | Metric::Adjacency | Metric::Histogram => 1,
        _ => 2,
    };
    expect_paths(metric, args.paths.len(), want)?;
    let images = crate::load_all(&args.paths)?;
    let name = format!("{metric:?}").to_lowercase();
    let mut report = AnalysisReport::new(&name);
    for (i, p) in args.paths.iter().enumerate() {
        report = report.meta(format!("path{}", i + 1), p.display());
    }

    let report = match metric {
        Metric::Entropy => entropy_report(report, &images[0], args.per_channel)?,
        Metric::Histogram => histogram_report(report, &images[0], args.per_channel)?,
        Metric::Adjacency => {
            let img = &images[0];
            let dirs = args.direction.map_or(Direction::ALL.to_vec(), |d| vec![d]);
            let mut report = report.meta("samples", args.samples).meta("seed", args.seed);
            for d in dirs {
                if args.per_channel && img.channels() > 1 {
                    for c in 0..img.channels() {
                        let r = adjacent_pixel_correlation(&img.channel(c)?, d, args.samples, args.seed)?;
                        report = report.scalar(format!("{d}.{}", channel_name(img, c)), Value::Number(r))?;
                    }
                } else {
                    let r = adjacent_pixel_correlation(img, d, args.samples, args.seed)?;
                    report = report.scalar(d.to_string(), Value::Number(r))?;
                }
            }
            report
        }
        Metric::Correlation => {
            let (a, b) = (&images[0], &images[1]);
            if !a.same_shape(b) {
                // Reuse the metric layer's shape error.
                mse(a, b)?;
            }
            let mut report = report.scalar("correlation", Value::Number(pearson(a.pixels(), b.pixels())?))?;
            if args.per_channel && a.channels() > 1 {
                for c in 0..a.channels() {
                    let r = pearson(a.channel(c)?.pixels(), b.channel(c)?.pixels())?;
                    report = report.channel(channel_name(a, c), r)?;
                }
            }
            report
        }
        Metric::Mse => report.scalar("mse", Value::Number(mse(&images[0], &images[1])?))?,
        Metric::Psnr => report.scalar("psnr", psnr(&images[0], &images[1])?)?,
        Metric::Ssim => report.scalar("ssim", Value::Number(ssim(&images[0], &images[1])?))?,
        Metric::Npcr => report.scalar("npcr", Value::Number(npcr(&images[0], &images[1])?))?,
        Metric::Uaci => report.scalar("uaci", Value::Number(uaci(&images[0], &images[1])?))?,
    };
    emit_report(&report, &args.out)
}

fn entropy_report(report: AnalysisReport, img: &ImageBuffer, per_channel: bool) -> Result<AnalysisReport> {
    let mut report = report.scalar("entropy", Value::Number(entropy(img)))?;
    if per_channel && img.channels() > 1 {
        for (c, h) in histogram(img, true).iter().enumerate() {
            report = report.channel(channel_name(img, c), entropy_of_counts(h))?;
        }
    }
    Ok(report)
}

/// Bin counts as a table plus max/min ratio and chi-square uniformity
/// statistics of the pooled histogram.
fn histogram_report(report: AnalysisReport, img: &ImageBuffer, per_channel: bool) -> Result<AnalysisReport> {
    let hists = histogram(img, per_channel);
    let pooled = &histogram(img, false)[0];
    let chi = chi_square_uniform(pooled)?;
    let max = *pooled.iter().max().expect("256 bins");
    let min = *pooled.iter().min().expect("256 bins");
    let ratio = if min == 0 { Value::from("infinite") } else { Value::Number(max as f64 / min as f64) };

    let mut columns = vec!["bin".to_owned()];
    if hists.len() == 1 {
        columns.push("count".into());
    } else {
        columns.extend((0..hists.len()).map(|c| channel_name(img, c).to_owned()));
    }
    let mut table = Table::new(columns);
    for bin in 0..256 {
        let mut row = vec![Value::Number(bin as f64)];
        row.extend(hists.iter().map(|h| Value::Number(h[bin] as f64)));
        table.push(row)?;
    }
    Ok(report
        .scalar("max_min_ratio", ratio)?
        .scalar("chi_square", Value::Number(chi.statistic))?
        .scalar("chi_square_dof", Value::Number(chi.dof as f64))?
        .scalar("chi_square_p", Value::Number(chi.p_value))?
        .with_table(table))
}
