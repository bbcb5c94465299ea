use chaoscipher::analysis::{sequence_autocorrelation, AnalysisReport, Table, Value};
use chaoscipher::keystream::normalize_state;
use chaoscipher::maps::{
    bifurcation_sweep, iterate, lyapunov_spectrum, MapId, MapParams, MapState, SweepSpec,
};
use chaoscipher::Result;

use crate::args::{AutocorrArgs, BifurcateArgs, Format, LyapunovArgs, MapArgs};
use crate::output::{emit_report, write_out};

fn params_and_seed(args: &MapArgs) -> Result<(MapParams, MapState)> {
    let mut params = MapParams::reference(args.map);
    for (name, value) in args.overrides() {
        if let Some(v) = value {
            params = params.with(name, v)?;
        }
    }
    let seed = match &args.seed_state {
        Some(v) => MapState::from_components(args.map, v)?,
        None => MapState::default_seed(args.map),
    };
    Ok((params, seed))
}

fn describe(params: &MapParams) -> String {
    let names: &[&str] = match params.map_id() {
        MapId::Hyper3D => &["a1", "a2", "a3", "b1", "b2", "c"],
        MapId::Mem2D => &["k"],
    };
    names
        .iter()
        .map(|n| format!("{n}={}", params.get(n).expect("known coefficient")))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Names the parameter set on stderr before a map error propagates.
fn in_context<T>(params: &MapParams, r: Result<T>) -> Result<T> {
    r.inspect_err(|_| eprintln!("{} map with {}", params.map_id(), describe(params)))
}

pub fn lyapunov(args: LyapunovArgs) -> Result<()> {
    let (params, seed) = params_and_seed(&args.map)?;
    let spectrum = in_context(
        &params,
        lyapunov_spectrum(&params, &seed, args.map.burn_in, args.n, args.renorm),
    )?;
    let mut table = Table::new(["index", "exponent"]);
    let mut report = AnalysisReport::new("lyapunov")
        .meta("map", params.map_id())
        .meta("params", describe(&params))
        .meta("n", args.n)
        .meta("burn_in", args.map.burn_in)
        .meta("renorm_interval", args.renorm);
    for (i, e) in spectrum.exponents.iter().enumerate() {
        table.push(vec![Value::Number((i + 1) as f64), Value::Number(*e)])?;
        report = report.scalar(format!("lambda{}", i + 1), Value::Number(*e))?;
    }
    emit_report(&report.with_table(table), &args.out)
}

pub fn bifurcate(args: BifurcateArgs) -> Result<()> {
    let (params, seed) = params_and_seed(&args.map)?;
    let mut spec = SweepSpec::new(&args.param, args.range.0, args.range.1, args.steps);
    spec.burn_in = args.map.burn_in;
    spec.samples_per_value = args.samples;
    spec.component = args.component.clone();
    let table = in_context(&params, bifurcation_sweep(&params, &seed, &spec))?;
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&table).expect("table serializes") + "\n",
        Format::Csv | Format::Text => table.to_csv()?,
    };
    write_out(&text, args.out.as_deref())
}

/// Lag-1..max_lag autocorrelation of every state component, on the
/// normalized keystream values by default.
pub fn autocorr(args: AutocorrArgs) -> Result<()> {
    let (params, seed) = params_and_seed(&args.map)?;
    let states: Vec<Vec<f64>> = in_context(&params, match (&params, &seed) {
        (MapParams::Hyper3D(p), MapState::Hyper3D(s)) => {
            iterate(p, (*s).into(), args.map.burn_in, args.n).map(|v| v.iter().map(|a| a.to_vec()).collect())
        }
        (MapParams::Mem2D(p), MapState::Mem2D(s)) => {
            iterate(p, (*s).into(), args.map.burn_in, args.n).map(|v| v.iter().map(|a| a.to_vec()).collect())
        }
        _ => unreachable!("params and seed built for the same map"),
    })?;
    let names: &[&str] = match params.map_id() {
        MapId::Hyper3D => &["x", "y", "z"],
        MapId::Mem2D => &["x", "q"],
    };
    let mut columns = Vec::new();
    for c in 0..names.len() {
        let seq: Vec<f64> = states
            .iter()
            .map(|s| if args.raw { s[c] } else { normalize_state(s[c]) })
            .collect();
        columns.push(sequence_autocorrelation(&seq, args.max_lag)?);
    }
    let mut header = vec!["lag"];
    header.extend_from_slice(names);
    let mut table = Table::new(header);
    let mut max_abs = 0.0f64;
    for lag in 0..args.max_lag {
        let mut row = vec![Value::Number((lag + 1) as f64)];
        for col in &columns {
            max_abs = max_abs.max(col[lag].1.abs());
            row.push(Value::Number(col[lag].1));
        }
        table.push(row)?;
    }
    let report = AnalysisReport::new("autocorrelation")
        .scalar("max_abs", Value::Number(max_abs))?
        .meta("map", params.map_id())
        .meta("params", describe(&params))
        .meta("sequence", if args.raw { "raw" } else { "normalized" })
        .meta("n", args.n)
        .with_table(table);
    emit_report(&report, &args.out)
}
