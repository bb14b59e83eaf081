use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use evdmm::estimate::{block_maxima, neg_log_returns, rank_transform_with, EcdfDenominator};
use evdmm::{
    estimate_r, frechet_cdf, max_min_r, sample, table1, CoefficientReport, EstimateReport,
    M4Params, Partition, SampleMatrix, SimulationSpec, TailModel, WeightVector,
};
use serde::Serialize;
use serde_json::Value;

use crate::args::*;
use crate::format::{round_json, sig10};

/// Exit status of a successful run whose validation gaps exceeded the tolerance.
pub const EXIT_VALIDATION_FAILED: u8 = 1;

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Eval(a) => eval(a, out),
        Command::Estimate(a) => estimate(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Validate(a) => validate(a, out),
        Command::Ingest(a) => ingest(a, out),
        Command::Table1(a) => table1_cmd(a, out),
    }
}

fn build_model(args: &ModelArgs) -> Result<TailModel> {
    let need_dim = || {
        args.dim
            .ok_or_else(|| anyhow!("--dim is required for this model"))
    };
    if args.theta.is_some() && args.model != ModelKind::Logistic {
        bail!("--theta only applies to --model logistic");
    }
    if args.alpha_file.is_some() && args.model != ModelKind::M4 {
        bail!("--alpha-file only applies to --model m4");
    }
    Ok(match args.model {
        ModelKind::Logistic => {
            let theta = args
                .theta
                .ok_or_else(|| anyhow!("--theta is required for the logistic model"))?;
            TailModel::logistic(need_dim()?, theta)?
        }
        ModelKind::M4 => {
            let path = args
                .alpha_file
                .as_ref()
                .ok_or_else(|| anyhow!("--alpha-file is required for the m4 model"))?;
            let params = M4Params::from_csv_path(path, args.dim)
                .with_context(|| format!("reading {}", path.display()))?;
            TailModel::m4(params)
        }
        ModelKind::Independence => TailModel::independence(need_dim()?)?,
        ModelKind::Comonotone => TailModel::comonotone(need_dim()?)?,
    })
}

fn build_structure(
    args: &StructureArgs,
    dimension: usize,
    names: Option<&[String]>,
) -> Result<(Partition, WeightVector)> {
    let partition = match &args.groups {
        Some(text) => Partition::parse(text, dimension, names)?,
        None => Partition::singletons(dimension)?,
    };
    let lambda = match &args.lambda {
        Some(text) => {
            let w = WeightVector::parse(text)?;
            if w.len() != partition.len() {
                bail!(
                    "--lambda has {} entries but there are {} groups",
                    w.len(),
                    partition.len()
                );
            }
            w
        }
        None => WeightVector::ones(partition.len()),
    };
    Ok((partition, lambda))
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    let v = round_json(serde_json::to_value(value)?);
    serde_json::to_writer_pretty(&mut *out, &v)?;
    writeln!(out)?;
    Ok(())
}

/// Block subset rendered as one-based block numbers, e.g. mask 0b101 -> "1+3".
fn mask_label(mask: u64) -> String {
    (0..64)
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| (j + 1).to_string())
        .collect::<Vec<_>>()
        .join("+")
}

fn write_key_values(rows: &[(String, f64)], out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["quantity", "value"])?;
    for (k, v) in rows {
        w.write_record([k.clone(), sig10(*v).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn eval(args: EvalArgs, out: &mut dyn Write) -> Result<u8> {
    let model = build_model(&args.model)?;
    let (partition, lambda) = build_structure(&args.structure, model.dimension(), None)?;
    let report = max_min_r(&model, &partition, &lambda)?;
    match args.output.format {
        Format::Json => write_json(&report, out)?,
        Format::Csv => write_key_values(&coefficient_rows(&report), out)?,
    }
    Ok(0)
}

fn coefficient_rows(r: &CoefficientReport) -> Vec<(String, f64)> {
    let mut rows = vec![
        ("R".to_string(), r.r),
        ("lower".into(), r.lower),
        ("upper".into(), r.upper),
    ];
    rows.extend(
        r.e_terms
            .iter()
            .map(|(&m, &v)| (format!("e[{}]", mask_label(m)), v)),
    );
    rows
}

fn read_matrix(path: &Path, skip: &[String]) -> Result<SampleMatrix> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    SampleMatrix::from_csv_reader(file, skip).with_context(|| format!("reading {}", path.display()))
}

fn estimate(args: EstimateArgs, out: &mut dyn Write) -> Result<u8> {
    let data = read_matrix(&args.input, &args.skip_columns)?;
    let (partition, lambda) =
        build_structure(&args.structure, data.cols(), Some(data.column_names()))?;
    let denominator = match args.ecdf {
        Ecdf::N => EcdfDenominator::N,
        Ecdf::NPlusOne => EcdfDenominator::NPlusOne,
    };
    let ranked = rank_transform_with(&data, denominator)?;
    let report = estimate_r(&ranked, &partition, &lambda)?;
    match args.output.format {
        Format::Json => write_json(&report, out)?,
        Format::Csv => write_key_values(&estimate_rows(&report), out)?,
    }
    Ok(0)
}

fn estimate_rows(r: &EstimateReport) -> Vec<(String, f64)> {
    let mut rows = vec![("R".to_string(), r.r_hat), ("n".into(), r.n as f64)];
    rows.extend(
        r.m_bar_terms
            .iter()
            .map(|(&m, &v)| (format!("m_bar[{}]", mask_label(m)), v)),
    );
    rows
}

fn with_output<F>(path: Option<&Path>, out: &mut dyn Write, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

fn simulate(args: SimulateArgs, out: &mut dyn Write) -> Result<u8> {
    let model = build_model(&args.model)?;
    let matrix = sample(&SimulationSpec::new(model, args.n, args.seed))?;
    with_output(args.out.as_deref(), out, |w| Ok(matrix.write_csv(w)?))?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct ValidationRow {
    quantity: String,
    exact: f64,
    monte_carlo: f64,
    gap: f64,
    tolerance: f64,
    ok: bool,
}

#[derive(Debug, Serialize)]
struct ValidationReport {
    model: Value,
    partition: Partition,
    lambda: WeightVector,
    n: usize,
    seed: u64,
    passed: bool,
    rows: Vec<ValidationRow>,
}

fn validate(args: ValidateArgs, out: &mut dyn Write) -> Result<u8> {
    if args.tolerance.is_nan() || args.tolerance < 0.0 {
        bail!("--tolerance must be non-negative");
    }
    let model = build_model(&args.model)?;
    let (partition, lambda) = build_structure(&args.structure, model.dimension(), None)?;
    let exact = max_min_r(&model, &partition, &lambda)?;
    let data = sample(&SimulationSpec::new(model.clone(), args.n, args.seed))?;

    // Monte Carlo with the known unit Fréchet margins
    let p = partition.len();
    let full = partition.full_mask() as usize;
    let mut sums = vec![0.0; full + 1];
    let mut range_sum = 0.0;
    let mut stats = vec![0.0; p];
    for row in data.iter_rows() {
        for (j, block) in partition.blocks().iter().enumerate() {
            stats[j] = block
                .iter()
                .map(|&i| frechet_cdf(row[i]).powf(lambda[j]))
                .fold(0.0, f64::max);
        }
        range_sum +=
            stats.iter().copied().fold(0.0, f64::max) - stats.iter().copied().fold(1.0, f64::min);
        for (mask, s) in sums.iter_mut().enumerate().skip(1) {
            *s += (0..p)
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| stats[j])
                .fold(0.0, f64::max);
        }
    }
    let n = data.rows() as f64;
    let mut pairs = vec![("R".to_string(), exact.r, range_sum / n)];
    if data.rows() >= 2
        && (0..data.cols()).all(|j| data.column(j).iter().any(|&v| v != data.get(0, j)))
    {
        let ranked = estimate_r(&data, &partition, &lambda)?;
        pairs.push(("R_hat (ranks)".to_string(), exact.r, ranked.r_hat));
    }
    for (&mask, &e) in &exact.e_terms {
        pairs.push((
            format!("e[{}]", mask_label(mask)),
            e,
            sums[mask as usize] / n,
        ));
    }
    let rows: Vec<ValidationRow> = pairs
        .into_iter()
        .map(|(quantity, exact, mc)| {
            let gap = (exact - mc).abs();
            ValidationRow {
                quantity,
                exact,
                monte_carlo: mc,
                gap,
                tolerance: args.tolerance,
                ok: gap <= args.tolerance,
            }
        })
        .collect();
    let passed = rows.iter().all(|r| r.ok);
    let report = ValidationReport {
        model: serde_json::to_value(model.descriptor())?,
        partition,
        lambda,
        n: args.n,
        seed: args.seed,
        passed,
        rows,
    };
    match args.output.format {
        Format::Json => write_json(&report, out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["quantity", "exact", "monte_carlo", "gap", "tolerance", "ok"])?;
            for r in &report.rows {
                w.write_record([
                    r.quantity.clone(),
                    sig10(r.exact).to_string(),
                    sig10(r.monte_carlo).to_string(),
                    sig10(r.gap).to_string(),
                    sig10(r.tolerance).to_string(),
                    r.ok.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(if passed { 0 } else { EXIT_VALIDATION_FAILED })
}

enum BlockRule {
    Month,
    Year,
    Column(String),
}

fn parse_block_rule(text: &str) -> Result<BlockRule> {
    match text {
        "month" => Ok(BlockRule::Month),
        "year" => Ok(BlockRule::Year),
        _ => match text.strip_prefix("column:") {
            Some(name) if !name.is_empty() => Ok(BlockRule::Column(name.to_string())),
            _ => bail!("--block must be month, year or column:<name>, got {text:?}"),
        },
    }
}

/// `YYYY-MM...` dates: the year or year-month prefix.
fn date_label(date: &str, month: bool) -> Result<String> {
    let b = date.as_bytes();
    let digits =
        |r: std::ops::Range<usize>| b.len() >= r.end && b[r].iter().all(u8::is_ascii_digit);
    let ok = digits(0..4) && (!month || (b.len() >= 7 && b[4] == b'-' && digits(5..7)));
    if !ok {
        bail!("date {date:?} is not in YYYY-MM-DD form");
    }
    Ok(date[..if month { 7 } else { 4 }].to_string())
}

fn ingest(args: IngestArgs, out: &mut dyn Write) -> Result<u8> {
    let rule = parse_block_rule(&args.block)?;
    let file =
        File::open(&args.input).with_context(|| format!("cannot open {}", args.input.display()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = rdr.headers()?.clone();
    let label_column = match &rule {
        BlockRule::Column(name) => name.clone(),
        _ => args.date_column.clone(),
    };
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| {
            anyhow!(
                "column {label_column:?} not found in {}",
                args.input.display()
            )
        })?;
    let date_idx = headers.iter().position(|h| h == args.date_column);
    let price_idx: Vec<usize> = (0..headers.len())
        .filter(|&i| i != label_idx && Some(i) != date_idx)
        .collect();
    if price_idx.is_empty() {
        bail!("no price columns in {}", args.input.display());
    }

    let mut labels = Vec::new();
    let mut prices: Vec<Vec<f64>> = vec![Vec::new(); price_idx.len()];
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let raw = record.get(label_idx).unwrap_or("");
        labels.push(match &rule {
            BlockRule::Month => date_label(raw, true)?,
            BlockRule::Year => date_label(raw, false)?,
            BlockRule::Column(_) => raw.to_string(),
        });
        for (c, &i) in price_idx.iter().enumerate() {
            let field = record.get(i).unwrap_or("");
            let v: f64 = field.parse().map_err(|_| {
                anyhow!(
                    "price {field:?} in column {:?}, data row {} is not a number",
                    &headers[i],
                    line + 1
                )
            })?;
            prices[c].push(v);
        }
    }

    // return t spans rows t-1..t and belongs to the block of row t
    let return_labels = labels.get(1..).unwrap_or(&[]);
    let mut columns = Vec::with_capacity(prices.len());
    for (c, series) in prices.iter().enumerate() {
        let returns = neg_log_returns(series)
            .with_context(|| format!("column {:?}", &headers[price_idx[c]]))?;
        columns.push(block_maxima(&returns, return_labels)?);
    }

    with_output(args.out.as_deref(), out, |w| {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["block".to_string()];
        header.extend(price_idx.iter().map(|&i| headers[i].to_string()));
        wtr.write_record(&header)?;
        for (b, (label, _)) in columns[0].iter().enumerate() {
            let mut row = vec![label.clone()];
            row.extend(columns.iter().map(|col| sig10(col[b].1).to_string()));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    })?;
    Ok(0)
}

fn table1_cmd(args: FormatArgs, out: &mut dyn Write) -> Result<u8> {
    let estimates = table1::estimates()?;
    match args.format {
        Format::Json => write_json(&estimates, out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["groups", "R", "published"])?;
            for e in &estimates {
                w.write_record([
                    e.groups.join("+"),
                    sig10(e.r_hat).to_string(),
                    e.published.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}
