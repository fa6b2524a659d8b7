use std::io::Write;

use anyhow::anyhow;
use freqlaw::asymptote::{converges, AsymptoteSpec};
use freqlaw::estimation::{
    build_ranking, default_geometric_p, fill_gaps, fit_theta, geometric_tail_smooth,
    good_turing_smooth, reestimate_table, RankingCriteria, SmoothedDistribution, ThetaFit,
};
use freqlaw::histogram::build_histogram;
use freqlaw::simulation::{reestimation_rows, species_name, ReestimationReport};
use freqlaw::verification::{
    decade_limits, general_bound_check, is_bounded, product_approx_check, theta_convergence_probe,
    turing_bound_check,
};
use freqlaw::{PopulationModel, SpeciesCounts, ThetaParam};
use serde::Serialize;

use crate::input::load_counts;
use crate::{Check, CliError, Command, Emit, Format, GlobalArgs, Law, Method};

type Out = Result<Vec<u8>, CliError>;

fn schema_name(kind: &str) -> String {
    format!("freqlaw.{kind}.v1")
}

fn csv_table<I, R>(schema: &str, header: &[&str], rows: I) -> Out
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut buf = Vec::new();
    writeln!(buf, "# schema: {schema}")?;
    let mut w = csv::Writer::from_writer(&mut buf);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    drop(w);
    Ok(buf)
}

fn json<T: Serialize>(value: &T) -> Out {
    let mut buf = serde_json::to_vec_pretty(value)?;
    buf.push(b'\n');
    Ok(buf)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn theta_param(theta: f64) -> Result<ThetaParam, CliError> {
    if !(theta > 0.0) {
        return Err(CliError::Data(anyhow!(
            "--theta must be positive, got {theta}"
        )));
    }
    ThetaParam::new(theta).map_err(|e| CliError::Data(anyhow!("--theta {theta}: {e}")))
}

pub fn run(command: &Command, global: &GlobalArgs) -> Out {
    let format = global.format;
    match command {
        Command::Analyze { file } => analyze(&load_counts(file, global)?, format),
        Command::Reestimate {
            file,
            theta,
            smooth_gaps,
        } => reestimate(&load_counts(file, global)?, *theta, *smooth_gaps, format),
        Command::Smooth {
            file,
            method,
            p,
            head,
            backoff,
        } => {
            let counts = load_counts(file, global)?;
            let backoff = backoff
                .as_ref()
                .map(|b| load_counts(b, global))
                .transpose()?;
            smooth(&counts, *method, *p, *head, backoff, format)
        }
        Command::Fit { file, tail_start } => fit(&load_counts(file, global)?, *tail_start, format),
        Command::Verify {
            check,
            theta,
            x_min,
            x_max,
            epsilon,
            decades,
        } => verify(*check, *theta, *x_min, *x_max, *epsilon, *decades, format),
        Command::Simulate {
            theta,
            species,
            tokens,
            seed,
            n1,
            reestimate,
            emit,
        } => simulate(
            *theta,
            *species,
            *tokens,
            *seed,
            *n1,
            *reestimate,
            *emit,
            format,
        ),
        Command::ExportPlot {
            file,
            law,
            r_max,
            tail_start,
        } => {
            if format.is_some() {
                return Err(CliError::Usage(
                    "export-plot always writes TSV; drop --format".into(),
                ));
            }
            export_plot(&load_counts(file, global)?, *law, *r_max, *tail_start)
        }
    }
}

#[derive(Serialize)]
struct HistogramCell {
    x: u64,
    n_x: f64,
}

#[derive(Serialize)]
struct RankEntry {
    rank: u64,
    species: String,
    count: u64,
    frequency: f64,
}

#[derive(Serialize)]
struct Analysis {
    schema: String,
    /// `N`, the sample size in tokens.
    tokens: u64,
    species: usize,
    /// `X`, the largest count.
    max_count: u64,
    /// `N_1`.
    singletons: f64,
    /// `f_X = X / N`; null on an empty corpus.
    max_frequency: Option<f64>,
    histogram: Vec<HistogramCell>,
    ranks: Vec<RankEntry>,
}

fn analyze(counts: &SpeciesCounts, format: Option<Format>) -> Out {
    let hist = build_histogram(counts);
    let n = counts.total();
    let max_count = hist.max_frequency().unwrap_or(0);
    let ranks = build_ranking(counts, &RankingCriteria::default())
        .into_iter()
        .enumerate()
        .map(|(i, species)| {
            let count = counts.get(&species).unwrap_or(0);
            RankEntry {
                rank: i as u64 + 1,
                species,
                count,
                frequency: count as f64 / n as f64,
            }
        })
        .collect();
    let a = Analysis {
        schema: schema_name("analysis"),
        tokens: n,
        species: counts.len(),
        max_count,
        singletons: hist.get(1),
        max_frequency: (n > 0).then(|| max_count as f64 / n as f64),
        histogram: hist
            .cells()
            .map(|(x, n_x)| HistogramCell { x, n_x })
            .collect(),
        ranks,
    };
    if format == Some(Format::Json) {
        return json(&a);
    }
    // long form: section,key,label,value
    let mut rows: Vec<[String; 4]> = vec![
        [
            "summary".into(),
            "N".into(),
            String::new(),
            a.tokens.to_string(),
        ],
        [
            "summary".into(),
            "species".into(),
            String::new(),
            a.species.to_string(),
        ],
        [
            "summary".into(),
            "X".into(),
            String::new(),
            a.max_count.to_string(),
        ],
        [
            "summary".into(),
            "N_1".into(),
            String::new(),
            a.singletons.to_string(),
        ],
        [
            "summary".into(),
            "f_X".into(),
            String::new(),
            opt(a.max_frequency),
        ],
    ];
    rows.extend(a.histogram.iter().map(|c| {
        [
            "histogram".into(),
            c.x.to_string(),
            String::new(),
            c.n_x.to_string(),
        ]
    }));
    rows.extend(a.ranks.iter().map(|r| {
        [
            "rank".into(),
            r.rank.to_string(),
            r.species.clone(),
            r.frequency.to_string(),
        ]
    }));
    csv_table(&a.schema, &["section", "key", "label", "value"], rows)
}

#[derive(Serialize)]
struct ReestimateRow {
    x: u64,
    n_x: f64,
    x_star: Option<f64>,
}

#[derive(Serialize)]
struct ReestimateOutput {
    schema: String,
    theta: f64,
    smooth_gaps: bool,
    rows: Vec<ReestimateRow>,
}

fn reestimate(
    counts: &SpeciesCounts,
    theta: f64,
    smooth_gaps: bool,
    format: Option<Format>,
) -> Out {
    let theta = theta_param(theta)?;
    let hist = build_histogram(counts);
    let rows = if smooth_gaps {
        let filled = fill_gaps(&hist);
        reestimate_table(&hist, theta)
            .into_iter()
            .map(|(x, x_star)| ReestimateRow {
                x,
                n_x: filled.get(&x).copied().unwrap_or(0.0),
                x_star: Some(x_star),
            })
            .collect()
    } else {
        reestimation_rows(&hist, theta, hist.max_frequency().unwrap_or(0))
            .into_iter()
            .map(|r| ReestimateRow {
                x: r.x,
                n_x: r.n_x,
                x_star: r.x_star,
            })
            .collect()
    };
    let out = ReestimateOutput {
        schema: schema_name("reestimate"),
        theta: theta.value(),
        smooth_gaps,
        rows,
    };
    if format == Some(Format::Json) {
        return json(&out);
    }
    csv_table(
        &format!(
            "{} theta={} smooth_gaps={}",
            out.schema, out.theta, smooth_gaps
        ),
        &["x", "n_x", "x_star"],
        out.rows
            .iter()
            .map(|r| [r.x.to_string(), r.n_x.to_string(), opt(r.x_star)]),
    )
}

#[derive(Serialize)]
struct SmoothOutput {
    schema: String,
    /// Geometric parameter, for the geometric-tail method.
    p: Option<f64>,
    head: Option<usize>,
    #[serde(flatten)]
    distribution: SmoothedDistribution,
}

fn smooth(
    counts: &SpeciesCounts,
    method: Method,
    p: Option<f64>,
    head: usize,
    backoff: Option<SpeciesCounts>,
    format: Option<Format>,
) -> Out {
    let out = match method {
        Method::GoodTuring => {
            if p.is_some() || head != 0 || backoff.is_some() {
                return Err(CliError::Usage(
                    "--p, --head and --backoff apply to --method geometric-tail only".into(),
                ));
            }
            SmoothOutput {
                schema: schema_name("smoothed"),
                p: None,
                head: None,
                distribution: good_turing_smooth(counts)?,
            }
        }
        Method::GeometricTail => {
            let criteria =
                backoff.map_or_else(RankingCriteria::default, RankingCriteria::with_backoff);
            let ranking = build_ranking(counts, &criteria);
            let p = match p {
                Some(p) => p,
                None => default_geometric_p(counts)?,
            };
            SmoothOutput {
                schema: schema_name("smoothed"),
                p: Some(p),
                head: Some(head),
                distribution: geometric_tail_smooth(counts, &ranking, p, head)?,
            }
        }
    };
    if format == Some(Format::Json) {
        return json(&out);
    }
    let d = &out.distribution;
    let unseen = std::iter::once([
        "unseen".to_owned(),
        String::new(),
        String::new(),
        d.unseen_mass.to_string(),
    ]);
    let seen = d.species.iter().map(|s| {
        [
            "seen".to_owned(),
            s.species.clone(),
            s.count.to_string(),
            s.probability.to_string(),
        ]
    });
    let method_name = match method {
        Method::GoodTuring => "good-turing",
        Method::GeometricTail => "geometric-tail",
    };
    let mut schema = format!("{} method={method_name}", out.schema);
    if let (Some(p), Some(h)) = (out.p, out.head) {
        schema.push_str(&format!(" p={p} head={h}"));
    }
    csv_table(
        &schema,
        &["kind", "species", "count", "probability"],
        unseen.chain(seen),
    )
}

#[derive(Serialize)]
struct FitOutput {
    schema: String,
    #[serde(flatten)]
    fit: ThetaFit,
}

fn fit(counts: &SpeciesCounts, tail_start: Option<u64>, format: Option<Format>) -> Out {
    let series = freqlaw::estimation::rank_series_from_counts(counts)?;
    let out = FitOutput {
        schema: schema_name("theta_fit"),
        fit: fit_theta(&series, tail_start)?,
    };
    if format == Some(Format::Csv) {
        let value = serde_json::to_value(&out)?;
        let rows: Vec<[String; 2]> = value
            .as_object()
            .expect("struct serialises to an object")
            .iter()
            .filter(|(k, _)| *k != "schema")
            .map(|(k, v)| {
                let v = match v {
                    serde_json::Value::Null => String::new(),
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                [k.clone(), v]
            })
            .collect();
        return csv_table(&out.schema, &["field", "value"], rows);
    }
    json(&out)
}

#[derive(Serialize)]
struct ProductRow {
    x: u64,
    ratio: f64,
}

#[derive(Serialize)]
struct ProductOutput {
    schema: String,
    theta: f64,
    rows: Vec<ProductRow>,
}

#[derive(Serialize)]
struct ProbeRow {
    upper: f64,
    value: f64,
}

#[derive(Serialize)]
struct IntegralOutput {
    schema: String,
    theta: f64,
    bounded: bool,
    converges: bool,
    rows: Vec<ProbeRow>,
}

fn verify(
    check: Check,
    theta: Option<f64>,
    x_min: Option<u64>,
    x_max: Option<u64>,
    epsilon: Option<f64>,
    decades: u32,
    format: Option<Format>,
) -> Out {
    let need_theta = || theta.ok_or_else(|| CliError::Usage("this check needs --theta".into()));
    let x_max = x_max.unwrap_or(10_000);
    let report = match check {
        Check::TuringBound => {
            if theta.is_some_and(|t| t != 1.0) {
                return Err(CliError::Usage("turing-bound is the θ = 1 check".into()));
            }
            turing_bound_check(x_min.unwrap_or(2), x_max, epsilon)?
        }
        Check::GeneralBound => {
            general_bound_check(need_theta()?, x_min.unwrap_or(10), x_max, epsilon)?
        }
        Check::Product => {
            let theta = need_theta()?;
            let x_min = x_min.unwrap_or(1);
            if x_min == 0 || x_min > x_max {
                return Err(CliError::Data(anyhow!("need 1 <= x-min <= x-max")));
            }
            let xs: Vec<u64> = (x_min..=x_max).collect();
            let out = ProductOutput {
                schema: schema_name("product_check"),
                theta,
                rows: product_approx_check(theta, &xs)?
                    .into_iter()
                    .map(|(x, ratio)| ProductRow { x, ratio })
                    .collect(),
            };
            if format == Some(Format::Json) {
                return json(&out);
            }
            return csv_table(
                &format!("{} theta={theta}", out.schema),
                &["x", "ratio"],
                out.rows
                    .iter()
                    .map(|r| [r.x.to_string(), r.ratio.to_string()]),
            );
        }
        Check::Integral => {
            let theta = need_theta()?;
            if decades < 3 {
                return Err(CliError::Data(anyhow!("--decades must be at least 3")));
            }
            let values = theta_convergence_probe(theta, &decade_limits(decades))?;
            let out = IntegralOutput {
                schema: schema_name("integral_probe"),
                theta,
                bounded: is_bounded(&values),
                converges: converges(theta),
                rows: values
                    .into_iter()
                    .map(|(upper, value)| ProbeRow { upper, value })
                    .collect(),
            };
            if format == Some(Format::Json) {
                return json(&out);
            }
            return csv_table(
                &format!(
                    "{} theta={theta} bounded={} converges={}",
                    out.schema, out.bounded, out.converges
                ),
                &["upper", "value"],
                out.rows
                    .iter()
                    .map(|r| [r.upper.to_string(), r.value.to_string()]),
            );
        }
    };
    let mut buf = Vec::new();
    if format == Some(Format::Json) {
        report.write_json(&mut buf)?;
    } else {
        report.write_csv(&mut buf)?;
    }
    Ok(buf)
}

#[derive(Serialize)]
struct SimulationOutput {
    schema: String,
    law: AsymptoteSpec,
    species: usize,
    tokens: u64,
    seed: u64,
    histogram: Vec<HistogramCell>,
    reestimation: Option<ReestimationReport>,
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    theta: f64,
    species: usize,
    tokens: u64,
    seed: u64,
    n1: f64,
    with_report: bool,
    emit: Emit,
    format: Option<Format>,
) -> Out {
    if with_report && emit != Emit::Histogram {
        return Err(CliError::Usage(
            "--reestimate needs --emit histogram".into(),
        ));
    }
    if emit == Emit::Corpus && format.is_some() {
        return Err(CliError::Usage(
            "--emit corpus writes plain tokens; drop --format".into(),
        ));
    }
    let theta_p = theta_param(theta)?;
    let law = AsymptoteSpec::for_theta(theta, n1)?;
    let model = PopulationModel::new(law, species, seed)?;

    match emit {
        Emit::Corpus => {
            let mut buf = Vec::new();
            for i in model.draws(tokens)? {
                writeln!(buf, "{}", species_name(i + 1))?;
            }
            Ok(buf)
        }
        Emit::Counts => {
            let counts = model.sample_tokens(tokens)?;
            if format == Some(Format::Json) {
                #[derive(Serialize)]
                struct CountsOutput<'a> {
                    schema: String,
                    counts: Vec<(&'a str, u64)>,
                }
                return json(&CountsOutput {
                    schema: schema_name("counts"),
                    counts: counts.iter().collect(),
                });
            }
            csv_table(
                &schema_name("counts"),
                &["species", "count"],
                counts.iter().map(|(s, c)| [s.to_owned(), c.to_string()]),
            )
        }
        Emit::Histogram => {
            let hist = build_histogram(&model.sample_tokens(tokens)?);
            let report = if with_report {
                Some(model.empirical_reestimation_report(tokens, theta_p)?)
            } else {
                None
            };
            let out = SimulationOutput {
                schema: schema_name("simulation"),
                law,
                species,
                tokens,
                seed,
                histogram: hist
                    .cells()
                    .map(|(x, n_x)| HistogramCell { x, n_x })
                    .collect(),
                reestimation: report,
            };
            if format == Some(Format::Json) {
                return json(&out);
            }
            let mut schema = format!(
                "{} theta={theta} species={species} tokens={tokens} seed={seed}",
                out.schema
            );
            let Some(report) = &out.reestimation else {
                return csv_table(
                    &schema,
                    &["x", "n_x"],
                    out.histogram
                        .iter()
                        .map(|c| [c.x.to_string(), c.n_x.to_string()]),
                );
            };
            schema.push_str(&format!(" cutoff={}", report.cutoff));
            csv_table(
                &schema,
                &["x", "n_x", "x_star", "relative_error"],
                out.histogram.iter().map(|c| {
                    let row = report.rows.iter().find(|r| r.x == c.x);
                    [
                        c.x.to_string(),
                        c.n_x.to_string(),
                        opt(row.and_then(|r| r.x_star)),
                        opt(row.and_then(|r| r.relative_error)),
                    ]
                }),
            )
        }
    }
}

fn export_plot(counts: &SpeciesCounts, law: Law, r_max: u64, tail_start: Option<u64>) -> Out {
    if r_max == 0 {
        return Err(CliError::Data(anyhow!("--r-max must be at least 1")));
    }
    let series = freqlaw::estimation::rank_series_from_counts(counts)?;
    let (model, label) = match law {
        Law::Fitted => (fit_theta(&series, tail_start)?.asymptote()?, "fitted"),
        Law::Turing => {
            let n1 = build_histogram(counts).get(1);
            (AsymptoteSpec::turing(n1)?, "turing")
        }
        // a/(b + r) with b = 0 pinned to the top frequency
        Law::Zipf => (
            AsymptoteSpec::zipf(series.frequency(1).unwrap_or(0.0), 0.0)?,
            "zipf",
        ),
    };
    let mut buf = Vec::new();
    writeln!(buf, "# schema: {} law={label}", schema_name("plot"))?;
    writeln!(buf, "r\tf_empirical\tf_model")?;
    for r in 1..=r_max {
        let f_model = model.frequency_at(r as f64)?;
        writeln!(buf, "{r}\t{}\t{f_model}", opt(series.frequency(r)))?;
    }
    Ok(buf)
}
