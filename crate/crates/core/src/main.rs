use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prefeval::data_io::{generate_synthetic, load_dataset, write_dataset, ClickModel, DatasetPaths, SynthSpec};
use prefeval::implicit::{descriptive_stats, implicit_pir, Direction, Endpoint, ImplicitOptions, Measure};
use prefeval::metrics::{mean_over_queries, IdealPool, JudgedList};
use prefeval::model::{QueryType, ValidationMode, ValidationOptions, Variant};
use prefeval::pir::{
    self, mean_relevance, pir_sweep, source_relevance, threshold_evolution, ApNorm,
    Metric, MetricConfig, RatingSource, CATEGORY_NAMES,
};
use prefeval::report::{self, fmt4};
use prefeval::scales::{ClickWeights, DiscountFunction, RelevanceScale};
use prefeval::{EvaluationDataset, Error};

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EMPTY_DENOMINATOR: u8 = 3;

/// Like `out!`, but a closed pipe (`prefeval ... | head`) ends the process
/// quietly instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if write!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! outln {
    () => { out!("\n") };
    ($($arg:tt)*) => {{
        out!($($arg)*);
        out!("\n");
    }};
}

/// Score search-result metrics against user preference judgments.
#[derive(Parser)]
#[command(name = "prefeval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a dataset for structural and coverage problems.
    Validate {
        #[command(flatten)]
        data: DataArgs,
        /// Rank up to which lists must be long enough and fully judged.
        #[arg(long, default_value_t = 10)]
        max_cutoff: usize,
    },
    /// Per-query metric scores for both variants.
    Eval {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, default_value_t = 10)]
        cutoff: usize,
        /// Use this rater's grades; by default grades are averaged over raters.
        #[arg(long)]
        rater: Option<String>,
    },
    /// PIR over a family of metric configurations, cut-offs and thresholds.
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        family: FamilyArgs,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long, default_value = "0:0.3:0.01")]
        thresholds: String,
        /// `first-last` or a comma-separated list.
        #[arg(long, default_value = "1-10")]
        cutoffs: String,
        /// Output directory for the grid and series tables.
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
        /// Also write SVG charts of both series.
        #[arg(long)]
        svg: bool,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Five-way split of verdict outcomes and its development over thresholds.
    Breakdown {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, default_value = "same-user", value_parser = parse_source)]
        rating_source: RatingSource,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        #[arg(long, default_value_t = 10)]
        cutoff: usize,
        /// Threshold grid for the evolution table.
        #[arg(long, default_value = "0:0.3:0.01")]
        thresholds: String,
        /// Write the evolution table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PIR of a session-log measure.
    Implicit {
        #[command(flatten)]
        data: DataArgs,
        /// duration, clicks, mean-click-rank or first-click-rank.
        #[arg(long, default_value = "duration", value_parser = parse_measure)]
        measure: Measure,
        /// explicit-end or last-click (duration only).
        #[arg(long, default_value = "explicit-end", value_parser = parse_endpoint)]
        endpoint: Endpoint,
        /// lower-better or higher-better.
        #[arg(long, default_value = "lower-better", value_parser = parse_direction)]
        direction: Direction,
        /// Defaults to the measure's own grid.
        #[arg(long)]
        thresholds: Option<String>,
        /// Only sessions lasting MIN:MAX seconds.
        #[arg(long, value_parser = parse_band)]
        band: Option<(f64, f64)>,
    },
    /// Descriptive statistics of sessions, judgments and queries.
    Stats {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Write a seeded synthetic dataset.
    Synth {
        #[arg(long, default_value_t = 50)]
        queries: usize,
        #[arg(long, default_value_t = 5)]
        raters: usize,
        /// Total preference verdicts; defaults to three per query.
        #[arg(long)]
        preferences: Option<usize>,
        #[arg(long, default_value_t = 3)]
        judges: usize,
        #[arg(long, default_value_t = 10)]
        list_length: usize,
        #[arg(long, default_value_t = 15)]
        pool_size: usize,
        #[arg(long, default_value_t = 0.2)]
        judge_noise: f64,
        #[arg(long, default_value_t = 2.0)]
        ranking_noise: f64,
        /// Skip session logs.
        #[arg(long)]
        no_sessions: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    /// Directory holding queries.jsonl, judgments.{jsonl,tsv}, lists.jsonl,
    /// preferences.jsonl and optionally sessions and clicks.
    #[arg(long, default_value = ".")]
    data: PathBuf,
    #[arg(long)]
    queries: Option<PathBuf>,
    #[arg(long)]
    judgments: Option<PathBuf>,
    #[arg(long)]
    lists: Option<PathBuf>,
    #[arg(long)]
    preferences: Option<PathBuf>,
    #[arg(long)]
    sessions: Option<PathBuf>,
    #[arg(long)]
    clicks: Option<PathBuf>,
    /// Report missing judgments as warnings and score them as non-relevant.
    #[arg(long, conflicts_with = "strict")]
    lenient: bool,
    /// Treat missing judgments as errors (the default).
    #[arg(long)]
    strict: bool,
}

impl DataArgs {
    fn paths(&self) -> DatasetPaths {
        let mut p = DatasetPaths::in_dir(&self.data);
        let set = |slot: &mut PathBuf, v: &Option<PathBuf>| {
            if let Some(v) = v {
                *slot = v.clone();
            }
        };
        set(&mut p.queries, &self.queries);
        set(&mut p.judgments, &self.judgments);
        set(&mut p.lists, &self.lists);
        set(&mut p.preferences, &self.preferences);
        if self.sessions.is_some() {
            p.sessions = self.sessions.clone();
        }
        if self.clicks.is_some() {
            p.clicks = self.clicks.clone();
        }
        p
    }

    fn mode(&self) -> ValidationMode {
        if self.lenient {
            ValidationMode::Lenient
        } else {
            ValidationMode::Strict
        }
    }

    fn load(&self, max_cutoff: usize) -> Result<EvaluationDataset, Error> {
        let (ds, report) = load_dataset(&self.paths(), ValidationOptions::new(self.mode(), max_cutoff))?;
        for w in report.warnings() {
            eprintln!("warning: {w}");
        }
        Ok(ds)
    }
}

#[derive(Args)]
struct MetricArgs {
    /// precision, ndcg, map, err, mrr or esl.
    #[arg(long, default_value = "ndcg", value_parser = parse_metric)]
    metric: Metric,
    /// none, log5, log2, root, rank, square or click.
    #[arg(long, default_value = "log2")]
    discount: String,
    /// Two-column rank/weight table for the click discount.
    #[arg(long)]
    click_weights: Option<PathBuf>,
    /// six-point, r2_1, r2_3, r2_5, r3_1 or r3_2.
    #[arg(long, default_value = "six-point", value_parser = parse_scale)]
    scale: RelevanceScale,
    /// ESL relevance target.
    #[arg(long)]
    n: Option<f64>,
    /// AP normalisation: evaluated-count or known-relevant.
    #[arg(long, default_value = "evaluated-count", value_parser = parse_norm)]
    norm: ApNorm,
    /// MRR relevance threshold.
    #[arg(long, default_value_t = 0.0)]
    relevant_above: f64,
    /// Comma-separated query types to keep.
    #[arg(long)]
    query_type: Option<String>,
}

impl MetricArgs {
    fn config(&self, cutoff: usize, source: RatingSource) -> Result<MetricConfig, Error> {
        let discount = discount(&self.discount, self.click_weights.as_deref())?;
        let mut c = MetricConfig::new(self.metric, discount)
            .with_cutoff(cutoff)
            .with_scale(self.scale)
            .with_ap_norm(self.norm)
            .with_rating_source(source)
            .with_relevant_above(self.relevant_above);
        if let Some(n) = self.n {
            c = c.with_esl_n(n);
        }
        if let Some(types) = &self.query_type {
            c = c.with_query_filter(parse_list::<QueryType>(types)?);
        }
        c.check()?;
        Ok(c)
    }
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, default_value = "precision,ndcg,map,err,mrr,esl")]
    metrics: String,
    #[arg(long, default_value = "none,log5,log2,root,rank,square")]
    discounts: String,
    #[arg(long, default_value = "six-point")]
    scales: String,
    #[arg(long, default_value = "same-user")]
    rating_sources: String,
    /// Two-column rank/weight table for the click discount.
    #[arg(long)]
    click_weights: Option<PathBuf>,
    /// ESL relevance target.
    #[arg(long, default_value_t = 1.0)]
    n: f64,
    #[arg(long, default_value = "evaluated-count", value_parser = parse_norm)]
    norm: ApNorm,
    /// Comma-separated query types to keep.
    #[arg(long)]
    query_type: Option<String>,
}

impl FamilyArgs {
    fn configs(&self) -> Result<Vec<MetricConfig>, Error> {
        let metrics: Vec<Metric> = parse_list(&self.metrics)?;
        let discounts = self
            .discounts
            .split(',')
            .map(|d| discount(d.trim(), self.click_weights.as_deref()))
            .collect::<Result<Vec<_>, _>>()?;
        let scales: Vec<RelevanceScale> = parse_list(&self.scales)?;
        let sources: Vec<RatingSource> = parse_list(&self.rating_sources)?;
        let filter = self.query_type.as_deref().map(parse_list::<QueryType>).transpose()?;
        let mut out = Vec::new();
        for &m in &metrics {
            for d in &discounts {
                for &s in &scales {
                    for &r in &sources {
                        let mut c = MetricConfig::new(m, d.clone())
                            .with_scale(s)
                            .with_rating_source(r)
                            .with_ap_norm(self.norm);
                        if m == Metric::Esl {
                            c = c.with_esl_n(self.n);
                        }
                        if let Some(f) = &filter {
                            c = c.with_query_filter(f.iter().copied());
                        }
                        c.check()?;
                        out.push(c);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn parse_list<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<Vec<T>, Error> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse()).collect()
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}
fn parse_scale(s: &str) -> Result<RelevanceScale, String> {
    s.parse().map_err(|e: Error| e.to_string())
}
fn parse_norm(s: &str) -> Result<ApNorm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}
fn parse_source(s: &str) -> Result<RatingSource, String> {
    s.parse().map_err(|e: Error| e.to_string())
}
fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse().map_err(|e: Error| e.to_string())
}
fn parse_endpoint(s: &str) -> Result<Endpoint, String> {
    s.parse().map_err(|e: Error| e.to_string())
}
fn parse_direction(s: &str) -> Result<Direction, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_band(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected MIN:MAX")?;
    let lo: f64 = lo.parse().map_err(|_| format!("bad band minimum {lo:?}"))?;
    let hi: f64 = hi.parse().map_err(|_| format!("bad band maximum {hi:?}"))?;
    if hi < lo {
        return Err("band maximum below minimum".into());
    }
    Ok((lo, hi))
}

fn discount(name: &str, click_weights: Option<&Path>) -> Result<DiscountFunction, Error> {
    match (name.to_ascii_lowercase().as_str(), click_weights) {
        ("click" | "click-based" | "click_based", Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.to_owned(),
                source: e,
            })?;
            Ok(DiscountFunction::ClickBased(ClickWeights::parse(&text)?))
        }
        _ => name.parse(),
    }
}

fn parse_thresholds(s: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, step] => {
            let num = |x: &str| x.trim().parse::<f64>().map_err(|_| usage(format!("bad threshold {x:?}")));
            pir::threshold_range(num(start)?, num(stop)?, num(step)?)?
        }
        [_] => s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("bad threshold {x:?}"))))
            .collect::<Result<_, _>>()?,
        _ => return Err(usage(format!("thresholds must be start:stop:step or a list, got {s:?}"))),
    };
    pir::check_thresholds(&grid)?;
    Ok(grid)
}

fn parse_cutoffs(s: &str) -> Result<Vec<usize>, Error> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| usage(format!("bad cut-off {x:?}")));
    let cutoffs: Vec<usize> = match s.split_once('-') {
        Some((a, b)) => (num(a)?..=num(b)?).collect(),
        None => s.split(',').map(num).collect::<Result<_, _>>()?,
    };
    if cutoffs.is_empty() || cutoffs.iter().any(|&c| !(1..=pir::MAX_CUTOFF).contains(&c)) {
        return Err(usage(format!("cut-offs must lie in 1..={}", pir::MAX_CUTOFF)));
    }
    Ok(cutoffs)
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_owned(),
        source: e,
    })
}

fn cmd_validate(data: &DataArgs, max_cutoff: usize) -> Result<u8, Error> {
    let ds = prefeval::data_io::read_dataset(&data.paths())?;
    let report = match ds.validate(ValidationOptions::new(data.mode(), max_cutoff)) {
        Ok(r) => r,
        Err(Error::Validation(r)) => r,
        Err(e) => return Err(e),
    };
    for v in report.errors() {
        outln!("error: {v}");
    }
    for v in report.warnings() {
        outln!("warning: {v}");
    }
    outln!(
        "{} queries, {} judgments, {} list pairs, {} preferences, {} sessions",
        ds.queries().len(),
        ds.judgments().len(),
        ds.list_pairs().len(),
        ds.preferences().len(),
        ds.sessions().len()
    );
    if report.passes() {
        outln!("valid ({} warning(s))", report.warnings().count());
        Ok(0)
    } else {
        outln!("invalid ({} error(s))", report.errors().count());
        Ok(EXIT_INVALID)
    }
}

fn cmd_eval(data: &DataArgs, metric: &MetricArgs, cutoff: usize, rater: Option<&str>) -> Result<u8, Error> {
    let ds = data.load(cutoff)?;
    let config = metric.config(cutoff, RatingSource::SameUser)?;
    let relevance = |q: &str, r: &str| match rater {
        Some(u) => source_relevance(&ds, q, r, u, RatingSource::SameUser, config.scale),
        None => mean_relevance(&ds, q, r, config.scale),
    };
    outln!("query\tA\tB");
    let (mut all_a, mut all_b) = (Vec::new(), Vec::new());
    for pair in ds.list_pairs() {
        let query = ds.query(&pair.query_id).ok_or_else(|| Error::UnknownQuery(pair.query_id.clone()))?;
        if !config.includes(query.query_type) {
            continue;
        }
        let judged = |id: &String| match relevance(&pair.query_id, id) {
            Some(v) => Ok(v),
            None if ds.mode() == ValidationMode::Lenient => Ok(0.0),
            None => Err(Error::MissingJudgment(format!("{}/{id}", pair.query_id))),
        };
        let pool = IdealPool::new(
            pair.pooled_results()
                .into_iter()
                .map(|id| relevance(&pair.query_id, id).unwrap_or(0.0))
                .collect(),
        )?;
        let mut cells = Vec::new();
        for v in [Variant::A, Variant::B] {
            let ids = pair.list(v);
            if ids.len() < cutoff {
                return Err(Error::CutoffTooLarge { cutoff, len: ids.len() });
            }
            let list = JudgedList::new(ids[..cutoff].iter().map(judged).collect::<Result<_, _>>()?)?;
            cells.push(match config.score(&list, &pool) {
                Ok(s) => {
                    if v == Variant::A { &mut all_a } else { &mut all_b }.push(s);
                    fmt4(s)
                }
                Err(e) if e.is_exclusion() => "excluded".into(),
                Err(e) => return Err(e),
            });
        }
        outln!("{}\t{}\t{}", pair.query_id, cells[0], cells[1]);
    }
    let mean = |v: &[f64]| mean_over_queries(v).map(fmt4).unwrap_or_else(|_| "NA".into());
    outln!("mean\t{}\t{}", mean(&all_a), mean(&all_b));
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    data: &DataArgs,
    family: &FamilyArgs,
    thresholds: &str,
    cutoffs: &str,
    out: &Path,
    svg: bool,
    jobs: usize,
) -> Result<u8, Error> {
    let thresholds = parse_thresholds(thresholds)?;
    let cutoffs = parse_cutoffs(cutoffs)?;
    let configs = family.configs()?;
    let ds = data.load(*cutoffs.iter().max().expect("non-empty"))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| usage(format!("cannot start {jobs} worker threads: {e}")))?;
    let grid = pool.install(|| pir_sweep(&ds, &configs, &thresholds, &cutoffs))?;

    fs::create_dir_all(out).map_err(|e| Error::Io {
        path: out.to_owned(),
        source: e,
    })?;
    write_file(&out.join("grid.tsv"), &report::grid_tsv(&grid))?;
    let best = report::best_series_tsv(&grid);
    write_file(&out.join("best.tsv"), &best)?;
    write_file(&out.join("best_thresholds.tsv"), &report::best_threshold_tsv(&grid))?;
    write_file(&out.join("zero.tsv"), &report::zero_series_tsv(&grid))?;
    if svg {
        write_file(&out.join("best.svg"), &report::grid_chart_svg(&grid, "Best-threshold PIR", false))?;
        write_file(&out.join("zero.svg"), &report::grid_chart_svg(&grid, "Zero-threshold PIR", true))?;
    }
    out!("{best}");
    outln!(
        "{} cells ({} configs x {} cut-offs x {} thresholds) written to {}",
        grid.len(),
        configs.len(),
        cutoffs.len(),
        thresholds.len(),
        out.display()
    );
    if grid.has_empty_denominator() {
        eprintln!("warning: some cells had no preference verdicts; their PIR is 0.5");
    }
    Ok(0)
}

fn cmd_breakdown(
    data: &DataArgs,
    metric: &MetricArgs,
    source: RatingSource,
    threshold: f64,
    cutoff: usize,
    thresholds: &str,
    out: Option<&Path>,
) -> Result<u8, Error> {
    let grid = parse_thresholds(thresholds)?;
    let ds = data.load(cutoff)?;
    let config = metric.config(cutoff, source)?;
    let b = pir::detailed_breakdown(&ds, &config, threshold, cutoff)?;
    outln!("{} at cut-off {cutoff}, threshold {threshold}", config.label());
    let counts = [
        b.counts.correct_pref,
        b.counts.correct_equal,
        b.counts.false_pref,
        b.counts.missed_pref,
        b.counts.reversed_pref,
    ];
    outln!("category\tcount\tshare");
    for ((name, n), share) in CATEGORY_NAMES.iter().zip(counts).zip(b.shares()) {
        outln!("{name}\t{n}\t{}", fmt4(share));
    }
    outln!("pir\t\t{}", fmt4(b.pir()));
    outln!("excluded\t{}", b.excluded);

    let evolution = report::breakdown_tsv(&threshold_evolution(&ds, &config, &grid, cutoff)?);
    match out {
        Some(path) => write_file(path, &evolution)?,
        None => {
            outln!();
            out!("{evolution}");
        }
    }
    Ok(if b.counts.preferring() == 0 { EXIT_EMPTY_DENOMINATOR } else { 0 })
}

fn cmd_implicit(
    data: &DataArgs,
    measure: Measure,
    endpoint: Endpoint,
    direction: Direction,
    thresholds: Option<&str>,
    band: Option<(f64, f64)>,
) -> Result<u8, Error> {
    let measure = match measure {
        Measure::Duration(_) => Measure::Duration(endpoint),
        m => m,
    };
    let grid = match thresholds {
        Some(t) => parse_thresholds(t)?,
        None => measure.default_thresholds(),
    };
    let ds = data.load(0)?;
    let opts = ImplicitOptions {
        measure,
        direction,
        band,
    };
    let cells = implicit_pir(&ds, &opts, &grid)?;
    out!("{}", report::threshold_series_tsv(&cells));
    Ok(if cells.iter().any(|c| c.empty_denominator()) { EXIT_EMPTY_DENOMINATOR } else { 0 })
}

fn cmd_stats(data: &DataArgs) -> Result<u8, Error> {
    let ds = data.load(0)?;
    let st = descriptive_stats(&ds);
    let opt = |x: Option<f64>| x.map(fmt4).unwrap_or_else(|| "NA".into());
    for v in [Variant::A, Variant::B] {
        let s = st.variant(v);
        outln!("== variant {v}");
        outln!("sessions\t{}", s.sessions);
        outln!("zero_click_share\t{}", opt(s.zero_click_share));
        outln!("mean_satisfaction\t{}\t({} answers)", opt(s.mean_satisfaction), s.satisfaction_answers);
        outln!("clicks_per_session\tsessions");
        for (k, n) in &s.clicks_per_session {
            outln!("{k}\t{n}");
        }
        outln!("rank\tclicks\tmean_relevance\tgrades_1_to_6");
        let ranks: std::collections::BTreeSet<usize> = s
            .rank_clicks
            .keys()
            .map(|&r| r as usize)
            .chain(s.rank_relevance.keys().copied())
            .collect();
        for r in ranks {
            let clicks = s.rank_clicks.get(&(r as u32)).copied().unwrap_or(0);
            let rel = opt(s.rank_relevance.get(&r).copied());
            let grades = s
                .rank_grades
                .get(&r)
                .map(|g| g.map(|n| n.to_string()).join(","))
                .unwrap_or_default();
            outln!("{r}\t{clicks}\t{rel}\t{grades}");
        }
    }
    outln!("== query types");
    outln!("type\tqueries\tmean_words");
    for t in &st.query_types {
        outln!("{}\t{}\t{}", t.query_type, t.count, fmt4(t.mean_words));
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Validate { data, max_cutoff } => cmd_validate(&data, max_cutoff),
        Command::Eval { data, metric, cutoff, rater } => cmd_eval(&data, &metric, cutoff, rater.as_deref()),
        Command::Sweep { data, family, thresholds, cutoffs, out, svg, jobs } => {
            cmd_sweep(&data, &family, &thresholds, &cutoffs, &out, svg, jobs)
        }
        Command::Breakdown { data, metric, rating_source, threshold, cutoff, thresholds, out } => {
            cmd_breakdown(&data, &metric, rating_source, threshold, cutoff, &thresholds, out.as_deref())
        }
        Command::Implicit { data, measure, endpoint, direction, thresholds, band } => {
            cmd_implicit(&data, measure, endpoint, direction, thresholds.as_deref(), band)
        }
        Command::Stats { data } => cmd_stats(&data),
        Command::Synth {
            queries,
            raters,
            preferences,
            judges,
            list_length,
            pool_size,
            judge_noise,
            ranking_noise,
            no_sessions,
            seed,
            out,
        } => {
            let spec = SynthSpec {
                queries,
                raters,
                preferences: preferences.unwrap_or(3 * queries),
                judges_per_query: judges,
                list_length,
                pool_size,
                judge_noise,
                ranking_noise,
                click_model: (!no_sessions).then(ClickModel::default),
                ..SynthSpec::default()
            };
            let ds = generate_synthetic(&spec, seed)?;
            write_dataset(&ds, &out)?;
            outln!(
                "wrote {} queries, {} judgments, {} preferences, {} sessions to {}",
                ds.queries().len(),
                ds.judgments().len(),
                ds.preferences().len(),
                ds.sessions().len(),
                out.display()
            );
            Ok(0)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig(_)
        | Error::InvalidRank
        | Error::CutoffTooLarge { .. }
        | Error::RankOutsideClickTable(_)
        | Error::InvalidClickTable(_)
        | Error::InfeasibleSpec(_) => EXIT_USAGE,
        _ => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Validation(report) = &e {
                for v in report.errors() {
                    eprintln!("  {v}");
                }
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
