//! The `passpoints` command line.

mod input;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use passpoints_core::attack::{crack_table, merge_groups, AttackFamily, AttackSpec, Dictionary, LodMetric, DEFAULT_LOD_BASE};
use passpoints_core::corpus::{labeled_passwords, read_jsonl};
use passpoints_core::{Alphabet, GraphicalPassword, ImageSize, ToleranceConfig};
use passpoints_saliency::{cluster_images, load_map_dir, AspectFilter, ClusterRequest, KChoice, Rect};
use passpoints_stats::heatmap::heatmap;
use passpoints_stats::{
    fisher_exact_2x2, mann_whitney_u, presentation_hypothesis_suite, student_t_independent, Alternative,
    BinTable2x2, SusResponse, TestResult,
};
use passpoints_study::{export_records, write_export, ExportFilter, Study, StudyConfig, SystemClock};

#[derive(Debug, Parser)]
#[command(name = "passpoints", version, about = "Graphical password attacks, image selection, statistics and study server")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the tile centers used as the guessing alphabet (CSV).
    Alphabet {
        #[command(flatten)]
        image: ImageArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Size (and optionally the first entries) of one attack dictionary.
    Dict {
        #[command(flatten)]
        image: ImageArgs,
        #[command(flatten)]
        attack: AttackArgs,
        /// Print the first N guesses.
        #[arg(long, default_value_t = 0)]
        list: usize,
    },
    /// Crack rates of a JSONL corpus per group and attack.
    Attack {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        image: ImageArgs,
        #[command(flatten)]
        attack: AttackArgs,
        /// Only passwords on this image.
        #[arg(long)]
        image_id: Option<String>,
        /// Fold groups together, e.g. `Primed=LTR+RTL`. Repeatable.
        #[arg(long = "merge", value_parser = input::merge)]
        merges: Vec<(String, Vec<String>)>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Select representative background images from saliency maps.
    Cluster {
        /// Directory of 8-bit PGM or PNG saliency maps.
        #[arg(long)]
        maps: PathBuf,
        /// `auto` (knee of the inertia curve) or a fixed number of clusters.
        #[arg(long, default_value = "auto", value_parser = parse_k)]
        k: KArg,
        /// Largest k tried by `--k auto`.
        #[arg(long, default_value_t = 10)]
        max_k: usize,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seeds per k for the inertia curve.
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        /// Centered crop applied to every map first, e.g. `1440x1080`.
        #[arg(long, value_parser = input::dims)]
        crop: Option<(u32, u32)>,
        /// Keep maps with this aspect ratio.
        #[arg(long, default_value = "4:3", value_parser = input::ratio)]
        aspect: (u32, u32),
        /// Keep maps with exactly this resolution.
        #[arg(long, value_parser = input::dims)]
        resolution: Option<(u32, u32)>,
        /// Disable the aspect/resolution filter.
        #[arg(long)]
        no_filter: bool,
        /// JSON report.
        #[arg(long)]
        out: PathBuf,
        /// Raw features as CSV.
        #[arg(long)]
        features_csv: Option<PathBuf>,
    },
    /// Hypothesis tests.
    Stats {
        #[command(subcommand)]
        test: StatsCommand,
    },
    /// Gaussian click heatmap of one group as a PGM image.
    Heatmap {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        group: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        image_id: Option<String>,
        #[arg(long, default_value_t = 640)]
        image_width: u32,
        #[arg(long, default_value_t = 480)]
        image_height: u32,
        #[arg(long, default_value_t = 10.0)]
        sigma: f64,
    },
    /// Run the study HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        log: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
    /// Export the participant corpus from an event log (JSONL).
    Export {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        log: PathBuf,
        #[arg(long, default_value = "qualified", value_parser = parse_filter)]
        filter: ExportFilter,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    /// Mann-Whitney U on two samples (`1,2,3` or `@file`).
    Mwu {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "two-sided", value_parser = parse_alternative)]
        alternative: Alternative,
        #[arg(long)]
        json: bool,
    },
    /// Fisher's exact test on a 2x2 table given as `a,b,c,d` (rows first).
    Fisher {
        #[arg(long)]
        table: String,
        #[arg(long, default_value = "two-sided", value_parser = parse_alternative)]
        alternative: Alternative,
        #[arg(long)]
        json: bool,
    },
    /// Pooled two-sample t-test.
    Ttest {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        json: bool,
    },
    /// SUS scores; one response of ten answers per line (or `--answers`).
    Sus {
        #[arg(long, conflicts_with = "file")]
        answers: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Per-click comparison of a treatment group against control.
    Suite {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "control")]
        control: String,
        /// Treatment group label; `LTR+RTL` pools several.
        #[arg(long)]
        treatment: String,
        #[arg(long)]
        image_id: Option<String>,
        #[arg(long, default_value_t = 640)]
        image_width: u32,
        #[arg(long, default_value = "greater", value_parser = parse_alternative)]
        alternative: Alternative,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ImageArgs {
    #[arg(long, default_value_t = 640)]
    pub image_width: u32,
    #[arg(long, default_value_t = 480)]
    pub image_height: u32,
    #[arg(long, default_value_t = 10)]
    pub tolerance: u32,
}

impl ImageArgs {
    fn alphabet(&self) -> Result<Alphabet> {
        Ok(Alphabet::build(
            self.image_width,
            self.image_height,
            ToleranceConfig {
                tolerance: self.tolerance,
            },
        )?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct AttackArgs {
    /// Attack families; all three when omitted.
    #[arg(long = "family", value_parser = parse_family)]
    pub families: Vec<AttackFamily>,
    /// Relaxations in pixels.
    #[arg(long = "tau", value_delimiter = ',', default_values_t = [0u32, 21, 42])]
    pub taus: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_LOD_BASE)]
    pub lod_base: u32,
    #[arg(long, value_enum, default_value_t = Metric::Chebyshev)]
    pub lod_metric: Metric,
}

impl AttackArgs {
    fn specs(&self) -> Result<Vec<AttackSpec>> {
        let families = if self.families.is_empty() {
            AttackFamily::ALL.to_vec()
        } else {
            self.families.clone()
        };
        let metric = match self.lod_metric {
            Metric::Chebyshev => LodMetric::Chebyshev,
            Metric::Euclidean => LodMetric::Euclidean,
        };
        let mut specs = Vec::new();
        for family in families {
            for &tau in &self.taus {
                let spec = AttackSpec::new(family, tau);
                let spec = if family == AttackFamily::Lod {
                    AttackSpec::lod(tau, self.lod_base).with_metric(metric)
                } else {
                    spec
                };
                spec.validate()?;
                specs.push(spec);
            }
        }
        Ok(specs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Chebyshev,
    Euclidean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KArg {
    Auto,
    Fixed(usize),
}

fn parse_k(s: &str) -> Result<KArg, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(KArg::Auto);
    }
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(KArg::Fixed(k)),
        _ => Err(format!("expected `auto` or a positive integer, got {s:?}")),
    }
}

fn parse_family(s: &str) -> Result<AttackFamily, String> {
    s.parse().map_err(|e: passpoints_core::Error| e.to_string())
}

fn parse_alternative(s: &str) -> Result<Alternative, String> {
    s.parse()
}

fn parse_filter(s: &str) -> Result<ExportFilter, String> {
    s.parse()
}

fn create(path: &std::path::Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn load_corpus(path: &std::path::Path, image_id: Option<&str>) -> Result<Vec<(String, GraphicalPassword)>> {
    let records = read_jsonl(input::read_file(path)?).with_context(|| format!("reading {}", path.display()))?;
    Ok(labeled_passwords(&records, image_id)?)
}

fn study_config(path: Option<&std::path::Path>) -> Result<StudyConfig> {
    match path {
        Some(p) => Ok(StudyConfig::load(p)?),
        None => Ok(StudyConfig::default()),
    }
}

fn print_test(out: &mut dyn Write, r: &TestResult, json: bool) -> Result<()> {
    if json {
        serde_json::to_writer_pretty(&mut *out, r)?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "method       {:?}", r.method)?;
    writeln!(out, "alternative  {}", r.alternative)?;
    writeln!(out, "n            {} / {}", r.n1, r.n2)?;
    writeln!(out, "statistic    {}", r.statistic)?;
    if let Some(df) = r.df {
        writeln!(out, "df           {df}")?;
    }
    writeln!(out, "p            {}", r.p_value)?;
    writeln!(out, "effect size  {} ({:?})", r.effect_size, r.effect_size_kind)?;
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Alphabet { image, out: path } => {
            let alphabet = image.alphabet()?;
            match path {
                Some(p) => alphabet.write_csv(create(&p)?)?,
                None => alphabet.write_csv(&mut *out)?,
            }
        }
        Command::Dict { image, attack, list } => {
            let alphabet = image.alphabet()?;
            writeln!(out, "alphabet {} centers ({}x{})", alphabet.len(), alphabet.cols(), alphabet.rows())?;
            for spec in attack.specs()? {
                let dict = Dictionary::new(spec, &alphabet)?;
                writeln!(out, "{spec}\t{}", dict.count())?;
                for guess in dict.iter().take(list) {
                    let pts: Vec<String> = guess.iter().map(|p| format!("({},{})", p.x, p.y)).collect();
                    writeln!(out, "  {}", pts.join(" "))?;
                }
            }
        }
        Command::Attack {
            corpus,
            image,
            attack,
            image_id,
            merges,
            format,
        } => {
            let mut passwords = load_corpus(&corpus, image_id.as_deref())?;
            if !merges.is_empty() {
                let members: Vec<Vec<&str>> = merges.iter().map(|(_, m)| m.iter().map(String::as_str).collect()).collect();
                let spec: Vec<(&str, &[&str])> = merges
                    .iter()
                    .zip(&members)
                    .map(|((name, _), m)| (name.as_str(), m.as_slice()))
                    .collect();
                passwords = merge_groups(&passwords, &spec);
            }
            let table = crack_table(&passwords, &attack.specs()?, &image.alphabet()?)?;
            match format {
                Format::Text => write!(out, "{}", table.to_text())?,
                Format::Csv => write!(out, "{}", table.to_csv())?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *out, &table)?;
                    writeln!(out)?;
                }
            }
        }
        Command::Cluster {
            maps,
            k,
            max_k,
            runs,
            seed,
            restarts,
            crop,
            aspect,
            resolution,
            no_filter,
            out: report_path,
            features_csv,
        } => {
            let filter = AspectFilter { ratio: aspect, resolution };
            let mut kept = Vec::new();
            for (id, map) in load_map_dir(&maps)? {
                // maps already smaller than the crop are left to the filter
                let map = match crop {
                    Some((w, h)) if map.width() >= w && map.height() >= h => map
                        .crop(Rect::centered(map.width(), map.height(), w, h))
                        .with_context(|| format!("cropping {id}"))?,
                    _ => map,
                };
                if no_filter || filter.accepts(map.width(), map.height()) {
                    kept.push((id, map));
                } else {
                    writeln!(out, "skipped {id} ({}x{})", map.width(), map.height())?;
                }
            }
            if kept.is_empty() {
                bail!("no saliency maps left in {}", maps.display());
            }
            let request = ClusterRequest {
                k: match k {
                    KArg::Auto => KChoice::Auto { max_k },
                    KArg::Fixed(k) => KChoice::Fixed(k),
                },
                runs,
                seed,
                restarts,
            };
            let report = cluster_images(&kept, &request)?;
            report.write_json(create(&report_path)?)?;
            if let Some(p) = features_csv {
                report.write_feature_csv(create(&p)?)?;
            }
            writeln!(out, "{} maps, k = {}", kept.len(), report.k)?;
            for r in &report.representatives {
                writeln!(out, "cluster {}: {} ({}/{} runs)", r.cluster, r.image_id, r.votes, report.runs)?;
            }
            writeln!(out, "identical elections in {}/{} runs", report.unanimous_runs, report.runs)?;
        }
        Command::Stats { test } => run_stats(test, out)?,
        Command::Heatmap {
            corpus,
            group,
            out: path,
            image_id,
            image_width,
            image_height,
            sigma,
        } => {
            let passwords = load_corpus(&corpus, image_id.as_deref())?;
            let points: Vec<_> = passwords
                .iter()
                .filter(|(g, _)| *g == group)
                .flat_map(|(_, pw)| pw.points)
                .collect();
            if points.is_empty() {
                bail!("group {group:?} has no passwords in {}", corpus.display());
            }
            let img = heatmap(&points, ImageSize::new(image_width, image_height)?, sigma)?;
            img.write_pgm(create(&path)?)?;
            writeln!(out, "{} click-points from group {group} -> {}", points.len(), path.display())?;
        }
        Command::Serve { config, log, addr } => {
            let cfg = study_config(config.as_deref())?;
            let study = Arc::new(Study::open(cfg, Arc::new(SystemClock), &log)?);
            writeln!(out, "listening on http://{addr}")?;
            out.flush()?;
            tokio::runtime::Runtime::new()?.block_on(passpoints_study::http::serve(study, addr))?;
        }
        Command::Export {
            config,
            log,
            filter,
            out: path,
        } => {
            let mut cfg = study_config(config.as_deref())?;
            if !log.exists() {
                bail!("no event log at {}", log.display());
            }
            // read-only replay: never write a snapshot next to someone else's log
            cfg.snapshot_every = 0;
            let study = Study::open(cfg, Arc::new(SystemClock), &log)?;
            let records = study.with_state(|s| export_records(s, study.config(), filter));
            match path {
                Some(p) => write_export(create(&p)?, &records)?,
                None => write_export(&mut *out, &records)?,
            }
        }
    }
    Ok(())
}

fn run_stats(test: StatsCommand, out: &mut dyn Write) -> Result<()> {
    match test {
        StatsCommand::Mwu { x, y, alternative, json } => {
            let r = mann_whitney_u(&input::numbers(&x)?, &input::numbers(&y)?, alternative)?;
            print_test(out, &r, json)?;
        }
        StatsCommand::Fisher { table, alternative, json } => {
            let cells = input::numbers(&table)?;
            let counts: Vec<u64> = cells
                .iter()
                .map(|&c| if c >= 0.0 && c.fract() == 0.0 { Ok(c as u64) } else { Err(c) })
                .collect::<Result<_, _>>()
                .map_err(|c| anyhow::anyhow!("table cells must be non-negative integers, got {c}"))?;
            let [a, b, c, d] = counts[..] else {
                bail!("a 2x2 table needs four cells, got {}", counts.len());
            };
            let r = fisher_exact_2x2(&BinTable2x2::from_rows([a, b], [c, d]), alternative);
            print_test(out, &r, json)?;
        }
        StatsCommand::Ttest { x, y, json } => {
            let r = student_t_independent(&input::numbers(&x)?, &input::numbers(&y)?)?;
            print_test(out, &r, json)?;
        }
        StatsCommand::Sus { answers, file } => {
            let lines: Vec<String> = match (answers, file) {
                (Some(a), _) => vec![a],
                (None, Some(f)) => std::fs::read_to_string(&f)
                    .with_context(|| format!("reading {}", f.display()))?
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(str::to_string)
                    .collect(),
                (None, None) => bail!("give --answers or --file"),
            };
            let mut total = 0.0;
            for line in &lines {
                let answers: Vec<u8> = input::numbers(line)?
                    .into_iter()
                    .map(|v| if (1.0..=5.0).contains(&v) && v.fract() == 0.0 { Ok(v as u8) } else { Err(v) })
                    .collect::<Result<_, _>>()
                    .map_err(|v| anyhow::anyhow!("SUS answers are integers 1..=5, got {v}"))?;
                let score = SusResponse::new(&answers)?.score();
                total += score;
                writeln!(out, "{score}")?;
            }
            if lines.len() > 1 {
                writeln!(out, "mean {}", total / lines.len() as f64)?;
            }
        }
        StatsCommand::Suite {
            corpus,
            control,
            treatment,
            image_id,
            image_width,
            alternative,
            json,
        } => {
            let passwords = load_corpus(&corpus, image_id.as_deref())?;
            let treated: Vec<&str> = treatment.split('+').collect();
            let pick = |labels: &[&str]| -> Vec<GraphicalPassword> {
                passwords
                    .iter()
                    .filter(|(g, _)| labels.contains(&g.as_str()))
                    .map(|(_, p)| p.clone())
                    .collect()
            };
            let report = presentation_hypothesis_suite(&pick(&[&control]), &pick(&treated), image_width, alternative)?;
            if json {
                serde_json::to_writer_pretty(&mut *out, &report)?;
                writeln!(out)?;
            } else {
                write!(out, "{}", report.to_text())?;
            }
        }
    }
    Ok(())
}
