use std::io::Write;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use soplr::classify::{main_class_levels, ExtensionMethod, MainClass};
use soplr::enumeration::{
    count_plr_by_size, count_sor_by_size, count_sor_exact_symbols, sigma_closed_form, sigma_near_full_printed,
    sor_total_formula,
};
use soplr::hamming::{closed_form_count, HammingGraph, IndependenceOptions};
use soplr::strategies::{
    default_split, sor_distribution_direct_sum_with, sor_distribution_stratified, DirectSumOptions,
};
use soplr::SizeDistribution;

use crate::output::{write_columns, write_grid, Column, Format};
use crate::{CliError, CliResult, Command, RunConfig, Strategy};

pub fn dispatch(config: &RunConfig, out: &mut (dyn Write + Send)) -> CliResult<()> {
    let format = config.global.format;
    match &config.command {
        Command::Table1 {
            bound,
            cross_check,
            max_size,
            node_limit,
        } => {
            let options = IndependenceOptions {
                memo_budget: config.global.memo_budget,
                max_size: *max_size,
                node_limit: *node_limit,
            };
            table1(out, format, *bound, *cross_check, options)
        }
        Command::TableSor {
            r,
            n,
            strategy,
            split,
            reduce_symbols,
            through,
            cross_check,
            max_size,
            force,
        } => {
            let job = SorJob {
                r: *r,
                strategy: *strategy,
                split: *split,
                reduce_symbols: *reduce_symbols,
                max_size: *max_size,
            };
            let ns: Vec<usize> = if *through { (1..=*n).collect() } else { vec![*n] };
            table_sor(out, format, &job, &ns, *cross_check, *force)
        }
        Command::Classify { r, cross_check } => classify(out, format, *r, *cross_check),
        Command::VerifyFormulas { max_n, plr_bound } => verify_formulas(out, format, *max_n, *plr_bound),
    }
}

fn table1(
    out: &mut dyn Write,
    format: Format,
    bound: usize,
    cross_check: bool,
    options: IndependenceOptions,
) -> CliResult<()> {
    if bound == 0 {
        return Err(CliError::BadArgs("--bound must be at least 1".into()));
    }
    let mut columns = Vec::new();
    for r in 1..=bound {
        for s in r..=bound {
            for n in s..=bound {
                let counts = HammingGraph::build(r, s, n).and_then(|h| h.independence_polynomial(&options));
                let counts = match counts {
                    Ok(c) => c,
                    Err(e @ (soplr::Error::Capacity { .. } | soplr::Error::Unsupported(_))) => {
                        let why = format!("{r}.{s}.{n}: {e}");
                        write_columns(out, format, &columns, Some(&why))?;
                        return Err(CliError::Resource(why));
                    }
                    Err(e) => return Err(e.into()),
                };
                if cross_check {
                    let searched = count_plr_by_size(r, s, n, options.max_size)?;
                    if searched != counts {
                        return Err(CliError::Mismatch(format!(
                            "{r}.{s}.{n}: independence polynomial {counts}, search {searched}"
                        )));
                    }
                }
                columns.push(Column {
                    r,
                    s,
                    n,
                    counts,
                    complete: options.max_size.is_none(),
                });
            }
        }
    }
    write_columns(out, format, &columns, None)
}

struct SorJob {
    r: usize,
    strategy: Strategy,
    split: Option<usize>,
    reduce_symbols: bool,
    max_size: Option<usize>,
}

impl SorJob {
    /// Whether `strategy` finishes in minutes at this scale.
    fn feasible(&self, strategy: Strategy, n: usize) -> bool {
        let (r, m) = (self.r, self.max_size.unwrap_or(usize::MAX));
        match strategy {
            Strategy::Direct => r <= 3 && n <= 10 || r == 4 && (n <= 4 || m <= 5 && n <= 9),
            Strategy::Stratified => r <= 3 || r == 4 && (n <= 4 || m <= 6),
            Strategy::SumBlocks => (2..=4).contains(&r) && (n <= 4 || self.reduce_symbols && n <= 5),
        }
    }

    fn bounds_hint(strategy: Strategy) -> &'static str {
        match strategy {
            Strategy::Direct => "r <= 3 with n <= 10, or r = 4 with n <= 4 (or --max-size <= 5 and n <= 9)",
            Strategy::Stratified => "r <= 3, or r = 4 with n <= 4 (or --max-size <= 6)",
            Strategy::SumBlocks => "2 <= r <= 4 with n <= 4 (n <= 5 with --reduce-symbols)",
        }
    }

    fn compute(&self, strategy: Strategy, n: usize) -> CliResult<SizeDistribution> {
        let r = self.r;
        let counts = match strategy {
            Strategy::Direct => count_sor_by_size(r, n, self.max_size)?,
            Strategy::Stratified => sor_distribution_stratified(r, n, self.max_size)?,
            Strategy::SumBlocks => {
                let (upper, lower) = match self.split {
                    Some(lower) if lower == 0 || lower >= r => {
                        return Err(CliError::BadArgs(format!("--split must lie in 1..{r}")))
                    }
                    Some(lower) => (r - lower, lower),
                    None => default_split(r),
                };
                let options = DirectSumOptions {
                    reduce_symbols: self.reduce_symbols,
                    corner_c_by_ideal: false,
                };
                let full = sor_distribution_direct_sum_with(upper, lower, n, options)?;
                match self.max_size {
                    Some(m) => full.truncated(m),
                    None => full,
                }
            }
        };
        Ok(counts)
    }
}

fn table_sor(
    out: &mut dyn Write,
    format: Format,
    job: &SorJob,
    ns: &[usize],
    cross_check: bool,
    force: bool,
) -> CliResult<()> {
    if job.r == 0 {
        return Err(CliError::BadArgs("r must be at least 1".into()));
    }
    if job.strategy == Strategy::SumBlocks && job.r < 2 {
        return Err(CliError::BadArgs("sum-blocks needs r >= 2".into()));
    }
    let second = match job.strategy {
        Strategy::Direct => Strategy::Stratified,
        Strategy::Stratified | Strategy::SumBlocks => Strategy::Direct,
    };
    if !force {
        for &n in ns {
            for strategy in std::iter::once(job.strategy).chain(cross_check.then_some(second)) {
                if !job.feasible(strategy, n) {
                    return Err(CliError::Resource(format!(
                        "{strategy:?} is not feasible for r = {}, n = {n}; feasible: {} (or pass --force)",
                        job.r,
                        SorJob::bounds_hint(strategy)
                    )));
                }
            }
        }
    }
    let mut columns = Vec::new();
    for &n in ns {
        let counts = job.compute(job.strategy, n)?;
        if cross_check {
            let other = job.compute(second, n)?;
            if other != counts {
                write_columns(out, format, &columns, Some("cross-check failed"))?;
                return Err(CliError::Mismatch(format!(
                    "r = {}, n = {n}: {:?} {counts}, {second:?} {other}",
                    job.r, job.strategy
                )));
            }
        }
        columns.push(Column {
            r: job.r,
            s: job.r,
            n,
            counts,
            complete: job.max_size.is_none(),
        });
    }
    write_columns(out, format, &columns, None)
}

#[derive(Serialize)]
struct LevelJson<'a> {
    level: usize,
    classes: usize,
    sigma: String,
    catalog: &'a [MainClass],
}

#[derive(Serialize)]
struct ClassifyJson<'a> {
    r: usize,
    levels: Vec<LevelJson<'a>>,
}

fn classify(out: &mut dyn Write, format: Format, r: usize, cross_check: bool) -> CliResult<()> {
    if r == 0 {
        return Err(CliError::BadArgs("r must be at least 1".into()));
    }
    if r > 3 {
        return Err(CliError::Resource(format!(
            "main-class catalogs are supported for r <= 3 only; r = {r} would need the classes of every level up to {} symbols",
            r * r
        )));
    }
    let levels = main_class_levels(r, r * r, ExtensionMethod::Direct)?;
    let levels = &levels[1..];
    if cross_check {
        for level in levels {
            let direct = count_sor_exact_symbols(r, level.level, None)?.total();
            if direct != level.sigma() {
                return Err(CliError::Mismatch(format!(
                    "r = {r}, s = {}: class sizes sum to {}, search counts {direct}",
                    level.level,
                    level.sigma()
                )));
            }
        }
    }
    match format {
        Format::Csv => {
            writeln!(out, "r,s,classes,sigma")?;
            for level in levels {
                writeln!(out, "{r},{},{},{}", level.level, level.len(), level.sigma())?;
            }
        }
        Format::Json => {
            let doc = ClassifyJson {
                r,
                levels: levels
                    .iter()
                    .map(|l| LevelJson {
                        level: l.level,
                        classes: l.len(),
                        sigma: l.sigma().to_string(),
                        catalog: &l.classes,
                    })
                    .collect(),
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Pretty => {
            let mut grid = vec![vec!["s".to_string(), "classes".into(), "sigma".into()]];
            for level in levels {
                grid.push(vec![level.level.to_string(), level.len().to_string(), level.sigma().to_string()]);
            }
            write_grid(out, &grid)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
enum Status {
    Pass,
    Fail,
    /// A known disagreement that is reported, not counted as a failure.
    Discrepancy,
}

#[derive(Debug, Serialize)]
struct Check {
    identity: &'static str,
    params: String,
    expected: String,
    got: String,
    status: Status,
}

fn check(identity: &'static str, params: String, expected: impl ToString, got: impl ToString) -> Check {
    let (expected, got) = (expected.to_string(), got.to_string());
    let status = if expected == got { Status::Pass } else { Status::Fail };
    Check {
        identity,
        params,
        expected,
        got,
        status,
    }
}

fn verify_formulas(out: &mut dyn Write, format: Format, max_n: usize, plr_bound: usize) -> CliResult<()> {
    let mut checks = Vec::new();
    for r in 1..=3 {
        for n in 1..=max_n {
            let total = BigInt::from(count_sor_by_size(r, n, None)?.total());
            checks.push(check("sor-total-polynomial", format!("r={r} n={n}"), sor_total_formula(r, n)?, total));
        }
    }
    for r in 1..=plr_bound {
        for s in 1..=plr_bound {
            for n in 1..=plr_bound {
                let counts = count_plr_by_size(r, s, n, Some(2))?;
                for m in 0..=2 {
                    checks.push(check(
                        "plr-small-size-closed-form",
                        format!("r={r} s={s} n={n} m={m}"),
                        closed_form_count(r, s, n, m)?,
                        counts.get(m),
                    ));
                }
            }
        }
    }
    for r in 1..=3 {
        for s in 0..=r * r + 1 {
            if let Some(v) = sigma_closed_form(r, s) {
                let counted = count_sor_exact_symbols(r, s, None)?.total();
                checks.push(check("sigma-closed-form", format!("r={r} s={s}"), v, counted));
            }
        }
    }
    for r in 2..=3 {
        let s = r * r - 1;
        let counted: BigUint = count_sor_exact_symbols(r, s, None)?.total();
        let printed = sigma_near_full_printed(r).map_or_else(|| "non-integer".to_string(), |v| v.to_string());
        let mut c = check("sigma-one-empty-cell-printed", format!("r={r} s={s}"), printed, counted);
        if c.status == Status::Fail {
            c.status = Status::Discrepancy;
        }
        checks.push(c);
    }

    match format {
        Format::Csv => {
            writeln!(out, "identity,params,expected,got,status")?;
            for c in &checks {
                let status = serde_json::to_value(c.status)?;
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.identity,
                    c.params,
                    c.expected,
                    c.got,
                    status.as_str().unwrap_or_default()
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &checks)?;
            writeln!(out)?;
        }
        Format::Pretty => {
            let mut grid = vec![vec![
                "identity".to_string(),
                "params".into(),
                "expected".into(),
                "got".into(),
                "status".into(),
            ]];
            for c in &checks {
                let status = serde_json::to_value(c.status)?;
                grid.push(vec![
                    c.identity.to_string(),
                    c.params.clone(),
                    c.expected.clone(),
                    c.got.clone(),
                    status.as_str().unwrap_or_default().to_string(),
                ]);
            }
            write_grid(out, &grid)?;
        }
    }
    let failures: Vec<&Check> = checks.iter().filter(|c| c.status == Status::Fail).collect();
    if let Some(first) = failures.first() {
        return Err(CliError::Mismatch(format!(
            "{} identities failed; first: {} at {} expected {} got {}",
            failures.len(),
            first.identity,
            first.params,
            first.expected,
            first.got
        )));
    }
    Ok(())
}
