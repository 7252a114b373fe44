use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use soplr::SizeDistribution;

use crate::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `r,s,n,m,count` rows; totals as `m = -1`.
    Csv,
    Json,
    /// An aligned table, one column per parameter triple.
    Pretty,
}

/// One size distribution of a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    pub counts: SizeDistribution,
    /// False when sizes were capped, so no total is known.
    pub complete: bool,
}

impl Column {
    pub fn label(&self) -> String {
        if self.r == self.s {
            format!("{}.{}", self.r, self.n)
        } else {
            format!("{}.{}.{}", self.r, self.s, self.n)
        }
    }
}

#[derive(Serialize)]
struct ColumnJson<'a> {
    r: usize,
    s: usize,
    n: usize,
    counts: &'a SizeDistribution,
    total: Option<String>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    columns: Vec<ColumnJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    incomplete: Option<&'a str>,
}

/// Writes the columns; `incomplete` marks a table cut short.
pub fn write_columns(
    out: &mut dyn Write,
    format: Format,
    columns: &[Column],
    incomplete: Option<&str>,
) -> CliResult<()> {
    match format {
        Format::Csv => {
            writeln!(out, "r,s,n,m,count")?;
            for c in columns {
                for (m, v) in c.counts.counts().iter().enumerate() {
                    writeln!(out, "{},{},{},{m},{v}", c.r, c.s, c.n)?;
                }
                if c.complete {
                    writeln!(out, "{},{},{},-1,{}", c.r, c.s, c.n, c.counts.total())?;
                }
            }
            if let Some(why) = incomplete {
                writeln!(out, "# incomplete: {why}")?;
            }
        }
        Format::Json => {
            let table = TableJson {
                columns: columns
                    .iter()
                    .map(|c| ColumnJson {
                        r: c.r,
                        s: c.s,
                        n: c.n,
                        counts: &c.counts,
                        total: c.complete.then(|| c.counts.total().to_string()),
                    })
                    .collect(),
                incomplete,
            };
            serde_json::to_writer_pretty(&mut *out, &table)?;
            writeln!(out)?;
        }
        Format::Pretty => {
            let rows = columns.iter().map(|c| c.counts.len()).max().unwrap_or(0);
            let mut grid: Vec<Vec<String>> = Vec::new();
            grid.push(
                std::iter::once("m".to_string())
                    .chain(columns.iter().map(Column::label))
                    .collect(),
            );
            for m in 0..rows {
                grid.push(
                    std::iter::once(m.to_string())
                        .chain(columns.iter().map(|c| {
                            if m < c.counts.len() {
                                c.counts.get(m).to_string()
                            } else {
                                String::new()
                            }
                        }))
                        .collect(),
                );
            }
            grid.push(
                std::iter::once("total".to_string())
                    .chain(columns.iter().map(|c| {
                        if c.complete {
                            c.counts.total().to_string()
                        } else {
                            "-".to_string()
                        }
                    }))
                    .collect(),
            );
            write_grid(out, &grid)?;
            if let Some(why) = incomplete {
                writeln!(out, "(incomplete: {why})")?;
            }
        }
    }
    Ok(())
}

/// Right-aligned columns separated by two spaces.
pub fn write_grid(out: &mut dyn Write, grid: &[Vec<String>]) -> CliResult<()> {
    let width = grid.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..width)
        .map(|j| grid.iter().filter_map(|row| row.get(j)).map(String::len).max().unwrap_or(0))
        .collect();
    for row in grid {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, cell)| format!("{cell:>w$}", w = widths[j]))
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}
