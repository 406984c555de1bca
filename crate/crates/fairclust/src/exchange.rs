//! Plain-text LP exchange format for external solvers.
//!
//! See `docs/solver-exchange.md` for the grammar. Numbers are written with
//! Rust's shortest round-trip formatting, so reading a file back yields the
//! same `f64` values.

use std::io::{self, BufRead, Write};

use fairclust_core::LpModel;

pub const MODEL_MAGIC: &str = "fairlp";
pub const SOLUTION_MAGIC: &str = "fairlp-solution";
pub const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ExchangeError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn parse_err(line: usize, msg: impl Into<String>) -> ExchangeError {
    ExchangeError::Parse {
        line,
        msg: msg.into(),
    }
}

/// The LP as seen by a solver: for each point `v`, the admissible centers `u`
/// (ascending) with objective coefficients `w_v d(v,u)^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeModel {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl ExchangeModel {
    pub fn from_model(model: &LpModel) -> Self {
        let rows = (0..model.n())
            .map(|v| {
                model
                    .support(v)
                    .iter()
                    .enumerate()
                    .map(|(i, &u)| (u, model.cost(v, i)))
                    .collect()
            })
            .collect();
        Self {
            n: model.n(),
            k: model.k(),
            p: model.p(),
            rows,
        }
    }

    pub fn variable_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum::<usize>() + self.n
    }

    pub fn write<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{MODEL_MAGIC} {VERSION}")?;
        writeln!(out, "n {}", self.n)?;
        writeln!(out, "k {}", self.k)?;
        writeln!(out, "p {}", self.p)?;
        for (v, row) in self.rows.iter().enumerate() {
            for &(u, c) in row {
                writeln!(out, "x {v} {u} {c}")?;
            }
        }
        writeln!(out, "end")?;
        out.flush()
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self, ExchangeError> {
        let mut lines = numbered(input);
        expect_header(&mut lines, MODEL_MAGIC)?;
        let n = header_value(&mut lines, "n")?;
        let k = header_value(&mut lines, "k")?;
        let p = header_value(&mut lines, "p")?;
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for item in lines {
            let (no, line) = item?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["end"] => {
                    for (v, row) in rows.iter().enumerate() {
                        if row.windows(2).any(|w| w[0].0 >= w[1].0) {
                            return Err(parse_err(
                                no,
                                format!("row {v} is not strictly ascending"),
                            ));
                        }
                    }
                    return Ok(Self { n, k, p, rows });
                }
                ["x", v, u, c] => {
                    let v: usize = parse(no, v)?;
                    let u: usize = parse(no, u)?;
                    let c: f64 = parse(no, c)?;
                    if v >= n || u >= n {
                        return Err(parse_err(no, format!("index out of range for n = {n}")));
                    }
                    rows[v].push((u, c));
                }
                _ => return Err(parse_err(no, format!("unexpected line {line:?}"))),
            }
        }
        Err(parse_err(0, "missing end marker"))
    }
}

/// A solver's answer. `x[v]` is aligned with `ExchangeModel::rows[v]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExchangeSolution {
    Solved { x: Vec<Vec<f64>>, y: Vec<f64> },
    Infeasible(String),
}

impl ExchangeSolution {
    pub fn write<W: Write>(&self, model: &ExchangeModel, mut out: W) -> io::Result<()> {
        writeln!(out, "{SOLUTION_MAGIC} {VERSION}")?;
        match self {
            Self::Infeasible(reason) => {
                writeln!(out, "status infeasible")?;
                writeln!(out, "reason {}", reason.replace('\n', " "))?;
            }
            Self::Solved { x, y } => {
                writeln!(out, "status optimal")?;
                for (u, val) in y.iter().enumerate() {
                    writeln!(out, "y {u} {val}")?;
                }
                for (v, row) in model.rows.iter().enumerate() {
                    for (&(u, _), val) in row.iter().zip(&x[v]) {
                        if *val != 0.0 {
                            writeln!(out, "x {v} {u} {val}")?;
                        }
                    }
                }
            }
        }
        writeln!(out, "end")?;
        out.flush()
    }

    /// Reads a solution for `model`. Missing `x` and `y` entries are zero.
    pub fn read<R: BufRead>(model: &ExchangeModel, input: R) -> Result<Self, ExchangeError> {
        let mut lines = numbered(input);
        expect_header(&mut lines, SOLUTION_MAGIC)?;
        let (no, status) = lines
            .next()
            .ok_or_else(|| parse_err(0, "missing status"))??;
        let mut reason = String::from("external solver reported infeasibility");
        let infeasible = match status.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["status", "optimal"] => false,
            ["status", "infeasible"] => true,
            _ => return Err(parse_err(no, format!("bad status line {status:?}"))),
        };
        let mut x: Vec<Vec<f64>> = model.rows.iter().map(|r| vec![0.0; r.len()]).collect();
        let mut y = vec![0.0; model.n];
        for item in lines {
            let (no, line) = item?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["end"] => {
                    return Ok(if infeasible {
                        Self::Infeasible(reason)
                    } else {
                        Self::Solved { x, y }
                    })
                }
                ["reason", ..] => reason = line["reason".len()..].trim().to_string(),
                ["y", u, val] => {
                    let u: usize = parse(no, u)?;
                    if u >= model.n {
                        return Err(parse_err(no, "y index out of range"));
                    }
                    y[u] = parse(no, val)?;
                }
                ["x", v, u, val] => {
                    let v: usize = parse(no, v)?;
                    let u: usize = parse(no, u)?;
                    let row = model
                        .rows
                        .get(v)
                        .ok_or_else(|| parse_err(no, "x row out of range"))?;
                    let i = row
                        .binary_search_by_key(&u, |&(w, _)| w)
                        .map_err(|_| parse_err(no, format!("x {v} {u} is not a model variable")))?;
                    x[v][i] = parse(no, val)?;
                }
                _ => return Err(parse_err(no, format!("unexpected line {line:?}"))),
            }
        }
        Err(parse_err(0, "missing end marker"))
    }
}

type Numbered<'a> = Box<dyn Iterator<Item = Result<(usize, String), ExchangeError>> + 'a>;

/// Non-empty, non-comment lines with 1-based line numbers.
fn numbered<'a, R: BufRead + 'a>(input: R) -> Numbered<'a> {
    Box::new(
        input
            .lines()
            .enumerate()
            .map(|(i, l)| l.map(|s| (i + 1, s)).map_err(ExchangeError::from))
            .filter(|r| match r {
                Ok((_, s)) => {
                    let t = s.trim();
                    !t.is_empty() && !t.starts_with('#')
                }
                Err(_) => true,
            }),
    )
}

fn expect_header(lines: &mut Numbered<'_>, magic: &str) -> Result<(), ExchangeError> {
    let (no, line) = lines.next().ok_or_else(|| parse_err(0, "empty input"))??;
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.as_slice() {
        [m, v] if *m == magic => {
            let v: u32 = parse(no, v)?;
            if v != VERSION {
                return Err(parse_err(no, format!("unsupported version {v}")));
            }
            Ok(())
        }
        _ => Err(parse_err(
            no,
            format!("expected header `{magic} {VERSION}`"),
        )),
    }
}

fn header_value<T: std::str::FromStr>(
    lines: &mut Numbered<'_>,
    key: &str,
) -> Result<T, ExchangeError> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| parse_err(0, format!("missing `{key}` line")))??;
    match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        [k, v] if *k == key => parse(no, v),
        _ => Err(parse_err(no, format!("expected `{key} <value>`"))),
    }
}

fn parse<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, ExchangeError> {
    s.parse()
        .map_err(|_| parse_err(line, format!("cannot parse {s:?}")))
}
