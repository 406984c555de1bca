//! Loading numeric feature columns from CSV and drawing samples.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("column {0:?} not found in header")]
    MissingColumn(String),
    #[error("every row was skipped ({skipped} malformed)")]
    AllRowsSkipped { skipped: usize },
    #[error("sample of {requested} requested from {available} points")]
    SampleTooLarge { requested: usize, available: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Parsed feature vectors, in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub columns: Vec<String>,
    pub points: Vec<Vec<f64>>,
    /// Rows dropped because a requested cell was missing or not a number.
    pub skipped: usize,
}

/// `;` when the header has semicolons and no commas, else `,`.
fn sniff_delimiter(header: &str) -> u8 {
    if header.contains(';') && !header.contains(',') {
        b';'
    } else {
        b','
    }
}

pub fn load_csv(path: &Path, features: &[String]) -> Result<Dataset, DataError> {
    let mut file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => DataError::FileNotFound(path.to_path_buf()),
        _ => DataError::Io(e),
    })?;
    let mut header = String::new();
    BufReader::new(&mut file).read_line(&mut header)?;
    file.seek(SeekFrom::Start(0))?;
    read_csv(file, sniff_delimiter(&header), features)
}

/// Parses CSV text with a header row. An empty `features` list selects every
/// column.
pub fn read_csv<R: Read>(
    input: R,
    delimiter: u8,
    features: &[String],
) -> Result<Dataset, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let columns: Vec<String> = if features.is_empty() {
        header.clone()
    } else {
        features.to_vec()
    };
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| {
            header
                .iter()
                .position(|h| h == c)
                .ok_or_else(|| DataError::MissingColumn(c.clone()))
        })
        .collect::<Result<_, _>>()?;

    let mut points = Vec::new();
    let mut skipped = 0;
    for record in reader.records() {
        let record = record?;
        let row: Option<Vec<f64>> = idx
            .iter()
            .map(|&i| {
                record
                    .get(i)
                    .and_then(|cell| cell.trim_matches('"').parse::<f64>().ok())
                    .filter(|v| v.is_finite())
            })
            .collect();
        match row {
            Some(r) => points.push(r),
            None => skipped += 1,
        }
    }
    if points.is_empty() {
        return Err(DataError::AllRowsSkipped { skipped });
    }
    Ok(Dataset {
        columns,
        points,
        skipped,
    })
}

/// Indices of a uniform sample without replacement, ascending.
pub fn sample_indices(available: usize, m: usize, seed: u64) -> Result<Vec<usize>, DataError> {
    if m > available {
        return Err(DataError::SampleTooLarge {
            requested: m,
            available,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = index::sample(&mut rng, available, m).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

pub fn sample_points(points: &[Vec<f64>], m: usize, seed: u64) -> Result<Vec<Vec<f64>>, DataError> {
    Ok(sample_indices(points.len(), m, seed)?
        .into_iter()
        .map(|i| points[i].clone())
        .collect())
}

/// Z-scores every column in place. Constant columns become zero.
pub fn standardize(points: &mut [Vec<f64>]) {
    let Some(dim) = points.first().map(Vec::len) else {
        return;
    };
    let n = points.len() as f64;
    for j in 0..dim {
        let mean = points.iter().map(|p| p[j]).sum::<f64>() / n;
        let var = points.iter().map(|p| (p[j] - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        for p in points.iter_mut() {
            p[j] = if sd > 0.0 { (p[j] - mean) / sd } else { 0.0 };
        }
    }
}
