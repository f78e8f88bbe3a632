//! CSV input and output for rating matrices.
//!
//! Two formats are supported:
//!
//! * `tuples` — header `user,item,rating`, one rating per row, `.` decimal
//!   separator, UTF-8.
//! * `dense` — header row of item labels (first cell ignored), first column
//!   user labels, empty cells mean missing. `0` is a real zero rating.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{BinaryRatingMatrix, LabelMap, RatingMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvFormat {
    Tuples,
    Dense,
}

impl CsvFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "tuples" => Ok(CsvFormat::Tuples),
            "dense" => Ok(CsvFormat::Dense),
            other => Err(Error::InvalidArgument(format!(
                "unknown CSV format `{other}`"
            ))),
        }
    }
}

/// Reads a rating matrix from a CSV file.
pub fn read_csv(path: impl AsRef<Path>, format: CsvFormat) -> Result<RatingMatrix> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    read_csv_str(&text, format)
}

/// Reads a rating matrix from CSV text. See [`read_csv`].
pub fn read_csv_str(text: &str, format: CsvFormat) -> Result<RatingMatrix> {
    match format {
        CsvFormat::Tuples => read_tuples(text),
        CsvFormat::Dense => read_dense(text),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn read_tuples(text: &str) -> Result<RatingMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    {
        let headers = reader
            .headers()
            .map_err(|e| parse_err(1, e.to_string()))?;
        let expected = ["user", "item", "rating"];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(parse_err(
                1,
                format!("expected header `user,item,rating`, got `{}`", got.join(",")),
            ));
        }
    }
    let mut tuples = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| parse_err(line, e.to_string()))?;
        if record.len() != 3 {
            return Err(parse_err(line, format!("expected 3 fields, got {}", record.len())));
        }
        let user = record[0].to_string();
        let item = record[1].to_string();
        if user.is_empty() || item.is_empty() {
            return Err(parse_err(line, "empty user or item label"));
        }
        let rating: f64 = record[2]
            .parse()
            .map_err(|_| parse_err(line, format!("invalid rating `{}`", &record[2])))?;
        tuples.push((user, item, rating));
    }
    if tuples.is_empty() {
        return Err(Error::EmptyInput);
    }
    RatingMatrix::from_tuples(&tuples)
}

fn read_dense(text: &str) -> Result<RatingMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records().enumerate();
    let header = match records.next() {
        None => return Err(Error::EmptyInput),
        Some((_, record)) => record.map_err(|e| parse_err(1, e.to_string()))?,
    };
    if header.len() < 2 {
        return Err(parse_err(1, "dense header needs at least one item column"));
    }
    let item_labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let items = LabelMap::from_labels(item_labels)
        .map_err(|e| parse_err(1, e.to_string()))?;

    let mut users = LabelMap::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut n_ratings = 0usize;
    for (idx, record) in records {
        let line = idx + 1;
        let record = record.map_err(|e| parse_err(line, e.to_string()))?;
        if record.len() != items.len() + 1 {
            return Err(parse_err(
                line,
                format!("expected {} fields, got {}", items.len() + 1, record.len()),
            ));
        }
        let user = record[0].to_string();
        if user.is_empty() {
            return Err(parse_err(line, "empty user label"));
        }
        if users.get(&user).is_some() {
            return Err(parse_err(line, format!("duplicate user row `{user}`")));
        }
        users.intern(&user);
        let mut row = Vec::new();
        for (i, cell) in record.iter().skip(1).enumerate() {
            if cell.is_empty() {
                continue;
            }
            let rating: f64 = cell
                .parse()
                .map_err(|_| parse_err(line, format!("invalid rating `{cell}`")))?;
            if !rating.is_finite() {
                return Err(Error::InvalidRating {
                    user: user.clone(),
                    item: items.label(i).to_string(),
                    value: rating,
                });
            }
            row.push((i, rating));
            n_ratings += 1;
        }
        rows.push(row);
    }
    if n_ratings == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(RatingMatrix::from_parts(users, items, rows))
}

/// Writes a rating matrix to a CSV file in the given format.
pub fn write_csv(m: &RatingMatrix, path: impl AsRef<Path>, format: CsvFormat) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(write_csv_string(m, format).as_bytes())?;
    Ok(())
}

/// Renders a rating matrix as CSV text. See [`write_csv`].
pub fn write_csv_string(m: &RatingMatrix, format: CsvFormat) -> String {
    let mut s = String::new();
    match format {
        CsvFormat::Tuples => {
            s.push_str("user,item,rating\n");
            for (user, item, rating) in m.to_tuples() {
                s.push_str(&format!("{user},{item},{rating}\n"));
            }
        }
        CsvFormat::Dense => {
            s.push_str("user");
            for item in m.item_labels() {
                s.push(',');
                s.push_str(item);
            }
            s.push('\n');
            for u in 0..m.n_users() {
                s.push_str(&m.user_labels()[u]);
                let mut row = m.row(u).iter().peekable();
                for i in 0..m.n_items() {
                    s.push(',');
                    if let Some(&&(j, v)) = row.peek() {
                        if j == i {
                            s.push_str(&format!("{v}"));
                            row.next();
                        }
                    }
                }
                s.push('\n');
            }
        }
    }
    s
}

/// Reads a binary rating matrix: tuple files may have a `user,item` header
/// (two columns) or `user,item,rating` with nonzero meaning 1; dense files
/// treat empty and `0` cells as 0.
pub fn read_binary_csv(path: impl AsRef<Path>, format: CsvFormat) -> Result<BinaryRatingMatrix> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    read_binary_csv_str(&text, format)
}

pub fn read_binary_csv_str(text: &str, format: CsvFormat) -> Result<BinaryRatingMatrix> {
    match format {
        CsvFormat::Tuples => {
            let first = text.lines().next().unwrap_or("");
            let two_column = first.trim() == "user,item";
            if two_column {
                let mut reader = csv::ReaderBuilder::new()
                    .has_headers(true)
                    .trim(csv::Trim::All)
                    .from_reader(text.as_bytes());
                let mut pairs = Vec::new();
                for (idx, record) in reader.records().enumerate() {
                    let line = idx + 2;
                    let record = record.map_err(|e| parse_err(line, e.to_string()))?;
                    if record.len() != 2 {
                        return Err(parse_err(line, "expected 2 fields"));
                    }
                    pairs.push((record[0].to_string(), record[1].to_string()));
                }
                BinaryRatingMatrix::from_pairs(&pairs)
            } else {
                let real = read_tuples(text)?;
                Ok(real.binarize(f64::MIN_POSITIVE))
            }
        }
        CsvFormat::Dense => {
            let real = read_dense(text)?;
            Ok(real.binarize(f64::MIN_POSITIVE))
        }
    }
}
