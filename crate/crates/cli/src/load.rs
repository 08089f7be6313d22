//! CSV loaders. Every file is UTF-8, comma-separated, with a mandatory header
//! row; reported line numbers count that header as line 1.

use std::collections::HashMap;
use std::path::Path;

use quadstat_core::association::{FrequencyModel, HaplotypeSample, SimilarityMatrix};
use quadstat_core::linalg::Matrix;

use crate::error::{CliError, Result};

struct Table {
    header: Vec<String>,
    rows: Vec<(u64, Vec<String>)>,
}

fn read_table(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line());
            CliError::parse(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        records.push((line, rec.iter().map(str::to_string).collect::<Vec<_>>()));
    }
    let mut records = records.into_iter();
    let Some((_, header)) = records.next() else {
        return Err(CliError::parse(path, Some(1), "missing header row"));
    };
    Ok(Table {
        header,
        rows: records.collect(),
    })
}

fn expect_header(path: &Path, table: &Table, expected: &[&str]) -> Result<()> {
    if table.header != expected {
        return Err(CliError::parse(
            path,
            Some(1),
            format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                table.header.join(",")
            ),
        ));
    }
    Ok(())
}

/// Haplotype labels from the first column: nonempty, distinct, equal length.
fn haplotype_column(path: &Path, table: &Table) -> Result<Vec<String>> {
    let mut first_seen: HashMap<&str, u64> = HashMap::new();
    let mut loci = None;
    for (line, row) in &table.rows {
        if row.len() != table.header.len() {
            return Err(CliError::parse(
                path,
                Some(*line),
                format!("expected {} fields, found {}", table.header.len(), row.len()),
            ));
        }
        let h = row[0].as_str();
        let len = h.chars().count();
        if len == 0 {
            return Err(CliError::parse(path, Some(*line), "empty haplotype"));
        }
        match loci {
            None => loci = Some(len),
            Some(l) if l != len => {
                return Err(CliError::parse(
                    path,
                    Some(*line),
                    format!("haplotype `{h}` has {len} loci, earlier rows have {l}"),
                ))
            }
            _ => {}
        }
        if let Some(prev) = first_seen.insert(h, *line) {
            return Err(CliError::parse(
                path,
                Some(*line),
                format!("duplicate haplotype `{h}` (first on line {prev})"),
            ));
        }
    }
    Ok(table.rows.iter().map(|(_, r)| r[0].clone()).collect())
}

fn count(path: &Path, line: u64, field: &str) -> Result<u64> {
    field.parse::<u64>().map_err(|_| {
        let msg = match field.parse::<i64>() {
            Ok(v) if v < 0 => format!("negative count `{field}`"),
            _ => format!("count `{field}` is not a nonnegative integer"),
        };
        CliError::parse(path, Some(line), msg)
    })
}

fn number(path: &Path, line: u64, column: usize, field: &str) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::parse(
            path,
            Some(line),
            format!("column {column}: `{field}` is not a finite number"),
        )),
    }
}

/// `haplotype,count1,count2`.
pub fn load_haplotype_counts(path: &Path) -> Result<HaplotypeSample> {
    let table = read_table(path)?;
    expect_header(path, &table, &["haplotype", "count1", "count2"])?;
    let haplotypes = haplotype_column(path, &table)?;
    let (mut c1, mut c2) = (Vec::new(), Vec::new());
    for (line, row) in &table.rows {
        c1.push(count(path, *line, &row[1])?);
        c2.push(count(path, *line, &row[2])?);
    }
    Ok(HaplotypeSample::new(haplotypes, c1, c2)?)
}

/// `haplotype,freq1,freq2`; each frequency column sums to one.
pub fn load_frequencies(path: &Path) -> Result<FrequencyModel> {
    let table = read_table(path)?;
    expect_header(path, &table, &["haplotype", "freq1", "freq2"])?;
    let haplotypes = haplotype_column(path, &table)?;
    let (mut p, mut q) = (Vec::new(), Vec::new());
    for (line, row) in &table.rows {
        p.push(number(path, *line, 2, &row[1])?);
        q.push(number(path, *line, 3, &row[2])?);
    }
    Ok(FrequencyModel::new(haplotypes, p, q)?)
}

/// Square numeric matrix whose header row names the haplotypes of its
/// columns (rows follow the same order). The result is reordered to match
/// `haplotypes`, checked for symmetry and symmetrized.
pub fn load_similarity_matrix(path: &Path, haplotypes: &[String]) -> Result<SimilarityMatrix> {
    let table = read_table(path)?;
    let cols = table.header.len();
    let mut values = Vec::with_capacity(cols * table.rows.len());
    for (line, row) in &table.rows {
        if row.len() != cols {
            return Err(CliError::parse(
                path,
                Some(*line),
                format!("expected {cols} fields, found {}", row.len()),
            ));
        }
        for (j, field) in row.iter().enumerate() {
            values.push(number(path, *line, j + 1, field)?);
        }
    }
    if table.rows.len() != cols {
        return Err(CliError::parse(
            path,
            None,
            format!("matrix is {}x{cols}, must be square", table.rows.len()),
        ));
    }
    let a = SimilarityMatrix::custom(Matrix::from_row_slice(cols, cols, &values))?;
    let order = haplotypes
        .iter()
        .map(|h| table.header.iter().position(|l| l == h))
        .collect::<Option<Vec<usize>>>();
    match order {
        Some(order) if cols == haplotypes.len() => Ok(a.select(&order)),
        _ => Err(CliError::Core(quadstat_core::Error::Validation(format!(
            "matrix header `{}` does not name the {} input haplotypes",
            table.header.join(","),
            haplotypes.len()
        )))),
    }
}
