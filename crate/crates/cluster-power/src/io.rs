//! Plain-text dataset and projection files.
//!
//! Datasets travel as CSV with a `f1,...,fp,truth` header; projections as
//! `x,y[,truth]`. Only numeric fields appear, so no quoting is needed, and
//! floats are written in `Display` form, which round-trips exactly.

use std::io::{BufRead, Write};

use crate::datagen::Dataset;
use crate::error::{Error, Result};

/// Writes a dataset as CSV: feature columns `f1..fp`, then the generating
/// subgroup in `truth`.
pub fn write_dataset_csv(dataset: &Dataset, out: &mut impl Write) -> Result<()> {
    let p = dataset.data.first().map_or(0, Vec::len);
    let header: Vec<String> = (1..=p).map(|j| format!("f{j}")).collect();
    writeln!(out, "{},truth", header.join(","))?;
    for (row, truth) in dataset.data.iter().zip(&dataset.truth) {
        let fields: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(out, "{},{truth}", fields.join(","))?;
    }
    Ok(())
}

/// Reads a dataset written by [`write_dataset_csv`]. The `truth` column is
/// optional; without it every point lands in subgroup 0.
pub fn read_dataset_csv(input: impl BufRead) -> Result<Dataset> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("dataset CSV is empty".into()))??;
    let columns: Vec<&str> = header.trim().split(',').collect();
    let has_truth = columns.last() == Some(&"truth");
    let p = if has_truth {
        columns.len() - 1
    } else {
        columns.len()
    };
    if p == 0 {
        return Err(Error::Parse("dataset CSV has no feature columns".into()));
    }
    for (j, name) in columns[..p].iter().enumerate() {
        let expected = format!("f{}", j + 1);
        if *name != expected {
            return Err(Error::Parse(format!(
                "dataset CSV header column {} is '{name}', expected '{expected}'",
                j + 1
            )));
        }
    }

    let mut data = Vec::new();
    let mut truth = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::Parse(format!(
                "dataset CSV line {}: expected {} fields, got {}",
                idx + 2,
                columns.len(),
                fields.len()
            )));
        }
        let mut row = Vec::with_capacity(p);
        for field in &fields[..p] {
            row.push(field.parse::<f64>().map_err(|_| {
                Error::Parse(format!("dataset CSV line {}: bad number '{field}'", idx + 2))
            })?);
        }
        data.push(row);
        truth.push(if has_truth {
            fields[p].parse::<usize>().map_err(|_| {
                Error::Parse(format!(
                    "dataset CSV line {}: bad truth label '{}'",
                    idx + 2,
                    fields[p]
                ))
            })?
        } else {
            0
        });
    }
    if data.is_empty() {
        return Err(Error::Parse("dataset CSV has no data rows".into()));
    }
    Ok(Dataset { data, truth })
}

/// Writes low-dimensional coordinates as CSV (`x,y,...` columns, plus
/// `truth` when labels are given).
pub fn write_projection_csv(
    coords: &[Vec<f64>],
    truth: Option<&[usize]>,
    out: &mut impl Write,
) -> Result<()> {
    let m = coords.first().map_or(0, Vec::len);
    let names = ["x", "y", "z"];
    let mut header: Vec<String> = (0..m)
        .map(|j| {
            names
                .get(j)
                .map_or_else(|| format!("c{}", j + 1), |n| n.to_string())
        })
        .collect();
    if let Some(labels) = truth {
        if labels.len() != coords.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {} points",
                labels.len(),
                coords.len()
            )));
        }
        header.push("truth".into());
    }
    writeln!(out, "{}", header.join(","))?;
    for (i, row) in coords.iter().enumerate() {
        let mut fields: Vec<String> = row.iter().map(f64::to_string).collect();
        if let Some(labels) = truth {
            fields.push(labels[i].to_string());
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> Dataset {
        Dataset {
            data: vec![
                vec![0.25, -1.5],
                vec![0.1234567890123, 2.0],
                vec![-3.0, 0.0],
            ],
            truth: vec![0, 1, 1],
        }
    }

    #[test]
    fn dataset_round_trips_exactly() {
        let dataset = demo();
        let mut buffer = Vec::new();
        write_dataset_csv(&dataset, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        assert!(text.starts_with("f1,f2,truth\n"), "{text}");
        let back = read_dataset_csv(text.as_bytes()).unwrap();
        assert_eq!(back.data, dataset.data);
        assert_eq!(back.truth, dataset.truth);
    }

    #[test]
    fn truth_column_is_optional_on_read() {
        let text = "f1,f2\n1.0,2.0\n3.0,4.0\n";
        let dataset = read_dataset_csv(text.as_bytes()).unwrap();
        assert_eq!(dataset.truth, vec![0, 0]);
        assert_eq!(dataset.data.len(), 2);
    }

    #[test]
    fn malformed_datasets_are_rejected() {
        assert!(read_dataset_csv("".as_bytes()).is_err());
        assert!(read_dataset_csv("f1,truth\n".as_bytes()).is_err()); // no rows
        assert!(read_dataset_csv("truth\n1\n".as_bytes()).is_err()); // no features
        assert!(read_dataset_csv("a,b,truth\n1,2,0\n".as_bytes()).is_err()); // bad names
        assert!(read_dataset_csv("f1,f2,truth\n1.0,2.0\n".as_bytes()).is_err()); // short row
        assert!(read_dataset_csv("f1,truth\nx,0\n".as_bytes()).is_err()); // bad number
        assert!(read_dataset_csv("f1,truth\n1.0,-2\n".as_bytes()).is_err()); // bad label
    }

    #[test]
    fn projection_headers_follow_dimensionality() {
        let coords = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        let mut buffer = Vec::new();
        write_projection_csv(&coords, Some(&[0, 1]), &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        assert_eq!(text, "x,y,truth\n1,2,0\n3,4,1\n");

        let coords4 = vec![vec![1.0, 2.0, 3.0, 4.0]];
        let mut buffer = Vec::new();
        write_projection_csv(&coords4, None, &mut buffer).unwrap();
        assert!(String::from_utf8(buffer).unwrap().starts_with("x,y,z,c4\n"));
    }

    #[test]
    fn projection_label_shape_is_checked() {
        let coords = vec![vec![1.0], vec![2.0]];
        assert!(write_projection_csv(&coords, Some(&[0]), &mut Vec::new()).is_err());
    }
}
