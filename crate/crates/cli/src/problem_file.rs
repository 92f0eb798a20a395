//! Plain-text problem files.
//!
//! ```text
//! m n
//! <m lines of n whitespace-separated entries of A>
//! <one line of m entries of y>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use lasso_screen::Dictionary;

pub fn parse_problem(text: &str) -> Result<(Dictionary, Vec<f64>), String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let numbers = |(number, line): (usize, &str)| -> Result<Vec<f64>, String> {
        line.split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| format!("line {number}: '{tok}' is not a number"))
            })
            .collect()
    };

    let (number, header) = lines.next().ok_or("empty problem file")?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("line {number}: expected 'm n'"))?;
    let [m, n] = dims[..] else {
        return Err(format!("line {number}: expected 'm n'"));
    };
    if m == 0 || n == 0 {
        return Err(format!("line {number}: dimensions must be positive"));
    }

    let mut rows = Vec::with_capacity(m * n);
    for r in 0..m {
        let line = lines.next().ok_or(format!("missing row {} of A", r + 1))?;
        let number = line.0;
        let row = numbers(line)?;
        if row.len() != n {
            return Err(format!(
                "line {number}: expected {n} entries, found {}",
                row.len()
            ));
        }
        rows.extend(row);
    }
    let line = lines.next().ok_or("missing observation line")?;
    let number = line.0;
    let y = numbers(line)?;
    if y.len() != m {
        return Err(format!(
            "line {number}: expected {m} observation entries, found {}",
            y.len()
        ));
    }
    if let Some((number, _)) = lines.next() {
        return Err(format!("line {number}: unexpected trailing content"));
    }
    if rows.iter().chain(&y).any(|v| !v.is_finite()) {
        return Err("entries must be finite".into());
    }
    let a = Dictionary::from_row_major(m, n, &rows).map_err(|e| e.to_string())?;
    Ok((a, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_small_problem() {
        let (a, y) = parse_problem("# toy\n2 3\n1 0 2\n0 1 3\n\n1 0\n").unwrap();
        assert_eq!((a.nrows(), a.ncols()), (2, 3));
        assert_eq!(a.column(2), &[2.0, 3.0]);
        assert_eq!(y, vec![1.0, 0.0]);
    }

    #[test]
    fn rejects_malformed_files() {
        for bad in [
            "",
            "2\n",
            "1 2\n1\n1\n",
            "1 1\n1\n",
            "1 1\nx\n1\n",
            "1 1\n1\n1\n1\n",
            "1 1\nnan\n1\n",
        ] {
            assert!(parse_problem(bad).is_err(), "{bad:?}");
        }
    }
}
