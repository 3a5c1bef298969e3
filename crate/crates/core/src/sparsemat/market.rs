//! Matrix Market coordinate format (real, general or symmetric).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{SparseMatrix, TripletBuffer};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix_market(BufReader::new(file), path)
}

/// Parses from any reader; `origin` only labels error messages.
pub fn parse_matrix_market<R: BufRead>(reader: R, origin: &Path) -> Result<SparseMatrix> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };

    let mut lines = reader.lines().enumerate().map(|(k, l)| (k + 1, l));

    let (lineno, header) = match lines.next() {
        Some((k, Ok(l))) => (k, l),
        Some((_, Err(source))) => {
            return Err(Error::Io {
                path: origin.to_path_buf(),
                source,
            })
        }
        None => return Err(parse_err(1, "empty file".into())),
    };
    let symmetry = parse_header(&header).map_err(|m| parse_err(lineno, m))?;

    let mut dims: Option<(usize, usize, usize)> = None;
    let mut buffer: Option<TripletBuffer> = None;
    let mut seen = 0usize;

    for (lineno, line) in lines {
        let line = line.map_err(|source| Error::Io {
            path: origin.to_path_buf(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match dims {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(
                        lineno,
                        format!("expected 'rows cols nnz', found {trimmed:?}"),
                    ));
                }
                let parse_count = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| parse_err(lineno, format!("invalid size field {s:?}")))
                };
                let (r, c, nnz) = (
                    parse_count(fields[0])?,
                    parse_count(fields[1])?,
                    parse_count(fields[2])?,
                );
                if symmetry == Symmetry::Symmetric && r != c {
                    return Err(parse_err(
                        lineno,
                        format!("symmetric matrix must be square, got {r}x{c}"),
                    ));
                }
                let cap = if symmetry == Symmetry::Symmetric {
                    2 * nnz
                } else {
                    nnz
                };
                buffer = Some(TripletBuffer::with_capacity(r, c, cap));
                dims = Some((r, c, nnz));
            }
            Some((nrows, ncols, nnz)) => {
                if fields.len() != 3 {
                    return Err(parse_err(
                        lineno,
                        format!("expected 'row col value', found {trimmed:?}"),
                    ));
                }
                if seen == nnz {
                    return Err(parse_err(
                        lineno,
                        format!("more entries than the declared {nnz}"),
                    ));
                }
                let parse_index = |s: &str, limit: usize, what: &str| -> Result<usize> {
                    let idx = s
                        .parse::<usize>()
                        .map_err(|_| parse_err(lineno, format!("invalid {what} index {s:?}")))?;
                    if idx == 0 || idx > limit {
                        return Err(parse_err(
                            lineno,
                            format!("{what} index {idx} out of bounds 1..={limit}"),
                        ));
                    }
                    Ok(idx - 1)
                };
                let i = parse_index(fields[0], nrows, "row")?;
                let j = parse_index(fields[1], ncols, "column")?;
                let v: f64 = fields[2]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("invalid value {:?}", fields[2])))?;
                let buf = buffer.as_mut().expect("buffer allocated with dims");
                buf.push(i, j, v)?;
                if symmetry == Symmetry::Symmetric && i != j {
                    buf.push(j, i, v)?;
                }
                seen += 1;
            }
        }
    }

    match (dims, buffer) {
        (Some((_, _, nnz)), Some(buf)) => {
            if seen != nnz {
                return Err(parse_err(
                    0,
                    format!("declared {nnz} entries but found {seen}"),
                ));
            }
            Ok(buf.into_matrix())
        }
        _ => Err(parse_err(0, "missing size line".into())),
    }
}

fn parse_header(header: &str) -> std::result::Result<Symmetry, String> {
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(format!("missing %%MatrixMarket banner in {header:?}"));
    }
    if tokens.len() != 5 {
        return Err(format!("malformed header {header:?}"));
    }
    if tokens[1] != "matrix" {
        return Err(format!("unsupported object {:?}", tokens[1]));
    }
    if tokens[2] != "coordinate" {
        return Err(format!(
            "unsupported format {:?} (only coordinate)",
            tokens[2]
        ));
    }
    if tokens[3] != "real" {
        return Err(format!("unsupported field {:?} (only real)", tokens[3]));
    }
    match tokens[4].as_str() {
        "general" => Ok(Symmetry::General),
        "symmetric" => Ok(Symmetry::Symmetric),
        other => Err(format!("unsupported symmetry {other:?}")),
    }
}

pub fn write_matrix_market(m: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    write_matrix_market_to(m, &mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

/// Full storage, entries sorted by (row, col), 17 significant digits.
pub fn write_matrix_market_to<W: Write>(m: &SparseMatrix, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for (i, j, v) in m.triplets() {
        writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<SparseMatrix> {
        parse_matrix_market(Cursor::new(text), Path::new("<mem>"))
    }

    #[test]
    fn symmetric_file_is_expanded() {
        let m = parse(
            "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 3\n1 1 2.0\n2 1 -1.0\n2 2 2.0\n",
        )
        .unwrap();
        assert_eq!(m.to_dense(), vec![2.0, -1.0, -1.0, 2.0]);
        // with only the two listed entries the (2, 2) slot stays empty
        let m =
            parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 2.0\n2 1 -1.0\n")
                .unwrap();
        assert_eq!(m.to_dense(), vec![2.0, -1.0, -1.0, 0.0]);
    }

    #[test]
    fn empty_coordinate_section_is_zero_matrix() {
        let m = parse("%%MatrixMarket matrix coordinate real general\n3 3 0\n").unwrap();
        assert_eq!(m, SparseMatrix::zeros(3, 3));
    }

    #[test]
    fn duplicates_match_triplet_sum() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 4\n1 2 1.0\n1 2 2.5\n2 2 3\n1 2 -0.5\n";
        let m = parse(text).unwrap();
        let mut oracle = TripletBuffer::new(2, 2);
        for (i, j, v) in [(0, 1, 1.0), (0, 1, 2.5), (1, 1, 3.0), (0, 1, -0.5)] {
            oracle.push(i, j, v).unwrap();
        }
        assert_eq!(m, oracle.into_matrix());
        assert_eq!(m.get(0, 1), 3.0);
    }

    fn parse_error_line(text: &str) -> usize {
        match parse(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs_report_line_numbers() {
        assert_eq!(
            parse_error_line("%%MatrixMarket matrix array real general\n"),
            1
        );
        assert_eq!(
            parse_error_line("%%MatrixMarket matrix coordinate complex general\n1 1 0\n"),
            1
        );
        assert_eq!(
            parse_error_line("%%MatrixMarket matrix coordinate pattern general\n1 1 0\n"),
            1
        );
        assert_eq!(
            parse_error_line(
                "%%MatrixMarket matrix coordinate real general\n% c\n2 2 1\n3 1 1.0\n"
            ),
            4
        );
        assert_eq!(
            parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 0 1.0\n"),
            3
        );
        assert_eq!(
            parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 abc\n"),
            3
        );
        assert_eq!(parse_error_line("hello\n"), 1);
        assert_eq!(
            parse_error_line("%%MatrixMarket matrix coordinate real symmetric\n2 3 0\n"),
            2
        );
    }

    #[test]
    fn entry_count_must_match() {
        assert!(parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n").is_err());
        assert!(
            parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n2 2 1.0\n")
                .is_err()
        );
    }

    #[test]
    fn writer_emits_sorted_full_precision() {
        let m = SparseMatrix::from_rows(&[&[0.1, 0.0], &[-1.0 / 3.0, 2.0]]).unwrap();
        let mut out = Vec::new();
        write_matrix_market_to(&m, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "%%MatrixMarket matrix coordinate real general");
        assert_eq!(lines[1], "2 2 3");
        assert!(lines[2].starts_with("1 1 1.0000000000000001e-1"));
        assert!(lines[3].starts_with("2 1 -3.3333333333333331e-1"));
        assert_eq!(parse(&text).unwrap(), m);
    }
}
