//! Streamed ingestion of Sudoku corpora: CSV with `puzzle,solution` columns
//! holding 81-character strings, or bare 81-character lines. Invalid rows
//! are reported with their line numbers, never silently dropped.

use super::DatasetError;
use crate::sudoku::{parse_board, Board};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

/// One validated corpus row.
#[derive(Debug, Clone)]
pub struct CorpusRow {
    pub id: String,
    pub board: Board,
    /// The corpus's solution column, when present and validated.
    pub solution: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct IngestReport {
    /// Data rows read (the header, if any, is not counted).
    pub rows: u64,
    pub valid: u64,
    /// (1-based file line, reason) for every rejected row.
    pub invalid: Vec<(u64, String)>,
}

/// Reads a corpus file, validating every row. Fails once the invalid-row
/// count exceeds `max_invalid`.
pub fn ingest_sudoku(path: &Path, max_invalid: usize) -> Result<(Vec<CorpusRow>, IngestReport), DatasetError> {
    let file = File::open(path).map_err(|source| DatasetError::Io { path: path.to_path_buf(), source })?;
    let reader = BufReader::new(file);
    let mut rows = Vec::new();
    let mut report = IngestReport::default();
    let mut data_index = 0u64;

    for (line_idx, line) in reader.lines().enumerate() {
        let line_no = line_idx as u64 + 1;
        let line = line.map_err(|source| DatasetError::Io { path: path.to_path_buf(), source })?;
        let trimmed = line.trim_end_matches('\r');
        if trimmed.is_empty() {
            continue;
        }
        // A leading header like "puzzle,solution" is tolerated.
        if line_idx == 0 && trimmed.chars().any(|c| c.is_ascii_alphabetic()) {
            continue;
        }
        report.rows += 1;
        match ingest_row(trimmed, data_index) {
            Ok(row) => {
                rows.push(row);
                report.valid += 1;
                data_index += 1;
            }
            Err(reason) => {
                report.invalid.push((line_no, reason));
                if report.invalid.len() > max_invalid {
                    return Err(DatasetError::TooManyInvalid {
                        count: report.invalid.len(),
                        threshold: max_invalid,
                    });
                }
                data_index += 1;
            }
        }
    }
    Ok((rows, report))
}

fn ingest_row(row: &str, index: u64) -> Result<CorpusRow, String> {
    let (puzzle_text, solution_text) = match row.split_once(',') {
        Some((p, s)) => (p, Some(s)),
        None => (row, None),
    };
    let board = parse_board(puzzle_text).map_err(|e| e.to_string())?;
    let solution = match solution_text {
        Some(text) => {
            let solved = parse_board(text).map_err(|e| format!("solution column: {e}"))?;
            if !solved.is_solved() {
                return Err("solution column is not a solved grid".into());
            }
            for idx in 0..81 {
                let given = board.cells()[idx];
                if given != 0 && given != solved.cells()[idx] {
                    return Err(format!("solution contradicts the given at cell {idx}"));
                }
            }
            Some(text.to_string())
        }
        None => None,
    };
    Ok(CorpusRow { id: format!("sd-{index}"), board, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sudoku::{generate_board, BoardGenConfig};
    use std::io::Write;

    fn write_tmp(tag: &str, content: &str) -> std::path::PathBuf {
        let path = std::env::temp_dir().join(format!("searchtrace-ingest-{tag}-{}.csv", std::process::id()));
        let mut f = File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    fn sample_rows(n: u64) -> String {
        let mut out = String::from("puzzle,solution\n");
        for i in 0..n {
            let g = generate_board(77, i, &BoardGenConfig { target_givens: 30 });
            out.push_str(&format!("{},{}\n", g.board.to_line(), g.solution_line()));
        }
        out
    }

    #[test]
    fn valid_csv_ingests_fully() {
        let path = write_tmp("ok", &sample_rows(5));
        let (rows, report) = ingest_sudoku(&path, 0).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(report.valid, 5);
        assert!(report.invalid.is_empty());
        assert_eq!(rows[0].id, "sd-0");
        assert!(rows[0].solution.is_some());
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn short_row_is_flagged_with_its_line() {
        let mut content = sample_rows(2);
        content.push_str(&"1".repeat(80));
        content.push('\n');
        let path = write_tmp("short", &content);
        let (rows, report) = ingest_sudoku(&path, 5).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(report.invalid.len(), 1);
        assert_eq!(report.invalid[0].0, 4); // header + 2 rows + this one
        assert!(report.invalid[0].1.contains("81"));
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn threshold_aborts_ingestion() {
        let content = "puzzle,solution\nnot-a-board,also-not\n";
        let path = write_tmp("thresh", content);
        assert!(matches!(ingest_sudoku(&path, 0), Err(DatasetError::TooManyInvalid { .. })));
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn bare_lines_without_solutions_work() {
        let g = generate_board(78, 0, &BoardGenConfig { target_givens: 28 });
        let path = write_tmp("bare", &format!("{}\n", g.board.to_line()));
        let (rows, report) = ingest_sudoku(&path, 0).unwrap();
        assert_eq!(report.valid, 1);
        assert!(rows[0].solution.is_none());
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn solution_column_matches_the_oracle() {
        let path = write_tmp("oracle", &sample_rows(8));
        let (rows, _) = ingest_sudoku(&path, 0).unwrap();
        for row in &rows {
            let oracle = crate::sudoku::solve_oracle(&row.board).unwrap();
            let oracle_line: String = oracle.iter().map(|&v| char::from(b'0' + v)).collect();
            assert_eq!(row.solution.as_deref(), Some(oracle_line.as_str()), "{}", row.id);
        }
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn mismatched_solution_is_rejected() {
        let a = generate_board(79, 0, &BoardGenConfig { target_givens: 30 });
        let b = generate_board(79, 1, &BoardGenConfig { target_givens: 30 });
        let content = format!("puzzle,solution\n{},{}\n", a.board.to_line(), b.solution_line());
        let path = write_tmp("mismatch", &content);
        let (rows, report) = ingest_sudoku(&path, 5).unwrap();
        assert!(rows.is_empty());
        assert_eq!(report.invalid.len(), 1);
        let _ = std::fs::remove_file(&path);
    }
}
