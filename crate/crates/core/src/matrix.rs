//! Cost matrices and injective assignments.
//!
//! A rectangular `n x m` matrix of finite reals hosts the assignment process:
//! each injective map of rows into columns selects one entry per row and the
//! process value is their sum. This module holds the representation, the sum
//! evaluation, an exhaustive enumeration oracle for small instances, and the
//! elementary row-maxima upper bound.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default cap on the number of injections the exhaustive oracle will visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Rectangular real matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    m: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    /// Builds an `n x m` matrix from row-major entries. All entries must be
    /// finite and both dimensions at least 1.
    pub fn new(n: usize, m: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix must have n, m >= 1, got {n}x{m}"
            )));
        }
        if entries.len() != n * m {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {n}x{m} matrix, got {}",
                n * m,
                entries.len()
            )));
        }
        for (k, &x) in entries.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteEntry {
                    row: k / m + 1,
                    col: k % m + 1,
                });
            }
        }
        Ok(Self { n, m, entries })
    }

    /// Builds a matrix from a list of equal-length rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("matrix has no rows".into()));
        }
        let m = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
        }
        Self::new(n, m, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    /// Entry at 0-based `(i, j)`.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.m + j]
    }

    /// Row `i` as a contiguous slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.m..(i + 1) * self.m]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Transposed copy: entry `(i, j)` of the output is entry `(j, i)` of `self`.
    pub fn transpose(&self) -> CostMatrix {
        let mut out = vec![0.0; self.entries.len()];
        for i in 0..self.n {
            for j in 0..self.m {
                out[j * self.n + i] = self.entry(i, j);
            }
        }
        CostMatrix {
            n: self.m,
            m: self.n,
            entries: out,
        }
    }

    /// Entry-wise negation.
    pub fn negate(&self) -> CostMatrix {
        CostMatrix {
            n: self.n,
            m: self.m,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// Parses the headerless CSV form: one row per line, comma-separated
    /// decimal literals. Errors carry 1-based line and field positions.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for (fieldno, field) in line.split(',').enumerate() {
                let x: f64 = field.trim().parse().map_err(|_| Error::MatrixParse {
                    line: lineno + 1,
                    col: fieldno + 1,
                    msg: format!("cannot parse {:?} as a number", field.trim()),
                })?;
                if !x.is_finite() {
                    return Err(Error::MatrixParse {
                        line: lineno + 1,
                        col: fieldno + 1,
                        msg: "entry is not finite".into(),
                    });
                }
                row.push(x);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::MatrixParse {
                line: 1,
                col: 1,
                msg: "empty matrix file".into(),
            });
        }
        let m = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::MatrixParse {
                    line: i + 1,
                    col: row.len().min(m) + 1,
                    msg: format!("row has {} fields, expected {m}", row.len()),
                });
            }
        }
        Self::from_rows(&rows)
    }

    /// Parses the structured form: `{"n": .., "m": .., "data": [..]}` with
    /// `data` flat row-major.
    pub fn parse_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            n: usize,
            m: usize,
            data: Vec<f64>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::MatrixParse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })?;
        Self::new(doc.n, doc.m, doc.data)
    }

    /// Sniffs the format: structured text when the first non-blank byte is
    /// `{`, CSV otherwise.
    pub fn parse_auto(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_csv(text)
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            n: usize,
            m: usize,
            data: &'a [f64],
        }
        serde_json::to_string(&Doc {
            n: self.n,
            m: self.m,
            data: &self.entries,
        })
        .expect("matrix serializes")
    }
}

/// Injective assignment of rows `1..=n` to distinct columns of `1..=m`.
///
/// Stored 0-based; external formats use 1-based column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedPermutation {
    assignment: Vec<usize>,
    cols: usize,
}

impl GeneralizedPermutation {
    /// Validates a 0-based assignment array against `m` columns.
    pub fn new(assignment: Vec<usize>, m: usize) -> Result<Self> {
        let mut used = vec![false; m];
        for &j in &assignment {
            if j >= m {
                return Err(Error::ColumnOutOfRange {
                    index: j + 1,
                    max: m,
                });
            }
            if used[j] {
                return Err(Error::NotInjective(j + 1));
            }
            used[j] = true;
        }
        Ok(Self {
            assignment,
            cols: m,
        })
    }

    /// Validates a 1-based assignment array against `m` columns.
    pub fn from_one_based(assignment: &[usize], m: usize) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(assignment.len());
        for &j in assignment {
            if j == 0 || j > m {
                return Err(Error::ColumnOutOfRange { index: j, max: m });
            }
            zero_based.push(j - 1);
        }
        Self::new(zero_based, m)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 0-based column assigned to 0-based row `i`.
    #[inline]
    pub fn column(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.assignment
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.assignment.iter().map(|&j| j + 1).collect()
    }
}

impl fmt::Display for GeneralizedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|j| j.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Max,
    Min,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Max => "max",
            Objective::Min => "min",
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Objective::Max),
            "min" => Ok(Objective::Min),
            other => Err(Error::InvalidParameter(format!(
                "objective must be 'max' or 'min', got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An assignment together with its process value and the direction it
/// optimizes. `value` always equals `evaluate(matrix, permutation)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult {
    pub value: f64,
    pub permutation: GeneralizedPermutation,
    pub objective: Objective,
}

/// Process value of one assignment: the sum of the selected entries, taken in
/// row order.
pub fn evaluate(matrix: &CostMatrix, perm: &GeneralizedPermutation) -> Result<f64> {
    if perm.len() != matrix.rows() || perm.cols() != matrix.cols() {
        return Err(Error::DimensionMismatch(format!(
            "permutation of shape {}->{} does not fit a {}x{} matrix",
            perm.len(),
            perm.cols(),
            matrix.rows(),
            matrix.cols()
        )));
    }
    let mut sum = 0.0;
    for i in 0..perm.len() {
        sum += matrix.entry(i, perm.column(i));
    }
    Ok(sum)
}

/// Sum of the rowwise maxima; an upper bound for the value of every
/// assignment.
pub fn row_maxima_sum(matrix: &CostMatrix) -> f64 {
    (0..matrix.rows())
        .map(|i| {
            matrix
                .row(i)
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .sum()
}

/// Number of injective maps from `n` rows into `m` columns: the falling
/// factorial `m! / (m-n)!`.
pub fn injection_count(n: usize, m: usize) -> u128 {
    let mut count: u128 = 1;
    for k in 0..n {
        count = count.saturating_mul((m - k) as u128);
    }
    count
}

/// Iterator over every injective assignment of `n` rows into `m` columns, in
/// lexicographic order of the 0-based assignment array.
pub struct InjectionIter {
    n: usize,
    m: usize,
    current: Vec<usize>,
    used: Vec<bool>,
    done: bool,
    started: bool,
}

impl InjectionIter {
    fn first(n: usize, m: usize) -> Self {
        let current: Vec<usize> = (0..n).collect();
        let mut used = vec![false; m];
        for &j in &current {
            used[j] = true;
        }
        Self {
            n,
            m,
            current,
            used,
            done: false,
            started: false,
        }
    }

    // Advance position i to its next free column strictly above its current
    // value, backtracking when none exists.
    fn advance(&mut self) -> bool {
        let mut i = self.n;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            let old = self.current[i];
            self.used[old] = false;
            if let Some(next) = (old + 1..self.m).find(|&j| !self.used[j]) {
                self.current[i] = next;
                self.used[next] = true;
                // Fill the suffix with the smallest free columns.
                for k in i + 1..self.n {
                    let j = (0..self.m).find(|&j| !self.used[j]).expect("free column");
                    self.current[k] = j;
                    self.used[j] = true;
                }
                return true;
            }
        }
    }
}

impl Iterator for InjectionIter {
    type Item = GeneralizedPermutation;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(GeneralizedPermutation {
            assignment: self.current.clone(),
            cols: self.m,
        })
    }
}

/// Enumerates all injections of `n` rows into `m` columns (requires `n <= m`
/// and a total count within `cap`).
pub fn enumerate_injections(n: usize, m: usize, cap: u128) -> Result<InjectionIter> {
    if n == 0 || m == 0 || n > m {
        return Err(Error::DimensionMismatch(format!(
            "injections need 1 <= n <= m, got n={n}, m={m}"
        )));
    }
    let count = injection_count(n, m);
    if count > cap {
        return Err(Error::EnumerationCapExceeded { count, cap });
    }
    Ok(InjectionIter::first(n, m))
}

/// Exact optimum over all injective assignments by exhaustive enumeration.
///
/// Ties are broken toward the lexicographically smallest assignment array
/// (the enumeration order guarantees the first optimum seen is that one).
/// Requires `n <= m`; transpose first otherwise.
pub fn brute_force_optimum(matrix: &CostMatrix, objective: Objective) -> Result<AssignmentResult> {
    let iter = enumerate_injections(matrix.rows(), matrix.cols(), DEFAULT_ENUMERATION_CAP)?;
    let mut best: Option<(f64, GeneralizedPermutation)> = None;
    for perm in iter {
        let value = evaluate(matrix, &perm)?;
        let better = match (&best, objective) {
            (None, _) => true,
            (Some((b, _)), Objective::Max) => value > *b,
            (Some((b, _)), Objective::Min) => value < *b,
        };
        if better {
            best = Some((value, perm));
        }
    }
    let (value, permutation) = best.expect("at least one injection exists");
    Ok(AssignmentResult {
        value,
        permutation,
        objective,
    })
}
