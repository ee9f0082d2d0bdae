//! Periodic frieze windows over `Z/nZ`.
//!
//! A [`FriezeWindow`] stores one period of a frieze array: `m + 1` horizontal
//! rows of residues, cyclic in the column index.  Row `0` and row `m` are
//! expected to be identically zero, every diamond of four contiguous entries
//! should have determinant `1`, and every diamond of nine contiguous entries
//! should have determinant `0`.  The checks in this module report violations
//! of those local rules instead of panicking, so a window can be diagnosed
//! entry by entry.
//!
//! Windows can be rendered from semiclosed vertex paths (paths whose final
//! vertex is the negation of their first): the entry in row `d` and column
//! `i` is the pair determinant of the `i`-th and `(i + d)`-th vertices of the
//! quasi-periodic extension `v[j + m] = -v[j]`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::modring::mul_mod;
use crate::pathcount::Path;

/// Errors produced when constructing, parsing, or rendering a window.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FriezeError {
    /// The window data is structurally invalid (wrong shape or entries).
    #[error("malformed window: {0}")]
    Malformed(String),
    /// The path handed to the renderer does not end at the negation of its
    /// first vertex.
    #[error("path is not semiclosed: expected final vertex {expected}, found {found}")]
    NotSemiclosed { expected: String, found: String },
    /// The textual form could not be parsed; `line` is 1-based.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Which local rule a [`RuleViolation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    /// A 2x2 diamond whose determinant is not `1`.
    Diamond,
    /// A 3x3 diamond whose determinant is not `0`.
    Tame,
    /// A nonzero entry on row `0` or row `m`.
    Boundary,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RuleKind::Diamond => "diamond",
            RuleKind::Tame => "tame",
            RuleKind::Boundary => "boundary",
        };
        f.write_str(name)
    }
}

/// A single failed local rule, with enough data to recompute the offending
/// determinant.
///
/// `location` is the `(row, column)` anchor of the rule: the left entry of a
/// 2x2 diamond, the centre of a 3x3 diamond, or the offending boundary entry
/// itself.  `entries` lists the participating residues: `[left, top, bottom,
/// right]` for a 2x2 diamond, the nine entries of a 3x3 diamond in row-major
/// order, or the single boundary entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleViolation {
    pub rule: RuleKind,
    pub location: (u32, u32),
    pub entries: Vec<u64>,
}

/// One period of a frieze array over `Z/nZ`.
///
/// The window has `width + 1` rows, each holding `period` residues; the
/// column index is cyclic.  Serialises to JSON as
/// `{"n": .., "m": .., "period": .., "rows": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FriezeWindow {
    n: u64,
    #[serde(rename = "m")]
    width: u32,
    period: u32,
    rows: Vec<Vec<u64>>,
}

impl FriezeWindow {
    /// Builds a window from raw rows.
    ///
    /// Requires `n >= 2`, at least two rows, all rows of one common positive
    /// length, and every entry already reduced modulo `n`.  The local rules
    /// are *not* enforced here; use [`Self::check_boundary`],
    /// [`Self::check_diamond`], and [`Self::check_tame`] to diagnose them.
    pub fn new(n: u64, rows: Vec<Vec<u64>>) -> Result<Self, FriezeError> {
        if n < 2 {
            return Err(FriezeError::Malformed(format!(
                "modulus must be at least 2, got {n}"
            )));
        }
        if rows.len() < 2 {
            return Err(FriezeError::Malformed(format!(
                "a window needs at least 2 rows, got {}",
                rows.len()
            )));
        }
        let period = rows[0].len();
        if period == 0 {
            return Err(FriezeError::Malformed("rows must be nonempty".into()));
        }
        if period > u32::MAX as usize || rows.len() > u32::MAX as usize {
            return Err(FriezeError::Malformed("window too large".into()));
        }
        for (d, row) in rows.iter().enumerate() {
            if row.len() != period {
                return Err(FriezeError::Malformed(format!(
                    "row {d} has {} entries, expected {period}",
                    row.len()
                )));
            }
            for (i, &e) in row.iter().enumerate() {
                if e >= n {
                    return Err(FriezeError::Malformed(format!(
                        "entry {e} at row {d}, column {i} is not a residue modulo {n}"
                    )));
                }
            }
        }
        Ok(FriezeWindow {
            n,
            width: (rows.len() - 1) as u32,
            period: period as u32,
            rows,
        })
    }

    /// The modulus `n`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The width `m`; the window has `m + 1` rows.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// The number of stored columns; the column index wraps at this value.
    pub fn period(&self) -> u32 {
        self.period
    }

    /// The raw rows, indexed `0..=width`.
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// The entry in row `d` at cyclic column `i`.
    ///
    /// Panics if `d > width`; any integer column is accepted and wrapped.
    pub fn entry(&self, d: u32, i: i64) -> u64 {
        assert!(d <= self.width, "row {d} out of range 0..={}", self.width);
        let col = i.rem_euclid(i64::from(self.period)) as usize;
        self.rows[d as usize][col]
    }

    /// Reports every nonzero entry on row `0` and row `width`.
    pub fn check_boundary(&self) -> Vec<RuleViolation> {
        let mut violations = Vec::new();
        for d in [0, self.width] {
            for i in 0..self.period {
                let e = self.entry(d, i64::from(i));
                if e != 0 {
                    violations.push(RuleViolation {
                        rule: RuleKind::Boundary,
                        location: (d, i),
                        entries: vec![e],
                    });
                }
            }
            if self.width == 0 {
                break;
            }
        }
        violations
    }

    /// Reports every 2x2 diamond whose determinant is not `1`.
    ///
    /// The diamond anchored at `(d, i)` has left entry `E(d, i)`, top
    /// `E(d - 1, i + 1)`, bottom `E(d + 1, i)`, and right `E(d, i + 1)`; the
    /// rule asks for `left * right - top * bottom = 1` in `Z/nZ`.  Anchors
    /// range over rows `1..width` and all columns.
    pub fn check_diamond(&self) -> Vec<RuleViolation> {
        let mut violations = Vec::new();
        for d in 1..self.width {
            for i in 0..self.period {
                let col = i64::from(i);
                let left = self.entry(d, col);
                let top = self.entry(d - 1, col + 1);
                let bottom = self.entry(d + 1, col);
                let right = self.entry(d, col + 1);
                let pos = mul_mod(left, right, self.n);
                let neg = mul_mod(top, bottom, self.n);
                if (pos + self.n - neg) % self.n != 1 % self.n {
                    violations.push(RuleViolation {
                        rule: RuleKind::Diamond,
                        location: (d, i),
                        entries: vec![left, top, bottom, right],
                    });
                }
            }
        }
        violations
    }

    /// Reports every 3x3 diamond whose determinant is not `0`.
    ///
    /// The diamond centred at `(d, i + 1)` is the matrix
    /// `M[u][w] = E(d + w - u, i + u)` for `u, w` in `{0, 1, 2}`; its rows
    /// slide down-right across the window.  Centre rows range over
    /// `2..=width - 2`, so windows of width less than 4 have no 3x3 diamonds
    /// and pass vacuously.
    pub fn check_tame(&self) -> Vec<RuleViolation> {
        let mut violations = Vec::new();
        if self.width < 4 {
            return violations;
        }
        for d in 2..=self.width - 2 {
            for i in 0..self.period {
                let mut entries = Vec::with_capacity(9);
                for u in 0..3u32 {
                    for w in 0..3u32 {
                        entries.push(self.entry(d + w - u, i64::from(i) + i64::from(u)));
                    }
                }
                if det3_mod(&entries, self.n) != 0 {
                    violations.push(RuleViolation {
                        rule: RuleKind::Tame,
                        location: (d, i),
                        entries,
                    });
                }
            }
        }
        violations
    }

    /// Whether rows `1` and `width - 1` consist of `1`s only.
    ///
    /// Windows of width less than 2 are never regular.
    pub fn is_regular(&self) -> bool {
        if self.width < 2 {
            return false;
        }
        let ones = |row: &[u64]| row.iter().all(|&e| e == 1);
        ones(&self.rows[1]) && ones(&self.rows[self.width as usize - 1])
    }

    /// Renders the textual form: a header line
    /// `frieze n=<n> m=<m> period=<P>` followed by one line of `P`
    /// space-separated residues per row, top row first.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "frieze n={} m={} period={}\n",
            self.n, self.width, self.period
        );
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the textual form produced by [`Self::to_text`].
    ///
    /// The parse is strict: the header must carry exactly the three `key=value`
    /// fields in order, there must be exactly `m + 1` data lines of exactly
    /// `period` residues each, and every residue must be reduced modulo `n`.
    pub fn from_text(text: &str) -> Result<Self, FriezeError> {
        let parse_err = |line: usize, message: String| FriezeError::Parse { line, message };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "frieze" {
            return Err(parse_err(
                1,
                format!("expected header `frieze n=<n> m=<m> period=<P>`, got `{header}`"),
            ));
        }
        let field = |idx: usize, key: &str| -> Result<u64, FriezeError> {
            let prefix = format!("{key}=");
            let raw = fields[idx].strip_prefix(&prefix).ok_or_else(|| {
                parse_err(
                    1,
                    format!("expected `{key}=<value>`, got `{}`", fields[idx]),
                )
            })?;
            raw.parse::<u64>()
                .map_err(|_| parse_err(1, format!("invalid value for `{key}`: `{raw}`")))
        };
        let n = field(1, "n")?;
        let m = field(2, "m")?;
        let period = field(3, "period")?;
        if period == 0 || period > u32::MAX as u64 || m > u32::MAX as u64 - 1 {
            return Err(parse_err(1, "header dimensions out of range".into()));
        }

        let mut rows = Vec::with_capacity(m as usize + 1);
        for d in 0..=m {
            let (idx, line) = lines.next().ok_or_else(|| {
                parse_err(
                    d as usize + 2,
                    format!("missing row {d}: expected {} data lines", m + 1),
                )
            })?;
            let mut row = Vec::with_capacity(period as usize);
            for token in line.split_whitespace() {
                let e: u64 = token
                    .parse()
                    .map_err(|_| parse_err(idx + 1, format!("invalid residue `{token}`")))?;
                row.push(e);
            }
            if row.len() != period as usize {
                return Err(parse_err(
                    idx + 1,
                    format!("row {d} has {} entries, expected {period}", row.len()),
                ));
            }
            rows.push(row);
        }
        if let Some((idx, line)) = lines.next() {
            if !line.trim().is_empty() {
                return Err(parse_err(
                    idx + 1,
                    format!("unexpected trailing data `{line}`"),
                ));
            }
            if let Some((extra, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
                return Err(parse_err(extra + 1, "unexpected trailing data".into()));
            }
        }
        let window = FriezeWindow::new(n, rows).map_err(|e| parse_err(1, e.to_string()))?;
        Ok(window)
    }

    /// Serialises the window as one line of JSON with fields
    /// `n`, `m`, `period`, and `rows`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("window serialisation cannot fail")
    }
}

/// Determinant of a 3x3 matrix of residues (row-major), reduced modulo `n`.
fn det3_mod(m: &[u64], n: u64) -> u64 {
    assert_eq!(m.len(), 9);
    let term = |a: u64, b: u64, c: u64| mul_mod(mul_mod(a, b, n), c, n);
    let add = |x: u64, y: u64| (x + y) % n;
    let pos = add(
        add(term(m[0], m[4], m[8]), term(m[1], m[5], m[6])),
        term(m[2], m[3], m[7]),
    );
    let neg = add(
        add(term(m[2], m[4], m[6]), term(m[1], m[3], m[8])),
        term(m[0], m[5], m[7]),
    );
    (pos + n - neg) % n
}

/// Renders the frieze window determined by a semiclosed path.
///
/// The path must end at the negation of its first vertex.  Its vertex
/// sequence `v[0..=m]` is extended by the rule `v[j + m] = -v[j]`, and the
/// window entry in row `d`, column `i` is the pair determinant
/// `det(v[i], v[i + d])`.  The resulting window has width `m` and carries
/// `periods` copies of the fundamental period `2 m`, so its stored period is
/// `2 * m * periods`.  Requires `periods >= 1`.
pub fn render_from_path(path: &Path, periods: u32) -> Result<FriezeWindow, FriezeError> {
    assert!(periods >= 1, "at least one period must be rendered");
    let n = path.modulus();
    let m = path.length();
    let expected = path.first().negate();
    if *path.last() != expected {
        return Err(FriezeError::NotSemiclosed {
            expected: expected.to_string(),
            found: path.last().to_string(),
        });
    }
    let vs = path.vertices();
    // v[j + m] = -v[j] extends the path to a bi-infinite quasi-periodic
    // sequence with true period 2m; `ext` reads it without materialising.
    let ext = |j: usize| -> (u64, u64) {
        let v = vs[j % m];
        if (j / m) % 2 == 1 {
            let w = v.negate();
            (w.a(), w.b())
        } else {
            (v.a(), v.b())
        }
    };
    let span = 2 * m * periods as usize;
    assert!(span <= u32::MAX as usize, "window too large");
    let mut rows = Vec::with_capacity(m + 1);
    for d in 0..=m {
        let mut row = Vec::with_capacity(span);
        for i in 0..span {
            let (a1, b1) = ext(i);
            let (a2, b2) = ext(i + d);
            let pos = mul_mod(a1, b2, n);
            let neg = mul_mod(b1, a2, n);
            row.push((pos + n - neg) % n);
        }
        rows.push(row);
    }
    let window = FriezeWindow::new(n, rows).expect("rendered rows are well formed");
    debug_assert!(window.check_boundary().is_empty());
    debug_assert!(window.check_diamond().is_empty());
    debug_assert!(window.check_tame().is_empty());
    Ok(window)
}

/// A hand-checked tame window over `Z/5Z` of width 6 and period 4, used as
/// golden data by the test suites.  It satisfies the boundary, diamond, and
/// tame rules but is not regular: its second-last row is not all `1`s.
pub fn reference_window_z5() -> FriezeWindow {
    FriezeWindow::new(
        5,
        vec![
            vec![0, 0, 0, 0],
            vec![1, 1, 1, 1],
            vec![2, 4, 3, 1],
            vec![2, 1, 2, 1],
            vec![4, 2, 1, 3],
            vec![2, 3, 2, 3],
            vec![0, 0, 0, 0],
        ],
    )
    .expect("reference window is well formed")
}
