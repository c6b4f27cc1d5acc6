//! Partitions, standard Young tableaux, and the two dimension formulas that
//! pair up under Schur-Weyl duality.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permutation::factorial;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!("{parts:?} is not a partition")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn columns(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Rows whose last cell can be removed, bottom row first.
    pub fn removable_rows(&self) -> Vec<usize> {
        (0..self.rows())
            .rev()
            .filter(|&r| r + 1 == self.rows() || self.parts[r] > self.parts[r + 1])
            .collect()
    }

    pub fn remove_from_row(&self, row: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts[row] -= 1;
        Partition::new(parts).expect("removing a corner keeps a partition")
    }

    /// Parses `"3+2+1"` or `"6=3+2+1"`.
    pub fn parse(text: &str) -> Result<Partition> {
        let s = text.trim();
        let (total, body) = match s.split_once('=') {
            Some((lhs, rhs)) => (
                Some(
                    lhs.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(format!("bad size in {s:?}")))?,
                ),
                rhs,
            ),
            None => (None, s),
        };
        let parts = body
            .split(['+', ','])
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let p = Partition::new(parts)?;
        if let Some(total) = total {
            if total != p.n() {
                return Err(Error::parse(format!("parts of {s:?} do not sum to {total}")));
            }
        }
        Ok(p)
    }

    /// Hook-length formula `n! / ∏ h(i, j)`.
    pub fn hook_length_dimension(&self) -> u128 {
        let mut hooks: u128 = 1;
        for (i, &len) in self.parts.iter().enumerate() {
            for j in 0..len {
                let arm = len - j - 1;
                let leg = self.parts[i + 1..].iter().filter(|&&l| l > j).count();
                hooks *= (arm + leg + 1) as u128;
            }
        }
        factorial(self.n()) / hooks
    }

    /// Dimension of the `SU(d)` irrep `W_λ`:
    /// `∏_{i<j≤d} (λ_i − λ_j + j − i) / (j − i)` with `λ` zero-padded to length `d`.
    pub fn weyl_dimension(&self, d: usize) -> Result<u128> {
        if self.rows() > d {
            return Err(Error::domain(format!(
                "{self} has {} rows, more than d = {d}",
                self.rows()
            )));
        }
        let padded: Vec<i128> = (0..d)
            .map(|i| self.parts.get(i).copied().unwrap_or(0) as i128)
            .collect();
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        for i in 0..d {
            for j in i + 1..d {
                num *= padded[i] - padded[j] + (j - i) as i128;
                den *= (j - i) as i128;
                let g = gcd(num, den);
                num /= g;
                den /= g;
            }
        }
        debug_assert_eq!(den, 1);
        Ok((num / den) as u128)
    }

    /// Standard tableaux in last-letter order: grouped by the row holding `n`
    /// (bottom corner first), recursively on `n − 1`.
    pub fn standard_tableaux(&self) -> Vec<StandardTableau> {
        if self.n() == 0 {
            return vec![StandardTableau {
                shape: self.clone(),
                rows: Vec::new(),
            }];
        }
        let n = self.n();
        let mut out = Vec::new();
        for row in self.removable_rows() {
            let smaller = self.remove_from_row(row);
            for t in smaller.standard_tableaux() {
                let mut rows = t.rows.clone();
                if rows.len() <= row {
                    rows.push(Vec::new());
                }
                rows[row].push(n);
                out.push(StandardTableau {
                    shape: self.clone(),
                    rows,
                });
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}={}", self.n(), parts.join("+"))
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.max(1)
}

/// Partitions of `n` with at most `max_rows` parts, reverse-lexicographic.
pub fn enumerate_partitions(n: usize, max_rows: usize) -> Vec<Partition> {
    fn rec(rem: usize, max_part: usize, rows_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if rows_left == 0 {
            return;
        }
        for part in (1..=rem.min(max_part)).rev() {
            cur.push(part);
            rec(rem - part, part, rows_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_rows, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StandardTableau {
    #[serde(skip)]
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len()).collect())?;
        let n = shape.n();
        let mut seen = vec![false; n + 1];
        for r in &rows {
            for &x in r {
                if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::domain(format!("{rows:?} is not a filling by 1..{n}")));
                }
            }
        }
        for (i, r) in rows.iter().enumerate() {
            if r.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::domain(format!("row {i} of {rows:?} not increasing")));
            }
            if i > 0 && r.iter().enumerate().any(|(j, &x)| rows[i - 1][j] >= x) {
                return Err(Error::domain(format!("column below row {i} of {rows:?} not increasing")));
            }
        }
        Ok(StandardTableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// `(row, column)` of entry `k`, both 0-based.
    pub fn position(&self, k: usize) -> (usize, usize) {
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(j) = r.iter().position(|&x| x == k) {
                return (i, j);
            }
        }
        panic!("entry {k} not in tableau {:?}", self.rows)
    }

    /// Column minus row of the cell holding `k`.
    pub fn content(&self, k: usize) -> i64 {
        let (r, c) = self.position(k);
        c as i64 - r as i64
    }

    /// Contents of entries `1..=n` in order.
    pub fn content_vector(&self) -> Vec<i64> {
        (1..=self.shape.n()).map(|k| self.content(k)).collect()
    }

    /// `content(k + 1) − content(k)`.
    pub fn axial_distance(&self, k: usize) -> i64 {
        self.content(k + 1) - self.content(k)
    }

    /// The filling with `k` and `k + 1` exchanged, if it is still standard.
    pub fn swap_entries(&self, k: usize) -> Option<StandardTableau> {
        let rows: Vec<Vec<usize>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| match x {
                        x if x == k => k + 1,
                        x if x == k + 1 => k,
                        x => x,
                    })
                    .collect()
            })
            .collect();
        StandardTableau::from_rows(rows).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub partition: Partition,
    pub dim_sn: u128,
    pub dim_sud: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchurWeylReport {
    pub n: usize,
    pub d: usize,
    pub rows: Vec<DimensionRow>,
    pub total: u128,
    pub expected: u128,
    pub consistent: bool,
}

/// Checks `Σ_λ dim W_λ · dim S^λ = d^n` over partitions with at most `d` rows.
pub fn schur_weyl_dimension_check(n: usize, d: usize) -> Result<SchurWeylReport> {
    if n == 0 || d == 0 {
        return Err(Error::domain("n and d must be positive"));
    }
    let rows: Vec<DimensionRow> = enumerate_partitions(n, d)
        .into_iter()
        .map(|p| {
            let dim_sud = p.weyl_dimension(d)?;
            Ok(DimensionRow {
                dim_sn: p.hook_length_dimension(),
                dim_sud,
                partition: p,
            })
        })
        .collect::<Result<_>>()?;
    let total = rows.iter().map(|r| r.dim_sn * r.dim_sud).sum();
    let expected = (d as u128).pow(n as u32);
    Ok(SchurWeylReport {
        n,
        d,
        consistent: total == expected,
        rows,
        total,
        expected,
    })
}
