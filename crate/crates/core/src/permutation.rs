//! Permutations of `{1..n}` and the counting facts used for locality accounting.
//!
//! Composition is right-to-left throughout the crate: `(p ∘ q)(i) = p(q(i))`.
//! Points are 1-based at the public surface (cycles, transpositions, adjacent
//! generator indices) and 0-based in the internal image table.

use std::fmt;

use crate::error::{check_size, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Builds a permutation from 1-based one-line notation.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n || seen[img - 1] {
                return Err(Error::domain(format!(
                    "{images:?} is not a bijection on 1..{n}"
                )));
            }
            seen[img - 1] = true;
            map.push(img - 1);
        }
        Ok(Permutation { map })
    }

    /// Builds a permutation of `{1..n}` from disjoint cycles (1-based points).
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (idx, &a) in cycle.iter().enumerate() {
                if a == 0 || a > n {
                    return Err(Error::domain(format!("point {a} outside 1..{n}")));
                }
                if touched[a - 1] {
                    return Err(Error::domain(format!("point {a} repeated in cycles")));
                }
                touched[a - 1] = true;
                let b = cycle[(idx + 1) % cycle.len()];
                if b == 0 || b > n {
                    return Err(Error::domain(format!("point {b} outside 1..{n}")));
                }
                map[a - 1] = b - 1;
            }
        }
        Ok(Permutation { map })
    }

    /// The transposition `(i j)` in `S_n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::domain(format!("transposition ({i} {j}) needs distinct points")));
        }
        Self::from_cycles(n, &[vec![i, j]])
    }

    /// The adjacent transposition `s_k = (k, k+1)`.
    pub fn adjacent(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::domain(format!("s_{k} undefined in S_{n}")));
        }
        Self::transposition(n, k, k + 1)
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Image of the 1-based point `i`.
    pub fn image(&self, i: usize) -> usize {
        self.map[i - 1] + 1
    }

    /// 1-based one-line notation.
    pub fn images(&self) -> Vec<usize> {
        self.map.iter().map(|&x| x + 1).collect()
    }

    /// 0-based image table.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        check_size(self.n(), q.n())?;
        Ok(self.compose_unchecked(q))
    }

    pub(crate) fn compose_unchecked(&self, q: &Permutation) -> Permutation {
        Permutation {
            map: q.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { map: inv }
    }

    /// Disjoint cycles of length ≥ 2, each starting at its minimum point,
    /// sorted by first point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.map[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.map[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Moved points, ascending and 1-based.
    pub fn support(&self) -> Vec<usize> {
        self.map
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i != x)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn locality(&self) -> usize {
        self.map.iter().enumerate().filter(|(i, &x)| *i != x).count()
    }

    /// Width of the smallest contiguous window of sites containing the support.
    pub fn span(&self) -> usize {
        let support = self.support();
        match (support.first(), support.last()) {
            (Some(lo), Some(hi)) => hi - lo + 1,
            _ => 0,
        }
    }

    /// Transpositions `[(a1 a2), (a2 a3), ...]` per cycle; their right-to-left
    /// product reproduces `self`. A cycle of length `m` contributes `m - 1`.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        self.cycles()
            .iter()
            .flat_map(|c| c.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>())
            .collect()
    }

    /// Word `[k1, ..., km]` with `self = s_k1 ∘ ... ∘ s_km`, obtained from a
    /// bubble sort of the one-line array. Its length is the inversion count.
    pub fn adjacent_word(&self) -> Vec<usize> {
        let mut a = self.map.clone();
        let mut swaps = Vec::new();
        let n = a.len();
        for pass in 0..n {
            let mut changed = false;
            for j in 0..n.saturating_sub(1 + pass) {
                if a[j] > a[j + 1] {
                    a.swap(j, j + 1);
                    swaps.push(j + 1);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // a ∘ s_j1 ∘ ... ∘ s_jm = id, so a = s_jm ∘ ... ∘ s_j1.
        swaps.reverse();
        swaps
    }

    pub fn inversions(&self) -> usize {
        let n = self.n();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.map[i] > self.map[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Adds a fixed point `n + 1`.
    pub fn extend(&self) -> Permutation {
        let mut map = self.map.clone();
        map.push(map.len());
        Permutation { map }
    }

    /// Parses `"[2,3,1]"` (one-line) or `"(1 2 3)(5 6)"` / `"()"` (cycles, needs `n`).
    pub fn parse(text: &str, n: Option<usize>) -> Result<Permutation> {
        let s = text.trim();
        if let Some(body) = s.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(format!("unterminated one-line form {s:?}")))?;
            let images = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(format!("bad point {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let p = Permutation::from_images(&images)?;
            if let Some(n) = n {
                check_size(n, p.n())?;
            }
            return Ok(p);
        }
        let n = n.ok_or_else(|| Error::parse(format!("cycle form {s:?} needs n")))?;
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::parse(format!("expected '(' in {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::parse(format!("unbalanced parentheses in {s:?}")))?;
            let cycle = open[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(format!("bad point {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
        Permutation::from_cycles(n, &cycles)
    }

    /// All of `S_n` in lexicographic one-line order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some((0..n).collect::<Vec<usize>>());
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut a = current.clone();
            if next_lex(&mut a) {
                next = Some(a);
            }
            Some(Permutation { map: current })
        })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

fn next_lex(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Composes 1-based transpositions right to left into a permutation of `S_n`.
pub fn recompose_transpositions(n: usize, word: &[(usize, usize)]) -> Result<Permutation> {
    let mut acc = Permutation::identity(n);
    for &(i, j) in word.iter() {
        acc = acc.compose(&Permutation::transposition(n, i, j)?)?;
    }
    Ok(acc)
}

/// Composes `s_k1 ∘ ... ∘ s_km`.
pub fn recompose_adjacent(n: usize, word: &[usize]) -> Result<Permutation> {
    let mut acc = Permutation::identity(n);
    for &k in word {
        acc = acc.compose(&Permutation::adjacent(n, k)?)?;
    }
    Ok(acc)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn subfactorial(l: u128) -> u128 {
    let (mut prev, mut cur) = (1u128, 0u128);
    if l == 0 {
        return 1;
    }
    for m in 2..=l {
        let next = (m - 1) * (cur + prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Number of permutations in `S_n` moving exactly `l` points: `C(n, l) · !l`.
/// `D_0 = 1`, `D_1 = 0`.
pub fn derangement_count(n: usize, l: usize) -> Result<u128> {
    if l > n {
        return Err(Error::domain(format!("support size {l} exceeds n = {n}")));
    }
    Ok(binomial(n as u128, l as u128) * subfactorial(l as u128))
}

/// `D_2 + ... + D_k`: the number of non-identity permutations moving at most `k` points.
pub fn count_k_local(n: usize, k: usize) -> Result<u128> {
    if k < 2 {
        return Ok(0);
    }
    if k > n {
        return Err(Error::domain(format!("locality {k} exceeds n = {n}")));
    }
    (2..=k).map(|l| derangement_count(n, l)).sum()
}

/// Every non-identity permutation of `S_n` moving at most `k` points, ordered by
/// support size, then support set, then one-line order.
pub fn k_local_permutations(n: usize, k: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    for l in 2..=k.min(n) {
        for subset in subsets(n, l) {
            for p in Permutation::all(l) {
                if p.map.iter().enumerate().any(|(i, &x)| i == x) {
                    continue;
                }
                let mut map: Vec<usize> = (0..n).collect();
                for (i, &x) in p.map.iter().enumerate() {
                    map[subset[i]] = subset[x];
                }
                out.push(Permutation { map });
            }
        }
    }
    out
}

fn subsets(n: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..l).collect();
    if l > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = l;
        while i > 0 && cur[i - 1] == n - l + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..l {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}
