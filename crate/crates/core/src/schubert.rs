//! Classical Schubert calculus on the Grassmannian `Gr(r, n)`.
//!
//! Basis elements are labelled two ways: by a partition fitting in the
//! `r × (n − r)` box (the codimension label) and by an `r`-subset of
//! `{1, …, n}` (the Schubert condition `dim(W ∩ F_{i_j}) ≥ j`). The two are
//! related by `λ_k = n − r + k − i_k`, so `{1, …, r}` is the point class and
//! `{n − r + 1, …, n}` is the fundamental class.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};

/// A partition inside the `rows × cols` box, stored without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Partition {
    parts: Vec<usize>,
    #[serde(skip)]
    rows: usize,
    #[serde(skip)]
    cols: usize,
}

impl Partition {
    pub fn new(parts: &[usize], rows: usize, cols: usize) -> Result<Self> {
        let mut parts: Vec<usize> = parts.to_vec();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.len() > rows {
            return Err(Error::validation(format!(
                "partition {parts:?} has more than {rows} rows"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::validation(format!(
                "partition {parts:?} is not weakly decreasing"
            )));
        }
        if parts.first().is_some_and(|&p| p > cols) {
            return Err(Error::validation(format!("partition {parts:?} exceeds {cols} columns")));
        }
        Ok(Partition { parts, rows, cols })
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Partition {
            parts: Vec::new(),
            rows,
            cols,
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Parts padded with zeros to exactly `rows` entries.
    pub fn padded(&self) -> Vec<usize> {
        let mut p = self.parts.clone();
        p.resize(self.rows, 0);
        p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Complement in the box, rotated by 180 degrees.
    pub fn complement(&self) -> Partition {
        let padded = self.padded();
        let parts: Vec<usize> = padded.iter().rev().map(|&p| self.cols - p).collect();
        Partition::new(&parts, self.rows, self.cols).expect("complement stays in the box")
    }

    pub fn to_index(&self) -> SchubertIndex {
        let n = self.rows + self.cols;
        let indices = self
            .padded()
            .iter()
            .enumerate()
            .map(|(k, &p)| n - self.rows + (k + 1) - p)
            .collect();
        SchubertIndex { indices, n }
    }

    /// Every partition in the box, ordered by size and then lexicographically.
    pub fn all(rows: usize, cols: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(rows);
        fn rec(rows: usize, cols: usize, bound: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
            out.push(Partition::new(current, rows, cols).unwrap());
            if current.len() == rows {
                return;
            }
            for p in 1..=bound {
                current.push(p);
                rec(rows, cols, p, current, out);
                current.pop();
            }
        }
        rec(rows, cols, cols, &mut current, &mut out);
        out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.parts.cmp(&b.parts)));
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().join(","))
    }
}

/// A strictly increasing `r`-subset of `{1, …, n}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SchubertIndex {
    indices: Vec<usize>,
    #[serde(skip)]
    n: usize,
}

impl SchubertIndex {
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        if indices.is_empty() || indices.len() >= n {
            return Err(Error::validation(format!(
                "index set {indices:?} must have between 1 and {} elements",
                n.saturating_sub(1)
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation(format!(
                "index set {indices:?} is not strictly increasing"
            )));
        }
        if indices[0] < 1 || indices[indices.len() - 1] > n {
            return Err(Error::validation(format!(
                "index set {indices:?} leaves the range 1..={n}"
            )));
        }
        Ok(SchubertIndex {
            indices: indices.to_vec(),
            n,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.indices.len()
    }

    pub fn to_partition(&self) -> Partition {
        index_to_partition(self)
    }

    pub fn dual(&self) -> SchubertIndex {
        dual_index(self)
    }

    /// All `r`-subsets of `{1, …, n}` in lexicographic order.
    pub fn all(n: usize, r: usize) -> Vec<SchubertIndex> {
        (1..=n)
            .combinations(r)
            .map(|indices| SchubertIndex { indices, n })
            .collect()
    }
}

impl fmt::Display for SchubertIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.indices.iter().join(","))
    }
}

pub fn index_to_partition(index: &SchubertIndex) -> Partition {
    let (n, r) = (index.n, index.r());
    let parts: Vec<usize> = index
        .indices
        .iter()
        .enumerate()
        .map(|(k, &i)| n - r + (k + 1) - i)
        .collect();
    Partition::new(&parts, r, n - r).expect("valid index sets map into the box")
}

pub fn partition_to_index(partition: &Partition) -> SchubertIndex {
    partition.to_index()
}

/// Poincaré dual index `{n + 1 − i : i ∈ I}`, sorted.
pub fn dual_index(index: &SchubertIndex) -> SchubertIndex {
    let mut indices: Vec<usize> = index.indices.iter().map(|&i| index.n + 1 - i).collect();
    indices.sort_unstable();
    SchubertIndex { indices, n: index.n }
}

/// Littlewood–Richardson coefficient `c^ν_{λμ}` on raw partitions.
///
/// Counts semistandard fillings of the skew shape `ν/λ` with content `μ`
/// whose reverse reading word is a lattice word. No box bound is applied.
pub fn lr_coefficient_raw(lambda: &[usize], mu: &[usize], nu: &[usize]) -> u64 {
    let trim = |p: &[usize]| -> Vec<usize> {
        let mut v = p.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (lambda, mu, nu) = (trim(lambda), trim(mu), trim(nu));
    let size = |p: &[usize]| p.iter().sum::<usize>();
    if size(&lambda) + size(&mu) != size(&nu) || lambda.len() > nu.len() {
        return 0;
    }
    let lam = |i: usize| lambda.get(i).copied().unwrap_or(0);
    if (0..nu.len()).any(|i| lam(i) > nu[i]) {
        return 0;
    }
    if mu.is_empty() {
        return 1;
    }

    // Skew cells in reverse reading order: rows top to bottom, each right to left.
    let cells: Vec<(usize, usize)> = (0..nu.len())
        .flat_map(|i| (lam(i)..nu[i]).rev().map(move |j| (i, j)))
        .collect();
    let mut filling: Vec<Vec<usize>> = nu.iter().map(|&len| vec![0; len]).collect();
    let mut counts = vec![0usize; mu.len()];

    fn place(
        pos: usize,
        cells: &[(usize, usize)],
        lambda: &[usize],
        mu: &[usize],
        filling: &mut [Vec<usize>],
        counts: &mut [usize],
    ) -> u64 {
        if pos == cells.len() {
            return 1;
        }
        let (i, j) = cells[pos];
        let lam = |row: usize| lambda.get(row).copied().unwrap_or(0);
        // Rows weakly increase to the right.
        let upper = if j + 1 < filling[i].len() {
            filling[i][j + 1]
        } else {
            mu.len()
        };
        // Columns strictly increase downwards.
        let lower = if i > 0 && j >= lam(i - 1) {
            filling[i - 1][j] + 1
        } else {
            1
        };
        let mut total = 0;
        for v in lower.max(1)..=upper {
            let k = v - 1;
            if counts[k] >= mu[k] {
                continue;
            }
            if k > 0 && counts[k] + 1 > counts[k - 1] {
                continue;
            }
            counts[k] += 1;
            filling[i][j] = v;
            total += place(pos + 1, cells, lambda, mu, filling, counts);
            filling[i][j] = 0;
            counts[k] -= 1;
        }
        total
    }

    place(0, &cells, &lambda, &mu, &mut filling, &mut counts)
}

/// Littlewood–Richardson coefficient for box partitions.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    lr_coefficient_raw(lambda.parts(), mu.parts(), nu.parts())
}

/// All partitions `ν ⊇ λ` with `|ν| = size`, at most `max_rows` rows and `ν_1 ≤ max_cols`.
pub(crate) fn partitions_containing(
    lambda: &[usize],
    size: usize,
    max_rows: usize,
    max_cols: usize,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(max_rows);
    fn rec(
        row: usize,
        remaining: usize,
        bound: usize,
        lambda: &[usize],
        max_rows: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let lam = |i: usize| lambda.get(i).copied().unwrap_or(0);
        if remaining == 0 {
            if (row..max_rows).all(|i| lam(i) == 0) {
                out.push(current.clone());
            }
            return;
        }
        if row == max_rows {
            return;
        }
        let lo = lam(row).max(1);
        for p in lo..=bound.min(remaining) {
            current.push(p);
            rec(row + 1, remaining - p, p, lambda, max_rows, current, out);
            current.pop();
        }
    }
    rec(0, size, max_cols, lambda, max_rows, &mut current, &mut out);
    out
}

/// Raw LR expansion of `s_λ · s_μ` restricted to at most `max_rows` rows and
/// `max_cols` columns.
pub(crate) fn lr_expand(lambda: &[usize], mu: &[usize], max_rows: usize, max_cols: usize) -> Vec<(Vec<usize>, u64)> {
    let size = lambda.iter().sum::<usize>() + mu.iter().sum::<usize>();
    partitions_containing(lambda, size, max_rows, max_cols)
        .into_iter()
        .filter(|nu| {
            // ν must also contain μ.
            mu.iter()
                .enumerate()
                .all(|(i, &m)| nu.get(i).copied().unwrap_or(0) >= m)
        })
        .filter_map(|nu| {
            let c = lr_coefficient_raw(lambda, mu, &nu);
            (c > 0).then_some((nu, c))
        })
        .collect()
}

/// Classical Pieri rule: `σ_(p) · σ_λ` as a sum over horizontal strips of size `p`
/// added to `λ` inside the box. Independent of the tableau enumeration.
pub fn pieri_product(p: usize, lambda: &Partition) -> Vec<Partition> {
    let rows = lambda.rows();
    let cols = lambda.cols();
    let padded = lambda.padded();
    let mut out = Vec::new();
    let mut current = vec![0usize; rows];
    // Horizontal strip: λ_i ≤ ν_i ≤ λ_{i−1} (with λ_0 = cols).
    fn rec(
        row: usize,
        remaining: usize,
        padded: &[usize],
        cols: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if row == padded.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let cap = if row == 0 { cols } else { padded[row - 1] };
        for add in 0..=remaining.min(cap - padded[row]) {
            current[row] = padded[row] + add;
            rec(row + 1, remaining - add, padded, cols, current, out);
        }
    }
    let mut raw = Vec::new();
    rec(0, p, &padded, cols, &mut current, &mut raw);
    for nu in raw {
        out.push(Partition::new(&nu, rows, cols).expect("horizontal strip stays in the box"));
    }
    out.sort();
    out
}

/// An element of `H*(Gr(r, n); ℤ)` in the Schubert basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyElement {
    terms: BTreeMap<Partition, i64>,
    n: usize,
    r: usize,
}

impl CohomologyElement {
    pub fn zero(n: usize, r: usize) -> Self {
        CohomologyElement {
            terms: BTreeMap::new(),
            n,
            r,
        }
    }

    pub fn one(n: usize, r: usize) -> Self {
        Self::basis(Partition::empty(r, n - r))
    }

    pub fn basis(partition: Partition) -> Self {
        let (r, n) = (partition.rows(), partition.rows() + partition.cols());
        let mut terms = BTreeMap::new();
        terms.insert(partition, 1);
        CohomologyElement { terms, n, r }
    }

    pub fn from_index(index: &SchubertIndex) -> Self {
        Self::basis(index.to_partition())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, i64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn coefficient(&self, partition: &Partition) -> i64 {
        self.terms.get(partition).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, partition: Partition, coefficient: i64) -> Result<()> {
        if partition.rows() != self.r || partition.rows() + partition.cols() != self.n {
            return Err(Error::mismatch(format!(
                "partition {partition} does not live in Gr({}, {})",
                self.r, self.n
            )));
        }
        if coefficient == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(partition);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e
                    .get()
                    .checked_add(coefficient)
                    .ok_or(Error::Overflow("cohomology coefficients"))?;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coefficient);
            }
        }
        Ok(())
    }
}

/// Cup product, the bilinear extension of the Littlewood–Richardson rule
/// truncated to the `r × (n − r)` box.
pub fn cup_product(a: &CohomologyElement, b: &CohomologyElement) -> Result<CohomologyElement> {
    if a.n != b.n || a.r != b.r {
        return Err(Error::mismatch(format!("Gr({}, {}) vs Gr({}, {})", a.r, a.n, b.r, b.n)));
    }
    let (r, c) = (a.r, a.n - a.r);
    let mut out = CohomologyElement::zero(a.n, a.r);
    for (lambda, ca) in a.terms() {
        for (mu, cb) in b.terms() {
            let scale = ca.checked_mul(cb).ok_or(Error::Overflow("cup product"))?;
            for (nu, lr) in lr_expand(lambda.parts(), mu.parts(), r, c) {
                let lr = i64::try_from(lr).map_err(|_| Error::Overflow("LR coefficient"))?;
                let coeff = scale.checked_mul(lr).ok_or(Error::Overflow("cup product"))?;
                out.add_term(Partition::new(&nu, r, c)?, coeff)?;
            }
        }
    }
    Ok(out)
}
