//! Small quantum cohomology of `Gr(r, n)`.
//!
//! Products are computed by the rim-hook algorithm: expand the classical
//! product of Schur functions in `r` variables (no column bound), then strip
//! `n`-rim hooks until every partition fits the box. Each removed hook
//! contributes one power of `q` and the sign `(−1)^{r − height}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::schubert::{lr_expand, CohomologyElement, Partition, SchubertIndex};

/// `(d, ν, c)`: the term `c·q^d σ_ν` of a product.
type Term = (usize, Partition, i64);

/// A basis key: `q^degree · σ_partition`.
pub type QuantumKey = (usize, Partition);

/// An element of `QH*(Gr(r, n))` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumClass {
    terms: BTreeMap<QuantumKey, i64>,
    n: usize,
    r: usize,
}

impl QuantumClass {
    pub fn zero(n: usize, r: usize) -> Self {
        QuantumClass {
            terms: BTreeMap::new(),
            n,
            r,
        }
    }

    pub fn one(n: usize, r: usize) -> Self {
        Self::basis(0, Partition::empty(r, n - r))
    }

    pub fn basis(degree: usize, partition: Partition) -> Self {
        let (r, n) = (partition.rows(), partition.rows() + partition.cols());
        let mut terms = BTreeMap::new();
        terms.insert((degree, partition), 1);
        QuantumClass { terms, n, r }
    }

    pub fn schubert(index: &SchubertIndex) -> Self {
        Self::basis(0, index.to_partition())
    }

    /// The divisor class `σ_(1)`.
    pub fn divisor(n: usize, r: usize) -> Self {
        Self::basis(0, Partition::new(&[1], r, n - r).expect("box has a cell"))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QuantumKey, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, degree: usize, partition: &Partition) -> i64 {
        self.terms.get(&(degree, partition.clone())).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, degree: usize, partition: Partition, coefficient: i64) -> Result<()> {
        if partition.rows() != self.r || partition.rows() + partition.cols() != self.n {
            return Err(Error::mismatch(format!(
                "partition {partition} does not live in Gr({}, {})",
                self.r, self.n
            )));
        }
        if coefficient == 0 {
            return Ok(());
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((degree, partition)) {
            Entry::Occupied(mut e) => {
                let v = e
                    .get()
                    .checked_add(coefficient)
                    .ok_or(Error::Overflow("quantum coefficients"))?;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(coefficient);
            }
        }
        Ok(())
    }

    /// The `q⁰` part as a classical cohomology element.
    pub fn classical_part(&self) -> CohomologyElement {
        let mut out = CohomologyElement::zero(self.n, self.r);
        for ((d, p), c) in self.terms() {
            if *d == 0 {
                out.add_term(p.clone(), c).expect("same ambient");
            }
        }
        out
    }

    pub fn from_classical(element: &CohomologyElement) -> Self {
        let mut out = QuantumClass::zero(element.n(), element.r());
        for (p, c) in element.terms() {
            out.add_term(0, p.clone(), c).expect("same ambient");
        }
        out
    }

    fn check_same(&self, other: &QuantumClass) -> Result<()> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::mismatch(format!(
                "Gr({}, {}) vs Gr({}, {})",
                self.r, self.n, other.r, other.n
            )));
        }
        Ok(())
    }
}

/// Reduce a partition with at most `r` rows modulo `n`-rim hooks.
///
/// Returns `None` when the partition reduces to zero, otherwise the number of
/// removed hooks, the accumulated sign and the box partition.
pub fn rim_hook_reduce(nu: &[usize], n: usize, r: usize) -> Option<(usize, i64, Vec<usize>)> {
    debug_assert!(nu.len() <= r);
    // Beta numbers β_i = ν_i + r − i (0-indexed rows), strictly decreasing.
    let mut beta: Vec<usize> = (0..r).map(|i| nu.get(i).copied().unwrap_or(0) + r - 1 - i).collect();
    let mut hooks = 0usize;
    let mut sign = 1i64;
    while beta[0] >= n {
        let top = beta[0];
        let target = top - n;
        if beta.contains(&target) {
            return None;
        }
        // The hook spans the rows whose beta numbers it jumps over, plus its own.
        let crossed = beta.iter().filter(|&&b| b > target && b < top).count();
        let height = crossed + 1;
        if (r - height) % 2 == 1 {
            sign = -sign;
        }
        beta[0] = target;
        beta.sort_unstable_by(|a, b| b.cmp(a));
        hooks += 1;
    }
    let parts: Vec<usize> = beta.iter().enumerate().map(|(i, &b)| b - (r - 1 - i)).collect();
    Some((hooks, sign, parts))
}

/// Structure constants `σ_λ ∗ σ_μ = Σ c · q^d σ_ν` for two box partitions.
pub fn basis_product(lambda: &Partition, mu: &Partition) -> Vec<(usize, Partition, i64)> {
    let r = lambda.rows();
    let c = lambda.cols();
    let n = r + c;
    let mut acc: BTreeMap<(usize, Partition), i64> = BTreeMap::new();
    for (nu, lr) in lr_expand(lambda.parts(), mu.parts(), r, 2 * c) {
        if let Some((d, sign, reduced)) = rim_hook_reduce(&nu, n, r) {
            let p = Partition::new(&reduced, r, c).expect("reduced partition fits the box");
            *acc.entry((d, p)).or_insert(0) += sign * lr as i64;
        }
    }
    acc.into_iter()
        .filter(|(_, v)| *v != 0)
        .map(|((d, p), v)| (d, p, v))
        .collect()
}

/// Quantum product of two classes of the same Grassmannian.
pub fn quantum_product(a: &QuantumClass, b: &QuantumClass) -> Result<QuantumClass> {
    a.check_same(b)?;
    multiply_with(a, b, basis_product)
}

fn multiply_with<F>(a: &QuantumClass, b: &QuantumClass, mut table: F) -> Result<QuantumClass>
where
    F: FnMut(&Partition, &Partition) -> Vec<(usize, Partition, i64)>,
{
    let mut out = QuantumClass::zero(a.n, a.r);
    for ((da, lambda), ca) in a.terms() {
        for ((db, mu), cb) in b.terms() {
            let scale = ca.checked_mul(cb).ok_or(Error::Overflow("quantum product"))?;
            for (d, nu, c) in table(lambda, mu) {
                let coeff = scale.checked_mul(c).ok_or(Error::Overflow("quantum product"))?;
                out.add_term(da + db + d, nu, coeff)?;
            }
        }
    }
    Ok(out)
}

/// Multiplication by `σ_(1)` via the quantum Pieri rule.
///
/// Classical part: add one box inside the box. Quantum part: when the first
/// row is full and the last row is non-empty, `q · σ_(λ_2 − 1, …, λ_r − 1)`.
/// Shares no code with the rim-hook path.
pub fn quantum_pieri(a: &QuantumClass) -> QuantumClass {
    let (r, c) = (a.r, a.n - a.r);
    let mut out = QuantumClass::zero(a.n, a.r);
    for ((d, lambda), coeff) in a.terms() {
        let padded = lambda.padded();
        for row in 0..r {
            let cap = if row == 0 { c } else { padded[row - 1] };
            if padded[row] < cap {
                let mut nu = padded.clone();
                nu[row] += 1;
                let p = Partition::new(&nu, r, c).expect("box addition");
                out.add_term(*d, p, coeff).expect("same ambient");
            }
        }
        if padded[0] == c && padded[r - 1] >= 1 {
            let shifted: Vec<usize> = padded[1..].iter().map(|&p| p - 1).collect();
            let p = Partition::new(&shifted, r, c).expect("shifted partition fits");
            out.add_term(d + 1, p, coeff).expect("same ambient");
        }
    }
    out
}

/// Quantum ring of one Grassmannian with a memo table for basis products.
///
/// The table is behind a read-write lock: concurrent lookups proceed in
/// parallel, insertions are serialized.
#[derive(Debug)]
pub struct QuantumRing {
    n: usize,
    r: usize,
    memo: RwLock<HashMap<(Partition, Partition), Vec<Term>>>,
}

impl QuantumRing {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if r == 0 || r >= n {
            return Err(Error::validation(format!("Gr({r}, {n}) needs 0 < r < n")));
        }
        Ok(QuantumRing {
            n,
            r,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn structure_constants(&self, lambda: &Partition, mu: &Partition) -> Vec<(usize, Partition, i64)> {
        let key = if lambda <= mu {
            (lambda.clone(), mu.clone())
        } else {
            (mu.clone(), lambda.clone())
        };
        if let Some(hit) = self.memo.read().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let value = basis_product(&key.0, &key.1);
        self.memo
            .write()
            .expect("memo lock")
            .entry(key)
            .or_insert(value)
            .clone()
    }

    pub fn product(&self, a: &QuantumClass, b: &QuantumClass) -> Result<QuantumClass> {
        a.check_same(b)?;
        if a.n != self.n || a.r != self.r {
            return Err(Error::mismatch("class does not belong to this ring"));
        }
        multiply_with(a, b, |l, m| self.structure_constants(l, m))
    }

    /// `(σ_{I_1}, …, σ_{I_l})_d` using the memo table.
    pub fn gw_invariant(&self, query: &GwQuery) -> Result<i64> {
        gw_with(query, |a, b| self.product(a, b))
    }
}

/// An `l`-point genus-zero Gromov–Witten query of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwQuery {
    pub classes: Vec<SchubertIndex>,
    pub degree: usize,
}

impl GwQuery {
    pub fn new(classes: Vec<SchubertIndex>, degree: usize) -> Self {
        GwQuery { classes, degree }
    }

    /// Total codimension minus the expected value `r(n − r) + n·d`.
    /// Zero when the dimension condition holds.
    pub fn dimension_defect(&self) -> Option<i64> {
        let first = self.classes.first()?;
        let (n, r) = (first.n(), first.r());
        let total: usize = self.classes.iter().map(|i| i.to_partition().size()).sum();
        Some(total as i64 - (r * (n - r) + n * self.degree) as i64)
    }
}

/// Gromov–Witten number computed by iterated quantum products: the
/// coefficient of `q^d σ_{λ(I_l)^∨}` in `σ_{I_1} ∗ … ∗ σ_{I_{l−1}}`.
pub fn gw_invariant(query: &GwQuery) -> Result<i64> {
    gw_with(query, quantum_product)
}

fn gw_with<F>(query: &GwQuery, mut product: F) -> Result<i64>
where
    F: FnMut(&QuantumClass, &QuantumClass) -> Result<QuantumClass>,
{
    if query.classes.len() < 2 {
        return Err(Error::validation(format!(
            "a GW invariant needs at least 2 classes, got {}",
            query.classes.len()
        )));
    }
    let (n, r) = (query.classes[0].n(), query.classes[0].r());
    if query.classes.iter().any(|i| i.n() != n || i.r() != r) {
        return Err(Error::mismatch("GW classes live in different Grassmannians"));
    }
    if query.dimension_defect() != Some(0) {
        return Ok(0);
    }
    let (last, rest) = query.classes.split_last().expect("at least two classes");
    let mut acc = QuantumClass::schubert(&rest[0]);
    for index in &rest[1..] {
        acc = product(&acc, &QuantumClass::schubert(index))?;
    }
    Ok(acc.coefficient(query.degree, &last.to_partition().complement()))
}
