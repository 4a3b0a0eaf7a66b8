use std::collections::BTreeMap;

/// Square real sparse matrix stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: Vec<BTreeMap<usize, f64>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            rows: vec![BTreeMap::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.rows[row].get(&col).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        if value == 0.0 {
            self.rows[row].remove(&col);
        } else {
            self.rows[row].insert(col, value);
        }
    }

    pub fn add_at(&mut self, row: usize, col: usize, value: f64) {
        let v = self.get(row, col) + value;
        self.set(row, col, v);
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, &v)| (r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim());
        for (r, c, v) in self.entries() {
            t.rows[c].insert(r, v);
        }
        t
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = Self::zeros(self.dim());
        for (r, c, v) in self.entries() {
            out.set(r, c, s * v);
        }
        out
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_at(r, c, s * v);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.dim());
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
            for (&k, &a) in row {
                for (&c, &b) in &other.rows[k] {
                    *acc.entry(c).or_insert(0.0) += a * b;
                }
            }
            acc.retain(|_, v| *v != 0.0);
            out.rows[r] = acc;
        }
        out
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).add_scaled(&other.mul(self), -1.0)
    }

    /// Frobenius norm of the columns selected by `mask`; bounds the operator
    /// norm of the matrix restricted to that subspace.
    pub fn column_restricted_norm(&self, mask: &[bool]) -> f64 {
        self.entries()
            .filter(|&(_, c, _)| mask[c])
            .map(|(_, _, v)| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }
}
