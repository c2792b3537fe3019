//! Row reduction over F_p.
//!
//! [`Echelon`] keeps a fully reduced row-echelon basis that grows one vector at
//! a time, together with the coefficients expressing each basis row in terms of
//! the inserted vectors. Rows are kept sorted by pivot column.

use crate::algebra::field::PrimeField;

#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    transform: Vec<Vec<u32>>,
    inserted: usize,
    dependent: Vec<usize>,
}

impl Echelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            transform: Vec::new(),
            inserted: 0,
            dependent: Vec::new(),
        }
    }

    pub fn from_rows<'a>(
        field: PrimeField,
        width: usize,
        rows: impl IntoIterator<Item = &'a [u32]>,
    ) -> Self {
        let mut e = Echelon::new(field, width);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `transform()[i][k]` is the coefficient of inserted vector `k` in row `i`.
    pub fn transform(&self) -> &[Vec<u32>] {
        &self.transform
    }

    /// Indices of inserted vectors that were already in the span.
    pub fn dependent(&self) -> &[usize] {
        &self.dependent
    }

    /// Reduce `v` against the current rows. Returns the residual and the
    /// coefficients `c` (over inserted vectors) with `v = residual + Σ c_k input_k`.
    pub fn reduce(&self, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let f = self.field;
        let mut residual: Vec<u32> = v.iter().map(|&x| x % f.p()).collect();
        let mut coeffs = vec![0u32; self.inserted];
        for (row, (&piv, tr)) in self.rows.iter().zip(self.pivots.iter().zip(&self.transform)) {
            let c = residual[piv];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (a, &b) in residual[piv..].iter_mut().zip(&row[piv..]) {
                *a = f.add(*a, f.mul(neg, b));
            }
            for (a, &b) in coeffs.iter_mut().zip(tr) {
                *a = f.add(*a, f.mul(c, b));
            }
        }
        (residual, coeffs)
    }

    /// Insert a vector; returns `true` if it increased the rank.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let k = self.inserted;
        let (mut residual, coeffs) = self.reduce(v);
        self.inserted += 1;
        for tr in &mut self.transform {
            tr.push(0);
        }
        let Some(piv) = residual.iter().position(|&x| x != 0) else {
            self.dependent.push(k);
            return false;
        };
        // new row = (v - Σ c input) scaled; its transform is (e_k - coeffs) scaled.
        let mut tr: Vec<u32> = coeffs.iter().map(|&c| f.neg(c)).collect();
        tr.push(1);
        let inv = f.inv(residual[piv]).expect("nonzero pivot");
        for a in residual.iter_mut() {
            *a = f.mul(*a, inv);
        }
        for a in tr.iter_mut() {
            *a = f.mul(*a, inv);
        }
        for (row, rtr) in self.rows.iter_mut().zip(self.transform.iter_mut()) {
            let c = row[piv];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (a, &b) in row.iter_mut().zip(&residual) {
                *a = f.add(*a, f.mul(neg, b));
            }
            for (a, &b) in rtr.iter_mut().zip(&tr) {
                *a = f.add(*a, f.mul(neg, b));
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, residual);
        self.transform.insert(at, tr);
        true
    }

    /// Coefficients over the current rows expressing `v`, if `v` lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let f = self.field;
        let (residual, _) = self.reduce(v);
        if residual.iter().any(|&x| x != 0) {
            return None;
        }
        Some(self.pivots.iter().map(|&piv| v[piv] % f.p()).collect())
    }
}

pub fn rank(field: PrimeField, rows: &[Vec<u32>]) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    Echelon::from_rows(field, width, rows.iter().map(Vec::as_slice)).rank()
}

/// Solve `A y = b` where `A` is given by its rows. Free variables are set to 0.
pub fn solve(field: PrimeField, a: &[Vec<u32>], b: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per equation");
    let cols = a.first().map_or(0, Vec::len);
    let f = field;
    let mut m: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r: Vec<u32> = row.iter().map(|&x| x % f.p()).collect();
            r.push(rhs % f.p());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        let Some(sel) = (top..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(top, sel);
        let inv = f.inv(m[top][col]).expect("nonzero pivot");
        for x in m[top].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = m[top].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == top || row[col] == 0 {
                continue;
            }
            let neg = f.neg(row[col]);
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = f.add(*x, f.mul(neg, y));
            }
        }
        pivot_cols.push(col);
        top += 1;
        if top == m.len() {
            break;
        }
    }
    if m[top..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut y = vec![0u32; cols];
    for (i, &col) in pivot_cols.iter().enumerate() {
        y[col] = m[i][cols];
    }
    Some(y)
}
