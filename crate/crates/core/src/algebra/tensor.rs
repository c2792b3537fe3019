//! Dense tensors over a prime field with labelled axes.
//!
//! Each axis carries a strictly increasing list of positive integer labels
//! (usually `1..=n`). Entries are stored row-major with axis 0 most
//! significant, so the flat storage order coincides with the lexicographic
//! order on label tuples.

use serde::{Deserialize, Serialize};

use crate::algebra::field::PrimeField;
use crate::algebra::io::TensorRepr;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "TensorRepr", try_from = "TensorRepr")]
pub struct Tensor {
    field: PrimeField,
    axes: Vec<Vec<usize>>,
    entries: Vec<u32>,
}

fn check_axis(axis: &[usize]) -> Result<()> {
    if axis.first() == Some(&0) {
        return Err(Error::Domain("axis labels are 1-based".into()));
    }
    if axis.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!(
            "axis labels must be strictly increasing: {axis:?}"
        )));
    }
    Ok(())
}

/// The labels `1..=n`.
pub fn full_axis(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

impl Tensor {
    pub fn new(field: PrimeField, axes: Vec<Vec<usize>>, entries: Vec<u32>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Shape("tensor order must be at least 1".into()));
        }
        for axis in &axes {
            check_axis(axis)?;
        }
        let len: usize = axes.iter().map(Vec::len).product();
        if entries.len() != len {
            return Err(Error::Shape(format!(
                "expected {len} entries, got {}",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&v| v >= field.p()) {
            return Err(Error::Domain(format!(
                "entry {bad} is not a residue mod {}",
                field.p()
            )));
        }
        Ok(Tensor {
            field,
            axes,
            entries,
        })
    }

    pub fn zeros(field: PrimeField, axes: Vec<Vec<usize>>) -> Result<Self> {
        let len = axes.iter().map(Vec::len).product();
        Tensor::new(field, axes, vec![0; len])
    }

    /// The zero `n × … × n` tensor of order `d` on labels `1..=n`.
    pub fn cube(field: PrimeField, n: usize, d: usize) -> Self {
        Tensor::zeros(field, vec![full_axis(n); d]).expect("valid cube shape")
    }

    /// Build a tensor from a function of the label tuple. Values are reduced mod p.
    pub fn from_fn(
        field: PrimeField,
        axes: Vec<Vec<usize>>,
        mut f: impl FnMut(&[usize]) -> i64,
    ) -> Result<Self> {
        let mut t = Tensor::zeros(field, axes)?;
        let mut labels = vec![0; t.order()];
        for flat in 0..t.entries.len() {
            t.labels_into(flat, &mut labels);
            t.entries[flat] = field.reduce(f(&labels));
        }
        Ok(t)
    }

    /// The tensor with a single 1 at `coord` (labels).
    pub fn unit(field: PrimeField, axes: Vec<Vec<usize>>, coord: &[usize]) -> Result<Self> {
        let mut t = Tensor::zeros(field, axes)?;
        t.set(coord, 1)?;
        Ok(t)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.p()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<usize>] {
        &self.axes
    }

    pub fn axis(&self, j: usize) -> &[usize] {
        &self.axes[j]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// All axes carry the same labels.
    pub fn is_principal(&self) -> bool {
        self.axes.windows(2).all(|w| w[0] == w[1])
    }

    pub fn same_shape(&self, other: &Tensor) -> bool {
        self.field == other.field && self.axes == other.axes
    }

    fn check_same_shape(&self, other: &Tensor) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "shape mismatch: {:?} over F_{} vs {:?} over F_{}",
                self.dims(),
                self.p(),
                other.dims(),
                other.p()
            )))
        }
    }

    /// Flat offset of a label tuple, if every label belongs to its axis.
    pub fn offset_of(&self, coord: &[usize]) -> Option<usize> {
        if coord.len() != self.order() {
            return None;
        }
        let mut off = 0;
        for (axis, label) in self.axes.iter().zip(coord) {
            let pos = axis.binary_search(label).ok()?;
            off = off * axis.len() + pos;
        }
        Some(off)
    }

    fn offset_checked(&self, coord: &[usize]) -> Result<usize> {
        self.offset_of(coord).ok_or_else(|| {
            Error::Domain(format!(
                "coordinate {coord:?} not in tensor with axes {:?}",
                self.axes
            ))
        })
    }

    pub fn get(&self, coord: &[usize]) -> Result<u32> {
        Ok(self.entries[self.offset_checked(coord)?])
    }

    pub fn set(&mut self, coord: &[usize], value: u32) -> Result<()> {
        let off = self.offset_checked(coord)?;
        self.entries[off] = value % self.p();
        Ok(())
    }

    /// Write the label tuple of flat position `flat` into `out`.
    pub fn labels_into(&self, mut flat: usize, out: &mut [usize]) {
        for j in (0..self.order()).rev() {
            let len = self.axes[j].len();
            out[j] = self.axes[j][flat % len];
            flat /= len;
        }
    }

    pub fn labels_at(&self, flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.order()];
        self.labels_into(flat, &mut out);
        out
    }

    /// Nonzero entries as (label tuple, value), in lexicographic order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, u32)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (self.labels_at(i), v))
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        let mut out = self.clone();
        out.axpy(1, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        let mut out = self.clone();
        out.axpy(self.field.neg(1), other)?;
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Tensor {
        let f = self.field;
        let c = c % f.p();
        Tensor {
            field: f,
            axes: self.axes.clone(),
            entries: self.entries.iter().map(|&v| f.mul(v, c)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: u32, other: &Tensor) -> Result<()> {
        self.check_same_shape(other)?;
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return Ok(());
        }
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a = f.add(*a, f.mul(c, b));
        }
        Ok(())
    }

    /// Linear combination `Σ coeffs[i] * tensors[i]`; all tensors share a shape.
    pub fn combination(coeffs: &[u32], tensors: &[Tensor]) -> Result<Tensor> {
        let first = tensors
            .first()
            .ok_or_else(|| Error::Shape("empty combination".into()))?;
        if coeffs.len() != tensors.len() {
            return Err(Error::Shape(format!(
                "{} coefficients for {} tensors",
                coeffs.len(),
                tensors.len()
            )));
        }
        let mut out = Tensor::zeros(first.field, first.axes.clone())?;
        for (&c, t) in coeffs.iter().zip(tensors) {
            out.axpy(c, t)?;
        }
        Ok(out)
    }

    /// Contract the last axis against `x`, dropping it.
    pub fn contract_last(&self, x: &[u32]) -> Result<Tensor> {
        let last = self.order() - 1;
        let m = self.axes[last].len();
        if x.len() != m {
            return Err(Error::Shape(format!(
                "vector of length {} against axis of size {m}",
                x.len()
            )));
        }
        if self.order() == 1 {
            return Err(Error::Shape("cannot contract an order-1 tensor to order 0".into()));
        }
        let f = self.field;
        let axes = self.axes[..last].to_vec();
        let rows: usize = axes.iter().map(Vec::len).product();
        let entries = (0..rows)
            .map(|row| {
                let block = &self.entries[row * m..(row + 1) * m];
                block
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&t, &xv)| f.add(acc, f.mul(t, xv % f.p())))
            })
            .collect();
        Ok(Tensor {
            field: f,
            axes,
            entries,
        })
    }

    /// Evaluate the multilinear form `Σ T[i_1..i_d] x_1[i_1] ⋯ x_d[i_d]`.
    pub fn evaluate(&self, xs: &[Vec<u32>]) -> Result<u32> {
        if xs.len() != self.order() {
            return Err(Error::Shape(format!(
                "{} vectors for an order-{} tensor",
                xs.len(),
                self.order()
            )));
        }
        let mut cur = self.clone();
        for x in xs[1..].iter().rev() {
            cur = cur.contract_last(x)?;
        }
        let x0 = &xs[0];
        if x0.len() != cur.entries.len() {
            return Err(Error::Shape(format!(
                "vector of length {} against axis of size {}",
                x0.len(),
                cur.entries.len()
            )));
        }
        let f = self.field;
        Ok(cur
            .entries
            .iter()
            .zip(x0)
            .fold(0, |acc, (&t, &xv)| f.add(acc, f.mul(t, xv % f.p()))))
    }

    /// Rectangular restriction to `S_1 × ⋯ × S_d`.
    pub fn restrict_rect(&self, sets: &[Vec<usize>]) -> Result<Tensor> {
        if sets.len() != self.order() {
            return Err(Error::Shape(format!(
                "{} index sets for an order-{} tensor",
                sets.len(),
                self.order()
            )));
        }
        let mut new_axes = Vec::with_capacity(sets.len());
        let mut positions = Vec::with_capacity(sets.len());
        for (j, set) in sets.iter().enumerate() {
            let mut s = set.clone();
            s.sort_unstable();
            s.dedup();
            let pos = s
                .iter()
                .map(|l| {
                    self.axes[j].binary_search(l).map_err(|_| {
                        Error::Domain(format!("label {l} is not on axis {j}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            positions.push(pos);
            new_axes.push(s);
        }
        let dims = self.dims();
        let len: usize = positions.iter().map(Vec::len).product();
        let mut entries = Vec::with_capacity(len);
        let mut idx = vec![0usize; sets.len()];
        for_each_index(&positions.iter().map(Vec::len).collect::<Vec<_>>(), |multi| {
            let mut off = 0;
            for (j, &k) in multi.iter().enumerate() {
                idx[j] = positions[j][k];
                off = off * dims[j] + idx[j];
            }
            entries.push(self.entries[off]);
        });
        Ok(Tensor {
            field: self.field,
            axes: new_axes,
            entries,
        })
    }

    /// Principal restriction `T_{|S}` to `S × ⋯ × S`.
    pub fn restrict(&self, set: &[usize]) -> Result<Tensor> {
        self.restrict_rect(&vec![set.to_vec(); self.order()])
    }

    /// Principal restriction to the first `k` labels of each axis.
    pub fn restrict_prefix(&self, k: usize) -> Result<Tensor> {
        let sets = self
            .axes
            .iter()
            .map(|a| {
                a.get(..k).map(<[usize]>::to_vec).ok_or_else(|| {
                    Error::Domain(format!("prefix {k} exceeds axis of size {}", a.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.restrict_rect(&sets)
    }

    /// Same entries, new labels (each axis keeps its size).
    pub fn relabel(&self, axes: Vec<Vec<usize>>) -> Result<Tensor> {
        if axes.len() != self.order() || axes.iter().zip(&self.axes).any(|(a, b)| a.len() != b.len()) {
            return Err(Error::Shape("relabelling must preserve axis sizes".into()));
        }
        Tensor::new(self.field, axes, self.entries.clone())
    }

    /// Permute the legs: `maps[j][k]` is the image of label `axes[j][k]`.
    /// The result satisfies `Q[π_1(i_1),…,π_d(i_d)] = T[i_1,…,i_d]`.
    pub fn permute_legs(&self, maps: &[Vec<usize>]) -> Result<Tensor> {
        if maps.len() != self.order() {
            return Err(Error::Shape("one permutation per axis required".into()));
        }
        let mut target_pos = Vec::with_capacity(maps.len());
        for (j, map) in maps.iter().enumerate() {
            let axis = &self.axes[j];
            if map.len() != axis.len() {
                return Err(Error::Domain(format!("permutation for axis {j} has wrong length")));
            }
            let mut seen = vec![false; axis.len()];
            let mut pos = Vec::with_capacity(axis.len());
            for &img in map {
                let k = axis.binary_search(&img).map_err(|_| {
                    Error::Domain(format!("label {img} is not on axis {j}"))
                })?;
                if seen[k] {
                    return Err(Error::Domain(format!("map on axis {j} is not a bijection")));
                }
                seen[k] = true;
                pos.push(k);
            }
            target_pos.push(pos);
        }
        let dims = self.dims();
        let mut out = vec![0; self.entries.len()];
        let mut src = 0;
        for_each_index(&dims, |multi| {
            let mut off = 0;
            for (j, &k) in multi.iter().enumerate() {
                off = off * dims[j] + target_pos[j][k];
            }
            out[off] = self.entries[src];
            src += 1;
        });
        Ok(Tensor {
            field: self.field,
            axes: self.axes.clone(),
            entries: out,
        })
    }

    /// Reorder the axes: axis `j` of the result is axis `order[j]` of `self`.
    pub fn transpose(&self, order: &[usize]) -> Result<Tensor> {
        let d = self.order();
        let mut check = order.to_vec();
        check.sort_unstable();
        if check != (0..d).collect::<Vec<_>>() {
            return Err(Error::Domain(format!("{order:?} is not a permutation of the axes")));
        }
        let dims = self.dims();
        let new_axes: Vec<_> = order.iter().map(|&j| self.axes[j].clone()).collect();
        let new_dims: Vec<_> = order.iter().map(|&j| dims[j]).collect();
        let mut strides = vec![1usize; d];
        for j in (0..d.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * dims[j + 1];
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for_each_index(&new_dims, |multi| {
            let off: usize = multi
                .iter()
                .zip(order)
                .map(|(&k, &j)| k * strides[j])
                .sum();
            entries.push(self.entries[off]);
        });
        Ok(Tensor {
            field: self.field,
            axes: new_axes,
            entries,
        })
    }

    /// Lexicographically first coordinate with a nonzero entry (ρ(T)).
    pub fn lex_lead(&self) -> Option<Vec<usize>> {
        self.entries
            .iter()
            .position(|&v| v != 0)
            .map(|flat| self.labels_at(flat))
    }

    /// Standard inner product `Σ T[i] Q[i]`.
    pub fn inner_product(&self, other: &Tensor) -> Result<u32> {
        self.check_same_shape(other)?;
        let f = self.field;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
    }

    /// Invariant under every permutation of the legs.
    pub fn is_symmetric(&self) -> bool {
        if !self.is_principal() {
            return false;
        }
        let d = self.order();
        (0..d.saturating_sub(1)).all(|j| {
            let mut order: Vec<usize> = (0..d).collect();
            order.swap(j, j + 1);
            self.transpose(&order).map(|t| t == *self).unwrap_or(false)
        })
    }

    /// Sum of the tensor over all d! permutations of its legs.
    pub fn symmetrize(&self) -> Result<Tensor> {
        if !self.is_principal() {
            return Err(Error::Shape("symmetrize needs equal axes".into()));
        }
        let d = self.order();
        let mut out = Tensor::zeros(self.field, self.axes.clone())?;
        let mut perm: Vec<usize> = (0..d).collect();
        loop {
            out.axpy(1, &self.transpose(&perm)?)?;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(out)
    }
}

/// Visit every multi-index of a box with the given dimensions in row-major order.
pub fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; dims.len()];
    loop {
        f(&idx);
        let mut j = dims.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < dims[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Lexicographic successor; returns false after the last permutation.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn mat(p: u32, rows: &[&[i64]]) -> Tensor {
        let n = rows.len();
        let m = rows[0].len();
        Tensor::from_fn(f(p), vec![full_axis(n), full_axis(m)], |c| rows[c[0] - 1][c[1] - 1]).unwrap()
    }

    fn diag222() -> Tensor {
        let mut t = Tensor::cube(f(2), 2, 3);
        t.set(&[1, 1, 1], 1).unwrap();
        t.set(&[2, 2, 2], 1).unwrap();
        t
    }

    #[test]
    fn evaluate_examples() {
        let id = mat(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(id.evaluate(&[vec![1, 0], vec![1, 1]]).unwrap(), 1);
        assert_eq!(id.evaluate(&[vec![0, 0], vec![1, 1]]).unwrap(), 0);
        assert_eq!(diag222().evaluate(&[vec![1, 1], vec![1, 1], vec![1, 1]]).unwrap(), 0);
        assert!(matches!(id.evaluate(&[vec![1], vec![1, 1]]), Err(Error::Shape(_))));
        assert!(matches!(id.evaluate(&[vec![1, 1]]), Err(Error::Shape(_))));
    }

    #[test]
    fn restrict_examples() {
        let id = mat(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(id.restrict(&[1, 2]).unwrap(), id);
        let r = id.restrict(&[1]).unwrap();
        assert_eq!(r.entries(), &[1]);
        let r = diag222().restrict(&[2]).unwrap();
        assert_eq!(r.entries(), &[1]);
        assert_eq!(r.axes(), &[vec![2], vec![2], vec![2]]);
        assert!(matches!(id.restrict(&[3]), Err(Error::Domain(_))));
    }

    #[test]
    fn restrict_rect_examples() {
        let id = mat(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(id.restrict_rect(&[vec![1, 2], vec![1, 2]]).unwrap(), id);
        assert_eq!(id.restrict_rect(&[vec![1], vec![2]]).unwrap().entries(), &[0]);
        assert_eq!(
            diag222().restrict_rect(&[vec![2], vec![2], vec![2]]).unwrap().entries(),
            &[1]
        );
        assert!(matches!(
            id.restrict_rect(&[vec![1], vec![5]]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn permute_legs_examples() {
        let m = mat(2, &[&[0, 1], &[0, 0]]);
        let ident = vec![vec![1, 2], vec![1, 2]];
        assert_eq!(m.permute_legs(&ident).unwrap(), m);
        let swapped = m.permute_legs(&[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(swapped, mat(2, &[&[1, 0], &[0, 0]]));
        assert_eq!(swapped.permute_legs(&[vec![1, 2], vec![2, 1]]).unwrap(), m);
        assert!(matches!(
            m.permute_legs(&[vec![1, 2], vec![1, 1]]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn lex_lead_examples() {
        assert_eq!(Tensor::cube(f(3), 3, 3).lex_lead(), None);
        let e = Tensor::unit(f(3), vec![full_axis(3); 3], &[3, 3, 3]).unwrap();
        assert_eq!(e.lex_lead(), Some(vec![3, 3, 3]));
        assert_eq!(mat(2, &[&[0, 1], &[1, 0]]).lex_lead(), Some(vec![1, 2]));
    }

    #[test]
    fn inner_product_examples() {
        let t = Tensor::from_fn(f(5), vec![full_axis(2); 3], |c| (c[0] + 2 * c[1] + 3 * c[2]) as i64).unwrap();
        let e = Tensor::unit(f(5), vec![full_axis(2); 3], &[2, 2, 2]).unwrap();
        assert_eq!(t.inner_product(&e).unwrap(), t.get(&[2, 2, 2]).unwrap());
        assert_eq!(t.inner_product(&Tensor::cube(f(5), 2, 3)).unwrap(), 0);
        let e12 = Tensor::unit(f(3), vec![full_axis(2); 2], &[1, 2]).unwrap();
        assert_eq!(e12.symmetrize().unwrap().inner_product(&e12).unwrap(), 1);
        assert!(t.inner_product(&e12).is_err());
    }

    #[test]
    fn symmetrize_examples() {
        let s = mat(3, &[&[1, 2], &[2, 0]]);
        assert_eq!(s.symmetrize().unwrap(), s.scale(2));
        let e12 = Tensor::unit(f(3), vec![full_axis(2); 2], &[1, 2]).unwrap();
        assert_eq!(e12.symmetrize().unwrap(), mat(3, &[&[0, 1], &[1, 0]]));

        // each of the three cells of the orbit is hit by two permutations
        let e112 = Tensor::unit(f(3), vec![full_axis(2); 3], &[1, 1, 2]).unwrap();
        let sym = e112.symmetrize().unwrap();
        let support: Vec<_> = sym.nonzero().collect();
        assert_eq!(
            support,
            vec![(vec![1, 1, 2], 2), (vec![1, 2, 1], 2), (vec![2, 1, 1], 2)]
        );
        assert!(sym.is_symmetric());
        assert!(!e112.is_symmetric());
        let over_f2 = Tensor::unit(f(2), vec![full_axis(2); 3], &[1, 1, 2]).unwrap();
        assert!(over_f2.symmetrize().unwrap().is_zero());
    }

    #[test]
    fn transpose_moves_axes() {
        let t = Tensor::from_fn(f(7), vec![full_axis(2), full_axis(3), full_axis(4)], |c| {
            (c[0] * 100 + c[1] * 10 + c[2]) as i64
        })
        .unwrap();
        let tt = t.transpose(&[2, 0, 1]).unwrap();
        assert_eq!(tt.dims(), vec![4, 2, 3]);
        for (c, v) in t.nonzero() {
            assert_eq!(tt.get(&[c[2], c[0], c[1]]).unwrap(), v);
        }
    }

    #[test]
    fn constructor_validation() {
        assert!(Tensor::new(f(2), vec![vec![2, 1]], vec![0, 0]).is_err());
        assert!(Tensor::new(f(2), vec![vec![1, 2]], vec![0]).is_err());
        assert!(Tensor::new(f(2), vec![vec![1, 2]], vec![0, 2]).is_err());
        assert!(Tensor::new(f(2), vec![vec![0]], vec![0]).is_err());
        assert!(Tensor::new(f(2), vec![], vec![]).is_err());
    }

    #[test]
    fn permutation_iterator_visits_all() {
        let mut v = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
