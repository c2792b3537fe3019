//! The Veronese map `x ↦ x⊗⋯⊗x` and compressed coordinates on symmetric tensors.

use itertools::Itertools;

use crate::algebra::field::PrimeField;
use crate::algebra::tensor::{full_axis, Tensor};
use crate::error::{Error, Result};

/// `φ_d(x)`: the order-`d` tensor with entry `x_{i_1}⋯x_{i_d}` at `(i_1,…,i_d)`.
pub fn veronese(field: PrimeField, x: &[u32], d: usize) -> Result<Tensor> {
    if d == 0 {
        return Err(Error::Domain("veronese order must be at least 1".into()));
    }
    let n = x.len();
    Tensor::from_fn(field, vec![full_axis(n); d], |c| {
        c.iter()
            .fold(1u32, |acc, &i| field.mul(acc, x[i - 1] % field.p())) as i64
    })
}

/// Degree-`d` monomials in `n` variables as sorted label multisets, in lex order.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<usize>> {
    (1..=n).combinations_with_replacement(d).collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension `C(n+d-1, d)` of the symmetric tensors.
pub fn symmetric_dim(n: usize, d: usize) -> usize {
    binomial((n + d - 1) as u64, d as u64) as usize
}

fn require_p_above_d(field: PrimeField, d: usize) -> Result<()> {
    if (field.p() as usize) <= d {
        return Err(Error::Unsupported(format!(
            "compressed symmetric coordinates need p > d (p = {}, d = {d})",
            field.p()
        )));
    }
    Ok(())
}

/// The vector `(x^α)_α` over degree-`d` monomials, of length `C(n+d-1, d)`.
pub fn monomial_vector(field: PrimeField, x: &[u32], d: usize) -> Result<Vec<u32>> {
    require_p_above_d(field, d)?;
    Ok(monomials(x.len(), d)
        .iter()
        .map(|alpha| {
            alpha
                .iter()
                .fold(1u32, |acc, &i| field.mul(acc, x[i - 1] % field.p()))
        })
        .collect())
}

/// Number of distinct coordinates whose sorted form is `alpha` (a multinomial
/// coefficient), reduced mod p.
pub fn orbit_size(field: PrimeField, alpha: &[usize]) -> u32 {
    let mut size = 1u64;
    let mut placed = 0u64;
    for (_, run) in &alpha.iter().chunk_by(|&&l| l) {
        let c = run.count() as u64;
        size *= binomial(placed + c, c);
        placed += c;
    }
    (size % field.p() as u64) as u32
}

/// The symmetric tensor whose entries on the orbit of `monomials(n, d)[i]`
/// all equal `values[i]`.
pub fn symmetric_from_orbits(field: PrimeField, n: usize, d: usize, values: &[u32]) -> Result<Tensor> {
    let monos = monomials(n, d);
    if values.len() != monos.len() {
        return Err(Error::Shape(format!(
            "{} orbit values for {} monomials",
            values.len(),
            monos.len()
        )));
    }
    Tensor::from_fn(field, vec![full_axis(n); d], |c| {
        let mut key = c.to_vec();
        key.sort_unstable();
        let idx = monos.binary_search(&key).expect("sorted coordinate is a monomial");
        values[idx] as i64
    })
}

/// Read the orbit values of a symmetric tensor back off (inverse of
/// [`symmetric_from_orbits`]).
pub fn orbit_values(t: &Tensor) -> Result<Vec<u32>> {
    if !t.is_symmetric() {
        return Err(Error::Domain("tensor is not symmetric".into()));
    }
    let n = t.axis(0).len();
    monomials(n, t.order())
        .iter()
        .map(|alpha| {
            let labels: Vec<usize> = alpha.iter().map(|&i| t.axis(0)[i - 1]).collect();
            t.get(&labels)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn veronese_examples() {
        assert_eq!(veronese(f(2), &[1, 1], 2).unwrap().entries(), &[1, 1, 1, 1]);
        assert!(veronese(f(5), &[0, 0, 0], 3).unwrap().is_zero());
        assert_eq!(veronese(f(3), &[1, 2], 2).unwrap().entries(), &[1, 2, 2, 1]);
    }

    #[test]
    fn monomial_vector_examples() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(symmetric_dim(3, 2), 6);
        assert_eq!(monomial_vector(f(3), &[0, 0, 0], 2).unwrap(), vec![0; 6]);
        assert_eq!(monomial_vector(f(3), &[1, 1], 2).unwrap(), vec![1, 1, 1]);
        assert!(matches!(
            monomial_vector(f(2), &[1, 1], 2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn orbit_sizes() {
        let field = f(101);
        assert_eq!(orbit_size(field, &[1, 1, 1]), 1);
        assert_eq!(orbit_size(field, &[1, 1, 2]), 3);
        assert_eq!(orbit_size(field, &[1, 2, 3]), 6);
        assert_eq!(orbit_size(field, &[1, 1, 2, 2]), 6);
        // sizes are the counts of distinct coordinates in each orbit
        let t = Tensor::cube(field, 3, 3);
        let mut counts = std::collections::HashMap::new();
        for flat in 0..t.len() {
            let mut key = t.labels_at(flat);
            key.sort_unstable();
            *counts.entry(key).or_insert(0u32) += 1;
        }
        for (alpha, c) in counts {
            assert_eq!(orbit_size(field, &alpha), c);
        }
    }

    #[test]
    fn orbit_round_trip() {
        let field = f(5);
        let vals: Vec<u32> = (0..symmetric_dim(3, 3) as u32).map(|i| i % 5).collect();
        let t = symmetric_from_orbits(field, 3, 3, &vals).unwrap();
        assert!(t.is_symmetric());
        assert_eq!(orbit_values(&t).unwrap(), vals);
    }
}
