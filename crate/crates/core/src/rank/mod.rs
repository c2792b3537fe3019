//! Exact bias, analytic rank, matrix rank, partition rank on micro instances
//! and the coset character averages used in the rank-increment argument.

pub mod bias;
pub mod coset;
pub mod prank;

pub use bias::{
    arank, bias, bias_leq_threshold, bias_on_axis, c_constant, count_annihilating, BiasValue,
    RankThreshold,
};
pub use coset::{coset_bias, CosetBias};
pub use prank::{enumerate_prank1, prank_oracle, PartitionRank};

use crate::algebra::{linalg, Tensor};
use crate::error::{Error, Result};

/// Rank of an order-2 tensor over F_p.
pub fn matrix_rank(m: &Tensor) -> Result<usize> {
    if m.order() != 2 {
        return Err(Error::Domain(format!(
            "matrix rank needs an order-2 tensor, got order {}",
            m.order()
        )));
    }
    let cols = m.axis(1).len();
    let rows: Vec<Vec<u32>> = m.entries().chunks(cols.max(1)).map(<[u32]>::to_vec).collect();
    if cols == 0 {
        return Ok(0);
    }
    Ok(linalg::rank(m.field(), &rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{full_axis, PrimeField};

    #[test]
    fn matrix_rank_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let id = Tensor::from_fn(f2, vec![full_axis(4); 2], |c| (c[0] == c[1]) as i64).unwrap();
        assert_eq!(matrix_rank(&id).unwrap(), 4);
        assert_eq!(matrix_rank(&Tensor::cube(f2, 3, 2)).unwrap(), 0);
        let ones = Tensor::from_fn(f2, vec![full_axis(2); 2], |_| 1).unwrap();
        assert_eq!(matrix_rank(&ones).unwrap(), 1);
        assert!(matches!(matrix_rank(&Tensor::cube(f2, 2, 3)), Err(Error::Domain(_))));
    }
}
