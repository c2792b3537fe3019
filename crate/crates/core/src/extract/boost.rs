//! Pivot sub-tensors and the one-coordinate rank increment.

use serde::{Deserialize, Serialize};

use crate::algebra::{full_axis, Tensor};
use crate::error::{Error, Result};
use crate::extract::matching::PivotInfo;
use crate::rank::{bias, BiasValue, RankThreshold};

/// `Q(i_1,…,i_d) = T(base + (f(i_1),…,f(i_d)))` on labels `[rs]`.
///
/// `position` is the 1-based rank of `t` among the selected pivots; the result
/// is checked to have lex lead `(position,…,position)`.
pub fn build_q(t: &Tensor, pivot: &PivotInfo, position: usize) -> Result<Tensor> {
    let d = t.order();
    let rs = pivot.len();
    let base = pivot.base();
    if base.len() != d {
        return Err(Error::Shape("matching order differs from tensor order".into()));
    }
    if position == 0 || position > rs {
        return Err(Error::Domain(format!("pivot position {position} outside [1, {rs}]")));
    }
    let rect: Vec<Vec<usize>> = base
        .iter()
        .map(|&b| pivot.f.iter().map(|&fi| b + fi).collect())
        .collect();
    let q = t
        .restrict_rect(&rect)
        .map_err(|e| Error::Domain(format!("pivot rectangle leaves the tensor: {e}")))?
        .relabel(vec![full_axis(rs); d])?;
    let diag = vec![position; d];
    if q.lex_lead().as_ref() != Some(&diag) {
        return Err(Error::invariant(
            "build_Q",
            format!("lead of Q_{position} is {:?}, expected {diag:?}", q.lex_lead()),
        ));
    }
    let prefix = q.restrict_prefix(position)?;
    if prefix.nonzero().any(|(c, _)| c != diag) {
        return Err(Error::invariant(
            "build_Q",
            format!("Q_{position} restricted to [{position}] has support off the diagonal corner"),
        ));
    }
    Ok(q)
}

/// One step of the increment: the chosen `λ`, the new `R + λQ`, and the exact
/// bias of its restriction to the first `i + 1` labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoostStep {
    pub lambda: u32,
    #[serde(skip)]
    pub tensor: Option<Tensor>,
    pub bias: BiasValue,
}

/// Exhaustive search for the `λ` minimising `bias((R + λQ)_{|[i+1]})`, where
/// the restriction keeps the first `i + 1` labels of each axis. Ties go to
/// the smallest `λ`.
pub fn best_lambda(r: &Tensor, q: &Tensor, i: usize) -> Result<(u32, BiasValue)> {
    let field = r.field();
    let rp = r.restrict_prefix(i + 1)?;
    let qp = q.restrict_prefix(i + 1)?;
    let mut best: Option<(u32, BiasValue)> = None;
    for lambda in field.elements() {
        let mut cand = rp.clone();
        cand.axpy(lambda, &qp)?;
        let b = bias(&cand);
        if best.as_ref().is_none_or(|(_, cur)| b < *cur) {
            best = Some((lambda, b));
        }
    }
    Ok(best.expect("fields are non-empty"))
}

/// Extend `R` (whose first `i` labels carry bias `≤ ρ^i`) by a multiple of
/// `Q`, whose restriction to the first `i + 1` labels is a nonzero multiple of
/// the corner unit tensor, so the first `i + 1` labels carry bias `≤ ρ^{i+1}`.
pub fn lambda_boost(r: &Tensor, q_next: &Tensor, i: usize, thr_base: &RankThreshold) -> Result<BoostStep> {
    if !r.same_shape(q_next) || !r.is_principal() {
        return Err(Error::Shape("R and Q must share one principal shape".into()));
    }
    let qp = q_next.restrict_prefix(i + 1)?;
    let corner = qp.len() - 1;
    if qp.entries()[corner] == 0 || qp.entries()[..corner].iter().any(|&v| v != 0) {
        return Err(Error::Precondition(format!(
            "Q restricted to the first {} labels is not a nonzero multiple of the corner unit",
            i + 1
        )));
    }
    let prev = bias(&r.restrict_prefix(i)?);
    if !prev.leq_threshold(&thr_base.with_power(i as u32)) {
        return Err(Error::Precondition(format!(
            "bias of R on the first {i} labels is {prev}, above the threshold"
        )));
    }
    let (lambda, b) = best_lambda(r, q_next, i)?;
    if !b.leq_threshold(&thr_base.with_power(i as u32 + 1)) {
        return Err(Error::invariant(
            "lambda_boost",
            format!("best λ = {lambda} leaves bias {b} above ρ^{}", i + 1),
        ));
    }
    let mut next = r.clone();
    next.axpy(lambda, q_next)?;
    Ok(BoostStep {
        lambda,
        tensor: Some(next),
        bias: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use crate::extract::matching::MatchingId;
    use crate::rank::c_constant;
    use num_bigint::BigUint;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn diagonal(field: PrimeField, n: usize, d: usize, k: usize) -> Tensor {
        Tensor::from_fn(field, vec![full_axis(n); d], |c| {
            (c.iter().all(|&x| x == c[0]) && c[0] <= k) as i64
        })
        .unwrap()
    }

    #[test]
    fn single_entry_gives_scaled_unit() {
        let field = f(3);
        let mut t = Tensor::cube(field, 4, 2);
        t.set(&[2, 3], 2).unwrap();
        let piv = PivotInfo {
            matching: MatchingId::new(0, vec![1]),
            selected: vec![0, 1],
            f: vec![1, 2],
        };
        let q = build_q(&t, &piv, 2).unwrap();
        assert_eq!(q.nonzero().collect::<Vec<_>>(), vec![(vec![2, 2], 2)]);
        assert!(matches!(build_q(&t, &piv, 1), Err(Error::Invariant { .. })));
    }

    #[test]
    fn base_case_from_zero() {
        for (p, d) in [(2, 3), (3, 3), (2, 2), (5, 2)] {
            let field = f(p);
            let (rho, _) = c_constant(p, d);
            let q = Tensor::unit(field, vec![full_axis(3); d], &vec![1; d]).unwrap().scale(p - 1);
            let step = lambda_boost(&Tensor::cube(field, 3, d), &q, 0, &rho).unwrap();
            assert_eq!(step.lambda, 1);
            // 1 - ((p-1)/p)^{d-1}
            let den = (p as u64).pow(d as u32 - 1);
            let num = den - (p as u64 - 1).pow(d as u32 - 1);
            assert_eq!(step.bias, BiasValue::new(BigUint::from(num), p, d as u32 - 1).unwrap());
        }
    }

    #[test]
    fn diagonal_extension_over_f2() {
        let field = f(2);
        let (rho, _) = c_constant(2, 3);
        for i in 1..4 {
            let r = diagonal(field, 4, 3, i);
            let q = Tensor::unit(field, vec![full_axis(4); 3], &[i + 1; 3]).unwrap();
            let step = lambda_boost(&r, &q, i, &rho).unwrap();
            assert_eq!(step.lambda, 1);
            // a diagonal with k ones has bias (3/4)^k
            let expect = BiasValue::new(BigUint::from(3u32).pow(i as u32 + 1), 2, 2 * (i as u32 + 1)).unwrap();
            assert_eq!(step.bias, expect);
        }
    }

    #[test]
    fn ties_take_smallest_lambda() {
        // over F_3 with R = 0 on the prefix, λ = 1 and λ = 2 tie
        let field = f(3);
        let q = Tensor::unit(field, vec![full_axis(2); 2], &[1, 1]).unwrap();
        let (lambda, _) = best_lambda(&Tensor::cube(field, 2, 2), &q, 0).unwrap();
        assert_eq!(lambda, 1);
    }

    #[test]
    fn boost_rejects_bad_pattern() {
        let field = f(2);
        let (rho, _) = c_constant(2, 2);
        let q = Tensor::unit(field, vec![full_axis(3); 2], &[1, 2]).unwrap();
        assert!(matches!(
            lambda_boost(&Tensor::cube(field, 3, 2), &q, 1, &rho),
            Err(Error::Precondition(_))
        ));
    }
}
