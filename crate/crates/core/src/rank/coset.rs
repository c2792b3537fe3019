//! Character averages of a tensor over shifted copies of a subspace:
//! `|E_{u_1..u_d ∈ U} χ(T(u_1+v_1, …, u_d+v_d))|` for `F^n = U ⊕ V`.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::linalg::{self, Echelon};
use crate::algebra::Tensor;
use crate::error::{Error, Result};

/// Upper bound on the absolute error of [`CosetBias::magnitude`] for `p > 2`.
pub const MAGNITUDE_ERROR: f64 = 1e-12;

/// Largest number of enumerated tuples `p^{d·dim U}`.
pub const MAX_TUPLES: u64 = 1 << 24;

#[derive(Clone, Debug, Serialize)]
pub struct CosetBias {
    /// `histogram[a]` counts tuples with `T(u_1+v_1, …) = a`.
    pub histogram: Vec<u64>,
    pub total: u64,
    pub magnitude: f64,
    /// Exact value `|h_0 - h_1| / total`, available for p = 2.
    #[serde(skip)]
    pub exact: Option<BigRational>,
}

impl CosetBias {
    fn from_histogram(histogram: Vec<u64>) -> Self {
        let p = histogram.len();
        let total: u64 = histogram.iter().sum();
        let exact = (p == 2).then(|| {
            BigRational::new(
                BigUint::from(histogram[0].abs_diff(histogram[1])).into(),
                BigUint::from(total).into(),
            )
        });
        let magnitude = match &exact {
            Some(r) => r.to_f64().unwrap(),
            None => {
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for (a, &h) in histogram.iter().enumerate() {
                    let theta = 2.0 * PI * a as f64 / p as f64;
                    re += h as f64 * theta.cos();
                    im += h as f64 * theta.sin();
                }
                re.hypot(im) / total as f64
            }
        };
        CosetBias {
            histogram,
            total,
            magnitude,
            exact,
        }
    }

    /// `self ≤ other`, exactly for p = 2 and up to `tol` otherwise.
    pub fn leq(&self, other: &CosetBias, tol: f64) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a <= b,
            _ => self.magnitude <= other.magnitude + tol,
        }
    }
}

/// Average of `χ(T(u_1+v_1, …, u_d+v_d))` over `u_j ∈ U`, in absolute value.
///
/// `u_basis` and `v_basis` must span complementary subspaces of `F^n`, and
/// each shift must lie in `span(v_basis)`.
pub fn coset_bias(
    t: &Tensor,
    u_basis: &[Vec<u32>],
    v_basis: &[Vec<u32>],
    shifts: &[Vec<u32>],
) -> Result<CosetBias> {
    let field = t.field();
    let p = field.p();
    let d = t.order();
    if !t.is_principal() {
        return Err(Error::Shape("coset bias needs a principal tensor".into()));
    }
    let n = t.axis(0).len();
    if u_basis.iter().chain(v_basis).chain(shifts).any(|v| v.len() != n) {
        return Err(Error::Shape(format!("vectors must have length {n}")));
    }
    if shifts.len() != d {
        return Err(Error::Shape(format!("{} shifts for order {d}", shifts.len())));
    }
    let mut all = u_basis.to_vec();
    all.extend_from_slice(v_basis);
    if u_basis.len() + v_basis.len() != n || linalg::rank(field, &all) != n {
        return Err(Error::Domain("U and V are not complementary subspaces".into()));
    }
    let v_span = Echelon::from_rows(field, n, v_basis.iter().map(Vec::as_slice));
    if shifts.iter().any(|s| v_span.coordinates(s).is_none()) {
        return Err(Error::Domain("shift vector is not in V".into()));
    }
    let dim_u = u_basis.len() as u32;
    let tuples = (p as u64).checked_pow(dim_u * d as u32);
    if !tuples.is_some_and(|k| k <= MAX_TUPLES) {
        return Err(Error::ResourceGuard("coset enumeration too large".into()));
    }

    // every vector of U
    let u_points: Vec<Vec<u32>> = (0..(p as u64).pow(dim_u))
        .map(|mut code| {
            let mut v = vec![0u32; n];
            for b in u_basis {
                let c = (code % p as u64) as u32;
                code /= p as u64;
                for (a, &x) in v.iter_mut().zip(b) {
                    *a = field.add(*a, field.mul(c, x));
                }
            }
            v
        })
        .collect();
    let mut histogram = vec![0u64; p as usize];
    accumulate(t, &u_points, shifts, &mut histogram)?;
    Ok(CosetBias::from_histogram(histogram))
}

fn accumulate(t: &Tensor, u_points: &[Vec<u32>], shifts: &[Vec<u32>], hist: &mut [u64]) -> Result<()> {
    let field = t.field();
    let slot = t.order() - 1;
    let shift = &shifts[slot];
    for u in u_points {
        let w: Vec<u32> = u.iter().zip(shift).map(|(&a, &b)| field.add(a, b)).collect();
        if slot == 0 {
            let val = t
                .entries()
                .iter()
                .zip(&w)
                .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)));
            hist[val as usize] += 1;
        } else {
            accumulate(&t.contract_last(&w)?, u_points, shifts, hist)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{full_axis, PrimeField};
    use crate::rank::bias;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_shifted_by_e2() {
        let id = Tensor::from_fn(f(2), vec![full_axis(2); 2], |c| (c[0] == c[1]) as i64).unwrap();
        let u = vec![vec![1, 0]];
        let v = vec![vec![0, 1]];
        let shifted = coset_bias(&id, &u, &v, &[vec![0, 1], vec![0, 1]]).unwrap();
        let base = coset_bias(&id, &u, &v, &[vec![0, 0], vec![0, 0]]).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(shifted.exact.as_ref(), Some(&half));
        assert_eq!(base.exact.as_ref(), Some(&half));
        assert!(shifted.leq(&base, 0.0));
    }

    #[test]
    fn zero_tensor_is_one() {
        let z = Tensor::cube(f(3), 3, 2);
        let u = vec![vec![1, 0, 0], vec![0, 1, 1]];
        let v = vec![vec![0, 0, 1]];
        let c = coset_bias(&z, &u, &v, &[vec![0, 0, 2], vec![0, 0, 1]]).unwrap();
        assert!((c.magnitude - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_shift_equals_restricted_bias() {
        let field = f(3);
        let t = Tensor::from_fn(field, vec![full_axis(3); 3], |c| (c[0] * c[1] + c[2]) as i64).unwrap();
        let u = vec![vec![1, 0, 0], vec![0, 1, 0]];
        let v = vec![vec![0, 0, 1]];
        let zero = vec![vec![0; 3]; 3];
        let c = coset_bias(&t, &u, &v, &zero).unwrap();
        // with U spanned by coordinate vectors, the zero-shift average is the
        // bias of the principal restriction
        let b = bias(&t.restrict(&[1, 2]).unwrap());
        assert!((c.magnitude - b.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_complementary() {
        let t = Tensor::cube(f(2), 2, 2);
        let u = vec![vec![1, 1]];
        let v = vec![vec![1, 1]];
        assert!(matches!(
            coset_bias(&t, &u, &v, &[vec![0, 0], vec![0, 0]]),
            Err(Error::Domain(_))
        ));
        let v = vec![vec![0, 1]];
        assert!(matches!(
            coset_bias(&t, &u, &v, &[vec![1, 0], vec![0, 0]]),
            Err(Error::Domain(_))
        ));
    }
}
