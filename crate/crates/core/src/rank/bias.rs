//! Exact bias and analytic rank.
//!
//! The bias `E_{x_1..x_d} χ(T(x_1,…,x_d))` is computed without characters:
//! averaging `χ` over `x_1` yields the indicator that the contracted functional
//! `T(·, x_2, …, x_d)` vanishes, so the bias is the number of annihilating
//! tuples `(x_2,…,x_d)` divided by `p^{|S_2|+⋯+|S_d|}`.
//!
//! The enumeration contracts one axis at a time. Consecutive vectors on an
//! axis are visited as an odometer in which every step adds exactly one slice
//! to the running contraction, so a step costs one slice addition.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Tensor;
use crate::error::{Error, Result};

/// The exact rational `numerator / p^exponent`.
///
/// Values produced by [`bias`] are not reduced: `numerator` is the raw count of
/// annihilating tuples and `exponent` the number of enumerated coordinates.
/// Equality and ordering compare the rational values.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "BiasRepr", try_from = "BiasRepr")]
pub struct BiasValue {
    numerator: BigUint,
    p: u32,
    exponent: u32,
}

#[derive(Serialize, Deserialize)]
struct BiasRepr {
    num: String,
    p: u32,
    exp: u32,
    #[serde(default)]
    arank: Option<f64>,
}

impl From<BiasValue> for BiasRepr {
    fn from(b: BiasValue) -> Self {
        let arank = b.arank();
        BiasRepr {
            num: b.numerator.to_str_radix(10),
            p: b.p,
            exp: b.exponent,
            arank: arank.is_finite().then_some(arank),
        }
    }
}

impl TryFrom<BiasRepr> for BiasValue {
    type Error = Error;
    fn try_from(r: BiasRepr) -> Result<Self> {
        let num = BigUint::parse_bytes(r.num.as_bytes(), 10)
            .ok_or_else(|| Error::Parse(format!("bad bias numerator {:?}", r.num)))?;
        BiasValue::new(num, r.p, r.exp)
    }
}

impl BiasValue {
    pub fn new(numerator: BigUint, p: u32, exponent: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::Domain(format!("bias base {p} is not a field size")));
        }
        if numerator > BigUint::from(p).pow(exponent) {
            return Err(Error::Domain("bias numerator exceeds p^exponent".into()));
        }
        Ok(BiasValue {
            numerator,
            p,
            exponent,
        })
    }

    pub fn one(p: u32) -> Self {
        BiasValue {
            numerator: BigUint::one(),
            p,
            exponent: 0,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::from(self.p).pow(self.exponent)
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.numerator.clone().into(), self.denominator().into())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_ratio().to_f64().unwrap_or(f64::NAN)
    }

    /// `-log_p(bias)`; infinite for a zero bias. Reporting only.
    pub fn arank(&self) -> f64 {
        if self.numerator.is_zero() {
            return f64::INFINITY;
        }
        let ln_p = (self.p as f64).ln();
        // ln of a big integer: scale down to avoid overflow
        let bits = self.numerator.bits();
        let ln_num = if bits > 1000 {
            let shift = bits - 900;
            (&self.numerator >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        } else {
            self.numerator.to_f64().unwrap().ln()
        };
        self.exponent as f64 - ln_num / ln_p
    }

    /// Exact `self ≤ (num/den) · other`, by cross-multiplication.
    pub fn leq_scaled(&self, other: &BiasValue, num: &BigUint, den: &BigUint) -> bool {
        &self.numerator * den * other.denominator() <= num * &other.numerator * self.denominator()
    }

    /// Exact `self ≤ ρ^i` for the threshold `ρ^i`.
    pub fn leq_threshold(&self, thr: &RankThreshold) -> bool {
        bias_leq_threshold(self, thr)
    }
}

impl PartialEq for BiasValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BiasValue {}

impl PartialOrd for BiasValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BiasValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.numerator * other.denominator()).cmp(&(&other.numerator * self.denominator()))
    }
}

impl fmt::Display for BiasValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.numerator, self.p, self.exponent)
    }
}

/// The bias threshold `ρ^power` with `ρ = base_num / base_den ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankThreshold {
    pub base_num: u64,
    pub base_den: u64,
    pub power: u32,
}

impl RankThreshold {
    pub fn new(base_num: u64, base_den: u64, power: u32) -> Result<Self> {
        if base_num == 0 || base_den == 0 || base_num > base_den {
            return Err(Error::Domain(format!(
                "threshold base {base_num}/{base_den} must lie in (0, 1]"
            )));
        }
        Ok(RankThreshold {
            base_num,
            base_den,
            power,
        })
    }

    pub fn with_power(&self, power: u32) -> Self {
        RankThreshold { power, ..self.clone() }
    }

    /// `ρ^power` as an exact rational.
    pub fn bias_bound(&self) -> BigRational {
        BigRational::new(
            BigUint::from(self.base_num).pow(self.power).into(),
            BigUint::from(self.base_den).pow(self.power).into(),
        )
    }

    /// The analytic-rank floor `power · (-log_p ρ)`. Reporting only.
    pub fn arank_floor(&self, p: u32) -> f64 {
        self.power as f64 * -((self.base_num as f64 / self.base_den as f64).ln() / (p as f64).ln())
    }
}

/// Exact test `M / p^K ≤ (base_num / base_den)^i`, decided as
/// `M · base_den^i ≤ base_num^i · p^K`.
pub fn bias_leq_threshold(b: &BiasValue, thr: &RankThreshold) -> bool {
    let lhs = b.numerator() * BigUint::from(thr.base_den).pow(thr.power);
    let rhs = BigUint::from(thr.base_num).pow(thr.power) * b.denominator();
    lhs <= rhs
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The per-step rank increment: `ρ = 1 - ((p-1)/p)^d` in lowest terms (as a
/// threshold with power 1) together with `c = -log_p ρ`.
pub fn c_constant(p: u32, d: usize) -> (RankThreshold, f64) {
    let den = (p as u64).pow(d as u32);
    let num = den - (p as u64 - 1).pow(d as u32);
    let g = gcd(num, den);
    let thr = RankThreshold {
        base_num: num / g,
        base_den: den / g,
        power: 1,
    };
    let c = thr.arank_floor(p);
    (thr, c)
}

/// Below this many leaves the enumeration stays on the calling thread.
const PARALLEL_LEAVES: u64 = 1 << 14;

/// Number of `(x_2,…,x_d)` annihilating the functional `T(·, x_2, …, x_d)`.
pub fn count_annihilating(t: &Tensor) -> u64 {
    let dims = t.dims();
    let k: u32 = dims[1..].iter().sum::<usize>() as u32;
    let p = t.p() as u64;
    assert!(
        p.checked_pow(k).is_some_and(|v| v < (1 << 63)),
        "bias enumeration over {p}^{k} points is out of range"
    );
    count_rec(t.entries(), &dims, t.p(), p.pow(k) >= PARALLEL_LEAVES)
}

fn count_rec(entries: &[u32], dims: &[usize], p: u32, parallel: bool) -> u64 {
    let order = dims.len();
    if entries.iter().all(|&v| v == 0) {
        let k: usize = dims[1..].iter().sum();
        return (p as u64).pow(k as u32);
    }
    if order == 1 {
        return 0;
    }
    let m = dims[order - 1];
    let sub_dims = &dims[..order - 1];
    let sub: usize = sub_dims.iter().product();
    // slices[i] = T[..., i], contiguous
    let mut slices = vec![0u32; m * sub];
    for r in 0..sub {
        for i in 0..m {
            slices[i * sub + r] = entries[r * m + i];
        }
    }
    let leaf = |cur: &[u32]| count_rec(cur, sub_dims, p, false);

    // The top `split` digits are fixed per parallel task.
    let mut split = 0;
    if parallel {
        let mut tasks = 1u64;
        while split < m && tasks < 64 {
            split += 1;
            tasks *= p as u64;
        }
    }
    let low = m - split;
    if split == 0 {
        return sweep(&slices, sub, low, p, vec![0; sub], &leaf);
    }
    let tasks = (p as u64).pow(split as u32);
    (0..tasks)
        .into_par_iter()
        .map(|mut prefix| {
            let mut cur = vec![0u32; sub];
            for i in low..m {
                let digit = (prefix % p as u64) as u32;
                prefix /= p as u64;
                let slice = &slices[i * sub..(i + 1) * sub];
                for (a, &b) in cur.iter_mut().zip(slice) {
                    *a = ((*a as u64 + digit as u64 * b as u64) % p as u64) as u32;
                }
            }
            sweep(&slices, sub, low, p, cur, &leaf)
        })
        .sum()
}

/// Odometer over the first `digits` slice coefficients starting from `cur`.
fn sweep(
    slices: &[u32],
    sub: usize,
    digits: usize,
    p: u32,
    mut cur: Vec<u32>,
    leaf: &impl Fn(&[u32]) -> u64,
) -> u64 {
    let mut x = vec![0u32; digits];
    let mut total = 0u64;
    loop {
        total += leaf(&cur);
        let mut pos = 0;
        loop {
            if pos == digits {
                return total;
            }
            let slice = &slices[pos * sub..(pos + 1) * sub];
            for (a, &b) in cur.iter_mut().zip(slice) {
                let s = *a + b;
                *a = if s >= p { s - p } else { s };
            }
            x[pos] += 1;
            if x[pos] < p {
                break;
            }
            // p additions of the same slice cancel
            x[pos] = 0;
            pos += 1;
        }
    }
}

/// Exact bias of `T`, contracting the functional on axis 0.
pub fn bias(t: &Tensor) -> BiasValue {
    let k: usize = t.dims()[1..].iter().sum();
    BiasValue {
        numerator: BigUint::from(count_annihilating(t)),
        p: t.p(),
        exponent: k as u32,
    }
}

/// Exact bias with the functional taken on `axis` instead of axis 0.
pub fn bias_on_axis(t: &Tensor, axis: usize) -> Result<BiasValue> {
    let d = t.order();
    if axis >= d {
        return Err(Error::Domain(format!("axis {axis} out of range for order {d}")));
    }
    let mut order = vec![axis];
    order.extend((0..d).filter(|&j| j != axis));
    Ok(bias(&t.transpose(&order)?))
}

/// `-log_p bias(T)`, as a float for reporting.
pub fn arank(t: &Tensor) -> f64 {
    bias(t).arank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{full_axis, PrimeField};

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn bv(num: u64, p: u32, exp: u32) -> BiasValue {
        BiasValue::new(BigUint::from(num), p, exp).unwrap()
    }

    fn diag222() -> Tensor {
        let mut t = Tensor::cube(f(2), 2, 3);
        t.set(&[1, 1, 1], 1).unwrap();
        t.set(&[2, 2, 2], 1).unwrap();
        t
    }

    #[test]
    fn zero_tensor_has_bias_one() {
        for (n, d) in [(1, 2), (3, 3), (2, 4)] {
            let b = bias(&Tensor::cube(f(3), n, d));
            assert_eq!(b, BiasValue::one(3));
            assert_eq!(b.arank(), 0.0);
        }
    }

    #[test]
    fn single_entry_base_case() {
        let t = Tensor::new(f(2), vec![vec![1]; 3], vec![1]).unwrap();
        assert_eq!(bias(&t), bv(3, 2, 2));
    }

    #[test]
    fn diagonal_222() {
        let b = bias(&diag222());
        assert_eq!(b.numerator(), &BigUint::from(9u32));
        assert_eq!(b.exponent(), 4);
        assert!((b.arank() - (16.0f64 / 9.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn identity_matrix_arank_is_n() {
        for p in [2, 3, 5] {
            for n in 1..=4 {
                let id = Tensor::from_fn(f(p), vec![full_axis(n); 2], |c| (c[0] == c[1]) as i64).unwrap();
                let b = bias(&id);
                assert_eq!(b, bv(1, p, n as u32));
                assert!((b.arank() - n as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn order_one_is_zero_indicator() {
        let z = Tensor::zeros(f(3), vec![full_axis(2)]).unwrap();
        assert_eq!(bias(&z), BiasValue::one(3));
        let v = Tensor::new(f(3), vec![full_axis(2)], vec![0, 1]).unwrap();
        assert!(bias(&v).numerator().is_zero());
        assert!(bias(&v).arank().is_infinite());
    }

    #[test]
    fn empty_restriction_has_bias_one() {
        let t = diag222().restrict(&[]).unwrap();
        assert_eq!(bias(&t), BiasValue::one(2));
    }

    #[test]
    fn parallel_and_serial_agree() {
        let t = Tensor::from_fn(f(3), vec![full_axis(5); 3], |c| ((c[0] * 7 + c[1] * c[2]) % 3) as i64).unwrap();
        let dims = t.dims();
        assert_eq!(
            count_rec(t.entries(), &dims, 3, true),
            count_rec(t.entries(), &dims, 3, false)
        );
    }

    #[test]
    fn threshold_examples() {
        let rho = RankThreshold::new(7, 8, 1).unwrap();
        assert!(!BiasValue::one(2).leq_threshold(&rho));
        assert!(bv(3, 2, 2).leq_threshold(&rho));
        assert!(bv(9, 2, 4).leq_threshold(&rho.with_power(2)));
        // 9/16 vs (3/4)^2 is tight
        assert!(bv(9, 2, 4).leq_threshold(&RankThreshold::new(3, 4, 2).unwrap()));
        assert!(!bv(10, 2, 4).leq_threshold(&RankThreshold::new(3, 4, 2).unwrap()));
        assert!(RankThreshold::new(9, 8, 1).is_err());
    }

    #[test]
    fn c_constant_examples() {
        let (thr, c) = c_constant(2, 2);
        assert_eq!((thr.base_num, thr.base_den), (3, 4));
        assert!((c - (4.0f64 / 3.0).log2()).abs() < 1e-12);
        let (thr, c) = c_constant(2, 3);
        assert_eq!((thr.base_num, thr.base_den), (7, 8));
        assert!((c - (8.0f64 / 7.0).log2()).abs() < 1e-12);
        let (thr, _) = c_constant(3, 3);
        assert_eq!((thr.base_num, thr.base_den), (19, 27));
        for p in [2, 3, 5, 7, 11] {
            for d in 1..6 {
                let (thr, c) = c_constant(p, d);
                assert!(thr.base_num < thr.base_den);
                assert!(c > 0.0);
            }
        }
    }

    #[test]
    fn value_ordering() {
        assert_eq!(bv(1, 2, 1), bv(2, 2, 2));
        assert!(bv(1, 2, 2) < bv(1, 2, 1));
        assert!(bv(1, 3, 1) < bv(1, 2, 1));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(bias(&diag222())).unwrap();
        assert_eq!(v["num"], "9");
        assert_eq!(v["p"], 2);
        assert_eq!(v["exp"], 4);
        assert!((v["arank"].as_f64().unwrap() - 0.830).abs() < 1e-3);
        let back: BiasValue = serde_json::from_value(v).unwrap();
        assert_eq!(back, bv(9, 2, 4));
    }
}
