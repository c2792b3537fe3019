//! Checks of the two quantitative links bounding `Pr_x[φ_d(x) ∈ W^⊥]`.
//!
//! (a) `Pr_x[φ_d(x) ∈ W^⊥]^{2^{d-1}} ≤ E_{T∈W} bias(sym T)`, where `sym T` is
//! the sum of `T` over all leg permutations. Each `T(x,…,x)` is a degree-`d`
//! polynomial whose `(d-1)`-fold derivative form is `sym T`; `d - 1`
//! Cauchy–Schwarz steps and Jensen give the bound. For symmetric `T` and
//! `p > d`, `sym T = d!·T` has the same bias as `T`.
//!
//! (b) `E_{T∈W} bias(T) ≤ 1/p^m + (1 - 1/p^m)·β` when every nonzero element
//! of `W` has bias at most `β`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{SubspaceBasis, Tensor};
use crate::error::{Error, Result};
use crate::extract::projective_points;
use crate::rank::{bias, RankThreshold};
use crate::szemeredi::sampling::{decode_point, random_point, trial_rng};

/// Exact mode needs `p^n` at most this many points.
pub const EXACT_POINTS: u64 = 1 << 20;
/// Exact mode needs `p^m` at most this many elements of `W`.
pub const EXACT_ELEMENTS: u64 = 1 << 12;
pub const MC_POINTS: usize = 20_000;
pub const MC_ELEMENTS: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TailMode {
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub p: u32,
    pub d: usize,
    pub n: usize,
    pub m: usize,
    /// `"exact"` or `"monte-carlo"`.
    pub mode: String,
    pub symmetric: bool,
    /// `Pr_x[φ_d(x) ∈ W^⊥]` (estimate in Monte Carlo mode).
    pub pr_perp: f64,
    pub pr_perp_exact: Option<String>,
    /// Standard error of the estimate in Monte Carlo mode.
    pub pr_perp_stderr: Option<f64>,
    pub mean_bias: f64,
    pub mean_bias_exact: Option<String>,
    pub mean_sym_bias: f64,
    /// `(E bias(sym T))^{1/2^{d-1}}`.
    pub link_a_bound: f64,
    pub link_a_holds: bool,
    /// Same comparison with `bias(T)` in place of `bias(sym T)`; informative
    /// only, as it need not hold for non-symmetric `W` or `p ≤ d`.
    pub link_a_plain_holds: bool,
    /// `β` used in link (b).
    pub beta: f64,
    pub beta_source: String,
    pub link_b_bound: f64,
    pub link_b_holds: bool,
    pub holds: bool,
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `Σ_{T ∈ W} f(T) / p^m` from the values on projective points (which are
/// invariant under nonzero scaling), with `f(0) = 1`.
fn mean_over_w(p: u32, m: usize, projective_values: &[BigRational]) -> BigRational {
    let total = projective_values
        .iter()
        .fold(BigRational::zero(), |acc, v| acc + v)
        * BigRational::from_integer(BigInt::from(p - 1))
        + BigRational::one();
    total / BigRational::from_integer(BigInt::from(BigUint::from(p).pow(m as u32)))
}

fn in_perp(w: &[Tensor], x: &[u32], d: usize) -> Result<bool> {
    let xs = vec![x.to_vec(); d];
    for t in w {
        if t.evaluate(&xs)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check links (a) and (b) for `W = span(w_basis)`. `beta` defaults to the
/// largest exact bias over the nonzero elements of `W`.
pub fn tail_bound_check(
    w_basis: &SubspaceBasis,
    beta: Option<&RankThreshold>,
    mode: TailMode,
    seed: u64,
) -> Result<TailReport> {
    let first = w_basis
        .tensors()
        .first()
        .ok_or_else(|| Error::Precondition("W must have a nonempty basis".into()))?;
    let field = first.field();
    let p = field.p();
    let d = first.order();
    let n = first.axis(0).len();
    if !first.is_principal() || d < 2 {
        return Err(Error::Shape("W must consist of [n]^d tensors with d ≥ 2".into()));
    }
    let m = w_basis.len();
    if w_basis.rank() != m {
        return Err(Error::Precondition("W basis is linearly dependent".into()));
    }
    let w = w_basis.tensors();
    let symmetric = w.iter().all(Tensor::is_symmetric);
    let points = (p as u64).checked_pow(n as u32);
    let elements = (p as u64).checked_pow(m as u32);
    let exact = match mode {
        TailMode::Exact => true,
        TailMode::MonteCarlo => false,
        TailMode::Auto => {
            points.is_some_and(|x| x <= EXACT_POINTS) && elements.is_some_and(|x| x <= EXACT_ELEMENTS)
        }
    };
    let power = 1u32 << (d - 1);

    let (mean_bias, mean_sym, max_bias) = if elements.is_some_and(|x| x <= EXACT_ELEMENTS) || exact {
        let proj = projective_points(p, m);
        let per: Vec<(BigRational, BigRational)> = proj
            .par_iter()
            .map(|c| {
                let t = Tensor::combination(c, w)?;
                Ok((bias(&t).to_ratio(), bias(&t.symmetrize()?).to_ratio()))
            })
            .collect::<Result<_>>()?;
        let (plain, sym): (Vec<_>, Vec<_>) = per.into_iter().unzip();
        let max = plain.iter().max().cloned().unwrap_or_else(BigRational::one);
        (mean_over_w(p, m, &plain), mean_over_w(p, m, &sym), max)
    } else {
        let mut rng = trial_rng(seed, 1);
        let draws: Vec<Vec<u32>> = (0..MC_ELEMENTS)
            .map(|_| (0..m).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let per: Vec<(BigRational, BigRational)> = draws
            .par_iter()
            .map(|c| {
                let t = Tensor::combination(c, w)?;
                Ok((bias(&t).to_ratio(), bias(&t.symmetrize()?).to_ratio()))
            })
            .collect::<Result<_>>()?;
        let k = BigRational::from_integer(BigInt::from(per.len()));
        let max = per
            .iter()
            .zip(&draws)
            .filter(|(_, c)| c.iter().any(|&v| v != 0))
            .map(|((b, _), _)| b.clone())
            .max()
            .unwrap_or_else(BigRational::one);
        let sp = per.iter().fold(BigRational::zero(), |a, (b, _)| a + b) / k.clone();
        let ss = per.iter().fold(BigRational::zero(), |a, (_, s)| a + s) / k;
        (sp, ss, max)
    };

    let (beta_val, beta_source) = match beta {
        Some(thr) => (thr.bias_bound(), format!("certificate threshold {}/{} ^ {}", thr.base_num, thr.base_den, thr.power)),
        None => (max_bias, "largest bias over nonzero elements".to_string()),
    };
    let pm = BigRational::from_integer(BigInt::from(BigUint::from(p).pow(m as u32)));
    let inv_pm = BigRational::one() / pm;
    let link_b = inv_pm.clone() + (BigRational::one() - inv_pm) * beta_val.clone();
    let link_b_holds = mean_bias <= link_b;

    let (pr_perp, pr_exact, stderr, link_a_holds, plain_holds) = if exact {
        let size = points.ok_or_else(|| Error::ResourceGuard("p^n overflows".into()))?;
        let zeros = (0..size as usize)
            .into_par_iter()
            .map(|i| in_perp(w, &decode_point(i, n, p), d).map(u64::from))
            .sum::<Result<u64>>()?;
        let pr = ratio(zeros, size);
        let lhs = num_traits::pow(pr.clone(), power as usize);
        (to_f64(&pr), Some(pr.to_string()), None, lhs <= mean_sym, lhs <= mean_bias)
    } else {
        let mut rng = trial_rng(seed, 2);
        let xs: Vec<Vec<u32>> = (0..MC_POINTS).map(|_| random_point(&mut rng, n, p)).collect();
        let zeros = xs
            .par_iter()
            .map(|x| in_perp(w, x, d).map(u64::from))
            .sum::<Result<u64>>()?;
        let est = zeros as f64 / MC_POINTS as f64;
        let se = (est * (1.0 - est) / MC_POINTS as f64).sqrt().max(1.0 / MC_POINTS as f64);
        let lower = (est - 3.0 * se).max(0.0).powi(power as i32);
        (est, None, Some(se), lower <= to_f64(&mean_sym), lower <= to_f64(&mean_bias))
    };
    let link_a_bound = to_f64(&mean_sym).powf(1.0 / power as f64);
    Ok(TailReport {
        p,
        d,
        n,
        m,
        mode: if exact { "exact" } else { "monte-carlo" }.into(),
        symmetric,
        pr_perp,
        pr_perp_exact: pr_exact,
        pr_perp_stderr: stderr,
        mean_bias: to_f64(&mean_bias),
        mean_bias_exact: exact.then(|| mean_bias.to_string()),
        mean_sym_bias: to_f64(&mean_sym),
        link_a_bound,
        link_a_holds,
        link_a_plain_holds: plain_holds,
        beta: to_f64(&beta_val),
        beta_source,
        link_b_bound: to_f64(&link_b),
        link_b_holds,
        holds: link_a_holds && link_b_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{full_axis, PrimeField};
    use crate::extract::extract_subspace;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_matrix_exact() {
        let field = f(3);
        let id = Tensor::from_fn(field, vec![full_axis(3); 2], |c| (c[0] == c[1]) as i64).unwrap();
        let w = SubspaceBasis::new(vec![id]).unwrap();
        let rep = tail_bound_check(&w, None, TailMode::Exact, 0).unwrap();
        assert_eq!(rep.mode, "exact");
        assert!(rep.symmetric);
        // x_1^2 + x_2^2 + x_3^2 = 0 has 9 solutions in F_3^3
        assert_eq!(rep.pr_perp_exact.as_deref(), Some("1/3"));
        assert!(rep.link_a_holds && rep.link_b_holds && rep.link_a_plain_holds);
    }

    #[test]
    fn empty_basis_rejected() {
        let w = SubspaceBasis::new(vec![]).unwrap();
        assert!(matches!(tail_bound_check(&w, None, TailMode::Auto, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn plain_bias_can_fail_for_skew_forms() {
        // T = E_12 + E_21 over F_2: T(x, x) = 2 x_1 x_2 = 0, yet bias(T) = 1/4
        let field = f(2);
        let t = Tensor::from_fn(field, vec![full_axis(2); 2], |c| (c[0] != c[1]) as i64).unwrap();
        let rep = tail_bound_check(&SubspaceBasis::new(vec![t]).unwrap(), None, TailMode::Exact, 0).unwrap();
        assert_eq!(rep.pr_perp, 1.0);
        assert!(!rep.link_a_plain_holds);
        assert!(rep.link_a_holds);
    }

    #[test]
    fn certificate_backed_links() {
        let v = SubspaceBasis::full_space(f(2), 6, 3);
        let cert = extract_subspace(&v, 6, 1).unwrap();
        let rep = tail_bound_check(&cert.w_basis, Some(&cert.threshold), TailMode::Auto, 0).unwrap();
        assert_eq!(rep.m, 2);
        assert!(rep.holds, "{rep:?}");
    }

    #[test]
    fn monte_carlo_mode_runs() {
        let field = f(5);
        let id = Tensor::from_fn(field, vec![full_axis(3); 2], |c| (c[0] == c[1]) as i64).unwrap();
        let rep = tail_bound_check(&SubspaceBasis::new(vec![id]).unwrap(), None, TailMode::MonteCarlo, 4).unwrap();
        assert_eq!(rep.mode, "monte-carlo");
        assert!(rep.pr_perp_stderr.is_some());
        assert!(rep.holds);
    }
}
