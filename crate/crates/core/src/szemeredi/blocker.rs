//! Polynomial sets avoiding arithmetic progressions with prescribed
//! differences.
//!
//! For `S` with `φ_{k-1}(S)` independent, a symmetric `(k-1)`-tensor `T` with
//! `⟨T, φ_{k-1}(s)⟩ = 1` for all `s ∈ S` is found by solving in monomial
//! coordinates. The zero set of `P(x) = ⟨T, φ_{k-1}(x)⟩` is the candidate set.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::linalg;
use crate::algebra::veronese::{orbit_size, symmetric_from_orbits};
use crate::algebra::{monomial_vector, monomials, PrimeField, Tensor};
use crate::error::{Error, Result};
use crate::szemeredi::sampling::{decode_point, encode_point, random_point, trial_rng};

/// Largest `p^n` for which the zero set is materialised.
pub const EXPLICIT_LIMIT: u64 = 1_000_000;
/// Largest `p^n · |S|` scanned exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;
/// Random `(x, s)` pairs drawn in sampled mode.
pub const SAMPLED_PAIRS: usize = 100_000;

/// `T` together with `P`'s coefficients on the monomials of degree `k - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Blocker {
    pub k: usize,
    pub tensor: Tensor,
    /// `poly[α] = orbit(α)·T_α`, so that `P(x) = Σ_α poly[α] x^α`.
    pub poly: Vec<u32>,
}

impl Blocker {
    pub fn field(&self) -> PrimeField {
        self.tensor.field()
    }

    pub fn n(&self) -> usize {
        self.tensor.axis(0).len()
    }

    /// `P(x) = ⟨T, φ_{k-1}(x)⟩`.
    pub fn eval(&self, x: &[u32]) -> u32 {
        let field = self.field();
        let mv = monomial_vector(field, x, self.k - 1).expect("p ≥ k checked at construction");
        mv.iter()
            .zip(&self.poly)
            .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
    }
}

fn check_pk(field: PrimeField, k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::Domain(format!("progression length k = {k} < 3")));
    }
    if (field.p() as usize) < k {
        return Err(Error::Unsupported(format!("need p ≥ k, got p = {}, k = {k}", field.p())));
    }
    Ok(())
}

/// A nonzero symmetric `(k-1)`-tensor with `⟨T, φ_{k-1}(s)⟩ = 1` on `S`.
/// With `S` empty the result is the unit tensor at `(1,…,1)`.
pub fn construct_blocker(field: PrimeField, n: usize, s: &[Vec<u32>], k: usize) -> Result<Blocker> {
    check_pk(field, k)?;
    let d = k - 1;
    if n == 0 {
        return Err(Error::Domain("ambient dimension n must be positive".into()));
    }
    if let Some(bad) = s.iter().find(|x| x.len() != n) {
        return Err(Error::Shape(format!("point {bad:?} is not in F_p^{n}")));
    }
    let monos = monomials(n, d);
    let rows = s
        .iter()
        .map(|x| monomial_vector(field, x, d))
        .collect::<Result<Vec<_>>>()?;
    let poly = if s.is_empty() {
        let mut e = vec![0; monos.len()];
        e[0] = 1;
        e
    } else {
        if linalg::rank(field, &rows) != s.len() {
            return Err(Error::Precondition("φ_{k-1}(S) is linearly dependent".into()));
        }
        linalg::solve(field, &rows, &vec![1; s.len()])
            .ok_or_else(|| Error::invariant("construct_blocker", "independent system has no solution"))?
    };
    let orbit_values = monos
        .iter()
        .zip(&poly)
        .map(|(alpha, &y)| {
            let size = orbit_size(field, alpha);
            field
                .inv(size)
                .map(|inv| field.mul(y, inv))
                .ok_or_else(|| Error::invariant("construct_blocker", "orbit size vanishes mod p"))
        })
        .collect::<Result<Vec<_>>>()?;
    let tensor = symmetric_from_orbits(field, n, d, &orbit_values)?;
    for x in s {
        let v = tensor.evaluate(&vec![x.clone(); d])?;
        if v != 1 {
            return Err(Error::invariant(
                "construct_blocker",
                format!("⟨T, φ(s)⟩ = {v} ≠ 1 at s = {x:?}"),
            ));
        }
    }
    if tensor.is_zero() {
        return Err(Error::invariant("construct_blocker", "blocker tensor is zero"));
    }
    Ok(Blocker { k, tensor, poly })
}

/// The zero set `A` of `P`, materialised as a membership table when
/// `p^n ≤ EXPLICIT_LIMIT`.
#[derive(Clone, Debug)]
pub struct ApFreeSet {
    pub blocker: Blocker,
    pub table: Option<Vec<bool>>,
}

impl ApFreeSet {
    pub fn contains(&self, x: &[u32]) -> bool {
        match &self.table {
            Some(t) => t[encode_point(x, self.blocker.field().p())],
            None => self.blocker.eval(x) == 0,
        }
    }

    pub fn size(&self) -> Option<usize> {
        self.table.as_ref().map(|t| t.iter().filter(|&&b| b).count())
    }

    /// Members in increasing code order, when explicit.
    pub fn elements(&self) -> Option<Vec<Vec<u32>>> {
        let (n, p) = (self.blocker.n(), self.blocker.field().p());
        self.table.as_ref().map(|t| {
            t.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| decode_point(i, n, p))
                .collect()
        })
    }
}

fn space_size(p: u32, n: usize) -> Option<u64> {
    (p as u64).checked_pow(n as u32)
}

fn membership_table(p: u32, n: usize, pred: &(dyn Fn(&[u32]) -> bool + Sync)) -> Vec<bool> {
    let size = p.pow(n as u32) as usize;
    (0..size)
        .into_par_iter()
        .map(|i| pred(&decode_point(i, n, p)))
        .collect()
}

pub fn ap_free_set(blocker: Blocker) -> ApFreeSet {
    let (p, n) = (blocker.field().p(), blocker.n());
    let table = space_size(p, n)
        .filter(|&sz| sz <= EXPLICIT_LIMIT)
        .map(|_| membership_table(p, n, &|x| blocker.eval(x) == 0));
    ApFreeSet { blocker, table }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// Exhaustive when `p^n·|S| ≤ EXHAUSTIVE_LIMIT`, sampled otherwise.
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApCheck {
    pub ap_free: bool,
    /// `"exhaustive"` or `"certified-sampled"`.
    pub mode: String,
    pub pairs_checked: u64,
    /// `(x, s)` with `x, x+s, …, x+(k-1)s` all in `A`.
    pub counterexample: Option<(Vec<u32>, Vec<u32>)>,
}

fn progression_in(
    member: &dyn Fn(&[u32]) -> bool,
    field: PrimeField,
    x: &[u32],
    s: &[u32],
    k: usize,
) -> bool {
    let mut cur = x.to_vec();
    for step in 0..k {
        if step > 0 {
            for (c, &d) in cur.iter_mut().zip(s) {
                *c = field.add(*c, d);
            }
        }
        if !member(&cur) {
            return false;
        }
    }
    true
}

/// Check that no `k`-term progression with common difference in `S \ {0}`
/// lies inside the set described by `member`.
pub fn verify_no_ap(
    member: &(dyn Fn(&[u32]) -> bool + Sync),
    field: PrimeField,
    n: usize,
    s: &[Vec<u32>],
    k: usize,
    mode: ScanMode,
    seed: u64,
) -> Result<ApCheck> {
    let p = field.p();
    let diffs: Vec<Vec<u32>> = s
        .iter()
        .map(|x| x.iter().map(|&v| v % p).collect::<Vec<_>>())
        .filter(|x: &Vec<u32>| x.iter().any(|&v| v != 0))
        .collect();
    if let Some(bad) = diffs.iter().find(|x| x.len() != n) {
        return Err(Error::Shape(format!("difference {bad:?} is not in F_p^{n}")));
    }
    let work = space_size(p, n).and_then(|sz| sz.checked_mul(diffs.len().max(1) as u64));
    let exhaustive = match mode {
        ScanMode::Exhaustive => true,
        ScanMode::Sampled => false,
        ScanMode::Auto => work.is_some_and(|w| w <= EXHAUSTIVE_LIMIT),
    };
    if diffs.is_empty() {
        return Ok(ApCheck {
            ap_free: true,
            mode: if exhaustive { "exhaustive" } else { "certified-sampled" }.into(),
            pairs_checked: 0,
            counterexample: None,
        });
    }
    if exhaustive {
        let size = space_size(p, n)
            .filter(|&sz| sz <= 1 << 32)
            .ok_or_else(|| Error::ResourceGuard(format!("{p}^{n} points is too many to scan")))?;
        let table = membership_table(p, n, member);
        let lookup = |x: &[u32]| table[encode_point(x, p)];
        let hit = (0..size as usize).into_par_iter().find_first(|&i| {
            if !table[i] {
                return false;
            }
            let x = decode_point(i, n, p);
            diffs.iter().any(|d| progression_in(&lookup, field, &x, d, k))
        });
        let counterexample = hit.map(|i| {
            let x = decode_point(i, n, p);
            let d = diffs
                .iter()
                .find(|d| progression_in(&lookup, field, &x, d, k))
                .expect("witness difference")
                .clone();
            (x, d)
        });
        return Ok(ApCheck {
            ap_free: counterexample.is_none(),
            mode: "exhaustive".into(),
            pairs_checked: size * diffs.len() as u64,
            counterexample,
        });
    }
    let mut rng = trial_rng(seed, u64::MAX);
    let pairs: Vec<(Vec<u32>, usize)> = (0..SAMPLED_PAIRS)
        .map(|_| (random_point(&mut rng, n, p), rng.gen_range(0..diffs.len())))
        .collect();
    let hit = pairs
        .par_iter()
        .find_first(|(x, j)| progression_in(member, field, x, &diffs[*j], k));
    Ok(ApCheck {
        ap_free: hit.is_none(),
        mode: "certified-sampled".into(),
        pairs_checked: SAMPLED_PAIRS as u64,
        counterexample: hit.map(|(x, j)| (x.clone(), diffs[*j].clone())),
    })
}

/// Chevalley–Warning sanity on an explicit zero set of a degree-`(k-1)`
/// polynomial in `n > k-1` variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CwReport {
    pub hypothesis_met: bool,
    pub size: usize,
    pub density: f64,
    /// `|A| ≡ 0 (mod p)` and `|A| ≥ p`; `None` when the hypothesis fails.
    pub passed: Option<bool>,
}

pub fn chevalley_warning_check(size: usize, k: usize, n: usize, p: u32) -> CwReport {
    let density = size as f64 / (p as f64).powi(n as i32);
    let hypothesis_met = n > k - 1;
    CwReport {
        hypothesis_met,
        size,
        density,
        passed: hypothesis_met.then(|| size.is_multiple_of(p as usize) && size >= p as usize),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::full_axis;
    use crate::szemeredi::sampling::sample_points;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn single_constraint_blocker() {
        let b = construct_blocker(f(5), 2, &[vec![1, 0]], 3).unwrap();
        assert_eq!(b.tensor, Tensor::unit(f(5), vec![full_axis(2); 2], &[1, 1]).unwrap());
        let a = ap_free_set(b);
        assert_eq!(a.size(), Some(5));
        assert!(a.elements().unwrap().iter().all(|x| x[0] == 0));
        assert!(a.contains(&[0, 0]));
        assert!(!a.contains(&[1, 0]));
    }

    #[test]
    fn full_system_is_unique() {
        // n = 2, k = 3: m = 3 monomials and three independent points
        let s = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let b = construct_blocker(f(5), 2, &s, 3).unwrap();
        assert_eq!(b.poly, vec![1, 4, 1]);
        assert!(b.tensor.is_symmetric());
    }

    #[test]
    fn random_blocker_resubstitutes() {
        let field = f(5);
        let s = sample_points(4, 5, 6, 21);
        let b = construct_blocker(field, 4, &s, 3).unwrap();
        for x in &s {
            assert_eq!(b.eval(x), 1);
        }
        assert!(b.tensor.is_symmetric());
    }

    #[test]
    fn dependent_and_small_p_rejected() {
        let s = vec![vec![1, 0], vec![2, 0]];
        assert!(matches!(construct_blocker(f(5), 2, &s, 3), Err(Error::Precondition(_))));
        assert!(matches!(construct_blocker(f(3), 2, &s[..1], 4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn trivial_sets() {
        let field = f(5);
        let s = vec![vec![1, 2]];
        let empty = verify_no_ap(&|_| false, field, 2, &s, 3, ScanMode::Exhaustive, 0).unwrap();
        assert!(empty.ap_free);
        let full = verify_no_ap(&|_| true, field, 2, &s, 3, ScanMode::Exhaustive, 0).unwrap();
        assert!(!full.ap_free);
        assert_eq!(full.counterexample, Some((vec![0, 0], vec![1, 2])));
        let sampled = verify_no_ap(&|_| true, field, 2, &s, 3, ScanMode::Sampled, 0).unwrap();
        assert!(!sampled.ap_free);
        assert_eq!(sampled.mode, "certified-sampled");
    }

    #[test]
    fn blocker_is_ap_free_exhaustively() {
        let field = f(5);
        let s = sample_points(3, 5, 4, 8);
        let a = ap_free_set(construct_blocker(field, 3, &s, 3).unwrap());
        let check = verify_no_ap(&|x| a.contains(x), field, 3, &s, 3, ScanMode::Auto, 0).unwrap();
        assert!(check.ap_free);
        assert_eq!(check.mode, "exhaustive");
        let cw = chevalley_warning_check(a.size().unwrap(), 3, 3, 5);
        assert_eq!(cw.passed, Some(true));
    }

    #[test]
    fn coordinate_slab_count() {
        let b = construct_blocker(f(5), 3, &[vec![1, 0, 0]], 3).unwrap();
        let a = ap_free_set(b);
        assert_eq!(a.size(), Some(25));
        assert!(!chevalley_warning_check(5, 3, 2, 5).hypothesis_met);
    }
}
