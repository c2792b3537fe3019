//! The acceptance suite: each criterion is a seeded, self-contained check
//! with a runtime budget. Used by `trk selftest` and the `acceptance` test
//! target.

use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::linalg;
use crate::algebra::tensor::for_each_index;
use crate::algebra::{full_axis, symmetric_dim, PrimeField, SubspaceBasis, Tensor};
use crate::error::{Error, Result};
use crate::extract::{
    all_matchings, best_lambda, cover_assign, extract_subspace, matching_cells, verify_certificate, ExtractionCertificate,
};
use crate::rank::{bias, c_constant, coset_bias, matrix_rank, prank_oracle, BiasValue, PartitionRank};
use crate::szemeredi::{
    ap_free_set, chevalley_warning_check, construct_blocker, independence_experiment, randomized_szemeredi_demo,
    tail_bound_check, trial_rng, verify_no_ap, veronese_independent, ScanMode, SimParams, TailMode,
};
use crate::szemeredi::sampling::sample_points_from;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_secs: f64,
    pub budget_secs: f64,
}

struct Criterion {
    id: &'static str,
    budget_secs: f64,
    run: fn() -> Result<String>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: "d2-equivalence", budget_secs: 5.0, run: d2_equivalence },
    Criterion { id: "restriction-monotonicity", budget_secs: 30.0, run: restriction_monotonicity },
    Criterion { id: "increment-realizability", budget_secs: 60.0, run: increment_realizability },
    Criterion { id: "coset-inequality", budget_secs: 30.0, run: coset_inequality },
    Criterion { id: "prank-vs-arank", budget_secs: 60.0, run: prank_vs_arank },
    Criterion { id: "extraction-end-to-end", budget_secs: 300.0, run: extraction_end_to_end },
    Criterion { id: "cover-correctness", budget_secs: 5.0, run: cover_correctness },
    Criterion { id: "blocker-behaviour", budget_secs: 300.0, run: blocker_behaviour },
    Criterion { id: "independence-trend", budget_secs: 120.0, run: independence_trend },
    Criterion { id: "tail-links", budget_secs: 120.0, run: tail_links },
    Criterion { id: "determinism", budget_secs: 60.0, run: determinism },
];

pub fn criterion_ids() -> Vec<&'static str> {
    CRITERIA.iter().map(|c| c.id).collect()
}

/// Run the criteria whose id contains `filter` (all when `None`).
pub fn run_all(filter: Option<&str>) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter(|c| filter.is_none_or(|f| c.id.contains(f)))
        .map(|c| {
            let start = Instant::now();
            let outcome = (c.run)();
            let elapsed = start.elapsed().as_secs_f64();
            let (passed, detail) = match outcome {
                Ok(detail) if elapsed <= c.budget_secs => (true, detail),
                Ok(detail) => (false, format!("{detail}; over budget ({elapsed:.1}s > {}s)", c.budget_secs)),
                Err(e) => (false, e.to_string()),
            };
            CriterionResult {
                id: c.id.to_string(),
                passed,
                detail,
                elapsed_secs: elapsed,
                budget_secs: c.budget_secs,
            }
        })
        .collect()
}

fn fail(detail: String) -> Error {
    Error::invariant("acceptance", detail)
}

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).expect("prime")
}

fn random_tensor(rng: &mut ChaCha8Rng, f: PrimeField, dims: &[usize]) -> Tensor {
    let axes: Vec<Vec<usize>> = dims.iter().map(|&n| full_axis(n)).collect();
    let len = dims.iter().product();
    let entries = (0..len).map(|_| rng.gen_range(0..f.p())).collect();
    Tensor::new(f, axes, entries).expect("shape matches")
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Vec<usize> {
    let mut labels = full_axis(n);
    labels.shuffle(rng);
    labels.truncate(size);
    labels.sort_unstable();
    labels
}

fn rank_bias(p: u32, n: usize, rank: usize) -> BiasValue {
    BiasValue::new(BigUint::from(p).pow((n - rank) as u32), p, n as u32).expect("valid bias")
}

fn d2_equivalence() -> Result<String> {
    let mut checked = 0;
    for n in [2usize, 3] {
        let f = field(2);
        for code in 0u32..(1 << (n * n)) {
            let m = Tensor::from_fn(f, vec![full_axis(n); 2], |c| ((code >> ((c[0] - 1) * n + c[1] - 1)) & 1) as i64)?;
            let rank = matrix_rank(&m)?;
            if bias(&m) != rank_bias(2, n, rank) {
                return Err(fail(format!("F_2 {n}x{n} matrix {code:#b}: bias {} vs rank {rank}", bias(&m))));
            }
            checked += 1;
        }
    }
    let mut rng = trial_rng(0xd2, 0);
    for k in 0..200 {
        let p = if k % 2 == 0 { 3 } else { 5 };
        let n = rng.gen_range(1..=5);
        let m = random_tensor(&mut rng, field(p), &[n, n]);
        let rank = matrix_rank(&m)?;
        let b = bias(&m);
        if b != rank_bias(p, n, rank) || b.numerator() != &BigUint::from(p).pow((n - rank) as u32) {
            return Err(fail(format!("F_{p} {n}x{n} instance {k}: bias {b} vs rank {rank}")));
        }
        checked += 1;
    }
    Ok(format!("{checked} matrices, bias = p^-rank exactly"))
}

fn restriction_monotonicity() -> Result<String> {
    let mut rng = trial_rng(0x4, 0);
    for k in 0..100 {
        let p = if k % 2 == 0 { 2 } else { 3 };
        let n = rng.gen_range(1..=5);
        let t = random_tensor(&mut rng, field(p), &[n, n, n]);
        let size = rng.gen_range(1..=n);
        let s = random_subset(&mut rng, n, size);
        let principal = t.restrict(&s)?;
        if bias(&t) > bias(&principal) {
            return Err(fail(format!("instance {k}: principal restriction to {s:?} lowered the bias")));
        }
        let rect: Vec<Vec<usize>> = (0..3).map(|_| random_subset(&mut rng, n, size)).collect();
        let r = t.restrict_rect(&rect)?;
        if bias(&t) > bias(&r) {
            return Err(fail(format!("instance {k}: rectangular restriction to {rect:?} lowered the bias")));
        }
    }
    Ok("100 instances, principal and rectangular".into())
}

fn increment_realizability() -> Result<String> {
    let mut rng = trial_rng(0x7, 0);
    for k in 0..100 {
        let p = if k % 2 == 0 { 2 } else { 3 };
        let f = field(p);
        let size = rng.gen_range(1..=5);
        let i = rng.gen_range(0..size);
        let r = random_tensor(&mut rng, f, &[size, size, size]);
        let a = rng.gen_range(1..p);
        let q = Tensor::unit(f, vec![full_axis(size); 3], &[i + 1; 3])?.scale(a);
        let (lambda, b) = best_lambda(&r, &q, i)?;
        let prev = bias(&r.restrict_prefix(i)?);
        let (rho, _) = c_constant(p, 3);
        if !b.leq_scaled(&prev, &BigUint::from(rho.base_num), &BigUint::from(rho.base_den)) {
            return Err(fail(format!(
                "instance {k}: best λ = {lambda} gives {b}, above ρ·{prev}"
            )));
        }
    }
    Ok("100 pairs, exhaustive λ always reaches ρ·bias(R|[i])".into())
}

/// Random complementary `U ⊕ V = F^n` from the rows of an invertible matrix.
fn random_split(rng: &mut ChaCha8Rng, f: PrimeField, n: usize, dim_u: usize) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    loop {
        let rows: Vec<Vec<u32>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..f.p())).collect()).collect();
        if linalg::rank(f, &rows) == n {
            let v = rows[dim_u..].to_vec();
            let mut u = rows;
            u.truncate(dim_u);
            return (u, v);
        }
    }
}

fn coset_inequality() -> Result<String> {
    let mut rng = trial_rng(0x6, 0);
    let mut exact = 0;
    for k in 0..100 {
        let p = [2, 3, 5][k % 3];
        let f = field(p);
        let d = rng.gen_range(2..=3);
        let n = if p == 5 { rng.gen_range(2..=3) } else { rng.gen_range(2..=4) };
        let dim_u = rng.gen_range(1..n);
        let t = random_tensor(&mut rng, f, &vec![n; d]);
        let (u, v) = random_split(&mut rng, f, n, dim_u);
        let shifts: Vec<Vec<u32>> = (0..d)
            .map(|_| {
                let coeffs: Vec<u32> = (0..v.len()).map(|_| rng.gen_range(0..p)).collect();
                (0..n)
                    .map(|i| v.iter().zip(&coeffs).fold(0, |acc, (row, &c)| f.add(acc, f.mul(c, row[i]))))
                    .collect()
            })
            .collect();
        let shifted = coset_bias(&t, &u, &v, &shifts)?;
        let base = coset_bias(&t, &u, &v, &vec![vec![0; n]; d])?;
        if p == 2 {
            exact += 1;
        }
        if !shifted.leq(&base, 1e-9) {
            return Err(fail(format!(
                "instance {k} (p={p}): shifted {} > unshifted {}",
                shifted.magnitude, base.magnitude
            )));
        }
    }
    Ok(format!("100 instances ({exact} exact over F_2, others within 1e-9)"))
}

fn prank_vs_arank() -> Result<String> {
    let f = field(2);
    for code in 0u32..256 {
        let t = Tensor::from_fn(f, vec![full_axis(2); 3], |c| {
            ((code >> ((c[0] - 1) * 4 + (c[1] - 1) * 2 + c[2] - 1)) & 1) as i64
        })?;
        let r = match prank_oracle(&t, 8)? {
            PartitionRank::Exact(r) => r as u32,
            PartitionRank::Exceeds(_) => return Err(fail(format!("tensor {code}: prank above 8"))),
        };
        let b = bias(&t);
        // bias ≥ 2^{-r}  ⇔  M·2^r ≥ 2^K
        let lhs = b.numerator() * BigUint::from(2u32).pow(r);
        if lhs < b.denominator() {
            return Err(fail(format!("tensor {code}: prank {r} below arank {:.4}", b.arank())));
        }
    }
    Ok("all 256 tensors of F_2^{2x2x2}".into())
}

fn check_certificate(cert: &ExtractionCertificate, label: &str) -> Result<()> {
    let s = cert.t / (cert.d * cert.r);
    if cert.w_basis.len() != s || cert.w_basis.rank() != s {
        return Err(fail(format!("{label}: dim W = {} ≠ {s}", cert.w_basis.rank())));
    }
    if (s as f64) < cert.t as f64 / (cert.d * cert.r) as f64 - 1.0 {
        return Err(fail(format!("{label}: dim W below t/(dr) - 1")));
    }
    let report = verify_certificate(cert);
    if !report.ok {
        return Err(fail(format!("{label}: {}", report.failure.unwrap_or_default())));
    }
    Ok(())
}

fn extraction_end_to_end() -> Result<String> {
    for (p, d, n, t, r) in [(2, 3, 6, 6, 1), (2, 2, 6, 6, 2), (3, 3, 4, 4, 1)] {
        let v = SubspaceBasis::full_space(field(p), n, d);
        let cert = extract_subspace(&v, t, r)?;
        check_certificate(&cert, &format!("full space p={p} d={d} n={n} t={t} r={r}"))?;
    }
    for seed in 0..25u64 {
        let mut rng = trial_rng(0x2, seed);
        let p = [2, 3][seed as usize % 2];
        let d = rng.gen_range(2..=3);
        let n: usize = if d == 3 && p == 3 { rng.gen_range(3..=4) } else { rng.gen_range(d..=6) };
        let r = rng.gen_range(1..=n / d);
        let t = rng.gen_range(d * r..=n);
        let len = n.pow(d as u32);
        let dim = rng.gen_range(t * n.pow(d as u32 - 1)..=len);
        let v = SubspaceBasis::random(field(p), n, d, dim, &mut rng)?;
        let cert = extract_subspace(&v, t, r)?;
        check_certificate(&cert, &format!("seed {seed} (p={p} d={d} n={n} t={t} r={r} dim={dim})"))?;
    }
    Ok("3 full-space certificates and 25 random subspaces verified".into())
}

fn cover_correctness() -> Result<String> {
    for d in 1..=4usize {
        for n in 1..=4usize {
            let ids = all_matchings(n, d);
            let expected = n.pow(d as u32) - (n - 1).pow(d as u32);
            if ids.len() != expected || ids.len() > d * n.pow(d as u32 - 1) {
                return Err(fail(format!("n={n} d={d}: {} matchings", ids.len())));
            }
            let mut seen = vec![0usize; n.pow(d as u32)];
            for id in &ids {
                let cells = matching_cells(id, n, d)?;
                for axis in 0..d {
                    let mut coords: Vec<usize> = cells.iter().map(|c| c[axis]).collect();
                    coords.dedup();
                    if coords.len() != cells.len() {
                        return Err(fail(format!("matching {id:?} repeats a coordinate on axis {axis}")));
                    }
                }
                for c in cells {
                    seen[c.iter().fold(0, |acc, &x| acc * n + x - 1)] += 1;
                }
            }
            if seen.iter().any(|&k| k != 1) {
                return Err(fail(format!("n={n} d={d}: matchings do not partition [n]^d")));
            }
            let mut err = None;
            for_each_index(&vec![n; d], |c| {
                let coord: Vec<usize> = c.iter().map(|x| x + 1).collect();
                let ok = cover_assign(&coord, n, d)
                    .and_then(|id| matching_cells(&id, n, d))
                    .is_ok_and(|cells| cells.contains(&coord));
                if !ok && err.is_none() {
                    err = Some(coord);
                }
            });
            if let Some(coord) = err {
                return Err(fail(format!("{coord:?} not covered by its assigned matching")));
            }
        }
    }
    Ok("n, d ≤ 4: cover total, matchings disjoint and diagonal, count n^d - (n-1)^d ≤ d·n^(d-1)".into())
}

fn blocker_behaviour() -> Result<String> {
    let mut independent = 0;
    let mut total = 0;
    for (p, k, ns) in [(5u32, 3usize, &[2usize, 3, 4][..]), (7, 4, &[3][..])] {
        let f = field(p);
        for trial in 0..50u64 {
            let n = ns[trial as usize % ns.len()];
            let mut rng = trial_rng(0x10 + p as u64, trial);
            let m = symmetric_dim(n, k - 1);
            let s = rng.gen_range(1..=m);
            let pts = sample_points_from(&mut rng, n, p, s);
            total += 1;
            if !veronese_independent(f, &pts, k - 1)? {
                continue;
            }
            independent += 1;
            let set = ap_free_set(construct_blocker(f, n, &pts, k)?);
            let check = verify_no_ap(&|x| set.contains(x), f, n, &pts, k, ScanMode::Exhaustive, trial)?;
            if !check.ap_free {
                return Err(fail(format!("p={p} k={k} n={n} trial {trial}: progression {:?}", check.counterexample)));
            }
            let size = set.size().ok_or_else(|| fail("zero set not explicit".into()))?;
            let cw = chevalley_warning_check(size, k, n, p);
            if cw.passed == Some(false) {
                return Err(fail(format!("p={p} k={k} n={n} trial {trial}: |A| = {size} fails divisibility")));
            }
        }
    }
    Ok(format!("{independent}/{total} independent trials, all AP-free (exhaustive) and CW-divisible"))
}

fn independence_trend() -> Result<String> {
    let base = SimParams {
        p: 5,
        k: 3,
        n: 4,
        samples: 0,
        trials: 200,
        seed: 11,
        c_knob: 0.0,
    };
    let m = base.m();
    let below = independence_experiment(&SimParams { samples: m - 5, ..base.clone() })?;
    let floor = below.aggregate.independence_floor.unwrap_or(1.0);
    let rate = below.aggregate.independence_rate;
    if rate < floor - 0.05 {
        return Err(fail(format!("s = m-5: rate {rate} below floor {floor:.4} - 0.05")));
    }
    let above = independence_experiment(&SimParams { samples: m + 1, ..base })?;
    if above.aggregate.independence_rate != 0.0 {
        return Err(fail(format!("s = m+1: rate {}", above.aggregate.independence_rate)));
    }
    Ok(format!("m = {m}: rate {rate:.3} vs floor {floor:.4} at s = m-5; rate 0 at s = m+1"))
}

fn tail_links() -> Result<String> {
    let v = SubspaceBasis::full_space(field(2), 6, 3);
    let cert = extract_subspace(&v, 6, 1)?;
    let a = tail_bound_check(&cert.w_basis, Some(&cert.threshold), TailMode::Exact, 0)?;
    if !a.holds {
        return Err(fail(format!("certificate-backed W (p=2, d=3, n=6): {a:?}")));
    }
    let f = field(3);
    let id = Tensor::from_fn(f, vec![full_axis(4); 2], |c| (c[0] == c[1]) as i64)?;
    let w = SubspaceBasis::new(vec![id])?;
    let b = tail_bound_check(&w, None, TailMode::Exact, 0)?;
    if !b.holds {
        return Err(fail(format!("d=2 identity instance: {b:?}")));
    }
    let v2 = SubspaceBasis::full_space(field(3), 4, 2);
    let cert2 = extract_subspace(&v2, 4, 1)?;
    let c = tail_bound_check(&cert2.w_basis, Some(&cert2.threshold), TailMode::Exact, 0)?;
    if !c.holds {
        return Err(fail(format!("certificate-backed W (p=3, d=2, n=4): {c:?}")));
    }
    Ok(format!(
        "p=2 d=3: Pr = {} ≤ {:.4}, E bias = {:.4} ≤ {:.4}; d=2 identity and certificate instances exact",
        a.pr_perp_exact.unwrap_or_default(),
        a.link_a_bound,
        a.mean_bias,
        a.link_b_bound
    ))
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::ResourceGuard(e.to_string()))?;
    Ok(pool.install(f))
}

fn determinism() -> Result<String> {
    let params = SimParams {
        p: 5,
        k: 3,
        n: 3,
        samples: 5,
        trials: 12,
        seed: 77,
        c_knob: 0.5,
    };
    let run = || -> Result<String> {
        let demo = randomized_szemeredi_demo(&params)?.without_timing();
        let ind = independence_experiment(&params)?.without_timing();
        let mut rng = trial_rng(5, 0);
        let v = SubspaceBasis::random(field(3), 4, 2, 14, &mut rng)?;
        let cert = extract_subspace(&v, 3, 1)?;
        let w = cert.w_basis.clone();
        let tail = tail_bound_check(&w, Some(&cert.threshold), TailMode::Auto, 3)?;
        Ok(serde_json::to_string(&(demo, ind, cert, tail))?)
    };
    let one = with_threads(1, run)??;
    let four = with_threads(4, run)??;
    let again = with_threads(4, run)??;
    if one != four || four != again {
        return Err(fail("reports differ between worker counts".into()));
    }
    Ok(format!("{} bytes identical across 1 and 4 workers", one.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids = criterion_ids();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), CRITERIA.len());
    }

    #[test]
    fn fast_criteria_pass() {
        for r in run_all(Some("cover")).into_iter().chain(run_all(Some("d2"))) {
            assert!(r.passed, "{}: {}", r.id, r.detail);
        }
    }
}
