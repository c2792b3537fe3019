//! Partition rank on micro instances, by breadth-first search over sums of
//! partition-rank-1 tensors.

use std::collections::HashSet;

use crate::algebra::tensor::for_each_index;
use crate::algebra::{PrimeField, Tensor};
use crate::error::{Error, Result};

/// Largest number of entries the oracle accepts.
pub const MAX_ENTRIES: usize = 12;
/// Largest state space `p^N` the oracle accepts.
pub const MAX_STATES: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionRank {
    Exact(usize),
    Exceeds(usize),
}

fn guard(field: PrimeField, dims: &[usize]) -> Result<u64> {
    if dims.len() < 2 {
        return Err(Error::Domain("partition rank needs order at least 2".into()));
    }
    let n: usize = dims.iter().product();
    let states = (field.p() as u64).checked_pow(n as u32);
    match states {
        Some(s) if n <= MAX_ENTRIES && s <= MAX_STATES => Ok(s),
        _ => Err(Error::ResourceGuard(format!(
            "partition-rank oracle limited to {MAX_ENTRIES} entries and {MAX_STATES} states; got {n} entries over F_{}",
            field.p()
        ))),
    }
}

fn encode(entries: &[u32], p: u32) -> u64 {
    entries.iter().rev().fold(0u64, |acc, &v| acc * p as u64 + v as u64)
}

fn add_encoded(a: u64, b: u64, p: u32, len: usize) -> u64 {
    if p == 2 {
        return a ^ b;
    }
    let p = p as u64;
    let (mut a, mut b) = (a, b);
    let mut out = 0u64;
    let mut scale = 1u64;
    for _ in 0..len {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

/// All nonzero vectors of `F_p^len`.
fn nonzero_vectors(p: u32, len: usize) -> Vec<Vec<u32>> {
    let total = (p as u64).pow(len as u32);
    (1..total)
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let d = (code % p as u64) as u32;
                    code /= p as u64;
                    d
                })
                .collect()
        })
        .collect()
}

/// Every tensor on `axes` of the form `T_1(x_A) · T_2(x_B)` for a bipartition
/// `{A, B}` of the legs and nonzero forms `T_1, T_2`, without duplicates.
pub fn enumerate_prank1(field: PrimeField, axes: &[Vec<usize>]) -> Result<Vec<Tensor>> {
    let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
    guard(field, &dims)?;
    let p = field.p();
    let d = dims.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    // side A always holds leg 0, so each unordered bipartition is visited once
    for mask in 0u32..(1 << (d - 1)) {
        let side_a: Vec<usize> = std::iter::once(0)
            .chain((1..d).filter(|&j| mask & (1 << (j - 1)) != 0))
            .collect();
        let side_b: Vec<usize> = (1..d).filter(|&j| mask & (1 << (j - 1)) == 0).collect();
        if side_b.is_empty() {
            continue;
        }
        let len_a: usize = side_a.iter().map(|&j| dims[j]).product();
        let len_b: usize = side_b.iter().map(|&j| dims[j]).product();
        let forms_a = nonzero_vectors(p, len_a);
        let forms_b = nonzero_vectors(p, len_b);
        for fa in &forms_a {
            for fb in &forms_b {
                let mut entries = Vec::with_capacity(dims.iter().product());
                for_each_index(&dims, |idx| {
                    let ia = side_a.iter().fold(0, |acc, &j| acc * dims[j] + idx[j]);
                    let ib = side_b.iter().fold(0, |acc, &j| acc * dims[j] + idx[j]);
                    entries.push(field.mul(fa[ia], fb[ib]));
                });
                if seen.insert(encode(&entries, p)) {
                    out.push(Tensor::new(field, axes.to_vec(), entries)?);
                }
            }
        }
    }
    Ok(out)
}

/// Exact partition rank of `t`, or `Exceeds(r_max)` when it is larger than `r_max`.
pub fn prank_oracle(t: &Tensor, r_max: usize) -> Result<PartitionRank> {
    let field = t.field();
    let p = field.p();
    let len = t.len();
    let states = guard(field, &t.dims())?;
    let target = encode(t.entries(), p);
    if target == 0 {
        return Ok(PartitionRank::Exact(0));
    }
    let gens: Vec<u64> = enumerate_prank1(field, t.axes())?
        .iter()
        .map(|g| encode(g.entries(), p))
        .collect();
    let mut visited = vec![false; states as usize];
    visited[0] = true;
    let mut frontier = vec![0u64];
    for level in 1..=r_max {
        let mut next = Vec::new();
        for &s in &frontier {
            for &g in &gens {
                let u = add_encoded(s, g, p, len);
                if !visited[u as usize] {
                    if u == target {
                        return Ok(PartitionRank::Exact(level));
                    }
                    visited[u as usize] = true;
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(PartitionRank::Exceeds(r_max))
}
