//! Diagonal matchings covering `[n]^d` and the pigeonhole choice of pivots.
//!
//! A matching is the set `b + (i,…,i)` for `i ∈ [n - max b]`, where the base
//! offset `b ∈ {0,…,n-1}^d` has a zero entry. We store the base as the
//! position of its first zero (`zero_axis`, 0-based) plus the remaining
//! `d - 1` offsets, which makes the representation canonical.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::algebra::tensor::for_each_index;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchingId {
    pub zero_axis: usize,
    pub offsets: Vec<usize>,
}

impl MatchingId {
    pub fn new(zero_axis: usize, offsets: Vec<usize>) -> Self {
        MatchingId { zero_axis, offsets }
    }

    pub fn order(&self) -> usize {
        self.offsets.len() + 1
    }

    /// The full offset vector with the zero re-inserted.
    pub fn base(&self) -> Vec<usize> {
        let mut b = self.offsets.clone();
        b.insert(self.zero_axis.min(b.len()), 0);
        b
    }

    /// The canonical id of a base vector (one with a zero entry).
    pub fn from_base(base: &[usize]) -> Option<Self> {
        let zero_axis = base.iter().position(|&x| x == 0)?;
        let mut offsets = base.to_vec();
        offsets.remove(zero_axis);
        Some(MatchingId { zero_axis, offsets })
    }

    fn validate(&self, n: usize, d: usize) -> Result<()> {
        if self.offsets.len() + 1 != d || self.zero_axis >= d {
            return Err(Error::Domain(format!("matching {self:?} does not have order {d}")));
        }
        if self.offsets.iter().any(|&o| o >= n) {
            return Err(Error::Domain(format!("matching offsets {:?} exceed n - 1 = {}", self.offsets, n - 1)));
        }
        Ok(())
    }
}

impl PartialOrd for MatchingId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the base vector, then on `zero_axis`.
impl Ord for MatchingId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base()
            .cmp(&other.base())
            .then(self.zero_axis.cmp(&other.zero_axis))
    }
}

/// The cells `base + (i,…,i)`, `i = 1..=n - max(base)`, as 1-based coordinates.
pub fn matching_cells(id: &MatchingId, n: usize, d: usize) -> Result<Vec<Vec<usize>>> {
    id.validate(n, d)?;
    let base = id.base();
    let top = base.iter().copied().max().unwrap_or(0);
    Ok((1..=n.saturating_sub(top))
        .map(|i| base.iter().map(|&b| b + i).collect())
        .collect())
}

/// The matching containing `coord`: shift by `min(coord) - 1` to reach the
/// matching's smallest cell.
pub fn cover_assign(coord: &[usize], n: usize, d: usize) -> Result<MatchingId> {
    if coord.len() != d || coord.iter().any(|&c| c == 0 || c > n) {
        return Err(Error::Domain(format!("{coord:?} is not in [{n}]^{d}")));
    }
    let low = *coord.iter().min().expect("d >= 1");
    let base: Vec<usize> = coord.iter().map(|&c| c - low).collect();
    Ok(MatchingId::from_base(&base).expect("base has a zero entry"))
}

/// Every distinct matching of `[n]^d`, in increasing order.
pub fn all_matchings(n: usize, d: usize) -> Vec<MatchingId> {
    let mut out = Vec::new();
    for_each_index(&vec![n; d], |b| {
        if let Some(id) = MatchingId::from_base(b) {
            out.push(id);
        }
    });
    out.sort();
    out
}

/// Pivots chosen on one matching: `selected[k]` indexes the lead list and
/// `ρ = base + (f[k],…,f[k])` with `f` strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PivotInfo {
    pub matching: MatchingId,
    pub selected: Vec<usize>,
    pub f: Vec<usize>,
}

impl PivotInfo {
    pub fn base(&self) -> Vec<usize> {
        self.matching.base()
    }

    /// `rs`, the number of selected pivots.
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }
}

/// Choose a matching holding at least `⌈t/d⌉` of the (pairwise distinct)
/// leads and keep the `r·⌊t/(dr)⌋` of them with the smallest diagonal index.
/// Among matchings with the most leads the least [`MatchingId`] wins.
pub fn pigeonhole_select(leads: &[Vec<usize>], n: usize, d: usize, t: usize, r: usize) -> Result<PivotInfo> {
    if r == 0 || t == 0 || d == 0 {
        return Err(Error::Precondition("t, r and d must be positive".into()));
    }
    let s = t / (d * r);
    if s == 0 {
        return Err(Error::Precondition(format!(
            "t = {t} < d·r = {}: no intervals to build",
            d * r
        )));
    }
    let needed_leads = t * n.pow(d as u32 - 1);
    if leads.len() < needed_leads {
        return Err(Error::Precondition(format!(
            "{} leads, need at least t·n^(d-1) = {needed_leads}",
            leads.len()
        )));
    }
    let mut distinct = HashSet::new();
    if !leads.iter().all(|l| distinct.insert(l)) {
        return Err(Error::Precondition("leads are not pairwise distinct".into()));
    }
    let mut groups: BTreeMap<MatchingId, Vec<(usize, usize)>> = BTreeMap::new();
    for (idx, lead) in leads.iter().enumerate() {
        let id = cover_assign(lead, n, d)?;
        let f = lead[0] - id.base()[0];
        groups.entry(id).or_default().push((f, idx));
    }
    let best = groups.values().map(Vec::len).max().unwrap_or(0);
    let (matching, mut members) = groups
        .into_iter()
        .find(|(_, v)| v.len() == best)
        .ok_or_else(|| Error::invariant("pigeonhole", "no leads to select from"))?;
    if best < t.div_ceil(d) {
        return Err(Error::invariant(
            "pigeonhole",
            format!("largest matching holds {best} leads, fewer than t/d"),
        ));
    }
    members.sort_unstable();
    members.truncate(r * s);
    Ok(PivotInfo {
        matching,
        f: members.iter().map(|&(f, _)| f).collect(),
        selected: members.iter().map(|&(_, idx)| idx).collect(),
    })
}
