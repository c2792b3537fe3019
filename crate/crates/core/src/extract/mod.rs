//! High-rank subspace extraction with re-checkable certificates.
//!
//! From a basis of `V ⊆ F_p^{n×⋯×n}` with `dim V ≥ t·n^{d-1}` the pipeline
//! eliminates to distinct lex leads, picks `rs = r·⌊t/(dr)⌋` leads on one
//! diagonal matching, reads the pivot sub-tensors `Q_1,…,Q_rs` off the matching
//! rectangle, and on each interval `I_j = {(j-1)r+1,…,jr}` grows `R_j` one
//! coordinate at a time so that `bias(R_j|I_j) ≤ ρ^r`. Lifting the chosen
//! coefficients to the basis tensors gives `T*_1,…,T*_s`, whose span `W` has
//! every nonzero element of bias at most `ρ^r`.

pub mod boost;
pub mod matching;

pub use boost::{best_lambda, build_q, lambda_boost, BoostStep};
pub use matching::{all_matchings, cover_assign, matching_cells, pigeonhole_select, MatchingId, PivotInfo};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{full_axis, gaussian_eliminate, PrimeField, SubspaceBasis, Tensor};
use crate::algebra::linalg;
use crate::error::{Error, Result};
use crate::rank::{bias, c_constant, BiasValue, RankThreshold};

/// One interval of the construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    /// Labels of `I_j` inside `[rs]`.
    pub labels: Vec<usize>,
    /// `λ` chosen at each step; `R_j = Σ_k lambdas[k]·Q_{labels[k]}`.
    pub lambdas: Vec<u32>,
    /// `bias(R_j)` restricted to the first `k + 1` labels of `I_j`, per step.
    pub step_biases: Vec<BiasValue>,
}

/// A projective nonzero element `Σ coefficients[j]·T*_j` of `W` with its bias.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub coefficients: Vec<u32>,
    pub bias: BiasValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionCertificate {
    pub p: u32,
    pub d: usize,
    pub n: usize,
    pub t: usize,
    pub r: usize,
    pub s: usize,
    pub pivot: PivotInfo,
    /// `ρ^r`, the bias every element must meet.
    pub threshold: RankThreshold,
    /// `c = -log_p ρ`; reporting only.
    pub c: f64,
    pub intervals: Vec<IntervalRecord>,
    /// `T*_1,…,T*_s`.
    pub w_basis: SubspaceBasis,
    /// Coefficients of each `T*_j` over `v_basis`.
    pub w_coefficients: Vec<Vec<u32>>,
    pub v_basis: SubspaceBasis,
    pub elements: Vec<ElementRecord>,
}

/// Representatives of the nonzero vectors of `F_p^s` up to scaling: those
/// whose first nonzero entry is 1, in lexicographic order.
pub fn projective_points(p: u32, s: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..s {
        let free = s - lead - 1;
        let count = (p as usize).pow(free as u32);
        for mut code in 0..count {
            let mut v = vec![0u32; s];
            v[lead] = 1;
            for slot in (lead + 1..s).rev() {
                v[slot] = (code % p as usize) as u32;
                code /= p as usize;
            }
            out.push(v);
        }
    }
    out
}

fn element_biases(field: PrimeField, w: &[Tensor]) -> Result<Vec<ElementRecord>> {
    projective_points(field.p(), w.len())
        .into_par_iter()
        .map(|coefficients| {
            let el = Tensor::combination(&coefficients, w)?;
            Ok(ElementRecord {
                bias: bias(&el),
                coefficients,
            })
        })
        .collect()
}

/// Run the full construction on `v_basis` with parameters `t` and `r`.
pub fn extract_subspace(v_basis: &SubspaceBasis, t: usize, r: usize) -> Result<ExtractionCertificate> {
    let first = v_basis
        .tensors()
        .first()
        .ok_or_else(|| Error::Precondition("V is empty".into()))?;
    let field = first.field();
    let d = first.order();
    let n = first.dims()[0];
    if d < 2 {
        return Err(Error::Precondition(format!("order {d} < 2")));
    }
    if !first.is_principal() || first.axes().iter().any(|a| a.len() != n) {
        return Err(Error::Shape("V must consist of [n]^d tensors".into()));
    }
    if !(n >= t && t >= r && r >= 1) {
        return Err(Error::Precondition(format!("need n ≥ t ≥ r ≥ 1, got n={n}, t={t}, r={r}")));
    }
    let s = t / (d * r);
    if s == 0 {
        return Err(Error::Precondition(format!("t = {t} < d·r = {}: W would be trivial", d * r)));
    }
    let elim = gaussian_eliminate(v_basis);
    let dim = elim.basis.len();
    let needed = t * n.pow(d as u32 - 1);
    if dim < needed {
        return Err(Error::Precondition(format!("dim V = {dim} < t·n^(d-1) = {needed}")));
    }
    let leads: Vec<Vec<usize>> = elim
        .basis
        .leads()
        .into_iter()
        .map(|l| l.ok_or_else(|| Error::invariant("gaussian_eliminate", "zero row in echelon basis")))
        .collect::<Result<_>>()?;
    let pivot = pigeonhole_select(&leads, n, d, t, r)?;
    let basis_t = elim.basis.tensors();
    let qs: Vec<Tensor> = pivot
        .selected
        .iter()
        .enumerate()
        .map(|(k, &idx)| build_q(&basis_t[idx], &pivot, k + 1))
        .collect::<Result<_>>()?;

    let (rho, c) = c_constant(field.p(), d);
    let threshold = rho.with_power(r as u32);
    let n_inputs = v_basis.len();
    let mut intervals = Vec::with_capacity(s);
    let mut w = Vec::with_capacity(s);
    let mut w_coefficients = Vec::with_capacity(s);
    for j in 0..s {
        let labels: Vec<usize> = (j * r + 1..=(j + 1) * r).collect();
        for (later, q) in qs.iter().enumerate().skip((j + 1) * r) {
            if !q.restrict(&labels)?.is_zero() {
                return Err(Error::invariant(
                    "block_triangularity",
                    format!("Q_{} does not vanish on I_{}", later + 1, j + 1),
                ));
            }
        }
        let local: Vec<Tensor> = labels
            .iter()
            .map(|&i| qs[i - 1].restrict(&labels)?.relabel(vec![full_axis(r); d]))
            .collect::<Result<_>>()?;
        let mut acc = Tensor::cube(field, r, d);
        let mut lambdas = Vec::with_capacity(r);
        let mut step_biases = Vec::with_capacity(r);
        for (i, q) in local.iter().enumerate() {
            let step = lambda_boost(&acc, q, i, &rho)?;
            acc = step.tensor.expect("lambda_boost returns the new tensor");
            lambdas.push(step.lambda);
            step_biases.push(step.bias);
        }
        let r_j = Tensor::combination(
            &lambdas,
            &labels.iter().map(|&i| qs[i - 1].clone()).collect::<Vec<_>>(),
        )?;
        if r_j.restrict(&labels)?.relabel(vec![full_axis(r); d])? != acc {
            return Err(Error::invariant("interval_assembly", format!("R_{} disagrees with the induction", j + 1)));
        }
        let members: Vec<Tensor> = labels.iter().map(|&i| basis_t[pivot.selected[i - 1]].clone()).collect();
        let t_star = Tensor::combination(&lambdas, &members)?;
        let mut coeffs = vec![0u32; n_inputs];
        for (&i, &lambda) in labels.iter().zip(&lambdas) {
            let row = &elim.transform[pivot.selected[i - 1]];
            for (c, &x) in coeffs.iter_mut().zip(row) {
                *c = field.add(*c, field.mul(lambda, x));
            }
        }
        intervals.push(IntervalRecord {
            labels,
            lambdas,
            step_biases,
        });
        w.push(t_star);
        w_coefficients.push(coeffs);
    }
    let w_basis = SubspaceBasis::new(w)?;
    if w_basis.rank() != s {
        return Err(Error::invariant("independence", format!("rank W = {} < s = {s}", w_basis.rank())));
    }
    let elements = element_biases(field, w_basis.tensors())?;
    if let Some(bad) = elements.iter().find(|e| !e.bias.leq_threshold(&threshold)) {
        return Err(Error::invariant(
            "element_bias",
            format!("element {:?} has bias {} above ρ^{r}", bad.coefficients, bad.bias),
        ));
    }
    Ok(ExtractionCertificate {
        p: field.p(),
        d,
        n,
        t,
        r,
        s,
        pivot,
        threshold,
        c,
        intervals,
        w_basis,
        w_coefficients,
        v_basis: v_basis.clone(),
        elements,
    })
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub checked_elements: usize,
    /// Worst exact bias seen among the elements of `W`.
    pub max_bias: Option<BiasValue>,
    /// Description of the first failed check.
    pub failure: Option<String>,
    /// Coefficients of the first element whose bias exceeds the threshold.
    pub counterexample: Option<Vec<u32>>,
}

impl VerifyReport {
    fn fail(checked: usize, msg: impl Into<String>) -> Self {
        VerifyReport {
            ok: false,
            checked_elements: checked,
            max_bias: None,
            failure: Some(msg.into()),
            counterexample: None,
        }
    }
}

/// Independently re-check a certificate: parameters and threshold, `W ⊆ V`
/// with the recorded coefficients, `dim W = s`, and the exact bias of every
/// projective nonzero element of `W` against `ρ^r` and the recorded values.
pub fn verify_certificate(cert: &ExtractionCertificate) -> VerifyReport {
    match verify_inner(cert) {
        Ok(report) => report,
        Err(e) => VerifyReport::fail(0, e.to_string()),
    }
}

fn verify_inner(cert: &ExtractionCertificate) -> Result<VerifyReport> {
    let field = PrimeField::new(cert.p)?;
    let (d, n, t, r, s) = (cert.d, cert.n, cert.t, cert.r, cert.s);
    if d < 2 || r == 0 || s == 0 || s != t / (d * r) {
        return Ok(VerifyReport::fail(0, format!("inconsistent parameters d={d}, t={t}, r={r}, s={s}")));
    }
    let (rho, _) = c_constant(cert.p, d);
    if cert.threshold != rho.with_power(r as u32) {
        return Ok(VerifyReport::fail(0, "threshold is not ρ^r".to_string()));
    }
    let w = cert.w_basis.tensors();
    if w.len() != s || cert.w_coefficients.len() != s {
        return Ok(VerifyReport::fail(0, format!("W has {} members, expected s = {s}", w.len())));
    }
    let template = Tensor::cube(field, n, d);
    if let Some(bad) = w.iter().chain(cert.v_basis.tensors()).position(|x| !x.same_shape(&template) || x.p() != cert.p) {
        return Ok(VerifyReport::fail(0, format!("tensor {bad} is not an [n]^d tensor over F_p")));
    }
    for (j, (tj, coeffs)) in w.iter().zip(&cert.w_coefficients).enumerate() {
        if coeffs.len() != cert.v_basis.len() {
            return Ok(VerifyReport::fail(0, format!("T*_{} has {} coefficients", j + 1, coeffs.len())));
        }
        if &Tensor::combination(coeffs, cert.v_basis.tensors())? != tj {
            return Ok(VerifyReport::fail(0, format!("T*_{} differs from its recorded combination of V", j + 1)));
        }
    }
    let v_rows: Vec<Vec<u32>> = cert.v_basis.tensors().iter().map(|x| x.entries().to_vec()).collect();
    let v_rank = linalg::rank(field, &v_rows);
    for (j, tj) in w.iter().enumerate() {
        let mut rows = v_rows.clone();
        rows.push(tj.entries().to_vec());
        if linalg::rank(field, &rows) != v_rank {
            return Ok(VerifyReport::fail(0, format!("T*_{} is not in V", j + 1)));
        }
    }
    if v_rank < t * n.pow(d as u32 - 1) {
        return Ok(VerifyReport::fail(0, format!("dim V = {v_rank} is below t·n^(d-1)")));
    }
    if cert.w_basis.rank() != s {
        return Ok(VerifyReport::fail(0, format!("dim W = {} ≠ s = {s}", cert.w_basis.rank())));
    }
    let points = projective_points(cert.p, s);
    let computed = element_biases(field, w)?;
    let mut max_bias: Option<BiasValue> = None;
    for (k, el) in computed.iter().enumerate() {
        if max_bias.as_ref().is_none_or(|m| el.bias > *m) {
            max_bias = Some(el.bias.clone());
        }
        if !el.bias.leq_threshold(&cert.threshold) {
            return Ok(VerifyReport {
                ok: false,
                checked_elements: k + 1,
                max_bias,
                failure: Some(format!(
                    "element {:?} has bias {} = {:.6} > ρ^{r}",
                    el.coefficients,
                    el.bias,
                    el.bias.to_f64()
                )),
                counterexample: Some(el.coefficients.clone()),
            });
        }
    }
    let recorded_ok = cert.elements.len() == points.len()
        && cert
            .elements
            .iter()
            .zip(&computed)
            .all(|(a, b)| a.coefficients == b.coefficients && a.bias == b.bias);
    if !recorded_ok {
        return Ok(VerifyReport {
            ok: false,
            checked_elements: computed.len(),
            max_bias,
            failure: Some("recorded element biases differ from the recomputation".into()),
            counterexample: None,
        });
    }
    Ok(VerifyReport {
        ok: true,
        checked_elements: computed.len(),
        max_bias,
        failure: None,
        counterexample: None,
    })
}
