//! JSON forms of tensors and bases.
//!
//! A tensor is written sparsely:
//!
//! ```json
//! {"p": 2, "axes": [[1, 2], [1, 2]], "entries": [[1, 1, 1], [2, 2, 1]]}
//! ```
//!
//! where each entry row is a label tuple followed by the value; omitted
//! coordinates are zero. For order ≤ 3 a nested array under `"dense"` is also
//! accepted (`axes` then defaults to `1..=n` per axis). A basis is
//! `{"p": …, "tensors": [tensor, …]}`; member tensors may omit `p`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::basis::SubspaceBasis;
use crate::algebra::field::PrimeField;
use crate::algebra::tensor::{full_axis, Tensor};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
pub(crate) struct TensorRepr {
    p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axes: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dense: Option<Value>,
}

impl From<Tensor> for TensorRepr {
    fn from(t: Tensor) -> Self {
        let entries = t
            .nonzero()
            .map(|(c, v)| c.into_iter().map(|l| l as i64).chain([v as i64]).collect())
            .collect();
        TensorRepr {
            p: t.p(),
            axes: Some(t.axes().to_vec()),
            entries: Some(entries),
            dense: None,
        }
    }
}

impl TryFrom<TensorRepr> for Tensor {
    type Error = Error;

    fn try_from(r: TensorRepr) -> Result<Self> {
        let field = PrimeField::new(r.p)?;
        match (r.entries, r.dense) {
            (Some(rows), None) => {
                let axes = r
                    .axes
                    .ok_or_else(|| Error::Parse("sparse tensor needs \"axes\"".into()))?;
                let mut t = Tensor::zeros(field, axes)?;
                let d = t.order();
                for row in rows {
                    if row.len() != d + 1 {
                        return Err(Error::Parse(format!(
                            "entry {row:?} should hold {d} labels and a value"
                        )));
                    }
                    let coord = row[..d]
                        .iter()
                        .map(|&l| usize::try_from(l).map_err(|_| Error::Parse(format!("bad label {l}"))))
                        .collect::<Result<Vec<_>>>()?;
                    t.set(&coord, field.reduce(row[d]))?;
                }
                Ok(t)
            }
            (None, Some(dense)) => {
                let mut dims = Vec::new();
                let mut flat = Vec::new();
                flatten_dense(&dense, 0, &mut dims, &mut flat)?;
                if dims.is_empty() || dims.len() > 3 {
                    return Err(Error::Parse("dense form supports order 1 to 3".into()));
                }
                let axes = match r.axes {
                    Some(a) => a,
                    None => dims.iter().map(|&n| full_axis(n)).collect(),
                };
                let entries = flat.into_iter().map(|v| field.reduce(v)).collect();
                Tensor::new(field, axes, entries)
            }
            _ => Err(Error::Parse(
                "tensor needs exactly one of \"entries\" or \"dense\"".into(),
            )),
        }
    }
}

fn flatten_dense(v: &Value, depth: usize, dims: &mut Vec<usize>, out: &mut Vec<i64>) -> Result<()> {
    match v {
        Value::Array(items) => {
            if dims.len() == depth {
                dims.push(items.len());
            } else if dims.get(depth) != Some(&items.len()) {
                return Err(Error::Parse("dense tensor is not rectangular".into()));
            }
            for item in items {
                flatten_dense(item, depth + 1, dims, out)?;
            }
            Ok(())
        }
        Value::Number(n) if depth == dims.len() && depth > 0 => {
            out.push(n.as_i64().ok_or_else(|| Error::Parse(format!("bad entry {n}")))?);
            Ok(())
        }
        _ => Err(Error::Parse(format!("unexpected value in dense tensor: {v}"))),
    }
}

#[derive(Serialize, Deserialize)]
struct BasisRepr {
    p: u32,
    tensors: Vec<Value>,
}

impl Serialize for SubspaceBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = self.field().map_or(2, PrimeField::p);
        let tensors = self
            .tensors()
            .iter()
            .map(serde_json::to_value)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::ser::Error::custom)?;
        BasisRepr { p, tensors }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubspaceBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = BasisRepr::deserialize(d)?;
        basis_from_repr(repr).map_err(serde::de::Error::custom)
    }
}

fn basis_from_repr(repr: BasisRepr) -> Result<SubspaceBasis> {
    let tensors = repr
        .tensors
        .into_iter()
        .map(|mut v| {
            if let Value::Object(map) = &mut v {
                map.entry("p").or_insert(Value::from(repr.p));
            }
            let t: Tensor = serde_json::from_value(v)?;
            if t.p() != repr.p {
                return Err(Error::Parse(format!(
                    "member tensor over F_{} in a basis over F_{}",
                    t.p(),
                    repr.p
                )));
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    SubspaceBasis::new(tensors)
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_basis(path: impl AsRef<Path>) -> Result<SubspaceBasis> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_round_trip() {
        let field = PrimeField::new(3).unwrap();
        let t = Tensor::from_fn(field, vec![vec![1, 4], vec![2, 3, 5]], |c| (c[0] + c[1]) as i64).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        let back: Tensor = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn dense_form() {
        let t: Tensor = serde_json::from_str(r#"{"p": 2, "dense": [[[1,0],[0,0]],[[0,0],[0,1]]]}"#).unwrap();
        assert_eq!(t.dims(), vec![2, 2, 2]);
        assert_eq!(t.nonzero().count(), 2);
        assert_eq!(t.get(&[2, 2, 2]).unwrap(), 1);
        let bad = serde_json::from_str::<Tensor>(r#"{"p": 2, "dense": [[1,0],[0]]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn sparse_rejects_bad_rows() {
        let bad = serde_json::from_str::<Tensor>(r#"{"p": 2, "axes": [[1,2],[1,2]], "entries": [[1,3,1]]}"#);
        assert!(bad.is_err());
        let bad = serde_json::from_str::<Tensor>(r#"{"p": 4, "axes": [[1]], "entries": []}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn basis_members_inherit_p() {
        let b: SubspaceBasis = serde_json::from_str(
            r#"{"p": 5, "tensors": [{"axes": [[1,2],[1,2]], "entries": [[1,2,7]]}]}"#,
        )
        .unwrap();
        assert_eq!(b.tensors()[0].get(&[1, 2]).unwrap(), 2);
        let again: SubspaceBasis = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(again, b);
    }
}
