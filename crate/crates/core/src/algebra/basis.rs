//! Ordered bases of tensor subspaces and their lex-order echelon form.

use rand::Rng;

use crate::algebra::field::PrimeField;
use crate::algebra::linalg::Echelon;
use crate::algebra::tensor::{full_axis, Tensor};
use crate::error::{Error, Result};

/// Equality compares the member tensors in order; the `normalized` flag is
/// bookkeeping and does not take part.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    tensors: Vec<Tensor>,
    normalized: bool,
}

impl PartialEq for SubspaceBasis {
    fn eq(&self, other: &Self) -> bool {
        self.tensors == other.tensors
    }
}

impl Eq for SubspaceBasis {}

impl SubspaceBasis {
    /// A basis from tensors of identical shape. Linear independence is not
    /// checked here; see [`gaussian_eliminate`].
    pub fn new(tensors: Vec<Tensor>) -> Result<Self> {
        if let Some(first) = tensors.first() {
            if let Some(bad) = tensors.iter().position(|t| !t.same_shape(first)) {
                return Err(Error::Shape(format!(
                    "basis member {bad} differs in shape from member 0"
                )));
            }
        }
        Ok(SubspaceBasis {
            tensors,
            normalized: false,
        })
    }

    /// Unit tensors of `F_p^{n×⋯×n}` in lexicographic order.
    pub fn full_space(field: PrimeField, n: usize, d: usize) -> Self {
        let template = Tensor::cube(field, n, d);
        let tensors = (0..template.len())
            .map(|flat| {
                let mut entries = vec![0; template.len()];
                entries[flat] = 1;
                Tensor::new(field, template.axes().to_vec(), entries).expect("unit tensor")
            })
            .collect();
        SubspaceBasis {
            tensors,
            normalized: true,
        }
    }

    /// `dim` linearly independent uniformly random tensors in `F_p^{n×⋯×n}`.
    pub fn random(field: PrimeField, n: usize, d: usize, dim: usize, rng: &mut impl Rng) -> Result<Self> {
        let len = n.pow(d as u32);
        if dim > len {
            return Err(Error::Precondition(format!(
                "cannot draw {dim} independent tensors in a space of dimension {len}"
            )));
        }
        let mut ech = Echelon::new(field, len);
        let mut tensors = Vec::with_capacity(dim);
        while tensors.len() < dim {
            let entries: Vec<u32> = (0..len).map(|_| rng.gen_range(0..field.p())).collect();
            if ech.insert(&entries) {
                tensors.push(Tensor::new(field, vec![full_axis(n); d], entries)?);
            }
        }
        SubspaceBasis::new(tensors)
    }

    pub fn tensors(&self) -> &[Tensor] {
        &self.tensors
    }

    pub fn into_tensors(self) -> Vec<Tensor> {
        self.tensors
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn field(&self) -> Option<PrimeField> {
        self.tensors.first().map(Tensor::field)
    }

    fn echelon(&self) -> Option<Echelon> {
        let first = self.tensors.first()?;
        Some(Echelon::from_rows(
            first.field(),
            first.len(),
            self.tensors.iter().map(Tensor::entries),
        ))
    }

    /// Dimension of the span.
    pub fn rank(&self) -> usize {
        self.echelon().map_or(0, |e| e.rank())
    }

    /// Coefficients `c` with `Σ c_i tensors[i] = t`, if `t` is in the span.
    /// Requires the basis to be linearly independent.
    pub fn coordinates(&self, t: &Tensor) -> Option<Vec<u32>> {
        let first = self.tensors.first()?;
        if !t.same_shape(first) {
            return None;
        }
        let e = self.echelon()?;
        let (residual, coeffs) = e.reduce(t.entries());
        if residual.iter().any(|&x| x != 0) {
            return None;
        }
        Some(coeffs)
    }

    /// Lexicographic leads of every member.
    pub fn leads(&self) -> Vec<Option<Vec<usize>>> {
        self.tensors.iter().map(Tensor::lex_lead).collect()
    }
}

/// Result of [`gaussian_eliminate`].
#[derive(Clone, Debug)]
pub struct Elimination {
    /// Normalized basis: distinct increasing leads, each lead entry 1.
    pub basis: SubspaceBasis,
    /// `transform[i][k]` is the coefficient of input `k` in output `i`.
    pub transform: Vec<Vec<u32>>,
    /// Inputs that were linear combinations of earlier inputs.
    pub dependent: Vec<usize>,
}

impl Elimination {
    pub fn is_degenerate(&self) -> bool {
        !self.dependent.is_empty()
    }
}

/// Reduced row-echelon form of a basis, viewing tensors as vectors in
/// `F_p^{n^d}` ordered lexicographically.
pub fn gaussian_eliminate(basis: &SubspaceBasis) -> Elimination {
    let Some(first) = basis.tensors.first() else {
        return Elimination {
            basis: SubspaceBasis {
                tensors: Vec::new(),
                normalized: true,
            },
            transform: Vec::new(),
            dependent: Vec::new(),
        };
    };
    let field = first.field();
    let axes = first.axes().to_vec();
    let e = basis.echelon().expect("non-empty basis");
    let tensors = e
        .rows()
        .iter()
        .map(|row| Tensor::new(field, axes.clone(), row.clone()).expect("row has tensor shape"))
        .collect();
    Elimination {
        basis: SubspaceBasis {
            tensors,
            normalized: true,
        },
        transform: e.transform().to_vec(),
        dependent: e.dependent().to_vec(),
    }
}
