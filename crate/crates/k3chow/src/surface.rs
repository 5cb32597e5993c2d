//! The surface model: a Neron-Severi lattice of divisor classes with its
//! intersection pairing. Together with the distinguished degree-one point
//! class `c_X` this fixes every intersection number the calculus needs.

use crate::rational::{q, Q};
use crate::Error;
use num::traits::Zero;
use std::sync::Arc;

/// A polarized K3 surface, presented by the rank and Gram matrix of its
/// Neron-Severi lattice. Divisor decorations always refer to the basis
/// `D_0, ..., D_{rank-1}`; the pairing `<D_i, D_j>` is `gram[i][j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    ns_rank: usize,
    gram: Vec<Vec<Q>>,
}

impl SurfaceModel {
    pub fn new(gram: Vec<Vec<Q>>) -> Result<Arc<Self>, Error> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::Surface("NS rank must be positive".into()));
        }
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::Surface("Gram matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Surface(format!(
                        "Gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let model = SurfaceModel { ns_rank: n, gram };
        if model.det().is_zero() {
            return Err(Error::Surface("Gram matrix is degenerate".into()));
        }
        Ok(Arc::new(model))
    }

    /// The default model: a degree-2 polarized K3, `NS = Z*H` with `H^2 = 2`.
    pub fn default_model() -> Arc<Self> {
        SurfaceModel::new(vec![vec![q(2)]]).expect("builtin model is valid")
    }

    pub fn ns_rank(&self) -> usize {
        self.ns_rank
    }

    /// `<D_i, D_j>`.
    pub fn pairing(&self, i: usize, j: usize) -> &Q {
        &self.gram[i][j]
    }

    fn det(&self) -> Q {
        // Exact Gaussian elimination; the matrix is tiny.
        let n = self.ns_rank;
        let mut m = self.gram.clone();
        let mut det = q(1);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else {
                return Q::zero();
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            det *= m[col][col].clone();
            for r in col + 1..n {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        det
    }
}

/// A divisor class in coordinates of the chosen NS basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    coeffs: Vec<Q>,
}

impl DivisorClass {
    pub fn new(model: &SurfaceModel, coeffs: Vec<Q>) -> Result<Self, Error> {
        if coeffs.len() != model.ns_rank() {
            return Err(Error::shape(format!(
                "divisor has {} coordinates, NS rank is {}",
                coeffs.len(),
                model.ns_rank()
            )));
        }
        Ok(DivisorClass { coeffs })
    }

    pub fn basis(model: &SurfaceModel, idx: usize) -> Result<Self, Error> {
        if idx >= model.ns_rank() {
            return Err(Error::invalid_factor(format!("no basis divisor {idx}")));
        }
        let mut coeffs = vec![Q::zero(); model.ns_rank()];
        coeffs[idx] = q(1);
        Ok(DivisorClass { coeffs })
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_ratio;

    #[test]
    fn default_model_is_degree_two() {
        let m = SurfaceModel::default_model();
        assert_eq!(m.ns_rank(), 1);
        assert_eq!(*m.pairing(0, 0), q(2));
    }

    #[test]
    fn rejects_asymmetric_gram() {
        let bad = SurfaceModel::new(vec![vec![q(0), q(1)], vec![q(2), q(0)]]);
        assert!(bad.is_err());
    }

    #[test]
    fn rejects_degenerate_gram() {
        let bad = SurfaceModel::new(vec![vec![q(1), q(1)], vec![q(1), q(1)]]);
        assert!(bad.is_err());
    }

    #[test]
    fn accepts_rational_hyperbolic_plane() {
        let m = SurfaceModel::new(vec![
            vec![q(0), q_ratio(1, 2)],
            vec![q_ratio(1, 2), q(0)],
        ])
        .unwrap();
        assert_eq!(m.ns_rank(), 2);
    }
}
