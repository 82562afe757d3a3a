//! Operator Schmidt decomposition `U = Σ_k λ_k A_k ⊗ B_k` with
//! Hilbert–Schmidt orthonormal factors, obtained from the SVD of the
//! realigned gate matrix.

use crate::error::{Error, Result};
use crate::tensor::{kron, svd, CMatrix, Gate, ZERO};

#[derive(Clone, Debug)]
pub struct OperatorSchmidt {
    pub d: usize,
    /// All `d²` singular values, descending.
    pub coeffs: Vec<f64>,
    pub factors_a: Vec<CMatrix>,
    pub factors_b: Vec<CMatrix>,
    /// Number of coefficients above `tol_used · coeffs[0]`.
    pub rank: usize,
    pub tol_used: f64,
}

impl OperatorSchmidt {
    /// `Σ_k λ_k A_k ⊗ B_k` over the first `terms` pairs.
    pub fn reconstruct_terms(&self, terms: usize) -> CMatrix {
        let n = self.d * self.d;
        let mut m = CMatrix::zeros(n, n);
        for k in 0..terms.min(self.coeffs.len()) {
            m += kron(&self.factors_a[k], &self.factors_b[k]).scale(self.coeffs[k]);
        }
        m
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_terms(self.coeffs.len())
    }

    pub fn reconstruction_residual(&self, gate: &Gate) -> f64 {
        (gate.matrix() - self.reconstruct()).norm()
    }
}

/// Realignment `R[(i,j),(a,b)] = M[(i,a),(j,b)]` of a `d² × d²` operator, with
/// `i, j` indexing A and `a, b` indexing B. The map is its own inverse.
pub fn reshuffle_matrix(m: &CMatrix, d: usize) -> CMatrix {
    let n = d * d;
    assert_eq!(m.shape(), (n, n), "reshuffle needs a d²×d² matrix");
    let mut r = CMatrix::from_element(n, n, ZERO);
    for i in 0..d {
        for a in 0..d {
            for j in 0..d {
                for b in 0..d {
                    r[(i * d + j, a * d + b)] = m[(i * d + a, j * d + b)];
                }
            }
        }
    }
    r
}

pub fn reshuffle(g: &Gate) -> CMatrix {
    reshuffle_matrix(g.matrix(), g.d())
}

pub fn schmidt_decompose(g: &Gate, tol_rank: f64) -> Result<OperatorSchmidt> {
    if !(tol_rank > 0.0 && tol_rank < 1.0) {
        return Err(Error::InvalidParameter(format!("tol_rank = {tol_rank} must lie in (0, 1)")));
    }
    let d = g.d();
    let n = d * d;
    let r = reshuffle(g);
    let (u, sigma, v_t) = svd(&r)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));

    let mut coeffs = Vec::with_capacity(n);
    let mut factors_a = Vec::with_capacity(n);
    let mut factors_b = Vec::with_capacity(n);
    for &k in &order {
        // R = Σ σ_k w_k x_k†: A_k[i,j] = w_k[i·d+j], B_k[a,b] = (x_k†)[a·d+b]
        let mut a = CMatrix::from_fn(d, d, |i, j| u[(i * d + j, k)]);
        let mut b = CMatrix::from_fn(d, d, |i, j| v_t[(k, i * d + j)]);
        let pivot = a
            .iter()
            .copied()
            .fold(ZERO, |best, z| if z.norm() > best.norm() { z } else { best });
        if pivot.norm() > 0.0 {
            let phase = pivot / pivot.norm();
            a *= phase.conj();
            b *= phase;
        }
        coeffs.push(sigma[k]);
        factors_a.push(a);
        factors_b.push(b);
    }

    let cutoff = tol_rank * coeffs[0];
    let rank = coeffs.iter().filter(|&&c| c > cutoff).count();
    Ok(OperatorSchmidt {
        d,
        coeffs,
        factors_a,
        factors_b,
        rank,
        tol_used: tol_rank,
    })
}
