//! Dense complex matrices, bipartite states and the primitives the rest of
//! the crate is built on.
//!
//! Composite indices follow the A-major convention everywhere: the basis state
//! `|i_A, i_B⟩` of a `d_A × d_B` system sits at index `i_A · d_B + i_B`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tol;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const IM: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Which factor of `H_A ⊗ H_B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// Kronecker product, A-major.
pub fn kron(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x.kronecker(y)
}

/// Trace out one factor of a `d_A·d_B` square operator and keep the other.
pub fn partial_trace(rho: &CMatrix, dims: (usize, usize), keep: Side) -> Result<CMatrix> {
    let (da, db) = dims;
    let n = da * db;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, expected {n}x{n} for dims ({da}, {db})",
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok(match keep {
        Side::A => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|b| rho[(i * db + b, j * db + b)]).sum()
        }),
        Side::B => CMatrix::from_fn(db, db, |a, b| {
            (0..da).map(|i| rho[(i * db + a, i * db + b)]).sum()
        }),
    })
}

/// Reduced density operator of a (not necessarily normalized) bipartite
/// vector, computed without forming the full projector.
pub fn reduced_state(psi: &CVector, dims: (usize, usize), keep: Side) -> Result<CMatrix> {
    let (da, db) = dims;
    if psi.len() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "vector has length {}, expected {}",
            psi.len(),
            da * db
        )));
    }
    // amplitude matrix: rows index A, columns index B
    let m = CMatrix::from_fn(da, db, |i, b| psi[i * db + b]);
    Ok(match keep {
        Side::A => &m * m.adjoint(),
        Side::B => m.transpose() * m.map(|z| z.conj()),
    })
}

/// `‖M†M − I‖_F / √n`.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return f64::INFINITY;
    }
    (m.adjoint() * m - CMatrix::identity(n, n)).norm() / (n as f64).sqrt()
}

/// Hermitian eigendecomposition; eigenvalues ascending with matching columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `½‖ρ − σ‖₁` from the eigenvalues of the Hermitian difference.
pub fn trace_distance(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let (values, _) = hermitian_eigen(&(rho - sigma));
    0.5 * values.iter().map(|v| v.abs()).sum::<f64>()
}

/// SVD `M = U Σ V†` (faer's divide-and-conquer solver), singular values
/// descending. The factorization is checked against `M`.
pub fn svd(m: &CMatrix) -> Result<(CMatrix, Vec<f64>, CMatrix)> {
    let f = faer::Mat::<Complex64>::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)]);
    let svd = f
        .thin_svd()
        .map_err(|e| Error::Decomposition(format!("SVD did not converge: {e:?}")))?;
    let (fu, fs, fv) = (svd.U(), svd.S(), svd.V());
    let k = m.nrows().min(m.ncols());
    let u = CMatrix::from_fn(m.nrows(), k, |r, c| fu[(r, c)]);
    let v_t = CMatrix::from_fn(k, m.ncols(), |r, c| fv[(c, r)].conj());
    let sigma: Vec<f64> = (0..k).map(|i| fs[i].re).collect();
    let rebuilt = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| {
        (0..sigma.len()).map(|k| u[(r, k)] * sigma[k] * v_t[(k, c)]).sum()
    });
    let residual = (m - rebuilt).norm();
    let scale = m.norm().max(1.0);
    if residual > 1e-10 * scale {
        return Err(Error::Residual {
            what: "singular value decomposition",
            residual,
            tol: 1e-10 * scale,
        });
    }
    Ok((u, sigma, v_t))
}

/// Unitary factor `W V†` of the polar decomposition `M = (W V†)(V Σ V†)`.
pub fn polar_unitary(m: &CMatrix) -> Result<CMatrix> {
    let (u, _, v_t) = svd(m)?;
    Ok(u * v_t)
}

/// `exp(iθ)` with `θ = arg Tr(X†Y)`: the phase that best aligns `X` onto `Y`.
pub fn alignment_phase(x: &CMatrix, y: &CMatrix) -> Complex64 {
    let overlap: Complex64 = x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum();
    if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    }
}

/// Frobenius distance between `target` and `candidate` after optimal global
/// phase alignment of the candidate.
pub fn distance_up_to_phase(target: &CMatrix, candidate: &CMatrix) -> f64 {
    let phase = alignment_phase(candidate, target);
    (target - candidate * phase).norm()
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        entries.push(gaussian_complex(rng));
    }
    let z = CMatrix::from_row_slice(dim, dim, &entries);
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState(CVector);

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if let Some(i) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(amplitudes))
    }

    /// Rescale a nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(amplitudes.unscale(norm)))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = ONE;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.0
    }

    pub fn into_inner(self) -> CVector {
        self.0
    }

    /// `|self⟩ ⊗ |other⟩`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState(self.0.kronecker(&other.0))
    }

    pub fn density(&self) -> CMatrix {
        &self.0 * self.0.adjoint()
    }
}

/// Haar-random unit vector.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        let v = CVector::from_fn(dim, |_, _| gaussian_complex(rng));
        if let Ok(state) = PureState::normalized(v) {
            return state;
        }
    }
}

/// Two independent Haar-random qudit states `(ψ_A, ψ_B)`.
pub fn random_product_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> (PureState, PureState) {
    let a = random_pure_state(d, rng);
    let b = random_pure_state(d, rng);
    (a, b)
}

/// Base-2 von Neumann entropy of a density operator. Eigenvalues are clamped
/// to `[0, 1]` and those below the cutoff are dropped.
pub fn von_neumann_entropy(rho: &CMatrix) -> f64 {
    let (values, _) = hermitian_eigen(rho);
    values
        .into_iter()
        .map(|p| p.clamp(0.0, 1.0))
        .filter(|&p| p >= tol::ENTROPY_CUTOFF)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Entropy of entanglement of a bipartite pure state, in ebits.
pub fn entanglement_entropy(psi: &PureState, dims: (usize, usize)) -> Result<f64> {
    let rho = reduced_state(psi.amplitudes(), dims, Side::A)?;
    Ok(von_neumann_entropy(&rho))
}

/// `⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
pub fn state_fidelity(psi: &PureState, rho: &CMatrix) -> Result<f64> {
    let n = psi.dim();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "state has dimension {n}, density operator is {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let v = psi.amplitudes();
    let value = (v.adjoint() * rho * v)[(0, 0)].re;
    Ok(value.clamp(0.0, 1.0))
}

/// Swap of two `d`-level systems.
pub fn swap_matrix(d: usize) -> CMatrix {
    let n = d * d;
    let mut m = CMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            m[(j * d + i, i * d + j)] = ONE;
        }
    }
    m
}

/// A two-qudit unitary acting on `H_A ⊗ H_B`, each factor of dimension `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    d: usize,
    matrix: CMatrix,
}

impl Gate {
    pub fn new(d: usize, matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(d, matrix, tol::UNITARY)
    }

    pub fn with_tolerance(d: usize, matrix: CMatrix, tol_unitary: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDimension {
                d,
                reason: "local dimension must be at least 2",
            });
        }
        let n = d * d;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "gate matrix is {}x{}, expected {n}x{n} for d = {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        for r in 0..n {
            for c in 0..n {
                let z = matrix[(r, c)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        let residual = unitarity_residual(&matrix);
        if residual > tol_unitary {
            return Err(Error::NotUnitary {
                residual,
                tol: tol_unitary,
            });
        }
        Ok(Self { d, matrix })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.d * self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// The same gate with the roles of A and B exchanged: `SWAP · U · SWAP`.
    pub fn swapped(&self) -> Gate {
        let s = swap_matrix(self.d);
        Gate {
            d: self.d,
            matrix: &s * &self.matrix * &s,
        }
    }

    /// `(a ⊗ b) · U · (c ⊗ e)` for local unitaries.
    pub fn dressed(&self, a: &CMatrix, b: &CMatrix, c: &CMatrix, e: &CMatrix) -> Result<Gate> {
        let m = kron(a, b) * &self.matrix * kron(c, e);
        Gate::new(self.d, m)
    }
}
