//! Simultaneous diagonalization of a family of matrices by Jacobi rotations,
//! following Cardoso and Souloumiac's joint-diagonalization sweeps.
//!
//! Each input `X` is split into its Hermitian parts `(X + X†)/2` and
//! `(X − X†)/2i`; for a commuting family of normal matrices these parts all
//! commute and share an eigenbasis. Sweeps rotate pairs of basis vectors to
//! minimize the total off-diagonal Frobenius mass. Real symmetric input
//! produces real rotations.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::tensor::{c64, CMatrix};

const MAX_SWEEPS: usize = 100;
/// Stop once a sweep reduces the off-diagonal mass (relative to the total)
/// by less than this.
const MIN_IMPROVEMENT: f64 = 1e-12;
const ROTATION_THRESHOLD: f64 = 1e-15;

#[derive(Clone, Debug)]
pub struct JointDiagonalization {
    /// Unitary `V` with `V† X V` (approximately) diagonal for every input `X`.
    pub basis: CMatrix,
    /// `max_X ‖offdiag(V† X V)‖_F` over the original family.
    pub residual: f64,
    pub sweeps: usize,
}

fn off_mass(mats: &[CMatrix]) -> f64 {
    mats.iter()
        .map(|m| {
            let mut s = 0.0;
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    if r != c {
                        s += m[(r, c)].norm_sqr();
                    }
                }
            }
            s
        })
        .sum()
}

/// Largest off-diagonal Frobenius norm of `V† X V` over the family.
pub fn off_diagonal_residual(family: &[CMatrix], basis: &CMatrix) -> f64 {
    family
        .iter()
        .map(|x| {
            let y = basis.adjoint() * x * basis;
            off_mass(std::slice::from_ref(&y)).sqrt()
        })
        .fold(0.0, f64::max)
}

pub fn joint_diagonalize(family: &[CMatrix]) -> JointDiagonalization {
    let n = family.first().map_or(0, |m| m.nrows());
    let half = c64(0.5, 0.0);
    let minus_half_i = c64(0.0, -0.5);
    let mut mats: Vec<CMatrix> = family
        .iter()
        .flat_map(|x| {
            let xd = x.adjoint();
            [(x + &xd) * half, (x - &xd) * minus_half_i]
        })
        .filter(|h| h.norm() > 0.0)
        .collect();

    let mut basis = CMatrix::identity(n, n);
    let total: f64 = mats.iter().map(|m| m.norm_squared()).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut off = off_mass(&mats) / total;
    let mut sweeps = 0;

    while sweeps < MAX_SWEEPS && n > 1 {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let mut g = Matrix3::<f64>::zeros();
                for m in &mats {
                    let apq = m[(p, q)];
                    let v = Vector3::new(
                        (m[(p, p)] - m[(q, q)]).re,
                        (apq + m[(q, p)]).re,
                        (Complex64::i() * (m[(q, p)] - apq)).re,
                    );
                    g += v * v.transpose();
                }
                if g.trace() < 1e-300 {
                    continue;
                }
                let eig = SymmetricEigen::new(g);
                let k = (0..3)
                    .max_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]))
                    .unwrap();
                let mut angles = eig.eigenvectors.column(k).into_owned();
                if angles[0] < 0.0 {
                    angles = -angles;
                }
                let c = (0.5 + angles[0] / 2.0).sqrt();
                let s = c64(angles[1], -angles[2]) * (0.5 / c);
                if s.norm() <= ROTATION_THRESHOLD {
                    continue;
                }
                rotated = true;
                for m in mats.iter_mut() {
                    rotate(m, p, q, c, s);
                }
                for r in 0..n {
                    let bp = basis[(r, p)];
                    let bq = basis[(r, q)];
                    basis[(r, p)] = bp * c + bq * s;
                    basis[(r, q)] = -bp * s.conj() + bq * c;
                }
            }
        }
        let next = off_mass(&mats) / total;
        let improvement = off - next;
        off = next;
        if !rotated || improvement < MIN_IMPROVEMENT {
            break;
        }
    }

    let residual = off_diagonal_residual(family, &basis);
    JointDiagonalization {
        basis,
        residual,
        sweeps,
    }
}

/// `A ← G† A G` with `G = [[c, −s̄], [s, c]]` acting on indices `p, q`.
fn rotate(m: &mut CMatrix, p: usize, q: usize, c: f64, s: Complex64) {
    let n = m.nrows();
    for col in 0..n {
        let xp = m[(p, col)];
        let xq = m[(q, col)];
        m[(p, col)] = xp * c + xq * s.conj();
        m[(q, col)] = -xp * s + xq * c;
    }
    for row in 0..n {
        let xp = m[(row, p)];
        let xq = m[(row, q)];
        m[(row, p)] = xp * c + xq * s;
        m[(row, q)] = -xp * s.conj() + xq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{haar_random_unitary, unitarity_residual};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag(values: &[Complex64]) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(values))
    }

    #[test]
    fn diagonalizes_commuting_normal_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in [2, 3, 5, 8] {
            let v = haar_random_unitary(n, &mut rng);
            let family: Vec<CMatrix> = (0..4)
                .map(|_| {
                    let d: Vec<Complex64> = (0..n).map(|_| c64(rng.random(), rng.random())).collect();
                    &v * diag(&d) * v.adjoint()
                })
                .collect();
            let jd = joint_diagonalize(&family);
            assert!(unitarity_residual(&jd.basis) < 1e-13);
            assert!(jd.residual < 1e-10, "n = {n}: {}", jd.residual);
        }
    }

    #[test]
    fn handles_degenerate_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = haar_random_unitary(4, &mut rng);
        // a two-fold degenerate level shared by every member
        let a = diag(&[c64(1.0, 0.0), c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.5, 0.0)]);
        let b = diag(&[c64(0.0, 2.0), c64(0.0, 2.0), c64(0.3, 0.0), c64(0.3, 0.0)]);
        let family = vec![&v * a * v.adjoint(), &v * b * v.adjoint()];
        let jd = joint_diagonalize(&family);
        assert!(jd.residual < 1e-10);
    }

    #[test]
    fn real_input_gives_real_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = nalgebra::DMatrix::<f64>::from_fn(4, 4, |_, _| rng.random::<f64>() - 0.5).qr().q();
        let qc = q.map(|x| c64(x, 0.0));
        let a = &qc * diag(&[c64(1.0, 0.0), c64(2.0, 0.0), c64(2.0, 0.0), c64(-1.0, 0.0)]) * qc.transpose();
        let b = &qc * diag(&[c64(0.5, 0.0), c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]) * qc.transpose();
        let jd = joint_diagonalize(&[a, b]);
        assert!(jd.residual < 1e-10);
        assert!(jd.basis.iter().all(|z| z.im.abs() < 1e-15));
    }

    #[test]
    fn non_commuting_family_leaves_residual() {
        let x = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        let z = diag(&[c64(1.0, 0.0), c64(-1.0, 0.0)]);
        let jd = joint_diagonalize(&[x, z]);
        assert!(jd.residual > 0.1);
    }
}
