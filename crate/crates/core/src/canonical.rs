//! Two-qubit canonical decomposition
//! `U = e^{iφ} (pre_a ⊗ pre_b) · exp(i Σ_j θ_j σ^j⊗σ^j) · (post_a ⊗ post_b)`.
//!
//! In the magic basis local `SU(2) ⊗ SU(2)` becomes real `SO(4)` and the
//! interaction term becomes diagonal, so `U` splits as `O₁ D O₂`. `O₂`
//! diagonalizes the complex symmetric `M = VᵀV`; its real and imaginary parts
//! commute and are jointly diagonalized, which keeps degenerate spectra (CNOT,
//! SWAP, the identity) well defined. The coordinates are then folded into the
//! Weyl chamber `π/4 ≥ θx ≥ θy ≥ |θz|` (with `θz ≥ 0` when `θx = π/4`), and
//! the folding is mirrored exactly on the diagonal factor by a signed
//! permutation, a sign pattern and a quarter-turn phase.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jointdiag::joint_diagonalize;
use crate::tensor::{c64, kron, CMatrix, Gate, ZERO};

/// Within this distance of `θx = π/4` the sign of `θz` is dropped.
const WALL_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub pre_a: CMatrix,
    pub pre_b: CMatrix,
    pub post_a: CMatrix,
    pub post_b: CMatrix,
    /// `(θx, θy, θz)` in radians.
    pub theta: [f64; 3],
    pub global_phase: f64,
}

impl CanonicalForm {
    pub fn core(&self) -> CMatrix {
        interaction_unitary(self.theta)
    }

    pub fn reconstruct(&self) -> CMatrix {
        kron(&self.pre_a, &self.pre_b)
            * self.core()
            * kron(&self.post_a, &self.post_b)
            * c64(0.0, self.global_phase).exp()
    }

    pub fn reconstruction_residual(&self, gate: &Gate) -> f64 {
        (gate.matrix() - self.reconstruct()).norm()
    }
}

/// Columns are the magic Bell states
/// `(|00⟩+|11⟩)/√2, i(|00⟩−|11⟩)/√2, i(|01⟩+|10⟩)/√2, (|01⟩−|10⟩)/√2`.
pub fn magic_basis() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    let (r, i, z) = (c64(h, 0.0), c64(0.0, h), ZERO);
    CMatrix::from_row_slice(4, 4, &[
        r, i, z, z, //
        z, z, i, r, //
        z, z, i, -r, //
        r, -i, z, z,
    ])
}

/// Eigenphases of `exp(i Σ θ_j σ^j⊗σ^j)` on the magic basis columns.
fn magic_phases([x, y, z]: [f64; 3]) -> [f64; 4] {
    [x - y + z, -x + y + z, x + y - z, -x - y - z]
}

fn theta_from_phases(l: [f64; 3]) -> [f64; 3] {
    [(l[0] + l[2]) / 2.0, (l[1] + l[2]) / 2.0, (l[0] + l[1]) / 2.0]
}

/// `exp(i (θx σx⊗σx + θy σy⊗σy + θz σz⊗σz))`, exact via the magic basis.
pub fn interaction_unitary(theta: [f64; 3]) -> CMatrix {
    let b = magic_basis();
    let phases = magic_phases(theta).map(|l| c64(0.0, l).exp());
    &b * CMatrix::from_diagonal(&DVector::from_row_slice(&phases)) * b.adjoint()
}

/// Representative of `θ` in the Weyl chamber.
pub fn weyl_fold(theta: [f64; 3]) -> [f64; 3] {
    let mut c = theta.map(|t| {
        let r = t.rem_euclid(FRAC_PI_2);
        if r > FRAC_PI_4 {
            r - FRAC_PI_2
        } else {
            r
        }
    });
    c.sort_by(|x, y| y.abs().total_cmp(&x.abs()));
    if c[0] < 0.0 {
        c[0] = -c[0];
        c[2] = -c[2];
    }
    if c[1] < 0.0 {
        c[1] = -c[1];
        c[2] = -c[2];
    }
    if FRAC_PI_4 - c[0] < WALL_TOL {
        c[2] = c[2].abs();
    }
    c
}

const EVEN_SIGNS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [-1.0, -1.0, 1.0],
    [-1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0],
];

fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Distance between chamber coordinates, minimized over coordinate
/// permutations, paired sign flips and independent shifts by `π/2`.
pub fn theta_distance_coords(a: [f64; 3], b: [f64; 3]) -> f64 {
    let mut best = f64::INFINITY;
    for perm in permutations3() {
        for signs in EVEN_SIGNS {
            let dist2: f64 = (0..3)
                .map(|j| {
                    let diff = signs[j] * b[perm[j]] - a[j];
                    let wrapped = (diff + FRAC_PI_4).rem_euclid(FRAC_PI_2) - FRAC_PI_4;
                    wrapped * wrapped
                })
                .sum();
            best = best.min(dist2.sqrt());
        }
    }
    best
}

pub fn theta_distance(a: &CanonicalForm, b: &CanonicalForm) -> f64 {
    theta_distance_coords(a.theta, b.theta)
}

/// Split a `d² × d²` operator known to be a product `a ⊗ b`, with `det b = 1`.
fn factor_product(k: &CMatrix, d: usize) -> Result<(CMatrix, CMatrix)> {
    let block = |i: usize, j: usize| k.view((i * d, j * d), (d, d)).into_owned();
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for i in 0..d {
        for j in 0..d {
            let n = block(i, j).norm();
            if n > best {
                (bi, bj, best) = (i, j, n);
            }
        }
    }
    let mut b = block(bi, bj).scale((d as f64).sqrt() / best);
    let det = b.determinant();
    b *= c64(0.0, -det.arg() / d as f64).exp();
    let a = CMatrix::from_fn(d, d, |i, j| (b.adjoint() * block(i, j)).trace() / d as f64);
    let residual = (k - kron(&a, &b)).norm();
    if residual > 1e-8 {
        return Err(Error::Residual {
            what: "local factorization",
            residual,
            tol: 1e-8,
        });
    }
    Ok((a, b))
}

/// Signed permutation matrix with `P[i, perm[i]] = 1`, forced into `SO(4)` by
/// flipping row 0 when needed; conjugating a diagonal matrix ignores the flip.
fn rotation_from_permutation(perm: &[usize; 4]) -> DMatrix<f64> {
    let mut p = DMatrix::<f64>::zeros(4, 4);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = 1.0;
    }
    if p.determinant() < 0.0 {
        p.row_mut(0).neg_mut();
    }
    p
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Diagonal sign patterns with determinant +1.
fn even_sign_patterns4() -> Vec<[f64; 4]> {
    (0..16u32)
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| std::array::from_fn(|i| if m >> i & 1 == 1 { -1.0 } else { 1.0 }))
        .collect()
}

fn wrap_angle(x: f64) -> f64 {
    let t = x.rem_euclid(std::f64::consts::TAU);
    if t > std::f64::consts::PI {
        t - std::f64::consts::TAU
    } else {
        t
    }
}

pub fn kraus_cirac_decompose(g: &Gate) -> Result<CanonicalForm> {
    if g.d() != 2 {
        return Err(Error::UnsupportedDimension {
            d: g.d(),
            reason: "the canonical form is defined for two-qubit gates only",
        });
    }
    let u = g.matrix();
    let phi = u.determinant().arg() / 4.0;
    let v = u * c64(0.0, -phi).exp();
    let b = magic_basis();
    let vm = b.adjoint() * v * &b;
    let m = vm.transpose() * &vm;

    let re = m.map(|z| c64(z.re, 0.0));
    let im = m.map(|z| c64(z.im, 0.0));
    let jd = joint_diagonalize(&[re, im]);
    let q0 = jd.basis.map(|z| z.re);
    let q0c = q0.map(|x| c64(x, 0.0));
    let d2_0 = (q0c.transpose() * &m * &q0c).diagonal();

    // descending eigenphase, then largest-magnitude entry of each column positive
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| d2_0[j].arg().total_cmp(&d2_0[i].arg()));
    let mut q = DMatrix::<f64>::from_fn(4, 4, |r, c| q0[(r, order[c])]);
    for mut col in q.column_iter_mut() {
        let pivot = col.iter().copied().fold(0.0f64, |p, x| if x.abs() > p.abs() { x } else { p });
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(3).neg_mut();
    }
    let qc = q.map(|x| c64(x, 0.0));
    let d2 = (qc.transpose() * &m * &qc).diagonal();
    let mut dvals: Vec<Complex64> = d2.iter().map(|z| z.sqrt()).collect();

    let w = &vm * &qc;
    let o1c = CMatrix::from_fn(4, 4, |r, c| w[(r, c)] / dvals[c]);
    let imag_leak = o1c.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag_leak > 1e-6 {
        return Err(Error::Residual {
            what: "magic-basis orthogonal factor",
            residual: imag_leak,
            tol: 1e-6,
        });
    }
    let mut o1 = o1c.map(|z| z.re);
    if o1.determinant() < 0.0 {
        dvals[0] = -dvals[0];
        o1.column_mut(0).neg_mut();
    }
    let o2 = q.transpose();

    let raw = theta_from_phases([dvals[0].arg(), dvals[1].arg(), dvals[2].arg()]);
    let theta = weyl_fold(raw);
    let target = magic_phases(theta).map(|l| c64(0.0, l).exp());

    // find P, S, k with i^k · S · P D Pᵀ = D_target
    let quarter = [c64(1.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0), c64(0.0, -1.0)];
    let mut best = (f64::INFINITY, [0usize; 4], [1.0f64; 4], 0usize);
    for perm in permutations4() {
        for signs in even_sign_patterns4() {
            for (k, turn) in quarter.iter().enumerate() {
                let err = (0..4)
                    .map(|i| (turn * signs[i] * dvals[perm[i]] - target[i]).norm())
                    .fold(0.0, f64::max);
                if err < best.0 {
                    best = (err, perm, signs, k);
                }
            }
        }
    }
    let (err, perm, signs, k) = best;
    if err > 1e-6 {
        return Err(Error::Residual {
            what: "Weyl chamber folding",
            residual: err,
            tol: 1e-6,
        });
    }
    let p = rotation_from_permutation(&perm);
    let s = DMatrix::from_diagonal(&DVector::from_row_slice(&signs));
    let o1p = (o1 * p.transpose() * s).map(|x| c64(x, 0.0));
    let o2p = (p * o2).map(|x| c64(x, 0.0));
    let (pre_a, pre_b) = factor_product(&(&b * o1p * b.adjoint()), 2)?;
    let (post_a, post_b) = factor_product(&(&b * o2p * b.adjoint()), 2)?;

    Ok(CanonicalForm {
        pre_a,
        pre_b,
        post_a,
        post_b,
        theta,
        global_phase: wrap_angle(phi - k as f64 * FRAC_PI_2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::schmidt::schmidt_decompose;
    use crate::tensor::{haar_random_unitary, unitarity_residual};
    use crate::tol;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn assert_theta(form: &CanonicalForm, expected: [f64; 3], eps: f64) {
        for j in 0..3 {
            assert!(
                (form.theta[j] - expected[j]).abs() <= eps,
                "θ = {:?}, expected {:?}",
                form.theta,
                expected
            );
        }
    }

    fn in_chamber(t: [f64; 3]) -> bool {
        let eps = 1e-12;
        t[0] <= FRAC_PI_4 + eps && t[0] + eps >= t[1] && t[1] + eps >= t[2].abs()
    }

    #[test]
    fn magic_basis_maps_so4_to_local_gates() {
        let b = magic_basis();
        assert!(unitarity_residual(&b) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = haar_random_unitary(2, &mut rng);
        let y = haar_random_unitary(2, &mut rng);
        let fix = |m: CMatrix| {
            let det = m.determinant();
            m * c64(0.0, -det.arg() / 2.0).exp()
        };
        let local = kron(&fix(x), &fix(y));
        let in_magic = b.adjoint() * local * &b;
        assert!(in_magic.iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn interaction_unitary_matches_heisenberg_gate() {
        for alpha in [0.0, 0.1, 0.3, 1.0] {
            let direct = interaction_unitary([alpha; 3]);
            assert!((direct - gallery::heisenberg(alpha).into_matrix()).norm() < 1e-14);
        }
    }

    #[test]
    fn identity_is_origin() {
        let form = kraus_cirac_decompose(&gallery::identity(2)).unwrap();
        assert_theta(&form, [0.0, 0.0, 0.0], 1e-12);
        assert!(form.reconstruction_residual(&gallery::identity(2)) < 1e-12);
    }

    #[test]
    fn heisenberg_is_already_canonical() {
        let g = gallery::heisenberg(0.1);
        let form = kraus_cirac_decompose(&g).unwrap();
        assert_theta(&form, [0.1, 0.1, 0.1], 1e-8);
        assert!(form.reconstruction_residual(&g) < 1e-8);
    }

    #[test]
    fn cnot_sits_on_the_wall() {
        let g = gallery::cnot();
        let form = kraus_cirac_decompose(&g).unwrap();
        assert_theta(&form, [FRAC_PI_4, 0.0, 0.0], 1e-8);
        // rebuild from exp(i π/4 σx⊗σx) and the extracted locals
        let rebuilt = kron(&form.pre_a, &form.pre_b)
            * interaction_unitary([FRAC_PI_4, 0.0, 0.0])
            * kron(&form.post_a, &form.post_b)
            * c64(0.0, form.global_phase).exp();
        assert!((rebuilt - g.matrix()).norm() < 1e-8);
    }

    #[test]
    fn swap_is_the_far_corner() {
        let form = kraus_cirac_decompose(&gallery::swap(2)).unwrap();
        assert_theta(&form, [FRAC_PI_4; 3], 1e-8);
    }

    #[test]
    fn rejects_qutrits() {
        assert!(matches!(
            kraus_cirac_decompose(&gallery::identity(3)),
            Err(Error::UnsupportedDimension { d: 3, .. })
        ));
    }

    #[test]
    fn reconstructs_haar_gates() {
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        for _ in 0..200 {
            let g = Gate::new(2, haar_random_unitary(4, &mut rng)).unwrap();
            let form = kraus_cirac_decompose(&g).unwrap();
            assert!(form.reconstruction_residual(&g) <= 1e-8);
            assert!(in_chamber(form.theta), "{:?}", form.theta);
            for m in [&form.pre_a, &form.pre_b, &form.post_a, &form.post_b] {
                assert!(unitarity_residual(m) < 1e-10);
            }
        }
    }

    #[test]
    fn distance_examples() {
        let cnot = kraus_cirac_decompose(&gallery::cnot()).unwrap();
        let again = kraus_cirac_decompose(&gallery::cnot()).unwrap();
        assert!(theta_distance(&cnot, &again) < 1e-9);
        // CZ = (I⊗H) CNOT (I⊗H)
        let cz = kraus_cirac_decompose(&gallery::cz()).unwrap();
        assert!(theta_distance(&cnot, &cz) < 1e-9);
        let swap = kraus_cirac_decompose(&gallery::swap(2)).unwrap();
        let d = theta_distance(&cnot, &swap);
        assert!(d > 0.5);
        assert!((d - FRAC_PI_4 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn distance_respects_wall_symmetry() {
        // (π/4, b, c) ~ (π/4, b, −c)
        let d = theta_distance_coords([FRAC_PI_4, 0.2, 0.1], [FRAC_PI_4, 0.2, -0.1]);
        assert!(d < 1e-12);
        // mirror images off the wall stay apart
        let d = theta_distance_coords([0.5, 0.2, 0.1], [0.5, 0.2, -0.1]);
        assert!(d > 0.1);
    }

    #[test]
    fn fold_handles_shifts_and_signs() {
        let t = weyl_fold([0.1 + PI, -0.2, 0.05]);
        let expected = [0.2, 0.1, -0.05];
        assert!((0..3).all(|j| (t[j] - expected[j]).abs() < 1e-14), "{t:?}");
        let t = weyl_fold([0.3 + FRAC_PI_2, 0.1, -0.7]);
        assert!(in_chamber(t));
    }

    #[test]
    fn lu_invariance_of_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = Gate::new(2, haar_random_unitary(4, &mut rng)).unwrap();
            let base = kraus_cirac_decompose(&g).unwrap().theta;
            for _ in 0..100 {
                let l: Vec<_> = (0..4).map(|_| haar_random_unitary(2, &mut rng)).collect();
                let h = g.dressed(&l[0], &l[1], &l[2], &l[3]).unwrap();
                let t = kraus_cirac_decompose(&h).unwrap().theta;
                for j in 0..3 {
                    assert!((t[j] - base[j]).abs() <= 1e-8, "{t:?} vs {base:?}");
                }
            }
        }
    }

    #[test]
    fn controlled_locus_agrees_with_schmidt_rank() {
        let grid = [0.0, 0.05, 0.1, 0.3, FRAC_PI_4, 0.6, 1.0, FRAC_PI_2];
        for &tx in &grid {
            for &ty in &grid {
                let g = Gate::new(2, interaction_unitary([tx, ty, 0.0])).unwrap();
                let form = kraus_cirac_decompose(&g).unwrap();
                let on_locus = form.theta[1].abs() < 1e-7 && form.theta[2].abs() < 1e-7;
                let rank = schmidt_decompose(&g, tol::RANK).unwrap().rank;
                assert_eq!(on_locus, rank <= 2, "tx={tx} ty={ty} θ={:?} rank={rank}", form.theta);
            }
        }
    }
}
