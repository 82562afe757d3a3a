//! Named gate constructors.
//!
//! A [`GateSpec`] is written `name` or `name:key=value,key=value`, e.g.
//! `heisenberg:alpha=0.3` or `controlled_random:d=4,n_blocks=2,seed=9`.
//! Parameters not given take the defaults listed in [`REGISTRY`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{c64, haar_random_unitary, kron, swap_matrix, CMatrix, Gate, IM, ONE, ZERO};

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -IM, IM, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// `H = |0⟩⟨+| + |1⟩⟨−|`.
pub fn hadamard() -> CMatrix {
    let h = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// `|i⟩⟨j|` on a `d`-level system.
pub fn ket_bra(d: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, j)] = ONE;
    m
}

pub fn identity(d: usize) -> Gate {
    Gate::new(d, CMatrix::identity(d * d, d * d)).expect("identity is unitary")
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ σ^x`.
pub fn cnot() -> Gate {
    let m = kron(&ket_bra(2, 0, 0), &CMatrix::identity(2, 2)) + kron(&ket_bra(2, 1, 1), &pauli_x());
    Gate::new(2, m).expect("CNOT is unitary")
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ σ^z`.
pub fn cz() -> Gate {
    let m = kron(&ket_bra(2, 0, 0), &CMatrix::identity(2, 2)) + kron(&ket_bra(2, 1, 1), &pauli_z());
    Gate::new(2, m).expect("CZ is unitary")
}

pub fn swap(d: usize) -> Gate {
    Gate::new(d, swap_matrix(d)).expect("SWAP is unitary")
}

/// `exp(iα Σ_j σ^j ⊗ σ^j)`, built from the spectrum of `Σ_j σ^j ⊗ σ^j`:
/// eigenvalue 1 on the triplet and −3 on the singlet.
pub fn heisenberg(alpha: f64) -> Gate {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = nalgebra::DVector::from_vec(vec![ZERO, c64(h, 0.0), c64(-h, 0.0), ZERO]);
    let p_singlet = &singlet * singlet.adjoint();
    let p_triplet = CMatrix::identity(4, 4) - &p_singlet;
    let m = p_triplet * c64(0.0, alpha).exp() + p_singlet * c64(0.0, -3.0 * alpha).exp();
    Gate::new(2, m).expect("heisenberg gate is unitary")
}

/// `|0⟩⟨0|⊗|0⟩⟨0| + |0⟩⟨1|⊗|1⟩⟨0| + |1⟩⟨0|⊗|0⟩⟨1| − |1⟩⟨1|⊗|1⟩⟨1|`, the
/// ancilla-driven computation coupling.
pub fn adqc() -> Gate {
    let k = |i, j| ket_bra(2, i, j);
    let m = kron(&k(0, 0), &k(0, 0)) + kron(&k(0, 1), &k(1, 0)) + kron(&k(1, 0), &k(0, 1))
        - kron(&k(1, 1), &k(1, 1));
    Gate::new(2, m).expect("ADQC gate is unitary")
}

/// `(a ⊗ b) · (Σ_n P^n ⊗ w_n) · (c ⊗ e)` with Haar-random locals `a, b, c, e`,
/// Haar-random targets `w_n`, and `n_blocks` computational-basis projectors of
/// random ranks.
pub fn controlled_random(d: usize, n_blocks: usize, seed: u64) -> Result<Gate> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d} must be at least 2")));
    }
    if n_blocks == 0 || n_blocks > d {
        return Err(Error::InvalidParameter(format!(
            "n_blocks = {n_blocks} must be between 1 and d = {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment: Vec<usize> = (0..d).map(|level| if level < n_blocks { level } else { rng.random_range(0..n_blocks) }).collect();
    // Fisher–Yates so the low levels are not always singletons
    for i in (1..d).rev() {
        let j = rng.random_range(0..=i);
        assignment.swap(i, j);
    }
    let targets: Vec<CMatrix> = (0..n_blocks).map(|_| haar_random_unitary(d, &mut rng)).collect();
    let mut core = CMatrix::zeros(d * d, d * d);
    for (level, &block) in assignment.iter().enumerate() {
        core += kron(&ket_bra(d, level, level), &targets[block]);
    }
    let a = haar_random_unitary(d, &mut rng);
    let b = haar_random_unitary(d, &mut rng);
    let c = haar_random_unitary(d, &mut rng);
    let e = haar_random_unitary(d, &mut rng);
    Gate::new(d, kron(&a, &b) * core * kron(&c, &e))
}

/// Haar-random unitary on the full `d²`-dimensional space.
pub fn haar(d: usize, seed: u64) -> Result<Gate> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d} must be at least 2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Gate::new(d, haar_random_unitary(d * d, &mut rng))
}

/// Diagonal gate with independent uniformly random phases.
pub fn diagonal_random(d: usize, seed: u64) -> Result<Gate> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d} must be at least 2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<_> = (0..d * d)
        .map(|_| c64(0.0, rng.random_range(0.0..std::f64::consts::TAU)).exp())
        .collect();
    Gate::new(d, CMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases)))
}

/// One registered gallery constructor.
#[derive(Debug)]
pub struct GateInfo {
    pub name: &'static str,
    /// `(parameter, default)` pairs.
    pub params: &'static [(&'static str, &'static str)],
    pub summary: &'static str,
}

pub const REGISTRY: &[GateInfo] = &[
    GateInfo { name: "identity", params: &[("d", "2")], summary: "identity on two d-level systems" },
    GateInfo { name: "cnot", params: &[], summary: "|0><0| x I + |1><1| x X, control on A" },
    GateInfo { name: "cz", params: &[], summary: "|0><0| x I + |1><1| x Z" },
    GateInfo { name: "swap", params: &[("d", "2")], summary: "exchange of the two d-level systems" },
    GateInfo { name: "heisenberg", params: &[("alpha", "0.2")], summary: "exp(i alpha (XX + YY + ZZ))" },
    GateInfo { name: "adqc", params: &[], summary: "ancilla-driven computation coupling" },
    GateInfo {
        name: "controlled_random",
        params: &[("d", "3"), ("n_blocks", "d"), ("seed", "0")],
        summary: "randomly dressed controlled-unitary with n_blocks distinct targets",
    },
    GateInfo { name: "haar", params: &[("d", "2"), ("seed", "0")], summary: "Haar-random gate" },
    GateInfo { name: "diagonal_random", params: &[("d", "3"), ("seed", "0")], summary: "diagonal gate with random phases" },
];

/// A gallery gate name with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl GateSpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    fn info(&self) -> Result<&'static GateInfo> {
        REGISTRY
            .iter()
            .find(|g| g.name == self.name)
            .ok_or_else(|| Error::UnknownGate(self.name.clone()))
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn parse_param<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some(text) => text.parse().map_err(|_| {
                Error::InvalidParameter(format!("{}: cannot parse {key}={text}", self.name))
            }),
        }
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

impl FromStr for GateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (s.trim(), None),
        };
        if name.is_empty() {
            return Err(Error::InvalidParameter(format!("empty gate name in `{s}`")));
        }
        let mut spec = GateSpec::new(name);
        if let Some(rest) = rest {
            for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
                let (k, v) = pair.split_once('=').ok_or_else(|| {
                    Error::InvalidParameter(format!("expected key=value, got `{pair}`"))
                })?;
                let key = k.trim();
                if spec.params.insert(key.to_string(), v.trim().to_string()).is_some() {
                    return Err(Error::InvalidParameter(format!("parameter `{key}` given twice")));
                }
            }
        }
        Ok(spec)
    }
}

/// Build the gate named by `spec`.
pub fn build(spec: &GateSpec) -> Result<Gate> {
    let info = spec.info()?;
    if let Some(unknown) = spec.params.keys().find(|k| !info.params.iter().any(|(p, _)| p == k)) {
        return Err(Error::InvalidParameter(format!(
            "{} does not take parameter `{unknown}`",
            spec.name
        )));
    }
    match info.name {
        "identity" => Ok(identity(check_d(spec.parse_param("d", 2)?)?)),
        "cnot" => Ok(cnot()),
        "cz" => Ok(cz()),
        "swap" => Ok(swap(check_d(spec.parse_param("d", 2)?)?)),
        "heisenberg" => {
            let alpha: f64 = spec.parse_param("alpha", 0.2)?;
            if !alpha.is_finite() {
                return Err(Error::InvalidParameter("alpha must be finite".into()));
            }
            Ok(heisenberg(alpha))
        }
        "adqc" => Ok(adqc()),
        "controlled_random" => {
            let d = check_d(spec.parse_param("d", 3)?)?;
            controlled_random(d, spec.parse_param("n_blocks", d)?, spec.parse_param("seed", 0)?)
        }
        "haar" => haar(check_d(spec.parse_param("d", 2)?)?, spec.parse_param("seed", 0)?),
        "diagonal_random" => {
            diagonal_random(check_d(spec.parse_param("d", 3)?)?, spec.parse_param("seed", 0)?)
        }
        other => Err(Error::UnknownGate(other.to_string())),
    }
}

fn check_d(d: usize) -> Result<usize> {
    if (2..=8).contains(&d) {
        Ok(d)
    } else {
        Err(Error::InvalidParameter(format!("d = {d} outside the supported range 2..=8")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::unitarity_residual;

    #[test]
    fn cnot_permutes_the_a1_block() {
        let m = cnot().into_matrix();
        let mut expected = CMatrix::zeros(4, 4);
        for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            expected[(r, c)] = ONE;
        }
        assert_eq!(m, expected);
    }

    #[test]
    fn adqc_has_the_four_listed_entries() {
        let m = adqc().into_matrix();
        // rows/cols indexed by |a b⟩ → 2a + b
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 0)] = ONE; // |00⟩⟨00|
        expected[(1, 2)] = ONE; // |01⟩⟨10|
        expected[(2, 1)] = ONE; // |10⟩⟨01|
        expected[(3, 3)] = -ONE; // −|11⟩⟨11|
        assert_eq!(m, expected);
    }

    #[test]
    fn heisenberg_at_zero_is_identity() {
        let m = heisenberg(0.0).into_matrix();
        assert!(crate::tensor::distance_up_to_phase(&CMatrix::identity(4, 4), &m) < 1e-15);
    }

    #[test]
    fn heisenberg_matches_swap_identity() {
        // Σ σ^j⊗σ^j = 2 SWAP − I, so exp(iαΣ) = e^{−iα}(cos 2α I + i sin 2α SWAP)
        let alpha: f64 = 0.37;
        let s = swap_matrix(2);
        let expected = (CMatrix::identity(4, 4) * c64((2.0 * alpha).cos(), 0.0)
            + s * c64(0.0, (2.0 * alpha).sin()))
            * c64(0.0, -alpha).exp();
        assert!((heisenberg(alpha).into_matrix() - expected).norm() < 1e-14);
    }

    #[test]
    fn every_gallery_gate_is_unitary() {
        for info in REGISTRY {
            let gate = build(&GateSpec::new(info.name)).unwrap();
            assert!(unitarity_residual(gate.matrix()) < 1e-12, "{}", info.name);
        }
        for seed in 0..5 {
            for d in 2..=4 {
                for n in 1..=d {
                    let g = controlled_random(d, n, seed).unwrap();
                    assert!(unitarity_residual(g.matrix()) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spec_parsing_and_errors() {
        let spec: GateSpec = "heisenberg:alpha=0.3".parse().unwrap();
        assert_eq!(spec.raw("alpha"), Some("0.3"));
        assert_eq!(spec.to_string(), "heisenberg:alpha=0.3");
        let spec: GateSpec = "controlled_random:d=4, n_blocks=2,seed=9".parse().unwrap();
        assert_eq!(build(&spec).unwrap().d(), 4);
        assert!(matches!(build(&"nope".parse().unwrap()), Err(Error::UnknownGate(_))));
        assert!(matches!(
            build(&"controlled_random:d=3,n_blocks=4".parse().unwrap()),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(build(&"cnot:d=3".parse().unwrap()), Err(Error::InvalidParameter(_))));
        assert!(matches!(build(&"haar:d=x".parse().unwrap()), Err(Error::InvalidParameter(_))));
        assert!("swap:d".parse::<GateSpec>().is_err());
    }
}
