//! State vectors, density operators, the Bell basis and trace distance.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{dims, Error, Result};
use crate::linalg::{c, Complex, ComplexMatrix, HERMITIAN_TOL, ONE, ZERO};
use crate::random::SeededRng;

/// Tolerance for `‖ψ‖ = 1` and for the density-operator invariants.
pub const STATE_TOL: f64 = 1e-10;
/// Two states are equal when their trace distance is at most this.
pub const EQUALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("state vector is empty".into()));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidState(
                "state vector has a non-finite amplitude".into(),
            ));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "state vector norm is {norm}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidState(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut a = vec![ZERO; dim];
        a[k] = ONE;
        Self { amplitudes: a }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Complex {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn with_phase(&self, theta: f64) -> Self {
        let p = Complex::from_polar(1.0, theta);
        Self {
            amplitudes: self.amplitudes.iter().map(|z| z * p).collect(),
        }
    }
}

fn norm(a: &[Complex]) -> f64 {
    a.iter().map(Complex::norm_sqr).sum::<f64>().sqrt()
}

/// A Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityOperator {
    mat: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, positivity and unit trace, each within 1e-10.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState(format!(
                "density operator must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let dev = mat.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max |ρ - ρ†| = {dev:e})"
            )));
        }
        let tr = mat.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace is {} (expected 1)",
                fmt_complex(tr)
            )));
        }
        let min = mat.hermitian_eigenvalues()?[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { mat })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat
            .hermitian_eigenvalues()
            .expect("validated density operator is Hermitian")
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// Convex combination `Σ w_k ρ_k`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let mut acc = ComplexMatrix::zeros(first.1.dim(), first.1.dim());
        for (w, rho) in parts {
            if *w < 0.0 {
                return Err(Error::InvalidState(format!("negative mixture weight {w}")));
            }
            acc = acc.try_add(&rho.mat.scale_real(*w))?;
        }
        Self::new(acc)
    }
}

impl fmt::Debug for DensityOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityOperator({:?})", self.mat)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        DensityOperator::new(m).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn fmt_complex(z: Complex) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

/// `|ψ⟩⟨ψ|`
pub fn pure(psi: &StateVector) -> Result<DensityOperator> {
    let n = psi.norm();
    if (n - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!(
            "state vector norm is {n}, expected 1"
        )));
    }
    Ok(DensityOperator {
        mat: ComplexMatrix::outer(&psi.amplitudes, &psi.amplitudes),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    /// Measurement-outcome order used by the teleportation channel.
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiPlus,
        BellKind::PsiMinus,
        BellKind::PhiPlus,
        BellKind::PhiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "psi_plus",
            BellKind::PsiMinus => "psi_minus",
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
        }
    }
}

/// `Ψ± = (|01⟩ ± |10⟩)/√2`, `Φ± = (|00⟩ ± |11⟩)/√2`.
pub fn bell(kind: BellKind) -> StateVector {
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let amplitudes = match kind {
        BellKind::PsiPlus => vec![ZERO, h, h, ZERO],
        BellKind::PsiMinus => vec![ZERO, h, -h, ZERO],
        BellKind::PhiPlus => vec![h, ZERO, ZERO, h],
        BellKind::PhiMinus => vec![h, ZERO, ZERO, -h],
    };
    StateVector { amplitudes }
}

/// The six single-qubit Pauli eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedQubit {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl NamedQubit {
    pub const ALL: [NamedQubit; 6] = [
        NamedQubit::Zero,
        NamedQubit::One,
        NamedQubit::Plus,
        NamedQubit::Minus,
        NamedQubit::PlusI,
        NamedQubit::MinusI,
    ];

    pub fn vector(self) -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = match self {
            NamedQubit::Zero => [ONE, ZERO],
            NamedQubit::One => [ZERO, ONE],
            NamedQubit::Plus => [c(h, 0.0), c(h, 0.0)],
            NamedQubit::Minus => [c(h, 0.0), c(-h, 0.0)],
            NamedQubit::PlusI => [c(h, 0.0), c(0.0, h)],
            NamedQubit::MinusI => [c(h, 0.0), c(0.0, -h)],
        };
        StateVector {
            amplitudes: a.to_vec(),
        }
    }

    pub fn density(self) -> DensityOperator {
        pure(&self.vector()).expect("named states are normalized")
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedQubit::Zero => "zero",
            NamedQubit::One => "one",
            NamedQubit::Plus => "plus",
            NamedQubit::Minus => "minus",
            NamedQubit::PlusI => "plus_i",
            NamedQubit::MinusI => "minus_i",
        }
    }
}

/// `½ Σ |λ_k|` over the eigenvalues of `ρ - σ`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(dims(rho.dim(), sigma.dim()));
    }
    // Both orientations, summed, so the result is exactly symmetric in its arguments.
    let abs_sum = |d: ComplexMatrix| -> Result<f64> {
        Ok(d.hermitian_eigenvalues()?
            .iter()
            .map(|x| x.abs())
            .sum::<f64>())
    };
    let fwd = abs_sum(rho.mat.try_sub(&sigma.mat)?)?;
    let bwd = abs_sum(sigma.mat.try_sub(&rho.mat)?)?;
    Ok((0.25 * (fwd + bwd)).min(1.0))
}

/// `trace_distance(ρ, σ) ≤ 1e-9`.
pub fn states_equal(rho: &DensityOperator, sigma: &DensityOperator) -> Result<bool> {
    Ok(trace_distance(rho, sigma)? <= EQUALITY_TOL)
}

/// Haar-random pure state: i.i.d. complex normal amplitudes, normalized.
pub fn random_pure(dim: usize, seed: u64) -> StateVector {
    random_pure_from(dim, &mut SeededRng::new(seed))
}

pub fn random_pure_from(dim: usize, rng: &mut SeededRng) -> StateVector {
    assert!(dim >= 1, "dimension must be positive");
    loop {
        let v = rng.complex_normal_vec(dim);
        if let Ok(s) = StateVector::normalized(v) {
            return s;
        }
    }
}

/// Random mixed state: a mixture of `rank` Haar-random pure states with
/// weights drawn uniformly and normalized.
pub fn random_mixed_from(dim: usize, rank: usize, rng: &mut SeededRng) -> DensityOperator {
    let rank = rank.max(1);
    let mut weights: Vec<f64> = (0..rank).map(|_| rng.uniform() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let states: Vec<DensityOperator> = (0..rank)
        .map(|_| pure(&random_pure_from(dim, rng)).expect("normalized"))
        .collect();
    let parts: Vec<(f64, &DensityOperator)> = weights.iter().copied().zip(states.iter()).collect();
    DensityOperator::mixture(&parts).expect("convex combination of states")
}
