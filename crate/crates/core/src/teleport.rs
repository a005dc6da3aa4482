//! Qubit teleportation as a single Kraus channel on `C ⊗ B ⊗ A`.
//!
//! The input is `ρ = ρ_C ⊗ P_{Ψ⁻}` with the singlet shared by A and B. The
//! channel has four terms `V_i = U_{B,i} ⊗ P_{AC,i}`, one per Bell outcome on
//! A and C (order Ψ⁺, Ψ⁻, Φ⁺, Φ⁻). The corrections `U_{B,i}` are not
//! hard-coded: [`derive_corrections`] finds them by exhaustive search over
//! Pauli assignments, which also guards the Bell sign conventions.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::channels::{make_channel, KrausChannel, StructuredKraus};
use crate::composite::SystemLayout;
use crate::error::{dims, Error, Result};
use crate::linalg::{ComplexMatrix, Pauli};
use crate::par::{self, Execution};
use crate::random::derive_seed;
use crate::states::{
    bell, pure, random_pure, trace_distance, BellKind, DensityOperator, NamedQubit, EQUALITY_TOL,
};

/// Probe set used to accept a correction assignment; tomographically complete for a qubit.
pub const SEARCH_PROBES: [NamedQubit; 4] = [
    NamedQubit::Zero,
    NamedQubit::One,
    NamedQubit::Plus,
    NamedQubit::PlusI,
];

/// Per-outcome Pauli corrections, indexed like [`BellKind::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corrections(pub [Pauli; 4]);

impl Corrections {
    /// The `k`-th candidate of the 4⁴ search space; outcome 0 is the most significant digit.
    pub fn candidate(k: usize) -> Self {
        assert!(k < 256);
        let digit = |pos: u32| Pauli::ALL[(k / 4usize.pow(3 - pos)) % 4];
        Corrections([digit(0), digit(1), digit(2), digit(3)])
    }

    pub fn matrices(&self) -> [ComplexMatrix; 4] {
        self.0.map(Pauli::matrix)
    }

    pub fn for_outcome(&self, kind: BellKind) -> Pauli {
        let i = BellKind::ALL
            .iter()
            .position(|k| *k == kind)
            .expect("listed");
        self.0[i]
    }
}

/// Builds the four-term channel for a given correction assignment.
pub fn build_channel(corrections: &[ComplexMatrix; 4]) -> Result<KrausChannel> {
    let layout = SystemLayout::qubit_cba();
    let mut terms = Vec::with_capacity(4);
    for (u, kind) in corrections.iter().zip(BellKind::ALL) {
        // Bell vectors are written in (A, C) factor order.
        let p_ac = pure(&bell(kind))?.into_matrix();
        terms.push(StructuredKraus::unitary_first(
            layout.embed(u, &["B"])?,
            layout.embed(&p_ac, &["A", "C"])?,
        )?);
    }
    make_channel(terms)
}

/// `ρ_C ⊗ P_{Ψ⁻}` in canonical `C ⊗ B ⊗ A` order, the singlet on (A, B).
pub fn input_state(rho_c: &DensityOperator) -> Result<DensityOperator> {
    if rho_c.dim() != 2 {
        return Err(dims("qubit input (dim 2)", rho_c.dim()));
    }
    let layout = SystemLayout::qubit_cba();
    let singlet = pure(&bell(BellKind::PsiMinus))?.into_matrix();
    DensityOperator::new(layout.tensor(&[(rho_c.matrix(), &["C"]), (&singlet, &["A", "B"])])?)
}

fn b_marginal_matches(channel: &KrausChannel, rho_c: &DensityOperator) -> Result<bool> {
    let layout = SystemLayout::qubit_cba();
    let out = channel.apply(&input_state(rho_c)?)?;
    let b = layout.partial_trace(&out, &["B"])?;
    Ok(trace_distance(&b, rho_c)? <= EQUALITY_TOL)
}

/// Exhaustive search over the 256 Pauli assignments; returns the first (in
/// candidate order) whose channel reproduces every search probe on B.
pub fn search_corrections(exec: Execution) -> Result<Corrections> {
    let probes: Vec<DensityOperator> = SEARCH_PROBES.iter().map(|q| q.density()).collect();
    let accepts = |k: usize| {
        let cand = Corrections::candidate(k);
        build_channel(&cand.matrices())
            .and_then(|ch| {
                for p in &probes {
                    if !b_marginal_matches(&ch, p)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
            .unwrap_or(false)
    };
    par::find_first(256, exec, accepts)
        .map(Corrections::candidate)
        .ok_or_else(|| {
            Error::Internal(
                "no Pauli correction set teleports the probe states; Bell convention bug".into(),
            )
        })
}

/// The correction unitaries `U_{B,1..4}` found by [`search_corrections`].
pub fn derive_corrections() -> Result<[ComplexMatrix; 4]> {
    Ok(corrections()?.matrices())
}

fn corrections() -> Result<Corrections> {
    static FOUND: OnceLock<std::result::Result<Corrections, Error>> = OnceLock::new();
    FOUND
        .get_or_init(|| search_corrections(Execution::default()))
        .clone()
}

/// The teleportation channel, built once per process.
pub fn teleport_channel() -> Result<&'static KrausChannel> {
    static CHANNEL: OnceLock<std::result::Result<KrausChannel, Error>> = OnceLock::new();
    CHANNEL
        .get_or_init(|| build_channel(&derive_corrections()?))
        .as_ref()
        .map_err(Clone::clone)
}

/// Outcome-to-correction table: the classical two bits sent from the Bell
/// measurement to B select which correction is applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeSignal {
    pub bits: String,
    pub measurement: BellKind,
    pub correction: Pauli,
}

pub fn signal_table() -> Result<Vec<OutcomeSignal>> {
    let c = corrections()?;
    Ok(BellKind::ALL
        .iter()
        .enumerate()
        .map(|(i, &kind)| OutcomeSignal {
            bits: format!("{i:02b}"),
            measurement: kind,
            correction: c.0[i],
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportReport {
    pub input_state: DensityOperator,
    pub b_marginal: DensityOperator,
    pub c_marginal: DensityOperator,
    pub dist_b: f64,
    pub dist_c: f64,
    /// `(Tρ)_B = ρ_C`
    pub eq_4_1_holds: bool,
    /// `(Tρ)_C = ρ_C`; true only for the maximally mixed input.
    pub eq_4_2_holds: bool,
}

impl TeleportReport {
    /// Teleported to B without leaving a copy on C.
    pub fn expected_outcome(&self) -> bool {
        self.eq_4_1_holds && !self.eq_4_2_holds
    }

    /// Both marginals equal the input: only the maximally mixed state gets here.
    pub fn boundary_case(&self) -> bool {
        self.eq_4_1_holds && self.eq_4_2_holds
    }
}

pub fn run_teleport(rho_c: &DensityOperator) -> Result<TeleportReport> {
    run_teleport_with(teleport_channel()?, rho_c)
}

pub fn run_teleport_with(
    channel: &KrausChannel,
    rho_c: &DensityOperator,
) -> Result<TeleportReport> {
    if rho_c.dim() != 2 {
        return Err(Error::InvalidState(format!(
            "teleportation input must be a qubit state (dim 2), got dim {}",
            rho_c.dim()
        )));
    }
    let layout = SystemLayout::qubit_cba();
    let out = channel.apply(&input_state(rho_c)?)?;
    let b = layout.partial_trace(&out, &["B"])?;
    let c = layout.partial_trace(&out, &["C"])?;
    let dist_b = trace_distance(&b, rho_c)?;
    let dist_c = trace_distance(&c, rho_c)?;
    Ok(TeleportReport {
        input_state: rho_c.clone(),
        b_marginal: b,
        c_marginal: c,
        dist_b,
        dist_c,
        eq_4_1_holds: dist_b <= EQUALITY_TOL,
        eq_4_2_holds: dist_c <= EQUALITY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremSummary {
    pub n_probes: usize,
    pub seed: u64,
    pub max_dist_b: f64,
    pub min_dist_c: f64,
    pub max_dist_c: f64,
    pub theorem_holds: bool,
}

/// Teleports `n_probes` Haar-random pure states (probe `k` seeded by
/// `derive_seed(seed, k)`) and reports the extremal marginal distances.
pub fn verify_theorem(n_probes: usize, seed: u64) -> Result<TheoremSummary> {
    verify_theorem_with(n_probes, seed, Execution::default())
}

pub fn verify_theorem_with(n_probes: usize, seed: u64, exec: Execution) -> Result<TheoremSummary> {
    if n_probes == 0 {
        return Err(Error::InvalidInput("n_probes must be at least 1".into()));
    }
    let channel = teleport_channel()?;
    let reports = par::map_indexed(n_probes, exec, |k| {
        let psi = random_pure(2, derive_seed(seed, k as u64));
        run_teleport_with(channel, &pure(&psi)?)
    });
    let mut max_b = 0.0f64;
    let mut min_c = f64::INFINITY;
    let mut max_c = 0.0f64;
    for r in reports {
        let r = r?;
        max_b = max_b.max(r.dist_b);
        min_c = min_c.min(r.dist_c);
        max_c = max_c.max(r.dist_c);
    }
    Ok(TheoremSummary {
        n_probes,
        seed,
        max_dist_b: max_b,
        min_dist_c: min_c,
        max_dist_c: max_c,
        theorem_holds: max_b <= EQUALITY_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::StateVector;

    #[test]
    fn candidate_enumeration_covers_search_space() {
        let all: std::collections::HashSet<[Pauli; 4]> =
            (0..256).map(|k| Corrections::candidate(k).0).collect();
        assert_eq!(all.len(), 256);
        assert_eq!(Corrections::candidate(0).0, [Pauli::I; 4]);
        assert_eq!(Corrections::candidate(255).0, [Pauli::Z; 4]);
        assert_eq!(
            Corrections::candidate(1).0,
            [Pauli::I, Pauli::I, Pauli::I, Pauli::X]
        );
    }

    #[test]
    fn singlet_outcome_needs_no_correction() {
        let c = corrections().unwrap();
        assert_eq!(c.for_outcome(BellKind::PsiMinus), Pauli::I);
        for u in derive_corrections().unwrap() {
            assert!(u.unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn search_is_deterministic_across_execution_modes() {
        let a = search_corrections(Execution::Sequential).unwrap();
        let b = search_corrections(Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn channel_shape() {
        let ch = teleport_channel().unwrap();
        assert_eq!(ch.dim(), 8);
        assert_eq!(ch.kraus_operators().len(), 4);
        assert!(ch.trace_preservation().holds);
        assert!(ch.partition_residual().unwrap() <= 1e-10);
    }

    #[test]
    fn teleports_zero() {
        let r = run_teleport(&NamedQubit::Zero.density()).unwrap();
        assert!(r.dist_b <= 1e-12);
        assert!(r.eq_4_1_holds);
        assert!((r.dist_c - 0.5).abs() <= 1e-12);
        assert!(!r.eq_4_2_holds);
        assert!(r
            .c_marginal
            .matrix()
            .approx_eq(DensityOperator::maximally_mixed(2).matrix(), 1e-12));
        assert!(r.expected_outcome());
    }

    #[test]
    fn maximally_mixed_is_the_boundary_case() {
        let r = run_teleport(&DensityOperator::maximally_mixed(2)).unwrap();
        assert!(r.dist_b <= 1e-12);
        assert!(r.dist_c <= 1e-12);
        assert!(r.boundary_case());
        assert!(!r.expected_outcome());
    }

    #[test]
    fn rejects_non_qubit_input() {
        assert!(run_teleport(&DensityOperator::maximally_mixed(4)).is_err());
    }

    #[test]
    fn verify_theorem_on_random_probes() {
        let s = verify_theorem(100, 11).unwrap();
        assert!(s.theorem_holds);
        assert!(s.max_dist_b <= 1e-9);
        assert!(s.min_dist_c >= 0.49);
        assert!((s.max_dist_c - 0.5).abs() <= 1e-9);
        let again = verify_theorem(1, 4).unwrap();
        assert_eq!(
            serde_json::to_string(&again).unwrap(),
            serde_json::to_string(&verify_theorem(1, 4).unwrap()).unwrap()
        );
        assert!(verify_theorem(0, 1).is_err());
    }

    #[test]
    fn wrong_corrections_fail() {
        let wrong = Corrections([Pauli::I; 4]).matrices();
        let ch = build_channel(&wrong).unwrap();
        let r = run_teleport_with(&ch, &NamedQubit::Plus.density()).unwrap();
        assert!(!r.eq_4_1_holds);
    }

    #[test]
    fn global_phase_of_probe_is_irrelevant() {
        let psi = StateVector::normalized(vec![
            crate::linalg::c(0.3, 0.1),
            crate::linalg::c(-0.2, 0.9),
        ])
        .unwrap();
        let a = run_teleport(&pure(&psi).unwrap()).unwrap();
        let b = run_teleport(&pure(&psi.with_phase(1.3)).unwrap()).unwrap();
        assert!(a
            .b_marginal
            .matrix()
            .approx_eq(b.b_marginal.matrix(), 1e-12));
    }
}
