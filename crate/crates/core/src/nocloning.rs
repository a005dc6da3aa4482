//! Numerical falsifier for cloning.
//!
//! For a map `T` on `C ⊗ B ⊗ A` and a blank state `ρ_BA`, a clone would give
//! `(Tρ)_B = (Tρ)_C = ρ_C` for every input `ρ_C`. [`clone_witness`] runs a
//! probe set and returns the input on which that fails the most. A positive
//! defect certifies that this `(T, ρ_BA)` does not clone.

use serde::{Deserialize, Serialize};

use crate::channels::{make_channel, KrausChannel, StructuredKraus};
use crate::composite::SystemLayout;
use crate::error::{dims, Error, Result};
use crate::linalg::ComplexMatrix;
use crate::par::{self, Execution};
use crate::random::{derive_seed, haar_unitary, SeededRng};
use crate::states::{pure, random_mixed_from, random_pure, DensityOperator, NamedQubit};

/// Smallest defect accepted as a cloning failure in batch runs.
pub const DEFECT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneWitness {
    pub witness_state: DensityOperator,
    /// Index of the witness in the probe sequence.
    pub probe_index: usize,
    pub defect_b: f64,
    pub defect_c: f64,
    pub defect: f64,
}

/// Returns the probe with the largest `max(defect_b, defect_c)`; ties go
/// to the earliest probe.
pub fn clone_witness(
    channel: &KrausChannel,
    rho_ba: &DensityOperator,
    probes: &[DensityOperator],
    layout: &SystemLayout,
) -> Result<CloneWitness> {
    if probes.is_empty() {
        return Err(Error::InvalidInput("probe set is empty".into()));
    }
    let d_c = layout.dim_of("C")?;
    let d_ba = layout.dim_of_set(&["B", "A"])?;
    if layout.dim_of("B")? != d_c {
        return Err(Error::InvalidLayout(
            "B and C must have equal dimension".into(),
        ));
    }
    if rho_ba.dim() != d_ba {
        return Err(dims(format!("ρ_BA of dim {d_ba}"), rho_ba.dim()));
    }
    if channel.dim() != layout.total_dim() {
        return Err(dims(
            format!("channel of dim {}", layout.total_dim()),
            channel.dim(),
        ));
    }

    let mut best: Option<CloneWitness> = None;
    for (k, rho_c) in probes.iter().enumerate() {
        if rho_c.dim() != d_c {
            return Err(dims(
                format!("probe of dim {d_c}"),
                format!("probe {k} of dim {}", rho_c.dim()),
            ));
        }
        let rho = layout.tensor(&[(rho_c.matrix(), &["C"]), (rho_ba.matrix(), &["B", "A"])])?;
        let out = channel.apply_operator(&rho)?;
        // Trace-decreasing maps are compared without renormalizing.
        let b = marginal(layout, &out, "B")?;
        let c = marginal(layout, &out, "C")?;
        let defect_b = distance(&b, rho_c.matrix())?;
        let defect_c = distance(&c, rho_c.matrix())?;
        let defect = defect_b.max(defect_c);
        if best.as_ref().is_none_or(|w| defect > w.defect) {
            best = Some(CloneWitness {
                witness_state: rho_c.clone(),
                probe_index: k,
                defect_b,
                defect_c,
                defect,
            });
        }
    }
    Ok(best.expect("probes is nonempty"))
}

fn marginal(layout: &SystemLayout, op: &ComplexMatrix, label: &str) -> Result<ComplexMatrix> {
    layout.partial_trace_op(op, &[label])
}

/// Trace distance on operators that may be sub-normalized.
fn distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let ev = a.try_sub(b)?.hermitian_eigenvalues()?;
    Ok((0.5 * ev.iter().map(|x| x.abs()).sum::<f64>()).min(1.0))
}

/// The six Pauli eigenstates followed by `n_random` Haar-random pure
/// qubit states (probe `6 + k` seeded by `derive_seed(seed, k)`).
pub fn default_probes(seed: u64, n_random: usize) -> Vec<DensityOperator> {
    NamedQubit::ALL
        .iter()
        .map(|q| q.density())
        .chain(
            (0..n_random)
                .map(|k| pure(&random_pure(2, derive_seed(seed, k as u64))).expect("normalized")),
        )
        .collect()
}

/// A random unitary-first channel on `layout` with `n_terms` terms, and a
/// random blank state on `B ⊗ A`.
///
/// The projector partition comes from a Haar-random orthonormal basis cut
/// into `n_terms` nonempty consecutive groups at random cut points. Each
/// term carries its own Haar-random unitary. `ρ_BA` mixes between one and
/// `dim(BA)` Haar-random pure states.
pub fn random_instance(
    layout: &SystemLayout,
    n_terms: usize,
    seed: u64,
) -> Result<(KrausChannel, DensityOperator)> {
    let n = layout.total_dim();
    if n_terms == 0 || n_terms > n {
        return Err(Error::InvalidInput(format!(
            "n_terms must be in 1..={n}, got {n_terms}"
        )));
    }
    let d_ba = layout.dim_of_set(&["B", "A"])?;
    let mut rng = SeededRng::new(seed);

    let basis = haar_unitary(n, &mut rng);
    let cuts = random_cuts(n, n_terms, &mut rng);
    let mut terms = Vec::with_capacity(n_terms);
    for w in cuts.windows(2) {
        let mut p = ComplexMatrix::zeros(n, n);
        for col in w[0]..w[1] {
            let v: Vec<_> = (0..n).map(|r| basis[(r, col)]).collect();
            p = &p + &ComplexMatrix::outer(&v, &v);
        }
        let u = haar_unitary(n, &mut rng);
        terms.push(StructuredKraus::unitary_first(u, p)?);
    }
    let channel = make_channel(terms)?;

    let rank = 1 + rng.below(d_ba);
    let rho_ba = random_mixed_from(d_ba, rank, &mut rng);
    Ok((channel, rho_ba))
}

/// Sorted boundaries `0 = c_0 < c_1 < … < c_k = n` splitting `0..n` into `k` groups.
fn random_cuts(n: usize, k: usize, rng: &mut SeededRng) -> Vec<usize> {
    // Partial Fisher–Yates over the interior points 1..n.
    let mut interior: Vec<usize> = (1..n).collect();
    for i in 0..(k - 1) {
        let j = i + rng.below(interior.len() - i);
        interior.swap(i, j);
    }
    let mut cuts: Vec<usize> = interior[..k - 1].to_vec();
    cuts.push(0);
    cuts.push(n);
    cuts.sort_unstable();
    cuts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub index: usize,
    pub seed: u64,
    pub n_terms: usize,
    pub probe_index: usize,
    pub defect_b: f64,
    pub defect_c: f64,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub base_seed: u64,
    pub instances: Vec<InstanceResult>,
    pub min_defect: f64,
    pub threshold: f64,
    pub all_fail_to_clone: bool,
}

/// Runs `instances` random qubit instances; instance `k` uses seed
/// `derive_seed(base_seed, k)`, between one and four terms, and
/// `default_probes(seed_k, n_random)`.
pub fn run_batch(
    instances: usize,
    base_seed: u64,
    n_random: usize,
    exec: Execution,
) -> Result<BatchSummary> {
    if instances == 0 {
        return Err(Error::InvalidInput("instances must be at least 1".into()));
    }
    let layout = SystemLayout::qubit_cba();
    let rows = par::map_indexed(instances, exec, |k| -> Result<InstanceResult> {
        let seed = derive_seed(base_seed, k as u64);
        let n_terms = 1 + (seed % 4) as usize;
        let (channel, rho_ba) = random_instance(&layout, n_terms, seed)?;
        let w = clone_witness(&channel, &rho_ba, &default_probes(seed, n_random), &layout)?;
        Ok(InstanceResult {
            index: k,
            seed,
            n_terms,
            probe_index: w.probe_index,
            defect_b: w.defect_b,
            defect_c: w.defect_c,
            defect: w.defect,
        })
    });
    let instances: Vec<InstanceResult> = rows.into_iter().collect::<Result<_>>()?;
    let min_defect = instances
        .iter()
        .map(|r| r.defect)
        .fold(f64::INFINITY, f64::min);
    Ok(BatchSummary {
        base_seed,
        min_defect,
        threshold: DEFECT_THRESHOLD,
        all_fail_to_clone: min_defect >= DEFECT_THRESHOLD,
        instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell, BellKind};
    use crate::teleport::teleport_channel;

    fn singlet() -> DensityOperator {
        pure(&bell(BellKind::PsiMinus)).unwrap()
    }

    #[test]
    fn teleportation_defect_sits_on_c() {
        let layout = SystemLayout::qubit_cba();
        let w = clone_witness(
            teleport_channel().unwrap(),
            &singlet(),
            &[NamedQubit::Zero.density()],
            &layout,
        )
        .unwrap();
        assert!(w.defect_b <= 1e-12);
        assert!((w.defect_c - 0.5).abs() <= 1e-12);
        assert!((w.defect - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn identity_channel_never_reaches_b() {
        let layout = SystemLayout::qubit_cba();
        let w = clone_witness(
            &KrausChannel::identity(8),
            &singlet(),
            &[NamedQubit::Zero.density()],
            &layout,
        )
        .unwrap();
        assert!((w.defect_b - 0.5).abs() <= 1e-12);
        assert!(w.defect_c <= 1e-12);
        assert!((w.defect - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn maximally_mixed_probe_does_not_witness() {
        let layout = SystemLayout::qubit_cba();
        let w = clone_witness(
            teleport_channel().unwrap(),
            &singlet(),
            &[DensityOperator::maximally_mixed(2)],
            &layout,
        )
        .unwrap();
        assert!(w.defect <= 1e-12);
    }

    #[test]
    fn ties_go_to_first_probe() {
        let layout = SystemLayout::qubit_cba();
        let probes = default_probes(0, 0);
        let w = clone_witness(teleport_channel().unwrap(), &singlet(), &probes, &layout).unwrap();
        // Every pure probe has defect exactly 1/2 up to rounding; the first
        // maximal one wins, and rounding cannot push it past index 5.
        assert!(w.probe_index < 6);
        assert!((w.defect - 0.5).abs() < 1e-12);
    }

    #[test]
    fn witness_errors() {
        let layout = SystemLayout::qubit_cba();
        let ch = teleport_channel().unwrap();
        assert!(clone_witness(ch, &singlet(), &[], &layout).is_err());
        assert!(clone_witness(
            ch,
            &NamedQubit::Zero.density(),
            &default_probes(0, 0),
            &layout
        )
        .is_err());
        assert!(clone_witness(ch, &singlet(), &[singlet()], &layout).is_err());
    }

    #[test]
    fn default_probe_set() {
        let p = default_probes(3, 0);
        assert_eq!(p.len(), 6);
        let mean = p
            .iter()
            .fold(ComplexMatrix::zeros(2, 2), |acc, r| &acc + r.matrix())
            .scale_real(1.0 / 6.0);
        assert!(mean.approx_eq(DensityOperator::maximally_mixed(2).matrix(), 1e-12));
        let q = default_probes(3, 16);
        assert_eq!(q.len(), 22);
        assert_eq!(q[..6], p[..]);
        assert_eq!(default_probes(3, 16), q);
    }

    #[test]
    fn random_instance_properties() {
        let layout = SystemLayout::qubit_cba();
        for n_terms in 1..=8 {
            let (ch, rho_ba) = random_instance(&layout, n_terms, 100 + n_terms as u64).unwrap();
            assert_eq!(ch.kraus_operators().len(), n_terms);
            assert!(ch.partition_residual().unwrap() <= 1e-10);
            assert!(ch.trace_preservation().holds);
            assert_eq!(rho_ba.dim(), 4);
        }
        let a = random_instance(&layout, 3, 9).unwrap();
        let b = random_instance(&layout, 3, 9).unwrap();
        assert_eq!(a, b);
        assert!(random_instance(&layout, 0, 1).is_err());
        assert!(random_instance(&layout, 9, 1).is_err());
    }

    #[test]
    fn cuts_are_valid_partitions() {
        let mut rng = SeededRng::new(5);
        for k in 1..=8 {
            let c = random_cuts(8, k, &mut rng);
            assert_eq!(c.len(), k + 1);
            assert_eq!(c[0], 0);
            assert_eq!(c[k], 8);
            assert!(c.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn small_batch_finds_witnesses() {
        let s = run_batch(10, 1, 4, Execution::default()).unwrap();
        assert_eq!(s.instances.len(), 10);
        assert!(s.all_fail_to_clone, "min defect {}", s.min_defect);
        assert!(run_batch(0, 1, 4, Execution::Sequential).is_err());
    }
}
