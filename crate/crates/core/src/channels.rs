//! Completely positive maps built from unitary/projector factor pairs.
//!
//! Each Kraus operator is `V_i = U_i P_i` or `V_i = P_i U_i`, and the
//! projectors must resolve the identity: `Σ_i P_i = I`. With every term in
//! unitary-first form this partition makes the map trace preserving, since
//! `V_i†V_i = P_i U_i†U_i P_i = P_i`. Projector-first terms can lose trace;
//! [`KrausChannel::apply_operator`] never renormalizes.

use serde::{Deserialize, Serialize};

use crate::error::{dims, Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::DensityOperator;

/// Tolerance for every structural check on a channel.
pub const CHANNEL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorOrder {
    /// `V = U·P`
    #[serde(rename = "UP")]
    UnitaryFirst,
    /// `V = P·U`
    #[serde(rename = "PU")]
    ProjectorFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuredKraus {
    pub unitary: ComplexMatrix,
    pub projector: ComplexMatrix,
    pub side: FactorOrder,
}

impl StructuredKraus {
    pub fn new(
        unitary: ComplexMatrix,
        projector: ComplexMatrix,
        side: FactorOrder,
    ) -> Result<Self> {
        let t = Self {
            unitary,
            projector,
            side,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn unitary_first(unitary: ComplexMatrix, projector: ComplexMatrix) -> Result<Self> {
        Self::new(unitary, projector, FactorOrder::UnitaryFirst)
    }

    fn validate(&self) -> Result<()> {
        let (u, p) = (&self.unitary, &self.projector);
        if !u.is_square() || !p.is_square() || u.rows() != p.rows() {
            return Err(dims(
                format!(
                    "square factors of equal size (unitary {}x{})",
                    u.rows(),
                    u.cols()
                ),
                format!("projector {}x{}", p.rows(), p.cols()),
            ));
        }
        let ur = u.unitarity_residual();
        if ur > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!(
                "unitary factor is not unitary (max |U†U - I| = {ur:e})"
            )));
        }
        let pr = p.projector_residual();
        if pr > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!(
                "projector factor is not an orthogonal projector (residual {pr:e})"
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.unitary.rows()
    }

    pub fn kraus(&self) -> ComplexMatrix {
        match self.side {
            FactorOrder::UnitaryFirst => &self.unitary * &self.projector,
            FactorOrder::ProjectorFirst => &self.projector * &self.unitary,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
    /// `None` for channels built through the raw-Kraus escape hatch.
    structure: Option<Vec<StructuredKraus>>,
}

/// Validates factor pairs and the projector partition, then builds the map.
pub fn make_channel(terms: Vec<StructuredKraus>) -> Result<KrausChannel> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidChannel("channel needs at least one term".into()))?;
    let dim = first.dim();
    for (i, t) in terms.iter().enumerate() {
        t.validate()
            .map_err(|e| Error::InvalidChannel(format!("term {i}: {e}")))?;
        if t.dim() != dim {
            return Err(dims(
                format!("{dim}x{dim} term"),
                format!("term {i} is {0}x{0}", t.dim()),
            ));
        }
    }

    let residual = partition_residual(&terms);
    if residual > CHANNEL_TOL {
        return Err(Error::InvalidChannel(format!(
            "projectors do not sum to the identity (max |Σ P_i - I| = {residual:e})"
        )));
    }
    for i in 0..terms.len() {
        for j in (i + 1)..terms.len() {
            let overlap = (&terms[i].projector * &terms[j].projector)
                .max_abs_diff(&ComplexMatrix::zeros(dim, dim));
            if overlap > CHANNEL_TOL {
                return Err(Error::InvalidChannel(format!(
                    "projectors {i} and {j} are not orthogonal (max |P_i P_j| = {overlap:e})"
                )));
            }
        }
    }

    let channel = KrausChannel {
        dim,
        kraus: terms.iter().map(StructuredKraus::kraus).collect(),
        structure: Some(terms),
    };
    if channel.all_unitary_first() {
        let tp = channel.trace_preservation();
        if !tp.holds {
            return Err(Error::Internal(format!(
                "unitary-first partition channel is not trace preserving (residual {:e})",
                tp.residual
            )));
        }
    }
    Ok(channel)
}

fn partition_residual(terms: &[StructuredKraus]) -> f64 {
    let dim = terms[0].dim();
    let sum = terms
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, t| &acc + &t.projector);
    sum.max_abs_diff(&ComplexMatrix::identity(dim))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    pub holds: bool,
    /// `max |Σ V_i†V_i - I|`
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub dim: usize,
    pub terms: usize,
    pub structured: bool,
    pub partition_residual: Option<f64>,
    pub trace_preservation_residual: f64,
    pub trace_preserving: bool,
    pub choi_min_eigenvalue: f64,
    pub completely_positive: bool,
}

impl KrausChannel {
    /// Unstructured escape hatch: arbitrary Kraus operators, no factor checks.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| {
            Error::InvalidChannel("channel needs at least one Kraus operator".into())
        })?;
        let dim = first.rows();
        if let Some(bad) = kraus.iter().find(|k| k.rows() != dim || k.cols() != dim) {
            return Err(dims(
                format!("{dim}x{dim}"),
                format!("{}x{}", bad.rows(), bad.cols()),
            ));
        }
        Ok(Self {
            dim,
            kraus,
            structure: None,
        })
    }

    pub fn identity(dim: usize) -> Self {
        make_channel(vec![StructuredKraus {
            unitary: ComplexMatrix::identity(dim),
            projector: ComplexMatrix::identity(dim),
            side: FactorOrder::UnitaryFirst,
        }])
        .expect("identity channel is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_operators(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn terms(&self) -> Option<&[StructuredKraus]> {
        self.structure.as_deref()
    }

    pub fn is_structured(&self) -> bool {
        self.structure.is_some()
    }

    fn all_unitary_first(&self) -> bool {
        self.structure
            .as_ref()
            .is_some_and(|t| t.iter().all(|k| k.side == FactorOrder::UnitaryFirst))
    }

    /// `max |Σ P_i - I|` for structured channels.
    pub fn partition_residual(&self) -> Option<f64> {
        self.structure.as_deref().map(partition_residual)
    }

    /// `Σ_i V_i X V_i†` for any square operator `X`.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(dims(
                format!("{0}x{0}", self.dim),
                format!("{}x{}", x.rows(), x.cols()),
            ));
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for v in &self.kraus {
            out = &out + &(&(v * x) * &v.adjoint());
        }
        Ok(out)
    }

    /// Applies the map to a state. Fails if the output is not a density
    /// operator, which happens only for trace-decreasing maps.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let out = self.apply_operator(rho.matrix())?;
        DensityOperator::new(out).map_err(|e| {
            Error::InvalidChannel(format!(
                "output is not a state ({e}); the map is not trace preserving"
            ))
        })
    }

    /// `Σ_jk |j⟩⟨k| ⊗ T(|j⟩⟨k|)`
    pub fn choi(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut choi = ComplexMatrix::zeros(d * d, d * d);
        for j in 0..d {
            for k in 0..d {
                let mut ejk = ComplexMatrix::zeros(d, d).to_rows();
                ejk[j][k] = crate::linalg::ONE;
                let ejk = ComplexMatrix::from_rows(&ejk).expect("basis matrix");
                let image = self.apply_operator(&ejk).expect("dimension matches");
                choi = &choi + &ejk.kron(&image);
            }
        }
        choi
    }

    pub fn choi_min_eigenvalue(&self) -> Result<f64> {
        Ok(self.choi().hermitian_eigenvalues()?[0])
    }

    pub fn trace_preservation(&self) -> TraceCheck {
        let d = self.dim;
        let sum = self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, v| {
                &acc + &(&v.adjoint() * v)
            });
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(d));
        TraceCheck {
            holds: residual <= CHANNEL_TOL,
            residual,
        }
    }

    pub fn certify(&self) -> Result<Certificate> {
        let tp = self.trace_preservation();
        let choi_min = self.choi_min_eigenvalue()?;
        Ok(Certificate {
            dim: self.dim,
            terms: self.kraus.len(),
            structured: self.is_structured(),
            partition_residual: self.partition_residual(),
            trace_preservation_residual: tp.residual,
            trace_preserving: tp.holds,
            choi_min_eigenvalue: choi_min,
            completely_positive: choi_min >= -CHANNEL_TOL,
        })
    }

    pub fn to_document(&self) -> Option<ChannelDocument> {
        self.structure.as_ref().map(|t| ChannelDocument {
            dim: self.dim,
            terms: t.clone(),
        })
    }
}

pub fn apply(channel: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    channel.apply(rho)
}

pub fn choi(channel: &KrausChannel) -> ComplexMatrix {
    channel.choi()
}

pub fn is_trace_preserving(channel: &KrausChannel) -> TraceCheck {
    channel.trace_preservation()
}

/// JSON exchange form of a structured channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDocument {
    pub dim: usize,
    pub terms: Vec<StructuredKraus>,
}

impl ChannelDocument {
    /// Deserialization skips factor validation; this runs all of it.
    pub fn into_channel(self) -> Result<KrausChannel> {
        if self.terms.is_empty() {
            return Err(Error::InvalidChannel(
                "channel document has no terms".into(),
            ));
        }
        if let Some((i, t)) = self
            .terms
            .iter()
            .enumerate()
            .find(|(_, t)| t.dim() != self.dim)
        {
            return Err(dims(
                format!("{0}x{0} terms (declared dim)", self.dim),
                format!("term {i} is {0}x{0}", t.dim()),
            ));
        }
        make_channel(self.terms)
    }
}
