//! Composite-system bookkeeping: subsystem layouts, embedding of local
//! operators and partial traces.
//!
//! A layout's declared part order is the canonical tensor order. A basis
//! state of the full space is `|p₀⟩⊗|p₁⟩⊗…`, and the leftmost part varies
//! slowest in row-major indexing. Callers may name subsystems in any order;
//! the permutation to canonical order happens here and nowhere else.

use serde::{Deserialize, Serialize};

use crate::error::{dims, Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::DensityOperator;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemLayout {
    parts: Vec<Subsystem>,
}

impl SystemLayout {
    pub fn new<S: Into<String>>(parts: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let parts: Vec<Subsystem> = parts
            .into_iter()
            .map(|(label, dim)| Subsystem {
                label: label.into(),
                dim,
            })
            .collect();
        if parts.is_empty() {
            return Err(Error::InvalidLayout("layout has no parts".into()));
        }
        for (k, p) in parts.iter().enumerate() {
            if p.dim == 0 {
                return Err(Error::InvalidLayout(format!(
                    "part {:?} has dimension 0",
                    p.label
                )));
            }
            if parts[..k].iter().any(|q| q.label == p.label) {
                return Err(Error::InvalidLayout(format!(
                    "duplicate label {:?}",
                    p.label
                )));
            }
        }
        Ok(Self { parts })
    }

    /// The `C ⊗ B ⊗ A` layout with B and C identified (equal dimensions).
    pub fn cba(d_cb: usize, d_a: usize) -> Result<Self> {
        Self::new([("C", d_cb), ("B", d_cb), ("A", d_a)])
    }

    /// Three qubits in `C ⊗ B ⊗ A` order.
    pub fn qubit_cba() -> Self {
        Self::cba(2, 2).expect("static layout")
    }

    pub fn parts(&self) -> &[Subsystem] {
        &self.parts
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().map(|p| p.label.as_str())
    }

    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.parts
            .iter()
            .position(|p| p.label == label)
            .ok_or_else(|| Error::InvalidLayout(format!("unknown label {label:?}")))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.parts[self.position(label)?].dim)
    }

    /// Product of the dimensions of the named parts; rejects unknown or repeated labels.
    pub fn dim_of_set(&self, labels: &[&str]) -> Result<usize> {
        self.positions(labels)
            .map(|pos| pos.iter().map(|&k| self.parts[k].dim).product())
    }

    fn positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let k = self.position(l)?;
            if out.contains(&k) {
                return Err(Error::InvalidLayout(format!("label {l:?} named twice")));
            }
            out.push(k);
        }
        Ok(out)
    }

    fn check_square(&self, op: &ComplexMatrix) -> Result<()> {
        let n = self.total_dim();
        if op.rows() != n || op.cols() != n {
            return Err(dims(
                format!("{n}x{n}"),
                format!("{}x{}", op.rows(), op.cols()),
            ));
        }
        Ok(())
    }

    /// Digits of a flat canonical index, one per part.
    fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut d = vec![0; self.parts.len()];
        for k in (0..self.parts.len()).rev() {
            d[k] = flat % self.parts[k].dim;
            flat /= self.parts[k].dim;
        }
        d
    }

    /// Flat index of the sub-multi-index selected by `positions`, in that order.
    fn flat_of(&self, digits: &[usize], positions: &[usize]) -> usize {
        positions
            .iter()
            .fold(0, |acc, &k| acc * self.parts[k].dim + digits[k])
    }

    /// Reorders an operator on the full space whose tensor factors follow
    /// `order` (a permutation of every label) into canonical layout order.
    pub fn to_canonical(&self, op: &ComplexMatrix, order: &[&str]) -> Result<ComplexMatrix> {
        self.check_square(op)?;
        let pos = self.positions(order)?;
        if pos.len() != self.parts.len() {
            return Err(Error::InvalidLayout(format!(
                "ordering names {} of {} parts",
                pos.len(),
                self.parts.len()
            )));
        }
        let n = self.total_dim();
        let map: Vec<usize> = (0..n)
            .map(|i| self.flat_of(&self.digits(i), &pos))
            .collect();
        Ok(ComplexMatrix::from_fn(n, n, |i, j| op[(map[i], map[j])]))
    }

    /// Inverse of [`Self::to_canonical`]: the canonical operator expressed in `order`.
    pub fn from_canonical(&self, op: &ComplexMatrix, order: &[&str]) -> Result<ComplexMatrix> {
        self.check_square(op)?;
        let pos = self.positions(order)?;
        if pos.len() != self.parts.len() {
            return Err(Error::InvalidLayout(format!(
                "ordering names {} of {} parts",
                pos.len(),
                self.parts.len()
            )));
        }
        let n = self.total_dim();
        let mut inv = vec![0; n];
        for i in 0..n {
            inv[self.flat_of(&self.digits(i), &pos)] = i;
        }
        Ok(ComplexMatrix::from_fn(n, n, |i, j| op[(inv[i], inv[j])]))
    }

    fn complement(&self, on: &[usize]) -> Vec<usize> {
        (0..self.parts.len()).filter(|k| !on.contains(k)).collect()
    }

    /// Embeds `op`, acting on the parts `on` (tensor factors in the order
    /// given), into the full space with identity on every other part.
    pub fn embed(&self, op: &ComplexMatrix, on: &[&str]) -> Result<ComplexMatrix> {
        let pos = self.positions(on)?;
        if pos.is_empty() {
            return Err(Error::InvalidLayout(
                "embed needs at least one label".into(),
            ));
        }
        let d = self.dim_of_set(on)?;
        if op.rows() != d || op.cols() != d {
            return Err(dims(
                format!("{d}x{d}"),
                format!("{}x{}", op.rows(), op.cols()),
            ));
        }
        let rest = self.complement(&pos);
        let rest_dim: usize = rest.iter().map(|&k| self.parts[k].dim).product();
        let full = op.kron(&ComplexMatrix::identity(rest_dim));
        let order: Vec<&str> = on
            .iter()
            .copied()
            .chain(rest.iter().map(|&k| self.parts[k].label.as_str()))
            .collect();
        self.to_canonical(&full, &order)
    }

    /// Tensor product of operators on disjoint label groups that together
    /// cover the layout, returned in canonical order.
    pub fn tensor(&self, factors: &[(&ComplexMatrix, &[&str])]) -> Result<ComplexMatrix> {
        let mut order: Vec<&str> = Vec::new();
        let mut acc: Option<ComplexMatrix> = None;
        for (op, labels) in factors {
            let d = self.dim_of_set(labels)?;
            if op.rows() != d || op.cols() != d {
                return Err(dims(
                    format!("{d}x{d}"),
                    format!("{}x{}", op.rows(), op.cols()),
                ));
            }
            order.extend_from_slice(labels);
            acc = Some(match acc {
                None => (*op).clone(),
                Some(a) => a.kron(op),
            });
        }
        let acc = acc.ok_or_else(|| Error::InvalidLayout("empty tensor product".into()))?;
        self.to_canonical(&acc, &order)
    }

    /// Partial trace of an arbitrary operator, keeping `keep` in canonical order.
    pub fn partial_trace_op(&self, op: &ComplexMatrix, keep: &[&str]) -> Result<ComplexMatrix> {
        self.check_square(op)?;
        let mut kept = self.positions(keep)?;
        if kept.is_empty() {
            return Err(Error::InvalidLayout(
                "partial trace must keep at least one part".into(),
            ));
        }
        kept.sort_unstable();
        let traced = self.complement(&kept);
        let n = self.total_dim();
        let dk: usize = kept.iter().map(|&k| self.parts[k].dim).product();

        let digits: Vec<Vec<usize>> = (0..n).map(|i| self.digits(i)).collect();
        let kidx: Vec<usize> = digits.iter().map(|d| self.flat_of(d, &kept)).collect();
        let tidx: Vec<usize> = digits.iter().map(|d| self.flat_of(d, &traced)).collect();

        let mut out = vec![crate::linalg::ZERO; dk * dk];
        for r in 0..n {
            for c in 0..n {
                if tidx[r] == tidx[c] {
                    out[kidx[r] * dk + kidx[c]] += op[(r, c)];
                }
            }
        }
        ComplexMatrix::new(dk, dk, out)
    }

    /// Marginal state on `keep`, in canonical order.
    pub fn partial_trace(&self, rho: &DensityOperator, keep: &[&str]) -> Result<DensityOperator> {
        DensityOperator::new(self.partial_trace_op(rho.matrix(), keep)?)
    }
}

/// Free-function form of [`SystemLayout::embed`].
pub fn embed(op: &ComplexMatrix, on: &[&str], layout: &SystemLayout) -> Result<ComplexMatrix> {
    layout.embed(op, on)
}

/// Free-function form of [`SystemLayout::partial_trace`].
pub fn partial_trace(
    rho: &DensityOperator,
    keep: &[&str],
    layout: &SystemLayout,
) -> Result<DensityOperator> {
    layout.partial_trace(rho, keep)
}
