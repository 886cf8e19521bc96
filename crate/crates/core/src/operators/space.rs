use serde::{Deserialize, Serialize};

use super::{annihilation, tls_lowering, ComplexMatrix};
use crate::error::{Error, Result};

/// The matter factor of the composite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatterKind {
    /// Bosonic dipole truncated to `n` Fock states.
    Boson(usize),
    /// Two-level system.
    TwoLevel,
}

impl MatterKind {
    pub fn dim(self) -> usize {
        match self {
            MatterKind::Boson(n) => n,
            MatterKind::TwoLevel => 2,
        }
    }
}

/// Which tensor factor an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Cavity,
    Matter,
}

/// Truncated cavity ⊗ matter Hilbert space.
///
/// The tensor ordering is cavity ⊗ matter everywhere: basis index
/// `n_cavity * matter_dim + n_matter`. Operators on the composite space must
/// be produced through [`embed`](HilbertSpace::embed) or
/// [`product`](HilbertSpace::product) so that this ordering lives in one
/// place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    cavity_dim: usize,
    matter: MatterKind,
}

impl HilbertSpace {
    pub fn new(cavity_dim: usize, matter: MatterKind) -> Result<Self> {
        if cavity_dim < 2 {
            return Err(Error::Dimension {
                context: "cavity truncation (need at least 2 Fock states)",
                expected: 2,
                found: cavity_dim,
            });
        }
        if let MatterKind::Boson(n) = matter {
            if n < 2 {
                return Err(Error::Dimension {
                    context: "matter truncation (need at least 2 Fock states)",
                    expected: 2,
                    found: n,
                });
            }
        }
        Ok(Self { cavity_dim, matter })
    }

    pub fn hopfield(cavity_dim: usize, matter_dim: usize) -> Result<Self> {
        Self::new(cavity_dim, MatterKind::Boson(matter_dim))
    }

    pub fn rabi(cavity_dim: usize) -> Result<Self> {
        Self::new(cavity_dim, MatterKind::TwoLevel)
    }

    pub fn cavity_dim(&self) -> usize {
        self.cavity_dim
    }

    pub fn matter(&self) -> MatterKind {
        self.matter
    }

    pub fn matter_dim(&self) -> usize {
        self.matter.dim()
    }

    pub fn total_dim(&self) -> usize {
        self.cavity_dim * self.matter_dim()
    }

    pub fn factor_dim(&self, slot: Slot) -> usize {
        match slot {
            Slot::Cavity => self.cavity_dim,
            Slot::Matter => self.matter_dim(),
        }
    }

    /// Lifts a single-factor operator to the composite space by tensoring
    /// with the identity on the other factor.
    pub fn embed(&self, op: &ComplexMatrix, slot: Slot) -> Result<ComplexMatrix> {
        op.check_dim(self.factor_dim(slot), "embed: operator vs factor dimension")?;
        Ok(match slot {
            Slot::Cavity => op.kron(&ComplexMatrix::identity(self.matter_dim())),
            Slot::Matter => ComplexMatrix::identity(self.cavity_dim).kron(op),
        })
    }

    /// `cavity ⊗ matter` for a pair of single-factor operators; equal to
    /// `embed(cavity) · embed(matter)` without the composite-space product.
    pub fn product(&self, cavity: &ComplexMatrix, matter: &ComplexMatrix) -> Result<ComplexMatrix> {
        cavity.check_dim(self.cavity_dim, "product: cavity operator vs factor dimension")?;
        matter.check_dim(self.matter_dim(), "product: matter operator vs factor dimension")?;
        Ok(cavity.kron(matter))
    }

    /// Basis indices of even and odd total excitation number
    /// `n_cavity + n_matter`, each ascending.
    pub fn parity_sectors(&self) -> [Vec<usize>; 2] {
        let m = self.matter_dim();
        let mut sectors = [Vec::new(), Vec::new()];
        for i in 0..self.total_dim() {
            sectors[(i / m + i % m) % 2].push(i);
        }
        sectors
    }

    /// Cavity annihilation operator `a` on the composite space.
    pub fn cavity_annihilation(&self) -> ComplexMatrix {
        self.embed(&annihilation(self.cavity_dim).expect("cavity_dim >= 2"), Slot::Cavity)
            .expect("factor dimension matches by construction")
    }

    /// Matter lowering operator on the composite space: `b` for a bosonic
    /// dipole, `σ⁻` for a two-level system.
    pub fn matter_lowering(&self) -> ComplexMatrix {
        let op = match self.matter {
            MatterKind::Boson(n) => annihilation(n).expect("matter_dim >= 2"),
            MatterKind::TwoLevel => tls_lowering(),
        };
        self.embed(&op, Slot::Matter).expect("factor dimension matches by construction")
    }
}
