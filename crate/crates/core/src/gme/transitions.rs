use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{ComplexMatrix, EigenSystem, C64};

/// One energy-lowering transition `|k⟩ → |j⟩` between dressed states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    /// `ω_k − ω_j > 0`.
    pub omega: f64,
    /// `⟨j|Π|k⟩`.
    #[serde(skip)]
    pub matrix_element: C64,
    pub j: usize,
    pub k: usize,
}

/// Dressed-state transition operators in the basis of the `K` lowest
/// eigenstates.
///
/// `X⁺(ω) = ⟨j|Π|k⟩ |j⟩⟨k|` for every kept pair with `ω = ω_k − ω_j`;
/// `x_plus` is their sum and `X⁻ = (X⁺)†`.
#[derive(Debug, Clone)]
pub struct TransitionSet {
    transitions: Vec<Transition>,
    energies: Vec<f64>,
    x_plus: ComplexMatrix,
}

impl TransitionSet {
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Dressed energies of the kept states, ascending, ground state at 0.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn x_plus(&self) -> &ComplexMatrix {
        &self.x_plus
    }

    pub fn x_minus(&self) -> ComplexMatrix {
        self.x_plus.adjoint()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    /// Dressed states connected to the ground state through transitions
    /// with `|⟨j|Π|k⟩| > tol · max|⟨j|Π|k⟩|`, ascending.
    pub fn reachable_states(&self, tol: f64) -> Vec<usize> {
        let k = self.dim();
        let cut = tol * self.x_plus.max_abs();
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(s) = stack.pop() {
            for tr in &self.transitions {
                if tr.matrix_element.norm() <= cut {
                    continue;
                }
                let other = if tr.j == s {
                    tr.k
                } else if tr.k == s {
                    tr.j
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        (0..k).filter(|&i| seen[i]).collect()
    }

    /// The set restricted to `states` (ascending, containing 0), reindexed.
    pub fn restrict(&self, states: &[usize]) -> Result<TransitionSet> {
        if states.first() != Some(&0) || states.windows(2).any(|w| w[1] <= w[0]) || states.iter().any(|&s| s >= self.dim()) {
            return Err(Error::Precondition("restrict needs ascending states starting at the ground state".into()));
        }
        let mut index = vec![usize::MAX; self.dim()];
        for (new, &old) in states.iter().enumerate() {
            index[old] = new;
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|t| index[t.j] != usize::MAX && index[t.k] != usize::MAX)
            .map(|t| Transition {
                j: index[t.j],
                k: index[t.k],
                ..*t
            })
            .collect();
        let m = states.len();
        Ok(TransitionSet {
            transitions,
            energies: states.iter().map(|&s| self.energies[s]).collect(),
            x_plus: ComplexMatrix::from_fn(m, |r, c| self.x_plus[(states[r], states[c])]),
        })
    }

    /// Element-wise linear combination of two sets over the same states.
    pub fn combine(&self, alpha: C64, other: &TransitionSet, beta: C64) -> Result<TransitionSet> {
        if self.dim() != other.dim() || self.transitions.len() != other.transitions.len() {
            return Err(Error::Dimension {
                context: "TransitionSet::combine",
                expected: self.transitions.len(),
                found: other.transitions.len(),
            });
        }
        let transitions = self
            .transitions
            .iter()
            .zip(&other.transitions)
            .map(|(s, o)| {
                if (s.j, s.k) != (o.j, o.k) {
                    return Err(Error::Precondition("transition sets index different pairs".into()));
                }
                Ok(Transition {
                    matrix_element: alpha * s.matrix_element + beta * o.matrix_element,
                    ..*s
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let x_plus = &self.x_plus.scale(alpha) + &other.x_plus.scale(beta);
        Ok(TransitionSet {
            transitions,
            energies: self.energies.clone(),
            x_plus,
        })
    }
}

/// Transitions of `pi_op` among the `k` lowest states of `eig`.
///
/// Pairs closer than `degeneracy_tol` in energy are dropped. All pairs with
/// the same frequency are kept as separate entries.
pub fn dressed_transitions(
    eig: &EigenSystem,
    pi_op: &ComplexMatrix,
    k: usize,
    degeneracy_tol: f64,
) -> Result<TransitionSet> {
    let n = eig.dim();
    pi_op.check_dim(n, "dressed_transitions: coupling operator vs eigensystem")?;
    if k < 2 || k > n {
        return Err(Error::invalid(
            "dressed_dim",
            format!("must lie in 2..={n}, got {k}"),
        ));
    }
    let scale = pi_op.max_abs();
    let herm = pi_op.hermiticity_error();
    let anti = (pi_op + &pi_op.adjoint()).max_abs();
    if herm.min(anti) > 1e-9 * scale {
        return Err(Error::Precondition(
            "coupling operator must be Hermitian or anti-Hermitian".into(),
        ));
    }

    let v = eig.vectors();
    // Columns of V restricted to the kept states.
    let vk = ComplexMatrix::from_fn(n, |row, col| if col < k { v[(row, col)] } else { C64::new(0.0, 0.0) });
    let projected = &(&vk.adjoint() * pi_op) * &vk;
    let energies: Vec<f64> = eig.excitation_energies()[..k].to_vec();

    let mut transitions = Vec::new();
    let mut x_plus = ComplexMatrix::zeros(k);
    for kk in 0..k {
        for j in 0..kk {
            let omega = energies[kk] - energies[j];
            if omega <= degeneracy_tol {
                continue;
            }
            let element = projected[(j, kk)];
            x_plus[(j, kk)] = element;
            transitions.push(Transition {
                omega,
                matrix_element: element,
                j,
                k: kk,
            });
        }
    }
    Ok(TransitionSet {
        transitions,
        energies,
        x_plus,
    })
}
