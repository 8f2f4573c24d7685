//! Measures on the coframe of σ-sublocales.
//!
//! (M4), σ-continuity along increasing sequences, holds in any finite
//! coframe because such sequences stabilise; only (M1)–(M3) are checked.

use std::sync::Arc;

use crate::congruence::CongruenceFrame;
use crate::error::{Axiom, Error, Result};
use crate::lattice::Elem;
use crate::rational::Extended;

/// A validated measure. Values are indexed by the congruence `θ_S` of each sublocale.
#[derive(Clone, Debug)]
pub struct Measure {
    frame: Arc<CongruenceFrame>,
    values: Vec<Extended>,
}

impl PartialEq for Measure {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.frame, &other.frame) || self.frame.congruences() == other.frame.congruences())
            && self.values == other.values
    }
}

impl Measure {
    /// Checks (M1)–(M3) exhaustively.
    pub fn validate(frame: Arc<CongruenceFrame>, values: Vec<Extended>) -> Result<Self> {
        if values.len() != frame.len() {
            return Err(Error::MalformedSpec(format!(
                "measure needs {} values, one per sublocale; got {}",
                frame.len(),
                values.len()
            )));
        }
        let s = frame.sublocales();
        if let Some(bad) = s.elements().find(|e| !values[e.index()].is_nonnegative()) {
            return Err(Error::MalformedSpec(format!(
                "μ({}) = {} is negative",
                s.name(bad),
                values[bad.index()]
            )));
        }
        let void = s.void();
        if !values[void.index()].is_zero() {
            return Err(Error::AxiomViolation {
                axiom: Axiom::M1,
                witness: format!("μ(void) = {}", values[void.index()]),
            });
        }
        let mu = |e: Elem| &values[e.index()];
        for a in s.elements() {
            for b in s.elements() {
                if s.leq(a, b) && mu(a) > mu(b) {
                    return Err(Error::AxiomViolation {
                        axiom: Axiom::M2,
                        witness: format!("({}, {})", s.name(a), s.name(b)),
                    });
                }
            }
        }
        for a in s.elements() {
            for b in s.elements().filter(|&b| b > a) {
                let left = mu(a).checked_add(mu(b));
                let right = mu(s.join(a, b)).checked_add(mu(s.meet(a, b)));
                if left != right {
                    return Err(Error::AxiomViolation {
                        axiom: Axiom::M3,
                        witness: format!("({}, {})", s.name(a), s.name(b)),
                    });
                }
            }
        }
        Ok(Measure { frame, values })
    }

    pub fn zero(frame: Arc<CongruenceFrame>) -> Self {
        let values = vec![Extended::zero(); frame.len()];
        Measure { frame, values }
    }

    /// On a Boolean `L`: `μ(𝔬(a)) = Σ_{atoms x ≤ a} w(x)`.
    pub fn from_weights(frame: Arc<CongruenceFrame>, weights: &[(Elem, Extended)]) -> Result<Self> {
        let l = frame.base().clone();
        if let Some(bad) = l.first_uncomplemented() {
            return Err(Error::NotBoolean(l.name(bad).to_string()));
        }
        let atoms = l.atoms();
        let weight_of = lookup_weights(&atoms, weights, |e| l.name(e).to_string())?;
        let mut values = vec![Extended::zero(); frame.len()];
        for a in l.elements() {
            let total = atoms
                .iter()
                .zip(&weight_of)
                .filter(|(x, _)| l.leq(**x, a))
                .try_fold(Extended::zero(), |acc, (_, w)| acc.checked_add(w))
                .expect("weights are nonnegative");
            values[frame.open(a).index()] = total;
        }
        Measure::validate(frame, values)
    }

    /// `μ(S) = Σ_{atoms A ≤ S} w(A)` over the atoms of `S(L)`.
    pub fn from_atom_weights(frame: Arc<CongruenceFrame>, weights: &[(Elem, Extended)]) -> Result<Self> {
        let s = frame.sublocales();
        let atoms = s.atoms();
        let weight_of = lookup_weights(&atoms, weights, |e| s.name(e))?;
        let values = s
            .elements()
            .map(|t| {
                atoms
                    .iter()
                    .zip(&weight_of)
                    .filter(|(a, _)| s.leq(**a, t))
                    .try_fold(Extended::zero(), |acc, (_, w)| acc.checked_add(w))
                    .expect("weights are nonnegative")
            })
            .collect();
        Measure::validate(frame.clone(), values)
    }

    pub fn frame(&self) -> &Arc<CongruenceFrame> {
        &self.frame
    }

    /// `μ(S)` for the sublocale with congruence `θ_S`.
    pub fn value(&self, sublocale: Elem) -> &Extended {
        &self.values[sublocale.index()]
    }

    pub fn values(&self) -> &[Extended] {
        &self.values
    }
}

fn lookup_weights(
    atoms: &[Elem],
    weights: &[(Elem, Extended)],
    name: impl Fn(Elem) -> String,
) -> Result<Vec<Extended>> {
    for (e, w) in weights {
        if !atoms.contains(e) {
            return Err(Error::MalformedSpec(format!("`{}` is not an atom", name(*e))));
        }
        if !w.is_nonnegative() {
            return Err(Error::MalformedSpec(format!("weight of `{}` is negative", name(*e))));
        }
    }
    atoms
        .iter()
        .map(|a| {
            weights
                .iter()
                .find(|(e, _)| e == a)
                .map(|(_, w)| w.clone())
                .ok_or_else(|| Error::MalformedSpec(format!("no weight given for atom `{}`", name(*a))))
        })
        .collect()
}
