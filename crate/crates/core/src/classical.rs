//! Finite measurable spaces `(X, A, λ)`, classical simple functions and the
//! Lebesgue integral, together with the passage to their localic counterparts
//! on `C(A)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::congruence::CongruenceFrame;
use crate::error::{Error, Result};
use crate::integral::{integrate_simple, summability, Classification, SummabilityReport};
use crate::lattice::{subset_name, Elem, FiniteLattice};
use crate::measure::Measure;
use crate::rational::{Extended, Rational};
use crate::real::sample_points;
use crate::simple::SimpleFunction;

/// A subset of `X` as a bit mask over the point list.
pub type PointSet = u64;

#[derive(Clone, Debug)]
pub struct FiniteMeasurableSpace {
    points: Vec<String>,
    algebra: Arc<FiniteLattice>,
    /// `sets[e]` is the subset named by element `e` of the algebra lattice.
    sets: Vec<PointSet>,
    elem_of: HashMap<PointSet, Elem>,
    atom_weights: Vec<(PointSet, Extended)>,
}

impl FiniteMeasurableSpace {
    /// `algebra = None` means the full powerset. λ is given on the atoms of the algebra.
    pub fn new(points: &[String], algebra: Option<&[PointSet]>, lambda: &[(PointSet, Extended)]) -> Result<Self> {
        if points.is_empty() || points.len() > 64 {
            return Err(Error::MalformedSpec("a space needs between 1 and 64 points".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = points.iter().find(|p| !seen.insert(p.as_str())) {
            return Err(Error::MalformedSpec(format!("duplicate point `{dup}`")));
        }
        let full: PointSet = if points.len() == 64 { u64::MAX } else { (1u64 << points.len()) - 1 };
        let mut sets: Vec<PointSet> = match algebra {
            None => {
                if points.len() > 6 {
                    return Err(Error::SizeLimitExceeded(format!(
                        "powerset of {} points exceeds 64 sets",
                        points.len()
                    )));
                }
                (0..=full).collect()
            }
            Some(family) => {
                let mut v: Vec<PointSet> = family.to_vec();
                v.sort_unstable();
                v.dedup();
                v
            }
        };
        sets.sort_by_key(|s| (s.count_ones(), *s));
        if sets.len() > 64 {
            return Err(Error::SizeLimitExceeded(format!("σ-algebra has {} sets; limit is 64", sets.len())));
        }
        let member: std::collections::HashSet<PointSet> = sets.iter().copied().collect();
        let name = |s: PointSet| subset_name(s as usize, full as usize, &points.iter().map(String::as_str).collect::<Vec<_>>());
        if !member.contains(&0) || !member.contains(&full) {
            return Err(Error::MalformedSpec("σ-algebra must contain ∅ and X".into()));
        }
        for &a in &sets {
            if a & !full != 0 {
                return Err(Error::MalformedSpec("subset mentions an unknown point".into()));
            }
            if !member.contains(&(full & !a)) {
                return Err(Error::MalformedSpec(format!("σ-algebra is not closed under complement at {}", name(a))));
            }
            for &b in &sets {
                if !member.contains(&(a | b)) {
                    return Err(Error::MalformedSpec(format!(
                        "σ-algebra is not closed under union at {} ∪ {}",
                        name(a),
                        name(b)
                    )));
                }
            }
        }
        let n = sets.len();
        let names = sets.iter().map(|&s| name(s)).collect();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = sets[i] & !sets[j] == 0;
            }
        }
        let lattice = FiniteLattice::from_matrix("A", names, leq)?;
        let elem_of: HashMap<PointSet, Elem> = sets.iter().enumerate().map(|(i, &s)| (s, Elem::new(i))).collect();
        let atoms: Vec<PointSet> = lattice.atoms().iter().map(|e| sets[e.index()]).collect();
        for (s, w) in lambda {
            if !atoms.contains(s) {
                return Err(Error::MalformedSpec(format!("λ is given on {}, which is not an atom of A", name(*s))));
            }
            if !w.is_nonnegative() {
                return Err(Error::MalformedSpec(format!("λ({}) is negative", name(*s))));
            }
        }
        let atom_weights = atoms
            .iter()
            .map(|a| {
                lambda
                    .iter()
                    .find(|(s, _)| s == a)
                    .map(|(_, w)| (*a, w.clone()))
                    .ok_or_else(|| Error::MalformedSpec(format!("λ is missing on the atom {}", name(*a))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteMeasurableSpace { points: points.to_vec(), algebra: Arc::new(lattice), sets, elem_of, atom_weights })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    /// `A` as a Boolean lattice.
    pub fn algebra(&self) -> &Arc<FiniteLattice> {
        &self.algebra
    }

    pub fn full(&self) -> PointSet {
        *self.sets.last().expect("X is in A")
    }

    pub fn set(&self, e: Elem) -> PointSet {
        self.sets[e.index()]
    }

    pub fn elem(&self, s: PointSet) -> Result<Elem> {
        self.elem_of
            .get(&s)
            .copied()
            .ok_or_else(|| Error::MalformedSpec(format!("{} is not in the σ-algebra", self.name(s))))
    }

    pub fn name(&self, s: PointSet) -> String {
        let pts: Vec<&str> = self.points.iter().map(String::as_str).collect();
        subset_name(s as usize, self.full() as usize, &pts)
    }

    /// Parses `0`, `1`, or points joined by `|` into a subset.
    pub fn parse_set(&self, text: &str) -> Result<PointSet> {
        match text.trim() {
            "0" | "∅" => Ok(0),
            "1" | "X" => Ok(self.full()),
            other => other.split('|').try_fold(0, |acc, p| {
                let p = p.trim();
                let i = self
                    .points
                    .iter()
                    .position(|q| q == p)
                    .ok_or_else(|| Error::UnknownElement(p.to_string()))?;
                Ok(acc | (1u64 << i))
            }),
        }
    }

    /// `λ(B)`, additive over the atoms of `A`.
    pub fn lambda(&self, s: PointSet) -> Extended {
        self.atom_weights
            .iter()
            .filter(|(a, _)| a & !s == 0)
            .try_fold(Extended::zero(), |acc, (_, w)| acc.checked_add(w))
            .expect("weights are nonnegative")
    }
}

/// A rational-valued function on `X` whose level sets lie in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalSimpleFunction {
    values: Vec<Rational>,
}

impl ClassicalSimpleFunction {
    pub fn new(space: &FiniteMeasurableSpace, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.points.len() {
            return Err(Error::MalformedSpec(format!(
                "function has {} values for {} points",
                values.len(),
                space.points.len()
            )));
        }
        let f = ClassicalSimpleFunction { values };
        for (_, set) in f.level_sets() {
            space.elem(set).map_err(|_| {
                Error::MalformedSpec(format!("level set {} is not measurable", space.name(set)))
            })?;
        }
        Ok(f)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Distinct values with their preimages, in increasing order.
    pub fn level_sets(&self) -> BTreeMap<Rational, PointSet> {
        let mut out: BTreeMap<Rational, PointSet> = BTreeMap::new();
        for (i, v) in self.values.iter().enumerate() {
            *out.entry(v.clone()).or_insert(0) |= 1u64 << i;
        }
        out
    }

    fn zip(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        ClassicalSimpleFunction { values: self.values.iter().zip(&other.values).map(|(a, b)| op(a, b)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, lambda: &Rational) -> Self {
        ClassicalSimpleFunction { values: self.values.iter().map(|a| a * lambda).collect() }
    }

    /// `{x | f̃(x) < q}`.
    pub fn below(&self, q: &Rational) -> PointSet {
        self.preimage(|v| v < q)
    }

    /// `{x | f̃(x) > p}`.
    pub fn above(&self, p: &Rational) -> PointSet {
        self.preimage(|v| v > p)
    }

    fn preimage(&self, keep: impl Fn(&Rational) -> bool) -> PointSet {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| keep(v))
            .fold(0, |acc, (i, _)| acc | (1u64 << i))
    }
}

/// `∫_{A_sub} f̃ dλ = Σ_r r·λ(f̃⁻¹(r) ∩ A_sub)`, part-wise with `0·∞ = 0`.
pub fn classical_summability(
    space: &FiniteMeasurableSpace,
    f: &ClassicalSimpleFunction,
    over: PointSet,
) -> SummabilityReport {
    let mut pos = Extended::zero();
    let mut neg = Extended::zero();
    for (r, set) in f.level_sets() {
        let part = space.lambda(set & over).scale(&r.abs());
        if r.is_negative() {
            neg = neg.checked_add(&part).expect("nonnegative terms");
        } else {
            pos = pos.checked_add(&part).expect("nonnegative terms");
        }
    }
    SummabilityReport::from_parts(pos, neg)
}

pub fn classical_integral(
    space: &FiniteMeasurableSpace,
    f: &ClassicalSimpleFunction,
    over: PointSet,
) -> Result<(Extended, SummabilityReport)> {
    let report = classical_summability(space, f, over);
    match report.value() {
        Some(v) => Ok((v, report)),
        None => Err(Error::NotIntegrable { over: space.name(over) }),
    }
}

/// `Σ r_i·χ_{∇_{A_i}}` on `C(A)`.
pub fn to_localic(space: &FiniteMeasurableSpace, frame: &CongruenceFrame, f: &ClassicalSimpleFunction) -> Result<SimpleFunction> {
    let terms = f
        .level_sets()
        .into_iter()
        .map(|(r, set)| Ok((r, frame.closed(space.elem(set)?))))
        .collect::<Result<Vec<_>>>()?;
    SimpleFunction::canonicalize(frame.lattice().clone(), &terms)
}

/// Inverse of [`to_localic`]; `None` when some term is not a closed congruence.
pub fn from_localic(
    space: &FiniteMeasurableSpace,
    frame: &CongruenceFrame,
    g: &SimpleFunction,
) -> Option<ClassicalSimpleFunction> {
    let mut values = vec![Rational::zero(); space.points.len()];
    for (r, theta) in g.terms() {
        let set = space.set(frame.closed_preimage(*theta)?);
        for (i, v) in values.iter_mut().enumerate() {
            if set & (1u64 << i) != 0 {
                *v = r.clone();
            }
        }
    }
    Some(ClassicalSimpleFunction { values })
}

/// Checks `g(—,q) = ∇ f̃⁻¹(]−∞,q[)` and `g(p,—) = ∇ f̃⁻¹(]p,+∞[)` between and beyond the coefficients.
pub fn preimage_table_conforms(
    space: &FiniteMeasurableSpace,
    frame: &CongruenceFrame,
    f: &ClassicalSimpleFunction,
    g: &SimpleFunction,
) -> Result<bool> {
    let cut = g.to_cut_function();
    let grid = f.level_sets().into_keys().collect();
    for r in sample_points(&grid) {
        if cut.lower_at(&r) != frame.closed(space.elem(f.below(&r))?)
            || cut.upper_at(&r) != frame.closed(space.elem(f.above(&r))?)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `λ^⋄` on `S(A)`: the sublocale of `∇_B` gets `λ(X ∖ B)`, so `μ(𝔬(A)) = λ(A)`.
pub fn extend_measure(space: &FiniteMeasurableSpace, frame: Arc<CongruenceFrame>) -> Result<Measure> {
    let values = frame
        .sublocales()
        .elements()
        .map(|theta| {
            let b = frame.closed_preimage(theta).ok_or_else(|| {
                Error::NotBoolean(format!("congruence {} is not closed", frame.lattice().name(theta)))
            })?;
            Ok(space.lambda(space.full() & !space.set(b)))
        })
        .collect::<Result<Vec<_>>>()?;
    Measure::validate(frame, values)
}

#[derive(Clone, Debug)]
pub struct BridgeReport {
    pub classical: SummabilityReport,
    pub localic: SummabilityReport,
    pub classical_value: Option<Extended>,
    pub localic_value: Option<Extended>,
}

impl BridgeReport {
    pub fn agrees(&self) -> bool {
        self.classical == self.localic && self.classical_value == self.localic_value
    }

    pub fn classification(&self) -> Classification {
        self.localic.classification
    }
}

/// Compares `∫_{A_sub} f̃ dλ` with `∫_{𝔬(A_sub)} f dλ^⋄`.
pub fn bridge_check(
    space: &FiniteMeasurableSpace,
    frame: Arc<CongruenceFrame>,
    f: &ClassicalSimpleFunction,
    over: PointSet,
) -> Result<BridgeReport> {
    let classical = classical_summability(space, f, over);
    let mu = extend_measure(space, frame.clone())?;
    let g = to_localic(space, &frame, f)?;
    let sub = frame.open(space.elem(over)?);
    let localic = summability(&g, &mu, sub)?;
    let localic_value = integrate_simple(&g, &mu, sub).ok().map(|(v, _)| v);
    Ok(BridgeReport { classical_value: classical.value(), classical, localic, localic_value })
}
