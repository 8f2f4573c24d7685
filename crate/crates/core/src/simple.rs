//! Measurable simple functions `Σ r_i·χ_{a_i}` in canonical form.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::congruence::CongruenceFrame;
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::rational::{format_rational, Rational};
use crate::real::{same_carrier, CutFunction};

/// A simple function in canonical form: coefficients strictly increasing,
/// elements nonzero, pairwise disjoint, complemented, and covering the top.
#[derive(Clone)]
pub struct SimpleFunction {
    carrier: Arc<FiniteLattice>,
    terms: Vec<(Rational, Elem)>,
}

impl PartialEq for SimpleFunction {
    fn eq(&self, other: &Self) -> bool {
        same_carrier(&self.carrier, &other.carrier) && self.terms == other.terms
    }
}

impl Eq for SimpleFunction {}

impl fmt::Debug for SimpleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SimpleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, a)| format!("({},{})", format_rational(r), self.carrier.name(*a)))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl SimpleFunction {
    /// Canonical form of `Σ r_i·χ_{a_i}` for arbitrary complemented `a_i`.
    pub fn canonicalize(carrier: Arc<FiniteLattice>, terms: &[(Rational, Elem)]) -> Result<Self> {
        let l = carrier.as_ref();
        // atoms of the Boolean subalgebra generated so far, with accumulated coefficients
        let mut blocks: Vec<(Elem, Rational)> = vec![(l.top(), Rational::zero())];
        blocks.retain(|(b, _)| *b != l.bottom());
        for (r, a) in terms {
            let ac = l.complement(*a)?;
            let mut next = Vec::with_capacity(blocks.len() * 2);
            for (b, c) in blocks {
                let inside = l.meet(b, *a);
                let outside = l.meet(b, ac);
                if inside != l.bottom() {
                    next.push((inside, &c + r));
                }
                if outside != l.bottom() {
                    next.push((outside, c));
                }
            }
            blocks = next;
        }
        Ok(Self::merge(carrier, blocks))
    }

    /// Joins blocks with equal coefficients and sorts; blocks must be disjoint and cover the top.
    fn merge(carrier: Arc<FiniteLattice>, blocks: Vec<(Elem, Rational)>) -> Self {
        let l = carrier.as_ref();
        let mut terms: Vec<(Rational, Elem)> = Vec::new();
        for (b, c) in blocks {
            if b == l.bottom() {
                continue;
            }
            match terms.iter_mut().find(|(r, _)| *r == c) {
                Some(t) => t.1 = l.join(t.1, b),
                None => terms.push((c, b)),
            }
        }
        terms.sort_by(|x, y| x.0.cmp(&y.0));
        SimpleFunction { carrier, terms }
    }

    pub fn zero(carrier: Arc<FiniteLattice>) -> Self {
        Self::constant(&Rational::zero(), carrier)
    }

    pub fn constant(r: &Rational, carrier: Arc<FiniteLattice>) -> Self {
        let top = carrier.top();
        Self::merge(carrier, vec![(top, r.clone())])
    }

    /// `χ_a`.
    pub fn characteristic(a: Elem, carrier: Arc<FiniteLattice>) -> Result<Self> {
        Self::canonicalize(carrier, &[(Rational::from_integer(1.into()), a)])
    }

    pub fn carrier(&self) -> &Arc<FiniteLattice> {
        &self.carrier
    }

    pub fn terms(&self) -> &[(Rational, Elem)] {
        &self.terms
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Rational> {
        self.terms.iter().map(|(r, _)| r)
    }

    pub fn max_coefficient(&self) -> Option<&Rational> {
        self.terms.last().map(|(r, _)| r)
    }

    pub fn min_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(r, _)| r)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.min_coefficient().is_none_or(|r| !r.is_negative())
    }

    /// Ladders from the canonical table: `f(—,q)` steps through
    /// `0, a_1, a_1∨a_2, …, 1` and `f(p,—)` through `1, ⋁_{i≥2} a_i, …, a_n, 0`.
    pub fn to_cut_function(&self) -> CutFunction {
        let l = self.carrier.as_ref();
        let n = self.terms.len();
        let mut lower = vec![l.bottom()];
        let mut acc = l.bottom();
        for (_, a) in &self.terms {
            acc = l.join(acc, *a);
            lower.push(acc);
        }
        let mut upper = vec![l.bottom(); n + 1];
        let mut acc = l.bottom();
        for i in (0..n).rev() {
            acc = l.join(acc, self.terms[i].1);
            upper[i] = acc;
        }
        if n == 0 {
            // trivial carrier: 1 = 0
            upper[0] = l.top();
            lower[0] = l.top();
        }
        CutFunction::from_ladders(
            self.carrier.clone(),
            self.terms.iter().map(|(r, _)| r.clone()).collect(),
            upper,
            lower,
        )
        .expect("canonical tables satisfy (R1)/(R2)")
    }

    /// Reads a finite step function as `Σ t_i·χ_{f(—,q_i) ∧ f(—,q_{i−1})^c}`.
    pub fn from_cut(f: &CutFunction) -> Result<Self> {
        if !f.is_finite() {
            return Err(Error::NotFinite { op: "conversion to a simple function" });
        }
        let l = f.carrier().as_ref();
        let lower = f.lower();
        let mut terms = Vec::with_capacity(f.breakpoints().len());
        for (i, t) in f.breakpoints().iter().enumerate() {
            let below = l.complement(lower[i])?;
            terms.push((t.clone(), l.meet(lower[i + 1], below)));
        }
        Self::canonicalize(f.carrier().clone(), &terms)
    }

    fn check_carrier(&self, other: &SimpleFunction) -> Result<()> {
        if same_carrier(&self.carrier, &other.carrier) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    /// `Σ_{i,j} op(r_i, s_j)·χ_{a_i ∧ b_j}`.
    fn combine(&self, other: &SimpleFunction, op: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        self.check_carrier(other)?;
        let l = self.carrier.as_ref();
        let mut blocks = Vec::new();
        for (r, a) in &self.terms {
            for (s, b) in &other.terms {
                let ab = l.meet(*a, *b);
                if ab != l.bottom() {
                    blocks.push((ab, op(r, s)));
                }
            }
        }
        Ok(Self::merge(self.carrier.clone(), blocks))
    }

    pub fn add(&self, other: &SimpleFunction) -> Result<Self> {
        self.combine(other, |r, s| r + s)
    }

    pub fn sub(&self, other: &SimpleFunction) -> Result<Self> {
        self.combine(other, |r, s| r - s)
    }

    /// Product via the common refinement; defined for all signs.
    pub fn mul(&self, other: &SimpleFunction) -> Result<Self> {
        self.combine(other, |r, s| r * s)
    }

    pub fn scale(&self, lambda: &Rational) -> Self {
        let blocks = self.terms.iter().map(|(r, a)| (*a, r * lambda)).collect();
        Self::merge(self.carrier.clone(), blocks)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::from_integer(1.into()))
    }

    /// Applies `v ↦ op(v)` to every coefficient.
    pub fn map_coefficients(&self, op: impl Fn(&Rational) -> Rational) -> Self {
        let blocks = self.terms.iter().map(|(r, a)| (*a, op(r))).collect();
        Self::merge(self.carrier.clone(), blocks)
    }

    /// `g⁺`: the terms with nonnegative coefficient, zero elsewhere.
    pub fn positive_part(&self) -> Self {
        self.map_coefficients(|r| if r.is_negative() { Rational::zero() } else { r.clone() })
    }

    /// `g⁻ = −(Σ_{r_i<0} r_i·χ_{a_i})`.
    pub fn negative_part(&self) -> Self {
        self.map_coefficients(|r| if r.is_negative() { -r } else { Rational::zero() })
    }

    pub fn abs(&self) -> Self {
        self.map_coefficients(|r| r.abs())
    }

    /// Pointwise `≤` on the common refinement.
    pub fn leq(&self, other: &SimpleFunction) -> Result<bool> {
        let diff = other.sub(self)?;
        Ok(diff.is_nonnegative())
    }

    /// The same function on `C(L)`: `Σ r_i·χ_{∇_{a_i}}`.
    pub fn lift(&self, frame: &CongruenceFrame) -> Result<SimpleFunction> {
        if !same_carrier(&self.carrier, frame.base()) {
            return Err(Error::CarrierMismatch);
        }
        let terms: Vec<(Rational, Elem)> = self.terms.iter().map(|(r, a)| (r.clone(), frame.closed(*a))).collect();
        Self::canonicalize(frame.lattice().clone(), &terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn b4() -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::powerset(&["x", "y"]).unwrap())
    }

    fn sf(l: &Arc<FiniteLattice>, terms: &[(i64, i64, &str)]) -> SimpleFunction {
        let terms: Vec<(Rational, Elem)> = terms
            .iter()
            .map(|&(n, d, a)| (rat(n, d), l.elem(a).unwrap()))
            .collect();
        SimpleFunction::canonicalize(l.clone(), &terms).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let l = b4();
        assert_eq!(sf(&l, &[(1, 1, "x"), (1, 1, "1")]).to_string(), "[(1,y),(2,x)]");
        assert_eq!(sf(&l, &[]).to_string(), "[(0,1)]");
        assert_eq!(sf(&l, &[(2, 1, "x"), (3, 1, "y")]).to_string(), "[(2,x),(3,y)]");
        assert_eq!(sf(&l, &[(1, 1, "x")]).to_string(), "[(0,y),(1,x)]");
        let c3 = Arc::new(FiniteLattice::chain(&["0", "m", "1"]).unwrap());
        assert!(matches!(
            SimpleFunction::canonicalize(c3.clone(), &[(int(1), c3.elem("m").unwrap())]),
            Err(Error::NotComplemented { .. })
        ));
        let trivial = Arc::new(FiniteLattice::chain(&["0"]).unwrap());
        assert!(SimpleFunction::zero(trivial.clone()).terms().is_empty());
        assert_eq!(SimpleFunction::zero(trivial.clone()).to_cut_function(), CutFunction::zero(trivial));
    }

    #[test]
    fn tables() {
        let l = b4();
        let (x, y) = (l.elem("x").unwrap(), l.elem("y").unwrap());
        let f = sf(&l, &[(2, 1, "x"), (3, 1, "y")]).to_cut_function();
        assert_eq!(f.breakpoints(), &[int(2), int(3)]);
        assert_eq!(f.lower(), &[l.bottom(), x, l.top()]);
        assert_eq!(f.upper(), &[l.top(), y, l.bottom()]);
        assert_eq!(SimpleFunction::zero(l.clone()).to_cut_function(), CutFunction::zero(l.clone()));
        let chi = sf(&l, &[(0, 1, "y"), (1, 1, "x")]).to_cut_function();
        assert_eq!(chi, CutFunction::characteristic(x, l.clone()).unwrap());
        assert_eq!(SimpleFunction::from_cut(&f).unwrap(), sf(&l, &[(2, 1, "x"), (3, 1, "y")]));
    }

    #[test]
    fn ring_operations() {
        let l = b4();
        let g = sf(&l, &[(2, 1, "x"), (3, 1, "y")]);
        assert_eq!(sf(&l, &[(1, 1, "x")]).add(&sf(&l, &[(1, 1, "y")])).unwrap(), sf(&l, &[(1, 1, "1")]));
        assert_eq!(g.add(&SimpleFunction::zero(l.clone())).unwrap(), g);
        assert_eq!(g.add(&sf(&l, &[(1, 1, "x"), (-1, 1, "y")])).unwrap().to_string(), "[(2,y),(3,x)]");
        assert_eq!(g.scale(&int(-1)).to_string(), "[(-3,y),(-2,x)]");
        assert_eq!(g.scale(&int(0)), SimpleFunction::zero(l.clone()));
        assert_eq!(g.scale(&rat(1, 2)).to_string(), "[(1,x),(3/2,y)]");
        assert_eq!(sf(&l, &[(1, 1, "x")]).mul(&sf(&l, &[(1, 1, "y")])).unwrap(), SimpleFunction::zero(l.clone()));
        assert_eq!(g.mul(&sf(&l, &[(1, 1, "1")])).unwrap(), g);
        assert_eq!(g.mul(&g).unwrap().to_string(), "[(4,x),(9,y)]");
    }

    #[test]
    fn parts() {
        let l = b4();
        let g = sf(&l, &[(2, 1, "x"), (-3, 1, "y")]);
        assert_eq!(g.positive_part(), sf(&l, &[(2, 1, "x")]));
        assert_eq!(g.negative_part(), sf(&l, &[(3, 1, "y")]));
        assert_eq!(g.abs(), g.positive_part().add(&g.negative_part()).unwrap());
        assert!(g.positive_part().leq(&g.abs()).unwrap());
        assert!(!g.is_nonnegative());
    }
}
