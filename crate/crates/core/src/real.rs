//! Measurable (extended) real functions as step ladders of rational cuts.
//!
//! A function `f` is determined by the images `f(p,—)` ("f > p") and
//! `f(—,q)` ("f < q") of the generators of the frame of reals. For the
//! functions handled here both are step functions of the rational argument:
//!
//! * `upper[i]` is `f(p,—)` for `p ∈ [t_i, t_{i+1})`, with `upper[0]` for `p < t_1`;
//! * `lower[i]` is `f(—,q)` for `q ∈ (t_i, t_{i+1}]`, with `lower[0]` for `q ≤ t_1`.
//!
//! Relations (R1) and (R2) force `upper[i]` and `lower[i]` to be complements,
//! so every ladder value is complemented in the carrier.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::congruence::CongruenceFrame;
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::rational::{format_rational, int, Extended, Rational};

#[derive(Clone)]
pub struct CutFunction {
    carrier: Arc<FiniteLattice>,
    breakpoints: Vec<Rational>,
    upper: Vec<Elem>,
    lower: Vec<Elem>,
}

pub(crate) fn same_carrier(a: &Arc<FiniteLattice>, b: &Arc<FiniteLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for CutFunction {
    fn eq(&self, other: &Self) -> bool {
        same_carrier(&self.carrier, &other.carrier)
            && self.breakpoints == other.breakpoints
            && self.upper == other.upper
            && self.lower == other.lower
    }
}

impl Eq for CutFunction {}

impl fmt::Debug for CutFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.carrier;
        f.debug_struct("CutFunction")
            .field("carrier", &l.label())
            .field("breakpoints", &self.breakpoints.iter().map(format_rational).collect::<Vec<_>>())
            .field("upper", &self.upper.iter().map(|&e| l.name(e)).collect::<Vec<_>>())
            .field("lower", &self.lower.iter().map(|&e| l.name(e)).collect::<Vec<_>>())
            .finish()
    }
}

impl CutFunction {
    /// Builds a function from explicit ladders, checks (R1)/(R2) and
    /// monotonicity, and normalises away redundant breakpoints.
    pub fn from_ladders(
        carrier: Arc<FiniteLattice>,
        breakpoints: Vec<Rational>,
        upper: Vec<Elem>,
        lower: Vec<Elem>,
    ) -> Result<Self> {
        let m = breakpoints.len();
        if upper.len() != m + 1 || lower.len() != m + 1 {
            return Err(Error::InvalidFunction(format!(
                "{m} breakpoints need ladders of length {}, got {} and {}",
                m + 1,
                upper.len(),
                lower.len()
            )));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFunction(format!(
                "breakpoints not strictly increasing at {} , {}",
                format_rational(&w[0]),
                format_rational(&w[1])
            )));
        }
        let l = carrier.as_ref();
        for e in upper.iter().chain(&lower) {
            if e.index() >= l.len() {
                return Err(Error::UnknownElement(format!("#{}", e.index())));
            }
        }
        for i in 0..m {
            if !l.leq(upper[i + 1], upper[i]) {
                return Err(Error::InvalidFunction(format!(
                    "f(p,—) is not antitone at p = {}",
                    format_rational(&breakpoints[i])
                )));
            }
            if !l.leq(lower[i], lower[i + 1]) {
                return Err(Error::InvalidFunction(format!(
                    "f(—,q) is not isotone at q = {}",
                    format_rational(&breakpoints[i])
                )));
            }
        }
        for i in 0..=m {
            let at = interval_name(&breakpoints, i);
            if l.meet(upper[i], lower[i]) != l.bottom() {
                return Err(Error::InvalidFunction(format!(
                    "(R1) fails on {at}: {} ∧ {} ≠ 0",
                    l.name(upper[i]),
                    l.name(lower[i])
                )));
            }
            if l.join(upper[i], lower[i]) != l.top() {
                return Err(Error::InvalidFunction(format!(
                    "(R2) fails on {at}: {} ∨ {} ≠ 1",
                    l.name(upper[i]),
                    l.name(lower[i])
                )));
            }
        }
        let mut f = CutFunction { carrier, breakpoints, upper, lower };
        f.normalize();
        Ok(f)
    }

    fn normalize(&mut self) {
        let mut bp = Vec::with_capacity(self.breakpoints.len());
        let mut up = vec![self.upper[0]];
        let mut lo = vec![self.lower[0]];
        for i in 0..self.breakpoints.len() {
            if self.upper[i + 1] != *up.last().unwrap() || self.lower[i + 1] != *lo.last().unwrap() {
                bp.push(self.breakpoints[i].clone());
                up.push(self.upper[i + 1]);
                lo.push(self.lower[i + 1]);
            }
        }
        self.breakpoints = bp;
        self.upper = up;
        self.lower = lo;
    }

    /// The (extended) constant `r`.
    pub fn constant(value: &Extended, carrier: Arc<FiniteLattice>) -> Self {
        let (top, bottom) = (carrier.top(), carrier.bottom());
        let mut f = match value {
            Extended::Finite(r) => CutFunction {
                breakpoints: vec![r.clone()],
                upper: vec![top, bottom],
                lower: vec![bottom, top],
                carrier,
            },
            Extended::PosInf => CutFunction { breakpoints: vec![], upper: vec![top], lower: vec![bottom], carrier },
            Extended::NegInf => CutFunction { breakpoints: vec![], upper: vec![bottom], lower: vec![top], carrier },
        };
        f.normalize();
        f
    }

    pub fn constant_rational(value: &Rational, carrier: Arc<FiniteLattice>) -> Self {
        Self::constant(&Extended::Finite(value.clone()), carrier)
    }

    pub fn zero(carrier: Arc<FiniteLattice>) -> Self {
        Self::constant_rational(&Rational::zero(), carrier)
    }

    /// `χ_a`: 1 on `a`, 0 on `a^c`.
    pub fn characteristic(a: Elem, carrier: Arc<FiniteLattice>) -> Result<Self> {
        let ac = carrier.complement(a)?;
        let (top, bottom) = (carrier.top(), carrier.bottom());
        CutFunction::from_ladders(carrier, vec![int(0), int(1)], vec![top, a, bottom], vec![bottom, ac, top])
    }

    pub fn from_sigma_scale(scale: &SigmaScale) -> Result<Self> {
        scale.validate()?;
        let l = scale.carrier.as_ref();
        let n = scale.phi.len();
        let mut lower = Vec::with_capacity(n);
        let mut acc = l.bottom();
        for &p in &scale.phi {
            acc = l.join(acc, p);
            lower.push(acc);
        }
        let mut upper = vec![l.bottom(); n];
        let mut acc = l.bottom();
        for i in (0..n).rev() {
            acc = l.join(acc, scale.witness[i]);
            upper[i] = acc;
        }
        CutFunction::from_ladders(scale.carrier.clone(), scale.thresholds.clone(), upper, lower)
    }

    /// The σ-scale `r ↦ f(—,r)` with witnesses `c_r = f(—,r)^c`.
    pub fn sigma_scale(&self) -> SigmaScale {
        SigmaScale {
            carrier: self.carrier.clone(),
            thresholds: self.breakpoints.clone(),
            phi: self.lower.clone(),
            witness: self.upper.clone(),
        }
    }

    pub fn carrier(&self) -> &Arc<FiniteLattice> {
        &self.carrier
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn upper(&self) -> &[Elem] {
        &self.upper
    }

    pub fn lower(&self) -> &[Elem] {
        &self.lower
    }

    /// `f(p,—)`.
    pub fn upper_at(&self, p: &Rational) -> Elem {
        self.upper[self.breakpoints.partition_point(|t| t <= p)]
    }

    /// `f(—,q)`.
    pub fn lower_at(&self, q: &Rational) -> Elem {
        self.lower[self.breakpoints.partition_point(|t| t < q)]
    }

    /// Member of `M(L)`: `⋁_p f(p,—) = 1 = ⋁_q f(—,q)`.
    pub fn is_finite(&self) -> bool {
        self.upper[0] == self.carrier.top() && *self.lower.last().unwrap() == self.carrier.top()
    }

    /// The region where `f = +∞`, i.e. `⋀_p f(p,—)`.
    pub fn infinity_region(&self) -> Elem {
        *self.upper.last().unwrap()
    }

    /// The region where `f = −∞`, i.e. `⋀_q f(—,q)`.
    pub fn negative_infinity_region(&self) -> Elem {
        self.lower[0]
    }

    /// Value on an atom of a Boolean carrier: the `v` with `x ≤ f(p,—)` iff `p < v`.
    pub fn value_at_atom(&self, atom: Elem) -> Extended {
        let l = &self.carrier;
        match self.upper.iter().position(|&u| !l.leq(atom, u)) {
            None => Extended::PosInf,
            Some(0) => Extended::NegInf,
            Some(i) => Extended::Finite(self.breakpoints[i - 1].clone()),
        }
    }

    fn check_carrier(&self, other: &CutFunction) -> Result<()> {
        if same_carrier(&self.carrier, &other.carrier) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    fn require_finite(&self, op: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NotFinite { op })
        }
    }

    /// `f ≤ g` iff `f(p,—) ≤ g(p,—)` for every `p` (checked dually on `f(—,q)` too).
    pub fn leq(&self, other: &CutFunction) -> Result<bool> {
        self.check_carrier(other)?;
        let l = &self.carrier;
        let grid = merged(&[self, other]);
        let up = upper_samples(&grid)
            .iter()
            .all(|p| l.leq(self.upper_at(p), other.upper_at(p)));
        let down = lower_samples(&grid)
            .iter()
            .all(|q| l.leq(other.lower_at(q), self.lower_at(q)));
        debug_assert_eq!(up, down);
        Ok(up && down)
    }

    pub fn is_nonnegative(&self) -> bool {
        CutFunction::zero(self.carrier.clone()).leq(self).unwrap_or(false)
    }

    pub fn add(&self, other: &CutFunction) -> Result<CutFunction> {
        self.check_carrier(other)?;
        self.require_finite("addition")?;
        other.require_finite("addition")?;
        self.add_unchecked(other)
    }

    /// The sum formula without the finiteness precondition.
    ///
    /// Used where one operand may be extended but never `−∞` against `+∞`.
    pub(crate) fn add_unchecked(&self, other: &CutFunction) -> Result<CutFunction> {
        let l = self.carrier.clone();
        let (f, g) = (self, other);
        let mut cands = BTreeSet::new();
        for a in &f.breakpoints {
            for b in &g.breakpoints {
                cands.insert(a + b);
            }
        }
        let upper = |p: &Rational| {
            let ts: BTreeSet<Rational> = f
                .breakpoints
                .iter()
                .cloned()
                .chain(g.breakpoints.iter().map(|b| p - b))
                .collect();
            l.join_all(sample_points(&ts).iter().map(|t| l.meet(f.upper_at(t), g.upper_at(&(p - t)))))
        };
        let lower = |q: &Rational| {
            let ts: BTreeSet<Rational> = f
                .breakpoints
                .iter()
                .cloned()
                .chain(g.breakpoints.iter().map(|b| q - b))
                .collect();
            l.join_all(sample_points(&ts).iter().map(|t| l.meet(f.lower_at(t), g.lower_at(&(q - t)))))
        };
        build(self.carrier.clone(), &cands, upper, lower)
    }

    pub fn sub(&self, other: &CutFunction) -> Result<CutFunction> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CutFunction {
        let mut bp: Vec<Rational> = self.breakpoints.iter().map(|t| -t).collect();
        bp.reverse();
        let mut upper = self.lower.clone();
        upper.reverse();
        let mut lower = self.upper.clone();
        lower.reverse();
        CutFunction { carrier: self.carrier.clone(), breakpoints: bp, upper, lower }
    }

    /// `λ·f`; `λ = 0` gives the constant 0 and `λ < 0` composes with negation.
    pub fn scale(&self, lambda: &Rational) -> CutFunction {
        if lambda.is_zero() {
            return CutFunction::zero(self.carrier.clone());
        }
        let positive = CutFunction {
            carrier: self.carrier.clone(),
            breakpoints: self.breakpoints.iter().map(|t| t * lambda.abs()).collect(),
            upper: self.upper.clone(),
            lower: self.lower.clone(),
        };
        if lambda.is_negative() {
            positive.neg()
        } else {
            positive
        }
    }

    /// `f·g` for `0 ≤ f ∧ g`.
    pub fn mul_nonneg(&self, other: &CutFunction) -> Result<CutFunction> {
        self.check_carrier(other)?;
        self.require_finite("multiplication")?;
        other.require_finite("multiplication")?;
        if !self.is_nonnegative() || !other.is_nonnegative() {
            return Err(Error::NegativeOperand);
        }
        let l = self.carrier.clone();
        let (f, g) = (self, other);
        let pos_f: Vec<&Rational> = f.breakpoints.iter().filter(|t| t.is_positive()).collect();
        let pos_g: Vec<&Rational> = g.breakpoints.iter().filter(|t| t.is_positive()).collect();
        let mut cands = BTreeSet::from([Rational::zero()]);
        for a in &pos_f {
            for b in &pos_g {
                cands.insert(*a * *b);
            }
        }
        let s_grid = |x: &Rational| -> Vec<Rational> {
            let mut ss: BTreeSet<Rational> = pos_f.iter().map(|a| (*a).clone()).collect();
            if x.is_positive() {
                ss.extend(pos_g.iter().map(|b| x / *b));
            }
            positive_samples(&ss)
        };
        let upper = |p: &Rational| {
            if p.is_negative() {
                return l.top();
            }
            l.join_all(s_grid(p).iter().map(|s| l.meet(f.upper_at(s), g.upper_at(&(p / s)))))
        };
        let lower = |q: &Rational| {
            if !q.is_positive() {
                return l.bottom();
            }
            l.join_all(s_grid(q).iter().map(|s| l.meet(f.lower_at(s), g.lower_at(&(q / s)))))
        };
        build(self.carrier.clone(), &cands, upper, lower)
    }

    pub fn join(&self, other: &CutFunction) -> Result<CutFunction> {
        self.check_carrier(other)?;
        let l = self.carrier.clone();
        let grid = merged(&[self, other]);
        build(
            self.carrier.clone(),
            &grid,
            |p| l.join(self.upper_at(p), other.upper_at(p)),
            |q| l.meet(self.lower_at(q), other.lower_at(q)),
        )
    }

    pub fn meet(&self, other: &CutFunction) -> Result<CutFunction> {
        self.check_carrier(other)?;
        let l = self.carrier.clone();
        let grid = merged(&[self, other]);
        build(
            self.carrier.clone(),
            &grid,
            |p| l.meet(self.upper_at(p), other.upper_at(p)),
            |q| l.join(self.lower_at(q), other.lower_at(q)),
        )
    }

    /// `(f ∨ g, f ∧ g)`.
    pub fn join_meet(&self, other: &CutFunction) -> Result<(CutFunction, CutFunction)> {
        Ok((self.join(other)?, self.meet(other)?))
    }

    /// `(f⁺, f⁻, |f|)`, checking `f = f⁺ − f⁻`.
    pub fn pos_neg_abs(&self) -> Result<(CutFunction, CutFunction, CutFunction)> {
        self.require_finite("positive/negative parts")?;
        let zero = CutFunction::zero(self.carrier.clone());
        let pos = self.join(&zero)?;
        let neg = self.neg().join(&zero)?;
        let abs = pos.add(&neg)?;
        if pos.sub(&neg)? != *self {
            return Err(Error::InvalidFunction("f ≠ f⁺ − f⁻".into()));
        }
        Ok((pos, neg, abs))
    }

    /// Composes every ladder value with `∇`, giving the same function in `F(L)`.
    pub fn lift(&self, frame: &CongruenceFrame) -> Result<CutFunction> {
        if !same_carrier(&self.carrier, frame.base()) {
            return Err(Error::CarrierMismatch);
        }
        CutFunction::from_ladders(
            frame.lattice().clone(),
            self.breakpoints.clone(),
            self.upper.iter().map(|&a| frame.closed(a)).collect(),
            self.lower.iter().map(|&a| frame.closed(a)).collect(),
        )
    }

    /// Inverse of [`Self::lift`] when every ladder value lies in `∇[L]`.
    pub fn unlift(&self, frame: &CongruenceFrame) -> Option<CutFunction> {
        if !same_carrier(&self.carrier, frame.lattice()) {
            return None;
        }
        let upper = self
            .upper
            .iter()
            .map(|&t| frame.closed_preimage(t))
            .collect::<Option<Vec<_>>>()?;
        let lower = self
            .lower
            .iter()
            .map(|&t| frame.closed_preimage(t))
            .collect::<Option<Vec<_>>>()?;
        CutFunction::from_ladders(frame.base().clone(), self.breakpoints.clone(), upper, lower).ok()
    }

    /// Ladders as `(breakpoints, upper names, lower names)` strings.
    pub fn describe(&self) -> (Vec<String>, Vec<String>, Vec<String>) {
        let l = &self.carrier;
        (
            self.breakpoints.iter().map(format_rational).collect(),
            self.upper.iter().map(|&e| l.name(e).to_string()).collect(),
            self.lower.iter().map(|&e| l.name(e).to_string()).collect(),
        )
    }
}

fn interval_name(bp: &[Rational], i: usize) -> String {
    let lo = if i == 0 { "-inf".to_string() } else { format_rational(&bp[i - 1]) };
    let hi = if i == bp.len() { "inf".to_string() } else { format_rational(&bp[i]) };
    format!("({lo}, {hi})")
}

fn merged(fs: &[&CutFunction]) -> BTreeSet<Rational> {
    fs.iter().flat_map(|f| f.breakpoints.iter().cloned()).collect()
}

/// The points, the midpoints between neighbours, and one point beyond each end.
pub(crate) fn sample_points(points: &BTreeSet<Rational>) -> Vec<Rational> {
    let (Some(first), Some(last)) = (points.first(), points.last()) else {
        return vec![Rational::zero()];
    };
    let two = int(2);
    let mut out = vec![first - Rational::one()];
    let mut prev: Option<&Rational> = None;
    for p in points {
        if let Some(q) = prev {
            out.push((q + p) / &two);
        }
        out.push(p.clone());
        prev = Some(p);
    }
    out.push(last + Rational::one());
    out
}

/// As [`sample_points`] restricted to `(0, ∞)` for the product's inner index.
fn positive_samples(points: &BTreeSet<Rational>) -> Vec<Rational> {
    let Some(first) = points.first() else {
        return vec![Rational::one()];
    };
    let mut out = vec![first / int(2)];
    out.extend(sample_points(points).into_iter().filter(|s| s.is_positive()));
    out
}

/// One representative `p` for each interval of a right-constant ladder.
fn upper_samples(grid: &BTreeSet<Rational>) -> Vec<Rational> {
    match grid.first() {
        None => vec![Rational::zero()],
        Some(first) => std::iter::once(first - Rational::one()).chain(grid.iter().cloned()).collect(),
    }
}

/// One representative `q` for each interval of a left-constant ladder.
fn lower_samples(grid: &BTreeSet<Rational>) -> Vec<Rational> {
    match grid.last() {
        None => vec![Rational::zero()],
        Some(last) => grid.iter().cloned().chain(std::iter::once(last + Rational::one())).collect(),
    }
}

/// Evaluates the result ladders once per interval of a grid that contains
/// every breakpoint of the result.
fn build(
    carrier: Arc<FiniteLattice>,
    grid: &BTreeSet<Rational>,
    upper: impl Fn(&Rational) -> Elem,
    lower: impl Fn(&Rational) -> Elem,
) -> Result<CutFunction> {
    let up = upper_samples(grid).iter().map(&upper).collect();
    let lo = lower_samples(grid).iter().map(&lower).collect();
    CutFunction::from_ladders(carrier, grid.iter().cloned().collect(), up, lo)
}

/// A finite σ-scale: thresholds `t_1 < … < t_m` and, on each of the `m+1`
/// intervals `(−∞,t_1], (t_1,t_2], …, (t_m,∞)`, a value `φ` and a witness `c`.
#[derive(Clone, Debug)]
pub struct SigmaScale {
    pub carrier: Arc<FiniteLattice>,
    pub thresholds: Vec<Rational>,
    pub phi: Vec<Elem>,
    pub witness: Vec<Elem>,
}

impl SigmaScale {
    pub fn validate(&self) -> Result<()> {
        let m = self.thresholds.len();
        if self.phi.len() != m + 1 || self.witness.len() != m + 1 {
            return Err(Error::InvalidScale(format!(
                "{m} thresholds need {} values and witnesses",
                m + 1
            )));
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidScale("thresholds not strictly increasing".into()));
        }
        let l = self.carrier.as_ref();
        for j in 0..=m {
            for k in j..=m {
                let (sj, rk) = (interval_name(&self.thresholds, j), interval_name(&self.thresholds, k));
                if l.meet(self.phi[j], self.witness[k]) != l.bottom() {
                    return Err(Error::InvalidScale(format!(
                        "φ(s) ∧ c_r ≠ 0 for s in {sj}, r in {rk}: {} ∧ {}",
                        l.name(self.phi[j]),
                        l.name(self.witness[k])
                    )));
                }
                if l.join(self.witness[j], self.phi[k]) != l.top() {
                    return Err(Error::InvalidScale(format!(
                        "c_r ∨ φ(s) ≠ 1 for r in {sj}, s in {rk}: {} ∨ {}",
                        l.name(self.witness[j]),
                        l.name(self.phi[k])
                    )));
                }
            }
        }
        Ok(())
    }

    /// `⋁φ = 1 = ⋁c`.
    pub fn is_finite(&self) -> bool {
        let l = &self.carrier;
        l.join_all(self.phi.iter().copied()) == l.top() && l.join_all(self.witness.iter().copied()) == l.top()
    }
}

fn complement_ladder(l: &FiniteLattice, values: &[Elem], points: &[Rational]) -> Result<Vec<Elem>> {
    values
        .iter()
        .zip(points)
        .map(|(&v, q)| {
            l.complement(v).map_err(|_| Error::ComplementationFailure {
                at: format_rational(q),
                value: l.name(v).to_string(),
                carrier: l.label().to_string(),
            })
        })
        .collect()
}

fn check_family(fs: &[CutFunction]) -> Result<Arc<FiniteLattice>> {
    let first = fs
        .first()
        .ok_or_else(|| Error::MalformedSpec("empty family of functions".into()))?;
    for f in &fs[1..] {
        first.check_carrier(f)?;
    }
    Ok(first.carrier.clone())
}

/// `inf_n f_n`: `(inf)(—,q) = ⋁_n f_n(—,q)` and `(inf)(p,—) = ⋁_{r>p} ((inf)(—,r))^c`.
pub fn seq_inf(fs: &[CutFunction]) -> Result<CutFunction> {
    let carrier = check_family(fs)?;
    let l = carrier.as_ref();
    let refs: Vec<&CutFunction> = fs.iter().collect();
    let grid = merged(&refs);
    let points = lower_samples(&grid);
    let lower: Vec<Elem> = points
        .iter()
        .map(|q| l.join_all(fs.iter().map(|f| f.lower_at(q))))
        .collect();
    let upper = complement_ladder(l, &lower, &points)?;
    CutFunction::from_ladders(carrier.clone(), grid.into_iter().collect(), upper, lower)
}

/// `sup_n f_n`: `(sup)(p,—) = ⋁_n f_n(p,—)` and `(sup)(—,q) = ⋁_{s<q} ((sup)(s,—))^c`.
pub fn seq_sup(fs: &[CutFunction]) -> Result<CutFunction> {
    let carrier = check_family(fs)?;
    let l = carrier.as_ref();
    let refs: Vec<&CutFunction> = fs.iter().collect();
    let grid = merged(&refs);
    let points = upper_samples(&grid);
    let upper: Vec<Elem> = points
        .iter()
        .map(|p| l.join_all(fs.iter().map(|f| f.upper_at(p))))
        .collect();
    let lower = complement_ladder(l, &upper, &points)?;
    CutFunction::from_ladders(carrier.clone(), grid.into_iter().collect(), upper, lower)
}

/// `f_1, …, f_{N−1}` followed by `tail` at every index `k ≥ N`.
#[derive(Clone, Debug)]
pub struct FunctionSequence {
    pub prefix: Vec<CutFunction>,
    pub tail: CutFunction,
}

impl FunctionSequence {
    pub fn new(prefix: Vec<CutFunction>, tail: CutFunction) -> Result<Self> {
        for f in &prefix {
            f.check_carrier(&tail)?;
        }
        Ok(FunctionSequence { prefix, tail })
    }

    /// First index from which the sequence equals its tail.
    pub fn stabilization_index(&self) -> usize {
        self.prefix.len() + 1
    }

    /// The `k`-th term, 1-based.
    pub fn term(&self, k: usize) -> &CutFunction {
        assert!(k >= 1, "sequence terms are 1-based");
        self.prefix.get(k - 1).unwrap_or(&self.tail)
    }

    fn suffix(&self, n: usize) -> Vec<CutFunction> {
        let mut out: Vec<CutFunction> = self.prefix[n..].to_vec();
        out.push(self.tail.clone());
        out
    }
}

/// `(liminf, limsup, lim)`; `lim` is present iff the first two agree.
pub fn liminf_limsup_lim(seq: &FunctionSequence) -> Result<(CutFunction, CutFunction, Option<CutFunction>)> {
    let n = seq.prefix.len();
    let infs = (0..=n).map(|i| seq_inf(&seq.suffix(i))).collect::<Result<Vec<_>>>()?;
    let sups = (0..=n).map(|i| seq_sup(&seq.suffix(i))).collect::<Result<Vec<_>>>()?;
    let liminf = seq_sup(&infs)?;
    let limsup = seq_inf(&sups)?;
    let lim = (liminf == limsup).then(|| liminf.clone());
    Ok((liminf, limsup, lim))
}
