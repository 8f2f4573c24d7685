//! Approximation of a nonnegative function from below by the simple functions
//! `f_k = Σ_{i≤k} (1/i)·χ_{a_i}`, with `a_1 = f(1,—)` and `a_k = (f − f_{k−1})(1/k,—)`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::congruence::CongruenceFrame;
use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::rational::{harmonic, int, Extended, Rational};
use crate::real::CutFunction;
use crate::simple::SimpleFunction;

pub const DEFAULT_HORIZON: u32 = 12;

#[derive(Clone, Debug)]
pub struct DecompositionStep {
    pub k: u32,
    pub a_k: Elem,
    pub f_k: SimpleFunction,
    /// `0 = t_0 < t_1 = 1/k < … < t_n = 1 + 1/2 + … + 1/k`.
    pub grid: Vec<Rational>,
    /// Largest value of `f − f_k`; `+∞` where `f` is infinite.
    pub residual: Extended,
    /// `a_k` agrees with `⋁_i (f(t_i,—)^c ∧ f(t_{i−1}+1/k,—)) ∨ f(t_n+1/k,—)` on the previous grid.
    pub closed_form_agrees: bool,
    /// The grid has the expected endpoints and gaps, and `f_k`'s ladders match the closed-form table.
    pub table_conforms: bool,
    /// Whether `a_k` lies in `∇[L]`; only known when the carrier is a congruence frame.
    pub in_closed_image: Option<bool>,
}

fn next_grid(prev: &[Rational], k: u32) -> Vec<Rational> {
    let step = Rational::one() / int(k as i64);
    let mut grid: BTreeSet<Rational> = prev.iter().cloned().collect();
    for w in prev.windows(2) {
        let cand = &w[0] + &step;
        if cand < w[1] {
            grid.insert(cand);
        }
    }
    grid.insert(prev.last().expect("grid is nonempty") + &step);
    grid.into_iter().collect()
}

fn grid_is_valid(grid: &[Rational], k: u32) -> bool {
    let step = Rational::one() / int(k as i64);
    grid.len() >= 2
        && grid[0].is_zero()
        && grid[1] == step
        && *grid.last().unwrap() == harmonic(k)
        && grid.windows(2).all(|w| w[0] < w[1] && &w[1] - &w[0] <= step)
}

/// `⋁_{i=1}^{n} (f(t_i,—)^c ∧ f(t_{i−1}+1/k,—)) ∨ f(t_n+1/k,—)` over the grid of `f_{k−1}`.
fn closed_form_a_k(f: &CutFunction, prev_grid: &[Rational], k: u32) -> Result<Elem> {
    let l = f.carrier().as_ref();
    let step = Rational::one() / int(k as i64);
    let mut acc = f.upper_at(&(prev_grid.last().unwrap() + &step));
    for w in prev_grid.windows(2) {
        let ti_c = l.complement(f.upper_at(&w[1]))?;
        acc = l.join(acc, l.meet(ti_c, f.upper_at(&(&w[0] + &step))));
    }
    Ok(acc)
}

/// The ladder table: `f_k(p,—) = f(t_j,—)` on `[t_{j−1}, t_j)` and `f_k(—,q) = f(t_j,—)^c` on `(t_{j−1}, t_j]`.
fn table(f: &CutFunction, grid: &[Rational]) -> Result<CutFunction> {
    let carrier = f.carrier().clone();
    let l = carrier.as_ref();
    let mut upper = vec![l.top()];
    let mut lower = vec![l.bottom()];
    for t in &grid[1..] {
        let v = f.upper_at(t);
        upper.push(v);
        lower.push(l.complement(v).map_err(|_| Error::ComplementationFailure {
            at: crate::rational::format_rational(t),
            value: l.name(v).to_string(),
            carrier: l.label().to_string(),
        })?);
    }
    upper.push(l.bottom());
    lower.push(l.top());
    CutFunction::from_ladders(carrier.clone(), grid.to_vec(), upper, lower)
}

fn residual(f: &CutFunction, f_k: &SimpleFunction) -> Result<Extended> {
    if f.infinity_region() != f.carrier().bottom() {
        return Ok(Extended::PosInf);
    }
    let diff = SimpleFunction::from_cut(f)?.sub(f_k)?;
    Ok(diff
        .max_coefficient()
        .cloned()
        .map(Extended::Finite)
        .unwrap_or_else(Extended::zero))
}

/// The first `horizon` terms of the approximating sequence.
pub fn decompose(f: &CutFunction, horizon: u32) -> Result<Vec<DecompositionStep>> {
    if !f.is_nonnegative() {
        return Err(Error::NotNonnegative);
    }
    let carrier = f.carrier().clone();
    let mut steps: Vec<DecompositionStep> = Vec::with_capacity(horizon as usize);
    let mut prev = SimpleFunction::zero(carrier.clone());
    let mut prev_grid: Vec<Rational> = Vec::new();
    for k in 1..=horizon {
        let inv_k = Rational::one() / int(k as i64);
        let (a_k, grid, closed_form_agrees) = if k == 1 {
            (f.upper_at(&Rational::one()), vec![Rational::zero(), Rational::one()], true)
        } else {
            let diff = f.add_unchecked(&prev.to_cut_function().neg())?;
            let a_k = diff.upper_at(&inv_k);
            let expected = closed_form_a_k(f, &prev_grid, k)?;
            (a_k, next_grid(&prev_grid, k), a_k == expected)
        };
        let f_k = prev.add(&SimpleFunction::canonicalize(carrier.clone(), &[(inv_k, a_k)])?)?;
        let table_conforms = grid_is_valid(&grid, k) && table(f, &grid)? == f_k.to_cut_function();
        steps.push(DecompositionStep {
            k,
            a_k,
            residual: residual(f, &f_k)?,
            f_k: f_k.clone(),
            grid: grid.clone(),
            closed_form_agrees,
            table_conforms,
            in_closed_image: None,
        });
        prev = f_k;
        prev_grid = grid;
    }
    Ok(steps)
}

/// [`decompose`] on `C(L)`, recording for each `a_k` whether it is a closed congruence.
pub fn decompose_on_frame(frame: &CongruenceFrame, f: &CutFunction, horizon: u32) -> Result<Vec<DecompositionStep>> {
    let mut steps = decompose(f, horizon)?;
    for s in &mut steps {
        s.in_closed_image = Some(frame.closed_preimage(s.a_k).is_some());
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FiniteLattice;
    use crate::rational::rat;
    use std::sync::Arc;

    fn two() -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::chain(&["0", "1"]).unwrap())
    }

    #[test]
    fn constant_one() {
        let l = two();
        let steps = decompose(&CutFunction::constant_rational(&int(1), l.clone()), 7).unwrap();
        let value = |k: usize| steps[k - 1].f_k.clone();
        assert_eq!(value(1), SimpleFunction::zero(l.clone()));
        assert_eq!(value(2), SimpleFunction::constant(&rat(1, 2), l.clone()));
        assert_eq!(value(3), SimpleFunction::constant(&rat(5, 6), l.clone()));
        assert_eq!(value(7), SimpleFunction::constant(&rat(41, 42), l.clone()));
        assert!(steps.iter().all(|s| s.table_conforms && s.closed_form_agrees));
        assert_eq!(steps[6].residual, Extended::Finite(rat(1, 42)));
    }

    #[test]
    fn characteristic() {
        let l = Arc::new(FiniteLattice::powerset(&["x", "y"]).unwrap());
        let x = l.elem("x").unwrap();
        let steps = decompose(&CutFunction::characteristic(x, l.clone()).unwrap(), 3).unwrap();
        let chi = SimpleFunction::characteristic(x, l.clone()).unwrap();
        assert_eq!(steps[0].f_k, SimpleFunction::zero(l.clone()));
        assert_eq!(steps[1].f_k, chi.scale(&rat(1, 2)));
        assert_eq!(steps[2].f_k, chi.scale(&rat(5, 6)));
    }

    #[test]
    fn zero_and_negative() {
        let l = two();
        let steps = decompose(&CutFunction::zero(l.clone()), 5).unwrap();
        assert!(steps.iter().all(|s| s.f_k == SimpleFunction::zero(l.clone()) && s.table_conforms));
        assert!(matches!(
            decompose(&CutFunction::constant_rational(&int(-1), l.clone()), 3),
            Err(Error::NotNonnegative)
        ));
    }

    #[test]
    fn residual_bound_needs_small_functions() {
        // max(f − f_k) ≤ 1/k at every k only when sup f ≤ 2; for 3 it holds from k = 10 on.
        let l = two();
        let steps = decompose(&CutFunction::constant_rational(&int(3), l.clone()), 12).unwrap();
        assert_eq!(steps[0].residual, Extended::Finite(int(2)));
        let first_good = steps
            .iter()
            .position(|s| s.residual <= Extended::Finite(rat(1, s.k as i64)))
            .unwrap();
        assert_eq!(first_good + 1, 10);
        assert!(steps[first_good..].iter().all(|s| s.residual <= Extended::Finite(rat(1, s.k as i64))));
        let two_steps = decompose(&CutFunction::constant_rational(&int(2), l), 12).unwrap();
        assert!(two_steps.iter().all(|s| s.residual <= Extended::Finite(rat(1, s.k as i64))));
    }

    #[test]
    fn infinite_function() {
        let l = two();
        let steps = decompose(&CutFunction::constant(&Extended::PosInf, l.clone()), 4).unwrap();
        assert_eq!(steps[3].f_k, SimpleFunction::constant(&harmonic(4), l.clone()));
        assert!(steps.iter().all(|s| s.table_conforms && s.closed_form_agrees));
        assert_eq!(steps[3].residual, Extended::PosInf);
    }
}
