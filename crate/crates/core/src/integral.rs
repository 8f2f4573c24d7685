//! The integral of simple functions on `C(L)` against a measure on `S(L)`,
//! and its extension to arbitrary (extended) step functions as a supremum.
//!
//! A term `r_i·χ_{e_i}` of a simple function on `C(L)` names the sublocale
//! `S_i` with `θ_{S_i} = e_i^c`, and contributes `r_i·μ(S_i ∧ S)`.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::measure::Measure;
use crate::rational::{Extended, Rational};
use crate::real::{same_carrier, CutFunction};
use crate::simple::SimpleFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Both part integrals finite.
    Summable,
    /// Exactly one part integral infinite.
    IntegrableNotSummable,
    /// Both part integrals infinite.
    NotIntegrable,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Summable => "summable",
            Classification::IntegrableNotSummable => "integrable-not-summable",
            Classification::NotIntegrable => "not-integrable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummabilityReport {
    pub positive: Extended,
    pub negative: Extended,
    pub classification: Classification,
}

impl SummabilityReport {
    pub fn from_parts(positive: Extended, negative: Extended) -> Self {
        let classification = match (positive.is_finite(), negative.is_finite()) {
            (true, true) => Classification::Summable,
            (false, false) => Classification::NotIntegrable,
            _ => Classification::IntegrableNotSummable,
        };
        SummabilityReport { positive, negative, classification }
    }

    /// `∫g⁺ − ∫g⁻`, undefined when both are infinite.
    pub fn value(&self) -> Option<Extended> {
        self.positive.checked_sub(&self.negative)
    }
}

fn check_integrand(g: &SimpleFunction, mu: &Measure) -> Result<()> {
    if same_carrier(g.carrier(), mu.frame().lattice()) {
        Ok(())
    } else {
        Err(Error::CarrierMismatch)
    }
}

/// `μ(S_e ∧ S)` where `θ_{S_e} = e^c`.
fn term_measure(mu: &Measure, term: Elem, over: Elem) -> Result<&Extended> {
    let frame = mu.frame();
    let theta = frame.complement(term)?;
    Ok(mu.value(frame.sublocales().meet(theta, over)))
}

/// `Σ r_i·μ(S_i ∧ S)` for nonnegative coefficients, with `0·∞ = 0`.
fn nonnegative_sum<'a>(mu: &Measure, terms: impl IntoIterator<Item = (&'a Rational, Elem)>, over: Elem) -> Result<Extended> {
    let mut total = Extended::zero();
    for (r, e) in terms {
        let part = term_measure(mu, e, over)?.scale(r);
        total = total.checked_add(&part).expect("nonnegative terms");
    }
    Ok(total)
}

/// Part integrals of `g` over `S` and the resulting classification.
pub fn summability(g: &SimpleFunction, mu: &Measure, over: Elem) -> Result<SummabilityReport> {
    check_integrand(g, mu)?;
    let pos = g.positive_part();
    let neg = g.negative_part();
    let p = nonnegative_sum(mu, pos.terms().iter().map(|(r, e)| (r, *e)), over)?;
    let n = nonnegative_sum(mu, neg.terms().iter().map(|(r, e)| (r, *e)), over)?;
    Ok(SummabilityReport::from_parts(p, n))
}

/// `∫_S g dμ` together with its summability report.
pub fn integrate_simple(g: &SimpleFunction, mu: &Measure, over: Elem) -> Result<(Extended, SummabilityReport)> {
    let report = summability(g, mu, over)?;
    match report.value() {
        Some(v) => Ok((v, report)),
        None => Err(Error::NotIntegrable { over: mu.frame().sublocales().name(over) }),
    }
}

/// `Σ r_i·μ(S_i ∧ S)` evaluated on an arbitrary pairwise-disjoint representation.
pub fn integrate_representation(terms: &[(Rational, Elem)], mu: &Measure, over: Elem) -> Result<Extended> {
    let zero = Rational::zero();
    let pos = nonnegative_sum(
        mu,
        terms.iter().filter(|(r, _)| *r >= zero).map(|(r, e)| (r, *e)),
        over,
    )?;
    let negated: Vec<(Rational, Elem)> = terms.iter().filter(|(r, _)| *r < zero).map(|(r, e)| (-r, *e)).collect();
    let neg = nonnegative_sum(mu, negated.iter().map(|(r, e)| (r, *e)), over)?;
    pos.checked_sub(&neg)
        .ok_or_else(|| Error::NotIntegrable { over: mu.frame().sublocales().name(over) })
}

/// `(∫_S g dμ, ∫ g·χ_{θ_S^c} dμ)`; the two agree for complemented `S`.
pub fn restrict_vs_multiply(g: &SimpleFunction, mu: &Measure, over: Elem) -> Result<(Extended, Extended)> {
    let frame = mu.frame();
    let indicator = SimpleFunction::characteristic(frame.complement(over)?, g.carrier().clone())?;
    let restricted = integrate_simple(g, mu, over)?.0;
    let multiplied = integrate_simple(&g.mul(&indicator)?, mu, frame.sublocales().whole())?.0;
    Ok((restricted, multiplied))
}

/// `η(S) = ∫_S g dμ` for nonnegative `g`, validated as a measure.
pub fn indefinite_integral(g: &SimpleFunction, mu: &Measure) -> Result<Measure> {
    check_integrand(g, mu)?;
    if !g.is_nonnegative() {
        return Err(Error::NotNonnegative);
    }
    let frame = mu.frame().clone();
    let values = frame
        .sublocales()
        .elements()
        .map(|s| integrate_simple(g, mu, s).map(|(v, _)| v))
        .collect::<Result<Vec<_>>>()?;
    Measure::validate(frame, values)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonnegativityCertificate {
    /// `θ_S^c ∧ g(—,0) = 0` in `C(L)`.
    pub side_condition: bool,
    pub integral: Extended,
}

/// Evaluates the side condition under which `∫_S g dμ ≥ 0` for a signed `g`.
pub fn nonnegativity_certificate(g: &SimpleFunction, mu: &Measure, over: Elem) -> Result<NonnegativityCertificate> {
    check_integrand(g, mu)?;
    let frame = mu.frame();
    let c = frame.lattice();
    let below_zero = g.to_cut_function().lower_at(&Rational::zero());
    let side_condition = c.meet(frame.complement(over)?, below_zero) == c.bottom();
    let integral = integrate_simple(g, mu, over)?.0;
    Ok(NonnegativityCertificate { side_condition, integral })
}

/// `sup{∫_S g dμ | 0 ≤ g ≤ f, g simple}` for nonnegative `f`.
fn integrate_nonnegative(f: &CutFunction, mu: &Measure, over: Elem) -> Result<Extended> {
    let c = f.carrier().as_ref();
    let infinite = f.infinity_region();
    if infinite != c.bottom() && !term_measure(mu, infinite, over)?.is_zero() {
        return Ok(Extended::PosInf);
    }
    // The staircase through f's own values; the null region where f = ∞ adds nothing.
    let lower = f.lower();
    let mut terms = vec![(Rational::zero(), infinite)];
    for (i, t) in f.breakpoints().iter().enumerate() {
        terms.push((t.clone(), c.meet(lower[i + 1], c.complement(lower[i])?)));
    }
    let staircase = SimpleFunction::canonicalize(f.carrier().clone(), &terms)?;
    Ok(integrate_simple(&staircase, mu, over)?.0)
}

/// `∫_S f dμ = ∫_S f⁺ dμ − ∫_S f⁻ dμ` for an (extended) step function on `C(L)`.
pub fn integrate_general(f: &CutFunction, mu: &Measure, over: Elem) -> Result<Extended> {
    if !same_carrier(f.carrier(), mu.frame().lattice()) {
        return Err(Error::CarrierMismatch);
    }
    let zero = CutFunction::zero(f.carrier().clone());
    let pos = f.join(&zero)?;
    let neg = f.neg().join(&zero)?;
    let p = integrate_nonnegative(&pos, mu, over)?;
    let n = integrate_nonnegative(&neg, mu, over)?;
    p.checked_sub(&n)
        .ok_or_else(|| Error::NotIntegrable { over: mu.frame().sublocales().name(over) })
}
