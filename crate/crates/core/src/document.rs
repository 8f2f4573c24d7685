//! JSON documents for lattices, functions, measures and measurable spaces.
//!
//! Rationals are strings such as `"3/2"` or `"-4"`; infinite values are `"inf"`/`"-inf"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::classical::{ClassicalSimpleFunction, FiniteMeasurableSpace, PointSet};
use crate::congruence::CongruenceFrame;
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::measure::Measure;
use crate::rational::{parse_rational, Extended, Rational};
use crate::real::CutFunction;
use crate::simple::SimpleFunction;

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::MalformedSpec(format!("{what} document: {e}")))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LatticeDoc {
    Powerset { atoms: Vec<String> },
    Poset { elements: Vec<String>, leq: Vec<(String, String)> },
}

impl LatticeDoc {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text, "lattice")
    }

    pub fn build(&self) -> Result<FiniteLattice> {
        match self {
            LatticeDoc::Powerset { atoms } => FiniteLattice::powerset(atoms),
            LatticeDoc::Poset { elements, leq } => FiniteLattice::from_order(elements, leq),
        }
    }
}

pub fn load_lattice(text: &str) -> Result<FiniteLattice> {
    LatticeDoc::parse(text)?.build()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionDoc {
    Simple { terms: Vec<(String, String)> },
    Cut { breakpoints: Vec<String>, upper: Vec<String>, lower: Vec<String> },
    Constant { value: String },
    /// A classical function on the points of a measurable space.
    Pointwise { values: BTreeMap<String, String> },
}

fn is_congruence_ref(text: &str) -> bool {
    let t = text.trim();
    t.starts_with("open:") || t.starts_with("closed:") || t.starts_with('{')
}

impl FunctionDoc {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text, "function")
    }

    /// True when some element reference names a congruence rather than an element of `L`.
    pub fn mentions_congruences(&self) -> bool {
        match self {
            FunctionDoc::Simple { terms } => terms.iter().any(|(_, a)| is_congruence_ref(a)),
            FunctionDoc::Cut { upper, lower, .. } => upper.iter().chain(lower).any(|a| is_congruence_ref(a)),
            FunctionDoc::Constant { .. } | FunctionDoc::Pointwise { .. } => false,
        }
    }

    fn build(&self, carrier: Arc<FiniteLattice>, resolve: impl Fn(&str) -> Result<Elem>) -> Result<CutFunction> {
        match self {
            FunctionDoc::Simple { terms } => {
                let terms = terms
                    .iter()
                    .map(|(r, a)| Ok((parse_rational(r)?, resolve(a)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SimpleFunction::canonicalize(carrier, &terms)?.to_cut_function())
            }
            FunctionDoc::Cut { breakpoints, upper, lower } => {
                let bp = breakpoints.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>()?;
                let up = upper.iter().map(|a| resolve(a)).collect::<Result<Vec<_>>>()?;
                let lo = lower.iter().map(|a| resolve(a)).collect::<Result<Vec<_>>>()?;
                CutFunction::from_ladders(carrier, bp, up, lo)
            }
            FunctionDoc::Constant { value } => Ok(CutFunction::constant(&Extended::parse(value)?, carrier)),
            FunctionDoc::Pointwise { .. } => Err(Error::MalformedSpec(
                "a pointwise function needs a measurable space (use the bridge command)".into(),
            )),
        }
    }

    /// The function on `L` itself; element references must name elements of `L`.
    pub fn on_lattice(&self, l: &Arc<FiniteLattice>) -> Result<CutFunction> {
        if self.mentions_congruences() {
            return Err(Error::MalformedSpec(
                "function mentions congruences; it lives on C(L), not on L".into(),
            ));
        }
        self.build(l.clone(), |a| l.resolve(a))
    }

    /// The function on `C(L)`; a bare element `a` of `L` stands for `∇_a`.
    pub fn on_frame(&self, frame: &CongruenceFrame) -> Result<CutFunction> {
        self.build(frame.lattice().clone(), |a| frame.resolve_congruence(a))
    }

    pub fn classical(&self, space: &FiniteMeasurableSpace) -> Result<ClassicalSimpleFunction> {
        let FunctionDoc::Pointwise { values } = self else {
            return Err(Error::MalformedSpec("the bridge needs a pointwise function".into()));
        };
        let mut out: Vec<Option<Rational>> = vec![None; space.points().len()];
        for (point, v) in values {
            let i = space
                .points()
                .iter()
                .position(|p| p == point)
                .ok_or_else(|| Error::UnknownElement(point.clone()))?;
            out[i] = Some(parse_rational(v)?);
        }
        let values = out
            .into_iter()
            .zip(space.points())
            .map(|(v, p)| v.ok_or_else(|| Error::MalformedSpec(format!("no value for point `{p}`"))))
            .collect::<Result<Vec<_>>>()?;
        ClassicalSimpleFunction::new(space, values)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    /// Value on every sublocale.
    #[serde(default)]
    pub values: Option<BTreeMap<String, String>>,
    /// Boolean `L` only: weights on the atoms of `L`, `μ(𝔬(a)) = Σ_{x ≤ a} w(x)`.
    #[serde(default)]
    pub on_open_weights: Option<BTreeMap<String, String>>,
    /// Weights on the atoms of `S(L)`, extended additively.
    #[serde(default)]
    pub atom_weights: Option<BTreeMap<String, String>>,
}

impl MeasureDoc {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text, "measure")
    }

    pub fn build(&self, frame: Arc<CongruenceFrame>) -> Result<Measure> {
        match (&self.values, &self.on_open_weights, &self.atom_weights) {
            (Some(values), None, None) => {
                let s = frame.sublocales();
                let mut out: Vec<Option<Extended>> = vec![None; frame.len()];
                for (r, v) in values {
                    let e = s.resolve(r)?;
                    let v = Extended::parse(v)?;
                    match &out[e.index()] {
                        Some(prev) if *prev != v => {
                            return Err(Error::MalformedSpec(format!(
                                "sublocale `{r}` is given two different values"
                            )))
                        }
                        _ => out[e.index()] = Some(v),
                    }
                }
                let values = out
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.ok_or_else(|| {
                            Error::MalformedSpec(format!("no value for sublocale {}", s.name(Elem::new(i))))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Measure::validate(frame, values)
            }
            (None, Some(weights), None) => {
                let l = frame.base().clone();
                let w = weights
                    .iter()
                    .map(|(a, v)| Ok((l.resolve(a)?, Extended::parse(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                Measure::from_weights(frame, &w)
            }
            (None, None, Some(weights)) => {
                let s = frame.sublocales();
                let w = weights
                    .iter()
                    .map(|(a, v)| Ok((s.resolve(a)?, Extended::parse(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                Measure::from_atom_weights(frame, &w)
            }
            _ => Err(Error::MalformedSpec(
                "measure document needs exactly one of `values`, `on_open_weights`, `atom_weights`".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AlgebraDoc {
    Named(String),
    Family(Vec<Vec<String>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    #[serde(default)]
    pub algebra: Option<AlgebraDoc>,
    pub lambda: BTreeMap<String, String>,
}

impl SpaceDoc {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text, "space")
    }

    pub fn build(&self) -> Result<FiniteMeasurableSpace> {
        let index = |p: &str| {
            self.points
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| Error::UnknownElement(p.to_string()))
        };
        let family: Option<Vec<PointSet>> = match &self.algebra {
            None => None,
            Some(AlgebraDoc::Named(n)) if n == "powerset" => None,
            Some(AlgebraDoc::Named(n)) => {
                return Err(Error::MalformedSpec(format!("unknown algebra `{n}` (expected \"powerset\" or a list of subsets)")))
            }
            Some(AlgebraDoc::Family(sets)) => Some(
                sets.iter()
                    .map(|set| set.iter().try_fold(0u64, |acc, p| Ok::<_, Error>(acc | (1u64 << index(p)?))))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let lambda = self
            .lambda
            .iter()
            .map(|(name, v)| {
                let set = match name.trim() {
                    "0" | "∅" => 0,
                    other => other.split('|').try_fold(0u64, |acc, p| Ok::<_, Error>(acc | (1u64 << index(p.trim())?)))?,
                };
                Ok((set, Extended::parse(v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteMeasurableSpace::new(&self.points, family.as_deref(), &lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn lattices() {
        let b4 = load_lattice(r#"{"kind":"powerset","atoms":["x","y"]}"#).unwrap();
        assert_eq!(b4.len(), 4);
        let c3 = load_lattice(r#"{"kind":"poset","elements":["0","m","1"],"leq":[["0","m"],["m","1"]]}"#).unwrap();
        assert!(c3.leq(c3.elem("0").unwrap(), c3.elem("1").unwrap()));
        assert!(matches!(load_lattice(r#"{"kind":"tree"}"#), Err(Error::MalformedSpec(_))));
        assert!(matches!(load_lattice("not json"), Err(Error::MalformedSpec(_))));
    }

    #[test]
    fn functions_and_measures() {
        let l = Arc::new(load_lattice(r#"{"kind":"powerset","atoms":["x","y"]}"#).unwrap());
        let frame = Arc::new(CongruenceFrame::enumerate(l.clone()).unwrap());
        let doc = FunctionDoc::parse(r#"{"kind":"simple","terms":[["2","x"],["3","y"]]}"#).unwrap();
        assert!(!doc.mentions_congruences());
        let on_l = doc.on_lattice(&l).unwrap();
        assert_eq!(on_l.lift(&frame).unwrap(), doc.on_frame(&frame).unwrap());
        let on_open = FunctionDoc::parse(r#"{"kind":"simple","terms":[["2","open:y"],["3","closed:y"]]}"#).unwrap();
        assert!(on_open.on_lattice(&l).is_err());
        assert_eq!(on_open.on_frame(&frame).unwrap(), doc.on_frame(&frame).unwrap());
        let k = FunctionDoc::parse(r#"{"kind":"constant","value":"7/2"}"#).unwrap();
        assert_eq!(k.on_lattice(&l).unwrap().breakpoints(), &[Rational::new(7.into(), 2.into())]);

        let mu = MeasureDoc::parse(r#"{"on_open_weights":{"x":"2","y":"3"}}"#).unwrap().build(frame.clone()).unwrap();
        let same = MeasureDoc::parse(r#"{"values":{"void":"0","open:x":"2","open:y":"3","L":"5"}}"#)
            .unwrap()
            .build(frame.clone())
            .unwrap();
        assert_eq!(mu, same);
        assert!(MeasureDoc::parse(r#"{"values":{"void":"0","L":"5"}}"#).unwrap().build(frame.clone()).is_err());
        assert!(MeasureDoc::parse(r#"{}"#).unwrap().build(frame).is_err());
    }

    #[test]
    fn spaces() {
        let space = SpaceDoc::parse(r#"{"points":["x","y"],"algebra":"powerset","lambda":{"x":"2","y":"inf"}}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(space.lambda(0b11), Extended::PosInf);
        let f = FunctionDoc::parse(r#"{"kind":"pointwise","values":{"x":"2","y":"-3"}}"#)
            .unwrap()
            .classical(&space)
            .unwrap();
        assert_eq!(f.values(), &[int(2), int(-3)]);
        let coarse = SpaceDoc::parse(r#"{"points":["a","b"],"algebra":[[],["a","b"]],"lambda":{"a|b":"1"}}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(coarse.algebra().len(), 2);
    }
}
