//! The seeded property suite behind `sigma-integral verify` and the acceptance tests.
//!
//! Every criterion draws its own random corpus from `seed`, so a run is
//! reproducible criterion by criterion.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::{bridge_check, FiniteMeasurableSpace, ClassicalSimpleFunction, PointSet};
use crate::congruence::CongruenceFrame;
use crate::decompose::{decompose_on_frame, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::integral::{
    indefinite_integral, integrate_general, integrate_representation, integrate_simple, nonnegativity_certificate,
    restrict_vs_multiply, summability, Classification,
};
use crate::lattice::{Elem, FiniteLattice};
use crate::measure::Measure;
use crate::rational::{format_rational, harmonic, int, rat, Extended, Rational};
use crate::real::{liminf_limsup_lim, CutFunction, FunctionSequence};
use crate::simple::SimpleFunction;

pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub cases: usize,
    /// One line per failed check; capped so a systematic failure stays readable.
    pub failures: Vec<String>,
    pub failure_count: usize,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
    /// How often each named law was actually exercised (conditional laws fire only when their hypotheses hold).
    pub tallies: BTreeMap<&'static str, usize>,
}

impl CriterionReport {
    fn new(id: u32, title: &'static str, budget: Option<Duration>) -> Self {
        CriterionReport { id, title, cases: 0, failures: Vec::new(), failure_count: 0, elapsed: Duration::ZERO, budget, tallies: BTreeMap::new() }
    }

    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed <= b)
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.within_budget()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.fail(what());
        }
    }

    fn law(&mut self, name: &'static str, holds: bool, context: &str) {
        *self.tallies.entry(name).or_default() += 1;
        self.check(holds, || format!("{context}: {name} fails"));
    }

    fn fail(&mut self, what: String) {
        self.failure_count += 1;
        if self.failures.len() < 10 {
            self.failures.push(what);
        }
    }

    /// Records `Err` results as failures and returns the `Ok` value.
    fn ok<T>(&mut self, r: Result<T>, context: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{context}: {e}"));
                None
            }
        }
    }
}

/// A lattice together with its congruence frame.
pub struct CorpusLattice {
    pub name: &'static str,
    pub lattice: Arc<FiniteLattice>,
    pub frame: Arc<CongruenceFrame>,
}

impl CorpusLattice {
    fn new(name: &'static str, lattice: FiniteLattice) -> Result<Self> {
        let lattice = Arc::new(lattice);
        let frame = Arc::new(CongruenceFrame::enumerate(lattice.clone())?);
        Ok(CorpusLattice { name, lattice, frame })
    }

    /// The carrier on which functions are integrated.
    pub fn carrier(&self) -> &Arc<FiniteLattice> {
        self.frame.lattice()
    }
}

/// C3, B4, 2³, 2⁴, and the non-Boolean products 2×C3 and C3×C3.
pub fn corpus() -> Result<Vec<CorpusLattice>> {
    let c2 = FiniteLattice::chain(&["0", "1"])?;
    let c3 = FiniteLattice::chain(&["0", "m", "1"])?;
    Ok(vec![
        CorpusLattice::new("C3", c3.clone())?,
        CorpusLattice::new("B4", FiniteLattice::powerset(&["x", "y"])?)?,
        CorpusLattice::new("2^3", FiniteLattice::powerset(&["a", "b", "c"])?)?,
        CorpusLattice::new("2^4", FiniteLattice::powerset(&["a", "b", "c", "d"])?)?,
        CorpusLattice::new("2xC3", c2.product(&c3)?)?,
        CorpusLattice::new("C3xC3", c3.product(&c3)?)?,
    ])
}

fn rng_for(seed: u64, criterion: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(criterion).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn random_rational(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    let den = rng.gen_range(1..=4);
    rat(rng.gen_range(lo * den..=hi * den), den)
}

fn random_element(rng: &mut impl Rng, l: &FiniteLattice) -> Elem {
    *l.elements().collect::<Vec<_>>().choose(rng).expect("lattice is nonempty")
}

fn random_complemented(rng: &mut impl Rng, l: &FiniteLattice) -> Elem {
    *l.complemented_elements().choose(rng).expect("top is complemented")
}

/// A disjoint complemented cover of the top, by repeated splitting.
fn random_partition(rng: &mut impl Rng, l: &FiniteLattice) -> Vec<Elem> {
    let mut blocks = vec![l.top()];
    for _ in 0..rng.gen_range(0..=3) {
        let i = rng.gen_range(0..blocks.len());
        let c = random_complemented(rng, l);
        let b = blocks[i];
        let inside = l.meet(b, c);
        let outside = l.meet(b, l.complement(c).expect("complemented"));
        if inside != l.bottom() && outside != l.bottom() {
            blocks[i] = inside;
            blocks.push(outside);
        }
    }
    blocks
}

fn random_terms(rng: &mut impl Rng, l: &FiniteLattice, lo: i64, hi: i64) -> Vec<(Rational, Elem)> {
    random_partition(rng, l)
        .into_iter()
        .map(|b| (random_coefficient(rng, lo, hi), b))
        .collect()
}

fn random_coefficient(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    // Small integers are over-represented so that coefficients collide and merge.
    if rng.gen_bool(0.3) {
        int(rng.gen_range(lo..=hi))
    } else {
        random_rational(rng, lo, hi)
    }
}

fn random_simple(rng: &mut impl Rng, l: &Arc<FiniteLattice>, lo: i64, hi: i64) -> SimpleFunction {
    SimpleFunction::canonicalize(l.clone(), &random_terms(rng, l, lo, hi)).expect("partition blocks are complemented")
}

fn random_weight(rng: &mut impl Rng, infinite_odds: f64) -> Extended {
    if rng.gen_bool(infinite_odds) {
        Extended::PosInf
    } else if rng.gen_bool(0.15) {
        Extended::zero()
    } else {
        Extended::Finite(random_rational(rng, 0, 5))
    }
}

/// Random weights on the atoms of `S(L)`; `C(L)` is Boolean, so any weighting is a measure.
fn random_measure(rng: &mut impl Rng, frame: &Arc<CongruenceFrame>, infinite_odds: f64) -> Result<Measure> {
    let atoms = frame.sublocales().atoms();
    let weights: Vec<(Elem, Extended)> = atoms.into_iter().map(|a| (a, random_weight(rng, infinite_odds))).collect();
    Measure::from_atom_weights(frame.clone(), &weights)
}

fn random_sublocale(rng: &mut impl Rng, frame: &CongruenceFrame) -> Elem {
    random_element(rng, frame.lattice())
}

fn show(v: &Extended) -> String {
    v.to_string()
}

fn timed(mut report: CriterionReport, start: Instant) -> CriterionReport {
    report.elapsed = start.elapsed();
    report
}

/// Criterion 1: classical and localic integrals agree on random finite measure spaces.
pub fn bridge_equivalence(seed: u64, cases: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(1, "bridge-oracle equivalence", Some(Duration::from_secs(10)));
    let mut rng = rng_for(seed, 1);
    // The powerset algebra depends only on |X|, so one frame per size serves every case.
    let mut frames: Vec<Option<Arc<CongruenceFrame>>> = vec![None; 6];
    for case in 0..cases {
        let n = rng.gen_range(1..=5usize);
        let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let lambda: Vec<(PointSet, Extended)> = (0..n).map(|i| (1u64 << i, random_weight(&mut rng, 0.1))).collect();
        let Some(space) = r.ok(FiniteMeasurableSpace::new(&points, None, &lambda), "space") else { continue };
        let frame = match &frames[n] {
            Some(frame) => frame.clone(),
            None => {
                let Some(frame) = r.ok(CongruenceFrame::enumerate(space.algebra().clone()), "frame") else { continue };
                let frame = Arc::new(frame);
                frames[n] = Some(frame.clone());
                frame
            }
        };
        let values: Vec<Rational> = (0..n).map(|_| random_coefficient(&mut rng, -4, 4)).collect();
        let Some(f) = r.ok(ClassicalSimpleFunction::new(&space, values.clone()), "function") else { continue };
        let over: PointSet = rng.gen_range(0..(1u64 << n));
        let Some(report) = r.ok(bridge_check(&space, frame, &f, over), "bridge") else { continue };
        r.cases += 1;
        // Pointwise sums, independent of level sets and of the lattice machinery.
        let (mut pos, mut neg) = (Extended::zero(), Extended::zero());
        for (i, v) in values.iter().enumerate() {
            if over & (1 << i) == 0 {
                continue;
            }
            let part = space.lambda(1 << i).scale(&v.abs());
            if v.is_negative() {
                neg = neg.checked_add(&part).expect("nonnegative");
            } else {
                pos = pos.checked_add(&part).expect("nonnegative");
            }
        }
        let expected_class = match (pos.is_finite(), neg.is_finite()) {
            (true, true) => Classification::Summable,
            (false, false) => Classification::NotIntegrable,
            _ => Classification::IntegrableNotSummable,
        };
        r.check(
            report.agrees()
                && report.classification() == expected_class
                && report.localic_value == pos.checked_sub(&neg),
            || {
                format!(
                    "case {case}: f = {:?} over {} gives classical {:?} / localic {:?} ({}), pointwise {}",
                    values.iter().map(format_rational).collect::<Vec<_>>(),
                    space.name(over),
                    report.classical_value.as_ref().map(show),
                    report.localic_value.as_ref().map(show),
                    report.classification(),
                    expected_class
                )
            },
        );
    }
    timed(r, start)
}

/// Criterion 2: `S ↦ ∫_S g dμ` passes measure validation.
pub fn indefinite_is_measure(seed: u64, corpus: &[CorpusLattice], per_lattice: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(2, "indefinite integral is a measure", Some(Duration::from_secs(20)));
    let mut rng = rng_for(seed, 2);
    for c in corpus {
        for _ in 0..per_lattice {
            let Some(mu) = r.ok(random_measure(&mut rng, &c.frame, 0.1), c.name) else { continue };
            let g = random_simple(&mut rng, c.carrier(), 0, 5);
            r.cases += 1;
            if let Some(eta) = r.ok(indefinite_integral(&g, &mu), &format!("{}: g = {g}", c.name)) {
                // η agrees with the integral sublocale by sublocale, and revalidates.
                let consistent = c.frame.sublocales().elements().all(|s| {
                    integrate_simple(&g, &mu, s).map(|(v, _)| v).ok().as_ref() == Some(eta.value(s))
                });
                r.check(consistent, || format!("{}: η differs from ∫_S g for g = {g}", c.name));
                r.ok(Measure::validate(c.frame.clone(), eta.values().to_vec()), &format!("{}: g = {g}", c.name));
            }
        }
    }
    timed(r, start)
}

/// Criterion 3: ring laws, and agreement of simple-function arithmetic with ladder arithmetic.
pub fn subring_laws(seed: u64, corpus: &[CorpusLattice], per_lattice: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(3, "subring laws", None);
    let mut rng = rng_for(seed, 3);
    for c in corpus {
        let l = c.carrier();
        let zero = SimpleFunction::zero(l.clone());
        let one = SimpleFunction::constant(&Rational::one(), l.clone());
        for _ in 0..per_lattice {
            let g = random_simple(&mut rng, l, -4, 4);
            let h = random_simple(&mut rng, l, -4, 4);
            let k = random_simple(&mut rng, l, -4, 4);
            let (lam, nu) = (random_rational(&mut rng, -3, 3), random_rational(&mut rng, -3, 3));
            r.cases += 1;
            let laws = (|| -> Result<Vec<(&'static str, bool)>> {
                Ok(vec![
                    ("additive associativity", g.add(&h)?.add(&k)? == g.add(&h.add(&k)?)?),
                    ("additive commutativity", g.add(&h)? == h.add(&g)?),
                    ("additive identity", g.add(&zero)? == g),
                    ("additive inverse", g.add(&g.neg())? == zero),
                    ("multiplicative associativity", g.mul(&h)?.mul(&k)? == g.mul(&h.mul(&k)?)?),
                    ("multiplicative commutativity", g.mul(&h)? == h.mul(&g)?),
                    ("multiplicative identity", g.mul(&one)? == g),
                    ("distributivity", g.mul(&h.add(&k)?)? == g.mul(&h)?.add(&g.mul(&k)?)?),
                    ("scaling distributes", g.add(&h)?.scale(&lam) == g.scale(&lam).add(&h.scale(&lam))?),
                    ("scaling composes", g.scale(&nu).scale(&lam) == g.scale(&(&lam * &nu))),
                    ("scaling is a product", g.scale(&lam) == SimpleFunction::constant(&lam, l.clone()).mul(&g)?),
                    ("sum on ladders", g.add(&h)?.to_cut_function() == g.to_cut_function().add(&h.to_cut_function())?),
                    ("difference on ladders", g.sub(&h)?.to_cut_function() == g.to_cut_function().sub(&h.to_cut_function())?),
                    ("negation on ladders", g.neg().to_cut_function() == g.to_cut_function().neg()),
                    ("scaling on ladders", g.scale(&lam).to_cut_function() == g.to_cut_function().scale(&lam)),
                    (
                        "product on ladders",
                        {
                            let (ga, ha) = (g.abs(), h.abs());
                            ga.mul(&ha)?.to_cut_function() == ga.to_cut_function().mul_nonneg(&ha.to_cut_function())?
                        },
                    ),
                    ("round trip", SimpleFunction::from_cut(&g.to_cut_function())? == g),
                ])
            })();
            if let Some(laws) = r.ok(laws, &format!("{}: g = {g}, h = {h}, k = {k}", c.name)) {
                let ctx = format!("{}: g = {g}, h = {h}, k = {k}, λ = {lam}", c.name);
                for (name, holds) in laws {
                    r.law(name, holds, &ctx);
                }
            }
        }
    }
    timed(r, start)
}

/// A representation of `g` that splits blocks along random complemented
/// elements, splits coefficients into two summands, and shuffles the result.
fn random_representation(rng: &mut impl Rng, g: &SimpleFunction) -> Vec<(Rational, Elem)> {
    let l = g.carrier();
    let mut terms = Vec::new();
    for (coef, b) in g.terms() {
        let c = random_complemented(rng, l);
        let pieces = [l.meet(*b, c), l.meet(*b, l.complement(c).expect("complemented"))];
        for p in pieces.into_iter().filter(|&p| p != l.bottom()) {
            if rng.gen_bool(0.3) {
                let part = random_rational(rng, -2, 2);
                terms.push((coef - &part, p));
                terms.push((part, p));
            } else {
                terms.push((coef.clone(), p));
            }
        }
    }
    terms.shuffle(rng);
    terms
}

/// Criterion 4: canonical form is unique and idempotent.
pub fn canonical_uniqueness(seed: u64, corpus: &[CorpusLattice], per_lattice: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(4, "canonical-form uniqueness", None);
    let mut rng = rng_for(seed, 4);
    for c in corpus {
        let l = c.carrier();
        for _ in 0..per_lattice {
            let g = random_simple(&mut rng, l, -4, 4);
            let terms = random_representation(&mut rng, &g);
            let mut permuted = terms.clone();
            permuted.shuffle(&mut rng);
            r.cases += 1;
            let Some(from_refined) = r.ok(SimpleFunction::canonicalize(l.clone(), &terms), c.name) else { continue };
            let Some(from_permuted) = r.ok(SimpleFunction::canonicalize(l.clone(), &permuted), c.name) else { continue };
            let Some(again) = r.ok(SimpleFunction::canonicalize(l.clone(), g.terms()), c.name) else { continue };
            r.check(from_refined == g && from_permuted == g, || {
                format!("{}: {g} re-canonicalized from a refinement gives {from_refined} / {from_permuted}", c.name)
            });
            r.check(again == g, || format!("{}: canonicalize is not idempotent on {g}", c.name));
            let ordered = g.terms().windows(2).all(|w| w[0].0 < w[1].0)
                && g.terms().iter().all(|(_, a)| *a != l.bottom())
                && l.join_all(g.terms().iter().map(|t| t.1)) == l.top();
            r.check(ordered, || format!("{}: {g} is not in canonical shape", c.name));
        }
    }
    timed(r, start)
}

/// Criterion 5: iterated ladder addition of `r_i·χ_{a_i}` matches the closed-form table.
pub fn evaluation_tables(seed: u64, corpus: &[CorpusLattice], per_lattice: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(5, "evaluation tables", None);
    let mut rng = rng_for(seed, 5);
    for c in corpus {
        let l = c.carrier();
        for _ in 0..per_lattice {
            let g = random_simple(&mut rng, l, -4, 4);
            r.cases += 1;
            let summed = g.terms().iter().try_fold(CutFunction::zero(l.clone()), |acc, (coef, a)| {
                acc.add(&CutFunction::characteristic(*a, l.clone())?.scale(coef))
            });
            let Some(summed) = r.ok(summed, &format!("{}: {g}", c.name)) else { continue };
            r.check(summed == g.to_cut_function(), || format!("{}: iterated sum of {g} differs from its table", c.name));
            // g(p,—) = ⋁{a_i | r_i > p}, g(—,q) = ⋁{a_i | r_i < q}, sampled at, between and beyond the r_i.
            let mut points: Vec<Rational> = Vec::new();
            let coefs: Vec<&Rational> = g.coefficients().collect();
            for (i, c0) in coefs.iter().enumerate() {
                points.push((*c0).clone());
                if let Some(c1) = coefs.get(i + 1) {
                    points.push((*c0 + *c1) / int(2));
                }
            }
            points.push(coefs[0] - Rational::one());
            points.push(coefs[coefs.len() - 1] + Rational::one());
            for p in &points {
                let above = l.join_all(g.terms().iter().filter(|(x, _)| x > p).map(|t| t.1));
                let below = l.join_all(g.terms().iter().filter(|(x, _)| x < p).map(|t| t.1));
                r.check(summed.upper_at(p) == above && summed.lower_at(p) == below, || {
                    format!("{}: ladders of {g} disagree with the table at {}", c.name, format_rational(p))
                });
            }
        }
    }
    timed(r, start)
}

/// Criterion 6: the approximating sequence `f_k` up to `K = 12`.
///
/// The residual bound `max(f − f_k) ≤ 1/k` holds for every `k` exactly when `sup f ≤ 2`
/// (at `k = 1` the residual is `sup f − 1`), so the corpus draws coefficients from `[0, 2]`.
pub fn decomposition(seed: u64, corpus: &[CorpusLattice], per_lattice: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(6, "decomposition", None);
    let mut rng = rng_for(seed, 6);
    let k_max = DEFAULT_HORIZON;

    // Milestones for the constant 1 on the two-element chain.
    let two = CorpusLattice::new("2", FiniteLattice::chain(&["0", "1"]).expect("chain")).expect("frame");
    let one = CutFunction::constant_rational(&Rational::one(), two.carrier().clone());
    if let Some(steps) = r.ok(decompose_on_frame(&two.frame, &one, k_max), "constant 1") {
        r.cases += 1;
        for (k, expected) in [(2usize, rat(1, 2)), (3, rat(5, 6)), (7, rat(41, 42))] {
            let got = &steps[k - 1].f_k;
            r.check(*got == SimpleFunction::constant(&expected, two.carrier().clone()), || {
                format!("constant 1: f_{k} = {got}, expected {}", format_rational(&expected))
            });
        }
    }

    for c in corpus {
        let l = c.carrier();
        let mut fs = vec![SimpleFunction::zero(l.clone()), SimpleFunction::constant(&Rational::one(), l.clone())];
        for _ in 0..per_lattice {
            fs.push(random_simple(&mut rng, l, 0, 2));
        }
        for f in fs {
            let cut = f.to_cut_function();
            let Some(steps) = r.ok(decompose_on_frame(&c.frame, &cut, k_max), &format!("{}: f = {f}", c.name)) else {
                continue;
            };
            r.cases += 1;
            for (i, s) in steps.iter().enumerate() {
                let k = s.k;
                let step = Rational::one() / int(k as i64);
                let grid_ok = s.grid.first().is_some_and(|t| t.is_zero())
                    && s.grid.get(1) == Some(&step)
                    && s.grid.last() == Some(&harmonic(k))
                    && s.grid.windows(2).all(|w| w[0] < w[1] && &w[1] - &w[0] <= step);
                r.check(grid_ok, || format!("{}: f = {f}, k = {k}: grid has the wrong shape", c.name));
                r.check(s.table_conforms && s.closed_form_agrees, || {
                    format!("{}: f = {f}, k = {k}: f_k = {} does not match the table", c.name, s.f_k)
                });
                let below_f = s.f_k.to_cut_function().leq(&cut).unwrap_or(false);
                let increasing = steps.get(i + 1).is_none_or(|next| s.f_k.leq(&next.f_k).unwrap_or(false));
                r.check(below_f && increasing, || format!("{}: f = {f}: f_{k} is not between f_{} and f", c.name, k - 1));
                r.check(s.residual <= Extended::Finite(step.clone()), || {
                    format!("{}: f = {f}: residual {} at k = {k} exceeds 1/{k}", c.name, s.residual)
                });
            }
        }
    }
    timed(r, start)
}

/// Criterion 7: the laws of the integral on random corpora.
pub fn integral_laws(seed: u64, corpus: &[CorpusLattice], per_lattice: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(7, "integral laws", None);
    let mut rng = rng_for(seed, 7);
    for c in corpus {
        let l = c.carrier();
        let s_view = c.frame.sublocales();
        for _ in 0..per_lattice {
            let Some(mu) = r.ok(random_measure(&mut rng, &c.frame, 0.15), c.name) else { continue };
            let g = random_simple(&mut rng, l, -4, 4);
            let h = random_simple(&mut rng, l, -4, 4);
            let s = random_sublocale(&mut rng, &c.frame);
            let t = s_view.join(s, random_sublocale(&mut rng, &c.frame));
            let lam = random_rational(&mut rng, -3, 3);
            let ctx = format!("{}: g = {g}, h = {h}, S = {}", c.name, s_view.name(s));
            r.cases += 1;
            let int = |f: &SimpleFunction, over: Elem| integrate_simple(f, &mu, over).ok().map(|(v, _)| v);
            let outcome = (|| -> Result<Vec<(&'static str, bool)>> {
                let mut checks = Vec::new();
                let ig = int(&g, s);
                let ih = int(&h, s);
                let sum = g.add(&h)?;
                let isum = int(&sum, s);

                if let Some(ig) = &ig {
                    checks.push(("scalar linearity", int(&g.scale(&lam), s) == Some(ig.scale(&lam))));
                }
                if let (Some(a), Some(b), Some(ab)) = (&ig, &ih, &isum) {
                    if let Some(expected) = a.checked_add(b) {
                        checks.push(("additivity", *ab == expected));
                    }
                }
                // h + k with k ≥ 0 dominates h.
                let k = random_simple(&mut rng, l, 0, 3);
                let bigger = h.add(&k)?;
                if let (Some(a), Some(b)) = (&ih, int(&bigger, s)) {
                    checks.push(("monotonicity", *a <= b));
                }
                let cert = nonnegativity_certificate(&h.sub(&g)?, &mu, s);
                if let (Ok(cert), Some(a), Some(b)) = (cert, &ig, &ih) {
                    if cert.side_condition {
                        checks.push(("relaxed monotonicity", a <= b));
                    }
                }
                let gp = g.abs();
                if let (Some(a), Some(b)) = (int(&gp, s), int(&gp, t)) {
                    checks.push(("monotonicity in the sublocale", a <= b));
                }
                if let Some(ig) = &ig {
                    // Pairwise-disjoint refinements only: split coefficients would overlap.
                    let disjoint: Vec<(Rational, Elem)> =
                        g.terms().iter().flat_map(|(x, b)| refine_block(&mut rng, l, x, *b)).collect();
                    checks.push(("representation independence", integrate_representation(&disjoint, &mu, s)? == *ig));
                    let (left, right) = restrict_vs_multiply(&g, &mu, s)?;
                    checks.push(("restriction equals product", left == right && left == *ig));
                    let cert = nonnegativity_certificate(&g, &mu, s)?;
                    if cert.side_condition {
                        checks.push(("nonnegativity certificate", cert.integral.is_nonnegative()));
                    }
                }
                let sg = summability(&g, &mu, s)?;
                let sh = summability(&h, &mu, s)?;
                if sg.classification == Classification::Summable && sh.classification == Classification::Summable {
                    let ss = summability(&sum, &mu, s)?;
                    checks.push((
                        "summable closure",
                        ss.classification == Classification::Summable
                            && ss.value() == sg.value().and_then(|a| a.checked_add(&sh.value().expect("summable"))),
                    ));
                }
                Ok(checks)
            })();
            if let Some(checks) = r.ok(outcome, &ctx) {
                for (name, holds) in checks {
                    r.law(name, holds, &ctx);
                }
            }
        }
    }
    timed(r, start)
}

fn refine_block(rng: &mut impl Rng, l: &FiniteLattice, coef: &Rational, b: Elem) -> Vec<(Rational, Elem)> {
    let c = random_complemented(rng, l);
    [l.meet(b, c), l.meet(b, l.complement(c).expect("complemented"))]
        .into_iter()
        .filter(|&p| p != l.bottom())
        .map(|p| (coef.clone(), p))
        .collect()
}

/// Criterion 8: liminf/limsup on eventually constant sequences.
pub fn limits(seed: u64, corpus: &[CorpusLattice], per_lattice: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(8, "limits", None);
    let mut rng = rng_for(seed, 8);

    let two = Arc::new(FiniteLattice::chain(&["0", "1"]).expect("chain"));
    let harmonic_terms: Vec<CutFunction> =
        (1..=10).map(|n| CutFunction::constant_rational(&rat(1, n), two.clone())).collect();
    let seq = FunctionSequence::new(harmonic_terms, CutFunction::zero(two.clone()));
    if let Some((_, _, lim)) = r.ok(seq.and_then(|s| liminf_limsup_lim(&s)), "1/n") {
        r.cases += 1;
        r.check(lim == Some(CutFunction::zero(two.clone())), || format!("lim 1/n = {lim:?}, expected 0"));
    }

    for c in corpus {
        let l = c.carrier();
        for _ in 0..per_lattice {
            let len = rng.gen_range(0..=4);
            let mut draw = || -> (Vec<CutFunction>, CutFunction) {
                let prefix = (0..len).map(|_| random_simple(&mut rng, l, -3, 3).to_cut_function()).collect();
                (prefix, random_simple(&mut rng, l, -3, 3).to_cut_function())
            };
            let (fp, ft) = draw();
            let (gp, gt) = draw();
            let ctx = format!("{}: sequence pair #{}", c.name, r.cases);
            r.cases += 1;
            let outcome = (|| -> Result<Vec<(&'static str, bool)>> {
                let sum_prefix = fp.iter().zip(&gp).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>>>()?;
                let (fi, fs, _) = liminf_limsup_lim(&FunctionSequence::new(fp, ft.clone())?)?;
                let (gi, gs, _) = liminf_limsup_lim(&FunctionSequence::new(gp, gt.clone())?)?;
                let (si, ss, _) = liminf_limsup_lim(&FunctionSequence::new(sum_prefix, ft.add(&gt)?)?)?;
                Ok(vec![
                    ("liminf ≤ limsup", fi.leq(&fs)? && gi.leq(&gs)? && si.leq(&ss)?),
                    ("superadditivity of liminf", fi.add(&gi)?.leq(&si)?),
                    ("subadditivity of limsup", ss.leq(&fs.add(&gs)?)?),
                    ("eventually constant sequences converge", fi == ft && fs == ft),
                ])
            })();
            if let Some(checks) = r.ok(outcome, &ctx) {
                for (name, holds) in checks {
                    r.law(name, holds, &ctx);
                }
            }
        }
    }
    timed(r, start)
}

/// A nonnegative extended function: `+∞` on `e`, `g` elsewhere.
fn infinite_on(g: &SimpleFunction, e: Elem) -> Result<CutFunction> {
    let l = g.carrier();
    let ec = l.complement(e)?;
    let spike = CutFunction::from_ladders(l.clone(), vec![Rational::zero()], vec![l.top(), e], vec![l.bottom(), ec])?;
    g.to_cut_function().join(&spike)
}

/// Criterion 9: the general integral agrees with the simple one and dominates random minorants.
pub fn general_integral(seed: u64, corpus: &[CorpusLattice], per_lattice: usize, minorants: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(9, "general-integral consistency", None);
    let mut rng = rng_for(seed, 9);
    for c in corpus {
        let l = c.carrier();
        let s_view = c.frame.sublocales();
        for _ in 0..per_lattice {
            let Some(mu) = r.ok(random_measure(&mut rng, &c.frame, 0.1), c.name) else { continue };
            let g = random_simple(&mut rng, l, -4, 4);
            let s = random_sublocale(&mut rng, &c.frame);
            let ctx = format!("{}: f = {g}, S = {}", c.name, s_view.name(s));
            r.cases += 1;
            let simple = integrate_simple(&g, &mu, s).map(|(v, _)| v);
            let general = integrate_general(&g.to_cut_function(), &mu, s);
            match (simple, general) {
                (Ok(a), Ok(b)) => r.check(a == b, || format!("{ctx}: simple {a} vs general {b}")),
                (Err(Error::NotIntegrable { .. }), Err(Error::NotIntegrable { .. })) => {}
                (a, b) => r.fail(format!("{ctx}: simple {a:?} vs general {b:?}")),
            }

            let mass = mu.value(s).clone();
            let inf = integrate_general(&CutFunction::constant(&Extended::PosInf, l.clone()), &mu, s);
            r.check(
                inf.as_ref().ok() == Some(&if mass.is_zero() { Extended::zero() } else { Extended::PosInf }),
                || format!("{ctx}: constant ∞ over a sublocale of measure {mass} gives {inf:?}"),
            );

            // Nonnegative f, possibly infinite on a random complemented region.
            let base = g.abs();
            let e = if rng.gen_bool(0.5) { random_complemented(&mut rng, l) } else { l.bottom() };
            let Some(f) = r.ok(infinite_on(&base, e), &ctx) else { continue };
            let Some(sup) = r.ok(integrate_general(&f, &mu, s), &ctx) else { continue };
            let Some(ec) = r.ok(l.complement(e), &ctx) else { continue };
            let infinite_mass = mu.value(s_view.meet(c.frame.complement(e).expect("complemented"), s));
            let expected = if e != l.bottom() && !infinite_mass.is_zero() {
                Some(Extended::PosInf)
            } else {
                SimpleFunction::characteristic(ec, l.clone())
                    .and_then(|chi| base.mul(&chi))
                    .and_then(|off| integrate_simple(&off, &mu, s))
                    .ok()
                    .map(|(v, _)| v)
            };
            r.check(expected.as_ref() == Some(&sup), || format!("{ctx}: ∞ on {}: sup {sup}, expected {expected:?}", l.name(e)));
            let zero = CutFunction::zero(l.clone());
            for _ in 0..minorants {
                let h = random_simple(&mut rng, l, -1, 6).to_cut_function();
                let below = h.meet(&f).and_then(|m| m.join(&zero)).and_then(|m| SimpleFunction::from_cut(&m));
                let Some(minorant) = r.ok(below, &ctx) else { break };
                match integrate_simple(&minorant, &mu, s) {
                    Ok((v, _)) => r.check(v <= sup, || format!("{ctx}: minorant {minorant} integrates to {v} > {sup}")),
                    Err(e) => r.fail(format!("{ctx}: minorant {minorant}: {e}")),
                }
            }
        }
    }
    timed(r, start)
}

/// Case counts for a run of the suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteSize {
    pub bridge_cases: usize,
    pub indefinite_per_lattice: usize,
    pub ring_per_lattice: usize,
    pub canonical_per_lattice: usize,
    pub table_per_lattice: usize,
    pub decompose_per_lattice: usize,
    pub integral_per_lattice: usize,
    pub limit_per_lattice: usize,
    pub general_per_lattice: usize,
    pub minorants: usize,
}

impl Default for SuiteSize {
    fn default() -> Self {
        SuiteSize {
            bridge_cases: 1000,
            indefinite_per_lattice: 100,
            ring_per_lattice: 500,
            canonical_per_lattice: 500,
            table_per_lattice: 200,
            decompose_per_lattice: 20,
            integral_per_lattice: 200,
            limit_per_lattice: 200,
            general_per_lattice: 40,
            minorants: 100,
        }
    }
}

/// Runs the requested criteria (all when `only` is empty) in order.
pub fn run_suite(seed: u64, size: SuiteSize, only: &[u32]) -> Result<Vec<CriterionReport>> {
    let corpus = corpus()?;
    let wanted = |id: u32| only.is_empty() || only.contains(&id);
    let mut out = Vec::new();
    if wanted(1) {
        out.push(bridge_equivalence(seed, size.bridge_cases));
    }
    if wanted(2) {
        out.push(indefinite_is_measure(seed, &corpus, size.indefinite_per_lattice));
    }
    if wanted(3) {
        out.push(subring_laws(seed, &corpus, size.ring_per_lattice));
    }
    if wanted(4) {
        out.push(canonical_uniqueness(seed, &corpus, size.canonical_per_lattice));
    }
    if wanted(5) {
        out.push(evaluation_tables(seed, &corpus, size.table_per_lattice));
    }
    if wanted(6) {
        out.push(decomposition(seed, &corpus, size.decompose_per_lattice));
    }
    if wanted(7) {
        out.push(integral_laws(seed, &corpus, size.integral_per_lattice));
    }
    if wanted(8) {
        out.push(limits(seed, &corpus, size.limit_per_lattice));
    }
    if wanted(9) {
        out.push(general_integral(seed, &corpus, size.general_per_lattice, size.minorants));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shapes() {
        let c = corpus().unwrap();
        let sizes: Vec<(usize, usize)> = c.iter().map(|c| (c.lattice.len(), c.frame.len())).collect();
        assert_eq!(sizes, vec![(3, 4), (4, 4), (8, 8), (16, 16), (6, 8), (9, 16)]);
        assert!(c.iter().all(|c| c.carrier().is_boolean()));
    }

    #[test]
    fn small_suite_is_green() {
        let size = SuiteSize {
            bridge_cases: 50,
            indefinite_per_lattice: 5,
            ring_per_lattice: 5,
            canonical_per_lattice: 5,
            table_per_lattice: 5,
            decompose_per_lattice: 2,
            integral_per_lattice: 10,
            limit_per_lattice: 5,
            general_per_lattice: 3,
            minorants: 5,
        };
        for report in run_suite(7, size, &[]).unwrap() {
            assert_eq!(report.failure_count, 0, "criterion {}: {:?}", report.id, report.failures);
            assert!(report.cases > 0);
        }
    }
}
