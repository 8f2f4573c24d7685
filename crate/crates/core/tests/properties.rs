//! Property tests against pointwise oracles: on a powerset lattice a function is
//! determined by its values at the atoms, which we compute directly from the terms.

use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use proptest::prelude::*;

use sigma_integral::congruence::CongruenceFrame;
use sigma_integral::decompose::decompose;
use sigma_integral::integral::{indefinite_integral, integrate_simple};
use sigma_integral::measure::Measure;
use sigma_integral::rational::{harmonic, rat};
use sigma_integral::real::CutFunction;
use sigma_integral::simple::SimpleFunction;
use sigma_integral::{Elem, Extended, FiniteLattice, Rational};

const ATOMS: usize = 3;

struct Fixture {
    l: Arc<FiniteLattice>,
    frame: Arc<CongruenceFrame>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let l = Arc::new(FiniteLattice::powerset(&["a", "b", "c"]).unwrap());
        let frame = Arc::new(CongruenceFrame::enumerate(l.clone()).unwrap());
        Fixture { l, frame }
    })
}

fn element(mask: usize) -> Elem {
    let l = &fixture().l;
    let names: Vec<&str> = ["a", "b", "c"].iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, n)| *n).collect();
    if names.is_empty() {
        l.bottom()
    } else {
        l.resolve(&names.join("|")).unwrap()
    }
}

type Terms = Vec<(Rational, usize)>;

fn terms(max_len: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((-12i64..=12, 1i64..=4, 0usize..(1 << ATOMS)), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(n, d, m)| (rat(n, d), m)).collect())
}

fn nonnegative_terms(max_len: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((0i64..=8, 1i64..=4, 0usize..(1 << ATOMS)), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(n, d, m)| (rat(n, d), m)).collect())
}

fn build(t: &Terms) -> SimpleFunction {
    let terms: Vec<(Rational, Elem)> = t.iter().map(|(r, m)| (r.clone(), element(*m))).collect();
    SimpleFunction::canonicalize(fixture().l.clone(), &terms).unwrap()
}

/// Value at atom `i`: the sum of the coefficients whose element contains it.
fn pointwise(t: &Terms) -> Vec<Rational> {
    (0..ATOMS)
        .map(|i| t.iter().filter(|(_, m)| m & (1 << i) != 0).fold(Rational::zero(), |acc, (r, _)| acc + r))
        .collect()
}

fn values(f: &CutFunction) -> Vec<Extended> {
    (0..ATOMS).map(|i| f.value_at_atom(element(1 << i))).collect()
}

fn finite(v: Vec<Rational>) -> Vec<Extended> {
    v.into_iter().map(Extended::Finite).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ladders_match_pointwise_values(t in terms(6)) {
        prop_assert_eq!(values(&build(&t).to_cut_function()), finite(pointwise(&t)));
    }

    #[test]
    fn canonical_form_ignores_order(t in terms(6)) {
        let mut reversed = t.clone();
        reversed.reverse();
        let g = build(&t);
        prop_assert_eq!(&build(&reversed), &g);
        prop_assert_eq!(SimpleFunction::from_cut(&g.to_cut_function()).unwrap(), g.clone());
        let again = SimpleFunction::canonicalize(g.carrier().clone(), g.terms()).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn arithmetic_is_pointwise(s in terms(4), t in terms(4), lam in -6i64..=6) {
        let (g, h) = (build(&s), build(&t));
        let (ps, pt) = (pointwise(&s), pointwise(&t));
        let sum: Vec<Rational> = ps.iter().zip(&pt).map(|(a, b)| a + b).collect();
        let prod: Vec<Rational> = ps.iter().zip(&pt).map(|(a, b)| a * b).collect();
        let max: Vec<Rational> = ps.iter().zip(&pt).map(|(a, b)| a.max(b).clone()).collect();
        let min: Vec<Rational> = ps.iter().zip(&pt).map(|(a, b)| a.min(b).clone()).collect();
        let scaled: Vec<Rational> = ps.iter().map(|a| a * rat(lam, 1)).collect();
        let (gc, hc) = (g.to_cut_function(), h.to_cut_function());
        prop_assert_eq!(values(&gc.add(&hc).unwrap()), finite(sum.clone()));
        prop_assert_eq!(values(&g.add(&h).unwrap().to_cut_function()), finite(sum));
        prop_assert_eq!(values(&g.mul(&h).unwrap().to_cut_function()), finite(prod));
        prop_assert_eq!(values(&gc.join(&hc).unwrap()), finite(max));
        prop_assert_eq!(values(&gc.meet(&hc).unwrap()), finite(min));
        prop_assert_eq!(values(&gc.scale(&rat(lam, 1))), finite(scaled));
    }

    #[test]
    fn order_is_pointwise(s in terms(4), t in terms(4)) {
        let below = pointwise(&s).iter().zip(pointwise(&t)).all(|(a, b)| *a <= b);
        prop_assert_eq!(build(&s).leq(&build(&t)).unwrap(), below);
    }

    #[test]
    fn integral_is_a_weighted_sum(t in terms(5), w in prop::collection::vec((0i64..=9, 1i64..=3), ATOMS)) {
        let fx = fixture();
        let weights: Vec<(Elem, Extended)> =
            w.iter().enumerate().map(|(i, (n, d))| (element(1 << i), Extended::Finite(rat(*n, *d)))).collect();
        let mu = Measure::from_weights(fx.frame.clone(), &weights).unwrap();
        let g = build(&t).lift(&fx.frame).unwrap();
        let expected = pointwise(&t)
            .iter()
            .zip(&w)
            .fold(Rational::zero(), |acc, (v, (n, d))| acc + v * rat(*n, *d));
        let whole = fx.frame.sublocales().whole();
        prop_assert_eq!(integrate_simple(&g, &mu, whole).unwrap().0, Extended::Finite(expected));
        // Over the open sublocale of a: only atoms below a count.
        let a = element(0b011);
        let partial = pointwise(&t)
            .iter()
            .zip(&w)
            .take(2)
            .fold(Rational::zero(), |acc, (v, (n, d))| acc + v * rat(*n, *d));
        prop_assert_eq!(integrate_simple(&g, &mu, fx.frame.open(a)).unwrap().0, Extended::Finite(partial));
    }

    #[test]
    fn indefinite_integrals_are_measures(
        t in nonnegative_terms(5),
        w in prop::collection::vec(prop_oneof![4 => (0i64..=9).prop_map(Some), 1 => Just(None)], ATOMS),
    ) {
        let fx = fixture();
        let weights: Vec<(Elem, Extended)> = w
            .iter()
            .enumerate()
            .map(|(i, v)| (element(1 << i), v.map_or(Extended::PosInf, Extended::from_int)))
            .collect();
        let mu = Measure::from_weights(fx.frame.clone(), &weights).unwrap();
        let g = build(&t).lift(&fx.frame).unwrap();
        prop_assert!(indefinite_integral(&g, &mu).is_ok());
    }

    #[test]
    fn approximations_increase_to_f(t in nonnegative_terms(4)) {
        let g = build(&t);
        let capped = g.map_coefficients(|r| r.min(&rat(2, 1)).clone());
        let f = capped.to_cut_function();
        let steps = decompose(&f, 8).unwrap();
        let mut prev = SimpleFunction::zero(fixture().l.clone());
        for s in &steps {
            prop_assert!(prev.leq(&s.f_k).unwrap());
            prop_assert!(s.f_k.to_cut_function().leq(&f).unwrap());
            prop_assert!(s.residual <= Extended::Finite(rat(1, s.k as i64)));
            prop_assert_eq!(s.grid.last().unwrap(), &harmonic(s.k));
            prop_assert!(s.table_conforms && s.closed_form_agrees);
            prev = s.f_k.clone();
        }
    }
}

#[test]
fn congruence_frames_of_products_are_boolean() {
    let c3 = FiniteLattice::chain(&["0", "m", "1"]).unwrap();
    let l = Arc::new(c3.product(&c3).unwrap());
    let cf = CongruenceFrame::enumerate(l.clone()).unwrap();
    assert_eq!(cf.len(), 16);
    assert!(cf.lattice().is_boolean());
    for theta in cf.congruences() {
        assert!(theta.is_congruence(&l));
    }
    for a in l.elements() {
        assert_eq!(cf.complement(cf.open(a)).unwrap(), cf.closed(a));
    }
}
