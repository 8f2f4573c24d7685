//! Finite bounded distributive lattices, used as desk-scale σ-frames.
//!
//! Every countable join in a finite lattice is a finite join, so a finite
//! distributive lattice is a σ-frame. Elements are addressed by [`Elem`]
//! handles; names are opaque strings kept for documents and reports.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Handle of an element inside one [`FiniteLattice`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub(crate) fn new(index: usize) -> Self {
        Elem(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone)]
pub struct FiniteLattice {
    label: String,
    names: Vec<String>,
    index: HashMap<String, Elem>,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    complements: Vec<Option<Elem>>,
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.leq == other.leq
    }
}

impl Eq for FiniteLattice {}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("label", &self.label)
            .field("elements", &self.names)
            .finish()
    }
}

impl FiniteLattice {
    /// The Boolean algebra of all subsets of `atoms`.
    ///
    /// The empty set is named `0`, the full set `1`, and every other subset
    /// by its atoms joined with `|` in declaration order.
    pub fn powerset<S: AsRef<str>>(atoms: &[S]) -> Result<Self> {
        let atoms: Vec<&str> = atoms.iter().map(AsRef::as_ref).collect();
        if atoms.len() > 6 {
            return Err(Error::SizeLimitExceeded(format!(
                "powerset of {} atoms exceeds 64 elements",
                atoms.len()
            )));
        }
        check_unique(&atoms)?;
        let n = 1usize << atoms.len();
        let full = n - 1;
        let names = (0..n)
            .map(|mask| subset_name(mask, full, &atoms))
            .collect::<Vec<_>>();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a & !b == 0;
            }
        }
        Self::from_matrix("L", names, leq)
    }

    /// Lattice from an element list and order pairs `(a, b)` meaning `a ≤ b`.
    /// The reflexive-transitive closure of the pairs is taken.
    pub fn from_order<S: AsRef<str>>(elements: &[S], leq_pairs: &[(S, S)]) -> Result<Self> {
        let names: Vec<&str> = elements.iter().map(AsRef::as_ref).collect();
        if names.is_empty() {
            return Err(Error::MalformedSpec("a lattice needs at least one element".into()));
        }
        check_unique(&names)?;
        let n = names.len();
        let position: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in leq_pairs {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = *position
                .get(a)
                .ok_or_else(|| Error::MalformedSpec(format!("order pair mentions unknown element `{a}`")))?;
            let ib = *position
                .get(b)
                .ok_or_else(|| Error::MalformedSpec(format!("order pair mentions unknown element `{b}`")))?;
            leq[ia * n + ib] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::MalformedSpec(format!(
                        "order is not antisymmetric: `{}` ≤ `{}` ≤ `{}`",
                        names[i], names[j], names[i]
                    )));
                }
            }
        }
        Self::from_matrix("L", names.into_iter().map(String::from).collect(), leq)
    }

    /// The chain `names[0] < names[1] < …`.
    pub fn chain<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0].as_ref(), w[1].as_ref())).collect();
        let elements: Vec<&str> = names.iter().map(AsRef::as_ref).collect();
        Self::from_order(&elements, &pairs)
    }

    /// Product lattice ordered componentwise; elements are named `(a,b)`.
    pub fn product(&self, other: &FiniteLattice) -> Result<Self> {
        let (n, m) = (self.len(), other.len());
        let mut names = Vec::with_capacity(n * m);
        for a in 0..n {
            for b in 0..m {
                names.push(format!("({},{})", self.names[a], other.names[b]));
            }
        }
        let size = n * m;
        let mut leq = vec![false; size * size];
        for x in 0..size {
            for y in 0..size {
                let (xa, xb) = (x / m, x % m);
                let (ya, yb) = (y / m, y % m);
                leq[x * size + y] = self.leq[xa * n + ya] && other.leq[xb * m + yb];
            }
        }
        Self::from_matrix("L", names, leq)
    }

    /// Builds the lattice from a full order matrix (row-major, `leq[a*n+b]`).
    pub(crate) fn from_matrix(label: &str, names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = names.len();
        debug_assert_eq!(leq.len(), n * n);
        let le = |a: usize, b: usize| leq[a * n + b];

        let mut meet = vec![Elem(0); n * n];
        let mut join = vec![Elem(0); n * n];
        for a in 0..n {
            for b in a..n {
                let glb = extremal_bound(n, |c| le(c, a) && le(c, b), le).ok_or_else(|| {
                    Error::NotALattice { a: names[a].clone(), b: names[b].clone(), missing: "meet" }
                })?;
                let lub = extremal_bound(n, |c| le(a, c) && le(b, c), |x, y| le(y, x)).ok_or_else(|| {
                    Error::NotALattice { a: names[a].clone(), b: names[b].clone(), missing: "join" }
                })?;
                meet[a * n + b] = Elem::new(glb);
                meet[b * n + a] = Elem::new(glb);
                join[a * n + b] = Elem::new(lub);
                join[b * n + a] = Elem::new(lub);
            }
        }
        let bottom = (0..n).find(|&c| (0..n).all(|x| le(c, x))).expect("finite lattice has a bottom");
        let top = (0..n).find(|&c| (0..n).all(|x| le(x, c))).expect("finite lattice has a top");

        for a in 0..n {
            for b in 0..n {
                for c in b..n {
                    let lhs = meet[a * n + join[b * n + c].index()];
                    let rhs = join[meet[a * n + b].index() * n + meet[a * n + c].index()];
                    if lhs != rhs {
                        return Err(Error::NotDistributive {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }

        let complements = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&c| meet[a * n + c].index() == bottom && join[a * n + c].index() == top)
                    .map(Elem::new)
            })
            .collect();
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), Elem::new(i))).collect();
        Ok(FiniteLattice {
            label: label.to_string(),
            names,
            index,
            leq,
            meet,
            join,
            bottom: Elem::new(bottom),
            top: Elem::new(top),
            complements,
        })
    }

    /// Short description used in error messages (`L`, `C(L)`, …).
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.len()).map(Elem::new)
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Exact name lookup.
    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Name lookup that also understands `top`, `bottom` and joins written `a|b`.
    pub fn resolve(&self, name: &str) -> Result<Elem> {
        let name = name.trim();
        if let Some(&e) = self.index.get(name) {
            return Ok(e);
        }
        match name {
            "top" | "⊤" => return Ok(self.top),
            "bottom" | "⊥" => return Ok(self.bottom),
            _ => {}
        }
        if name.contains('|') {
            let mut acc = self.bottom;
            for part in name.split('|') {
                let part = part.trim();
                let e = self
                    .index
                    .get(part)
                    .copied()
                    .ok_or_else(|| Error::UnknownElement(name.to_string()))?;
                acc = self.join(acc, e);
            }
            return Ok(acc);
        }
        Err(Error::UnknownElement(name.to_string()))
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.index() * self.len() + b.index()]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a.index() * self.len() + b.index()]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a.index() * self.len() + b.index()]
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.bottom, |acc, e| self.join(acc, e))
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.top, |acc, e| self.meet(acc, e))
    }

    pub fn is_complemented(&self, a: Elem) -> bool {
        self.complements[a.index()].is_some()
    }

    /// The unique `c` with `a ∧ c = 0` and `a ∨ c = 1`.
    pub fn complement(&self, a: Elem) -> Result<Elem> {
        self.complements[a.index()].ok_or_else(|| Error::NotComplemented {
            element: self.name(a).to_string(),
            carrier: self.label.clone(),
        })
    }

    /// `a* = ⋁{x | a ∧ x = 0}`.
    pub fn pseudocomplement(&self, a: Elem) -> Elem {
        self.join_all(self.elements().filter(|&x| self.meet(a, x) == self.bottom))
    }

    /// The sublattice of complemented elements.
    pub fn complemented_elements(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_complemented(a)).collect()
    }

    pub fn is_boolean(&self) -> bool {
        self.complements.iter().all(Option::is_some)
    }

    pub fn first_uncomplemented(&self) -> Option<Elem> {
        self.elements().find(|&a| !self.is_complemented(a))
    }

    /// Elements covering the bottom.
    pub fn atoms(&self) -> Vec<Elem> {
        let bottom = self.bottom;
        self.elements()
            .filter(|&a| a != bottom && self.elements().all(|x| x == bottom || x == a || !self.leq(x, a)))
            .collect()
    }

    /// Elements covered by the top.
    pub fn coatoms(&self) -> Vec<Elem> {
        let top = self.top;
        self.elements()
            .filter(|&a| a != top && self.elements().all(|x| x == top || x == a || !self.leq(a, x)))
            .collect()
    }

    /// Join-irreducible elements: nonzero and not the join of two strictly smaller ones.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| {
                if a == self.bottom {
                    return false;
                }
                let below: Vec<Elem> = self.elements().filter(|&x| x != a && self.leq(x, a)).collect();
                self.join_all(below.iter().copied()) != a
            })
            .collect()
    }
}

fn check_unique(names: &[&str]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(*n) {
            return Err(Error::MalformedSpec(format!("duplicate element `{n}`")));
        }
    }
    Ok(())
}

pub(crate) fn subset_name(mask: usize, full: usize, atoms: &[&str]) -> String {
    if mask == 0 {
        return "0".into();
    }
    if mask == full {
        return "1".into();
    }
    atoms
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, a)| *a)
        .collect::<Vec<_>>()
        .join("|")
}

/// Greatest element (w.r.t. `below`) among those satisfying `is_bound`, if it dominates all of them.
fn extremal_bound(n: usize, is_bound: impl Fn(usize) -> bool, below: impl Fn(usize, usize) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for c in (0..n).filter(|&c| is_bound(c)) {
        match best {
            None => best = Some(c),
            Some(b) if below(b, c) => best = Some(c),
            _ => {}
        }
    }
    let best = best?;
    (0..n).filter(|&c| is_bound(c)).all(|c| below(c, best)).then_some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> FiniteLattice {
        FiniteLattice::chain(&["0", "m", "1"]).unwrap()
    }

    fn b4() -> FiniteLattice {
        FiniteLattice::powerset(&["x", "y"]).unwrap()
    }

    #[test]
    fn powerset_of_two_atoms() {
        let l = b4();
        assert_eq!(l.len(), 4);
        let (x, y) = (l.elem("x").unwrap(), l.elem("y").unwrap());
        assert_eq!(l.meet(x, y), l.bottom());
        assert_eq!(l.join(x, y), l.top());
        assert_eq!(l.name(l.top()), "1");
        assert!(l.is_boolean());
        assert_eq!(l.atoms(), vec![x, y]);
    }

    #[test]
    fn three_chain() {
        let l = c3();
        let m = l.elem("m").unwrap();
        assert!(l.leq(l.bottom(), m) && l.leq(m, l.top()));
        assert_eq!(l.name(l.bottom()), "0");
        assert_eq!(l.join_irreducibles().len(), 2);
    }

    #[test]
    fn diamond_is_rejected_as_non_distributive() {
        let elements = ["0", "a", "b", "c", "1"];
        let pairs = [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")];
        match FiniteLattice::from_order(&elements, &pairs) {
            Err(Error::NotDistributive { .. }) => {}
            other => panic!("expected NotDistributive, got {other:?}"),
        }
    }

    #[test]
    fn pentagon_is_rejected() {
        let elements = ["0", "a", "b", "c", "1"];
        let pairs = [("0", "a"), ("a", "b"), ("0", "c"), ("b", "1"), ("c", "1")];
        assert!(matches!(
            FiniteLattice::from_order(&elements, &pairs),
            Err(Error::NotDistributive { .. })
        ));
    }

    #[test]
    fn missing_join_is_reported() {
        // two maximal elements, no top
        let elements = ["0", "a", "b"];
        let pairs = [("0", "a"), ("0", "b")];
        assert!(matches!(
            FiniteLattice::from_order(&elements, &pairs),
            Err(Error::NotALattice { missing: "join", .. })
        ));
    }

    #[test]
    fn malformed_orders() {
        assert!(matches!(
            FiniteLattice::from_order(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::MalformedSpec(_))
        ));
        assert!(matches!(
            FiniteLattice::from_order(&["a", "a"], &[]),
            Err(Error::MalformedSpec(_))
        ));
        assert!(matches!(
            FiniteLattice::from_order(&["a"], &[("a", "z")]),
            Err(Error::MalformedSpec(_))
        ));
    }

    #[test]
    fn complements() {
        let l = b4();
        let (x, y) = (l.elem("x").unwrap(), l.elem("y").unwrap());
        assert_eq!(l.complement(x).unwrap(), y);
        assert_eq!(l.complement(l.bottom()).unwrap(), l.top());
        let c = c3();
        let m = c.elem("m").unwrap();
        assert!(matches!(c.complement(m), Err(Error::NotComplemented { .. })));
        assert_eq!(c.complement(c.bottom()).unwrap(), c.top());
    }

    #[test]
    fn pseudocomplements() {
        let c = c3();
        let m = c.elem("m").unwrap();
        assert_eq!(c.pseudocomplement(m), c.bottom());
        assert_eq!(c.pseudocomplement(c.top()), c.bottom());
        let l = b4();
        let (x, y) = (l.elem("x").unwrap(), l.elem("y").unwrap());
        assert_eq!(l.pseudocomplement(x), y);
    }

    #[test]
    fn resolve_understands_joins_and_aliases() {
        let l = FiniteLattice::powerset(&["x", "y", "z"]).unwrap();
        let xz = l.elem("x|z").unwrap();
        assert_eq!(l.resolve("z|x").unwrap(), xz);
        assert_eq!(l.resolve("top").unwrap(), l.top());
        assert_eq!(l.resolve("x|y|z").unwrap(), l.top());
        assert!(l.resolve("w").is_err());
    }

    #[test]
    fn product_of_chains() {
        let c2 = FiniteLattice::chain(&["0", "1"]).unwrap();
        let c3 = c3();
        let p = c2.product(&c3).unwrap();
        assert_eq!(p.len(), 6);
        assert!(!p.is_boolean());
        assert_eq!(p.complemented_elements().len(), 4);
        assert_eq!(p.join_irreducibles().len(), 3);
    }
}
