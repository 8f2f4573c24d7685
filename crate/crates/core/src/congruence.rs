//! σ-frame congruences, the congruence frame `C(L)` and its dual coframe `S(L)`.
//!
//! Congruences are stored as partitions of the carrier. The congruence
//! frame is itself materialised as a [`FiniteLattice`] whose element `i` is
//! the `i`-th congruence, so every construction on lattices (measurable
//! functions, simple functions) applies to `C(L)` unchanged.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};

/// Carrier size accepted by [`CongruenceFrame::enumerate`].
pub const MAX_CARRIER: usize = 64;
/// Largest congruence frame materialised.
pub const MAX_FRAME: usize = 256;

/// An equivalence relation on the carrier, stored as a canonical block map:
/// block ids are numbered by first occurrence, so equal relations have equal maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    block: Vec<u32>,
}

impl Congruence {
    pub fn equality(n: usize) -> Self {
        Congruence { block: (0..n as u32).collect() }
    }

    pub fn all_pairs(n: usize) -> Self {
        Congruence { block: vec![0; n] }
    }

    fn from_labels(labels: impl IntoIterator<Item = usize>) -> Self {
        let mut renumber: HashMap<usize, u32> = HashMap::new();
        let block = labels
            .into_iter()
            .map(|l| {
                let next = renumber.len() as u32;
                *renumber.entry(l).or_insert(next)
            })
            .collect();
        Congruence { block }
    }

    /// Explicit partition; checked to cover the carrier and to satisfy (C1), (C2).
    pub fn from_blocks(l: &FiniteLattice, blocks: &[Vec<Elem>]) -> Result<Self> {
        let mut label = vec![usize::MAX; l.len()];
        for (i, b) in blocks.iter().enumerate() {
            for &e in b {
                if label[e.index()] != usize::MAX {
                    return Err(Error::MalformedSpec(format!("`{}` appears in two blocks", l.name(e))));
                }
                label[e.index()] = i;
            }
        }
        if let Some(pos) = label.iter().position(|&x| x == usize::MAX) {
            return Err(Error::MalformedSpec(format!(
                "partition does not cover `{}`",
                l.name(Elem::new(pos))
            )));
        }
        let theta = Congruence::from_labels(label);
        if !theta.is_congruence(l) {
            return Err(Error::MalformedSpec(format!(
                "partition {} is not compatible with ∧ and ∨ (C1)/(C2)",
                theta.name(l)
            )));
        }
        Ok(theta)
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.block[a.index()] == self.block[b.index()]
    }

    pub fn block_of(&self, a: Elem) -> usize {
        self.block[a.index()] as usize
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    /// Blocks in order of their least element; members in carrier order.
    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.block.iter().enumerate() {
            out[b as usize].push(Elem::new(i));
        }
        out
    }

    /// `self ⊆ other` as sets of pairs.
    pub fn is_subset_of(&self, other: &Congruence) -> bool {
        let mut image: Vec<Option<u32>> = vec![None; self.num_blocks()];
        for (i, &b) in self.block.iter().enumerate() {
            let target = other.block[i];
            match image[b as usize] {
                None => image[b as usize] = Some(target),
                Some(t) if t == target => {}
                Some(_) => return false,
            }
        }
        true
    }

    pub fn intersection(&self, other: &Congruence) -> Congruence {
        Congruence::from_labels(
            self.block
                .iter()
                .zip(&other.block)
                .map(|(&a, &b)| a as usize * other.len() + b as usize),
        )
    }

    /// Checks (C1) and (C2); in a finite lattice (C2) reduces to binary joins.
    pub fn is_congruence(&self, l: &FiniteLattice) -> bool {
        if self.len() != l.len() {
            return false;
        }
        // Compatibility with all unary translations x ↦ x∧z, x ↦ x∨z is
        // equivalent to (C1)+(C2) for an equivalence relation.
        for x in l.elements() {
            for y in l.elements().filter(|&y| y > x && self.related(x, y)) {
                for z in l.elements() {
                    if !self.related(l.meet(x, z), l.meet(y, z)) || !self.related(l.join(x, z), l.join(y, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Canonical partition name such as `{0,m}{1}`.
    pub fn name(&self, l: &FiniteLattice) -> String {
        self.blocks()
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|&e| l.name(e)).collect::<Vec<_>>().join(",")))
            .collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Smallest congruence containing the seed pairs.
fn generate(l: &FiniteLattice, seeds: impl IntoIterator<Item = (Elem, Elem)>) -> Congruence {
    let mut uf = UnionFind::new(l.len());
    let mut work: VecDeque<(Elem, Elem)> = seeds.into_iter().collect();
    while let Some((x, y)) = work.pop_front() {
        if uf.union(x.index(), y.index()) {
            // every merged edge must be stable under x ↦ x∧z and x ↦ x∨z
            for z in l.elements() {
                work.push_back((l.meet(x, z), l.meet(y, z)));
                work.push_back((l.join(x, z), l.join(y, z)));
            }
        }
    }
    Congruence::from_labels((0..l.len()).map(|i| uf.find(i)))
}

/// The smallest congruence identifying `a` and `b`.
pub fn principal_congruence(l: &FiniteLattice, a: Elem, b: Elem) -> Congruence {
    generate(l, [(a, b)])
}

/// Join in `C(L)`: the congruence generated by the union.
pub fn congruence_join(l: &FiniteLattice, theta: &Congruence, phi: &Congruence) -> Congruence {
    let seeds = [theta, phi].into_iter().flat_map(|c| {
        let reps = representatives(c);
        l.elements().map(move |x| (x, reps[c.block_of(x)]))
    });
    generate(l, seeds.collect::<Vec<_>>())
}

fn representatives(c: &Congruence) -> Vec<Elem> {
    let mut reps = vec![None; c.num_blocks()];
    for i in 0..c.len() {
        let b = c.block[i] as usize;
        if reps[b].is_none() {
            reps[b] = Some(Elem::new(i));
        }
    }
    reps.into_iter().map(|r| r.expect("block is nonempty")).collect()
}

/// The open and closed congruences `(Δ_a, ∇_a)`:
/// `Δ_a = {(x,y) | x∧a = y∧a}`, `∇_a = {(x,y) | x∨a = y∨a}`.
pub fn open_closed(l: &FiniteLattice, a: Elem) -> (Congruence, Congruence) {
    let open = Congruence::from_labels(l.elements().map(|x| l.meet(x, a).index()));
    let closed = Congruence::from_labels(l.elements().map(|x| l.join(x, a).index()));
    (open, closed)
}

/// The quotient `L/θ`: blocks ordered by `[x] ≤ [y]` iff `x ∨ y θ y`.
pub fn quotient(l: &FiniteLattice, theta: &Congruence) -> Result<FiniteLattice> {
    let blocks = theta.blocks();
    let names: Vec<String> = blocks
        .iter()
        .map(|b| format!("[{}]", b.iter().map(|&e| l.name(e)).collect::<Vec<_>>().join(",")))
        .collect();
    let k = blocks.len();
    let mut leq = vec![false; k * k];
    for (i, bi) in blocks.iter().enumerate() {
        for (j, bj) in blocks.iter().enumerate() {
            let (x, y) = (bi[0], bj[0]);
            leq[i * k + j] = theta.related(l.join(x, y), y);
        }
    }
    FiniteLattice::from_matrix(&format!("{}/θ", l.label()), names, leq)
}

/// The frame `C(L)` of all congruences of `L`, ordered by inclusion.
///
/// Reading the same list with the reverse order gives the coframe `S(L)` of
/// σ-sublocales: the sublocale `S` is represented by its congruence `θ_S`.
#[derive(Clone, Debug)]
pub struct CongruenceFrame {
    base: Arc<FiniteLattice>,
    congruences: Vec<Congruence>,
    lattice: Arc<FiniteLattice>,
    lookup: HashMap<Congruence, Elem>,
    open: Vec<Elem>,
    closed: Vec<Elem>,
}

impl CongruenceFrame {
    /// Enumerates `C(L)` as the join-closure of the principal congruences.
    pub fn enumerate(base: Arc<FiniteLattice>) -> Result<Self> {
        let l = base.as_ref();
        if l.len() > MAX_CARRIER {
            return Err(Error::SizeLimitExceeded(format!(
                "carrier has {} elements; congruence enumeration is limited to {MAX_CARRIER}",
                l.len()
            )));
        }
        // C(L) of a finite distributive lattice has 2^|J(L)| elements.
        let irreducibles = l.join_irreducibles().len();
        if irreducibles >= 64 || (1usize << irreducibles) > MAX_FRAME {
            return Err(Error::SizeLimitExceeded(format!(
                "C(L) would have 2^{irreducibles} elements; limit is {MAX_FRAME}"
            )));
        }

        let mut generators: Vec<Congruence> = Vec::new();
        let mut seen_gen = HashSet::new();
        for a in l.elements() {
            for b in l.elements().filter(|&b| a != b && l.leq(a, b)) {
                let p = principal_congruence(l, a, b);
                if seen_gen.insert(p.clone()) {
                    generators.push(p);
                }
            }
        }

        let equality = Congruence::equality(l.len());
        let mut found: HashSet<Congruence> = HashSet::from([equality.clone()]);
        let mut queue = VecDeque::from([equality]);
        while let Some(theta) = queue.pop_front() {
            for g in &generators {
                let next = congruence_join(l, &theta, g);
                if found.insert(next.clone()) {
                    if found.len() > MAX_FRAME {
                        return Err(Error::SizeLimitExceeded(format!("C(L) exceeds {MAX_FRAME} congruences")));
                    }
                    queue.push_back(next);
                }
            }
        }

        let mut congruences: Vec<Congruence> = found.into_iter().collect();
        // equality first, all-pairs last, deterministic in between
        congruences.sort_by(|x, y| y.num_blocks().cmp(&x.num_blocks()).then_with(|| x.cmp(y)));

        let n = congruences.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = congruences[i].is_subset_of(&congruences[j]);
            }
        }
        let names = congruences.iter().map(|c| c.name(l)).collect();
        let label = format!("C({})", l.label());
        let lattice = Arc::new(FiniteLattice::from_matrix(&label, names, leq)?);
        let lookup: HashMap<Congruence, Elem> = congruences
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), Elem::new(i)))
            .collect();
        let mut open = Vec::with_capacity(l.len());
        let mut closed = Vec::with_capacity(l.len());
        for a in l.elements() {
            let (d, c) = open_closed(l, a);
            open.push(lookup[&d]);
            closed.push(lookup[&c]);
        }
        Ok(CongruenceFrame { base, congruences, lattice, lookup, open, closed })
    }

    pub fn base(&self) -> &Arc<FiniteLattice> {
        &self.base
    }

    /// `C(L)` as a lattice; element `i` is [`Self::congruence`]`(i)`.
    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    pub fn congruence(&self, e: Elem) -> &Congruence {
        &self.congruences[e.index()]
    }

    pub fn find(&self, theta: &Congruence) -> Option<Elem> {
        self.lookup.get(theta).copied()
    }

    /// `Δ_a`, the congruence of the open sublocale `𝔬(a)`.
    pub fn open(&self, a: Elem) -> Elem {
        self.open[a.index()]
    }

    /// `∇_a`, the congruence of the closed sublocale `𝔠(a)`.
    pub fn closed(&self, a: Elem) -> Elem {
        self.closed[a.index()]
    }

    /// The equality relation `0_{C(L)} = ∇_0 = Δ_1`.
    pub fn equality(&self) -> Elem {
        self.lattice.bottom()
    }

    /// The full relation `1_{C(L)} = ∇_1 = Δ_0`.
    pub fn all_pairs(&self) -> Elem {
        self.lattice.top()
    }

    /// Complement of a congruence in `C(L)`.
    pub fn complement(&self, theta: Elem) -> Result<Elem> {
        self.lattice.complement(theta)
    }

    /// `Some(a)` when the congruence is `∇_a`, i.e. lies in `∇[L]`.
    pub fn closed_preimage(&self, theta: Elem) -> Option<Elem> {
        self.base.elements().find(|&a| self.closed[a.index()] == theta)
    }

    /// `Some(a)` when the congruence is `Δ_a`.
    pub fn open_preimage(&self, theta: Elem) -> Option<Elem> {
        self.base.elements().find(|&a| self.open[a.index()] == theta)
    }

    /// Human-readable `∇_a` / `Δ_a` labels carried by a congruence.
    pub fn labels(&self, theta: Elem) -> Vec<String> {
        let mut out = Vec::new();
        for a in self.base.elements() {
            if self.closed[a.index()] == theta {
                out.push(format!("∇_{}", self.base.name(a)));
            }
        }
        for a in self.base.elements() {
            if self.open[a.index()] == theta {
                out.push(format!("Δ_{}", self.base.name(a)));
            }
        }
        out
    }

    /// Resolves a congruence reference: `closed:a` (∇_a), `open:a` (Δ_a),
    /// a canonical partition name, or a bare element `a` of `L` read as `∇_a`.
    pub fn resolve_congruence(&self, text: &str) -> Result<Elem> {
        let text = text.trim();
        if let Some(a) = text.strip_prefix("closed:") {
            return Ok(self.closed(self.base.resolve(a)?));
        }
        if let Some(a) = text.strip_prefix("open:") {
            return Ok(self.open(self.base.resolve(a)?));
        }
        if let Ok(e) = self.lattice.elem(text) {
            return Ok(e);
        }
        if text.starts_with('{') {
            let blocks = parse_partition(text)?;
            return self.resolve_blocks(&blocks);
        }
        Ok(self.closed(self.base.resolve(text)?))
    }

    pub fn resolve_blocks(&self, blocks: &[Vec<String>]) -> Result<Elem> {
        let elems = blocks
            .iter()
            .map(|b| b.iter().map(|n| self.base.resolve(n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let theta = Congruence::from_blocks(&self.base, &elems)?;
        self.find(&theta)
            .ok_or_else(|| Error::MalformedSpec(format!("partition {} is not a congruence", theta.name(&self.base))))
    }

    pub fn sublocales(&self) -> SublocaleView<'_> {
        SublocaleView { frame: self }
    }
}

fn parse_partition(text: &str) -> Result<Vec<Vec<String>>> {
    let mut blocks = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('{')
            .ok_or_else(|| Error::MalformedSpec(format!("bad partition `{text}`")))?;
        let end = open
            .find('}')
            .ok_or_else(|| Error::MalformedSpec(format!("bad partition `{text}`")))?;
        let inner = &open[..end];
        blocks.push(
            inner
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
        );
        rest = open[end + 1..].trim_start();
    }
    Ok(blocks)
}

/// `S(L)`: the congruence list with the order reversed.
///
/// A sublocale is addressed by the [`Elem`] of its congruence `θ_S` in
/// [`CongruenceFrame::lattice`]. `S ≤ T` iff `θ_T ⊆ θ_S`; `S ∧ T` is
/// `θ_S ∨ θ_T` and `S ∨ T` is `θ_S ∧ θ_T`.
#[derive(Clone, Copy)]
pub struct SublocaleView<'a> {
    frame: &'a CongruenceFrame,
}

impl<'a> SublocaleView<'a> {
    pub fn frame(&self) -> &'a CongruenceFrame {
        self.frame
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone + 'a {
        self.frame.lattice.elements()
    }

    pub fn leq(&self, s: Elem, t: Elem) -> bool {
        self.frame.lattice.leq(t, s)
    }

    pub fn meet(&self, s: Elem, t: Elem) -> Elem {
        self.frame.lattice.join(s, t)
    }

    pub fn join(&self, s: Elem, t: Elem) -> Elem {
        self.frame.lattice.meet(s, t)
    }

    /// `1_{S(L)} = L`, represented by the equality congruence.
    pub fn whole(&self) -> Elem {
        self.frame.equality()
    }

    /// `0_{S(L)}`, represented by the all-pairs congruence.
    pub fn void(&self) -> Elem {
        self.frame.all_pairs()
    }

    /// `S^c` is the sublocale of `θ_S^c`.
    pub fn complement(&self, s: Elem) -> Result<Elem> {
        self.frame.complement(s)
    }

    /// Atoms of `S(L)`, i.e. coatoms of `C(L)`.
    pub fn atoms(&self) -> Vec<Elem> {
        self.frame.lattice.coatoms()
    }

    /// `L`, `void`, `open:a`, `closed:a`, or a partition name.
    pub fn name(&self, s: Elem) -> String {
        if s == self.whole() {
            return "L".into();
        }
        if s == self.void() {
            return "void".into();
        }
        let base = &self.frame.base;
        if let Some(a) = self.frame.open_preimage(s) {
            return format!("open:{}", base.name(a));
        }
        if let Some(a) = self.frame.closed_preimage(s) {
            return format!("closed:{}", base.name(a));
        }
        self.frame.lattice.name(s).to_string()
    }

    pub fn resolve(&self, text: &str) -> Result<Elem> {
        match text.trim() {
            "L" => Ok(self.whole()),
            "void" => Ok(self.void()),
            other if other.starts_with("open:") || other.starts_with("closed:") || other.starts_with('{') => {
                self.frame.resolve_congruence(other)
            }
            other => Err(Error::MalformedSpec(format!(
                "`{other}` is not a sublocale reference (use L, void, open:a, closed:a or a partition)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::chain(&["0", "m", "1"]).unwrap())
    }

    fn b4() -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::powerset(&["x", "y"]).unwrap())
    }

    fn e(l: &FiniteLattice, n: &str) -> Elem {
        l.elem(n).unwrap()
    }

    #[test]
    fn principal_on_c3() {
        let l = c3();
        let theta = principal_congruence(&l, e(&l, "0"), e(&l, "m"));
        assert_eq!(theta.name(&l), "{0,m}{1}");
        let same = principal_congruence(&l, e(&l, "m"), e(&l, "m"));
        assert_eq!(same, Congruence::equality(3));
    }

    #[test]
    fn principal_zero_one_on_b4_is_everything() {
        let l = b4();
        let theta = principal_congruence(&l, l.bottom(), l.top());
        assert_eq!(theta, Congruence::all_pairs(4));
    }

    #[test]
    fn open_closed_on_c3() {
        let l = c3();
        let (open, closed) = open_closed(&l, e(&l, "m"));
        assert_eq!(open.name(&l), "{0}{m,1}");
        assert_eq!(closed.name(&l), "{0,m}{1}");
        let (open0, closed0) = open_closed(&l, l.bottom());
        assert_eq!(open0, Congruence::all_pairs(3));
        assert_eq!(closed0, Congruence::equality(3));
    }

    #[test]
    fn open_x_is_closed_y_in_b4() {
        let l = b4();
        let (open_x, _) = open_closed(&l, e(&l, "x"));
        let (_, closed_y) = open_closed(&l, e(&l, "y"));
        assert_eq!(open_x, closed_y);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(CongruenceFrame::enumerate(c3()).unwrap().len(), 4);
        let cf = CongruenceFrame::enumerate(b4()).unwrap();
        assert_eq!(cf.len(), 4);
        let l = cf.base().clone();
        for a in l.elements() {
            assert!(cf.closed_preimage(cf.closed(a)).is_some());
        }
        let b8 = Arc::new(FiniteLattice::powerset(&["x", "y", "z"]).unwrap());
        assert_eq!(CongruenceFrame::enumerate(b8).unwrap().len(), 8);
    }

    #[test]
    fn enumeration_rejects_large_frames() {
        let names: Vec<String> = (0..12).map(|i| format!("c{i}")).collect();
        let chain = Arc::new(FiniteLattice::chain(&names).unwrap());
        assert!(matches!(CongruenceFrame::enumerate(chain), Err(Error::SizeLimitExceeded(_))));
    }

    #[test]
    fn complement_of_closed_is_open() {
        let cf = CongruenceFrame::enumerate(c3()).unwrap();
        let m = e(cf.base(), "m");
        assert_eq!(cf.complement(cf.closed(m)).unwrap(), cf.open(m));
        assert_eq!(cf.complement(cf.equality()).unwrap(), cf.all_pairs());
    }

    #[test]
    fn quotients() {
        let l = c3();
        let (_, closed_m) = open_closed(&l, e(&l, "m"));
        let q = quotient(&l, &closed_m).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(quotient(&l, &Congruence::equality(3)).unwrap().len(), 3);
        let trivial = quotient(&l, &Congruence::all_pairs(3)).unwrap();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial.top(), trivial.bottom());
    }

    #[test]
    fn partitions_resolve() {
        let cf = CongruenceFrame::enumerate(c3()).unwrap();
        let m = e(cf.base(), "m");
        assert_eq!(cf.resolve_congruence("{0,m}{1}").unwrap(), cf.closed(m));
        assert_eq!(cf.resolve_congruence("{1}{m,0}").unwrap(), cf.closed(m));
        assert_eq!(cf.resolve_congruence("open:m").unwrap(), cf.open(m));
        assert_eq!(cf.resolve_congruence("m").unwrap(), cf.closed(m));
        assert!(cf.resolve_congruence("{0,1}{m}").is_err());
        let s = cf.sublocales();
        assert_eq!(s.resolve("L").unwrap(), cf.equality());
        assert_eq!(s.name(cf.open(m)), "open:m");
        assert_eq!(s.name(s.void()), "void");
    }

    #[test]
    fn non_congruence_partition_is_rejected() {
        let l = c3();
        let blocks = vec![vec![e(&l, "0"), e(&l, "1")], vec![e(&l, "m")]];
        assert!(Congruence::from_blocks(&l, &blocks).is_err());
    }
}
