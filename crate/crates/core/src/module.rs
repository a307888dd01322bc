//! Finite-dimensional graded modules as explicit representations.
//!
//! A module stores a dimension per nonzero slot `(vertex, degree)` and, for
//! every arrow `a: v -> w` and source degree `d`, the matrix of the action
//! `M_(v,d) -> M_(w, d + deg a)`. Missing matrices are zero.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_zero_vec, unit_vector, Echelon, Matrix};

pub type Slot = (usize, i64);

#[derive(Clone, Debug)]
pub struct GradedModule<F: Field> {
    alg: Arc<GradedAlgebra<F>>,
    label: String,
    dims: BTreeMap<Slot, usize>,
    action: Vec<BTreeMap<i64, Matrix<F>>>,
}

/// A subspace of every slot of a module.
#[derive(Clone, Debug)]
pub struct SlotSpaces<F: Field> {
    pub spaces: BTreeMap<Slot, Echelon<F>>,
}

impl<F: Field> SlotSpaces<F> {
    pub fn dim(&self) -> usize {
        self.spaces.values().map(|e| e.rank()).sum()
    }

    pub fn slot_rank(&self, s: Slot) -> usize {
        self.spaces.get(&s).map_or(0, |e| e.rank())
    }
}

/// A degree-preserving map `M -> N<shift>`: slot `(v, d)` of `M` goes to
/// slot `(v, d - shift)` of `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap<F: Field> {
    pub shift: i64,
    /// Keyed by source slot; matrix rows index the target slot.
    pub blocks: BTreeMap<Slot, Matrix<F>>,
}

impl<F: Field> GradedMap<F> {
    pub fn zero(shift: i64) -> Self {
        GradedMap {
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn target_slot(&self, s: Slot) -> Slot {
        (s.0, s.1 - self.shift)
    }

    pub fn apply(&self, field: &F, s: Slot, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.blocks.get(&s).map(|m| m.apply(field, v))
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.blocks.values().all(|m| m.is_zero(field))
    }

    pub fn rank(&self, field: &F) -> usize {
        self.blocks.values().map(|m| m.rank(field)).sum()
    }

    /// `self ∘ other`.
    pub fn compose(&self, field: &F, other: &GradedMap<F>) -> GradedMap<F> {
        let mut blocks = BTreeMap::new();
        for (s, m) in &other.blocks {
            let mid = other.target_slot(*s);
            if let Some(n) = self.blocks.get(&mid) {
                blocks.insert(*s, n.mul(field, m));
            }
        }
        GradedMap {
            shift: self.shift + other.shift,
            blocks,
        }
    }

    pub fn add(&self, field: &F, other: &GradedMap<F>) -> GradedMap<F> {
        assert_eq!(self.shift, other.shift);
        let mut blocks = self.blocks.clone();
        for (s, m) in &other.blocks {
            match blocks.get_mut(s) {
                Some(b) => b.add_assign(field, m),
                None => {
                    blocks.insert(*s, m.clone());
                }
            }
        }
        GradedMap {
            shift: self.shift,
            blocks,
        }
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> GradedMap<F> {
        GradedMap {
            shift: self.shift,
            blocks: self
                .blocks
                .iter()
                .map(|(s, m)| (*s, m.scale(field, c)))
                .collect(),
        }
    }

    /// Flattens all blocks into one coordinate vector in the order of
    /// `layout`.
    pub fn flatten(&self, field: &F, layout: &[(Slot, usize, usize)]) -> Vec<F::Elem> {
        let mut out = Vec::new();
        for (s, rows, cols) in layout {
            match self.blocks.get(s) {
                Some(m) => {
                    for r in 0..*rows {
                        out.extend_from_slice(m.row(r));
                    }
                }
                None => out.extend(std::iter::repeat(field.zero()).take(rows * cols)),
            }
        }
        out
    }
}

pub(crate) fn same_algebra<F: Field>(a: &GradedAlgebra<F>, b: &GradedAlgebra<F>) -> bool {
    std::ptr::eq(a, b)
        || (a.grading() == b.grading()
            && a.arrow_degrees() == b.arrow_degrees()
            && a.dim() == b.dim()
            && a.presentation() == b.presentation())
}

impl<F: Field> GradedModule<F> {
    pub fn zero(alg: &Arc<GradedAlgebra<F>>) -> Self {
        GradedModule {
            alg: alg.clone(),
            label: "0".into(),
            dims: BTreeMap::new(),
            action: vec![BTreeMap::new(); alg.arrow_count()],
        }
    }

    /// Assembles a module from raw data; zero slots and matrices are pruned
    /// and the relations are checked.
    pub fn from_parts(
        alg: &Arc<GradedAlgebra<F>>,
        label: impl Into<String>,
        dims: BTreeMap<Slot, usize>,
        action: Vec<BTreeMap<i64, Matrix<F>>>,
    ) -> Result<Self> {
        let f = alg.field();
        let dims: BTreeMap<Slot, usize> = dims.into_iter().filter(|(_, n)| *n > 0).collect();
        let mut pruned = vec![BTreeMap::new(); alg.arrow_count()];
        for (a, per) in action.into_iter().enumerate() {
            let (v, w, da) = (alg.arrow_source(a), alg.arrow_target(a), alg.arrow_degree(a));
            for (d, m) in per {
                let (src, dst) = (dims.get(&(v, d)), dims.get(&(w, d + da)));
                match (src, dst) {
                    (Some(&c), Some(&r)) => {
                        if m.rows() != r || m.cols() != c {
                            return Err(Error::Internal(format!(
                                "arrow {} at degree {d}: matrix is {}x{}, slots need {r}x{c}",
                                alg.arrow_name(a),
                                m.rows(),
                                m.cols()
                            )));
                        }
                        if !m.is_zero(f) {
                            pruned[a].insert(d, m);
                        }
                    }
                    _ => {
                        if m.rows() * m.cols() > 0 && !m.is_zero(f) {
                            return Err(Error::Internal(format!(
                                "arrow {} acts from or into an empty slot",
                                alg.arrow_name(a)
                            )));
                        }
                    }
                }
            }
        }
        let m = GradedModule {
            alg: alg.clone(),
            label: label.into(),
            dims,
            action: pruned,
        };
        m.check_relations()?;
        Ok(m)
    }

    /// Builds a module on basis vectors `0..slots.len()` whose arrow action
    /// is given by `act(a, k)` as a combination of basis vectors.
    pub fn from_basis_action(
        alg: &Arc<GradedAlgebra<F>>,
        label: impl Into<String>,
        slots: &[Slot],
        act: impl Fn(usize, usize) -> Vec<(usize, F::Elem)>,
    ) -> Result<(Self, Vec<(Slot, usize)>)> {
        let f = alg.field();
        let mut dims: BTreeMap<Slot, usize> = BTreeMap::new();
        let mut pos = Vec::with_capacity(slots.len());
        for s in slots {
            let n = dims.entry(*s).or_insert(0);
            pos.push((*s, *n));
            *n += 1;
        }
        let mut action: Vec<BTreeMap<i64, Matrix<F>>> = vec![BTreeMap::new(); alg.arrow_count()];
        for a in 0..alg.arrow_count() {
            let (v, w, da) = (alg.arrow_source(a), alg.arrow_target(a), alg.arrow_degree(a));
            for (k, &(s, p)) in pos.iter().enumerate() {
                if s.0 != v {
                    continue;
                }
                let tgt = (w, s.1 + da);
                let Some(&rows) = dims.get(&tgt) else {
                    if !act(a, k).is_empty() {
                        return Err(Error::Internal("action leaves the module".into()));
                    }
                    continue;
                };
                let cols = dims[&s];
                let m = action[a]
                    .entry(s.1)
                    .or_insert_with(|| Matrix::zeros(f, rows, cols));
                for (t, c) in act(a, k) {
                    let (ts, tp) = pos[t];
                    if ts != tgt {
                        return Err(Error::Internal("action lands in the wrong slot".into()));
                    }
                    let x = f.add(m.get(tp, p), &c);
                    m.set(tp, p, x);
                }
            }
        }
        Ok((Self::from_parts(alg, label, dims, action)?, pos))
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra<F>> {
        &self.alg
    }

    pub fn field(&self) -> &F {
        self.alg.field()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dims(&self) -> &BTreeMap<Slot, usize> {
        &self.dims
    }

    pub fn slot_dim(&self, s: Slot) -> usize {
        *self.dims.get(&s).unwrap_or(&0)
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        self.dims.keys().copied()
    }

    pub fn dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(_, d), &n) in &self.dims {
            *out.entry(d).or_insert(0) += n;
        }
        out
    }

    /// `dim e_v M` for every vertex.
    pub fn vertex_dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.alg.vertex_count()];
        for (&(v, _), &n) in &self.dims {
            out[v] += n;
        }
        out
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.dims.keys().map(|s| s.1).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.dims.keys().map(|s| s.1).max()
    }

    pub fn arrow_matrix(&self, a: usize, d: i64) -> Option<&Matrix<F>> {
        self.action[a].get(&d)
    }

    pub fn arrow_target_slot(&self, a: usize, s: Slot) -> Slot {
        (self.alg.arrow_target(a), s.1 + self.alg.arrow_degree(a))
    }

    /// `a · v` for `v` in slot `s`; `None` when the result is zero for
    /// structural reasons.
    pub fn act_arrow(&self, a: usize, s: Slot, v: &[F::Elem]) -> Option<(Slot, Vec<F::Elem>)> {
        if self.alg.arrow_source(a) != s.0 {
            return None;
        }
        let m = self.action[a].get(&s.1)?;
        Some((self.arrow_target_slot(a, s), m.apply(self.field(), v)))
    }

    /// Applies a path (arrows in traversal order).
    pub fn act_path(&self, word: &[usize], s: Slot, v: &[F::Elem]) -> Option<(Slot, Vec<F::Elem>)> {
        let mut cur = (s, v.to_vec());
        for &a in word {
            cur = self.act_arrow(a, cur.0, &cur.1)?;
        }
        Some(cur)
    }

    /// Applies the algebra basis element `b`.
    pub fn act_element(&self, b: usize, s: Slot, v: &[F::Elem]) -> Option<(Slot, Vec<F::Elem>)> {
        let el = self.alg.element(b);
        if el.source != s.0 {
            return None;
        }
        if el.is_idempotent() {
            return Some((s, v.to_vec()));
        }
        self.act_path(&el.word, s, v)
    }

    /// Matrix of a path acting out of slot `s`.
    pub fn path_matrix(&self, word: &[usize], s: Slot) -> Option<(Slot, Matrix<F>)> {
        let f = self.field();
        let n = self.slot_dim(s);
        if n == 0 {
            return None;
        }
        let mut slot = s;
        let mut m = Matrix::identity(f, n);
        for &a in word {
            if self.alg.arrow_source(a) != slot.0 {
                return None;
            }
            let step = self.action[a].get(&slot.1)?;
            m = step.mul(f, &m);
            slot = self.arrow_target_slot(a, slot);
        }
        Some((slot, m))
    }

    fn check_relations(&self) -> Result<()> {
        let f = self.field();
        let p = self.alg.presentation();
        for (ri, rel) in p.relations.iter().enumerate() {
            let src = p.arrows[rel.terms[0].1[0]].source;
            for (&s, &n) in self.dims.range((src, i64::MIN)..=(src, i64::MAX)) {
                let mut acc: BTreeMap<Slot, Matrix<F>> = BTreeMap::new();
                for (c, path) in &rel.terms {
                    if let Some((t, m)) = self.path_matrix(path, s) {
                        let m = m.scale(f, &f.from_rational(c)?);
                        match acc.get_mut(&t) {
                            Some(x) => x.add_assign(f, &m),
                            None => {
                                acc.insert(t, m);
                            }
                        }
                    }
                }
                let _ = n;
                if acc.values().any(|m| !m.is_zero(f)) {
                    return Err(Error::Internal(format!(
                        "relation {} does not act as zero on slot {:?}",
                        ri + 1,
                        (s.0 + 1, s.1)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `M<j>`: degrees move up by `j`.
    pub fn shift(&self, j: i64) -> Self {
        GradedModule {
            alg: self.alg.clone(),
            label: shifted_label(&self.label, j),
            dims: self.dims.iter().map(|(&(v, d), &n)| ((v, d + j), n)).collect(),
            action: self
                .action
                .iter()
                .map(|per| per.iter().map(|(&d, m)| (d + j, m.clone())).collect())
                .collect(),
        }
    }

    pub fn direct_sum(alg: &Arc<GradedAlgebra<F>>, parts: &[&GradedModule<F>]) -> Result<Self> {
        let f = alg.field();
        let mut dims: BTreeMap<Slot, usize> = BTreeMap::new();
        // offsets[k][slot] = starting row of part k inside the sum's slot.
        let mut offsets: Vec<BTreeMap<Slot, usize>> = Vec::new();
        for m in parts {
            if !same_algebra(alg, &m.alg) {
                return Err(Error::AlgebraMismatch);
            }
            let mut off = BTreeMap::new();
            for (&s, &n) in &m.dims {
                let e = dims.entry(s).or_insert(0);
                off.insert(s, *e);
                *e += n;
            }
            offsets.push(off);
        }
        let mut action: Vec<BTreeMap<i64, Matrix<F>>> = vec![BTreeMap::new(); alg.arrow_count()];
        for (k, m) in parts.iter().enumerate() {
            for a in 0..alg.arrow_count() {
                for (&d, mat) in &m.action[a] {
                    let s = (alg.arrow_source(a), d);
                    let t = m.arrow_target_slot(a, s);
                    let big = action[a]
                        .entry(d)
                        .or_insert_with(|| Matrix::zeros(f, dims[&t], dims[&s]));
                    let (ro, co) = (offsets[k][&t], offsets[k][&s]);
                    for r in 0..mat.rows() {
                        for c in 0..mat.cols() {
                            big.set(ro + r, co + c, mat.get(r, c).clone());
                        }
                    }
                }
            }
        }
        let label = parts
            .iter()
            .map(|m| m.label.as_str())
            .collect::<Vec<_>>()
            .join(" ⊕ ");
        Self::from_parts(alg, label, dims, action)
    }

    /// The dual `M°` through the algebra's anti-involution.
    pub fn dualize(&self) -> Result<Self> {
        let alg = &self.alg;
        let d = alg.presentation().duality.as_ref().ok_or(Error::NoDuality)?;
        for (a, &b) in d.iter().enumerate() {
            if alg.arrow_degree(a) != alg.arrow_degree(b) {
                return Err(Error::DualityNotGraded);
            }
        }
        let dims: BTreeMap<Slot, usize> =
            self.dims.iter().map(|(&(v, k), &n)| ((v, -k), n)).collect();
        let mut action: Vec<BTreeMap<i64, Matrix<F>>> = vec![BTreeMap::new(); alg.arrow_count()];
        for a in 0..alg.arrow_count() {
            let b = d[a];
            let da = alg.arrow_degree(a);
            // a acts (v, k) -> (w, k + da) on M° as the transpose of
            // b: (w, -k - da) -> (v, -k) on M.
            for (&db, m) in &self.action[b] {
                let k = -db - da;
                action[a].insert(k, m.transpose());
            }
        }
        let label = format!("({})°", self.label);
        Self::from_parts(alg, label, dims, action)
    }

    /// Moves the module to another grading of the same underlying algebra;
    /// `degree(v, d)` gives the new degree of old slot `(v, d)`.
    pub fn regrade(
        &self,
        new_alg: &Arc<GradedAlgebra<F>>,
        degree: impl Fn(usize, i64) -> i64,
    ) -> Result<Self> {
        let f = self.field();
        if new_alg.presentation() != self.alg.presentation() || new_alg.dim() != self.alg.dim() {
            return Err(Error::AlgebraMismatch);
        }
        let mut dims: BTreeMap<Slot, usize> = BTreeMap::new();
        let mut place: BTreeMap<Slot, (Slot, usize)> = BTreeMap::new();
        for (&(v, d), &n) in &self.dims {
            let ns = (v, degree(v, d));
            let e = dims.entry(ns).or_insert(0);
            place.insert((v, d), (ns, *e));
            *e += n;
        }
        let mut action: Vec<BTreeMap<i64, Matrix<F>>> =
            vec![BTreeMap::new(); new_alg.arrow_count()];
        for a in 0..self.alg.arrow_count() {
            for (&d, m) in &self.action[a] {
                let s = (self.alg.arrow_source(a), d);
                let t = self.arrow_target_slot(a, s);
                let (ns, co) = place[&s];
                let (nt, ro) = place[&t];
                if nt.1 != ns.1 + new_alg.arrow_degree(a) {
                    return Err(Error::Regrade(format!(
                        "arrow {} from slot ({}, {d}) does not respect the new degrees",
                        self.alg.arrow_name(a),
                        s.0 + 1
                    )));
                }
                let big = action[a]
                    .entry(ns.1)
                    .or_insert_with(|| Matrix::zeros(f, dims[&nt], dims[&ns]));
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        let x = f.add(big.get(ro + r, co + c), m.get(r, c));
                        big.set(ro + r, co + c, x);
                    }
                }
            }
        }
        Self::from_parts(new_alg, self.label.clone(), dims, action)
    }

    pub fn empty_spaces(&self) -> SlotSpaces<F> {
        SlotSpaces {
            spaces: self
                .dims
                .iter()
                .map(|(&s, &n)| (s, Echelon::new(self.field(), n)))
                .collect(),
        }
    }

    /// Smallest submodule containing the given homogeneous vectors.
    pub fn generate(&self, gens: &[(Slot, Vec<F::Elem>)]) -> SlotSpaces<F> {
        self.extend_span(self.empty_spaces(), gens)
    }

    /// Closes `spaces ∪ gens` under the arrow action.
    pub fn extend_span(
        &self,
        mut spaces: SlotSpaces<F>,
        gens: &[(Slot, Vec<F::Elem>)],
    ) -> SlotSpaces<F> {
        let mut work: Vec<(Slot, Vec<F::Elem>)> = gens.to_vec();
        while let Some((s, v)) = work.pop() {
            let Some(e) = spaces.spaces.get_mut(&s) else {
                continue;
            };
            if !e.insert(&v) {
                continue;
            }
            for a in 0..self.alg.arrow_count() {
                if let Some((t, w)) = self.act_arrow(a, s, &v) {
                    if !is_zero_vec(self.field(), &w) {
                        work.push((t, w));
                    }
                }
            }
        }
        spaces
    }

    /// Image of every arrow, i.e. `JM`.
    pub fn radical(&self) -> SlotSpaces<F> {
        let f = self.field();
        let mut gens = Vec::new();
        for a in 0..self.alg.arrow_count() {
            for (&d, m) in &self.action[a] {
                let t = self.arrow_target_slot(a, (self.alg.arrow_source(a), d));
                for c in 0..m.cols() {
                    let col = m.column(c);
                    if !is_zero_vec(f, &col) {
                        gens.push((t, col));
                    }
                }
            }
        }
        // The image of the arrow ideal is already a submodule.
        self.generate(&gens)
    }

    /// Multiplying a submodule by the radical.
    pub fn radical_of(&self, sub: &SlotSpaces<F>) -> SlotSpaces<F> {
        let f = self.field();
        let mut gens = Vec::new();
        for (&s, e) in &sub.spaces {
            for row in e.rows() {
                for a in 0..self.alg.arrow_count() {
                    if let Some((t, w)) = self.act_arrow(a, s, row) {
                        if !is_zero_vec(f, &w) {
                            gens.push((t, w));
                        }
                    }
                }
            }
        }
        self.generate(&gens)
    }

    /// Vectors spanning a complement of `JM`: a minimal generating set.
    pub fn top_generators(&self) -> Vec<(Slot, Vec<F::Elem>)> {
        let rad = self.radical();
        let mut out = Vec::new();
        for (&s, &n) in &self.dims {
            for c in rad.spaces[&s].non_pivots() {
                out.push((s, unit_vector(self.field(), n, c)));
            }
        }
        out
    }

    /// `[J^k M / J^{k+1} M : S_v]` per layer `k`.
    pub fn radical_layers(&self) -> Vec<Vec<usize>> {
        let r = self.alg.vertex_count();
        let mut layers = Vec::new();
        let mut cur = self.generate(
            &self
                .dims
                .iter()
                .flat_map(|(&s, &n)| (0..n).map(move |c| (s, c)))
                .map(|(s, c)| (s, unit_vector(self.field(), self.slot_dim(s), c)))
                .collect::<Vec<_>>(),
        );
        while cur.dim() > 0 {
            let next = self.radical_of(&cur);
            let mut layer = vec![0; r];
            for (&s, e) in &cur.spaces {
                layer[s.0] += e.rank() - next.slot_rank(s);
            }
            layers.push(layer);
            cur = next;
        }
        layers
    }

    /// Layer multiplicities per slot: `[J^k M / J^{k+1} M]` keyed by slot.
    pub fn radical_layer_slots(&self) -> Vec<BTreeMap<Slot, usize>> {
        let mut layers = Vec::new();
        let mut cur = self.generate(&self.all_unit_vectors());
        while cur.dim() > 0 {
            let next = self.radical_of(&cur);
            let mut layer = BTreeMap::new();
            for (&s, e) in &cur.spaces {
                let n = e.rank() - next.slot_rank(s);
                if n > 0 {
                    layer.insert(s, n);
                }
            }
            layers.push(layer);
            cur = next;
        }
        layers
    }

    fn all_unit_vectors(&self) -> Vec<(Slot, Vec<F::Elem>)> {
        let f = self.field();
        self.dims
            .iter()
            .flat_map(|(&s, &n)| (0..n).map(move |c| (s, unit_vector(f, n, c))))
            .collect()
    }

    /// Vectors killed by every arrow.
    pub fn socle(&self) -> SlotSpaces<F> {
        let f = self.field();
        let mut spaces = self.empty_spaces();
        for (&s, &n) in &self.dims {
            let mut stacked: Vec<Vec<F::Elem>> = Vec::new();
            for a in 0..self.alg.arrow_count() {
                if self.alg.arrow_source(a) != s.0 {
                    continue;
                }
                if let Some(m) = self.action[a].get(&s.1) {
                    for r in 0..m.rows() {
                        stacked.push(m.row(r).to_vec());
                    }
                }
            }
            let ker = if stacked.is_empty() {
                (0..n).map(|c| unit_vector(f, n, c)).collect()
            } else {
                Matrix::from_rows(f, n, &stacked).kernel(f)
            };
            let e = spaces.spaces.get_mut(&s).unwrap();
            for v in ker {
                e.insert(&v);
            }
        }
        spaces
    }

    /// `[soc M : S_v<d>]` keyed by slot.
    pub fn socle_slots(&self) -> BTreeMap<Slot, usize> {
        self.socle()
            .spaces
            .into_iter()
            .filter(|(_, e)| e.rank() > 0)
            .map(|(s, e)| (s, e.rank()))
            .collect()
    }

    /// Top multiplicities keyed by slot.
    pub fn top_slots(&self) -> BTreeMap<Slot, usize> {
        let mut out = BTreeMap::new();
        for (s, _) in self.top_generators() {
            *out.entry(s).or_insert(0) += 1;
        }
        out
    }

    /// The submodule itself, with its inclusion into `self`.
    pub fn submodule(&self, sub: &SlotSpaces<F>) -> Result<(Self, GradedMap<F>)> {
        let f = self.field();
        let dims: BTreeMap<Slot, usize> = sub
            .spaces
            .iter()
            .filter(|(_, e)| e.rank() > 0)
            .map(|(&s, e)| (s, e.rank()))
            .collect();
        let mut action: Vec<BTreeMap<i64, Matrix<F>>> = vec![BTreeMap::new(); self.alg.arrow_count()];
        for a in 0..self.alg.arrow_count() {
            for (&d, _) in &self.action[a] {
                let s = (self.alg.arrow_source(a), d);
                let t = self.arrow_target_slot(a, s);
                let (Some(es), Some(et)) = (sub.spaces.get(&s), sub.spaces.get(&t)) else {
                    continue;
                };
                if es.rank() == 0 || et.rank() == 0 {
                    continue;
                }
                let mut m = Matrix::zeros(f, et.rank(), es.rank());
                for (c, row) in es.rows().iter().enumerate() {
                    let (_, img) = self.act_arrow(a, s, row).unwrap();
                    // Rows of an RREF basis: coordinates are the pivot entries.
                    for (r, &p) in et.pivots().iter().enumerate() {
                        m.set(r, c, img[p].clone());
                    }
                    debug_assert!(et.contains(&img));
                }
                action[a].insert(d, m);
            }
        }
        let mut incl = GradedMap::zero(0);
        for (&s, e) in &sub.spaces {
            if e.rank() > 0 {
                incl.blocks.insert(s, Matrix::from_columns(f, e.dim(), e.rows()));
            }
        }
        let m = Self::from_parts(&self.alg, format!("sub({})", self.label), dims, action)?;
        Ok((m, incl))
    }

    /// `self / sub` with the projection. Quotient coordinates are the
    /// non-pivot coordinates of each slot.
    pub fn quotient(&self, sub: &SlotSpaces<F>) -> Result<(Self, GradedMap<F>)> {
        let f = self.field();
        let mut keep: BTreeMap<Slot, Vec<usize>> = BTreeMap::new();
        for (&s, &n) in &self.dims {
            let np = match sub.spaces.get(&s) {
                Some(e) => e.non_pivots(),
                None => (0..n).collect(),
            };
            keep.insert(s, np);
        }
        let project = |s: Slot, v: &[F::Elem]| -> Vec<F::Elem> {
            let r = match sub.spaces.get(&s) {
                Some(e) => e.reduce(v),
                None => v.to_vec(),
            };
            keep[&s].iter().map(|&c| r[c].clone()).collect()
        };
        let dims: BTreeMap<Slot, usize> = keep
            .iter()
            .filter(|(_, k)| !k.is_empty())
            .map(|(&s, k)| (s, k.len()))
            .collect();
        let mut action: Vec<BTreeMap<i64, Matrix<F>>> = vec![BTreeMap::new(); self.alg.arrow_count()];
        for a in 0..self.alg.arrow_count() {
            for (&d, m) in &self.action[a] {
                let s = (self.alg.arrow_source(a), d);
                let t = self.arrow_target_slot(a, s);
                if keep[&s].is_empty() || keep[&t].is_empty() {
                    continue;
                }
                let cols: Vec<Vec<F::Elem>> = keep[&s]
                    .iter()
                    .map(|&c| project(t, &m.column(c)))
                    .collect();
                action[a].insert(d, Matrix::from_columns(f, keep[&t].len(), &cols));
            }
        }
        let mut proj = GradedMap::zero(0);
        for (&s, &n) in &self.dims {
            if keep[&s].is_empty() {
                continue;
            }
            let cols: Vec<Vec<F::Elem>> = (0..n).map(|c| project(s, &unit_vector(f, n, c))).collect();
            proj.blocks.insert(s, Matrix::from_columns(f, keep[&s].len(), &cols));
        }
        let m = Self::from_parts(&self.alg, format!("{}/sub", self.label), dims, action)?;
        Ok((m, proj))
    }

    /// Image of a map `other -> self` as slot spaces of `self`.
    pub fn image_of(&self, map: &GradedMap<F>) -> SlotSpaces<F> {
        let f = self.field();
        let mut spaces = self.empty_spaces();
        for (&s, m) in &map.blocks {
            let t = map.target_slot(s);
            if let Some(e) = spaces.spaces.get_mut(&t) {
                for c in 0..m.cols() {
                    let col = m.column(c);
                    if !is_zero_vec(f, &col) {
                        e.insert(&col);
                    }
                }
            }
        }
        spaces
    }

    /// Checks that `map: self -> target<shift>` commutes with every arrow.
    pub fn is_homomorphism(&self, target: &GradedModule<F>, map: &GradedMap<F>) -> bool {
        let f = self.field();
        for a in 0..self.alg.arrow_count() {
            for (&s, &n) in self.dims.range((self.alg.arrow_source(a), i64::MIN)..=(self.alg.arrow_source(a), i64::MAX)) {
                for c in 0..n {
                    let v = unit_vector(f, n, c);
                    let lhs = self
                        .act_arrow(a, s, &v)
                        .and_then(|(t, w)| map.apply(f, t, &w));
                    let rhs = map
                        .apply(f, s, &v)
                        .and_then(|w| target.act_arrow(a, map.target_slot(s), &w))
                        .map(|(_, w)| w);
                    let zero = |x: &Option<Vec<F::Elem>>| x.as_ref().map_or(true, |w| is_zero_vec(f, w));
                    match (&lhs, &rhs) {
                        (Some(x), Some(y)) if x != y => return false,
                        (Some(_), None) if !zero(&lhs) => return false,
                        (None, Some(_)) if !zero(&rhs) => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> ModuleJson {
        let f = self.field();
        ModuleJson {
            label: self.label.clone(),
            grading: self.alg.grading().as_str().to_string(),
            dims: self
                .dims
                .iter()
                .map(|(&(v, d), &n)| SlotJson {
                    vertex: v + 1,
                    degree: d,
                    dim: n,
                })
                .collect(),
            action: (0..self.alg.arrow_count())
                .flat_map(|a| {
                    self.action[a].iter().map(move |(&d, m)| ArrowActionJson {
                        arrow: self.alg.arrow_name(a).to_string(),
                        source_degree: d,
                        matrix: (0..m.rows())
                            .map(|r| m.row(r).iter().map(|x| f.format(x)).collect())
                            .collect(),
                    })
                })
                .collect(),
        }
    }
}

fn shifted_label(label: &str, j: i64) -> String {
    if j == 0 {
        label.to_string()
    } else {
        format!("{label}⟨{j}⟩")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotJson {
    pub vertex: usize,
    pub degree: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowActionJson {
    pub arrow: String,
    pub source_degree: i64,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleJson {
    pub label: String,
    pub grading: String,
    pub dims: Vec<SlotJson>,
    pub action: Vec<ArrowActionJson>,
}

/// `P_i<j> = (Λ e_i)<j>`.
pub fn projective<F: Field>(alg: &Arc<GradedAlgebra<F>>, i: usize, j: i64) -> Result<GradedModule<F>> {
    if i >= alg.vertex_count() {
        return Err(Error::VertexOutOfRange(i + 1));
    }
    let elems: Vec<usize> = (0..alg.dim()).filter(|&b| alg.element(b).source == i).collect();
    let local: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let slots: Vec<Slot> = elems
        .iter()
        .map(|&b| (alg.element(b).target, alg.element(b).degree + j))
        .collect();
    let (m, _) = GradedModule::from_basis_action(alg, shifted_label(&format!("P{}", i + 1), j), &slots, |a, k| {
        alg.mul_basis(alg.arrow_element(a), elems[k])
            .iter()
            .map(|(t, c)| (local[t], c.clone()))
            .collect()
    })?;
    Ok(m)
}

/// `S_i<j>`.
pub fn simple<F: Field>(alg: &Arc<GradedAlgebra<F>>, i: usize, j: i64) -> Result<GradedModule<F>> {
    if i >= alg.vertex_count() {
        return Err(Error::VertexOutOfRange(i + 1));
    }
    let mut dims = BTreeMap::new();
    dims.insert((i, j), 1);
    GradedModule::from_parts(
        alg,
        shifted_label(&format!("S{}", i + 1), j),
        dims,
        vec![BTreeMap::new(); alg.arrow_count()],
    )
}

/// `I_i<j> = D(e_i Λ)<j>`, with socle `S_i<j>`. No duality is needed.
pub fn injective<F: Field>(alg: &Arc<GradedAlgebra<F>>, i: usize, j: i64) -> Result<GradedModule<F>> {
    Ok(injective_with_basis(alg, i, j)?.0)
}

/// [`injective`] together with the basis elements `x` ending at `i` and the
/// module position of each dual functional `φ_x`.
pub(crate) fn injective_with_basis<F: Field>(
    alg: &Arc<GradedAlgebra<F>>,
    i: usize,
    j: i64,
) -> Result<(GradedModule<F>, Vec<usize>, Vec<(Slot, usize)>)> {
    if i >= alg.vertex_count() {
        return Err(Error::VertexOutOfRange(i + 1));
    }
    let elems: Vec<usize> = (0..alg.dim()).filter(|&b| alg.element(b).target == i).collect();
    let slots: Vec<Slot> = elems
        .iter()
        .map(|&b| (alg.element(b).source, j - alg.element(b).degree))
        .collect();
    // (a φ)(y) = φ(y a), so a φ_x = Σ_y [coefficient of x in y a] φ_y.
    let (m, pos) = GradedModule::from_basis_action(alg, shifted_label(&format!("I{}", i + 1), j), &slots, |a, k| {
        let x = elems[k];
        let mut out = Vec::new();
        for (ky, &y) in elems.iter().enumerate() {
            for (t, c) in alg.mul_basis(y, alg.arrow_element(a)) {
                if *t == x {
                    out.push((ky, c.clone()));
                }
            }
        }
        out
    })?;
    Ok((m, elems, pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::presentation::parse_presentation;

    const CATO: &str = "
        vertices: 3
        arrow a 1 2
        arrow ao 2 1
        arrow b 2 3
        arrow bo 3 2
        relation a.ao - bo.b
        relation b.bo
        duality a <-> ao
        duality b <-> bo
    ";

    fn cato() -> Arc<GradedAlgebra<Rationals>> {
        Arc::new(GradedAlgebra::build(&Rationals, &parse_presentation(CATO).unwrap(), None).unwrap())
    }

    #[test]
    fn projective_shapes() {
        let alg = cato();
        let p3 = projective(&alg, 2, 0).unwrap();
        let expect: BTreeMap<Slot, usize> = [((2, 0), 1), ((1, 1), 1), ((0, 2), 1)].into();
        assert_eq!(p3.dims(), &expect);
        let p2 = projective(&alg, 1, 1).unwrap();
        assert_eq!(p2.dim(), 5);
        assert_eq!(p2.min_degree(), Some(1));
        let p1 = projective(&alg, 0, 0).unwrap();
        assert_eq!(p1.radical_layers().iter().map(|l| l.iter().sum::<usize>()).collect::<Vec<_>>(), vec![1, 1, 2, 1, 1]);
    }

    #[test]
    fn simples_and_shifts() {
        let alg = cato();
        let s = simple(&alg, 1, -1).unwrap();
        assert_eq!(s.dims().keys().copied().collect::<Vec<_>>(), vec![(1, -1)]);
        assert!(simple(&alg, 3, 0).is_err());
        let d = s.dualize().unwrap();
        assert_eq!(d.dims().keys().copied().collect::<Vec<_>>(), vec![(1, 1)]);
    }

    #[test]
    fn injective_is_dual_projective() {
        let alg = cato();
        let i3 = injective(&alg, 2, 0).unwrap();
        assert_eq!(i3.dim(), 3);
        assert_eq!(i3.socle_slots(), [((2, 0), 1)].into());
        assert_eq!(injective(&alg, 0, 0).unwrap().dim(), 6);
        let back = i3.dualize().unwrap();
        assert_eq!(back.dims(), projective(&alg, 2, 0).unwrap().dims());
        for i in 0..3 {
            let via_duality = projective(&alg, i, 0).unwrap().dualize().unwrap();
            let direct = injective(&alg, i, 0).unwrap();
            assert_eq!(direct.dims(), via_duality.dims());
            assert_eq!(direct.radical_layers(), via_duality.radical_layers());
            assert_eq!(direct.socle_slots(), via_duality.socle_slots());
        }
    }

    #[test]
    fn quotient_and_sub_dimensions() {
        let alg = cato();
        let p2 = projective(&alg, 1, 0).unwrap();
        let rad = p2.radical();
        let (top, proj) = p2.quotient(&rad).unwrap();
        assert_eq!(top.dim(), 1);
        assert!(p2.is_homomorphism(&top, &proj));
        let (sub, incl) = p2.submodule(&rad).unwrap();
        assert_eq!(sub.dim(), 4);
        assert!(sub.is_homomorphism(&p2, &incl));
    }

    #[test]
    fn regrade_projective() {
        let alg = cato();
        let dalg = Arc::new(alg.regrade(&[1, 0, 1, 0], crate::algebra::GradingTag::Delta).unwrap());
        let h = [0i64, 1, 2];
        let p1 = projective(&alg, 0, 0).unwrap();
        let moved = p1
            .regrade(&dalg, |v, d| (d + h[v] - h[0]) / 2)
            .unwrap();
        assert_eq!(moved.dims(), projective(&dalg, 0, 0).unwrap().dims());
    }
}
