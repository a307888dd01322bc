//! Graded projective resolutions built from free modules `⊕ P_v<d>`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_zero_vec, unit_vector, Echelon, Matrix};
use crate::module::{GradedMap, GradedModule, Slot, SlotSpaces};

/// `⊕_k P_{v_k}<d_k>` with basis `(k, b)` for algebra basis elements `b`
/// starting at `v_k`.
#[derive(Clone, Debug)]
pub struct FreeModule<F: Field> {
    gens: Vec<Slot>,
    elems: Vec<(usize, usize)>,
    pos: Vec<(Slot, usize)>,
    members: BTreeMap<Slot, Vec<usize>>,
    gen_elem: Vec<usize>,
    module: GradedModule<F>,
}

impl<F: Field> FreeModule<F> {
    pub fn new(alg: &Arc<GradedAlgebra<F>>, gens: &[Slot]) -> Result<Self> {
        let r = alg.vertex_count();
        let mut from: Vec<Vec<usize>> = vec![Vec::new(); r];
        for b in 0..alg.dim() {
            from[alg.element(b).source].push(b);
        }
        let mut local = vec![0usize; alg.dim()];
        for list in &from {
            for (i, &b) in list.iter().enumerate() {
                local[b] = i;
            }
        }
        let mut elems = Vec::new();
        let mut base = Vec::with_capacity(gens.len());
        let mut slots = Vec::new();
        let mut gen_elem = Vec::with_capacity(gens.len());
        for (k, &(v, d)) in gens.iter().enumerate() {
            if v >= r {
                return Err(Error::VertexOutOfRange(v + 1));
            }
            base.push(elems.len());
            gen_elem.push(elems.len() + local[alg.idempotent(v)]);
            for &b in &from[v] {
                elems.push((k, b));
                let el = alg.element(b);
                slots.push((el.target, el.degree + d));
            }
        }
        let label = if gens.is_empty() {
            "0".to_string()
        } else {
            gens.iter()
                .map(|&(v, d)| {
                    if d == 0 {
                        format!("P{}", v + 1)
                    } else {
                        format!("P{}⟨{d}⟩", v + 1)
                    }
                })
                .collect::<Vec<_>>()
                .join(" ⊕ ")
        };
        let (module, pos) = GradedModule::from_basis_action(alg, label, &slots, |a, idx| {
            let (k, b) = elems[idx];
            alg.mul_basis(alg.arrow_element(a), b)
                .iter()
                .map(|(t, c)| (base[k] + local[*t], c.clone()))
                .collect()
        })?;
        let mut members: BTreeMap<Slot, Vec<usize>> = BTreeMap::new();
        for (idx, &(s, p)) in pos.iter().enumerate() {
            let list = members.entry(s).or_default();
            debug_assert_eq!(list.len(), p);
            list.push(idx);
        }
        Ok(FreeModule {
            gens: gens.to_vec(),
            elems,
            pos,
            members,
            gen_elem,
            module,
        })
    }

    pub fn generators(&self) -> &[Slot] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn module(&self) -> &GradedModule<F> {
        &self.module
    }

    /// `(generator, algebra element)` at position `p` of slot `s`.
    pub fn element_at(&self, s: Slot, p: usize) -> (usize, usize) {
        self.elems[self.members[&s][p]]
    }

    pub fn members(&self, s: Slot) -> &[usize] {
        self.members.get(&s).map_or(&[], |v| v.as_slice())
    }

    pub fn element(&self, idx: usize) -> (usize, usize) {
        self.elems[idx]
    }

    pub fn position(&self, idx: usize) -> (Slot, usize) {
        self.pos[idx]
    }

    /// The generator `g_k` as a vector in its slot.
    pub fn generator_vector(&self, k: usize) -> (Slot, Vec<F::Elem>) {
        let (s, p) = self.pos[self.gen_elem[k]];
        (s, unit_vector(self.module.field(), self.module.slot_dim(s), p))
    }

    /// The homomorphism to `target<shift>` sending `g_k` to `images[k]`
    /// (a vector in slot `(v_k, d_k - shift)`; empty means zero).
    pub fn map_from_images(
        &self,
        target: &GradedModule<F>,
        images: &[Vec<F::Elem>],
        shift: i64,
    ) -> GradedMap<F> {
        let f = self.module.field();
        let mut map = GradedMap::zero(shift);
        for (&s, list) in &self.members {
            let t = (s.0, s.1 - shift);
            let rows = target.slot_dim(t);
            if rows == 0 {
                continue;
            }
            let mut m = Matrix::zeros(f, rows, list.len());
            let mut nonzero = false;
            for (c, &idx) in list.iter().enumerate() {
                let (k, b) = self.elems[idx];
                let img = &images[k];
                if img.is_empty() || is_zero_vec(f, img) {
                    continue;
                }
                let (v, d) = self.gens[k];
                if let Some((ts, w)) = target.act_element(b, (v, d - shift), img) {
                    debug_assert_eq!(ts, t);
                    for (r, x) in w.into_iter().enumerate() {
                        if !f.is_zero(&x) {
                            nonzero = true;
                            m.set(r, c, x);
                        }
                    }
                }
            }
            if nonzero {
                map.blocks.insert(s, m);
            }
        }
        map
    }

    /// True when `v` (in slot `s`) has no component on any generator,
    /// i.e. lies in the radical.
    pub fn in_radical(&self, s: Slot, v: &[F::Elem]) -> bool {
        let f = self.module.field();
        let alg = self.module.algebra();
        v.iter().enumerate().all(|(p, c)| {
            f.is_zero(c) || !alg.element(self.element_at(s, p).1).is_idempotent()
        })
    }
}

/// How a kernel is covered at each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cover {
    /// Projective cover of the top: a minimal resolution.
    Minimal,
    /// One generator per basis vector of the kernel.
    AllBasis,
}

#[derive(Clone, Debug)]
pub struct Resolution<F: Field> {
    pub target: GradedModule<F>,
    pub terms: Vec<FreeModule<F>>,
    /// `images[n][k]`: image of generator `k` of `terms[n]` in the previous
    /// term (or in `target` for `n = 0`).
    pub images: Vec<Vec<Vec<F::Elem>>>,
    pub maps: Vec<GradedMap<F>>,
    /// The last computed kernel vanished.
    pub complete: bool,
    pub minimal: bool,
}

/// Summary of one resolution term: multiplicities of `P_v<d>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermSummary {
    pub step: usize,
    /// `(vertex, shift, multiplicity)`, 1-based vertices.
    pub summands: Vec<(usize, i64, usize)>,
}

impl<F: Field> Resolution<F> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn generators(&self, n: usize) -> &[Slot] {
        self.terms.get(n).map_or(&[], |t| t.generators())
    }

    pub fn multiset(&self, n: usize) -> BTreeMap<Slot, usize> {
        let mut out = BTreeMap::new();
        for &g in self.generators(n) {
            *out.entry(g).or_insert(0) += 1;
        }
        out
    }

    pub fn summary(&self) -> Vec<TermSummary> {
        (0..self.len())
            .map(|n| TermSummary {
                step: n,
                summands: self
                    .multiset(n)
                    .into_iter()
                    .map(|((v, d), m)| (v + 1, d, m))
                    .collect(),
            })
            .collect()
    }

    /// Human-readable `0 → P^n → … → P^0 → M → 0`.
    pub fn display(&self) -> String {
        let mut parts = vec!["0".to_string()];
        for t in self.terms.iter().rev() {
            parts.push(t.module().label().to_string());
        }
        parts.push(self.target.label().to_string());
        parts.push("0".to_string());
        if !self.complete {
            parts[0] = "…".to_string();
        }
        parts.join(" → ")
    }

    /// Every generator image has no component on a generator.
    pub fn check_minimal(&self) -> bool {
        for n in 1..self.len() {
            let prev = &self.terms[n - 1];
            for (k, img) in self.images[n].iter().enumerate() {
                let (v, d) = self.terms[n].generators()[k];
                if !prev.in_radical((v, d), img) {
                    return false;
                }
            }
        }
        true
    }

    /// `∂∘∂ = 0`, `ε` onto, and exactness at every computed term.
    pub fn check_exact(&self) -> bool {
        let f = self.target.field();
        if self.is_empty() {
            return self.target.is_zero();
        }
        if self.target.image_of(&self.maps[0]).dim() != self.target.dim() {
            return false;
        }
        for n in 0..self.len() {
            let ker = kernel_spaces(self.terms[n].module(), &self.maps[n]).dim();
            let img = if n + 1 < self.len() {
                self.terms[n].module().image_of(&self.maps[n + 1]).dim()
            } else {
                0
            };
            let last = n + 1 == self.len();
            if (!last || self.complete) && ker != img {
                return false;
            }
            if n + 1 < self.len() {
                let comp = self.maps[n].compose(f, &self.maps[n + 1]);
                if !comp.is_zero(f) {
                    return false;
                }
            }
        }
        true
    }

    /// Generators of term `n` sit in degree `n + base` where `base` is the
    /// common degree of the generators of term 0.
    pub fn is_linear(&self) -> bool {
        let Some(&(_, base)) = self.generators(0).first() else {
            return true;
        };
        (0..self.len()).all(|n| {
            self.generators(n)
                .iter()
                .all(|&(_, d)| d == base + n as i64)
        })
    }

    /// Highest `n` for which Ext^n can be read off this resolution.
    pub fn ext_range(&self) -> usize {
        if self.complete {
            self.len()
        } else {
            self.len().saturating_sub(1)
        }
    }
}

/// Per-slot kernel of a map out of `m`.
pub fn kernel_spaces<F: Field>(m: &GradedModule<F>, map: &GradedMap<F>) -> SlotSpaces<F> {
    let f = m.field();
    let mut spaces = m.empty_spaces();
    for (&s, e) in spaces.spaces.iter_mut() {
        let n = m.slot_dim(s);
        let basis = match map.blocks.get(&s) {
            Some(block) => block.kernel(f),
            None => (0..n).map(|c| unit_vector(f, n, c)).collect(),
        };
        for v in basis {
            e.insert(&v);
        }
    }
    spaces
}

fn full_spaces<F: Field>(m: &GradedModule<F>) -> SlotSpaces<F> {
    let f = m.field();
    let mut spaces = m.empty_spaces();
    for (&s, e) in spaces.spaces.iter_mut() {
        let n = m.slot_dim(s);
        for c in 0..n {
            e.insert(&unit_vector(f, n, c));
        }
    }
    spaces
}

fn cover_generators<F: Field>(
    x: &GradedModule<F>,
    k: &SlotSpaces<F>,
    cover: Cover,
) -> Vec<(Slot, Vec<F::Elem>)> {
    let mut out = Vec::new();
    match cover {
        Cover::Minimal => {
            let jk = x.radical_of(k);
            for (&s, e) in &k.spaces {
                let mut span: Echelon<F> = jk.spaces[&s].clone();
                for row in e.rows() {
                    if span.insert(row) {
                        out.push((s, row.clone()));
                    }
                }
            }
        }
        Cover::AllBasis => {
            for (&s, e) in &k.spaces {
                for row in e.rows() {
                    out.push((s, row.clone()));
                }
            }
        }
    }
    out
}

/// `(P, ε)`: the projective cover of `m` with its epimorphism.
pub fn projective_cover<F: Field>(m: &GradedModule<F>) -> Result<(FreeModule<F>, GradedMap<F>)> {
    let gens = cover_generators(m, &full_spaces(m), Cover::Minimal);
    let slots: Vec<Slot> = gens.iter().map(|(s, _)| *s).collect();
    let free = FreeModule::new(m.algebra(), &slots)?;
    let images: Vec<Vec<F::Elem>> = gens.into_iter().map(|(_, v)| v).collect();
    let eps = free.map_from_images(m, &images, 0);
    Ok((free, eps))
}

/// Iterated covers of kernels, computing terms `0..=n_max` at most.
pub fn resolve<F: Field>(
    m: &GradedModule<F>,
    n_max: usize,
    cover: Cover,
    size_guard: Option<usize>,
) -> Result<Resolution<F>> {
    let alg = m.algebra();
    let mut res = Resolution {
        target: m.clone(),
        terms: Vec::new(),
        images: Vec::new(),
        maps: Vec::new(),
        complete: m.is_zero(),
        minimal: cover == Cover::Minimal,
    };
    let mut kernel = full_spaces(m);
    for n in 0..=n_max {
        let prev = if n == 0 {
            m
        } else {
            res.terms[n - 1].module()
        };
        let gens = cover_generators(prev, &kernel, cover);
        if gens.is_empty() {
            res.complete = true;
            break;
        }
        let slots: Vec<Slot> = gens.iter().map(|(s, _)| *s).collect();
        let free = FreeModule::new(alg, &slots)?;
        if let Some(limit) = size_guard {
            if free.module().dim() > limit {
                return Err(Error::SizeGuard(format!(
                    "term {n} has dimension {} > {limit}",
                    free.module().dim()
                )));
            }
        }
        let images: Vec<Vec<F::Elem>> = gens.into_iter().map(|(_, v)| v).collect();
        let map = free.map_from_images(prev, &images, 0);
        kernel = kernel_spaces(free.module(), &map);
        res.terms.push(free);
        res.images.push(images);
        res.maps.push(map);
        if kernel.dim() == 0 {
            res.complete = true;
            break;
        }
    }
    Ok(res)
}

pub fn minimal_resolution<F: Field>(m: &GradedModule<F>, n_max: usize) -> Result<Resolution<F>> {
    resolve(m, n_max, Cover::Minimal, None)
}

/// Default resolution length bound: `dim Λ`.
pub fn default_n_max<F: Field>(alg: &GradedAlgebra<F>) -> usize {
    alg.dim()
}

/// Outcome of a Koszulity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulVerdict {
    pub passed: bool,
    /// Per module: was the computed part linear, and did it terminate.
    pub modules: Vec<KoszulEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulEntry {
    pub label: String,
    pub linear: bool,
    pub complete: bool,
    pub length: usize,
    /// First generator `(step, vertex, degree)` off the diagonal.
    pub witness: Option<(usize, usize, i64)>,
}

fn koszul_entry<F: Field>(res: &Resolution<F>) -> KoszulEntry {
    let base = res.generators(0).first().map_or(0, |g| g.1);
    let mut witness = None;
    'outer: for n in 0..res.len() {
        for &(v, d) in res.generators(n) {
            if d != base + n as i64 {
                witness = Some((n, v + 1, d));
                break 'outer;
            }
        }
    }
    KoszulEntry {
        label: res.target.label().to_string(),
        linear: witness.is_none(),
        complete: res.complete,
        length: res.len().saturating_sub(1),
        witness,
    }
}

/// All simples `S_i` have linear resolutions (up to `n_max` terms when
/// they do not terminate).
pub fn is_classical_koszul<F: Field>(
    alg: &Arc<GradedAlgebra<F>>,
    n_max: usize,
) -> Result<KoszulVerdict> {
    if (0..alg.arrow_count()).any(|a| alg.arrow_degree(a) <= 0) {
        return Err(Error::Regrade(
            "degree-zero part is not semisimple: some arrow has degree 0".into(),
        ));
    }
    let mut modules = Vec::new();
    for i in 0..alg.vertex_count() {
        let s = crate::module::simple(alg, i, 0)?;
        let res = minimal_resolution(&s, n_max)?;
        modules.push(koszul_entry(&res));
    }
    Ok(KoszulVerdict {
        passed: modules.iter().all(|e| e.linear),
        modules,
    })
}

/// Koszul entries for a prepared list of resolutions.
pub fn linearity_verdict<F: Field>(resolutions: &[Resolution<F>]) -> KoszulVerdict {
    let modules: Vec<KoszulEntry> = resolutions.iter().map(koszul_entry).collect();
    KoszulVerdict {
        passed: modules.iter().all(|e| e.linear),
        modules,
    }
}

/// `E[i][j] = Σ_n (-1)^n [P^n(S_j) : P_i]` from minimal resolutions.
pub fn euler_matrix<F: Field>(alg: &Arc<GradedAlgebra<F>>, n_max: usize) -> Result<Option<Vec<Vec<i64>>>> {
    let r = alg.vertex_count();
    let mut e = vec![vec![0i64; r]; r];
    for j in 0..r {
        let res = minimal_resolution(&crate::module::simple(alg, j, 0)?, n_max)?;
        if !res.complete {
            return Ok(None);
        }
        for n in 0..res.len() {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            for &(v, _) in res.generators(n) {
                e[v][j] += sign;
            }
        }
    }
    Ok(Some(e))
}

pub fn int_matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}
