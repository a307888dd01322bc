//! Bigraded Ext spaces and Yoneda products.
//!
//! A cochain in degree `n` with shift `j` assigns to each generator
//! `g_k ∈ P^n` (sitting in slot `(v_k, d_k)`) a vector of `N_(v_k, d_k - j)`;
//! this is `Hom(P^n, N<j>)`.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_zero_vec, Echelon, Matrix, Solver};
use crate::module::{GradedModule, Slot};
use crate::resolution::{FreeModule, Resolution};

/// Where each generator's component lives inside a cochain vector.
#[derive(Clone, Debug)]
struct CochainLayout {
    /// Per generator: `(offset, dim)` of its block; dim 0 when absent.
    blocks: Vec<(usize, usize)>,
    dim: usize,
}

fn layout<F: Field>(term: &FreeModule<F>, n: &GradedModule<F>, j: i64) -> CochainLayout {
    let mut blocks = Vec::with_capacity(term.rank());
    let mut off = 0;
    for &(v, d) in term.generators() {
        let k = n.slot_dim((v, d - j));
        blocks.push((off, k));
        off += k;
    }
    CochainLayout { blocks, dim: off }
}

/// A cocycle representing a class in `Ext^n(M, N<shift>)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle<F: Field> {
    pub n: usize,
    pub shift: i64,
    /// One (possibly empty) vector per generator of `P^n`.
    pub images: Vec<Vec<F::Elem>>,
}

/// `Ext^n(M, N<j>)` with deterministic representatives.
#[derive(Clone, Debug)]
pub struct ExtSpace<F: Field> {
    pub n: usize,
    pub shift: i64,
    layout: CochainLayout,
    pub representatives: Vec<Vec<F::Elem>>,
    classifier: Option<Solver<F>>,
    field: F,
}

impl<F: Field> ExtSpace<F> {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn cochain_dim(&self) -> usize {
        self.layout.dim
    }

    pub fn to_images(&self, v: &[F::Elem]) -> Vec<Vec<F::Elem>> {
        self.layout
            .blocks
            .iter()
            .map(|&(off, k)| v[off..off + k].to_vec())
            .collect()
    }

    pub fn from_images(&self, images: &[Vec<F::Elem>]) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.layout.dim];
        for (&(off, k), img) in self.layout.blocks.iter().zip(images) {
            if img.is_empty() {
                continue;
            }
            assert_eq!(img.len(), k, "cochain block has the wrong size");
            v[off..off + k].clone_from_slice(img);
        }
        v
    }

    /// The `i`-th basis class as a cocycle.
    pub fn basis_cocycle(&self, i: usize) -> Cocycle<F> {
        Cocycle {
            n: self.n,
            shift: self.shift,
            images: self.to_images(&self.representatives[i]),
        }
    }

    /// Coordinates of a cocycle's class in the representative basis, or
    /// `None` if it is not a cocycle of this space.
    pub fn classify(&self, c: &Cocycle<F>) -> Option<Vec<F::Elem>> {
        let v = self.from_images(&c.images);
        match &self.classifier {
            None => {
                if is_zero_vec(&self.field, &v) {
                    Some(Vec::new())
                } else {
                    None
                }
            }
            Some(s) => s.solve(&v).map(|x| x[..self.dim()].to_vec()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtTable<F: Field> {
    pub spaces: BTreeMap<(usize, i64), ExtSpace<F>>,
    /// Ext^n is known for `n < range`.
    pub range: usize,
    /// The resolution terminated, so Ext vanishes for `n >= range`.
    pub complete: bool,
}

/// Nonzero bigraded dimensions `(n, j) -> dim`.
pub type ExtDims = BTreeMap<(usize, i64), usize>;

impl<F: Field> ExtTable<F> {
    pub fn dims(&self) -> ExtDims {
        self.spaces
            .iter()
            .filter(|(_, s)| s.dim() > 0)
            .map(|(&k, s)| (k, s.dim()))
            .collect()
    }

    pub fn dim(&self, n: usize, j: i64) -> usize {
        self.spaces.get(&(n, j)).map_or(0, |s| s.dim())
    }

    pub fn space(&self, n: usize, j: i64) -> Option<&ExtSpace<F>> {
        self.spaces.get(&(n, j))
    }

    pub fn total_dim(&self, n: usize) -> usize {
        self.spaces
            .iter()
            .filter(|((m, _), _)| *m == n)
            .map(|(_, s)| s.dim())
            .sum()
    }
}

/// Coboundary `C^n_j -> C^{n+1}_j`: `(δφ)(g') = φ(∂g')`.
fn coboundary<F: Field>(
    res: &Resolution<F>,
    n_mod: &GradedModule<F>,
    n: usize,
    j: i64,
    src: &CochainLayout,
    dst: &CochainLayout,
) -> Matrix<F> {
    let f = n_mod.field();
    let alg = n_mod.algebra();
    let term = &res.terms[n];
    let next = &res.terms[n + 1];
    let mut m = Matrix::zeros(f, dst.dim, src.dim);
    for (g, &(v, d)) in next.generators().iter().enumerate() {
        let (roff, rdim) = dst.blocks[g];
        if rdim == 0 {
            continue;
        }
        let img = &res.images[n + 1][g];
        for (p, c) in img.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let (k, b) = term.element_at((v, d), p);
            let (coff, cdim) = src.blocks[k];
            if cdim == 0 {
                continue;
            }
            let (vk, dk) = term.generators()[k];
            let el = alg.element(b);
            let mat = if el.is_idempotent() {
                Matrix::identity(f, cdim)
            } else {
                match n_mod.path_matrix(&el.word, (vk, dk - j)) {
                    Some((_, mat)) => mat,
                    None => continue,
                }
            };
            for r in 0..rdim {
                for cc in 0..cdim {
                    let x = mat.get(r, cc);
                    if !f.is_zero(x) {
                        let cur = m.get(roff + r, coff + cc);
                        let y = f.mul_add(cur, c, x);
                        m.set(roff + r, coff + cc, y);
                    }
                }
            }
        }
    }
    m
}

/// `Ext^n(M, N<j>)` for every `n` the resolution of `M` supports.
pub fn ext_table<F: Field>(res: &Resolution<F>, n_mod: &GradedModule<F>) -> Result<ExtTable<F>> {
    let f = n_mod.field();
    if !crate::module::same_algebra(res.target.algebra(), n_mod.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let range = res.ext_range();
    let mut spaces = BTreeMap::new();
    for n in 0..range {
        let term = &res.terms[n];
        let mut shifts: Vec<i64> = Vec::new();
        for &(v, d) in term.generators() {
            for s in n_mod.slots().filter(|s| s.0 == v) {
                shifts.push(d - s.1);
            }
        }
        shifts.sort_unstable();
        shifts.dedup();
        for j in shifts {
            let lay = layout(term, n_mod, j);
            let cocycles: Vec<Vec<F::Elem>> = if n + 1 < res.len() {
                let next = layout(&res.terms[n + 1], n_mod, j);
                coboundary(res, n_mod, n, j, &lay, &next).kernel(f)
            } else {
                (0..lay.dim).map(|i| crate::linalg::unit_vector(f, lay.dim, i)).collect()
            };
            let mut bounds = Echelon::new(f, lay.dim);
            if n > 0 {
                let prev = layout(&res.terms[n - 1], n_mod, j);
                let d = coboundary(res, n_mod, n - 1, j, &prev, &lay);
                for c in 0..d.cols() {
                    bounds.insert(&d.column(c));
                }
            }
            let coboundary_rows: Vec<Vec<F::Elem>> = bounds.rows().to_vec();
            let mut reps = Vec::new();
            for z in cocycles {
                if bounds.insert(&z) {
                    reps.push(z);
                }
            }
            let classifier = if lay.dim == 0 {
                None
            } else {
                let cols: Vec<Vec<F::Elem>> =
                    reps.iter().chain(coboundary_rows.iter()).cloned().collect();
                if cols.is_empty() {
                    None
                } else {
                    Some(Solver::new(f, &Matrix::from_columns(f, lay.dim, &cols)))
                }
            };
            spaces.insert(
                (n, j),
                ExtSpace {
                    n,
                    shift: j,
                    layout: lay,
                    representatives: reps,
                    classifier,
                    field: f.clone(),
                },
            );
        }
    }
    Ok(ExtTable {
        spaces,
        range,
        complete: res.complete,
    })
}

/// Lifts `η` and composes with `ξ`: returns a cocycle for `ξ ∘ η` in
/// `Ext^{n+m}(M, L<s1+s2>)`.
///
/// `res_m` resolves `M`, `res_n` resolves `N`; `η` is a cocycle on
/// `res_m` with values in `N`, `ξ` one on `res_n` with values in `L`.
/// With `perturb`, each lifting step adds a random element of the kernel,
/// which must not change the resulting class.
pub fn yoneda_compose<F: Field, R: Rng>(
    res_m: &Resolution<F>,
    res_n: &Resolution<F>,
    eta: &Cocycle<F>,
    xi: &Cocycle<F>,
    l_mod: &GradedModule<F>,
    mut perturb: Option<&mut R>,
) -> Result<Cocycle<F>> {
    let f = l_mod.field();
    let (n, m, s1, s2) = (eta.n, xi.n, eta.shift, xi.shift);
    if res_m.len() <= n + m || res_n.len() <= m {
        return Err(Error::Incompatible(format!(
            "resolutions too short for Ext^{n} x Ext^{m}"
        )));
    }
    if eta.images.len() != res_m.terms[n].rank() || xi.images.len() != res_n.terms[m].rank() {
        return Err(Error::Incompatible("cocycle does not match its resolution".into()));
    }
    let mut solvers: HashMap<(usize, Slot), Solver<F>> = HashMap::new();
    let mut solve = |i: usize, slot: Slot, y: &[F::Elem], rng: &mut Option<&mut R>| -> Result<Vec<F::Elem>> {
        let q = &res_n.terms[i];
        let dim = q.module().slot_dim(slot);
        if dim == 0 {
            if !is_zero_vec(f, y) {
                return Err(Error::Internal("lifting target slot is empty".into()));
            }
            return Ok(Vec::new());
        }
        let block = match res_n.maps[i].blocks.get(&slot) {
            Some(b) => b.clone(),
            None => {
                if !is_zero_vec(f, y) {
                    return Err(Error::Internal("cannot lift through a zero block".into()));
                }
                let zero = vec![f.zero(); dim];
                return Ok(zero);
            }
        };
        let solver = solvers
            .entry((i, slot))
            .or_insert_with(|| Solver::new(f, &block));
        let mut x = solver
            .solve(y)
            .ok_or_else(|| Error::Internal("chain map lifting failed".into()))?;
        if let Some(rng) = rng.as_deref_mut() {
            for k in solver.kernel() {
                let c = f.from_i64(rng.gen_range(-3..=3));
                for (xi, ki) in x.iter_mut().zip(&k) {
                    *xi = f.mul_add(xi, &c, ki);
                }
            }
        }
        Ok(x)
    };

    // η_0: P^n -> Q^0<s1>.
    let term_n = &res_m.terms[n];
    let mut lifted: Vec<Vec<F::Elem>> = Vec::with_capacity(term_n.rank());
    for (k, &(v, d)) in term_n.generators().iter().enumerate() {
        let slot = (v, d - s1);
        let target_dim = res_n.target.slot_dim(slot);
        let y = if eta.images[k].is_empty() {
            vec![f.zero(); target_dim]
        } else {
            eta.images[k].clone()
        };
        if target_dim == 0 {
            // ε has no block here; lift to zero.
            lifted.push(vec![f.zero(); res_n.terms[0].module().slot_dim(slot)]);
            continue;
        }
        lifted.push(solve(0, slot, &y, &mut perturb)?);
    }
    // η_i: P^{n+i} -> Q^i<s1>.
    for i in 1..=m {
        let prev_term = &res_m.terms[n + i - 1];
        let map = prev_term.map_from_images(res_n.terms[i - 1].module(), &lifted, s1);
        let term = &res_m.terms[n + i];
        let mut next = Vec::with_capacity(term.rank());
        for (g, &(v, d)) in term.generators().iter().enumerate() {
            let bd = &res_m.images[n + i][g];
            let slot = (v, d - s1);
            let y = map
                .apply(f, (v, d), bd)
                .unwrap_or_else(|| vec![f.zero(); res_n.terms[i - 1].module().slot_dim(slot)]);
            next.push(solve(i, slot, &y, &mut perturb)?);
        }
        lifted = next;
    }
    // ξ ∘ η_m.
    let psi = res_n.terms[m].map_from_images(l_mod, &xi.images, s2);
    let term = &res_m.terms[n + m];
    let images = term
        .generators()
        .iter()
        .enumerate()
        .map(|(g, &(v, d))| {
            let z = &lifted[g];
            let t = (v, d - s1 - s2);
            if z.is_empty() {
                return vec![f.zero(); l_mod.slot_dim(t)];
            }
            psi.apply(f, (v, d - s1), z)
                .unwrap_or_else(|| vec![f.zero(); l_mod.slot_dim(t)])
        })
        .collect();
    Ok(Cocycle {
        n: n + m,
        shift: s1 + s2,
        images,
    })
}

/// Serializable bigraded dimension table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtDimsJson {
    /// `(n, j, dim)` triples with nonzero dimension.
    pub entries: Vec<(usize, i64, usize)>,
    pub range: usize,
    pub complete: bool,
}

impl<F: Field> From<&ExtTable<F>> for ExtDimsJson {
    fn from(t: &ExtTable<F>) -> Self {
        ExtDimsJson {
            entries: t.dims().into_iter().map(|((n, j), d)| (n, j, d)).collect(),
            range: t.range,
            complete: t.complete,
        }
    }
}
