//! The extension algebra `Γ = [Ext*(Δ, Δ)]^op`, its quiver presentation
//! and the checks that relate it back to Λ.
//!
//! `Ext^n(Δ_i, Δ_j)` is identified with `e_i Γ e_j`, so a class there is a
//! path from vertex `j` to vertex `i`. The product is `x · y = y ∘ x`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{GradedAlgebra, GradingTag};
use crate::delta::{DeltaGrading, DeltaResolutions};
use crate::error::{Error, Result};
use crate::ext::{ext_table, yoneda_compose, Cocycle, ExtTable};
use crate::field::Field;
use crate::hom::graded_hom;
use crate::linalg::{is_zero_vec, Echelon, Matrix, Solver};
use crate::module::{simple, GradedModule, Slot};
use crate::presentation::{AlgebraPresentation, Arrow, Path, Relation};
use crate::quasi_hereditary::StandardFamily;
use crate::resolution::{is_classical_koszul, minimal_resolution, KoszulVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaBasis {
    /// Γ-path source `j` of a class in `Ext^n(Δ_i, Δ_j)`.
    pub source: usize,
    /// Γ-path target `i`.
    pub target: usize,
    pub ext_degree: usize,
    pub label: String,
}

/// Γ with exact structure constants.
#[derive(Clone, Debug)]
pub struct ExtAlgebra<F: Field> {
    field: F,
    vertex_count: usize,
    basis: Vec<GammaBasis>,
    /// `mult[x * dim + y] = x · y`.
    mult: Vec<Vec<(usize, F::Elem)>>,
    idempotents: Vec<usize>,
    cocycles: Vec<Cocycle<F>>,
}

type RawProduct<F> = Vec<(usize, <F as Field>::Elem)>;

impl<F: Field> ExtAlgebra<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GammaBasis] {
        &self.basis
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }

    pub fn is_idempotent(&self, b: usize) -> bool {
        self.idempotents.contains(&b)
    }

    /// Representative cocycle of a basis element.
    pub fn cocycle(&self, b: usize) -> &Cocycle<F> {
        &self.cocycles[b]
    }

    pub fn mul_basis(&self, x: usize, y: usize) -> &[(usize, F::Elem)] {
        &self.mult[x * self.dim() + y]
    }

    pub fn mul(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                let ab = f.mul(a, b);
                for (t, c) in self.mul_basis(i, j) {
                    out[*t] = f.mul_add(&out[*t], &ab, c);
                }
            }
        }
        out
    }

    /// `dim Γ` per Ext-degree.
    pub fn ext_dims(&self) -> Vec<usize> {
        let top = self.basis.iter().map(|b| b.ext_degree).max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for b in &self.basis {
            out[b.ext_degree] += 1;
        }
        out
    }

    /// `dim e_i Γ e_j` in Ext-degree `n`, keyed `(i, j, n)` (0-based).
    pub fn slot_dims(&self) -> BTreeMap<(usize, usize, i64), usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry((b.target, b.source, b.ext_degree as i64)).or_insert(0) += 1;
        }
        out
    }

    pub fn check_associativity(&self) -> std::result::Result<(), (usize, usize, usize)> {
        let f = &self.field;
        let n = self.dim();
        let unit = |i: usize| crate::linalg::unit_vector(f, n, i);
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(&unit(x), &unit(y));
                for z in 0..n {
                    let yz = self.mul(&unit(y), &unit(z));
                    if self.mul(&xy, &unit(z)) != self.mul(&unit(x), &yz) {
                        return Err((x, y, z));
                    }
                }
            }
        }
        Ok(())
    }

    /// `dim Γ` per `deg_H`, where `deg_H(e_i Γ e_j) = h(j) - h(i)`.
    pub fn h_degrees(&self, h: &[i64]) -> Vec<i64> {
        self.basis.iter().map(|b| h[b.source] - h[b.target]).collect()
    }
}

/// Assembles Γ from the Δ-graded resolutions of the standard modules.
///
/// Fails unless every resolution is complete and every nonzero
/// `Ext^n(Δ_i, Δ_j<s>)` has `s = n`.
pub fn build_gamma<F: Field>(res: &DeltaResolutions<F>) -> Result<ExtAlgebra<F>> {
    let r = res.deltas.len();
    let f = res
        .deltas
        .first()
        .map(|d| d.field().clone())
        .ok_or_else(|| Error::Internal("no standard modules".into()))?;
    if !res.resolutions.iter().all(|x| x.complete) {
        return Err(Error::Incompatible(
            "a standard module has no finite resolution within the bound".into(),
        ));
    }
    let tables: Vec<Vec<ExtTable<F>>> = res
        .resolutions
        .iter()
        .map(|ri| res.deltas.iter().map(|dj| ext_table(ri, dj)).collect())
        .collect::<Result<_>>()?;
    let mut basis = Vec::new();
    let mut cocycles = Vec::new();
    let mut idempotents = Vec::new();
    // (i, j, n) -> first basis index; classes are consecutive.
    let mut start: HashMap<(usize, usize, usize), usize> = HashMap::new();
    // Coordinate of the identity in its one-dimensional space.
    let mut unit_scale: Vec<F::Elem> = Vec::new();
    for i in 0..r {
        let space = tables[i][i]
            .space(0, 0)
            .filter(|s| s.dim() == 1)
            .ok_or_else(|| Error::Incompatible(format!("End(Δ{}) is not one-dimensional", i + 1)))?;
        let id = Cocycle {
            n: 0,
            shift: 0,
            images: res.resolutions[i].images[0].clone(),
        };
        let c = space
            .classify(&id)
            .ok_or_else(|| Error::Internal("identity is not a cocycle".into()))?;
        unit_scale.push(c[0].clone());
        start.insert((i, i, 0), basis.len());
        idempotents.push(basis.len());
        basis.push(GammaBasis {
            source: i,
            target: i,
            ext_degree: 0,
            label: format!("e{}", i + 1),
        });
        cocycles.push(id);
    }
    for i in 0..r {
        for j in 0..r {
            for ((n, s), d) in tables[i][j].dims() {
                if s != n as i64 {
                    return Err(Error::Incompatible(format!(
                        "Ext^{n}(Δ{}, Δ{}<{s}>) is nonzero",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j && n == 0 {
                    continue;
                }
                let space = tables[i][j].space(n, s).unwrap();
                start.insert((i, j, n), basis.len());
                for k in 0..d {
                    basis.push(GammaBasis {
                        source: j,
                        target: i,
                        ext_degree: n,
                        label: format!("Ext{n}(Δ{},Δ{})#{}", i + 1, j + 1, k + 1),
                    });
                    cocycles.push(space.basis_cocycle(k));
                }
            }
        }
    }
    let dim = basis.len();
    let coords = |i: usize, k: usize, c: &Cocycle<F>| -> Result<RawProduct<F>> {
        let Some(space) = tables[i][k].space(c.n, c.shift) else {
            return Ok(Vec::new());
        };
        if space.dim() == 0 {
            return Ok(Vec::new());
        }
        let v = space
            .classify(c)
            .ok_or_else(|| Error::Internal("Yoneda product is not a cocycle".into()))?;
        let base = start[&(i, k, c.n)];
        let mut out = Vec::new();
        for (t, x) in v.into_iter().enumerate() {
            if f.is_zero(&x) {
                continue;
            }
            let x = if i == k && c.n == 0 {
                f.mul(&x, &f.inv(&unit_scale[i]).unwrap())
            } else {
                x
            };
            out.push((base + t, x));
        }
        Ok(out)
    };
    let mut mult: Vec<RawProduct<F>> = vec![Vec::new(); dim * dim];
    for x in 0..dim {
        for y in 0..dim {
            let (bx, by) = (&basis[x], &basis[y]);
            if bx.source != by.target {
                continue;
            }
            let entry = if idempotents.contains(&x) {
                vec![(y, f.one())]
            } else if idempotents.contains(&y) {
                vec![(x, f.one())]
            } else {
                let (i, j, k) = (bx.target, bx.source, by.source);
                let (n, m) = (bx.ext_degree, by.ext_degree);
                if n + m >= res.resolutions[i].len() {
                    Vec::new()
                } else {
                    let c = yoneda_compose::<F, rand::rngs::ThreadRng>(
                        &res.resolutions[i],
                        &res.resolutions[j],
                        &cocycles[x],
                        &cocycles[y],
                        &res.deltas[k],
                        None,
                    )?;
                    if c.images.iter().all(|v| is_zero_vec(&f, v)) {
                        Vec::new()
                    } else {
                        coords(i, k, &c)?
                    }
                }
            };
            mult[x * dim + y] = entry;
        }
    }
    Ok(ExtAlgebra {
        field: f,
        vertex_count: r,
        basis,
        mult,
        idempotents,
        cocycles,
    })
}

/// A quiver presentation of Γ together with the Γ element behind each arrow.
#[derive(Clone, Debug)]
pub struct GabrielPresentation {
    pub presentation: AlgebraPresentation,
    pub arrow_elements: Vec<usize>,
    /// The presentation rebuilds an algebra with Γ's bigraded dimensions.
    pub sound: bool,
}

impl GabrielPresentation {
    pub fn to_text(&self) -> String {
        self.presentation.to_text()
    }
}

/// The radical is spanned by every basis element other than the
/// identities, which holds because degree-0 endomorphism rings are `k`.
/// Arrows span a complement of `rad² Γ` in `rad Γ`, chosen from the Ext
/// basis slot by slot; relations are the kernel of the path evaluation map
/// in each length, modulo the ideal generated by shorter relations.
///
/// The simple ordering of the output lists vertices by increasing `h`.
pub fn gabriel_presentation<F: Field>(gamma: &ExtAlgebra<F>, h: &[i64]) -> Result<GabrielPresentation> {
    let f = gamma.field();
    let n = gamma.dim();
    let r = gamma.vertex_count();
    for v in 0..r {
        let units = gamma
            .basis()
            .iter()
            .filter(|b| b.source == v && b.target == v && b.ext_degree == 0)
            .count();
        if units != 1 {
            return Err(Error::Incompatible(format!(
                "degree-0 part of e{0} Γ e{0} has dimension {units}; Γ is not basic",
                v + 1
            )));
        }
    }
    let rad: Vec<usize> = (0..n).filter(|&b| !gamma.is_idempotent(b)).collect();
    // Group radical elements by (source, target, degree).
    let mut slots: BTreeMap<(usize, usize, usize), Vec<usize>> = BTreeMap::new();
    for &b in &rad {
        let e = &gamma.basis()[b];
        slots.entry((e.source, e.target, e.ext_degree)).or_default().push(b);
    }
    let mut rad2 = Echelon::new(f, n);
    for &x in &rad {
        for &y in &rad {
            let p = gamma.mul_basis(x, y);
            if !p.is_empty() {
                let mut v = vec![f.zero(); n];
                for (t, c) in p {
                    v[*t] = c.clone();
                }
                rad2.insert(&v);
            }
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_elements = Vec::new();
    for ((s, t, d), elems) in &slots {
        let mut idx = 0;
        for &b in elems {
            if rad2.insert(&crate::linalg::unit_vector(f, n, b)) {
                arrows.push(Arrow {
                    name: format!("x{}_{}_d{}_{}", s + 1, t + 1, d, idx),
                    source: *s,
                    target: *t,
                    degree: Some(*d as i64),
                });
                arrow_elements.push(b);
                idx += 1;
            }
        }
    }
    let mut pres = AlgebraPresentation::new(r);
    pres.arrows = arrows;
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&v| (h.get(v).copied().unwrap_or(0), v));
    pres.order = order;

    // Length-1 paths and their values.
    let unit = |b: usize| crate::linalg::unit_vector(f, n, b);
    let mut paths: Vec<Path> = (0..pres.arrows.len()).map(|a| vec![a]).collect();
    let mut values: Vec<Vec<F::Elem>> = arrow_elements.iter().map(|&b| unit(b)).collect();
    let mut kernel_prev: Vec<Vec<F::Elem>> = Vec::new();
    let mut prev_paths: Vec<Path> = paths.clone();
    let mut length = 1;
    loop {
        length += 1;
        let mut next_paths = Vec::new();
        let mut next_values = Vec::new();
        for (p, v) in paths.iter().zip(&values) {
            let end = pres.arrows[*p.last().unwrap()].target;
            for (a, arrow) in pres.arrows.iter().enumerate() {
                if arrow.source == end {
                    let mut q = p.clone();
                    q.push(a);
                    next_paths.push(q);
                    next_values.push(gamma.mul(&unit(arrow_elements[a]), v));
                }
            }
        }
        if next_paths.is_empty() || length > n + 2 {
            break;
        }
        let index: HashMap<&Path, usize> = next_paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let m = next_paths.len();
        // Ideal generated by shorter relations, in length `length`.
        let mut ideal = Echelon::new(f, m);
        for rel in &kernel_prev {
            for a in 0..pres.arrows.len() {
                for extend_after in [true, false] {
                    let mut v = vec![f.zero(); m];
                    let mut any = false;
                    for (k, c) in rel.iter().enumerate() {
                        if f.is_zero(c) {
                            continue;
                        }
                        let mut q = prev_paths[k].clone();
                        if extend_after {
                            q.push(a);
                        } else {
                            q.insert(0, a);
                        }
                        if let Some(&i) = index.get(&q) {
                            v[i] = c.clone();
                            any = true;
                        }
                    }
                    if any {
                        ideal.insert(&v);
                    }
                }
            }
        }
        // Full kernel of the evaluation map.
        let eval = Matrix::from_columns(f, n, &next_values);
        let kernel = eval.kernel(f);
        let all_zero = next_values.iter().all(|v| is_zero_vec(f, v));
        for k in &kernel {
            if ideal.insert(k) {
                let terms = k
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !f.is_zero(c))
                    .map(|(i, c)| {
                        let q = f
                            .to_rational(c)
                            .ok_or_else(|| Error::Field("coefficient has no rational lift".into()))?;
                        Ok((q, next_paths[i].clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                pres.relations.push(Relation { terms });
            }
        }
        if all_zero {
            break;
        }
        kernel_prev = kernel;
        prev_paths = next_paths.clone();
        paths = next_paths;
        values = next_values;
    }
    pres.validate()?;
    let sound = match GradedAlgebra::build(f, &pres, None)
        .and_then(|a| a.regrade(&pres.declared_degrees(), GradingTag::Ext))
    {
        Ok(a) => a.slot_dims() == gamma.slot_dims(),
        Err(_) => false,
    };
    Ok(GabrielPresentation {
        presentation: pres,
        arrow_elements,
        sound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectedVerdict {
    pub passed: bool,
    /// `(i, j)` with `e_i Γ e_j ≠ 0`, `i ≠ j` but `h(i) ≥ h(j)`; 1-based.
    pub violations: Vec<(usize, usize)>,
}

pub fn check_directed<F: Field>(gamma: &ExtAlgebra<F>, h: &[i64]) -> DirectedVerdict {
    let mut violations: Vec<(usize, usize)> = gamma
        .basis()
        .iter()
        .enumerate()
        .filter(|(b, _)| !gamma.is_idempotent(*b))
        .filter(|(_, e)| h[e.target] >= h[e.source])
        .map(|(_, e)| (e.target + 1, e.source + 1))
        .collect();
    violations.dedup();
    DirectedVerdict {
        passed: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HGradingVerdict {
    pub passed: bool,
    /// `dim Γ_{k}` under `deg_H`.
    pub dims: Vec<usize>,
}

/// Re-buckets Γ by `deg_H`; degree 0 must be spanned by the identities and
/// every other element must have positive degree.
pub fn h_regrade_gamma<F: Field>(gamma: &ExtAlgebra<F>, h: &[i64]) -> HGradingVerdict {
    let degs = gamma.h_degrees(h);
    let mut passed = true;
    let top = degs.iter().copied().max().unwrap_or(0).max(0) as usize;
    let mut dims = vec![0; top + 1];
    for (b, &d) in degs.iter().enumerate() {
        let idem = gamma.is_idempotent(b);
        if (idem && d != 0) || (!idem && d <= 0) {
            passed = false;
        }
        if d >= 0 {
            dims[d as usize] += 1;
        }
    }
    passed &= dims[0] == gamma.vertex_count();
    HGradingVerdict { passed, dims }
}

/// The Gabriel presentation regraded by `deg_H` on arrows.
pub fn gamma_h_algebra<F: Field>(
    field: &F,
    gp: &GabrielPresentation,
    h: &[i64],
) -> Result<Arc<GradedAlgebra<F>>> {
    let p = &gp.presentation;
    let a = GradedAlgebra::build(field, p, None)?;
    let degs: Vec<i64> = p.arrows.iter().map(|x| h[x.source] - h[x.target]).collect();
    Ok(Arc::new(a.regrade(&degs, GradingTag::H)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaKoszulVerdict {
    pub passed: bool,
    pub linear: Option<KoszulVerdict>,
    /// `(i, j, w)` with `Ext^w(S_i, S_j) ≠ 0` but `w ≠ h(i) - h(j)`; 1-based.
    pub violations: Vec<(usize, usize, usize)>,
    pub reason: Option<String>,
}

/// Classical Koszulity of Γ under `deg_H`, together with
/// `Ext^w_Γ(S_i, S_j) = 0` whenever `w ≠ h(i) - h(j)`.
pub fn check_gamma_classical_koszul<F: Field>(
    field: &F,
    gp: &GabrielPresentation,
    h: &[i64],
) -> Result<GammaKoszulVerdict> {
    let alg = match gamma_h_algebra(field, gp, h) {
        Ok(a) => a,
        Err(e) => {
            return Ok(GammaKoszulVerdict {
                passed: false,
                linear: None,
                violations: Vec::new(),
                reason: Some(e.to_string()),
            })
        }
    };
    let n_max = alg.dim() + 1;
    let linear = match is_classical_koszul(&alg, n_max) {
        Ok(v) => v,
        Err(e) => {
            return Ok(GammaKoszulVerdict {
                passed: false,
                linear: None,
                violations: Vec::new(),
                reason: Some(e.to_string()),
            })
        }
    };
    let mut violations = Vec::new();
    let mut complete = true;
    for i in 0..alg.vertex_count() {
        let res = minimal_resolution(&simple(&alg, i, 0)?, n_max)?;
        complete &= res.complete;
        for w in 0..res.len() {
            for &(j, _) in res.generators(w) {
                if w as i64 != h[i] - h[j] {
                    violations.push((i + 1, j + 1, w));
                }
            }
        }
    }
    violations.sort_unstable();
    violations.dedup();
    Ok(GammaKoszulVerdict {
        passed: linear.passed && violations.is_empty() && complete,
        linear: Some(linear),
        violations,
        reason: (!complete).then(|| "a simple Γ-module has no finite resolution".into()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostandardEntry {
    pub index: usize,
    pub hom_dim: usize,
    /// `(n, shift, dim)` for every nonzero `Ext^n(Δ, ∇_i<shift>)` other
    /// than `(0, 0)`.
    pub stray: Vec<(usize, i64, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostandardVerdict {
    pub passed: bool,
    pub entries: Vec<CostandardEntry>,
}

/// In the Δ-grading: `dim Hom(Δ, ∇_i) = 1` and `Ext^n(Δ, ∇_i<j>) = 0`
/// whenever `(n, j) ≠ (0, 0)`.
pub fn costandard_to_simple_check<F: Field>(
    dg: &DeltaGrading<F>,
    family: &StandardFamily<F>,
    res: &DeltaResolutions<F>,
) -> Result<CostandardVerdict> {
    let nablas = &family.nablas;
    let mut entries = Vec::new();
    for (i, nab) in nablas.iter().enumerate() {
        let nd = dg.regrade_module(nab, (i, 0))?;
        let mut hom_dim = 0;
        let mut stray = BTreeMap::new();
        for rk in &res.resolutions {
            for ((n, s), d) in ext_table(rk, &nd)?.dims() {
                if (n, s) == (0, 0) {
                    hom_dim += d;
                } else {
                    *stray.entry((n, s)).or_insert(0) += d;
                }
            }
        }
        entries.push(CostandardEntry {
            index: i + 1,
            hom_dim,
            stray: stray.into_iter().map(|((n, s), d)| (n, s, d)).collect(),
        });
    }
    Ok(CostandardVerdict {
        passed: entries.iter().all(|e| e.hom_dim == 1 && e.stray.is_empty()),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleDualVerdict {
    pub passed: bool,
    /// `dim Ext^n_Γ(DΔ, DΔ<n>)` for `n = 0..`.
    pub ext_dims: Vec<usize>,
    /// `dim Λ_[n]`.
    pub expected: Vec<usize>,
    /// Nonzero `Ext^n(DΔ, DΔ<s>)` with `s ≠ n`.
    pub off_diagonal: Vec<(usize, i64, usize)>,
    pub complete: bool,
}

/// `DΔ` as a graded Γ-module concentrated in degree 0: vertex `i` carries
/// `D(Δ_i)`, a degree-0 arrow acts by the transpose of its Hom map and the
/// other arrows act by zero.
pub fn dual_delta_module<F: Field>(
    gamma: &ExtAlgebra<F>,
    gp: &GabrielPresentation,
    gamma_alg: &Arc<GradedAlgebra<F>>,
    res: &DeltaResolutions<F>,
) -> Result<GradedModule<F>> {
    dual_delta_part(gamma, gp, gamma_alg, res, None)
}

/// The summand `D(e_v Δ)` of `DΔ`, or all of `DΔ` when `part` is `None`.
/// Homomorphisms between standard modules preserve Λ-vertices, so these
/// summands are Γ-submodules.
pub fn dual_delta_part<F: Field>(
    gamma: &ExtAlgebra<F>,
    gp: &GabrielPresentation,
    gamma_alg: &Arc<GradedAlgebra<F>>,
    res: &DeltaResolutions<F>,
    part: Option<usize>,
) -> Result<GradedModule<F>> {
    let f = gamma.field();
    let deltas = &res.deltas;
    let keep = |s: &Slot| part.is_none_or(|v| s.0 == v);
    let offsets: Vec<BTreeMap<Slot, usize>> = deltas
        .iter()
        .map(|d| {
            let mut off = 0;
            d.dims()
                .iter()
                .filter(|(s, _)| keep(s))
                .map(|(&s, &n)| {
                    let o = off;
                    off += n;
                    (s, o)
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = deltas
        .iter()
        .map(|d| d.dims().iter().filter(|(s, _)| keep(s)).map(|(_, n)| n).sum())
        .collect();
    let mut dims = BTreeMap::new();
    for (i, &n) in sizes.iter().enumerate() {
        if n > 0 {
            dims.insert((i, 0i64), n);
        }
    }
    let mut action: Vec<BTreeMap<i64, Matrix<F>>> = vec![BTreeMap::new(); gamma_alg.arrow_count()];
    for (a, arrow) in gp.presentation.arrows.iter().enumerate() {
        if arrow.degree != Some(0) {
            continue;
        }
        let (j, i) = (arrow.source, arrow.target);
        let x = gp.arrow_elements[a];
        // The class lives in Hom(Δ_i, Δ_j); recover the full map from its
        // value on the top of Δ_i.
        let homs = graded_hom(&deltas[i], &deltas[j], 0)?;
        let top: Slot = (i, 0);
        let wanted = gamma.cocycle(x).images[0].clone();
        let cols: Vec<Vec<F::Elem>> = homs
            .basis
            .iter()
            .map(|g| {
                g.apply(f, top, &[f.one()])
                    .unwrap_or_else(|| vec![f.zero(); deltas[j].slot_dim(top)])
            })
            .collect();
        let solver = Solver::new(f, &Matrix::from_columns(f, deltas[j].slot_dim(top), &cols));
        let coeffs = solver
            .solve(&wanted)
            .ok_or_else(|| Error::Internal("degree-0 class is not a homomorphism".into()))?;
        let mut big = Matrix::zeros(f, sizes[j], sizes[i]);
        for (g, c) in homs.basis.iter().zip(&coeffs) {
            if f.is_zero(c) {
                continue;
            }
            for (s, blk) in g.blocks.iter().filter(|(s, _)| keep(s)) {
                let (ro, co) = (offsets[j][s], offsets[i][s]);
                for rr in 0..blk.rows() {
                    for cc in 0..blk.cols() {
                        let v = f.mul_add(big.get(ro + rr, co + cc), c, blk.get(rr, cc));
                        big.set(ro + rr, co + cc, v);
                    }
                }
            }
        }
        if !big.is_zero(f) {
            action[a].insert(0, big.transpose());
        }
    }
    let label = match part {
        Some(v) => format!("D(e{}Δ)", v + 1),
        None => "DΔ".to_string(),
    };
    GradedModule::from_parts(gamma_alg, &label, dims, action)
}

pub fn double_dual_dims<F: Field>(
    gamma: &ExtAlgebra<F>,
    gp: &GabrielPresentation,
    dg: &DeltaGrading<F>,
    res: &DeltaResolutions<F>,
) -> Result<DoubleDualVerdict> {
    let f = gamma.field();
    let p = &gp.presentation;
    let galg = Arc::new(GradedAlgebra::build(f, p, None)?.regrade(&p.declared_degrees(), GradingTag::Ext)?);
    let dd = dual_delta_module(gamma, gp, &galg, res)?;
    let rd = minimal_resolution(&dd, galg.dim() + dd.dim() + 1)?;
    let table = ext_table(&rd, &dd)?;
    let expected = dg.dims();
    let mut ext_dims = Vec::new();
    let mut off = Vec::new();
    for ((n, s), d) in table.dims() {
        if s == n as i64 {
            if ext_dims.len() <= n {
                ext_dims.resize(n + 1, 0);
            }
            ext_dims[n] = d;
        } else {
            off.push((n, s, d));
        }
    }
    Ok(DoubleDualVerdict {
        passed: rd.complete && off.is_empty() && ext_dims == expected,
        ext_dims,
        expected,
        off_diagonal: off,
        complete: rd.complete,
    })
}

/// Λ recovered as `[Ext*_Γ(DΔ, DΔ)]^op`, one vertex per summand `D(e_v Δ)`.
#[derive(Clone, Debug)]
pub struct DoubleDualAlgebra {
    pub presentation: GabrielPresentation,
    /// Comparison with Λ, whose arrows carry their Δ-degrees.
    pub comparison: crate::matching::MatchOutcome,
}

/// Computes the full double dual as an algebra and compares its quiver
/// presentation with the one Λ was built from. Over Q only the comparison
/// is meaningful; other fields compare symmetric lifts.
pub fn double_dual_algebra<F: Field>(
    gamma: &ExtAlgebra<F>,
    gp: &GabrielPresentation,
    dg: &DeltaGrading<F>,
    res: &DeltaResolutions<F>,
) -> Result<DoubleDualAlgebra> {
    double_dual_algebra_over(gamma, gp, &gp.presentation, dg, res)
}

/// As [`double_dual_algebra`], with Γ replaced by the algebra of `p`,
/// a presentation on the same arrows that agrees with `gp` in degree 0.
pub fn double_dual_algebra_over<F: Field>(
    gamma: &ExtAlgebra<F>,
    gp: &GabrielPresentation,
    p: &AlgebraPresentation,
    dg: &DeltaGrading<F>,
    res: &DeltaResolutions<F>,
) -> Result<DoubleDualAlgebra> {
    let f = gamma.field();
    let galg = Arc::new(GradedAlgebra::build(f, p, None)?.regrade(&p.declared_degrees(), GradingTag::Ext)?);
    let r = dg.algebra.vertex_count();
    let parts = (0..r)
        .map(|v| dual_delta_part(gamma, gp, &galg, res, Some(v)))
        .collect::<Result<Vec<_>>>()?;
    let bound = galg.dim() + parts.iter().map(|m| m.dim()).sum::<usize>() + 1;
    let resolutions = parts
        .iter()
        .map(|m| minimal_resolution(m, bound))
        .collect::<Result<Vec<_>>>()?;
    let back = build_gamma(&DeltaResolutions {
        deltas: parts,
        resolutions,
    })?;
    let presentation = gabriel_presentation(&back, &dg.height)?;
    let mut lambda = dg.algebra.presentation().clone();
    for (a, arrow) in lambda.arrows.iter_mut().enumerate() {
        arrow.degree = Some(dg.algebra.arrow_degree(a));
    }
    let comparison = crate::matching::match_presentations(&presentation.presentation, &lambda)?;
    Ok(DoubleDualAlgebra {
        presentation,
        comparison,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::{delta_regrade, delta_resolutions};
    use crate::field::Rationals;
    use crate::fixtures::fixture;

    struct Setup {
        dg: DeltaGrading<Rationals>,
        fam: StandardFamily<Rationals>,
        res: DeltaResolutions<Rationals>,
        gamma: ExtAlgebra<Rationals>,
    }

    fn setup(name: &str, h: &[i64]) -> Setup {
        let a = Arc::new(GradedAlgebra::build(&Rationals, &fixture(name).unwrap(), None).unwrap());
        let fam = StandardFamily::new(&a).unwrap();
        let dg = delta_regrade(&a, h).unwrap();
        let res = delta_resolutions(&dg, &fam, 30).unwrap();
        let gamma = build_gamma(&res).unwrap();
        Setup { dg, fam, res, gamma }
    }

    #[test]
    fn cato_gamma() {
        let s = setup("CATO", &[0, 1, 2]);
        assert_eq!(s.gamma.dim(), 9);
        assert_eq!(s.gamma.ext_dims(), vec![6, 3]);
        assert!(s.gamma.check_associativity().is_ok());
        let gp = gabriel_presentation(&s.gamma, &[0, 1, 2]).unwrap();
        assert!(gp.sound);
        assert_eq!(gp.presentation.arrows.len(), 4);
        assert_eq!(gp.presentation.relations.len(), 2);
        assert!(check_directed(&s.gamma, &[0, 1, 2]).passed);
        assert_eq!(h_regrade_gamma(&s.gamma, &[0, 1, 2]).dims, vec![3, 4, 2]);
        assert!(check_gamma_classical_koszul(&Rationals, &gp, &[0, 1, 2]).unwrap().passed);
        assert!(costandard_to_simple_check(&s.dg, &s.fam, &s.res).unwrap().passed);
        let dd = double_dual_dims(&s.gamma, &gp, &s.dg, &s.res).unwrap();
        assert_eq!(dd.ext_dims, vec![6, 5, 3], "{dd:?}");
    }

    #[test]
    fn dualext_gamma_is_hereditary() {
        let s = setup("DUALEXT", &[0, 1]);
        assert_eq!(s.gamma.dim(), 6);
        let gp = gabriel_presentation(&s.gamma, &[0, 1]).unwrap();
        assert_eq!(gp.presentation.arrows.len(), 4);
        assert!(gp.presentation.relations.is_empty());
        assert_eq!(h_regrade_gamma(&s.gamma, &[0, 1]).dims, vec![2, 4]);
        let dd = double_dual_dims(&s.gamma, &gp, &s.dg, &s.res).unwrap();
        assert_eq!(dd.ext_dims, vec![4, 6]);
    }

    #[test]
    fn so4_gamma() {
        let h = [0, 1, 1, 2];
        let s = setup("SO4", &h);
        assert_eq!(s.gamma.dim(), 16);
        assert_eq!(h_regrade_gamma(&s.gamma, &h).dims, vec![4, 8, 4]);
        let gp = gabriel_presentation(&s.gamma, &h).unwrap();
        assert!(gp.sound);
        assert_eq!(gp.presentation.relations.len(), 4);
        assert!(check_directed(&s.gamma, &h).passed);
        assert!(check_gamma_classical_koszul(&Rationals, &gp, &h).unwrap().passed);
        assert!(costandard_to_simple_check(&s.dg, &s.fam, &s.res).unwrap().passed);
        let dd = double_dual_dims(&s.gamma, &gp, &s.dg, &s.res).unwrap();
        assert!(dd.passed, "{dd:?}");
        assert_eq!(dd.ext_dims.iter().sum::<usize>(), 25);
    }

    #[test]
    fn para_gamma_relations() {
        let s = setup("PARA", &[0, 1, 2]);
        let gp = gabriel_presentation(&s.gamma, &[0, 1, 2]).unwrap();
        assert!(gp.sound);
        assert_eq!(gp.presentation.relations.len(), 2);
        assert!(check_gamma_classical_koszul(&Rationals, &gp, &[0, 1, 2]).unwrap().passed);
    }

    #[test]
    fn presentations_match_expected() {
        use crate::fixtures::expected_gamma;
        use crate::matching::match_presentations;
        use crate::presentation::parse_presentation;
        for (name, h) in [
            ("CATO", vec![0, 1, 2]),
            ("PARA", vec![0, 1, 2]),
            ("DUALEXT", vec![0, 1]),
        ] {
            let s = setup(name, &h);
            let gp = gabriel_presentation(&s.gamma, &h).unwrap();
            let theirs = parse_presentation(expected_gamma(name).unwrap()).unwrap();
            let m = match_presentations(&gp.presentation, &theirs).unwrap();
            assert!(m.matched, "{name}: {m:?}\n{}", gp.to_text());
        }
    }

    #[test]
    fn double_dual_recovers_lambda() {
        for (name, h) in [("CATO", vec![0, 1, 2]), ("SO4", vec![0, 1, 1, 2]), ("DUALEXT", vec![0, 1])] {
            let s = setup(name, &h);
            let gp = gabriel_presentation(&s.gamma, &h).unwrap();
            let dd = double_dual_algebra(&s.gamma, &gp, &s.dg, &s.res).unwrap();
            assert!(dd.comparison.matched, "{name}: {:?}\n{}", dd.comparison, dd.presentation.to_text());
        }
    }

    #[test]
    fn flipped_square_sign_does_not_recover_so4() {
        use crate::fixtures::SO4_GAMMA;
        use crate::matching::match_presentations;
        use crate::presentation::parse_presentation;
        let h = [0, 1, 1, 2];
        let s = setup("SO4", &h);
        let gp = gabriel_presentation(&s.gamma, &h).unwrap();
        let mut flipped = gp.presentation.clone();
        let both_positive = |r: &Relation| {
            r.terms
                .iter()
                .all(|(_, p)| p.iter().all(|&a| arrow_degree(&gp.presentation, a) == 1))
        };
        let k = flipped.relations.iter().position(both_positive).unwrap();
        let t = &mut flipped.relations[k].terms[0].0;
        *t = -t.clone();
        let theirs = parse_presentation(SO4_GAMMA).unwrap();
        assert!(match_presentations(&flipped, &theirs).unwrap().matched);
        assert!(!match_presentations(&gp.presentation, &theirs).unwrap().matched);
        let dd = double_dual_algebra_over(&s.gamma, &gp, &flipped, &s.dg, &s.res).unwrap();
        assert!(!dd.comparison.matched);
    }

    fn arrow_degree(p: &AlgebraPresentation, a: usize) -> i64 {
        p.arrows[a].degree.unwrap_or(1)
    }
}
