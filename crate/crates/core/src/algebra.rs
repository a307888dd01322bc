//! Finite-dimensional graded quotients `kQ/I` of path algebras.
//!
//! The basis is built degree by degree: the ideal slice `I_l` is spanned by
//! `a * I_{l-1}`, `I_{l-1} * a` and the relations of length `l`, and the
//! surviving basis paths of `Λ_l` are the least paths (in [`path_cmp`]
//! order) outside the pivots of `I_l`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Echelon;
use crate::presentation::{AlgebraPresentation, Path};

/// Which grading a [`GradedAlgebra`] currently carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingTag {
    /// Path length.
    Length,
    /// `deg(e_i Λ_l e_j) = (l + h(i) - h(j)) / 2`.
    Delta,
    /// Height grading on an extension algebra.
    H,
    /// Cohomological degree on an extension algebra.
    Ext,
    /// Arbitrary arrow degrees.
    Arrows,
}

impl GradingTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            GradingTag::Length => "length",
            GradingTag::Delta => "delta",
            GradingTag::H => "h",
            GradingTag::Ext => "ext",
            GradingTag::Arrows => "arrows",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub source: usize,
    pub target: usize,
    pub length: usize,
    pub degree: i64,
    /// Arrows in traversal order; empty for the idempotent at `source`.
    pub word: Path,
    pub label: String,
}

impl BasisElement {
    pub fn is_idempotent(&self) -> bool {
        self.word.is_empty()
    }
}

/// Orders paths by their written (right-to-left) form, comparing arrow
/// declaration indices.
pub fn path_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Everything needed to reduce a path of one length to normal form.
#[derive(Clone, Debug)]
struct LengthSlice<F: Field> {
    /// All paths of this length, sorted by `path_cmp`.
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    /// Ideal slice in reversed coordinates (column `c` is path `n-1-c`),
    /// so pivots land on the largest paths.
    ideal: Echelon<F>,
    /// Basis index of each surviving path.
    basis_of: HashMap<usize, usize>,
}

impl<F: Field> LengthSlice<F> {
    fn col(&self, path_idx: usize) -> usize {
        self.paths.len() - 1 - path_idx
    }
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra<F: Field> {
    field: F,
    presentation: AlgebraPresentation,
    basis: Vec<BasisElement>,
    arrow_degrees: Vec<i64>,
    arrow_basis: Vec<usize>,
    idempotents: Vec<usize>,
    /// `mult[x * dim + y]` is `x * y` (y traversed first).
    mult: Vec<Vec<(usize, F::Elem)>>,
    grading: GradingTag,
    slices: Vec<LengthSlice<F>>,
}

/// Default nilpotency cutoff: `4 * r * (longest relation)`.
pub fn default_max_len(p: &AlgebraPresentation) -> usize {
    4 * p.vertex_count * p.max_relation_length().max(2)
}

impl<F: Field> GradedAlgebra<F> {
    /// Builds `kQ/I` with the length grading.
    pub fn build(field: &F, p: &AlgebraPresentation, max_len: Option<usize>) -> Result<Self> {
        p.validate()?;
        let max_len = max_len.unwrap_or_else(|| default_max_len(p));
        let n_arrows = p.arrows.len();

        let mut basis: Vec<BasisElement> = (0..p.vertex_count)
            .map(|v| BasisElement {
                source: v,
                target: v,
                length: 0,
                degree: 0,
                word: Vec::new(),
                label: format!("e{}", v + 1),
            })
            .collect();
        let idempotents: Vec<usize> = (0..p.vertex_count).collect();

        let mut slices: Vec<LengthSlice<F>> = Vec::new();
        // Length 0 is handled through idempotents; keep a placeholder.
        slices.push(LengthSlice {
            paths: Vec::new(),
            index: HashMap::new(),
            ideal: Echelon::new(field, 0),
            basis_of: HashMap::new(),
        });

        let mut prev_paths: Vec<Path> = Vec::new();
        let mut l = 1;
        loop {
            if l > max_len {
                return Err(Error::NotNilpotent(max_len));
            }
            let mut paths: Vec<Path> = if l == 1 {
                (0..n_arrows).map(|a| vec![a]).collect()
            } else {
                let mut out = Vec::new();
                for q in &prev_paths {
                    let end = p.arrows[*q.last().unwrap()].target;
                    for (a, arrow) in p.arrows.iter().enumerate() {
                        if arrow.source == end {
                            let mut np = q.clone();
                            np.push(a);
                            out.push(np);
                        }
                    }
                }
                out
            };
            paths.sort_by(|a, b| path_cmp(a, b));
            let index: HashMap<Path, usize> =
                paths.iter().enumerate().map(|(i, q)| (q.clone(), i)).collect();
            let n = paths.len();
            let mut ideal = Echelon::new(field, n);
            let to_vec = |terms: &[(usize, F::Elem)]| {
                let mut v = vec![field.zero(); n];
                for (i, c) in terms {
                    let col = n - 1 - i;
                    v[col] = field.add(&v[col], c);
                }
                v
            };
            for rel in p.relations.iter().filter(|r| r.length() == l) {
                let mut terms = Vec::new();
                for (c, path) in &rel.terms {
                    terms.push((index[path], field.from_rational(c)?));
                }
                ideal.insert(&to_vec(&terms));
            }
            if l >= 2 {
                let prev = &slices[l - 1];
                let prev_n = prev.paths.len();
                for row in prev.ideal.rows() {
                    for a in 0..n_arrows {
                        // Right multiplication `x * a`: a first.
                        let mut left_terms = Vec::new();
                        let mut right_terms = Vec::new();
                        for (col, c) in row.iter().enumerate() {
                            if field.is_zero(c) {
                                continue;
                            }
                            let q = &prev.paths[prev_n - 1 - col];
                            if p.arrows[*q.last().unwrap()].target == p.arrows[a].source {
                                let mut np = q.clone();
                                np.push(a);
                                left_terms.push((index[&np], c.clone()));
                            }
                            if p.arrows[a].target == p.arrows[q[0]].source {
                                let mut np = vec![a];
                                np.extend_from_slice(q);
                                right_terms.push((index[&np], c.clone()));
                            }
                        }
                        if !left_terms.is_empty() {
                            ideal.insert(&to_vec(&left_terms));
                        }
                        if !right_terms.is_empty() {
                            ideal.insert(&to_vec(&right_terms));
                        }
                    }
                }
            }
            let mut basis_of = HashMap::new();
            let mut surviving: Vec<usize> =
                ideal.non_pivots().into_iter().map(|col| n - 1 - col).collect();
            surviving.sort_unstable();
            for pi in surviving {
                let path = &paths[pi];
                basis_of.insert(pi, basis.len());
                basis.push(BasisElement {
                    source: p.arrows[path[0]].source,
                    target: p.arrows[*path.last().unwrap()].target,
                    length: l,
                    degree: l as i64,
                    word: path.clone(),
                    label: p.path_label(path),
                });
            }
            let empty = basis_of.is_empty();
            slices.push(LengthSlice {
                paths: paths.clone(),
                index,
                ideal,
                basis_of,
            });
            if empty {
                break;
            }
            prev_paths = paths;
            l += 1;
        }

        let arrow_basis: Vec<usize> = (0..n_arrows)
            .map(|a| slices[1].basis_of[&slices[1].index[&vec![a]]])
            .collect();

        let mut alg = GradedAlgebra {
            field: field.clone(),
            presentation: p.clone(),
            basis,
            arrow_degrees: vec![1; n_arrows],
            arrow_basis,
            idempotents,
            mult: Vec::new(),
            grading: GradingTag::Length,
            slices,
        };
        alg.mult = alg.compute_mult();
        Ok(alg)
    }

    fn compute_mult(&self) -> Vec<Vec<(usize, F::Elem)>> {
        let dim = self.dim();
        let f = &self.field;
        let mut mult = vec![Vec::new(); dim * dim];
        for (xi, x) in self.basis.iter().enumerate() {
            for (yi, y) in self.basis.iter().enumerate() {
                if y.target != x.source {
                    continue;
                }
                let out = if x.is_idempotent() {
                    vec![(yi, f.one())]
                } else if y.is_idempotent() {
                    vec![(xi, f.one())]
                } else {
                    let mut w = y.word.clone();
                    w.extend_from_slice(&x.word);
                    self.normal_form(&w)
                };
                mult[xi * dim + yi] = out;
            }
        }
        mult
    }

    /// Normal form of a nonempty path as a combination of basis elements.
    pub fn normal_form(&self, path: &[usize]) -> Vec<(usize, F::Elem)> {
        self.reduce_combination(&[(self.field.one(), path.to_vec())])
    }

    /// Reduces a combination of equal-length paths; returns basis
    /// coordinates.
    pub fn reduce_combination(&self, terms: &[(F::Elem, Path)]) -> Vec<(usize, F::Elem)> {
        let f = &self.field;
        let Some(len) = terms.first().map(|(_, p)| p.len()) else {
            return Vec::new();
        };
        assert!(len > 0, "idempotent paths have no word");
        if len >= self.slices.len() {
            return Vec::new();
        }
        let slice = &self.slices[len];
        let n = slice.paths.len();
        let mut v = vec![f.zero(); n];
        for (c, path) in terms {
            let Some(&pi) = slice.index.get(path) else {
                // Not composable: the product is zero.
                continue;
            };
            let col = slice.col(pi);
            v[col] = f.add(&v[col], c);
        }
        let r = slice.ideal.reduce(&v);
        let mut out = Vec::new();
        for (col, c) in r.into_iter().enumerate() {
            if f.is_zero(&c) {
                continue;
            }
            let pi = n - 1 - col;
            out.push((slice.basis_of[&pi], c));
        }
        out.sort_by_key(|(b, _)| *b);
        out
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn vertex_count(&self) -> usize {
        self.presentation.vertex_count
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn element(&self, i: usize) -> &BasisElement {
        &self.basis[i]
    }

    pub fn grading(&self) -> GradingTag {
        self.grading
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_degrees.len()
    }

    pub fn arrow_degrees(&self) -> &[i64] {
        &self.arrow_degrees
    }

    pub fn arrow_degree(&self, a: usize) -> i64 {
        self.arrow_degrees[a]
    }

    pub fn arrow_source(&self, a: usize) -> usize {
        self.presentation.arrows[a].source
    }

    pub fn arrow_target(&self, a: usize) -> usize {
        self.presentation.arrows[a].target
    }

    pub fn arrow_name(&self, a: usize) -> &str {
        &self.presentation.arrows[a].name
    }

    /// Basis index of the arrow `a`.
    pub fn arrow_element(&self, a: usize) -> usize {
        self.arrow_basis[a]
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }

    pub fn rank(&self) -> Vec<usize> {
        self.presentation.rank()
    }

    pub fn has_duality(&self) -> bool {
        self.presentation.duality.is_some()
    }

    /// `x * y` as basis coordinates (empty when zero).
    pub fn mul_basis(&self, x: usize, y: usize) -> &[(usize, F::Elem)] {
        &self.mult[x * self.dim() + y]
    }

    /// Product of two elements given in basis coordinates.
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
                for (k, c) in self.mul_basis(i, j) {
                    out[*k] = f.mul_add(&out[*k], &ab, c);
                }
            }
        }
        out
    }

    pub fn max_degree(&self) -> i64 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> i64 {
        self.basis.iter().map(|b| b.degree).min().unwrap_or(0)
    }

    pub fn max_length(&self) -> usize {
        self.basis.iter().map(|b| b.length).max().unwrap_or(0)
    }

    /// Total dimension per degree of the active grading.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry(b.degree).or_insert(0) += 1;
        }
        out
    }

    /// Graded dimensions as a dense vector from degree 0 to the top degree.
    pub fn graded_dim_vector(&self) -> Vec<usize> {
        let dims = self.graded_dims();
        let top = self.max_degree().max(0);
        (0..=top).map(|d| *dims.get(&d).unwrap_or(&0)).collect()
    }

    /// `dim e_i Λ_d e_j` keyed by `(i, j, d)` = (target, source, degree).
    pub fn slot_dims(&self) -> BTreeMap<(usize, usize, i64), usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry((b.target, b.source, b.degree)).or_insert(0) += 1;
        }
        out
    }

    /// Cartan matrix `C[i][j] = dim e_i Λ e_j`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.vertex_count();
        let mut c = vec![vec![0i64; r]; r];
        for b in &self.basis {
            c[b.target][b.source] += 1;
        }
        c
    }

    /// Same algebra with arrows re-weighted. Relations must stay homogeneous.
    pub fn regrade(&self, arrow_degrees: &[i64], tag: GradingTag) -> Result<Self> {
        if arrow_degrees.len() != self.arrow_count() {
            return Err(Error::Regrade("one degree per arrow required".into()));
        }
        if let Some(&d) = arrow_degrees.iter().find(|&&d| d < 0) {
            return Err(Error::Regrade(format!("negative arrow degree {d}")));
        }
        for (ri, rel) in self.presentation.relations.iter().enumerate() {
            let degs: Vec<i64> = rel
                .terms
                .iter()
                .map(|(_, p)| p.iter().map(|&a| arrow_degrees[a]).sum())
                .collect();
            if degs.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Inhomogeneous {
                    relation: ri + 1,
                    degrees: degs,
                });
            }
        }
        let mut out = self.clone();
        for b in out.basis.iter_mut() {
            b.degree = b.word.iter().map(|&a| arrow_degrees[a]).sum();
        }
        out.arrow_degrees = arrow_degrees.to_vec();
        out.grading = tag;
        Ok(out)
    }

    /// Checks the defining invariants of the multiplication table.
    pub fn check_associativity(&self) -> std::result::Result<(), (usize, usize, usize)> {
        let f = &self.field;
        let dim = self.dim();
        for x in 0..dim {
            for y in 0..dim {
                if self.basis[y].target != self.basis[x].source {
                    continue;
                }
                let xy = self.mul_basis(x, y);
                for z in 0..dim {
                    if self.basis[z].target != self.basis[y].source {
                        continue;
                    }
                    let mut left = vec![f.zero(); dim];
                    for (k, c) in xy {
                        for (m, d) in self.mul_basis(*k, z) {
                            left[*m] = f.mul_add(&left[*m], c, d);
                        }
                    }
                    let mut right = vec![f.zero(); dim];
                    for (k, c) in self.mul_basis(y, z) {
                        for (m, d) in self.mul_basis(x, *k) {
                            right[*m] = f.mul_add(&right[*m], d, c);
                        }
                    }
                    if left != right {
                        return Err((x, y, z));
                    }
                }
            }
        }
        Ok(())
    }

    /// `dim Λ_{l+1} == dim(Λ_1 · Λ_l)` in the length grading.
    pub fn check_generated_in_degree_one(&self) -> bool {
        let f = &self.field;
        let top = self.max_length();
        for l in 0..=top {
            let target: Vec<usize> = (0..self.dim())
                .filter(|&i| self.basis[i].length == l + 1)
                .collect();
            let pos: HashMap<usize, usize> =
                target.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let mut span = Echelon::new(f, target.len());
            for a in 0..self.arrow_count() {
                let ae = self.arrow_element(a);
                for y in (0..self.dim()).filter(|&i| self.basis[i].length == l) {
                    let mut v = vec![f.zero(); target.len()];
                    for (k, c) in self.mul_basis(ae, y) {
                        v[pos[k]] = f.add(&v[pos[k]], c);
                    }
                    span.insert(&v);
                }
            }
            if span.rank() != target.len() {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self) -> AlgebraJson {
        let f = &self.field;
        let slots = self
            .slot_dims()
            .into_iter()
            .map(|((i, j, d), n)| SlotDim {
                target: i + 1,
                source: j + 1,
                degree: d,
                dim: n,
            })
            .collect();
        let mut mult = Vec::new();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                let terms = self.mul_basis(x, y);
                if terms.is_empty() {
                    continue;
                }
                mult.push(MultEntry {
                    left: x,
                    right: y,
                    terms: terms.iter().map(|(k, c)| (*k, f.format(c))).collect(),
                });
            }
        }
        AlgebraJson {
            field: f.name(),
            grading: self.grading,
            vertices: self.vertex_count(),
            dim: self.dim(),
            graded_dims: self.graded_dims().into_iter().collect(),
            slots,
            arrow_degrees: self
                .presentation
                .arrows
                .iter()
                .zip(&self.arrow_degrees)
                .map(|(a, d)| (a.name.clone(), *d))
                .collect(),
            basis: self
                .basis
                .iter()
                .enumerate()
                .map(|(i, b)| BasisJson {
                    index: i,
                    label: b.label.clone(),
                    source: b.source + 1,
                    target: b.target + 1,
                    degree: b.degree,
                })
                .collect(),
            mult,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotDim {
    pub target: usize,
    pub source: usize,
    pub degree: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisJson {
    pub index: usize,
    pub label: String,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultEntry {
    pub left: usize,
    pub right: usize,
    pub terms: Vec<(usize, String)>,
}

/// Deterministic serialization of a [`GradedAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraJson {
    pub field: String,
    pub grading: GradingTag,
    pub vertices: usize,
    pub dim: usize,
    pub graded_dims: Vec<(i64, usize)>,
    pub slots: Vec<SlotDim>,
    pub arrow_degrees: Vec<(String, i64)>,
    pub basis: Vec<BasisJson>,
    pub mult: Vec<MultEntry>,
}

/// Outcome of [`validate_duality`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityVerdict {
    pub passed: bool,
    /// Relation whose image under the anti-involution leaves the ideal.
    pub violating_relation: Option<usize>,
    pub image: Option<String>,
    pub remainder: Option<String>,
    /// Human-readable reason when the check fails.
    pub reason: Option<String>,
}

impl DualityVerdict {
    fn pass() -> Self {
        DualityVerdict {
            passed: true,
            violating_relation: None,
            image: None,
            remainder: None,
            reason: None,
        }
    }
}

/// Checks that reversing paths and renaming arrows by the involution maps
/// every relation into the ideal, and that paired arrows are reversed.
pub fn validate_duality<F: Field>(alg: &GradedAlgebra<F>) -> Result<DualityVerdict> {
    let p = alg.presentation();
    let d = p.duality.as_ref().ok_or(Error::NoDuality)?;
    let f = alg.field();
    let composable = |q: &[usize]| {
        q.windows(2)
            .all(|w| p.arrows[w[0]].target == p.arrows[w[1]].source)
    };
    for (ri, rel) in p.relations.iter().enumerate() {
        let mut image = Vec::new();
        let mut broken = false;
        for (c, path) in &rel.terms {
            let img: Path = path.iter().rev().map(|&a| d[a]).collect();
            broken |= !composable(&img);
            image.push((f.from_rational(c)?, img));
        }
        let image_text = || {
            let mut out = String::new();
            for (k, (c, q)) in image.iter().enumerate() {
                if k > 0 {
                    out.push_str(" + ");
                }
                out.push_str(&format!("{}*{}", f.format(c), p.path_label(q)));
            }
            out
        };
        if broken {
            return Ok(DualityVerdict {
                passed: false,
                violating_relation: Some(ri + 1),
                image: Some(image_text()),
                remainder: None,
                reason: Some("image contains a non-composable path".into()),
            });
        }
        let rem = alg.reduce_combination(&image);
        if !rem.is_empty() {
            let rem_text = rem
                .iter()
                .map(|(b, c)| format!("{}*{}", f.format(c), alg.element(*b).label))
                .collect::<Vec<_>>()
                .join(" + ");
            return Ok(DualityVerdict {
                passed: false,
                violating_relation: Some(ri + 1),
                image: Some(image_text()),
                remainder: Some(rem_text),
                reason: Some("image of the relation is not in the ideal".into()),
            });
        }
    }
    for (a, &b) in d.iter().enumerate() {
        let (x, y) = (&p.arrows[a], &p.arrows[b]);
        if x.source != y.target || x.target != y.source {
            return Ok(DualityVerdict {
                passed: false,
                violating_relation: None,
                image: None,
                remainder: None,
                reason: Some(format!("`{}` and `{}` are not reversed arrows", x.name, y.name)),
            });
        }
    }
    Ok(DualityVerdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
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

    fn cato() -> GradedAlgebra<Rationals> {
        GradedAlgebra::build(&Rationals, &parse_presentation(CATO).unwrap(), None).unwrap()
    }

    #[test]
    fn cato_dimensions() {
        let alg = cato();
        assert_eq!(alg.dim(), 14);
        assert_eq!(alg.graded_dim_vector(), vec![3, 4, 4, 2, 1]);
        let c = alg.cartan_matrix();
        // Column sums are dim P_j.
        let proj: Vec<i64> = (0..3).map(|j| (0..3).map(|i| c[i][j]).sum()).collect();
        assert_eq!(proj, vec![6, 5, 3]);
    }

    #[test]
    fn trivial_algebra() {
        let alg = GradedAlgebra::build(&Rationals, &parse_presentation("vertices: 1").unwrap(), None)
            .unwrap();
        assert_eq!(alg.dim(), 1);
        assert_eq!(alg.graded_dim_vector(), vec![1]);
    }

    #[test]
    fn infinite_algebra_is_reported() {
        let p = parse_presentation("vertices: 1\narrow x 1 1").unwrap();
        let err = GradedAlgebra::build(&Rationals, &p, Some(6)).unwrap_err();
        assert_eq!(err, Error::NotNilpotent(6));
    }

    #[test]
    fn associativity_and_generation() {
        let alg = cato();
        assert_eq!(alg.check_associativity(), Ok(()));
        assert!(alg.check_generated_in_degree_one());
    }

    #[test]
    fn prime_field_agrees() {
        let p = parse_presentation(CATO).unwrap();
        let q = GradedAlgebra::build(&Rationals, &p, None).unwrap();
        let fp = GradedAlgebra::build(&PrimeField::new(101).unwrap(), &p, None).unwrap();
        assert_eq!(q.slot_dims(), fp.slot_dims());
    }

    #[test]
    fn basis_labels_are_least_paths() {
        let alg = cato();
        // In degree 2 at vertex 2 the relation identifies a.ao with bo.b; the
        // lesser written path survives.
        let at2: Vec<&str> = alg
            .basis()
            .iter()
            .filter(|b| b.length == 2 && b.source == 1 && b.target == 1)
            .map(|b| b.label.as_str())
            .collect();
        assert_eq!(at2, vec!["a.ao"]);
    }

    #[test]
    fn regrading() {
        let alg = cato();
        let d = alg.regrade(&[1, 0, 1, 0], GradingTag::Delta).unwrap();
        assert_eq!(d.graded_dim_vector(), vec![6, 5, 3]);
        assert_eq!(d.dim(), alg.dim());
        let same = alg.regrade(&[1, 1, 1, 1], GradingTag::Length).unwrap();
        assert_eq!(same.slot_dims(), alg.slot_dims());
        let err = alg.regrade(&[0, 1, 1, 1], GradingTag::Arrows).unwrap_err();
        assert_eq!(
            err,
            Error::Inhomogeneous {
                relation: 1,
                degrees: vec![1, 2]
            }
        );
    }

    #[test]
    fn duality_check() {
        let alg = cato();
        assert!(validate_duality(&alg).unwrap().passed);
        let swapped = CATO.replace(
            "duality a <-> ao\n        duality b <-> bo",
            "duality a <-> bo\n        duality ao <-> b",
        );
        let alg = GradedAlgebra::build(&Rationals, &parse_presentation(&swapped).unwrap(), None)
            .unwrap();
        let v = validate_duality(&alg).unwrap();
        assert!(!v.passed);
        assert_eq!(v.violating_relation, Some(1));
        assert!(v.remainder.is_some());
    }
}
