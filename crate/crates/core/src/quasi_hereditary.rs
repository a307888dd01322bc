//! Standard and costandard modules, Δ-filtrations and the
//! quasi-heredity, BGG and orthogonality checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::GradedAlgebra;
use crate::error::Result;
use crate::ext::ext_table;
use crate::field::Field;
use crate::hom::{graded_hom, total_hom_dim};
use crate::linalg::{unit_vector, Echelon, Matrix};
use crate::module::{injective_with_basis, projective, GradedMap, GradedModule, Slot, SlotSpaces};
use crate::resolution::minimal_resolution;

/// `Δ_i = P_i / (Λ · ⊕_{rank j > rank i} e_j P_i)` with the projection.
pub fn standard_module<F: Field>(
    alg: &Arc<GradedAlgebra<F>>,
    i: usize,
) -> Result<(GradedModule<F>, GradedMap<F>, usize)> {
    let rank = alg.rank();
    let p = projective(alg, i, 0)?;
    let f = alg.field();
    let gens: Vec<(Slot, Vec<F::Elem>)> = p
        .slots()
        .filter(|s| rank[s.0] > rank[i])
        .flat_map(|s| {
            let n = p.slot_dim(s);
            (0..n).map(move |c| (s, unit_vector(f, n, c)))
        })
        .collect();
    let trace = p.generate(&gens);
    let trace_dim = trace.dim();
    let (delta, proj) = p.quotient(&trace)?;
    Ok((delta.with_label(format!("Δ{}", i + 1)), proj, trace_dim))
}

/// `∇_i`, the largest submodule of `I_i = D(e_i Λ)` without composition
/// factors of higher rank: the functionals vanishing on `e_i Λ e_{>i} Λ`.
pub fn costandard_module<F: Field>(alg: &Arc<GradedAlgebra<F>>, i: usize) -> Result<GradedModule<F>> {
    let f = alg.field();
    let rank = alg.rank();
    let (inj, elems, pos) = injective_with_basis(alg, i, 0)?;
    let index: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let mut ideal: BTreeMap<Slot, Vec<Vec<F::Elem>>> = BTreeMap::new();
    for &x in &elems {
        let s = alg.element(x).source;
        if rank[s] <= rank[i] {
            continue;
        }
        for y in (0..alg.dim()).filter(|&y| alg.element(y).target == s) {
            let prod = alg.mul_basis(x, y);
            let Some((first, _)) = prod.first() else {
                continue;
            };
            let slot = pos[index[first]].0;
            let mut v = vec![f.zero(); inj.slot_dim(slot)];
            for (t, c) in prod {
                let p = pos[index[t]].1;
                v[p] = f.add(&v[p], c);
            }
            ideal.entry(slot).or_default().push(v);
        }
    }
    let mut spaces = BTreeMap::new();
    for s in inj.slots() {
        let n = inj.slot_dim(s);
        let perp = match ideal.get(&s) {
            Some(rows) => Matrix::from_rows(f, n, rows).kernel(f),
            None => (0..n).map(|c| unit_vector(f, n, c)).collect(),
        };
        spaces.insert(s, Echelon::spanned_by(f, n, &perp));
    }
    let (m, _) = inj.submodule(&SlotSpaces { spaces })?;
    Ok(m.with_label(format!("∇{}", i + 1)))
}

/// All `Δ_i` and `∇_i`.
#[derive(Clone, Debug)]
pub struct StandardFamily<F: Field> {
    pub deltas: Vec<GradedModule<F>>,
    pub nablas: Vec<GradedModule<F>>,
    pub trace_dims: Vec<usize>,
}

impl<F: Field> StandardFamily<F> {
    pub fn new(alg: &Arc<GradedAlgebra<F>>) -> Result<Self> {
        let mut deltas = Vec::new();
        let mut trace_dims = Vec::new();
        for i in 0..alg.vertex_count() {
            let (d, _, t) = standard_module(alg, i)?;
            deltas.push(d);
            trace_dims.push(t);
        }
        let nablas = (0..alg.vertex_count())
            .map(|i| costandard_module(alg, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(StandardFamily {
            deltas,
            nablas,
            trace_dims,
        })
    }

    pub fn delta_dims(&self) -> Vec<usize> {
        self.deltas.iter().map(|d| d.dim()).collect()
    }

    /// `[(Δ_j)_l : S_i]` as `table[j][l][i]`.
    pub fn layer_table(&self) -> Vec<Vec<Vec<usize>>> {
        self.deltas.iter().map(graded_layers).collect()
    }

    /// `[Δ_j : S_i]` as `mult[i][j]`.
    pub fn composition_matrix(&self) -> Vec<Vec<usize>> {
        let r = self.deltas.len();
        let mut out = vec![vec![0; r]; r];
        for (j, d) in self.deltas.iter().enumerate() {
            for (i, n) in d.vertex_dims().into_iter().enumerate() {
                out[i][j] = n;
            }
        }
        out
    }
}

/// Composition factors per degree, from the lowest degree upwards.
pub fn graded_layers<F: Field>(m: &GradedModule<F>) -> Vec<Vec<usize>> {
    let r = m.algebra().vertex_count();
    let (Some(lo), Some(hi)) = (m.min_degree(), m.max_degree()) else {
        return Vec::new();
    };
    (lo..=hi)
        .map(|d| (0..r).map(|v| m.slot_dim((v, d))).collect())
        .collect()
}

/// A Δ-filtration, listed from the top subfactor down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaFiltration {
    /// `(j, d)` meaning a subfactor `Δ_j<d>` (0-based `j`).
    pub subfactors: Vec<(usize, i64)>,
    /// Dimensions of the submodule chain `0 = M_0 ⊂ M_1 ⊂ …`.
    pub chain_dims: Vec<usize>,
}

impl DeltaFiltration {
    /// `(M : Δ_j)` ignoring shifts.
    pub fn multiplicities(&self, r: usize) -> Vec<usize> {
        let mut out = vec![0; r];
        for &(j, _) in &self.subfactors {
            out[j] += 1;
        }
        out
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .subfactors
            .iter()
            .map(|&(j, d)| {
                if d == 0 {
                    format!("Δ{}", j + 1)
                } else {
                    format!("Δ{}⟨{d}⟩", j + 1)
                }
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Why a module has no Δ-filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationObstruction {
    pub module: String,
    /// 0-based standard index that failed to split off.
    pub standard: usize,
    /// `(shift, image dimension, expected dimension)` of the trace.
    pub trace_dim: usize,
    pub expected_dim: usize,
    pub message: String,
}

/// Peels off the trace of the maximal-order `P_j` repeatedly: in a module
/// with a Δ-filtration, that trace is `⊕ Δ_j<d>` and the quotient is again
/// Δ-filtered.
pub fn delta_filtration<F: Field>(
    m: &GradedModule<F>,
    family: &StandardFamily<F>,
) -> Result<std::result::Result<DeltaFiltration, FiltrationObstruction>> {
    let alg = m.algebra();
    let f = m.field();
    let rank = alg.rank();
    let mut cur = m.clone();
    let mut bottom_up: Vec<(usize, i64)> = Vec::new();
    let mut chain = vec![0];
    while !cur.is_zero() {
        let j = cur
            .slots()
            .map(|s| s.0)
            .max_by_key(|&v| rank[v])
            .expect("nonzero module");
        let gens: Vec<(Slot, Vec<F::Elem>)> = cur
            .slots()
            .filter(|s| s.0 == j)
            .flat_map(|s| {
                let n = cur.slot_dim(s);
                (0..n).map(move |c| (s, unit_vector(f, n, c)))
            })
            .collect();
        let u = cur.generate(&gens);
        let (sub, _) = cur.submodule(&u)?;
        let tops = sub.top_generators();
        let expected = tops.len() * family.deltas[j].dim();
        if tops.iter().any(|(s, _)| s.0 != j) || sub.dim() != expected {
            return Ok(Err(FiltrationObstruction {
                module: m.label().to_string(),
                standard: j,
                trace_dim: sub.dim(),
                expected_dim: expected,
                message: format!(
                    "the trace of P{} has dimension {} but {} copies of Δ{} need {}",
                    j + 1,
                    sub.dim(),
                    tops.len(),
                    j + 1,
                    expected
                ),
            }));
        }
        let mut shifts: Vec<i64> = tops.iter().map(|(s, _)| s.1).collect();
        shifts.sort_unstable();
        for d in shifts.into_iter().rev() {
            bottom_up.push((j, d));
        }
        chain.push(chain.last().unwrap() + sub.dim());
        let (q, _) = cur.quotient(&u)?;
        cur = q;
    }
    bottom_up.reverse();
    Ok(Ok(DeltaFiltration {
        subfactors: bottom_up,
        chain_dims: chain,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QhVerdict {
    pub passed: bool,
    pub filtrations: Vec<Option<DeltaFiltration>>,
    pub obstructions: Vec<FiltrationObstruction>,
    /// `dim End(Δ_i)` over all shifts.
    pub end_dims: Vec<usize>,
}

pub fn check_quasi_hereditary<F: Field>(
    alg: &Arc<GradedAlgebra<F>>,
    family: &StandardFamily<F>,
) -> Result<QhVerdict> {
    let mut filtrations = Vec::new();
    let mut obstructions = Vec::new();
    for i in 0..alg.vertex_count() {
        match delta_filtration(&projective(alg, i, 0)?, family)? {
            Ok(fl) => filtrations.push(Some(fl)),
            Err(ob) => {
                filtrations.push(None);
                obstructions.push(ob);
            }
        }
    }
    let end_dims = family
        .deltas
        .iter()
        .map(|d| total_hom_dim(d, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(QhVerdict {
        passed: obstructions.is_empty() && end_dims.iter().all(|&d| d == 1),
        filtrations,
        obstructions,
        end_dims,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BggVerdict {
    pub passed: bool,
    /// `(P_i : Δ_j)` as `[i][j]`.
    pub filtration_multiplicities: Vec<Vec<usize>>,
    /// `[Δ_j : S_i]` as `[i][j]`.
    pub composition_multiplicities: Vec<Vec<usize>>,
    pub multiplicity_free: bool,
    /// `dim P_i` implied by `Σ_j [Δ_j : S_i] dim Δ_j`.
    pub implied_projective_dims: Vec<usize>,
}

pub fn verify_bgg_reciprocity<F: Field>(
    family: &StandardFamily<F>,
    qh: &QhVerdict,
) -> BggVerdict {
    let r = family.deltas.len();
    let comp = family.composition_matrix();
    let filt: Vec<Vec<usize>> = qh
        .filtrations
        .iter()
        .map(|f| f.as_ref().map_or(vec![0; r], |f| f.multiplicities(r)))
        .collect();
    let dims = family.delta_dims();
    let implied = (0..r)
        .map(|i| (0..r).map(|j| comp[i][j] * dims[j]).sum())
        .collect();
    BggVerdict {
        passed: qh.filtrations.iter().all(Option::is_some) && filt == comp,
        multiplicity_free: filt.iter().flatten().all(|&x| x <= 1),
        filtration_multiplicities: filt,
        composition_multiplicities: comp,
        implied_projective_dims: implied,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityVerdict {
    pub passed: bool,
    /// `dim Hom(Δ_i, ∇_j)` summed over shifts, as `[i][j]`.
    pub hom_dims: Vec<Vec<usize>>,
    /// `(i, j, n, shift, dim)` for every nonzero higher Ext, 1-based.
    pub violations: Vec<(usize, usize, usize, i64, usize)>,
    pub max_degree_checked: usize,
}

/// `Hom(Δ_i, ∇_j) = δ_ij k` and `Ext^n(Δ_i, ∇_j) = 0` for `1 ≤ n ≤ n_max`.
pub fn verify_delta_nabla_orthogonality<F: Field>(
    family: &StandardFamily<F>,
    n_max: usize,
) -> Result<OrthogonalityVerdict> {
    let nablas = &family.nablas;
    let r = family.deltas.len();
    let mut hom_dims = vec![vec![0; r]; r];
    let mut violations = Vec::new();
    let mut checked = 0;
    for (i, d) in family.deltas.iter().enumerate() {
        let res = minimal_resolution(d, n_max + 1)?;
        checked = checked.max(res.ext_range().min(n_max + 1).saturating_sub(1));
        for (j, nab) in nablas.iter().enumerate() {
            hom_dims[i][j] = total_hom_dim(d, nab)?;
            let table = ext_table(&res, nab)?;
            for (&(n, s), &dim) in &table.dims() {
                if n >= 1 && n <= n_max {
                    violations.push((i + 1, j + 1, n, s, dim));
                }
            }
        }
    }
    let diag_ok = (0..r).all(|i| (0..r).all(|j| hom_dims[i][j] == (i == j) as usize));
    Ok(OrthogonalityVerdict {
        passed: diag_ok && violations.is_empty(),
        hom_dims,
        violations,
        max_degree_checked: checked,
    })
}

/// `dim Hom_{Gr}(M, N<j>)` for a list of shifts; a convenience for reports.
pub fn hom_profile<F: Field>(
    m: &GradedModule<F>,
    n: &GradedModule<F>,
    shifts: &[i64],
) -> Result<BTreeMap<i64, usize>> {
    let mut out = BTreeMap::new();
    for &j in shifts {
        out.insert(j, graded_hom(m, n, j)?.dim());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::presentation::parse_presentation;

    const CATO: &str = "vertices: 3\narrow a 1 2\narrow ao 2 1\narrow b 2 3\narrow bo 3 2\n\
        relation a.ao - bo.b\nrelation b.bo\nduality a <-> ao\nduality b <-> bo";

    fn build(text: &str) -> Arc<GradedAlgebra<Rationals>> {
        Arc::new(GradedAlgebra::build(&Rationals, &parse_presentation(text).unwrap(), None).unwrap())
    }

    #[test]
    fn cato_standard_modules() {
        let a = build(CATO);
        let fam = StandardFamily::new(&a).unwrap();
        assert_eq!(fam.delta_dims(), vec![1, 2, 3]);
        assert_eq!(fam.deltas[1].radical_layers(), vec![vec![0, 1, 0], vec![1, 0, 0]]);
        for (i, d) in fam.deltas.iter().enumerate() {
            assert_eq!(d.dim() + fam.trace_dims[i], projective(&a, i, 0).unwrap().dim());
        }
        let nab = &fam.nablas;
        assert_eq!(nab[1].socle_slots(), [((1, 0), 1)].into());
        for (i, d) in fam.deltas.iter().enumerate() {
            let dual = d.dualize().unwrap();
            assert_eq!(nab[i].dims(), dual.dims());
            assert_eq!(nab[i].radical_layers(), dual.radical_layers());
        }
    }

    #[test]
    fn cato_filtrations_and_bgg() {
        let a = build(CATO);
        let fam = StandardFamily::new(&a).unwrap();
        let qh = check_quasi_hereditary(&a, &fam).unwrap();
        assert!(qh.passed);
        assert_eq!(qh.filtrations[1].as_ref().unwrap().subfactors, vec![(1, 0), (2, 1)]);
        let bgg = verify_bgg_reciprocity(&fam, &qh);
        assert!(bgg.passed);
        assert!(bgg.multiplicity_free);
        assert_eq!(bgg.implied_projective_dims, vec![6, 5, 3]);
        let orth = verify_delta_nabla_orthogonality(&fam, 6).unwrap();
        assert!(orth.passed, "{orth:?}");
    }

    #[test]
    fn costandards_without_duality() {
        // CATO with the duality dropped: ∇ must not change.
        let plain = build(&CATO.replace("\nduality a <-> ao\nduality b <-> bo", ""));
        assert!(!plain.has_duality());
        let with = StandardFamily::new(&build(CATO)).unwrap();
        let without = StandardFamily::new(&plain).unwrap();
        for (a, b) in with.nablas.iter().zip(&without.nablas) {
            assert_eq!(a.dims(), b.dims());
            assert_eq!(a.radical_layers(), b.radical_layers());
        }
        assert!(verify_delta_nabla_orthogonality(&without, 6).unwrap().passed);
    }

    #[test]
    fn reversed_order_changes_standards() {
        let a = build(&format!("{CATO}\norder: 3 2 1"));
        let fam = StandardFamily::new(&a).unwrap();
        assert_eq!(fam.delta_dims(), vec![6, 2, 1]);
    }
}
