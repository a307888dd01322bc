//! Graded homomorphism spaces by solving the arrow-commutation system.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::module::{same_algebra, GradedMap, GradedModule, Slot};

/// A basis of `Hom(M, N<shift>)`.
#[derive(Clone, Debug)]
pub struct HomSpace<F: Field> {
    pub shift: i64,
    /// `(source slot, rows, cols)` for every unknown block.
    pub layout: Vec<(Slot, usize, usize)>,
    pub basis: Vec<GradedMap<F>>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `Hom_{Gr}(M, N<j>)`: maps sending `M_(v,d)` to `N_(v,d-j)`.
pub fn graded_hom<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>, j: i64) -> Result<HomSpace<F>> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let alg = m.algebra();
    let f = m.field();
    let mut layout = Vec::new();
    let mut offset: BTreeMap<Slot, usize> = BTreeMap::new();
    let mut vars = 0;
    for s in m.slots() {
        let t = (s.0, s.1 - j);
        let (rows, cols) = (n.slot_dim(t), m.slot_dim(s));
        if rows > 0 {
            offset.insert(s, vars);
            layout.push((s, rows, cols));
            vars += rows * cols;
        }
    }
    if vars == 0 {
        return Ok(HomSpace {
            shift: j,
            layout,
            basis: Vec::new(),
        });
    }
    // Unknown (r, c) of the block at slot s is variable offset[s] + r*cols + c.
    let mut eqs: Vec<Vec<F::Elem>> = Vec::new();
    for a in 0..alg.arrow_count() {
        let v = alg.arrow_source(a);
        for s in m.slots().filter(|s| s.0 == v) {
            let ms = m.arrow_target_slot(a, s);
            let ns = (ms.0, ms.1 - j);
            let rows = n.slot_dim(ns);
            let cols = m.slot_dim(s);
            if rows == 0 {
                continue;
            }
            // f_{ms} * A^M - A^N * f_s = 0, a rows x cols system.
            let am = m.arrow_matrix(a, s.1);
            let an = n.arrow_matrix(a, s.1 - j);
            let mut block: Vec<Vec<F::Elem>> = vec![vec![f.zero(); vars]; rows * cols];
            if let (Some(am), Some(&off)) = (am, offset.get(&ms)) {
                let inner = m.slot_dim(ms);
                for r in 0..rows {
                    for c in 0..cols {
                        for k in 0..inner {
                            let x = am.get(k, c);
                            if !f.is_zero(x) {
                                let var = off + r * inner + k;
                                let e = &mut block[r * cols + c][var];
                                *e = f.add(e, x);
                            }
                        }
                    }
                }
            }
            if let (Some(an), Some(&off)) = (an, offset.get(&s)) {
                let inner = n.slot_dim((s.0, s.1 - j));
                for r in 0..rows {
                    for c in 0..cols {
                        for k in 0..inner {
                            let x = an.get(r, k);
                            if !f.is_zero(x) {
                                let var = off + k * cols + c;
                                let e = &mut block[r * cols + c][var];
                                *e = f.sub(e, x);
                            }
                        }
                    }
                }
            }
            eqs.extend(block.into_iter().filter(|row| row.iter().any(|x| !f.is_zero(x))));
        }
    }
    let kernel = if eqs.is_empty() {
        (0..vars).map(|i| crate::linalg::unit_vector(f, vars, i)).collect()
    } else {
        Matrix::from_rows(f, vars, &eqs).kernel(f)
    };
    let basis = kernel
        .into_iter()
        .map(|v| unflatten(f, j, &layout, &v))
        .collect();
    Ok(HomSpace {
        shift: j,
        layout,
        basis,
    })
}

pub(crate) fn unflatten<F: Field>(
    f: &F,
    shift: i64,
    layout: &[(Slot, usize, usize)],
    v: &[F::Elem],
) -> GradedMap<F> {
    let mut blocks = BTreeMap::new();
    let mut off = 0;
    for &(s, rows, cols) in layout {
        let mut m = Matrix::zeros(f, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, v[off + r * cols + c].clone());
            }
        }
        off += rows * cols;
        if !m.is_zero(f) {
            blocks.insert(s, m);
        }
    }
    GradedMap { shift, blocks }
}

/// Total dimension of `Hom(M, N<j>)` summed over all shifts `j`.
pub fn total_hom_dim<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>) -> Result<usize> {
    let mut total = 0;
    for j in hom_shift_range(m, n) {
        total += graded_hom(m, n, j)?.dim();
    }
    Ok(total)
}

/// Shifts `j` for which `Hom(M, N<j>)` can be nonzero.
pub fn hom_shift_range<F: Field>(m: &GradedModule<F>, n: &GradedModule<F>) -> Vec<i64> {
    let mut js: Vec<i64> = Vec::new();
    for s in m.slots() {
        for t in n.slots().filter(|t| t.0 == s.0) {
            js.push(s.1 - t.1);
        }
    }
    js.sort_unstable();
    js.dedup();
    js
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::field::Rationals;
    use crate::module::{projective, simple};
    use crate::presentation::parse_presentation;
    use std::sync::Arc;

    const CATO: &str = "vertices: 3\narrow a 1 2\narrow ao 2 1\narrow b 2 3\narrow bo 3 2\n\
        relation a.ao - bo.b\nrelation b.bo\nduality a <-> ao\nduality b <-> bo";

    fn cato() -> Arc<GradedAlgebra<Rationals>> {
        Arc::new(GradedAlgebra::build(&Rationals, &parse_presentation(CATO).unwrap(), None).unwrap())
    }

    #[test]
    fn hom_from_projective_counts_slot() {
        let alg = cato();
        let p1 = projective(&alg, 0, 0).unwrap();
        for i in 0..3 {
            for d in -1..5 {
                let p = projective(&alg, i, d).unwrap();
                let h = graded_hom(&p, &p1, 0).unwrap();
                assert_eq!(h.dim(), p1.slot_dim((i, d)), "P{} at {d}", i + 1);
                for map in &h.basis {
                    assert!(p.is_homomorphism(&p1, map));
                }
            }
        }
    }

    #[test]
    fn simples_have_scalar_endomorphisms() {
        let alg = cato();
        let s = simple(&alg, 1, 0).unwrap();
        assert_eq!(graded_hom(&s, &s, 0).unwrap().dim(), 1);
        assert_eq!(graded_hom(&s, &s, 1).unwrap().dim(), 0);
        assert_eq!(total_hom_dim(&s, &simple(&alg, 0, 0).unwrap()).unwrap(), 0);
    }

    #[test]
    fn hom_duality() {
        let alg = cato();
        let p1 = projective(&alg, 0, 0).unwrap();
        let p2 = projective(&alg, 1, 1).unwrap();
        let a = total_hom_dim(&p1, &p2).unwrap();
        let b = total_hom_dim(&p2.dualize().unwrap(), &p1.dualize().unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
