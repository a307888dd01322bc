//! An independent Ext oracle.
//!
//! The resolution covers every kernel by one free generator per basis
//! vector, so no minimality is used, and Ext is read off as the cohomology
//! of `Hom(P^•, N<s>)` computed with [`graded_hom`] on each term. Nothing
//! here touches the cochain code in [`crate::ext`].

use std::collections::BTreeMap;

use crate::error::Result;
use crate::ext::ExtDims;
use crate::field::Field;
use crate::hom::{graded_hom, hom_shift_range, HomSpace};
use crate::linalg::Matrix;
use crate::module::GradedModule;
use crate::resolution::{resolve, Cover};

/// Default bound on the dimension of any single resolution term.
pub const DEFAULT_GUARD: usize = 4_000;

/// Bigraded Ext dimensions, `(n, s) -> dim Ext^n(M, N<s>)` for every `n`
/// whose value is determined by the computed terms. The second component is
/// the number of such `n`.
pub fn bar_ext_oracle<F: Field>(
    m: &GradedModule<F>,
    n_mod: &GradedModule<F>,
    n_max: usize,
    guard: usize,
) -> Result<(ExtDims, usize)> {
    let f = m.field();
    let res = resolve(m, n_max + 1, Cover::AllBasis, Some(guard))?;
    let len = res.terms.len();
    let valid = if res.complete { len } else { len.saturating_sub(1) };
    let mut shifts: Vec<i64> = res
        .terms
        .iter()
        .flat_map(|t| hom_shift_range(t.module(), n_mod))
        .collect();
    shifts.sort_unstable();
    shifts.dedup();
    let mut out = BTreeMap::new();
    for s in shifts {
        let homs: Vec<HomSpace<F>> = res
            .terms
            .iter()
            .map(|t| graded_hom(t.module(), n_mod, s))
            .collect::<Result<_>>()?;
        // rank of f ↦ f ∘ d_{n+1} on Hom(P^n, N<s>).
        let ranks: Vec<usize> = (0..len)
            .map(|n| {
                if n + 1 >= len || homs[n].dim() == 0 {
                    return 0;
                }
                let layout = &homs[n + 1].layout;
                let rows: usize = layout.iter().map(|(_, r, c)| r * c).sum();
                let cols: Vec<Vec<F::Elem>> = homs[n]
                    .basis
                    .iter()
                    .map(|g| g.compose(f, &res.maps[n + 1]).flatten(f, layout))
                    .collect();
                Matrix::from_columns(f, rows, &cols).rank(f)
            })
            .collect();
        for n in 0..valid {
            let below = if n == 0 { 0 } else { ranks[n - 1] };
            let d = homs[n].dim() - ranks[n] - below;
            if d > 0 {
                out.insert((n, s), d);
            }
        }
    }
    Ok((out, valid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::ext::ext_table;
    use crate::field::Rationals;
    use crate::fixtures::fixture;
    use crate::module::simple;
    use crate::quasi_hereditary::StandardFamily;
    use crate::resolution::minimal_resolution;
    use std::sync::Arc;

    fn restrict(d: &ExtDims, below: usize) -> ExtDims {
        d.iter().filter(|((n, _), _)| *n < below).map(|(k, v)| (*k, *v)).collect()
    }

    #[test]
    fn agrees_with_ext_table_on_cato() {
        let a = Arc::new(GradedAlgebra::build(&Rationals, &fixture("CATO").unwrap(), None).unwrap());
        let fam = StandardFamily::new(&a).unwrap();
        for m in &fam.deltas {
            for n in fam.deltas.iter().chain([&simple(&a, 0, 0).unwrap()]) {
                let (bar, valid) = bar_ext_oracle(m, n, 2, DEFAULT_GUARD).unwrap();
                assert!(valid >= 2);
                let table = ext_table(&minimal_resolution(m, 6).unwrap(), n).unwrap();
                assert_eq!(bar, restrict(&table.dims(), valid));
            }
        }
    }

    #[test]
    fn semisimple_has_no_higher_ext() {
        let a = Arc::new(GradedAlgebra::build(&Rationals, &fixture("K").unwrap(), None).unwrap());
        let s = simple(&a, 0, 0).unwrap();
        let (bar, valid) = bar_ext_oracle(&s, &s, 3, DEFAULT_GUARD).unwrap();
        assert_eq!(bar.into_iter().collect::<Vec<_>>(), vec![((0, 0), 1)]);
        assert!(valid >= 1);
    }

    #[test]
    fn guard_is_enforced() {
        let a = Arc::new(GradedAlgebra::build(&Rationals, &fixture("SO4").unwrap(), None).unwrap());
        let s = simple(&a, 0, 0).unwrap();
        assert!(bar_ext_oracle(&s, &s, 6, 10).is_err());
    }
}
