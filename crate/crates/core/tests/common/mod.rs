//! Oracles shared by the integration suites. Nothing here reuses the basis
//! construction or the resolution code of the library.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive};
use qhk_core::bar::bar_ext_oracle;
use qhk_core::delta::delta_regrade;
use qhk_core::fixtures::fixture;
use qhk_core::quasi_hereditary::StandardFamily;
use qhk_core::{AlgebraPresentation, Field, GradedAlgebra};

const P: u64 = 1_000_000_007;

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

fn reduce(q: &num_rational::BigRational) -> u64 {
    let n = (q.numer().abs() % P).to_u64().unwrap();
    let d = (q.denom().abs() % P).to_u64().unwrap();
    let v = n * pow(d, P - 2) % P;
    if q.is_negative() {
        (P - v) % P
    } else {
        v
    }
}

fn rank(mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = pow(rows[r][c], P - 2);
        for x in rows[r].iter_mut() {
            *x = *x * inv % P;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + P - f * y % P) % P;
                }
            }
        }
        r += 1;
    }
    r
}

/// `dim e_t (kQ/I)_l e_s` keyed `(s, t, l)`, from all paths of length `l`
/// modulo the span of `u · ρ · w`, ranks taken mod a large prime.
pub fn path_dims(p: &AlgebraPresentation) -> BTreeMap<(usize, usize, usize), usize> {
    let n = p.vertex_count;
    let src = |path: &[usize], v: usize| path.first().map_or(v, |&a| p.arrows[a].source);
    let tgt = |path: &[usize], v: usize| path.last().map_or(v, |&a| p.arrows[a].target);
    // paths[l]: (start vertex, arrows)
    let mut paths: Vec<Vec<(usize, Vec<usize>)>> = vec![(0..n).map(|v| (v, Vec::new())).collect()];
    let mut out = BTreeMap::new();
    for v in 0..n {
        out.insert((v, v, 0), 1);
    }
    for l in 1.. {
        let next: Vec<(usize, Vec<usize>)> = paths[l - 1]
            .iter()
            .flat_map(|(v, q)| {
                let end = tgt(q, *v);
                p.arrows.iter().enumerate().filter(move |(_, a)| a.source == end).map(move |(i, _)| {
                    let mut q2 = q.clone();
                    q2.push(i);
                    (*v, q2)
                })
            })
            .collect();
        paths.push(next);
        let mut any = false;
        for s in 0..n {
            for t in 0..n {
                let here: Vec<&Vec<usize>> = paths[l]
                    .iter()
                    .filter(|(v, q)| *v == s && tgt(q, s) == t)
                    .map(|(_, q)| q)
                    .collect();
                if here.is_empty() {
                    continue;
                }
                let index: BTreeMap<&Vec<usize>, usize> = here.iter().enumerate().map(|(i, q)| (*q, i)).collect();
                let mut gens = Vec::new();
                for rel in &p.relations {
                    let (_, first) = &rel.terms[0];
                    let k = first.len();
                    if k > l {
                        continue;
                    }
                    let (rs, rt) = (src(first, 0), tgt(first, 0));
                    for a in 0..=l - k {
                        let b = l - k - a;
                        let prefixes = paths[a].iter().filter(|(v, q)| *v == s && tgt(q, s) == rs);
                        for (_, u) in prefixes {
                            for (_, w) in paths[b].iter().filter(|(v, q)| *v == rt && tgt(q, rt) == t) {
                                let mut row = vec![0u64; here.len()];
                                for (c, term) in &rel.terms {
                                    let full: Vec<usize> = u.iter().chain(term).chain(w).copied().collect();
                                    let i = index[&full];
                                    row[i] = (row[i] + reduce(c)) % P;
                                }
                                gens.push(row);
                            }
                        }
                    }
                }
                let d = here.len() - rank(gens);
                if d > 0 {
                    out.insert((s, t, l), d);
                    any = true;
                }
            }
        }
        if !any {
            break;
        }
    }
    out
}

pub fn length_dims(p: &AlgebraPresentation) -> Vec<usize> {
    let mut v = Vec::new();
    for (&(_, _, l), &d) in &path_dims(p) {
        if v.len() <= l {
            v.resize(l + 1, 0);
        }
        v[l] += d;
    }
    v
}

/// `dim Λ_[k]` with `deg_Δ = (l + h(t) - h(s)) / 2` for a path `s → t`.
pub fn delta_dims(p: &AlgebraPresentation, h: &[i64]) -> Vec<usize> {
    let mut v = Vec::new();
    for (&(s, t, l), &d) in &path_dims(p) {
        let twice = l as i64 + h[t] - h[s];
        assert!(twice >= 0 && twice % 2 == 0, "bad Δ-degree for slot {s} -> {t} in length {l}");
        let k = (twice / 2) as usize;
        if v.len() <= k {
            v.resize(k + 1, 0);
        }
        v[k] += d;
    }
    v
}

/// `dim Λ = Σ_j dim Δ_j · dim ∇_j`, with `dim ∇_j = dim Δ_j` under a
/// duality; `composition[j][i] = [Δ_j : S_i]`.
pub fn bgg_dim(composition: &[Vec<usize>]) -> usize {
    composition.iter().map(|c| c.iter().sum::<usize>().pow(2)).sum()
}

/// `Σ_{i,j} dim Ext^n(Δ_i, Δ_j<n>)` per `n` and the deg_H split, computed
/// with the bar resolution in the Δ-grading. Also returns the number of
/// homological degrees covered and all off-diagonal dimensions found.
pub struct BarGamma {
    pub ext_dims: Vec<usize>,
    pub h_dims: Vec<usize>,
    pub valid: usize,
    pub off_diagonal: usize,
}

pub fn bar_gamma<F: Field>(field: &F, name: &str, h: &[i64], depth: usize, guard: usize) -> BarGamma {
    let a = Arc::new(GradedAlgebra::build(field, &fixture(name).unwrap(), None).unwrap());
    let fam = StandardFamily::new(&a).unwrap();
    let dg = delta_regrade(&a, h).unwrap();
    let deltas = dg.standard_modules(&fam).unwrap();
    let mut ext_dims = Vec::new();
    let mut h_dims = Vec::new();
    let mut valid = usize::MAX;
    let mut off = 0;
    for (i, di) in deltas.iter().enumerate() {
        for (j, dj) in deltas.iter().enumerate() {
            let (dims, v) = bar_ext_oracle(di, dj, depth, guard).unwrap();
            valid = valid.min(v);
            for ((n, s), d) in dims {
                if s != n as i64 {
                    off += d;
                    continue;
                }
                if ext_dims.len() <= n {
                    ext_dims.resize(n + 1, 0);
                }
                ext_dims[n] += d;
                // Ext(Δ_i, Δ_j) is a Γ-path from j to i.
                let k = (h[j] - h[i]) as usize;
                if h_dims.len() <= k {
                    h_dims.resize(k + 1, 0);
                }
                h_dims[k] += d;
            }
        }
    }
    BarGamma { ext_dims, h_dims, valid, off_diagonal: off }
}

/// `0 \to P_2\gsh 1 \oplus P_2\gsh 1 \to P_1 \to \Delta_1 \to 0` in the
/// notation used by resolution displays.
pub fn from_latex(s: &str) -> String {
    s.split("\\to")
        .map(|part| {
            part.split("\\oplus")
                .map(|t| {
                    let t: String = t.chars().filter(|c| !c.is_whitespace()).collect();
                    if let Some(rest) = t.strip_prefix("\\Delta_") {
                        format!("Δ{rest}")
                    } else if let Some(rest) = t.strip_prefix("P_") {
                        match rest.split_once("\\gsh") {
                            Some((v, sh)) => format!("P{v}⟨{sh}⟩"),
                            None => format!("P{rest}"),
                        }
                    } else {
                        t
                    }
                })
                .collect::<Vec<_>>()
                .join(" ⊕ ")
        })
        .collect::<Vec<_>>()
        .join(" → ")
}
