//! Deciding whether two presentations over the same quiver define the same
//! algebra up to relabelling parallel arrows and rescaling arrows.
//!
//! Arrows are identified by `(source, target, declared degree)`. Within a
//! class of parallel arrows every bijection is tried. For each bijection the
//! question "is there `λ ∈ (Q^×)^arrows` with `φ_λ(I) = I'`" becomes a system
//! of multiplicative equations on the RREF coordinates of the ideal slices,
//! which splits into a sign system over GF(2) and one integer system per
//! prime. A found rescaling is always re-verified directly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::field::{format_rational, PrimeField, Rationals};
use crate::linalg::{Echelon, Matrix, Solver};
use crate::presentation::{AlgebraPresentation, Path};

const MAX_ASSIGNMENTS: usize = 40_320;
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchOutcome {
    pub matched: bool,
    /// `(ours, theirs)` arrow names.
    pub arrow_map: Vec<(String, String)>,
    /// Scalar applied to each of our arrows, as exact text.
    pub scaling: Vec<(String, String)>,
    /// Dimension of the relation space per path length, ours.
    pub relation_dims: Vec<(usize, usize)>,
    pub reason: Option<String>,
}

impl MatchOutcome {
    fn fail(reason: impl Into<String>) -> Self {
        MatchOutcome {
            matched: false,
            arrow_map: Vec::new(),
            scaling: Vec::new(),
            relation_dims: Vec::new(),
            reason: Some(reason.into()),
        }
    }
}

type Key = (usize, usize, i64);

fn arrow_key(p: &AlgebraPresentation, a: usize) -> Key {
    let x = &p.arrows[a];
    (x.source, x.target, x.degree.unwrap_or(1))
}

/// All paths of length `l` in the quiver of `p`, in lexicographic order.
fn paths_of_length(p: &AlgebraPresentation, l: usize) -> Vec<Path> {
    let mut cur: Vec<Path> = (0..p.arrows.len()).map(|a| vec![a]).collect();
    for _ in 1..l {
        let mut next = Vec::new();
        for q in &cur {
            let end = p.arrows[*q.last().unwrap()].target;
            for (a, x) in p.arrows.iter().enumerate() {
                if x.source == end {
                    let mut r = q.clone();
                    r.push(a);
                    next.push(r);
                }
            }
        }
        cur = next;
    }
    if l == 0 {
        Vec::new()
    } else {
        cur
    }
}

struct Slices {
    paths: Vec<Vec<Path>>,
    spaces: Vec<Echelon<Rationals>>,
}

/// Ideal slices `I_l` for `l = 0..=top`, with relations rewritten through
/// `rename` (our arrow index to the common index) and `scale`.
fn ideal_slices(
    quiver: &AlgebraPresentation,
    rels: &[Vec<(BigRational, Path)>],
    top: usize,
) -> std::result::Result<Slices, String> {
    let f = Rationals;
    let mut paths = vec![Vec::new()];
    let mut spaces = vec![Echelon::new(&f, 0)];
    for l in 1..=top {
        let ps = paths_of_length(quiver, l);
        let index: BTreeMap<&Path, usize> = ps.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut e = Echelon::new(&f, ps.len());
        for rel in rels.iter().filter(|r| r.first().is_some_and(|t| t.1.len() == l)) {
            let mut v = vec![BigRational::zero(); ps.len()];
            for (c, p) in rel {
                let Some(&i) = index.get(p) else {
                    return Err("relation contains a path that does not compose".into());
                };
                v[i] += c;
            }
            e.insert(&v);
        }
        let prev = &spaces[l - 1];
        let prev_paths: &Vec<Path> = &paths[l - 1];
        for row in prev.rows() {
            for a in 0..quiver.arrows.len() {
                for after in [true, false] {
                    let mut v = vec![BigRational::zero(); ps.len()];
                    let mut any = false;
                    for (k, c) in row.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut q = prev_paths[k].clone();
                        if after {
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
                        e.insert(&v);
                    }
                }
            }
        }
        paths.push(ps);
        spaces.push(e);
    }
    Ok(Slices { paths, spaces })
}

fn check_homogeneous(p: &AlgebraPresentation) -> std::result::Result<(), String> {
    for (i, r) in p.relations.iter().enumerate() {
        let l = r.length();
        if r.terms.iter().any(|(_, q)| q.len() != l) {
            return Err(format!("relation {} mixes path lengths", i + 1));
        }
    }
    Ok(())
}

/// Compares the two-sided ideals generated by the relations of `ours` and
/// `theirs` after identifying arrows by `(source, target, degree)`.
///
/// Works over Q regardless of the field that produced `ours`.
pub fn match_presentations(ours: &AlgebraPresentation, theirs: &AlgebraPresentation) -> Result<MatchOutcome> {
    if ours.vertex_count != theirs.vertex_count {
        return Ok(MatchOutcome::fail(format!(
            "vertex counts differ: {} vs {}",
            ours.vertex_count, theirs.vertex_count
        )));
    }
    if let Err(e) = check_homogeneous(ours).and_then(|_| check_homogeneous(theirs)) {
        return Ok(MatchOutcome::fail(e));
    }
    let mut groups_ours: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    let mut groups_theirs: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
    for a in 0..ours.arrows.len() {
        groups_ours.entry(arrow_key(ours, a)).or_default().push(a);
    }
    for a in 0..theirs.arrows.len() {
        groups_theirs.entry(arrow_key(theirs, a)).or_default().push(a);
    }
    let shape = |g: &BTreeMap<Key, Vec<usize>>| g.iter().map(|(k, v)| (*k, v.len())).collect::<Vec<_>>();
    if shape(&groups_ours) != shape(&groups_theirs) {
        return Ok(MatchOutcome::fail("arrow multisets differ"));
    }
    let top = ours
        .relations
        .iter()
        .chain(&theirs.relations)
        .map(|r| r.length())
        .max()
        .unwrap_or(0);
    let their_rels: Vec<Vec<(BigRational, Path)>> = theirs.relations.iter().map(|r| r.terms.clone()).collect();
    let target = match ideal_slices(theirs, &their_rels, top) {
        Ok(s) => s,
        Err(e) => return Ok(MatchOutcome::fail(e)),
    };

    let groups: Vec<(Vec<usize>, Vec<usize>)> = groups_ours
        .iter()
        .map(|(k, v)| (v.clone(), groups_theirs[k].clone()))
        .collect();
    let total: usize = groups
        .iter()
        .map(|(v, _)| (1..=v.len()).product::<usize>())
        .try_fold(1usize, |acc, x| acc.checked_mul(x))
        .unwrap_or(usize::MAX);
    if total > MAX_ASSIGNMENTS {
        return Ok(MatchOutcome::fail(format!(
            "{total} arrow bijections exceed the search limit"
        )));
    }
    let mut perms: Vec<Vec<usize>> = groups.iter().map(|(v, _)| (0..v.len()).collect()).collect();
    let mut last_reason;
    loop {
        let mut rename = vec![0; ours.arrows.len()];
        for ((o, t), p) in groups.iter().zip(&perms) {
            for (k, &a) in o.iter().enumerate() {
                rename[a] = t[p[k]];
            }
        }
        match try_assignment(ours, theirs, &rename, &target, top) {
            Ok(outcome) => return Ok(outcome),
            Err(reason) => last_reason = reason,
        }
        if !next_assignment(&mut perms) {
            break;
        }
    }
    Ok(MatchOutcome::fail(last_reason))
}

fn next_assignment(perms: &mut [Vec<usize>]) -> bool {
    for p in perms.iter_mut() {
        if next_permutation(p) {
            return true;
        }
    }
    false
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        p.sort_unstable();
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn rewrite(
    ours: &AlgebraPresentation,
    rename: &[usize],
    scale: Option<&[BigRational]>,
) -> Vec<Vec<(BigRational, Path)>> {
    ours.relations
        .iter()
        .map(|r| {
            r.terms
                .iter()
                .map(|(c, p)| {
                    let mut c = c.clone();
                    if let Some(s) = scale {
                        for &a in p {
                            c *= &s[a];
                        }
                    }
                    (c, p.iter().map(|&a| rename[a]).collect())
                })
                .collect()
        })
        .collect()
}

fn try_assignment(
    ours: &AlgebraPresentation,
    theirs: &AlgebraPresentation,
    rename: &[usize],
    target: &Slices,
    top: usize,
) -> std::result::Result<MatchOutcome, String> {
    let mine = ideal_slices(theirs, &rewrite(ours, rename, None), top)?;
    let n_arrows = ours.arrows.len();
    // exponent row (over our arrows) and required ratio.
    let mut equations: Vec<(Vec<i64>, BigRational)> = Vec::new();
    let count = |p: &Path| {
        let mut v = vec![0i64; n_arrows];
        let back: BTreeMap<usize, usize> = rename.iter().enumerate().map(|(o, &t)| (t, o)).collect();
        for a in p {
            v[back[a]] += 1;
        }
        v
    };
    for l in 1..=top {
        let (o, t) = (&mine.spaces[l], &target.spaces[l]);
        if o.pivots() != t.pivots() {
            return Err(format!("relation spaces differ in length {l}"));
        }
        for ((ro, rt), &p) in o.rows().iter().zip(t.rows()).zip(o.pivots()) {
            for c in 0..ro.len() {
                match (ro[c].is_zero(), rt[c].is_zero()) {
                    (true, true) => {}
                    (false, false) if c == p => {}
                    (false, false) => {
                        let pc = count(&mine.paths[l][c]);
                        let pp = count(&mine.paths[l][p]);
                        let e: Vec<i64> = pc.iter().zip(&pp).map(|(x, y)| x - y).collect();
                        equations.push((e, &rt[c] / &ro[c]));
                    }
                    _ => return Err(format!("relation supports differ in length {l}")),
                }
            }
        }
    }
    let lambda = solve_torus(n_arrows, &equations).ok_or("no rescaling of arrows matches")?;
    let check = ideal_slices(theirs, &rewrite(ours, rename, Some(&lambda)), top)?;
    for l in 1..=top {
        if !check.spaces[l].equals(&target.spaces[l]) {
            return Err(format!("rescaled relation space differs in length {l}"));
        }
    }
    Ok(MatchOutcome {
        matched: true,
        arrow_map: (0..n_arrows)
            .map(|a| (ours.arrows[a].name.clone(), theirs.arrows[rename[a]].name.clone()))
            .collect(),
        scaling: (0..n_arrows)
            .map(|a| (ours.arrows[a].name.clone(), format_rational(&lambda[a])))
            .collect(),
        relation_dims: (2..=top).map(|l| (l, target.spaces[l].rank())).collect(),
        reason: None,
    })
}

/// Finds `λ ∈ (Q^×)^n` with `∏ λ_a^{e_a} = r` for every equation `(e, r)`.
fn solve_torus(n: usize, equations: &[(Vec<i64>, BigRational)]) -> Option<Vec<BigRational>> {
    if equations.is_empty() {
        return Some(vec![BigRational::one(); n]);
    }
    // Signs over GF(2).
    let gf2 = PrimeField::new(2).unwrap();
    let rows: Vec<Vec<u64>> = equations.iter().map(|(e, _)| e.iter().map(|x| x.rem_euclid(2) as u64).collect()).collect();
    let a = Matrix::from_rows(&gf2, n, &rows);
    let b: Vec<u64> = equations.iter().map(|(_, r)| u64::from(r.is_negative())).collect();
    let signs = Solver::new(&gf2, &a).solve(&b)?;
    // Valuations prime by prime.
    let bases = coprime_base(equations.iter().flat_map(|(_, r)| [r.numer().abs(), r.denom().clone()]));
    let ematrix: Vec<Vec<i128>> = equations.iter().map(|(e, _)| e.iter().map(|&x| x as i128).collect()).collect();
    let mut lambda: Vec<BigRational> = signs
        .iter()
        .map(|&s| if s == 1 { -BigRational::one() } else { BigRational::one() })
        .collect();
    for p in &bases {
        let rhs: Vec<i128> = equations
            .iter()
            .map(|(_, r)| valuation(r.numer(), p) - valuation(r.denom(), p))
            .collect();
        if rhs.iter().all(|&x| x == 0) {
            continue;
        }
        let x = solve_integer(&ematrix, &rhs)?;
        for (l, &k) in lambda.iter_mut().zip(&x) {
            let pk = BigRational::from_integer(num_traits::pow(p.clone(), k.unsigned_abs() as usize));
            if k > 0 {
                *l *= pk;
            } else if k < 0 {
                *l /= pk;
            }
        }
    }
    Some(lambda)
}

fn valuation(n: &BigInt, p: &BigInt) -> i128 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// Primes up to the trial-division limit, plus the leftover cofactors
/// refined into a pairwise coprime set.
fn coprime_base(values: impl Iterator<Item = BigInt>) -> Vec<BigInt> {
    let mut primes = Vec::new();
    let mut rest = Vec::new();
    for mut n in values {
        let mut d = 2u64;
        while BigInt::from(d) * BigInt::from(d) <= n && d <= TRIAL_DIVISION_LIMIT {
            let bd = BigInt::from(d);
            if (&n % &bd).is_zero() {
                primes.push(bd.clone());
                while (&n % &bd).is_zero() {
                    n /= &bd;
                }
            }
            d += 1;
        }
        if n > BigInt::one() {
            if n.to_u64().is_some_and(|x| x <= TRIAL_DIVISION_LIMIT * TRIAL_DIVISION_LIMIT) {
                primes.push(n);
            } else {
                rest.push(n);
            }
        }
    }
    // Pairwise gcd refinement of large cofactors.
    let mut changed = true;
    while changed {
        changed = false;
        'outer: for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                let g = rest[i].gcd(&rest[j]);
                if g > BigInt::one() {
                    let (a, b) = (&rest[i] / &g, &rest[j] / &g);
                    rest.remove(j);
                    rest.remove(i);
                    rest.extend([a, b, g].into_iter().filter(|x| *x > BigInt::one()));
                    changed = true;
                    break 'outer;
                }
            }
        }
    }
    primes.extend(rest);
    primes.sort();
    primes.dedup();
    primes
}

/// Integer solution of `A x = b` by unimodular column reduction.
fn solve_integer(a: &[Vec<i128>], b: &[i128]) -> Option<Vec<i128>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // Work on columns: h = A U, u = U.
    let mut h: Vec<Vec<i128>> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    let col_op = |mat: &mut Vec<Vec<i128>>, dst: usize, src: usize, k: i128| {
        for row in mat.iter_mut() {
            row[dst] -= k * row[src];
        }
    };
    let swap = |mat: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut pivots = Vec::new();
    let mut col = 0;
    for r in 0..m {
        if col == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (col..n).filter(|&c| h[r][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&c| h[r][c].abs()).unwrap();
            swap(&mut h, col, best);
            swap(&mut u, col, best);
            let mut done = true;
            for c in col + 1..n {
                if h[r][c] != 0 {
                    let k = h[r][c].div_euclid(h[r][col]);
                    col_op(&mut h, c, col, k);
                    col_op(&mut u, c, col, k);
                    if h[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                pivots.push((r, col));
                col += 1;
                break;
            }
        }
    }
    // Forward substitution on the lower echelon form.
    let mut y = vec![0i128; n];
    let mut res: Vec<i128> = b.to_vec();
    for &(r, c) in &pivots {
        if res[r] % h[r][c] != 0 {
            return None;
        }
        y[c] = res[r] / h[r][c];
        for (i, ri) in res.iter_mut().enumerate() {
            *ri -= h[i][c] * y[c];
        }
    }
    if res.iter().any(|&x| x != 0) {
        return None;
    }
    Some((0..n).map(|i| (0..n).map(|j| u[i][j] * y[j]).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{CATO_GAMMA, DUALEXT_GAMMA, PARA_GAMMA, SO4_GAMMA};
    use crate::presentation::parse_presentation;

    #[test]
    fn presentation_matches_itself() {
        for src in [CATO_GAMMA, PARA_GAMMA, SO4_GAMMA, DUALEXT_GAMMA] {
            let p = parse_presentation(src).unwrap();
            assert!(match_presentations(&p, &p).unwrap().matched);
        }
    }

    #[test]
    fn rescaled_relations_match() {
        let p = parse_presentation(CATO_GAMMA).unwrap();
        let q = parse_presentation(&CATO_GAMMA.replace("alpha_o.beta_v - alpha_v.beta_o", "2*alpha_o.beta_v + 3/5*alpha_v.beta_o")).unwrap();
        let m = match_presentations(&q, &p).unwrap();
        assert!(m.matched, "{m:?}");
    }

    #[test]
    fn different_ideals_do_not_match() {
        let cato = parse_presentation(CATO_GAMMA).unwrap();
        let para = parse_presentation(PARA_GAMMA).unwrap();
        let m = match_presentations(&cato, &para).unwrap();
        assert!(!m.matched);
    }

    #[test]
    fn sign_change_is_absorbed() {
        let base = "vertices: 4\narrow x 1 2\narrow y 2 3\narrow z 1 4\narrow w 4 3\narrow u 3 1\n";
        let p = parse_presentation(&format!("{base}relation y.x - w.z\nrelation u.y.x\nrelation u.w.z\n")).unwrap();
        let q = parse_presentation(&format!("{base}relation y.x + w.z\nrelation u.y.x\nrelation u.w.z\n")).unwrap();
        assert!(match_presentations(&p, &q).unwrap().matched);
    }

    #[test]
    fn integer_solver() {
        let a = vec![vec![2, 0], vec![1, 1]];
        assert_eq!(solve_integer(&a, &[4, 3]), Some(vec![2, 1]));
        assert_eq!(solve_integer(&a, &[3, 3]), None);
        assert_eq!(solve_integer(&[vec![2, 4]], &[6]).map(|x| 2 * x[0] + 4 * x[1]), Some(6));
    }

    #[test]
    fn valuations_need_integrality() {
        // λ² = 2 has no rational solution.
        assert!(solve_torus(1, &[(vec![2], BigRational::from_integer(2.into()))]).is_none());
        assert!(solve_torus(1, &[(vec![2], BigRational::from_integer(4.into()))]).is_some());
        assert!(solve_torus(1, &[(vec![2], BigRational::from_integer((-4).into()))]).is_none());
        let one = BigRational::one();
        assert!(solve_torus(2, &[(vec![1, 1], -one.clone()), (vec![1, -1], one)]).is_none());
    }
}
