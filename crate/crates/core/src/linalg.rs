//! Dense exact linear algebra over a [`Field`].
//!
//! Matrices are row-major. Vectors are plain `Vec<F::Elem>`. All pivoting
//! picks the first nonzero entry, so every result is a deterministic
//! function of its input.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row");
            for (c, x) in row.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn from_columns(field: &F, rows: usize, cols: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged column");
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: F::Elem) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.data.iter().all(|x| field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if field.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if field.is_zero(b) {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = field.mul_add(&out.data[idx], a, b);
                }
            }
        }
        out
    }

    pub fn apply(&self, field: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in apply");
        let mut out = vec![field.zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if field.is_zero(x) {
                continue;
            }
            for (r, slot) in out.iter_mut().enumerate() {
                let a = self.get(r, c);
                if !field.is_zero(a) {
                    *slot = field.mul_add(slot, a, x);
                }
            }
        }
        out
    }

    pub fn add_assign(&mut self, field: &F, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = field.add(a, b);
        }
    }

    pub fn scale(&self, field: &F, s: &F::Elem) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| field.mul(x, s)).collect(),
        }
    }

    /// Stacks `other` to the right of `self`.
    pub fn hconcat(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// nonzero row.
    pub fn rref_in_place(&mut self, field: &F) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !field.is_zero(self.get(r, c))) else {
                continue;
            };
            if p != lead {
                for k in 0..self.cols {
                    self.data.swap(p * self.cols + k, lead * self.cols + k);
                }
            }
            let inv = field.inv(self.get(lead, c)).expect("pivot is nonzero");
            for k in c..self.cols {
                let idx = lead * self.cols + k;
                self.data[idx] = field.mul(&self.data[idx], &inv);
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, c).clone();
                if field.is_zero(&factor) {
                    continue;
                }
                let neg = field.neg(&factor);
                for k in c..self.cols {
                    let src = self.data[lead * self.cols + k].clone();
                    if field.is_zero(&src) {
                        continue;
                    }
                    let idx = r * self.cols + k;
                    self.data[idx] = field.mul_add(&self.data[idx], &neg, &src);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &F) -> usize {
        let mut m = self.clone();
        m.rref_in_place(field).len()
    }

    /// Basis of the right kernel `{x : self * x = 0}`, one vector per free
    /// column, with a 1 in that column.
    pub fn kernel(&self, field: &F) -> Vec<Vec<F::Elem>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                let x = m.get(r, free);
                if !field.is_zero(x) {
                    v[p] = field.neg(x);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Linearly independent columns spanning the column space, chosen
    /// greedily from the left.
    pub fn column_space(&self, field: &F) -> Vec<Vec<F::Elem>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place(field);
        pivots.into_iter().map(|c| self.column(c)).collect()
    }
}

/// Precomputed elimination for solving `A x = b` against many right-hand
/// sides.
#[derive(Clone, Debug)]
pub struct Solver<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    /// Row operations `E` with `E A = R` (R in reduced echelon form).
    ops: Matrix<F>,
    reduced: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Solver<F> {
    pub fn new(field: &F, a: &Matrix<F>) -> Self {
        let aug = a.hconcat(field, &Matrix::identity(field, a.rows()));
        let mut aug = aug;
        // Pivots must come from the A block only.
        let mut pivots = Vec::new();
        let mut lead = 0;
        let cols = aug.cols();
        for c in 0..a.cols() {
            if lead == aug.rows() {
                break;
            }
            let Some(p) = (lead..aug.rows()).find(|&r| !field.is_zero(aug.get(r, c))) else {
                continue;
            };
            if p != lead {
                for k in 0..cols {
                    let x = aug.get(p, k).clone();
                    let y = aug.get(lead, k).clone();
                    aug.set(p, k, y);
                    aug.set(lead, k, x);
                }
            }
            let inv = field.inv(aug.get(lead, c)).expect("pivot is nonzero");
            for k in 0..cols {
                let x = field.mul(aug.get(lead, k), &inv);
                aug.set(lead, k, x);
            }
            for r in 0..aug.rows() {
                if r == lead {
                    continue;
                }
                let factor = aug.get(r, c).clone();
                if field.is_zero(&factor) {
                    continue;
                }
                let neg = field.neg(&factor);
                for k in 0..cols {
                    let src = aug.get(lead, k).clone();
                    if field.is_zero(&src) {
                        continue;
                    }
                    let x = field.mul_add(aug.get(r, k), &neg, &src);
                    aug.set(r, k, x);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        let mut reduced = Matrix::zeros(field, a.rows(), a.cols());
        let mut ops = Matrix::zeros(field, a.rows(), a.rows());
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                reduced.set(r, c, aug.get(r, c).clone());
            }
            for c in 0..a.rows() {
                ops.set(r, c, aug.get(r, a.cols() + c).clone());
            }
        }
        Solver {
            field: field.clone(),
            rows: a.rows(),
            cols: a.cols(),
            ops,
            reduced,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A particular solution with all free variables zero, or `None` when
    /// `b` is outside the column space.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let c = self.ops.apply(f, b);
        if c[self.pivots.len()..].iter().any(|x| !f.is_zero(x)) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &p) in self.pivots.iter().enumerate() {
            x[p] = c[r].clone();
        }
        Some(x)
    }

    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (r, &p) in self.pivots.iter().enumerate() {
                let x = self.reduced.get(r, free);
                if !f.is_zero(x) {
                    v[p] = f.neg(x);
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// An incrementally built subspace of `F^dim`, kept in reduced echelon
/// form.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: &F, dim: usize) -> Self {
        Echelon {
            field: field.clone(),
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<'a>(
        field: &F,
        dim: usize,
        vectors: impl IntoIterator<Item = &'a Vec<F::Elem>>,
    ) -> Self {
        let mut e = Self::new(field, dim);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let factor = f.neg(&v[p]);
            for (k, x) in row.iter().enumerate() {
                if !f.is_zero(x) {
                    v[k] = f.mul_add(&v[k], &factor, x);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.dim);
        let f = self.field.clone();
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]).unwrap();
        for x in r.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for row in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let factor = f.neg(&row[p]);
            for (k, x) in r.iter().enumerate() {
                if !f.is_zero(x) {
                    row[k] = f.mul_add(&row[k], &factor, x);
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    /// Coordinates not used as pivots; their unit vectors span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.dim).filter(|&c| !is_pivot[c]).collect()
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.dim == other.dim && self.pivots == other.pivots && self.rows == other.rows
    }
}

pub fn unit_vector<F: Field>(field: &F, dim: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); dim];
    v[i] = field.one();
    v
}

pub fn is_zero_vec<F: Field>(field: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| field.is_zero(x))
}

pub fn axpy<F: Field>(field: &F, y: &mut [F::Elem], a: &F::Elem, x: &[F::Elem]) {
    if field.is_zero(a) {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !field.is_zero(xi) {
            *yi = field.mul_add(yi, a, xi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn q(n: i64) -> num_rational::BigRational {
        Rationals.from_i64(n)
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = Rationals;
        let m = Matrix::from_rows(&f, 3, &[vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        let k = m.kernel(&f);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&f, &m.apply(&f, v)));
        }
    }

    #[test]
    fn solver_detects_inconsistency() {
        let f = Rationals;
        let m = Matrix::from_rows(&f, 2, &[vec![q(1), q(1)], vec![q(1), q(1)]]);
        let s = Solver::new(&f, &m);
        assert!(s.solve(&[q(1), q(2)]).is_none());
        let x = s.solve(&[q(3), q(3)]).unwrap();
        assert_eq!(m.apply(&f, &x), vec![q(3), q(3)]);
    }

    #[test]
    fn echelon_membership() {
        let f = PrimeField::new(5).unwrap();
        let mut e = Echelon::new(&f, 3);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 3, 1]));
        assert!(e.contains(&[2, 4, 0]));
        assert!(!e.contains(&[0, 0, 1]));
        assert_eq!(e.non_pivots(), vec![2]);
    }

    fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(-3i64..4, r * c))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity((r, c, entries) in small_matrix()) {
            let f = Rationals;
            let rows: Vec<Vec<_>> = entries.chunks(c).map(|ch| ch.iter().map(|&x| q(x)).collect()).collect();
            let m = Matrix::from_rows(&f, c, &rows);
            let k = m.kernel(&f);
            prop_assert_eq!(m.rank(&f) + k.len(), c);
            for v in &k {
                prop_assert!(is_zero_vec(&f, &m.apply(&f, v)));
            }
            let s = Solver::new(&f, &m);
            prop_assert_eq!(s.rank(), m.rank(&f));
            // Any image vector is solvable.
            let x: Vec<_> = (0..c).map(|i| q(i as i64 + 1)).collect();
            let b = m.apply(&f, &x);
            let sol = s.solve(&b).unwrap();
            prop_assert_eq!(m.apply(&f, &sol), b);
            let _ = r;
        }
    }
}
