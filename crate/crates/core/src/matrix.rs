//! Dense integer matrices with exact arithmetic, and the Smith normal form.
//!
//! Everything downstream (presentations, kernels, cokernels, homology) reduces
//! to the routines in this module. Entries are arbitrary-precision: moduli of
//! the form `q^{ni} - 1` overflow machine words already at desk scale.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A dense `rows x cols` matrix over the integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Mat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// A single-column matrix.
    pub fn col_vec(entries: &[BigInt]) -> Self {
        Mat::from_fn(entries.len(), 1, |i, _| entries[i].clone())
    }

    pub fn scalar(n: usize, s: &BigInt) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn col(&self, j: usize) -> Mat {
        Mat::from_fn(self.rows, 1, |i, _| self[(i, j)].clone())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn scale(&self, s: &BigInt) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * s)
    }

    /// `self^k` for a square matrix, `k >= 0`.
    pub fn pow(&self, k: u32) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut out = Mat::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `[self | other]` side by side.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// `[self; other]` stacked.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    /// Keep the rows listed in `idx`, in that order.
    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    /// Keep the columns listed in `idx`, in that order.
    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }
}

/// Smith normal form `u * a * v = d` together with the inverses of the
/// unimodular transforms. `d` is diagonal, non-negative, and each diagonal
/// entry divides the next (zeros trail).
pub struct Snf {
    pub u: Mat,
    pub u_inv: Mat,
    pub d: Mat,
    pub v: Mat,
    pub v_inv: Mat,
}

impl Snf {
    /// Diagonal entries of `d`.
    pub fn diag(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diag().iter().filter(|d| !d.is_zero()).count()
    }
}

struct SnfWork {
    d: Mat,
    u: Mat,
    u_inv: Mat,
    v: Mat,
    v_inv: Mat,
}

impl SnfWork {
    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.d.cols {
            self.d.data.swap(i * self.d.cols + c, j * self.d.cols + c);
        }
        for c in 0..self.u.cols {
            self.u.data.swap(i * self.u.cols + c, j * self.u.cols + c);
        }
        for r in 0..self.u_inv.rows {
            self.u_inv.data.swap(r * self.u_inv.cols + i, r * self.u_inv.cols + j);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.d.rows {
            self.d.data.swap(r * self.d.cols + i, r * self.d.cols + j);
        }
        for r in 0..self.v.rows {
            self.v.data.swap(r * self.v.cols + i, r * self.v.cols + j);
        }
        for c in 0..self.v_inv.cols {
            self.v_inv.data.swap(i * self.v_inv.cols + c, j * self.v_inv.cols + c);
        }
    }

    /// row_i += c * row_j
    fn row_add(&mut self, i: usize, j: usize, c: &BigInt) {
        for k in 0..self.d.cols {
            let t = &self.d[(j, k)] * c;
            self.d[(i, k)] += t;
        }
        for k in 0..self.u.cols {
            let t = &self.u[(j, k)] * c;
            self.u[(i, k)] += t;
        }
        // inverse op on u_inv: col_j -= c * col_i
        for k in 0..self.u_inv.rows {
            let t = &self.u_inv[(k, i)] * c;
            self.u_inv[(k, j)] -= t;
        }
    }

    /// col_j += c * col_i
    fn col_add(&mut self, j: usize, i: usize, c: &BigInt) {
        for k in 0..self.d.rows {
            let t = &self.d[(k, i)] * c;
            self.d[(k, j)] += t;
        }
        for k in 0..self.v.rows {
            let t = &self.v[(k, i)] * c;
            self.v[(k, j)] += t;
        }
        // inverse op on v_inv: row_i -= c * row_j
        for k in 0..self.v_inv.cols {
            let t = &self.v_inv[(j, k)] * c;
            self.v_inv[(i, k)] -= t;
        }
    }

    fn row_negate(&mut self, i: usize) {
        for k in 0..self.d.cols {
            let t = -&self.d[(i, k)];
            self.d[(i, k)] = t;
        }
        for k in 0..self.u.cols {
            let t = -&self.u[(i, k)];
            self.u[(i, k)] = t;
        }
        for k in 0..self.u_inv.rows {
            let t = -&self.u_inv[(k, i)];
            self.u_inv[(k, i)] = t;
        }
    }

    /// Smallest-absolute-value nonzero entry of `d[k.., k..]`.
    fn pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.d.rows {
            for j in k..self.d.cols {
                let e = &self.d[(i, j)];
                if e.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some(b) => {
                        if e.abs() < self.d[b].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }
}

/// Compute the Smith normal form of an arbitrary rectangular integer matrix.
///
/// Pivots are chosen as the smallest-absolute-value nonzero entry of the
/// remaining block, which keeps coefficient growth tame at the scale this
/// library works at.
pub fn smith_normal_form(a: &Mat) -> Snf {
    let mut w = SnfWork {
        d: a.clone(),
        u: Mat::identity(a.rows()),
        u_inv: Mat::identity(a.rows()),
        v: Mat::identity(a.cols()),
        v_inv: Mat::identity(a.cols()),
    };
    let t = a.rows().min(a.cols());
    for k in 0..t {
        'pivoting: loop {
            let Some((pi, pj)) = w.pivot(k) else {
                break 'pivoting; // remaining block is zero
            };
            w.row_swap(k, pi);
            w.col_swap(k, pj);
            let mut clean = true;
            for i in k + 1..w.d.rows {
                if !w.d[(i, k)].is_zero() {
                    let q = w.d[(i, k)].div_rem(&w.d[(k, k)]).0;
                    w.row_add(i, k, &-q);
                    if !w.d[(i, k)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivoting;
            }
            for j in k + 1..w.d.cols {
                if !w.d[(k, j)].is_zero() {
                    let q = w.d[(k, j)].div_rem(&w.d[(k, k)]).0;
                    w.col_add(j, k, &-q);
                    if !w.d[(k, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivoting;
            }
            // Pivot must divide every entry of the remaining block for the
            // divisibility chain. If not, fold the offending row in and redo.
            for i in k + 1..w.d.rows {
                for j in k + 1..w.d.cols {
                    if !w.d[(i, j)].is_multiple_of(&w.d[(k, k)]) {
                        w.row_add(k, i, &BigInt::one());
                        continue 'pivoting;
                    }
                }
            }
            break 'pivoting;
        }
        if w.d[(k, k)].is_negative() {
            w.row_negate(k);
        }
    }
    Snf {
        u: w.u,
        u_inv: w.u_inv,
        d: w.d,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// One integer solution `x` of `a * x = b` (`b` may have several columns),
/// or `None` when no integer solution exists.
pub fn solve(a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.rows(), b.rows(), "solve: dimension mismatch");
    let snf = smith_normal_form(a);
    let c = snf.u.mul(b);
    let diag = snf.diag();
    let mut y = Mat::zero(a.cols(), b.cols());
    for col in 0..b.cols() {
        for i in 0..a.rows() {
            let rhs = &c[(i, col)];
            if i < diag.len() && !diag[i].is_zero() {
                let (q, r) = rhs.div_rem(&diag[i]);
                if !r.is_zero() {
                    return None;
                }
                y[(i, col)] = q;
            } else if !rhs.is_zero() {
                return None;
            }
        }
    }
    Some(snf.v.mul(&y))
}

/// A basis (as columns) of the lattice `{x : a * x = 0}`.
pub fn kernel_basis(a: &Mat) -> Mat {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let idx: Vec<usize> = (rank..a.cols()).collect();
    snf.v.select_cols(&idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_snf(a: &Mat) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "u*a*v != d for {a:?}");
        assert_eq!(s.u.mul(&s.u_inv), Mat::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), Mat::identity(a.cols()));
        let diag = s.diag();
        for i in 0..diag.len() {
            assert!(!diag[i].is_negative());
            if i + 1 < diag.len() {
                if diag[i].is_zero() {
                    assert!(diag[i + 1].is_zero(), "zero before nonzero in {diag:?}");
                } else {
                    assert!(diag[i + 1].is_multiple_of(&diag[i]), "chain broken: {diag:?}");
                }
            }
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_identity() {
        let a = Mat::identity(2);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, Mat::identity(2));
        check_snf(&a);
    }

    #[test]
    fn snf_2468() {
        // det = -8, gcd of entries = 2, so invariants (2, 4)
        let a = Mat::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diag(), vec![BigInt::from(2), BigInt::from(4)]);
        check_snf(&a);
    }

    #[test]
    fn snf_zero() {
        let a = Mat::from_rows(&[vec![0]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diag(), vec![BigInt::zero()]);
        check_snf(&a);
    }

    #[test]
    fn snf_empty() {
        check_snf(&Mat::zero(0, 3));
        check_snf(&Mat::zero(3, 0));
        check_snf(&Mat::zero(0, 0));
    }

    #[test]
    fn solve_simple() {
        let a = Mat::from_rows(&[vec![2, 0], vec![0, 3]]);
        let b = Mat::col_vec(&[BigInt::from(4), BigInt::from(9)]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        let b2 = Mat::col_vec(&[BigInt::from(1), BigInt::from(0)]);
        assert!(solve(&a, &b2).is_none());
    }

    #[test]
    fn kernel_of_projection() {
        let a = Mat::from_rows(&[vec![1, 0, -1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
    }

    proptest! {
        #[test]
        fn snf_random(rows in 0usize..5, cols in 0usize..5, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = Mat::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-20i64..=20)));
            check_snf(&a);
        }

        #[test]
        fn solve_random_consistent(rows in 1usize..4, cols in 1usize..4, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = Mat::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
            let x = Mat::from_fn(cols, 1, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
            let b = a.mul(&x);
            let got = solve(&a, &b).expect("consistent system must solve");
            prop_assert_eq!(a.mul(&got), b);
        }
    }
}
