//! Exact sparse integer linear algebra: Smith normal form, kernels,
//! cokernels and integral solving. All arithmetic is over unbounded
//! integers; intermediate entries in an SNF computation can grow far past
//! machine word size.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix. Absent entries are zero; stored entries are
/// always nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
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

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&(usize, usize), &BigInt)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = Self::zero(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            m.set(j, i, v.clone());
        }
        m
    }

    pub fn neg(&self) -> IntMatrix {
        let mut m = Self::zero(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            m.set(i, j, -v.clone());
        }
        m
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut m = self.clone();
        for (&(i, j), v) in &other.entries {
            let s = m.get(i, j) + v;
            m.set(i, j, s);
        }
        m
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        let mut m = Self::zero(self.rows, self.cols);
        if c.is_zero() {
            return m;
        }
        for (&(i, j), v) in &self.entries {
            m.set(i, j, v * c);
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        // group rhs entries by row for sparse traversal
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigInt)>> = BTreeMap::new();
        for (&(k, j), v) in &other.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    let e = acc.entry((i, j)).or_insert_with(BigInt::zero);
                    *e += a * b;
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        IntMatrix { rows: self.rows, cols: other.cols, entries: acc }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![BigInt::zero(); self.rows];
        for (&(i, j), a) in &self.entries {
            out[i] += a * &v[j];
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[BigInt]) {
        assert_eq!(v.len(), self.rows);
        for (i, x) in v.iter().enumerate() {
            self.set(i, j, x.clone());
        }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> IntMatrix {
        let mut m = Self::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.set_column(j, c);
        }
        m
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zero(self.rows, self.cols + other.cols);
        for (&(i, j), v) in &self.entries {
            m.set(i, j, v.clone());
        }
        for (&(i, j), v) in &other.entries {
            m.set(i, j + self.cols, v.clone());
        }
        m
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut m = Self::zero(self.rows + other.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            m.set(i, j, v.clone());
        }
        for (&(i, j), v) in &other.entries {
            m.set(i + self.rows, j, v.clone());
        }
        m
    }

    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zero(self.rows + other.rows, self.cols + other.cols);
        for (&(i, j), v) in &self.entries {
            m.set(i, j, v.clone());
        }
        for (&(i, j), v) in &other.entries {
            m.set(i + self.rows, j + self.cols, v.clone());
        }
        m
    }

    /// Kronecker product: each entry a_ij replaced by a_ij * B.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zero(self.rows * other.rows, self.cols * other.cols);
        for (&(i, j), a) in &self.entries {
            for (&(k, l), b) in &other.entries {
                m.set(i * other.rows + k, j * other.cols + l, a * b);
            }
        }
        m
    }

    /// Selects a subset of rows.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut m = Self::zero(rows.len(), self.cols);
        for (out_i, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                let v = self.get(i, j);
                m.set(out_i, j, v);
            }
        }
        m
    }

    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut m = Self::zero(self.rows, cols.len());
        for (out_j, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, out_j, self.get(i, j));
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn from_dense(d: &[Vec<BigInt>]) -> IntMatrix {
        let rows = d.len();
        let cols = d.first().map_or(0, |r| r.len());
        let mut m = Self::zero(rows, cols);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }
}

/// U * M * V = D with U, V unimodular and D diagonal with the divisibility
/// chain d1 | d2 | ... | dk.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
}

struct SnfWorker {
    m: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

impl SnfWorker {
    fn new(m: &IntMatrix) -> Self {
        let rows = m.rows();
        let cols = m.cols();
        let ident = |n: usize| -> Vec<Vec<BigInt>> {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
                .collect()
        };
        SnfWorker {
            m: m.to_dense(),
            u: ident(rows),
            u_inv: ident(rows),
            v: ident(cols),
            v_inv: ident(cols),
            rows,
            cols,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.m.swap(a, b);
        self.u.swap(a, b);
        // inverse op on u_inv: swap columns a, b
        for r in self.u_inv.iter_mut() {
            r.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in self.m.iter_mut() {
            r.swap(a, b);
        }
        for r in self.v.iter_mut() {
            r.swap(a, b);
        }
        self.v_inv.swap(a, b);
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            if !self.m[src][j].is_zero() {
                let t = &self.m[src][j] * c;
                self.m[dst][j] += t;
            }
        }
        for j in 0..self.rows {
            if !self.u[src][j].is_zero() {
                let t = &self.u[src][j] * c;
                self.u[dst][j] += t;
            }
        }
        // inverse: col[src] -= c * col[dst] in u_inv
        for i in 0..self.rows {
            if !self.u_inv[i][dst].is_zero() {
                let t = &self.u_inv[i][dst] * c;
                self.u_inv[i][src] -= t;
            }
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            if !self.m[i][src].is_zero() {
                let t = &self.m[i][src] * c;
                self.m[i][dst] += t;
            }
        }
        for i in 0..self.cols {
            if !self.v[i][src].is_zero() {
                let t = &self.v[i][src] * c;
                self.v[i][dst] += t;
            }
        }
        // inverse: row[src] -= c * row[dst] in v_inv
        for j in 0..self.cols {
            if !self.v_inv[dst][j].is_zero() {
                let t = &self.v_inv[dst][j] * c;
                self.v_inv[src][j] -= t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in self.m[i].iter_mut() {
            *v = -std::mem::take(v);
        }
        for v in self.u[i].iter_mut() {
            *v = -std::mem::take(v);
        }
        for r in self.u_inv.iter_mut() {
            r[i] = -std::mem::take(&mut r[i]);
        }
    }

    /// Pivot minimizing |entry|, ties broken by fill-in (nonzeros in its
    /// row plus column). Bounds coefficient growth in practice.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, u64, usize)> = None;
        let mut row_nnz = vec![0usize; self.rows];
        let mut col_nnz = vec![0usize; self.cols];
        for i in t..self.rows {
            for j in t..self.cols {
                if !self.m[i][j].is_zero() {
                    row_nnz[i] += 1;
                    col_nnz[j] += 1;
                }
            }
        }
        for i in t..self.rows {
            if row_nnz[i] == 0 {
                continue;
            }
            for j in t..self.cols {
                if self.m[i][j].is_zero() {
                    continue;
                }
                // Compare magnitudes by bit length: cheap, allocation-free,
                // and exact enough for pivot choice.
                let a = self.m[i][j].bits();
                let fill = row_nnz[i] + col_nnz[j];
                let better = match &best {
                    None => true,
                    Some((_, _, ba, bf)) => a < *ba || (a == *ba && fill < *bf),
                };
                if better {
                    if a == 1 && fill <= 2 {
                        return Some((i, j));
                    }
                    best = Some((i, j, a, fill));
                }
            }
        }
        best.map(|(i, j, _, _)| (i, j))
    }

    fn run(&mut self) {
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            if self.find_pivot(t).is_none() {
                break;
            }
            // Diagonalize position t.  Whenever a division leaves a
            // remainder, that remainder is strictly smaller than the pivot,
            // so re-picking the globally smallest entry terminates; always
            // eliminating against the smallest entry keeps quotients — and
            // therefore coefficient growth — small.
            loop {
                let (pi, pj) = self.find_pivot(t).expect("submatrix has a nonzero entry");
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let mut clean = true;
                for i in (t + 1)..self.rows {
                    if self.m[i][t].is_zero() {
                        continue;
                    }
                    let q = div_round(&self.m[i][t], &self.m[t][t]);
                    self.add_row(i, t, &-q);
                    if !self.m[i][t].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                for j in (t + 1)..self.cols {
                    if self.m[t][j].is_zero() {
                        continue;
                    }
                    let q = div_round(&self.m[t][j], &self.m[t][t]);
                    self.add_col(j, t, &-q);
                    if !self.m[t][j].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if self.m[t][t].sign() == num_bigint::Sign::Minus {
                self.negate_row(t);
            }
            t += 1;
        }
        // The matrix is diag(d_0, …, d_{r−1}, 0, …).  Enforce the
        // divisibility chain by pairwise gcd/lcm steps, which only touch
        // two rows and two columns at a time.
        let r = (0..n).take_while(|&i| !self.m[i][i].is_zero()).count();
        for i in 0..r {
            for j in (i + 1)..r {
                if (&self.m[j][j] % &self.m[i][i]).is_zero() {
                    continue;
                }
                // Make the block [[d_i, 0], [d_j, d_j]] and run Euclid.
                self.add_col(i, j, &BigInt::one());
                self.euclid_pair(i, j);
            }
        }
    }

    /// With all entries confined to the block {i,j}×{i,j} and `m[i][j] = 0`,
    /// restore diagonal form diag(gcd, ±lcm).
    fn euclid_pair(&mut self, i: usize, j: usize) {
        while !self.m[j][i].is_zero() {
            let q = div_round(&self.m[j][i], &self.m[i][i]);
            self.add_row(j, i, &-q);
            if !self.m[j][i].is_zero() {
                self.swap_rows(i, j);
            }
        }
        if !self.m[i][j].is_zero() {
            // The new pivot is gcd(d_i, d_j), which divides this leftover.
            let q = &self.m[i][j] / &self.m[i][i];
            self.add_col(j, i, &-q);
        }
        if self.m[i][i].sign() == num_bigint::Sign::Minus {
            self.negate_row(i);
        }
        if self.m[j][j].sign() == num_bigint::Sign::Minus {
            self.negate_row(j);
        }
    }
}

/// Round-to-nearest integer division, which keeps remainders small during
/// elimination.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = num_integer::Integer::div_rem(a, b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (a.sign() == num_bigint::Sign::Minus) != (b.sign() == num_bigint::Sign::Minus) {
            q -= 1;
        } else {
            q += 1;
        }
    }
    q
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut w = SnfWorker::new(m);
    w.run();
    let d = IntMatrix::from_dense(&w.m);
    let n = m.rows().min(m.cols());
    let mut factors = Vec::new();
    for i in 0..n {
        let x = d.get(i, i);
        if x.is_zero() {
            break;
        }
        factors.push(x);
    }
    let rank = factors.len();
    SmithDecomposition {
        u: IntMatrix::from_dense(&w.u),
        u_inv: IntMatrix::from_dense(&w.u_inv),
        d,
        v: IntMatrix::from_dense(&w.v),
        v_inv: IntMatrix::from_dense(&w.v_inv),
        invariant_factors: factors,
        rank,
    }
}

pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

/// Basis for the integer kernel {x : M x = 0}, returned as matrix columns.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let cols: Vec<usize> = (snf.rank..m.cols()).collect();
    snf.v.select_cols(&cols)
}

/// Basis for the lattice spanned by the columns of M.
pub fn column_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let mut cols = Vec::with_capacity(snf.rank);
    for i in 0..snf.rank {
        let mut c = snf.u_inv.column(i);
        let d = snf.d.get(i, i);
        for x in c.iter_mut() {
            *x *= &d;
        }
        cols.push(c);
    }
    IntMatrix::from_columns(m.rows(), &cols)
}

#[derive(Debug, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Integral solve M x = b; None when no integer solution exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch { expected: m.rows(), got: b.len() });
    }
    let snf = smith_normal_form(m);
    let ub = snf.u.apply(b);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < snf.rank {
            let d = snf.d.get(i, i);
            let (q, r) = num_integer::Integer::div_rem(ubi, &d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.v.apply(&y)))
}

/// Cokernel of M: Z^rows / im(M), as (free rank, torsion coefficients).
pub fn cokernel(m: &IntMatrix) -> (usize, Vec<BigInt>) {
    let snf = smith_normal_form(m);
    let free = m.rows() - snf.rank;
    let torsion: Vec<BigInt> =
        snf.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect();
    (free, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_decomposition(m: &IntMatrix, snf: &SmithDecomposition) {
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "U*M*V != D");
        assert_eq!(snf.u.mul(&snf.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(m.cols()));
        for w in snf.invariant_factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {:?}", snf.invariant_factors);
        }
        // D is diagonal
        for (&(i, j), _) in snf.d.nonzero_entries() {
            assert_eq!(i, j, "D not diagonal");
        }
    }

    /// Fraction-free Gaussian elimination rank over the rationals
    /// (Bareiss). Independent oracle for the SNF rank.
    pub fn bareiss_rank(m: &IntMatrix) -> usize {
        let mut a = m.to_dense();
        let rows = m.rows();
        let cols = m.cols();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in (r + 1)..rows {
                for j in (c + 1)..cols {
                    let t = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = &t / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(3);
        let snf = smith_normal_form(&m);
        check_decomposition(&m, &snf);
        assert_eq!(snf.d, IntMatrix::identity(3));
        assert_eq!(snf.invariant_factors, vec![BigInt::from(1); 3]);
    }

    #[test]
    fn snf_zero() {
        let m = IntMatrix::zero(2, 2);
        let snf = smith_normal_form(&m);
        check_decomposition(&m, &snf);
        assert!(snf.d.is_zero());
        assert!(snf.invariant_factors.is_empty());
    }

    #[test]
    fn snf_two_four_six_eight() {
        // gcd-of-minors oracle: d1 = gcd of entries = 2, d1*d2 = |det| = 8
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&m);
        check_decomposition(&m, &snf);
        assert_eq!(snf.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::from_rows(&[vec![2]])), (0, vec![BigInt::from(2)]));
        assert_eq!(cokernel(&IntMatrix::zero(3, 0)), (3, vec![]));
        assert_eq!(
            cokernel(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]])),
            (0, vec![BigInt::from(2), BigInt::from(4)])
        );
    }

    #[test]
    fn solve_examples() {
        let id = IntMatrix::identity(3);
        let b = vec![BigInt::from(5), BigInt::from(-2), BigInt::from(0)];
        assert_eq!(solve(&id, &b).unwrap(), Some(b.clone()));

        let m2 = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(solve(&m2, &[BigInt::from(3)]).unwrap(), None);

        // extended-gcd case: 2x + 3y = 1
        let m3 = IntMatrix::from_rows(&[vec![2, 3]]);
        let x = solve(&m3, &[BigInt::from(1)]).unwrap().expect("solvable");
        assert_eq!(m3.apply(&x), vec![BigInt::from(1)]);

        assert!(solve(&m3, &[BigInt::one(), BigInt::one()]).is_err());
    }

    fn random_sparse(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> IntMatrix {
        let mut m = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(density) {
                    let v: i64 = rng.gen_range(-9..=9);
                    m.set(i, j, BigInt::from(v));
                }
            }
        }
        m
    }

    #[test]
    fn snf_random_matrices_verified() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // Dense small matrices stress the gcd cascades; exact elimination
        // keeps entries tame at this scale.
        for _ in 0..30 {
            let rows = rng.gen_range(1..=14);
            let cols = rng.gen_range(1..=14);
            let m = random_sparse(&mut rng, rows, cols, 0.5);
            let snf = smith_normal_form(&m);
            check_decomposition(&m, &snf);
            assert_eq!(snf.rank, bareiss_rank(&m), "rank disagrees with Bareiss oracle");
        }
        // Larger sparse matrices exercise the fill-in-aware pivoting.
        for _ in 0..10 {
            let rows = rng.gen_range(20..=40);
            let cols = rng.gen_range(20..=40);
            let m = random_sparse(&mut rng, rows, cols, 0.05);
            let snf = smith_normal_form(&m);
            check_decomposition(&m, &snf);
            assert_eq!(snf.rank, bareiss_rank(&m), "rank disagrees with Bareiss oracle");
        }
    }

    #[test]
    fn cokernel_invariant_under_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rows = rng.gen_range(1..=10);
            let cols = rng.gen_range(1..=10);
            let m = random_sparse(&mut rng, rows, cols, 0.4);
            let mut row_perm: Vec<usize> = (0..rows).collect();
            let mut col_perm: Vec<usize> = (0..cols).collect();
            for i in (1..rows).rev() {
                row_perm.swap(i, rng.gen_range(0..=i));
            }
            for j in (1..cols).rev() {
                col_perm.swap(j, rng.gen_range(0..=j));
            }
            let mut p = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    p.set(row_perm[i], col_perm[j], m.get(i, j));
                }
            }
            assert_eq!(cokernel(&m), cokernel(&p));
        }
    }

    #[test]
    fn kernel_and_lattice_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=8);
            let m = random_sparse(&mut rng, rows, cols, 0.5);
            let k = kernel_basis(&m);
            assert!(m.mul(&k).is_zero(), "kernel basis not annihilated");
            assert_eq!(k.cols() + rank(&m), cols);
            let l = column_lattice_basis(&m);
            // every column of m solvable in the lattice basis
            for j in 0..cols {
                let b = m.column(j);
                assert!(solve(&l, &b).unwrap().is_some(), "column not in lattice span");
            }
        }
    }

    #[test]
    fn solve_random_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=8);
            let m = random_sparse(&mut rng, rows, cols, 0.5);
            let x: Vec<BigInt> = (0..cols).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
            let b = m.apply(&x);
            let sol = solve(&m, &b).unwrap().expect("constructed system must be solvable");
            assert_eq!(m.apply(&sol), b);
        }
    }
}
