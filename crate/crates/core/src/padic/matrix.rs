use super::ring::{PrecisionInt, Zpk};
use crate::error::{Error, Result};

/// A 2×2 matrix over `Z/p^k`, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    ring: Zpk,
    e: [[u64; 2]; 2],
}

impl Mat2 {
    pub fn new(ring: Zpk, e: [[i128; 2]; 2]) -> Self {
        let r = |x: i128| ring.from_i128(x);
        Mat2 { ring, e: [[r(e[0][0]), r(e[0][1])], [r(e[1][0]), r(e[1][1])]] }
    }

    pub fn from_residues(ring: Zpk, e: [[u64; 2]; 2]) -> Self {
        let r = |x: u64| ring.reduce(x);
        Mat2 { ring, e: [[r(e[0][0]), r(e[0][1])], [r(e[1][0]), r(e[1][1])]] }
    }

    pub fn from_precision(e: [[PrecisionInt; 2]; 2]) -> Result<Self> {
        let ring = e[0][0].ring();
        if e.iter().flatten().any(|x| x.ring() != ring) {
            return Err(Error::InvalidInput("matrix entries live in different rings".into()));
        }
        Ok(Mat2 { ring, e: [[e[0][0].residue(), e[0][1].residue()], [e[1][0].residue(), e[1][1].residue()]] })
    }

    pub fn identity(ring: Zpk) -> Self {
        Mat2::new(ring, [[1, 0], [0, 1]])
    }

    pub fn ring(&self) -> Zpk {
        self.ring
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.e[i][j]
    }

    pub fn entries(&self) -> [[u64; 2]; 2] {
        self.e
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let r = &self.ring;
        let mut out = [[0u64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = r.mul_add(r.mul(self.e[i][0], rhs.e[0][j]), self.e[i][1], rhs.e[1][j]);
            }
        }
        Mat2 { ring: self.ring, e: out }
    }

    pub fn det(&self) -> u64 {
        let r = &self.ring;
        r.sub(r.mul(self.e[0][0], self.e[1][1]), r.mul(self.e[0][1], self.e[1][0]))
    }

    /// `[[d, -b], [-c, a]]`, so that `adj(M) M = det(M) I`.
    pub fn adjugate(&self) -> Mat2 {
        let r = &self.ring;
        Mat2 { ring: self.ring, e: [[self.e[1][1], r.neg(self.e[0][1])], [r.neg(self.e[1][0]), self.e[0][0]]] }
    }

    pub fn swap_columns(&self) -> Mat2 {
        Mat2 { ring: self.ring, e: [[self.e[0][1], self.e[0][0]], [self.e[1][1], self.e[1][0]]] }
    }

    pub fn is_invertible(&self) -> bool {
        self.ring.is_unit(self.det())
    }
}

/// Exponents `(a, b)`, `a <= b`, of the elementary divisors `p^a, p^b` of a
/// 2×2 matrix over the local ring, by pivoting on a minimal-valuation entry.
pub fn smith_exponents_2x2(m: &Mat2) -> Result<(u32, u32)> {
    let r = m.ring;
    let mut e = m.e;
    let (mut pi, mut pj, mut best) = (0, 0, r.k());
    for (i, row) in e.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let v = r.valuation(x);
            if v < best {
                (pi, pj, best) = (i, j, v);
            }
        }
    }
    if best >= r.k() {
        return Err(Error::PrecisionExhausted("every entry vanishes to working precision".into()));
    }
    if pi == 1 {
        e.swap(0, 1);
    }
    if pj == 1 {
        for row in e.iter_mut() {
            row.swap(0, 1);
        }
    }
    let (a, w) = r.split(e[0][0]);
    let w_inv = r.inv(w).expect("unit part is invertible");
    let pa = r.p_pow(a);
    // Row then column elimination; the pivot divides everything.
    let f = r.mul(e[1][0] / pa, w_inv);
    e[1][1] = r.sub(e[1][1], r.mul(f, e[0][1]));
    let b = r.valuation(e[1][1]);
    if b >= r.k() {
        return Err(Error::PrecisionExhausted("determinant vanishes to working precision".into()));
    }
    Ok((a, b))
}

/// Dense matrix over `Z/p^k`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    ring: Zpk,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(ring: Zpk, rows: usize, cols: usize) -> Self {
        ModMatrix { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: Zpk, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_columns(ring: Zpk, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, ring.reduce(x));
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| self.ring.mul_add(acc, self.get(i, j), x[j])))
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] -= f * row[src]`
    fn row_axpy(&mut self, dst: usize, src: usize, f: u64) {
        for j in 0..self.cols {
            let v = self.ring.sub(self.get(dst, j), self.ring.mul(f, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, f: u64) {
        for i in 0..self.rows {
            let v = self.ring.sub(self.get(i, dst), self.ring.mul(f, self.get(i, src)));
            self.set(i, dst, v);
        }
    }

    fn scale_row(&mut self, i: usize, f: u64) {
        for j in 0..self.cols {
            let v = self.ring.mul(f, self.get(i, j));
            self.set(i, j, v);
        }
    }

    /// Smith decomposition `U A V = diag(p^e_0, p^e_1, ...)` with `U`, `V`
    /// invertible. Exponents equal to `k` stand for zero diagonal entries.
    pub fn smith(&self) -> SmithForm {
        let r = self.ring;
        let mut a = self.clone();
        let mut u = ModMatrix::identity(r, self.rows);
        let mut v = ModMatrix::identity(r, self.cols);
        let n = self.rows.min(self.cols);
        let mut exps = vec![r.k(); n];
        #[allow(clippy::needless_range_loop)]
        for t in 0..n {
            let mut best = (r.k(), t, t);
            for i in t..a.rows {
                for j in t..a.cols {
                    let val = r.valuation(a.get(i, j));
                    if val < best.0 {
                        best = (val, i, j);
                        if val == 0 {
                            break;
                        }
                    }
                }
                if best.0 == 0 {
                    break;
                }
            }
            let (e, pi, pj) = best;
            if e >= r.k() {
                break;
            }
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let (_, w) = r.split(a.get(t, t));
            let w_inv = r.inv(w).expect("unit part");
            a.scale_row(t, w_inv);
            u.scale_row(t, w_inv);
            let pe = r.p_pow(e);
            for i in t + 1..a.rows {
                let x = a.get(i, t);
                if x != 0 {
                    let f = x / pe;
                    a.row_axpy(i, t, f);
                    u.row_axpy(i, t, f);
                }
            }
            for j in t + 1..a.cols {
                let x = a.get(t, j);
                if x != 0 {
                    let f = x / pe;
                    a.col_axpy(j, t, f);
                    v.col_axpy(j, t, f);
                }
            }
            exps[t] = e;
        }
        SmithForm { ring: r, rows: self.rows, cols: self.cols, u, v, exponents: exps }
    }

    /// Some `x` with `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        self.smith().solve(b)
    }

    /// Generators of the kernel of `x ↦ A x` on `(Z/p^k)^cols`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        self.smith().kernel()
    }
}

#[derive(Clone, Debug)]
pub struct SmithForm {
    ring: Zpk,
    rows: usize,
    cols: usize,
    pub u: ModMatrix,
    pub v: ModMatrix,
    pub exponents: Vec<u32>,
}

impl SmithForm {
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let r = self.ring;
        let c = self.u.mul_vec(b);
        let mut y = vec![0u64; self.cols];
        for (i, &ci) in c.iter().enumerate() {
            let e = self.exponents.get(i).copied().unwrap_or(r.k());
            if e >= r.k() {
                if ci != 0 {
                    return None;
                }
                continue;
            }
            if r.valuation(ci) < e {
                return None;
            }
            y[i] = ci / r.p_pow(e);
        }
        Some(self.v.mul_vec(&y))
    }

    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let r = self.ring;
        let mut gens = Vec::new();
        for i in 0..self.cols {
            let e = self.exponents.get(i).copied().unwrap_or(r.k());
            let scale = if e >= r.k() { 1 } else { r.p_pow(r.k() - e) };
            if scale == 0 {
                continue;
            }
            let mut y = vec![0u64; self.cols];
            y[i] = scale;
            gens.push(self.v.mul_vec(&y));
        }
        gens
    }

    pub fn is_injective(&self) -> bool {
        self.cols <= self.rows && self.exponents.iter().all(|&e| e == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> Zpk {
        Zpk::new(3, 6).unwrap()
    }

    #[test]
    fn smith_examples() {
        let r = ring();
        assert_eq!(smith_exponents_2x2(&Mat2::identity(r)).unwrap(), (0, 0));
        assert_eq!(smith_exponents_2x2(&Mat2::new(r, [[1, 0], [0, 9]])).unwrap(), (0, 2));
        assert_eq!(smith_exponents_2x2(&Mat2::new(r, [[3, 1], [0, 3]])).unwrap(), (0, 2));
        assert!(matches!(
            smith_exponents_2x2(&Mat2::new(r, [[0, 0], [0, 0]])),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn linear_solver_roundtrip() {
        let r = ring();
        let a = ModMatrix::from_columns(r, 3, &[vec![3, 0, 1], vec![0, 9, 2]]);
        let x = vec![5, 7];
        let b = a.mul_vec(&x);
        let sol = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&sol), b);
        assert!(a.solve(&[1, 0, 0]).is_none());
    }

    #[test]
    fn kernel_of_multiplication_by_p() {
        let r = ring();
        let a = ModMatrix::from_columns(r, 1, &[vec![3]]);
        let ker = a.kernel();
        assert_eq!(ker, vec![vec![243]]);
        assert!(!a.smith().is_injective());
    }

    proptest! {
        // Elementary divisors are invariant under multiplication by matrices
        // invertible over Z/p^k; cross-checked against min-valuation/det.
        #[test]
        fn smith_invariant_under_unimodular(
            m in prop::array::uniform4(-200i128..200),
            g in prop::array::uniform4(-50i128..50),
            h in prop::array::uniform4(-50i128..50),
        ) {
            let r = ring();
            let m = Mat2::new(r, [[m[0], m[1]], [m[2], m[3]]]);
            let g = Mat2::new(r, [[g[0], g[1]], [g[2], g[3]]]);
            let h = Mat2::new(r, [[h[0], h[1]], [h[2], h[3]]]);
            prop_assume!(g.is_invertible() && h.is_invertible());
            prop_assume!(r.valuation(m.det()) < r.k());
            let base = smith_exponents_2x2(&m).unwrap();
            let min_val = m.entries().iter().flatten().map(|&x| r.valuation(x)).min().unwrap();
            prop_assert_eq!(base, (min_val, r.valuation(m.det()) - min_val));
            prop_assert_eq!(smith_exponents_2x2(&g.mul(&m).mul(&h)).unwrap(), base);
        }
    }
}
