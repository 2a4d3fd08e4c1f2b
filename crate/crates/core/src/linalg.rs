//! Exact integer linear algebra: dense square matrices, fraction-free rank and
//! characteristic polynomials.
//!
//! Characteristic polynomials are computed modulo a set of 62-bit primes by
//! Hessenberg reduction and lifted with the Chinese remainder theorem. The
//! number of primes is chosen from a Hadamard-type coefficient bound, so the
//! result is exact, not probabilistic.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense square matrix over `i64`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn scalar(n: usize, c: i64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are not all of length `rows.len()`.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), n, "IntMatrix::from_rows needs a square matrix");
            data.extend_from_slice(r);
        }
        IntMatrix { n, data }
    }

    pub fn from_flat(n: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), n * n);
        IntMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix { n: self.n, data }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix { n: self.n, data }
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        IntMatrix { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    /// Returns `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar(&self) -> Option<i64> {
        let c = if self.n == 0 { 0 } else { self[(0, 0)] };
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { c } else { 0 };
                if self[(i, j)] != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// First entry, in row-major order, where `self` and `other` differ.
    pub fn first_difference(&self, other: &IntMatrix) -> Option<(usize, usize)> {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.n, k % self.n))
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.n);
        self.rows().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Principal submatrix on the given (ordered) index set.
    pub fn principal(&self, keep: &[usize]) -> IntMatrix {
        let k = keep.len();
        let mut out = Self::zeros(k);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n + other.n;
        let mut out = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                out[(self.n + i, self.n + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n * other.n;
        let mut out = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self[(i, j)];
                if a == 0 {
                    continue;
                }
                for k in 0..other.n {
                    for l in 0..other.n {
                        out[(i * other.n + k, j * other.n + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn charpoly(&self) -> IntPoly {
        charpoly(self)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix({}x{})", self.n, self.n)?;
        for r in self.rows() {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
///
/// Runs in `i128` and restarts in `BigInt` if an intermediate minor overflows.
pub fn rank(m: &IntMatrix) -> usize {
    let rows: Vec<Vec<i64>> = m.rows().map(|r| r.to_vec()).collect();
    rank_of_rows(&rows)
}

/// Rank of a (possibly non-square) list of equal-length integer rows.
pub fn rank_of_rows(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<i128>> =
        rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match bareiss_rank_i128(&mut a) {
        Some(r) => r,
        None => {
            let mut b: Vec<Vec<BigInt>> =
                rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            bareiss_rank_big(&mut b)
        }
    }
}

fn bareiss_rank_i128(a: &mut [Vec<i128>]) -> Option<usize> {
    let nrows = a.len();
    let ncols = a[0].len();
    let mut prev: i128 = 1;
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, p);
        let pivot = a[row][col];
        for i in row + 1..nrows {
            let factor = a[i][col];
            for j in col + 1..ncols {
                let lhs = a[i][j].checked_mul(pivot)?;
                let rhs = factor.checked_mul(a[row][j])?;
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
            a[i][col] = 0;
        }
        prev = pivot;
        row += 1;
    }
    Some(row)
}

fn bareiss_rank_big(a: &mut [Vec<BigInt>]) -> usize {
    let nrows = a.len();
    let ncols = a[0].len();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pivot = a[row][col].clone();
        for i in row + 1..nrows {
            let factor = a[i][col].clone();
            for j in col + 1..ncols {
                let v = (&a[i][j] * &pivot - &factor * &a[row][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = pivot;
        row += 1;
    }
    row
}

/// Polynomial with integer coefficients, stored lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x^2 - c`.
    pub fn x2_minus(c: i64) -> Self {
        Self::from_i64(&[-c, 0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: usize) -> IntPoly {
        let mut out = IntPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(q(x))` by Horner's scheme.
    pub fn compose(&self, q: &IntPoly) -> IntPoly {
        let mut out = IntPoly::default();
        for c in self.coeffs.iter().rev() {
            out = out.mul(q).add(&IntPoly::new(vec![c.clone()]));
        }
        out
    }

    /// If only even powers occur, returns `h` with `p(x) = h(x^2)`.
    pub fn even_part_in_x2(&self) -> Option<IntPoly> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// Multiplicity of 0 as a root.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides out `x^k`. Panics if `x^k` does not divide the polynomial.
    pub fn shift_down(&self, k: usize) -> IntPoly {
        assert!(self.zero_root_multiplicity() >= k || self.is_zero());
        IntPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match k {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{abs}x")?,
                _ if unit => write!(f, "x^{k}")?,
                _ => write!(f, "{abs}x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Characteristic polynomial `det(xI - m)`, exact.
pub fn charpoly(m: &IntMatrix) -> IntPoly {
    let n = m.n();
    if n == 0 {
        return IntPoly::one();
    }
    // |c_k| <= C(n,k) * R^k <= (1 + R)^n with R the largest row 2-norm.
    let max_row_norm = m
        .rows()
        .map(|r| r.iter().map(|&a| (a as f64) * (a as f64)).sum::<f64>().sqrt())
        .fold(1.0f64, f64::max);
    let bound_bits = (n as f64) * (1.0 + max_row_norm).log2() + 8.0;

    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    let mut have_bits = 0.0f64;
    let mut primes = PrimeStream::new();
    while have_bits < bound_bits + 1.0 {
        let p = primes.next_prime();
        let residues = charpoly_mod(m, p);
        let big_p = BigInt::from(p);
        if modulus.is_one() {
            acc = residues.iter().map(|&r| BigInt::from(r)).collect();
        } else {
            let m_mod_p = (&modulus % &big_p).to_u64().expect("fits");
            let inv = inv_mod(m_mod_p, p);
            for (a, &r) in acc.iter_mut().zip(&residues) {
                let a_mod_p = (&*a % &big_p).to_u64().expect("fits");
                let diff = sub_mod(r, a_mod_p, p);
                let t = mul_mod(diff, inv, p);
                *a += &modulus * BigInt::from(t);
            }
        }
        modulus *= &big_p;
        have_bits += (p as f64).log2();
    }
    let half: BigInt = &modulus >> 1;
    for a in acc.iter_mut() {
        if *a > half {
            *a -= &modulus;
        }
    }
    IntPoly::new(acc)
}

/// Coefficients of `det(xI - m) mod p`, lowest degree first.
fn charpoly_mod(m: &IntMatrix, p: u64) -> Vec<u64> {
    let n = m.n();
    let mut h: Vec<Vec<u64>> = m
        .rows()
        .map(|r| r.iter().map(|&a| a.rem_euclid(p as i64) as u64).collect())
        .collect();

    // Similarity reduction to upper Hessenberg form.
    for col in 0..n.saturating_sub(2) {
        let piv_row = col + 1;
        let Some(i) = (piv_row..n).find(|&i| h[i][col] != 0) else {
            continue;
        };
        if i != piv_row {
            h.swap(i, piv_row);
            for row in h.iter_mut() {
                row.swap(i, piv_row);
            }
        }
        let inv = inv_mod(h[piv_row][col], p);
        for i in piv_row + 1..n {
            let u = mul_mod(h[i][col], inv, p);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let t = mul_mod(u, h[piv_row][j], p);
                h[i][j] = sub_mod(h[i][j], t, p);
            }
            for row in h.iter_mut() {
                let t = mul_mod(u, row[i], p);
                row[piv_row] = add_mod(row[piv_row], t, p);
            }
        }
    }

    // polys[k] = charpoly of the leading k x k block.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let prev = &polys[k - 1];
        let mut next = vec![0u64; k + 1];
        let diag = h[k - 1][k - 1];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = add_mod(next[d + 1], c, p);
            next[d] = sub_mod(next[d], mul_mod(diag, c, p), p);
        }
        let mut t = 1u64;
        for i in 1..k {
            t = mul_mod(t, h[k - i][k - i - 1], p);
            let coef = mul_mod(t, h[k - i - 1][k - 1], p);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[k - i - 1].iter().enumerate() {
                next[d] = sub_mod(next[d], mul_mod(coef, c, p), p);
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n >= 1")
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let g = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin; these bases are exact for all 64-bit inputs.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Descending primes below 2^62.
struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    fn new() -> Self {
        PrimeStream { next: (1u64 << 62) - 1 }
    }

    fn next_prime(&mut self) -> u64 {
        loop {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(IntMatrix::zeros(3).rank(), 0);
        assert_eq!(IntMatrix::identity(4).rank(), 4);
        let j = IntMatrix::from_rows(&[[1, 1, 1], [1, 1, 1], [1, 1, 1]]);
        assert_eq!(j.rank(), 1);
        let m = IntMatrix::from_rows(&[[2, 1, 1], [1, 2, -1], [1, -1, 2]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rank_falls_back_to_bigint() {
        // Entries large enough that i128 Bareiss overflows.
        let big = 3_000_000_000_000i64;
        let m = IntMatrix::from_rows(&[
            [big, big - 1, 7, 1],
            [big - 3, big, 2, 5],
            [big, big - 1, 7, 1],
            [11, big - 7, big, 3],
        ]);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn charpoly_k2_and_4cycle() {
        let k2 = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(k2.charpoly(), IntPoly::from_i64(&[-1, 0, 1]));
        // signed 4-cycle with one negative edge: (x^2 - 2)^2
        let c4 = IntMatrix::from_rows(&[[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, -1], [1, 0, -1, 0]]);
        assert_eq!(c4.charpoly(), IntPoly::x2_minus(2).pow(2));
    }

    #[test]
    fn charpoly_needs_several_primes() {
        // 40 x 40 scalar matrix 7I: (x - 7)^40 has coefficients far beyond 2^62.
        let m = IntMatrix::scalar(40, 7);
        assert_eq!(m.charpoly(), IntPoly::from_i64(&[-7, 1]).pow(40));
    }

    #[test]
    fn primes_are_prime() {
        let mut s = PrimeStream::new();
        let p = s.next_prime();
        assert!(p < 1 << 62);
        assert!(is_prime_u64(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn poly_display() {
        assert_eq!(IntPoly::x2_minus(2).pow(2).to_string(), "x^4 - 4x^2 + 4");
        assert_eq!(IntPoly::from_i64(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn compose_and_reflect() {
        let p = IntPoly::from_i64(&[1, 2, 3]);
        assert_eq!(p.reflect(), IntPoly::from_i64(&[1, -2, 3]));
        // p(x^2 - 1) = 1 + 2(x^2-1) + 3(x^2-1)^2 = 2 - 4x^2 + 3x^4
        assert_eq!(p.compose(&IntPoly::x2_minus(1)), IntPoly::from_i64(&[2, 0, -4, 0, 3]));
    }
}
