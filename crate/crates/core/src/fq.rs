//! Vector spaces over prime fields F_q, linear maps, echelon forms, and
//! subspace enumeration. Vectors are encoded as mixed-radix indices base q
//! with coordinate 0 as the least significant digit.

use crate::report::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FqSpace {
    pub q: u64,
    pub dim: usize,
}

impl FqSpace {
    pub fn new(q: u64, dim: usize) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::input(format!("{q} is not prime")));
        }
        Ok(FqSpace { q, dim })
    }

    pub fn points(&self) -> u64 {
        (self.q as u128).pow(self.dim as u32) as u64
    }

    pub fn decode(&self, mut idx: u64) -> Vec<u64> {
        let mut v = vec![0u64; self.dim];
        for c in v.iter_mut() {
            *c = idx % self.q;
            idx /= self.q;
        }
        v
    }

    pub fn encode(&self, v: &[u64]) -> u64 {
        debug_assert_eq!(v.len(), self.dim);
        let mut idx = 0u64;
        for &c in v.iter().rev() {
            idx = idx * self.q + c % self.q;
        }
        idx
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (va, vb) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = va.iter().zip(&vb).map(|(x, y)| (x + y) % self.q).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u64) -> u64 {
        let v: Vec<u64> = self.decode(a).iter().map(|&x| (self.q - x) % self.q).collect();
        self.encode(&v)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn scale(&self, c: u64, a: u64) -> u64 {
        let v: Vec<u64> = self.decode(a).iter().map(|&x| (c % self.q) * x % self.q).collect();
        self.encode(&v)
    }

    pub fn label(&self, a: u64) -> String {
        if self.dim == 1 {
            return a.to_string();
        }
        format!(
            "({})",
            self.decode(a).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        )
    }

    /// The additive group, elements in encoding order (identity 0 first).
    pub fn additive_group(&self) -> crate::group::FiniteGroup {
        let n = self.points() as usize;
        let mut rows = Vec::with_capacity(n);
        for a in 0..n as u64 {
            rows.push((0..n as u64).map(|b| self.add(a, b) as usize).collect());
        }
        crate::group::FiniteGroup::from_table(rows).expect("additive group table")
    }
}

fn inv_mod(a: u64, q: u64) -> u64 {
    // q is prime and a ≠ 0
    let mut r = 1u64;
    let mut base = a % q;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    r
}

/// A linear map given by its matrix (rows indexed by codomain coordinates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub domain: FqSpace,
    pub codomain: FqSpace,
    pub matrix: Vec<Vec<u64>>,
}

impl LinearMap {
    pub fn new(domain: FqSpace, codomain: FqSpace, matrix: Vec<Vec<u64>>) -> Result<Self> {
        if domain.q != codomain.q {
            return Err(Error::input("linear map endpoints must share the field"));
        }
        if matrix.len() != codomain.dim || matrix.iter().any(|r| r.len() != domain.dim) {
            return Err(Error::input(format!(
                "matrix shape must be {}×{}",
                codomain.dim, domain.dim
            )));
        }
        Ok(LinearMap {
            domain,
            codomain,
            matrix: matrix
                .into_iter()
                .map(|r| r.into_iter().map(|x| x % domain.q).collect())
                .collect(),
        })
    }

    pub fn identity(space: FqSpace) -> Self {
        let matrix = (0..space.dim)
            .map(|i| (0..space.dim).map(|j| u64::from(i == j)).collect())
            .collect();
        LinearMap { domain: space, codomain: space, matrix }
    }

    pub fn zero(domain: FqSpace, codomain: FqSpace) -> Self {
        let matrix = vec![vec![0; domain.dim]; codomain.dim];
        LinearMap { domain, codomain, matrix }
    }

    pub fn scalar(space: FqSpace, c: u64) -> Self {
        let matrix = (0..space.dim)
            .map(|i| (0..space.dim).map(|j| if i == j { c % space.q } else { 0 }).collect())
            .collect();
        LinearMap { domain: space, codomain: space, matrix }
    }

    pub fn apply(&self, x: u64) -> u64 {
        let v = self.domain.decode(x);
        let q = self.domain.q;
        let out: Vec<u64> = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * b % q).sum::<u64>() % q)
            .collect();
        self.codomain.encode(&out)
    }

    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.codomain != self.domain {
            return Err(Error::input("composition shape mismatch"));
        }
        let q = self.domain.q;
        let rows = self.codomain.dim;
        let mid = self.domain.dim;
        let cols = inner.domain.dim;
        let mut matrix = vec![vec![0u64; cols]; rows];
        for i in 0..rows {
            for j in 0..cols {
                let mut s = 0u64;
                for k in 0..mid {
                    s = (s + self.matrix[i][k] * inner.matrix[k][j]) % q;
                }
                matrix[i][j] = s;
            }
        }
        LinearMap::new(inner.domain, self.codomain, matrix)
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        if self.domain.dim != self.codomain.dim {
            return None;
        }
        let q = self.domain.q;
        let n = self.domain.dim;
        let mut aug: Vec<Vec<u64>> = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..n).find(|&r| aug[r][col] != 0) else { return None };
            aug.swap(row, p);
            let inv = inv_mod(aug[row][col], q);
            for x in aug[row].iter_mut() {
                *x = *x * inv % q;
            }
            for r in 0..n {
                if r != row && aug[r][col] != 0 {
                    let f = aug[r][col];
                    for c in 0..2 * n {
                        aug[r][c] = (aug[r][c] + (q - f) * aug[row][c]) % q;
                    }
                }
            }
            row += 1;
        }
        let matrix = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(LinearMap { domain: self.codomain, codomain: self.domain, matrix })
    }

    /// Basis (RREF rows) of the kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let q = self.domain.q;
        let n = self.domain.dim;
        let (rref, pivots) = rref(&self.matrix, q);
        let pivot_cols: Vec<usize> = pivots.clone();
        let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free_cols {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                // pivot entry is 1 in RREF
                v[pc] = (q - rref[r][fc] % q) % q;
            }
            basis.push(v);
        }
        rref_of_rows(&basis, q)
    }

    pub fn image_basis(&self) -> Vec<Vec<u64>> {
        let cols: Vec<Vec<u64>> = (0..self.domain.dim)
            .map(|j| (0..self.codomain.dim).map(|i| self.matrix[i][j]).collect())
            .collect();
        rref_of_rows(&cols, self.codomain.q)
    }
}

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref(rows: &[Vec<u64>], q: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % q).collect()).collect();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, p);
        let inv = inv_mod(m[row][col], q);
        for x in m[row].iter_mut() {
            *x = *x * inv % q;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..ncols {
                    m[r][c] = (m[r][c] + (q - f) * m[row][c]) % q;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

/// RREF basis of a row span (zero rows dropped).
pub fn rref_of_rows(rows: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
    rref(rows, q).0
}

/// A linear subspace held as an RREF basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub space: FqSpace,
    pub basis: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_vectors(space: FqSpace, vectors: &[Vec<u64>]) -> Self {
        let (basis, pivots) = rref(vectors, space.q);
        Subspace { space, basis, pivots }
    }

    pub fn from_points(space: FqSpace, points: &[u64]) -> Self {
        let vecs: Vec<Vec<u64>> = points.iter().map(|&p| space.decode(p)).collect();
        Self::from_vectors(space, &vecs)
    }

    pub fn zero(space: FqSpace) -> Self {
        Subspace { space, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(space: FqSpace) -> Self {
        Subspace {
            space,
            basis: LinearMap::identity(space).matrix,
            pivots: (0..space.dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.space.dim
    }

    pub fn point_count(&self) -> u64 {
        (self.space.q as u128).pow(self.dim() as u32) as u64
    }

    /// Residual of v after eliminating pivot coordinates; zero iff v ∈ span.
    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let q = self.space.q;
        let mut w: Vec<u64> = v.iter().map(|&x| x % q).collect();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let f = w[p];
            if f != 0 {
                for c in 0..w.len() {
                    w[c] = (w[c] + (q - f) * row[c]) % q;
                }
            }
        }
        w
    }

    pub fn contains(&self, point: u64) -> bool {
        self.reduce(&self.space.decode(point)).iter().all(|&x| x == 0)
    }

    /// Coordinates of a member point in the RREF basis.
    pub fn coords_of(&self, point: u64) -> Option<Vec<u64>> {
        let v = self.space.decode(point);
        if !self.reduce(&v).iter().all(|&x| x == 0) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p]).collect())
    }

    /// The member point with the given basis coordinates.
    pub fn point_from_coords(&self, coords: &[u64]) -> u64 {
        let q = self.space.q;
        let mut v = vec![0u64; self.space.dim];
        for (row, &c) in self.basis.iter().zip(coords) {
            for i in 0..v.len() {
                v[i] = (v[i] + c % q * row[i]) % q;
            }
        }
        self.space.encode(&v)
    }

    /// All points of the subspace, in coordinate-enumeration order.
    pub fn points(&self) -> Vec<u64> {
        let k = self.dim();
        let q = self.space.q;
        let total = (q as u128).pow(k as u32) as u64;
        (0..total)
            .map(|idx| {
                let coords: Vec<u64> = {
                    let mut i = idx;
                    (0..k)
                        .map(|_| {
                            let c = i % q;
                            i /= q;
                            c
                        })
                        .collect()
                };
                self.point_from_coords(&coords)
            })
            .collect()
    }
}

/// Number of k-dimensional subspaces of F_q^n (Gaussian binomial).
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (q as u128).pow((n - i) as u32) - 1;
        den *= (q as u128).pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Enumerate every linear subspace as an RREF basis, deduplicated by
/// construction. Ordered by dimension, then pivot set, then free entries.
pub fn subspace_enumerate(space: &FqSpace, bound: u64) -> Result<Vec<Subspace>> {
    if space.points() > bound {
        return Err(Error::bound(format!(
            "space has {} points, enumeration bound is {bound}; shrink the instance",
            space.points()
        )));
    }
    let n = space.dim;
    let q = space.q;
    let mut out = vec![Subspace::zero(*space)];
    for k in 1..=n {
        let mut pivot_sets = Vec::new();
        combinations(n, k, &mut Vec::new(), &mut pivot_sets);
        for pivots in pivot_sets {
            // free positions: entries (row r, col c) with c not a pivot and
            // c > pivots[r]; pivot columns hold the identity pattern
            let mut free_pos = Vec::new();
            for (r, &p) in pivots.iter().enumerate() {
                for c in 0..n {
                    if c > p && !pivots.contains(&c) {
                        free_pos.push((r, c));
                    }
                }
            }
            let total = (q as u128).pow(free_pos.len() as u32);
            for fill in 0..total {
                let mut basis = vec![vec![0u64; n]; k];
                for (r, &p) in pivots.iter().enumerate() {
                    basis[r][p] = 1;
                }
                let mut f = fill;
                for &(r, c) in &free_pos {
                    basis[r][c] = (f % q as u128) as u64;
                    f /= q as u128;
                }
                out.push(Subspace { space: *space, basis, pivots: pivots.clone() });
            }
        }
    }
    let expected: u128 = (0..=n).map(|k| gaussian_binomial(n, k, q)).sum();
    debug_assert_eq!(out.len() as u128, expected);
    Ok(out)
}

fn combinations(n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if acc.len() == k {
        out.push(acc.clone());
        return;
    }
    let start = acc.last().map(|&x| x + 1).unwrap_or(0);
    for i in start..n {
        acc.push(i);
        combinations(n, k, acc, out);
        acc.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_roundtrip() {
        let v = FqSpace::new(5, 2).unwrap();
        for a in 0..25 {
            assert_eq!(v.encode(&v.decode(a)), a);
            assert_eq!(v.add(a, v.neg(a)), 0);
        }
        assert_eq!(v.add(v.encode(&[4, 3]), v.encode(&[2, 4])), v.encode(&[1, 2]));
        assert_eq!(v.scale(3, v.encode(&[2, 4])), v.encode(&[1, 2]));
    }

    #[test]
    fn non_prime_rejected() {
        assert!(FqSpace::new(4, 1).is_err());
        assert!(FqSpace::new(1, 1).is_err());
    }

    #[test]
    fn linear_map_apply_compose_inverse() {
        let v = FqSpace::new(3, 2).unwrap();
        let m = LinearMap::new(v, v, vec![vec![1, 1], vec![0, 1]]).unwrap();
        let x = v.encode(&[1, 2]);
        assert_eq!(m.apply(x), v.encode(&[0, 2]));
        let mi = m.inverse().unwrap();
        for p in 0..9 {
            assert_eq!(mi.apply(m.apply(p)), p);
        }
        let mm = m.compose(&m).unwrap();
        for p in 0..9 {
            assert_eq!(mm.apply(p), m.apply(m.apply(p)));
        }
        assert!(LinearMap::zero(v, v).inverse().is_none());
    }

    #[test]
    fn kernel_and_image() {
        let v2 = FqSpace::new(2, 2).unwrap();
        let v1 = FqSpace::new(2, 1).unwrap();
        let proj = LinearMap::new(v2, v1, vec![vec![1, 0]]).unwrap();
        let ker = proj.kernel_basis();
        assert_eq!(ker, vec![vec![0, 1]]);
        assert_eq!(proj.image_basis(), vec![vec![1]]);
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        // F_2^2 → 5 subspaces; F_3^1 → 2; F_2^3 → 16
        let f22 = FqSpace::new(2, 2).unwrap();
        assert_eq!(subspace_enumerate(&f22, 4096).unwrap().len(), 5);
        let f31 = FqSpace::new(3, 1).unwrap();
        assert_eq!(subspace_enumerate(&f31, 4096).unwrap().len(), 2);
        let f23 = FqSpace::new(2, 3).unwrap();
        assert_eq!(subspace_enumerate(&f23, 4096).unwrap().len(), 16);
        assert_eq!(gaussian_binomial(3, 1, 2), 7);
        assert_eq!(gaussian_binomial(3, 2, 2), 7);
    }

    #[test]
    fn enumerated_subspaces_are_closed() {
        let space = FqSpace::new(3, 2).unwrap();
        for sub in subspace_enumerate(&space, 4096).unwrap() {
            let pts = sub.points();
            assert_eq!(pts.len() as u64, sub.point_count());
            for &a in &pts {
                assert!(sub.contains(a));
                for &b in &pts {
                    assert!(sub.contains(space.add(a, b)));
                }
                for c in 0..3 {
                    assert!(sub.contains(space.scale(c, a)));
                }
            }
        }
    }

    #[test]
    fn bound_exceeded_is_refused() {
        let space = FqSpace::new(2, 13).unwrap();
        assert!(matches!(subspace_enumerate(&space, 4096), Err(Error::Bound(_))));
    }

    #[test]
    fn coords_roundtrip() {
        let space = FqSpace::new(3, 3).unwrap();
        let sub = Subspace::from_vectors(space, &[vec![1, 0, 2], vec![0, 1, 1]]);
        for &p in &sub.points() {
            let c = sub.coords_of(p).unwrap();
            assert_eq!(sub.point_from_coords(&c), p);
        }
        assert!(sub.coords_of(space.encode(&[0, 0, 1])).is_none());
    }
}
