//! Integer linear algebra: primitive vectors, Hermite normal forms,
//! annihilator lattices and unimodular completions.
//!
//! Matrices are small (n ≤ 6 in every workflow), so entries are `i64` and
//! determinants are taken exactly through `BigInt` fraction-free elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Greatest common divisor of all entries (0 for the zero vector).
pub fn gcd_slice(v: &[i64]) -> u64 {
    v.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()))
}

/// Extended Euclid: returns `(g, s, t)` with `g = s*a + t*b` and `g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A primitive nonzero integer vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DirectionVector(SmallVec<[i64; 4]>);

impl DirectionVector {
    pub fn new(entries: &[i64]) -> Result<Self> {
        match gcd_slice(entries) {
            0 => Err(Error::ZeroVector),
            1 => Ok(DirectionVector(SmallVec::from_slice(entries))),
            g => Err(Error::Invalid(format!(
                "direction {entries:?} is not primitive (gcd {g})"
            ))),
        }
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Self {
        DirectionVector(self.0.iter().map(|x| -x).collect())
    }
}

impl TryFrom<Vec<i64>> for DirectionVector {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        DirectionVector::new(&v)
    }
}

impl From<DirectionVector> for Vec<i64> {
    fn from(d: DirectionVector) -> Vec<i64> {
        d.0.to_vec()
    }
}

impl fmt::Display for DirectionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Divides `v` by the gcd of its entries; returns the primitive vector and the gcd.
pub fn make_primitive(v: &[i64]) -> Result<(DirectionVector, u64)> {
    let g = gcd_slice(v);
    if g == 0 {
        return Err(Error::ZeroVector);
    }
    let gi = g as i64;
    let p: SmallVec<[i64; 4]> = v.iter().map(|x| x / gi).collect();
    Ok((DirectionVector(p), g))
}

/// Exact determinant by Bareiss elimination.
pub fn det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Rank over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let q: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    rank_rational(&q)
}

pub fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in c..ncols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Solves the square system `a x = b` over the rationals; `None` if singular.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for j in c..=n {
            m[c][j] = &m[c][j] / &piv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let v = &f * &m[c][j];
                    m[i][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Result of a column-style Hermite reduction `a · u = h`.
#[derive(Clone, Debug)]
pub struct ColumnHermite {
    /// Echelon form: row `i`'s pivot (if any) sits in column `pivots[i]`.
    pub h: Vec<Vec<i64>>,
    /// Unimodular column transform, n×n.
    pub u: Vec<Vec<i64>>,
    pub rank: usize,
}

/// Column-style Hermite normal form with positive pivots; entries left of a
/// pivot are reduced into `[0, pivot)`.
pub fn column_hermite(a: &[Vec<i64>], ncols: usize) -> ColumnHermite {
    let mut h: Vec<Vec<i64>> = a.to_vec();
    let mut u: Vec<Vec<i64>> = identity_rows(ncols);
    let mut col = 0;

    let col_op = |m: &mut Vec<Vec<i64>>, c1: usize, c2: usize, s: i64, t: i64, p: i64, q: i64| {
        // c1 <- s*c1 + t*c2 ; c2 <- -q*c1 + p*c2
        for row in m.iter_mut() {
            let (x, y) = (row[c1], row[c2]);
            row[c1] = s * x + t * y;
            row[c2] = -q * x + p * y;
        }
    };

    for i in 0..h.len() {
        if col == ncols {
            break;
        }
        for j in col + 1..ncols {
            if h[i][j] != 0 {
                let (g, s, t) = ext_gcd(h[i][col], h[i][j]);
                let (p, q) = (h[i][col] / g, h[i][j] / g);
                col_op(&mut h, col, j, s, t, p, q);
                col_op(&mut u, col, j, s, t, p, q);
            }
        }
        let piv = h[i][col];
        if piv == 0 {
            continue;
        }
        if piv < 0 {
            for row in h.iter_mut().chain(u.iter_mut()) {
                row[col] = -row[col];
            }
        }
        let piv = h[i][col];
        for c in 0..col {
            let f = h[i][c].div_euclid(piv);
            if f != 0 {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row[c] -= f * row[col];
                }
            }
        }
        col += 1;
    }
    ColumnHermite { h, u, rank: col }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; returns a
/// canonical basis (one row per rank).
pub fn row_hermite_basis(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let t = transpose(rows, n);
    let ch = column_hermite(&t, rows.len());
    (0..ch.rank)
        .map(|c| (0..n).map(|r| ch.h[r][c]).collect())
        .collect()
}

pub fn transpose(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    (0..ncols)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect()
}

fn identity_rows(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Integral basis of `{u ∈ ℤ^n : ⟨u, g⟩ = 0 for every generator g}`.
///
/// The basis is saturated and returned in row Hermite form, so it is
/// deterministic for a given lattice.
pub fn annihilator_basis(generators: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>> {
    if n == 0 {
        return Err(Error::Dimension("ambient dimension 0".into()));
    }
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(Error::Dimension(format!(
            "generator {g:?} does not live in dimension {n}"
        )));
    }
    let ch = column_hermite(generators, n);
    let kernel: Vec<Vec<i64>> = (ch.rank..n)
        .map(|c| (0..n).map(|r| ch.u[r][c]).collect())
        .collect();
    Ok(row_hermite_basis(&kernel, n))
}

/// An n×n integer matrix with determinant ±1.
///
/// Acting on column vectors, `apply(v) = M·v`. On Laurent monomials the
/// substitution convention is `x^u ↦ x^(Mᵀu)`, see
/// [`crate::laurent::LaurentPoly::monomial_substitute`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct UnimodularMap {
    rows: Vec<Vec<i64>>,
    det: i8,
}

impl UnimodularMap {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("unimodular map must be square".into()));
        }
        let d = det(&rows);
        let det = match d.to_i8() {
            Some(1) => 1,
            Some(-1) => -1,
            _ => return Err(Error::NotUnimodular(d.to_string())),
        };
        Ok(UnimodularMap { rows, det })
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMap {
            rows: identity_rows(n),
            det: 1,
        }
    }

    /// Shear with a single off-diagonal entry `entries[row][col] = k`.
    pub fn elementary(n: usize, row: usize, col: usize, k: i64) -> Self {
        assert!(row != col && row < n && col < n);
        let mut rows = identity_rows(n);
        rows[row][col] = k;
        UnimodularMap { rows, det: 1 }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn det(&self) -> i64 {
        i64::from(self.det)
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    pub fn apply_transpose(&self, v: &[i64]) -> Vec<i64> {
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).map(|i| self.rows[i][j] * v[i]).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        UnimodularMap {
            rows: transpose(&self.rows, self.dim()),
            det: self.det,
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim();
        assert_eq!(n, other.dim(), "composing maps of different dimension");
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.rows[i][k] * other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        UnimodularMap {
            rows,
            det: self.det * other.det,
        }
    }

    /// Exact integral inverse via the adjugate.
    pub fn inverse(&self) -> Self {
        let n = self.dim();
        if n == 1 {
            return self.clone();
        }
        let d = i64::from(self.det);
        let mut inv = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<i64>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| self.rows[r][c])
                            .collect()
                    })
                    .collect();
                let cof = det(&minor).to_i64().expect("cofactor overflow");
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                // adj[j][i] = cofactor(i, j)
                inv[j][i] = sign * cof * d;
            }
        }
        UnimodularMap {
            rows: inv,
            det: self.det,
        }
    }

    /// Inverse transpose, the induced action on the dual lattice.
    pub fn inverse_transpose(&self) -> Self {
        self.inverse().transpose()
    }
}

impl TryFrom<Vec<Vec<i64>>> for UnimodularMap {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        UnimodularMap::new(rows)
    }
}

impl From<UnimodularMap> for Vec<Vec<i64>> {
    fn from(m: UnimodularMap) -> Self {
        m.rows
    }
}

/// Extends `rows` (k vectors in ℤ^n) to a unimodular matrix whose first k rows
/// are exactly the inputs.
///
/// Fails with [`Error::NotUnimodularlyCompletable`] when the rows are not part
/// of a lattice basis, i.e. when the gcd of their maximal minors exceeds 1.
pub fn complete_to_unimodular(rows: &[Vec<i64>], n: usize) -> Result<UnimodularMap> {
    let k = rows.len();
    if k > n {
        return Err(Error::NotUnimodularlyCompletable);
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("rows must have length {n}")));
    }
    let ch = column_hermite(rows, n);
    if ch.rank < k || (0..k).any(|i| ch.h[i][i] != 1) {
        return Err(Error::NotUnimodularlyCompletable);
    }
    let u = UnimodularMap::new(ch.u).map_err(|e| Error::Internal(e.to_string()))?;
    let uinv = u.inverse();
    let mut out = rows.to_vec();
    out.extend(uinv.rows[k..].iter().cloned());
    UnimodularMap::new(out).map_err(|e| Error::Internal(e.to_string()))
}

/// `true` when `q` lies in the ℤ-span of `basis`.
pub fn in_lattice_span(basis: &[Vec<i64>], q: &[i64]) -> bool {
    let n = q.len();
    if basis.is_empty() {
        return q.iter().all(|&x| x == 0);
    }
    let hb = row_hermite_basis(basis, n);
    let mut ext = hb.clone();
    ext.push(q.to_vec());
    let he = row_hermite_basis(&ext, n);
    he == hb
}

/// Vertices of the convex hull of planar lattice points, counterclockwise
/// starting from the lexicographically smallest point. Collinear boundary
/// points are dropped; a segment yields its two endpoints.
pub fn convex_hull_2d(points: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: [i64; 2], a: [i64; 2], b: [i64; 2]| -> i128 {
        (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128
            - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
    };
    let mut hull: Vec<[i64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[i64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.truncate(1);
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_examples() {
        let (p, s) = make_primitive(&[2, -4]).unwrap();
        assert_eq!((p.entries(), s), (&[1, -2][..], 2));
        let (p, s) = make_primitive(&[1, 1]).unwrap();
        assert_eq!((p.entries(), s), (&[1, 1][..], 1));
        let (p, s) = make_primitive(&[0, 0, -3]).unwrap();
        assert_eq!((p.entries(), s), (&[0, 0, -1][..], 3));
        assert_eq!(make_primitive(&[0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn annihilator_of_prism_face_plane() {
        let b = annihilator_basis(&[vec![-1, 0, 1], vec![0, 1, 0]], 3).unwrap();
        assert_eq!(b, vec![vec![1, 0, 1]]);
    }

    #[test]
    fn annihilator_of_full_rank_is_empty() {
        let e: Vec<Vec<i64>> = identity_rows(4);
        assert!(annihilator_basis(&e, 4).unwrap().is_empty());
        assert!(annihilator_basis(&[], 0).is_err());
    }

    #[test]
    fn annihilator_in_standard_form_matches_simplex_basis() {
        // n = 5, k = 3: Π_F spanned by w = (-1,-1,-1,0,0) and e4, e5.
        let gens = vec![
            vec![-1, -1, -1, 0, 0],
            vec![0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 1],
        ];
        let b = annihilator_basis(&gens, 5).unwrap();
        assert_eq!(b.len(), 2);
        let expected = vec![vec![-1, 0, 1, 0, 0], vec![0, -1, 1, 0, 0]];
        // same lattice: each basis lies in the span of the other
        for v in &expected {
            assert!(in_lattice_span(&b, v));
        }
        for v in &b {
            assert!(in_lattice_span(&expected, v));
        }
    }

    #[test]
    fn completion_examples() {
        let m = complete_to_unimodular(&[vec![-1, 0]], 2).unwrap();
        assert_eq!(m.rows()[0], vec![-1, 0]);
        assert_eq!(m.det().abs(), 1);

        let m = complete_to_unimodular(&[vec![1, 1], vec![0, 1]], 2).unwrap();
        assert_eq!(m.rows(), &[vec![1, 1], vec![0, 1]]);

        assert_eq!(
            complete_to_unimodular(&[vec![2, 0]], 2),
            Err(Error::NotUnimodularlyCompletable)
        );
        assert_eq!(
            complete_to_unimodular(&[vec![1, 1], vec![1, -1]], 2),
            Err(Error::NotUnimodularlyCompletable)
        );
    }

    #[test]
    fn completion_of_coordinate_rows_is_identity_tail() {
        let m = complete_to_unimodular(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]], 4).unwrap();
        assert_eq!(m, UnimodularMap::identity(4));
    }

    #[test]
    fn inverse_and_compose() {
        let m = UnimodularMap::new(vec![vec![2, 1, 0], vec![1, 1, 0], vec![3, -2, -1]]).unwrap();
        assert_eq!(m.compose(&m.inverse()), UnimodularMap::identity(3));
        assert_eq!(m.det(), -1);
        assert!(UnimodularMap::new(vec![vec![2, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det(&[vec![0, -1], vec![2, 1]]), BigInt::from(2));
        assert_eq!(det(&[vec![1, 2], vec![2, 4]]), BigInt::zero());
        assert_eq!(
            det(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
            BigInt::from(-1)
        );
    }

    #[test]
    fn ext_gcd_signs() {
        for (a, b) in [(6, 4), (-6, 4), (0, -5), (7, 0), (-3, -9)] {
            let (g, s, t) = ext_gcd(a, b);
            assert!(g >= 0);
            assert_eq!(g, s * a + t * b);
            assert_eq!(g as u64, a.unsigned_abs().gcd(&b.unsigned_abs()));
        }
    }

    #[test]
    fn hull_examples() {
        let sq = [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0], [1, 0]];
        assert_eq!(convex_hull_2d(&sq), vec![[0, 0], [1, 0], [1, 1], [0, 1]]);
        assert_eq!(
            convex_hull_2d(&[[0, 0], [1, 1], [2, 2]]),
            vec![[0, 0], [2, 2]]
        );
        assert_eq!(convex_hull_2d(&[[3, 4]]), vec![[3, 4]]);
        let tri = [[1, 0], [0, 1], [-1, -1], [0, 0]];
        assert_eq!(convex_hull_2d(&tri), vec![[-1, -1], [1, 0], [0, 1]]);
    }
}
