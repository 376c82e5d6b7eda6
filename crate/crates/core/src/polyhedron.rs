//! Exact rational helpers for small H- and V-polytopes.
//!
//! Everything here is brute force over subsets, which is fine for the
//! handful of facets and dimensions ≤ 6 that monotone polytopes bring.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{rank_rational, solve_rational};

pub type Point = Vec<BigRational>;

pub fn to_rational(v: &[i64]) -> Point {
    v.iter()
        .map(|&x| BigRational::from_integer(x.into()))
        .collect()
}

pub fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Calls `f` on every `k`-subset of `0..m`, in lexicographic order.
pub fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of `{x : ⟨a_j, x⟩ ≤ b_j}`, sorted and deduplicated.
pub fn vertices(rows: &[Point], rhs: &[BigRational], n: usize) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for_each_subset(rows.len(), n, |sub| {
        let a: Vec<Point> = sub.iter().map(|&j| rows[j].clone()).collect();
        let b: Vec<BigRational> = sub.iter().map(|&j| rhs[j].clone()).collect();
        if let Some(x) = solve_rational(&a, &b) {
            if rows.iter().zip(rhs).all(|(r, c)| dot_q(r, &x) <= *c) {
                out.push(x);
            }
        }
    });
    out.sort();
    out.dedup();
    out
}

/// `true` when `{x : ⟨a_j, x⟩ ≤ b_j}` has a nonzero recession direction.
///
/// The recession cone `{d : ⟨a_j, d⟩ ≤ 0}` is trivial iff the rows have full
/// rank and no extreme ray exists; candidate rays are the kernels of
/// rank-(n−1) row subsets.
pub fn is_unbounded(rows: &[Point], n: usize) -> bool {
    if n == 0 {
        return false;
    }
    if rows.is_empty() || rank_rational(rows) < n {
        return true;
    }
    let mut found = false;
    for_each_subset(rows.len(), n - 1, |sub| {
        if found {
            return;
        }
        let a: Vec<Point> = sub.iter().map(|&j| rows[j].clone()).collect();
        if let Some(d) = kernel_vector(&a, n) {
            for sign in [1, -1] {
                let d: Point = d.iter().map(|x| x * BigInt::from(sign)).collect();
                if rows.iter().all(|r| !dot_q(r, &d).is_positive()) {
                    found = true;
                }
            }
        }
    });
    found
}

/// A generator of the kernel of `a` when it is one-dimensional.
fn kernel_vector(a: &[Point], n: usize) -> Option<Point> {
    if n == 1 {
        return if a.is_empty() {
            Some(vec![BigRational::one()])
        } else {
            None
        };
    }
    if rank_rational(a) != n - 1 {
        return None;
    }
    // Fix one free coordinate to 1 and solve for the rest.
    for free in 0..n {
        let mut sys: Vec<Point> = a.to_vec();
        let mut unit = vec![BigRational::zero(); n];
        unit[free] = BigRational::one();
        sys.push(unit);
        let mut b = vec![BigRational::zero(); a.len()];
        b.push(BigRational::one());
        if let Some(x) = solve_rational(&sys, &b) {
            return Some(x);
        }
    }
    None
}

/// Decides whether `target` is a convex combination of `points`, by phase-one
/// simplex over the rationals with Bland's rule.
pub fn in_convex_hull(points: &[Point], target: &[BigRational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = target.len();
    let m = points.len();
    // Constraints: sum_i λ_i p_i = target, sum_i λ_i = 1, λ ≥ 0.
    let rows = n + 1;
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    let mut b: Vec<BigRational> = Vec::with_capacity(rows);
    for d in 0..n {
        a.push(points.iter().map(|p| p[d].clone()).collect());
        b.push(target[d].clone());
    }
    a.push(vec![BigRational::one(); m]);
    b.push(BigRational::one());
    feasible(a, b)
}

/// Phase one: is `{λ ≥ 0 : A λ = b}` nonempty?
fn feasible(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    for i in 0..rows {
        if b[i].is_negative() {
            b[i] = -b[i].clone();
            for x in a[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    // Tableau with artificial variables cols..cols+rows.
    let width = cols + rows;
    let mut t: Vec<Vec<BigRational>> = a
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..rows).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let mut basis: Vec<usize> = (cols..width).collect();
    // Objective: minimize the sum of artificials; reduced costs below.
    loop {
        let mut cost = vec![BigRational::zero(); width];
        for (i, &bv) in basis.iter().enumerate() {
            if bv >= cols {
                for j in 0..width {
                    cost[j] -= &t[i][j];
                }
            }
        }
        for &bv in &basis {
            cost[bv] = BigRational::zero();
        }
        for j in cols..width {
            if !basis.contains(&j) {
                cost[j] += BigRational::one();
            }
        }
        let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &b[i] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // unbounded direction of a bounded-below objective cannot happen
            break;
        };
        let piv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &piv;
        }
        b[r] /= &piv;
        for i in 0..rows {
            if i != r && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..width {
                    let d = &f * &t[r][j];
                    t[i][j] -= d;
                }
                let d = &f * &b[r];
                b[i] -= d;
            }
        }
        basis[r] = enter;
    }
    basis
        .iter()
        .zip(&b)
        .all(|(&bv, val)| bv < cols || val.is_zero())
}
