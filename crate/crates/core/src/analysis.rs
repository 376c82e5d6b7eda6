//! Newton polytopes, lattice normal forms and critical-point diagnostics.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{convex_hull_2d, ext_gcd, gcd_slice, make_primitive, rank, UnimodularMap};
use crate::laurent::{ExponentVector, LaurentPoly, RationalPoint, VanishingOrder};
use crate::polyhedron::{in_convex_hull, is_unbounded, to_rational, vertices};

/// Convex hull of the exponent support.
///
/// In two variables the vertices run counterclockwise from the
/// lexicographically smallest one; in other dimensions they are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

impl NewtonPolytope {
    /// Builds the hull of arbitrary lattice points.
    pub fn from_points(dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid(
                "the empty set has no Newton polytope".into(),
            ));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Dimension(format!(
                "points must have {dim} coordinates"
            )));
        }
        let vertices = if dim == 2 {
            let pts: Vec<[i64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
            convex_hull_2d(&pts)
                .into_iter()
                .map(|p| p.to_vec())
                .collect()
        } else {
            let mut pts = points.to_vec();
            pts.sort();
            pts.dedup();
            let q: Vec<_> = pts.iter().map(|p| to_rational(p)).collect();
            let mut keep = Vec::new();
            for i in 0..pts.len() {
                let others: Vec<_> = q
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.clone())
                    .collect();
                if !in_convex_hull(&others, &q[i]) {
                    keep.push(pts[i].clone());
                }
            }
            keep
        };
        Ok(NewtonPolytope { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        let v0 = &self.vertices[0];
        let diffs: Vec<Vec<i64>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        if diffs.is_empty() {
            0
        } else {
            rank(&diffs)
        }
    }

    /// Twice the area of a planar polygon (an integer).
    pub fn double_area(&self) -> Result<i64> {
        if self.dim != 2 {
            return Err(Error::Dimension("area is computed for polygons".into()));
        }
        let v = &self.vertices;
        let m = v.len();
        let s: i64 = (0..m)
            .map(|i| {
                let (a, b) = (&v[i], &v[(i + 1) % m]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        Ok(s.abs())
    }

    /// Minkowski sum, for checking `newton(a·b)`.
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::VariableMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut pts = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Self::from_points(self.dim, &pts)
    }
}

pub fn newton(w: &LaurentPoly) -> Result<NewtonPolytope> {
    if w.is_zero() {
        return Err(Error::Invalid(
            "the zero polynomial has no Newton polytope".into(),
        ));
    }
    let pts: Vec<Vec<i64>> = w.support().map(|e| e.as_slice().to_vec()).collect();
    NewtonPolytope::from_points(w.nvars(), &pts)
}

/// `x ↦ linear·x + translation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineMap {
    pub linear: UnimodularMap,
    pub translation: Vec<i64>,
}

impl AffineMap {
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.linear
            .apply(x)
            .iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }
}

/// Representative of a polygon's class under `GL(2,ℤ)` and integer
/// translations, with a map achieving it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeNormalForm {
    pub vertices: Vec<[i64; 2]>,
    pub map: AffineMap,
}

impl PolytopeNormalForm {
    /// Compact text form, e.g. `(0,0) (1,0) (0,1)`.
    pub fn signature(&self) -> String {
        self.vertices
            .iter()
            .map(|v| format!("({},{})", v[0], v[1]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for PolytopeNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.signature())
    }
}

fn apply2(m: &[[i64; 2]; 2], v: [i64; 2]) -> [i64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

fn affine(m: [[i64; 2]; 2], origin: [i64; 2]) -> AffineMap {
    let linear = UnimodularMap::new(vec![m[0].to_vec(), m[1].to_vec()]).expect("unimodular");
    let t = apply2(&m, origin);
    AffineMap {
        linear,
        translation: vec![-t[0], -t[1]],
    }
}

/// Normal form of a planar lattice polygon (or point, or segment).
pub fn normal_form_2d(p: &NewtonPolytope) -> Result<PolytopeNormalForm> {
    if p.dim != 2 {
        return Err(Error::Dimension(
            "normal forms are implemented for n = 2".into(),
        ));
    }
    let v: Vec<[i64; 2]> = p.vertices.iter().map(|x| [x[0], x[1]]).collect();
    match v.len() {
        1 => {
            return Ok(PolytopeNormalForm {
                vertices: vec![[0, 0]],
                map: affine([[1, 0], [0, 1]], v[0]),
            })
        }
        2 => {
            let d = [v[1][0] - v[0][0], v[1][1] - v[0][1]];
            let (e, len) = make_primitive(&d)?;
            let e = [e.entries()[0], e.entries()[1]];
            let (_, a, b) = ext_gcd(e[0], e[1]);
            let m = [[a, b], [-e[1], e[0]]];
            return Ok(PolytopeNormalForm {
                vertices: vec![[0, 0], [len as i64, 0]],
                map: affine(m, v[0]),
            });
        }
        _ => {}
    }
    let m = v.len();
    let mut best: Option<PolytopeNormalForm> = None;
    for i in 0..m {
        for step in [1, m - 1] {
            let order: Vec<[i64; 2]> = (0..m).map(|t| v[(i + t * step) % m]).collect();
            let origin = order[0];
            let rel: Vec<[i64; 2]> = order
                .iter()
                .map(|q| [q[0] - origin[0], q[1] - origin[1]])
                .collect();
            let (e, _) = make_primitive(&rel[1])?;
            let e = [e.entries()[0], e.entries()[1]];
            let (_, a, b) = ext_gcd(e[0], e[1]);
            // rows (a, b) and ±(−e₂, e₁): the sign puts the polygon above the x-axis
            let s = if -e[1] * rel[2][0] + e[0] * rel[2][1] > 0 {
                1
            } else {
                -1
            };
            let mut mat = [[a, b], [-s * e[1], s * e[0]]];
            let w2 = apply2(&mat, rel[2]);
            // shear (x, y) ↦ (x + k y, y) so that w2.x lands in [0, w2.y)
            let k = (w2[0].rem_euclid(w2[1]) - w2[0]) / w2[1];
            mat = [
                [mat[0][0] + k * mat[1][0], mat[0][1] + k * mat[1][1]],
                [mat[1][0], mat[1][1]],
            ];
            let verts: Vec<[i64; 2]> = rel.iter().map(|q| apply2(&mat, *q)).collect();
            let better = match &best {
                None => true,
                Some(b) => verts < b.vertices,
            };
            if better {
                best = Some(PolytopeNormalForm {
                    vertices: verts,
                    map: affine(mat, origin),
                });
            }
        }
    }
    Ok(best.expect("polygon has flags"))
}

/// Gcd of all coordinates of the vertex differences `v_i − v_0`.
pub fn vertex_difference_gcd(p: &NewtonPolytope) -> u64 {
    let v0 = &p.vertices[0];
    let all: Vec<i64> = p.vertices[1..]
        .iter()
        .flat_map(|v| v.iter().zip(v0).map(|(a, b)| a - b))
        .collect();
    gcd_slice(&all)
}

/// A full-dimensional lattice polygon is minimal when no dilation by
/// `0 < λ < 1` is again a lattice polygon up to translation.
pub fn is_minimal(p: &NewtonPolytope) -> Result<bool> {
    if p.dim != 2 {
        return Err(Error::Dimension("minimality is tested for polygons".into()));
    }
    if p.affine_dim() < 2 {
        return Err(Error::Invalid(
            "minimality needs a full-dimensional polygon".into(),
        ));
    }
    Ok(vertex_difference_gcd(p) == 1)
}

/// Vertices of `{y : ⟨y, x⟩ ≤ 1 for all x in conv(points)}`, sorted.
pub fn polar_dual(points: &[Vec<i64>]) -> Result<Vec<Vec<BigRational>>> {
    let n = points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::Invalid("empty point set".into()))?;
    let rows: Vec<_> = points.iter().map(|p| to_rational(p)).collect();
    if is_unbounded(&rows, n) {
        return Err(Error::Invalid("the origin is not an interior point".into()));
    }
    let rhs = vec![BigRational::one(); rows.len()];
    Ok(vertices(&rows, &rhs, n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    pub is_critical: bool,
    #[serde(serialize_with = "ser_q")]
    pub value: BigRational,
    #[serde(serialize_with = "ser_qs")]
    pub log_gradient: Vec<BigRational>,
    /// Determinant of the matrix of second logarithmic derivatives.
    #[serde(serialize_with = "ser_q")]
    pub log_hessian_det: BigRational,
    /// Critical with nonzero log-Hessian determinant.
    pub is_morse: bool,
}

fn ser_q<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_qs<S: serde::Serializer>(q: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(q.len()))?;
    for x in q {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn critical_report(w: &LaurentPoly, pt: &RationalPoint) -> Result<CriticalReport> {
    let n = w.nvars();
    let value = w.evaluate(pt)?;
    let mut first = Vec::with_capacity(n);
    let mut hess = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let di = w.log_derivative(i)?;
        first.push(di.evaluate(pt)?);
        for (j, h) in hess[i].iter_mut().enumerate() {
            *h = di.log_derivative(j)?.evaluate(pt)?;
        }
    }
    let is_critical = first.iter().all(|g| g.is_zero());
    let det = det_rational(hess);
    Ok(CriticalReport {
        is_critical,
        value,
        log_gradient: first,
        is_morse: is_critical && !det.is_zero(),
        log_hessian_det: det,
    })
}

fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let v = &f * &m[c][j];
                    m[i][j] -= v;
                }
            }
        }
    }
    det
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocusReport {
    pub passed: bool,
    pub vanishing_order: VanishingOrder,
    pub expected_order: u64,
    /// Labels such as `D1` or `D1D2` of logarithmic derivatives that the
    /// divisor does not divide.
    pub nondivisible_derivatives: Vec<String>,
}

/// Checks that `w − shift` vanishes to order exactly `order` along `g = 0`
/// and that `g` divides every first and second logarithmic derivative of `w`.
pub fn locus_report(
    w: &LaurentPoly,
    g: &LaurentPoly,
    shift: &BigInt,
    order: u64,
) -> Result<LocusReport> {
    let n = w.nvars();
    let shifted = w.try_sub(&LaurentPoly::constant(n, shift.clone()))?;
    let vo = shifted.vanishing_order(g)?;
    let mut bad = Vec::new();
    for i in 0..n {
        let di = w.log_derivative(i)?;
        if di.try_div_exact(g)?.is_none() {
            bad.push(format!("D{}", i + 1));
        }
        for j in i..n {
            if di.log_derivative(j)?.try_div_exact(g)?.is_none() {
                bad.push(format!("D{}D{}", i + 1, j + 1));
            }
        }
    }
    Ok(LocusReport {
        passed: !vo.saturated && vo.order == order && bad.is_empty(),
        vanishing_order: vo,
        expected_order: order,
        nondivisible_derivatives: bad,
    })
}

/// Searches for a unimodular `M` with `a.monomial_substitute(M) == b`.
///
/// Exponents of `a` are matched to exponents of `b` with equal coefficients,
/// starting from the rarest coefficients; once `n` independent exponents are
/// matched the linear map is determined and checked on the whole support.
pub fn find_monomial_equivalence(
    a: &LaurentPoly,
    b: &LaurentPoly,
) -> Result<Option<UnimodularMap>> {
    if a.nvars() != b.nvars() {
        return Err(Error::VariableMismatch {
            left: a.nvars(),
            right: b.nvars(),
        });
    }
    let n = a.nvars();
    if a.len() != b.len() || a.coefficient_multiset() != b.coefficient_multiset() {
        return Ok(None);
    }
    let mut classes: BTreeMap<&BigInt, Vec<&ExponentVector>> = BTreeMap::new();
    for (e, c) in b.terms() {
        classes.entry(c).or_default().push(e);
    }
    let mut order: Vec<(&ExponentVector, &BigInt)> = a.terms().collect();
    order.sort_by_key(|(e, c)| (classes[c].len(), (*e).clone()));
    // pick n independent exponents greedily in that order
    let mut chosen: Vec<(&ExponentVector, &BigInt)> = Vec::new();
    for (e, c) in &order {
        let mut rows: Vec<Vec<i64>> = chosen.iter().map(|(x, _)| x.as_slice().to_vec()).collect();
        rows.push(e.as_slice().to_vec());
        if rank(&rows) == rows.len() {
            chosen.push((e, c));
            if chosen.len() == n {
                break;
            }
        }
    }
    if chosen.len() < n {
        return Err(Error::Invalid(
            "support does not span the lattice; the substitution is not determined".into(),
        ));
    }
    let src: Vec<Vec<i64>> = chosen.iter().map(|(e, _)| e.as_slice().to_vec()).collect();
    let mut images: Vec<&ExponentVector> = Vec::with_capacity(n);
    Ok(search(a, b, &chosen, &classes, &src, &mut images))
}

fn search<'a>(
    a: &LaurentPoly,
    b: &LaurentPoly,
    chosen: &[(&ExponentVector, &BigInt)],
    classes: &BTreeMap<&BigInt, Vec<&'a ExponentVector>>,
    src: &[Vec<i64>],
    images: &mut Vec<&'a ExponentVector>,
) -> Option<UnimodularMap> {
    let n = src.len();
    if images.len() == n {
        let l = solve_linear_map(src, images)?;
        let m = UnimodularMap::new(l).ok()?.transpose();
        return match a.monomial_substitute(&m) {
            Ok(t) if &t == b => Some(m),
            _ => None,
        };
    }
    let c = chosen[images.len()].1;
    for cand in &classes[c] {
        if images.contains(cand) {
            continue;
        }
        images.push(cand);
        if let Some(m) = search(a, b, chosen, classes, src, images) {
            return Some(m);
        }
        images.pop();
    }
    None
}

/// Integer `L` with `L·src_i = dst_i`, if one exists.
fn solve_linear_map(src: &[Vec<i64>], dst: &[&ExponentVector]) -> Option<Vec<Vec<i64>>> {
    let n = src.len();
    // Row r of L solves src · L_r = (dst_i)_r over i.
    let a: Vec<Vec<BigRational>> = src.iter().map(|s| to_rational(s)).collect();
    let mut l = Vec::with_capacity(n);
    for r in 0..n {
        let rhs: Vec<BigRational> = dst
            .iter()
            .map(|d| BigRational::from_integer(d[r].into()))
            .collect();
        let x = crate::lattice::solve_rational(&a, &rhs)?;
        let row: Option<Vec<i64>> = x
            .iter()
            .map(|q| {
                if q.is_integer() {
                    i64::try_from(q.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect();
        l.push(row?);
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::{catalog, CATALOG_NAMES};

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, 2).unwrap()
    }

    fn verts(w: &str) -> Vec<Vec<i64>> {
        newton(&p(w)).unwrap().vertices().to_vec()
    }

    #[test]
    fn newton_examples() {
        assert_eq!(
            verts("x + y + x^-1*y^-1"),
            vec![vec![-1, -1], vec![1, 0], vec![0, 1]]
        );
        assert_eq!(
            verts("y + (x+y)^2*x^-1*y^-3"),
            vec![vec![-1, -1], vec![1, -3], vec![0, 1]]
        );
        assert_eq!(verts("5"), vec![vec![0, 0]]);
        assert_eq!(verts("x + y"), vec![vec![0, 1], vec![1, 0]]);
        assert!(newton(&LaurentPoly::zero(2)).is_err());
    }

    #[test]
    fn newton_in_three_dimensions() {
        let w = LaurentPoly::parse("x^-1 + y^-1 + z^-1 + x*y*z + 1 + x*y*z^-1", 3).unwrap();
        let np = newton(&w).unwrap();
        // the constant lies inside
        assert_eq!(np.vertices().len(), 5);
        assert_eq!(np.affine_dim(), 3);
    }

    #[test]
    fn normal_form_examples() {
        let unit = NewtonPolytope::from_points(2, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let nf = normal_form_2d(&unit).unwrap();
        assert_eq!(nf.vertices, vec![[0, 0], [1, 0], [0, 1]]);
        let cp2 = newton(&p("x + y + x^-1*y^-1")).unwrap();
        let nf = normal_form_2d(&cp2).unwrap();
        assert_eq!(nf.signature(), "(0,0) (1,0) (2,3)");
        for v in cp2.vertices() {
            let image = nf.map.apply(v);
            assert!(nf.vertices.contains(&[image[0], image[1]]));
        }
        let seg = newton(&p("x^3 + y^-3")).unwrap();
        assert_eq!(normal_form_2d(&seg).unwrap().vertices, vec![[0, 0], [3, 0]]);
        let pt = newton(&p("7*x^2*y")).unwrap();
        assert_eq!(normal_form_2d(&pt).unwrap().vertices, vec![[0, 0]]);
    }

    #[test]
    fn bl6_and_bl7_polygons_differ() {
        let a = newton(catalog("bl6").unwrap().potential()).unwrap();
        let b = newton(catalog("bl7").unwrap().potential()).unwrap();
        assert_eq!(a.double_area().unwrap(), 9);
        assert_eq!(b.double_area().unwrap(), 16);
        assert_ne!(
            normal_form_2d(&a).unwrap().vertices,
            normal_form_2d(&b).unwrap().vertices
        );
    }

    #[test]
    fn minimality_examples() {
        let t = NewtonPolytope::from_points(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap();
        assert!(is_minimal(&t).unwrap());
        let t2 = NewtonPolytope::from_points(2, &[vec![0, 0], vec![2, 0], vec![0, 2]]).unwrap();
        assert!(!is_minimal(&t2).unwrap());
        let seg = NewtonPolytope::from_points(2, &[vec![0, 0], vec![1, 0]]).unwrap();
        assert!(is_minimal(&seg).is_err());
    }

    #[test]
    fn catalog_polygon_gcds() {
        let gcds: Vec<u64> = CATALOG_NAMES
            .iter()
            .map(|n| vertex_difference_gcd(&newton(catalog(n).unwrap().potential()).unwrap()))
            .collect();
        assert_eq!(gcds, vec![1, 1, 1, 1, 1, 1, 2, 3, 4, 6]);
    }

    #[test]
    fn polar_dual_examples() {
        let tri = vec![vec![-1, 0], vec![0, -1], vec![1, 1]];
        let d = polar_dual(&tri).unwrap();
        assert_eq!(
            d,
            vec![
                to_rational(&[-1, -1]),
                to_rational(&[-1, 2]),
                to_rational(&[2, -1])
            ]
        );
        let back: Vec<Vec<i64>> = d
            .iter()
            .map(|v| {
                v.iter()
                    .map(|q| i64::try_from(q.to_integer()).unwrap())
                    .collect()
            })
            .collect();
        let dd = polar_dual(&back).unwrap();
        let mut expect: Vec<_> = tri.iter().map(|v| to_rational(v)).collect();
        expect.sort();
        assert_eq!(dd, expect);
        assert!(polar_dual(&[vec![1, 0], vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn critical_examples() {
        let one = RationalPoint::from_ints(&[1, 1]).unwrap();
        let r = critical_report(&p("(1+x+y)^3*x^-1*y^-1 - 6"), &one).unwrap();
        assert!(r.is_critical && r.is_morse);
        assert_eq!(r.value, BigRational::from_integer(21.into()));
        let r = critical_report(&p("x + y"), &one).unwrap();
        assert!(!r.is_critical);
        assert_eq!(r.log_gradient, vec![BigRational::one(), BigRational::one()]);
    }

    #[test]
    fn locus_examples() {
        let g = p("1 + x + y");
        let bl6 = catalog("bl6").unwrap();
        assert!(
            locus_report(bl6.potential(), &g, &BigInt::from(-6), 3)
                .unwrap()
                .passed
        );
        let bl8 = catalog("bl8").unwrap();
        assert!(
            locus_report(bl8.potential(), &g, &BigInt::from(-60), 6)
                .unwrap()
                .passed
        );
        let cp2 = catalog("cp2").unwrap();
        for order in 1..4 {
            assert!(
                !locus_report(cp2.potential(), &g, &BigInt::zero(), order)
                    .unwrap()
                    .passed
            );
        }
    }

    #[test]
    fn monomial_equivalence_is_found() {
        let a = p("x + 2*y + 3*x^-1*y^-1");
        let m = UnimodularMap::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
        let b = a.monomial_substitute(&m).unwrap();
        let found = find_monomial_equivalence(&a, &b).unwrap().unwrap();
        assert_eq!(a.monomial_substitute(&found).unwrap(), b);
        assert_eq!(
            find_monomial_equivalence(&a, &p("x + 2*y + 3*x^-2*y^-1")).unwrap(),
            None
        );
    }
}
