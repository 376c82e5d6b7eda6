//! Monotone lattice polytopes and higher-dimensional toric mutation.
//!
//! A polytope is given by primitive normals `η_j` as `{x : ⟨η_j, x⟩ ≤ 1}`.
//! Its toric potential is `Σ x^{η_j}`, and a mutation configuration (a face
//! of codimension `k ≥ 2` with an interior lattice point `w`) mutates it by
//! `x^v ↦ x^v (1 + x^{u_1} + … + x^{u_{k−1}})^{−⟨v,w⟩}`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    annihilator_basis, complete_to_unimodular, det, dot, in_lattice_span, rank, DirectionVector,
    UnimodularMap,
};
use crate::laurent::{localized_mutate, ExponentVector, LaurentPoly, Mutated};
use crate::polyhedron::{for_each_subset, is_unbounded, to_rational, vertices};

/// A validated monotone polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonePolytope {
    n: usize,
    normals: Vec<DirectionVector>,
    vertices: Vec<Vec<i64>>,
}

/// A reason a normal list does not define a monotone polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    WrongLength {
        index: usize,
        len: usize,
    },
    NotPrimitive {
        index: usize,
        normal: Vec<i64>,
    },
    TooFewNormals {
        count: usize,
    },
    Unbounded,
    RedundantNormal {
        index: usize,
    },
    NonIntegralVertex {
        vertex: Vec<String>,
    },
    NotSimple {
        vertex: Vec<i64>,
        active: Vec<usize>,
    },
    NotSmooth {
        vertex: Vec<i64>,
        active: Vec<usize>,
        det: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongLength { index, len } => {
                write!(f, "normal {index} has {len} entries")
            }
            Violation::NotPrimitive { index, normal } => {
                write!(f, "normal {index} {normal:?} is not primitive")
            }
            Violation::TooFewNormals { count } => write!(f, "only {count} normals"),
            Violation::Unbounded => write!(f, "the polyhedron is unbounded"),
            Violation::RedundantNormal { index } => {
                write!(f, "normal {index} does not support a facet")
            }
            Violation::NonIntegralVertex { vertex } => {
                write!(f, "vertex ({}) is not integral", vertex.join(","))
            }
            Violation::NotSimple { vertex, active } => {
                write!(f, "vertex {vertex:?} lies on facets {active:?}")
            }
            Violation::NotSmooth {
                vertex,
                active,
                det,
            } => write!(
                f,
                "normals {active:?} at vertex {vertex:?} have determinant {det}"
            ),
        }
    }
}

/// JSON form: `{"n": 3, "normals": [[-1,0,0], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub n: usize,
    pub normals: Vec<Vec<i64>>,
}

/// Validates `{x : ⟨η_j, x⟩ ≤ 1}` and collects every violated condition.
pub fn validate(
    normals: &[Vec<i64>],
    n: usize,
) -> std::result::Result<MonotonePolytope, Vec<Violation>> {
    let mut bad = Vec::new();
    for (index, eta) in normals.iter().enumerate() {
        if eta.len() != n {
            bad.push(Violation::WrongLength {
                index,
                len: eta.len(),
            });
        } else if DirectionVector::new(eta).is_err() {
            bad.push(Violation::NotPrimitive {
                index,
                normal: eta.clone(),
            });
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    if normals.len() < n + 1 {
        bad.push(Violation::TooFewNormals {
            count: normals.len(),
        });
    }
    let rows: Vec<_> = normals.iter().map(|r| to_rational(r)).collect();
    if is_unbounded(&rows, n) {
        bad.push(Violation::Unbounded);
        return Err(bad);
    }
    let rhs = vec![BigRational::one(); rows.len()];
    let qverts = vertices(&rows, &rhs, n);
    let mut verts = Vec::new();
    for v in &qverts {
        if v.iter().all(|x| x.is_integer()) {
            verts.push(
                v.iter()
                    .map(|x| i64::try_from(x.to_integer()).expect("small vertex"))
                    .collect::<Vec<i64>>(),
            );
        } else {
            bad.push(Violation::NonIntegralVertex {
                vertex: v.iter().map(|x| x.to_string()).collect(),
            });
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    for (index, eta) in normals.iter().enumerate() {
        let on: Vec<&Vec<i64>> = verts.iter().filter(|v| dot(eta, v) == 1).collect();
        let affine_rank = if on.len() < 2 {
            0
        } else {
            let diffs: Vec<Vec<i64>> = on[1..]
                .iter()
                .map(|v| v.iter().zip(on[0]).map(|(a, b)| a - b).collect())
                .collect();
            rank(&diffs)
        };
        if on.is_empty() || affine_rank + 1 < n {
            bad.push(Violation::RedundantNormal { index });
        }
    }
    for v in &verts {
        let active = active_set(normals, v);
        if active.len() != n {
            bad.push(Violation::NotSimple {
                vertex: v.clone(),
                active,
            });
            continue;
        }
        let m: Vec<Vec<i64>> = active.iter().map(|&j| normals[j].clone()).collect();
        let d = det(&m);
        if d.magnitude() != &One::one() {
            bad.push(Violation::NotSmooth {
                vertex: v.clone(),
                active,
                det: d.to_string(),
            });
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    Ok(MonotonePolytope {
        n,
        normals: normals
            .iter()
            .map(|e| DirectionVector::new(e).expect("checked"))
            .collect(),
        vertices: verts,
    })
}

fn active_set(normals: &[Vec<i64>], x: &[i64]) -> Vec<usize> {
    normals
        .iter()
        .enumerate()
        .filter(|(_, eta)| dot(eta, x) == 1)
        .map(|(j, _)| j)
        .collect()
}

fn violations_error(v: Vec<Violation>) -> Error {
    Error::Invalid(
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    )
}

/// A face, identified by the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub active: Vec<usize>,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

impl MonotonePolytope {
    pub fn from_json(j: &PolytopeJson) -> std::result::Result<Self, Vec<Violation>> {
        validate(&j.normals, j.n)
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            n: self.n,
            normals: self.normal_rows(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn normals(&self) -> &[DirectionVector] {
        &self.normals
    }

    pub fn normal_rows(&self) -> Vec<Vec<i64>> {
        self.normals.iter().map(|e| e.entries().to_vec()).collect()
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.normals.iter().all(|e| dot(e.entries(), x) <= 1)
    }

    /// Indices of the facets through `x`.
    pub fn active_facets(&self, x: &[i64]) -> Vec<usize> {
        active_set(&self.normal_rows(), x)
    }

    /// All faces of dimension `d`, sorted by active set.
    pub fn faces(&self, d: usize) -> Result<Vec<Face>> {
        if d > self.n {
            return Err(Error::Dimension(format!("no faces of dimension {d}")));
        }
        if d == self.n {
            return Ok(vec![Face {
                active: vec![],
                dim: d,
                vertices: self.vertices.clone(),
            }]);
        }
        let mut actives: Vec<Vec<usize>> = Vec::new();
        for v in &self.vertices {
            let act = self.active_facets(v);
            for_each_subset(act.len(), self.n - d, |sub| {
                actives.push(sub.iter().map(|&i| act[i]).collect());
            });
        }
        actives.sort();
        actives.dedup();
        Ok(actives
            .into_iter()
            .map(|active| self.face_from_active(active, d))
            .collect())
    }

    fn face_from_active(&self, active: Vec<usize>, dim: usize) -> Face {
        let vertices = self
            .vertices
            .iter()
            .filter(|v| {
                active
                    .iter()
                    .all(|&j| dot(self.normals[j].entries(), v) == 1)
            })
            .cloned()
            .collect();
        Face {
            active,
            dim,
            vertices,
        }
    }

    /// The face cut out by the given facets, if they meet in a nonempty face.
    pub fn face(&self, facets: &[usize]) -> Result<Face> {
        let mut active = facets.to_vec();
        active.sort_unstable();
        active.dedup();
        if let Some(&j) = active.iter().find(|&&j| j >= self.normals.len()) {
            return Err(Error::Invalid(format!("no facet with index {j}")));
        }
        if active.len() > self.n {
            return Err(Error::Invalid(format!("facets {active:?} do not meet")));
        }
        let face = self.face_from_active(active, self.n - facets.len().min(self.n));
        if face.vertices.is_empty() {
            return Err(Error::Invalid(format!(
                "facets {:?} do not meet",
                face.active
            )));
        }
        // in a simple polytope the codimension is the number of facets
        Ok(Face {
            dim: self.n - face.active.len(),
            ..face
        })
    }

    /// Lattice points whose set of facets is exactly the face's.
    pub fn interior_lattice_points(&self, f: &Face) -> Vec<Vec<i64>> {
        let lo: Vec<i64> = (0..self.n)
            .map(|i| {
                f.vertices
                    .iter()
                    .map(|v| v[i])
                    .min()
                    .expect("nonempty face")
            })
            .collect();
        let hi: Vec<i64> = (0..self.n)
            .map(|i| {
                f.vertices
                    .iter()
                    .map(|v| v[i])
                    .max()
                    .expect("nonempty face")
            })
            .collect();
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            if self.contains(&x) && self.active_facets(&x) == f.active {
                out.push(x.clone());
            }
            let mut i = self.n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if x[i] < hi[i] {
                    x[i] += 1;
                    for (j, xj) in x.iter_mut().enumerate().skip(i + 1) {
                        *xj = lo[j];
                    }
                    break;
                }
            }
        }
    }

    /// Every lattice point of the face, interior or not.
    pub fn lattice_points(&self, f: &Face) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let sub = self.faces_containing_closure(f);
        for g in sub {
            out.extend(self.interior_lattice_points(&g));
        }
        out.sort();
        out
    }

    /// Faces contained in `f` (including `f`).
    fn faces_containing_closure(&self, f: &Face) -> Vec<Face> {
        let mut out = Vec::new();
        for d in 0..=f.dim {
            for g in self.faces(d).expect("valid dimension") {
                if f.active.iter().all(|j| g.active.contains(j)) {
                    out.push(g);
                }
            }
        }
        out
    }

    /// All mutation configurations: faces of dimension at most `n − 2` with
    /// an interior lattice point.
    pub fn mutation_configurations(&self) -> Vec<MutationConfiguration> {
        let mut out = Vec::new();
        for d in 0..self.n.saturating_sub(1) {
            for face in self.faces(d).expect("valid dimension") {
                for w in self.interior_lattice_points(&face) {
                    out.push(MutationConfiguration {
                        face: face.clone(),
                        k: self.n - d,
                        point: w,
                        interior: true,
                    });
                }
            }
        }
        out
    }

    pub fn toric_potential(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.n,
            self.normals
                .iter()
                .map(|e| (ExponentVector::new(e.entries()), BigInt::one())),
        )
        .expect("normals have length n")
    }

    /// `Δ × [−1, 1]`.
    pub fn product_with_interval(&self) -> MonotonePolytope {
        let n = self.n + 1;
        let mut normals: Vec<Vec<i64>> = self
            .normal_rows()
            .into_iter()
            .map(|mut r| {
                r.push(0);
                r
            })
            .collect();
        let mut up = vec![0; n];
        up[n - 1] = 1;
        normals.push(up.clone());
        up[n - 1] = -1;
        normals.push(up);
        validate(&normals, n).expect("product of monotone polytopes is monotone")
    }

    /// Image under `x ↦ A x`; normals move by `A^{-T}` and keep their order.
    pub fn transform(&self, a: &UnimodularMap) -> Result<MonotonePolytope> {
        if a.dim() != self.n {
            return Err(Error::Dimension(
                "map size differs from polytope dimension".into(),
            ));
        }
        let dual = a.inverse_transpose();
        let normals: Vec<Vec<i64>> = self
            .normals
            .iter()
            .map(|e| dual.apply(e.entries()))
            .collect();
        validate(&normals, self.n).map_err(violations_error)
    }

    /// Builds a configuration, checking codimension and interiority.
    pub fn configuration(&self, facets: &[usize], point: &[i64]) -> Result<MutationConfiguration> {
        let c = self.formal_configuration(facets, point)?;
        if !c.interior {
            return Err(Error::Invalid(format!(
                "point {point:?} is not interior to the face on facets {:?}",
                c.face.active
            )));
        }
        Ok(c)
    }

    /// Like [`configuration`](Self::configuration) but accepts boundary
    /// points of the face, for testing the interiority criterion.
    pub fn formal_configuration(
        &self,
        facets: &[usize],
        point: &[i64],
    ) -> Result<MutationConfiguration> {
        if point.len() != self.n {
            return Err(Error::Dimension(format!(
                "point must have {} coordinates",
                self.n
            )));
        }
        let face = self.face(facets)?;
        let k = self.n - face.dim;
        if k < 2 {
            return Err(Error::Invalid(
                "facets are not mutation configurations (k = 1)".into(),
            ));
        }
        if !self.contains(point) {
            return Err(Error::Invalid(format!(
                "point {point:?} is outside the polytope"
            )));
        }
        let act = self.active_facets(point);
        if !face.active.iter().all(|j| act.contains(j)) {
            return Err(Error::Invalid(format!(
                "point {point:?} is not on the face"
            )));
        }
        Ok(MutationConfiguration {
            interior: act == face.active,
            face,
            k,
            point: point.to_vec(),
        })
    }

    /// A unimodular `A` with `A·w = (−1,…,−1,0,…,0)` whose facets through the
    /// face pull back to `−e_1, …, −e_k`, in the order of the face's facets.
    pub fn standard_form(&self, c: &MutationConfiguration) -> Result<UnimodularMap> {
        let k = c.k;
        let rows: Vec<Vec<i64>> = c
            .face
            .active
            .iter()
            .map(|&j| self.normals[j].entries().iter().map(|x| -x).collect())
            .collect();
        let base = complete_to_unimodular(&rows, self.n).map_err(|_| {
            Error::Internal("facet normals at a face do not extend to a basis".into())
        })?;
        let cw = base.apply(&c.point);
        let mut out: Vec<Vec<i64>> = base.rows().to_vec();
        // shear tail coordinates by the first one: x_i += r_i·x_1
        for i in k..self.n {
            let r = cw[i];
            for j in 0..self.n {
                out[i][j] += r * base.rows()[0][j];
            }
        }
        UnimodularMap::new(out)
    }

    /// The basis `{η_{a_i} − η_{a_1}}` of `Π_F^⊥`, where `a_1 < … < a_k` are
    /// the facets through the face. In standard form this is the basis
    /// `−e_i + e_1` (up to the labelling of the first k coordinates).
    pub fn default_basis(&self, c: &MutationConfiguration) -> Vec<Vec<i64>> {
        let a = &c.face.active;
        let pivot = self.normals[a[0]].entries();
        a[1..]
            .iter()
            .map(|&j| {
                self.normals[j]
                    .entries()
                    .iter()
                    .zip(pivot)
                    .map(|(x, y)| x - y)
                    .collect()
            })
            .collect()
    }

    /// Checks that `basis` is an integral basis of `Π_F^⊥`.
    pub fn check_basis(&self, c: &MutationConfiguration, basis: &[Vec<i64>]) -> Result<()> {
        if basis.len() != c.k - 1 {
            return Err(Error::Invalid(format!(
                "a basis of the annihilator has {} vectors, got {}",
                c.k - 1,
                basis.len()
            )));
        }
        let mut gens = c.face.vertices.clone();
        gens.push(c.point.clone());
        let ann = annihilator_basis(&gens, self.n)?;
        for u in basis {
            if u.len() != self.n {
                return Err(Error::Dimension(format!(
                    "basis vector {u:?} has wrong length"
                )));
            }
            if !in_lattice_span(&ann, u) {
                return Err(Error::Invalid(format!(
                    "{u:?} does not annihilate the face"
                )));
            }
        }
        if rank(basis) != basis.len() || complete_to_unimodular(basis, self.n).is_err() {
            return Err(Error::Invalid(
                "vectors are not an integral basis of the annihilator".into(),
            ));
        }
        Ok(())
    }

    /// Applies the toric wall-crossing to the toric potential.
    pub fn toric_mutate(
        &self,
        c: &MutationConfiguration,
        basis: Option<&[Vec<i64>]>,
    ) -> Result<Mutated> {
        let basis = match basis {
            Some(b) => {
                self.check_basis(c, b)?;
                b.to_vec()
            }
            None => self.default_basis(c),
        };
        let mut factor = LaurentPoly::one(self.n);
        for u in &basis {
            factor = factor + LaurentPoly::monomial(ExponentVector::new(u), 1);
        }
        localized_mutate(&self.toric_potential(), &factor, &c.point)
    }
}

/// A face of codimension `k ≥ 2` and a lattice point on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationConfiguration {
    pub face: Face,
    pub point: Vec<i64>,
    pub k: usize,
    /// Whether the point lies on no facet beyond the face's own.
    pub interior: bool,
}

/// `{u_i = −e_i + e_k : i < k}` in `ℤ^n`, the annihilator basis of a face
/// in standard form.
pub fn standard_basis(n: usize, k: usize) -> Vec<Vec<i64>> {
    (0..k.saturating_sub(1))
        .map(|i| {
            let mut u = vec![0; n];
            u[i] = -1;
            u[k - 1] = 1;
            u
        })
        .collect()
}

/// The moment polytope `{x_i ≥ −1, Σ x_i ≤ 1}` of `ℂP^n`.
pub fn cpn(n: usize) -> Result<MonotonePolytope> {
    if n == 0 {
        return Err(Error::Dimension("CP^0 has no polytope here".into()));
    }
    let mut normals: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = -1;
            e
        })
        .collect();
    normals.push(vec![1; n]);
    validate(&normals, n).map_err(violations_error)
}

/// The toric del Pezzo polytopes by name, plus `cpN` for any `N ≥ 1`.
pub fn builtin(name: &str) -> Result<MonotonePolytope> {
    let normals: Vec<Vec<i64>> = match name {
        "cp2" => return cpn(2),
        "p1xp1" => vec![vec![-1, 0], vec![0, -1], vec![1, 0], vec![0, 1]],
        "bl1" => vec![vec![-1, 0], vec![0, -1], vec![1, 1], vec![0, 1]],
        "bl2" => vec![vec![-1, 0], vec![0, -1], vec![1, 1], vec![1, 0], vec![0, 1]],
        "bl3" => vec![
            vec![-1, 0],
            vec![0, -1],
            vec![1, 1],
            vec![1, 0],
            vec![0, 1],
            vec![-1, -1],
        ],
        _ => {
            if let Some(n) = name
                .strip_prefix("cp")
                .and_then(|d| d.parse::<usize>().ok())
            {
                return cpn(n);
            }
            return Err(Error::Invalid(format!("unknown polytope {name:?}")));
        }
    };
    validate(&normals, 2).map_err(violations_error)
}

/// Names accepted by [`builtin`] for the toric del Pezzo surfaces.
pub const TORIC_DEL_PEZZO: [&str; 5] = ["cp2", "p1xp1", "bl1", "bl2", "bl3"];
