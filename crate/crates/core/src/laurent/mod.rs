//! Sparse Laurent polynomials with arbitrary-precision integer coefficients.
//!
//! Terms are stored in a `BTreeMap` keyed by exponent vectors, so iteration
//! follows the global lexicographic term order (first coordinate most
//! significant). Every mutation in the crate reduces to
//! [`localized_mutate`], which multiplies out the nonnegative powers of a
//! factor and decides the rest by repeated exact division.

mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lattice::{dot, UnimodularMap};

pub use parse::parse_with_vars;

/// A lattice point `u ∈ ℤ^n`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(SmallVec<[i64; 4]>);

impl ExponentVector {
    pub fn new(entries: &[i64]) -> Self {
        ExponentVector(SmallVec::from_slice(entries))
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = Self::zero(n);
        e.0[i] = 1;
        e
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, w: &[i64]) -> i64 {
        dot(&self.0, w)
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Componentwise `self <= other`: the monomial `x^self` divides `x^other`
    /// among ordinary polynomials.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(SmallVec::from_vec(v))
    }
}

impl From<&[i64]> for ExponentVector {
    fn from(v: &[i64]) -> Self {
        ExponentVector::new(v)
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// A Laurent polynomial in `nvars` variables with integer coefficients.
///
/// Invariant: no stored coefficient is zero, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(ExponentVector::zero(nvars), c)
    }

    pub fn monomial(exp: ExponentVector, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(ExponentVector::unit(nvars, i), 1)
    }

    /// Builds a polynomial from possibly repeated terms, merging duplicates.
    pub fn from_terms<I, E>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, BigInt)>,
        E: Into<ExponentVector>,
    {
        let mut out = BTreeMap::<ExponentVector, BigInt>::new();
        for (e, c) in terms {
            let e = e.into();
            if e.len() != nvars {
                return Err(Error::VariableMismatch {
                    left: nvars,
                    right: e.len(),
                });
            }
            *out.entry(e).or_default() += c;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(LaurentPoly { nvars, terms: out })
    }

    /// Like [`from_terms`](Self::from_terms) for small integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(&[i64], i64)]) -> Result<Self> {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(e, c)| (ExponentVector::new(e), BigInt::from(*c))),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &ExponentVector) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&ExponentVector::zero(self.nvars))
    }

    /// `true` if the polynomial is a constant (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_zero())
    }

    /// The lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&ExponentVector, &BigInt)> {
        self.terms.last_key_value()
    }

    /// Coefficients sorted ascending; preserved by every monomial substitution.
    pub fn coefficient_multiset(&self) -> Vec<BigInt> {
        let mut cs: Vec<BigInt> = self.terms.values().cloned().collect();
        cs.sort();
        cs
    }

    /// Componentwise minimum of the support (`None` for zero).
    pub fn min_exponents(&self) -> Option<ExponentVector> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            ExponentVector(acc.0.iter().zip(&e.0).map(|(a, b)| *a.min(b)).collect())
        }))
    }

    pub fn max_exponents(&self) -> Option<ExponentVector> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            ExponentVector(acc.0.iter().zip(&e.0).map(|(a, b)| *a.max(b)).collect())
        }))
    }

    /// Sum over variables of the exponent spread `max - min`; the total
    /// degree of the polynomial after clearing monomial denominators.
    pub fn spread_degree(&self) -> u64 {
        match (self.min_exponents(), self.max_exponents()) {
            (Some(lo), Some(hi)) => lo.0.iter().zip(&hi.0).map(|(a, b)| (b - a) as u64).sum(),
            _ => 0,
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_assign_scaled(other, &BigInt::one());
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_assign_scaled(other, &-BigInt::one());
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self += k * other`.
    fn add_assign_scaled(&mut self, other: &Self, k: &BigInt) {
        for (e, c) in &other.terms {
            add_term(&mut self.terms, e.clone(), c * k);
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        let mut acc: HashMap<ExponentVector, BigInt> =
            HashMap::with_capacity(self.len() * other.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *acc.entry(ea.add(eb)).or_default() += ca * cb;
            }
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = LaurentPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Multiplies by the monomial `x^e`.
    pub fn shift(&self, e: &ExponentVector) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(u, c)| (u.add(e), c.clone()))
                .collect(),
        }
    }

    /// Exact division in `ℤ[x^±1]`: returns `Some(t)` with `t·q == self`, or
    /// `None` when no Laurent quotient with integer coefficients exists.
    ///
    /// Both operands are shifted into the polynomial ring (divisibility is
    /// invariant under monomial units) and reduced by the single divisor
    /// under lexicographic order. Since one polynomial is always a Gröbner
    /// basis of its ideal, the remainder vanishes exactly when the division is
    /// exact.
    pub fn try_div_exact(&self, q: &Self) -> Result<Option<Self>> {
        self.check_same(q)?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Some(LaurentPoly::zero(self.nvars)));
        }
        let pmin = self.min_exponents().expect("nonzero");
        let qmin = q.min_exponents().expect("nonzero");
        let p0 = self.shift(&pmin.scale(-1));
        let q0 = q.shift(&qmin.scale(-1));
        let pmax = p0.max_exponents().expect("nonzero");
        let qmax = q0.max_exponents().expect("nonzero");
        // Degrees add in each variable, so the quotient lives in this box.
        let bound = pmax.sub(&qmax);
        if bound.0.iter().any(|&b| b < 0) {
            return Ok(None);
        }
        let (lead_e, lead_c) = q0
            .leading_term()
            .map(|(e, c)| (e.clone(), c.clone()))
            .expect("nonzero");

        let mut rem = p0.terms;
        let mut quot = BTreeMap::new();
        while let Some((e, c)) = rem.last_key_value() {
            if !lead_e.divides(e) {
                return Ok(None);
            }
            let (qc, r) = c.div_rem(&lead_c);
            if !r.is_zero() {
                return Ok(None);
            }
            let s = e.sub(&lead_e);
            if s.0.iter().zip(&bound.0).any(|(a, b)| a > b) {
                return Ok(None);
            }
            for (qe, qcoef) in &q0.terms {
                add_term(&mut rem, qe.add(&s), -(&qc * qcoef));
            }
            quot.insert(s, qc);
        }
        let t = LaurentPoly {
            nvars: self.nvars,
            terms: quot,
        };
        Ok(Some(t.shift(&pmin.sub(&qmin))))
    }

    /// Applies the monomial change of coordinates `x^u ↦ x^(Mᵀu)`.
    ///
    /// For n = 2 and `M = [[a, b], [c, d]]` this is the substitution
    /// `(x, y) ↦ (x^a y^b, x^c y^d)`.
    pub fn monomial_substitute(&self, m: &UnimodularMap) -> Result<Self> {
        if m.dim() != self.nvars {
            return Err(Error::Dimension(format!(
                "map of size {} applied to {} variables",
                m.dim(),
                self.nvars
            )));
        }
        Ok(self.map_exponents(|u| ExponentVector::from(m.apply_transpose(u.as_slice()))))
    }

    /// Relabels exponents through an injective map. Callers guarantee
    /// injectivity; colliding images would be merged.
    pub fn map_exponents(&self, f: impl Fn(&ExponentVector) -> ExponentVector) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            add_term(&mut terms, f(e), c.clone());
        }
        LaurentPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Exact value at a point of the torus.
    pub fn evaluate(&self, p: &RationalPoint) -> Result<BigRational> {
        if p.dim() != self.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: p.dim(),
            });
        }
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut v = BigRational::from_integer(c.clone());
            for (x, &k) in p.coords.iter().zip(e.as_slice()) {
                if k != 0 {
                    v *= x.pow(k as i32);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// `x_i · ∂/∂x_i`, which stays Laurent: `c·x^u ↦ c·u_i·x^u`.
    pub fn log_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::VariableIndex {
                index: i,
                n: self.nvars,
            });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] != 0)
            .map(|(e, c)| (e.clone(), c * e[i]))
            .collect();
        Ok(LaurentPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Largest `m` with `g^m` dividing `self` exactly.
    ///
    /// The search is capped at `spread_degree(self) + 1`; for the zero
    /// polynomial the cap is returned with `saturated = true`.
    pub fn vanishing_order(&self, g: &Self) -> Result<VanishingOrder> {
        self.check_same(g)?;
        if g.is_constant() {
            return Err(Error::ConstantDivisor);
        }
        let cap = self.spread_degree() + 1;
        if self.is_zero() {
            return Ok(VanishingOrder {
                order: cap,
                saturated: true,
            });
        }
        let mut cur = self.clone();
        let mut order = 0;
        while let Some(next) = cur.try_div_exact(g)? {
            order += 1;
            if order > cap {
                return Err(Error::Internal(format!(
                    "vanishing order exceeded cap {cap} on a nonzero polynomial"
                )));
            }
            cur = next;
        }
        Ok(VanishingOrder {
            order,
            saturated: false,
        })
    }

    /// Serializable term list in ascending term order.
    pub fn to_terms_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson {
                c: c.to_string(),
                e: e.as_slice().to_vec(),
            })
            .collect()
    }

    pub fn from_terms_json(nvars: usize, terms: &[TermJson]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|t| {
                let c: BigInt =
                    t.c.parse()
                        .map_err(|_| Error::Invalid(format!("bad coefficient {:?}", t.c)))?;
                Ok((ExponentVector::new(&t.e), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(nvars, parsed)
    }

    /// Parses the text grammar with an explicit variable count.
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        parse::parse(text, Some(nvars))
    }
}

fn add_term(terms: &mut BTreeMap<ExponentVector, BigInt>, e: ExponentVector, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = Error;
    /// Parses the text grammar, inferring the variable count from the
    /// highest variable mentioned.
    fn from_str(s: &str) -> Result<Self> {
        parse::parse(s, None)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            /// Panics on mismatched variable counts; use the `try_` form to
            /// handle that case.
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$f(rhs).expect("variable count mismatch")
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs).expect("variable count mismatch")
            }
        }
    };
}

impl_binop!(Add, add, try_add);
impl_binop!(Sub, sub, try_sub);
impl_binop!(Mul, mul, try_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-BigInt::one())
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Variable names used for printing: `x, y, z` up to three variables,
/// `x1..xn` beyond.
pub fn variable_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for LaurentPoly {
    /// Prints terms from the leading (lexicographically largest) term down,
    /// in the same grammar accepted by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = variable_names(self.nvars);
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || e.is_zero() {
                factors.push(mag.to_string());
            }
            for (name, &k) in names.iter().zip(e.as_slice()) {
                match k {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// One term in the JSON term-list format: `{"c": "<decimal>", "e": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<i64>,
}

/// JSON wrapper for a polynomial with its variable count declared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

impl From<&LaurentPoly> for PolyJson {
    fn from(p: &LaurentPoly) -> Self {
        PolyJson {
            n: p.nvars,
            terms: p.to_terms_json(),
        }
    }
}

impl TryFrom<&PolyJson> for LaurentPoly {
    type Error = Error;
    fn try_from(j: &PolyJson) -> Result<Self> {
        LaurentPoly::from_terms_json(j.n, &j.terms)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        LaurentPoly::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// Result of [`LaurentPoly::vanishing_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingOrder {
    pub order: u64,
    /// Set when the input was zero and `order` is the cap, not a true order.
    pub saturated: bool,
}

/// A point of the algebraic torus with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    coords: Vec<BigRational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if let Some(i) = coords.iter().position(|c| c.is_zero()) {
            return Err(Error::ZeroCoordinate(i));
        }
        Ok(RationalPoint { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `numerator · factor^(-power)`, kept reduced: when `power > 0` the factor
/// does not divide the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedPoly {
    numerator: LaurentPoly,
    factor: LaurentPoly,
    power: u32,
}

impl LocalizedPoly {
    /// Builds the quotient and cancels as many copies of `factor` as divide
    /// the numerator.
    pub fn new(numerator: LaurentPoly, factor: LaurentPoly, power: u32) -> Result<Self> {
        if factor.constant_term() != BigInt::one() {
            return Err(Error::BadFactor);
        }
        let mut num = numerator;
        let mut m = power;
        while m > 0 {
            match num.try_div_exact(&factor)? {
                Some(q) => {
                    num = q;
                    m -= 1;
                }
                None => break,
            }
        }
        if num.is_zero() {
            m = 0;
        }
        Ok(LocalizedPoly {
            numerator: num,
            factor,
            power: m,
        })
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn factor(&self) -> &LaurentPoly {
        &self.factor
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn is_laurent(&self) -> bool {
        self.power == 0
    }

    /// Value at a point, `None` where the factor vanishes.
    pub fn evaluate(&self, p: &RationalPoint) -> Result<Option<BigRational>> {
        let den = self.factor.evaluate(p)?;
        if den.is_zero() && self.power > 0 {
            return Ok(None);
        }
        Ok(Some(
            self.numerator.evaluate(p)? / den.pow(self.power as i32),
        ))
    }
}

impl fmt::Display for LocalizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power == 0 {
            write!(f, "{}", self.numerator)
        } else if self.power == 1 {
            write!(f, "({}) / ({})", self.numerator, self.factor)
        } else {
            write!(f, "({}) / ({})^{}", self.numerator, self.factor, self.power)
        }
    }
}

impl Serialize for LocalizedPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LocalizedPoly", 4)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("numerator", &self.numerator)?;
        st.serialize_field("factor", &self.factor)?;
        st.serialize_field("power", &self.power)?;
        st.end()
    }
}

/// The non-Laurent outcome of a mutation: the total is
/// `laurent_part + witness`, and the witness is a reduced fraction with a
/// genuine pole along the factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonLaurent {
    pub laurent_part: LaurentPoly,
    pub witness: LocalizedPoly,
}

impl NonLaurent {
    pub fn evaluate(&self, p: &RationalPoint) -> Result<Option<BigRational>> {
        Ok(self
            .witness
            .evaluate(p)?
            .map(|w| w + self.laurent_part.evaluate(p).expect("same dimension")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutated {
    Laurent(LaurentPoly),
    NonLaurent(NonLaurent),
}

impl Mutated {
    pub fn is_laurent(&self) -> bool {
        matches!(self, Mutated::Laurent(_))
    }

    pub fn laurent(self) -> Option<LaurentPoly> {
        match self {
            Mutated::Laurent(p) => Some(p),
            Mutated::NonLaurent(_) => None,
        }
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        match self {
            Mutated::Laurent(p) => Some(p),
            Mutated::NonLaurent(_) => None,
        }
    }
}

/// Substitutes `x^u ↦ x^u · factor^(-⟨u, weight⟩)` in every term of `w`.
///
/// Terms of nonpositive weight are multiplied out; terms of positive weight
/// are collected over `factor^M` (M the largest weight) and the Laurent
/// question is settled by up to M exact divisions.
pub fn localized_mutate(w: &LaurentPoly, factor: &LaurentPoly, weight: &[i64]) -> Result<Mutated> {
    w.check_same(factor)?;
    if weight.len() != w.nvars {
        return Err(Error::Dimension(format!(
            "weight of length {} for {} variables",
            weight.len(),
            w.nvars
        )));
    }
    if factor.constant_term() != BigInt::one() {
        return Err(Error::BadFactor);
    }
    let n = w.nvars;

    // group terms by weight
    let mut groups: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    for (e, c) in &w.terms {
        let g = groups
            .entry(e.dot(weight))
            .or_insert_with(|| LaurentPoly::zero(n));
        g.terms.insert(e.clone(), c.clone());
    }

    // Horner in f: sum over k <= 0 of G_k f^(-k)
    let mut laurent = LaurentPoly::zero(n);
    let min_w = groups.keys().next().copied().unwrap_or(0).min(0);
    for k in min_w..=0 {
        laurent = laurent.mul_unchecked(factor);
        if let Some(g) = groups.get(&k) {
            laurent.add_assign_scaled(g, &BigInt::one());
        }
    }

    let max_w = groups.keys().next_back().copied().unwrap_or(0);
    if max_w <= 0 {
        return Ok(Mutated::Laurent(laurent));
    }
    // positive weights: P = sum_k G_k f^(M-k), total = P / f^M
    let mut numer = LaurentPoly::zero(n);
    for k in 1..=max_w {
        numer = numer.mul_unchecked(factor);
        if let Some(g) = groups.get(&k) {
            numer.add_assign_scaled(g, &BigInt::one());
        }
    }
    let local = LocalizedPoly::new(numer, factor.clone(), max_w as u32)?;
    if local.is_laurent() {
        let mut total = laurent;
        total.add_assign_scaled(&local.numerator, &BigInt::one());
        Ok(Mutated::Laurent(total))
    } else {
        Ok(Mutated::NonLaurent(NonLaurent {
            laurent_part: laurent,
            witness: local,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, 2).unwrap()
    }

    fn p3(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, 3).unwrap()
    }

    #[test]
    fn ring_op_examples() {
        assert_eq!(p("x + y") * p("x - y"), p("x^2 - y^2"));
        assert_eq!(p("1 + x + y").pow(0), LaurentPoly::one(2));
        let e = p("1+x").pow(2) * p("1+y").pow(2) * p("x^-1*y^-1");
        assert_eq!(e.len(), 9);
        let cs: Vec<i64> = e
            .coefficient_multiset()
            .iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        assert_eq!(cs, vec![1, 1, 1, 1, 2, 2, 2, 2, 4]);
    }

    #[test]
    fn mismatched_variable_counts_are_rejected() {
        let a = LaurentPoly::var(2, 0);
        let b = LaurentPoly::var(3, 0);
        assert!(matches!(a.try_add(&b), Err(Error::VariableMismatch { .. })));
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_div_exact(&b).is_err());
    }

    #[test]
    fn division_examples() {
        assert_eq!(
            p("x + y").try_div_exact(&p("1 + x*y^-1")).unwrap(),
            Some(p("y"))
        );
        assert_eq!(p("1 + x + y").try_div_exact(&p("1 + x")).unwrap(), None);
        assert_eq!(
            p3("x^-1 + z").try_div_exact(&p3("1 + x*z")).unwrap(),
            Some(p3("x^-1"))
        );
        assert_eq!(
            p("x").try_div_exact(&LaurentPoly::zero(2)),
            Err(Error::DivisionByZero)
        );
        // leading coefficient 2 with a non-integral quotient
        assert_eq!(p("1 + x").try_div_exact(&p("2 + 2*x")).unwrap(), None);
        assert_eq!(
            p("2 + 2*x").try_div_exact(&p("1 + x")).unwrap(),
            Some(p("2"))
        );
        assert_eq!(p("0").try_div_exact(&p("1 + x")).unwrap(), Some(p("0")));
    }

    #[test]
    fn localized_mutation_of_cp2_along_diagonal() {
        let w = p("x + y + x^-1*y^-1");
        let f = p("1 + x*y^-1");
        let got = localized_mutate(&w, &f, &[1, 1]).unwrap();
        let expected = p("y") + p("x + y").pow(2) * p("x^-1*y^-3");
        assert_eq!(got, Mutated::Laurent(expected));
    }

    #[test]
    fn zero_weight_is_identity() {
        let w = p("3*x^2 - y + 7 + x^-1*y^5");
        let f = p("1 + x");
        assert_eq!(
            localized_mutate(&w, &f, &[0, 0]).unwrap(),
            Mutated::Laurent(w)
        );
    }

    #[test]
    fn prism_vertex_mutation_is_not_laurent() {
        let w = p3("x^-1 + y^-1 + z + x*y + z^-1");
        let f = p3("1 + x*z");
        match localized_mutate(&w, &f, &[-1, -1, 1]).unwrap() {
            Mutated::NonLaurent(nl) => {
                assert_eq!(nl.witness.numerator(), &p3("x^-1 + y^-1 + z"));
                assert_eq!(nl.witness.power(), 1);
                assert_eq!(nl.witness.factor(), &f);
                assert_eq!(
                    nl.laurent_part,
                    p3("x*y") * p3("1 + x*z").pow(2) + p3("z^-1") * p3("1 + x*z")
                );
            }
            other => panic!("expected NonLaurent, got {other:?}"),
        }
    }

    #[test]
    fn bad_factor_rejected() {
        let w = p("x");
        assert_eq!(
            localized_mutate(&w, &p("2 + x"), &[1, 0]),
            Err(Error::BadFactor)
        );
    }

    #[test]
    fn substitution_examples() {
        let swap = UnimodularMap::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(p("x + y").monomial_substitute(&swap).unwrap(), p("x + y"));
        let shear = UnimodularMap::new(vec![vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(p("x").monomial_substitute(&shear).unwrap(), p("x*y"));
        assert!(p("x")
            .monomial_substitute(&UnimodularMap::identity(3))
            .is_err());
    }

    #[test]
    fn evaluation_examples() {
        let one = RationalPoint::from_ints(&[1, 1]).unwrap();
        let cases = [
            ("(1+x+y)^3*x^-1*y^-1 - 6", 21),
            ("(1+x+y)^4*x^-1*y^-1 - 12", 69),
            ("(1+x+y)^6*x^-1*y^-2 - 60", 669),
        ];
        for (s, v) in cases {
            assert_eq!(
                p(s).evaluate(&one).unwrap(),
                BigRational::from_integer(v.into())
            );
        }
        assert_eq!(
            RationalPoint::from_ints(&[1, 0]),
            Err(Error::ZeroCoordinate(1))
        );
        let half = RationalPoint::new(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-3).into(), 1.into()),
        ])
        .unwrap();
        // x^-1 y^2 at (1/2, -3) = 18
        assert_eq!(
            p("x^-1*y^2").evaluate(&half).unwrap(),
            BigRational::from_integer(18.into())
        );
    }

    #[test]
    fn log_derivative_examples() {
        assert_eq!(p("x + y").log_derivative(0).unwrap(), p("x"));
        assert_eq!(p("x^-1*y^-1").log_derivative(0).unwrap(), p("-x^-1*y^-1"));
        let w = p("(1+x+y)^3*x^-1*y^-1");
        let g = p("1+x+y");
        for i in 0..2 {
            assert!(w
                .log_derivative(i)
                .unwrap()
                .try_div_exact(&g)
                .unwrap()
                .is_some());
        }
        assert!(matches!(
            w.log_derivative(2),
            Err(Error::VariableIndex { .. })
        ));
    }

    #[test]
    fn vanishing_order_examples() {
        let g = p("1 + x + y");
        assert_eq!(
            p("(1+x+y)^3*x^-1*y^-1").vanishing_order(&g).unwrap().order,
            3
        );
        assert_eq!(
            p("(1+x+y)^6*x^-1*y^-2").vanishing_order(&g).unwrap().order,
            6
        );
        assert_eq!(p("x + y").vanishing_order(&g).unwrap().order, 0);
        let z = LaurentPoly::zero(2).vanishing_order(&g).unwrap();
        assert!(z.saturated);
        assert_eq!(p("x").vanishing_order(&p("5")), Err(Error::ConstantDivisor));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "x + y + x^-1*y^-1",
            "-3*x^2*y + 7 - y^-4",
            "0",
            "x1*x4^-2 - 2",
        ] {
            let poly: LaurentPoly = s.parse().unwrap();
            let back: LaurentPoly = LaurentPoly::parse(&poly.to_string(), poly.nvars()).unwrap();
            assert_eq!(poly, back, "{s}");
        }
    }

    #[test]
    fn localized_poly_reduces_common_factors() {
        let f = p("1 + x");
        let l = LocalizedPoly::new(p("(1+x)^2*y"), f.clone(), 3).unwrap();
        assert_eq!(l.numerator(), &p("y"));
        assert_eq!(l.power(), 1);
        let l = LocalizedPoly::new(p("(1+x)^2*y"), f, 2).unwrap();
        assert!(l.is_laurent());
    }
}
