#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lgmut_core::{ExponentVector, LaurentPoly, RationalPoint, UnimodularMap};

pub const DEFAULT_SEED: u64 = 0x5eed_1957;

/// Seed for randomized tests, overridable with `LGMUT_PT_SEED`.
pub fn pt_seed() -> u64 {
    std::env::var("LGMUT_PT_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(pt_seed());
    r.set_stream(stream);
    r
}

pub fn random_poly(
    r: &mut impl Rng,
    n: usize,
    max_terms: usize,
    exp: i64,
    coeff: i64,
) -> LaurentPoly {
    let count = r.gen_range(1..=max_terms);
    let terms: Vec<(ExponentVector, BigInt)> = (0..count)
        .map(|_| {
            let e: Vec<i64> = (0..n).map(|_| r.gen_range(-exp..=exp)).collect();
            let mut c = 0;
            while c == 0 {
                c = r.gen_range(-coeff..=coeff);
            }
            (ExponentVector::new(&e), BigInt::from(c))
        })
        .collect();
    LaurentPoly::from_terms(n, terms).unwrap()
}

pub fn random_nonzero_poly(
    r: &mut impl Rng,
    n: usize,
    max_terms: usize,
    exp: i64,
    coeff: i64,
) -> LaurentPoly {
    loop {
        let p = random_poly(r, n, max_terms, exp, coeff);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A product of random elementary matrices and sign changes.
pub fn random_unimodular(r: &mut impl Rng, n: usize, steps: usize) -> UnimodularMap {
    let mut m = UnimodularMap::identity(n);
    for _ in 0..steps {
        let i = r.gen_range(0..n);
        let mut j = r.gen_range(0..n);
        while n > 1 && j == i {
            j = r.gen_range(0..n);
        }
        let e = if n == 1 || r.gen_bool(0.2) {
            let mut rows: Vec<Vec<i64>> = UnimodularMap::identity(n).rows().to_vec();
            rows[i][i] = -1;
            UnimodularMap::new(rows).unwrap()
        } else {
            UnimodularMap::elementary(n, i, j, r.gen_range(-2..=2))
        };
        m = e.compose(&m);
    }
    m
}

pub fn random_point(r: &mut impl Rng, n: usize) -> RationalPoint {
    let coords = (0..n)
        .map(|_| {
            let mut num = 0;
            while num == 0 {
                num = r.gen_range(-7i64..=7);
            }
            BigRational::new(num.into(), r.gen_range(1i64..=5).into())
        })
        .collect();
    RationalPoint::new(coords).unwrap()
}

/// Independent exact-division oracle: normalize both sides to polynomials
/// prime to every variable, Kronecker-substitute, divide as univariate
/// polynomials over ℚ and decode.
pub fn oracle_div(p: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    assert!(!b.is_zero());
    let n = p.nvars();
    if p.is_zero() {
        return Some(LaurentPoly::zero(n));
    }
    let pmin = p.min_exponents().unwrap();
    let bmin = b.min_exponents().unwrap();
    let pn = p.shift(&pmin.scale(-1));
    let bn = b.shift(&bmin.scale(-1));
    let pmax = pn.max_exponents().unwrap();
    let base: i64 = pmax.as_slice().iter().max().copied().unwrap_or(0) + 1;
    let encode =
        |e: &[i64]| -> usize { e.iter().rev().fold(0i64, |acc, &x| acc * base + x) as usize };
    let uni = |q: &LaurentPoly| -> Vec<BigRational> {
        let deg = q.terms().map(|(e, _)| encode(e.as_slice())).max().unwrap();
        let mut v = vec![BigRational::zero(); deg + 1];
        for (e, c) in q.terms() {
            v[encode(e.as_slice())] = BigRational::from_integer(c.clone());
        }
        v
    };
    let mut rem = uni(&pn);
    let div = uni(&bn);
    if div.len() > rem.len() {
        return None;
    }
    let lead = div.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - div.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + div.len() - 1] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, d) in div.iter().enumerate() {
            let t = &c * d;
            rem[i + j] -= t;
        }
        quot[i] = c;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut terms = Vec::new();
    for (k, c) in quot.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !c.is_integer() {
            return None;
        }
        let mut e = Vec::with_capacity(n);
        let mut rest = k as i64;
        for _ in 0..n {
            e.push(rest % base);
            rest /= base;
        }
        terms.push((ExponentVector::new(&e), c.to_integer()));
    }
    let q = LaurentPoly::from_terms(n, terms).unwrap();
    if q.try_mul(&bn).unwrap() != pn {
        return None;
    }
    Some(q.shift(&pmin.sub(&bmin)))
}
