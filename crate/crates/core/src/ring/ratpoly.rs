//! Dense univariate polynomials over Q.
//!
//! This is the workhorse behind cyclotomic arithmetic: elements of
//! Q(zeta_e) are residues modulo Phi_e, and inversion is an extended
//! Euclidean computation here. Coefficients are `BigRational`, index i
//! holds the coefficient of x^i, and the top coefficient is never zero.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly(pub Vec<BigRational>);

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly(Vec::new())
    }

    pub fn one() -> Self {
        RatPoly(vec![BigRational::one()])
    }

    pub fn x() -> Self {
        RatPoly(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = RatPoly(vec![c]);
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = RatPoly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with deg 0 = 0 by convention of returning None for zero.
    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        RatPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        RatPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        RatPoly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    /// Quotient and remainder; panics if `div` is zero.
    pub fn divrem(&self, div: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let ddeg = div.0.len() - 1;
        let dlead = div.lead();
        let mut rem = self.0.clone();
        if rem.len() <= ddeg {
            return (RatPoly::zero(), self.clone());
        }
        let mut quo = vec![BigRational::zero(); rem.len() - ddeg];
        while rem.len() > ddeg && !rem.is_empty() {
            let lead = rem.last().unwrap().clone();
            if lead.is_zero() {
                rem.pop();
                continue;
            }
            let k = rem.len() - 1 - ddeg;
            let factor = lead / dlead.clone();
            for i in 0..=ddeg {
                let t = &div.0[i] * &factor;
                rem[k + i] -= t;
            }
            quo[k] = factor;
            // top coefficient is exactly cancelled
            rem.pop();
            while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
                rem.pop();
            }
        }
        (RatPoly::from_coeffs(quo), RatPoly::from_coeffs(rem))
    }

    pub fn rem(&self, div: &RatPoly) -> RatPoly {
        self.divrem(div).1
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let inv = BigRational::one() / self.lead();
        self.scale(&inv)
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
    pub fn xgcd(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let mut s0 = RatPoly::one();
        let mut s1 = RatPoly::zero();
        let mut t0 = RatPoly::zero();
        let mut t1 = RatPoly::one();
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (RatPoly::zero(), RatPoly::zero(), RatPoly::zero());
        }
        let inv = BigRational::one() / r0.lead();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> RatPoly {
        if self.0.len() <= 1 {
            return RatPoly::zero();
        }
        let mut out = Vec::with_capacity(self.0.len() - 1);
        for (i, c) in self.0.iter().enumerate().skip(1) {
            out.push(c * BigRational::from(BigInt::from(i)));
        }
        RatPoly::from_coeffs(out)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// All rational roots, with multiplicity stripped (each root listed once).
    ///
    /// Scales to an integer polynomial and enumerates divisors of the
    /// constant and leading coefficients, so it is only meant for the
    /// desk-scale polynomials this crate produces.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        if self.is_zero() {
            return roots;
        }
        let mut p = self.clone();
        if p.coeff(0).is_zero() {
            roots.push(BigRational::zero());
            while p.coeff(0).is_zero() && p.degree().unwrap_or(0) > 0 {
                p = p.divrem(&RatPoly::x()).0;
            }
        }
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        // clear denominators
        let mut den = BigInt::one();
        for c in &p.0 {
            den = num::integer::lcm(den, c.denom().clone());
        }
        let ints: Vec<BigInt> = p.0.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect();
        let c0 = ints[0].clone();
        let cl = ints.last().unwrap().clone();
        let num_divs = divisors(&c0.abs());
        let den_divs = divisors(&cl.abs());
        for a in &num_divs {
            for b in &den_divs {
                for sign in [1i32, -1] {
                    let cand = BigRational::new(a.clone() * BigInt::from(sign), b.clone());
                    if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand.clone());
                    }
                }
            }
        }
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = vec![BigInt::one()];
    let mut rest = n.clone();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        if (&rest % &p).is_zero() {
            let mut powers = vec![BigInt::one()];
            while (&rest % &p).is_zero() {
                rest /= &p;
                let next = powers.last().unwrap() * &p;
                powers.push(next);
            }
            let mut next_out = Vec::new();
            for d in &out {
                for q in &powers {
                    next_out.push(d * q);
                }
            }
            out = next_out;
        }
        p += 1u32;
    }
    if rest > BigInt::one() {
        let mut next_out = Vec::new();
        for d in &out {
            next_out.push(d.clone());
            next_out.push(d * &rest);
        }
        out = next_out;
    }
    out.sort();
    out.dedup();
    out
}

/// The e-th cyclotomic polynomial over Q, computed by dividing x^e - 1 by
/// the cyclotomic polynomials of the proper divisors of e. Results are
/// memoized process-wide.
pub fn cyclotomic_poly(e: u32) -> RatPoly {
    assert!(e >= 1, "cyclotomic index must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u32, RatPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&e) {
        return hit.clone();
    }
    let mut xn_1 = vec![BigRational::zero(); e as usize + 1];
    xn_1[0] = -BigRational::one();
    xn_1[e as usize] = BigRational::one();
    let mut num = RatPoly::from_coeffs(xn_1);
    for d in 1..e {
        if e.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d);
            let (q, r) = num.divrem(&phi_d);
            assert!(r.is_zero(), "cyclotomic division left a remainder");
            num = q;
        }
    }
    cache.lock().unwrap().insert(e, num.clone());
    num
}
