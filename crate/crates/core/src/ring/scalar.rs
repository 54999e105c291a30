//! Canonical elements of the supported coefficient rings.
//!
//! Every representation is normalized on construction: rationals are
//! reduced, sparse polynomials carry no zero terms, fractions are
//! gcd-reduced with a unit-normalized denominator (monic over a field
//! base, positive leading coefficient over Z), cyclotomic elements are
//! reduced modulo Phi_e, and prime-field residues live in [0, p).
//! Equality of scalars is therefore plain structural equality.

use super::gcd;
use super::ratpoly::{cyclotomic_poly, RatPoly};
use super::{inv_mod, mul_mod, Ring};
use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub type TermMap = BTreeMap<Vec<i64>, Value>;

/// Raw element data; interpretation depends on the ring descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Int(BigInt),
    Rat(BigRational),
    /// Sparse terms: exponent vector (one entry per ring variable) to a
    /// nonzero coefficient in the base ring.
    Poly(TermMap),
    /// Reduced fraction num/den over the base domain.
    Frac(Box<Value>, Box<Value>),
    /// Coefficients of 1, z, z^2, ... modulo Phi_e, trailing zeros trimmed.
    Cyc(Vec<BigRational>),
    Mod(u64),
}

/// An element of a specific ring, always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: Ring,
    value: Value,
}

fn nvars(ring: &Ring) -> usize {
    match ring {
        Ring::Poly { vars, .. } | Ring::Laurent { vars, .. } => vars.len(),
        _ => 0,
    }
}

pub(crate) fn zero_value(ring: &Ring) -> Value {
    match ring {
        Ring::Int => Value::Int(BigInt::zero()),
        Ring::Rat => Value::Rat(BigRational::zero()),
        Ring::Poly { .. } | Ring::Laurent { .. } => Value::Poly(TermMap::new()),
        Ring::Frac { base } => Value::Frac(Box::new(zero_value(base)), Box::new(one_value(base))),
        Ring::Cyclotomic { .. } => Value::Cyc(Vec::new()),
        Ring::Gf { .. } => Value::Mod(0),
    }
}

pub(crate) fn one_value(ring: &Ring) -> Value {
    match ring {
        Ring::Int => Value::Int(BigInt::one()),
        Ring::Rat => Value::Rat(BigRational::one()),
        Ring::Poly { base, vars } | Ring::Laurent { base, vars } => {
            let mut m = TermMap::new();
            m.insert(vec![0; vars.len()], one_value(base));
            Value::Poly(m)
        }
        Ring::Frac { base } => Value::Frac(Box::new(one_value(base)), Box::new(one_value(base))),
        Ring::Cyclotomic { .. } => Value::Cyc(vec![BigRational::one()]),
        Ring::Gf { p } => Value::Mod(1 % p),
    }
}

pub(crate) fn is_zero_value(ring: &Ring, v: &Value) -> bool {
    match (ring, v) {
        (Ring::Int, Value::Int(n)) => n.is_zero(),
        (Ring::Rat, Value::Rat(q)) => q.is_zero(),
        (Ring::Poly { .. } | Ring::Laurent { .. }, Value::Poly(m)) => m.is_empty(),
        (Ring::Frac { base }, Value::Frac(n, _)) => is_zero_value(base, n),
        (Ring::Cyclotomic { .. }, Value::Cyc(c)) => c.is_empty(),
        (Ring::Gf { .. }, Value::Mod(r)) => *r == 0,
        _ => panic!("value shape does not match ring {ring}"),
    }
}

fn poly_normalize(m: &mut TermMap, base: &Ring) {
    m.retain(|_, c| !is_zero_value(base, c));
}

fn reduce_cyc(coeffs: Vec<BigRational>, e: u32) -> Vec<BigRational> {
    let phi = cyclotomic_poly(e);
    let reduced = RatPoly::from_coeffs(coeffs).rem(&phi);
    reduced.0
}

pub(crate) fn v_add(ring: &Ring, a: &Value, b: &Value) -> Value {
    match (ring, a, b) {
        (Ring::Int, Value::Int(x), Value::Int(y)) => Value::Int(x + y),
        (Ring::Rat, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
        (Ring::Gf { p }, Value::Mod(x), Value::Mod(y)) => Value::Mod((x + y) % p),
        (Ring::Cyclotomic { .. }, Value::Cyc(x), Value::Cyc(y)) => {
            let rx = RatPoly::from_coeffs(x.clone());
            let ry = RatPoly::from_coeffs(y.clone());
            Value::Cyc(rx.add(&ry).0)
        }
        (Ring::Poly { base, .. } | Ring::Laurent { base, .. }, Value::Poly(x), Value::Poly(y)) => {
            let mut out = x.clone();
            for (exp, c) in y {
                let entry = out.entry(exp.clone()).or_insert_with(|| zero_value(base));
                *entry = v_add(base, entry, c);
            }
            poly_normalize(&mut out, base);
            Value::Poly(out)
        }
        (Ring::Frac { base }, Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
            let num = v_add(
                base,
                &v_mul(base, n1, d2),
                &v_mul(base, n2, d1),
            );
            let den = v_mul(base, d1, d2);
            let (n, d) = normalize_frac(base, num, den).expect("nonzero denominator");
            Value::Frac(Box::new(n), Box::new(d))
        }
        _ => panic!("value shape does not match ring {ring}"),
    }
}

pub(crate) fn v_neg(ring: &Ring, a: &Value) -> Value {
    match (ring, a) {
        (Ring::Int, Value::Int(x)) => Value::Int(-x),
        (Ring::Rat, Value::Rat(x)) => Value::Rat(-x),
        (Ring::Gf { p }, Value::Mod(x)) => Value::Mod(if *x == 0 { 0 } else { p - x }),
        (Ring::Cyclotomic { .. }, Value::Cyc(x)) => Value::Cyc(x.iter().map(|c| -c).collect()),
        (Ring::Poly { base, .. } | Ring::Laurent { base, .. }, Value::Poly(x)) => {
            Value::Poly(x.iter().map(|(e, c)| (e.clone(), v_neg(base, c))).collect())
        }
        (Ring::Frac { base }, Value::Frac(n, d)) => {
            Value::Frac(Box::new(v_neg(base, n)), d.clone())
        }
        _ => panic!("value shape does not match ring {ring}"),
    }
}

pub(crate) fn v_sub(ring: &Ring, a: &Value, b: &Value) -> Value {
    v_add(ring, a, &v_neg(ring, b))
}

pub(crate) fn v_mul(ring: &Ring, a: &Value, b: &Value) -> Value {
    match (ring, a, b) {
        (Ring::Int, Value::Int(x), Value::Int(y)) => Value::Int(x * y),
        (Ring::Rat, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
        (Ring::Gf { p }, Value::Mod(x), Value::Mod(y)) => Value::Mod(mul_mod(*x, *y, *p)),
        (Ring::Cyclotomic { e, .. }, Value::Cyc(x), Value::Cyc(y)) => {
            let rx = RatPoly::from_coeffs(x.clone());
            let ry = RatPoly::from_coeffs(y.clone());
            Value::Cyc(reduce_cyc(rx.mul(&ry).0, *e))
        }
        (Ring::Poly { base, .. } | Ring::Laurent { base, .. }, Value::Poly(x), Value::Poly(y)) => {
            let mut out = TermMap::new();
            for (e1, c1) in x {
                for (e2, c2) in y {
                    let exp: Vec<i64> = e1.iter().zip(e2.iter()).map(|(u, v)| u + v).collect();
                    let prod = v_mul(base, c1, c2);
                    let entry = out.entry(exp).or_insert_with(|| zero_value(base));
                    *entry = v_add(base, entry, &prod);
                }
            }
            poly_normalize(&mut out, base);
            Value::Poly(out)
        }
        (Ring::Frac { base }, Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
            let num = v_mul(base, n1, n2);
            let den = v_mul(base, d1, d2);
            let (n, d) = normalize_frac(base, num, den).expect("nonzero denominator");
            Value::Frac(Box::new(n), Box::new(d))
        }
        _ => panic!("value shape does not match ring {ring}"),
    }
}

/// Splits a Laurent value into (monomial shift, polynomial part with
/// minimum exponent zero in every variable).
fn strip_monomial(m: &TermMap, n: usize) -> (Vec<i64>, TermMap) {
    if m.is_empty() {
        return (vec![0; n], m.clone());
    }
    let mut shift = vec![i64::MAX; n];
    for exp in m.keys() {
        for (s, e) in shift.iter_mut().zip(exp.iter()) {
            *s = (*s).min(*e);
        }
    }
    let out = m
        .iter()
        .map(|(exp, c)| {
            let e: Vec<i64> = exp.iter().zip(shift.iter()).map(|(a, s)| a - s).collect();
            (e, c.clone())
        })
        .collect();
    (shift, out)
}

fn apply_shift(m: &TermMap, shift: &[i64]) -> TermMap {
    m.iter()
        .map(|(exp, c)| {
            let e: Vec<i64> = exp.iter().zip(shift.iter()).map(|(a, s)| a + s).collect();
            (e, c.clone())
        })
        .collect()
}

/// Canonical form of num/den over a polynomial, Laurent or integer base:
/// gcd-reduced, denominator free of monomial units, monic denominator over
/// a field base and positive leading coefficient over Z.
pub(crate) fn normalize_frac(base: &Ring, num: Value, den: Value) -> Result<(Value, Value)> {
    if is_zero_value(base, &den) {
        return Err(Error::DivisionByZero("zero denominator in fraction".into()));
    }
    if is_zero_value(base, &num) {
        return Ok((zero_value(base), one_value(base)));
    }
    match base {
        Ring::Int => {
            let (Value::Int(n), Value::Int(d)) = (&num, &den) else {
                panic!("integer fraction expected");
            };
            let g = num::integer::gcd(n.clone(), d.clone());
            let mut n = n / &g;
            let mut d = d / &g;
            if d.is_negative() {
                n = -n;
                d = -d;
            }
            Ok((Value::Int(n), Value::Int(d)))
        }
        Ring::Poly { base: b2, .. } | Ring::Laurent { base: b2, .. } => {
            let (Value::Poly(nm), Value::Poly(dm)) = (&num, &den) else {
                panic!("polynomial fraction expected");
            };
            let n = nvars(base);
            let laurent = matches!(base, Ring::Laurent { .. });
            // Work on polynomial parts; remember the numerator's monomial.
            let (nshift, npoly) = strip_monomial(nm, n);
            let (dshift, dpoly) = strip_monomial(dm, n);
            let g = gcd::poly_gcd(b2, &npoly, &dpoly, n);
            let mut npoly = gcd::poly_exact_div(b2, &npoly, &g, n).expect("gcd divides");
            let mut dpoly = gcd::poly_exact_div(b2, &dpoly, &g, n).expect("gcd divides");
            // Unit-normalize the denominator.
            let lead = dpoly
                .iter()
                .next_back()
                .map(|(_, c)| c.clone())
                .expect("nonzero denominator");
            match b2.as_ref() {
                Ring::Int => {
                    // divide num and den by the integer content gcd, fix sign
                    let ncont = gcd::int_content(&npoly);
                    let dcont = gcd::int_content(&dpoly);
                    let g = num::integer::gcd(ncont, dcont);
                    if !g.is_one() {
                        npoly = gcd::int_scale_down(&npoly, &g);
                        dpoly = gcd::int_scale_down(&dpoly, &g);
                    }
                    if let Value::Int(l) = lead {
                        if l.is_negative() {
                            npoly = npoly.iter().map(|(e, c)| (e.clone(), v_neg(b2, c))).collect();
                            dpoly = dpoly.iter().map(|(e, c)| (e.clone(), v_neg(b2, c))).collect();
                        }
                    }
                }
                field => {
                    let inv = v_try_div(field, &one_value(field), &lead)?;
                    npoly = npoly
                        .iter()
                        .map(|(e, c)| (e.clone(), v_mul(field, c, &inv)))
                        .collect();
                    dpoly = dpoly
                        .iter()
                        .map(|(e, c)| (e.clone(), v_mul(field, c, &inv)))
                        .collect();
                }
            }
            // Reattach monomials: in a Laurent ring the denominator stays a
            // plain polynomial and the whole shift moves to the numerator;
            // in a polynomial ring monomials cannot be units, so shifts are
            // cancelled against each other componentwise.
            if laurent {
                let net: Vec<i64> = nshift.iter().zip(dshift.iter()).map(|(a, b)| a - b).collect();
                Ok((Value::Poly(apply_shift(&npoly, &net)), Value::Poly(dpoly)))
            } else {
                let mut nleft = vec![0i64; n];
                let mut dleft = vec![0i64; n];
                for i in 0..n {
                    let net = nshift[i] - dshift[i];
                    if net >= 0 {
                        nleft[i] = net;
                    } else {
                        dleft[i] = -net;
                    }
                }
                Ok((
                    Value::Poly(apply_shift(&npoly, &nleft)),
                    Value::Poly(apply_shift(&dpoly, &dleft)),
                ))
            }
        }
        other => panic!("fraction base {other} is not a supported domain"),
    }
}

pub(crate) fn v_inv(ring: &Ring, a: &Value) -> Result<Value> {
    if is_zero_value(ring, a) {
        return Err(Error::DivisionByZero(format!("inverse of zero in {ring}")));
    }
    match (ring, a) {
        (Ring::Rat, Value::Rat(x)) => Ok(Value::Rat(BigRational::one() / x)),
        (Ring::Gf { p }, Value::Mod(x)) => Ok(Value::Mod(inv_mod(*x, *p)?)),
        (Ring::Cyclotomic { e, .. }, Value::Cyc(x)) => {
            let phi = cyclotomic_poly(*e);
            let (g, s, _) = RatPoly::xgcd(&RatPoly::from_coeffs(x.clone()), &phi);
            if g.degree() != Some(0) {
                return Err(Error::Internal(format!(
                    "element shares a factor with Phi_{e}; the descriptor is not a field"
                )));
            }
            Ok(Value::Cyc(reduce_cyc(s.0, *e)))
        }
        (Ring::Frac { base }, Value::Frac(n, d)) => {
            let (nn, dd) = normalize_frac(base, (**d).clone(), (**n).clone())?;
            Ok(Value::Frac(Box::new(nn), Box::new(dd)))
        }
        (Ring::Int, Value::Int(x)) => {
            if x.is_one() || (-x).is_one() {
                Ok(Value::Int(x.clone()))
            } else {
                Err(Error::InexactDivision(format!("{x} is not a unit in ZZ")))
            }
        }
        (Ring::Poly { .. } | Ring::Laurent { .. }, _) => {
            v_try_div(ring, &one_value(ring), a)
        }
        _ => panic!("value shape does not match ring {ring}"),
    }
}

pub(crate) fn v_try_div(ring: &Ring, a: &Value, b: &Value) -> Result<Value> {
    if is_zero_value(ring, b) {
        return Err(Error::DivisionByZero(format!("division by zero in {ring}")));
    }
    if is_zero_value(ring, a) {
        return Ok(zero_value(ring));
    }
    match ring {
        Ring::Int => {
            let (Value::Int(x), Value::Int(y)) = (a, b) else { unreachable!() };
            let (q, r) = num::integer::div_rem(x.clone(), y.clone());
            if r.is_zero() {
                Ok(Value::Int(q))
            } else {
                Err(Error::InexactDivision(format!("{y} does not divide {x} in ZZ")))
            }
        }
        Ring::Rat | Ring::Gf { .. } | Ring::Cyclotomic { .. } | Ring::Frac { .. } => {
            let binv = v_inv(ring, b)?;
            Ok(v_mul(ring, a, &binv))
        }
        Ring::Poly { base, .. } | Ring::Laurent { base, .. } => {
            let (Value::Poly(x), Value::Poly(y)) = (a, b) else { unreachable!() };
            let n = nvars(ring);
            let laurent = matches!(ring, Ring::Laurent { .. });
            let (xs, xp) = strip_monomial(x, n);
            let (ys, yp) = strip_monomial(y, n);
            let q = gcd::poly_exact_div(base, &xp, &yp, n).ok_or_else(|| {
                Error::InexactDivision(format!(
                    "polynomial division is not exact in {ring}"
                ))
            })?;
            let shift: Vec<i64> = xs.iter().zip(ys.iter()).map(|(u, v)| u - v).collect();
            if !laurent && shift.iter().any(|s| *s < 0) {
                return Err(Error::InexactDivision(format!(
                    "monomial does not divide in {ring}"
                )));
            }
            Ok(Value::Poly(apply_shift(&q, &shift)))
        }
    }
}

fn cmp_rat(a: &BigRational, b: &BigRational) -> Ordering {
    // nonnegative values first in ascending order, then negatives by
    // ascending absolute value: 0 < 1/2 < 1 < 2 < ... < -1/2 < -1 < ...
    match (a.is_negative(), b.is_negative()) {
        (false, true) => Ordering::Less,
        (true, false) => Ordering::Greater,
        (false, false) => a.cmp(b),
        (true, true) => b.cmp(a),
    }
}

/// Deterministic total order on values of the same ring, used for the
/// canonical ordering of simple modules. Not a numeric order.
pub(crate) fn cmp_value(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => match (x.is_negative(), y.is_negative()) {
            (false, true) => Ordering::Less,
            (true, false) => Ordering::Greater,
            (false, false) => x.cmp(y),
            (true, true) => y.cmp(x),
        },
        (Value::Rat(x), Value::Rat(y)) => cmp_rat(x, y),
        (Value::Mod(x), Value::Mod(y)) => x.cmp(y),
        (Value::Cyc(x), Value::Cyc(y)) => {
            let n = x.len().max(y.len());
            let zero = BigRational::zero();
            for i in 0..n {
                let cx = x.get(i).unwrap_or(&zero);
                let cy = y.get(i).unwrap_or(&zero);
                let ord = cmp_rat(cx, cy);
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        }
        (Value::Poly(x), Value::Poly(y)) => {
            let keys: std::collections::BTreeSet<&Vec<i64>> = x.keys().chain(y.keys()).collect();
            for k in keys.iter().rev() {
                match (x.get(*k), y.get(*k)) {
                    (Some(cx), Some(cy)) => {
                        let ord = cmp_value(cx, cy);
                        if ord != Ordering::Equal {
                            return ord;
                        }
                    }
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (None, None) => unreachable!(),
                }
            }
            Ordering::Equal
        }
        (Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
            cmp_value(n1, n2).then_with(|| cmp_value(d1, d2))
        }
        _ => panic!("cannot order values of different shapes"),
    }
}

impl Scalar {
    pub fn new_unchecked(ring: Ring, value: Value) -> Scalar {
        Scalar { ring, value }
    }

    pub fn zero(ring: &Ring) -> Scalar {
        Scalar { ring: ring.clone(), value: zero_value(ring) }
    }

    pub fn one(ring: &Ring) -> Scalar {
        Scalar { ring: ring.clone(), value: one_value(ring) }
    }

    pub fn from_int(ring: &Ring, n: i64) -> Scalar {
        Scalar::from_bigint(ring, &BigInt::from(n))
    }

    pub fn from_bigint(ring: &Ring, n: &BigInt) -> Scalar {
        let value = match ring {
            Ring::Int => Value::Int(n.clone()),
            Ring::Rat => Value::Rat(BigRational::from(n.clone())),
            Ring::Gf { p } => {
                let m = BigInt::from(*p);
                let mut r = n % &m;
                if r.is_negative() {
                    r += &m;
                }
                Value::Mod(r.try_into().expect("reduced residue fits in u64"))
            }
            Ring::Cyclotomic { .. } => {
                if n.is_zero() {
                    Value::Cyc(Vec::new())
                } else {
                    Value::Cyc(vec![BigRational::from(n.clone())])
                }
            }
            Ring::Poly { base, vars } | Ring::Laurent { base, vars } => {
                if n.is_zero() {
                    Value::Poly(TermMap::new())
                } else {
                    let mut m = TermMap::new();
                    let c = Scalar::from_bigint(base, n).value;
                    m.insert(vec![0; vars.len()], c);
                    Value::Poly(m)
                }
            }
            Ring::Frac { base } => Value::Frac(
                Box::new(Scalar::from_bigint(base, n).value),
                Box::new(one_value(base)),
            ),
        };
        Scalar { ring: ring.clone(), value }
    }

    pub fn from_rational(ring: &Ring, q: &BigRational) -> Result<Scalar> {
        if q.denom().is_one() {
            return Ok(Scalar::from_bigint(ring, q.numer()));
        }
        let num = Scalar::from_bigint(ring, q.numer());
        let den = Scalar::from_bigint(ring, q.denom());
        num.try_div(&den)
    }

    /// The generator named `name` inside this ring, as a scalar.
    pub fn var(ring: &Ring, name: &str) -> Result<Scalar> {
        match ring {
            Ring::Poly { base, vars } | Ring::Laurent { base, vars } => {
                if let Some(i) = vars.iter().position(|v| v == name) {
                    let mut exp = vec![0i64; vars.len()];
                    exp[i] = 1;
                    let mut m = TermMap::new();
                    m.insert(exp, one_value(base));
                    Ok(Scalar { ring: ring.clone(), value: Value::Poly(m) })
                } else {
                    let inner = Scalar::var(base, name)?;
                    let mut m = TermMap::new();
                    m.insert(vec![0; vars.len()], inner.value);
                    Ok(Scalar { ring: ring.clone(), value: Value::Poly(m) })
                }
            }
            Ring::Frac { base } => {
                let inner = Scalar::var(base, name)?;
                Ok(Scalar {
                    ring: ring.clone(),
                    value: Value::Frac(Box::new(inner.value), Box::new(one_value(base))),
                })
            }
            Ring::Cyclotomic { e, var } if var == name => {
                let coeffs = reduce_cyc(vec![BigRational::zero(), BigRational::one()], *e);
                Ok(Scalar { ring: ring.clone(), value: Value::Cyc(coeffs) })
            }
            _ => Err(Error::UndeclaredVariable(name.to_string())),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        is_zero_value(&self.ring, &self.value)
    }

    pub fn is_one(&self) -> bool {
        self.value == one_value(&self.ring)
    }

    fn assert_same_ring(&self, other: &Scalar, op: &str) {
        assert!(
            self.ring == other.ring,
            "{op} on mismatched rings {} and {}",
            self.ring,
            other.ring
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.assert_same_ring(other, "add");
        Scalar { ring: self.ring.clone(), value: v_add(&self.ring, &self.value, &other.value) }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.assert_same_ring(other, "sub");
        Scalar { ring: self.ring.clone(), value: v_sub(&self.ring, &self.value, &other.value) }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.assert_same_ring(other, "mul");
        Scalar { ring: self.ring.clone(), value: v_mul(&self.ring, &self.value, &other.value) }
    }

    pub fn neg(&self) -> Scalar {
        Scalar { ring: self.ring.clone(), value: v_neg(&self.ring, &self.value) }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.assert_same_ring(other, "div");
        Ok(Scalar {
            ring: self.ring.clone(),
            value: v_try_div(&self.ring, &self.value, &other.value)?,
        })
    }

    pub fn inv(&self) -> Result<Scalar> {
        Ok(Scalar { ring: self.ring.clone(), value: v_inv(&self.ring, &self.value)? })
    }

    pub fn pow(&self, n: i64) -> Result<Scalar> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = Scalar::one(&self.ring);
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Deterministic total order for canonical sorting. Orders nonnegative
    /// values before negative ones; not a numeric comparison.
    pub fn cmp_canonical(&self, other: &Scalar) -> Ordering {
        self.assert_same_ring(other, "cmp");
        cmp_value(&self.value, &other.value)
    }

    /// Interprets the scalar as a nonnegative integer if possible. Prime
    /// field residues lift to their least nonnegative representative.
    pub fn as_nonneg_integer(&self) -> Option<BigInt> {
        match (&self.ring, &self.value) {
            (Ring::Int, Value::Int(n)) => (!n.is_negative()).then(|| n.clone()),
            (Ring::Rat, Value::Rat(q)) => {
                (q.denom().is_one() && !q.is_negative()).then(|| q.numer().clone())
            }
            (Ring::Gf { .. }, Value::Mod(r)) => Some(BigInt::from(*r)),
            (Ring::Cyclotomic { .. }, Value::Cyc(c)) => match c.len() {
                0 => Some(BigInt::zero()),
                1 => (c[0].denom().is_one() && !c[0].is_negative()).then(|| c[0].numer().clone()),
                _ => None,
            },
            (Ring::Frac { base }, Value::Frac(n, d)) => {
                if **d != one_value(base) {
                    return None;
                }
                Scalar { ring: (**base).clone(), value: (**n).clone() }.as_nonneg_integer()
            }
            (Ring::Poly { base, .. } | Ring::Laurent { base, .. }, Value::Poly(t)) => {
                match t.len() {
                    0 => Some(BigInt::zero()),
                    1 => {
                        let (exps, c) = t.iter().next().unwrap();
                        if exps.iter().any(|&e| e != 0) {
                            return None;
                        }
                        Scalar { ring: (**base).clone(), value: c.clone() }.as_nonneg_integer()
                    }
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// True when the element lies in the base domain of its fraction field,
    /// i.e. its canonical denominator is 1. For non-fraction rings this is
    /// simply true.
    pub fn is_integral(&self) -> bool {
        match (&self.ring, &self.value) {
            (Ring::Frac { base }, Value::Frac(_, d)) => **d == one_value(base),
            (Ring::Rat, Value::Rat(q)) => q.denom().is_one(),
            _ => true,
        }
    }

    /// Numerator and denominator as elements of the fraction field's base
    /// ring. Only meaningful on fraction fields and Q.
    pub fn frac_parts(&self) -> Option<(Scalar, Scalar)> {
        match (&self.ring, &self.value) {
            (Ring::Frac { base }, Value::Frac(n, d)) => Some((
                Scalar { ring: (**base).clone(), value: (**n).clone() },
                Scalar { ring: (**base).clone(), value: (**d).clone() },
            )),
            (Ring::Rat, Value::Rat(q)) => Some((
                Scalar { ring: Ring::Int, value: Value::Int(q.numer().clone()) },
                Scalar { ring: Ring::Int, value: Value::Int(q.denom().clone()) },
            )),
            _ => None,
        }
    }
}

/// Canonical embedding between rings where one exists: Z into everything,
/// Q into fields of characteristic zero and fraction fields over Q-bases,
/// a domain into its own fraction field, polynomials into the Laurent ring
/// with the same variables, and identity on equal rings. Fails with
/// `RingMismatch` when no canonical map exists and with
/// `NonInvertibleDenominator` when a rational denominator dies in a prime
/// field.
pub fn embed(x: &Scalar, target: &Ring) -> Result<Scalar> {
    if x.ring() == target {
        return Ok(x.clone());
    }
    match (&x.ring, &x.value) {
        (Ring::Int, Value::Int(n)) => Ok(Scalar::from_bigint(target, n)),
        (Ring::Rat, Value::Rat(q)) => match target {
            Ring::Rat | Ring::Cyclotomic { .. } | Ring::Frac { .. } | Ring::Poly { .. }
            | Ring::Laurent { .. } => {
                let num = Scalar::from_bigint(target, q.numer());
                let den = Scalar::from_bigint(target, q.denom());
                num.try_div(&den).map_err(|_| {
                    Error::RingMismatch(format!("{q} does not embed into {target}"))
                })
            }
            Ring::Gf { p } => {
                let den = Scalar::from_bigint(target, q.denom());
                if den.is_zero() {
                    return Err(Error::NonInvertibleDenominator(format!(
                        "denominator of {q} vanishes modulo {p}"
                    )));
                }
                Scalar::from_bigint(target, q.numer()).try_div(&den)
            }
            Ring::Int => Err(Error::RingMismatch(format!("{q} is not an integer"))),
        },
        (Ring::Poly { base, vars }, Value::Poly(terms)) => match target {
            Ring::Laurent { base: b2, vars: v2 } if base == b2 && vars == v2 => {
                Ok(Scalar { ring: target.clone(), value: Value::Poly(terms.clone()) })
            }
            Ring::Frac { base: fb } if fb.as_ref() == x.ring() => Ok(Scalar {
                ring: target.clone(),
                value: Value::Frac(Box::new(x.value.clone()), Box::new(one_value(fb))),
            }),
            Ring::Frac { base: fb } => {
                // e.g. Q[a] entries into Frac(Z[a]) do not arise; but
                // Z[v] into Frac(Laurent Z[v]) does.
                let inner = embed(x, fb)?;
                Ok(Scalar {
                    ring: target.clone(),
                    value: Value::Frac(Box::new(inner.value), Box::new(one_value(fb))),
                })
            }
            _ => Err(Error::RingMismatch(format!(
                "no canonical map from {} into {}",
                x.ring, target
            ))),
        },
        (Ring::Laurent { .. }, Value::Poly(_)) => match target {
            Ring::Frac { base: fb } if fb.as_ref() == x.ring() => Ok(Scalar {
                ring: target.clone(),
                value: Value::Frac(Box::new(x.value.clone()), Box::new(one_value(fb))),
            }),
            _ => Err(Error::RingMismatch(format!(
                "no canonical map from {} into {}",
                x.ring, target
            ))),
        },
        _ => Err(Error::RingMismatch(format!(
            "no canonical map from {} into {}",
            x.ring, target
        ))),
    }
}

// ---------------------------------------------------------------------------
// printing

fn rat_is_neg(q: &BigRational) -> bool {
    q.is_negative()
}

/// True when the canonical printed form of the value starts with a minus
/// sign or needs parentheses inside a product.
fn print_term(base: &Ring, coeff: &Value, exp: &[i64], vars: &[String], out: &mut String) {
    let coeff_str = value_to_string(base, coeff);
    let is_one = *coeff == one_value(base);
    let is_neg_one = *coeff == v_neg(base, &one_value(base));
    let monomial: Vec<String> = exp
        .iter()
        .zip(vars.iter())
        .filter(|(e, _)| **e != 0)
        .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if monomial.is_empty() {
        out.push_str(&coeff_str);
        return;
    }
    let mono = monomial.join("*");
    if is_one {
        out.push_str(&mono);
    } else if is_neg_one {
        out.push('-');
        out.push_str(&mono);
    } else if coeff_str.contains(['+', ' ']) {
        out.push('(');
        out.push_str(&coeff_str);
        out.push_str(")*");
        out.push_str(&mono);
    } else {
        out.push_str(&coeff_str);
        out.push('*');
        out.push_str(&mono);
    }
}

pub(crate) fn value_to_string(ring: &Ring, v: &Value) -> String {
    match (ring, v) {
        (Ring::Int, Value::Int(n)) => n.to_string(),
        (Ring::Rat, Value::Rat(q)) => {
            if q.denom().is_one() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        }
        (Ring::Gf { .. }, Value::Mod(r)) => r.to_string(),
        (Ring::Cyclotomic { var, .. }, Value::Cyc(c)) => {
            if c.is_empty() {
                return "0".to_string();
            }
            let mut parts: Vec<(bool, String)> = Vec::new();
            for (i, q) in c.iter().enumerate().rev() {
                if q.is_zero() {
                    continue;
                }
                let neg = rat_is_neg(q);
                let mag = if neg { -q } else { q.clone() };
                let mag_str = if mag.denom().is_one() {
                    mag.numer().to_string()
                } else {
                    format!("{}/{}", mag.numer(), mag.denom())
                };
                let body = match i {
                    0 => mag_str,
                    1 if mag.is_one() => var.clone(),
                    1 => format!("{mag_str}*{var}"),
                    _ if mag.is_one() => format!("{var}^{i}"),
                    _ => format!("{mag_str}*{var}^{i}"),
                };
                parts.push((neg, body));
            }
            join_signed(parts)
        }
        (Ring::Poly { base, vars } | Ring::Laurent { base, vars }, Value::Poly(m)) => {
            if m.is_empty() {
                return "0".to_string();
            }
            let mut parts: Vec<(bool, String)> = Vec::new();
            for (exp, coeff) in m.iter().rev() {
                let mut s = String::new();
                print_term(base, coeff, exp, vars, &mut s);
                if let Some(body) = s.strip_prefix('-') {
                    parts.push((true, body.to_string()));
                } else {
                    parts.push((false, s));
                }
            }
            join_signed(parts)
        }
        (Ring::Frac { base }, Value::Frac(n, d)) => {
            if **d == one_value(base) {
                value_to_string(base, n)
            } else {
                format!("({})/({})", value_to_string(base, n), value_to_string(base, d))
            }
        }
        _ => panic!("value shape does not match ring {ring}"),
    }
}

pub(crate) fn join_signed(parts: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in parts.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push('-');
            }
        } else if *neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(body);
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", value_to_string(&self.ring, &self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_scalar;

    #[test]
    fn rational_arithmetic_is_reduced() {
        let r = Ring::Rat;
        let half = Scalar::from_int(&r, 1).try_div(&Scalar::from_int(&r, 2)).unwrap();
        let third = Scalar::from_int(&r, 1).try_div(&Scalar::from_int(&r, 3)).unwrap();
        let sum = half.add(&third);
        assert_eq!(sum.to_string(), "5/6");
        assert_eq!(sum.sub(&sum), Scalar::zero(&r));
    }

    #[test]
    fn laurent_units_invert() {
        let a = Ring::laurent(Ring::Int, &["v"]);
        let v = Scalar::var(&a, "v").unwrap();
        let vinv = v.inv().unwrap();
        assert!(v.mul(&vinv).is_one());
        assert_eq!(vinv.to_string(), "v^-1");
        // but v - 1 is not a unit
        let vm1 = v.sub(&Scalar::one(&a));
        assert!(vm1.inv().is_err());
    }

    #[test]
    fn polynomial_division_exactness() {
        let a = Ring::poly(Ring::Rat, &["a"]);
        let x = Scalar::var(&a, "a").unwrap();
        let sq = x.mul(&x).sub(&Scalar::one(&a)); // a^2 - 1
        let lin = x.add(&Scalar::one(&a)); // a + 1
        let q = sq.try_div(&lin).unwrap();
        assert_eq!(q.to_string(), "a - 1");
        assert!(matches!(sq.try_div(&x), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn fraction_normalization_over_z_base() {
        let k = Ring::frac(Ring::laurent(Ring::Int, &["v"]));
        let v = Scalar::var(&k, "v").unwrap();
        let one = Scalar::one(&k);
        // (v^2 - 1)/(v + 1) reduces to v - 1
        let num = v.mul(&v).sub(&one);
        let den = v.add(&one);
        let red = num.try_div(&den).unwrap();
        assert_eq!(red.to_string(), "v - 1");
        assert!(red.is_integral());
        // 1/v is a unit multiple: denominator must stay 1
        let inv = one.try_div(&v).unwrap();
        assert!(inv.is_integral());
        assert_eq!(inv.to_string(), "v^-1");
        // leading-sign normalization: 1/(-v + 1) has denominator v - 1
        let den2 = one.sub(&v);
        let f = one.try_div(&den2).unwrap();
        assert_eq!(f.to_string(), "(-1)/(v - 1)");
    }

    #[test]
    fn fraction_normalization_over_q_base_is_monic() {
        let k = Ring::frac(Ring::poly(Ring::Rat, &["a"]));
        let a = Scalar::var(&k, "a").unwrap();
        let two = Scalar::from_int(&k, 2);
        // 1/(2a + 2) -> (1/2)/(a + 1)
        let f = Scalar::one(&k).try_div(&two.mul(&a).add(&two)).unwrap();
        let (n, d) = f.frac_parts().unwrap();
        assert_eq!(d.to_string(), "a + 1");
        assert_eq!(n.to_string(), "1/2");
    }

    #[test]
    fn cyclotomic_field_arithmetic() {
        let l = Ring::cyclotomic(3);
        let z = Scalar::var(&l, "z").unwrap();
        // 1 + z + z^2 = 0
        let s = Scalar::one(&l).add(&z).add(&z.mul(&z));
        assert!(s.is_zero());
        // z^3 = 1
        assert!(z.pow(3).unwrap().is_one());
        let zinv = z.inv().unwrap();
        assert_eq!(zinv, z.mul(&z));
    }

    #[test]
    fn prime_field_ops() {
        let f = Ring::Gf { p: 7 };
        let three = Scalar::from_int(&f, 3);
        let five = Scalar::from_int(&f, 12);
        assert_eq!(three.mul(&five).to_string(), "1");
        assert_eq!(three.inv().unwrap().to_string(), "5");
        assert_eq!(Scalar::from_int(&f, -1).to_string(), "6");
    }

    #[test]
    fn embed_paths() {
        let a = Ring::poly(Ring::Rat, &["a"]);
        let k = Ring::frac(a.clone());
        let x = Scalar::var(&a, "a").unwrap();
        let in_k = embed(&x, &k).unwrap();
        assert_eq!(in_k.to_string(), "a");
        let q = Scalar::from_rational(&Ring::Rat, &BigRational::new(1.into(), 2.into())).unwrap();
        let in_cyc = embed(&q, &Ring::cyclotomic(3)).unwrap();
        assert_eq!(in_cyc.to_string(), "1/2");
        assert!(embed(&q, &Ring::Gf { p: 2 }).is_err());
        let ok = embed(&q, &Ring::Gf { p: 3 }).unwrap();
        assert_eq!(ok.to_string(), "2");
    }

    #[test]
    fn print_parse_round_trip_samples() {
        let k = Ring::frac(Ring::laurent(Ring::Int, &["v"]));
        let v = Scalar::var(&k, "v").unwrap();
        let one = Scalar::one(&k);
        let samples = vec![
            v.clone(),
            v.inv().unwrap(),
            v.mul(&v).sub(&one).try_div(&v.add(&one).mul(&v)).unwrap(),
            Scalar::from_int(&k, -7),
            one.try_div(&v.add(&Scalar::from_int(&k, 3))).unwrap(),
        ];
        for s in samples {
            let text = s.to_string();
            let back = parse_scalar(&text, &k).unwrap();
            assert_eq!(back, s, "round trip through `{text}`");
        }
    }
}
