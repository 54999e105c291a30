//! Exact division and gcd for sparse multivariate polynomials.
//!
//! Gcds are computed over Z by a primitive polynomial remainder sequence,
//! treating the first variable as the main one and recursing on the
//! coefficients. Rational-coefficient inputs are cleared to Z first; the
//! result is only needed up to a unit, and fraction normalization fixes
//! the unit afterwards.

use super::scalar::{is_zero_value, v_mul, v_sub, v_try_div, TermMap, Value};
use super::Ring;
use num::{BigInt, Integer, One, Signed, Zero};

/// Greedy exact division of sparse polynomials with coefficients in
/// `base`. Returns `None` when the division is not exact. Exponents must
/// be componentwise nonnegative (Laurent callers strip monomials first).
pub(crate) fn poly_exact_div(
    base: &Ring,
    a: &TermMap,
    b: &TermMap,
    _nvars: usize,
) -> Option<TermMap> {
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(TermMap::new());
    }
    let (eb, cb) = b.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
    let mut rem = a.clone();
    let mut quo = TermMap::new();
    while let Some((er, cr)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        let diff: Vec<i64> = er.iter().zip(eb.iter()).map(|(x, y)| x - y).collect();
        if diff.iter().any(|d| *d < 0) {
            return None;
        }
        let qc = v_try_div(base, &cr, &cb).ok()?;
        for (e2, c2) in b.iter() {
            let tgt: Vec<i64> = diff.iter().zip(e2.iter()).map(|(x, y)| x + y).collect();
            let sub = v_mul(base, &qc, c2);
            let cur = rem.remove(&tgt);
            let next = match cur {
                Some(c) => v_sub(base, &c, &sub),
                None => v_sub(base, &zero_like(base), &sub),
            };
            if !is_zero_value(base, &next) {
                rem.insert(tgt, next);
            }
        }
        quo.insert(diff, qc);
    }
    Some(quo)
}

fn zero_like(base: &Ring) -> Value {
    super::scalar::zero_value(base)
}

/// Gcd of two sparse polynomials over an Int or Rat base, up to a unit.
/// The zero polynomial acts as the gcd identity.
pub(crate) fn poly_gcd(base: &Ring, a: &TermMap, b: &TermMap, nvars: usize) -> TermMap {
    match base {
        Ring::Int => zgcd(a, b, nvars),
        Ring::Rat => {
            let za = clear_rat(a);
            let zb = clear_rat(b);
            let g = zgcd(&za, &zb, nvars);
            g.into_iter()
                .map(|(e, c)| {
                    let Value::Int(n) = c else { unreachable!() };
                    (e, Value::Rat(num::BigRational::from(n)))
                })
                .collect()
        }
        other => panic!("gcd over base {other} is not supported"),
    }
}

fn clear_rat(m: &TermMap) -> TermMap {
    let mut lcm = BigInt::one();
    for c in m.values() {
        let Value::Rat(q) = c else { panic!("rational coefficient expected") };
        lcm = lcm.lcm(q.denom());
    }
    m.iter()
        .map(|(e, c)| {
            let Value::Rat(q) = c else { unreachable!() };
            (e.clone(), Value::Int(q.numer() * (&lcm / q.denom())))
        })
        .collect()
}

/// Positive gcd of all integer coefficients; zero for the zero polynomial.
pub(crate) fn int_content(m: &TermMap) -> BigInt {
    let mut g = BigInt::zero();
    for c in m.values() {
        let Value::Int(n) = c else { panic!("integer coefficient expected") };
        g = g.gcd(n);
        if g.is_one() {
            break;
        }
    }
    g
}

pub(crate) fn int_scale_down(m: &TermMap, g: &BigInt) -> TermMap {
    m.iter()
        .map(|(e, c)| {
            let Value::Int(n) = c else { panic!("integer coefficient expected") };
            (e.clone(), Value::Int(n / g))
        })
        .collect()
}

// --- internal Z[x_1..x_k] term-map arithmetic -----------------------------

fn mp_is_zero(m: &TermMap) -> bool {
    m.is_empty()
}

fn mp_sub(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = a.clone();
    for (e, c) in b {
        let Value::Int(cb) = c else { unreachable!() };
        let cur = match out.remove(e) {
            Some(Value::Int(ca)) => ca - cb,
            None => -cb,
            _ => unreachable!(),
        };
        if !cur.is_zero() {
            out.insert(e.clone(), Value::Int(cur));
        }
    }
    out
}

fn mp_mul(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (e1, c1) in a {
        let Value::Int(x) = c1 else { unreachable!() };
        for (e2, c2) in b {
            let Value::Int(y) = c2 else { unreachable!() };
            let exp: Vec<i64> = e1.iter().zip(e2.iter()).map(|(u, v)| u + v).collect();
            let prod = x * y;
            let cur = match out.remove(&exp) {
                Some(Value::Int(c)) => c + prod,
                None => prod,
                _ => unreachable!(),
            };
            if !cur.is_zero() {
                out.insert(exp, Value::Int(cur));
            }
        }
    }
    out
}

fn mp_neg_in_place(m: &mut TermMap) {
    for c in m.values_mut() {
        let Value::Int(n) = c else { unreachable!() };
        *c = Value::Int(-std::mem::take(n));
    }
}

/// Makes the lex-leading coefficient positive.
fn mp_sign_normalize(mut m: TermMap) -> TermMap {
    let neg = matches!(m.iter().next_back(), Some((_, Value::Int(n))) if n.is_negative());
    if neg {
        mp_neg_in_place(&mut m);
    }
    m
}

// --- dense-in-main-variable view -------------------------------------------

fn to_upoly(m: &TermMap) -> Vec<TermMap> {
    let deg = m.keys().map(|e| e[0]).max().unwrap_or(-1);
    if deg < 0 {
        return Vec::new();
    }
    let mut out = vec![TermMap::new(); (deg + 1) as usize];
    for (e, c) in m {
        out[e[0] as usize].insert(e[1..].to_vec(), c.clone());
    }
    out
}

fn from_upoly(v: &[TermMap]) -> TermMap {
    let mut out = TermMap::new();
    for (i, coeff) in v.iter().enumerate() {
        for (e, c) in coeff {
            let mut exp = Vec::with_capacity(e.len() + 1);
            exp.push(i as i64);
            exp.extend_from_slice(e);
            out.insert(exp, c.clone());
        }
    }
    out
}

fn utrim(v: &mut Vec<TermMap>) {
    while v.last().is_some_and(mp_is_zero) {
        v.pop();
    }
}

fn ucontent(v: &[TermMap], k: usize) -> TermMap {
    let mut g = TermMap::new();
    for c in v {
        g = zgcd(&g, c, k);
    }
    g
}

fn uprim(v: &[TermMap], content: &TermMap) -> Vec<TermMap> {
    v.iter()
        .map(|c| {
            if mp_is_zero(c) {
                c.clone()
            } else {
                poly_exact_div(&Ring::Int, c, content, 0).expect("content divides")
            }
        })
        .collect()
}

/// One pseudo-division step sequence: returns prem(p, q) with respect to
/// the main variable. Requires deg p >= deg q >= 0 and q nonzero.
fn uprem(p: &[TermMap], q: &[TermMap]) -> Vec<TermMap> {
    let dq = q.len() - 1;
    let lc = q[dq].clone();
    let mut r = p.to_vec();
    loop {
        utrim(&mut r);
        if r.len() < dq + 1 {
            return r;
        }
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = mp_mul(c, &lc);
        }
        let shift = dr - dq;
        for (i, qc) in q.iter().enumerate() {
            r[shift + i] = mp_sub(&r[shift + i], &mp_mul(&lr, qc));
        }
    }
}

/// Gcd over Z in `k` variables via a primitive remainder sequence,
/// normalized to a positive lex-leading coefficient.
fn zgcd(a: &TermMap, b: &TermMap, k: usize) -> TermMap {
    if a.is_empty() {
        return mp_sign_normalize(b.clone());
    }
    if b.is_empty() {
        return mp_sign_normalize(a.clone());
    }
    if k == 0 {
        let Some(Value::Int(x)) = a.get(&Vec::new()) else { unreachable!() };
        let Some(Value::Int(y)) = b.get(&Vec::new()) else { unreachable!() };
        let mut m = TermMap::new();
        m.insert(Vec::new(), Value::Int(x.gcd(y)));
        return m;
    }
    let ua = to_upoly(a);
    let ub = to_upoly(b);
    let ca = ucontent(&ua, k - 1);
    let cb = ucontent(&ub, k - 1);
    let cg = zgcd(&ca, &cb, k - 1);
    let mut p = uprim(&ua, &ca);
    let mut q = uprim(&ub, &cb);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        utrim(&mut q);
        if q.is_empty() {
            break;
        }
        if q.len() == 1 {
            // a nonzero constant in the coefficient ring: primitive parts
            // share no factor involving the main variable
            p = vec![one_map(k - 1)];
            break;
        }
        let r = uprem(&p, &q);
        p = q;
        let rc = ucontent(&r, k - 1);
        q = if r.is_empty() { Vec::new() } else { uprim(&r, &rc) };
    }
    // reattach the content gcd
    let pp: Vec<TermMap> = p.iter().map(|c| mp_mul(c, &cg)).collect();
    mp_sign_normalize(from_upoly(&pp))
}

fn one_map(k: usize) -> TermMap {
    let mut m = TermMap::new();
    m.insert(vec![0; k], Value::Int(BigInt::one()));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(pairs: &[(&[i64], i64)]) -> TermMap {
        pairs
            .iter()
            .map(|(e, c)| (e.to_vec(), Value::Int(BigInt::from(*c))))
            .collect()
    }

    #[test]
    fn univariate_gcd() {
        // gcd(x^2 - 1, x^2 + 2x + 1) = x + 1
        let a = t(&[(&[2], 1), (&[0], -1)]);
        let b = t(&[(&[2], 1), (&[1], 2), (&[0], 1)]);
        let g = zgcd(&a, &b, 1);
        assert_eq!(g, t(&[(&[1], 1), (&[0], 1)]));
    }

    #[test]
    fn content_is_included() {
        // gcd(2x, 4) = 2
        let a = t(&[(&[1], 2)]);
        let b = t(&[(&[0], 4)]);
        assert_eq!(zgcd(&a, &b, 1), t(&[(&[0], 2)]));
    }

    #[test]
    fn coprime_gives_unit() {
        let a = t(&[(&[1], 1), (&[0], 1)]); // x + 1
        let b = t(&[(&[1], 1), (&[0], -1)]); // x - 1
        assert_eq!(zgcd(&a, &b, 1), t(&[(&[0], 1)]));
    }

    #[test]
    fn bivariate_common_factor() {
        // gcd((x+y)*x, (x+y)*y) = x + y
        let f = t(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let a = mp_mul(&f, &t(&[(&[1, 0], 1)]));
        let b = mp_mul(&f, &t(&[(&[0, 1], 1)]));
        assert_eq!(zgcd(&a, &b, 2), f);
    }

    #[test]
    fn exact_division_detects_failure() {
        let a = t(&[(&[2], 1), (&[0], -1)]);
        let b = t(&[(&[1], 1), (&[0], 1)]);
        let q = poly_exact_div(&Ring::Int, &a, &b, 1).unwrap();
        assert_eq!(q, t(&[(&[1], 1), (&[0], -1)]));
        let c = t(&[(&[1], 1)]);
        assert!(poly_exact_div(&Ring::Int, &a, &c, 1).is_none());
        // coefficient divisibility failure over Z
        let d = t(&[(&[1], 2)]);
        assert!(poly_exact_div(&Ring::Int, &c, &d, 1).is_none());
    }

    #[test]
    fn gcd_of_sign_variants_is_positive() {
        let a = t(&[(&[1], -3), (&[0], -3)]);
        let g = zgcd(&a, &a, 1);
        assert_eq!(g, t(&[(&[1], 3), (&[0], 3)]));
    }
}
