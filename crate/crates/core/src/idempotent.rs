//! Orthogonal idempotent decompositions of K[X]/(mu) without factoring
//! over the rationals: factor modulo a well-chosen prime, lift the
//! residue idempotents q-adically with the Newton step e <- 3e^2 - 2e^3,
//! reconstruct rational coefficients, and merge residue factors into
//! clusters until every candidate verifies exactly.

use crate::error::{Error, Result};
use crate::ring::ffpoly::{factor, FpPoly};
use crate::ring::RatPoly;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = r1;
        r1 = r;
        let t = &t0 - &q * &t1;
        t0 = t1;
        t1 = t;
    }
    if r0.is_one() {
        Some(t0.mod_floor(m))
    } else {
        None
    }
}

/// Wang's rational reconstruction: the unique n/d with |n|, d bounded by
/// sqrt(m/2) and n = c*d mod m, when one exists.
pub(crate) fn rational_reconstruct(c: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), c.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = r1;
        r1 = r;
        let t = &t0 - &q * &t1;
        t0 = t1;
        t1 = t;
    }
    if t1.is_zero() {
        return None;
    }
    let (mut n, mut d) = (r1, t1);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    if d > bound || !n.gcd(&d).is_one() {
        return None;
    }
    Some(BigRational::new(n, d))
}

// dense BigInt polynomials reduced mod (mu, modulus), mu monic

fn zp_norm(v: &mut Vec<BigInt>, m: &BigInt) {
    for c in v.iter_mut() {
        *c = c.mod_floor(m);
    }
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn zp_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zp_rem(mut v: Vec<BigInt>, mu: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let deg = mu.len() - 1;
    while v.len() > deg {
        let c = v.pop().unwrap().mod_floor(m);
        if c.is_zero() {
            continue;
        }
        let shift = v.len() - deg;
        for j in 0..deg {
            let t = (&v[shift + j] - &c * &mu[j]).mod_floor(m);
            v[shift + j] = t;
        }
    }
    zp_norm(&mut v, m);
    v
}

fn rat_to_zn(mu: &RatPoly, m: &BigInt) -> Option<Vec<BigInt>> {
    let mut out = Vec::with_capacity(mu.0.len());
    for c in &mu.0 {
        let den = mod_inverse(c.denom(), m)?;
        out.push((c.numer() * den).mod_floor(m));
    }
    Some(out)
}

fn newton_step(e: &[BigInt], mu: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let e2 = zp_rem(zp_mul(e, e), mu, m);
    let e3 = zp_rem(zp_mul(&e2, e), mu, m);
    let len = e2.len().max(e3.len());
    let mut out = vec![BigInt::zero(); len];
    for (i, c) in e2.iter().enumerate() {
        out[i] += c * BigInt::from(3);
    }
    for (i, c) in e3.iter().enumerate() {
        out[i] -= c * BigInt::from(2);
    }
    zp_norm(&mut out, m);
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] != items.len() - k + pos {
                break;
            }
        }
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn reconstruct_poly(v: &[BigInt], m: &BigInt) -> Option<RatPoly> {
    let mut coeffs = Vec::with_capacity(v.len());
    for c in v {
        coeffs.push(rational_reconstruct(c, m)?);
    }
    Some(RatPoly::from_coeffs(coeffs))
}

fn is_idempotent_mod(e: &RatPoly, mu: &RatPoly) -> bool {
    !e.is_zero() && e.mul(e).sub(e).rem(mu).is_zero()
}

fn try_cluster(eps: &[Vec<BigInt>], mu: &RatPoly, m: &BigInt) -> Option<Vec<RatPoly>> {
    let mut alive: Vec<usize> = (0..eps.len()).collect();
    let mut out = Vec::new();
    while !alive.is_empty() {
        let mut found = None;
        'size: for size in 1..=alive.len() {
            for combo in combinations(&alive, size) {
                let mut sum = Vec::new();
                for &i in &combo {
                    let len = sum.len().max(eps[i].len());
                    sum.resize(len, BigInt::zero());
                    for (j, c) in eps[i].iter().enumerate() {
                        sum[j] += c;
                    }
                }
                zp_norm(&mut sum, m);
                if let Some(e) = reconstruct_poly(&sum, m) {
                    if is_idempotent_mod(&e, mu) {
                        found = Some((combo, e));
                        break 'size;
                    }
                }
            }
        }
        let (combo, e) = found?;
        alive.retain(|i| !combo.contains(i));
        out.push(e);
    }
    // global exactness: partition of unity, pairwise orthogonal
    let mut total = RatPoly::zero();
    for e in &out {
        total = total.add(e);
    }
    if !total.sub(&RatPoly::one()).rem(mu).is_zero() {
        return None;
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if !out[i].mul(&out[j]).rem(mu).is_zero() {
                return None;
            }
        }
    }
    Some(out)
}

fn next_good_prime(from: u64, mu: &RatPoly) -> u64 {
    let mut q = from;
    'outer: loop {
        q += 1;
        if !crate::ring::is_prime(q) {
            continue;
        }
        let qb = BigInt::from(q);
        for c in &mu.0 {
            if (c.denom() % &qb).is_zero() {
                continue 'outer;
            }
        }
        return q;
    }
}

fn fp_reduce(mu: &RatPoly, q: u64) -> FpPoly {
    let m = BigInt::from(q);
    let coeffs: Vec<u64> = mu
        .0
        .iter()
        .map(|c| {
            let den = mod_inverse(c.denom(), &m).expect("prime excludes denominators");
            u64::try_from((c.numer() * den).mod_floor(&m)).unwrap()
        })
        .collect();
    FpPoly::new(q, coeffs)
}

/// Complete orthogonal idempotents of QQ[X]/(mu), mu squarefree. One
/// idempotent per irreducible factor of mu over QQ, without ever
/// factoring over QQ. Deterministic for a fixed seed.
pub(crate) fn rational_idempotents(mu: &RatPoly, seed: u64) -> Result<Vec<RatPoly>> {
    let mu = mu.monic();
    if mu.degree().unwrap_or(0) <= 1 {
        return Ok(vec![RatPoly::one()]);
    }
    if mu.gcd(&mu.derivative()).degree().unwrap_or(0) > 0 {
        return Err(Error::Internal(format!(
            "idempotent engine needs a squarefree modulus, got {mu:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = 10006;
    for _ in 0..6 {
        q = next_good_prime(q, &mu);
        let mu_q = fp_reduce(&mu, q);
        if mu_q.degree() != mu.degree() || mu_q.gcd(&mu_q.derivative()).degree().unwrap_or(0) > 0 {
            continue;
        }
        let factors = factor(&mu_q, &mut rng);
        if factors.len() == 1 {
            // irreducible mod q forces irreducible over QQ
            return Ok(vec![RatPoly::one()]);
        }
        if factors.len() > 12 {
            return Err(Error::Internal(
                "too many residue factors for cluster search".into(),
            ));
        }
        let mut modulus = BigInt::from(q);
        let mut eps: Vec<Vec<BigInt>> = Vec::new();
        let mut ok = true;
        for (g, _) in &factors {
            let h = mu_q.divrem(g).0;
            let (gcd, u, _) = h.xgcd(g);
            if !gcd.is_one() {
                ok = false;
                break;
            }
            let e = u.mul(&h).rem(&mu_q);
            eps.push(e.coeffs.iter().map(|&c| BigInt::from(c)).collect());
        }
        if !ok {
            continue;
        }
        for stage in 0..9 {
            if stage > 0 {
                modulus = &modulus * &modulus;
                let mu_m = rat_to_zn(&mu, &modulus).expect("denominators stay invertible");
                eps = eps.iter().map(|e| newton_step(e, &mu_m, &modulus)).collect();
            }
            if stage < 3 {
                continue;
            }
            if let Some(out) = try_cluster(&eps, &mu, &modulus) {
                return Ok(out);
            }
        }
    }
    Err(Error::Internal(
        "rational idempotent reconstruction failed after all prime attempts".into(),
    ))
}

/// Complete orthogonal idempotents of F_p[X]/(mu) by Chinese remaindering
/// across the irreducible-power factors of mu.
pub(crate) fn fp_idempotents(mu: &FpPoly, rng: &mut impl rand::Rng) -> Vec<FpPoly> {
    let mu = mu.monic();
    let factors = factor(&mu, rng);
    if factors.len() <= 1 {
        return vec![FpPoly::one(mu.p)];
    }
    let mut out = Vec::with_capacity(factors.len());
    for (g, a) in &factors {
        let mut ga = FpPoly::one(mu.p);
        for _ in 0..*a {
            ga = ga.mul(g);
        }
        let h = mu.divrem(&ga).0;
        let (gcd, u, _) = h.xgcd(&ga);
        debug_assert!(gcd.is_one());
        out.push(u.mul(&h).rem(&mu));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Ratio;
    use rand::SeedableRng;

    fn rp(coeffs: &[i64]) -> RatPoly {
        RatPoly::from_coeffs(coeffs.iter().map(|&c| BigRational::from(BigInt::from(c))).collect())
    }

    #[test]
    fn reconstruct_small_rationals() {
        let m = BigInt::from(10007u64).pow(4);
        for (n, d) in [(2i64, 3i64), (-7, 5), (0, 1), (123, 456)] {
            let c = (BigInt::from(n) * mod_inverse(&BigInt::from(d), &m).unwrap()).mod_floor(&m);
            let got = rational_reconstruct(&c, &m).unwrap();
            assert_eq!(got, Ratio::new(BigInt::from(n), BigInt::from(d)));
        }
    }

    #[test]
    fn split_linear_times_linear() {
        // X^2 - X = X(X - 1): idempotents X and 1 - X
        let mu = rp(&[0, -1, 1]);
        let mut out = rational_idempotents(&mu, 0).unwrap();
        out.sort_by_key(|e| format!("{e:?}"));
        assert_eq!(out.len(), 2);
        for e in &out {
            assert!(is_idempotent_mod(e, &mu));
        }
        assert!(out.contains(&rp(&[0, 1])));
        assert!(out.contains(&rp(&[1, -1])));
    }

    #[test]
    fn irreducible_factors_merge_into_one_cluster() {
        // X^2 - 2 is irreducible over QQ but splits mod many primes
        let mu = rp(&[-2, 0, 1]);
        let out = rational_idempotents(&mu, 0).unwrap();
        assert_eq!(out, vec![RatPoly::one()]);
    }

    #[test]
    fn three_clusters_with_merging() {
        // (X^2 - 2)(X^2 - 3)(X - 1): three QQ-irreducible factors
        let mu = rp(&[-2, 0, 1]).mul(&rp(&[-3, 0, 1])).mul(&rp(&[-1, 1]));
        let out = rational_idempotents(&mu, 0).unwrap();
        assert_eq!(out.len(), 3);
        let mut total = RatPoly::zero();
        for e in &out {
            assert!(is_idempotent_mod(e, &mu));
            total = total.add(e);
        }
        assert!(total.sub(&RatPoly::one()).rem(&mu).is_zero());
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                assert!(out[i].mul(&out[j]).rem(&mu).is_zero());
            }
        }
    }

    #[test]
    fn deterministic_across_calls() {
        let mu = rp(&[-2, 0, 1]).mul(&rp(&[0, -1, 1]));
        let a = rational_idempotents(&mu, 7).unwrap();
        let b = rational_idempotents(&mu, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prime_field_crt_idempotents() {
        // X(X+1)^2 over F_3
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mu = FpPoly::new(3, vec![0, 1]).mul(&FpPoly::new(3, vec![1, 1])).mul(&FpPoly::new(
            3,
            vec![1, 1],
        ));
        let out = fp_idempotents(&mu, &mut rng);
        assert_eq!(out.len(), 2);
        let mut total = FpPoly::zero(3);
        for e in &out {
            assert!(!e.is_zero());
            assert!(e.mul(e).sub(e).rem(&mu).is_zero());
            total = total.add(e);
        }
        assert!(total.is_one());
        assert!(out[0].mul(&out[1]).rem(&mu).is_zero());
    }

    #[test]
    fn fp_xgcd_inverts() {
        let g = FpPoly::new(5, vec![1, 1]);
        let h = FpPoly::new(5, vec![2, 0, 1]);
        let (d, u, v) = h.xgcd(&g);
        assert!(d.is_one());
        assert!(u.mul(&h).add(&v.mul(&g)).is_one());
    }
}
