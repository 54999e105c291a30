//! Univariate polynomials over GF(p) with full factorization:
//! squarefree decomposition, distinct-degree splitting and randomized
//! equal-degree splitting (with the trace-map variant for p = 2).

use super::{inv_mod, mul_mod};
use num::{BigUint, One, Zero};
use rand::Rng;

/// Dense coefficients, lowest degree first, top coefficient nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> FpPoly {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut f = FpPoly { p, coeffs };
        f.trim();
        f
    }

    pub fn zero(p: u64) -> FpPoly {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> FpPoly {
        FpPoly { p, coeffs: vec![1] }
    }

    pub fn x(p: u64) -> FpPoly {
        FpPoly { p, coeffs: vec![0, 1] }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lead(&self) -> u64 {
        *self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + b) % p;
        }
        let mut f = FpPoly { p, coeffs: out };
        f.trim();
        f
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + p - b) % p;
        }
        let mut f = FpPoly { p, coeffs: out };
        f.trim();
        f
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        let mut f = FpPoly { p, coeffs: out };
        f.trim();
        f
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let p = self.p;
        let coeffs = self.coeffs.iter().map(|&a| mul_mod(a, c % p, p)).collect();
        let mut f = FpPoly { p, coeffs };
        f.trim();
        f
    }

    pub fn divrem(&self, div: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = div.coeffs.len() - 1;
        if self.coeffs.len() < div.coeffs.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let linv = inv_mod(div.lead(), p).expect("prime modulus");
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], linv, p);
            if c == 0 {
                continue;
            }
            quo[i - dd] = c;
            for (j, &b) in div.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + p - mul_mod(c, b, p)) % p;
            }
        }
        let mut q = FpPoly { p, coeffs: quo };
        let mut r = FpPoly { p, coeffs: rem };
        q.trim();
        r.trim();
        (q, r)
    }

    pub fn rem(&self, div: &FpPoly) -> FpPoly {
        self.divrem(div).1
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.p).expect("prime modulus"))
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, u, v) with u*self + v*other = g = gcd, g monic.
    pub fn xgcd(&self, other: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut v0, mut v1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let nu = u0.sub(&q.mul(&u1));
            let nv = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = nu;
            v0 = v1;
            v1 = nv;
        }
        if r0.is_zero() {
            return (r0, u0, v0);
        }
        let c = inv_mod(r0.lead(), p).expect("prime modulus");
        (r0.scale(c), u0.scale(c), v0.scale(c))
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        let coeffs: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod((i as u64) % p, c, p))
            .collect();
        let mut f = FpPoly { p, coeffs };
        f.trim();
        f
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x % p, p) + c) % p;
        }
        acc
    }

    /// self^exp modulo `m`, with an arbitrary-precision exponent.
    pub fn pow_mod(&self, exp: &BigUint, m: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::one(self.p);
        let mut base = self.rem(m);
        let mut e = exp.clone();
        while !e.is_zero() {
            if (&e % 2u32).is_one() {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

/// p-th root of a polynomial whose exponents are all multiples of p.
/// Coefficients are fixed by Frobenius over the prime field.
fn pth_root(f: &FpPoly) -> FpPoly {
    let p = f.p as usize;
    let coeffs: Vec<u64> = f.coeffs.iter().step_by(p).copied().collect();
    let mut g = FpPoly { p: f.p, coeffs };
    g.trim();
    g
}

/// Squarefree decomposition of a monic polynomial: pairs (factor,
/// multiplicity) with pairwise-coprime squarefree monic factors.
pub fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    fn go(f: &FpPoly, mult: usize, out: &mut Vec<(FpPoly, usize)>) {
        let p = f.p as usize;
        let deriv = f.derivative();
        if deriv.is_zero() {
            if f.degree() == Some(0) {
                return;
            }
            go(&pth_root(f), mult * p, out);
            return;
        }
        let mut c = f.gcd(&deriv);
        let mut w = f.divrem(&c).0.monic();
        let mut i = 1usize;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.divrem(&y).0.monic();
            if fac.degree().unwrap_or(0) > 0 {
                out.push((fac, i * mult));
            }
            w = y;
            c = c.divrem(&w).0.monic();
            i += 1;
        }
        if !c.is_one() {
            go(&pth_root(&c), mult * p, out);
        }
    }
    let mut out = Vec::new();
    go(&f.monic(), 1, &mut out);
    out
}

/// Distinct-degree decomposition of a squarefree monic polynomial:
/// pairs (product of irreducibles of degree d, d).
pub fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = FpPoly::x(f.p).rem(&rest);
    let pe = BigUint::from(f.p);
    let mut d = 0usize;
    while rest.degree().unwrap_or(0) >= 1 {
        d += 1;
        if 2 * d > rest.degree().unwrap_or(0) {
            out.push((rest.clone(), rest.degree().unwrap()));
            break;
        }
        h = h.pow_mod(&pe, &rest);
        let g = rest.gcd(&h.sub(&FpPoly::x(f.p).rem(&rest)));
        if !g.is_one() {
            out.push((g.clone(), d));
            rest = rest.divrem(&g).0.monic();
            h = h.rem(&rest);
        }
    }
    out
}

/// Splits a monic squarefree product of irreducibles that all have degree
/// d, by Cantor-Zassenhaus (trace map when p = 2).
pub fn equal_degree(f: &FpPoly, d: usize, rng: &mut impl Rng) -> Vec<FpPoly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) < 1 && n > 1 {
            continue;
        }
        let g0 = f.gcd(&a);
        if !g0.is_one() && g0.degree() != f.degree() {
            let mut out = equal_degree(&g0, d, rng);
            out.extend(equal_degree(&f.divrem(&g0).0.monic(), d, rng));
            out.sort_by(cmp_poly);
            return out;
        }
        let b = if p == 2 {
            // trace map a + a^2 + a^4 + ... over GF(2^d)
            let mut acc = FpPoly::zero(p);
            let mut t = a.rem(f);
            for _ in 0..d {
                acc = acc.add(&t).rem(f);
                t = t.mul(&t).rem(f);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            a.pow_mod(&e, f).sub(&FpPoly::one(p))
        };
        let g = f.gcd(&b);
        if !g.is_one() && g.degree() != f.degree() {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.divrem(&g).0.monic(), d, rng));
            out.sort_by(cmp_poly);
            return out;
        }
    }
}

fn cmp_poly(a: &FpPoly, b: &FpPoly) -> std::cmp::Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

/// Full factorization into monic irreducibles with multiplicities,
/// deterministically ordered by degree then coefficients.
pub fn factor(f: &FpPoly, rng: &mut impl Rng) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    for (sq, mult) in squarefree_decomposition(f) {
        for (prod, d) in distinct_degree(&sq) {
            for irr in equal_degree(&prod, d, rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| cmp_poly(a, b));
    out
}

/// Roots in GF(p), with multiplicity, ascending.
pub fn roots(f: &FpPoly, rng: &mut impl Rng) -> Vec<(u64, usize)> {
    let p = f.p;
    let mut out: Vec<(u64, usize)> = factor(f, rng)
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, m)| ((p - g.coeffs[0]) % p, m))
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    #[test]
    fn divrem_identity() {
        let f = FpPoly::new(7, vec![3, 0, 1, 5]);
        let g = FpPoly::new(7, vec![2, 1]);
        let (q, r) = f.divrem(&g);
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree() < g.degree());
    }

    #[test]
    fn factor_product_of_linears() {
        // (x-1)(x-2)^2 over GF(5)
        let p = 5;
        let a = FpPoly::new(p, vec![4, 1]); // x - 1
        let b = FpPoly::new(p, vec![3, 1]); // x - 2
        let f = a.mul(&b).mul(&b);
        let facs = factor(&f, &mut rng());
        assert_eq!(facs.len(), 2);
        assert_eq!(roots(&f, &mut rng()), vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn factor_irreducible_quadratic() {
        // x^2 + 1 is irreducible over GF(3)
        let f = FpPoly::new(3, vec![1, 0, 1]);
        let facs = factor(&f, &mut rng());
        assert_eq!(facs, vec![(f.monic(), 1)]);
    }

    #[test]
    fn factor_over_gf2_with_frobenius_block() {
        // (x^2 + x + 1)^2 * x over GF(2): derivative tricks must cope
        let irr = FpPoly::new(2, vec![1, 1, 1]);
        let f = irr.mul(&irr).mul(&FpPoly::x(2));
        let facs = factor(&f, &mut rng());
        assert_eq!(facs.len(), 2);
        assert!(facs.contains(&(FpPoly::x(2), 1)));
        assert!(facs.contains(&(irr, 2)));
    }

    #[test]
    fn equal_degree_splits_two_quadratics() {
        // (x^2+1)(x^2+x+2) over GF(3), both irreducible
        let a = FpPoly::new(3, vec![1, 0, 1]);
        let b = FpPoly::new(3, vec![2, 1, 1]);
        let f = a.mul(&b);
        let parts = equal_degree(&f, 2, &mut rng());
        assert_eq!(parts.len(), 2);
        assert!(parts.contains(&a) && parts.contains(&b));
    }

    #[test]
    fn frobenius_power_fixed_points() {
        // over GF(3) mod x^2+1: x^(3^2) = x
        let f = FpPoly::new(3, vec![1, 0, 1]);
        let pe = BigUint::from(3u32);
        let h = FpPoly::x(3).pow_mod(&pe, &f).pow_mod(&pe, &f);
        assert_eq!(h, FpPoly::x(3));
    }
}
