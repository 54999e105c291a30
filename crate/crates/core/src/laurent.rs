//! Sparse Laurent polynomials in one tagged symbol over an arbitrary
//! coefficient ring. Used for graded characters (symbol `t`),
//! characteristic polynomials (symbol `X`, nonnegative exponents only)
//! and Grothendieck-group coefficients (symbol `q`).

use crate::error::Result;
use crate::ring::{join_signed, Ring, Scalar};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    var: String,
    ring: Ring,
    coeffs: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero(ring: &Ring, var: &str) -> LaurentPoly {
        LaurentPoly { var: var.to_string(), ring: ring.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(ring: &Ring, var: &str) -> LaurentPoly {
        LaurentPoly::monomial(ring, var, 0, Scalar::one(ring))
    }

    pub fn monomial(ring: &Ring, var: &str, exp: i64, coeff: Scalar) -> LaurentPoly {
        assert_eq!(coeff.ring(), ring, "coefficient ring mismatch");
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { var: var.to_string(), ring: ring.clone(), coeffs }
    }

    pub fn from_terms(
        ring: &Ring,
        var: &str,
        terms: impl IntoIterator<Item = (i64, Scalar)>,
    ) -> LaurentPoly {
        let mut out = LaurentPoly::zero(ring, var);
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| Scalar::zero(&self.ring))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, coeff: &Scalar) {
        assert_eq!(coeff.ring(), &self.ring, "coefficient ring mismatch");
        let cur = match self.coeffs.remove(&exp) {
            Some(c) => c.add(coeff),
            None => coeff.clone(),
        };
        if !cur.is_zero() {
            self.coeffs.insert(exp, cur);
        }
    }

    fn assert_compatible(&self, other: &LaurentPoly, op: &str) {
        assert_eq!(self.var, other.var, "{op} on different symbols");
        assert_eq!(self.ring, other.ring, "{op} on different rings");
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        self.assert_compatible(other, "add");
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            var: self.var.clone(),
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        self.assert_compatible(other, "mul");
        let mut out = LaurentPoly::zero(&self.ring, &self.var);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.add_term(e1 + e2, &c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        let mut out = LaurentPoly::zero(&self.ring, &self.var);
        for (e, a) in &self.coeffs {
            out.add_term(*e, &a.mul(c));
        }
        out
    }

    /// Multiplication by var^j (a degree shift).
    pub fn shift(&self, j: i64) -> LaurentPoly {
        LaurentPoly {
            var: self.var.clone(),
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|(e, c)| (e + j, c.clone())).collect(),
        }
    }

    /// Sum of all coefficients: evaluation at var = 1.
    pub fn eval_at_one(&self) -> Scalar {
        let mut acc = Scalar::zero(&self.ring);
        for c in self.coeffs.values() {
            acc = acc.add(c);
        }
        acc
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let mut acc = Scalar::zero(&self.ring);
        for (e, c) in &self.coeffs {
            acc = acc.add(&c.mul(&x.pow(*e)?));
        }
        Ok(acc)
    }

    /// Applies a coefficient map (a ring morphism) termwise, landing in
    /// `target`. Terms mapped to zero are dropped.
    pub fn map_scalars(
        &self,
        target: &Ring,
        f: &mut dyn FnMut(&Scalar) -> Result<Scalar>,
    ) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(target, &self.var);
        for (e, c) in &self.coeffs {
            let mapped = f(c)?;
            assert_eq!(mapped.ring(), target, "map landed in the wrong ring");
            out.add_term(*e, &mapped);
        }
        Ok(out)
    }

    /// Deterministic total order: compares coefficients exponent by
    /// exponent, ascending, missing terms reading as zero.
    pub fn cmp_canonical(&self, other: &LaurentPoly) -> std::cmp::Ordering {
        self.assert_compatible(other, "cmp");
        let zero = Scalar::zero(&self.ring);
        let keys: std::collections::BTreeSet<i64> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        for k in keys {
            let a = self.coeffs.get(&k).unwrap_or(&zero);
            let b = other.coeffs.get(&k).unwrap_or(&zero);
            let ord = a.cmp_canonical(b);
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (e, c) in self.coeffs.iter().rev() {
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains([' ', '+']) => (true, rest.to_string()),
                _ => (false, cs),
            };
            let body = if *e == 0 {
                mag
            } else {
                let pow = if *e == 1 { self.var.clone() } else { format!("{}^{}", self.var, e) };
                if mag == "1" {
                    pow
                } else if mag.contains([' ', '+', '/']) {
                    format!("({mag})*{pow}")
                } else {
                    format!("{mag}*{pow}")
                }
            };
            parts.push((neg, body));
        }
        write!(f, "{}", join_signed(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            &Ring::Int,
            "t",
            pairs.iter().map(|(e, c)| (*e, Scalar::from_int(&Ring::Int, *c))),
        )
    }

    #[test]
    fn arithmetic_and_shift() {
        let a = t(&[(0, 1), (1, 1)]);
        let b = t(&[(-1, 1), (0, -1)]);
        assert_eq!(a.mul(&b), t(&[(-1, 1), (1, -1)]));
        assert_eq!(a.shift(2), t(&[(2, 1), (3, 1)]));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.eval_at_one(), Scalar::from_int(&Ring::Int, 2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(t(&[(0, 1), (1, 1)]).to_string(), "t + 1");
        assert_eq!(t(&[(-1, 2), (2, -1)]).to_string(), "-t^2 + 2*t^-1");
        assert_eq!(t(&[]).to_string(), "0");
        assert_eq!(t(&[(1, 1)]).to_string(), "t");
    }

    #[test]
    fn map_scalars_drops_zeros() {
        let a = t(&[(0, 2), (1, 3)]);
        let f2 = Ring::Gf { p: 2 };
        let b = a
            .map_scalars(&f2, &mut |c| {
                crate::ring::embed(&Scalar::from_bigint(&Ring::Int, {
                    let crate::ring::Value::Int(n) = c.value() else { panic!() };
                    n
                }), &f2)
            })
            .unwrap();
        assert_eq!(b.support(), vec![1]);
    }
}
