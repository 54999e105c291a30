//! Coefficient rings and exact scalar arithmetic.
//!
//! A [`Ring`] is a structural descriptor: the integers, the rationals, a
//! sparse polynomial or Laurent ring over them, the fraction field of such a
//! ring, a cyclotomic field presented as Q[x]/Phi_e, or a prime field. A
//! [`Scalar`] is an element of one of these rings kept in a canonical
//! representation, so equality is structural equality.

pub(crate) mod ffpoly;
mod gcd;
mod parse;
mod ratpoly;
mod scalar;

pub use ffpoly::FpPoly;
pub use parse::{parse_scalar, parse_structure_scalar};
pub use ratpoly::{cyclotomic_poly, RatPoly};
pub use scalar::{embed, Scalar, TermMap, Value};
pub(crate) use scalar::join_signed;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Structural descriptor of a coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ring {
    /// The ring of integers Z.
    Int,
    /// The field of rationals Q.
    Rat,
    /// Sparse multivariate polynomial ring `base[vars]`.
    Poly { base: Arc<Ring>, vars: Vec<String> },
    /// Sparse multivariate Laurent ring `base[vars, vars^-1]`.
    Laurent { base: Arc<Ring>, vars: Vec<String> },
    /// Fraction field of an integral domain.
    Frac { base: Arc<Ring> },
    /// Cyclotomic field Q(zeta_e) = Q[var]/Phi_e(var).
    Cyclotomic { e: u32, var: String },
    /// Prime field F_p, `p` prime.
    Gf { p: u64 },
}

impl Ring {
    pub fn poly(base: Ring, vars: &[&str]) -> Ring {
        Ring::Poly {
            base: Arc::new(base),
            vars: vars.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn laurent(base: Ring, vars: &[&str]) -> Ring {
        Ring::Laurent {
            base: Arc::new(base),
            vars: vars.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn frac(base: Ring) -> Ring {
        Ring::Frac { base: Arc::new(base) }
    }

    pub fn cyclotomic(e: u32) -> Ring {
        Ring::Cyclotomic { e, var: "z".to_string() }
    }

    /// Degree of the cyclotomic field Q(zeta_e) over Q.
    pub fn euler_phi(e: u32) -> u32 {
        let mut n = e;
        let mut result = e;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                while n.is_multiple_of(p) {
                    n /= p;
                }
                result -= result / p;
            }
            p += 1;
        }
        if n > 1 {
            result -= result / n;
        }
        result
    }

    pub fn is_field(&self) -> bool {
        match self {
            Ring::Rat | Ring::Frac { .. } | Ring::Cyclotomic { .. } | Ring::Gf { .. } => true,
            Ring::Int | Ring::Poly { .. } | Ring::Laurent { .. } => false,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Gf { p } => *p,
            _ => 0,
        }
    }

    /// Variables usable in expressions over this ring, innermost first.
    pub fn visible_vars(&self) -> Vec<String> {
        match self {
            Ring::Int | Ring::Rat | Ring::Gf { .. } => Vec::new(),
            Ring::Cyclotomic { var, .. } => vec![var.clone()],
            Ring::Poly { base, vars } | Ring::Laurent { base, vars } => {
                let mut v = base.visible_vars();
                v.extend(vars.iter().cloned());
                v
            }
            Ring::Frac { base } => base.visible_vars(),
        }
    }

    /// Checks that the descriptor stays inside the supported shapes:
    /// polynomial and Laurent rings over Z or Q, fraction fields of those,
    /// Q, cyclotomic fields and prime fields.
    pub fn validate(&self) -> Result<()> {
        match self {
            Ring::Int | Ring::Rat => Ok(()),
            Ring::Gf { p } => {
                if *p < 2 || !is_prime(*p) {
                    return Err(Error::SchemaError(format!("{p} is not prime")));
                }
                Ok(())
            }
            Ring::Cyclotomic { e, var } => {
                if *e == 0 {
                    return Err(Error::SchemaError("cyclotomic index must be positive".into()));
                }
                if var.is_empty() {
                    return Err(Error::SchemaError("cyclotomic generator needs a name".into()));
                }
                Ok(())
            }
            Ring::Poly { base, vars } | Ring::Laurent { base, vars } => {
                if vars.is_empty() {
                    return Err(Error::SchemaError("polynomial ring needs at least one variable".into()));
                }
                let mut seen = std::collections::BTreeSet::new();
                for v in vars {
                    if v.is_empty() || !seen.insert(v.clone()) {
                        return Err(Error::SchemaError(format!("bad variable list {vars:?}")));
                    }
                }
                match base.as_ref() {
                    Ring::Int | Ring::Rat => Ok(()),
                    other => Err(Error::SchemaError(format!(
                        "polynomial base must be the integers or the rationals, got {other}"
                    ))),
                }
            }
            Ring::Frac { base } => match base.as_ref() {
                Ring::Int => Ok(()),
                Ring::Poly { .. } | Ring::Laurent { .. } => base.validate(),
                other => Err(Error::SchemaError(format!(
                    "fraction field base must be an integral domain that is not already a field, got {other}"
                ))),
            },
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Int => write!(f, "ZZ"),
            Ring::Rat => write!(f, "QQ"),
            Ring::Gf { p } => write!(f, "GF({p})"),
            Ring::Cyclotomic { e, .. } => write!(f, "QQ(zeta_{e})"),
            Ring::Poly { base, vars } => write!(f, "{}[{}]", base, vars.join(",")),
            Ring::Laurent { base, vars } => {
                let vs: Vec<String> = vars.iter().map(|v| format!("{v},{v}^-1")).collect();
                write!(f, "{}[{}]", base, vs.join(","))
            }
            Ring::Frac { base } => write!(f, "Frac({base})"),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Result<u64> {
    let a = a % p;
    if a == 0 {
        return Err(Error::DivisionByZero(format!("0 has no inverse mod {p}")));
    }
    Ok(pow_mod(a, p - 2, p))
}

/// JSON wire form of a ring descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingDescriptor {
    Integers,
    Rationals,
    Polynomial {
        base: Box<RingDescriptor>,
        vars: Vec<String>,
    },
    Laurent {
        base: Box<RingDescriptor>,
        vars: Vec<String>,
    },
    Fraction {
        base: Box<RingDescriptor>,
    },
    Cyclotomic {
        e: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        var: Option<String>,
    },
    PrimeField {
        p: u64,
    },
}

impl RingDescriptor {
    pub fn to_ring(&self) -> Result<Ring> {
        let ring = match self {
            RingDescriptor::Integers => Ring::Int,
            RingDescriptor::Rationals => Ring::Rat,
            RingDescriptor::Polynomial { base, vars } => Ring::Poly {
                base: Arc::new(base.to_ring()?),
                vars: vars.clone(),
            },
            RingDescriptor::Laurent { base, vars } => Ring::Laurent {
                base: Arc::new(base.to_ring()?),
                vars: vars.clone(),
            },
            RingDescriptor::Fraction { base } => Ring::Frac {
                base: Arc::new(base.to_ring()?),
            },
            RingDescriptor::Cyclotomic { e, var } => Ring::Cyclotomic {
                e: *e,
                var: var.clone().unwrap_or_else(|| "z".to_string()),
            },
            RingDescriptor::PrimeField { p } => Ring::Gf { p: *p },
        };
        ring.validate()?;
        Ok(ring)
    }

    pub fn from_ring(ring: &Ring) -> RingDescriptor {
        match ring {
            Ring::Int => RingDescriptor::Integers,
            Ring::Rat => RingDescriptor::Rationals,
            Ring::Poly { base, vars } => RingDescriptor::Polynomial {
                base: Box::new(RingDescriptor::from_ring(base)),
                vars: vars.clone(),
            },
            Ring::Laurent { base, vars } => RingDescriptor::Laurent {
                base: Box::new(RingDescriptor::from_ring(base)),
                vars: vars.clone(),
            },
            Ring::Frac { base } => RingDescriptor::Fraction {
                base: Box::new(RingDescriptor::from_ring(base)),
            },
            Ring::Cyclotomic { e, var } => RingDescriptor::Cyclotomic {
                e: *e,
                var: if var == "z" { None } else { Some(var.clone()) },
            },
            Ring::Gf { p } => RingDescriptor::PrimeField { p: *p },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_phi_values() {
        let expected = [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4), (6, 2), (8, 4), (12, 4)];
        for (e, phi) in expected {
            assert_eq!(Ring::euler_phi(e), phi, "phi({e})");
        }
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(10007));
        assert!(!is_prime(1));
        assert!(!is_prime(10011));
        assert!(is_prime(4294967311)); // prime just above 2^32
    }

    #[test]
    fn descriptor_round_trip() {
        let k = Ring::frac(Ring::laurent(Ring::Int, &["v"]));
        let dto = RingDescriptor::from_ring(&k);
        assert_eq!(dto.to_ring().unwrap(), k);
    }

    #[test]
    fn rejects_nested_poly_base() {
        let bad = Ring::poly(Ring::poly(Ring::Int, &["a"]), &["b"]);
        assert!(bad.validate().is_err());
    }
}
