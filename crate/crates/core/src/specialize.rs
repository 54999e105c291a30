//! Specializations theta: A -> L, denominator clearing over the
//! localization of A at ker theta, modular reduction, the integrality
//! check, and towers of specializations with their factoring morphism.
//!
//! Abstract valuation rings between A and K never appear here: the
//! localization A_{ker theta} is the computable stand-in, and the final
//! answers are independent of that choice.

use crate::algebra::GradedAlgebra;
use crate::character::Fingerprint;
use crate::error::{Error, Result};
use crate::rep::GradedModuleRep;
use crate::ring::{embed, Ring, Scalar, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A ring morphism from a parameter ring A (polynomial or Laurent over
/// ZZ or QQ) to a computable field L, given by generator assignments,
/// together with its partial extension to K = Frac(A) defined away from
/// vanishing denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    name: String,
    source: Ring,
    target: Ring,
    vars: Vec<String>,
    assignments: BTreeMap<String, Scalar>,
}

pub fn make_specialization(
    name: &str,
    source: &Ring,
    target: &Ring,
    assignments: &BTreeMap<String, Scalar>,
) -> Result<Specialization> {
    let laurent = match source {
        Ring::Poly { base, .. } => {
            check_param_base(base)?;
            false
        }
        Ring::Laurent { base, .. } => {
            check_param_base(base)?;
            true
        }
        other => {
            return Err(Error::RingMismatch(format!(
                "specialization source must be a polynomial or Laurent ring over ZZ or QQ, got {other}"
            )))
        }
    };
    if !target.is_field() {
        return Err(Error::FieldMismatch(format!(
            "specialization target must be a field, got {target}"
        )));
    }
    let vars = source.visible_vars();
    for v in &vars {
        if !assignments.contains_key(v) {
            return Err(Error::UndeclaredVariable(format!("no assignment for variable {v}")));
        }
    }
    for (k, val) in assignments {
        if !vars.contains(k) {
            return Err(Error::UndeclaredVariable(format!(
                "assignment for {k}, which is not a variable of {source}"
            )));
        }
        if val.ring() != target {
            return Err(Error::RingMismatch(format!(
                "assignment for {k} lives over {}, target is {target}",
                val.ring()
            )));
        }
        if laurent && val.is_zero() {
            return Err(Error::NonUnitAssignment(format!(
                "Laurent variable {k} must map to an invertible value, got 0"
            )));
        }
    }
    check_fraction_field(target, assignments)?;
    Ok(Specialization {
        name: name.to_string(),
        source: source.clone(),
        target: target.clone(),
        vars,
        assignments: assignments.clone(),
    })
}

fn check_param_base(base: &Ring) -> Result<()> {
    match base {
        Ring::Int | Ring::Rat => Ok(()),
        other => Err(Error::RingMismatch(format!(
            "parameter ring base must be ZZ or QQ, got {other}"
        ))),
    }
}

/// Structural stand-in for "L is the fraction field of theta(A)": the
/// target must be QQ, a prime field, or a cyclotomic field one of whose
/// assigned values is a primitive root of unity of full order. Richer
/// targets are rejected.
fn check_fraction_field(target: &Ring, assignments: &BTreeMap<String, Scalar>) -> Result<()> {
    match target {
        Ring::Rat | Ring::Gf { .. } => Ok(()),
        Ring::Cyclotomic { e, .. } => {
            let e = i64::from(*e);
            let primes = prime_divisors(e);
            for val in assignments.values() {
                if val.is_zero() {
                    continue;
                }
                let full = val.pow(e)?.is_one();
                let proper = primes
                    .iter()
                    .all(|p| !val.pow(e / p).map(|x| x.is_one()).unwrap_or(false));
                if full && proper {
                    return Ok(());
                }
            }
            Err(Error::FractionFieldMismatch(format!(
                "no assigned value generates {target}: a primitive root of unity of order {e} must appear among the assignments"
            )))
        }
        other => Err(Error::FractionFieldMismatch(format!(
            "target {other} cannot be the fraction field of the image of a parameter ring"
        ))),
    }
}

fn prime_divisors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Specialization {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn assignment(&self, var: &str) -> Option<&Scalar> {
        self.assignments.get(var)
    }

    /// Applies theta. Defined on A, on constants, and on the localization
    /// of A at ker theta inside K = Frac(A); a denominator in the kernel
    /// is reported as NonInvertibleDenominator.
    pub fn hom_apply(&self, x: &Scalar) -> Result<Scalar> {
        if *x.ring() == self.source {
            if let Value::Poly(terms) = x.value() {
                return self.eval_terms(terms);
            }
            unreachable!("polynomial ring scalar without polynomial value");
        }
        if let Ring::Frac { base } = x.ring() {
            if **base == self.source {
                let (num, den) = x.frac_parts().expect("fraction scalar");
                let num = self.hom_apply(&num)?;
                let den = self.hom_apply(&den)?;
                if den.is_zero() {
                    return Err(Error::NonInvertibleDenominator(format!(
                        "denominator of {x} lies in the kernel of {}",
                        self.name
                    )));
                }
                return num.try_div(&den);
            }
        }
        match x.ring() {
            Ring::Int | Ring::Rat => embed(x, &self.target),
            other => Err(Error::RingMismatch(format!(
                "{} is defined on {} and its fraction field, not on {other}",
                self.name, self.source
            ))),
        }
    }

    fn eval_terms(&self, terms: &crate::ring::TermMap) -> Result<Scalar> {
        let mut acc = Scalar::zero(&self.target);
        for (exps, coeff) in terms {
            let base = match &self.source {
                Ring::Poly { base, .. } | Ring::Laurent { base, .. } => base,
                _ => unreachable!("source is polynomial or Laurent"),
            };
            let c = Scalar::new_unchecked((**base).clone(), coeff.clone());
            let mut term = embed(&c, &self.target)?;
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                term = term.mul(&self.assignments[&self.vars[i]].pow(e)?);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// True when x in A (or a denominator from K) lies in ker theta.
    pub fn vanishes(&self, x: &Scalar) -> Result<bool> {
        Ok(self.hom_apply(x)?.is_zero())
    }
}

/// The specialized algebra LH: structure constants mapped through theta.
pub fn specialize_algebra(h: &GradedAlgebra, theta: &Specialization) -> Result<GradedAlgebra> {
    h.map_scalars(theta.target(), &mut |s| theta.hom_apply(s))
}

/// Diagonal denominator clearing: rescales homogeneous basis vectors by
/// nonzero elements of K until no action-matrix entry has a denominator
/// in ker theta. Returns the rescaled module together with the record of
/// scale factors (new basis vector = factor times old one).
pub fn clear_denominators(
    module: &GradedModuleRep,
    theta: &Specialization,
) -> Result<(GradedModuleRep, Vec<Scalar>)> {
    let k = module.field().clone();
    if k != Ring::frac(theta.source().clone()) {
        return Err(Error::RingMismatch(format!(
            "module field {k} is not the fraction field of {}",
            theta.source()
        )));
    }
    let n = module.dim();
    let mut action: Vec<_> = module.action_matrices().to_vec();
    let mut factors = vec![Scalar::one(&k); n];
    let bound = n * module.algebra().dim() + 1;
    for _ in 0..bound {
        let Some((m, r, s)) = first_offender(&action, theta)? else {
            let cleared = GradedModuleRep::new(
                module.algebra().clone(),
                k,
                module.degrees().to_vec(),
                action,
            )?;
            return Ok((cleared, factors));
        };
        // scale basis vector s by the offending denominator: column s is
        // multiplied by it, row s divided by it
        let (_, den) = action[m].get(r, s).frac_parts().expect("fraction field entry");
        let d = embed(&den, &k)?;
        factors[s] = factors[s].mul(&d);
        for mat in &mut action {
            for row in 0..n {
                let v = mat.get(row, s).mul(&d);
                mat.set(row, s, v);
            }
            for col in 0..n {
                let v = mat.get(s, col).try_div(&d)?;
                mat.set(s, col, v);
            }
        }
    }
    let mut offenders = Vec::new();
    if let Some((m, r, s)) = first_offender(&action, theta)? {
        offenders.push(format!(
            "action of {} at ({r},{s}) = {}",
            module.algebra().label(m),
            action[m].get(r, s)
        ));
    }
    Err(Error::LatticeNotFound(format!(
        "diagonal rescaling did not terminate within {bound} rounds; still offending: {}",
        offenders.join("; ")
    )))
}

fn first_offender(
    action: &[crate::linalg::Matrix],
    theta: &Specialization,
) -> Result<Option<(usize, usize, usize)>> {
    for (m, mat) in action.iter().enumerate() {
        for r in 0..mat.nrows() {
            for s in 0..mat.ncols() {
                let (_, den) = mat.get(r, s).frac_parts().expect("fraction field entry");
                if theta.vanishes(&den)? {
                    return Ok(Some((m, r, s)));
                }
            }
        }
    }
    Ok(None)
}

/// Entrywise application of theta to a module whose entries already lie
/// in the localization; the result lives over the specialized algebra.
pub fn modular_reduce(
    module: &GradedModuleRep,
    theta: &Specialization,
) -> Result<GradedModuleRep> {
    let lh = Arc::new(specialize_algebra(module.algebra(), theta)?);
    module.map_scalars(lh, theta.target(), &mut |s| theta.hom_apply(s))
}

/// True iff every coefficient of every stored characteristic polynomial
/// of `f` lies in the parameter ring itself (which is integrally closed
/// in its fraction field), rather than merely in K.
pub fn check_integrality(f: &Fingerprint, a: &Ring) -> bool {
    if *f.field() != Ring::frac(a.clone()) {
        return false;
    }
    let words: Vec<String> = f.words().cloned().collect();
    for word in words {
        if let Some(by_deg) = f.value(&word) {
            for p in by_deg.values() {
                if p.terms().any(|(_, c)| !c.is_integral()) {
                    return false;
                }
            }
        }
    }
    true
}

/// A pair of specializations of the same parameter ring with nested
/// kernels, so theta-prime factors as phi after theta through the
/// intermediate ring B inside L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationTower {
    theta: Specialization,
    theta_prime: Specialization,
    b: Ring,
}

/// Builds a tower, verifying kernel nesting and the factorization
/// phi(theta(x)) = theta-prime(x) on a detection set: the constants 1 and
/// -1, every source variable, and the caller-supplied elements (the
/// structure constants of the algebra under study).
pub fn make_tower(
    theta: &Specialization,
    theta_prime: &Specialization,
    b: &Ring,
    detection: &[Scalar],
) -> Result<SpecializationTower> {
    if theta.source() != theta_prime.source() {
        return Err(Error::RingMismatch(format!(
            "tower specializations have different sources: {} and {}",
            theta.source(),
            theta_prime.source()
        )));
    }
    check_phi_shape(b, theta.target(), theta_prime.target())?;
    let tower = SpecializationTower {
        theta: theta.clone(),
        theta_prime: theta_prime.clone(),
        b: b.clone(),
    };

    let source = theta.source().clone();
    let mut set: Vec<Scalar> = vec![Scalar::one(&source), Scalar::from_int(&source, -1)];
    for v in &source.visible_vars() {
        set.push(Scalar::var(&source, v)?);
    }
    set.extend_from_slice(detection);
    let images: Vec<(Scalar, Scalar, Scalar)> = set
        .iter()
        .map(|x| Ok((x.clone(), theta.hom_apply(x)?, theta_prime.hom_apply(x)?)))
        .collect::<Result<_>>()?;
    for (x, lx, lpx) in &images {
        let through = tower.phi_value(lx).map_err(|e| match e {
            Error::NonInvertibleDenominator(_) | Error::RingMismatch(_) => {
                Error::PhiNotDefinedOnB(format!(
                    "theta({x}) = {lx} lies outside the domain of phi on {b}"
                ))
            }
            other => other,
        })?;
        if through != *lpx {
            // name a witness pair when one exists in the detection set
            for (y, ly, lpy) in &images {
                if ly == lx && lpy != lpx {
                    return Err(Error::KernelNotNested(format!(
                        "theta maps {x} and {y} both to {lx}, but theta-prime maps them to {lpx} and {lpy}"
                    )));
                }
            }
            return Err(Error::KernelNotNested(format!(
                "phi(theta({x})) = {through} but theta-prime({x}) = {lpx}"
            )));
        }
    }
    Ok(tower)
}

/// Structural check that phi can be defined on B and lands in L-prime.
fn check_phi_shape(b: &Ring, l: &Ring, lp: &Ring) -> Result<()> {
    let inside_l = match (b, l) {
        (Ring::Int, _) => true,
        (Ring::Rat, l) => l.characteristic() == 0,
        (Ring::Cyclotomic { e, .. }, Ring::Cyclotomic { e: el, .. }) => el % e == 0,
        (Ring::Gf { p }, Ring::Gf { p: pl }) => p == pl,
        _ => false,
    };
    if !inside_l {
        return Err(Error::PhiNotDefinedOnB(format!("{b} is not an intermediate ring of {l}")));
    }
    let extends = match (b, lp) {
        (Ring::Int, _) => true,
        (Ring::Rat, lp) => lp.characteristic() == 0,
        (Ring::Cyclotomic { e, .. }, Ring::Cyclotomic { e: ep, .. }) => ep % e == 0,
        (Ring::Cyclotomic { e, .. }, Ring::Rat) => *e <= 2,
        (Ring::Gf { p }, Ring::Gf { p: pp }) => p == pp,
        _ => false,
    };
    if !extends {
        return Err(Error::PhiNotDefinedOnB(format!("no morphism from {b} into {lp}")));
    }
    // the value map below must know how to move L-elements onward
    let supported = l == lp
        || matches!(l, Ring::Rat)
        || matches!((l, lp), (Ring::Cyclotomic { e, .. }, Ring::Cyclotomic { e: ep, .. }) if ep % e == 0);
    if !supported {
        return Err(Error::PhiNotDefinedOnB(format!(
            "no computable morphism from {l} toward {lp} is available"
        )));
    }
    Ok(())
}

impl SpecializationTower {
    pub fn theta(&self) -> &Specialization {
        &self.theta
    }

    pub fn theta_prime(&self) -> &Specialization {
        &self.theta_prime
    }

    pub fn intermediate(&self) -> &Ring {
        &self.b
    }

    /// Applies the factoring morphism phi to an element of L. Partial:
    /// elements outside the localization of B at the relevant kernel are
    /// rejected (NonInvertibleDenominator via the embedding).
    pub fn phi_apply(&self, x: &Scalar) -> Result<Scalar> {
        if x.ring() != self.theta.target() {
            return Err(Error::RingMismatch(format!(
                "phi is defined on {}, got an element of {}",
                self.theta.target(),
                x.ring()
            )));
        }
        self.phi_value(x)
    }

    fn phi_value(&self, x: &Scalar) -> Result<Scalar> {
        let l = self.theta.target();
        let lp = self.theta_prime.target();
        if l == lp {
            return Ok(x.clone());
        }
        match (l, lp) {
            (Ring::Rat, _) => embed(x, lp),
            (Ring::Cyclotomic { e, var }, Ring::Cyclotomic { e: ep, .. }) => {
                let step = i64::from(ep / e);
                let zeta = Scalar::var(lp, &var_name_of(lp).unwrap_or_else(|| var.clone()))?;
                let Value::Cyc(coeffs) = x.value() else {
                    unreachable!("cyclotomic scalar without cyclotomic value")
                };
                let mut acc = Scalar::zero(lp);
                for (i, c) in coeffs.iter().enumerate() {
                    let term = Scalar::from_rational(lp, c)?
                        .mul(&zeta.pow(i64::try_from(i).unwrap() * step)?);
                    acc = acc.add(&term);
                }
                Ok(acc)
            }
            _ => Err(Error::RingMismatch(format!("no morphism from {l} to {lp}"))),
        }
    }
}

fn var_name_of(r: &Ring) -> Option<String> {
    match r {
        Ring::Cyclotomic { var, .. } => Some(var.clone()),
        _ => None,
    }
}

/// theta applied to a fingerprint coefficientwise: the transport map on
/// the K-side of the comparison diagram.
pub fn transport_fingerprint(
    theta: &Specialization,
    f: &Fingerprint,
) -> Result<Fingerprint> {
    f.map_scalars(theta.target(), &mut |s| theta.hom_apply(s))
}

/// theta applied to a graded character coefficientwise.
pub fn transport_character(
    theta: &Specialization,
    chi: &crate::character::GradedCharacter,
) -> Result<crate::character::GradedCharacter> {
    chi.map_scalars(theta.target(), &mut |s| theta.hom_apply(s))
}
