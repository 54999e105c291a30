//! Graded module representations: left actions given by one matrix per
//! algebra basis element, columns holding images of module basis vectors.

use crate::algebra::{AlgebraRef, ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::Matrix;
use crate::ring::{embed, Ring, Scalar};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedModuleRep {
    algebra: AlgebraRef,
    field: Ring,
    degrees: Vec<i64>,
    action: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UngradedModuleRep {
    algebra: AlgebraRef,
    field: Ring,
    action: Vec<Matrix>,
}

impl GradedModuleRep {
    pub fn new(
        algebra: AlgebraRef,
        field: Ring,
        degrees: Vec<i64>,
        action: Vec<Matrix>,
    ) -> Result<GradedModuleRep> {
        if !field.is_field() {
            return Err(Error::FieldMismatch(format!("{field} is not a field")));
        }
        if action.len() != algebra.dim() {
            return Err(Error::ValidationError(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        let n = degrees.len();
        for (m, mat) in action.iter().enumerate() {
            if mat.nrows() != n || mat.ncols() != n {
                return Err(Error::ValidationError(format!(
                    "action of basis element {m} is {}x{}, expected {n}x{n}",
                    mat.nrows(),
                    mat.ncols()
                )));
            }
            if mat.ring() != &field {
                return Err(Error::RingMismatch(format!(
                    "action of basis element {m} lives over {}, module field is {field}",
                    mat.ring()
                )));
            }
        }
        // structure constants must embed into the module field
        for m in 0..algebra.dim() {
            for k in 0..algebra.dim() {
                for (_, c) in algebra.product(m, k) {
                    embed(c, &field)?;
                }
            }
        }
        Ok(GradedModuleRep { algebra, field, degrees, action })
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn action(&self, m: usize) -> &Matrix {
        &self.action[m]
    }

    pub fn action_matrices(&self) -> &[Matrix] {
        &self.action
    }

    /// Action matrix of an arbitrary algebra element given by its dense
    /// coefficient vector over the algebra's ring.
    pub fn action_of(&self, elem: &[Scalar]) -> Result<Matrix> {
        let n = self.dim();
        let mut out = Matrix::zero(&self.field, n, n);
        for (m, c) in elem.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = embed(c, &self.field)?;
            out = out.add(&self.action[m].scale(&c));
        }
        Ok(out)
    }

    /// Module basis indices of degree `i`, ascending.
    pub fn degree_indices(&self, i: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&r| self.degrees[r] == i).collect()
    }

    /// Occurring degrees, ascending, deduplicated.
    pub fn degree_support(&self) -> Vec<i64> {
        let set: std::collections::BTreeSet<i64> = self.degrees.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dim();
        let na = self.algebra.dim();
        for m in 0..na {
            let dm = self.algebra.degrees()[m];
            for r in 0..n {
                for s in 0..n {
                    if !self.action[m].get(r, s).is_zero()
                        && self.degrees[r] != dm + self.degrees[s]
                    {
                        report.violations.push(Violation::Homogeneity {
                            element: m,
                            row: r,
                            col: s,
                        });
                    }
                }
            }
        }
        let unit = &self.action[self.algebra.unit()];
        if *unit != Matrix::identity(&self.field, n) {
            report.violations.push(Violation::UnitAction);
        }
        for m in 0..na {
            for k in 0..na {
                let lhs = self.action[m].mul(&self.action[k]);
                let mut rhs = Matrix::zero(&self.field, n, n);
                for (r, c) in self.algebra.product(m, k) {
                    let c = embed(c, &self.field).expect("checked at construction");
                    rhs = rhs.add(&self.action[*r].scale(&c));
                }
                if lhs != rhs {
                    report.violations.push(Violation::RepresentationLaw { left: m, right: k });
                }
            }
        }
        report
    }

    /// The shifted module M<j>: degrees raised by j, action unchanged.
    pub fn shift(&self, j: i64) -> GradedModuleRep {
        GradedModuleRep {
            algebra: self.algebra.clone(),
            field: self.field.clone(),
            degrees: self.degrees.iter().map(|d| d + j).collect(),
            action: self.action.clone(),
        }
    }

    pub fn direct_sum(&self, other: &GradedModuleRep) -> Result<GradedModuleRep> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(
                "direct sum of modules over different algebras".into(),
            ));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "direct sum over {} and {}",
                self.field, other.field
            )));
        }
        let n1 = self.dim();
        let n2 = other.dim();
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        let action = (0..self.algebra.dim())
            .map(|m| {
                Matrix::from_fn(&self.field, n1 + n2, n1 + n2, |r, s| {
                    if r < n1 && s < n1 {
                        self.action[m].get(r, s).clone()
                    } else if r >= n1 && s >= n1 {
                        other.action[m].get(r - n1, s - n1).clone()
                    } else {
                        Scalar::zero(&self.field)
                    }
                })
            })
            .collect();
        Ok(GradedModuleRep { algebra: self.algebra.clone(), field: self.field.clone(), degrees, action })
    }

    pub fn forget_grading(&self) -> UngradedModuleRep {
        UngradedModuleRep {
            algebra: self.algebra.clone(),
            field: self.field.clone(),
            action: self.action.clone(),
        }
    }

    /// Extension of scalars along the canonical embedding of the module
    /// field into `target`.
    pub fn extend_scalars(&self, target: &Ring) -> Result<GradedModuleRep> {
        let action = self
            .action
            .iter()
            .map(|m| m.map(target, &mut |s| embed(s, target)))
            .collect::<Result<Vec<_>>>()?;
        GradedModuleRep::new(
            self.algebra.clone(),
            target.clone(),
            self.degrees.clone(),
            action,
        )
    }

    /// Applies a scalar map entrywise (a field morphism on entries),
    /// attaching the result to `algebra` (the specialized algebra).
    pub fn map_scalars(
        &self,
        algebra: AlgebraRef,
        target: &Ring,
        f: &mut dyn FnMut(&Scalar) -> Result<Scalar>,
    ) -> Result<GradedModuleRep> {
        let action = self
            .action
            .iter()
            .map(|m| m.map(target, f))
            .collect::<Result<Vec<_>>>()?;
        GradedModuleRep::new(algebra, target.clone(), self.degrees.clone(), action)
    }

    /// Conjugates the action by an invertible change of basis: new action
    /// = P^{-1} A P where P's columns are the new basis vectors; degree r
    /// of the new basis vector is supplied by the caller.
    pub fn change_basis(&self, p: &Matrix, pinv: &Matrix, degrees: Vec<i64>) -> GradedModuleRep {
        assert_eq!(degrees.len(), self.dim(), "degree list length mismatch");
        let action = self.action.iter().map(|a| pinv.mul(a).mul(p)).collect();
        GradedModuleRep {
            algebra: self.algebra.clone(),
            field: self.field.clone(),
            degrees,
            action,
        }
    }
}

impl UngradedModuleRep {
    pub fn new(algebra: AlgebraRef, field: Ring, action: Vec<Matrix>) -> Result<UngradedModuleRep> {
        let dim = action.first().map_or(0, Matrix::nrows);
        let graded = GradedModuleRep::new(algebra, field, vec![0; dim], action)?;
        Ok(graded.forget_grading())
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.action.first().map_or(0, Matrix::nrows)
    }

    pub fn action(&self, m: usize) -> &Matrix {
        &self.action[m]
    }

    pub fn action_matrices(&self) -> &[Matrix] {
        &self.action
    }

    pub fn action_of(&self, elem: &[Scalar]) -> Result<Matrix> {
        let n = self.dim();
        let mut out = Matrix::zero(&self.field, n, n);
        for (m, c) in elem.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = embed(c, &self.field)?;
            out = out.add(&self.action[m].scale(&c));
        }
        Ok(out)
    }

    /// Representation-law check (no grading data to verify).
    pub fn validate(&self) -> ValidationReport {
        let trivially_graded = GradedModuleRep {
            algebra: self.algebra.clone(),
            field: self.field.clone(),
            degrees: vec![0; self.dim()],
            action: self.action.clone(),
        };
        let mut report = ValidationReport::default();
        for v in trivially_graded.validate().violations {
            if !matches!(v, Violation::Homogeneity { .. }) {
                report.violations.push(v);
            }
        }
        report
    }

    /// The left regular module of the algebra over its own (field)
    /// coefficient ring.
    pub fn regular(algebra: AlgebraRef) -> Result<UngradedModuleRep> {
        let field = algebra.ring().clone();
        if !field.is_field() {
            return Err(Error::FieldMismatch(format!(
                "regular module needs a field-coefficient algebra, got {field}"
            )));
        }
        let action = (0..algebra.dim())
            .map(|m| algebra.left_regular(&algebra.basis_elem(m)))
            .collect();
        UngradedModuleRep::new(algebra, field, action)
    }

    pub fn direct_sum(&self, other: &UngradedModuleRep) -> Result<UngradedModuleRep> {
        let a = GradedModuleRep {
            algebra: self.algebra.clone(),
            field: self.field.clone(),
            degrees: vec![0; self.dim()],
            action: self.action.clone(),
        };
        let b = GradedModuleRep {
            algebra: other.algebra.clone(),
            field: other.field.clone(),
            degrees: vec![0; other.dim()],
            action: other.action.clone(),
        };
        Ok(a.direct_sum(&b)?.forget_grading())
    }
}

/// A nonnegative formal combination of shifted simples: index of the
/// simple to a Laurent polynomial in q with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedClass(pub BTreeMap<usize, LaurentPoly>);

impl GradedClass {
    pub fn empty() -> GradedClass {
        GradedClass(BTreeMap::new())
    }

    pub fn insert(&mut self, simple: usize, poly: LaurentPoly) {
        assert_eq!(poly.ring(), &Ring::Int, "class coefficients live over ZZ");
        assert_eq!(poly.var(), "q", "class coefficients use the symbol q");
        if !poly.is_zero() {
            self.0.insert(simple, poly);
        }
    }

    pub fn coefficient(&self, simple: usize) -> LaurentPoly {
        self.0
            .get(&simple)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(&Ring::Int, "q"))
    }

    /// Multiplies every coefficient by q^j (the class of the shift).
    pub fn shifted(&self, j: i64) -> GradedClass {
        GradedClass(self.0.iter().map(|(m, p)| (*m, p.shift(j))).collect())
    }

    pub fn add(&self, other: &GradedClass) -> GradedClass {
        let mut out = self.clone();
        for (m, p) in &other.0 {
            let cur = out.coefficient(*m).add(p);
            if cur.is_zero() {
                out.0.remove(m);
            } else {
                out.0.insert(*m, cur);
            }
        }
        out
    }
}

impl std::fmt::Display for GradedClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(m, p)| format!("[{}]: {}", m, p)).collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::ring::parse_scalar;
    use std::sync::Arc;

    /// The sign/trivial setup: group algebra of C2 over Q with modules
    /// e -> 1, g -> 1 and e -> 1, g -> -1.
    fn c2_module(sign: i64) -> GradedModuleRep {
        let alg = Arc::new(crate::algebra::tests::group_c2(&Ring::Rat));
        let one = Matrix::identity(&Ring::Rat, 1);
        let g = Matrix::from_rows(&Ring::Rat, vec![vec![Scalar::from_int(&Ring::Rat, sign)]]);
        GradedModuleRep::new(alg, Ring::Rat, vec![0], vec![one, g]).unwrap()
    }

    pub(crate) fn fermion_algebra(ring: &Ring) -> GradedAlgebra {
        // basis {1, x, y, xy}, deg (0, 1, -1, 0), x^2 = y^2 = 0,
        // y x = a - xy, x y = xy, and the induced products
        crate::algebra::tests::build(
            ring,
            &["one", "x", "y", "xy"],
            &[0, 1, -1, 0],
            0,
            &[
                ("one", "one", &[("one", "1")]),
                ("one", "x", &[("x", "1")]),
                ("one", "y", &[("y", "1")]),
                ("one", "xy", &[("xy", "1")]),
                ("x", "one", &[("x", "1")]),
                ("y", "one", &[("y", "1")]),
                ("xy", "one", &[("xy", "1")]),
                ("x", "x", &[]),
                ("y", "y", &[]),
                ("x", "y", &[("xy", "1")]),
                ("y", "x", &[("one", "a"), ("xy", "-1")]),
                ("x", "xy", &[]),
                ("xy", "x", &[("x", "a")]),
                ("y", "xy", &[("y", "a")]),
                ("xy", "y", &[]),
                ("xy", "xy", &[("xy", "a")]),
            ],
        )
    }

    /// The 2-dimensional fermion module V over K = Frac(Q[a]): basis
    /// (w, u) in degrees (0, 1); x w = u, y u = a w, xy u = a u.
    pub(crate) fn fermion_module() -> GradedModuleRep {
        let a_ring = Ring::poly(Ring::Rat, &["a"]);
        let k = Ring::frac(a_ring.clone());
        let alg = Arc::new(fermion_algebra(&a_ring));
        let parse = |s: &str| parse_scalar(s, &k).unwrap();
        let rows = |r: [[&str; 2]; 2]| {
            Matrix::from_rows(
                &k,
                r.iter().map(|row| row.iter().map(|e| parse(e)).collect()).collect(),
            )
        };
        let action = vec![
            rows([["1", "0"], ["0", "1"]]),
            rows([["0", "0"], ["1", "0"]]),
            rows([["0", "a"], ["0", "0"]]),
            rows([["0", "0"], ["0", "a"]]),
        ];
        GradedModuleRep::new(alg, k, vec![0, 1], action).unwrap()
    }

    #[test]
    fn fermion_fixture_validates() {
        let alg = fermion_algebra(&Ring::poly(Ring::Rat, &["a"]));
        assert!(alg.validate().is_ok(), "{}", alg.validate());
        let v = fermion_module();
        assert!(v.validate().is_ok(), "{}", v.validate());
    }

    #[test]
    fn homogeneity_violation_when_degrees_are_flattened() {
        let v = fermion_module();
        let flat = GradedModuleRep::new(
            v.algebra().clone(),
            v.field().clone(),
            vec![0, 0],
            v.action_matrices().to_vec(),
        )
        .unwrap();
        let report = flat.validate();
        assert!(report
            .violations
            .contains(&Violation::Homogeneity { element: 1, row: 1, col: 0 }));
    }

    #[test]
    fn unit_action_violation() {
        let alg = Arc::new(crate::algebra::tests::group_c2(&Ring::Rat));
        let two = Matrix::from_rows(&Ring::Rat, vec![vec![Scalar::from_int(&Ring::Rat, 2)]]);
        let g = Matrix::identity(&Ring::Rat, 1);
        let m = GradedModuleRep::new(alg, Ring::Rat, vec![0], vec![two, g]).unwrap();
        assert!(m.validate().violations.contains(&Violation::UnitAction));
    }

    #[test]
    fn shift_composes_and_preserves_validity() {
        let v = fermion_module();
        let s = v.shift(2).shift(-1);
        assert_eq!(s, v.shift(1));
        assert_eq!(s.degrees(), &[1, 2]);
        assert!(s.validate().is_ok());
        assert_eq!(v.shift(0), v);
    }

    #[test]
    fn direct_sum_blocks_and_dimensions() {
        let t = c2_module(1);
        let s = c2_module(-1);
        let sum = t.direct_sum(&s).unwrap();
        assert_eq!(sum.dim(), 2);
        assert!(sum.validate().is_ok());
        assert!(sum.action(1).get(0, 1).is_zero());
        let zero = GradedModuleRep::new(
            t.algebra().clone(),
            Ring::Rat,
            vec![],
            vec![Matrix::zero(&Ring::Rat, 0, 0); 2],
        )
        .unwrap();
        assert_eq!(t.direct_sum(&zero).unwrap(), t);
    }

    #[test]
    fn extend_scalars_into_cyclotomic() {
        let t = c2_module(-1);
        let l = Ring::cyclotomic(3);
        let e = t.extend_scalars(&l).unwrap();
        assert!(e.validate().is_ok());
        assert_eq!(e.field(), &l);
        assert_eq!(e.action(1).get(0, 0), &Scalar::from_int(&l, -1));
    }

    #[test]
    fn forget_grading_ignores_shift() {
        let v = fermion_module();
        assert_eq!(v.shift(3).forget_grading(), v.forget_grading());
    }

    #[test]
    fn regular_module_of_group_algebra() {
        let alg = Arc::new(crate::algebra::tests::group_c2(&Ring::Rat));
        let reg = UngradedModuleRep::regular(alg).unwrap();
        assert_eq!(reg.dim(), 2);
        assert!(reg.validate().is_ok());
    }

    #[test]
    fn graded_class_ops() {
        let mut c = GradedClass::empty();
        c.insert(0, LaurentPoly::from_terms(&Ring::Int, "q", [(0, Scalar::one(&Ring::Int))]));
        let shifted = c.shifted(2);
        assert_eq!(shifted.coefficient(0).support(), vec![2]);
        let sum = c.add(&shifted);
        assert_eq!(sum.coefficient(0).support(), vec![0, 2]);
        assert_eq!(sum.to_string(), "[0]: q^2 + 1");
    }
}
