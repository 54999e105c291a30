//! Graded algebras presented by a homogeneous basis and a structure
//! table. The basis is required to be homogeneous, so each degree piece
//! is literally a sub-list of basis indices.

use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar};
use std::fmt;
use std::sync::Arc;

/// Sparse product vector: (basis index, nonzero coefficient), ascending.
pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    ring: Ring,
    basis: Vec<String>,
    degrees: Vec<i64>,
    unit: usize,
    /// structure[m][k] = b_m * b_k as a sparse vector.
    structure: Vec<Vec<SparseVec>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    GradingClosure { left: usize, right: usize, support: usize, expected: i64, found: i64 },
    Associativity { left: usize, mid: usize, right: usize },
    UnitDegree { found: i64 },
    UnitLaw { side: &'static str, with: usize },
    Homogeneity { element: usize, row: usize, col: usize },
    RepresentationLaw { left: usize, right: usize },
    UnitAction,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GradingClosure { left, right, support, expected, found } => write!(
                f,
                "grading closure fails at product ({left},{right}): support {support} has degree {found}, expected {expected}"
            ),
            Violation::Associativity { left, mid, right } => {
                write!(f, "associativity fails at triple ({left},{mid},{right})")
            }
            Violation::UnitDegree { found } => {
                write!(f, "unit element has degree {found}, expected 0")
            }
            Violation::UnitLaw { side, with } => {
                write!(f, "unit law fails on the {side} against basis element {with}")
            }
            Violation::Homogeneity { element, row, col } => write!(
                f,
                "homogeneity fails in action of basis element {element} at entry ({row},{col})"
            ),
            Violation::RepresentationLaw { left, right } => {
                write!(f, "representation law fails at product ({left},{right})")
            }
            Violation::UnitAction => write!(f, "unit does not act as the identity"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "OK");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl GradedAlgebra {
    /// Shape-checks the presentation; semantic laws are checked by
    /// `validate`, which reports violations instead of failing.
    pub fn new(
        ring: Ring,
        basis: Vec<String>,
        degrees: Vec<i64>,
        unit: usize,
        structure: Vec<Vec<SparseVec>>,
    ) -> Result<GradedAlgebra> {
        let n = basis.len();
        if degrees.len() != n {
            return Err(Error::ValidationError(format!(
                "{} degrees for {} basis elements",
                degrees.len(),
                n
            )));
        }
        if unit >= n {
            return Err(Error::ValidationError(format!("unit index {unit} out of range")));
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in &basis {
            if !seen.insert(b) {
                return Err(Error::ValidationError(format!("duplicate basis label `{b}`")));
            }
        }
        if structure.len() != n || structure.iter().any(|row| row.len() != n) {
            return Err(Error::ValidationError("structure table is not N x N".into()));
        }
        for row in &structure {
            for prod in row {
                for (idx, c) in prod {
                    if *idx >= n {
                        return Err(Error::ValidationError(format!(
                            "product support index {idx} out of range"
                        )));
                    }
                    if c.ring() != &ring {
                        return Err(Error::RingMismatch(format!(
                            "structure constant in {}, algebra over {}",
                            c.ring(),
                            ring
                        )));
                    }
                }
            }
        }
        // normalize: sparse vectors sorted, no zeros
        let structure = structure
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|mut prod| {
                        prod.retain(|(_, c)| !c.is_zero());
                        prod.sort_by_key(|(i, _)| *i);
                        prod
                    })
                    .collect()
            })
            .collect();
        Ok(GradedAlgebra { ring, basis, degrees, unit, structure })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis
    }

    pub fn label(&self, m: usize) -> &str {
        &self.basis[m]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn product(&self, m: usize, k: usize) -> &SparseVec {
        &self.structure[m][k]
    }

    /// Indices of the degree-0 basis elements, ascending.
    pub fn deg0_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&m| self.degrees[m] == 0).collect()
    }

    pub fn is_trivially_graded(&self) -> bool {
        self.degrees.iter().all(|&d| d == 0)
    }

    /// Product of two elements given as dense coefficient vectors.
    pub fn elem_mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        assert_eq!(x.len(), n, "element length mismatch");
        assert_eq!(y.len(), n, "element length mismatch");
        let mut out = vec![Scalar::zero(&self.ring); n];
        for (m, cx) in x.iter().enumerate() {
            if cx.is_zero() {
                continue;
            }
            for (k, cy) in y.iter().enumerate() {
                if cy.is_zero() {
                    continue;
                }
                let c = cx.mul(cy);
                for (r, sc) in &self.structure[m][k] {
                    out[*r] = out[*r].add(&c.mul(sc));
                }
            }
        }
        out
    }

    pub fn basis_elem(&self, m: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(&self.ring); self.dim()];
        v[m] = Scalar::one(&self.ring);
        v
    }

    /// Matrix of left multiplication by `x` in the algebra basis
    /// (columns are images of basis vectors).
    pub fn left_regular(&self, x: &[Scalar]) -> crate::linalg::Matrix {
        let n = self.dim();
        let mut mat = crate::linalg::Matrix::zero(&self.ring, n, n);
        for s in 0..n {
            let col = self.elem_mul(x, &self.basis_elem(s));
            for (r, c) in col.into_iter().enumerate() {
                if !c.is_zero() {
                    mat.set(r, s, c);
                }
            }
        }
        mat
    }

    /// Applies a coefficient-ring morphism to every structure constant,
    /// yielding the specialized algebra over `target`.
    pub fn map_scalars(
        &self,
        target: &Ring,
        f: &mut dyn FnMut(&Scalar) -> Result<Scalar>,
    ) -> Result<GradedAlgebra> {
        let mut structure = Vec::with_capacity(self.dim());
        for row in &self.structure {
            let mut new_row = Vec::with_capacity(self.dim());
            for prod in row {
                let mut out = SparseVec::new();
                for (r, c) in prod {
                    let mapped = f(c)?;
                    assert_eq!(mapped.ring(), target, "map landed in the wrong ring");
                    if !mapped.is_zero() {
                        out.push((*r, mapped));
                    }
                }
                new_row.push(out);
            }
            structure.push(new_row);
        }
        Ok(GradedAlgebra {
            ring: target.clone(),
            basis: self.basis.clone(),
            degrees: self.degrees.clone(),
            unit: self.unit,
            structure,
        })
    }

    /// Full law check: grading closure, associativity, unit laws.
    /// Violations are report entries, never errors.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dim();
        for m in 0..n {
            for k in 0..n {
                let expected = self.degrees[m] + self.degrees[k];
                for (r, _) in &self.structure[m][k] {
                    if self.degrees[*r] != expected {
                        report.violations.push(Violation::GradingClosure {
                            left: m,
                            right: k,
                            support: *r,
                            expected,
                            found: self.degrees[*r],
                        });
                    }
                }
            }
        }
        if self.degrees[self.unit] != 0 {
            report.violations.push(Violation::UnitDegree { found: self.degrees[self.unit] });
        }
        let unit = self.basis_elem(self.unit);
        for m in 0..n {
            let b = self.basis_elem(m);
            if self.elem_mul(&unit, &b) != b {
                report.violations.push(Violation::UnitLaw { side: "left", with: m });
            }
            if self.elem_mul(&b, &unit) != b {
                report.violations.push(Violation::UnitLaw { side: "right", with: m });
            }
        }
        for l in 0..n {
            let bl = self.basis_elem(l);
            for m in 0..n {
                let bm = self.basis_elem(m);
                let lm = self.elem_mul(&bl, &bm);
                for r in 0..n {
                    let br = self.basis_elem(r);
                    let lhs = self.elem_mul(&lm, &br);
                    let rhs = self.elem_mul(&bl, &self.elem_mul(&bm, &br));
                    if lhs != rhs {
                        report.violations.push(Violation::Associativity {
                            left: l,
                            mid: m,
                            right: r,
                        });
                    }
                }
            }
        }
        report
    }
}

/// Shared handle used by modules referring to their algebra.
pub type AlgebraRef = Arc<GradedAlgebra>;

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ring::parse_structure_scalar;

    /// Builds an algebra from a readable product table:
    /// `products[m][k]` is a list of (label, coefficient-string).
    #[allow(clippy::type_complexity)]
    pub(crate) fn build(
        ring: &Ring,
        basis: &[&str],
        degrees: &[i64],
        unit: usize,
        products: &[(&str, &str, &[(&str, &str)])],
    ) -> GradedAlgebra {
        let n = basis.len();
        let idx = |l: &str| basis.iter().position(|b| *b == l).expect("known label");
        let mut structure = vec![vec![SparseVec::new(); n]; n];
        for (lm, lk, terms) in products {
            let sv: SparseVec = terms
                .iter()
                .map(|(lr, cs)| (idx(lr), parse_structure_scalar(cs, ring).unwrap()))
                .collect();
            structure[idx(lm)][idx(lk)] = sv;
        }
        GradedAlgebra::new(
            ring.clone(),
            basis.iter().map(|s| s.to_string()).collect(),
            degrees.to_vec(),
            unit,
            structure,
        )
        .unwrap()
    }

    /// Z/2 group algebra over Q: basis {e, g}, g^2 = e, trivially graded.
    pub(crate) fn group_c2(ring: &Ring) -> GradedAlgebra {
        build(
            ring,
            &["e", "g"],
            &[0, 0],
            0,
            &[
                ("e", "e", &[("e", "1")]),
                ("e", "g", &[("g", "1")]),
                ("g", "e", &[("g", "1")]),
                ("g", "g", &[("e", "1")]),
            ],
        )
    }

    #[test]
    fn group_algebra_validates() {
        let alg = group_c2(&Ring::Rat);
        assert!(alg.validate().is_ok());
        assert_eq!(alg.deg0_indices(), vec![0, 1]);
    }

    #[test]
    fn grading_violation_is_reported() {
        // {1, x}, deg x = 1, x*x = x: degree 2 product supported in degree 1
        let alg = build(
            &Ring::Rat,
            &["one", "x"],
            &[0, 1],
            0,
            &[
                ("one", "one", &[("one", "1")]),
                ("one", "x", &[("x", "1")]),
                ("x", "one", &[("x", "1")]),
                ("x", "x", &[("x", "1")]),
            ],
        );
        let report = alg.validate();
        assert!(report
            .violations
            .contains(&Violation::GradingClosure { left: 1, right: 1, support: 1, expected: 2, found: 1 }));
    }

    #[test]
    fn associativity_violation_is_reported() {
        // non-associative: g*g = g' with g'*g = e but g*(g*g) inconsistent
        let alg = build(
            &Ring::Rat,
            &["e", "a", "b"],
            &[0, 0, 0],
            0,
            &[
                ("e", "e", &[("e", "1")]),
                ("e", "a", &[("a", "1")]),
                ("e", "b", &[("b", "1")]),
                ("a", "e", &[("a", "1")]),
                ("b", "e", &[("b", "1")]),
                ("a", "a", &[("b", "1")]),
                ("a", "b", &[("e", "1")]),
                ("b", "a", &[("a", "1")]),
                ("b", "b", &[("a", "1")]),
            ],
        );
        let report = alg.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Associativity { .. })));
    }

    #[test]
    fn left_regular_respects_unit() {
        let alg = group_c2(&Ring::Rat);
        let unit = alg.basis_elem(alg.unit());
        let m = alg.left_regular(&unit);
        assert_eq!(m, crate::linalg::Matrix::identity(&Ring::Rat, 2));
    }

    #[test]
    fn rejects_bad_shapes() {
        let r = Ring::Rat;
        let bad = GradedAlgebra::new(
            r.clone(),
            vec!["e".into(), "e".into()],
            vec![0, 0],
            0,
            vec![vec![SparseVec::new(); 2]; 2],
        );
        assert!(matches!(bad, Err(Error::ValidationError(_))));
    }
}
