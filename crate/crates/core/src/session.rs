//! Session files: a single JSON document declaring a parameter ring, a
//! graded algebra by structure constants, modules by action matrices,
//! specializations, and towers. All coefficients are strings parsed in
//! the declared ring, which keeps the files diffable and exact.
//!
//! Parsing is eager: a session that deserializes but names an unknown
//! basis element, fails to parse a coefficient, or violates an algebra
//! or module law is rejected with a diagnostic naming the offending
//! field. Products with the unit that are not written out are filled in
//! from the unit law; every other omitted product is zero.

use crate::algebra::{AlgebraRef, GradedAlgebra, SparseVec};
use crate::error::{Error, Result};
use crate::rep::GradedModuleRep;
use crate::ring::{parse_scalar, parse_structure_scalar, Ring, RingDescriptor, Scalar};
use crate::specialize::{make_specialization, make_tower, Specialization, SpecializationTower};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Wire form of a session. Field order is the canonical emission order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionFile {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(default = "default_version")]
    pub version: u32,
    pub ring: RingDescriptor,
    pub algebra: AlgebraSection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub specializations: Vec<SpecializationSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub towers: Vec<TowerSection>,
}

fn default_version() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub name: String,
    pub basis: Vec<String>,
    pub degrees: Vec<i64>,
    /// Basis label of the unit element.
    pub unit: String,
    /// Nonzero products; pairs involving the unit may be omitted.
    pub products: Vec<ProductRule>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductRule {
    pub left: String,
    pub right: String,
    /// Terms of the product as (basis label, coefficient string).
    pub terms: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    pub name: String,
    pub field: RingDescriptor,
    pub degrees: Vec<i64>,
    /// Action matrix of every algebra basis element, keyed by label,
    /// entries as coefficient strings in the module field.
    pub action: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecializationSection {
    pub name: String,
    pub target: RingDescriptor,
    /// Variable assignments as coefficient strings in the target field.
    pub assignments: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSection {
    pub name: String,
    pub theta: String,
    pub theta_prime: String,
    pub base: RingDescriptor,
    /// Extra parameter-ring elements probed by the kernel nesting check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detection: Vec<String>,
}

/// A fully validated session: every object constructed and checked.
#[derive(Debug, Clone)]
pub struct ValidatedSession {
    pub file: SessionFile,
    pub ring: Ring,
    pub algebra: AlgebraRef,
    pub modules: Vec<(String, GradedModuleRep)>,
    pub specializations: Vec<Specialization>,
    pub towers: Vec<(String, SpecializationTower)>,
}

impl ValidatedSession {
    pub fn module(&self, name: &str) -> Option<&GradedModuleRep> {
        self.modules.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn specialization(&self, name: &str) -> Option<&Specialization> {
        self.specializations.iter().find(|s| s.name() == name)
    }

    pub fn tower(&self, name: &str) -> Option<&SpecializationTower> {
        self.towers.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

/// Reads and fully validates a session file.
pub fn parse_session(path: &std::path::Path) -> Result<ValidatedSession> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::SchemaError(format!("cannot read {}: {e}", path.display())))?;
    parse_session_str(&text)
}

/// Parses and fully validates a session from its JSON text.
pub fn parse_session_str(text: &str) -> Result<ValidatedSession> {
    if let Ok(serde_json::Value::Object(map)) = serde_json::from_str(text) {
        let missing: Vec<&str> = ["ring", "algebra"]
            .into_iter()
            .filter(|key| !map.contains_key(*key))
            .collect();
        if !missing.is_empty() {
            return Err(Error::SchemaError(format!(
                "session is missing required keys: {}",
                missing.join(", ")
            )));
        }
    }
    let file: SessionFile = serde_json::from_str(text)
        .map_err(|e| Error::SchemaError(format!("session does not match the schema: {e}")))?;
    validate_session(file)
}

/// Canonical JSON emission. `parse` then `emit` is idempotent: emitting
/// a parsed session reproduces the same bytes.
pub fn emit_session(file: &SessionFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("session serializes");
    s.push('\n');
    s
}

/// Checks every invariant of the file and builds the validated session.
pub fn validate_session(file: SessionFile) -> Result<ValidatedSession> {
    let ring = file.ring.to_ring()?;
    let mut names = BTreeSet::new();
    let mut claim = |name: &str, what: &str| -> Result<()> {
        if name.is_empty() {
            return Err(Error::SchemaError(format!("{what} has an empty name")));
        }
        if !names.insert(name.to_string()) {
            return Err(Error::SchemaError(format!("duplicate name {name} ({what})")));
        }
        Ok(())
    };

    claim(&file.algebra.name, "algebra")?;
    let algebra = Arc::new(build_algebra(&file.algebra, &ring)?);

    let mut modules = Vec::with_capacity(file.modules.len());
    for section in &file.modules {
        claim(&section.name, "module")?;
        modules.push((section.name.clone(), build_module(section, &algebra)?));
    }

    let mut specializations = Vec::with_capacity(file.specializations.len());
    for section in &file.specializations {
        claim(&section.name, "specialization")?;
        let target = section.target.to_ring()?;
        let mut assignments = BTreeMap::new();
        for (var, text) in &section.assignments {
            let value = parse_scalar(text, &target).map_err(|e| {
                annotate(e, format!("specialization {}, assignment {var}", section.name))
            })?;
            assignments.insert(var.clone(), value);
        }
        specializations.push(
            make_specialization(&section.name, &ring, &target, &assignments)
                .map_err(|e| annotate(e, format!("specialization {}", section.name)))?,
        );
    }

    let mut towers = Vec::with_capacity(file.towers.len());
    for section in &file.towers {
        claim(&section.name, "tower")?;
        let theta = specializations
            .iter()
            .find(|s| s.name() == section.theta)
            .ok_or_else(|| {
                Error::SchemaError(format!(
                    "tower {} references unknown specialization {}",
                    section.name, section.theta
                ))
            })?;
        let theta_prime = specializations
            .iter()
            .find(|s| s.name() == section.theta_prime)
            .ok_or_else(|| {
                Error::SchemaError(format!(
                    "tower {} references unknown specialization {}",
                    section.name, section.theta_prime
                ))
            })?;
        let base = section.base.to_ring()?;
        let detection = section
            .detection
            .iter()
            .map(|text| {
                parse_scalar(text, &ring)
                    .map_err(|e| annotate(e, format!("tower {}, detection set", section.name)))
            })
            .collect::<Result<Vec<Scalar>>>()?;
        let tower = make_tower(theta, theta_prime, &base, &detection)
            .map_err(|e| annotate(e, format!("tower {}", section.name)))?;
        towers.push((section.name.clone(), tower));
    }

    Ok(ValidatedSession { ring, algebra, modules, specializations, towers, file })
}

fn annotate(err: Error, context: String) -> Error {
    err.context(&context)
}

fn build_algebra(section: &AlgebraSection, ring: &Ring) -> Result<GradedAlgebra> {
    let n = section.basis.len();
    if n == 0 {
        return Err(Error::SchemaError(format!(
            "algebra {} has an empty basis",
            section.name
        )));
    }
    let mut seen = BTreeSet::new();
    for label in &section.basis {
        if !seen.insert(label) {
            return Err(Error::SchemaError(format!(
                "algebra {}: duplicate basis label {label}",
                section.name
            )));
        }
    }
    if section.degrees.len() != n {
        return Err(Error::SchemaError(format!(
            "algebra {}: {} degrees for {n} basis elements",
            section.name,
            section.degrees.len()
        )));
    }
    let index = |label: &str| -> Result<usize> {
        section.basis.iter().position(|b| b == label).ok_or_else(|| {
            Error::SchemaError(format!(
                "algebra {} references unknown basis label {label}",
                section.name
            ))
        })
    };
    let unit = index(&section.unit)?;

    let mut table: Vec<Vec<Option<SparseVec>>> = vec![vec![None; n]; n];
    for rule in &section.products {
        let (i, j) = (index(&rule.left)?, index(&rule.right)?);
        if table[i][j].is_some() {
            return Err(Error::SchemaError(format!(
                "algebra {}: product {} * {} is given twice",
                section.name, rule.left, rule.right
            )));
        }
        let mut entries: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (label, coeff) in &rule.terms {
            let k = index(label)?;
            let c = parse_structure_scalar(coeff, ring).map_err(|e| {
                annotate(e, format!("product {} * {}, term {label}", rule.left, rule.right))
            })?;
            let acc = entries.entry(k).or_insert_with(|| Scalar::zero(ring));
            *acc = acc.add(&c);
        }
        table[i][j] = Some(entries.into_iter().collect());
    }
    let mut structure: Vec<Vec<Vec<(usize, Scalar)>>> = vec![vec![Vec::new(); n]; n];
    for (i, row) in table.into_iter().enumerate() {
        for (j, cell) in row.into_iter().enumerate() {
            structure[i][j] = match cell {
                Some(v) => v,
                // unwritten products with the unit follow the unit law;
                // everything else defaults to zero
                None if i == unit => vec![(j, Scalar::one(ring))],
                None if j == unit => vec![(i, Scalar::one(ring))],
                None => Vec::new(),
            };
        }
    }
    let algebra = GradedAlgebra::new(
        ring.clone(),
        section.basis.clone(),
        section.degrees.clone(),
        unit,
        structure,
    )?;
    let report = algebra.validate();
    if !report.is_ok() {
        return Err(Error::ValidationError(format!(
            "algebra {} violates the algebra laws:\n{report}",
            section.name
        )));
    }
    Ok(algebra)
}

fn build_module(section: &ModuleSection, algebra: &AlgebraRef) -> Result<GradedModuleRep> {
    let field = section.field.to_ring()?;
    let dim = section.degrees.len();
    let mut action = Vec::with_capacity(algebra.dim());
    for label in algebra.basis_labels() {
        let Some(rows) = section.action.get(label) else {
            return Err(Error::SchemaError(format!(
                "module {}: no action matrix for basis element {label}",
                section.name
            )));
        };
        action.push(parse_matrix(rows, &field, dim, &section.name, label)?);
    }
    for key in section.action.keys() {
        if !algebra.basis_labels().iter().any(|l| l == key) {
            return Err(Error::SchemaError(format!(
                "module {}: action given for unknown basis element {key}",
                section.name
            )));
        }
    }
    let module =
        GradedModuleRep::new(algebra.clone(), field, section.degrees.clone(), action)?;
    let report = module.validate();
    if !report.is_ok() {
        return Err(Error::ValidationError(format!(
            "module {} violates the module laws:\n{report}",
            section.name
        )));
    }
    Ok(module)
}

fn parse_matrix(
    rows: &[Vec<String>],
    field: &Ring,
    dim: usize,
    module: &str,
    label: &str,
) -> Result<crate::linalg::Matrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::SchemaError(format!(
            "module {module}: action of {label} is not a {dim} x {dim} matrix"
        )));
    }
    let mut parsed = Vec::with_capacity(dim);
    for (r, row) in rows.iter().enumerate() {
        let mut out = Vec::with_capacity(dim);
        for (c, text) in row.iter().enumerate() {
            out.push(parse_scalar(text, field).map_err(|e| {
                annotate(e, format!("module {module}, action of {label}, entry ({r},{c})"))
            })?);
        }
        parsed.push(out);
    }
    if dim == 0 {
        return Ok(crate::linalg::Matrix::zero(field, 0, 0));
    }
    Ok(crate::linalg::Matrix::from_rows(field, parsed))
}

/// Rebuilds the wire form of a module from core objects, printing every
/// entry in the module's field.
pub fn export_module(name: &str, module: &GradedModuleRep) -> ModuleSection {
    let action = module
        .algebra()
        .basis_labels()
        .iter()
        .enumerate()
        .map(|(m, label)| {
            let a = module.action(m);
            let rows = (0..a.nrows())
                .map(|r| (0..a.ncols()).map(|c| a.get(r, c).to_string()).collect())
                .collect();
            (label.clone(), rows)
        })
        .collect();
    ModuleSection {
        name: name.to_string(),
        field: RingDescriptor::from_ring(module.field()),
        degrees: module.degrees().to_vec(),
        action,
    }
}

/// Rebuilds the wire form of an algebra, omitting zero products and
/// products implied by the unit law.
pub fn export_algebra(name: &str, algebra: &GradedAlgebra) -> AlgebraSection {
    let labels = algebra.basis_labels();
    let mut products = Vec::new();
    for i in 0..algebra.dim() {
        for j in 0..algebra.dim() {
            if i == algebra.unit() || j == algebra.unit() {
                continue;
            }
            let entries = algebra.product(i, j);
            if entries.is_empty() {
                continue;
            }
            products.push(ProductRule {
                left: labels[i].clone(),
                right: labels[j].clone(),
                terms: entries
                    .iter()
                    .map(|(k, c)| (labels[*k].clone(), c.to_string()))
                    .collect(),
            });
        }
    }
    AlgebraSection {
        name: name.to_string(),
        basis: labels.to_vec(),
        degrees: algebra.degrees().to_vec(),
        unit: labels[algebra.unit()].clone(),
        products,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::tests::{fermion_algebra, fermion_module};
    use crate::ring::Ring;

    fn fermion_session_file() -> SessionFile {
        let a = Ring::poly(Ring::Rat, &["a"]);
        let algebra = export_algebra("fermion", &fermion_algebra(&a));
        let module = export_module("V", &fermion_module());
        SessionFile {
            name: "fermion".into(),
            version: 1,
            ring: RingDescriptor::from_ring(&a),
            algebra,
            modules: vec![module],
            specializations: vec![SpecializationSection {
                name: "a0".into(),
                target: RingDescriptor::Rationals,
                assignments: [("a".to_string(), "0".to_string())].into(),
            }],
            towers: vec![],
        }
    }

    #[test]
    fn fermion_session_validates() {
        let s = validate_session(fermion_session_file()).unwrap();
        assert_eq!(s.algebra.dim(), 4);
        assert_eq!(s.modules.len(), 1);
        assert_eq!(s.module("V").unwrap().dim(), 2);
        assert!(s.specialization("a0").is_some());
        assert!(s.tower("t1").is_none());
    }

    #[test]
    fn emit_parse_round_trip_is_idempotent() {
        let text = emit_session(&fermion_session_file());
        let parsed = parse_session_str(&text).unwrap();
        assert_eq!(emit_session(&parsed.file), text);
    }

    #[test]
    fn unit_products_are_filled_in() {
        let s = validate_session(fermion_session_file()).unwrap();
        let alg = &s.algebra;
        // exported rules omit unit products; the builder restores them
        for j in 0..alg.dim() {
            assert_eq!(*alg.product(alg.unit(), j), vec![(j, Scalar::one(&s.ring))]);
        }
    }

    #[test]
    fn empty_object_lists_missing_keys() {
        let err = parse_session_str("{}").unwrap_err();
        let Error::SchemaError(msg) = &err else {
            panic!("expected SchemaError, got {err:?}")
        };
        assert!(msg.contains("ring") && msg.contains("algebra"), "uninformative: {msg}");
    }

    #[test]
    fn unknown_label_in_product_is_rejected() {
        let mut file = fermion_session_file();
        file.algebra.products[0].left = "zz".into();
        let err = validate_session(file).unwrap_err();
        let Error::SchemaError(msg) = &err else {
            panic!("expected SchemaError, got {err:?}")
        };
        assert!(msg.contains("zz"), "message should name the label: {msg}");
    }

    #[test]
    fn undeclared_variable_in_coefficient_is_rejected() {
        let mut file = fermion_session_file();
        file.algebra.products[0].terms[0].1 = "3*b".into();
        let err = validate_session(file).unwrap_err();
        let Error::UndeclaredVariable(msg) = &err else {
            panic!("expected UndeclaredVariable, got {err:?}")
        };
        assert!(msg.contains("product"), "message should locate the product: {msg}");
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let mut file = fermion_session_file();
        file.specializations.push(file.specializations[0].clone());
        let err = validate_session(file).unwrap_err();
        assert!(matches!(err, Error::SchemaError(_)), "got {err:?}");
    }

    #[test]
    fn broken_associativity_is_a_validation_error() {
        let mut file = fermion_session_file();
        // corrupt one structure constant: x*y = xy becomes x*y = 1
        let rule = file
            .algebra
            .products
            .iter_mut()
            .find(|r| r.left == "x" && r.right == "y")
            .expect("fermion table lists x*y");
        rule.terms = vec![("one".to_string(), "1".to_string())];
        let err = validate_session(file).unwrap_err();
        assert!(matches!(err, Error::ValidationError(_)), "got {err:?}");
    }

    #[test]
    fn wrong_matrix_shape_is_rejected() {
        let mut file = fermion_session_file();
        file.modules[0].action.get_mut("x").unwrap()[0].pop();
        let err = validate_session(file).unwrap_err();
        assert!(matches!(err, Error::SchemaError(_)), "got {err:?}");
    }

    #[test]
    fn tower_references_must_resolve() {
        let mut file = fermion_session_file();
        file.towers.push(TowerSection {
            name: "t1".into(),
            theta: "a0".into(),
            theta_prime: "missing".into(),
            base: RingDescriptor::Integers,
            detection: vec![],
        });
        let err = validate_session(file).unwrap_err();
        let Error::SchemaError(msg) = &err else {
            panic!("expected SchemaError, got {err:?}")
        };
        assert!(msg.contains("missing"), "message should name the reference: {msg}");
    }
}
