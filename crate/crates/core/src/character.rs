//! Graded characters and fingerprints, plus the linear solver recovering
//! shifted-simple multiplicities from a character.

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::Matrix;
use crate::rep::GradedModuleRep;
use crate::ring::{Ring, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// The graded character of a module: for each degree-0 basis element of
/// the algebra, the Laurent polynomial in t collecting per-degree traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedCharacter {
    basis_labels: Vec<String>,
    field: Ring,
    values: BTreeMap<usize, LaurentPoly>,
}

impl GradedCharacter {
    pub fn field(&self) -> &Ring {
        &self.field
    }

    /// Indices of the degree-0 basis elements the character is defined on.
    pub fn support_indices(&self) -> Vec<usize> {
        self.values.keys().copied().collect()
    }

    pub fn value(&self, basis_index: usize) -> Option<&LaurentPoly> {
        self.values.get(&basis_index)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(LaurentPoly::is_zero)
    }

    /// Overall t-exponent range over all values, None for the zero character.
    pub fn exp_range(&self) -> Option<(i64, i64)> {
        let mut range: Option<(i64, i64)> = None;
        for v in self.values.values() {
            if let (Some(lo), Some(hi)) = (v.min_exp(), v.max_exp()) {
                range = Some(match range {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                });
            }
        }
        range
    }

    pub fn add(&self, other: &GradedCharacter) -> Result<GradedCharacter> {
        self.compatible(other)?;
        let values = self
            .values
            .iter()
            .map(|(m, v)| (*m, v.add(other.values.get(m).expect("same key set"))))
            .collect();
        Ok(GradedCharacter { basis_labels: self.basis_labels.clone(), field: self.field.clone(), values })
    }

    /// The character of the shifted module: every value times t^j.
    pub fn shift(&self, j: i64) -> GradedCharacter {
        GradedCharacter {
            basis_labels: self.basis_labels.clone(),
            field: self.field.clone(),
            values: self.values.iter().map(|(m, v)| (*m, v.shift(j))).collect(),
        }
    }

    pub fn map_scalars(
        &self,
        target: &Ring,
        f: &mut dyn FnMut(&Scalar) -> Result<Scalar>,
    ) -> Result<GradedCharacter> {
        let mut values = BTreeMap::new();
        for (m, v) in &self.values {
            values.insert(*m, v.map_scalars(target, f)?);
        }
        Ok(GradedCharacter {
            basis_labels: self.basis_labels.clone(),
            field: target.clone(),
            values,
        })
    }

    fn compatible(&self, other: &GradedCharacter) -> Result<()> {
        if self.basis_labels != other.basis_labels {
            return Err(Error::AlgebraMismatch(
                "characters computed over different algebra bases".into(),
            ));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "characters over {} and {}",
                self.field, other.field
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GradedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, v) in &self.values {
            writeln!(f, "chi({}) = {}", self.basis_labels[*m], v)?;
        }
        Ok(())
    }
}

pub fn graded_character(module: &GradedModuleRep) -> GradedCharacter {
    let alg = module.algebra();
    let field = module.field().clone();
    let mut values = BTreeMap::new();
    for m in alg.deg0_indices() {
        let a = module.action(m);
        let mut chi = LaurentPoly::zero(&field, "t");
        for r in 0..module.dim() {
            chi.add_term(module.degrees()[r], a.get(r, r));
        }
        values.insert(m, chi);
    }
    GradedCharacter { basis_labels: alg.basis_labels().to_vec(), field, values }
}

/// Per-degree characteristic polynomials of the test elements: words of
/// bounded length in the degree-0 basis elements. A degree absent from
/// the map stands for the empty block, whose characteristic polynomial
/// is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    basis_labels: Vec<String>,
    depth: usize,
    field: Ring,
    values: BTreeMap<String, BTreeMap<i64, LaurentPoly>>,
}

pub const DEFAULT_FINGERPRINT_DEPTH: usize = 2;

impl Fingerprint {
    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn words(&self) -> impl Iterator<Item = &String> {
        self.values.keys()
    }

    pub fn value(&self, word: &str) -> Option<&BTreeMap<i64, LaurentPoly>> {
        self.values.get(word)
    }

    /// Charpoly at (word, degree), defaulting to 1 off the stored support.
    pub fn charpoly_at(&self, word: &str, degree: i64) -> LaurentPoly {
        self.values
            .get(word)
            .and_then(|by_deg| by_deg.get(&degree))
            .cloned()
            .unwrap_or_else(|| LaurentPoly::one(&self.field, "X"))
    }

    /// The fingerprint of a direct sum: per-word, per-degree products of
    /// characteristic polynomials.
    pub fn mul(&self, other: &Fingerprint) -> Result<Fingerprint> {
        self.compatible(other)?;
        let mut values = BTreeMap::new();
        for word in self.values.keys() {
            let mut degrees: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
            degrees.extend(self.values[word].keys());
            degrees.extend(other.values[word].keys());
            let by_deg = degrees
                .into_iter()
                .map(|d| (d, self.charpoly_at(word, d).mul(&other.charpoly_at(word, d))))
                .collect();
            values.insert(word.clone(), by_deg);
        }
        Ok(Fingerprint {
            basis_labels: self.basis_labels.clone(),
            depth: self.depth,
            field: self.field.clone(),
            values,
        })
    }

    pub fn map_scalars(
        &self,
        target: &Ring,
        f: &mut dyn FnMut(&Scalar) -> Result<Scalar>,
    ) -> Result<Fingerprint> {
        let mut values = BTreeMap::new();
        for (word, by_deg) in &self.values {
            let mut mapped = BTreeMap::new();
            for (d, p) in by_deg {
                mapped.insert(*d, p.map_scalars(target, f)?);
            }
            values.insert(word.clone(), mapped);
        }
        Ok(Fingerprint {
            basis_labels: self.basis_labels.clone(),
            depth: self.depth,
            field: target.clone(),
            values,
        })
    }

    fn compatible(&self, other: &Fingerprint) -> Result<()> {
        if self.basis_labels != other.basis_labels || self.depth != other.depth {
            return Err(Error::AlgebraMismatch(
                "fingerprints computed over different algebra bases or depths".into(),
            ));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "fingerprints over {} and {}",
                self.field, other.field
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (word, by_deg) in &self.values {
            for (d, p) in by_deg {
                writeln!(f, "p({word})[{d}] = {p}")?;
            }
        }
        Ok(())
    }
}

pub fn fingerprint(module: &GradedModuleRep, depth: usize) -> Fingerprint {
    assert!(depth >= 1, "fingerprint depth must be at least 1");
    let alg = module.algebra();
    let field = module.field().clone();
    let deg0 = alg.deg0_indices();
    let mut words: Vec<(String, Matrix)> = Vec::new();
    let mut frontier: Vec<(String, Matrix)> = deg0
        .iter()
        .map(|&m| (alg.label(m).to_string(), module.action(m).clone()))
        .collect();
    for len in 1..=depth {
        words.extend(frontier.iter().cloned());
        if len == depth {
            break;
        }
        let mut next = Vec::new();
        for (w, a) in &frontier {
            for &m in &deg0 {
                next.push((format!("{w}*{}", alg.label(m)), a.mul(module.action(m))));
            }
        }
        frontier = next;
    }
    let mut values = BTreeMap::new();
    for (word, a) in words {
        let mut by_deg = BTreeMap::new();
        for d in module.degree_support() {
            let idx = module.degree_indices(d);
            let block = Matrix::from_fn(&field, idx.len(), idx.len(), |r, s| {
                a.get(idx[r], idx[s]).clone()
            });
            by_deg.insert(d, block.charpoly());
        }
        values.insert(word, by_deg);
    }
    Fingerprint { basis_labels: alg.basis_labels().to_vec(), depth, field, values }
}

pub fn fingerprint_equal(a: &Fingerprint, b: &Fingerprint) -> Result<bool> {
    a.compatible(b)?;
    for word in a.values.keys() {
        let mut degrees: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
        degrees.extend(a.values[word].keys());
        degrees.extend(b.values[word].keys());
        for d in degrees {
            if a.charpoly_at(word, d) != b.charpoly_at(word, d) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Solves chi(target) = sum over simples M and shifts j of n_{M,j} q^j
/// chi(M) for nonnegative integer n_{M,j}, returning one Laurent
/// polynomial in q per simple.
pub fn solve_multiplicities(
    target: &GradedCharacter,
    simples: &[GradedCharacter],
) -> Result<Vec<LaurentPoly>> {
    for s in simples {
        target.compatible(s)?;
    }
    let zero_poly = || LaurentPoly::zero(&Ring::Int, "q");
    let Some((lo_t, hi_t)) = target.exp_range() else {
        return Ok(vec![zero_poly(); simples.len()]);
    };

    // unknown layout: for each simple with a nonzero character, the shift
    // window [lo_t - hi_m, hi_t - lo_m]
    let mut unknowns: Vec<(usize, i64)> = Vec::new();
    let mut row_lo = lo_t;
    let mut row_hi = hi_t;
    for (idx, s) in simples.iter().enumerate() {
        let Some((lo_m, hi_m)) = s.exp_range() else { continue };
        for j in (lo_t - hi_m)..=(hi_t - lo_m) {
            unknowns.push((idx, j));
            row_lo = row_lo.min(j + lo_m);
            row_hi = row_hi.max(j + hi_m);
        }
    }
    if unknowns.is_empty() {
        return Err(Error::NoSolution(
            "no shifted simple can contribute to a nonzero character".into(),
        ));
    }

    let field = target.field.clone();
    let basis: Vec<usize> = target.values.keys().copied().collect();
    let nrows = basis.len() * usize::try_from(row_hi - row_lo + 1).unwrap();
    let mut mat = Matrix::zero(&field, nrows, unknowns.len());
    let mut rhs = Matrix::zero(&field, nrows, 1);
    let mut row = 0;
    for &m in &basis {
        for i in row_lo..=row_hi {
            for (col, (idx, j)) in unknowns.iter().enumerate() {
                let v = simples[*idx].values[&m].coeff(i - j);
                mat.set(row, col, v);
            }
            rhs.set(row, 0, target.values[&m].coeff(i));
            row += 1;
        }
    }

    let solution = mat.solve_unique(&rhs)?;
    let mut out = vec![zero_poly(); simples.len()];
    for (col, (idx, j)) in unknowns.iter().enumerate() {
        let v = solution.get(col, 0);
        if v.is_zero() {
            continue;
        }
        let n = v.as_nonneg_integer().ok_or_else(|| {
            Error::NegativeMultiplicity(format!(
                "multiplicity of simple {idx} at shift {j} solves to {v}"
            ))
        })?;
        out[*idx].add_term(*j, &Scalar::from_bigint(&Ring::Int, &n));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::tests::fermion_module;

    #[test]
    fn fermion_character_values() {
        let v = fermion_module();
        let chi = graded_character(&v);
        assert_eq!(chi.support_indices(), vec![0, 3]);
        assert_eq!(chi.value(0).unwrap().to_string(), "t + 1");
        assert_eq!(chi.value(3).unwrap().to_string(), "a*t");
        assert_eq!(chi.exp_range(), Some((0, 1)));
    }

    #[test]
    fn character_of_shift_is_t_power_times_character() {
        let v = fermion_module();
        let direct = graded_character(&v.shift(2));
        let shifted = graded_character(&v).shift(2);
        assert_eq!(direct, shifted);
    }

    #[test]
    fn character_of_sum_is_sum_of_characters() {
        let v = fermion_module();
        let w = v.shift(-1);
        let sum = graded_character(&v.direct_sum(&w).unwrap());
        let added = graded_character(&v).add(&graded_character(&w)).unwrap();
        assert_eq!(sum, added);
    }

    #[test]
    fn fermion_fingerprint_blocks() {
        let v = fermion_module();
        let p = fingerprint(&v, 2);
        // words over the two degree-0 basis elements: 2 singles + 4 pairs
        assert_eq!(p.words().count(), 6);
        assert_eq!(p.charpoly_at("xy", 0).to_string(), "X");
        assert_eq!(p.charpoly_at("xy", 1).to_string(), "X - a");
        assert_eq!(p.charpoly_at("one", 1).to_string(), "X - 1");
        // off-support degree defaults to the empty-block value
        assert_eq!(p.charpoly_at("xy", 5).to_string(), "1");
        assert_eq!(p.charpoly_at("xy*xy", 1).to_string(), "X - a^2");
    }

    #[test]
    fn fingerprint_of_sum_is_product() {
        let v = fermion_module();
        let w = v.shift(1);
        let sum = fingerprint(&v.direct_sum(&w).unwrap(), 2);
        let prod = fingerprint(&v, 2).mul(&fingerprint(&w, 2)).unwrap();
        assert!(fingerprint_equal(&sum, &prod).unwrap());
        let alone = fingerprint(&v, 2);
        assert!(!fingerprint_equal(&sum, &alone).unwrap());
    }

    #[test]
    fn fingerprint_depth_mismatch_errors() {
        let v = fermion_module();
        let a = fingerprint(&v, 1);
        let b = fingerprint(&v, 2);
        assert!(matches!(fingerprint_equal(&a, &b), Err(Error::AlgebraMismatch(_))));
    }

    #[test]
    fn multiplicities_recover_shifts() {
        let v = fermion_module();
        let target = v.direct_sum(&v.shift(2)).unwrap().direct_sum(&v.shift(2)).unwrap();
        let sol = solve_multiplicities(&graded_character(&target), &[graded_character(&v)])
            .unwrap();
        assert_eq!(sol.len(), 1);
        assert_eq!(sol[0].to_string(), "2*q^2 + 1");
    }

    #[test]
    fn multiplicities_of_zero_character() {
        let v = fermion_module();
        let zero = GradedModuleRep::new(
            v.algebra().clone(),
            v.field().clone(),
            vec![],
            vec![Matrix::zero(v.field(), 0, 0); 4],
        )
        .unwrap();
        let sol =
            solve_multiplicities(&graded_character(&zero), &[graded_character(&v)]).unwrap();
        assert!(sol[0].is_zero());
    }

    #[test]
    fn inconsistent_target_is_rejected() {
        let v = fermion_module();
        // the one-dimensional module killing x, y, xy
        let k = v.field().clone();
        let one = Matrix::identity(&k, 1);
        let z = Matrix::zero(&k, 1, 1);
        let trivial = GradedModuleRep::new(
            v.algebra().clone(),
            k.clone(),
            vec![0],
            vec![one, z.clone(), z.clone(), z],
        )
        .unwrap();
        let err = solve_multiplicities(&graded_character(&trivial), &[graded_character(&v)]);
        assert!(matches!(err, Err(Error::NoSolution(_))));
    }

    #[test]
    fn fractional_multiplicity_is_rejected() {
        let v = fermion_module();
        let doubled = v.direct_sum(&v).unwrap();
        let err = solve_multiplicities(&graded_character(&v), &[graded_character(&doubled)]);
        assert!(matches!(err, Err(Error::NegativeMultiplicity(_))));
    }
}
