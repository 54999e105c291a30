//! Graded decomposition matrices of a specialization: rows are the
//! given generic modules, columns the simple graded modules of the
//! specialized algebra, entries the graded composition multiplicities
//! in ZZ[q, q^-1] with nonnegative coefficients.
//!
//! Each row is computed by clearing denominators of the generic module
//! until it admits a basis whose action matrices survive the
//! specialization, reducing that basis, and solving for the graded
//! multiplicities. The identity of graded characters behind the solve
//! is independently witnessed by the fingerprint diagram, and the
//! evaluation at q = 1 is cross-checked against an honest composition
//! series while the matrix is built.

use crate::character::{fingerprint, fingerprint_equal};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rep::{GradedClass, GradedModuleRep};
use crate::ring::{Ring, Scalar};
use crate::simples::{graded_multiplicities, simple_modules, SimpleSet};
use crate::specialize::{
    clear_denominators, modular_reduce, specialize_algebra, transport_fingerprint,
    Specialization, SpecializationTower,
};
use std::sync::Arc;

/// How row and column gradings are normalized in every matrix built
/// here: the lowest degree of each simple module is zero, and the given
/// modules keep the gradings they came with.
pub const GRADING_CONVENTION: &str =
    "simple modules are graded with lowest degree zero; input modules keep their gradings";

/// A graded decomposition matrix together with the data needed to
/// reproduce it: the simple modules indexing the columns, the basis
/// rescalings applied to each row, and the seed used in the simple
/// module search.
#[derive(Debug, Clone)]
pub struct GradedDecompMatrix {
    row_labels: Vec<String>,
    simples: SimpleSet,
    entries: Vec<Vec<LaurentPoly>>,
    rescalings: Vec<Vec<Scalar>>,
    seed: u64,
}

impl GradedDecompMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.simples.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> Vec<String> {
        self.simples
            .simples()
            .iter()
            .enumerate()
            .map(|(i, s)| format!("S{i} (dim {})", s.dim()))
            .collect()
    }

    pub fn entry(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.entries[row][col]
    }

    pub fn row(&self, row: usize) -> &[LaurentPoly] {
        &self.entries[row]
    }

    pub fn simples(&self) -> &SimpleSet {
        &self.simples
    }

    /// Scale factors applied to each input basis vector while clearing
    /// denominators, one record per row.
    pub fn rescalings(&self) -> &[Vec<Scalar>] {
        &self.rescalings
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn grading_convention(&self) -> &'static str {
        GRADING_CONVENTION
    }

    /// The ordinary decomposition matrix: every entry evaluated at
    /// q = 1. Entries are nonnegative by construction.
    pub fn evaluate_q1(&self) -> Result<Vec<Vec<u64>>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| {
                        let v = p.eval_at_one();
                        let n = v.as_nonneg_integer().ok_or_else(|| {
                            Error::Internal(format!(
                                "decomposition entry {p} is negative at q = 1"
                            ))
                        })?;
                        u64::try_from(n).map_err(|_| {
                            Error::Internal("decomposition entry overflows u64".into())
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// One row of the decomposition matrix: clears denominators, reduces,
/// and solves for the graded multiplicities against the given simple
/// set. Also returns the rescaling record.
pub fn decompose_module(
    module: &GradedModuleRep,
    theta: &Specialization,
    set: &SimpleSet,
) -> Result<(GradedClass, Vec<Scalar>)> {
    let (cleared, factors) = clear_denominators(module, theta)?;
    let reduced = modular_reduce(&cleared, theta)?;
    let class = graded_multiplicities(&reduced, set)?;
    Ok((class, factors))
}

/// Full graded decomposition matrix for a family of modules over the
/// same generic algebra under one specialization. The seed steers the
/// simple module search of the specialized algebra.
pub fn decomposition_matrix(
    modules: &[(String, GradedModuleRep)],
    theta: &Specialization,
    seed: u64,
) -> Result<GradedDecompMatrix> {
    let Some((_, first)) = modules.first() else {
        return Err(Error::ValidationError(
            "a decomposition matrix needs at least one module row".into(),
        ));
    };
    let kh = first.algebra();
    for (name, m) in modules {
        if m.algebra() != kh {
            return Err(Error::AlgebraMismatch(format!(
                "module {name} lives over a different algebra than the first row"
            )));
        }
    }
    let lh = Arc::new(specialize_algebra(kh, theta)?);
    let set = simple_modules(&lh, seed)?;
    let mut entries = Vec::with_capacity(modules.len());
    let mut rescalings = Vec::with_capacity(modules.len());
    for (_, m) in modules {
        let (class, factors) = decompose_module(m, theta, &set)?;
        entries.push((0..set.len()).map(|i| class.coefficient(i)).collect());
        rescalings.push(factors);
    }
    Ok(GradedDecompMatrix {
        row_labels: modules.iter().map(|(n, _)| n.clone()).collect(),
        simples: set,
        entries,
        rescalings,
        seed,
    })
}

/// Whether the fingerprint of the reduced module agrees with the
/// transported fingerprint of the generic module: the two ways around
/// the comparison square give the same invariants.
pub fn verify_diagram(
    module: &GradedModuleRep,
    theta: &Specialization,
    depth: usize,
) -> Result<bool> {
    let (cleared, _) = clear_denominators(module, theta)?;
    let reduced = modular_reduce(&cleared, theta)?;
    diagram_commutes(&cleared, &reduced, theta, depth)
}

/// The same comparison against an explicitly supplied reduction
/// candidate; false when the candidate is not the reduction of the
/// module along theta, up to fingerprint equality.
pub fn verify_diagram_against(
    module: &GradedModuleRep,
    candidate: &GradedModuleRep,
    theta: &Specialization,
    depth: usize,
) -> Result<bool> {
    let (cleared, _) = clear_denominators(module, theta)?;
    diagram_commutes(&cleared, candidate, theta, depth)
}

fn diagram_commutes(
    cleared: &GradedModuleRep,
    reduced: &GradedModuleRep,
    theta: &Specialization,
    depth: usize,
) -> Result<bool> {
    let transported = transport_fingerprint(theta, &fingerprint(cleared, depth))?;
    fingerprint_equal(&transported, &fingerprint(reduced, depth))
}

/// The three matrices of a factorization through a tower: the
/// decomposition matrices of both specializations and the adjustment
/// matrix expressing the images of the first set of simples in terms
/// of the second.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub d_theta: GradedDecompMatrix,
    pub d_theta_prime: GradedDecompMatrix,
    pub adjustment: GradedDecompMatrix,
}

/// Computes both decomposition matrices of the tower plus the
/// adjustment matrix, and verifies entrywise that the second matrix is
/// the product of the first with the adjustment.
pub fn factorization_check(
    tower: &SpecializationTower,
    modules: &[(String, GradedModuleRep)],
    seed: u64,
) -> Result<Factorization> {
    let d_theta = decomposition_matrix(modules, tower.theta(), seed)?;
    let d_theta_prime = decomposition_matrix(modules, tower.theta_prime(), seed)?;
    let lph = d_theta_prime.simples.algebra().clone();
    let lp = tower.theta_prime().target().clone();
    let mut entries = Vec::with_capacity(d_theta.cols());
    let mut labels = Vec::with_capacity(d_theta.cols());
    for (j, s) in d_theta.simples.simples().iter().enumerate() {
        let pushed = s.map_scalars(lph.clone(), &lp, &mut |x| tower.phi_apply(x))?;
        let class = graded_multiplicities(&pushed, &d_theta_prime.simples)?;
        entries.push((0..d_theta_prime.cols()).map(|i| class.coefficient(i)).collect());
        labels.push(format!("phi(S{j})"));
    }
    let adjustment = GradedDecompMatrix {
        row_labels: labels,
        simples: d_theta_prime.simples.clone(),
        entries,
        rescalings: vec![Vec::new(); d_theta.cols()],
        seed,
    };
    check_factorization(&d_theta, &adjustment, &d_theta_prime)?;
    Ok(Factorization { d_theta, d_theta_prime, adjustment })
}

/// Entrywise check that right = left * adjustment as matrices of
/// Laurent polynomials.
pub fn check_factorization(
    left: &GradedDecompMatrix,
    adjustment: &GradedDecompMatrix,
    right: &GradedDecompMatrix,
) -> Result<()> {
    if left.cols() != adjustment.rows() || left.rows() != right.rows()
        || adjustment.cols() != right.cols()
    {
        return Err(Error::FactorizationFailure(format!(
            "shape mismatch: {}x{} times {}x{} against {}x{}",
            left.rows(),
            left.cols(),
            adjustment.rows(),
            adjustment.cols(),
            right.rows(),
            right.cols()
        )));
    }
    for i in 0..right.rows() {
        for k in 0..right.cols() {
            let mut acc = LaurentPoly::zero(&Ring::Int, "q");
            for j in 0..left.cols() {
                acc = acc.add(&left.entry(i, j).mul(adjustment.entry(j, k)));
            }
            if acc != *right.entry(i, k) {
                return Err(Error::FactorizationFailure(format!(
                    "entry ({}, {k}): product gives {acc}, direct decomposition gives {}",
                    right.row_labels[i],
                    right.entry(i, k)
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::tests::build;
    use crate::algebra::AlgebraRef;
    use crate::character::DEFAULT_FINGERPRINT_DEPTH;
    use crate::linalg::Matrix;
    use crate::rep::tests::fermion_module;
    use crate::specialize::make_tower;
    use crate::specialize::tests::{assignments, theta_a0};

    fn q_poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            &Ring::Int,
            "q",
            terms.iter().map(|&(e, c)| (e, Scalar::from_int(&Ring::Int, c))),
        )
    }

    pub(crate) fn hecke_s2() -> (AlgebraRef, Vec<(String, GradedModuleRep)>) {
        let a = Ring::laurent(Ring::Int, &["v"]);
        let alg = Arc::new(build(
            &a,
            &["one", "T"],
            &[0, 0],
            0,
            &[
                ("one", "one", &[("one", "1")]),
                ("one", "T", &[("T", "1")]),
                ("T", "one", &[("T", "1")]),
                ("T", "T", &[("one", "v"), ("T", "v-1")]),
            ],
        ));
        let k = Ring::frac(a);
        let v = Scalar::var(&k, "v").unwrap();
        let mk = |t: Scalar| {
            let action = vec![
                Matrix::identity(&k, 1),
                Matrix::from_rows(&k, vec![vec![t]]),
            ];
            GradedModuleRep::new(alg.clone(), k.clone(), vec![0], action).unwrap()
        };
        let modules = vec![
            ("index".to_string(), mk(v)),
            ("sign".to_string(), mk(Scalar::from_int(&k, -1))),
        ];
        (alg, modules)
    }

    pub(crate) fn hecke_tower() -> SpecializationTower {
        let a = Ring::laurent(Ring::Int, &["v"]);
        let theta = crate::specialize::make_specialization(
            "v1-rational",
            &a,
            &Ring::Rat,
            &assignments(&[("v", Scalar::one(&Ring::Rat))]),
        )
        .unwrap();
        let gf2 = Ring::Gf { p: 2 };
        let theta_prime = crate::specialize::make_specialization(
            "v1-mod-2",
            &a,
            &gf2,
            &assignments(&[("v", Scalar::one(&gf2))]),
        )
        .unwrap();
        make_tower(&theta, &theta_prime, &Ring::Int, &[]).unwrap()
    }

    #[test]
    fn fermion_decomposition_matrix() {
        let theta = theta_a0(&Ring::Rat);
        let rows = vec![("V".to_string(), fermion_module())];
        let d = decomposition_matrix(&rows, &theta, 0).unwrap();
        assert_eq!((d.rows(), d.cols()), (1, 1));
        assert_eq!(*d.entry(0, 0), q_poly(&[(0, 1), (1, 1)]));
        assert_eq!(d.evaluate_q1().unwrap(), vec![vec![2]]);
        assert!(d.rescalings()[0].iter().all(Scalar::is_one));
        assert_eq!(d.row_labels(), &["V".to_string()]);
        assert_eq!(d.col_labels(), vec!["S0 (dim 1)".to_string()]);
    }

    #[test]
    fn decomposition_is_stable_under_rescaling() {
        // replace the basis vector of degree 1 by a times itself; the
        // action acquires denominators that clearing must remove again
        let m = fermion_module();
        let k = m.field().clone();
        let a = Scalar::var(&k, "a").unwrap();
        let p = Matrix::from_rows(
            &k,
            vec![
                vec![Scalar::one(&k), Scalar::zero(&k)],
                vec![Scalar::zero(&k), a.clone()],
            ],
        );
        let pinv = Matrix::from_rows(
            &k,
            vec![
                vec![Scalar::one(&k), Scalar::zero(&k)],
                vec![Scalar::zero(&k), a.inv().unwrap()],
            ],
        );
        let rescaled = m.change_basis(&p, &pinv, m.degrees().to_vec());
        let theta = theta_a0(&Ring::Rat);
        let d1 = decomposition_matrix(&[("V".to_string(), m)], &theta, 0).unwrap();
        let d2 = decomposition_matrix(&[("V".to_string(), rescaled)], &theta, 0).unwrap();
        assert_eq!(d1.entry(0, 0), d2.entry(0, 0));
        // the second run had to rescale
        assert!(d2.rescalings()[0].iter().any(|f| !f.is_one()));
    }

    #[test]
    fn fermion_diagram_commutes() {
        let theta = theta_a0(&Ring::Rat);
        assert!(verify_diagram(&fermion_module(), &theta, DEFAULT_FINGERPRINT_DEPTH).unwrap());
    }

    #[test]
    fn shifted_candidate_breaks_the_diagram() {
        let theta = theta_a0(&Ring::Rat);
        let m = fermion_module();
        let (cleared, _) = clear_denominators(&m, &theta).unwrap();
        let reduced = modular_reduce(&cleared, &theta).unwrap();
        let ok = verify_diagram_against(&m, &reduced, &theta, DEFAULT_FINGERPRINT_DEPTH).unwrap();
        assert!(ok);
        let bad = verify_diagram_against(&m, &reduced.shift(1), &theta, DEFAULT_FINGERPRINT_DEPTH)
            .unwrap();
        assert!(!bad);
    }

    #[test]
    fn hecke_tower_factorization() {
        let (_, modules) = hecke_s2();
        let tower = hecke_tower();
        let f = factorization_check(&tower, &modules, 0).unwrap();
        assert_eq!((f.d_theta.rows(), f.d_theta.cols()), (2, 2));
        let one = q_poly(&[(0, 1)]);
        let zero = LaurentPoly::zero(&Ring::Int, "q");
        // v = 1 splits the algebra: index stays the trivial module,
        // sign stays the sign module
        assert_eq!(*f.d_theta.entry(0, 0), one);
        assert_eq!(*f.d_theta.entry(0, 1), zero);
        assert_eq!(*f.d_theta.entry(1, 0), zero);
        assert_eq!(*f.d_theta.entry(1, 1), one);
        // mod 2 both collapse onto the unique simple
        assert_eq!((f.d_theta_prime.rows(), f.d_theta_prime.cols()), (2, 1));
        assert_eq!(*f.d_theta_prime.entry(0, 0), one);
        assert_eq!(*f.d_theta_prime.entry(1, 0), one);
        assert_eq!((f.adjustment.rows(), f.adjustment.cols()), (2, 1));
        assert_eq!(*f.adjustment.entry(0, 0), one);
        assert_eq!(*f.adjustment.entry(1, 0), one);
    }

    #[test]
    fn doctored_product_is_rejected() {
        let (_, modules) = hecke_s2();
        let tower = hecke_tower();
        let f = factorization_check(&tower, &modules, 0).unwrap();
        let mut wrong = f.adjustment.clone();
        wrong.entries[0][0] = q_poly(&[(1, 1)]);
        let err = check_factorization(&f.d_theta, &wrong, &f.d_theta_prime).unwrap_err();
        assert!(matches!(err, Error::FactorizationFailure(_)), "got {err:?}");
    }

    #[test]
    fn empty_row_set_is_rejected() {
        let theta = theta_a0(&Ring::Rat);
        let err = decomposition_matrix(&[], &theta, 0).unwrap_err();
        assert!(matches!(err, Error::ValidationError(_)), "got {err:?}");
    }
}
