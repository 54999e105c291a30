//! Embedded example sessions: small exactly-solvable algebras used by
//! the test suite, the benchmarks, and the command line as ready-made
//! inputs. Each fixture is an ordinary session file; nothing here is
//! special-cased in the algorithms.

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{Ring, RingDescriptor, Scalar};
use crate::session::{
    export_algebra, validate_session, AlgebraSection, ModuleSection, ProductRule, SessionFile,
    SpecializationSection, TowerSection, ValidatedSession,
};
use std::collections::BTreeMap;

/// Names accepted by `fixture`, in listing order.
pub const FIXTURE_NAMES: [&str; 6] = [
    "fermion",
    "exterior",
    "hecke_s2",
    "hecke_s2_tower",
    "hecke_s3_e3",
    "nonsplit_rotation",
];

/// The wire form of a named fixture.
pub fn fixture(name: &str) -> Result<SessionFile> {
    match name {
        "fermion" => Ok(fermion()),
        "exterior" => Ok(exterior()),
        "hecke_s2" => Ok(hecke_s2(false)),
        "hecke_s2_tower" => Ok(hecke_s2(true)),
        "hecke_s3_e3" => Ok(hecke_s3_e3()),
        "nonsplit_rotation" => Ok(nonsplit_rotation()),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

/// A named fixture, parsed and validated.
pub fn fixture_session(name: &str) -> Result<ValidatedSession> {
    validate_session(fixture(name)?)
}

fn rule(left: &str, right: &str, terms: &[(&str, &str)]) -> ProductRule {
    ProductRule {
        left: left.to_string(),
        right: right.to_string(),
        terms: terms.iter().map(|(l, c)| (l.to_string(), c.to_string())).collect(),
    }
}

fn strings(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

fn matrix(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| strings(r)).collect()
}

fn action_map(entries: Vec<(&str, Vec<Vec<String>>)>) -> BTreeMap<String, Vec<Vec<String>>> {
    entries.into_iter().map(|(l, m)| (l.to_string(), m)).collect()
}

fn assignments(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

/// Rank-one graded Clifford algebra over QQ[a]: basis {1, x, y, xy} in
/// degrees (0, 1, -1, 0) with x^2 = y^2 = 0 and y x = a - x y, plus the
/// module V = (w, u) with x w = u, y u = a w. Specializing a to 0
/// degenerates V into a nonsplit extension of two one-dimensional
/// simples, giving the graded decomposition entry 1 + q.
fn fermion() -> SessionFile {
    SessionFile {
        name: "fermion".into(),
        version: 1,
        ring: RingDescriptor::Polynomial {
            base: Box::new(RingDescriptor::Rationals),
            vars: vec!["a".into()],
        },
        algebra: AlgebraSection {
            name: "fermion".into(),
            basis: strings(&["one", "x", "y", "xy"]),
            degrees: vec![0, 1, -1, 0],
            unit: "one".into(),
            products: vec![
                rule("x", "y", &[("xy", "1")]),
                rule("y", "x", &[("one", "a"), ("xy", "-1")]),
                rule("xy", "x", &[("x", "a")]),
                rule("y", "xy", &[("y", "a")]),
                rule("xy", "xy", &[("xy", "a")]),
            ],
        },
        modules: vec![ModuleSection {
            name: "V".into(),
            field: RingDescriptor::Fraction {
                base: Box::new(RingDescriptor::Polynomial {
                    base: Box::new(RingDescriptor::Rationals),
                    vars: vec!["a".into()],
                }),
            },
            degrees: vec![0, 1],
            action: action_map(vec![
                ("one", matrix(&[&["1", "0"], &["0", "1"]])),
                ("x", matrix(&[&["0", "0"], &["1", "0"]])),
                ("y", matrix(&[&["0", "a"], &["0", "0"]])),
                ("xy", matrix(&[&["0", "0"], &["0", "a"]])),
            ]),
        }],
        specializations: vec![SpecializationSection {
            name: "a0".into(),
            target: RingDescriptor::Rationals,
            assignments: assignments(&[("a", "0")]),
        }],
        towers: vec![],
    }
}

/// The fermion algebra at a = 0, presented directly over QQ:
/// the exterior algebra on x and y with the degenerate module.
fn exterior() -> SessionFile {
    SessionFile {
        name: "exterior".into(),
        version: 1,
        ring: RingDescriptor::Rationals,
        algebra: AlgebraSection {
            name: "exterior".into(),
            basis: strings(&["one", "x", "y", "xy"]),
            degrees: vec![0, 1, -1, 0],
            unit: "one".into(),
            products: vec![
                rule("x", "y", &[("xy", "1")]),
                rule("y", "x", &[("xy", "-1")]),
            ],
        },
        modules: vec![ModuleSection {
            name: "V".into(),
            field: RingDescriptor::Rationals,
            degrees: vec![0, 1],
            action: action_map(vec![
                ("one", matrix(&[&["1", "0"], &["0", "1"]])),
                ("x", matrix(&[&["0", "0"], &["1", "0"]])),
                ("y", matrix(&[&["0", "0"], &["0", "0"]])),
                ("xy", matrix(&[&["0", "0"], &["0", "0"]])),
            ]),
        }],
        specializations: vec![],
        towers: vec![],
    }
}

/// Rank-one Iwahori-Hecke algebra over ZZ[v, v^-1]: T^2 = (v-1)T + v,
/// with the two one-dimensional generic modules and the specializations
/// at v = 1 over QQ and over GF(2). The tower variant also includes the
/// degenerate tower with theta = theta-prime, whose adjustment matrix
/// is the identity.
fn hecke_s2(with_degenerate_tower: bool) -> SessionFile {
    let base = RingDescriptor::Laurent {
        base: Box::new(RingDescriptor::Integers),
        vars: vec!["v".into()],
    };
    let field = RingDescriptor::Fraction { base: Box::new(base.clone()) };
    let module = |name: &str, t: &str| ModuleSection {
        name: name.into(),
        field: field.clone(),
        degrees: vec![0],
        action: action_map(vec![("one", matrix(&[&["1"]])), ("T", matrix(&[&[t]]))]),
    };
    let mut towers = vec![TowerSection {
        name: "t1".into(),
        theta: "v1-rational".into(),
        theta_prime: "v1-mod2".into(),
        base: RingDescriptor::Integers,
        detection: vec!["v-1".into()],
    }];
    if with_degenerate_tower {
        towers.push(TowerSection {
            name: "t-id".into(),
            theta: "v1-rational".into(),
            theta_prime: "v1-rational".into(),
            base: RingDescriptor::Integers,
            detection: vec!["v-1".into()],
        });
    }
    SessionFile {
        name: if with_degenerate_tower { "hecke_s2_tower" } else { "hecke_s2" }.into(),
        version: 1,
        ring: base,
        algebra: AlgebraSection {
            name: "hecke-s2".into(),
            basis: strings(&["one", "T"]),
            degrees: vec![0, 0],
            unit: "one".into(),
            products: vec![rule("T", "T", &[("one", "v"), ("T", "v-1")])],
        },
        modules: vec![module("index", "v"), module("sign", "-1")],
        specializations: vec![
            SpecializationSection {
                name: "v1-rational".into(),
                target: RingDescriptor::Rationals,
                assignments: assignments(&[("v", "1")]),
            },
            SpecializationSection {
                name: "v1-mod2".into(),
                target: RingDescriptor::PrimeField { p: 2 },
                assignments: assignments(&[("v", "1")]),
            },
        ],
        towers,
    }
}

/// The Iwahori-Hecke algebra of S3 over QQ[v, v^-1] on the basis
/// {T_w}, multiplication by the braid and quadratic relations, with
/// its three generic simple modules and the specialization at a
/// primitive third root of unity.
fn hecke_s3_e3() -> SessionFile {
    let a = Ring::laurent(Ring::Rat, &["v"]);
    let k = Ring::frac(a.clone());

    // permutations of {0,1,2} indexed in basis order, with reduced
    // words in the generators s1 (letter 0) and s2 (letter 1)
    let perms: [[usize; 3]; 6] =
        [[0, 1, 2], [1, 0, 2], [0, 2, 1], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let words: [&[usize]; 6] = [&[], &[0], &[1], &[0, 1], &[1, 0], &[0, 1, 0]];
    let labels = ["Te", "T1", "T2", "T12", "T21", "T121"];
    let compose = |u: [usize; 3], w: [usize; 3]| [u[w[0]], u[w[1]], u[w[2]]];
    let index_of = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let length = |p: [usize; 3]| {
        let mut inv = 0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        inv
    };
    let gens = [perms[1], perms[2]];

    let v = Scalar::var(&a, "v").expect("laurent generator");
    let v_minus_1 = v.sub(&Scalar::one(&a));
    // T_w T_s: either T_{ws} or (v-1) T_w + v T_{ws}
    let times_gen = |w: usize, g: usize| -> Vec<(usize, Scalar)> {
        let target = index_of(compose(perms[w], gens[g]));
        if length(perms[target]) > length(perms[w]) {
            vec![(target, Scalar::one(&a))]
        } else {
            vec![(w, v_minus_1.clone()), (target, v.clone())]
        }
    };
    let structure: Vec<Vec<Vec<(usize, Scalar)>>> = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                    acc.insert(i, Scalar::one(&a));
                    for &g in words[j] {
                        let mut next: BTreeMap<usize, Scalar> = BTreeMap::new();
                        for (w, c) in &acc {
                            for (t, d) in times_gen(*w, g) {
                                let e = next.entry(t).or_insert_with(|| Scalar::zero(&a));
                                *e = e.add(&c.mul(&d));
                            }
                        }
                        acc = next;
                    }
                    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
                })
                .collect()
        })
        .collect();
    let algebra = GradedAlgebra::new(
        a.clone(),
        strings(&labels),
        vec![0; 6],
        0,
        structure,
    )
    .expect("hecke table is well-shaped");

    // generic simple modules: index (T_i -> v), sign (T_i -> -1), and
    // the two-dimensional reflection module
    let parse = |s: &str| crate::ring::parse_scalar(s, &k).expect("fixture entry");
    let m = |rows: [[&str; 2]; 2]| {
        Matrix::from_rows(
            &k,
            rows.iter().map(|r| r.iter().map(|e| parse(e)).collect()).collect(),
        )
    };
    let gen_mats = [m([["-1", "0"], ["1", "v"]]), m([["v", "v"], ["0", "-1"]])];
    let word_matrix = |w: &[usize]| {
        w.iter().fold(Matrix::identity(&k, 2), |acc, &g| acc.mul(&gen_mats[g]))
    };
    let stringify = |mat: &Matrix| -> Vec<Vec<String>> {
        (0..mat.nrows())
            .map(|r| (0..mat.ncols()).map(|c| mat.get(r, c).to_string()).collect())
            .collect()
    };
    let scalar_module = |name: &str, t: &str| {
        let tval = parse(t);
        let action = labels
            .iter()
            .zip(&words)
            .map(|(l, w)| {
                let mut acc = Scalar::one(&k);
                for _ in w.iter() {
                    acc = acc.mul(&tval);
                }
                (l.to_string(), vec![vec![acc.to_string()]])
            })
            .collect();
        ModuleSection {
            name: name.into(),
            field: RingDescriptor::from_ring(&k),
            degrees: vec![0],
            action,
        }
    };
    let std_module = ModuleSection {
        name: "std".into(),
        field: RingDescriptor::from_ring(&k),
        degrees: vec![0, 0],
        action: labels
            .iter()
            .zip(&words)
            .map(|(l, w)| (l.to_string(), stringify(&word_matrix(w))))
            .collect(),
    };

    SessionFile {
        name: "hecke_s3_e3".into(),
        version: 1,
        ring: RingDescriptor::from_ring(&a),
        algebra: export_algebra("hecke-s3", &algebra),
        modules: vec![scalar_module("index", "v"), scalar_module("sign", "-1"), std_module],
        specializations: vec![SpecializationSection {
            name: "zeta3".into(),
            target: RingDescriptor::Cyclotomic { e: 3, var: None },
            assignments: assignments(&[("v", "z")]),
        }],
        towers: vec![],
    }
}

/// QQ[g] / (g^2 + 1): the unique simple module has endomorphism ring
/// QQ(i), so splitness fails. Negative control.
fn nonsplit_rotation() -> SessionFile {
    SessionFile {
        name: "nonsplit_rotation".into(),
        version: 1,
        ring: RingDescriptor::Rationals,
        algebra: AlgebraSection {
            name: "rotation".into(),
            basis: strings(&["one", "g"]),
            degrees: vec![0, 0],
            unit: "one".into(),
            products: vec![rule("g", "g", &[("one", "-1")])],
        },
        modules: vec![],
        specializations: vec![],
        towers: vec![],
    }
}
