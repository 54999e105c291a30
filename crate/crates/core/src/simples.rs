//! Wedderburn data of a finite-dimensional algebra over an explicit
//! field: Jacobson radical, simple modules together with their gradings,
//! composition multiplicities, and graded composition multiplicities.
//!
//! Everything is exact. The radical comes from the trace form of the
//! regular representation in characteristic zero and from the chain of
//! characteristic-coefficient functionals in characteristic p; either
//! way the result is re-verified against the defining properties (ideal,
//! nilpotent, semisimple quotient) before it is returned. Simple modules
//! are cut out of the semisimple quotient by a complete family of
//! primitive orthogonal idempotents, found by splitting along minimal
//! polynomials of corner elements. Over a cyclotomic field the corner
//! search runs on the restriction of scalars to the rationals, which is
//! harmless because being an idempotent, being primitive, and linkage
//! are ring-theoretic properties that do not see the scalars.

use crate::algebra::{AlgebraRef, GradedAlgebra};
use crate::character::graded_character;
use crate::error::{Error, Result};
use crate::idempotent::{fp_idempotents, rational_idempotents};
use crate::linalg::Matrix;
use crate::rep::{GradedClass, GradedModuleRep, UngradedModuleRep};
use crate::ring::ffpoly::{roots as fp_roots, FpPoly};
use crate::ring::{RatPoly, Ring, Scalar, Value};
use num::rational::BigRational;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest module dimension `composition_factors` accepts by default.
pub const DEFAULT_DIMENSION_BOUND: usize = 64;

fn supported_field(ring: &Ring) -> Result<()> {
    match ring {
        Ring::Rat | Ring::Cyclotomic { .. } | Ring::Gf { .. } => Ok(()),
        other => Err(Error::UnsupportedField(format!(
            "semisimple structure needs coefficients in QQ, QQ(zeta_e), or GF(p), got {other}"
        ))),
    }
}

fn as_bigrational(s: &Scalar) -> BigRational {
    match s.value() {
        Value::Rat(q) => q.clone(),
        Value::Int(n) => BigRational::from(n.clone()),
        _ => panic!("expected a rational scalar"),
    }
}

fn as_mod(s: &Scalar) -> u64 {
    match s.value() {
        Value::Mod(m) => *m,
        _ => panic!("expected a prime-field scalar"),
    }
}

fn cyc_coeffs(s: &Scalar, phi: usize) -> Vec<BigRational> {
    match s.value() {
        Value::Cyc(c) => {
            let mut v = c.clone();
            v.resize(phi, BigRational::zero());
            v
        }
        _ => panic!("expected a cyclotomic scalar"),
    }
}

fn vec_zero(ring: &Ring, n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(ring); n]
}

fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

fn vec_add_scaled(target: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    for (t, x) in target.iter_mut().zip(v) {
        *t = t.add(&c.mul(x));
    }
}

/// Row-reduced subspace of an ambient coordinate space.
#[derive(Clone)]
struct Sub {
    mat: Matrix,
    pivots: Vec<usize>,
}

impl Sub {
    fn span(ring: &Ring, ambient: usize, rows: Vec<Vec<Scalar>>) -> Sub {
        let nonzero: Vec<Vec<Scalar>> = rows.into_iter().filter(|r| !vec_is_zero(r)).collect();
        if nonzero.is_empty() {
            return Sub { mat: Matrix::zero(ring, 0, ambient), pivots: Vec::new() };
        }
        let (red, pivots) = Matrix::from_rows(ring, nonzero).rref();
        let kept: Vec<Vec<Scalar>> = (0..pivots.len()).map(|i| red.row(i).to_vec()).collect();
        let mat = if kept.is_empty() {
            Matrix::zero(ring, 0, ambient)
        } else {
            Matrix::from_rows(ring, kept)
        };
        Sub { mat, pivots }
    }

    fn full(ring: &Ring, ambient: usize) -> Sub {
        Sub { mat: Matrix::identity(ring, ambient), pivots: (0..ambient).collect() }
    }

    fn dim(&self) -> usize {
        self.pivots.len()
    }

    fn row(&self, k: usize) -> &[Scalar] {
        self.mat.row(k)
    }

    /// Remainder of v after clearing every pivot coordinate.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let c = w[p].clone();
            for (j, wj) in w.iter_mut().enumerate() {
                *wj = wj.sub(&c.mul(self.mat.get(k, j)));
            }
        }
        w
    }

    fn contains(&self, v: &[Scalar]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    /// Coordinates of v in the row basis, or None when v is outside.
    fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rec = vec_zero(self.mat.ring(), v.len());
        for (k, ck) in c.iter().enumerate() {
            if !ck.is_zero() {
                vec_add_scaled(&mut rec, ck, self.row(k));
            }
        }
        (rec == v).then_some(c)
    }
}

/// Unital associative algebra with an explicit basis over a field,
/// stored as a dense multiplication table.
#[derive(Clone)]
struct Assoc {
    field: Ring,
    dim: usize,
    table: Vec<Vec<Vec<Scalar>>>,
    one: Vec<Scalar>,
}

impl Assoc {
    fn from_algebra(alg: &GradedAlgebra) -> Assoc {
        let field = alg.ring().clone();
        let n = alg.dim();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = vec_zero(&field, n);
                        for (r, c) in alg.product(i, j) {
                            v[*r] = c.clone();
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let mut one = vec_zero(&field, n);
        one[alg.unit()] = Scalar::one(&field);
        Assoc { field, dim: n, table, one }
    }

    fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec_zero(&self.field, self.dim);
        v[i] = Scalar::one(&self.field);
        v
    }

    fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec_zero(&self.field, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.mul(yj);
                for (r, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[r] = out[r].add(&c.mul(t));
                    }
                }
            }
        }
        out
    }

    fn left_matrix(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zero(&self.field, self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for s in 0..self.dim {
                for (r, t) in self.table[i][s].iter().enumerate() {
                    if !t.is_zero() {
                        m.set(r, s, m.get(r, s).add(&xi.mul(t)));
                    }
                }
            }
        }
        m
    }

    /// Traces of left multiplication by each basis element.
    fn regular_traces(&self) -> Vec<Scalar> {
        (0..self.dim)
            .map(|i| {
                let mut acc = Scalar::zero(&self.field);
                for k in 0..self.dim {
                    acc = acc.add(&self.table[i][k][k]);
                }
                acc
            })
            .collect()
    }
}

fn combine(ring: &Ring, ambient: usize, coeffs: &[Scalar], basis: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut out = vec_zero(ring, ambient);
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            vec_add_scaled(&mut out, c, &basis[k]);
        }
    }
    out
}

/// Radical as a subspace, without the verification pass.
fn radical_assoc(a: &Assoc) -> Result<Sub> {
    let p = a.field.characteristic();
    if p == 0 {
        // trace form of the regular representation
        let rt = a.regular_traces();
        let gram = Matrix::from_fn(&a.field, a.dim, a.dim, |r, s| {
            let mut acc = Scalar::zero(&a.field);
            for (i, c) in a.table[r][s].iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&c.mul(&rt[i]));
                }
            }
            acc
        });
        return Ok(Sub::span(&a.field, a.dim, gram.nullspace()));
    }
    // characteristic p over the prime field: descending chain cut out by
    // the characteristic polynomial coefficients c_{p^j} of left
    // multiplications, which are linear on each stage
    let mut space: Vec<Vec<Scalar>> = (0..a.dim).map(|i| a.basis_vec(i)).collect();
    let mut m = 1u64;
    while m as usize <= a.dim && !space.is_empty() {
        let k = space.len();
        let func = Matrix::from_fn(&a.field, k, k, |r, s| {
            let prod = a.mul(&space[s], &space[r]);
            let cp = a.left_matrix(&prod).charpoly();
            cp.coeff(a.dim as i64 - m as i64)
        });
        space = func
            .nullspace()
            .iter()
            .map(|c| combine(&a.field, a.dim, c, &space))
            .collect();
        m *= p;
    }
    Ok(Sub::span(&a.field, a.dim, space))
}

/// Confirms the three defining properties of the computed radical: it is
/// a two-sided ideal, it is nilpotent, and the quotient has radical zero.
fn verify_radical(a: &Assoc, rad: &Sub) -> Result<()> {
    for k in 0..a.dim {
        let ek = a.basis_vec(k);
        for r in 0..rad.dim() {
            if !rad.contains(&a.mul(&ek, rad.row(r))) || !rad.contains(&a.mul(rad.row(r), &ek)) {
                return Err(Error::Internal(
                    "radical verification failed: not a two-sided ideal".into(),
                ));
            }
        }
    }
    let mut cur = rad.clone();
    let mut steps = 0;
    while cur.dim() > 0 {
        steps += 1;
        if steps > a.dim {
            return Err(Error::Internal(
                "radical verification failed: not nilpotent".into(),
            ));
        }
        let mut rows = Vec::new();
        for i in 0..cur.dim() {
            for j in 0..rad.dim() {
                rows.push(a.mul(cur.row(i), rad.row(j)));
            }
        }
        cur = Sub::span(&a.field, a.dim, rows);
    }
    if rad.dim() > 0 {
        let q = Quotient::build(a, rad);
        if radical_assoc(&q.assoc)?.dim() != 0 {
            return Err(Error::Internal(
                "radical verification failed: quotient is not semisimple".into(),
            ));
        }
    }
    Ok(())
}

/// Basis of the Jacobson radical, as coefficient vectors over the
/// algebra's basis. Verified before it is returned.
pub fn radical(alg: &GradedAlgebra) -> Result<Vec<Vec<Scalar>>> {
    supported_field(alg.ring())?;
    let a = Assoc::from_algebra(alg);
    let rad = radical_assoc(&a)?;
    verify_radical(&a, &rad)?;
    Ok((0..rad.dim()).map(|i| rad.row(i).to_vec()).collect())
}

/// Semisimple quotient T = A/J with the projection data.
struct Quotient {
    assoc: Assoc,
    rad: Sub,
    comp: Vec<usize>,
}

impl Quotient {
    fn build(a: &Assoc, rad: &Sub) -> Quotient {
        let comp: Vec<usize> = (0..a.dim).filter(|i| !rad.pivots.contains(i)).collect();
        let dim = comp.len();
        let project = |v: &[Scalar]| -> Vec<Scalar> {
            let w = rad.reduce(v);
            comp.iter().map(|&c| w[c].clone()).collect()
        };
        let table = comp
            .iter()
            .map(|&ci| comp.iter().map(|&cj| project(&a.table[ci][cj])).collect())
            .collect();
        let one = project(&a.one);
        Quotient {
            assoc: Assoc { field: a.field.clone(), dim, table, one },
            rad: rad.clone(),
            comp,
        }
    }

    /// Image of the m-th algebra basis element in the quotient.
    fn project_basis(&self, m: usize, ambient: usize) -> Vec<Scalar> {
        let mut v = vec_zero(&self.assoc.field, ambient);
        v[m] = Scalar::one(&self.assoc.field);
        let w = self.rad.reduce(&v);
        self.comp.iter().map(|&c| w[c].clone()).collect()
    }
}

/// A form of the algebra suitable for idempotent searching: identical
/// over QQ and GF(p), the restriction of scalars to QQ over a cyclotomic
/// field. Elements keep their meaning, only the coordinates change.
struct Restricted {
    ft: Assoc,
    phi: usize,
    l: Ring,
}

impl Restricted {
    fn new(t: &Assoc) -> Restricted {
        let Ring::Cyclotomic { e, var } = &t.field else {
            return Restricted { ft: t.clone(), phi: 1, l: t.field.clone() };
        };
        let phi = Ring::euler_phi(*e) as usize;
        let zeta = Scalar::var(&t.field, var).expect("cyclotomic generator");
        let f = Ring::Rat;
        let n = t.dim * phi;
        let flat = |i: usize, k: usize| i * phi + k;
        let mut table = vec![vec![vec_zero(&f, n); n]; n];
        for i in 0..t.dim {
            for k in 0..phi {
                for j in 0..t.dim {
                    for l2 in 0..phi {
                        let z = zeta.pow((k + l2) as i64).expect("unit power");
                        let entry = &mut table[flat(i, k)][flat(j, l2)];
                        for (j2, c) in t.table[i][j].iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            for (m2, q) in cyc_coeffs(&z.mul(c), phi).iter().enumerate() {
                                if !q.is_zero() {
                                    entry[flat(j2, m2)] = Scalar::from_rational(&f, q)
                                        .expect("rational coefficient");
                                }
                            }
                        }
                    }
                }
            }
        }
        let ft = Assoc { field: f, dim: n, table, one: Vec::new() };
        let mut r = Restricted { ft, phi, l: t.field.clone() };
        r.ft.one = r.down(&t.one);
        r
    }

    fn down(&self, v: &[Scalar]) -> Vec<Scalar> {
        if self.phi == 1 {
            return v.to_vec();
        }
        let mut out = vec_zero(&self.ft.field, v.len() * self.phi);
        for (i, c) in v.iter().enumerate() {
            for (k, q) in cyc_coeffs(c, self.phi).iter().enumerate() {
                if !q.is_zero() {
                    out[i * self.phi + k] =
                        Scalar::from_rational(&self.ft.field, q).expect("rational coefficient");
                }
            }
        }
        out
    }

    fn up(&self, w: &[Scalar]) -> Vec<Scalar> {
        if self.phi == 1 {
            return w.to_vec();
        }
        let Ring::Cyclotomic { var, .. } = &self.l else { unreachable!() };
        let zeta = Scalar::var(&self.l, var).expect("cyclotomic generator");
        let dim = w.len() / self.phi;
        (0..dim)
            .map(|i| {
                let mut acc = Scalar::zero(&self.l);
                for k in 0..self.phi {
                    let c = &w[i * self.phi + k];
                    if c.is_zero() {
                        continue;
                    }
                    let lifted = Scalar::from_rational(&self.l, &as_bigrational(c))
                        .expect("rational coefficient");
                    acc = acc.add(&lifted.mul(&zeta.pow(k as i64).expect("unit power")));
                }
                acc
            })
            .collect()
    }
}

/// Monic minimal polynomial of x inside the corner with unit e, as
/// ascending coefficients. None signals a consistency failure.
fn corner_minpoly(ft: &Assoc, corner: &Sub, e: &[Scalar], x: &[Scalar]) -> Option<Vec<Scalar>> {
    let field = &ft.field;
    let mut rows: Vec<Vec<Scalar>> = vec![corner.coords(e)?];
    let mut pw = e.to_vec();
    loop {
        if rows.len() > corner.dim() {
            return None;
        }
        pw = ft.mul(&pw, x);
        let co = corner.coords(&pw)?;
        let mat = Matrix::from_fn(field, corner.dim(), rows.len(), |r, s| rows[s][r].clone());
        let rhs = Matrix::from_rows(field, co.iter().map(|c| vec![c.clone()]).collect());
        if let Some(sol) = mat.solve(&rhs) {
            let k = rows.len();
            let mut mu = Vec::with_capacity(k + 1);
            for i in 0..k {
                mu.push(sol.get(i, 0).neg());
            }
            mu.push(Scalar::one(field));
            return Some(mu);
        }
        rows.push(co);
    }
}

/// Evaluates a polynomial at x inside the corner whose unit is e.
fn eval_in_corner(ft: &Assoc, e: &[Scalar], x: &[Scalar], poly: &[Scalar]) -> Vec<Scalar> {
    let mut acc = vec_zero(&ft.field, ft.dim);
    for c in poly.iter().rev() {
        acc = ft.mul(&acc, x);
        if !c.is_zero() {
            vec_add_scaled(&mut acc, c, e);
        }
    }
    acc
}

/// Tries to write e as a sum of at least two orthogonal idempotents.
/// None means no candidate split e, which is how division corners
/// (primitive idempotents) present themselves.
fn split_idempotent(
    ft: &Assoc,
    e: &[Scalar],
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<Vec<Scalar>>>> {
    let rows: Vec<Vec<Scalar>> = (0..ft.dim)
        .map(|k| ft.mul(&ft.mul(e, &ft.basis_vec(k)), e))
        .collect();
    let corner = Sub::span(&ft.field, ft.dim, rows);
    let cdim = corner.dim();
    if cdim <= 1 {
        return Ok(None);
    }
    let p = ft.field.characteristic();
    for attempt in 0..(cdim + 24) {
        let x: Vec<Scalar> = if attempt < cdim {
            corner.row(attempt).to_vec()
        } else {
            let mut v = vec_zero(&ft.field, ft.dim);
            for i in 0..cdim {
                let c = Scalar::from_int(&ft.field, rng.gen_range(-11..12));
                if !c.is_zero() {
                    vec_add_scaled(&mut v, &c, corner.row(i));
                }
            }
            v
        };
        if vec_is_zero(&x) {
            continue;
        }
        let Some(mu) = corner_minpoly(ft, &corner, e, &x) else {
            return Err(Error::Internal("corner is not multiplicatively closed".into()));
        };
        if mu.len() <= 2 {
            continue;
        }
        let piece_polys: Vec<Vec<Scalar>> = if p == 0 {
            let rp = RatPoly::from_coeffs(mu.iter().map(as_bigrational).collect());
            if rp.gcd(&rp.derivative()).degree().unwrap_or(0) > 0 {
                continue;
            }
            let idems = rational_idempotents(&rp, rng.gen())?;
            if idems.len() <= 1 {
                continue;
            }
            idems
                .iter()
                .map(|q| {
                    q.0.iter()
                        .map(|c| Scalar::from_rational(&ft.field, c).expect("rational scalar"))
                        .collect()
                })
                .collect()
        } else {
            let fp = FpPoly::new(p, mu.iter().map(as_mod).collect());
            let idems = fp_idempotents(&fp, rng);
            if idems.len() <= 1 {
                continue;
            }
            idems
                .iter()
                .map(|q| q.coeffs.iter().map(|&c| Scalar::from_int(&ft.field, c as i64)).collect())
                .collect()
        };
        let pieces: Vec<Vec<Scalar>> =
            piece_polys.iter().map(|poly| eval_in_corner(ft, e, &x, poly)).collect();
        let mut total = vec_zero(&ft.field, ft.dim);
        for piece in &pieces {
            if vec_is_zero(piece) || ft.mul(piece, piece) != *piece {
                return Err(Error::Internal("idempotent split produced a bad piece".into()));
            }
            vec_add_scaled(&mut total, &Scalar::one(&ft.field), piece);
        }
        if total != *e {
            return Err(Error::Internal("idempotent split does not sum to the input".into()));
        }
        for i in 0..pieces.len() {
            for j in 0..pieces.len() {
                if i != j && !vec_is_zero(&ft.mul(&pieces[i], &pieces[j])) {
                    return Err(Error::Internal("idempotent split is not orthogonal".into()));
                }
            }
        }
        return Ok(Some(pieces));
    }
    Ok(None)
}

/// Complete family of primitive orthogonal idempotents of the
/// semisimple quotient, as coefficient vectors over its basis.
fn primitive_idempotents(t: &Assoc, seed: u64) -> Result<Vec<Vec<Scalar>>> {
    let r = Restricted::new(t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work: Vec<Vec<Scalar>> = vec![r.ft.one.clone()];
    let mut prims: Vec<Vec<Scalar>> = Vec::new();
    let mut guard = 0;
    while let Some(e) = work.pop() {
        guard += 1;
        if guard > 4 * r.ft.dim + 8 {
            return Err(Error::Internal("idempotent refinement did not terminate".into()));
        }
        match split_idempotent(&r.ft, &e, &mut rng)? {
            Some(pieces) => work.extend(pieces),
            None => prims.push(e),
        }
    }
    let mut total = vec_zero(&r.ft.field, r.ft.dim);
    for e in &prims {
        vec_add_scaled(&mut total, &Scalar::one(&r.ft.field), e);
    }
    if total != r.ft.one {
        return Err(Error::Internal("primitive idempotents do not sum to one".into()));
    }
    Ok(prims.iter().map(|e| r.up(e)).collect())
}

/// Groups primitive idempotents into blocks via the linkage relation
/// e T f != 0.
fn block_partition(t: &Assoc, prims: &[Vec<Scalar>]) -> Vec<Vec<usize>> {
    let n = prims.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let linked = (0..t.dim).any(|k| {
                let b = t.basis_vec(k);
                !vec_is_zero(&t.mul(&t.mul(&prims[i], &b), &prims[j]))
                    || !vec_is_zero(&t.mul(&t.mul(&prims[j], &b), &prims[i]))
            });
            if linked {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of.iter().find(|(root, _)| *root == r) {
            Some(&(_, b)) => blocks[b].push(i),
            None => {
                root_of.push((r, blocks.len()));
                blocks.push(vec![i]);
            }
        }
    }
    blocks
}

fn verify_block_centrality(t: &Assoc, prims: &[Vec<Scalar>], blocks: &[Vec<usize>]) -> Result<()> {
    for block in blocks {
        let mut c = vec_zero(&t.field, t.dim);
        for &i in block {
            vec_add_scaled(&mut c, &Scalar::one(&t.field), &prims[i]);
        }
        for k in 0..t.dim {
            let b = t.basis_vec(k);
            if t.mul(&c, &b) != t.mul(&b, &c) {
                return Err(Error::Internal("block idempotent is not central".into()));
            }
        }
    }
    Ok(())
}

/// Left ideal T e as a module over the original algebra, acting through
/// the projection onto the semisimple quotient.
fn simple_from_idempotent(
    alg: &AlgebraRef,
    q: &Quotient,
    e: &[Scalar],
) -> Result<UngradedModuleRep> {
    let t = &q.assoc;
    let field = t.field.clone();
    let rows: Vec<Vec<Scalar>> = (0..t.dim).map(|k| t.mul(&t.basis_vec(k), e)).collect();
    let s = Sub::span(&field, t.dim, rows);
    let sdim = s.dim();
    let mut action = Vec::with_capacity(alg.dim());
    for m in 0..alg.dim() {
        let am = q.project_basis(m, alg.dim());
        let mut mat = Matrix::zero(&field, sdim, sdim);
        for c in 0..sdim {
            let w = t.mul(&am, s.row(c));
            let coords = s
                .coords(&w)
                .ok_or_else(|| Error::Internal("left ideal is not closed under the action".into()))?;
            for (r, val) in coords.into_iter().enumerate() {
                mat.set(r, c, val);
            }
        }
        action.push(mat);
    }
    UngradedModuleRep::new(alg.clone(), field, action)
}

/// dim Hom(source, target) of module maps between two representations
/// of the same algebra, given by their action matrices.
fn hom_dim(source: &[Matrix], target: &[Matrix], field: &Ring) -> usize {
    let ds = source.first().map_or(0, Matrix::nrows);
    let dt = target.first().map_or(0, Matrix::nrows);
    if ds == 0 || dt == 0 {
        return 0;
    }
    let na = source.len();
    let mut sys = Matrix::zero(field, na * dt * ds, dt * ds);
    for m in 0..na {
        for a in 0..dt {
            for b in 0..ds {
                let row = m * dt * ds + a * ds + b;
                for v in 0..ds {
                    let col = a * ds + v;
                    sys.set(row, col, sys.get(row, col).add(source[m].get(v, b)));
                }
                for u in 0..dt {
                    let col = u * ds + b;
                    sys.set(row, col, sys.get(row, col).sub(target[m].get(a, u)));
                }
            }
        }
    }
    sys.nullspace().len()
}

fn ungraded_character(m: &UngradedModuleRep) -> Vec<Scalar> {
    m.action_matrices().iter().map(Matrix::trace).collect()
}

struct Extraction {
    modules: Vec<UngradedModuleRep>,
    end_dims: Vec<usize>,
    dim_quotient: usize,
}

fn extract_simples(alg: &AlgebraRef, seed: u64) -> Result<Extraction> {
    supported_field(alg.ring())?;
    let a = Assoc::from_algebra(alg);
    let rad = radical_assoc(&a)?;
    verify_radical(&a, &rad)?;
    let q = Quotient::build(&a, &rad);
    let prims = primitive_idempotents(&q.assoc, seed)?;
    let blocks = block_partition(&q.assoc, &prims);
    verify_block_centrality(&q.assoc, &prims, &blocks)?;
    let mut modules = Vec::new();
    let mut end_dims = Vec::new();
    for block in &blocks {
        let m = simple_from_idempotent(alg, &q, &prims[block[0]])?;
        if !m.validate().is_ok() {
            return Err(Error::Internal("extracted simple fails the module laws".into()));
        }
        end_dims.push(hom_dim(m.action_matrices(), m.action_matrices(), &q.assoc.field));
        modules.push(m);
    }
    Ok(Extraction { modules, end_dims, dim_quotient: q.assoc.dim })
}

/// Whether every simple module has a one-dimensional endomorphism ring
/// over the coefficient field.
pub fn check_split(alg: &AlgebraRef, seed: u64) -> Result<bool> {
    Ok(extract_simples(alg, seed)?.end_dims.iter().all(|&d| d == 1))
}

/// The simple graded modules of a field-coefficient algebra, in the
/// canonical order: ascending dimension, ties broken by the ungraded
/// character compared entry by entry. Gradings are normalized so the
/// lowest degree is zero.
#[derive(Debug, Clone)]
pub struct SimpleSet {
    algebra: AlgebraRef,
    simples: Vec<GradedModuleRep>,
}

impl SimpleSet {
    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.simples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simples.is_empty()
    }

    pub fn simples(&self) -> &[GradedModuleRep] {
        &self.simples
    }

    pub fn get(&self, i: usize) -> &GradedModuleRep {
        &self.simples[i]
    }
}

pub fn simple_modules(alg: &AlgebraRef, seed: u64) -> Result<SimpleSet> {
    let ext = extract_simples(alg, seed)?;
    if let Some((i, d)) = ext.end_dims.iter().enumerate().find(|&(_, &d)| d > 1) {
        return Err(Error::NotSplit(format!(
            "a simple module of dimension {} has a {d}-dimensional endomorphism ring over {}",
            ext.modules[i].dim(),
            alg.ring()
        )));
    }
    let mut keyed: Vec<(usize, Vec<Scalar>, GradedModuleRep)> = Vec::new();
    for m in &ext.modules {
        keyed.push((m.dim(), ungraded_character(m), grade_simple(m)?));
    }
    keyed.sort_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| {
            for (x, y) in a.1.iter().zip(&b.1) {
                let o = x.cmp_canonical(y);
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    for w in keyed.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            return Err(Error::Internal(
                "two distinct simple modules share their character".into(),
            ));
        }
    }
    let total: usize = keyed.iter().map(|(d, _, _)| d * d).sum();
    if total != ext.dim_quotient {
        return Err(Error::Internal(format!(
            "squared simple dimensions sum to {total}, semisimple quotient has dimension {}",
            ext.dim_quotient
        )));
    }
    Ok(SimpleSet {
        algebra: alg.clone(),
        simples: keyed.into_iter().map(|(_, _, g)| g).collect(),
    })
}

/// Multiplicity of each simple in a composition series of the module,
/// aligned with the order of the simple set. Uses the radical
/// filtration; each layer is semisimple, so multiplicities are
/// homomorphism space dimensions.
pub fn composition_factors(
    module: &UngradedModuleRep,
    set: &SimpleSet,
    bound: usize,
) -> Result<Vec<usize>> {
    if module.algebra() != set.algebra() {
        return Err(Error::AlgebraMismatch(
            "module and simple set live over different algebras".into(),
        ));
    }
    let field = module.field().clone();
    if &field != set.algebra().ring() {
        return Err(Error::FieldMismatch(format!(
            "module over {field}, simple modules over {}",
            set.algebra().ring()
        )));
    }
    if module.dim() > bound {
        return Err(Error::DimensionBound(module.dim(), bound));
    }
    let n = module.dim();
    let mut counts = vec![0usize; set.len()];
    if n == 0 {
        return Ok(counts);
    }
    let rad = radical(set.algebra())?;
    let rad_mats: Vec<Matrix> = rad
        .iter()
        .map(|j| module.action_of(j))
        .collect::<Result<Vec<Matrix>>>()?;
    let mut chain: Vec<Sub> = vec![Sub::full(&field, n)];
    loop {
        let cur = chain.last().expect("chain is never empty");
        if cur.dim() == 0 {
            break;
        }
        if chain.len() > n + 1 {
            return Err(Error::Internal("radical filtration does not terminate".into()));
        }
        let mut rows = Vec::new();
        for jm in &rad_mats {
            for r in 0..cur.dim() {
                rows.push(jm.mul_vec(cur.row(r)));
            }
        }
        let next = Sub::span(&field, n, rows);
        if !next.pivots.iter().all(|p| cur.pivots.contains(p)) {
            return Err(Error::Internal("filtration pivots fail to nest".into()));
        }
        chain.push(next);
    }
    for w in chain.windows(2) {
        let layer = layer_action(module, &w[0], &w[1]);
        if layer.first().map_or(0, Matrix::nrows) == 0 {
            continue;
        }
        for (i, s) in set.simples().iter().enumerate() {
            counts[i] += hom_dim(&layer, s.action_matrices(), &field);
        }
    }
    let covered: usize = counts.iter().zip(set.simples()).map(|(c, s)| c * s.dim()).sum();
    if covered != n {
        return Err(Error::Internal(format!(
            "composition factors cover dimension {covered} of {n}"
        )));
    }
    Ok(counts)
}

/// Action matrices on the layer W / W', where W' sits inside W and both
/// are row-reduced. Pivot nesting makes the non-shared rref rows of W a
/// basis of the quotient, with coordinates read off at their pivots.
fn layer_action(module: &UngradedModuleRep, wk: &Sub, wk1: &Sub) -> Vec<Matrix> {
    let field = module.field();
    let qidx: Vec<usize> =
        (0..wk.dim()).filter(|&r| !wk1.pivots.contains(&wk.pivots[r])).collect();
    let qpivots: Vec<usize> = qidx.iter().map(|&r| wk.pivots[r]).collect();
    let t = qidx.len();
    (0..module.algebra().dim())
        .map(|m| {
            let mut b = Matrix::zero(field, t, t);
            for (s, &rs) in qidx.iter().enumerate() {
                let v = wk1.reduce(&module.action(m).mul_vec(wk.row(rs)));
                for (r, &p) in qpivots.iter().enumerate() {
                    b.set(r, s, v[p].clone());
                }
            }
            b
        })
        .collect()
}

/// Finds degrees making the module graded, directly when the action
/// already respects some grading of the given basis, otherwise through
/// an eigenbasis of a grading operator. The lowest degree in each
/// connected block of the support graph is normalized to zero.
pub fn grade_simple(module: &UngradedModuleRep) -> Result<GradedModuleRep> {
    let alg = module.algebra().clone();
    let field = module.field().clone();
    match propagate_degrees(&alg, module.action_matrices()) {
        Ok(degrees) => finish_grading(alg, field, degrees, module.action_matrices().to_vec()),
        Err(conflict) => fallback_grading(module, &conflict),
    }
}

fn finish_grading(
    alg: AlgebraRef,
    field: Ring,
    degrees: Vec<i64>,
    mats: Vec<Matrix>,
) -> Result<GradedModuleRep> {
    let g = GradedModuleRep::new(alg, field, degrees, mats)?;
    if !g.validate().is_ok() {
        return Err(Error::Internal("constructed grading fails validation".into()));
    }
    Ok(g)
}

/// Degree assignment by constraint propagation: a nonzero entry at
/// (r, s) of the action of a degree-d basis element forces
/// deg(r) = deg(s) + d. Errors with a description of a violated
/// constraint when no assignment exists for this basis.
fn propagate_degrees(
    alg: &GradedAlgebra,
    mats: &[Matrix],
) -> std::result::Result<Vec<i64>, String> {
    let n = mats.first().map_or(0, Matrix::nrows);
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (m, a) in mats.iter().enumerate() {
        let d = alg.degrees()[m];
        for r in 0..n {
            for s in 0..n {
                if !a.get(r, s).is_zero() {
                    adj[s].push((r, d));
                    adj[r].push((s, -d));
                }
            }
        }
    }
    let mut deg: Vec<Option<i64>> = vec![None; n];
    let mut out = vec![0i64; n];
    for start in 0..n {
        if deg[start].is_some() {
            continue;
        }
        deg[start] = Some(0);
        let mut comp = vec![start];
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let du = deg[u].expect("assigned before queueing");
            for &(v, d) in &adj[u] {
                match deg[v] {
                    None => {
                        deg[v] = Some(du + d);
                        comp.push(v);
                        queue.push_back(v);
                    }
                    Some(dv) if dv != du + d => {
                        return Err(format!(
                            "basis vector {v} would need degree {} through basis vector {u}, \
                             but is already forced to degree {dv}",
                            du + d
                        ));
                    }
                    Some(_) => {}
                }
            }
        }
        let min = comp.iter().map(|&i| deg[i].expect("component assigned")).min().unwrap_or(0);
        for i in comp {
            out[i] = deg[i].expect("component assigned") - min;
        }
    }
    Ok(out)
}

fn fallback_grading(module: &UngradedModuleRep, conflict: &str) -> Result<GradedModuleRep> {
    let n = module.dim();
    let field = module.field().clone();
    let alg = module.algebra().clone();
    if n > 16 {
        return Err(Error::NotGradable(format!(
            "{conflict}; the basis-change search is limited to dimension 16, module has {n}"
        )));
    }
    // grading operator D with D a - a D = deg(a) * a for the action a of
    // every homogeneous basis element
    let na = alg.dim();
    let mut sys = Matrix::zero(&field, na * n * n, n * n);
    let mut rhs = Matrix::zero(&field, na * n * n, 1);
    for m in 0..na {
        let a = module.action(m);
        let d = Scalar::from_int(&field, alg.degrees()[m]);
        for i in 0..n {
            for j in 0..n {
                let row = m * n * n + i * n + j;
                for v in 0..n {
                    let col = i * n + v;
                    sys.set(row, col, sys.get(row, col).add(a.get(v, j)));
                }
                for u in 0..n {
                    let col = u * n + j;
                    sys.set(row, col, sys.get(row, col).sub(a.get(i, u)));
                }
                rhs.set(row, 0, d.mul(a.get(i, j)));
            }
        }
    }
    let Some(sol) = sys.solve(&rhs) else {
        return Err(Error::NotGradable(format!(
            "no grading operator is compatible with the action: {conflict}"
        )));
    };
    let dmat = Matrix::from_fn(&field, n, n, |i, j| sol.get(i * n + j, 0).clone());
    let cp = dmat.charpoly();
    let lambdas: Vec<Scalar> = match &field {
        Ring::Rat => {
            let rp = RatPoly::from_coeffs(
                (0..=n as i64).map(|i| as_bigrational(&cp.coeff(i))).collect(),
            );
            let distinct: std::collections::BTreeSet<BigRational> =
                rp.rational_roots().into_iter().collect();
            distinct
                .iter()
                .map(|q| Scalar::from_rational(&field, q).expect("rational scalar"))
                .collect()
        }
        Ring::Gf { p } => {
            let fp = FpPoly::new(*p, (0..=n as i64).map(|i| as_mod(&cp.coeff(i))).collect());
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            fp_roots(&fp, &mut rng)
                .into_iter()
                .map(|(r, _)| Scalar::from_int(&field, r as i64))
                .collect()
        }
        other => {
            return Err(Error::NotGradable(format!(
                "eigenvalues of the grading operator are not computable over {other}; {conflict}"
            )));
        }
    };
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for lam in &lambdas {
        cols.extend(dmat.sub(&Matrix::identity(&field, n).scale(lam)).nullspace());
    }
    if cols.len() != n {
        return Err(Error::NotGradable(
            "the grading operator is not diagonalizable over the coefficient field".into(),
        ));
    }
    let p = Matrix::from_fn(&field, n, n, |i, j| cols[j][i].clone());
    let pinv = p
        .solve(&Matrix::identity(&field, n))
        .ok_or_else(|| Error::Internal("eigenbasis matrix is singular".into()))?;
    let mats: Vec<Matrix> =
        module.action_matrices().iter().map(|a| pinv.mul(a).mul(&p)).collect();
    match propagate_degrees(&alg, &mats) {
        Ok(degrees) => finish_grading(alg, field, degrees, mats),
        Err(c2) => Err(Error::NotGradable(c2)),
    }
}

/// Graded composition multiplicities of a graded module, as Laurent
/// polynomials in q indexed by the simple set. The result is
/// cross-checked at q = 1 against the ungraded composition series.
pub fn graded_multiplicities(module: &GradedModuleRep, set: &SimpleSet) -> Result<GradedClass> {
    if module.algebra() != set.algebra() {
        return Err(Error::AlgebraMismatch(
            "module and simple set live over different algebras".into(),
        ));
    }
    let target = graded_character(module);
    let chars: Vec<_> = set.simples().iter().map(graded_character).collect();
    let mults = crate::character::solve_multiplicities(&target, &chars)?;
    let bound = module.dim().max(DEFAULT_DIMENSION_BOUND);
    let counts = composition_factors(&module.forget_grading(), set, bound)?;
    for (i, poly) in mults.iter().enumerate() {
        let val = poly.eval_at_one();
        if val != Scalar::from_int(&Ring::Int, counts[i] as i64) {
            return Err(Error::OracleMismatch(format!(
                "graded multiplicity of simple {i} gives {val} at q = 1, \
                 the composition series contains it {} times",
                counts[i]
            )));
        }
    }
    let mut class = GradedClass::empty();
    for (i, poly) in mults.into_iter().enumerate() {
        class.insert(i, poly);
    }
    Ok(class)
}
