use criterion::{criterion_group, criterion_main, Criterion};
use gradec_core::{
    decomposition_matrix, emit_session, fingerprint, fixture, fixture_session, parse_session_str,
    simple_modules, specialize_algebra, DEFAULT_FINGERPRINT_DEPTH,
};
use std::sync::Arc;

fn bench_parse(c: &mut Criterion) {
    let text = emit_session(&fixture("hecke_s3_e3").unwrap());
    c.bench_function("parse_validate_hecke_s3", |b| {
        b.iter(|| parse_session_str(&text).unwrap())
    });
}

fn bench_fingerprint(c: &mut Criterion) {
    let session = fixture_session("fermion").unwrap();
    let module = session.module("V").unwrap();
    c.bench_function("fingerprint_fermion_depth2", |b| {
        b.iter(|| fingerprint(module, DEFAULT_FINGERPRINT_DEPTH))
    });
}

fn bench_simples(c: &mut Criterion) {
    let session = fixture_session("hecke_s3_e3").unwrap();
    let theta = session.specialization("zeta3").unwrap();
    let specialized = Arc::new(specialize_algebra(&session.algebra, theta).unwrap());
    c.bench_function("simples_hecke_s3_zeta3", |b| {
        b.iter(|| simple_modules(&specialized, 0).unwrap())
    });
}

fn bench_decompose(c: &mut Criterion) {
    let fermion = fixture_session("fermion").unwrap();
    let a0 = fermion.specialization("a0").unwrap();
    c.bench_function("decompose_fermion", |b| {
        b.iter(|| decomposition_matrix(&fermion.modules, a0, 0).unwrap())
    });

    let hecke = fixture_session("hecke_s3_e3").unwrap();
    let zeta3 = hecke.specialization("zeta3").unwrap();
    c.bench_function("decompose_hecke_s3_zeta3", |b| {
        b.iter(|| decomposition_matrix(&hecke.modules, zeta3, 0).unwrap())
    });
}

criterion_group!(benches, bench_parse, bench_fingerprint, bench_simples, bench_decompose);
criterion_main!(benches);
