use std::hint::black_box;

use cremona_bench::{gcd_pair, map, poly};
use cremona_core::algebra::{gcd, rational_roots, resultant, UniPoly};
use cremona_core::registry;
use criterion::{criterion_group, criterion_main, Criterion};

fn polynomials(c: &mut Criterion) {
    let (a, b) = gcd_pair();
    c.bench_function("gcd/sextics", |bench| bench.iter(|| gcd(black_box(&a), black_box(&b))));

    let p = poly("x^3*y + y^2*z^2 - 3*x*z^3 + z^4");
    let q = poly("x^2*y^2 - x*y*z^2 + 2*z^4");
    c.bench_function("resultant/quartics", |bench| bench.iter(|| resultant(black_box(&p), black_box(&q), 0)));

    let u = UniPoly::from_ints(&[-6, 11, -6, 1]);
    let u = u.mul(&u).mul(&UniPoly::from_ints(&[1, 0, 1]));
    c.bench_function("rational-roots/degree-8", |bench| bench.iter(|| rational_roots(black_box(&u))));
}

fn maps(c: &mut Criterion) {
    let text = "(x^5 + x^2*y*z^2 - z^5 : x^4*y - x^2*z^3 : x^3*y*z - x*z^4)";
    c.bench_function("parse/psi", |bench| bench.iter(|| map(black_box(text))));

    let psi = registry::psi();
    c.bench_function("compose/psi-squared", |bench| bench.iter(|| psi.map.compose(black_box(&psi.map)).unwrap()));

    let chi = registry::chi();
    c.bench_function("jacobian/chi", |bench| bench.iter(|| chi.map.jacobian().unwrap()));
}

criterion_group!(benches, polynomials, maps);
criterion_main!(benches);
