use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use linkslope::charspec::{Character, Coord};
use linkslope::corpus::{self, run_manifest, Manifest, Resolver};
use linkslope::par;
use linkslope::slope::{link_slope, ColoredLink, SlopeOptions, SlopeProblem};

/// A sweep of unitary characters `(e^{iθ}, e^{-2iθ})` away from θ = 0.
fn sweep(n: usize) -> Vec<Character> {
    (1..=n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / (n + 1) as f64 + 0.013;
            Character::new(vec![
                Coord::numeric(Complex64::from_polar(1.0, theta)).unwrap(),
                Coord::numeric(Complex64::from_polar(1.0, -2.0 * theta)).unwrap(),
            ])
        })
        .collect()
}

fn slopes(p: &SlopeProblem, chars: &[Character], parallel: bool) -> usize {
    let opts = SlopeOptions::default();
    let f = |w: &Character| link_slope(p, w, &opts).is_ok();
    let out = if parallel { par::map(chars, f) } else { par::map_sequential(chars, f) };
    out.into_iter().filter(|&ok| ok).count()
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("slope_sweep");
    for name in ["L11n353", "L11n396"] {
        let link = ColoredLink::new(corpus::link(name).unwrap(), 0, None).unwrap();
        let problem = link.problem().unwrap();
        let chars: Vec<Character> =
            sweep(256).into_iter().filter(|w| w.is_admissible(&link.linking_vector()).unwrap()).collect();
        assert!(!chars.is_empty(), "{name}: empty sweep");
        group.bench_with_input(BenchmarkId::new("sequential", name), &chars, |b, ch| {
            b.iter(|| slopes(&problem, black_box(ch), false))
        });
        group.bench_with_input(BenchmarkId::new("parallel", name), &chars, |b, ch| {
            b.iter(|| slopes(&problem, black_box(ch), true))
        });
    }
    group.finish();

    let manifest = Manifest::bundled();
    c.bench_function("corpus_manifest", |b| b.iter(|| run_manifest(black_box(&manifest), &Resolver::default())));
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
