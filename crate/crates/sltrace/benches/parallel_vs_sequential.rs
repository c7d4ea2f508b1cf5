//! Sequential vs rayon execution of the main fan-outs. Build with
//! `--no-default-features` to see the parallel arm fall back to sequential.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use sltrace::par::Exec;
use sltrace::qtrace::{arc_corpus, trace_arc_with, transport_matrix_with, Orientation, SurfaceContext};
use sltrace::scalars::q_exp;
use sltrace::structmat::SurfaceMatrices;
use sltrace::surface::TriangulatedSurface;

const ARMS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn transport(c: &mut Criterion) {
    let mut g = c.benchmark_group("transport_matrix");
    for n in [3, 4] {
        for (name, exec) in ARMS {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| transport_matrix_with(black_box(n), 1, Orientation::Ccw, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn qdet(c: &mut Criterion) {
    let mut g = c.benchmark_group("qdet");
    g.sample_size(10);
    for n in [3, 4] {
        let m = transport_matrix_with(n, 2, Orientation::Ccw, Exec::Sequential).unwrap();
        for (name, exec) in ARMS {
            g.bench_with_input(BenchmarkId::new(name, n), &m, |b, m| {
                b.iter(|| m.qdet_with(q_exp(n), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_pentagon");
    let s = TriangulatedSurface::polygon(5);
    for n in [2, 3] {
        let m = SurfaceMatrices::new_with(&s, n, Exec::Sequential).unwrap();
        for (name, exec) in ARMS {
            g.bench_with_input(BenchmarkId::new(name, n), &m, |b, m| b.iter(|| m.verify_with(exec)));
        }
    }
    g.finish();
}

fn state_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("arc_state_sum");
    g.sample_size(10);
    let s = TriangulatedSurface::polygon(5);
    for n in [2, 3] {
        let ctx = SurfaceContext::new_with(&s, n, Exec::Sequential).unwrap();
        // the longest routes cross every face
        let arcs: Vec<_> = arc_corpus(&s, n)
            .into_iter()
            .filter(|a| a.passes.len() == s.num_faces())
            .take(8)
            .collect();
        for (name, exec) in ARMS {
            g.bench_with_input(BenchmarkId::new(name, n), &arcs, |b, arcs| {
                b.iter(|| {
                    for a in arcs {
                        black_box(trace_arc_with(&ctx, a, true, exec).unwrap());
                    }
                })
            });
        }
    }
    g.finish();
}

criterion_group!(benches, transport, qdet, identities, state_sums);
criterion_main!(benches);
