use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use latband::bfacf::{ChainState, FugacityParams};
use latband::invariants::{d_lens, table_classification};
use latband::knot::{homfly, kauffman, Identifier, KnotTable, KnotType};
use latband::lattice::{LatticePolygon, Sample};
use latband::reconnection::{find_noncoherent_sites, Surveyor};

fn knot(s: &str) -> KnotType {
    s.parse().unwrap()
}

/// A conformation of `name` after `steps` BFACF steps at fugacity 0.21.
fn grown(table: &KnotTable, name: &str, steps: u64) -> LatticePolygon {
    let start = table.reference_conformation(&knot(name)).unwrap();
    let mut c = ChainState::new(start, FugacityParams::new(0.21).unwrap(), 1).unwrap();
    c.run(steps, steps).unwrap().pop().unwrap()
}

fn bfacf(c: &mut Criterion) {
    let table = KnotTable::bundled().unwrap();
    let start = grown(&table, "8_20", 200_000);
    c.bench_function("bfacf 10^4 steps", |b| {
        b.iter_batched(
            || ChainState::new(start.clone(), FugacityParams::new(0.2).unwrap(), 3).unwrap(),
            |mut chain| {
                for _ in 0..10_000 {
                    black_box(chain.step());
                }
            },
            BatchSize::SmallInput,
        )
    });
}

fn invariants(c: &mut Criterion) {
    let table = KnotTable::bundled().unwrap();
    let r = table.get("8_20").unwrap();
    c.bench_function("homfly 8_20", |b| b.iter(|| homfly(black_box(&r.pd)).unwrap()));
    let r = table.get("8_8").unwrap();
    c.bench_function("kauffman 8_8", |b| b.iter(|| kauffman(black_box(&r.pd)).unwrap()));
    c.bench_function("d(L(997,1)) all spins", |b| {
        b.iter(|| (0..997).map(|i| d_lens(997, 1, i).unwrap()).collect::<Vec<_>>())
    });
    c.bench_function("table classification", |b| b.iter(|| table_classification(black_box(&table)).len()));
}

fn identification(c: &mut Criterion) {
    let table = KnotTable::bundled().unwrap();
    let poly = grown(&table, "8_20", 200_000);
    c.bench_function(&format!("identify 8_20 conformation of length {}", poly.len()), |b| {
        b.iter_batched(
            || Identifier::new(&table, 0),
            |mut idf| idf.identify_polygon(&poly).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn survey(c: &mut Criterion) {
    let table = KnotTable::bundled().unwrap();
    let poly = grown(&table, "8_20", 200_000);
    let sites = find_noncoherent_sites(&poly);
    let sample = Sample { polygon: poly.clone(), chain: 0, step: 0 };
    c.bench_function("find sites", |b| b.iter(|| find_noncoherent_sites(black_box(&poly)).len()));
    c.bench_function(&format!("survey {} sites", sites.len()), |b| {
        b.iter_batched(
            || Surveyor::new(&table, 0),
            |mut sv| sv.survey_all(&knot("8_20"), &sample).len(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bfacf, invariants, identification, survey
}
criterion_main!(benches);
