//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p latband-core --test acceptance`.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use latband::bfacf::{ChainState, FugacityParams};
use latband::cmc::{default_ladder, CmcEnsemble};
use latband::invariants::{
    chirally_cosmetic_lens, d_lens, is_square_free, murasugi_congruence_check, table_classification, Rational, Status,
};
use latband::knot::{homfly, Identification, Identifier, KnotTable, KnotType};
use latband::lattice::Sample;
use latband::reconnection::{apply_band, classify, components_after, find_sites, BandKind, Surveyor};
use latband::stats::{estimate_probability, TransitionTally, DEFAULT_BLOCKS};

#[derive(PartialEq)]
enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

struct Line {
    id: &'static str,
    outcome: Outcome,
    detail: String,
}

fn check(id: &'static str, ok: bool, detail: String) -> Line {
    Line { id, outcome: if ok { Outcome::Pass } else { Outcome::Fail }, detail }
}

fn k(s: &str) -> KnotType {
    s.parse().unwrap()
}

fn lens_values() -> Line {
    let t = Instant::now();
    let mut bad = Vec::new();
    for m in (1..=99i64).step_by(2) {
        if d_lens(m, 1, 0).unwrap() != Rational::new(m - 1, 4) {
            bad.push(m);
        }
    }
    let five = d_lens(5, 1, 0).unwrap() == Rational::from_integer(1);
    let one = d_lens(1, 1, 0).unwrap() == Rational::from_integer(0);
    let secs = t.elapsed().as_secs_f64();
    check(
        "1",
        bad.is_empty() && five && one && secs < 1.0,
        format!("d(L(m,1),0) = (m-1)/4 for odd m <= 99, mismatches {bad:?}; d(L(5,1),0) = 1: {five}; d(L(1,1),0) = 0: {one}; {secs:.3} s"),
    )
}

fn cosmetic_lens() -> Line {
    let t = Instant::now();
    let mut hits = Vec::new();
    let mut tested = 0;
    for m in (1..=10_000u64).step_by(2) {
        if is_square_free(m).unwrap() {
            tested += 1;
            if chirally_cosmetic_lens(m as i64).unwrap() {
                hits.push(m);
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(
        "2",
        hits == [1, 5] && secs < 1.0,
        format!("{tested} odd square-free m <= 10^4, true for {hits:?}; {secs:.3} s"),
    )
}

fn murasugi(table: &KnotTable) -> Line {
    let recs: Vec<_> = table.primary().collect();
    let mut pairs = 0;
    let mut bad = Vec::new();
    for (i, a) in recs.iter().enumerate() {
        for b in &recs[i..] {
            pairs += 1;
            if !murasugi_congruence_check(a, b) {
                bad.push(format!("{}/{}", a.knot, b.knot));
            }
        }
    }
    check("4", bad.is_empty(), format!("{pairs} pairs (with self-pairs) over {} types, violations {bad:?}", recs.len()))
}

type Pairs = BTreeSet<(KnotType, KnotType)>;

fn chart_pairs() -> (Pairs, Pairs) {
    let mut dashed = BTreeSet::new();
    let mut solid = BTreeSet::new();
    for line in include_str!("data/table2_edges.txt").lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let t: Vec<&str> = line.split_whitespace().collect();
        let (a, b) = (k(t[1]), k(t[2]));
        let pair = if a <= b { (a, b) } else { (b, a) };
        match t[0] {
            "dashed" => dashed.insert(pair),
            "solid" => solid.insert(pair),
            other => panic!("bad chart line kind {other}"),
        };
    }
    (dashed, solid)
}

fn table_two(table: &KnotTable, gate: bool) -> Line {
    if !gate {
        return check("3", false, "skipped: the congruence gate failed".into());
    }
    let (dashed, solid) = chart_pairs();
    let verdicts = table_classification(table);
    let excluded: BTreeSet<(KnotType, KnotType)> = verdicts
        .iter()
        .filter(|p| p.verdict.status == Status::Excluded)
        .map(|p| if p.a <= p.b { (p.a.clone(), p.b.clone()) } else { (p.b.clone(), p.a.clone()) })
        .collect();
    let missed: Vec<_> = dashed.difference(&excluded).collect();
    let extra: Vec<_> = excluded.difference(&dashed).collect();
    let solid_bad: Vec<_> = solid.intersection(&excluded).collect();
    check(
        "3",
        missed.is_empty() && solid_bad.is_empty(),
        format!(
            "{} dashed pairs, {} excluded; dashed not excluded {missed:?}, solid excluded {solid_bad:?}, excluded outside the chart {}",
            dashed.len(),
            excluded.len(),
            extra.len()
        ),
    )
}

fn homfly_identification(table: &KnotTable) -> Line {
    let t = Instant::now();
    let mut wrong = Vec::new();
    let mut ambiguous = Vec::new();
    let mut count = 0;
    for r in table.primary() {
        count += 1;
        let p = homfly(&r.pd).unwrap();
        match table.identify(&p) {
            Identification::Identified(got) if got == r.knot => {}
            Identification::Ambiguous(ks) if ks.contains(&r.knot) => {
                ambiguous.push(format!("{} -> {}", r.knot, Identification::Ambiguous(ks.clone())));
                let partner = ks.iter().find(|x| **x != r.knot).map(|x| x.name.clone()).unwrap_or_default();
                let documented = match r.knot.name.as_str() {
                    "5_1" => partner == "10_132",
                    "8_8" => partner == "10_129",
                    _ => false,
                };
                if ks.len() != 2 || !documented {
                    wrong.push(r.knot.to_string());
                }
            }
            other => wrong.push(format!("{} -> {other}", r.knot)),
        }
    }
    // the lattice pipeline settles the ambiguous lookups
    let mut idf = Identifier::new(table, 0);
    let mut unresolved = Vec::new();
    for name in ["5_1", "5_1*", "8_8", "8_8*", "8_17"] {
        let poly = table.reference_conformation(&k(name)).unwrap();
        let got = idf.identify_polygon(&poly).unwrap().0;
        if got != Identification::Identified(k(name)) {
            unresolved.push(format!("{name} -> {got}"));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(
        "5",
        wrong.is_empty() && ambiguous.len() == 4 && unresolved.is_empty() && secs < 60.0,
        format!(
            "{count} types from PD codes; lookup mismatches {wrong:?}; ambiguous lookups {ambiguous:?}; \
             conformation identification failures {unresolved:?}; {secs:.1} s"
        ),
    )
}

fn sampler_preserves_type(table: &KnotTable) -> Line {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (i, name) in ["3_1", "4_1", "5_1"].into_iter().enumerate() {
        let start = table.reference_conformation(&k(name)).unwrap();
        let mut chain = ChainState::new(start, FugacityParams::new(0.2).unwrap(), 11 + i as u64).unwrap();
        let mut idf = Identifier::new(table, 0);
        for poly in chain.run(100_000, 1000).unwrap() {
            checked += 1;
            let got = idf.identify_polygon(&poly).unwrap().0;
            if got != Identification::Identified(k(name)) {
                bad.push(format!("{name} -> {got} at length {}", poly.len()));
            }
        }
    }
    check("6a", bad.is_empty(), format!("{checked} samples over 10^5 steps from 3_1, 4_1, 5_1; changed types {bad:?}"))
}

fn sampler_length_law() -> Line {
    const FROZEN: [(usize, u64); 6] = [(4, 3), (6, 22), (8, 207), (10, 2412), (12, 31754), (14, 452640)];
    let t = Instant::now();
    let counts = common::polygon_counts(14);
    let enum_secs = t.elapsed().as_secs_f64();
    if counts != FROZEN {
        return check("6b", false, format!("enumeration {counts:?} differs from frozen counts"));
    }
    let z: f64 = 0.18;
    let weights: Vec<f64> = counts.iter().map(|&(n, p)| p as f64 * z.powi(n as i32)).collect();
    let wsum: f64 = weights.iter().sum();
    let expected: Vec<f64> = weights.iter().map(|w| w / wsum).collect();

    // batch means over 100 blocks of the chain, conditioned on length <= 14
    let steps = 1_000_000u64;
    let blocks = 100;
    let mut chain =
        ChainState::new(latband::lattice::LatticePolygon::unit_square(), FugacityParams::new(z).unwrap(), 5).unwrap();
    let mut per_block = vec![[0u64; 6]; blocks];
    for s in 0..steps {
        chain.step();
        let n = chain.len();
        if n <= 14 {
            per_block[(s * blocks as u64 / steps) as usize][(n - 4) / 2] += 1;
        }
    }
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut detail = Vec::new();
    for (c, &(n, _)) in counts.iter().enumerate() {
        let fr: Vec<f64> = per_block
            .iter()
            .map(|b| {
                let tot: u64 = b.iter().sum();
                b[c] as f64 / tot as f64
            })
            .collect();
        let mean = fr.iter().sum::<f64>() / blocks as f64;
        let var = fr.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (blocks as f64 - 1.0);
        let se = (var / blocks as f64).sqrt();
        let dev = (mean - expected[c]).abs() / se;
        worst = worst.max(dev);
        ok &= dev <= 3.0;
        detail.push(format!("n={n}: {mean:.5} vs {:.5}", expected[c]));
    }
    check(
        "6b",
        ok,
        format!(
            "exact p_n for n <= 14 in {enum_secs:.2} s; z = {z}, 10^6 steps; {}; largest deviation {worst:.2} sigma",
            detail.join(", ")
        ),
    )
}

fn reconnection_sites(table: &KnotTable) -> Line {
    let mut polys = Vec::new();
    for (name, z, seed) in [("0_1", 0.205, 1u64), ("3_1", 0.21, 2), ("4_1", 0.21, 3), ("5_1", 0.21, 4)] {
        let start = table.reference_conformation(&k(name)).unwrap();
        let mut chain = ChainState::new(start, FugacityParams::new(z).unwrap(), seed).unwrap();
        polys.extend(chain.run(250 * 200, 200).unwrap());
    }
    let (mut sites, mut noncoherent, mut mismatches, mut class_bad, mut band_bad) = (0, 0, 0, 0, 0);
    for poly in &polys {
        let found = find_sites(poly);
        let got: HashSet<(usize, usize, bool)> = found.iter().map(|s| (s.edge_a, s.edge_b, s.parallel)).collect();
        if got.len() != found.len() || got != common::brute_force_sites(poly) {
            mismatches += 1;
        }
        for s in &found {
            sites += 1;
            let comps = components_after(poly, s).unwrap();
            let want = if comps == 1 { BandKind::NonCoherent } else { BandKind::Coherent };
            if classify(s) != want || comps > 2 {
                class_bad += 1;
            }
            if s.parallel {
                noncoherent += 1;
                let once = apply_band(poly, s).unwrap();
                let twice = apply_band(&once.polygon_after, &once.site).unwrap();
                if !once.polygon_after.validate().valid
                    || once.polygon_after.len() != poly.len()
                    || twice.polygon_after != *poly
                {
                    band_bad += 1;
                }
            }
        }
    }
    check(
        "7",
        mismatches == 0 && class_bad == 0 && band_bad == 0 && polys.len() == 1000,
        format!(
            "{} conformations, {sites} sites ({noncoherent} non-coherent); scan mismatches {mismatches}, \
             classification errors {class_bad}, band involution failures {band_bad}",
            polys.len()
        ),
    )
}

/// Pooled CMC ensemble of `knot` restricted to `lengths`, surveyed at every
/// non-coherent site until `events` identified band moves are collected.
fn transition_tally(table: &KnotTable, knot: &str, lengths: (usize, usize), events: u64, seed: u64) -> TransitionTally {
    let knot = k(knot);
    let start = table.reference_conformation(&knot).unwrap();
    let mut cmc = CmcEnsemble::new(&start, &default_ladder(), 100, seed).unwrap();
    cmc.run(200_000, 200_000, |_, _, _| {}).unwrap();
    let mut sv = Surveyor::new(table, seed);
    let mut tally = TransitionTally::new(knot.clone());
    tally.watch(&table.mirror_of(&knot).unwrap());
    while tally.total_events() < events {
        let mut batch = Vec::new();
        cmc.run(100_000, 1000, |chain, step, st| {
            if (lengths.0..=lengths.1).contains(&st.len()) {
                batch.push(Sample { polygon: st.polygon(), chain, step });
            }
        })
        .unwrap();
        for s in &batch {
            for r in sv.survey_all(&knot, s) {
                tally.push(&r.after, r.length);
            }
        }
    }
    tally
}

fn table_three(table: &KnotTable) -> Vec<Line> {
    let t = Instant::now();
    let rate = |knot: &str, lengths, events| {
        let tally = transition_tally(table, knot, lengths, events, 1);
        let mirror = table.mirror_of(&k(knot)).unwrap();
        let e = estimate_probability(&tally, &mirror, DEFAULT_BLOCKS).unwrap();
        (e, tally.excluded())
    };
    let (p820, x820) = rate("8_20", (70, 2370), 200_000);
    let (p88, x88) = rate("8_8", (100, 2334), 200_000);
    let ratio_ok = p820.p_hat >= 100.0 * p88.p_hat && p820.p_hat > 0.0;
    let target_ok = p820.p_hat >= 4.3e-4 / 3.0 && p820.p_hat <= 4.3e-4 * 3.0;
    let main = check(
        "8",
        ratio_ok && target_ok,
        format!(
            "P(8_20 -> 8_20*) = {:.3e} ({} of {}, {x820} unresolved), P(8_8 -> 8_8*) = {:.3e} ({} of {}, {x88} unresolved); \
             ratio >= 100: {ratio_ok}; within 3x of 4.3e-4: {target_ok}; {:.0} s",
            p820.p_hat,
            p820.observed,
            p820.total,
            p88.p_hat,
            p88.observed,
            p88.total,
            t.elapsed().as_secs_f64()
        ),
    );
    let t = Instant::now();
    let (p51, x51) = rate("5_1", (42, 2016), 1_000_000);
    let seen = p51.observed > 0;
    let five = Line {
        id: "8 (5_1)",
        outcome: if seen { Outcome::Pass } else { Outcome::Inconclusive },
        detail: format!(
            "{} 5_1 -> 5_1* events in {} ({x51} unresolved), P = {:.3e}, expected about 3e-5; {:.0} s",
            p51.observed,
            p51.total,
            p51.p_hat,
            t.elapsed().as_secs_f64()
        ),
    };
    vec![main, five]
}

fn statistics() -> Line {
    let t = TransitionTally::from_counts(k("5_1"), &[(k("5_1*"), 104)], 3_000_000).unwrap();
    let e = estimate_probability(&t, &k("5_1*"), DEFAULT_BLOCKS).unwrap();
    let shown = format!("{:.3}", e.p_hat * 1e5);
    let mut zero = TransitionTally::from_counts(k("8_8"), &[], 3_000_000).unwrap();
    zero.watch(&k("8_8*"));
    let z = estimate_probability(&zero, &k("8_8*"), DEFAULT_BLOCKS).unwrap();
    check(
        "9",
        e.p_hat == 104.0 / 3e6 && shown == "3.467" && e.ci.is_some() && z.ci.is_none() && z.p_hat == 0.0,
        format!("104 / 3e6 gives {shown}e-5 with interval {:?}; zero count interval {:?}", e.ci, z.ci),
    )
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        // cargo test --list probes every test binary
        return ExitCode::SUCCESS;
    }
    let table = KnotTable::bundled().unwrap();
    let mut lines = vec![lens_values(), cosmetic_lens()];
    let gate = murasugi(&table);
    let gate_ok = gate.outcome == Outcome::Pass;
    lines.push(gate);
    lines.push(table_two(&table, gate_ok));
    lines.push(homfly_identification(&table));
    lines.push(sampler_preserves_type(&table));
    lines.push(sampler_length_law());
    lines.push(reconnection_sites(&table));
    lines.extend(table_three(&table));
    lines.push(statistics());

    let mut failed = 0;
    for l in &lines {
        let tag = match l.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => {
                failed += 1;
                "FAIL"
            }
            Outcome::Inconclusive => "INCONCLUSIVE",
        };
        println!("criterion {:<8} {tag:<12} {}", l.id, l.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
