use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use latband::cmc::{geometric_ladder, CmcEnsemble, DEFAULT_CHAINS, DEFAULT_Z_MAX, DEFAULT_Z_MIN};
use latband::invariants::{
    band_obstruction, classification_csv, classification_matrix, self_conjugate_spins, table_classification, LensSpace,
    Status,
};
use latband::knot::{homfly, kauffman, Identification, Identifier, KnotDiagram, KnotTable, KnotType, Nomenclature};
use latband::lattice::{read_polygons, read_samples, read_vertex_loops, validate_vertices, write_samples, Sample};
use latband::reconnection::{read_transitions, reconnect_survey, transitions_csv, SitePolicy};
use latband::stats::{report, report_csv, report_text, TransitionTally};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;
use serde_json::json;

use crate::config::{self, overlay, usage};
use crate::output::{sidecar, write_atomic, Manifest};
use crate::{Command, IdentifyOpts, LensOpts, ObstructOpts, ReconnectOpts, SampleOpts, StatsOpts};

const DEFAULT_STEPS: u64 = 100_000;
const DEFAULT_INTERVAL: u64 = 1000;
const DEFAULT_EXCHANGE: u64 = 100;

pub fn run(cmd: Command, nom: Nomenclature) -> Result<()> {
    let table = KnotTable::bundled()?;
    let names = Names { table: &table, nom };
    match cmd {
        Command::Validate { file } => validate(&file),
        Command::Sample(o) => sample(o, &names),
        Command::Reconnect(o) => reconnect(o, &names),
        Command::Identify(o) => identify(o, &names),
        Command::Obstruct(o) => obstruct(o, &names),
        Command::LensD(o) => lens_d(o),
        Command::Stats(o) => stats(o, &names),
        Command::Table => print_table(&names),
    }
}

/// Knot names as typed and printed, in the chosen nomenclature.
struct Names<'t> {
    table: &'t KnotTable,
    nom: Nomenclature,
}

impl Names<'_> {
    fn parse(&self, s: &str) -> Result<KnotType> {
        let k: KnotType = s.parse().map_err(|_| self.unknown(s))?;
        let chiral = self.table.get(&k.name).ok_or_else(|| self.unknown(s))?.chiral;
        let native = Nomenclature::Native.convert(&k, chiral, self.nom)?;
        self.table.record(&native).map_err(|_| self.unknown(s))?;
        Ok(native)
    }

    fn unknown(&self, s: &str) -> anyhow::Error {
        let valid: Vec<String> = self.table.records().iter().map(|r| self.show(&r.knot)).collect();
        anyhow!("unknown knot `{s}`; valid names: {}", valid.join(" "))
    }

    fn show(&self, k: &KnotType) -> String {
        let chiral = self.table.get(&k.name).is_some_and(|r| r.chiral);
        match self.nom.convert(k, chiral, Nomenclature::Native) {
            Ok(c) => c.to_string(),
            Err(_) => format!("{k}(native)"),
        }
    }

    fn show_id(&self, id: &Identification) -> String {
        match id {
            Identification::Identified(k) => self.show(k),
            Identification::Ambiguous(ks) => {
                format!("ambiguous({})", ks.iter().map(|k| self.show(k)).collect::<Vec<_>>().join("|"))
            }
            Identification::Unknown => "unknown".into(),
        }
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn in_range(n: usize, min: Option<usize>, max: Option<usize>) -> bool {
    min.is_none_or(|m| n >= m) && max.is_none_or(|m| n <= m)
}

fn validate(file: &Path) -> Result<()> {
    let mut out = std::io::stdout().lock();
    let loops = read_vertex_loops(&read_text(file)?).with_context(|| file.display().to_string())?;
    let mut bad = 0;
    for (k, (line, v)) in loops.iter().enumerate() {
        let r = validate_vertices(v);
        if r.valid {
            writeln!(out, "polygon {k} (line {line}): valid, length {}", v.len())?;
        } else {
            bad += 1;
            let what: Vec<String> = r.violations.iter().map(|(rule, i)| format!("{rule:?} at vertex {i}")).collect();
            writeln!(out, "polygon {k} (line {line}): invalid: {}", what.join(", "))?;
        }
    }
    if bad > 0 {
        bail!("{bad} of {} polygons invalid", loops.len());
    }
    Ok(())
}

#[derive(Serialize)]
struct SampleRun {
    knot: String,
    start: Option<PathBuf>,
    z: Vec<f64>,
    steps: u64,
    burn_in: u64,
    interval: u64,
    exchange_interval: u64,
    min_length: Option<usize>,
    max_length: Option<usize>,
    seed: u64,
    output: PathBuf,
}

fn sample(mut o: SampleOpts, names: &Names) -> Result<()> {
    let file: SampleOpts = config::load(o.config.as_deref())?;
    overlay!(o, file; knot, start, z, z_min, z_max, chains, steps, burn_in, interval, exchange_interval,
        min_length, max_length, seed, output, manifest);
    let knot = names.parse(&o.knot.ok_or_else(|| usage("sample needs --knot"))?)?;
    let output = o.output.ok_or_else(|| usage("sample needs --output"))?;
    let z = match o.z {
        Some(z) => z,
        None => geometric_ladder(
            o.z_min.unwrap_or(DEFAULT_Z_MIN),
            o.z_max.unwrap_or(DEFAULT_Z_MAX),
            o.chains.unwrap_or(DEFAULT_CHAINS),
        )?,
    };
    let run = SampleRun {
        knot: knot.to_string(),
        start: o.start,
        z,
        steps: o.steps.unwrap_or(DEFAULT_STEPS),
        burn_in: o.burn_in.unwrap_or(0),
        interval: o.interval.unwrap_or(DEFAULT_INTERVAL),
        exchange_interval: o.exchange_interval.unwrap_or(DEFAULT_EXCHANGE),
        min_length: o.min_length,
        max_length: o.max_length,
        seed: resolve_seed(o.seed),
        output,
    };

    let start = match &run.start {
        Some(p) => read_polygons(&read_text(p)?)
            .with_context(|| p.display().to_string())?
            .into_iter()
            .next()
            .ok_or_else(|| anyhow!("{} holds no polygon", p.display()))?,
        None => names.table.reference_conformation(&knot)?,
    };
    let (id, _) = Identifier::new(names.table, 0).identify_polygon(&start)?;
    if id.knot() != Some(&knot) {
        bail!("knot mismatch: declared {}, start conformation identifies as {}", names.show(&knot), names.show_id(&id));
    }

    let mut cmc = CmcEnsemble::new(&start, &run.z, run.exchange_interval, run.seed)?;
    if run.burn_in > 0 {
        cmc.run(run.burn_in, run.burn_in, |_, _, _| {})?;
    }
    let mut samples = Vec::new();
    cmc.run(run.steps, run.interval, |chain, step, state| {
        if in_range(state.len(), run.min_length, run.max_length) {
            samples.push(Sample { polygon: state.polygon(), chain, step });
        }
    })?;
    write_atomic(&run.output, write_samples(&samples).as_bytes())?;

    let manifest_path = o.manifest.unwrap_or_else(|| sidecar(&run.output, ".manifest.json"));
    let accepted = cmc.exchange_log().iter().filter(|e| e.accepted).count();
    let mut m = Manifest::new("sample", &run);
    m.inputs = run.start.iter().map(|p| p.display().to_string()).collect();
    m.outputs = vec![run.output.display().to_string()];
    m.summary = json!({
        "samples": samples.len(),
        "exchanges_proposed": cmc.exchange_log().len(),
        "exchanges_accepted": accepted,
        "min_sample_length": samples.iter().map(|s| s.polygon.len()).min(),
        "max_sample_length": samples.iter().map(|s| s.polygon.len()).max(),
    });
    m.write(&manifest_path)?;
    eprintln!("wrote {} samples to {}", samples.len(), run.output.display());
    Ok(())
}

#[derive(Serialize)]
struct ReconnectRun {
    knot: String,
    input: Vec<PathBuf>,
    budget: Option<usize>,
    policy: String,
    batch: usize,
    min_length: Option<usize>,
    max_length: Option<usize>,
    seed: u64,
    output: PathBuf,
    unresolved: PathBuf,
}

fn reconnect(mut o: ReconnectOpts, names: &Names) -> Result<()> {
    let file: ReconnectOpts = config::load(o.config.as_deref())?;
    overlay!(o, file; knot, input, budget, policy, batch, min_length, max_length, seed, output, unresolved, manifest);
    let knot = names.parse(&o.knot.ok_or_else(|| usage("reconnect needs --knot"))?)?;
    let input = o.input.filter(|v| !v.is_empty()).ok_or_else(|| usage("reconnect needs --input"))?;
    let output = o.output.ok_or_else(|| usage("reconnect needs --output"))?;
    let policy: SitePolicy = o.policy.as_deref().unwrap_or("per-site").parse().map_err(|e| usage(format!("{e}")))?;
    let run = ReconnectRun {
        knot: knot.to_string(),
        budget: o.budget,
        policy: policy.to_string(),
        batch: o.batch.unwrap_or(latband::reconnection::survey::DEFAULT_BATCH),
        min_length: o.min_length,
        max_length: o.max_length,
        seed: resolve_seed(o.seed),
        unresolved: o.unresolved.unwrap_or_else(|| sidecar(&output, ".unresolved.csv")),
        input,
        output,
    };

    let mut ensemble = Vec::new();
    for p in &run.input {
        let samples = read_samples(&read_text(p)?).with_context(|| p.display().to_string())?;
        ensemble.extend(samples.into_iter().filter(|s| in_range(s.polygon.len(), run.min_length, run.max_length)));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(run.seed);
    let records =
        reconnect_survey(names.table, &knot, &ensemble, run.budget.unwrap_or(usize::MAX), policy, run.seed, &mut rng)?;
    let unresolved: Vec<_> = records.iter().filter(|r| r.after.knot().is_none()).cloned().collect();
    if !unresolved.is_empty() {
        log::info!("{} of {} products not identified uniquely", unresolved.len(), records.len());
    }
    write_atomic(&run.output, transitions_csv(&records).as_bytes())?;
    write_atomic(&run.unresolved, transitions_csv(&unresolved).as_bytes())?;

    let manifest_path = o.manifest.unwrap_or_else(|| sidecar(&run.output, ".manifest.json"));
    let mut m = Manifest::new("reconnect", &run);
    m.inputs = run.input.iter().map(|p| p.display().to_string()).collect();
    m.outputs = vec![run.output.display().to_string(), run.unresolved.display().to_string()];
    m.summary = json!({
        "conformations": ensemble.len(),
        "events": records.len(),
        "unresolved": unresolved.len(),
    });
    m.write(&manifest_path)?;
    eprintln!("wrote {} band moves to {}", records.len(), run.output.display());
    Ok(())
}

fn identify(o: IdentifyOpts, names: &Names) -> Result<()> {
    let mut out = std::io::stdout().lock();
    if let Some(pd) = &o.pd {
        let d = KnotDiagram::from_pd_str(pd)?;
        let p = homfly(&d)?;
        let id = match names.table.identify(&p) {
            Identification::Ambiguous(ks) => names.table.resolve(&ks, &kauffman(&d)?),
            id => id,
        };
        if o.homfly {
            writeln!(out, "{}\t{p}", names.show_id(&id))?;
        } else {
            writeln!(out, "{}", names.show_id(&id))?;
        }
        return Ok(());
    }
    if o.files.is_empty() {
        return Err(usage("identify needs polygon files or --pd"));
    }
    let mut idf = Identifier::new(names.table, o.seed);
    writeln!(out, "file,polygon,length,knot{}", if o.homfly { ",homfly" } else { "" })?;
    for f in &o.files {
        let polys = read_polygons(&read_text(f)?).with_context(|| f.display().to_string())?;
        for (k, poly) in polys.iter().enumerate() {
            let (id, p) = idf.identify_polygon(poly)?;
            let extra = if o.homfly { format!(",{p}") } else { String::new() };
            writeln!(out, "{},{k},{},{}{extra}", f.display(), poly.len(), names.show_id(&id))?;
        }
    }
    Ok(())
}

fn obstruct(o: ObstructOpts, names: &Names) -> Result<()> {
    let mut out = std::io::stdout().lock();
    if o.table {
        let pairs = table_classification(names.table);
        if o.csv {
            write!(out, "{}", classification_csv(&pairs))?;
        } else {
            write!(out, "{}", classification_matrix(names.table, &pairs))?;
        }
        return Ok(());
    }
    let (Some(a), Some(b)) = (o.knot_a, o.knot_b) else {
        return Err(usage("obstruct needs two knot names or --table"));
    };
    let (ka, kb) = (names.parse(&a)?, names.parse(&b)?);
    let v = band_obstruction(names.table.record(&ka)?, names.table.record(&kb)?);
    let status = match v.status {
        Status::Excluded => "excluded",
        Status::NotExcluded => "not excluded",
        Status::Inapplicable => "inapplicable",
    };
    writeln!(out, "{} {}: {status} ({})", names.show(&ka), names.show(&kb), v.reason)?;
    Ok(())
}

fn lens_d(o: LensOpts) -> Result<()> {
    let mut out = std::io::stdout().lock();
    let l = LensSpace::new(o.p, o.q)?;
    let spins: Vec<i64> = match (o.i, o.self_conjugate) {
        (Some(i), _) => {
            if !(0..o.p).contains(&i) {
                bail!("spin^c index {i} outside 0..{}", o.p);
            }
            vec![i]
        }
        (None, true) => self_conjugate_spins(o.p, o.q)?,
        (None, false) => (0..o.p).collect(),
    };
    for i in spins {
        writeln!(out, "d(L({},{}),{i}) = {}", o.p, o.q, l.d(i))?;
    }
    Ok(())
}

fn stats(o: StatsOpts, names: &Names) -> Result<()> {
    let mut out = std::io::stdout().lock();
    let mut records = Vec::new();
    for f in &o.files {
        let rs = read_transitions(std::fs::File::open(f).with_context(|| format!("reading {}", f.display()))?)
            .with_context(|| f.display().to_string())?;
        records.extend(rs);
    }
    let mut tallies = TransitionTally::from_records(&records);
    if !o.no_mirror {
        for t in &mut tallies {
            if let Ok(m) = names.table.mirror_of(&t.start) {
                t.watch(&m);
            }
        }
    }
    let mut rows = report(&tallies, o.blocks)?;
    if let Some(out) = &o.output {
        write_atomic(out, report_csv(&rows).as_bytes())?;
    }
    if o.csv {
        write!(out, "{}", report_csv(&rows))?;
        return Ok(());
    }
    for r in &mut rows {
        // display names only; the CSV keeps native names
        r.start = names.show(&r.start).parse().unwrap_or(r.start.clone());
        r.target = names.show(&r.target).parse().unwrap_or(r.target.clone());
    }
    write!(out, "{}", report_text(&rows))?;
    for t in &tallies {
        if t.excluded() > 0 {
            writeln!(
                out,
                "{}: {} events without a unique identification left out",
                names.show(&t.start),
                t.excluded()
            )?;
        }
    }
    Ok(())
}

fn print_table(names: &Names) -> Result<()> {
    let mut out = std::io::stdout().lock();
    let csv = names.table.to_csv();
    if names.nom == Nomenclature::Native {
        write!(out, "{csv}")?;
        return Ok(());
    }
    let mut lines = csv.lines();
    writeln!(out, "{},{}", lines.next().unwrap_or_default(), names.nom)?;
    for (line, r) in lines.zip(names.table.records()) {
        let other = names.nom.convert(&r.knot, r.chiral, Nomenclature::Native).map(|k| k.to_string());
        writeln!(out, "{line},{}", other.unwrap_or_default())?;
    }
    Ok(())
}
