//! `trackforge` command line.

mod input;
mod render;

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use trackforge::catalog::{bundled_text, check_strong_quasipositivity, ingest, Store};
use trackforge::cert::{check_pairing, find_certificate_with_cap, track_certificate, Pairing};
use trackforge::codec::emit_pd;
use trackforge::homfly::morton_report;
use trackforge::par;
use trackforge::seifert::seifert_circle_count;
use trackforge::track::{bounds, build_diagram, enumerate_labellings, LabelledInterval};
use trackforge::yamada::{qp_diagram_to_braid, yamada_braid_with_cap};
use trackforge::{HomflyEngine, LaurentPoly2, QPWord};

use input::Input;

#[derive(Parser)]
#[command(
    name = "trackforge",
    version,
    about = "Track knots, HOMFLY polynomials, braids and quasipositivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Crossing cap for HOMFLY, certificate search and braiding
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    cap: Option<u32>,
    /// Worker threads for batch work (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Stricter parsing and checks
    #[arg(long, global = true)]
    strict: bool,
    /// Catalog or store file; the bundled tables are used otherwise
    #[arg(long, global = true, env = "TRACKFORGE_CATALOG")]
    catalog: Option<PathBuf>,
    /// Strand count for braid words
    #[arg(long, global = true)]
    strands: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
    Svg,
}

/// A diagram given as a track file, a PD code file, a braid word file or
/// an inline braid word.
#[derive(Args)]
struct Source {
    file: Option<PathBuf>,
    #[arg(long, conflicts_with = "file")]
    braid: Option<String>,
    /// Build track files without the cycle check
    #[arg(long)]
    relaxed: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check a labelled interval
    Validate {
        file: PathBuf,
    },
    /// Build the diagram of a labelled interval
    Build {
        file: PathBuf,
        #[arg(long)]
        relaxed: bool,
    },
    /// 4-genus, clasp number and related bounds of a labelled interval
    Bounds {
        file: PathBuf,
    },
    Homfly(Source),
    /// Morton's bounds on the v-degree of the HOMFLY polynomial
    Morton(Source),
    /// Quasipositivity certificate of a diagram
    Certify(Source),
    /// Braid form of a diagram
    Braid {
        #[command(flatten)]
        source: Source,
        /// Certificate file; the braid is then written as a band product
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Band decomposition of a quasipositive braid word
    QpParse {
        word: String,
    },
    /// Every labelling of a shape through build, HOMFLY, identify and bounds
    Enumerate {
        #[arg(long)]
        shape: PathBuf,
    },
    /// Catalog names for a polynomial or diagram
    Identify {
        #[command(flatten)]
        source: Source,
        #[arg(long, conflicts_with_all = ["file", "braid"])]
        poly: Option<String>,
    },
    /// Ingest a catalog file and write the store
    CatalogIngest {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Strong quasipositivity against 4-genus and genus
    CheckProp1,
    /// SVG of an interval, track diagram or braid
    Render {
        #[command(flatten)]
        source: Source,
        /// Draw the band and crossings of a track diagram
        #[arg(long)]
        diagram: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

struct Ctx {
    opts: Opts,
    out: io::StdoutLock<'static>,
}

impl Ctx {
    fn engine(&self) -> HomflyEngine {
        match self.opts.cap {
            Some(c) => HomflyEngine::new().with_cap(c as usize),
            None => HomflyEngine::new(),
        }
    }

    fn cap_or(&self, default: usize) -> usize {
        self.opts.cap.map_or(default, |c| c as usize)
    }

    fn store(&self, engine: &HomflyEngine) -> Result<Store> {
        let text = match &self.opts.catalog {
            Some(p) => input::read(p)?,
            None => bundled_text(true),
        };
        Ok(ingest(&text, engine)?)
    }

    fn load(&self, s: &Source) -> Result<Input> {
        input::load(
            s.file.as_deref(),
            s.braid.as_deref(),
            self.opts.strands,
            self.opts.strict,
        )
    }

    fn records(&self) -> bool {
        self.opts.format == Format::Records
    }

    fn emit(&mut self, text: impl AsRef<str>, record: serde_json::Value) -> Result<()> {
        if self.records() {
            writeln!(self.out, "{record}")?;
        } else {
            writeln!(self.out, "{}", text.as_ref())?;
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let opts = cli.opts;
    if opts.format == Format::Svg && !matches!(cli.command, Command::Render { .. }) {
        eprintln!("error: --format svg is only available for render");
        return Ok(ExitCode::from(2));
    }
    let workers = opts.workers;
    let command = cli.command;
    with_workers(workers, move || {
        let mut cx = Ctx {
            opts,
            out: io::stdout().lock(),
        };
        dispatch(&mut cx, command)
    })?
}

#[cfg(feature = "parallel")]
fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn with_workers<T>(_: usize, f: impl FnOnce() -> T) -> Result<T> {
    Ok(f())
}

fn dispatch(cx: &mut Ctx, command: Command) -> Result<ExitCode> {
    match command {
        Command::Validate { file } => validate(cx, &file),
        Command::Build { file, relaxed } => build(cx, &file, relaxed),
        Command::Bounds { file } => bounds_cmd(cx, &file),
        Command::Homfly(s) => homfly_cmd(cx, &s),
        Command::Morton(s) => morton_cmd(cx, &s),
        Command::Certify(s) => certify(cx, &s),
        Command::Braid { source, cert } => braid_cmd(cx, &source, cert.as_deref()),
        Command::QpParse { word } => qp_parse(cx, &word),
        Command::Enumerate { shape } => enumerate(cx, &shape),
        Command::Identify { source, poly } => identify(cx, &source, poly.as_deref()),
        Command::CatalogIngest { file, output } => catalog_ingest(cx, &file, output.as_deref()),
        Command::CheckProp1 => check_prop1(cx),
        Command::Render {
            source,
            diagram,
            output,
        } => render_cmd(cx, &source, diagram, output.as_deref()),
    }
}

fn load_track(path: &Path) -> Result<LabelledInterval> {
    input::read(path)?
        .parse()
        .with_context(|| path.display().to_string())
}

fn validate(cx: &mut Ctx, file: &Path) -> Result<ExitCode> {
    let c = load_track(file)?;
    let d = c.validate();
    let violations: Vec<String> = d.violations.iter().map(|v| v.to_string()).collect();
    let text = if d.is_ok() {
        format!(
            "ok: {} steps, {} double points, {} marks",
            c.path.len(),
            c.skeleton().double_points.len(),
            c.marks.len()
        )
    } else {
        violations
            .iter()
            .map(|v| format!("violation: {v}"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    cx.emit(
        text,
        json!({ "file": file.display().to_string(), "ok": d.is_ok(), "violations": violations }),
    )?;
    Ok(if d.is_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn build(cx: &mut Ctx, file: &Path, relaxed: bool) -> Result<ExitCode> {
    let input = Input::Track(load_track(file)?);
    let t = input.track_diagram(relaxed)?.expect("track input");
    let d = &t.diagram;
    let pd = emit_pd(d);
    let s = seifert_circle_count(d);
    cx.emit(
        format!("crossings: {}\nwrithe: {}\nseifert circles: {s}\n{pd}", d.crossing_count(), d.writhe()),
        json!({ "crossings": d.crossing_count(), "writhe": d.writhe(), "seifert_circles": s, "pd": pd }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn bounds_cmd(cx: &mut Ctx, file: &Path) -> Result<ExitCode> {
    let c = load_track(file)?;
    let b = bounds(&c)?;
    let opt = |v: Option<i32>| v.map_or("unknown".to_string(), |x| x.to_string());
    let text = format!(
        "types a/b/c/d: {}/{}/{}/{}\nmarks: {}\nfour genus: {}\nclasp number: {}\nunknotting number: {}\ngenus: {}\nslice-Bennequin bound: {}",
        b.a,
        b.b,
        b.c,
        b.d,
        b.r,
        b.four_genus,
        b.four_genus,
        opt(b.gordian),
        opt(b.ordinary_genus),
        b.slice_bennequin_bound
    );
    cx.emit(text, serde_json::to_value(&b)?)?;
    Ok(ExitCode::SUCCESS)
}

fn homfly_cmd(cx: &mut Ctx, s: &Source) -> Result<ExitCode> {
    let d = cx.load(s)?.diagram(s.relaxed)?;
    let p = cx.engine().homfly(&d)?;
    cx.emit(
        p.to_string(),
        json!({ "homfly": p.to_string(), "crossings": d.crossing_count() }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn morton_cmd(cx: &mut Ctx, s: &Source) -> Result<ExitCode> {
    let d = cx.load(s)?.diagram(s.relaxed)?;
    let p = cx.engine().homfly(&d)?;
    let r = morton_report(&d, &p);
    let text = format!(
        "writhe {}, seifert circles {}\n{} <= e = {} <= E = {} <= {}: {}",
        r.writhe,
        r.seifert_circles,
        r.lower,
        r.e,
        r.big_e,
        r.upper,
        if r.pass { "holds" } else { "VIOLATED" }
    );
    cx.emit(text, serde_json::to_value(&r)?)?;
    Ok(if r.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn certificate(cx: &Ctx, input: &Input, relaxed: bool) -> Result<Option<Pairing>> {
    if let Input::Track(_) = input {
        if !relaxed {
            let t = input.track_diagram(false)?.expect("track input");
            return Ok(Some(track_certificate(&t)?));
        }
    }
    let d = input.diagram(relaxed)?;
    Ok(find_certificate_with_cap(
        &d,
        cx.cap_or(trackforge::cert::DEFAULT_CERT_CAP),
    )?)
}

fn certify(cx: &mut Ctx, s: &Source) -> Result<ExitCode> {
    let input = cx.load(s)?;
    match certificate(cx, &input, s.relaxed)? {
        Some(p) => {
            check_pairing(&input.diagram(s.relaxed)?, &p)
                .map_err(|v| anyhow!("certificate rejected: {v}"))?;
            cx.emit(
                p.to_string(),
                json!({ "certificate": true, "singles": p.singles, "pairs": p.pairs }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            cx.emit(
                "no certificate: the diagram is not quasipositive",
                json!({ "certificate": false }),
            )?;
            Ok(ExitCode::from(1))
        }
    }
}

fn braid_cmd(cx: &mut Ctx, s: &Source, cert: Option<&Path>) -> Result<ExitCode> {
    let input = cx.load(s)?;
    let d = input.diagram(s.relaxed)?;
    let cap = cx.cap_or(trackforge::yamada::DEFAULT_BRAID_CAP);
    match cert {
        None => {
            let b = yamada_braid_with_cap(&d, cap)?;
            cx.emit(
                format!("{b}\nstrands: {}", b.strands),
                json!({ "word": b.to_string(), "strands": b.strands, "writhe": b.writhe() }),
            )?;
        }
        Some(path) => {
            let p: Pairing = input::read(path)?.trim().parse()?;
            let engine = cx.engine();
            let q = qp_diagram_to_braid(&d, &p, &engine)?;
            cx.emit(
                format!("{}\nstrands: {}\nbands: {}", q.bands_text(), q.word.strands, q.band_count()),
                json!({ "bands": q.bands_text(), "strands": q.word.strands, "band_count": q.band_count() }),
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn qp_parse(cx: &mut Ctx, word: &str) -> Result<ExitCode> {
    let q = match cx.opts.strands {
        Some(n) => QPWord::parse_with_strands(word, n)?,
        None => QPWord::parse(word)?,
    };
    let genus = q.qp_genus().ok();
    let g = genus.map_or("n/a (not a knot)".to_string(), |g| g.to_string());
    cx.emit(
        format!("bands: {}\nband count: {}\nstrands: {}\nfour genus: {g}", q.bands_text(), q.band_count(), q.word.strands),
        json!({ "bands": q.bands_text(), "band_count": q.band_count(), "strands": q.word.strands, "four_genus": genus }),
    )?;
    Ok(ExitCode::SUCCESS)
}

struct Row {
    labels: String,
    crossings: usize,
    writhe: i32,
    four_genus: i32,
    homfly: LaurentPoly2,
    names: Vec<String>,
}

fn enumerate(cx: &mut Ctx, shape: &Path) -> Result<ExitCode> {
    let base = load_track(shape)?;
    let all: Vec<LabelledInterval> = enumerate_labellings(&base.path, &base.marks)?.collect();
    let engine = cx.engine();
    let store = cx.store(&engine)?;
    let results = par::map(&all, |l| -> Result<Row> {
        let t = build_diagram(l)?;
        let homfly = engine.homfly(&t.diagram)?;
        Ok(Row {
            labels: l
                .labels
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            crossings: t.diagram.crossing_count(),
            writhe: t.diagram.writhe(),
            four_genus: bounds(l)?.four_genus,
            names: store.identify(&homfly),
            homfly,
        })
    });
    let mut rows = results.into_iter().collect::<Result<Vec<Row>>>()?;
    rows.sort_by(|a, b| a.labels.cmp(&b.labels));
    let one = LaurentPoly2::one();
    let mut classes = BTreeSet::new();
    let mut unknown = 0;
    if !cx.records() {
        writeln!(
            cx.out,
            "{:<10} {:>4} {:>4} {:>3}  {:<20} homfly",
            "labels", "x", "w", "g*", "knot"
        )?;
    }
    for r in &rows {
        let knot = if r.homfly == one {
            "unknot".to_string()
        } else if r.names.is_empty() {
            unknown += 1;
            "?".to_string()
        } else {
            classes.insert(r.names.clone());
            r.names.join("/")
        };
        cx.emit(
            format!(
                "{:<10} {:>4} {:>4} {:>3}  {:<20} {}",
                r.labels, r.crossings, r.writhe, r.four_genus, knot, r.homfly
            ),
            json!({
                "labels": r.labels, "crossings": r.crossings, "writhe": r.writhe,
                "four_genus": r.four_genus, "names": r.names, "homfly": r.homfly.to_string(),
            }),
        )?;
    }
    let summary = format!(
        "{} labellings, {} distinct knots identified, {unknown} nontrivial unidentified",
        rows.len(),
        classes.len()
    );
    if cx.records() {
        cx.emit("", json!({ "labellings": rows.len(), "distinct_knots": classes.len(), "unidentified": unknown }))?;
    } else {
        writeln!(cx.out, "{summary}")?;
    }
    Ok(if cx.opts.strict && unknown > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn identify(cx: &mut Ctx, s: &Source, poly: Option<&str>) -> Result<ExitCode> {
    let engine = cx.engine();
    let p: LaurentPoly2 = match poly {
        Some(text) => text.parse().map_err(|e| anyhow!("bad polynomial: {e}"))?,
        None => engine.homfly(&cx.load(s)?.diagram(s.relaxed)?)?,
    };
    let names = cx.store(&engine)?.identify(&p);
    let text = if names.is_empty() {
        "not in catalog".to_string()
    } else {
        names.join(" ")
    };
    cx.emit(text, json!({ "homfly": p.to_string(), "names": names }))?;
    Ok(if names.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn catalog_ingest(cx: &mut Ctx, file: &Path, output: Option<&Path>) -> Result<ExitCode> {
    let store =
        ingest(&input::read(file)?, &cx.engine()).with_context(|| file.display().to_string())?;
    let text = store.persist();
    match output {
        Some(p) => {
            std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            let collisions = store.collisions();
            cx.emit(
                format!(
                    "{} entries, {} HOMFLY collision groups",
                    store.len(),
                    collisions.len()
                ),
                json!({ "entries": store.len(), "collisions": collisions }),
            )?;
        }
        None => write!(cx.out, "{text}")?,
    }
    Ok(ExitCode::SUCCESS)
}

fn check_prop1(cx: &mut Ctx) -> Result<ExitCode> {
    let store = cx.store(&cx.engine())?;
    let r = check_strong_quasipositivity(&store);
    for row in &r.rows {
        cx.emit(
            format!(
                "{:<8} g = {} g* = {}  strongly qp: {}  predicted: {}  {}",
                row.name,
                row.genus,
                row.four_genus,
                row.strongly_quasipositive,
                row.predicted,
                if row.consistent { "ok" } else { "INCONSISTENT" }
            ),
            serde_json::to_value(row)?,
        )?;
    }
    for name in &r.missing {
        cx.emit(
            format!("{name:<8} missing data"),
            json!({ "name": name, "missing": true }),
        )?;
    }
    Ok(if r.all_consistent() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn render_cmd(cx: &mut Ctx, s: &Source, diagram: bool, output: Option<&Path>) -> Result<ExitCode> {
    let input = cx.load(s)?;
    let svg = match &input {
        Input::Track(c) => {
            let t = input.track_diagram(s.relaxed).ok().flatten();
            if diagram && t.is_none() {
                bail!("interval is not valid; use --relaxed to draw its diagram");
            }
            render::interval(c, t.as_ref(), diagram)
        }
        Input::Braid(b) => render::braid(b),
        Input::Pd(_) => bail!("PD codes carry no geometry; render a track file or a braid word"),
    };
    match output {
        Some(p) => std::fs::write(p, svg).with_context(|| format!("writing {}", p.display()))?,
        None => write!(cx.out, "{svg}")?,
    }
    Ok(ExitCode::SUCCESS)
}
