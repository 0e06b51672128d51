//! Reference knot tables: ingest, persisted stores and identification.
//!
//! Catalog records are `name | dtName | kind:payload | genus | fourGenus | flags`
//! with `kind` either `pd` or `braid`. Unknown numeric fields are written `?`.
//! Flags are comma separated `key=Y|N` pairs for `positive`, `qp`, `sqp` and
//! `fd` (free divide). A store has the same fields plus `homfly:<poly>`.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::braid::BraidWord;
use crate::codec::parse_pd;
use crate::diagram::PlanarDiagram;
use crate::homfly::{morton_report, HomflyEngine, HomflyError, MortonReport};
use crate::par;
use crate::poly::LaurentPoly2;

pub const STORE_HEADER: &str = "# trackforge-store v1";

pub const BUNDLED: &str = include_str!("../data/catalog.txt");
pub const BUNDLED_EXTRA: &str = include_str!("../data/catalog_extra.txt");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {name}: stored HOMFLY {stored} differs from computed {computed}")]
    Mismatch {
        line: usize,
        name: String,
        stored: String,
        computed: String,
    },
    #[error("{name}: {source}")]
    Homfly { name: String, source: HomflyError },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Encoding {
    Pd(String),
    Braid(String),
}

impl Encoding {
    pub fn diagram(&self) -> Result<PlanarDiagram, String> {
        match self {
            Encoding::Pd(t) => parse_pd(t).map_err(|e| e.to_string()),
            Encoding::Braid(t) => BraidWord::parse(t)
                .map(|w| w.closure())
                .map_err(|e| e.to_string()),
        }
    }

    fn text(&self) -> String {
        match self {
            Encoding::Pd(t) => format!("pd:{t}"),
            Encoding::Braid(t) => format!("braid:{t}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub positive: Option<bool>,
    pub quasipositive: Option<bool>,
    pub strongly_quasipositive: Option<bool>,
    pub free_divide: Option<bool>,
}

impl Flags {
    fn parse(text: &str) -> Result<Flags, String> {
        let mut f = Flags::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| format!("flag '{item}' lacks '='"))?;
            let v = match v.trim() {
                "Y" => true,
                "N" => false,
                other => return Err(format!("flag value '{other}' is not Y or N")),
            };
            let slot = match k.trim() {
                "positive" => &mut f.positive,
                "qp" => &mut f.quasipositive,
                "sqp" => &mut f.strongly_quasipositive,
                "fd" => &mut f.free_divide,
                other => return Err(format!("unknown flag '{other}'")),
            };
            *slot = Some(v);
        }
        Ok(f)
    }

    fn text(&self) -> String {
        let yn = |b: bool| if b { "Y" } else { "N" };
        [
            ("positive", self.positive),
            ("qp", self.quasipositive),
            ("sqp", self.strongly_quasipositive),
            ("fd", self.free_divide),
        ]
        .iter()
        .filter_map(|(k, v)| v.map(|b| format!("{k}={}", yn(b))))
        .collect::<Vec<_>>()
        .join(",")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub dt_name: String,
    pub encoding: Encoding,
    pub genus: Option<i32>,
    pub four_genus: Option<i32>,
    pub flags: Flags,
    pub homfly: Option<LaurentPoly2>,
    #[serde(skip)]
    line: usize,
}

fn opt_int(field: &str) -> Result<Option<i32>, String> {
    match field.trim() {
        "" | "?" => Ok(None),
        t => t
            .parse()
            .map(Some)
            .map_err(|_| format!("'{t}' is not an integer")),
    }
}

fn opt_text(v: Option<i32>) -> String {
    v.map_or("?".to_string(), |x| x.to_string())
}

/// Parses catalog or store text. Blank lines and `#` comments are skipped.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let err = |message: String| CatalogError::Parse { line, message };
        let fields: Vec<&str> = t.split('|').map(str::trim).collect();
        if fields.len() != 6 && fields.len() != 7 {
            return Err(err(format!(
                "expected 6 or 7 fields, found {}",
                fields.len()
            )));
        }
        let (kind, payload) = fields[2]
            .split_once(':')
            .ok_or_else(|| err("encoding lacks 'kind:'".into()))?;
        let encoding = match kind.trim() {
            "pd" => Encoding::Pd(payload.trim().to_string()),
            "braid" => Encoding::Braid(payload.trim().to_string()),
            k => return Err(err(format!("unknown encoding kind '{k}'"))),
        };
        encoding
            .diagram()
            .map_err(|m| err(format!("{}: {m}", fields[0])))?;
        let homfly = match fields.get(6) {
            Some(h) => {
                let p = h
                    .strip_prefix("homfly:")
                    .ok_or_else(|| err("seventh field must be 'homfly:'".into()))?;
                Some(
                    p.trim()
                        .parse::<LaurentPoly2>()
                        .map_err(|e| err(e.to_string()))?,
                )
            }
            None => None,
        };
        let genus = opt_int(fields[3]).map_err(err)?;
        let four_genus = opt_int(fields[4]).map_err(err)?;
        if let (Some(g), Some(g4)) = (genus, four_genus) {
            if g4 > g {
                return Err(err(format!("4-genus {g4} exceeds genus {g}")));
            }
        }
        out.push(CatalogEntry {
            name: fields[0].to_string(),
            dt_name: fields[1].to_string(),
            encoding,
            genus,
            four_genus,
            flags: Flags::parse(fields[5]).map_err(err)?,
            homfly,
            line,
        });
    }
    Ok(out)
}

/// Names from the older ten-crossing numbering, which listed the Perko pair
/// twice, that are missing from the current numbering.
pub const LEGACY_NAMES: &[(&str, &str)] = &[("10_166", "10_165")];

pub fn catalog_name(name: &str) -> &str {
    LEGACY_NAMES
        .iter()
        .find(|(old, _)| *old == name)
        .map_or(name, |(_, new)| new)
}

#[derive(Clone, Debug, Default)]
pub struct Store {
    pub entries: Vec<CatalogEntry>,
    index: HashMap<LaurentPoly2, Vec<usize>>,
}

impl Store {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Looks up a name, DT name or legacy name.
    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.name == name || e.dt_name == name)
            .or_else(|| {
                let alias = catalog_name(name);
                (alias != name).then(|| self.get(alias)).flatten()
            })
    }

    pub fn homfly_of(&self, name: &str) -> Option<&LaurentPoly2> {
        self.get(name).and_then(|e| e.homfly.as_ref())
    }

    fn build_index(&mut self) {
        self.index.clear();
        for (i, e) in self.entries.iter().enumerate() {
            if let Some(p) = &e.homfly {
                self.index.entry(p.clone()).or_default().push(i);
            }
        }
    }

    /// Entries whose polynomial equals `p` or its mirror transform, in
    /// catalog order.
    pub fn identify(&self, p: &LaurentPoly2) -> Vec<String> {
        let mut hits: Vec<usize> = self.index.get(p).cloned().unwrap_or_default();
        let m = p.mirror_transform();
        if m != *p {
            hits.extend(self.index.get(&m).cloned().unwrap_or_default());
        }
        hits.sort_unstable();
        hits.dedup();
        hits.into_iter()
            .map(|i| self.entries[i].name.clone())
            .collect()
    }

    /// Groups of entries sharing a polynomial up to mirror image.
    pub fn collisions(&self) -> Vec<Vec<String>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for e in &self.entries {
            if let Some(p) = &e.homfly {
                let names = self.identify(p);
                if names.len() > 1 && seen.insert(names.clone()) {
                    out.push(names);
                }
            }
        }
        out
    }

    /// Store text: header plus one record per entry with its polynomial.
    pub fn persist(&self) -> String {
        let mut s = String::new();
        s.push_str(STORE_HEADER);
        s.push('\n');
        s.push_str("# name | dtName | kind:payload | genus | fourGenus | flags | homfly:poly\n");
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{} | {} | {} | {} | {} | {} | homfly:{}",
                e.name,
                e.dt_name,
                e.encoding.text(),
                opt_text(e.genus),
                opt_text(e.four_genus),
                e.flags.text(),
                e.homfly.as_ref().map(|p| p.to_string()).unwrap_or_default()
            );
        }
        s
    }

    /// Morton report for every entry.
    pub fn morton_reports(&self) -> Vec<(String, MortonReport)> {
        self.entries
            .iter()
            .filter_map(|e| {
                let d = e.encoding.diagram().ok()?;
                Some((e.name.clone(), morton_report(&d, e.homfly.as_ref()?)))
            })
            .collect()
    }
}

/// Parses catalog text and computes every polynomial, in parallel when
/// enabled. A stored polynomial that disagrees aborts the ingest.
pub fn ingest(text: &str, engine: &HomflyEngine) -> Result<Store, CatalogError> {
    let entries = parse_catalog(text)?;
    ingest_entries(entries, engine)
}

pub fn ingest_entries(
    mut entries: Vec<CatalogEntry>,
    engine: &HomflyEngine,
) -> Result<Store, CatalogError> {
    let computed = par::map(&entries, |e| {
        let d = e.encoding.diagram().expect("checked at parse time");
        engine.homfly(&d)
    });
    for (e, p) in entries.iter_mut().zip(computed) {
        let p = p.map_err(|source| CatalogError::Homfly {
            name: e.name.clone(),
            source,
        })?;
        if let Some(stored) = &e.homfly {
            if *stored != p {
                return Err(CatalogError::Mismatch {
                    line: e.line,
                    name: e.name.clone(),
                    stored: stored.to_string(),
                    computed: p.to_string(),
                });
            }
        }
        e.homfly = Some(p);
    }
    let mut store = Store {
        entries,
        index: HashMap::new(),
    };
    store.build_index();
    Ok(store)
}

/// The bundled tables (prime knots up to ten crossings plus the larger knots
/// that the two-point track table needs).
pub fn bundled_text(with_extra: bool) -> String {
    if with_extra {
        format!("{BUNDLED}\n{BUNDLED_EXTRA}")
    } else {
        BUNDLED.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongQpRow {
    pub name: String,
    pub genus: i32,
    pub four_genus: i32,
    pub strongly_quasipositive: bool,
    pub predicted: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StrongQpReport {
    pub rows: Vec<StrongQpRow>,
    pub missing: Vec<String>,
}

impl StrongQpReport {
    pub fn all_consistent(&self) -> bool {
        self.rows.iter().all(|r| r.consistent)
    }
}

/// For quasipositive entries, compares the strong flag with `g* == g`.
pub fn check_strong_quasipositivity(store: &Store) -> StrongQpReport {
    let mut report = StrongQpReport::default();
    for e in &store.entries {
        if e.flags.quasipositive != Some(true) {
            continue;
        }
        match (e.genus, e.four_genus, e.flags.strongly_quasipositive) {
            (Some(g), Some(g4), Some(sqp)) => {
                let predicted = g == g4;
                report.rows.push(StrongQpRow {
                    name: e.name.clone(),
                    genus: g,
                    four_genus: g4,
                    strongly_quasipositive: sqp,
                    predicted,
                    consistent: predicted == sqp,
                });
            }
            _ => report.missing.push(e.name.clone()),
        }
    }
    report
}
