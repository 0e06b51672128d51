use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use trackforge::codec::{parse_pd, parse_pd_strict};
use trackforge::track::{build_diagram, relaxed_build, LabelledInterval, TrackDiagram};
use trackforge::{BraidWord, PlanarDiagram};

/// A parsed input file or inline braid word.
pub enum Input {
    Track(LabelledInterval),
    Pd(PlanarDiagram),
    Braid(BraidWord),
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Tells the three formats apart by their first meaningful line.
pub fn load(
    path: Option<&Path>,
    braid: Option<&str>,
    strands: Option<u32>,
    strict: bool,
) -> Result<Input> {
    let (text, origin) = match (path, braid) {
        (_, Some(word)) => return parse_braid(word, strands).map(Input::Braid),
        (Some(p), None) => (read(p)?, p.display().to_string()),
        (None, None) => bail!("no input: give a file or --braid WORD"),
    };
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.contains('=') {
        let c = text
            .parse::<LabelledInterval>()
            .with_context(|| origin.clone())?;
        Ok(Input::Track(c))
    } else if first.starts_with("PD") || first.starts_with('X') || first.starts_with('[') {
        let d = if strict {
            parse_pd_strict(&text)
        } else {
            parse_pd(&text)
        };
        Ok(Input::Pd(d.with_context(|| origin.clone())?))
    } else {
        parse_braid(first, strands)
            .with_context(|| origin)
            .map(Input::Braid)
    }
}

pub fn parse_braid(word: &str, strands: Option<u32>) -> Result<BraidWord> {
    let w = match strands {
        Some(n) => BraidWord::parse_with_strands(word, n)?,
        None => BraidWord::parse(word)?,
    };
    Ok(w)
}

impl Input {
    pub fn track_diagram(&self, relaxed: bool) -> Result<Option<TrackDiagram>> {
        match self {
            Input::Track(c) if relaxed => Ok(Some(relaxed_build(c)?.0)),
            Input::Track(c) => Ok(Some(build_diagram(c)?)),
            _ => Ok(None),
        }
    }

    pub fn diagram(&self, relaxed: bool) -> Result<PlanarDiagram> {
        Ok(match self {
            Input::Track(_) => self.track_diagram(relaxed)?.expect("track input").diagram,
            Input::Pd(d) => d.clone(),
            Input::Braid(b) => b.closure(),
        })
    }
}
