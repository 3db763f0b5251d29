//! Plain-text file formats.
//!
//! Grid format: optional `#` comment lines, an optional
//! `palette: <char>=<name> ...` header, then one row per line with the top
//! row holding the largest `y`. `.` marks an empty cell.
//!
//! Instance files are a sequence of `poly <name>` blocks, each followed by a
//! grid and a blank line. Layout files hold `place <name> <dx> <dy>` lines.
//! Graph files hold `graph <n>` then `edge <u> <v>` lines. Set-cover files
//! hold `setcover <n> <m>` then `set <j>: e1 e2 ...` lines.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::coloring::{Graph, GraphError};
use crate::geometry::{Cell, ColorId, GeometryError, Offset, Polyomino};
use crate::instance::{Instance, InstanceError, Layout};
use crate::setcover::{SetCoverError, SetCoverInstance};

/// Names of the canonical palette, indexed by [`ColorId`].
pub const CANONICAL_NAMES: [&str; 7] = ["gray", "black", "red", "green", "blue", "purple", "orange"];
/// Display characters of the canonical palette.
pub const CANONICAL_CHARS: [char; 7] = ['g', 'k', 'r', 'G', 'b', 'p', 'o'];

const EMPTY: char = '.';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: unknown color character {ch:?}")]
    UnknownColorChar { line: usize, ch: char },
    #[error("line {line}: unknown color name {name:?}")]
    UnknownColorName { line: usize, name: String },
    #[error("line {line}: bad palette header: {reason}")]
    BadPalette { line: usize, reason: String },
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    SetCover(#[from] SetCoverError),
}

fn syntax(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        reason: reason.into(),
    }
}

/// Resolves a color name to its canonical index. Names outside the canonical
/// palette may be written `color<N>` to address index `N` directly.
pub fn color_by_name(name: &str) -> Option<ColorId> {
    if let Some(i) = CANONICAL_NAMES.iter().position(|n| *n == name) {
        return Some(ColorId(i as u8));
    }
    let idx: u8 = name.strip_prefix("color")?.parse().ok()?;
    (idx < u8::MAX).then_some(ColorId(idx))
}

pub fn color_name(c: ColorId) -> String {
    CANONICAL_NAMES
        .get(c.index())
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("color{}", c.0))
}

/// Ordered mapping from display characters to colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    entries: Vec<(char, String)>,
}

impl Palette {
    pub fn canonical() -> Palette {
        Palette {
            entries: CANONICAL_CHARS
                .iter()
                .zip(CANONICAL_NAMES)
                .map(|(c, n)| (*c, n.to_string()))
                .collect(),
        }
    }

    pub fn new(entries: Vec<(char, String)>) -> Result<Palette, String> {
        if entries.len() > 255 {
            return Err("more than 255 colors".into());
        }
        let mut seen = HashMap::new();
        for (ch, name) in &entries {
            if *ch == EMPTY || ch.is_whitespace() {
                return Err(format!("reserved character {ch:?}"));
            }
            if seen.insert(*ch, name).is_some() {
                return Err(format!("duplicate character {ch:?}"));
            }
        }
        Ok(Palette { entries })
    }

    pub fn entries(&self) -> &[(char, String)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn char_map(&self, line: usize) -> Result<HashMap<char, ColorId>, ParseError> {
        self.entries
            .iter()
            .map(|(ch, name)| {
                color_by_name(name)
                    .map(|c| (*ch, c))
                    .ok_or_else(|| ParseError::UnknownColorName {
                        line,
                        name: name.clone(),
                    })
            })
            .collect()
    }

    fn parse_header(rest: &str, line: usize) -> Result<Palette, ParseError> {
        let mut entries = Vec::new();
        for tok in rest.split_whitespace() {
            let (ch, name) = tok.split_once('=').ok_or_else(|| ParseError::BadPalette {
                line,
                reason: format!("expected <char>=<name>, got {tok:?}"),
            })?;
            let mut chars = ch.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(ParseError::BadPalette {
                    line,
                    reason: format!("{ch:?} is not a single character"),
                });
            };
            entries.push((c, name.to_string()));
        }
        Palette::new(entries).map_err(|reason| ParseError::BadPalette { line, reason })
    }

    fn header(&self) -> String {
        let mut s = String::from("palette:");
        for (ch, name) in &self.entries {
            let _ = write!(s, " {ch}={name}");
        }
        s
    }
}

impl Default for Palette {
    fn default() -> Self {
        Palette::canonical()
    }
}

/// Parses a polyomino from the grid format.
pub fn parse_polyomino(text: &str) -> Result<Polyomino, ParseError> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    parse_grid_lines(&lines)
}

fn parse_grid_lines(lines: &[(usize, &str)]) -> Result<Polyomino, ParseError> {
    let mut palette = Palette::canonical();
    let mut header_line = 0;
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for &(no, raw) in lines {
        let line = raw.trim_end();
        if rows.is_empty() {
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("palette:") {
                palette = Palette::parse_header(rest, no)?;
                header_line = no;
                continue;
            }
        }
        rows.push((no, line));
    }
    while rows.last().is_some_and(|(_, l)| l.is_empty()) {
        rows.pop();
    }
    let map = palette.char_map(header_line)?;
    let height = rows.len() as i32;
    let mut cells = Vec::new();
    for (r, (no, row)) in rows.iter().enumerate() {
        let y = height - 1 - r as i32;
        for (x, ch) in row.chars().enumerate() {
            if ch == EMPTY {
                continue;
            }
            let color = *map.get(&ch).ok_or(ParseError::UnknownColorChar { line: *no, ch })?;
            cells.push((Cell::new(x as i32, y), color));
        }
    }
    Ok(Polyomino::from_cells(cells)?)
}

fn extra_char(i: usize) -> char {
    const POOL: &str = "0123456789acdefhijlmnqstuvwxyzABCDEFHIJKLMNOPQRSTUVWXYZ";
    POOL.chars()
        .nth(i)
        .unwrap_or_else(|| char::from_u32(0x100 + i as u32).expect("valid scalar"))
}

/// Emits the grid format. Uses the default palette when every color fits in
/// it, otherwise writes a `palette:` header.
pub fn emit_polyomino(p: &Polyomino) -> String {
    let colors = p.colors();
    let canonical = colors.iter().all(|c| c.index() < CANONICAL_CHARS.len());
    let mut chars: HashMap<ColorId, char> = HashMap::new();
    let mut out = String::new();
    if canonical {
        for c in &colors {
            chars.insert(*c, CANONICAL_CHARS[c.index()]);
        }
    } else {
        let mut entries = Vec::new();
        let mut extra = 0;
        for c in &colors {
            let ch = if c.index() < CANONICAL_CHARS.len() {
                CANONICAL_CHARS[c.index()]
            } else {
                extra += 1;
                extra_char(extra - 1)
            };
            chars.insert(*c, ch);
            entries.push((ch, color_name(*c)));
        }
        let palette = Palette::new(entries).expect("generated palette is valid");
        out.push_str(&palette.header());
        out.push('\n');
    }
    for y in (0..p.height()).rev() {
        for x in 0..p.width() {
            out.push(p.color_at(Cell::new(x, y)).map_or(EMPTY, |c| chars[&c]));
        }
        out.push('\n');
    }
    out
}

/// Where an instance came from; carried as a `# reduction:` header comment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Coloring { graph: Graph, two_color: bool },
    SetCover(SetCoverInstance),
}

impl Provenance {
    pub fn header(&self) -> String {
        match self {
            Provenance::Coloring { graph, two_color } => {
                let edges: Vec<String> = graph.edges().map(|(u, v)| format!("{u}-{v}")).collect();
                format!(
                    "# reduction: coloring |V|={}{} edges={}",
                    graph.vertex_count(),
                    if *two_color { " two-color" } else { "" },
                    edges.join(",")
                )
            }
            Provenance::SetCover(sc) => {
                let sets: Vec<String> = sc
                    .sets()
                    .iter()
                    .map(|s| s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
                    .collect();
                format!(
                    "# reduction: setcover n={} m={} sets={}",
                    sc.universe_size(),
                    sc.set_count(),
                    sets.join(";")
                )
            }
        }
    }

    /// Parses one `# reduction:` comment line; returns `None` for other lines.
    pub fn parse_header(line: &str, no: usize) -> Option<Result<Provenance, ParseError>> {
        let rest = line.trim().strip_prefix('#')?.trim().strip_prefix("reduction:")?;
        Some(parse_provenance(rest.trim(), no))
    }
}

fn parse_provenance(rest: &str, no: usize) -> Result<Provenance, ParseError> {
    let mut toks = rest.split_whitespace();
    let kind = toks.next().ok_or_else(|| syntax(no, "empty reduction header"))?;
    let mut fields = HashMap::new();
    let mut two_color = false;
    for t in toks {
        match t.split_once('=') {
            Some((k, v)) => {
                fields.insert(k, v);
            }
            None if t == "two-color" => two_color = true,
            None => return Err(syntax(no, format!("unexpected token {t:?}"))),
        }
    }
    let num = |k: &str| -> Result<usize, ParseError> {
        fields
            .get(k)
            .ok_or_else(|| syntax(no, format!("missing {k}")))?
            .parse()
            .map_err(|_| syntax(no, format!("bad {k}")))
    };
    match kind {
        "coloring" => {
            let n = num("|V|")?;
            let mut edges = Vec::new();
            for e in fields
                .get("edges")
                .copied()
                .unwrap_or("")
                .split(',')
                .filter(|s| !s.is_empty())
            {
                let (u, v) = e.split_once('-').ok_or_else(|| syntax(no, format!("bad edge {e:?}")))?;
                let u = u.parse().map_err(|_| syntax(no, format!("bad edge {e:?}")))?;
                let v = v.parse().map_err(|_| syntax(no, format!("bad edge {e:?}")))?;
                edges.push((u, v));
            }
            Ok(Provenance::Coloring {
                graph: Graph::new(n, edges)?,
                two_color,
            })
        }
        "setcover" => {
            let n = num("n")?;
            let m = num("m")?;
            let mut sets = Vec::new();
            for s in fields.get("sets").copied().unwrap_or("").split(';') {
                let elems = s
                    .split(',')
                    .filter(|e| !e.is_empty())
                    .map(|e| e.parse().map_err(|_| syntax(no, format!("bad element {e:?}"))))
                    .collect::<Result<Vec<usize>, _>>()?;
                sets.push(elems);
            }
            if sets.len() != m {
                return Err(syntax(no, format!("expected {m} sets, found {}", sets.len())));
            }
            Ok(Provenance::SetCover(SetCoverInstance::new(n, sets)?))
        }
        other => Err(syntax(no, format!("unknown reduction {other:?}"))),
    }
}

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub provenance: Option<Provenance>,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut provenance = None;
    let mut pieces = Vec::new();
    let mut current: Option<(String, Vec<(usize, &str)>)> = None;

    fn flush(
        current: &mut Option<(String, Vec<(usize, &str)>)>,
        pieces: &mut Vec<(String, Polyomino)>,
    ) -> Result<(), ParseError> {
        if let Some((name, lines)) = current.take() {
            pieces.push((name, parse_grid_lines(&lines)?));
        }
        Ok(())
    }

    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.trim_end();
        if let Some(name) = line.strip_prefix("poly ") {
            flush(&mut current, &mut pieces)?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(syntax(no, "piece name must be one nonempty token"));
            }
            current = Some((name.to_string(), Vec::new()));
            continue;
        }
        match current.as_mut() {
            Some((_, lines)) => {
                if line.is_empty() {
                    flush(&mut current, &mut pieces)?;
                } else {
                    lines.push((no, line));
                }
            }
            None => {
                if line.is_empty() {
                    continue;
                }
                if let Some(p) = Provenance::parse_header(line, no) {
                    provenance = Some(p?);
                } else if !line.starts_with('#') {
                    return Err(syntax(no, "expected `poly <name>`"));
                }
            }
        }
    }
    flush(&mut current, &mut pieces)?;
    Ok(InstanceFile {
        instance: Instance::new(pieces)?,
        provenance,
    })
}

pub fn emit_instance(inst: &Instance, provenance: Option<&Provenance>) -> String {
    let mut out = String::new();
    if let Some(p) = provenance {
        out.push_str(&p.header());
        out.push('\n');
    }
    for (name, p) in inst.pieces() {
        let _ = writeln!(out, "poly {name}");
        out.push_str(&emit_polyomino(p));
        out.push('\n');
    }
    out
}

pub fn emit_layout(inst: &Instance, layout: &Layout) -> String {
    inst.pieces()
        .iter()
        .zip(layout.offsets())
        .map(|((name, _), o)| format!("place {name} {} {}\n", o.dx, o.dy))
        .collect()
}

/// Parses a layout; names must match the instance order.
pub fn parse_layout(text: &str, inst: &Instance) -> Result<Layout, ParseError> {
    let mut offsets = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let ["place", name, dx, dy] = toks[..] else {
            return Err(syntax(no, "expected `place <name> <dx> <dy>`"));
        };
        let idx = offsets.len();
        match inst.pieces().get(idx) {
            Some((expected, _)) if expected == name => {}
            Some((expected, _)) => return Err(syntax(no, format!("expected piece {expected:?}, found {name:?}"))),
            None => return Err(syntax(no, "more placements than pieces")),
        }
        let dx = dx.parse().map_err(|_| syntax(no, "bad dx"))?;
        let dy = dy.parse().map_err(|_| syntax(no, "bad dy"))?;
        offsets.push(Offset::new(dx, dy));
    }
    if offsets.len() != inst.len() {
        return Err(syntax(
            text.lines().count(),
            format!("expected {} placements, found {}", inst.len(), offsets.len()),
        ));
    }
    Ok(Layout::new(offsets))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (no, first) = lines.next().ok_or_else(|| syntax(1, "missing `graph <n>`"))?;
    let n = match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["graph", n] => n.parse().map_err(|_| syntax(no, "bad vertex count"))?,
        _ => return Err(syntax(no, "expected `graph <n>`")),
    };
    let mut edges = Vec::new();
    for (no, line) in lines {
        match line.split_whitespace().collect::<Vec<_>>()[..] {
            ["edge", u, v] => {
                let u = u.parse().map_err(|_| syntax(no, "bad vertex"))?;
                let v = v.parse().map_err(|_| syntax(no, "bad vertex"))?;
                edges.push((u, v));
            }
            _ => return Err(syntax(no, "expected `edge <u> <v>`")),
        }
    }
    Ok(Graph::new(n, edges)?)
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    out
}

pub fn parse_setcover(text: &str) -> Result<SetCoverInstance, ParseError> {
    let mut lines = content_lines(text);
    let (no, first) = lines.next().ok_or_else(|| syntax(1, "missing `setcover <n> <m>`"))?;
    let (n, m): (usize, usize) = match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["setcover", n, m] => (
            n.parse().map_err(|_| syntax(no, "bad n"))?,
            m.parse().map_err(|_| syntax(no, "bad m"))?,
        ),
        _ => return Err(syntax(no, "expected `setcover <n> <m>`")),
    };
    let mut sets = Vec::new();
    for (no, line) in lines {
        let rest = line
            .strip_prefix("set ")
            .ok_or_else(|| syntax(no, "expected `set <j>: ...`"))?;
        let (j, elems) = rest
            .split_once(':')
            .ok_or_else(|| syntax(no, "missing `:` after set index"))?;
        let j: usize = j.trim().parse().map_err(|_| syntax(no, "bad set index"))?;
        if j != sets.len() + 1 {
            return Err(syntax(no, format!("expected set {}, found {j}", sets.len() + 1)));
        }
        let elems = elems
            .split_whitespace()
            .map(|e| e.parse().map_err(|_| syntax(no, format!("bad element {e:?}"))))
            .collect::<Result<Vec<usize>, _>>()?;
        sets.push(elems);
    }
    if sets.len() != m {
        return Err(syntax(no, format!("header says {m} sets, found {}", sets.len())));
    }
    Ok(SetCoverInstance::new(n, sets)?)
}

pub fn emit_setcover(sc: &SetCoverInstance) -> String {
    let mut out = format!("setcover {} {}\n", sc.universe_size(), sc.set_count());
    for (j, s) in sc.sets().iter().enumerate() {
        let elems: Vec<String> = s.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "set {}: {}", j + 1, elems.join(" "));
    }
    out
}
