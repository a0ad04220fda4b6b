//! Line-oriented text formats and their JSON variants.
//!
//! Text files: one statement per line, `#` starts a comment, blank lines are
//! ignored. JSON is detected by a leading `{`. Integers are exact; matrix
//! entries are `p` or `p/q`.
//!
//! ```text
//! # fan                    # face structure             # gkm
//! rank 2                   rank 2                       rank 1
//! ray 0: 1 0               dimension 4                  vertex P
//! ray 1: 0 1               face v 0 compact punctured   vertex Q
//! cone: 0 1                facet v e                    edge P Q: 1
//!                          removed: v
//! # complex                raw e
//! vertices 3               col 0 0 1
//! facet 0 1                d 0 0: 1 | -1
//! facet 2
//! ```
//!
//! A complex with no faces is written `void`; the complex whose only face is
//! the empty set is written `empty`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bc::{BcError, FaceClass, FaceInfo, FaceStructure};
use crate::exactla::{CochainComplex, GradedDims, Matrix, Rational};
use crate::fan::{Fan, FanError};
use crate::gkm::{GkmData, GkmEdge, GkmError, GkmGraph};
use crate::simplicial::{SimplicialComplex, SimplicialError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn perr<T>(line: usize, message: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Parse(ParseError {
        line,
        message: message.into(),
    }))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("invalid face structure: {0}")]
    Structure(#[from] BcError),
    #[error("invalid complex: {0}")]
    Complex(#[from] SimplicialError),
    #[error("invalid gkm graph: {0}")]
    Gkm(#[from] GkmError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| {
        IoError::Parse(ParseError {
            line: e.line(),
            message: e.to_string(),
        })
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Meaningful lines as `(line number, keyword, rest)`.
fn statements(text: &str) -> impl Iterator<Item = (usize, &str, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        let split = line
            .find(|c: char| c.is_whitespace() || c == ':')
            .unwrap_or(line.len());
        Some((i + 1, &line[..split], line[split..].trim_start()))
    })
}

/// Splits `head: tail`, requiring the colon.
fn colon(line: usize, rest: &str) -> Result<(&str, &str), IoError> {
    match rest.split_once(':') {
        Some((a, b)) => Ok((a.trim(), b.trim())),
        None => perr(line, "expected ':'"),
    }
}

fn numbers<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>, IoError> {
    s.split_whitespace()
        .map(|t| {
            t.parse()
                .or_else(|_| perr(line, format!("expected an integer, got {t:?}")))
        })
        .collect()
}

fn number<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, IoError> {
    let mut v = numbers::<T>(line, s)?;
    match v.len() {
        1 => Ok(v.pop().unwrap()),
        _ => perr(line, format!("expected one integer, got {s:?}")),
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, what: &str) -> Result<(), IoError> {
    if slot.is_some() {
        return perr(line, format!("duplicate {what}"));
    }
    *slot = Some(value);
    Ok(())
}

// ---------------------------------------------------------------- fans

#[derive(Debug, Serialize, Deserialize)]
struct FanFile {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

pub fn parse_fan(text: &str) -> Result<Fan, IoError> {
    if is_json(text) {
        let f: FanFile = from_json(text)?;
        return Ok(Fan::new(f.rank, f.rays, f.cones)?);
    }
    let mut rank = None;
    let mut rays = Vec::new();
    let mut cones = Vec::new();
    for (line, key, rest) in statements(text) {
        match key {
            "rank" => set_once(&mut rank, number::<usize>(line, rest)?, line, "rank")?,
            "ray" => {
                let (idx, coords) = colon(line, rest)?;
                let idx: usize = number(line, idx)?;
                if idx != rays.len() {
                    return perr(
                        line,
                        format!("ray {idx} out of order, expected ray {}", rays.len()),
                    );
                }
                rays.push(numbers(line, coords)?);
            }
            "cone" => {
                let (head, body) = colon(line, rest)?;
                if !head.is_empty() {
                    return perr(line, "expected 'cone: i1 ... ik'");
                }
                cones.push(numbers(line, body)?);
            }
            other => return perr(line, format!("unknown statement {other:?}")),
        }
    }
    let Some(rank) = rank else {
        return perr(0, "missing 'rank'");
    };
    Ok(Fan::new(rank, rays, cones)?)
}

pub fn write_fan(fan: &Fan, format: Format) -> String {
    if format == Format::Json {
        return to_json(&FanFile {
            rank: fan.rank(),
            rays: fan.rays().to_vec(),
            cones: fan.maximal_cones().to_vec(),
        });
    }
    let mut s = format!("rank {}\n", fan.rank());
    for (i, ray) in fan.rays().iter().enumerate() {
        let _ = writeln!(s, "ray {i}: {}", join(ray));
    }
    for c in fan.maximal_cones() {
        let _ = writeln!(s, "cone: {}", join(c));
    }
    s
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------- complexes

#[derive(Debug, Serialize, Deserialize)]
struct ComplexFile {
    vertices: usize,
    facets: Vec<Vec<usize>>,
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex, IoError> {
    if is_json(text) {
        let f: ComplexFile = from_json(text)?;
        return Ok(SimplicialComplex::new(f.vertices, f.facets)?);
    }
    let mut n = None;
    let mut facets: Vec<Vec<usize>> = Vec::new();
    let mut void = None;
    for (line, key, rest) in statements(text) {
        match key {
            "vertices" => set_once(&mut n, number::<usize>(line, rest)?, line, "vertices")?,
            "facet" => facets.push(numbers(line, rest)?),
            "empty" if rest.is_empty() => facets.push(Vec::new()),
            "void" if rest.is_empty() => set_once(&mut void, line, line, "void")?,
            other => return perr(line, format!("unknown statement {other:?}")),
        }
    }
    let Some(n) = n else {
        return perr(0, "missing 'vertices'");
    };
    match (void, facets.is_empty()) {
        (Some(line), false) => perr(line, "'void' together with faces"),
        (None, true) => perr(0, "no faces; write 'void' for the void complex"),
        _ => Ok(SimplicialComplex::new(n, facets)?),
    }
}

pub fn write_complex(k: &SimplicialComplex, format: Format) -> String {
    if format == Format::Json {
        return to_json(&ComplexFile {
            vertices: k.vertex_count(),
            facets: k.facets().to_vec(),
        });
    }
    let mut s = format!("vertices {}\n", k.vertex_count());
    if k.is_void() {
        s.push_str("void\n");
    }
    for f in k.facets() {
        if f.is_empty() {
            s.push_str("empty\n");
        } else {
            let _ = writeln!(s, "facet {}", join(f));
        }
    }
    s
}

// ---------------------------------------------------- face structures

#[derive(Debug, Serialize, Deserialize)]
struct FaceLine {
    id: String,
    rank: usize,
    compact: bool,
    class: FaceClass,
}

#[derive(Debug, Serialize, Deserialize)]
struct BlockFile {
    position: usize,
    degree: i32,
    rows: Vec<Vec<Rational>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawFile {
    columns: Vec<GradedDims>,
    differentials: Vec<BlockFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StructureFile {
    rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dimension: Option<usize>,
    faces: Vec<FaceLine>,
    covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    removed: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    raw: BTreeMap<String, RawFile>,
}

fn raw_complex(rank: usize, raw: RawFile) -> Result<CochainComplex, String> {
    if raw.columns.len() > rank + 1 {
        return Err(format!(
            "{} columns for a face of rank {rank}",
            raw.columns.len()
        ));
    }
    let mut positions = raw.columns;
    positions.resize(rank + 1, GradedDims::new());
    let mut diffs = vec![BTreeMap::new(); rank];
    for b in raw.differentials {
        if b.position >= rank {
            return Err(format!(
                "differential at position {} past the last column",
                b.position
            ));
        }
        let cols = positions[b.position].get(b.degree);
        if b.rows.iter().any(|r| r.len() != cols) {
            return Err(format!(
                "d {} {}: rows must have {cols} entries",
                b.position, b.degree
            ));
        }
        if diffs[b.position]
            .insert(b.degree, Matrix::from_rows_with_cols(b.rows, cols))
            .is_some()
        {
            return Err(format!(
                "duplicate differential d {} {}",
                b.position, b.degree
            ));
        }
    }
    CochainComplex::new(positions, diffs).map_err(|e| e.to_string())
}

fn build_structure(f: StructureFile) -> Result<FaceStructure, IoError> {
    let class = match f.faces.first() {
        None => {
            return Err(IoError::Parse(ParseError {
                line: 0,
                message: "no faces".into(),
            }))
        }
        Some(x) => x.class,
    };
    if let Some(x) = f.faces.iter().find(|x| x.class != class) {
        return Err(BcError::Raw {
            face: x.id.clone(),
            reason: format!("class {} differs from {class}", x.class),
        }
        .into());
    }
    let index: BTreeMap<&str, usize> = f
        .faces
        .iter()
        .enumerate()
        .map(|(i, x)| (x.id.as_str(), i))
        .collect();
    let lookup = |id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| BcError::UnknownFace(id.to_string()))
    };
    let covers = f
        .covers
        .iter()
        .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
        .collect::<Result<Vec<_>, BcError>>()?;
    let removed = f
        .removed
        .iter()
        .map(|a| lookup(a))
        .collect::<Result<BTreeSet<_>, _>>()?;
    let mut raw = BTreeMap::new();
    for (id, r) in f.raw {
        let i = lookup(&id)?;
        let c = raw_complex(f.faces[i].rank, r).map_err(|reason| BcError::Raw {
            face: id.clone(),
            reason,
        })?;
        raw.insert(i, c);
    }
    let faces = f
        .faces
        .into_iter()
        .map(|x| FaceInfo {
            id: x.id,
            rank: x.rank,
            compact: x.compact,
        })
        .collect();
    Ok(FaceStructure::new(
        f.rank,
        f.dimension,
        class,
        faces,
        covers,
        removed,
        raw,
    )?)
}

fn parse_class(line: usize, s: &str) -> Result<FaceClass, IoError> {
    match s {
        "polytopal" => Ok(FaceClass::Polytopal),
        "punctured" => Ok(FaceClass::Punctured),
        "raw" => Ok(FaceClass::Raw),
        _ => perr(line, format!("unknown face class {s:?}")),
    }
}

fn parse_rows(line: usize, s: &str) -> Result<Vec<Vec<Rational>>, IoError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split('|')
        .map(|row| {
            row.split_whitespace()
                .map(|t| t.parse::<Rational>().or_else(|e| perr(line, e.to_string())))
                .collect()
        })
        .collect()
}

pub fn parse_facestruct(text: &str) -> Result<FaceStructure, IoError> {
    if is_json(text) {
        return build_structure(from_json(text)?);
    }
    let mut file = StructureFile {
        rank: 0,
        dimension: None,
        faces: Vec::new(),
        covers: Vec::new(),
        removed: Vec::new(),
        raw: BTreeMap::new(),
    };
    let (mut rank, mut dimension) = (None, None);
    let mut current: Option<String> = None;
    let mut first_class: Option<(FaceClass, usize)> = None;
    for (line, key, rest) in statements(text) {
        let words: Vec<&str> = rest.split_whitespace().collect();
        match key {
            "rank" => set_once(&mut rank, number::<usize>(line, rest)?, line, "rank")?,
            "dimension" => set_once(
                &mut dimension,
                number::<usize>(line, rest)?,
                line,
                "dimension",
            )?,
            "face" => {
                let [id, r, compact, class] = words.as_slice() else {
                    return perr(line, "expected 'face <id> <rank> <compact|open> <class>'");
                };
                let compact = match *compact {
                    "compact" => true,
                    "open" => false,
                    other => return perr(line, format!("expected compact or open, got {other:?}")),
                };
                let class = parse_class(line, class)?;
                match first_class {
                    None => first_class = Some((class, line)),
                    Some((c, l)) if c != class => {
                        return perr(
                            line,
                            format!("class {class} differs from {c} declared on line {l}"),
                        )
                    }
                    _ => {}
                }
                if file.faces.iter().any(|f| f.id == *id) {
                    return perr(line, format!("duplicate face {id}"));
                }
                file.faces.push(FaceLine {
                    id: id.to_string(),
                    rank: number(line, r)?,
                    compact,
                    class,
                });
            }
            "facet" => {
                let [lo, hi] = words.as_slice() else {
                    return perr(line, "expected 'facet <lower> <upper>'");
                };
                for id in [lo, hi] {
                    if !file.faces.iter().any(|f| f.id == *id) {
                        return perr(line, format!("unknown face {id}"));
                    }
                }
                file.covers.push((lo.to_string(), hi.to_string()));
            }
            "removed" => {
                let (_, ids) = colon(line, rest)?;
                for id in ids.split_whitespace() {
                    if !file.faces.iter().any(|f| f.id == id) {
                        return perr(line, format!("unknown face {id}"));
                    }
                    file.removed.push(id.to_string());
                }
            }
            "raw" => {
                let [id] = words.as_slice() else {
                    return perr(line, "expected 'raw <face>'");
                };
                if !file.faces.iter().any(|f| f.id == *id) {
                    return perr(line, format!("unknown face {id}"));
                }
                if file
                    .raw
                    .insert(
                        id.to_string(),
                        RawFile {
                            columns: Vec::new(),
                            differentials: Vec::new(),
                        },
                    )
                    .is_some()
                {
                    return perr(line, format!("duplicate raw block for {id}"));
                }
                current = Some(id.to_string());
            }
            "col" | "d" => {
                let Some(id) = &current else {
                    return perr(line, format!("'{key}' outside a raw block"));
                };
                let block = file.raw.get_mut(id).unwrap();
                if key == "col" {
                    let [p, q, dim]: [i64; 3] = numbers::<i64>(line, rest)?
                        .try_into()
                        .or_else(|_| perr(line, "expected 'col <position> <degree> <dim>'"))?;
                    if p < 0 || dim < 0 {
                        return perr(line, "position and dimension must be non-negative");
                    }
                    let p = p as usize;
                    if block.columns.len() <= p {
                        block.columns.resize(p + 1, GradedDims::new());
                    }
                    if block.columns[p].get(q as i32) != 0 {
                        return perr(line, format!("duplicate column {p} degree {q}"));
                    }
                    block.columns[p].set(q as i32, dim as usize);
                } else {
                    let (head, body) = colon(line, rest)?;
                    let [p, q]: [i64; 2] = numbers::<i64>(line, head)?
                        .try_into()
                        .or_else(|_| perr(line, "expected 'd <position> <degree>: rows'"))?;
                    if p < 0 {
                        return perr(line, "position must be non-negative");
                    }
                    block.differentials.push(BlockFile {
                        position: p as usize,
                        degree: q as i32,
                        rows: parse_rows(line, body)?,
                    });
                }
            }
            other => return perr(line, format!("unknown statement {other:?}")),
        }
    }
    let Some(rank) = rank else {
        return perr(0, "missing 'rank'");
    };
    file.rank = rank;
    file.dimension = dimension;
    build_structure(file)
}

fn structure_file(s: &FaceStructure) -> StructureFile {
    let id = |i: usize| s.faces()[i].id.clone();
    let raw = (0..s.faces().len())
        .filter_map(|i| s.raw_complex(i).map(|c| (i, c)))
        .map(|(i, c)| {
            let differentials = (0..c.len().saturating_sub(1))
                .flat_map(|p| {
                    c.blocks(p).iter().map(move |(&q, m)| BlockFile {
                        position: p,
                        degree: q,
                        rows: (0..m.rows()).map(|r| m.row(r).to_vec()).collect(),
                    })
                })
                .collect();
            (
                id(i),
                RawFile {
                    columns: c.positions().to_vec(),
                    differentials,
                },
            )
        })
        .collect();
    StructureFile {
        rank: s.rank(),
        dimension: s.dimension(),
        faces: s
            .faces()
            .iter()
            .map(|f| FaceLine {
                id: f.id.clone(),
                rank: f.rank,
                compact: f.compact,
                class: s.class(),
            })
            .collect(),
        covers: s.covers().iter().map(|&(a, b)| (id(a), id(b))).collect(),
        removed: s.removed().iter().map(|&i| id(i)).collect(),
        raw,
    }
}

pub fn write_facestruct(s: &FaceStructure, format: Format) -> String {
    let f = structure_file(s);
    if format == Format::Json {
        return to_json(&f);
    }
    let mut out = format!("rank {}\n", f.rank);
    if let Some(d) = f.dimension {
        let _ = writeln!(out, "dimension {d}");
    }
    for x in &f.faces {
        let _ = writeln!(
            out,
            "face {} {} {} {}",
            x.id,
            x.rank,
            if x.compact { "compact" } else { "open" },
            x.class
        );
    }
    for (a, b) in &f.covers {
        let _ = writeln!(out, "facet {a} {b}");
    }
    if !f.removed.is_empty() {
        let _ = writeln!(out, "removed: {}", f.removed.join(" "));
    }
    for (id, r) in &f.raw {
        let _ = writeln!(out, "raw {id}");
        for (p, g) in r.columns.iter().enumerate() {
            for (q, dim) in g.iter() {
                let _ = writeln!(out, "col {p} {q} {dim}");
            }
        }
        for b in &r.differentials {
            let rows: Vec<String> = b.rows.iter().map(|row| join(row)).collect();
            let _ = writeln!(out, "d {} {}: {}", b.position, b.degree, rows.join(" | "));
        }
    }
    out
}

// ------------------------------------------------------------- gkm

pub fn parse_gkm(text: &str) -> Result<GkmGraph, IoError> {
    let data: GkmData = if is_json(text) {
        from_json(text)?
    } else {
        let mut rank = None;
        let mut data = GkmData {
            rank: 0,
            vertices: Vec::new(),
            edges: Vec::new(),
        };
        for (line, key, rest) in statements(text) {
            match key {
                "rank" => set_once(&mut rank, number::<usize>(line, rest)?, line, "rank")?,
                "vertex" => {
                    let [name] = rest.split_whitespace().collect::<Vec<_>>()[..] else {
                        return perr(line, "expected 'vertex <name>'");
                    };
                    data.vertices.push(name.to_string());
                }
                "edge" => {
                    let (ends, weight) = colon(line, rest)?;
                    let [u, v] = ends.split_whitespace().collect::<Vec<_>>()[..] else {
                        return perr(line, "expected 'edge <u> <v>: w1 ... wr'");
                    };
                    for x in [u, v] {
                        if !data.vertices.iter().any(|y| y == x) {
                            return perr(line, format!("unknown vertex {x}"));
                        }
                    }
                    data.edges
                        .push((u.to_string(), v.to_string(), numbers(line, weight)?));
                }
                other => return perr(line, format!("unknown statement {other:?}")),
            }
        }
        let Some(rank) = rank else {
            return perr(0, "missing 'rank'");
        };
        data.rank = rank;
        data
    };
    let pos = |x: &str| data.vertices.iter().position(|y| y == x);
    let mut edges = Vec::new();
    for (i, (u, v, w)) in data.edges.iter().enumerate() {
        let (Some(u), Some(v)) = (pos(u), pos(v)) else {
            return Err(GkmError::VertexOutOfRange(i).into());
        };
        edges.push(GkmEdge {
            u,
            v,
            weight: w.clone(),
        });
    }
    Ok(GkmGraph::new(data.rank, data.vertices.clone(), edges)?)
}

pub fn write_gkm(g: &GkmGraph, format: Format) -> String {
    let data = GkmData::from(g);
    if format == Format::Json {
        return to_json(&data);
    }
    let mut s = format!("rank {}\n", data.rank);
    for v in &data.vertices {
        let _ = writeln!(s, "vertex {v}");
    }
    for (u, v, w) in &data.edges {
        let _ = writeln!(s, "edge {u} {v}: {}", join(w));
    }
    s
}
