//! Text formats: model files, graph files, distribution files and DOT.
//!
//! All formats are line oriented; `#` starts a comment and blank lines are
//! ignored. Parse errors carry the 1-based line number.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use exchci::dist::{parse_state, table_from_orbits, JointTable, OrbitIndex, OrbitWeighting};
use exchci::graphs::{EdgeKind, GraphFamily, MixedGraph};
use exchci::imodel::{IndependenceModel, Statement};
use exchci::{dyad_universe, GroundSet, Kind};

/// Lines with comments stripped, paired with their line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// `<keyword> <vector|network> n=<int>`
fn parse_header(line: &str, keyword: &str) -> Result<GroundSet> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(keyword) {
        bail!("expected `{keyword} <vector|network> n=<int>`");
    }
    let kind: Kind = parts
        .next()
        .ok_or_else(|| anyhow!("missing ground kind"))?
        .parse()?;
    let n: usize = parts
        .next()
        .and_then(|t| t.strip_prefix("n="))
        .ok_or_else(|| anyhow!("missing n=<int>"))?
        .parse()
        .context("bad node count")?;
    if let Some(extra) = parts.next() {
        bail!("unexpected token {extra:?} in header");
    }
    Ok(match kind {
        Kind::Vector => GroundSet::vector(n)?,
        Kind::Network => dyad_universe(n)?,
    })
}

fn header(keyword: &str, g: &GroundSet) -> String {
    format!("{keyword} {} n={}\n", g.kind(), g.n())
}

/// First content line as the header, then the remaining lines.
fn split_header<'a>(text: &'a str, keyword: &str) -> Result<(GroundSet, Vec<(usize, &'a str)>)> {
    let mut lines = content_lines(text);
    let (no, first) = lines.next().ok_or_else(|| anyhow!("empty file"))?;
    let g = parse_header(first, keyword).with_context(|| format!("line {no}"))?;
    Ok((g, lines.collect()))
}

// ---------------------------------------------------------------------------
// models

/// Parse a model file. General statements are stored through their
/// elementary consequences.
pub fn parse_model(text: &str) -> Result<IndependenceModel> {
    let (g, lines) = split_header(text, "ground")?;
    let mut m = IndependenceModel::new(g.clone())?;
    for (no, line) in lines {
        let parse = || -> Result<Statement> {
            let rest = line
                .strip_prefix("stmt")
                .ok_or_else(|| anyhow!("expected `stmt {{A}} ; {{B}} ; {{C}}`"))?;
            let sets: Vec<&str> = rest.split(';').map(str::trim).collect();
            if sets.len() != 3 {
                bail!("a statement needs three sets separated by `;`");
            }
            for s in &sets {
                if !(s.starts_with('{') && s.ends_with('}')) {
                    bail!("set {s:?} must be written in braces");
                }
            }
            let a = g.parse_set(sets[0])?;
            let b = g.parse_set(sets[1])?;
            let c = g.parse_set(sets[2])?;
            Ok(Statement::new(a, b, c)?)
        };
        let st = parse().with_context(|| format!("line {no}"))?;
        m.add(st).with_context(|| format!("line {no}"))?;
    }
    Ok(m)
}

/// Canonical model file: the header, then one line per stored statement.
pub fn print_model(m: &IndependenceModel) -> String {
    let g = m.ground();
    let mut out = header("ground", g);
    for s in m.iter() {
        let _ = writeln!(
            out,
            "stmt {} ; {} ; {}",
            g.format_set(s.a),
            g.format_set(s.b),
            g.format_set(s.c)
        );
    }
    out
}

// ---------------------------------------------------------------------------
// graphs

fn edge_token(kind: EdgeKind) -> &'static str {
    match kind {
        EdgeKind::Line => "--",
        EdgeKind::Arc => "<->",
        EdgeKind::Arrow => "->",
    }
}

/// Graph file: a `ground` header, then `edge <u> <--|<->|->> <v>` lines.
pub fn parse_graph(text: &str) -> Result<MixedGraph> {
    let (g, lines) = split_header(text, "ground")?;
    let mut graph = MixedGraph::empty(g.clone());
    for (no, line) in lines {
        let mut parse = || -> Result<()> {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "edge" {
                bail!("expected `edge <u> <--|<->|->> <v>`");
            }
            let kind = match toks[2] {
                "--" => EdgeKind::Line,
                "<->" => EdgeKind::Arc,
                "->" => EdgeKind::Arrow,
                t => bail!("unknown edge mark {t:?}"),
            };
            graph.add_edge(g.parse_element(toks[1])?, g.parse_element(toks[3])?, kind)?;
            Ok(())
        };
        parse().with_context(|| format!("line {no}"))?;
    }
    Ok(graph)
}

pub fn print_graph(graph: &MixedGraph) -> String {
    let g = graph.ground();
    let mut out = header("ground", g);
    for (u, v, kind) in graph.edges() {
        let _ = writeln!(
            out,
            "edge {} {} {}",
            g.element(u),
            edge_token(kind),
            g.element(v)
        );
    }
    out
}

/// A graph argument: `<family>:<n>` or a path to a graph file.
pub fn load_graph(arg: &str) -> Result<MixedGraph> {
    if let Some((name, n)) = arg.split_once(':') {
        if let Ok(family) = name.parse::<GraphFamily>() {
            let n: usize = n
                .parse()
                .with_context(|| format!("bad node count in {arg:?}"))?;
            return Ok(family.build(n)?);
        }
    }
    let text =
        std::fs::read_to_string(arg).with_context(|| format!("cannot read graph {arg:?}"))?;
    parse_graph(&text).with_context(|| format!("in {arg}"))
}

/// DOT document: lines without arrowheads, arcs with both, arrows forward.
pub fn to_dot(graph: &MixedGraph) -> String {
    let g = graph.ground();
    let mut out = String::from("digraph G {\n");
    for e in g.elements() {
        let _ = writeln!(out, "  \"{e}\";");
    }
    for (u, v, kind) in graph.edges() {
        let dir = match kind {
            EdgeKind::Line => "none",
            EdgeKind::Arc => "both",
            EdgeKind::Arrow => "forward",
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [dir={dir}];",
            g.element(u),
            g.element(v)
        );
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// distributions

/// A probability written as a decimal or as a fraction `p/q`.
fn parse_prob(tok: &str) -> Result<f64> {
    let v = match tok.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p
                .parse()
                .with_context(|| format!("bad numerator in {tok:?}"))?;
            let q: f64 = q
                .parse()
                .with_context(|| format!("bad denominator in {tok:?}"))?;
            p / q
        }
        None => tok
            .parse()
            .with_context(|| format!("bad probability {tok:?}"))?,
    };
    if !v.is_finite() || v < 0.0 {
        bail!("probability {tok:?} is not a non-negative number");
    }
    Ok(v)
}

/// A `dist` file (per-state probabilities) or an `orbits` file (per-state
/// weights keyed by orbit representatives).
pub fn parse_dist(text: &str) -> Result<JointTable> {
    let first = content_lines(text).next().map(|(_, l)| l).unwrap_or("");
    if first.starts_with("orbits") {
        parse_orbits(text)
    } else {
        parse_table(text)
    }
}

fn entries<'a>(lines: &[(usize, &'a str)], key: &str) -> Result<Vec<(usize, &'a str, f64)>> {
    lines
        .iter()
        .map(|&(no, line)| {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 || toks[0] != key {
                bail!("line {no}: expected `{key} <bitstring> <probability>`");
            }
            let p = parse_prob(toks[2]).with_context(|| format!("line {no}"))?;
            Ok((no, toks[1], p))
        })
        .collect()
}

fn parse_table(text: &str) -> Result<JointTable> {
    let (g, lines) = split_header(text, "dist")?;
    if g.len() > exchci::dist::TABLE_CAPACITY {
        bail!(
            "tables are limited to {} elements",
            exchci::dist::TABLE_CAPACITY
        );
    }
    let mut probs = vec![0.0; 1 << g.len()];
    let mut seen = vec![false; probs.len()];
    for (no, bits, p) in entries(&lines, "p")? {
        let s = parse_state(&g, bits).with_context(|| format!("line {no}"))?;
        let i = s.bits() as usize;
        if seen[i] {
            bail!("line {no}: state {bits} listed twice");
        }
        seen[i] = true;
        probs[i] = p;
    }
    Ok(JointTable::new(g, probs)?)
}

fn parse_orbits(text: &str) -> Result<JointTable> {
    let (g, lines) = split_header(text, "orbits")?;
    if g.kind() != Kind::Network {
        bail!("orbit files describe network distributions");
    }
    let index = OrbitIndex::new(&g)?;
    let mut weights = Vec::new();
    for (no, bits, w) in entries(&lines, "w")? {
        let s = index
            .parse_bitstring(bits)
            .with_context(|| format!("line {no}"))?;
        weights.push((s, w));
    }
    Ok(table_from_orbits(&OrbitWeighting::new(index, weights)?)?)
}
