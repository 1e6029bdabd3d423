//! Text formats: edge lists, greedy traces and blocking sets.
//!
//! Edge list:
//! ```text
//! p <n> <m>
//! e <u> <v> <w>     (m lines, 0-indexed)
//! ```
//! Trace (one line per processed edge, after a header comment):
//! ```text
//! # ft-greedy n=<n> mode=<vertex|edge> f=<f> stretch=<k>
//! <u> <v> <w> ACCEPT F: <members...>
//! <u> <v> <w> REJECT
//! ```
//! Blocking set: `b <v> <u1> <u2>` (vertex kind) or `B <u1> <u2> <u3> <u4>`
//! (edge kind). Lines starting with `#` are comments everywhere.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::blocking::{BlockingKind, BlockingSet};
use crate::error::{Error, Result};
use crate::graph::{Edge, FaultMode, FaultSet, Graph, VertexId, VertexPair};
use crate::spanner::{Decision, GreedyTrace, SpannerParams, TraceEntry};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

/// Non-empty, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u, e.v, e.weight);
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing `p <n> <m>` header"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") {
        return Err(parse_err(hl, "expected `p <n> <m>` header"));
    }
    let n: usize = field(toks.next(), hl, "vertex count")?;
    let m: usize = field(toks.next(), hl, "edge count")?;
    let mut g = Graph::empty(n);
    let mut seen = 0;
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("e") {
            return Err(parse_err(ln, format!("expected an `e` line, got `{line}`")));
        }
        let u: usize = field(toks.next(), ln, "endpoint")?;
        let v: usize = field(toks.next(), ln, "endpoint")?;
        let w: f64 = field(toks.next(), ln, "weight")?;
        if toks.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        g.push_edge(Edge::new(u, v, w))
            .map_err(|e| parse_err(ln, e.to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(hl, format!("header declares {m} edges, found {seen}")));
    }
    Ok(g)
}

fn mode_name(mode: FaultMode) -> &'static str {
    match mode {
        FaultMode::Vertex => "vertex",
        FaultMode::Edge => "edge",
    }
}

pub fn format_trace(trace: &GreedyTrace) -> String {
    let p = &trace.params;
    let mut out = format!(
        "# ft-greedy n={} mode={} f={} stretch={}\n",
        trace.n,
        mode_name(p.mode),
        p.faults,
        p.stretch
    );
    for entry in &trace.entries {
        let e = &entry.edge;
        let _ = write!(out, "{} {} {}", e.u, e.v, e.weight);
        match &entry.decision {
            Decision::Rejected => out.push_str(" REJECT\n"),
            Decision::Accepted(w) => {
                out.push_str(" ACCEPT F:");
                match w {
                    FaultSet::Vertices(vs) => vs.iter().for_each(|v| {
                        let _ = write!(out, " {v}");
                    }),
                    FaultSet::Edges(es) => es.iter().for_each(|p| {
                        let _ = write!(out, " {p}");
                    }),
                }
                out.push('\n');
            }
        }
    }
    out
}

fn parse_trace_header(line: &str, ln: usize) -> Result<(usize, SpannerParams)> {
    let body = line
        .strip_prefix('#')
        .map(str::trim)
        .and_then(|l| l.strip_prefix("ft-greedy"))
        .ok_or_else(|| parse_err(ln, "expected `# ft-greedy n=.. mode=.. f=.. stretch=..` header"))?;
    let (mut n, mut mode, mut f, mut k) = (None, None, None, None);
    for kv in body.split_whitespace() {
        let (key, val) = kv
            .split_once('=')
            .ok_or_else(|| parse_err(ln, format!("bad header field `{kv}`")))?;
        match key {
            "n" => n = Some(field(Some(val), ln, "n")?),
            "f" => f = Some(field(Some(val), ln, "f")?),
            "stretch" => k = Some(field(Some(val), ln, "stretch")?),
            "mode" => {
                mode = Some(match val {
                    "vertex" => FaultMode::Vertex,
                    "edge" => FaultMode::Edge,
                    other => return Err(parse_err(ln, format!("unknown mode `{other}`"))),
                })
            }
            other => return Err(parse_err(ln, format!("unknown header field `{other}`"))),
        }
    }
    let missing = |what: &str| parse_err(ln, format!("header lacks {what}"));
    let params = SpannerParams::new(
        k.ok_or_else(|| missing("stretch"))?,
        f.ok_or_else(|| missing("f"))?,
        mode.ok_or_else(|| missing("mode"))?,
    )
    .map_err(|e| parse_err(ln, e.to_string()))?;
    Ok((n.ok_or_else(|| missing("n"))?, params))
}

fn parse_pair(tok: &str, ln: usize) -> Result<VertexPair> {
    let (a, b) = tok
        .split_once('-')
        .ok_or_else(|| parse_err(ln, format!("bad edge member `{tok}`")))?;
    Ok(VertexPair::new(
        field::<usize>(Some(a), ln, "endpoint")?,
        field::<usize>(Some(b), ln, "endpoint")?,
    ))
}

pub fn parse_trace(text: &str) -> Result<GreedyTrace> {
    let mut header = None;
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_none() && line.contains("ft-greedy") {
                header = Some(parse_trace_header(line, ln)?);
            }
            continue;
        }
        let (n, params) = header.ok_or_else(|| parse_err(ln, "trace lines before the `# ft-greedy` header"))?;
        let (decision_part, members) = match line.split_once("F:") {
            Some((head, tail)) => (head.trim(), Some(tail.trim())),
            None => (line, None),
        };
        let mut toks = decision_part.split_whitespace();
        let u: usize = field(toks.next(), ln, "endpoint")?;
        let v: usize = field(toks.next(), ln, "endpoint")?;
        let w: f64 = field(toks.next(), ln, "weight")?;
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("endpoint out of range for n={n}")));
        }
        let decision = match (toks.next(), members) {
            (Some("REJECT"), None) => Decision::Rejected,
            (Some("ACCEPT"), Some(list)) => Decision::Accepted(match params.mode {
                FaultMode::Vertex => FaultSet::vertices(
                    list.split_whitespace()
                        .map(|t| field::<usize>(Some(t), ln, "witness vertex").map(VertexId))
                        .collect::<Result<Vec<_>>>()?,
                ),
                FaultMode::Edge => FaultSet::edges(
                    list.split_whitespace()
                        .map(|t| parse_pair(t, ln))
                        .collect::<Result<Vec<_>>>()?,
                ),
            }),
            _ => return Err(parse_err(ln, "expected `ACCEPT F: ...` or `REJECT`")),
        };
        entries.push(TraceEntry {
            edge: Edge::new(u, v, w),
            decision,
        });
    }
    let (n, params) = header.ok_or_else(|| parse_err(1, "missing `# ft-greedy` header"))?;
    let trace = GreedyTrace { n, params, entries };
    trace.validate()?;
    Ok(trace)
}

pub fn format_blocking(b: &BlockingSet) -> String {
    let mut out = format!("# blocking kind={} pairs={}\n", b.kind(), b.len());
    match b {
        BlockingSet::Vertex(pairs) => {
            for p in pairs {
                let _ = writeln!(out, "b {} {} {}", p.blocker(), p.edge().lo(), p.edge().hi());
            }
        }
        BlockingSet::Edge(pairs) => {
            for p in pairs {
                let (a, c) = p.edges();
                let _ = writeln!(out, "B {} {} {} {}", a.lo(), a.hi(), c.lo(), c.hi());
            }
        }
    }
    out
}

/// Kind comes from the `# blocking kind=..` comment or the first pair line;
/// an empty file without either is an empty vertex blocking set.
pub fn parse_blocking(text: &str) -> Result<BlockingSet> {
    let declared = text.lines().find_map(|l| {
        let l = l.trim().strip_prefix('#')?.trim().strip_prefix("blocking")?;
        l.split_whitespace().find_map(|kv| match kv {
            "kind=vertex" => Some(BlockingKind::Vertex),
            "kind=edge" => Some(BlockingKind::Edge),
            _ => None,
        })
    });
    let mut set: Option<BlockingSet> = declared.map(BlockingSet::empty);
    for (ln, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        let tag = toks.next();
        let kind = match tag {
            Some("b") => BlockingKind::Vertex,
            Some("B") => BlockingKind::Edge,
            _ => return Err(parse_err(ln, format!("expected `b` or `B` line, got `{line}`"))),
        };
        let set = set.get_or_insert_with(|| BlockingSet::empty(kind));
        if set.kind() != kind {
            return Err(parse_err(ln, "mixed vertex and edge blocking pairs"));
        }
        let mut ids = Vec::with_capacity(4);
        for t in toks {
            ids.push(field::<usize>(Some(t), ln, "vertex")?);
        }
        let result = match (kind, ids.as_slice()) {
            (BlockingKind::Vertex, &[v, a, b]) => set.insert_vertex_pair(VertexId(v), pair_checked(a, b, ln)?),
            (BlockingKind::Edge, &[a, b, c, d]) => {
                set.insert_edge_pair(pair_checked(a, b, ln)?, pair_checked(c, d, ln)?)
            }
            _ => return Err(parse_err(ln, "wrong number of vertex ids")),
        };
        result.map_err(|e| parse_err(ln, e.to_string()))?;
    }
    Ok(set.unwrap_or_else(|| BlockingSet::empty(BlockingKind::Vertex)))
}

fn pair_checked(a: usize, b: usize, ln: usize) -> Result<VertexPair> {
    if a == b {
        return Err(parse_err(ln, format!("self-loop {a}-{b} is not an edge")));
    }
    Ok(VertexPair::new(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocking::extract_blocking_set;
    use crate::generators::{complete_graph, random_graph, WeightDist};
    use crate::spanner::ft_greedy_spanner;

    #[test]
    fn edge_list_shape() {
        let text = format_edge_list(&complete_graph(4));
        assert!(text.starts_with("p 4 6\ne 0 1 1\n"));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn edge_list_round_trip_keeps_weights() {
        let g = random_graph(15, 0.5, 3, WeightDist::Uniform { lo: 0.1, hi: 7.0 }).unwrap();
        let back = parse_edge_list(&format_edge_list(&g)).unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn edge_list_errors() {
        let cases = [
            ("e 0 1 1\n", 1),
            ("p 3 1\ne 0 0 1\n", 2),
            ("p 3 2\ne 0 1 1\ne 1 0 2\n", 3),
            ("p 3 2\ne 0 1 1\n", 1),
            ("p 3 1\ne 0 5 1\n", 2),
            ("p 3 1\ne 0 1 x\n", 2),
            ("p 3 1\ne 0 1 -2\n", 2),
        ];
        for (text, line) in cases {
            match parse_edge_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn comments_are_skipped() {
        let g = parse_edge_list("# a triangle\np 3 3\n# edges\ne 0 1 1\ne 1 2 1\n\ne 0 2 2.5\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.weight_of(VertexPair::new(0, 2)), Some(2.5));
    }

    #[test]
    fn k4_trace_text() {
        let r = ft_greedy_spanner(&complete_graph(4), SpannerParams::vertex(3.0, 1).unwrap()).unwrap();
        let text = format_trace(&r.trace);
        let expected = "# ft-greedy n=4 mode=vertex f=1 stretch=3\n\
                        0 1 1 ACCEPT F:\n0 2 1 ACCEPT F:\n0 3 1 ACCEPT F:\n\
                        1 2 1 ACCEPT F: 0\n1 3 1 ACCEPT F: 0\n2 3 1 REJECT\n";
        assert_eq!(text, expected);
        assert_eq!(parse_trace(&text).unwrap(), r.trace);
    }

    #[test]
    fn edge_trace_round_trip() {
        let g = complete_graph(5);
        let r = ft_greedy_spanner(&g, SpannerParams::edge(3.0, 2).unwrap()).unwrap();
        let text = format_trace(&r.trace);
        assert!(text.contains('-'));
        assert_eq!(parse_trace(&text).unwrap(), r.trace);
    }

    #[test]
    fn malformed_traces() {
        assert!(parse_trace("0 1 1 REJECT\n").is_err());
        let h = "# ft-greedy n=3 mode=vertex f=1 stretch=3\n";
        assert!(parse_trace(&format!("{h}0 1 1 MAYBE\n")).is_err());
        assert!(parse_trace(&format!("{h}0 7 1 REJECT\n")).is_err());
        // witness containing an endpoint
        assert!(matches!(
            parse_trace(&format!("{h}0 1 1 ACCEPT F: 1\n")),
            Err(Error::MalformedTrace(_))
        ));
        // witness larger than f
        assert!(parse_trace(&format!("{h}0 1 1 ACCEPT F: 2 3\n")).is_err());
    }

    #[test]
    fn blocking_round_trip() {
        let r = ft_greedy_spanner(&complete_graph(6), SpannerParams::vertex(3.0, 2).unwrap()).unwrap();
        let b = extract_blocking_set(&r.trace).unwrap();
        assert!(!b.is_empty());
        assert_eq!(parse_blocking(&format_blocking(&b)).unwrap(), b);
        let r = ft_greedy_spanner(&complete_graph(6), SpannerParams::edge(3.0, 2).unwrap()).unwrap();
        let b = extract_blocking_set(&r.trace).unwrap();
        assert_eq!(b.kind(), BlockingKind::Edge);
        assert_eq!(parse_blocking(&format_blocking(&b)).unwrap(), b);
    }

    #[test]
    fn blocking_parse_errors() {
        assert!(parse_blocking("b 0 0 1\n").is_err());
        assert!(parse_blocking("B 0 1 0 1\n").is_err());
        assert!(parse_blocking("b 2 0 1\nB 0 1 1 2\n").is_err());
        assert!(parse_blocking("b 2 0\n").is_err());
        assert_eq!(parse_blocking("").unwrap(), BlockingSet::empty(BlockingKind::Vertex));
        assert_eq!(
            parse_blocking("# blocking kind=edge pairs=0\n").unwrap().kind(),
            BlockingKind::Edge
        );
    }
}
