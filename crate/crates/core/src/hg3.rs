//! The `.hg3` text format: a header line `r n m` followed by `m` edge lines, each holding
//! `r` strictly increasing vertex ids separated by single spaces. Lines end in LF.

use std::path::Path;

use crate::error::{Error, Result};
use crate::hcore::Hypergraph;

pub fn to_string(h: &Hypergraph) -> String {
    let mut s = format!("{} {} {}\n", h.uniformity(), h.vertex_count(), h.len());
    for e in h.edges() {
        let parts: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        s.push_str(&parts.join(" "));
        s.push('\n');
    }
    s
}

fn parse_uint(tok: &str, line: usize) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) || (tok.len() > 1 && tok.starts_with('0')) {
        return Err(Error::Parse { line, msg: format!("not a canonical non-negative integer: {tok:?}") });
    }
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("integer out of range: {tok:?}") })
}

fn fields(text: &str, line: usize) -> Result<Vec<&str>> {
    if text.is_empty() {
        return Err(Error::Parse { line, msg: "empty line".into() });
    }
    let parts: Vec<&str> = text.split(' ').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Parse { line, msg: "fields must be separated by single spaces".into() });
    }
    Ok(parts)
}

pub fn parse(text: &str) -> Result<Hypergraph> {
    if text.contains('\r') {
        return Err(Error::Parse { line: 0, msg: "carriage return found; LF line endings required".into() });
    }
    let body = text.strip_suffix('\n').ok_or(Error::Parse { line: 0, msg: "missing final newline".into() })?;
    let mut lines = body.split('\n');
    let header = fields(lines.next().unwrap_or(""), 1)?;
    if header.len() != 3 {
        return Err(Error::Parse { line: 1, msg: "header must be `r n m`".into() });
    }
    let r = parse_uint(header[0], 1)?;
    let n = parse_uint(header[1], 1)?;
    let m = parse_uint(header[2], 1)?;
    if r == 0 {
        return Err(Error::Parse { line: 1, msg: "uniformity must be positive".into() });
    }
    let mut flat = Vec::with_capacity(m * r);
    let mut count = 0;
    for (i, l) in lines.enumerate() {
        let line = i + 2;
        if count == m {
            return Err(Error::Parse { line, msg: format!("more than the declared {m} edges") });
        }
        let toks = fields(l, line)?;
        if toks.len() != r {
            return Err(Error::Parse { line, msg: format!("expected {r} vertices, found {}", toks.len()) });
        }
        let start = flat.len();
        for t in toks {
            let v = parse_uint(t, line)?;
            if v >= n {
                return Err(Error::Parse { line, msg: format!("vertex {v} out of range for n = {n}") });
            }
            if flat.len() > start && flat[flat.len() - 1] >= v {
                return Err(Error::Parse { line, msg: "vertices must be strictly increasing".into() });
            }
            flat.push(v);
        }
        count += 1;
    }
    if count != m {
        return Err(Error::Parse { line: count + 2, msg: format!("declared {m} edges, found {count}") });
    }
    let edges: Vec<&[usize]> = flat.chunks_exact(r).collect();
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        let line = edges.iter().rposition(|e| *e == w[0]).unwrap_or(0) + 2;
        return Err(Error::Parse { line, msg: format!("duplicate edge {:?}", w[0]) });
    }
    Hypergraph::new(r, n, sorted)
}

pub fn read(path: &Path) -> Result<Hypergraph> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write(path: &Path, h: &Hypergraph) -> Result<()> {
    std::fs::write(path, to_string(h))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let h = Hypergraph::new(3, 6, [[0, 1, 2], [3, 4, 5], [0, 2, 5]]).unwrap();
        let s = to_string(&h);
        assert_eq!(s, "3 6 3\n0 1 2\n0 2 5\n3 4 5\n");
        assert_eq!(parse(&s).unwrap(), h);
        assert_eq!(parse("3 4 0\n").unwrap(), Hypergraph::empty(3, 4));
    }

    #[test]
    fn rejections() {
        let bad = [
            "3 4 1\r\n0 1 2\r\n",
            "3 4 1\n0 1 2",
            "3 4 1\n0 1 4\n",
            "3 4 1\n0 2 1\n",
            "3 4 2\n0 1 2\n0 1 2\n",
            "3 4 2\n0 1 2\n",
            "3 4 1\n0 1 2\n1 2 3\n",
            "3 4 1\n0  1 2\n",
            "3 4 1\n0 1\n",
            "3 4 1\n0 1 02\n",
            "3 4 1\n0 1 -2\n",
            "3 4\n",
            "0 4 0\n",
        ];
        for b in bad {
            assert!(matches!(parse(b), Err(Error::Parse { .. })), "accepted {b:?}");
        }
    }

    #[test]
    fn duplicate_reports_line() {
        match parse("3 5 3\n0 1 2\n1 2 3\n0 1 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }
}
