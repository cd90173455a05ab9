use std::fmt::Write as _;

use super::{MapError, PlaneMap};

fn parse_err(line: usize, msg: impl Into<String>) -> MapError {
    MapError::Parse { line, msg: msg.into() }
}

impl PlaneMap {
    /// `PLANEMAP v1 <half_edge_count> <root> [<point>]`, then one `twin`
    /// line and one `nextv` line per half-edge.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        write!(s, "PLANEMAP v1 {} {}", self.half_edge_count(), self.root()).unwrap();
        if let Some(p) = self.point() {
            write!(s, " {p}").unwrap();
        }
        s.push('\n');
        for &t in self.twins() {
            writeln!(s, "twin {t}").unwrap();
        }
        for &n in self.rotation() {
            writeln!(s, "nextv {n}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<PlaneMap, MapError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() < 4 || fields[0] != "PLANEMAP" || fields[1] != "v1" || fields.len() > 5 {
            return Err(parse_err(1, format!("bad header {header:?}")));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err(1, format!("bad number {s:?}")));
        let len = num(fields[2])?;
        let root = num(fields[3])?;
        let point = fields.get(4).map(|s| num(s)).transpose()?;

        let mut read_block = |key: &str| -> Result<Vec<usize>, MapError> {
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                let (i, line) = lines.next().ok_or_else(|| parse_err(0, format!("missing {key} line")))?;
                let mut it = line.split_whitespace();
                if it.next() != Some(key) {
                    return Err(parse_err(i + 1, format!("expected {key}")));
                }
                let v = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| parse_err(i + 1, "bad id"))?;
                if it.next().is_some() {
                    return Err(parse_err(i + 1, "trailing tokens"));
                }
                out.push(v);
            }
            Ok(out)
        };
        let twin = read_block("twin")?;
        let next = read_block("nextv")?;
        if let Some((i, line)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(parse_err(i + 1, format!("unexpected line {line:?}")));
        }
        let map = PlaneMap::new(twin, next, root)?;
        match point {
            Some(p) => map.with_point(p),
            None => Ok(map),
        }
    }
}
