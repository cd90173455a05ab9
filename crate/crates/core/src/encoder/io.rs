use std::fmt::Write as _;

use super::{AttachedTree, DiscreteBridge, EncoderError, LabeledTree, LabeledTreedBridge, PlaneTree};

fn parse_err(line: usize, msg: impl Into<String>) -> EncoderError {
    EncoderError::Parse { line, msg: msg.into() }
}

fn parse_ints(line: usize, tokens: &[&str]) -> Result<Vec<i64>, EncoderError> {
    tokens.iter().map(|t| t.parse().map_err(|_| parse_err(line, format!("bad integer {t:?}")))).collect()
}

impl LabeledTreedBridge {
    /// `LTB v1 p m`, a `bridge` line with the `p + 1` bridge labels, then
    /// for each downstep a `shape <at> <parens>` line and a `labels` line in
    /// preorder.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "LTB v1 {} {}", self.perimeter(), self.edge_count()).unwrap();
        s.push_str("bridge");
        for l in self.bridge.labels() {
            write!(s, " {l}").unwrap();
        }
        s.push('\n');
        for t in &self.trees {
            writeln!(s, "shape {} {}", t.at, t.tree.shape().to_parens()).unwrap();
            s.push_str("labels");
            for l in t.tree.labels() {
                write!(s, " {l}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, EncoderError> {
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        let (_, header) = lines.first().ok_or_else(|| parse_err(1, "empty input"))?;
        if header.len() != 4 || header[0] != "LTB" || header[1] != "v1" {
            return Err(parse_err(1, "bad header"));
        }
        let p: usize = header[2].parse().map_err(|_| parse_err(1, "bad perimeter"))?;
        let m: usize = header[3].parse().map_err(|_| parse_err(1, "bad edge count"))?;

        let (ln, bridge_line) = lines.get(1).ok_or_else(|| parse_err(2, "missing bridge line"))?;
        if bridge_line[0] != "bridge" || bridge_line.len() != p + 2 {
            return Err(parse_err(*ln, "bad bridge line"));
        }
        let bridge = DiscreteBridge::new(parse_ints(*ln, &bridge_line[1..])?)?;

        let rest = &lines[2..];
        if rest.len() != p {
            return Err(parse_err(0, format!("expected {} tree lines, found {}", p, rest.len())));
        }
        let mut trees = Vec::with_capacity(p / 2);
        for pair in rest.chunks(2) {
            let (ln, shape) = &pair[0];
            if shape.len() != 3 || shape[0] != "shape" {
                return Err(parse_err(*ln, "bad shape line"));
            }
            let at: usize = shape[1].parse().map_err(|_| parse_err(*ln, "bad position"))?;
            let tree_shape = PlaneTree::from_parens(shape[2])?;
            let (ln, labels) = &pair[1];
            if labels[0] != "labels" {
                return Err(parse_err(*ln, "bad labels line"));
            }
            let tree = LabeledTree::new(tree_shape, parse_ints(*ln, &labels[1..])?)?;
            trees.push(AttachedTree { at, tree });
        }
        let ltb = LabeledTreedBridge::from_parts_unchecked(bridge, trees);
        let v = ltb.validate();
        if !v.is_ok() {
            return Err(EncoderError::InvalidTreedBridge(v.reasons.join("; ")));
        }
        if ltb.edge_count() != m {
            return Err(parse_err(1, format!("header says {m} edges, trees have {}", ltb.edge_count())));
        }
        Ok(ltb)
    }
}
