use super::EncoderError;

/// Plane tree stored as the child counts of its vertices in preorder.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    degrees: Vec<u32>,
}

impl PlaneTree {
    pub fn single() -> Self {
        PlaneTree { degrees: vec![0] }
    }

    pub fn from_degrees(degrees: Vec<u32>) -> Result<Self, EncoderError> {
        let mut need: i64 = 1;
        for (i, &d) in degrees.iter().enumerate() {
            if need == 0 {
                return Err(EncoderError::InvalidTree(format!("trailing vertices at {i}")));
            }
            need += d as i64 - 1;
        }
        if need != 0 || degrees.is_empty() {
            return Err(EncoderError::InvalidTree("child counts do not close the tree".into()));
        }
        Ok(PlaneTree { degrees })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.len() - 1
    }

    /// Parent of each vertex in preorder; the root has none.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.degrees.len()];
        let mut stack: Vec<(usize, u32)> = Vec::new();
        for (v, &d) in self.degrees.iter().enumerate() {
            if let Some(top) = stack.last_mut() {
                parent[v] = Some(top.0);
                top.1 -= 1;
            }
            while stack.last().is_some_and(|t| t.1 == 0) {
                stack.pop();
            }
            if d > 0 {
                stack.push((v, d));
            }
        }
        parent
    }

    /// Children of each vertex, in planar order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.degrees.len()];
        for (v, p) in self.parents().into_iter().enumerate() {
            if let Some(p) = p {
                ch[p].push(v);
            }
        }
        ch
    }

    /// Contour corners `(vertex, slot)`: a vertex with `c` children owns
    /// corners `0..=c`, slot `i` sitting between child `i - 1` and child `i`.
    pub fn contour(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(2 * self.degrees.len() - 1);
        // (vertex, children visited so far)
        let mut stack: Vec<(usize, u32)> = vec![(0, 0)];
        let mut next_id = 1;
        out.push((0, 0));
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if top.1 == self.degrees[v] {
                stack.pop();
                if let Some(&(u, k)) = stack.last() {
                    out.push((u, k as usize));
                }
                continue;
            }
            top.1 += 1;
            let c = next_id;
            next_id += 1;
            out.push((c, 0));
            stack.push((c, 0));
        }
        out
    }

    /// Balanced parentheses, one pair per vertex: a leaf is `()`.
    pub fn to_parens(&self) -> String {
        let mut s = String::with_capacity(2 * self.degrees.len());
        let mut stack: Vec<u32> = Vec::new();
        for &d in &self.degrees {
            s.push('(');
            stack.push(d);
            while stack.last() == Some(&0) {
                stack.pop();
                s.push(')');
                if let Some(t) = stack.last_mut() {
                    *t -= 1;
                }
            }
        }
        s
    }

    pub fn from_parens(s: &str) -> Result<Self, EncoderError> {
        let mut degrees = Vec::new();
        let mut open: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for c in s.chars() {
            if closed_root {
                return Err(EncoderError::InvalidTree("text after the root closes".into()));
            }
            match c {
                '(' => {
                    if let Some(&p) = open.last() {
                        degrees[p] += 1;
                    }
                    open.push(degrees.len());
                    degrees.push(0u32);
                }
                ')' => {
                    open.pop().ok_or_else(|| EncoderError::InvalidTree("unbalanced ')'".into()))?;
                    closed_root = open.is_empty();
                }
                _ => return Err(EncoderError::InvalidTree(format!("unexpected {c:?}"))),
            }
        }
        if !closed_root {
            return Err(EncoderError::InvalidTree("unbalanced '('".into()));
        }
        PlaneTree::from_degrees(degrees)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    shape: PlaneTree,
    labels: Vec<i64>,
}

impl LabeledTree {
    pub fn new(shape: PlaneTree, labels: Vec<i64>) -> Result<Self, EncoderError> {
        let t = LabeledTree { shape, labels };
        t.check()?;
        Ok(t)
    }

    pub fn single(label: i64) -> Self {
        LabeledTree { shape: PlaneTree::single(), labels: vec![label] }
    }

    pub(crate) fn new_unchecked(shape: PlaneTree, labels: Vec<i64>) -> Self {
        LabeledTree { shape, labels }
    }

    pub fn check(&self) -> Result<(), EncoderError> {
        if self.labels.len() != self.shape.vertex_count() {
            return Err(EncoderError::InvalidTree(format!(
                "{} labels for {} vertices",
                self.labels.len(),
                self.shape.vertex_count()
            )));
        }
        for (v, p) in self.shape.parents().into_iter().enumerate() {
            if let Some(p) = p {
                if (self.labels[v] - self.labels[p]).abs() > 1 {
                    return Err(EncoderError::InvalidTree(format!(
                        "label jump {} -> {} on edge {p}-{v}",
                        self.labels[p], self.labels[v]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> &PlaneTree {
        &self.shape
    }

    /// Labels in preorder.
    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn root_label(&self) -> i64 {
        self.labels[0]
    }
}
