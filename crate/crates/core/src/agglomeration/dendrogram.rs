use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{GeaError, Result};
use crate::fixed::Fixed;

/// Leaves are `0..n`; the merge at position `i` creates node `n + i`.
pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: NodeId,
    pub right: NodeId,
    /// Projection entropy of the merged subset. May be negative, and need
    /// not increase from one merge to the next.
    pub height: f64,
    pub size: usize,
}

/// Binary merge tree produced by agglomeration, in merge order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    n: usize,
    #[serde(with = "fixed_as_string")]
    r: Fixed,
    merges: Vec<Merge>,
}

mod fixed_as_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::fixed::Fixed;

    pub fn serialize<S: Serializer>(v: &Fixed, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Fixed, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

impl Dendrogram {
    /// Validates that `merges` forms a single binary tree over `n` leaves.
    pub fn new(n: usize, r: Fixed, merges: Vec<Merge>) -> Result<Self> {
        let d = Dendrogram { n, r, merges };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GeaError::Internal(msg));
        if self.n == 0 {
            return bad("dendrogram has no leaves".into());
        }
        if self.merges.len() != self.n - 1 {
            return bad(format!("{} leaves need {} merges, found {}", self.n, self.n - 1, self.merges.len()));
        }
        let mut used = vec![false; 2 * self.n - 1];
        let mut sizes = vec![1usize; 2 * self.n - 1];
        for (i, m) in self.merges.iter().enumerate() {
            let id = self.n + i;
            for child in [m.left, m.right] {
                if child >= id {
                    return bad(format!("merge {id} refers to later node {child}"));
                }
                if std::mem::replace(&mut used[child], true) {
                    return bad(format!("node {child} merged twice"));
                }
            }
            sizes[id] = sizes[m.left] + sizes[m.right];
            if sizes[id] != m.size {
                return bad(format!("merge {id} records size {} but holds {}", m.size, sizes[id]));
            }
            if !m.height.is_finite() {
                return bad(format!("merge {id} has non-finite height"));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> Fixed {
        self.r
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn root(&self) -> NodeId {
        2 * self.n - 2
    }

    /// Leaves under `node`, ascending.
    pub fn leaves_of(&self, node: NodeId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            if x < self.n {
                out.push(x);
            } else {
                let m = &self.merges[x - self.n];
                stack.push(m.left);
                stack.push(m.right);
            }
        }
        out.sort_unstable();
        out
    }

    /// Undoes the last `k - 1` merges. Clusters are labelled in order of
    /// their smallest element.
    pub fn cut(&self, k: usize) -> Result<ClusterSet> {
        if k == 0 || k > self.n {
            return Err(GeaError::CutOutOfRange { k, n: self.n });
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        // representative leaf per node
        let mut rep: Vec<usize> = (0..self.n).collect();
        for m in &self.merges[..self.n - k] {
            let (a, b) = (find(&mut parent, rep[m.left]), find(&mut parent, rep[m.right]));
            let root = a.min(b);
            parent[a.max(b)] = root;
            rep.push(root);
        }
        let mut label_of_root = vec![usize::MAX; self.n];
        let mut assignment = Vec::with_capacity(self.n);
        let mut next = 0;
        for e in 0..self.n {
            let root = find(&mut parent, e);
            if label_of_root[root] == usize::MAX {
                label_of_root[root] = next;
                next += 1;
            }
            assignment.push(label_of_root[root]);
        }
        if next != k {
            return Err(GeaError::Internal(format!("cut produced {next} clusters, expected {k}")));
        }
        Ok(ClusterSet { assignment, k })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("dendrogram serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("dendrogram serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Dendrogram =
            serde_json::from_str(s).map_err(|e| GeaError::Parse { path: None, line: e.line(), message: e.to_string() })?;
        d.validate().map_err(|e| match e {
            GeaError::Internal(m) => GeaError::Parse { path: None, line: 0, message: m },
            other => other,
        })?;
        Ok(d)
    }

    /// Newick rendering with one-based leaf labels.
    ///
    /// Branch lengths use heights clamped at zero (`max(parent, 0) -
    /// max(child, 0)`, floored at zero) since Newick readers reject negative
    /// lengths. Every internal node carries a `[&height=...]` comment with
    /// its raw height.
    pub fn to_newick(&self) -> String {
        let clamped = |node: NodeId| -> f64 {
            if node < self.n {
                0.0
            } else {
                self.merges[node - self.n].height.max(0.0)
            }
        };
        let mut text: Vec<Option<String>> = (0..self.n).map(|i| Some((i + 1).to_string())).collect();
        for (i, m) in self.merges.iter().enumerate() {
            let id = self.n + i;
            let h = clamped(id);
            let mut s = String::from("(");
            for (j, child) in [m.left, m.right].into_iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                let sub = text[child].take().expect("each node is merged once");
                let len = (h - clamped(child)).max(0.0);
                let _ = write!(s, "{sub}:{len}");
            }
            let _ = write!(s, ")[&height={}]", m.height);
            text.push(Some(s));
        }
        let mut out = text.pop().flatten().unwrap_or_default();
        out.push(';');
        out
    }
}

/// Flat cluster labels in `0..k`, one per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSet {
    assignment: Vec<usize>,
    k: usize,
}

impl ClusterSet {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let k = assignment.iter().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; k];
        for &a in &assignment {
            seen[a] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(GeaError::Internal("cluster labels are not contiguous".into()));
        }
        Ok(ClusterSet { assignment, k })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Members of each cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (e, &c) in self.assignment.iter().enumerate() {
            out[c].push(e);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Dendrogram {
        // ((((0,1),2),3),...)
        let mut merges = Vec::new();
        let mut prev = 0;
        for i in 1..n {
            merges.push(Merge { left: prev, right: i, height: i as f64 - 2.0, size: i + 1 });
            prev = n + i - 1;
        }
        Dendrogram::new(n, Fixed::ONE, merges).unwrap()
    }

    #[test]
    fn cut_extremes() {
        let d = chain(5);
        assert_eq!(d.cut(5).unwrap().assignment(), &[0, 1, 2, 3, 4]);
        assert_eq!(d.cut(1).unwrap().assignment(), &[0; 5]);
        assert_eq!(d.cut(2).unwrap().clusters(), vec![vec![0, 1, 2, 3], vec![4]]);
        assert!(matches!(d.cut(0), Err(GeaError::CutOutOfRange { .. })));
        assert!(d.cut(6).is_err());
    }

    #[test]
    fn rejects_malformed_trees() {
        let m = |l, r, s| Merge { left: l, right: r, height: 0.0, size: s };
        assert!(Dendrogram::new(3, Fixed::ONE, vec![m(0, 1, 2)]).is_err());
        assert!(Dendrogram::new(3, Fixed::ONE, vec![m(0, 1, 2), m(0, 2, 2)]).is_err());
        assert!(Dendrogram::new(3, Fixed::ONE, vec![m(0, 1, 2), m(3, 2, 2)]).is_err());
        assert!(Dendrogram::new(3, Fixed::ONE, vec![m(0, 4, 2), m(3, 2, 3)]).is_err());
        assert!(Dendrogram::new(3, Fixed::ONE, vec![m(0, 1, 2), m(3, 2, 3)]).is_ok());
    }

    #[test]
    fn json_shape() {
        let d = chain(3);
        let v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["r"], "1.0");
        assert_eq!(v["merges"][1]["left"], 3);
        assert_eq!(v["merges"][1]["size"], 3);
        assert_eq!(v["merges"][0]["height"], -1.0);
        assert_eq!(Dendrogram::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn newick_clamps_negative_heights() {
        let d = chain(3);
        assert_eq!(d.to_newick(), "((1:0,2:0)[&height=-1]:0,3:0)[&height=0];");
    }

    #[test]
    fn leaves_of_root_is_everything() {
        let d = chain(4);
        assert_eq!(d.leaves_of(d.root()), vec![0, 1, 2, 3]);
    }
}
