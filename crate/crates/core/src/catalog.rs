//! Named indecomposable bimodules: the projective-injectives `P` and the
//! string bimodules `W, S, N, M` (with `L = W^(0)`), built from walks on the
//! universal cover of the torus.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{torus_quiver, ArrowKind, CoverVertex, Vertex};
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::quiver::Representation;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    P,
    L,
    W,
    S,
    N,
    M,
}

impl Family {
    pub const STRINGS: [Family; 4] = [Family::W, Family::S, Family::N, Family::M];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A catalog key. `L` is stored as `W` with `k = 0`; `P` carries no valley count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StringLabel {
    pub family: Family,
    pub i: usize,
    pub j: usize,
    pub k: Option<usize>,
}

impl StringLabel {
    /// Builds a label, reducing indices modulo `n`.
    pub fn new(family: Family, n: usize, i: i64, j: i64, k: Option<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        let v = Vertex::new(n, i, j);
        let (family, k) = match (family, k) {
            (Family::P, _) => (Family::P, None),
            (Family::L, _) => (Family::W, Some(0)),
            (f, Some(k)) => (f, Some(k)),
            (f, None) => {
                return Err(Error::InvalidLabel(format!("{f}:{v}"), "string families need a valley count".into()))
            }
        };
        Ok(StringLabel { family, i: v.i, j: v.j, k })
    }

    pub fn string(family: Family, n: usize, i: i64, j: i64, k: usize) -> Self {
        Self::new(family, n, i, j, Some(k)).expect("n >= 1")
    }

    pub fn projective(n: usize, i: i64, j: i64) -> Self {
        Self::new(Family::P, n, i, j, None).expect("n >= 1")
    }

    pub fn vertex(&self) -> Vertex {
        Vertex { i: self.i, j: self.j }
    }

    pub fn valleys(&self) -> Option<usize> {
        self.k
    }

    /// Total dimension, read off the walk length.
    pub fn dim(&self) -> usize {
        match (self.family, self.k) {
            (Family::P, _) => 4,
            (Family::S | Family::N, Some(k)) => 2 * k + 2,
            (Family::M, Some(k)) => 2 * k + 3,
            (_, k) => 2 * k.unwrap_or(0) + 1,
        }
    }

    /// Parses literals such as `N:1|2:k=1`, `P:2|1` or `L:1|1`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let bad = |why: &str| Error::InvalidLabel(s.to_string(), why.to_string());
        let mut parts = s.trim().split(':');
        let family = match parts.next().map(str::trim) {
            Some("P") => Family::P,
            Some("L") => Family::L,
            Some("W") => Family::W,
            Some("S") => Family::S,
            Some("N") => Family::N,
            Some("M") => Family::M,
            _ => return Err(bad("family must be one of P, L, W, S, N, M")),
        };
        let vertex = parts.next().ok_or_else(|| bad("missing initial vertex"))?;
        let (a, b) = vertex.split_once('|').ok_or_else(|| bad("vertex must look like i|j"))?;
        let a: usize = a.trim().parse().map_err(|_| bad("vertex index is not a number"))?;
        let b: usize = b.trim().parse().map_err(|_| bad("vertex index is not a number"))?;
        for x in [a, b] {
            if x == 0 || x > n {
                return Err(Error::IndexOutOfRange(x, n));
            }
        }
        let k = match parts.next() {
            None => None,
            Some(kpart) => {
                let v = kpart.trim().strip_prefix("k=").unwrap_or(kpart.trim());
                Some(v.parse::<usize>().map_err(|_| bad("valley count must be a nonnegative integer"))?)
            }
        };
        if parts.next().is_some() {
            return Err(bad("too many `:`-separated fields"));
        }
        if family == Family::P && k.is_some() {
            return Err(bad("P takes no valley count"));
        }
        if family == Family::L && k.is_some_and(|k| k != 0) {
            return Err(bad("L is W with k=0"));
        }
        StringLabel::new(family, n, a as i64, b as i64, k)
    }
}

impl fmt::Display for StringLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            None => write!(f, "{}:{}|{}", self.family, self.i, self.j),
            Some(k) => write!(f, "{}:{}|{}:k={}", self.family, self.i, self.j, k),
        }
    }
}

/// Parses a label for an unspecified `n`; indices are only checked to be positive.
impl FromStr for StringLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StringLabel::parse(s, usize::MAX)
    }
}

/// A walk on the universal cover: points in walk order and directed edges
/// between them (indices into `points`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub points: Vec<CoverVertex>,
    pub edges: Vec<(usize, usize, ArrowKind)>,
}

impl Walk {
    pub fn of(label: &StringLabel) -> Walk {
        let (i, j) = (label.i as i64, label.j as i64);
        if label.family == Family::P {
            let pts = [(i, j - 1), (i, j), (i + 1, j - 1), (i + 1, j)];
            return Walk {
                points: pts.iter().map(|&(a, b)| CoverVertex::new(a, b)).collect(),
                edges: vec![
                    (1, 3, ArrowKind::Vertical),
                    (1, 0, ArrowKind::Horizontal),
                    (0, 2, ArrowKind::Vertical),
                    (3, 2, ArrowKind::Horizontal),
                ],
            };
        }
        let k = label.k.expect("string labels carry k") as i64;
        let mut points = Vec::new();
        let mut edges = Vec::new();
        let leading = matches!(label.family, Family::N | Family::M);
        let trailing = matches!(label.family, Family::S | Family::M);
        if leading {
            points.push(CoverVertex::new(i, j - 1));
        }
        let base = points.len();
        for m in 0..=k {
            points.push(CoverVertex::new(i + m, j + m));
            if m < k {
                points.push(CoverVertex::new(i + m + 1, j + m));
            }
        }
        for m in 0..k as usize {
            edges.push((base + 2 * m, base + 2 * m + 1, ArrowKind::Vertical));
            edges.push((base + 2 * m + 2, base + 2 * m + 1, ArrowKind::Horizontal));
        }
        if leading {
            edges.push((base, 0, ArrowKind::Horizontal));
        }
        if trailing {
            let last = points.len() - 1;
            points.push(CoverVertex::new(i + k + 1, j + k));
            edges.push((last, last + 1, ArrowKind::Vertical));
        }
        Walk { points, edges }
    }

    /// Sinks of indegree two.
    pub fn valleys(&self) -> usize {
        (0..self.points.len())
            .filter(|&p| {
                let indeg = self.edges.iter().filter(|e| e.1 == p).count();
                let outdeg = self.edges.iter().filter(|e| e.0 == p).count();
                indeg == 2 && outdeg == 0
            })
            .count()
    }

    /// Pushes the walk down to the torus with identity maps along each edge.
    pub fn push_forward(&self, n: usize) -> Bimodule {
        let q = torus_quiver(n);
        let mut dims = vec![0; n * n];
        let mut slot = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let v = p.project(n).id(n);
            slot.push((v, dims[v]));
            dims[v] += 1;
        }
        let mut maps: Vec<ExactMatrix> =
            q.arrows.iter().map(|&(s, t)| ExactMatrix::zeros(dims[t], dims[s])).collect();
        for &(from, to, kind) in &self.edges {
            let (vs, cs) = slot[from];
            let (vt, ct) = slot[to];
            let arrow = match kind {
                ArrowKind::Vertical => 2 * vs,
                ArrowKind::Horizontal => 2 * vs + 1,
            };
            debug_assert_eq!(q.arrows[arrow].1, vt);
            maps[arrow].set(ct, cs, Scalar::one());
        }
        Bimodule::from_rep(n, Representation { dims, maps })
    }
}

pub fn construct(label: &StringLabel, n: usize) -> Result<Bimodule> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    if label.i == 0 || label.j == 0 || label.i > n || label.j > n {
        return Err(Error::IndexOutOfRange(label.i.max(label.j), n));
    }
    Ok(Walk::of(label).push_forward(n))
}

/// All labels with at most `max_valleys` valleys: `P` first, then for each
/// `k` the families `W, S, N, M`, each over all initial vertices.
pub fn labels(n: usize, max_valleys: usize) -> Vec<StringLabel> {
    let vertices: Vec<_> = (0..n * n).map(|id| Vertex::from_id(id, n)).collect();
    let mut out: Vec<_> = vertices.iter().map(|v| StringLabel::projective(n, v.i as i64, v.j as i64)).collect();
    for k in 0..=max_valleys {
        for f in Family::STRINGS {
            out.extend(vertices.iter().map(|v| StringLabel::string(f, n, v.i as i64, v.j as i64, k)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn support(b: &Bimodule) -> Vec<(usize, usize)> {
        b.support().iter().map(|v| (v.i, v.j)).collect()
    }

    #[test]
    fn small_examples() {
        let s = construct(&StringLabel::string(Family::S, 3, 1, 1, 1), 3).unwrap();
        assert_eq!(s.total_dim(), 4);
        let mut sup = support(&s);
        sup.sort();
        assert_eq!(sup, vec![(1, 1), (2, 1), (2, 2), (3, 2)]);
        let l = construct(&StringLabel::parse("L:2|1", 3).unwrap(), 3).unwrap();
        assert_eq!(l.total_dim(), 1);
        let m = StringLabel::string(Family::M, 3, 1, 1, 1);
        assert_eq!(construct(&m, 3).unwrap().total_dim(), 5);
        assert_eq!(Walk::of(&m).valleys(), 1);
    }

    #[test]
    fn dimensions_and_valleys() {
        for n in 1..=4 {
            for label in labels(n, 3) {
                let b = construct(&label, n).unwrap();
                assert_eq!(b.total_dim(), label.dim(), "{label}");
                assert!(b.satisfies_relations(), "{label}");
                if let Some(k) = label.k {
                    assert_eq!(Walk::of(&label).valleys(), k, "{label}");
                }
            }
        }
    }

    #[test]
    fn literals_round_trip() {
        for s in ["N:1|2:k=1", "P:2|1", "W:3|3:k=0", "M:1|1:k=4"] {
            assert_eq!(StringLabel::parse(s, 3).unwrap().to_string(), s);
        }
        assert_eq!(StringLabel::parse("L:1|2", 2).unwrap(), StringLabel::string(Family::W, 2, 1, 2, 0));
        assert_eq!(StringLabel::parse("S:1|1:2", 2).unwrap().k, Some(2));
        assert!(StringLabel::parse("N:1|2", 2).is_err());
        assert!(StringLabel::parse("P:1|1:k=1", 2).is_err());
        assert!(StringLabel::parse("Q:1|1:k=1", 2).is_err());
        assert!(matches!(StringLabel::parse("N:3|1:k=1", 2), Err(Error::IndexOutOfRange(3, 2))));
        assert!(StringLabel::parse("N:0|1:k=1", 2).is_err());
    }

    #[test]
    fn indices_reduce_mod_n() {
        assert_eq!(StringLabel::string(Family::N, 3, 4, 0, 1), StringLabel::string(Family::N, 3, 1, 3, 1));
    }

    #[test]
    fn catalog_size() {
        assert_eq!(labels(1, 0).len(), 5);
        assert_eq!(labels(3, 2).len(), 9 * 13);
    }
}
