//! The algebras `Λ_n` (cyclic quiver, radical square zero) and
//! `Λ_n ⊗ Λ_n^op` presented by the discrete torus quiver.
//!
//! Vertex indices are residues in `1..=n` in every public type. Internally a
//! torus vertex `i|j` has id `(i-1)*n + (j-1)`; the vertical arrow starting
//! there has id `2*id` and the horizontal one `2*id + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{Quiver, Representation};

/// Reduces an arbitrary integer to its residue in `1..=n`.
pub fn residue(a: i64, n: usize) -> usize {
    (a - 1).rem_euclid(n as i64) as usize + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisElement {
    /// `ε_i`
    Idempotent(usize),
    /// `α_i : i -> i+1`
    Arrow(usize),
}

/// `Λ_n`: path algebra of the cyclic quiver `Q_n` modulo paths of length two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NakayamaAlgebra {
    pub n: usize,
    pub basis: Vec<BasisElement>,
}

impl NakayamaAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        let basis = (1..=n)
            .map(BasisElement::Idempotent)
            .chain((1..=n).map(BasisElement::Arrow))
            .collect();
        Ok(NakayamaAlgebra { n, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn source(&self, b: BasisElement) -> usize {
        match b {
            BasisElement::Idempotent(i) | BasisElement::Arrow(i) => i,
        }
    }

    pub fn target(&self, b: BasisElement) -> usize {
        match b {
            BasisElement::Idempotent(i) => i,
            BasisElement::Arrow(i) => residue(i as i64 + 1, self.n),
        }
    }

    /// Product `x·y` of basis elements (first `y`, then `x`), or `None` for zero.
    pub fn mul(&self, x: BasisElement, y: BasisElement) -> Option<BasisElement> {
        use BasisElement::*;
        match (x, y) {
            (Arrow(_), Arrow(_)) => None,
            _ if self.source(x) != self.target(y) => None,
            (Idempotent(_), y) => Some(y),
            (x, Idempotent(_)) => Some(x),
        }
    }

    /// The left module `Λε_i` as a representation of `Q_n`.
    pub fn projective(&self, i: usize) -> Representation {
        let n = self.n;
        let q = self.quiver();
        let mut rep = Representation::zero(&q);
        let top = i - 1;
        let soc = residue(i as i64 + 1, n) - 1;
        rep.dims[top] += 1;
        rep.dims[soc] += 1;
        for (a, &(s, t)) in q.arrows.iter().enumerate() {
            rep.maps[a] = crate::linalg::ExactMatrix::zeros(rep.dims[t], rep.dims[s]);
        }
        // basis: ε_i first, α_i second (they share a vertex when n = 1)
        let row = if n == 1 { 1 } else { 0 };
        rep.maps[top].set(row, 0, crate::scalar::Scalar::one());
        rep
    }

    /// The simple left module at vertex `i`.
    pub fn simple(&self, i: usize) -> Representation {
        let q = self.quiver();
        let mut rep = Representation::zero(&q);
        rep.dims[i - 1] = 1;
        for (a, &(s, t)) in q.arrows.iter().enumerate() {
            rep.maps[a] = crate::linalg::ExactMatrix::zeros(rep.dims[t], rep.dims[s]);
        }
        rep
    }

    /// `Q_n`: arrow `i-1` goes from vertex `i-1` to vertex `i mod n` (0-based).
    pub fn quiver(&self) -> Quiver {
        Quiver {
            vertex_count: self.n,
            arrows: (0..self.n).map(|v| (v, (v + 1) % self.n)).collect(),
        }
    }
}

/// A vertex `i|j` of the torus, both residues in `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub i: usize,
    pub j: usize,
}

impl Vertex {
    pub fn new(n: usize, a: i64, b: i64) -> Self {
        Vertex { i: residue(a, n), j: residue(b, n) }
    }

    pub fn id(&self, n: usize) -> usize {
        (self.i - 1) * n + (self.j - 1)
    }

    pub fn from_id(id: usize, n: usize) -> Self {
        Vertex { i: id / n + 1, j: id % n + 1 }
    }
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}|{}", self.i, self.j)
    }
}

/// A point of the universal cover `Z × Z` of the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoverVertex {
    pub a: i64,
    pub b: i64,
}

impl CoverVertex {
    pub fn new(a: i64, b: i64) -> Self {
        CoverVertex { a, b }
    }

    pub fn project(&self, n: usize) -> Vertex {
        project(*self, n)
    }
}

pub fn project(c: CoverVertex, n: usize) -> Vertex {
    Vertex::new(n, c.a, c.b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowKind {
    /// `i|j -> i+1|j`, left multiplication by `α_i`
    Vertical,
    /// `i|j -> i|j-1`, right multiplication by `α_{j-1}`
    Horizontal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusArrow {
    pub id: usize,
    pub kind: ArrowKind,
    pub source: Vertex,
    pub target: Vertex,
}

/// A relation of the torus presentation, in terms of arrow ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// `second ∘ first = 0` for two vertical arrows
    VerticalZero { first: usize, second: usize },
    /// `second ∘ first = 0` for two horizontal arrows
    HorizontalZero { first: usize, second: usize },
    /// `v' ∘ h = h' ∘ v` around the square starting at `corner`
    Square { corner: Vertex, h: usize, v_after: usize, v: usize, h_after: usize },
}

/// `Λ_n ⊗ Λ_n^op` as the path algebra of the discrete torus modulo relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusAlgebra {
    pub n: usize,
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<TorusArrow>,
    pub relations: Vec<Relation>,
}

impl TorusAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        let vertices: Vec<Vertex> = (0..n * n).map(|id| Vertex::from_id(id, n)).collect();
        let mut arrows = Vec::with_capacity(2 * n * n);
        for v in &vertices {
            let id = v.id(n);
            arrows.push(TorusArrow {
                id: 2 * id,
                kind: ArrowKind::Vertical,
                source: *v,
                target: Vertex::new(n, v.i as i64 + 1, v.j as i64),
            });
            arrows.push(TorusArrow {
                id: 2 * id + 1,
                kind: ArrowKind::Horizontal,
                source: *v,
                target: Vertex::new(n, v.i as i64, v.j as i64 - 1),
            });
        }
        let vert = |v: Vertex| 2 * v.id(n);
        let horiz = |v: Vertex| 2 * v.id(n) + 1;
        let mut relations = Vec::with_capacity(3 * n * n);
        for v in &vertices {
            let down = Vertex::new(n, v.i as i64 + 1, v.j as i64);
            relations.push(Relation::VerticalZero { first: vert(*v), second: vert(down) });
        }
        for v in &vertices {
            let left = Vertex::new(n, v.i as i64, v.j as i64 - 1);
            relations.push(Relation::HorizontalZero { first: horiz(*v), second: horiz(left) });
        }
        for v in &vertices {
            let down = Vertex::new(n, v.i as i64 + 1, v.j as i64);
            let left = Vertex::new(n, v.i as i64, v.j as i64 - 1);
            relations.push(Relation::Square {
                corner: *v,
                h: horiz(*v),
                v_after: vert(left),
                v: vert(*v),
                h_after: horiz(down),
            });
        }
        Ok(TorusAlgebra { n, vertices, arrows, relations })
    }

    /// Paths surviving the relations: vertices, arrows and one per square.
    pub fn dim(&self) -> usize {
        self.vertices.len() + self.arrows.len() + self.n * self.n
    }

    pub fn quiver(&self) -> Quiver {
        torus_quiver(self.n)
    }

    pub fn vertical(&self, v: Vertex) -> usize {
        2 * v.id(self.n)
    }

    pub fn horizontal(&self, v: Vertex) -> usize {
        2 * v.id(self.n) + 1
    }

    /// Whether a representation of the torus quiver satisfies every relation.
    pub fn satisfies_relations(&self, rep: &Representation) -> bool {
        let m = &rep.maps;
        self.relations.iter().all(|r| match *r {
            Relation::VerticalZero { first, second } | Relation::HorizontalZero { first, second } => {
                (&m[second] * &m[first]).is_zero()
            }
            Relation::Square { h, v_after, v, h_after, .. } => &m[v_after] * &m[h] == &m[h_after] * &m[v],
        })
    }
}

pub fn torus_quiver(n: usize) -> Quiver {
    let arrows = (0..n * n)
        .flat_map(|id| {
            let v = Vertex::from_id(id, n);
            let down = Vertex::new(n, v.i as i64 + 1, v.j as i64).id(n);
            let left = Vertex::new(n, v.i as i64, v.j as i64 - 1).id(n);
            [(id, down), (id, left)]
        })
        .collect();
    Quiver { vertex_count: n * n, arrows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::hom_basis;

    #[test]
    fn rejects_zero() {
        assert_eq!(NakayamaAlgebra::new(0), Err(Error::ZeroRank));
        assert_eq!(TorusAlgebra::new(0), Err(Error::ZeroRank));
    }

    #[test]
    fn dual_numbers() {
        let a = NakayamaAlgebra::new(1).unwrap();
        assert_eq!(a.dim(), 2);
        let (e, x) = (BasisElement::Idempotent(1), BasisElement::Arrow(1));
        assert_eq!(a.mul(x, x), None);
        assert_eq!(a.mul(e, x), Some(x));
        assert_eq!(a.mul(x, e), Some(x));
        assert_eq!(a.mul(e, e), Some(e));
    }

    #[test]
    fn multiplication_table() {
        for n in 1..=4 {
            let a = NakayamaAlgebra::new(n).unwrap();
            assert_eq!(a.dim(), 2 * n);
            for &x in &a.basis {
                for &y in &a.basis {
                    for &z in &a.basis {
                        let l = a.mul(x, y).and_then(|xy| a.mul(xy, z));
                        let r = a.mul(y, z).and_then(|yz| a.mul(x, yz));
                        assert_eq!(l, r);
                    }
                }
            }
            for i in 1..=n {
                let alpha = BasisElement::Arrow(i);
                let next = BasisElement::Idempotent(residue(i as i64 + 1, n));
                assert_eq!(a.mul(next, alpha), Some(alpha));
                assert_eq!(a.mul(alpha, BasisElement::Idempotent(i)), Some(alpha));
                for j in 1..=n {
                    assert_eq!(a.mul(alpha, BasisElement::Arrow(j)), None);
                }
            }
            // ε_i are orthogonal
            for i in 1..=n {
                for j in 1..=n {
                    let p = a.mul(BasisElement::Idempotent(i), BasisElement::Idempotent(j));
                    assert_eq!(p.is_some(), i == j);
                }
            }
        }
    }

    #[test]
    fn torus_counts() {
        let t = TorusAlgebra::new(2).unwrap();
        assert_eq!((t.vertices.len(), t.arrows.len()), (4, 8));
        let t = TorusAlgebra::new(3).unwrap();
        assert_eq!((t.vertices.len(), t.arrows.len()), (9, 18));
        let squares = t.relations.iter().filter(|r| matches!(r, Relation::Square { .. })).count();
        assert_eq!(squares, 9);
        assert_eq!(t.relations.len(), 27);
        let t = TorusAlgebra::new(1).unwrap();
        assert_eq!((t.vertices.len(), t.arrows.len()), (1, 2));
        assert!(t.arrows.iter().all(|a| a.source == a.target));
        for n in 1..=4 {
            assert_eq!(TorusAlgebra::new(n).unwrap().dim(), 4 * n * n);
        }
    }

    #[test]
    fn projection() {
        assert_eq!(project(CoverVertex::new(1, 1), 3), Vertex { i: 1, j: 1 });
        assert_eq!(project(CoverVertex::new(4, 1), 3), Vertex { i: 1, j: 1 });
        assert_eq!(project(CoverVertex::new(3, 0), 2), Vertex { i: 1, j: 2 });
        assert_eq!(project(CoverVertex::new(-5, 7), 3), Vertex { i: 1, j: 1 });
    }

    #[test]
    fn left_projectives() {
        for n in 1..=3 {
            let a = NakayamaAlgebra::new(n).unwrap();
            let q = a.quiver();
            for i in 1..=n {
                let p = a.projective(i);
                assert!(p.shapes_consistent(&q));
                assert_eq!(p.total_dim(), 2);
                // Hom(Λε_i, M) ≅ ε_i M
                for j in 1..=n {
                    let expect = if n == 1 { 2 } else { usize::from(i == j) + usize::from(residue(j as i64 + 1, n) == i) };
                    assert_eq!(hom_basis(&q, &p, &a.projective(j)).len(), expect, "n={n} i={i} j={j}");
                }
            }
        }
    }
}
