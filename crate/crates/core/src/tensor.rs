//! Tensor products over `Λ_n`.
//!
//! At a torus vertex `a|b` the product space is `⊕_j X(a|j) ⊗ Y(j|b)`; the
//! idempotents are balanced by construction, so only the arrow relations
//! `x·α_c ⊗ y = x ⊗ α_c·y` are imposed. The quotient basis is given by the
//! non-pivot columns of the reduced relation matrix.

use std::sync::Arc;

use crate::algebra::{residue, Vertex};
use crate::bimodule::{Bimodule, BimoduleMap};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, ExactMatrix};
use crate::quiver::{Morphism, Representation};
use crate::scalar::Scalar;

/// Quotient data of the product space at one vertex.
struct Fiber {
    /// `offsets[j-1]` is where the block `X(a|j) ⊗ Y(j|b)` starts.
    offsets: Vec<usize>,
    len: usize,
    relations: Echelon,
    free: Vec<usize>,
}

impl Fiber {
    /// Coordinates in the quotient basis of the class of `v`.
    fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = if self.relations.rank() == 0 { v.to_vec() } else { self.relations.reduce(v) };
        self.free.iter().map(|&f| r[f].clone()).collect()
    }

    /// Matrix on quotient bases induced by a map `a` between product spaces.
    fn induced(&self, a: &ExactMatrix, target: &Fiber) -> ExactMatrix {
        let cols: Vec<_> = self.free.iter().map(|&f| target.project(&a.column(f))).collect();
        ExactMatrix::from_columns(target.free.len(), &cols)
    }
}

struct TensorSpace {
    n: usize,
    fibers: Vec<Fiber>,
}

impl TensorSpace {
    fn new(x: &Bimodule, y: &Bimodule) -> Self {
        let n = x.n;
        let fibers = (0..n * n)
            .map(|id| {
                let v = Vertex::from_id(id, n);
                let (a, b) = (v.i, v.j);
                let mut offsets = Vec::with_capacity(n);
                let mut len = 0;
                for j in 1..=n {
                    offsets.push(len);
                    len += x.dim_at(Vertex { i: a, j }) * y.dim_at(Vertex { i: j, j: b });
                }
                let mut rows: Vec<Vec<Scalar>> = Vec::new();
                if len > 0 {
                    for c in 1..=n {
                        let c1 = residue(c as i64 + 1, n);
                        let xs = Vertex { i: a, j: c1 };
                        let yc = Vertex { i: c, j: b };
                        let (dx, dy) = (x.dim_at(xs), y.dim_at(yc));
                        if dx == 0 || dy == 0 {
                            continue;
                        }
                        let h = x.horizontal(xs);
                        let vy = y.vertical(yc);
                        let dyc = y.dim_at(yc);
                        let dyc1 = y.dim_at(Vertex { i: c1, j: b });
                        for p in 0..dx {
                            for q in 0..dy {
                                let mut row = vec![Scalar::zero(); len];
                                // (x·α_c) ⊗ y in block c
                                for p2 in 0..h.rows() {
                                    let e = h.get(p2, p);
                                    if !e.is_zero() {
                                        let idx = offsets[c - 1] + p2 * dyc + q;
                                        row[idx] = &row[idx] + e;
                                    }
                                }
                                // − x ⊗ (α_c·y) in block c+1
                                for q2 in 0..vy.rows() {
                                    let e = vy.get(q2, q);
                                    if !e.is_zero() {
                                        let idx = offsets[c1 - 1] + p * dyc1 + q2;
                                        row[idx] = &row[idx] - e;
                                    }
                                }
                                if row.iter().any(|e| !e.is_zero()) {
                                    rows.push(row);
                                }
                            }
                        }
                    }
                }
                let relations = if rows.is_empty() {
                    ExactMatrix::zeros(0, len).echelon()
                } else {
                    ExactMatrix::from_rows(rows).echelon()
                };
                let free = relations.free_columns();
                Fiber { offsets, len, relations, free }
            })
            .collect();
        TensorSpace { n, fibers }
    }

    fn dims(&self) -> Vec<usize> {
        self.fibers.iter().map(|f| f.free.len()).collect()
    }

    fn fiber(&self, a: usize, b: usize) -> &Fiber {
        &self.fibers[Vertex { i: a, j: b }.id(self.n)]
    }
}

/// `x ⊗_Λ y`.
pub fn tensor(x: &Bimodule, y: &Bimodule) -> Result<Bimodule> {
    if x.n != y.n {
        return Err(Error::MismatchedN(x.n, y.n));
    }
    let n = x.n;
    let space = TensorSpace::new(x, y);
    let dims = space.dims();
    let mut maps = Vec::with_capacity(2 * n * n);
    for id in 0..n * n {
        let v = Vertex::from_id(id, n);
        let (a, b) = (v.i, v.j);
        let src = space.fiber(a, b);
        // vertical: α_a acting on the left factor
        let a1 = residue(a as i64 + 1, n);
        let tgt = space.fiber(a1, b);
        let mut big = ExactMatrix::zeros(tgt.len, src.len);
        for j in 1..=n {
            let vx = x.vertical(Vertex { i: a, j });
            let dy = y.dim_at(Vertex { i: j, j: b });
            if vx.rows() * vx.cols() * dy > 0 {
                big.set_block(tgt.offsets[j - 1], src.offsets[j - 1], &vx.kron(&ExactMatrix::identity(dy)));
            }
        }
        maps.push(src.induced(&big, tgt));
        // horizontal: α_{b-1} acting on the right factor
        let b1 = residue(b as i64 - 1, n);
        let tgt = space.fiber(a, b1);
        let mut big = ExactMatrix::zeros(tgt.len, src.len);
        for j in 1..=n {
            let hy = y.horizontal(Vertex { i: j, j: b });
            let dx = x.dim_at(Vertex { i: a, j });
            if hy.rows() * hy.cols() * dx > 0 {
                big.set_block(tgt.offsets[j - 1], src.offsets[j - 1], &ExactMatrix::identity(dx).kron(hy));
            }
        }
        maps.push(src.induced(&big, tgt));
    }
    Ok(Bimodule::from_rep(n, Representation { dims, maps }))
}

/// `x ⊗ f : x ⊗ source(f) -> x ⊗ target(f)` in the quotient bases chosen by [`tensor`].
pub fn tensor_map(x: &Bimodule, f: &BimoduleMap) -> Result<BimoduleMap> {
    if x.n != f.source.n {
        return Err(Error::MismatchedN(x.n, f.source.n));
    }
    let morphism = tensor_morphism(x, &f.source, &f.target, &f.morphism);
    let source = Arc::new(tensor(x, &f.source)?);
    let target = Arc::new(tensor(x, &f.target)?);
    Ok(BimoduleMap { source, target, morphism })
}

/// The components of `x ⊗ f` for a morphism `f : y -> z`.
pub fn tensor_morphism(x: &Bimodule, y: &Bimodule, z: &Bimodule, f: &Morphism) -> Morphism {
    let n = x.n;
    let sy = TensorSpace::new(x, y);
    let sz = TensorSpace::new(x, z);
    let components = (0..n * n)
        .map(|id| {
            let v = Vertex::from_id(id, n);
            let (a, b) = (v.i, v.j);
            let (src, tgt) = (sy.fiber(a, b), sz.fiber(a, b));
            let mut big = ExactMatrix::zeros(tgt.len, src.len);
            for j in 1..=n {
                let fj = &f.components[Vertex { i: j, j: b }.id(n)];
                let dx = x.dim_at(Vertex { i: a, j });
                if fj.rows() * fj.cols() * dx > 0 {
                    big.set_block(tgt.offsets[j - 1], src.offsets[j - 1], &ExactMatrix::identity(dx).kron(fj));
                }
            }
            src.induced(&big, tgt)
        })
        .collect();
    Morphism { components }
}

/// Dimension of the product space minus the rank of the relation matrix, per vertex.
pub fn expected_dims(x: &Bimodule, y: &Bimodule) -> Vec<usize> {
    TensorSpace::new(x, y).fibers.iter().map(|f| f.len - f.relations.rank()).collect()
}
