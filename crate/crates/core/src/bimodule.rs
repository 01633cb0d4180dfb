//! `Λ_n`-`Λ_n`-bimodules as representations of the torus quiver.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{residue, torus_quiver, NakayamaAlgebra, TorusAlgebra, Vertex};
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::quiver::{self, Morphism, Quiver, Representation};
use crate::scalar::Scalar;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Random attempts made by the isomorphism search before falling back.
const RANDOM_ATTEMPTS: usize = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct Bimodule {
    pub n: usize,
    pub rep: Representation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMap {
    pub source: Arc<Bimodule>,
    pub target: Arc<Bimodule>,
    pub morphism: Morphism,
}

impl Bimodule {
    pub fn zero(n: usize) -> Self {
        Bimodule { n, rep: Representation::zero(&torus_quiver(n)) }
    }

    pub fn from_rep(n: usize, rep: Representation) -> Self {
        debug_assert!(rep.shapes_consistent(&torus_quiver(n)));
        Bimodule { n, rep }
    }

    pub fn quiver(&self) -> Quiver {
        torus_quiver(self.n)
    }

    pub fn total_dim(&self) -> usize {
        self.rep.total_dim()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn dim_at(&self, v: Vertex) -> usize {
        self.rep.dims[v.id(self.n)]
    }

    /// Dimension vector indexed by torus vertex id.
    pub fn dims(&self) -> &[usize] {
        &self.rep.dims
    }

    /// Vertical arrow at `v`: left multiplication by `α_i`.
    pub fn vertical(&self, v: Vertex) -> &ExactMatrix {
        &self.rep.maps[2 * v.id(self.n)]
    }

    /// Horizontal arrow at `v`: right multiplication by `α_{j-1}`.
    pub fn horizontal(&self, v: Vertex) -> &ExactMatrix {
        &self.rep.maps[2 * v.id(self.n) + 1]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n * self.n).map(move |id| Vertex::from_id(id, self.n))
    }

    pub fn support(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.dim_at(v) > 0).collect()
    }

    pub fn satisfies_relations(&self) -> bool {
        let torus = TorusAlgebra::new(self.n).expect("n >= 1");
        self.rep.shapes_consistent(&self.quiver()) && torus.satisfies_relations(&self.rep)
    }

    pub fn direct_sum(parts: &[&Bimodule]) -> Result<Bimodule> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidLabel(String::new(), "empty direct sum has no n".into()));
        };
        let n = first.n;
        if let Some(p) = parts.iter().find(|p| p.n != n) {
            return Err(Error::MismatchedN(n, p.n));
        }
        let reps: Vec<_> = parts.iter().map(|p| &p.rep).collect();
        Ok(Bimodule { n, rep: Representation::direct_sum(&torus_quiver(n), &reps) })
    }

    /// `Λ_n` as a bimodule over itself: `ε_i` sits at `i|i` and `α_i` at `i+1|i`.
    pub fn regular(n: usize) -> Result<Bimodule> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        let mut b = Bimodule::zero(n);
        let mut eps = vec![(0, 0); n];
        let mut alpha = vec![(0, 0); n];
        for i in 1..=n {
            let v = Vertex::new(n, i as i64, i as i64).id(n);
            eps[i - 1] = (v, b.rep.dims[v]);
            b.rep.dims[v] += 1;
        }
        for i in 1..=n {
            let v = Vertex::new(n, i as i64 + 1, i as i64).id(n);
            alpha[i - 1] = (v, b.rep.dims[v]);
            b.rep.dims[v] += 1;
        }
        let q = b.quiver();
        b.rep.maps = q.arrows.iter().map(|&(s, t)| ExactMatrix::zeros(b.rep.dims[t], b.rep.dims[s])).collect();
        for i in 1..=n {
            let (v, e) = eps[i - 1];
            // α_i ε_i = α_i
            let (vt, a) = alpha[i - 1];
            debug_assert_eq!(q.arrows[2 * v].1, vt);
            b.rep.maps[2 * v].set(a, e, Scalar::one());
            // ε_i α_{i-1} = α_{i-1}
            let (vt, a) = alpha[residue(i as i64 - 1, n) - 1];
            debug_assert_eq!(q.arrows[2 * v + 1].1, vt);
            b.rep.maps[2 * v + 1].set(a, e, Scalar::one());
        }
        Ok(b)
    }

    /// The `k`-linear dual with the two actions swapped: `X*(i|j) = X(j|i)*`.
    pub fn dualize(&self) -> Bimodule {
        let n = self.n;
        let q = self.quiver();
        let dims = (0..n * n)
            .map(|id| {
                let v = Vertex::from_id(id, n);
                self.dim_at(Vertex { i: v.j, j: v.i })
            })
            .collect();
        let maps = (0..n * n)
            .flat_map(|id| {
                let v = Vertex::from_id(id, n);
                // (α f)(m) = f(m α): transpose of the horizontal arrow at j|i+1
                let vert = self.horizontal(Vertex::new(n, v.j as i64, v.i as i64 + 1)).transpose();
                // (f α)(m) = f(α m): transpose of the vertical arrow at j-1|i
                let horiz = self.vertical(Vertex::new(n, v.j as i64 - 1, v.i as i64)).transpose();
                [vert, horiz]
            })
            .collect();
        let out = Bimodule { n, rep: Representation { dims, maps } };
        debug_assert!(out.rep.shapes_consistent(&q));
        out
    }

    /// The left module `X ε_c` (column `c` of the torus) as a representation of `Q_n`.
    fn column_module(&self, c: usize) -> Representation {
        let n = self.n;
        let dims = (1..=n).map(|a| self.dim_at(Vertex { i: a, j: c })).collect();
        let maps = (1..=n).map(|a| self.vertical(Vertex { i: a, j: c }).clone()).collect();
        Representation { dims, maps }
    }

    /// Right multiplication by `α_{c-1}` as a left module map `Xε_c -> Xε_{c-1}`.
    fn column_shift(&self, c: usize) -> Morphism {
        let n = self.n;
        Morphism { components: (1..=n).map(|a| self.horizontal(Vertex { i: a, j: c }).clone()).collect() }
    }

    /// The underlying left `Λ_n`-module.
    pub fn left_module(&self) -> Representation {
        let n = self.n;
        let q = NakayamaAlgebra::new(n).expect("n >= 1").quiver();
        let cols: Vec<_> = (1..=n).map(|c| self.column_module(c)).collect();
        let refs: Vec<_> = cols.iter().collect();
        Representation::direct_sum(&q, &refs)
    }

    /// Decomposes the underlying left module into projectives `Λε_i` and simples.
    pub fn restrict_left(&self) -> LeftDecomposition {
        let alg = NakayamaAlgebra::new(self.n).expect("n >= 1");
        let q = alg.quiver();
        let m = self.left_module();
        let mut labels = Vec::new();
        let mut reps = Vec::new();
        for i in 1..=self.n {
            labels.push(LeftModule::Projective(i));
            reps.push(alg.projective(i));
        }
        for i in 1..=self.n {
            labels.push(LeftModule::Simple(i));
            reps.push(alg.simple(i));
        }
        let refs: Vec<_> = reps.iter().collect();
        let peeled = quiver::peel(&q, &m, &refs);
        let mut summands = Vec::new();
        for part in &peeled.parts {
            summands.extend(std::iter::repeat(labels[part.candidate]).take(part.split_pairs.len()));
        }
        summands.sort();
        LeftDecomposition { summands, residual_dim: peeled.residual.total_dim() }
    }

    /// `Hom_Λ(X, Λ_n)` with `(a·φ·b)(m) = φ(m·a)·b`; vertex `c|d` carries
    /// `Hom_Λ(Xε_c, Λε_d)`.
    pub fn hom_to_algebra(&self) -> Bimodule {
        let n = self.n;
        let alg = NakayamaAlgebra::new(n).expect("n >= 1");
        let q = alg.quiver();
        let cols: Vec<_> = (1..=n).map(|c| self.column_module(c)).collect();
        let projs: Vec<_> = (1..=n).map(|d| alg.projective(d)).collect();
        // homs[c-1][d-1] is a basis of Hom(Xε_c, Λε_d) together with its coordinate solver
        let homs: Vec<Vec<(Vec<Morphism>, ExactMatrix)>> = cols
            .iter()
            .map(|x| {
                projs
                    .iter()
                    .map(|p| {
                        let basis = quiver::hom_basis(&q, x, p);
                        let coords = coordinate_matrix(&basis, x, p);
                        (basis, coords)
                    })
                    .collect()
            })
            .collect();
        let mut out = Bimodule::zero(n);
        for id in 0..n * n {
            let v = Vertex::from_id(id, n);
            out.rep.dims[id] = homs[v.i - 1][v.j - 1].0.len();
        }
        let tq = out.quiver();
        out.rep.maps = tq.arrows.iter().map(|&(s, t)| ExactMatrix::zeros(out.rep.dims[t], out.rep.dims[s])).collect();
        for id in 0..n * n {
            let v = Vertex::from_id(id, n);
            let (c, d) = (v.i, v.j);
            let (basis, _) = &homs[c - 1][d - 1];
            if basis.is_empty() {
                continue;
            }
            // vertical: φ ↦ φ ∘ (·α_c) on Xε_{c+1}
            let c1 = residue(c as i64 + 1, n);
            let shift = self.column_shift(c1);
            let (tb, tc) = &homs[c1 - 1][d - 1];
            let vert = ExactMatrix::from_columns(
                tb.len(),
                &basis.iter().map(|phi| coordinates(tc, &phi.compose(&shift))).collect::<Vec<_>>(),
            );
            // horizontal: φ ↦ (·α_{d-1}) ∘ φ into Λε_{d-1}
            let d1 = residue(d as i64 - 1, n);
            let rho = right_arrow(&alg, d);
            let (tb, tc) = &homs[c - 1][d1 - 1];
            let horiz = ExactMatrix::from_columns(
                tb.len(),
                &basis.iter().map(|phi| coordinates(tc, &rho.compose(phi))).collect::<Vec<_>>(),
            );
            out.rep.maps[2 * id] = vert;
            out.rep.maps[2 * id + 1] = horiz;
        }
        out
    }
}

/// `Λε_d -> Λε_{d-1}`, `λ ↦ λ·α_{d-1}`.
fn right_arrow(alg: &NakayamaAlgebra, d: usize) -> Morphism {
    let n = alg.n;
    let src = alg.projective(d);
    let d1 = residue(d as i64 - 1, n);
    let tgt = alg.projective(d1);
    let mut f = Morphism::zero(&src, &tgt);
    // ε_d (vertex d, first basis vector) goes to α_{d-1}, which lies at vertex d
    let row = if n == 1 { 1 } else { 0 };
    f.components[d - 1].set(row, 0, Scalar::one());
    f
}

/// Columns are the flattened basis morphisms; used to read off coordinates.
fn coordinate_matrix(basis: &[Morphism], x: &Representation, y: &Representation) -> ExactMatrix {
    let len: usize = x.dims.iter().zip(&y.dims).map(|(a, b)| a * b).sum();
    let cols: Vec<_> = basis.iter().map(Morphism::flatten).collect();
    ExactMatrix::from_columns(len, &cols)
}

fn coordinates(basis_matrix: &ExactMatrix, f: &Morphism) -> Vec<Scalar> {
    basis_matrix.solve(&f.flatten()).expect("morphism lies in the span of the hom basis")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "vertex", rename_all = "snake_case")]
pub enum LeftModule {
    /// `Λε_i`
    Projective(usize),
    /// the simple module at vertex `i`
    Simple(usize),
}

impl fmt::Display for LeftModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeftModule::Projective(i) => write!(f, "Λε_{i}"),
            LeftModule::Simple(i) => write!(f, "S_{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftDecomposition {
    pub summands: Vec<LeftModule>,
    pub residual_dim: usize,
}

impl LeftDecomposition {
    pub fn is_projective(&self) -> bool {
        self.residual_dim == 0 && self.summands.iter().all(|s| matches!(s, LeftModule::Projective(_)))
    }
}

/// A basis of the space of bimodule homomorphisms `x -> y`.
pub fn hom_basis(x: &Bimodule, y: &Bimodule) -> Result<Vec<BimoduleMap>> {
    if x.n != y.n {
        return Err(Error::MismatchedN(x.n, y.n));
    }
    let (sx, sy) = (Arc::new(x.clone()), Arc::new(y.clone()));
    Ok(quiver::hom_basis(&x.quiver(), &x.rep, &y.rep)
        .into_iter()
        .map(|morphism| BimoduleMap { source: sx.clone(), target: sy.clone(), morphism })
        .collect())
}

pub fn is_isomorphic(x: &Bimodule, y: &Bimodule) -> Result<bool> {
    is_isomorphic_seeded(x, y, DEFAULT_SEED)
}

/// Searches `Hom(x, y)` for an invertible element: basis elements first,
/// then seeded random combinations, then compares Krull–Schmidt decompositions
/// over the catalog.
pub fn is_isomorphic_seeded(x: &Bimodule, y: &Bimodule, seed: u64) -> Result<bool> {
    if x.n != y.n {
        return Err(Error::MismatchedN(x.n, y.n));
    }
    if x.dims() != y.dims() {
        return Ok(false);
    }
    if x.is_zero() {
        return Ok(true);
    }
    let basis = quiver::hom_basis(&x.quiver(), &x.rep, &y.rep);
    if basis.is_empty() {
        return Ok(false);
    }
    if basis.iter().any(Morphism::is_invertible) {
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        if random_combination(&basis, &mut rng).is_invertible() {
            return Ok(true);
        }
    }
    Ok(crate::decompose::same_decomposition(x, y))
}

pub(crate) fn random_combination(basis: &[Morphism], rng: &mut impl Rng) -> Morphism {
    let coeffs: Vec<Scalar> = basis.iter().map(|_| Scalar::from_int(rng.gen_range(-(1 << 20)..=(1 << 20)))).collect();
    Morphism::linear_combination(basis, &coeffs)
}

impl BimoduleMap {
    pub fn new(source: Arc<Bimodule>, target: Arc<Bimodule>, morphism: Morphism) -> Result<Self> {
        if source.n != target.n {
            return Err(Error::MismatchedN(source.n, target.n));
        }
        if !quiver::is_morphism(&source.quiver(), &source.rep, &target.rep, &morphism) {
            return Err(Error::NotAMorphism("family of matrices".into()));
        }
        Ok(BimoduleMap { source, target, morphism })
    }

    pub fn identity(x: Arc<Bimodule>) -> Self {
        let morphism = Morphism::identity(&x.rep);
        BimoduleMap { source: x.clone(), target: x, morphism }
    }

    pub fn zero(source: Arc<Bimodule>, target: Arc<Bimodule>) -> Self {
        let morphism = Morphism::zero(&source.rep, &target.rep);
        BimoduleMap { source, target, morphism }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &BimoduleMap) -> BimoduleMap {
        debug_assert_eq!(self.source.dims(), other.target.dims());
        BimoduleMap {
            source: other.source.clone(),
            target: self.target.clone(),
            morphism: self.morphism.compose(&other.morphism),
        }
    }

    pub fn component(&self, v: Vertex) -> &ExactMatrix {
        &self.morphism.components[v.id(self.source.n)]
    }

    pub fn is_valid(&self) -> bool {
        quiver::is_morphism(&self.source.quiver(), &self.source.rep, &self.target.rep, &self.morphism)
    }

    pub fn is_zero(&self) -> bool {
        self.morphism.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.morphism.is_invertible()
    }
}

/// Sparse JSON form: nonzero vertex dimensions and nonzero-shaped arrow matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleJson {
    pub n: usize,
    pub dims: BTreeMap<String, usize>,
    pub arrows: Vec<ArrowJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub kind: crate::algebra::ArrowKind,
    pub source: String,
    pub matrix: ExactMatrix,
}

fn parse_vertex(s: &str, n: usize) -> Result<Vertex> {
    let bad = || Error::InvalidLabel(s.to_string(), "expected a vertex `i|j`".into());
    let (a, b) = s.split_once('|').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    for x in [a, b] {
        if x == 0 || x > n {
            return Err(Error::IndexOutOfRange(x, n));
        }
    }
    Ok(Vertex { i: a, j: b })
}

impl From<&Bimodule> for BimoduleJson {
    fn from(b: &Bimodule) -> Self {
        let dims = b.vertices().filter(|&v| b.dim_at(v) > 0).map(|v| (v.to_string(), b.dim_at(v))).collect();
        let mut arrows = Vec::new();
        for v in b.vertices() {
            for (kind, m) in [
                (crate::algebra::ArrowKind::Vertical, b.vertical(v)),
                (crate::algebra::ArrowKind::Horizontal, b.horizontal(v)),
            ] {
                if m.rows() > 0 && m.cols() > 0 {
                    arrows.push(ArrowJson { kind, source: v.to_string(), matrix: m.clone() });
                }
            }
        }
        BimoduleJson { n: b.n, dims, arrows }
    }
}

impl TryFrom<BimoduleJson> for Bimodule {
    type Error = Error;

    fn try_from(j: BimoduleJson) -> Result<Bimodule> {
        if j.n == 0 {
            return Err(Error::ZeroRank);
        }
        let n = j.n;
        let mut b = Bimodule::zero(n);
        for (v, d) in &j.dims {
            b.rep.dims[parse_vertex(v, n)?.id(n)] = *d;
        }
        let q = b.quiver();
        b.rep.maps = q.arrows.iter().map(|&(s, t)| ExactMatrix::zeros(b.rep.dims[t], b.rep.dims[s])).collect();
        for a in j.arrows {
            let v = parse_vertex(&a.source, n)?;
            let idx = match a.kind {
                crate::algebra::ArrowKind::Vertical => 2 * v.id(n),
                crate::algebra::ArrowKind::Horizontal => 2 * v.id(n) + 1,
            };
            let m = a.matrix;
            if m.shape() != b.rep.maps[idx].shape() {
                return Err(Error::InvalidLabel(a.source, "arrow matrix has the wrong shape".into()));
            }
            b.rep.maps[idx] = m;
        }
        if !b.satisfies_relations() {
            return Err(Error::InvalidLabel("bimodule".into(), "relations are violated".into()));
        }
        Ok(b)
    }
}

impl Serialize for Bimodule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BimoduleJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bimodule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BimoduleJson::deserialize(d)?;
        Bimodule::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bimodule(n={}, dims={:?})", self.n, self.rep.dims)
    }
}
