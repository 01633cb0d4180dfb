//! Cell birepresentations of the string cells `J_k`, their localizations by
//! contracting arrows, and the resulting classification.
//!
//! A birepresentation here is a finitary category whose quiver is a disjoint
//! union of `A_2` components `M_i -> N_i` and `A_1` components, together with
//! the action of every generator `U ∈ J_k`: an action matrix on objects and
//! the images of the arrows, written in the hom bases of the category. Every
//! hom space is at most one-dimensional, spanned by an identity or an arrow.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bimodule::{random_combination, Bimodule, DEFAULT_SEED};
use crate::catalog::{Family, StringLabel};
use crate::decompose::{cell_of, Catalog, CellTag, DecompositionReport};
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::quiver::{self, Morphism};
use crate::scalar::Scalar;
use crate::tensor::{tensor, tensor_morphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ObjectLabel {
    /// `N^(k)_{i|j}`
    N(usize),
    /// `M^(k)_{i|j}`
    M(usize),
    /// the common object of a contracted component
    Merged(usize),
}

impl ObjectLabel {
    pub fn component(&self) -> usize {
        match *self {
            ObjectLabel::N(i) | ObjectLabel::M(i) | ObjectLabel::Merged(i) => i,
        }
    }
}

impl fmt::Display for ObjectLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectLabel::N(i) => write!(f, "N_{i}"),
            ObjectLabel::M(i) => write!(f, "M_{i}"),
            ObjectLabel::Merged(i) => write!(f, "NM_{i}"),
        }
    }
}

/// `α_i : M_i -> N_i`, as object indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub component: usize,
    pub source: usize,
    pub target: usize,
}

/// The image of an arrow under a generator: `coefficients[q][p]` is the
/// coordinate of the component `source[p] -> target[q]` in the basis of that
/// hom space (an identity or an arrow).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowImage {
    pub arrow: usize,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub coefficients: ExactMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorAction {
    pub label: StringLabel,
    /// `matrix[y][x]` is the multiplicity of `y` in the image of `x`.
    pub matrix: ExactMatrix,
    pub arrow_images: Vec<ArrowImage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitaryBirep {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub objects: Vec<ObjectLabel>,
    pub arrows: Vec<Arrow>,
    /// Components contracted to `A_1`.
    pub contracted: Vec<usize>,
    pub actions: Vec<GeneratorAction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizationSpec {
    pub contract: BTreeSet<usize>,
}

impl LocalizationSpec {
    pub fn new(contract: impl IntoIterator<Item = usize>) -> Self {
        LocalizationSpec { contract: contract.into_iter().collect() }
    }
}

/// The generators of `J_k`: all `U^(k)_{r|s}`, `U ∈ {W, S, N, M}`.
pub fn generators(n: usize, k: usize) -> Vec<StringLabel> {
    Family::STRINGS
        .iter()
        .flat_map(|&f| {
            (1..=n as i64).flat_map(move |r| (1..=n as i64).map(move |s| StringLabel::string(f, n, r, s, k)))
        })
        .collect()
}

/// Hom spaces between objects modulo maps factoring through J-greater catalog members.
struct QuotientHoms {
    /// Per ordered pair `(x, y)`: ambient basis, the chosen quotient basis
    /// element (if the quotient is nonzero) and a matrix whose columns are the
    /// flattened quotient basis element followed by a spanning set of the ideal.
    spaces: HashMap<(usize, usize), QuotientSpace>,
}

struct QuotientSpace {
    dim: usize,
    basis: Option<Morphism>,
    coords: ExactMatrix,
}

impl QuotientSpace {
    /// Coordinate of `f` on the quotient basis element.
    fn coordinate(&self, f: &Morphism) -> Result<Scalar> {
        if self.dim == 0 {
            return Ok(Scalar::zero());
        }
        let sol = self
            .coords
            .solve(&f.flatten())
            .ok_or_else(|| Error::CartanMismatch("component outside the hom space".into()))?;
        Ok(sol[0].clone())
    }
}

impl QuotientHoms {
    fn compute(objects: &[Bimodule], greater: &[&Bimodule], seed: u64) -> Result<Self> {
        let q = objects[0].quiver();
        let into: Vec<Vec<Vec<Morphism>>> = objects
            .iter()
            .map(|x| greater.iter().map(|z| quiver::hom_basis(&q, &x.rep, &z.rep)).collect())
            .collect();
        let out_of: Vec<Vec<Vec<Morphism>>> = objects
            .iter()
            .map(|y| greater.iter().map(|z| quiver::hom_basis(&q, &z.rep, &y.rep)).collect())
            .collect();
        let pairs: Vec<(usize, usize)> = (0..objects.len()).cartesian_product(0..objects.len()).collect();
        let spaces = pairs
            .par_iter()
            .map(|&(x, y)| {
                let (sx, sy) = (&objects[x], &objects[y]);
                let bound = sx.total_dim() + sy.total_dim();
                let ambient = quiver::hom_basis(&q, &sx.rep, &sy.rep);
                let len: usize = sx.rep.dims.iter().zip(&sy.rep.dims).map(|(a, b)| a * b).sum();
                let mut ideal: Vec<Vec<Scalar>> = Vec::new();
                for (zi, z) in greater.iter().enumerate() {
                    if z.total_dim() > bound {
                        continue;
                    }
                    for f in &into[x][zi] {
                        for g in &out_of[y][zi] {
                            ideal.push(g.compose(f).flatten());
                        }
                    }
                }
                let ideal_rank = if ideal.is_empty() { 0 } else { ExactMatrix::from_columns(len, &ideal).rank() };
                let dim = ambient.len() - ideal_rank;
                let basis = if x == y {
                    Some(Morphism::identity(&sx.rep))
                } else if dim > 0 {
                    Some(choose_class_representative(&ambient, &ideal, len, sy, seed))
                } else {
                    None
                };
                let mut cols = Vec::with_capacity(ideal.len() + 1);
                if let Some(b) = &basis {
                    cols.push(b.flatten());
                }
                cols.extend(ideal);
                let coords = ExactMatrix::from_columns(len, &cols);
                ((x, y), QuotientSpace { dim, basis, coords })
            })
            .collect();
        Ok(QuotientHoms { spaces })
    }

    fn space(&self, x: usize, y: usize) -> &QuotientSpace {
        &self.spaces[&(x, y)]
    }
}

/// An element of the ambient hom space outside the ideal, preferring epimorphisms.
fn choose_class_representative(
    ambient: &[Morphism],
    ideal: &[Vec<Scalar>],
    len: usize,
    y: &Bimodule,
    seed: u64,
) -> Morphism {
    let ideal_rank = if ideal.is_empty() { 0 } else { ExactMatrix::from_columns(len, ideal).rank() };
    let outside = |f: &Morphism| {
        let mut cols = ideal.to_vec();
        cols.push(f.flatten());
        ExactMatrix::from_columns(len, &cols).rank() > ideal_rank
    };
    let is_epi = |f: &Morphism| f.components.iter().zip(&y.rep.dims).all(|(c, &d)| c.rank() == d);
    if let Some(f) = ambient.iter().find(|f| outside(f) && is_epi(f)) {
        return f.clone();
    }
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let f = random_combination(ambient, &mut rng);
        if outside(&f) && is_epi(&f) {
            return f;
        }
    }
    ambient.iter().find(|f| outside(f)).cloned().expect("quotient is nonzero")
}

fn normalize_first_nonzero(m: &ExactMatrix) -> ExactMatrix {
    match m.entries().iter().find(|e| !e.is_zero()) {
        Some(first) => m.scale(&first.recip().expect("nonzero")),
        None => m.clone(),
    }
}

/// The cell birepresentation of `J_k` on the left cell `{N_{i|j}, M_{i|j}}`.
pub fn cell_birep(n: usize, k: usize, j: usize) -> Result<FinitaryBirep> {
    cell_birep_seeded(n, k, j, DEFAULT_SEED)
}

pub fn cell_birep_seeded(n: usize, k: usize, j: usize, seed: u64) -> Result<FinitaryBirep> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    if k == 0 {
        return Err(Error::ZeroValleys);
    }
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange(j, n));
    }
    let catalog = Catalog::new(n, k)?;
    let apex = CellTag::Valleys(k);
    let mut objects = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(2 * n);
    for i in 1..=n {
        objects.push(ObjectLabel::N(i));
        labels.push(StringLabel::string(Family::N, n, i as i64, j as i64, k));
    }
    for i in 1..=n {
        objects.push(ObjectLabel::M(i));
        labels.push(StringLabel::string(Family::M, n, i as i64, j as i64, k));
    }
    let object_index: HashMap<StringLabel, usize> = labels.iter().enumerate().map(|(p, l)| (*l, p)).collect();
    let bimods: Vec<Bimodule> = labels.iter().map(|l| catalog.bimodule(l)).collect();
    let greater: Vec<&Bimodule> =
        catalog.entries().iter().filter(|(l, _)| cell_of(l).is_greater_than(&apex)).map(|(_, b)| b).collect();
    let homs = QuotientHoms::compute(&bimods, &greater, seed)?;

    // Cartan data must be that of n disjoint A_2 quivers M_i -> N_i
    for x in 0..2 * n {
        for y in 0..2 * n {
            let expect = usize::from(x == y || (x == y + n));
            let got = homs.space(x, y).dim;
            if got != expect {
                return Err(Error::CartanMismatch(format!(
                    "dim Hom({}, {}) = {got}, expected {expect}",
                    objects[x], objects[y]
                )));
            }
        }
    }
    let arrows: Vec<Arrow> = (0..n).map(|i| Arrow { component: i + 1, source: n + i, target: i }).collect();
    let arrow_maps: Vec<Morphism> =
        arrows.iter().map(|a| homs.space(a.source, a.target).basis.clone().expect("nonzero")).collect();

    let gens = generators(n, k);
    let gen_bimods: Vec<Bimodule> = gens.iter().map(|l| catalog.bimodule(l)).collect();
    // decompositions of U ⊗ X for every generator and object
    let decomps: Vec<Vec<DecompositionReport>> = gen_bimods
        .par_iter()
        .map(|u| bimods.iter().map(|x| catalog.decompose(&tensor(u, x)?)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    let apex_summands = |r: &DecompositionReport| -> Result<Vec<(usize, usize)>> {
        if let Some(res) = &r.residual {
            return Err(Error::CartanMismatch(format!("product left a residual of dimension {}", res.total_dim())));
        }
        r.summands
            .iter()
            .enumerate()
            .filter(|(_, s)| cell_of(&s.label) == apex)
            .map(|(p, s)| {
                object_index
                    .get(&s.label)
                    .map(|&o| (p, o))
                    .ok_or_else(|| Error::CartanMismatch(format!("{} leaves the left cell", s.label)))
            })
            .collect()
    };

    let actions = gens
        .iter()
        .enumerate()
        .map(|(g, label)| {
            let mut matrix = ExactMatrix::zeros(2 * n, 2 * n);
            for x in 0..2 * n {
                for (_, y) in apex_summands(&decomps[g][x])? {
                    let v = matrix.get(y, x) + &Scalar::one();
                    matrix.set(y, x, v);
                }
            }
            let mut arrow_images = Vec::with_capacity(arrows.len());
            for (a, arrow) in arrows.iter().enumerate() {
                let src = &decomps[g][arrow.source];
                let tgt = &decomps[g][arrow.target];
                let ps = apex_summands(src)?;
                let qs = apex_summands(tgt)?;
                let image = tensor_morphism(&gen_bimods[g], &bimods[arrow.source], &bimods[arrow.target], &arrow_maps[a]);
                let mut coefficients = ExactMatrix::zeros(qs.len(), ps.len());
                for (c, &(p, yp)) in ps.iter().enumerate() {
                    for (r, &(q, yq)) in qs.iter().enumerate() {
                        let comp = tgt.summands[q].retraction.compose(&image).compose(&src.summands[p].section);
                        coefficients.set(r, c, homs.space(yp, yq).coordinate(&comp)?);
                    }
                }
                arrow_images.push(ArrowImage {
                    arrow: a,
                    source: ps.iter().map(|&(_, o)| o).collect(),
                    target: qs.iter().map(|&(_, o)| o).collect(),
                    coefficients: normalize_first_nonzero(&coefficients),
                });
            }
            Ok(GeneratorAction { label: *label, matrix, arrow_images })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FinitaryBirep { n, k, j, objects, arrows, contracted: Vec::new(), actions })
}

impl FinitaryBirep {
    pub fn rank(&self) -> usize {
        self.objects.len()
    }

    /// `dim Hom(x, y)` for object indices.
    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        usize::from(x == y || self.arrows.iter().any(|a| a.source == x && a.target == y))
    }

    /// `cartan[y][x] = dim Hom(x, y)`.
    pub fn cartan(&self) -> ExactMatrix {
        let r = self.rank();
        let mut c = ExactMatrix::zeros(r, r);
        for x in 0..r {
            for y in 0..r {
                c.set(y, x, Scalar::from(self.hom_dim(x, y)));
            }
        }
        c
    }

    pub fn action(&self, u: &StringLabel) -> Result<&GeneratorAction> {
        self.actions.iter().find(|a| &a.label == u).ok_or_else(|| Error::OutsideApex(u.to_string()))
    }

    /// `[𝐌 u]` over the object order `N_1..N_n, M_1..M_n` (merged objects in the `N` slot).
    pub fn action_matrix(&self, u: &StringLabel) -> Result<ExactMatrix> {
        Ok(self.action(u)?.matrix.clone())
    }

    /// `Σ m_u [u]` for a multiset of generators.
    pub fn action_of_sum(&self, parts: &BTreeMap<StringLabel, usize>) -> Result<ExactMatrix> {
        let mut acc = ExactMatrix::zeros(self.rank(), self.rank());
        for (u, &m) in parts {
            acc = &acc + &self.action_matrix(u)?.scale(&Scalar::from(m));
        }
        Ok(acc)
    }

    /// `[F]` for `F` the sum of all generators.
    pub fn f_matrix(&self) -> ExactMatrix {
        let mut acc = ExactMatrix::zeros(self.rank(), self.rank());
        for a in &self.actions {
            acc = &acc + &a.matrix;
        }
        acc
    }

    /// Object indices of component `i`: `[N_i, M_i]`, or the merged object.
    pub fn component_objects(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.rank()).filter(|&o| self.objects[o].component() == i).collect();
        out.sort_by_key(|&o| self.objects[o]);
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.rank() > 0 && self.f_matrix().entries().iter().all(|e| *e >= Scalar::one())
    }

    /// The smallest stable ideal containing the arrow `arrow`, as the sets of
    /// objects whose identity it contains and of arrows it contains.
    pub fn stable_ideal_closure(&self, arrow: usize) -> (Vec<bool>, Vec<bool>) {
        let mut ids = vec![false; self.rank()];
        let mut arrs = vec![false; self.arrows.len()];
        arrs[arrow] = true;
        loop {
            let before = (ids.clone(), arrs.clone());
            // composition with all morphisms: an identity absorbs every arrow at its object
            for (a, ar) in self.arrows.iter().enumerate() {
                if ids[ar.source] || ids[ar.target] {
                    arrs[a] = true;
                }
            }
            for act in &self.actions {
                for x in 0..self.rank() {
                    if ids[x] {
                        for y in 0..self.rank() {
                            if !act.matrix.get(y, x).is_zero() {
                                ids[y] = true;
                            }
                        }
                    }
                }
                for img in &act.arrow_images {
                    if !arrs[img.arrow] {
                        continue;
                    }
                    for (p, &s) in img.source.iter().enumerate() {
                        for (q, &t) in img.target.iter().enumerate() {
                            if img.coefficients.get(q, p).is_zero() {
                                continue;
                            }
                            if s == t {
                                ids[s] = true;
                            } else if let Some(a) = self.arrows.iter().position(|ar| ar.source == s && ar.target == t) {
                                arrs[a] = true;
                            }
                        }
                    }
                }
            }
            if (ids.clone(), arrs.clone()) == before {
                return (ids, arrs);
            }
        }
    }

    /// No nonzero proper stable ideal: every radical basis morphism generates
    /// an ideal containing an identity.
    pub fn is_simple(&self) -> bool {
        (0..self.arrows.len()).all(|a| self.stable_ideal_closure(a).0.iter().any(|&b| b))
    }

    pub fn is_simple_transitive(&self) -> bool {
        self.is_transitive() && self.is_simple()
    }

    /// Components `i` where `M_{i|s}` and `N_{i|s}` act identically for all `s`.
    pub fn fingerprint(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&i| {
                (1..=self.n as i64).all(|s| {
                    let m = StringLabel::string(Family::M, self.n, i as i64, s, self.k);
                    let nn = StringLabel::string(Family::N, self.n, i as i64, s, self.k);
                    matches!((self.action_matrix(&m), self.action_matrix(&nn)), (Ok(a), Ok(b)) if a == b)
                })
            })
            .collect()
    }

    /// Checks that contracting the arrows of `spec` is possible: every
    /// component of the image of a contracted arrow is an identity component,
    /// a contracted arrow, or zero.
    pub fn check_stable(&self, spec: &LocalizationSpec) -> Result<()> {
        for act in &self.actions {
            for img in &act.arrow_images {
                if !spec.contract.contains(&self.arrows[img.arrow].component) {
                    continue;
                }
                for (p, &s) in img.source.iter().enumerate() {
                    for (q, &t) in img.target.iter().enumerate() {
                        if img.coefficients.get(q, p).is_zero() || s == t {
                            continue;
                        }
                        let ok = self
                            .arrows
                            .iter()
                            .any(|ar| ar.source == s && ar.target == t && spec.contract.contains(&ar.component));
                        if !ok {
                            return Err(Error::Unstable(format!(
                                "{} sends α_{} to a component {} -> {}",
                                act.label, self.arrows[img.arrow].component, self.objects[s], self.objects[t]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Contracts the components in `spec` to `A_1`.
    pub fn localize(&self, spec: &LocalizationSpec) -> Result<FinitaryBirep> {
        for &i in &spec.contract {
            if i == 0 || i > self.n {
                return Err(Error::IndexOutOfRange(i, self.n));
            }
        }
        let spec = LocalizationSpec {
            contract: spec
                .contract
                .iter()
                .copied()
                .filter(|i| self.arrows.iter().any(|a| a.component == *i))
                .collect(),
        };
        if spec.contract.is_empty() {
            return Ok(self.clone());
        }
        self.check_stable(&spec)?;

        let merged = |o: &ObjectLabel| match *o {
            ObjectLabel::N(i) | ObjectLabel::M(i) if spec.contract.contains(&i) => ObjectLabel::Merged(i),
            other => other,
        };
        let mut objects: Vec<ObjectLabel> = Vec::new();
        for o in &self.objects {
            let m = merged(o);
            if !objects.contains(&m) {
                objects.push(m);
            }
        }
        objects.sort_by_key(|o| match *o {
            ObjectLabel::N(i) | ObjectLabel::Merged(i) => (0, i),
            ObjectLabel::M(i) => (1, i),
        });
        let new_index: Vec<usize> =
            self.objects.iter().map(|o| objects.iter().position(|p| *p == merged(o)).unwrap()).collect();
        let r = objects.len();
        // one old representative column per new object
        let representative: Vec<usize> = (0..r).map(|y| new_index.iter().position(|&p| p == y).unwrap()).collect();

        let arrows: Vec<Arrow> = self
            .arrows
            .iter()
            .filter(|a| !spec.contract.contains(&a.component))
            .map(|a| Arrow { component: a.component, source: new_index[a.source], target: new_index[a.target] })
            .collect();
        let arrow_index: HashMap<usize, usize> = self
            .arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| !spec.contract.contains(&a.component))
            .enumerate()
            .map(|(new, (old, _))| (old, new))
            .collect();

        let mut actions = Vec::with_capacity(self.actions.len());
        for act in &self.actions {
            let mut rows = ExactMatrix::zeros(r, self.rank());
            for y in 0..self.rank() {
                for x in 0..self.rank() {
                    let v = rows.get(new_index[y], x) + act.matrix.get(y, x);
                    rows.set(new_index[y], x, v);
                }
            }
            for x in 0..self.rank() {
                if rows.column(x) != rows.column(representative[new_index[x]]) {
                    return Err(Error::Unstable(format!(
                        "{} acts differently on {} and its contracted partner",
                        act.label, self.objects[x]
                    )));
                }
            }
            let matrix = rows.submatrix(&(0..r).collect::<Vec<_>>(), &representative);
            let mut arrow_images = Vec::new();
            for img in &act.arrow_images {
                let source: Vec<usize> = img.source.iter().map(|&o| new_index[o]).collect();
                let target: Vec<usize> = img.target.iter().map(|&o| new_index[o]).collect();
                match arrow_index.get(&img.arrow) {
                    Some(&a) => arrow_images.push(ArrowImage {
                        arrow: a,
                        source,
                        target,
                        coefficients: normalize_first_nonzero(&img.coefficients),
                    }),
                    None => {
                        // a contracted arrow must become invertible
                        if source != target || !img.coefficients.is_invertible() {
                            return Err(Error::Unstable(format!(
                                "{} does not send α_{} to an isomorphism after contraction",
                                act.label, self.arrows[img.arrow].component
                            )));
                        }
                    }
                }
            }
            actions.push(GeneratorAction { label: act.label, matrix, arrow_images });
        }
        let mut contracted: Vec<usize> = self.contracted.iter().chain(&spec.contract).copied().collect();
        contracted.sort();
        contracted.dedup();
        Ok(FinitaryBirep { n: self.n, k: self.k, j: self.j, objects, arrows, contracted, actions })
    }

    /// Disjoint union of two birepresentations of the same `J_k` (never transitive).
    pub fn disjoint_union(&self, other: &FinitaryBirep) -> Result<FinitaryBirep> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::MismatchedN(self.n, other.n));
        }
        let shift = self.rank();
        let mut objects = self.objects.clone();
        objects.extend(other.objects.iter().copied());
        let mut arrows = self.arrows.clone();
        arrows.extend(other.arrows.iter().map(|a| Arrow {
            component: a.component,
            source: a.source + shift,
            target: a.target + shift,
        }));
        let actions = self
            .actions
            .iter()
            .map(|a| {
                let b = other.action(&a.label)?;
                let mut arrow_images = a.arrow_images.clone();
                arrow_images.extend(b.arrow_images.iter().map(|img| ArrowImage {
                    arrow: img.arrow + self.arrows.len(),
                    source: img.source.iter().map(|o| o + shift).collect(),
                    target: img.target.iter().map(|o| o + shift).collect(),
                    coefficients: img.coefficients.clone(),
                }));
                Ok(GeneratorAction {
                    label: a.label,
                    matrix: ExactMatrix::block_diagonal(&[a.matrix.clone(), b.matrix.clone()]),
                    arrow_images,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinitaryBirep { n: self.n, k: self.k, j: self.j, objects, arrows, contracted: Vec::new(), actions })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationEntry {
    #[serde(rename = "I")]
    pub contract: Vec<usize>,
    pub rank: usize,
    pub simple_transitive: bool,
    pub fingerprint: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub k: usize,
    pub entries: Vec<ClassificationEntry>,
    pub counts: BTreeMap<usize, usize>,
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

impl ClassificationReport {
    /// `counts(n + j) = C(n, j)` for `j = 0..=n`, and nothing else.
    pub fn counts_match(&self) -> bool {
        let expect: BTreeMap<usize, usize> = (0..=self.n).map(|j| (self.n + j, binomial(self.n, j))).collect();
        self.counts == expect
    }

    pub fn fingerprints_distinct(&self) -> bool {
        self.entries.iter().map(|e| &e.fingerprint).all_unique()
    }

    pub fn all_simple_transitive(&self) -> bool {
        self.entries.iter().all(|e| e.simple_transitive)
    }

    pub fn ranks_bounded(&self) -> bool {
        self.entries.iter().all(|e| self.n <= e.rank && e.rank <= 2 * self.n)
    }

    pub fn is_ok(&self) -> bool {
        self.entries.len() == 1 << self.n
            && self.counts_match()
            && self.fingerprints_distinct()
            && self.all_simple_transitive()
            && self.ranks_bounded()
    }
}

/// Localizes the cell birepresentation at every subset of components.
pub fn classify(n: usize, k: usize) -> Result<ClassificationReport> {
    classify_seeded(n, k, DEFAULT_SEED)
}

pub fn classify_seeded(n: usize, k: usize, seed: u64) -> Result<ClassificationReport> {
    classify_from(&cell_birep_seeded(n, k, 1, seed)?)
}

pub fn classify_from(base: &FinitaryBirep) -> Result<ClassificationReport> {
    let n = base.n;
    let entries = (0..n)
        .map(|i| i + 1)
        .powerset()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|subset| {
            let b = base.localize(&LocalizationSpec::new(subset.iter().copied()))?;
            Ok(ClassificationEntry {
                contract: subset.clone(),
                rank: b.rank(),
                simple_transitive: b.is_simple_transitive(),
                fingerprint: b.fingerprint(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = BTreeMap::new();
    for e in &entries {
        *counts.entry(e.rank).or_insert(0) += 1;
    }
    Ok(ClassificationReport { n, k: base.k, entries, counts })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: BTreeMap<String, bool>,
    pub failures: Vec<String>,
}

impl VerificationReport {
    fn record(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let entry = self.checks.entry(name.to_string()).or_insert(true);
        *entry &= ok;
        if !ok {
            self.failures.push(format!("{name}: {}", detail()));
        }
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The expected block of `[U_{r|s}]` in rows of component `r`, columns of `s`:
/// every column is the indicator of `N_r` (for `W`, `N`) or `M_r` (for `S`,
/// `M`), or of the merged object.
fn expected_block(family: Family, rows: usize, cols: usize) -> ExactMatrix {
    let hit = if rows == 1 || matches!(family, Family::W | Family::N) { 0 } else { 1 };
    let mut m = ExactMatrix::zeros(rows, cols);
    for c in 0..cols {
        m.set(hit, c, Scalar::one());
    }
    m
}

/// Checks the constraints on action matrices: `[F]² = 4n[F]`, trace `4n`,
/// positivity, and the diagonal and off-diagonal block forms.
pub fn verify_block_structure(b: &FinitaryBirep) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let n = b.n;
    let four_n = Scalar::from(4 * n);
    let f = b.f_matrix();
    rep.record("f_squared", &f * &f == f.scale(&four_n), || format!("[F]^2 != 4n[F] for {f}"));
    rep.record("trace", f.trace() == four_n, || format!("trace {} != {}", f.trace(), four_n));
    rep.record("positive", f.entries().iter().all(|e| *e >= Scalar::one()), || "[F] has a zero entry".into());
    let comps: Vec<Vec<usize>> = (1..=n).map(|i| b.component_objects(i)).collect();
    for i in 1..=n {
        let a = f.submatrix(&comps[i - 1], &comps[i - 1]);
        rep.record("diagonal_f_blocks", &a * &a == a.scale(&Scalar::from(4)), || {
            format!("A_{{{i}|{i}}}^2 != 4 A_{{{i}|{i}}}")
        });
    }
    for act in &b.actions {
        let (r, s) = (act.label.i, act.label.j);
        let block = act.matrix.submatrix(&comps[r - 1], &comps[s - 1]);
        let expect = expected_block(act.label.family, comps[r - 1].len(), comps[s - 1].len());
        let name = if r == s { "diagonal_blocks" } else { "off_diagonal_blocks" };
        rep.record(name, block == expect, || format!("A_{{{r}|{s}}}({}) = {block}, expected {expect}", act.label.family));
        let mut rest = act.matrix.clone();
        for &y in &comps[r - 1] {
            for &x in &comps[s - 1] {
                rest.set(y, x, Scalar::zero());
            }
        }
        rep.record("outside_blocks_zero", rest.is_zero(), || {
            format!("{} has entries outside block ({r}, {s})", act.label)
        });
    }
    rep
}

/// Checks `[N_{i|j}] = [W_{i|j}]`, `[S_{i|j}] = [M_{i|j}]`, and that each
/// component is of type `A_1` exactly when contracted, with a one-dimensional
/// `Hom(M_i, N_i)` otherwise.
pub fn verify_adjunction_consequences(b: &FinitaryBirep) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let n = b.n;
    for i in 1..=n as i64 {
        for j in 1..=n as i64 {
            let get = |f| b.action_matrix(&StringLabel::string(f, n, i, j, b.k)).ok();
            rep.record("n_equals_w", get(Family::N) == get(Family::W), || format!("[N_{i}|{j}] != [W_{i}|{j}]"));
            rep.record("s_equals_m", get(Family::S) == get(Family::M), || format!("[S_{i}|{j}] != [M_{i}|{j}]"));
        }
    }
    for i in 1..=n {
        let objs = b.component_objects(i);
        let contracted = b.contracted.contains(&i);
        if contracted {
            rep.record("contracted_is_a1", objs.len() == 1 && b.hom_dim(objs[0], objs[0]) == 1, || {
                format!("component {i} is not of type A_1")
            });
        } else {
            let ok = objs.len() == 2 && b.hom_dim(objs[1], objs[0]) == 1 && b.hom_dim(objs[0], objs[1]) == 0;
            rep.record("uncontracted_is_a2", ok, || format!("component {i} is not M_{i} -> N_{i}"));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(rows)
    }

    #[test]
    fn n1_action_matrices() {
        let b = cell_birep(1, 1, 1).unwrap();
        assert_eq!(b.rank(), 2);
        let nn = StringLabel::string(Family::N, 1, 1, 1, 1);
        let mm = StringLabel::string(Family::M, 1, 1, 1, 1);
        assert_eq!(b.action_matrix(&nn).unwrap(), m(&[&[1, 1], &[0, 0]]));
        assert_eq!(b.action_matrix(&mm).unwrap(), m(&[&[0, 0], &[1, 1]]));
        assert!(b.is_simple_transitive());
        let l = b.localize(&LocalizationSpec::new([1])).unwrap();
        assert_eq!(l.rank(), 1);
        assert!(l.is_simple_transitive());
        assert_eq!(l.action_matrix(&nn).unwrap(), m(&[&[1]]));
    }

    #[test]
    fn n2_f_matrix() {
        let b = cell_birep(2, 1, 1).unwrap();
        let f = b.f_matrix();
        assert!(f.entries().iter().all(|e| *e >= Scalar::one()));
        assert_eq!(&f * &f, f.scale(&Scalar::from(8)));
        for i in 1..=2 {
            let nii = b.action_matrix(&StringLabel::string(Family::N, 2, i, i, 1)).unwrap();
            assert_eq!(&nii * &nii, nii);
            let ones = (0..4).filter(|&d| nii.get(d, d).is_one()).count();
            assert_eq!(ones, 1);
        }
        let u = b.action_matrix(&StringLabel::string(Family::S, 2, 1, 2, 1)).unwrap();
        assert!((&u * &u).is_zero());
        assert!(b.action_matrix(&StringLabel::string(Family::S, 2, 1, 2, 2)).is_err());
    }

    #[test]
    fn middle_case_blocks() {
        let b = cell_birep(2, 1, 1).unwrap().localize(&LocalizationSpec::new([1])).unwrap();
        let a = |f, i: usize, j: usize| {
            let mat = b.action_matrix(&StringLabel::string(f, 2, i as i64, j as i64, 1)).unwrap();
            mat.submatrix(&b.component_objects(i), &b.component_objects(j))
        };
        assert_eq!(a(Family::N, 1, 1), m(&[&[1]]));
        assert_eq!(a(Family::N, 2, 2), m(&[&[1, 1], &[0, 0]]));
        assert_eq!(a(Family::N, 1, 2), m(&[&[1, 1]]));
        assert_eq!(a(Family::N, 2, 1), m(&[&[1], &[0]]));
        assert_eq!(a(Family::S, 2, 1), m(&[&[0], &[1]]));
        assert!(verify_block_structure(&b).is_ok());
    }

    #[test]
    fn unstable_collections_are_rejected() {
        let b = cell_birep(2, 1, 1).unwrap();
        assert!(b.check_stable(&LocalizationSpec::new([1, 2])).is_ok());
        assert!(matches!(b.localize(&LocalizationSpec::new([3])), Err(Error::IndexOutOfRange(3, 2))));
    }

    #[test]
    fn disjoint_union_is_not_transitive() {
        let b = cell_birep(1, 1, 1).unwrap();
        let d = b.disjoint_union(&b).unwrap();
        assert_eq!(d.rank(), 4);
        assert!(!d.is_transitive());
        assert!(!d.is_simple_transitive());
    }

    #[test]
    fn killing_arrow_images_breaks_simplicity() {
        let mut b = cell_birep(2, 1, 1).unwrap();
        assert!(b.is_simple());
        for act in &mut b.actions {
            for img in &mut act.arrow_images {
                img.coefficients = ExactMatrix::zeros(img.coefficients.rows(), img.coefficients.cols());
            }
        }
        assert!(b.is_transitive());
        assert!(!b.is_simple());
        let (ids, arrs) = b.stable_ideal_closure(0);
        assert!(ids.iter().all(|x| !x));
        assert_eq!(arrs, vec![true, false]);
    }

    #[test]
    fn classification_small() {
        let r = classify(1, 1).unwrap();
        assert_eq!(r.counts, BTreeMap::from([(1, 1), (2, 1)]));
        assert!(r.is_ok());
        let r = classify(2, 1).unwrap();
        assert_eq!(r.counts, BTreeMap::from([(2, 1), (3, 2), (4, 1)]));
        assert!(r.is_ok());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(cell_birep(2, 0, 1).unwrap_err(), Error::ZeroValleys);
        assert_eq!(cell_birep(2, 1, 3).unwrap_err(), Error::IndexOutOfRange(3, 2));
        assert_eq!(binomial(3, 2), 3);
    }
}
