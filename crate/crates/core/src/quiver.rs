//! Finite quivers, their representations and the linear algebra of
//! homomorphisms between representations.
//!
//! This layer knows nothing about Nakayama algebras: bimodules are
//! representations of the torus quiver and one-sided modules are
//! representations of the cyclic quiver, and both go through the code here.

use crate::linalg::{sparse_kernel, ExactMatrix, Vector};
use crate::scalar::Scalar;

/// A quiver with vertices `0..vertex_count` and arrows `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertex_count: usize,
    pub arrows: Vec<(usize, usize)>,
}

/// A representation: a vector space per vertex and a matrix per arrow,
/// `maps[a]` of shape `dims[target] x dims[source]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub maps: Vec<ExactMatrix>,
}

/// A family of linear maps, one per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub components: Vec<ExactMatrix>,
}

impl Representation {
    pub fn zero(quiver: &Quiver) -> Self {
        Representation {
            dims: vec![0; quiver.vertex_count],
            maps: vec![ExactMatrix::zeros(0, 0); quiver.arrows.len()],
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn shapes_consistent(&self, quiver: &Quiver) -> bool {
        self.dims.len() == quiver.vertex_count
            && self.maps.len() == quiver.arrows.len()
            && quiver
                .arrows
                .iter()
                .zip(&self.maps)
                .all(|(&(s, t), m)| m.shape() == (self.dims[t], self.dims[s]))
    }

    pub fn direct_sum(quiver: &Quiver, parts: &[&Representation]) -> Self {
        let dims = (0..quiver.vertex_count)
            .map(|v| parts.iter().map(|p| p.dims[v]).sum())
            .collect();
        let maps = (0..quiver.arrows.len())
            .map(|a| {
                let blocks: Vec<_> = parts.iter().map(|p| p.maps[a].clone()).collect();
                ExactMatrix::block_diagonal(&blocks)
            })
            .collect();
        Representation { dims, maps }
    }

    /// Flattened offsets of each vertex space inside the total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }
}

impl Morphism {
    pub fn identity(x: &Representation) -> Self {
        Morphism { components: x.dims.iter().map(|&d| ExactMatrix::identity(d)).collect() }
    }

    pub fn zero(x: &Representation, y: &Representation) -> Self {
        Morphism {
            components: x.dims.iter().zip(&y.dims).map(|(&dx, &dy)| ExactMatrix::zeros(dy, dx)).collect(),
        }
    }

    /// `self ∘ other` (first `other`, then `self`).
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        Morphism {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Morphism {
        Morphism { components: self.components.iter().map(|m| m.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ExactMatrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(ExactMatrix::is_identity)
    }

    /// Invertible as a module map, i.e. bijective at every vertex.
    pub fn is_invertible(&self) -> bool {
        self.components.iter().all(ExactMatrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let components = self.components.iter().map(ExactMatrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(Morphism { components })
    }

    pub fn trace(&self) -> Scalar {
        self.components.iter().map(ExactMatrix::trace).sum()
    }

    /// All entries, vertex by vertex, each component row-major.
    pub fn flatten(&self) -> Vector {
        self.components.iter().flat_map(|c| c.entries().iter().cloned()).collect()
    }

    pub fn linear_combination(terms: &[Morphism], coeffs: &[Scalar]) -> Morphism {
        assert_eq!(terms.len(), coeffs.len());
        assert!(!terms.is_empty(), "empty linear combination has no shape");
        let mut acc = terms[0].scale(&coeffs[0]);
        for (t, c) in terms.iter().zip(coeffs).skip(1) {
            if !c.is_zero() {
                acc = acc.add(&t.scale(c));
            }
        }
        acc
    }
}

/// Checks the intertwining identity `f_t * X_a = Y_a * f_s` for every arrow.
pub fn is_morphism(quiver: &Quiver, x: &Representation, y: &Representation, f: &Morphism) -> bool {
    f.components.len() == quiver.vertex_count
        && f.components.iter().enumerate().all(|(v, c)| c.shape() == (y.dims[v], x.dims[v]))
        && quiver.arrows.iter().enumerate().all(|(a, &(s, t))| {
            &f.components[t] * &x.maps[a] == &y.maps[a] * &f.components[s]
        })
}

/// A basis of `Hom(x, y)`, obtained as the null space of the intertwining
/// equations. Only vertices where both spaces are nonzero carry unknowns.
pub fn hom_basis(quiver: &Quiver, x: &Representation, y: &Representation) -> Vec<Morphism> {
    let nv = quiver.vertex_count;
    let mut offset = vec![usize::MAX; nv];
    let mut unknowns = 0;
    for v in 0..nv {
        if x.dims[v] > 0 && y.dims[v] > 0 {
            offset[v] = unknowns;
            unknowns += x.dims[v] * y.dims[v];
        }
    }
    if unknowns == 0 {
        return Vec::new();
    }
    // unknown index of f_v[r][c]
    let idx = |v: usize, r: usize, c: usize| offset[v] + r * x.dims[v] + c;

    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for (a, &(s, t)) in quiver.arrows.iter().enumerate() {
        let (dxs, dyt) = (x.dims[s], y.dims[t]);
        if dxs == 0 || dyt == 0 {
            continue;
        }
        let xa = &x.maps[a];
        let ya = &y.maps[a];
        // equation entry (r, c): sum_l f_t[r][l] X_a[l][c] - sum_l Y_a[r][l] f_s[l][c]
        for r in 0..dyt {
            for c in 0..dxs {
                let mut row = Vec::new();
                if offset[t] != usize::MAX {
                    for l in 0..x.dims[t] {
                        let e = xa.get(l, c);
                        if !e.is_zero() {
                            row.push((idx(t, r, l), e.clone()));
                        }
                    }
                }
                if offset[s] != usize::MAX {
                    for l in 0..y.dims[s] {
                        let e = ya.get(r, l);
                        if !e.is_zero() {
                            row.push((idx(s, l, c), -e));
                        }
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    sparse_kernel(unknowns, rows)
        .into_iter()
        .map(|sol| unflatten_unknowns(x, y, &offset, &sol))
        .collect()
}

fn unflatten_unknowns(x: &Representation, y: &Representation, offset: &[usize], sol: &[Scalar]) -> Morphism {
    let components = (0..x.dims.len())
        .map(|v| {
            let (dx, dy) = (x.dims[v], y.dims[v]);
            if offset[v] == usize::MAX {
                return ExactMatrix::zeros(dy, dx);
            }
            let data = sol[offset[v]..offset[v] + dx * dy].to_vec();
            ExactMatrix::from_vec(dy, dx, data)
        })
        .collect();
    Morphism { components }
}

/// Rebuilds a morphism from a flattened coordinate vector (see [`Morphism::flatten`]).
pub fn unflatten(x: &Representation, y: &Representation, flat: &[Scalar]) -> Morphism {
    let mut pos = 0;
    let components = x
        .dims
        .iter()
        .zip(&y.dims)
        .map(|(&dx, &dy)| {
            let m = ExactMatrix::from_vec(dy, dx, flat[pos..pos + dx * dy].to_vec());
            pos += dx * dy;
            m
        })
        .collect();
    assert_eq!(pos, flat.len());
    Morphism { components }
}

/// The subrepresentation `ker(e)` of an idempotent endomorphism `e`, together
/// with its inclusion into `t` and the projection `t -> ker(e)` along `im(e)`.
pub struct Complement {
    pub rep: Representation,
    pub inclusion: Morphism,
    pub projection: Morphism,
}

pub fn complement_of_idempotent(quiver: &Quiver, t: &Representation, e: &Morphism) -> Complement {
    let nv = quiver.vertex_count;
    let mut bases = Vec::with_capacity(nv);
    let mut lefts = Vec::with_capacity(nv);
    for v in 0..nv {
        let d = t.dims[v];
        let kernel = e.components[v].kernel_basis();
        let k = ExactMatrix::from_columns(d, &kernel);
        let left = if kernel.is_empty() {
            ExactMatrix::zeros(0, d)
        } else {
            k.left_inverse().expect("kernel basis has full column rank")
        };
        bases.push(k);
        lefts.push(left);
    }
    let dims: Vec<usize> = bases.iter().map(ExactMatrix::cols).collect();
    let maps = quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(a, &(s, tg))| &(&lefts[tg] * &t.maps[a]) * &bases[s])
        .collect();
    let rep = Representation { dims, maps };
    let inclusion = Morphism { components: bases };
    let one_minus_e: Vec<ExactMatrix> = (0..nv)
        .map(|v| &ExactMatrix::identity(t.dims[v]) - &e.components[v])
        .collect();
    let projection = Morphism {
        components: lefts.iter().zip(&one_minus_e).map(|(l, p)| l * p).collect(),
    };
    Complement { rep, inclusion, projection }
}

/// A basis vector `x0` of `x` at vertex `v` and a covector `ξ` on `x(v)` with
/// `ξ(x0) = 1` and `ξ(ν x0) = 0` for every radical endomorphism `ν`, so that
/// `f -> ξ(f x0)` is proportional to the trace on `End(x)`. The vertex is
/// chosen where `t` is smallest.
fn local_functional(quiver: &Quiver, x: &Representation, t: &Representation) -> (usize, usize, Vector) {
    let v = (0..x.dims.len()).filter(|&v| x.dims[v] > 0).min_by_key(|&v| (t.dims[v], v)).expect("x is nonzero");
    let d = x.dims[v];
    let total = Scalar::from(x.total_dim());
    let mut rows: Vec<Vector> = hom_basis(quiver, x, x)
        .iter()
        .map(|f| {
            let shift = &f.trace() / &total;
            let mut col = f.components[v].column(0);
            col[0] = &col[0] - &shift;
            col
        })
        .filter(|c| c.iter().any(|e| !e.is_zero()))
        .collect();
    let mut e0 = vec![Scalar::zero(); d];
    e0[0] = Scalar::one();
    rows.push(e0);
    let a = ExactMatrix::from_rows(rows);
    let mut rhs = vec![Scalar::zero(); a.rows()];
    rhs[a.rows() - 1] = Scalar::one();
    let xi = a.solve(&rhs).expect("endomorphism ring is local");
    (v, 0, xi)
}

/// Multiplicity data for an indecomposable `x` (with local endomorphism ring
/// whose residue field is the ground field) inside `t`.
///
/// For such `x`, an endomorphism is invertible exactly when its trace is
/// nonzero, and the multiplicity of `x` as a summand of `t` is the rank of
/// the pairing `(s, p) -> tr(p ∘ s)` on `Hom(x,t) x Hom(t,x)`. Only sections
/// and retractions with independent images in the pairing are kept.
pub struct SummandPairing {
    pub sections: Vec<Morphism>,
    pub retractions: Vec<Morphism>,
    /// `pairing[q][p]` is a fixed nonzero multiple of `tr(retractions[q] ∘ sections[p])`
    pub pairing: ExactMatrix,
}

impl SummandPairing {
    pub fn compute(quiver: &Quiver, x: &Representation, t: &Representation) -> Self {
        let sections = hom_basis(quiver, x, t);
        let retractions = if sections.is_empty() { Vec::new() } else { hom_basis(quiver, t, x) };
        if retractions.is_empty() {
            return SummandPairing { sections, retractions, pairing: ExactMatrix::zeros(0, 0) };
        }
        let (v, c0, xi) = local_functional(quiver, x, t);
        let dt = t.dims[v];
        let evals: Vec<Vector> = sections.iter().map(|s| s.components[v].column(c0)).collect();
        let covecs: Vec<Vector> = retractions
            .iter()
            .map(|r| (0..dt).map(|c| (0..xi.len()).map(|a| &xi[a] * r.components[v].get(a, c)).sum()).collect())
            .collect();
        // the pairing factors through t(v), so independent evaluations suffice
        let keep_s = ExactMatrix::from_columns(dt, &evals).echelon().pivots;
        let keep_r = ExactMatrix::from_columns(dt, &covecs).echelon().pivots;
        let mut pairing = ExactMatrix::zeros(keep_r.len(), keep_s.len());
        for (q, &rq) in keep_r.iter().enumerate() {
            for (p, &sp) in keep_s.iter().enumerate() {
                let e: Scalar = covecs[rq].iter().zip(&evals[sp]).map(|(a, b)| a * b).sum();
                pairing.set(q, p, e);
            }
        }
        let sections = keep_s.iter().map(|&p| sections[p].clone()).collect();
        let retractions = keep_r.iter().map(|&q| retractions[q].clone()).collect();
        SummandPairing { sections, retractions, pairing }
    }

    pub fn multiplicity(&self) -> usize {
        self.pairing.rank()
    }

    /// Split pairs `(σ_r, π_r)` realizing all copies of `x`, normalized so that
    /// `π_r ∘ σ_s = δ_rs · id`.
    pub fn split_pairs(&self, x: &Representation) -> Vec<(Morphism, Morphism)> {
        let ech = self.pairing.echelon();
        let m = ech.rank();
        if m == 0 {
            return Vec::new();
        }
        let cols = ech.pivots.clone();
        let sub_cols = self.pairing.submatrix(&(0..self.pairing.rows()).collect::<Vec<_>>(), &cols);
        let rows = sub_cols.transpose().echelon().pivots;
        debug_assert_eq!(rows.len(), m);

        let sigma: Vec<&Morphism> = cols.iter().map(|&p| &self.sections[p]).collect();
        let pi: Vec<&Morphism> = rows.iter().map(|&q| &self.retractions[q]).collect();

        // G = Π'Σ as an endomorphism of x^m, block (r, s) = π_r ∘ σ_s
        let nv = x.dims.len();
        let mut g_components = Vec::with_capacity(nv);
        for v in 0..nv {
            let d = x.dims[v];
            let mut g = ExactMatrix::zeros(m * d, m * d);
            for (r, pr) in pi.iter().enumerate() {
                for (s, ss) in sigma.iter().enumerate() {
                    let block = &pr.components[v] * &ss.components[v];
                    g.set_block(r * d, s * d, &block);
                }
            }
            g_components.push(g);
        }
        let g_inv: Vec<ExactMatrix> = g_components
            .iter()
            .map(|g| g.inverse().expect("pairing minor is invertible, so G is"))
            .collect();

        // normalized retractions: rows of G^{-1} Π'
        (0..m)
            .map(|r| {
                let components = (0..nv)
                    .map(|v| {
                        let d = x.dims[v];
                        let mut acc = ExactMatrix::zeros(d, pi[0].components[v].cols());
                        for (s, ps) in pi.iter().enumerate() {
                            let coeff = g_inv[v].block(r * d, s * d, d, d);
                            acc = &acc + &(&coeff * &ps.components[v]);
                        }
                        acc
                    })
                    .collect();
                (sigma[r].clone(), Morphism { components })
            })
            .collect()
    }
}

/// One candidate summand found by [`peel`]: its index in the candidate list
/// and one `(section, retraction)` pair per copy, both relative to the
/// original representation.
pub struct PeeledPart {
    pub candidate: usize,
    pub split_pairs: Vec<(Morphism, Morphism)>,
}

pub struct Peeled {
    pub parts: Vec<PeeledPart>,
    pub residual: Representation,
    pub residual_inclusion: Morphism,
    pub residual_projection: Morphism,
}

/// Splits off every copy of each candidate in order. Candidates must be
/// indecomposable with local endomorphism ring (residue field the ground
/// field); those whose dimension vector does not fit in what remains are
/// skipped without any linear algebra.
pub fn peel(quiver: &Quiver, t: &Representation, candidates: &[&Representation]) -> Peeled {
    let mut rest = t.clone();
    let mut incl = Morphism::identity(t);
    let mut proj = Morphism::identity(t);
    let mut parts = Vec::new();
    for (ci, x) in candidates.iter().enumerate() {
        if rest.is_zero() {
            break;
        }
        if x.is_zero() || x.dims.iter().zip(&rest.dims).any(|(a, b)| a > b) {
            continue;
        }
        let pairing = SummandPairing::compute(quiver, x, &rest);
        if pairing.multiplicity() == 0 {
            continue;
        }
        let pairs = pairing.split_pairs(x);
        let mut e = Morphism::zero(&rest, &rest);
        for (s, p) in &pairs {
            e = e.add(&s.compose(p));
        }
        let split_pairs = pairs
            .iter()
            .map(|(s, p)| (incl.compose(s), p.compose(&proj)))
            .collect();
        parts.push(PeeledPart { candidate: ci, split_pairs });
        let c = complement_of_idempotent(quiver, &rest, &e);
        incl = incl.compose(&c.inclusion);
        proj = c.projection.compose(&proj);
        rest = c.rep;
    }
    Peeled { parts, residual: rest, residual_inclusion: incl, residual_projection: proj }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Quiver {
        Quiver { vertex_count: 2, arrows: vec![(0, 1)] }
    }

    fn rep(d0: usize, d1: usize, m: ExactMatrix) -> Representation {
        Representation { dims: vec![d0, d1], maps: vec![m] }
    }

    #[test]
    fn hom_spaces_of_a2() {
        let q = a2();
        let p0 = rep(1, 1, ExactMatrix::identity(1));
        let s0 = rep(1, 0, ExactMatrix::zeros(0, 1));
        let s1 = rep(0, 1, ExactMatrix::zeros(1, 0));
        assert_eq!(hom_basis(&q, &p0, &p0).len(), 1);
        assert_eq!(hom_basis(&q, &p0, &s0).len(), 1);
        assert_eq!(hom_basis(&q, &s0, &p0).len(), 0);
        assert_eq!(hom_basis(&q, &s1, &p0).len(), 1);
        for f in hom_basis(&q, &s1, &p0) {
            assert!(is_morphism(&q, &s1, &p0, &f));
        }
    }

    #[test]
    fn pairing_counts_summands() {
        let q = a2();
        let p0 = rep(1, 1, ExactMatrix::identity(1));
        let s1 = rep(0, 1, ExactMatrix::zeros(1, 0));
        let t = Representation::direct_sum(&q, &[&p0, &s1, &p0]);
        let pp = SummandPairing::compute(&q, &p0, &t);
        assert_eq!(pp.multiplicity(), 2);
        let ps = SummandPairing::compute(&q, &s1, &t);
        assert_eq!(ps.multiplicity(), 1);
        let pairs = pp.split_pairs(&p0);
        for (r, (_, pr)) in pairs.iter().enumerate() {
            for (s, (ss, _)) in pairs.iter().enumerate() {
                let c = pr.compose(ss);
                assert_eq!(c.is_identity(), r == s);
                assert_eq!(c.is_zero(), r != s);
            }
        }
    }

    #[test]
    fn complement_of_summand() {
        let q = a2();
        let p0 = rep(1, 1, ExactMatrix::identity(1));
        let s1 = rep(0, 1, ExactMatrix::zeros(1, 0));
        let t = Representation::direct_sum(&q, &[&s1, &p0]);
        let pp = SummandPairing::compute(&q, &p0, &t);
        let (sigma, pi) = pp.split_pairs(&p0).remove(0);
        let e = sigma.compose(&pi);
        let c = complement_of_idempotent(&q, &t, &e);
        assert_eq!(c.rep.dims, vec![0, 1]);
        assert!(is_morphism(&q, &c.rep, &t, &c.inclusion));
        assert!(c.projection.compose(&c.inclusion).is_identity());
    }

    #[test]
    fn peel_certifies_decomposition() {
        let q = a2();
        let p0 = rep(1, 1, ExactMatrix::identity(1));
        let s0 = rep(1, 0, ExactMatrix::zeros(0, 1));
        let s1 = rep(0, 1, ExactMatrix::zeros(1, 0));
        let t = Representation::direct_sum(&q, &[&s0, &p0, &s1, &p0, &s0]);
        let peeled = peel(&q, &t, &[&p0, &s0, &s1]);
        let mults: Vec<_> = peeled.parts.iter().map(|p| (p.candidate, p.split_pairs.len())).collect();
        assert_eq!(mults, vec![(0, 2), (1, 2), (2, 1)]);
        assert!(peeled.residual.is_zero());
        let all: Vec<_> = peeled.parts.iter().flat_map(|p| p.split_pairs.iter()).collect();
        for (a, (_, pa)) in all.iter().enumerate() {
            for (b, (sb, _)) in all.iter().enumerate() {
                let c = pa.compose(sb);
                if a == b {
                    assert!(c.is_identity());
                } else {
                    assert!(c.is_zero());
                }
            }
        }
    }
}
