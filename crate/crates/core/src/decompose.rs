//! Krull–Schmidt decomposition against the catalog, with cell annotation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bimodule::{random_combination, Bimodule, DEFAULT_SEED};
use crate::catalog::{construct, labels, Family, StringLabel};
use crate::error::{Error, Result};
use crate::quiver::{self, Morphism, SummandPairing};

/// The two-sided cells met by the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellTag {
    Split,
    M0,
    Valleys(usize),
}

impl CellTag {
    /// Position in the chain `Split > M0 > 1 > 2 > ...`; smaller is J-greater.
    pub fn height(&self) -> usize {
        match self {
            CellTag::Split => 0,
            CellTag::M0 => 1,
            CellTag::Valleys(k) => k + 1,
        }
    }

    pub fn is_greater_than(&self, other: &CellTag) -> bool {
        self.height() < other.height()
    }
}

impl PartialOrd for CellTag {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by the J-order: `Split` is the greatest cell.
impl Ord for CellTag {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.height().cmp(&self.height())
    }
}

impl fmt::Display for CellTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellTag::Split => write!(f, "J_split"),
            CellTag::M0 => write!(f, "J_M0"),
            CellTag::Valleys(k) => write!(f, "J_{k}"),
        }
    }
}

pub fn cell_of(label: &StringLabel) -> CellTag {
    match (label.family, label.k) {
        (Family::P, _) | (Family::L, _) => CellTag::Split,
        (Family::M, Some(0)) => CellTag::M0,
        (_, Some(0)) | (_, None) => CellTag::Split,
        (_, Some(k)) => CellTag::Valleys(k),
    }
}

/// Constructed catalog members, ordered largest dimension first.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub n: usize,
    pub max_valleys: usize,
    entries: Vec<(StringLabel, Bimodule)>,
    index: HashMap<StringLabel, usize>,
}

impl Catalog {
    pub fn new(n: usize, max_valleys: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        let mut entries: Vec<_> = labels(n, max_valleys)
            .into_iter()
            .map(|l| {
                let b = construct(&l, n).expect("catalog labels are valid");
                (l, b)
            })
            .collect();
        entries.sort_by_key(|(l, _)| std::cmp::Reverse(l.dim()));
        let index = entries.iter().enumerate().map(|(p, (l, _))| (*l, p)).collect();
        Ok(Catalog { n, max_valleys, entries, index })
    }

    pub fn labels(&self) -> impl Iterator<Item = &StringLabel> {
        self.entries.iter().map(|(l, _)| l)
    }

    pub fn entries(&self) -> &[(StringLabel, Bimodule)] {
        &self.entries
    }

    pub fn get(&self, label: &StringLabel) -> Option<&Bimodule> {
        self.index.get(label).map(|&p| &self.entries[p].1)
    }

    /// The bimodule for `label`, constructing it if it lies outside the cached range.
    pub fn bimodule(&self, label: &StringLabel) -> Bimodule {
        self.get(label).cloned().unwrap_or_else(|| construct(label, self.n).expect("valid label"))
    }

    /// Catalog multiplicities of `t` without computing split pairs.
    ///
    /// The multiplicity of a catalog member is the rank of its trace pairing
    /// with `t`; candidates are skipped when their dimension vector does not
    /// fit into what the summands found so far leave over. Returns `None` if
    /// the found summands do not exhaust `t`.
    pub fn multiplicities(&self, t: &Bimodule) -> Result<Option<BTreeMap<StringLabel, usize>>> {
        if t.n != self.n {
            return Err(Error::MismatchedN(self.n, t.n));
        }
        let q = t.quiver();
        let mut left = t.rep.dims.clone();
        let mut out = BTreeMap::new();
        for (label, x) in &self.entries {
            if left.iter().all(|&d| d == 0) {
                break;
            }
            if x.rep.dims.iter().zip(&left).any(|(a, b)| a > b) {
                continue;
            }
            let m = SummandPairing::compute(&q, &x.rep, &t.rep).multiplicity();
            if m > 0 {
                for (l, d) in left.iter_mut().zip(&x.rep.dims) {
                    *l -= m * d;
                }
                out.insert(*label, m);
            }
        }
        Ok(left.iter().all(|&d| d == 0).then_some(out))
    }

    pub fn decompose(&self, t: &Bimodule) -> Result<DecompositionReport> {
        self.decompose_filtered(t, |_| true)
    }

    /// Peels only the catalog members accepted by `keep` (in catalog order).
    /// Multiplicities do not depend on which other candidates are peeled.
    pub fn decompose_filtered(&self, t: &Bimodule, keep: impl Fn(&StringLabel) -> bool) -> Result<DecompositionReport> {
        if t.n != self.n {
            return Err(Error::MismatchedN(self.n, t.n));
        }
        let input_dim = t.total_dim();
        let chosen: Vec<&(StringLabel, Bimodule)> = self.entries.iter().filter(|(l, _)| keep(l)).collect();
        let reps: Vec<_> = chosen.iter().map(|(_, b)| &b.rep).collect();
        let peeled = quiver::peel(&t.quiver(), &t.rep, &reps);
        let mut summands = Vec::new();
        for part in peeled.parts {
            let label = chosen[part.candidate].0;
            for (section, retraction) in part.split_pairs {
                summands.push(Summand { label, section, retraction });
            }
        }
        let residual = (!peeled.residual.is_zero()).then(|| Bimodule::from_rep(t.n, peeled.residual));
        Ok(DecompositionReport { n: t.n, input_dim, summands, residual })
    }
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub label: StringLabel,
    /// `label -> input`
    pub section: Morphism,
    /// `input -> label`, with `retraction ∘ section = id`
    pub retraction: Morphism,
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub n: usize,
    pub input_dim: usize,
    pub summands: Vec<Summand>,
    pub residual: Option<Bimodule>,
}

impl DecompositionReport {
    pub fn multiset(&self) -> BTreeMap<StringLabel, usize> {
        let mut m = BTreeMap::new();
        for s in &self.summands {
            *m.entry(s.label).or_insert(0) += 1;
        }
        m
    }

    pub fn multiplicity(&self, label: &StringLabel) -> usize {
        self.summands.iter().filter(|s| &s.label == label).count()
    }

    pub fn residual_dim(&self) -> usize {
        self.residual.as_ref().map_or(0, Bimodule::total_dim)
    }

    /// Summands lying in `cell`.
    pub fn cell_part(&self, cell: CellTag) -> BTreeMap<StringLabel, usize> {
        self.multiset().into_iter().filter(|(l, _)| cell_of(l) == cell).collect()
    }

    /// Summands not lying in a cell strictly J-greater than `cell`.
    pub fn modulo_greater(&self, cell: CellTag) -> BTreeMap<StringLabel, usize> {
        self.multiset().into_iter().filter(|(l, _)| !cell_of(l).is_greater_than(&cell)).collect()
    }

    /// Dimensions add up and every recorded pair is a split pair, mutually orthogonal.
    pub fn is_certified(&self) -> bool {
        let dims: usize = self.summands.iter().map(|s| s.label.dim()).sum::<usize>() + self.residual_dim();
        dims == self.input_dim
            && self.summands.iter().enumerate().all(|(a, sa)| {
                self.summands.iter().enumerate().all(|(b, sb)| {
                    let c = sa.retraction.compose(&sb.section);
                    if a == b {
                        c.is_identity()
                    } else {
                        c.is_zero()
                    }
                })
            })
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            summands: self
                .multiset()
                .into_iter()
                .map(|(l, multiplicity)| SummandJson {
                    family: l.family,
                    i: l.i,
                    j: l.j,
                    k: l.k,
                    multiplicity,
                    cell: cell_of(&l).to_string(),
                })
                .collect(),
            residual_dim: self.residual_dim(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandJson {
    pub family: Family,
    pub i: usize,
    pub j: usize,
    pub k: Option<usize>,
    pub multiplicity: usize,
    pub cell: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub summands: Vec<SummandJson>,
    pub residual_dim: usize,
}

/// Decomposes `t` using catalog members with at most `max_valleys` valleys.
pub fn decompose(t: &Bimodule, max_valleys: usize) -> Result<DecompositionReport> {
    Catalog::new(t.n, max_valleys)?.decompose(t)
}

/// A pair `(σ, π)` with `π ∘ σ = id_x` if `x` is a direct summand of `t`.
///
/// Tries basis pairs, then seeded random combinations; if both fail, the rank
/// of the trace pairing decides (exact whenever `End(x)` is local, which holds
/// for every catalog member).
pub fn split_pair_search(x: &Bimodule, t: &Bimodule) -> Result<Option<(Morphism, Morphism)>> {
    split_pair_search_seeded(x, t, DEFAULT_SEED)
}

pub fn split_pair_search_seeded(x: &Bimodule, t: &Bimodule, seed: u64) -> Result<Option<(Morphism, Morphism)>> {
    if x.n != t.n {
        return Err(Error::MismatchedN(x.n, t.n));
    }
    if x.is_zero() {
        return Ok(Some((Morphism::zero(&x.rep, &t.rep), Morphism::zero(&t.rep, &x.rep))));
    }
    let pairing = SummandPairing::compute(&x.quiver(), &x.rep, &t.rep);
    if pairing.sections.is_empty() || pairing.retractions.is_empty() {
        return Ok(None);
    }
    let normalize = |s: &Morphism, p: &Morphism| -> Option<(Morphism, Morphism)> {
        let inv = p.compose(s).inverse()?;
        Some((s.clone(), inv.compose(p)))
    };
    for s in &pairing.sections {
        for p in &pairing.retractions {
            if let Some(pair) = normalize(s, p) {
                return Ok(Some(pair));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let s = random_combination(&pairing.sections, &mut rng);
        let p = random_combination(&pairing.retractions, &mut rng);
        if let Some(pair) = normalize(&s, &p) {
            return Ok(Some(pair));
        }
    }
    Ok(pairing.split_pairs(&x.rep).into_iter().next())
}

/// Whether `x` and `y` have the same catalog decomposition with nothing left over.
pub(crate) fn same_decomposition(x: &Bimodule, y: &Bimodule) -> bool {
    let bound = x.total_dim().max(1).div_ceil(2);
    let Ok(catalog) = Catalog::new(x.n, bound) else {
        return false;
    };
    match (catalog.decompose(x), catalog.decompose(y)) {
        (Ok(a), Ok(b)) => a.residual.is_none() && b.residual.is_none() && a.multiset() == b.multiset(),
        _ => false,
    }
}
