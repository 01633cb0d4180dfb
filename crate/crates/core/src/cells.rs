//! Left, right and two-sided cells of the catalog, computed from the
//! decompositions of all pairwise tensor products.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Family, StringLabel};
use crate::decompose::{cell_of, Catalog, CellTag};
use crate::error::Result;
use crate::tensor::tensor;

/// The family of the unique `J_k`-summand of `U_{i|j} ⊗ V_{j|l}` (initial
/// vertex `i|l`): the row of `U` picks `{W, N}` or `{S, M}`, the column of
/// `V` picks `{W, S}` or `{N, M}`.
pub fn table_entry(u: Family, v: Family) -> Family {
    let top = matches!(u, Family::W | Family::N | Family::L);
    let left = matches!(v, Family::W | Family::S | Family::L);
    match (top, left) {
        (true, true) => Family::W,
        (true, false) => Family::N,
        (false, true) => Family::S,
        (false, false) => Family::M,
    }
}

/// The `J_k`-part of `U_{i|j} ⊗ V_{r|s}` predicted by the multiplication table.
pub fn expected_product(u: &StringLabel, v: &StringLabel, n: usize) -> Option<StringLabel> {
    (u.j == v.i && u.k == v.k)
        .then(|| StringLabel::string(table_entry(u.family, v.family), n, u.i as i64, v.j as i64, u.k.unwrap_or(0)))
}

/// Shifts both indices by `by`: the twist by the rotation of `Q_n`.
pub fn rotate(label: &StringLabel, n: usize, by: i64) -> StringLabel {
    StringLabel::new(label.family, n, label.i as i64 + by, label.j as i64 + by, label.k).expect("n >= 1")
}

/// Decompositions of `x ⊗ y` for all ordered pairs of catalog members.
pub struct ProductTable {
    pub elements: Vec<StringLabel>,
    /// `products[a][b]` is the multiset of `elements[a] ⊗ elements[b]`, or
    /// `None` if the catalog does not exhaust it.
    pub products: Vec<Vec<Option<BTreeMap<StringLabel, usize>>>>,
}

impl ProductTable {
    /// Computes only products whose left factor has first index 1 and
    /// obtains the rest by rotating, since the rotation of `Q_n` twists
    /// tensor products of catalog members into tensor products of the
    /// rotated members.
    pub fn compute(catalog: &Catalog) -> Result<Self> {
        let n = catalog.n;
        let elements: Vec<StringLabel> = catalog.labels().copied().collect();
        let index: HashMap<StringLabel, usize> = elements.iter().enumerate().map(|(p, l)| (*l, p)).collect();
        let base: Vec<usize> = (0..elements.len()).filter(|&a| elements[a].i == 1).collect();
        let computed: Vec<Vec<Option<BTreeMap<StringLabel, usize>>>> = base
            .par_iter()
            .map(|&a| {
                let x = &catalog.entries()[a].1;
                catalog
                    .entries()
                    .iter()
                    .map(|(_, y)| {
                        let t = tensor(x, y)?;
                        catalog.multiplicities(&t)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let row_of: HashMap<usize, usize> = base.iter().enumerate().map(|(r, &a)| (a, r)).collect();
        let products = (0..elements.len())
            .map(|a| {
                let s = elements[a].i as i64 - 1;
                let a0 = index[&rotate(&elements[a], n, -s)];
                let row = &computed[row_of[&a0]];
                (0..elements.len())
                    .map(|b| {
                        let b0 = index[&rotate(&elements[b], n, -s)];
                        row[b0]
                            .as_ref()
                            .map(|m| m.iter().map(|(l, c)| (rotate(l, n, s), *c)).collect())
                    })
                    .collect()
            })
            .collect();
        Ok(ProductTable { elements, products })
    }

    /// The same table without using the rotation symmetry.
    pub fn compute_direct(catalog: &Catalog) -> Result<Self> {
        let elements: Vec<StringLabel> = catalog.labels().copied().collect();
        let products = catalog
            .entries()
            .par_iter()
            .map(|(_, x)| {
                catalog
                    .entries()
                    .iter()
                    .map(|(_, y)| catalog.multiplicities(&tensor(x, y)?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductTable { elements, products })
    }

    pub fn is_closed(&self) -> bool {
        self.products.iter().flatten().all(Option::is_some)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellStructure {
    pub n: usize,
    pub max_valleys: usize,
    pub elements: Vec<StringLabel>,
    pub left_cells: Vec<Vec<usize>>,
    pub right_cells: Vec<Vec<usize>>,
    pub two_sided_cells: Vec<Vec<usize>>,
    /// Pairs `(a, b)` of distinct two-sided cells with `a ≥_J b`.
    pub two_sided_order: Vec<(usize, usize)>,
    pub idempotent: Vec<bool>,
    /// Every product of catalog members decomposed into catalog members.
    pub closed: bool,
    /// Relations are computed with the catalog standing in for all 1-morphisms.
    pub catalog_relative: bool,
    #[serde(skip)]
    leq_j: Vec<Vec<bool>>,
}

/// A two-sided cell laid out with right cells as rows and left cells as columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EggBox {
    pub cell: CellTag,
    /// `grid[r][c]` lists the elements in right cell `r` and left cell `c`.
    pub grid: Vec<Vec<Vec<StringLabel>>>,
}

impl EggBox {
    pub fn is_regular(&self) -> bool {
        self.grid.iter().all(|row| row.iter().all(|c| c.len() == 1))
    }
}

fn closure(rel: &mut [Vec<bool>]) {
    let n = rel.len();
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        let rk = rel[k].clone();
        for row in rel.iter_mut() {
            if row[k] {
                for (x, &y) in row.iter_mut().zip(&rk) {
                    *x |= y;
                }
            }
        }
    }
}

/// Classes of the equivalence `a ~ b ⟺ a ≤ b ≤ a`, in order of first element.
fn classes(rel: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = rel.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for a in 0..n {
        if seen[a] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&b| rel[a][b] && rel[b][a]).collect();
        for &b in &class {
            seen[b] = true;
        }
        out.push(class);
    }
    out
}

pub fn compute_cells(n: usize, max_valleys: usize) -> Result<CellStructure> {
    let catalog = Catalog::new(n, max_valleys)?;
    let table = ProductTable::compute(&catalog)?;
    Ok(cells_from_table(n, max_valleys, &table))
}

pub fn cells_from_table(n: usize, max_valleys: usize, table: &ProductTable) -> CellStructure {
    let mut elements = table.elements.clone();
    elements.sort();
    let perm: Vec<usize> = elements.iter().map(|l| table.elements.iter().position(|m| m == l).unwrap()).collect();
    let index: HashMap<StringLabel, usize> = elements.iter().enumerate().map(|(p, l)| (*l, p)).collect();
    let size = elements.len();
    // leq_l[f][g]: f ≤_L g
    let mut leq_l = vec![vec![false; size]; size];
    let mut leq_r = vec![vec![false; size]; size];
    for (a, &pa) in perm.iter().enumerate() {
        for (b, &pb) in perm.iter().enumerate() {
            if let Some(m) = &table.products[pa][pb] {
                for g in m.keys() {
                    if let Some(&g) = index.get(g) {
                        leq_l[b][g] = true;
                        leq_r[a][g] = true;
                    }
                }
            }
        }
    }
    closure(&mut leq_l);
    closure(&mut leq_r);
    let mut leq_j: Vec<Vec<bool>> =
        (0..size).map(|f| (0..size).map(|g| leq_l[f][g] || leq_r[f][g]).collect()).collect();
    closure(&mut leq_j);
    let left_cells = classes(&leq_l);
    let right_cells = classes(&leq_r);
    let two_sided_cells = classes(&leq_j);
    let mut two_sided_order = Vec::new();
    for (a, ca) in two_sided_cells.iter().enumerate() {
        for (b, cb) in two_sided_cells.iter().enumerate() {
            if a != b && leq_j[cb[0]][ca[0]] {
                two_sided_order.push((a, b));
            }
        }
    }
    let idempotent = two_sided_cells
        .iter()
        .map(|c| {
            c.iter().any(|&g| {
                c.iter().any(|&h| {
                    table.products[perm[g]][perm[h]]
                        .as_ref()
                        .is_some_and(|m| m.keys().any(|f| index.get(f).is_some_and(|fi| c.contains(fi))))
                })
            })
        })
        .collect();
    CellStructure {
        n,
        max_valleys,
        elements,
        left_cells,
        right_cells,
        two_sided_cells,
        two_sided_order,
        idempotent,
        closed: table.is_closed(),
        catalog_relative: true,
        leq_j,
    }
}

impl CellStructure {
    pub fn two_sided_cell_of(&self, label: &StringLabel) -> Option<usize> {
        let e = self.elements.iter().position(|l| l == label)?;
        self.two_sided_cells.iter().position(|c| c.contains(&e))
    }

    /// The tag shared by all members of a two-sided cell, if they share one.
    pub fn tag(&self, cell: usize) -> Option<CellTag> {
        let tags: Vec<CellTag> = self.two_sided_cells[cell].iter().map(|&e| cell_of(&self.elements[e])).collect();
        tags.iter().all(|t| *t == tags[0]).then(|| tags[0])
    }

    pub fn cell_with_tag(&self, tag: CellTag) -> Option<usize> {
        (0..self.two_sided_cells.len()).find(|&c| self.tag(c) == Some(tag))
    }

    /// `a ≥_J b` for two-sided cells.
    pub fn geq(&self, a: usize, b: usize) -> bool {
        a == b || self.two_sided_order.contains(&(a, b))
    }

    pub fn leq_j(&self, f: &StringLabel, g: &StringLabel) -> Option<bool> {
        let a = self.elements.iter().position(|l| l == f)?;
        let b = self.elements.iter().position(|l| l == g)?;
        Some(self.leq_j[a][b])
    }

    pub fn is_idempotent_cell(&self, cell: usize) -> bool {
        self.idempotent[cell]
    }

    /// The cells, each with its tag, sorted from J-greatest down, if the
    /// two-sided order is a chain.
    pub fn chain(&self) -> Option<Vec<usize>> {
        let mut cells: Vec<usize> = (0..self.two_sided_cells.len()).collect();
        cells.sort_by_key(|&c| std::cmp::Reverse(self.two_sided_order.iter().filter(|(a, _)| *a == c).count()));
        cells.windows(2).all(|w| self.geq(w[0], w[1]) && !self.geq(w[1], w[0])).then_some(cells)
    }

    pub fn egg_box(&self, tag: CellTag) -> Option<EggBox> {
        let cell = self.cell_with_tag(tag)?;
        let members = &self.two_sided_cells[cell];
        let rows: Vec<&Vec<usize>> = self.right_cells.iter().filter(|r| members.contains(&r[0])).collect();
        let cols: Vec<&Vec<usize>> = self.left_cells.iter().filter(|c| members.contains(&c[0])).collect();
        let grid = rows
            .iter()
            .map(|r| {
                cols.iter()
                    .map(|c| r.iter().filter(|e| c.contains(e)).map(|&e| self.elements[e]).collect())
                    .collect()
            })
            .collect();
        Some(EggBox { cell: tag, grid })
    }

    pub fn labels_of(&self, cells: &[Vec<usize>]) -> Vec<Vec<StringLabel>> {
        cells.iter().map(|c| c.iter().map(|&e| self.elements[e]).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_and_columns() {
        use Family::*;
        assert_eq!(table_entry(W, W), W);
        assert_eq!(table_entry(W, S), W);
        assert_eq!(table_entry(N, M), N);
        assert_eq!(table_entry(S, W), S);
        assert_eq!(table_entry(M, S), S);
        assert_eq!(table_entry(S, N), M);
        assert_eq!(table_entry(M, M), M);
    }

    #[test]
    fn rotation_matches_direct_computation() {
        let cat = Catalog::new(2, 1).unwrap();
        let a = ProductTable::compute(&cat).unwrap();
        let b = ProductTable::compute_direct(&cat).unwrap();
        assert_eq!(a.elements, b.elements);
        assert_eq!(a.products, b.products);
    }

    #[test]
    fn cells_for_n2() {
        let cs = compute_cells(2, 1).unwrap();
        assert!(cs.closed);
        let chain = cs.chain().expect("two-sided cells form a chain");
        let tags: Vec<_> = chain.iter().map(|&c| cs.tag(c)).collect();
        assert_eq!(tags, vec![Some(CellTag::Split), Some(CellTag::M0), Some(CellTag::Valleys(1))]);
        let eb = cs.egg_box(CellTag::Valleys(1)).unwrap();
        assert_eq!(eb.grid.len(), 4);
        assert!(eb.grid.iter().all(|r| r.len() == 4));
        assert!(eb.is_regular());
        let m0 = cs.cell_with_tag(CellTag::M0).unwrap();
        assert!(!cs.is_idempotent_cell(m0));
        assert!(cs.is_idempotent_cell(cs.cell_with_tag(CellTag::Split).unwrap()));
        assert!(cs.is_idempotent_cell(cs.cell_with_tag(CellTag::Valleys(1)).unwrap()));
    }
}
