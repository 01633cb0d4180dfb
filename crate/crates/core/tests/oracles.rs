use std::collections::BTreeMap;

use nakayama_bimod::birep::{cell_birep, generators, LocalizationSpec};
use nakayama_bimod::linalg::sparse_kernel;
use nakayama_bimod::{construct, decompose, tensor, Bimodule, Catalog, ExactMatrix, Family, Scalar, StringLabel};
use proptest::prelude::*;

fn label(s: &str, n: usize) -> StringLabel {
    StringLabel::parse(s, n).unwrap()
}

#[test]
fn split_catalog_for_one_vertex() {
    let dims: Vec<(String, usize)> = Catalog::new(1, 0)
        .unwrap()
        .entries()
        .iter()
        .map(|(l, b)| (l.to_string(), b.total_dim()))
        .collect();
    let get = |name: &str| dims.iter().find(|(l, _)| l == name).map(|(_, d)| *d);
    assert_eq!(get("P:1|1"), Some(4));
    assert_eq!(get("W:1|1:k=0"), Some(1));
    assert_eq!(get("S:1|1:k=0"), Some(2));
    assert_eq!(get("N:1|1:k=0"), Some(2));
    assert_eq!(get("M:1|1:k=0"), Some(3));
    assert_eq!(dims.len(), 5);
}

#[test]
fn projective_squared_for_one_vertex() {
    let p = construct(&label("P:1|1", 1), 1).unwrap();
    let r = decompose(&tensor(&p, &p).unwrap(), 1).unwrap();
    assert_eq!(r.multiset(), BTreeMap::from([(label("P:1|1", 1), 2)]));
    assert!(r.is_certified());
}

#[test]
fn simple_times_projective() {
    // L_{1|2} ⊗ P_{2|1}: the top of P along the left factor
    let n = 2;
    let l = construct(&label("L:1|2", n), n).unwrap();
    let p = construct(&label("P:2|1", n), n).unwrap();
    let t = tensor(&l, &p).unwrap();
    assert_eq!(t.total_dim(), 2);
    let r = decompose(&t, 1).unwrap();
    assert_eq!(r.residual_dim(), 0);
    assert_eq!(r.summands.iter().map(|s| s.label.family).collect::<Vec<_>>(), vec![Family::N]);
}

#[test]
fn decomposition_report_json_round_trip() {
    let n = 2;
    let u = construct(&label("N:1|2:k=1", n), n).unwrap();
    let v = construct(&label("W:2|2:k=1", n), n).unwrap();
    let r = decompose(&tensor(&u, &v).unwrap(), 1).unwrap();
    let json = serde_json::to_value(r.to_json()).unwrap();
    assert_eq!(json["residual_dim"], 0);
    let summands = json["summands"].as_array().unwrap();
    assert!(summands.iter().any(|s| s["family"] == "W" && s["i"] == 1 && s["j"] == 2 && s["cell"] == "J_1"));
}

#[test]
fn bimodule_json_round_trip() {
    let n = 3;
    for s in ["M:1|3:k=2", "P:2|2", "S:3|1:k=0"] {
        let b = construct(&label(s, n), n).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        let back: Bimodule = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
    }
}

#[test]
fn left_cells_give_the_same_birep() {
    let n = 2;
    let base = cell_birep(n, 1, 1).unwrap();
    let other = cell_birep(n, 1, 2).unwrap();
    for u in generators(n, 1) {
        assert_eq!(base.action_matrix(&u).unwrap(), other.action_matrix(&u).unwrap(), "{u}");
    }
    let a = base.localize(&LocalizationSpec::new([2])).unwrap();
    let b = other.localize(&LocalizationSpec::new([2])).unwrap();
    assert_eq!(a.fingerprint(), b.fingerprint());
}

#[test]
fn two_valley_cell_birep() {
    let b = cell_birep(2, 2, 1).unwrap();
    assert_eq!(b.rank(), 4);
    assert!(b.is_simple_transitive());
    let f = b.f_matrix();
    assert_eq!(&f * &f, f.scale(&Scalar::from(8)));
}

fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-3i64..4, r * c)
            .prop_map(move |v| ExactMatrix::from_vec(r, c, v.into_iter().map(Scalar::from_int).collect()))
    })
}

proptest! {
    #[test]
    fn rank_nullity(a in small_matrix()) {
        let kernel = a.kernel_basis();
        prop_assert_eq!(a.rank() + kernel.len(), a.cols());
        for v in &kernel {
            prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn sparse_kernel_agrees(a in small_matrix()) {
        let rows = (0..a.rows()).map(|r| {
            a.row(r).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect()
        });
        prop_assert_eq!(sparse_kernel(a.cols(), rows), a.kernel_basis());
    }

    #[test]
    fn inverse_is_two_sided(a in small_matrix()) {
        if let Some(inv) = a.inverse() {
            prop_assert!((&a * &inv).is_identity());
            prop_assert!((&inv * &a).is_identity());
        } else {
            prop_assert!(!a.is_square() || a.rank() < a.rows());
        }
    }

    #[test]
    fn scalar_overflow_falls_back(a in any::<i64>(), b in 1i64..i64::MAX) {
        let x = Scalar::from_int(a);
        let y = Scalar::from_int(b);
        prop_assert_eq!(&(&x * &y) / &y, x.clone());
        prop_assert_eq!(&(&x + &y) - &y, x);
    }
}
