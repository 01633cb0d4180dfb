//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use nakayama_bimod::bimodule::{is_isomorphic, LeftModule};
use nakayama_bimod::birep::{
    cell_birep, classify, generators, verify_adjunction_consequences, verify_block_structure, FinitaryBirep,
    LocalizationSpec,
};
use nakayama_bimod::cells::{compute_cells, table_entry};
use nakayama_bimod::{construct, tensor, Bimodule, Catalog, CellTag, Family, StringLabel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn apex_part(catalog: &Catalog, k: usize, t: &Bimodule) -> Result<BTreeMap<StringLabel, usize>, String> {
    let r = catalog.decompose(t).map_err(|e| e.to_string())?;
    if r.residual.is_some() {
        return Err(format!("residual of dimension {}", r.residual_dim()));
    }
    Ok(r.cell_part(CellTag::Valleys(k)))
}

fn scaled(m: &BTreeMap<StringLabel, usize>, by: usize) -> BTreeMap<StringLabel, usize> {
    m.iter().map(|(l, c)| (*l, c * by)).collect()
}

fn multiplication_table() -> Outcome {
    for n in 1..=3usize {
        for k in 1..=2usize {
            let catalog = Catalog::new(n, k).map_err(|e| e.to_string())?;
            let gens = generators(n, k);
            for u in &gens {
                for v in &gens {
                    let t = tensor(&catalog.bimodule(u), &catalog.bimodule(v)).map_err(|e| e.to_string())?;
                    let part = apex_part(&catalog, k, &t)?;
                    let expect: BTreeMap<StringLabel, usize> = if u.j == v.i {
                        let f = table_entry(u.family, v.family);
                        BTreeMap::from([(StringLabel::string(f, n, u.i as i64, v.j as i64, k), 1)])
                    } else {
                        BTreeMap::new()
                    };
                    ensure(part == expect, || format!("n={n} k={k}: {u} ⊗ {v} gives {part:?}"))?;
                }
            }
        }
    }
    Ok(())
}

fn f_at(catalog: &Catalog, n: usize, k: usize, i: usize, j: usize) -> (Bimodule, BTreeMap<StringLabel, usize>) {
    let labels: Vec<StringLabel> =
        Family::STRINGS.iter().map(|&f| StringLabel::string(f, n, i as i64, j as i64, k)).collect();
    let parts: Vec<Bimodule> = labels.iter().map(|l| catalog.bimodule(l)).collect();
    let refs: Vec<&Bimodule> = parts.iter().collect();
    (Bimodule::direct_sum(&refs).unwrap(), labels.into_iter().map(|l| (l, 1)).collect())
}

fn f_squared() -> Outcome {
    for n in 1..=3usize {
        for k in 1..=2usize {
            let catalog = Catalog::new(n, k).map_err(|e| e.to_string())?;
            let mut total: BTreeMap<StringLabel, usize> = BTreeMap::new();
            for (i, j, l) in (1..=n).cartesian_product(1..=n).cartesian_product(1..=n).map(|((a, b), c)| (a, b, c)) {
                let (fij, _) = f_at(&catalog, n, k, i, j);
                let (fjl, _) = f_at(&catalog, n, k, j, l);
                let (_, fil) = f_at(&catalog, n, k, i, l);
                let part = apex_part(&catalog, k, &tensor(&fij, &fjl).map_err(|e| e.to_string())?)?;
                ensure(part == scaled(&fil, 4), || format!("n={n} k={k}: F_{i}|{j} ⊗ F_{j}|{l} gives {part:?}"))?;
                for (lab, c) in part {
                    *total.entry(lab).or_insert(0) += c;
                }
            }
            // F_{i|j} ⊗ F_{r|l} has no J_k part for j ≠ r, so the sum above is all of F ⊗ F
            let f: BTreeMap<StringLabel, usize> = generators(n, k).into_iter().map(|l| (l, 1)).collect();
            ensure(total == scaled(&f, 4 * n), || format!("n={n} k={k}: F ⊗ F is not F^(4n)"))?;
        }
    }
    // the full sum directly, where it is small enough
    for n in 1..=2usize {
        let catalog = Catalog::new(n, 1).map_err(|e| e.to_string())?;
        let gens = generators(n, 1);
        let parts: Vec<Bimodule> = gens.iter().map(|l| catalog.bimodule(l)).collect();
        let refs: Vec<&Bimodule> = parts.iter().collect();
        let f = Bimodule::direct_sum(&refs).map_err(|e| e.to_string())?;
        let part = apex_part(&catalog, 1, &tensor(&f, &f).map_err(|e| e.to_string())?)?;
        let expect: BTreeMap<StringLabel, usize> = gens.into_iter().map(|l| (l, 4 * n)).collect();
        ensure(part == expect, || format!("n={n}: direct F ⊗ F gives {part:?}"))?;
    }
    Ok(())
}

fn adjunction() -> Outcome {
    for n in 1..=3usize {
        for k in 1..=2usize {
            for (i, j) in (1..=n as i64).cartesian_product(1..=n as i64) {
                let s = construct(&StringLabel::string(Family::S, n, i, j, k), n).map_err(|e| e.to_string())?;
                let left = s.restrict_left();
                let mut expect: Vec<LeftModule> = (0..=k as i64)
                    .map(|t| LeftModule::Projective(nakayama_bimod::algebra::residue(i + t, n)))
                    .collect();
                expect.sort();
                ensure(left.summands == expect && left.residual_dim == 0, || {
                    format!("n={n} k={k}: restriction of S_{i}|{j} is {:?}", left.summands)
                })?;
                let nn = construct(&StringLabel::string(Family::N, n, j, i, k), n).map_err(|e| e.to_string())?;
                let iso = is_isomorphic(&s.hom_to_algebra(), &nn).map_err(|e| e.to_string())?;
                ensure(iso, || format!("n={n} k={k}: Hom(S_{i}|{j}, Λ) is not N_{j}|{i}"))?;
            }
        }
    }
    Ok(())
}

fn egg_box_and_chain() -> Outcome {
    for n in 1..=3usize {
        let cells = compute_cells(n, 2).map_err(|e| e.to_string())?;
        for k in 1..=2 {
            let eb = cells.egg_box(CellTag::Valleys(k)).ok_or_else(|| format!("n={n}: no J_{k} cell"))?;
            let square = eb.grid.len() == 2 * n && eb.grid.iter().all(|r| r.len() == 2 * n);
            ensure(square && eb.is_regular(), || format!("n={n}: J_{k} egg-box is not 2n × 2n"))?;
        }
        let chain = cells.chain().ok_or_else(|| format!("n={n}: two-sided order is not a chain"))?;
        let tags: Vec<Option<CellTag>> = chain.iter().map(|&c| cells.tag(c)).collect();
        let expect = vec![Some(CellTag::Split), Some(CellTag::M0), Some(CellTag::Valleys(1)), Some(CellTag::Valleys(2))];
        ensure(tags == expect, || format!("n={n}: chain is {tags:?}"))?;
        let non_idem: Vec<Option<CellTag>> =
            (0..cells.two_sided_cells.len()).filter(|&c| !cells.is_idempotent_cell(c)).map(|c| cells.tag(c)).collect();
        ensure(non_idem == vec![Some(CellTag::M0)], || format!("n={n}: non-idempotent cells {non_idem:?}"))?;
    }
    Ok(())
}

fn all_localizations(base: &FinitaryBirep) -> Result<Vec<(Vec<usize>, FinitaryBirep)>, String> {
    (1..=base.n)
        .powerset()
        .map(|s| Ok((s.clone(), base.localize(&LocalizationSpec::new(s)).map_err(|e| e.to_string())?)))
        .collect()
}

fn cell_birep_structure(bases: &BTreeMap<(usize, usize), FinitaryBirep>) -> Outcome {
    for ((n, j), base) in bases {
        for (subset, b) in all_localizations(base)? {
            let blocks = verify_block_structure(&b);
            ensure(blocks.is_ok(), || format!("n={n} j={j} I={subset:?}: {:?}", blocks.failures))?;
            let adj = verify_adjunction_consequences(&b);
            ensure(adj.is_ok(), || format!("n={n} j={j} I={subset:?}: {:?}", adj.failures))?;
        }
    }
    Ok(())
}

fn classification() -> Outcome {
    for n in 1..=3usize {
        let r = classify(n, 1).map_err(|e| e.to_string())?;
        ensure(r.entries.len() == 1 << n, || format!("n={n}: {} entries", r.entries.len()))?;
        ensure(r.all_simple_transitive(), || format!("n={n}: not all simple transitive"))?;
        ensure(r.counts_match(), || format!("n={n}: counts {:?}", r.counts))?;
        ensure(r.fingerprints_distinct(), || format!("n={n}: repeated fingerprints"))?;
        ensure(r.ranks_bounded(), || format!("n={n}: rank outside [n, 2n]"))?;
        for e in &r.entries {
            ensure(e.fingerprint == e.contract, || format!("n={n}: fingerprint {:?} for I={:?}", e.fingerprint, e.contract))?;
        }
    }
    Ok(())
}

fn localization(bases: &BTreeMap<(usize, usize), FinitaryBirep>) -> Outcome {
    for ((n, j), base) in bases {
        let n = *n;
        let empty = base.localize(&LocalizationSpec::new([])).map_err(|e| e.to_string())?;
        ensure(&empty == base, || format!("n={n} j={j}: empty localization changed the birep"))?;
        let full = base.localize(&LocalizationSpec::new(1..=n)).map_err(|e| e.to_string())?;
        ensure(full.rank() == n, || format!("n={n} j={j}: full localization has rank {}", full.rank()))?;
        for (subset, b) in all_localizations(base)? {
            ensure(b.rank() == 2 * n - subset.len(), || format!("n={n} j={j} I={subset:?}: rank {}", b.rank()))?;
        }
    }
    Ok(())
}

fn random_products(base: &FinitaryBirep) -> Outcome {
    let n = base.n;
    let catalog = Catalog::new(n, 1).map_err(|e| e.to_string())?;
    let gens = generators(n, 1);
    let locals = all_localizations(base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for t in 0..200 {
        let u = gens[rng.gen_range(0..gens.len())];
        let v = gens[rng.gen_range(0..gens.len())];
        let (subset, b) = &locals[rng.gen_range(0..locals.len())];
        let part = apex_part(&catalog, 1, &tensor(&catalog.bimodule(&u), &catalog.bimodule(&v)).unwrap())?;
        let lhs = &b.action_matrix(&u).unwrap() * &b.action_matrix(&v).unwrap();
        let rhs = b.action_of_sum(&part).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("triple {t}: [{u}][{v}] on I={subset:?} differs from {part:?}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut bases = BTreeMap::new();
    for n in 1..=3usize {
        for j in 1..=n {
            match cell_birep(n, 1, j) {
                Ok(b) => {
                    bases.insert((n, j), b);
                }
                Err(e) => eprintln!("cell birep n={n} j={j}: {e}"),
            }
        }
    }
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("multiplication table", Box::new(multiplication_table)),
        ("F ⊗ F modulo greater cells", Box::new(f_squared)),
        ("adjunction", Box::new(adjunction)),
        ("egg-box and chain", Box::new(egg_box_and_chain)),
        ("cell birep action matrices", Box::new(|| cell_birep_structure(&bases))),
        ("classification", Box::new(classification)),
        ("localization ranks", Box::new(|| localization(&bases))),
        ("random products", Box::new(|| random_products(bases.get(&(2, 1)).ok_or("no base birep")?))),
    ];
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(()) => println!("PASS {} {name} ({:.2?})", idx + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", idx + 1);
            }
        }
    }
    if bases.len() != 6 {
        failed += 1;
    }
    println!("{} of {} criteria passed in {:.2?}", criteria.len() - failed.min(criteria.len()), criteria.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
