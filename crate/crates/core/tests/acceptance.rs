//! One PASS/FAIL line per acceptance criterion. All comparisons are exact integer equality.

mod common;

use equiweight::corpus;
use equiweight::gf2::GF2Matrix;
use equiweight::groups::{bar_resolution, cyclic_resolution, default_resolution, group_cohomology, minimal_resolution, FiniteGroup, GModule};
use equiweight::lfunctor::{LComplex, WindowContract};
use equiweight::model::VarietyModel;
use equiweight::smithhat::{b_prime_value, build_hat_c, build_hat_c_randomized, hat_e1_check, hat_ss, smith_first_failure};
use equiweight::specseq::{hochschild_serre, SpectralSequence, Variant};
use equiweight::verify::{verify_corpus, BlockResult};
use equiweight::weights::{
    beta_g_odd, equivariant_weight_ss, fixed_point_homology_relation, invariant_betti_relation, odd_order_collapse_holds, row_table,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

/// Integer invariants are compared exactly.
const TOLERANCE: i64 = 0;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn model(stem: &str) -> VarietyModel {
    corpus::corpus_entry(stem).unwrap_or_else(|e| panic!("{stem}: {e}")).model
}

fn models() -> Vec<VarietyModel> {
    corpus::corpus().into_iter().filter_map(|(_, e)| e.ok().map(|e| e.model)).collect()
}

fn results() -> &'static [BlockResult] {
    static R: OnceLock<Vec<BlockResult>> = OnceLock::new();
    R.get_or_init(verify_corpus)
}

/// The named expected blocks of `entry` evaluate to their recorded values.
fn blocks(entry: &str, names: &[&str]) -> Check {
    for n in names {
        let r = results().iter().find(|r| r.entry == entry && r.block == *n).ok_or_else(|| format!("{entry} has no block {n}"))?;
        if !r.pass {
            return Err(format!("{entry}/{n}: {}", r.detail));
        }
    }
    Ok(())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(got: i64, want: i64, what: &str) -> Check {
    ensure((got - want).abs() <= TOLERANCE, || format!("{what}: got {got}, want {want}"))
}

fn homology_dims(v: &VarietyModel, ks: &[i64]) -> Result<Vec<i64>, String> {
    let l = LComplex::new(v.complex(), None, v.default_contract()).map_err(|e| e.to_string())?;
    ks.iter().map(|&k| l.homology_dim(k).map(|d| d as i64).map_err(|e| e.to_string())).collect()
}

const K_DOWN: [i64; 6] = [2, 1, 0, -1, -2, -3];

fn hs(v: &VarietyModel) -> SpectralSequence {
    let c = v.default_contract();
    hochschild_serre(&LComplex::new(v.complex(), None, c).unwrap(), c.r_max)
}

fn criterion_1() -> Check {
    let v = model("sphere_reflection");
    let got = homology_dims(&v, &K_DOWN)?;
    ensure(got == [1, 1, 2, 2, 2, 2], || format!("dims {got:?}"))?;
    let ss = hs(&v);
    let (p_min, _) = v.default_contract().guaranteed_range();
    for p in p_min..=0 {
        for q in 0..=2 {
            let e2 = ss.dim(Some(2), p, q).map_err(|e| e.to_string())?;
            let inf = ss.dim(None, p, q).map_err(|e| e.to_string())?;
            let want = if q == 1 { 0 } else { 1 };
            ensure(e2 == want && inf == e2, || format!("E^2/E^inf at ({p},{q}) = {e2}/{inf}"))?;
        }
    }
    blocks("sphere_reflection", &["hs_e2", "hs_degenerates"])
}

fn criterion_2() -> Check {
    let v = model("sphere_antipodal");
    let got = homology_dims(&v, &K_DOWN)?;
    ensure(got == [1, 1, 1, 0, 0, 0], || format!("dims {got:?}"))?;
    let ss = hs(&v);
    ensure(ss.converged_at() == Some(4), || format!("converged at {:?}", ss.converged_at()))?;
    blocks("sphere_antipodal", &["d3_p0", "hs_e4", "hs_converges"])
}

fn criterion_3() -> Check {
    let v = model("figure8_swap");
    let eq = equivariant_weight_ss(&v.fk, None, v.default_contract(), None).map_err(|e| e.to_string())?;
    for k in -3..=0 {
        let (lo, hi) = (eq.omega_dim(k, -1).map_err(|e| e.to_string())?, eq.omega_dim(k, 0).map_err(|e| e.to_string())?);
        ensure((lo, hi) == (0, 1), || format!("Ω at k={k}: {lo} ⊂ {hi}"))?;
    }
    let top = (eq.omega_dim(1, -1).map_err(|e| e.to_string())?, eq.omega_dim(1, 0).map_err(|e| e.to_string())?);
    ensure(top == (1, 1), || format!("Ω at k=1: {top:?}"))?;
    blocks("figure8_swap", &["weight_e2", "d2_X1", "weight_e3", "weight_converges", "omega"])
}

fn criterion_4() -> Check {
    let v = model("figure8_flip");
    let eq = equivariant_weight_ss(&v.fk, None, v.default_contract(), None).map_err(|e| e.to_string())?;
    for k in -3..=1 {
        let got = (eq.omega_dim(k, -1).map_err(|e| e.to_string())?, eq.omega_dim(k, 0).map_err(|e| e.to_string())?);
        let want = if k == 1 { (1, 2) } else { (1, 3) };
        ensure(got == want, || format!("Ω at k={k}: {got:?}"))?;
    }
    blocks("figure8_flip", &["weight_e2", "d2_zero", "weight_converges", "omega"])
}

fn b_values(action: u8, k: i64) -> i64 {
    match (action, k) {
        (_, k) if k > 1 => 0,
        (1, _) => 1,
        (_, 1) => 1,
        (_, 0) => 2,
        _ => 3,
    }
}

fn criterion_5() -> Check {
    for (stem, action) in [("figure8_swap", 1), ("figure8_flip", 2)] {
        let v = model(stem);
        let t = row_table(&v.fk, None, v.default_contract(), v.flags.nash_faithful).map_err(|e| e.to_string())?;
        for k in -3..=3 {
            let want = b_values(action, k);
            close(b_prime_value(&v, k).map_err(|e| e.to_string())?, want, &format!("{stem} B'_{k}"))?;
            let r = t.bkg(k).map_err(|e| e.to_string())?;
            ensure(r.nash_faithful, || format!("{stem}: row route not marked Nash-faithful"))?;
            close(r.value, want, &format!("{stem} B_{k} from rows"))?;
        }
    }
    Ok(())
}

fn euler_identity(fk: &equiweight::complexes::FilteredGComplex, contract: WindowContract, ks: impl Iterator<Item = i64>) -> Check {
    let t = row_table(fk, None, contract, false).map_err(|e| e.to_string())?;
    for k in ks {
        let hc = build_hat_c(k, fk, None).map_err(|e| e.to_string())?;
        let ii = hat_ss(&hc, Variant::II, 4).euler_characteristic(Some(1));
        let i = hat_ss(&hc, Variant::I, 4).euler_characteristic(None);
        let b = t.bkg_value(k).map_err(|e| e.to_string())?;
        ensure(ii == b && i == b, || format!("k={k}: χ(II, page 1) = {ii}, Σ qB = {b}, χ(I) = {i}"))?;
    }
    Ok(())
}

fn criterion_6() -> Check {
    for v in models() {
        let c = v.default_contract();
        euler_identity(&v.fk, c, c.p_min..=v.dimension() + 1).map_err(|e| format!("{}: {e}", v.name))?;
    }
    // Random filtered models carry no faithfulness guarantee at all.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..24 {
        let seed: u64 = rng.gen();
        let d = [1, 2, 3][rng.gen_range(0..3)];
        let fk = common::random_filtered(seed, d, -rng.gen_range(1..=2));
        euler_identity(&fk, WindowContract::for_dimension(2), -3..=3).map_err(|e| format!("random model {seed} (Z/{d}): {e}"))?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut n = 0;
    for v in models().into_iter().filter(|v| v.is_z2() && v.fixed_cells.is_some()) {
        let got = smith_first_failure(&v).map_err(|e| e.to_string())?;
        if v.name == "smith_violation" {
            ensure(got == Some((-2, 0)), || format!("negative control fails at {got:?}"))?;
        } else {
            ensure(got.is_none(), || format!("{}: fails at {got:?}", v.name))?;
            n += 1;
        }
    }
    ensure(n >= 8, || format!("only {n} models checked"))
}

fn criterion_8() -> Check {
    for (stem, action) in [("figure8_swap", 1), ("figure8_flip", 2)] {
        let v = model(stem);
        for k in v.default_contract().p_min..=v.dimension() + 1 {
            let bad = hat_e1_check(&v, k).map_err(|e| e.to_string())?;
            ensure(bad.is_empty(), || format!("{stem} k={k}: {:?}", bad[0]))?;
            close(b_prime_value(&v, k).map_err(|e| e.to_string())?, b_values(action, k), &format!("{stem} B'_{k}"))?;
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    for (whole, parts) in [("figure8_swap", ["figure8_swap_point", "figure8_swap_arcs"]), ("circle_reflection", ["circle_reflection_point", "circle_reflection_arc"])] {
        let w = model(whole);
        let ps: Vec<VarietyModel> = parts.iter().map(|p| model(p)).collect();
        for k in -3..=2 {
            let sum = ps.iter().map(|p| b_prime_value(p, k)).sum::<equiweight::Result<i64>>().map_err(|e| e.to_string())?;
            close(b_prime_value(&w, k).map_err(|e| e.to_string())?, sum, &format!("{whole} B'_{k} vs parts"))?;
            let rows = |v: &VarietyModel| row_table(&v.fk, None, v.default_contract(), true).and_then(|t| t.bkg_value(k));
            let rsum = ps.iter().map(rows).sum::<equiweight::Result<i64>>().map_err(|e| e.to_string())?;
            close(rows(&w).map_err(|e| e.to_string())?, rsum, &format!("{whole} B_{k} from rows vs parts"))?;
        }
    }
    Ok(())
}

fn criterion_10() -> Check {
    let odd: Vec<VarietyModel> = models().into_iter().filter(|v| v.complex().group.order() == 3).collect();
    ensure(odd.len() >= 4, || format!("{} odd-order entries", odd.len()))?;
    for v in &odd {
        let k = v.complex();
        let l = LComplex::new(k, None, v.default_contract()).map_err(|e| e.to_string())?;
        for n in v.default_contract().p_min..=v.dimension() + 1 {
            let h = equiweight::complexes::homology(k, n);
            let fixed = equiweight::groups::invariants(&k.group, &h.module).dim();
            let got = l.homology_dim(n).map_err(|e| e.to_string())?;
            ensure(got == fixed, || format!("{} k={n}: {got} vs (H_k)^G = {fixed}", v.name))?;
        }
        ensure(odd_order_collapse_holds(&v.fk).map_err(|e| e.to_string())?, || format!("{}: page 2 not collapsed", v.name))?;
    }
    let b = |stem: &str, q| beta_g_odd(&model(stem).fk, q).map(|r| r.value).map_err(|e| e.to_string());
    for q in 0..=1 {
        close(b("z3_rotating_circle", q)?, b("z3_rotating_vertices", q)? + b("z3_rotating_edges", q)?, &format!("β^G_{q} additivity"))?;
    }
    Ok(())
}

fn criterion_11() -> Check {
    let chosen: Vec<VarietyModel> = models().into_iter().filter(|v| v.is_z2() && v.flags.compact_nonsingular()).collect();
    for need in ["sphere_reflection", "sphere_antipodal", "circle_reflection", "circle_trivial", "point_z2"] {
        ensure(chosen.iter().any(|v| v.name == need), || format!("{need} is not flagged compact nonsingular"))?;
    }
    for v in &chosen {
        let c = v.default_contract();
        for q in c.p_min..=v.dimension() + 1 {
            let r = invariant_betti_relation(v, q, c).map_err(|e| format!("{}: {e}", v.name))?;
            ensure(r.equal, || format!("{} q={q}: {} vs {}", v.name, r.lhs, r.rhs))?;
        }
    }
    Ok(())
}

fn criterion_12() -> Check {
    let mut n = 0;
    for v in models().into_iter().filter(|v| v.is_z2() && v.fixed_model().is_ok()) {
        let c = v.default_contract();
        let l = LComplex::new(v.complex(), None, c).map_err(|e| e.to_string())?;
        for k in c.p_min..=v.dimension() + 1 {
            let r = fixed_point_homology_relation(&v, k, &l).map_err(|e| format!("{}: {e}", v.name))?;
            ensure(r.equal, || format!("{} k={k}: {} vs {}", v.name, r.lhs, r.rhs))?;
        }
        n += 1;
    }
    ensure(n >= 8, || format!("only {n} models checked"))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> GF2Matrix {
    let p: f64 = rng.gen_range(0.05..0.95);
    let mut m = GF2Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_bool(p));
        }
    }
    m
}

fn criterion_13() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..1000 {
        let (r, c) = (rng.gen_range(0..=64), rng.gen_range(0..=64));
        let m = random_matrix(&mut rng, r, c);
        ensure(m.rank() + m.kernel().dim() == c, || format!("rank-nullity case {case} ({r}x{c})"))?;
    }

    let mut groups: Vec<FiniteGroup> = (1..=4).map(|d| FiniteGroup::cyclic(d).unwrap()).collect();
    groups.push(FiniteGroup::klein_four());
    for g in &groups {
        let res = default_resolution(g, 9).map_err(|e| e.to_string())?;
        ensure(res.map(0).rank() == 1, || "augmentation".into())?;
        for i in 0..8 {
            let exact = res.map(i).mul(res.map(i + 1)).is_zero() && res.module(i).dim() == res.map(i).rank() + res.map(i + 1).rank();
            ensure(exact, || format!("group of order {}: not exact at F_{i}", g.order()))?;
        }
    }

    for d in 2..=3 {
        let g = FiniteGroup::cyclic(d).unwrap();
        let m = GModule::regular(&g).direct_sum(&GModule::trivial(&g, 2));
        let (a, b) = (cyclic_resolution(d, 5).map_err(|e| e.to_string())?, bar_resolution(&g, 5).map_err(|e| e.to_string())?);
        for n in 0..5 {
            let (x, y) = (group_cohomology(&g, &m, n, &a).unwrap().dim(), group_cohomology(&g, &m, n, &b).unwrap().dim());
            ensure(x == y, || format!("Z/{d} H^{n}: {x} vs {y}"))?;
        }
    }
    let v4 = FiniteGroup::klein_four();
    let m = GModule::regular(&v4).direct_sum(&GModule::trivial(&v4, 1));
    let (a, b) = (minimal_resolution(&v4, 4).unwrap(), bar_resolution(&v4, 4).unwrap());
    for n in 0..4 {
        let (x, y) = (group_cohomology(&v4, &m, n, &a).unwrap().dim(), group_cohomology(&v4, &m, n, &b).unwrap().dim());
        ensure(x == y, || format!("Klein four H^{n}: {x} vs {y}"))?;
    }

    for v in models() {
        let c = v.default_contract();
        let eq = equivariant_weight_ss(&v.fk, None, c, None).map_err(|e| e.to_string())?;
        for ss in [&hs(&v), &eq.ss] {
            ss.check_d_squared().map_err(|e| format!("{}: {e}", v.name))?;
            for n in ss.fc.chain.degrees() {
                ensure(ss.infinity_total(n) == ss.fc.chain.betti(n), || format!("{}: E^∞ total degree {n}", v.name))?;
            }
        }
        for seed in 0..20u64 {
            let k = 1 - (seed as i64 % 4);
            let a = build_hat_c(k, &v.fk, None).map_err(|e| e.to_string())?;
            let b = build_hat_c_randomized(k, &v.fk, None, seed).map_err(|e| e.to_string())?;
            let same = a.dc.cells().all(|(p, q)| a.dc.dim(p, q) == b.dc.dim(p, q) && a.dc.h(p, q) == b.dc.h(p, q) && a.dc.v(p, q) == b.dc.v(p, q));
            ensure(same, || format!("{}: lift seed {seed} changes d0 at k={k}", v.name))?;
        }
    }
    Ok(())
}

// Runs without the libtest harness so the report is printed on every run.
fn main() {
    let criteria: [Criterion; 13] = [
        ("sphere, reflection: equivariant homology and degenerate HS page", criterion_1),
        ("sphere, antipodal: equivariant homology, d3([p0]) = [X], page 4", criterion_2),
        ("figure-eight, lobe swap: weight pages, d2([X1]) = [X], Ω filtration", criterion_3),
        ("figure-eight, lobe flip: vanishing d2, Ω filtration", criterion_4),
        ("B_k^G by the B' route and the row route", criterion_5),
        ("Euler identity for the hat double complex on every model", criterion_6),
        ("Smith exactness and its negative control", criterion_7),
        ("hat page-1 formula and B' formula", criterion_8),
        ("additivity over the shipped triples", criterion_9),
        ("odd-order collapse", criterion_10),
        ("invariant Betti relation on compact nonsingular models", criterion_11),
        ("fixed-point formula for equivariant homology", criterion_12),
        ("property suites", criterion_13),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match r {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(e) => {
                println!("criterion {:>2}: FAIL  {name}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
