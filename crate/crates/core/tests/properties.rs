mod common;

use equiweight::corpus;
use equiweight::gf2::{preimage, subquotient, BitVec, GF2Matrix, Subspace};
use equiweight::groups::{
    bar_resolution, cyclic_resolution, default_resolution, group_cohomology, invariants, minimal_resolution, FiniteGroup, GModule, Resolution,
};
use equiweight::lfunctor::{LComplex, WindowContract};
use equiweight::model::VarietyModel;
use equiweight::smithhat::{build_hat_c, build_hat_c_randomized, hat_ss, hat_tot_euler, smith_decompose, HatDoubleComplex};
use equiweight::specseq::{hochschild_serre, Variant};
use equiweight::weights::{equivariant_weight_ss, row_table};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix(rows: usize, cols: usize, seed: u64) -> GF2Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density: f64 = rng.gen_range(0.05..0.95);
    let mut m = GF2Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen_bool(density));
        }
    }
    m
}

fn vector(n: usize, rng: &mut ChaCha8Rng) -> BitVec {
    let bits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    BitVec::from_bits(&bits)
}

fn valid_models() -> Vec<VarietyModel> {
    corpus::corpus().into_iter().filter_map(|(_, e)| e.ok().map(|e| e.model)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rank_nullity(rows in 0usize..=64, cols in 0usize..=64, seed: u64) {
        let m = matrix(rows, cols, seed);
        let r = m.rank();
        prop_assert_eq!(r + m.kernel().dim(), cols);
        prop_assert_eq!(m.image().dim(), r);
        prop_assert_eq!(m.transpose().rank(), r);
        for v in m.kernel().basis() {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subquotient_dimension(n in 1usize..40, gens in 0usize..12, sub in 0usize..12, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = Subspace::span(n, (0..gens).map(|_| vector(n, &mut rng)));
        let b = Subspace::span(n, (0..sub).map(|_| z.vector(&vector(z.dim(), &mut rng))));
        let sq = subquotient(&z, &b).unwrap();
        prop_assert_eq!(sq.dim() + b.dim(), z.dim());
        for (i, rep) in sq.representatives().iter().enumerate() {
            prop_assert_eq!(sq.class_of(rep).unwrap(), BitVec::unit(sq.dim(), i));
        }
    }

    #[test]
    fn span_is_canonical(n in 1usize..40, gens in 0usize..10, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<BitVec> = (0..gens).map(|_| vector(n, &mut rng)).collect();
        let a = Subspace::span(n, g.clone());
        // Mix the generators: reversed, each added to its successor, plus redundant combinations.
        let mut h: Vec<BitVec> = g.iter().rev().cloned().collect();
        for i in 1..h.len() {
            let prev = h[i - 1].clone();
            h[i].xor_assign(&prev);
        }
        h.push(a.vector(&vector(a.dim(), &mut rng)));
        let b = Subspace::span(n, h);
        prop_assert_eq!(a.basis(), b.basis());
        prop_assert_eq!(a.pivots(), b.pivots());
    }

    #[test]
    fn preimage_of_image_is_everything(rows in 0usize..30, cols in 0usize..30, seed: u64) {
        let m = matrix(rows, cols, seed);
        prop_assert_eq!(preimage(&m, &m.image()).unwrap().dim(), cols);
        prop_assert_eq!(preimage(&m, &Subspace::zero(rows)).unwrap(), m.kernel());
    }
}

/// Exactness by ranks alone: `dim F_i = rank Δ_i + rank Δ_{i+1}` below the top.
fn assert_exact(res: &Resolution, depth: usize, what: &str) {
    assert_eq!(res.map(0).rank(), 1, "{what}: augmentation");
    for i in 0..depth {
        let (a, b) = (res.map(i), res.map(i + 1));
        assert!(a.mul(b).is_zero(), "{what}: Δ_{i} Δ_{} ≠ 0", i + 1);
        assert_eq!(res.module(i).dim(), a.rank() + b.rank(), "{what}: not exact at F_{i}");
    }
}

#[test]
fn resolutions_are_exact_to_depth_eight() {
    for d in 1..=4 {
        let g = FiniteGroup::cyclic(d).unwrap();
        assert_exact(&default_resolution(&g, 9).unwrap(), 8, &format!("default Z/{d}"));
        assert_exact(&cyclic_resolution(d, 9).unwrap(), 8, &format!("periodic Z/{d}"));
    }
    let v = FiniteGroup::klein_four();
    let res = default_resolution(&v, 9).unwrap();
    assert_exact(&res, 8, "Klein four");
    // Minimal over GF(2): ranks 1, 2, 3, ...
    assert_eq!(&res.ranks()[..9], &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
    assert_exact(&bar_resolution(&v, 4).unwrap(), 3, "Klein four bar");
}

/// Permutation module on `G/H` for `H` given by its elements.
fn coset_module(g: &FiniteGroup, h: &[usize]) -> GModule {
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for x in 0..g.order() {
        let mut c: Vec<usize> = h.iter().map(|&y| g.mul(x, y)).collect();
        c.sort();
        if !cosets.contains(&c) {
            cosets.push(c);
        }
    }
    let n = cosets.len();
    let action = (0..g.order())
        .map(|a| {
            let mut m = GF2Matrix::zeros(n, n);
            for (j, c) in cosets.iter().enumerate() {
                let mut img: Vec<usize> = c.iter().map(|&y| g.mul(a, y)).collect();
                img.sort();
                m.set(cosets.iter().position(|d| *d == img).unwrap(), j, true);
            }
            m
        })
        .collect();
    GModule::new(g, n, action).unwrap()
}

fn subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out = vec![vec![g.identity()]];
    for a in 0..g.order() {
        let mut h = vec![g.identity()];
        let mut x = a;
        while x != g.identity() {
            h.push(x);
            x = g.mul(x, a);
        }
        h.sort();
        if !out.contains(&h) {
            out.push(h);
        }
    }
    out.push((0..g.order()).collect());
    out
}

/// Sum of random coset modules, conjugated by a random invertible matrix.
fn random_module(g: &FiniteGroup, seed: u64) -> GModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subs = subgroups(g);
    let mut m = GModule::zero(g);
    for _ in 0..rng.gen_range(1..4) {
        m = m.direct_sum(&coset_module(g, &subs[rng.gen_range(0..subs.len())]));
    }
    let n = m.dim();
    let p = loop {
        let p = matrix(n, n, rng.gen());
        if p.is_invertible() {
            break p;
        }
    };
    let pinv = p.inverse().unwrap();
    GModule::new(g, n, m.actions().iter().map(|a| p.mul(a).mul(&pinv)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cohomology_does_not_depend_on_the_resolution(d in 2usize..=4, seed: u64) {
        let g = FiniteGroup::cyclic(d).unwrap();
        let m = random_module(&g, seed);
        let depth = if d == 4 { 4 } else { 5 };
        let a = cyclic_resolution(d, depth).unwrap();
        let b = bar_resolution(&g, depth).unwrap();
        let c = minimal_resolution(&g, depth).unwrap();
        for n in 0..depth as i64 {
            let da = group_cohomology(&g, &m, n, &a).unwrap().dim();
            prop_assert_eq!(da, group_cohomology(&g, &m, n, &b).unwrap().dim(), "Z/{} n={}", d, n);
            prop_assert_eq!(da, group_cohomology(&g, &m, n, &c).unwrap().dim(), "Z/{} n={}", d, n);
        }
        if d == 2 {
            // H^0 = M^G and H^n = M^G / im(1+σ) for n > 0.
            let fixed = invariants(&g, &m).dim();
            let s = m.action(g.generators()[0]).add(&GF2Matrix::identity(m.dim()));
            prop_assert_eq!(group_cohomology(&g, &m, 0, &a).unwrap().dim(), fixed);
            prop_assert_eq!(group_cohomology(&g, &m, 3, &a).unwrap().dim(), fixed - s.rank());
        }
        if d % 2 == 1 {
            prop_assert_eq!(group_cohomology(&g, &m, 2, &a).unwrap().dim(), 0);
        }
    }

    #[test]
    fn klein_four_cohomology_does_not_depend_on_the_resolution(seed: u64) {
        let g = FiniteGroup::klein_four();
        let m = random_module(&g, seed);
        let a = minimal_resolution(&g, 4).unwrap();
        let b = bar_resolution(&g, 4).unwrap();
        for n in 0..4 {
            prop_assert_eq!(group_cohomology(&g, &m, n, &a).unwrap().dim(), group_cohomology(&g, &m, n, &b).unwrap().dim(), "n={}", n);
        }
    }
}

fn hat_matches(a: &HatDoubleComplex, b: &HatDoubleComplex) -> Result<(), String> {
    for (p, q) in a.dc.cells() {
        if a.dc.dim(p, q) != b.dc.dim(p, q) {
            return Err(format!("dim at ({p},{q})"));
        }
        if a.dc.h(p, q) != b.dc.h(p, q) {
            return Err(format!("d0 at ({p},{q})"));
        }
        if a.dc.v(p, q) != b.dc.v(p, q) {
            return Err(format!("d1 at ({p},{q})"));
        }
    }
    Ok(())
}

#[test]
fn connecting_map_is_independent_of_lifts() {
    for v in valid_models() {
        for seed in 0..20u64 {
            let k = 1 - (seed as i64 % 4);
            let canonical = build_hat_c(k, &v.fk, None).unwrap();
            let random = build_hat_c_randomized(k, &v.fk, None, seed).unwrap();
            if let Err(e) = hat_matches(&canonical, &random) {
                panic!("{} k={k} seed {seed}: {e}", v.name);
            }
        }
    }
}

#[test]
fn pages_square_to_zero_and_account_for_the_abutment() {
    for v in valid_models() {
        let c = v.default_contract();
        let l = LComplex::new(v.complex(), None, c).unwrap();
        let hs = hochschild_serre(&l, c.r_max);
        let eq = equivariant_weight_ss(&v.fk, None, c, None).unwrap();
        for (what, ss) in [("HS", &hs), ("weight", &eq.ss)] {
            ss.check_d_squared().unwrap_or_else(|e| panic!("{} {what}: {e}", v.name));
            ss.check_page_transitions().unwrap_or_else(|e| panic!("{} {what}: {e}", v.name));
            for n in ss.fc.chain.degrees() {
                assert_eq!(ss.infinity_total(n), ss.fc.chain.betti(n), "{} {what}: E^∞ in total degree {n}", v.name);
            }
        }
        assert!(eq.abutment_consistent(), "{}: Ω filtration against E^∞", v.name);
    }
}

fn euler_identity(fk: &equiweight::complexes::FilteredGComplex, contract: WindowContract, ks: impl Iterator<Item = i64>) -> Result<(), String> {
    let t = row_table(fk, None, contract, false).map_err(|e| e.to_string())?;
    for k in ks {
        let hc = build_hat_c(k, fk, None).map_err(|e| e.to_string())?;
        let ii = hat_ss(&hc, Variant::II, 4).euler_characteristic(Some(1));
        let i = hat_ss(&hc, Variant::I, 4).euler_characteristic(None);
        let b = t.bkg_value(k).map_err(|e| e.to_string())?;
        if !(ii == b && i == b && hat_tot_euler(&hc) == b) {
            return Err(format!("k={k}: χ(II, page 1) = {ii}, Σ qB = {b}, χ(I) = {i}"));
        }
    }
    Ok(())
}

#[test]
fn euler_identity_on_the_corpus() {
    for v in valid_models() {
        let c = v.default_contract();
        euler_identity(&v.fk, c, c.p_min..=v.dimension() + 1).unwrap_or_else(|e| panic!("{}: {e}", v.name));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn euler_identity_on_random_models(seed: u64, d in prop::sample::select(vec![1usize, 2, 3]), depth in 1i64..=2) {
        let fk = common::random_filtered(seed, d, -depth);
        let r = euler_identity(&fk, WindowContract::for_dimension(2), -3..=3);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn random_models_have_consistent_pages(seed: u64, d in prop::sample::select(vec![2usize, 3])) {
        let fk = common::random_filtered(seed, d, -2);
        let eq = equivariant_weight_ss(&fk, None, WindowContract::for_dimension(2), None).unwrap();
        prop_assert!(eq.ss.check_d_squared().is_ok());
        prop_assert!(eq.ss.check_page_transitions().is_ok());
        prop_assert!(eq.abutment_consistent());
        for n in eq.ss.fc.chain.degrees() {
            prop_assert_eq!(eq.ss.infinity_total(n), eq.ss.fc.chain.betti(n));
        }
    }

    #[test]
    fn random_lifts_agree_on_random_models(seed: u64, k in -2i64..=2) {
        let fk = common::random_filtered(seed, 2, -2);
        let a = build_hat_c(k, &fk, None).unwrap();
        let b = build_hat_c_randomized(k, &fk, None, seed ^ 0x5eed).unwrap();
        let r = hat_matches(&a, &b);
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_decomposition_round_trips(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let models: Vec<VarietyModel> = valid_models()
            .into_iter()
            .filter(|v| v.is_z2() && v.fixed_cells.is_some() && v.name != "smith_violation")
            .collect();
        let v = &models[rng.gen_range(0..models.len())];
        let cx = v.complex();
        let k = rng.gen_range(cx.q_min()..=cx.q_max());
        let alpha = rng.gen_range(v.fk.alpha_min()..=v.fk.alpha_max());
        let inv = invariants(&cx.group, &cx.module(k)).intersect(&v.fk.f(alpha, k));
        let c = inv.vector(&vector(inv.dim(), &mut rng));
        let s = smith_decompose(v, &c, alpha, k).unwrap();
        let sigma = cx.module(k).action(cx.group.generators()[0]).add(&GF2Matrix::identity(c.len()));
        prop_assert_eq!(s.restriction.xor(&sigma.mul_vec(&s.c_prime)), c);
        prop_assert!(v.fk.f(alpha + 1, k).contains(&s.c_prime));
    }
}

#[test]
fn corpus_round_trips_through_the_canonical_form() {
    for (stem, e) in corpus::corpus() {
        let Ok(e) = e else { continue };
        let once = corpus::to_json(&e.model, &e.file);
        let again = corpus::parse_str(&once).unwrap_or_else(|err| panic!("{stem}: {err}"));
        assert_eq!(corpus::to_json(&again.model, &again.file), once, "{stem}");
        assert_eq!(again.model.fk.filtration.f(again.model.fk.alpha_min(), 0), e.model.fk.filtration.f(e.model.fk.alpha_min(), 0));
    }
}
