//! Acceptance suite: one line per criterion, exit status 1 if any fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pointed_coh::algebra::{Monomial, PBWElement, Presentation};
use pointed_coh::cocycles::{eta_alpha, f_alpha_for_datum, xi_alpha, ComparisonMaps};
use pointed_coh::cohomology::{CohMonomial, Cohomology};
use pointed_coh::cyclo::CycNum;
use pointed_coh::datum::{presets, CartanDatum, FiniteAbelianGroup};
use pointed_coh::oracle::{BarComplex, CheckMode, CochainFn};
use pointed_coh::resolution::{binomial, Resolution};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_qci(rng: &mut ChaCha8Rng, n: &[u32], order: u32) -> Presentation {
    let t = n.len();
    let mut q = vec![vec![0i64; t]; t];
    for (i, row) in q.iter_mut().enumerate() {
        for e in row.iter_mut().skip(i + 1) {
            *e = rng.gen_range(0..order as i64);
        }
    }
    Presentation::qci(&q, order, n)
}

fn nilpotency_tuples(theta: usize, choices: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..theta {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                choices.iter().map(move |&c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn resolution_exactness() -> Outcome {
    let mut checked = 0usize;
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for theta in 1..=3 {
            for n in nilpotency_tuples(theta, &[2, 3, 5]) {
                let p = random_qci(&mut rng, &n, 30);
                let res = Resolution::new(&p).map_err(|e| e.to_string())?;
                let rep = res.verify_exactness(8);
                ensure(rep.passed(), || format!("seed {seed}, N = {n:?}: {:?}", rep.failures.first()))?;
                checked += rep.generators_checked;
            }
        }
    }
    Ok(format!("195 data, {checked} generators, degree ≤ 8"))
}

fn dimension_formula() -> Outcome {
    let data: Vec<(Vec<Vec<i64>>, u32, Vec<u32>)> = vec![
        (vec![vec![0]], 1, vec![2]),
        (vec![vec![0]], 1, vec![3]),
        (vec![vec![0, 1], vec![0, 0]], 2, vec![2, 2]),
        (vec![vec![0, 1], vec![0, 0]], 3, vec![3, 3]),
        (vec![vec![0, 1], vec![0, 0]], 6, vec![2, 3]),
        (vec![vec![0, 0], vec![0, 0]], 1, vec![3, 2]),
        (vec![vec![0, 1, 1], vec![0, 0, 1], vec![0, 0, 0]], 2, vec![2, 2, 2]),
        (vec![vec![0, 1, 2], vec![0, 0, 1], vec![0, 0, 0]], 6, vec![2, 2, 3]),
    ];
    for (q, order, n) in &data {
        let p = Presentation::qci(q, *order, n);
        let dims = BarComplex::new(&p).map_err(|e| e.to_string())?.ext_dims(4).map_err(|e| e.to_string())?;
        let theta = n.len() as u64;
        let expect: Vec<u64> = (0..=4).map(|k| binomial(k + theta - 1, theta - 1)).collect();
        ensure(dims == expect, || format!("N = {n:?}: oracle {dims:?}, binomial {expect:?}"))?;
    }
    Ok(format!("{} data, n ≤ 4", data.len()))
}

fn symmetric_form(d: &CartanDatum, a: &[i64], b: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..a.len() {
        for j in 0..b.len() {
            s += a[i] * d.cartan.entry(i, j) * b[j];
        }
    }
    s
}

fn relations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let gk = presets::a2(5);
    let gk_gr = Presentation::gr_of_datum(&gk, false).map_err(|e| e.to_string())?;
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (&gk_gr.generators()[i].root.coords, &gk_gr.generators()[j].root.coords);
            ensure(
                gk_gr.q_exponent(i, j).rem_euclid(5) == symmetric_form(&gk, a, b).rem_euclid(5),
                || format!("q_{}{} is not q^⟨β,β'⟩", i + 1, j + 1),
            )?;
        }
    }
    let data = vec![
        ("N=(2,3)", random_qci(&mut rng, &[2, 3], 6)),
        ("N=(2,2,3)", random_qci(&mut rng, &[2, 2, 3], 6)),
        ("N=(2,5,3)", random_qci(&mut rng, &[2, 5, 3], 30)),
        ("u_q(sl3)+ Gr", gk_gr),
    ];
    let mut count = 0;
    let mut squares = (0, 0);
    for (name, p) in &data {
        let h = Cohomology::new(p).map_err(|e| e.to_string())?;
        for r in h.check_relations(6) {
            ensure(r.chain_level && r.class_level, || format!("{name}: {} fails at {:?}", r.name, r.failure))?;
            count += 1;
            if r.name.contains('²') {
                if r.name.ends_with("= 0") {
                    squares.1 += 1;
                } else {
                    squares.0 += 1;
                }
            }
        }
    }
    ensure(squares.0 > 0 && squares.1 > 0, || "η² cases not both covered".into())?;
    Ok(format!("{count} relations on {} data, η² = ξ ({}×) and η² = 0 ({}×)", data.len(), squares.0, squares.1))
}

fn smash_invariants() -> Outcome {
    let z2 = FiniteAbelianGroup::new(vec![2]).map_err(|e| e.to_string())?;
    let (sign, triv) = (z2.character(&[1]), z2.character(&[0]));
    let mut data: Vec<(String, Presentation)> = vec![(
        "sweedler".into(),
        Presentation::gr_of_datum(&presets::sweedler(), true).map_err(|e| e.to_string())?,
    )];
    for (q, chi) in [
        (1, [sign.clone(), sign.clone()]),
        (0, [sign.clone(), sign.clone()]),
        (1, [sign.clone(), triv.clone()]),
        (0, [triv.clone(), sign.clone()]),
    ] {
        let p = Presentation::qci_smash(&[vec![0, q], vec![0, 0]], 2, &[2, 2], z2.clone(), &chi)
            .map_err(|e| e.to_string())?;
        data.push((format!("q12 = {}, χ = ({}, {})", if q == 1 { -1 } else { 1 }, chi[0], chi[1]), p));
    }
    for (name, p) in &data {
        let dims = BarComplex::new(p).map_err(|e| e.to_string())?.ext_dims(4).map_err(|e| e.to_string())?;
        let h = Cohomology::new(p).map_err(|e| e.to_string())?;
        let inv: Vec<u64> = h.invariant_basis(4).iter().map(|b| b.len() as u64).collect();
        ensure(dims == inv, || format!("{name}: oracle {dims:?}, invariants {inv:?}"))?;
    }
    Ok(format!("{} smash products, n ≤ 4", data.len()))
}

fn a1_cubed_witness() -> Outcome {
    let target = CohMonomial { b: vec![0; 3], c: vec![1, 1, 1] };
    for ell in [3, 5, 7] {
        let p = Presentation::gr_of_datum(&presets::a1_cubed(ell), true).map_err(|e| e.to_string())?;
        let h = Cohomology::new(&p).map_err(|e| e.to_string())?;
        let w = h.odd_invariant_witness();
        ensure(w.as_ref() == Some(&target) && target.degree() == 3, || format!("ℓ = {ell}: witness {w:?}"))?;
    }
    Ok(format!("{target} (degree 3) for ℓ = 3, 5, 7"))
}

fn a2_a1_graded() -> Outcome {
    let ell = 5;
    let d = presets::a2_a1(ell);
    let q = |k: i64| CycNum::root_of_unity(ell, k);
    let r = Presentation::nichols_a2(&d, true).map_err(|e| e.to_string())?;
    let gr = r.assoc_graded().map_err(|e| e.to_string())?;
    let nf = |p: &Presentation, w: &str| p.normal_form(&p.parse_word(w).map_err(|e| e.to_string())?).map_err(|e| e.to_string());
    let mono = |e: [u32; 3], c: CycNum| PBWElement::monomial(Monomial::x(e.to_vec()), c);
    let mut expect = mono([1, 0, 1], q(1));
    expect.add_term(Monomial::x(vec![0, 1, 0]), -q(1));
    ensure(nf(&r, "x2 x1")? == expect, || "x2x1 = q x1x2 − q x12 fails in R".into())?;
    let x12 = &r.generators()[1].label;
    let x12x1 = format!("x{x12} x1");
    let x2x12 = format!("x2 x{x12}");
    for p in [&r, &gr] {
        ensure(nf(p, &x12x1)? == mono([1, 1, 0], q(-1)), || "x12x1 = q⁻¹ x1x12 fails".into())?;
        ensure(nf(p, &x2x12)? == mono([0, 1, 1], q(-1)), || "x2x12 = q⁻¹ x12x2 fails".into())?;
    }
    ensure(nf(&gr, "x2 x1")? == mono([1, 0, 1], q(1)), || "x2x1 = q x1x2 fails in Gr R".into())?;
    let full = Presentation::gr_of_datum(&d, true).map_err(|e| e.to_string())?;
    ensure(full.rank() == 4, || format!("Gr R has {} root vectors", full.rank()))?;
    let a2_part = |p: &Presentation, k: usize| -> Vec<i64> {
        let c = &p.generators()[k].root.coords;
        vec![c[0], c[1], c.get(2).copied().unwrap_or(0)]
    };
    let mut compared = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            let pos = |k: usize| (0..gr.rank()).find(|&m| a2_part(&gr, m) == a2_part(&full, k));
            if let (Some(a), Some(b)) = (pos(i), pos(j)) {
                ensure(a < b, || "root vector order differs between R and Gr R".into())?;
                ensure((full.q_exponent(i, j) - gr.q_exponent(a, b)).rem_euclid(ell as i64) == 0, || {
                    format!("q-matrix of Gr R differs at ({}, {})", i + 1, j + 1)
                })?;
                compared += 1;
            }
        }
    }
    ensure(compared == 3, || format!("{compared} A2 root pairs matched"))?;
    let h = Cohomology::new(&full).map_err(|e| e.to_string())?;
    let c: Vec<u32> = full.generators().iter().map(|g| u32::from(g.root.is_simple())).collect();
    let target = CohMonomial { b: vec![0; 4], c };
    ensure(h.is_invariant(&target), || format!("{target} is not invariant"))?;
    let w = h.odd_invariant_witness();
    ensure(w.as_ref() == Some(&target), || format!("witness {w:?}, expected {target}"))?;
    Ok(format!("Gr R of type A1^4, E1 odd witness {target}"))
}

fn uq_sl2_page() -> Outcome {
    let p = Presentation::gr_of_datum(&presets::uq_sl2(3, false), true).map_err(|e| e.to_string())?;
    let series = Cohomology::new(&p).map_err(|e| e.to_string())?.hilbert_series(8, true);
    ensure(series == vec![1, 0, 3, 0, 5, 0, 7, 0, 9], || format!("invariant series {series:?}"))?;
    let dims = BarComplex::new(&Presentation::uq_sl2(3))
        .map_err(|e| e.to_string())?
        .ext_dims(2)
        .map_err(|e| e.to_string())?;
    ensure(dims == vec![1, 0, 3], || format!("oracle {dims:?}"))?;
    Ok(format!("series {series:?}, oracle ext ≤ 2 {dims:?}"))
}

fn cocycle_suite() -> Outcome {
    let r = Presentation::nichols_a2(&presets::a2(3), true).map_err(|e| e.to_string())?;
    let bar = BarComplex::new(&r).map_err(|e| e.to_string())?;
    let mut evaluations = 0;
    for a in 0..r.rank() {
        let xi = xi_alpha(&bar, &r, a).map_err(|e| e.to_string())?;
        let rep = bar.is_cocycle(&xi, CheckMode::Exhaustive);
        ensure(rep.evaluations == 26 * 26 * 26 && rep.passed(), || format!("δξ_{} ≠ 0 at {:?}", a + 1, rep.violations.first()))?;
        evaluations += 26 * 26 * 26;
        if !r.generators()[a].root.is_simple() {
            ensure(eta_alpha(&bar, &r, a).is_err(), || "η for a non-simple root vector was built".into())?;
            continue;
        }
        let eta = eta_alpha(&bar, &r, a).map_err(|e| e.to_string())?;
        let rep = bar.is_cocycle(&eta, CheckMode::Exhaustive);
        ensure(rep.passed(), || format!("δη_{} ≠ 0", a + 1))?;
    }
    let d = presets::uq_sl2(3, true);
    let mut sampled = 0;
    for a in 0..2 {
        let (_, bar, f) = f_alpha_for_datum(&d, a).map_err(|e| e.to_string())?;
        let rep = bar.is_cocycle(&f, CheckMode::Sampled { samples: 10_000, seed: a as u64 });
        ensure(rep.passed(), || format!("δf_{} ≠ 0 at {:?}", a + 1, rep.violations.first()))?;
        let near = bar.is_cocycle_on(&f, f.near_support_tuples(&bar, 10_000, 100 + a as u64));
        ensure(near.passed(), || format!("δf_{} ≠ 0 near its support at {:?}", a + 1, near.violations.first()))?;
        ensure(f.arity() == 6, || format!("f_{} has arity {}", a + 1, f.arity()))?;
        sampled += rep.evaluations + near.evaluations;
    }
    Ok(format!("ξ_α exhaustive ({evaluations} tuples), f_α sampled ({sampled} tuples), 0 violations"))
}

fn comparison() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut data = vec![];
    for n in [vec![2], vec![3], vec![5], vec![2, 3], vec![3, 3], vec![2, 2, 3], vec![3, 2, 5]] {
        data.push(random_qci(&mut rng, &n, 30));
    }
    data.push(Presentation::gr_of_datum(&presets::a1_cubed(3), false).map_err(|e| e.to_string())?);
    for p in &data {
        let rep = ComparisonMaps::new(p).map_err(|e| e.to_string())?.verify().map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("{:?}", rep.failures))?;
    }
    Ok(format!("{} data with θ ≤ 3: squares and pullbacks", data.len()))
}

fn shipped_data() -> Vec<(String, CartanDatum)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut out = vec![];
    let mut entries: Vec<_> = std::fs::read_dir(&dir).expect("data directory").flatten().map(|e| e.path()).collect();
    entries.sort();
    for path in entries {
        if path.extension().and_then(|e| e.to_str()) != Some("datum") {
            continue;
        }
        let text = std::fs::read_to_string(&path).expect("readable datum");
        let d = CartanDatum::from_toml_str(&text).expect("parsable datum");
        if d.validate().is_ok() {
            out.push((path.file_stem().unwrap().to_string_lossy().into_owned(), d));
        }
    }
    out
}

fn finite_generation() -> Outcome {
    let data = shipped_data();
    let mut names = vec![];
    for (name, d) in &data {
        let p = Presentation::gr_of_datum(d, true).map_err(|e| e.to_string())?;
        let w = Cohomology::new(&p).map_err(|e| e.to_string())?.fingen_witness().map_err(|e| format!("{name}: {e}"))?;
        names.push(format!("{name}({} gens, deg ≤ {})", w.module_generators.len(), w.verified_through));
    }
    ensure(data.len() >= 6, || format!("only {} shipped data validate", data.len()))?;
    Ok(names.join(", "))
}

fn filtration_order() -> Outcome {
    let data = vec![
        Presentation::qci(&[vec![0, 1, 2], vec![0, 0, 1], vec![0, 0, 0]], 6, &[2, 2, 3]),
        Presentation::gr_of_datum(&presets::a1_cubed(3), true).map_err(|e| e.to_string())?,
        Presentation::nichols_a2(&presets::a2(3), true).map_err(|e| e.to_string())?,
        Presentation::nichols_a2(&presets::a2(5), true).map_err(|e| e.to_string())?,
        Presentation::gr_of_datum(&presets::a2(5), false).map_err(|e| e.to_string())?,
        Presentation::uq_sl2(3),
        Presentation::uq_sl2(5),
    ];
    let mut pairs = 0u64;
    for p in &data {
        let basis: Vec<Monomial> = p.exponent_box().map_err(|e| e.to_string())?.into_iter().map(Monomial::x).collect();
        for a in &basis {
            for b in &basis {
                let scalar = p.filtration_degree(a).cmp(&p.filtration_degree(b));
                let tuple = p.degree_tuple(a).cmp(&p.degree_tuple(b));
                ensure(scalar == tuple, || format!("{a:?} vs {b:?}: deg {scalar:?}, d {tuple:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{} algebras, {pairs} monomial pairs", data.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 11] = [
        ("resolution exactness", resolution_exactness, 30),
        ("dimension formula", dimension_formula, 120),
        ("cohomology relations", relations, 60),
        ("smash product vs invariants", smash_invariants, 120),
        ("odd invariant for A1 x A1 x A1", a1_cubed_witness, 5),
        ("associated graded of A2 x A1", a2_a1_graded, 5),
        ("u_q(sl2) E1 page", uq_sl2_page, 600),
        ("cocycle suite", cocycle_suite, 180),
        ("comparison maps", comparison, 30),
        ("finite generation", finite_generation, 60),
        ("filtration order", filtration_order, 30),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{detail}; took {elapsed:.1?}, limit {limit} s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({elapsed:.2?})", k + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
