use anyhow::{anyhow, Context};

use pointed_coh::algebra::{Monomial, PBWElement, Presentation};
use pointed_coh::cocycles::{
    distinguished_tuple, eta_alpha, f_alpha, xi_alpha, ComparisonMaps, PairedCoefficient,
};
use pointed_coh::cohomology::{CohMonomial, Cohomology};
use pointed_coh::cyclo::CycNum;
use pointed_coh::datum::{presets, CartanDatum};
use pointed_coh::oracle::{BarComplex, CheckMode, CochainFn, OracleError};
use pointed_coh::records::Record;
use pointed_coh::resolution::{binomial, Resolution};
use pointed_coh::roots::DynkinType;

use crate::{AlgebraChoice, Common};

/// Largest `dim(A⁺)^arity` checked exhaustively.
const EXHAUSTIVE_LIMIT: u64 = 100_000;

#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub records: Vec<Record>,
    pub failed: bool,
}

impl Report {
    fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    fn note(&mut self, text: impl Into<String>) {
        self.records.push(Record::new("note").text("text", text.into()));
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.failed |= !passed;
        self.push(
            Record::new("check")
                .text("name", name)
                .text("result", if passed { "pass" } else { "FAIL" })
                .text("detail", detail.into()),
        );
    }
}

type Outcome = Result<Report, Failure>;

/// `ξ1^2η3` → `ξ₁^2η₃`.
pub fn pretty(s: &str) -> String {
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let mut out = String::new();
    let mut sub = false;
    for c in s.chars() {
        match c {
            'ξ' | 'η' => {
                sub = true;
                out.push(c);
            }
            '0'..='9' if sub => out.push(SUB[c as usize - '0' as usize]),
            _ => {
                sub = false;
                out.push(c);
            }
        }
    }
    out
}

fn load(c: &Common) -> Result<(CartanDatum, Vec<String>), Failure> {
    let text = std::fs::read_to_string(&c.datum).with_context(|| format!("cannot read {}", c.datum.display()))?;
    let d = CartanDatum::from_toml_str(&text).with_context(|| format!("{}", c.datum.display()))?;
    let report = d.validate().with_context(|| format!("{}", c.datum.display()))?;
    Ok((d, report.warnings))
}

fn with_warnings(warnings: Vec<String>) -> Report {
    let mut r = Report::default();
    for w in warnings {
        r.push(Record::new("warning").text("text", w));
    }
    r
}

fn scalar(order: u32, e: i64) -> CycNum {
    CycNum::root_of_unity(order, e)
}

fn all_a1(d: &CartanDatum) -> bool {
    d.cartan.classify().map(|cs| cs.iter().all(|c| c.kind == DynkinType::A(1))).unwrap_or(false)
}

fn has_a2(d: &CartanDatum) -> bool {
    d.cartan.classify().map(|cs| cs.iter().any(|c| c.kind == DynkinType::A(2))).unwrap_or(false)
}

fn budget(c: &Common, bar: BarComplex) -> BarComplex {
    match c.budget {
        Some(b) => bar.with_budget(b as usize),
        None => bar,
    }
}

pub fn validate(c: &Common) -> Outcome {
    let text = std::fs::read_to_string(&c.datum).with_context(|| format!("cannot read {}", c.datum.display()))?;
    let d = CartanDatum::from_toml_str(&text).with_context(|| format!("{}", c.datum.display()))?;
    let report = d.validate().with_context(|| format!("{}", c.datum.display()))?;
    let mut r = Report::default();
    for ch in &report.checks {
        r.check(&ch.name, ch.passed, ch.detail.clone());
    }
    for comp in &report.components {
        let vertices: Vec<usize> = comp.vertices.iter().map(|v| v + 1).collect();
        r.push(
            Record::new("component")
                .text("type", comp.kind)
                .list("vertices", &vertices)
                .list("orders", &comp.orders)
                .text("n", comp.n.map_or("-".to_string(), |n| n.to_string())),
        );
    }
    for w in &report.warnings {
        r.push(Record::new("warning").text("text", w));
    }
    r.push(
        Record::new("assumptions")
            .text("linking", d.has_linking())
            .text("root_vector_parameters", d.has_root_vector_parameters()),
    );
    Ok(r)
}

pub fn roots(c: &Common) -> Outcome {
    let (d, warnings) = load(c)?;
    let mut r = with_warnings(warnings);
    for (k, rd) in d.all_root_data()?.iter().enumerate() {
        r.push(
            Record::new("root")
                .text("index", k + 1)
                .text("beta", format!("α{}", rd.root.label()))
                .list("coords", &rd.root.coords)
                .text("height", rd.root.height())
                .text("g", &rd.g)
                .text("chi", &rd.chi)
                .text("N", rd.n)
                .text("M", rd.m),
        );
    }
    Ok(r)
}

fn generator_records(h: &Cohomology, r: &mut Report) {
    let p = h.presentation();
    let t = h.theta();
    for (i, g) in p.generators().iter().enumerate() {
        for m in [CohMonomial::xi(t, i), CohMonomial::eta(t, i)] {
            r.push(
                Record::new("generator")
                    .text("name", pretty(&m.to_string()))
                    .text("degree", m.degree())
                    .text("root", format!("α{}", g.root.label()))
                    .text("N", g.n)
                    .text("weight", h.weight_character(&m)),
            );
        }
    }
}

fn relation_records(h: &Cohomology, r: &mut Report) {
    let p = h.presentation();
    let t = h.theta();
    let order = p.order();
    let n: Vec<u32> = p.generators().iter().map(|g| g.n).collect();
    let rel = |r: &mut Report, lhs: String, c: CycNum, rhs: String| {
        r.push(Record::new("relation").text("lhs", pretty(&lhs)).scalar("coeff", &c).text("rhs", pretty(&rhs)));
    };
    for i in 0..t {
        for j in i + 1..t {
            let q = h.q_exp(j, i);
            let (a, b) = (i + 1, j + 1);
            rel(r, format!("ξ{a}ξ{b}"), scalar(order, q * (n[i] * n[j]) as i64), format!("ξ{b}ξ{a}"));
            rel(r, format!("η{a}ξ{b}"), scalar(order, q * n[j] as i64), format!("ξ{b}η{a}"));
            rel(r, format!("ξ{a}η{b}"), scalar(order, q * n[i] as i64), format!("η{b}ξ{a}"));
            rel(r, format!("η{a}η{b}"), -scalar(order, q), format!("η{b}η{a}"));
        }
        let a = i + 1;
        if n[i] == 2 {
            rel(r, format!("η{a}η{a}"), CycNum::from_int(1), format!("ξ{a}"));
        } else {
            rel(r, format!("η{a}η{a}"), CycNum::from_int(0), "0".into());
        }
    }
}

pub fn cohomology(c: &Common) -> Outcome {
    let (d, warnings) = load(c)?;
    let gr = Presentation::gr_of_datum(&d, true)?;
    let h = Cohomology::new(&gr)?;
    let mut r = with_warnings(warnings);
    generator_records(&h, &mut r);
    relation_records(&h, &mut r);
    r.push(Record::new("hilbert").text("series", "plain").list("dims", &h.hilbert_series(c.max_degree, false)));
    r.push(Record::new("hilbert").text("series", "invariant").list("dims", &h.hilbert_series(c.max_degree, true)));
    Ok(r)
}

fn witness_note(h: &Cohomology) -> String {
    match h.odd_invariant_witness() {
        Some(m) => format!("odd invariant: {} (degree {})", pretty(&m.to_string()), m.degree()),
        None => "odd invariant: none".into(),
    }
}

pub fn invariants(c: &Common, odd_witness: bool) -> Outcome {
    let (d, warnings) = load(c)?;
    let gr = Presentation::gr_of_datum(&d, true)?;
    let h = Cohomology::new(&gr)?;
    let mut r = with_warnings(warnings);
    for (n, ms) in h.invariant_basis(c.max_degree).iter().enumerate() {
        for m in ms {
            r.push(Record::new("invariant").text("degree", n).text("monomial", pretty(&m.to_string())));
        }
    }
    if odd_witness {
        r.note(witness_note(&h));
    }
    Ok(r)
}

pub fn fingen(c: &Common, list: bool) -> Outcome {
    let (d, warnings) = load(c)?;
    let gr = Presentation::gr_of_datum(&d, true)?;
    let h = Cohomology::new(&gr)?;
    let mut r = with_warnings(warnings);
    match h.fingen_witness() {
        Ok(w) => {
            let algebra: Vec<String> = w.algebra_generators.iter().map(|m| pretty(&m.to_string())).collect();
            let top = w.module_generators.iter().map(|m| m.degree()).max().unwrap_or(0);
            r.push(
                Record::new("fingen")
                    .list("M", &w.m)
                    .list("algebra_generators", &algebra)
                    .text("module_generators", w.module_generators.len())
                    .text("top_degree", top)
                    .text("verified_through", w.verified_through),
            );
            if list {
                for m in &w.module_generators {
                    r.push(Record::new("module_generator").text("degree", m.degree()).text("monomial", pretty(&m.to_string())));
                }
            }
            r.check("span", true, format!("invariants spanned through degree {}", w.verified_through));
        }
        Err(e) => r.check("span", false, e.to_string()),
    }
    Ok(r)
}

pub fn oracle(c: &Common, degree: u32, choice: AlgebraChoice, compare: bool) -> Outcome {
    let (d, warnings) = load(c)?;
    let mut r = with_warnings(warnings);
    let (p, name) = match choice {
        AlgebraChoice::U => {
            if !all_a1(&d) {
                return Err(anyhow!("u(D, λ, 0) is implemented for type A1 x ... x A1; use --algebra gr or nichols").into());
            }
            (Presentation::smash_from_datum(&d)?, "u")
        }
        AlgebraChoice::Gr => (Presentation::gr_of_datum(&d, true)?, "gr"),
        AlgebraChoice::Nichols => (Presentation::nichols_a2(&d, true)?, "nichols"),
    };
    let bar = budget(c, BarComplex::new(&p)?);
    r.push(Record::new("algebra").text("name", name).text("dim", bar.dim_plus() + 1).text("budget", bar.budget()));
    let expected: Option<(Vec<u64>, &str)> = if !compare {
        None
    } else if choice == AlgebraChoice::Nichols {
        return Err(anyhow!("no closed form to compare against for the Nichols algebra").into());
    } else {
        let gr = Presentation::gr_of_datum(&d, true)?;
        let h = Cohomology::new(&gr)?;
        let label = if d.has_linking() && choice == AlgebraChoice::U { "E1 invariant count" } else { "invariant count" };
        Some((h.hilbert_series(degree, true), label))
    };
    let mut dims = Vec::new();
    for n in 0..=degree {
        match bar.ext_dim(n) {
            Ok(v) => {
                let mut rec = Record::new("ext").text("degree", n).text("dim", v);
                if let Some((e, _)) = &expected {
                    rec = rec.text("expected", e[n as usize]);
                }
                r.push(rec);
                dims.push(v);
            }
            Err(e @ OracleError::Budget { .. }) => {
                r.check("oracle", false, e.to_string());
                return Ok(r);
            }
            Err(e) => return Err(e.into()),
        }
    }
    if let Some((e, label)) = expected {
        let ok = e == dims;
        r.failed |= !ok;
        r.note(format!("{} against {label}", if ok { "MATCH" } else { "MISMATCH" }));
    }
    Ok(r)
}

fn cocycle_mode(bar: &BarComplex, arity: usize, c: &Common, salt: u64) -> CheckMode {
    let d = bar.dim_plus() as u64;
    if d.checked_pow(arity as u32 + 1).is_some_and(|v| v <= EXHAUSTIVE_LIMIT) {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { samples: c.samples as usize, seed: c.seed.wrapping_add(salt) }
    }
}

fn mode_label(m: &CheckMode) -> String {
    match m {
        CheckMode::Exhaustive => "exhaustive".into(),
        CheckMode::Sampled { samples, .. } => format!("{samples} sampled"),
    }
}

fn check_paired(r: &mut Report, name: &str, bar: &BarComplex, f: &PairedCoefficient, c: &Common, salt: u64) {
    let mode = cocycle_mode(bar, f.arity(), c, salt);
    let label = mode_label(&mode);
    let rep = bar.is_cocycle(f, mode);
    let near = bar.is_cocycle_on(f, f.near_support_tuples(bar, c.samples as usize, c.seed.wrapping_add(salt + 1)));
    let detail = match rep.violations.first().or(near.violations.first()) {
        None => format!("{label} and {} near-support tuples, 0 violations", near.evaluations),
        Some((t, v)) => format!("δ = {v} at {t:?}"),
    };
    r.check(name, rep.passed() && near.passed(), detail);
}

fn check_eta(r: &mut Report, name: &str, bar: &BarComplex, p: &Presentation, a: usize, c: &Common) -> Result<(), Failure> {
    let eta = eta_alpha(bar, p, a)?;
    let mode = cocycle_mode(bar, 1, c, 50 + a as u64);
    let label = mode_label(&mode);
    let rep = bar.is_cocycle(&eta, mode);
    r.check(name, rep.passed(), label);
    Ok(())
}

fn cocycle_suite(d: &CartanDatum, c: &Common, r: &mut Report) -> Result<(), Failure> {
    if all_a1(d) {
        let plain = Presentation::gr_of_datum(d, false)?;
        if plain.dimension()? <= 1000 {
            let bar = BarComplex::new(&plain)?;
            for a in 0..plain.rank() {
                let xi = xi_alpha(&bar, &plain, a)?;
                check_paired(r, &format!("ξ_{} cocycle on R", a + 1), &bar, &xi, c, 200 + a as u64);
                check_eta(r, &format!("η_{} cocycle on R", a + 1), &bar, &plain, a, c)?;
            }
        }
    }
    if all_a1(d) && !d.has_root_vector_parameters() {
        let u = Presentation::smash_from_datum(d)?;
        let bar = BarComplex::new(&u)?;
        let group = u.group();
        let mut fs = Vec::new();
        for a in 0..u.rank() {
            let m = group.char_order(&u.generators()[a].chi);
            let f = f_alpha(&bar, &u, a, m)?;
            check_paired(r, &format!("f_{} cocycle on u (arity {})", a + 1, f.arity()), &bar, &f, c, 10 * a as u64);
            fs.push((f, distinguished_tuple(&bar, &u, a, m)));
        }
        let mut gram = true;
        for (a, (f, _)) in fs.iter().enumerate() {
            for (b, (_, t)) in fs.iter().enumerate() {
                let v = match t {
                    Some(t) if t.len() == f.arity() => f.eval(t),
                    _ => CycNum::from_int(0),
                };
                gram &= v == CycNum::from_int(i64::from(a == b));
            }
        }
        r.check("f_α Gram matrix", gram, "identity on the tuples (x_α ⊗ x_α^{N−1})^{⊗M}");
    }
    if has_a2(d) {
        let nichols = Presentation::nichols_a2(d, true)?;
        let bar = BarComplex::new(&nichols)?;
        for a in 0..nichols.rank() {
            let xi = xi_alpha(&bar, &nichols, a)?;
            check_paired(r, &format!("ξ_{} cocycle on the A2 Nichols algebra", a + 1), &bar, &xi, c, 100 + a as u64);
            if nichols.generators()[a].root.is_simple() {
                check_eta(r, &format!("η_{} cocycle on the A2 Nichols algebra", a + 1), &bar, &nichols, a, c)?;
            }
        }
    }
    Ok(())
}

pub fn check(c: &Common) -> Outcome {
    let (d, warnings) = load(c)?;
    let mut r = with_warnings(warnings);
    let plain = Presentation::gr_of_datum(&d, false)?;
    let res = Resolution::new(&plain)?;
    let ex = res.verify_exactness(c.max_degree);
    r.check(
        "resolution exactness",
        ex.passed(),
        match ex.failures.first() {
            None => format!("d² = 0 and sd + ds = id on {} generators through degree {}", ex.generators_checked, c.max_degree),
            Some(f) => format!("{} fails on {:?}", f.identity, f.input),
        },
    );
    let h = Cohomology::new(&plain)?;
    let rels = h.check_relations(c.relation_degree);
    let bad: Vec<&str> = rels.iter().filter(|x| !(x.chain_level && x.class_level)).map(|x| x.name.as_str()).collect();
    r.check(
        "relations",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} relation checks as chain maps through degree {}", rels.len(), c.relation_degree)
        } else {
            format!("failing: {}", pretty(&bad.join("; ")))
        },
    );
    if plain.dimension()? <= 1000 {
        let cmp = ComparisonMaps::new(&plain)?.verify()?;
        r.check(
            "comparison maps",
            cmp.passed(),
            if cmp.passed() { "∂F = Fd in degrees 1, 2; F₂*ξ and F₁*η are the dual functions".into() } else { cmp.failures.join("; ") },
        );
    }
    cocycle_suite(&d, c, &mut r)?;
    let smash = Presentation::gr_of_datum(&d, true)?;
    r.note(witness_note(&Cohomology::new(&smash)?));
    Ok(r)
}

fn example_check(r: &mut Report, example: &str, name: &str, passed: bool, detail: impl Into<String>) {
    r.failed |= !passed;
    r.push(
        Record::new("example")
            .text("example", example)
            .text("check", name)
            .text("result", if passed { "pass" } else { "FAIL" })
            .text("detail", detail.into()),
    );
}

pub fn examples() -> Outcome {
    let mut r = Report::default();
    let target = CohMonomial { b: vec![0; 3], c: vec![1, 1, 1] };
    for ell in [3, 5, 7] {
        let p = Presentation::gr_of_datum(&presets::a1_cubed(ell), true)?;
        let w = Cohomology::new(&p)?.odd_invariant_witness();
        example_check(
            &mut r,
            &format!("a1cubed ℓ={ell}"),
            "odd invariant",
            w.as_ref() == Some(&target),
            w.map_or("none".into(), |m| format!("{} (degree {})", pretty(&m.to_string()), m.degree())),
        );
    }

    let ell = 5;
    let d = presets::a2_a1(ell);
    let rn = Presentation::nichols_a2(&d, true)?;
    let word = rn.parse_word("x2 x1")?;
    let got = rn.normal_form(&word)?;
    let q = CycNum::root_of_unity(ell, 1);
    let mut want = PBWElement::monomial(Monomial::x(vec![1, 0, 1]), q.clone());
    want.add_term(Monomial::x(vec![0, 1, 0]), -q);
    example_check(&mut r, "a2a1 ℓ=5", "x₂x₁ in R", got == want, rn.format_element(&got));
    let gr = rn.assoc_graded()?;
    let got = gr.normal_form(&word)?;
    example_check(
        &mut r,
        "a2a1 ℓ=5",
        "x₂x₁ in Gr R",
        got == PBWElement::monomial(Monomial::x(vec![1, 0, 1]), CycNum::root_of_unity(ell, 1)),
        gr.format_element(&got),
    );
    let full = Presentation::gr_of_datum(&d, true)?;
    let simple = CohMonomial { b: vec![0; full.rank()], c: full.generators().iter().map(|g| u32::from(g.root.is_simple())).collect() };
    let w = Cohomology::new(&full)?.odd_invariant_witness();
    example_check(
        &mut r,
        "a2a1 ℓ=5",
        "E1 odd invariant",
        w.as_ref() == Some(&simple),
        w.map_or("none".into(), |m| pretty(&m.to_string())),
    );

    let gr = Presentation::gr_of_datum(&presets::uq_sl2(3, false), true)?;
    let series = Cohomology::new(&gr)?.hilbert_series(8, true);
    let nilcone: Vec<u64> = (0..=8u64).map(|n| if n % 2 == 0 { n + 1 } else { 0 }).collect();
    example_check(&mut r, "uq_sl2 ℓ=3", "E1 invariant series", series == nilcone, format!("{series:?}"));
    let dims = BarComplex::new(&Presentation::uq_sl2(3))?.ext_dims(2)?;
    example_check(&mut r, "uq_sl2 ℓ=3", "oracle Ext ≤ 2", dims == [1, 0, 3], format!("{dims:?}"));
    let (p, bar) = {
        let p = Presentation::uq_sl2(3);
        let bar = BarComplex::new(&p)?;
        (p, bar)
    };
    for a in 0..2 {
        let f = f_alpha(&bar, &p, a, 3)?;
        let rep = bar.is_cocycle_on(&f, f.near_support_tuples(&bar, 2000, a as u64));
        example_check(&mut r, "uq_sl2 ℓ=3", &format!("f_{} cocycle", a + 1), rep.passed(), format!("{} tuples", rep.evaluations));
    }

    for theta in 1..=3u64 {
        let n: Vec<u32> = vec![2; theta as usize];
        let q: Vec<Vec<i64>> = (0..theta).map(|i| (0..theta).map(|j| i64::from(j > i)).collect()).collect();
        let dims = BarComplex::new(&Presentation::qci(&q, 2, &n))?.ext_dims(3)?;
        let expect: Vec<u64> = (0..=3).map(|k| binomial(k + theta - 1, theta - 1)).collect();
        example_check(&mut r, &format!("qci θ={theta} N=2"), "Ext dimensions", dims == expect, format!("{dims:?}"));
    }
    Ok(r)
}
