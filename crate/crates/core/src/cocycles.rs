//! Chain-level cocycles on the reduced bar complex: `ξ_α`, `η_α`, `f_α`, and
//! the comparison maps `F₁`, `F₂` from `K•` into the bar resolution.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, Monomial, Presentation};
use crate::cohomology::CohMonomial;
use crate::cyclo::CycNum;
use crate::datum::CartanDatum;
use crate::oracle::{BarComplex, Cochain, CochainFn, OracleError};
use crate::resolution::{ResElement, Resolution, ResolutionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocycleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error("root vector parameters are nonzero; reduce to μ = 0 first (the cohomology does not depend on μ)")]
    NonzeroMu,
    #[error("no PBW generator with index {0}")]
    UnknownRoot(usize),
    #[error("x_{0} is a product of lower root vectors, so its indicator is not a cocycle")]
    NotPrimitive(usize),
    #[error("Γ acts on x_{0} by a nontrivial character, so its indicator is not a cocycle on the smash product")]
    NotInvariant(usize),
    #[error("algebra is untruncated")]
    Untruncated,
}

/// The section `u → U` sending PBW basis elements to PBW basis elements with
/// the same exponents.
#[derive(Debug, Clone)]
pub struct Section {
    lift: Presentation,
}

impl Section {
    pub fn new(truncated: &Presentation) -> Result<Self, CocycleError> {
        if !truncated.is_truncated() {
            return Err(CocycleError::Untruncated);
        }
        Ok(Section { lift: truncated.untruncated() })
    }

    pub fn target(&self) -> &Presentation {
        &self.lift
    }

    pub fn lift(&self, m: &Monomial) -> Monomial {
        m.clone()
    }
}

/// `f̃(r_1 ⊗ ⋯ ⊗ r_{2M}) = γ(r_1, r_2)⋯γ(r_{2M−1}, r_{2M})` on tuples of PBW
/// monomials of `U⁺`, with `γ(u, v)` the coefficient of `x_α^{N_α}` in `uv`
/// (group parts sent to 1), the group twist
/// `f̃(r_1g_1 ⊗ r_2g_2 ⊗ ⋯) = f̃(r_1 ⊗ {}^{g_1}r_2 ⊗ {}^{g_1g_2}r_3 ⊗ ⋯)`, and 0
/// on any factor of the form `g − 1`. With `M = 1` this is `ξ_α`.
#[derive(Debug, Clone)]
pub struct PairedCoefficient {
    section: Section,
    alpha: usize,
    n_alpha: u32,
    arity: usize,
    /// Per `A⁺` index: the `x`-part and group index, or `None` for `g − 1`.
    entries: Vec<Option<(Monomial, usize)>>,
    /// `γ` on pairs of truncated `x`-monomials, keyed by exponent vectors.
    gamma: BTreeMap<(Vec<u32>, Vec<u32>), CycNum>,
}

impl PairedCoefficient {
    pub fn new(bar: &BarComplex, p: &Presentation, alpha: usize, m: u32) -> Result<Self, CocycleError> {
        if alpha >= p.rank() {
            return Err(CocycleError::UnknownRoot(alpha));
        }
        let section = Section::new(p)?;
        let n_alpha = p.generators()[alpha].n;
        let entries: Vec<Option<(Monomial, usize)>> = (0..bar.dim_plus())
            .map(|i| {
                let mono = bar.monomial(i);
                if mono.is_group_only() {
                    None
                } else {
                    Some((Monomial::x(mono.exps.clone()), mono.group))
                }
            })
            .collect();
        let xs: Vec<Vec<u32>> = p.exponent_box()?.into_iter().filter(|e| e.iter().any(|&a| a > 0)).collect();
        let mut gamma = BTreeMap::new();
        for a in &xs {
            for b in &xs {
                let v = Self::gamma_in(&section, alpha, n_alpha, &Monomial::x(a.clone()), &Monomial::x(b.clone()));
                if !v.is_zero() {
                    gamma.insert((a.clone(), b.clone()), v);
                }
            }
        }
        Ok(PairedCoefficient { section, alpha, n_alpha, arity: 2 * m as usize, entries, gamma })
    }

    fn gamma_in(section: &Section, alpha: usize, n: u32, u: &Monomial, v: &Monomial) -> CycNum {
        let target = section.target();
        let prod = target.mul_monomials(&section.lift(u), &section.lift(v));
        let want = Monomial::generator(target.rank(), alpha, n).exps;
        let mut out = CycNum::zero();
        for (m, c) in prod.iter() {
            if m.exps == want {
                out += c;
            }
        }
        out
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn n_alpha(&self) -> u32 {
        self.n_alpha
    }

    /// `γ(u, v)` for arbitrary monomials of `U` (group parts ignored).
    pub fn gamma(&self, u: &Monomial, v: &Monomial) -> CycNum {
        let (ux, vx) = (Monomial::x(u.exps.clone()), Monomial::x(v.exps.clone()));
        if let Some(c) = self.gamma.get(&(ux.exps.clone(), vx.exps.clone())) {
            return c.clone();
        }
        let p = self.section.target();
        let bounded = |m: &Monomial| m.exps.iter().zip(p.generators()).all(|(&a, g)| a < g.n);
        if bounded(&ux) && bounded(&vx) {
            return CycNum::zero();
        }
        Self::gamma_in(&self.section, self.alpha, self.n_alpha, &ux, &vx)
    }

    /// Tuples of arity `2M + 1` obtained from a random tuple in the support of
    /// `f` by splitting one slot into a product, so that `δf` has nonzero
    /// terms.
    pub fn near_support_tuples(&self, bar: &BarComplex, count: usize, seed: u64) -> Vec<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(Vec<usize>, Vec<usize>)> = self
            .gamma
            .keys()
            .map(|(a, b)| {
                let with_exps = |e: &Vec<u32>| -> Vec<usize> {
                    (0..self.entries.len())
                        .filter(|&i| matches!(&self.entries[i], Some((x, _)) if &x.exps == e))
                        .collect()
                };
                (with_exps(a), with_exps(b))
            })
            .collect();
        let mut splits: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (us, vs) in &pairs {
            for &i in us.iter().chain(vs) {
                splits.entry(i).or_insert_with(|| bar.factorizations(i));
            }
        }
        let mut out = Vec::with_capacity(count);
        if splits.values().all(|f| f.is_empty()) {
            return out;
        }
        while out.len() < count {
            let mut t = Vec::with_capacity(self.arity + 1);
            for _ in 0..self.arity / 2 {
                let (us, vs) = &pairs[rng.gen_range(0..pairs.len())];
                t.push(us[rng.gen_range(0..us.len())]);
                t.push(vs[rng.gen_range(0..vs.len())]);
            }
            let k = rng.gen_range(0..t.len());
            let f = &splits[&t[k]];
            if f.is_empty() {
                continue;
            }
            let (a, b) = f[rng.gen_range(0..f.len())];
            t.splice(k..k + 1, [a, b]);
            out.push(t);
        }
        out
    }

    /// `f̃` on monomials `x^{a_k} g_k` of `U⁺` with `a_k ≠ 0`.
    pub fn f_tilde(&self, factors: &[Monomial]) -> CycNum {
        assert_eq!(factors.len(), self.arity);
        let p = self.section.target();
        let group = p.group();
        let mut twist = 0u64;
        let mut acc = group.identity();
        for (k, f) in factors.iter().enumerate() {
            if k > 0 && !group.is_identity(&acc) {
                twist += p.char_exponent(&f.exps, group.index_of(&acc));
            }
            acc = group.mul(&acc, &group.element_at(f.group));
        }
        let mut out = p.zeta(twist as i64).clone();
        for pair in factors.chunks(2) {
            let g = self.gamma(&pair[0], &pair[1]);
            if g.is_zero() {
                return g;
            }
            out *= &g;
        }
        out
    }
}

impl CochainFn for PairedCoefficient {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, args: &[usize]) -> CycNum {
        let mut factors = Vec::with_capacity(args.len());
        for &i in args {
            match &self.entries[i] {
                None => return CycNum::zero(),
                Some((x, g)) => factors.push(Monomial { exps: x.exps.clone(), group: *g }),
            }
        }
        // Cheap rejection before twisting.
        for pair in factors.chunks(2) {
            if !self.gamma.contains_key(&(pair[0].exps.clone(), pair[1].exps.clone())) {
                return CycNum::zero();
            }
        }
        self.f_tilde(&factors)
    }
}

/// `ξ_α(x^a ⊗ x^b)`: the coefficient of `x̃_α^{N_α}` in the product of lifts.
pub fn xi_alpha(bar: &BarComplex, p: &Presentation, alpha: usize) -> Result<PairedCoefficient, CocycleError> {
    PairedCoefficient::new(bar, p, alpha, 1)
}

/// `η_α`, the indicator of the PBW monomial `x_α`. Defined when `x_α` does
/// not occur in a straightening tail (no tails, or `α` simple). On a smash
/// product it is `x_α g ↦ 1` and needs `χ_α = ε`.
pub fn eta_alpha(bar: &BarComplex, p: &Presentation, alpha: usize) -> Result<Cochain, CocycleError> {
    if alpha >= p.rank() {
        return Err(CocycleError::UnknownRoot(alpha));
    }
    if p.has_tails() && !p.generators()[alpha].root.is_simple() {
        return Err(CocycleError::NotPrimitive(alpha + 1));
    }
    let mut f = Cochain::zero(1);
    let groups = if p.group_in_basis() {
        if !p.group().is_trivial(&p.generators()[alpha].chi) {
            return Err(CocycleError::NotInvariant(alpha + 1));
        }
        p.group().size()
    } else {
        1
    };
    for g in 0..groups {
        let mut m = Monomial::generator(p.rank(), alpha, 1);
        m.group = g;
        let idx = bar.index_of(&m).ok_or(CocycleError::UnknownRoot(alpha))?;
        f.set(vec![idx], CycNum::one());
    }
    Ok(f)
}

/// `f_α` of arity `2M`.
pub fn f_alpha(bar: &BarComplex, p: &Presentation, alpha: usize, m: u32) -> Result<PairedCoefficient, CocycleError> {
    PairedCoefficient::new(bar, p, alpha, m)
}

/// `f_α` for the algebra `u(D, λ, 0)` of a datum, with `M_α` the order of
/// `χ_α`.
pub fn f_alpha_for_datum(
    d: &CartanDatum,
    alpha: usize,
) -> Result<(Presentation, BarComplex, PairedCoefficient), CocycleError> {
    if d.has_root_vector_parameters() {
        return Err(CocycleError::NonzeroMu);
    }
    let p = Presentation::smash_from_datum(d)?;
    if alpha >= p.rank() {
        return Err(CocycleError::UnknownRoot(alpha));
    }
    let m = p.group().char_order(&p.generators()[alpha].chi);
    let bar = BarComplex::new(&p)?;
    let f = f_alpha(&bar, &p, alpha, m)?;
    Ok((p, bar, f))
}

/// The tuple `(x_α ⊗ x_α^{N−1})^{⊗M}` as `A⁺` indices.
pub fn distinguished_tuple(bar: &BarComplex, p: &Presentation, alpha: usize, m: u32) -> Option<Vec<usize>> {
    let n = p.generators()[alpha].n;
    let x = bar.index_of(&Monomial::generator(p.rank(), alpha, 1))?;
    let y = bar.index_of(&Monomial::generator(p.rank(), alpha, n - 1))?;
    Some((0..m).flat_map(|_| [x, y]).collect())
}

/// An element of the bar resolution `B_n = A ⊗ (A⁺)^{⊗n}`: PBW index of the
/// `A` factor and `A⁺` indices of the rest.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BarElement {
    pub terms: BTreeMap<(usize, Vec<usize>), CycNum>,
}

impl BarElement {
    pub fn add(&mut self, key: (usize, Vec<usize>), c: CycNum) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(CycNum::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ComparisonReport {
    pub square_1: bool,
    pub square_2: bool,
    pub pullback_xi: bool,
    pub pullback_eta: bool,
    pub failures: Vec<String>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.square_1 && self.square_2 && self.pullback_xi && self.pullback_eta
    }
}

/// `F₁ : K₁ → B₁` and `F₂ : K₂ → B₂` for a quantum complete intersection.
pub struct ComparisonMaps {
    res: Resolution,
    bar: BarComplex,
}

impl ComparisonMaps {
    pub fn new(p: &Presentation) -> Result<Self, CocycleError> {
        let res = Resolution::new(p)?;
        if p.group_in_basis() {
            return Err(CocycleError::Algebra(AlgebraError::Unsupported(
                "comparison maps are built for the algebra without the group".into(),
            )));
        }
        Ok(ComparisonMaps { res, bar: BarComplex::new(p)? })
    }

    pub fn bar(&self) -> &BarComplex {
        &self.bar
    }

    fn x(&self, i: usize, k: u32) -> usize {
        self.bar
            .index_of(&self.res.x_power(i, k))
            .expect("power below nilpotency order")
    }

    fn unit(&self) -> usize {
        self.bar.algebra().unit
    }

    /// `F` on a generator of `K₁` or `K₂`.
    pub fn on_generator(&self, a: &[u32]) -> BarElement {
        let theta = self.res.theta();
        let n = self.res.nilpotency();
        let p = self.res.presentation();
        let mut out = BarElement::default();
        let support: Vec<usize> = (0..theta).filter(|&i| a[i] > 0).collect();
        match (a.iter().sum::<u32>(), support.as_slice()) {
            (0, _) => out.add((self.unit(), vec![]), CycNum::one()),
            (1, [i]) => out.add((self.unit(), vec![self.x(*i, 1)]), CycNum::one()),
            (2, [i]) => {
                // Σ_{a=0}^{N−2} x^a ⊗ x ⊗ x^{N−a−1}
                for k in 0..n[*i] - 1 {
                    let a0 = self.bar.algebra().index[&self.res.x_power(*i, k)];
                    out.add((a0, vec![self.x(*i, 1), self.x(*i, n[*i] - k - 1)]), CycNum::one());
                }
            }
            (2, [i, j]) => {
                out.add((self.unit(), vec![self.x(*i, 1), self.x(*j, 1)]), CycNum::one());
                out.add((self.unit(), vec![self.x(*j, 1), self.x(*i, 1)]), -p.zeta(self.res.q(*i, *j)).clone());
            }
            _ => panic!("comparison maps are defined on K_0, K_1, K_2"),
        }
        out
    }

    /// `F` extended `S`-linearly.
    pub fn apply(&self, e: &ResElement) -> BarElement {
        let alg = self.bar.algebra();
        let mut out = BarElement::default();
        for (a, s) in e.terms() {
            let image = self.on_generator(a);
            for (m, c) in s.iter() {
                let u = alg.index[m];
                for ((a0, rest), v) in &image.terms {
                    for (w, cw) in &alg.table[u][*a0] {
                        out.add((*w, rest.clone()), &(c * v) * cw);
                    }
                }
            }
        }
        out
    }

    /// `∂(a_0 ⊗ ⋯ ⊗ a_n) = Σ_{j=0}^{n−1} (−1)^j a_0 ⊗ ⋯ ⊗ a_j a_{j+1} ⊗ ⋯`.
    pub fn boundary(&self, e: &BarElement) -> BarElement {
        let alg = self.bar.algebra();
        let mut out = BarElement::default();
        for ((a0, rest), c) in &e.terms {
            if rest.is_empty() {
                continue;
            }
            let first = self.bar.monomial(rest[0]);
            let u1 = alg.index[first];
            for (w, cw) in &alg.table[*a0][u1] {
                out.add((*w, rest[1..].to_vec()), c * cw);
            }
            for j in 0..rest.len() - 1 {
                let sign = if (j + 1) % 2 == 0 { CycNum::one() } else { CycNum::from_int(-1) };
                for (w, cw) in self.bar.product(rest[j], rest[j + 1]) {
                    let mut t = rest.clone();
                    t.splice(j..j + 2, [*w]);
                    out.add((*a0, t), &(c * cw) * &sign);
                }
            }
        }
        out
    }

    /// `φ ↦ Σ ε(a_0) φ(a_1, …, a_n)`.
    pub fn pull_back(&self, f: &dyn CochainFn, e: &BarElement) -> CycNum {
        let alg = self.bar.algebra();
        let mut out = CycNum::zero();
        for ((a0, rest), c) in &e.terms {
            if *a0 == alg.unit {
                out += &(c * &f.eval(rest));
            }
        }
        out
    }

    pub fn verify(&self) -> Result<ComparisonReport, CocycleError> {
        let theta = self.res.theta();
        let p = self.res.presentation();
        let mut rep = ComparisonReport { square_1: true, square_2: true, pullback_xi: true, pullback_eta: true, failures: vec![] };
        let to_bar0 = |e: &ResElement| {
            let alg = self.bar.algebra();
            let mut out = BarElement::default();
            for s in e.terms().values() {
                for (m, c) in s.iter() {
                    out.add((alg.index[m], vec![]), c.clone());
                }
            }
            out
        };
        for a in self.res.generators(1) {
            let lhs = self.boundary(&self.on_generator(&a));
            let rhs = to_bar0(&self.res.differential(&self.res.phi(&a)));
            if lhs != rhs {
                rep.square_1 = false;
                rep.failures.push(format!("∂F₁ ≠ F₀d on Φ{a:?}"));
            }
        }
        for a in self.res.generators(2) {
            let lhs = self.boundary(&self.on_generator(&a));
            let rhs = self.apply(&self.res.differential(&self.res.phi(&a)));
            if lhs != rhs {
                rep.square_2 = false;
                rep.failures.push(format!("∂F₂ ≠ F₁d on Φ{a:?}"));
            }
        }
        for i in 0..theta {
            let xi = xi_alpha(&self.bar, p, i)?;
            let eta = eta_alpha(&self.bar, p, i)?;
            for a in self.res.generators(2) {
                let v = self.pull_back(&xi, &self.on_generator(&a));
                let expect = if CohMonomial::from_generator(&a) == CohMonomial::xi(theta, i) {
                    CycNum::one()
                } else {
                    CycNum::zero()
                };
                if v != expect {
                    rep.pullback_xi = false;
                    rep.failures.push(format!("F₂*(ξ{}) on Φ{a:?} is {v}", i + 1));
                }
            }
            for a in self.res.generators(1) {
                let v = self.pull_back(&eta, &self.on_generator(&a));
                let expect = if a[i] == 1 { CycNum::one() } else { CycNum::zero() };
                if v != expect {
                    rep.pullback_eta = false;
                    rep.failures.push(format!("F₁*(η{}) on Φ{a:?} is {v}", i + 1));
                }
            }
        }
        Ok(rep)
    }
}
