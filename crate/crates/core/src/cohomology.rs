//! The cohomology ring `H*(S,k)` of a quantum complete intersection, computed
//! from the chain maps `ξ_i`, `η_i` on `K•`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{PBWElement, Presentation};
use crate::cyclo::CycNum;
use crate::datum::{Character, GroupElement};
use crate::linalg;
use crate::resolution::{binomial, compositions, ResElement, Resolution, ResolutionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error("{map} is not a chain map: fails on Φ{generator:?}")]
    NotChainMap { map: String, generator: Vec<u32> },
    #[error("finite generation check failed in degree {degree}: rank {rank}, expected {expected}")]
    SpanFailure { degree: u32, rank: usize, expected: u64 },
}

/// `ξ^b η^c` with `c ∈ {0,1}^θ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohMonomial {
    pub b: Vec<u32>,
    pub c: Vec<u32>,
}

impl CohMonomial {
    pub fn one(theta: usize) -> Self {
        CohMonomial { b: vec![0; theta], c: vec![0; theta] }
    }

    pub fn xi(theta: usize, i: usize) -> Self {
        let mut m = Self::one(theta);
        m.b[i] = 1;
        m
    }

    pub fn eta(theta: usize, i: usize) -> Self {
        let mut m = Self::one(theta);
        m.c[i] = 1;
        m
    }

    /// The monomial dual to `Φ(a)`.
    pub fn from_generator(a: &[u32]) -> Self {
        CohMonomial {
            b: a.iter().map(|x| x / 2).collect(),
            c: a.iter().map(|x| x % 2).collect(),
        }
    }

    /// `2b + c`, the generator on which the monomial is supported.
    pub fn generator(&self) -> Vec<u32> {
        self.b.iter().zip(&self.c).map(|(b, c)| 2 * b + c).collect()
    }

    pub fn degree(&self) -> u32 {
        self.generator().iter().sum()
    }

    pub fn odd_weight(&self) -> u32 {
        self.c.iter().sum()
    }
}

impl fmt::Display for CohMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &b) in self.b.iter().enumerate() {
            match b {
                0 => {}
                1 => parts.push(format!("ξ{}", i + 1)),
                _ => parts.push(format!("ξ{}^{b}", i + 1)),
            }
        }
        for (i, &c) in self.c.iter().enumerate() {
            if c == 1 {
                parts.push(format!("η{}", i + 1));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(""))
        }
    }
}

/// A class in the `ξ^b η^c` basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CohClass {
    terms: BTreeMap<CohMonomial, CycNum>,
}

impl CohClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: CohMonomial) -> Self {
        let mut c = Self::zero();
        c.add_term(m, CycNum::one());
        c
    }

    pub fn add_term(&mut self, m: CohMonomial, c: CycNum) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(CycNum::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &CohClass, c: &CycNum) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &CycNum) -> CohClass {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<CohMonomial, CycNum> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &CohMonomial) -> CycNum {
        self.terms.get(m).cloned().unwrap_or_else(CycNum::zero)
    }

    /// The common degree, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        let mut d = self.terms.keys().map(|m| m.degree());
        let first = d.next()?;
        d.all(|x| x == first).then_some(first)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if c.is_one() {
                    m.to_string()
                } else {
                    format!("({})*{}", c.to_compact_string(), m)
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    Xi(usize),
    Eta(usize),
}

impl Elementary {
    pub fn shift(&self) -> u32 {
        match self {
            Elementary::Xi(_) => 2,
            Elementary::Eta(_) => 1,
        }
    }
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elementary::Xi(i) => write!(f, "ξ{}", i + 1),
            Elementary::Eta(i) => write!(f, "η{}", i + 1),
        }
    }
}

/// A linear combination of composites `f_1 ∘ ⋯ ∘ f_k` of the elementary chain
/// maps. The rightmost factor is applied first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChainMap {
    pub terms: Vec<(CycNum, Vec<Elementary>)>,
}

impl ChainMap {
    pub fn elementary(e: Elementary) -> Self {
        ChainMap { terms: vec![(CycNum::one(), vec![e])] }
    }

    pub fn identity() -> Self {
        ChainMap { terms: vec![(CycNum::one(), vec![])] }
    }

    /// Homological degree drop, if homogeneous.
    pub fn shift(&self) -> Option<u32> {
        let mut s = self.terms.iter().map(|(_, w)| w.iter().map(Elementary::shift).sum::<u32>());
        let first = s.next()?;
        s.all(|x| x == first).then_some(first)
    }

    pub fn compose(&self, rhs: &ChainMap) -> ChainMap {
        let mut terms = Vec::new();
        for (c1, w1) in &self.terms {
            for (c2, w2) in &rhs.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                terms.push((c1 * c2, w));
            }
        }
        ChainMap { terms }
    }

    pub fn scaled(&self, c: &CycNum) -> ChainMap {
        ChainMap { terms: self.terms.iter().map(|(x, w)| (x * c, w.clone())).collect() }
    }

    pub fn plus(&self, rhs: &ChainMap) -> ChainMap {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        ChainMap { terms }
    }
}

impl fmt::Display for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, w)| {
                let word: Vec<String> = w.iter().map(|e| e.to_string()).collect();
                format!("({})·{}", c.to_compact_string(), if word.is_empty() { "id".into() } else { word.join("∘") })
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// One relation checked at chain level.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: String,
    pub chain_level: bool,
    pub class_level: bool,
    pub failure: Option<Vec<u32>>,
}

/// Module generators over the polynomial ring on `ξ_i^{M_i}`.
#[derive(Debug, Clone)]
pub struct FinGenWitness {
    pub m: Vec<u32>,
    pub algebra_generators: Vec<CohMonomial>,
    pub module_generators: Vec<CohMonomial>,
    pub verified_through: u32,
}

/// `H*(S,k)` together with the `Γ`-action from the generators' characters.
#[derive(Debug)]
pub struct Cohomology {
    res: Resolution,
    kappa: Mutex<HashMap<CohMonomial, CycNum>>,
}

impl Cohomology {
    pub fn new(p: &Presentation) -> Result<Self, CohomologyError> {
        Ok(Cohomology { res: Resolution::new(p)?, kappa: Mutex::new(HashMap::new()) })
    }

    pub fn resolution(&self) -> &Resolution {
        &self.res
    }

    pub fn presentation(&self) -> &Presentation {
        self.res.presentation()
    }

    pub fn theta(&self) -> usize {
        self.res.theta()
    }

    fn elementary_on(&self, f: Elementary, e: &ResElement) -> ResElement {
        let r = &self.res;
        let p = r.presentation();
        let theta = r.theta();
        let mut out = ResElement::zero();
        for (a, s) in e.terms() {
            match f {
                Elementary::Xi(i) => {
                    if a[i] < 2 {
                        continue;
                    }
                    let ni = r.nilpotency()[i] as i64;
                    let mut k = 0i64;
                    for l in i + 1..theta {
                        k += r.q(i, l) * ni * r.tau(l, a[l]) as i64;
                    }
                    let mut b = a.clone();
                    b[i] -= 2;
                    out.add(&b, &s.scaled(p.zeta(k)));
                }
                Elementary::Eta(i) => {
                    if a[i] < 1 {
                        continue;
                    }
                    let si = r.sigma(i, a[i]) as i64;
                    let mut k = 0i64;
                    let mut neg = false;
                    for l in 0..i {
                        k += r.q(l, i) * (si - 1) * r.tau(l, a[l]) as i64;
                    }
                    for l in i + 1..theta {
                        neg ^= a[l] % 2 == 1;
                        k += r.q(i, l) * r.tau(l, a[l]) as i64;
                    }
                    let x = PBWElement::monomial(r.x_power(i, (si - 1) as u32), r.root(neg, k));
                    let mut b = a.clone();
                    b[i] -= 1;
                    out.add(&b, &p.multiply(s, &x));
                }
            }
        }
        out
    }

    /// Applies a chain map (rightmost factor first).
    pub fn apply(&self, f: &ChainMap, e: &ResElement) -> ResElement {
        let mut out = ResElement::zero();
        for (c, word) in &f.terms {
            let mut cur = e.clone();
            for el in word.iter().rev() {
                if cur.is_zero() {
                    break;
                }
                cur = self.elementary_on(*el, &cur);
            }
            out.add_scaled(&cur, c);
        }
        out
    }

    pub fn xi_chain(&self, i: usize) -> ChainMap {
        ChainMap::elementary(Elementary::Xi(i))
    }

    pub fn eta_chain(&self, i: usize) -> ChainMap {
        ChainMap::elementary(Elementary::Eta(i))
    }

    /// Checks `d∘f = f∘d` on every generator of degree `≤ n_max`.
    pub fn verify_chain_map(&self, f: &ChainMap, n_max: u32) -> Result<(), CohomologyError> {
        for n in 0..=n_max {
            for a in self.res.generators(n) {
                let phi = self.res.phi(&a);
                let lhs = self.res.differential(&self.apply(f, &phi));
                let rhs = self.apply(f, &self.res.differential(&phi));
                if lhs != rhs {
                    return Err(CohomologyError::NotChainMap { map: f.to_string(), generator: a });
                }
            }
        }
        Ok(())
    }

    /// `ξ_1^{b_1}∘⋯∘ξ_θ^{b_θ}∘η_1^{c_1}∘⋯∘η_θ^{c_θ}`.
    pub fn monomial_map(&self, m: &CohMonomial) -> ChainMap {
        let mut word = Vec::new();
        for (i, &b) in m.b.iter().enumerate() {
            word.extend(std::iter::repeat_n(Elementary::Xi(i), b as usize));
        }
        for (i, &c) in m.c.iter().enumerate() {
            if c == 1 {
                word.push(Elementary::Eta(i));
            }
        }
        ChainMap { terms: vec![(CycNum::one(), word)] }
    }

    fn augment_at_zero(&self, e: &ResElement) -> CycNum {
        let zero = vec![0; self.theta()];
        self.presentation().counit(&e.coefficient(&zero))
    }

    /// Value of the composite monomial map on its own generator, which is
    /// the cochain value of the basis class.
    pub fn kappa(&self, m: &CohMonomial) -> CycNum {
        if let Some(v) = self.kappa.lock().unwrap().get(m) {
            return v.clone();
        }
        let image = self.apply(&self.monomial_map(m), &self.res.phi(&m.generator()));
        let v = self.augment_at_zero(&image);
        self.kappa.lock().unwrap().insert(m.clone(), v.clone());
        v
    }

    /// The cochain `Hom_S(K_n, k)` value of `u` on `Φ(a)`.
    pub fn cochain_value(&self, u: &CohClass, a: &[u32]) -> CycNum {
        let m = CohMonomial::from_generator(a);
        &u.coefficient(&m) * &self.kappa(&m)
    }

    /// Reads a class off a chain map `K_n → K_0` via `ε`.
    pub fn class_of_map(&self, f: &ChainMap, n: u32) -> CohClass {
        let mut out = CohClass::zero();
        for a in self.res.generators(n) {
            let v = self.augment_at_zero(&self.apply(f, &self.res.phi(&a)));
            if !v.is_zero() {
                let m = CohMonomial::from_generator(&a);
                let k = self.kappa(&m).inverse().expect("basis value is nonzero");
                out.add_term(m, &v * &k);
            }
        }
        out
    }

    /// A chain-map lift of `u`.
    pub fn lift(&self, u: &CohClass) -> ChainMap {
        let mut out = ChainMap::default();
        for (m, c) in u.terms() {
            let k = self.kappa(m).inverse().expect("basis value is nonzero");
            out = out.plus(&self.monomial_map(m).scaled(&(c * &k)));
        }
        out
    }

    /// `u·v`, computed as the composite `ũ∘ṽ` read through `ε`.
    pub fn product(&self, u: &CohClass, v: &CohClass) -> CohClass {
        let mut out = CohClass::zero();
        for (mu, cu) in u.terms() {
            let gu = mu.generator();
            let ku = self.kappa(mu);
            for (mv, cv) in v.terms() {
                let a: Vec<u32> = gu.iter().zip(mv.generator()).map(|(x, y)| x + y).collect();
                // ṽ sends Φ(a') into S·Φ(a' − gen(mv)) and ũ vanishes off Φ(gen(mu)).
                let image = self.apply(&self.monomial_map(mv), &self.res.phi(&a));
                let s = image.coefficient(&gu);
                let e = self.presentation().counit(&s);
                if e.is_zero() {
                    continue;
                }
                let kv = self.kappa(mv).inverse().expect("basis value is nonzero");
                let target = CohMonomial::from_generator(&a);
                let kt = self.kappa(&target).inverse().expect("basis value is nonzero");
                let val = &(&(&e * &ku) * &(cu * cv)) * &(&kv * &kt);
                out.add_term(target, val);
            }
        }
        out
    }

    pub fn dim_h(&self, n: u32) -> u64 {
        let t = self.theta() as u64;
        binomial(n as u64 + t - 1, t - 1)
    }

    pub fn monomials(&self, n: u32) -> Vec<CohMonomial> {
        compositions(self.theta(), n).iter().map(|a| CohMonomial::from_generator(a)).collect()
    }

    /// `Σ_i (N_i b_i + c_i) χ_i`, the character by which `Γ` acts on `ξ^b η^c`
    /// (inverted).
    pub fn weight_character(&self, m: &CohMonomial) -> Character {
        let p = self.presentation();
        let group = p.group();
        let mut chi = group.trivial_character();
        for (i, g) in p.generators().iter().enumerate() {
            let k = g.n as i64 * m.b[i] as i64 + m.c[i] as i64;
            chi = group.char_mul(&chi, &group.char_pow(&g.chi, k));
        }
        chi
    }

    pub fn is_invariant(&self, m: &CohMonomial) -> bool {
        self.presentation().group().is_trivial(&self.weight_character(m))
    }

    /// `g·ξ_i = χ_i(g)^{−N_i} ξ_i`, `g·η_i = χ_i(g)^{−1} η_i`, multiplicatively.
    pub fn gamma_on_class(&self, g: &GroupElement, u: &CohClass) -> CohClass {
        let p = self.presentation();
        let gi = p.group().index_of(g);
        let mut out = CohClass::zero();
        for (m, c) in u.terms() {
            let exps: Vec<u32> = (0..self.theta()).map(|i| p.generators()[i].n * m.b[i] + m.c[i]).collect();
            let k = p.char_exponent(&exps, gi) as i64;
            out.add_term(m.clone(), c * p.zeta(-k));
        }
        out
    }

    /// Invariant basis monomials by degree `0..=degree_max`.
    pub fn invariant_basis(&self, degree_max: u32) -> Vec<Vec<CohMonomial>> {
        (0..=degree_max)
            .map(|n| self.monomials(n).into_iter().filter(|m| self.is_invariant(m)).collect())
            .collect()
    }

    pub fn hilbert_series(&self, degree_max: u32, invariant: bool) -> Vec<u64> {
        if invariant {
            self.invariant_basis(degree_max).iter().map(|v| v.len() as u64).collect()
        } else {
            (0..=degree_max).map(|n| self.dim_h(n)).collect()
        }
    }

    /// Decides whether some invariant `ξ^b η^c` has `Σ c_i` odd and returns
    /// one of minimal degree (ties broken by fewest `ξ` factors, then
    /// lexicographically). Invariance depends on `b_i` only modulo the order
    /// of `N_i χ_i`, so the search over that finite box is exhaustive.
    pub fn odd_invariant_witness(&self) -> Option<CohMonomial> {
        let p = self.presentation();
        let group = p.group();
        let theta = self.theta();
        let periods: Vec<u32> = p
            .generators()
            .iter()
            .map(|g| group.char_order(&group.char_pow(&g.chi, g.n as i64)))
            .collect();
        let mut best: Option<(u32, u32, CohMonomial)> = None;
        let mut b = vec![0u32; theta];
        loop {
            for mask in 0u32..(1 << theta) {
                if mask.count_ones() % 2 == 0 {
                    continue;
                }
                let c: Vec<u32> = (0..theta).map(|i| (mask >> (theta - 1 - i)) & 1).collect();
                let m = CohMonomial { b: b.clone(), c };
                if !self.is_invariant(&m) {
                    continue;
                }
                let key = (m.degree(), b.iter().sum::<u32>());
                let better = match &best {
                    None => true,
                    Some((d, s, bm)) => key < (*d, *s) || (key == (*d, *s) && m < *bm),
                };
                if better {
                    best = Some((key.0, key.1, m));
                }
            }
            let mut i = 0;
            loop {
                if i == theta {
                    return best.map(|(_, _, m)| m);
                }
                b[i] += 1;
                if b[i] < periods[i] {
                    break;
                }
                b[i] = 0;
                i += 1;
            }
        }
    }

    /// `ξ_i^{M_i}` with `M_i` the order of `χ_i`, module generators
    /// `ξ^b η^c` (`b_i < M_i`), and an exact span check through degree
    /// `2ΣM_i + θ`.
    pub fn fingen_witness(&self) -> Result<FinGenWitness, CohomologyError> {
        let p = self.presentation();
        let group = p.group();
        let theta = self.theta();
        let m: Vec<u32> = p.generators().iter().map(|g| group.char_order(&g.chi)).collect();
        let algebra_generators: Vec<CohMonomial> = (0..theta)
            .map(|i| {
                let mut x = CohMonomial::one(theta);
                x.b[i] = m[i];
                x
            })
            .collect();
        let mut module_generators = Vec::new();
        let mut b = vec![0u32; theta];
        'outer: loop {
            for mask in 0u32..(1 << theta) {
                let c: Vec<u32> = (0..theta).map(|i| (mask >> (theta - 1 - i)) & 1).collect();
                module_generators.push(CohMonomial { b: b.clone(), c });
            }
            let mut i = 0;
            loop {
                if i == theta {
                    break 'outer;
                }
                b[i] += 1;
                if b[i] < m[i] {
                    break;
                }
                b[i] = 0;
                i += 1;
            }
        }
        module_generators.sort_by_key(|x| (x.degree(), x.clone()));
        let top = 2 * m.iter().sum::<u32>() + theta as u32;
        for n in 0..=top {
            let basis = self.monomials(n);
            let index: HashMap<&CohMonomial, usize> = basis.iter().enumerate().map(|(i, x)| (x, i)).collect();
            let mut rows = Vec::new();
            for g in module_generators.iter().filter(|g| g.degree() <= n) {
                let rest = n - g.degree();
                if rest % 2 == 1 {
                    continue;
                }
                for k in weighted_compositions(&m, rest / 2) {
                    let mut a = CohMonomial::one(theta);
                    for i in 0..theta {
                        a.b[i] = k[i] * m[i];
                    }
                    let prod = self.product(&CohClass::monomial(a), &CohClass::monomial(g.clone()));
                    let row: BTreeMap<usize, CycNum> =
                        prod.terms().iter().map(|(x, c)| (index[x], c.clone())).collect();
                    rows.push(row);
                }
            }
            let rank = linalg::rank(rows, basis.len(), None).expect("no budget");
            if rank as u64 != self.dim_h(n) {
                return Err(CohomologyError::SpanFailure { degree: n, rank, expected: self.dim_h(n) });
            }
        }
        Ok(FinGenWitness { m, algebra_generators, module_generators, verified_through: top })
    }

    /// `q_ji` as an exponent of `ζ_L`.
    pub fn q_exp(&self, j: usize, i: usize) -> i64 {
        if j < i {
            self.res.q(j, i)
        } else {
            -self.res.q(i, j)
        }
    }

    fn maps_agree(&self, lhs: &ChainMap, rhs: &ChainMap, n_max: u32) -> Option<Vec<u32>> {
        for n in 0..=n_max {
            for a in self.res.generators(n) {
                let phi = self.res.phi(&a);
                if self.apply(lhs, &phi) != self.apply(rhs, &phi) {
                    return Some(a);
                }
            }
        }
        None
    }

    fn classes_agree(&self, lhs: &ChainMap, rhs: &ChainMap) -> bool {
        let n = lhs.shift().unwrap_or(0);
        self.class_of_map(lhs, n) == self.class_of_map(rhs, n)
    }

    /// The three relation families
    /// `ξ_iξ_j = q_{ji}^{N_iN_j}ξ_jξ_i`, `η_iξ_j = q_{ji}^{N_j}ξ_jη_i`,
    /// `η_iη_j = −q_{ji}η_jη_i` (`i ≠ j`), compared as chain maps on every
    /// generator of degree `≤ n_max`, plus `η_i² = ξ_i` (`N_i = 2`) or `0`
    /// (`N_i ≥ 3`) as classes.
    pub fn check_relations(&self, n_max: u32) -> Vec<RelationCheck> {
        let theta = self.theta();
        let n = self.res.nilpotency();
        let p = self.presentation();
        let mut out = Vec::new();
        let compare = |name: String, lhs: ChainMap, rhs: ChainMap| {
            let failure = self.maps_agree(&lhs, &rhs, n_max);
            let class_level = self.classes_agree(&lhs, &rhs);
            RelationCheck { name, chain_level: failure.is_none(), class_level, failure }
        };
        for i in 0..theta {
            for j in 0..theta {
                if i == j {
                    continue;
                }
                let q = self.q_exp(j, i);
                let (xi_i, xi_j) = (self.xi_chain(i), self.xi_chain(j));
                let (eta_i, eta_j) = (self.eta_chain(i), self.eta_chain(j));
                out.push(compare(
                    format!("ξ{0}ξ{1} = q{1}{0}^(N{0}N{1}) ξ{1}ξ{0}", i + 1, j + 1),
                    xi_i.compose(&xi_j),
                    xi_j.compose(&xi_i).scaled(p.zeta(q * (n[i] * n[j]) as i64)),
                ));
                out.push(compare(
                    format!("η{0}ξ{1} = q{1}{0}^N{1} ξ{1}η{0}", i + 1, j + 1),
                    eta_i.compose(&xi_j),
                    xi_j.compose(&eta_i).scaled(p.zeta(q * n[j] as i64)),
                ));
                out.push(compare(
                    format!("η{0}η{1} = -q{1}{0} η{1}η{0}", i + 1, j + 1),
                    eta_i.compose(&eta_j),
                    eta_j.compose(&eta_i).scaled(&-p.zeta(q).clone()),
                ));
            }
            let sq = self.eta_chain(i).compose(&self.eta_chain(i));
            let expect = if n[i] == 2 {
                CohClass::monomial(CohMonomial::xi(theta, i))
            } else {
                CohClass::zero()
            };
            let got = self.class_of_map(&sq, 2);
            let prod = self.product(
                &CohClass::monomial(CohMonomial::eta(theta, i)),
                &CohClass::monomial(CohMonomial::eta(theta, i)),
            );
            let ok = got == expect && prod == expect;
            out.push(RelationCheck {
                name: format!("η{0}² = {1}", i + 1, if n[i] == 2 { format!("ξ{}", i + 1) } else { "0".into() }),
                chain_level: ok,
                class_level: ok,
                failure: None,
            });
        }
        out
    }
}

/// All `k ∈ ℕ^θ` with `Σ k_i m_i = total`.
fn weighted_compositions(m: &[u32], total: u32) -> Vec<Vec<u32>> {
    fn go(m: &[u32], total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m.is_empty() {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let mut k = 0;
        while k * m[0] <= total {
            prefix.push(k);
            go(&m[1..], total - k * m[0], prefix, out);
            prefix.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    go(m, total, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::presets;
    use proptest::prelude::*;

    fn qci2() -> Presentation {
        Presentation::qci(&[vec![0, 1], vec![0, 0]], 6, &[2, 3])
    }

    #[test]
    fn chain_maps_commute_with_d() {
        let h = Cohomology::new(&qci2()).unwrap();
        for i in 0..2 {
            h.verify_chain_map(&h.xi_chain(i), 7).unwrap();
            h.verify_chain_map(&h.eta_chain(i), 7).unwrap();
        }
        let gr = Presentation::gr_of_datum(&presets::a1_cubed(3), false).unwrap();
        let h = Cohomology::new(&gr).unwrap();
        for i in 0..3 {
            h.verify_chain_map(&h.xi_chain(i), 5).unwrap();
            h.verify_chain_map(&h.eta_chain(i), 5).unwrap();
        }
    }

    #[test]
    fn elementary_examples() {
        let h = Cohomology::new(&qci2()).unwrap();
        let r = h.resolution();
        assert_eq!(h.apply(&h.xi_chain(0), &r.phi(&[2, 0])), r.phi(&[0, 0]));
        assert_eq!(h.apply(&h.eta_chain(0), &r.phi(&[1, 0])), r.phi(&[0, 0]));
        assert!(h.apply(&h.xi_chain(0), &r.phi(&[0, 2])).is_zero());
    }

    #[test]
    fn relations_hold() {
        let h = Cohomology::new(&qci2()).unwrap();
        for rc in h.check_relations(6) {
            assert!(rc.class_level, "{}", rc.name);
            assert!(rc.chain_level, "{} at {:?}", rc.name, rc.failure);
        }
    }

    #[test]
    fn eta_squared() {
        let p = Presentation::qci(&[vec![0]], 1, &[2]);
        let h = Cohomology::new(&p).unwrap();
        let eta = CohClass::monomial(CohMonomial::eta(1, 0));
        assert_eq!(h.product(&eta, &eta), CohClass::monomial(CohMonomial::xi(1, 0)));
        let p = Presentation::qci(&[vec![0]], 1, &[3]);
        let h = Cohomology::new(&p).unwrap();
        assert!(h.product(&eta, &eta).is_zero());
    }

    #[test]
    fn commutation_ratio() {
        let h = Cohomology::new(&qci2()).unwrap();
        let eta1 = CohClass::monomial(CohMonomial::eta(2, 0));
        let xi2 = CohClass::monomial(CohMonomial::xi(2, 1));
        let lhs = h.product(&eta1, &xi2);
        let rhs = h.product(&xi2, &eta1);
        // η1ξ2 = q21^{N2} ξ2η1 with q21 = q12⁻¹ = ζ₆⁻¹, N2 = 3
        assert_eq!(lhs, rhs.scaled(&CycNum::root_of_unity(6, -3)));
    }

    #[test]
    fn dimensions() {
        let h = Cohomology::new(&qci2()).unwrap();
        assert_eq!(h.dim_h(2), 3);
        let one = Cohomology::new(&Presentation::qci(&[vec![0]], 1, &[4])).unwrap();
        assert_eq!(one.dim_h(9), 1);
        let three = Cohomology::new(&Presentation::gr_of_datum(&presets::a1_cubed(3), false).unwrap()).unwrap();
        assert_eq!(three.dim_h(0), 1);
        assert_eq!(h.hilbert_series(3, false), vec![1, 2, 3, 4]);
    }

    #[test]
    fn a1_cubed_odd_witness() {
        for ell in [3, 5, 7] {
            let gr = Presentation::gr_of_datum(&presets::a1_cubed(ell), false).unwrap();
            let h = Cohomology::new(&gr).unwrap();
            let w = h.odd_invariant_witness().unwrap();
            assert_eq!(w, CohMonomial { b: vec![0, 0, 0], c: vec![1, 1, 1] }, "ℓ={ell}");
            let g = presets::a1_cubed(ell).g[1].clone();
            let u = CohClass::monomial(w);
            assert_eq!(h.gamma_on_class(&g, &u), u);
        }
    }

    #[test]
    fn sweedler_invariants() {
        let p = Presentation::gr_of_datum(&presets::sweedler(), true).unwrap();
        let h = Cohomology::new(&p).unwrap();
        assert_eq!(h.hilbert_series(5, true), vec![1, 0, 1, 0, 1, 0]);
        let g = presets::sweedler().g[0].clone();
        let eta = CohClass::monomial(CohMonomial::eta(1, 0));
        let xi = CohClass::monomial(CohMonomial::xi(1, 0));
        assert_eq!(h.gamma_on_class(&g, &eta), eta.scaled(&CycNum::from_int(-1)));
        assert_eq!(h.gamma_on_class(&g, &xi), xi);
        assert!(h.odd_invariant_witness().is_none());
    }

    #[test]
    fn uq_sl2_gr_series() {
        let d = presets::uq_sl2(3, false);
        let p = Presentation::gr_of_datum(&d, false).unwrap();
        let h = Cohomology::new(&p).unwrap();
        assert_eq!(h.hilbert_series(8, true), vec![1, 0, 3, 0, 5, 0, 7, 0, 9]);
        assert!(h.odd_invariant_witness().is_none());
    }

    #[test]
    fn fingen_counts() {
        let h = Cohomology::new(&Presentation::qci(&[vec![0]], 1, &[2])).unwrap();
        let w = h.fingen_witness().unwrap();
        assert_eq!(w.m, vec![1]);
        let d = presets::sweedler();
        let h = Cohomology::new(&Presentation::gr_of_datum(&d, false).unwrap()).unwrap();
        let w = h.fingen_witness().unwrap();
        assert_eq!(w.module_generators.len(), 4);
        assert_eq!(w.module_generators.iter().map(|m| m.to_string()).collect::<Vec<_>>(), ["1", "η1", "ξ1", "ξ1η1"]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn product_is_associative(
            a in (0u32..3, 0u32..2, 0u32..2, 0u32..2, 0u32..2, 0u32..2),
            b in (0u32..3, 0u32..2, 0u32..2, 0u32..2, 0u32..2, 0u32..2),
            c in (0u32..3, 0u32..2, 0u32..2, 0u32..2, 0u32..2, 0u32..2),
        ) {
            let gr = Presentation::gr_of_datum(&presets::a1_cubed(3), false).unwrap();
            let h = Cohomology::new(&gr).unwrap();
            let mk = |t: (u32, u32, u32, u32, u32, u32)| CohClass::monomial(CohMonomial { b: vec![t.0, t.1, t.2], c: vec![t.3, t.4, t.5] });
            let (x, y, z) = (mk(a), mk(b), mk(c));
            prop_assert_eq!(h.product(&h.product(&x, &y), &z), h.product(&x, &h.product(&y, &z)));
        }

        #[test]
        fn gamma_is_multiplicative(
            gsel in 0usize..27,
            a in (0u32..3, 0u32..2, 0u32..2, 0u32..2, 0u32..2, 0u32..2),
            b in (0u32..3, 0u32..2, 0u32..2, 0u32..2, 0u32..2, 0u32..2),
        ) {
            let d = presets::a1_cubed(3);
            let gr = Presentation::gr_of_datum(&d, false).unwrap();
            let h = Cohomology::new(&gr).unwrap();
            let g = d.group.element_at(gsel);
            let mk = |t: (u32, u32, u32, u32, u32, u32)| CohClass::monomial(CohMonomial { b: vec![t.0, t.1, t.2], c: vec![t.3, t.4, t.5] });
            let (x, y) = (mk(a), mk(b));
            prop_assert_eq!(
                h.gamma_on_class(&g, &h.product(&x, &y)),
                h.product(&h.gamma_on_class(&g, &x), &h.gamma_on_class(&g, &y))
            );
        }
    }

    #[test]
    fn invariant_classes_graded_commute() {
        let d = presets::a1_cubed(3);
        let gr = Presentation::gr_of_datum(&d, false).unwrap();
        let h = Cohomology::new(&gr).unwrap();
        let inv: Vec<CohMonomial> = h.invariant_basis(6).into_iter().flatten().collect();
        for u in &inv {
            for v in &inv {
                if u.degree() + v.degree() > 6 {
                    continue;
                }
                let (cu, cv) = (CohClass::monomial(u.clone()), CohClass::monomial(v.clone()));
                let sign = if u.degree() * v.degree() % 2 == 1 { -1 } else { 1 };
                assert_eq!(h.product(&cu, &cv), h.product(&cv, &cu).scaled(&CycNum::from_int(sign)), "{u} {v}");
            }
        }
    }
}
