//! The free resolution `K•` of the trivial module over a quantum complete
//! intersection `S`.
//!
//! `K_n` is free on generators `Φ(a)` with `|a| = n`. Elements are written
//! `Σ s_a Φ(a)` with `s_a ∈ S` acting from the left.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{AlgebraError, Monomial, PBWElement, Presentation};
use crate::cyclo::CycNum;
use crate::datum::GroupElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("the resolution needs an untwisted truncated presentation (quantum complete intersection)")]
    NotQci,
    #[error("homotopy on degree 0 is only defined against the augmentation")]
    DegreeZero,
    #[error("coefficient carries a group element")]
    GroupCoefficient,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `σ(a)` for nilpotency order `n`.
pub fn sigma(n: u32, a: u32) -> u32 {
    if a % 2 == 1 {
        1
    } else {
        n - 1
    }
}

/// `τ(a) = σ(1) + ⋯ + σ(a)`.
pub fn tau(n: u32, a: u32) -> u32 {
    (a / 2) * n + a % 2
}

/// All `a ∈ ℕ^θ` with `|a| = n`, in lexicographically decreasing order.
pub fn compositions(theta: usize, n: u32) -> Vec<Vec<u32>> {
    if theta == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in compositions(theta - 1, n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `Σ_a s_a Φ(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResElement {
    terms: BTreeMap<Vec<u32>, PBWElement>,
}

impl ResElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `s·Φ(a)`.
    pub fn term(s: PBWElement, a: Vec<u32>) -> Self {
        let mut e = Self::zero();
        e.add(&a, &s);
        e
    }

    pub fn add(&mut self, a: &[u32], s: &PBWElement) {
        if s.is_zero() {
            return;
        }
        let entry = self.terms.entry(a.to_vec()).or_default();
        *entry = &*entry + s;
        if entry.is_zero() {
            self.terms.remove(a);
        }
    }

    pub fn add_scaled(&mut self, other: &ResElement, c: &CycNum) {
        for (a, s) in &other.terms {
            self.add(a, &s.scaled(c));
        }
    }

    pub fn add_monomial(&mut self, a: &[u32], m: Monomial, c: CycNum) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(a.to_vec()).or_default();
        entry.add_term(m, c);
        if entry.is_zero() {
            self.terms.remove(a);
        }
    }

    pub fn scaled(&self, c: &CycNum) -> ResElement {
        let mut out = ResElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, PBWElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: &[u32]) -> PBWElement {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    /// Homological degrees present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|a| a.iter().sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

impl std::ops::Sub<&ResElement> for &ResElement {
    type Output = ResElement;
    fn sub(self, rhs: &ResElement) -> ResElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &CycNum::from_int(-1));
        out
    }
}

impl std::ops::Add<&ResElement> for &ResElement {
    type Output = ResElement;
    fn add(self, rhs: &ResElement) -> ResElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &CycNum::one());
        out
    }
}

/// A failed identity in [`Resolution::verify_exactness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub identity: &'static str,
    pub input: String,
    pub residue: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails on {}: residue {}", self.identity, self.input, self.residue)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExactnessReport {
    pub n_max: u32,
    pub generators_checked: usize,
    pub elements_checked: usize,
    pub failures: Vec<Counterexample>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `K•` over a quantum complete intersection.
#[derive(Debug, Clone)]
pub struct Resolution {
    p: Presentation,
    n: Vec<u32>,
}

impl Resolution {
    pub fn new(p: &Presentation) -> Result<Self, ResolutionError> {
        if p.has_tails() || !p.is_truncated() {
            return Err(ResolutionError::NotQci);
        }
        Ok(Resolution {
            n: p.generators().iter().map(|g| g.n).collect(),
            p: p.clone(),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.p
    }

    pub fn theta(&self) -> usize {
        self.n.len()
    }

    pub fn nilpotency(&self) -> &[u32] {
        &self.n
    }

    pub fn sigma(&self, i: usize, a: u32) -> u32 {
        sigma(self.n[i], a)
    }

    pub fn tau(&self, i: usize, a: u32) -> u32 {
        tau(self.n[i], a)
    }

    /// `q_{ij}` exponent for `i < j`.
    pub fn q(&self, i: usize, j: usize) -> i64 {
        self.p.q_exponent(i, j)
    }

    /// `±ζ^e`.
    pub fn root(&self, negative: bool, e: i64) -> CycNum {
        let z = self.p.zeta(e).clone();
        if negative {
            -z
        } else {
            z
        }
    }

    pub fn rank(&self, n: u32) -> u64 {
        binomial(n as u64 + self.theta() as u64 - 1, self.theta() as u64 - 1)
    }

    pub fn generators(&self, n: u32) -> Vec<Vec<u32>> {
        compositions(self.theta(), n)
    }

    pub fn unit(&self) -> PBWElement {
        self.p.identity()
    }

    pub fn x_power(&self, i: usize, k: u32) -> Monomial {
        Monomial::generator(self.theta(), i, k)
    }

    pub fn phi(&self, a: &[u32]) -> ResElement {
        ResElement::term(self.unit(), a.to_vec())
    }

    /// `d_i(Φ(a)) = c · x_i^{σ_i(a_i)} Φ(a − e_i)`, as `(c, σ)`.
    pub fn d_i_scalar(&self, i: usize, a: &[u32]) -> Option<(CycNum, u32)> {
        if a[i] == 0 {
            return None;
        }
        let s = self.sigma(i, a[i]);
        let mut neg = false;
        let mut e = 0i64;
        for l in 0..i {
            neg ^= a[l] % 2 == 1;
            e += self.q(l, i) * (s as i64) * self.tau(l, a[l]) as i64;
        }
        Some((self.root(neg, e), s))
    }

    /// `d_i` extended `S`-linearly.
    pub fn differential_i(&self, i: usize, e: &ResElement) -> ResElement {
        let mut out = ResElement::zero();
        for (a, s) in e.terms() {
            if let Some((c, pow)) = self.d_i_scalar(i, a) {
                let x = PBWElement::monomial(self.x_power(i, pow), c);
                let mut b = a.clone();
                b[i] -= 1;
                out.add(&b, &self.p.multiply(s, &x));
            }
        }
        out
    }

    pub fn differential(&self, e: &ResElement) -> ResElement {
        let mut out = ResElement::zero();
        for i in 0..self.theta() {
            out.add_scaled(&self.differential_i(i, e), &CycNum::one());
        }
        out
    }

    /// `s_ℓ` on `c·x^J Φ(a)`.
    fn s_l_monomial(&self, l: usize, m: &Monomial, c: &CycNum, a: &[u32], out: &mut ResElement) {
        let j = m.exps[l];
        let nl = self.n[l];
        let even = a[l] % 2 == 0;
        if (even && j == 0) || (!even && j != nl - 1) {
            return;
        }
        // x^J = ∏_{m>ℓ} q_{ℓm}^{J_ℓ J_m} · x^{J − J_ℓ e_ℓ} x_ℓ^{J_ℓ}
        let mut e = 0i64;
        for k in l + 1..self.theta() {
            e += self.q(l, k) * j as i64 * m.exps[k] as i64;
        }
        let s_next = self.sigma(l, a[l] + 1) as i64;
        let mut neg = false;
        for k in 0..l {
            neg ^= a[k] % 2 == 1;
            e -= self.q(k, l) * s_next * self.tau(k, a[k]) as i64;
        }
        let mut alpha = m.exps.clone();
        alpha[l] = 0;
        let mut b = a.to_vec();
        b[l] += 1;
        let scalar = c * &self.root(neg, e);
        if even {
            let prod = self
                .p
                .mul_monomials(&Monomial::x(alpha), &self.x_power(l, j - 1));
            for (pm, pc) in prod.iter() {
                out.add_monomial(&b, pm.clone(), pc * &scalar);
            }
        } else {
            out.add_monomial(&b, Monomial::x(alpha), scalar);
        }
    }

    /// The contracting homotopy `s` on positive degrees.
    pub fn homotopy(&self, e: &ResElement) -> Result<ResElement, ResolutionError> {
        if e.terms().keys().any(|a| a.iter().all(|&x| x == 0)) {
            return Err(ResolutionError::DegreeZero);
        }
        self.augmented_homotopy(e)
    }

    /// `s` on all degrees, with `s(1·Φ(0)) = 0` so that `ds = id − unit∘ε`
    /// on `K_0`.
    pub fn augmented_homotopy(&self, e: &ResElement) -> Result<ResElement, ResolutionError> {
        let theta = self.theta();
        let mut out = ResElement::zero();
        for (a, s) in e.terms() {
            for (m, c) in s.iter() {
                if m.group != 0 {
                    return Err(ResolutionError::GroupCoefficient);
                }
                let idle = (0..theta).filter(|&i| m.exps[i] == 0 && a[i] == 0).count();
                if idle == theta {
                    continue;
                }
                let mut part = ResElement::zero();
                for l in 0..theta {
                    self.s_l_monomial(l, m, c, a, &mut part);
                }
                let f = CycNum::from_rational(BigRational::new(
                    BigInt::one(),
                    BigInt::from((theta - idle) as u64),
                ));
                out.add_scaled(&part, &f);
            }
        }
        Ok(out)
    }

    /// `g·(sΦ(a)) = (g·s) ∏_ℓ χ_ℓ(g)^{τ_ℓ(a_ℓ)} Φ(a)`.
    pub fn gamma_action(&self, g: &GroupElement, e: &ResElement) -> ResElement {
        let gi = self.p.group().index_of(g);
        let mut out = ResElement::zero();
        for (a, s) in e.terms() {
            let taus: Vec<u32> = (0..self.theta()).map(|l| self.tau(l, a[l])).collect();
            let k = self.p.char_exponent(&taus, gi);
            out.add(a, &self.p.act(g, s).scaled(self.p.zeta(k as i64)));
        }
        out
    }

    /// Checks `d² = 0` and `sd + ds = id` on every generator `Φ(a)` with
    /// `1 ≤ |a| ≤ n_max`, and `ker ε = im d` on the monomial basis of `K_0`.
    pub fn verify_exactness(&self, n_max: u32) -> ExactnessReport {
        self.check(n_max, false)
    }

    /// As [`Resolution::verify_exactness`], with `sd + ds = id` tested on
    /// every `x^J Φ(a)` rather than only on generators.
    pub fn verify_exactness_full(&self, n_max: u32) -> ExactnessReport {
        self.check(n_max, true)
    }

    fn check(&self, n_max: u32, full: bool) -> ExactnessReport {
        let mut report = ExactnessReport { n_max, ..Default::default() };
        let box_ = self.p.exponent_box().expect("truncated");
        let fmt_gen = |m: &Monomial, a: &[u32]| format!("{}·Φ{:?}", self.p.format_monomial(m), a);
        for n in 0..=n_max {
            for a in self.generators(n) {
                report.generators_checked += 1;
                let phi = self.phi(&a);
                let dd = self.differential(&self.differential(&phi));
                if !dd.is_zero() {
                    report.failures.push(Counterexample {
                        identity: "d∘d = 0",
                        input: fmt_gen(&Monomial::one(self.theta()), &a),
                        residue: format!("{dd:?}"),
                    });
                }
                let unit_only = [vec![0; self.theta()]];
                let multiples: &[Vec<u32>] = if full || n == 0 { &box_ } else { &unit_only };
                for exps in multiples {
                    let m = Monomial::x(exps.clone());
                    let e = ResElement::term(PBWElement::basis(m.clone()), a.clone());
                    let ds = self.differential(&self.augmented_homotopy(&e).expect("no group"));
                    let sd = self.augmented_homotopy(&self.differential(&e)).expect("no group");
                    let mut expect = e.clone();
                    if n == 0 && m.exps.iter().all(|&x| x == 0) {
                        // ds = id − unit∘ε on K_0
                        expect = ResElement::zero();
                    }
                    let residue = &(&ds + &sd) - &expect;
                    report.elements_checked += 1;
                    if !residue.is_zero() {
                        report.failures.push(Counterexample {
                            identity: if n == 0 { "ds = id − ε" } else { "sd + ds = id" },
                            input: fmt_gen(&m, &a),
                            residue: format!("{residue:?}"),
                        });
                    }
                }
            }
        }
        report
    }
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
    fn sigma_tau_values() {
        assert_eq!(sigma(5, 1), 1);
        assert_eq!(sigma(5, 2), 4);
        assert_eq!(tau(5, 2), 5);
        assert_eq!(tau(5, 0), 0);
        for n in 2..6 {
            for a in 0..9 {
                assert_eq!(tau(n, a), (1..=a).map(|j| sigma(n, j)).sum::<u32>());
            }
        }
    }

    #[test]
    fn differential_examples() {
        let r = Resolution::new(&qci2()).unwrap();
        let d = r.differential(&r.phi(&[1, 0]));
        assert_eq!(d, ResElement::term(PBWElement::basis(Monomial::x(vec![1, 0])), vec![0, 0]));
        let d = r.differential(&r.phi(&[0, 2]));
        assert_eq!(d, ResElement::term(PBWElement::basis(Monomial::x(vec![0, 2])), vec![0, 1]));
        assert!(r.differential(&r.differential(&r.phi(&[1, 1]))).is_zero());
    }

    #[test]
    fn homotopy_examples() {
        let r = Resolution::new(&qci2()).unwrap();
        let e = ResElement::term(PBWElement::basis(Monomial::x(vec![1, 0])), vec![0, 0]);
        assert_eq!(r.augmented_homotopy(&e).unwrap(), r.phi(&[1, 0]));
        let p = r.phi(&[1, 1]);
        let sd = r.homotopy(&r.differential(&p)).unwrap();
        let ds = r.differential(&r.homotopy(&p).unwrap());
        assert_eq!(&sd + &ds, p);
        assert!(r.augmented_homotopy(&r.phi(&[0, 0])).unwrap().is_zero());
        assert_eq!(r.homotopy(&r.phi(&[0, 0])), Err(ResolutionError::DegreeZero));
    }

    #[test]
    fn exactness_small_cases() {
        assert!(Resolution::new(&qci2()).unwrap().verify_exactness_full(6).passed());
        for n in 2..6 {
            let p = Presentation::qci(&[vec![0]], 1, &[n]);
            assert!(Resolution::new(&p).unwrap().verify_exactness_full(6).passed());
        }
        let gr = Presentation::gr_of_datum(&presets::a1_cubed(3), false).unwrap();
        let rep = Resolution::new(&gr).unwrap().verify_exactness_full(4);
        assert!(rep.passed(), "{:?}", rep.failures.first());
        let rep = Resolution::new(&gr).unwrap().verify_exactness(6);
        assert!(rep.passed(), "{:?}", rep.failures.first());
    }

    #[test]
    fn rank_matches_compositions() {
        let gr = Presentation::gr_of_datum(&presets::a1_cubed(3), false).unwrap();
        let r = Resolution::new(&gr).unwrap();
        for n in 0..7 {
            assert_eq!(r.generators(n).len() as u64, r.rank(n));
        }
    }

    #[test]
    fn rejects_tails() {
        let p = Presentation::nichols_a2(&presets::a2(3), true).unwrap();
        assert!(matches!(Resolution::new(&p), Err(ResolutionError::NotQci)));
    }

    #[test]
    fn gamma_on_generators() {
        let d = presets::a1_cubed(5);
        let gr = Presentation::gr_of_datum(&d, false).unwrap();
        let r = Resolution::new(&gr).unwrap();
        let g = d.g[0].clone();
        assert_eq!(r.gamma_action(&g, &r.phi(&[0, 0, 0])), r.phi(&[0, 0, 0]));
        let v = d.group.evaluate(&d.chi[0], &g).pow(5).unwrap();
        assert_eq!(r.gamma_action(&g, &r.phi(&[2, 0, 0])), r.phi(&[2, 0, 0]).scaled(&v));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn differential_is_equivariant(
            gsel in 0usize..125,
            terms in proptest::collection::vec(((0u32..5, 0u32..5, 0u32..5), (0u32..3, 0u32..3, 0u32..3), -3i64..4), 1..5),
        ) {
            let d = presets::a1_cubed(5);
            let gr = Presentation::gr_of_datum(&d, false).unwrap();
            let r = Resolution::new(&gr).unwrap();
            let g = d.group.element_at(gsel % d.group.size());
            let mut e = ResElement::zero();
            for ((j1, j2, j3), (a1, a2, a3), c) in terms {
                // keep one homological degree
                let a = vec![a1, a2, a3 + (6 - a1 - a2 - a3)];
                e.add_monomial(&a, Monomial::x(vec![j1, j2, j3]), CycNum::from_int(c));
            }
            let lhs = r.differential(&r.gamma_action(&g, &e));
            let rhs = r.gamma_action(&g, &r.differential(&e));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
