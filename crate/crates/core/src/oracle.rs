//! `Ext_A(k,k)` from the reduced bar complex of a finite-dimensional
//! augmented algebra, and cocycle checks against it.
//!
//! `A⁺` has basis `{x^a g : a ≠ 0} ∪ {g − 1 : g ≠ 1}`; its coordinates are the
//! PBW coordinates with the unit dropped.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra, Monomial, Presentation};
use crate::cyclo::CycNum;
use crate::linalg::{self, BudgetExceeded, SparseRow};

/// Environment variable overriding the default elimination budget.
pub const BUDGET_ENV: &str = "POINTED_COH_ORACLE_BUDGET";
pub const DEFAULT_BUDGET: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(
        "degree {degree} needs a {rows} x {cols} coboundary matrix; elimination exceeded the budget of {budget} entries (reached {reached})"
    )]
    Budget { degree: u32, rows: u64, cols: u64, budget: usize, reached: usize },
    #[error("cochain arity {found} does not match {expected}")]
    Arity { expected: usize, found: usize },
}

pub fn default_budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Something that can be evaluated on tuples of `A⁺` basis indices.
pub trait CochainFn {
    fn arity(&self) -> usize;
    fn eval(&self, args: &[usize]) -> CycNum;
}

/// A sparse cochain on `(A⁺)^{⊗n}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cochain {
    pub arity: usize,
    pub values: BTreeMap<Vec<usize>, CycNum>,
}

impl Cochain {
    pub fn zero(arity: usize) -> Self {
        Cochain { arity, values: BTreeMap::new() }
    }

    pub fn set(&mut self, args: Vec<usize>, v: CycNum) {
        assert_eq!(args.len(), self.arity);
        if v.is_zero() {
            self.values.remove(&args);
        } else {
            self.values.insert(args, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

impl CochainFn for Cochain {
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, args: &[usize]) -> CycNum {
        self.values.get(args).cloned().unwrap_or_else(CycNum::zero)
    }
}

/// A cochain given by a closure.
pub struct FnCochain<F: Fn(&[usize]) -> CycNum> {
    pub arity: usize,
    pub f: F,
}

impl<F: Fn(&[usize]) -> CycNum> CochainFn for FnCochain<F> {
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, args: &[usize]) -> CycNum {
        (self.f)(args)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct CocycleReport {
    pub evaluations: usize,
    pub violations: Vec<(Vec<usize>, CycNum)>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The reduced bar complex of a finite-dimensional augmented algebra.
#[derive(Debug, Clone)]
pub struct BarComplex {
    alg: FiniteAlgebra,
    /// PBW basis index of each `A⁺` basis element.
    plus: Vec<usize>,
    /// `A⁺` index of each PBW basis index (unit excluded).
    pos: Vec<Option<usize>>,
    /// Products of `A⁺` basis elements in `A⁺` coordinates.
    mult: Vec<Vec<Vec<(usize, CycNum)>>>,
    weights: Vec<Vec<i64>>,
    budget: usize,
}

impl BarComplex {
    pub fn new(p: &Presentation) -> Result<Self, OracleError> {
        Ok(Self::from_algebra(FiniteAlgebra::from_presentation(p)?))
    }

    pub fn from_algebra(alg: FiniteAlgebra) -> Self {
        let plus: Vec<usize> = (0..alg.dim()).filter(|&u| u != alg.unit).collect();
        let mut pos = vec![None; alg.dim()];
        for (i, &u) in plus.iter().enumerate() {
            pos[u] = Some(i);
        }
        let group_part = |u: usize| alg.is_group_only(u);
        let mut mult = vec![vec![Vec::new(); plus.len()]; plus.len()];
        for (i, &u) in plus.iter().enumerate() {
            for (j, &v) in plus.iter().enumerate() {
                // (m_u − [u∈Γ])(m_v − [v∈Γ])
                let mut acc: HashMap<usize, CycNum> = HashMap::new();
                let mut add = |w: usize, c: &CycNum| {
                    let e = acc.entry(w).or_insert_with(CycNum::zero);
                    *e += c;
                };
                for (w, c) in &alg.table[u][v] {
                    add(*w, c);
                }
                if group_part(u) {
                    add(v, &CycNum::from_int(-1));
                }
                if group_part(v) {
                    add(u, &CycNum::from_int(-1));
                }
                let mut out: Vec<(usize, CycNum)> = acc
                    .into_iter()
                    .filter(|(w, c)| *w != alg.unit && !c.is_zero())
                    .map(|(w, c)| (pos[w].expect("non-unit"), c))
                    .collect();
                out.sort_by_key(|(w, _)| *w);
                mult[i][j] = out;
            }
        }
        let weights = plus.iter().map(|&u| alg.weights[u].clone()).collect();
        BarComplex { alg, plus, pos, mult, weights, budget: default_budget() }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.alg
    }

    /// `dim A⁺`.
    pub fn dim_plus(&self) -> usize {
        self.plus.len()
    }

    /// The PBW monomial underlying an `A⁺` basis element (`g` stands for
    /// `g − 1`).
    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.alg.basis[self.plus[i]]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.alg.index.get(m).and_then(|&u| self.pos[u])
    }

    pub fn is_group_element(&self, i: usize) -> bool {
        self.alg.is_group_only(self.plus[i])
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, CycNum)] {
        &self.mult[i][j]
    }

    /// `(δf)(a_1,…,a_{n+1}) = Σ_{i=0}^{n−1} (−1)^{i+1} f(…, a_{i+1}a_{i+2}, …)`.
    pub fn delta_at(&self, f: &dyn CochainFn, args: &[usize]) -> CycNum {
        let mut out = CycNum::zero();
        let mut buf: Vec<usize> = Vec::with_capacity(args.len() - 1);
        for i in 0..args.len() - 1 {
            let terms = &self.mult[args[i]][args[i + 1]];
            if terms.is_empty() {
                continue;
            }
            for (w, c) in terms {
                buf.clear();
                buf.extend_from_slice(&args[..i]);
                buf.push(*w);
                buf.extend_from_slice(&args[i + 2..]);
                let v = f.eval(&buf);
                if v.is_zero() {
                    continue;
                }
                let t = c * &v;
                if i % 2 == 0 {
                    out -= &t;
                } else {
                    out += &t;
                }
            }
        }
        out
    }

    /// `δf` as a sparse cochain (enumerates all `(n+1)`-tuples).
    pub fn bar_differential(&self, f: &dyn CochainFn) -> Cochain {
        let n = f.arity();
        let mut out = Cochain::zero(n + 1);
        if n == 0 {
            return out;
        }
        for t in tuples(self.dim_plus(), n + 1) {
            let v = self.delta_at(f, &t);
            if !v.is_zero() {
                out.values.insert(t, v);
            }
        }
        out
    }

    pub fn is_cocycle(&self, f: &dyn CochainFn, mode: CheckMode) -> CocycleReport {
        let n = f.arity();
        let mut report = CocycleReport { evaluations: 0, violations: Vec::new() };
        let mut check = |t: Vec<usize>| {
            report.evaluations += 1;
            let v = self.delta_at(f, &t);
            if !v.is_zero() {
                report.violations.push((t, v));
            }
        };
        match mode {
            CheckMode::Exhaustive => {
                for t in tuples(self.dim_plus(), n + 1) {
                    check(t);
                }
            }
            CheckMode::Sampled { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let d = self.dim_plus();
                for _ in 0..samples {
                    let t: Vec<usize> = (0..=n).map(|_| rng.gen_range(0..d)).collect();
                    check(t);
                }
            }
        }
        report
    }

    /// `δf` checked on the given tuples.
    pub fn is_cocycle_on<I>(&self, f: &dyn CochainFn, tuples: I) -> CocycleReport
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut report = CocycleReport { evaluations: 0, violations: Vec::new() };
        for t in tuples {
            report.evaluations += 1;
            let v = self.delta_at(f, &t);
            if !v.is_zero() {
                report.violations.push((t, v));
            }
        }
        report
    }

    /// Pairs `(a, b)` with `w` appearing in `ab`.
    pub fn factorizations(&self, w: usize) -> Vec<(usize, usize)> {
        let d = self.dim_plus();
        let mut out = Vec::new();
        for a in 0..d {
            for b in 0..d {
                if self.mult[a][b].iter().any(|(x, _)| *x == w) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn tuple_weight(&self, t: &[usize]) -> Vec<i64> {
        let mut w = vec![0i64; self.weights.first().map_or(0, |x| x.len())];
        for &i in t {
            for (a, b) in w.iter_mut().zip(&self.weights[i]) {
                *a += b;
            }
        }
        w
    }

    /// `rank δ^n` for `δ^n : C^n → C^{n+1}`, assembled per weight block.
    pub fn coboundary_rank(&self, n: u32) -> Result<usize, OracleError> {
        if n == 0 {
            return Ok(0);
        }
        let d = self.dim_plus();
        let n = n as usize;
        let mut cols: HashMap<Vec<i64>, HashMap<Vec<usize>, usize>> = HashMap::new();
        for t in tuples(d, n) {
            let block = cols.entry(self.tuple_weight(&t)).or_default();
            let k = block.len();
            block.insert(t, k);
        }
        let mut rows: HashMap<Vec<i64>, Vec<SparseRow>> = HashMap::new();
        let mut buf = Vec::with_capacity(n);
        for t in tuples(d, n + 1) {
            let mut row: SparseRow = BTreeMap::new();
            let w = self.tuple_weight(&t);
            for i in 0..n {
                for (x, c) in &self.mult[t[i]][t[i + 1]] {
                    buf.clear();
                    buf.extend_from_slice(&t[..i]);
                    buf.push(*x);
                    buf.extend_from_slice(&t[i + 2..]);
                    let col = cols[&w][&buf];
                    let e = row.entry(col).or_insert_with(CycNum::zero);
                    if i % 2 == 0 {
                        *e -= c;
                    } else {
                        *e += c;
                    }
                }
            }
            row.retain(|_, v| !v.is_zero());
            if !row.is_empty() {
                rows.entry(w).or_default().push(row);
            }
        }
        let mut total = 0;
        let mut blocks: Vec<_> = rows.into_iter().collect();
        blocks.sort_by(|a, b| a.0.cmp(&b.0));
        for (w, block) in blocks {
            let ncols = cols[&w].len();
            total += linalg::rank(block, ncols, Some(self.budget)).map_err(|BudgetExceeded { budget, reached }| {
                OracleError::Budget {
                    degree: n as u32,
                    rows: (d as u64).pow(n as u32 + 1),
                    cols: (d as u64).pow(n as u32),
                    budget,
                    reached,
                }
            })?;
        }
        Ok(total)
    }

    /// `dim Ext^n = D^n − rank δ^n − rank δ^{n−1}`.
    pub fn ext_dim(&self, n: u32) -> Result<u64, OracleError> {
        let dn = (self.dim_plus() as u64).pow(n);
        let r = self.coboundary_rank(n)? as u64;
        let r_prev = if n == 0 { 0 } else { self.coboundary_rank(n - 1)? as u64 };
        Ok(dn - r - r_prev)
    }

    /// `dim Ext^0, …, dim Ext^{n_max}`, reusing ranks.
    pub fn ext_dims(&self, n_max: u32) -> Result<Vec<u64>, OracleError> {
        let mut ranks = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max {
            ranks.push(self.coboundary_rank(n)? as u64);
        }
        Ok((0..=n_max)
            .map(|n| {
                let dn = (self.dim_plus() as u64).pow(n);
                dn - ranks[n as usize] - if n == 0 { 0 } else { ranks[n as usize - 1] }
            })
            .collect())
    }
}

/// All tuples in `{0..d}^n`, last coordinate fastest.
pub fn tuples(d: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if d == 0 && n > 0 { 0 } else { d.pow(n as u32) };
    (0..total).map(move |mut k| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = k % d;
            k /= d;
        }
        t
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::presets;
    use proptest::prelude::*;

    fn dual_numbers() -> BarComplex {
        BarComplex::new(&Presentation::qci(&[vec![0]], 1, &[2])).unwrap()
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(tuples(2, 2).collect::<Vec<_>>(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(tuples(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn dual_numbers_ext() {
        let b = dual_numbers();
        assert_eq!(b.ext_dims(6).unwrap(), vec![1; 7]);
        let mut f = Cochain::zero(1);
        f.set(vec![0], CycNum::from_int(1));
        assert!(b.bar_differential(&f).is_zero());
        assert!(b.bar_differential(&Cochain::zero(0)).is_zero());
    }

    #[test]
    fn qci_ext_matches_binomial() {
        let b = BarComplex::new(&Presentation::qci(&[vec![0, 1], vec![0, 0]], 6, &[2, 3])).unwrap();
        assert_eq!(b.ext_dims(4).unwrap(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn sweedler_ext() {
        let b = BarComplex::new(&Presentation::gr_of_datum(&presets::sweedler(), true).unwrap()).unwrap();
        assert_eq!(b.dim_plus(), 3);
        assert_eq!(b.ext_dims(5).unwrap(), vec![1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn budget_error() {
        let b = BarComplex::new(&Presentation::qci(&[vec![0, 1], vec![0, 0]], 6, &[2, 3]))
            .unwrap()
            .with_budget(3);
        assert!(matches!(b.ext_dim(2), Err(OracleError::Budget { .. })));
    }

    #[test]
    fn group_minus_one_basis() {
        let p = Presentation::gr_of_datum(&presets::sweedler(), true).unwrap();
        let b = BarComplex::new(&p).unwrap();
        let g = b.index_of(&Monomial { exps: vec![0], group: 1 }).unwrap();
        // (g − 1)² = g² − 2g + 1 = −2(g − 1)
        assert_eq!(b.product(g, g), &[(g, CycNum::from_int(-2))]);
    }

    fn random_cochain(d: usize, arity: usize, entries: &[(usize, i64)]) -> Cochain {
        let mut f = Cochain::zero(arity);
        let all: Vec<Vec<usize>> = tuples(d, arity).collect();
        for &(k, v) in entries {
            f.set(all[k % all.len()].clone(), CycNum::from_int(v));
        }
        f
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn delta_squared_vanishes(
            which in 0usize..4,
            arity in 1usize..3,
            entries in proptest::collection::vec((0usize..10_000, -3i64..4), 1..6),
        ) {
            let p = match which {
                0 => Presentation::qci(&[vec![0, 1], vec![0, 0]], 6, &[2, 3]),
                1 => Presentation::gr_of_datum(&presets::sweedler(), true).unwrap(),
                2 => Presentation::smash_from_datum(&presets::uq_sl2(3, false)).unwrap(),
                _ => Presentation::nichols_a2(&presets::a2(3), true).unwrap(),
            };
            let b = BarComplex::new(&p).unwrap();
            // δδf has arity ≤ 3 on the larger algebras
            let arity = if b.dim_plus() > 12 { 1 } else { arity };
            let f = random_cochain(b.dim_plus(), arity, &entries);
            let df = b.bar_differential(&f);
            let rep = b.is_cocycle(&df, CheckMode::Exhaustive);
            prop_assert!(rep.passed());
        }
    }
}
