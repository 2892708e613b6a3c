//! Data of finite Cartan type: an abelian group, grouplikes `g_i`, characters
//! `χ_i`, a Cartan matrix, linking parameters `λ` and root vector parameters `μ`.
//!
//! Characters are stored as dual exponent vectors, so every triviality or
//! equality test on characters is an integer congruence.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::cyclo::{CycNum, CycloError};
use crate::roots::{CartanMatrix, DynkinType, Root, RootError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("malformed datum: {0}")]
    Structure(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("Cartan condition fails at (i, j) = ({i}, {j}): χ_j(g_i)χ_i(g_j) = {lhs} but χ_i(g_i)^a_ij = {rhs}")]
    CartanCondition { i: usize, j: usize, lhs: String, rhs: String },
    #[error("χ_{i}(g_{i}) = 1; the braiding on each generator must be nontrivial")]
    TrivialBraiding { i: usize },
    #[error("linking parameter λ_{i},{j} must vanish: {reason}")]
    Linking { i: usize, j: usize, reason: String },
    #[error("root vector parameter μ for root {root} must vanish: {reason}")]
    RootVector { root: String, reason: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

/// `Γ ≅ Z/d_1 × ⋯ × Z/d_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    orders: Vec<u32>,
    exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub exps: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub exps: Vec<u32>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self, DatumError> {
        if orders.iter().any(|&d| d == 0) {
            return Err(DatumError::Structure("group orders must be positive".into()));
        }
        let exponent = orders.iter().fold(1u32, |acc, &d| acc.lcm(&d));
        Ok(FiniteAbelianGroup { orders, exponent })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: vec![], exponent: 1 }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// The working cyclotomic order `L = lcm(d_j)`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn size(&self) -> usize {
        self.orders.iter().map(|&d| d as usize).product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { exps: vec![0; self.rank()] }
    }

    pub fn trivial_character(&self) -> Character {
        Character { exps: vec![0; self.rank()] }
    }

    pub fn element(&self, exps: &[i64]) -> GroupElement {
        GroupElement { exps: self.reduce(exps) }
    }

    pub fn character(&self, exps: &[i64]) -> Character {
        Character { exps: self.reduce(exps) }
    }

    fn reduce(&self, exps: &[i64]) -> Vec<u32> {
        assert_eq!(exps.len(), self.rank(), "exponent vector length mismatch");
        exps.iter()
            .zip(&self.orders)
            .map(|(&e, &d)| e.rem_euclid(d as i64) as u32)
            .collect()
    }

    /// Mixed-radix index in `0..size()`, first factor varying slowest.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        let mut idx = 0usize;
        for (&e, &d) in g.exps.iter().zip(&self.orders) {
            idx = idx * d as usize + e as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut exps = vec![0u32; self.rank()];
        for j in (0..self.rank()).rev() {
            let d = self.orders[j] as usize;
            exps[j] = (idx % d) as u32;
            idx /= d;
        }
        GroupElement { exps }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size()).map(move |i| self.element_at(i))
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            exps: zip_mod(&a.exps, &b.exps, &self.orders, |x, y| x + y),
        }
    }

    pub fn pow(&self, a: &GroupElement, k: i64) -> GroupElement {
        let exps: Vec<i64> = a.exps.iter().map(|&e| e as i64 * k).collect();
        self.element(&exps)
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        self.pow(a, -1)
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        a.exps.iter().all(|&e| e == 0)
    }

    pub fn element_order(&self, a: &GroupElement) -> u32 {
        order_of(&a.exps, &self.orders)
    }

    pub fn char_mul(&self, a: &Character, b: &Character) -> Character {
        Character {
            exps: zip_mod(&a.exps, &b.exps, &self.orders, |x, y| x + y),
        }
    }

    pub fn char_pow(&self, a: &Character, k: i64) -> Character {
        let exps: Vec<i64> = a.exps.iter().map(|&e| e as i64 * k).collect();
        self.character(&exps)
    }

    pub fn char_inverse(&self, a: &Character) -> Character {
        self.char_pow(a, -1)
    }

    pub fn is_trivial(&self, a: &Character) -> bool {
        a.exps.iter().all(|&e| e == 0)
    }

    /// Order of `χ` in `Γ̂`.
    pub fn char_order(&self, a: &Character) -> u32 {
        order_of(&a.exps, &self.orders)
    }

    /// The exponent `k` with `χ(g) = ζ_L^k`, `0 ≤ k < L`.
    pub fn pairing(&self, chi: &Character, g: &GroupElement) -> u32 {
        let l = self.exponent as u64;
        let mut total = 0u64;
        for ((&c, &e), &d) in chi.exps.iter().zip(&g.exps).zip(&self.orders) {
            total = (total + (c as u64 * e as u64 % d as u64) * (l / d as u64)) % l;
        }
        total as u32
    }

    pub fn evaluate(&self, chi: &Character, g: &GroupElement) -> CycNum {
        CycNum::root_of_unity(self.exponent, self.pairing(chi, g) as i64)
    }

    /// Order of the root of unity `χ(g)`.
    pub fn value_order(&self, chi: &Character, g: &GroupElement) -> u32 {
        let k = self.pairing(chi, g);
        self.exponent / k.gcd(&self.exponent)
    }
}

fn zip_mod(a: &[u32], b: &[u32], orders: &[u32], f: impl Fn(u32, u32) -> u32) -> Vec<u32> {
    a.iter()
        .zip(b)
        .zip(orders)
        .map(|((&x, &y), &d)| f(x, y) % d)
        .collect()
}

fn order_of(exps: &[u32], orders: &[u32]) -> u32 {
    exps.iter()
        .zip(orders)
        .fold(1u32, |acc, (&e, &d)| acc.lcm(&(d / e.gcd(&d))))
}

/// Per-root data `(g_α, χ_α, N_α, M_α)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootData {
    pub root: Root,
    pub g: GroupElement,
    pub chi: Character,
    /// Order of `χ_α(g_α)`.
    pub n: u32,
    /// Order of `χ_α` in the character group.
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    pub group: FiniteAbelianGroup,
    pub cartan: CartanMatrix,
    pub g: Vec<GroupElement>,
    pub chi: Vec<Character>,
    /// Keys are 0-based `(i, j)` with `i < j`.
    pub lambda: BTreeMap<(usize, usize), CycNum>,
    /// Keys are 0-based indices into [`CartanDatum::positive_roots`].
    pub mu: BTreeMap<usize, CycNum>,
    /// Display order for scalars, a multiple of the group exponent.
    pub q_order: Option<u32>,
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub kind: DynkinType,
    /// 0-based vertices.
    pub vertices: Vec<usize>,
    /// Orders of `χ_i(g_i)` over the vertices.
    pub orders: Vec<u32>,
    /// The common order `N_J` when constant.
    pub n: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub components: Vec<ComponentReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl CartanDatum {
    pub fn new(
        group: FiniteAbelianGroup,
        cartan: CartanMatrix,
        g: Vec<GroupElement>,
        chi: Vec<Character>,
    ) -> Result<Self, DatumError> {
        let theta = cartan.rank();
        if g.len() != theta || chi.len() != theta {
            return Err(DatumError::Structure(format!(
                "expected {theta} grouplikes and characters, got {} and {}",
                g.len(),
                chi.len()
            )));
        }
        for v in g.iter().map(|x| &x.exps).chain(chi.iter().map(|x| &x.exps)) {
            if v.len() != group.rank() || v.iter().zip(group.orders()).any(|(&e, &d)| e >= d) {
                return Err(DatumError::Structure(format!(
                    "exponent vector {v:?} does not match group orders {:?}",
                    group.orders()
                )));
            }
        }
        Ok(CartanDatum {
            group,
            cartan,
            g,
            chi,
            lambda: BTreeMap::new(),
            mu: BTreeMap::new(),
            q_order: None,
            name: None,
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn exponent(&self) -> u32 {
        self.group.exponent()
    }

    /// `q_ij = χ_j(g_i)`.
    pub fn q(&self, i: usize, j: usize) -> CycNum {
        self.group.evaluate(&self.chi[j], &self.g[i])
    }

    pub fn q_matrix(&self) -> Vec<Vec<CycNum>> {
        let t = self.rank();
        (0..t).map(|i| (0..t).map(|j| self.q(i, j)).collect()).collect()
    }

    /// Exponents `k` with `q_ij = ζ_L^k`.
    pub fn q_exponents(&self) -> Vec<Vec<u32>> {
        let t = self.rank();
        (0..t)
            .map(|i| (0..t).map(|j| self.group.pairing(&self.chi[j], &self.g[i])).collect())
            .collect()
    }

    pub fn positive_roots(&self) -> Result<Vec<Root>, DatumError> {
        Ok(self.cartan.positive_roots()?)
    }

    pub fn root_data(&self, alpha: &Root) -> RootData {
        let mut g = self.group.identity();
        let mut chi = self.group.trivial_character();
        for (i, &n) in alpha.coords.iter().enumerate() {
            g = self.group.mul(&g, &self.group.pow(&self.g[i], n));
            chi = self.group.char_mul(&chi, &self.group.char_pow(&self.chi[i], n));
        }
        let n = self.group.value_order(&chi, &g);
        let m = self.group.char_order(&chi);
        RootData { root: alpha.clone(), g, chi, n, m }
    }

    pub fn all_root_data(&self) -> Result<Vec<RootData>, DatumError> {
        Ok(self.positive_roots()?.iter().map(|r| self.root_data(r)).collect())
    }

    /// Runs every check. Hard violations are returned as errors; the standing
    /// assumptions (odd orders, prime to 3 on `G₂`) only produce warnings.
    pub fn validate(&self) -> Result<ValidationReport, DatumError> {
        let t = self.rank();
        let components = self.cartan.classify()?;
        let mut checks = Vec::new();
        let mut warnings = Vec::new();

        for i in 0..t {
            if self.group.pairing(&self.chi[i], &self.g[i]) == 0 {
                return Err(DatumError::TrivialBraiding { i: i + 1 });
            }
        }
        checks.push(Check {
            name: "nontrivial braiding".into(),
            passed: true,
            detail: "χ_i(g_i) ≠ 1 for all i".into(),
        });

        let l = self.exponent() as i64;
        let qe = self.q_exponents();
        for i in 0..t {
            for j in 0..t {
                let lhs = (qe[i][j] as i64 + qe[j][i] as i64).rem_euclid(l);
                let rhs = (qe[i][i] as i64 * self.cartan.entry(i, j)).rem_euclid(l);
                if lhs != rhs {
                    return Err(DatumError::CartanCondition {
                        i: i + 1,
                        j: j + 1,
                        lhs: CycNum::root_of_unity(l as u32, lhs).to_compact_string(),
                        rhs: CycNum::root_of_unity(l as u32, rhs).to_compact_string(),
                    });
                }
            }
        }
        checks.push(Check {
            name: "Cartan condition".into(),
            passed: true,
            detail: "χ_j(g_i)χ_i(g_j) = χ_i(g_i)^a_ij for all i, j".into(),
        });

        let mut comps = Vec::new();
        for c in &components {
            let orders: Vec<u32> = c
                .vertices
                .iter()
                .map(|&i| self.group.value_order(&self.chi[i], &self.g[i]))
                .collect();
            let constant = orders.windows(2).all(|w| w[0] == w[1]);
            let labels = vertex_labels(&c.vertices);
            if !constant {
                warnings.push(format!(
                    "orders of χ_i(g_i) are not constant on component {} {{{labels}}}: {orders:?}",
                    c.kind
                ));
            }
            if orders.iter().any(|o| o % 2 == 0) {
                warnings.push(format!(
                    "order of χ_i(g_i) is even on component {} {{{labels}}}",
                    c.kind
                ));
            }
            if c.kind == DynkinType::G2 && orders.iter().any(|o| o % 3 == 0) {
                warnings.push(format!(
                    "order of χ_i(g_i) is divisible by 3 on component G2 {{{labels}}}"
                ));
            }
            comps.push(ComponentReport {
                kind: c.kind,
                vertices: c.vertices.clone(),
                orders: orders.clone(),
                n: constant.then(|| orders[0]),
            });
        }
        checks.push(Check {
            name: "component constancy".into(),
            passed: comps.iter().all(|c| c.n.is_some()),
            detail: "order of χ_i(g_i) constant on each connected component".into(),
        });
        checks.push(Check {
            name: "odd orders".into(),
            passed: comps.iter().all(|c| c.orders.iter().all(|o| o % 2 == 1)),
            detail: "order of χ_i(g_i) odd for all i".into(),
        });
        checks.push(Check {
            name: "G2 orders prime to 3".into(),
            passed: comps
                .iter()
                .filter(|c| c.kind == DynkinType::G2)
                .all(|c| c.orders.iter().all(|o| o % 3 != 0)),
            detail: "order of χ_i(g_i) prime to 3 on G2 components".into(),
        });

        for (&(i, j), value) in &self.lambda {
            if i >= j || j >= t {
                return Err(DatumError::Structure(format!(
                    "linking parameter index ({}, {}) must satisfy 1 ≤ i < j ≤ {t}",
                    i + 1,
                    j + 1
                )));
            }
            if value.is_zero() {
                continue;
            }
            if self.cartan.component_of()[i] == self.cartan.component_of()[j] {
                return Err(DatumError::Linking {
                    i: i + 1,
                    j: j + 1,
                    reason: "vertices lie in the same connected component".into(),
                });
            }
            if self.group.is_identity(&self.group.mul(&self.g[i], &self.g[j])) {
                return Err(DatumError::Linking {
                    i: i + 1,
                    j: j + 1,
                    reason: "g_i g_j = 1".into(),
                });
            }
            if !self.group.is_trivial(&self.group.char_mul(&self.chi[i], &self.chi[j])) {
                return Err(DatumError::Linking {
                    i: i + 1,
                    j: j + 1,
                    reason: "χ_i χ_j ≠ ε".into(),
                });
            }
        }
        checks.push(Check {
            name: "linking parameters".into(),
            passed: true,
            detail: format!("{} nonzero λ entries admissible", self.lambda.values().filter(|v| !v.is_zero()).count()),
        });

        if !self.mu.is_empty() {
            let roots = self.positive_roots()?;
            for (&k, value) in &self.mu {
                let Some(root) = roots.get(k) else {
                    return Err(DatumError::Structure(format!(
                        "root vector parameter index {} exceeds the {} positive roots",
                        k + 1,
                        roots.len()
                    )));
                };
                if value.is_zero() {
                    continue;
                }
                let rd = self.root_data(root);
                let label = root.label();
                if self.group.is_identity(&self.group.pow(&rd.g, rd.n as i64)) {
                    return Err(DatumError::RootVector {
                        root: label,
                        reason: "g_α^N_α = 1".into(),
                    });
                }
                if !self.group.is_trivial(&self.group.char_pow(&rd.chi, rd.n as i64)) {
                    return Err(DatumError::RootVector {
                        root: label,
                        reason: "χ_α^N_α ≠ ε".into(),
                    });
                }
            }
        }
        checks.push(Check {
            name: "root vector parameters".into(),
            passed: true,
            detail: format!("{} nonzero μ entries admissible", self.mu.values().filter(|v| !v.is_zero()).count()),
        });

        Ok(ValidationReport { checks, warnings, components: comps })
    }

    pub fn has_linking(&self) -> bool {
        self.lambda.values().any(|v| !v.is_zero())
    }

    pub fn has_root_vector_parameters(&self) -> bool {
        self.mu.values().any(|v| !v.is_zero())
    }

    /// Order used when printing scalars.
    pub fn display_order(&self) -> u32 {
        self.q_order.unwrap_or_else(|| self.exponent())
    }
}

fn vertex_labels(v: &[usize]) -> String {
    v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    name: Option<String>,
    q_order: Option<Spanned<u32>>,
    group: RawGroup,
    cartan: Spanned<Vec<Vec<i64>>>,
    g: Spanned<Vec<Vec<i64>>>,
    chi: Spanned<Vec<Vec<i64>>>,
    #[serde(default)]
    lambda: Vec<Spanned<RawLambda>>,
    #[serde(default)]
    mu: Vec<Spanned<RawMu>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    orders: Spanned<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLambda {
    i: usize,
    j: usize,
    value: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMu {
    root: usize,
    value: Spanned<String>,
}

struct Locator<'a> {
    src: &'a str,
}

impl Locator<'_> {
    fn position(&self, offset: usize) -> (usize, usize) {
        let before = &self.src[..offset.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        (line, column)
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> DatumError {
        let (line, column) = self.position(offset);
        DatumError::Parse { line, column, message: message.into() }
    }

    fn scalar(&self, value: &Spanned<String>) -> Result<CycNum, DatumError> {
        value.get_ref().parse::<CycNum>().map_err(|e| match e {
            // The span starts at the opening quote.
            CycloError::Parse { column, message } => {
                self.error(value.span().start + column, format!("invalid scalar: {message}"))
            }
            other => self.error(value.span().start, other.to_string()),
        })
    }
}

impl CartanDatum {
    /// Parses the plain-text datum format. Indices in the file are 1-based.
    /// Structural problems are reported with line and column; the mathematical
    /// conditions are left to [`CartanDatum::validate`].
    pub fn from_toml_str(src: &str) -> Result<Self, DatumError> {
        let loc = Locator { src };
        let raw: RawDatum = toml::from_str(src).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            loc.error(offset, e.message().trim().to_string())
        })?;

        let group = FiniteAbelianGroup::new(raw.group.orders.get_ref().clone())
            .map_err(|e| loc.error(raw.group.orders.span().start, e.to_string()))?;
        let cartan = CartanMatrix::new(raw.cartan.get_ref().clone())
            .map_err(|e| loc.error(raw.cartan.span().start, e.to_string()))?;
        let theta = cartan.rank();

        let vectors = |field: &Spanned<Vec<Vec<i64>>>, what: &str| -> Result<Vec<Vec<i64>>, DatumError> {
            let v = field.get_ref();
            if v.len() != theta {
                return Err(loc.error(
                    field.span().start,
                    format!("expected {theta} {what} vectors (one per Cartan row), got {}", v.len()),
                ));
            }
            if let Some(bad) = v.iter().find(|x| x.len() != group.rank()) {
                return Err(loc.error(
                    field.span().start,
                    format!(
                        "{what} vector {bad:?} has length {}, group has {} factors",
                        bad.len(),
                        group.rank()
                    ),
                ));
            }
            Ok(v.clone())
        };
        let g: Vec<GroupElement> = vectors(&raw.g, "g")?.iter().map(|e| group.element(e)).collect();
        let chi: Vec<Character> = vectors(&raw.chi, "chi")?.iter().map(|e| group.character(e)).collect();

        let mut datum = CartanDatum::new(group, cartan, g, chi)?;
        datum.name = raw.name;
        if let Some(q) = raw.q_order {
            if *q.get_ref() == 0 || q.get_ref() % datum.exponent() != 0 {
                return Err(loc.error(
                    q.span().start,
                    format!("q_order must be a positive multiple of the group exponent {}", datum.exponent()),
                ));
            }
            datum.q_order = Some(*q.get_ref());
        }
        for entry in &raw.lambda {
            let r = entry.get_ref();
            if r.i == 0 || r.j == 0 || r.i >= r.j || r.j > theta {
                return Err(loc.error(
                    entry.span().start,
                    format!("lambda indices must satisfy 1 ≤ i < j ≤ {theta}, got ({}, {})", r.i, r.j),
                ));
            }
            let value = loc.scalar(&r.value)?;
            if datum.lambda.insert((r.i - 1, r.j - 1), value).is_some() {
                return Err(loc.error(entry.span().start, format!("duplicate lambda entry ({}, {})", r.i, r.j)));
            }
        }
        if !raw.mu.is_empty() {
            let count = datum.positive_roots()?.len();
            for entry in &raw.mu {
                let r = entry.get_ref();
                if r.root == 0 || r.root > count {
                    return Err(loc.error(
                        entry.span().start,
                        format!("mu root index must lie in 1..={count}, got {}", r.root),
                    ));
                }
                let value = loc.scalar(&r.value)?;
                if datum.mu.insert(r.root - 1, value).is_some() {
                    return Err(loc.error(entry.span().start, format!("duplicate mu entry for root {}", r.root)));
                }
            }
        }
        Ok(datum)
    }

    /// Serializes to the datum file format; parses back to an equal datum.
    pub fn to_toml_string(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("name = {name:?}\n"));
        }
        if let Some(q) = self.q_order {
            out.push_str(&format!("q_order = {q}\n"));
        }
        out.push_str(&format!("cartan = {}\n", int_rows(self.cartan.rows())));
        let g: Vec<Vec<i64>> = self.g.iter().map(|x| x.exps.iter().map(|&e| e as i64).collect()).collect();
        let chi: Vec<Vec<i64>> = self.chi.iter().map(|x| x.exps.iter().map(|&e| e as i64).collect()).collect();
        out.push_str(&format!("g = {}\n", int_rows(&g)));
        out.push_str(&format!("chi = {}\n", int_rows(&chi)));
        out.push_str(&format!(
            "\n[group]\norders = [{}]\n",
            self.group.orders().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
        ));
        for (&(i, j), v) in &self.lambda {
            out.push_str(&format!(
                "\n[[lambda]]\ni = {}\nj = {}\nvalue = \"{}\"\n",
                i + 1,
                j + 1,
                v.to_compact_string()
            ));
        }
        for (&k, v) in &self.mu {
            out.push_str(&format!("\n[[mu]]\nroot = {}\nvalue = \"{}\"\n", k + 1, v.to_compact_string()));
        }
        out
    }
}

fn int_rows(rows: &[Vec<i64>]) -> String {
    let inner: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", inner.join(", "))
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_vec(f, &self.exps)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_vec(f, &self.exps)
    }
}

fn write_vec(f: &mut fmt::Formatter<'_>, v: &[u32]) -> fmt::Result {
    write!(f, "(")?;
    for (k, e) in v.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, ")")
}

/// Ready-made data used by the examples, tests and CLI.
pub mod presets {
    use super::*;

    fn build(orders: Vec<u32>, cartan: Vec<Vec<i64>>, g: &[Vec<i64>], chi: &[Vec<i64>]) -> CartanDatum {
        let group = FiniteAbelianGroup::new(orders).expect("valid orders");
        let cartan = CartanMatrix::new(cartan).expect("valid Cartan matrix");
        let g = g.iter().map(|e| group.element(e)).collect();
        let chi = chi.iter().map(|e| group.character(e)).collect();
        CartanDatum::new(group, cartan, g, chi).expect("well-formed datum")
    }

    /// `k[x]/(x²) # kZ/2` with `χ(g) = −1`: the Sweedler algebra.
    pub fn sweedler() -> CartanDatum {
        let mut d = build(vec![2], vec![vec![2]], &[vec![1]], &[vec![1]]);
        d.name = Some("sweedler".into());
        d
    }

    /// Two copies of `A₁` over `Z/ℓ` with `g₁ = g₂ = K`, `χ₁(K) = q²`,
    /// `χ₂ = χ₁⁻¹`, where `q = ζ_ℓ`. With `linked`, `λ₁₂ = (q⁻¹ − q)⁻¹`
    /// gives the small quantum group `u_q(sl₂)`.
    pub fn uq_sl2(ell: u32, linked: bool) -> CartanDatum {
        let e = ell as i64;
        let mut d = build(vec![ell], vec![vec![2, 0], vec![0, 2]], &[vec![1], vec![1]], &[vec![2], vec![e - 2]]);
        if linked {
            d.lambda.insert((0, 1), uq_sl2_lambda(ell));
        }
        d.name = Some(if linked { "uq_sl2" } else { "uq_sl2_gr" }.into());
        d
    }

    /// `(q⁻¹ − q)⁻¹` for `q = ζ_ℓ`.
    pub fn uq_sl2_lambda(ell: u32) -> CycNum {
        let q = CycNum::root_of_unity(ell, 1);
        let qi = CycNum::root_of_unity(ell, -1);
        (qi - q).inverse().expect("q ≠ ±1")
    }

    /// `A₁ × A₁ × A₁` over `(Z/ℓ)³` with `q_ij = χ_j(g_i)` equal to
    /// `[[q, q⁻¹, 1], [q, q⁻², q], [1, q⁻¹, q]]`. Every row multiplies to 1.
    pub fn a1_cubed(ell: u32) -> CartanDatum {
        let e = ell as i64;
        let g = [vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        // χ_j has exponent q-power of q_ij in slot i.
        let chi = [vec![1, 1, 0], vec![e - 1, e - 2, e - 1], vec![0, 1, 1]];
        let mut d = build(vec![ell; 3], CartanMatrix::diagonal(3).rows().to_vec(), &g, &chi);
        d.name = Some("a1cubed".into());
        d
    }

    /// `A₂ × A₁` over `(Z/ℓ)²`: `χ₁, χ₂` as for `u_q(sl₃)⁺`, `g₃ = g₁g₂`,
    /// `χ₃ = χ₁⁻¹χ₂⁻¹`.
    pub fn a2_a1(ell: u32) -> CartanDatum {
        let e = ell as i64;
        let cartan = vec![vec![2, -1, 0], vec![-1, 2, 0], vec![0, 0, 2]];
        let g = [vec![1, 0], vec![0, 1], vec![1, 1]];
        let chi = [vec![2, e - 1], vec![e - 1, 2], vec![e - 1, e - 1]];
        let mut d = build(vec![ell, ell], cartan, &g, &chi);
        d.name = Some("a2a1".into());
        d
    }

    /// `A₂` alone over `(Z/ℓ)²` as for `u_q(sl₃)⁺`.
    pub fn a2(ell: u32) -> CartanDatum {
        let e = ell as i64;
        let cartan = vec![vec![2, -1], vec![-1, 2]];
        let mut d = build(vec![ell, ell], cartan, &[vec![1, 0], vec![0, 1]], &[vec![2, e - 1], vec![e - 1, 2]]);
        d.name = Some("a2".into());
        d
    }
}
