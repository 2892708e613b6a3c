//! Finite-type Cartan matrices, the Weyl group action on the root lattice,
//! a reduced word for the longest element and the induced convex ordering
//! of the positive roots.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("Cartan matrix must be square and non-empty")]
    NotSquare,
    #[error("Cartan matrix entry a[{0}][{0}] must equal 2")]
    Diagonal(usize),
    #[error("Cartan matrix entries a[{i}][{j}] = {aij}, a[{j}][{i}] = {aji} are not admissible")]
    OffDiagonal { i: usize, j: usize, aij: i64, aji: i64 },
    #[error("component on vertices {vertices:?} is not of finite type")]
    NotFiniteType { vertices: Vec<usize> },
}

/// Dynkin type of a connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynkinType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::B(n) => write!(f, "B{n}"),
            DynkinType::C(n) => write!(f, "C{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
            DynkinType::F4 => write!(f, "F4"),
            DynkinType::G2 => write!(f, "G2"),
        }
    }
}

/// A connected component of the Dynkin diagram; vertices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: DynkinType,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    /// Checks the entry-level axioms (`a_ii = 2`, `a_ij ≤ 0`, `a_ij = 0 ⇔ a_ji = 0`).
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, RootError> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(RootError::NotSquare);
        }
        for i in 0..n {
            if entries[i][i] != 2 {
                return Err(RootError::Diagonal(i));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (aij, aji) = (entries[i][j], entries[j][i]);
                if aij > 0 || ((aij == 0) != (aji == 0)) {
                    return Err(RootError::OffDiagonal { i, j, aij, aji });
                }
            }
        }
        Ok(CartanMatrix { entries })
    }

    /// `θ` copies of `A₁`.
    pub fn diagonal(rank: usize) -> Self {
        let entries = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { 2 } else { 0 }).collect())
            .collect();
        CartanMatrix { entries }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Connected components in increasing order of their smallest vertex.
    fn raw_components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                for w in 0..n {
                    if !seen[w] && self.entries[v][w] != 0 {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Component decomposition with Dynkin labels.
    pub fn classify(&self) -> Result<Vec<Component>, RootError> {
        self.raw_components()
            .into_iter()
            .map(|vertices| {
                let kind = self
                    .component_type(&vertices)
                    .ok_or_else(|| RootError::NotFiniteType {
                        vertices: vertices.clone(),
                    })?;
                Ok(Component { kind, vertices })
            })
            .collect()
    }

    /// Component index of each vertex.
    pub fn component_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.rank()];
        for (c, vs) in self.raw_components().iter().enumerate() {
            for &v in vs {
                out[v] = c;
            }
        }
        out
    }

    fn component_type(&self, vs: &[usize]) -> Option<DynkinType> {
        let n = vs.len();
        let a = |x: usize, y: usize| self.entries[vs[x]][vs[y]];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut edges = 0;
        let mut multi = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                if a(x, y) != 0 {
                    let m = a(x, y) * a(y, x);
                    let ok = match m {
                        1 => a(x, y) == -1,
                        2 => (a(x, y), a(y, x)) == (-1, -2) || (a(x, y), a(y, x)) == (-2, -1),
                        3 => (a(x, y), a(y, x)) == (-1, -3) || (a(x, y), a(y, x)) == (-3, -1),
                        _ => false,
                    };
                    if !ok {
                        return None;
                    }
                    adj[x].push(y);
                    adj[y].push(x);
                    edges += 1;
                    if m > 1 {
                        multi.push((x, y, m));
                    }
                }
            }
        }
        // Connected with n-1 edges: a tree.
        if edges + 1 != n {
            return None;
        }
        let degrees: Vec<usize> = adj.iter().map(|v| v.len()).collect();
        let is_path = degrees.iter().all(|&d| d <= 2);
        match multi.as_slice() {
            [] => {
                if is_path {
                    return Some(DynkinType::A(n));
                }
                let branch: Vec<usize> = (0..n).filter(|&v| degrees[v] == 3).collect();
                if branch.len() != 1 || degrees.iter().any(|&d| d > 3) {
                    return None;
                }
                let b = branch[0];
                let mut arms: Vec<usize> = adj[b]
                    .iter()
                    .map(|&start| {
                        let (mut prev, mut cur, mut len) = (b, start, 1);
                        loop {
                            let next: Vec<usize> =
                                adj[cur].iter().copied().filter(|&w| w != prev).collect();
                            if next.is_empty() {
                                return len;
                            }
                            prev = cur;
                            cur = next[0];
                            len += 1;
                        }
                    })
                    .collect();
                arms.sort_unstable();
                match (arms[0], arms[1], arms[2]) {
                    (1, 1, _) => Some(DynkinType::D(n)),
                    (1, 2, 2) => Some(DynkinType::E(6)),
                    (1, 2, 3) => Some(DynkinType::E(7)),
                    (1, 2, 4) => Some(DynkinType::E(8)),
                    _ => None,
                }
            }
            [(x, y, m)] => {
                if !is_path {
                    return None;
                }
                let (x, y) = (*x, *y);
                if *m == 3 {
                    return (n == 2).then_some(DynkinType::G2);
                }
                if n == 2 {
                    return Some(DynkinType::B(2));
                }
                let leaf = |v: usize| degrees[v] == 1;
                if leaf(x) || leaf(y) {
                    let (end, inner) = if leaf(x) { (x, y) } else { (y, x) };
                    // The end vertex is short in B_n: |a(inner, end)| < |a(end, inner)|.
                    if a(end, inner) == -2 {
                        Some(DynkinType::B(n))
                    } else {
                        Some(DynkinType::C(n))
                    }
                } else if n == 4 {
                    Some(DynkinType::F4)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// `s_i(β) = β − (Σ_j a_ij β_j) α_i`.
    pub fn reflect(&self, i: usize, root: &Root) -> Root {
        let pairing: i64 = (0..self.rank())
            .map(|j| self.entries[i][j] * root.coords[j])
            .sum();
        let mut coords = root.coords.clone();
        coords[i] -= pairing;
        Root { coords }
    }

    /// Reduced word for `w₀` (0-based reflection indices), built greedily per
    /// component: starting from `ρ`, always reflect in the lowest-index simple
    /// root on which the current weight is positive.
    pub fn longest_word(&self) -> Result<Vec<usize>, RootError> {
        let comps = self.classify()?;
        let mut word = Vec::new();
        for comp in comps {
            // Weight coordinates ⟨v, α_j^∨⟩ on the component.
            let mut v: Vec<i64> = vec![0; self.rank()];
            for &j in &comp.vertices {
                v[j] = 1;
            }
            while let Some(&i) = comp.vertices.iter().find(|&&i| v[i] > 0) {
                let ci = v[i];
                for &j in &comp.vertices {
                    v[j] -= ci * self.entries[j][i];
                }
                word.push(i);
            }
        }
        Ok(word)
    }

    /// `β_j = s_{i_1}⋯s_{i_{j-1}}(α_{i_j})` for the word from [`Self::longest_word`].
    pub fn positive_roots(&self) -> Result<Vec<Root>, RootError> {
        let word = self.longest_word()?;
        Ok(self.roots_from_word(&word))
    }

    pub fn roots_from_word(&self, word: &[usize]) -> Vec<Root> {
        (0..word.len())
            .map(|j| {
                let mut r = Root::simple(self.rank(), word[j]);
                for &i in word[..j].iter().rev() {
                    r = self.reflect(i, &r);
                }
                r
            })
            .collect()
    }

    /// The set of positive roots as the reflection closure of the simple roots.
    pub fn root_closure(&self) -> BTreeSet<Vec<i64>> {
        let n = self.rank();
        let mut all: BTreeSet<Vec<i64>> = (0..n).map(|i| Root::simple(n, i).coords).collect();
        let mut frontier: Vec<Vec<i64>> = all.iter().cloned().collect();
        while let Some(r) = frontier.pop() {
            for i in 0..n {
                let s = self.reflect(i, &Root { coords: r.clone() }).coords;
                if all.insert(s.clone()) {
                    frontier.push(s);
                }
            }
        }
        all.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect()
    }
}

/// An element of the root lattice in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub coords: Vec<i64>,
}

impl Root {
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        Root { coords }
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_simple(&self) -> bool {
        self.height() == 1 && self.coords.iter().all(|&c| c == 0 || c == 1)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.coords[i] != 0).collect()
    }

    /// Short label from the support with multiplicity, 1-based: `α₁+α₂ → "12"`,
    /// `α₁+2α₂ → "122"`.
    pub fn label(&self) -> String {
        let wide = self.coords.len() >= 10;
        let mut parts = Vec::new();
        for (i, &c) in self.coords.iter().enumerate() {
            for _ in 0..c.max(0) {
                parts.push((i + 1).to_string());
            }
        }
        parts.join(if wide { "," } else { "" })
    }
}

pub fn height(r: &Root) -> i64 {
    r.height()
}
