//! Quivers, extended exchange matrices, coefficient strings and seeds.
//!
//! [`build_qn`] assembles the quiver `Q_n` on the family `F_n`, [`build_initial_seed`]
//! adds the exchange matrix and the strings, and [`diagonal_reduce`] /
//! [`build_dual_seed`] derive the seeds on `GL_n` and on `GL_n*`.

mod btilde;
mod export;
mod strings;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Jet, Mat, Scalar};
use crate::family::{enumerate_dual_family, enumerate_family, eval_family, FamilyFunction, Kind};
use crate::poisson::{BracketKind, Evaluator};

pub use btilde::ExtendedExchangeMatrix;
pub use export::{to_dot, to_json, QuiverDoc};
pub use strings::{
    build_strings, eval_monomial, stable_monomials, verify_string_roots, CoefficientString,
    Monomial, StringRootCheck,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Mutable,
    Stable,
    Isolated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub label: FamilyFunction,
    pub kind: VertexKind,
    /// Order `d` of the vertex; larger than one only at the special vertex.
    pub order: u32,
}

impl Vertex {
    pub fn name(&self) -> String {
        self.label.name()
    }

    pub fn is_special(&self) -> bool {
        self.order > 1
    }
}

/// A quiver with arrow multiplicities. Arrows are keyed by vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub n: usize,
    pub vertices: Vec<Vertex>,
    arrows: BTreeMap<(usize, usize), u32>,
}

impl Quiver {
    pub fn new(n: usize, vertices: Vec<Vertex>) -> Self {
        Self {
            n,
            vertices,
            arrows: BTreeMap::new(),
        }
    }

    pub fn index_of(&self, label: &FamilyFunction) -> Option<usize> {
        self.vertices.iter().position(|v| &v.label == label)
    }

    /// Looks a vertex up by name (`phi_1_1`, `phi11`, `detU`, ...).
    pub fn find(&self, name: &str) -> Result<usize> {
        let label = FamilyFunction::parse(self.n, name)?;
        self.index_of(&label)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn add_arrow(&mut self, from: usize, to: usize, multiplicity: u32) -> Result<()> {
        if from == to {
            return Err(Error::Structural(format!(
                "loop at {}",
                self.vertices[from].name()
            )));
        }
        for v in [from, to] {
            if self.vertices[v].kind == VertexKind::Isolated {
                return Err(Error::Structural(format!(
                    "arrow at isolated vertex {}",
                    self.vertices[v].name()
                )));
            }
        }
        *self.arrows.entry((from, to)).or_insert(0) += multiplicity;
        Ok(())
    }

    pub fn multiplicity(&self, from: usize, to: usize) -> u32 {
        self.arrows.get(&(from, to)).copied().unwrap_or(0)
    }

    /// `(from, to, multiplicity)` in index order.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.arrows.iter().map(|(&(a, b), &m)| (a, b, m))
    }

    /// Arrows by vertex name, sorted.
    pub fn named_arrows(&self) -> Vec<(String, String, u32)> {
        let mut out: Vec<_> = self
            .arrows()
            .map(|(a, b, m)| (self.vertices[a].name(), self.vertices[b].name(), m))
            .collect();
        out.sort();
        out
    }

    /// Total number of arrows counted with multiplicity.
    pub fn arrow_count(&self) -> u32 {
        self.arrows.values().sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn count_kind(&self, kind: VertexKind) -> usize {
        self.vertices.iter().filter(|v| v.kind == kind).count()
    }

    pub fn non_isolated(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| self.vertices[i].kind != VertexKind::Isolated)
            .collect()
    }

    pub fn mutable(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| self.vertices[i].kind == VertexKind::Mutable)
            .collect()
    }

    /// Pairs of vertices joined by arrows in both directions.
    pub fn two_cycles(&self) -> Vec<(usize, usize)> {
        self.arrows
            .keys()
            .filter(|&&(a, b)| a < b && self.arrows.contains_key(&(b, a)))
            .copied()
            .collect()
    }

    /// Removes opposite arrows pairwise.
    fn cancel_two_cycles(&mut self) {
        for (a, b) in self.two_cycles() {
            let ab = self.multiplicity(a, b);
            let ba = self.multiplicity(b, a);
            let k = ab.min(ba);
            for (key, m) in [((a, b), ab - k), ((b, a), ba - k)] {
                if m == 0 {
                    self.arrows.remove(&key);
                } else {
                    self.arrows.insert(key, m);
                }
            }
        }
    }
}

fn vertex_kind(label: &FamilyFunction) -> VertexKind {
    match label.kind {
        Kind::C { .. } | Kind::CU { .. } => VertexKind::Isolated,
        Kind::G { j: 1, .. } | Kind::H { i: 1, .. } => VertexKind::Stable,
        Kind::HU { i, j } if i == j => VertexKind::Stable,
        Kind::DetU => VertexKind::Stable,
        _ => VertexKind::Mutable,
    }
}

fn vertex_order(label: &FamilyFunction) -> u32 {
    match label.kind {
        Kind::Phi { k: 1, l: 1 } | Kind::Psi { k: 1, l: 1 } => label.n as u32,
        _ => 1,
    }
}

/// Index-level labels before aliasing; the paths below mention
/// `g_{i,i+1}` and `f_{k,n-k}`, which are not family members themselves.
#[derive(Clone, Copy)]
enum Raw {
    G(usize, usize),
    H(usize, usize),
    F(usize, usize),
    P(usize, usize),
}

/// Applies `g_{i,i+1} ≡ f_{n-i,1}` and `f_{k,n-k} ≡ φ_{k,n-k}`.
fn canon(n: usize, raw: Raw) -> Result<FamilyFunction> {
    match raw {
        Raw::G(i, j) if j == i + 1 => canon(n, Raw::F(n - i, 1)),
        Raw::F(k, l) if k + l == n => FamilyFunction::phi(n, k, l),
        Raw::G(i, j) => FamilyFunction::g(n, i, j),
        Raw::H(i, j) => FamilyFunction::h(n, i, j),
        Raw::F(k, l) => FamilyFunction::f(n, k, l),
        Raw::P(k, l) => FamilyFunction::phi(n, k, l),
    }
}

fn add_path(q: &mut Quiver, path: &[Raw]) -> Result<()> {
    let n = q.n;
    for w in path.windows(2) {
        let a = canon(n, w[0])?;
        let b = canon(n, w[1])?;
        let ia = q.index_of(&a).ok_or_else(|| Error::UnknownName(a.name()))?;
        let ib = q.index_of(&b).ok_or_else(|| Error::UnknownName(b.name()))?;
        q.add_arrow(ia, ib, 1)?;
    }
    Ok(())
}

fn family_quiver(n: usize, labels: Vec<FamilyFunction>) -> Quiver {
    let vertices = labels
        .into_iter()
        .map(|label| Vertex {
            kind: vertex_kind(&label),
            order: vertex_order(&label),
            label,
        })
        .collect();
    Quiver::new(n, vertices)
}

/// The quiver `Q_n`.
pub fn build_qn(n: usize) -> Result<Quiver> {
    let mut q = family_quiver(n, enumerate_family(n)?);
    use Raw::*;

    for i in 1..n {
        for j in i + 1..n {
            add_path(&mut q, &[H(i, j), H(i + 1, j + 1), H(i + 1, j), H(i, j)])?;
        }
    }
    for i in 1..n {
        for j in 1..=i {
            add_path(&mut q, &[G(i, j), G(i + 1, j + 1), G(i, j + 1), G(i, j)])?;
        }
    }
    for k in 2..n {
        for l in 1..n {
            if k + l <= n - 1 {
                add_path(&mut q, &[F(k, l), F(k - 1, l), F(k - 1, l + 1), F(k, l)])?;
                add_path(&mut q, &[P(k, l), P(k - 1, l + 1), P(k, l + 1), P(k, l)])?;
            }
        }
    }
    if n > 2 {
        let mut zig = vec![G(1, 1), P(1, 1)];
        for l in 2..n {
            zig.push(P(l, 1));
            zig.push(P(1, l));
        }
        add_path(&mut q, &zig)?;
        let mut top: Vec<Raw> = (1..n).rev().map(|l| P(1, l)).collect();
        top.push(H(1, 1));
        add_path(&mut q, &top)?;
    }
    let mut side = Vec::new();
    for k in (1..n).rev() {
        side.push(P(k, n - k));
        if k > 1 {
            side.push(F(k - 1, n - k));
        }
    }
    add_path(&mut q, &side)?;

    let mut diag = vec![H(1, 1)];
    for l in (1..n).rev() {
        diag.push(F(1, l));
        diag.push(H(n - l + 1, n - l + 1));
    }
    add_path(&mut q, &diag)?;

    let column: Vec<Raw> = (1..=n).rev().map(|i| H(i, n)).collect();
    add_path(&mut q, &column)?;
    let mut row = vec![H(n, n)];
    row.extend((1..=n).rev().map(|j| G(n, j)));
    add_path(&mut q, &row)?;

    if !q.two_cycles().is_empty() {
        return Err(Error::Structural("Q_n has a 2-cycle".into()));
    }
    Ok(q)
}

/// Which space a seed lives on; selects the bracket used to check it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSpace {
    Double,
    Diagonal,
    Dual,
}

impl SeedSpace {
    pub fn bracket(&self) -> BracketKind {
        match self {
            SeedSpace::Double => BracketKind::Double,
            SeedSpace::Diagonal => BracketKind::Standard,
            SeedSpace::Dual => BracketKind::Dual,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Seed {
    pub n: usize,
    pub space: SeedSpace,
    /// Extended cluster in vertex order, Casimirs included.
    pub cluster: Vec<FamilyFunction>,
    pub quiver: Quiver,
    pub btilde: ExtendedExchangeMatrix,
    /// One string per mutable vertex, in row order of `btilde`.
    pub strings: Vec<CoefficientString>,
}

impl Seed {
    fn assemble(space: SeedSpace, quiver: Quiver, strings: Option<Vec<CoefficientString>>) -> Result<Self> {
        let btilde = ExtendedExchangeMatrix::from_quiver(&quiver)?;
        let strings = match strings {
            Some(s) => s,
            None => btilde.rows.iter().map(|&v| CoefficientString::trivial(v)).collect(),
        };
        Ok(Self {
            n: quiver.n,
            space,
            cluster: quiver.vertices.iter().map(|v| v.label).collect(),
            quiver,
            btilde,
            strings,
        })
    }

    pub fn string_at(&self, vertex: usize) -> Option<&CoefficientString> {
        self.strings.iter().find(|s| s.vertex == vertex)
    }

    pub fn labels(&self) -> Vec<String> {
        self.cluster.iter().map(FamilyFunction::name).collect()
    }
}

impl Evaluator for Seed {
    fn labels(&self) -> Vec<String> {
        Seed::labels(self)
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        eval_family(&self.cluster, x, y)
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        eval_family(&self.cluster, x, y)
    }
}

/// The seed `(F_n, Q_n, P_n)` on the double.
pub fn build_initial_seed(n: usize) -> Result<Seed> {
    let quiver = build_qn(n)?;
    let btilde = ExtendedExchangeMatrix::from_quiver(&quiver)?;
    let strings = build_strings(&quiver, &btilde)?;
    Seed::assemble(SeedSpace::Double, quiver, Some(strings))
}

/// Restriction to the diagonal `X = Y`: `f` and `φ` vertices are erased and
/// `h_ii` is identified with `g_ii`.
pub fn diagonal_reduce(seed: &Seed) -> Result<Seed> {
    if seed.space != SeedSpace::Double {
        return Err(Error::Structural("diagonal reduction needs a seed on the double".into()));
    }
    let n = seed.n;
    let merged = |label: FamilyFunction| -> Option<FamilyFunction> {
        match label.kind {
            Kind::G { .. } => Some(label),
            Kind::H { i, j } if i == j => FamilyFunction::g(n, i, i).ok(),
            Kind::H { .. } => Some(label),
            _ => None,
        }
    };
    let labels: Vec<FamilyFunction> = seed
        .cluster
        .iter()
        .filter(|l| matches!(l.kind, Kind::G { .. }) || matches!(l.kind, Kind::H { i, j } if i < j))
        .copied()
        .collect();
    let mut q = family_quiver(n, labels);
    for (a, b, m) in seed.quiver.arrows() {
        let la = merged(seed.quiver.vertices[a].label);
        let lb = merged(seed.quiver.vertices[b].label);
        if let (Some(la), Some(lb)) = (la, lb) {
            if la != lb {
                let ia = q.index_of(&la).expect("merged label present");
                let ib = q.index_of(&lb).expect("merged label present");
                q.add_arrow(ia, ib, m)?;
            }
        }
    }
    q.cancel_two_cycles();
    Seed::assemble(SeedSpace::Diagonal, q, None)
}

/// Image of a vertex of `Q_n` in the dual quiver, if it belongs to the
/// subquiver on `φ`, `f` and `h_ii`.
pub fn dual_label(label: &FamilyFunction) -> Option<FamilyFunction> {
    let n = label.n;
    let kind = match label.kind {
        Kind::Phi { k, l } => Kind::Psi { k, l },
        Kind::F { k, l } => Kind::HU {
            i: n - k - l + 1,
            j: n - l + 1,
        },
        Kind::H { i: 1, j: 1 } => Kind::DetU,
        Kind::H { i, j } if i == j => Kind::HU { i, j },
        _ => return None,
    };
    FamilyFunction::new(n, kind).ok()
}

/// The seed on `GL_n*`: the subquiver of `Q_n` on `φ`, `f`, `h_ii`, relabeled
/// to functions of `U`, with `h_ii(U)` and `det U` stable and `c_r(1,U)` isolated.
pub fn build_dual_seed(n: usize) -> Result<Seed> {
    let qn = build_qn(n)?;
    let mut q = family_quiver(n, enumerate_dual_family(n)?);
    for (a, b, m) in qn.arrows() {
        if let (Some(la), Some(lb)) = (
            dual_label(&qn.vertices[a].label),
            dual_label(&qn.vertices[b].label),
        ) {
            let ia = q.index_of(&la).ok_or_else(|| Error::UnknownName(la.name()))?;
            let ib = q.index_of(&lb).ok_or_else(|| Error::UnknownName(lb.name()))?;
            q.add_arrow(ia, ib, m)?;
        }
    }
    let btilde = ExtendedExchangeMatrix::from_quiver(&q)?;
    let strings = strings::dual_strings(&q, &btilde)?;
    Seed::assemble(SeedSpace::Dual, q, Some(strings))
}
