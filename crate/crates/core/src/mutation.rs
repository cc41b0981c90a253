//! Generalized mutations and exchange relations.
//!
//! A [`MutationState`] keeps the current exchange matrix and strings plus the
//! list of exchange rules applied so far. Mutated cluster variables are not
//! stored symbolically: evaluating the state at a point evaluates the initial
//! family and replays the exchange relations
//!
//! ```text
//! x_k x'_k = Σ_{r=0}^{d_k} p̂_{kr} u_{k;>}^r u_{k;<}^{d_k-r}
//! ```
//!
//! in order. Regularity of `x'_k` is tested by [`check_divisibility`].

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::poly::{div_rem, interpolate};
use crate::exact::{int, Entry, Jet, Mat, Scalar};
use crate::family::{eval_family, sample_double_point, DoublePoint, FamilyFunction};
use crate::poisson::{Evaluator, MAX_RESAMPLES};
use crate::seedcore::{
    stable_monomials, CoefficientString, ExtendedExchangeMatrix, Monomial, Quiver, Seed,
};

pub const DEFAULT_MAX_DEPTH: usize = 8;

/// Matrix mutation in direction `vertex`:
/// `b'_ij = -b_ij` if `i = k` or `j = k`, else
/// `b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2`.
pub fn mutate_matrix(b: &ExtendedExchangeMatrix, vertex: usize) -> Result<ExtendedExchangeMatrix> {
    let k = b
        .row_of_vertex(vertex)
        .ok_or_else(|| Error::NotMutable(format!("vertex {vertex}")))?;
    let ck = b.col_of_row(k);
    let mut out = b.clone();
    for i in 0..b.rows.len() {
        for j in 0..b.cols.len() {
            out.entries[i][j] = if i == k || j == ck {
                -b.entries[i][j]
            } else {
                let bik = b.entries[i][ck];
                let bkj = b.entries[k][j];
                b.entries[i][j] + (bik.abs() * bkj + bik * bkj.abs()) / 2
            };
        }
    }
    Ok(out)
}

/// Coefficient mutation: the string at `vertex` is reversed, others are kept.
pub fn mutate_coefficients(strings: &[CoefficientString], vertex: usize) -> Vec<CoefficientString> {
    strings
        .iter()
        .map(|s| if s.vertex == vertex { s.reversed() } else { s.clone() })
        .collect()
}

/// One generalized exchange relation, with all exponents resolved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeRule {
    pub vertex: usize,
    pub d: u32,
    /// Cluster τ-monomials; exponents `|b_kj| / d_k` on mutable columns.
    pub u_gt: Monomial,
    pub u_lt: Monomial,
    /// `p̂_0, …, p̂_d` as monomials in stable variables and Casimirs.
    pub hats: Vec<Monomial>,
}

impl ExchangeRule {
    pub fn new(
        q: &Quiver,
        b: &ExtendedExchangeMatrix,
        strings: &[CoefficientString],
        vertex: usize,
    ) -> Result<Self> {
        let name = || q.vertices[vertex].name();
        let k = b
            .row_of_vertex(vertex)
            .ok_or_else(|| Error::NotMutable(name()))?;
        let d = b.d[k];
        let mut u_gt = Monomial::new();
        let mut u_lt = Monomial::new();
        for c in 0..b.cols.len() {
            if !b.is_mutable_col(c) {
                continue;
            }
            let e = b.get(k, c);
            if e % d as i64 != 0 {
                return Err(Error::NonPolynomialString {
                    vertex: name(),
                    detail: format!("entry {e} not divisible by d = {d}"),
                });
            }
            let e = e / d as i64;
            if e > 0 {
                u_gt.insert(b.cols[c], e);
            } else if e < 0 {
                u_lt.insert(b.cols[c], -e);
            }
        }
        let string = strings
            .iter()
            .find(|s| s.vertex == vertex)
            .ok_or_else(|| Error::Structural(format!("no string at {}", name())))?;
        let (gt, lt) = stable_monomials(b, k);
        let hats = string
            .hats(&gt, &lt)
            .map_err(|detail| Error::NonPolynomialString {
                vertex: name(),
                detail,
            })?;
        Ok(Self {
            vertex,
            d,
            u_gt,
            u_lt,
            hats,
        })
    }

    /// Right-hand side `Σ_r p̂_r u_>^r u_<^{d-r}` on the given vertex values.
    pub fn sum<T: Entry>(&self, values: &[T]) -> T {
        let pos = monomial_value(&self.u_gt, values);
        let neg = monomial_value(&self.u_lt, values);
        let d = self.d;
        let mut acc = T::zero();
        for (r, hat) in self.hats.iter().enumerate() {
            let r = r as u32;
            acc = acc + monomial_value(hat, values) * pos.pow(r) * neg.pow(d - r);
        }
        acc
    }

    /// Total degree of the right-hand side given vertex degrees.
    pub fn degree(&self, degrees: &[usize]) -> usize {
        let deg = |m: &Monomial| -> usize { m.iter().map(|(&v, &e)| degrees[v] * e as usize).sum() };
        let (a, b) = (deg(&self.u_gt), deg(&self.u_lt));
        self.hats
            .iter()
            .enumerate()
            .map(|(r, h)| deg(h) + r * a + (self.d as usize - r) * b)
            .max()
            .unwrap_or(0)
    }
}

/// Monomials in rules have nonnegative exponents.
fn monomial_value<T: Entry>(m: &Monomial, values: &[T]) -> T {
    m.iter()
        .fold(T::one(), |acc, (&v, &e)| acc * values[v].pow(e as u32))
}

/// A seed together with the exchange relations applied to reach the current
/// cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct MutationState {
    pub seed: Seed,
    pub btilde: ExtendedExchangeMatrix,
    pub strings: Vec<CoefficientString>,
    pub history: Vec<ExchangeRule>,
    /// Vertices where `d_k` stopped dividing the row gcd after a mutation.
    pub flags: Vec<String>,
    pub max_depth: usize,
}

impl MutationState {
    pub fn new(seed: Seed) -> Self {
        Self {
            btilde: seed.btilde.clone(),
            strings: seed.strings.clone(),
            seed,
            history: Vec::new(),
            flags: Vec::new(),
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn n(&self) -> usize {
        self.seed.n
    }

    pub fn depth(&self) -> usize {
        self.history.len()
    }

    pub fn find(&self, name: &str) -> Result<usize> {
        self.seed.quiver.find(name)
    }

    /// The exchange relation at `vertex` in the current seed.
    pub fn rule(&self, vertex: usize) -> Result<ExchangeRule> {
        ExchangeRule::new(&self.seed.quiver, &self.btilde, &self.strings, vertex)
    }

    /// Adjacent state in direction `vertex`.
    pub fn mutate(&self, vertex: usize) -> Result<MutationState> {
        if self.history.len() >= self.max_depth {
            return Err(Error::DepthExceeded(self.max_depth));
        }
        let rule = self.rule(vertex)?;
        let btilde = mutate_matrix(&self.btilde, vertex)?;
        let strings = mutate_coefficients(&self.strings, vertex);
        let mut flags = self.flags.clone();
        for r in btilde.degree_violations() {
            let name = self.seed.quiver.vertices[btilde.rows[r]].name();
            if !flags.contains(&name) {
                flags.push(name);
            }
        }
        let mut history = self.history.clone();
        history.push(rule);
        Ok(MutationState {
            seed: self.seed.clone(),
            btilde,
            strings,
            history,
            flags,
            max_depth: self.max_depth,
        })
    }

    pub fn mutate_named(&self, name: &str) -> Result<MutationState> {
        self.mutate(self.find(name)?)
    }

    /// Quiver encoded by the current exchange matrix.
    pub fn quiver(&self) -> Result<Quiver> {
        self.btilde.to_quiver(&self.seed.quiver)
    }

    /// Vertex names with one prime per mutation applied at the vertex.
    pub fn labels(&self) -> Vec<String> {
        self.seed
            .quiver
            .vertices
            .iter()
            .enumerate()
            .map(|(v, vx)| {
                let primes = self.history.iter().filter(|r| r.vertex == v).count();
                format!("{}{}", vx.name(), "'".repeat(primes))
            })
            .collect()
    }

    /// Values of the current extended cluster at `(X, Y)`.
    pub fn values<T: Entry>(&self, x: &Mat<T>, y: &Mat<T>) -> Result<Vec<T>> {
        let mut values = eval_family(&self.seed.cluster, x, y)?;
        for rule in &self.history {
            let s = rule.sum(&values);
            let xk = &values[rule.vertex];
            values[rule.vertex] = s.checked_div(xk).ok_or_else(|| Error::Vanishing {
                label: self.seed.quiver.vertices[rule.vertex].name(),
                point: 0,
            })?;
        }
        Ok(values)
    }

    /// Total degrees of the current cluster variables, assuming every
    /// mutated variable is a polynomial (`deg x'_k = deg(sum) - deg x_k`).
    pub fn degrees(&self) -> Option<Vec<usize>> {
        let mut deg: Vec<usize> = self
            .seed
            .cluster
            .iter()
            .map(FamilyFunction::degree)
            .collect::<Option<_>>()?;
        for rule in &self.history {
            let total = rule.degree(&deg);
            deg[rule.vertex] = total.checked_sub(deg[rule.vertex])?;
        }
        Some(deg)
    }

    /// `x'_k(p)` obtained from the current values by the exchange relation at `k`.
    pub fn exchange_value(&self, vertex: usize, p: &DoublePoint) -> Result<Scalar> {
        let rule = self.rule(vertex)?;
        let values = self.values(&p.x, &p.y)?;
        if values[vertex].is_zero() {
            return Err(Error::Vanishing {
                label: self.seed.quiver.vertices[vertex].name(),
                point: 0,
            });
        }
        Ok(rule.sum(&values) / &values[vertex])
    }

    /// Right-hand side of the exchange relation at `vertex`, as an evaluator.
    pub fn numerator(&self, vertex: usize) -> Result<ExchangeNumerator<'_>> {
        Ok(ExchangeNumerator {
            state: self,
            rule: self.rule(vertex)?,
        })
    }

    /// The current cluster variable at `vertex`, as an evaluator.
    pub fn variable(&self, vertex: usize) -> ClusterVariable<'_> {
        ClusterVariable {
            state: self,
            vertex,
        }
    }
}

/// Adjacent state in direction `vertex`.
pub fn mutate_seed(state: &MutationState, vertex: usize) -> Result<MutationState> {
    state.mutate(vertex)
}

/// `x'_k(p)` for the current cluster of `state`.
pub fn exchange_value(state: &MutationState, vertex: usize, p: &DoublePoint) -> Result<Scalar> {
    state.exchange_value(vertex, p)
}

impl Evaluator for MutationState {
    fn labels(&self) -> Vec<String> {
        MutationState::labels(self)
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        self.values(x, y)
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        self.values(x, y)
    }
}

pub struct ExchangeNumerator<'a> {
    state: &'a MutationState,
    rule: ExchangeRule,
}

impl ExchangeNumerator<'_> {
    pub fn degree(&self) -> Option<usize> {
        Some(self.rule.degree(&self.state.degrees()?))
    }
}

impl Evaluator for ExchangeNumerator<'_> {
    fn labels(&self) -> Vec<String> {
        vec![format!("exchange({})", self.state.labels()[self.rule.vertex])]
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        Ok(vec![self.rule.sum(&self.state.values(x, y)?)])
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        Ok(vec![self.rule.sum(&self.state.values(x, y)?)])
    }
}

pub struct ClusterVariable<'a> {
    state: &'a MutationState,
    vertex: usize,
}

impl ClusterVariable<'_> {
    pub fn degree(&self) -> Option<usize> {
        Some(self.state.degrees()?[self.vertex])
    }
}

impl Evaluator for ClusterVariable<'_> {
    fn labels(&self) -> Vec<String> {
        vec![self.state.labels()[self.vertex].clone()]
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        Ok(vec![self.state.values(x, y)?.swap_remove(self.vertex)])
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        Ok(vec![self.state.values(x, y)?.swap_remove(self.vertex)])
    }
}

/// A matrix entry of `X` or `Y` (zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coord {
    X(usize, usize),
    Y(usize, usize),
}

pub fn all_coords(n: usize) -> Vec<Coord> {
    let mut out = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(Coord::X(i, j));
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.push(Coord::Y(i, j));
        }
    }
    out
}

/// Definitive evidence that `D ∤ N`: on the line `p + t·v` the restriction
/// `N(t)` leaves a nonzero remainder modulo `D(t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub x: Vec<Vec<String>>,
    pub y: Vec<Vec<String>>,
    pub direction: Vec<(Coord, i64)>,
    pub remainder: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Verdict {
    DivisibleEvidence { trials: usize },
    NotDivisible(Box<Witness>),
}

impl Verdict {
    pub fn is_divisible_evidence(&self) -> bool {
        matches!(self, Verdict::DivisibleEvidence { .. })
    }
}

fn mat_strings(m: &Mat<Scalar>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(crate::exact::fmt_scalar).collect())
        .collect()
}

/// Restriction of the first component of `e` to the line `t ↦ p + t·v`,
/// interpolated exactly from `degree + 1` nodes. Nodes where `e` is
/// undefined (e.g. singular `X`) are skipped.
fn restrict_to_line<E: Evaluator + ?Sized>(
    e: &E,
    p: &DoublePoint,
    dx: &Mat<Scalar>,
    dy: &Mat<Scalar>,
    degree: usize,
) -> Result<Vec<Scalar>> {
    let mut nodes = Vec::with_capacity(degree + 1);
    let mut values = Vec::with_capacity(degree + 1);
    let mut t = 0i64;
    let limit = 4 * (degree as i64 + 1) + MAX_RESAMPLES as i64;
    while nodes.len() <= degree {
        if t > limit {
            return Err(Error::ResampleExhausted {
                attempts: t as usize,
                reason: "evaluator undefined along the sampled line".into(),
            });
        }
        let tt = int(t);
        let x = p.x.add(&dx.scale(&tt))?;
        let y = p.y.add(&dy.scale(&tt))?;
        if let Ok(v) = e.eval(&x, &y) {
            nodes.push(tt);
            values.push(v[0].clone());
        }
        t += 1;
    }
    Ok(interpolate(&nodes, &values))
}

/// Probabilistic test that `den` divides `num` as polynomials in the entries
/// of `(X, Y)`.
///
/// Each trial restricts both to a random line through a random point that
/// moves the coordinates in `support`, interpolates the two univariate
/// restrictions exactly (degree bounds `num_degree`, `den_degree`), and
/// divides. A nonzero remainder is a definitive witness of non-divisibility;
/// zero remainders on every trial are evidence of divisibility. When
/// `den` is affine along the line this is the same as evaluating `num` at
/// the root of `den`.
#[allow(clippy::too_many_arguments)]
pub fn check_divisibility<N, D, R>(
    num: &N,
    num_degree: usize,
    den: &D,
    den_degree: usize,
    support: &[Coord],
    trials: usize,
    n: usize,
    rng: &mut R,
) -> Result<Verdict>
where
    N: Evaluator + ?Sized,
    D: Evaluator + ?Sized,
    R: Rng,
{
    if support.is_empty() {
        return Err(Error::Structural("empty coordinate support".into()));
    }
    for _ in 0..trials {
        let mut done = false;
        for _ in 0..MAX_RESAMPLES {
            let p = sample_double_point(n, rng, crate::family::DEFAULT_BOUND);
            let mut dx = Mat::<Scalar>::zeros(n, n);
            let mut dy = Mat::<Scalar>::zeros(n, n);
            let mut direction = Vec::with_capacity(support.len());
            for &c in support {
                let s = if support.len() == 1 { 1 } else { rng.gen_range(-3..=3) };
                match c {
                    Coord::X(i, j) => dx[(i, j)] = int(s),
                    Coord::Y(i, j) => dy[(i, j)] = int(s),
                }
                direction.push((c, s));
            }
            let d_line = restrict_to_line(den, &p, &dx, &dy, den_degree)?;
            if d_line.len() < 2 {
                // constant (or zero) along this line: nothing to test
                continue;
            }
            let n_line = restrict_to_line(num, &p, &dx, &dy, num_degree)?;
            let (_, rem) = div_rem(&n_line, &d_line);
            if !rem.is_empty() {
                return Ok(Verdict::NotDivisible(Box::new(Witness {
                    x: mat_strings(&p.x),
                    y: mat_strings(&p.y),
                    direction,
                    remainder: rem.iter().map(crate::exact::fmt_scalar).collect(),
                })));
            }
            done = true;
            break;
        }
        if !done {
            return Err(Error::ResampleExhausted {
                attempts: MAX_RESAMPLES,
                reason: "divisor constant along every sampled line".into(),
            });
        }
    }
    Ok(Verdict::DivisibleEvidence { trials })
}
