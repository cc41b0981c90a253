//! Poisson–Lie brackets on `GL_n`, on the double `D(GL_n)` and on `GL_n*`.
//!
//! Gradients are exact: each function is differentiated along the `2n²`
//! coordinate directions with jets, and the partial-derivative matrices are
//! turned into left/right gradients
//!
//! ```text
//! ∇^L F = ( X ∇_X F, -Y ∇_Y F ),   ∇^R F = ( ∇_X F X, -∇_Y F Y ),
//! ```
//!
//! where `(∇_X F)_{ji} = ∂F/∂x_{ij}`. The minus signs come from the form
//! `⟨⟨(a,b),(a',b')⟩⟩ = tr(aa') - tr(bb')`, so that
//! `⟨⟨∇^L F, (ξ,η)⟩⟩ = d/dt F(e^{tξ}X, e^{tη}Y)` at `t = 0`.

use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{ratio, Jet, Mat, Scalar};
use crate::family::{
    eval_family, sample_diagonal_point, sample_double_point, sample_dual_point, DoublePoint,
    DualPoint, FamilyFunction,
};

/// Resample budget for sample points on which a family must not vanish.
pub const MAX_RESAMPLES: usize = 32;

/// A vector of functions on `Mat_n × Mat_n` that can be evaluated exactly
/// on scalar and jet inputs.
pub trait Evaluator: Sync {
    fn labels(&self) -> Vec<String>;
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>>;
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>>;

    fn len(&self) -> usize {
        self.labels().len()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Evaluator for [FamilyFunction] {
    fn labels(&self) -> Vec<String> {
        self.iter().map(FamilyFunction::name).collect()
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        eval_family(self, x, y)
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        eval_family(self, x, y)
    }
    fn len(&self) -> usize {
        <[FamilyFunction]>::len(self)
    }
}

impl Evaluator for Vec<FamilyFunction> {
    fn labels(&self) -> Vec<String> {
        self.as_slice().labels()
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        eval_family(self, x, y)
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        eval_family(self, x, y)
    }
}

impl Evaluator for FamilyFunction {
    fn labels(&self) -> Vec<String> {
        vec![self.name()]
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        eval_family(std::slice::from_ref(self), x, y)
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        eval_family(std::slice::from_ref(self), x, y)
    }
}

/// An element `(a, b)` of `D(gl_n) = gl_n ⊕ gl_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiePair {
    pub a: Mat<Scalar>,
    pub b: Mat<Scalar>,
}

impl LiePair {
    pub fn new(a: Mat<Scalar>, b: Mat<Scalar>) -> Self {
        Self { a, b }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(Mat::zeros(n, n), Mat::zeros(n, n))
    }

    /// `⟨⟨(a,b),(a',b')⟩⟩ = tr(aa') - tr(bb')`.
    pub fn form(&self, other: &LiePair) -> Result<Scalar> {
        Ok(self.a.trace_product(&other.a)? - self.b.trace_product(&other.b)?)
    }

    pub fn add(&self, other: &LiePair) -> Result<LiePair> {
        Ok(LiePair::new(self.a.add(&other.a)?, self.b.add(&other.b)?))
    }

    pub fn sub(&self, other: &LiePair) -> Result<LiePair> {
        Ok(LiePair::new(self.a.sub(&other.a)?, self.b.sub(&other.b)?))
    }
}

/// Left and right gradients of one function at one point of the double.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientPair {
    pub left: LiePair,
    pub right: LiePair,
}

impl GradientPair {
    /// Builds gradients from partial derivatives `dx[(i,j)] = ∂F/∂x_ij`,
    /// `dy[(i,j)] = ∂F/∂y_ij`.
    pub fn from_partials(
        x: &Mat<Scalar>,
        y: &Mat<Scalar>,
        dx: &Mat<Scalar>,
        dy: &Mat<Scalar>,
    ) -> Result<Self> {
        let gx = dx.transpose();
        let gy = dy.transpose();
        Ok(Self {
            left: LiePair::new(x.matmul(&gx)?, y.matmul(&gy)?.neg()),
            right: LiePair::new(gx.matmul(x)?, gy.matmul(y)?.neg()),
        })
    }
}

/// Left and right gradients of a function on a single copy of `GL_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct StdGradient {
    pub left: Mat<Scalar>,
    pub right: Mat<Scalar>,
}

/// `R = π_{>0} - π_{<0}`: strictly upper part minus strictly lower part.
pub fn r_std(xi: &Mat<Scalar>) -> Mat<Scalar> {
    Mat::from_fn(xi.rows(), xi.cols(), |i, j| {
        if j > i {
            xi[(i, j)].clone()
        } else if j < i {
            -xi[(i, j)].clone()
        } else {
            Scalar::zero()
        }
    })
}

/// `R₊ = ½(R + Id)`: strictly upper part plus half the diagonal.
pub fn r_plus(xi: &Mat<Scalar>) -> Mat<Scalar> {
    let half = ratio(1, 2);
    Mat::from_fn(xi.rows(), xi.cols(), |i, j| {
        if j > i {
            xi[(i, j)].clone()
        } else if j == i {
            &xi[(i, j)] * &half
        } else {
            Scalar::zero()
        }
    })
}

/// `R₋ = ½(R - Id)`: minus the strictly lower part minus half the diagonal.
pub fn r_minus(xi: &Mat<Scalar>) -> Mat<Scalar> {
    let half = ratio(1, 2);
    Mat::from_fn(xi.rows(), xi.cols(), |i, j| {
        if j < i {
            -xi[(i, j)].clone()
        } else if j == i {
            -(&xi[(i, j)] * &half)
        } else {
            Scalar::zero()
        }
    })
}

/// Splits `v` along `D(gl_n) = d₊ ⊕ d₋` with `d₊ = {(ξ,ξ)}` and
/// `d₋ = {(R₊η, R₋η)}`.
pub fn double_decompose(v: &LiePair) -> Result<(LiePair, LiePair)> {
    let eta = v.a.sub(&v.b)?;
    let rp = r_plus(&eta);
    let rm = r_minus(&eta);
    let xi = v.a.sub(&rp)?;
    Ok((LiePair::new(xi.clone(), xi), LiePair::new(rp, rm)))
}

/// `R_D = π_{d₊} - π_{d₋}`.
pub fn r_double(v: &LiePair) -> Result<LiePair> {
    let (plus, minus) = double_decompose(v)?;
    plus.sub(&minus)
}

pub fn in_d_plus(v: &LiePair) -> bool {
    v.a == v.b
}

pub fn in_d_minus(v: &LiePair) -> bool {
    let n = v.a.rows();
    v.a.is_upper_triangular()
        && v.b.is_lower_triangular()
        && (0..n).all(|i| (v.a[(i, i)].clone() + v.b[(i, i)].clone()).is_zero())
}

fn direction_jets(
    x: &Mat<Scalar>,
    y: &Mat<Scalar>,
    dir: usize,
) -> (Mat<Jet>, Mat<Jet>) {
    let n = x.rows();
    let nn = n * n;
    let (on_x, idx) = if dir < nn { (true, dir) } else { (false, dir - nn) };
    let unit = Mat::<Scalar>::unit(n, idx / n, idx % n);
    if on_x {
        (x.to_jets(Some(&unit)), y.to_jets(None))
    } else {
        (x.to_jets(None), y.to_jets(Some(&unit)))
    }
}

/// Values and partial derivatives `(∂/∂X, ∂/∂Y)` of every component of `e`.
pub fn partials<E: Evaluator + ?Sized>(
    e: &E,
    x: &Mat<Scalar>,
    y: &Mat<Scalar>,
) -> Result<(Vec<Scalar>, Vec<(Mat<Scalar>, Mat<Scalar>)>)> {
    let n = x.rows();
    let values = e.eval(x, y)?;
    let m = values.len();
    let columns: Vec<Vec<Jet>> = (0..2 * n * n)
        .into_par_iter()
        .map(|dir| {
            let (xj, yj) = direction_jets(x, y, dir);
            e.eval_jet(&xj, &yj)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(m);
    for f in 0..m {
        let dx = Mat::from_fn(n, n, |i, j| columns[i * n + j][f].der.clone());
        let dy = Mat::from_fn(n, n, |i, j| columns[n * n + i * n + j][f].der.clone());
        out.push((dx, dy));
    }
    Ok((values, out))
}

/// Values and exact gradient pairs of every component of `e` at `p`.
pub fn gradients_all<E: Evaluator + ?Sized>(
    e: &E,
    p: &DoublePoint,
) -> Result<(Vec<Scalar>, Vec<GradientPair>)> {
    let (values, parts) = partials(e, &p.x, &p.y)?;
    let grads = parts
        .iter()
        .map(|(dx, dy)| GradientPair::from_partials(&p.x, &p.y, dx, dy))
        .collect::<Result<_>>()?;
    Ok((values, grads))
}

/// Gradient pair of a single family function.
pub fn gradients(fun: &FamilyFunction, p: &DoublePoint) -> Result<GradientPair> {
    Ok(gradients_all(fun, p)?.1.remove(0))
}

/// Values and gradients of `X ↦ e(X, X)` on one copy of `GL_n`.
pub fn gradients_std<E: Evaluator + ?Sized>(
    e: &E,
    x: &Mat<Scalar>,
) -> Result<(Vec<Scalar>, Vec<StdGradient>)> {
    let n = x.rows();
    let values = e.eval(x, x)?;
    let m = values.len();
    let columns: Vec<Vec<Jet>> = (0..n * n)
        .into_par_iter()
        .map(|dir| {
            let xj = x.to_jets(Some(&Mat::unit(n, dir / n, dir % n)));
            e.eval_jet(&xj, &xj)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(m);
    for f in 0..m {
        let g = Mat::from_fn(n, n, |i, j| columns[j * n + i][f].der.clone());
        out.push(StdGradient {
            left: x.matmul(&g)?,
            right: g.matmul(x)?,
        });
    }
    Ok((values, out))
}

/// `½(⟨⟨R_D ∇^L F, ∇^L G⟩⟩ - ⟨⟨R_D ∇^R F, ∇^R G⟩⟩)`.
pub fn bracket_from_gradients(f: &GradientPair, g: &GradientPair) -> Result<Scalar> {
    let l = r_double(&f.left)?.form(&g.left)?;
    let r = r_double(&f.right)?.form(&g.right)?;
    Ok((l - r) * ratio(1, 2))
}

/// `½(⟨R ∇^L f, ∇^L g⟩ - ⟨R ∇^R f, ∇^R g⟩)` with the trace form.
pub fn std_bracket_from_gradients(f: &StdGradient, g: &StdGradient) -> Result<Scalar> {
    let l = r_std(&f.left).trace_product(&g.left)?;
    let r = r_std(&f.right).trace_product(&g.right)?;
    Ok((l - r) * ratio(1, 2))
}

fn first_component<E: Evaluator + ?Sized>(e: &E) -> Result<()> {
    if e.is_empty() {
        Err(Error::Structural("empty evaluator".into()))
    } else {
        Ok(())
    }
}

/// `{F, G}_D` at `p`, using the first component of each evaluator.
pub fn bracket_double<A: Evaluator + ?Sized, B: Evaluator + ?Sized>(
    f: &A,
    g: &B,
    p: &DoublePoint,
) -> Result<Scalar> {
    first_component(f)?;
    first_component(g)?;
    let (_, gf) = gradients_all(f, p)?;
    let (_, gg) = gradients_all(g, p)?;
    bracket_from_gradients(&gf[0], &gg[0])
}

/// `{f, g}_r` at `X` for functions of one matrix (evaluated as `e(X, X)`).
pub fn bracket_std<A: Evaluator + ?Sized, B: Evaluator + ?Sized>(
    f: &A,
    g: &B,
    x: &Mat<Scalar>,
) -> Result<Scalar> {
    first_component(f)?;
    first_component(g)?;
    let (_, gf) = gradients_std(f, x)?;
    let (_, gg) = gradients_std(g, x)?;
    std_bracket_from_gradients(&gf[0], &gg[0])
}

/// `{f, g}_*` at `U = B₊⁻¹B₋` for functions of `U`.
///
/// The dual group is a Poisson–Lie subgroup of the double, so the bracket of
/// `(X, Y) ↦ f(X⁻¹Y)` computed in the double at `(B₊, B₋)` is the dual
/// bracket. The evaluators receive `(X, Y)` and must read `U = X⁻¹Y`.
pub fn bracket_dual<A: Evaluator + ?Sized, B: Evaluator + ?Sized>(
    f: &A,
    g: &B,
    q: &DualPoint,
) -> Result<Scalar> {
    bracket_double(f, g, &q.to_double())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BracketKind {
    /// `{,}_D` on `D(GL_n)`.
    Double,
    /// `{,}_r` on `GL_n`, functions evaluated on the diagonal.
    Standard,
    /// `{,}_*` on `GL_n*`, points are dual-group points.
    Dual,
}

impl BracketKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BracketKind::Double => "double",
            BracketKind::Standard => "std",
            BracketKind::Dual => "dual",
        }
    }
}

impl FromStr for BracketKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(BracketKind::Double),
            "std" | "standard" => Ok(BracketKind::Standard),
            "dual" => Ok(BracketKind::Dual),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

/// Skew-symmetric matrix of log-canonical coefficients `ω_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<Scalar>>,
}

impl OmegaMatrix {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        let m = self.size();
        (0..m).all(|i| (0..m).all(|j| self.entries[i][j] == -self.entries[j][i].clone()))
    }

    /// Whether every coefficient is an integer (reported, not required).
    pub fn is_integral(&self) -> bool {
        self.entries.iter().flatten().all(crate::exact::is_integer)
    }
}

/// First pair whose ratio `{f_i,f_j}/(f_i f_j)` differs between points.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub labels: (String, String),
    pub point: usize,
    pub reference: Scalar,
    pub observed: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LogCanonical {
    Constant(OmegaMatrix),
    Violated(Violation),
}

impl LogCanonical {
    pub fn is_constant(&self) -> bool {
        matches!(self, LogCanonical::Constant(_))
    }

    pub fn omega(&self) -> Option<&OmegaMatrix> {
        match self {
            LogCanonical::Constant(o) => Some(o),
            LogCanonical::Violated(_) => None,
        }
    }
}

/// Brackets of every requested pair at one point, normalized by the values.
fn ratios_at_point<E: Evaluator + ?Sized>(
    e: &E,
    p: &DoublePoint,
    kind: BracketKind,
    pairs: &[(usize, usize)],
    point_index: usize,
    labels: &[String],
) -> Result<Vec<Scalar>> {
    let check_values = |values: &[Scalar]| -> Result<()> {
        if let Some(k) = values.iter().position(Zero::is_zero) {
            return Err(Error::Vanishing {
                label: labels[k].clone(),
                point: point_index,
            });
        }
        Ok(())
    };
    match kind {
        BracketKind::Standard => {
            let (values, grads) = gradients_std(e, &p.x)?;
            check_values(&values)?;
            let rl: Vec<Mat<Scalar>> = grads.iter().map(|g| r_std(&g.left)).collect();
            let rr: Vec<Mat<Scalar>> = grads.iter().map(|g| r_std(&g.right)).collect();
            pairs
                .par_iter()
                .map(|&(i, j)| {
                    let l = rl[i].trace_product(&grads[j].left)?;
                    let r = rr[i].trace_product(&grads[j].right)?;
                    Ok((l - r) * ratio(1, 2) / (&values[i] * &values[j]))
                })
                .collect()
        }
        BracketKind::Double | BracketKind::Dual => {
            let (values, grads) = gradients_all(e, p)?;
            check_values(&values)?;
            let rl: Vec<LiePair> = grads.iter().map(|g| r_double(&g.left)).collect::<Result<_>>()?;
            let rr: Vec<LiePair> = grads.iter().map(|g| r_double(&g.right)).collect::<Result<_>>()?;
            pairs
                .par_iter()
                .map(|&(i, j)| {
                    let l = rl[i].form(&grads[j].left)?;
                    let r = rr[i].form(&grads[j].right)?;
                    Ok((l - r) * ratio(1, 2) / (&values[i] * &values[j]))
                })
                .collect()
        }
    }
}

/// Checks constancy of `{f_i,f_j}/(f_i f_j)` over `points` for the listed
/// pairs only. Returns the common ratios or the first violation.
pub fn log_canonical_pairs<E: Evaluator + ?Sized>(
    e: &E,
    points: &[DoublePoint],
    kind: BracketKind,
    pairs: &[(usize, usize)],
) -> Result<std::result::Result<Vec<Scalar>, Violation>> {
    if points.is_empty() {
        return Err(Error::Structural("log-canonical check needs sample points".into()));
    }
    let labels = e.labels();
    let mut reference: Option<Vec<Scalar>> = None;
    for (k, p) in points.iter().enumerate() {
        let ratios = ratios_at_point(e, p, kind, pairs, k, &labels)?;
        match &reference {
            None => reference = Some(ratios),
            Some(r0) => {
                if let Some(idx) = (0..pairs.len()).find(|&t| r0[t] != ratios[t]) {
                    let (i, j) = pairs[idx];
                    return Ok(Err(Violation {
                        i,
                        j,
                        labels: (labels[i].clone(), labels[j].clone()),
                        point: k,
                        reference: r0[idx].clone(),
                        observed: ratios[idx].clone(),
                    }));
                }
            }
        }
    }
    Ok(Ok(reference.unwrap_or_default()))
}

/// Full log-canonicality check: every pair, every point.
pub fn log_canonical_check<E: Evaluator + ?Sized>(
    e: &E,
    points: &[DoublePoint],
    kind: BracketKind,
) -> Result<LogCanonical> {
    let labels = e.labels();
    let m = labels.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    match log_canonical_pairs(e, points, kind, &pairs)? {
        Err(v) => Ok(LogCanonical::Violated(v)),
        Ok(ratios) => {
            let mut entries = vec![vec![Scalar::zero(); m]; m];
            for (&(i, j), w) in pairs.iter().zip(ratios) {
                entries[j][i] = -w.clone();
                entries[i][j] = w;
            }
            Ok(LogCanonical::Constant(OmegaMatrix { labels, entries }))
        }
    }
}

/// Draws `count` points of the kind matching `kind` on which no component
/// of `e` vanishes, resampling each point at most [`MAX_RESAMPLES`] times.
pub fn sample_points<E: Evaluator + ?Sized, R: Rng>(
    e: &E,
    kind: BracketKind,
    n: usize,
    count: usize,
    rng: &mut R,
    bound: i64,
) -> Result<Vec<DoublePoint>> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut found = None;
        for _ in 0..MAX_RESAMPLES {
            let p = match kind {
                BracketKind::Double => sample_double_point(n, rng, bound),
                BracketKind::Standard => sample_diagonal_point(n, rng, bound),
                BracketKind::Dual => sample_dual_point(n, rng, bound).to_double(),
            };
            match e.eval(&p.x, &p.y) {
                Ok(v) if v.iter().all(|s| !s.is_zero()) => {
                    found = Some(p);
                    break;
                }
                _ => continue,
            }
        }
        match found {
            Some(p) => out.push(p),
            None => {
                return Err(Error::ResampleExhausted {
                    attempts: MAX_RESAMPLES,
                    reason: "every sampled point made a function vanish".into(),
                })
            }
        }
    }
    Ok(out)
}
