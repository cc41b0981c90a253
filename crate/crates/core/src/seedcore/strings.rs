use std::collections::BTreeMap;

use serde::Serialize;

use super::{ExtendedExchangeMatrix, Quiver, Seed};
use crate::error::{Error, Result};
use crate::exact::{exact_root, Entry, Scalar};
use crate::family::{DoublePoint, FamilyFunction, Kind};
use crate::poisson::Evaluator;

/// Laurent monomial: quiver vertex index → exponent.
pub type Monomial = BTreeMap<usize, i64>;

fn add_scaled(acc: &mut Monomial, m: &Monomial, k: i64) {
    for (&v, &e) in m {
        let slot = acc.entry(v).or_insert(0);
        *slot += k * e;
        if *slot == 0 {
            acc.remove(&v);
        }
    }
}

/// Evaluates a Laurent monomial on vertex values; `None` if a negative
/// power hits a non-invertible value.
pub fn eval_monomial<T: Entry>(m: &Monomial, values: &[T]) -> Option<T> {
    let mut num = T::one();
    let mut den = T::one();
    for (&v, &e) in m {
        if e >= 0 {
            num = num * values[v].pow(e as u32);
        } else {
            den = den * values[v].pow((-e) as u32);
        }
    }
    num.checked_div(&den)
}

/// Stable τ-monomials `(v_>, v_<)` of row `r`.
pub fn stable_monomials(b: &ExtendedExchangeMatrix, r: usize) -> (Monomial, Monomial) {
    let mut gt = Monomial::new();
    let mut lt = Monomial::new();
    for c in 0..b.cols.len() {
        if b.is_mutable_col(c) {
            continue;
        }
        let e = b.get(r, c);
        if e > 0 {
            gt.insert(b.cols[c], e);
        } else if e < 0 {
            lt.insert(b.cols[c], -e);
        }
    }
    (gt, lt)
}

/// Coefficient string `p_0, …, p_d` at one mutable vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientString {
    pub vertex: usize,
    pub entries: Vec<Monomial>,
}

impl CoefficientString {
    pub fn trivial(vertex: usize) -> Self {
        Self {
            vertex,
            entries: vec![Monomial::new(), Monomial::new()],
        }
    }

    pub fn degree(&self) -> u32 {
        (self.entries.len() - 1) as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.len() == 2 && self.entries.iter().all(BTreeMap::is_empty)
    }

    /// Coefficient mutation at this vertex: `p_r ↦ p_{d-r}`.
    pub fn reversed(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        Self {
            vertex: self.vertex,
            entries,
        }
    }

    /// Exponents of `p̂_r = (p_r v_>^r v_<^{d-r})^{1/d}`. Fails with a
    /// description unless every `p̂_r` is a polynomial monomial.
    pub fn hats(&self, gt: &Monomial, lt: &Monomial) -> std::result::Result<Vec<Monomial>, String> {
        let d = self.degree() as i64;
        let mut out = Vec::with_capacity(self.entries.len());
        for (r, p) in self.entries.iter().enumerate() {
            let mut m = p.clone();
            add_scaled(&mut m, gt, r as i64);
            add_scaled(&mut m, lt, d - r as i64);
            let mut hat = Monomial::new();
            for (&v, &e) in &m {
                if e % d != 0 || e < 0 {
                    return Err(format!("p̂_{r} has exponent {e}/{d} at vertex {v}"));
                }
                hat.insert(v, e / d);
            }
            out.push(hat);
        }
        Ok(out)
    }
}

fn find_vertex(q: &Quiver, kind: Kind) -> Result<usize> {
    let label = FamilyFunction::new(q.n, kind)?;
    q.index_of(&label).ok_or_else(|| Error::UnknownName(label.name()))
}

fn check_hats(q: &Quiver, b: &ExtendedExchangeMatrix, row: usize, s: &CoefficientString) -> Result<()> {
    let (gt, lt) = stable_monomials(b, row);
    s.hats(&gt, &lt)
        .map(|_| ())
        .map_err(|detail| Error::NonPolynomialString {
            vertex: q.vertices[s.vertex].name(),
            detail,
        })
}

/// Strings of the initial seed: trivial except at `φ_11`, where
/// `p_r = c_r^n g_11^{r-n} h_11^{-r}` for `1 ≤ r ≤ n-1`.
pub fn build_strings(q: &Quiver, b: &ExtendedExchangeMatrix) -> Result<Vec<CoefficientString>> {
    let n = q.n;
    let mut out = Vec::with_capacity(b.rows.len());
    for (row, &v) in b.rows.iter().enumerate() {
        let s = match q.vertices[v].label.kind {
            Kind::Phi { k: 1, l: 1 } => {
                let g11 = find_vertex(q, Kind::G { i: 1, j: 1 })?;
                let h11 = find_vertex(q, Kind::H { i: 1, j: 1 })?;
                let mut entries = vec![Monomial::new()];
                for r in 1..n {
                    let c = find_vertex(q, Kind::C { r })?;
                    let mut m = Monomial::new();
                    m.insert(c, n as i64);
                    add_scaled(&mut m, &Monomial::from([(g11, 1)]), r as i64 - n as i64);
                    add_scaled(&mut m, &Monomial::from([(h11, 1)]), -(r as i64));
                    entries.push(m);
                }
                entries.push(Monomial::new());
                CoefficientString { vertex: v, entries }
            }
            _ if b.d[row] != 1 => {
                return Err(Error::Structural(format!(
                    "unexpected order {} at {}",
                    b.d[row],
                    q.vertices[v].name()
                )))
            }
            _ => CoefficientString::trivial(v),
        };
        check_hats(q, b, row, &s)?;
        out.push(s);
    }
    Ok(out)
}

/// Strings of the dual seed: the `ψ_11` string is fixed by `p̂_r = c_r(1,U)`,
/// i.e. `p_r = c_r(1,U)^n v_>^{-r} v_<^{r-n}`.
pub(super) fn dual_strings(q: &Quiver, b: &ExtendedExchangeMatrix) -> Result<Vec<CoefficientString>> {
    let n = q.n as i64;
    let mut out = Vec::with_capacity(b.rows.len());
    for (row, &v) in b.rows.iter().enumerate() {
        let s = if let Kind::Psi { k: 1, l: 1 } = q.vertices[v].label.kind {
            let (gt, lt) = stable_monomials(b, row);
            let mut entries = vec![Monomial::new()];
            for r in 1..n {
                let c = find_vertex(q, Kind::CU { r: r as usize })?;
                let mut m = Monomial::from([(c, n)]);
                add_scaled(&mut m, &gt, -r);
                add_scaled(&mut m, &lt, r - n);
                entries.push(m);
            }
            entries.push(Monomial::new());
            CoefficientString { vertex: v, entries }
        } else {
            CoefficientString::trivial(v)
        };
        check_hats(q, b, row, &s)?;
        out.push(s);
    }
    Ok(out)
}

/// One exact-root certificate: `(p_r v_>^r v_<^{d-r})(p)` has an exact
/// `d`-th root equal to the Casimir `c_r(p)` (up to sign for even `d`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StringRootCheck {
    pub vertex: String,
    pub r: usize,
    pub point: usize,
    #[serde(serialize_with = "crate::harness::ser_scalar")]
    pub product: Scalar,
    #[serde(serialize_with = "crate::harness::ser_opt_scalar")]
    pub root: Option<Scalar>,
    #[serde(serialize_with = "crate::harness::ser_scalar")]
    pub expected: Scalar,
    pub ok: bool,
}

/// Evaluates every nontrivial string at `points` and extracts exact roots.
pub fn verify_string_roots(seed: &Seed, points: &[DoublePoint]) -> Result<Vec<StringRootCheck>> {
    let q = &seed.quiver;
    let mut out = Vec::new();
    for (pi, p) in points.iter().enumerate() {
        let values = seed.eval(&p.x, &p.y)?;
        for (row, s) in seed.strings.iter().enumerate() {
            let d = s.degree();
            if d < 2 {
                continue;
            }
            let (gt, lt) = stable_monomials(&seed.btilde, row);
            for r in 1..d as usize {
                let mut m = s.entries[r].clone();
                add_scaled(&mut m, &gt, r as i64);
                add_scaled(&mut m, &lt, d as i64 - r as i64);
                let product = eval_monomial(&m, &values).ok_or(Error::Vanishing {
                    label: q.vertices[s.vertex].name(),
                    point: pi,
                })?;
                let kind = match seed.space {
                    super::SeedSpace::Dual => Kind::CU { r },
                    _ => Kind::C { r },
                };
                let expected = values[find_vertex(q, kind)?].clone();
                let root = exact_root(&product, d);
                let ok = match &root {
                    Some(rt) => *rt == expected || (d % 2 == 0 && *rt == -expected.clone()),
                    None => false,
                };
                out.push(StringRootCheck {
                    vertex: q.vertices[s.vertex].name(),
                    r,
                    point: pi,
                    product,
                    root,
                    expected,
                    ok,
                });
            }
        }
    }
    Ok(out)
}
