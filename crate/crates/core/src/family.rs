//! The function family on `D(GL_n)` and its dual counterpart on `GL_n*`.
//!
//! Index conventions are 1-based, matching the usual notation:
//!
//! - `g_ij = det X[i..=n, j..=j+n-i]` for `1 ≤ j ≤ i ≤ n`
//! - `h_ij = det Y[i..=i+n-j, j..=n]` for `1 ≤ i ≤ j ≤ n`
//! - `f_kl = det [X_last_k | Y_last_l]` restricted to the last `k+l` rows,
//!   for `k, l ≥ 1`, `k + l ≤ n - 1`
//! - `φ_kl = s_kl (det X)^(n-k-l+1) det Φ_kl(U)` with `U = X⁻¹Y` and
//!   `Φ_kl = [I_last_k | U_last_l | U² e_n | … | U^(n-k-l+1) e_n]`
//! - `c_r`: `det(X + λY) = Σ λ^r s_r c_r`, `s_r = (-1)^r` for even `n`, `1` for odd `n`
//! - `ψ_kl(U) = s_kl det Φ_kl(U)`, `h_ij(U)`, `c_r(1, U)`, `det U` on the dual group.

use std::cell::OnceCell;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{int, pencil_coefficients, sign_pow, Entry, Mat, Scalar};

pub const DEFAULT_BOUND: i64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    G { i: usize, j: usize },
    H { i: usize, j: usize },
    F { k: usize, l: usize },
    Phi { k: usize, l: usize },
    C { r: usize },
    Psi { k: usize, l: usize },
    /// `h_ij` evaluated at `U = X⁻¹Y`.
    HU { i: usize, j: usize },
    /// `c_r(1, U)`.
    CU { r: usize },
    DetU,
}

/// A member of the family together with the matrix size it lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyFunction {
    pub n: usize,
    pub kind: Kind,
}

fn bad_index(kind: &'static str, n: usize, detail: String) -> Error {
    Error::InvalidIndex {
        kind,
        detail: format!("{detail} (n = {n})"),
    }
}

impl FamilyFunction {
    pub fn new(n: usize, kind: Kind) -> Result<Self> {
        let ok = match kind {
            Kind::G { i, j } => 1 <= j && j <= i && i <= n,
            Kind::H { i, j } | Kind::HU { i, j } => 1 <= i && i <= j && j <= n,
            Kind::F { k, l } => k >= 1 && l >= 1 && k + l < n,
            Kind::Phi { k, l } | Kind::Psi { k, l } => k >= 1 && l >= 1 && k + l <= n,
            Kind::C { r } | Kind::CU { r } => r >= 1 && r < n,
            Kind::DetU => n >= 1,
        };
        if ok {
            Ok(Self { n, kind })
        } else {
            Err(bad_index(
                kind.tag(),
                n,
                format!("{kind:?} outside the admissible range"),
            ))
        }
    }

    pub fn g(n: usize, i: usize, j: usize) -> Result<Self> {
        Self::new(n, Kind::G { i, j })
    }
    pub fn h(n: usize, i: usize, j: usize) -> Result<Self> {
        Self::new(n, Kind::H { i, j })
    }
    pub fn f(n: usize, k: usize, l: usize) -> Result<Self> {
        Self::new(n, Kind::F { k, l })
    }
    pub fn phi(n: usize, k: usize, l: usize) -> Result<Self> {
        Self::new(n, Kind::Phi { k, l })
    }
    pub fn c(n: usize, r: usize) -> Result<Self> {
        Self::new(n, Kind::C { r })
    }
    pub fn psi(n: usize, k: usize, l: usize) -> Result<Self> {
        Self::new(n, Kind::Psi { k, l })
    }

    pub fn is_casimir(&self) -> bool {
        matches!(self.kind, Kind::C { .. } | Kind::CU { .. })
    }

    /// Total degree as a polynomial in the entries of `(X, Y)`; `None` for
    /// the functions of `U = X⁻¹Y`, which are not polynomial there.
    pub fn degree(&self) -> Option<usize> {
        let n = self.n;
        match self.kind {
            Kind::G { i, .. } => Some(n - i + 1),
            Kind::H { j, .. } => Some(n - j + 1),
            Kind::F { k, l } => Some(k + l),
            // (det X)^{n-k-l+1} times a degree-0 function of U
            Kind::Phi { k, l } => Some(n * (n - k - l + 1)),
            Kind::C { .. } => Some(n),
            _ => None,
        }
    }

    /// Stable display name such as `g_2_1`, `phi_1_1`, `c_2`, `detU`.
    pub fn name(&self) -> String {
        match self.kind {
            Kind::G { i, j } => format!("g_{i}_{j}"),
            Kind::H { i, j } => format!("h_{i}_{j}"),
            Kind::F { k, l } => format!("f_{k}_{l}"),
            Kind::Phi { k, l } => format!("phi_{k}_{l}"),
            Kind::C { r } => format!("c_{r}"),
            Kind::Psi { k, l } => format!("psi_{k}_{l}"),
            Kind::HU { i, j } => format!("hU_{i}_{j}"),
            Kind::CU { r } => format!("cU_{r}"),
            Kind::DetU => "detU".to_string(),
        }
    }

    /// Parses `phi_1_1`, `phi11`, `g21`, `c_2`, `detU`, … for size `n`.
    ///
    /// The compact digit form needs single-digit indices.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let unknown = || Error::UnknownName(text.to_string());
        let t = text.trim();
        if t.eq_ignore_ascii_case("detu") {
            return Self::new(n, Kind::DetU);
        }
        let split = t
            .find(|c: char| c.is_ascii_digit() || c == '_')
            .ok_or_else(unknown)?;
        let (tag, rest) = t.split_at(split);
        let idx: Vec<usize> = if rest.contains('_') {
            rest.split('_')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|_| unknown()))
                .collect::<Result<_>>()?
        } else {
            rest.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(unknown))
                .collect::<Result<_>>()?
        };
        let two = |f: fn(usize, usize) -> Kind| -> Result<Kind> {
            match idx.as_slice() {
                [a, b] => Ok(f(*a, *b)),
                _ => Err(unknown()),
            }
        };
        let one = |f: fn(usize) -> Kind| -> Result<Kind> {
            match idx.as_slice() {
                [a] => Ok(f(*a)),
                _ => Err(unknown()),
            }
        };
        let kind = match tag {
            "g" => two(|i, j| Kind::G { i, j })?,
            "h" => two(|i, j| Kind::H { i, j })?,
            "f" => two(|k, l| Kind::F { k, l })?,
            "phi" => two(|k, l| Kind::Phi { k, l })?,
            "psi" => two(|k, l| Kind::Psi { k, l })?,
            "hU" | "hu" => two(|i, j| Kind::HU { i, j })?,
            "c" => one(|r| Kind::C { r })?,
            "cU" | "cu" => one(|r| Kind::CU { r })?,
            _ => return Err(unknown()),
        };
        Self::new(n, kind)
    }
}

impl Kind {
    fn tag(&self) -> &'static str {
        match self {
            Kind::G { .. } => "g",
            Kind::H { .. } => "h",
            Kind::F { .. } => "f",
            Kind::Phi { .. } => "phi",
            Kind::C { .. } => "c",
            Kind::Psi { .. } => "psi",
            Kind::HU { .. } => "hU",
            Kind::CU { .. } => "cU",
            Kind::DetU => "detU",
        }
    }
}

impl fmt::Display for FamilyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Sign `s_kl` entering `φ_kl` and `ψ_kl`.
///
/// Depends on `m = n - k - l` and on `l`: for even `n` with period 2 in `m`
/// (`+1`, `(-1)^(l+1)`), for odd `n` with period 4 (`+1`, `(-1)^l`, `-1`,
/// `(-1)^(l+1)`).
pub fn sign_skl(n: usize, k: usize, l: usize) -> Result<i64> {
    if k == 0 || l == 0 || k + l > n {
        return Err(bad_index("s_kl", n, format!("(k, l) = ({k}, {l})")));
    }
    let m = n - k - l;
    let s = if n % 2 == 0 {
        if m % 2 == 0 {
            1
        } else {
            sign_pow(l + 1)
        }
    } else {
        match m % 4 {
            0 => 1,
            1 => sign_pow(l),
            2 => -1,
            _ => sign_pow(l + 1),
        }
    };
    Ok(s)
}

/// Sign `s_r` relating the pencil coefficients to the Casimirs `c_r`.
pub fn casimir_sign(n: usize, r: usize) -> i64 {
    if n % 2 == 0 {
        sign_pow(r)
    } else {
        1
    }
}

/// All of `F_n` in canonical order: g, h, f, φ, then the Casimirs.
pub fn enumerate_family(n: usize) -> Result<Vec<FamilyFunction>> {
    if n < 2 {
        return Err(Error::UnsupportedSize(n));
    }
    let mut out = Vec::with_capacity(2 * n * n);
    for i in 1..=n {
        for j in 1..=i {
            out.push(FamilyFunction::g(n, i, j)?);
        }
    }
    for i in 1..=n {
        for j in i..=n {
            out.push(FamilyFunction::h(n, i, j)?);
        }
    }
    for k in 1..n {
        for l in 1..n - k {
            out.push(FamilyFunction::f(n, k, l)?);
        }
    }
    for k in 1..n {
        for l in 1..=n - k {
            out.push(FamilyFunction::phi(n, k, l)?);
        }
    }
    for r in 1..n {
        out.push(FamilyFunction::c(n, r)?);
    }
    Ok(out)
}

/// Dual cluster functions: ψ, `h_ij(U)` for `2 ≤ i ≤ j ≤ n`, `det U`, `c_r(1,U)`.
pub fn enumerate_dual_family(n: usize) -> Result<Vec<FamilyFunction>> {
    if n < 2 {
        return Err(Error::UnsupportedSize(n));
    }
    let mut out = Vec::new();
    for k in 1..n {
        for l in 1..=n - k {
            out.push(FamilyFunction::psi(n, k, l)?);
        }
    }
    for i in 2..=n {
        for j in i..=n {
            out.push(FamilyFunction::new(n, Kind::HU { i, j })?);
        }
    }
    out.push(FamilyFunction::new(n, Kind::DetU)?);
    for r in 1..n {
        out.push(FamilyFunction::new(n, Kind::CU { r })?);
    }
    Ok(out)
}

/// Evaluation context at one point `(X, Y)`; shares `U = X⁻¹Y`, Krylov
/// columns and pencil coefficients between family members.
pub struct FamilyContext<'a, T: Entry> {
    n: usize,
    x: &'a Mat<T>,
    y: &'a Mat<T>,
    det_x: OnceCell<Result<T>>,
    u: OnceCell<Result<Mat<T>>>,
    krylov: OnceCell<Result<Vec<Vec<T>>>>,
    pencil_xy: OnceCell<Result<Vec<T>>>,
    pencil_u: OnceCell<Result<Vec<T>>>,
}

impl<'a, T: Entry> FamilyContext<'a, T> {
    pub fn new(x: &'a Mat<T>, y: &'a Mat<T>) -> Result<Self> {
        if !x.is_square() || x.rows() != y.rows() || !y.is_square() {
            return Err(Error::Dimension {
                op: "FamilyContext::new",
                detail: format!("{}x{} and {}x{}", x.rows(), x.cols(), y.rows(), y.cols()),
            });
        }
        Ok(Self {
            n: x.rows(),
            x,
            y,
            det_x: OnceCell::new(),
            u: OnceCell::new(),
            krylov: OnceCell::new(),
            pencil_xy: OnceCell::new(),
            pencil_u: OnceCell::new(),
        })
    }

    fn det_x(&self) -> Result<T> {
        self.det_x.get_or_init(|| self.x.det()).clone()
    }

    pub fn u(&self) -> Result<&Mat<T>> {
        self.u
            .get_or_init(|| self.x.inverse()?.matmul(self.y))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `U^p e_n` for `p = 0..=n`.
    fn krylov(&self) -> Result<&Vec<Vec<T>>> {
        self.krylov
            .get_or_init(|| {
                let u = self.u()?;
                let n = self.n;
                let mut cols = Vec::with_capacity(n + 1);
                let mut v: Vec<T> = (0..n)
                    .map(|i| if i + 1 == n { T::one() } else { T::zero() })
                    .collect();
                cols.push(v.clone());
                for _ in 0..n {
                    v = u.mul_vec(&v)?;
                    cols.push(v.clone());
                }
                Ok(cols)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn phi_matrix_det(&self, k: usize, l: usize) -> Result<T> {
        let n = self.n;
        let u = self.u()?;
        let kry = self.krylov()?;
        let mut cols: Vec<Vec<T>> = Vec::with_capacity(n);
        for c in n - k..n {
            cols.push((0..n).map(|i| if i == c { T::one() } else { T::zero() }).collect());
        }
        for c in n - l..n {
            cols.push(u.column(c));
        }
        for p in 2..=n - k - l + 1 {
            cols.push(kry[p].clone());
        }
        Mat::from_columns(&cols)?.det()
    }

    fn pencil(&self, dual: bool) -> Result<&Vec<T>> {
        let cell = if dual { &self.pencil_u } else { &self.pencil_xy };
        cell.get_or_init(|| {
            if dual {
                pencil_coefficients(&Mat::identity(self.n), self.u()?)
            } else {
                pencil_coefficients(self.x, self.y)
            }
        })
        .as_ref()
        .map_err(Clone::clone)
    }

    fn h_of(&self, m: &Mat<T>, i: usize, j: usize) -> Result<T> {
        let n = self.n;
        let rows: Vec<usize> = (i - 1..i + n - j).collect();
        let cols: Vec<usize> = (j - 1..n).collect();
        m.submatrix(&rows, &cols)?.det()
    }

    pub fn eval(&self, fun: &FamilyFunction) -> Result<T> {
        let n = self.n;
        if fun.n != n {
            return Err(Error::Dimension {
                op: "FamilyContext::eval",
                detail: format!("{} defined for n = {}, point has n = {n}", fun, fun.n),
            });
        }
        match fun.kind {
            Kind::G { i, j } => {
                let rows: Vec<usize> = (i - 1..n).collect();
                let cols: Vec<usize> = (j - 1..j + n - i).collect();
                self.x.submatrix(&rows, &cols)?.det()
            }
            Kind::H { i, j } => self.h_of(self.y, i, j),
            Kind::F { k, l } => {
                let rows: Vec<usize> = (n - k - l..n).collect();
                let mut cols: Vec<Vec<T>> = Vec::with_capacity(k + l);
                for c in n - k..n {
                    cols.push(rows.iter().map(|&r| self.x[(r, c)].clone()).collect());
                }
                for c in n - l..n {
                    cols.push(rows.iter().map(|&r| self.y[(r, c)].clone()).collect());
                }
                Mat::from_columns(&cols)?.det()
            }
            Kind::Phi { k, l } => {
                let s = sign_skl(n, k, l)?;
                let pref = self.det_x()?.pow((n - k - l + 1) as u32);
                Ok(pref * self.phi_matrix_det(k, l)?.scale(&int(s)))
            }
            Kind::Psi { k, l } => {
                let s = sign_skl(n, k, l)?;
                Ok(self.phi_matrix_det(k, l)?.scale(&int(s)))
            }
            Kind::C { r } => Ok(self.pencil(false)?[r].scale(&int(casimir_sign(n, r)))),
            Kind::CU { r } => Ok(self.pencil(true)?[r].scale(&int(casimir_sign(n, r)))),
            Kind::HU { i, j } => self.h_of(self.u()?, i, j),
            Kind::DetU => self.u()?.det(),
        }
    }

    /// Raw coefficient of `λ^r` in `det(X + λY)`.
    pub fn pencil_coefficient(&self, r: usize) -> Result<T> {
        self.pencil(false)?
            .get(r)
            .cloned()
            .ok_or_else(|| bad_index("pencil", self.n, format!("r = {r}")))
    }
}

/// Evaluates a list of family functions at `(X, Y)`, sharing intermediates.
pub fn eval_family<T: Entry>(
    funs: &[FamilyFunction],
    x: &Mat<T>,
    y: &Mat<T>,
) -> Result<Vec<T>> {
    let ctx = FamilyContext::new(x, y)?;
    funs.iter().map(|f| ctx.eval(f)).collect()
}

/// Evaluates one function at `(X, Y)`.
pub fn eval<T: Entry>(fun: &FamilyFunction, x: &Mat<T>, y: &Mat<T>) -> Result<T> {
    FamilyContext::new(x, y)?.eval(fun)
}

/// Evaluates a dual-group function directly at `U` (taking `X = 1`, `Y = U`).
pub fn eval_at_u<T: Entry>(fun: &FamilyFunction, u: &Mat<T>) -> Result<T> {
    let id = Mat::identity(u.rows());
    FamilyContext::new(&id, u)?.eval(fun)
}

/// A point `(X, Y)` of the double with both components invertible.
#[derive(Clone, Debug, PartialEq)]
pub struct DoublePoint {
    pub x: Mat<Scalar>,
    pub y: Mat<Scalar>,
}

impl DoublePoint {
    pub fn new(x: Mat<Scalar>, y: Mat<Scalar>) -> Result<Self> {
        if !x.is_square() || x.rows() != y.rows() || !y.is_square() {
            return Err(Error::Dimension {
                op: "DoublePoint::new",
                detail: "X and Y must be square of equal size".into(),
            });
        }
        for (m, name) in [(&x, "X"), (&y, "Y")] {
            let det = m.det()?;
            if det.is_zero() {
                return Err(Error::Singular {
                    op: if name == "X" { "DoublePoint::new (X)" } else { "DoublePoint::new (Y)" },
                    det,
                });
            }
        }
        Ok(Self { x, y })
    }

    /// The point `(X, X)` of the diagonal subgroup.
    pub fn diagonal(x: Mat<Scalar>) -> Result<Self> {
        Self::new(x.clone(), x)
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn u(&self) -> Result<Mat<Scalar>> {
        self.x.inverse()?.matmul(&self.y)
    }

    pub fn eval(&self, fun: &FamilyFunction) -> Result<Scalar> {
        eval(fun, &self.x, &self.y)
    }
}

/// A point `(B₊, B₋)` of the dual group: upper/lower triangular with
/// reciprocal diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPoint {
    pub bplus: Mat<Scalar>,
    pub bminus: Mat<Scalar>,
}

impl DualPoint {
    pub fn new(bplus: Mat<Scalar>, bminus: Mat<Scalar>) -> Result<Self> {
        let n = bplus.rows();
        if !bplus.is_square() || !bminus.is_square() || bminus.rows() != n {
            return Err(Error::Dimension {
                op: "DualPoint::new",
                detail: "components must be square of equal size".into(),
            });
        }
        if !bplus.is_upper_triangular() || !bminus.is_lower_triangular() {
            return Err(Error::Structural(
                "dual point needs upper-triangular B+ and lower-triangular B-".into(),
            ));
        }
        for i in 0..n {
            if !(bplus[(i, i)].clone() * bminus[(i, i)].clone()).is_one() {
                return Err(Error::Structural(format!(
                    "diagonal entries {i} of B+ and B- are not reciprocal"
                )));
            }
        }
        Ok(Self { bplus, bminus })
    }

    pub fn n(&self) -> usize {
        self.bplus.rows()
    }

    /// `U = B₊⁻¹ B₋`.
    pub fn u(&self) -> Result<Mat<Scalar>> {
        self.bplus.inverse()?.matmul(&self.bminus)
    }

    pub fn to_double(&self) -> DoublePoint {
        DoublePoint {
            x: self.bplus.clone(),
            y: self.bminus.clone(),
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_int_matrix<R: Rng>(n: usize, rng: &mut R, bound: i64) -> Mat<Scalar> {
    Mat::from_fn(n, n, |_, _| int(rng.gen_range(-bound..=bound)))
}

/// Integer point of the double with entries in `[-bound, bound]`, resampled
/// until both determinants are nonzero.
pub fn sample_double_point<R: Rng>(n: usize, rng: &mut R, bound: i64) -> DoublePoint {
    let bound = bound.max(1);
    loop {
        let x = random_int_matrix(n, rng, bound);
        let y = random_int_matrix(n, rng, bound);
        if let Ok(p) = DoublePoint::new(x, y) {
            return p;
        }
    }
}

/// Integer point `(X, X)` on the diagonal with `det X ≠ 0`.
pub fn sample_diagonal_point<R: Rng>(n: usize, rng: &mut R, bound: i64) -> DoublePoint {
    let bound = bound.max(1);
    loop {
        let x = random_int_matrix(n, rng, bound);
        if let Ok(p) = DoublePoint::diagonal(x) {
            return p;
        }
    }
}

/// Random point of the dual group.
pub fn sample_dual_point<R: Rng>(n: usize, rng: &mut R, bound: i64) -> DualPoint {
    let bound = bound.max(1);
    let mut diag = Vec::with_capacity(n);
    while diag.len() < n {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            diag.push(v);
        }
    }
    let mut bplus = Mat::<Scalar>::zeros(n, n);
    let mut bminus = Mat::<Scalar>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if j > i {
                bplus[(i, j)] = int(rng.gen_range(-bound..=bound));
            } else if j < i {
                bminus[(i, j)] = int(rng.gen_range(-bound..=bound));
            }
        }
        bplus[(i, i)] = int(diag[i]);
        bminus[(i, i)] = int(diag[i]).recip();
    }
    DualPoint { bplus, bminus }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Jet;

    #[test]
    fn sign_anchor_rows() {
        for n in 2..9 {
            for l in 1..n {
                assert_eq!(sign_skl(n, n - l, l).unwrap(), 1);
            }
        }
        assert_eq!(sign_skl(4, 1, 2).unwrap(), -1);
        assert_eq!(sign_skl(5, 2, 1).unwrap(), -1);
        // odd n: k+l = n-1 gives (-1)^l, k+l = n-3 gives (-1)^(l+1)
        assert_eq!(sign_skl(7, 4, 2).unwrap(), 1);
        assert_eq!(sign_skl(7, 5, 1).unwrap(), -1);
        assert_eq!(sign_skl(7, 2, 2).unwrap(), -1);
        assert_eq!(sign_skl(7, 3, 1).unwrap(), 1);
        // period 4 for odd n: k+l = n-4 behaves like k+l = n
        assert_eq!(sign_skl(7, 1, 2).unwrap(), 1);
        // period 2 for even n
        assert_eq!(sign_skl(6, 1, 2).unwrap(), -1);
        assert_eq!(sign_skl(6, 2, 2).unwrap(), 1);
        assert!(sign_skl(4, 3, 2).is_err());
        assert!(sign_skl(4, 0, 2).is_err());
    }

    #[test]
    fn family_counts() {
        let f2 = enumerate_family(2).unwrap();
        let names: Vec<String> = f2.iter().map(|f| f.name()).collect();
        assert_eq!(
            names,
            ["g_1_1", "g_2_1", "g_2_2", "h_1_1", "h_1_2", "h_2_2", "phi_1_1", "c_1"]
        );
        for n in 2..8 {
            let fam = enumerate_family(n).unwrap();
            assert_eq!(fam.len(), 2 * n * n);
            let count = |p: fn(&Kind) -> bool| fam.iter().filter(|f| p(&f.kind)).count();
            assert_eq!(count(|k| matches!(k, Kind::G { .. })), n * (n + 1) / 2);
            assert_eq!(count(|k| matches!(k, Kind::H { .. })), n * (n + 1) / 2);
            assert_eq!(count(|k| matches!(k, Kind::F { .. })), (n - 1) * (n - 2) / 2);
            assert_eq!(count(|k| matches!(k, Kind::Phi { .. })), n * (n - 1) / 2);
            assert_eq!(fam.iter().filter(|f| !f.is_casimir()).count(), 2 * n * n - n + 1);
        }
        assert!(matches!(enumerate_family(1), Err(Error::UnsupportedSize(1))));
    }

    #[test]
    fn parse_names() {
        let n = 4;
        for f in enumerate_family(n).unwrap().into_iter().chain(enumerate_dual_family(n).unwrap()) {
            assert_eq!(FamilyFunction::parse(n, &f.name()).unwrap(), f);
        }
        assert_eq!(FamilyFunction::parse(4, "phi11").unwrap(), FamilyFunction::phi(4, 1, 1).unwrap());
        assert_eq!(FamilyFunction::parse(4, "g21").unwrap(), FamilyFunction::g(4, 2, 1).unwrap());
        assert!(FamilyFunction::parse(4, "g12").is_err());
        assert!(FamilyFunction::parse(4, "zeta_1").is_err());
        assert!(FamilyFunction::f(4, 2, 2).is_err());
    }

    #[test]
    fn minors_at_identity() {
        let n = 4;
        let id = Mat::<Scalar>::identity(n);
        for i in 1..=n {
            for j in 1..=i {
                let v = eval(&FamilyFunction::g(n, i, j).unwrap(), &id, &id).unwrap();
                assert_eq!(v, int(if i == j { 1 } else { 0 }));
            }
        }
    }

    #[test]
    fn casimirs_at_identity_pair() {
        let id = Mat::<Scalar>::identity(2);
        let c1 = eval(&FamilyFunction::c(2, 1).unwrap(), &id, &id).unwrap();
        assert_eq!(c1, int(-2));
        let ctx = FamilyContext::new(&id, &id).unwrap();
        assert_eq!(ctx.pencil_coefficient(0).unwrap(), int(1));
        assert_eq!(ctx.pencil_coefficient(2).unwrap(), int(1));
    }

    #[test]
    fn phi_needs_invertible_x() {
        let x = Mat::<Scalar>::zeros(3, 3);
        let y = Mat::<Scalar>::identity(3);
        let err = eval(&FamilyFunction::phi(3, 1, 1).unwrap(), &x, &y).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
        // g/h/f never need the inverse
        assert!(eval(&FamilyFunction::f(3, 1, 1).unwrap(), &x, &y).is_ok());
    }

    #[test]
    fn samplers_are_deterministic() {
        let a = sample_double_point(3, &mut rng_from_seed(11), DEFAULT_BOUND);
        let b = sample_double_point(3, &mut rng_from_seed(11), DEFAULT_BOUND);
        let c = sample_double_point(3, &mut rng_from_seed(12), DEFAULT_BOUND);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(!a.x.det().unwrap().is_zero() && !a.y.det().unwrap().is_zero());
    }

    #[test]
    fn dual_point_diagonals_reciprocal() {
        let mut rng = rng_from_seed(5);
        for n in 2..6 {
            let q = sample_dual_point(n, &mut rng, DEFAULT_BOUND);
            for i in 0..n {
                assert!((q.bplus[(i, i)].clone() * q.bminus[(i, i)].clone()).is_one());
            }
            assert!(DualPoint::new(q.bplus.clone(), q.bminus.clone()).is_ok());
            assert!(!q.u().unwrap().det().unwrap().is_zero());
        }
    }

    #[test]
    fn g_depends_only_on_x() {
        let p = sample_double_point(3, &mut rng_from_seed(2), DEFAULT_BOUND);
        let x = p.x.to_jets(None);
        let y = p.y.to_jets(Some(&Mat::from_fn(3, 3, |i, j| int((i * 3 + j) as i64 + 1))));
        for f in enumerate_family(3).unwrap() {
            let v: Jet = eval(&f, &x, &y).unwrap();
            if matches!(f.kind, Kind::G { .. }) {
                assert!(v.der.is_zero(), "{f}");
            }
        }
    }
}
