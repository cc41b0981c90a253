//! Reference implementations used as oracles: dense `Vec<Vec<_>>`
//! matrices, Laplace expansion, and the family functions written directly
//! from their block-matrix definitions.
#![allow(dead_code)]

use double_cluster::exact::{int, Mat, Scalar};
use num_traits::{One, Zero};
use rand::Rng;

pub type Dense = Vec<Vec<Scalar>>;

pub fn dense(m: &Mat<Scalar>) -> Dense {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

pub fn from_dense(d: &Dense) -> Mat<Scalar> {
    Mat::from_rows(d.clone()).unwrap()
}

pub fn ints(rows: &[&[i64]]) -> Dense {
    rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

pub fn random_dense<R: Rng>(n: usize, rng: &mut R, bound: i64) -> Dense {
    (0..n)
        .map(|_| (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect())
        .collect()
}

/// Laplace expansion along the first row.
pub fn laplace_det(m: &Dense) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Scalar::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Dense = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][j] * laplace_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Scalar::zero(), |s, t| s + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

/// Inverse by cofactors.
pub fn inverse(a: &Dense) -> Dense {
    let n = a.len();
    let d = laplace_det(a);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // (i, j) entry of the inverse is the (j, i) cofactor / det
                    let minor: Dense = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c].clone()).collect())
                        .collect();
                    let c = laplace_det(&minor);
                    let c = if (i + j) % 2 == 0 { c } else { -c };
                    c / &d
                })
                .collect()
        })
        .collect()
}

/// Rows `r0..=r1` and columns `c0..=c1`, one-based.
pub fn block(m: &Dense, r0: usize, r1: usize, c0: usize, c1: usize) -> Dense {
    (r0 - 1..r1).map(|i| (c0 - 1..c1).map(|j| m[i][j].clone()).collect()).collect()
}

pub fn hstack(parts: &[Dense]) -> Dense {
    let rows = parts[0].len();
    (0..rows)
        .map(|i| parts.iter().flat_map(|p| p[i].iter().cloned()).collect())
        .collect()
}

/// The sign `s_kl`: periodic in `k + l` (period 2 for even `n`, 4 for odd).
pub fn s_kl(n: usize, k: usize, l: usize) -> i64 {
    let m = n - (k + l);
    let odd_l = l % 2 == 1;
    if n % 2 == 0 {
        if m % 2 == 0 {
            1
        } else if odd_l {
            1
        } else {
            -1
        }
    } else {
        match m % 4 {
            0 => 1,
            1 => {
                if odd_l {
                    -1
                } else {
                    1
                }
            }
            2 => -1,
            _ => {
                if odd_l {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

pub fn g(x: &Dense, i: usize, j: usize) -> Scalar {
    let n = x.len();
    laplace_det(&block(x, i, n, j, j + n - i))
}

pub fn h(y: &Dense, i: usize, j: usize) -> Scalar {
    let n = y.len();
    laplace_det(&block(y, i, i + n - j, j, n))
}

pub fn f(x: &Dense, y: &Dense, k: usize, l: usize) -> Scalar {
    let n = x.len();
    let full = hstack(&[block(x, 1, n, n - k + 1, n), block(y, 1, n, n - l + 1, n)]);
    laplace_det(&block(&full, n - k - l + 1, n, 1, k + l))
}

pub fn phi(x: &Dense, y: &Dense, k: usize, l: usize) -> Scalar {
    let n = x.len();
    let u = mul(&inverse(x), y);
    let mut parts = vec![block(&identity(n), 1, n, n - k + 1, n), block(&u, 1, n, n - l + 1, n)];
    let mut p = u.clone();
    for _ in 2..=(n + 1 - k - l) {
        p = mul(&p, &u);
        parts.push(block(&p, 1, n, n, n));
    }
    let det_x = laplace_det(x);
    let e = n + 1 - k - l;
    let pref = (0..e).fold(Scalar::one(), |acc, _| acc * &det_x);
    int(s_kl(n, k, l)) * pref * laplace_det(&hstack(&parts))
}

/// `c_i` from `det(X + λY) = Σ λ^i s_i c_i`, recovered by Lagrange
/// interpolation in `λ` at `λ = 0..=n`.
pub fn casimir(x: &Dense, y: &Dense, i: usize) -> Scalar {
    let n = x.len();
    let nodes: Vec<Scalar> = (0..=n as i64).map(int).collect();
    let values: Vec<Scalar> = nodes
        .iter()
        .map(|t| {
            let m: Dense = (0..n)
                .map(|r| (0..n).map(|c| &x[r][c] + t * &y[r][c]).collect())
                .collect();
            laplace_det(&m)
        })
        .collect();
    // coefficient of λ^i via the Lagrange basis expanded as polynomials
    let mut coeffs = vec![Scalar::zero(); n + 1];
    for (a, va) in values.iter().enumerate() {
        let mut basis = vec![Scalar::one()];
        let mut denom = Scalar::one();
        for (b, nb) in nodes.iter().enumerate() {
            if a == b {
                continue;
            }
            let mut next = vec![Scalar::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c.clone();
                next[d] -= c * nb;
            }
            basis = next;
            denom *= &nodes[a] - nb;
        }
        for (d, c) in basis.iter().enumerate() {
            coeffs[d] += c * va / &denom;
        }
    }
    let s = if n % 2 == 0 && i % 2 == 1 { -1 } else { 1 };
    int(s) * coeffs[i].clone()
}

/// Value of a family function given by its printed name.
pub fn by_name(x: &Dense, y: &Dense, name: &str) -> Scalar {
    let parts: Vec<&str> = name.split('_').collect();
    let idx: Vec<usize> = parts[1..].iter().map(|s| s.parse().unwrap()).collect();
    match parts[0] {
        "g" => g(x, idx[0], idx[1]),
        "h" => h(y, idx[0], idx[1]),
        "f" => f(x, y, idx[0], idx[1]),
        "phi" => phi(x, y, idx[0], idx[1]),
        "c" => casimir(x, y, idx[0]),
        other => panic!("no reference for {other}"),
    }
}
