//! Dense univariate polynomials over the rationals, coefficients low to high.

use num_traits::Zero;

use super::Scalar;

/// Drops trailing zero coefficients; the zero polynomial is empty.
pub fn trim(mut p: Vec<Scalar>) -> Vec<Scalar> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn poly_eval(p: &[Scalar], t: &Scalar) -> Scalar {
    p.iter()
        .rev()
        .fold(Scalar::zero(), |acc, c| acc * t + c)
}

/// Interpolating polynomial through `(nodes[i], values[i])` via Newton
/// divided differences. Nodes must be distinct.
pub fn interpolate(nodes: &[Scalar], values: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(nodes.len(), values.len());
    let m = nodes.len();
    let mut dd = values.to_vec();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&nodes[i] - &nodes[i - level]);
        }
    }
    // Horner on the Newton form: p = dd[m-1]; p = p·(t - x_i) + dd[i]
    let mut p: Vec<Scalar> = Vec::new();
    for i in (0..m).rev() {
        let mut next = vec![Scalar::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * &nodes[i];
        }
        next[0] += &dd[i];
        p = next;
    }
    trim(p)
}

/// Quotient and remainder of `num` by a nonzero `den`.
pub fn div_rem(num: &[Scalar], den: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let den = trim(den.to_vec());
    assert!(!den.is_empty(), "division by the zero polynomial");
    let mut r = trim(num.to_vec());
    if r.len() < den.len() {
        return (Vec::new(), r);
    }
    let lead = den.last().unwrap().clone();
    let mut q = vec![Scalar::zero(); r.len() - den.len() + 1];
    while r.len() >= den.len() {
        let shift = r.len() - den.len();
        let c = r.last().unwrap() / &lead;
        for (k, dk) in den.iter().enumerate() {
            r[shift + k] -= &c * dk;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let p = ints(&[3, 0, -2, 5]);
        let nodes = ints(&[-1, 0, 2, 7, 9]);
        let values: Vec<_> = nodes.iter().map(|t| poly_eval(&p, t)).collect();
        assert_eq!(interpolate(&nodes, &values), p);
    }

    #[test]
    fn exact_division() {
        // (t^2 - 1) = (t - 1)(t + 1)
        let (q, r) = div_rem(&ints(&[-1, 0, 1]), &ints(&[-1, 1]));
        assert_eq!(q, ints(&[1, 1]));
        assert!(r.is_empty());
        let (_, r) = div_rem(&ints(&[1, 0, 1]), &ints(&[-1, 1]));
        assert_eq!(r, ints(&[2]));
    }
}
