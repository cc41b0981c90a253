use double_cluster::exact::poly::{div_rem, interpolate, poly_eval, trim};
use double_cluster::exact::{int, Jet, Mat, Scalar};
use double_cluster::family::{eval_family, rng_from_seed, sample_double_point, DoublePoint, FamilyFunction};
use double_cluster::mutation::{mutate_coefficients, mutate_matrix, MutationState};
use double_cluster::poisson::{bracket_double, double_decompose, in_d_minus, in_d_plus, r_double, Evaluator, LiePair};
use double_cluster::seedcore::build_initial_seed;
use double_cluster::Result;
use num_traits::{One, Zero};
use proptest::prelude::*;

mod common;

fn mat_strategy(n: usize) -> impl Strategy<Value = Mat<Scalar>> {
    prop::collection::vec(-6i64..=6, n * n).prop_map(move |v| Mat::from_fn(n, n, |i, j| int(v[i * n + j])))
}

fn pair_strategy() -> impl Strategy<Value = (Mat<Scalar>, Mat<Scalar>)> {
    (1usize..=4).prop_flat_map(|n| (mat_strategy(n), mat_strategy(n)))
}

/// `f · g` as a single evaluator.
struct Product(FamilyFunction, FamilyFunction);

impl Evaluator for Product {
    fn labels(&self) -> Vec<String> {
        vec![format!("{}*{}", self.0.name(), self.1.name())]
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        let v = eval_family(&[self.0, self.1], x, y)?;
        Ok(vec![&v[0] * &v[1]])
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        let v = eval_family(&[self.0, self.1], x, y)?;
        Ok(vec![v[0].clone() * v[1].clone()])
    }
}

/// `f + g` as a single evaluator.
struct Sum(FamilyFunction, FamilyFunction);

impl Evaluator for Sum {
    fn labels(&self) -> Vec<String> {
        vec![format!("{}+{}", self.0.name(), self.1.name())]
    }
    fn eval(&self, x: &Mat<Scalar>, y: &Mat<Scalar>) -> Result<Vec<Scalar>> {
        let v = eval_family(&[self.0, self.1], x, y)?;
        Ok(vec![&v[0] + &v[1]])
    }
    fn eval_jet(&self, x: &Mat<Jet>, y: &Mat<Jet>) -> Result<Vec<Jet>> {
        let v = eval_family(&[self.0, self.1], x, y)?;
        Ok(vec![v[0].clone() + v[1].clone()])
    }
}

fn family_point(n: usize, seed: u64) -> (Vec<FamilyFunction>, DoublePoint) {
    let fam = build_initial_seed(n).unwrap().cluster;
    let mut rng = rng_from_seed(seed);
    loop {
        let p = sample_double_point(n, &mut rng, 7);
        if p.x.det().map(|d| !d.is_zero()).unwrap_or(false) {
            return (fam, p);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative((a, b) in pair_strategy()) {
        let ab = a.matmul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn det_matches_laplace_expansion((a, _) in pair_strategy()) {
        prop_assert_eq!(a.det().unwrap(), common::laplace_det(&common::dense(&a)));
    }

    #[test]
    fn jacobi_formula((a, b) in pair_strategy()) {
        // d/dt det(A + tB) at t = 0 equals tr(adj(A) B)
        let d = a.to_jets(Some(&b)).det().unwrap();
        let expected = a.adjugate().unwrap().matmul(&b).unwrap().trace();
        prop_assert_eq!(d.val, a.det().unwrap());
        prop_assert_eq!(d.der, expected);
    }

    #[test]
    fn adjugate_identity((a, _) in pair_strategy()) {
        let n = a.rows();
        let adj = a.adjugate().unwrap();
        let d = a.det().unwrap();
        let scaled = Mat::<Scalar>::identity(n).scale(&d);
        prop_assert_eq!(a.matmul(&adj).unwrap(), scaled.clone());
        prop_assert_eq!(adj.matmul(&a).unwrap(), scaled);
        if !d.is_zero() {
            let inv = common::inverse(&common::dense(&a));
            prop_assert_eq!(common::dense(&adj), inv.iter().map(|r| r.iter().map(|v| v * &d).collect()).collect::<Vec<Vec<Scalar>>>());
        }
    }

    #[test]
    fn charpoly_annihilates((a, _) in pair_strategy()) {
        // Cayley-Hamilton with the Faddeev-LeVerrier coefficients
        let (coeffs, _) = a.charpoly_adjugate().unwrap();
        let n = a.rows();
        let mut acc = Mat::<Scalar>::zeros(n, n);
        let mut power = Mat::<Scalar>::identity(n);
        for c in &coeffs {
            acc = acc.add(&power.scale(c)).unwrap();
            power = power.matmul(&a).unwrap();
        }
        prop_assert_eq!(acc, Mat::zeros(n, n));
    }

    #[test]
    fn double_decomposition_is_complementary((a, b) in pair_strategy()) {
        let v = LiePair::new(a, b);
        let (plus, minus) = double_decompose(&v).unwrap();
        prop_assert!(in_d_plus(&plus));
        prop_assert!(in_d_minus(&minus));
        prop_assert_eq!(plus.add(&minus).unwrap(), v.clone());
        // R_D is a difference of complementary projections, so R_D² = 1
        prop_assert_eq!(r_double(&r_double(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn interpolation_and_division(
        a in prop::collection::vec(-9i64..=9, 1..6),
        b in prop::collection::vec(-9i64..=9, 1..4),
    ) {
        let a: Vec<Scalar> = a.into_iter().map(int).collect();
        let mut b: Vec<Scalar> = b.into_iter().map(int).collect();
        if b.iter().all(Zero::is_zero) {
            b[0] = Scalar::one();
        }
        let b = trim(b);
        let mut prod = vec![Scalar::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let nodes: Vec<Scalar> = (0..prod.len() as i64).map(int).collect();
        let values: Vec<Scalar> = nodes.iter().map(|t| poly_eval(&prod, t)).collect();
        prop_assert_eq!(trim(interpolate(&nodes, &values)), trim(prod.clone()));
        let (q, r) = div_rem(&prod, &b);
        prop_assert_eq!(trim(q), trim(a));
        prop_assert!(trim(r).iter().all(Zero::is_zero));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bracket_is_antisymmetric_and_leibniz(n in 2usize..=3, seed in 0u64..1000, i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let (fam, p) = family_point(n, seed);
        let (f, g, h) = (fam[i % fam.len()], fam[j % fam.len()], fam[k % fam.len()]);
        let fg = bracket_double(&f, &g, &p).unwrap();
        prop_assert_eq!(bracket_double(&g, &f, &p).unwrap(), -fg.clone());
        let v = eval_family(&[g, h], &p.x, &p.y).unwrap();
        let fh = bracket_double(&f, &h, &p).unwrap();
        let lhs = bracket_double(&f, &Product(g, h), &p).unwrap();
        prop_assert_eq!(lhs, &fg * &v[1] + &v[0] * &fh);
        let sum = bracket_double(&f, &Sum(g, h), &p).unwrap();
        prop_assert_eq!(sum, fg + fh);
    }

    #[test]
    fn matrix_mutation_is_an_involution(n in 2usize..=4, picks in prop::collection::vec(0usize..64, 1..5)) {
        let state = MutationState::new(build_initial_seed(n).unwrap());
        let mutable = state.seed.quiver.mutable();
        let mut b = state.btilde.clone();
        let mut strings = state.strings.clone();
        for p in picks {
            let k = mutable[p % mutable.len()];
            let once = mutate_matrix(&b, k).unwrap();
            prop_assert_ne!(&once, &b);
            prop_assert_eq!(&mutate_matrix(&once, k).unwrap(), &b);
            let s1 = mutate_coefficients(&strings, k);
            prop_assert_eq!(&mutate_coefficients(&s1, k), &strings);
            b = once;
            strings = s1;
        }
    }
}
