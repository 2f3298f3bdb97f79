mod common;

use common::{frob_dist, matrix, operator, vector};
use marginal_proj::oracle::{build_explicit, explicit_pseudo_inverse, oracle_project, penrose_residuals};
use marginal_proj::{
    outer, AffineMarginalSet, Algorithm, DenseMatrix, DenseVector, HyperBox, MarginalPair, SolverConfig, TieRule,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_max_eigenvalue(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i][j] * s[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if s[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for row in s.iter_mut() {
                    let (skp, skq) = (row[p], row[q]);
                    row[p] = c * skp - sn * skq;
                    row[q] = sn * skp + c * skq;
                }
                let (row_p, row_q) = (s[p].clone(), s[q].clone());
                for k in 0..n {
                    s[p][k] = c * row_p[k] - sn * row_q[k];
                    s[q][k] = sn * row_p[k] + c * row_q[k];
                }
            }
        }
    }
    (0..n).map(|i| s[i][i]).fold(f64::MIN, f64::max)
}

#[test]
fn spectral_norm_against_closed_form_2x2_gram() {
    let mut r = rng(1);
    for _ in 0..200 {
        let k = r.gen_range(1..=5);
        let t = matrix(&mut r, 2, k);
        let g = t.matmul(&t.transpose()).unwrap();
        let (a, b, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 1));
        // largest root of x^2 - (a + d) x + (a d - b^2)
        let lambda = 0.5 * (a + d) + (0.25 * (a - d) * (a - d) + b * b).sqrt();
        let want = lambda.sqrt();
        assert!((t.spectral_norm(1e-10) - want).abs() <= 1e-8 * want, "{t}");
    }
}

#[test]
fn spectral_norm_against_jacobi_3x4() {
    let mut r = rng(2);
    for _ in 0..200 {
        let t = matrix(&mut r, 3, 4);
        let want = jacobi_max_eigenvalue(&t.transpose().matmul(&t).unwrap()).sqrt();
        let got = t.spectral_norm(1e-10);
        assert!((got - want).abs() <= 1e-8 * want, "{got} vs {want}");
        assert!(got <= t.frobenius_norm() * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn frobenius_inner_positive(m in 1usize..6, n in 1usize..6, seed in any::<u64>(), zero in any::<bool>()) {
        let t = if zero { DenseMatrix::zeros(m, n) } else { matrix(&mut rng(seed), m, n) };
        let ip = t.frobenius_inner(&t).unwrap();
        prop_assert!(ip >= 0.0);
        prop_assert_eq!(ip == 0.0, t.max_abs() == 0.0);
    }

    #[test]
    fn outer_adjoint_identity(m in 1usize..6, n in 1usize..6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (v, u, x, y) = (vector(&mut r, m), vector(&mut r, n), vector(&mut r, n), vector(&mut r, m));
        let lhs = outer(&v, &u).mul_vec(&x).unwrap().dot(&y).unwrap();
        let rhs = x.dot(&u).unwrap() * v.dot(&y).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn range_projection_idempotent_self_adjoint(m in 1usize..7, n in 1usize..7, case in 0usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let op = operator(&mut r, m, n, case);
        let p = MarginalPair::new(vector(&mut r, m), vector(&mut r, n));
        let q = MarginalPair::new(vector(&mut r, m), vector(&mut r, n));
        let pp = op.project_range(&p).unwrap();
        let ppp = op.project_range(&pp).unwrap();
        prop_assert!(ppp.sub(&pp).unwrap().norm() <= 1e-12 * (1.0 + p.norm()));
        let a = pp.inner(&q).unwrap();
        let b = p.inner(&op.project_range(&q).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + p.norm() * q.norm()));
        if case == 0 {
            let normal = MarginalPair::new(op.f().clone(), op.e().scale(-1.0));
            prop_assert!(normal.inner(&pp).unwrap().abs() <= 1e-12 * (1.0 + normal.norm()) * p.norm());
        }
    }

    #[test]
    fn range_contains_outputs(m in 1usize..7, n in 1usize..7, case in 0usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let op = operator(&mut r, m, n, case);
        let t = matrix(&mut r, m, n);
        let at = op.apply(&t).unwrap();
        prop_assert!(op.project_range(&at).unwrap().sub(&at).unwrap().norm() <= 1e-12 * (1.0 + at.norm()));
        let lhs = op.pseudo_inverse_apply(&at).unwrap();
        let rhs = op.project_range_adjoint(&t).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12 * (1.0 + t.max_abs()));
    }

    #[test]
    fn penrose_conditions(m in 1usize..7, n in 1usize..7, case in 0usize..4, seed in any::<u64>()) {
        let op = operator(&mut rng(seed), m, n, case);
        let res = penrose_residuals(&build_explicit(&op).into_matrix(), &explicit_pseudo_inverse(&op));
        prop_assert!(res.iter().all(|&x| x <= 1e-10), "{:?}", res);
    }

    #[test]
    fn affine_projection_properties(m in 1usize..7, n in 1usize..7, case in 0usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let op = operator(&mut r, m, n, case);
        let set = AffineMarginalSet::new(op.clone(), vector(&mut r, m), vector(&mut r, n)).unwrap();
        let (t1, t2) = (matrix(&mut r, m, n), matrix(&mut r, m, n));
        let (p1, p2) = (set.project(&t1).unwrap(), set.project(&t2).unwrap());

        let twice = set.project(&p1).unwrap();
        prop_assert!(frob_dist(&twice, &p1) <= 1e-12 * (1.0 + p1.frobenius_norm()));

        prop_assert!(frob_dist(&p1, &p2) <= frob_dist(&t1, &t2) * (1.0 + 1e-12) + 1e-12);

        let resid = t1.sub(&p1).unwrap();
        let back = op.project_range_adjoint(&resid).unwrap();
        prop_assert!(frob_dist(&back, &resid) <= 1e-12 * (1.0 + resid.frobenius_norm()));

        let ip = resid.frobenius_inner(&p2.sub(&set.project(&matrix(&mut r, m, n)).unwrap()).unwrap()).unwrap();
        prop_assert!(ip.abs() <= 1e-10 * (1.0 + resid.frobenius_norm()) * (1.0 + p2.frobenius_norm()));
    }

    #[test]
    fn affine_projection_matches_oracle(m in 1usize..7, n in 1usize..7, case in 0usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let op = operator(&mut r, m, n, case);
        let (s, rr, t) = (vector(&mut r, m), vector(&mut r, n), matrix(&mut r, m, n));
        let got = AffineMarginalSet::new(op.clone(), s.clone(), rr.clone()).unwrap().project(&t).unwrap();
        let want = oracle_project(&op, &s, &rr, &t).unwrap();
        prop_assert!(frob_dist(&got, &want) <= 1e-9);
    }

    #[test]
    fn box_projection_properties(seed in any::<u64>(), integer in any::<bool>()) {
        let mut r = rng(seed);
        let s = DenseVector::new((0..4).map(|_| r.gen_range(0.0..40.0)).collect()).unwrap();
        let c = DenseVector::new((0..5).map(|_| r.gen_range(0.0..40.0)).collect()).unwrap();
        let hbox = HyperBox::from_targets(&s, &c, integer, TieRule::default()).unwrap();
        let t1 = matrix(&mut r, 4, 5).scale(10.0);
        let t2 = matrix(&mut r, 4, 5).scale(10.0);
        let p1 = hbox.project(&t1).unwrap();
        prop_assert!(hbox.contains(&p1));
        prop_assert_eq!(hbox.project(&p1).unwrap(), p1.clone());
        if !integer {
            prop_assert!(frob_dist(&p1, &hbox.project(&t2).unwrap()) <= frob_dist(&t1, &t2));
        }
    }
}

#[test]
fn map_shadow_sequence_is_fejer_monotone() {
    let set =
        AffineMarginalSet::with_unit_sums(marginal_proj::instance::row_sums(), marginal_proj::instance::col_sums())
            .unwrap();
    let target = set.projected_target();
    let hbox = HyperBox::from_targets(&target.row_part, &target.col_part, false, TieRule::default()).unwrap();
    let mut r = rng(3);
    for _ in 0..50 {
        let t0 = DenseMatrix::from_vec(4, 5, (0..20).map(|_| r.gen_range(-100.0..100.0)).collect()).unwrap();
        let mut cfg = SolverConfig::new(Algorithm::AlternatingProjections);
        cfg.record_trace = true;
        let trace = marginal_proj::solve(&set, &hbox, &t0, &cfg).unwrap();
        let x = trace.first_feasible_matrix.expect("convex MAP converges");
        let dists: Vec<f64> = trace.shadows.iter().map(|s| frob_dist(s, &x)).collect();
        for w in dists.windows(2) {
            // x is feasible only up to the stopping tolerance
            assert!(w[1] <= w[0] + 1e-8, "{} > {}", w[1], w[0]);
        }
    }
}
