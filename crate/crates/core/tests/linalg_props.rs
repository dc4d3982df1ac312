use grp_core::linalg::{eigen_general, least_squares, linear_solve, DenseMatrix, Lu};
use proptest::prelude::*;

fn matrix(n: usize, m: usize) -> impl Strategy<Value = DenseMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, n * m).prop_map(move |d| DenseMatrix::new(n, m, d).unwrap())
}

fn diag_dominant(n: usize) -> impl Strategy<Value = DenseMatrix<f64>> {
    matrix(n, n).prop_map(move |a| a.add(&DenseMatrix::identity(n).scale(n as f64 + 1.0)))
}

proptest! {
    #[test]
    fn solve_residual_is_small(a in diag_dominant(6), b in prop::collection::vec(-1.0f64..1.0, 6)) {
        let x = linear_solve(&a, &b).unwrap();
        let r = a.mul_vec(&x);
        for (ri, bi) in r.iter().zip(&b) {
            prop_assert!((ri - bi).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_is_two_sided(a in diag_dominant(5)) {
        let inv = Lu::factor(&a).unwrap().inverse();
        let i = DenseMatrix::<f64>::identity(5);
        prop_assert!(a.matmul(&inv).sub(&i).max_abs() < 1e-12);
        prop_assert!(inv.matmul(&a).sub(&i).max_abs() < 1e-12);
    }

    #[test]
    fn least_squares_residual_is_orthogonal(a in matrix(8, 4), b in prop::collection::vec(-1.0f64..1.0, 8)) {
        let rep = least_squares(&a, &b).unwrap();
        prop_assume!(!rep.is_rank_deficient());
        let ax = a.mul_vec(&rep.solution);
        let r: Vec<f64> = ax.iter().zip(&b).map(|(p, q)| p - q).collect();
        let atr = a.transpose().mul_vec(&r);
        prop_assert!(atr.iter().all(|v| v.abs() < 1e-10), "{atr:?}");
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((norm - rep.residual_norm).abs() < 1e-12);
    }

    #[test]
    fn consistent_systems_are_solved_exactly(a in diag_dominant(4), x in prop::collection::vec(-1.0f64..1.0, 4)) {
        let tall = a.vstack(&a.scale(0.5));
        let b = tall.mul_vec(&x);
        let rep = least_squares(&tall, &b).unwrap();
        for (p, q) in rep.solution.iter().zip(&x) {
            prop_assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn eigen_reconstruction(v in diag_dominant(5), d in prop::collection::vec(-3.0f64..3.0, 5)) {
        let mut d = d;
        d.sort_by(f64::total_cmp);
        prop_assume!(d.windows(2).all(|w| w[1] - w[0] > 1e-2));
        let vinv = Lu::factor(&v).unwrap().inverse();
        let a = v.matmul(&DenseMatrix::diag(&d)).matmul(&vinv);
        let e = eigen_general(&a).unwrap();
        for (p, q) in e.values.iter().zip(&d) {
            prop_assert!((p - q).abs() < 1e-9, "{p} {q}");
        }
        let back = e.right.matmul(&DenseMatrix::diag(&e.values)).matmul(&e.left);
        prop_assert!(back.sub(&a).max_abs() < 1e-9);
        prop_assert!(e.left.matmul(&e.right).sub(&DenseMatrix::identity(5)).max_abs() < 1e-9);
    }
}

#[test]
fn works_in_single_precision() {
    let a = DenseMatrix::<f32>::from_rows(&[[4.0f32, 1.0], [1.0, 3.0]]).unwrap();
    let x = linear_solve(&a, &[1.0f32, 2.0]).unwrap();
    assert!((x[0] - 1.0 / 11.0).abs() < 1e-6 && (x[1] - 7.0 / 11.0).abs() < 1e-6);
}
