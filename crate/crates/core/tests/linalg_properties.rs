use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use perturb_rank::exact_linalg::{
    charpoly_exact, determinant, dot, hurwitz_stable, nullspace, rank_exact, rank_over_field, rref,
    solve_constrained, KernelSide, Polynomial, Rational, RationalMatrix,
};

fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn matrix_strategy(max: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec((-5i64..=5, 1i64..=3), c), r).prop_map(|rows| {
            RationalMatrix::from_rows(
                rows.into_iter()
                    .map(|row| row.into_iter().map(|(p, q)| rational(p, q)).collect())
                    .collect(),
            )
            .unwrap()
        })
    })
}

fn square_strategy(max: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec((-4i64..=4, 1i64..=3), n * n).prop_map(move |entries| {
            RationalMatrix::new(n, n, entries.into_iter().map(|(p, q)| rational(p, q)).collect()).unwrap()
        })
    })
}

/// Square matrices whose columns sum to zero and whose off-diagonal entries
/// are positive: exactly one-dimensional kernel on both sides.
fn generator_strategy() -> impl Strategy<Value = RationalMatrix> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec((1i64..=6, 1i64..=3), n * n).prop_map(move |entries| {
            let mut m = RationalMatrix::from_fn(n, n, |i, j| {
                let (p, q) = entries[i * n + j];
                if i == j {
                    rational(0, 1)
                } else {
                    rational(p, q)
                }
            })
            .to_rows();
            #[allow(clippy::needless_range_loop)]
            for j in 0..n {
                let s: Rational = (0..n).filter(|&i| i != j).map(|i| m[i][j].clone()).sum();
                m[j][j] = -s;
            }
            RationalMatrix::from_rows(m).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_is_transpose_invariant(m in matrix_strategy(6)) {
        prop_assert_eq!(rank_exact(&m), rank_exact(&m.transpose()));
    }

    #[test]
    fn fraction_free_rank_agrees_with_rref(m in matrix_strategy(6)) {
        let (r, pivots) = rref(&m);
        prop_assert_eq!(rank_exact(&m), pivots.len());
        prop_assert_eq!(rank_over_field(&m), pivots.len());
        // Reduced form: each pivot column is a unit vector.
        for (row, &col) in pivots.iter().enumerate() {
            for i in 0..r.rows() {
                let expect = if i == row { rational(1, 1) } else { rational(0, 1) };
                prop_assert_eq!(&r[(i, col)], &expect);
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate(m in matrix_strategy(5)) {
        let right = nullspace(&m, KernelSide::Right);
        prop_assert_eq!(right.len(), m.cols() - rank_exact(&m));
        for v in &right {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == rational(0, 1)));
            let first = v.iter().find(|x| **x != rational(0, 1)).unwrap();
            prop_assert_eq!(first, &rational(1, 1));
        }
        for w in nullspace(&m, KernelSide::Left) {
            prop_assert!(m.vec_mul(&w).unwrap().iter().all(|x| *x == rational(0, 1)));
        }
    }

    #[test]
    fn constrained_solution_satisfies_both_equations(
        a in generator_strategy(),
        z in prop::collection::vec(-5i64..=5, 5),
        c in prop::collection::vec((-5i64..=5, 1i64..=4), 5),
    ) {
        let n = a.rows();
        let z: Vec<Rational> = z[..n].iter().map(|&x| rational(x, 1)).collect();
        let c: Vec<Rational> = c[..n].iter().map(|&(p, q)| rational(p, q)).collect();
        let y = a.mul_vec(&z).unwrap();
        let kernel = nullspace(&a, KernelSide::Right);
        prop_assume!(dot(&kernel[0], &c) != rational(0, 1));
        let x = solve_constrained(&a, &y, &c).unwrap();
        prop_assert_eq!(a.mul_vec(&x).unwrap(), y);
        prop_assert_eq!(dot(&x, &c), rational(0, 1));
    }

    #[test]
    fn charpoly_at_zero_is_signed_determinant(m in square_strategy(6)) {
        let p = charpoly_exact(&m).unwrap();
        let det = determinant(&m).unwrap();
        let sign = if m.rows() % 2 == 0 { rational(1, 1) } else { rational(-1, 1) };
        prop_assert_eq!(p.eval(&rational(0, 1)), sign * det);
        prop_assert_eq!(p.degree(), Some(m.rows()));
        prop_assert_eq!(p.leading().cloned(), Some(rational(1, 1)));
        prop_assert_eq!(-p.coeff(m.rows() - 1), m.trace());
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
}

/// Characteristic polynomial in floating point (Faddeev-LeVerrier), monic,
/// coefficients ascending.
fn float_charpoly(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut mk = vec![vec![0.0; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * mk[l][j]).sum::<f64>();
            }
            next[i][i] += coeffs[n - k + 1];
        }
        mk = next;
        let am_trace: f64 = (0..n).map(|i| (0..n).map(|l| a[i][l] * mk[l][i]).sum::<f64>()).sum();
        coeffs[n - k] = -am_trace / k as f64;
    }
    coeffs
}

/// All complex roots of a monic polynomial (Durand-Kerner).
fn roots(coeffs: &[f64]) -> Vec<C> {
    let n = coeffs.len() - 1;
    let eval = |z: C| coeffs.iter().rev().fold(C(0.0, 0.0), |acc, &c| acc.mul(z).add(C(c, 0.0)));
    let scale = 1.0 + coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            let th = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            C(scale * th.cos() * 0.9, scale * th.sin() * 0.9)
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(C(1.0, 0.0), |acc, j| acc.mul(z[i].sub(z[j])));
            let step = eval(z[i]).div(denom);
            z[i] = z[i].sub(step);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-14 * scale {
            break;
        }
    }
    z
}

#[test]
fn hurwitz_agrees_with_floating_point_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut stable, mut unstable, mut borderline) = (0, 0, 0);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=5);
        // A shift spreads the spectra on both sides of the imaginary axis.
        let shift = rng.gen_range(0..=8) as i64;
        let m = RationalMatrix::from_fn(n, n, |i, j| {
            let base = rational(rng.gen_range(-4..=4), rng.gen_range(1..=2));
            if i == j {
                base - rational(shift, 2)
            } else {
                base
            }
        });
        let exact = hurwitz_stable(&charpoly_exact(&m).unwrap()).unwrap();
        let rs = roots(&float_charpoly(&m.to_f64_rows()));
        let max_re = rs.iter().map(|z| z.0).fold(f64::NEG_INFINITY, f64::max);
        // Roots this close to the axis are beyond what the float oracle can
        // resolve; the exact answer stands on its own there.
        if max_re.abs() < 1e-6 {
            borderline += 1;
            continue;
        }
        assert_eq!(exact, max_re < 0.0, "trial {trial}: {m:?}, max Re = {max_re}");
        if exact {
            stable += 1;
        } else {
            unstable += 1;
        }
    }
    assert!(stable > 200 && unstable > 200, "stable {stable}, unstable {unstable}");
    assert!(borderline < 50, "{borderline} borderline cases");
}

#[test]
fn hurwitz_small_polynomials() {
    assert!(hurwitz_stable(&Polynomial::from_i64(&[2, 1])).unwrap());
    assert!(!hurwitz_stable(&Polynomial::from_i64(&[1, -1, 1])).unwrap());
    assert!(hurwitz_stable(&Polynomial::from_i64(&[9, 6, 1])).unwrap());
    // λ(λ + 1): a root on the axis is not strictly stable.
    assert!(!hurwitz_stable(&Polynomial::from_i64(&[0, 1, 1])).unwrap());
}
