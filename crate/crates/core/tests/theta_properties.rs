use mlsurf_core::theta::{quasi_periodicity_defect, riemann_theta, LatticeTruncation};
use mlsurf_core::{PeriodMatrix, C64};
use proptest::prelude::*;

// θ(0 | i) = Σ e^{−πn²} = π^{1/4}/Γ(3/4), from a 40-digit reference evaluation
const THETA_I_ORACLE: f64 = 1.086_434_811_213_308_014_575_316_121_510_223_457_07;

/// Random Riemann matrix: X symmetric in [−½, ½], Y = AAᵀ + ½I.
fn period_matrix() -> impl Strategy<Value = PeriodMatrix> {
    (1usize..=3).prop_flat_map(|g| {
        (
            proptest::collection::vec(-0.5f64..0.5, g * g),
            proptest::collection::vec(-0.6f64..0.6, g * g),
        )
            .prop_map(move |(x, a)| {
                let rows: Vec<Vec<C64>> = (0..g)
                    .map(|i| {
                        (0..g)
                            .map(|j| {
                                let re = if i <= j { x[i * g + j] } else { x[j * g + i] };
                                let mut im: f64 = (0..g).map(|k| a[i * g + k] * a[j * g + k]).sum();
                                if i == j {
                                    im += 0.5;
                                }
                                C64::new(re, im)
                            })
                            .collect()
                    })
                    .collect();
                PeriodMatrix::new(&rows).unwrap()
            })
    })
}

fn with_z() -> impl Strategy<Value = (PeriodMatrix, Vec<C64>, Vec<i64>)> {
    period_matrix().prop_flat_map(|b| {
        let g = b.genus();
        (
            Just(b),
            proptest::collection::vec((-1.0f64..1.0, -0.3f64..0.3), g)
                .prop_map(|v| v.into_iter().map(|(r, i)| C64::new(r, i)).collect()),
            proptest::collection::vec(-1i64..=1, g),
        )
    })
}

fn theta(z: &[C64], b: &PeriodMatrix) -> C64 {
    riemann_theta(z, b, &LatticeTruncation::auto_for(b, z)).unwrap()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn integer_periodicity((b, z, m) in with_z()) {
        let shifted: Vec<C64> = z.iter().zip(&m).map(|(z, &k)| z + k as f64).collect();
        prop_assert!(rel(theta(&shifted, &b), theta(&z, &b)) < 1e-8);
    }

    #[test]
    fn even_function((b, z, _m) in with_z()) {
        let neg: Vec<C64> = z.iter().map(|v| -v).collect();
        prop_assert!(rel(theta(&neg, &b), theta(&z, &b)) < 1e-8);
    }

    #[test]
    fn quasi_periodicity((b, z, m) in with_z()) {
        let bm = b.apply_int(&m);
        let shifted: Vec<C64> = z.iter().zip(&bm).map(|(a, c)| a + c).collect();
        let trunc = LatticeTruncation::auto_for(&b, &shifted);
        let d = quasi_periodicity_defect(&z, &m, &b, &trunc).unwrap();
        prop_assert!(d < 1e-8, "defect {d}");
    }

    #[test]
    fn larger_radius_changes_nothing((b, z, _m) in with_z()) {
        let auto = LatticeTruncation::auto_for(&b, &z);
        let wider = LatticeTruncation::new(auto.radius + 2).unwrap();
        let v0 = riemann_theta(&z, &b, &auto).unwrap();
        let v1 = riemann_theta(&z, &b, &wider).unwrap();
        prop_assert!(rel(v1, v0) < 1e-13);
    }
}

#[test]
fn truncation_error_decreases_with_radius() {
    let b = PeriodMatrix::new(&[vec![C64::new(0.1, 0.6)]]).unwrap();
    let z = [C64::new(0.2, 0.1)];
    let reference = riemann_theta(&z, &b, &LatticeTruncation::new(30).unwrap()).unwrap();
    let errs: Vec<f64> = (1..=6)
        .map(|r| {
            (riemann_theta(&z, &b, &LatticeTruncation::new(r).unwrap()).unwrap() - reference).norm()
        })
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] <= w[0], "{errs:?}");
    }
}

#[test]
fn genus_one_oracle() {
    let b = PeriodMatrix::new(&[vec![C64::new(0.0, 1.0)]]).unwrap();
    let v = theta(&[C64::new(0.0, 0.0)], &b);
    assert!(
        (v.re - THETA_I_ORACLE).abs() / THETA_I_ORACLE < 1e-12,
        "{v}"
    );
    assert!(v.im.abs() < 1e-15);
}

#[test]
fn genus_two_diagonal_factorises() {
    let d = PeriodMatrix::new(&[
        vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        vec![C64::new(0.0, 0.0), C64::new(0.2, 1.3)],
    ])
    .unwrap();
    let z = [C64::new(0.3, 0.05), C64::new(-0.1, 0.2)];
    let one = |b: C64, z: C64| theta(&[z], &PeriodMatrix::new(&[vec![b]]).unwrap());
    let prod = one(C64::new(0.0, 1.0), z[0]) * one(C64::new(0.2, 1.3), z[1]);
    assert!(rel(theta(&z, &d), prod) < 1e-13);
}
