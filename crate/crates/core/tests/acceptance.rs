//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;

use mlsurf_core::baker_akhiezer::{ba_conjugation_defect, f2_complex};
use mlsurf_core::diffgeo::{
    analytic_gradients, gauss_curvature, gauss_curvature_fd, metric_from_jet, JetMetric,
    MetricField, SpectralMetric,
};
use mlsurf_core::rational_form::Component;
use mlsurf_core::report::{
    run_verification, FamilySpec, GridSpec, TolProfile, VerificationReport, VerifyOptions,
};
use mlsurf_core::spectral_curve::{curve_constants_with_q2, derive_constants, ReducibleCurve};
use mlsurf_core::surface::{spectral_family_jet, ConeFamily, JetField, SpectralFamily};
use mlsurf_core::theta::{quasi_periodicity_defect, riemann_theta, LatticeTruncation};
use mlsurf_core::{PeriodMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPHERE: FamilySpec = FamilySpec::Spectral {
    a: 1.0,
    b: 1.0,
    q1: 2.0,
    gamma_im: 1.0,
};
const THETA_I_ORACLE: f64 = 1.086_434_811_213_308_014_575_316_121_510_223_457_07;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(checks: &[(&str, f64, f64)]) -> Outcome {
    let pass = checks.iter().all(|&(_, v, tol)| v < tol);
    let detail = checks
        .iter()
        .map(|(n, v, tol)| format!("{n}={v:.2e}/{tol:.0e}"))
        .collect::<Vec<_>>()
        .join(" ");
    Outcome { pass, detail }
}

fn grid() -> GridSpec {
    GridSpec::periodic(64, 64)
}

fn verify(spec: FamilySpec, profile: TolProfile) -> VerificationReport {
    let mut o = VerifyOptions::new(grid());
    o.profile = profile;
    run_verification(&spec, &o).expect("valid family")
}

fn max_of(r: &VerificationReport, name: &str) -> f64 {
    r.check(name)
        .unwrap_or_else(|| panic!("no check {name}"))
        .max_defect
}

fn random_curves(n: usize, rng: &mut ChaCha8Rng) -> Vec<ReducibleCurve<f64>> {
    let mut out = Vec::new();
    while out.len() < n {
        let a = rng.gen_range(0.4..2.0);
        let b = rng.gen_range(0.4..2.0);
        let q1 = b * rng.gen_range(1.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let g = rng.gen_range(0.2..2.0);
        if let Ok(c) = derive_constants(a, b, q1, g) {
            out.push(c);
        }
    }
    out
}

fn criterion_1(sphere: &VerificationReport) -> Outcome {
    outcome(&[
        ("norm", max_of(sphere, "gram_norm"), 1e-10),
        ("orthogonality", max_of(sphere, "gram_orthogonality"), 1e-10),
        ("e2ibeta", max_of(sphere, "e2ibeta_plus_one"), 1e-10),
    ])
}

fn criterion_2() -> Outcome {
    let curve = derive_constants(1.0, 1.0, 2.0, 1.0).unwrap();
    let (mut de, mut dg) = (0.0f64, 0.0f64);
    for (x, y) in grid().points() {
        let jet = spectral_family_jet(&curve, x, y);
        let e = jet.phi_x.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let g = jet.phi_y.iter().map(|z| z.norm_sqr()).sum::<f64>();
        de = de.max((e - 1.0).abs());
        dg = dg.max((g - 1.5 * (1.0 + (2.0 * (x - y)).sin())).abs());
    }
    outcome(&[("E", de, 1e-10), ("G", dg, 1e-10)])
}

fn criterion_3(sphere: &VerificationReport, sphere_fd: &VerificationReport) -> Outcome {
    // independent recomputation alongside the report values
    let curve = derive_constants(1.0, 1.0, 2.0, 1.0).unwrap();
    let metric = SpectralMetric::new(&curve);
    let fam = SpectralFamily::new(&curve);
    let (mut ka, mut kf, mut tube) = (0.0f64, 0.0f64, 0.0f64);
    for (x, y) in grid().points() {
        let u = (x - y - 0.75 * PI).rem_euclid(PI);
        let dist = u.min(PI - u) / 2f64.sqrt();
        if dist < 1e-2 {
            tube = tube.max(metric.metric(x, y).1);
            continue;
        }
        ka = ka.max((gauss_curvature(&metric.metric_jet(x, y).unwrap()).unwrap() - 1.0).abs());
        kf = kf.max((gauss_curvature_fd(&JetMetric(&fam), x, y, 1e-4).unwrap() - 1.0).abs());
    }
    outcome(&[
        (
            "K_analytic",
            ka.max(max_of(sphere, "gauss_curvature")),
            1e-4,
        ),
        ("K_fd", kf.max(max_of(sphere_fd, "gauss_curvature")), 1e-3),
        (
            "G_in_tube",
            tube.max(max_of(sphere, "degeneracy_tube")),
            1e-3,
        ),
    ])
}

fn criterion_4(curves: &[ReducibleCurve<f64>], rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for c in curves {
        for _ in 0..10 {
            let (x, y) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let jet = spectral_family_jet(c, x, y);
            let d = mlsurf_core::diffgeo::residue_identity_defects(c, &jet).unwrap();
            worst = d.iter().fold(worst, |m, &v| m.max(v));
        }
    }
    outcome(&[("residue_identities", worst, 1e-9)])
}

fn criterion_5(curves: &[ReducibleCurve<f64>]) -> Outcome {
    let mut worst = 0.0f64;
    for c in curves
        .iter()
        .chain([&derive_constants(1.0, 1.0, 2.0, 1.0).unwrap()])
    {
        let [p1, p2] = c.relative_w2_coefficients().unwrap();
        worst = worst.max(p1).max(p2);
    }
    let forced = curve_constants_with_q2(1.0f64, 1.0, 2.0, 2.0, 1.0);
    let e = forced.omega2.expansion_at_infinity(2).unwrap();
    let control = (e[1] / e[0]).abs();
    let mut o = outcome(&[("w2_rel", worst, 1e-12)]);
    o.pass &= control > 1e-2;
    o.detail += &format!(" control(Q2=+Q1)={control:.4} (>1e-2)");
    o
}

fn criterion_6(sphere: &VerificationReport, cone: &VerificationReport) -> Outcome {
    let mut checks = Vec::new();
    for (tag, r) in [("sphere", sphere), ("cone", cone)] {
        for (name, short) in [
            ("connection_trace", "connection_trace"),
            ("minimality_imaginary_parts", "minimality_im"),
            ("christoffel_b_coefficients", "b_ij"),
        ] {
            checks.push((format!("{tag}.{short}"), max_of(r, name), 1e-8));
        }
    }
    let refs: Vec<(&str, f64, f64)> = checks
        .iter()
        .map(|(n, v, t)| (n.as_str(), *v, *t))
        .collect();
    outcome(&refs)
}

fn criterion_7(sphere: &VerificationReport, cone: &VerificationReport) -> Outcome {
    outcome(&[
        ("sphere.frame", max_of(sphere, "frame_structure"), 1e-6),
        ("cone.frame", max_of(cone, "frame_structure"), 1e-6),
        (
            "sphere.reconstruction",
            max_of(sphere, "frame_reconstruction"),
            1e-5,
        ),
        (
            "cone.reconstruction",
            max_of(cone, "frame_reconstruction"),
            1e-5,
        ),
    ])
}

fn criterion_8(curves: &[ReducibleCurve<f64>], rng: &mut ChaCha8Rng) -> Outcome {
    let (mut conj, mut im_f) = (0.0f64, 0.0f64);
    for c in curves {
        for _ in 0..10 {
            let (x, y) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let p = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            for comp in [Component::First, Component::Second] {
                if let Ok(d) = ba_conjugation_defect(c, x, y, comp, p) {
                    conj = conj.max(d);
                }
            }
            // f₁ = d is a real constant by construction; f₂ is evaluated as a complex sum
            im_f = im_f.max(f2_complex(c, x, y).im.abs());
        }
    }
    outcome(&[("conjugation", conj, 1e-12), ("im_f", im_f, 1e-12)])
}

fn random_period_matrix(rng: &mut ChaCha8Rng) -> PeriodMatrix {
    let g = rng.gen_range(1..=3usize);
    let a: Vec<f64> = (0..g * g).map(|_| rng.gen_range(-0.6..0.6)).collect();
    let x: Vec<f64> = (0..g * g).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let rows: Vec<Vec<C64>> = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| {
                    let re = x[i.min(j) * g + i.max(j)];
                    let im = (0..g).map(|k| a[i * g + k] * a[j * g + k]).sum::<f64>()
                        + if i == j { 0.5 } else { 0.0 };
                    C64::new(re, im)
                })
                .collect()
        })
        .collect();
    PeriodMatrix::new(&rows).unwrap()
}

fn criterion_9(rng: &mut ChaCha8Rng) -> Outcome {
    let theta = |z: &[C64], b: &PeriodMatrix| {
        riemann_theta(z, b, &LatticeTruncation::auto_for(b, z)).unwrap()
    };
    let rel = |a: C64, b: C64| (a - b).norm() / (1.0 + b.norm());
    let (mut per, mut par, mut quasi) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let b = random_period_matrix(rng);
        let g = b.genus();
        let z: Vec<C64> = (0..g)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.3..0.3)))
            .collect();
        let m: Vec<i64> = (0..g).map(|_| rng.gen_range(-1..=1)).collect();
        let base = theta(&z, &b);
        let shifted: Vec<C64> = z.iter().zip(&m).map(|(z, &k)| z + k as f64).collect();
        per = per.max(rel(theta(&shifted, &b), base));
        let neg: Vec<C64> = z.iter().map(|v| -v).collect();
        par = par.max(rel(theta(&neg, &b), base));
        let bm = b.apply_int(&m);
        let zb: Vec<C64> = z.iter().zip(&bm).map(|(a, c)| a + c).collect();
        let trunc = LatticeTruncation::auto_for(&b, &zb);
        quasi = quasi.max(quasi_periodicity_defect(&z, &m, &b, &trunc).unwrap());
    }
    let bi = PeriodMatrix::new(&[vec![C64::new(0.0, 1.0)]]).unwrap();
    let v = theta(&[C64::new(0.0, 0.0)], &bi);
    let oracle = (v - THETA_I_ORACLE).norm() / THETA_I_ORACLE;
    outcome(&[
        ("periodicity", per, 1e-8),
        ("parity", par, 1e-8),
        ("quasi", quasi, 1e-8),
        ("oracle", oracle, 1e-12),
    ])
}

fn criterion_10(cone: &VerificationReport) -> Outcome {
    let fam = ConeFamily::<f64>::new(1, 2).unwrap();
    let mut spread = 0.0f64;
    for (x, y) in [(0.3, 0.2), (0.7, 1.9), (1.2, 4.0), (2.5, 0.4), (-0.9, 3.3)] {
        let m = metric_from_jet(&fam.jet(x, y)).unwrap();
        spread = spread.max((m.v1 - m.v2).abs());
        // v₁, v₂ depend on x only here; make sure the gradient machinery agrees
        let g = analytic_gradients(&fam.jet(x, y)).unwrap();
        assert!(g.v1_y.abs() < 1e-12 && g.v2_y.abs() < 1e-12);
    }
    let mut o = outcome(&[
        ("norm", max_of(cone, "gram_norm"), 1e-10),
        ("orthogonality", max_of(cone, "gram_orthogonality"), 1e-10),
        ("beta", max_of(cone, "beta_constancy"), 1e-8),
    ]);
    o.pass &= spread > 0.1;
    o.detail += &format!(" max|v1-v2|={spread:.3} (>0.1)");
    o
}

/// Brute force from the closed forms of φ₁, φ₂ for the sphere
/// example, independent of the Baker–Akhiezer code path.
fn criterion_11() -> Outcome {
    let s5 = 5f64.sqrt();
    let i = C64::new(0.0, 1.0);
    let reference_phi12 = |x: f64, y: f64| {
        let e = |t: f64| C64::new(0.0, t).exp();
        let p1 =
            C64::new(1.0, 3.0) / (8.0 * s5) * e(-(x - y)) * (-3.0 * i * e(2.0 * x) + e(2.0 * y));
        let p2 = e(-(x + 3.0 * y)) / (8.0 * s5)
            * (C64::new(1.0, -3.0) * e(2.0 * x) + C64::new(9.0, 3.0) * e(2.0 * y));
        (p1, p2)
    };
    let phi3_shape = |x: f64, y: f64| (x - y).cos() - (x - y).sin();
    let mut sum_dev = 0.0f64;
    let mut derived_norm = 0.0f64;
    let mut small_prefactor_norm = 0.0f64;
    let mut impl_dev = 0.0f64;
    let alpha3 = (3.0f64 / 8.0).sqrt();
    let curve = derive_constants(1.0, 1.0, 2.0, 1.0).unwrap();
    for (x, y) in GridSpec::periodic(32, 32).points() {
        let (p1, p2) = reference_phi12(x, y);
        let s = p1.norm_sqr() + p2.norm_sqr();
        sum_dev = sum_dev.max((s - (5.0 + 3.0 * (2.0 * (x - y)).sin()) / 16.0 * 2.0).abs());
        let f3 = phi3_shape(x, y);
        derived_norm = derived_norm.max((s + alpha3 * alpha3 * f3 * f3 - 1.0).abs());
        small_prefactor_norm = small_prefactor_norm.max((s + f3 * f3 / 8.0 - 1.0).abs());
        let jet = spectral_family_jet(&curve, x, y);
        impl_dev = impl_dev
            .max((jet.phi[0] - p1).norm())
            .max((jet.phi[1] - p2).norm())
            .max((jet.phi[2] - alpha3 * f3).norm());
    }
    let mut o = outcome(&[
        ("sum_identity", sum_dev, 1e-14),
        ("norm_with_sqrt(3/8)", derived_norm, 1e-14),
        ("alpha3", (curve.alpha[2] - alpha3).abs(), 1e-15),
        ("implementation_vs_closed_form", impl_dev, 1e-14),
    ]);
    // a √(1/8) prefactor on φ₃ must visibly break ⟨φ,φ⟩ = 1
    o.pass &= small_prefactor_norm > 0.1;
    o.detail += &format!(" sqrt(1/8)_prefactor_defect={small_prefactor_norm:.3} (>0.1)");
    o
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let sphere = verify(SPHERE, TolProfile::Strict);
    let sphere_fd = verify(SPHERE, TolProfile::Fd);
    let cone = verify(FamilySpec::Cone { m: 1, n: 2 }, TolProfile::Strict);
    let curves = random_curves(20, &mut rng);

    let results = vec![
        (
            "worked example: Gram defects and e^{2i beta} = -1",
            criterion_1(&sphere),
        ),
        ("induced metric of the worked example", criterion_2()),
        (
            "Gaussian curvature equals 1",
            criterion_3(&sphere, &sphere_fd),
        ),
        (
            "residue identities on random curves",
            criterion_4(&curves, &mut rng),
        ),
        (
            "w^2 coefficients vanish at both punctures",
            criterion_5(&curves),
        ),
        (
            "minimality criteria and Christoffel invariants",
            criterion_6(&sphere, &cone),
        ),
        ("frame structure", criterion_7(&sphere, &cone)),
        (
            "reality of the Baker-Akhiezer function",
            criterion_8(&curves, &mut rng),
        ),
        ("theta function suite", criterion_9(&mut rng)),
        ("cone family", criterion_10(&cone)),
        ("phi_3 prefactor discrepancy", criterion_11()),
    ];
    let mut all = true;
    for (k, (name, o)) in results.iter().enumerate() {
        println!(
            "criterion {:>2} {} {name}: {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        all &= o.pass;
    }
    // keep the excluded-point bookkeeping visible
    let ex = sphere.check("beta_constancy").map_or(0, |c| c.excluded);
    println!("note: {ex} of {} sphere grid points lie within 1e-2 of G = 0 and are excluded from angle, frame and curvature checks", 64 * 64);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
